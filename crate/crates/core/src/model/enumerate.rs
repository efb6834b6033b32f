//! Exhaustive enumeration of admissible graphs.

use crate::error::{Error, Result};
use crate::model::graph::{PaGraph, Vertex, WeightMode};

/// Number of admissible labeled graphs with parameters `(m, n)`:
/// the product over `t = 2..=n` of the number of size-`m` multisets drawn
/// from `t - 1` vertices. Saturates at `u128::MAX`.
pub fn admissible_count(m: u32, n: u32) -> u128 {
    let mut total: u128 = 1;
    for t in 2..=u128::from(n) {
        // C(t - 1 + m - 1, m)
        let k = u128::from(m);
        let top = t - 1 + k - 1;
        let mut c: u128 = 1;
        for i in 0..k {
            c = match c.checked_mul(top - i) {
                Some(v) => v / (i + 1),
                None => return u128::MAX,
            };
        }
        total = match total.checked_mul(c) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    total
}

/// Walks every admissible graph in lexicographic order of its per-vertex
/// multisets, like an odometer whose last wheel turns fastest.
///
/// [`advance`](Self::advance) returns the smallest vertex whose choices
/// changed since the previous state, so callers can reuse work done for the
/// unchanged prefix.
#[derive(Debug, Clone)]
pub struct AdmissibleOdometer {
    m: u32,
    n: u32,
    choices: Vec<Vertex>,
    started: bool,
    done: bool,
}

impl AdmissibleOdometer {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid("m and n must be positive"));
        }
        Ok(AdmissibleOdometer {
            m,
            n,
            choices: vec![1; m as usize * (n as usize - 1)],
            started: false,
            done: false,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Current flat choices; vertex `t` at offset `(t - 2) * m`.
    pub fn choices(&self) -> &[Vertex] {
        &self.choices
    }

    pub fn graph(&self, weight_mode: WeightMode) -> PaGraph {
        PaGraph::from_flat(self.m, self.n, self.choices.clone(), weight_mode, None)
            .expect("odometer states are admissible")
    }

    /// Moves to the next graph. Returns the first vertex whose choices differ
    /// from the previous state (2 for the very first state), or `None` once
    /// every graph has been visited.
    pub fn advance(&mut self) -> Option<Vertex> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(2);
        }
        let m = self.m as usize;
        for t in (2..=self.n).rev() {
            let step = &mut self.choices[(t as usize - 2) * m..(t as usize - 1) * m];
            let max = t - 1;
            if let Some(i) = step.iter().rposition(|&w| w < max) {
                let next = step[i] + 1;
                step[i..].fill(next);
                let tail_start = (t as usize - 1) * m;
                self.choices[tail_start..].fill(1);
                return Some(t);
            }
        }
        self.done = true;
        None
    }
}

/// Calls `visit` on every admissible graph with parameters `(m, n)`, refusing
/// to start if there are more than `limit` of them. Returns the count.
pub fn for_each_admissible<F>(m: u32, n: u32, weight_mode: WeightMode, limit: u128, mut visit: F) -> Result<u64>
where
    F: FnMut(&PaGraph),
{
    if admissible_count(m, n) > limit {
        return Err(Error::Budget {
            what: "admissible graph enumeration",
            limit,
        });
    }
    let mut odo = AdmissibleOdometer::new(m, n)?;
    let mut count = 0;
    while odo.advance().is_some() {
        visit(&odo.graph(weight_mode));
        count += 1;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts() {
        assert_eq!(admissible_count(1, 1), 1);
        assert_eq!(admissible_count(5, 2), 1);
        assert_eq!(admissible_count(1, 4), 6);
        assert_eq!(admissible_count(1, 10), 362_880);
        assert_eq!(admissible_count(2, 6), 2700);
        assert_eq!(admissible_count(3, 4), 40);
        assert_eq!(admissible_count(3, 1000), u128::MAX);
    }

    #[test]
    fn odometer_visits_each_graph_once() {
        for (m, n) in [(1, 1), (1, 5), (2, 5), (3, 4), (4, 3)] {
            let mut seen = HashSet::new();
            let mut odo = AdmissibleOdometer::new(m, n).unwrap();
            let mut first = true;
            while let Some(changed) = odo.advance() {
                if first {
                    assert_eq!(changed, 2);
                    first = false;
                }
                assert!(seen.insert(odo.choices().to_vec()));
                let g = odo.graph(WeightMode::default());
                assert!(g.to_multigraph().is_admissible(m));
            }
            assert_eq!(seen.len() as u128, admissible_count(m, n), "m={m} n={n}");
            assert!(odo.advance().is_none());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = for_each_admissible(1, 10, WeightMode::default(), 1000, |_| {}).unwrap_err();
        assert!(err.is_budget());
    }
}
