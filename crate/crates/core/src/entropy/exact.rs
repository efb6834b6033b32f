use crate::entropy::probability::{log_orderings, Weights};
use crate::entropy::{EntropyEstimate, EntropyMethod};
use crate::error::{Error, Result};
use crate::model::{admissible_count, AdmissibleOdometer, WeightMode};

/// Largest number of admissible graphs [`exact_entropy`] will enumerate.
pub const EXACT_ENTROPY_BUDGET: u128 = 10_000_000;

/// Calls `visit(choices, ln P)` for every admissible graph, in odometer order.
///
/// Only the steps from the first changed vertex onwards are rescored, using
/// per-step weight snapshots.
pub fn for_each_log_prob<F>(m: u32, n: u32, weight_mode: WeightMode, limit: u128, mut visit: F) -> Result<u64>
where
    F: FnMut(&[u32], f64),
{
    if admissible_count(m, n) > limit {
        return Err(Error::Budget {
            what: "admissible graph enumeration",
            limit,
        });
    }
    let mu = m as usize;
    let mut odo = AdmissibleOdometer::new(m, n)?;
    // before[i]: weights just before vertex i + 2 arrives; cum[i]: ln P of
    // steps 2..i + 1.
    let steps = n as usize - 1;
    let mut before: Vec<Weights> = Vec::with_capacity(steps);
    let mut cum = vec![0.0f64; steps + 1];
    let mut count = 0;
    while let Some(changed) = odo.advance() {
        let first = changed as usize - 2;
        let choices = odo.choices();
        before.truncate(first.min(before.len()));
        for i in first..steps {
            let mut w = match i {
                0 => Weights::new(m, n, weight_mode),
                _ => before[i - 1].clone(),
            };
            if i > 0 {
                w.push(&choices[(i - 1) * mu..i * mu]);
            }
            let step = &choices[i * mu..(i + 1) * mu];
            cum[i + 1] = cum[i] + log_orderings(step) + w.log_prob_ordered(step);
            before.push(w);
        }
        visit(choices, cum[steps]);
        count += 1;
    }
    Ok(count)
}

/// `H(G)` in nats by enumerating every admissible graph.
pub fn exact_entropy(m: u32, n: u32, weight_mode: WeightMode) -> Result<EntropyEstimate> {
    // Neumaier summation keeps the millions of small terms accurate.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let count = for_each_log_prob(m, n, weight_mode, EXACT_ENTROPY_BUDGET, |_, lp| {
        let term = -lp * lp.exp();
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    })?;
    Ok(EntropyEstimate {
        value: sum + comp,
        stderr: 0.0,
        samples: count,
        method: EntropyMethod::Exact,
    })
}
