//! Exhaustive relabeling counts for small graphs.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Multigraph, PaGraph, Vertex};
use crate::symmetry::{brute_force_aut_order, for_each_permutation};

/// Largest vertex count accepted by the brute-force routines here.
pub const BRUTE_FORCE_DAG_MAX_N: u32 = 7;

/// Counts from relabeling a graph every possible way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaAdm {
    /// Relabelings whose image is admissible (and, if restricted, has a DAG
    /// isomorphic to the original's).
    pub gamma: u64,
    /// Distinct labeled graphs among those images.
    pub adm: u64,
    pub aut: u64,
}

impl GammaAdm {
    /// `gamma = adm * aut`.
    pub fn identity_holds(&self) -> bool {
        self.gamma == self.adm * self.aut
    }
}

fn check_size(n: u32) -> Result<()> {
    if n > BRUTE_FORCE_DAG_MAX_N {
        return Err(Error::invalid(format!(
            "exhaustive relabeling is limited to n <= {BRUTE_FORCE_DAG_MAX_N}, got n = {n}"
        )));
    }
    Ok(())
}

/// Canonical form of the chooser-to-chosen orientation of an admissible
/// multigraph: its arc multiplicity matrix, minimised over the vertex orders
/// that sort vertices by a refined colouring.
fn dag_canonical_form(g: &Multigraph) -> Vec<u8> {
    let n = g.n() as usize;
    let mut arcs = vec![0u8; n * n];
    for &(lo, hi) in g.edges() {
        if lo != hi {
            arcs[(hi as usize - 1) * n + (lo as usize - 1)] += 1;
        }
    }
    let colour = refine_colours(n, &arcs);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| colour[v]);
    let mut best: Option<Vec<u8>> = None;
    let classes: Vec<&[usize]> = order.chunk_by(|&a, &b| colour[a] == colour[b]).collect();
    let mut current = order.clone();
    permute_classes(&classes, 0, 0, &mut current, &mut |ord| {
        let mut form = Vec::with_capacity(n * n);
        for &u in ord {
            for &v in ord {
                form.push(arcs[u * n + v]);
            }
        }
        if best.as_ref().is_none_or(|b| form < *b) {
            best = Some(form);
        }
    });
    let mut form = best.unwrap_or_default();
    form.extend(order.iter().map(|&v| colour[v] as u8));
    form
}

/// Iterated out/in-neighbourhood colour refinement; colours are ranks of
/// label-free signatures.
/// Own colour, then sorted `(colour, multiplicity)` lists of out- and
/// in-neighbours.
type Signature = (u32, Vec<(u32, u8)>, Vec<(u32, u8)>);

fn refine_colours(n: usize, arcs: &[u8]) -> Vec<u32> {
    let mut colour = vec![0u32; n];
    let mut classes = 1;
    loop {
        let sigs: Vec<Signature> = (0..n)
            .map(|v| {
                let mut out: Vec<(u32, u8)> = (0..n)
                    .filter(|&w| arcs[v * n + w] > 0)
                    .map(|w| (colour[w], arcs[v * n + w]))
                    .collect();
                let mut inn: Vec<(u32, u8)> = (0..n)
                    .filter(|&w| arcs[w * n + v] > 0)
                    .map(|w| (colour[w], arcs[w * n + v]))
                    .collect();
                out.sort_unstable();
                inn.sort_unstable();
                (colour[v], out, inn)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<u32> = sigs
            .iter()
            .map(|s| distinct.binary_search(s).expect("present") as u32)
            .collect();
        colour = next;
        if distinct.len() == classes {
            return colour;
        }
        classes = distinct.len();
    }
}

fn permute_classes(
    classes: &[&[usize]],
    idx: usize,
    offset: usize,
    current: &mut [usize],
    visit: &mut dyn FnMut(&[usize]),
) {
    if idx == classes.len() {
        visit(current);
        return;
    }
    let class = classes[idx];
    for_each_permutation(class.len(), |perm| {
        for (i, &p) in perm.iter().enumerate() {
            current[offset + i] = class[p as usize];
        }
        permute_classes(classes, idx + 1, offset + class.len(), current, visit);
    });
}

/// Calls `visit(image)` for every relabeling `pi` of `g` whose image is
/// admissible, where `image` has vertex `v` renamed `pi[v - 1]`.
fn for_each_admissible_relabeling(g: &PaGraph, mut visit: impl FnMut(&Multigraph)) {
    let base = g.to_multigraph();
    let n = g.n() as usize;
    let mut perm: Vec<Vertex> = vec![0; n];
    for_each_permutation(n, |p| {
        for (slot, &x) in perm.iter_mut().zip(p) {
            *slot = x + 1;
        }
        let image = base.relabel(&perm);
        if image.is_admissible(g.m()) {
            visit(&image);
        }
    });
}

/// Relabels `g` all `n!` ways and counts the admissible images, optionally
/// only those whose DAG is isomorphic to the DAG of `g`.
pub fn brute_force_gamma_adm(g: &PaGraph, restrict_to_udag: bool) -> Result<GammaAdm> {
    check_size(g.n())?;
    let own = dag_canonical_form(&g.to_multigraph());
    let mut forms: HashMap<Multigraph, bool> = HashMap::new();
    let mut gamma = 0u64;
    for_each_admissible_relabeling(g, |image| {
        let keep = match forms.get(image) {
            Some(&k) => k,
            None => {
                let k = !restrict_to_udag || dag_canonical_form(image) == own;
                forms.insert(image.clone(), k);
                k
            }
        };
        if keep {
            gamma += 1;
        }
    });
    let adm = forms.values().filter(|&&k| k).count() as u64;
    let aut = brute_force_aut_order(&g.to_multigraph())?;
    let aut = u64::try_from(aut.order).expect("at most 7! automorphisms");
    Ok(GammaAdm { gamma, adm, aut })
}

/// Number of directed-isomorphism classes among the DAGs of admissible
/// relabelings of `g`.
pub fn count_udags(g: &PaGraph) -> Result<u64> {
    check_size(g.n())?;
    let mut seen: HashSet<Multigraph> = HashSet::new();
    let mut classes: HashSet<Vec<u8>> = HashSet::new();
    for_each_admissible_relabeling(g, |image| {
        if seen.insert(image.clone()) {
            classes.insert(dag_canonical_form(image));
        }
    });
    Ok(classes.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate, WeightMode};

    fn pa(m: u32, steps: Vec<Vec<Vertex>>) -> PaGraph {
        PaGraph::from_choices(m, steps.len() as u32 + 1, steps, WeightMode::default()).unwrap()
    }

    #[test]
    fn hand_cases() {
        let star = brute_force_gamma_adm(&pa(1, vec![vec![1], vec![1]]), true).unwrap();
        assert_eq!(
            star,
            GammaAdm {
                gamma: 2,
                adm: 1,
                aut: 2
            }
        );
        let path = brute_force_gamma_adm(&pa(1, vec![vec![1], vec![2]]), true).unwrap();
        assert_eq!(
            path,
            GammaAdm {
                gamma: 1,
                adm: 1,
                aut: 1
            }
        );
        assert!(brute_force_gamma_adm(&generate(1, 8, 0, WeightMode::default()).unwrap(), true).is_err());
    }

    /// Minimum arc matrix over all vertex orders.
    fn brute_form(g: &Multigraph) -> Vec<u8> {
        let n = g.n() as usize;
        let mut arcs = vec![0u8; n * n];
        for &(lo, hi) in g.edges() {
            if lo != hi {
                arcs[(hi as usize - 1) * n + (lo as usize - 1)] += 1;
            }
        }
        let mut best: Option<Vec<u8>> = None;
        for_each_permutation(n, |ord| {
            let form: Vec<u8> = ord
                .iter()
                .flat_map(|&u| ord.iter().map(move |&v| (u as usize, v as usize)))
                .map(|(u, v)| arcs[u * n + v])
                .collect();
            if best.as_ref().is_none_or(|b| form < *b) {
                best = Some(form);
            }
        });
        best.unwrap()
    }

    #[test]
    fn canonical_form_agrees_with_exhaustive_form() {
        let mut graphs = Vec::new();
        for seed in 0..6 {
            for m in 1..=2 {
                let g = generate(m, 6, seed, WeightMode::default()).unwrap();
                for_each_admissible_relabeling(&g, |image| graphs.push(image.clone()));
            }
        }
        graphs.sort_by_key(|g| g.edges().to_vec());
        graphs.dedup();
        let forms: Vec<(Vec<u8>, Vec<u8>)> = graphs.iter().map(|g| (dag_canonical_form(g), brute_form(g))).collect();
        for a in &forms {
            for b in &forms {
                assert_eq!(a.0 == b.0, a.1 == b.1);
            }
        }
    }

    #[test]
    fn udag_counts() {
        assert_eq!(count_udags(&pa(3, vec![vec![1, 1, 1]])).unwrap(), 1);
        for steps in [vec![vec![1], vec![1]], vec![vec![1], vec![2]]] {
            let c = count_udags(&pa(1, steps)).unwrap();
            assert!((1..=4).contains(&c));
        }
    }
}
