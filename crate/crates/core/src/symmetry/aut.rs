//! Exact automorphism group orders.
//!
//! [`aut_order`] runs equitable refinement followed by
//! individualization-refinement search. The leftmost path of the search tree
//! fixes a reference leaf; walking back up that path, the orbit of each
//! individualized vertex under the stabilizer of the ones before it is found
//! by searching the sibling subtrees for leaves equivalent to the reference
//! leaf. The group order is the product of those orbit sizes, and the
//! automorphisms found on the way generate the group.
//!
//! [`brute_force_aut_order`] tries every bijection and exists as an oracle.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Multigraph, Vertex};
use crate::symmetry::partition::{Adjacency, Partition, Refiner};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AutMethod {
    BruteForce,
    Refinement,
}

/// The order of `Aut(G)` together with a generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutResult {
    pub order: BigUint,
    /// Permutations as 1-based images: `g[v - 1]` is the image of `v`.
    pub generators: Vec<Vec<Vertex>>,
    pub method: AutMethod,
}

impl AutResult {
    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    /// Natural log of the group order.
    pub fn log_order(&self) -> f64 {
        if let Some(v) = self.order.to_f64().filter(|v| v.is_finite()) {
            return v.ln();
        }
        let bits = self.order.bits();
        let shift = bits - 60;
        let top = (&self.order >> shift).to_f64().expect("60-bit value fits");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Default cap on search-tree nodes visited by [`aut_order`].
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

/// `|Aut(g)|` by refinement and backtracking, with the default node budget.
pub fn aut_order(g: &Multigraph) -> Result<AutResult> {
    aut_order_with_budget(g, DEFAULT_NODE_BUDGET)
}

struct PathNode {
    partition: Partition,
    trace: u64,
    target: u32,
    chosen: u32,
}

struct Search<'a> {
    adj: &'a Adjacency,
    refiner: Refiner,
    path: Vec<PathNode>,
    leaf: Vec<u32>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "automorphism search nodes",
                limit: u128::from(self.budget),
            });
        }
        Ok(())
    }

    /// Looks below `node` (at `depth`) for a leaf equivalent to the reference
    /// leaf; returns the automorphism mapping one onto the other.
    fn find_equivalent(&mut self, node: Partition, trace: u64, depth: usize) -> Result<Option<Vec<u32>>> {
        self.tick()?;
        let reference = &self.path[depth];
        if trace != reference.trace || node.cells() != reference.partition.cells() {
            return Ok(None);
        }
        if node.is_discrete() {
            let mut perm = vec![0u32; self.leaf.len()];
            for (&from, &to) in self.leaf.iter().zip(&node.elems) {
                perm[from as usize] = to;
            }
            return Ok(self.adj.is_automorphism(&perm).then_some(perm));
        }
        let target = reference.target;
        if !node.is_cell_start(target) || node.cell_of(target).len() != reference.partition.cell_of(target).len() {
            return Ok(None);
        }
        // The reference choice first: it is often fixed by the sought map.
        let preferred = reference.chosen;
        let mut candidates = node.cell_of(target).to_vec();
        if let Some(i) = candidates.iter().position(|&x| x == preferred) {
            candidates.swap(0, i);
        }
        for x in candidates {
            let mut child = node.clone();
            let seed = child.individualize(x);
            let child_trace = child.refine(self.adj, &mut self.refiner, &[seed]);
            if let Some(perm) = self.find_equivalent(child, child_trace, depth + 1)? {
                return Ok(Some(perm));
            }
        }
        Ok(None)
    }
}

struct Orbits {
    parent: Vec<u32>,
}

impl Orbits {
    fn new(n: usize) -> Self {
        Orbits {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn absorb(&mut self, perm: &[u32]) {
        for (v, &w) in perm.iter().enumerate() {
            let (a, b) = (self.find(v as u32), self.find(w));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                self.parent[hi as usize] = lo;
            }
        }
    }
}

/// `|Aut(g)|` by refinement and backtracking. Fails with a budget error
/// rather than answer once more than `node_budget` search nodes are visited.
pub fn aut_order_with_budget(g: &Multigraph, node_budget: u64) -> Result<AutResult> {
    let n = g.n() as usize;
    let adj = Adjacency::new(g);
    let mut refiner = Refiner::new(n);
    let mut root = Partition::initial(&adj);
    let starts = root.cell_starts();
    let trace = root.refine(&adj, &mut refiner, &starts);

    let mut path = vec![PathNode {
        partition: root,
        trace,
        target: 0,
        chosen: 0,
    }];
    loop {
        let last = path.last_mut().expect("nonempty");
        let Some(target) = last.partition.target_cell() else {
            break;
        };
        let v = *last.partition.cell_of(target).iter().min().expect("nonempty cell");
        last.target = target;
        last.chosen = v;
        let mut child = last.partition.clone();
        let seed = child.individualize(v);
        let trace = child.refine(&adj, &mut refiner, &[seed]);
        path.push(PathNode {
            partition: child,
            trace,
            target: 0,
            chosen: 0,
        });
    }
    let leaf = path.last().expect("nonempty").partition.elems.clone();

    let mut search = Search {
        adj: &adj,
        refiner,
        path,
        leaf,
        nodes: 0,
        budget: node_budget,
    };
    let mut orbits = Orbits::new(n);
    let mut generators: Vec<Vec<u32>> = Vec::new();
    let mut order = BigUint::one();

    for depth in (0..search.path.len() - 1).rev() {
        let v = search.path[depth].chosen;
        let mut cell = search.path[depth].partition.cell_of(search.path[depth].target).to_vec();
        cell.sort_unstable();
        let mut rejected: Vec<u32> = Vec::new();
        for &w in &cell {
            if w == v || orbits.find(w) == orbits.find(v) {
                continue;
            }
            let root_w = orbits.find(w);
            if rejected.iter().any(|&r| orbits.find(r) == root_w) {
                continue;
            }
            let mut child = search.path[depth].partition.clone();
            let seed = child.individualize(w);
            let trace = child.refine(search.adj, &mut search.refiner, &[seed]);
            match search.find_equivalent(child, trace, depth + 1)? {
                Some(perm) => {
                    orbits.absorb(&perm);
                    generators.push(perm);
                }
                None => rejected.push(w),
            }
        }
        let root_v = orbits.find(v);
        let orbit = cell.iter().filter(|&&x| orbits.find(x) == root_v).count();
        order *= BigUint::from(orbit);
    }

    Ok(AutResult {
        order,
        generators: generators
            .into_iter()
            .map(|p| p.into_iter().map(|x| x + 1).collect())
            .collect(),
        method: AutMethod::Refinement,
    })
}

/// Largest vertex count accepted by [`brute_force_aut_order`].
pub const BRUTE_FORCE_MAX_N: u32 = 10;

/// Calls `visit` with every permutation of `0..n` (Heap's algorithm).
pub(crate) fn for_each_permutation(n: usize, mut visit: impl FnMut(&[u32])) {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// `|Aut(g)|` by testing all `n!` bijections against the multiplicity matrix.
/// Every non-identity automorphism is returned as a generator.
pub fn brute_force_aut_order(g: &Multigraph) -> Result<AutResult> {
    let n = g.n() as usize;
    if g.n() > BRUTE_FORCE_MAX_N {
        return Err(Error::invalid(format!(
            "brute force is limited to n <= {BRUTE_FORCE_MAX_N}; use aut_order for n = {n}"
        )));
    }
    let mut mult = vec![0u32; n * n];
    for &(u, v) in g.edges() {
        let (u, v) = (u as usize - 1, v as usize - 1);
        mult[u * n + v] += 1;
        if u != v {
            mult[v * n + u] += 1;
        }
    }
    let mut count: u64 = 0;
    let mut generators = Vec::new();
    for_each_permutation(n, |perm| {
        let ok = (0..n).all(|u| {
            let pu = perm[u] as usize;
            (u..n).all(|v| mult[u * n + v] == mult[pu * n + perm[v] as usize])
        });
        if ok {
            count += 1;
            if perm.iter().enumerate().any(|(i, &p)| p as usize != i) {
                generators.push(perm.iter().map(|&x| x + 1).collect());
            }
        }
    });
    Ok(AutResult {
        order: BigUint::from(count),
        generators,
        method: AutMethod::BruteForce,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PaGraph, WeightMode};

    fn pa(m: u32, steps: Vec<Vec<Vertex>>) -> Multigraph {
        let n = steps.len() as u32 + 1;
        PaGraph::from_choices(m, n, steps, WeightMode::default())
            .unwrap()
            .to_multigraph()
    }

    #[test]
    fn permutations_are_all_distinct() {
        let mut seen = std::collections::HashSet::new();
        for_each_permutation(5, |p| {
            assert!(seen.insert(p.to_vec()));
        });
        assert_eq!(seen.len(), 120);
        let mut count = 0;
        for_each_permutation(1, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn single_vertex() {
        let g = pa(1, vec![]);
        assert!(brute_force_aut_order(&g).unwrap().is_trivial());
        let r = aut_order(&g).unwrap();
        assert!(r.is_trivial());
        assert!(r.generators.is_empty());
    }

    #[test]
    fn star_and_path() {
        let star = pa(1, vec![vec![1], vec![1]]);
        let path = pa(1, vec![vec![1], vec![2]]);
        let b = brute_force_aut_order(&star).unwrap();
        assert_eq!(b.order, BigUint::from(2u32));
        assert_eq!(b.generators, vec![vec![1, 3, 2]]);
        assert_eq!(aut_order(&star).unwrap().order, BigUint::from(2u32));
        assert!(brute_force_aut_order(&path).unwrap().is_trivial());
        assert!(aut_order(&path).unwrap().is_trivial());
    }

    #[test]
    fn brute_force_rejects_large_graphs() {
        let g = crate::model::generate(1, 11, 0, WeightMode::default())
            .unwrap()
            .to_multigraph();
        assert!(brute_force_aut_order(&g).is_err());
    }

    #[test]
    fn large_symmetric_star() {
        // vertex 1 with 40 leaves: 40! automorphisms
        let g = pa(1, vec![vec![1]; 40]);
        let r = aut_order(&g).unwrap();
        let fact: BigUint = (1..=40u32).map(BigUint::from).product();
        assert_eq!(r.order, fact);
        let ln40: f64 = (1..=40).map(|k| (k as f64).ln()).sum();
        assert!((r.log_order() - ln40).abs() < 1e-9);
    }

    #[test]
    fn budget_error_is_reported() {
        let g = pa(1, vec![vec![1]; 30]);
        let err = aut_order_with_budget(&g, 3).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn plain_graphs_without_loops() {
        // 6-cycle: dihedral group of order 12
        let c6 = Multigraph::new(6, (1..=6).map(|v| (v, v % 6 + 1))).unwrap();
        assert_eq!(aut_order(&c6).unwrap().order, BigUint::from(12u32));
        assert_eq!(brute_force_aut_order(&c6).unwrap().order, BigUint::from(12u32));
        // Petersen graph: 120
        let outer = (0..5).map(|i| (i + 1, (i + 1) % 5 + 1));
        let spokes = (0..5).map(|i| (i + 1, i + 6));
        let inner = (0..5).map(|i| (i + 6, (i + 2) % 5 + 6));
        let petersen = Multigraph::new(10, outer.chain(spokes).chain(inner)).unwrap();
        assert_eq!(aut_order(&petersen).unwrap().order, BigUint::from(120u32));
        // K_{3,3}: 72
        let k33 = Multigraph::new(6, (1..=3).flat_map(|a| (4..=6).map(move |b| (a, b)))).unwrap();
        assert_eq!(aut_order(&k33).unwrap().order, BigUint::from(72u32));
    }
}
