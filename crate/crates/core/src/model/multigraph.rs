use crate::error::{Error, Result};
use crate::model::graph::{PaGraph, Vertex, WeightMode};

/// A labeled undirected multigraph on `1..=n`, loops allowed.
///
/// Edges are kept normalised (`u <= v`) and sorted, so two multigraphs are
/// equal exactly when every pair has the same edge multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: u32,
    edges: Vec<(Vertex, Vertex)>,
}

impl Multigraph {
    pub fn new(n: u32, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut edges: Vec<(Vertex, Vertex)> = edges
            .into_iter()
            .map(|(u, v)| if u <= v { (u, v) } else { (v, u) })
            .collect();
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u == 0 || v > n) {
            return Err(Error::invalid(format!("edge {u}-{v} outside 1..={n}")));
        }
        edges.sort_unstable();
        Ok(Multigraph { n, edges })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Sorted, normalised edge list (with repetitions).
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn loops(&self, v: Vertex) -> usize {
        self.multiplicity(v, v)
    }

    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> usize {
        let key = if u <= v { (u, v) } else { (v, u) };
        let lo = self.edges.partition_point(|e| *e < key);
        let hi = self.edges.partition_point(|e| *e <= key);
        hi - lo
    }

    /// The graph with vertex `v` renamed `perm[v - 1]`. `perm` must be a
    /// permutation of `1..=n`.
    pub fn relabel(&self, perm: &[Vertex]) -> Multigraph {
        assert_eq!(perm.len(), self.n as usize, "permutation has the wrong length");
        let image = |v: Vertex| perm[v as usize - 1];
        Multigraph::new(self.n, self.edges.iter().map(|&(u, v)| (image(u), image(v))))
            .expect("relabeling keeps labels in range")
    }

    /// True iff vertex 1 has exactly `m` loops, no other vertex has a loop,
    /// and every vertex `t >= 2` has exactly `m` edge endpoints in `1..t`.
    pub fn is_admissible(&self, m: u32) -> bool {
        let mut down = vec![0u64; self.n as usize + 1];
        let mut loops_at_one = 0u64;
        for &(u, v) in &self.edges {
            if u == v {
                if u != 1 {
                    return false;
                }
                loops_at_one += 1;
            } else {
                down[v as usize] += 1;
            }
        }
        loops_at_one == u64::from(m) && down[2..].iter().all(|&d| d == u64::from(m))
    }

    /// The PA graph this multigraph encodes, if it is admissible.
    pub fn to_pa_graph(&self, m: u32, weight_mode: WeightMode) -> Option<PaGraph> {
        if m == 0 || self.n == 0 || !self.is_admissible(m) {
            return None;
        }
        let mut flat = vec![0; m as usize * (self.n as usize - 1)];
        let mut fill = vec![0usize; self.n as usize + 1];
        for &(u, v) in self.edges.iter().filter(|(u, v)| u != v) {
            let slot = (v as usize - 2) * m as usize + fill[v as usize];
            flat[slot] = u;
            fill[v as usize] += 1;
        }
        PaGraph::from_flat(m, self.n, flat, weight_mode, None).ok()
    }
}

/// Whether `g` could have been produced by PA(m; n).
pub fn admissible_check(g: &Multigraph, m: u32) -> bool {
    g.is_admissible(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loops(m: usize) -> Vec<(Vertex, Vertex)> {
        vec![(1, 1); m]
    }

    #[test]
    fn path_is_admissible() {
        let mut e = loops(1);
        e.extend([(2, 1), (3, 2)]);
        assert!(admissible_check(&Multigraph::new(3, e).unwrap(), 1));
    }

    #[test]
    fn vertex_without_down_edge_is_not() {
        let mut e = loops(1);
        e.push((2, 1));
        assert!(!admissible_check(&Multigraph::new(3, e).unwrap(), 1));
        // undirected, {2-1, 2-3} is the path 1-2-3 and vertex 3 does reach 2
        let mut e = loops(1);
        e.extend([(2, 1), (2, 3)]);
        assert!(admissible_check(&Multigraph::new(3, e).unwrap(), 1));
        // vertex 2 with two edges into [1] while m = 1
        let mut e = loops(1);
        e.extend([(2, 1), (2, 1), (3, 2)]);
        assert!(!admissible_check(&Multigraph::new(3, e).unwrap(), 1));
    }

    #[test]
    fn loop_rules() {
        let g = Multigraph::new(2, [(1, 1), (1, 2)]).unwrap();
        assert!(g.is_admissible(1));
        assert!(!g.is_admissible(2));
        let g = Multigraph::new(2, [(1, 1), (1, 2), (2, 2)]).unwrap();
        assert!(!g.is_admissible(1));
    }

    #[test]
    fn multiplicity_and_relabel() {
        let g = Multigraph::new(3, [(1, 1), (2, 1), (2, 1), (3, 2)]).unwrap();
        assert_eq!(g.multiplicity(1, 2), 2);
        assert_eq!(g.multiplicity(3, 2), 1);
        assert_eq!(g.loops(1), 1);
        let h = g.relabel(&[3, 1, 2]);
        assert_eq!(h.loops(3), 1);
        assert_eq!(h.multiplicity(3, 1), 2);
        assert_eq!(h.multiplicity(1, 2), 1);
    }

    #[test]
    fn round_trip_through_pa_graph() {
        let g = crate::model::generate(3, 200, 4, WeightMode::default()).unwrap();
        let back = g.to_multigraph().to_pa_graph(3, WeightMode::default()).unwrap();
        assert_eq!(back, g.with_seed(None));
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(Multigraph::new(2, [(1, 3)]).is_err());
        assert!(Multigraph::new(2, [(0, 1)]).is_err());
    }
}
