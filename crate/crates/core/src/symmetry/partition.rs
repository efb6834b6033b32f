//! Ordered vertex partitions and equitable refinement for multigraphs.

use std::collections::VecDeque;

use crate::model::Multigraph;

/// Compressed adjacency with edge multiplicities; loops kept apart.
/// Vertices are 0-based here.
#[derive(Debug, Clone)]
pub(crate) struct Adjacency {
    offsets: Vec<usize>,
    nbrs: Vec<(u32, u32)>,
    loops: Vec<u32>,
    degree: Vec<u32>,
}

impl Adjacency {
    pub(crate) fn new(g: &Multigraph) -> Self {
        let n = g.n() as usize;
        let mut loops = vec![0u32; n];
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in g.edges() {
            let (u, v) = (u as usize - 1, v as usize - 1);
            if u == v {
                loops[u] += 1;
            } else {
                lists[u].push(v as u32);
                lists[v].push(u as u32);
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut nbrs = Vec::new();
        let mut degree = Vec::with_capacity(n);
        offsets.push(0);
        for mut list in lists {
            degree.push(list.len() as u32);
            list.sort_unstable();
            for chunk in list.chunk_by(|a, b| a == b) {
                nbrs.push((chunk[0], chunk.len() as u32));
            }
            offsets.push(nbrs.len());
        }
        Adjacency {
            offsets,
            nbrs,
            loops,
            degree,
        }
    }

    pub(crate) fn n(&self) -> usize {
        self.loops.len()
    }

    pub(crate) fn neighbors(&self, v: usize) -> &[(u32, u32)] {
        &self.nbrs[self.offsets[v]..self.offsets[v + 1]]
    }

    fn multiplicity(&self, u: usize, v: usize) -> u32 {
        let list = self.neighbors(u);
        match list.binary_search_by_key(&(v as u32), |&(x, _)| x) {
            Ok(i) => list[i].1,
            Err(_) => 0,
        }
    }

    /// Whether `perm` (0-based images) preserves loops and all multiplicities.
    pub(crate) fn is_automorphism(&self, perm: &[u32]) -> bool {
        (0..self.n()).all(|u| {
            let pu = perm[u] as usize;
            self.loops[u] == self.loops[pu]
                && self.neighbors(u).len() == self.neighbors(pu).len()
                && self
                    .neighbors(u)
                    .iter()
                    .all(|&(v, mult)| self.multiplicity(pu, perm[v as usize] as usize) == mult)
        })
    }
}

/// Scratch space reused across refinements of partitions of one graph.
#[derive(Debug)]
pub(crate) struct Refiner {
    count: Vec<u32>,
    touched: Vec<u32>,
    in_queue: Vec<bool>,
    queue: VecDeque<u32>,
    splitter: Vec<u32>,
    affected: Vec<u32>,
}

impl Refiner {
    pub(crate) fn new(n: usize) -> Self {
        Refiner {
            count: vec![0; n],
            touched: Vec::new(),
            in_queue: vec![false; n],
            queue: VecDeque::new(),
            splitter: Vec::new(),
            affected: Vec::new(),
        }
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    (h.rotate_left(5) ^ x).wrapping_mul(0x517C_C1B7_2722_0A95)
}

/// An ordered partition of the vertex set into contiguous cells of `elems`.
///
/// Everything the search compares (cell positions, sizes, the refinement
/// trace) depends only on the graph up to isomorphism, never on labels.
#[derive(Debug, Clone)]
pub(crate) struct Partition {
    pub(crate) elems: Vec<u32>,
    cell: Vec<u32>,
    len: Vec<u32>,
    cells: usize,
}

impl Partition {
    /// Cells by (loop count, degree), both ascending.
    pub(crate) fn initial(adj: &Adjacency) -> Self {
        let n = adj.n();
        let mut elems: Vec<u32> = (0..n as u32).collect();
        let key = |v: u32| (adj.loops[v as usize], adj.degree[v as usize]);
        elems.sort_by_key(|&v| (key(v), v));
        let mut cell = vec![0u32; n];
        let mut len = vec![0u32; n];
        let mut cells = 0;
        let mut start = 0;
        while start < n {
            let k = key(elems[start]);
            let mut end = start;
            while end < n && key(elems[end]) == k {
                cell[elems[end] as usize] = start as u32;
                end += 1;
            }
            len[start] = (end - start) as u32;
            cells += 1;
            start = end;
        }
        Partition {
            elems,
            cell,
            len,
            cells,
        }
    }

    pub(crate) fn cell_starts(&self) -> Vec<u32> {
        let mut starts = Vec::with_capacity(self.cells);
        let mut s = 0;
        while s < self.elems.len() {
            starts.push(s as u32);
            s += self.len[s] as usize;
        }
        starts
    }

    pub(crate) fn cells(&self) -> usize {
        self.cells
    }

    pub(crate) fn is_discrete(&self) -> bool {
        self.cells == self.elems.len()
    }

    pub(crate) fn is_cell_start(&self, s: u32) -> bool {
        (s as usize) < self.elems.len() && self.cell[self.elems[s as usize] as usize] == s
    }

    pub(crate) fn cell_of(&self, start: u32) -> &[u32] {
        let s = start as usize;
        &self.elems[s..s + self.len[s] as usize]
    }

    /// First cell of maximum size among non-singleton cells.
    pub(crate) fn target_cell(&self) -> Option<u32> {
        let mut best: Option<(u32, u32)> = None;
        let mut s = 0;
        while s < self.elems.len() {
            let l = self.len[s];
            if l > 1 && best.is_none_or(|(_, bl)| l > bl) {
                best = Some((s as u32, l));
            }
            s += l as usize;
        }
        best.map(|(s, _)| s)
    }

    /// Splits `v` off the front of its cell; returns the singleton's start.
    pub(crate) fn individualize(&mut self, v: u32) -> u32 {
        let c = self.cell[v as usize] as usize;
        let l = self.len[c] as usize;
        if l == 1 {
            return c as u32;
        }
        let at = self.elems[c..c + l]
            .iter()
            .position(|&x| x == v)
            .expect("vertex in its cell");
        self.elems.swap(c, c + at);
        self.len[c] = 1;
        self.len[c + 1] = (l - 1) as u32;
        for &x in &self.elems[c + 1..c + l] {
            self.cell[x as usize] = (c + 1) as u32;
        }
        self.cells += 1;
        c as u32
    }

    /// Refines to the coarsest equitable partition finer than `self`, using
    /// the cells starting at `seeds` as the initial splitters. Returns a hash
    /// of the sequence of splits performed.
    pub(crate) fn refine(&mut self, adj: &Adjacency, r: &mut Refiner, seeds: &[u32]) -> u64 {
        let mut trace = mix(0, seeds.len() as u64);
        for &s in seeds {
            trace = mix(trace, u64::from(s));
            if !r.in_queue[s as usize] {
                r.in_queue[s as usize] = true;
                r.queue.push_back(s);
            }
        }
        while let Some(s) = r.queue.pop_front() {
            r.in_queue[s as usize] = false;
            if self.is_discrete() {
                continue;
            }
            let s = s as usize;
            r.splitter.clear();
            r.splitter.extend_from_slice(&self.elems[s..s + self.len[s] as usize]);
            for &w in &r.splitter {
                for &(u, mult) in adj.neighbors(w as usize) {
                    if r.count[u as usize] == 0 {
                        r.touched.push(u);
                    }
                    r.count[u as usize] += mult;
                }
            }
            r.affected.clear();
            r.affected.extend(r.touched.iter().map(|&u| self.cell[u as usize]));
            r.affected.sort_unstable();
            r.affected.dedup();
            for i in 0..r.affected.len() {
                let c = r.affected[i] as usize;
                trace = self.split_cell(c, r, trace);
            }
            for &u in &r.touched {
                r.count[u as usize] = 0;
            }
            r.touched.clear();
        }
        trace
    }

    fn split_cell(&mut self, c: usize, r: &mut Refiner, mut trace: u64) -> u64 {
        let l = self.len[c] as usize;
        if l == 1 {
            return trace;
        }
        let count = &r.count;
        let slice = &mut self.elems[c..c + l];
        slice.sort_unstable_by_key(|&v| count[v as usize]);
        let first = count[slice[0] as usize];
        let last = count[slice[l - 1] as usize];
        if first == last {
            return trace;
        }
        trace = mix(trace, c as u64);
        let was_queued = r.in_queue[c];
        let mut fragments: Vec<(usize, usize)> = Vec::new();
        let mut start = c;
        while start < c + l {
            let key = count[self.elems[start] as usize];
            let mut end = start;
            while end < c + l && count[self.elems[end] as usize] == key {
                self.cell[self.elems[end] as usize] = start as u32;
                end += 1;
            }
            self.len[start] = (end - start) as u32;
            trace = mix(mix(trace, u64::from(key)), (end - start) as u64);
            fragments.push((start, end - start));
            start = end;
        }
        self.cells += fragments.len() - 1;
        let skip = if was_queued {
            0
        } else {
            // Hopcroft: the largest fragment need not be a splitter.
            let mut best = 0;
            for (i, f) in fragments.iter().enumerate() {
                if f.1 > fragments[best].1 {
                    best = i;
                }
            }
            best
        };
        for (i, &(fs, _)) in fragments.iter().enumerate() {
            if i == skip || r.in_queue[fs] {
                continue;
            }
            r.in_queue[fs] = true;
            r.queue.push_back(fs as u32);
        }
        trace
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: u32) -> Multigraph {
        Multigraph::new(n, (1..n).map(|v| (v, v + 1))).unwrap()
    }

    #[test]
    fn path_refines_to_orbits() {
        let g = path(5);
        let adj = Adjacency::new(&g);
        let mut p = Partition::initial(&adj);
        let mut r = Refiner::new(5);
        let starts = p.cell_starts();
        p.refine(&adj, &mut r, &starts);
        // orbits of P5: {1,5}, {2,4}, {3}
        assert_eq!(p.cells(), 3);
        let mut cells: Vec<Vec<u32>> = p
            .cell_starts()
            .into_iter()
            .map(|s| {
                let mut c = p.cell_of(s).to_vec();
                c.sort();
                c
            })
            .collect();
        cells.sort();
        assert_eq!(cells, vec![vec![0, 4], vec![1, 3], vec![2]]);
    }

    #[test]
    fn individualizing_an_end_makes_path_discrete() {
        let g = path(6);
        let adj = Adjacency::new(&g);
        let mut p = Partition::initial(&adj);
        let mut r = Refiner::new(6);
        let starts = p.cell_starts();
        p.refine(&adj, &mut r, &starts);
        let seed = p.individualize(0);
        p.refine(&adj, &mut r, &[seed]);
        assert!(p.is_discrete());
    }

    #[test]
    fn automorphism_check_respects_multiplicity() {
        let g = Multigraph::new(3, [(1, 2), (1, 2), (2, 3)]).unwrap();
        let adj = Adjacency::new(&g);
        assert!(adj.is_automorphism(&[0, 1, 2]));
        assert!(!adj.is_automorphism(&[2, 1, 0]));
        let g = Multigraph::new(3, [(1, 2), (2, 3)]).unwrap();
        assert!(Adjacency::new(&g).is_automorphism(&[2, 1, 0]));
    }
}
