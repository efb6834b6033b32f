use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::multigraph::Multigraph;
use crate::rng::Stream;

/// Vertex label. Labels run from 1 to n; vertex `t` arrived at time `t`.
pub type Vertex = u32;

/// How vertex 1's self-loops enter the sampling weights.
///
/// The reported degree of vertex 1 always counts each of its `m` loops once.
/// `SelfLoopDoubled` lets every loop contribute 2 to the sampling weight, so
/// the weights at time `t` sum to exactly `2mt`. `ProperRenormalized` samples
/// proportionally to reported degrees, normalised by `2mt - m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum WeightMode {
    #[default]
    SelfLoopDoubled,
    ProperRenormalized,
}

impl WeightMode {
    /// One-letter code used by the `pag v1` header.
    pub fn code(self) -> char {
        match self {
            WeightMode::SelfLoopDoubled => 'd',
            WeightMode::ProperRenormalized => 'r',
        }
    }

    pub fn from_code(c: &str) -> Option<Self> {
        match c {
            "d" => Some(WeightMode::SelfLoopDoubled),
            "r" => Some(WeightMode::ProperRenormalized),
            _ => None,
        }
    }

    /// Sampling weight carried by vertex 1's loops.
    pub fn loop_weight(self, m: u32) -> u64 {
        match self {
            WeightMode::SelfLoopDoubled => 2 * u64::from(m),
            WeightMode::ProperRenormalized => u64::from(m),
        }
    }

    /// Total sampling weight once vertices `1..=t` are present.
    pub fn normalizer(self, m: u32, t: u32) -> u64 {
        let m = u64::from(m);
        let t = u64::from(t);
        match self {
            WeightMode::SelfLoopDoubled => 2 * m * t,
            WeightMode::ProperRenormalized => 2 * m * t - m,
        }
    }

    /// Sampling weight of vertex `v` whose reported degree is `degree`.
    pub fn weight(self, m: u32, v: Vertex, degree: u32) -> u64 {
        match (self, v) {
            (WeightMode::SelfLoopDoubled, 1) => u64::from(degree) + u64::from(m),
            _ => u64::from(degree),
        }
    }
}

fn check_dims(m: u32, n: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    Ok(())
}

fn check_targets(m: u32, t: Vertex, targets: &[Vertex]) -> Result<()> {
    if targets.len() != m as usize {
        return Err(Error::invalid(format!(
            "vertex {t} has {} targets, expected {m}",
            targets.len()
        )));
    }
    if let Some(&w) = targets.iter().find(|&&w| w == 0 || w >= t) {
        return Err(Error::invalid(format!("vertex {t} targets {w}, outside 1..={}", t - 1)));
    }
    Ok(())
}

/// The ordered choices each vertex made: vertex `t` picked `m` targets, one
/// after another, from `1..t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChoiceSequence {
    m: u32,
    n: u32,
    ordered: Vec<Vertex>,
}

impl ChoiceSequence {
    /// Builds a sequence from per-vertex choices, `steps[i]` belonging to
    /// vertex `i + 2`.
    pub fn new(m: u32, n: u32, steps: Vec<Vec<Vertex>>) -> Result<Self> {
        check_dims(m, n)?;
        if steps.len() != n as usize - 1 {
            return Err(Error::invalid(format!("expected {} steps, got {}", n - 1, steps.len())));
        }
        let mut ordered = Vec::with_capacity(m as usize * steps.len());
        for (i, step) in steps.into_iter().enumerate() {
            check_targets(m, i as Vertex + 2, &step)?;
            ordered.extend(step);
        }
        Ok(ChoiceSequence { m, n, ordered })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The choices of vertex `t` in the order they were made.
    pub fn choices_of(&self, t: Vertex) -> &[Vertex] {
        let m = self.m as usize;
        let start = (t as usize - 2) * m;
        &self.ordered[start..start + m]
    }

    /// `(t, choices of t)` for `t = 2..=n`.
    pub fn steps(&self) -> impl Iterator<Item = (Vertex, &[Vertex])> {
        self.ordered
            .chunks_exact(self.m as usize)
            .enumerate()
            .map(|(i, c)| (i as Vertex + 2, c))
    }

    /// Forgets the order within each step.
    pub fn to_graph(&self, weight_mode: WeightMode, seed: Option<u64>) -> PaGraph {
        let mut choices = self.ordered.clone();
        for step in choices.chunks_exact_mut(self.m as usize) {
            step.sort_unstable();
        }
        PaGraph {
            m: self.m,
            n: self.n,
            choices,
            weight_mode,
            seed,
        }
    }
}

/// An m-left regular labeled multigraph: vertex 1 carries `m` loops and every
/// vertex `t >= 2` has exactly `m` edges (with multiplicity) into `1..t`.
///
/// Choices are stored per vertex as a sorted multiset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PaGraph {
    m: u32,
    n: u32,
    choices: Vec<Vertex>,
    weight_mode: WeightMode,
    seed: Option<u64>,
}

impl PaGraph {
    /// Hand-built graph from per-vertex target multisets (`steps[i]` belongs to
    /// vertex `i + 2`, any order).
    pub fn from_choices(m: u32, n: u32, steps: Vec<Vec<Vertex>>, weight_mode: WeightMode) -> Result<Self> {
        Ok(ChoiceSequence::new(m, n, steps)?.to_graph(weight_mode, None))
    }

    /// Flat form: `m * (n - 1)` targets, vertex `t` at offset `(t - 2) * m`.
    pub(crate) fn from_flat(
        m: u32,
        n: u32,
        mut choices: Vec<Vertex>,
        weight_mode: WeightMode,
        seed: Option<u64>,
    ) -> Result<Self> {
        check_dims(m, n)?;
        if choices.len() != m as usize * (n as usize - 1) {
            return Err(Error::invalid("flat choice vector has the wrong length"));
        }
        for (i, step) in choices.chunks_exact_mut(m as usize).enumerate() {
            check_targets(m, i as Vertex + 2, step)?;
            step.sort_unstable();
        }
        Ok(PaGraph {
            m,
            n,
            choices,
            weight_mode,
            seed,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn weight_mode(&self) -> WeightMode {
        self.weight_mode
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    /// Sorted target multiset of vertex `t`, for `2 <= t <= n`.
    pub fn choices_of(&self, t: Vertex) -> &[Vertex] {
        let m = self.m as usize;
        let start = (t as usize - 2) * m;
        &self.choices[start..start + m]
    }

    pub fn steps(&self) -> impl Iterator<Item = (Vertex, &[Vertex])> {
        self.choices
            .chunks_exact(self.m as usize)
            .enumerate()
            .map(|(i, c)| (i as Vertex + 2, c))
    }

    pub(crate) fn flat_choices(&self) -> &[Vertex] {
        &self.choices
    }

    /// Reported degrees at time n, indexed by `v - 1`. Loops count once.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![self.m; self.n as usize];
        for &w in &self.choices {
            deg[w as usize - 1] += 1;
        }
        deg
    }

    /// `deg_t(s)`: `m` plus the number of choice slots of vertices
    /// `s + 1..=t` that target `s`.
    pub fn degree_at(&self, t: Vertex, s: Vertex) -> Result<u32> {
        if s == 0 || s > t || t > self.n {
            return Err(Error::invalid(format!(
                "degree_at needs 1 <= s <= t <= n, got s={s}, t={t}, n={}",
                self.n
            )));
        }
        let hits = (s + 1..=t)
            .flat_map(|u| self.choices_of(u))
            .filter(|&&w| w == s)
            .count() as u32;
        Ok(self.m + hits)
    }

    /// All degrees at time `t`.
    pub fn degree_view(&self, t: Vertex) -> Result<DegreeView<'_>> {
        if t == 0 || t > self.n {
            return Err(Error::invalid(format!("time {t} outside 1..={}", self.n)));
        }
        let mut degrees = vec![self.m; t as usize];
        for u in 2..=t {
            for &w in self.choices_of(u) {
                degrees[w as usize - 1] += 1;
            }
        }
        Ok(DegreeView {
            graph: self,
            t,
            degrees,
        })
    }

    /// The underlying undirected multigraph, vertex 1's loops included.
    pub fn to_multigraph(&self) -> Multigraph {
        let mut edges = Vec::with_capacity(self.choices.len() + self.m as usize);
        edges.extend(std::iter::repeat_n((1, 1), self.m as usize));
        for (t, step) in self.steps() {
            edges.extend(step.iter().map(|&w| (w, t)));
        }
        Multigraph::new(self.n, edges).expect("PaGraph labels are in range")
    }
}

/// Degrees of a graph as they stood at time `t`.
#[derive(Debug, Clone)]
pub struct DegreeView<'a> {
    graph: &'a PaGraph,
    t: Vertex,
    degrees: Vec<u32>,
}

impl DegreeView<'_> {
    pub fn graph(&self) -> &PaGraph {
        self.graph
    }

    pub fn t(&self) -> Vertex {
        self.t
    }

    /// `deg_t(s)` for `1 <= s <= t`.
    pub fn deg(&self, s: Vertex) -> u32 {
        self.degrees[s as usize - 1]
    }

    /// `deg_t(s) - m`, the number of edges `s` has received.
    pub fn dg(&self, s: Vertex) -> u32 {
        self.deg(s) - self.graph.m
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.degrees
    }
}

/// Draws the ordered choices of PA(m; n).
///
/// Sampling uses the endpoint urn: every unit of weight is one slot, so a
/// uniform slot is a degree-proportional vertex. The `m` draws of a step all
/// see the urn as it was before the step; the step's endpoints are appended
/// afterwards.
pub fn generate_sequence_with(m: u32, n: u32, weight_mode: WeightMode, rng: &mut Stream) -> Result<ChoiceSequence> {
    check_dims(m, n)?;
    let mu = m as usize;
    let final_len = weight_mode.normalizer(m, n) as usize;
    let mut urn: Vec<Vertex> = Vec::with_capacity(final_len);
    urn.extend(std::iter::repeat_n(1, weight_mode.loop_weight(m) as usize));
    let mut ordered = Vec::with_capacity(mu * (n as usize - 1));
    for t in 2..=n {
        let frozen = urn.len() as u64;
        debug_assert_eq!(frozen, weight_mode.normalizer(m, t - 1));
        let start = ordered.len();
        for _ in 0..m {
            ordered.push(urn[rng.below(frozen) as usize]);
        }
        urn.extend_from_slice(&ordered[start..]);
        urn.extend(std::iter::repeat_n(t, mu));
    }
    Ok(ChoiceSequence { m, n, ordered })
}

/// Ordered choices for `(m, n, seed, weight_mode)`.
pub fn generate_sequence(m: u32, n: u32, seed: u64, weight_mode: WeightMode) -> Result<ChoiceSequence> {
    generate_sequence_with(m, n, weight_mode, &mut Stream::new(seed))
}

/// A PA(m; n) graph. Equal arguments give equal graphs.
pub fn generate(m: u32, n: u32, seed: u64, weight_mode: WeightMode) -> Result<PaGraph> {
    Ok(generate_sequence(m, n, seed, weight_mode)?.to_graph(weight_mode, Some(seed)))
}

/// Trial `trial` of an experiment with master seed `seed`; the graph records
/// the derived per-trial seed.
pub fn generate_trial(m: u32, n: u32, seed: u64, trial: u64, weight_mode: WeightMode) -> Result<PaGraph> {
    generate(m, n, crate::rng::trial_seed(seed, trial), weight_mode)
}
