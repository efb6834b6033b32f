use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::model::{ChoiceSequence, Multigraph, PaGraph, Vertex, WeightMode};

/// Sampling weights of the vertices present at time `t`, updated one step at
/// a time.
#[derive(Debug, Clone)]
pub(crate) struct Weights {
    m: u32,
    mode: WeightMode,
    t: Vertex,
    weight: Vec<u64>,
}

impl Weights {
    pub(crate) fn new(m: u32, n: Vertex, mode: WeightMode) -> Self {
        let mut weight = Vec::with_capacity(n as usize);
        weight.push(mode.loop_weight(m));
        Weights { m, mode, t: 1, weight }
    }

    /// `ln P(step)` for the arrival of vertex `t + 1` with choices `step`,
    /// taken in the given order.
    pub(crate) fn log_prob_ordered(&self, step: &[Vertex]) -> f64 {
        let norm = self.mode.normalizer(self.m, self.t) as f64;
        step.iter()
            .map(|&w| (self.weight[w as usize - 1] as f64 / norm).ln())
            .sum()
    }

    /// Adds vertex `t + 1` and its choices.
    pub(crate) fn push(&mut self, step: &[Vertex]) {
        for &w in step {
            self.weight[w as usize - 1] += 1;
        }
        self.weight.push(u64::from(self.m));
        self.t += 1;
    }
}

/// `ln(m! / prod mult!)` for a sorted multiset: the number of orders in which
/// it can be drawn.
pub(crate) fn log_orderings(sorted: &[Vertex]) -> f64 {
    let mut log = ln_factorial(sorted.len() as u64);
    for run in sorted.chunk_by(|a, b| a == b) {
        log -= ln_factorial(run.len() as u64);
    }
    log
}

/// Log-probability of an ordered choice sequence, in nats.
pub fn log_prob_sequence(seq: &ChoiceSequence, weight_mode: WeightMode) -> f64 {
    let mut weights = Weights::new(seq.m(), seq.n(), weight_mode);
    let mut total = 0.0;
    for (_, step) in seq.steps() {
        total += weights.log_prob_ordered(step);
        weights.push(step);
    }
    total
}

/// `ln P(G = g)` in nats: each step contributes its ordered probability times
/// the number of orders its multiset can be drawn in.
pub fn log_prob_graph(g: &PaGraph, weight_mode: WeightMode) -> f64 {
    let mut weights = Weights::new(g.m(), g.n(), weight_mode);
    let mut total = 0.0;
    for (_, step) in g.steps() {
        total += log_orderings(step) + weights.log_prob_ordered(step);
        weights.push(step);
    }
    total
}

/// [`log_prob_graph`] for a raw multigraph, which fails when the graph could
/// not have been generated.
pub fn log_prob_multigraph(g: &Multigraph, m: u32, weight_mode: WeightMode) -> Result<f64> {
    let pa = g
        .to_pa_graph(m, weight_mode)
        .ok_or_else(|| Error::Inadmissible(format!("graph on {} vertices is not m-left regular for m = {m}", g.n())))?;
    Ok(log_prob_graph(&pa, weight_mode))
}
