//! The chooser-to-chosen orientation of a PA graph and its levels.
//!
//! Orienting every non-loop edge from the vertex that made the choice to the
//! vertex chosen gives a DAG whose arcs all point to smaller labels. Level 1
//! holds the vertices nobody chose; a chosen vertex sits one level above the
//! highest of its choosers. Equivalently, `level(w) - 1` is the length of
//! the longest chain of choices `v_k -> ... -> v_1 -> w`.

mod brute;

use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

pub use brute::{brute_force_gamma_adm, count_udags, GammaAdm, BRUTE_FORCE_DAG_MAX_N};

use crate::error::{Error, Result};
use crate::model::{generate_trial, PaGraph, Vertex, WeightMode};
use crate::rng::trial_seed;
use crate::stats::{run_trials, MeanEstimate, RateEstimate};

/// Directed view of a graph: arc `u -> v` for each distinct choice `v` of
/// `u`, with the number of times it was chosen.
#[derive(Debug, Clone, Copy)]
pub struct DagView<'a> {
    graph: &'a PaGraph,
}

impl<'a> DagView<'a> {
    pub fn new(graph: &'a PaGraph) -> Self {
        DagView { graph }
    }

    pub fn graph(&self) -> &'a PaGraph {
        self.graph
    }

    /// Distinct targets of `u` with multiplicities, ascending.
    pub fn out_arcs(&self, u: Vertex) -> impl Iterator<Item = (Vertex, u32)> + 'a {
        let step: &'a [Vertex] = if u >= 2 { self.graph.choices_of(u) } else { &[] };
        step.chunk_by(|a, b| a == b).map(|run| (run[0], run.len() as u32))
    }

    /// All arcs `(u, v, multiplicity)`, by increasing `u`.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex, u32)> + 'a {
        let view = *self;
        (2..=self.graph.n()).flat_map(move |u| view.out_arcs(u).map(move |(v, k)| (u, v, k)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDecomposition {
    /// `level[v - 1]`, starting from 1.
    pub level: Vec<u32>,
    /// `sizes[j - 1] = |L_j|`.
    pub sizes: Vec<u64>,
}

impl LevelDecomposition {
    pub fn level_of(&self, v: Vertex) -> u32 {
        self.level[v as usize - 1]
    }

    pub fn max_level(&self) -> u32 {
        self.sizes.len() as u32
    }
}

/// Levels of every vertex. Choosers have larger labels than what they
/// choose, so one pass from `n` down to 2 finalises each level before it is
/// propagated.
pub fn levels(g: &PaGraph) -> LevelDecomposition {
    let n = g.n() as usize;
    let mut level = vec![1u32; n];
    let dag = DagView::new(g);
    for u in (2..=g.n()).rev() {
        let above = level[u as usize - 1] + 1;
        for (v, _) in dag.out_arcs(u) {
            let slot = &mut level[v as usize - 1];
            *slot = (*slot).max(above);
        }
    }
    let top = level.iter().copied().max().unwrap_or(0) as usize;
    let mut sizes = vec![0u64; top];
    for &l in &level {
        sizes[l as usize - 1] += 1;
    }
    LevelDecomposition { level, sizes }
}

/// `(X, Y)`: the vertices ending a chain of choices of length at least `k`
/// (level at least `k + 1`), counting only `w > eps n` for `X`.
pub fn high_level_count(g: &PaGraph, eps: f64, k: u32) -> Result<(u64, u64)> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::invalid(format!("eps = {eps} is outside [0, 1]")));
    }
    Ok(count_high(&levels(g), eps, k))
}

fn count_high(dec: &LevelDecomposition, eps: f64, k: u32) -> (u64, u64) {
    let n = dec.level.len() as f64;
    let mut x = 0;
    let mut y = 0;
    for (i, &l) in dec.level.iter().enumerate() {
        if u64::from(l) > u64::from(k) {
            y += 1;
            if (i + 1) as f64 > eps * n {
                x += 1;
            }
        }
    }
    (x, y)
}

/// Monte Carlo mean of `X(eps, k)`.
pub fn mean_high_level(
    m: u32,
    n: u32,
    eps: f64,
    k: u32,
    trials: usize,
    seed: u64,
    weight_mode: WeightMode,
) -> Result<MeanEstimate> {
    if trials < 2 {
        return Err(Error::invalid("trials must be at least 2"));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::invalid(format!("eps = {eps} is outside [0, 1]")));
    }
    let xs = run_trials(trials, |i| -> Result<f64> {
        let g = generate_trial(m, n, seed, i, weight_mode)?;
        Ok(count_high(&levels(&g), eps, k).0 as f64)
    });
    Ok(MeanEstimate::from_samples(&xs.into_iter().collect::<Result<Vec<_>>>()?))
}

/// Smallest `k` with `k >= 15 (m / eps^2) ln(3 / eps)`.
pub fn chain_threshold(m: u32, eps: f64) -> u32 {
    (15.0 * f64::from(m) / (eps * eps) * (3.0 / eps).ln()).ceil() as u32
}

/// `sum_j ln(|L_j|!)`: the log of the number of relabelings that only
/// shuffle vertices within their levels.
pub fn gamma_log_lower_bound(g: &PaGraph) -> f64 {
    level_factorial_log(&levels(g))
}

fn level_factorial_log(dec: &LevelDecomposition) -> f64 {
    dec.sizes.iter().map(|&s| ln_factorial(s)).sum()
}

/// `ceil(15m / (2 delta^4) ln(3 / (2 delta^2)))`.
pub fn deep_level_threshold(m: u32, delta: f64) -> u32 {
    let d2 = delta * delta;
    (15.0 * f64::from(m) / (2.0 * d2 * d2) * (3.0 / (2.0 * d2)).ln()).ceil() as u32
}

/// Fraction of trials in which more than `delta n` vertices lie above level
/// [`deep_level_threshold`]`(m, delta)`; returns the threshold too.
pub fn deep_level_violation_rate(
    m: u32,
    n: u32,
    delta: f64,
    trials: usize,
    seed: u64,
    weight_mode: WeightMode,
) -> Result<(u32, RateEstimate)> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta = {delta} is outside (0, 1)")));
    }
    let ell = deep_level_threshold(m, delta);
    let flags = run_trials(trials, |i| -> Result<bool> {
        let dec = levels(&generate_trial(m, n, seed, i, weight_mode)?);
        let deep = dec.level.iter().filter(|&&l| l > ell).count();
        Ok(deep as f64 > delta * f64::from(n))
    });
    Ok((
        ell,
        RateEstimate::from_flags(&flags.into_iter().collect::<Result<Vec<_>>>()?),
    ))
}

/// How many leading level sizes a [`DagTrialRow`] carries.
pub const SIZES_HEAD: usize = 5;

/// Per-trial summary for the level CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DagTrialRow {
    pub n: u32,
    pub m: u32,
    pub seed: u64,
    pub level_max: u32,
    /// `|L_1|, ..., |L_5|`, zero-padded.
    pub sizes_head: [u64; SIZES_HEAD],
    pub x: u64,
    pub y: u64,
    pub gamma_log_lb: f64,
}

pub fn dag_trial(
    m: u32,
    n: u32,
    seed: u64,
    trial: u64,
    eps: f64,
    k: u32,
    weight_mode: WeightMode,
) -> Result<DagTrialRow> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::invalid(format!("eps = {eps} is outside [0, 1]")));
    }
    let g = generate_trial(m, n, seed, trial, weight_mode)?;
    let dec = levels(&g);
    let (x, y) = count_high(&dec, eps, k);
    let mut sizes_head = [0u64; SIZES_HEAD];
    for (slot, &s) in sizes_head.iter_mut().zip(&dec.sizes) {
        *slot = s;
    }
    Ok(DagTrialRow {
        n,
        m,
        seed: trial_seed(seed, trial),
        level_max: dec.max_level(),
        sizes_head,
        x,
        y,
        gamma_log_lb: level_factorial_log(&dec),
    })
}
