//! Degree statistics and the closed forms they are compared against.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::function::factorial::binomial;

use crate::error::{Error, Result};
use crate::model::{generate_trial, PaGraph, Vertex, WeightMode};
use crate::stats::{run_trials, MeanEstimate, RateEstimate};

/// `N_{t,d}`: how many of the vertices `1..=t` have degree `d` at time `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    pub t: Vertex,
    pub counts: BTreeMap<u32, u64>,
}

impl DegreeHistogram {
    pub fn count(&self, d: u32) -> u64 {
        self.counts.get(&d).copied().unwrap_or(0)
    }

    /// Number of vertices counted; equals `t`.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Sum of degrees; equals `2mt - m`.
    pub fn degree_sum(&self) -> u64 {
        self.counts.iter().map(|(&d, &c)| u64::from(d) * c).sum()
    }
}

pub fn empirical_degree_counts(g: &PaGraph, t: Vertex) -> Result<DegreeHistogram> {
    let view = g.degree_view(t)?;
    let mut counts = BTreeMap::new();
    for &d in view.as_slice() {
        *counts.entry(d).or_insert(0) += 1;
    }
    Ok(DegreeHistogram { t, counts })
}

/// Exact expected degree counts `E[N_{t,d}]` for `m = 1`, `t <= t_max`.
#[derive(Debug, Clone)]
pub struct ExpectedDegreeTable {
    rows: Vec<Vec<f64>>,
}

impl ExpectedDegreeTable {
    pub fn t_max(&self) -> Vertex {
        self.rows.len() as Vertex
    }

    /// `E[N_{t,d}]`, zero outside the support.
    pub fn get(&self, t: Vertex, d: u32) -> f64 {
        self.rows
            .get(t as usize - 1)
            .and_then(|row| row.get(d as usize))
            .copied()
            .unwrap_or(0.0)
    }

    /// Row `t`, indexed by degree.
    pub fn row(&self, t: Vertex) -> &[f64] {
        &self.rows[t as usize - 1]
    }
}

/// Runs the `m = 1` expected-count recurrence up to `t_max`.
///
/// The recurrence works with sampling weights, which sum to exactly
/// `2(t - 1)` when vertex `t` arrives. Vertices `2, 3, ...` have weight equal
/// to degree. Vertex 1 has weight one more than its reported degree, so its
/// weight distribution is carried separately and shifted back when the table
/// is read out.
pub fn expected_degree_counts_dp(m: u32, t_max: Vertex) -> Result<ExpectedDegreeTable> {
    if m != 1 {
        return Err(Error::invalid(format!(
            "the exact recurrence is for m = 1 only; estimate m = {m} by simulation (degree_count_estimates)"
        )));
    }
    if t_max == 0 {
        return Err(Error::invalid("t_max must be at least 1"));
    }
    let size = t_max as usize + 3;
    // others[d]: expected number of vertices v >= 2 with degree d.
    let mut others = vec![0.0f64; size];
    // first[w]: probability that vertex 1 has weight w.
    let mut first = vec![0.0f64; size];
    first[2] = 1.0;
    let mut rows = Vec::with_capacity(t_max as usize);
    let read_out = |others: &[f64], first: &[f64], t: usize| {
        let mut row = vec![0.0; t + 2];
        for (d, slot) in row.iter_mut().enumerate() {
            *slot = others[d] + first.get(d + 1).copied().unwrap_or(0.0);
        }
        row
    };
    rows.push(read_out(&others, &first, 1));
    for t in 2..=t_max as usize {
        let total = 2.0 * (t - 1) as f64;
        for d in (1..=t).rev() {
            let stay = others[d] * (1.0 - d as f64 / total);
            let arrive = others[d - 1] * (d - 1) as f64 / total;
            others[d] = stay + arrive;
        }
        // the newcomer itself, with degree 1
        others[1] += 1.0;
        for w in (2..=t + 1).rev() {
            first[w] = first[w] * (1.0 - w as f64 / total) + first[w - 1] * (w - 1) as f64 / total;
        }
        rows.push(read_out(&others, &first, t));
    }
    Ok(ExpectedDegreeTable { rows })
}

/// `d -> 2m(m+1)t / (d(d+1)(d+2))` for fixed `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryCurve {
    pub m: u32,
}

impl TheoryCurve {
    pub fn eval(&self, t: f64, d: f64) -> f64 {
        let m = f64::from(self.m);
        2.0 * m * (m + 1.0) * t / (d * (d + 1.0) * (d + 2.0))
    }
}

pub fn theory_degree_curve(m: u32, t: f64, d: f64) -> f64 {
    TheoryCurve { m }.eval(t, d)
}

/// `5m (vw)^(-1/2) ln(3v/w)`, an asymptotic bound on the probability that
/// `v` is adjacent to `w < v`.
pub fn adjacency_bound(m: u32, v: Vertex, w: Vertex) -> Result<f64> {
    if w == 0 || w >= v {
        return Err(Error::invalid(format!(
            "adjacency_bound needs 1 <= w < v, got v={v}, w={w}"
        )));
    }
    let (v, w) = (f64::from(v), f64::from(w));
    Ok(5.0 * f64::from(m) / (v * w).sqrt() * (3.0 * v / w).ln())
}

/// `C(m+d-1, m-1) (1 - sqrt(w/v))^d`: a heuristic reference curve for the
/// probability that `w` has received `d` edges by time `v`. The correction
/// term of unknown constant is left out, so this is not a certified bound.
pub fn degree_prob_bound(m: u32, v: Vertex, w: Vertex, d: u32) -> f64 {
    let base = 1.0 - (f64::from(w) / f64::from(v)).sqrt();
    binomial(u64::from(m + d - 1), u64::from(m - 1)) * base.powi(d as i32)
}

/// Means and standard errors of `N_{t,d}` over simulated graphs, for every
/// `t` in `times` and `d = 1..=d_max`. Result is indexed `[time][d - 1]`.
pub fn degree_count_estimates(
    m: u32,
    n: Vertex,
    times: &[Vertex],
    d_max: u32,
    trials: usize,
    seed: u64,
    weight_mode: WeightMode,
) -> Result<Vec<Vec<MeanEstimate>>> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if let Some(&t) = times.iter().find(|&&t| t == 0 || t > n) {
        return Err(Error::invalid(format!("time {t} outside 1..={n}")));
    }
    let mut sorted = times.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let per_trial = run_trials(trials, |i| -> Result<Vec<Vec<f64>>> {
        let g = generate_trial(m, n, seed, i, weight_mode)?;
        let mut degree = vec![m; n as usize];
        let mut count = vec![0u64; d_max as usize + 1];
        let bump = |count: &mut Vec<u64>, d: u32, delta: i64| {
            if (d as usize) < count.len() {
                count[d as usize] = (count[d as usize] as i64 + delta) as u64;
            }
        };
        bump(&mut count, m, 1);
        let mut snaps = Vec::with_capacity(sorted.len());
        let mut next = 0;
        for t in 1..=n {
            if t >= 2 {
                for &w in g.choices_of(t) {
                    let d = &mut degree[w as usize - 1];
                    bump(&mut count, *d, -1);
                    *d += 1;
                    bump(&mut count, *d, 1);
                }
                bump(&mut count, m, 1);
            }
            while next < sorted.len() && sorted[next] == t {
                snaps.push(count[1..].iter().map(|&c| c as f64).collect());
                next += 1;
            }
        }
        Ok(snaps)
    });
    let per_trial: Vec<Vec<Vec<f64>>> = per_trial.into_iter().collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let idx = sorted.binary_search(&t).expect("time present");
        let column: Vec<MeanEstimate> = (0..d_max as usize)
            .map(|d| {
                let values: Vec<f64> = per_trial.iter().map(|snaps| snaps[idx][d]).collect();
                MeanEstimate::from_samples(&values)
            })
            .collect();
        out.push(column);
    }
    Ok(out)
}

/// One row of the degree-law comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeLawRow {
    pub t: Vertex,
    pub d: u32,
    pub empirical_mean: f64,
    pub empirical_stderr: f64,
    pub theory: f64,
    pub ratio: f64,
}

/// Simulated `N_{n,d}` against `2m(m+1)n / (d(d+1)(d+2))` for `d = m..=d_max`.
pub fn degree_law_table(
    m: u32,
    n: Vertex,
    d_max: u32,
    trials: usize,
    seed: u64,
    weight_mode: WeightMode,
) -> Result<Vec<DegreeLawRow>> {
    let est = degree_count_estimates(m, n, &[n], d_max, trials, seed, weight_mode)?;
    let curve = TheoryCurve { m };
    Ok((m..=d_max)
        .map(|d| {
            let e = est[0][d as usize - 1];
            let theory = curve.eval(f64::from(n), f64::from(d));
            DegreeLawRow {
                t: n,
                d,
                empirical_mean: e.mean,
                empirical_stderr: e.stderr,
                theory,
                ratio: e.mean / theory,
            }
        })
        .collect())
}

/// `(d, mean N_{n,d} d^3 / n)` for the rows with `d >= n^(1/15)`; bounded
/// when the tail decays cubically.
pub fn scaled_degree_tail(rows: &[DegreeLawRow]) -> Vec<(u32, f64)> {
    rows.iter()
        .filter(|r| f64::from(r.d) >= f64::from(r.t).powf(1.0 / 15.0))
        .map(|r| (r.d, r.empirical_mean * f64::from(r.d).powi(3) / f64::from(r.t)))
        .collect()
}

fn check_trials(trials: usize, least: usize) -> Result<()> {
    if trials < least {
        return Err(Error::invalid(format!("trials must be at least {least}")));
    }
    Ok(())
}

/// Fraction of trials in which two of the first `ceil(n^window_exponent)`
/// vertices end with equal degree.
pub fn early_degree_collision_rate(
    m: u32,
    n: Vertex,
    trials: usize,
    seed: u64,
    window_exponent: f64,
    weight_mode: WeightMode,
) -> Result<RateEstimate> {
    check_trials(trials, 1)?;
    if !(0.0..=1.0).contains(&window_exponent) {
        return Err(Error::invalid("window exponent must lie in [0, 1]"));
    }
    let window = (f64::from(n).powf(window_exponent).ceil() as usize).min(n as usize);
    let flags = run_trials(trials, |i| -> Result<bool> {
        let deg = generate_trial(m, n, seed, i, weight_mode)?.degrees();
        let mut head = deg[..window].to_vec();
        head.sort_unstable();
        Ok(head.windows(2).any(|p| p[0] == p[1]))
    });
    Ok(RateEstimate::from_flags(
        &flags.into_iter().collect::<Result<Vec<_>>>()?,
    ))
}

/// Fraction of trials with `|deg_n(s) - mean| > y`, the mean taken across
/// the same trials.
pub fn tail_deviation_rate(
    m: u32,
    n: Vertex,
    s: Vertex,
    y: f64,
    trials: usize,
    seed: u64,
    weight_mode: WeightMode,
) -> Result<RateEstimate> {
    check_trials(trials, 2)?;
    if s == 0 || s >= n {
        return Err(Error::invalid(format!("vertex {s} must satisfy 1 <= s < n = {n}")));
    }
    if y.is_nan() || y < 0.0 {
        return Err(Error::invalid("deviation threshold must be nonnegative"));
    }
    let degrees = final_degrees_of(m, n, s, trials, seed, weight_mode)?;
    let mean = degrees.iter().sum::<f64>() / degrees.len() as f64;
    let flags: Vec<bool> = degrees.iter().map(|d| (d - mean).abs() > y).collect();
    Ok(RateEstimate::from_flags(&flags))
}

/// `deg_n(s)` in each of `trials` simulated graphs.
pub fn final_degrees_of(
    m: u32,
    n: Vertex,
    s: Vertex,
    trials: usize,
    seed: u64,
    weight_mode: WeightMode,
) -> Result<Vec<f64>> {
    if s == 0 || s > n {
        return Err(Error::invalid(format!("vertex {s} outside 1..={n}")));
    }
    run_trials(trials, |i| -> Result<f64> {
        Ok(f64::from(
            generate_trial(m, n, seed, i, weight_mode)?.degrees()[s as usize - 1],
        ))
    })
    .into_iter()
    .collect()
}

/// Fraction of trials in which `v` chose `w` at least once.
pub fn adjacency_frequency(
    m: u32,
    n: Vertex,
    v: Vertex,
    w: Vertex,
    trials: usize,
    seed: u64,
    weight_mode: WeightMode,
) -> Result<RateEstimate> {
    check_trials(trials, 1)?;
    if w == 0 || w >= v || v > n {
        return Err(Error::invalid(format!("need 1 <= w < v <= n, got v={v}, w={w}, n={n}")));
    }
    let flags = run_trials(trials, |i| -> Result<bool> {
        Ok(generate_trial(m, n, seed, i, weight_mode)?.choices_of(v).contains(&w))
    });
    Ok(RateEstimate::from_flags(
        &flags.into_iter().collect::<Result<Vec<_>>>()?,
    ))
}
