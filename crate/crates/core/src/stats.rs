//! Small estimators shared by the Monte Carlo drivers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl MeanEstimate {
    /// Mean and standard error (`sd / sqrt(n)` with the `n - 1` variance).
    /// A single sample has zero standard error.
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return MeanEstimate {
                mean: f64::NAN,
                stderr: f64::NAN,
                samples: 0,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (n - 1) as f64 / n as f64).sqrt()
        } else {
            0.0
        };
        MeanEstimate {
            mean,
            stderr,
            samples: n,
        }
    }

    pub fn sample_sd(&self) -> f64 {
        self.stderr * (self.samples as f64).sqrt()
    }
}

/// Fraction of trials with some property, with binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub rate: f64,
    pub stderr: f64,
    pub hits: usize,
    pub trials: usize,
}

impl RateEstimate {
    pub fn new(hits: usize, trials: usize) -> Self {
        let rate = hits as f64 / trials as f64;
        RateEstimate {
            rate,
            stderr: (rate * (1.0 - rate) / trials as f64).sqrt(),
            hits,
            trials,
        }
    }

    pub fn from_flags(flags: &[bool]) -> Self {
        RateEstimate::new(flags.iter().filter(|&&f| f).count(), flags.len())
    }
}

/// Runs `trial` for indices `0..trials` in parallel and returns the results in
/// index order, so any reduction over them is independent of scheduling.
pub fn run_trials<T, F>(trials: usize, trial: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    (0..trials as u64).into_par_iter().map(&trial).collect()
}
