//! Labeled-graph entropy: exact, Monte Carlo and asymptotic, plus the
//! bracket on structural entropy.

mod bracket;
mod exact;
mod probability;
mod series;

use serde::{Deserialize, Serialize};

pub use bracket::{structural_entropy_estimate, BracketComponents, StructuralBracket};
pub use exact::{exact_entropy, for_each_log_prob, EXACT_ENTROPY_BUDGET};
pub use probability::{log_prob_graph, log_prob_multigraph, log_prob_sequence};
pub use series::{
    asymptotic_entropy, constant_a, constant_a_value, rederived_linear_coefficient, stated_linear_coefficient,
    SeriesEnclosure, MAX_CUTOFF,
};

use crate::error::{Error, Result};
use crate::model::{generate_trial, WeightMode};
use crate::stats::{run_trials, MeanEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMethod {
    Exact,
    MonteCarlo,
    Asymptotic,
}

/// An entropy value in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub value: f64,
    /// Zero for exact and closed-form values.
    pub stderr: f64,
    /// Graphs enumerated or sampled.
    pub samples: u64,
    pub method: EntropyMethod,
}

impl EntropyEstimate {
    pub fn asymptotic(m: u32, n: u32) -> Self {
        EntropyEstimate {
            value: asymptotic_entropy(m, n),
            stderr: 0.0,
            samples: 0,
            method: EntropyMethod::Asymptotic,
        }
    }

    pub fn in_bits(&self) -> Self {
        EntropyEstimate {
            value: self.value / std::f64::consts::LN_2,
            stderr: self.stderr / std::f64::consts::LN_2,
            ..*self
        }
    }
}

/// `-ln P(G)` for each of `samples` generated graphs.
pub fn surprisals(m: u32, n: u32, samples: usize, seed: u64, weight_mode: WeightMode) -> Result<Vec<f64>> {
    run_trials(samples, |i| -> Result<f64> {
        let g = generate_trial(m, n, seed, i, weight_mode)?;
        Ok(-log_prob_graph(&g, weight_mode))
    })
    .into_iter()
    .collect()
}

/// Monte Carlo `H(G)`: the mean surprisal of `samples` generated graphs.
pub fn mc_entropy(m: u32, n: u32, samples: usize, seed: u64, weight_mode: WeightMode) -> Result<EntropyEstimate> {
    if samples < 2 {
        return Err(Error::invalid("Monte Carlo entropy needs at least 2 samples"));
    }
    let e = MeanEstimate::from_samples(&surprisals(m, n, samples, seed, weight_mode)?);
    Ok(EntropyEstimate {
        value: e.mean,
        stderr: e.stderr,
        samples: samples as u64,
        method: EntropyMethod::MonteCarlo,
    })
}

/// Machine-readable entropy result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyRecord {
    pub m: u32,
    pub n: u32,
    pub method: EntropyMethod,
    pub value_nats: f64,
    pub stderr: f64,
    pub samples: u64,
    #[serde(rename = "constant_A")]
    pub constant_a: f64,
    pub enclosure_width: f64,
}

impl EntropyRecord {
    pub fn new(m: u32, n: u32, estimate: &EntropyEstimate, a: &SeriesEnclosure) -> Self {
        EntropyRecord {
            m,
            n,
            method: estimate.method,
            value_nats: estimate.value,
            stderr: estimate.stderr,
            samples: estimate.samples,
            constant_a: a.midpoint(),
            enclosure_width: a.width(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mc_needs_two_samples() {
        assert!(mc_entropy(1, 3, 1, 0, WeightMode::default()).is_err());
    }

    #[test]
    fn mc_is_reproducible() {
        let a = mc_entropy(3, 300, 20, 9, WeightMode::default()).unwrap();
        let b = mc_entropy(3, 300, 20, 9, WeightMode::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.stderr > 0.0);
        assert_eq!(a.method, EntropyMethod::MonteCarlo);
    }

    #[test]
    fn bits() {
        let e = EntropyEstimate {
            value: std::f64::consts::LN_2 * 3.0,
            stderr: 0.0,
            samples: 1,
            method: EntropyMethod::Exact,
        };
        assert!((e.in_bits().value - 3.0).abs() < 1e-15);
    }

    #[test]
    fn record_field_names() {
        let e = exact_entropy(1, 3, WeightMode::default()).unwrap();
        let a = constant_a(1, 1e-3).unwrap();
        let json = serde_json::to_value(EntropyRecord::new(1, 3, &e, &a)).unwrap();
        for key in [
            "m",
            "n",
            "method",
            "value_nats",
            "stderr",
            "samples",
            "constant_A",
            "enclosure_width",
        ] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["method"], "exact");
    }
}
