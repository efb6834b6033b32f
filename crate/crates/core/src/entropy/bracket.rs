use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::dag::gamma_log_lower_bound;
use crate::entropy::{log_prob_graph, EntropyEstimate, EntropyMethod};
use crate::error::{Error, Result};
use crate::model::{generate_trial, WeightMode};
use crate::stats::{run_trials, MeanEstimate};
use crate::symmetry::{asymmetry_certificate, aut_order, default_k_candidates, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketComponents {
    pub h_g: EntropyEstimate,
    /// Mean of `sum_j ln |L_j|!` over the samples.
    pub gamma_log_lb_mean: f64,
    pub log_factorial_n: f64,
    /// Mean of `ln |Aut(G)|` over the samples.
    pub aut_log_mean: f64,
    /// Samples whose asymmetry the certificate settled without a search.
    pub certified: u64,
}

/// An interval for the structural entropy `H(S(G))`, in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuralBracket {
    pub m: u32,
    pub n: u32,
    pub lower: f64,
    pub upper: f64,
    pub components: BracketComponents,
}

impl StructuralBracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

struct Sample {
    surprisal: f64,
    gamma_log_lb: f64,
    aut_log: f64,
    certified: bool,
}

/// Brackets `H(S(G)) = H(G) - H(relabeling | labeled graph) + E ln |Aut(G)|`.
///
/// The middle term lies between `E sum_j ln |L_j|!` (relabelings within
/// levels keep a graph admissible) and `ln n!`. All three estimates come from
/// the same sampled graphs. `ln |Aut|` is taken as zero when the certificate
/// succeeds and computed exactly otherwise.
pub fn structural_entropy_estimate(
    m: u32,
    n: u32,
    samples: usize,
    seed: u64,
    weight_mode: WeightMode,
) -> Result<StructuralBracket> {
    if samples < 2 {
        return Err(Error::invalid("the bracket needs at least 2 samples"));
    }
    let ks = default_k_candidates(n);
    let results = run_trials(samples, |i| -> Result<Sample> {
        let g = generate_trial(m, n, seed, i, weight_mode)?;
        let certified = asymmetry_certificate(&g, &ks)?.verdict == Verdict::CertifiedAsymmetric;
        let aut_log = if certified {
            0.0
        } else {
            aut_order(&g.to_multigraph())?.log_order()
        };
        Ok(Sample {
            surprisal: -log_prob_graph(&g, weight_mode),
            gamma_log_lb: gamma_log_lower_bound(&g),
            aut_log,
            certified,
        })
    });
    let samples_ok: Vec<Sample> = results.into_iter().collect::<Result<_>>()?;
    let mean = |f: fn(&Sample) -> f64| samples_ok.iter().map(f).sum::<f64>() / samples_ok.len() as f64;
    let h = MeanEstimate::from_samples(&samples_ok.iter().map(|s| s.surprisal).collect::<Vec<_>>());
    let gamma_log_lb_mean = mean(|s| s.gamma_log_lb);
    let aut_log_mean = mean(|s| s.aut_log);
    let log_factorial_n = ln_factorial(u64::from(n));
    let components = BracketComponents {
        h_g: EntropyEstimate {
            value: h.mean,
            stderr: h.stderr,
            samples: samples as u64,
            method: EntropyMethod::MonteCarlo,
        },
        gamma_log_lb_mean,
        log_factorial_n,
        aut_log_mean,
        certified: samples_ok.iter().filter(|s| s.certified).count() as u64,
    };
    Ok(StructuralBracket {
        m,
        n,
        lower: h.mean - log_factorial_n + aut_log_mean,
        upper: h.mean - gamma_log_lb_mean + aut_log_mean,
        components,
    })
}
