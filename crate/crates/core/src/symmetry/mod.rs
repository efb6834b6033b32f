//! Automorphism groups, the asymmetry certificate and symmetry rates.

mod aut;
mod certificate;
mod partition;

use serde::{Deserialize, Serialize};

pub(crate) use aut::for_each_permutation;
pub use aut::{
    aut_order, aut_order_with_budget, brute_force_aut_order, AutMethod, AutResult, BRUTE_FORCE_MAX_N,
    DEFAULT_NODE_BUDGET,
};
pub use certificate::{
    asymmetry_certificate, check_property_a, check_property_b, default_k_candidates, CertificateResult, Verdict,
    Witness,
};

use crate::error::{Error, Result};
use crate::model::{generate_trial, WeightMode};
use crate::rng::trial_seed;
use crate::stats::{run_trials, RateEstimate};

/// How a symmetry experiment decides each graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateMethod {
    /// Count graphs with `|Aut| > 1`.
    Exact,
    /// Count graphs the certificate fails to certify (an upper bound).
    Certificate,
}

/// Per-trial outcome of a symmetry experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryRecord {
    pub m: u32,
    pub n: u32,
    /// The derived seed the trial's graph was generated from.
    pub seed: u64,
    pub method: RateMethod,
    /// Decimal `|Aut(G)|`; exact method only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub aut_order: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_used: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

impl SymmetryRecord {
    /// Whether the trial counts towards the rate.
    pub fn is_hit(&self) -> bool {
        match self.method {
            RateMethod::Exact => self.aut_order.as_deref() != Some("1"),
            RateMethod::Certificate => self.verdict != Some(Verdict::CertifiedAsymmetric),
        }
    }
}

/// Runs trial `trial` of a symmetry experiment.
pub fn symmetry_trial(
    m: u32,
    n: u32,
    seed: u64,
    trial: u64,
    weight_mode: WeightMode,
    method: RateMethod,
) -> Result<SymmetryRecord> {
    let g = generate_trial(m, n, seed, trial, weight_mode)?;
    let mut record = SymmetryRecord {
        m,
        n,
        seed: trial_seed(seed, trial),
        method,
        aut_order: None,
        verdict: None,
        k_used: None,
        witness: None,
        elapsed_ms: None,
    };
    match method {
        RateMethod::Exact => {
            record.aut_order = Some(aut_order(&g.to_multigraph())?.order.to_string());
        }
        RateMethod::Certificate => {
            let c = asymmetry_certificate(&g, &default_k_candidates(n))?;
            record.verdict = Some(c.verdict);
            record.k_used = Some(c.k_used);
            record.witness = c.witness;
        }
    }
    Ok(record)
}

/// Fraction of `trials` graphs that are symmetric (exact) or uncertified
/// (certificate), with its binomial standard error.
pub fn symmetry_rate(
    m: u32,
    n: u32,
    trials: usize,
    seed: u64,
    weight_mode: WeightMode,
    method: RateMethod,
) -> Result<RateEstimate> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let records = run_trials(trials, |i| symmetry_trial(m, n, seed, i, weight_mode, method));
    let mut flags = Vec::with_capacity(trials);
    for r in records {
        flags.push(r?.is_hit());
    }
    Ok(RateEstimate::from_flags(&flags))
}
