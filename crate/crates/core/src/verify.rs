//! Exhaustive oracle suites over all small admissible graphs.

use serde::{Deserialize, Serialize};

use crate::dag::brute_force_gamma_adm;
use crate::entropy::{for_each_log_prob, log_prob_graph};
use crate::error::{Error, Result};
use crate::model::{admissible_count, for_each_admissible, WeightMode};
use crate::symmetry::{aut_order, brute_force_aut_order};

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    /// Graphs (or graph families) checked.
    pub cases: u64,
    pub failures: u64,
    /// First failure, if any.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_n: u32,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

/// Largest `max_n` accepted by [`run_verification`].
pub const VERIFY_MAX_N: u32 = 10;

/// Graph families enumerated per suite, as `(m, largest n)` caps; each is
/// further limited by `max_n`.
const AUT_FAMILIES: [(u32, u32); 3] = [(1, 7), (2, 5), (3, 4)];
const NORMALISATION_FAMILIES: [(u32, u32); 4] = [(1, 10), (2, 6), (3, 5), (4, 4)];
const GAMMA_FAMILIES: [(u32, u32); 3] = [(1, 6), (2, 5), (3, 4)];

/// Runs the automorphism, normalisation and relabeling-identity suites on
/// every admissible graph with at most `max_n` vertices (within per-family
/// caps that keep the run short).
pub fn run_verification(max_n: u32) -> Result<VerifyReport> {
    if max_n == 0 || max_n > VERIFY_MAX_N {
        return Err(Error::invalid(format!("max_n must lie in 1..={VERIFY_MAX_N}")));
    }
    let mode = WeightMode::default();

    let mut aut = SuiteReport::new("aut_order matches brute force");
    for (m, cap) in AUT_FAMILIES {
        for n in 1..=cap.min(max_n) {
            let mut outcome = Ok(());
            for_each_admissible(m, n, mode, u128::MAX, |g| {
                if outcome.is_err() {
                    return;
                }
                let mg = g.to_multigraph();
                match (aut_order(&mg), brute_force_aut_order(&mg)) {
                    (Ok(a), Ok(b)) => aut.record(a.order == b.order, || {
                        format!("m={m} n={n} choices={:?}: {} vs {}", g.flat_choices(), a.order, b.order)
                    }),
                    (Err(e), _) | (_, Err(e)) => outcome = Err(e),
                }
            })?;
            outcome?;
        }
    }

    let mut norm = SuiteReport::new("probabilities sum to one");
    for (m, cap) in NORMALISATION_FAMILIES {
        for n in 1..=cap.min(max_n) {
            for mode in [WeightMode::SelfLoopDoubled, WeightMode::ProperRenormalized] {
                let mut total = 0.0;
                for_each_log_prob(m, n, mode, admissible_count(m, n), |_, lp| total += lp.exp())?;
                norm.record((total - 1.0).abs() <= 1e-10, || {
                    format!("m={m} n={n} {mode:?}: total {total}")
                });
            }
        }
    }
    // spot-check the direct formula against the incremental one
    for_each_admissible(2, 4.min(max_n), mode, u128::MAX, |g| {
        let direct = log_prob_graph(g, mode);
        norm.record(direct.is_finite() && direct <= 0.0, || {
            format!("m=2: bad log-probability {direct}")
        });
    })?;

    let mut gamma = SuiteReport::new("gamma = adm * aut");
    for (m, cap) in GAMMA_FAMILIES {
        for n in 1..=cap.min(max_n) {
            let mut outcome = Ok(());
            for_each_admissible(m, n, mode, u128::MAX, |g| {
                if outcome.is_err() {
                    return;
                }
                for restrict in [false, true] {
                    match brute_force_gamma_adm(g, restrict) {
                        Ok(c) => gamma.record(c.identity_holds(), || {
                            format!("m={m} n={n} choices={:?}: {c:?}", g.flat_choices())
                        }),
                        Err(e) => outcome = Err(e),
                    }
                }
            })?;
            outcome?;
        }
    }

    Ok(VerifyReport {
        max_n,
        suites: vec![aut, norm, gamma],
    })
}
