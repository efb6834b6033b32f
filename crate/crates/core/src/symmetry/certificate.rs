//! A cheap sufficient condition for asymmetry.
//!
//! Fix a threshold `k`. Property A asks that no two vertices `k < t1 < t2`
//! made the same multiset of choices. Property B asks that each vertex
//! `s <= k` has a degree no other vertex shares. Together they force every
//! automorphism to be the identity: B pins `1..=k`, and if some automorphism
//! moved a vertex, the smallest moved vertex `t1 > k` would be sent to some
//! `t2 > t1` whose choices, all fixed, coincide with those of `t1`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PaGraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedAsymmetric,
    Unknown,
}

/// Why a threshold failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `t1 < t2`, both above the threshold, made identical choices.
    SharedChoices { t1: Vertex, t2: Vertex },
    /// `s` is at most the threshold and `other` has the same final degree.
    SharedDegree { s: Vertex, other: Vertex },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateResult {
    pub verdict: Verdict,
    /// The threshold that certified the graph, or the last one tried.
    pub k_used: u32,
    pub witness: Option<Witness>,
}

/// Property A at threshold `k`. On failure the witness is the
/// lexicographically first offending pair.
pub fn check_property_a(g: &PaGraph, k: u32) -> (bool, Option<Witness>) {
    let mut first_of: HashMap<&[Vertex], Vertex> = HashMap::new();
    let mut best: Option<(Vertex, Vertex)> = None;
    for t in (k + 1).max(2)..=g.n() {
        match first_of.get(g.choices_of(t)) {
            Some(&t1) => {
                // The earliest partner of t1 is met first, so the minimum over
                // (t1, t) pairs is the lexicographic minimum.
                if best.is_none_or(|(b1, _)| t1 < b1) {
                    best = Some((t1, t));
                }
            }
            None => {
                first_of.insert(g.choices_of(t), t);
            }
        }
    }
    match best {
        Some((t1, t2)) => (false, Some(Witness::SharedChoices { t1, t2 })),
        None => (true, None),
    }
}

/// Property B at threshold `k`. On failure the witness is the smallest
/// offending `s` paired with the smallest other vertex of equal degree.
pub fn check_property_b(g: &PaGraph, k: u32) -> (bool, Option<Witness>) {
    let deg = g.degrees();
    let mut multiplicity: HashMap<u32, u32> = HashMap::new();
    for &d in &deg {
        *multiplicity.entry(d).or_default() += 1;
    }
    for s in 1..=k.min(g.n()) {
        let d = deg[s as usize - 1];
        if multiplicity[&d] > 1 {
            let other = (1..=g.n())
                .find(|&v| v != s && deg[v as usize - 1] == d)
                .expect("a second vertex of this degree exists");
            return (false, Some(Witness::SharedDegree { s, other }));
        }
    }
    (true, None)
}

/// Default thresholds for an `n`-vertex graph: `ceil(n^0.01)`, 8, 16 and 32,
/// keeping those below `n` (or just 0 when none is).
pub fn default_k_candidates(n: u32) -> Vec<u32> {
    let small = (f64::from(n).powf(0.01)).ceil() as u32;
    let mut ks: Vec<u32> = [small, 8, 16, 32].into_iter().filter(|&k| k < n).collect();
    ks.dedup();
    if ks.is_empty() {
        ks.push(0);
    }
    ks
}

/// Tries each threshold in turn and certifies the graph at the first one
/// where both properties hold.
pub fn asymmetry_certificate(g: &PaGraph, k_candidates: &[u32]) -> Result<CertificateResult> {
    if k_candidates.is_empty() {
        return Err(Error::invalid("the certificate needs at least one threshold"));
    }
    if let Some(&k) = k_candidates.iter().find(|&&k| k >= g.n()) {
        return Err(Error::invalid(format!("threshold {k} must be below n = {}", g.n())));
    }
    let mut last = None;
    for &k in k_candidates {
        let (a, wa) = check_property_a(g, k);
        let (b, wb) = if a { check_property_b(g, k) } else { (false, None) };
        if a && b {
            return Ok(CertificateResult {
                verdict: Verdict::CertifiedAsymmetric,
                k_used: k,
                witness: None,
            });
        }
        last = Some((k, wa.or(wb)));
    }
    let (k_used, witness) = last.expect("candidates are nonempty");
    Ok(CertificateResult {
        verdict: Verdict::Unknown,
        k_used,
        witness,
    })
}
