use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};

/// A rigorous interval for `A(m) = sum_{d >= m} ln d / ((d+1)(d+2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesEnclosure {
    pub lower: f64,
    pub upper: f64,
    /// Last index summed explicitly.
    pub cutoff: u64,
}

impl SeriesEnclosure {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Largest cutoff [`constant_a`] will sum to.
pub const MAX_CUTOFF: u64 = 2_000_000_000;

fn term(d: u64) -> f64 {
    let x = d as f64;
    x.ln() / ((x + 1.0) * (x + 2.0))
}

/// Neumaier-compensated sum of the terms `from..=to`.
fn partial_sum(from: u64, to: u64) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for d in from..=to {
        let t = term(d);
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Bound on the tail beyond `cutoff`: the terms are below `ln d / d^2`,
/// which decreases for `d >= 2`, so the tail is at most
/// `int_D^inf ln x / x^2 dx = (ln D + 1) / D`.
fn tail_bound(cutoff: u64) -> f64 {
    let d = cutoff as f64;
    (d.ln() + 1.0) / d
}

/// Allowance for floating-point error in a compensated sum of `count`
/// terms, each good to a few ulps.
fn rounding_allowance(sum: f64, count: u64) -> f64 {
    (16.0 + 1e-6 * count as f64) * f64::EPSILON * sum.abs()
}

/// Encloses `A(m)` in an interval of width at most `tol`.
///
/// Sums the series exactly up to the smallest cutoff `D` at which the tail
/// bound plus rounding allowance fits in `tol`, then returns
/// `[S_D, S_D + tail + allowance]` (lower end also widened by the allowance).
pub fn constant_a(m: u32, tol: f64) -> Result<SeriesEnclosure> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let start = u64::from(m).max(2);
    // smallest D with tail_bound(D) <= 0.9 tol, found by doubling then bisection
    let target = 0.9 * tol;
    let mut hi = start.max(4);
    while tail_bound(hi) > target {
        if hi >= MAX_CUTOFF {
            return Err(Error::Budget {
                what: "series terms for the constant A",
                limit: u128::from(MAX_CUTOFF),
            });
        }
        hi = (hi * 2).min(MAX_CUTOFF);
    }
    let mut lo = start;
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if tail_bound(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let cutoff = hi.max(start);
    let sum = partial_sum(start, cutoff);
    let slack = rounding_allowance(sum, cutoff);
    let enclosure = SeriesEnclosure {
        lower: sum - slack,
        upper: sum + tail_bound(cutoff) + slack,
        cutoff,
    };
    if enclosure.width() > tol {
        return Err(Error::Budget {
            what: "series terms for the constant A",
            limit: u128::from(cutoff),
        });
    }
    Ok(enclosure)
}

/// `A(m)` to within `1e-6`, shared across calls.
///
/// `A(1)` is computed once; `A(m)` subtracts the first `m - 1` terms.
pub fn constant_a_value(m: u32) -> f64 {
    static BASE: OnceLock<f64> = OnceLock::new();
    let base = *BASE.get_or_init(|| constant_a(1, 1e-6).expect("default tolerance is reachable").midpoint());
    if m <= 1 {
        base
    } else {
        base - partial_sum(1, u64::from(m) - 1)
    }
}

/// `m n ln n + m (ln 2m - 1 - ln m! - A(m)) n`, the stated asymptotic form
/// of `H(G)` with the `o(n)` term dropped.
pub fn asymptotic_entropy(m: u32, n: u32) -> f64 {
    let (mf, nf) = (f64::from(m), f64::from(n));
    mf * nf * nf.ln() + stated_linear_coefficient(m) * nf
}

/// The linear coefficient `m (ln 2m - 1 - ln m! - A(m))` of
/// [`asymptotic_entropy`].
pub fn stated_linear_coefficient(m: u32) -> f64 {
    let mf = f64::from(m);
    mf * ((2.0 * mf).ln() - 1.0 - ln_factorial(u64::from(m)) - constant_a_value(m))
}

/// The linear coefficient obtained by summing the per-step entropies
/// directly: `m (ln 2m - 1 - (m+1) A(m)) - ln m!`.
///
/// Each step contributes the entropy of `m` i.i.d. degree-weighted draws,
/// about `m (ln 2mt - E[ln weight])`, minus `ln m!` for forgetting their
/// order. The mean of `ln weight` over a draw weights degree `d` by
/// `d N_{t,d} / 2mt`, which with `N_{t,d} ~ 2m(m+1)t / (d(d+1)(d+2))` brings
/// in `(m+1) A(m)`.
pub fn rederived_linear_coefficient(m: u32) -> f64 {
    let mf = f64::from(m);
    mf * ((2.0 * mf).ln() - 1.0 - (mf + 1.0) * constant_a_value(m)) - ln_factorial(u64::from(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enclosure_width_and_first_term() {
        let a = constant_a(1, 1e-4).unwrap();
        assert!(a.width() <= 1e-4);
        // the d = 1 term is zero, so A(1) = A(2)
        let b = constant_a(2, 1e-4).unwrap();
        assert!((a.midpoint() - b.midpoint()).abs() < 1e-4);
        assert!(a.lower <= b.upper && b.lower <= a.upper);
    }

    #[test]
    fn telescoping() {
        for m in 1..6u32 {
            let a = constant_a(m, 1e-5).unwrap();
            let next = constant_a(m + 1, 1e-5).unwrap();
            let drop = term(u64::from(m));
            assert!((a.midpoint() - drop - next.midpoint()).abs() < 1e-5, "m={m}");
        }
    }

    #[test]
    fn invalid_tolerances() {
        assert!(constant_a(1, 0.0).is_err());
        assert!(constant_a(1, f64::NAN).is_err());
        assert!(constant_a(1, 1e-12).unwrap_err().is_budget());
        assert!(constant_a(0, 1e-3).is_err());
    }

    #[test]
    fn cached_value_lies_in_enclosure() {
        let a = constant_a(3, 1e-5).unwrap();
        assert!((constant_a_value(3) - a.midpoint()).abs() < 1e-5);
    }

    #[test]
    fn asymptotic_forms() {
        let a1 = constant_a_value(1);
        let n = 1000u32;
        let nf = f64::from(n);
        let expected = nf * nf.ln() + (2f64.ln() - 1.0 - a1) * nf;
        assert!((asymptotic_entropy(1, n) - expected).abs() < 1e-9);
        for m in 1..4 {
            let gap = |n: u32| (asymptotic_entropy(m, n) / (f64::from(n) * f64::from(n).ln()) - f64::from(m)).abs();
            assert!(gap(1 << 30) < gap(1 << 20) && gap(1 << 20) < gap(1 << 10));
        }
        assert!((rederived_linear_coefficient(1) - (2f64.ln() - 1.0 - 2.0 * a1)).abs() < 1e-12);
    }
}
