use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Default cap on the number of complex entries the oracle may store for a
/// joint density matrix (about 256 MiB).
pub const DEFAULT_ENTRY_BUDGET: usize = 1 << 24;

/// Cutoffs of the truncated two-mode Fock space.
///
/// The joint state is spanned by `|l, m + l⟩` with thermal index
/// `m <= max_thermal` and squeeze index `l <= max_squeeze`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub max_thermal: usize,
    pub max_squeeze: usize,
    pub tolerance: f64,
}

impl TruncationSpec {
    /// Upper bound on the probability mass discarded by this truncation:
    /// `(n/(n+1))^(M+1) + (N/(N+1))^(L+1)` where `N = sinh² r (n + 1)`.
    ///
    /// The first term is the thermal tail beyond `M`; the second is the tail
    /// of the system's marginal beyond `L`, which dominates the mass lost by
    /// cutting every squeezed ket at `L` quanta.
    pub fn tail_estimate(&self, n_bar: f64, r: f64) -> f64 {
        let s = r.sinh();
        let n_total = s * s * (n_bar + 1.0);
        geometric_tail(n_bar, self.max_thermal) + geometric_tail(n_total, self.max_squeeze)
    }

    /// Number of complex entries stored by the block-diagonal joint matrix.
    pub fn stored_entries(&self) -> usize {
        (self.max_thermal + 1).saturating_mul((self.max_squeeze + 1).saturating_mul(self.max_squeeze + 1))
    }
}

/// `(mean/(mean+1))^(k+1)`, the mass of a Bose-Einstein distribution above `k`.
pub fn geometric_tail(mean: f64, k: usize) -> f64 {
    if mean == 0.0 {
        0.0
    } else {
        ((k as f64 + 1.0) * (mean.ln() - mean.ln_1p())).exp()
    }
}

/// Smallest `k` with `(mean/(mean+1))^(k+1) <= target`.
fn smallest_cutoff(mean: f64, target: f64) -> usize {
    if mean == 0.0 {
        return 0;
    }
    let ln_q = mean.ln() - mean.ln_1p();
    let mut k = (target.ln() / ln_q - 1.0).ceil().max(0.0) as usize;
    // rounding in the logarithms can leave k one short or one long
    while geometric_tail(mean, k) > target {
        k += 1;
    }
    while k > 0 && geometric_tail(mean, k - 1) <= target {
        k -= 1;
    }
    k
}

/// Smallest truncation whose [`TruncationSpec::tail_estimate`] is within
/// `tolerance`, splitting the budget evenly between the thermal and the
/// squeeze tails.
pub fn choose_truncation(n_bar: f64, r: f64, tolerance: f64) -> Result<TruncationSpec> {
    choose_truncation_with_budget(n_bar, r, tolerance, DEFAULT_ENTRY_BUDGET)
}

pub fn choose_truncation_with_budget(
    n_bar: f64,
    r: f64,
    tolerance: f64,
    budget: usize,
) -> Result<TruncationSpec> {
    if !(tolerance > 0.0 && tolerance < 1.0) {
        return Err(domain("truncation tolerance must lie in (0, 1)"));
    }
    if !(n_bar >= 0.0 && n_bar.is_finite()) || !r.is_finite() {
        return Err(domain("thermal multiplicity and squeeze amplitude must be finite"));
    }
    let s = r.sinh();
    let n_total = s * s * (n_bar + 1.0);
    let half = 0.5 * tolerance;
    let spec = TruncationSpec {
        max_thermal: smallest_cutoff(n_bar, half),
        max_squeeze: smallest_cutoff(n_total, half),
        tolerance,
    };
    let entries = spec.stored_entries();
    if entries > budget {
        return Err(Error::TruncationInfeasible { entries, budget });
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_needs_no_levels() {
        let t = choose_truncation(0.0, 0.0, 1e-12).unwrap();
        assert_eq!((t.max_thermal, t.max_squeeze), (0, 0));
    }

    #[test]
    fn geometric_tail_solution() {
        let t = choose_truncation(1.0, 1.0, 1e-10).unwrap();
        // (1/2)^(M+1) <= 5e-11  =>  M = 34
        assert_eq!(t.max_thermal, 34);
        assert!(t.tail_estimate(1.0, 1.0) <= 1e-10);
    }

    #[test]
    fn monotone_in_tolerance() {
        for &(n, r) in &[(0.5, 0.3), (2.0, 1.2), (0.0, 0.9), (7.0, 0.0)] {
            let loose = choose_truncation(n, r, 1e-6).unwrap();
            let tight = choose_truncation(n, r, 1e-12).unwrap();
            assert!(tight.max_thermal >= loose.max_thermal);
            assert!(tight.max_squeeze >= loose.max_squeeze);
        }
    }

    #[test]
    fn minimality() {
        let t = choose_truncation(2.0, 1.2, 1e-12).unwrap();
        assert!(geometric_tail(2.0, t.max_thermal) <= 0.5e-12);
        assert!(geometric_tail(2.0, t.max_thermal - 1) > 0.5e-12);
    }

    #[test]
    fn budget_is_enforced() {
        let err = choose_truncation_with_budget(50.0, 3.0, 1e-12, 1000).unwrap_err();
        assert!(matches!(err, Error::TruncationInfeasible { .. }));
        assert!(choose_truncation(1.0, 1.0, 0.0).is_err());
        assert!(choose_truncation(1.0, 1.0, 1.5).is_err());
    }
}
