//! Closed-form thermodynamics of a parametrically amplified oscillator pair.
//!
//! Every quantity is a pure function of three multiplicities: the initial
//! thermal occupation `n_bar` of the environment, the produced-quanta
//! occupation `n_q = sinh² r`, and the total `N = n_q (n_bar + 1)`, which is
//! the mean occupation of the reduced system state after amplification.
//!
//! Entropies are in nats.

use alloc::vec::Vec;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::special::{ln_binomial, xlnx};

/// Relative tolerance used to decide whether explicit multiplicities agree
/// with the occupation derived from a [`ThermalSpec`].
pub const CONSISTENCY_RTOL: f64 = 1e-12;

/// The multiplicity triple `(n_bar, n_q, N)`.
///
/// `N` is always computed from the other two, so the identity
/// `N = n_q (n_bar + 1)` holds bit-for-bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Multiplicities {
    n_bar: f64,
    n_q: f64,
    n_total: f64,
}

impl Multiplicities {
    pub fn new(n_bar: f64, n_q: f64) -> Result<Self> {
        if !(n_bar >= 0.0 && n_bar.is_finite()) {
            return Err(domain("thermal multiplicity must be finite and non-negative"));
        }
        if !(n_q >= 0.0 && n_q.is_finite()) {
            return Err(domain("produced multiplicity must be finite and non-negative"));
        }
        Ok(Multiplicities {
            n_bar,
            n_q,
            n_total: n_q * (n_bar + 1.0),
        })
    }

    /// Multiplicities for a squeeze amplitude `r`, with `n_q = sinh² r`.
    pub fn from_squeeze(n_bar: f64, r: f64) -> Result<Self> {
        let s = r.sinh();
        Self::new(n_bar, s * s)
    }

    pub fn n_bar(&self) -> f64 {
        self.n_bar
    }

    pub fn n_q(&self) -> f64 {
        self.n_q
    }

    /// Total multiplicity `N = n_q (n_bar + 1)`.
    pub fn n_total(&self) -> f64 {
        self.n_total
    }
}

/// Thermal state of the environment: temperature, oscillator frequency and
/// chemical potential, in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalSpec {
    pub temperature: f64,
    pub omega: f64,
    pub mu: f64,
}

impl ThermalSpec {
    pub fn new(temperature: f64, omega: f64, mu: f64) -> Result<Self> {
        let spec = ThermalSpec {
            temperature,
            omega,
            mu,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(domain("temperature must be positive and finite"));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(domain("oscillator frequency must be positive and finite"));
        }
        if !self.mu.is_finite() || self.mu >= self.omega {
            return Err(domain("chemical potential must be below the oscillator frequency"));
        }
        Ok(())
    }

    /// `T / (omega - mu)`.
    pub fn temperature_over_gap(&self) -> f64 {
        self.temperature / (self.omega - self.mu)
    }
}

/// Result of a bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Entropy gained by the system (nats).
    pub delta_s: f64,
    /// Heat transferred to the environment.
    pub delta_q: f64,
    /// Quanta transferred to the environment.
    pub delta_n: f64,
    /// `T ΔS / (ΔQ − μ ΔN)`.
    pub ratio: f64,
    pub satisfied: bool,
}

/// Bose-Einstein occupation `1 / (exp((omega − mu)/T) − 1)`.
pub fn nbar_from_thermal(spec: &ThermalSpec) -> Result<f64> {
    spec.validate()?;
    let x = (spec.omega - spec.mu) / spec.temperature;
    let n = 1.0 / x.exp_m1();
    if !n.is_finite() {
        return Err(domain("thermal occupation is not finite"));
    }
    Ok(n)
}

/// Multiplicities for a thermal environment and produced occupation `n_q`.
pub fn multiplicities_for(spec: &ThermalSpec, n_q: f64) -> Result<Multiplicities> {
    Multiplicities::new(nbar_from_thermal(spec)?, n_q)
}

/// Geometric weights `N^l / (N+1)^(l+1)` of the reduced system state for
/// `l = 0..=ell_max`.
pub fn system_weights(m: &Multiplicities, ell_max: usize) -> Vec<f64> {
    geometric_weights(m.n_total(), ell_max)
}

/// Bose-Einstein weights `n^k / (n+1)^(k+1)` for `k = 0..=k_max`.
pub fn geometric_weights(mean: f64, k_max: usize) -> Vec<f64> {
    if mean == 0.0 {
        let mut w = alloc::vec![0.0; k_max + 1];
        w[0] = 1.0;
        return w;
    }
    let ln_base = -(mean + 1.0).ln();
    let ln_q = mean.ln() - (mean + 1.0).ln();
    (0..=k_max)
        .map(|k| (ln_base + k as f64 * ln_q).exp())
        .collect()
}

/// Joint weights `p[l][m]` of the environment's reduced state, indexed by
/// produced quanta `l` and initial thermal quanta `m`.
///
/// Binomials and powers are combined in log space so that large indices do
/// not overflow.
pub fn environment_weights(m: &Multiplicities, ell_max: usize, m_max: usize) -> Vec<Vec<f64>> {
    let n = m.n_bar();
    let q = m.n_q();
    let ln_n = n.ln();
    let ln_q = q.ln();
    let ln_n1 = n.ln_1p();
    let ln_q1 = q.ln_1p();
    (0..=ell_max)
        .map(|l| {
            (0..=m_max)
                .map(|k| {
                    // 0^0 = 1; 0^k = 0 otherwise
                    if (k > 0 && n == 0.0) || (l > 0 && q == 0.0) {
                        return 0.0;
                    }
                    let pow_n = if k == 0 { 0.0 } else { k as f64 * ln_n };
                    let pow_q = if l == 0 { 0.0 } else { l as f64 * ln_q };
                    let ln_p = ln_binomial(k + l, k) + pow_n + pow_q
                        - (k as f64 + 1.0) * ln_n1
                        - (k as f64 + l as f64 + 1.0) * ln_q1;
                    ln_p.exp()
                })
                .collect()
        })
        .collect()
}

/// Probability generating function of the environment weights,
/// `1 / (1 + (1−s) n_bar + (1−w) N)`.
pub fn environment_pgf(m: &Multiplicities, s: f64, w: f64) -> f64 {
    1.0 / (1.0 + (1.0 - s) * m.n_bar() + (1.0 - w) * m.n_total())
}

/// Purity of the joint state as given by the closed expression
/// `(n_q+1)² / ([1 + (2+n) n_q] [1 + 2 n_q + n (2 + 3 n_q)])`.
///
/// This expression only reproduces the exact purity `1/(2n+1)` when
/// `n_q = 0`; the oracle's `Tr ρ²` is authoritative elsewhere.
pub fn joint_purity(m: &Multiplicities) -> f64 {
    let n = m.n_bar();
    let q = m.n_q();
    (q + 1.0) * (q + 1.0) / ((1.0 + (2.0 + n) * q) * (1.0 + 2.0 * q + n * (2.0 + 3.0 * q)))
}

/// Entropy `(N+1) ln(N+1) − N ln N` of a Bose-Einstein distribution with
/// mean `N`, in nats.
pub fn bose_entropy(n: f64) -> f64 {
    if n == 0.0 {
        0.0
    } else if n < 1.0 {
        (n + 1.0) * n.ln_1p() - xlnx(n)
    } else {
        // (N+1) ln(1 + 1/N) + ln N avoids cancelling two large terms
        (n + 1.0) * (1.0 / n).ln_1p() + n.ln()
    }
}

/// Entropy gained by the system, `ΔS = (N+1) ln(N+1) − N ln N`.
pub fn delta_s(m: &Multiplicities) -> f64 {
    bose_entropy(m.n_total())
}

/// Heat transferred to the environment, `ΔQ = omega N`.
pub fn delta_q(omega: f64, m: &Multiplicities) -> f64 {
    omega * m.n_total()
}

/// Quanta transferred to the environment, `ΔN = N`.
pub fn delta_n(m: &Multiplicities) -> f64 {
    m.n_total()
}

/// `ln N / N + (1 + 1/N) ln(1 + 1/N)`, the `N`-dependent factor of the
/// bound ratio. Zero at `N = 0` by convention.
///
/// Evaluated as `ΔS(N) / N`: for small `N` the two written terms are large
/// and of opposite sign.
pub fn ratio_factor(n_total: f64) -> f64 {
    if n_total == 0.0 {
        return 0.0;
    }
    bose_entropy(n_total) / n_total
}

/// The bound ratio written with the occupation traded for the thermal
/// parameters: `ΔS / (N ln(1 + 1/n_bar))`.
pub fn ratio_from_multiplicities(m: &Multiplicities) -> f64 {
    let n = m.n_total();
    if n == 0.0 {
        return 0.0;
    }
    if m.n_bar() == 0.0 {
        // zero temperature: ln(1 + 1/n_bar) diverges
        return 0.0;
    }
    delta_s(m) / (n * (1.0 / m.n_bar()).ln_1p())
}

/// Whether `m.n_bar()` matches the occupation derived from `spec` to
/// [`CONSISTENCY_RTOL`].
pub fn is_consistent(spec: &ThermalSpec, m: &Multiplicities) -> Result<bool> {
    let n = nbar_from_thermal(spec)?;
    Ok((m.n_bar() - n).abs() <= CONSISTENCY_RTOL * n.abs().max(m.n_bar().abs()))
}

/// Evaluates `T ΔS ≤ ΔQ − μ ΔN` for a thermal environment and explicit
/// multiplicities.
///
/// The ratio is `T/(omega − mu) · [ln N/N + (1 + 1/N) ln(1 + 1/N)]`, used as
/// written even when `m` was not derived from `spec`.
pub fn bound_ratio(spec: &ThermalSpec, m: &Multiplicities) -> Result<BoundReport> {
    spec.validate()?;
    let n = m.n_total();
    if n == 0.0 {
        return Ok(BoundReport {
            delta_s: 0.0,
            delta_q: 0.0,
            delta_n: 0.0,
            ratio: 0.0,
            satisfied: true,
        });
    }
    let ratio = spec.temperature_over_gap() * ratio_factor(n);
    Ok(BoundReport {
        delta_s: delta_s(m),
        delta_q: delta_q(spec.omega, m),
        delta_n: delta_n(m),
        ratio,
        satisfied: ratio <= 1.0,
    })
}

/// [`bound_ratio`] with the thermal occupation derived from `spec`.
pub fn bound_ratio_thermal(spec: &ThermalSpec, n_q: f64) -> Result<BoundReport> {
    let m = multiplicities_for(spec, n_q)?;
    bound_ratio(spec, &m)
}

/// Asymptotic regimes of the bound ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `N > 1`: `(1 + ln N) / (N ln(1 + 1/n_bar))`.
    LargeNGeneral,
    /// `N > 1`, `n_bar ≫ 1`: `(1 + ln(n_q n_bar)) / n_q`.
    LargeNLargeNbar,
    /// `N > 1`, `n_bar ≪ 1`: `(T/(omega − mu)) (1 + ln N) / N`.
    LargeNSmallNbar,
    /// `N < 1`: `(1 − ln N) / ln(1 + 1/n_bar)`.
    SmallNGeneral,
    /// `N < 1`, `n_bar < 1`: `(1 − ln n_q) / ln(1/n_bar)`.
    SmallNSmallNbar,
    /// `N < 1`, `n_bar > 1`: `n_bar (1 − ln(n_q n_bar))`.
    SmallNLargeNbar,
}

impl Regime {
    pub const ALL: [Regime; 6] = [
        Regime::LargeNGeneral,
        Regime::LargeNLargeNbar,
        Regime::LargeNSmallNbar,
        Regime::SmallNGeneral,
        Regime::SmallNSmallNbar,
        Regime::SmallNLargeNbar,
    ];

    /// Whether the regime's defining inequalities hold for `m`.
    pub fn applies(&self, m: &Multiplicities) -> bool {
        let n = m.n_total();
        let nb = m.n_bar();
        match self {
            Regime::LargeNGeneral => n > 1.0,
            Regime::LargeNLargeNbar => n > 1.0 && nb > 1.0,
            Regime::LargeNSmallNbar => n > 1.0 && nb < 1.0,
            Regime::SmallNGeneral => n < 1.0,
            Regime::SmallNSmallNbar => n < 1.0 && nb < 1.0,
            Regime::SmallNLargeNbar => n < 1.0 && nb > 1.0,
        }
    }
}

/// Leading-order approximation of the bound ratio together with a flag
/// recording whether the regime's conditions hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticValue {
    pub value: f64,
    pub valid: bool,
}

pub fn asymptotic_ratio(regime: Regime, spec: &ThermalSpec, m: &Multiplicities) -> AsymptoticValue {
    let n = m.n_total();
    let nb = m.n_bar();
    let q = m.n_q();
    let value = match regime {
        Regime::LargeNGeneral => (1.0 + n.ln()) / (n * (1.0 / nb).ln_1p()),
        Regime::LargeNLargeNbar => (1.0 + (q * nb).ln()) / q,
        Regime::LargeNSmallNbar => spec.temperature_over_gap() * (1.0 + n.ln()) / n,
        Regime::SmallNGeneral => (1.0 - n.ln()) / (1.0 / nb).ln_1p(),
        Regime::SmallNSmallNbar => (1.0 - q.ln()) / (1.0 / nb).ln(),
        Regime::SmallNLargeNbar => nb * (1.0 - (q * nb).ln()),
    };
    AsymptoticValue {
        value,
        valid: regime.applies(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::LN_2;

    fn mult(n: f64, q: f64) -> Multiplicities {
        Multiplicities::new(n, q).unwrap()
    }

    #[test]
    fn nbar_examples() {
        let s = ThermalSpec::new(1.0, LN_2, 0.0).unwrap();
        assert_relative_eq!(nbar_from_thermal(&s).unwrap(), 1.0, max_relative = 1e-14);
        let s = ThermalSpec::new(1.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(
            nbar_from_thermal(&s).unwrap(),
            0.581_976_706_869_326_4,
            max_relative = 1e-14
        );
        let s = ThermalSpec::new(1.0, 30.0, 0.0).unwrap();
        assert_relative_eq!(
            nbar_from_thermal(&s).unwrap(),
            9.357_622_968_841_05e-14,
            max_relative = 1e-12
        );
        let mut last = f64::INFINITY;
        for k in 1..60 {
            let n = nbar_from_thermal(&ThermalSpec::new(1.0, k as f64, 0.0).unwrap()).unwrap();
            assert!(n < last && n > 0.0);
            last = n;
        }
    }

    #[test]
    fn nbar_domain_errors() {
        assert!(ThermalSpec::new(1.0, 1.0, 1.0).is_err());
        assert!(ThermalSpec::new(0.0, 1.0, 0.0).is_err());
        assert!(ThermalSpec::new(-1.0, 1.0, 0.0).is_err());
        let bad = ThermalSpec {
            temperature: 1.0,
            omega: 1.0,
            mu: 2.0,
        };
        assert!(nbar_from_thermal(&bad).is_err());
    }

    #[test]
    fn multiplicity_identity() {
        let m = mult(0.3, 2.5);
        assert_eq!(m.n_total(), 2.5 * 1.3);
        assert!(Multiplicities::new(-1.0, 0.0).is_err());
        assert!(Multiplicities::new(0.0, f64::NAN).is_err());
    }

    #[test]
    fn system_weight_examples() {
        let w = system_weights(&mult(0.0, 1.0), 5);
        for (l, p) in w.iter().enumerate() {
            assert_relative_eq!(*p, 0.5f64.powi(l as i32 + 1), max_relative = 1e-14);
        }
        let w = system_weights(&mult(0.7, 0.0), 3);
        assert_eq!(w, alloc::vec![1.0, 0.0, 0.0, 0.0]);
        let w = system_weights(&mult(1.0, 1.0), 2);
        assert_relative_eq!(w[1], 2.0 / 9.0, max_relative = 1e-14);
    }

    #[test]
    fn truncated_system_normalization() {
        for &n in &[0.1, 1.0, 7.5, 40.0] {
            let m = mult(0.0, n);
            for &l in &[0usize, 3, 20, 200] {
                let s: f64 = system_weights(&m, l).iter().sum();
                let expected = 1.0 - (n / (n + 1.0)).powi(l as i32 + 1);
                assert_relative_eq!(s, expected, epsilon = 1e-13, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn environment_weight_examples() {
        let p = environment_weights(&mult(1.0, 1.0), 1, 1);
        assert_relative_eq!(p[1][1], 0.0625, max_relative = 1e-14);

        // no amplification: thermal row only
        let p = environment_weights(&mult(2.0, 0.0), 3, 4);
        let be = geometric_weights(2.0, 4);
        for k in 0..=4 {
            assert_relative_eq!(p[0][k], be[k], max_relative = 1e-13);
            for l in 1..=3 {
                assert_eq!(p[l][k], 0.0);
            }
        }

        // vacuum environment: column m = 0 is Bose-Einstein(n_q)
        let p = environment_weights(&mult(0.0, 1.5), 5, 2);
        let be = geometric_weights(1.5, 5);
        for l in 0..=5 {
            assert_relative_eq!(p[l][0], be[l], max_relative = 1e-13);
            assert_eq!(p[l][1], 0.0);
        }
    }

    #[test]
    fn environment_normalization_with_tail_bound() {
        for &(n, q) in &[(0.5, 0.3), (1.0, 1.0), (2.0, 1.7)] {
            let m = mult(n, q);
            let (lmax, mmax) = (400, 400);
            let p = environment_weights(&m, lmax, mmax);
            let s: f64 = p.iter().flatten().sum();
            // marginals are geometric in m (mean n) and in l (mean N)
            let tail = (n / (n + 1.0)).powi(mmax as i32 + 1)
                + (m.n_total() / (m.n_total() + 1.0)).powi(lmax as i32 + 1);
            assert!(tail < 1e-10);
            assert!((1.0 - s).abs() <= tail + 1e-12, "sum {s}");
        }
    }

    #[test]
    fn environment_weights_survive_large_indices() {
        let p = environment_weights(&mult(30.0, 20.0), 1500, 1500);
        assert!(p.iter().flatten().all(|x| x.is_finite() && *x >= 0.0));
    }

    #[test]
    fn pgf_limits() {
        let m = mult(0.8, 2.0);
        assert_relative_eq!(environment_pgf(&m, 1.0, 1.0), 1.0);
        for &s in &[0.0, 0.3, 0.9] {
            assert_relative_eq!(environment_pgf(&m, s, 1.0), 1.0 / (1.0 + (1.0 - s) * 0.8));
            assert_relative_eq!(
                environment_pgf(&m, 1.0, s),
                1.0 / (1.0 + (1.0 - s) * m.n_total())
            );
        }
    }

    #[test]
    fn pgf_matches_double_series() {
        let m = mult(0.6, 0.4);
        let p = environment_weights(&m, 250, 250);
        for &(s, w) in &[(0.2, 0.7), (0.9, 0.1), (0.5, 0.5)] {
            let mut acc = 0.0;
            for (l, row) in p.iter().enumerate() {
                for (k, x) in row.iter().enumerate() {
                    acc += x * f64::powi(s, k as i32) * f64::powi(w, l as i32);
                }
            }
            assert_relative_eq!(acc, environment_pgf(&m, s, w), max_relative = 1e-12);
        }
    }

    #[test]
    fn purity_formula_examples() {
        assert_relative_eq!(joint_purity(&mult(1.0, 0.0)), 1.0 / 3.0);
        assert_eq!(joint_purity(&mult(0.0, 0.0)), 1.0);
        assert_relative_eq!(joint_purity(&mult(0.0, 1.0)), 4.0 / 9.0);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(delta_s(&mult(0.0, 0.0)), 0.0);
        assert_relative_eq!(delta_s(&mult(0.0, 1.0)), 1.386_294_361_119_890_6, max_relative = 1e-15);
        assert_relative_eq!(delta_s(&mult(0.0, 3.0)), 2.249_340_578_475_233_4, max_relative = 1e-15);
        // both branches of the stable form agree near N = 1
        let a = (1.0 + 1.0 - 1e-12) * (1.0f64 - 1e-12).ln_1p() - xlnx(1.0 - 1e-12);
        assert_relative_eq!(bose_entropy(1.0 - 1e-12), a, max_relative = 1e-14);
    }

    #[test]
    fn heat_and_particle_examples() {
        assert_eq!(delta_q(1.0, &mult(3.0, 0.0)), 0.0);
        assert_relative_eq!(delta_q(1.0, &mult(1.0, 1.0)), 2.0);
        let m = Multiplicities::from_squeeze(0.0, 1.0).unwrap();
        assert_relative_eq!(delta_q(2.0, &m), 2.762_195_691_083_631_5, max_relative = 1e-14);
        assert_eq!(delta_n(&mult(1.0, 0.0)), 0.0);
        assert_eq!(delta_n(&mult(1.0, 1.0)), 2.0);
        assert_eq!(delta_n(&mult(0.0, 5.0)), 5.0);
    }

    #[test]
    fn bound_ratio_examples() {
        let spec = ThermalSpec::new(1.0, LN_2, 0.0).unwrap();
        let r = bound_ratio(&spec, &mult(1.0, 1.0)).unwrap();
        assert_relative_eq!(r.ratio, 1.377_443_751_081_734_3, max_relative = 1e-13);
        assert!(!r.satisfied);

        let spec = ThermalSpec::new(1.0, 11f64.ln(), 0.0).unwrap();
        let r = bound_ratio_thermal(&spec, 10.0).unwrap();
        assert_relative_eq!(r.ratio, 0.130_494_431_956_838_48, max_relative = 1e-12);
        assert!(r.satisfied);

        let r = bound_ratio(&spec, &mult(0.1, 0.0)).unwrap();
        assert_eq!(r.ratio, 0.0);
        assert!(r.satisfied);
        assert_eq!(r.delta_s, 0.0);
        assert_eq!(r.delta_q, 0.0);
    }

    #[test]
    fn bound_report_invariants() {
        let spec = ThermalSpec::new(0.7, 1.3, 0.2).unwrap();
        for &q in &[0.0, 1e-6, 0.2, 3.0, 1e4] {
            let r = bound_ratio_thermal(&spec, q).unwrap();
            assert_eq!(r.satisfied, r.ratio <= 1.0);
            assert_eq!(r.delta_s == 0.0, r.delta_n == 0.0);
            assert!(r.ratio >= 0.0);
        }
    }

    #[test]
    fn mu_invariance_is_exact() {
        for &(t, w, mu) in &[(1.0, 2.0, 0.5), (0.3, 1.0, -2.0), (5.0, 0.1, 0.05)] {
            let spec = ThermalSpec::new(t, w, mu).unwrap();
            let shifted = ThermalSpec::new(t, w - mu, 0.0).unwrap();
            let a = bound_ratio_thermal(&spec, 0.7).unwrap();
            let b = bound_ratio_thermal(&shifted, 0.7).unwrap();
            assert_eq!(a.ratio, b.ratio);
        }
    }

    #[test]
    fn consistency_check() {
        let spec = ThermalSpec::new(1.0, LN_2, 0.0).unwrap();
        assert!(is_consistent(&spec, &mult(1.0, 0.5)).unwrap());
        assert!(!is_consistent(&spec, &mult(1.0 + 1e-9, 0.5)).unwrap());
    }

    #[test]
    fn asymptotic_examples() {
        let spec = ThermalSpec::new(1.0, 1.0, 0.0).unwrap();
        let v = asymptotic_ratio(Regime::LargeNLargeNbar, &spec, &mult(5.0, 10.0));
        assert_relative_eq!(v.value, 0.491_202_300_542_814_6, max_relative = 1e-14);
        assert!(v.valid);

        let v = asymptotic_ratio(Regime::SmallNSmallNbar, &spec, &mult(0.1, 0.5));
        assert_relative_eq!(v.value, 0.735_324_477_567_233, max_relative = 1e-14);
        assert!(v.valid);

        // N = 10 with T/omega = 0.1
        let spec = ThermalSpec::new(0.1, 1.0, 0.0).unwrap();
        let m = multiplicities_for(&spec, 10.0 / (nbar_from_thermal(&spec).unwrap() + 1.0)).unwrap();
        let v = asymptotic_ratio(Regime::LargeNSmallNbar, &spec, &m);
        assert_relative_eq!(v.value, 0.033_025_850_929_940_46, max_relative = 1e-12);
        assert!(v.valid);

        let v = asymptotic_ratio(Regime::SmallNGeneral, &spec, &mult(1.0, 5.0));
        assert!(!v.valid && v.value.is_finite());
    }

    #[test]
    fn ratio_factor_decreases_above_one() {
        let mut last = f64::INFINITY;
        for i in 0..=2000 {
            let n = 10f64.powf(6.0 * i as f64 / 2000.0);
            let f = ratio_factor(n);
            assert!(f < last, "not decreasing at N = {n}");
            last = f;
        }
    }

    #[test]
    fn asymptotics_converge_in_large_n() {
        let spec = ThermalSpec::new(1.0, 1.0, 0.0).unwrap();
        let nb = nbar_from_thermal(&spec).unwrap();
        let m = multiplicities_for(&spec, 2e3 / (nb + 1.0)).unwrap();
        let exact = bound_ratio(&spec, &m).unwrap().ratio;
        let approx = asymptotic_ratio(Regime::LargeNGeneral, &spec, &m).value;
        assert!(((approx - exact) / exact).abs() < 0.05);

        let m = mult(1e3, 10.0);
        let exact = ratio_from_multiplicities(&m);
        let approx = asymptotic_ratio(Regime::LargeNLargeNbar, &spec, &m).value;
        assert!(((approx - exact) / exact).abs() < 0.05);
    }
}
