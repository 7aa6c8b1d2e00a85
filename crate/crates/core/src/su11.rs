//! The SU(1,1) structure of two-mode parametric amplification.
//!
//! With `K₊ = s†e†`, `K₋ = se` and `K₀ = (n_s + n_e + 1)/2` the evolution
//! operator factorizes as a rotation `R(δ) = exp(−i(δ_s n_s + δ_e n_e))`
//! after a squeeze `Σ(z) = exp(z* K₋ − z K₊)`, `z = r e^{iθ}`. The squeeze
//! itself splits into three ordered exponentials (see [`bch_factors`]), which
//! gives every evolved Fock state as a finite double sum.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::analytic::geometric_weights;
use crate::error::{domain, Error, Result};
use crate::oracle::{DensityMatrix, TruncationSpec};
use crate::special::ln_factorial;

/// Reduces a phase to `[0, 2π)`.
pub fn reduce_phase(phi: f64) -> f64 {
    let x = phi - TAU * (phi / TAU).floor();
    // rounding can land on exactly 2π for tiny negative inputs
    if x >= TAU {
        0.0
    } else {
        x
    }
}

/// Squeeze amplitude, squeeze phase and the two free rotation angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParams {
    r: f64,
    theta: f64,
    delta_s: f64,
    delta_e: f64,
}

impl SqueezeParams {
    pub fn new(r: f64, theta: f64, delta_s: f64, delta_e: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(domain("squeeze amplitude must be finite and non-negative"));
        }
        if !(theta.is_finite() && delta_s.is_finite() && delta_e.is_finite()) {
            return Err(domain("phases must be finite"));
        }
        Ok(SqueezeParams {
            r,
            theta: reduce_phase(theta),
            delta_s: reduce_phase(delta_s),
            delta_e: reduce_phase(delta_e),
        })
    }

    /// A pure squeeze with no rotation.
    pub fn squeeze(r: f64, theta: f64) -> Result<Self> {
        Self::new(r, theta, 0.0, 0.0)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn delta_s(&self) -> f64 {
        self.delta_s
    }

    pub fn delta_e(&self) -> f64 {
        self.delta_e
    }

    /// `θ + π − δ_e − δ_s`, the phase advanced per produced pair when the
    /// system starts in its vacuum.
    pub fn alpha(&self) -> f64 {
        self.theta + PI - self.delta_e - self.delta_s
    }

    /// The diagonal phase `exp(−i(δ_s n_s + δ_e n_e))` of the rotation.
    pub fn rotation_phase(&self, n_s: usize, n_e: usize) -> Complex64 {
        Complex64::from_polar(1.0, -(self.delta_s * n_s as f64 + self.delta_e * n_e as f64))
    }
}

/// Coefficients of `Σ(z) = exp(plus·K₊) exp(zero·K₀) exp(minus·K₋)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BchFactors {
    pub plus_coeff: Complex64,
    pub zero_coeff: f64,
    pub minus_coeff: Complex64,
}

pub fn bch_factors(p: &SqueezeParams) -> BchFactors {
    let t = p.r.tanh();
    let c = p.r.cosh();
    BchFactors {
        plus_coeff: -Complex64::from_polar(t, p.theta),
        zero_coeff: -2.0 * c.ln(),
        minus_coeff: Complex64::from_polar(t, -p.theta),
    }
}

/// A two-mode ket stored by its nonzero amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeKet {
    amplitudes: BTreeMap<(usize, usize), Complex64>,
    trunc: TruncationSpec,
}

impl TwoModeKet {
    pub fn amplitudes(&self) -> &BTreeMap<(usize, usize), Complex64> {
        &self.amplitudes
    }

    pub fn truncation(&self) -> &TruncationSpec {
        &self.trunc
    }

    pub fn amplitude(&self, n_s: usize, n_e: usize) -> Complex64 {
        self.amplitudes.get(&(n_s, n_e)).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }
}

/// `R(δ) Σ(z) |m_s, m_e⟩`, keeping `l = 0..=max_squeeze` created pairs.
///
/// The amplitude on `|m_s − j + l, m_e − j + l⟩` is
/// `e^{iγ} cosh^{2j} r tanh^{j+l} r / cosh^{m_s+m_e+1} r · M(j, l)` with
/// `γ = (δ_s + δ_e − θ)(j − l) + πl − (δ_s m_s + δ_e m_e)` and
/// `M(j, l) = √(m_s! m_e! (m_s−j+l)! (m_e−j+l)!) / (j! l! (m_s−j)! (m_e−j)!)`,
/// for `j ≤ min(m_s, m_e)`. Every amplitude lies in the sector
/// `n_e − n_s = m_e − m_s`.
///
/// Fails with [`Error::TruncationInsufficient`] when the discarded norm
/// `1 − ‖ψ‖²` exceeds the truncation tolerance.
pub fn evolve_basis_state(
    m_s: usize,
    m_e: usize,
    p: &SqueezeParams,
    trunc: &TruncationSpec,
) -> Result<TwoModeKet> {
    let ket = evolve_unchecked(m_s, m_e, p, trunc);
    let tail = 1.0 - ket.norm_sqr();
    if tail > trunc.tolerance {
        return Err(Error::TruncationInsufficient {
            tail,
            tolerance: trunc.tolerance,
        });
    }
    Ok(ket)
}

pub(crate) fn evolve_unchecked(m_s: usize, m_e: usize, p: &SqueezeParams, trunc: &TruncationSpec) -> TwoModeKet {
    let mut amplitudes = BTreeMap::new();
    if p.r == 0.0 {
        amplitudes.insert((m_s, m_e), p.rotation_phase(m_s, m_e));
        return TwoModeKet {
            amplitudes,
            trunc: *trunc,
        };
    }
    let ln_t = p.r.tanh().ln();
    let ln_c = p.r.cosh().ln();
    let j_max = m_s.min(m_e);
    let shared = 0.5 * (ln_factorial(m_s) + ln_factorial(m_e)) - (m_s + m_e + 1) as f64 * ln_c;
    let spin = p.delta_s + p.delta_e - p.theta;
    let base_phase = -(p.delta_s * m_s as f64 + p.delta_e * m_e as f64);

    for l in 0..=trunc.max_squeeze {
        for j in 0..=j_max {
            let (a, b) = (m_s - j + l, m_e - j + l);
            let ln_mod = shared + (j + l) as f64 * ln_t + 2.0 * j as f64 * ln_c
                + 0.5 * (ln_factorial(a) + ln_factorial(b))
                - ln_factorial(j)
                - ln_factorial(l)
                - ln_factorial(m_s - j)
                - ln_factorial(m_e - j);
            let gamma = spin * (j as f64 - l as f64) + PI * l as f64 + base_phase;
            let amp = Complex64::from_polar(ln_mod.exp(), gamma);
            *amplitudes.entry((a, b)).or_insert_with(Complex64::default) += amp;
        }
    }
    TwoModeKet {
        amplitudes,
        trunc: *trunc,
    }
}

/// Amplitude of `|l, m + l⟩` in the evolved state of `|0, m⟩`:
/// `tanh^l r e^{i(αl − δ_e m)} / cosh^{m+1} r · √C(m+l, l)`.
pub fn vacuum_system_amplitude(p: &SqueezeParams, m: usize, l: usize) -> Complex64 {
    if p.r == 0.0 {
        return if l == 0 {
            Complex64::from_polar(1.0, -p.delta_e * m as f64)
        } else {
            Complex64::default()
        };
    }
    let ln_mod = l as f64 * p.r.tanh().ln() - (m + 1) as f64 * p.r.cosh().ln()
        + 0.5 * (ln_factorial(m + l) - ln_factorial(m) - ln_factorial(l));
    Complex64::from_polar(ln_mod.exp(), p.alpha() * l as f64 - p.delta_e * m as f64)
}

/// Closed-form element `⟨l, m+l| ρ |l', m+l'⟩ = p_m ψ_{m,l} ψ*_{m,l'}` of the
/// joint state built from a vacuum system and a thermal environment.
///
/// Its modulus is `p_m tanh^{l+l'} r / cosh^{2m+2} r · √(C(m+l,l) C(m+l',l'))`
/// and its phase `α (l − l')`.
pub fn joint_element(n_bar: f64, p: &SqueezeParams, m: usize, l: usize, l_prime: usize) -> Complex64 {
    let p_m = geometric_weights(n_bar, m)[m];
    vacuum_system_amplitude(p, m, l) * vacuum_system_amplitude(p, m, l_prime).conj() * p_m
}

/// `ρ = Σ_m p_m |Ψ_m⟩⟨Ψ_m|` with `Ψ_m = R(δ) Σ(z) |0, m⟩` and Bose-Einstein
/// weights `p_m` of mean `n_bar`.
///
/// Each `Ψ_m` occupies its own charge sector, so the result is stored as
/// `max_thermal + 1` rank-one blocks. Fails when the thermal tail or the
/// measured trace deficit exceeds the truncation tolerance.
pub fn build_joint_density(
    n_bar: f64,
    p: &SqueezeParams,
    trunc: &TruncationSpec,
) -> Result<DensityMatrix<(usize, usize)>> {
    if !(n_bar >= 0.0 && n_bar.is_finite()) {
        return Err(domain("thermal multiplicity must be finite and non-negative"));
    }
    let thermal_tail = crate::oracle::geometric_tail(n_bar, trunc.max_thermal);
    if thermal_tail > trunc.tolerance {
        return Err(Error::TruncationInsufficient {
            tail: thermal_tail,
            tolerance: trunc.tolerance,
        });
    }
    let weights = geometric_weights(n_bar, trunc.max_thermal);
    let kets: Vec<TwoModeKet> = (0..=trunc.max_thermal)
        .map(|m| evolve_unchecked(0, m, p, trunc))
        .collect();
    let rho = DensityMatrix::from_mixture(weights.iter().zip(&kets).map(|(w, k)| (*w, &k.amplitudes)));
    let deficit = 1.0 - rho.trace();
    if deficit > trunc.tolerance {
        return Err(Error::TruncationInsufficient {
            tail: deficit,
            tolerance: trunc.tolerance,
        });
    }
    Ok(rho)
}

/// Matrices of `K₊`, `K₋`, `K₀` over an explicit two-mode basis.
///
/// Matrix elements that would leave the basis are dropped, so the algebra
/// only holds on labels far enough from the truncation edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Generators {
    pub basis: Vec<(usize, usize)>,
    pub plus: DMatrix<Complex64>,
    pub minus: DMatrix<Complex64>,
    pub zero: DMatrix<Complex64>,
}

pub fn generators(basis: &[(usize, usize)]) -> Generators {
    let n = basis.len();
    let index: BTreeMap<(usize, usize), usize> = basis.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut plus = DMatrix::<Complex64>::zeros(n, n);
    let mut zero = DMatrix::<Complex64>::zeros(n, n);
    for (col, &(a, b)) in basis.iter().enumerate() {
        zero[(col, col)] = Complex64::new(0.5 * (a + b + 1) as f64, 0.0);
        if let Some(&row) = index.get(&(a + 1, b + 1)) {
            plus[(row, col)] = Complex64::new((((a + 1) * (b + 1)) as f64).sqrt(), 0.0);
        }
    }
    let minus = plus.adjoint();
    Generators {
        basis: basis.to_vec(),
        plus,
        minus,
        zero,
    }
}

/// All labels with `n_s, n_e ≤ n_max`, row-major with `n_e` fastest.
pub fn full_basis(n_max: usize) -> Vec<(usize, usize)> {
    (0..=n_max).flat_map(|a| (0..=n_max).map(move |b| (a, b))).collect()
}

/// The first `len` labels of the sector `n_e − n_s = charge`.
pub fn sector_basis(charge: i64, len: usize) -> Vec<(usize, usize)> {
    let shift = charge.unsigned_abs() as usize;
    (0..len)
        .map(|k| if charge >= 0 { (k, k + shift) } else { (k + shift, k) })
        .collect()
}
