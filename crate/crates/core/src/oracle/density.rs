//! Truncated density matrices in the Fock basis.
//!
//! A [`DensityMatrix`] is stored as a list of dense Hermitian blocks over
//! disjoint sets of basis labels. Entries between different blocks are zero.
//! Mixtures of kets are split into blocks by the connected components of the
//! kets' supports, which is lossless: two labels that never appear in the
//! same ket cannot share a nonzero matrix element.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt::Debug;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_traits::{Float, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hermiticity tolerance of [`DensityMatrix::validate`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues below `-EIGEN_CLAMP` are treated as construction errors.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// A basis label: `usize` for one mode, `(n_s, n_e)` for two.
///
/// Labels order row-major over `(n_s, n_e)` with `n_e` fastest.
pub trait FockLabel: Copy + Ord + Debug {}
impl FockLabel for usize {}
impl FockLabel for (usize, usize) {}

#[derive(Debug, Clone, PartialEq)]
pub struct Block<K> {
    basis: Vec<K>,
    matrix: DMatrix<Complex64>,
    /// The only nonzero eigenvalue when the block is `w |ψ⟩⟨ψ|`.
    rank_one: Option<f64>,
}

impl<K: FockLabel> Block<K> {
    pub fn basis(&self) -> &[K] {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<K> {
    blocks: Vec<Block<K>>,
}

/// Which subsystem a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subsystem {
    System,
    Environment,
}

impl<K: FockLabel> DensityMatrix<K> {
    /// Dense matrix over an explicit basis. Labels must be distinct.
    pub fn from_dense(basis: Vec<K>, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != basis.len() || matrix.ncols() != basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for a {}x{} matrix",
                basis.len(),
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let mut order: Vec<usize> = (0..basis.len()).collect();
        order.sort_by_key(|&i| basis[i]);
        if order.windows(2).any(|w| basis[w[0]] == basis[w[1]]) {
            return Err(Error::DimensionMismatch("duplicate basis label".into()));
        }
        let sorted: Vec<K> = order.iter().map(|&i| basis[i]).collect();
        let n = sorted.len();
        let permuted = DMatrix::from_fn(n, n, |i, j| matrix[(order[i], order[j])]);
        Ok(DensityMatrix {
            blocks: alloc::vec![Block {
                basis: sorted,
                matrix: permuted,
                rank_one: None,
            }],
        })
    }

    /// Diagonal matrix `Σ w_i |k_i⟩⟨k_i|` stored as a single block.
    pub fn diagonal(basis: Vec<K>, weights: &[f64]) -> Result<Self> {
        if basis.len() != weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} weights",
                basis.len(),
                weights.len()
            )));
        }
        let n = basis.len();
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(weights[i], 0.0)
            } else {
                Complex64::zero()
            }
        });
        Self::from_dense(basis, m)
    }

    /// `Σ_i w_i |ψ_i⟩⟨ψ_i|` for kets given as label → amplitude maps.
    pub fn from_mixture<'a, I>(components: I) -> Self
    where
        I: IntoIterator<Item = (f64, &'a BTreeMap<K, Complex64>)>,
        K: 'a,
    {
        let components: Vec<(f64, &BTreeMap<K, Complex64>)> = components
            .into_iter()
            .filter(|(w, ket)| *w != 0.0 && !ket.is_empty())
            .collect();

        // union-find over components sharing a label
        let mut parent: Vec<usize> = (0..components.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut owner: BTreeMap<K, usize> = BTreeMap::new();
        for (c, (_, ket)) in components.iter().enumerate() {
            for k in ket.keys() {
                match owner.get(k) {
                    Some(&o) => {
                        let (a, b) = (find(&mut parent, o), find(&mut parent, c));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                    None => {
                        owner.insert(*k, c);
                    }
                }
            }
        }

        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for c in 0..components.len() {
            let root = find(&mut parent, c);
            groups.entry(root).or_default().push(c);
        }

        let mut blocks: Vec<Block<K>> = groups
            .values()
            .map(|members| {
                let mut basis: Vec<K> = members
                    .iter()
                    .flat_map(|&c| components[c].1.keys().copied())
                    .collect();
                basis.sort();
                basis.dedup();
                let index: BTreeMap<K, usize> =
                    basis.iter().enumerate().map(|(i, k)| (*k, i)).collect();
                let n = basis.len();
                let mut matrix = DMatrix::<Complex64>::zeros(n, n);
                let rank_one = match members.as_slice() {
                    [c] => {
                        let (w, ket) = components[*c];
                        Some(w * ket.values().map(|a| a.norm_sqr()).sum::<f64>())
                    }
                    _ => None,
                };
                for &c in members {
                    let (w, ket) = components[c];
                    let entries: Vec<(usize, Complex64)> =
                        ket.iter().map(|(k, a)| (index[k], *a)).collect();
                    for &(i, a) in &entries {
                        for &(j, b) in &entries {
                            matrix[(i, j)] += a * b.conj() * w;
                        }
                    }
                }
                Block { basis, matrix, rank_one }
            })
            .collect();
        blocks.sort_by_key(|b| b.basis[0]);
        DensityMatrix { blocks }
    }

    pub fn blocks(&self) -> &[Block<K>] {
        &self.blocks
    }

    /// Number of basis labels carried by the matrix.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.basis.len()).sum()
    }

    /// Number of complex entries actually stored.
    pub fn stored_entries(&self) -> usize {
        self.blocks.iter().map(|b| b.basis.len() * b.basis.len()).sum()
    }

    /// All labels in ascending order.
    pub fn basis(&self) -> Vec<K> {
        let mut all: Vec<K> = self.blocks.iter().flat_map(|b| b.basis.iter().copied()).collect();
        all.sort();
        all
    }

    /// Matrix element `⟨row|ρ|col⟩`; zero for labels outside the basis or in
    /// different blocks.
    pub fn entry(&self, row: K, col: K) -> Complex64 {
        for b in &self.blocks {
            if let (Ok(i), Ok(j)) = (b.basis.binary_search(&row), b.basis.binary_search(&col)) {
                return b.matrix[(i, j)];
            }
        }
        Complex64::zero()
    }

    /// Full dense representation over [`DensityMatrix::basis`].
    pub fn to_dense(&self) -> (Vec<K>, DMatrix<Complex64>) {
        let basis = self.basis();
        let index: BTreeMap<K, usize> = basis.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let n = basis.len();
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for b in &self.blocks {
            for (i, ki) in b.basis.iter().enumerate() {
                for (j, kj) in b.basis.iter().enumerate() {
                    m[(index[ki], index[kj])] = b.matrix[(i, j)];
                }
            }
        }
        (basis, m)
    }

    pub fn trace(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.matrix.diagonal().iter().map(|z| z.re).sum::<f64>())
            .sum()
    }

    /// Largest `|ρ_ij - conj(ρ_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for b in &self.blocks {
            let n = b.basis.len();
            for i in 0..n {
                for j in i..n {
                    worst = worst.max((b.matrix[(i, j)] - b.matrix[(j, i)].conj()).norm());
                }
            }
        }
        worst
    }

    /// Largest modulus of an off-diagonal element.
    pub fn max_offdiag(&self) -> f64 {
        let mut worst = 0.0f64;
        for b in &self.blocks {
            let n = b.basis.len();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        worst = worst.max(b.matrix[(i, j)].norm());
                    }
                }
            }
        }
        worst
    }

    /// Eigenvalues of every block, unsorted.
    ///
    /// Blocks assembled from a single ket are not diagonalized: their
    /// spectrum is `w ‖ψ‖²` followed by zeros.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim());
        for b in &self.blocks {
            if let Some(l) = b.rank_one {
                out.push(l);
                out.extend(core::iter::repeat(0.0).take(b.basis.len() - 1));
                continue;
            }
            if b.basis.len() == 1 {
                out.push(b.matrix[(0, 0)].re);
                continue;
            }
            // symmetrize so round-off asymmetry never reaches the solver
            let h = (&b.matrix + b.matrix.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = SymmetricEigen::new(h);
            out.extend(eig.eigenvalues.iter().copied());
        }
        out
    }

    /// Checks Hermiticity, trace in `[1 − tolerance, 1 + 1e-12]` and
    /// eigenvalues above `-1e-10`.
    pub fn validate(&self, tolerance: f64) -> Result<()> {
        let h = self.hermiticity_defect();
        if h > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian (defect {h:e})")));
        }
        let t = self.trace();
        if !(t >= 1.0 - tolerance && t <= 1.0 + 1e-12) {
            return Err(Error::InvalidDensity(format!("trace {t} outside [1 - {tolerance:e}, 1]")));
        }
        if let Some(l) = self.eigenvalues().into_iter().find(|&l| l < -EIGEN_CLAMP) {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {l:e}")));
        }
        Ok(())
    }
}

impl DensityMatrix<usize> {
    /// Bose-Einstein state truncated at `k_max` quanta.
    pub fn thermal(mean: f64, k_max: usize) -> Self {
        let w = crate::analytic::geometric_weights(mean, k_max);
        Self::diagonal((0..=k_max).collect(), &w).expect("matching lengths")
    }

    /// Tensor product `ρ_s ⊗ ρ_e` with labels `(n_s, n_e)`.
    pub fn tensor(&self, env: &DensityMatrix<usize>) -> DensityMatrix<(usize, usize)> {
        let mut blocks = Vec::new();
        for bs in &self.blocks {
            for be in &env.blocks {
                let ns = bs.basis.len();
                let ne = be.basis.len();
                let mut basis = Vec::with_capacity(ns * ne);
                for &s in &bs.basis {
                    for &e in &be.basis {
                        basis.push((s, e));
                    }
                }
                let matrix = bs.matrix.kronecker(&be.matrix);
                blocks.push(Block {
                    basis,
                    matrix,
                    rank_one: None,
                });
            }
        }
        blocks.sort_by_key(|b| b.basis[0]);
        DensityMatrix { blocks }
    }
}

/// Traces out one mode of a two-mode matrix.
pub fn partial_trace(rho: &DensityMatrix<(usize, usize)>, keep: Subsystem) -> DensityMatrix<usize> {
    let split = |k: (usize, usize)| match keep {
        Subsystem::System => (k.0, k.1),
        Subsystem::Environment => (k.1, k.0),
    };
    let mut acc: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
    let mut labels: Vec<usize> = Vec::new();
    for b in &rho.blocks {
        let n = b.basis.len();
        for i in 0..n {
            let (kept_i, traced_i) = split(b.basis[i]);
            labels.push(kept_i);
            for j in 0..n {
                let (kept_j, traced_j) = split(b.basis[j]);
                if traced_i == traced_j {
                    *acc.entry((kept_i, kept_j)).or_insert_with(Complex64::zero) += b.matrix[(i, j)];
                }
            }
        }
    }
    labels.sort();
    labels.dedup();
    let index: BTreeMap<usize, usize> = labels.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let n = labels.len();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for ((a, b), v) in acc {
        m[(index[&a], index[&b])] = v;
    }
    DensityMatrix {
        blocks: alloc::vec![Block {
            basis: labels,
            matrix: m,
            rank_one: None,
        }],
    }
}

/// `−Tr ρ ln ρ` in nats.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero; anything more negative
/// is reported as [`Error::InvalidDensity`].
pub fn von_neumann_entropy<K: FockLabel>(rho: &DensityMatrix<K>) -> Result<f64> {
    let mut s = 0.0;
    for l in rho.eigenvalues() {
        if l < -EIGEN_CLAMP {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {l:e}")));
        }
        let l = l.clamp(0.0, 1.0);
        if l > 0.0 {
            s -= l * l.ln();
        }
    }
    Ok(s)
}

/// `Tr ρ²`.
pub fn purity<K: FockLabel>(rho: &DensityMatrix<K>) -> f64 {
    rho.blocks
        .iter()
        .map(|b| b.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum()
}

/// Occupation and energy of a single oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Expectations {
    /// `Tr[N ρ]`.
    pub number: f64,
    /// `omega (Tr[N ρ] + 1/2)`, zero-point included.
    pub energy: f64,
}

pub fn expectations(rho: &DensityMatrix<usize>, omega: f64) -> Expectations {
    let number: f64 = rho
        .blocks
        .iter()
        .map(|b| {
            b.basis
                .iter()
                .enumerate()
                .map(|(i, &n)| n as f64 * b.matrix[(i, i)].re)
                .sum::<f64>()
        })
        .sum();
    Expectations {
        number,
        energy: omega * (number + 0.5),
    }
}
