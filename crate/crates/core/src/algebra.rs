//! Finite-dimensional tracial algebras `⊕_i M_{n_i}` with weighted traces.
//!
//! An algebra is a list of block sizes `n_i` and strictly positive weights
//! `w_i` with `Σ w_i n_i = 1`, so that `τ(X) = Σ_i w_i Tr(X_i)` is a faithful
//! tracial state. Elements are lists of square complex blocks.

// Float math without std; unused when std is linked.
#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::sync::Arc;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::{
    EIGEN_CLAMP, HERMITIAN_TOL, STATE_TRACE_TOL, WEIGHT_SUM_TOL,
};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// A finite direct sum of matrix blocks with a normalized weighted trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TracialAlgebra {
    block_dims: Vec<usize>,
    trace_weights: Vec<f64>,
}

impl TracialAlgebra {
    pub fn new(block_dims: Vec<usize>, trace_weights: Vec<f64>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::InvalidAlgebra("no blocks"));
        }
        if block_dims.len() != trace_weights.len() {
            return Err(Error::InvalidAlgebra("block and weight counts differ"));
        }
        if block_dims.contains(&0) {
            return Err(Error::InvalidAlgebra("zero-sized block"));
        }
        if trace_weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidAlgebra("weights must be finite and positive"));
        }
        let total: f64 = block_dims
            .iter()
            .zip(&trace_weights)
            .map(|(&n, &w)| n as f64 * w)
            .sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidAlgebra("weighted trace of the identity is not 1"));
        }
        Ok(Self {
            block_dims,
            trace_weights,
        })
    }

    /// `M_n` with the normalized trace `Tr/n`.
    pub fn matrix(n: usize) -> Result<Self> {
        Self::new(alloc::vec![n], alloc::vec![1.0 / n as f64])
    }

    /// Blocks with the restriction of the normalized trace of `M_N`.
    pub fn uniform(block_dims: Vec<usize>) -> Result<Self> {
        let total: usize = block_dims.iter().sum();
        let weights = alloc::vec![1.0 / total as f64; block_dims.len()];
        Self::new(block_dims, weights)
    }

    /// `λ·τ_a ⊕ (1-λ)·τ_b` on `a ⊕ b`.
    pub fn direct_sum(a: &Self, b: &Self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidMixture(lambda));
        }
        let mut dims = a.block_dims.clone();
        dims.extend_from_slice(&b.block_dims);
        let mut weights: Vec<f64> = a.trace_weights.iter().map(|w| lambda * w).collect();
        weights.extend(b.trace_weights.iter().map(|w| (1.0 - lambda) * w));
        Self::new(dims, weights)
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn trace_weights(&self) -> &[f64] {
        &self.trace_weights
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    pub fn is_single_block(&self) -> bool {
        self.block_dims.len() == 1
    }

    /// `N = Σ n_i`, the size of the block-diagonal embedding.
    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    /// `Σ n_i²`, the dimension of the algebra as a vector space.
    pub fn l2_dim(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    /// Row offsets of each block inside the `N×N` embedding.
    pub fn block_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.block_dims
            .iter()
            .map(|n| {
                let off = acc;
                acc += n;
                off
            })
            .collect()
    }

    /// Offsets of each block inside the L² coordinate vector.
    pub(crate) fn coordinate_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.block_dims
            .iter()
            .map(|n| {
                let off = acc;
                acc += n * n;
                off
            })
            .collect()
    }

    /// Diagonal of the weight operator `W` on `C^N`, so that `τ(X) = Tr(W X)`.
    pub fn weight_diagonal(&self) -> Vec<f64> {
        self.block_dims
            .iter()
            .zip(&self.trace_weights)
            .flat_map(|(&n, &w)| core::iter::repeat_n(w, n))
            .collect()
    }

    /// Upper bound on feasible invertibility floors, `1 / (N · max w_i)`.
    pub fn floor_bound(&self) -> f64 {
        let max_w = self.trace_weights.iter().cloned().fold(0.0, f64::max);
        1.0 / (self.total_dim() as f64 * max_w)
    }

    /// `τ(X)`, rejecting elements of other algebras.
    pub fn trace(&self, x: &Element) -> Result<C64> {
        if x.algebra() != self {
            return Err(Error::AlgebraMismatch);
        }
        Ok(x.trace())
    }

    /// `⟨X, Y⟩_τ = τ(Y* X)`.
    pub fn inner(&self, x: &Element, y: &Element) -> Result<C64> {
        if x.algebra() != self {
            return Err(Error::AlgebraMismatch);
        }
        x.inner(y)
    }

    pub fn p_norm(&self, x: &Element, p: f64) -> Result<f64> {
        if x.algebra() != self {
            return Err(Error::AlgebraMismatch);
        }
        x.p_norm(p)
    }
}

/// A scalar function applied to the spectrum of a Hermitian element.
#[derive(Clone, Copy)]
pub enum SpectralFn<'a> {
    Identity,
    /// Square root; tiny negative eigenvalues are clamped to zero.
    Sqrt,
    /// `|x|`; tiny negative eigenvalues are clamped to zero first.
    Abs,
    /// Natural logarithm; spectrum must lie above the floor.
    Log,
    /// `x^{-1}`; spectrum must lie above the floor.
    Inverse,
    /// `x^e`. Negative exponents need the spectrum above the floor,
    /// fractional ones need it nonnegative.
    Power(f64),
    /// Arbitrary function, applied without domain checks.
    Map(&'a dyn Fn(f64) -> f64),
}

impl core::fmt::Debug for SpectralFn<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::Identity => f.write_str("Identity"),
            Self::Sqrt => f.write_str("Sqrt"),
            Self::Abs => f.write_str("Abs"),
            Self::Log => f.write_str("Log"),
            Self::Inverse => f.write_str("Inverse"),
            Self::Power(e) => write!(f, "Power({e})"),
            Self::Map(_) => f.write_str("Map(..)"),
        }
    }
}

/// Real symmetric tridiagonal form `T = Q* H Q` of the Hermitian part of `m`.
///
/// The complex QR iteration in nalgebra loses accuracy on clustered spectra,
/// so only the Householder reduction runs in complex arithmetic and `T` is
/// handed to the real solver.
fn hermitian_tridiagonal(m: &CMatrix) -> (CMatrix, DMatrix<f64>) {
    let n = m.nrows();
    let sym = (m + m.adjoint()).scale(0.5);
    if n == 1 {
        return (CMatrix::identity(1, 1), DMatrix::from_element(1, 1, sym[(0, 0)].re));
    }
    let (q, diag, off) = sym.symmetric_tridiagonalize().unpack();
    let t = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            diag[r]
        } else if r == c + 1 {
            off[c]
        } else if c == r + 1 {
            off[r]
        } else {
            0.0
        }
    });
    (q, t)
}

/// Eigendecomposition of the Hermitian part of a square matrix.
pub(crate) fn hermitian_eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    if m.nrows() == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let (q, t) = hermitian_tridiagonal(m);
    let eig = t.symmetric_eigen();
    let vectors = q * eig.eigenvectors.map(|x| C64::new(x, 0.0));
    (eig.eigenvalues.iter().cloned().collect(), vectors)
}

/// Eigenvalues of the Hermitian part of a square matrix, ascending.
pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = hermitian_tridiagonal(m).1.symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Hermitian minimum eigenvalue of a square matrix after symmetrization.
pub(crate) fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(f64::INFINITY)
}

/// Singular values of any matrix, largest first, from the Hermitian dilation
/// `[[0, M], [M*, 0]]` whose spectrum is `±σ_i` padded with zeros. The
/// complex SVD in nalgebra is not accurate enough for the slack floors used
/// here.
pub(crate) fn singular_values_of(m: &CMatrix) -> Vec<f64> {
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return Vec::new();
    }
    let mut h = CMatrix::zeros(r + c, r + c);
    h.view_mut((0, r), (r, c)).copy_from(m);
    h.view_mut((r, 0), (c, r)).copy_from(&m.adjoint());
    let mut values = hermitian_eigenvalues(&h);
    values.reverse();
    values.truncate(k);
    values.into_iter().map(|v| v.max(0.0)).collect()
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn rebuild(vectors: &CMatrix, values: &[f64]) -> CMatrix {
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(v);
    }
    scaled * vectors.adjoint()
}

/// A block-diagonal element of a [`TracialAlgebra`].
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    algebra: Arc<TracialAlgebra>,
    blocks: Vec<CMatrix>,
}

impl Element {
    pub fn from_blocks(algebra: &Arc<TracialAlgebra>, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() {
            return Err(Error::DimensionMismatch {
                expected: algebra.num_blocks(),
                actual: blocks.len(),
            });
        }
        for (i, (b, &n)) in blocks.iter().zip(algebra.block_dims()).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::BlockShape {
                    block: i,
                    rows: b.nrows(),
                    cols: b.ncols(),
                    expected: n,
                });
            }
        }
        Ok(Self {
            algebra: Arc::clone(algebra),
            blocks,
        })
    }

    /// Builds an element from real-valued rows of a single-block algebra.
    pub fn from_real_rows(algebra: &Arc<TracialAlgebra>, rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let m = CMatrix::from_fn(n, n, |r, c| C64::new(rows[r].get(c).copied().unwrap_or(0.0), 0.0));
        Self::from_blocks(algebra, alloc::vec![m])
    }

    /// Element with the given diagonal (concatenated over blocks).
    pub fn diagonal(algebra: &Arc<TracialAlgebra>, diag: &[f64]) -> Result<Self> {
        if diag.len() != algebra.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.total_dim(),
                actual: diag.len(),
            });
        }
        let mut at = 0;
        let blocks = algebra
            .block_dims()
            .iter()
            .map(|&n| {
                let b = CMatrix::from_fn(n, n, |r, c| {
                    if r == c {
                        C64::new(diag[at + r], 0.0)
                    } else {
                        ZERO
                    }
                });
                at += n;
                b
            })
            .collect();
        Self::from_blocks(algebra, blocks)
    }

    pub fn zeros(algebra: &Arc<TracialAlgebra>) -> Self {
        let blocks = algebra.block_dims().iter().map(|&n| CMatrix::zeros(n, n)).collect();
        Self {
            algebra: Arc::clone(algebra),
            blocks,
        }
    }

    pub fn identity(algebra: &Arc<TracialAlgebra>) -> Self {
        let blocks = algebra
            .block_dims()
            .iter()
            .map(|&n| CMatrix::identity(n, n))
            .collect();
        Self {
            algebra: Arc::clone(algebra),
            blocks,
        }
    }

    /// Matrix unit `E_rc` of block `block`.
    pub fn matrix_unit(algebra: &Arc<TracialAlgebra>, block: usize, r: usize, c: usize) -> Self {
        let mut e = Self::zeros(algebra);
        e.blocks[block][(r, c)] = ONE;
        e
    }

    /// Compresses an `N×N` matrix onto the block diagonal.
    ///
    /// Returns the element together with the largest discarded off-block entry.
    pub fn from_full(algebra: &Arc<TracialAlgebra>, full: &CMatrix) -> Result<(Self, f64)> {
        let n = algebra.total_dim();
        if full.nrows() != n || full.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: full.nrows(),
            });
        }
        let offsets = algebra.block_offsets();
        let mut leak: f64 = 0.0;
        let mut owner = alloc::vec![0usize; n];
        for (i, (&off, &d)) in offsets.iter().zip(algebra.block_dims()).enumerate() {
            owner[off..off + d].iter_mut().for_each(|o| *o = i);
        }
        for r in 0..n {
            for c in 0..n {
                if owner[r] != owner[c] {
                    leak = leak.max(full[(r, c)].norm());
                }
            }
        }
        let blocks = offsets
            .iter()
            .zip(algebra.block_dims())
            .map(|(&off, &d)| full.view((off, off), (d, d)).into_owned())
            .collect();
        Ok((
            Self {
                algebra: Arc::clone(algebra),
                blocks,
            },
            leak,
        ))
    }

    /// Block-diagonal `N×N` embedding.
    pub fn to_full(&self) -> CMatrix {
        let n = self.algebra.total_dim();
        let mut full = CMatrix::zeros(n, n);
        for (b, off) in self.blocks.iter().zip(self.algebra.block_offsets()) {
            full.view_mut((off, off), (b.nrows(), b.ncols())).copy_from(b);
        }
        full
    }

    pub fn algebra(&self) -> &TracialAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<TracialAlgebra> {
        &self.algebra
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn same_algebra(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra
    }

    fn check_same(&self, other: &Element) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    fn zip_with(&self, other: &Element, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            algebra: Arc::clone(&self.algebra),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        })
    }

    fn map_blocks(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        Self {
            algebra: Arc::clone(&self.algebra),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Element) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Element) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Element) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// `S X S` for the conjugating element `S = self`.
    pub fn sandwich(&self, middle: &Element) -> Result<Self> {
        self.zip_with(middle, |s, m| s * m * s)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map_blocks(|b| b.scale(c))
    }

    pub fn scale_complex(&self, c: C64) -> Self {
        self.map_blocks(|b| b * c)
    }

    /// `λ·self + (1-λ)·other`.
    pub fn mix(&self, other: &Element, lambda: f64) -> Result<Self> {
        self.zip_with(other, |a, b| a.scale(lambda) + b.scale(1.0 - lambda))
    }

    pub fn adjoint(&self) -> Self {
        self.map_blocks(|b| b.adjoint())
    }

    /// `(X + X*)/2`.
    pub fn hermitian_part(&self) -> Self {
        self.map_blocks(|b| (b + b.adjoint()).scale(0.5))
    }

    /// `τ(X) = Σ_i w_i Tr(X_i)`.
    pub fn trace(&self) -> C64 {
        self.blocks
            .iter()
            .zip(self.algebra.trace_weights())
            .map(|(b, &w)| b.trace() * w)
            .sum()
    }

    /// `⟨X, Y⟩_τ = τ(Y* X)`.
    pub fn inner(&self, other: &Element) -> Result<C64> {
        self.check_same(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .zip(self.algebra.trace_weights())
            .map(|((x, y), &w)| x.zip_fold(y, ZERO, |acc, a, b| acc + b.conj() * a) * w)
            .sum())
    }

    /// Weighted singular values, one vector per block.
    pub fn singular_values(&self) -> Vec<Vec<f64>> {
        self.blocks
            .iter()
            .map(singular_values_of)
            .collect()
    }

    /// `‖X‖_p = τ(|X|^p)^{1/p}` via singular values.
    pub fn p_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidExponent(p));
        }
        let sum: f64 = self
            .singular_values()
            .iter()
            .zip(self.algebra.trace_weights())
            .map(|(s, &w)| w * s.iter().map(|&x| x.powf(p)).sum::<f64>())
            .sum();
        Ok(sum.powf(1.0 / p))
    }

    /// `‖X‖_1 = τ(|X|)`.
    pub fn norm1(&self) -> f64 {
        self.singular_values()
            .iter()
            .zip(self.algebra.trace_weights())
            .map(|(s, &w)| w * s.iter().sum::<f64>())
            .sum()
    }

    /// `‖X‖_2 = τ(X* X)^{1/2}`.
    pub fn norm2(&self) -> f64 {
        self.blocks
            .iter()
            .zip(self.algebra.trace_weights())
            .map(|(b, &w)| w * b.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// Operator norm: the largest singular value over all blocks.
    pub fn operator_norm(&self) -> f64 {
        self.singular_values()
            .iter()
            .flat_map(|s| s.iter().cloned())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.blocks.iter().map(max_abs).fold(0.0, f64::max)
    }

    /// Largest entry of `X − X*`.
    pub fn hermitian_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| max_abs(&(b - b.adjoint())))
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= HERMITIAN_TOL * self.max_abs_entry().max(1.0)
    }

    fn require_hermitian(&self) -> Result<()> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                asymmetry: self.hermitian_defect(),
            })
        }
    }

    /// Eigenvalues of each block of a Hermitian element, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<Vec<f64>>> {
        self.require_hermitian()?;
        Ok(self
            .blocks
            .iter()
            .map(hermitian_eigenvalues)
            .collect())
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .iter()
            .flat_map(|v| v.iter().cloned())
            .fold(f64::INFINITY, f64::min))
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .iter()
            .flat_map(|v| v.iter().cloned())
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Applies `f` to the spectrum of a Hermitian element, block by block.
    ///
    /// `floor` is the smallest eigenvalue admitted by logarithms and negative
    /// powers; the spectrum must lie strictly above it.
    pub fn spectral_apply(&self, f: SpectralFn<'_>, floor: f64) -> Result<Self> {
        self.require_hermitian()?;
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let (mut values, vectors) = hermitian_eigh(b);
            let scale = values.iter().map(|v| v.abs()).fold(1.0, f64::max);
            let clamp = EIGEN_CLAMP * scale;
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let needs_floor = matches!(f, SpectralFn::Log | SpectralFn::Inverse)
                || matches!(f, SpectralFn::Power(e) if e < 0.0);
            let needs_positive = matches!(f, SpectralFn::Sqrt | SpectralFn::Abs)
                || matches!(f, SpectralFn::Power(e) if e > 0.0 && e.fract() != 0.0);
            if needs_floor && !(min > floor) {
                return Err(Error::BelowFloor {
                    min_eigenvalue: min,
                    floor,
                });
            }
            if needs_positive {
                if min < -clamp {
                    return Err(Error::NotPositive { min_eigenvalue: min });
                }
                values.iter_mut().for_each(|v| *v = v.max(0.0));
            }
            for v in values.iter_mut() {
                *v = match f {
                    SpectralFn::Identity => *v,
                    SpectralFn::Sqrt => v.sqrt(),
                    SpectralFn::Abs => v.abs(),
                    SpectralFn::Log => v.ln(),
                    SpectralFn::Inverse => 1.0 / *v,
                    SpectralFn::Power(e) => v.powf(e),
                    SpectralFn::Map(g) => g(*v),
                };
            }
            blocks.push(rebuild(&vectors, &values));
        }
        Ok(Self {
            algebra: Arc::clone(&self.algebra),
            blocks,
        })
    }

    /// `τ(f(X))` for Hermitian `X`, computed from eigenvalues only.
    pub fn trace_of(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .iter()
            .zip(self.algebra.trace_weights())
            .map(|(ev, &w)| w * ev.iter().map(|&x| f(x)).sum::<f64>())
            .sum())
    }

    /// Per-block diagonal part (the pinched element).
    pub fn diagonal_part(&self) -> Self {
        self.map_blocks(|b| CMatrix::from_diagonal(&b.diagonal()))
    }

    /// Largest entrywise distance to another element.
    pub fn max_abs_diff(&self, other: &Element) -> Result<f64> {
        Ok(self.sub(other)?.max_abs_entry())
    }
}

/// A density element: Hermitian, positive and of unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct State(Element);

impl State {
    pub fn new(element: Element) -> Result<Self> {
        element.require_hermitian()?;
        let scale = element.max_abs_entry().max(1.0);
        let min = element.min_eigenvalue()?;
        if min < -EIGEN_CLAMP * scale {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        let t = element.trace();
        if (t.re - 1.0).abs() > STATE_TRACE_TOL || t.im.abs() > STATE_TRACE_TOL {
            return Err(Error::NotNormalized { trace: t.re });
        }
        Ok(Self(element))
    }

    /// Normalizes a positive element to unit trace.
    pub fn normalize(element: Element) -> Result<Self> {
        let t = element.trace().re;
        if !(t > 0.0) {
            return Err(Error::NotNormalized { trace: t });
        }
        Self::new(element.hermitian_part().scale(1.0 / t))
    }

    /// The tracial state itself, `1`.
    pub fn maximally_mixed(algebra: &Arc<TracialAlgebra>) -> Self {
        Self(Element::identity(algebra))
    }

    pub fn element(&self) -> &Element {
        &self.0
    }

    pub fn into_element(self) -> Element {
        self.0
    }

    pub fn sqrt(&self) -> Element {
        self.0
            .spectral_apply(SpectralFn::Sqrt, 0.0)
            .expect("validated state has a square root")
    }
}

impl core::ops::Deref for State {
    type Target = Element;
    fn deref(&self) -> &Element {
        &self.0
    }
}

/// A state whose spectrum is bounded below by a positive floor.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceState {
    state: State,
    min_eigenvalue: f64,
}

impl ReferenceState {
    pub fn new(element: Element, floor: f64) -> Result<Self> {
        let state = State::new(element)?;
        let min = state.min_eigenvalue()?;
        if !(min >= floor) {
            return Err(Error::BelowFloor {
                min_eigenvalue: min,
                floor,
            });
        }
        Ok(Self {
            state,
            min_eigenvalue: min,
        })
    }

    pub fn from_state(state: State, floor: f64) -> Result<Self> {
        Self::new(state.into_element(), floor)
    }

    pub fn maximally_mixed(algebra: &Arc<TracialAlgebra>) -> Self {
        Self {
            state: State::maximally_mixed(algebra),
            min_eigenvalue: 1.0,
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn element(&self) -> &Element {
        &self.state
    }

    /// `B^e` for any real exponent (the spectrum is strictly positive).
    pub fn power(&self, exponent: f64) -> Element {
        if exponent == 0.0 {
            return Element::identity(self.algebra_arc());
        }
        self.state
            .spectral_apply(SpectralFn::Power(exponent), 0.0)
            .expect("reference state has a strictly positive spectrum")
    }
}

impl core::ops::Deref for ReferenceState {
    type Target = Element;
    fn deref(&self) -> &Element {
        &self.state
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn m2() -> Arc<TracialAlgebra> {
        Arc::new(TracialAlgebra::matrix(2).unwrap())
    }

    fn two_point() -> Arc<TracialAlgebra> {
        Arc::new(TracialAlgebra::new(vec![1, 1], vec![0.5, 0.5]).unwrap())
    }

    #[test]
    fn rejects_bad_algebras() {
        assert!(TracialAlgebra::new(vec![], vec![]).is_err());
        assert!(TracialAlgebra::new(vec![2], vec![0.5, 0.5]).is_err());
        assert!(TracialAlgebra::new(vec![0, 2], vec![0.5, 0.5]).is_err());
        assert!(TracialAlgebra::new(vec![2], vec![0.4]).is_err());
        assert!(TracialAlgebra::new(vec![1, 1], vec![1.5, -0.5]).is_err());
        assert!(TracialAlgebra::new(vec![2, 2], vec![0.125, 0.375]).is_ok());
    }

    #[test]
    fn trace_examples() {
        let a = m2();
        assert!((Element::identity(&a).trace() - ONE).norm() < 1e-15);
        let x = Element::diagonal(&a, &[1.5, 0.5]).unwrap();
        assert!((a.trace(&x).unwrap() - ONE).norm() < 1e-15);
        let b = two_point();
        let y = Element::diagonal(&b, &[2.0, 0.0]).unwrap();
        assert!((b.trace(&y).unwrap() - ONE).norm() < 1e-15);
        assert_eq!(a.trace(&y), Err(Error::AlgebraMismatch));
    }

    #[test]
    fn p_norm_examples() {
        let a = m2();
        assert_eq!(Element::zeros(&a).p_norm(3.0).unwrap(), 0.0);
        let x = Element::diagonal(&a, &[0.5, -0.5]).unwrap();
        assert!((x.p_norm(1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((x.p_norm(2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(x.p_norm(0.5), Err(Error::InvalidExponent(_))));
        for p in [1.0, 1.5, 2.0, 7.0] {
            assert!((Element::identity(&a).p_norm(p).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn inner_examples() {
        let a = m2();
        let one = Element::identity(&a);
        assert!((one.inner(&one).unwrap() - ONE).norm() < 1e-15);
        let x = Element::diagonal(&a, &[1.5, 0.5]).unwrap();
        assert!((x.inner(&one).unwrap() - ONE).norm() < 1e-15);
        assert_eq!(x.inner(&Element::zeros(&two_point())), Err(Error::AlgebraMismatch));
    }

    #[test]
    fn spectral_examples() {
        let a = m2();
        let one = Element::identity(&a);
        let s = one.spectral_apply(SpectralFn::Sqrt, 0.0).unwrap();
        assert!(s.max_abs_diff(&one).unwrap() < 1e-15);
        let q = one.spectral_apply(SpectralFn::Power(-0.25), 1e-6).unwrap();
        assert!(q.max_abs_diff(&one).unwrap() < 1e-15);
        let d = Element::diagonal(&a, &[2.0, 0.5]).unwrap();
        let inv = d.spectral_apply(SpectralFn::Inverse, 1e-6).unwrap();
        let expect = Element::diagonal(&a, &[0.5, 2.0]).unwrap();
        assert!(inv.max_abs_diff(&expect).unwrap() < 1e-14);
    }

    #[test]
    fn spectral_errors() {
        let a = m2();
        let mut nh = Element::zeros(&a);
        nh.blocks[0][(0, 1)] = ONE;
        assert!(matches!(
            nh.spectral_apply(SpectralFn::Identity, 0.0),
            Err(Error::NotHermitian { .. })
        ));
        let d = Element::diagonal(&a, &[1.0, 1e-7]).unwrap();
        assert!(matches!(
            d.spectral_apply(SpectralFn::Log, 1e-6),
            Err(Error::BelowFloor { .. })
        ));
        assert!(matches!(
            d.spectral_apply(SpectralFn::Inverse, 1e-6),
            Err(Error::BelowFloor { .. })
        ));
        let neg = Element::diagonal(&a, &[1.0, -1e-3]).unwrap();
        assert!(matches!(
            neg.spectral_apply(SpectralFn::Sqrt, 0.0),
            Err(Error::NotPositive { .. })
        ));
        let tiny = Element::diagonal(&a, &[1.0, -1e-13]).unwrap();
        let r = tiny.spectral_apply(SpectralFn::Sqrt, 0.0).unwrap();
        assert_eq!(r.blocks()[0][(1, 1)].re, 0.0);
    }

    #[test]
    fn state_validation() {
        let a = m2();
        assert!(State::new(Element::diagonal(&a, &[1.5, 0.5]).unwrap()).is_ok());
        assert!(matches!(
            State::new(Element::diagonal(&a, &[1.0, 0.5]).unwrap()),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            State::new(Element::diagonal(&a, &[2.5, -0.5]).unwrap()),
            Err(Error::NotPositive { .. })
        ));
        let near_singular = Element::diagonal(&a, &[2.0 - 1e-7, 1e-7]).unwrap();
        assert!(ReferenceState::new(near_singular.clone(), 1e-6).is_err());
        assert!(ReferenceState::new(near_singular, 1e-8).is_ok());
    }

    #[test]
    fn direct_sum_weights() {
        let s = TracialAlgebra::direct_sum(&TracialAlgebra::matrix(2).unwrap(), &TracialAlgebra::matrix(2).unwrap(), 0.25)
            .unwrap();
        assert_eq!(s.block_dims(), &[2, 2]);
        assert!((s.trace_weights()[0] - 0.125).abs() < 1e-15);
        assert!((s.trace_weights()[1] - 0.375).abs() < 1e-15);
    }

    #[test]
    fn full_roundtrip_reports_leak() {
        let b = Arc::new(TracialAlgebra::new(vec![1, 2], vec![0.2, 0.4]).unwrap());
        let mut full = CMatrix::identity(3, 3);
        full[(0, 2)] = C64::new(0.25, 0.0);
        let (x, leak) = Element::from_full(&b, &full).unwrap();
        assert_eq!(leak, 0.25);
        assert_eq!(x.to_full(), CMatrix::identity(3, 3));
    }

    #[test]
    fn dilation_singular_values() {
        let c = |re: f64, im: f64| C64::new(re, im);
        // Rank one: outer product of (1, i, 2) and (1 − i, 3).
        let x = CMatrix::from_fn(3, 2, |r, k| [c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0)][r] * [c(1.0, 1.0), c(3.0, 0.0)][k]);
        let s = singular_values_of(&x);
        assert_eq!(s.len(), 2);
        assert!((s[0] - (6.0f64 * 11.0).sqrt()).abs() < 1e-12);
        assert!(s[1] < 1e-12);
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(-2.0, 0.0), c(0.0, 0.5)]));
        let s = singular_values_of(&d);
        assert!((s[0] - 2.0).abs() < 1e-14 && (s[1] - 0.5).abs() < 1e-14, "{s:?}");
    }

    #[test]
    fn hermitian_eigh_on_clustered_spectrum() {
        let mut r = crate::random::rng(5);
        let u = crate::random::haar_unitary(12, &mut r);
        let values = [0.3, 0.3, 0.3, 0.3 + 1e-9, 0.7, 0.7, 1.1, 1.1, 1.1, 2.0, 2.0, 4.5];
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(12, values.iter().map(|&x| C64::new(x, 0.0))));
        let h = &u * d * u.adjoint();
        let (ev, vecs) = hermitian_eigh(&h);
        assert!((rebuild(&vecs, &ev) - &h).norm() < 1e-13);
        let sorted = hermitian_eigenvalues(&h);
        for (a, b) in sorted.iter().zip(values) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
