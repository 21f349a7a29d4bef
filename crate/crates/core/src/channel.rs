//! Completely positive, weighted-trace-preserving maps between tracial algebras.
//!
//! A [`Channel`] is carried as Kraus operators acting on the block-diagonal
//! embeddings, `φ(X) = Σ_j K_j X K_j*`, with its L² matrix and Choi blocks
//! computed once at construction. Construction fails unless the map keeps
//! the target block structure, has a positive Choi matrix and preserves the
//! weighted trace.

// Float math without std; unused when std is linked.
#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::{
    hermitian_eigh, min_hermitian_eigenvalue, CMatrix, Element, ReferenceState, State, TracialAlgebra, C64,
    ONE, ZERO,
};
use crate::error::{Error, Result};
use crate::random;
use crate::superop::{coordinates, trace_functional, Superoperator};
use crate::tolerance::{BLOCK_LEAK_TOL, CHOI_BREAKDOWN, CHOI_FLOOR, STRICTNESS_FLOOR, TRACE_PRESERVATION_TOL};

/// Choi matrix of the `(source block, target block)` component of a map.
///
/// Entry `((r, s), (c, t))` is `φ(E_rc)_st`, with row index `r·m + s`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiBlock {
    pub source_block: usize,
    pub target_block: usize,
    pub matrix: CMatrix,
}

/// Invariant residuals measured when a channel is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDiagnostics {
    /// Largest off-block entry of `Σ K E K*` over source matrix units.
    pub block_leak: f64,
    /// Smallest Choi eigenvalue over all block pairs.
    pub choi_min_eigenvalue: f64,
    /// `max_k |τ'(φ(e_k)) − τ(e_k)|` over the orthonormal basis.
    pub trace_residual: f64,
}

/// Result of a strictness test: `φ(B)` must stay above a floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strictness {
    pub strict: bool,
    /// Smallest eigenvalue of `φ(B)`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    source: Arc<TracialAlgebra>,
    target: Arc<TracialAlgebra>,
    kraus: Vec<CMatrix>,
    superop: Superoperator,
    choi: Vec<ChoiBlock>,
    diagnostics: ChannelDiagnostics,
}

fn choi_blocks(s: &Superoperator) -> Vec<ChoiBlock> {
    let src = s.source();
    let tgt = s.target();
    let mut out = Vec::new();
    for (i, (&n, &w)) in src.block_dims().iter().zip(src.trace_weights()).enumerate() {
        let src_off = src.coordinate_offsets()[i];
        for (j, (&m, &w2)) in tgt.block_dims().iter().zip(tgt.trace_weights()).enumerate() {
            let tgt_off = tgt.coordinate_offsets()[j];
            let factor = (w / w2).sqrt();
            let matrix = CMatrix::from_fn(n * m, n * m, |row, col| {
                let (r, sr) = (row / m, row % m);
                let (c, t) = (col / m, col % m);
                s.matrix()[(tgt_off + sr * m + t, src_off + r * n + c)] * factor
            });
            out.push(ChoiBlock {
                source_block: i,
                target_block: j,
                matrix,
            });
        }
    }
    out
}

fn trace_residual(s: &Superoperator) -> f64 {
    let u_src = trace_functional(s.source());
    let u_tgt = trace_functional(s.target());
    (0..s.matrix().ncols())
        .map(|k| {
            let image: C64 = s
                .matrix()
                .column(k)
                .iter()
                .zip(&u_tgt)
                .map(|(z, &u)| z * u)
                .sum();
            (image - C64::new(u_src[k], 0.0)).norm()
        })
        .fold(0.0, f64::max)
}

fn unit(n: usize, r: usize, c: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(r, c)] = ONE;
    m
}

fn diag_real(d: &[f64]) -> CMatrix {
    CMatrix::from_fn(d.len(), d.len(), |r, c| if r == c { C64::new(d[r], 0.0) } else { ZERO })
}

impl Channel {
    /// Builds and validates a channel from Kraus operators of shape `N_tgt × N_src`.
    pub fn from_kraus(
        source: &Arc<TracialAlgebra>,
        target: &Arc<TracialAlgebra>,
        kraus: Vec<CMatrix>,
    ) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::EmptyKraus);
        }
        let (n_src, n_tgt) = (source.total_dim(), target.total_dim());
        for k in &kraus {
            if k.ncols() != n_src {
                return Err(Error::DimensionMismatch {
                    expected: n_src,
                    actual: k.ncols(),
                });
            }
            if k.nrows() != n_tgt {
                return Err(Error::DimensionMismatch {
                    expected: n_tgt,
                    actual: k.nrows(),
                });
            }
        }

        let mut matrix = CMatrix::zeros(target.l2_dim(), source.l2_dim());
        let mut leak: f64 = 0.0;
        let offsets = source.block_offsets();
        let mut col = 0;
        for (i, (&n, &w)) in source.block_dims().iter().zip(source.trace_weights()).enumerate() {
            for r in 0..n {
                for c in 0..n {
                    let (a, b) = (offsets[i] + r, offsets[i] + c);
                    let mut image = CMatrix::zeros(n_tgt, n_tgt);
                    for k in &kraus {
                        image += k.column(a) * k.column(b).adjoint();
                    }
                    let (img, l) = Element::from_full(target, &image)?;
                    leak = leak.max(l);
                    matrix.set_column(col, &coordinates(&img.scale(1.0 / w.sqrt())));
                    col += 1;
                }
            }
        }
        if leak > BLOCK_LEAK_TOL {
            return Err(Error::BlockLeak { residual: leak });
        }
        let superop = Superoperator::from_matrix(source, target, matrix)?;
        let choi = choi_blocks(&superop);
        let choi_min = choi
            .iter()
            .map(|b| min_hermitian_eigenvalue(&b.matrix))
            .fold(f64::INFINITY, f64::min);
        if choi_min < CHOI_FLOOR {
            return Err(Error::NotCompletelyPositive {
                min_eigenvalue: choi_min,
            });
        }
        let tp = trace_residual(&superop);
        if tp > TRACE_PRESERVATION_TOL {
            return Err(Error::NotTracePreserving { residual: tp });
        }
        Ok(Self {
            source: Arc::clone(source),
            target: Arc::clone(target),
            kraus,
            superop,
            choi,
            diagnostics: ChannelDiagnostics {
                block_leak: leak,
                choi_min_eigenvalue: choi_min,
                trace_residual: tp,
            },
        })
    }

    /// Converts an L² matrix into Kraus form through its Choi blocks.
    ///
    /// Choi eigenvalues in `[CHOI_BREAKDOWN, 0)` are clamped to zero; anything
    /// more negative is reported as a numerical breakdown.
    pub fn from_superoperator(s: &Superoperator) -> Result<Self> {
        let source = s.source();
        let target = s.target();
        let src_off = source.block_offsets();
        let tgt_off = target.block_offsets();
        let mut kraus = Vec::new();
        for block in choi_blocks(s) {
            let n = source.block_dims()[block.source_block];
            let m = target.block_dims()[block.target_block];
            let (values, vectors) = hermitian_eigh(&block.matrix);
            for (idx, &lambda) in values.iter().enumerate() {
                if lambda < CHOI_BREAKDOWN {
                    return Err(Error::NumericalBreakdown {
                        min_eigenvalue: lambda,
                    });
                }
                if lambda <= 0.0 {
                    continue;
                }
                let scale = lambda.sqrt();
                let v = vectors.column(idx);
                let mut k = CMatrix::zeros(target.total_dim(), source.total_dim());
                for r in 0..n {
                    for t in 0..m {
                        k[(tgt_off[block.target_block] + t, src_off[block.source_block] + r)] = v[r * m + t] * scale;
                    }
                }
                kraus.push(k);
            }
        }
        Self::from_kraus(source, target, kraus)
    }

    pub fn source(&self) -> &Arc<TracialAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TracialAlgebra> {
        &self.target
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn choi(&self) -> &[ChoiBlock] {
        &self.choi
    }

    pub fn diagnostics(&self) -> ChannelDiagnostics {
        self.diagnostics
    }

    /// `Σ_j K_j X K_j*`, compressed back onto the target blocks.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.algebra() != &*self.source {
            return Err(Error::AlgebraMismatch);
        }
        let full = x.to_full();
        let mut out = CMatrix::zeros(self.target.total_dim(), self.target.total_dim());
        for k in &self.kraus {
            out += k * &full * k.adjoint();
        }
        let (y, leak) = Element::from_full(&self.target, &out)?;
        if leak > BLOCK_LEAK_TOL * x.max_abs_entry().max(1.0) {
            return Err(Error::BlockLeak { residual: leak });
        }
        Ok(y)
    }

    pub fn apply_state(&self, a: &State) -> Result<State> {
        State::new(self.apply(a)?.hermitian_part())
    }

    /// The map's matrix on orthonormal L² coordinates.
    pub fn l2_superoperator(&self) -> &Superoperator {
        &self.superop
    }

    /// `φ*` with respect to `⟨·,·⟩_τ` and `⟨·,·⟩_τ'`.
    pub fn adjoint(&self) -> Superoperator {
        self.superop.adjoint()
    }

    pub fn adjoint_apply(&self, y: &Element) -> Result<Element> {
        self.superop.adjoint().apply(y)
    }

    pub fn is_strict(&self, b: &ReferenceState) -> Result<Strictness> {
        self.is_strict_with_floor(b, STRICTNESS_FLOOR)
    }

    pub fn is_strict_with_floor(&self, b: &ReferenceState, floor: f64) -> Result<Strictness> {
        let image = self.apply(b)?.hermitian_part();
        let margin = image.min_eigenvalue()?;
        Ok(Strictness {
            strict: margin >= floor,
            margin,
        })
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Channel) -> Result<Self> {
        if *first.target != *self.source {
            return Err(Error::AlgebraMismatch);
        }
        let kraus = self
            .kraus
            .iter()
            .flat_map(|k2| first.kraus.iter().map(move |k1| k2 * k1))
            .collect();
        Self::from_kraus(&first.source, &self.target, kraus)
    }

    // --- builders ---

    pub fn identity(algebra: &Arc<TracialAlgebra>) -> Self {
        let n = algebra.total_dim();
        Self::from_kraus(algebra, algebra, alloc::vec![CMatrix::identity(n, n)])
            .expect("identity is a channel")
    }

    /// `X ↦ U X U*` for a unitary element `U`.
    pub fn unitary(algebra: &Arc<TracialAlgebra>, u: &Element) -> Result<Self> {
        if u.algebra() != &**algebra {
            return Err(Error::AlgebraMismatch);
        }
        Self::from_kraus(algebra, algebra, alloc::vec![u.to_full()])
    }

    /// Conditional expectation onto the diagonal of every block.
    pub fn pinching(algebra: &Arc<TracialAlgebra>) -> Self {
        let n = algebra.total_dim();
        let kraus = (0..n).map(|k| unit(n, k, k)).collect();
        Self::from_kraus(algebra, algebra, kraus).expect("pinching is a channel")
    }

    /// `X ↦ τ(X)·1`.
    pub fn trace(algebra: &Arc<TracialAlgebra>) -> Self {
        Self::replacement(algebra, algebra, &State::maximally_mixed(algebra))
            .expect("trace map is a channel")
    }

    /// `X ↦ τ(X)·σ`, with Kraus operators `√w_b · σ^{1/2} E_ab`.
    pub fn replacement(source: &Arc<TracialAlgebra>, target: &Arc<TracialAlgebra>, sigma: &State) -> Result<Self> {
        if sigma.algebra() != &**target {
            return Err(Error::AlgebraMismatch);
        }
        let root = sigma.sqrt().to_full();
        let weights = source.weight_diagonal();
        let (n_src, n_tgt) = (source.total_dim(), target.total_dim());
        let mut kraus = Vec::with_capacity(n_src * n_tgt);
        for a in 0..n_tgt {
            if root.column(a).iter().all(|z| z.norm() == 0.0) {
                continue;
            }
            for (b, &w) in weights.iter().enumerate() {
                let mut k = CMatrix::zeros(n_tgt, n_src);
                k.set_column(b, &(root.column(a) * C64::new(w.sqrt(), 0.0)));
                kraus.push(k);
            }
        }
        Self::from_kraus(source, target, kraus)
    }

    /// `φ₁ ⊕ φ₂` between `src₁ ⊕_λ src₂` and `tgt₁ ⊕_λ tgt₂`.
    pub fn direct_sum(first: &Channel, second: &Channel, lambda: f64) -> Result<Self> {
        let source = Arc::new(TracialAlgebra::direct_sum(&first.source, &second.source, lambda)?);
        let target = Arc::new(TracialAlgebra::direct_sum(&first.target, &second.target, lambda)?);
        let (n1, n2) = (first.source.total_dim(), second.source.total_dim());
        let (m1, m2) = (first.target.total_dim(), second.target.total_dim());
        let mut kraus = Vec::new();
        for k in &first.kraus {
            let mut big = CMatrix::zeros(m1 + m2, n1 + n2);
            big.view_mut((0, 0), (m1, n1)).copy_from(k);
            kraus.push(big);
        }
        for k in &second.kraus {
            let mut big = CMatrix::zeros(m1 + m2, n1 + n2);
            big.view_mut((m1, n1), (m2, n2)).copy_from(k);
            kraus.push(big);
        }
        Self::from_kraus(&source, &target, kraus)
    }

    /// `φ₁ ⊗ φ₂` for single-block algebras.
    pub fn tensor(first: &Channel, second: &Channel) -> Result<Self> {
        for a in [&first.source, &first.target, &second.source, &second.target] {
            if !a.is_single_block() {
                return Err(Error::MultiBlock);
            }
        }
        let source = Arc::new(TracialAlgebra::matrix(first.source.total_dim() * second.source.total_dim())?);
        let target = Arc::new(TracialAlgebra::matrix(first.target.total_dim() * second.target.total_dim())?);
        let kraus = first
            .kraus
            .iter()
            .flat_map(|k1| second.kraus.iter().map(move |k2| k1.kronecker(k2)))
            .collect();
        Self::from_kraus(&source, &target, kraus)
    }

    /// Random channel between single-block algebras: Ginibre Kraus operators
    /// corrected by `K_j ← K_j S^{-1/2} W^{1/2}` with `S = Σ K_j* W' K_j`.
    pub fn random(
        source: &Arc<TracialAlgebra>,
        target: &Arc<TracialAlgebra>,
        num_kraus: usize,
        seed: u64,
    ) -> Result<Self> {
        if !source.is_single_block() || !target.is_single_block() {
            return Err(Error::MultiBlock);
        }
        if num_kraus == 0 {
            return Err(Error::EmptyKraus);
        }
        let (n, m) = (source.total_dim(), target.total_dim());
        let mut rng = random::rng(seed);
        let raw: Vec<CMatrix> = (0..num_kraus).map(|_| random::ginibre(m, n, &mut rng)).collect();
        let w_tgt = diag_real(&target.weight_diagonal());
        let w_src_sqrt = diag_real(&source.weight_diagonal().iter().map(|w| w.sqrt()).collect::<Vec<_>>());
        let mut s = CMatrix::zeros(n, n);
        for k in &raw {
            s += k.adjoint() * &w_tgt * k;
        }
        let (values, vectors) = hermitian_eigh(&s);
        let top = values.iter().cloned().fold(0.0, f64::max);
        if values.iter().any(|&v| !(v > 1e-12 * top)) {
            return Err(Error::SingularKrausSum);
        }
        let mut scaled = vectors.clone();
        for (j, v) in values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(1.0 / v.sqrt());
        }
        let s_inv_sqrt = scaled * vectors.adjoint();
        let correction = s_inv_sqrt * w_src_sqrt;
        let kraus = raw.iter().map(|k| k * &correction).collect();
        Self::from_kraus(source, target, kraus)
    }

    /// `⊕_i M_{n_i} → M_N`, embedding block `i` with Kraus `√(N w_i) P_i`.
    pub fn block_embedding(source: &Arc<TracialAlgebra>) -> Result<Self> {
        let n = source.total_dim();
        let target = Arc::new(TracialAlgebra::matrix(n)?);
        let kraus = Self::block_projectors(source, |w| (n as f64 * w).sqrt());
        Self::from_kraus(source, &target, kraus)
    }

    /// `M_N → ⊕_i M_{n_i}`, compressing onto block `i` with Kraus `P_i / √(N w_i)`.
    pub fn block_compression(target: &Arc<TracialAlgebra>) -> Result<Self> {
        let n = target.total_dim();
        let source = Arc::new(TracialAlgebra::matrix(n)?);
        let kraus = Self::block_projectors(target, |w| 1.0 / (n as f64 * w).sqrt());
        Self::from_kraus(&source, target, kraus)
    }

    fn block_projectors(algebra: &TracialAlgebra, coefficient: impl Fn(f64) -> f64) -> Vec<CMatrix> {
        let n = algebra.total_dim();
        algebra
            .block_dims()
            .iter()
            .zip(algebra.block_offsets())
            .zip(algebra.trace_weights())
            .map(|((&d, off), &w)| {
                let c = C64::new(coefficient(w), 0.0);
                CMatrix::from_fn(n, n, |r, col| {
                    if r == col && r >= off && r < off + d {
                        c
                    } else {
                        ZERO
                    }
                })
            })
            .collect()
    }
}
