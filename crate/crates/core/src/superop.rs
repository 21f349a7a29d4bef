//! Linear maps between algebras as matrices on orthonormal L² coordinates.
//!
//! The coordinate of entry `(r, c)` of block `i` is `√w_i · X_rc`, ordered
//! block by block and row-major inside each block. With this scaling the
//! matrix units `E_rc / √w_i` form an orthonormal basis for `⟨X, Y⟩_τ`, so
//! Hilbert-space adjoints are plain conjugate transposes.

// Float math without std; unused when std is linked.
#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::sync::Arc;
use alloc::vec::Vec;

use nalgebra::DVector;

use crate::algebra::{hermitian_eigenvalues, min_hermitian_eigenvalue, singular_values_of, CMatrix, Element, TracialAlgebra, C64, ZERO};
use crate::error::{Error, Result};

pub type CVector = DVector<C64>;

/// Coordinates of `x` in the orthonormal basis.
pub fn coordinates(x: &Element) -> CVector {
    let alg = x.algebra();
    let mut v = CVector::zeros(alg.l2_dim());
    let mut at = 0;
    for (b, &w) in x.blocks().iter().zip(alg.trace_weights()) {
        let s = w.sqrt();
        let n = b.nrows();
        for r in 0..n {
            for c in 0..n {
                v[at] = b[(r, c)] * s;
                at += 1;
            }
        }
    }
    v
}

/// Inverse of [`coordinates`].
pub fn from_coordinates(algebra: &Arc<TracialAlgebra>, v: &CVector) -> Result<Element> {
    if v.len() != algebra.l2_dim() {
        return Err(Error::DimensionMismatch {
            expected: algebra.l2_dim(),
            actual: v.len(),
        });
    }
    let mut at = 0;
    let blocks = algebra
        .block_dims()
        .iter()
        .zip(algebra.trace_weights())
        .map(|(&n, &w)| {
            let s = 1.0 / w.sqrt();
            let b = CMatrix::from_fn(n, n, |r, c| v[at + r * n + c] * s);
            at += n * n;
            b
        })
        .collect();
    Element::from_blocks(algebra, blocks)
}

/// The `k`-th orthonormal basis element, `E_rc / √w_i`.
pub fn basis_element(algebra: &Arc<TracialAlgebra>, k: usize) -> Element {
    let mut v = CVector::zeros(algebra.l2_dim());
    v[k] = C64::new(1.0, 0.0);
    from_coordinates(algebra, &v).expect("basis vector has the right length")
}

/// `(block, row, col)` of coordinate `k`.
pub fn coordinate_index(algebra: &TracialAlgebra, k: usize) -> (usize, usize, usize) {
    let mut rest = k;
    for (i, &n) in algebra.block_dims().iter().enumerate() {
        if rest < n * n {
            return (i, rest / n, rest % n);
        }
        rest -= n * n;
    }
    panic!("coordinate {k} out of range");
}

/// Coordinates of the linear functional `τ`: `τ(X) = u^T x`.
pub(crate) fn trace_functional(algebra: &TracialAlgebra) -> Vec<f64> {
    let mut u = alloc::vec![0.0; algebra.l2_dim()];
    let mut at = 0;
    for (&n, &w) in algebra.block_dims().iter().zip(algebra.trace_weights()) {
        for r in 0..n {
            u[at + r * n + r] = w.sqrt();
        }
        at += n * n;
    }
    u
}

/// A linear map from `source` to `target` in orthonormal coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    source: Arc<TracialAlgebra>,
    target: Arc<TracialAlgebra>,
    matrix: CMatrix,
}

impl Superoperator {
    pub fn from_matrix(
        source: &Arc<TracialAlgebra>,
        target: &Arc<TracialAlgebra>,
        matrix: CMatrix,
    ) -> Result<Self> {
        if matrix.ncols() != source.l2_dim() {
            return Err(Error::DimensionMismatch {
                expected: source.l2_dim(),
                actual: matrix.ncols(),
            });
        }
        if matrix.nrows() != target.l2_dim() {
            return Err(Error::DimensionMismatch {
                expected: target.l2_dim(),
                actual: matrix.nrows(),
            });
        }
        Ok(Self {
            source: Arc::clone(source),
            target: Arc::clone(target),
            matrix,
        })
    }

    /// Tabulates a linear map by evaluating it on the orthonormal basis.
    pub fn from_fn(
        source: &Arc<TracialAlgebra>,
        target: &Arc<TracialAlgebra>,
        f: impl Fn(&Element) -> Result<Element>,
    ) -> Result<Self> {
        let mut matrix = CMatrix::zeros(target.l2_dim(), source.l2_dim());
        for k in 0..source.l2_dim() {
            let image = f(&basis_element(source, k))?;
            if image.algebra() != &**target {
                return Err(Error::AlgebraMismatch);
            }
            matrix.set_column(k, &coordinates(&image));
        }
        Self::from_matrix(source, target, matrix)
    }

    pub fn identity(algebra: &Arc<TracialAlgebra>) -> Self {
        let d = algebra.l2_dim();
        Self {
            source: Arc::clone(algebra),
            target: Arc::clone(algebra),
            matrix: CMatrix::identity(d, d),
        }
    }

    /// Left multiplication `L_X : Y ↦ XY`.
    pub fn left_mul(x: &Element) -> Self {
        Self::block_local(x, |xb, n| {
            CMatrix::from_fn(n * n, n * n, |row, col| {
                let (r, c) = (row / n, row % n);
                let (r2, c2) = (col / n, col % n);
                if c == c2 {
                    xb[(r, r2)]
                } else {
                    ZERO
                }
            })
        })
    }

    /// Right multiplication `R_X : Y ↦ YX`.
    pub fn right_mul(x: &Element) -> Self {
        Self::block_local(x, |xb, n| {
            CMatrix::from_fn(n * n, n * n, |row, col| {
                let (r, c) = (row / n, row % n);
                let (r2, c2) = (col / n, col % n);
                if r == r2 {
                    xb[(c2, c)]
                } else {
                    ZERO
                }
            })
        })
    }

    /// `L_X R_X : Y ↦ XYX`.
    pub fn sandwich(x: &Element) -> Self {
        Self::left_mul(x)
            .compose(&Self::right_mul(x))
            .expect("same algebra")
    }

    fn block_local(x: &Element, f: impl Fn(&CMatrix, usize) -> CMatrix) -> Self {
        let alg = x.algebra_arc();
        let d = alg.l2_dim();
        let mut matrix = CMatrix::zeros(d, d);
        for (b, off) in x.blocks().iter().zip(alg.coordinate_offsets()) {
            let n = b.nrows();
            matrix.view_mut((off, off), (n * n, n * n)).copy_from(&f(b, n));
        }
        Self {
            source: Arc::clone(alg),
            target: Arc::clone(alg),
            matrix,
        }
    }

    pub fn source(&self) -> &Arc<TracialAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TracialAlgebra> {
        &self.target
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.algebra() != &*self.source {
            return Err(Error::AlgebraMismatch);
        }
        from_coordinates(&self.target, &(&self.matrix * coordinates(x)))
    }

    pub fn apply_coordinates(&self, x: &CVector) -> CVector {
        &self.matrix * x
    }

    /// Hilbert-space adjoint (target → source).
    pub fn adjoint(&self) -> Self {
        Self {
            source: Arc::clone(&self.target),
            target: Arc::clone(&self.source),
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Superoperator) -> Result<Self> {
        if *first.target != *self.source {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self {
            source: Arc::clone(&first.source),
            target: Arc::clone(&self.target),
            matrix: &self.matrix * &first.matrix,
        })
    }

    fn check_shape(&self, other: &Superoperator) -> Result<()> {
        if *self.source == *other.source && *self.target == *other.target {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Superoperator) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            matrix: &self.matrix + &other.matrix,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Superoperator) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            matrix: &self.matrix - &other.matrix,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            matrix: self.matrix.scale(c),
            ..self.clone()
        }
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        singular_values_of(&self.matrix).first().copied().unwrap_or(0.0)
    }

    /// Largest entry of `M − M*` (only meaningful for endomorphisms).
    pub fn hermitian_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of `(M + M*)/2`.
    pub fn min_eigenvalue(&self) -> f64 {
        min_hermitian_eigenvalue(&self.matrix)
    }

    /// Eigenvalues of `(M + M*)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Functional calculus on the Hermitian part, `f((M + M*)/2)`.
    pub fn hermitian_apply(&self, f: impl Fn(f64) -> f64) -> Self {
        let (values, vectors) = crate::algebra::hermitian_eigh(&self.matrix);
        let mut scaled = vectors.clone();
        for (j, v) in values.iter().enumerate() {
            let fv = f(*v);
            scaled.column_mut(j).scale_mut(fv);
        }
        Self {
            matrix: scaled * vectors.adjoint(),
            ..self.clone()
        }
    }

    pub fn max_abs_diff(&self, other: &Superoperator) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use alloc::vec;

    fn alg() -> Arc<TracialAlgebra> {
        Arc::new(TracialAlgebra::new(vec![1, 2], vec![0.2, 0.4]).unwrap())
    }

    #[test]
    fn coordinates_are_orthonormal() {
        let a = alg();
        for j in 0..a.l2_dim() {
            for k in 0..a.l2_dim() {
                let ip = basis_element(&a, j).inner(&basis_element(&a, k)).unwrap();
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!((ip - C64::new(expect, 0.0)).norm() < 1e-14);
            }
        }
        let x = random::random_element(&a, 3);
        let back = from_coordinates(&a, &coordinates(&x)).unwrap();
        assert!(back.max_abs_diff(&x).unwrap() < 1e-14);
        let y = random::random_element(&a, 4);
        let ip = coordinates(&y).dotc(&coordinates(&x));
        assert!((ip - x.inner(&y).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn multiplication_matches_products() {
        let a = alg();
        let x = random::random_element(&a, 1);
        let y = random::random_element(&a, 2);
        let l = Superoperator::left_mul(&x).apply(&y).unwrap();
        let r = Superoperator::right_mul(&x).apply(&y).unwrap();
        assert!(l.max_abs_diff(&x.mul(&y).unwrap()).unwrap() < 1e-12);
        assert!(r.max_abs_diff(&y.mul(&x).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn trace_functional_matches_trace() {
        let a = alg();
        let x = random::random_element(&a, 9);
        let u = trace_functional(&a);
        let c = coordinates(&x);
        let t: C64 = u.iter().zip(c.iter()).map(|(w, z)| z * *w).sum();
        assert!((t - x.trace()).norm() < 1e-14);
    }
}
