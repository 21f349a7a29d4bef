//! Uhlmann fidelity between density elements and the Bures angle.
//!
//! `F(A|B) = τ(|A^{1/2} B^{1/2}|)`, the value of
//! `sup_U |⟨U A^{1/2}, B^{1/2}⟩_τ|` attained at the polar unitary of
//! `A^{1/2} B^{1/2}`. Monotonicity is stated for trace-preserving channels
//! acting on densities; this is the predual of the unital-map form.

// Float math without std; unused when std is linked.
#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::{hermitian_eigh, CMatrix, Element, State, TracialAlgebra, C64};
use crate::superop::CVector;
use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::random;

/// Relative size below which `Y v_i` is treated as a null direction.
const POLAR_RANK_TOL: f64 = 1e-12;

/// Two states of one algebra. Neither needs to be invertible.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityPair {
    a: State,
    b: State,
}

impl FidelityPair {
    pub fn new(a: State, b: State) -> Result<Self> {
        if !a.same_algebra(&b) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &State {
        &self.a
    }

    pub fn b(&self) -> &State {
        &self.b
    }

    pub fn algebra(&self) -> &Arc<TracialAlgebra> {
        self.a.algebra_arc()
    }
}

/// `τ(|A^{1/2} B^{1/2}|)` for positive elements given by their square roots.
fn fidelity_of_roots(ra: &Element, rb: &Element) -> f64 {
    ra.mul(rb).expect("same algebra").norm1()
}

pub fn fidelity(pair: &FidelityPair) -> f64 {
    fidelity_of_roots(&pair.a.sqrt(), &pair.b.sqrt())
}

/// Fidelity between two states given as elements of the same algebra.
pub fn fidelity_states(a: &State, b: &State) -> Result<f64> {
    if !a.same_algebra(b) {
        return Err(Error::AlgebraMismatch);
    }
    Ok(fidelity_of_roots(&a.sqrt(), &b.sqrt()))
}

/// The unitary `U` maximizing `|τ(U A^{1/2} B^{1/2})|`.
pub fn polar_unitary(pair: &FidelityPair) -> Element {
    let y = pair.a.sqrt().mul(&pair.b.sqrt()).expect("same algebra");
    let blocks: Vec<CMatrix> = y.blocks().iter().map(|b| polar_block(b).adjoint()).collect();
    Element::from_blocks(pair.algebra(), blocks).expect("block shapes match")
}

/// Unitary `W` with `Y = W|Y|`. Singular pairs come from eigenvectors
/// `(u, v)/√2` of the dilation `[[0, Y], [Y*, 0]]` with eigenvalue `σ > 0`;
/// null directions are completed from the standard basis.
fn polar_block(y: &CMatrix) -> CMatrix {
    let n = y.nrows();
    let mut h = CMatrix::zeros(2 * n, 2 * n);
    h.view_mut((0, n), (n, n)).copy_from(y);
    h.view_mut((n, 0), (n, n)).copy_from(&y.adjoint());
    let (values, vectors) = hermitian_eigh(&h);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let scale = y.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = POLAR_RANK_TOL * scale.max(f64::MIN_POSITIVE);
    let mut left: Vec<CVector> = Vec::with_capacity(n);
    let mut right: Vec<CVector> = Vec::with_capacity(n);
    for &i in order.iter().take(n).filter(|&&i| values[i] > tol) {
        let col = vectors.column(i);
        let u = orthonormalize(col.rows(0, n).into_owned(), &left, tol);
        let v = orthonormalize(col.rows(n, n).into_owned(), &right, tol);
        if let (Some(u), Some(v)) = (u, v) {
            left.push(u);
            right.push(v);
        }
    }
    for basis in [&mut left, &mut right] {
        for e in 0..n {
            if basis.len() == n {
                break;
            }
            let mut unit = CVector::zeros(n);
            unit[e] = C64::new(1.0, 0.0);
            if let Some(q) = orthonormalize(unit, basis, 1e-8) {
                basis.push(q);
            }
        }
    }
    let mut w = CMatrix::zeros(n, n);
    for (u, v) in left.iter().zip(&right) {
        w += u * v.adjoint();
    }
    w
}

/// Gram-Schmidt step against an orthonormal list, applied twice.
fn orthonormalize(mut w: CVector, basis: &[CVector], tol: f64) -> Option<CVector> {
    for _ in 0..2 {
        for q in basis {
            let c = q.dotc(&w);
            w -= q * c;
        }
    }
    let norm = w.norm();
    (norm > tol).then(|| w.unscale(norm))
}

/// `|⟨U A^{1/2}, B^{1/2}⟩_τ|` for one unitary.
pub fn unitary_overlap(pair: &FidelityPair, u: &Element) -> Result<f64> {
    Ok(u.mul(&pair.a.sqrt())?.inner(&pair.b.sqrt())?.norm())
}

/// Sampled lower bound on the fidelity and the value at the polar unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryOracle {
    /// Largest overlap among Haar-random unitaries.
    pub best_sample: f64,
    /// Overlap at the polar unitary.
    pub polar_value: f64,
    /// `|polar_value − F|`.
    pub polar_residual: f64,
    pub fidelity: f64,
}

impl UnitaryOracle {
    /// `F − best_sample`, nonnegative when the closed form dominates.
    pub fn dominance_margin(&self) -> f64 {
        self.fidelity - self.best_sample
    }
}

pub fn fidelity_unitary_oracle(pair: &FidelityPair, num_samples: usize, seed: u64) -> Result<UnitaryOracle> {
    if num_samples == 0 {
        return Err(Error::InvalidAlgebra("at least one unitary sample is required"));
    }
    let f = fidelity(pair);
    let mut rng = random::rng(seed);
    let mut best = 0.0f64;
    for _ in 0..num_samples {
        let blocks = pair
            .algebra()
            .block_dims()
            .iter()
            .map(|&n| random::haar_unitary(n, &mut rng))
            .collect();
        let u = Element::from_blocks(pair.algebra(), blocks)?;
        best = best.max(unitary_overlap(pair, &u)?);
    }
    let polar_value = unitary_overlap(pair, &polar_unitary(pair))?;
    Ok(UnitaryOracle {
        best_sample: best,
        polar_value,
        polar_residual: (polar_value - f).abs(),
        fidelity: f,
    })
}

/// `arccos F`, with `F` clamped to `[0, 1]`.
pub fn bures_angle(pair: &FidelityPair) -> f64 {
    fidelity(pair).clamp(0.0, 1.0).acos()
}

/// `‖A − B‖₁ − ‖A^{1/2} − B^{1/2}‖₂²`.
pub fn powers_stormer_slack(pair: &FidelityPair) -> f64 {
    let diff = pair.a.sub(&pair.b).expect("same algebra").norm1();
    let root_diff = pair.a.sqrt().sub(&pair.b.sqrt()).expect("same algebra").norm2();
    diff - root_diff * root_diff
}

/// `‖A − B‖₁ − 2(1 − F(A|B))`.
pub fn fidelity_bound_slack(pair: &FidelityPair) -> f64 {
    let diff = pair.a.sub(&pair.b).expect("same algebra").norm1();
    diff - 2.0 * (1.0 - fidelity(pair))
}

/// `F(φ(A)|φ(B)) − F(A|B)`.
pub fn monotonicity_slack(pair: &FidelityPair, channel: &Channel) -> Result<f64> {
    let fa = channel.apply_state(&pair.a)?;
    let fb = channel.apply_state(&pair.b)?;
    Ok(fidelity_states(&fa, &fb)? - fidelity(pair))
}

/// `F(λA₁+(1−λ)A₂ | λB₁+(1−λ)B₂) − [λF(A₁|B₁) + (1−λ)F(A₂|B₂)]`.
pub fn joint_concavity_slack(first: &FidelityPair, second: &FidelityPair, lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidMixture(lambda));
    }
    let a = State::new(first.a.mix(&second.a, lambda)?)?;
    let b = State::new(first.b.mix(&second.b, lambda)?)?;
    let mixed = fidelity_states(&a, &b)?;
    Ok(mixed - (lambda * fidelity(first) + (1.0 - lambda) * fidelity(second)))
}
