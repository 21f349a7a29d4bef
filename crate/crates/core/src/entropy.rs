//! Sandwiched quasi-relative entropy, Araki–Masuda norms and relative entropy.
//!
//! `S_p(A|B) = τ[(B^{-1/2q} A B^{-1/2q})^p]` with `1/p + 1/q = 1`. There is
//! no logarithm: `S_p(B|B) = 1` and differences of `S_p` are the "entropy
//! gaps" that bound recovery errors.

// Float math without std; unused when std is linked.
#[allow(unused_imports)]
use num_traits::Float as _;
use crate::algebra::{Element, ReferenceState, SpectralFn, State};
use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::tolerance::STRICTNESS_FLOOR;

/// Exponent `−1/(2q) = −(p−1)/(2p)` used in the sandwich for a given `p`.
pub fn sandwich_exponent(p: f64) -> f64 {
    -(p - 1.0) / (2.0 * p)
}

/// A reference state together with the powers of it used by the entropies.
#[derive(Debug, Clone)]
pub struct EntropyContext {
    reference: ReferenceState,
    sqrt: Element,
    inv_sqrt: Element,
    inv_quarter: Element,
    log: Element,
}

impl EntropyContext {
    pub fn new(reference: &ReferenceState) -> Self {
        let log = reference
            .spectral_apply(SpectralFn::Log, 0.0)
            .expect("reference state has a strictly positive spectrum");
        Self {
            sqrt: reference.power(0.5),
            inv_sqrt: reference.power(-0.5),
            inv_quarter: reference.power(-0.25),
            log,
            reference: reference.clone(),
        }
    }

    pub fn reference(&self) -> &ReferenceState {
        &self.reference
    }

    /// `B^{1/2}`.
    pub fn sqrt(&self) -> &Element {
        &self.sqrt
    }

    /// `B^{-1/2}`.
    pub fn inv_sqrt(&self) -> &Element {
        &self.inv_sqrt
    }

    /// `B^{-1/4}`.
    pub fn inv_quarter(&self) -> &Element {
        &self.inv_quarter
    }

    /// `ln B`.
    pub fn log(&self) -> &Element {
        &self.log
    }

    /// `B^{-1/2q}` for the conjugate exponent of `p`.
    pub fn conjugator(&self, p: f64) -> Element {
        if p == 2.0 {
            self.inv_quarter.clone()
        } else {
            self.reference.power(sandwich_exponent(p))
        }
    }

    /// `S_p(A|B)` for `p > 1`.
    pub fn sandwiched_entropy(&self, a: &Element, p: f64) -> Result<f64> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::InvalidExponent(p));
        }
        let m = self.conjugator(p).sandwich(a)?.hermitian_part();
        m.trace_of(|x| x.max(0.0).powf(p))
    }

    /// `‖X‖_{B,p} = ‖B^{-1/2q} X B^{-1/2q}‖_p` for `p ≥ 1`.
    pub fn am_norm(&self, x: &Element, p: f64) -> Result<f64> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidExponent(p));
        }
        self.conjugator(p).sandwich(x)?.p_norm(p)
    }

    /// `⟨X, Y⟩_B = ⟨X, B^{-1/2} Y B^{-1/2}⟩_τ`.
    pub fn am_inner(&self, x: &Element, y: &Element) -> Result<crate::C64> {
        x.inner(&self.inv_sqrt.sandwich(y)?)
    }

    /// `D(A|B) = τ(A ln A) − τ(A ln B)`, with `0·ln 0 = 0`.
    pub fn kl_divergence(&self, a: &Element) -> Result<f64> {
        let entropy = a
            .hermitian_part()
            .trace_of(|x| if x > 0.0 { x * x.ln() } else { 0.0 })?;
        let cross = a.mul(&self.log)?.trace().re;
        Ok(entropy - cross)
    }
}

/// Image `φ(B)` as a reference state, failing if `φ` is not strict at `B`.
pub fn image_reference(channel: &Channel, b: &ReferenceState) -> Result<ReferenceState> {
    let strictness = channel.is_strict(b)?;
    if !strictness.strict {
        return Err(Error::NotStrict {
            margin: strictness.margin,
        });
    }
    ReferenceState::new(channel.apply(b)?.hermitian_part(), STRICTNESS_FLOOR)
}

/// `S_p(A|B) − S_p(φ(A)|φ(B))`.
pub fn dpi_margin(a: &State, b: &ReferenceState, channel: &Channel, p: f64) -> Result<f64> {
    let image = image_reference(channel, b)?;
    let src = EntropyContext::new(b);
    let tgt = EntropyContext::new(&image);
    let fa = channel.apply(a)?.hermitian_part();
    Ok(src.sandwiched_entropy(a, p)? - tgt.sandwiched_entropy(&fa, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TracialAlgebra;
    use crate::random;
    use alloc::sync::Arc;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn m2() -> Arc<TracialAlgebra> {
        Arc::new(TracialAlgebra::matrix(2).unwrap())
    }

    fn chain_a(alg: &Arc<TracialAlgebra>) -> Element {
        Element::from_real_rows(alg, &[&[1.0, 0.5], &[0.5, 1.0]]).unwrap()
    }

    #[test]
    fn entropy_examples() {
        let alg = m2();
        let ctx = EntropyContext::new(&ReferenceState::maximally_mixed(&alg));
        let a = Element::diagonal(&alg, &[1.5, 0.5]).unwrap();
        assert_abs_diff_eq!(ctx.sandwiched_entropy(&a, 2.0).unwrap(), 1.25, epsilon = 1e-12);
        assert_abs_diff_eq!(ctx.sandwiched_entropy(&chain_a(&alg), 2.0).unwrap(), 1.25, epsilon = 1e-12);
        assert!(ctx.sandwiched_entropy(&a, 1.0).is_err());
        assert!(ctx.am_norm(&a, 0.5).is_err());
    }

    #[test]
    fn entropy_of_reference_is_one() {
        let alg = Arc::new(TracialAlgebra::new(vec![1, 2], vec![0.2, 0.4]).unwrap());
        let b = random::random_reference_state(&alg, 3, 1e-3).unwrap();
        let ctx = EntropyContext::new(&b);
        for p in [1.1, 1.5, 2.0, 3.0, 7.5] {
            assert_abs_diff_eq!(ctx.sandwiched_entropy(&b, p).unwrap(), 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(ctx.am_norm(&b, p).unwrap(), 1.0, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(ctx.am_inner(&b, &b).unwrap().re, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn cached_powers_are_inverse() {
        let alg = Arc::new(TracialAlgebra::matrix(3).unwrap());
        let b = random::random_reference_state(&alg, 8, 1e-6).unwrap();
        let ctx = EntropyContext::new(&b);
        let prod = ctx.sqrt().mul(ctx.inv_sqrt()).unwrap();
        assert!(prod.max_abs_diff(&Element::identity(&alg)).unwrap() < 1e-9);
    }

    #[test]
    fn am_norm_examples() {
        let alg = m2();
        let ctx = EntropyContext::new(&ReferenceState::maximally_mixed(&alg));
        let x = chain_a(&alg).sub(&Element::identity(&alg)).unwrap();
        assert_abs_diff_eq!(ctx.am_norm(&x, 2.0).unwrap(), 0.5, epsilon = 1e-12);
        assert_eq!(ctx.am_norm(&Element::zeros(&alg), 2.0).unwrap(), 0.0);
    }

    #[test]
    fn am_norm_matches_entropy() {
        let alg = Arc::new(TracialAlgebra::matrix(3).unwrap());
        let b = random::random_reference_state(&alg, 1, 1e-4).unwrap();
        let a = random::random_state(&alg, 2);
        let ctx = EntropyContext::new(&b);
        for p in [1.25, 2.0, 4.0] {
            let s = ctx.sandwiched_entropy(&a, p).unwrap();
            let n = ctx.am_norm(&a, p).unwrap();
            assert_abs_diff_eq!(s, n.powf(p), epsilon = 1e-10 * s.max(1.0));
        }
    }

    #[test]
    fn am_inner_with_trivial_reference() {
        let alg = Arc::new(TracialAlgebra::new(vec![2, 1], vec![0.25, 0.5]).unwrap());
        let ctx = EntropyContext::new(&ReferenceState::maximally_mixed(&alg));
        let x = random::random_element(&alg, 4);
        let y = random::random_element(&alg, 5);
        let lhs = ctx.am_inner(&x, &y).unwrap();
        let rhs = x.inner(&y).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn am_inner_is_positive_definite() {
        // Gram matrix of ⟨·,·⟩_B on the orthonormal basis must be positive definite.
        let alg = Arc::new(TracialAlgebra::new(vec![2, 1], vec![0.25, 0.5]).unwrap());
        let b = random::random_reference_state(&alg, 6, 1e-3).unwrap();
        let ctx = EntropyContext::new(&b);
        let d = alg.l2_dim();
        let basis: vec::Vec<Element> = (0..d).map(|k| crate::superop::basis_element(&alg, k)).collect();
        let gram = crate::CMatrix::from_fn(d, d, |i, j| ctx.am_inner(&basis[j], &basis[i]).unwrap());
        assert!(crate::algebra::min_hermitian_eigenvalue(&gram) > 0.0);
        let x = random::random_element(&alg, 7);
        assert!(ctx.am_inner(&x, &x).unwrap().re > 0.0);
        assert_abs_diff_eq!(
            ctx.am_inner(&x, &x).unwrap().re,
            ctx.am_norm(&x, 2.0).unwrap().powi(2),
            epsilon = 1e-10
        );
    }

    #[test]
    fn kl_examples() {
        let alg = m2();
        let one = ReferenceState::maximally_mixed(&alg);
        let ctx = EntropyContext::new(&one);
        assert_abs_diff_eq!(ctx.kl_divergence(&one).unwrap(), 0.0, epsilon = 1e-14);
        let a = Element::diagonal(&alg, &[1.5, 0.5]).unwrap();
        let expected = 0.5 * (1.5 * 1.5f64.ln() + 0.5 * 0.5f64.ln());
        assert_abs_diff_eq!(ctx.kl_divergence(&a).unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(expected, 0.13081, epsilon = 1e-5);
    }

    #[test]
    fn kl_kernel_convention_matches_perturbed_limit() {
        let alg = m2();
        let ctx = EntropyContext::new(&ReferenceState::maximally_mixed(&alg));
        let a = Element::diagonal(&alg, &[2.0, 0.0]).unwrap();
        let eps = 1e-8;
        let perturbed = Element::diagonal(&alg, &[2.0 - eps, eps]).unwrap();
        let exact = ctx.kl_divergence(&a).unwrap();
        assert!(exact.is_finite());
        assert_abs_diff_eq!(exact, 2.0f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(exact, ctx.kl_divergence(&perturbed).unwrap(), epsilon = 1e-6);
    }

    #[test]
    fn kl_with_nontrivial_reference() {
        let alg = m2();
        let b = ReferenceState::new(Element::diagonal(&alg, &[0.5, 1.5]).unwrap(), 1e-6).unwrap();
        let ctx = EntropyContext::new(&b);
        let a = Element::diagonal(&alg, &[1.5, 0.5]).unwrap();
        let expected = 0.5 * (1.5 * (1.5f64 / 0.5).ln() + 0.5 * (0.5f64 / 1.5).ln());
        assert_abs_diff_eq!(ctx.kl_divergence(&a).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn dpi_examples() {
        let alg = m2();
        let one = ReferenceState::maximally_mixed(&alg);
        let a = State::new(chain_a(&alg)).unwrap();
        let pinch = Channel::pinching(&alg);
        assert_abs_diff_eq!(dpi_margin(&a, &one, &pinch, 2.0).unwrap(), 0.25, epsilon = 1e-12);
        let tr = Channel::trace(&alg);
        let b = random::random_reference_state(&alg, 2, 1e-6).unwrap();
        let s2 = EntropyContext::new(&b).sandwiched_entropy(&a, 2.0).unwrap();
        assert_abs_diff_eq!(dpi_margin(&a, &b, &tr, 2.0).unwrap(), s2 - 1.0, epsilon = 1e-10);
        let u = random::random_unitary(&alg, 9);
        let uc = Channel::unitary(&alg, &u).unwrap();
        assert_abs_diff_eq!(dpi_margin(&a, &b, &uc, 2.0).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn dpi_requires_strictness() {
        let alg = m2();
        let pure = State::new(Element::diagonal(&alg, &[2.0, 0.0]).unwrap()).unwrap();
        let collapse = Channel::replacement(&alg, &alg, &pure).unwrap();
        let a = random::random_state(&alg, 1);
        let b = ReferenceState::maximally_mixed(&alg);
        assert!(matches!(dpi_margin(&a, &b, &collapse, 2.0), Err(Error::NotStrict { .. })));
    }

    #[test]
    fn kernel_eigenvalue_against_perturbation() {
        // S_2 is continuous in A; compare a rank-one state with its ε-mixture.
        let alg = m2();
        let b = ReferenceState::new(Element::diagonal(&alg, &[0.4, 1.6]).unwrap(), 1e-6).unwrap();
        let ctx = EntropyContext::new(&b);
        let a = Element::from_real_rows(&alg, &[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let eps = 1e-8;
        let mixed = a.mix(&Element::identity(&alg), 1.0 - eps).unwrap();
        let lhs = ctx.sandwiched_entropy(&a, 2.0).unwrap();
        let rhs = ctx.sandwiched_entropy(&mixed, 2.0).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-6);
    }
}
