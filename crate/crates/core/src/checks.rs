//! Operator inequalities between multiplication superoperators.
//!
//! With `V = R_{B^{1/2}} φ* R_{φ(B)^{-1/2}}`, `Δ = L_B R_{B^{-1}}` and
//! `Δ₀ = L_{φ(B)} R_{φ(B)^{-1}}`, the margins below are smallest eigenvalues
//! (or `1 − ‖V‖`) of the differences that must be positive semidefinite.

// Float math without std; unused when std is linked.
#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec::Vec;

use crate::algebra::{Element, ReferenceState, TracialAlgebra};
use crate::channel::Channel;
use crate::entropy::{image_reference, EntropyContext};
use crate::error::{Error, Result};
use crate::superop::Superoperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplicationKind {
    Left,
    Right,
}

/// `L_X` or `R_X` together with the element it multiplies by.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicationOperator {
    pub kind: MultiplicationKind,
    pub element: Element,
    pub op: Superoperator,
}

pub fn build_mult(algebra: &TracialAlgebra, x: &Element, kind: MultiplicationKind) -> Result<MultiplicationOperator> {
    if x.algebra() != algebra {
        return Err(Error::AlgebraMismatch);
    }
    let op = match kind {
        MultiplicationKind::Left => Superoperator::left_mul(x),
        MultiplicationKind::Right => Superoperator::right_mul(x),
    };
    Ok(MultiplicationOperator {
        kind,
        element: x.clone(),
        op,
    })
}

fn lr(left: &Element, right: &Element) -> Superoperator {
    Superoperator::left_mul(left)
        .compose(&Superoperator::right_mul(right))
        .expect("same algebra")
}

/// The superoperators shared by the contraction inequalities for one `(φ, B)`.
#[derive(Debug, Clone)]
pub struct ContractionOperators {
    channel: Channel,
    source: EntropyContext,
    target: EntropyContext,
    v: Superoperator,
}

impl ContractionOperators {
    pub fn new(channel: &Channel, b: &ReferenceState) -> Result<Self> {
        let image = image_reference(channel, b)?;
        let source = EntropyContext::new(b);
        let target = EntropyContext::new(&image);
        let v = Superoperator::right_mul(source.sqrt())
            .compose(&channel.adjoint().compose(&Superoperator::right_mul(target.inv_sqrt()))?)?;
        Ok(Self {
            channel: channel.clone(),
            source,
            target,
            v,
        })
    }

    /// `V : Y ↦ φ*(Y φ(B)^{-1/2}) B^{1/2}`.
    pub fn v(&self) -> &Superoperator {
        &self.v
    }

    /// `Δ = L_B R_{B^{-1}}` on the source.
    pub fn delta(&self) -> Superoperator {
        let b = self.source.reference().element();
        lr(b, &self.source.inv_sqrt().mul(self.source.inv_sqrt()).expect("same algebra"))
    }

    /// `Δ₀ = L_{φ(B)} R_{φ(B)^{-1}}` on the target.
    pub fn delta0(&self) -> Superoperator {
        let b = self.target.reference().element();
        lr(b, &self.target.inv_sqrt().mul(self.target.inv_sqrt()).expect("same algebra"))
    }

    /// `1 − ‖V‖`.
    pub fn v_contraction_margin(&self) -> f64 {
        1.0 - self.v.operator_norm()
    }

    /// `λ_min(Δ₀ − V* Δ V)`.
    pub fn modular_sandwich_margin(&self) -> Result<f64> {
        let sandwich = self.v.adjoint().compose(&self.delta().compose(&self.v)?)?;
        Ok(self.delta0().sub(&sandwich)?.min_eigenvalue())
    }

    /// `λ_min(Δ₀^{1/2} − V* Δ^{1/2} V)`, built from `L_{B^{1/2}} R_{B^{-1/2}}` directly.
    pub fn concavity_margin(&self) -> Result<f64> {
        let delta_half = lr(self.source.sqrt(), self.source.inv_sqrt());
        let delta0_half = lr(self.target.sqrt(), self.target.inv_sqrt());
        let sandwich = self.v.adjoint().compose(&delta_half.compose(&self.v)?)?;
        Ok(delta0_half.sub(&sandwich)?.min_eigenvalue())
    }

    /// `λ_min(L_{φ(B)^{1/2}} R_{φ(B)^{1/2}} − Φ L_{B^{1/2}} R_{B^{1/2}} Φ*)`.
    pub fn sandwich_domination_margin(&self) -> Result<f64> {
        let phi = self.channel.l2_superoperator();
        let middle = Superoperator::sandwich(self.source.sqrt());
        let rhs = phi.compose(&middle.compose(&phi.adjoint())?)?;
        Ok(Superoperator::sandwich(self.target.sqrt()).sub(&rhs)?.min_eigenvalue())
    }

    /// `‖X‖_{B,2} − ‖φ(X)‖_{φ(B),2}`.
    pub fn am_contraction_margin(&self, x: &Element) -> Result<f64> {
        let fx = self.channel.apply(x)?;
        Ok(self.source.am_norm(x, 2.0)? - self.target.am_norm(&fx, 2.0)?)
    }

    /// `|‖V*(X)‖₂² − τ'(φ(X B^{1/2}) φ(B)^{-1} φ(B^{1/2} X*))|`.
    pub fn adjoint_norm_residual(&self, x: &Element) -> Result<f64> {
        let lhs = self.v.adjoint().apply(x)?.norm2().powi(2);
        let root = self.source.sqrt();
        let left = self.channel.apply(&x.mul(root)?)?;
        let right = self.channel.apply(&root.mul(&x.adjoint())?)?;
        let inv = self.target.inv_sqrt().mul(self.target.inv_sqrt())?;
        let rhs = left.mul(&inv)?.mul(&right)?.trace();
        Ok((rhs - crate::C64::new(lhs, 0.0)).norm())
    }

    pub fn source(&self) -> &EntropyContext {
        &self.source
    }

    pub fn target(&self) -> &EntropyContext {
        &self.target
    }
}

pub fn v_contraction_margin(channel: &Channel, b: &ReferenceState) -> Result<f64> {
    Ok(ContractionOperators::new(channel, b)?.v_contraction_margin())
}

pub fn modular_sandwich_psd_margin(channel: &Channel, b: &ReferenceState) -> Result<f64> {
    ContractionOperators::new(channel, b)?.modular_sandwich_margin()
}

pub fn sandwich_domination_psd_margin(channel: &Channel, b: &ReferenceState) -> Result<f64> {
    ContractionOperators::new(channel, b)?.sandwich_domination_margin()
}

pub fn concavity_psd_margin(channel: &Channel, b: &ReferenceState) -> Result<f64> {
    ContractionOperators::new(channel, b)?.concavity_margin()
}

/// `λ_min(L_{B^{-1/2}} R_{B^{-1/2}} − 2(L_B + R_B)^{-1})`.
pub fn amgm_psd_margin(b: &ReferenceState) -> f64 {
    let inv_sqrt = b.power(-0.5);
    let lhs = Superoperator::sandwich(&inv_sqrt);
    let sum = Superoperator::left_mul(b)
        .add(&Superoperator::right_mul(b))
        .expect("same algebra");
    let rhs = sum.hermitian_apply(|x| 2.0 / x);
    lhs.sub(&rhs).expect("same algebra").min_eigenvalue()
}

/// `‖X‖²_{B,2} − ‖X‖₁²`.
pub fn trace_vs_am_margin(x: &Element, b: &ReferenceState) -> Result<f64> {
    let am = EntropyContext::new(b).am_norm(x, 2.0)?;
    let l1 = x.norm1();
    Ok(am * am - l1 * l1)
}

/// Largest distance `|μ − λ_r/λ_s|` between the sorted spectrum of `Δ` and the eigenvalue ratios of `B` within each block.
pub fn modular_spectrum_residual(b: &ReferenceState) -> Result<f64> {
    let inv = b.power(-1.0);
    let mut computed = lr(b, &inv).hermitian_eigenvalues();
    let mut expected: Vec<f64> = Vec::new();
    for block in b.eigenvalues()? {
        for &x in &block {
            for &y in &block {
                expected.push(x / y);
            }
        }
    }
    expected.sort_by(f64::total_cmp);
    computed.sort_by(f64::total_cmp);
    Ok(computed
        .iter()
        .zip(&expected)
        .map(|(a, e)| (a - e).abs())
        .fold(0.0, f64::max))
}
