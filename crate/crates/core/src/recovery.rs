//! The Petz recovery map and the recoverability chain.
//!
//! For a channel `φ` strict at `B`,
//! `R(Y) = B^{1/2} φ*(φ(B)^{-1/2} Y φ(B)^{-1/2}) B^{1/2}`.
//! `R` is a channel with `R(φ(B)) = B`, and it is the adjoint of `φ` between
//! the Araki–Masuda Hilbert spaces of `B` and `φ(B)`. For every state `A`,
//!
//! `4(1−F)² ≤ ‖A − Rφ(A)‖₁² ≤ ‖A − Rφ(A)‖²_{B,2} ≤ S₂(A|B) − S₂(φ(A)|φ(B))`.

// Float math without std; unused when std is linked.
#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec::Vec;

use crate::algebra::{Element, ReferenceState, State};
use crate::channel::Channel;
use crate::entropy::{image_reference, EntropyContext};
use crate::error::{Error, Result};
use crate::fidelity::fidelity_states;
use crate::superop::{basis_element, CVector, Superoperator};
use crate::tolerance::CONTRACTION_TOL;

/// `φ(B)`-sandwich, `φ*` and `B`-sandwich composed into the Petz superoperator.
fn petz_superoperator(channel: &Channel, b: &ReferenceState, image: &ReferenceState) -> Result<Superoperator> {
    let inner = Superoperator::sandwich(&image.power(-0.5));
    let outer = Superoperator::sandwich(&b.power(0.5));
    outer.compose(&channel.adjoint().compose(&inner)?)
}

/// The Petz map of `φ` at `B`, as a channel from the target back to the source.
pub fn petz_map(channel: &Channel, b: &ReferenceState) -> Result<Channel> {
    let image = image_reference(channel, b)?;
    Channel::from_superoperator(&petz_superoperator(channel, b, &image)?)
}

/// A channel, a reference state and everything derived from them.
#[derive(Debug, Clone)]
pub struct RecoverySetup {
    channel: Channel,
    reference: ReferenceState,
    image: ReferenceState,
    petz: Channel,
    strictness_margin: f64,
    fixed_point_residual: f64,
    source_ctx: EntropyContext,
    target_ctx: EntropyContext,
}

impl RecoverySetup {
    pub fn new(channel: &Channel, reference: &ReferenceState) -> Result<Self> {
        let image = image_reference(channel, reference)?;
        let petz = Channel::from_superoperator(&petz_superoperator(channel, reference, &image)?)?;
        let fixed_point_residual = petz.apply(&image)?.sub(reference)?.norm2();
        Ok(Self {
            channel: channel.clone(),
            strictness_margin: image.min_eigenvalue(),
            source_ctx: EntropyContext::new(reference),
            target_ctx: EntropyContext::new(&image),
            reference: reference.clone(),
            image,
            petz,
            fixed_point_residual,
        })
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    pub fn reference(&self) -> &ReferenceState {
        &self.reference
    }

    /// `φ(B)`.
    pub fn image(&self) -> &ReferenceState {
        &self.image
    }

    pub fn petz(&self) -> &Channel {
        &self.petz
    }

    /// Smallest eigenvalue of `φ(B)`.
    pub fn strictness_margin(&self) -> f64 {
        self.strictness_margin
    }

    /// `‖R(φ(B)) − B‖₂`.
    pub fn fixed_point_residual(&self) -> f64 {
        self.fixed_point_residual
    }

    pub fn source_context(&self) -> &EntropyContext {
        &self.source_ctx
    }

    pub fn target_context(&self) -> &EntropyContext {
        &self.target_ctx
    }

    /// `R(φ(A))`.
    pub fn recover(&self, a: &Element) -> Result<Element> {
        self.petz.apply(&self.channel.apply(a)?)
    }
}

/// `max_{k,l} |⟨φ(e_k), f_l⟩_{φ(B)} − ⟨e_k, R(f_l)⟩_B|` over orthonormal bases.
pub fn am_adjoint_residual(setup: &RecoverySetup) -> Result<f64> {
    let src = setup.channel.source();
    let tgt = setup.channel.target();
    let images: Vec<Element> = (0..src.l2_dim())
        .map(|k| setup.channel.apply(&basis_element(src, k)))
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for l in 0..tgt.l2_dim() {
        let f = basis_element(tgt, l);
        let recovered = setup.petz.apply(&f)?;
        for (k, image) in images.iter().enumerate() {
            let lhs = setup.target_ctx.am_inner(image, &f)?;
            let rhs = setup.source_ctx.am_inner(&basis_element(src, k), &recovered)?;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// The quantities of the recoverability chain for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainReport {
    /// `S₂(A|B)`.
    pub s2_src: f64,
    /// `S₂(φ(A)|φ(B))`.
    pub s2_tgt: f64,
    pub entropy_gap: f64,
    /// `‖A − R(φ(A))‖²_{B,2}`.
    pub am_residual_sq: f64,
    /// `‖A − R(φ(A))‖₁²`.
    pub l1_residual_sq: f64,
    /// `F(A|R(φ(A)))`.
    pub fidelity: f64,
    /// `4(1 − F)²`.
    pub fidelity_term: f64,
}

impl ChainReport {
    /// `‖·‖₁² − 4(1−F)²`.
    pub fn fidelity_margin(&self) -> f64 {
        self.l1_residual_sq - self.fidelity_term
    }

    /// `gap − ‖·‖₁²`.
    pub fn l1_margin(&self) -> f64 {
        self.entropy_gap - self.l1_residual_sq
    }

    /// `gap − ‖·‖²_{B,2}`.
    pub fn am_margin(&self) -> f64 {
        self.entropy_gap - self.am_residual_sq
    }

    /// `‖·‖²_{B,2} − ‖·‖₁²`.
    pub fn trace_vs_am_margin(&self) -> f64 {
        self.am_residual_sq - self.l1_residual_sq
    }

    /// True when every link holds with slack at least `−tol`.
    pub fn check(&self, tol: f64) -> bool {
        [
            self.fidelity_margin(),
            self.l1_margin(),
            self.am_margin(),
            self.trace_vs_am_margin(),
        ]
        .iter()
        .all(|&m| m >= -tol)
    }
}

pub fn chain_report(a: &State, setup: &RecoverySetup) -> Result<ChainReport> {
    let fa = setup.channel.apply(a)?.hermitian_part();
    let recovered = setup.petz.apply(&fa)?.hermitian_part();
    let residual = a.sub(&recovered)?;
    let s2_src = setup.source_ctx.sandwiched_entropy(a, 2.0)?;
    let s2_tgt = setup.target_ctx.sandwiched_entropy(&fa, 2.0)?;
    let am = setup.source_ctx.am_norm(&residual, 2.0)?;
    let l1 = residual.norm1();
    let fidelity = fidelity_states(a, &State::new(recovered)?)?;
    Ok(ChainReport {
        s2_src,
        s2_tgt,
        entropy_gap: s2_src - s2_tgt,
        am_residual_sq: am * am,
        l1_residual_sq: l1 * l1,
        fidelity,
        fidelity_term: 4.0 * (1.0 - fidelity).powi(2),
    })
}

/// `(‖x‖² − ‖Tx‖²) − ‖x − T*Tx‖²` for a contraction `T`.
pub fn contraction_defect_check(t: &Superoperator, x: &CVector) -> Result<f64> {
    let norm = t.operator_norm();
    if norm > 1.0 + CONTRACTION_TOL {
        return Err(Error::NotContraction { norm });
    }
    if x.len() != t.matrix().ncols() {
        return Err(Error::DimensionMismatch {
            expected: t.matrix().ncols(),
            actual: x.len(),
        });
    }
    let tx = t.matrix() * x;
    let back = t.matrix().adjoint() * &tx;
    Ok((x.norm_squared() - tx.norm_squared()) - (x - back).norm_squared())
}

/// `[D(A|B) − D(φ(A)|φ(B))] − [−2 ln F(A|R(φ(A)))]`; reported, never asserted.
pub fn swb_gap(a: &State, setup: &RecoverySetup) -> Result<f64> {
    let fa = setup.channel.apply(a)?.hermitian_part();
    let recovered = State::new(setup.petz.apply(&fa)?.hermitian_part())?;
    let d_gap = setup.source_ctx.kl_divergence(a)? - setup.target_ctx.kl_divergence(&fa)?;
    let f = fidelity_states(a, &recovered)?;
    Ok(d_gap + 2.0 * f.ln())
}

/// Recovery residual below which the sufficiency hypothesis is taken to hold.
pub const SUFFICIENCY_RECOVERY_TOL: f64 = 1e-8;
/// Largest entropy gap accepted once recovery is exact.
pub const SUFFICIENCY_GAP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SufficiencyOutcome {
    /// `A` is not recovered, so nothing is asserted.
    Vacuous,
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SufficiencyReport {
    /// `‖R(φ(A)) − A‖₂`.
    pub recovery_residual: f64,
    /// `D(A|B) − D(φ(A)|φ(B))`.
    pub kl_gap: f64,
    /// `S₂(A|B) − S₂(φ(A)|φ(B))`.
    pub s2_gap: f64,
    pub outcome: SufficiencyOutcome,
}

/// If `R(φ(A)) = A`, both entropy gaps must vanish.
pub fn petz_sufficiency_check(a: &State, setup: &RecoverySetup) -> Result<SufficiencyReport> {
    let fa = setup.channel.apply(a)?.hermitian_part();
    let recovery_residual = setup.petz.apply(&fa)?.sub(a)?.norm2();
    let kl_gap = setup.source_ctx.kl_divergence(a)? - setup.target_ctx.kl_divergence(&fa)?;
    let s2_gap = setup.source_ctx.sandwiched_entropy(a, 2.0)? - setup.target_ctx.sandwiched_entropy(&fa, 2.0)?;
    let outcome = if recovery_residual > SUFFICIENCY_RECOVERY_TOL {
        SufficiencyOutcome::Vacuous
    } else if kl_gap.abs() <= SUFFICIENCY_GAP_TOL && s2_gap.abs() <= SUFFICIENCY_GAP_TOL {
        SufficiencyOutcome::Pass
    } else {
        SufficiencyOutcome::Fail
    };
    Ok(SufficiencyReport {
        recovery_residual,
        kl_gap,
        s2_gap,
        outcome,
    })
}
