//! One randomized instance: generation, evaluation and replay.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use petz_core::checks::{amgm_psd_margin, modular_spectrum_residual, trace_vs_am_margin, ContractionOperators};
use petz_core::entropy::dpi_margin;
use petz_core::fidelity::{
    bures_angle, fidelity_bound_slack, fidelity_unitary_oracle, joint_concavity_slack, monotonicity_slack,
    powers_stormer_slack, FidelityPair,
};
use petz_core::random;
use petz_core::recovery::{
    am_adjoint_residual, chain_report, petz_sufficiency_check, swb_gap, RecoverySetup, SufficiencyOutcome,
};
use petz_core::{Channel, Element, ReferenceState, State, TracialAlgebra};
use serde::{Deserialize, Serialize};

use crate::check::Check;
use crate::data::{AlgebraSpec, ChannelData, ElementData};
use crate::error::HarnessError;
use crate::family::Family;
use crate::seed::mix;

/// Attempts at drawing a channel/reference pair that is strict.
pub const MAX_RESAMPLES: usize = 32;

/// Mixing weights for the joint-concavity sweep.
pub const LAMBDA_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Everything needed to recompute a trial, with all random draws materialized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialInstance {
    pub trial_id: u64,
    pub seed: u64,
    pub family: Family,
    /// Grid entry the trial was drawn for.
    pub algebra: AlgebraSpec,
    pub channel: ChannelData,
    pub floor: f64,
    /// `B`.
    pub reference: ElementData,
    /// `A`.
    pub state: ElementData,
    /// Second and third states for fidelity checks.
    pub partner: ElementData,
    pub third: ElementData,
    /// Second pair for joint concavity.
    pub mix_a: ElementData,
    pub mix_b: ElementData,
    /// Arbitrary element for norm bounds.
    pub probe: ElementData,
    /// State of the target for adjoint positivity.
    pub positive: ElementData,
    pub superop: bool,
    pub oracle_seed: u64,
    pub oracle_samples: usize,
    pub resamples: usize,
}

/// Parameters of [`TrialInstance::generate`].
#[derive(Debug, Clone, Copy)]
pub struct TrialSpec {
    pub trial_id: u64,
    pub seed: u64,
    pub family: Family,
    pub superop: bool,
    pub oracle_samples: usize,
    pub floor: f64,
}

impl TrialInstance {
    /// Pinching trials with `trial_id ≡ 0 (mod 4)` use diagonal `A` and `B`,
    /// which the Petz map recovers exactly.
    pub fn is_sufficiency_instance(family: Family, trial_id: u64) -> bool {
        family == Family::Pinching && trial_id.is_multiple_of(4)
    }

    pub fn generate(algebra: &Arc<TracialAlgebra>, spec: TrialSpec) -> Result<Self, HarnessError> {
        let diagonal = Self::is_sufficiency_instance(spec.family, spec.trial_id);
        let rank = if spec.trial_id % 4 == 1 { 1 } else { usize::MAX };
        for attempt in 0..MAX_RESAMPLES {
            let s = mix(spec.seed, attempt as u64);
            let channel = match spec.family.build(algebra, mix(s, 1)) {
                Ok(c) => c,
                Err(petz_core::Error::SingularKrausSum) => continue,
                Err(e) => return Err(e.into()),
            };
            let src = channel.source().clone();
            let mut b = random::random_reference_state(&src, mix(s, 2), spec.floor)?;
            let mut a = random::random_state_with_rank(&src, rank, mix(s, 3));
            if diagonal {
                b = ReferenceState::new(b.diagonal_part(), spec.floor)?;
                a = State::new(a.diagonal_part())?;
            }
            if !channel.is_strict(&b)?.strict {
                continue;
            }
            return Ok(Self {
                trial_id: spec.trial_id,
                seed: spec.seed,
                family: spec.family,
                algebra: AlgebraSpec::of(algebra),
                channel: ChannelData::of(&channel),
                floor: spec.floor,
                reference: ElementData::of(&b),
                state: ElementData::of(&a),
                partner: ElementData::of(&random::random_state_with_rank(&src, rank, mix(s, 4))),
                third: ElementData::of(&random::random_state(&src, mix(s, 5))),
                mix_a: ElementData::of(&random::random_state(&src, mix(s, 6))),
                mix_b: ElementData::of(&random::random_state(&src, mix(s, 7))),
                probe: ElementData::of(&random::random_element(&src, mix(s, 8))),
                positive: ElementData::of(&random::random_state(channel.target(), mix(s, 9))),
                superop: spec.superop,
                oracle_seed: mix(s, 10),
                oracle_samples: spec.oracle_samples,
                resamples: attempt,
            });
        }
        Err(HarnessError::Resample(MAX_RESAMPLES))
    }
}

/// Quantities of the recoverability chain, as recorded in a report.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ChainValues {
    pub s2_src: f64,
    pub s2_tgt: f64,
    pub entropy_gap: f64,
    pub am_residual_sq: f64,
    pub l1_residual_sq: f64,
    pub fidelity: f64,
    pub fidelity_term: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sufficiency {
    Vacuous,
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial_id: u64,
    pub seed: u64,
    pub algebra: AlgebraSpec,
    pub family: Family,
    pub superop: bool,
    pub margins: BTreeMap<Check, f64>,
    pub failed: Vec<Check>,
    pub passed: bool,
    /// Construction or numerical error that aborted the trial.
    pub error: Option<String>,
    pub chain: Option<ChainValues>,
    /// Reported only; never part of `passed`.
    pub swb_gap: Option<f64>,
    pub sufficiency: Option<Sufficiency>,
    pub recovery_residual: Option<f64>,
}

/// Slack floors and skipped checks applied when judging margins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Judging {
    pub tolerances: BTreeMap<Check, f64>,
    pub skip: BTreeSet<Check>,
}

impl Default for Judging {
    fn default() -> Self {
        Self {
            tolerances: Check::ALL.iter().map(|&c| (c, c.default_tolerance())).collect(),
            skip: BTreeSet::new(),
        }
    }
}

impl Judging {
    pub fn tolerance(&self, check: Check) -> f64 {
        self.tolerances
            .get(&check)
            .copied()
            .unwrap_or_else(|| check.default_tolerance())
    }
}

struct Measurements {
    margins: BTreeMap<Check, f64>,
    chain: ChainValues,
    swb_gap: f64,
    sufficiency: Sufficiency,
    recovery_residual: f64,
}

fn measure(instance: &TrialInstance, judging: &Judging) -> Result<Measurements, HarnessError> {
    let wants = |c: Check| !judging.skip.contains(&c);
    let channel: Channel = instance.channel.build()?;
    let src = channel.source().clone();
    let b = ReferenceState::new(instance.reference.build(&src)?, instance.floor)?;
    let a = State::new(instance.state.build(&src)?)?;
    let setup = RecoverySetup::new(&channel, &b)?;
    let mut m = BTreeMap::new();

    let report = chain_report(&a, &setup)?;
    let chain = ChainValues {
        s2_src: report.s2_src,
        s2_tgt: report.s2_tgt,
        entropy_gap: report.entropy_gap,
        am_residual_sq: report.am_residual_sq,
        l1_residual_sq: report.l1_residual_sq,
        fidelity: report.fidelity,
        fidelity_term: report.fidelity_term,
    };
    m.insert(Check::ChainFidelity, report.fidelity_margin());
    m.insert(Check::ChainL1, report.l1_margin());
    m.insert(Check::ChainAm, report.am_margin());
    m.insert(Check::ChainTraceVsAm, report.trace_vs_am_margin());
    if wants(Check::Dpi) {
        m.insert(Check::Dpi, dpi_margin(&a, &b, &channel, 2.0)?);
    }
    m.insert(Check::FixedPoint, -setup.fixed_point_residual());
    let diag = setup.petz().diagnostics();
    m.insert(Check::PetzChoi, diag.choi_min_eigenvalue);
    m.insert(Check::PetzTracePreservation, -diag.trace_residual);
    if wants(Check::AmAdjoint) {
        m.insert(Check::AmAdjoint, -am_adjoint_residual(&setup)?);
    }

    let probe = instance.probe.build(&src)?;
    if wants(Check::L2Bound) {
        let bound = channel.apply(&Element::identity(&src))?.operator_norm();
        let image = channel.apply(&probe)?.norm2();
        m.insert(Check::L2Bound, bound * probe.norm2().powi(2) - image * image);
    }
    if wants(Check::AdjointPositivity) {
        let p = instance.positive.build(channel.target())?;
        m.insert(
            Check::AdjointPositivity,
            channel.adjoint_apply(&p)?.hermitian_part().min_eigenvalue()?,
        );
    }
    if wants(Check::TraceVsAm) {
        m.insert(Check::TraceVsAm, trace_vs_am_margin(&probe, &b)?);
    }

    let partner = State::new(instance.partner.build(&src)?)?;
    let third = State::new(instance.third.build(&src)?)?;
    let pair = FidelityPair::new(a.clone(), partner.clone())?;
    m.insert(Check::PowersStormer, powers_stormer_slack(&pair));
    m.insert(Check::FidelityBound, fidelity_bound_slack(&pair));
    if wants(Check::Monotonicity) {
        m.insert(Check::Monotonicity, monotonicity_slack(&pair, &channel)?);
    }
    if wants(Check::BuresTriangle) {
        let ab = bures_angle(&pair);
        let bc = bures_angle(&FidelityPair::new(partner.clone(), third.clone())?);
        let ac = bures_angle(&FidelityPair::new(a.clone(), third)?);
        m.insert(Check::BuresTriangle, ab + bc - ac);
    }
    if wants(Check::JointConcavity) {
        let second = FidelityPair::new(
            State::new(instance.mix_a.build(&src)?)?,
            State::new(instance.mix_b.build(&src)?)?,
        )?;
        let mut worst = f64::INFINITY;
        for lambda in LAMBDA_GRID {
            worst = worst.min(joint_concavity_slack(&pair, &second, lambda)?);
        }
        m.insert(Check::JointConcavity, worst);
    }

    let suff = petz_sufficiency_check(&a, &setup)?;
    let sufficiency = match suff.outcome {
        SufficiencyOutcome::Vacuous => Sufficiency::Vacuous,
        SufficiencyOutcome::Pass => Sufficiency::Pass,
        SufficiencyOutcome::Fail => Sufficiency::Fail,
    };
    if sufficiency != Sufficiency::Vacuous {
        m.insert(Check::Sufficiency, -suff.kl_gap.abs().max(suff.s2_gap.abs()));
    }
    if instance.family == Family::Unitary {
        let worst = [
            chain.entropy_gap.abs(),
            chain.am_residual_sq,
            chain.l1_residual_sq,
            chain.fidelity_term,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        m.insert(Check::UnitaryEquality, -worst);
    }
    let swb = swb_gap(&a, &setup)?;

    if instance.superop {
        let ops = ContractionOperators::new(&channel, &b)?;
        m.insert(Check::VContraction, ops.v_contraction_margin());
        m.insert(Check::ModularSandwich, ops.modular_sandwich_margin()?);
        m.insert(Check::SandwichDomination, ops.sandwich_domination_margin()?);
        m.insert(Check::Concavity, ops.concavity_margin()?);
        m.insert(Check::Amgm, amgm_psd_margin(&b));
        m.insert(Check::AmContraction, ops.am_contraction_margin(&probe)?);
        m.insert(Check::AdjointNormIdentity, -ops.adjoint_norm_residual(&probe)?);
        m.insert(Check::ModularSpectrum, -modular_spectrum_residual(&b)?);
        if wants(Check::OracleDominance) || wants(Check::PolarAttainment) {
            let oracle = fidelity_unitary_oracle(&pair, instance.oracle_samples, instance.oracle_seed)?;
            m.insert(Check::OracleDominance, oracle.dominance_margin());
            m.insert(Check::PolarAttainment, -oracle.polar_residual);
        }
    }

    m.retain(|c, _| wants(*c));
    Ok(Measurements {
        margins: m,
        chain,
        swb_gap: swb,
        sufficiency,
        recovery_residual: suff.recovery_residual,
    })
}

/// Recomputes every margin of an instance and judges it.
pub fn evaluate(instance: &TrialInstance, judging: &Judging) -> TrialReport {
    let mut report = TrialReport {
        trial_id: instance.trial_id,
        seed: instance.seed,
        algebra: instance.algebra.clone(),
        family: instance.family,
        superop: instance.superop,
        margins: BTreeMap::new(),
        failed: Vec::new(),
        passed: false,
        error: None,
        chain: None,
        swb_gap: None,
        sufficiency: None,
        recovery_residual: None,
    };
    match measure(instance, judging) {
        Ok(m) => {
            report.failed = m
                .margins
                .iter()
                .filter(|(c, v)| !(**v >= -judging.tolerance(**c)))
                .map(|(c, _)| *c)
                .collect();
            report.passed = report.failed.is_empty();
            report.margins = m.margins;
            report.chain = Some(m.chain);
            report.swb_gap = Some(m.swb_gap);
            report.sufficiency = Some(m.sufficiency);
            report.recovery_residual = Some(m.recovery_residual);
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

/// Self-contained replay input: the instance, how it was judged and what it produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayFile {
    pub schema_version: u32,
    pub judging: Judging,
    pub instance: TrialInstance,
    pub report: TrialReport,
}

/// Outcome of a replay: the fresh report and whether it matches the recorded one.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub report: TrialReport,
    pub identical: bool,
}

/// Re-evaluates a recorded instance. Margins are compared bit for bit.
///
/// The channel is rebuilt first so that an edited Kraus list surfaces as a
/// construction error rather than a failed trial.
pub fn replay(file: &ReplayFile) -> Result<Replay, HarnessError> {
    file.instance.channel.build()?;
    let report = evaluate(&file.instance, &file.judging);
    let identical = report.margins.len() == file.report.margins.len()
        && report
            .margins
            .iter()
            .zip(&file.report.margins)
            .all(|((c1, v1), (c2, v2))| c1 == c2 && v1.to_bits() == v2.to_bits())
        && report.swb_gap.map(f64::to_bits) == file.report.swb_gap.map(f64::to_bits)
        && report.error == file.report.error;
    Ok(Replay { report, identical })
}
