//! Names and default slack floors of every asserted margin.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `‖A − Rφ(A)‖₁² − 4(1 − F)²`.
    ChainFidelity,
    /// `S₂ gap − ‖A − Rφ(A)‖₁²`.
    ChainL1,
    /// `S₂ gap − ‖A − Rφ(A)‖²_{B,2}`.
    ChainAm,
    /// `‖A − Rφ(A)‖²_{B,2} − ‖A − Rφ(A)‖₁²`.
    ChainTraceVsAm,
    /// `S₂(A|B) − S₂(φ(A)|φ(B))`.
    Dpi,
    /// `−‖R(φ(B)) − B‖₂`.
    FixedPoint,
    /// Smallest Choi eigenvalue of the Petz map.
    PetzChoi,
    /// `−` trace-preservation residual of the Petz map.
    PetzTracePreservation,
    /// `−` Araki–Masuda adjointness residual of the Petz map.
    AmAdjoint,
    /// `‖φ(1)‖‖X‖₂² − ‖φ(X)‖₂²`.
    L2Bound,
    /// Smallest eigenvalue of `φ*(P)` for a positive `P`.
    AdjointPositivity,
    /// `‖X‖²_{B,2} − ‖X‖₁²` for a random `X`.
    TraceVsAm,
    /// `‖A − C‖₁ − ‖A^{1/2} − C^{1/2}‖₂²`.
    PowersStormer,
    /// `‖A − C‖₁ − 2(1 − F(A|C))`.
    FidelityBound,
    /// `F(φ(A)|φ(C)) − F(A|C)`.
    Monotonicity,
    /// Smallest joint-concavity slack over `λ ∈ {0.1, …, 0.9}`.
    JointConcavity,
    /// `d(A,C) + d(C,D) − d(A,D)` for the Bures angle.
    BuresTriangle,
    /// `−max(|KL gap|, |S₂ gap|)` when `R(φ(A)) = A`.
    Sufficiency,
    /// `−max` of the gap, residuals and fidelity term for unitary channels.
    UnitaryEquality,
    /// `1 − ‖V‖`.
    VContraction,
    /// `λ_min(Δ₀ − V*ΔV)`.
    ModularSandwich,
    /// `λ_min(L_{φ(B)^{1/2}}R_{φ(B)^{1/2}} − Φ L_{B^{1/2}}R_{B^{1/2}} Φ*)`.
    SandwichDomination,
    /// `λ_min(Δ₀^{1/2} − V*Δ^{1/2}V)`.
    Concavity,
    /// `λ_min(L_{B^{-1/2}}R_{B^{-1/2}} − 2(L_B + R_B)^{-1})`.
    Amgm,
    /// `‖X‖_{B,2} − ‖φ(X)‖_{φ(B),2}`.
    AmContraction,
    /// `−` residual of the `‖V*(X)‖₂²` identity.
    AdjointNormIdentity,
    /// `−` residual of the spectrum of `Δ`.
    ModularSpectrum,
    /// `F −` best sampled unitary overlap.
    OracleDominance,
    /// `−|overlap at the polar unitary − F|`.
    PolarAttainment,
}

impl Check {
    pub const ALL: [Check; 29] = [
        Check::ChainFidelity,
        Check::ChainL1,
        Check::ChainAm,
        Check::ChainTraceVsAm,
        Check::Dpi,
        Check::FixedPoint,
        Check::PetzChoi,
        Check::PetzTracePreservation,
        Check::AmAdjoint,
        Check::L2Bound,
        Check::AdjointPositivity,
        Check::TraceVsAm,
        Check::PowersStormer,
        Check::FidelityBound,
        Check::Monotonicity,
        Check::JointConcavity,
        Check::BuresTriangle,
        Check::Sufficiency,
        Check::UnitaryEquality,
        Check::VContraction,
        Check::ModularSandwich,
        Check::SandwichDomination,
        Check::Concavity,
        Check::Amgm,
        Check::AmContraction,
        Check::AdjointNormIdentity,
        Check::ModularSpectrum,
        Check::OracleDominance,
        Check::PolarAttainment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::ChainFidelity => "chain_fidelity",
            Check::ChainL1 => "chain_l1",
            Check::ChainAm => "chain_am",
            Check::ChainTraceVsAm => "chain_trace_vs_am",
            Check::Dpi => "dpi",
            Check::FixedPoint => "fixed_point",
            Check::PetzChoi => "petz_choi",
            Check::PetzTracePreservation => "petz_trace_preservation",
            Check::AmAdjoint => "am_adjoint",
            Check::L2Bound => "l2_bound",
            Check::AdjointPositivity => "adjoint_positivity",
            Check::TraceVsAm => "trace_vs_am",
            Check::PowersStormer => "powers_stormer",
            Check::FidelityBound => "fidelity_bound",
            Check::Monotonicity => "monotonicity",
            Check::JointConcavity => "joint_concavity",
            Check::BuresTriangle => "bures_triangle",
            Check::Sufficiency => "sufficiency",
            Check::UnitaryEquality => "unitary_equality",
            Check::VContraction => "v_contraction",
            Check::ModularSandwich => "modular_sandwich",
            Check::SandwichDomination => "sandwich_domination",
            Check::Concavity => "concavity",
            Check::Amgm => "amgm",
            Check::AmContraction => "am_contraction",
            Check::AdjointNormIdentity => "adjoint_norm_identity",
            Check::ModularSpectrum => "modular_spectrum",
            Check::OracleDominance => "oracle_dominance",
            Check::PolarAttainment => "polar_attainment",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Check::PetzChoi | Check::PetzTracePreservation => 1e-10,
            Check::PowersStormer | Check::FidelityBound => 1e-10,
            Check::UnitaryEquality | Check::PolarAttainment | Check::AdjointNormIdentity => 1e-10,
            Check::OracleDominance => 1e-12,
            Check::Sufficiency => 1e-6,
            _ => 1e-9,
        }
    }

    /// Checks that need dense superoperators and run on the superoperator subset.
    pub fn is_superop(self) -> bool {
        matches!(
            self,
            Check::VContraction
                | Check::ModularSandwich
                | Check::SandwichDomination
                | Check::Concavity
                | Check::Amgm
                | Check::AmContraction
                | Check::AdjointNormIdentity
                | Check::ModularSpectrum
                | Check::OracleDominance
                | Check::PolarAttainment
        )
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_parse() {
        let names: std::collections::BTreeSet<&str> = Check::ALL.iter().map(|c| c.name()).collect();
        assert_eq!(names.len(), Check::ALL.len());
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(json, format!("\"{}\"", c.name()));
        }
    }
}
