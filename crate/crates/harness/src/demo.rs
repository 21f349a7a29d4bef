//! Worked example on `(M₂, Tr/2)` with `B = 1` and `A = [[1, ½], [½, 1]]`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use petz_core::recovery::{chain_report, swb_gap, RecoverySetup};
use petz_core::{Channel, Element, ReferenceState, State, TracialAlgebra};

use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DemoChannel {
    #[default]
    Pinching,
    Unitary,
    Trace,
}

impl FromStr for DemoChannel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pinching" => Ok(DemoChannel::Pinching),
            "unitary" => Ok(DemoChannel::Unitary),
            "trace" => Ok(DemoChannel::Trace),
            _ => Err(format!("unknown demo channel `{s}`")),
        }
    }
}

impl fmt::Display for DemoChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DemoChannel::Pinching => "pinching",
            DemoChannel::Unitary => "unitary",
            DemoChannel::Trace => "trace",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemoTable {
    pub channel: DemoChannel,
    pub s2_source: f64,
    pub entropy_gap: f64,
    pub l1_residual_sq: f64,
    pub am_residual_sq: f64,
    pub fidelity: f64,
    pub fidelity_term: f64,
    pub swb_gap: f64,
}

pub fn demo(channel: DemoChannel) -> Result<DemoTable, HarnessError> {
    let alg = Arc::new(TracialAlgebra::matrix(2)?);
    let phi = match channel {
        DemoChannel::Pinching => Channel::pinching(&alg),
        DemoChannel::Trace => Channel::trace(&alg),
        DemoChannel::Unitary => {
            let u = Element::from_real_rows(&alg, &[&[0.6, -0.8], &[0.8, 0.6]])?;
            Channel::unitary(&alg, &u)?
        }
    };
    let b = ReferenceState::maximally_mixed(&alg);
    let a = State::new(Element::from_real_rows(&alg, &[&[1.0, 0.5], &[0.5, 1.0]])?)?;
    let setup = RecoverySetup::new(&phi, &b)?;
    let r = chain_report(&a, &setup)?;
    Ok(DemoTable {
        channel,
        s2_source: r.s2_src,
        entropy_gap: r.entropy_gap,
        l1_residual_sq: r.l1_residual_sq,
        am_residual_sq: r.am_residual_sq,
        fidelity: r.fidelity,
        fidelity_term: r.fidelity_term,
        swb_gap: swb_gap(&a, &setup)?,
    })
}

impl fmt::Display for DemoTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "channel: {}   B = 1   A = [[1, 1/2], [1/2, 1]]   algebra: (M2, Tr/2)", self.channel)?;
        let rows = [
            ("S2(A|B)", self.s2_source),
            ("entropy gap", self.entropy_gap),
            ("l1 residual^2", self.l1_residual_sq),
            ("AM residual^2", self.am_residual_sq),
            ("fidelity F", self.fidelity),
            ("4(1-F)^2", self.fidelity_term),
            ("SWB gap", self.swb_gap),
        ];
        for (name, v) in rows {
            writeln!(f, "  {name:<16} {v:>12.6}")?;
        }
        Ok(())
    }
}
