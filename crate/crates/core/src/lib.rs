//! Recoverability numerics on finite-dimensional tracial algebras.
//!
//! The crate models a tracial von Neumann algebra as a finite direct sum of
//! matrix blocks with a weighted, normalized trace, and provides:
//!
//! - [`algebra`]: elements, states, the trace, `L^p` norms and spectral calculus;
//! - [`channel`]: completely positive, trace-preserving maps with Kraus, Choi
//!   and L² forms;
//! - [`entropy`]: the sandwiched quasi-relative entropy `S_p`, Araki–Masuda
//!   norms and the Kullback–Leibler divergence;
//! - [`recovery`]: the Petz recovery map and the recoverability chain
//!   `4(1−F)² ≤ ‖A − R(φ(A))‖₁² ≤ S₂(A|B) − S₂(φ(A)|φ(B))`;
//! - [`fidelity`]: Uhlmann fidelity, Bures angle and its companion inequalities;
//! - [`checks`]: operator inequalities on left/right multiplication superoperators.
//!
//! Everything is `no_std` with `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod channel;
pub mod checks;
pub mod entropy;
mod error;
pub mod fidelity;
pub mod random;
pub mod recovery;
pub mod superop;
pub mod tolerance;

pub use algebra::{CMatrix, Element, ReferenceState, SpectralFn, State, TracialAlgebra, C64};
pub use channel::{Channel, ChannelDiagnostics, Strictness};
pub use error::{Error, Result};
pub use superop::Superoperator;
