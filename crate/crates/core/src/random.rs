//! Seeded generators for states, reference states, Hermitian elements and
//! Haar unitaries.

use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{CMatrix, Element, ReferenceState, State, TracialAlgebra, C64};
use crate::error::{Error, Result};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre(rows: usize, cols: usize, rng: &mut Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
    })
}

fn per_block(algebra: &Arc<TracialAlgebra>, mut f: impl FnMut(usize) -> CMatrix) -> Element {
    let blocks: Vec<CMatrix> = algebra.block_dims().iter().map(|&n| f(n)).collect();
    Element::from_blocks(algebra, blocks).expect("generated blocks match the algebra")
}

/// Random state `G G* / τ(G G*)` with Ginibre blocks of the given rank.
pub fn random_state_with_rank(algebra: &Arc<TracialAlgebra>, rank: usize, seed: u64) -> State {
    let mut r = rng(seed);
    let raw = per_block(algebra, |n| {
        let g = ginibre(n, rank.clamp(1, n), &mut r);
        &g * g.adjoint()
    });
    State::normalize(raw).expect("Ginibre product has positive trace")
}

pub fn random_state(algebra: &Arc<TracialAlgebra>, seed: u64) -> State {
    random_state_with_rank(algebra, usize::MAX, seed)
}

/// Reference state `(1-δ)ρ + δ·1` for a random state `ρ`.
pub fn random_reference_state(algebra: &Arc<TracialAlgebra>, seed: u64, floor: f64) -> Result<ReferenceState> {
    let bound = algebra.floor_bound();
    if !(floor > 0.0 && floor < bound) {
        return Err(Error::InfeasibleFloor { floor, bound });
    }
    let rho = random_state(algebra, seed);
    let mixed = rho.mix(&Element::identity(algebra), 1.0 - floor)?;
    ReferenceState::new(mixed.hermitian_part(), floor)
}

pub fn random_hermitian(algebra: &Arc<TracialAlgebra>, seed: u64) -> Element {
    let mut r = rng(seed);
    per_block(algebra, |n| {
        let g = ginibre(n, n, &mut r);
        (&g + g.adjoint()).scale(0.5)
    })
}

/// Element with Ginibre blocks (generally not normal).
pub fn random_element(algebra: &Arc<TracialAlgebra>, seed: u64) -> Element {
    let mut r = rng(seed);
    per_block(algebra, |n| ginibre(n, n, &mut r))
}

/// Haar-distributed unitary of size `n` (QR with phase correction).
pub fn haar_unitary(n: usize, rng: &mut Rng) -> CMatrix {
    let qr = ginibre(n, n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_unitary(algebra: &Arc<TracialAlgebra>, seed: u64) -> Element {
    let mut r = rng(seed);
    per_block(algebra, |n| haar_unitary(n, &mut r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grid() -> Vec<Arc<TracialAlgebra>> {
        vec![
            Arc::new(TracialAlgebra::matrix(3).unwrap()),
            Arc::new(TracialAlgebra::new(vec![2, 2], vec![0.125, 0.375]).unwrap()),
            Arc::new(TracialAlgebra::new(vec![1, 1, 2], vec![0.1, 0.3, 0.3]).unwrap()),
        ]
    }

    #[test]
    fn constructor_contracts() {
        for a in grid() {
            for seed in 0..20 {
                let s = random_state(&a, seed);
                assert!((s.trace().re - 1.0).abs() < 1e-10);
                let b = random_reference_state(&a, seed, 1e-6).unwrap();
                assert!(b.min_eigenvalue() >= 1e-6);
                let u = random_unitary(&a, seed);
                let defect = u.adjoint().mul(&u).unwrap().sub(&Element::identity(&a)).unwrap();
                assert!(defect.norm2() <= 1e-10);
                assert!(random_hermitian(&a, seed).is_hermitian());
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = &grid()[1];
        assert_eq!(random_state(a, 7), random_state(a, 7));
        assert_ne!(random_state(a, 7), random_state(a, 8));
        assert_eq!(random_unitary(a, 3), random_unitary(a, 3));
    }

    #[test]
    fn infeasible_floor() {
        let a = &grid()[0];
        assert!(matches!(
            random_reference_state(a, 1, 0.0),
            Err(Error::InfeasibleFloor { .. })
        ));
        assert!(matches!(
            random_reference_state(a, 1, 1.5),
            Err(Error::InfeasibleFloor { .. })
        ));
    }

    #[test]
    fn low_rank_states_have_kernel() {
        let a = Arc::new(TracialAlgebra::matrix(4).unwrap());
        let s = random_state_with_rank(&a, 1, 5);
        let ev = s.eigenvalues().unwrap();
        assert!(ev[0][0].abs() < 1e-12 && ev[0][2].abs() < 1e-12);
    }
}
