#![allow(dead_code)]

use std::sync::Arc;

use petz_core::random;
use petz_core::{Channel, ReferenceState, TracialAlgebra};

pub fn algebras() -> Vec<Arc<TracialAlgebra>> {
    vec![
        Arc::new(TracialAlgebra::matrix(2).unwrap()),
        Arc::new(TracialAlgebra::matrix(3).unwrap()),
        Arc::new(TracialAlgebra::new(vec![2, 2], vec![0.125, 0.375]).unwrap()),
        Arc::new(TracialAlgebra::new(vec![1, 1, 2], vec![0.1, 0.3, 0.3]).unwrap()),
    ]
}

pub fn algebra(index: usize) -> Arc<TracialAlgebra> {
    let all = algebras();
    all[index % all.len()].clone()
}

/// A random channel on `alg`: a full Kraus draw for a single block, and
/// compression ∘ random ∘ embedding through `M_N` otherwise.
pub fn random_channel(alg: &Arc<TracialAlgebra>, seed: u64) -> Channel {
    let kraus = 2 + (seed % 3) as usize;
    if alg.is_single_block() {
        return Channel::random(alg, alg, kraus, seed).unwrap();
    }
    let embed = Channel::block_embedding(alg).unwrap();
    let full = embed.target().clone();
    let middle = Channel::random(&full, &full, kraus, seed).unwrap();
    let compress = Channel::block_compression(alg).unwrap();
    compress.compose(&middle.compose(&embed).unwrap()).unwrap()
}

pub fn reference(alg: &Arc<TracialAlgebra>, seed: u64) -> ReferenceState {
    random::random_reference_state(alg, seed, 1e-3).unwrap()
}
