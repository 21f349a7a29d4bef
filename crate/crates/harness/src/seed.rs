//! Counter-based seed derivation.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent sub-seed of `seed` for the purpose labelled `tag`.
pub fn mix(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag))
}

/// Seed of the `counter`-th trial of a run.
pub fn trial_seed(master: u64, counter: u64) -> u64 {
    splitmix64(master.wrapping_add(counter.wrapping_mul(GOLDEN)))
}
