//! Deterministic, splittable random-number streams.
//!
//! Every stochastic computation in this crate draws from a stream derived
//! from one master seed and an integer path such as `(phase index, trial
//! index)`. Streams are independent of iteration order and of how work is
//! distributed across threads, so parallel runs are bit-identical to
//! sequential ones.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 step: a full-period mixer used only for key derivation.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive an independent ChaCha8 stream from `master` and a path of indices.
///
/// Distinct paths give statistically independent streams; the same
/// `(master, path)` pair always yields the same stream.
pub fn stream(master: u64, path: &[u64]) -> ChaCha8Rng {
    let mut state = master ^ 0x6a09_e667_f3bc_c908;
    // Fold the path length first so (a) and (a, 0) differ.
    let mut len_key = path.len() as u64;
    state ^= splitmix64(&mut len_key);
    for &p in path {
        let mut element_key = p;
        state ^= splitmix64(&mut element_key);
        state = splitmix64(&mut state);
    }
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}
