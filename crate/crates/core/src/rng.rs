//! Seeded random streams.
//!
//! Every random stage draws from ChaCha8 keyed by
//! `substream(seed, label, index)`: the 256-bit key is four consecutive
//! SplitMix64 outputs started from `seed ^ fnv1a(label) ^ mix(index)`.
//! Independent stages use distinct labels, repeated trials distinct indices,
//! so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StageRng = ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// The generator for one stage of one trial.
pub fn substream(seed: u64, label: &str, index: u64) -> StageRng {
    let mut idx_state = index;
    let mut state = seed ^ fnv1a(label) ^ splitmix64(&mut idx_state);
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
