//! Random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream whose
//! 256-bit key is expanded from a 64-bit seed with SplitMix64. Trial `i` of an
//! experiment seeded with `s` uses the stream keyed by `mix(s, i)`, so trials
//! are independent of each other and of scheduling. Uniform integers are drawn
//! with Lemire's multiply-and-reject method on raw `next_u64` output, which
//! keeps the mapping from seed to graph independent of `rand`'s distribution
//! code. This combination is stream identity [`STREAM_VERSION`]; changing any
//! part of it must bump the version.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Identity of the seed-to-stream mapping. Recorded by the CLI next to seeds.
pub const STREAM_VERSION: &str = "chacha8-splitmix64-lemire/1";

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` in an experiment with master seed `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut state = seed ^ trial.wrapping_mul(0xD6E8_FEB8_6659_FD93);
    splitmix64(&mut state);
    splitmix64(&mut state) ^ trial
}

/// Deterministic generator used everywhere in the crate.
#[derive(Clone, Debug)]
pub struct Stream {
    inner: ChaCha8Rng,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        let mut state = seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        Stream {
            inner: ChaCha8Rng::from_seed(key),
        }
    }

    pub fn for_trial(seed: u64, trial: u64) -> Self {
        Stream::new(trial_seed(seed, trial))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `0..bound`. `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let wide = u128::from(self.next_u64()) * u128::from(bound);
            if (wide as u64) >= threshold {
                return (wide >> 64) as u64;
            }
        }
    }

    /// Uniform float in `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<u64> = {
            let mut s = Stream::new(42);
            (0..8).map(|_| s.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut s = Stream::new(42);
            (0..8).map(|_| s.next_u64()).collect()
        };
        assert_eq!(a, b);
        let mut c = Stream::new(43);
        assert_ne!(a[0], c.next_u64());
    }

    #[test]
    fn trial_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..10_000).map(|i| trial_seed(7, i)).collect();
        assert_eq!(seeds.len(), 10_000);
        assert_ne!(trial_seed(1, 0), trial_seed(0, 1));
    }

    #[test]
    fn below_is_uniform_on_small_range() {
        let mut s = Stream::new(3);
        let mut counts = [0u32; 7];
        let draws = 70_000;
        for _ in 0..draws {
            counts[s.below(7) as usize] += 1;
        }
        // 10_000 expected per cell, sd ~ 92
        for c in counts {
            assert!((c as i64 - 10_000).abs() < 500, "{counts:?}");
        }
    }

    #[test]
    fn below_one_is_zero() {
        let mut s = Stream::new(0);
        assert!((0..100).all(|_| s.below(1) == 0));
    }
}
