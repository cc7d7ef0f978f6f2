//! Seed derivation and minibatch sampling.
//!
//! Every sampler owns two independently seeded ChaCha streams derived from
//! the user seed: one for the Gaussian noise, one for minibatch draws. Keeping
//! the streams separate lets full-batch runs of the stochastic samplers share
//! the noise sequence of a ULA run with the same seed.

use alloc::vec::Vec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

/// Stream tag for the Gaussian innovation noise.
pub(crate) const NOISE_STREAM: u64 = 0x4c414e4745564e53;
/// Stream tag for minibatch index draws.
pub(crate) const BATCH_STREAM: u64 = 0x4241544348535452;

/// One round of the SplitMix64 output function; decorrelates nearby seeds.
pub(crate) fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Deterministic sub-generator for stream `tag` of run `seed`.
pub fn stream_rng(seed: u64, tag: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(splitmix64(seed ^ tag))
}

/// Draw a uniformly distributed size-`batch_size` subset of `0..n_components`.
///
/// Indices come back sorted ascending so that downstream gradient sums have a
/// fixed summation order. Uses a partial Fisher-Yates shuffle, so every
/// subset is equally likely.
pub fn sample_minibatch<R: Rng>(
    rng: &mut R,
    n_components: usize,
    batch_size: usize,
) -> Result<Vec<usize>> {
    if batch_size == 0 {
        return Err(Error::InvalidParameter {
            context: "batch size must be at least 1",
        });
    }
    if batch_size > n_components {
        return Err(Error::BatchTooLarge {
            batch_size,
            n_components,
        });
    }
    let mut scratch = MinibatchScratch::new(n_components);
    let mut out = alloc::vec![0usize; batch_size];
    scratch.draw(rng, &mut out);
    Ok(out)
}

/// Reusable buffer for repeated minibatch draws inside a sampler loop.
///
/// Produces exactly the same draws as [`sample_minibatch`] for the same RNG
/// state: a partial Fisher-Yates pass whose swaps are undone afterwards.
pub(crate) struct MinibatchScratch {
    perm: Vec<usize>,
    swaps: Vec<usize>,
}

impl MinibatchScratch {
    pub(crate) fn new(n_components: usize) -> Self {
        MinibatchScratch {
            perm: (0..n_components).collect(),
            swaps: Vec::new(),
        }
    }

    pub(crate) fn draw<R: Rng>(&mut self, rng: &mut R, out: &mut [usize]) {
        let n = self.perm.len();
        let m = out.len();
        debug_assert!(m >= 1 && m <= n);
        self.swaps.clear();
        for j in 0..m {
            let r = rng.random_range(j..n);
            self.perm.swap(j, r);
            self.swaps.push(r);
        }
        out.copy_from_slice(&self.perm[..m]);
        out.sort_unstable();
        // restore identity order for the next draw
        for j in (0..m).rev() {
            self.perm.swap(j, self.swaps[j]);
        }
    }
}
