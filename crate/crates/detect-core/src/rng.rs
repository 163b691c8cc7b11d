//! Seeded pseudo-random generation.
//!
//! Everything random in this crate flows through [`XorShift64Star`], Vigna's
//! xorshift64* generator, seeded through the SplitMix64 finalizer. Both are
//! published, portable algorithms, so a given seed reproduces the same
//! partitions, thresholds and bootstraps on any platform. Per-tree seeds are
//! derived with [`mix_seed`] so that changing the tree count never perturbs
//! the seeds of earlier trees.

/// Odd constant from the SplitMix64 stream (2^64 / golden ratio).
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer: bijective avalanche mixing of a 64-bit word.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the `index`-th child seed from a master seed.
///
/// This is the SplitMix64 sequence evaluated at position `index + 1`:
/// `mix64(master + (index + 1) * GOLDEN_GAMMA)`.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    mix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// xorshift64* generator (Vigna 2016), 64 bits of state.
#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    /// The raw seed is passed through SplitMix64 so that small or zero seeds
    /// still produce well-spread states. A zero state is invalid for
    /// xorshift; the one seed that mixes to zero is remapped.
    pub fn new(seed: u64) -> Self {
        let mut state = mix64(seed);
        if state == 0 {
            state = GOLDEN_GAMMA;
        }
        Self { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform f64 in [0, 1), 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, n). Multiply-shift mapping; the bias of at
    /// most n/2^64 is negligible at corpus scale.
    pub fn gen_range(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (((self.next_u64() as u128) * (n as u128)) >> 64) as usize
    }

    /// Uniform draw from the open interval (lo, hi). Requires lo < hi.
    /// Redraws on the measure-zero rounding cases that land on an endpoint.
    pub fn gen_open_range(&mut self, lo: f64, hi: f64) -> f64 {
        debug_assert!(lo < hi);
        loop {
            let v = lo + self.next_f64() * (hi - lo);
            if v > lo && v < hi {
                return v;
            }
        }
    }

    /// In-place Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.gen_range(i + 1);
            items.swap(i, j);
        }
    }

    /// Sample `k` distinct values from 0..n (partial Fisher–Yates over an
    /// index pool). Order of the result is the draw order.
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        debug_assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.gen_range(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}
