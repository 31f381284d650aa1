//! Seeded random source shared by the whole workspace.
//!
//! The generator is xoshiro256++ whose four state words are produced by
//! splitmix64 from a single `u64` user seed, so "same seed, same run" holds
//! and can be reproduced in any language. Every derived quantity is defined
//! here and nowhere else:
//!
//! * [`Rng::next_u64`] — one raw xoshiro256++ output,
//! * [`Rng::index`]`(k)` — `next_u64() % k`,
//! * [`Rng::f64_unit`] — `(next_u64() >> 11) / 2^53`, uniform in `[0, 1)`,
//! * [`Rng::shuffle`] — Fisher–Yates driven by `index`, from the back.
//!
//! Independent child streams (per episode, per worker) take their seed from
//! [`derive_seed`] so parallel and serial schedules agree.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for child stream `stream` of a master seed: one splitmix64 step from
/// the state `master XOR (stream + 1) * 0x9e3779b97f4a7c15`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut state = master ^ stream.wrapping_add(1).wrapping_mul(GOLDEN);
    splitmix64(&mut state)
}

/// xoshiro256++ generator. Construct with [`Rng::seed_from_u64`].
#[derive(Clone, Debug)]
pub struct Rng {
    s: [u64; 4],
}

impl Rng {
    /// Seed the four state words with consecutive splitmix64 outputs.
    pub fn seed_from_u64(seed: u64) -> Self {
        let mut sm = seed;
        Rng {
            s: [
                splitmix64(&mut sm),
                splitmix64(&mut sm),
                splitmix64(&mut sm),
                splitmix64(&mut sm),
            ],
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[0]
            .wrapping_add(self.s[3])
            .rotate_left(23)
            .wrapping_add(self.s[0]);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform index in `[0, bound)`. Plain modulo; the bias is below 2^-32
    /// for every bound used in this workspace.
    pub fn index(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "index bound must be positive");
        (self.next_u64() % bound as u64) as usize
    }

    /// Uniform `f64` in `[0, 1)` from the top 53 bits.
    pub fn f64_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform `f64` in `[lo, hi)`.
    pub fn f64_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.f64_unit()
    }

    /// In-place Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }
}
