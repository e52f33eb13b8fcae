//! SplitMix64, the single random source for every seeded operation.
//!
//! The generator is tiny and fully specified, so other implementations can
//! reproduce every sampled colour set, permutation and probe bit-for-bit.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stream identifiers used to derive independent sub-seeds from one seed.
pub mod stream {
    pub const COLOURS: u64 = 1;
    pub const TRIALS: u64 = 2;
    pub const PARTITION: u64 = 3;
    pub const EXPANDER: u64 = 4;
    pub const GENERATOR: u64 = 5;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform variate in `[0, 1)` built from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..bound` via a 128-bit multiply-high.
    ///
    /// The bias is at most `bound / 2^64`, negligible for graph sizes.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "below() needs a positive bound");
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    /// In-place Fisher-Yates shuffle, drawing from the back of the slice.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }

    /// Shuffles only the first `k` positions, leaving a uniform `k`-prefix.
    pub fn shuffle_prefix<T>(&mut self, items: &mut [T], k: usize) {
        let len = items.len();
        for i in 0..k.min(len) {
            let j = i + self.below(len - i);
            items.swap(i, j);
        }
    }
}

/// Derives the seed for sub-stream `stream`, item `index` of a root seed.
pub fn sub_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut mixer = SplitMix64::new(seed ^ stream.wrapping_mul(GOLDEN_GAMMA));
    let base = mixer.next_u64();
    let mut mixer = SplitMix64::new(base ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    mixer.next_u64()
}
