use thiserror::Error;

use crate::item::Key;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One step of the SplitMix64 generator: returns `(next_state, output)`.
pub fn prng_next(state: u64) -> (u64, u64) {
    let state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (state, z ^ (z >> 31))
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }
}

impl Iterator for SplitMix64 {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let (state, out) = prng_next(self.state);
        self.state = state;
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("digit width must be within 1..=19, got {0}")]
    InvalidDigits(u32),
}

/// What to generate: `n` keys of exactly `digits` decimal digits, or of at
/// most `digits` digits when `full_range` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    pub digits: u32,
    pub seed: u64,
    pub full_range: bool,
}

impl GenSpec {
    pub fn new(n: usize, digits: u32, seed: u64) -> Self {
        Self {
            n,
            digits,
            seed,
            full_range: false,
        }
    }

    pub fn full_range(mut self, on: bool) -> Self {
        self.full_range = on;
        self
    }

    /// Half-open key range `[lo, hi)`.
    pub fn range(&self) -> Result<(Key, Key), GenError> {
        if self.digits == 0 || self.digits > 19 {
            return Err(GenError::InvalidDigits(self.digits));
        }
        let hi = 10u64.pow(self.digits);
        let lo = if self.full_range { 0 } else { hi / 10 };
        Ok((lo, hi))
    }
}

/// `keys[i] = lo + (output_i mod (hi - lo))` over the SplitMix64 stream
/// seeded with `spec.seed`.
pub fn gen_keys(spec: &GenSpec) -> Result<Vec<Key>, GenError> {
    let (lo, hi) = spec.range()?;
    let span = hi - lo;
    Ok(SplitMix64::new(spec.seed)
        .take(spec.n)
        .map(|x| lo + x % span)
        .collect())
}
