//! Counter-based deterministic random number generation.
//!
//! Every output is a pure function of `(seed, stream, counter)`:
//!
//! * the SplitMix64 finalizer `mix` maps a 64-bit state to an output;
//! * position `i` of the sequence with key `k` is `mix(k + (i+1) * GAMMA)`,
//!   i.e. the ordinary SplitMix64 sequence started at state `k`;
//! * stream `s` of master seed `m` uses key `position(m, s)`.
//!
//! Because draws are addressed rather than iterated, parallel chunks can
//! consume disjoint streams and reproduce the exact numbers a sequential
//! run would have produced. Not cryptographic.

/// 2^64 / φ, the SplitMix64 sequence increment.
const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn position(key: u64, index: u64) -> u64 {
    mix(key.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

/// Deterministic counter-based generator; one instance per logical stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    /// Generator for `stream` of `seed`. Distinct streams are statistically
    /// independent for simulation purposes.
    pub fn new(seed: u64, stream: u64) -> Self {
        Self {
            key: position(seed, stream),
            counter: 0,
        }
    }

    /// Next raw 64-bit output.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let v = position(self.key, self.counter);
        self.counter += 1;
        v
    }

    /// Next uniform draw in [0, 1) with 53-bit resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
