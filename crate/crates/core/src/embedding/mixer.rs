//! Label-seeded integer mixing.
//!
//! Everything random in the embeddings is a pure function of
//! `(salt, stream, label, index)` pushed through the SplitMix64 finalizer
//! (Steele, Lea and Flood's constants). No floating point is involved until
//! the final 24-bit value is scaled by a power of two, so outputs are
//! bit-identical on every platform.

/// Fraction bits of every uniform draw; draws are `k / 2^24`, `k in 1..=2^24`.
pub const UNIT_BITS: u32 = 24;
pub const UNIT_SCALE: f64 = (1u64 << UNIT_BITS) as f64;

/// Independent draw streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Spur = 0x5350_5552,
    SpurZipf = 0x5a49_5046,
    Base = 0x4241_5345,
}

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit seed for one component of one label's vector.
pub fn seed(salt: u64, stream: Stream, label: u32, index: usize) -> u64 {
    let h = mix64(salt ^ stream as u64);
    let h = mix64(h ^ u64::from(label));
    mix64(h ^ index as u64)
}

/// Maps a seed onto `1..=2^24`.
pub fn unit_ticks(seed: u64) -> u64 {
    (mix64(seed) >> (64 - UNIT_BITS)) + 1
}

/// Uniform value in `(0, 1]` on the `2^-24` grid.
pub fn unit(seed: u64) -> f64 {
    unit_ticks(seed) as f64 / UNIT_SCALE
}
