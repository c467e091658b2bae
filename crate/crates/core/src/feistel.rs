//! On-the-fly random permutations of integer intervals.
//!
//! A generalized Feistel cipher over the smallest even bit width covering
//! the interval gives a key-selected bijection; cycle walking skips cipher
//! outputs that fall outside the interval. No cryptographic strength is
//! needed or claimed: the cipher only has to be a bijection for every key.

use rand::Rng;
use thiserror::Error;

const FEISTEL_ROUNDS: u32 = 4;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("interval of width {0} exceeds 2^62")]
    IntervalTooLarge(u128),
}

/// Iterator state for a keyed random permutation of `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermState {
    pub lo: i64,
    pub hi: i64,
    /// block bit width, always even
    pub n: u32,
    /// mask extracting the left half-block
    pub bl: u64,
    /// mask extracting the right half-block
    pub br: u64,
    pub key: u64,
    pub rounds: u32,
    /// next cipher index to try
    pub cursor: u64,
    /// largest cipher index, `2^n - 1`
    pub max_index: u64,
}

/// SplitMix64 finalizer; fixed constants so every build agrees bit-exactly.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// In-place Fisher-Yates shuffle; uniform given a uniform generator.
pub fn fisher_yates<T, R: Rng>(items: &mut [T], rng: &mut R) {
    for i in 0..items.len() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// Sets up the permutation state for `[lo, hi]` with the given key.
///
/// The bit width is the number of bits needed to store the interval length,
/// rounded up to the next even number (minimum 2) so the block splits into
/// equal halves.
pub fn perm_setup(lo: i64, hi: i64, key: u64) -> Result<PermState, PermError> {
    assert!(lo <= hi, "perm_setup requires lo <= hi");
    let length = (hi as i128 - lo as i128) as u128 + 1;
    if length > 1u128 << 62 {
        return Err(PermError::IntervalTooLarge(length));
    }
    let mut n = 128 - (length - 1).max(1).leading_zeros(); // ceil(log2 length)
    if length == 1 {
        n = 1;
    }
    if n % 2 == 1 {
        n += 1;
    }
    let br = (1u64 << (n / 2)) - 1;
    let bl = (((1u128 << n) - 1) as u64) - br;
    Ok(PermState {
        lo,
        hi,
        n,
        bl,
        br,
        key,
        rounds: FEISTEL_ROUNDS,
        cursor: 0,
        max_index: ((1u128 << n) - 1) as u64,
    })
}

/// Encrypts an index in `[0, 2^n - 1]`; a bijection on that range for any
/// key. The half-blocks swap on output.
pub fn feistel_encrypt(idx: u64, st: &PermState) -> u64 {
    debug_assert!(idx <= st.max_index);
    let half = st.n / 2;
    let mut left = (idx & st.bl) >> half;
    let mut right = idx & st.br;
    for _ in 0..st.rounds {
        let next_right = left ^ (mix64(right ^ st.key) & st.br);
        left = right;
        right = next_right;
    }
    // ciphertext convention (R_r, L_r)
    (right << half) | left
}

/// Inverse of [`feistel_encrypt`].
pub fn feistel_decrypt(cipher: u64, st: &PermState) -> u64 {
    let half = st.n / 2;
    let mut right = (cipher & st.bl) >> half;
    let mut left = cipher & st.br;
    for _ in 0..st.rounds {
        let prev_left = right ^ (mix64(left ^ st.key) & st.br);
        right = left;
        left = prev_left;
    }
    (left << half) | right
}

/// Draws the next element of the permutation, walking past cipher values
/// outside the interval. `None` once every element has been emitted.
pub fn perm_next(st: &mut PermState) -> Option<i64> {
    let width = (st.hi as i128 - st.lo as i128) as u64;
    while st.cursor <= st.max_index {
        let c = feistel_encrypt(st.cursor, st);
        st.cursor += 1;
        if c <= width {
            return Some(st.lo + c as i64);
        }
    }
    None
}
