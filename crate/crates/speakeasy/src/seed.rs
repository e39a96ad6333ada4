//! Deterministic seed derivation for replicate runs, permutation rounds and
//! per-node tie-breaking streams. All parallel work derives its randomness
//! from (master seed, index) so results are independent of the execution
//! schedule.

/// SplitMix64 output function. Full-period bijective mixer, the usual choice
/// for turning a counter into an independent-looking 64-bit stream.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derive an independent child seed from a master seed and an index.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// Map a 64-bit random value to `[0, bound)` without modulo bias worth
/// caring about (Lemire's multiply-shift).
pub fn bounded(value: u64, bound: usize) -> usize {
    debug_assert!(bound > 0);
    ((value as u128 * bound as u128) >> 64) as usize
}
