//! Stable seed derivation. Every random draw in an experiment is keyed by a
//! tuple of integers so any cell or trial can be regenerated on its own.

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-sensitive hash of a sequence of words.
pub fn hash_words(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x6a09_e667_f3bc_c908, |acc, &w| mix64(acc ^ mix64(w)))
}

/// Seed of one phase-transition trial.
pub fn trial_seed(base_seed: u64, r: usize, m: usize, trial: usize) -> u64 {
    hash_words(&[base_seed, r as u64, m as u64, trial as u64])
}

/// Independent sub-streams of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialSeeds {
    pub signal: u64,
    pub ensemble: u64,
    pub noise: u64,
}

impl TrialSeeds {
    pub fn from_root(root: u64) -> Self {
        Self {
            signal: hash_words(&[root, 1]),
            ensemble: hash_words(&[root, 2]),
            noise: hash_words(&[root, 3]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_values() {
        // Seeds feed reproducible CSVs; changing the mixer changes every result.
        assert_eq!(mix64(0), 0xe220_a839_7b1d_cdaf);
        assert_eq!(trial_seed(1, 2, 3, 4), trial_seed(1, 2, 3, 4));
        assert_ne!(trial_seed(1, 2, 3, 4), trial_seed(1, 3, 2, 4));
    }

    #[test]
    fn sub_streams_differ() {
        let s = TrialSeeds::from_root(7);
        assert_ne!(s.signal, s.ensemble);
        assert_ne!(s.ensemble, s.noise);
    }
}
