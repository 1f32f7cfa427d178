//! Synthetic key workloads for the SST-level simulator.
//!
//! Four key orderings with very different merge-overlap behavior:
//!
//! - `Uniform`: independent uniform draws over the key universe.
//! - `Zipf { theta }`: skewed draws (Gray et al. sampler) scattered over the
//!   universe with a hash, so the hot set is not one contiguous range.
//! - `Sorted`: globally ascending keys; consecutive batches never overlap
//!   lower levels, driving measured merge amplification toward zero.
//! - `SortedStride`: keys emitted in blocks of `pairs_per_block`, each block
//!   walking the whole universe with stride `universe / pairs_per_block`.
//!   Every flushed SST then spans the full key universe, driving measured
//!   merge amplification toward its maximum.

use alloc::format;

use crate::error::{Error, Result};
use crate::math;
use crate::sim::rng::{mix, Xoshiro256PlusPlus};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum KeyDistribution {
    Uniform,
    Zipf { theta: f64 },
    Sorted,
    SortedStride,
}

/// Conventional skew parameter used when a zipf workload does not specify one.
pub const DEFAULT_ZIPF_THETA: f64 = 0.99;

/// A synthetic insert workload.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WorkloadSpec {
    pub num_pairs: u64,
    pub key_bytes: u32,
    pub value_bytes: u32,
    pub distribution: KeyDistribution,
    /// Keys are drawn from `[0, key_universe)`.
    pub key_universe: u64,
    pub seed: u64,
}

impl WorkloadSpec {
    pub fn pair_bytes(&self) -> u64 {
        self.key_bytes as u64 + self.value_bytes as u64
    }

    pub fn dataset_bytes(&self) -> u128 {
        self.num_pairs as u128 * self.pair_bytes() as u128
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_pairs == 0 {
            return Err(Error::param("num_pairs", "workload must contain pairs"));
        }
        if self.key_bytes == 0 {
            return Err(Error::param("key_bytes", "key size must be > 0"));
        }
        if self.key_universe == 0 {
            return Err(Error::param("key_universe", "universe must be > 0"));
        }
        if let KeyDistribution::Zipf { theta } = self.distribution {
            if !(theta > 0.0 && theta < 1.0) {
                return Err(Error::param("theta", "zipf skew must be in (0, 1)"));
            }
        }
        if matches!(
            self.distribution,
            KeyDistribution::Sorted | KeyDistribution::SortedStride
        ) && self.key_universe < self.num_pairs
        {
            return Err(Error::Geometry(format!(
                "key universe {} cannot cover {} distinct sorted keys",
                self.key_universe, self.num_pairs
            )));
        }
        Ok(())
    }
}

/// Deterministic key iterator for a workload.
pub struct KeyStream {
    spec: WorkloadSpec,
    emitted: u64,
    rng: Xoshiro256PlusPlus,
    zipf: Option<ZipfSampler>,
    // sorted-stride state
    stride: u64,
    pairs_per_block: u64,
    block: u64,
    slot: u64,
}

impl KeyStream {
    /// `pairs_per_block` is the number of keys per generated SST; it shapes
    /// the stride construction and is ignored by the other distributions.
    pub fn new(spec: &WorkloadSpec, pairs_per_block: u64) -> Result<KeyStream> {
        spec.validate()?;
        let mut stride = 0;
        if spec.distribution == KeyDistribution::SortedStride {
            if pairs_per_block == 0 {
                return Err(Error::param("pairs_per_block", "must be > 0"));
            }
            stride = spec.key_universe / pairs_per_block;
            if stride == 0 {
                return Err(Error::Geometry(format!(
                    "universe {} too small for {} keys per block",
                    spec.key_universe, pairs_per_block
                )));
            }
            let blocks = spec.num_pairs.div_ceil(pairs_per_block);
            if blocks > stride {
                return Err(Error::Geometry(format!(
                    "universe {} too small for {} full-range blocks of {} keys",
                    spec.key_universe, blocks, pairs_per_block
                )));
            }
        }
        let zipf = match spec.distribution {
            KeyDistribution::Zipf { theta } => Some(ZipfSampler::new(spec.key_universe, theta)),
            _ => None,
        };
        Ok(KeyStream {
            spec: spec.clone(),
            emitted: 0,
            rng: Xoshiro256PlusPlus::from_seed(spec.seed),
            zipf,
            stride,
            pairs_per_block,
            block: 0,
            slot: 0,
        })
    }
}

impl Iterator for KeyStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.emitted >= self.spec.num_pairs {
            return None;
        }
        let key = match self.spec.distribution {
            KeyDistribution::Uniform => self.rng.next_below(self.spec.key_universe),
            KeyDistribution::Zipf { .. } => {
                let rank = self.zipf.as_mut().unwrap().next(&mut self.rng);
                // Scatter ranks so the hot set is spread over the universe.
                ((mix(rank) as u128 * self.spec.key_universe as u128) >> 64) as u64
            }
            KeyDistribution::Sorted => {
                ((self.emitted as u128 * self.spec.key_universe as u128)
                    / self.spec.num_pairs as u128) as u64
            }
            KeyDistribution::SortedStride => {
                let key = self.slot * self.stride + self.block;
                self.slot += 1;
                if self.slot == self.pairs_per_block {
                    self.slot = 0;
                    self.block += 1;
                }
                key
            }
        };
        self.emitted += 1;
        Some(key)
    }
}

/// Bounded zipf sampler after Gray et al., "Quickly Generating
/// Billion-Record Synthetic Databases".
struct ZipfSampler {
    n: u64,
    theta: f64,
    alpha: f64,
    zetan: f64,
    eta: f64,
}

impl ZipfSampler {
    fn new(n: u64, theta: f64) -> Self {
        let zetan = Self::zeta(n, theta);
        let zeta2 = Self::zeta(2, theta);
        let eta = (1.0 - math::powf(2.0 / n as f64, 1.0 - theta)) / (1.0 - zeta2 / zetan);
        ZipfSampler {
            n,
            theta,
            alpha: 1.0 / (1.0 - theta),
            zetan,
            eta,
        }
    }

    fn zeta(n: u64, theta: f64) -> f64 {
        let mut sum = 0.0;
        for i in 1..=n {
            sum += 1.0 / math::powf(i as f64, theta);
        }
        sum
    }

    /// Rank in `[0, n)`, 0 most popular.
    fn next(&mut self, rng: &mut Xoshiro256PlusPlus) -> u64 {
        let u = rng.next_f64();
        let uz = u * self.zetan;
        if uz < 1.0 {
            return 0;
        }
        if uz < 1.0 + math::powf(0.5, self.theta) {
            return 1;
        }
        let rank = (self.n as f64 * math::powf(self.eta * u - self.eta + 1.0, self.alpha)) as u64;
        rank.min(self.n - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn spec(distribution: KeyDistribution) -> WorkloadSpec {
        WorkloadSpec {
            num_pairs: 4096,
            key_bytes: 16,
            value_bytes: 48,
            distribution,
            key_universe: 1 << 20,
            seed: 42,
        }
    }

    #[test]
    fn fixed_seed_reproduces_stream() {
        let s = spec(KeyDistribution::Uniform);
        let a: Vec<u64> = KeyStream::new(&s, 512).unwrap().collect();
        let b: Vec<u64> = KeyStream::new(&s, 512).unwrap().collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4096);
    }

    #[test]
    fn sorted_stream_is_ascending_and_distinct() {
        let s = spec(KeyDistribution::Sorted);
        let keys: Vec<u64> = KeyStream::new(&s, 512).unwrap().collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(*keys.last().unwrap() < s.key_universe);
    }

    #[test]
    fn stride_blocks_span_the_universe() {
        let s = spec(KeyDistribution::SortedStride);
        let keys: Vec<u64> = KeyStream::new(&s, 512).unwrap().collect();
        let stride = s.key_universe / 512;
        for block in keys.chunks(512) {
            let lo = *block.iter().min().unwrap();
            let hi = *block.iter().max().unwrap();
            assert!(hi - lo >= s.key_universe - stride - 1);
        }
        // All distinct across the whole stream.
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), keys.len());
    }

    #[test]
    fn stride_rejects_undersized_universe() {
        let mut s = spec(KeyDistribution::SortedStride);
        s.key_universe = 1000; // fewer than num_pairs distinct keys
        assert!(KeyStream::new(&s, 512).is_err());
    }

    #[test]
    fn zipf_is_more_skewed_than_uniform() {
        let mut s = spec(KeyDistribution::Zipf { theta: 0.99 });
        s.key_universe = 1 << 16;
        s.num_pairs = 20000;
        let keys: Vec<u64> = KeyStream::new(&s, 512).unwrap().collect();
        let mut counts = alloc::collections::BTreeMap::new();
        for k in &keys {
            *counts.entry(*k).or_insert(0u64) += 1;
        }
        let max = counts.values().max().copied().unwrap();
        // A uniform draw of 20k over 64k keys almost surely tops out near 1-4
        // occurrences; the zipf head is far above that.
        assert!(max > 50, "max key frequency {max}");
        assert!(keys.iter().all(|k| *k < s.key_universe));
    }

    #[test]
    fn zipf_theta_validated() {
        let mut s = spec(KeyDistribution::Zipf { theta: 1.5 });
        assert!(KeyStream::new(&s, 512).is_err());
        s.distribution = KeyDistribution::Zipf { theta: 0.5 };
        assert!(KeyStream::new(&s, 512).is_ok());
    }
}
