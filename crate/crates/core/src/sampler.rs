//! Rank/unrank bijection between `{0, ..., T_n - 1}` and colored partitions
//! of `[n]`, and exact-uniform sampling on top of it.
//!
//! Ordering: ranks are grouped by the number `k` of non-zero blocks. Within
//! the `T_{n,k}` ranks of a group, the element `n` is placed, in order, as a
//! new singleton block (`T_{n-1,k-1}` ranks), in the zero-block with colors
//! `1..=c` (`c·T_{n-1,k}` ranks), then in existing block `j` with color `i`
//! for `j = 1..=k`, `i = 1..=m` (`mk·T_{n-1,k}` ranks). Each slot of size
//! `T_{n-1,·}` recurses on `n - 1`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::enumeration::{count_table, CountTable};
use crate::error::{Error, Result};
use crate::params::ColorParams;
use crate::partition::{ColoredPartition, Tagged};

/// Where element `e` goes when the partition of `[e-1]` is extended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Placement {
    Singleton,
    Zero {
        color: u32,
    },
    /// Zero-based block index in order of ascending minimum.
    Join {
        block: usize,
        color: u32,
    },
}

/// Unranks and ranks against a count table built once.
#[derive(Debug, Clone)]
pub struct Sampler {
    table: CountTable,
}

/// One line of a sample dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub n: usize,
    /// Decimal rank, kept as a string since it overflows 64 bits quickly.
    pub rank: String,
    pub k: usize,
    /// Canonical text form of the partition.
    pub partition: String,
}

impl Sampler {
    pub fn new(params: ColorParams, n_max: usize) -> Self {
        Self {
            table: count_table(params, n_max),
        }
    }

    pub fn from_table(table: CountTable) -> Self {
        Self { table }
    }

    pub fn table(&self) -> &CountTable {
        &self.table
    }

    pub fn params(&self) -> ColorParams {
        self.table.params()
    }

    fn t(&self, n: usize, k: usize) -> BigUint {
        self.table.get(n, k).unwrap_or_default()
    }

    pub fn unrank(&self, n: usize, rank: &BigUint) -> Result<ColoredPartition> {
        let row = self.table.row(n)?;
        let size: BigUint = row.iter().sum();
        if rank >= &size {
            return Err(Error::RankOutOfRange {
                rank: rank.clone(),
                size,
            });
        }
        let mut u = rank.clone();
        let mut k = 0;
        while u >= row[k] {
            u -= &row[k];
            k += 1;
        }
        let (c, m) = (self.params().c() as u64, self.params().m() as u64);
        let mut placements = vec![Placement::Singleton; n + 1];
        for level in (1..=n).rev() {
            let singles = if k > 0 {
                self.t(level - 1, k - 1)
            } else {
                BigUint::zero()
            };
            if u < singles {
                placements[level] = Placement::Singleton;
                k -= 1;
                continue;
            }
            u -= singles;
            let slot = self.t(level - 1, k);
            let (d, s) = u.div_rem(&slot);
            let d = d.to_u64().expect("slot index below c + mk");
            placements[level] = if d < c {
                Placement::Zero {
                    color: d as u32 + 1,
                }
            } else {
                let e = d - c;
                Placement::Join {
                    block: (e / m) as usize,
                    color: (e % m) as u32 + 1,
                }
            };
            u = s;
        }
        let mut partition = ColoredPartition::empty(n);
        for (element, placement) in placements.into_iter().enumerate().skip(1) {
            match placement {
                Placement::Singleton => {
                    partition.nonzero_blocks.push(vec![Tagged::new(element, 1)])
                }
                Placement::Zero { color } => partition.zero_block.push(Tagged::new(element, color)),
                Placement::Join { block, color } => {
                    partition.nonzero_blocks[block].push(Tagged::new(element, color))
                }
            }
        }
        Ok(partition)
    }

    pub fn rank(&self, partition: &ColoredPartition) -> Result<BigUint> {
        let params = self.params();
        partition.check(&params)?;
        let n = partition.n;
        self.table.row(n)?;
        let mut placements = vec![Placement::Singleton; n + 1];
        for t in &partition.zero_block {
            placements[t.element] = Placement::Zero { color: t.color };
        }
        for (block, members) in partition.nonzero_blocks.iter().enumerate() {
            let min = members
                .iter()
                .map(|t| t.element)
                .min()
                .expect("checked nonempty");
            for t in members {
                placements[t.element] = if t.element == min {
                    Placement::Singleton
                } else {
                    Placement::Join {
                        block,
                        color: t.color,
                    }
                };
            }
        }
        let (c, m) = (params.c() as u64, params.m() as u64);
        // u_e = offset + slot_index · T_{e-1,k_{e-1}} + u_{e-1}
        let mut u = BigUint::zero();
        let mut k = 0usize;
        for (element, placement) in placements.iter().enumerate().skip(1) {
            let prev = element - 1;
            match *placement {
                Placement::Singleton => {
                    k += 1;
                }
                Placement::Zero { color } => {
                    let singles = if k > 0 {
                        self.t(prev, k - 1)
                    } else {
                        BigUint::zero()
                    };
                    u += singles + self.t(prev, k) * (color as u64 - 1);
                }
                Placement::Join { block, color } => {
                    let singles = if k > 0 {
                        self.t(prev, k - 1)
                    } else {
                        BigUint::zero()
                    };
                    let index = c + block as u64 * m + color as u64 - 1;
                    u += singles + self.t(prev, k) * index;
                }
            }
        }
        let offset: BigUint = self.table.row(n)?[..k].iter().sum();
        Ok(offset + u)
    }

    /// Uniform draw from `[0, T_n)` by rejection on `⌈log₂ T_n⌉`-bit words.
    pub fn uniform_rank<R: RngCore>(&self, n: usize, rng: &mut R) -> Result<BigUint> {
        let size = self.table.total(n)?;
        uniform_below(&size, rng)
    }

    pub fn sample<R: RngCore>(&self, n: usize, rng: &mut R) -> Result<(BigUint, ColoredPartition)> {
        let rank = self.uniform_rank(n, rng)?;
        let partition = self.unrank(n, &rank)?;
        Ok((rank, partition))
    }

    pub fn record<R: RngCore>(&self, n: usize, rng: &mut R) -> Result<SampleRecord> {
        let (rank, partition) = self.sample(n, rng)?;
        Ok(SampleRecord {
            n,
            rank: rank.to_string(),
            k: partition.k(),
            partition: partition.to_string(),
        })
    }
}

/// Seeded generator for worker `stream`; distinct streams never overlap.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform integer in `[0, bound)`, `bound > 0`.
pub fn uniform_below<R: RngCore>(bound: &BigUint, rng: &mut R) -> Result<BigUint> {
    if bound.is_zero() {
        return Err(Error::RankOutOfRange {
            rank: BigUint::zero(),
            size: BigUint::zero(),
        });
    }
    let bits = (bound - 1u32).bits();
    if bits == 0 {
        return Ok(BigUint::zero());
    }
    let words = bits.div_ceil(64) as usize;
    let top_bits = bits - 64 * (words as u64 - 1);
    let top_mask = if top_bits == 64 {
        u64::MAX
    } else {
        (1u64 << top_bits) - 1
    };
    loop {
        let mut digits: Vec<u32> = Vec::with_capacity(2 * words);
        for i in 0..words {
            let mut word = rng.next_u64();
            if i + 1 == words {
                word &= top_mask;
            }
            digits.push(word as u32);
            digits.push((word >> 32) as u32);
        }
        let candidate = BigUint::new(digits);
        if &candidate < bound {
            return Ok(candidate);
        }
    }
}

pub fn unrank(params: ColorParams, n: usize, rank: &BigUint) -> Result<ColoredPartition> {
    Sampler::new(params, n).unrank(n, rank)
}

pub fn rank(params: ColorParams, partition: &ColoredPartition) -> Result<BigUint> {
    Sampler::new(params, partition.n).rank(partition)
}

/// Uniform sample with the stream-0 generator for `seed`.
pub fn sample_uniform(params: ColorParams, n: usize, seed: u64) -> ColoredPartition {
    let sampler = Sampler::new(params, n);
    let mut rng = rng_stream(seed, 0);
    sampler
        .sample(n, &mut rng)
        .expect("table covers n and T_n >= 1")
        .1
}

pub fn validate(params: &ColorParams, partition: &ColoredPartition) -> bool {
    partition.check(params).is_ok()
}
