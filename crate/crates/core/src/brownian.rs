//! Standard Brownian motion sampled on a partition.
//!
//! Randomness comes from ChaCha8 keyed by the master seed, with the stream
//! index selecting one of 2^64 independent keystreams. A path therefore
//! depends only on `(partition, master_seed, stream_index)`, no matter which
//! thread generates it or in which order.

use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::partition::Partition;

/// Sub-streams carved out of one `(master_seed, stream_index)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum SeedDomain {
    Increments = 0x42,
    EvaluationPoints = 0x55,
    Deletion = 0xde1,
}

/// Identifies one reproducible random stream within an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// Generator for one domain of this stream.
    pub fn rng(&self, domain: SeedDomain) -> ChaCha8Rng {
        let mut state = self.master_seed ^ (domain as u64).wrapping_mul(0xa076_1d64_78bd_642f);
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.stream_index);
        rng
    }

    /// A 64-bit seed for auxiliary sampling (e.g. random deletion sets),
    /// mixed from this stream and a caller-chosen `salt`.
    pub fn derive_u64(&self, salt: u64) -> u64 {
        let mut state = self.master_seed ^ (SeedDomain::Deletion as u64).wrapping_mul(salt | 1);
        state ^= splitmix64(&mut state) ^ salt;
        state ^= self.stream_index.wrapping_mul(0xe703_7ed1_a0b4_28db);
        splitmix64(&mut state)
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Values `B(t_0), ..., B(t_n)` of one Brownian path on a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianPath {
    partition: Partition,
    values: Vec<f64>,
}

impl BrownianPath {
    /// Wraps explicit values. `values[0]` must be exactly zero and the length
    /// must be `n + 1`.
    pub fn from_values(partition: Partition, values: Vec<f64>) -> Result<Self> {
        if values.len() != partition.len() + 1 {
            return invalid(format!(
                "path has {} values, partition needs {}",
                values.len(),
                partition.len() + 1
            ));
        }
        if values[0] != 0.0 {
            return invalid("Brownian path must start at 0");
        }
        Ok(Self { partition, values })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of subintervals.
    pub fn len(&self) -> usize {
        self.partition.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `B(T)`.
    pub fn terminal(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `B(t_{j+1}) - B(t_j)`.
    #[inline]
    pub fn increment(&self, j: usize) -> f64 {
        self.values[j + 1] - self.values[j]
    }

    /// Path value at time `t`: the grid value at a node, linear interpolation
    /// between nodes. Clamped to `[0, T]`.
    pub fn value_at(&self, t: f64) -> f64 {
        let nodes = self.partition.nodes();
        if t <= 0.0 {
            return self.values[0];
        }
        if t >= self.partition.horizon() {
            return self.terminal();
        }
        match nodes.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(j) => self.values[j],
            Err(hi) => {
                let lo = hi - 1;
                let w = (t - nodes[lo]) / (nodes[hi] - nodes[lo]);
                self.values[lo] + w * (self.values[hi] - self.values[lo])
            }
        }
    }

    /// Writes the path as CSV with header `t,B`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,B")?;
        for (t, b) in self.partition.nodes().iter().zip(&self.values) {
            writeln!(out, "{t:.16e},{b:.16e}")?;
        }
        Ok(())
    }
}

/// Samples a path with independent `N(0, t_{j+1} - t_j)` increments,
/// accumulated in index order.
pub fn sample_path(partition: &Partition, seed: SeedSpec) -> BrownianPath {
    let mut rng = seed.rng(SeedDomain::Increments);
    let n = partition.len();
    let mut values = Vec::with_capacity(n + 1);
    let mut b = 0.0;
    values.push(b);
    for j in 0..n {
        let z: f64 = StandardNormal.sample(&mut rng);
        b += partition.step(j).sqrt() * z;
        values.push(b);
    }
    BrownianPath {
        partition: partition.clone(),
        values,
    }
}

/// Sample statistics of one increment across many paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementMoments {
    pub mean: f64,
    /// Population variance (divides by the sample count).
    pub variance: f64,
    /// Raw fourth moment `mean(dB^4)`.
    pub fourth_moment: f64,
    pub samples: usize,
}

/// Moments of `B(t_{j+1}) - B(t_j)` across `paths`.
pub fn increment_moments(paths: &[BrownianPath], j: usize) -> Result<IncrementMoments> {
    let Some(first) = paths.first() else {
        return invalid("increment_moments needs at least one path");
    };
    if paths.iter().any(|p| p.partition() != first.partition()) {
        return invalid("all paths must share one partition");
    }
    if j >= first.len() {
        return invalid(format!("increment index {j} out of range"));
    }
    let incs: Vec<f64> = paths.iter().map(|p| p.increment(j)).collect();
    Ok(moments_of(&incs))
}

pub(crate) fn moments_of(xs: &[f64]) -> IncrementMoments {
    use crate::compensated::compensated_sum;
    let m = xs.len() as f64;
    let mean = compensated_sum(xs.iter().copied()) / m;
    let variance = compensated_sum(xs.iter().map(|x| (x - mean) * (x - mean))) / m;
    let fourth_moment = compensated_sum(xs.iter().map(|x| x.powi(4))) / m;
    IncrementMoments {
        mean,
        variance,
        fourth_moment,
        samples: xs.len(),
    }
}
