//! Equal partitions of `[0, T]`, deletion-count rules and deletion sets.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Grid `0 = t_0 < t_1 < ... < t_n = T` with equal spacing.
///
/// Nodes are shared, so clones are cheap.
#[derive(Debug, Clone)]
pub struct Partition {
    horizon: f64,
    nodes: Arc<[f64]>,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.horizon == other.horizon && (Arc::ptr_eq(&self.nodes, &other.nodes) || self.nodes == other.nodes)
    }
}

impl Partition {
    /// Equal partition of `[0, horizon]` into `n` cells. Node `j` is computed
    /// as `j * T / n` directly, so rounding does not accumulate along the grid.
    pub fn equal(horizon: f64, n: usize) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return invalid(format!("horizon must be positive and finite, got {horizon}"));
        }
        if n == 0 {
            return invalid("partition needs at least one subinterval");
        }
        let nf = n as f64;
        let mut nodes: Vec<f64> = (0..=n).map(|j| j as f64 * horizon / nf).collect();
        nodes[n] = horizon;
        Ok(Self {
            horizon,
            nodes: nodes.into(),
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of subintervals.
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `t_{j+1} - t_j`.
    #[inline]
    pub fn step(&self, j: usize) -> f64 {
        self.nodes[j + 1] - self.nodes[j]
    }

    pub fn mesh(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }
}

/// Shorthand for [`Partition::equal`].
pub fn make_equal_partition(horizon: f64, n: usize) -> Result<Partition> {
    Partition::equal(horizon, n)
}

/// Deletion count `K(n) = floor(n^r)`, with `r = 0` meaning no deletion.
pub fn k_of_n(n: usize, r: f64) -> Result<usize> {
    if n == 0 {
        return invalid("n must be positive");
    }
    if !(0.0..1.0).contains(&r) {
        return invalid(format!("r must lie in [0, 1), got {r}"));
    }
    if r == 0.0 {
        return Ok(0);
    }
    let p = (n as f64).powf(r);
    // powf can land a hair below an exact integer power (e.g. 10^6^0.5).
    let k = (p * (1.0 + 4.0 * f64::EPSILON)).floor() as usize;
    // n^r < n whenever n >= 2; only n = 1 needs the clamp.
    debug_assert!(n == 1 || k < n);
    Ok(k.min(n - 1))
}

/// Rule selecting which `K` summation indices are removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// First `K` indices.
    Begin,
    /// `K` indices uniformly at random without replacement.
    Random,
    /// Last `K` indices.
    End,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Begin, Strategy::Random, Strategy::End];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Begin => "begin",
            Strategy::Random => "random",
            Strategy::End => "end",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "begin" | "b" => Ok(Strategy::Begin),
            "random" | "r" => Ok(Strategy::Random),
            "end" | "e" => Ok(Strategy::End),
            other => invalid(format!("unknown strategy {other:?} (expected begin|random|end)")),
        }
    }
}

/// Sorted set of deleted summation indices `J_K` within `{0, ..., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletionSet {
    n: usize,
    indices: Vec<usize>,
    strategy: Strategy,
}

impl DeletionSet {
    /// The empty deletion: the complete sum over all `n` terms.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            indices: Vec::new(),
            strategy: Strategy::Begin,
        }
    }

    /// Builds a deletion set from explicit indices. Indices are sorted and
    /// must be distinct and `< n`; at least one index must remain.
    pub fn from_indices(n: usize, mut indices: Vec<usize>, strategy: Strategy) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return invalid("deletion indices must be distinct");
        }
        if indices.last().is_some_and(|&i| i >= n) {
            return invalid(format!("deletion index out of range for n = {n}"));
        }
        if indices.len() >= n {
            return invalid(format!("K = {} must be < n = {n}", indices.len()));
        }
        Ok(Self { n, indices, strategy })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Cardinality `K`.
    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    /// Boolean mask of length `n`, `true` at deleted indices.
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for &i in &self.indices {
            mask[i] = true;
        }
        mask
    }

    /// Indices in `J \ J_K`, ascending.
    pub fn kept(&self) -> impl Iterator<Item = usize> + '_ {
        let mut next = self.indices.iter().copied().peekable();
        (0..self.n).filter(move |&j| {
            if next.peek() == Some(&j) {
                next.next();
                false
            } else {
                true
            }
        })
    }
}

/// Deletion set of size `k` chosen by `strategy`. `seed` only matters for
/// [`Strategy::Random`].
pub fn deletion_set(n: usize, k: usize, strategy: Strategy, seed: u64) -> Result<DeletionSet> {
    if n == 0 {
        return invalid("n must be positive");
    }
    if k >= n {
        return invalid(format!("K = {k} must be < n = {n}"));
    }
    let indices = match strategy {
        _ if k == 0 => Vec::new(),
        Strategy::Begin => (0..k).collect(),
        Strategy::End => (n - k..n).collect(),
        Strategy::Random => sample_without_replacement(n, k, seed),
    };
    Ok(DeletionSet { n, indices, strategy })
}

fn sample_without_replacement(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let take = if 2 * k <= n { k } else { n - k };

    // Partial Fisher–Yates: the first `take` slots end up a uniform sample.
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..take {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }

    let mut chosen = if take == k {
        pool.truncate(k);
        pool
    } else {
        let mut skip = vec![false; n];
        for &i in &pool[..take] {
            skip[i] = true;
        }
        (0..n).filter(|&i| !skip[i]).collect()
    };
    chosen.sort_unstable();
    chosen
}

/// `C(n, K) * (2^K - 1)`: the number of incomplete sums counted for a fixed
/// maximal deletion size `K`.
pub fn count_incomplete_sums(n: usize, k: usize) -> Result<BigUint> {
    if k == 0 || k >= n {
        return invalid(format!("need 0 < K < n, got n = {n}, K = {k}"));
    }
    let mersenne = (BigUint::one() << k) - BigUint::one();
    Ok(binomial(n, k) * mersenne)
}

/// `sum_{k=1}^{K} C(n, k)`: the number of distinct nonempty deletion sets of
/// size at most `K`. Differs from [`count_incomplete_sums`] in general.
pub fn count_deletion_subsets(n: usize, k: usize) -> Result<BigUint> {
    if k == 0 || k >= n {
        return invalid(format!("need 0 < K < n, got n = {n}, K = {k}"));
    }
    Ok((1..=k).map(|i| binomial(n, i)).sum())
}

/// Exact binomial coefficient by the multiplicative formula; each partial
/// product `C(n, i)` is an integer, so the division is exact.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}
