//! Rankings, comparison tables and the score functional.
//!
//! Items are indexed `0..n`. A [`Ranking`] maps each item to a rank, larger
//! rank meaning larger element. Ranks are 0-based everywhere in the library;
//! file formats convert to 1-based at the boundary.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `n` items.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    rank_of: Vec<usize>,
    order: Vec<usize>,
}

impl Ranking {
    pub fn identity(n: usize) -> Self {
        Ranking {
            rank_of: (0..n).collect(),
            order: (0..n).collect(),
        }
    }

    /// Builds a ranking from `rank_of[item] = rank`.
    pub fn from_ranks(rank_of: Vec<usize>) -> Result<Self> {
        let order = invert(&rank_of)?;
        Ok(Ranking { rank_of, order })
    }

    /// Builds a ranking from `order[rank] = item`, smallest element first.
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let rank_of = invert(&order)?;
        Ok(Ranking { rank_of, order })
    }

    pub fn len(&self) -> usize {
        self.rank_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank_of.is_empty()
    }

    /// Rank of `item`.
    #[inline]
    pub fn rank(&self, item: usize) -> usize {
        self.rank_of[item]
    }

    /// Item holding `rank`.
    #[inline]
    pub fn item_at(&self, rank: usize) -> usize {
        self.order[rank]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank_of
    }

    /// Items from smallest to largest.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }

    /// The ranking with every comparison flipped: `rank(i) -> n - 1 - rank(i)`.
    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        let n = self.len();
        Ranking {
            rank_of: self.rank_of.iter().map(|&r| n - 1 - r).collect(),
            order,
        }
    }
}

impl fmt::Debug for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Ranking").field(&self.rank_of).finish()
    }
}

fn invert(perm: &[usize]) -> Result<Vec<usize>> {
    let n = perm.len();
    let mut inv = vec![usize::MAX; n];
    for (i, &p) in perm.iter().enumerate() {
        if p >= n {
            return Err(Error::NotPermutation {
                n,
                reason: format!("entry {p} at index {i} is out of range"),
            });
        }
        if inv[p] != usize::MAX {
            return Err(Error::NotPermutation {
                n,
                reason: format!("entry {p} appears twice"),
            });
        }
        inv[p] = i;
    }
    Ok(inv)
}

/// Advances `perm` to the next permutation in lexicographic order.
/// Returns `false` (leaving `perm` sorted ascending) after the last one.
pub fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        perm.reverse();
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Score of a ranking: agreeing pairs minus upsets.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Score(pub i64);

impl Score {
    /// Largest attainable score for `n` items, `n(n-1)/2`.
    pub fn max_for(n: usize) -> Score {
        Score(pairs(n) as i64)
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[inline]
pub(crate) fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Anything that answers pairwise comparisons.
///
/// `query(i, j)` is `+1` when item `i` is reported larger than item `j` and
/// `-1` otherwise; implementations guarantee `query(i, j) == -query(j, i)`.
pub trait Tournament {
    fn len(&self) -> usize;

    fn query(&self, i: usize, j: usize) -> i8;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    fn beats(&self, i: usize, j: usize) -> bool {
        self.query(i, j) > 0
    }
}

impl<T: Tournament + ?Sized> Tournament for &T {
    fn len(&self) -> usize {
        (**self).len()
    }

    #[inline]
    fn query(&self, i: usize, j: usize) -> i8 {
        (**self).query(i, j)
    }
}

/// A complete antisymmetric table of comparison outcomes.
///
/// One bit per unordered pair `{i, j}` with `i > j`; a set bit means
/// `q(a_i, a_j) = +`.
#[derive(Clone, PartialEq, Eq)]
pub struct QueryTable {
    n: usize,
    bits: Vec<u64>,
}

#[inline]
fn tri_index(hi: usize, lo: usize) -> usize {
    hi * (hi - 1) / 2 + lo
}

impl QueryTable {
    /// Builds a table from `larger_beats(i, j)`, called once per pair with `i > j`,
    /// returning whether `a_i` wins against `a_j`.
    pub fn from_fn(n: usize, mut larger_beats: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = vec![0u64; pairs(n).div_ceil(64)];
        for i in 1..n {
            for j in 0..i {
                if larger_beats(i, j) {
                    let idx = tri_index(i, j);
                    bits[idx / 64] |= 1 << (idx % 64);
                }
            }
        }
        QueryTable { n, bits }
    }

    /// Materializes any tournament into a table.
    pub fn from_tournament<T: Tournament + ?Sized>(t: &T) -> Self {
        Self::from_fn(t.len(), |i, j| t.beats(i, j))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Checked lookup of `q(a_i, a_j)`.
    pub fn get(&self, i: usize, j: usize) -> Result<i8> {
        if i == j || i >= self.n || j >= self.n {
            return Err(Error::InvalidPair { i, j, n: self.n });
        }
        Ok(self.sign(i, j))
    }

    /// Sets `q(a_i, a_j) = sign` (and the mirrored entry).
    pub fn set(&mut self, i: usize, j: usize, sign: i8) -> Result<()> {
        if i == j || i >= self.n || j >= self.n {
            return Err(Error::InvalidPair { i, j, n: self.n });
        }
        let (hi, lo, hi_wins) = if i > j {
            (i, j, sign > 0)
        } else {
            (j, i, sign < 0)
        };
        let idx = tri_index(hi, lo);
        if hi_wins {
            self.bits[idx / 64] |= 1 << (idx % 64);
        } else {
            self.bits[idx / 64] &= !(1 << (idx % 64));
        }
        Ok(())
    }

    #[inline]
    fn sign(&self, i: usize, j: usize) -> i8 {
        let (hi, lo, flip) = if i > j { (i, j, 1) } else { (j, i, -1) };
        let idx = tri_index(hi, lo);
        let bit = (self.bits[idx / 64] >> (idx % 64)) & 1;
        if bit == 1 {
            flip
        } else {
            -flip
        }
    }

    /// The table with every outcome reversed.
    pub fn negated(&self) -> Self {
        let mut bits: Vec<u64> = self.bits.iter().map(|w| !w).collect();
        let used = pairs(self.n) % 64;
        if used != 0 {
            if let Some(last) = bits.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
        QueryTable { n: self.n, bits }
    }

    /// Net wins of each item: `sum_j q(a_i, a_j)`.
    pub fn net_wins(&self) -> Vec<i64> {
        let mut w = vec![0i64; self.n];
        for i in 1..self.n {
            for j in 0..i {
                let s = self.sign(i, j) as i64;
                w[i] += s;
                w[j] -= s;
            }
        }
        w
    }
}

impl Tournament for QueryTable {
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn query(&self, i: usize, j: usize) -> i8 {
        debug_assert!(i != j && i < self.n && j < self.n);
        self.sign(i, j)
    }
}

impl fmt::Debug for QueryTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QueryTable(n={})", self.n)
    }
}

/// Score of the items listed in `order` (smallest first) against `t`.
pub fn score_order<T: Tournament + ?Sized>(t: &T, order: &[usize]) -> i64 {
    let mut s = 0i64;
    for (hi_pos, &hi) in order.iter().enumerate() {
        for &lo in &order[..hi_pos] {
            s += t.query(hi, lo) as i64;
        }
    }
    s
}

/// `s_q(sigma)`: the sum over unordered pairs of the outcome oriented by
/// `sigma`, i.e. agreeing pairs minus upsets.
pub fn score<T: Tournament + ?Sized>(q: &T, sigma: &Ranking) -> Result<Score> {
    if q.len() != sigma.len() {
        return Err(Error::SizeMismatch {
            left: q.len(),
            right: sigma.len(),
        });
    }
    Ok(Score(score_order(q, sigma.order())))
}

/// `sum_i |sigma(i) - tau(i)|`.
pub fn dislocation_distance(sigma: &Ranking, tau: &Ranking) -> Result<u64> {
    check_len(sigma.len(), tau.len())?;
    Ok(sigma
        .ranks()
        .iter()
        .zip(tau.ranks())
        .map(|(&a, &b)| a.abs_diff(b) as u64)
        .sum())
}

/// `max_i |sigma(i) - tau(i)|`.
pub fn max_dislocation(sigma: &Ranking, tau: &Ranking) -> Result<u64> {
    check_len(sigma.len(), tau.len())?;
    Ok(sigma
        .ranks()
        .iter()
        .zip(tau.ranks())
        .map(|(&a, &b)| a.abs_diff(b) as u64)
        .max()
        .unwrap_or(0))
}

/// Number of unordered pairs on which two tables disagree.
pub fn disagreement_distance(q: &QueryTable, q2: &QueryTable) -> Result<u64> {
    check_len(q.len(), q2.len())?;
    let used = pairs(q.n);
    let mut count = 0u64;
    for (w, (a, b)) in q.bits.iter().zip(&q2.bits).enumerate() {
        let mut diff = a ^ b;
        let lo_bit = w * 64;
        if lo_bit + 64 > used {
            let keep = used - lo_bit;
            diff &= if keep == 64 { !0 } else { (1u64 << keep) - 1 };
        }
        count += diff.count_ones() as u64;
    }
    Ok(count)
}

/// The noiseless table consistent with `pi`: `q(a_i, a_j) = +` iff `pi(i) > pi(j)`.
pub fn induced_queries(pi: &Ranking) -> QueryTable {
    QueryTable::from_fn(pi.len(), |i, j| pi.rank(i) > pi.rank(j))
}

/// Number of pairs ordered differently by `tau` and the identity.
pub fn inversions(tau: &Ranking) -> u64 {
    let r = tau.ranks();
    let mut count = 0;
    for i in 0..r.len() {
        for j in (i + 1)..r.len() {
            if r[i] > r[j] {
                count += 1;
            }
        }
    }
    count
}

fn check_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::SizeMismatch { left: a, right: b });
    }
    Ok(())
}
