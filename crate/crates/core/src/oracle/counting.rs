use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ranking::{pairs, QueryTable, Ranking, Tournament};

use super::NoiseParams;

/// Query counters of a [`CountingOracle`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryStats {
    /// Unordered pairs ever asked.
    pub distinct_queries: u64,
    /// Every ask, repeated or not.
    pub total_accesses: u64,
}

#[derive(Debug)]
enum Source {
    Noisy {
        truth: Ranking,
        params: NoiseParams,
    },
    Table(QueryTable),
}

/// A lazily materialized tournament that counts the comparisons it answers.
///
/// A pair's outcome never changes once drawn: asking `(i, j)` again, or
/// `(j, i)`, returns the same (mirrored) answer and only bumps
/// `total_accesses`. Outcomes are a pure function of the seed and the pair,
/// so the memo only has to remember which pairs were asked.
///
/// Asks may come from several threads; counters are exact once they finish.
#[derive(Debug)]
pub struct CountingOracle {
    source: Source,
    n: usize,
    asked: Vec<AtomicU64>,
    distinct: AtomicU64,
    total: AtomicU64,
}

impl CountingOracle {
    /// Oracle over a tournament generated from `truth` with `params`.
    pub fn new(truth: Ranking, params: NoiseParams) -> Self {
        let n = truth.len();
        Self::with_source(n, Source::Noisy { truth, params })
    }

    /// Oracle that reveals the entries of an existing table.
    pub fn over_table(table: QueryTable) -> Self {
        let n = table.len();
        Self::with_source(n, Source::Table(table))
    }

    fn with_source(n: usize, source: Source) -> Self {
        let words = pairs(n).div_ceil(64);
        CountingOracle {
            source,
            n,
            asked: (0..words).map(|_| AtomicU64::new(0)).collect(),
            distinct: AtomicU64::new(0),
            total: AtomicU64::new(0),
        }
    }

    /// Hidden ground truth, when the oracle was generated from one.
    pub fn truth(&self) -> Option<&Ranking> {
        match &self.source {
            Source::Noisy { truth, .. } => Some(truth),
            Source::Table(_) => None,
        }
    }

    pub fn noise(&self) -> Option<NoiseParams> {
        match &self.source {
            Source::Noisy { params, .. } => Some(*params),
            Source::Table(_) => None,
        }
    }

    /// Checked comparison `q(a_i, a_j)`, counted.
    pub fn ask(&self, i: usize, j: usize) -> Result<i8> {
        if i == j || i >= self.n || j >= self.n {
            return Err(Error::InvalidPair { i, j, n: self.n });
        }
        Ok(self.ask_unchecked(i, j))
    }

    #[inline]
    fn ask_unchecked(&self, i: usize, j: usize) -> i8 {
        self.total.fetch_add(1, Ordering::Relaxed);
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        let idx = hi * (hi - 1) / 2 + lo;
        let bit = 1u64 << (idx % 64);
        let prev = self.asked[idx / 64].fetch_or(bit, Ordering::Relaxed);
        if prev & bit == 0 {
            self.distinct.fetch_add(1, Ordering::Relaxed);
        }
        self.peek(i, j)
    }

    #[inline]
    fn peek(&self, i: usize, j: usize) -> i8 {
        match &self.source {
            Source::Noisy { truth, params } => params.outcome(truth, i, j),
            Source::Table(t) => t.query(i, j),
        }
    }

    /// Whether pair `{i, j}` has been asked.
    pub fn is_asked(&self, i: usize, j: usize) -> bool {
        if i == j || i >= self.n || j >= self.n {
            return false;
        }
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        let idx = hi * (hi - 1) / 2 + lo;
        self.asked[idx / 64].load(Ordering::Relaxed) & (1u64 << (idx % 64)) != 0
    }

    pub fn stats(&self) -> QueryStats {
        QueryStats {
            distinct_queries: self.distinct.load(Ordering::Relaxed),
            total_accesses: self.total.load(Ordering::Relaxed),
        }
    }

    /// A view answering the same comparisons without touching the counters,
    /// for evaluating results after a run.
    pub fn uncounted(&self) -> Uncounted<'_> {
        Uncounted(self)
    }

    /// The full table this oracle would reveal, without counting.
    pub fn to_table(&self) -> QueryTable {
        QueryTable::from_tournament(&self.uncounted())
    }
}

impl Tournament for CountingOracle {
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn query(&self, i: usize, j: usize) -> i8 {
        debug_assert!(i != j && i < self.n && j < self.n);
        self.ask_unchecked(i, j)
    }
}

/// See [`CountingOracle::uncounted`].
#[derive(Clone, Copy, Debug)]
pub struct Uncounted<'a>(&'a CountingOracle);

impl Tournament for Uncounted<'_> {
    fn len(&self) -> usize {
        self.0.n
    }

    #[inline]
    fn query(&self, i: usize, j: usize) -> i8 {
        self.0.peek(i, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::make_noisy_tournament;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn oracle(n: usize, gamma: f64, seed: u64) -> CountingOracle {
        CountingOracle::new(
            Ranking::identity(n),
            NoiseParams::new(gamma, seed).unwrap(),
        )
    }

    #[test]
    fn mirrored_asks_count_once() {
        let o = oracle(10, 0.2, 5);
        let a = o.ask(3, 7).unwrap();
        let b = o.ask(7, 3).unwrap();
        assert_eq!(a, -b);
        assert_eq!(o.stats().distinct_queries, 1);
        assert_eq!(o.stats().total_accesses, 2);
    }

    #[test]
    fn repeated_asks() {
        let o = oracle(10, 0.2, 5);
        let first = o.ask(3, 7).unwrap();
        for _ in 1..1000 {
            assert_eq!(o.ask(3, 7).unwrap(), first);
        }
        assert_eq!(
            o.stats(),
            QueryStats {
                distinct_queries: 1,
                total_accesses: 1000
            }
        );
    }

    #[test]
    fn noiseless_agrees_with_truth() {
        let o = oracle(30, 0.5, 11);
        for i in 0..30 {
            for j in 0..30 {
                if i != j {
                    assert_eq!(o.ask(i, j).unwrap() > 0, i > j);
                }
            }
        }
        assert_eq!(o.stats().distinct_queries, 435);
    }

    #[test]
    fn rejects_bad_pairs() {
        let o = oracle(4, 0.3, 0);
        assert!(matches!(o.ask(2, 2), Err(Error::InvalidPair { .. })));
        assert!(o.ask(0, 4).is_err());
        assert_eq!(o.stats(), QueryStats::default());
    }

    #[test]
    fn matches_eager_generation() {
        let params = NoiseParams::new(0.1, 99).unwrap();
        let truth = Ranking::from_ranks(vec![3, 0, 4, 1, 2]).unwrap();
        let eager = make_noisy_tournament(&truth, &params);
        let o = CountingOracle::new(truth, params);
        assert_eq!(o.to_table(), eager);
        assert_eq!(o.stats(), QueryStats::default());
    }

    #[test]
    fn table_backed_oracle() {
        let params = NoiseParams::new(0.2, 4).unwrap();
        let table = make_noisy_tournament(&Ranking::identity(12), &params);
        let o = CountingOracle::over_table(table.clone());
        assert!(o.truth().is_none());
        assert_eq!(o.ask(5, 2).unwrap(), table.get(5, 2).unwrap());
        assert!(o.is_asked(2, 5));
        assert!(!o.is_asked(2, 6));
    }

    #[test]
    fn concurrent_asks_are_exact() {
        let o = oracle(60, 0.25, 2);
        std::thread::scope(|s| {
            for t in 0..4u64 {
                let o = &o;
                s.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(t);
                    for _ in 0..5000 {
                        let i = rng.gen_range(0..60);
                        let j = rng.gen_range(0..60);
                        if i != j {
                            o.ask(i, j).unwrap();
                        }
                    }
                });
            }
        });
        let asked = (1..60)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .filter(|&(i, j)| o.is_asked(i, j))
            .count();
        assert_eq!(o.stats().distinct_queries, asked as u64);
    }
}
