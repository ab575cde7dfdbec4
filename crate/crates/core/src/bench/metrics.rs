use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{hash_words, NoiseParams, QueryStats};
use crate::ranking::{dislocation_distance, max_dislocation, score, Ranking, Score, Tournament};
use crate::stats::binomial_le;

/// Quality and cost of one solver output against the hidden truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    /// `sum_i |sigma(i) - pi(i)|`.
    pub sum_dislocation: u64,
    /// `max_i |sigma(i) - pi(i)|`.
    pub max_dislocation: u64,
    pub score_out: Score,
    pub score_truth: Score,
    pub distinct_queries: u64,
    pub total_accesses: u64,
    pub wall_time_ms: u64,
}

/// Compares `sigma` with the truth `pi` on tournament `q`. `wall_time_ms`
/// is left at 0.
pub fn evaluate<T: Tournament + ?Sized>(
    sigma: &Ranking,
    pi: &Ranking,
    q: &T,
    counters: QueryStats,
) -> Result<Metrics> {
    Ok(Metrics {
        sum_dislocation: dislocation_distance(sigma, pi)?,
        max_dislocation: max_dislocation(sigma, pi)?,
        score_out: score(q, sigma)?,
        score_truth: score(q, pi)?,
        distinct_queries: counters.distinct_queries,
        total_accesses: counters.total_accesses,
        wall_time_ms: 0,
    })
}

/// Outcome of [`beat_probability_check`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeatCheck {
    /// Fraction of trials in which the permutation scored at least as well
    /// as the identity.
    pub empirical_rate: f64,
    /// `P[Bin(m, 1/2 + gamma) <= m/2]`.
    pub exact_tail: f64,
    /// Standard error of `empirical_rate` under the exact tail.
    pub std_error: f64,
}

impl BeatCheck {
    /// Whether the empirical rate lies within `sigmas` standard errors of the
    /// exact tail.
    pub fn within(&self, sigmas: f64) -> bool {
        (self.empirical_rate - self.exact_tail).abs() <= sigmas * self.std_error
    }
}

/// A permutation of the fewest items with exactly `m` inversions: its order
/// has Lehmer code `(n-1, n-2, ..., r, 0, ..., 0)`.
pub fn permutation_with_inversions(m: u64) -> Ranking {
    let mut n = 1usize;
    while ((n * (n - 1)) / 2) < m as usize {
        n += 1;
    }
    let mut rest: Vec<usize> = (0..n).collect();
    let mut left = m as usize;
    let mut order = Vec::with_capacity(n);
    for i in 0..n {
        let c = left.min(n - 1 - i);
        left -= c;
        order.push(rest.remove(c));
    }
    Ranking::from_order(order).expect("a permutation")
}

/// Simulates whether a fixed permutation that disagrees with the identity on
/// exactly `m` pairs scores at least as well as the identity, under `trials`
/// fresh noisy tournaments over the identity.
pub fn beat_probability_check(gamma: f64, m: u64, trials: u64, seed: u64) -> Result<BeatCheck> {
    if m == 0 || trials == 0 {
        return Err(Error::InvalidParams("m and trials must be positive".into()));
    }
    NoiseParams::new(gamma, seed)?;
    let sigma = permutation_with_inversions(m);
    let identity = Ranking::identity(sigma.len());
    let mut beats = 0u64;
    for trial in 0..trials {
        let noise = NoiseParams::new(gamma, hash_words(&[seed, m, trial]))?;
        let q = NoisyView {
            truth: &identity,
            noise,
        };
        if score(&q, &sigma)? >= score(&q, &identity)? {
            beats += 1;
        }
    }
    let exact_tail = binomial_le(m, 0.5 + gamma, m as f64 / 2.0);
    Ok(BeatCheck {
        empirical_rate: beats as f64 / trials as f64,
        exact_tail,
        std_error: (exact_tail * (1.0 - exact_tail) / trials as f64).sqrt(),
    })
}

struct NoisyView<'a> {
    truth: &'a Ranking,
    noise: NoiseParams,
}

impl Tournament for NoisyView<'_> {
    fn len(&self) -> usize {
        self.truth.len()
    }

    fn query(&self, i: usize, j: usize) -> i8 {
        self.noise.outcome(self.truth, i, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ranking::{induced_queries, inversions};

    #[test]
    fn identical_rankings() {
        let pi = Ranking::from_order(vec![2, 0, 1, 3]).unwrap();
        let q = induced_queries(&pi);
        let m = evaluate(&pi, &pi, &q, QueryStats::default()).unwrap();
        assert_eq!(m.sum_dislocation, 0);
        assert_eq!(m.max_dislocation, 0);
        assert_eq!(m.score_out, m.score_truth);
    }

    #[test]
    fn reversal_of_three() {
        let pi = Ranking::identity(3);
        let q = induced_queries(&pi);
        let m = evaluate(&pi.reversed(), &pi, &q, QueryStats::default()).unwrap();
        assert_eq!((m.sum_dislocation, m.max_dislocation), (4, 2));
        assert_eq!(m.score_out, Score(-3));
    }

    #[test]
    fn size_mismatch() {
        let q = induced_queries(&Ranking::identity(3));
        assert!(evaluate(&Ranking::identity(3), &Ranking::identity(4), &q, QueryStats::default()).is_err());
    }

    #[test]
    fn lehmer_permutations_have_the_requested_inversions() {
        for m in 0..200 {
            let sigma = permutation_with_inversions(m);
            assert_eq!(inversions(&sigma), m);
            let n = sigma.len() as u64;
            assert!(n * (n - 1) / 2 >= m);
            assert!(n == 1 || (n - 1) * (n - 2) / 2 < m);
        }
    }

    /// `sum_{j <= m/2} C(m, j) p^j (1-p)^(m-j)` by direct summation.
    fn tail_by_summation(m: u64, p: f64) -> f64 {
        let mut total = 0.0;
        let mut coeff = 1.0f64;
        for j in 0..=m {
            if 2 * j <= m {
                total += coeff * p.powi(j as i32) * (1.0 - p).powi((m - j) as i32);
            }
            coeff = coeff * (m - j) as f64 / (j + 1) as f64;
        }
        total
    }

    #[test]
    fn exact_tail_matches_summation() {
        for gamma in [0.1, 0.25, 0.4] {
            for m in [1, 2, 5, 20, 100] {
                let c = beat_probability_check(gamma, m, 1, 0).unwrap();
                let want = tail_by_summation(m, 0.5 + gamma);
                assert!((c.exact_tail - want).abs() < 1e-12, "{gamma} {m}");
            }
        }
        let c = beat_probability_check(0.25, 1, 1, 0).unwrap();
        assert!((c.exact_tail - 0.25).abs() < 1e-15);
    }

    #[test]
    fn noiseless_never_beats() {
        for m in [1, 3, 20] {
            let c = beat_probability_check(0.5, m, 200, 9).unwrap();
            assert_eq!(c.empirical_rate, 0.0);
        }
    }

    #[test]
    fn one_pair_flips_a_quarter_of_the_time() {
        let c = beat_probability_check(0.25, 1, 10_000, 4).unwrap();
        assert!(c.within(3.0), "{c:?}");
    }

    #[test]
    fn domain_errors() {
        assert!(beat_probability_check(0.25, 0, 10, 0).is_err());
        assert!(beat_probability_check(0.25, 3, 0, 0).is_err());
        assert!(beat_probability_check(0.7, 3, 10, 0).is_err());
    }
}
