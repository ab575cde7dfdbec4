//! Optimal re-sorting of a presorted list.
//!
//! Given a working order and a window `k`, finds the best ordering among all
//! orderings that move every element at most `k` positions. If some optimal
//! ranking lies within that window of the input, the result is optimal.
//!
//! The list is split recursively into halves (at `ceil(len / 2)`). For an
//! interval `I = [lo, hi]` of output positions, the set of elements that land
//! in `I` contains every input position of `I- = [lo + k, hi - k]` and is
//! contained in `I+ = [lo - k, hi + k]`. A candidate set is therefore a
//! bitmask over the boundary zone `I+ \ I-` (at most `4k` positions) with the
//! `I-` elements implicit. Each node stores, for every candidate set, the
//! best ordering found, as back-pointers into its children.
//!
//! Two elements whose input positions differ by more than `2k` can never
//! swap, so their pair contributes the same amount to every ordering in the
//! search space. Node values only count pairs within distance `2k`; the merge
//! of two halves then only inspects pairs around the split point.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ranking::{score_order, Ranking, Score, Tournament};

const NONE: u32 = u32::MAX;

/// Largest boundary zone a node may have (bits of a `u64` key).
const MAX_ZONE: usize = 64;
/// Largest merge frame (bits of a `u128` mask).
const MAX_FRAME: usize = 128;

#[derive(Clone, Copy, Debug)]
struct Entry {
    key: u64,
    value: i64,
    left: u32,
    right: u32,
}

/// Work counters for one call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DpStats {
    pub intervals: usize,
    pub max_candidates: usize,
    pub total_candidates: usize,
    pub split_evaluations: u64,
}

impl DpStats {
    fn absorb(&mut self, other: &DpStats) {
        self.intervals += other.intervals;
        self.max_candidates = self.max_candidates.max(other.max_candidates);
        self.total_candidates += other.total_candidates;
        self.split_evaluations += other.split_evaluations;
    }
}

/// Solved interval of output positions `[lo, hi]`.
#[derive(Debug)]
pub struct IntervalNode {
    pub lo: usize,
    pub hi: usize,
    /// Mandatory input positions `I-` as a half-open range (possibly empty).
    pub core: (usize, usize),
    /// Input positions of `I+ \ I-`, ascending; bit `b` of a key is `zone[b]`.
    pub zone: Vec<usize>,
    entries: Vec<Entry>,
    index: HashMap<u64, u32>,
    children: Option<Box<(IntervalNode, IntervalNode)>>,
    stats: DpStats,
}

impl IntervalNode {
    pub fn len(&self) -> usize {
        self.hi + 1 - self.lo
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn candidate_count(&self) -> usize {
        self.entries.len()
    }

    /// Work counters for the subtree rooted here.
    pub fn stats(&self) -> DpStats {
        self.stats
    }

    /// Input positions of the candidate set encoded by `key`, ascending.
    pub fn positions(&self, key: u64) -> Vec<usize> {
        let mut out: Vec<usize> = (self.core.0..self.core.1).collect();
        out.extend(
            self.zone
                .iter()
                .enumerate()
                .filter(|(b, _)| key >> b & 1 == 1)
                .map(|(_, &p)| p),
        );
        out.sort_unstable();
        out
    }

    /// Every candidate set with the value of its best ordering (pairs within
    /// distance `2k` only).
    pub fn candidates(&self) -> impl Iterator<Item = (Vec<usize>, i64)> + '_ {
        self.entries
            .iter()
            .map(|e| (self.positions(e.key), e.value))
    }

    /// Best ordering (input positions, smallest first) for candidate `key`.
    pub fn best_order(&self, key: u64) -> Option<Vec<usize>> {
        let &idx = self.index.get(&key)?;
        let mut out = Vec::with_capacity(self.len());
        self.emit(idx, &mut out);
        Some(out)
    }

    fn emit(&self, idx: u32, out: &mut Vec<usize>) {
        let e = self.entries[idx as usize];
        match &self.children {
            None => {
                if self.core.0 < self.core.1 {
                    out.push(self.core.0);
                } else {
                    out.push(self.zone[e.key.trailing_zeros() as usize]);
                }
            }
            Some(ch) => {
                ch.0.emit(e.left, out);
                ch.1.emit(e.right, out);
            }
        }
    }
}

/// Output of [`resort_window`].
#[derive(Clone, Debug)]
pub struct Resorted {
    /// The new order of the input items.
    pub order: Vec<usize>,
    /// Score gained over the input order.
    pub gain: i64,
    pub stats: DpStats,
}

fn geometry(lo: usize, hi: usize, k: usize, m: usize) -> ((usize, usize), Vec<usize>) {
    let plus_lo = lo.saturating_sub(k);
    let plus_hi = (hi + k).min(m - 1);
    let core = if hi >= k && lo + k <= hi - k {
        (lo + k, hi - k + 1)
    } else {
        (0, 0)
    };
    let zone = (plus_lo..=plus_hi)
        .filter(|p| !(core.0..core.1).contains(p))
        .collect();
    (core, zone)
}

/// All `u64` masks over `width` bits with exactly `ones` bits set, ascending.
fn combinations(width: usize, ones: usize, mut f: impl FnMut(u64)) {
    if ones > width {
        return;
    }
    if ones == 0 {
        f(0);
        return;
    }
    let limit: u128 = 1u128 << width;
    let mut c: u128 = (1u128 << ones) - 1;
    while c < limit {
        f(c as u64);
        let low = c & c.wrapping_neg();
        let ripple = c + low;
        c = (((ripple ^ c) >> 2) / low) | ripple;
    }
}

fn check_window(m: usize, k: usize) -> Result<()> {
    if (4 * k).min(m) > MAX_ZONE || (10 * k).min(m) > MAX_FRAME {
        return Err(Error::InvalidParams(format!(
            "window {k} is too large for a list of {m} items"
        )));
    }
    Ok(())
}

/// Base case: one output position, filled by any element within `k` of it.
pub fn leaf_node(m: usize, pos: usize, k: usize) -> IntervalNode {
    let (core, zone) = geometry(pos, pos, k, m);
    let mut node = IntervalNode {
        lo: pos,
        hi: pos,
        core,
        zone,
        entries: Vec::new(),
        index: HashMap::new(),
        children: None,
        stats: DpStats::default(),
    };
    let need = 1 - (core.1 - core.0);
    combinations(node.zone.len(), need, |key| {
        node.index.insert(key, node.entries.len() as u32);
        node.entries.push(Entry {
            key,
            value: 0,
            left: NONE,
            right: NONE,
        });
    });
    node.stats = DpStats {
        intervals: 1,
        max_candidates: node.entries.len(),
        total_candidates: node.entries.len(),
        split_evaluations: 0,
    };
    node
}

#[inline]
fn bit_index(frame: &[usize], pos: usize) -> u8 {
    frame.binary_search(&pos).expect("position in frame") as u8
}

#[inline]
fn gather(mask: u128, bits: &[u8]) -> u64 {
    bits.iter()
        .enumerate()
        .fold(0u64, |acc, (b, &f)| acc | (((mask >> f) & 1) as u64) << b)
}

#[inline]
fn scatter(key: u64, bits: &[u8]) -> u128 {
    let mut out = 0u128;
    let mut rest = key;
    while rest != 0 {
        let b = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= 1u128 << bits[b];
    }
    out
}

/// Combines two adjacent solved halves into their parent interval.
///
/// For every admissible parent set `S`, tries every way of splitting the
/// elements that may fall on either side of the split point, looks up the
/// best orders of the two halves, and adds the score of the pairs that cross.
pub fn merge_halves<T: Tournament + ?Sized>(
    q: &T,
    order: &[usize],
    k: usize,
    left: IntervalNode,
    right: IntervalNode,
) -> IntervalNode {
    assert_eq!(left.hi + 1, right.lo, "halves must be adjacent");
    let m = order.len();
    let (lo, hi, mid) = (left.lo, right.hi, right.lo);
    let (core, zone) = geometry(lo, hi, k, m);

    // Positions that can interact across the split.
    let w_lo = mid.saturating_sub(3 * k).max(lo.saturating_sub(k));
    let w_hi = (mid + 3 * k).min(hi + k + 1).min(m);
    let mut frame: Vec<usize> = zone
        .iter()
        .chain(&left.zone)
        .chain(&right.zone)
        .copied()
        .chain(w_lo..w_hi)
        .collect();
    frame.sort_unstable();
    frame.dedup();
    debug_assert!(frame.len() <= MAX_FRAME);

    let pz: Vec<u8> = zone.iter().map(|&p| bit_index(&frame, p)).collect();
    let lz: Vec<u8> = left.zone.iter().map(|&p| bit_index(&frame, p)).collect();
    let rz: Vec<u8> = right.zone.iter().map(|&p| bit_index(&frame, p)).collect();

    let mut core_frame = 0u128;
    let mut swing = 0u128;
    let mut below = 0u128;
    let mut above = 0u128;
    let mut window = 0u128;
    for (b, &p) in frame.iter().enumerate() {
        let bit = 1u128 << b;
        if (core.0..core.1).contains(&p) {
            core_frame |= bit;
        }
        if p + k < mid {
            below |= bit;
        } else if p >= mid + k {
            above |= bit;
        } else {
            swing |= bit;
        }
        if (w_lo..w_hi).contains(&p) {
            window |= bit;
        }
    }
    let left_zone_mask = lz.iter().fold(0u128, |acc, &b| acc | 1u128 << b);

    // Pairwise outcomes among window positions within distance 2k.
    let mut near = vec![0u128; frame.len()];
    let mut wins = vec![0u128; frame.len()];
    for a in 0..frame.len() {
        if window >> a & 1 == 0 {
            continue;
        }
        for b in (a + 1)..frame.len() {
            if window >> b & 1 == 0 || frame[b] - frame[a] > 2 * k {
                continue;
            }
            near[a] |= 1u128 << b;
            near[b] |= 1u128 << a;
            if q.beats(order[frame[b]], order[frame[a]]) {
                wins[b] |= 1u128 << a;
            } else {
                wins[a] |= 1u128 << b;
            }
        }
    }

    let need_parent = (hi + 1 - lo) - (core.1 - core.0);
    let need_left = left.len() - (left.core.1 - left.core.0);
    let mut entries = Vec::new();
    let mut index = HashMap::new();
    let mut evaluations = 0u64;
    let mut swing_bits: Vec<u8> = Vec::with_capacity(2 * k);

    combinations(zone.len(), need_parent, |key| {
        let s = core_frame | scatter(key, &pz);
        let fixed_l = s & below;
        let fixed_r = s & above;
        let sw = s & swing;
        let fixed_left_keys = (fixed_l & left_zone_mask).count_ones() as usize;
        if fixed_left_keys > need_left {
            return;
        }
        let need_sw = need_left - fixed_left_keys;
        swing_bits.clear();
        let mut rest = sw;
        while rest != 0 {
            swing_bits.push(rest.trailing_zeros() as u8);
            rest &= rest - 1;
        }
        let mut best: Option<Entry> = None;
        combinations(swing_bits.len(), need_sw, |pick| {
            let x = scatter(pick, &swing_bits);
            let l = fixed_l | x;
            let r = fixed_r | (sw & !x);
            let (Some(&li), Some(&ri)) = (left.index.get(&gather(l, &lz)), right.index.get(&gather(r, &rz)))
            else {
                return;
            };
            evaluations += 1;
            let mut cross = 0i64;
            let mut rw = r & window;
            while rw != 0 {
                let b = rw.trailing_zeros() as usize;
                rw &= rw - 1;
                cross += 2 * (wins[b] & l).count_ones() as i64 - (near[b] & l).count_ones() as i64;
            }
            let value = left.entries[li as usize].value + right.entries[ri as usize].value + cross;
            if best.is_none_or(|b| value > b.value) {
                best = Some(Entry {
                    key,
                    value,
                    left: li,
                    right: ri,
                });
            }
        });
        if let Some(e) = best {
            index.insert(key, entries.len() as u32);
            entries.push(e);
        }
    });

    debug_assert!(k >= 16 || entries.len() <= 1usize << (4 * k));

    let mut stats = left.stats;
    stats.absorb(&right.stats);
    stats.intervals += 1;
    stats.max_candidates = stats.max_candidates.max(entries.len());
    stats.total_candidates += entries.len();
    stats.split_evaluations += evaluations;

    let (mut left, mut right) = (left, right);
    left.index = HashMap::new();
    right.index = HashMap::new();
    IntervalNode {
        lo,
        hi,
        core,
        zone,
        entries,
        index,
        children: Some(Box::new((left, right))),
        stats,
    }
}

/// Solves output positions `[lo, hi]` of `order` recursively.
pub fn solve_interval<T: Tournament + ?Sized>(
    q: &T,
    order: &[usize],
    k: usize,
    lo: usize,
    hi: usize,
) -> IntervalNode {
    if lo == hi {
        return leaf_node(order.len(), lo, k);
    }
    let split = lo + (hi + 1 - lo).div_ceil(2);
    let left = solve_interval(q, order, k, lo, split - 1);
    let right = solve_interval(q, order, k, split, hi);
    merge_halves(q, order, k, left, right)
}

/// Score of `order` counting only pairs at most `2k` positions apart.
fn near_score<T: Tournament + ?Sized>(q: &T, order: &[usize], k: usize) -> i64 {
    let mut s = 0i64;
    for b in 0..order.len() {
        for a in b.saturating_sub(2 * k)..b {
            s += q.query(order[b], order[a]) as i64;
        }
    }
    s
}

/// Re-sorts the items of `order` (smallest first) within window `k`.
///
/// Only pairs at most `2k` apart in `order` are ever compared.
pub fn resort_window<T: Tournament + ?Sized>(q: &T, order: &[usize], k: usize) -> Result<Resorted> {
    let m = order.len();
    let k = k.min(m);
    check_window(m, k)?;
    if m <= 1 || k == 0 {
        return Ok(Resorted {
            order: order.to_vec(),
            gain: 0,
            stats: DpStats::default(),
        });
    }
    let root = solve_interval(q, order, k, 0, m - 1);
    debug_assert_eq!(root.candidate_count(), 1);
    let best = root.entries[0];
    let mut positions = Vec::with_capacity(m);
    root.emit(0, &mut positions);
    let gain = best.value - near_score(q, order, k);
    debug_assert!(gain >= 0);
    Ok(Resorted {
        order: positions.into_iter().map(|p| order[p]).collect(),
        gain,
        stats: root.stats,
    })
}

/// Best ranking with every element within `k` positions of its rank in
/// `initial`; optimal whenever some optimal ranking lies in that window.
/// The returned score is never below `score(q, initial)`.
pub fn sort_presorted<T: Tournament + ?Sized>(
    q: &T,
    initial: &Ranking,
    k: usize,
) -> Result<(Ranking, Score)> {
    if q.len() != initial.len() {
        return Err(Error::SizeMismatch {
            left: q.len(),
            right: initial.len(),
        });
    }
    let r = resort_window(q, initial.order(), k)?;
    let score = Score(score_order(q, &r.order));
    Ok((Ranking::from_order(r.order)?, score))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::optimal_ranking_subset_dp;
    use crate::oracle::{make_noisy_tournament, NoiseParams};
    use crate::ranking::{induced_queries, next_permutation, score, QueryTable};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_table(n: usize, seed: u64) -> QueryTable {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        QueryTable::from_fn(n, |_, _| rng.gen_bool(0.5))
    }

    /// Best score over `{sigma : |sigma(i) - i| <= k}` by enumeration.
    fn windowed_brute_force(q: &QueryTable, k: usize) -> i64 {
        let n = q.len();
        let mut ranks: Vec<usize> = (0..n).collect();
        let mut best = i64::MIN;
        loop {
            if ranks.iter().enumerate().all(|(i, &r)| r.abs_diff(i) <= k) {
                let s = score(q, &Ranking::from_ranks(ranks.clone()).unwrap()).unwrap().0;
                best = best.max(s);
            }
            if !next_permutation(&mut ranks) {
                return best;
            }
        }
    }

    #[test]
    fn combinations_enumerate_binomial_counts() {
        let mut count = 0;
        combinations(12, 6, |m| {
            assert_eq!(m.count_ones(), 6);
            count += 1;
        });
        assert_eq!(count, 924);
        let mut all = Vec::new();
        combinations(64, 1, |m| all.push(m));
        assert_eq!(all.len(), 64);
        let mut zero = 0;
        combinations(3, 0, |_| zero += 1);
        assert_eq!(zero, 1);
    }

    #[test]
    fn zero_window_is_identity() {
        let q = random_table(9, 1);
        let initial = Ranking::from_ranks(vec![3, 1, 4, 0, 5, 8, 2, 6, 7]).unwrap();
        let (r, s) = sort_presorted(&q, &initial, 0).unwrap();
        assert_eq!(r, initial);
        assert_eq!(s, score(&q, &initial).unwrap());
    }

    #[test]
    fn consistent_input_is_kept() {
        let mut v: Vec<usize> = (0..30).collect();
        v.shuffle(&mut ChaCha8Rng::seed_from_u64(4));
        let initial = Ranking::from_ranks(v).unwrap();
        let q = induced_queries(&initial);
        for k in 1..=3 {
            let (r, s) = sort_presorted(&q, &initial, k).unwrap();
            assert_eq!(r, initial);
            assert_eq!(s, Score::max_for(30));
        }
    }

    #[test]
    fn matches_windowed_enumeration() {
        for seed in 0..50 {
            let q = random_table(6, 500 + seed);
            let (r, s) = sort_presorted(&q, &Ranking::identity(6), 2).unwrap();
            assert_eq!(s.0, windowed_brute_force(&q, 2), "seed {seed}");
            assert!(r.ranks().iter().enumerate().all(|(i, &x)| x.abs_diff(i) <= 2));
        }
    }

    #[test]
    fn length_two_interval_orders_by_comparison() {
        let mut q = QueryTable::from_fn(2, |_, _| false);
        q.set(0, 1, 1).unwrap();
        let (r, s) = sort_presorted(&q, &Ranking::identity(2), 1).unwrap();
        assert_eq!(r.order(), &[1, 0]);
        assert_eq!(s, Score(1));
    }

    #[test]
    fn wide_window_matches_subset_dp_per_candidate() {
        // k beyond the interval length: every candidate set's stored value is
        // the optimum of the sub-tournament on that set.
        let q = random_table(10, 77);
        let order: Vec<usize> = (0..10).collect();
        let k = 10;
        let node = solve_interval(&q, &order, k, 2, 7);
        assert!(node.candidate_count() > 1);
        for (set, value) in node.candidates() {
            let sub = QueryTable::from_fn(set.len(), |a, b| q.beats(set[a], set[b]));
            let (_, opt) = optimal_ranking_subset_dp(&sub).unwrap();
            assert_eq!(value, opt.0, "set {set:?}");
        }
    }

    #[test]
    fn agreeing_halves_concatenate() {
        // Left half entirely below the right half in q: the merge keeps them apart.
        let q = induced_queries(&Ranking::identity(8));
        let order: Vec<usize> = vec![1, 0, 3, 2, 5, 4, 7, 6];
        let (r, _) = sort_presorted(&q, &Ranking::from_order(order).unwrap(), 1).unwrap();
        assert_eq!(r, Ranking::identity(8));
    }

    #[test]
    fn full_window_is_exact() {
        for n in 2..=11 {
            for seed in 0..5 {
                let q = random_table(n, 90 * n as u64 + seed);
                let mut v: Vec<usize> = (0..n).collect();
                v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                let initial = Ranking::from_order(v).unwrap();
                let (_, s) = sort_presorted(&q, &initial, n).unwrap();
                assert_eq!(s, optimal_ranking_subset_dp(&q).unwrap().1);
            }
        }
    }

    #[test]
    fn candidate_sets_respect_window() {
        let q = random_table(40, 3);
        let order: Vec<usize> = (0..40).collect();
        let k = 2;
        let node = solve_interval(&q, &order, k, 0, 39);
        fn walk(node: &IntervalNode, k: usize, m: usize) {
            assert!(node.candidate_count() <= 1 << (4 * k));
            for (set, _) in node.candidates() {
                assert_eq!(set.len(), node.len());
                for p in node.lo + k..=node.hi.saturating_sub(k) {
                    if node.lo + k <= node.hi.saturating_sub(k) {
                        assert!(set.contains(&p));
                    }
                }
                let lo = node.lo.saturating_sub(k);
                let hi = (node.hi + k).min(m - 1);
                assert!(set.iter().all(|&p| (lo..=hi).contains(&p)));
            }
            if let Some(ch) = &node.children {
                walk(&ch.0, k, m);
                walk(&ch.1, k, m);
            }
        }
        walk(&node, k, 40);
    }

    #[test]
    fn improves_on_noisy_input() {
        let params = NoiseParams::new(0.2, 5).unwrap();
        let q = make_noisy_tournament(&Ranking::identity(200), &params);
        let initial = Ranking::identity(200);
        let base = score(&q, &initial).unwrap();
        let (r, s) = sort_presorted(&q, &initial, 2).unwrap();
        assert!(s >= base);
        assert_eq!(score(&q, &r).unwrap(), s);
    }

    #[test]
    fn oversized_window_is_rejected() {
        let q = random_table(200, 0);
        assert!(sort_presorted(&q, &Ranking::identity(200), 13).is_err());
    }
}
