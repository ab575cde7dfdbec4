use std::ops::Range;

use crate::error::Result;
use crate::oracle::{CountingOracle, QueryStats};
use crate::ranking::{score_order, Ranking, Score, Tournament};

use super::insertion::{run_pipeline, Placement};
use super::params::NswrParams;
use super::{RunReport, Traced};

/// Consecutive intervals `I_1, ..., I_t` covering a working order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    /// `I_s` is `bounds[s - 1]..bounds[s]`.
    bounds: Vec<usize>,
}

impl Partition {
    /// Greedy cuts of `len_max` positions; a final piece shorter than
    /// `len_min` is merged into its predecessor.
    pub fn greedy(m: usize, len_min: usize, len_max: usize) -> Self {
        let len_max = len_max.max(1);
        let mut bounds = vec![0];
        let mut start = 0;
        while start < m {
            let end = (start + len_max).min(m);
            if end - start < len_min && bounds.len() > 1 {
                *bounds.last_mut().unwrap() = end;
            } else {
                bounds.push(end);
            }
            start = end;
        }
        Partition { bounds }
    }

    /// Number of intervals.
    pub fn t(&self) -> usize {
        self.bounds.len() - 1
    }

    /// Positions of `I_s`, `1 <= s <= t`.
    pub fn interval(&self, s: usize) -> Range<usize> {
        self.bounds[s - 1]..self.bounds[s]
    }

    /// `I_s` without `trim` positions at either end; the whole interval when
    /// it is too short to trim.
    pub fn trimmed(&self, s: usize, trim: usize) -> Range<usize> {
        let r = self.interval(s);
        if r.len() > 2 * trim {
            r.start + trim..r.end - trim
        } else {
            r
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkNode {
    /// Interval labels `[lo, hi]`, 1-based.
    pub lo: usize,
    pub hi: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Search tree over interval labels. Children of `[s1, s2]` overlap at the
/// median `s'`: `[s1, s']` and `[s', s2]`. Every leaf `[s, s + 1]` heads a
/// chain of copies of itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkTree {
    pub nodes: Vec<WalkNode>,
}

pub const ROOT: usize = 0;

impl WalkTree {
    pub fn label(&self, v: usize) -> (usize, usize) {
        (self.nodes[v].lo, self.nodes[v].hi)
    }

    pub fn depth(&self, mut v: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.nodes[v].parent {
            v = p;
            d += 1;
        }
        d
    }

    fn push(&mut self, lo: usize, hi: usize, parent: Option<usize>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(WalkNode {
            lo,
            hi,
            parent,
            children: Vec::new(),
        });
        if let Some(p) = parent {
            self.nodes[p].children.push(id);
        }
        id
    }

    fn grow(&mut self, v: usize, chain_len: usize) {
        let (lo, hi) = self.label(v);
        if hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let left = self.push(lo, mid, Some(v));
            self.grow(left, chain_len);
            let right = self.push(mid, hi, Some(v));
            self.grow(right, chain_len);
        } else {
            let mut tail = v;
            for _ in 0..chain_len {
                tail = self.push(lo, hi, Some(tail));
            }
        }
    }
}

/// Tree for `t` intervals. With `t = 1` the root is the degenerate label
/// `[1, 2]`, `I_2` being the sentinel above everything.
pub fn build_walk_tree(t: usize, chain_len: usize) -> WalkTree {
    let mut tree = WalkTree { nodes: Vec::new() };
    let root = tree.push(1, t.max(2), None);
    tree.grow(root, chain_len);
    tree
}

/// Hands out elements of intervals for majority tests, fresh ones first.
struct Draws {
    /// Per interval and trimmed flag: elements handed out so far.
    used: Vec<[usize; 2]>,
    reused: u64,
}

impl Draws {
    fn new(t: usize) -> Self {
        Draws {
            used: vec![[0; 2]; t + 1],
            reused: 0,
        }
    }

    fn take(&mut self, current: &[usize], range: Range<usize>, s: usize, trimmed: bool, k: usize) -> Vec<usize> {
        let len = range.len();
        let k = k.min(len);
        let used = &mut self.used[s][trimmed as usize];
        if *used + k > len {
            self.reused += 1;
        }
        let picked = (0..k).map(|i| current[range.start + (*used + i) % len]).collect();
        *used += k;
        picked
    }
}

fn x_larger<T: Tournament + ?Sized>(q: &T, x: usize, others: &[usize]) -> bool {
    let wins = others.iter().filter(|&&y| q.beats(x, y)).count();
    2 * wins > others.len()
}

/// Walks `tree` for `params.walk_steps` steps and returns the label of the
/// final node, normally a leaf `[s, s + 1]`: `x` belongs to `I_s` or
/// `I_{s+1}`. Each step tests `x` against `majority_k` elements of the
/// trimmed neighbors `I'_{s1-1}` and `I'_{s2+1}` (sentinels always pass),
/// backtracks on failure, and otherwise descends by a majority test against
/// the median interval. The second component counts tests that had to reuse
/// elements.
pub fn insert_tree_walk<T: Tournament + ?Sized>(
    q: &T,
    current: &[usize],
    partition: &Partition,
    tree: &WalkTree,
    x: usize,
    params: &NswrParams,
) -> ((usize, usize), u64) {
    let t = partition.t();
    let k = params.majority_k;
    let trim = params.trim;
    let mut draws = Draws::new(t);
    let mut v = ROOT;
    for _ in 0..params.walk_steps {
        let (s1, s2) = tree.label(v);
        let boundary = |s: usize, want_larger: bool, draws: &mut Draws| {
            if s == 0 || s > t {
                return true;
            }
            let elems = draws.take(current, partition.trimmed(s, trim), s, true, k);
            x_larger(q, x, &elems) == want_larger
        };
        let ok = boundary(s1 - 1, true, &mut draws) && boundary(s2 + 1, false, &mut draws);
        let node = &tree.nodes[v];
        v = if !ok {
            node.parent.unwrap_or(v)
        } else if s2 - s1 > 1 {
            let mid = s1 + (s2 - s1) / 2;
            let elems = draws.take(current, partition.interval(mid), mid, false, k);
            node.children[x_larger(q, x, &elems) as usize]
        } else {
            node.children.first().copied().unwrap_or(v)
        };
    }
    (tree.label(v), draws.reused)
}

/// Insertion sort that locates each element with the tree walk, so only
/// `O(n log n)` distinct pairs are compared.
pub fn noisy_sort_query_efficient(
    oracle: &CountingOracle,
    params: &NswrParams,
) -> Result<(Ranking, Score, QueryStats)> {
    let traced = noisy_sort_query_efficient_traced(oracle, params, None)?;
    let stats = oracle.stats();
    let s = score_order(&oracle.uncounted(), traced.ranking.order());
    Ok((traced.ranking, Score(s), stats))
}

/// [`noisy_sort_query_efficient`] with a run report; `truth` enables the
/// dislocation envelope checks.
pub fn noisy_sort_query_efficient_traced<T: Tournament + ?Sized>(
    q: &T,
    params: &NswrParams,
    truth: Option<&Ranking>,
) -> Result<Traced> {
    let mut tree_cache: Option<(usize, WalkTree)> = None;
    run_pipeline(q, params, truth, |order, x, report: &mut RunReport| {
        let m = order.len();
        let partition = Partition::greedy(m, params.interval_len_min, params.interval_len_max);
        let t = partition.t();
        if tree_cache.as_ref().is_none_or(|(ct, _)| *ct != t) {
            tree_cache = Some((t, build_walk_tree(t, params.walk_steps)));
        }
        let tree = &tree_cache.as_ref().unwrap().1;
        let ((s1, s2), reused) = insert_tree_walk(q, order, &partition, tree, x, params);
        report.walk_exhaustions += reused;
        let lo = partition.interval(s1).start;
        let hi = partition.interval(s2.min(t)).end;
        Placement {
            position: (lo + hi) / 2,
            range: (lo.saturating_sub(params.trim), (hi + params.trim).min(m)),
        }
    })
}
