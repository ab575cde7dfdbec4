//! Exact solvers for small instances. These are the reference answers every
//! approximate solver is tested against.

use crate::error::{Error, Result};
use crate::ranking::{next_permutation, Ranking, Score, Tournament};

pub const EXHAUSTIVE_LIMIT: usize = 10;
pub const SUBSET_DP_LIMIT: usize = 20;

fn dense<T: Tournament + ?Sized>(q: &T) -> Vec<i8> {
    let n = q.len();
    let mut m = vec![0i8; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m[i * n + j] = q.query(i, j);
            }
        }
    }
    m
}

/// Maximizes the score over all `n!` rankings. Among maximizers the one with
/// the lexicographically smallest rank sequence is returned.
pub fn optimal_ranking_exhaustive<T: Tournament + ?Sized>(q: &T) -> Result<(Ranking, Score)> {
    let n = q.len();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            solver: "exhaustive",
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let m = dense(q);
    let mut ranks: Vec<usize> = (0..n).collect();
    let mut best = i64::MIN;
    let mut best_ranks = ranks.clone();
    loop {
        let mut s = 0i64;
        for i in 1..n {
            for j in 0..i {
                let v = m[i * n + j] as i64;
                s += if ranks[i] > ranks[j] { v } else { -v };
            }
        }
        if s > best {
            best = s;
            best_ranks.copy_from_slice(&ranks);
        }
        if !next_permutation(&mut ranks) {
            break;
        }
    }
    let best = if n < 2 { 0 } else { best };
    Ok((Ranking::from_ranks(best_ranks)?, Score(best)))
}

/// Subset dynamic program over `2^n` states.
///
/// `best(S)` is the optimal score of the items in `S`; it is built by choosing
/// the item placed on top of `S`:
/// `best(S) = max_{x in S} best(S \ x) + sum_{y in S \ x} q(x, y)`.
/// Ties go to the smaller item index.
pub fn optimal_ranking_subset_dp<T: Tournament + ?Sized>(q: &T) -> Result<(Ranking, Score)> {
    let n = q.len();
    if n > SUBSET_DP_LIMIT {
        return Err(Error::TooLarge {
            solver: "subset-dp",
            n,
            limit: SUBSET_DP_LIMIT,
        });
    }
    if n <= 1 {
        return Ok((Ranking::identity(n), Score(0)));
    }
    let mut wins = vec![0u32; n];
    for (x, w) in wins.iter_mut().enumerate() {
        for y in 0..n {
            if x != y && q.beats(x, y) {
                *w |= 1 << y;
            }
        }
    }
    let states = 1usize << n;
    let mut best = vec![0i32; states];
    let mut top = vec![0u8; states];
    for s in 1..states as u32 {
        let mut value = i32::MIN;
        let mut pick = 0u8;
        let mut rest = s;
        while rest != 0 {
            let x = rest.trailing_zeros();
            rest &= rest - 1;
            let below = s & !(1 << x);
            let gain = 2 * (wins[x as usize] & below).count_ones() as i32 - below.count_ones() as i32;
            let v = best[below as usize] + gain;
            if v > value {
                value = v;
                pick = x as u8;
            }
        }
        best[s as usize] = value;
        top[s as usize] = pick;
    }
    let mut order = Vec::with_capacity(n);
    let mut s = (states - 1) as u32;
    while s != 0 {
        let x = top[s as usize];
        order.push(x as usize);
        s &= !(1 << x);
    }
    order.reverse();
    let score = best[states - 1] as i64;
    Ok((Ranking::from_order(order)?, Score(score)))
}
