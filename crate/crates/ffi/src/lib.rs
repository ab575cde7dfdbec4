//! C ABI for the `nswr` library.
//!
//! Objects cross the boundary as opaque handles ([`NswrTournament`],
//! [`NswrRanking`]) created and destroyed by this library. Every fallible
//! function returns an [`NswrStatus`]; on failure a message is kept per
//! thread and can be read with [`nswr_last_error`]. Panics never unwind
//! into the caller; they are reported as [`NswrStatus::Panic`].
//!
//! Items are indexed from 0 and ranks are 0-based with the largest item at
//! rank `n - 1`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nswr::bench::{self, Algorithm};
use nswr::nswr::{theory_constants, NswrParams, Refine, ResortMode};
use nswr::oracle::csv::load_tournament_csv;
use nswr::oracle::make_noisy_tournament;
use nswr::{CountingOracle, Error, QueryTable, Ranking};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NswrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The instance is too large for the chosen solver.
    TooLarge = 3,
    Io = 4,
    Parse = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NswrAlgorithm {
    Exhaustive = 0,
    SubsetDp = 1,
    WindowDp = 2,
    Insertion = 3,
    QueryEfficient = 4,
}

impl From<NswrAlgorithm> for Algorithm {
    fn from(a: NswrAlgorithm) -> Self {
        match a {
            NswrAlgorithm::Exhaustive => Algorithm::Exhaustive,
            NswrAlgorithm::SubsetDp => Algorithm::SubsetDp,
            NswrAlgorithm::WindowDp => Algorithm::WindowDp,
            NswrAlgorithm::Insertion => Algorithm::Insertion,
            NswrAlgorithm::QueryEfficient => Algorithm::QueryEfficient,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NswrResort {
    Full = 0,
    Local = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NswrRefine {
    Off = 0,
    Scan = 1,
    Bisect = 2,
}

/// Solver parameters. `polish_radius = 0` means unlimited.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NswrParamsC {
    pub window: usize,
    pub block_len: usize,
    pub majority_k: usize,
    pub walk_steps: usize,
    pub interval_len_min: usize,
    pub interval_len_max: usize,
    pub trim: usize,
    pub beta: f64,
    pub seed: u64,
    pub resort: NswrResort,
    pub refine: NswrRefine,
    pub polish_span: usize,
    pub polish_radius: usize,
    pub checkpoint_max: usize,
    pub max_passes: usize,
}

impl From<&NswrParams> for NswrParamsC {
    fn from(p: &NswrParams) -> Self {
        NswrParamsC {
            window: p.window,
            block_len: p.block_len,
            majority_k: p.majority_k,
            walk_steps: p.walk_steps,
            interval_len_min: p.interval_len_min,
            interval_len_max: p.interval_len_max,
            trim: p.trim,
            beta: p.beta,
            seed: p.seed,
            resort: match p.resort {
                ResortMode::Full => NswrResort::Full,
                ResortMode::Local => NswrResort::Local,
            },
            refine: match p.refine {
                Refine::Off => NswrRefine::Off,
                Refine::Scan => NswrRefine::Scan,
                Refine::Bisect => NswrRefine::Bisect,
            },
            polish_span: p.polish_span,
            polish_radius: p.polish_radius.unwrap_or(0),
            checkpoint_max: p.checkpoint_max,
            max_passes: p.max_passes,
        }
    }
}

impl From<&NswrParamsC> for NswrParams {
    fn from(p: &NswrParamsC) -> Self {
        NswrParams {
            window: p.window,
            block_len: p.block_len,
            majority_k: p.majority_k,
            walk_steps: p.walk_steps,
            interval_len_min: p.interval_len_min,
            interval_len_max: p.interval_len_max,
            trim: p.trim,
            beta: p.beta,
            seed: p.seed,
            resort: match p.resort {
                NswrResort::Full => ResortMode::Full,
                NswrResort::Local => ResortMode::Local,
            },
            refine: match p.refine {
                NswrRefine::Off => Refine::Off,
                NswrRefine::Scan => Refine::Scan,
                NswrRefine::Bisect => Refine::Bisect,
            },
            polish_span: p.polish_span,
            polish_radius: (p.polish_radius > 0).then_some(p.polish_radius),
            checkpoint_max: p.checkpoint_max,
            max_passes: p.max_passes,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NswrQueryStats {
    pub distinct_queries: u64,
    pub total_accesses: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NswrTheoryConstants {
    pub epsilon: f64,
    pub p1: f64,
    pub m1: f64,
    pub m2: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub majority_k: usize,
    pub c_walk: f64,
    pub c: f64,
}

/// A complete tournament, optionally with the hidden ranking it was
/// generated from.
pub struct NswrTournament {
    table: QueryTable,
    truth: Option<Ranking>,
}

pub struct NswrRanking(Ranking);

struct Failure(NswrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::TooLarge { .. } => NswrStatus::TooLarge,
            Error::Io(_) => NswrStatus::Io,
            Error::Csv(_) | Error::Json(_) => NswrStatus::Parse,
            _ => NswrStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn fail<T>(status: NswrStatus, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, msg.into()))
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NswrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NswrStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("panic: {msg}"));
            NswrStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .map_or_else(|| fail(NswrStatus::NullPointer, format!("{what} is null")), Ok)
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .map_or_else(|| fail(NswrStatus::NullPointer, format!("{what} is null")), Ok)
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nswr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn nswr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Generates a tournament over a random hidden ranking; every comparison
/// is correct with probability `1/2 + gamma`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nswr_tournament_generate(
    n: usize,
    gamma: f64,
    seed: u64,
    out_tournament: *mut *mut NswrTournament,
) -> NswrStatus {
    guard(|| {
        let slot = out(out_tournament, "out_tournament")?;
        let (truth, noise) = bench::trial_instance(seed, n, gamma, 0)?;
        let table = make_noisy_tournament(&truth, &noise);
        *slot = boxed(NswrTournament {
            table,
            truth: Some(truth),
        });
        Ok(())
    })
}

/// Builds a tournament from an `n * n` row-major matrix whose entry
/// `(i, j)` is `+1` when item `i` beat item `j` and `-1` otherwise. The
/// diagonal is ignored; the matrix must be antisymmetric.
///
/// # Safety
/// `outcomes` must point to `n * n` readable values; `out` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn nswr_tournament_from_matrix(
    n: usize,
    outcomes: *const i8,
    out_tournament: *mut *mut NswrTournament,
) -> NswrStatus {
    guard(|| {
        let slot = out(out_tournament, "out_tournament")?;
        if n > 0 && outcomes.is_null() {
            return fail(NswrStatus::NullPointer, "outcomes is null");
        }
        let cells = n
            .checked_mul(n)
            .ok_or_else(|| Failure(NswrStatus::InvalidArgument, "n is too large".into()))?;
        let m = if n == 0 { &[][..] } else { std::slice::from_raw_parts(outcomes, cells) };
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (m[i * n + j], m[j * n + i]);
                if !matches!((a, b), (1, -1) | (-1, 1)) {
                    return fail(
                        NswrStatus::InvalidArgument,
                        format!("entries ({i}, {j}) = {a} and ({j}, {i}) = {b} are not +1/-1 opposites"),
                    );
                }
            }
        }
        let table = QueryTable::from_fn(n, |i, j| m[i * n + j] > 0);
        *slot = boxed(NswrTournament { table, truth: None });
        Ok(())
    })
}

/// Reads a tournament CSV (`item_a,item_b,outcome`). Items are indexed in
/// order of first appearance.
///
/// # Safety
/// `path` must be a nul-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nswr_tournament_load_csv(
    path: *const c_char,
    out_tournament: *mut *mut NswrTournament,
) -> NswrStatus {
    guard(|| {
        let slot = out(out_tournament, "out_tournament")?;
        if path.is_null() {
            return fail(NswrStatus::NullPointer, "path is null");
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Failure(NswrStatus::InvalidArgument, "path is not UTF-8".into()))?;
        let t = load_tournament_csv(path)?;
        *slot = boxed(NswrTournament {
            table: t.table,
            truth: None,
        });
        Ok(())
    })
}

/// # Safety
/// `t` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nswr_tournament_free(t: *mut NswrTournament) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of items, 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nswr_tournament_len(t: *const NswrTournament) -> usize {
    t.as_ref().map_or(0, |t| t.table.len())
}

/// Outcome of `i` against `j`: `+1` if `i` won.
///
/// # Safety
/// `t` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nswr_tournament_query(
    t: *const NswrTournament,
    i: usize,
    j: usize,
    out_outcome: *mut i8,
) -> NswrStatus {
    guard(|| {
        let t = deref(t, "tournament")?;
        let slot = out(out_outcome, "out_outcome")?;
        *slot = t.table.get(i, j)?;
        Ok(())
    })
}

/// The hidden ranking of a generated tournament.
///
/// # Safety
/// `t` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nswr_tournament_truth(
    t: *const NswrTournament,
    out_ranking: *mut *mut NswrRanking,
) -> NswrStatus {
    guard(|| {
        let t = deref(t, "tournament")?;
        let slot = out(out_ranking, "out_ranking")?;
        match &t.truth {
            Some(r) => {
                *slot = boxed(NswrRanking(r.clone()));
                Ok(())
            }
            None => fail(NswrStatus::InvalidArgument, "tournament was not generated"),
        }
    })
}

/// Ranking from `ranks[item]`, a permutation of `0..n`.
///
/// # Safety
/// `ranks` must point to `n` readable values; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn nswr_ranking_from_ranks(
    ranks: *const usize,
    n: usize,
    out_ranking: *mut *mut NswrRanking,
) -> NswrStatus {
    guard(|| {
        let slot = out(out_ranking, "out_ranking")?;
        if n > 0 && ranks.is_null() {
            return fail(NswrStatus::NullPointer, "ranks is null");
        }
        let v = if n == 0 { Vec::new() } else { std::slice::from_raw_parts(ranks, n).to_vec() };
        *slot = boxed(NswrRanking(Ranking::from_ranks(v)?));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nswr_ranking_free(r: *mut NswrRanking) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nswr_ranking_len(r: *const NswrRanking) -> usize {
    r.as_ref().map_or(0, |r| r.0.len())
}

unsafe fn copy_out(src: &[usize], dst: *mut usize, capacity: usize) -> Result<(), Failure> {
    if capacity < src.len() {
        return fail(
            NswrStatus::BufferTooSmall,
            format!("buffer holds {capacity} values, {} needed", src.len()),
        );
    }
    if !src.is_empty() {
        if dst.is_null() {
            return fail(NswrStatus::NullPointer, "buffer is null");
        }
        ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    }
    Ok(())
}

/// Writes `rank[item]` for every item.
///
/// # Safety
/// `r` must be a live handle; `buf` must hold `capacity` writable values.
#[no_mangle]
pub unsafe extern "C" fn nswr_ranking_ranks(
    r: *const NswrRanking,
    buf: *mut usize,
    capacity: usize,
) -> NswrStatus {
    guard(|| copy_out(deref(r, "ranking")?.0.ranks(), buf, capacity))
}

/// Writes the items from smallest to largest.
///
/// # Safety
/// `r` must be a live handle; `buf` must hold `capacity` writable values.
#[no_mangle]
pub unsafe extern "C" fn nswr_ranking_order(
    r: *const NswrRanking,
    buf: *mut usize,
    capacity: usize,
) -> NswrStatus {
    guard(|| copy_out(deref(r, "ranking")?.0.order(), buf, capacity))
}

/// Agreeing pairs minus upsets of `r` on `t`.
///
/// # Safety
/// Both handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nswr_score(
    t: *const NswrTournament,
    r: *const NswrRanking,
    out_score: *mut i64,
) -> NswrStatus {
    guard(|| {
        let t = deref(t, "tournament")?;
        let r = deref(r, "ranking")?;
        let slot = out(out_score, "out_score")?;
        *slot = nswr::ranking::score(&t.table, &r.0)?.0;
        Ok(())
    })
}

/// Calibrated parameters of `algorithm` for `n` items at noise level
/// `gamma`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nswr_params_default(
    algorithm: NswrAlgorithm,
    n: usize,
    gamma: f64,
    out_params: *mut NswrParamsC,
) -> NswrStatus {
    guard(|| {
        let slot = out(out_params, "out_params")?;
        *slot = NswrParamsC::from(&Algorithm::from(algorithm).default_params(n, gamma));
        Ok(())
    })
}

/// Ranks the items of `t`. `params` may be null for the calibrated
/// defaults at `gamma = 0.25`. `out_stats` may be null.
///
/// # Safety
/// `t` must be a live handle, `params` null or readable, `out_ranking`
/// valid for writes and `out_stats` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nswr_solve(
    t: *const NswrTournament,
    algorithm: NswrAlgorithm,
    params: *const NswrParamsC,
    out_ranking: *mut *mut NswrRanking,
    out_stats: *mut NswrQueryStats,
) -> NswrStatus {
    guard(|| {
        let t = deref(t, "tournament")?;
        let slot = out(out_ranking, "out_ranking")?;
        let algorithm = Algorithm::from(algorithm);
        let n = t.table.len();
        let params = match params.as_ref() {
            Some(p) => NswrParams::from(p),
            None => algorithm.default_params(n, 0.25),
        };
        params.validate()?;
        if let Some(limit) = algorithm.size_limit().filter(|&l| n > l) {
            return Err(Error::TooLarge {
                solver: algorithm.name(),
                n,
                limit,
            }
            .into());
        }
        let oracle = CountingOracle::over_table(t.table.clone());
        let sol = bench::solve(algorithm, &oracle, &params, None)?;
        if let Some(stats) = out_stats.as_mut() {
            *stats = NswrQueryStats {
                distinct_queries: sol.stats.distinct_queries,
                total_accesses: sol.stats.total_accesses,
            };
        }
        *slot = boxed(NswrRanking(sol.ranking));
        Ok(())
    })
}

/// Constants of the asymptotic analysis. `epsilon <= 0` selects the
/// default `n^(-beta-1) / 4`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nswr_theory_constants(
    gamma: f64,
    beta: f64,
    n: usize,
    epsilon: f64,
    out_constants: *mut NswrTheoryConstants,
) -> NswrStatus {
    guard(|| {
        let slot = out(out_constants, "out_constants")?;
        let t = theory_constants(gamma, beta, n, (epsilon > 0.0).then_some(epsilon))?;
        *slot = NswrTheoryConstants {
            epsilon: t.epsilon,
            p1: t.p1,
            m1: t.m1,
            m2: t.m2,
            c2: t.c2,
            c3: t.c3,
            c4: t.c4,
            majority_k: t.majority_k,
            c_walk: t.c_walk,
            c: t.c,
        };
        Ok(())
    })
}
