use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::check_gamma;

use super::params::{majority_size, walk_length};

/// Asymptotic constants of the analysis, evaluated for concrete inputs.
/// Logarithms are base 2. Reported for comparison; no solver reads them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryConstants {
    pub gamma: f64,
    pub beta: f64,
    pub n: usize,
    pub epsilon: f64,
    /// `exp(-gamma^2 / 16)`.
    pub p1: f64,
    /// `(-log eps + 2 log n) / log(1 / p1)`.
    pub m1: f64,
    pub m2: f64,
    /// `70 / gamma^2`.
    pub c2: f64,
    /// `500 gamma^-2 m2 / log n`.
    pub c3: f64,
    /// Exponent of the running time `n^(24 c3 + 3)`.
    pub c4: f64,
    /// Majority size `k` with per-test error below `10^-3`.
    pub majority_k: usize,
    /// Walk length divided by `log n`.
    pub c_walk: f64,
    /// Distinct-query constant: `3 k c_walk`, so queries `<= C n log n`.
    #[serde(rename = "C")]
    pub c: f64,
}

/// Evaluates the constants. `epsilon` defaults to `n^(-beta-1) / 4`.
pub fn theory_constants(
    gamma: f64,
    beta: f64,
    n: usize,
    epsilon: Option<f64>,
) -> Result<TheoryConstants> {
    check_gamma(gamma)?;
    if n < 2 {
        return Err(Error::InvalidParams("n must be at least 2".into()));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidParams("beta must be positive".into()));
    }
    let nf = n as f64;
    let log_n = nf.log2();
    let epsilon = epsilon.unwrap_or_else(|| nf.powf(-beta - 1.0) / 4.0);
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParams("epsilon must lie in (0, 1)".into()));
    }
    let g2 = gamma * gamma;
    let p1 = (-g2 / 16.0).exp();
    let m1 = (-epsilon.log2() + 2.0 * log_n) / (1.0 / p1).log2();
    let m2 = 2.0 * m1;
    let c2 = 70.0 / g2;
    let c3 = 500.0 / g2 * m2 / log_n;
    let c4 = 24.0 * c3 + 3.0;
    let majority_k = majority_size(gamma, 0.999);
    let c_walk = walk_length(n, beta, 0.99) as f64 / log_n;
    Ok(TheoryConstants {
        gamma,
        beta,
        n,
        epsilon,
        p1,
        m1,
        m2,
        c2,
        c3,
        c4,
        majority_k,
        c_walk,
        c: 3.0 * majority_k as f64 * c_walk,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_gamma() {
        let t = theory_constants(0.25, 1.0, 1000, None).unwrap();
        assert!((t.p1 - 0.996101).abs() < 1e-6);
        assert!((t.c2 - 1120.0).abs() < 1e-9);
        assert!((t.epsilon - 1e-6 / 4.0).abs() < 1e-18);
        assert_eq!(t.m2, 2.0 * t.m1);
        // log2(1/p1) = gamma^2 / (16 ln 2).
        let expected_m1 = (-t.epsilon.log2() + 2.0 * 1000f64.log2()) * 16.0 * 2f64.ln() / 0.0625;
        assert!((t.m1 - expected_m1).abs() / expected_m1 < 1e-9);
        assert!((t.c3 - 8000.0 * t.m2 / 1000f64.log2()).abs() < 1e-6 * t.c3);
        assert_eq!(t.c4, 24.0 * t.c3 + 3.0);
        assert_eq!(t.c, 3.0 * t.majority_k as f64 * t.c_walk);
    }

    #[test]
    fn m2_doubles_m1() {
        for gamma in [0.05, 0.1, 0.3, 0.5] {
            for n in [2, 10, 1 << 20] {
                let t = theory_constants(gamma, 2.0, n, Some(1e-3)).unwrap();
                assert_eq!(t.m2, 2.0 * t.m1);
                assert!(t.p1 > 0.0 && t.p1 < 1.0);
                assert!(t.c3 > 0.0 && t.c > 0.0);
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(theory_constants(0.0, 1.0, 100, None).is_err());
        assert!(theory_constants(0.6, 1.0, 100, None).is_err());
        assert!(theory_constants(0.25, 1.0, 1, None).is_err());
        assert!(theory_constants(0.25, -1.0, 100, None).is_err());
        assert!(theory_constants(0.25, 1.0, 100, Some(1.5)).is_err());
    }

    #[test]
    fn serializes_with_upper_case_c() {
        let t = theory_constants(0.25, 1.0, 1000, None).unwrap();
        let v = serde_json::to_value(&t).unwrap();
        assert!(v.get("C").is_some());
        assert!(v.get("c2").is_some());
    }
}
