//! Small statistics helpers shared by the solvers' calibration and the bench.

use statrs::distribution::{Binomial, DiscreteCDF};

/// `P[Bin(trials, p) <= x]`.
pub fn binomial_le(trials: u64, p: f64, x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    if x >= trials as f64 {
        return 1.0;
    }
    let dist = Binomial::new(p, trials).expect("p must lie in [0, 1]");
    dist.cdf(x.floor() as u64)
}

/// `P[Bin(trials, p) < x]`.
pub fn binomial_lt(trials: u64, p: f64, x: f64) -> f64 {
    let below = x.ceil() - 1.0;
    binomial_le(trials, p, below)
}

/// Mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}
