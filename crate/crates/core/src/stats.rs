//! Token-count statistics of uniformly random strings.
//!
//! For a length-`n` string over `σ` symbols, adjacent characters differ with
//! probability `p = (σ-1)/σ`, so the number of run boundaries
//! `X = r - 1 ~ Bin(n-1, p)` and `k = 1 + ⌈(X+1)/2⌉`. Mean, variance and the
//! probability of a single-symbol kernel follow in closed form; the
//! Monte Carlo estimator samples strings and runs the actual decomposition.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codec::decompose_iterative;
use crate::error::{Error, Result};
use crate::runs::{alphabet_size, run_count, token_count};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StatParams {
    pub n: u64,
    pub sigma: u64,
}

impl StatParams {
    pub fn new(n: u64, sigma: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::ParamOutOfRange(format!(
                "n must be at least 2, got {n}"
            )));
        }
        if sigma < 2 {
            return Err(Error::ParamOutOfRange(format!(
                "sigma must be at least 2, got {sigma}"
            )));
        }
        Ok(StatParams { n, sigma })
    }

    /// Probability that two adjacent characters differ.
    pub fn p(&self) -> f64 {
        (self.sigma - 1) as f64 / self.sigma as f64
    }

    /// `1 - 2p = (2-σ)/σ`.
    pub fn q(&self) -> f64 {
        (2.0 - self.sigma as f64) / self.sigma as f64
    }

    /// Number of adjacent pairs, `n - 1`.
    pub fn m(&self) -> u64 {
        self.n - 1
    }

    fn check(&self) -> Result<()> {
        StatParams::new(self.n, self.sigma).map(|_| ())
    }
}

/// `base^exp` by repeated squaring; exact for `0^0 = 1` and stable for
/// negative bases.
pub fn pow_by_squaring(mut base: f64, mut exp: u64) -> f64 {
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

/// `E[k] = 1 + (1 + (n-1)p)/2 + (1 + q^(n-1))/4`.
pub fn expected_k(params: StatParams) -> Result<f64> {
    params.check()?;
    let m = params.m();
    Ok(1.0 + (1.0 + m as f64 * params.p()) / 2.0 + (1.0 + pow_by_squaring(params.q(), m)) / 4.0)
}

/// `Var[k] = mp(1-p)/4 - mp(1-p)q^(m-1)/2 + (1 - q^(2m))/16`.
///
/// Evaluated as `p(1-p) · (m/4 - m q^(m-1)/2 + S/4)` with
/// `S = (1 - q^(2m)) / (1 - q^2)`, using `1 - q^2 = 4p(1-p)`. At `n = 2`
/// the bracket is `1/4 - 1/2 + 1/4`, which is exactly zero in floating point.
pub fn variance_k(params: StatParams) -> Result<f64> {
    params.check()?;
    let m = params.m();
    let q = params.q();
    let spread = (params.sigma - 1) as f64 / (params.sigma as f64 * params.sigma as f64);
    let geometric = if q == 0.0 {
        1.0
    } else {
        (1.0 - pow_by_squaring(q, 2 * m)) / (1.0 - q * q)
    };
    let m = m as f64;
    let bracket = m / 4.0 - m * pow_by_squaring(q, params.m() - 1) / 2.0 + geometric / 4.0;
    Ok(spread * bracket)
}

/// `Pr(kernel has one distinct symbol) = (1 + q^(n-1)) / 2`.
pub fn kernel_singleton_prob(params: StatParams) -> Result<f64> {
    params.check()?;
    Ok((1.0 + pow_by_squaring(params.q(), params.m())) / 2.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleStats {
    pub trials: u64,
    pub seed: u64,
    pub mean_k: f64,
    /// Unbiased sample variance; 0 for a single trial.
    pub var_k: f64,
    pub frac_kernel_singleton: f64,
    /// Moments of the run-boundary count `r - 1`.
    pub mean_boundaries: f64,
    pub var_boundaries: f64,
    pub k_histogram: BTreeMap<u64, u64>,
    /// Samples where `k != 1 + ⌈r/2⌉`, or where the kernel's symbol count
    /// disagrees with the parity of `r`. Always 0.
    pub identity_violations: u64,
}

#[derive(Default)]
struct Tally {
    count: u64,
    sum_k: u64,
    sum_k2: u128,
    sum_x: u64,
    sum_x2: u128,
    singletons: u64,
    violations: u64,
    histogram: BTreeMap<u64, u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.count += other.count;
        self.sum_k += other.sum_k;
        self.sum_k2 += other.sum_k2;
        self.sum_x += other.sum_x;
        self.sum_x2 += other.sum_x2;
        self.singletons += other.singletons;
        self.violations += other.violations;
        for (k, c) in other.histogram {
            *self.histogram.entry(k).or_default() += c;
        }
        self
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index`, independent of the order trials are run in.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// The string sampled for trial `index`.
pub fn sample_string(params: StatParams, master: u64, index: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(master, index));
    let sigma = params.sigma as u16;
    (0..params.n)
        .map(|_| rng.gen_range(0..sigma) as u8)
        .collect()
}

fn run_trial(params: StatParams, master: u64, index: u64) -> Tally {
    let s = sample_string(params, master, index);
    let tokens = decompose_iterative(&s);
    let k = tokens.len() as u64;
    let r = run_count(&s);
    let x = (r - 1) as u64;
    let kernel_symbols = alphabet_size(tokens.last().expect("non-empty").symbols);
    let singleton = kernel_symbols == 1;

    let mut violations = 0;
    if k != token_count(r) as u64 {
        violations += 1;
    }
    if singleton != (r % 2 == 1) || kernel_symbols > 2 {
        violations += 1;
    }
    Tally {
        count: 1,
        sum_k: k,
        sum_k2: (k * k) as u128,
        sum_x: x,
        sum_x2: (x * x) as u128,
        singletons: singleton as u64,
        violations,
        histogram: BTreeMap::from([(k, 1)]),
    }
}

/// Mean and unbiased variance from exact integer sums.
fn moments(count: u64, sum: u64, sum_sq: u128) -> (f64, f64) {
    let t = count as u128;
    let mean = sum as f64 / count as f64;
    let var = if count > 1 {
        let num = t * sum_sq - (sum as u128) * (sum as u128);
        num as f64 / (t * (t - 1)) as f64
    } else {
        0.0
    };
    (mean, var)
}

/// Samples `trials` uniform strings and summarises `k`, the kernel and the
/// boundary count. Deterministic in `seed` regardless of thread schedule:
/// every trial draws from its own generator and all sums are integers.
pub fn monte_carlo(params: StatParams, trials: u64, seed: u64) -> Result<SampleStats> {
    params.check()?;
    if params.sigma > 256 {
        return Err(Error::ParamOutOfRange(format!(
            "sampling is over bytes, sigma must be at most 256, got {}",
            params.sigma
        )));
    }
    if trials == 0 {
        return Err(Error::ParamOutOfRange("trials must be at least 1".into()));
    }
    let tally = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(params, seed, i))
        .reduce(Tally::default, Tally::merge);

    let (mean_k, var_k) = moments(tally.count, tally.sum_k, tally.sum_k2);
    let (mean_boundaries, var_boundaries) = moments(tally.count, tally.sum_x, tally.sum_x2);
    Ok(SampleStats {
        trials,
        seed,
        mean_k,
        var_k,
        frac_kernel_singleton: tally.singletons as f64 / trials as f64,
        mean_boundaries,
        var_boundaries,
        k_histogram: tally.histogram,
        identity_violations: tally.violations,
    })
}
