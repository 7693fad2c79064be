//! Block resampling: the regenerative block bootstrap (RBB) and the
//! regeneration-based bootstrap (RGB).
//!
//! Both draw complete blocks uniformly with replacement. RBB keeps drawing
//! until the pseudo-trajectory is longer than `n` and retains all but the
//! last block, so its block count `T̃*` is random. RGB always draws exactly
//! `numreg` blocks.
//!
//! A resample is stored as block indices only; `(f(B_j), ℓ(B_j))` is all a
//! replicate ever needs.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{mean, population_variance, EstimateSummary};
use crate::regeneration::BlockStatistics;
use crate::rng::derive_stream;

/// Consecutive degenerate redraws tolerated within one replicate.
pub const MAX_CONSECUTIVE_DEGENERATE: usize = 100;

/// Stream label for bootstrap replicates: replicate `r` of seed `s` uses
/// `derive_stream(s, BOOT_STREAM, r)`.
pub const BOOT_STREAM: &str = "boot";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rbb,
    Rgb,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Rbb => "rbb",
            Method::Rgb => "rgb",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which standard deviation divides a bootstrap replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Studentization {
    /// `σ̂_n` of the original blocks (the `L*` statistics).
    #[default]
    Original,
    /// `σ̂*` recomputed from the retained resampled blocks.
    Resampled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BootstrapSample {
    /// Zero-based block indices in draw order. For RBB the last entry is the
    /// block that pushed the length past `n` and is not retained.
    pub indices: Vec<usize>,
    /// `ℓ*(k_star)`, the length over all drawn blocks.
    pub total_length: u64,
    /// Number of draws.
    pub k_star: usize,
    pub method: Method,
}

impl BootstrapSample {
    /// Blocks that enter the bootstrap statistic.
    pub fn retained(&self) -> &[usize] {
        match self.method {
            Method::Rbb => &self.indices[..self.k_star - 1],
            Method::Rgb => &self.indices,
        }
    }

    /// `T̃*` for RBB, `numreg` for RGB.
    pub fn t_star(&self) -> usize {
        self.retained().len()
    }
}

fn draw_index<R: Rng + ?Sized>(numreg: usize, rng: &mut R) -> usize {
    rng.gen_range(0..numreg as u64) as usize
}

/// One RBB resample: draw until `ℓ*(k) > n`, keep the first `k - 1` blocks.
pub fn rbb_draw<R: Rng + ?Sized>(
    stats: &BlockStatistics,
    n: u64,
    rng: &mut R,
) -> Result<BootstrapSample> {
    let numreg = stats.numreg();
    if numreg == 0 {
        return Err(Error::InsufficientBlocks {
            needed: 1,
            found: 0,
        });
    }
    let mut indices = Vec::new();
    let mut total = 0u64;
    while total <= n {
        let j = draw_index(numreg, rng);
        total += stats.lengths[j];
        indices.push(j);
    }
    if indices.len() == 1 {
        return Err(Error::DegenerateDraw);
    }
    Ok(BootstrapSample {
        k_star: indices.len(),
        indices,
        total_length: total,
        method: Method::Rbb,
    })
}

/// One RGB resample: exactly `numreg` draws.
pub fn rgb_draw<R: Rng + ?Sized>(stats: &BlockStatistics, rng: &mut R) -> Result<BootstrapSample> {
    let numreg = stats.numreg();
    if numreg == 0 {
        return Err(Error::InsufficientBlocks {
            needed: 1,
            found: 0,
        });
    }
    let indices: Vec<usize> = (0..numreg).map(|_| draw_index(numreg, rng)).collect();
    let total_length = indices.iter().map(|&j| stats.lengths[j]).sum();
    Ok(BootstrapSample {
        indices,
        total_length,
        k_star: numreg,
        method: Method::Rgb,
    })
}

pub fn draw<R: Rng + ?Sized>(
    method: Method,
    stats: &BlockStatistics,
    n: u64,
    rng: &mut R,
) -> Result<BootstrapSample> {
    match method {
        Method::Rbb => rbb_draw(stats, n, rng),
        Method::Rgb => rgb_draw(stats, rng),
    }
}

/// `√count · (G* − G_n) / σ`, where `σ` is `σ̂_n` of the original blocks or
/// `σ̂*` of the retained resampled blocks.
pub fn bootstrap_statistic(
    sample: &BootstrapSample,
    stats: &BlockStatistics,
    original: &EstimateSummary,
    studentization: Studentization,
) -> Result<f64> {
    let retained = sample.retained();
    if retained.is_empty() {
        return Err(Error::DegenerateDraw);
    }
    let resampled: Vec<f64> = retained.iter().map(|&j| stats.f_sums[j]).collect();
    let g_star = mean(&resampled);
    let sigma = match studentization {
        Studentization::Original => original.sigma_hat,
        Studentization::Resampled => population_variance(&resampled).sqrt(),
    };
    if sigma <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((retained.len() as f64).sqrt() * (g_star - original.g_n) / sigma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Replicate {
    pub statistic: f64,
    pub t_star: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapDistribution {
    pub method: Method,
    pub studentization: Studentization,
    /// Seed the replicate streams were derived from.
    pub seed: u64,
    /// Replicates in replicate order.
    pub replicates: Vec<Replicate>,
    /// Draws discarded as degenerate and redrawn.
    pub degenerate: usize,
    sorted: Vec<f64>,
}

impl BootstrapDistribution {
    /// Replicate statistics sorted ascending.
    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }
}

fn replicate(
    stats: &BlockStatistics,
    summary: &EstimateSummary,
    n: u64,
    method: Method,
    studentization: Studentization,
    seed: u64,
    r: u64,
) -> Result<(Replicate, usize)> {
    let mut rng = derive_stream(seed, BOOT_STREAM, r);
    let mut degenerate = 0;
    loop {
        let outcome = draw(method, stats, n, &mut rng).and_then(|s| {
            if summary.sigma_hat == 0.0 && !s.retained().is_empty() {
                // all blocks share one f-sum: every resample reproduces G_n
                return Ok((0.0, s));
            }
            Ok((bootstrap_statistic(&s, stats, summary, studentization)?, s))
        });
        match outcome {
            Ok((statistic, sample)) => {
                let rep = Replicate {
                    statistic,
                    t_star: sample.t_star(),
                };
                return Ok((rep, degenerate));
            }
            Err(Error::DegenerateDraw) | Err(Error::ZeroVariance) => {
                degenerate += 1;
                if degenerate >= MAX_CONSECUTIVE_DEGENERATE {
                    return Err(Error::TooManyDegenerate {
                        degenerate,
                        replicates: 1,
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// `reps` independent replicates of the studentized bootstrap statistic.
///
/// Replicate `r` draws from `derive_stream(seed, "boot", r)`; replicates run
/// on the current rayon pool and are collected in replicate order. When the
/// original blocks have zero spread every resample reproduces `G_n`, and the
/// distribution is the point mass at zero.
pub fn bootstrap_distribution(
    stats: &BlockStatistics,
    n: u64,
    reps: usize,
    method: Method,
    studentization: Studentization,
    seed: u64,
) -> Result<BootstrapDistribution> {
    if reps == 0 {
        return Err(Error::invalid("reps", "need at least one replicate"));
    }
    let summary = EstimateSummary::from_stats(stats)?;
    let results: Vec<(Replicate, usize)> = (0..reps as u64)
        .into_par_iter()
        .map(|r| replicate(stats, &summary, n, method, studentization, seed, r))
        .collect::<Result<_>>()?;
    let degenerate: usize = results.iter().map(|(_, d)| d).sum();
    if degenerate * 100 > reps {
        return Err(Error::TooManyDegenerate {
            degenerate,
            replicates: reps,
        });
    }
    let replicates: Vec<Replicate> = results.into_iter().map(|(rep, _)| rep).collect();
    let mut sorted: Vec<f64> = replicates.iter().map(|r| r.statistic).collect();
    sorted.sort_by(f64::total_cmp);
    Ok(BootstrapDistribution {
        method,
        studentization,
        seed,
        replicates,
        degenerate,
        sorted,
    })
}

/// Ceiling order statistic `x_(⌈pB⌉)` of a sorted sample.
///
/// `p·B` within `1e-9` of an integer is taken as that integer, so that
/// e.g. `p = 0.025, B = 1000` selects the 25th value even when the floating
/// product lands just above 25.
pub fn sorted_quantile(sorted: &[f64], p: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid("p", format!("{p} not in (0, 1)")));
    }
    let pb = p * sorted.len() as f64;
    let rank = if (pb - pb.round()).abs() < 1e-9 {
        pb.round()
    } else {
        pb.ceil()
    };
    let idx = (rank as usize).clamp(1, sorted.len()) - 1;
    Ok(sorted[idx])
}

pub fn quantile(dist: &BootstrapDistribution, p: f64) -> Result<f64> {
    sorted_quantile(dist.values(), p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

pub(crate) fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("level", format!("{level} not in (0, 1)")))
    }
}

/// Studentized bootstrap interval
/// `[G_n − s·q(1 − α/2), G_n − s·q(α/2)]` with `s = σ̂_n / √numreg` and
/// `α = 1 − level`.
pub fn confidence_interval(
    g_n: f64,
    sigma_hat: f64,
    numreg: usize,
    dist: &BootstrapDistribution,
    level: f64,
) -> Result<ConfidenceInterval> {
    interval_from_sorted(g_n, sigma_hat, numreg, dist.values(), level)
}

pub fn interval_from_sorted(
    g_n: f64,
    sigma_hat: f64,
    numreg: usize,
    sorted: &[f64],
    level: f64,
) -> Result<ConfidenceInterval> {
    check_level(level)?;
    if numreg == 0 {
        return Err(Error::InsufficientBlocks {
            needed: 1,
            found: 0,
        });
    }
    let alpha = 1.0 - level;
    let se = sigma_hat / (numreg as f64).sqrt();
    let q_hi = sorted_quantile(sorted, 1.0 - alpha / 2.0)?;
    let q_lo = sorted_quantile(sorted, alpha / 2.0)?;
    Ok(ConfidenceInterval {
        lo: g_n - se * q_hi,
        hi: g_n - se * q_lo,
        level,
    })
}
