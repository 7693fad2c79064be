//! Block-based estimation of `∫ f dπ`.
//!
//! Only the complete blocks `B_1 .. B_numreg` enter; the first block and the
//! incomplete tail are ignored.

use crate::error::{Error, Result};
use crate::regeneration::{BlockDecomposition, BlockStatistics, Normalization};

fn require_blocks(found: usize, needed: usize) -> Result<()> {
    if found < needed {
        Err(Error::InsufficientBlocks { needed, found })
    } else {
        Ok(())
    }
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Two-pass population variance (divisor `len`).
pub(crate) fn population_variance(values: &[f64]) -> f64 {
    // identical values have zero spread even when their mean rounds
    if values.windows(2).all(|w| w[0] == w[1]) {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64
}

/// `G_n = numreg⁻¹ Σ f(B_j)`.
pub fn point_estimate(stats: &BlockStatistics) -> Result<f64> {
    require_blocks(stats.numreg(), 1)?;
    Ok(mean(&stats.f_sums))
}

/// `σ̂²_n`, population divisor `numreg`, two-pass.
pub fn variance_estimate(stats: &BlockStatistics) -> Result<f64> {
    require_blocks(stats.numreg(), 2)?;
    Ok(population_variance(&stats.f_sums))
}

/// Welford single-pass evaluation of [`variance_estimate`].
pub fn variance_estimate_single_pass(stats: &BlockStatistics) -> Result<f64> {
    require_blocks(stats.numreg(), 2)?;
    let (mut m, mut m2) = (0.0, 0.0);
    for (i, &x) in stats.f_sums.iter().enumerate() {
        let delta = x - m;
        m += delta / (i + 1) as f64;
        m2 += delta * (x - m);
    }
    Ok((m2 / stats.numreg() as f64).max(0.0))
}

/// `L_n = √numreg · (G_n − θ) / σ̂_n`.
pub fn studentized_statistic(stats: &BlockStatistics, theta: f64) -> Result<f64> {
    EstimateSummary::from_stats(stats)?.studentize(theta)
}

/// `T_n(α) / u(n)`, the visit count on the Mittag-Leffler scale.
pub fn normalized_visit_count(decomp: &BlockDecomposition, norm: &Normalization) -> f64 {
    decomp.visit_count() as f64 / norm.u(decomp.n() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateSummary {
    pub g_n: f64,
    pub sigma_hat: f64,
    pub numreg: usize,
    pub theta_hint: Option<f64>,
}

impl EstimateSummary {
    pub fn from_stats(stats: &BlockStatistics) -> Result<Self> {
        Ok(Self {
            g_n: point_estimate(stats)?,
            sigma_hat: variance_estimate(stats)?.sqrt(),
            numreg: stats.numreg(),
            theta_hint: None,
        })
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta_hint = Some(theta);
        self
    }

    /// Half-width scale `σ̂_n / √numreg` shared by every interval.
    pub fn standard_error(&self) -> f64 {
        self.sigma_hat / (self.numreg as f64).sqrt()
    }

    pub fn studentize(&self, theta: f64) -> Result<f64> {
        if self.sigma_hat <= 0.0 {
            return Err(Error::ZeroVariance);
        }
        Ok((self.numreg as f64).sqrt() * (self.g_n - theta) / self.sigma_hat)
    }
}
