//! Simulation studies on the simple symmetric random walk with atom `{0}`.
//!
//! Each chain runs its whole pipeline (simulate, decompose, bootstrap) on one
//! rayon worker from its own seed
//! `derive_seed(master_seed, experiment_id, chain_index)`; the trajectory
//! stream is `derive_stream(chain_seed, "chain", 0)` and bootstrap replicate
//! `r` uses `derive_stream(chain_seed, "boot", r)`. Results are gathered in
//! chain order, so outputs do not depend on the worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::bootstrap::{
    bootstrap_distribution, check_level, interval_from_sorted, BootstrapDistribution,
    ConfidenceInterval, Method, Studentization,
};
use crate::chain::simulate_ssrw;
use crate::ecdf::{ks_distance, ks_distance_to_cdf, normal_cdf, normal_quantile, Ecdf};
use crate::error::{Error, Result};
use crate::estimators::{normalized_visit_count, EstimateSummary};
use crate::regeneration::{
    block_functional, decompose, BlockDecomposition, BlockStatistics, Normalization, Singleton,
};
use crate::rng::{derive_seed, derive_stream};

/// Maximum number of grid points in an [`EcdfTable`].
pub const MAX_GRID_POINTS: usize = 2000;

/// Built-in functionals `f` of the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    /// `f(k) = 1/k²`, `f(0) = 0`; `∫ f dπ_0 = π²/3` for the SSRW.
    #[default]
    InvSquare,
}

impl Functional {
    #[inline]
    pub fn eval(&self, k: i64) -> f64 {
        match self {
            Functional::InvSquare => {
                if k == 0 {
                    0.0
                } else {
                    let k = k as f64;
                    1.0 / (k * k)
                }
            }
        }
    }

    /// Known value of `∫ f dπ_0` for the SSRW.
    pub fn target(&self) -> f64 {
        match self {
            Functional::InvSquare => std::f64::consts::PI * std::f64::consts::PI / 3.0,
        }
    }
}

fn default_n() -> Vec<u64> {
    vec![1_000, 10_000, 100_000]
}
fn default_chains() -> usize {
    500
}
fn default_boot_reps() -> usize {
    500
}
fn default_true_reps() -> usize {
    2000
}
fn default_level() -> f64 {
    0.95
}
fn default_beta() -> f64 {
    0.5
}
fn default_l_const() -> f64 {
    std::f64::consts::FRAC_1_SQRT_2
}
fn default_seed() -> u64 {
    1
}
fn default_max_moment() -> u32 {
    4
}
fn default_methods() -> MethodSelection {
    MethodSelection::Both
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodSelection {
    Rbb,
    Rgb,
    Both,
}

impl MethodSelection {
    pub fn methods(&self) -> &'static [Method] {
        match self {
            MethodSelection::Rbb => &[Method::Rbb],
            MethodSelection::Rgb => &[Method::Rgb],
            MethodSelection::Both => &[Method::Rbb, Method::Rgb],
        }
    }
}

/// Horizon(s): a single number or a list in the JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum Horizons {
    One(u64),
    Many(Vec<u64>),
}

fn deserialize_horizons<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<u64>, D::Error> {
    Ok(match Horizons::deserialize(d)? {
        Horizons::One(n) => vec![n],
        Horizons::Many(v) => v,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_n", deserialize_with = "deserialize_horizons")]
    pub n: Vec<u64>,
    #[serde(default = "default_chains")]
    pub chains: usize,
    #[serde(default = "default_boot_reps")]
    pub boot_reps: usize,
    #[serde(default = "default_true_reps")]
    pub true_reps: usize,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_l_const")]
    pub l_const: f64,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
    /// `None` falls back to the environment, then to the number of cores.
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub functional: Functional,
    /// Studentization target; defaults to the functional's known value.
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default = "default_methods")]
    pub method: MethodSelection,
    #[serde(default)]
    pub studentization: Studentization,
    #[serde(default = "default_max_moment")]
    pub max_moment: u32,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: default_n(),
            chains: default_chains(),
            boot_reps: default_boot_reps(),
            true_reps: default_true_reps(),
            level: default_level(),
            beta: default_beta(),
            l_const: default_l_const(),
            master_seed: default_seed(),
            workers: None,
            functional: Functional::default(),
            theta: None,
            method: default_methods(),
            studentization: Studentization::default(),
            max_moment: default_max_moment(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() {
            return Err(Error::invalid("n", "at least one horizon required"));
        }
        let positive: [(&'static str, usize); 3] = [
            ("chains", self.chains),
            ("boot_reps", self.boot_reps),
            ("true_reps", self.true_reps),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::invalid(name, "must be positive"));
            }
        }
        if self.workers == Some(0) {
            return Err(Error::invalid("workers", "must be positive"));
        }
        check_level(self.level)?;
        self.normalization()?;
        if self.max_moment > 4 {
            return Err(Error::invalid(
                "max_moment",
                format!("{} exceeds 4", self.max_moment),
            ));
        }
        if let Some(t) = self.theta {
            if !t.is_finite() {
                return Err(Error::invalid("theta", "must be finite"));
            }
        }
        Ok(())
    }

    pub fn normalization(&self) -> Result<Normalization> {
        Normalization::new(self.beta, self.l_const)
    }

    pub fn theta(&self) -> f64 {
        self.theta.unwrap_or_else(|| self.functional.target())
    }
}

/// Block data of one simulated SSRW chain.
#[derive(Debug, Clone)]
pub struct ChainBlocks {
    pub decomposition: BlockDecomposition,
    pub stats: BlockStatistics,
}

/// Seed of chain `index` in experiment `experiment`.
pub fn chain_seed(master_seed: u64, experiment: &str, index: u64) -> u64 {
    derive_seed(master_seed, experiment, index)
}

/// Simulates the SSRW of horizon `n` from `chain_seed` and reduces it to
/// blocks at the atom `{0}`.
pub fn ssrw_blocks(n: usize, functional: Functional, chain_seed: u64) -> ChainBlocks {
    let traj = simulate_ssrw(n, &mut derive_stream(chain_seed, "chain", 0));
    let decomposition = decompose(&traj, &Singleton(0));
    let stats = block_functional(&traj, &decomposition, |k| functional.eval(k));
    ChainBlocks {
        decomposition,
        stats,
    }
}

pub fn true_experiment_id(n: u64) -> String {
    format!("true-n{n}")
}
pub fn anchor_experiment_id(n: u64) -> String {
    format!("anchor-n{n}")
}
pub fn coverage_experiment_id(n: u64) -> String {
    format!("coverage-n{n}")
}
pub fn moments_experiment_id(n: u64) -> String {
    format!("ml-moments-n{n}")
}

/// Monte Carlo sample of `L_n` together with `T_n(α)/u(n)` per chain.
#[derive(Debug, Clone, PartialEq)]
pub struct TrueSample {
    /// `L_n` for every retained chain, in chain order.
    pub l_n: Vec<f64>,
    /// `T_n(α)/u(n)` for the same chains.
    pub normalized_visits: Vec<f64>,
    /// Chains dropped because `numreg < 2` or `σ̂_n = 0`.
    pub discarded: usize,
}

pub fn true_distribution_mc(n: u64, reps: usize, master_seed: u64) -> Result<TrueSample> {
    true_distribution_with(
        n,
        reps,
        master_seed,
        Functional::InvSquare,
        None,
        &Normalization::ssrw(),
    )
}

pub fn true_distribution_with(
    n: u64,
    reps: usize,
    master_seed: u64,
    functional: Functional,
    theta: Option<f64>,
    norm: &Normalization,
) -> Result<TrueSample> {
    if reps == 0 {
        return Err(Error::invalid("reps", "must be positive"));
    }
    let theta = theta.unwrap_or_else(|| functional.target());
    let id = true_experiment_id(n);
    let per_chain: Vec<Option<(f64, f64)>> = (0..reps as u64)
        .into_par_iter()
        .map(|c| {
            let chain = ssrw_blocks(n as usize, functional, chain_seed(master_seed, &id, c));
            let summary = EstimateSummary::from_stats(&chain.stats).ok()?;
            let l = summary.studentize(theta).ok()?;
            Some((l, normalized_visit_count(&chain.decomposition, norm)))
        })
        .collect();
    let mut sample = TrueSample {
        l_n: Vec::with_capacity(reps),
        normalized_visits: Vec::with_capacity(reps),
        discarded: 0,
    };
    for entry in per_chain {
        match entry {
            Some((l, v)) => {
                sample.l_n.push(l);
                sample.normalized_visits.push(v);
            }
            None => sample.discarded += 1,
        }
    }
    Ok(sample)
}

/// Both bootstrap distributions for one anchor chain.
#[derive(Debug, Clone)]
pub struct AnchorBootstrap {
    pub chain: ChainBlocks,
    pub summary: EstimateSummary,
    pub rbb: BootstrapDistribution,
    pub rgb: BootstrapDistribution,
}

pub fn anchor_bootstrap(
    n: u64,
    boot_reps: usize,
    master_seed: u64,
    anchor: u64,
    functional: Functional,
    studentization: Studentization,
) -> Result<AnchorBootstrap> {
    let seed = chain_seed(master_seed, &anchor_experiment_id(n), anchor);
    let chain = ssrw_blocks(n as usize, functional, seed);
    let summary = EstimateSummary::from_stats(&chain.stats)?;
    let rbb = bootstrap_distribution(
        &chain.stats,
        n,
        boot_reps,
        Method::Rbb,
        studentization,
        seed,
    )?;
    let rgb = bootstrap_distribution(
        &chain.stats,
        n,
        boot_reps,
        Method::Rgb,
        studentization,
        seed,
    )?;
    Ok(AnchorBootstrap {
        chain,
        summary,
        rbb,
        rgb,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsSummary {
    pub rbb_true: f64,
    pub rgb_true: f64,
    pub rbb_normal: f64,
    pub rgb_normal: f64,
    pub true_normal: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EcdfTable {
    pub x: Vec<f64>,
    pub f_true: Vec<f64>,
    pub f_rbb: Vec<f64>,
    pub f_rgb: Vec<f64>,
    pub f_normal: Vec<f64>,
    pub ks: KsSummary,
}

impl EcdfTable {
    /// Evaluates the three empirical CDFs and `Φ` on the merged jump points,
    /// thinned to at most [`MAX_GRID_POINTS`] and always containing `x = 0`.
    pub fn build(truth: &Ecdf, rbb: &Ecdf, rgb: &Ecdf) -> Self {
        let mut jumps: Vec<f64> = truth
            .sample()
            .iter()
            .chain(rbb.sample())
            .chain(rgb.sample())
            .copied()
            .collect();
        jumps.sort_by(f64::total_cmp);
        jumps.dedup();
        let mut x = thin(&jumps, MAX_GRID_POINTS - 1);
        if let Err(pos) = x.binary_search_by(|v| v.total_cmp(&0.0)) {
            x.insert(pos, 0.0);
        }
        let ks = KsSummary {
            rbb_true: ks_distance(rbb, truth),
            rgb_true: ks_distance(rgb, truth),
            rbb_normal: ks_distance_to_cdf(rbb, normal_cdf),
            rgb_normal: ks_distance_to_cdf(rgb, normal_cdf),
            true_normal: ks_distance_to_cdf(truth, normal_cdf),
        };
        Self {
            f_true: x.iter().map(|&v| truth.eval(v)).collect(),
            f_rbb: x.iter().map(|&v| rbb.eval(v)).collect(),
            f_rgb: x.iter().map(|&v| rgb.eval(v)).collect(),
            f_normal: x.iter().map(|&v| normal_cdf(v)).collect(),
            x,
            ks,
        }
    }
}

/// Evenly spaced subsequence (by index) keeping both endpoints.
fn thin(sorted: &[f64], max: usize) -> Vec<f64> {
    if sorted.len() <= max {
        return sorted.to_vec();
    }
    let last = sorted.len() - 1;
    (0..max)
        .map(|i| sorted[(i * last + (max - 1) / 2) / (max - 1)])
        .collect()
}

#[derive(Debug, Clone)]
pub struct EcdfComparison {
    pub table: EcdfTable,
    pub anchor: AnchorBootstrap,
    pub truth: TrueSample,
}

/// Anchor chain `anchor` of length `n` bootstrapped `boot_reps` times by both
/// methods, compared with `true_reps` independent realizations of `L_n`.
pub fn cdf_comparison(
    n: u64,
    boot_reps: usize,
    true_reps: usize,
    master_seed: u64,
    anchor: u64,
    studentization: Studentization,
) -> Result<EcdfComparison> {
    let truth = true_distribution_mc(n, true_reps, master_seed)?;
    compare_with_truth(n, boot_reps, master_seed, anchor, studentization, truth)
}

/// As [`cdf_comparison`] with a precomputed true sample, so several anchors
/// can share one.
pub fn compare_with_truth(
    n: u64,
    boot_reps: usize,
    master_seed: u64,
    anchor: u64,
    studentization: Studentization,
    truth: TrueSample,
) -> Result<EcdfComparison> {
    let anchor = anchor_bootstrap(
        n,
        boot_reps,
        master_seed,
        anchor,
        Functional::InvSquare,
        studentization,
    )?;
    let true_ecdf = Ecdf::new(truth.l_n.clone())?;
    let rbb = Ecdf::from_sorted(anchor.rbb.values().to_vec())?;
    let rgb = Ecdf::from_sorted(anchor.rgb.values().to_vec())?;
    Ok(EcdfComparison {
        table: EcdfTable::build(&true_ecdf, &rbb, &rgb),
        anchor,
        truth,
    })
}

/// Normal-approximation interval `G_n ± Φ⁻¹(1 − α/2) σ̂_n / √numreg`.
pub fn normal_interval(summary: &EstimateSummary, level: f64) -> Result<ConfidenceInterval> {
    check_level(level)?;
    let half = normal_quantile(1.0 - (1.0 - level) / 2.0) * summary.standard_error();
    Ok(ConfidenceInterval {
        lo: summary.g_n - half,
        hi: summary.g_n + half,
        level,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalKind {
    Rbb,
    Rgb,
    Normal,
}

impl IntervalKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            IntervalKind::Rbb => "rbb",
            IntervalKind::Rgb => "rgb",
            IntervalKind::Normal => "normal",
        }
    }
}

impl From<Method> for IntervalKind {
    fn from(m: Method) -> Self {
        match m {
            Method::Rbb => IntervalKind::Rbb,
            Method::Rgb => IntervalKind::Rgb,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRow {
    pub n: u64,
    pub method: IntervalKind,
    pub level: f64,
    /// Chains that entered the denominator.
    pub chains: usize,
    pub coverage: f64,
    pub avg_length: f64,
    pub excluded: usize,
    pub degenerate_draws: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoverageReport {
    pub rows: Vec<CoverageRow>,
}

impl CoverageReport {
    pub fn row(&self, n: u64, method: IntervalKind) -> Option<&CoverageRow> {
        self.rows.iter().find(|r| r.n == n && r.method == method)
    }
}

#[derive(Debug, Clone)]
pub struct CoverageSettings {
    pub chains: usize,
    pub boot_reps: usize,
    pub level: f64,
    pub master_seed: u64,
    pub methods: Vec<Method>,
    pub studentization: Studentization,
    pub functional: Functional,
    pub theta: f64,
}

impl CoverageSettings {
    pub fn new(chains: usize, boot_reps: usize, level: f64, master_seed: u64) -> Self {
        Self {
            chains,
            boot_reps,
            level,
            master_seed,
            methods: vec![Method::Rbb, Method::Rgb],
            studentization: Studentization::Original,
            functional: Functional::InvSquare,
            theta: Functional::InvSquare.target(),
        }
    }
}

/// Intervals of one chain, `None` when the chain is excluded.
struct ChainIntervals {
    normal: ConfidenceInterval,
    boot: Vec<(ConfidenceInterval, usize)>,
}

fn chain_intervals(n: u64, settings: &CoverageSettings, seed: u64) -> Option<ChainIntervals> {
    let chain = ssrw_blocks(n as usize, settings.functional, seed);
    let summary = EstimateSummary::from_stats(&chain.stats).ok()?;
    let normal = normal_interval(&summary, settings.level).ok()?;
    let mut boot = Vec::with_capacity(settings.methods.len());
    for &method in &settings.methods {
        let dist = bootstrap_distribution(
            &chain.stats,
            n,
            settings.boot_reps,
            method,
            settings.studentization,
            seed,
        )
        .ok()?;
        let ci = interval_from_sorted(
            summary.g_n,
            summary.sigma_hat,
            summary.numreg,
            dist.values(),
            settings.level,
        )
        .ok()?;
        boot.push((ci, dist.degenerate));
    }
    Some(ChainIntervals { normal, boot })
}

/// Coverage of `θ` and mean length of the RBB, RGB and normal intervals,
/// all computed on the same chains. Chains whose statistics are undefined
/// (`numreg < 2`) or whose bootstrap fails are excluded and counted.
pub fn coverage_experiment(n_list: &[u64], settings: &CoverageSettings) -> Result<CoverageReport> {
    check_level(settings.level)?;
    let mut report = CoverageReport::default();
    for &n in n_list {
        let id = coverage_experiment_id(n);
        let per_chain: Vec<Option<ChainIntervals>> = (0..settings.chains as u64)
            .into_par_iter()
            .map(|c| chain_intervals(n, settings, chain_seed(settings.master_seed, &id, c)))
            .collect();
        let kept: Vec<&ChainIntervals> = per_chain.iter().flatten().collect();
        let excluded = per_chain.len() - kept.len();

        let summarize = |kind: IntervalKind, cis: Vec<(ConfidenceInterval, usize)>| {
            let count = cis.len();
            let covered = cis
                .iter()
                .filter(|(ci, _)| ci.contains(settings.theta))
                .count();
            let total_len: f64 = cis.iter().map(|(ci, _)| ci.length()).sum();
            CoverageRow {
                n,
                method: kind,
                level: settings.level,
                chains: count,
                coverage: if count > 0 {
                    covered as f64 / count as f64
                } else {
                    0.0
                },
                avg_length: if count > 0 {
                    total_len / count as f64
                } else {
                    0.0
                },
                excluded,
                degenerate_draws: cis.iter().map(|(_, d)| d).sum(),
            }
        };
        for (i, &method) in settings.methods.iter().enumerate() {
            let cis = kept.iter().map(|c| c.boot[i]).collect();
            report.rows.push(summarize(method.into(), cis));
        }
        let cis = kept.iter().map(|c| (c.normal, 0)).collect();
        report.rows.push(summarize(IntervalKind::Normal, cis));
    }
    Ok(report)
}

/// `E M_β(1)^m = m! / Γ(1 + mβ)`.
pub fn mittag_leffler_moment(m: u32, beta: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let factorial: f64 = (1..=m).map(f64::from).product();
    factorial / gamma(1.0 + m as f64 * beta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRow {
    pub m: u32,
    pub empirical: f64,
    pub theoretical: f64,
    pub std_err: f64,
}

/// Empirical moments of `T_n(α)/u(n)` over `reps` SSRW chains against the
/// Mittag-Leffler moments.
pub fn ml_moment_diagnostic(
    n: u64,
    reps: usize,
    max_moment: u32,
    norm: &Normalization,
    master_seed: u64,
) -> Result<Vec<MomentRow>> {
    if max_moment > 4 {
        return Err(Error::invalid(
            "max_moment",
            format!("{max_moment} exceeds 4"),
        ));
    }
    if reps < 2 {
        return Err(Error::invalid("reps", "need at least two chains"));
    }
    let id = moments_experiment_id(n);
    let values: Vec<f64> = (0..reps as u64)
        .into_par_iter()
        .map(|c| {
            let traj = simulate_ssrw(
                n as usize,
                &mut derive_stream(chain_seed(master_seed, &id, c), "chain", 0),
            );
            normalized_visit_count(&decompose(&traj, &Singleton(0)), norm)
        })
        .collect();
    Ok((0..=max_moment)
        .map(|m| {
            let powers: Vec<f64> = values.iter().map(|v| v.powi(m as i32)).collect();
            let k = powers.len() as f64;
            let mean = powers.iter().sum::<f64>() / k;
            let var = powers.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (k - 1.0);
            MomentRow {
                m,
                empirical: mean,
                theoretical: mittag_leffler_moment(m, norm.beta()),
                std_err: (var / k).sqrt(),
            }
        })
        .collect())
}

/// Pearson correlation of two equally long samples.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let k = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / k, b.iter().sum::<f64>() / k);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn functional_values() {
        let f = Functional::InvSquare;
        assert_eq!(f.eval(0), 0.0);
        assert_eq!(f.eval(2), 0.25);
        assert_eq!(f.eval(-1), 1.0);
        assert!((f.target() - 3.289868133696453).abs() < 1e-14);
    }

    #[test]
    fn moment_formula() {
        assert_eq!(mittag_leffler_moment(0, 0.5), 1.0);
        assert!((mittag_leffler_moment(1, 0.5) - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-12);
        assert!((mittag_leffler_moment(2, 0.5) - 2.0).abs() < 1e-12);
        // β → 0 limit is Exp(1): m!/Γ(1) = m!
        assert!((mittag_leffler_moment(3, 1e-12) - 6.0).abs() < 1e-9);
    }

    #[test]
    fn config_defaults_and_validation() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        let bad = ExperimentConfig {
            level: 1.5,
            ..ExperimentConfig::default()
        };
        assert!(matches!(
            bad.validate(),
            Err(Error::InvalidParameter { name: "level", .. })
        ));
        let bad = ExperimentConfig {
            max_moment: 5,
            ..ExperimentConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn thinning_keeps_endpoints() {
        let v: Vec<f64> = (0..10_000).map(f64::from).collect();
        let t = thin(&v, 1999);
        assert_eq!(t.len(), 1999);
        assert_eq!(t[0], 0.0);
        assert_eq!(*t.last().unwrap(), 9999.0);
        assert!(t.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn table_columns_monotone_and_bounded() {
        let a = Ecdf::new((0..3000).map(|i| (i as f64 * 0.37).sin() * 2.0).collect()).unwrap();
        let b = Ecdf::new((0..500).map(|i| (i as f64 * 0.11).cos()).collect()).unwrap();
        let t = EcdfTable::build(&a, &b, &b);
        assert!(t.x.len() <= MAX_GRID_POINTS);
        assert!(t.x.contains(&0.0));
        for col in [&t.f_true, &t.f_rbb, &t.f_rgb, &t.f_normal] {
            assert!(col.windows(2).all(|w| w[0] <= w[1]));
            assert!(col.iter().all(|v| (0.0..=1.0).contains(v)));
        }
        assert_eq!(t.f_rbb, t.f_rgb);
        assert_eq!(ks_distance(&b, &b), 0.0);
        let zero = t.x.iter().position(|&v| v == 0.0).unwrap();
        assert_eq!(t.f_normal[zero], 0.5);
    }

    #[test]
    fn coverage_harness_sanity() {
        // an interval that always covers yields coverage 1
        let always = ConfidenceInterval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            level: 0.95,
        };
        assert!(always.contains(Functional::InvSquare.target()));

        let settings = CoverageSettings::new(12, 50, 0.95, 3);
        let report = coverage_experiment(&[200], &settings).unwrap();
        assert_eq!(report.rows.len(), 3);
        for row in &report.rows {
            assert!((0.0..=1.0).contains(&row.coverage));
            assert!(row.avg_length >= 0.0);
            assert_eq!(row.chains + row.excluded, 12);
        }
    }

    #[test]
    fn true_sample_small() {
        let s = true_distribution_mc(50, 1, 9).unwrap();
        assert_eq!(s.l_n.len() + s.discarded, 1);
        let s = true_distribution_mc(2000, 200, 9).unwrap();
        assert_eq!(s.l_n.len() + s.discarded, 200);
        assert_eq!(s.l_n.len(), s.normalized_visits.len());
    }
}
