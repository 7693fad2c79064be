//! Subcommand implementations. Computation runs on a dedicated rayon pool;
//! all files are written afterwards from the calling thread.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use regen_boot_core::bootstrap::{bootstrap_distribution, confidence_interval, rbb_draw, rgb_draw};
use regen_boot_core::experiments::{
    anchor_experiment_id, cdf_comparison, chain_seed, coverage_experiment, coverage_experiment_id,
    ml_moment_diagnostic, moments_experiment_id, ssrw_blocks, true_experiment_id, CoverageSettings,
    ExperimentConfig, Functional,
};
use regen_boot_core::{
    block_functional, decompose, derive_stream, normal_cdf, partial_sum, quantile, simulate_ssrw,
    BlockDecomposition, BlockStatistics, Ecdf, EstimateSummary, Method, Singleton, Trajectory,
};
use thiserror::Error;

use crate::output::{
    write_csv, write_manifest, OutputError, OutputFile, RunManifest, SeedRoot, Table,
};
use crate::CommonArgs;

/// Experiment id of the single chain used by `simulate` and `bootstrap`.
pub const SINGLE_CHAIN_ID: &str = "single";

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Core(#[from] regen_boot_core::Error),
    #[error(transparent)]
    Output(#[from] OutputError),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("cannot create output directory {path}: {source}")]
    OutDir {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

type CmdResult<T> = Result<T, CommandError>;

/// Collects the tables of one run; written to disk only after computation.
struct Run {
    tables: Vec<(String, Table)>,
    seed_roots: Vec<String>,
}

impl Run {
    fn new() -> Self {
        Self {
            tables: Vec::new(),
            seed_roots: Vec::new(),
        }
    }

    fn table(&mut self, file: impl Into<String>, table: Table) {
        self.tables.push((file.into(), table));
    }

    fn seed_root(&mut self, id: impl Into<String>) {
        self.seed_roots.push(id.into());
    }
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn worker_count(cfg: &ExperimentConfig) -> usize {
    cfg.workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
}

fn suffix(cfg: &ExperimentConfig, n: u64) -> String {
    if cfg.n.len() == 1 {
        String::new()
    } else {
        format!("_n{n}")
    }
}

pub fn run(name: &str, cfg: &ExperimentConfig, args: &CommonArgs) -> CmdResult<i32> {
    let started = unix_now();
    let workers = worker_count(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()?;

    if name == "selftest" {
        let failures = pool.install(run_selftest);
        return Ok(if failures == 0 { 0 } else { 1 });
    }

    let run = pool.install(|| -> CmdResult<Run> {
        match name {
            "simulate" => simulate(cfg),
            "bootstrap" => bootstrap(cfg),
            "ecdf-compare" => ecdf_compare(cfg, args.anchor),
            "coverage" => coverage(cfg),
            "ml-moments" => ml_moments(cfg),
            other => unreachable!("unknown subcommand {other}"),
        }
    })?;

    let dir = &args.out_dir;
    fs::create_dir_all(dir).map_err(|source| CommandError::OutDir {
        path: dir.clone(),
        source,
    })?;
    let mut outputs: Vec<OutputFile> = Vec::with_capacity(run.tables.len());
    for (file, table) in &run.tables {
        outputs.push(write_csv(table, &dir.join(file))?);
    }
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        experiment: name.to_string(),
        master_seed: cfg.master_seed,
        config: serde_json::to_value(cfg).map_err(OutputError::from)?,
        workers,
        started_unix: started,
        finished_unix: unix_now(),
        seed_roots: run
            .seed_roots
            .iter()
            .map(|id| SeedRoot {
                experiment: id.clone(),
                first_chain_seed: chain_seed(cfg.master_seed, id, 0),
            })
            .collect(),
        outputs,
    };
    write_manifest(&manifest, dir)?;
    for f in &manifest.outputs {
        println!("{}", Path::new(dir).join(&f.file).display());
    }
    Ok(0)
}

fn trajectory_table(traj: &Trajectory) -> Table {
    let mut t = Table::new(&["t", "x"]);
    for (i, &x) in traj.states().iter().enumerate() {
        t.push(vec![i.into(), x.into()]);
    }
    t
}

fn regen_table(decomp: &BlockDecomposition) -> Table {
    let mut t = Table::new(&["j", "tau"]);
    for (j, &tau) in decomp.visit_times().iter().enumerate() {
        t.push(vec![(j + 1).into(), tau.into()]);
    }
    t
}

fn blocks_table(stats: &BlockStatistics) -> Table {
    let mut t = Table::new(&["j", "length", "f_sum"]);
    for (j, (&len, &f)) in stats.lengths.iter().zip(&stats.f_sums).enumerate() {
        t.push(vec![(j + 1).into(), len.into(), f.into()]);
    }
    t
}

fn single_chain(cfg: &ExperimentConfig) -> (u64, u64, Trajectory) {
    let n = cfg.n[0];
    let seed = chain_seed(cfg.master_seed, SINGLE_CHAIN_ID, 0);
    let traj = simulate_ssrw(n as usize, &mut derive_stream(seed, "chain", 0));
    (n, seed, traj)
}

fn simulate(cfg: &ExperimentConfig) -> CmdResult<Run> {
    let (_, _, traj) = single_chain(cfg);
    let decomp = decompose(&traj, &Singleton(0));
    let f = cfg.functional;
    let stats = block_functional(&traj, &decomp, |k| f.eval(k));
    let mut run = Run::new();
    run.seed_root(SINGLE_CHAIN_ID);
    run.table("trajectory.csv", trajectory_table(&traj));
    run.table("blocks.csv", blocks_table(&stats));
    run.table("regen.csv", regen_table(&decomp));
    Ok(run)
}

fn bootstrap(cfg: &ExperimentConfig) -> CmdResult<Run> {
    let (n, seed, traj) = single_chain(cfg);
    let decomp = decompose(&traj, &Singleton(0));
    let f = cfg.functional;
    let stats = block_functional(&traj, &decomp, |k| f.eval(k));
    let summary = EstimateSummary::from_stats(&stats)?;

    let mut dump = Table::new(&["replicate", "method", "statistic", "t_star"]);
    let mut intervals = Table::new(&[
        "method",
        "n",
        "numreg",
        "g_n",
        "sigma_hat",
        "level",
        "lo",
        "hi",
        "degenerate_draws",
    ]);
    for &method in cfg.method.methods() {
        let dist =
            bootstrap_distribution(&stats, n, cfg.boot_reps, method, cfg.studentization, seed)?;
        for (r, rep) in dist.replicates.iter().enumerate() {
            dump.push(vec![
                r.into(),
                method.as_str().into(),
                rep.statistic.into(),
                rep.t_star.into(),
            ]);
        }
        let ci = confidence_interval(
            summary.g_n,
            summary.sigma_hat,
            summary.numreg,
            &dist,
            cfg.level,
        )?;
        intervals.push(vec![
            method.as_str().into(),
            n.into(),
            summary.numreg.into(),
            summary.g_n.into(),
            summary.sigma_hat.into(),
            cfg.level.into(),
            ci.lo.into(),
            ci.hi.into(),
            dist.degenerate.into(),
        ]);
    }
    let mut run = Run::new();
    run.seed_root(SINGLE_CHAIN_ID);
    run.table("bootstrap.csv", dump);
    run.table("bootstrap_intervals.csv", intervals);
    Ok(run)
}

fn ecdf_compare(cfg: &ExperimentConfig, anchor: u64) -> CmdResult<Run> {
    let mut run = Run::new();
    let mut ks = Table::new(&["n", "comparison", "ks"]);
    for &n in &cfg.n {
        let cmp = cdf_comparison(
            n,
            cfg.boot_reps,
            cfg.true_reps,
            cfg.master_seed,
            anchor,
            cfg.studentization,
        )?;
        let t = &cmp.table;
        let mut table = Table::new(&["x", "F_true", "F_rbb", "F_rgb", "F_normal"]);
        for i in 0..t.x.len() {
            table.push(vec![
                t.x[i].into(),
                t.f_true[i].into(),
                t.f_rbb[i].into(),
                t.f_rgb[i].into(),
                t.f_normal[i].into(),
            ]);
        }
        for (name, v) in [
            ("rbb_true", t.ks.rbb_true),
            ("rgb_true", t.ks.rgb_true),
            ("rbb_normal", t.ks.rbb_normal),
            ("rgb_normal", t.ks.rgb_normal),
            ("true_normal", t.ks.true_normal),
        ] {
            ks.push(vec![n.into(), name.into(), v.into()]);
        }

        // the anchor path itself, for the trajectory panel
        let seed = chain_seed(cfg.master_seed, &anchor_experiment_id(n), anchor);
        let traj = simulate_ssrw(n as usize, &mut derive_stream(seed, "chain", 0));
        let sfx = suffix(cfg, n);
        run.table(format!("ecdf_compare{sfx}.csv"), table);
        run.table(
            format!("anchor_trajectory{sfx}.csv"),
            trajectory_table(&traj),
        );
        run.table(
            format!("anchor_regen{sfx}.csv"),
            regen_table(&cmp.anchor.chain.decomposition),
        );
        run.seed_root(true_experiment_id(n));
        run.seed_root(anchor_experiment_id(n));
    }
    run.table("ecdf_ks.csv", ks);
    Ok(run)
}

fn coverage(cfg: &ExperimentConfig) -> CmdResult<Run> {
    let settings = CoverageSettings {
        methods: cfg.method.methods().to_vec(),
        studentization: cfg.studentization,
        functional: cfg.functional,
        theta: cfg.theta(),
        ..CoverageSettings::new(cfg.chains, cfg.boot_reps, cfg.level, cfg.master_seed)
    };
    let report = coverage_experiment(&cfg.n, &settings)?;
    let mut table = Table::new(&[
        "n",
        "method",
        "level",
        "chains",
        "coverage",
        "avg_length",
        "excluded",
        "degenerate_draws",
    ]);
    for r in &report.rows {
        table.push(vec![
            r.n.into(),
            r.method.as_str().into(),
            r.level.into(),
            r.chains.into(),
            r.coverage.into(),
            r.avg_length.into(),
            r.excluded.into(),
            r.degenerate_draws.into(),
        ]);
    }
    let mut run = Run::new();
    for &n in &cfg.n {
        run.seed_root(coverage_experiment_id(n));
    }
    run.table("coverage.csv", table);
    Ok(run)
}

fn ml_moments(cfg: &ExperimentConfig) -> CmdResult<Run> {
    let norm = cfg.normalization()?;
    let mut run = Run::new();
    for &n in &cfg.n {
        let rows = ml_moment_diagnostic(n, cfg.chains, cfg.max_moment, &norm, cfg.master_seed)?;
        let mut table = Table::new(&["m", "empirical", "theoretical", "std_err"]);
        for r in rows {
            table.push(vec![
                r.m.into(),
                r.empirical.into(),
                r.theoretical.into(),
                r.std_err.into(),
            ]);
        }
        run.table(format!("ml_moments{}.csv", suffix(cfg, n)), table);
        run.seed_root(moments_experiment_id(n));
    }
    Ok(run)
}

type Check = (&'static str, fn() -> Result<(), String>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn check_partition() -> Result<(), String> {
    for r in 0..200u64 {
        let n = 1 + (r as usize * 37) % 2000;
        let traj = simulate_ssrw(n, &mut derive_stream(r, "selftest", 0));
        let d = decompose(&traj, &Singleton(0));
        let mut rebuilt: Vec<i64> = traj.states()[d.b0_range()].to_vec();
        for range in d.block_ranges() {
            rebuilt.extend_from_slice(&traj.states()[range]);
        }
        rebuilt.extend_from_slice(&traj.states()[d.tail_range()]);
        ensure(rebuilt == traj.states(), || {
            format!("ranges do not rebuild path {r}")
        })?;
    }
    Ok(())
}

fn check_split_sum() -> Result<(), String> {
    let f = Functional::InvSquare;
    for r in 0..200u64 {
        let traj = simulate_ssrw(500 + r as usize * 13, &mut derive_stream(r, "selftest", 1));
        let d = decompose(&traj, &Singleton(0));
        let s = block_functional(&traj, &d, |k| f.eval(k));
        let total = partial_sum(&traj, |k| f.eval(k));
        let split = s.f_b0 + s.f_sums.iter().sum::<f64>() + s.f_tail;
        ensure(
            (total - split).abs() <= 1e-12 * total.abs().max(1.0),
            || format!("S_n = {total}, split = {split}"),
        )?;
        let ones = block_functional(&traj, &d, |_| 1.0);
        ensure(
            ones.f_sums
                .iter()
                .zip(&ones.lengths)
                .all(|(&f, &l)| f == l as f64),
            || "f = 1 does not reproduce block lengths".into(),
        )?;
    }
    Ok(())
}

fn check_resampling() -> Result<(), String> {
    let chain = ssrw_blocks(5000, Functional::InvSquare, 17);
    let stats = &chain.stats;
    let mut rng = derive_stream(17, "selftest", 2);
    for _ in 0..500 {
        let s = rbb_draw(stats, 5000, &mut rng).map_err(|e| e.to_string())?;
        let len = |k: usize| {
            s.indices[..k]
                .iter()
                .map(|&j| stats.lengths[j])
                .sum::<u64>()
        };
        ensure(len(s.k_star - 1) <= 5000 && len(s.k_star) > 5000, || {
            "RBB stopping rule violated".into()
        })?;
        let g = rgb_draw(stats, &mut rng).map_err(|e| e.to_string())?;
        ensure(g.indices.len() == stats.numreg(), || {
            "RGB draw count".into()
        })?;
    }
    Ok(())
}

fn check_bootstrap_determinism() -> Result<(), String> {
    let chain = ssrw_blocks(20_000, Functional::InvSquare, 5);
    for method in [Method::Rbb, Method::Rgb] {
        let run = || {
            bootstrap_distribution(&chain.stats, 20_000, 300, method, Default::default(), 5)
                .map_err(|e| e.to_string())
        };
        let (a, b) = (run()?, run()?);
        ensure(a == b, || {
            format!("{method} replicates differ between runs")
        })?;
        ensure(a.values().windows(2).all(|w| w[0] <= w[1]), || {
            "unsorted".into()
        })?;
        let lo = quantile(&a, 0.025).map_err(|e| e.to_string())?;
        let hi = quantile(&a, 0.975).map_err(|e| e.to_string())?;
        ensure(lo <= hi, || "quantiles out of order".into())?;
    }
    Ok(())
}

fn check_distribution_functions() -> Result<(), String> {
    for i in 0..50 {
        let x = i as f64 * 0.1;
        ensure(
            (normal_cdf(-x) - (1.0 - normal_cdf(x))).abs() <= 1e-12,
            || format!("Φ symmetry fails at {x}"),
        )?;
    }
    let e = Ecdf::new((0..1000).map(|i| ((i * 7919) % 1000) as f64).collect())
        .map_err(|e| e.to_string())?;
    let values: Vec<f64> = (-10..1100).map(|x| e.eval(x as f64)).collect();
    ensure(values.windows(2).all(|w| w[0] <= w[1]), || {
        "ECDF not monotone".into()
    })
}

const CHECKS: &[Check] = &[
    ("block ranges partition the path", check_partition),
    ("split-sum identity and f = 1 duality", check_split_sum),
    ("RBB stopping rule and RGB draw count", check_resampling),
    (
        "bootstrap determinism and quantile order",
        check_bootstrap_determinism,
    ),
    (
        "normal CDF symmetry and ECDF monotonicity",
        check_distribution_functions,
    ),
];

/// Runs every check, printing one line each; returns the failure count.
pub fn run_selftest() -> usize {
    let mut failures = 0;
    for (name, check) in CHECKS {
        match check() {
            Ok(()) => println!("PASS  {name}"),
            Err(msg) => {
                failures += 1;
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    failures
}
