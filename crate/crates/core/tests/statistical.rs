//! Monte Carlo checks on the simple symmetric random walk.

use regen_boot_core::bootstrap::{bootstrap_distribution, Method, Studentization};
use regen_boot_core::experiments::{
    correlation, ml_moment_diagnostic, ssrw_blocks, true_distribution_mc, Functional,
};
use regen_boot_core::{
    decompose, derive_stream, ks_distance, ks_distance_to_cdf, normal_cdf, normalized_visit_count,
    occupation_processes, simulate_ssrw, BlockStatistics, Ecdf, EstimateSummary, Normalization,
    Singleton,
};

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

#[test]
fn normalized_visits_first_moment() {
    // 1000 chains of 10^6 steps; E[T(n)/√(n/2)] → 1/Γ(3/2) = 2/√π
    let norm = Normalization::ssrw();
    let rows = ml_moment_diagnostic(1_000_000, 1000, 2, &norm, 3).unwrap();
    assert!((rows[1].theoretical - TWO_OVER_SQRT_PI).abs() < 1e-12);
    assert!(
        (rows[1].empirical / TWO_OVER_SQRT_PI - 1.0).abs() <= 0.05,
        "{rows:?}"
    );
    assert!((rows[2].empirical / 2.0 - 1.0).abs() <= 0.10, "{rows:?}");
}

#[test]
fn occupation_at_one_matches_visit_count() {
    let norm = Normalization::ssrw();
    let mut sum = 0.0;
    for seed in 0..300 {
        let traj = simulate_ssrw(100_000, &mut derive_stream(seed, "occupation", 0));
        let d = decompose(&traj, &Singleton(0));
        let p = occupation_processes(&d, &norm, &[0.25, 0.5, 1.0]).unwrap();
        assert_eq!(p.visits[2], normalized_visit_count(&d, &norm));
        sum += p.visits[2];
    }
    // looser than the 10^6 / 1000-seed check: 300 seeds have a 4.4% standard error
    let mean = sum / 300.0;
    assert!((mean / TWO_OVER_SQRT_PI - 1.0).abs() < 0.15, "{mean}");
}

/// KS distance of √T̃ (G_n − π²/3) / σ to Φ over `chains` chains, with σ a
/// fixed scale.
fn randomly_indexed_ks(n: u64, chains: u64, sigma: f64) -> f64 {
    let target = Functional::InvSquare.target();
    let values: Vec<f64> = (0..chains)
        .filter_map(|c| {
            let ch = ssrw_blocks(n as usize, Functional::InvSquare, 1000 + c);
            let k = ch.stats.numreg();
            (k >= 1).then(|| {
                let g = ch.stats.f_sums.iter().sum::<f64>() / k as f64;
                (k as f64).sqrt() * (g - target) / sigma
            })
        })
        .collect();
    ks_distance_to_cdf(&Ecdf::new(values).unwrap(), normal_cdf)
}

#[test]
fn randomly_indexed_clt_trend() {
    // σ of f(B_1) estimated from pooled blocks of chains independent of the
    // ones tested
    let pooled: Vec<f64> = (0..200)
        .flat_map(|c| {
            ssrw_blocks(1_000_000, Functional::InvSquare, 5_000_000 + c)
                .stats
                .f_sums
        })
        .collect();
    let k = pooled.len() as f64;
    let mean = pooled.iter().sum::<f64>() / k;
    let sigma = (pooled.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / k).sqrt();

    let ks: Vec<f64> = [1_000, 10_000, 100_000]
        .iter()
        .map(|&n| randomly_indexed_ks(n, 2000, sigma))
        .collect();
    assert!(ks[0] > ks[1] && ks[1] > ks[2], "{ks:?}");
}

#[test]
fn studentized_ks_decreases_with_n() {
    let ks: Vec<f64> = [1_000u64, 10_000, 100_000]
        .iter()
        .map(|&n| {
            let s = true_distribution_mc(n, 2000, 21).unwrap();
            ks_distance_to_cdf(&Ecdf::new(s.l_n).unwrap(), normal_cdf)
        })
        .collect();
    assert!(ks[0] > ks[1] && ks[1] > ks[2], "{ks:?}");
}

#[test]
#[ignore = "known failing: L_n is still strongly left-skewed at n = 10^5 (KS ≈ 0.15)"]
fn studentized_statistic_near_normal_at_1e5() {
    let s = true_distribution_mc(100_000, 2000, 1).unwrap();
    let ks = ks_distance_to_cdf(&Ecdf::new(s.l_n).unwrap(), normal_cdf);
    assert!(ks <= 0.05, "KS = {ks}");
}

#[test]
#[ignore = "known failing: mean of L_n is about -0.49 at n = 10^5"]
fn true_sample_mean_near_zero_at_1e5() {
    let s = true_distribution_mc(100_000, 5000, 1).unwrap();
    let mean = s.l_n.iter().sum::<f64>() / s.l_n.len() as f64;
    assert!(mean.abs() <= 0.1, "mean = {mean}");
}

#[test]
#[ignore = "known failing: correlation stays near -0.13 up to n = 10^7"]
fn visit_count_and_studentized_statistic_uncorrelated() {
    let s = true_distribution_mc(100_000, 2000, 1).unwrap();
    let r = correlation(&s.normalized_visits, &s.l_n);
    assert!(r.abs() <= 0.1, "corr = {r}");
}

#[test]
fn block_permutation_leaves_bootstrap_law_unchanged() {
    let chain = ssrw_blocks(200_000, Functional::InvSquare, 8);
    let stats = chain.stats;
    // derangement: rotate by one
    let mut f = stats.f_sums.clone();
    let mut l = stats.lengths.clone();
    f.rotate_left(1);
    l.rotate_left(1);
    let permuted = BlockStatistics::from_blocks(f, l, stats.n).unwrap();
    let reps = 10_000;
    // two-sample KS critical value at level 0.01: 1.628 · √(2 / reps)
    let critical = 1.628 * (2.0 / reps as f64).sqrt();
    for method in [Method::Rbb, Method::Rgb] {
        let a = bootstrap_distribution(&stats, 200_000, reps, method, Studentization::Original, 4)
            .unwrap();
        let b = bootstrap_distribution(
            &permuted,
            200_000,
            reps,
            method,
            Studentization::Original,
            4,
        )
        .unwrap();
        let d = ks_distance(
            &Ecdf::from_sorted(a.values().to_vec()).unwrap(),
            &Ecdf::from_sorted(b.values().to_vec()).unwrap(),
        );
        assert!(d <= critical, "{method}: KS {d} > {critical}");
    }
}

#[test]
fn point_estimate_near_target_at_1e6() {
    let chain = ssrw_blocks(1_000_000, Functional::InvSquare, 31);
    let s = EstimateSummary::from_stats(&chain.stats).unwrap();
    let target = Functional::InvSquare.target();
    assert!((s.g_n - target).abs() <= 3.0 * s.standard_error(), "{s:?}");
}
