use proptest::prelude::*;
use regen_boot_core::bootstrap::{rbb_draw, rgb_draw};
use regen_boot_core::{
    block_functional, decompose, derive_stream, partial_sum, simulate_ssrw, BlockStatistics,
    Singleton, Trajectory,
};

fn inv_square(k: i64) -> f64 {
    if k == 0 {
        0.0
    } else {
        1.0 / (k as f64 * k as f64)
    }
}

fn small_paths() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..4, 1..80)
}

proptest! {
    #[test]
    fn ranges_partition_and_rebuild(states in small_paths(), atom in -2i64..3) {
        let traj = Trajectory::from_states(states.clone());
        let d = decompose(&traj, &Singleton(atom));
        let mut covered = vec![0u8; states.len()];
        let mut rebuilt = Vec::new();
        let ranges = std::iter::once(d.b0_range())
            .chain(d.block_ranges())
            .chain(std::iter::once(d.tail_range()));
        for r in ranges {
            for i in r.clone() {
                covered[i] += 1;
            }
            rebuilt.extend_from_slice(&states[r]);
        }
        prop_assert!(covered.iter().all(|&c| c == 1));
        prop_assert_eq!(rebuilt, states);
        prop_assert_eq!(d.numreg(), d.visit_count().saturating_sub(1));
        if d.numreg() > 0 {
            let total: usize = d.block_lengths().sum();
            let v = d.visit_times();
            prop_assert_eq!(total, v[d.numreg()] - v[0]);
        }
        prop_assert_eq!(decompose(&traj, &Singleton(atom)), d);
    }

    #[test]
    fn split_sum_and_unit_duality(states in small_paths(), atom in -2i64..3) {
        let traj = Trajectory::from_states(states);
        let d = decompose(&traj, &Singleton(atom));
        let s = block_functional(&traj, &d, inv_square);
        let total = partial_sum(&traj, inv_square);
        let split = s.f_b0 + s.f_sums.iter().sum::<f64>() + s.f_tail;
        prop_assert!((total - split).abs() <= 1e-12 * total.abs().max(1.0));
        let ones = block_functional(&traj, &d, |_| 1.0);
        let as_f: Vec<f64> = ones.lengths.iter().map(|&l| l as f64).collect();
        prop_assert_eq!(ones.f_sums, as_f);
    }

    #[test]
    fn rbb_stopping_and_rgb_count(
        lengths in prop::collection::vec(1u64..20, 1..8),
        n in 1u64..60,
        seed in any::<u64>(),
    ) {
        let f: Vec<f64> = lengths.iter().map(|&l| l as f64 * 0.5).collect();
        let stats = BlockStatistics::from_blocks(f, lengths.clone(), n as usize).unwrap();
        let mut rng = derive_stream(seed, "prop", 0);
        if let Ok(s) = rbb_draw(&stats, n, &mut rng) {
            let ell = |k: usize| s.indices[..k].iter().map(|&j| lengths[j]).sum::<u64>();
            prop_assert!(s.t_star() >= 1);
            prop_assert!(ell(s.t_star()) <= n);
            prop_assert!(ell(s.t_star() + 1) > n);
            prop_assert_eq!(ell(s.k_star), s.total_length);
        }
        let g = rgb_draw(&stats, &mut rng).unwrap();
        prop_assert_eq!(g.indices.len(), lengths.len());
    }
}

#[test]
fn ssrw_trajectories_are_deterministic() {
    for seed in 0..10 {
        let a = simulate_ssrw(10_000, &mut derive_stream(seed, "det", 1));
        let b = simulate_ssrw(10_000, &mut derive_stream(seed, "det", 1));
        assert_eq!(a, b);
    }
}
