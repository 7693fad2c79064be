//! Exact small-instance law of the RBB resample against Monte Carlo.

use std::collections::BTreeMap;

use regen_boot_core::bootstrap::rbb_draw;
use regen_boot_core::{derive_stream, BlockStatistics, Error};

/// Exact law of `T̃*` by enumerating every index sequence up to its stopping
/// time; each sequence of length `k` has probability `numreg^-k`.
fn exact_t_star(lengths: &[u64], n: u64) -> BTreeMap<usize, f64> {
    fn walk(
        lengths: &[u64],
        n: u64,
        depth: usize,
        total: u64,
        p: f64,
        out: &mut BTreeMap<usize, f64>,
    ) {
        if total > n {
            *out.entry(depth - 1).or_default() += p;
            return;
        }
        let q = p / lengths.len() as f64;
        for &l in lengths {
            walk(lengths, n, depth + 1, total + l, q, out);
        }
    }
    let mut out = BTreeMap::new();
    walk(lengths, n, 0, 0, 1.0, &mut out);
    out
}

#[test]
fn t_star_law_matches_enumeration() {
    // lengths (1, 3), n = 6: sequences have at most 7 draws
    let lengths = [1u64, 3];
    let n = 6;
    let exact = exact_t_star(&lengths, n);
    assert!((exact.values().sum::<f64>() - 1.0).abs() < 1e-12);

    let stats = BlockStatistics::from_blocks(vec![0.0, 1.0], lengths.to_vec(), n as usize).unwrap();
    let draws = 1_000_000;
    let mut rng = derive_stream(77, "oracle", 0);
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for _ in 0..draws {
        let t = match rbb_draw(&stats, n, &mut rng) {
            Ok(s) => s.t_star(),
            Err(Error::DegenerateDraw) => 0,
            Err(e) => panic!("{e}"),
        };
        *counts.entry(t).or_default() += 1;
    }
    for (&t, &p) in &exact {
        let freq = *counts.get(&t).unwrap_or(&0) as f64 / draws as f64;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        assert!((freq - p).abs() <= 3.0 * se, "T̃* = {t}: {freq} vs {p}");
    }
    assert!(counts.keys().all(|t| exact.contains_key(t)));
}
