//! Regeneration block decomposition at an atom.
//!
//! For visit times `t_1 < ... < t_T` of the atom in `[0, n]` the path splits
//! into
//!
//! * `B_0 = X[0 ..= t_1]` (first, non-regenerative block),
//! * `B_j = X[t_j + 1 ..= t_{j+1}]` for `j = 1 ..= T - 1` (complete blocks),
//! * `B^(n) = X[t_T + 1 ..= n]` (incomplete tail, possibly empty).
//!
//! A visit at `t = 0` counts, so a chain started in the atom has a one-state
//! `B_0`. With no visit at all, `B_0` covers the whole path and the tail is
//! empty. All sums run left to right in time.

use std::ops::Range;

use crate::chain::Trajectory;
use crate::error::{Error, Result};

pub trait Atom {
    fn contains(&self, state: i64) -> bool;
}

/// The single-state atom `{x}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Singleton(pub i64);

impl Atom for Singleton {
    #[inline]
    fn contains(&self, state: i64) -> bool {
        state == self.0
    }
}

impl<F: Fn(i64) -> bool> Atom for F {
    fn contains(&self, state: i64) -> bool {
        self(state)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    visit_times: Vec<usize>,
    n: usize,
}

impl BlockDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Every time in `[0, n]` at which the chain sits in the atom.
    pub fn visit_times(&self) -> &[usize] {
        &self.visit_times
    }

    /// `T_n(α)`.
    pub fn visit_count(&self) -> usize {
        self.visit_times.len()
    }

    /// Number of complete regeneration blocks, `max(T_n(α) - 1, 0)`.
    pub fn numreg(&self) -> usize {
        self.visit_times.len().saturating_sub(1)
    }

    pub fn b0_range(&self) -> Range<usize> {
        match self.visit_times.first() {
            Some(&t1) => 0..t1 + 1,
            None => 0..self.n + 1,
        }
    }

    /// Index range of `B_j`, `1 <= j <= numreg`.
    pub fn block_range(&self, j: usize) -> Range<usize> {
        assert!(
            (1..=self.numreg()).contains(&j),
            "block index {j} outside 1..={}",
            self.numreg()
        );
        self.visit_times[j - 1] + 1..self.visit_times[j] + 1
    }

    pub fn block_ranges(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.visit_times.windows(2).map(|w| w[0] + 1..w[1] + 1)
    }

    pub fn tail_range(&self) -> Range<usize> {
        match self.visit_times.last() {
            Some(&t) => t + 1..self.n + 1,
            None => self.n + 1..self.n + 1,
        }
    }

    /// `ℓ(B_1), ..., ℓ(B_numreg)`.
    pub fn block_lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.visit_times.windows(2).map(|w| w[1] - w[0])
    }

    /// `T(m)`: visits in `[0, m]`; `m` beyond the horizon is clamped to `n`.
    pub fn visits_up_to(&self, m: usize) -> usize {
        self.visit_times.partition_point(|&t| t <= m)
    }
}

pub fn decompose<A: Atom + ?Sized>(traj: &Trajectory, atom: &A) -> BlockDecomposition {
    let visit_times = traj
        .states()
        .iter()
        .enumerate()
        .filter_map(|(t, &x)| atom.contains(x).then_some(t))
        .collect();
    BlockDecomposition {
        visit_times,
        n: traj.n(),
    }
}

/// Per-block functional sums and lengths: everything the estimators and the
/// bootstrap need from a path.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockStatistics {
    pub f_sums: Vec<f64>,
    pub lengths: Vec<u64>,
    pub f_b0: f64,
    pub f_tail: f64,
    pub n: usize,
}

impl BlockStatistics {
    /// Builds statistics directly from complete-block summaries, with empty
    /// first and tail blocks.
    pub fn from_blocks(f_sums: Vec<f64>, lengths: Vec<u64>, n: usize) -> Result<Self> {
        if f_sums.len() != lengths.len() {
            return Err(Error::invalid(
                "lengths",
                format!("{} lengths for {} block sums", lengths.len(), f_sums.len()),
            ));
        }
        if lengths.contains(&0) {
            return Err(Error::invalid("lengths", "block lengths must be positive"));
        }
        if f_sums.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("f_sums", "block sums must be finite"));
        }
        Ok(Self {
            f_sums,
            lengths,
            f_b0: 0.0,
            f_tail: 0.0,
            n,
        })
    }

    pub fn numreg(&self) -> usize {
        self.f_sums.len()
    }
}

fn range_sum<F: Fn(i64) -> f64>(states: &[i64], range: Range<usize>, f: &F) -> f64 {
    states[range].iter().fold(0.0, |acc, &x| acc + f(x))
}

pub fn block_functional<F>(traj: &Trajectory, decomp: &BlockDecomposition, f: F) -> BlockStatistics
where
    F: Fn(i64) -> f64,
{
    debug_assert_eq!(
        traj.n(),
        decomp.n(),
        "decomposition belongs to another path"
    );
    let states = traj.states();
    BlockStatistics {
        f_sums: decomp
            .block_ranges()
            .map(|r| range_sum(states, r, &f))
            .collect(),
        lengths: decomp.block_lengths().map(|l| l as u64).collect(),
        f_b0: range_sum(states, decomp.b0_range(), &f),
        f_tail: range_sum(states, decomp.tail_range(), &f),
        n: traj.n(),
    }
}

/// `S_n(f) = Σ_{k=0}^{n} f(X_k)`, accumulated left to right.
pub fn partial_sum<F: Fn(i64) -> f64>(traj: &Trajectory, f: F) -> f64 {
    range_sum(traj.states(), 0..traj.n() + 1, &f)
}

/// The normalizing sequence `u(z) = z^β · L` with constant slowly varying
/// part, and its inverse `v(z) = (z / L)^{1/β}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    beta: f64,
    scale: f64,
}

impl Normalization {
    pub fn new(beta: f64, scale: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::invalid("beta", format!("{beta} not in (0, 1)")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::invalid(
                "l_const",
                format!("{scale} must be positive"),
            ));
        }
        Ok(Self { beta, scale })
    }

    /// The simple symmetric random walk: `β = 1/2`, `L = 1/√2`, so that
    /// `u(n) = √(n/2)`.
    pub fn ssrw() -> Self {
        Self {
            beta: 0.5,
            scale: std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn u(&self, z: f64) -> f64 {
        z.powf(self.beta) * self.scale
    }

    pub fn v(&self, z: f64) -> f64 {
        (z / self.scale).powf(1.0 / self.beta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OccupationPaths {
    pub grid: Vec<f64>,
    /// `T_n(t) = T(⌊nt⌋) / u(n)`
    pub visits: Vec<f64>,
    /// `C_n(t) = v(n)^{-1} Σ_{k=0}^{⌊nt⌋} ℓ(B_k)`
    pub cumulative_lengths: Vec<f64>,
}

/// Evaluates the occupation step processes on `grid`.
///
/// Only the observed blocks enter `C_n`: the block index is clamped to
/// `numreg`, and `ℓ(B_0) = t_1` (zero when there is no visit, since then no
/// block is observed at all). `T(⌊nt⌋)` is clamped at the horizon.
pub fn occupation_processes(
    decomp: &BlockDecomposition,
    norm: &Normalization,
    grid: &[f64],
) -> Result<OccupationPaths> {
    if let Some(&bad) = grid.iter().find(|&&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::invalid("grid", format!("{bad} not in (0, +inf)")));
    }
    let n = decomp.n() as f64;
    let (u_n, v_n) = (norm.u(n), norm.v(n));

    // prefix[k] = Σ_{i<=k} ℓ(B_i) for the observed blocks
    let mut prefix = Vec::with_capacity(decomp.numreg() + 1);
    if let Some(&t1) = decomp.visit_times().first() {
        prefix.push(t1 as u64);
        for l in decomp.block_lengths() {
            prefix.push(prefix.last().unwrap() + l as u64);
        }
    }

    let mut visits = Vec::with_capacity(grid.len());
    let mut cumulative_lengths = Vec::with_capacity(grid.len());
    for &t in grid {
        let m = (n * t).floor();
        let m = if m >= usize::MAX as f64 {
            usize::MAX
        } else {
            m as usize
        };
        visits.push(decomp.visits_up_to(m) as f64 / u_n);
        let c = match prefix.len() {
            0 => 0.0,
            len => prefix[m.min(len - 1)] as f64,
        };
        cumulative_lengths.push(c / v_n);
    }
    Ok(OccupationPaths {
        grid: grid.to_vec(),
        visits,
        cumulative_lengths,
    })
}
