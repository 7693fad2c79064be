//! Integer-valued Markov chain trajectories.

use rand::RngCore;

/// A realized path `X_0, ..., X_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    states: Vec<i64>,
}

impl Trajectory {
    /// Wraps an explicit path. Panics on an empty vector: a trajectory always
    /// holds at least `X_0`.
    pub fn from_states(states: Vec<i64>) -> Self {
        assert!(!states.is_empty(), "a trajectory holds at least X_0");
        Self { states }
    }

    /// Time horizon `n` (the path has `n + 1` states).
    pub fn n(&self) -> usize {
        self.states.len() - 1
    }

    pub fn states(&self) -> &[i64] {
        &self.states
    }

    pub fn into_states(self) -> Vec<i64> {
        self.states
    }
}

/// Transition rule of a time-homogeneous chain on the integers.
///
/// `step` consumes exactly one 64-bit word from the random stream per
/// transition and must be a pure function of `(state, draw)`.
pub trait ChainModel {
    fn initial_state(&self) -> i64;
    fn step(&self, state: i64, draw: u64) -> i64;
}

/// Simple symmetric random walk started at 0: `+1` when the top bit of the
/// draw is set, `-1` otherwise.
#[derive(Debug, Clone, Copy, Default)]
pub struct SimpleRandomWalk;

impl ChainModel for SimpleRandomWalk {
    fn initial_state(&self) -> i64 {
        0
    }

    #[inline]
    fn step(&self, state: i64, draw: u64) -> i64 {
        // (draw >> 63) is 0 or 1, mapped to -1 or +1
        state + 2 * (draw >> 63) as i64 - 1
    }
}

impl<M: ChainModel + ?Sized> ChainModel for &M {
    fn initial_state(&self) -> i64 {
        (**self).initial_state()
    }
    fn step(&self, state: i64, draw: u64) -> i64 {
        (**self).step(state, draw)
    }
}

pub fn simulate_chain<M, R>(model: &M, n: usize, rng: &mut R) -> Trajectory
where
    M: ChainModel + ?Sized,
    R: RngCore + ?Sized,
{
    let mut states = Vec::with_capacity(n + 1);
    let mut x = model.initial_state();
    states.push(x);
    for _ in 0..n {
        x = model.step(x, rng.next_u64());
        states.push(x);
    }
    Trajectory { states }
}

pub fn simulate_ssrw<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Trajectory {
    simulate_chain(&SimpleRandomWalk, n, rng)
}
