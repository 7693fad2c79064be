//! Empirical distribution functions and Kolmogorov-Smirnov distances.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Right-continuous empirical CDF of a finite sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(mut sample: Vec<f64>) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        if sample.iter().any(|x| x.is_nan()) {
            return Err(Error::invalid("sample", "contains NaN"));
        }
        sample.sort_by(f64::total_cmp);
        Ok(Self { sorted: sample })
    }

    /// Builds from an already sorted sample without re-sorting.
    pub fn from_sorted(sorted: Vec<f64>) -> Result<Self> {
        if sorted.is_empty() {
            return Err(Error::EmptySample);
        }
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        Ok(Self { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sample(&self) -> &[f64] {
        &self.sorted
    }

    /// `#{x_i <= x} / len`
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }
}

/// Two-sample sup distance `sup_x |F_a(x) − F_b(x)|`, evaluated at every
/// jump point of either ECDF by a merge walk.
pub fn ks_distance(a: &Ecdf, b: &Ecdf) -> f64 {
    let (xa, xb) = (a.sample(), b.sample());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    // past the end of one sample the remaining gap only shrinks
    d
}

/// One-sample sup distance to a continuous CDF, checking both sides of each
/// jump.
pub fn ks_distance_to_cdf<F: Fn(f64) -> f64>(a: &Ecdf, cdf: F) -> f64 {
    let n = a.len() as f64;
    let xs = a.sample();
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let below = i as f64 / n;
        while i < xs.len() && xs[i] == x {
            i += 1;
        }
        let f = cdf(x);
        d = d.max((f - below).abs()).max((i as f64 / n - f).abs());
    }
    d
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal parameters are valid")
}

/// Standard normal CDF `Φ`.
pub fn normal_cdf(x: f64) -> f64 {
    standard_normal().cdf(x)
}

/// `Φ⁻¹(p)` for `p` in `(0, 1)`.
pub fn normal_quantile(p: f64) -> f64 {
    standard_normal().inverse_cdf(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;
    use rand::Rng;

    #[test]
    fn ecdf_values() {
        let e = Ecdf::new(vec![3.0, 1.0, 2.0]).unwrap();
        assert!((e.eval(2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(e.eval(0.5), 0.0);
        assert_eq!(e.eval(3.0), 1.0);
        assert_eq!(e.eval(10.0), 1.0);
        assert_eq!(Ecdf::new(vec![]), Err(Error::EmptySample));
    }

    #[test]
    fn ecdf_matches_counting() {
        let mut rng = derive_stream(0, "ecdf", 0);
        for _ in 0..100 {
            let len = rng.gen_range(1..60);
            let v: Vec<f64> = (0..len)
                .map(|_| rng.gen_range(-3..4) as f64 * 0.5)
                .collect();
            let e = Ecdf::new(v.clone()).unwrap();
            for k in -10..10 {
                let x = k as f64 * 0.25;
                let naive = v.iter().filter(|&&y| y <= x).count() as f64 / len as f64;
                assert_eq!(e.eval(x), naive);
            }
        }
    }

    #[test]
    fn ks_simple_cases() {
        let a = Ecdf::new(vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(ks_distance(&a, &a.clone()), 0.0);
        let zero = Ecdf::new(vec![0.0]).unwrap();
        let one = Ecdf::new(vec![1.0]).unwrap();
        assert_eq!(ks_distance(&zero, &one), 1.0);
        assert_eq!(ks_distance(&one, &zero), 1.0);
    }

    #[test]
    fn ks_matches_grid_scan() {
        let mut rng = derive_stream(1, "ks", 0);
        for _ in 0..200 {
            let la = rng.gen_range(1..50);
            let lb = rng.gen_range(1..50);
            let a: Vec<f64> = (0..la)
                .map(|_| rng.gen_range(-20..20) as f64 / 4.0)
                .collect();
            let b: Vec<f64> = (0..lb)
                .map(|_| rng.gen_range(-20..20) as f64 / 4.0)
                .collect();
            let (ea, eb) = (Ecdf::new(a.clone()).unwrap(), Ecdf::new(b.clone()).unwrap());
            let naive = a
                .iter()
                .chain(&b)
                .map(|&x| {
                    let fa = a.iter().filter(|&&y| y <= x).count() as f64 / la as f64;
                    let fb = b.iter().filter(|&&y| y <= x).count() as f64 / lb as f64;
                    (fa - fb).abs()
                })
                .fold(0.0, f64::max);
            assert!((ks_distance(&ea, &eb) - naive).abs() <= 1e-12);
        }
    }

    #[test]
    fn one_sample_ks() {
        let e = Ecdf::new(vec![0.0]).unwrap();
        assert!((ks_distance_to_cdf(&e, normal_cdf) - 0.5).abs() < 1e-12);
        let uniform = |x: f64| x.clamp(0.0, 1.0);
        let e = Ecdf::new((1..=10).map(|i| i as f64 / 10.0).collect()).unwrap();
        assert!((ks_distance_to_cdf(&e, uniform) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn normal_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        for x in [0.1, 0.7, 1.3, 2.5, 4.0] {
            assert!((normal_cdf(-x) - (1.0 - normal_cdf(x))).abs() <= 1e-12);
        }
        assert!((normal_quantile(0.975) - 1.959963984540054).abs() < 1e-9);
    }

    #[test]
    fn normal_cdf_matches_quadrature() {
        // composite Simpson on the density over [-12, 1.959964]
        let density = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let (a, b) = (-12.0, 1.959964);
        let m = 200_000;
        let h = (b - a) / m as f64;
        let mut s = density(a) + density(b);
        for k in 1..m {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * density(a + k as f64 * h);
        }
        let oracle = s * h / 3.0;
        assert!((oracle - 0.975).abs() < 1e-6);
        assert!((normal_cdf(1.959964) - oracle).abs() < 1e-7);
    }
}
