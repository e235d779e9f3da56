//! Seeded test functions: closed-form profiles and random inputs.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use super::{Axis, GridFunction, Measure, Rational, SequenceFunction};
use crate::error::{Error, Result};

/// The generator every corpus builder draws from.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `exp(−|x|²/(2σ²))`.
pub fn gaussian(axes: Vec<Axis>, measure: Measure, sigma: f64) -> Result<GridFunction> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma = {sigma} must be positive")));
    }
    GridFunction::from_fn(axes, false, measure, |x| {
        (-x.iter().map(|t| t * t).sum::<f64>() / (2.0 * sigma * sigma)).exp()
    })
}

/// Indicator of the first `⌊fraction·N⌋` cells in row-major order.
pub fn indicator(axes: Vec<Axis>, measure: Measure, fraction: f64) -> Result<GridFunction> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidParameter(format!("fraction {fraction} must lie in [0, 1]")));
    }
    let n: usize = axes.iter().map(|a| a.n).product();
    let k = (fraction * n as f64).floor() as usize;
    GridFunction::new(axes, false, measure, (0..n).map(|i| if i < k { 1.0 } else { 0.0 }).collect())
}

/// `|x|^a` with the Euclidean norm.
pub fn power_profile(axes: Vec<Axis>, measure: Measure, a: f64) -> Result<GridFunction> {
    if !a.is_finite() {
        return Err(Error::InvalidParameter(format!("power {a} must be finite")));
    }
    GridFunction::from_fn(axes, false, measure, |x| x.iter().map(|t| t * t).sum::<f64>().sqrt().powf(a))
}

/// A nonnegative trigonometric polynomial `(Σ_k c_k cos(k·x + φ_k))²` on the
/// torus `[0, 2π]^d` with `n` cells per axis.
pub fn trig_polynomial(rng: &mut impl Rng, d: usize, n: usize, degree: usize) -> Result<GridFunction> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidParameter("trigonometric polynomial needs d, n >= 1".into()));
    }
    let terms: Vec<(Vec<f64>, f64, f64)> = (0..=degree)
        .map(|_| {
            let k: Vec<f64> = (0..d).map(|_| rng.random_range(0..=degree) as f64).collect();
            (k, rng.random_range(-1.0..1.0), rng.random_range(0.0..2.0 * PI))
        })
        .collect();
    let axis = Axis::new(0.0, 2.0 * PI, n)?;
    GridFunction::from_fn(vec![axis; d], true, Measure::Lebesgue, |x| {
        let s: f64 =
            terms.iter().map(|(k, c, phi)| c * (k.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + phi).cos()).sum();
        s * s
    })
}

/// Independent uniform samples in `[0, 1)`.
pub fn random_grid(rng: &mut impl Rng, axes: Vec<Axis>, periodic: bool, measure: Measure) -> Result<GridFunction> {
    let n: usize = axes.iter().map(|a| a.n).product();
    GridFunction::new(axes, periodic, measure, (0..n).map(|_| rng.random::<f64>()).collect())
}

/// Uniform `[0, 1)` values at `1..=n`.
pub fn random_sequence(rng: &mut impl Rng, n: usize) -> Result<SequenceFunction> {
    let v: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    SequenceFunction::from_values(&v)
}

/// Uniform `[0, 1)` values at the rationals `a/b` with `a, b ≤ n`.
pub fn random_rational_sequence(rng: &mut impl Rng, n: u64) -> Result<SequenceFunction> {
    let mut s = SequenceFunction::new();
    for a in 1..=n {
        for b in 1..=n {
            let r = Rational::new(a, b)?;
            if s.get(r) == 0.0 {
                s.insert(r, rng.random::<f64>())?;
            }
        }
    }
    Ok(s)
}

/// A standard Gaussian realized on `n` equal-probability cells of `[0, 1]`:
/// cell `i` holds the quantile at `(i + 1/2)/n`.
pub fn gaussian_quantiles(n: usize) -> Result<GridFunction> {
    let normal = Normal::standard();
    let axis = Axis::new(0.0, 1.0, n)?;
    GridFunction::from_fn(vec![axis], false, Measure::UniformProbability, |x| normal.inverse_cdf(x[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::LpNorm;

    #[test]
    fn same_seed_same_corpus() {
        let a = trig_polynomial(&mut seeded_rng(7), 1, 32, 3).unwrap();
        let b = trig_polynomial(&mut seeded_rng(7), 1, 32, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.values().iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn indicator_fraction() {
        let ax = Axis::new(0.0, 1.0, 10).unwrap();
        let f = indicator(vec![ax], Measure::UniformProbability, 0.3).unwrap();
        assert!((f.lp_norm(1.0) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn quantile_grid_is_standard() {
        let g = gaussian_quantiles(1 << 14).unwrap();
        assert!((g.lp_norm(2.0) - 1.0).abs() < 2e-3);
        let mean: f64 = g.values().iter().sum::<f64>() / g.len() as f64;
        assert!(mean.abs() < 1e-12);
    }

    #[test]
    fn power_profile_values() {
        let ax = Axis::new(0.0, 2.0, 2).unwrap();
        let f = power_profile(vec![ax], Measure::Lebesgue, 2.0).unwrap();
        assert_eq!(f.values(), &[0.25, 2.25]);
    }
}
