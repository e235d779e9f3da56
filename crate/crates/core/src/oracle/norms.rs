use super::{GridFunction, SequenceFunction};
use crate::error::{Error, Result};
use crate::psi::MomentTable;

/// Quadrature `L^p` norm; `p = ∞` is the max-abs value and `0 < p < 1`
/// gives the usual quasi-norm.
pub trait LpNorm {
    fn lp_norm(&self, p: f64) -> f64;
}

fn scaled_norm(samples: impl Iterator<Item = (f64, f64)> + Clone, p: f64) -> f64 {
    let m = samples.clone().fold(0.0f64, |m, (v, _)| m.max(v.abs()));
    if m == 0.0 || p.is_infinite() {
        return m;
    }
    let s: f64 = samples.map(|(v, w)| (v.abs() / m).powf(p) * w).sum();
    m * s.powf(1.0 / p)
}

impl LpNorm for GridFunction {
    fn lp_norm(&self, p: f64) -> f64 {
        let w = self.cell_weight();
        scaled_norm(self.values().iter().map(|&v| (v, w)), p)
    }
}

impl LpNorm for SequenceFunction {
    fn lp_norm(&self, p: f64) -> f64 {
        scaled_norm(self.iter().map(|(_, v)| (v, 1.0)), p)
    }
}

/// A grid restricted to the cells where `mask` is set.
#[derive(Debug, Clone, Copy)]
pub struct Masked<'a> {
    pub grid: &'a GridFunction,
    pub mask: &'a [bool],
}

impl LpNorm for Masked<'_> {
    fn lp_norm(&self, p: f64) -> f64 {
        let w = self.grid.cell_weight();
        let it = self.grid.values().iter().zip(self.mask).filter(|(_, &m)| m).map(|(&v, _)| (v, w));
        scaled_norm(it, p)
    }
}

/// `(p, |f|_p)` for every `p` in the grid.
pub fn moments_table(f: &impl LpNorm, p_grid: &[f64]) -> Result<MomentTable> {
    if p_grid.iter().any(|p| !(*p >= 1.0)) {
        return Err(Error::ExponentOutOfRange("moment exponents must be >= 1".into()));
    }
    MomentTable::new(p_grid.iter().map(|&p| (p, f.lp_norm(p))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Axis, Measure};

    #[test]
    fn catalog_norms() {
        let ax = Axis::new(0.0, 1.0, 10).unwrap();
        let one = GridFunction::from_fn(vec![ax], false, Measure::UniformProbability, |_| 1.0).unwrap();
        for p in [1.0, 2.5, f64::INFINITY] {
            assert!((one.lp_norm(p) - 1.0).abs() < 1e-15);
        }
        let half =
            GridFunction::from_fn(vec![ax], false, Measure::UniformProbability, |x| (x[0] < 0.5) as u8 as f64).unwrap();
        assert!((half.lp_norm(2.0) - 0.5f64.sqrt()).abs() < 1e-15);
        let g = GridFunction::from_fn(vec![Axis::new(-8.0, 8.0, 4096).unwrap()], false, Measure::Lebesgue, |x| {
            (-x[0] * x[0] / 2.0).exp()
        })
        .unwrap();
        assert!((g.lp_norm(2.0) - std::f64::consts::PI.powf(0.25)).abs() < 1e-6);
    }

    #[test]
    fn masked_and_sequence_norms() {
        let ax = Axis::new(0.0, 4.0, 4).unwrap();
        let g = GridFunction::new(vec![ax], false, Measure::Counting, vec![3.0, 4.0, 100.0, 0.0]).unwrap();
        let mask = [true, true, false, true];
        assert!((Masked { grid: &g, mask: &mask }.lp_norm(2.0) - 5.0).abs() < 1e-14);
        let s = SequenceFunction::from_values(&[3.0, -4.0]).unwrap();
        assert!((s.lp_norm(2.0) - 5.0).abs() < 1e-14);
        assert_eq!(s.lp_norm(f64::INFINITY), 4.0);
    }

    #[test]
    fn moments_scale_with_function() {
        let ax = Axis::new(0.0, 1.0, 7).unwrap();
        let f = GridFunction::from_fn(vec![ax], false, Measure::UniformProbability, |x| 1.0 + x[0]).unwrap();
        let a = moments_table(&f, &[1.0, 2.0, 3.0]).unwrap();
        let b = moments_table(&f.scaled(3.0).unwrap(), &[1.0, 2.0, 3.0]).unwrap();
        for (x, y) in a.entries().iter().zip(b.entries()) {
            assert!((3.0 * x.1 - y.1).abs() < 1e-13 * y.1);
        }
    }
}
