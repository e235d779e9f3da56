//! Brute-force ground truth: discretized functions, literal operations,
//! quadrature norms and empirical tails.

pub mod corpus;
mod grid;
mod norms;
mod ops;
mod sequence;

pub use grid::{Axis, GridFunction, Measure};
pub use norms::{moments_table, LpNorm, Masked};
pub use ops::{
    bilinear_integral, dilation, empirical_tail, infimal_convolution, mixed_norm_kernel, periodic_convolution,
    pointwise_product, strong_maximal, tensor_product, toeplitz, verify_bound, InfimalConvolution, OracleLimits,
    Verification, VerifyRow, DEFAULT_MAX_OPS,
};
pub use sequence::{Rational, SequenceFunction};

use crate::error::{Error, Result};

/// Default truncation of Toeplitz outputs.
pub const DEFAULT_TOEPLITZ_N: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperationKind {
    PointwiseProduct,
    TensorProduct,
    PeriodicConvolution,
    InfimalConvolution,
    StrongMaximal,
    Toeplitz {
        n_max: u64,
    },
    /// Inputs: kernel on `(x, x1, x2)`, then `f1`, then `f2`.
    BilinearIntegral,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleValue {
    Grid(GridFunction),
    Sequence(SequenceFunction),
}

impl OracleValue {
    pub fn as_grid(&self) -> Option<&GridFunction> {
        match self {
            OracleValue::Grid(g) => Some(g),
            OracleValue::Sequence(_) => None,
        }
    }

    pub fn as_sequence(&self) -> Option<&SequenceFunction> {
        match self {
            OracleValue::Sequence(s) => Some(s),
            OracleValue::Grid(_) => None,
        }
    }
}

impl LpNorm for OracleValue {
    fn lp_norm(&self, p: f64) -> f64 {
        match self {
            OracleValue::Grid(g) => g.lp_norm(p),
            OracleValue::Sequence(s) => s.lp_norm(p),
        }
    }
}

/// Result of [`apply_operation`]; `valid` is set for min-plus outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutput {
    pub value: OracleValue,
    pub valid: Option<Vec<bool>>,
}

impl OracleOutput {
    fn plain(value: OracleValue) -> Self {
        OracleOutput { value, valid: None }
    }

    /// `|g|_p`, restricted to the validity window when there is one.
    pub fn norm(&self, p: f64) -> f64 {
        match (&self.value, &self.valid) {
            (OracleValue::Grid(grid), Some(mask)) => Masked { grid, mask }.lp_norm(p),
            (v, _) => v.lp_norm(p),
        }
    }
}

impl LpNorm for OracleOutput {
    fn lp_norm(&self, p: f64) -> f64 {
        self.norm(p)
    }
}

fn grids(inputs: &[OracleValue], n: Option<usize>) -> Result<Vec<&GridFunction>> {
    if let Some(n) = n {
        if inputs.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: inputs.len() });
        }
    }
    inputs.iter().map(|v| v.as_grid().ok_or_else(|| Error::IncompatibleGrids("expected grid inputs".into()))).collect()
}

/// Applies `kind` literally to the inputs.
pub fn apply_operation(kind: OperationKind, inputs: &[OracleValue], limits: &OracleLimits) -> Result<OracleOutput> {
    use OperationKind::*;
    Ok(match kind {
        PointwiseProduct => {
            let g = grids(inputs, Some(2))?;
            OracleOutput::plain(OracleValue::Grid(pointwise_product(g[0], g[1])?))
        }
        TensorProduct => {
            let g = grids(inputs, Some(2))?;
            OracleOutput::plain(OracleValue::Grid(tensor_product(g[0], g[1])?))
        }
        PeriodicConvolution => {
            let g = grids(inputs, Some(2))?;
            OracleOutput::plain(OracleValue::Grid(periodic_convolution(g[0], g[1], limits)?))
        }
        InfimalConvolution => {
            let g = grids(inputs, Some(2))?;
            let r = infimal_convolution(g[0], g[1], limits)?;
            OracleOutput { value: OracleValue::Grid(r.grid), valid: Some(r.valid) }
        }
        StrongMaximal => {
            let g: Vec<GridFunction> = grids(inputs, None)?.into_iter().cloned().collect();
            OracleOutput::plain(OracleValue::Grid(strong_maximal(&g, limits)?))
        }
        Toeplitz { n_max } => {
            if inputs.len() != 2 {
                return Err(Error::ArityMismatch { expected: 2, got: inputs.len() });
            }
            let seq = |v: &OracleValue| {
                v.as_sequence().cloned().ok_or_else(|| Error::IncompatibleGrids("Toeplitz takes sequences".into()))
            };
            OracleOutput::plain(OracleValue::Sequence(toeplitz(&seq(&inputs[0])?, &seq(&inputs[1])?, n_max, limits)?))
        }
        BilinearIntegral => {
            let g = grids(inputs, Some(3))?;
            OracleOutput::plain(OracleValue::Grid(bilinear_integral(g[0], g[1], g[2])?))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatch_checks_arity_and_kinds() {
        let ax = Axis::new(0.0, 1.0, 4).unwrap();
        let f = GridFunction::from_fn(vec![ax], false, Measure::Counting, |x| x[0]).unwrap();
        let lim = OracleLimits::default();
        let one = [OracleValue::Grid(f.clone())];
        assert!(matches!(
            apply_operation(OperationKind::PointwiseProduct, &one, &lim),
            Err(Error::ArityMismatch { .. })
        ));
        let two = [OracleValue::Grid(f.clone()), OracleValue::Grid(f.clone())];
        let out = apply_operation(OperationKind::PointwiseProduct, &two, &lim).unwrap();
        assert_eq!(out.value.as_grid().unwrap().values()[1], 0.375 * 0.375);
        assert!(apply_operation(OperationKind::Toeplitz { n_max: 3 }, &two, &lim).is_err());
        let ic = apply_operation(OperationKind::InfimalConvolution, &two, &lim).unwrap();
        assert!(ic.valid.is_some());
    }
}
