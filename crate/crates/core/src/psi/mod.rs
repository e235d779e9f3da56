//! Generating functions `ψ(p)`, their domains, and GLS norms.

mod interval;
mod moments;

use std::sync::Arc;

pub use interval::PInterval;
pub use moments::MomentTable;

use crate::calculus::{LayerPsi, LayerSolution, OperationDescriptor};
use crate::error::{invalid, Error, Result};
use crate::extended::Extended;

pub(crate) use moments::second_difference_violation;

/// Default relative tolerance of [`check_h_convexity`].
pub const CONVEXITY_TOL: f64 = 1e-9;

/// The closed-form or composite shape of a generating function.
#[derive(Debug, Clone)]
pub enum PsiForm {
    /// `β p^γ`.
    Power {
        beta: f64,
        gamma: f64,
    },
    /// `β p^γ / (p − 1)^δ`.
    RationalFactor {
        beta: f64,
        gamma: f64,
        delta: f64,
    },
    /// `C (p − a)^{−c} (b − p)^{−s}` on `(a, b)`.
    Window {
        scale: f64,
        a: f64,
        b: f64,
        c: f64,
        s: f64,
    },
    /// `1` at `p = r`, `+∞` elsewhere.
    Degenerate {
        r: f64,
    },
    /// `p ↦ |η|_p` read off a moment table.
    Natural(Arc<MomentTable>),
    Product(Arc<PsiFunction>, Arc<PsiFunction>),
    Scaled(f64, Arc<PsiFunction>),
    /// `κ(p)`: the infimum of the bound over the layer of exponents mapped to `p`.
    LayerInfimum(Arc<LayerPsi>),
}

/// Parameters accepted by [`make_psi`].
#[derive(Debug, Clone)]
pub enum PsiSpec {
    Power { beta: f64, gamma: f64 },
    RationalFactor { beta: f64, gamma: f64, delta: f64 },
    Window { scale: f64, a: f64, b: f64, c: f64, s: f64 },
    Degenerate { r: f64 },
    Natural(MomentTable),
}

/// A generating function together with the interval where it is finite.
#[derive(Debug, Clone)]
pub struct PsiFunction {
    domain: PInterval,
    form: PsiForm,
}

/// Builds a generating function on its maximal domain of finiteness,
/// optionally narrowed to `within`.
pub fn make_psi(spec: &PsiSpec, within: Option<PInterval>) -> Result<PsiFunction> {
    let psi = match spec {
        PsiSpec::Power { beta, gamma } => PsiFunction::power(*beta, *gamma)?,
        PsiSpec::RationalFactor { beta, gamma, delta } => PsiFunction::rational_factor(*beta, *gamma, *delta)?,
        PsiSpec::Window { scale, a, b, c, s } => PsiFunction::window(*scale, *a, *b, *c, *s)?,
        PsiSpec::Degenerate { r } => PsiFunction::degenerate(*r)?,
        PsiSpec::Natural(t) => PsiFunction::natural(t.clone())?,
    };
    match within {
        Some(w) => psi.restrict(&w),
        None => Ok(psi),
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} = {x} must be positive and finite")))
    }
}

fn nonnegative(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} = {x} must be nonnegative and finite")))
    }
}

impl PsiFunction {
    pub fn power(beta: f64, gamma: f64) -> Result<Self> {
        positive("beta", beta)?;
        nonnegative("gamma", gamma)?;
        Ok(PsiFunction { domain: PInterval::full(), form: PsiForm::Power { beta, gamma } })
    }

    /// `ψ_γ(p) = p^γ` on `[1, ∞)`.
    pub fn power_type(gamma: f64) -> Result<Self> {
        Self::power(1.0, gamma)
    }

    pub fn rational_factor(beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        positive("beta", beta)?;
        nonnegative("gamma", gamma)?;
        nonnegative("delta", delta)?;
        let domain = if delta > 0.0 { PInterval::above(1.0)? } else { PInterval::full() };
        Ok(PsiFunction { domain, form: PsiForm::RationalFactor { beta, gamma, delta } })
    }

    pub fn window(scale: f64, a: f64, b: f64, c: f64, s: f64) -> Result<Self> {
        positive("C", scale)?;
        nonnegative("c", c)?;
        nonnegative("s", s)?;
        if !(a >= 1.0 && a < b && b.is_finite()) {
            return Err(invalid(format!("window needs 1 <= a < b < inf, got a = {a}, b = {b}")));
        }
        let domain = PInterval::new(a, b, c == 0.0, s == 0.0)?;
        Ok(PsiFunction { domain, form: PsiForm::Window { scale, a, b, c, s } })
    }

    pub fn degenerate(r: f64) -> Result<Self> {
        if !(r >= 1.0 && r.is_finite()) {
            return Err(invalid(format!("degenerate exponent r = {r} must be finite and >= 1")));
        }
        Ok(PsiFunction { domain: PInterval::point(r)?, form: PsiForm::Degenerate { r } })
    }

    /// Natural function of a measured moment table. Tables that are not
    /// log-convex are accepted with a warning; zero moments are rejected.
    pub fn natural(table: MomentTable) -> Result<Self> {
        if table.entries().iter().any(|e| e.1 <= 0.0) {
            return Err(invalid("natural generating function needs strictly positive moments"));
        }
        let violation = table.log_convexity_violation();
        if violation > CONVEXITY_TOL {
            log::warn!("moment table is not log-convex (violation {violation:.3e})");
        }
        let domain = if table.len() == 1 {
            PInterval::point(table.min_p())?
        } else {
            PInterval::closed(table.min_p(), table.max_p())?
        };
        Ok(PsiFunction { domain, form: PsiForm::Natural(Arc::new(table)) })
    }

    /// Pointwise product on the intersected domain.
    pub fn product(a: &PsiFunction, b: &PsiFunction) -> Result<Self> {
        let domain = a.domain.intersect(&b.domain)?;
        Ok(PsiFunction { domain, form: PsiForm::Product(Arc::new(a.clone()), Arc::new(b.clone())) })
    }

    pub fn scaled(c: f64, psi: &PsiFunction) -> Result<Self> {
        positive("scale", c)?;
        Ok(PsiFunction { domain: psi.domain, form: PsiForm::Scaled(c, Arc::new(psi.clone())) })
    }

    /// `κ` for `descriptor` fed with `inputs`, defined on `domain`.
    pub fn layer_infimum(descriptor: OperationDescriptor, inputs: Vec<PsiFunction>, domain: PInterval) -> Result<Self> {
        if descriptor.arity() != inputs.len() {
            return Err(Error::ArityMismatch { expected: descriptor.arity(), got: inputs.len() });
        }
        Ok(PsiFunction { domain, form: PsiForm::LayerInfimum(Arc::new(LayerPsi::new(descriptor, inputs))) })
    }

    /// Same function, domain narrowed to `within`.
    pub fn restrict(&self, within: &PInterval) -> Result<Self> {
        let domain = self
            .domain
            .intersect(within)
            .map_err(|_| Error::EmptyDomain(format!("{} does not meet {}", self.domain, within)))?;
        Ok(PsiFunction { domain, form: self.form.clone() })
    }

    pub fn domain(&self) -> &PInterval {
        &self.domain
    }

    pub fn form(&self) -> &PsiForm {
        &self.form
    }

    /// `Some(γ)` when this is `p^γ` with unit scale.
    pub fn as_power_type(&self) -> Option<f64> {
        match self.form {
            PsiForm::Power { beta: 1.0, gamma } => Some(gamma),
            _ => None,
        }
    }

    /// `ψ(p)`; `+∞` off the domain (including open endpoints) and for `p < 1`.
    pub fn eval(&self, p: f64) -> Extended {
        if !(p >= 1.0) || !self.domain.contains(p) {
            return Extended::PosInf;
        }
        match &self.form {
            PsiForm::Power { beta, gamma } => Extended::from_f64(beta * p.powf(*gamma)),
            PsiForm::RationalFactor { beta, gamma, delta } => {
                Extended::from_f64(beta * p.powf(*gamma) / (p - 1.0).powf(*delta))
            }
            PsiForm::Window { scale, a, b, c, s } => Extended::from_f64(scale * (p - a).powf(-c) * (b - p).powf(-s)),
            PsiForm::Degenerate { .. } => Extended::ONE,
            PsiForm::Natural(t) => t.moment_at(p).map_or(Extended::PosInf, Extended::from_f64),
            PsiForm::Product(a, b) => a.eval(p) * b.eval(p),
            PsiForm::Scaled(c, a) => a.eval(p) * *c,
            PsiForm::LayerInfimum(layer) => layer.solve(p).kappa,
        }
    }

    /// `h(p) = p·ln ψ(p)`, `+∞` off the domain.
    pub fn h(&self, p: f64) -> f64 {
        match self.eval(p) {
            Extended::Finite(v) => p * v.ln(),
            Extended::PosInf => f64::INFINITY,
        }
    }

    /// Layer solution behind a `LayerInfimum` value at `p`.
    pub fn layer_solution(&self, p: f64) -> Option<LayerSolution> {
        match &self.form {
            PsiForm::LayerInfimum(layer) if self.domain.contains(p) => Some(layer.solve(p)),
            PsiForm::Scaled(_, inner) => inner.layer_solution(p),
            _ => None,
        }
    }
}

/// Free-function form of [`PsiFunction::eval`].
pub fn eval_psi(psi: &PsiFunction, p: f64) -> Extended {
    psi.eval(p)
}

/// `sup_p |f|_p / ψ(p)` over the table's exponents that lie in ψ's domain.
///
/// A point domain `{r}` inside the table hull uses the interpolated moment
/// at `r`, so a degenerate ψ reproduces the classical `L^r` norm.
pub fn gls_norm(moments: &MomentTable, psi: &PsiFunction) -> Result<f64> {
    let dom = psi.domain();
    if dom.is_point() {
        let r = dom.lower();
        let m = moments
            .moment_at(r)
            .ok_or_else(|| Error::EmptyIntersection(format!("r = {r} lies outside the moment table")))?;
        return Ok((Extended::Finite(m) / psi.eval(r)).to_f64());
    }
    let mut best: Option<f64> = None;
    for &(p, m) in moments.entries() {
        if !dom.contains(p) {
            continue;
        }
        let ratio = (Extended::Finite(m) / psi.eval(p)).to_f64();
        best = Some(best.map_or(ratio, |b: f64| b.max(ratio)));
    }
    best.ok_or_else(|| Error::EmptyIntersection(format!("no table exponent lies in {dom}")))
}

/// Checks convexity of `h(p) = p·ln ψ(p)` on `grid` via divided differences.
///
/// Returns `(convex, max_violation)`; grid points outside the domain are
/// skipped. A point domain is vacuously convex.
pub fn check_h_convexity(psi: &PsiFunction, grid: &[f64]) -> Result<(bool, f64)> {
    check_h_convexity_with_tol(psi, grid, CONVEXITY_TOL)
}

pub fn check_h_convexity_with_tol(psi: &PsiFunction, grid: &[f64], tol: f64) -> Result<(bool, f64)> {
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid("convexity grid must be strictly increasing"));
    }
    if psi.domain().is_point() {
        return Ok((true, 0.0));
    }
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .filter(|&&p| psi.domain().contains(p))
        .map(|&p| (p, psi.h(p)))
        .filter(|(_, h)| h.is_finite())
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientGrid { need: 3, got: pts.len() });
    }
    let v = second_difference_violation(&pts);
    Ok((v <= tol, v))
}
