//! Young–Fenchel conjugates of `h(p) = p·ln ψ(p)`, the exponential tail
//! bounds they yield, and the inverse fit of a power-type ψ from a tail.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::optimize::scan_then_refine;
use crate::psi::PsiFunction;

const SCAN_POINTS: usize = 512;
const REFINE_TOL: f64 = 1e-10;
const MAX_EXPANSIONS: usize = 10;
const EXPANSION_FACTOR: f64 = 4.0;
const FIT_MAX_TAIL: f64 = 0.5;

/// `h*(v)` and the exponent where the supremum is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conjugate {
    pub value: Extended,
    /// `NaN` when the supremum diverges.
    pub argmax: f64,
}

/// `h*(v) = sup_p (p·v − h(p))` over the domain of ψ.
///
/// Unbounded domains are searched on brackets `[a, 4^k·max(a, 1)·4]`; if the
/// maximizer still sits on the right edge after ten expansions the
/// supremum is declared infinite.
pub fn fenchel_conjugate(psi: &PsiFunction, v: f64) -> Conjugate {
    let dom = psi.domain();
    let neg = |p: f64| {
        let h = psi.h(p);
        if h.is_finite() {
            h - p * v
        } else {
            f64::INFINITY
        }
    };
    let lo = dom.lower();
    let finish = |(p, f): (f64, f64)| {
        if f.is_finite() {
            Conjugate { value: Extended::Finite(-f), argmax: p }
        } else {
            Conjugate { value: Extended::PosInf, argmax: f64::NAN }
        }
    };
    if dom.is_point() {
        return finish((lo, neg(lo)));
    }
    if dom.is_bounded() {
        return finish(scan_then_refine(neg, lo, dom.upper(), SCAN_POINTS, REFINE_TOL));
    }
    let mut hi = lo.max(1.0) * EXPANSION_FACTOR;
    for _ in 0..=MAX_EXPANSIONS {
        let (p, f) = scan_then_refine(neg, lo, hi, SCAN_POINTS, REFINE_TOL);
        if p < hi * (1.0 - 1e-6) {
            return finish((p, f));
        }
        hi *= EXPANSION_FACTOR;
    }
    Conjugate { value: Extended::PosInf, argmax: f64::NAN }
}

/// `exp(−h*(ln(y/norm)))`, valid for `y ≥ norm`.
pub fn tail_bound(psi: &PsiFunction, norm: f64, y: f64) -> Result<f64> {
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidParameter(format!("norm = {norm} must be positive and finite")));
    }
    if !(y >= norm) {
        return Err(Error::BelowValidity { y, norm });
    }
    Ok(match fenchel_conjugate(psi, (y / norm).ln()).value {
        Extended::Finite(h) => (-h).exp().clamp(0.0, 1.0),
        Extended::PosInf => 0.0,
    })
}

/// `exp(−γ e^{−1} (y/K)^{1/γ})` for `y ≥ K`.
pub fn power_tail_closed_form(gamma: f64, k: f64, y: f64) -> Result<f64> {
    if !(gamma > 0.0 && k > 0.0 && gamma.is_finite() && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("need gamma > 0 and K > 0, got ({gamma}, {k})")));
    }
    if !(y >= k) {
        return Err(Error::BelowValidity { y, norm: k });
    }
    Ok((-gamma * (-1.0f64).exp() * (y / k).powf(1.0 / gamma)).exp())
}

/// A nonincreasing tail function sampled at increasing levels.
#[derive(Debug, Clone, PartialEq)]
pub struct TailCurve {
    points: Vec<(f64, f64)>,
}

impl TailCurve {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        for (i, &(y, t)) in points.iter().enumerate() {
            if !(y > 0.0 && y.is_finite()) {
                return Err(Error::InvalidParameter(format!("level y = {y} must be positive and finite")));
            }
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidParameter(format!("tail value {t} must be finite and >= 0")));
            }
            if i > 0 {
                let (py, pt) = points[i - 1];
                if y <= py {
                    return Err(Error::InvalidParameter(format!("levels not increasing at {y}")));
                }
                if t > pt {
                    return Err(Error::InvalidParameter(format!("tail increases at y = {y}")));
                }
            }
        }
        Ok(TailCurve { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Parses the `glstail v1` format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim() == "glstail v1" => {}
            _ => return Err(Error::Parse { line: 1, msg: "expected header `glstail v1`".into() }),
        }
        let mut points = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
            let mut it = line.split('\t');
            let y = it.next().and_then(|s| s.trim().parse::<f64>().ok()).ok_or_else(|| bad("bad level"))?;
            let t = it.next().and_then(|s| s.trim().parse::<f64>().ok()).ok_or_else(|| bad("bad tail value"))?;
            if it.next().is_some() {
                return Err(bad("expected two tab-separated fields"));
            }
            points.push((y, t));
        }
        TailCurve::new(points)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("glstail v1\n");
        for (y, t) in &self.points {
            let _ = writeln!(s, "{y:e}\t{t:e}");
        }
        s
    }
}

/// Tail bound of `(ψ, norm)` sampled at the levels `ys ≥ norm`.
pub fn bound_tail_curve(psi: &PsiFunction, norm: f64, ys: &[f64]) -> Result<TailCurve> {
    let pts = ys.iter().map(|&y| Ok((y, tail_bound(psi, norm, y)?))).collect::<Result<Vec<_>>>()?;
    TailCurve::new(pts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFit {
    pub gamma: f64,
    pub k: f64,
    /// RMS residual of `ln(−ln t)`.
    pub residual: f64,
    pub used: usize,
}

/// Least-squares fit of `ln(−ln t) = (1/γ) ln y − (1/γ) ln K + ln(γ/e)`
/// over the points with `0 < t ≤ 1/2`.
pub fn fit_power_psi_from_tail(tail: &TailCurve) -> Result<PowerFit> {
    let pts: Vec<(f64, f64)> = tail
        .points()
        .iter()
        .filter(|(_, t)| *t > 0.0 && *t <= FIT_MAX_TAIL)
        .map(|&(y, t)| (y.ln(), (-t.ln()).ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientPoints { need: 3, got: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mz = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxz: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - mz)).sum();
    if sxx <= 1e-300 {
        return Err(Error::DegenerateFit("levels have zero spread".into()));
    }
    let slope = sxz / sxx;
    if !(slope > 0.0) {
        return Err(Error::DegenerateFit(format!("slope {slope} is not positive")));
    }
    let intercept = mz - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    let gamma = 1.0 / slope;
    let ln_k = gamma * ((gamma / std::f64::consts::E).ln() - intercept);
    Ok(PowerFit { gamma, k: ln_k.exp(), residual, used: pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn conjugate_examples() {
        let flat =
            PsiFunction::power(1.0, 0.0).unwrap().restrict(&crate::psi::PInterval::closed(1.0, 2.0).unwrap()).unwrap();
        let c = fenchel_conjugate(&flat, 1.0);
        assert!(close(c.value.to_f64(), 2.0, 1e-12));
        let lin = PsiFunction::power_type(1.0).unwrap();
        let c = fenchel_conjugate(&lin, 2.0);
        assert!(close(c.value.to_f64(), std::f64::consts::E, 1e-9));
        assert!(close(c.argmax, std::f64::consts::E, 1e-4));
        let c = fenchel_conjugate(&lin, 0.0);
        assert_eq!(c.value.to_f64(), 0.0);
        assert_eq!(c.argmax, 1.0);
    }

    #[test]
    fn unbounded_linear_objective_diverges() {
        let flat = PsiFunction::power_type(0.0).unwrap();
        assert_eq!(fenchel_conjugate(&flat, 1.0).value, Extended::PosInf);
        assert_eq!(tail_bound(&flat, 1.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn tail_examples() {
        let half = PsiFunction::power_type(0.5).unwrap();
        let t = tail_bound(&half, 1.0, 2.0).unwrap();
        assert!(close(t, (-2.0 / std::f64::consts::E).exp(), 1e-8));
        assert!((t - 0.4792).abs() < 1e-4);
        assert!(close(tail_bound(&half, 1.0, 1.0).unwrap(), 1.0, 1e-12));
        assert!(matches!(tail_bound(&half, 2.0, 1.0), Err(Error::BelowValidity { .. })));
        let cf = power_tail_closed_form(1.0, 1.0, std::f64::consts::E).unwrap();
        assert!(close(cf, (-1.0f64).exp(), 1e-15));
        assert!((power_tail_closed_form(0.5, 1.0, 1.0).unwrap() - 0.8320).abs() < 1e-4);
        assert!(close(power_tail_closed_form(3.0, 2.0, 2.0).unwrap(), (-3.0 / std::f64::consts::E).exp(), 1e-15));
    }

    #[test]
    fn fit_recovers_generating_model() {
        let ys: Vec<f64> = (0..40).map(|i| 1.5 + 0.1 * i as f64).collect();
        let pts = ys.iter().map(|&y| (y, power_tail_closed_form(0.5, 1.0, y).unwrap())).collect();
        let fit = fit_power_psi_from_tail(&TailCurve::new(pts).unwrap()).unwrap();
        assert!((fit.gamma - 0.5).abs() < 1e-6);
        assert!((fit.k - 1.0).abs() < 1e-6);
        assert!(fit.residual < 1e-10);
    }

    #[test]
    fn fit_drops_zero_tail_and_needs_points() {
        let pts = vec![(1.0, 0.4), (2.0, 0.1), (3.0, 0.01), (4.0, 0.0), (5.0, 0.0)];
        let fit = fit_power_psi_from_tail(&TailCurve::new(pts).unwrap()).unwrap();
        assert_eq!(fit.used, 3);
        let few = TailCurve::new(vec![(1.0, 0.9), (2.0, 0.3), (3.0, 0.0)]).unwrap();
        assert!(matches!(fit_power_psi_from_tail(&few), Err(Error::InsufficientPoints { .. })));
    }

    #[test]
    fn tail_curve_text_round_trip() {
        let c = TailCurve::new(vec![(1.0, 0.5), (2.0, 0.25)]).unwrap();
        assert_eq!(TailCurve::parse(&c.to_text()).unwrap(), c);
        assert!(TailCurve::parse("glstail v1\n2\t0.1\n1\t0.2\n").is_err());
        assert!(TailCurve::new(vec![(1.0, 0.1), (2.0, 0.2)]).is_err());
    }
}
