//! Per-operation combinators: each returns the output generating function,
//! usually as a layer infimum over a preset descriptor.

use std::fmt;
use std::sync::Arc;

use super::{split_constant, OperationDescriptor, Tau, Theta};
use crate::error::{Error, Result};
use crate::psi::{PInterval, PsiFunction};

fn harmonic(a: f64, b: f64) -> f64 {
    1.0 / (1.0 / a + 1.0 / b)
}

fn output_interval(lo: f64, lo_closed: bool, hi: f64, hi_closed: bool, what: &str) -> Result<PInterval> {
    let (lo, lo_closed) = if lo < 1.0 { (1.0, true) } else { (lo, lo_closed) };
    let hi_closed = hi_closed && hi.is_finite();
    if (lo - hi).abs() <= 1e-12 * lo {
        if lo_closed && hi_closed {
            return PInterval::point(lo);
        }
    } else if lo < hi {
        return PInterval::new(lo, hi, lo_closed, hi_closed);
    }
    Err(Error::EmptyOutputDomain(format!("no output exponent admits a feasible split for the {what}")))
}

/// Hölder split of a pointwise product: `κ(p) = inf ψ1(q1)·ψ2(q2)` over
/// `1/q1 + 1/q2 = 1/p`.
pub fn combine_product(psi1: &PsiFunction, psi2: &PsiFunction) -> Result<PsiFunction> {
    let (d1, d2) = (psi1.domain(), psi2.domain());
    let domain = output_interval(
        harmonic(d1.lower(), d2.lower()),
        d1.lower_closed() && d2.lower_closed(),
        harmonic(d1.upper(), d2.upper()),
        d1.upper_closed() && d2.upper_closed(),
        "product",
    )?;
    PsiFunction::layer_infimum(OperationDescriptor::holder_product(), vec![psi1.clone(), psi2.clone()], domain)
}

/// Tensor product of independent factors: the plain product `ν1·ν2`.
pub fn combine_tensor(nu1: &PsiFunction, nu2: &PsiFunction) -> Result<PsiFunction> {
    PsiFunction::product(nu1, nu2)
}

/// Convolution on `R^n`: infimum of `G·ζ1(q1)·ζ2(q2)` along
/// `1/q1 + 1/q2 = 1 + 1/p`.
pub fn combine_convolution(zeta1: &PsiFunction, zeta2: &PsiFunction, n: u32) -> Result<PsiFunction> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    let (d1, d2) = (zeta1.domain(), zeta2.domain());
    let s_max = 1.0 / d1.lower() + 1.0 / d2.lower();
    let s_min = 1.0 / d1.upper() + 1.0 / d2.upper();
    let lo_closed = s_max > 2.0 || (d1.lower_closed() && d2.lower_closed());
    let hi_closed = s_min >= 1.0 && d1.upper_closed() && d2.upper_closed();
    let lo = 1.0 / (s_max.min(2.0) - 1.0);
    let hi = if s_min > 1.0 { 1.0 / (s_min - 1.0) } else { f64::INFINITY };
    if s_max < 1.0 {
        return Err(Error::EmptyOutputDomain("1/p1 + 1/p2 < 1 on the whole input box".into()));
    }
    let domain = output_interval(lo, lo_closed, hi, hi_closed, "convolution")?;
    PsiFunction::layer_infimum(OperationDescriptor::convolution(n), vec![zeta1.clone(), zeta2.clone()], domain)
}

/// `m`-fold infimal convolution in dimension `d`: `κ(p) = m^{d/p}·ψ(p)`
/// against the sum of input norms, plus the `p`-free constant `m^d`.
pub fn combine_infimal_convolution(psi: &PsiFunction, d: u32, m: u32) -> Result<(PsiFunction, f64)> {
    if d == 0 || m == 0 {
        return Err(Error::InvalidParameter("dimension and fold count must be >= 1".into()));
    }
    let (df, mf) = (d as f64, m as f64);
    let desc = OperationDescriptor::new(
        "infimal-convolution",
        Theta::Harmonic { offset: 0.0 },
        vec![PInterval::full()],
        vec![Tau::Identity],
        vec![1.0],
        Arc::new(move |q| mf.powf(df / q[0])),
    )?;
    let out = PsiFunction::layer_infimum(desc, vec![psi.clone()], *psi.domain())?;
    Ok((out, mf.powi(d as i32)))
}

fn check_envelope(gamma: f64, c_env: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} must be positive")));
    }
    if !(c_env > 0.0 && c_env.is_finite()) {
        return Err(Error::InvalidParameter(format!("envelope constant {c_env} must be positive")));
    }
    Ok(())
}

/// `d` factors `p_i^γ` with weight `c·p_i^w/(p_i − 1)` each, coupled by
/// `Σ 1/p_i = 1/p`.
fn weighted_split(name: &str, gamma: f64, d: u32, weight_power: f64, c_total: f64) -> Result<PsiFunction> {
    if d == 0 {
        return Err(Error::InvalidParameter("factor count must be >= 1".into()));
    }
    let k = d as usize;
    let desc = OperationDescriptor::new(
        name,
        Theta::Harmonic { offset: 0.0 },
        vec![PInterval::above(1.0)?; k],
        vec![Tau::Identity; k],
        vec![1.0; k],
        Arc::new(move |q| c_total * q.iter().map(|x| x.powf(weight_power) / (x - 1.0)).product::<f64>()),
    )?;
    let domain = if d == 1 { PInterval::above(1.0)? } else { PInterval::full() };
    PsiFunction::layer_infimum(desc, vec![PsiFunction::power_type(gamma)?; k], domain)
}

/// Strong maximal operator: `c^d·Z(p)` with
/// `Z(p) = min Π p_i^{γ+1}/(p_i − 1)` over `Σ 1/p_i = 1/p`.
pub fn combine_maximal(gamma: f64, d: u32, c_env: f64) -> Result<PsiFunction> {
    check_envelope(gamma, c_env)?;
    weighted_split("maximal", gamma, d, 1.0, c_env.powi(d as i32))
}

/// Closed envelope `c^d (dp/(dp − 1))^{d(γ+1)}` quoted for the maximal
/// operator. Reported next to the numeric `κ`; not a bound in general.
pub fn maximal_envelope(gamma: f64, d: u32, c_env: f64, p: f64) -> f64 {
    let (df, dp) = (d as f64, d as f64 * p);
    c_env.powf(df) * (dp / (dp - 1.0)).powf(df * (gamma + 1.0))
}

/// Hausdorff bound over `m` factors: `c·min Π p_j^{γ+2}/(p_j − 1)`.
pub fn combine_hausdorff(gamma: f64, m: u32, c_env: f64) -> Result<PsiFunction> {
    check_envelope(gamma, c_env)?;
    weighted_split("hausdorff", gamma, m, 2.0, c_env)
}

/// Power envelope `c·p^{m(γ+2)}` quoted for the Hausdorff bound.
pub fn hausdorff_envelope(gamma: f64, m: u32, c_env: f64, p: f64) -> f64 {
    c_env * p.powf(m as f64 * (gamma + 2.0))
}

/// `split_constant(γ1, γ2)·(p/(p − 1))^{γ1+γ2}` on `(1, ∞)`.
pub fn combine_toeplitz(g1: f64, g2: f64) -> Result<PsiFunction> {
    let c = split_constant(g1, g2)?;
    PsiFunction::rational_factor(c, g1 + g2, g1 + g2)
}

/// Norm of the kernel of a bilinear integral operator.
#[derive(Clone)]
pub enum KernelNorm {
    /// `l[L] ≡ L̄` with `p1 = p2 = p`.
    Bounded(f64),
    /// `(p, p1, p2) ↦ l[L](p, p1, p2)`, `+∞` where undefined.
    General(Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for KernelNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelNorm::Bounded(l) => write!(f, "Bounded({l})"),
            KernelNorm::General(_) => write!(f, "General(..)"),
        }
    }
}

/// `κ(p) = inf_{p1, p2} l[L](p, p1, p2)·ψ1(p1)·ψ2(p2)`.
pub fn combine_bilinear_integral(psi1: &PsiFunction, psi2: &PsiFunction, kernel: &KernelNorm) -> Result<PsiFunction> {
    match kernel {
        KernelNorm::Bounded(l) => {
            if !(*l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidParameter(format!("kernel bound {l} must be positive")));
            }
            PsiFunction::scaled(*l, &PsiFunction::product(psi1, psi2)?)
        }
        KernelNorm::General(l) => {
            let open = PInterval::above(1.0)?;
            for psi in [psi1, psi2] {
                psi.domain()
                    .intersect(&open)
                    .map_err(|_| Error::EmptyDomain("input domain has no exponent above 1".into()))?;
            }
            let l = l.clone();
            let desc = OperationDescriptor::new(
                "bilinear-integral",
                Theta::Projection(0),
                vec![open; 3],
                vec![Tau::Identity; 3],
                vec![0.0, 1.0, 1.0],
                Arc::new(move |q| l(q[0], q[1], q[2])),
            )?;
            PsiFunction::layer_infimum(desc, vec![PsiFunction::power_type(0.0)?, psi1.clone(), psi2.clone()], open)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::beckner_constant;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn product_examples() {
        let p1 = PsiFunction::power_type(1.0).unwrap();
        let k = combine_product(&p1, &p1).unwrap();
        assert!(close(k.eval(1.0).to_f64(), 4.0, 1e-9));
        let p2 = PsiFunction::power_type(2.0).unwrap();
        let k = combine_product(&p2, &p1).unwrap();
        assert!(close(k.eval(2.0).to_f64(), 54.0, 1e-9));
        let d = PsiFunction::degenerate(6.0).unwrap();
        let k = combine_product(&d, &d).unwrap();
        assert!(k.domain().is_point());
        assert!(close(k.eval(3.0).to_f64(), 1.0, 1e-12));
    }

    #[test]
    fn product_of_disjoint_windows_is_empty() {
        let a = PsiFunction::window(1.0, 1.0, 2.0, 1.0, 1.0).unwrap();
        let b = PsiFunction::degenerate(1.0).unwrap();
        // 1/p = 1/q1 + 1 forces p < 1.
        assert!(matches!(combine_product(&a, &b), Err(Error::EmptyOutputDomain(_))));
    }

    #[test]
    fn convolution_examples() {
        let a = PsiFunction::degenerate(4.0 / 3.0).unwrap();
        let k = combine_convolution(&a, &a, 1).unwrap();
        assert!(k.domain().is_point());
        let (_, g) = beckner_constant(1, 4.0 / 3.0, 4.0 / 3.0).unwrap();
        assert!(close(k.eval(2.0).to_f64(), g, 1e-12));

        let p1 = PsiFunction::power_type(1.0).unwrap();
        let k = combine_convolution(&p1, &p1, 1).unwrap();
        assert!(k.eval(2.0).to_f64() <= 2.0 * (1.0 + 1e-9));

        let one = PsiFunction::power_type(0.0).unwrap();
        let k = combine_convolution(&one, &one, 2).unwrap();
        for p in [1.0, 1.5, 3.0, 20.0] {
            assert!(k.eval(p).to_f64() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn infimal_convolution_factor() {
        let psi = PsiFunction::power_type(1.0).unwrap();
        let (k, relaxed) = combine_infimal_convolution(&psi, 1, 2).unwrap();
        assert!(close(k.eval(1.0).to_f64(), 2.0, 1e-12));
        assert_eq!(relaxed, 2.0);
        let one = PsiFunction::power_type(0.0).unwrap();
        let (k, relaxed) = combine_infimal_convolution(&one, 2, 3).unwrap();
        assert!(close(k.eval(2.0).to_f64(), 3.0, 1e-12));
        assert_eq!(relaxed, 9.0);
        assert!(close(k.eval(1e5).to_f64(), 1.0, 1e-4));
    }

    #[test]
    fn maximal_examples() {
        let z = combine_maximal(1.0, 2, 1.0).unwrap();
        assert!(close(z.eval(1.0).to_f64(), 16.0, 1e-8));
        assert!(close(maximal_envelope(1.0, 2, 1.0, 1.0), 16.0, 1e-12));
        assert!(close(z.eval(2.0).to_f64(), 256.0 / 9.0, 1e-8));
        let z1 = combine_maximal(1.0, 1, 1.0).unwrap();
        assert!(close(z1.eval(2.0).to_f64(), 4.0, 1e-12));
        assert!(z1.eval(1.0).is_infinite());
    }

    #[test]
    fn hausdorff_examples() {
        let z = combine_hausdorff(1.0, 1, 1.0).unwrap();
        assert!(close(z.eval(2.0).to_f64(), 8.0, 1e-12));
        let z = combine_hausdorff(1.0, 2, 1.0).unwrap();
        assert!(close(z.eval(1.0).to_f64(), 64.0, 1e-8));
    }

    #[test]
    fn toeplitz_examples() {
        let t = combine_toeplitz(1.0, 1.0).unwrap();
        assert!(close(t.eval(2.0).to_f64(), 16.0, 1e-12));
        assert!(close(t.eval(1e8).to_f64(), 4.0, 1e-6));
        assert!(t.eval(1.0).is_infinite());
    }

    #[test]
    fn bilinear_examples() {
        let p1 = PsiFunction::power_type(1.0).unwrap();
        let k = combine_bilinear_integral(&p1, &p1, &KernelNorm::Bounded(3.0)).unwrap();
        assert!(close(k.eval(2.0).to_f64(), 12.0, 1e-12));
        // l = 1 everywhere: the infimum sits at the smallest exponents.
        let k = combine_bilinear_integral(&p1, &p1, &KernelNorm::General(Arc::new(|_, _, _| 1.0))).unwrap();
        let v = k.eval(2.0).to_f64();
        assert!((1.0..=1.01).contains(&v), "{v}");
    }
}
