//! Closed-form minimizers of the two-factor splits and the sharp Young
//! convolution constant.

use crate::error::{Error, Result};

fn check_powers(g1: f64, g2: f64) -> Result<()> {
    if g1 > 0.0 && g2 > 0.0 && g1.is_finite() && g2.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("powers must be positive, got ({g1}, {g2})")))
    }
}

/// `(γ1+γ2)^{γ1+γ2} / (γ1^{γ1} γ2^{γ2})`, evaluated in logs.
pub fn split_constant(g1: f64, g2: f64) -> Result<f64> {
    check_powers(g1, g2)?;
    let s = g1 + g2;
    Ok((s * s.ln() - g1 * g1.ln() - g2 * g2.ln()).exp())
}

/// Minimum of `α^{γ1} β^{γ2}` over `α, β > 1` with `1/α + 1/β = 1`.
///
/// Returns `(value, α*, β*)`.
pub fn holder_split_min(g1: f64, g2: f64) -> Result<(f64, f64, f64)> {
    let value = split_constant(g1, g2)?;
    let s = g1 + g2;
    Ok((value, s / g1, s / g2))
}

/// Minimum of `p1^{γ1} p2^{γ2}` over `1/p1 + 1/p2 = 1/p`.
///
/// Returns `(value, p1*, p2*)`.
pub fn conjugate_split_min(g1: f64, g2: f64, p: f64) -> Result<(f64, f64, f64)> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent p = {p} must be finite and >= 1")));
    }
    let (c, a, b) = holder_split_min(g1, g2)?;
    Ok((p.powf(g1 + g2) * c, p * a, p * b))
}

/// `v(p) = [p^{1/p} (p')^{−1/p'}]^{1/2}` with `v(1) = v(∞) = 1`.
pub fn beckner_v(p: f64) -> f64 {
    if p == 1.0 || p.is_infinite() {
        return 1.0;
    }
    let pc = p / (p - 1.0);
    (0.5 * (p.ln() / p - pc.ln() / pc)).exp()
}

/// Sharp Young constant on `R^n`: `r` from `1 + 1/r = 1/p1 + 1/p2` and
/// `G = [v(p1) v(p2) / v(r)]^n`.
pub fn beckner_constant(n: u32, p1: f64, p2: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    if !(p1 >= 1.0 && p2 >= 1.0) {
        return Err(Error::ConstraintViolation(format!("exponents ({p1}, {p2}) must be >= 1")));
    }
    let s = 1.0 / p1 + 1.0 / p2;
    if !(1.0 - 1e-15..=2.0 + 1e-15).contains(&s) {
        return Err(Error::ConstraintViolation(format!("1/p1 + 1/p2 = {s} lies outside [1, 2]")));
    }
    // Written so that an exponent equal to 1 drops out exactly.
    let (a, b) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
    let inv_r = (1.0 / b - (1.0 - 1.0 / a)).max(0.0);
    let r = if inv_r == 0.0 { f64::INFINITY } else { 1.0 / inv_r };
    let g = (beckner_v(p1) * beckner_v(p2) / beckner_v(r)).powi(n as i32);
    Ok((r, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holder_examples() {
        assert_eq!(holder_split_min(1.0, 1.0).unwrap(), (4.0, 2.0, 2.0));
        let (v, a, b) = holder_split_min(2.0, 1.0).unwrap();
        assert!((v - 6.75).abs() < 1e-12 && (a - 1.5).abs() < 1e-15 && (b - 3.0).abs() < 1e-15);
        let (v, _, _) = holder_split_min(1e-9, 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-6);
        assert!(holder_split_min(0.0, 1.0).is_err());
    }

    #[test]
    fn conjugate_examples() {
        let (v, a, b) = conjugate_split_min(1.0, 1.0, 2.0).unwrap();
        assert!((v - 16.0).abs() < 1e-12 && a == 4.0 && b == 4.0);
        let (v, a, b) = conjugate_split_min(2.0, 1.0, 1.0).unwrap();
        assert!((v - 6.75).abs() < 1e-12 && (1.0 / a + 1.0 / b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn beckner_examples() {
        let (r, g) = beckner_constant(3, 1.0, 5.0).unwrap();
        assert_eq!(r, 5.0);
        assert!((g - 1.0).abs() < 1e-15);
        let (r, g) = beckner_constant(1, 4.0 / 3.0, 4.0 / 3.0).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
        assert!((g - 0.877383).abs() < 1e-6, "{g}");
        let (_, g2) = beckner_constant(2, 4.0 / 3.0, 4.0 / 3.0).unwrap();
        assert!((g2 - g * g).abs() < 1e-15);
        assert!((g2 - 0.769800).abs() < 1e-6);
        assert!(beckner_constant(1, 3.0, 3.0).is_err());
        assert_eq!(beckner_constant(1, 2.0, 2.0).unwrap().0, f64::INFINITY);
    }
}
