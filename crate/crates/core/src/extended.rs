use std::fmt;
use std::ops::{Div, Mul};

/// A nonnegative extended real: either a finite value or `+∞`.
///
/// `+∞` marks "outside the domain" and is kept apart from floating overflow
/// bookkeeping. Products absorb into `+∞` for positive finite factors and a
/// finite value divided by `+∞` is `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    PosInf,
}

impl Extended {
    pub const ZERO: Extended = Extended::Finite(0.0);
    pub const ONE: Extended = Extended::Finite(1.0);

    /// Maps any non-finite or NaN input to `+∞`.
    pub fn from_f64(x: f64) -> Self {
        if x.is_finite() {
            Extended::Finite(x)
        } else {
            Extended::PosInf
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::PosInf)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(x) => Some(x),
            Extended::PosInf => None,
        }
    }

    /// IEEE view, `+∞` becomes `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            Extended::Finite(x) => x,
            Extended::PosInf => f64::INFINITY,
        }
    }

    pub fn powf(self, e: f64) -> Extended {
        match self {
            Extended::Finite(x) => Extended::from_f64(x.powf(e)),
            Extended::PosInf if e == 0.0 => Extended::ONE,
            Extended::PosInf if e > 0.0 => Extended::PosInf,
            Extended::PosInf => Extended::ZERO,
        }
    }
}

impl From<f64> for Extended {
    fn from(x: f64) -> Self {
        Extended::from_f64(x)
    }
}

impl Mul for Extended {
    type Output = Extended;

    fn mul(self, rhs: Extended) -> Extended {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::from_f64(a * b),
            // 0·∞ only shows up for a zero scale; treat it as ∞ so that an
            // off-domain point never looks feasible.
            _ => Extended::PosInf,
        }
    }
}

impl Mul<f64> for Extended {
    type Output = Extended;

    fn mul(self, rhs: f64) -> Extended {
        self * Extended::from_f64(rhs)
    }
}

impl Div for Extended {
    type Output = Extended;

    fn div(self, rhs: Extended) -> Extended {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::from_f64(a / b),
            (Extended::Finite(_), Extended::PosInf) => Extended::ZERO,
            (Extended::PosInf, _) => Extended::PosInf,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::PosInf => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_rules() {
        let two = Extended::Finite(2.0);
        assert_eq!(two * Extended::PosInf, Extended::PosInf);
        assert_eq!(two / Extended::PosInf, Extended::ZERO);
        assert_eq!(two * two, Extended::Finite(4.0));
        assert_eq!(Extended::from_f64(f64::NAN), Extended::PosInf);
        assert!(Extended::Finite(1e300) < Extended::PosInf);
        assert_eq!(Extended::PosInf.powf(0.0), Extended::ONE);
    }
}
