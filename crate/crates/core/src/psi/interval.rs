use crate::error::{Error, Result};

/// Relative slack used when a point domain `[r, r]` is matched.
pub(crate) const POINT_TOL: f64 = 1e-12;

/// An exponent interval inside `[1, ∞]` with explicit endpoint flags.
///
/// A closed point interval `[r, r]` is allowed; it is the domain of a
/// degenerate generating function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PInterval {
    lower: f64,
    upper: f64,
    lower_closed: bool,
    upper_closed: bool,
}

impl PInterval {
    pub fn new(lower: f64, upper: f64, lower_closed: bool, upper_closed: bool) -> Result<Self> {
        if !(lower >= 1.0) || !lower.is_finite() {
            return Err(Error::InvalidParameter(format!("interval lower end {lower} must be finite and >= 1")));
        }
        if upper.is_nan() {
            return Err(Error::InvalidParameter("interval upper end is NaN".into()));
        }
        if upper_closed && !upper.is_finite() {
            return Err(Error::InvalidParameter("an infinite upper end cannot be closed".into()));
        }
        if lower > upper || (lower == upper && !(lower_closed && upper_closed)) {
            return Err(Error::EmptyDomain(format!(
                "{}{lower}, {upper}{}",
                if lower_closed { '[' } else { '(' },
                if upper_closed { ']' } else { ')' }
            )));
        }
        Ok(PInterval { lower, upper, lower_closed, upper_closed })
    }

    /// `[lower, upper]`.
    pub fn closed(lower: f64, upper: f64) -> Result<Self> {
        Self::new(lower, upper, true, true)
    }

    /// `(lower, upper)`.
    pub fn open(lower: f64, upper: f64) -> Result<Self> {
        Self::new(lower, upper, false, false)
    }

    /// `[lower, ∞)`.
    pub fn at_least(lower: f64) -> Result<Self> {
        Self::new(lower, f64::INFINITY, true, false)
    }

    /// `(lower, ∞)`.
    pub fn above(lower: f64) -> Result<Self> {
        Self::new(lower, f64::INFINITY, false, false)
    }

    /// `[r, r]`.
    pub fn point(r: f64) -> Result<Self> {
        Self::new(r, r, true, true)
    }

    /// `[1, ∞)`.
    pub fn full() -> Self {
        PInterval { lower: 1.0, upper: f64::INFINITY, lower_closed: true, upper_closed: false }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn lower_closed(&self) -> bool {
        self.lower_closed
    }

    pub fn upper_closed(&self) -> bool {
        self.upper_closed
    }

    pub fn is_point(&self) -> bool {
        self.lower == self.upper
    }

    pub fn is_bounded(&self) -> bool {
        self.upper.is_finite()
    }

    pub fn contains(&self, p: f64) -> bool {
        if p.is_nan() {
            return false;
        }
        if self.is_point() {
            return (p - self.lower).abs() <= POINT_TOL * self.lower;
        }
        let above = if self.lower_closed { p >= self.lower } else { p > self.lower };
        let below = if self.upper_closed { p <= self.upper } else { p < self.upper };
        above && below
    }

    /// Open endpoints win on ties.
    pub fn intersect(&self, other: &PInterval) -> Result<PInterval> {
        let (lower, lower_closed) = match self.lower.partial_cmp(&other.lower) {
            Some(std::cmp::Ordering::Greater) => (self.lower, self.lower_closed),
            Some(std::cmp::Ordering::Less) => (other.lower, other.lower_closed),
            _ => (self.lower, self.lower_closed && other.lower_closed),
        };
        let (upper, upper_closed) = match self.upper.partial_cmp(&other.upper) {
            Some(std::cmp::Ordering::Less) => (self.upper, self.upper_closed),
            Some(std::cmp::Ordering::Greater) => (other.upper, other.upper_closed),
            _ => (self.upper, self.upper_closed && other.upper_closed),
        };
        // A point domain meeting an interval that contains it keeps the point.
        if self.is_point() && other.contains(self.lower) {
            return Ok(*self);
        }
        if other.is_point() && self.contains(other.lower) {
            return Ok(*other);
        }
        PInterval::new(lower, upper, lower_closed, upper_closed)
            .map_err(|_| Error::EmptyIntersection(format!("{self} and {other}")))
    }
}

impl std::fmt::Display for PInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lower_closed { '[' } else { '(' },
            self.lower,
            self.upper,
            if self.upper_closed { ']' } else { ')' }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_intervals() {
        assert!(PInterval::closed(0.5, 2.0).is_err());
        assert!(PInterval::closed(3.0, 2.0).is_err());
        assert!(PInterval::new(2.0, f64::INFINITY, true, true).is_err());
        assert!(PInterval::open(2.0, 2.0).is_err());
        assert!(PInterval::point(2.0).is_ok());
    }

    #[test]
    fn endpoint_flags_govern_membership() {
        let i = PInterval::new(1.0, 3.0, false, true).unwrap();
        assert!(!i.contains(1.0));
        assert!(i.contains(3.0));
        assert!(i.contains(2.0));
        assert!(!i.contains(3.5));
    }

    #[test]
    fn intersection() {
        let a = PInterval::at_least(1.0).unwrap();
        let b = PInterval::open(2.0, 5.0).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), b);
        let c = PInterval::closed(6.0, 7.0).unwrap();
        assert!(matches!(b.intersect(&c), Err(Error::EmptyIntersection(_))));
        let p = PInterval::point(3.0).unwrap();
        assert_eq!(b.intersect(&p).unwrap(), p);
    }
}
