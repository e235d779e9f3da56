use crate::error::{Error, Result};

const HEADER: &str = "glsmoments v1";

/// Sampled moments `p ↦ |f|_p` on a strictly increasing exponent grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    entries: Vec<(f64, f64)>,
}

impl MomentTable {
    pub fn new(entries: Vec<(f64, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("moment table is empty".into()));
        }
        for (i, &(p, m)) in entries.iter().enumerate() {
            if !(p >= 1.0) || !p.is_finite() {
                return Err(Error::InvalidParameter(format!("exponent {p} must be finite and >= 1")));
            }
            if !(m >= 0.0) || !m.is_finite() {
                return Err(Error::InvalidParameter(format!("moment {m} at p = {p} must be finite and >= 0")));
            }
            if i > 0 && p <= entries[i - 1].0 {
                return Err(Error::InvalidParameter(format!(
                    "exponents must be strictly increasing ({} then {p})",
                    entries[i - 1].0
                )));
            }
        }
        Ok(MomentTable { entries })
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn exponents(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn min_p(&self) -> f64 {
        self.entries[0].0
    }

    pub fn max_p(&self) -> f64 {
        self.entries[self.entries.len() - 1].0
    }

    /// Every moment multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        MomentTable::new(self.entries.iter().map(|&(p, m)| (p, m * c)).collect())
    }

    /// Moment at `p`: exact at table points, linear in `(1/p, ln m)` between
    /// them, `None` outside the hull. `ln |f|_p` is convex in `1/p`, so the
    /// chord never undercuts the true moment.
    pub fn moment_at(&self, p: f64) -> Option<f64> {
        if !(p >= self.min_p() && p <= self.max_p()) {
            return None;
        }
        match self.entries.binary_search_by(|e| e.0.total_cmp(&p)) {
            Ok(i) => Some(self.entries[i].1),
            Err(i) => {
                let (p0, m0) = self.entries[i - 1];
                let (p1, m1) = self.entries[i];
                if m0 == 0.0 || m1 == 0.0 {
                    return Some(0.0);
                }
                let t = (1.0 / p - 1.0 / p0) / (1.0 / p1 - 1.0 / p0);
                Some((m0.ln() + t * (m1.ln() - m0.ln())).exp())
            }
        }
    }

    /// Largest violation of convexity of `p ↦ p·ln m(p)` (the log of the
    /// `p`-th absolute moment) over consecutive triples, relative to the
    /// slope scale. Zero when the table is consistent.
    pub fn log_convexity_violation(&self) -> f64 {
        let h: Vec<(f64, f64)> = self.entries.iter().filter(|e| e.1 > 0.0).map(|&(p, m)| (p, p * m.ln())).collect();
        second_difference_violation(&h)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim() == HEADER => {}
            _ => return Err(Error::Parse { line: 1, msg: format!("expected header `{HEADER}`") }),
        }
        let mut entries = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split('\t');
            let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse { line: i + 1, msg: "expected `p<TAB>moment`".into() });
            };
            let p: f64 =
                a.trim().parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad exponent `{a}`") })?;
            let m: f64 =
                b.trim().parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad moment `{b}`") })?;
            entries.push((p, m));
        }
        MomentTable::new(entries).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from(HEADER);
        out.push('\n');
        for (p, m) in &self.entries {
            out.push_str(&format!("{p}\t{m}\n"));
        }
        out
    }
}

/// Max over interior points of `max(0, s_left − s_right) / max(1, |s_left|, |s_right|)`
/// where `s_*` are the neighbouring divided differences.
pub(crate) fn second_difference_violation(pts: &[(f64, f64)]) -> f64 {
    pts.windows(3)
        .map(|w| {
            let s1 = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            let s2 = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
            (s1 - s2).max(0.0) / 1f64.max(s1.abs()).max(s2.abs())
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_negative() {
        assert!(MomentTable::new(vec![(2.0, 1.0), (1.0, 1.0)]).is_err());
        assert!(MomentTable::new(vec![(1.0, -1.0)]).is_err());
        assert!(MomentTable::new(vec![(0.5, 1.0)]).is_err());
        assert!(MomentTable::new(vec![]).is_err());
    }

    #[test]
    fn parse_round_trip_and_rejects() {
        let t = MomentTable::new(vec![(1.0, 0.5), (2.0, std::f64::consts::FRAC_1_SQRT_2), (4.0, 0.84)]).unwrap();
        assert_eq!(MomentTable::parse(&t.to_text()).unwrap(), t);
        assert!(MomentTable::parse("glsmoments v1\n2\t1\n1\t1\n").is_err());
        assert!(MomentTable::parse("glsmoments v1\n1\t-1\n").is_err());
        assert!(MomentTable::parse("moments\n1\t1\n").is_err());
        assert!(MomentTable::parse("glsmoments v1\n1 1\n").is_err());
    }

    #[test]
    fn interpolation_is_log_linear_in_reciprocal() {
        let t = MomentTable::new(vec![(1.0, 1.0), (3.0, 100.0)]).unwrap();
        assert!((t.moment_at(1.5).unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(t.moment_at(3.0), Some(100.0));
        assert_eq!(t.moment_at(3.5), None);
    }

    #[test]
    fn interpolation_dominates_true_moments() {
        // |x|^a on [0, 1]: |f|_p = (ap + 1)^{-1/p}.
        let m = |p: f64| (2.0 * p + 1.0).powf(-1.0 / p);
        let t = MomentTable::new([1.0, 2.0, 4.0, 8.0].iter().map(|&p| (p, m(p))).collect()).unwrap();
        for i in 0..=70 {
            let p = 1.0 + 0.1 * i as f64;
            assert!(t.moment_at(p).unwrap() >= m(p) * (1.0 - 1e-14), "{p}");
        }
    }
}
