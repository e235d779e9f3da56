use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A positive rational `num/den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u64,
    den: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidParameter(format!("index {num}/{den} must be a positive rational")));
        }
        let g = gcd(num, den);
        Ok(Rational { num: num / g, den: den / g })
    }

    pub fn integer(n: u64) -> Result<Self> {
        Self::new(n, 1)
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A finitely supported function on the positive rationals under counting
/// measure. Integer-indexed sequences are the special case `den = 1`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SequenceFunction {
    support: BTreeMap<Rational, f64>,
}

impl SequenceFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Rational, f64)>) -> Result<Self> {
        let mut s = Self::new();
        for (r, v) in entries {
            s.insert(r, v)?;
        }
        Ok(s)
    }

    /// `x_1, x_2, …` from a slice.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        Self::from_entries(values.iter().enumerate().map(|(i, &v)| (Rational { num: i as u64 + 1, den: 1 }, v)))
    }

    pub fn insert(&mut self, index: Rational, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite value at {index}")));
        }
        if value != 0.0 {
            self.support.insert(index, value);
        } else {
            self.support.remove(&index);
        }
        Ok(())
    }

    pub fn get(&self, index: Rational) -> f64 {
        self.support.get(&index).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rational, f64)> + Clone + '_ {
        self.support.iter().map(|(r, v)| (*r, *v))
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn has_integer_support(&self) -> bool {
        self.support.keys().all(|r| r.is_integer())
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::from_entries(self.iter().map(|(r, v)| (r, c * v)))
    }

    /// Parses the `glsseq v1` format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim() == "glsseq v1" => {}
            _ => return Err(Error::Parse { line: 1, msg: "expected header `glsseq v1`".into() }),
        }
        let mut out = Self::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
            let mut tok = line.split_whitespace();
            let idx = tok.next().ok_or_else(|| bad("missing index"))?;
            let value: f64 = tok.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad("bad value"))?;
            if tok.next().is_some() {
                return Err(bad("expected `index value`"));
            }
            let (num, den) = match idx.split_once('/') {
                Some((n, d)) => (n.parse::<u64>(), d.parse::<u64>()),
                None => (idx.parse::<u64>(), Ok(1)),
            };
            let (num, den) = (num.map_err(|_| bad("bad index"))?, den.map_err(|_| bad("bad index"))?);
            let r = Rational::new(num, den).map_err(|e| bad(&e.to_string()))?;
            if out.support.contains_key(&r) {
                return Err(bad("duplicate index"));
            }
            out.insert(r, value).map_err(|e| bad(&e.to_string()))?;
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("glsseq v1\n");
        for (r, v) in self.iter() {
            let _ = writeln!(s, "{r} {v:e}");
        }
        s
    }
}
