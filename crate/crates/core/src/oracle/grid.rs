use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Measure carried by every cell of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Lebesgue,
    /// Each cell has mass `1/N`.
    UniformProbability,
    /// Each cell has mass 1.
    Counting,
}

impl Measure {
    pub fn token(self) -> &'static str {
        match self {
            Measure::Lebesgue => "lebesgue",
            Measure::UniformProbability => "uniprob",
            Measure::Counting => "counting",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "lebesgue" => Some(Measure::Lebesgue),
            "uniprob" => Some(Measure::UniformProbability),
            "counting" => Some(Measure::Counting),
            _ => None,
        }
    }
}

/// One axis: `n` equal cells covering `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi && n >= 1) {
            return Err(Error::InvalidParameter(format!("bad axis [{lo}, {hi}] with {n} cells")));
        }
        Ok(Axis { lo, hi, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.spacing()
    }
}

/// Samples on a uniform cell grid, row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    axes: Vec<Axis>,
    periodic: bool,
    measure: Measure,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(axes: Vec<Axis>, periodic: bool, measure: Measure, values: Vec<f64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidParameter("grid needs at least one axis".into()));
        }
        let cells: usize = axes.iter().map(|a| a.n).product();
        if values.len() != cells {
            return Err(Error::InvalidParameter(format!("{} values for {cells} cells", values.len())));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite sample {v}")));
        }
        Ok(GridFunction { axes, periodic, measure, values })
    }

    /// Samples `f` at cell centers.
    pub fn from_fn(axes: Vec<Axis>, periodic: bool, measure: Measure, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let cells: usize = axes.iter().map(|a| a.n).product();
        let mut x = vec![0.0; axes.len()];
        let mut values = Vec::with_capacity(cells);
        for flat in 0..cells {
            let mut rem = flat;
            for k in (0..axes.len()).rev() {
                x[k] = axes[k].center(rem % axes[k].n);
                rem /= axes[k].n;
            }
            values.push(f(&x));
        }
        Self::new(axes, periodic, measure, values)
    }

    pub fn dims(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn periodic(&self) -> bool {
        self.periodic
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.n).collect()
    }

    /// Mass of one cell along axis `k`.
    pub fn axis_weight(&self, k: usize) -> f64 {
        match self.measure {
            Measure::Lebesgue => self.axes[k].spacing(),
            Measure::UniformProbability => 1.0 / self.axes[k].n as f64,
            Measure::Counting => 1.0,
        }
    }

    pub fn cell_weight(&self) -> f64 {
        match self.measure {
            Measure::UniformProbability => 1.0 / self.len() as f64,
            _ => (0..self.dims()).map(|k| self.axis_weight(k)).product(),
        }
    }

    pub fn total_measure(&self) -> f64 {
        match self.measure {
            Measure::UniformProbability => 1.0,
            _ => self.cell_weight() * self.len() as f64,
        }
    }

    pub fn same_layout(&self, other: &GridFunction) -> bool {
        self.axes == other.axes && self.periodic == other.periodic && self.measure == other.measure
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.axes.clone(), self.periodic, self.measure, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        self.map(|v| c * v)
    }

    pub fn with_measure(&self, measure: Measure) -> Self {
        GridFunction { measure, ..self.clone() }
    }

    /// Parses the `glsgrid v1` format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let bad = |line: usize, msg: &str| Error::Parse { line: line + 1, msg: msg.to_string() };
        match lines.next() {
            Some((_, l)) if l.trim() == "glsgrid v1" => {}
            _ => return Err(bad(0, "expected header `glsgrid v1`")),
        }
        let (ln, head) = lines.next().ok_or_else(|| bad(1, "missing dims line"))?;
        let tok: Vec<&str> = head.split_whitespace().collect();
        if tok.len() != 6 || tok[0] != "dims" || tok[2] != "periodic" || tok[4] != "measure" {
            return Err(bad(ln, "expected `dims d periodic 0|1 measure m`"));
        }
        let d: usize = tok[1].parse().map_err(|_| bad(ln, "bad dimension"))?;
        let periodic = match tok[3] {
            "0" => false,
            "1" => true,
            _ => return Err(bad(ln, "periodic flag must be 0 or 1")),
        };
        let measure = Measure::from_token(tok[5]).ok_or_else(|| bad(ln, "unknown measure"))?;
        let (ln, axis_line) = lines.next().ok_or_else(|| bad(ln + 1, "missing axis line"))?;
        let tok: Vec<&str> = axis_line.split_whitespace().collect();
        if tok.len() != 3 * d {
            return Err(bad(ln, "expected one `lo hi n` triple per dimension"));
        }
        let mut axes = Vec::with_capacity(d);
        for c in tok.chunks(3) {
            let lo: f64 = c[0].parse().map_err(|_| bad(ln, "bad lo"))?;
            let hi: f64 = c[1].parse().map_err(|_| bad(ln, "bad hi"))?;
            let n: usize = c[2].parse().map_err(|_| bad(ln, "bad cell count"))?;
            axes.push(Axis::new(lo, hi, n).map_err(|e| bad(ln, &e.to_string()))?);
        }
        let mut values = Vec::new();
        for (ln, l) in lines {
            for t in l.split_whitespace() {
                values.push(t.parse::<f64>().map_err(|_| bad(ln, "bad sample"))?);
            }
        }
        Self::new(axes, periodic, measure, values)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("glsgrid v1\n");
        let _ = writeln!(s, "dims {} periodic {} measure {}", self.dims(), self.periodic as u8, self.measure.token());
        let axes: Vec<String> = self.axes.iter().map(|a| format!("{:e} {:e} {}", a.lo, a.hi, a.n)).collect();
        let _ = writeln!(s, "{}", axes.join(" "));
        let last = self.axes[self.dims() - 1].n;
        for row in self.values.chunks(last) {
            let row: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }
}

/// Odometer over a multi-index, last axis fastest.
pub(crate) fn advance(idx: &mut [usize], shape: &[usize]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < shape[k] {
            return true;
        }
        idx[k] = 0;
    }
    false
}

pub(crate) fn flat_index(idx: &[usize], shape: &[usize]) -> usize {
    idx.iter().zip(shape).fold(0, |acc, (&i, &n)| acc * n + i)
}
