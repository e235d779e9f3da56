use super::grid::{advance, flat_index};
use super::{Axis, GridFunction, LpNorm, Rational, SequenceFunction};
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::fenchel::TailCurve;
use crate::psi::PsiFunction;

/// Default cap on the work of the quadratic scans.
pub const DEFAULT_MAX_OPS: u64 = 1 << 22;

/// Caps the exhaustive scans (min-plus, maximal rectangles, convolution).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_ops: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_ops: DEFAULT_MAX_OPS }
    }
}

impl OracleLimits {
    /// Default limits, overridden by `GLS_MAX_CELLS` when it parses.
    pub fn from_env() -> Self {
        match std::env::var("GLS_MAX_CELLS") {
            Ok(s) => match s.trim().parse::<u64>() {
                Ok(max_ops) => OracleLimits { max_ops },
                Err(_) => {
                    log::warn!("ignoring unparsable GLS_MAX_CELLS={s:?}");
                    Self::default()
                }
            },
            Err(_) => Self::default(),
        }
    }

    fn check(&self, ops: u128) -> Result<()> {
        if ops > self.max_ops as u128 {
            Err(Error::ResourceLimit { ops, cap: self.max_ops })
        } else {
            Ok(())
        }
    }
}

fn same_layout(a: &GridFunction, b: &GridFunction, what: &str) -> Result<()> {
    if a.same_layout(b) {
        Ok(())
    } else {
        Err(Error::IncompatibleGrids(format!("{what} needs identical grids")))
    }
}

/// `f1·f2` cell by cell.
pub fn pointwise_product(a: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
    same_layout(a, b, "pointwise product")?;
    let v = a.values().iter().zip(b.values()).map(|(x, y)| x * y).collect();
    GridFunction::new(a.axes().to_vec(), a.periodic(), a.measure(), v)
}

/// `(f⊗g)(x, y) = f(x)·g(y)` on the product grid.
pub fn tensor_product(a: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
    if a.measure() != b.measure() {
        return Err(Error::IncompatibleGrids("tensor factors must share a measure kind".into()));
    }
    let mut axes = a.axes().to_vec();
    axes.extend_from_slice(b.axes());
    let mut v = Vec::with_capacity(a.len() * b.len());
    for &x in a.values() {
        v.extend(b.values().iter().map(|&y| x * y));
    }
    GridFunction::new(axes, a.periodic() && b.periodic(), a.measure(), v)
}

/// Torus convolution with the normalized weight: `g_i = (1/N) Σ_j f1[i−j] f2[j]`.
pub fn periodic_convolution(a: &GridFunction, b: &GridFunction, limits: &OracleLimits) -> Result<GridFunction> {
    if !a.periodic() || !b.periodic() {
        return Err(Error::MissingPeriodicity);
    }
    same_layout(a, b, "periodic convolution")?;
    let n = a.len();
    limits.check(n as u128 * n as u128)?;
    let shape = a.shape();
    let (av, bv) = (a.values(), b.values());
    let mut out = vec![0.0; n];
    let mut i = vec![0usize; shape.len()];
    let mut diff = vec![0usize; shape.len()];
    loop {
        let mut j = vec![0usize; shape.len()];
        let mut s = 0.0;
        loop {
            for k in 0..shape.len() {
                diff[k] = (i[k] + shape[k] - j[k]) % shape[k];
            }
            s += av[flat_index(&diff, &shape)] * bv[flat_index(&j, &shape)];
            if !advance(&mut j, &shape) {
                break;
            }
        }
        out[flat_index(&i, &shape)] = s / n as f64;
        if !advance(&mut i, &shape) {
            break;
        }
    }
    GridFunction::new(a.axes().to_vec(), true, a.measure(), out)
}

/// Min-plus result with the cells whose minimizer stays off both input
/// boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct InfimalConvolution {
    pub grid: GridFunction,
    pub valid: Vec<bool>,
}

/// `g(x) = min_{y} f1(x − y) + f2(y)` by exhaustive min-plus.
///
/// On boxes the output covers the Minkowski sum of the inputs with
/// `n1 + n2 − 1` cells per axis; a cell is valid when some minimizing pair
/// uses interior cells of both inputs. Periodic inputs use cyclic indices
/// and every cell is valid.
pub fn infimal_convolution(a: &GridFunction, b: &GridFunction, limits: &OracleLimits) -> Result<InfimalConvolution> {
    if a.dims() != b.dims() || a.measure() != b.measure() || a.periodic() != b.periodic() {
        return Err(Error::IncompatibleGrids("min-plus inputs must share dimension, measure, periodicity".into()));
    }
    let periodic = a.periodic();
    for (x, y) in a.axes().iter().zip(b.axes()) {
        let (hx, hy) = (x.spacing(), y.spacing());
        if (hx - hy).abs() > 1e-9 * hx.max(hy) || (periodic && x != y) {
            return Err(Error::IncompatibleGrids("min-plus inputs need equal cell spacing".into()));
        }
    }
    limits.check(a.len() as u128 * b.len() as u128)?;
    let (sa, sb) = (a.shape(), b.shape());
    let so: Vec<usize> = if periodic { sa.clone() } else { sa.iter().zip(&sb).map(|(x, y)| x + y - 1).collect() };
    let axes = a
        .axes()
        .iter()
        .zip(b.axes())
        .zip(&so)
        .map(|((x, y), &n)| {
            let h = x.spacing();
            let lo = x.lo + y.lo + 0.5 * h;
            Axis::new(lo, lo + n as f64 * h, n)
        })
        .collect::<Result<Vec<_>>>()?;
    let interior =
        |idx: &[usize], shape: &[usize]| periodic || idx.iter().zip(shape).all(|(&i, &n)| i > 0 && i + 1 < n);
    let cells: usize = so.iter().product();
    let mut best = vec![f64::INFINITY; cells];
    let mut inner = vec![false; cells];
    let mut i = vec![0usize; sa.len()];
    let mut k = vec![0usize; sa.len()];
    loop {
        let ai = a.values()[flat_index(&i, &sa)];
        let i_in = interior(&i, &sa);
        let mut j = vec![0usize; sb.len()];
        loop {
            for t in 0..k.len() {
                k[t] = if periodic { (i[t] + j[t]) % so[t] } else { i[t] + j[t] };
            }
            let o = flat_index(&k, &so);
            let v = ai + b.values()[flat_index(&j, &sb)];
            let here = i_in && interior(&j, &sb);
            if v < best[o] || (v == best[o] && here && !inner[o]) {
                best[o] = v;
                inner[o] = here;
            }
            if !advance(&mut j, &sb) {
                break;
            }
        }
        if !advance(&mut i, &sa) {
            break;
        }
    }
    let grid = GridFunction::new(axes, periodic, a.measure(), best)?;
    Ok(InfimalConvolution { grid, valid: inner })
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect()
}

/// Multilinear strong maximal function: at each cell, the sup over all
/// axis-parallel index boxes containing it of `Π_i mean_R |f_i|`.
pub fn strong_maximal(fs: &[GridFunction], limits: &OracleLimits) -> Result<GridFunction> {
    let first = fs.first().ok_or_else(|| Error::InvalidParameter("maximal operator needs inputs".into()))?;
    for f in &fs[1..] {
        same_layout(first, f, "strong maximal operator")?;
    }
    let shape = first.shape();
    let work: u128 = shape.iter().map(|&n| (n * (n + 1) * (n + 2) / 6) as u128).product();
    limits.check(work)?;
    let per_axis: Vec<Vec<(usize, usize)>> = shape.iter().map(|&n| pairs(n)).collect();
    let counts: Vec<usize> = per_axis.iter().map(Vec::len).collect();
    let mut out = vec![0.0f64; first.len()];
    let mut r = vec![0usize; shape.len()];
    loop {
        let lo: Vec<usize> = r.iter().enumerate().map(|(k, &c)| per_axis[k][c].0).collect();
        let ext: Vec<usize> = r.iter().enumerate().map(|(k, &c)| per_axis[k][c].1 - per_axis[k][c].0 + 1).collect();
        let size: usize = ext.iter().product();
        let mut sums = vec![0.0; fs.len()];
        let mut off = vec![0usize; shape.len()];
        let mut cell = vec![0usize; shape.len()];
        let mut flats = Vec::with_capacity(size);
        loop {
            for k in 0..shape.len() {
                cell[k] = lo[k] + off[k];
            }
            let fl = flat_index(&cell, &shape);
            flats.push(fl);
            for (s, f) in sums.iter_mut().zip(fs) {
                *s += f.values()[fl].abs();
            }
            if !advance(&mut off, &ext) {
                break;
            }
        }
        let value: f64 = sums.iter().map(|s| s / size as f64).product();
        for fl in flats {
            if value > out[fl] {
                out[fl] = value;
            }
        }
        if !advance(&mut r, &counts) {
            break;
        }
    }
    GridFunction::new(first.axes().to_vec(), first.periodic(), first.measure(), out)
}

/// `g_n = Σ_k f(n/k)·x_k` for `n = 1..=n_max`.
pub fn toeplitz(
    f: &SequenceFunction,
    x: &SequenceFunction,
    n_max: u64,
    limits: &OracleLimits,
) -> Result<SequenceFunction> {
    if !x.has_integer_support() {
        return Err(Error::InvalidParameter("Toeplitz input sequence must have natural indices".into()));
    }
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be >= 1".into()));
    }
    limits.check(n_max as u128 * x.len() as u128)?;
    let mut g = SequenceFunction::new();
    for n in 1..=n_max {
        let s: f64 = x.iter().map(|(k, xk)| f.get(Rational::new(n, k.num()).expect("positive")) * xk).sum();
        g.insert(Rational::integer(n)?, s)?;
    }
    Ok(g)
}

fn check_kernel(kernel: &GridFunction) -> Result<()> {
    if kernel.dims() != 3 {
        return Err(Error::InvalidParameter(format!("kernel needs 3 axes (x, x1, x2), got {}", kernel.dims())));
    }
    Ok(())
}

/// `g(x) = ∫∫ L(x, x1, x2) f1(x1) f2(x2)` by the product midpoint rule.
pub fn bilinear_integral(kernel: &GridFunction, f1: &GridFunction, f2: &GridFunction) -> Result<GridFunction> {
    check_kernel(kernel)?;
    let ax = kernel.axes();
    if f1.axes() != [ax[1]] || f2.axes() != [ax[2]] {
        return Err(Error::IncompatibleGrids("inputs must live on the kernel's x1 and x2 axes".into()));
    }
    if f1.measure() != kernel.measure() || f2.measure() != kernel.measure() {
        return Err(Error::IncompatibleGrids("kernel and inputs must share a measure kind".into()));
    }
    let (n0, n1, n2) = (ax[0].n, ax[1].n, ax[2].n);
    let (w1, w2) = (kernel.axis_weight(1), kernel.axis_weight(2));
    let l = kernel.values();
    let out = (0..n0)
        .map(|i| {
            let mut s = 0.0;
            for j in 0..n1 {
                let row = &l[(i * n1 + j) * n2..(i * n1 + j + 1) * n2];
                let inner: f64 = row.iter().zip(f2.values()).map(|(k, y)| k * y).sum::<f64>() * w2;
                s += inner * f1.values()[j] * w1;
            }
            s
        })
        .collect();
    GridFunction::new(vec![ax[0]], false, kernel.measure(), out)
}

fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

/// Mixed norm `l[L](p, p1, p2)`: `L^{p1'}` over `x1`, then `L^{p2'}` over
/// `x2`, then `L^p` over `x`.
pub fn mixed_norm_kernel(kernel: &GridFunction, p: f64, p1: f64, p2: f64) -> Result<f64> {
    check_kernel(kernel)?;
    if !(p >= 1.0 && p.is_finite() && p1 > 1.0 && p1.is_finite() && p2 > 1.0 && p2.is_finite()) {
        return Err(Error::ExponentOutOfRange(format!("need p >= 1 and p1, p2 in (1, inf), got ({p}, {p1}, {p2})")));
    }
    let m = kernel.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        return Ok(0.0);
    }
    let (q1, q2) = (conjugate(p1), conjugate(p2));
    let ax = kernel.axes();
    let (n0, n1, n2) = (ax[0].n, ax[1].n, ax[2].n);
    let (w0, w1, w2) = (kernel.axis_weight(0), kernel.axis_weight(1), kernel.axis_weight(2));
    let l = kernel.values();
    let mut outer = 0.0;
    for i in 0..n0 {
        let mut mid = 0.0;
        for k in 0..n2 {
            let inner: f64 = (0..n1).map(|j| (l[(i * n1 + j) * n2 + k].abs() / m).powf(q1) * w1).sum();
            mid += inner.powf(q2 / q1) * w2;
        }
        outer += mid.powf(p / q2) * w0;
    }
    Ok(m * outer.powf(1.0 / p))
}

/// `T(y) = max(μ{f > y}, μ{f < −y})`.
pub fn empirical_tail(f: &GridFunction, ys: &[f64]) -> Result<TailCurve> {
    let mut sorted = f.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let w = f.cell_weight();
    let n = sorted.len();
    let pts = ys
        .iter()
        .map(|&y| {
            let above = n - sorted.partition_point(|&v| v <= y);
            let below = sorted.partition_point(|&v| v < -y);
            (y, above.max(below) as f64 * w)
        })
        .collect();
    TailCurve::new(pts)
}

/// `x ↦ f(λx)`: same samples on the box scaled by `1/λ`.
pub fn dilation(f: &GridFunction, lambda: f64) -> Result<GridFunction> {
    if f.periodic() {
        return Err(Error::UnrepresentableScale("dilation of a periodic grid".into()));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::UnrepresentableScale(format!("scale {lambda} must be positive and finite")));
    }
    let axes = f
        .axes()
        .iter()
        .map(|a| Axis::new(a.lo / lambda, a.hi / lambda, a.n))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::UnrepresentableScale(e.to_string()))?;
    GridFunction::new(axes, false, f.measure(), f.values().to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyRow {
    pub p: f64,
    pub norm: f64,
    pub kappa: Extended,
    pub ratio: f64,
}

/// Outcome of a bound certificate over a `p` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub max_ratio: f64,
    pub worst_p: f64,
    pub rows: Vec<VerifyRow>,
}

impl Verification {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_ratio <= 1.0 + tolerance
    }
}

/// `max_p |g|_p / κ(p)` over the grid.
pub fn verify_bound(g: &impl LpNorm, kappa: &PsiFunction, p_grid: &[f64]) -> Result<Verification> {
    if p_grid.is_empty() {
        return Err(Error::InvalidParameter("empty exponent grid".into()));
    }
    if let Some(p) = p_grid.iter().find(|p| !kappa.domain().contains(**p)) {
        return Err(Error::DomainMismatch(format!("p = {p} lies outside {}", kappa.domain())));
    }
    let rows: Vec<VerifyRow> = p_grid
        .iter()
        .map(|&p| {
            let norm = g.lp_norm(p);
            let k = kappa.eval(p);
            let ratio = match k {
                Extended::Finite(k) => norm / k,
                Extended::PosInf => 0.0,
            };
            VerifyRow { p, norm, kappa: k, ratio }
        })
        .collect();
    let worst = rows.iter().fold(&rows[0], |w, r| if r.ratio > w.ratio { r } else { w });
    Ok(Verification { max_ratio: worst.ratio, worst_p: worst.p, rows })
}
