//! Deterministic one-dimensional search helpers shared by the conjugate and
//! layer solvers.

/// Inverse golden ratio, `(√5 − 1)/2`.
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// `count` points spaced evenly in `ln x` over `[lo, hi]`, endpoints included.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && count >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    let mut out: Vec<f64> = (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect();
    out[0] = lo;
    out[count - 1] = hi;
    out
}

/// Golden-section minimization of `f` on `[lo, hi]`.
///
/// Stops when the bracket width falls below `rel_tol · max(|x|, 1e-300)`.
/// Returns `(argmin, min)`. Non-finite values are fine: `+∞` just loses
/// every comparison.
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..400 {
        if (hi - lo) <= rel_tol * x1.abs().max(1e-300) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Scan `f` on a log grid over `[lo, hi]`, then golden-refine in `ln x`
/// around the best grid point. The endpoints themselves are also compared,
/// so a boundary optimum is never lost to refinement.
pub fn scan_then_refine<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, count: usize, rel_tol: f64) -> (f64, f64) {
    if hi <= lo {
        return (lo, f(lo));
    }
    let grid = log_grid(lo, hi, count);
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    if !values[best].is_finite() {
        return (grid[best], values[best]);
    }
    let a = grid[best.saturating_sub(1)].ln();
    let b = grid[(best + 1).min(count - 1)].ln();
    let (u, v) = golden_section_min(|u| f(u.exp()), a, b, rel_tol);
    let x = u.exp().clamp(lo, hi);
    if v < values[best] {
        (x, v)
    } else {
        (grid[best], values[best])
    }
}
