use std::collections::HashMap;
use std::sync::Mutex;

use super::{OperationDescriptor, Theta};
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::optimize::scan_then_refine;
use crate::psi::{PInterval, PsiFunction};

/// Largest exponent a solver will scan; unbounded coordinate ranges are
/// truncated here, which can only raise the computed infimum.
pub const EXPONENT_CAP: f64 = 1e6;

const SCAN_POINTS: usize = 512;
const SWEEP_SCAN_POINTS: usize = 64;
const REFINE_TOL: f64 = 1e-10;
const DESCENT_TOL: f64 = 1e-8;
const MAX_SWEEPS: usize = 200;
const CONSTRAINT_TOL: f64 = 1e-10;
const BOUNDARY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerStatus {
    Interior,
    Boundary,
    EmptyLayer,
}

/// `κ(p)` with the exponent vector that attains it.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerSolution {
    pub p: f64,
    pub kappa: Extended,
    pub argmin_q: Vec<f64>,
    pub status: LayerStatus,
}

#[derive(Debug, Clone, Copy)]
struct Range {
    lo: f64,
    hi: f64,
}

impl Range {
    fn hi_eff(&self) -> f64 {
        self.hi.min(EXPONENT_CAP.max(self.lo))
    }

    fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

struct Layer<'a> {
    desc: &'a OperationDescriptor,
    psis: &'a [PsiFunction],
    p: f64,
    ranges: Vec<Range>,
    dep: Option<usize>,
    free: Vec<usize>,
}

impl Layer<'_> {
    fn objective(&self, q: &[f64]) -> f64 {
        let mut v = self.desc.k_bar(q);
        for (i, psi) in self.psis.iter().enumerate() {
            if v.is_infinite() {
                break;
            }
            let a = self.desc.alpha()[i];
            if a == 0.0 {
                continue;
            }
            v = v * psi.eval(self.desc.tau()[i].apply(q[i])).powf(a);
        }
        v.to_f64()
    }

    fn within(&self, j: usize, x: f64) -> Option<f64> {
        let r = self.ranges[j];
        let slack = 1e-12 * x.abs().max(1.0);
        if x < r.lo - slack || x > r.hi + slack || !x.is_finite() {
            None
        } else {
            Some(x.clamp(r.lo, r.hi))
        }
    }

    /// Sets the dependent coordinate so that `Θ(q⃗) = p`.
    fn solve_dependent(&self, q: &mut [f64]) -> bool {
        let Some(j) = self.dep else { return true };
        let x = match self.desc.theta() {
            Theta::Harmonic { offset } => {
                let others: f64 = q.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, x)| 1.0 / x).sum();
                let s = 1.0 / self.p + offset - others;
                if s <= 0.0 {
                    return false;
                }
                1.0 / s
            }
            Theta::Projection(_) => self.p,
            Theta::Custom(f) => {
                let r = self.ranges[j];
                let mut lo = r.lo;
                let mut hi = r.hi_eff();
                let mut work = q.to_vec();
                let mut g = |x: f64| {
                    work[j] = x;
                    f(&work) - self.p
                };
                let (glo, ghi) = (g(lo), g(hi));
                if !(glo.is_finite() && ghi.is_finite()) || glo * ghi > 0.0 {
                    return false;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if (g(mid) > 0.0) == (glo > 0.0) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        };
        match self.within(j, x) {
            Some(x) => {
                q[j] = x;
                true
            }
            None => false,
        }
    }

    fn value(&self, q: &mut [f64]) -> f64 {
        if self.solve_dependent(q) {
            self.objective(q)
        } else {
            f64::INFINITY
        }
    }

    /// Interval of coordinate `f` that keeps the dependent coordinate inside
    /// its range, others held fixed.
    fn free_range(&self, q: &[f64], f: usize) -> Option<(f64, f64)> {
        let rf = self.ranges[f];
        let (mut lo, mut hi) = (rf.lo, rf.hi_eff());
        if let (Theta::Harmonic { offset }, Some(j)) = (self.desc.theta(), self.dep) {
            let others: f64 = q.iter().enumerate().filter(|(i, _)| *i != j && *i != f).map(|(_, x)| 1.0 / x).sum();
            let s = 1.0 / self.p + offset - others;
            let rd = self.ranges[j];
            let u_lo = (s - 1.0 / rd.lo).max(1.0 / rf.hi);
            let u_hi = (s - 1.0 / rd.hi).min(1.0 / rf.lo);
            if u_hi <= 0.0 || u_lo > u_hi {
                return None;
            }
            lo = lo.max(1.0 / u_hi);
            if u_lo > 0.0 {
                hi = hi.min(1.0 / u_lo);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn minimize_coordinate(&self, q: &mut [f64], f: usize, points: usize) -> f64 {
        let Some((lo, hi)) = self.free_range(q, f) else { return f64::INFINITY };
        let mut work = q.to_vec();
        let (x, v) = scan_then_refine(
            |x| {
                work[f] = x;
                self.value(&mut work)
            },
            lo,
            hi,
            points,
            REFINE_TOL,
        );
        if v.is_finite() {
            q[f] = x;
            self.solve_dependent(q);
        }
        v
    }

    fn initial_point(&self, q: &mut [f64]) {
        if let Theta::Harmonic { offset } = self.desc.theta() {
            let pinned: f64 =
                (0..q.len()).filter(|i| !self.free.contains(i) && Some(*i) != self.dep).map(|i| 1.0 / q[i]).sum();
            let total = 1.0 / self.p + offset - pinned;
            if total > 0.0 {
                let s = (self.free.len() + 1) as f64 / total;
                for &f in &self.free {
                    let r = self.ranges[f];
                    q[f] = s.clamp(r.lo, r.hi_eff());
                }
            }
        } else {
            for &f in &self.free {
                let r = self.ranges[f];
                q[f] = (r.lo * r.hi_eff()).sqrt();
            }
        }
        if self.value(q).is_finite() {
            return;
        }
        for &f in &self.free {
            if let Some((lo, hi)) = self.free_range(q, f) {
                q[f] = (lo * hi).sqrt();
            }
        }
    }

    fn solve(&self, mut q: Vec<f64>) -> (Vec<f64>, f64) {
        match self.free.len() {
            0 => {
                if self.dep.is_none() {
                    let t = self.desc.output_exponent(&q);
                    if !((t - self.p).abs() <= CONSTRAINT_TOL * self.p
                        || (1.0 / t - 1.0 / self.p).abs() <= CONSTRAINT_TOL)
                    {
                        return (q, f64::INFINITY);
                    }
                }
                let v = self.value(&mut q);
                (q, v)
            }
            1 => {
                let v = self.minimize_coordinate(&mut q, self.free[0], SCAN_POINTS);
                (q, v)
            }
            _ => {
                self.initial_point(&mut q);
                let mut best = self.value(&mut q);
                for _ in 0..MAX_SWEEPS {
                    let before = best;
                    for &f in &self.free {
                        let mut trial = q.clone();
                        let v = self.minimize_coordinate(&mut trial, f, SWEEP_SCAN_POINTS);
                        if v < best {
                            best = v;
                            q = trial;
                        }
                    }
                    if before.is_finite() && before - best <= DESCENT_TOL * best.abs() {
                        break;
                    }
                }
                (q, best)
            }
        }
    }

    fn status(&self, q: &[f64], value: f64) -> LayerStatus {
        if !value.is_finite() {
            return LayerStatus::EmptyLayer;
        }
        let near = |x: f64, e: f64| e.is_finite() && (x - e).abs() <= BOUNDARY_TOL * e.abs().max(1.0);
        let on_edge = self
            .free
            .iter()
            .chain(self.dep.iter())
            .any(|&i| near(q[i], self.ranges[i].lo) || near(q[i], self.ranges[i].hi_eff()));
        if on_edge {
            LayerStatus::Boundary
        } else {
            LayerStatus::Interior
        }
    }
}

fn coordinate_ranges(desc: &OperationDescriptor, psis: &[PsiFunction]) -> Option<Vec<Range>> {
    let mut out = Vec::with_capacity(desc.arity());
    for (i, psi) in psis.iter().enumerate().take(desc.arity()) {
        let mut b: PInterval = desc.bounds()[i];
        if desc.alpha()[i] > 0.0 {
            if let Some(pre) = desc.tau()[i].preimage(psi.domain()) {
                b = b.intersect(&pre).ok()?;
            }
        }
        out.push(Range { lo: b.lower(), hi: b.upper() });
    }
    Some(out)
}

/// Solves `κ(p) = inf { K̄(q⃗)·Π ψ_i(τ_i(q_i))^{α_i} : q⃗ ∈ D, Θ(q⃗) = p }`.
///
/// Coordinates whose admissible range is a single point are pinned. With one
/// free coordinate left the layer is scanned on a 512-point log grid and
/// golden-refined; with more, a symmetric start is improved by cyclic
/// coordinate descent. Infeasible layers come back as
/// [`LayerStatus::EmptyLayer`] with `κ = +∞`.
pub fn kappa_layer_infimum(desc: &OperationDescriptor, psis: &[PsiFunction], p: f64) -> Result<LayerSolution> {
    if psis.len() != desc.arity() {
        return Err(Error::ArityMismatch { expected: desc.arity(), got: psis.len() });
    }
    if !(p >= 1.0) {
        return Err(Error::ExponentOutOfRange(format!("p = {p} must be >= 1")));
    }
    Ok(solve_layer(desc, psis, p))
}

fn empty(p: f64, d: usize) -> LayerSolution {
    LayerSolution { p, kappa: Extended::PosInf, argmin_q: vec![f64::NAN; d], status: LayerStatus::EmptyLayer }
}

fn solve_layer(desc: &OperationDescriptor, psis: &[PsiFunction], p: f64) -> LayerSolution {
    let d = desc.arity();
    let Some(ranges) = coordinate_ranges(desc, psis) else { return empty(p, d) };
    let pinned: Vec<bool> = ranges.iter().map(Range::is_point).collect();
    let dep = match desc.theta() {
        Theta::Projection(i) => (!pinned[*i]).then_some(*i),
        _ => (0..d).rev().find(|&i| !pinned[i]),
    };
    let free: Vec<usize> = (0..d).filter(|&i| !pinned[i] && Some(i) != dep).collect();
    let q0: Vec<f64> = ranges.iter().map(|r| if r.is_point() { r.lo } else { (r.lo * r.hi_eff()).sqrt() }).collect();
    let layer = Layer { desc, psis, p, ranges, dep, free };
    let (q, v) = layer.solve(q0);
    let status = layer.status(&q, v);
    if status == LayerStatus::EmptyLayer {
        return empty(p, d);
    }
    LayerSolution { p, kappa: Extended::from_f64(v), argmin_q: q, status }
}

/// A memoizing `κ` used as the body of a layer-infimum generating function.
pub struct LayerPsi {
    descriptor: OperationDescriptor,
    inputs: Vec<PsiFunction>,
    cache: Mutex<HashMap<u64, LayerSolution>>,
}

impl std::fmt::Debug for LayerPsi {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LayerPsi")
            .field("descriptor", &self.descriptor)
            .field("inputs", &self.inputs.len())
            .finish_non_exhaustive()
    }
}

impl LayerPsi {
    pub(crate) fn new(descriptor: OperationDescriptor, inputs: Vec<PsiFunction>) -> Self {
        LayerPsi { descriptor, inputs, cache: Mutex::new(HashMap::new()) }
    }

    pub fn descriptor(&self) -> &OperationDescriptor {
        &self.descriptor
    }

    pub fn inputs(&self) -> &[PsiFunction] {
        &self.inputs
    }

    pub fn solve(&self, p: f64) -> LayerSolution {
        let key = p.to_bits();
        if let Some(hit) = self.cache.lock().expect("layer cache poisoned").get(&key) {
            return hit.clone();
        }
        let sol = solve_layer(&self.descriptor, &self.inputs, p);
        self.cache.lock().expect("layer cache poisoned").insert(key, sol.clone());
        sol
    }
}
