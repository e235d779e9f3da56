//! Operation descriptors, the layer infimum `κ(p)`, and the per-operation
//! combinators built on them.

mod combine;
mod layer;
mod lemmas;

use std::fmt;
use std::sync::Arc;

pub use combine::{
    combine_bilinear_integral, combine_convolution, combine_hausdorff, combine_infimal_convolution, combine_maximal,
    combine_product, combine_tensor, combine_toeplitz, hausdorff_envelope, maximal_envelope, KernelNorm,
};
pub use layer::{kappa_layer_infimum, LayerPsi, LayerSolution, LayerStatus, EXPONENT_CAP};
pub use lemmas::{beckner_constant, beckner_v, conjugate_split_min, holder_split_min, split_constant};

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::psi::PInterval;

pub type VectorMap = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type ScalarMap = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type DomainPredicate = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// The output exponent `p = Θ(q⃗)`.
#[derive(Clone)]
pub enum Theta {
    /// `1/Θ(q⃗) = Σ 1/q_i − offset`. Offset 0 is the Hölder relation,
    /// offset 1 the Young convolution relation.
    Harmonic { offset: f64 },
    /// `Θ(q⃗) = q_i`: the output exponent is itself a coordinate.
    Projection(usize),
    /// Any continuous map, assumed monotone in each coordinate.
    Custom(VectorMap),
}

impl Theta {
    pub fn eval(&self, q: &[f64]) -> f64 {
        match self {
            Theta::Harmonic { offset } => {
                let s: f64 = q.iter().map(|x| 1.0 / x).sum::<f64>() - offset;
                if s > 0.0 {
                    1.0 / s
                } else {
                    f64::INFINITY
                }
            }
            Theta::Projection(i) => q[*i],
            Theta::Custom(f) => f(q),
        }
    }
}

impl fmt::Debug for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Harmonic { offset } => write!(f, "Harmonic {{ offset: {offset} }}"),
            Theta::Projection(i) => write!(f, "Projection({i})"),
            Theta::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Moment map `τ_i` applied to the `i`-th input exponent.
#[derive(Clone)]
pub enum Tau {
    Identity,
    /// `q ↦ c·q` with `c > 0`.
    Scale(f64),
    Custom(ScalarMap),
}

impl Tau {
    pub fn apply(&self, q: f64) -> f64 {
        match self {
            Tau::Identity => q,
            Tau::Scale(c) => c * q,
            Tau::Custom(f) => f(q),
        }
    }

    /// Pulls a ψ-domain back to the `q` axis when the map is invertible.
    fn preimage(&self, dom: &PInterval) -> Option<PInterval> {
        match self {
            Tau::Identity => Some(*dom),
            Tau::Scale(c) => {
                let lo = (dom.lower() / c).max(1.0);
                let hi = dom.upper() / c;
                PInterval::new(lo, hi, dom.lower_closed(), dom.upper_closed()).ok()
            }
            Tau::Custom(_) => None,
        }
    }
}

impl fmt::Debug for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tau::Identity => write!(f, "Identity"),
            Tau::Scale(c) => write!(f, "Scale({c})"),
            Tau::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Data of a norm inequality `|V(f⃗)|_{Θ(q⃗)} ≤ K(q⃗)·Π |f_i|_{τ_i(q_i)}^{α_i}`
/// holding for `q⃗` in a domain `D`, with `K = +∞` off `D`.
#[derive(Clone)]
pub struct OperationDescriptor {
    name: String,
    bounds: Vec<PInterval>,
    domain: Option<DomainPredicate>,
    theta: Theta,
    tau: Vec<Tau>,
    alpha: Vec<f64>,
    k_const: VectorMap,
}

impl fmt::Debug for OperationDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperationDescriptor")
            .field("name", &self.name)
            .field("bounds", &self.bounds)
            .field("theta", &self.theta)
            .field("tau", &self.tau)
            .field("alpha", &self.alpha)
            .finish_non_exhaustive()
    }
}

impl OperationDescriptor {
    /// `bounds` is a box containing `D`, one interval per input; `k_const`
    /// may return any non-finite value to signal `q⃗ ∉ D`.
    pub fn new(
        name: impl Into<String>,
        theta: Theta,
        bounds: Vec<PInterval>,
        tau: Vec<Tau>,
        alpha: Vec<f64>,
        k_const: VectorMap,
    ) -> Result<Self> {
        let d = bounds.len();
        if d == 0 {
            return Err(Error::InvalidParameter("descriptor needs at least one input".into()));
        }
        if tau.len() != d || alpha.len() != d {
            return Err(Error::ArityMismatch { expected: d, got: tau.len().min(alpha.len()) });
        }
        if alpha.iter().any(|a| !(*a >= 0.0)) {
            return Err(Error::InvalidParameter("powers alpha_i must be >= 0".into()));
        }
        if let Theta::Projection(i) = theta {
            if i >= d {
                return Err(Error::InvalidParameter(format!("projection index {i} out of range")));
            }
        }
        Ok(OperationDescriptor { name: name.into(), bounds, domain: None, theta, tau, alpha, k_const })
    }

    /// Adds a membership predicate for `D` on top of the bounding box.
    pub fn with_domain(mut self, pred: DomainPredicate) -> Self {
        self.domain = Some(pred);
        self
    }

    /// `d = 1`, `Θ = τ = id`, `α = 1`, `K ≡ 1`.
    pub fn identity() -> Self {
        OperationDescriptor::new(
            "identity",
            Theta::Harmonic { offset: 0.0 },
            vec![PInterval::full()],
            vec![Tau::Identity],
            vec![1.0],
            Arc::new(|_| 1.0),
        )
        .expect("identity descriptor is valid")
    }

    /// Hölder split of a pointwise product: `1/p = 1/q1 + 1/q2`, `K ≡ 1`.
    pub fn holder_product() -> Self {
        OperationDescriptor::new(
            "product",
            Theta::Harmonic { offset: 0.0 },
            vec![PInterval::full(), PInterval::full()],
            vec![Tau::Identity, Tau::Identity],
            vec![1.0, 1.0],
            Arc::new(|_| 1.0),
        )
        .expect("product descriptor is valid")
    }

    /// Young convolution on an `n`-dimensional space: `1 + 1/p = 1/q1 + 1/q2`
    /// with the sharp constant as `K`.
    pub fn convolution(n: u32) -> Self {
        OperationDescriptor::new(
            "convolution",
            Theta::Harmonic { offset: 1.0 },
            vec![PInterval::full(), PInterval::full()],
            vec![Tau::Identity, Tau::Identity],
            vec![1.0, 1.0],
            Arc::new(move |q| beckner_constant(n, q[0], q[1]).map_or(f64::INFINITY, |(_, g)| g)),
        )
        .expect("convolution descriptor is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[PInterval] {
        &self.bounds
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn tau(&self) -> &[Tau] {
        &self.tau
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn in_domain(&self, q: &[f64]) -> bool {
        q.len() == self.arity()
            && self.bounds.iter().zip(q).all(|(b, &x)| b.contains(x))
            && self.domain.as_ref().is_none_or(|pred| pred(q))
    }

    /// `K̄(q⃗)`, `+∞` exactly off `D`.
    pub fn k_bar(&self, q: &[f64]) -> Extended {
        if !self.in_domain(q) {
            return Extended::PosInf;
        }
        let k = (self.k_const)(q);
        if k > 0.0 {
            Extended::from_f64(k)
        } else {
            Extended::PosInf
        }
    }

    pub fn output_exponent(&self, q: &[f64]) -> f64 {
        self.theta.eval(q)
    }
}
