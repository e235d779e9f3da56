//! TOML run configuration.

use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Bound,
    Tail,
    Verify,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub p_grid: Option<PGridSpec>,
    #[serde(default)]
    pub operation: OperationSpec,
    #[serde(default)]
    pub psi: Vec<PsiSpecConfig>,
    #[serde(default)]
    pub inputs: Vec<InputSpec>,
    pub tail: Option<TailSpec>,
}

fn default_seed() -> u64 {
    1
}

fn default_tolerance() -> f64 {
    1e-9
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PGridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default = "yes")]
    pub log_spaced: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperationKindSpec {
    #[default]
    Identity,
    Product,
    Tensor,
    Convolution,
    InfimalConvolution,
    Maximal,
    Hausdorff,
    Toeplitz,
    Bilinear,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationSpec {
    #[serde(default)]
    pub kind: OperationKindSpec,
    #[serde(default = "one_u32")]
    pub d: u32,
    #[serde(default = "two_u32")]
    pub m: u32,
    #[serde(default = "one_u32")]
    pub n: u32,
    pub gamma: Option<f64>,
    #[serde(default)]
    pub gammas: Vec<f64>,
    #[serde(default = "one_f64")]
    pub c_env: f64,
    /// Constant kernel bound `L̄` for the bilinear operation.
    pub kernel: Option<f64>,
    /// Multiplies `κ`; values below 1 deliberately weaken the certificate.
    #[serde(default = "one_f64")]
    pub kappa_scale: f64,
}

impl Default for OperationSpec {
    fn default() -> Self {
        OperationSpec {
            kind: OperationKindSpec::Identity,
            d: 1,
            m: 2,
            n: 1,
            gamma: None,
            gammas: Vec::new(),
            c_env: 1.0,
            kernel: None,
            kappa_scale: 1.0,
        }
    }
}

fn one_u32() -> u32 {
    1
}

fn two_u32() -> u32 {
    2
}

fn one_f64() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiKind {
    Power,
    Rational,
    Window,
    Degenerate,
    /// Moments of the input with the same index.
    Natural,
    /// A `glsmoments v1` file.
    File,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiSpecConfig {
    pub kind: PsiKind,
    #[serde(default = "one_f64")]
    pub beta: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "one_f64")]
    pub scale: f64,
    pub a: Option<f64>,
    pub b: Option<f64>,
    #[serde(default)]
    pub c: f64,
    #[serde(default)]
    pub s: f64,
    pub r: Option<f64>,
    pub path: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    Gaussian,
    Indicator,
    PowerProfile,
    Trig,
    Random,
    /// A `glsgrid v1` file.
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureSpec {
    Lebesgue,
    #[default]
    Uniprob,
    Counting,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub kind: InputKind,
    #[serde(default = "one_f64")]
    pub sigma: f64,
    #[serde(default = "half")]
    pub fraction: f64,
    #[serde(default = "one_f64")]
    pub a: f64,
    #[serde(default = "three")]
    pub degree: usize,
    #[serde(default = "one_usize")]
    pub dims: usize,
    #[serde(default = "minus_four")]
    pub lo: f64,
    #[serde(default = "four")]
    pub hi: f64,
    #[serde(default = "sixty_four")]
    pub n: usize,
    #[serde(default)]
    pub measure: MeasureSpec,
    #[serde(default)]
    pub periodic: bool,
    pub path: Option<String>,
}

fn half() -> f64 {
    0.5
}

fn three() -> usize {
    3
}

fn one_usize() -> usize {
    1
}

fn minus_four() -> f64 {
    -4.0
}

fn four() -> f64 {
    4.0
}

fn sixty_four() -> usize {
    64
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailSpec {
    pub norm: f64,
    pub y: Vec<f64>,
}

impl RunConfig {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    /// Command-specific checks beyond the schema.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(format!("tolerance {} must be finite and >= 0", self.tolerance));
        }
        if let Some(g) = &self.p_grid {
            if !(g.min >= 1.0 && g.max >= g.min && g.max.is_finite()) {
                return Err(format!("p_grid needs 1 <= min <= max < inf, got [{}, {}]", g.min, g.max));
            }
            if g.count < 2 {
                return Err("p_grid.count must be >= 2".into());
            }
        }
        match self.command {
            Command::Bound | Command::Verify if self.p_grid.is_none() => {
                return Err("this command needs a [p_grid] section".into());
            }
            Command::Tail => {
                let t = self.tail.as_ref().ok_or("tail command needs a [tail] section")?;
                if !(t.norm > 0.0 && t.norm.is_finite()) {
                    return Err(format!("tail.norm = {} must be positive", t.norm));
                }
                if t.y.is_empty() || t.y.windows(2).any(|w| w[1] <= w[0]) || t.y[0] < t.norm {
                    return Err("tail.y must be increasing and start at or above tail.norm".into());
                }
            }
            _ => {}
        }
        if self.command == Command::Verify && self.inputs.is_empty() {
            return Err("verify needs at least one [[inputs]] entry".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_bound_config() {
        let c = RunConfig::parse(
            r#"
command = "bound"
[p_grid]
min = 1
max = 8
count = 8
[operation]
kind = "infimal_convolution"
[[psi]]
kind = "power"
gamma = 1
"#,
        )
        .unwrap();
        assert_eq!(c.seed, 1);
        assert_eq!(c.operation.m, 2);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_unknown_fields_and_bad_grids() {
        assert!(RunConfig::parse("command = \"bound\"\nbogus = 1\n").is_err());
        let c = RunConfig::parse("command = \"bound\"\n[p_grid]\nmin = 0.5\nmax = 2\ncount = 4\n").unwrap();
        assert!(c.validate().is_err());
        let c = RunConfig::parse("command = \"verify\"\n[p_grid]\nmin = 1\nmax = 2\ncount = 4\n").unwrap();
        assert!(c.validate().is_err());
    }
}
