//! The `bound`, `tail` and `verify` pipelines.

use std::path::{Path, PathBuf};

use super::config::{
    Command, InputKind, InputSpec, MeasureSpec, OperationKindSpec, OperationSpec, PGridSpec, PsiKind, PsiSpecConfig,
    RunConfig,
};
use crate::calculus::{
    combine_bilinear_integral, combine_convolution, combine_hausdorff, combine_infimal_convolution, combine_maximal,
    combine_product, combine_tensor, combine_toeplitz, hausdorff_envelope, maximal_envelope, split_constant,
    KernelNorm,
};
use crate::fenchel::{power_tail_closed_form, tail_bound};
use crate::optimize::log_grid;
use crate::oracle::{
    apply_operation, corpus, empirical_tail, moments_table, Axis, GridFunction, Measure, OperationKind, OracleLimits,
    OracleOutput, OracleValue,
};
use crate::psi::{MomentTable, PsiForm, PsiFunction};
use crate::report::{fmt_ext, fmt_sig12, Table};

/// Failure classes with their process exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Parse(String),
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "config parse error: {m}"),
            CliError::Validation(m) => write!(f, "validation error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Validation(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub passed: bool,
    pub max_ratio: f64,
    pub worst_p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub report: PathBuf,
    pub certificate: Option<Certificate>,
}

pub fn exponent_grid(spec: &PGridSpec) -> Vec<f64> {
    if spec.log_spaced {
        log_grid(spec.min, spec.max, spec.count)
    } else {
        let step = (spec.max - spec.min) / (spec.count - 1) as f64;
        let mut g: Vec<f64> = (0..spec.count).map(|i| spec.min + step * i as f64).collect();
        g[spec.count - 1] = spec.max;
        g
    }
}

/// Exponents at which natural tables are sampled: the report grid padded
/// down to 1 and up to four times its maximum, so layer solvers can move
/// input exponents off the output exponent.
fn natural_grid(p: &[f64]) -> Vec<f64> {
    let (lo, hi) = (p[0], p[p.len() - 1]);
    let mut g: Vec<f64> = p.to_vec();
    if lo > 1.0 {
        g.extend(log_grid(1.0, lo, 16));
    }
    g.extend(log_grid(hi.max(1.0), 4.0 * hi.max(1.0), 16));
    g.sort_by(f64::total_cmp);
    g.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    g
}

fn resolve(base: &Path, path: &Option<String>, what: &str) -> CliResult<PathBuf> {
    match path {
        Some(p) => Ok(base.join(p)),
        None => invalid(format!("{what} needs a `path`")),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn measure(m: MeasureSpec) -> Measure {
    match m {
        MeasureSpec::Lebesgue => Measure::Lebesgue,
        MeasureSpec::Uniprob => Measure::UniformProbability,
        MeasureSpec::Counting => Measure::Counting,
    }
}

fn build_input(spec: &InputSpec, index: usize, seed: u64, base: &Path) -> CliResult<GridFunction> {
    let axes = || -> CliResult<Vec<Axis>> {
        if spec.dims == 0 {
            return invalid("input dims must be >= 1");
        }
        Ok(vec![Axis::new(spec.lo, spec.hi, spec.n)?; spec.dims])
    };
    let m = measure(spec.measure);
    let mut rng = corpus::seeded_rng(seed.wrapping_add(index as u64));
    let g = match spec.kind {
        InputKind::Gaussian => corpus::gaussian(axes()?, m, spec.sigma)?,
        InputKind::Indicator => corpus::indicator(axes()?, m, spec.fraction)?,
        InputKind::PowerProfile => corpus::power_profile(axes()?, m, spec.a)?,
        InputKind::Trig => corpus::trig_polynomial(&mut rng, spec.dims, spec.n, spec.degree)?,
        InputKind::Random => corpus::random_grid(&mut rng, axes()?, spec.periodic, m)?,
        InputKind::File => GridFunction::parse(&read(&resolve(base, &spec.path, "file input")?)?)?,
    };
    if spec.periodic && !g.periodic() {
        return Ok(GridFunction::new(g.axes().to_vec(), true, g.measure(), g.values().to_vec())?);
    }
    Ok(g)
}

fn build_psi(spec: &PsiSpecConfig, input: Option<&GridFunction>, nat: &[f64], base: &Path) -> CliResult<PsiFunction> {
    Ok(match spec.kind {
        PsiKind::Power => PsiFunction::power(spec.beta, spec.gamma)?,
        PsiKind::Rational => PsiFunction::rational_factor(spec.beta, spec.gamma, spec.delta)?,
        PsiKind::Window => match (spec.a, spec.b) {
            (Some(a), Some(b)) => PsiFunction::window(spec.scale, a, b, spec.c, spec.s)?,
            _ => return invalid("window psi needs `a` and `b`"),
        },
        PsiKind::Degenerate => match spec.r {
            Some(r) => PsiFunction::degenerate(r)?,
            None => return invalid("degenerate psi needs `r`"),
        },
        PsiKind::Natural => match input {
            Some(f) => PsiFunction::natural(moments_table(f, nat)?)?,
            None => return invalid("natural psi needs an input with the same index"),
        },
        PsiKind::File => PsiFunction::natural(MomentTable::parse(&read(&resolve(base, &spec.path, "file psi")?)?)?)?,
    })
}

fn need(psis: &[PsiFunction], n: usize) -> CliResult<()> {
    if psis.len() < n {
        return invalid(format!("operation needs {n} [[psi]] entries, got {}", psis.len()));
    }
    Ok(())
}

fn need_gamma(op: &OperationSpec) -> CliResult<f64> {
    op.gamma.map_or_else(|| invalid("operation needs `gamma`"), Ok)
}

fn need_gammas(op: &OperationSpec) -> CliResult<(f64, f64)> {
    match op.gammas[..] {
        [a, b] => Ok((a, b)),
        _ => invalid("operation needs `gammas = [g1, g2]`"),
    }
}

/// `(β, γ)` when `ψ = β p^γ`, seeing through products of powers.
fn power_shape(psi: &PsiFunction) -> Option<(f64, f64)> {
    match psi.form() {
        PsiForm::Power { beta, gamma } => Some((*beta, *gamma)),
        PsiForm::Product(a, b) => {
            let ((b1, g1), (b2, g2)) = (power_shape(a)?, power_shape(b)?);
            Some((b1 * b2, g1 + g2))
        }
        PsiForm::Scaled(c, a) => power_shape(a).map(|(b, g)| (c * b, g)),
        _ => None,
    }
}

type Envelope = Box<dyn Fn(f64) -> f64>;

struct Kappa {
    psi: PsiFunction,
    envelope: Option<Envelope>,
    /// `(β, γ)` of a power-type closed form for the output, when known.
    shape: Option<(f64, f64)>,
}

fn build_kappa(op: &OperationSpec, psis: &[PsiFunction]) -> CliResult<Kappa> {
    let mut envelope: Option<Envelope> = None;
    let mut shape = None;
    let psi = match op.kind {
        OperationKindSpec::Identity => {
            need(psis, 1)?;
            shape = power_shape(&psis[0]);
            psis[0].clone()
        }
        OperationKindSpec::Product => {
            need(psis, 2)?;
            if let (Some((b1, g1)), Some((b2, g2))) = (power_shape(&psis[0]), power_shape(&psis[1])) {
                let c = b1 * b2 * split_constant(g1, g2)?;
                envelope = Some(Box::new(move |p| c * p.powf(g1 + g2)));
                shape = Some((c, g1 + g2));
            }
            combine_product(&psis[0], &psis[1])?
        }
        OperationKindSpec::Tensor => {
            need(psis, 2)?;
            let out = combine_tensor(&psis[0], &psis[1])?;
            shape = power_shape(&out);
            out
        }
        OperationKindSpec::Convolution => {
            need(psis, 2)?;
            combine_convolution(&psis[0], &psis[1], op.n)?
        }
        OperationKindSpec::InfimalConvolution => {
            need(psis, 1)?;
            let (out, relaxed) = combine_infimal_convolution(&psis[0], op.d, op.m)?;
            let base = psis[0].clone();
            envelope = Some(Box::new(move |p| relaxed * base.eval(p).to_f64()));
            out
        }
        OperationKindSpec::Maximal => {
            let (g, d, c) = (need_gamma(op)?, op.d, op.c_env);
            envelope = Some(Box::new(move |p| maximal_envelope(g, d, c, p)));
            combine_maximal(g, d, c)?
        }
        OperationKindSpec::Hausdorff => {
            let (g, m, c) = (need_gamma(op)?, op.m, op.c_env);
            envelope = Some(Box::new(move |p| hausdorff_envelope(g, m, c, p)));
            combine_hausdorff(g, m, c)?
        }
        OperationKindSpec::Toeplitz => {
            let (g1, g2) = need_gammas(op)?;
            combine_toeplitz(g1, g2)?
        }
        OperationKindSpec::Bilinear => {
            need(psis, 2)?;
            let l = op.kernel.map_or_else(|| invalid("bilinear operation needs `kernel`"), Ok)?;
            let out = combine_bilinear_integral(&psis[0], &psis[1], &KernelNorm::Bounded(l))?;
            shape = power_shape(&out);
            out
        }
    };
    let psi = if op.kappa_scale == 1.0 { psi } else { PsiFunction::scaled(op.kappa_scale, &psi)? };
    let shape = shape.map(|(b, g)| (b * op.kappa_scale, g));
    Ok(Kappa { psi, envelope, shape })
}

fn oracle_kind(op: OperationKindSpec) -> CliResult<Option<OperationKind>> {
    Ok(Some(match op {
        OperationKindSpec::Identity => return Ok(None),
        OperationKindSpec::Product => OperationKind::PointwiseProduct,
        OperationKindSpec::Tensor => OperationKind::TensorProduct,
        OperationKindSpec::Convolution => OperationKind::PeriodicConvolution,
        OperationKindSpec::InfimalConvolution => OperationKind::InfimalConvolution,
        _ => {
            return invalid("the oracle pipeline supports identity, product, tensor, convolution, infimal_convolution")
        }
    }))
}

fn apply(op: OperationKindSpec, inputs: &[GridFunction]) -> CliResult<OracleOutput> {
    match oracle_kind(op)? {
        None => match inputs.first() {
            Some(f) => Ok(OracleOutput { value: OracleValue::Grid(f.clone()), valid: None }),
            None => invalid("identity needs one input"),
        },
        Some(kind) => {
            let vals: Vec<OracleValue> = inputs.iter().cloned().map(OracleValue::Grid).collect();
            Ok(apply_operation(kind, &vals, &OracleLimits::from_env())?)
        }
    }
}

struct Prepared {
    p_grid: Vec<f64>,
    inputs: Vec<GridFunction>,
    psis: Vec<PsiFunction>,
}

fn prepare(cfg: &RunConfig, base: &Path) -> CliResult<Prepared> {
    let p_grid = cfg.p_grid.as_ref().map(exponent_grid).unwrap_or_default();
    let nat = natural_grid(if p_grid.is_empty() { &[1.0, 2.0] } else { &p_grid });
    let inputs =
        cfg.inputs.iter().enumerate().map(|(i, s)| build_input(s, i, cfg.seed, base)).collect::<CliResult<Vec<_>>>()?;
    let mut psis = cfg
        .psi
        .iter()
        .enumerate()
        .map(|(i, s)| build_psi(s, inputs.get(i), &nat, base))
        .collect::<CliResult<Vec<_>>>()?;
    if psis.is_empty() && cfg.command == Command::Verify {
        psis =
            inputs.iter().map(|f| Ok(PsiFunction::natural(moments_table(f, &nat)?)?)).collect::<CliResult<Vec<_>>>()?;
    }
    if cfg.operation.kind == OperationKindSpec::InfimalConvolution && inputs.len() >= 2 {
        // The bound is against the sum of the input norms.
        if !cfg.psi.iter().all(|p| p.kind == PsiKind::Natural) {
            return invalid("infimal convolution against inputs needs natural psi functions");
        }
        let tables: Vec<MomentTable> = inputs.iter().map(|f| moments_table(f, &nat)).collect::<crate::Result<_>>()?;
        let sum = tables[0]
            .entries()
            .iter()
            .enumerate()
            .map(|(k, &(p, _))| (p, tables.iter().map(|t| t.entries()[k].1).sum()))
            .collect();
        psis = vec![PsiFunction::natural(MomentTable::new(sum)?)?];
    }
    Ok(Prepared { p_grid, inputs, psis })
}

fn argmin_cell(psi: &PsiFunction, p: f64) -> String {
    match psi.layer_solution(p) {
        Some(s) if s.kappa.is_finite() => s.argmin_q.iter().map(|&q| fmt_sig12(q)).collect::<Vec<_>>().join(","),
        _ => "-".into(),
    }
}

fn write(out: &Path, name: &str, text: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(out).map_err(|e| CliError::Validation(format!("{}: {e}", out.display())))?;
    let path = out.join(name);
    std::fs::write(&path, text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn run_bound(cfg: &RunConfig, prep: &Prepared, out: &Path) -> CliResult<RunOutcome> {
    let kappa = build_kappa(&cfg.operation, &prep.psis)?;
    let mut header = vec!["p", "kappa", "argmin"];
    if kappa.envelope.is_some() {
        header.push("envelope");
    }
    let mut t = Table::new(&header);
    for &p in &prep.p_grid {
        let mut row = vec![fmt_sig12(p), fmt_ext(kappa.psi.eval(p)), argmin_cell(&kappa.psi, p)];
        if let Some(env) = &kappa.envelope {
            row.push(fmt_sig12(env(p)));
        }
        t.push(row);
    }
    Ok(RunOutcome { report: write(out, "bound.tsv", &t.render())?, certificate: None })
}

fn run_tail(cfg: &RunConfig, prep: &Prepared, out: &Path) -> CliResult<RunOutcome> {
    let spec = cfg.tail.as_ref().expect("validated");
    let kappa = build_kappa(&cfg.operation, &prep.psis)?;
    let gammas = match cfg.operation.gammas[..] {
        [a, b] => Some((a, b)),
        _ => match (prep.psis.first().and_then(power_shape), prep.psis.get(1).and_then(power_shape)) {
            (Some((_, a)), Some((_, b))) if a > 0.0 && b > 0.0 => Some((a, b)),
            _ => None,
        },
    };
    let comparison = gammas.filter(|_| !prep.inputs.is_empty());
    let empirical = if prep.inputs.is_empty() {
        None
    } else {
        match apply(cfg.operation.kind, &prep.inputs)?.value {
            OracleValue::Grid(g) => Some(empirical_tail(&g, &spec.y)?),
            OracleValue::Sequence(_) => None,
        }
    };
    let mut header = vec!["y", "bound", "closed_form"];
    if comparison.is_some() {
        header.extend(["tail_stated", "tail_layer"]);
    }
    if empirical.is_some() {
        header.push("empirical");
    }
    let mut t = Table::new(&header);
    for (i, &y) in spec.y.iter().enumerate() {
        let bound = tail_bound(&kappa.psi, spec.norm, y)?;
        let closed = match kappa.shape {
            Some((b, g)) if g > 0.0 && y >= b * spec.norm => power_tail_closed_form(g, b * spec.norm, y)?,
            _ => f64::NAN,
        };
        let mut row = vec![y, bound, closed];
        if let Some((g1, g2)) = comparison {
            let u = y / spec.norm;
            row.push((-u.powf(g1 * g2 / (g1 + g2))).exp());
            row.push((-u.powf(1.0 / (g1 + g2))).exp());
        }
        if let Some(e) = &empirical {
            row.push(e.points()[i].1);
        }
        t.push_numbers(&row);
    }
    Ok(RunOutcome { report: write(out, "tail.tsv", &t.render())?, certificate: None })
}

fn run_verify(cfg: &RunConfig, prep: &Prepared, out: &Path) -> CliResult<RunOutcome> {
    let kappa = build_kappa(&cfg.operation, &prep.psis)?;
    let g = apply(cfg.operation.kind, &prep.inputs)?;
    let v = crate::oracle::verify_bound(&g, &kappa.psi, &prep.p_grid)?;
    let mut t = Table::new(&["p", "empirical_norm", "kappa", "ratio"]);
    for r in &v.rows {
        t.push(vec![fmt_sig12(r.p), fmt_sig12(r.norm), fmt_ext(r.kappa), fmt_sig12(r.ratio)]);
    }
    let passed = v.passes(cfg.tolerance);
    let mut text = t.render();
    text.push_str(&format!(
        "{}\t{}\t{}\n",
        if passed { "PASS" } else { "FAIL" },
        fmt_sig12(v.max_ratio),
        fmt_sig12(v.worst_p)
    ));
    Ok(RunOutcome {
        report: write(out, "verify.tsv", &text)?,
        certificate: Some(Certificate { passed, max_ratio: v.max_ratio, worst_p: v.worst_p }),
    })
}

/// Runs a validated config; relative paths in it resolve against `base`.
pub fn run(cfg: &RunConfig, base: &Path, out: &Path) -> CliResult<RunOutcome> {
    cfg.validate().map_err(CliError::Validation)?;
    let prep = prepare(cfg, base)?;
    match cfg.command {
        Command::Bound => run_bound(cfg, &prep, out),
        Command::Tail => run_tail(cfg, &prep, out),
        Command::Verify => run_verify(cfg, &prep, out),
    }
}
