//! Batch command-line interface: JSON in, JSON (and CSV) out.
//!
//! Exit codes: 0 on success or PASS, 1 on a failed check or computation,
//! 2 on invalid input. Errors are reported as `{"error": kind, "detail": text}`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::charts::{
    self, base_change_check, family_pullback, fd_exterior_derivative, free_group_demo, Chart, EtaForm, FamilySpec,
    FamilySpecJson, FrozenForm, PerturbedForm, Polynomial, Stencil,
};
use crate::cohomology::{cocycle_space, BarChainJson, TangentVector};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::forms::{self, conjugation_invariance, contraction_suite, endomorphism_pullback, gram_matrix, EtaContext};
use crate::invariants::{HomogeneousPolynomial, InvariantPolynomial};
use crate::matgroup::{is_irreducible, GroupKind, GroupSpec, Representation, RepresentationJson};
use crate::numeric::{self, Tolerances};
use crate::words::{Presentation, Word};

/// Relative tolerance for automorphism ratios.
pub const RATIO_TOL: f64 = 1e-8;
/// Size of the injected non-closed perturbation in `closedness`.
pub const PERTURBATION: f64 = 1e-3;
/// Detection floor for that perturbation.
pub const DETECTION_FLOOR: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(
    name = "charvar",
    version,
    about = "Twisted cohomology and characteristic forms on representation varieties"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check that the inputs parse and the representation satisfies the relators.
    Validate,
    /// Dimensions of Z¹, B¹, H¹ (and H⁰, H²) at the representation.
    Cohomology,
    /// Gram matrix of the degree-2 form on an H¹ basis.
    Goldman,
    /// Evaluate the form on given cocycles.
    Eta,
    /// Vanishing on coboundaries.
    SuiteBasic,
    /// Conjugation invariance and endomorphism pullbacks.
    SuiteInvariance,
    /// Finite-difference exterior derivative on a 3-dimensional chart.
    Closedness,
    /// Pullback along a polynomial family, closedness and base change.
    Family,
    /// Chain-level 2-form on a free group: not closed.
    DemoFreeGroup,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Cohomology => "cohomology",
            Command::Goldman => "goldman",
            Command::Eta => "eta",
            Command::SuiteBasic => "suite-basic",
            Command::SuiteInvariance => "suite-invariance",
            Command::Closedness => "closedness",
            Command::Family => "family",
            Command::DemoFreeGroup => "demo-free-group",
        }
    }

    fn randomized(self) -> bool {
        matches!(
            self,
            Command::SuiteBasic | Command::SuiteInvariance | Command::Family | Command::DemoFreeGroup
        )
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Input JSON file; repeatable. The kind of each file is recognized from its keys.
    #[arg(long, global = true)]
    pub input: Vec<PathBuf>,
    /// Report path (stdout if omitted).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// CSV path for family grid samples (defaults to the report path with a .csv extension).
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// RNG seed; required by randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of random trials; each command has its own default.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Grid points per family parameter.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Relative singular-value cutoff for rank decisions [default: 1e-10].
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    /// Bound on relator residuals and Newton convergence [default: 1e-12].
    #[arg(long, global = true)]
    pub tol_newton: Option<f64>,
    /// Step for re-extracting chart tangents.
    #[arg(long, global = true)]
    pub fd_step: Option<f64>,
    /// Outer finite-difference step for exterior derivatives.
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// Generator count for demo-free-group.
    #[arg(long, global = true)]
    pub generators: Option<usize>,
}

/// Result of a command: the JSON report, an optional CSV, and whether every
/// check passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub csv: Option<String>,
    pub pass: bool,
}

/// Error report `{"error": kind, "detail": text}`.
pub fn error_report(err: &Error) -> Value {
    json!({ "error": err.kind(), "detail": err.to_string() })
}

/// `{"cocycles": [{"a": [[re, im], ...], ...}, ...]}` in Lie algebra coordinates.
#[derive(Debug, Clone, Deserialize)]
struct CocyclesJson {
    cocycles: Vec<BTreeMap<String, Vec<Complex64>>>,
}

/// `{"endomorphism": {"a": "b", "b": "a"}, "expected_ratio": -1}`.
#[derive(Debug, Clone, Deserialize)]
struct EndomorphismJson {
    endomorphism: BTreeMap<String, String>,
    #[serde(default)]
    expected_ratio: Option<f64>,
    #[serde(default)]
    name: Option<String>,
}

#[derive(Debug, Default)]
struct Inputs {
    presentation: Option<Presentation>,
    representation: Option<RepresentationJson>,
    family: Option<FamilySpecJson>,
    phi: Option<InvariantPolynomial>,
    chain: Option<BarChainJson>,
    cocycles: Option<CocyclesJson>,
    endomorphisms: Vec<EndomorphismJson>,
}

fn set_once<T>(slot: &mut Option<T>, value: T, what: &str, path: &Path) -> Result<()> {
    if slot.is_some() {
        return Err(Error::InvalidInput(format!(
            "second {what} input in {}",
            path.display()
        )));
    }
    *slot = Some(value);
    Ok(())
}

fn load_inputs(paths: &[PathBuf]) -> Result<Inputs> {
    let mut inputs = Inputs::default();
    for path in paths {
        let text = fs::read_to_string(path)?;
        let value: Value = serde_json::from_str(&text)?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidInput(format!("{} is not a JSON object", path.display())))?;
        let has = |k: &str| obj.contains_key(k);
        if has("params") {
            set_once(&mut inputs.family, serde_json::from_value(value)?, "family", path)?;
        } else if has("images") {
            set_once(
                &mut inputs.representation,
                serde_json::from_value(value)?,
                "representation",
                path,
            )?;
        } else if has("relators") {
            set_once(
                &mut inputs.presentation,
                serde_json::from_value(value)?,
                "presentation",
                path,
            )?;
        } else if has("kind") {
            let phi: InvariantPolynomial = serde_json::from_value(value)?;
            phi.validate()?;
            set_once(&mut inputs.phi, phi, "invariant polynomial", path)?;
        } else if has("terms") && has("degree") {
            set_once(&mut inputs.chain, serde_json::from_value(value)?, "chain", path)?;
        } else if has("cocycles") {
            set_once(&mut inputs.cocycles, serde_json::from_value(value)?, "cocycles", path)?;
        } else if has("endomorphism") {
            inputs.endomorphisms.push(serde_json::from_value(value)?);
        } else {
            return Err(Error::InvalidInput(format!("unrecognized input {}", path.display())));
        }
    }
    Ok(inputs)
}

fn tolerances(options: &Options) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    if let Some(v) = options.tol_rank {
        tol.rank_rel = v;
    }
    if let Some(v) = options.tol_newton {
        tol.newton_tol = v;
    }
    if let Some(v) = options.fd_step {
        tol.fd_step = v;
    }
    tol.validate()?;
    Ok(tol)
}

struct Job {
    command: Command,
    options: Options,
    tol: Tolerances,
    inputs: Inputs,
}

impl Job {
    fn representation(&mut self) -> Result<Representation> {
        let rep = self
            .inputs
            .representation
            .take()
            .ok_or_else(|| Error::InvalidInput(format!("{} needs a representation input", self.command.name())))?;
        rep.into_representation(self.inputs.presentation.clone(), &self.tol)
    }

    fn phi(&self, default: InvariantPolynomial) -> InvariantPolynomial {
        self.inputs.phi.clone().unwrap_or(default)
    }

    fn context(&self, rep: Representation, phi: InvariantPolynomial) -> Result<EtaContext> {
        match &self.inputs.chain {
            Some(chain) => {
                let chain = chain.clone().into_chain(rep.presentation())?;
                EtaContext::with_cycle(rep, phi, chain)
            }
            None => EtaContext::new(rep, phi),
        }
    }

    fn seed(&self) -> u64 {
        self.options.seed.expect("checked for randomized commands")
    }

    fn trials(&self, default: usize) -> Result<usize> {
        match self.options.trials {
            Some(0) => Err(Error::InvalidInput("--trials must be positive".into())),
            Some(t) => Ok(t),
            None => Ok(default),
        }
    }

    fn step(&self) -> Result<f64> {
        let h = self.options.step.unwrap_or(charts::DEFAULT_STEP);
        if h.is_finite() && h > 0.0 {
            Ok(h)
        } else {
            Err(Error::InvalidInput(format!("--step must be positive, got {h}")))
        }
    }
}

fn group_label(g: GroupSpec) -> String {
    match g.kind {
        GroupKind::SL => format!("SL({})", g.n),
        GroupKind::GL => format!("GL({})", g.n),
    }
}

fn validate(job: &mut Job) -> Result<Outcome> {
    let mut checked = Vec::new();
    let mut report = json!({});
    if let Some(p) = &job.inputs.presentation {
        checked.push("presentation");
        report["presentation"] = json!({
            "generators": p.generator_count(),
            "relators": p.relators().len(),
            "surface_genus": p.surface_genus(),
        });
    }
    if job.inputs.representation.is_some() {
        let rep = job.representation()?;
        checked.push("representation");
        report["representation"] = json!({
            "group": group_label(rep.group()),
            "generators": rep.generator_count(),
            "relator_residuals": rep.relator_residuals(),
            "relator_residual": rep.relator_residual(),
            "irreducible": is_irreducible(&rep, &job.tol),
        });
        if let Some(chain) = &job.inputs.chain {
            let chain = chain.clone().into_chain(rep.presentation())?;
            checked.push("chain");
            report["chain"] = json!({
                "degree": chain.degree(),
                "terms": chain.len(),
                "is_cycle": crate::cohomology::verify_cycle(&chain, rep.presentation()),
            });
        }
    }
    if let Some(phi) = &job.inputs.phi {
        checked.push("invariant polynomial");
        report["phi"] = json!({ "degree": phi.degree() });
    }
    if let Some(family) = job.inputs.family.take() {
        let family = FamilySpec::from_json(family, job.inputs.presentation.clone(), &job.tol)?;
        checked.push("family");
        report["family"] = json!({
            "params": family.params(),
            "group": group_label(family.group()),
            "samples_checked": charts::FAMILY_SAMPLES,
            "residual_tol": charts::FAMILY_RESIDUAL_TOL,
        });
    }
    if checked.is_empty() {
        return Err(Error::InvalidInput("validate needs at least one --input".into()));
    }
    report["checked"] = json!(checked);
    Ok(Outcome {
        report,
        csv: None,
        pass: true,
    })
}

fn cohomology(job: &mut Job) -> Result<Outcome> {
    let rep = job.representation()?;
    let space = cocycle_space(&rep, &job.tol)?;
    let report = json!({
        "group": group_label(rep.group()),
        "cohomology": space.report(),
        "irreducible": is_irreducible(&rep, &job.tol),
        "jacobian_norm": space.jacobian_norm,
        "relator_residual": rep.relator_residual(),
    });
    Ok(Outcome {
        report,
        csv: None,
        pass: true,
    })
}

fn goldman(job: &mut Job) -> Result<Outcome> {
    let rep = job.representation()?;
    let phi = job.phi(InvariantPolynomial::TraceForm);
    let ctx = job.context(rep.clone(), phi.clone())?;
    let space = cocycle_space(&rep, &job.tol)?;
    let gram = gram_matrix(&ctx, &space.basis_h1, &job.tol)?;
    let report = json!({
        "phi": phi,
        "cohomology": space.report(),
        "cycle_verified": ctx.cycle_verified(),
        "orientation_sign": ctx.orientation_sign(),
        "gram": gram.report(&job.tol),
    });
    Ok(Outcome {
        report,
        csv: None,
        pass: true,
    })
}

fn parse_cocycles(json: &CocyclesJson, rep: &Representation) -> Result<Vec<TangentVector>> {
    let pres = rep.presentation();
    let d = rep.algebra().dim();
    json.cocycles
        .iter()
        .map(|values| {
            if let Some(name) = values.keys().find(|k| pres.generator_index(k).is_none()) {
                return Err(Error::UnknownGenerator(name.clone()));
            }
            let vectors = pres
                .generator_names()
                .iter()
                .map(|g| {
                    let v = values
                        .get(g)
                        .ok_or_else(|| Error::InvalidInput(format!("cocycle has no value on `{g}`")))?;
                    if v.len() != d {
                        return Err(Error::Shape(format!(
                            "cocycle value of length {} in dimension {d}",
                            v.len()
                        )));
                    }
                    Ok(numeric::CVector::from_column_slice(v))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TangentVector::from_values(&vectors))
        })
        .collect()
}

fn eta(job: &mut Job) -> Result<Outcome> {
    let rep = job.representation()?;
    let phi = job.phi(InvariantPolynomial::TraceForm);
    let ctx = job.context(rep.clone(), phi.clone())?;
    let cocycles = job
        .inputs
        .cocycles
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("eta needs a cocycles input".into()))?;
    let sigmas = parse_cocycles(cocycles, &rep)?;
    let residuals: Vec<f64> = sigmas.iter().map(|s| s.cocycle_residual(&rep)).collect();
    let bound = charts::TANGENT_TOL;
    if let Some((_, r)) = sigmas
        .iter()
        .zip(&residuals)
        .find(|(s, r)| **r > bound * s.norm().max(1.0))
    {
        return Err(Error::NotTangent { residual: *r });
    }
    let value = ctx.eta(&sigmas)?;
    let report = json!({
        "phi": phi,
        "value": value,
        "cocycle_residuals": residuals,
        "cocycle_tol": bound,
        "cycle_verified": ctx.cycle_verified(),
        "orientation_sign": ctx.orientation_sign(),
    });
    Ok(Outcome {
        report,
        csv: None,
        pass: true,
    })
}

fn suite_basic(job: &mut Job) -> Result<Outcome> {
    let rep = job.representation()?;
    let phi = job.phi(InvariantPolynomial::TraceForm);
    let ctx = job.context(rep, phi.clone())?;
    let suite = contraction_suite(&ctx, job.trials(50)?, job.seed(), &job.tol)?;
    let pass = suite.pass;
    Ok(Outcome {
        report: json!({ "phi": phi, "suite": suite }),
        csv: None,
        pass,
    })
}

fn suite_invariance(job: &mut Job) -> Result<Outcome> {
    let rep = job.representation()?;
    let phi = job.phi(InvariantPolynomial::TraceForm);
    let ctx = job.context(rep.clone(), phi.clone())?;
    let trials = job.trials(20)?;
    let mut rng = fixtures::rng(job.seed());
    let (mut max_dev, mut scale) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let g = fixtures::random_group_element(&mut rng, rep.group(), 1.0);
        let pair_seed: u64 = rng.gen();
        let r = conjugation_invariance(&ctx, &g, 5, pair_seed, &job.tol)?;
        max_dev = max_dev.max(r.max_dev);
        scale = scale.max(r.scale);
    }
    let conjugation = json!({
        "check": "conjugation",
        "max_dev": max_dev,
        "scale": scale,
        "tolerance": forms::SUITE_TOL,
        "pass": max_dev <= forms::SUITE_TOL * scale,
        "trials": trials,
    });
    let mut pass = max_dev <= forms::SUITE_TOL * scale;
    let mut endos = Vec::new();
    for e in &job.inputs.endomorphisms {
        let pres = rep.presentation();
        if let Some(name) = e.endomorphism.keys().find(|k| pres.generator_index(k).is_none()) {
            return Err(Error::UnknownGenerator(name.clone()));
        }
        let images = pres
            .generator_names()
            .iter()
            .map(|g| match e.endomorphism.get(g) {
                Some(text) => pres.parse_word(text),
                None => Ok(Word::generator(pres.generator_index(g).expect("own generator"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let (_, r) = endomorphism_pullback(&ctx, &images, 10, rng.gen(), &job.tol)?;
        let ok = e
            .expected_ratio
            .map(|x| (r.ratio - Complex64::new(x, 0.0)).norm() <= RATIO_TOL && r.spread <= RATIO_TOL);
        if ok == Some(false) {
            pass = false;
        }
        endos.push(json!({
            "name": e.name,
            "images": e.endomorphism,
            "report": r,
            "expected_ratio": e.expected_ratio,
            "ratio_tol": RATIO_TOL,
            "pass": ok,
        }));
    }
    let report = json!({ "phi": phi, "conjugation": conjugation, "endomorphisms": endos });
    Ok(Outcome {
        report,
        csv: None,
        pass,
    })
}

fn closedness(job: &mut Job) -> Result<Outcome> {
    let rep = job.representation()?;
    let phi = job.phi(InvariantPolynomial::TraceForm);
    let ctx = job.context(rep.clone(), phi.clone())?;
    let space = cocycle_space(&rep, &job.tol)?;
    let dim = ctx.degree() + 1;
    if space.basis_h1.len() < dim {
        return Err(Error::InvalidInput(format!(
            "closedness needs dim H¹ ≥ {dim}, found {}",
            space.basis_h1.len()
        )));
    }
    let chart = Chart::new(rep, space.basis_h1[..dim].to_vec(), &job.tol)?;
    let h = job.step()?;
    let form = EtaForm { ctx: ctx.clone() };
    let main = fd_exterior_derivative(&chart, &form, h, Stencil::Holomorphic)?;
    let frozen = FrozenForm {
        ctx: ctx.clone(),
        directions: chart.directions().to_vec(),
    };
    let constant = fd_exterior_derivative(&chart, &frozen, h, Stencil::Holomorphic)?;
    let perturbed = PerturbedForm {
        inner: form,
        amplitude: PERTURBATION,
        variable: 0,
        indices: (1..dim).collect(),
    };
    let control = fd_exterior_derivative(&chart, &perturbed, h, Stencil::Holomorphic)?;
    let r = &main.exterior_derivative;
    let closed = r.max_dw <= charts::CLOSEDNESS_TOL * r.scale;
    let detected = control.exterior_derivative.max_dw >= DETECTION_FLOOR;
    let report = json!({
        "phi": phi,
        "chart_dimension": dim,
        "form": main,
        "closed": closed,
        "closedness_tol": charts::CLOSEDNESS_TOL,
        "constant_control": constant,
        "perturbed_control": {
            "amplitude": PERTURBATION,
            "max_dw": control.exterior_derivative.max_dw,
            "detection_floor": DETECTION_FLOOR,
            "detected": detected,
        },
    });
    Ok(Outcome {
        report,
        csv: None,
        pass: closed && detected,
    })
}

/// Random quadratic substitution `ℂ^vars → ℂ^m` with small coefficients.
pub fn random_substitution<R: Rng>(rng: &mut R, m: usize, vars: usize, size: f64) -> Vec<Polynomial> {
    let mut monomials: Vec<Vec<u32>> = vec![vec![0; vars]];
    for i in 0..vars {
        let mut e = vec![0; vars];
        e[i] = 1;
        monomials.push(e);
        for j in i..vars {
            let mut e = vec![0; vars];
            e[i] += 1;
            e[j] += 1;
            monomials.push(e);
        }
    }
    (0..m)
        .map(|_| {
            let mut q = Polynomial::zero();
            for e in &monomials {
                q.add_term(e.clone(), fixtures::random_complex(rng) * size);
            }
            q
        })
        .collect()
}

fn family(job: &mut Job) -> Result<Outcome> {
    let json = job
        .inputs
        .family
        .take()
        .ok_or_else(|| Error::InvalidInput("family needs a family input".into()))?;
    let family = FamilySpec::from_json(json, job.inputs.presentation.clone(), &job.tol)?;
    let phi = job.phi(InvariantPolynomial::TraceForm);
    let chain = match &job.inputs.chain {
        Some(c) => Some(c.clone().into_chain(family.presentation())?),
        None => None,
    };
    let grid = job.options.grid.unwrap_or(2);
    let pull = family_pullback(
        &family,
        &phi,
        chain.as_ref(),
        grid,
        job.step()?,
        Stencil::Holomorphic,
        &job.tol,
    )?;
    let mut rng = fixtures::rng(job.seed());
    let m = family.parameter_count();
    let radius = family.domain_radius().iter().copied().fold(f64::INFINITY, f64::min);
    let mut changes = Vec::new();
    for _ in 0..job.trials(5)? {
        let subs = random_substitution(&mut rng, m, m, radius / 4.0);
        let seed: u64 = rng.gen();
        changes.push(base_change_check(
            &family,
            &phi,
            chain.as_ref(),
            &subs,
            vec![1.0; m],
            4,
            seed,
            &job.tol,
        )?);
    }
    let pass = pull.closedness.pass && changes.iter().all(|c| c.pass);
    let csv = pull.to_csv();
    let report = json!({
        "phi": phi,
        "params": family.params(),
        "grid": grid,
        "closedness": pull.closedness,
        "antisymmetry": pull.antisymmetry,
        "samples": pull.samples,
        "base_change": changes,
    });
    Ok(Outcome {
        report,
        csv: Some(csv),
        pass,
    })
}

fn demo_free_group(job: &mut Job) -> Result<Outcome> {
    let phi = job.phi(InvariantPolynomial::Killing);
    let group = match job.inputs.representation.as_ref() {
        Some(r) => r.group,
        None => GroupSpec::sl(2),
    };
    let p = job.options.generators.unwrap_or(2);
    let report = free_group_demo(p, group, &phi, job.trials(10)?, job.seed(), job.step()?, &job.tol)?;
    let pass = report.nonclosed && report.boundary_pass;
    Ok(Outcome {
        report: serde_json::to_value(report)?,
        csv: None,
        pass,
    })
}

/// Runs a parsed command and returns its outcome. The report carries the
/// command name, status, seed and every tolerance in force.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let tol = tolerances(&cli.options)?;
    if cli.command.randomized() && cli.options.seed.is_none() {
        return Err(Error::InvalidInput(format!(
            "{} is randomized and needs --seed",
            cli.command.name()
        )));
    }
    let inputs = load_inputs(&cli.options.input)?;
    let mut job = Job {
        command: cli.command,
        options: cli.options.clone(),
        tol,
        inputs,
    };
    let mut outcome = match cli.command {
        Command::Validate => validate(&mut job)?,
        Command::Cohomology => cohomology(&mut job)?,
        Command::Goldman => goldman(&mut job)?,
        Command::Eta => eta(&mut job)?,
        Command::SuiteBasic => suite_basic(&mut job)?,
        Command::SuiteInvariance => suite_invariance(&mut job)?,
        Command::Closedness => closedness(&mut job)?,
        Command::Family => family(&mut job)?,
        Command::DemoFreeGroup => demo_free_group(&mut job)?,
    };
    let mut envelope = json!({
        "command": cli.command.name(),
        "status": if outcome.pass { "pass" } else { "fail" },
        "seed": cli.options.seed,
        "tolerances": tol,
    });
    if let (Value::Object(env), Value::Object(body)) = (&mut envelope, std::mem::take(&mut outcome.report)) {
        env.extend(body);
    }
    outcome.report = envelope;
    Ok(outcome)
}

fn emit(options: &Options, value: &Value, csv: Option<&str>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match &options.output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    if let Some(csv) = csv {
        let path = options
            .csv
            .clone()
            .or_else(|| options.output.as_ref().map(|p| p.with_extension("csv")));
        if let Some(path) = path {
            fs::write(path, csv)?;
        }
    }
    Ok(())
}

/// Parses arguments, runs the command, writes the report, and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (value, csv, code) = match execute(&cli) {
        Ok(outcome) => {
            let code = if outcome.pass { 0 } else { 1 };
            (outcome.report, outcome.csv, code)
        }
        Err(err) => (error_report(&err), None, if err.is_input_error() { 2 } else { 1 }),
    };
    if code != 0 && value.get("error").is_some() {
        eprintln!("{}", value);
    }
    match emit(&cli.options, &value, csv.as_deref()) {
        Ok(()) => code,
        Err(err) => {
            eprintln!("{}", error_report(&err));
            2
        }
    }
}
