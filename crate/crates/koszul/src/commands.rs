//! The subcommand tree and its handlers.
//!
//! Handlers resolve their inputs through [`Ctx`], which keeps the canonical
//! document of every input for `--dump` and the report digest, then return the
//! JSON result payload.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use koszul_core::algebra::{commutator_bracket, killing_form};
use koszul_core::cohomology::{self, CeCoefficients, CohomologyReport, KvCoefficients};
use koszul_core::connection::{amari_dual, cartan_connection, is_locally_flat, CartanKind, DefectKind};
use koszul_core::flat_models::{self, Completeness, CompletenessProof};
use koszul_core::gauge::{self, FeStarSolutions};
use koszul_core::invariants::{self, Certificate, ExistenceVerdict, RankMethod, SearchOptions, VerdictWitness};
use koszul_core::spencer::{self, Involutivity, SpencerReport, SymbolSpace};
use koszul_core::statmodel::{self, Derivatives, FiniteStatModel, StatModel};
use koszul_core::{catalog, BilinearForm, BilinearProduct, InvariantConnection, LieAlgebra, Symmetry};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::format::{
    load, matrix_rows, qs, AlgebraDoc, FormDoc, ProductDoc, SubspaceDoc, SymbolDoc, Q,
};
use crate::report::{render_text, InputDigest, Report, SCHEMA};

#[derive(Debug, Parser)]
#[command(name = "koszul", version, about = "Exact invariants of Koszul connections on Lie algebras")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed for every randomized search.
    #[arg(long, global = true, env = "KOSZUL_SEED")]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Print the canonical input documents instead of running the command.
    #[arg(long, global = true)]
    pub dump: bool,

    /// Add the elapsed milliseconds to the report (makes it nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,

    /// Restarts for the flat-structure search.
    #[arg(long, global = true)]
    pub budget: Option<usize>,

    /// Random samples for rank searches on spaces of dimension above 3.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

/// Algebraic inputs shared by most subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct Inputs {
    /// Lie algebra file: {"dim", "bracket": [[i, j, k, "p/q"], ...]}.
    #[arg(long)]
    pub algebra: Option<PathBuf>,

    /// Bilinear product file: {"dim", "gamma": [[i, j, k, "p/q"], ...]}.
    #[arg(long)]
    pub product: Option<PathBuf>,

    /// Connection coefficients on the algebra, same format as a product.
    #[arg(long)]
    pub connection: Option<PathBuf>,

    /// Symmetric nondegenerate form: {"dim", "sym", "entries"}.
    #[arg(long)]
    pub metric: Option<PathBuf>,

    /// A symmetric or skew form to check against the algebra.
    #[arg(long)]
    pub form: Option<PathBuf>,

    /// Built-in algebra or product (see `koszul catalog`).
    #[arg(long)]
    pub catalog: Option<String>,

    /// Use a canonical Cartan connection of the algebra.
    #[arg(long, value_enum)]
    pub cartan: Option<Cartan>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Cartan {
    Minus,
    Zero,
    Plus,
}

impl From<Cartan> for CartanKind {
    fn from(c: Cartan) -> Self {
        match c {
            Cartan::Minus => CartanKind::Minus,
            Cartan::Zero => CartanKind::Zero,
            Cartan::Plus => CartanKind::Plus,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a Lie algebra, and optionally a product or form on it.
    CheckLie(Inputs),
    /// Existence verdicts and numerical gaps.
    Invariants(InvariantsArgs),
    /// Solution spaces of the gauge equations.
    Gauge(GaugeArgs),
    /// Cohomology dimensions of KV, Chevalley–Eilenberg or Hochschild complexes.
    KvCohomology(CohomologyArgs),
    /// Prolongations, Cartan's test, Spencer cohomology and involutivity.
    Spencer(SpencerArgs),
    /// Affine-algebra towers, completeness and effective pairs.
    #[command(subcommand)]
    FlatModels(FlatModelsCommand),
    /// Fisher information and α-geometry of finite statistical models.
    Statmodel(StatmodelArgs),
    /// List the built-in names.
    Catalog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Rb,
    Sb,
    #[value(name = "sb+")]
    SbPlus,
    #[value(name = "s*b")]
    SStarB,
    Hessian,
    Flat,
    Bimetric,
    Symplectic,
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    #[arg(long, value_enum)]
    pub which: Which,

    #[command(flatten)]
    pub inputs: Inputs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GaugeOp {
    Fe,
    FeStar,
    FeStarStar,
    Split,
}

#[derive(Debug, Args)]
pub struct GaugeArgs {
    #[arg(long, value_enum)]
    pub op: GaugeOp,

    #[command(flatten)]
    pub inputs: Inputs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Complex {
    Kv,
    Ce,
    Hochschild,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coeffs {
    Adjoint,
    Scalar,
}

#[derive(Debug, Args)]
pub struct CohomologyArgs {
    #[arg(long, value_enum, default_value_t = Complex::Kv)]
    pub complex: Complex,

    /// Coefficients; `scalar` means trivial coefficients for the CE complex.
    #[arg(long, value_enum, default_value_t = Coeffs::Adjoint)]
    pub coeffs: Coeffs,

    /// Highest degree (default 3, or 2 for Hochschild).
    #[arg(long)]
    pub max_degree: Option<usize>,

    #[command(flatten)]
    pub inputs: Inputs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpencerOp {
    Prolong,
    Cartan,
    Cohomology,
    Involutive,
}

#[derive(Debug, Args)]
pub struct SpencerArgs {
    #[arg(long, value_enum)]
    pub op: SpencerOp,

    /// Symbol file: {"v", "w", "basis": [[w × v row-major rationals], ...]}.
    #[arg(long)]
    pub symbol: Option<PathBuf>,

    /// Built-in symbol (`hom:V:W`, `so:N`, `cauchy-riemann`, ...).
    #[arg(long)]
    pub catalog: Option<String>,

    /// Random changes of basis tried after the standard one.
    #[arg(long, default_value_t = spencer::DEFAULT_TRIALS)]
    pub trials: usize,
}

#[derive(Debug, Subcommand)]
pub enum FlatModelsCommand {
    /// Dimensions of the tower of affine algebras.
    Tower {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        steps: usize,
    },
    /// Is `a ↦ a·u + a` injective for every `u`?
    Completeness(Inputs),
    /// Right-ideal and simplicity check of a subspace.
    Ideal {
        /// Subspace file: {"dim", "basis": [[...], ...]}.
        #[arg(long)]
        ideal: PathBuf,

        #[command(flatten)]
        inputs: Inputs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatOp {
    Fisher,
    Alpha,
    Curvature,
    Defect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DerivativeRoute {
    Fd,
    Analytic,
}

#[derive(Debug, Args)]
pub struct StatmodelArgs {
    /// `bernoulli`, `categorical:N`, `categorical-natural:N`, `curved4`, `constant:N:D`.
    #[arg(long)]
    pub family: String,

    #[arg(long, value_enum)]
    pub op: StatOp,

    /// Parameter point, comma separated (default: centre of the family's grid).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<f64>>,

    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,

    /// Flatness tolerance for `defect`.
    #[arg(long, default_value_t = statmodel::DEFAULT_PROBE_TOL)]
    pub tol: f64,

    /// Derivatives of log p for fisher/alpha/curvature (default: fd, except
    /// analytic for curvature).
    #[arg(long, value_enum)]
    pub derivatives: Option<DerivativeRoute>,
}

/// What a run prints on success.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Report(Report),
    Dump(Value),
}

impl Output {
    pub fn render(&self, format: OutputFormat) -> String {
        match (self, format) {
            (Output::Dump(v), _) => pretty(v),
            (Output::Report(r), OutputFormat::Json) => pretty(r),
            (Output::Report(r), OutputFormat::Text) => {
                let mut head = format!("command  koszul {}\nseed     {}\ninputs   {}\n", r.command.join(" "), r.seed, r.inputs_digest);
                if let Some(ms) = r.timing_ms {
                    head.push_str(&format!("time     {ms:.3} ms\n"));
                }
                head.push('\n');
                head + &render_text(&r.result)
            }
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

/// Runs a parsed command line; `argv` is echoed into the report.
pub fn execute(cli: &Cli, argv: &[String]) -> Result<Output, CliError> {
    let seed = cli.global.seed.unwrap_or(invariants::DEFAULT_SEED);
    let defaults = SearchOptions::default();
    let opts = SearchOptions {
        seed,
        samples: cli.global.samples.unwrap_or(defaults.samples),
        budget: cli.global.budget.unwrap_or(defaults.budget),
    };
    let empty = Inputs::default();
    let inputs = match &cli.command {
        Command::CheckLie(i) | Command::FlatModels(FlatModelsCommand::Completeness(i)) => i,
        Command::Invariants(a) => &a.inputs,
        Command::Gauge(a) => &a.inputs,
        Command::KvCohomology(a) => &a.inputs,
        Command::FlatModels(FlatModelsCommand::Ideal { inputs, .. }) => inputs,
        _ => &empty,
    };
    let mut ctx = Ctx::new(inputs, opts, cli.global.dump);
    let start = Instant::now();
    let result = match &cli.command {
        Command::CheckLie(_) => check_lie(&mut ctx)?,
        Command::Invariants(a) => invariants_cmd(&mut ctx, a.which)?,
        Command::Gauge(a) => gauge_cmd(&mut ctx, a.op)?,
        Command::KvCohomology(a) => cohomology_cmd(&mut ctx, a)?,
        Command::Spencer(a) => spencer_cmd(&mut ctx, a)?,
        Command::FlatModels(c) => flat_models_cmd(&mut ctx, c)?,
        Command::Statmodel(a) => statmodel_cmd(&mut ctx, a)?,
        Command::Catalog => catalog_cmd(),
    };
    if ctx.dump {
        return Ok(Output::Dump(Value::Object(ctx.docs)));
    }
    let timing_ms = cli.global.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    Ok(Output::Report(Report {
        schema: SCHEMA,
        command: argv.to_vec(),
        seed,
        inputs_digest: ctx.digest.finish(),
        result,
        timing_ms,
    }))
}

// ---------------------------------------------------------------------------
// Input resolution

struct Ctx<'a> {
    inputs: &'a Inputs,
    opts: SearchOptions,
    dump: bool,
    digest: InputDigest,
    docs: Map<String, Value>,
    algebra: Option<LieAlgebra>,
    product: Option<Option<BilinearProduct>>,
}

fn to_value<T: Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("documents serialize")
}

fn unknown_catalog(name: &str, known: &[&str]) -> CliError {
    CliError::Validation(format!("unknown catalog entry {name:?}; known: {}", known.join(", ")))
}

impl<'a> Ctx<'a> {
    fn new(inputs: &'a Inputs, opts: SearchOptions, dump: bool) -> Self {
        Ctx { inputs, opts, dump, digest: InputDigest::default(), docs: Map::new(), algebra: None, product: None }
    }

    fn record(&mut self, label: &str, doc: Value) {
        self.digest.add(label, &doc);
        self.docs.insert(label.to_string(), doc);
    }

    /// `--algebra`, else `--catalog`, else the commutator of `--product`.
    fn algebra(&mut self) -> Result<LieAlgebra, CliError> {
        if let Some(l) = &self.algebra {
            return Ok(l.clone());
        }
        let l = if let Some(path) = &self.inputs.algebra {
            load::<AlgebraDoc>(path)?.to_algebra()?
        } else if let Some(name) = &self.inputs.catalog {
            catalog::lie_algebra(name).ok_or_else(|| unknown_catalog(name, catalog::LIE_NAMES))?
        } else if self.inputs.product.is_some() {
            let p = self.product()?;
            commutator_bracket(&p)?
        } else {
            return Err(CliError::Usage("this command needs --algebra, --catalog or --product".into()));
        };
        self.record("algebra", to_value(&AlgebraDoc::from_algebra(&l)));
        self.algebra = Some(l.clone());
        Ok(l)
    }

    /// `--product`, else the catalog entry's product if it has one.
    fn product_opt(&mut self) -> Result<Option<BilinearProduct>, CliError> {
        if let Some(p) = &self.product {
            return Ok(p.clone());
        }
        let p = if let Some(path) = &self.inputs.product {
            Some(load::<ProductDoc>(path)?.to_product()?)
        } else if let Some(name) = &self.inputs.catalog {
            catalog::kv_product(name)
        } else {
            None
        };
        if let Some(p) = &p {
            self.record("product", to_value(&ProductDoc::from_product(p)));
        }
        self.product = Some(p.clone());
        Ok(p)
    }

    fn product(&mut self) -> Result<BilinearProduct, CliError> {
        self.product_opt()?.ok_or_else(|| match &self.inputs.catalog {
            Some(name) if catalog::lie_algebra(name).is_none() => unknown_catalog(name, catalog::PRODUCT_NAMES),
            Some(name) => CliError::Usage(format!("catalog entry {name:?} has no product; pass --product")),
            None => CliError::Usage("this command needs --product or --catalog".into()),
        })
    }

    fn explicit_connection(&mut self) -> Result<Option<InvariantConnection>, CliError> {
        let nabla = if let Some(path) = &self.inputs.connection {
            let doc: ProductDoc = load(path)?;
            let base = self.algebra()?;
            doc.to_connection(&base)?
        } else if let Some(kind) = self.inputs.cartan {
            cartan_connection(&self.algebra()?, kind.into())
        } else {
            return Ok(None);
        };
        self.record("connection", to_value(&ProductDoc::from_connection(&nabla)));
        Ok(Some(nabla))
    }

    /// `--connection`, `--cartan`, else the product read as a connection on
    /// its commutator algebra.
    fn connection(&mut self) -> Result<InvariantConnection, CliError> {
        if let Some(nabla) = self.explicit_connection()? {
            return Ok(nabla);
        }
        match self.product_opt()? {
            Some(p) => Ok(InvariantConnection::from_product(p)?),
            None => Err(CliError::Usage("this command needs --connection, --cartan or a product".into())),
        }
    }

    /// `--metric`, defaulting to the identity.
    fn metric(&mut self, m: usize) -> Result<BilinearForm, CliError> {
        let g = match &self.inputs.metric {
            Some(path) => load::<FormDoc>(path)?.to_form()?,
            None => BilinearForm::identity(m),
        };
        if g.dim() != m {
            return Err(koszul_core::Error::DimensionMismatch { expected: m, found: g.dim() }.into());
        }
        if g.symmetry() != Symmetry::Symmetric {
            return Err(CliError::Validation("the metric must be symmetric".into()));
        }
        g.require_nondegenerate()?;
        self.record("metric", to_value(&FormDoc::from_form(&g)?));
        Ok(g)
    }

    fn form(&mut self) -> Result<Option<BilinearForm>, CliError> {
        let Some(path) = &self.inputs.form else { return Ok(None) };
        let f = load::<FormDoc>(path)?.to_form()?;
        self.record("form", to_value(&FormDoc::from_form(&f)?));
        Ok(Some(f))
    }
}

// ---------------------------------------------------------------------------
// JSON shapes

fn form_json(f: &BilinearForm) -> Value {
    json!({
        "symmetry": f.symmetry().name(),
        "matrix": matrix_rows(f.matrix()),
        "rank": f.rank(),
    })
}

fn method_json(m: &RankMethod) -> Value {
    match m {
        RankMethod::Exhaustive { points, certified } => {
            json!({"kind": "exhaustive", "points": points, "certified": certified})
        }
        RankMethod::Randomized { samples } => json!({"kind": "randomized", "samples": samples}),
    }
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::CommonKernel(v) => json!({"kind": c.name(), "vector": qs(v)}),
        _ => json!({"kind": c.name()}),
    }
}

fn verdict_json(which: &str, v: &ExistenceVerdict) -> Value {
    let mut out = json!({
        "which": which,
        "exists": v.exists.name(),
        "value": v.value,
        "witness": v.witness_name(),
    });
    match &v.witness {
        Some(VerdictWitness::Form { form, .. }) => out["witness_form"] = form_json(form),
        Some(VerdictWitness::Connection(c)) => out["witness_connection"] = to_value(&ProductDoc::from_connection(c)),
        None => {}
    }
    if let Some(c) = &v.certificate {
        out["certificate"] = certificate_json(c);
    }
    if let Some(m) = &v.method {
        out["method"] = method_json(m);
    }
    out["notes"] = json!(v.notes);
    out
}

fn fe_star_json(sol: &FeStarSolutions) -> Value {
    json!({
        "dim_solution": sol.space.dim(),
        "basis": sol.space.basis().iter().map(|v| qs(v)).collect::<Vec<_>>(),
        "r_b": sol.r_b,
        "steps": sol.steps,
    })
}

fn cohomology_json(r: &CohomologyReport) -> Value {
    json!({
        "complex": r.complex,
        "cochains": r.cochains,
        "kernels": r.kernels,
        "images": r.images,
        "cohomology": r.cohomology,
    })
}

fn spencer_json(r: &SpencerReport) -> Value {
    json!({
        "prolongation_dims": r.prolongation_dims,
        "cells": r.cells.iter().map(|c| json!({
            "p": c.p, "q": c.q, "cochain_dim": c.cochain_dim, "cohomology": c.cohomology,
        })).collect::<Vec<_>>(),
        "d_squared_zero": r.d_squared_zero,
        "vanishes": r.vanishes(),
    })
}

// ---------------------------------------------------------------------------
// Handlers

fn check_lie(ctx: &mut Ctx) -> Result<Value, CliError> {
    let l = ctx.algebra()?;
    let product = if ctx.inputs.product.is_some() || ctx.inputs.catalog.is_some() { ctx.product_opt()? } else { None };
    let form = ctx.form()?;
    if ctx.dump {
        return Ok(Value::Null);
    }
    let k = killing_form(&l);
    let mut out = json!({
        "lie": true,
        "dim": l.dim(),
        "abelian": l.is_abelian(),
        "killing": form_json(&k),
    });
    if let Some(p) = product {
        let commutator = commutator_bracket(&p).ok();
        out["product"] = json!({
            "associative": p.is_associative(),
            "kv": p.is_kv(),
            "commutator_matches": commutator.as_ref() == Some(&l),
        });
    }
    if let Some(f) = form {
        if f.dim() != l.dim() {
            return Err(koszul_core::Error::DimensionMismatch { expected: l.dim(), found: f.dim() }.into());
        }
        let mut fj = form_json(&f);
        fj["nondegenerate"] = json!(f.is_nondegenerate());
        match f.symmetry() {
            Symmetry::Symmetric => {
                fj["ad_invariant"] = json!(invariants::ad_invariance_defect(&l, f.matrix())?.is_zero());
                fj["positive_definite"] = json!(f.is_positive_definite());
            }
            _ => fj["closed"] = json!(invariants::two_cocycle_defect(&l, f.matrix())?.is_zero()),
        }
        out["form"] = fj;
    }
    Ok(out)
}

fn invariants_cmd(ctx: &mut Ctx, which: Which) -> Result<Value, CliError> {
    let opts = ctx.opts;
    match which {
        Which::Rb => {
            let nabla = ctx.connection()?;
            if ctx.dump {
                return Ok(Value::Null);
            }
            let sol = gauge::solve_fe_star(&nabla);
            let flat = is_locally_flat(&nabla);
            let defect = nabla.dim() - sol.r_b;
            let mut out = json!({
                "which": "rb",
                "exists": if defect == 0 { "yes" } else { "no" },
                "value": defect,
                "r_b": sol.r_b,
                "dim_solution": sol.space.dim(),
                "flat": flat.flat,
            });
            if let Some((kind, index, value)) = flat.witness {
                let kind = match kind {
                    DefectKind::Torsion => "torsion",
                    DefectKind::Curvature => "curvature",
                };
                out["flatness_witness"] = json!({"kind": kind, "index": index, "value": Q::of(&value)});
            }
            Ok(out)
        }
        Which::Sb | Which::SbPlus => {
            let l = ctx.algebra()?;
            let g = ctx.metric(l.dim())?;
            if ctx.dump {
                return Ok(Value::Null);
            }
            let name = if which == Which::Sb { "sb" } else { "sb+" };
            Ok(verdict_json(name, &invariants::s_b(&l, &g, which == Which::SbPlus, &opts)?))
        }
        Which::SStarB => {
            let nabla = ctx.connection()?;
            let g = ctx.metric(nabla.dim())?;
            if ctx.dump {
                return Ok(Value::Null);
            }
            Ok(verdict_json("s*b", &invariants::s_star_b(&nabla, &g, &opts)?))
        }
        Which::Hessian => {
            let nabla = ctx.connection()?;
            if ctx.dump {
                return Ok(Value::Null);
            }
            Ok(verdict_json("hessian", &invariants::hessian_defect(&nabla, &opts)?))
        }
        Which::Flat => {
            let l = ctx.algebra()?;
            let candidates: Vec<_> = ctx.explicit_connection()?.into_iter().collect();
            if ctx.dump {
                return Ok(Value::Null);
            }
            Ok(verdict_json("flat", &invariants::flat_existence(&l, &candidates, &opts)?))
        }
        Which::Bimetric => {
            let l = ctx.algebra()?;
            if ctx.dump {
                return Ok(Value::Null);
            }
            Ok(verdict_json("bimetric", &invariants::bi_invariant_metric(&l, &opts)))
        }
        Which::Symplectic => {
            let l = ctx.algebra()?;
            if ctx.dump {
                return Ok(Value::Null);
            }
            Ok(verdict_json("symplectic", &invariants::left_symplectic_oracle(&l, &opts)))
        }
    }
}

fn gauge_cmd(ctx: &mut Ctx, op: GaugeOp) -> Result<Value, CliError> {
    let nabla = ctx.connection()?;
    match op {
        GaugeOp::FeStar | GaugeOp::FeStarStar => {
            if ctx.dump {
                return Ok(Value::Null);
            }
            let sol = match op {
                GaugeOp::FeStar => gauge::solve_fe_star(&nabla),
                _ => gauge::solve_fe_star_star(&nabla)?,
            };
            Ok(fe_star_json(&sol))
        }
        GaugeOp::Fe | GaugeOp::Split => {
            let g = ctx.metric(nabla.dim())?;
            if ctx.dump {
                return Ok(Value::Null);
            }
            let dual = amari_dual(&nabla, &g)?;
            let space = gauge::solve_gauge_equation(&nabla, &dual)?;
            let sym = gauge::parallel_forms(&nabla, Symmetry::Symmetric).dim();
            let skew = gauge::parallel_forms(&nabla, Symmetry::Skew).dim();
            let mut out = json!({
                "dim_solution": space.dim(),
                "dim_symmetric_parallel": sym,
                "dim_skew_parallel": skew,
            });
            if op == GaugeOp::Fe {
                out["basis"] = json!(space.matrices().iter().map(matrix_rows).collect::<Vec<_>>());
            } else {
                let mut pairs = Vec::new();
                for phi in space.matrices() {
                    let pair = gauge::phi_split(&phi, &g)?;
                    pairs.push(json!({
                        "phi": matrix_rows(&phi),
                        "symmetric": matrix_rows(&pair.phi),
                        "skew": matrix_rows(&pair.phi_star),
                    }));
                }
                out["pairs"] = json!(pairs);
            }
            Ok(out)
        }
    }
}

fn cohomology_cmd(ctx: &mut Ctx, args: &CohomologyArgs) -> Result<Value, CliError> {
    match args.complex {
        Complex::Kv | Complex::Hochschild => {
            let p = ctx.product()?;
            if ctx.dump {
                return Ok(Value::Null);
            }
            let report = if args.complex == Complex::Kv {
                let coeffs = match args.coeffs {
                    Coeffs::Adjoint => KvCoefficients::Adjoint,
                    Coeffs::Scalar => KvCoefficients::Scalar,
                };
                let max = args.max_degree.unwrap_or(cohomology::MAX_REPORT_DEGREE);
                cohomology::kv_cohomology_dims(&p, coeffs, max)?
            } else {
                if args.coeffs != Coeffs::Adjoint {
                    return Err(CliError::Usage("--coeffs does not apply to the Hochschild complex".into()));
                }
                let max = args.max_degree.unwrap_or(cohomology::MAX_HOCHSCHILD_DEGREE);
                cohomology::hochschild_dims(&p, max)?
            };
            Ok(cohomology_json(&report))
        }
        Complex::Ce => {
            let l = ctx.algebra()?;
            if ctx.dump {
                return Ok(Value::Null);
            }
            let coeffs = match args.coeffs {
                Coeffs::Adjoint => CeCoefficients::Adjoint,
                Coeffs::Scalar => CeCoefficients::Trivial,
            };
            let max = args.max_degree.unwrap_or(cohomology::MAX_CE_DEGREE);
            if max > cohomology::MAX_CE_DEGREE {
                return Err(CliError::Validation(format!("--max-degree is at most {}", cohomology::MAX_CE_DEGREE)));
            }
            Ok(cohomology_json(&cohomology::ce_cohomology_dims(&l, coeffs, max)))
        }
    }
}

fn symbol(ctx: &mut Ctx, args: &SpencerArgs) -> Result<SymbolSpace, CliError> {
    let a = match (&args.symbol, &args.catalog) {
        (Some(path), None) => load::<SymbolDoc>(path)?.to_symbol()?,
        (None, Some(name)) => spencer::catalog_symbol(name).ok_or_else(|| unknown_catalog(name, spencer::SYMBOL_NAMES))?,
        _ => return Err(CliError::Usage("spencer needs exactly one of --symbol and --catalog".into())),
    };
    ctx.record("symbol", to_value(&SymbolDoc::from_symbol(&a)));
    Ok(a)
}

fn spencer_cmd(ctx: &mut Ctx, args: &SpencerArgs) -> Result<Value, CliError> {
    let a = symbol(ctx, args)?;
    if ctx.dump {
        return Ok(Value::Null);
    }
    let seed = ctx.opts.seed;
    let head = json!({"v": a.v_dim(), "w": a.w_dim(), "dim": a.dim()});
    let body = match args.op {
        SpencerOp::Prolong => {
            let dims: Vec<usize> = (1..=2).map(|q| spencer::prolongation(&a, q).dim()).collect();
            json!({"prolongation_dims": dims})
        }
        SpencerOp::Cartan => {
            let found = spencer::find_quasi_regular_basis(&a, args.trials, seed);
            let basis = found.as_ref().map(|(b, _)| b.clone()).unwrap_or_else(|| koszul_core::Matrix::identity(a.v_dim()));
            let test = spencer::cartan_test(&a, &basis)?;
            json!({
                "prolongation_dim": test.prolongation_dim,
                "flag_dims": spencer::flag_dims(&a, &basis),
                "flag_sum": test.flag_sum,
                "quasi_regular": test.quasi_regular,
                "basis": matrix_rows(&basis),
                "trial": found.map(|(_, t)| t),
                "trials": args.trials,
            })
        }
        SpencerOp::Cohomology => spencer_json(&spencer::spencer_cohomology(&a)),
        SpencerOp::Involutive => {
            let (verdict, report) = spencer::is_involutive(&a, args.trials, seed)?;
            let mut out = match verdict {
                Involutivity::Yes { basis, trial } => {
                    json!({"involutive": "yes", "basis": matrix_rows(&basis), "trial": trial})
                }
                Involutivity::No { witness } => json!({"involutive": "no", "witness": {
                    "p": witness.p, "q": witness.q, "cohomology": witness.cohomology,
                }}),
                Involutivity::Unknown => json!({"involutive": "unknown"}),
            };
            out["cohomology"] = spencer_json(&report);
            out
        }
    };
    let mut out = head;
    out.as_object_mut().expect("object").extend(body.as_object().expect("object").clone());
    Ok(out)
}

fn flat_models_cmd(ctx: &mut Ctx, cmd: &FlatModelsCommand) -> Result<Value, CliError> {
    match cmd {
        FlatModelsCommand::Tower { m, steps } => {
            if ctx.dump {
                return Ok(Value::Null);
            }
            let report = flat_models::tower_dims(*m, *steps)?;
            let associative: Vec<Option<bool>> =
                report.levels.iter().map(|l| l.as_ref().map(|a| a.product().is_associative())).collect();
            Ok(json!({"dims": report.dims, "associative": associative}))
        }
        FlatModelsCommand::Completeness(_) => {
            let p = ctx.product()?;
            if ctx.dump {
                return Ok(Value::Null);
            }
            Ok(match flat_models::geometric_completeness(&p, ctx.opts.seed)? {
                Completeness::Complete(proof) => {
                    let proof = match proof {
                        CompletenessProof::Nilpotent { index } => json!({"kind": "nilpotent", "index": index}),
                        CompletenessProof::LowDimensional => json!({"kind": "low-dimensional"}),
                    };
                    json!({"verdict": "complete", "proof": proof})
                }
                Completeness::Incomplete { witness: Some(u) } => {
                    let det = flat_models::psi_matrix(&p, &u).determinant();
                    json!({"verdict": "incomplete", "witness": qs(&u), "det": Q::of(&det)})
                }
                Completeness::Incomplete { witness: None } => {
                    json!({"verdict": "incomplete", "witness": null, "notes": ["det(I + R_u) changes sign along a line"]})
                }
                Completeness::Unknown => json!({"verdict": "unknown"}),
            })
        }
        FlatModelsCommand::Ideal { ideal, .. } => {
            let p = ctx.product()?;
            let doc: SubspaceDoc = load(ideal)?;
            let vectors = doc.vectors()?;
            ctx.record("ideal", to_value(&doc_canonical(&doc, &vectors)));
            if ctx.dump {
                return Ok(Value::Null);
            }
            let r = flat_models::simple_right_ideal_check(&p, &vectors)?;
            Ok(json!({
                "right_ideal": true,
                "ideal_dim": r.ideal_dim,
                "largest_two_sided": r.largest_two_sided.iter().map(|v| qs(v)).collect::<Vec<_>>(),
                "simple": r.simple,
            }))
        }
    }
}

fn doc_canonical(doc: &SubspaceDoc, vectors: &[Vec<koszul_core::Rational>]) -> SubspaceDoc {
    SubspaceDoc { dim: doc.dim, basis: vectors.iter().map(|v| qs(v)).collect() }
}

fn nested(d: usize, order: u32, flat: &[f64]) -> Value {
    if order == 1 {
        return json!(flat);
    }
    let chunk = d.pow(order - 1);
    Value::Array(flat.chunks(chunk.max(1)).map(|c| nested(d, order - 1, c)).collect())
}

fn statmodel_cmd(ctx: &mut Ctx, args: &StatmodelArgs) -> Result<Value, CliError> {
    let model = FiniteStatModel::parse(&args.family)
        .ok_or_else(|| CliError::Validation(format!("unknown family {:?}", args.family)))?;
    let d = model.n_params();
    let grid = model.default_grid();
    let theta = match &args.theta {
        Some(t) => t.clone(),
        None => grid[grid.len() / 2].clone(),
    };
    if theta.len() != d {
        return Err(koszul_core::Error::DimensionMismatch { expected: d, found: theta.len() }.into());
    }
    if ctx.dump {
        return Ok(Value::Null);
    }
    let how = |default: Derivatives| match args.derivatives {
        Some(DerivativeRoute::Fd) => Derivatives::FiniteDifference,
        Some(DerivativeRoute::Analytic) => Derivatives::Analytic,
        None => default,
    };
    let mut out = json!({"family": model.tag(), "params": d, "outcomes": model.n_outcomes()});
    match args.op {
        StatOp::Fisher => {
            out["theta"] = json!(theta);
            out["fisher"] = nested(d, 2, &statmodel::fisher_with(&model, &theta, how(Derivatives::FiniteDifference))?);
        }
        StatOp::Alpha => {
            let c = statmodel::christoffels_with(&model, &theta, args.alpha, how(Derivatives::FiniteDifference))?;
            out["theta"] = json!(theta);
            out["alpha"] = json!(args.alpha);
            out["lowered"] = nested(d, 3, &c.lowered);
            out["raised"] = c.raised.as_ref().map_or(Value::Null, |r| nested(d, 3, r));
            out["max_abs_lowered"] = json!(c.lowered.iter().fold(0.0f64, |m, x| m.max(x.abs())));
        }
        StatOp::Curvature => {
            let r = statmodel::curvature_with(&model, &theta, args.alpha, how(Derivatives::Analytic))?;
            out["theta"] = json!(theta);
            out["alpha"] = json!(args.alpha);
            out["max_abs"] = json!(r.max_abs);
            out["tensor"] = nested(d, 4, &r.tensor);
        }
        StatOp::Defect => {
            let probe = statmodel::exponential_defect_probe(&model, &grid, args.tol)?;
            out["grid_points"] = json!(grid.len());
            out["tol"] = json!(args.tol);
            out["exponential_like"] = json!(probe.exponential_like);
            out["curvature"] =
                json!(probe.curvature.iter().map(|(a, m)| json!({"alpha": a, "max_abs": m})).collect::<Vec<_>>());
            out["torsion"] = json!(probe.torsion);
            out["best_alpha"] = json!(probe.best_alpha);
        }
    }
    Ok(out)
}

fn catalog_cmd() -> Value {
    json!({
        "algebras": catalog::LIE_NAMES,
        "products": catalog::PRODUCT_NAMES,
        "symbols": spencer::SYMBOL_NAMES,
        "families": ["bernoulli", "categorical:N", "categorical-natural:N", "curved4", "constant:N:D"],
    })
}
