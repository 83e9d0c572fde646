//! Command-line surface and dispatch.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fixedbitset::FixedBitSet;
use mtopos_core::algebra::{check_heyting_laws, enumerate_left_ideals, FiniteMonoid, ProjString};
use mtopos_core::classical::{FunctionMonoid, ValueMask, ValueSet};
use mtopos_core::context::{
    sieve_truth_equal, sieve_valuation, GaloisContext, RaySet, StringUniverse,
};
use mtopos_core::linalg::{spectral_projector, Subspace, TolerancePolicy, Vector};
use mtopos_core::mset::{classified_subset, is_equivariant};
use mtopos_core::reduction::{Alphabet, DensityMatrix, Reducer};
use serde_json::{json, Value};

use crate::dsl::{parse_name_list, parse_point_set, parse_string_list, parse_value_set, Diagnostic};
use crate::model::{load, MSetModel, Model, Overrides, QuantumModel};
use crate::report::{self, Report};
use crate::selftest;

pub const DEFAULT_DEPTH: usize = 4;
pub const DEFAULT_MAX_DIM: usize = 16;

#[derive(Parser, Clone, Debug)]
#[command(name = "mtopos", version, about = "Generalised truth values for classical and quantum systems")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone, Debug, Default)]
pub struct GlobalArgs {
    /// System definition file.
    #[arg(long, global = true, value_name = "FILE")]
    pub spec: Option<PathBuf>,
    /// Which declared system to use when there are several.
    #[arg(long, global = true)]
    pub system: Option<String>,
    /// Equality tolerance for eigenvalues and matrix comparisons.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Norm below which a vector counts as zero.
    #[arg(long = "null-threshold", global = true)]
    pub null_threshold: Option<f64>,
    /// Maximum string length for bounded ideals and universes.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Largest Hilbert space dimension accepted.
    #[arg(long = "max-dim", global = true)]
    pub max_dim: Option<usize>,
    /// Seed for randomised suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Human-readable text instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

impl GlobalArgs {
    /// Fills unset options from `outer`.
    fn inherit(&mut self, outer: &GlobalArgs) {
        self.spec = self.spec.take().or_else(|| outer.spec.clone());
        self.system = self.system.take().or_else(|| outer.system.clone());
        self.tol = self.tol.or(outer.tol);
        self.null_threshold = self.null_threshold.or(outer.null_threshold);
        self.depth = self.depth.or(outer.depth);
        self.max_dim = self.max_dim.or(outer.max_dim);
        self.seed = self.seed.or(outer.seed);
        self.pretty |= outer.pretty;
        self.timing |= outer.timing;
    }

    fn overrides(&self) -> Overrides {
        Overrides {
            eps: self.tol,
            null_threshold: self.null_threshold,
            max_dim: self.max_dim.unwrap_or(DEFAULT_MAX_DIM),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TruthKind {
    /// Characteristic arrow of an invariant subset.
    Arrow,
    /// Truth value of "x ∈ K".
    Member,
    /// Truth value of "K₁ ⊆ K₂" at the unit.
    Leq,
    /// Truth value of "x = y".
    Equal,
    /// Every invariant subset with its classifying map.
    InvariantSubsets,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ValuationMode {
    Vector,
    Ray,
    Density,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum EqualMode {
    /// Over projector strings, up to the depth.
    Sp,
    /// Over the finite context of a ray set.
    Context,
    /// As a sieve on one string context.
    Sieve,
}

#[derive(Args, Clone, Debug, Default)]
pub struct LetterArgs {
    /// Letters as a projector list, e.g. "(Pz,Pplus)". Defaults to every projector.
    #[arg(long)]
    pub alphabet: Option<String>,
    /// A declared universe giving the letters and the depth.
    #[arg(long, conflicts_with = "alphabet")]
    pub universe: Option<String>,
}

#[derive(Args, Clone, Debug)]
pub struct RangeArgs {
    #[arg(long)]
    pub state: String,
    #[arg(long)]
    pub op: String,
    /// Value subset Δ, e.g. "{1}".
    #[arg(long)]
    pub range: String,
}

#[derive(Args, Clone, Debug)]
pub struct PolarArgs {
    /// Declared ray set V.
    #[arg(long)]
    pub rays: String,
    /// Rays Ξ ⊆ V, e.g. "(psi,phi)".
    #[arg(long, conflicts_with = "strings")]
    pub xi: Option<String>,
    /// Strings J, e.g. "(Pz),(Pz,Pplus)".
    #[arg(long)]
    pub strings: Option<String>,
    #[command(flatten)]
    pub letters: LetterArgs,
}

#[derive(Subcommand, Clone, Debug)]
pub enum Command {
    /// Parse and validate a definition file and summarise it.
    Parse,
    /// Check the Heyting algebra laws on the left ideals of a monoid.
    VerifyHeyting { monoid: String },
    /// List the left ideals of a monoid.
    EnumerateIdeals { monoid: String },
    /// Truth values in the topos of M-sets.
    Truth {
        #[arg(long)]
        mset: String,
        #[arg(long, value_enum)]
        kind: TruthKind,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        other: Option<String>,
        /// A point subset, e.g. "{a,b}".
        #[arg(long)]
        subset: Option<String>,
        #[arg(long)]
        subset2: Option<String>,
    },
    /// Generalised valuation of "A ∈ Δ" in a classical state.
    ValuateClassical {
        #[arg(long)]
        state: String,
        #[arg(long)]
        quantity: String,
        #[arg(long)]
        range: String,
    },
    /// Valuation of "A ∈ Δ" in a quantum state over the function monoid.
    ValuateQuantum {
        #[command(flatten)]
        target: RangeArgs,
    },
    /// Valuation over projector strings.
    Valuate {
        #[command(flatten)]
        target: RangeArgs,
        #[arg(long, value_enum)]
        mode: ValuationMode,
        #[command(flatten)]
        letters: LetterArgs,
    },
    /// Truth value of "ψ = φ".
    Equal {
        #[arg(long, value_enum)]
        mode: EqualMode,
        #[arg(long)]
        state: String,
        #[arg(long)]
        other: String,
        /// Compare vectors instead of rays (mode sp).
        #[arg(long)]
        vectors: bool,
        /// String context, e.g. "(Pz,Pplus)" (mode sieve).
        #[arg(long)]
        context: Option<String>,
        /// Declared ray set V (mode context).
        #[arg(long)]
        rays: Option<String>,
        /// Rays Ξ ⊆ V (mode context); defaults to all of V.
        #[arg(long)]
        xi: Option<String>,
        #[command(flatten)]
        letters: LetterArgs,
    },
    /// Polar of a ray set or of a string set.
    Polar {
        #[command(flatten)]
        args: PolarArgs,
    },
    /// Double polar of a ray set or of a string set.
    Closure {
        #[command(flatten)]
        args: PolarArgs,
    },
    /// Sieve-valued truth of "A ∈ Δ" on a string context.
    Sieve {
        #[arg(long)]
        context: String,
        #[command(flatten)]
        target: RangeArgs,
        #[command(flatten)]
        letters: LetterArgs,
    },
    /// Run the built-in seeded consistency checks.
    Selftest,
    /// Run a query declared in the definition file.
    Query { name: String },
}

/// Failure of a command, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    Diagnostics(Vec<Diagnostic>),
    Usage(String),
    Core(mtopos_core::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(mtopos_core::Error::Numeric(_)) => 2,
            _ => 1,
        }
    }
}

impl From<mtopos_core::Error> for CliError {
    fn from(e: mtopos_core::Error) -> Self {
        CliError::Core(e)
    }
}

type CResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn arg<T>(flag: &str, text: &str, parsed: Result<T, Diagnostic>) -> CResult<T> {
    parsed.map_err(|d| CliError::Usage(format!("invalid {flag} `{text}`: {}", d.message)))
}

/// A successful command and its exit code (selftest can fail without error).
pub struct Outcome {
    pub report: Report,
    pub exit: i32,
}

/// Everything a command needs: options and the loaded definition.
pub struct Session {
    pub global: GlobalArgs,
    pub model: Option<Model>,
    spec_name: Option<String>,
    tol: TolerancePolicy,
}

impl Session {
    pub fn open(global: GlobalArgs) -> CResult<Self> {
        let (model, spec_name) = match &global.spec {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
                let model = load(&text, &global.overrides()).map_err(CliError::Diagnostics)?;
                (Some(model), Some(file_name(path)))
            }
            None => (None, None),
        };
        let tol = match &model {
            Some(m) => m.tolerance,
            None => {
                let d = TolerancePolicy::default();
                TolerancePolicy::new(global.tol.unwrap_or(d.eps), global.null_threshold.unwrap_or(d.null_threshold))
                    .map_err(|e| CliError::Usage(e.to_string()))?
            }
        };
        Ok(Session {
            global,
            model,
            spec_name,
            tol,
        })
    }

    fn model(&self) -> CResult<&Model> {
        self.model
            .as_ref()
            .ok_or_else(|| CliError::Usage("this command needs --spec".into()))
    }

    fn tolerance(&self) -> TolerancePolicy {
        self.tol
    }

    fn depth(&self) -> usize {
        self.global.depth.unwrap_or(DEFAULT_DEPTH)
    }

    pub fn config(&self) -> Value {
        let t = self.tolerance();
        json!({
            "spec": self.spec_name,
            "eps": t.eps,
            "null_threshold": t.null_threshold,
            "depth": self.depth(),
            "max_dim": self.global.max_dim.unwrap_or(DEFAULT_MAX_DIM),
            "seed": self.global.seed(),
        })
    }

    fn quantum(&self) -> CResult<&QuantumModel> {
        let model = self.model()?;
        match &self.global.system {
            Some(name) => model
                .quantum(name)
                .ok_or_else(|| CliError::Usage(format!("no quantum system `{name}`"))),
            None => match model.quantum.as_slice() {
                [only] => Ok(only),
                [] => usage("the definition declares no quantum system"),
                _ => usage("several quantum systems are declared; choose one with --system"),
            },
        }
    }

    fn monoid(&self, name: &str) -> CResult<Arc<FiniteMonoid>> {
        if let Some(m) = self.model.as_ref().and_then(|m| m.monoid(name)) {
            return Ok(m.clone());
        }
        crate::fixtures::builtin_monoid(name).map(Arc::new).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown monoid `{name}` (declare it, or use one of {})",
                crate::fixtures::BUILTIN_MONOIDS.join(", ")
            ))
        })
    }
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn state_vector(q: &QuantumModel, name: &str) -> CResult<Vector> {
    q.states
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, v)| v.clone())
        .ok_or_else(|| CliError::Usage(format!("no state `{name}` in system `{}`", q.name)))
}

/// The letters and depth picked by `--alphabet`, `--universe` and `--depth`.
struct Letters {
    reducer: Reducer,
    depth: usize,
    universe: Option<String>,
}

fn letters(session: &Session, q: &QuantumModel, args: &LetterArgs) -> CResult<Letters> {
    let (names, depth, universe) = match (&args.alphabet, &args.universe) {
        (Some(text), _) => (arg("--alphabet", text, parse_name_list(text))?, session.depth(), None),
        (None, Some(u)) => {
            let um = q
                .universes
                .iter()
                .find(|x| &x.name == u)
                .ok_or_else(|| CliError::Usage(format!("no universe `{u}` in system `{}`", q.name)))?;
            (um.alphabet.clone(), session.global.depth.unwrap_or(um.depth), Some(u.clone()))
        }
        (None, None) => (q.projectors.iter().map(|(n, _)| n.clone()).collect(), session.depth(), None),
    };
    if names.is_empty() {
        return usage(format!("system `{}` has no projectors to use as letters", q.name));
    }
    let mut projectors = Vec::new();
    for n in &names {
        match q.projectors.iter().find(|(p, _)| p == n) {
            Some((_, p)) => projectors.push(p.clone()),
            None => return usage(format!("no projector `{n}` in system `{}`", q.name)),
        }
    }
    let alphabet = Alphabet::projectors(names, projectors)?;
    Ok(Letters {
        reducer: Reducer::new(alphabet, *q.system.tolerance()),
        depth,
        universe,
    })
}

fn universe_json(l: &Letters, strings: Option<usize>, rays: Option<usize>) -> Value {
    json!({
        "name": l.universe,
        "alphabet": l.reducer.alphabet().strings().alphabet(),
        "max_length": l.depth,
        "strings": strings,
        "rays": rays,
    })
}

/// `K = range Ê[A ∈ Δ]` for a declared operator.
fn target_subspace(q: &QuantumModel, target: &RangeArgs) -> CResult<(Subspace, Vec<f64>)> {
    let delta = arg("--range", &target.range, parse_value_set(&target.range))?;
    let a = q.system.operator(&target.op)?;
    let op = &q.system.observables()[a].operator;
    let tol = q.system.tolerance();
    let p = spectral_projector(op, &delta, tol.eps);
    Ok((p.range(tol), delta))
}

fn value_mask(values: &ValueSet, text: &str, eps: f64) -> CResult<ValueMask> {
    let delta = arg("--range", text, parse_value_set(text))?;
    Ok(values.mask_of(&delta, eps)?)
}

fn full_function_monoid(values: &ValueSet) -> CResult<FunctionMonoid> {
    FunctionMonoid::full(values.len()).map_err(|e| {
        CliError::Usage(format!("the full function monoid needs |X| ≤ 4, this system has {}: {e}", values.len()))
    })
}

fn point_index(m: &MSetModel, name: &str) -> CResult<usize> {
    m.point_names
        .iter()
        .position(|p| p == name)
        .or_else(|| name.parse::<usize>().ok().filter(|&i| i < m.mset.points()))
        .ok_or_else(|| CliError::Usage(format!("no point `{name}` in mset `{}`", m.name)))
}

fn point_subset(m: &MSetModel, flag: &str, text: &str) -> CResult<FixedBitSet> {
    let names = arg(flag, text, parse_point_set(text))?;
    let idx = names
        .iter()
        .map(|n| point_index(m, n))
        .collect::<CResult<Vec<_>>>()?;
    Ok(m.mset.subset(idx)?)
}

fn points_json(m: &MSetModel, bits: &FixedBitSet) -> Value {
    report::names_in(bits, &m.point_names)
}

fn required<'a>(flag: &str, v: &'a Option<String>) -> CResult<&'a str> {
    v.as_deref()
        .ok_or_else(|| CliError::Usage(format!("this command needs {flag}")))
}

fn command_echo(cmd: &Command) -> Value {
    match cmd {
        Command::Parse => json!({"name": "parse"}),
        Command::VerifyHeyting { monoid } => json!({"name": "verify-heyting", "monoid": monoid}),
        Command::EnumerateIdeals { monoid } => json!({"name": "enumerate-ideals", "monoid": monoid}),
        Command::Truth {
            mset,
            kind,
            point,
            other,
            subset,
            subset2,
        } => json!({
            "name": "truth", "mset": mset, "kind": format!("{kind:?}").to_lowercase(),
            "point": point, "other": other, "subset": subset, "subset2": subset2,
        }),
        Command::ValuateClassical { state, quantity, range } => json!({
            "name": "valuate-classical", "state": state, "quantity": quantity, "range": range,
        }),
        Command::ValuateQuantum { target } => json!({
            "name": "valuate-quantum", "state": target.state, "op": target.op, "range": target.range,
        }),
        Command::Valuate { target, mode, letters } => json!({
            "name": "valuate", "state": target.state, "op": target.op, "range": target.range,
            "mode": format!("{mode:?}").to_lowercase(),
            "alphabet": letters.alphabet, "universe": letters.universe,
        }),
        Command::Equal {
            mode,
            state,
            other,
            vectors,
            context,
            rays,
            xi,
            letters,
        } => json!({
            "name": "equal", "mode": format!("{mode:?}").to_lowercase(), "state": state, "other": other,
            "vectors": vectors, "context": context, "rays": rays, "xi": xi,
            "alphabet": letters.alphabet, "universe": letters.universe,
        }),
        Command::Polar { args } | Command::Closure { args } => json!({
            "name": if matches!(cmd, Command::Polar { .. }) { "polar" } else { "closure" },
            "rays": args.rays, "xi": args.xi, "strings": args.strings,
            "alphabet": args.letters.alphabet, "universe": args.letters.universe,
        }),
        Command::Sieve { context, target, letters } => json!({
            "name": "sieve", "context": context, "state": target.state, "op": target.op,
            "range": target.range, "alphabet": letters.alphabet, "universe": letters.universe,
        }),
        Command::Selftest => json!({"name": "selftest"}),
        Command::Query { name } => json!({"name": "query", "query": name}),
    }
}

/// Runs one parsed command line.
pub fn execute(cli: Cli) -> (Value, CResult<Outcome>) {
    let echo = command_echo(&cli.command);
    let outcome = execute_inner(cli, 0);
    (echo, outcome)
}

fn execute_inner(cli: Cli, nesting: usize) -> CResult<Outcome> {
    let start = Instant::now();
    let session = Session::open(cli.global.clone())?;
    if let Command::Query { name } = &cli.command {
        if nesting > 0 {
            return usage("queries cannot run other queries");
        }
        let text = session
            .model()?
            .query(name)
            .ok_or_else(|| CliError::Usage(format!("no query `{name}`")))?
            .to_owned();
        let words = shlex::split(&text)
            .ok_or_else(|| CliError::Usage(format!("query `{name}` has unbalanced quotes")))?;
        let mut inner = Cli::try_parse_from(std::iter::once("mtopos".to_string()).chain(words))
            .map_err(|e| CliError::Usage(format!("query `{name}`: {}", e.to_string().trim())))?;
        inner.global.inherit(&cli.global);
        let echo = command_echo(&inner.command);
        let mut out = execute_inner(inner, nesting + 1)?;
        out.report.command = json!({"name": "query", "query": name, "runs": echo});
        return Ok(out);
    }
    let (result, universe, exit) = dispatch(&session, &cli.command)?;
    let timing_ms = session
        .global
        .timing
        .then(|| start.elapsed().as_secs_f64() * 1e3);
    Ok(Outcome {
        report: Report {
            command: command_echo(&cli.command),
            config: session.config(),
            result,
            universe,
            timing_ms,
        },
        exit,
    })
}

type Dispatched = (Value, Option<Value>, i32);

fn dispatch(s: &Session, cmd: &Command) -> CResult<Dispatched> {
    match cmd {
        Command::Parse => Ok((parse_summary(s.model()?), None, 0)),
        Command::VerifyHeyting { monoid } => verify_heyting(s, monoid),
        Command::EnumerateIdeals { monoid } => enumerate_ideals(s, monoid),
        Command::Truth {
            mset,
            kind,
            point,
            other,
            subset,
            subset2,
        } => {
            let m = s
                .model()?
                .mset(mset)
                .ok_or_else(|| CliError::Usage(format!("no mset `{mset}`")))?;
            truth(m, *kind, point, other, subset, subset2).map(|v| (v, None, 0))
        }
        Command::ValuateClassical { state, quantity, range } => valuate_classical(s, state, quantity, range),
        Command::ValuateQuantum { target } => valuate_quantum(s, target),
        Command::Valuate { target, mode, letters } => valuate(s, target, *mode, letters),
        Command::Equal {
            mode,
            state,
            other,
            vectors,
            context,
            rays,
            xi,
            letters: la,
        } => {
            let q = s.quantum()?;
            let l = letters(s, q, la)?;
            let strings = l.reducer.alphabet().strings().clone();
            match mode {
                EqualMode::Sp => {
                    let (psi, phi) = (state_vector(q, state)?, state_vector(q, other)?);
                    let ideal = if *vectors {
                        l.reducer.truth_vector_equal(&psi, &phi, l.depth)?
                    } else {
                        l.reducer.truth_ray_equal(&psi, &phi, l.depth)?
                    };
                    let universe = universe_json(&l, None, None);
                    Ok((report::bounded_ideal(&ideal, &strings), Some(universe), 0))
                }
                EqualMode::Sieve => {
                    let ctx = context_string(&strings, required("--context", context)?)?;
                    let (psi, phi) = (state_vector(q, state)?, state_vector(q, other)?);
                    let sv = sieve_truth_equal(&l.reducer, &psi, &phi, &ctx)?;
                    Ok((json!({ "sieve": report::sieve(&sv, &strings) }), None, 0))
                }
                EqualMode::Context => {
                    let rays = rayset(q, required("--rays", rays)?)?;
                    let (gc, universe) = galois(&l, rays)?;
                    let names = gc.rays().names().to_vec();
                    let xi_bits = match xi {
                        Some(text) => gc.rays().select(&arg("--xi", text, parse_name_list(text))?)?,
                        None => {
                            let mut all = FixedBitSet::with_capacity(names.len());
                            all.insert_range(..);
                            all
                        }
                    };
                    let psi = gc.rays().index_of(state)?;
                    let phi = gc.rays().index_of(other)?;
                    let j = gc.truth_equal(psi, phi, &xi_bits)?;
                    Ok((
                        json!({
                            "xi": report::names_in(&xi_bits, &names),
                            "xi_is_full": gc.is_full(&xi_bits)?,
                            "strings": strings_json(&gc, &j),
                        }),
                        Some(universe),
                        0,
                    ))
                }
            }
        }
        Command::Polar { args } => polar_or_closure(s, args, false),
        Command::Closure { args } => polar_or_closure(s, args, true),
        Command::Sieve {
            context,
            target,
            letters: la,
        } => {
            let q = s.quantum()?;
            let l = letters(s, q, la)?;
            let strings = l.reducer.alphabet().strings().clone();
            let ctx = context_string(&strings, context)?;
            let (k, delta) = target_subspace(q, target)?;
            let psi = state_vector(q, &target.state)?;
            let sv = sieve_valuation(&l.reducer, &psi, &k, &ctx)?;
            Ok((
                json!({ "range": delta, "target_rank": k.rank(), "sieve": report::sieve(&sv, &strings) }),
                None,
                0,
            ))
        }
        Command::Selftest => {
            let r = selftest::run(s.global.seed());
            let exit = if r.passed { 0 } else { 1 };
            Ok((r.to_json(), None, exit))
        }
        Command::Query { .. } => usage("queries cannot run other queries"),
    }
}

fn context_string(strings: &mtopos_core::algebra::ProjStringMonoid, text: &str) -> CResult<ProjString> {
    let names = arg("--context", text, parse_name_list(text))?;
    Ok(strings.string(&names)?)
}

fn rayset(q: &QuantumModel, name: &str) -> CResult<RaySet> {
    q.rayset_names
        .iter()
        .position(|n| n == name)
        .map(|i| q.raysets[i].clone())
        .ok_or_else(|| CliError::Usage(format!("no rayset `{name}` in system `{}`", q.name)))
}

fn galois(l: &Letters, rays: RaySet) -> CResult<(GaloisContext, Value)> {
    let universe = StringUniverse::new(&l.reducer, l.depth)?;
    let meta = universe_json(l, Some(universe.len()), Some(rays.len()));
    Ok((GaloisContext::new(l.reducer.clone(), universe, rays)?, meta))
}

fn strings_json(gc: &GaloisContext, bits: &FixedBitSet) -> Value {
    let strings = gc.reducer().alphabet().strings();
    let members = gc.strings().members();
    json!(bits.ones().map(|i| strings.format(&members[i])).collect::<Vec<_>>())
}

fn polar_or_closure(s: &Session, args: &PolarArgs, closure: bool) -> CResult<Dispatched> {
    let q = s.quantum()?;
    let l = letters(s, q, &args.letters)?;
    let (gc, universe) = galois(&l, rayset(q, &args.rays)?)?;
    let names = gc.rays().names().to_vec();
    let result = match (&args.xi, &args.strings) {
        (Some(text), None) => {
            let xi = gc.rays().select(&arg("--xi", text, parse_name_list(text))?)?;
            let polar = gc.polar_of_rays(&xi)?;
            if closure {
                let c = gc.closure_rays(&xi)?;
                json!({
                    "xi": report::names_in(&xi, &names),
                    "closure": report::names_in(&c, &names),
                    "xi_is_full": c == xi,
                    "closure_is_full": gc.is_full(&c)?,
                })
            } else {
                json!({ "xi": report::names_in(&xi, &names), "polar": strings_json(&gc, &polar) })
            }
        }
        (None, Some(text)) => {
            let lists = arg("--strings", text, parse_string_list(text))?;
            let letters = l.reducer.alphabet().strings();
            let mut j = gc.empty_strings();
            for list in &lists {
                let qs = letters.string(list)?;
                match gc.strings().index_of(&qs) {
                    Some(i) => j.insert(i),
                    None => {
                        return usage(format!(
                            "string {} is not in the universe (it is annihilated or longer than {})",
                            letters.format(&qs),
                            l.depth
                        ))
                    }
                }
            }
            if closure {
                let c = gc.closure_strings(&j)?;
                json!({ "strings": strings_json(&gc, &j), "closure": strings_json(&gc, &c) })
            } else {
                let polar = gc.polar_of_strings(&j)?;
                json!({
                    "strings": strings_json(&gc, &j),
                    "polar": report::names_in(&polar, &names),
                    "polar_closure_is_full": gc.is_full(&gc.closure_rays(&polar)?)?,
                })
            }
        }
        _ => return usage("give exactly one of --xi and --strings"),
    };
    Ok((result, Some(universe), 0))
}

fn parse_summary(m: &Model) -> Value {
    json!({
        "tolerance": { "eps": m.tolerance.eps, "null_threshold": m.tolerance.null_threshold },
        "monoids": m.monoids.iter().map(|(n, fm)| json!({
            "name": n,
            "size": fm.size(),
            "identity": fm.label(fm.identity()),
            "elements": (0..fm.size()).map(|e| fm.label(e)).collect::<Vec<_>>(),
            "commutative": fm.is_commutative(),
        })).collect::<Vec<_>>(),
        "msets": m.msets.iter().map(|s| json!({
            "name": s.name, "monoid": s.monoid, "points": s.point_names,
        })).collect::<Vec<_>>(),
        "classical": m.classical.iter().map(|(n, c)| json!({
            "name": n,
            "states": c.states(),
            "values": c.values().values(),
            "quantities": c.quantity_names().collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "quantum": m.quantum.iter().map(|q| json!({
            "name": q.name,
            "dim": q.dim(),
            "values": q.system.values().values(),
            "values_inferred": q.values_inferred,
            "operators": q.system.observables().iter().map(|o| json!({
                "name": o.name,
                "spectrum": o.labels.iter().map(|&l| q.system.values().value(l)).collect::<Vec<_>>(),
                "multiplicities": o.operator.spectrum().iter().map(|c| c.projector.rank()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "projectors": q.projectors.iter().map(|(n, p)| json!({"name": n, "rank": p.rank()})).collect::<Vec<_>>(),
            "states": q.states.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
            "densities": q.densities.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
            "raysets": q.rayset_names.iter().zip(&q.raysets).map(|(n, r)| json!({"name": n, "rays": r.names()})).collect::<Vec<_>>(),
            "universes": q.universes.iter().map(|u| json!({"name": u.name, "alphabet": u.alphabet, "depth": u.depth})).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "queries": m.queries.iter().map(|(n, c)| json!({"name": n, "command": c})).collect::<Vec<_>>(),
    })
}

fn verify_heyting(s: &Session, name: &str) -> CResult<Dispatched> {
    let m = s.monoid(name)?;
    let ideals = enumerate_left_ideals(&m)?;
    let r = check_heyting_laws(&ideals)?;
    let laws: Vec<Value> = r
        .laws
        .iter()
        .map(|l| {
            json!({
                "law": l.law,
                "instances": l.instances,
                "holds": l.holds(),
                "counterexample": l.counterexample.as_ref().map(|c| c.iter().map(report::ideal).collect::<Vec<_>>()),
            })
        })
        .collect();
    let em: Vec<Value> = r
        .excluded_middle_failures
        .iter()
        .map(|p| -> CResult<Value> {
            let not_p = p.not();
            Ok(json!({
                "ideal": report::ideal(p),
                "negation": report::ideal(&not_p),
                "join": report::ideal(&p.join(&not_p)?),
            }))
        })
        .collect::<CResult<_>>()?;
    Ok((
        json!({
            "monoid": name,
            "size": m.size(),
            "elements": (0..m.size()).map(|e| m.label(e)).collect::<Vec<_>>(),
            "ideals": ideals.iter().map(report::ideal).collect::<Vec<_>>(),
            "laws": laws,
            "all_laws_hold": r.all_hold(),
            "excluded_middle": { "holds": em.is_empty(), "counterexamples": em },
        }),
        None,
        0,
    ))
}

fn enumerate_ideals(s: &Session, name: &str) -> CResult<Dispatched> {
    let m = s.monoid(name)?;
    let ideals = enumerate_left_ideals(&m)?;
    Ok((
        json!({
            "monoid": name,
            "size": m.size(),
            "count": ideals.len(),
            "ideals": ideals.iter().map(|i| json!({
                "members": report::ideal(i),
                "negation": report::ideal(&i.not()),
            })).collect::<Vec<_>>(),
        }),
        None,
        0,
    ))
}

fn truth(
    m: &MSetModel,
    kind: TruthKind,
    point: &Option<String>,
    other: &Option<String>,
    subset: &Option<String>,
    subset2: &Option<String>,
) -> CResult<Value> {
    let set = &m.mset;
    Ok(match kind {
        TruthKind::Arrow => {
            let j = point_subset(m, "--subset", required("--subset", subset)?)?;
            let chi = set.characteristic_arrow(&j)?;
            json!({
                "subset": points_json(m, &j),
                "arrow": chi.iter().enumerate().map(|(x, i)| json!({
                    "point": m.point_names[x], "ideal": report::ideal(i),
                })).collect::<Vec<_>>(),
            })
        }
        TruthKind::Member => {
            let x = point_index(m, required("--point", point)?)?;
            let k = point_subset(m, "--subset", required("--subset", subset)?)?;
            json!({
                "point": m.point_names[x],
                "subset": points_json(m, &k),
                "invariant": set.is_invariant(&k)?,
                "ideal": report::ideal(&set.truth_in_subset(x, &k)?),
            })
        }
        TruthKind::Leq => {
            let k1 = point_subset(m, "--subset", required("--subset", subset)?)?;
            let k2 = point_subset(m, "--subset2", required("--subset2", subset2)?)?;
            json!({
                "subset": points_json(m, &k1),
                "subset2": points_json(m, &k2),
                "ideal": report::ideal(&set.truth_subset_leq(&k1, &k2)?),
            })
        }
        TruthKind::Equal => {
            let x = point_index(m, required("--point", point)?)?;
            let y = point_index(m, required("--other", other)?)?;
            json!({
                "point": m.point_names[x],
                "other": m.point_names[y],
                "ideal": report::ideal(&set.truth_equal(x, y)?),
            })
        }
        TruthKind::InvariantSubsets => {
            let subsets = set.invariant_subsets()?;
            let mut rows = Vec::new();
            let mut bijective = true;
            for j in &subsets {
                let chi = set.characteristic_arrow(j)?;
                let round_trip = classified_subset(&chi) == *j && is_equivariant(set, &chi)?;
                bijective &= round_trip;
                rows.push(json!({
                    "subset": points_json(m, j),
                    "arrow": chi.iter().map(report::ideal).collect::<Vec<_>>(),
                    "round_trip": round_trip,
                }));
            }
            json!({ "count": subsets.len(), "subsets": rows, "all_round_trip": bijective })
        }
    })
}

fn valuate_classical(s: &Session, state: &str, quantity: &str, range: &str) -> CResult<Dispatched> {
    let model = s.model()?;
    let (name, sys) = match &s.global.system {
        Some(n) => (
            n.as_str(),
            model
                .classical(n)
                .ok_or_else(|| CliError::Usage(format!("no classical system `{n}`")))?,
        ),
        None => match model.classical.as_slice() {
            [(n, c)] => (n.as_str(), c),
            [] => return usage("the definition declares no classical system"),
            _ => return usage("several classical systems are declared; choose one with --system"),
        },
    };
    let st = sys.state(state)?;
    let a = sys.quantity(quantity)?;
    let mask = value_mask(sys.values(), range, model.tolerance.eps)?;
    let fm = full_function_monoid(sys.values())?;
    let direct = sys.generalized_valuation(&fm, st, a, mask)?;
    let props = sys.proposition_set(&fm)?;
    let arrow = props.e_s_valuation(st, a, mask)?;
    let values = sys.values();
    Ok((
        json!({
            "system": name,
            "value": values.value(sys.value_index(st, a)?),
            "range": values.values_of(mask),
            "true_in_state": sys.classical_truth(st, a, mask)?,
            "monoid_size": fm.size(),
            "valuation": report::map_ideal(&fm, values, &direct),
            "arrow_valuation": report::map_ideal(&fm, values, &arrow),
            "agree": direct == arrow,
            "is_top": direct.is_full(),
        }),
        None,
        0,
    ))
}

fn valuate_quantum(s: &Session, target: &RangeArgs) -> CResult<Dispatched> {
    let q = s.quantum()?;
    let sys = &q.system;
    let psi = state_vector(q, &target.state)?;
    let a = sys.operator(&target.op)?;
    let mask = value_mask(sys.values(), &target.range, sys.tolerance().eps)?;
    let fm = full_function_monoid(sys.values())?;
    let direct = sys.function_valuation(&fm, &psi, a, mask)?;
    let set = sys.observable_set(&fm)?;
    let arrow = set.e_psi_valuation(&psi, a, mask)?;
    Ok((
        json!({
            "system": q.name,
            "range": sys.values().values_of(mask),
            "eigenstate": sys.e_psi_membership(&psi, a, mask)?,
            "monoid_size": fm.size(),
            "orbit_points": set.len(),
            "valuation": report::map_ideal(&fm, sys.values(), &direct),
            "arrow_valuation": report::map_ideal(&fm, sys.values(), &arrow),
            "agree": direct == arrow,
            "is_top": direct.is_full(),
        }),
        None,
        0,
    ))
}

fn valuate(s: &Session, target: &RangeArgs, mode: ValuationMode, la: &LetterArgs) -> CResult<Dispatched> {
    let q = s.quantum()?;
    let l = letters(s, q, la)?;
    let (k, delta) = target_subspace(q, target)?;
    let ideal = match mode {
        ValuationMode::Vector => l
            .reducer
            .valuation_vector(&state_vector(q, &target.state)?, &k, l.depth)?,
        ValuationMode::Ray => l
            .reducer
            .valuation_ray(&state_vector(q, &target.state)?, &k, l.depth)?,
        ValuationMode::Density => {
            let rho = match q.densities.iter().find(|(n, _)| n == &target.state) {
                Some((_, d)) => d.clone(),
                None => DensityMatrix::pure(&state_vector(q, &target.state)?, q.system.tolerance())?,
            };
            l.reducer.valuation_density(&rho, &k, l.depth)?
        }
    };
    let strings = l.reducer.alphabet().strings();
    let mut result = report::bounded_ideal(&ideal, strings);
    result["range"] = json!(delta);
    result["target_rank"] = json!(k.rank());
    Ok((result, Some(universe_json(&l, None, None)), 0))
}
