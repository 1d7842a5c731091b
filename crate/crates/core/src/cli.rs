//! The `gpt-kit` command line.
//!
//! Exit status: 0 when the verdict is true (or the protocol accepts), 2 when
//! it is false (or rejects), 1 on any error. Reports are JSON unless a CSV
//! curve is requested, embed the full input models, and depend only on the
//! arguments and `--seed`.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::composites::{max_tensor, min_tensor, Side};
use crate::error::{Error, Result};
use crate::io;
use crate::models::{Family, ModelDescriptor};
use crate::protocols::{self, BroadcastSearch, BroadcastVerdict, SymmetryWitness, Verdict};
use crate::scalar::{Arithmetic, Rational, Scalar, DEFAULT_TOL};
use crate::space::{one_shot_distinguishing_observable, StateSpace};

#[derive(Parser, Debug)]
#[command(name = "gpt-kit", version, about = "Cones, composites and protocols for abstract state spaces")]
pub struct Cli {
    /// Exact rationals or floats; defaults to rational whenever every input model is rational.
    #[arg(long, global = true, value_enum)]
    pub arithmetic: Option<ArithmeticArg>,
    /// Absolute tolerance for float comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ArithmeticArg {
    Rational,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Minimal or maximal tensor product of two models.
    Tensor(TensorArgs),
    /// Marginal of a bipartite state.
    Marginal(MarginalArgs),
    /// Conditional state of B given an effect on A.
    Conditional(ConditionalArgs),
    /// Verify or construct a teleportation protocol
    #[command(subcommand)]
    Teleport(TeleportCommand),
    /// Test whether a set of states can be cloned
    #[command(subcommand)]
    Clone(CloneCommand),
    /// Search for a broadcasting simplex
    #[command(subcommand)]
    Broadcast(BroadcastCommand),
    /// Basis of the maps that fix every pure state
    #[command(subcommand)]
    Disturb(DisturbCommand),
    /// Bit commitment: decomposition, honest runs, cheating bound
    #[command(subcommand)]
    Bitcommit(BitcommitCommand),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("product").required(true).args(["min", "max"])))]
pub struct TensorArgs {
    #[arg(long)]
    pub min: bool,
    #[arg(long)]
    pub max: bool,
    /// Model such as `squit`, `classical:3`, `polygon:5`, `ball:3`, or `@space.json`.
    pub a: String,
    pub b: String,
    /// Exit 0 when the maximal and minimal products coincide, 2 otherwise.
    #[arg(long)]
    pub check_equals_min: bool,
}

#[derive(Args, Debug)]
pub struct MarginalArgs {
    /// Bipartite state JSON `{"A", "B", "coords"}`, inline or `@file`.
    #[arg(long)]
    pub state: String,
    #[arg(long, value_enum, default_value = "a")]
    pub keep: SideArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    A,
    B,
}

#[derive(Args, Debug)]
pub struct ConditionalArgs {
    #[arg(long)]
    pub state: String,
    /// Effect on A as a JSON array.
    #[arg(long)]
    pub effect: String,
}

#[derive(Subcommand, Debug)]
pub enum TeleportCommand {
    /// Check one outcome `f` with shared state `ω` for conclusive teleportation.
    Verify {
        #[arg(long)]
        model: String,
        /// Intermediate system; defaults to the model itself.
        #[arg(long)]
        through: Option<String>,
        /// Coefficient matrix of `f` on A⊗B (dim A rows).
        #[arg(long)]
        effect: String,
        /// Coefficient matrix of `ω` on B⊗A (dim B rows).
        #[arg(long)]
        state: String,
    },
    /// Build a deterministic protocol from the model's symmetry group.
    Construct {
        #[arg(long)]
        model: String,
        /// `zN` (rotations or cyclic shifts of order N) or `cyclic`.
        #[arg(long)]
        group: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CloneCommand {
    Check(StatesArgs),
}

#[derive(Subcommand, Debug)]
pub enum BroadcastCommand {
    Check {
        #[command(flatten)]
        states: StatesArgs,
        #[arg(long, default_value_t = BroadcastSearch::default().max_subsets)]
        max_subsets: usize,
    },
}

#[derive(Args, Debug)]
pub struct StatesArgs {
    #[arg(long)]
    pub model: String,
    /// JSON array of normalized states.
    #[arg(long)]
    pub states: String,
}

#[derive(Subcommand, Debug)]
pub enum DisturbCommand {
    /// Projectors spanning the nondisturbing maps.
    Basis {
        #[arg(long)]
        model: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum BitcommitCommand {
    Decompose {
        #[arg(long)]
        model: String,
    },
    /// Honest commit and reveal.
    Run {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 0)]
        bit: u8,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Product-cheat bound per round, with a simulated decay curve for 1..=n rounds.
    Bound {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
}

/// A finished command: the report text and whether the verdict was positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub report: String,
    pub success: bool,
}

/// Parse `args` (including the program name), run, and return the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &outcome.report).map_err(Error::from),
                None => {
                    print!("{}", outcome.report);
                    Ok(())
                }
            };
            match written {
                Ok(()) if outcome.success => 0,
                Ok(()) => 2,
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Execute a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome> {
    if cli.tol.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Invalid("--tol must be positive".into()));
    }
    let arithmetic = match cli.arithmetic {
        Some(ArithmeticArg::Rational) => Arithmetic::Rational,
        Some(ArithmeticArg::Float) => Arithmetic::Float,
        None => natural_arithmetic(cli)?,
    };
    match arithmetic {
        Arithmetic::Rational => execute::<Rational>(cli),
        Arithmetic::Float => execute::<f64>(cli),
    }
}

fn natural_arithmetic(cli: &Cli) -> Result<Arithmetic> {
    let mut models: Vec<&str> = Vec::new();
    let mut documents: Vec<&str> = Vec::new();
    match &cli.command {
        Command::Tensor(t) => models.extend([t.a.as_str(), t.b.as_str()]),
        Command::Marginal(m) => documents.push(&m.state),
        Command::Conditional(c) => documents.push(&c.state),
        Command::Teleport(TeleportCommand::Verify { model, through, .. }) => {
            models.push(model);
            models.extend(through.as_deref());
        }
        Command::Teleport(TeleportCommand::Construct { model, .. }) => models.push(model),
        Command::Clone(CloneCommand::Check(s)) | Command::Broadcast(BroadcastCommand::Check { states: s, .. }) => {
            models.push(&s.model)
        }
        Command::Disturb(DisturbCommand::Basis { model }) => models.push(model),
        Command::Bitcommit(
            BitcommitCommand::Decompose { model } | BitcommitCommand::Run { model, .. } | BitcommitCommand::Bound { model, .. },
        ) => models.push(model),
    }
    let mut arithmetic = Arithmetic::Rational;
    for m in models {
        let a = match m.strip_prefix('@') {
            Some(path) => io::declared_arithmetic(&read_json(path)?)?,
            None => m.parse::<ModelDescriptor>()?.natural_arithmetic(),
        };
        if a == Arithmetic::Float {
            arithmetic = Arithmetic::Float;
        }
    }
    for d in documents {
        let v = json_arg(d)?;
        for side in ["A", "B"] {
            if let Some(space) = v.get(side) {
                if io::declared_arithmetic(space)? == Arithmetic::Float {
                    arithmetic = Arithmetic::Float;
                }
            }
        }
    }
    Ok(arithmetic)
}

fn read_json(path: &str) -> Result<Value> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Inline JSON, or `@path` to read it from a file.
fn json_arg(arg: &str) -> Result<Value> {
    match arg.strip_prefix('@') {
        Some(path) => read_json(path),
        None => Ok(serde_json::from_str(arg)?),
    }
}

fn load_space<S: Scalar>(model: &str, tol: f64) -> Result<StateSpace<S>> {
    match model.strip_prefix('@') {
        Some(path) => io::space_from_json(&read_json(path)?, tol),
        None => Ok(model.parse::<ModelDescriptor>()?.build::<S>()?.with_tol(tol)),
    }
}

fn model_json<S: Scalar>(name: &str, space: &StateSpace<S>) -> Value {
    json!({ "name": name, "space": io::space_to_json(space) })
}

fn json_outcome(report: Value, success: bool) -> Result<Outcome> {
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    Ok(Outcome { report: text, success })
}

fn require_json(cli: &Cli) -> Result<()> {
    match cli.format {
        Some(Format::Csv) => Err(Error::Unsupported("this command only writes JSON".into())),
        _ => Ok(()),
    }
}

fn execute<S: Scalar>(cli: &Cli) -> Result<Outcome> {
    let tol = cli.tol;
    if !matches!(cli.command, Command::Bitcommit(BitcommitCommand::Bound { .. })) {
        require_json(cli)?;
    }
    let arithmetic = serde_json::to_value(S::ARITHMETIC)?;
    match &cli.command {
        Command::Tensor(t) => {
            let a = load_space::<S>(&t.a, tol)?;
            let b = load_space::<S>(&t.b, tol)?;
            let min = min_tensor(&a, &b)?;
            let product = if t.max { max_tensor(&a, &b)? } else { min.clone() };
            let mut report = json!({
                "command": "tensor",
                "arithmetic": arithmetic,
                "kind": if t.max { "max" } else { "min" },
                "A": model_json(&t.a, &a),
                "B": model_json(&t.b, &b),
                "product": io::space_to_json(product.space()),
            });
            let mut success = true;
            if t.check_equals_min {
                let equal = product.space().cone().same_members(min.space().cone())?;
                report["equals_min"] = json!(equal);
                success = equal;
            }
            json_outcome(report, success)
        }
        Command::Marginal(m) => {
            let (a, b, state) = io::bipartite_state_from_json::<S>(&json_arg(&m.state)?, tol)?;
            let keep = match m.keep {
                SideArg::A => Side::A,
                SideArg::B => Side::B,
            };
            let marginal = state.marginal(&a, &b, keep)?;
            let report = json!({
                "command": "marginal",
                "arithmetic": arithmetic,
                "state": io::bipartite_state_to_json(&a, &b, &state),
                "keep": if keep == Side::A { "A" } else { "B" },
                "marginal": io::vec_to_json(&marginal),
            });
            json_outcome(report, true)
        }
        Command::Conditional(c) => {
            let (a, b, state) = io::bipartite_state_from_json::<S>(&json_arg(&c.state)?, tol)?;
            let effect: Vec<S> = io::vec_from_json(&json_arg(&c.effect)?)?;
            if !a.is_effect(&effect)? {
                return Err(Error::Invalid("--effect is not an effect on A".into()));
            }
            let unnormalized = state.partial_evaluate(&effect);
            let probability = b.evaluate_unit(&unnormalized);
            let conditional = state.conditional(&a, &b, &effect)?;
            let report = json!({
                "command": "conditional",
                "arithmetic": arithmetic,
                "state": io::bipartite_state_to_json(&a, &b, &state),
                "effect": io::vec_to_json(&effect),
                "probability": probability.to_json(),
                "conditional": io::vec_to_json(&conditional),
            });
            json_outcome(report, true)
        }
        Command::Teleport(TeleportCommand::Verify { model, through, effect, state }) => {
            let a = load_space::<S>(model, tol)?;
            let through_name = through.clone().unwrap_or_else(|| model.clone());
            let b = load_space::<S>(&through_name, tol)?;
            let f = io::bipartite_effect_from_json::<S>(&json_arg(effect)?)?;
            let omega_value = json_arg(state)?;
            let omega = crate::composites::BipartiteState::new(io::matrix_from_json(
                omega_value.get("coords").unwrap_or(&omega_value),
            )?);
            let cert = protocols::verify_teleportation(&a, &b, &f, &omega)?;
            let correction_free = cert.verdict
                && cert
                    .correction
                    .as_ref()
                    .is_some_and(|t| t.matrix().approx_eq(&crate::linalg::Matrix::identity(a.dim()), tol));
            let report = json!({
                "command": "teleport verify",
                "arithmetic": arithmetic,
                "A": model_json(model, &a),
                "B": model_json(&through_name, &b),
                "effect": io::matrix_to_json(f.coords()),
                "state": io::matrix_to_json(omega.coords()),
                "certificate": io::certificate_to_json(&cert),
                "correction_free": correction_free,
                "allowed_maps": "positive norm-contractive maps",
            });
            json_outcome(report, cert.verdict)
        }
        Command::Teleport(TeleportCommand::Construct { model, group }) => {
            let space = load_space::<S>(model, tol)?;
            let witness = symmetry_witness::<S>(model, group.as_deref())?;
            let built = protocols::construct_deterministic_teleportation(&space, &witness)?;
            let report = json!({
                "command": "teleport construct",
                "arithmetic": arithmetic,
                "model": model_json(model, &space),
                "group": built.group.iter().map(io::map_to_json).collect::<Vec<_>>(),
                "omega": io::matrix_to_json(built.omega.coords()),
                "observable": built.observable.iter().map(|f| io::matrix_to_json(f.coords())).collect::<Vec<_>>(),
                "certificates": built.certificates.iter().map(io::certificate_to_json).collect::<Vec<_>>(),
                "allowed_maps": "positive norm-contractive maps",
            });
            json_outcome(report, true)
        }
        Command::Clone(CloneCommand::Check(args)) => {
            let space = load_space::<S>(&args.model, tol)?;
            let states: Vec<Vec<S>> = io::rows_from_json(&json_arg(&args.states)?)?;
            let observable = one_shot_distinguishing_observable(&space, &states)?;
            let mut report = json!({
                "command": "clone check",
                "arithmetic": arithmetic,
                "model": model_json(&args.model, &space),
                "states": io::rows_to_json(&states),
                "clonable": observable.is_some(),
            });
            if let Some(obs) = &observable {
                let cloner = protocols::build_cloner(&space, &states, obs)?;
                report["observable"] = io::observable_to_json(obs);
                report["cloner"] = io::map_to_json(&cloner);
            }
            json_outcome(report, observable.is_some())
        }
        Command::Broadcast(BroadcastCommand::Check { states: args, max_subsets }) => {
            let space = load_space::<S>(&args.model, tol)?;
            let states: Vec<Vec<S>> = io::rows_from_json(&json_arg(&args.states)?)?;
            let search = BroadcastSearch { max_size: None, max_subsets: *max_subsets };
            let verdict = protocols::is_broadcastable(&space, &states, search)?;
            let mut report = json!({
                "command": "broadcast check",
                "arithmetic": arithmetic,
                "model": model_json(&args.model, &space),
                "states": io::rows_to_json(&states),
                "broadcastable": verdict.is_broadcastable(),
            });
            match &verdict {
                BroadcastVerdict::Broadcastable { simplex, observable, broadcaster } => {
                    report["simplex"] = io::rows_to_json(simplex);
                    report["observable"] = io::observable_to_json(observable);
                    report["broadcaster"] = io::map_to_json(broadcaster);
                }
                BroadcastVerdict::NotBroadcastable => {}
                BroadcastVerdict::Inconclusive { examined } => {
                    return Err(Error::SearchCap(format!(
                        "broadcast search stopped after {examined} candidate simplices; raise --max-subsets"
                    )));
                }
            }
            json_outcome(report, verdict.is_broadcastable() == Some(true))
        }
        Command::Disturb(DisturbCommand::Basis { model }) => {
            let space = load_space::<S>(model, tol)?;
            let basis = protocols::nondisturbing_basis(&space)?;
            let report = json!({
                "command": "disturb basis",
                "arithmetic": arithmetic,
                "model": model_json(model, &space),
                "summands": basis.len(),
                "basis": basis.iter().map(io::map_to_json).collect::<Vec<_>>(),
            });
            json_outcome(report, true)
        }
        Command::Bitcommit(BitcommitCommand::Decompose { model }) => {
            let space = load_space::<S>(model, tol)?;
            let dd = protocols::find_double_decomposition(&space)?;
            let report = json!({
                "command": "bitcommit decompose",
                "arithmetic": arithmetic,
                "model": model_json(model, &space),
                "decomposition": io::decomposition_to_json(&dd),
            });
            json_outcome(report, true)
        }
        Command::Bitcommit(BitcommitCommand::Run { model, bit, n }) => {
            let space = load_space::<S>(model, tol)?;
            let dd = protocols::find_double_decomposition(&space)?;
            let t = protocols::bc_run(&dd, *bit, *n, cli.seed)?;
            let report = json!({
                "command": "bitcommit run",
                "arithmetic": arithmetic,
                "model": model_json(model, &space),
                "decomposition": io::decomposition_to_json(&dd),
                "transcript": io::transcript_to_json(&t),
            });
            json_outcome(report, t.verdict == Verdict::Accept)
        }
        Command::Bitcommit(BitcommitCommand::Bound { model, n, trials }) => {
            if *n < 1 {
                return Err(Error::Invalid("--n must be at least 1".into()));
            }
            let space = load_space::<S>(model, tol)?;
            let dd = protocols::find_double_decomposition(&space)?;
            let bound = protocols::bc_cheat_bound(&space, &dd, *n)?;
            let rows = protocols::decay_curve(&space, &dd, *n, *trials, cli.seed)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => Ok(Outcome { report: io::decay_csv(&rows), success: true }),
                Format::Json => {
                    let report = json!({
                        "command": "bitcommit bound",
                        "arithmetic": arithmetic,
                        "model": model_json(model, &space),
                        "decomposition": io::decomposition_to_json(&dd),
                        "bound": io::cheat_bound_to_json(&bound),
                        "seed": cli.seed,
                        "trials": trials,
                        "curve": rows.iter().map(|r| json!({
                            "n": r.n,
                            "analytic_bound": r.analytic_bound,
                            "empirical_rate": r.empirical_rate,
                            "stderr": r.stderr,
                        })).collect::<Vec<_>>(),
                    });
                    json_outcome(report, true)
                }
            }
        }
    }
}

/// Group data for the deterministic teleportation constructor.
fn symmetry_witness<S: Scalar>(model: &str, group: Option<&str>) -> Result<SymmetryWitness<S>> {
    if model.starts_with('@') {
        return Err(Error::Unsupported("teleport construct needs a named polygon or classical model".into()));
    }
    let d: ModelDescriptor = model.parse()?;
    let n = d.parameter;
    if let Some(g) = group {
        let g = g.trim().to_ascii_lowercase();
        let ok = match g.strip_prefix('z') {
            Some(order) => order.parse::<usize>().ok() == Some(n),
            None => g == "cyclic",
        };
        if !ok {
            return Err(Error::Invalid(format!("group '{g}' does not act transitively on {d}; use z{n}")));
        }
    }
    match d.family {
        Family::Polygon => SymmetryWitness::polygon(n),
        Family::Classical => SymmetryWitness::classical(n),
        Family::Ball => Err(Error::Unsupported("balls have no finite transitive symmetry group".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Outcome> {
        let cli = Cli::try_parse_from(std::iter::once("gpt-kit").chain(args.iter().copied()))
            .map_err(|e| Error::Parse(e.to_string()))?;
        run(&cli)
    }

    #[test]
    fn classical_products_coincide() {
        let o = run_args(&["tensor", "--max", "classical:2", "classical:2", "--check-equals-min"]).unwrap();
        assert!(o.success);
        let o = run_args(&["tensor", "--max", "squit", "squit", "--check-equals-min"]).unwrap();
        assert!(!o.success);
    }

    #[test]
    fn teleport_construct_square() {
        let o = run_args(&["teleport", "construct", "--model", "squit", "--group", "z4"]).unwrap();
        let v: Value = serde_json::from_str(&o.report).unwrap();
        assert_eq!(v["certificates"].as_array().unwrap().len(), 4);
        assert!(run_args(&["teleport", "construct", "--model", "squit", "--group", "z3"]).is_err());
    }

    #[test]
    fn bound_csv() {
        let o = run_args(&["bitcommit", "bound", "--model", "squit", "--n", "3", "--trials", "100"]).unwrap();
        let mut lines = o.report.lines();
        assert_eq!(lines.next(), Some("n,analytic_bound,empirical_rate,stderr"));
        assert!(lines.nth(2).unwrap().starts_with("3,0.421875,"));
    }

    #[test]
    fn arithmetic_follows_models() {
        let o = run_args(&["disturb", "basis", "--model", "polygon:5"]).unwrap();
        assert!(o.report.contains("\"arithmetic\": \"float\""));
        let o = run_args(&["clone", "check", "--model", "squit", "--states", "[[1,1,1],[-1,1,1],[-1,-1,1]]"]).unwrap();
        assert!(!o.success);
        assert!(o.report.contains("\"arithmetic\": \"rational\""));
    }
}
