//! The `cdsclear` command-line front end.
//!
//! Every command writes its report to the given writer; [`run`] returns the process exit
//! code on success and the error otherwise, and [`exit_code`] maps errors to codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | invalid input (parse, I/O or validation error) |
//! | 2 | precondition of the requested solver or construction not met |
//! | 3 | the fixed-point iteration did not reach its tolerance |

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    build_auxiliary_graph, check_dedicated_cds_debtor, export_dot,
    find_simple_strongly_switched_cycle, find_strongly_switched_cycle, find_weakly_switched_cycle,
    is_acyclic, scc_condensation, switch_classes, SimpleSearch, DEFAULT_CYCLE_CAP,
};
use crate::circuits::normalize_pipeline;
use crate::compiler::compile_circuit;
use crate::error::{Error, Result};
use crate::fragments::{
    assign_arithmetic, emit_financial_system, rewrite_to_canonical, solve_cycle_closed_form,
    FragmentString,
};
use crate::io::{
    instance_to_json, read_circuit, read_instance, read_vector, write_instance, write_json,
};
use crate::model::{
    check_nondegenerate, clearing_residual, is_clearing, is_weak_eps, FinancialSystem, Mode,
    Number, RecoveryVector,
};
use crate::numeric::parse_rational;
use crate::solvers::{
    solve_with_choice, IterationSettings, SolveReport, SolverChoice, SolverKind, SolverOptions,
};

/// Environment variable capping the number of branches the enumeration solvers may visit.
pub const MAX_BRANCHES_ENV: &str = "CDSCLEAR_MAX_BRANCHES";

/// Default branch cap (2^20).
pub const DEFAULT_MAX_BRANCHES: u64 = 1 << 20;

/// Digits printed after the decimal point for closed-form rates.
const CLOSED_FORM_DIGITS: usize = 30;

/// Clearing engine and structural analyzer for financial networks with CDSes.
#[derive(Debug, Parser)]
#[command(name = "cdsclear", version, about, long_about = None)]
pub struct Cli {
    /// Command to run.
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute clearing recovery rates of an instance.
    Solve(SolveArgs),
    /// Report non-degeneracy, acyclicity, switch classes, switched cycles and SCCs.
    Analyze {
        /// Instance JSON file.
        instance: PathBuf,
    },
    /// Check a recovery vector against an instance.
    Verify {
        /// Instance JSON file.
        instance: PathBuf,
        /// Recovery-vector JSON file (bank id → rate).
        vector: PathBuf,
        /// Tolerance of the weak ε-approximation test.
        #[arg(long, default_value = "1e-9")]
        eps: String,
    },
    /// Print the auxiliary graph in Graphviz DOT format.
    ExportDot {
        /// Instance JSON file.
        instance: PathBuf,
    },
    /// Normalize a circuit and compile it into an instance plus a port map.
    Compile {
        /// Circuit JSON file.
        circuit: PathBuf,
        /// Output instance file (default: `<circuit stem>.instance.json` next to the circuit).
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Output port-map file (default: `<circuit stem>.portmap.json`).
        #[arg(long)]
        portmap: Option<PathBuf>,
        /// Compile the circuit as given, skipping normalization.
        #[arg(long)]
        no_normalize: bool,
    },
    /// Build a fragment cycle such as `g1a.g2b.d1.d2`.
    Fragment(FragmentArgs),
}

/// Solver selection on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    /// Acyclic, then SCC procedure, then branch enumeration, then iteration.
    Auto,
    /// Topological propagation (requires an acyclic auxiliary graph).
    Acyclic,
    /// Branch enumeration (requires dedicated CDS debtors and non-degeneracy).
    Dedicated,
    /// SCC-by-SCC procedure (requires no weakly switched cycle).
    Scc,
    /// Damped fixed-point iteration.
    Iterate,
}

impl From<SolverArg> for SolverChoice {
    fn from(a: SolverArg) -> Self {
        match a {
            SolverArg::Auto => SolverChoice::Auto,
            SolverArg::Acyclic => SolverChoice::Acyclic,
            SolverArg::Dedicated => SolverChoice::Dedicated,
            SolverArg::Scc => SolverChoice::Scc,
            SolverArg::Iterate => SolverChoice::Iterate,
        }
    }
}

/// Output number mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    /// Exact values where the solver provides them.
    Rational,
    /// Floating-point values.
    Float,
}

/// Arguments of `solve`.
#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance JSON file.
    pub instance: PathBuf,
    /// Solver to use.
    #[arg(long, value_enum, default_value = "auto")]
    pub solver: SolverArg,
    /// Iteration tolerance on the sup-norm step.
    #[arg(long, default_value_t = 1e-9)]
    pub eps: f64,
    /// Iteration cap.
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
    /// Number mode of the printed rates.
    #[arg(long, value_enum, default_value = "rational")]
    pub mode: OutputMode,
}

/// Arguments of `fragment`.
#[derive(Debug, Args)]
pub struct FragmentArgs {
    /// Fragments separated by `.`, e.g. `g1a.g2b.d1.d2`; the string is closed into a cycle.
    pub fragments: String,
    /// Print the canonical rewriting (copies of g1a).
    #[arg(long)]
    pub rewrite: bool,
    /// Print the closed-form clearing rate of the start node.
    #[arg(long)]
    pub solve: bool,
    /// Write the concrete instance as JSON (`-` for standard output).
    #[arg(long, value_name = "PATH")]
    pub emit: Option<PathBuf>,
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_precondition() {
        2
    } else {
        1
    }
}

/// Solver options with the branch cap taken from [`MAX_BRANCHES_ENV`].
pub fn solver_options_from_env() -> Result<SolverOptions> {
    let branches = match std::env::var(MAX_BRANCHES_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&b| b >= 1)
            .ok_or_else(|| {
                Error::InvalidParam(format!(
                    "{MAX_BRANCHES_ENV} must be a positive integer, got `{v}`"
                ))
            })?,
        Err(_) => DEFAULT_MAX_BRANCHES,
    };
    // 2^k branches for k min-expressions.
    let max_min_expressions = (63 - branches.leading_zeros()) as usize;
    Ok(SolverOptions {
        max_min_expressions,
        ..SolverOptions::default()
    })
}

/// Runs a parsed command line, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Solve(args) => cmd_solve(args, out),
        Command::Analyze { instance } => cmd_analyze(&read_instance(instance)?, out).map(|_| 0),
        Command::Verify {
            instance,
            vector,
            eps,
        } => {
            let sys = read_instance(instance)?;
            let r = read_vector(vector, &sys)?;
            cmd_verify(&sys, &r, eps, out).map(|_| 0)
        }
        Command::ExportDot { instance } => {
            write!(out, "{}", export_dot(&read_instance(instance)?))?;
            Ok(0)
        }
        Command::Compile {
            circuit,
            instance,
            portmap,
            no_normalize,
        } => cmd_compile(
            circuit,
            instance.as_deref(),
            portmap.as_deref(),
            *no_normalize,
            out,
        )
        .map(|_| 0),
        Command::Fragment(args) => cmd_fragment(args, out).map(|_| 0),
    }
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let sys = read_instance(&args.instance)?;
    let opts = solver_options_from_env()?;
    let iter = IterationSettings {
        eps: args.eps,
        max_iter: args.max_iter,
    };
    let (report, notes) = solve_with_choice(&sys, args.solver.into(), &opts, iter)?;
    for note in notes {
        writeln!(out, "note: {note}")?;
    }
    print_report(&sys, &report, args.mode, out)?;
    Ok(if report.converged { 0 } else { 3 })
}

fn print_report(
    sys: &FinancialSystem,
    report: &SolveReport,
    mode: OutputMode,
    out: &mut dyn Write,
) -> Result<()> {
    writeln!(out, "solver: {}", report.solver)?;
    if report.solutions.len() != 1 {
        writeln!(out, "solutions: {}", report.solutions.len())?;
    }
    for (k, r) in report.solutions.iter().enumerate() {
        let shown = match mode {
            OutputMode::Float => RecoveryVector::float(r.to_f64s())?,
            OutputMode::Rational => r.clone(),
        };
        writeln!(out, "solution {}: {shown}", k + 1)?;
        for i in 0..sys.len() {
            writeln!(out, "  {} = {}", sys.id(i), shown.get(i))?;
        }
        let residual = match (r.mode(), mode) {
            (Mode::Float, _) | (_, OutputMode::Float) => {
                Number::Float(clearing_residual(sys, r)?.to_f64())
            }
            _ => clearing_residual(sys, r)?,
        };
        writeln!(out, "  residual: {residual}")?;
    }
    if report.solver == SolverKind::Iterate {
        writeln!(out, "iterations: {}", report.iterations)?;
        writeln!(out, "converged: {}", yes_no(report.converged))?;
    }
    for w in &report.warnings {
        writeln!(out, "warning: {w}")?;
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_analyze(sys: &FinancialSystem, out: &mut dyn Write) -> Result<()> {
    let aux = build_auxiliary_graph(sys);
    writeln!(out, "banks: {}", sys.len())?;
    writeln!(out, "contracts: {}", sys.contracts().len())?;
    let nd = check_nondegenerate(sys);
    writeln!(out, "non-degenerate: {}", yes_no(nd.ok))?;
    for (id, cond) in &nd.violations {
        writeln!(out, "  {id}: {cond}")?;
    }
    let ded = check_dedicated_cds_debtor(sys);
    writeln!(out, "dedicated CDS debtors: {}", yes_no(ded.ok))?;
    for (id, why) in &ded.violations {
        writeln!(out, "  {id}: {why}")?;
    }
    writeln!(out, "acyclic: {}", yes_no(is_acyclic(&aux)))?;
    writeln!(out, "switch classes:")?;
    for (i, class) in switch_classes(&aux).iter().enumerate() {
        writeln!(out, "  {} {class}", sys.id(i))?;
    }
    match find_strongly_switched_cycle(&aux) {
        Some(c) => writeln!(out, "strongly switched cycle: {}", c.display(&aux))?,
        None => writeln!(out, "strongly switched cycle: none")?,
    }
    match find_weakly_switched_cycle(&aux) {
        Some(c) => writeln!(out, "weakly switched cycle: {}", c.display(&aux))?,
        None => writeln!(out, "weakly switched cycle: none")?,
    }
    match find_simple_strongly_switched_cycle(&aux, DEFAULT_CYCLE_CAP) {
        SimpleSearch::Found(c) => {
            writeln!(out, "simple strongly switched cycle: {}", c.display(&aux))?
        }
        SimpleSearch::NotFound => writeln!(out, "simple strongly switched cycle: none")?,
        SimpleSearch::Inconclusive { examined } => writeln!(
            out,
            "simple strongly switched cycle: unknown ({examined} cycles examined)"
        )?,
    }
    let cond = scc_condensation(&aux);
    let nontrivial: Vec<&Vec<usize>> = cond.nontrivial().collect();
    writeln!(
        out,
        "strongly connected components: {} ({} non-trivial)",
        cond.components.len(),
        nontrivial.len()
    )?;
    for comp in nontrivial {
        let ids: Vec<&str> = comp.iter().map(|&i| sys.id(i)).collect();
        writeln!(out, "  {{{}}}", ids.join(", "))?;
    }
    Ok(())
}

fn cmd_verify(
    sys: &FinancialSystem,
    r: &RecoveryVector,
    eps: &str,
    out: &mut dyn Write,
) -> Result<()> {
    let residual = clearing_residual(sys, r)?;
    writeln!(out, "residual: {residual}")?;
    match r.mode() {
        Mode::Float => writeln!(out, "clearing: not decidable for floating-point vectors")?,
        _ => writeln!(out, "clearing: {}", yes_no(is_clearing(sys, r)?))?,
    }
    let eps_value = match r.mode() {
        Mode::Float => Number::Float(
            eps.parse()
                .map_err(|_| Error::Parse(format!("invalid tolerance `{eps}`")))?,
        ),
        _ => Number::Rational(parse_rational(eps)?),
    };
    writeln!(
        out,
        "weak {eps}-approximate: {}",
        yes_no(is_weak_eps(sys, r, &eps_value)?)
    )?;
    Ok(())
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("circuit");
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn cmd_compile(
    circuit: &Path,
    instance: Option<&Path>,
    portmap: Option<&Path>,
    no_normalize: bool,
    out: &mut dyn Write,
) -> Result<()> {
    let c = read_circuit(circuit)?;
    let normalized = if no_normalize {
        c.clone()
    } else {
        normalize_pipeline(&c)?
    };
    let (sys, map) = compile_circuit(&normalized)?;
    let instance_path = instance
        .map(Path::to_path_buf)
        .unwrap_or_else(|| sibling(circuit, "instance.json"));
    let portmap_path = portmap
        .map(Path::to_path_buf)
        .unwrap_or_else(|| sibling(circuit, "portmap.json"));
    write_instance(&instance_path, &sys)?;
    write_json(&portmap_path, &map)?;
    writeln!(out, "gates: {} (normalized: {})", c.len(), normalized.len())?;
    writeln!(out, "banks: {}", sys.len())?;
    writeln!(out, "contracts: {}", sys.contracts().len())?;
    writeln!(out, "input banks: {}", map.inputs.join(", "))?;
    writeln!(out, "output banks: {}", map.outputs.join(", "))?;
    writeln!(out, "instance: {}", instance_path.display())?;
    writeln!(out, "portmap: {}", portmap_path.display())?;
    Ok(())
}

fn cmd_fragment(args: &FragmentArgs, out: &mut dyn Write) -> Result<()> {
    let cycle = FragmentString::parse(&args.fragments)?.close_cycle()?;
    let arithmetic = assign_arithmetic(&cycle)?;
    let quiet = args.emit.as_deref() == Some(Path::new("-"));
    if !(args.rewrite || args.solve || args.emit.is_some()) {
        writeln!(out, "cycle: {}", cycle.symbolic())?;
        writeln!(out, "coefficients: {}", arithmetic.symbolic())?;
    }
    if args.rewrite {
        writeln!(out, "{}", rewrite_to_canonical(&arithmetic)?.base_names())?;
    }
    if args.solve {
        let r = solve_cycle_closed_form(&arithmetic)?;
        writeln!(out, "{r} ≈ {}", r.decimal_expansion(CLOSED_FORM_DIGITS))?;
    }
    if let Some(path) = &args.emit {
        let sys = emit_financial_system(&arithmetic)?;
        if quiet {
            writeln!(out, "{}", instance_to_json(&sys))?;
        } else {
            write_instance(path, &sys)?;
            writeln!(
                out,
                "instance: {} ({} banks, {} contracts)",
                path.display(),
                sys.len(),
                sys.contracts().len()
            )?;
        }
    }
    Ok(())
}
