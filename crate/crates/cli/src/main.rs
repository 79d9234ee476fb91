//! `cylrig`: rigidity deciders, circuit constructions and exact stress
//! computations for frameworks on the cylinder.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cylrig::constructions::{self, ConstructionError, ConstructionTrace};
use cylrig::decide::{self, Basis, Verdict};
use cylrig::golden::{self, GoldenReport};
use cylrig::graph::Graph;
use cylrig::io::{self, FrameworkFile, StressFile, FORMAT_VERSION};
use cylrig::numeric::{self, Field, Framework, Quadratic, Stress};
use cylrig::sparsity;

#[derive(Parser, Debug)]
#[command(name = "cylrig", version, about = "Rigidity of frameworks on the cylinder")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Scalar field for numeric work.
    #[arg(long, global = true, value_enum, default_value_t = Scalar::Rational)]
    scalar: Scalar,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance for floating-point ranks and residuals.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Edge cap for circuit enumeration.
    #[arg(long, global = true, default_value_t = sparsity::CIRCUIT_EDGE_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Scalar {
    Rational,
    Quadratic,
    F64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VrProperty {
    Minimal,
    Rigid,
    Global,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide rigidity of a graph on the cylinder.
    Rigid { graph: PathBuf },
    /// Decide global rigidity.
    Global { graph: PathBuf },
    /// Decide whether a graph is a circuit of the (2,2)-sparsity matroid.
    Circuit { graph: PathBuf },
    /// Reduce a circuit to a base graph and emit the construction trace.
    Reduce {
        graph: PathBuf,
        /// Verify this trace against the graph instead of searching for one.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Build a random circuit with its construction trace.
    Construct {
        #[arg(long)]
        n: usize,
    },
    /// Compute the equilibrium stress of a framework and its stress-matrix rank.
    Stress {
        framework: PathBuf,
        /// Accept a higher-dimensional cokernel and use its first basis vector.
        #[arg(long)]
        any: bool,
    },
    /// Decide rigidity when one vertex may leave the cylinder.
    Vfree {
        graph: PathBuf,
        #[arg(long)]
        vertex: usize,
    },
    /// Decide rigidity with vertical motions restricted.
    Vr {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = VrProperty::Rigid)]
        property: VrProperty,
    },
    /// Check the embedded reference frameworks and stresses.
    #[command(name = "verify-appendix", alias = "verify-golden")]
    VerifyGolden {
        /// Perturb each reference stress before checking.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Compare every decider with exact ranks on a seeded random corpus.
    CrossValidate {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

/// Input or usage failure: exit code 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

type Run = Result<bool, InputError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Rigid { graph } => verdict(cli, "rigid", decide::rigid(&read_graph(graph)?)?),
        Command::Global { graph } => verdict(cli, "global", decide::globally_rigid(&read_graph(graph)?)?),
        Command::Vfree { graph, vertex } => verdict(cli, "vfree", decide::vfree_rigid(&read_graph(graph)?, *vertex)?),
        Command::Vr { graph, property } => {
            let v = decide::vr_deciders(&read_graph(graph)?)?;
            let chosen = match property {
                VrProperty::Minimal => v.minimally_rigid,
                VrProperty::Rigid => v.rigid,
                VrProperty::Global => v.globally_rigid,
            };
            verdict(cli, "vr", chosen)
        }
        Command::Circuit { graph } => circuit(cli, &read_graph(graph)?),
        Command::Reduce { graph, check } => reduce(cli, &read_graph(graph)?, check.as_deref()),
        Command::Construct { n } => construct(cli, *n),
        Command::Stress { framework, any } => stress(cli, framework, *any),
        Command::VerifyGolden { corrupt } => verify_golden(cli, *corrupt),
        Command::CrossValidate { n_max, count } => cross_validate(cli, *n_max, *count),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    io::parse_graph(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn emit_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialise"));
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    format: u32,
    command: &'a str,
    #[serde(flatten)]
    body: T,
}

fn versioned<T: Serialize>(command: &str, body: T) -> Versioned<'_, T> {
    Versioned { format: FORMAT_VERSION, command, body }
}

fn verdict(cli: &Cli, command: &str, v: Verdict) -> Run {
    if cli.json {
        emit_json(&versioned(command, &v));
    } else {
        println!("{}: {}", describe(v.basis), if v.answer { "yes" } else { "no" });
        println!("certificate: {}", serde_json::to_string(&v.certificate).expect("certificates serialise"));
    }
    Ok(v.answer)
}

fn describe(b: Basis) -> &'static str {
    match b {
        Basis::Rigidity => "rigid",
        Basis::GlobalRigidity => "globally rigid",
        Basis::VertexFree => "rigid with a free vertex",
        Basis::VrMinimal => "minimally rigid (vertically restricted)",
        Basis::VrRigid => "rigid (vertically restricted)",
        Basis::VrGlobal => "globally rigid (vertically restricted)",
        Basis::StressSufficiency => "maximum-rank stress found",
        Basis::Coincident => "rigid with coincident pair",
        Basis::Concentric => "rigid on concentric cylinders",
    }
}

#[derive(Serialize)]
struct CircuitReport {
    circuit: bool,
    n: usize,
    m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<sparsity::CircuitWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ears: Option<usize>,
}

fn circuit(cli: &Cli, g: &Graph) -> Run {
    let witness = sparsity::is_circuit(g, true);
    let ears = match &witness {
        Some(_) => None,
        None if g.m() <= cli.cap && sparsity::is_matroid_connected(g) => Some(sparsity::ear_decomposition(g, cli.cap)?.len()),
        None => None,
    };
    let rep = CircuitReport { circuit: witness.is_some(), n: g.n(), m: g.m(), witness, ears };
    if cli.json {
        emit_json(&versioned("circuit", &rep));
    } else {
        let count = 2 * g.n() as i64 - 1 - g.m() as i64;
        println!("circuit: {}", if rep.circuit { "yes" } else { "no" });
        println!("n = {}, m = {} (2n - 1 - m = {count})", rep.n, rep.m);
        if let Some(k) = rep.ears {
            println!("matroid-connected: ear decomposition with {k} circuits");
        }
    }
    Ok(rep.circuit)
}

fn reduce(cli: &Cli, g: &Graph, check: Option<&Path>) -> Run {
    if let Some(path) = check {
        let trace: ConstructionTrace = serde_json::from_str(&read(path)?).with_context(|| format!("{}", path.display()))?;
        let result = trace.verify(g);
        if cli.json {
            emit_json(&versioned("reduce", BTreeMap::from([("valid", result.is_ok())])));
        } else {
            match &result {
                Ok(()) => println!("trace valid: {} steps from {}", trace.steps.len(), trace.base),
                Err(e) => println!("trace invalid: {e}"),
            }
        }
        return Ok(result.is_ok());
    }
    match constructions::reduce_to_base(g) {
        Ok(trace) => {
            if cli.json {
                emit_json(&versioned("reduce", &trace));
            } else {
                println!("reduced to {} in {} steps", trace.base, trace.steps.len());
                for s in &trace.steps {
                    println!("  {}", serde_json::to_string(s).expect("steps serialise"));
                }
                println!("relabel: {:?}", trace.relabel);
            }
            Ok(true)
        }
        Err(ConstructionError::NoReduction { graph }) => {
            if cli.json {
                emit_json(&versioned("reduce", BTreeMap::from([("stuck", &*graph)])));
            } else {
                println!("no admissible reduction; stuck at:");
                print!("{}", io::edge_list(&graph));
            }
            Ok(false)
        }
        Err(ConstructionError::Precondition(msg)) => {
            if cli.json {
                emit_json(&versioned("reduce", BTreeMap::from([("error", msg)])));
            } else {
                println!("cannot reduce: {msg}");
            }
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct Constructed<'a> {
    #[serde(flatten)]
    graph: &'a Graph,
    trace: &'a ConstructionTrace,
}

fn construct(cli: &Cli, n: usize) -> Run {
    let (g, trace) = constructions::random_circuit(n, cli.seed)?;
    if cli.json {
        emit_json(&versioned("construct", Constructed { graph: &g, trace: &trace }));
    } else {
        print!("{}", io::edge_list(&g));
        println!("# base {}, {} steps", trace.base, trace.steps.len());
    }
    Ok(true)
}

#[derive(Serialize)]
struct StressReport {
    scalar: &'static str,
    cokernel_dim: usize,
    rank_rigidity: usize,
    rank_stress: usize,
    maximum_rank: bool,
    residual_zero: bool,
    #[serde(flatten)]
    stress: StressFile,
}

fn stress(cli: &Cli, path: &Path, any: bool) -> Run {
    let file = FrameworkFile::parse(&read(path)?).with_context(|| format!("{}", path.display()))?;
    let f = file.framework()?;
    match cli.scalar {
        Scalar::F64 => stress_in(cli, &f.to_f64(cli.tolerance)?, cli.tolerance, any),
        Scalar::Rational | Scalar::Quadratic => stress_in(cli, &f, 0.0, any),
    }
}

fn stress_in<S: Field + std::fmt::Display>(cli: &Cli, f: &Framework<S>, tol: f64, any: bool) -> Run {
    let rank_rigidity = f.rigidity_matrix().rank(tol);
    let basis = f.rigidity_matrix().cokernel(tol);
    if basis.is_empty() || (basis.len() > 1 && !any) {
        let msg = format!("cokernel has dimension {}; a unique stress needs dimension 1", basis.len());
        if cli.json {
            emit_json(&versioned("stress", BTreeMap::from([("error", msg)])));
        } else {
            println!("rank R_cyl = {rank_rigidity}");
            println!("{msg}");
        }
        return Ok(false);
    }
    let s = Stress::from_vector(f, &basis[0])?.normalised();
    let residual_zero = numeric::verify_stress(f, &s)?.vanishes(tol.max(1e-12) * 1e3);
    let (rank_stress, _) = numeric::stress_matrix_rank(f, &s, tol);
    let rep = StressReport {
        scalar: S::NAME,
        cokernel_dim: basis.len(),
        rank_rigidity,
        rank_stress,
        maximum_rank: numeric::is_maximum_rank(f.n(), rank_stress),
        residual_zero,
        stress: StressFile::new(f, &s),
    };
    if cli.json {
        emit_json(&versioned("stress", &rep));
    } else {
        println!("rank R_cyl = {}", rep.rank_rigidity);
        println!("rank stress matrix = {} (maximum: {})", rep.rank_stress, rep.maximum_rank);
        for (e, w) in rep.stress.edges.iter().zip(&rep.stress.omega) {
            println!("  omega{:?} = {w}", e);
        }
        for (v, l) in rep.stress.lambda.iter().enumerate() {
            println!("  lambda[{v}] = {l}");
        }
    }
    Ok(true)
}

fn verify_golden(cli: &Cli, corrupt: bool) -> Run {
    let mut reports: Vec<GoldenReport> = Vec::new();
    for case in golden::cases() {
        let rep = match cli.scalar {
            Scalar::F64 => case.check(|q| q.to_f64(), cli.tolerance, corrupt)?,
            Scalar::Rational | Scalar::Quadratic => case.check(Quadratic::clone, 0.0, corrupt)?,
        };
        reports.push(rep);
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    if cli.json {
        #[derive(Serialize)]
        struct Entry<'a> {
            #[serde(flatten)]
            report: &'a GoldenReport,
            passed: bool,
            failures: Vec<&'static str>,
        }
        let entries: Vec<Entry> = reports.iter().map(|r| Entry { report: r, passed: r.passed(), failures: r.failures() }).collect();
        emit_json(&versioned("verify-appendix", BTreeMap::from([("cases", entries)])));
    } else {
        for r in &reports {
            if r.passed() {
                println!("{}: pass (rank R_cyl {}, rank stress {})", r.name, r.rank_rigidity, r.rank_stress);
            } else {
                println!("{}: FAIL ({})", r.name, r.failures().join(", "));
            }
        }
        println!("{passed}/{} cases pass", reports.len());
    }
    Ok(passed == reports.len())
}

#[derive(Serialize, Default)]
struct Row {
    basis: &'static str,
    checks: usize,
    numeric: usize,
    agree: usize,
    resampled: usize,
}

#[derive(Serialize)]
struct CrossSummary {
    seed: u64,
    count: usize,
    n_max: usize,
    table: Vec<Row>,
    disagreements: Vec<Disagreement>,
}

#[derive(Serialize)]
struct Disagreement {
    graph: Graph,
    check: decide::Check,
}

fn cross_validate(cli: &Cli, n_max: usize, count: usize) -> Run {
    if count > 0 && n_max < 2 {
        bail_input("--n-max must be at least 2")?;
    }
    let corpus = decide::corpus(count, n_max, cli.seed)?;
    let reports = corpus
        .iter()
        .enumerate()
        .map(|(k, g)| decide::cross_validate(g, decide::sample_seed(cli.seed, k as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows: BTreeMap<Basis, Row> = BTreeMap::new();
    let mut disagreements = Vec::new();
    for rep in &reports {
        for c in &rep.checks {
            let row = rows.entry(c.basis).or_insert_with(|| Row { basis: c.basis.as_str(), ..Default::default() });
            row.checks += 1;
            row.numeric += usize::from(c.numeric.is_some());
            row.agree += usize::from(c.agrees());
            row.resampled += usize::from(c.resampled);
            if !c.agrees() {
                disagreements.push(Disagreement { graph: rep.graph.clone(), check: c.clone() });
            }
        }
    }
    let ok = disagreements.is_empty();
    let summary = CrossSummary { seed: cli.seed, count, n_max, table: rows.into_values().collect(), disagreements };
    if cli.json {
        emit_json(&versioned("cross-validate", &summary));
    } else {
        println!("{:<20} {:>8} {:>8} {:>8} {:>10}", "basis", "checks", "numeric", "agree", "resampled");
        for r in &summary.table {
            println!("{:<20} {:>8} {:>8} {:>8} {:>10}", r.basis, r.checks, r.numeric, r.agree, r.resampled);
        }
        println!("{} graphs, {} disagreements", count, summary.disagreements.len());
        for d in &summary.disagreements {
            println!("  {} on {}", d.check.basis.as_str(), serde_json::to_string(&d.graph).expect("graphs serialise"));
        }
    }
    Ok(ok)
}

fn bail_input(msg: &str) -> anyhow::Result<()> {
    bail!("{msg}")
}
