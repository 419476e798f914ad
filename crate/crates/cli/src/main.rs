//! `qsat`: generic ranks, gadget formulas, peeling runs and threshold bounds
//! for random quantum k-SAT. Every command prints one JSON document holding
//! its parameters and result.
//!
//! Exit status is 2 for invalid arguments or input, 1 for numerical failures
//! (an unstable floating-point rank or a bound without a sign change), and 0
//! otherwise.

use std::fs;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsat_core::analysis::{
    general_k_bound, nosegay_bound_with, single_clause_bound, sunflower_bound_with, threshold_root,
    NosegayWeights, RootMethod, RootParams, DEFAULT_D_MAX, DEFAULT_MAX_PANELS,
    DEFAULT_QUADRATURE_POINTS, DEFAULT_TRUNCATION,
};
use qsat_core::gadgets::{k2_component_rank, k2_rank};
use qsat_core::hypergraph::{components, random_hypergraph};
use qsat_core::peeling::{empirical_log_rank, nosegay_peel, sunflower_peel};
use qsat_core::rank_oracle::{
    generic_rank_field, generic_rank_float_sampled, FieldOptions, FloatOptions, DEFAULT_PRIME,
    DEFAULT_QUBIT_CAP,
};
use qsat_core::{Error, Execution, GadgetRank, GadgetSpec, Hypergraph};
use serde::Serialize;
use serde_json::{json, Value};

mod verify;

#[derive(Parser)]
#[command(
    name = "qsat",
    version,
    about = "Generic-rank tools for random quantum k-SAT"
)]
struct Cli {
    /// Run every batch on the calling thread. Results are identical either way.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generic rank of the clause hypergraph in FILE.
    Rank(RankArgs),
    /// Closed-form rank of a gadget.
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Check closed forms against the rank oracle.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Peel a random hypergraph and report the empirical log-rank bound.
    Peel(PeelArgs),
    /// Evaluate an analytic bound on (1/n) ln R_gen.
    Bound(BoundArgs),
    /// Density at which a bound changes sign.
    Threshold(ThresholdArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Mode {
    Field,
    Float,
}

#[derive(Args)]
struct RankArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "field")]
    mode: Mode,
    /// Field trials, or independent clause samples for the float backend.
    #[arg(long, default_value_t = 3)]
    trials: usize,
    /// Relative singular-value cutoff for the float backend.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Field modulus; must be a prime above 2^60.
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    /// Lift the qubit cap.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum GadgetCommand {
    /// (d, k)-sunflower.
    Sunflower {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// 3-uniform (a, b, c)-nosegay.
    Nosegay3(Abc),
    /// [a, b, c]-nosegay with hanging 2-clauses.
    NosegayHang(Abc),
    /// k-uniform nosegay with hanging-edge counts DVEC.
    NosegayK {
        #[arg(long, value_delimiter = ',', required = true)]
        dvec: Vec<usize>,
        #[arg(long)]
        k: usize,
    },
    /// Multigraph of 2-clauses, from FILE or as one connected component.
    K2 {
        #[arg(long, conflicts_with_all = ["vertices", "edges"])]
        graph: Option<PathBuf>,
        #[arg(long, requires = "edges")]
        vertices: Option<usize>,
        #[arg(long, requires = "vertices")]
        edges: Option<usize>,
    },
}

#[derive(Args)]
struct Abc {
    #[arg(long)]
    a: usize,
    #[arg(long)]
    b: usize,
    #[arg(long)]
    c: usize,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Compare every gadget formula with the field oracle.
    Gadgets {
        /// Largest number of non-central clauses per gadget.
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum PeelGadget {
    Sunflower,
    Nosegay,
}

#[derive(Args)]
struct PeelArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, value_enum)]
    gadget: PeelGadget,
    /// Seeds both the random hypergraph and the peel.
    #[arg(long)]
    seed: u64,
    /// Write the step-by-step trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum BoundKind {
    Sunflower,
    Nosegay,
    GeneralK,
    SingleClause,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(value_enum)]
    method: BoundKind,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_D_MAX)]
    dmax: usize,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    trunc: usize,
    /// Panels for the nosegay integral.
    #[arg(long, default_value_t = DEFAULT_QUADRATURE_POINTS)]
    points: usize,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ThresholdKind {
    Sunflower,
    Nosegay,
    GeneralK,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(value_enum)]
    method: ThresholdKind,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    /// Lower end of the bracket.
    #[arg(long)]
    lo: Option<f64>,
    /// Upper end of the bracket; defaults to the single-clause threshold.
    #[arg(long)]
    hi: Option<f64>,
}

/// A failure together with the exit status it maps to.
struct Failure {
    status: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::UnstableRank { .. } | Error::NoSignChange { .. } => 1,
            _ => 2,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        status: 2,
        message: message.into(),
    }
}

fn read_graph(path: &PathBuf) -> Result<Hypergraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Hypergraph::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// JSON number, or the strings "-inf", "inf" and "nan" for non-finite values.
fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn rank(args: &RankArgs, exec: Execution) -> Result<Value, Failure> {
    let g = read_graph(&args.graph)?;
    let cap = if args.force {
        usize::MAX
    } else {
        DEFAULT_QUBIT_CAP
    };
    let result = match args.mode {
        Mode::Field => {
            let opts = FieldOptions {
                trials: args.trials,
                prime: args.prime,
                cap,
                seed: args.seed,
            };
            generic_rank_field(&g, &opts, exec)?
        }
        Mode::Float => {
            let opts = FloatOptions {
                tolerance: args.tolerance,
                cap,
            };
            generic_rank_float_sampled(&g, args.trials, args.seed, &opts, exec)?
        }
    };
    Ok(json!({
        "params": {
            "graph": args.graph,
            "n": g.n(),
            "m": g.m(),
            "mode": args.mode,
            "trials": args.trials,
            "tolerance": args.tolerance,
            "prime": args.prime,
            "seed": args.seed,
            "force": args.force,
        },
        "result": result,
    }))
}

fn gadget(cmd: &GadgetCommand) -> Result<Value, Failure> {
    let spec = match cmd {
        GadgetCommand::Sunflower { d, k } => GadgetSpec::Sunflower { d: *d, k: *k },
        GadgetCommand::Nosegay3(p) => GadgetSpec::Nosegay3 {
            a: p.a,
            b: p.b,
            c: p.c,
        },
        GadgetCommand::NosegayHang(p) => GadgetSpec::NosegayHang {
            a: p.a,
            b: p.b,
            c: p.c,
        },
        GadgetCommand::NosegayK { dvec, k } => GadgetSpec::NosegayK {
            dvec: dvec.clone(),
            k: *k,
        },
        GadgetCommand::K2 {
            graph: Some(path), ..
        } => {
            let g = read_graph(path)?;
            let comps = components(&g)?;
            let rank = k2_rank(&g)?;
            return Ok(json!({
                "params": { "family": "k2", "graph": path, "n": g.n(), "m": g.m() },
                "result": { "rank": rank.to_string(), "components": comps },
            }));
        }
        GadgetCommand::K2 {
            vertices: Some(n),
            edges: Some(m),
            ..
        } => {
            let r = GadgetRank {
                rank: k2_component_rank(*n, *m)?,
                vertex_count: *n,
            };
            return Ok(json!({
                "params": { "family": "k2", "vertex_count": n, "edge_count": m },
                "result": { "rank": r.rank.to_string(), "vertex_count": n, "log_weight": r.log_weight() },
            }));
        }
        GadgetCommand::K2 { .. } => {
            return Err(usage("k2 needs --graph or both --vertices and --edges"))
        }
    };
    let r = spec.rank()?;
    Ok(json!({
        "params": spec,
        "result": { "rank": r.rank.to_string(), "vertex_count": r.vertex_count, "log_weight": r.log_weight() },
    }))
}

fn peel(args: &PeelArgs) -> Result<Value, Failure> {
    if !(args.alpha >= 0.0 && args.alpha.is_finite()) {
        return Err(usage(format!(
            "alpha must be a non-negative number, got {}",
            args.alpha
        )));
    }
    let m = (args.alpha * args.n as f64).round() as usize;
    let g = random_hypergraph(args.n, m, args.k, args.seed)?;
    let trace = match args.gadget {
        PeelGadget::Sunflower => sunflower_peel(&g, args.seed)?,
        PeelGadget::Nosegay => nosegay_peel(&g, args.seed)?,
    };
    if let Some(path) = &args.trace {
        let file = fs::File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        trace.write_csv(BufWriter::new(file))?;
    }
    let bound = empirical_log_rank(&trace)?;
    Ok(json!({
        "params": {
            "n": args.n,
            "m": m,
            "alpha": args.alpha,
            "k": args.k,
            "gadget": args.gadget,
            "seed": args.seed,
            "trace": args.trace,
        },
        "result": {
            "value": number(bound.value),
            "step_count": bound.step_count,
            "anomalies": bound.anomalies,
        },
    }))
}

fn bound(args: &BoundArgs, exec: Execution) -> Result<Value, Failure> {
    let report = match args.method {
        BoundKind::Sunflower => {
            sunflower_bound_with(args.alpha, args.k, args.dmax, DEFAULT_MAX_PANELS, exec)?
        }
        BoundKind::Nosegay => {
            if args.k != 3 {
                return Err(usage("the nosegay bound is only defined for k = 3"));
            }
            let weights = NosegayWeights::new(args.trunc, exec);
            nosegay_bound_with(args.alpha, &weights, args.points, exec)?
        }
        BoundKind::GeneralK => general_k_bound(args.alpha, args.k)?,
        BoundKind::SingleClause => single_clause_bound(args.alpha, args.k)?,
    };
    Ok(json!({
        "params": {
            "method": args.method,
            "alpha": args.alpha,
            "k": args.k,
            "dmax": args.dmax,
            "trunc": args.trunc,
            "points": args.points,
        },
        "result": report,
    }))
}

fn threshold(args: &ThresholdArgs) -> Result<Value, Failure> {
    let method = match args.method {
        ThresholdKind::Sunflower => RootMethod::Sunflower,
        ThresholdKind::Nosegay => RootMethod::Nosegay,
        ThresholdKind::GeneralK => RootMethod::GeneralK,
    };
    if args.tolerance.is_nan() || args.tolerance <= 0.0 {
        return Err(usage("tolerance must be positive"));
    }
    let params = RootParams {
        lo: args.lo,
        hi: args.hi,
        tolerance: args.tolerance,
        ..Default::default()
    };
    let root = threshold_root(method, args.k, &params)?;
    Ok(json!({
        "params": { "method": args.method, "k": args.k, "tolerance": args.tolerance, "lo": args.lo, "hi": args.hi },
        "result": { "alpha": root },
    }))
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match &cli.command {
        Command::Rank(args) => rank(args, exec),
        Command::Gadget(cmd) => gadget(cmd),
        Command::Verify(VerifyCommand::Gadgets { max_size, seed }) => {
            verify::gadgets(*max_size, *seed, exec)
        }
        Command::Peel(args) => peel(args),
        Command::Bound(args) => bound(args, exec),
        Command::Threshold(args) => threshold(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(value) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("serializable report")
            );
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.status)
        }
    }
}
