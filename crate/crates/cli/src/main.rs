//! `mihopf`: compute and verify structures on multi-indices from the command line.
//!
//! Every command prints key-sorted JSON that echoes the resolved
//! configuration. Exit codes: 0 on success, 1 when a verification finds a
//! counterexample, 2 on usage or input errors.

mod config;
mod json;
mod verify;

use clap::{Args, Parser, Subcommand};
use config::{RunConfig, UsageError};
use mihopf::dict::rp_pool;
use mihopf::dynamics::{Grid, Hierarchy, Rule};
use mihopf::envelope::EnvIndex;
use mihopf::group::{gamma, Character};
use mihopf::hopf::{antipode_index, delta, delta_plus};
use mihopf::index::parse_multi_index;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mihopf", version, about = "Multi-index Hopf algebras: coproducts, group actions and verification suites")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Homogeneity unit α as a rational, e.g. 1/4 [default: 1/4]
    #[arg(long, global = true)]
    alpha: Option<String>,
    /// Weights of the two directions, e.g. 1,2 [default: 1,2]
    #[arg(long, global = true)]
    weights: Option<String>,
    /// Sub-structure: full, rp, rp2 or gpam [default: full]
    #[arg(long, global = true)]
    mode: Option<String>,
    /// JSON file with any of the keys alpha, weights, mode; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON result to this file instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// The comodule map Δ of a model index, e.g. "2e0+e1"
    Delta { beta: String },
    /// The coproduct Δ⁺ of an envelope index given as JSON {"J": [...], "m": [m1, m2]}
    DeltaPlus { index: String },
    /// The antipode of an envelope index given as JSON
    Antipode { index: String },
    /// Γ_f applied to a model index, for a character read from a JSON file
    Gamma {
        #[arg(long = "char")]
        character: PathBuf,
        #[arg(long)]
        beta: String,
    },
    /// Check an identity exhaustively on a bounded pool
    Verify(VerifyArgs),
    /// Sample the rough-path model hierarchy for a smooth driver
    Model(ModelArgs),
}

#[derive(Args)]
struct VerifyArgs {
    identity: verify::Identity,
    /// Homogeneity bound, a sum of rationals and multiples of a = α
    #[arg(long, default_value = "3a+2")]
    max_hom: String,
    /// Maximal length of pooled indices
    #[arg(long, default_value_t = 4)]
    max_len: u32,
    /// Bound on |n| for polynomial letters and decorations
    #[arg(long, default_value_t = 2)]
    max_n: i64,
    /// Largest k-letter for the gPAM pools
    #[arg(long, default_value_t = 3)]
    max_k: u32,
    /// Largest l in the Faà di Bruno identity
    #[arg(long, default_value_t = 2)]
    max_l: u32,
    /// Maximal number of edges of pooled trees
    #[arg(long, default_value_t = 4)]
    max_edges: u32,
    /// Maximal number of polynomial leaves of decorated trees
    #[arg(long, default_value_t = 3)]
    max_leaves: usize,
    /// Maximal number of nodes of colored trees
    #[arg(long, default_value_t = 4)]
    max_nodes: u32,
    /// Number of random samples for the randomized identities
    #[arg(long, default_value_t = 5)]
    samples: usize,
    /// Seed of the random samples
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Driver for the numerical check: cos, const:<c> or poly:<c0>,<c1>,…
    #[arg(long, default_value = "cos")]
    driver: String,
    /// Number of grid steps on [0, 1] for the numerical check
    #[arg(long = "N", default_value_t = 2000)]
    grid_points: usize,
    /// Tolerance of the numerical check
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct ModelArgs {
    /// Driver: cos, const:<c> or poly:<c0>,<c1>,…
    #[arg(long, default_value = "cos")]
    driver: String,
    /// Length of the time interval
    #[arg(long = "T", default_value_t = 1.0)]
    t: f64,
    /// Number of grid steps
    #[arg(long = "N", default_value_t = 2000)]
    n: usize,
    /// Maximal number of edges of the sampled indices
    #[arg(long, default_value_t = 4)]
    max_edges: u32,
    /// Quadrature rule: simpson or trapezoid
    #[arg(long, default_value = "simpson")]
    rule: String,
    /// Write the sampled paths as CSV to this file
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Result of a command: the JSON document and whether every check passed.
struct Outcome {
    doc: Value,
    passed: bool,
}

fn parse_env_index(s: &str) -> Result<EnvIndex, UsageError> {
    serde_json::from_str(s).map_err(|e| UsageError::Input(format!("invalid envelope index: {e}")))
}

fn parse_beta(s: &str) -> Result<mihopf::index::MultiIndex, UsageError> {
    parse_multi_index(s).map_err(|e| UsageError::Input(format!("invalid multi-index {s:?}: {e}")))
}

fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> UsageError + '_ {
    move |source| UsageError::Io { path: path.display().to_string(), source }
}

fn run(cli: &Cli) -> Result<Outcome, UsageError> {
    let g = &cli.global;
    let cfg = RunConfig::resolve(g.alpha.as_deref(), g.weights.as_deref(), g.mode.as_deref(), g.config.as_deref())?;
    let p = cfg.params()?;
    let mode = cfg.mode()?;
    let ok = |doc: Value| Ok(Outcome { doc, passed: true });
    match &cli.command {
        Command::Delta { beta } => {
            let b = parse_beta(beta)?;
            let d = delta(&b, mode, &p).map_err(|e| UsageError::Input(e.to_string()))?;
            ok(json!({"config": cfg, "command": "delta", "beta": b, "delta": json::tensor(&d)}))
        }
        Command::DeltaPlus { index } => {
            let idx = parse_env_index(index)?;
            let d = delta_plus(&idx, mode, &p);
            ok(json!({"config": cfg, "command": "delta-plus", "index": idx, "delta_plus": json::tensor(&d)}))
        }
        Command::Antipode { index } => {
            let idx = parse_env_index(index)?;
            let s = antipode_index(&idx, mode, &p);
            ok(json!({"config": cfg, "command": "antipode", "index": idx, "antipode": json::plus(&s)}))
        }
        Command::Gamma { character, beta } => {
            let text = std::fs::read_to_string(character).map_err(io_err(character))?;
            let f = Character::from_json(&text, &p).map_err(|e| UsageError::Input(format!("invalid character: {e}")))?;
            let b = parse_beta(beta)?;
            let s = gamma(&f, &b, &p).map_err(|e| UsageError::Input(e.to_string()))?;
            ok(json!({"config": cfg, "command": "gamma", "character": f, "beta": b, "gamma": json::series(&s)}))
        }
        Command::Verify(a) => {
            let bounds = verify::Bounds {
                max_hom: a.max_hom.clone(),
                max_len: a.max_len,
                max_n: a.max_n,
                max_k: a.max_k,
                max_l: a.max_l,
                max_edges: a.max_edges,
                max_leaves: a.max_leaves,
                max_nodes: a.max_nodes,
                samples: a.samples,
                seed: a.seed,
                driver: a.driver.clone(),
                grid_points: a.grid_points,
                tol: a.tol,
            };
            let r = verify::run(a.identity, &bounds, mode, &p)?;
            let passed = r.passed();
            let doc = json!({
                "config": cfg,
                "bounds": bounds,
                "identity": a.identity,
                "pool": r.pool,
                "checked": r.checked,
                "counterexamples": r.counterexamples,
            });
            Ok(Outcome { doc, passed })
        }
        Command::Model(a) => model(a, cfg),
    }
}

fn model(a: &ModelArgs, cfg: RunConfig) -> Result<Outcome, UsageError> {
    let driver = config::parse_driver(&a.driver)?;
    let rule = match a.rule.as_str() {
        "simpson" => Rule::Simpson,
        "trapezoid" => Rule::Trapezoid,
        other => return Err(UsageError::Input(format!("unknown rule {other:?}: expected simpson or trapezoid"))),
    };
    let grid = Grid::new(a.t, a.n).map_err(|e| UsageError::Input(e.to_string()))?;
    let xi = driver.sample(grid);
    let mut h = Hierarchy::new(xi.clone(), rule);
    let mut paths = vec![("xi".to_string(), xi.clone())];
    let mut finals = serde_json::Map::new();
    for beta in rp_pool(a.max_edges) {
        let name = beta.to_string();
        let path = h.model(&beta);
        finals.insert(name.clone(), json!(path.last()));
        paths.push((name, path));
    }
    if let Some(out) = &a.csv {
        let f = std::fs::File::create(out).map_err(io_err(out))?;
        mihopf::dynamics::write_csv(&paths, f).map_err(|e| UsageError::Input(e.to_string()))?;
    }
    let defect = mihopf::dynamics::verify_lemma_rp(&xi, a.max_edges, rule);
    let doc = json!({
        "config": cfg,
        "command": "model",
        "driver": a.driver,
        "T": a.t,
        "N": a.n,
        "max_edges": a.max_edges,
        "rule": a.rule,
        "final_values": finals,
        "tree_defect": defect,
    });
    Ok(Outcome { doc, passed: true })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = json::render(&out.doc);
            match &cli.global.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
