mod survey;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use thiserror::Error;
use vizcheck::bounds::BoundsError;
use vizcheck::classify::classify;
use vizcheck::domination::{domination_number, power_with_witness, DominationError};
use vizcheck::fair::{
    fair_domination_number_bruteforce, level_set_fair_reception, verify_fair_reception,
    FairError, FairReception, FairVerdict,
};
use vizcheck::graph::{cartesian_product, generate, Graph, GraphError, DEFAULT_PRODUCT_CAP};
use vizcheck::graph6::{
    decode_graph6, encode_graph6, parse_graph6_file, Graph6Error, Graph6FileError,
};
use vizcheck::{Budget, VertexSet};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Record(#[from] Graph6Error),
    #[error(transparent)]
    File(#[from] Graph6FileError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Domination(#[from] DominationError),
    #[error(transparent)]
    Fair(#[from] FairError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("{path}:{line}: {message}")]
    Config {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Input(String),
}

impl CliError {
    /// Stable machine-readable code for scripted callers.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } | CliError::Write { .. } => "io",
            CliError::Record(_) | CliError::File(_) => "parse",
            CliError::Graph(GraphError::ProductTooLarge { .. }) => "size",
            CliError::Graph(_) => "input",
            CliError::Domination(DominationError::BudgetExhausted { .. }) => "budget",
            CliError::Domination(DominationError::EnumerationCapExceeded { .. }) => "budget",
            CliError::Domination(_) => "input",
            CliError::Fair(FairError::BudgetExhausted { .. }) => "budget",
            CliError::Fair(FairError::TooLarge { .. }) => "size",
            CliError::Fair(_) => "input",
            CliError::Bounds(BoundsError::ProvenBoundViolation(_)) => "integrity",
            CliError::Bounds(BoundsError::Graph(GraphError::ProductTooLarge { .. })) => "size",
            CliError::Bounds(BoundsError::Graph(_)) => "input",
            CliError::Bounds(BoundsError::Domination(_)) => "budget",
            CliError::Config { .. } => "config",
            CliError::Input(_) => "input",
        }
    }

    fn to_json(&self) -> String {
        serde_json::json!({ "error": { "code": self.code(), "message": self.to_string() } })
            .to_string()
    }
}

#[derive(Parser)]
#[command(
    name = "vizcheck",
    version,
    about = "Exact domination numbers, fair receptions, and product lower bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Generator spec such as path:6, cycle:5, complete_bipartite:2,3
    #[arg(long, conflicts_with_all = ["g6", "file"])]
    gen: Option<String>,
    /// One graph6 record
    #[arg(long, conflicts_with = "file")]
    g6: Option<String>,
    /// graph6 file with one record per line
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct HInputArgs {
    /// Generator spec for the second factor
    #[arg(long = "h-gen", conflicts_with_all = ["h_g6", "h_file"])]
    h_gen: Option<String>,
    /// graph6 record for the second factor
    #[arg(long = "h-g6", conflicts_with = "h_file")]
    h_g6: Option<String>,
    /// graph6 file for the second factor
    #[arg(long = "h-file")]
    h_file: Option<PathBuf>,
}

impl HInputArgs {
    fn into_input(self) -> InputArgs {
        InputArgs {
            gen: self.h_gen,
            g6: self.h_g6,
            file: self.h_file,
        }
    }
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Search node limit for the exact solvers
    #[arg(long)]
    budget: Option<u64>,
    /// Cap on the number of enumerated minimum dominating sets
    #[arg(long = "enum-cap")]
    enum_cap: Option<usize>,
}

impl BudgetArgs {
    fn to_budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(n) = self.budget {
            b.max_nodes = n;
        }
        if let Some(c) = self.enum_cap {
            b.enum_cap = c;
        }
        b
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact domination number with one optimal set
    Gamma {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Minimum allegiance over all optimal dominating sets, with a witness
    Power {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Induced subgraph profile as JSON
    Classify {
        #[command(flatten)]
        input: InputArgs,
        /// Largest forbidden clique and star order to test
        #[arg(long, default_value_t = 6)]
        rmax: usize,
    },
    /// Cartesian product, printed as a graph6 record
    Product {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        h_input: HInputArgs,
        /// Largest allowed product vertex count
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Build a distance level reception or verify one from a file
    Fair {
        #[command(flatten)]
        input: InputArgs,
        /// Group the distance levels of the graph into a reception
        #[arg(long, conflicts_with = "verify")]
        construct: bool,
        /// Verify the sets in this file, one comma-separated set per line
        #[arg(long)]
        verify: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Exact fair domination number, brute force on up to 7 vertices
    Gammaf {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Bound reports over all corpus pairs
    Survey(survey::SurveyArgs),
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Resolves an input to (id, graph) records. File inputs may carry many
/// records and get id-prefixed output lines; the other two carry one.
fn load_inputs(input: &InputArgs) -> Result<(Vec<(String, Graph)>, bool), CliError> {
    if let Some(spec) = &input.gen {
        return Ok((vec![(spec.clone(), generate(spec)?)], false));
    }
    if let Some(record) = &input.g6 {
        return Ok((vec![(record.clone(), decode_graph6(record)?)], false));
    }
    if let Some(path) = &input.file {
        let text = read_file(path)?;
        return Ok((parse_graph6_file(&text)?, true));
    }
    Err(CliError::Input(
        "provide a graph with --gen, --g6, or --file".into(),
    ))
}

fn load_one(input: &InputArgs) -> Result<(String, Graph), CliError> {
    let (mut records, _) = load_inputs(input)?;
    if records.len() != 1 {
        return Err(CliError::Input(format!(
            "expected exactly one graph, got {}",
            records.len()
        )));
    }
    Ok(records.remove(0))
}

fn join_set(s: &VertexSet) -> String {
    let items: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    items.join(",")
}

fn emit(prefixed: bool, id: &str, line: &str) {
    if prefixed {
        println!("{id} {line}");
    } else {
        println!("{line}");
    }
}

fn parse_sets_file(path: &Path) -> Result<Vec<Vec<usize>>, CliError> {
    let text = read_file(path)?;
    let mut sets = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut set = Vec::new();
        for tok in line.split(',') {
            let tok = tok.trim();
            set.push(tok.parse::<usize>().map_err(|_| CliError::Config {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("not a vertex index: {tok}"),
            })?);
        }
        sets.push(set);
    }
    Ok(sets)
}

fn cmd_fair(
    input: InputArgs,
    construct: bool,
    verify: Option<PathBuf>,
    budget: &Budget,
) -> Result<(), CliError> {
    let (_, g) = load_one(&input)?;
    let mut fr = if construct {
        level_set_fair_reception(&g)?
    } else if let Some(path) = &verify {
        FairReception::from_vertex_lists(&g, &parse_sets_file(path)?)?
    } else {
        return Err(CliError::Input(
            "pass --construct or --verify FILE".into(),
        ));
    };
    let verdict = verify_fair_reception(&g, &mut fr, budget)?;
    println!("k={} verified={}", fr.k, fr.verified);
    if let FairVerdict::Failed { counterexample } = &verdict {
        println!(
            "counterexample choice={} witness={} score={} required={}",
            counterexample
                .choice
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(","),
            join_set(&counterexample.witness),
            counterexample.score,
            counterexample.required
        );
    }
    println!(
        "{}",
        serde_json::json!({ "reception": fr, "verdict": verdict })
    );
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gamma { input, budget } => {
            let budget = budget.to_budget();
            let (records, prefixed) = load_inputs(&input)?;
            for (id, g) in records {
                let cert = domination_number(&g, &budget)?;
                emit(
                    prefixed,
                    &id,
                    &format!("gamma={} set={}", cert.gamma, join_set(&cert.one_gamma_set)),
                );
            }
            Ok(())
        }
        Command::Power { input, budget } => {
            let budget = budget.to_budget();
            let (records, prefixed) = load_inputs(&input)?;
            for (id, g) in records {
                let (pi, witness) = power_with_witness(&g, &budget)?;
                emit(prefixed, &id, &format!("pi={pi} witness={}", join_set(&witness)));
            }
            Ok(())
        }
        Command::Classify { input, rmax } => {
            if rmax < 3 {
                return Err(CliError::Input("--rmax must be at least 3".into()));
            }
            let (records, prefixed) = load_inputs(&input)?;
            for (id, g) in records {
                let profile = classify(&g, rmax);
                let json = serde_json::to_string(&profile).expect("profile serializes");
                emit(prefixed, &id, &json);
            }
            Ok(())
        }
        Command::Product {
            input,
            h_input,
            cap,
        } => {
            let (_, g) = load_one(&input)?;
            let (_, h) = load_one(&h_input.into_input())?;
            let product = cartesian_product(&g, &h, cap.unwrap_or(DEFAULT_PRODUCT_CAP))?;
            println!("{}", encode_graph6(&product)?);
            eprintln!("n={} m={}", product.n(), product.edge_count());
            Ok(())
        }
        Command::Fair {
            input,
            construct,
            verify,
            budget,
        } => cmd_fair(input, construct, verify, &budget.to_budget()),
        Command::Gammaf { input, budget } => {
            let (_, g) = load_one(&input)?;
            let k = fair_domination_number_bruteforce(&g, &budget.to_budget())?;
            println!("gamma_f={k}");
            Ok(())
        }
        Command::Survey(args) => survey::run(args),
    }
}

fn main() {
    // die quietly when a downstream pipe closes instead of panicking
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("{}", e.to_json());
        std::process::exit(1);
    }
}
