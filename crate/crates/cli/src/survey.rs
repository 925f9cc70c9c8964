use crate::{read_file, CliError, OutputFormat};
use clap::Args;
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use vizcheck::bounds::{
    check_pair, rational_approx, rational_string, BoundReport, BoundsError, CheckOptions,
};
use vizcheck::domination::DominationError;
use vizcheck::graph::{Graph, DEFAULT_PRODUCT_CAP};
use vizcheck::graph6::parse_graph6_file;
use vizcheck::Budget;

#[derive(Args, Clone)]
pub struct SurveyArgs {
    /// First-factor corpus, graph6 with one record per line
    #[arg(long)]
    file: Option<PathBuf>,
    /// Second-factor corpus, defaults to the first
    #[arg(long = "h-file")]
    h_file: Option<PathBuf>,
    /// Write reports here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Worker thread count, 0 picks the machine default
    #[arg(long)]
    workers: Option<usize>,
    /// Search node limit for the exact solvers
    #[arg(long)]
    budget: Option<u64>,
    /// Cap on the number of enumerated minimum dominating sets
    #[arg(long = "enum-cap")]
    enum_cap: Option<usize>,
    /// Largest allowed product vertex count
    #[arg(long)]
    cap: Option<usize>,
    /// Largest forbidden clique and star order to test
    #[arg(long)]
    rmax: Option<usize>,
    /// Drop disconnected corpus records instead of failing on them
    #[arg(long)]
    connected_only: bool,
    /// Add the user-asserted Contractor-Krop row to every report
    #[arg(long)]
    assume_contractor_krop: bool,
    /// key=value defaults file; flags given here override it
    #[arg(long)]
    config: Option<PathBuf>,
}

struct SurveyConfig {
    file: Option<PathBuf>,
    h_file: Option<PathBuf>,
    out: Option<PathBuf>,
    format: OutputFormat,
    workers: usize,
    budget: u64,
    enum_cap: usize,
    cap: usize,
    rmax: usize,
    connected_only: bool,
    assume_contractor_krop: bool,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        let b = Budget::default();
        SurveyConfig {
            file: None,
            h_file: None,
            out: None,
            format: OutputFormat::Json,
            workers: 0,
            budget: b.max_nodes,
            enum_cap: b.enum_cap,
            cap: DEFAULT_PRODUCT_CAP,
            rmax: 6,
            connected_only: false,
            assume_contractor_krop: false,
        }
    }
}

fn bad_key(path: &Path, line: usize, message: String) -> CliError {
    CliError::Config {
        path: path.to_path_buf(),
        line,
        message,
    }
}

impl SurveyConfig {
    fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = read_file(path)?;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(bad_key(path, i + 1, format!("expected key=value, got {line}")));
            };
            let (key, value) = (key.trim(), value.trim());
            let parse_err =
                |what: &str| bad_key(path, i + 1, format!("bad {what} value: {value}"));
            match key {
                "file" => self.file = Some(PathBuf::from(value)),
                "h_file" => self.h_file = Some(PathBuf::from(value)),
                "out" => self.out = Some(PathBuf::from(value)),
                "format" => {
                    self.format = match value {
                        "json" => OutputFormat::Json,
                        "csv" => OutputFormat::Csv,
                        _ => return Err(parse_err("format")),
                    }
                }
                "workers" => self.workers = value.parse().map_err(|_| parse_err("workers"))?,
                "budget" => self.budget = value.parse().map_err(|_| parse_err("budget"))?,
                "enum_cap" => self.enum_cap = value.parse().map_err(|_| parse_err("enum_cap"))?,
                "cap" => self.cap = value.parse().map_err(|_| parse_err("cap"))?,
                "rmax" => self.rmax = value.parse().map_err(|_| parse_err("rmax"))?,
                "connected_only" => {
                    self.connected_only = value.parse().map_err(|_| parse_err("connected_only"))?
                }
                "assume_contractor_krop" => {
                    self.assume_contractor_krop =
                        value.parse().map_err(|_| parse_err("assume_contractor_krop"))?
                }
                _ => return Err(bad_key(path, i + 1, format!("unknown key {key}"))),
            }
        }
        Ok(())
    }

    fn apply_args(&mut self, args: &SurveyArgs) {
        if let Some(v) = &args.file {
            self.file = Some(v.clone());
        }
        if let Some(v) = &args.h_file {
            self.h_file = Some(v.clone());
        }
        if let Some(v) = &args.out {
            self.out = Some(v.clone());
        }
        if let Some(v) = args.format {
            self.format = v;
        }
        if let Some(v) = args.workers {
            self.workers = v;
        }
        if let Some(v) = args.budget {
            self.budget = v;
        }
        if let Some(v) = args.enum_cap {
            self.enum_cap = v;
        }
        if let Some(v) = args.cap {
            self.cap = v;
        }
        if let Some(v) = args.rmax {
            self.rmax = v;
        }
        if args.connected_only {
            self.connected_only = true;
        }
        if args.assume_contractor_krop {
            self.assume_contractor_krop = true;
        }
    }
}

fn load_corpus(path: &Path, connected_only: bool) -> Result<Vec<(String, Graph)>, CliError> {
    let records = parse_graph6_file(&read_file(path)?)?;
    if !connected_only {
        return Ok(records);
    }
    let mut kept = Vec::with_capacity(records.len());
    for (id, g) in records {
        if g.is_connected() {
            kept.push((id, g));
        } else {
            eprintln!("skipping disconnected record {id}");
        }
    }
    Ok(kept)
}

pub fn run(args: SurveyArgs) -> Result<(), CliError> {
    let mut cfg = SurveyConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    cfg.apply_args(&args);

    let g_path = cfg
        .file
        .clone()
        .ok_or_else(|| CliError::Input("survey needs --file, or file= in --config".into()))?;
    let g_corpus = load_corpus(&g_path, cfg.connected_only)?;
    let h_corpus = match &cfg.h_file {
        Some(p) => load_corpus(p, cfg.connected_only)?,
        None => g_corpus.clone(),
    };

    let opts = CheckOptions {
        budget: Budget {
            max_nodes: cfg.budget,
            enum_cap: cfg.enum_cap,
        },
        product_cap: cfg.cap,
        r_max: cfg.rmax,
        assume_contractor_krop: cfg.assume_contractor_krop,
    };
    let jobs: Vec<(usize, usize)> = (0..g_corpus.len())
        .flat_map(|i| (0..h_corpus.len()).map(move |j| (i, j)))
        .collect();

    // workers stay pure and the indexed collect keeps input order, so the
    // emitted stream does not depend on the worker count
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::Input(format!("cannot build worker pool: {e}")))?;
    let results: Vec<Result<BoundReport, BoundsError>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, j)| {
                let (g_id, g) = &g_corpus[i];
                let (h_id, h) = &h_corpus[j];
                check_pair(g, h, g_id, h_id, &opts)
            })
            .collect()
    });

    let mut reports = Vec::with_capacity(results.len());
    let mut budget_failures = 0usize;
    for (k, res) in results.into_iter().enumerate() {
        match res {
            Ok(rep) => reports.push(rep),
            Err(BoundsError::Domination(
                e @ (DominationError::BudgetExhausted { .. }
                | DominationError::EnumerationCapExceeded { .. }),
            )) => {
                let (g_id, _) = &g_corpus[jobs[k].0];
                let (h_id, _) = &h_corpus[jobs[k].1];
                eprintln!("budget failure on pair ({g_id}, {h_id}): {e}");
                budget_failures += 1;
            }
            Err(e) => return Err(e.into()),
        }
    }

    let mut body = String::new();
    match cfg.format {
        OutputFormat::Json => {
            for r in &reports {
                body.push_str(&r.to_json_line());
                body.push('\n');
            }
        }
        OutputFormat::Csv => {
            body.push_str(BoundReport::CSV_HEADER);
            body.push('\n');
            for r in &reports {
                body.push_str(&r.to_csv_row());
                body.push('\n');
            }
        }
    }
    match &cfg.out {
        Some(path) => std::fs::write(path, &body).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?,
        None => print!("{body}"),
    }

    let summary = summarize(&jobs, &reports, budget_failures);
    // keep the summary off the report stream
    if cfg.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

fn summarize(jobs: &[(usize, usize)], reports: &[BoundReport], budget_failures: usize) -> String {
    let mut out = format!(
        "pairs={} reports={} budget_failures={}\n",
        jobs.len(),
        reports.len(),
        budget_failures
    );
    match reports.iter().min_by_key(|r| r.vizing_ratio) {
        Some(rep) => {
            out += &format!(
                "min_vizing_ratio={} approx={} pair=({},{})\n",
                rational_string(&rep.vizing_ratio),
                rational_approx(&rep.vizing_ratio),
                rep.g_id,
                rep.h_id
            );
        }
        None => out.push_str("min_vizing_ratio=none\n"),
    }
    if let Some(first) = reports.first() {
        for name in first.bounds.iter().map(|b| b.name) {
            let mut applicable = 0usize;
            let mut satisfied = 0usize;
            for r in reports {
                if let Some(row) = r.bounds.iter().find(|b| b.name == name) {
                    if row.applicable {
                        applicable += 1;
                        if row.satisfied == Some(true) {
                            satisfied += 1;
                        }
                    }
                }
            }
            out += &format!("bound {name}: applicable={applicable} satisfied={satisfied}\n");
        }
    }
    // the level-set bound starts beating the general-purpose one exactly
    // when the diameter outgrows 3/2 of gamma
    let mut high = (0usize, 0usize);
    let mut low = (0usize, 0usize);
    for r in reports {
        let diam = r.bounds.iter().find(|b| b.name == "diameter").and_then(|b| b.value);
        let suen = r.bounds.iter().find(|b| b.name == "suen_tarr").and_then(|b| b.value);
        let beats = matches!((diam, suen), (Some(d), Some(s)) if d > s);
        let slot = if 2 * r.diam_g > 3 * r.gamma_g {
            &mut high
        } else {
            &mut low
        };
        slot.0 += 1;
        if beats {
            slot.1 += 1;
        }
    }
    out += &format!(
        "stratum 2d>3gamma: pairs={} diameter_beats_suen_tarr={}\n",
        high.0, high.1
    );
    out += &format!(
        "stratum 2d<=3gamma: pairs={} diameter_beats_suen_tarr={}\n",
        low.0, low.1
    );
    out
}
