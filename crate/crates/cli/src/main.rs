//! `bhv`: distances, Fréchet means, stickiness certificates, degree
//! comparisons and stickiness simulations for samples of phylogenetic trees.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bhv_core::frechet::{
    certificate_at, frechet_mean_with, MeanOptions, MeanSolution, StickinessReport,
};
use bhv_core::newick::{labels_from_first_record, parse_newick_records, write_newick_with_labels};
use bhv_core::stats::{degree_test, sample_sticky_sim, DegreeOptions};
use bhv_core::{
    distance, distance_with_pendants, BhvError, EmpiricalDistribution, LabelDict, NewickOptions,
    Tree,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "bhv",
    version,
    about = "Statistics on samples of phylogenetic trees in BHV tree space"
)]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Config {
    /// JSON array of leaf names; leaf i+1 is the i-th name. Defaults to the
    /// leaves of the first tree read, in order of appearance.
    #[arg(long, global = true)]
    labels: Option<PathBuf>,
    /// Optimality tolerance of the mean solver.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Splits of the mean shorter than this are snapped to zero.
    #[arg(long, global = true, default_value_t = 1e-9)]
    snap_tol: f64,
    /// Iteration limit of the mean solver.
    #[arg(long, global = true, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include pendant edge lengths in reported distances.
    #[arg(long, global = true)]
    include_pendant: bool,
    /// Collapse zero-length interior edges instead of rejecting them.
    #[arg(long, global = true)]
    collapse_zero: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pairwise geodesic distances between all trees of the given files.
    Distance {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Fréchet mean of a sample.
    Mean {
        file: PathBuf,
        /// One weight per tree, one per line.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Stickiness certificate for the mean of a sample.
    Sticky {
        file: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Radius of the ball around the mean.
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Lattice granularity for mixed perpendicular directions.
        #[arg(long, default_value_t = 1)]
        granularity: usize,
        /// Strictness margin for positive degrees.
        #[arg(long, default_value_t = 1e-6)]
        sticky_tol: f64,
    },
    /// Paired comparison of the degrees of stickiness of two samples.
    Compare {
        file_x: PathBuf,
        file_y: PathBuf,
        /// Interior edges shorter than this are removed before the analysis.
        #[arg(long)]
        prune: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Fraction of resampled means that stay on the stratum of the mean.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Sample sizes.
        #[arg(long, value_delimiter = ',', default_values_t = [10usize, 30, 100])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        reps: usize,
    },
}

enum Failure {
    Input(String),
    NonConvergence(String, Value),
}

impl From<BhvError> for Failure {
    fn from(e: BhvError) -> Failure {
        match &e {
            BhvError::NonConvergence {
                best,
                residual,
                iterations,
            } => Failure::NonConvergence(
                e.to_string(),
                json!({
                    "error": "non_convergence",
                    "message": e.to_string(),
                    "best": bhv_core::write_newick(best),
                    "residual": residual,
                    "iterations": iterations,
                }),
            ),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("BHV_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: BHV_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::NonConvergence(msg, report)) => {
            eprintln!("error: {msg}");
            println!("{report}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let c = &cli.config;
    if !(c.tol > 0.0 && c.snap_tol > 0.0) {
        return Err(Failure::Input("tolerances must be positive".into()));
    }
    let output = match &cli.command {
        Command::Distance { files } => cmd_distance(c, files)?,
        Command::Mean { file, weights } => cmd_mean(c, file, weights.as_deref())?,
        Command::Sticky {
            file,
            weights,
            eta,
            granularity,
            sticky_tol,
        } => cmd_sticky(c, file, weights.as_deref(), *eta, *granularity, *sticky_tol)?,
        Command::Compare {
            file_x,
            file_y,
            prune,
            alpha,
        } => cmd_compare(c, file_x, file_y, *prune, *alpha)?,
        Command::Simulate {
            file,
            weights,
            n,
            reps,
        } => cmd_simulate(c, file, weights.as_deref(), n, *reps)?,
    };
    emit(c, &output)
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_labels(c: &Config, first_file: &Path) -> CliResult<LabelDict> {
    match &c.labels {
        Some(p) => LabelDict::from_json(&read(p)?)
            .map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => labels_from_first_record(&read(first_file)?)
            .map_err(|e| Failure::Input(format!("{}: {e}", first_file.display()))),
    }
}

fn load_trees(c: &Config, path: &Path, labels: &LabelDict) -> CliResult<Vec<Tree>> {
    let opts = NewickOptions {
        collapse_zero: c.collapse_zero,
    };
    let trees = parse_newick_records(&read(path)?, labels, opts)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if trees.is_empty() {
        return Err(Failure::Input(format!(
            "{}: no trees found",
            path.display()
        )));
    }
    Ok(trees)
}

fn load_weights(path: &Path, expected: usize) -> CliResult<Vec<f64>> {
    let bad = |msg: String| Failure::Input(format!("{}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let mut weights = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let Some(field) = record.iter().next_back() else {
            continue;
        };
        match field.parse::<f64>() {
            Ok(w) => weights.push(w),
            Err(_) if i == 0 => continue,
            Err(_) => return Err(bad(format!("line {}: not a number: {field:?}", i + 1))),
        }
    }
    if weights.len() != expected {
        return Err(bad(format!(
            "{} weights for {expected} trees",
            weights.len()
        )));
    }
    Ok(weights)
}

fn load_sample(
    c: &Config,
    file: &Path,
    weights: Option<&Path>,
) -> CliResult<(LabelDict, EmpiricalDistribution)> {
    let labels = load_labels(c, file)?;
    let trees = load_trees(c, file, &labels)?;
    let p = match weights {
        Some(w) => {
            let w = load_weights(w, trees.len())?;
            EmpiricalDistribution::weighted(trees, w)?
        }
        None => EmpiricalDistribution::uniform(trees)?,
    };
    Ok((labels, p))
}

fn mean_options(c: &Config) -> MeanOptions {
    MeanOptions {
        tol: c.tol,
        snap_tol: c.snap_tol,
        max_iter: c.max_iter,
        ..MeanOptions::default()
    }
}

/// A report in both output shapes.
struct Output {
    json: Value,
    csv_header: Vec<String>,
    csv_rows: Vec<Vec<String>>,
}

fn emit(c: &Config, out: &Output) -> CliResult<()> {
    let text = match c.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Failure::Input(e.to_string());
            w.write_record(&out.csv_header).map_err(io)?;
            for row in &out.csv_rows {
                w.write_record(row).map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Failure::Input(e.to_string()))?)
                .expect("csv output is utf-8")
        }
    };
    match &c.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(e.to_string())),
    }
}

fn split_names(split: &bhv_core::Split, labels: &LabelDict) -> Vec<String> {
    split
        .members()
        .into_iter()
        .map(|l| labels.name_of(l).unwrap_or("?").to_string())
        .collect()
}

fn cmd_distance(c: &Config, files: &[PathBuf]) -> CliResult<Output> {
    let labels = load_labels(c, &files[0])?;
    let mut trees = Vec::new();
    for f in files {
        trees.extend(load_trees(c, f, &labels)?);
    }
    if trees.len() < 2 {
        return Err(Failure::Input("need at least two trees".into()));
    }
    let k = trees.len();
    let mut matrix = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let d = if c.include_pendant {
                distance_with_pendants(&trees[i], &trees[j])?
            } else {
                distance(&trees[i], &trees[j])?
            };
            matrix[i][j] = d;
            matrix[j][i] = d;
        }
    }
    Ok(Output {
        json: json!({ "trees": k, "include_pendant": c.include_pendant, "matrix": matrix }),
        csv_header: (0..k).map(|i| format!("t{i}")).collect(),
        csv_rows: matrix
            .iter()
            .map(|r| r.iter().map(|d| d.to_string()).collect())
            .collect(),
    })
}

fn solution_json(sol: &MeanSolution, labels: &LabelDict) -> Value {
    json!({
        "newick": write_newick_with_labels(&sol.mean, labels),
        "codimension": sol.mean.codimension(),
        "splits": sol.mean.edges().iter().map(|(s, l)| json!({
            "split": s.members(),
            "leaves": split_names(s, labels),
            "length": l,
        })).collect::<Vec<_>>(),
        "residual": sol.residual,
        "iterations": sol.iterations,
        "value": sol.value,
    })
}

fn cmd_mean(c: &Config, file: &Path, weights: Option<&Path>) -> CliResult<Output> {
    let (labels, p) = load_sample(c, file, weights)?;
    let sol = frechet_mean_with(&p, &mean_options(c))?;
    let newick = write_newick_with_labels(&sol.mean, &labels);
    Ok(Output {
        json: json!({ "mean": solution_json(&sol, &labels), "labels": labels.names(), "trees": p.len() }),
        csv_header: ["newick", "codimension", "residual", "iterations", "value"]
            .map(String::from)
            .to_vec(),
        csv_rows: vec![vec![
            newick,
            sol.mean.codimension().to_string(),
            sol.residual.to_string(),
            sol.iterations.to_string(),
            sol.value.to_string(),
        ]],
    })
}

fn cmd_sticky(
    c: &Config,
    file: &Path,
    weights: Option<&Path>,
    eta: f64,
    granularity: usize,
    sticky_tol: f64,
) -> CliResult<Output> {
    let (labels, p) = load_sample(c, file, weights)?;
    let sol = frechet_mean_with(&p, &mean_options(c))?;
    let report = certificate_at(&p, &sol.mean, eta, granularity, sticky_tol)?;
    let mean = solution_json(&sol, &labels);
    Ok(match report {
        StickinessReport::NotApplicable { .. } => Output {
            json: json!({ "applicable": false, "sticky": false, "mean": mean, "labels": labels.names() }),
            csv_header: ["direction", "derivative", "assumption1"]
                .map(String::from)
                .to_vec(),
            csv_rows: Vec::new(),
        },
        StickinessReport::Certificate(cert) => {
            let rows = cert
                .per_direction
                .iter()
                .map(|d| {
                    let dir = d
                        .direction
                        .perp()
                        .iter()
                        .map(|(s, w)| format!("{}:{w}", split_names(s, &labels).join("|")))
                        .collect::<Vec<_>>()
                        .join(" ");
                    vec![dir, d.derivative.to_string(), d.assumption1.to_string()]
                })
                .collect();
            let mut body = serde_json::to_value(&cert).expect("certificates serialize");
            body["applicable"] = json!(true);
            body["mean"] = mean;
            body["labels"] = json!(labels.names());
            Output {
                json: body,
                csv_header: ["direction", "derivative", "assumption1"]
                    .map(String::from)
                    .to_vec(),
                csv_rows: rows,
            }
        }
    })
}

fn cmd_compare(
    c: &Config,
    file_x: &Path,
    file_y: &Path,
    prune: f64,
    alpha: f64,
) -> CliResult<Output> {
    let labels = load_labels(c, file_x)?;
    let x = load_trees(c, file_x, &labels)?;
    let y = load_trees(c, file_y, &labels)?;
    let opts = DegreeOptions {
        alpha,
        prune,
        mean: mean_options(c),
    };
    let report = degree_test(&x, &y, &opts)?;
    let rows = (0..report.directions.len())
        .map(|i| {
            vec![
                split_names(&report.directions[i], &labels).join("|"),
                report.degrees_x[i].to_string(),
                report.degrees_y[i].to_string(),
                report.t_statistics[i].to_string(),
                report.per_direction_p[i].to_string(),
                report.adjusted_p[i].to_string(),
            ]
        })
        .collect();
    let mut body = serde_json::to_value(&report).expect("reports serialize");
    body["labels"] = json!(labels.names());
    Ok(Output {
        json: body,
        csv_header: ["direction", "degree_x", "degree_y", "t", "p", "adjusted_p"]
            .map(String::from)
            .to_vec(),
        csv_rows: rows,
    })
}

fn cmd_simulate(
    c: &Config,
    file: &Path,
    weights: Option<&Path>,
    n: &[usize],
    reps: usize,
) -> CliResult<Output> {
    let (labels, p) = load_sample(c, file, weights)?;
    let opts = mean_options(c);
    let sol = frechet_mean_with(&p, &opts)?;
    let stratum = sol.mean.prune(c.snap_tol).topology();
    let table = sample_sticky_sim(&p, &stratum, n, reps, c.seed, &opts)?;
    let rows = table
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.reps.to_string(),
                r.in_stratum.to_string(),
                r.fraction.to_string(),
                r.nonconverged.to_string(),
            ]
        })
        .collect();
    Ok(Output {
        json: json!({
            "seed": table.seed,
            "stratum": stratum,
            "mean": solution_json(&sol, &labels),
            "rows": table.rows,
            "labels": labels.names(),
        }),
        csv_header: ["n", "reps", "in_stratum", "fraction", "nonconverged"]
            .map(String::from)
            .to_vec(),
        csv_rows: rows,
    })
}
