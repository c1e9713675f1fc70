//! `specgap`: spectral gap analysis, bound checks and extremal searches from
//! the command line. Exit status is 0 on success, 2 on invalid input and 3
//! on numerical failure.

mod input;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use spectral_gap::bounds::{bounds_report_from, construction_bounds, BoundsReport};
use spectral_gap::constructions::ConstructionSpec;
use spectral_gap::search::{self, CorpusSpec, CurveFamily, SearchOptions, SearchRecord};
use spectral_gap::spectral::{self, SpectralResult};
use spectral_gap::two_point::audit_random_sequences;
use spectral_gap::{Graph, GraphMetrics};

use input::InputFormat;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] spectral_gap::Error),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(format!("csv: {e}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Graph6,
}

#[derive(Parser)]
#[command(
    name = "specgap",
    version,
    about = "Normalized Laplacian spectral gap: analysis, bounds and extremal searches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Report format (default: graph6 for construct, csv for gap-curve, json otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance of the power-iteration oracle in `analyze --oracles`.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum, harmonic eigenfunction, relaxation time and lower bounds of one graph.
    Analyze {
        /// graph6 or edge-list file (stdin when absent).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
        input_format: InputFormat,
        /// Also run the Sturm, power-iteration and walk-matrix cross-checks.
        #[arg(long)]
        oracles: bool,
    },
    /// Build a member of a graph family.
    Construct {
        /// double_kite, joined_regular_pair, path, cycle, complete, hypercube or random_connected.
        #[arg(long)]
        family: String,
        /// Comma-separated key=value list, e.g. r=8,s=6.
        #[arg(long, default_value = "")]
        params: String,
    },
    /// Every bound next to λ₁, for an input graph or a family member.
    Bounds {
        #[arg(long, conflicts_with = "family")]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
        input_format: InputFormat,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value = "")]
        params: String,
    },
    /// Exhaustive minimum spectral gap over connected graphs on n vertices.
    Search {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        /// Search every n from 2 up to this.
        #[arg(long)]
        max_n: Option<usize>,
        /// Also count isomorphism classes of connected graphs.
        #[arg(long)]
        count_classes: bool,
    },
    /// λ₁ of every double kite DK(r, s) with 2r + s = n.
    SweepDk {
        #[arg(long)]
        n: usize,
    },
    /// Random checks that endpoint-gap minimizers are two-valued.
    VerifyProp21 {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
    /// Check all four lower bounds over a graph corpus.
    Audit {
        /// Audit the graphs in this file (one graph6 per line) instead of a generated corpus.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
        input_format: InputFormat,
        /// Exhaustive part: every connected labeled graph with n up to this.
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        /// Number of random connected graphs.
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        random_min_n: usize,
        #[arg(long, default_value_t = 50)]
        random_max_n: usize,
    },
    /// λ₁·n³/54 along a family.
    GapCurve {
        /// double_kite, path or cycle.
        #[arg(long, default_value = "double_kite")]
        family: String,
        /// Use DK(r, s) with r nearest n/3 instead of the best of a full sweep.
        #[arg(long)]
        balanced: bool,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
    },
}

#[derive(Serialize)]
struct Oracles {
    sturm_lambda1: f64,
    power_lambda1: f64,
    walk_second_largest: f64,
    walk_residual: f64,
    max_disagreement: f64,
}

#[derive(Serialize)]
struct AnalyzeReport {
    n: usize,
    m: usize,
    #[serde(flatten)]
    metrics: GraphMetrics,
    #[serde(flatten)]
    spectral: SpectralResult,
    bounds: BoundsReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracles: Option<Oracles>,
}

#[derive(Serialize)]
struct SummaryRow {
    n: usize,
    m: usize,
    vol: usize,
    diam: usize,
    lambda1: f64,
    relaxation_time: f64,
    lo: f64,
    chung: f64,
    improved: f64,
    harmonic: f64,
    min_slack: f64,
}

impl SummaryRow {
    fn new(g: &Graph, spectral: &SpectralResult, bounds: &BoundsReport) -> Self {
        SummaryRow {
            n: g.vertex_count(),
            m: g.edge_count(),
            vol: g.volume(),
            diam: g.diameter().unwrap_or(0),
            lambda1: spectral.lambda1,
            relaxation_time: spectral.relaxation_time,
            lo: bounds.landau_odlyzko,
            chung: bounds.chung,
            improved: bounds.improved,
            harmonic: bounds.harmonic,
            min_slack: bounds.min_lower_slack(),
        }
    }
}

#[derive(Serialize)]
struct SearchReport {
    records: Vec<SearchRecord>,
    /// Consecutive sizes where the minimum grew; reported, not expected.
    monotonicity_breaks: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct SearchRow {
    n: usize,
    alpha: f64,
    graphs_scanned: u64,
    distinct_classes: Option<usize>,
    minimizers: String,
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(format!("json: {e}")))
}

fn csv_rows<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn unsupported(verb: &str, format: Format) -> CliError {
    CliError::Usage(format!("{verb} has no {format:?} output").to_lowercase())
}

fn analyze(g: &Graph, with_oracles: bool, tol: f64) -> Result<AnalyzeReport, CliError> {
    let spectral = spectral::spectral_gap(g)?;
    let bounds = bounds_report_from(g, &spectral)?;
    let oracles = if with_oracles {
        let sturm = spectral::sturm_eigen_oracle(&spectral::normalized_laplacian(g)?, 1)?;
        let power = spectral::transition_gap_oracle(g, tol)?;
        let walk = spectral::walk_spectrum_check(g, &spectral);
        let walk_gap = 1.0 - walk.second_largest();
        let max_disagreement =
            [sturm, power, walk_gap].iter().map(|x| (x - spectral.lambda1).abs()).fold(0.0, f64::max);
        Some(Oracles {
            sturm_lambda1: sturm,
            power_lambda1: power,
            walk_second_largest: walk.second_largest(),
            walk_residual: walk.max_residual,
            max_disagreement,
        })
    } else {
        None
    };
    Ok(AnalyzeReport {
        n: g.vertex_count(),
        m: g.edge_count(),
        metrics: g.metrics(),
        spectral,
        bounds,
        oracles,
    })
}

fn search_sizes(
    n: Option<usize>,
    n_list: Option<Vec<usize>>,
    max_n: Option<usize>,
) -> Result<Vec<usize>, CliError> {
    match (n, n_list, max_n) {
        (Some(n), None, None) => Ok(vec![n]),
        (None, Some(list), None) => Ok(list),
        (None, None, Some(max)) => Ok((2..=max).collect()),
        _ => Err(CliError::Usage("give exactly one of --n, --n-list, --max-n".into())),
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let workers = cli.workers;
    match cli.command {
        Command::Analyze { input, input_format, oracles } => {
            let g = input::parse_single(&input::read_text(input.as_deref())?, input_format)?;
            let report = analyze(&g, oracles, cli.tol)?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => json(&report),
                Format::Csv => csv_rows([SummaryRow::new(&g, &report.spectral, &report.bounds)]),
                f => Err(unsupported("analyze", f)),
            }
        }
        Command::Construct { family, params } => {
            let g = ConstructionSpec::parse(&family, &params, cli.seed)?.build()?;
            match cli.format.unwrap_or(Format::Graph6) {
                Format::Graph6 => Ok(g.to_graph6()?),
                Format::Json => {
                    #[derive(Serialize)]
                    struct Constructed {
                        family: String,
                        params: String,
                        n: usize,
                        m: usize,
                        #[serde(skip_serializing_if = "Option::is_none")]
                        graph6: Option<String>,
                        edges: Vec<(usize, usize)>,
                    }
                    json(&Constructed {
                        family,
                        params,
                        n: g.vertex_count(),
                        m: g.edge_count(),
                        graph6: g.to_graph6().ok(),
                        edges: g.edges().collect(),
                    })
                }
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Edge {
                        u: usize,
                        v: usize,
                    }
                    csv_rows(g.edges().map(|(u, v)| Edge { u, v }))
                }
            }
        }
        Command::Bounds { input, input_format, family, params } => {
            let (g, spectral, report) = match family {
                Some(family) => construction_bounds(&ConstructionSpec::parse(&family, &params, cli.seed)?)?,
                None => {
                    let g = input::parse_single(&input::read_text(input.as_deref())?, input_format)?;
                    let spectral = spectral::spectral_gap(&g)?;
                    let report = bounds_report_from(&g, &spectral)?;
                    (g, spectral, report)
                }
            };
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => json(&report),
                Format::Csv => csv_rows([SummaryRow::new(&g, &spectral, &report)]),
                f => Err(unsupported("bounds", f)),
            }
        }
        Command::Search { n, n_list, max_n, count_classes } => {
            let sizes = search_sizes(n, n_list, max_n)?;
            let options = SearchOptions { workers, count_classes };
            let records = sizes.iter().map(|&n| search::alpha(n, options)).collect::<Result<Vec<_>, _>>()?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => json(&SearchReport {
                    monotonicity_breaks: search::monotonicity_breaks(&records),
                    records,
                }),
                Format::Csv => csv_rows(records.iter().map(|r| SearchRow {
                    n: r.n,
                    alpha: r.alpha,
                    graphs_scanned: r.graphs_scanned,
                    distinct_classes: r.distinct_classes,
                    minimizers: r.minimizers.iter().map(|m| m.graph6.as_str()).collect::<Vec<_>>().join(" "),
                })),
                f => Err(unsupported("search", f)),
            }
        }
        Command::SweepDk { n } => {
            let sweep = search::sweep_double_kite(n, workers)?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => json(&sweep),
                Format::Csv => csv_rows(&sweep.rows),
                f => Err(unsupported("sweep-dk", f)),
            }
        }
        Command::VerifyProp21 { trials, max_n } => {
            let audit = audit_random_sequences(trials, max_n, cli.seed)?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => json(&audit),
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row {
                        trials: usize,
                        passed: usize,
                        failed: usize,
                        worst_objective_gap: f64,
                        worst_two_valued_deviation: f64,
                        worst_constraint_error: f64,
                        min_interior_margin: f64,
                    }
                    csv_rows([Row {
                        trials: audit.trials,
                        passed: audit.passed,
                        failed: audit.failed,
                        worst_objective_gap: audit.worst_objective_gap,
                        worst_two_valued_deviation: audit.worst_two_valued_deviation,
                        worst_constraint_error: audit.worst_constraint_error,
                        min_interior_margin: audit.min_interior_margin,
                    }])
                }
                f => Err(unsupported("verify-prop21", f)),
            }
        }
        Command::Audit { input, input_format, max_n, trials, random_min_n, random_max_n } => {
            let format = cli.format.unwrap_or(Format::Json);
            let keep_rows = format == Format::Csv;
            let report = match input {
                Some(path) => {
                    let graphs = input::parse_graphs(&input::read_text(Some(&path))?, input_format)?;
                    search::audit_graphs(&graphs, keep_rows, workers)?
                }
                None => {
                    let spec = CorpusSpec {
                        exhaustive_max_n: max_n,
                        random_count: trials,
                        random_min_n,
                        random_max_n,
                        seed: cli.seed,
                    };
                    search::audit_corpus(&spec, keep_rows, workers)?
                }
            };
            match format {
                Format::Json => json(&report),
                Format::Csv => csv_rows(&report.rows),
                f => Err(unsupported("audit", f)),
            }
        }
        Command::GapCurve { family, balanced, n_list } => {
            let family = match (family.as_str(), balanced) {
                ("double_kite", true) => CurveFamily::BalancedDoubleKite,
                ("double_kite", false) => CurveFamily::BestDoubleKite,
                ("path", _) => CurveFamily::Path,
                ("cycle", _) => CurveFamily::Cycle,
                (other, _) => return Err(CliError::Usage(format!("gap-curve has no family {other:?}"))),
            };
            let points = search::gap_curve(family, &n_list, workers)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => csv_rows(&points),
                Format::Json => json(&points),
                f => Err(unsupported("gap-curve", f)),
            }
        }
    }
}

fn write_output(path: Option<&Path>, mut text: String) -> Result<(), CliError> {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(p.display().to_string(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    match run(cli).and_then(|text| write_output(output.as_deref(), text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("specgap: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
