//! `skrates`: exact secret-key rates for hypergraphical sources.
//!
//! Exit status: 0 on success, 1 when the request is well-formed but the
//! domain rejects it (e.g. `pack` on a non-PIN source), 2 when an input
//! cannot be read or parsed.

mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use skrates::bounds::{generate_certificates, OuterRegion, PinCurve};
use skrates::capacity::capacity;
use skrates::entropy::EntropyOracle;
use skrates::greedy::{crossing_weights, greedy_mu, greedy_order};
use skrates::mmi::mmi;
use skrates::protocol::{build_tree_protocol, measured_rates, minimal_blocklength, verify_protocol};
use skrates::rational::{self, Rational};
use skrates::tree_packing::{max_packing, packing_to_rates, verify_packing};
use skrates::{load_source, Caps, HypergraphSource, Partition, RatePoint, VertexSet};

/// Longest curve the `curve` subcommand will tabulate.
const MAX_CURVE_ROWS: usize = 100_000;

#[derive(Parser)]
#[command(name = "skrates", version, about = "Exact secret-key capacity, discussion-rate bounds and tree packings")]
struct Cli {
    /// Worker threads for the enumerations (output does not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format; `curve` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct SourceArg {
    /// Source description (JSON).
    #[arg(long)]
    source: PathBuf,
}

#[derive(Args)]
struct SetArg {
    /// Comma-separated vertex ids; defaults to all vertices.
    #[arg(long, value_delimiter = ',')]
    set: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// H(Z_B) and H(Z_B | Z_rest) for one set, or for every nonempty set.
    Entropy {
        #[command(flatten)]
        source: SourceArg,
        #[command(flatten)]
        set: SetArg,
    },
    /// Multivariate mutual information, optimal and fundamental partitions.
    Mmi {
        #[command(flatten)]
        source: SourceArg,
        #[command(flatten)]
        set: SetArg,
    },
    /// Joint entropy, omniscience rate and secrecy capacity.
    Capacity {
        #[command(flatten)]
        source: SourceArg,
    },
    /// Converse certificates; with --point, a membership check against them.
    Bounds {
        #[command(flatten)]
        source: SourceArg,
        /// Rate point as JSON text or a path to a JSON file: {"r_K": "1", "r": {"1": "0", ...}}.
        #[arg(long)]
        point: Option<String>,
    },
    /// Outer bound on the key rate against total discussion rate (and the exact curve for PINs).
    Curve {
        #[command(flatten)]
        source: SourceArg,
        #[arg(long)]
        r_max: String,
        #[arg(long)]
        step: String,
    },
    /// Optimal fractional spanning tree packing of a PIN.
    Pack {
        #[command(flatten)]
        source: SourceArg,
    },
    /// Builds the XOR protocol of the optimal packing and verifies it.
    Simulate {
        #[command(flatten)]
        source: SourceArg,
        /// Blocklength; defaults to the smallest one giving integral bit counts.
        #[arg(long)]
        n: Option<u64>,
        /// Also enumerate every edge-bit assignment.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Greedy optimal cover for declared weights, or for the crossing instance of a source.
    Greedy {
        /// Weights as a JSON object {"label": "q", ...}; key order is the canonical order.
        #[arg(long, conflicts_with = "source")]
        weights: Option<String>,
        #[arg(long)]
        source: Option<PathBuf>,
        /// Partition of the vertices as JSON, e.g. [["1"],["2","3"]]; defaults to singletons.
        #[arg(long, requires = "source")]
        partition: Option<String>,
    },
    /// Consolidated report for one source.
    Analyze {
        #[command(flatten)]
        source: SourceArg,
        /// Include the verified tree protocol (PIN sources only).
        #[arg(long)]
        simulate: bool,
    },
}

enum CliError {
    Input(String),
    Domain(String),
}

impl From<skrates::Error> for CliError {
    fn from(e: skrates::Error) -> Self {
        if e.is_parse() {
            CliError::Input(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> CliResult<HypergraphSource> {
    load_source(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// JSON given inline, or the contents of the named file.
fn json_arg(text: &str) -> CliResult<String> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(text.to_string())
    } else {
        read(Path::new(text))
    }
}

fn subset(source: &HypergraphSource, set: &SetArg) -> CliResult<VertexSet> {
    match &set.set {
        None => Ok(source.all_vertices()),
        Some(ids) => source.vertex_set(ids).map_err(input),
    }
}

fn parse_rational(text: &str, what: &str) -> CliResult<Rational> {
    rational::parse(text).map_err(|e| CliError::Input(format!("--{what}: {e}")))
}

enum Output {
    Json(Value),
    Csv(Vec<Vec<String>>),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = Caps::from_env().map_err(CliError::from).and_then(|caps| run(&cli, &caps));
    match result.and_then(emit) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Output) -> CliResult<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match out {
        Output::Json(v) => {
            let text = serde_json::to_string_pretty(&v).expect("JSON values serialize");
            writeln!(lock, "{text}").or_else(write_failed)
        }
        Output::Csv(rows) => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(lock);
            for row in rows {
                if let Err(e) = w.write_record(&row) {
                    return match e.into_kind() {
                        csv::ErrorKind::Io(e) => write_failed(e),
                        other => Err(CliError::Domain(format!("{other:?}"))),
                    };
                }
            }
            w.flush().or_else(write_failed)
        }
    }
}

// A reader that hangs up early (`| head`) is not an error.
fn write_failed(e: std::io::Error) -> CliResult<()> {
    match e.kind() {
        std::io::ErrorKind::BrokenPipe => Ok(()),
        _ => Err(CliError::Domain(e.to_string())),
    }
}

fn run(cli: &Cli, caps: &Caps) -> CliResult<Output> {
    let default = if matches!(cli.command, Command::Curve { .. }) { Format::Csv } else { Format::Json };
    let format = cli.output.unwrap_or(default);
    let csv_unavailable = |name: &str| Err(CliError::Input(format!("csv output is not available for `{name}`")));

    match &cli.command {
        Command::Entropy { source, set } => {
            let s = load(&source.source)?;
            let sets = match &set.set {
                Some(_) => vec![subset(&s, set)?],
                None => s.all_vertices().subsets_by_size(1),
            };
            let oracle = EntropyOracle::new(&s);
            let mut entries = Vec::with_capacity(sets.len());
            for b in sets {
                entries.push((b, oracle.entropy(b)?, oracle.cond_entropy(b)?));
            }
            Ok(match format {
                Format::Json => Output::Json(report::entropy(&s, &entries)),
                Format::Csv => Output::Csv(report::entropy_csv(&s, &entries)),
            })
        }
        Command::Mmi { source, set } => {
            let s = load(&source.source)?;
            let b = subset(&s, set)?;
            let res = mmi(&s, b, caps)?;
            Ok(match format {
                Format::Json => Output::Json(report::mmi(&s, b, &res)),
                Format::Csv => Output::Csv(report::mmi_csv(&s, &res)),
            })
        }
        Command::Capacity { source } => {
            if format == Format::Csv {
                return csv_unavailable("capacity");
            }
            let s = load(&source.source)?;
            Ok(Output::Json(report::capacity(&s, &capacity(&s, caps)?)))
        }
        Command::Bounds { source, point } => {
            let s = load(&source.source)?;
            let point = match point {
                Some(text) => Some(RatePoint::from_json(&s, &json_arg(text)?).map_err(|e| match e {
                    skrates::Error::Parse(_) | skrates::Error::UnknownVertex(_) | skrates::Error::InvalidArgument(_) => {
                        CliError::Input(format!("--point: {e}"))
                    }
                    other => other.into(),
                })?),
                None => None,
            };
            let region = OuterRegion::new(&s, caps)?;
            let query = point.as_ref().map(|p| region.check(p)).transpose()?;
            Ok(match format {
                Format::Json => Output::Json(report::bounds(&s, &region, query.as_ref())),
                Format::Csv => Output::Csv(report::bounds_csv(&s, &region, query.as_ref())),
            })
        }
        Command::Curve { source, r_max, step } => {
            let s = load(&source.source)?;
            let r_max = parse_rational(r_max, "r-max")?;
            let step = parse_rational(step, "step")?;
            if step <= rational::zero() || r_max < rational::zero() {
                return Err(CliError::Input("--step must be positive and --r-max nonnegative".into()));
            }
            let mut samples = Vec::new();
            let mut r = rational::zero();
            while r <= r_max {
                if samples.len() == MAX_CURVE_ROWS {
                    return Err(CliError::Domain(format!("more than {MAX_CURVE_ROWS} curve rows requested")));
                }
                samples.push(r.clone());
                r += &step;
            }
            let region = OuterRegion::new(&s, caps)?;
            let pin = if s.is_pin() && s.num_vertices() >= 3 { Some(PinCurve::new(&s, caps)?) } else { None };
            let mut rows = Vec::with_capacity(samples.len());
            for r in samples {
                let bound = region.max_key_rate(&r)?;
                let exact = pin.as_ref().map(|c| c.value(&r));
                if let Some(v) = &exact {
                    if *v != bound {
                        return Err(CliError::Domain(format!(
                            "outer bound {} differs from the PIN curve {} at R = {}",
                            rational::format(&bound),
                            rational::format(v),
                            rational::format(&r)
                        )));
                    }
                }
                rows.push((r, bound, exact));
            }
            Ok(match format {
                Format::Json => Output::Json(report::curve(&rows, pin.as_ref())),
                Format::Csv => Output::Csv(report::curve_csv(&rows, pin.is_some())),
            })
        }
        Command::Pack { source } => {
            if format == Format::Csv {
                return csv_unavailable("pack");
            }
            let s = load(&source.source)?;
            let (value, packing) = max_packing(&s, caps)?;
            let check = verify_packing(&s, &packing)?;
            Ok(Output::Json(report::pack(&s, &value, &packing, &packing_to_rates(&packing), &check)))
        }
        Command::Simulate { source, n, exhaustive } => {
            if format == Format::Csv {
                return csv_unavailable("simulate");
            }
            let s = load(&source.source)?;
            let (_, packing) = max_packing(&s, caps)?;
            let n = match n {
                Some(n) => *n,
                None => minimal_blocklength(&s, &packing)?,
            };
            let protocol = build_tree_protocol(&s, &packing, n)?;
            let secrecy = verify_protocol(&s, &protocol, *exhaustive, caps)?;
            Ok(Output::Json(report::simulate(&s, &protocol, &secrecy, &measured_rates(&protocol))))
        }
        Command::Greedy { weights, source, partition } => {
            if format == Format::Csv {
                return csv_unavailable("greedy");
            }
            let (labels, w, context) = match (weights, source) {
                (Some(text), _) => {
                    let (labels, w) = report::parse_weights(&json_arg(text)?)?;
                    (labels, w, None)
                }
                (None, Some(path)) => {
                    let s = load(path)?;
                    let p = match partition {
                        Some(text) => {
                            let blocks: Vec<Vec<String>> =
                                serde_json::from_str(&json_arg(text)?).map_err(|e| input(format!("--partition: {e}")))?;
                            s.partition_from_ids(&blocks).map_err(input)?
                        }
                        None => Partition::singletons(s.all_vertices())?,
                    };
                    let inst = crossing_weights(&s, &p)?;
                    let alpha = skrates::bounds::crossing_ratio(&s, &p)?;
                    let ctx = report::greedy_context(&s, &p, &alpha, &inst.max_edge_weight());
                    (inst.labels, inst.weights, Some(ctx))
                }
                (None, None) => return Err(CliError::Input("give --weights or --source".into())),
            };
            let mu = greedy_mu(&w)?;
            Ok(Output::Json(report::greedy(&labels, &w, &greedy_order(&w), &mu, context)))
        }
        Command::Analyze { source, simulate } => {
            if format == Format::Csv {
                return csv_unavailable("analyze");
            }
            let s = load(&source.source)?;
            analyze(&s, *simulate, caps).map(Output::Json)
        }
    }
}

fn analyze(s: &HypergraphSource, simulate: bool, caps: &Caps) -> CliResult<Value> {
    let cap = capacity(s, caps)?;
    let region = OuterRegion::new(s, caps)?;
    let certificates = generate_certificates(s, caps)?;
    let least_total = region.min_total_rate(&cap.capacity)?;
    let tree = skrates::bounds::TreePinRegion::new(s).ok();
    let curve = if s.is_pin() && s.num_vertices() >= 3 { Some(PinCurve::new(s, caps)?) } else { None };
    let packing = if s.is_pin() { Some(max_packing(s, caps)?) } else { None };
    if let Some((value, _)) = &packing {
        if *value != cap.capacity {
            return Err(CliError::Domain(format!(
                "packing value {} differs from the capacity {}",
                rational::format(value),
                rational::format(&cap.capacity)
            )));
        }
    }
    let simulation = match (&packing, simulate) {
        (Some((_, packing)), true) => {
            let n = minimal_blocklength(s, packing)?;
            let protocol = build_tree_protocol(s, packing, n)?;
            let secrecy = verify_protocol(s, &protocol, false, caps)?;
            Some((protocol, secrecy))
        }
        (None, true) => return Err(CliError::Domain("simulation requires a PIN source".into())),
        _ => None,
    };
    Ok(report::analyze(report::Analysis {
        source: s,
        capacity: &cap,
        certificates: &certificates,
        min_total_rate_at_capacity: least_total.as_ref(),
        tree: tree.as_ref(),
        curve: curve.as_ref(),
        packing: packing.as_ref().map(|(_, p)| p),
        simulation: simulation.as_ref(),
    }))
}
