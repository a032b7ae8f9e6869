//! Command-line front end for the pantograph pipeline.
//!
//! Artifacts are plain files with sorted-key JSON, so identical invocations
//! produce byte-identical outputs. Exit codes: 0 success, 2 certificate
//! refused (K below threshold), 3 certificate inequality failure, 64 bad
//! flags, 65 truncation too shallow, 1 anything else.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pantograph::certificate::{self, CertStatus, DEFAULT_PENTAGON_THRESHOLD};
use pantograph::geom::{pentagon_check, PENTAGON_TOLERANCE};
use pantograph::metric::{self, label_lengths, MetricComplex};
use pantograph::pants::{
    self, build, exhaustion, slice_euler, slice_euler_from_topology, PantsError,
};
use pantograph::surgery::{normalize, trace_to_json};
use pantograph::tree::{self, preset, truncate, validate, CoreTree};

const EXIT_REFUSED: u8 = 2;
const EXIT_FAILED: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_SHALLOW: u8 = 65;

#[derive(Parser)]
#[command(
    name = "pantograph",
    version,
    about = "pants decompositions from core trees, with certified length inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TreeSource {
    /// Read the tree from a JSON file instead of generating a preset.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generator preset: cantor, flute, flute_with_genus, cantor_with_genus.
    #[arg(long, default_value = "cantor")]
    preset: String,
    /// Genus parameter for the genus presets.
    #[arg(long)]
    genus: Option<u32>,
    /// Truncation depth (expansion rounds).
    #[arg(long, default_value_t = 4)]
    depth: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a core tree and write its JSON and DOT renderings.
    Build {
        #[command(flatten)]
        source: TreeSource,
        /// Output JSON path.
        #[arg(long, default_value = "tree.json")]
        out: PathBuf,
        /// Output DOT path.
        #[arg(long, default_value = "tree.dot")]
        dot: PathBuf,
    },
    /// Remove exterior trees (keeping at most one, at the root) and write
    /// the surgery trace.
    Normalize {
        #[command(flatten)]
        source: TreeSource,
        #[arg(long, default_value = "normalized.json")]
        out: PathBuf,
        #[arg(long, default_value = "trace.json")]
        trace: PathBuf,
    },
    /// Build the pants complex and assign cuff lengths.
    Label {
        #[command(flatten)]
        source: TreeSource,
        /// Apply exterior-tree surgery before building.
        #[arg(long)]
        normalize: bool,
        /// Length given to every marked-region cuff.
        #[arg(long, default_value_t = 1.0)]
        tstar_length: f64,
        #[arg(long, default_value = "metric.json")]
        out: PathBuf,
        /// Also write the dual graph of the complex as DOT.
        #[arg(long)]
        dual_dot: Option<PathBuf>,
    },
    /// Report the n-th exhaustion subsurface.
    Slice {
        n: u32,
        #[command(flatten)]
        source: TreeSource,
        /// Read a labeled complex from `label --out` instead of a tree.
        #[arg(long)]
        metric: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        tstar_length: f64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the ideal-pentagon inequality and emit CSV (a, c, d, slack).
    PentagonScan {
        /// Values of the short side a.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.1, 1.5, 2.0, 5.0, 10.0, 20.0])]
        a: Vec<f64>,
        /// Sweep c over (a, a + span].
        #[arg(long, default_value_t = 30.0)]
        span: f64,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the non-wandering inequalities and emit a certificate.
    Certify {
        #[command(flatten)]
        source: TreeSource,
        /// Read a labeled complex instead of generating one.
        #[arg(long)]
        metric: Option<PathBuf>,
        /// Quasiconformal distortion constant.
        #[arg(short = 'K', long = "distortion")]
        k: f64,
        /// Last exhaustion slice to verify.
        #[arg(long)]
        horizon: u32,
        /// Threshold for "sufficiently large" pentagon side a.
        #[arg(long, default_value_t = DEFAULT_PENTAGON_THRESHOLD)]
        pentagon_threshold: f64,
        #[arg(long, default_value_t = 1.0)]
        tstar_length: f64,
        /// Write the certificate JSON here.
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Shallow(String),
    Other(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for CliError {
    fn from(e: E) -> CliError {
        CliError::Other(e.into())
    }
}

fn shallow_from_pants(e: PantsError) -> CliError {
    match e {
        PantsError::TooShallow(_) | PantsError::BadSliceIndex => CliError::Shallow(e.to_string()),
        other => CliError::Other(other.into()),
    }
}

fn load_tree(source: &TreeSource) -> Result<CoreTree, CliError> {
    let tree = match &source.input {
        Some(path) => {
            let data = std::fs::read_to_string(path)?;
            tree::from_json(&data)?
        }
        None => {
            let spec = preset(&source.preset, source.genus)?;
            truncate(spec, source.depth)
        }
    };
    let report = validate(&tree);
    if !report.is_clean() {
        return Err(CliError::Other(anyhow::anyhow!("invalid tree: {report}")));
    }
    Ok(tree)
}

fn label_from_tree(tree: &CoreTree, tstar_length: f64) -> Result<MetricComplex, CliError> {
    let complex = build(tree).map_err(shallow_from_pants)?;
    let defaults: BTreeMap<_, _> = complex.cuffs.keys().map(|&c| (c, tstar_length)).collect();
    Ok(label_lengths(&complex, &defaults)?)
}

fn load_metric(
    metric: &Option<PathBuf>,
    source: &TreeSource,
    tstar_length: f64,
) -> Result<MetricComplex, CliError> {
    match metric {
        Some(path) => {
            let data = std::fs::read_to_string(path)?;
            Ok(metric::from_json(&data)?)
        }
        None => label_from_tree(&load_tree(source)?, tstar_length),
    }
}

fn env_tolerance() -> f64 {
    std::env::var("PANTOGRAPH_TOLERANCE")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(PENTAGON_TOLERANCE)
}

fn write_or_print(out: &Option<PathBuf>, data: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, data)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{data}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Build { source, out, dot } => {
            let tree = load_tree(&source)?;
            std::fs::write(&out, tree::to_json(&tree))?;
            std::fs::write(&dot, tree::to_dot(&tree))?;
            eprintln!("wrote {} and {}", out.display(), dot.display());
            Ok(0)
        }
        Command::Normalize { source, out, trace } => {
            let tree = load_tree(&source)?;
            let (normalized, steps) = normalize(&tree)?;
            std::fs::write(&out, tree::to_json(&normalized))?;
            std::fs::write(&trace, trace_to_json(&steps))?;
            eprintln!(
                "removed {} exterior trees; wrote {} and {}",
                steps.steps.len(),
                out.display(),
                trace.display()
            );
            Ok(0)
        }
        Command::Label {
            source,
            normalize: do_normalize,
            tstar_length,
            out,
            dual_dot,
        } => {
            let mut tree = load_tree(&source)?;
            if do_normalize {
                tree = normalize(&tree)?.0;
            }
            let mc = label_from_tree(&tree, tstar_length)?;
            std::fs::write(&out, metric::to_json(&mc))?;
            eprintln!("wrote {}", out.display());
            if let Some(path) = dual_dot {
                std::fs::write(&path, pants::to_dot(&mc.complex))?;
                eprintln!("wrote {}", path.display());
            }
            Ok(0)
        }
        Command::Slice {
            n,
            source,
            metric,
            tstar_length,
            out,
        } => {
            let mc = load_metric(&metric, &source, tstar_length)?;
            let slice = exhaustion(&mc.complex, n).map_err(shallow_from_pants)?;
            let labels: BTreeMap<String, Option<u64>> = slice
                .frontier
                .iter()
                .map(|c| (c.to_string(), mc.label_index(*c)))
                .collect();
            let report = serde_json::json!({
                "n": slice.n,
                "pieces": slice.pieces.iter().map(|p| p.0).collect::<Vec<_>>(),
                "frontier": slice.frontier.iter().map(|c| c.0).collect::<Vec<_>>(),
                "frontier_labels": labels,
                "euler_characteristic": slice_euler(&mc.complex, &slice),
                "euler_from_topology": slice_euler_from_topology(&mc.complex, &slice),
            });
            write_or_print(&out, &format!("{:#}\n", report))?;
            Ok(0)
        }
        Command::PentagonScan { a, span, step, out } => {
            let tol = env_tolerance();
            let mut csv = String::from("a,c,d,slack\n");
            for &a in &a {
                let mut c = a + step;
                while c <= a + span + 1e-12 {
                    let (d, _) = pentagon_check(a, c)?;
                    let slack = d - (c - a);
                    if slack < -tol {
                        return Err(CliError::Other(anyhow::anyhow!(
                            "pentagon bound failed at a={a}, c={c}: slack {slack}"
                        )));
                    }
                    csv.push_str(&format!("{a},{c},{d},{slack}\n"));
                    c += step;
                }
            }
            write_or_print(&out, &csv)?;
            Ok(0)
        }
        Command::Certify {
            source,
            metric,
            k,
            horizon,
            pentagon_threshold,
            tstar_length,
            json_out,
        } => {
            let mc = load_metric(&metric, &source, tstar_length)?;
            let cert = certificate::verify_non_wandering(&mc, k, horizon, pentagon_threshold)
                .map_err(|e| match e {
                    certificate::CertError::TooShallow(_) => CliError::Shallow(e.to_string()),
                    other => CliError::Other(other.into()),
                })?;
            print!("{}", certificate::report_text(&cert));
            if let Some(path) = json_out {
                std::fs::write(&path, certificate::to_json(&cert))?;
                eprintln!("wrote {}", path.display());
            }
            Ok(match cert.status {
                CertStatus::Valid => 0,
                CertStatus::Refused { .. } => EXIT_REFUSED,
                CertStatus::Failed { .. } => EXIT_FAILED,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Shallow(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_SHALLOW)
        }
        Err(CliError::Other(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
