//! `indhom` — build graphs from family specs, compute exact homology
//! of their independence complexes, compare against catalogued
//! predictions, and run resumable verification sweeps and torsion
//! hunts.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use indhom::{
    hunt_torsion, load_log, predict, report_emit, run_pipeline, verify_sweep, FamilySpec, Graph,
    HuntSpec, PipelineOptions, PredictOptions, ReportFormat, SweepOptions, SweepSpec,
};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "indhom",
    version,
    about = "Exact integral homology of independence complexes, with closed-form verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph from a family spec and emit its JSON form.
    Build {
        /// Family spec, e.g. `cycle-x-complete:k=9,n=3` or `W:k=5,n=3`.
        spec: String,
        /// Write to a file instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Compute reduced integral homology of the independence complex.
    Homology {
        /// Family spec, or path to a graph JSON file produced by `build`.
        input: String,
        /// Skip the homotopy-preserving reductions.
        #[arg(long)]
        no_reduce: bool,
        /// Enumerate faces only up to this dimension; homology is then
        /// reported for degrees strictly below it.
        #[arg(long, value_name = "D")]
        max_dim: Option<usize>,
        /// Face-count budget for enumeration.
        #[arg(long, value_name = "N")]
        max_faces: Option<u64>,
        /// Wall-clock budget in milliseconds.
        #[arg(long, value_name = "MS")]
        max_millis: Option<u64>,
    },
    /// Print the catalogued wedge-of-spheres prediction for a spec.
    Predict {
        /// Family spec, e.g. `path-x-complete:k=5,n=3`.
        spec: String,
        /// Permit conjectural formulas and out-of-range extrapolation.
        #[arg(long)]
        allow_conjecture: bool,
    },
    /// Run a verification sweep described by a JSON file.
    Verify {
        /// Sweep description: `{"families": [{"template": ..., "k": [a,b], ...}], "options": {...}}`.
        #[arg(long, value_name = "FILE")]
        sweep: PathBuf,
        /// Append results here (line-delimited JSON); existing keys are
        /// skipped, so an interrupted sweep resumes.
        #[arg(long, value_name = "FILE")]
        log: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
        /// Report format for stdout: json, csv, or text.
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Hunt for torsion in I(C_k × K_n) over parameter ranges
    /// (k divisible by 3 is skipped; those rows have exact formulas).
    HuntTorsion {
        /// Inclusive cycle-length range, e.g. `7..12`.
        #[arg(long, value_name = "A..B")]
        k_range: String,
        /// Inclusive complete-factor range, e.g. `3..5`.
        #[arg(long, value_name = "C..D")]
        n_range: String,
        /// Append results here (resumable, like `verify --log`).
        #[arg(long, value_name = "FILE")]
        log: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
        /// Face-count budget per instance.
        #[arg(long, value_name = "N")]
        max_faces: Option<u64>,
        /// Wall-clock budget per instance, in milliseconds.
        #[arg(long, value_name = "MS")]
        max_millis: Option<u64>,
        /// Report format for stdout: json, csv, or text.
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Render a report from a result log.
    Report {
        #[arg(long, value_name = "FILE")]
        log: PathBuf,
        /// json, csv, or text.
        #[arg(long, default_value = "text")]
        format: String,
    },
}

fn load_input_graph(input: &str) -> Result<Graph> {
    let path = Path::new(input);
    if path.exists() && path.is_file() {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(Graph::from_json_str(&text)?);
    }
    if input.ends_with(".json") {
        bail!("`{input}` looks like a file path but does not exist");
    }
    Ok(FamilySpec::parse(input)?.build()?)
}

fn parse_range(text: &str) -> Result<[u32; 2]> {
    let (a, b) = text
        .split_once("..")
        .with_context(|| format!("range `{text}` must look like `A..B`"))?;
    let lo: u32 = a
        .trim()
        .parse()
        .with_context(|| format!("bad range start `{a}`"))?;
    let hi: u32 = b
        .trim()
        .parse()
        .with_context(|| format!("bad range end `{b}`"))?;
    if lo > hi {
        bail!("range `{text}` is empty (start exceeds end)");
    }
    Ok([lo, hi])
}

fn install_pool(jobs: Option<usize>) -> Result<Option<rayon::ThreadPool>> {
    match jobs {
        None => Ok(None),
        Some(n) => {
            if n == 0 {
                bail!("--jobs must be at least 1");
            }
            Ok(Some(
                rayon::ThreadPoolBuilder::new().num_threads(n).build()?,
            ))
        }
    }
}

fn with_pool<T: Send>(
    pool: &Option<rayon::ThreadPool>,
    f: impl FnOnce() -> indhom::Result<T> + Send,
) -> indhom::Result<T> {
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Build { spec, out } => {
            let graph = FamilySpec::parse(&spec)?.build()?;
            let json = graph.to_json_string();
            match out {
                Some(path) => {
                    std::fs::write(&path, json + "\n")
                        .with_context(|| format!("writing {}", path.display()))?;
                    eprintln!(
                        "wrote {} ({} vertices, {} edges)",
                        path.display(),
                        graph.vertex_count(),
                        graph.edge_count()
                    );
                }
                None => println!("{json}"),
            }
        }
        Command::Homology {
            input,
            no_reduce,
            max_dim,
            max_faces,
            max_millis,
        } => {
            let graph = load_input_graph(&input)?;
            let defaults = PipelineOptions::default();
            let options = PipelineOptions {
                reduce: !no_reduce,
                max_dim,
                max_faces: max_faces.unwrap_or(defaults.max_faces),
                max_bytes: defaults.max_bytes,
                max_millis,
            };
            let report = run_pipeline(&graph, &options)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            eprintln!("H*: {}", report.profile);
        }
        Command::Predict {
            spec,
            allow_conjecture,
        } => {
            let parsed = FamilySpec::parse(&spec)?;
            let prediction = predict(&parsed, &PredictOptions { allow_conjecture })?;
            let doc = serde_json::json!({
                "spec": parsed.text(),
                "prediction": prediction,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
            eprintln!(
                "I({}) ~ {} [{}]",
                parsed.text(),
                prediction.profile,
                prediction.rule
            );
        }
        Command::Verify {
            sweep,
            log,
            jobs,
            format,
        } => {
            let format: ReportFormat = format.parse()?;
            let text = std::fs::read_to_string(&sweep)
                .with_context(|| format!("reading {}", sweep.display()))?;
            let sweep = SweepSpec::from_json(&text)?;
            let pool = install_pool(jobs)?;
            let records = with_pool(&pool, || verify_sweep(&sweep, log.as_deref()))?;
            print!("{}", report_emit(&records, format)?);
        }
        Command::HuntTorsion {
            k_range,
            n_range,
            log,
            jobs,
            max_faces,
            max_millis,
            format,
        } => {
            let format: ReportFormat = format.parse()?;
            let mut options = SweepOptions::default();
            if let Some(f) = max_faces {
                options.max_faces = f;
            }
            if max_millis.is_some() {
                options.max_millis = max_millis;
            }
            let hunt = HuntSpec {
                k_range: parse_range(&k_range)?,
                n_range: parse_range(&n_range)?,
                options,
            };
            let pool = install_pool(jobs)?;
            let records = with_pool(&pool, || hunt_torsion(&hunt, log.as_deref()))?;
            let torsion = records.iter().filter(|r| r.torsion_found).count();
            let violations = records
                .iter()
                .filter(|r| r.window_violation == Some(true))
                .count();
            print!("{}", report_emit(&records, format)?);
            eprintln!(
                "hunted {} instance(s): {torsion} with torsion, {violations} window violation(s)",
                records.len()
            );
        }
        Command::Report { log, format } => {
            let format: ReportFormat = format.parse()?;
            let records = load_log(&log)?;
            print!("{}", report_emit(&records, format)?);
        }
    }
    Ok(())
}
