//! The `contrip` command line.
//!
//! Subcommands: `score`, `ingest`, `sweep`, `differentiate`. Exit status is
//! 0 on success, 1 for usage errors, 2 for domain errors and 3 for I/O
//! errors. Diagnostics go to the error stream only.

pub mod config;
pub mod reviews;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::consensus::{aggregate_items, MadConsensus, Strictness};
use crate::exact::Millis;
use crate::experiments::{
    decimal_range, differentiation_report, differentiation_report_approx, emit_sweep_csv,
    evaluate_row, run_sweep, sweep_records, Panel, SweepMode, SweepSpec,
};
use crate::score::{Scaling, Weights};
use crate::Error;

pub use config::{CliConfig, ConfigFile, OutputFormat, Overrides, CONFIG_ENV};
use reviews::{parse_reviews, ReviewsError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Io(m) => m,
        }
    }

    fn io(context: impl std::fmt::Display, e: io::Error) -> Self {
        CliError::Io(format!("{context}: {e}"))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

fn stdout_error(e: io::Error) -> CliError {
    CliError::io("writing output", e)
}

#[derive(Debug, Parser)]
#[command(name = "contrip", version, about = "Consensus-fused review scores")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score one (rating, consensus) pair.
    Score(ScoreArgs),
    /// Aggregate a reviews CSV per item and score each item.
    Ingest(IngestArgs),
    /// Write a sweep CSV for a standard panel or a custom grid.
    Sweep(SweepArgs),
    /// Count distinct scores over a rating x consensus grid.
    Differentiate(DifferentiateArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// `key = value` config file (defaults to $CONTRIP_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    beta: Option<f64>,
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Rescale raw scores onto [1, 5] (default).
    #[arg(long, global = true, overrides_with = "no_scale")]
    scale: bool,
    /// Report raw scores only.
    #[arg(long, global = true)]
    no_scale: bool,
    /// csv, json or text.
    #[arg(long, global = true, value_parser = |s: &str| s.parse::<OutputFormat>())]
    format: Option<OutputFormat>,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        let scaling = match (self.scale, self.no_scale) {
            (_, true) => Some(Scaling::Off),
            (true, false) => Some(Scaling::On),
            _ => None,
        };
        Overrides {
            alpha: self.alpha,
            beta: self.beta,
            delta: self.delta,
            scaling,
            format: self.format,
            strictness: None,
        }
    }
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[arg(long, allow_negative_numbers = true)]
    rating: f64,
    #[arg(long, allow_negative_numbers = true)]
    consensus: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct IngestArgs {
    /// Reviews CSV with header `item_id,rating,polarity`.
    path: PathBuf,
    /// Skip malformed rows instead of aborting.
    #[arg(long)]
    lenient: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Standard panel A, B, C or D.
    #[arg(long, conflicts_with_all = ["mode", "fixed", "grid"])]
    panel: Option<Panel>,
    /// vary-consensus or vary-rating, for a custom sweep.
    #[arg(long, requires_all = ["fixed", "grid"])]
    mode: Option<SweepMode>,
    /// Held-fixed values: comma list, `start:step:end` ranges allowed.
    #[arg(long)]
    fixed: Option<String>,
    /// Varied-axis values: comma list, `start:step:end` ranges allowed.
    #[arg(long)]
    grid: Option<String>,
    /// Destination file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct DifferentiateArgs {
    /// Rating grid (default 1.0:0.1:5.0).
    #[arg(long)]
    ratings: Option<String>,
    /// Consensus values (default 0:0.2:1).
    #[arg(long)]
    consensus_values: Option<String>,
    /// Use floating comparison with this tolerance instead of exact
    /// three-decimal equality.
    #[arg(long)]
    epsilon: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

/// Parses `0,0.5,1` or `1:0.1:5` (or a mix) into values.
pub fn parse_value_list(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |token: &str| CliError::Usage(format!("{flag}: cannot parse {token:?}"));
    let mut values = Vec::new();
    for token in text.split(',').map(str::trim) {
        let parts: Vec<&str> = token.split(':').collect();
        match parts[..] {
            [single] => values.push(single.parse::<f64>().map_err(|_| bad(token))?),
            [start, step, end] => {
                let millis = |t: &str| t.parse::<Millis>().map_err(|_| bad(token));
                let range = decimal_range(millis(start)?, millis(step)?, millis(end)?)
                    .map_err(|e| CliError::Usage(format!("{flag}: {e}")))?;
                values.extend(range);
            }
            _ => return Err(bad(token)),
        }
    }
    Ok(values)
}

fn load_config(common: &CommonArgs, env_config: Option<&OsString>) -> Result<CliConfig, CliError> {
    let path = common
        .config
        .clone()
        .or_else(|| env_config.filter(|p| !p.is_empty()).map(PathBuf::from));
    let file = match path {
        Some(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| CliError::io(format!("reading config {}", path.display()), e))?;
            ConfigFile::parse(&text)?
        }
        None => ConfigFile::default(),
    };
    CliConfig::resolve(&file, &common.overrides())
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(
    args: I,
    env_config: Option<OsString>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(cli, env_config.as_ref(), out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn dispatch(
    cli: Cli,
    env_config: Option<&OsString>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    match cli.command {
        Command::Score(args) => {
            let config = load_config(&args.common, env_config)?;
            cmd_score(args.rating, args.consensus, &config, out)
        }
        Command::Ingest(args) => {
            let mut config = load_config(&args.common, env_config)?;
            if args.lenient {
                config.strictness = Strictness::Lenient;
            }
            cmd_ingest(&args.path, &config, out, err)
        }
        Command::Sweep(args) => {
            let config = load_config(&args.common, env_config)?;
            let spec = match (args.panel, args.mode) {
                (Some(panel), _) => panel.spec(),
                (None, Some(mode)) => {
                    let fixed = parse_value_list("--fixed", args.fixed.as_deref().unwrap_or(""))?;
                    let grid = parse_value_list("--grid", args.grid.as_deref().unwrap_or(""))?;
                    SweepSpec::new("custom", mode, fixed, grid, config.scaling, config.weights)?
                }
                (None, None) => {
                    return Err(CliError::Usage(
                        "sweep needs --panel or --mode with --fixed and --grid".into(),
                    ))
                }
            };
            cmd_sweep(&spec, args.out.as_deref(), &config, out)
        }
        Command::Differentiate(args) => {
            let config = load_config(&args.common, env_config)?;
            let mut spec = Panel::A.spec();
            spec.weights = config.weights;
            if args.ratings.is_some() || args.consensus_values.is_some() {
                if let Some(r) = &args.ratings {
                    spec.grid = parse_value_list("--ratings", r)?;
                }
                if let Some(c) = &args.consensus_values {
                    spec.fixed_values = parse_value_list("--consensus-values", c)?;
                }
                spec.label = "custom".into();
                spec.reference = None;
            }
            if config.weights != Weights::default() {
                spec.reference = None;
            }
            cmd_differentiate(&spec, args.epsilon, &config, out)
        }
    }
}

fn domain_flag(flag: &str, e: Error) -> CliError {
    CliError::Domain(format!("{flag}: {e}"))
}

#[derive(Serialize)]
struct ScoreRecord {
    x: Millis,
    y: Millis,
    term1: Millis,
    term2: Millis,
    term3: Millis,
    raw: Millis,
    scaled: Option<Millis>,
}

/// Prints the breakdown of one pair at three decimals.
pub fn cmd_score(
    rating: f64,
    consensus: f64,
    config: &CliConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    crate::score::RatingValue::new(rating).map_err(|e| domain_flag("--rating", e))?;
    crate::score::ConsensusValue::new(consensus).map_err(|e| domain_flag("--consensus", e))?;
    let row = evaluate_row(rating, consensus, &config.weights, config.scaling)?;
    let r = row.rounded;
    let record = ScoreRecord {
        x: Millis::round_f64(rating),
        y: Millis::round_f64(consensus),
        term1: r.term1,
        term2: r.term2,
        term3: r.term3,
        raw: r.raw,
        scaled: r.scaled,
    };
    match config.output_format {
        OutputFormat::Text => {
            for (name, value) in [
                ("x", record.x),
                ("y", record.y),
                ("term1", record.term1),
                ("term2", record.term2),
                ("term3", record.term3),
                ("raw", record.raw),
            ] {
                writeln!(out, "{name:<7}{value}").map_err(stdout_error)?;
            }
            if let Some(scaled) = record.scaled {
                writeln!(out, "{:<7}{scaled}", "scaled").map_err(stdout_error)?;
            }
        }
        OutputFormat::Csv => {
            writeln!(out, "x,y,term1,term2,term3,raw,scaled").map_err(stdout_error)?;
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                record.x,
                record.y,
                record.term1,
                record.term2,
                record.term3,
                record.raw,
                record.scaled.map(|s| s.to_string()).unwrap_or_default()
            )
            .map_err(stdout_error)?;
        }
        OutputFormat::Json => write_json(out, &record)?,
    }
    Ok(())
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)
        .map_err(|e| CliError::Io(format!("writing output: {e}")))?;
    writeln!(out).map_err(stdout_error)
}

#[derive(Debug, Clone, Serialize)]
pub struct IngestRow {
    pub item_id: String,
    pub n_reviews: usize,
    pub x: Millis,
    pub y: Millis,
    pub raw: Millis,
    pub scaled: Option<Millis>,
}

#[derive(Debug, Clone, Default)]
pub struct Ingested {
    pub rows: Vec<IngestRow>,
    /// `(line, reason)` of rows skipped in lenient mode.
    pub skipped: Vec<(usize, String)>,
}

/// Aggregates a reviews file and scores each item.
pub fn ingest_rows(text: &str, config: &CliConfig) -> Result<Ingested, CliError> {
    let parsed = parse_reviews(text, config.strictness).map_err(|e| match e {
        ReviewsError::Header(_) => CliError::Usage(e.to_string()),
        ReviewsError::Row { .. } => CliError::Domain(e.to_string()),
    })?;
    let aggregation = aggregate_items(parsed.records, Strictness::Strict, &MadConsensus)?;
    let rows = aggregation
        .items
        .into_iter()
        .map(|item| {
            let x = item.overall_rating.get();
            let y = item.consensus.get();
            let row = evaluate_row(x, y, &config.weights, config.scaling)?;
            Ok(IngestRow {
                n_reviews: item.n_reviews,
                x: Millis::round_f64(x),
                y: Millis::round_f64(y),
                raw: row.rounded.raw,
                scaled: row.rounded.scaled,
                item_id: item.item_id,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Ingested {
        rows,
        skipped: parsed.skipped,
    })
}

pub fn cmd_ingest(
    path: &Path,
    config: &CliConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    let Ingested { rows, skipped } = ingest_rows(&text, config).map_err(|e| match e {
        CliError::Domain(m) => CliError::Domain(format!("{}: {m}", path.display())),
        CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
        other => other,
    })?;
    if config.strictness == Strictness::Lenient {
        writeln!(err, "skipped {} malformed row(s)", skipped.len()).map_err(stdout_error)?;
        for (line, reason) in &skipped {
            writeln!(err, "  line {line}: {reason}").map_err(stdout_error)?;
        }
    }
    let scaled = |r: &IngestRow| r.scaled.map(|s| s.to_string()).unwrap_or_default();
    match config.output_format {
        OutputFormat::Json => write_json(out, &rows)?,
        OutputFormat::Csv => {
            writeln!(out, "item_id,n_reviews,x,y,raw,scaled").map_err(stdout_error)?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.item_id,
                    r.n_reviews,
                    r.x,
                    r.y,
                    r.raw,
                    scaled(r)
                )
                .map_err(stdout_error)?;
            }
        }
        OutputFormat::Text => {
            let width = rows
                .iter()
                .map(|r| r.item_id.len())
                .max()
                .unwrap_or(0)
                .max(7);
            writeln!(
                out,
                "{:<width$}  {:>9}  {:>6}  {:>6}  {:>6}  {:>6}",
                "item_id", "n_reviews", "x", "y", "raw", "scaled"
            )
            .map_err(stdout_error)?;
            for r in &rows {
                writeln!(
                    out,
                    "{:<width$}  {:>9}  {:>6}  {:>6}  {:>6}  {:>6}",
                    r.item_id,
                    r.n_reviews,
                    r.x.to_string(),
                    r.y.to_string(),
                    r.raw.to_string(),
                    scaled(r)
                )
                .map_err(stdout_error)?;
            }
        }
    }
    Ok(())
}

/// Writes the sweep for `spec` to `dest` (or `out`) and reports the count.
pub fn cmd_sweep(
    spec: &SweepSpec,
    dest: Option<&Path>,
    config: &CliConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let rows = run_sweep(spec)?;
    let json = config.output_format == OutputFormat::Json;
    match dest {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path.display(), e))?;
            let mut sink = BufWriter::new(file);
            if json {
                serde_json::to_writer_pretty(&mut sink, &sweep_records(&spec.label, &rows))
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                writeln!(sink).and_then(|_| sink.flush())
            } else {
                emit_sweep_csv(&spec.label, &rows, &mut sink).map(drop)
            }
            .map_err(|e| CliError::io(path.display(), e))?;
            writeln!(out, "wrote {} rows to {}", rows.len(), path.display())
                .map_err(stdout_error)?;
        }
        None if json => write_json(out, &sweep_records(&spec.label, &rows))?,
        None => {
            emit_sweep_csv(&spec.label, &rows, &mut *out).map_err(stdout_error)?;
        }
    }
    Ok(())
}

/// Prints the differentiation report for `spec`.
pub fn cmd_differentiate(
    spec: &SweepSpec,
    epsilon: Option<f64>,
    config: &CliConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let report = match epsilon {
        Some(eps) => differentiation_report_approx(spec, eps)?,
        None => differentiation_report(spec).map_err(|e| match e {
            Error::Precision { .. } => CliError::Domain(format!(
                "{e} (pass --epsilon, or use grids on a 0.001 step such as 1.0:0.1:5.0)"
            )),
            other => other.into(),
        })?,
    };
    match config.output_format {
        OutputFormat::Text => write!(out, "{report}").map_err(stdout_error)?,
        OutputFormat::Csv => report.write_csv(&mut *out).map_err(stdout_error)?,
        OutputFormat::Json => write_json(out, &report)?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["contrip"];
        full.extend_from_slice(args);
        let code = run(full, None, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn value_lists() {
        assert_eq!(parse_value_list("--x", "0,0.5,1").unwrap(), [0.0, 0.5, 1.0]);
        assert_eq!(
            parse_value_list("--x", "1:0.5:2,4").unwrap(),
            [1.0, 1.5, 2.0, 4.0]
        );
        assert!(parse_value_list("--x", "1:2").is_err());
        assert!(parse_value_list("--x", "a").is_err());
    }

    #[test]
    fn score_text() {
        let (code, out, _) =
            run_capture(&["score", "--rating", "4", "--consensus", "1", "--no-scale"]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l == "raw    4.240"), "{out}");
        assert!(!out.contains("scaled"));
    }

    #[test]
    fn score_domain_error_names_flag() {
        let (code, out, err) = run_capture(&["score", "--rating", "6", "--consensus", "0.5"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert_eq!(err.lines().count(), 1);
        assert!(err.contains("--rating") && err.contains("[1, 5]"), "{err}");
    }

    #[test]
    fn usage_error_code() {
        let (code, _, err) = run_capture(&["score", "--rating", "4"]);
        assert_eq!(code, 1);
        assert!(!err.is_empty());
        let (code, _, _) = run_capture(&["frobnicate"]);
        assert_eq!(code, 1);
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("differentiate"));
    }

    #[test]
    fn score_json_mirrors_csv_names() {
        let (code, out, _) = run_capture(&[
            "score",
            "--rating",
            "4",
            "--consensus",
            "0",
            "--format",
            "json",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("\"raw\": 3.340"), "{out}");
        assert!(out.contains("\"scaled\": 3.487"), "{out}");
    }

    #[test]
    fn differentiate_precision_error() {
        let (code, _, err) = run_capture(&["differentiate", "--consensus-values", "0.0005"]);
        assert_eq!(code, 2);
        assert!(err.contains("--epsilon"), "{err}");
    }
}
