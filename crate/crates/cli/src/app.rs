//! Argument parsing and command execution.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mrgleu::aggregate::{Segment, SegmentResult, Strategy, StrategyConfig};
use mrgleu::bleu::sentence_bleu;
use mrgleu::corpus::{
    corpus_score, incremental_curve, incremental_curve_permuted, paired_bootstrap, reference_stats, score_corpus,
    score_delta,
};
use mrgleu::ngram::profile;
use mrgleu::text::{prepare, TokenMode};
use rayon::prelude::*;

use crate::error::CliError;
use crate::input::{load_corpus, load_references, CorpusInput};
use crate::report::{
    emit_report, BootstrapEntry, ConfigEcho, CorpusEntry, CurveRow, Format, Report, SegmentRow,
};

const EXIT_CODES: &str = "Exit codes: 0 success, 1 usage error, 2 input validation error, 3 I/O error.";

#[derive(Debug, Parser)]
#[command(name = "mrgleu", version, about = "Multi-reference GLEU for grammatical error correction", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score a hypothesis file against one or more reference files.
    Score(ScoreArgs),
    /// Corpus scores as the number of references per segment grows.
    Curve(CurveArgs),
    /// Distribution of reference counts per segment.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    SelectBest,
    Average,
    Weighted,
    Merged,
    Single,
    All,
}

impl StrategyArg {
    fn strategies(self) -> Vec<Strategy> {
        match self {
            StrategyArg::SelectBest => vec![Strategy::SelectBest],
            StrategyArg::Average => vec![Strategy::SimpleAverage],
            StrategyArg::Weighted => vec![Strategy::WeightedAverage],
            StrategyArg::Merged => vec![Strategy::Merged],
            StrategyArg::Single => vec![Strategy::SingleReference],
            StrategyArg::All => Strategy::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Word,
    Char,
}

impl From<ModeArg> for TokenMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Word => TokenMode::Word,
            ModeArg::Char => TokenMode::Char,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Gleu,
    Bleu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComparePair(pub Strategy, pub Strategy);

fn parse_compare(s: &str) -> Result<ComparePair, String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected STRATEGY:STRATEGY, got `{s}`"))?;
    let a = a.parse::<Strategy>().map_err(|e| e.to_string())?;
    let b = b.parse::<Strategy>().map_err(|e| e.to_string())?;
    Ok(ComparePair(a, b))
}

fn parse_tau(s: &str) -> Result<f64, String> {
    let tau: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if tau > 0.0 && tau.is_finite() {
        Ok(tau)
    } else {
        Err("temperature must be positive".to_owned())
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Uncorrected source text, one segment per line.
    #[arg(long)]
    pub source: PathBuf,
    /// System output, line-aligned with the source.
    #[arg(long)]
    pub hypothesis: PathBuf,
    /// Reference file; repeat for several annotators. Empty lines mean no
    /// reference for that segment.
    #[arg(long = "ref", required = true)]
    pub refs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Word)]
    pub mode: ModeArg,
    /// Maximum n-gram order.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub order: u64,
    /// Softmax temperature of the weighted average.
    #[arg(long, default_value_t = 1.0, value_parser = parse_tau)]
    pub tau: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads for segment scoring (default: all cores).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CurveOptions {
    /// Largest number of references per segment.
    #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(1..))]
    pub k_max: u64,
    /// Shuffle each segment's references before truncating (needs --seed).
    #[arg(long)]
    pub permute_refs: bool,
    /// Number of shuffles averaged with --permute-refs.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::All)]
    pub strategy: StrategyArg,
    #[arg(long, value_enum, default_value_t = MetricArg::Gleu)]
    pub metric: MetricArg,
    /// Include a per-segment table.
    #[arg(long)]
    pub per_segment: bool,
    /// Run a paired bootstrap test with this many resamples.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub bootstrap: Option<u64>,
    /// Strategies compared by the bootstrap test.
    #[arg(long, value_parser = parse_compare, default_value = "merged:single")]
    pub compare: ComparePair,
    /// Seed for all random resampling.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also compute the incremental reference curve.
    #[arg(long)]
    pub curve: bool,
    #[command(flatten)]
    pub curve_options: CurveOptions,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::All)]
    pub strategy: StrategyArg,
    #[command(flatten)]
    pub curve_options: CurveOptions,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long = "ref", required = true)]
    pub refs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A finished invocation.
#[derive(Debug)]
pub struct Invocation {
    pub report: Report,
    pub bytes: Vec<u8>,
    /// Where the bytes were written, if not standard output.
    pub output: Option<PathBuf>,
}

impl CommonArgs {
    fn config(&self) -> StrategyConfig {
        StrategyConfig {
            tau: self.tau,
            max_order: self.order as usize,
            mode: self.mode.into(),
        }
    }

    fn input(&self) -> CorpusInput {
        CorpusInput {
            source_path: self.source.clone(),
            hypothesis_path: self.hypothesis.clone(),
            reference_paths: self.refs.clone(),
        }
    }

    fn echo(&self, command: &str, metric: &str, strategies: &[Strategy]) -> ConfigEcho {
        ConfigEcho {
            command: command.to_owned(),
            metric: metric.to_owned(),
            strategies: strategies.iter().map(|s| s.as_str().to_owned()).collect(),
            order: self.order as usize,
            tau: self.tau,
            mode: TokenMode::from(self.mode).as_str().to_owned(),
            seed: None,
            reference_files: self.refs.len(),
            k_max: None,
            permute_trials: None,
            bootstrap_iterations: None,
        }
    }
}

fn columns(strategies: &[Strategy]) -> Vec<String> {
    strategies.iter().map(|s| s.as_str().to_owned()).collect()
}

fn in_pool<T: Send>(jobs: Option<u64>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match jobs {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| CliError::Usage(format!("cannot start {n} worker threads: {e}"))),
    }
}

fn require_seed(seed: Option<u64>, what: &str) -> Result<u64, CliError> {
    seed.ok_or_else(|| CliError::Usage(format!("{what} requires --seed")))
}

fn curve_rows(
    segments: &[Segment],
    config: &StrategyConfig,
    options: &CurveOptions,
    seed: Option<u64>,
    strategies: &[Strategy],
) -> Result<Vec<CurveRow>, CliError> {
    let k_max = options.k_max as usize;
    let points = if options.permute_refs {
        let seed = require_seed(seed, "--permute-refs")?;
        incremental_curve_permuted(segments, config, k_max, options.trials as usize, seed)?
    } else {
        incremental_curve(segments, config, k_max)?
    };
    Ok(points
        .iter()
        .map(|p| CurveRow {
            k: p.k,
            scores: strategies.iter().map(|&s| p.per_strategy.get(s)).collect(),
        })
        .collect())
}

fn empty_corpus() -> CliError {
    CliError::Validation("no segment has a reference".to_owned())
}

fn score_gleu(args: &ScoreArgs) -> Result<Report, CliError> {
    let common = &args.common;
    let config = common.config();
    let strategies = args.strategy.strategies();
    let mut echo = common.echo("score", "gleu", &strategies);

    if common.format == Format::Tsv {
        if args.bootstrap.is_some() {
            return Err(CliError::Usage("--bootstrap output requires --format json".to_owned()));
        }
        if args.curve && args.per_segment {
            return Err(CliError::Usage("--format tsv holds one table: use --curve or --per-segment, not both".to_owned()));
        }
    }
    let seed = match args.bootstrap {
        Some(_) => Some(require_seed(args.seed, "--bootstrap")?),
        None => args.seed,
    };
    echo.seed = seed;
    echo.bootstrap_iterations = args.bootstrap.map(|n| n as usize);

    let segments = load_corpus(&common.input())?;
    let results = in_pool(common.jobs, || score_corpus(&segments, &config))??;
    let skipped = results.iter().filter(|r| r.is_none()).count();
    if skipped == results.len() {
        return Err(empty_corpus());
    }

    let mut report = Report::new(echo, columns(&strategies));
    report.skipped_segments = skipped;
    report.references = Some(reference_stats(&segments));
    for &s in &strategies {
        let c = corpus_score(&results, s)?;
        report.corpus.push(CorpusEntry {
            name: s.as_str().to_owned(),
            score: c.value,
            segments: c.n_segments,
            skipped: c.n_skipped,
        });
    }
    if strategies.contains(&Strategy::Merged) && strategies.contains(&Strategy::SingleReference) {
        let merged = corpus_score(&results, Strategy::Merged)?;
        let single = corpus_score(&results, Strategy::SingleReference)?;
        report.delta_merged_single = Some(score_delta(&merged, &single)?);
    }

    if args.per_segment {
        report.segments = Some(segment_rows(&results, &strategies));
    }

    if let Some(iterations) = args.bootstrap {
        let ComparePair(a, b) = args.compare;
        let scored: Vec<&SegmentResult> = results.iter().flatten().collect();
        let xs: Vec<f64> = scored.iter().map(|r| r.per_strategy.get(a)).collect();
        let ys: Vec<f64> = scored.iter().map(|r| r.per_strategy.get(b)).collect();
        let seed = seed.expect("seed checked above");
        let boot = paired_bootstrap(&xs, &ys, iterations as usize, seed)?;
        report.bootstrap = Some(BootstrapEntry {
            a: a.as_str().to_owned(),
            b: b.as_str().to_owned(),
            iterations: boot.iterations,
            seed: boot.seed,
            mean_delta: boot.mean_delta,
            p_value: boot.p_value,
        });
    }

    if args.curve {
        report.config.k_max = Some(args.curve_options.k_max as usize);
        if args.curve_options.permute_refs {
            report.config.permute_trials = Some(args.curve_options.trials as usize);
        }
        let rows = in_pool(common.jobs, || {
            curve_rows(&segments, &config, &args.curve_options, seed, &strategies)
        })??;
        report.curve = Some(rows);
    }
    Ok(report)
}

fn segment_rows(results: &[Option<SegmentResult>], strategies: &[Strategy]) -> Vec<SegmentRow> {
    results
        .iter()
        .enumerate()
        .map(|(i, r)| SegmentRow {
            line: i + 1,
            references: r.as_ref().map_or(0, |r| r.per_reference.len()),
            scores: r
                .as_ref()
                .map(|r| strategies.iter().map(|&s| r.per_strategy.get(s)).collect()),
            per_reference: r.as_ref().map(|r| r.per_reference.clone()).unwrap_or_default(),
        })
        .collect()
}

fn score_bleu(args: &ScoreArgs) -> Result<Report, CliError> {
    let common = &args.common;
    if args.curve || args.bootstrap.is_some() {
        return Err(CliError::Usage("--metric bleu does not support --curve or --bootstrap".to_owned()));
    }
    let mode = TokenMode::from(common.mode);
    let n = common.order as usize;
    let segments = load_corpus(&common.input())?;
    let scores = in_pool(common.jobs, || {
        segments
            .par_iter()
            .map(|seg| {
                let refs = seg
                    .available_references()
                    .map(|r| profile(&prepare(r, mode), n))
                    .collect::<mrgleu::Result<Vec<_>>>()?;
                if refs.is_empty() {
                    return Ok(None);
                }
                let hyp = profile(&prepare(&seg.hypothesis, mode), n)?;
                Ok(Some(sentence_bleu(&hyp, &refs, n)?.value))
            })
            .collect::<mrgleu::Result<Vec<Option<f64>>>>()
    })??;
    let scored: Vec<f64> = scores.iter().flatten().copied().collect();
    if scored.is_empty() {
        return Err(empty_corpus());
    }
    let skipped = scores.len() - scored.len();

    let mut echo = common.echo("score", "bleu", &[]);
    echo.strategies = vec!["bleu".to_owned()];
    echo.seed = args.seed;
    let mut report = Report::new(echo, vec!["bleu".to_owned()]);
    report.skipped_segments = skipped;
    report.references = Some(reference_stats(&segments));
    report.corpus.push(CorpusEntry {
        name: "bleu".to_owned(),
        score: scored.iter().sum::<f64>() / scored.len() as f64,
        segments: scored.len(),
        skipped,
    });
    if args.per_segment {
        report.segments = Some(
            segments
                .iter()
                .zip(&scores)
                .enumerate()
                .map(|(i, (seg, s))| SegmentRow {
                    line: i + 1,
                    references: seg.references.len(),
                    scores: s.map(|v| vec![v]),
                    per_reference: Vec::new(),
                })
                .collect(),
        );
    }
    Ok(report)
}

fn curve(args: &CurveArgs) -> Result<Report, CliError> {
    let common = &args.common;
    let config = common.config();
    let strategies = args.strategy.strategies();
    let mut echo = common.echo("curve", "gleu", &strategies);
    echo.seed = args.seed;
    echo.k_max = Some(args.curve_options.k_max as usize);
    if args.curve_options.permute_refs {
        echo.permute_trials = Some(args.curve_options.trials as usize);
    }
    let segments = load_corpus(&common.input())?;
    if segments.iter().all(|s| s.references.is_empty()) {
        return Err(empty_corpus());
    }
    let rows = in_pool(common.jobs, || {
        curve_rows(&segments, &config, &args.curve_options, args.seed, &strategies)
    })??;
    let mut report = Report::new(echo, columns(&strategies));
    report.skipped_segments = segments.iter().filter(|s| s.references.is_empty()).count();
    report.references = Some(reference_stats(&segments));
    report.curve = Some(rows);
    Ok(report)
}

fn stats(args: &StatsArgs) -> Result<Report, CliError> {
    let segments = load_references(&args.refs)?;
    let echo = ConfigEcho {
        command: "stats".to_owned(),
        metric: "none".to_owned(),
        strategies: Vec::new(),
        order: 0,
        tau: 0.0,
        mode: "none".to_owned(),
        seed: None,
        reference_files: args.refs.len(),
        k_max: None,
        permute_trials: None,
        bootstrap_iterations: None,
    };
    let mut report = Report::new(echo, Vec::new());
    report.references = Some(reference_stats(&segments));
    Ok(report)
}

fn write_output(path: &PathBuf, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

/// Parses `args` (including the program name), runs the command and writes
/// the report to `--output` when given.
pub fn run<I, T>(args: I) -> Result<Invocation, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let (report, format, output) = match &cli.command {
        Command::Score(a) => {
            let report = match a.metric {
                MetricArg::Gleu => score_gleu(a)?,
                MetricArg::Bleu => score_bleu(a)?,
            };
            (report, a.common.format, a.common.output.clone())
        }
        Command::Curve(a) => (curve(a)?, a.common.format, a.common.output.clone()),
        Command::Stats(a) => (stats(a)?, a.format, a.output.clone()),
    };
    let bytes = emit_report(&report, format);
    if let Some(path) = &output {
        write_output(path, &bytes)?;
    }
    Ok(Invocation { report, bytes, output })
}

/// Runs the CLI, printing the report or error; returns the exit code.
pub fn main_with<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match run(args) {
        Ok(inv) => {
            if inv.output.is_none() && stdout.write_all(&inv.bytes).and_then(|_| stdout.flush()).is_err() {
                return crate::error::EXIT_IO;
            }
            0
        }
        Err(err @ CliError::Args(_)) => {
            let code = err.exit_code();
            let CliError::Args(e) = err else { unreachable!() };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
