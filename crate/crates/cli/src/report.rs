//! Report model and its JSON / TSV serializations.
//!
//! Output is byte-deterministic: object keys are written in a fixed order and
//! every score is printed with six decimal places.

use std::fmt::Write as _;

use mrgleu::corpus::ReferenceStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigEcho {
    pub command: String,
    pub metric: String,
    pub strategies: Vec<String>,
    pub order: usize,
    pub tau: f64,
    pub mode: String,
    pub seed: Option<u64>,
    pub reference_files: usize,
    pub k_max: Option<usize>,
    pub permute_trials: Option<usize>,
    pub bootstrap_iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub score: f64,
    pub segments: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentRow {
    /// 1-based input line.
    pub line: usize,
    pub references: usize,
    /// One value per report column; `None` for skipped segments.
    pub scores: Option<Vec<f64>>,
    pub per_reference: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub k: usize,
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapEntry {
    pub a: String,
    pub b: String,
    pub iterations: usize,
    pub seed: u64,
    pub mean_delta: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub version: String,
    pub config: ConfigEcho,
    /// Score column names shared by `corpus`, `segments` and `curve`.
    pub columns: Vec<String>,
    pub corpus: Vec<CorpusEntry>,
    /// Merged minus single-reference corpus score, when both are reported.
    pub delta_merged_single: Option<f64>,
    pub skipped_segments: usize,
    pub references: Option<ReferenceStats>,
    pub segments: Option<Vec<SegmentRow>>,
    pub curve: Option<Vec<CurveRow>>,
    pub bootstrap: Option<BootstrapEntry>,
}

impl Report {
    pub fn new(config: ConfigEcho, columns: Vec<String>) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_owned(),
            config,
            columns,
            corpus: Vec::new(),
            delta_merged_single: None,
            skipped_segments: 0,
            references: None,
            segments: None,
            curve: None,
            bootstrap: None,
        }
    }
}

/// Formats a score with six decimal places.
pub fn fmt_score(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_owned()
    } else {
        s
    }
}

enum Json {
    Null,
    /// Pre-rendered number.
    Num(String),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
    /// Object with runtime keys.
    Map(Vec<(String, Json)>),
}

impl Json {
    fn score(v: f64) -> Json {
        Json::Num(fmt_score(v))
    }

    fn int(v: usize) -> Json {
        Json::Num(v.to_string())
    }

    fn str(s: &str) -> Json {
        Json::Str(s.to_owned())
    }

    fn opt<T>(v: Option<T>, f: impl FnOnce(T) -> Json) -> Json {
        v.map_or(Json::Null, f)
    }

    fn write(&self, out: &mut String, indent: usize) {
        let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n("  ", n));
        match self {
            Json::Null => out.push_str("null"),
            Json::Num(n) => out.push_str(n),
            Json::Str(s) => out.push_str(&serde_json::to_string(s).expect("string serialization")),
            Json::Arr(items) if items.is_empty() => out.push_str("[]"),
            Json::Arr(items) => {
                out.push_str("[\n");
                for (i, item) in items.iter().enumerate() {
                    pad(out, indent + 1);
                    item.write(out, indent + 1);
                    out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
                }
                pad(out, indent);
                out.push(']');
            }
            Json::Obj(fields) => {
                let fields: Vec<(&str, &Json)> = fields.iter().map(|(k, v)| (*k, v)).collect();
                write_object(out, indent, &fields);
            }
            Json::Map(fields) => {
                let fields: Vec<(&str, &Json)> = fields.iter().map(|(k, v)| (k.as_str(), v)).collect();
                write_object(out, indent, &fields);
            }
        }
    }
}

fn write_object(out: &mut String, indent: usize, fields: &[(&str, &Json)]) {
    if fields.is_empty() {
        out.push_str("{}");
        return;
    }
    out.push_str("{\n");
    for (i, (k, v)) in fields.iter().enumerate() {
        out.extend(std::iter::repeat_n("  ", indent + 1));
        out.push_str(&serde_json::to_string(k).expect("string serialization"));
        out.push_str(": ");
        v.write(out, indent + 1);
        out.push_str(if i + 1 < fields.len() { ",\n" } else { "\n" });
    }
    out.extend(std::iter::repeat_n("  ", indent));
    out.push('}');
}

fn named_scores(columns: &[String], scores: &[f64]) -> Json {
    Json::Map(columns.iter().cloned().zip(scores.iter().map(|&v| Json::score(v))).collect())
}

fn to_json(report: &Report) -> Json {
    let c = &report.config;
    let config = Json::Obj(vec![
        ("command", Json::str(&c.command)),
        ("metric", Json::str(&c.metric)),
        ("strategies", Json::Arr(c.strategies.iter().map(|s| Json::str(s)).collect())),
        ("order", Json::int(c.order)),
        ("tau", Json::Num(format!("{}", c.tau))),
        ("mode", Json::str(&c.mode)),
        ("seed", Json::opt(c.seed, |s| Json::Num(s.to_string()))),
        ("reference_files", Json::int(c.reference_files)),
        ("k_max", Json::opt(c.k_max, Json::int)),
        ("permute_trials", Json::opt(c.permute_trials, Json::int)),
        ("bootstrap_iterations", Json::opt(c.bootstrap_iterations, Json::int)),
    ]);

    let mut fields = vec![("version", Json::str(&report.version)), ("config", config)];
    if !report.corpus.is_empty() {
        let corpus = report
            .corpus
            .iter()
            .map(|e| {
                (
                    e.name.clone(),
                    Json::Obj(vec![
                        ("score", Json::score(e.score)),
                        ("segments", Json::int(e.segments)),
                        ("skipped", Json::int(e.skipped)),
                    ]),
                )
            })
            .collect();
        fields.push(("corpus", Json::Map(corpus)));
    }
    if let Some(d) = report.delta_merged_single {
        fields.push(("delta_merged_single", Json::score(d)));
    }
    fields.push(("skipped_segments", Json::int(report.skipped_segments)));
    if let Some(stats) = &report.references {
        let histogram = stats
            .histogram
            .iter()
            .map(|(k, v)| (k.to_string(), Json::int(*v)))
            .collect();
        fields.push((
            "references",
            Json::Obj(vec![
                ("histogram", Json::Map(histogram)),
                ("mean", Json::opt(stats.mean, Json::score)),
            ]),
        ));
    }
    if let Some(b) = &report.bootstrap {
        fields.push((
            "bootstrap",
            Json::Obj(vec![
                ("a", Json::str(&b.a)),
                ("b", Json::str(&b.b)),
                ("iterations", Json::int(b.iterations)),
                ("seed", Json::Num(b.seed.to_string())),
                ("mean_delta", Json::score(b.mean_delta)),
                ("p_value", Json::score(b.p_value)),
            ]),
        ));
    }
    if let Some(curve) = &report.curve {
        let rows = curve
            .iter()
            .map(|row| {
                Json::Obj(vec![
                    ("k", Json::int(row.k)),
                    ("scores", named_scores(&report.columns, &row.scores)),
                ])
            })
            .collect();
        fields.push(("curve", Json::Arr(rows)));
    }
    if let Some(segments) = &report.segments {
        let rows = segments
            .iter()
            .map(|row| {
                Json::Obj(vec![
                    ("line", Json::int(row.line)),
                    ("references", Json::int(row.references)),
                    ("scores", Json::opt(row.scores.as_deref(), |s| named_scores(&report.columns, s))),
                    ("per_reference", Json::Arr(row.per_reference.iter().map(|&v| Json::score(v)).collect())),
                ])
            })
            .collect();
        fields.push(("segments", Json::Arr(rows)));
    }
    Json::Obj(fields)
}

fn tsv_row(out: &mut String, cells: impl IntoIterator<Item = String>) {
    let cells: Vec<String> = cells.into_iter().collect();
    out.push_str(&cells.join("\t"));
    out.push('\n');
}

fn to_tsv(report: &Report) -> String {
    let mut out = String::new();
    let columns = report.columns.iter().cloned();
    if let Some(curve) = &report.curve {
        tsv_row(&mut out, std::iter::once("k".to_owned()).chain(columns));
        for row in curve {
            tsv_row(&mut out, std::iter::once(row.k.to_string()).chain(row.scores.iter().map(|&v| fmt_score(v))));
        }
    } else if let Some(segments) = &report.segments {
        tsv_row(&mut out, ["line".to_owned(), "references".to_owned()].into_iter().chain(columns));
        for row in segments {
            let scores: Vec<String> = match &row.scores {
                Some(s) => s.iter().map(|&v| fmt_score(v)).collect(),
                None => vec!["NA".to_owned(); report.columns.len()],
            };
            tsv_row(&mut out, [row.line.to_string(), row.references.to_string()].into_iter().chain(scores));
        }
    } else if !report.corpus.is_empty() {
        tsv_row(&mut out, ["strategy", "score", "segments", "skipped"].map(String::from));
        for e in &report.corpus {
            tsv_row(
                &mut out,
                [e.name.clone(), fmt_score(e.score), e.segments.to_string(), e.skipped.to_string()],
            );
        }
    } else if let Some(stats) = &report.references {
        tsv_row(&mut out, ["references", "segments"].map(String::from));
        for (k, v) in &stats.histogram {
            tsv_row(&mut out, [k.to_string(), v.to_string()]);
        }
    }
    out
}

/// Serializes `report` in the requested format.
pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = String::new();
            to_json(report).write(&mut out, 0);
            out.push('\n');
            out.into_bytes()
        }
        Format::Tsv => to_tsv(report).into_bytes(),
    }
}

/// Renders a reference histogram as `count:segments` pairs, for messages.
pub fn histogram_summary(stats: &ReferenceStats) -> String {
    let mut s = String::new();
    for (i, (k, v)) in stats.histogram.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{k}:{v}");
    }
    s
}
