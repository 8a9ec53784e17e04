//! Line-aligned corpus files.
//!
//! Line `i` of the source, hypothesis and every reference file together form
//! segment `i`. An empty (or whitespace-only) reference line means that
//! annotator gave no correction for that segment.

use std::fs;
use std::path::{Path, PathBuf};

use mrgleu::aggregate::Segment;
use mrgleu::text::normalize;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusInput {
    pub source_path: PathBuf,
    pub hypothesis_path: PathBuf,
    pub reference_paths: Vec<PathBuf>,
}

/// Reads a UTF-8 file and splits it into lines.
pub fn read_lines(path: &Path) -> Result<Vec<String>, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    let text = String::from_utf8(bytes).map_err(|e| {
        CliError::Validation(format!(
            "{}: invalid UTF-8 at byte offset {}",
            path.display(),
            e.utf8_error().valid_up_to()
        ))
    })?;
    Ok(text.lines().map(str::to_owned).collect())
}

fn mismatch(files: &[(&Path, usize)]) -> CliError {
    let detail: Vec<String> = files
        .iter()
        .map(|(p, n)| format!("{} has {} lines", p.display(), n))
        .collect();
    CliError::Validation(format!("line counts differ: {}", detail.join(", ")))
}

/// Loads one [`Segment`] per line. Empty reference lines are dropped from
/// that segment's reference list.
pub fn load_corpus(input: &CorpusInput) -> Result<Vec<Segment>, CliError> {
    let sources = read_lines(&input.source_path)?;
    let hypotheses = read_lines(&input.hypothesis_path)?;
    let references = input
        .reference_paths
        .iter()
        .map(|p| read_lines(p))
        .collect::<Result<Vec<_>, _>>()?;

    let mut counts = vec![
        (input.source_path.as_path(), sources.len()),
        (input.hypothesis_path.as_path(), hypotheses.len()),
    ];
    counts.extend(
        input
            .reference_paths
            .iter()
            .zip(&references)
            .map(|(p, r)| (p.as_path(), r.len())),
    );
    if counts.iter().any(|&(_, n)| n != sources.len()) {
        return Err(mismatch(&counts));
    }

    Ok(sources
        .into_iter()
        .zip(hypotheses)
        .enumerate()
        .map(|(i, (source, hypothesis))| Segment {
            source,
            hypothesis,
            references: references
                .iter()
                .map(|r| &r[i])
                .filter(|line| !normalize(line).is_empty())
                .cloned()
                .collect(),
        })
        .collect())
}

/// Loads reference files only; source and hypothesis are left empty.
pub fn load_references(paths: &[PathBuf]) -> Result<Vec<Segment>, CliError> {
    let references = paths
        .iter()
        .map(|p| read_lines(p))
        .collect::<Result<Vec<_>, _>>()?;
    let Some(first) = references.first() else {
        return Ok(Vec::new());
    };
    if references.iter().any(|r| r.len() != first.len()) {
        let counts: Vec<(&Path, usize)> = paths.iter().map(PathBuf::as_path).zip(references.iter().map(Vec::len)).collect();
        return Err(mismatch(&counts));
    }
    Ok((0..first.len())
        .map(|i| Segment {
            references: references
                .iter()
                .map(|r| &r[i])
                .filter(|line| !normalize(line).is_empty())
                .cloned()
                .collect(),
            ..Segment::default()
        })
        .collect())
}
