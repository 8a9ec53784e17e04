//! Corpus-level aggregation and analyses.
//!
//! Corpus scores are macro averages: the arithmetic mean of segment scores.
//! This differs from implementations that pool n-gram statistics over the
//! whole corpus before computing precisions, and gives different absolute
//! numbers.
//!
//! Segments without any reference are skipped and counted separately.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::aggregate::{score_segment, Segment, SegmentResult, Strategy, StrategyConfig, StrategyScores};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusScore {
    pub strategy: Strategy,
    pub value: f64,
    pub n_segments: usize,
    pub n_skipped: usize,
}

/// Corpus scores at one reference budget `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub k: usize,
    pub per_strategy: StrategyScores,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapResult {
    pub p_value: f64,
    pub iterations: usize,
    pub seed: u64,
    /// Observed `mean(a) - mean(b)`.
    pub mean_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReferenceStats {
    /// Number of segments per count of available references.
    pub histogram: BTreeMap<usize, usize>,
    /// Mean references per segment; `None` for an empty corpus.
    pub mean: Option<f64>,
}

/// Scores every segment, in parallel on the current rayon pool.
///
/// Output order matches input order. Segments without references come back
/// as `None`; any other error aborts.
pub fn score_corpus(segments: &[Segment], config: &StrategyConfig) -> Result<Vec<Option<SegmentResult>>> {
    config.validate()?;
    segments
        .par_iter()
        .map(|seg| match score_segment(seg, config) {
            Ok(r) => Ok(Some(r)),
            Err(Error::NoReferences) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}

/// Mean of one strategy's segment scores.
pub fn corpus_score(results: &[Option<SegmentResult>], strategy: Strategy) -> Result<CorpusScore> {
    let scored: Vec<f64> = results
        .iter()
        .flatten()
        .map(|r| r.per_strategy.get(strategy))
        .collect();
    if scored.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(CorpusScore {
        strategy,
        value: scored.iter().sum::<f64>() / scored.len() as f64,
        n_segments: scored.len(),
        n_skipped: results.len() - scored.len(),
    })
}

fn all_strategies(results: &[Option<SegmentResult>]) -> Result<StrategyScores> {
    let get = |s| corpus_score(results, s).map(|c| c.value);
    Ok(StrategyScores {
        select_best: get(Strategy::SelectBest)?,
        simple_average: get(Strategy::SimpleAverage)?,
        weighted_average: get(Strategy::WeightedAverage)?,
        merged: get(Strategy::Merged)?,
        single_reference: get(Strategy::SingleReference)?,
    })
}

fn truncate_references(segments: &[Segment], k: usize) -> Vec<Segment> {
    segments
        .iter()
        .map(|s| Segment {
            source: s.source.clone(),
            hypothesis: s.hypothesis.clone(),
            references: s.available_references().take(k).map(str::to_owned).collect(),
        })
        .collect()
}

/// Corpus scores when each segment may use only its first `k` references,
/// for `k = 1..=k_max`.
///
/// Segments with fewer than `k` references use all of theirs.
pub fn incremental_curve(segments: &[Segment], config: &StrategyConfig, k_max: usize) -> Result<Vec<CurvePoint>> {
    if k_max == 0 {
        return Err(Error::InvalidReferenceLimit);
    }
    (1..=k_max)
        .map(|k| {
            let results = score_corpus(&truncate_references(segments, k), config)?;
            Ok(CurvePoint {
                k,
                per_strategy: all_strategies(&results)?,
            })
        })
        .collect()
}

/// Like [`incremental_curve`], but the references of each segment are
/// shuffled before truncation and the curve is averaged over `trials`
/// shuffles drawn from `seed`.
pub fn incremental_curve_permuted(
    segments: &[Segment],
    config: &StrategyConfig,
    k_max: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    if trials == 0 {
        return Err(Error::ZeroIterations);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sums: Option<Vec<CurvePoint>> = None;
    for _ in 0..trials {
        let shuffled: Vec<Segment> = segments
            .iter()
            .map(|s| {
                let mut refs: Vec<String> = s.available_references().map(str::to_owned).collect();
                refs.shuffle(&mut rng);
                Segment {
                    source: s.source.clone(),
                    hypothesis: s.hypothesis.clone(),
                    references: refs,
                }
            })
            .collect();
        let curve = incremental_curve(&shuffled, config, k_max)?;
        sums = Some(match sums {
            None => curve,
            Some(mut acc) => {
                for (a, c) in acc.iter_mut().zip(&curve) {
                    a.per_strategy = add(a.per_strategy, c.per_strategy);
                }
                acc
            }
        });
    }
    let t = trials as f64;
    Ok(sums
        .unwrap_or_default()
        .into_iter()
        .map(|p| CurvePoint {
            k: p.k,
            per_strategy: scale(p.per_strategy, 1.0 / t),
        })
        .collect())
}

fn add(a: StrategyScores, b: StrategyScores) -> StrategyScores {
    StrategyScores {
        select_best: a.select_best + b.select_best,
        simple_average: a.simple_average + b.simple_average,
        weighted_average: a.weighted_average + b.weighted_average,
        merged: a.merged + b.merged,
        single_reference: a.single_reference + b.single_reference,
    }
}

fn scale(a: StrategyScores, f: f64) -> StrategyScores {
    StrategyScores {
        select_best: a.select_best * f,
        simple_average: a.simple_average * f,
        weighted_average: a.weighted_average * f,
        merged: a.merged * f,
        single_reference: a.single_reference * f,
    }
}

/// Distribution of available-reference counts over segments.
pub fn reference_stats(segments: &[Segment]) -> ReferenceStats {
    let mut histogram = BTreeMap::new();
    let mut total = 0;
    for seg in segments {
        let n = seg.available_references().count();
        *histogram.entry(n).or_insert(0) += 1;
        total += n;
    }
    let mean = (!segments.is_empty()).then(|| total as f64 / segments.len() as f64);
    ReferenceStats { histogram, mean }
}

/// `a - b`. Both scores must come from the same corpus.
pub fn score_delta(a: &CorpusScore, b: &CorpusScore) -> Result<f64> {
    if a.n_segments != b.n_segments || a.n_skipped != b.n_skipped {
        return Err(Error::CorpusMismatch);
    }
    Ok(a.value - b.value)
}

/// Paired bootstrap test on per-segment scores of two systems.
///
/// Segment indices are resampled with replacement `iterations` times from a
/// ChaCha8 stream seeded with `seed`. The p-value is the fraction of
/// resamples whose mean difference is zero or has the opposite sign from the
/// observed mean difference. The statistic does not depend on which system
/// is better, so `(a, b)` and `(b, a)` give the same p-value. With no
/// observed difference every resample counts and `p = 1`.
pub fn paired_bootstrap(scores_a: &[f64], scores_b: &[f64], iterations: usize, seed: u64) -> Result<BootstrapResult> {
    if scores_a.len() != scores_b.len() {
        return Err(Error::LengthMismatch(scores_a.len(), scores_b.len()));
    }
    let n = scores_a.len();
    if n < 2 {
        return Err(Error::TooFewSamples(n));
    }
    if iterations == 0 {
        return Err(Error::ZeroIterations);
    }
    let diffs: Vec<f64> = scores_a.iter().zip(scores_b).map(|(a, b)| a - b).collect();
    let observed = diffs.iter().sum::<f64>() / n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut against = 0usize;
    for _ in 0..iterations {
        let mut sum = 0.0;
        for _ in 0..n {
            sum += diffs[rng.gen_range(0..n)];
        }
        let resampled = sum / n as f64;
        let flipped = if observed > 0.0 {
            resampled <= 0.0
        } else if observed < 0.0 {
            resampled >= 0.0
        } else {
            true
        };
        if flipped {
            against += 1;
        }
    }
    Ok(BootstrapResult {
        p_value: against as f64 / iterations as f64,
        iterations,
        seed,
        mean_delta: observed,
    })
}
