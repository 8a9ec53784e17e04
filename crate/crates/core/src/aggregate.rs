//! Combining several references into one segment score.
//!
//! Four strategies are provided:
//!
//! * **select-best**: the maximum per-reference GLEU.
//! * **simple average**: the arithmetic mean of per-reference GLEU.
//! * **weighted average**: per-reference GLEU weighted by
//!   `softmax(tau * f_i)`.
//! * **merged**: GLEU computed once against the summed n-gram counts of all
//!   references.
//!
//! The first three see only the per-reference scores `f_i`, each computed
//! with that reference's own length in the brevity penalty. The merged
//! strategy works at the profile level and picks the constituent reference
//! length that gives the largest brevity penalty (see [`merged_ref_length`]).
//! With that rule, adding a reference can never lower the merged score.
//!
//! A fifth column, [`Strategy::SingleReference`], reports GLEU against the
//! first available reference alone and serves as the single-reference
//! baseline.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gleu::{sentence_gleu, SentenceScore};
use crate::ngram::{merge_profiles, profile, NgramProfile};
use crate::text::{normalize, tokenize, TokenMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    SelectBest,
    SimpleAverage,
    WeightedAverage,
    Merged,
    SingleReference,
}

impl Strategy {
    /// Every strategy, in report order.
    pub const ALL: [Strategy; 5] = [
        Strategy::SelectBest,
        Strategy::SimpleAverage,
        Strategy::WeightedAverage,
        Strategy::Merged,
        Strategy::SingleReference,
    ];

    /// The four multi-reference aggregations, without the baseline.
    pub const AGGREGATIONS: [Strategy; 4] = [
        Strategy::SelectBest,
        Strategy::SimpleAverage,
        Strategy::WeightedAverage,
        Strategy::Merged,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::SelectBest => "select-best",
            Strategy::SimpleAverage => "average",
            Strategy::WeightedAverage => "weighted",
            Strategy::Merged => "merged",
            Strategy::SingleReference => "single",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownStrategy(pub String);

impl fmt::Display for UnknownStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown strategy `{}`", self.0)
    }
}

impl std::error::Error for UnknownStrategy {}

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| UnknownStrategy(s.to_owned()))
    }
}

/// Scoring parameters shared by every strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyConfig {
    /// Softmax temperature of the weighted average.
    pub tau: f64,
    pub max_order: usize,
    pub mode: TokenMode,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig {
            tau: 1.0,
            max_order: 4,
            mode: TokenMode::Word,
        }
    }
}

impl StrategyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_order == 0 {
            return Err(Error::InvalidOrder);
        }
        check_tau(self.tau)
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTemperature(tau))
    }
}

/// One evaluation unit: source, system hypothesis and human references.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Segment {
    pub source: String,
    pub hypothesis: String,
    pub references: Vec<String>,
}

impl Segment {
    pub fn new(
        source: impl Into<String>,
        hypothesis: impl Into<String>,
        references: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        Segment {
            source: source.into(),
            hypothesis: hypothesis.into(),
            references: references.into_iter().map(Into::into).collect(),
        }
    }

    /// References that are non-empty after normalization, in input order.
    pub fn available_references(&self) -> impl Iterator<Item = &str> {
        self.references
            .iter()
            .map(String::as_str)
            .filter(|r| !normalize(r).is_empty())
    }
}

/// Score of a segment under each strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyScores {
    pub select_best: f64,
    pub simple_average: f64,
    pub weighted_average: f64,
    pub merged: f64,
    pub single_reference: f64,
}

impl StrategyScores {
    pub fn get(&self, strategy: Strategy) -> f64 {
        match strategy {
            Strategy::SelectBest => self.select_best,
            Strategy::SimpleAverage => self.simple_average,
            Strategy::WeightedAverage => self.weighted_average,
            Strategy::Merged => self.merged,
            Strategy::SingleReference => self.single_reference,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentResult {
    pub per_strategy: StrategyScores,
    /// GLEU against each available reference, in input order.
    pub per_reference: Vec<f64>,
    /// Index of the reference chosen by select-best.
    pub selected_index: usize,
    /// Softmax weights of the weighted average.
    pub weights: Vec<f64>,
    /// Details of the merged-profile computation.
    pub merged: SentenceScore,
}

fn check_scores(scores: &[f64]) -> Result<()> {
    if scores.is_empty() {
        return Err(Error::EmptyScores);
    }
    match scores.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        Some(&bad) => Err(Error::ScoreOutOfRange(bad)),
        None => Ok(()),
    }
}

fn bounds(scores: &[f64]) -> (f64, f64) {
    scores
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &f| (lo.min(f), hi.max(f)))
}

/// Highest score and the first index attaining it.
///
/// ```
/// use mrgleu::aggregate::select_best;
/// assert_eq!(select_best(&[0.3, 0.7, 0.5]).unwrap(), (0.7, 1));
/// ```
pub fn select_best(scores: &[f64]) -> Result<(f64, usize)> {
    check_scores(scores)?;
    let mut best = (scores[0], 0);
    for (i, &f) in scores.iter().enumerate().skip(1) {
        if f > best.0 {
            best = (f, i);
        }
    }
    Ok(best)
}

/// Arithmetic mean of the scores.
pub fn simple_average(scores: &[f64]) -> Result<f64> {
    check_scores(scores)?;
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    let (lo, hi) = bounds(scores);
    Ok(mean.clamp(lo, hi))
}

/// Softmax-weighted mean with weights `exp(tau * f_i) / sum_j exp(tau * f_j)`.
///
/// Returns the score together with the weights.
pub fn weighted_average(scores: &[f64], tau: f64) -> Result<(f64, Vec<f64>)> {
    check_scores(scores)?;
    check_tau(tau)?;
    let (lo, hi) = bounds(scores);
    let exps: Vec<f64> = scores.iter().map(|&f| (tau * (f - hi)).exp()).collect();
    let total: f64 = exps.iter().sum();
    let weights: Vec<f64> = exps.iter().map(|e| e / total).collect();
    let score = scores.iter().zip(&exps).map(|(f, e)| f * e).sum::<f64>() / total;
    Ok((score.clamp(lo, hi), weights))
}

/// Reference length used in the brevity penalty of the merged strategy:
/// the constituent length that maximizes the penalty for a hypothesis of
/// length `c`.
///
/// If any reference is shorter than `c` the penalty is 1, otherwise the
/// shortest reference gives the mildest penalty. Both cases reduce to the
/// minimum length, so `c` does not change the choice.
pub fn merged_ref_length(_c: usize, lengths: &[usize]) -> Result<usize> {
    lengths.iter().copied().min().ok_or(Error::EmptyReferences)
}

/// GLEU against the multiset sum of all reference profiles.
pub fn merged_gleu(
    src: &NgramProfile,
    hyp: &NgramProfile,
    refs: &[NgramProfile],
    max_order: usize,
) -> Result<SentenceScore> {
    if refs.is_empty() {
        return Err(Error::EmptyReferences);
    }
    let union = merge_profiles(refs)?;
    let r = merged_ref_length(hyp.token_len(), union.lengths())?;
    sentence_gleu(src, hyp, &union, r, max_order)
}

/// Scores one segment under every strategy.
///
/// Fails with [`Error::NoReferences`] when the segment has no non-empty
/// reference.
pub fn score_segment(segment: &Segment, config: &StrategyConfig) -> Result<SegmentResult> {
    config.validate()?;
    let n = config.max_order;
    let build = |raw: &str| profile(&tokenize(&normalize(raw), config.mode), n);
    let refs = segment
        .available_references()
        .map(build)
        .collect::<Result<Vec<_>>>()?;
    if refs.is_empty() {
        return Err(Error::NoReferences);
    }
    let src = build(&segment.source)?;
    let hyp = build(&segment.hypothesis)?;

    let per_reference = refs
        .iter()
        .map(|r| sentence_gleu(&src, &hyp, r, r.token_len(), n).map(|s| s.value))
        .collect::<Result<Vec<_>>>()?;
    let (best, selected_index) = select_best(&per_reference)?;
    let average = simple_average(&per_reference)?;
    let (weighted, weights) = weighted_average(&per_reference, config.tau)?;
    let merged = merged_gleu(&src, &hyp, &refs, n)?;

    Ok(SegmentResult {
        per_strategy: StrategyScores {
            select_best: best,
            simple_average: average,
            weighted_average: weighted,
            merged: merged.value,
            single_reference: per_reference[0],
        },
        per_reference,
        selected_index,
        weights,
        merged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::tokenize_words;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest};

    fn p(s: &str, n: usize) -> NgramProfile {
        profile(&tokenize_words(s), n).unwrap()
    }

    #[test]
    fn select_best_examples() {
        assert_eq!(select_best(&[0.3, 0.7, 0.5]).unwrap(), (0.7, 1));
        assert_eq!(select_best(&[0.4]).unwrap(), (0.4, 0));
        assert_eq!(select_best(&[0.5, 0.5]).unwrap(), (0.5, 0));
        assert_eq!(select_best(&[]), Err(Error::EmptyScores));
        assert_eq!(select_best(&[1.5]), Err(Error::ScoreOutOfRange(1.5)));
        assert!(select_best(&[f64::NAN]).is_err());
    }

    #[test]
    fn simple_average_examples() {
        assert_abs_diff_eq!(simple_average(&[0.3, 0.7, 0.5]).unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(simple_average(&[0.4]).unwrap(), 0.4);
        assert_eq!(simple_average(&[0.0, 1.0]).unwrap(), 0.5);
        assert_eq!(simple_average(&[]), Err(Error::EmptyScores));
    }

    #[test]
    fn weighted_average_examples() {
        let s = [0.3, 0.7, 0.5];
        // softmax(0.3, 0.7, 0.5) . (0.3, 0.7, 0.5), evaluated by hand
        let (v, w) = weighted_average(&s, 1.0).unwrap();
        assert_abs_diff_eq!(v, 0.526491, epsilon = 1e-6);
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(weighted_average(&s, 1e-6).unwrap().0, 0.5, epsilon = 1e-4);
        assert_abs_diff_eq!(weighted_average(&s, 1000.0).unwrap().0, 0.7, epsilon = 1e-6);
        assert_eq!(weighted_average(&s, 0.0), Err(Error::InvalidTemperature(0.0)));
        assert_eq!(weighted_average(&s, -1.0), Err(Error::InvalidTemperature(-1.0)));
        assert_eq!(weighted_average(&[], 1.0), Err(Error::EmptyScores));
    }

    #[test]
    fn merged_single_reference_is_plain_gleu() {
        let (s, h, r) = (p("a a b", 2), p("a a b", 2), p("a b", 2));
        let merged = merged_gleu(&s, &h, std::slice::from_ref(&r), 2).unwrap();
        let plain = sentence_gleu(&s, &h, &r, 2, 2).unwrap();
        assert_eq!(merged, plain);
    }

    #[test]
    fn merged_two_references() {
        let (s, h) = (p("a a b", 2), p("a a b", 2));
        let refs = [p("a b", 2), p("a a b", 2)];
        let score = merged_gleu(&s, &h, &refs, 2).unwrap();
        assert_eq!(score.value, 1.0);
        assert_eq!(score.ref_length_used, 2);
        assert_eq!(merged_gleu(&s, &h, &[], 2), Err(Error::EmptyReferences));
    }

    #[test]
    fn merged_length_rule() {
        assert_eq!(merged_ref_length(5, &[7, 3, 9]).unwrap(), 3);
        assert_eq!(merged_ref_length(2, &[7, 3, 9]).unwrap(), 3);
        assert!(merged_ref_length(2, &[]).is_err());
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.as_str().parse::<Strategy>().unwrap(), s);
        }
        assert!("best".parse::<Strategy>().is_err());
    }

    #[test]
    fn perfect_hypothesis_segment() {
        let seg = Segment::new("he go to school", "he goes to school", ["he goes to school"; 2]);
        let r = score_segment(&seg, &StrategyConfig::default()).unwrap();
        for st in Strategy::ALL {
            assert_eq!(r.per_strategy.get(st), 1.0, "{st}");
        }
    }

    #[test]
    fn single_reference_segment_coincides() {
        let seg = Segment::new(
            "yesterday she go to school by the bus",
            "yesterday she went to school by bus",
            ["yesterday she went to school on the bus"],
        );
        let r = score_segment(&seg, &StrategyConfig::default()).unwrap();
        let v = r.per_strategy.select_best;
        assert!(v > 0.0);
        for st in Strategy::ALL {
            assert_eq!(r.per_strategy.get(st), v, "{st}");
        }
    }

    #[test]
    fn two_reference_segment() {
        let seg = Segment::new(
            "the cat sit on mat",
            "the cat sits on the mat",
            ["a cat is sitting on a mat", "the cat sits on the mat"],
        );
        let r = score_segment(&seg, &StrategyConfig::default()).unwrap();
        let f = &r.per_reference;
        assert_eq!(f.len(), 2);
        assert_eq!(r.per_strategy.select_best, f[0].max(f[1]));
        assert_eq!(r.selected_index, 1);
        assert_abs_diff_eq!(r.per_strategy.simple_average, (f[0] + f[1]) / 2.0, epsilon = 1e-15);
        let w = r.per_strategy.weighted_average;
        assert!(r.per_strategy.simple_average < w && w < r.per_strategy.select_best);
        assert_eq!(r.per_strategy.merged, 1.0);
    }

    #[test]
    fn segment_without_references() {
        let seg = Segment::new("a", "a", ["", "  "]);
        assert_eq!(
            score_segment(&seg, &StrategyConfig::default()),
            Err(Error::NoReferences)
        );
    }

    fn arb_scores() -> impl proptest::strategy::Strategy<Value = Vec<f64>> {
        proptest::collection::vec(0.0f64..=1.0, 1..8)
    }

    proptest! {
        #[test]
        fn averages_bounded_by_extremes(scores in arb_scores(), tau in 1e-3f64..50.0) {
            let (best, _) = select_best(&scores).unwrap();
            let lo = scores.iter().copied().fold(f64::INFINITY, f64::min);
            let avg = simple_average(&scores).unwrap();
            let (w, weights) = weighted_average(&scores, tau).unwrap();
            prop_assert!(lo <= avg && avg <= best);
            prop_assert!(lo <= w && w <= best);
            prop_assert!(weights.iter().all(|&x| x >= 0.0));
            prop_assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }

        #[test]
        fn permutation_invariance(mut scores in arb_scores(), tau in 1e-3f64..50.0) {
            let before = (
                select_best(&scores).unwrap().0,
                simple_average(&scores).unwrap(),
                weighted_average(&scores, tau).unwrap().0,
            );
            scores.reverse();
            let after = (
                select_best(&scores).unwrap().0,
                simple_average(&scores).unwrap(),
                weighted_average(&scores, tau).unwrap().0,
            );
            prop_assert_eq!(before.0, after.0);
            prop_assert!((before.1 - after.1).abs() < 1e-12);
            prop_assert!((before.2 - after.2).abs() < 1e-12);
        }
    }
}
