//! Sentence-level GLEU against a single (possibly merged) reference profile.
//!
//! For each hypothesis n-gram `g` the matched count is
//!
//! ```text
//! max(min(C_H(g), C_R(g)) - min(C_H(g), max(0, C_S(g) - C_R(g))), 0)
//! ```
//!
//! so n-grams shared with the reference are rewarded while n-grams the
//! reference removed from the source are charged against the hypothesis.
//! Precisions of orders `1..=N` are combined with uniform weights and a BLEU
//! brevity penalty.
//!
//! Orders for which the hypothesis has no n-grams (it is shorter than `n`)
//! are dropped and the remaining orders reweighted uniformly. Any remaining
//! order with a zero numerator makes the score 0; there is no smoothing.

use crate::error::{Error, Result};
use crate::ngram::NgramProfile;

/// Numerator and denominator of one order's modified precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionTerm {
    pub order: usize,
    pub numerator: usize,
    pub denominator: usize,
}

impl PrecisionTerm {
    pub fn value(&self) -> Option<f64> {
        (self.denominator > 0).then(|| self.numerator as f64 / self.denominator as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentenceScore {
    pub value: f64,
    pub precisions: Vec<PrecisionTerm>,
    pub bp: f64,
    /// Orders with a non-zero denominator.
    pub effective_orders: Vec<usize>,
    /// Reference length `r` fed to the brevity penalty.
    pub ref_length_used: usize,
}

/// Matched count of one n-gram given its hypothesis, reference and source
/// counts.
///
/// ```
/// use mrgleu::gleu::effective_match_count;
/// assert_eq!(effective_match_count(1, 1, 0), 1);
/// assert_eq!(effective_match_count(2, 1, 2), 0);
/// ```
pub fn effective_match_count(c_h: usize, c_r: usize, c_s: usize) -> usize {
    let rewarded = c_h.min(c_r);
    let penalized = c_h.min(c_s.saturating_sub(c_r));
    rewarded.saturating_sub(penalized)
}

fn check_order(profile: &NgramProfile, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    if n > profile.max_order() {
        return Err(Error::OrderTooLarge {
            requested: n,
            available: profile.max_order(),
        });
    }
    Ok(())
}

/// Modified precision of order `n`.
pub fn modified_precision(
    hyp: &NgramProfile,
    src: &NgramProfile,
    reference: &NgramProfile,
    n: usize,
) -> Result<PrecisionTerm> {
    for p in [hyp, src, reference] {
        check_order(p, n)?;
    }
    let mut numerator = 0;
    let mut denominator = 0;
    for (gram, c_h) in hyp.order(n) {
        numerator += effective_match_count(c_h, reference.count(gram), src.count(gram));
        denominator += c_h;
    }
    Ok(PrecisionTerm {
        order: n,
        numerator,
        denominator,
    })
}

/// BLEU brevity penalty for hypothesis length `c` and reference length `r`.
///
/// Returns 0 for an empty hypothesis.
pub fn brevity_penalty(c: usize, r: usize) -> f64 {
    if c == 0 {
        0.0
    } else if c > r {
        1.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    }
}

/// Geometric mean of the effective precisions scaled by `bp`.
///
/// Returns the score and the list of effective orders.
pub(crate) fn combine(precisions: &[PrecisionTerm], bp: f64) -> (f64, Vec<usize>) {
    let effective: Vec<&PrecisionTerm> = precisions.iter().filter(|p| p.denominator > 0).collect();
    let orders = effective.iter().map(|p| p.order).collect();
    if effective.is_empty() || effective.iter().any(|p| p.numerator == 0) {
        return (0.0, orders);
    }
    let log_sum: f64 = effective
        .iter()
        .map(|p| (p.numerator as f64 / p.denominator as f64).ln())
        .sum();
    let value = bp * (log_sum / effective.len() as f64).exp();
    (value.clamp(0.0, 1.0), orders)
}

pub(crate) fn check_profiles<'a>(
    profiles: impl IntoIterator<Item = &'a NgramProfile>,
    max_order: usize,
) -> Result<()> {
    if max_order == 0 {
        return Err(Error::InvalidOrder);
    }
    let mut mode = None;
    for p in profiles {
        check_order(p, max_order)?;
        match mode {
            None => mode = Some(p.mode()),
            Some(m) if m != p.mode() => return Err(Error::ModeMismatch(m, p.mode())),
            Some(_) => {}
        }
    }
    Ok(())
}

/// GLEU of `hyp` given `src` and one reference profile, using orders
/// `1..=max_order` and `ref_length` as the brevity-penalty reference length.
pub fn sentence_gleu(
    src: &NgramProfile,
    hyp: &NgramProfile,
    reference: &NgramProfile,
    ref_length: usize,
    max_order: usize,
) -> Result<SentenceScore> {
    check_profiles([src, hyp, reference], max_order)?;
    let precisions = (1..=max_order)
        .map(|n| modified_precision(hyp, src, reference, n))
        .collect::<Result<Vec<_>>>()?;
    let bp = brevity_penalty(hyp.token_len(), ref_length);
    let (value, effective_orders) = combine(&precisions, bp);
    Ok(SentenceScore {
        value,
        precisions,
        bp,
        effective_orders,
        ref_length_used: ref_length,
    })
}
