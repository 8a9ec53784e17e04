//! Multi-reference BLEU, kept as a baseline for comparison with merged GLEU.
//!
//! Hypothesis n-gram counts are clipped by the maximum count over the
//! references (not the sum), and the brevity penalty uses the reference
//! length closest to the hypothesis length. Short-hypothesis and
//! zero-precision handling is shared with [`crate::gleu`].

use crate::error::{Error, Result};
use crate::gleu::{brevity_penalty, check_profiles, combine, PrecisionTerm};
use crate::ngram::NgramProfile;

#[derive(Debug, Clone, PartialEq)]
pub struct BleuScore {
    pub value: f64,
    pub precisions: Vec<PrecisionTerm>,
    pub bp: f64,
    pub effective_orders: Vec<usize>,
    /// Closest reference length.
    pub r_star: usize,
}

/// Precision of order `n` with counts clipped by the per-n-gram maximum
/// across `refs`.
pub fn clipped_precision(
    hyp: &NgramProfile,
    refs: &[NgramProfile],
    n: usize,
) -> Result<PrecisionTerm> {
    if refs.is_empty() {
        return Err(Error::EmptyReferences);
    }
    check_profiles(std::iter::once(hyp).chain(refs), n)?;
    let mut numerator = 0;
    let mut denominator = 0;
    for (gram, c_h) in hyp.order(n) {
        let max_ref = refs.iter().map(|r| r.count(gram)).max().unwrap_or(0);
        numerator += c_h.min(max_ref);
        denominator += c_h;
    }
    Ok(PrecisionTerm {
        order: n,
        numerator,
        denominator,
    })
}

/// Reference length closest to `c`; ties go to the shorter length.
///
/// ```
/// use mrgleu::bleu::closest_ref_length;
/// assert_eq!(closest_ref_length(10, &[8, 11]).unwrap(), 11);
/// assert_eq!(closest_ref_length(10, &[11, 9]).unwrap(), 9);
/// ```
pub fn closest_ref_length(c: usize, lengths: &[usize]) -> Result<usize> {
    lengths
        .iter()
        .copied()
        .min_by_key(|&r| (r.abs_diff(c), r))
        .ok_or(Error::EmptyReferences)
}

pub fn sentence_bleu(hyp: &NgramProfile, refs: &[NgramProfile], max_order: usize) -> Result<BleuScore> {
    if refs.is_empty() {
        return Err(Error::EmptyReferences);
    }
    check_profiles(std::iter::once(hyp).chain(refs), max_order)?;
    let precisions = (1..=max_order)
        .map(|n| clipped_precision(hyp, refs, n))
        .collect::<Result<Vec<_>>>()?;
    let c = hyp.token_len();
    let lengths: Vec<usize> = refs.iter().flat_map(|r| r.lengths().iter().copied()).collect();
    let r_star = closest_ref_length(c, &lengths)?;
    let bp = brevity_penalty(c, r_star);
    let (value, effective_orders) = combine(&precisions, bp);
    Ok(BleuScore {
        value,
        precisions,
        bp,
        effective_orders,
        r_star,
    })
}
