//! Brute-force reference implementations used to check the library.
//!
//! Sequences are byte strings, one byte per token. Nothing here calls into
//! `mrgleu`: n-grams are enumerated by scanning windows and counted by
//! comparing every window.

#![allow(dead_code)]

/// Occurrences of `gram` in `seq`, by comparing every window.
pub fn count(seq: &[u8], gram: &[u8]) -> i64 {
    if gram.is_empty() || gram.len() > seq.len() {
        return 0;
    }
    let mut c = 0;
    for start in 0..=seq.len() - gram.len() {
        if &seq[start..start + gram.len()] == gram {
            c += 1;
        }
    }
    c
}

/// Distinct n-grams of `seq`, in first-occurrence order.
pub fn distinct_ngrams(seq: &[u8], n: usize) -> Vec<&[u8]> {
    let mut out: Vec<&[u8]> = Vec::new();
    if n == 0 || n > seq.len() {
        return out;
    }
    for start in 0..=seq.len() - n {
        let g = &seq[start..start + n];
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// `max(min(h, r) - min(h, max(0, s - r)), 0)` in signed arithmetic.
pub fn count_prime(h: i64, r: i64, s: i64) -> i64 {
    (h.min(r) - h.min((s - r).max(0))).max(0)
}

pub fn bp(c: usize, r: usize) -> f64 {
    if c == 0 {
        0.0
    } else if c > r {
        1.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    }
}

/// Geometric mean over orders with a non-zero denominator, times `bp`.
pub fn combine(terms: &[(i64, i64)], bp: f64) -> f64 {
    let used: Vec<&(i64, i64)> = terms.iter().filter(|t| t.1 > 0).collect();
    if used.is_empty() || used.iter().any(|t| t.0 == 0) {
        return 0.0;
    }
    let logs: f64 = used.iter().map(|t| (t.0 as f64 / t.1 as f64).ln()).sum();
    bp * (logs / used.len() as f64).exp()
}

/// Precision terms `(numerator, denominator)` of GLEU for orders `1..=max_order`.
pub fn gleu_terms(src: &[u8], hyp: &[u8], reference: &[u8], max_order: usize) -> Vec<(i64, i64)> {
    (1..=max_order)
        .map(|n| {
            let mut num = 0;
            let mut den = 0;
            for g in distinct_ngrams(hyp, n) {
                let ch = count(hyp, g);
                num += count_prime(ch, count(reference, g), count(src, g));
                den += ch;
            }
            (num, den)
        })
        .collect()
}

pub fn gleu(src: &[u8], hyp: &[u8], reference: &[u8], max_order: usize) -> f64 {
    combine(&gleu_terms(src, hyp, reference, max_order), bp(hyp.len(), reference.len()))
}

/// GLEU against the summed counts of `refs`, with the shortest reference
/// length in the brevity penalty.
pub fn merged_gleu(src: &[u8], hyp: &[u8], refs: &[&[u8]], max_order: usize) -> f64 {
    let terms: Vec<(i64, i64)> = (1..=max_order)
        .map(|n| {
            let mut num = 0;
            let mut den = 0;
            for g in distinct_ngrams(hyp, n) {
                let ch = count(hyp, g);
                let cr: i64 = refs.iter().map(|r| count(r, g)).sum();
                num += count_prime(ch, cr, count(src, g));
                den += ch;
            }
            (num, den)
        })
        .collect();
    let r = refs.iter().map(|r| r.len()).min().unwrap();
    combine(&terms, bp(hyp.len(), r))
}

/// Multi-reference BLEU with max clipping and the closest (then shorter)
/// reference length.
pub fn bleu(hyp: &[u8], refs: &[&[u8]], max_order: usize) -> f64 {
    let terms: Vec<(i64, i64)> = (1..=max_order)
        .map(|n| {
            let mut num = 0;
            let mut den = 0;
            for g in distinct_ngrams(hyp, n) {
                let ch = count(hyp, g);
                let cr = refs.iter().map(|r| count(r, g)).max().unwrap();
                num += ch.min(cr);
                den += ch;
            }
            (num, den)
        })
        .collect();
    let c = hyp.len() as i64;
    let mut best = refs[0].len();
    for r in refs {
        let (d, bd) = ((r.len() as i64 - c).abs(), (best as i64 - c).abs());
        if d < bd || (d == bd && r.len() < best) {
            best = r.len();
        }
    }
    combine(&terms, bp(hyp.len(), best))
}

/// Every sequence over `alphabet` of length `0..=max_len`.
pub fn all_sequences(alphabet: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    let mut all = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for &a in alphabet {
                let mut t = s.clone();
                t.push(a);
                next.push(t);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}
