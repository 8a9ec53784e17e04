//! Seeded generators for synthetic corpora.

#![allow(dead_code)]

use mrgleu::aggregate::Segment;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn words(rng: &mut ChaCha8Rng, vocab: usize, len: usize) -> Vec<String> {
    (0..len).map(|_| format!("w{}", rng.gen_range(0..vocab))).collect()
}

/// Applies random substitutions, deletions and insertions with rate `p`.
pub fn mutate(rng: &mut ChaCha8Rng, seq: &[String], vocab: usize, p: f64) -> Vec<String> {
    let mut out = Vec::with_capacity(seq.len() + 2);
    for tok in seq {
        let roll: f64 = rng.gen();
        if roll < p / 3.0 {
            out.push(format!("w{}", rng.gen_range(0..vocab)));
        } else if roll < 2.0 * p / 3.0 {
            // deleted
        } else if roll < p {
            out.push(tok.clone());
            out.push(format!("w{}", rng.gen_range(0..vocab)));
        } else {
            out.push(tok.clone());
        }
    }
    out
}

/// A segment whose hypothesis and references are noisy edits of a hidden
/// target sentence, and whose source is a noisier edit of it.
pub fn segment(rng: &mut ChaCha8Rng, vocab: usize, len: usize, n_refs: usize) -> Segment {
    let target = words(rng, vocab, len);
    let source = mutate(rng, &target, vocab, 0.3);
    let hyp = mutate(rng, &target, vocab, 0.15);
    let refs: Vec<String> = (0..n_refs)
        .map(|_| mutate(rng, &target, vocab, 0.1).join(" "))
        .map(|r| if r.is_empty() { "w0".to_owned() } else { r })
        .collect();
    Segment::new(source.join(" "), hyp.join(" "), refs)
}

/// Single-character token sequences as byte strings.
pub fn bytes(rng: &mut ChaCha8Rng, alphabet: &[u8], max_len: usize) -> Vec<u8> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
}

pub fn edit_bytes(rng: &mut ChaCha8Rng, seq: &[u8], alphabet: &[u8], p: f64) -> Vec<u8> {
    let mut out = Vec::new();
    for &b in seq {
        let roll: f64 = rng.gen();
        if roll < p / 2.0 {
            out.push(alphabet[rng.gen_range(0..alphabet.len())]);
        } else if roll >= p {
            out.push(b);
        }
    }
    out
}
