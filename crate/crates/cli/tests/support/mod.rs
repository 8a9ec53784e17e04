pub mod gen;
pub mod oracle;

use mrgleu::ngram::{profile, NgramProfile};
use mrgleu::text::{tokenize_words, TokenSeq};

/// Word tokens for a byte string, one token per byte.
pub fn tokens(seq: &[u8]) -> TokenSeq {
    let parts: Vec<String> = seq.iter().map(|&b| (b as char).to_string()).collect();
    tokenize_words(&parts.join(" "))
}

pub fn prof(seq: &[u8], max_order: usize) -> NgramProfile {
    profile(&tokens(seq), max_order).unwrap()
}
