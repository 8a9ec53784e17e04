//! Multi-reference GLEU for grammatical error correction.
//!
//! Sentence GLEU rewards n-grams shared with a reference and penalizes
//! n-grams copied from the source that the reference changed. This crate
//! scores a hypothesis against several references with five strategies
//! (select-best, simple average, softmax-weighted average, merged counts and
//! a single-reference baseline) and provides corpus analyses on top.
//!
//! ```
//! use mrgleu::aggregate::{score_segment, Segment, Strategy, StrategyConfig};
//!
//! let seg = Segment::new("he go home", "he goes home", ["he goes home", "he went home"]);
//! let r = score_segment(&seg, &StrategyConfig::default())?;
//! assert_eq!(r.per_strategy.get(Strategy::SelectBest), 1.0);
//! assert!(r.per_strategy.get(Strategy::SimpleAverage) < 1.0);
//! # Ok::<(), mrgleu::Error>(())
//! ```
//!
//! Modules build on each other: [`text`] normalizes and tokenizes,
//! [`ngram`] counts, [`gleu`] and [`bleu`] score one reference,
//! [`aggregate`] combines references and [`corpus`] works over segments.

pub mod aggregate;
pub mod bleu;
pub mod corpus;
pub mod error;
pub mod gleu;
pub mod ngram;
pub mod text;

pub use error::{Error, Result};

macro_rules! book_chapters {
    ($($name:ident => $file:literal),* $(,)?) => {
        $(
            #[cfg(doctest)]
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            mod $name {}
        )*
    };
}

book_chapters! {
    book_introduction => "introduction.md",
    book_text => "text.md",
    book_ngrams => "ngrams.md",
    book_gleu => "gleu.md",
    book_aggregation => "aggregation.md",
    book_bleu => "bleu.md",
    book_corpus => "corpus.md",
    book_cli => "cli.md",
    book_properties => "properties.md",
}
