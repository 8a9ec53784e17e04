//! Text normalization and tokenization.
//!
//! Every score in this crate is computed over a [`TokenSeq`], so the rules
//! here fix the preprocessing contract:
//!
//! * [`normalize`] applies Unicode NFC, collapses every whitespace run to a
//!   single ASCII space and trims both ends.
//! * [`tokenize_words`] splits on whitespace and detaches every character of
//!   Unicode general category `P*` into a token of its own.
//! * [`tokenize_chars`] emits one token per Unicode scalar value and drops
//!   whitespace entirely. This is the mode for unsegmented scripts.

use std::fmt;

use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_normalization::UnicodeNormalization;

/// Unit of tokenization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum TokenMode {
    #[default]
    Word,
    Char,
}

impl TokenMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TokenMode::Word => "word",
            TokenMode::Char => "char",
        }
    }
}

impl fmt::Display for TokenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A tokenized segment.
///
/// Tokens are never empty. In word mode they contain no whitespace; in char
/// mode each token is exactly one scalar value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSeq {
    tokens: Vec<String>,
    mode: TokenMode,
}

impl TokenSeq {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn mode(&self) -> TokenMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn into_tokens(self) -> Vec<String> {
        self.tokens
    }
}

/// NFC-normalizes `raw`, collapses whitespace runs to one space and trims.
///
/// ```
/// assert_eq!(mrgleu::text::normalize("  a \t b\n"), "a b");
/// ```
pub fn normalize(raw: &str) -> String {
    let composed: String = raw.nfc().collect();
    let mut out = String::with_capacity(composed.len());
    for piece in composed.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(piece);
    }
    out
}

fn is_punctuation(c: char) -> bool {
    matches!(
        get_general_category(c),
        GeneralCategory::ConnectorPunctuation
            | GeneralCategory::DashPunctuation
            | GeneralCategory::OpenPunctuation
            | GeneralCategory::ClosePunctuation
            | GeneralCategory::InitialPunctuation
            | GeneralCategory::FinalPunctuation
            | GeneralCategory::OtherPunctuation
    )
}

/// Splits normalized text into word tokens.
///
/// ```
/// use mrgleu::text::tokenize_words;
/// let seq = tokenize_words("Hello, world!");
/// assert_eq!(seq.tokens(), ["Hello", ",", "world", "!"]);
/// ```
pub fn tokenize_words(text: &str) -> TokenSeq {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let mut word_start = None;
        for (i, c) in chunk.char_indices() {
            if is_punctuation(c) {
                if let Some(start) = word_start.take() {
                    tokens.push(chunk[start..i].to_owned());
                }
                tokens.push(c.to_string());
            } else if word_start.is_none() {
                word_start = Some(i);
            }
        }
        if let Some(start) = word_start {
            tokens.push(chunk[start..].to_owned());
        }
    }
    TokenSeq {
        tokens,
        mode: TokenMode::Word,
    }
}

/// Splits normalized text into one token per non-whitespace scalar value.
///
/// ```
/// use mrgleu::text::tokenize_chars;
/// assert_eq!(tokenize_chars("他去学校").len(), 4);
/// ```
pub fn tokenize_chars(text: &str) -> TokenSeq {
    TokenSeq {
        tokens: text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(String::from)
            .collect(),
        mode: TokenMode::Char,
    }
}

/// Tokenizes already-normalized text in the given mode.
pub fn tokenize(text: &str, mode: TokenMode) -> TokenSeq {
    match mode {
        TokenMode::Word => tokenize_words(text),
        TokenMode::Char => tokenize_chars(text),
    }
}

/// Normalizes then tokenizes raw text.
pub fn prepare(raw: &str, mode: TokenMode) -> TokenSeq {
    tokenize(&normalize(raw), mode)
}
