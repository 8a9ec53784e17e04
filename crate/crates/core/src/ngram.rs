//! N-gram count profiles.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::text::{TokenMode, TokenSeq};

/// An n-gram: a non-empty run of consecutive tokens.
pub type Ngram = Box<[String]>;

/// Per-order multiset of n-grams for one token sequence, or for several
/// sequences summed together by [`merge_profiles`].
///
/// Every stored count is at least 1. For an unmerged profile the counts of
/// order `n` sum to `max(0, length - n + 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NgramProfile {
    orders: Vec<FxHashMap<Ngram, usize>>,
    lengths: Vec<usize>,
    mode: TokenMode,
}

impl NgramProfile {
    /// Counts every contiguous n-gram of order `1..=max_order` in `tokens`.
    pub fn new(tokens: &TokenSeq, max_order: usize) -> Result<Self> {
        if max_order == 0 {
            return Err(Error::InvalidOrder);
        }
        let toks = tokens.tokens();
        let orders = (1..=max_order)
            .map(|n| {
                let mut counts = FxHashMap::default();
                for window in toks.windows(n) {
                    *counts.entry(Ngram::from(window)).or_insert(0) += 1;
                }
                counts
            })
            .collect();
        Ok(NgramProfile {
            orders,
            lengths: vec![toks.len()],
            mode: tokens.mode(),
        })
    }

    pub fn max_order(&self) -> usize {
        self.orders.len()
    }

    pub fn mode(&self) -> TokenMode {
        self.mode
    }

    /// Token lengths of the constituent sequences. A plain profile has one
    /// entry; a merged profile has one per merged reference.
    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Total token count across constituents.
    pub fn token_len(&self) -> usize {
        self.lengths.iter().sum()
    }

    /// Count of `gram`, or 0 when it is absent or longer than `max_order`.
    pub fn count(&self, gram: &[String]) -> usize {
        match gram.len() {
            0 => 0,
            n if n > self.orders.len() => 0,
            n => self.orders[n - 1].get(gram).copied().unwrap_or(0),
        }
    }

    /// Iterates the `(n-gram, count)` pairs of order `n` in arbitrary order.
    ///
    /// Panics if `n` is 0 or exceeds [`max_order`](Self::max_order).
    pub fn order(&self, n: usize) -> impl Iterator<Item = (&[String], usize)> {
        self.orders[n - 1].iter().map(|(g, &c)| (&**g, c))
    }

    /// Number of distinct n-grams of order `n`.
    pub fn distinct(&self, n: usize) -> usize {
        self.orders[n - 1].len()
    }

    /// Sum of counts of order `n`.
    pub fn total(&self, n: usize) -> usize {
        self.orders[n - 1].values().sum()
    }

    /// Counts of order `n`, sorted by n-gram, for inspection and debug output.
    pub fn sorted_counts(&self, n: usize) -> Vec<(&[String], usize)> {
        let mut v: Vec<_> = self.order(n).collect();
        v.sort_unstable();
        v
    }

    fn check_compatible(&self, other: &NgramProfile) -> Result<()> {
        if self.max_order() != other.max_order() {
            return Err(Error::MaxOrderMismatch(self.max_order(), other.max_order()));
        }
        if self.mode != other.mode {
            return Err(Error::ModeMismatch(self.mode, other.mode));
        }
        Ok(())
    }
}

/// Builds the n-gram profile of `tokens` up to `max_order`.
pub fn profile(tokens: &TokenSeq, max_order: usize) -> Result<NgramProfile> {
    NgramProfile::new(tokens, max_order)
}

/// Sums the counts of several profiles into one multiset.
///
/// Counts are added, not max-clipped, and the constituent lengths are kept
/// in input order.
pub fn merge_profiles<'a, I>(profiles: I) -> Result<NgramProfile>
where
    I: IntoIterator<Item = &'a NgramProfile>,
{
    let mut iter = profiles.into_iter();
    let first = iter.next().ok_or(Error::EmptyProfileList)?;
    let mut merged = first.clone();
    for p in iter {
        merged.check_compatible(p)?;
        for (dst, src) in merged.orders.iter_mut().zip(&p.orders) {
            for (g, &c) in src {
                *dst.entry(g.clone()).or_insert(0) += c;
            }
        }
        merged.lengths.extend_from_slice(&p.lengths);
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{tokenize_chars, tokenize_words};
    use proptest::prelude::*;

    fn seq(s: &str) -> TokenSeq {
        tokenize_words(s)
    }

    fn g(parts: &[&str]) -> Vec<String> {
        parts.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn counts_small_sequence() {
        let p = profile(&seq("a a b"), 2).unwrap();
        assert_eq!(p.count(&g(&["a"])), 2);
        assert_eq!(p.count(&g(&["b"])), 1);
        assert_eq!(p.count(&g(&["a", "a"])), 1);
        assert_eq!(p.count(&g(&["a", "b"])), 1);
        assert_eq!(p.distinct(1), 2);
        assert_eq!(p.distinct(2), 2);
        assert_eq!(p.lengths(), [3]);
    }

    #[test]
    fn short_and_empty_sequences() {
        let p = profile(&seq("x"), 4).unwrap();
        assert_eq!(p.count(&g(&["x"])), 1);
        for n in 2..=4 {
            assert_eq!(p.distinct(n), 0);
        }
        let e = profile(&seq(""), 4).unwrap();
        assert_eq!(e.lengths(), [0]);
        assert!((1..=4).all(|n| e.distinct(n) == 0));
    }

    #[test]
    fn zero_order_rejected() {
        assert_eq!(profile(&seq("a"), 0), Err(Error::InvalidOrder));
    }

    #[test]
    fn merge_sums_counts() {
        let a = profile(&seq("a b"), 1).unwrap();
        let b = profile(&seq("a c"), 1).unwrap();
        let m = merge_profiles([&a, &b]).unwrap();
        assert_eq!(m.count(&g(&["a"])), 2);
        assert_eq!(m.count(&g(&["b"])), 1);
        assert_eq!(m.count(&g(&["c"])), 1);
        assert_eq!(m.lengths(), [2, 2]);

        let single = merge_profiles([&a]).unwrap();
        assert_eq!(single, a);

        let x = profile(&seq("a"), 1).unwrap();
        let three = merge_profiles([&x, &x, &x]).unwrap();
        assert_eq!(three.count(&g(&["a"])), 3);
    }

    #[test]
    fn merge_rejects_bad_input() {
        let none: [&NgramProfile; 0] = [];
        assert_eq!(merge_profiles(none), Err(Error::EmptyProfileList));
        let a = profile(&seq("a"), 1).unwrap();
        let b = profile(&seq("a"), 2).unwrap();
        assert_eq!(merge_profiles([&a, &b]), Err(Error::MaxOrderMismatch(1, 2)));
        let c = profile(&tokenize_chars("a"), 1).unwrap();
        assert_eq!(
            merge_profiles([&a, &c]),
            Err(Error::ModeMismatch(TokenMode::Word, TokenMode::Char))
        );
    }

    fn naive_count(seq: &[u8], gram: &[u8]) -> usize {
        if gram.len() > seq.len() {
            return 0;
        }
        (0..=seq.len() - gram.len())
            .filter(|&i| &seq[i..i + gram.len()] == gram)
            .count()
    }

    fn to_tokens(s: &[u8]) -> TokenSeq {
        let text: Vec<String> = s.iter().map(|&b| (b as char).to_string()).collect();
        tokenize_words(&text.join(" "))
    }

    #[test]
    fn matches_sliding_window_oracle_exhaustively() {
        let alphabet = b"abc";
        let max_order = 4;
        let mut seqs: Vec<Vec<u8>> = vec![vec![]];
        let mut frontier = seqs.clone();
        for _ in 0..8 {
            let next: Vec<Vec<u8>> = frontier
                .iter()
                .flat_map(|s| {
                    alphabet.iter().map(move |&c| {
                        let mut t = s.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
            seqs.extend(next.iter().cloned());
            frontier = next;
        }
        assert_eq!(seqs.len(), (0..=8).map(|k| 3usize.pow(k)).sum::<usize>());
        for s in &seqs {
            let p = profile(&to_tokens(s), max_order).unwrap();
            for n in 1..=max_order {
                let expected_total = s.len().saturating_sub(n - 1);
                assert_eq!(p.total(n), expected_total);
                for (gram, c) in p.order(n) {
                    assert!(c >= 1);
                    let bytes: Vec<u8> = gram.iter().map(|t| t.as_bytes()[0]).collect();
                    assert_eq!(c, naive_count(s, &bytes), "{s:?} {bytes:?}");
                }
            }
        }
    }

    fn arb_profile() -> impl Strategy<Value = NgramProfile> {
        proptest::collection::vec(prop_oneof!["a", "b", "c", "d"], 0..10).prop_map(|toks| {
            profile(&tokenize_words(&toks.join(" ")), 3).unwrap()
        })
    }

    proptest! {
        #[test]
        fn merge_is_commutative_and_associative(a in arb_profile(), b in arb_profile(), c in arb_profile()) {
            let ab = merge_profiles([&a, &b]).unwrap();
            let ba = merge_profiles([&b, &a]).unwrap();
            for n in 1..=3 {
                prop_assert_eq!(ab.sorted_counts(n), ba.sorted_counts(n));
            }
            let left = merge_profiles([&ab, &c]).unwrap();
            let bc = merge_profiles([&b, &c]).unwrap();
            let right = merge_profiles([&a, &bc]).unwrap();
            prop_assert_eq!(&left, &right);
        }

        #[test]
        fn merge_dominates_constituents(a in arb_profile(), b in arb_profile()) {
            let m = merge_profiles([&a, &b]).unwrap();
            for n in 1..=3 {
                for (gram, c) in a.order(n).chain(b.order(n)) {
                    prop_assert!(m.count(gram) >= c);
                }
                prop_assert_eq!(m.total(n), a.total(n) + b.total(n));
            }
        }
    }
}
