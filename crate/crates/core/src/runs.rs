//! Run-level view of the decomposition.
//!
//! The decomposition pairs run `j` of the run-length encoding with run
//! `r + 1 - j`, so everything about `F(s)` can be read off the runs without
//! running the peeler: the token list ([`predict_tokens`]), its length
//! ([`token_count`]) and the kernel. Reversal and uniform dilation of the
//! input act token-locally, which [`reverse_tokens`] and [`dilate_tokens`]
//! implement directly on a token sequence.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::image;
use crate::token::{Symbol, TokenSequence, SENTINEL_PAIR};

/// A maximal run `symbol^multiplicity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Run {
    pub symbol: u8,
    pub multiplicity: usize,
}

impl Run {
    pub fn new(symbol: u8, multiplicity: usize) -> Self {
        Run {
            symbol,
            multiplicity,
        }
    }

    fn symbols(&self) -> impl Iterator<Item = Symbol> {
        std::iter::repeat_n(Symbol::Byte(self.symbol), self.multiplicity)
    }
}

/// `a1^m1 a2^m2 … ar^mr` with `a_i != a_(i+1)` and every `m_i >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RunLengthEncoding {
    runs: Vec<Run>,
}

impl RunLengthEncoding {
    /// Checks alternation and positivity.
    pub fn from_runs(runs: Vec<Run>) -> Result<Self> {
        if runs.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(i) = runs.iter().position(|r| r.multiplicity == 0) {
            return Err(Error::SkeletonMismatch(format!(
                "run {} has multiplicity 0",
                i + 1
            )));
        }
        if let Some(i) = runs.windows(2).position(|w| w[0].symbol == w[1].symbol) {
            return Err(Error::SkeletonMismatch(format!(
                "runs {} and {} share the symbol {:#04x}",
                i + 1,
                i + 2,
                runs[i].symbol
            )));
        }
        Ok(RunLengthEncoding { runs })
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    /// Run count `r`.
    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    /// `h = ⌈r/2⌉`, the number of content tokens including the terminal.
    pub fn half(&self) -> usize {
        self.runs.len().div_ceil(2)
    }

    pub fn source_len(&self) -> usize {
        self.runs.iter().map(|r| r.multiplicity).sum()
    }

    /// Concatenation of all runs.
    pub fn expand(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.source_len());
        for run in &self.runs {
            out.extend(std::iter::repeat_n(run.symbol, run.multiplicity));
        }
        out
    }

    pub fn symbols(&self) -> impl Iterator<Item = u8> + '_ {
        self.runs.iter().map(|r| r.symbol)
    }

    pub fn multiplicities(&self) -> impl Iterator<Item = usize> + '_ {
        self.runs.iter().map(|r| r.multiplicity)
    }

    /// Content-token pairs `(j, r + 1 - j)` (1-based run indices) for the
    /// non-terminal depths `j = 1..h-1`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let r = self.run_count();
        (1..self.half()).map(|j| (j, r + 1 - j)).collect()
    }

    /// 1-based indices of the runs forming the kernel.
    pub fn kernel_runs(&self) -> Vec<usize> {
        let h = self.half();
        if self.run_count() % 2 == 1 {
            vec![h]
        } else {
            vec![h, h + 1]
        }
    }
}

/// Number of maximal runs; 0 for the empty string.
pub fn run_count(s: &[u8]) -> usize {
    match s.len() {
        0 => 0,
        _ => 1 + s.windows(2).filter(|w| w[0] != w[1]).count(),
    }
}

pub fn rle(s: &[u8]) -> Result<RunLengthEncoding> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut runs: Vec<Run> = Vec::new();
    for &b in s {
        match runs.last_mut() {
            Some(run) if run.symbol == b => run.multiplicity += 1,
            _ => runs.push(Run::new(b, 1)),
        }
    }
    Ok(RunLengthEncoding { runs })
}

/// Token sequence predicted by run pairing, without peeling.
pub fn predict_tokens(rle: &RunLengthEncoding) -> TokenSequence {
    let runs = rle.runs();
    let r = runs.len();
    let h = rle.half();
    let mut out = TokenSequence::with_capacity(rle.source_len() + 2, h + 1);
    out.push(&SENTINEL_PAIR, 1);
    for j in 1..h {
        let (front, back) = (runs[j - 1], runs[r - j]);
        out.push_pair(front.symbols(), back.symbols(), false);
    }
    let middle = runs[h - 1];
    if r % 2 == 1 {
        out.push_pair(middle.symbols(), std::iter::empty(), true);
    } else {
        out.push_pair(middle.symbols(), runs[h].symbols(), true);
    }
    out
}

/// `1 + ⌈r/2⌉`.
pub fn token_count(r: usize) -> usize {
    1 + r.div_ceil(2)
}

/// The terminal token's symbol string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub symbols: Vec<u8>,
    pub distinct_symbol_count: usize,
}

/// Kernel computed from the run-length encoding: the middle run for odd `r`,
/// the two middle runs for even `r`.
pub fn kernel(s: &[u8]) -> Result<Kernel> {
    let enc = rle(s)?;
    let runs = enc.runs();
    let idx = enc.kernel_runs();
    let mut symbols = Vec::new();
    for &i in &idx {
        let run = runs[i - 1];
        symbols.extend(std::iter::repeat_n(run.symbol, run.multiplicity));
    }
    Ok(Kernel {
        symbols,
        distinct_symbol_count: idx.len(),
    })
}

/// Palindrome test on the run-length encoding: odd run count and mirror
/// symmetric runs.
pub fn is_palindrome_by_rle(s: &[u8]) -> Result<bool> {
    let enc = rle(s)?;
    let runs = enc.runs();
    let r = runs.len();
    Ok(r % 2 == 1 && (0..r / 2).all(|j| runs[j] == runs[r - 1 - j]))
}

fn require_image(tokens: &TokenSequence) -> Result<()> {
    let report = image::validate(tokens);
    if report.valid {
        Ok(())
    } else {
        Err(Error::NotInImage(report.summary()))
    }
}

/// `F(reverse(s))` from `F(s)`: fronts and backs swap, the terminal is
/// reversed, the sentinel token is kept.
pub fn reverse_tokens(tokens: &TokenSequence) -> Result<TokenSequence> {
    require_image(tokens)?;
    let k = tokens.len();
    let mut out = TokenSequence::with_capacity(tokens.total_symbols(), k);
    for (depth, tok) in tokens.iter().enumerate() {
        if depth == 0 {
            out.push(tok.symbols, tok.split);
        } else if depth == k - 1 {
            out.push_pair(tok.symbols.iter().rev().copied(), std::iter::empty(), true);
        } else {
            out.push_pair(
                tok.back().iter().copied(),
                tok.front().iter().copied(),
                false,
            );
        }
    }
    Ok(out)
}

/// `F(h_c(s))` from `F(s)` where `h_c(a) = a^c`. Every non-sentinel symbol
/// is repeated `c` times and every content split scales by `c`.
pub fn dilate_tokens(tokens: &TokenSequence, c: usize) -> Result<TokenSequence> {
    if c == 0 {
        return Err(Error::ParamOutOfRange(
            "dilation factor must be at least 1".into(),
        ));
    }
    require_image(tokens)?;
    let mut out = TokenSequence::with_capacity(tokens.total_symbols() * c, tokens.len());
    for (depth, tok) in tokens.iter().enumerate() {
        if depth == 0 {
            out.push(tok.symbols, tok.split);
            continue;
        }
        let scaled: Vec<Symbol> = tok
            .symbols
            .iter()
            .flat_map(|&s| std::iter::repeat_n(s, c))
            .collect();
        out.push(&scaled, tok.split * c);
    }
    Ok(out)
}

/// Checks the tandem-repetition law on `tokens = F(w^m)` where `w` has
/// `w_runs` runs.
///
/// Returns true iff `tokens` is a valid decomposition whose source has a run
/// skeleton that is periodic with period `w_runs` (so the source really is a
/// tandem power of a `w_runs`-run word with distinct first and last runs),
/// and its non-terminal tokens at depths `j` and `j + w_runs` are equal
/// wherever both exist.
pub fn tandem_token_period(tokens: &TokenSequence, w_runs: usize) -> bool {
    if w_runs < 2 || !image::validate(tokens).valid {
        return false;
    }
    let Ok(source) = image::reassemble(tokens) else {
        return false;
    };
    let Ok(enc) = rle(&source) else {
        return false;
    };
    let runs = enc.runs();
    if runs.len() % w_runs != 0 || runs[0].symbol == runs[w_runs - 1].symbol {
        return false;
    }
    if (w_runs..runs.len()).any(|i| runs[i] != runs[i - w_runs]) {
        return false;
    }
    let non_terminal = tokens.len().saturating_sub(1);
    (1..non_terminal)
        .filter(|j| j + w_runs < non_terminal)
        .all(|j| tokens.get(j) == tokens.get(j + w_runs))
}

/// Distinct symbols of a token's symbol string.
pub fn alphabet_size(symbols: &[Symbol]) -> usize {
    symbols.iter().collect::<BTreeSet<_>>().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::decompose;
    use crate::token::seq;

    #[test]
    fn rle_examples() {
        let enc = rle(b"CASSAYFF").unwrap();
        let expect = [
            (b'C', 1),
            (b'A', 1),
            (b'S', 2),
            (b'A', 1),
            (b'Y', 1),
            (b'F', 2),
        ];
        assert_eq!(enc.runs(), expect.map(|(a, m)| Run::new(a, m)));
        assert_eq!(enc.run_count(), 6);
        assert_eq!(rle(b"A").unwrap().runs(), [Run::new(b'A', 1)]);
        let enc = rle(b"AABBB").unwrap();
        assert_eq!(enc.runs(), [Run::new(b'A', 2), Run::new(b'B', 3)]);
        assert_eq!(enc.expand(), b"AABBB");
        assert_eq!(rle(b""), Err(Error::EmptyInput));
    }

    #[test]
    fn from_runs_rejects_bad_skeletons() {
        assert!(RunLengthEncoding::from_runs(vec![Run::new(b'A', 1), Run::new(b'A', 2)]).is_err());
        assert!(RunLengthEncoding::from_runs(vec![Run::new(b'A', 0)]).is_err());
        assert!(RunLengthEncoding::from_runs(vec![]).is_err());
    }

    #[test]
    fn predict_examples() {
        let t = predict_tokens(&rle(b"CASSAYFF").unwrap());
        assert_eq!(t, seq(&[("@$", 1), ("CFF", 1), ("AY", 1), ("SSA", 0)]));
        let t = predict_tokens(&rle(b"AAAA").unwrap());
        assert_eq!(t, seq(&[("@$", 1), ("AAAA", 0)]));
        // Run 2 (B) pairs with run 5 (A), so the second content token is BA.
        let t = predict_tokens(&rle(b"ABABAB").unwrap());
        assert_eq!(t, seq(&[("@$", 1), ("AB", 1), ("BA", 1), ("AB", 0)]));
        assert_eq!(t, decompose(b"ABABAB"));
    }

    #[test]
    fn token_count_examples() {
        assert_eq!(token_count(6), 4);
        assert_eq!(token_count(1), 2);
        assert_eq!(token_count(7), 5);
        assert_eq!(decompose(b"ABCDEFG").len(), 5);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel(b"CASSAYFF").unwrap();
        assert_eq!(k.symbols, b"SSA");
        assert_eq!(k.distinct_symbol_count, 2);
        let k = kernel(b"A").unwrap();
        assert_eq!(
            (k.symbols.as_slice(), k.distinct_symbol_count),
            (&b"A"[..], 1)
        );
        let k = kernel(b"ABCBA").unwrap();
        assert_eq!(
            (k.symbols.as_slice(), k.distinct_symbol_count),
            (&b"C"[..], 1)
        );
        assert_eq!(kernel(b""), Err(Error::EmptyInput));
    }

    #[test]
    fn palindrome_examples() {
        assert!(is_palindrome_by_rle(b"ABA").unwrap());
        assert!(!is_palindrome_by_rle(b"CASSAYFF").unwrap());
        assert!(is_palindrome_by_rle(b"AABBAA").unwrap());
        assert!(!is_palindrome_by_rle(b"AB").unwrap());
        assert!(!is_palindrome_by_rle(b"AABA").unwrap());
        assert_eq!(is_palindrome_by_rle(b""), Err(Error::EmptyInput));
    }

    #[test]
    fn reverse_examples() {
        let r = reverse_tokens(&decompose(b"CASSAYFF")).unwrap();
        assert_eq!(r, seq(&[("@$", 1), ("FFC", 2), ("YA", 1), ("ASS", 0)]));
        assert_eq!(r, decompose(b"FFYASSAC"));
        let a = decompose(b"A");
        assert_eq!(reverse_tokens(&a).unwrap(), a);
        assert_eq!(
            reverse_tokens(&decompose(b"ABAB")).unwrap(),
            decompose(b"BABA")
        );
        assert_eq!(reverse_tokens(&decompose(b"")).unwrap(), decompose(b""));
        let bad = seq(&[("@$", 1), ("AB", 1), ("AC", 1), ("D", 0)]);
        assert!(matches!(reverse_tokens(&bad), Err(Error::NotInImage(_))));
    }

    #[test]
    fn dilate_examples() {
        let t = decompose(b"CASSAYFF");
        assert_eq!(dilate_tokens(&t, 1).unwrap(), t);
        let d = dilate_tokens(&t, 2).unwrap();
        assert_eq!(
            d,
            seq(&[("@$", 1), ("CCFFFF", 2), ("AAYY", 2), ("SSSSAA", 0)])
        );
        assert_eq!(d, decompose(b"CCAASSSSAAYYFFFF"));
        assert_eq!(
            dilate_tokens(&decompose(b"AB"), 3).unwrap(),
            seq(&[("@$", 1), ("AAABBB", 0)])
        );
        assert!(dilate_tokens(&t, 0).is_err());
    }

    #[test]
    fn tandem_examples() {
        assert!(tandem_token_period(&decompose(b"ABABAB"), 2));
        assert!(tandem_token_period(&decompose(b"ABCABC"), 3));
        assert!(!tandem_token_period(&decompose(b"CASSAYFF"), 2));
        // Long enough for the period to be visible among non-terminal tokens.
        let s = b"AABCCAABCCAABCCAABCC";
        assert!(tandem_token_period(&decompose(s), 3));
        assert!(!tandem_token_period(&decompose(s), 2));
        // First and last runs of w coincide: the runs merge across copies.
        assert!(!tandem_token_period(&decompose(b"ABAABA"), 3));
    }

    #[test]
    fn pairing_table() {
        let enc = rle(b"CASSAYFF").unwrap();
        assert_eq!(enc.pairs(), vec![(1, 6), (2, 5)]);
        assert_eq!(enc.kernel_runs(), vec![3, 4]);
        assert_eq!(rle(b"ABA").unwrap().kernel_runs(), vec![2]);
    }
}
