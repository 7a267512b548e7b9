//! Decomposition and reconstruction.
//!
//! [`decompose`] follows the peeling procedure over the sentinel-wrapped
//! string with 1-based half-open spans. The peel step is tail-recursive, so
//! it runs as a loop that feeds each step the span returned by the previous
//! one. [`decompose_iterative`] works on the raw bytes with a fixed amount of
//! state and never materialises the wrapped string; the two are independent
//! routes to the same output.

use crate::error::{Error, Result};
use crate::token::{Symbol, Token, TokenSequence, SENTINEL_PAIR};

/// Active window `[lo, hi)` into a string, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl Span {
    pub fn len(&self) -> usize {
        self.hi.saturating_sub(self.lo)
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    /// True when `inner` is a proper sub-interval of `self`.
    pub fn strictly_contains(&self, inner: &Span) -> bool {
        self.lo <= inner.lo && inner.hi <= self.hi && inner.len() < self.len()
    }
}

/// `@ · s · $`.
pub fn wrap(s: &[u8]) -> Vec<Symbol> {
    let mut wrapped = Vec::with_capacity(s.len() + 2);
    wrapped.push(Symbol::Open);
    wrapped.extend(s.iter().copied().map(Symbol::Byte));
    wrapped.push(Symbol::Close);
    wrapped
}

/// 1-based view of the wrapped string.
struct Wrapped<'a>(&'a [Symbol]);

impl Wrapped<'_> {
    #[inline]
    fn at(&self, i: usize) -> Symbol {
        self.0[i - 1]
    }

    #[inline]
    fn slice(&self, lo: usize, hi: usize) -> &[Symbol] {
        &self.0[lo - 1..hi - 1]
    }
}

/// One peel step on `span`. Appends the emitted token (if any) and returns
/// the middle span to continue with, or `None` once a terminal was emitted.
fn peel(w: &Wrapped<'_>, span: Span, out: &mut TokenSequence) -> Option<Span> {
    let Span { lo, hi } = span;
    if lo >= hi {
        return None;
    }

    // Leading run.
    let mut lead = 1;
    while lo + lead < hi && w.at(lo + lead) == w.at(lo) {
        lead += 1;
    }
    if lead == hi - lo {
        out.push(w.slice(lo, hi), 0);
        return None;
    }

    // Trailing run starts at `trail`.
    let mut trail = hi - 1;
    while trail > lo && w.at(trail - 1) == w.at(hi - 1) {
        trail -= 1;
    }

    let front = w.slice(lo, lo + lead).iter().copied();
    let back = w.slice(trail, hi).iter().copied();
    let (mid_lo, mid_hi) = (lo + lead, trail);
    if mid_lo >= mid_hi {
        out.push_pair(front, back, true);
        None
    } else {
        out.push_pair(front, back, false);
        Some(Span {
            lo: mid_lo,
            hi: mid_hi,
        })
    }
}

/// Decomposes `s` into its bilateral token sequence.
///
/// Total over all byte strings; the empty string yields the single terminal
/// token `(@$, 0)`.
pub fn decompose(s: &[u8]) -> TokenSequence {
    let wrapped = wrap(s);
    let w = Wrapped(&wrapped);
    let mut out = TokenSequence::with_capacity(wrapped.len(), s.len() / 2 + 2);
    let mut span = Some(Span {
        lo: 1,
        hi: wrapped.len() + 1,
    });
    while let Some(active) = span {
        span = peel(&w, active, &mut out);
    }
    out
}

/// The chain of active spans (1-based, into the wrapped string) visited by
/// [`decompose`], one per emitted token.
pub fn active_spans(s: &[u8]) -> Vec<Span> {
    let wrapped = wrap(s);
    let w = Wrapped(&wrapped);
    let mut scratch = TokenSequence::new();
    let mut spans = Vec::new();
    let mut span = Some(Span {
        lo: 1,
        hi: wrapped.len() + 1,
    });
    while let Some(active) = span {
        spans.push(active);
        span = peel(&w, active, &mut scratch);
    }
    spans
}

/// Loop form of the decomposition over the bare bytes.
///
/// Produces exactly the output of [`decompose`]. Depth 0 always peels the
/// two sentinels, so it is emitted up front and the loop then walks
/// `[lo, hi)` (0-based) over `s` itself.
pub fn decompose_iterative(s: &[u8]) -> TokenSequence {
    let n = s.len();
    let mut out = TokenSequence::with_capacity(n + 2, n / 2 + 2);
    if n == 0 {
        out.push(&SENTINEL_PAIR, 0);
        return out;
    }
    out.push(&SENTINEL_PAIR, 1);

    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let first = s[lo];
        let mut lead = 1;
        while lo + lead < hi && s[lo + lead] == first {
            lead += 1;
        }
        if lead == hi - lo {
            out.push_pair(
                s[lo..hi].iter().copied().map(Symbol::Byte),
                std::iter::empty(),
                true,
            );
            break;
        }
        let last = s[hi - 1];
        let mut trail = hi - 1;
        while trail > lo && s[trail - 1] == last {
            trail -= 1;
        }
        let front = s[lo..lo + lead].iter().copied().map(Symbol::Byte);
        let back = s[trail..hi].iter().copied().map(Symbol::Byte);
        if lo + lead >= trail {
            out.push_pair(front, back, true);
            break;
        }
        out.push_pair(front, back, false);
        lo += lead;
        hi = trail;
    }
    out
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedSequence(msg.into())
}

fn write_bytes(dst: &mut [u8], src: &[Symbol], depth: usize) -> Result<()> {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = s.byte().ok_or_else(|| {
            malformed(format!("sentinel outside the first token at depth {depth}"))
        })?;
    }
    Ok(())
}

/// Reconstructs the string from a token sequence.
///
/// Fronts are written left to right from the start of a pre-sized buffer and
/// backs right to left from its end, which places every byte in its final
/// slot exactly once. Only structural well-formedness is checked here; full
/// image membership is [`crate::image::validate`]'s job.
pub fn reconstruct(tokens: &TokenSequence) -> Result<Vec<u8>> {
    let k = tokens.len();
    let head = tokens
        .first()
        .ok_or_else(|| malformed("empty token sequence"))?;
    if k == 1 {
        return if head.is_sentinel_pair() && head.split == 0 {
            Ok(Vec::new())
        } else {
            Err(malformed("a single-token sequence must be (@$, 0)"))
        };
    }
    if !head.is_sentinel_pair() || head.split != 1 {
        return Err(malformed("first token must be the sentinel token (@$, 1)"));
    }

    let total = tokens.total_symbols() - 2;
    let mut buf = vec![0u8; total];
    let (mut lo, mut hi) = (0, total);
    for (depth, tok) in tokens.iter().enumerate().skip(1) {
        let Token { symbols, split } = tok;
        if depth == k - 1 {
            if split != 0 {
                return Err(malformed(format!(
                    "last token at depth {depth} is not terminal"
                )));
            }
            debug_assert_eq!(hi - lo, symbols.len());
            write_bytes(&mut buf[lo..hi], symbols, depth)?;
            break;
        }
        if split == 0 {
            return Err(malformed(format!(
                "terminal token at depth {depth} before the last position"
            )));
        }
        if split >= symbols.len() {
            return Err(malformed(format!(
                "token at depth {depth} has split {split} but only {} symbols",
                symbols.len()
            )));
        }
        let back_len = symbols.len() - split;
        write_bytes(&mut buf[lo..lo + split], &symbols[..split], depth)?;
        write_bytes(&mut buf[hi - back_len..hi], &symbols[split..], depth)?;
        lo += split;
        hi -= back_len;
    }
    Ok(buf)
}
