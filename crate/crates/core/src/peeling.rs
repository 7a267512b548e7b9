//! Exhaustive enumeration of admissible bilateral run-peelings.
//!
//! An admissible peeling stops with one terminal token once the active span
//! is a single run or two adjacent runs; otherwise it removes any `x` of the
//! `L` symbols of the leading run and any `y` of the `R` symbols of the
//! trailing run, emits them as one token and continues on the middle. The
//! decomposition peels `x = L`, `y = R` every time.
//!
//! The enumeration is a depth-first walk over `(x, y)` choices with a node
//! budget. Along every branch it tracks how many runs of the original string
//! the span still intersects and asserts the two facts the lower bound rests
//! on: each step drops at most two of them, and at most two remain at the
//! end.

use crate::codec::{decompose_iterative, Span};
use crate::error::{Error, Result};
use crate::runs::run_count;
use crate::token::{BilateralToken, Symbol};

/// Default node budget for one string.
pub const DEFAULT_BRANCH_LIMIT: u64 = 1_000_000;

/// Snapshot of one node of the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeelingState {
    /// 1-based half-open span into the bare string.
    pub span: Span,
    pub content_tokens_emitted: usize,
    pub runs_intersected: usize,
}

/// One admissible decomposition; the last token is the terminal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleDecomposition {
    pub tokens: Vec<BilateralToken>,
}

impl AdmissibleDecomposition {
    pub fn content_count(&self) -> usize {
        self.tokens.len()
    }

    /// Nests the tokens back together: front, inner result, back.
    pub fn replay(&self) -> Vec<u8> {
        let mut fronts = Vec::new();
        let mut backs = Vec::new();
        for tok in &self.tokens {
            let split = tok.split.min(tok.symbols.len());
            fronts.extend_from_slice(&tok.symbols[..split]);
            backs.push(&tok.symbols[split..]);
        }
        for back in backs.into_iter().rev() {
            fronts.extend_from_slice(back);
        }
        fronts.into_iter().filter_map(Symbol::byte).collect()
    }
}

/// Outcome of a full search over one string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSummary {
    pub decompositions: u64,
    pub min_content: usize,
    /// Every decomposition achieving `min_content`, in enumeration order.
    pub minimizers: Vec<AdmissibleDecomposition>,
    pub nodes: u64,
}

struct Search<'a> {
    s: &'a [u8],
    /// Original run index of each position (0-based positions).
    run_id: Vec<usize>,
    limit: u64,
    nodes: u64,
    path: Vec<BilateralToken>,
}

impl<'a> Search<'a> {
    fn new(s: &'a [u8], limit: u64) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut run_id = Vec::with_capacity(s.len());
        let mut id = 0;
        for (i, &b) in s.iter().enumerate() {
            if i > 0 && s[i - 1] != b {
                id += 1;
            }
            run_id.push(id);
        }
        Ok(Search {
            s,
            run_id,
            limit,
            nodes: 0,
            path: Vec::new(),
        })
    }

    fn bytes(&self, lo: usize, hi: usize) -> impl Iterator<Item = Symbol> + '_ {
        self.s[lo - 1..hi - 1].iter().copied().map(Symbol::Byte)
    }

    fn runs_intersected(&self, span: Span) -> usize {
        self.run_id[span.hi - 2] - self.run_id[span.lo - 1] + 1
    }

    fn start(&self) -> PeelingState {
        let span = Span {
            lo: 1,
            hi: self.s.len() + 1,
        };
        PeelingState {
            span,
            content_tokens_emitted: 0,
            runs_intersected: self.runs_intersected(span),
        }
    }

    fn walk<F>(&mut self, state: PeelingState, sink: &mut F) -> Result<()>
    where
        F: FnMut(&[BilateralToken]),
    {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::SearchTooLarge { limit: self.limit });
        }
        let Span { lo, hi } = state.span;
        let s = self.s;
        let len = hi - lo;
        let lead = s[lo - 1..hi - 1]
            .iter()
            .take_while(|&&b| b == s[lo - 1])
            .count();
        let trail = s[lo - 1..hi - 1]
            .iter()
            .rev()
            .take_while(|&&b| b == s[hi - 2])
            .count();

        if lead == len || lead + trail == len {
            assert!(
                state.runs_intersected <= 2,
                "terminal span intersects {} original runs",
                state.runs_intersected
            );
            let terminal = BilateralToken::new(self.bytes(lo, hi).collect(), 0);
            self.path.push(terminal);
            sink(&self.path);
            self.path.pop();
            return Ok(());
        }

        for x in 1..=lead {
            for y in 1..=trail {
                let inner = Span {
                    lo: lo + x,
                    hi: hi - y,
                };
                let next = PeelingState {
                    span: inner,
                    content_tokens_emitted: state.content_tokens_emitted + 1,
                    runs_intersected: self.runs_intersected(inner),
                };
                assert!(
                    state.runs_intersected - next.runs_intersected <= 2,
                    "one peeling step dropped {} original runs",
                    state.runs_intersected - next.runs_intersected
                );
                let symbols = self
                    .bytes(lo, lo + x)
                    .chain(self.bytes(hi - y, hi))
                    .collect();
                self.path.push(BilateralToken::new(symbols, x));
                let res = self.walk(next, sink);
                self.path.pop();
                res?;
            }
        }
        Ok(())
    }
}

fn run_search<F>(s: &[u8], limit: u64, mut sink: F) -> Result<u64>
where
    F: FnMut(&[BilateralToken]),
{
    let mut search = Search::new(s, limit)?;
    let start = search.start();
    search.walk(start, &mut sink)?;
    Ok(search.nodes)
}

/// Every admissible decomposition of `s`, in depth-first order.
pub fn enumerate_peelings(s: &[u8], limit: u64) -> Result<Vec<AdmissibleDecomposition>> {
    let mut all = Vec::new();
    run_search(s, limit, |tokens| {
        all.push(AdmissibleDecomposition {
            tokens: tokens.to_vec(),
        })
    })?;
    Ok(all)
}

/// Searches `s` keeping only counts and the minimizers.
pub fn search(s: &[u8], limit: u64) -> Result<SearchSummary> {
    let mut decompositions = 0u64;
    let mut min_content = usize::MAX;
    let mut minimizers = Vec::new();
    let nodes = run_search(s, limit, |tokens| {
        decompositions += 1;
        if tokens.len() < min_content {
            min_content = tokens.len();
            minimizers.clear();
        }
        if tokens.len() == min_content {
            minimizers.push(AdmissibleDecomposition {
                tokens: tokens.to_vec(),
            });
        }
    })?;
    Ok(SearchSummary {
        decompositions,
        min_content,
        minimizers,
        nodes,
    })
}

/// Fewest content tokens (terminal included) over all admissible peelings.
pub fn min_content_tokens(s: &[u8], limit: u64) -> Result<usize> {
    Ok(search(s, limit)?.min_content)
}

/// Number of admissible peelings achieving the minimum.
pub fn count_minimal(s: &[u8], limit: u64) -> Result<usize> {
    Ok(search(s, limit)?.minimizers.len())
}

/// `⌈r/2⌉`, the lower bound on content tokens.
pub fn content_lower_bound(s: &[u8]) -> usize {
    run_count(s).div_ceil(2)
}

/// Result of checking the greedy-optimality claims on one string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalityCheck {
    pub runs: usize,
    pub lower_bound: usize,
    pub min_content: usize,
    pub minimizers: usize,
    /// The decomposition (minus its sentinel token) is one of the minimizers.
    pub flashback_attains: bool,
    pub nodes: u64,
}

impl OptimalityCheck {
    /// Minimum equals `⌈r/2⌉`, the decomposition attains it, and for even
    /// `r` it is the only minimizer.
    pub fn holds(&self) -> bool {
        self.min_content == self.lower_bound
            && self.flashback_attains
            && (self.runs % 2 == 1 || self.minimizers == 1)
    }
}

pub fn verify_optimality(s: &[u8], limit: u64) -> Result<OptimalityCheck> {
    let summary = search(s, limit)?;
    let flashback = decompose_iterative(s).without_head();
    Ok(OptimalityCheck {
        runs: run_count(s),
        lower_bound: content_lower_bound(s),
        min_content: summary.min_content,
        minimizers: summary.minimizers.len(),
        flashback_attains: summary.minimizers.iter().any(|d| d.tokens == flashback),
        nodes: summary.nodes,
    })
}

/// All strings over `alphabet` of length exactly `len`, in lexicographic
/// order of alphabet positions.
pub fn strings_of_len(alphabet: &[u8], len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                alphabet.iter().map(move |&c| {
                    let mut next = prefix.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
    }
    out
}

/// All strings over `alphabet` with length in `min_len..=max_len`.
pub fn strings_up_to(alphabet: &[u8], min_len: usize, max_len: usize) -> Vec<Vec<u8>> {
    (min_len..=max_len)
        .flat_map(|len| strings_of_len(alphabet, len))
        .collect()
}
