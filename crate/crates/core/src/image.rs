//! Membership test for the image of the decomposition, and reassembly of a
//! witness string for sequences that pass.
//!
//! A candidate `[(@$,1), τ1, …, τ(k-1)]` is a decomposition of some string
//! exactly when
//!
//! 1. every non-terminal token is a non-empty front run followed by a
//!    non-empty back run,
//! 2. the last token is terminal and holds one run or two distinct runs,
//! 3. for `k >= 3`, front symbols alternate between consecutive depths, back
//!    symbols alternate likewise, and the terminal's first and last symbols
//!    differ from the deepest front and back symbols.
//!
//! The lone `(@$,0)` of the empty string is accepted as a special case, and
//! sentinels are allowed only in the head token.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::token::{Symbol, Token, TokenSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Condition {
    TokenForm,
    TerminalForm,
    AlternationInterior,
    AlternationBoundary,
    SentinelHead,
}

impl Condition {
    pub fn as_str(self) -> &'static str {
        match self {
            Condition::TokenForm => "TOKEN_FORM",
            Condition::TerminalForm => "TERMINAL_FORM",
            Condition::AlternationInterior => "ALTERNATION_INTERIOR",
            Condition::AlternationBoundary => "ALTERNATION_BOUNDARY",
            Condition::SentinelHead => "SENTINEL_HEAD",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub depth: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn has(&self, condition: Condition, depth: usize) -> bool {
        self.violations
            .iter()
            .any(|v| v.condition == condition && v.depth == depth)
    }

    /// One-line rendering of all violations.
    pub fn summary(&self) -> String {
        if self.valid {
            return "valid".into();
        }
        self.violations
            .iter()
            .map(|v| format!("{} at depth {}: {}", v.condition, v.depth, v.message))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

struct Collector(Vec<Violation>);

impl Collector {
    fn add(&mut self, condition: Condition, depth: usize, message: impl Into<String>) {
        self.0.push(Violation {
            condition,
            depth,
            message: message.into(),
        });
    }
}

fn is_single_run(symbols: &[Symbol]) -> bool {
    symbols.windows(2).all(|w| w[0] == w[1])
}

fn run_breaks(symbols: &[Symbol]) -> usize {
    symbols.windows(2).filter(|w| w[0] != w[1]).count()
}

fn show(s: Symbol) -> String {
    match s {
        Symbol::Open => "@".into(),
        Symbol::Close => "$".into(),
        Symbol::Byte(b) if b.is_ascii_graphic() => (b as char).to_string(),
        Symbol::Byte(b) => format!("\\x{b:02X}"),
    }
}

/// Checks a candidate sequence and reports every violated condition.
pub fn validate(tokens: &TokenSequence) -> ValidationReport {
    let mut out = Collector(Vec::new());
    check(tokens, &mut out);
    ValidationReport {
        valid: out.0.is_empty(),
        violations: out.0,
    }
}

fn check(tokens: &TokenSequence, out: &mut Collector) {
    use Condition::*;

    let k = tokens.len();
    let Some(head) = tokens.first() else {
        out.add(SentinelHead, 0, "empty token sequence");
        return;
    };
    if !head.is_sentinel_pair() {
        out.add(SentinelHead, 0, "head token symbols must be @$");
    } else if k == 1 {
        if head.split != 0 {
            out.add(TerminalForm, 0, "sequence has no terminal token");
        }
        return;
    } else if head.split != 1 {
        out.add(
            SentinelHead,
            0,
            format!("head token split is {}, expected 1", head.split),
        );
    }

    // Empty tokens and tokens holding a sentinel are reported once and left
    // out of the remaining checks.
    let mut clean = vec![true; k];
    for (depth, tok) in tokens.iter().enumerate().skip(1) {
        if tok.symbols.is_empty() {
            out.add(TokenForm, depth, "empty symbol string");
            clean[depth] = false;
        } else if tok.symbols.iter().any(|s| s.is_sentinel()) {
            out.add(SentinelHead, depth, "sentinel outside the head token");
            clean[depth] = false;
        }
    }

    let terminal_depth = k - 1;
    for (depth, tok) in tokens.iter().enumerate().take(terminal_depth).skip(1) {
        if !clean[depth] {
            continue;
        }
        check_token_form(depth, tok, out);
    }

    let terminal = tokens.get(terminal_depth).expect("k >= 2");
    if clean[terminal_depth] {
        if terminal.split != 0 {
            out.add(
                TerminalForm,
                terminal_depth,
                format!("last token has split {}, expected 0", terminal.split),
            );
        }
        if run_breaks(terminal.symbols) > 1 {
            out.add(
                TerminalForm,
                terminal_depth,
                "terminal symbols are neither one run nor two adjacent runs",
            );
        }
    }

    if k < 3 {
        return;
    }
    // Front and back symbols per depth, a_d = σ_d[first], c_d = σ_d[last].
    let ends = |d: usize| {
        let s = tokens.get(d).expect("depth in range").symbols;
        (s[0], s[s.len() - 1])
    };
    for d in 1..=k.saturating_sub(3) {
        if !(clean[d] && clean[d + 1]) {
            continue;
        }
        let ((a, c), (a_next, c_next)) = (ends(d), ends(d + 1));
        if a == a_next {
            out.add(
                AlternationInterior,
                d + 1,
                format!(
                    "front symbol {} repeats the front symbol at depth {d}",
                    show(a_next)
                ),
            );
        }
        if c == c_next {
            out.add(
                AlternationInterior,
                d + 1,
                format!(
                    "back symbol {} repeats the back symbol at depth {d}",
                    show(c_next)
                ),
            );
        }
    }
    let deepest = k - 2;
    if clean[deepest] && clean[terminal_depth] {
        let (a, c) = ends(deepest);
        let (first, last) = ends(terminal_depth);
        if first == a {
            out.add(
                AlternationBoundary,
                terminal_depth,
                format!(
                    "terminal starts with {}, same as the front at depth {deepest}",
                    show(first)
                ),
            );
        }
        if last == c {
            out.add(
                AlternationBoundary,
                terminal_depth,
                format!(
                    "terminal ends with {}, same as the back at depth {deepest}",
                    show(last)
                ),
            );
        }
    }
}

fn check_token_form(depth: usize, tok: Token<'_>, out: &mut Collector) {
    use Condition::*;

    if tok.split == 0 {
        out.add(
            TerminalForm,
            depth,
            "terminal token before the last position",
        );
        return;
    }
    if tok.split >= tok.symbols.len() {
        out.add(
            TokenForm,
            depth,
            format!(
                "split {} leaves an empty back part ({} symbols)",
                tok.split,
                tok.symbols.len()
            ),
        );
        return;
    }
    if !is_single_run(tok.front()) {
        out.add(TokenForm, depth, "front part is not a single run");
    }
    if !is_single_run(tok.back()) {
        out.add(TokenForm, depth, "back part is not a single run");
    }
}

/// Builds the witness string: fronts in depth order, then the terminal,
/// then backs in reverse depth order.
pub fn reassemble(tokens: &TokenSequence) -> Result<Vec<u8>> {
    let report = validate(tokens);
    if !report.valid {
        return Err(Error::NotInImage(report.summary()));
    }
    let k = tokens.len();
    let mut out = Vec::with_capacity(tokens.total_symbols().saturating_sub(2));
    if k == 1 {
        return Ok(out);
    }
    let byte = |s: &Symbol| s.byte().expect("validated: no sentinels past the head");
    let content = || tokens.iter().take(k - 1).skip(1);
    for tok in content() {
        out.extend(tok.front().iter().map(byte));
    }
    out.extend(tokens.get(k - 1).expect("k >= 2").symbols.iter().map(byte));
    for tok in content().rev() {
        out.extend(tok.back().iter().map(byte));
    }
    Ok(out)
}
