//! Which token depths change under edits.
//!
//! Changing run lengths while keeping the run symbols touches exactly the
//! content tokens at depths `min(i, r + 1 - i)` for the edited runs `i`.
//! Single character edits move at most two run boundaries, so they shift the
//! token count by at most one.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::codec::decompose_iterative;
use crate::error::{Error, Result};
use crate::runs::{run_count, token_count, Run, RunLengthEncoding};
use crate::token::TokenSequence;

/// A change of run multiplicities on a fixed run skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunLengthEdit {
    base: RunLengthEncoding,
    new_multiplicities: Vec<usize>,
}

impl RunLengthEdit {
    pub fn new(base: RunLengthEncoding, new_multiplicities: Vec<usize>) -> Result<Self> {
        if new_multiplicities.len() != base.run_count() {
            return Err(Error::SkeletonMismatch(format!(
                "{} new multiplicities for {} runs",
                new_multiplicities.len(),
                base.run_count()
            )));
        }
        if let Some(i) = new_multiplicities.iter().position(|&m| m == 0) {
            return Err(Error::SkeletonMismatch(format!(
                "run {} edited to multiplicity 0",
                i + 1
            )));
        }
        Ok(RunLengthEdit {
            base,
            new_multiplicities,
        })
    }

    /// The edit taking `from` to `to`, if both share a run skeleton.
    pub fn between(from: &RunLengthEncoding, to: &RunLengthEncoding) -> Result<Self> {
        if !from.symbols().eq(to.symbols()) {
            return Err(Error::SkeletonMismatch(
                "run symbol sequences differ".to_string(),
            ));
        }
        RunLengthEdit::new(from.clone(), to.multiplicities().collect())
    }

    pub fn base(&self) -> &RunLengthEncoding {
        &self.base
    }

    /// The edited encoding.
    pub fn edited(&self) -> RunLengthEncoding {
        let runs = self
            .base
            .runs()
            .iter()
            .zip(&self.new_multiplicities)
            .map(|(run, &m)| Run::new(run.symbol, m))
            .collect();
        RunLengthEncoding::from_runs(runs).expect("same skeleton, positive multiplicities")
    }

    /// `D`: 1-based indices of runs whose multiplicity changes.
    pub fn changed_runs(&self) -> BTreeSet<usize> {
        self.base
            .multiplicities()
            .zip(&self.new_multiplicities)
            .enumerate()
            .filter(|(_, (old, new))| old != *new)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// Content-token depths (1-based; the terminal sits at `k - 1`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TokenDiff {
    pub changed_depths: BTreeSet<usize>,
}

pub fn predict_changed_depths(edit: &RunLengthEdit) -> TokenDiff {
    let r = edit.base.run_count();
    TokenDiff {
        changed_depths: edit
            .changed_runs()
            .into_iter()
            .map(|i| i.min(r + 1 - i))
            .collect(),
    }
}

/// Depths `d >= 1` where the two sequences differ, counting a token present
/// in only one of them as a difference.
pub fn diff_tokens(a: &TokenSequence, b: &TokenSequence) -> TokenDiff {
    let k = a.len().max(b.len());
    TokenDiff {
        changed_depths: (1..k).filter(|&d| a.get(d) != b.get(d)).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharEdit {
    Insert { pos: usize, byte: u8 },
    Delete { pos: usize },
    Substitute { pos: usize, byte: u8 },
}

impl CharEdit {
    pub fn apply(&self, s: &[u8]) -> Result<Vec<u8>> {
        let mut out = s.to_vec();
        match *self {
            CharEdit::Insert { pos, byte } if pos <= s.len() => out.insert(pos, byte),
            CharEdit::Delete { pos } if pos < s.len() => {
                out.remove(pos);
            }
            CharEdit::Substitute { pos, byte } if pos < s.len() => out[pos] = byte,
            CharEdit::Insert { pos, .. }
            | CharEdit::Delete { pos }
            | CharEdit::Substitute { pos, .. } => {
                return Err(Error::PositionOutOfRange { pos, len: s.len() })
            }
        }
        Ok(out)
    }
}

/// Change in run count and token count caused by one character edit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharEditDelta {
    pub delta_r: i64,
    pub delta_k: i64,
}

/// Applies `edit`, decomposes both strings and returns the deltas.
///
/// Panics if `|Δr| > 2` or `|Δk| > 1`, or if a token count disagrees with
/// `1 + ⌈r/2⌉`.
pub fn char_edit_effect(s: &[u8], edit: CharEdit) -> Result<CharEditDelta> {
    let t = edit.apply(s)?;
    let (r_s, r_t) = (run_count(s) as i64, run_count(&t) as i64);
    let (k_s, k_t) = (decompose_iterative(s).len(), decompose_iterative(&t).len());
    assert_eq!(k_s, token_count(r_s as usize));
    assert_eq!(k_t, token_count(r_t as usize));
    let delta = CharEditDelta {
        delta_r: r_t - r_s,
        delta_k: k_t as i64 - k_s as i64,
    };
    assert!(
        delta.delta_r.abs() <= 2,
        "{edit:?} moved {} run boundaries",
        delta.delta_r
    );
    assert!(
        delta.delta_k.abs() <= 1,
        "{edit:?} changed k by {}",
        delta.delta_k
    );
    Ok(delta)
}

/// `k(edited) - k(s)`.
pub fn char_edit_delta_k(s: &[u8], edit: CharEdit) -> Result<i64> {
    Ok(char_edit_effect(s, edit)?.delta_k)
}
