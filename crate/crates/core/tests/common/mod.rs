//! Reference implementations used as oracles by the integration tests.
//! None of them call into the crate's algorithms; they only build its
//! data types so results can be compared directly.

#![allow(dead_code)]

use std::collections::HashMap;

use flashback::{BilateralToken, Symbol, TokenSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Peels the sentinel-wrapped string recursively, straight from the
/// definition: take the maximal leading and trailing runs, stop when they
/// meet or cover everything.
pub fn oracle_decompose(s: &[u8]) -> TokenSequence {
    let mut w = vec![Symbol::Open];
    w.extend(s.iter().map(|&b| Symbol::Byte(b)));
    w.push(Symbol::Close);
    let mut out = Vec::new();
    peel(&w, &mut out);
    out.into_iter().collect()
}

fn peel(w: &[Symbol], out: &mut Vec<BilateralToken>) {
    let lead = w.iter().take_while(|&&c| c == w[0]).count();
    let trail = w.iter().rev().take_while(|&&c| c == w[w.len() - 1]).count();
    if lead == w.len() || lead + trail == w.len() {
        out.push(BilateralToken::new(w.to_vec(), 0));
        return;
    }
    let mut symbols = w[..lead].to_vec();
    symbols.extend_from_slice(&w[w.len() - trail..]);
    out.push(BilateralToken::new(symbols, lead));
    peel(&w[lead..w.len() - trail], out);
}

pub fn oracle_runs(s: &[u8]) -> usize {
    if s.is_empty() {
        0
    } else {
        1 + s.windows(2).filter(|p| p[0] != p[1]).count()
    }
}

/// Fewest tokens (terminal included) over all admissible peelings of `s`,
/// and how many peelings reach it, by memoised recursion over spans.
pub fn oracle_min_peeling(s: &[u8]) -> (usize, u64) {
    fn go(
        s: &[u8],
        lo: usize,
        hi: usize,
        memo: &mut HashMap<(usize, usize), (usize, u64)>,
    ) -> (usize, u64) {
        if let Some(&v) = memo.get(&(lo, hi)) {
            return v;
        }
        let span = &s[lo..hi];
        let lead = span.iter().take_while(|&&c| c == span[0]).count();
        let trail = span
            .iter()
            .rev()
            .take_while(|&&c| c == span[span.len() - 1])
            .count();
        let v = if lead == span.len() || lead + trail == span.len() {
            (1, 1)
        } else {
            let mut best = (usize::MAX, 0);
            for x in 1..=lead {
                for y in 1..=trail {
                    let (m, c) = go(s, lo + x, hi - y, memo);
                    if m + 1 < best.0 {
                        best = (m + 1, c);
                    } else if m + 1 == best.0 {
                        best.1 += c;
                    }
                }
            }
            best
        };
        memo.insert((lo, hi), v);
        v
    }
    go(s, 0, s.len(), &mut HashMap::new())
}

/// All strings over `alphabet` with length in `0..=max_len`.
pub fn all_strings(alphabet: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|p: &Vec<u8>| {
                alphabet.iter().map(move |&c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Bytes used for an alphabet of size `sigma`: letters for small alphabets
/// so failures print readably, every byte value for 256.
pub fn alphabet(sigma: usize) -> Vec<u8> {
    match sigma {
        256 => (0..=255).collect(),
        s if s <= 26 => (b'A'..b'A' + s as u8).collect(),
        s => (0..s as u8).collect(),
    }
}

pub fn random_string(rng: &mut ChaCha8Rng, len: usize, alphabet: &[u8]) -> Vec<u8> {
    (0..len)
        .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
        .collect()
}

/// `count` random strings with lengths in `min_len..=max_len`, cycling
/// through the alphabet sizes.
pub fn random_corpus(
    seed: u64,
    count: usize,
    min_len: usize,
    max_len: usize,
    sigmas: &[usize],
) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabets: Vec<Vec<u8>> = sigmas.iter().map(|&s| alphabet(s)).collect();
    (0..count)
        .map(|i| {
            let len = rng.gen_range(min_len..=max_len);
            random_string(&mut rng, len, &alphabets[i % alphabets.len()])
        })
        .collect()
}
