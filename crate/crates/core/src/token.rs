//! Symbols, bilateral tokens and token sequences.
//!
//! A [`TokenSequence`] keeps every token's symbols in one flat buffer, so a
//! decomposition of an `n`-byte input costs `n + 2` symbols plus one small
//! bound record per token, independent of how many tokens there are.

use std::fmt;

/// One element of the extended alphabet: an input byte or one of the two
/// out-of-band sentinels that wrap the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// Left sentinel, rendered `@`.
    Open,
    /// Right sentinel, rendered `$`.
    Close,
    Byte(u8),
}

impl Symbol {
    pub fn is_sentinel(self) -> bool {
        !matches!(self, Symbol::Byte(_))
    }

    pub fn byte(self) -> Option<u8> {
        match self {
            Symbol::Byte(b) => Some(b),
            _ => None,
        }
    }
}

impl From<u8> for Symbol {
    fn from(b: u8) -> Self {
        Symbol::Byte(b)
    }
}

/// Converts a byte string into symbols.
pub fn symbols_of(bytes: &[u8]) -> Vec<Symbol> {
    bytes.iter().copied().map(Symbol::Byte).collect()
}

/// The sentinel pair `@$` that every decomposition starts with.
pub const SENTINEL_PAIR: [Symbol; 2] = [Symbol::Open, Symbol::Close];

/// Borrowed view of one token inside a [`TokenSequence`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Token<'a> {
    pub symbols: &'a [Symbol],
    /// Number of leading symbols that form the front run; 0 marks a terminal.
    pub split: usize,
}

impl<'a> Token<'a> {
    pub fn is_terminal(&self) -> bool {
        self.split == 0
    }

    /// Front part `symbols[..split]`. Empty for terminals and for a
    /// malformed split beyond the symbol string.
    pub fn front(&self) -> &'a [Symbol] {
        &self.symbols[..self.split.min(self.symbols.len())]
    }

    pub fn back(&self) -> &'a [Symbol] {
        &self.symbols[self.split.min(self.symbols.len())..]
    }

    pub fn is_sentinel_pair(&self) -> bool {
        self.symbols == SENTINEL_PAIR
    }

    pub fn to_owned(&self) -> BilateralToken {
        BilateralToken {
            symbols: self.symbols.to_vec(),
            split: self.split,
        }
    }
}

impl fmt::Display for Token<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.symbols {
            match *s {
                Symbol::Open => f.write_str("@")?,
                Symbol::Close => f.write_str("$")?,
                Symbol::Byte(b) if b.is_ascii_graphic() || b == b' ' => write!(f, "{}", b as char)?,
                Symbol::Byte(b) => write!(f, "\\x{b:02X}")?,
            }
        }
        write!(f, "_{}", self.split)
    }
}

/// An owned bilateral token `(symbols, split)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BilateralToken {
    pub symbols: Vec<Symbol>,
    pub split: usize,
}

impl BilateralToken {
    pub fn new(symbols: Vec<Symbol>, split: usize) -> Self {
        BilateralToken { symbols, split }
    }

    /// Token over plain bytes, e.g. `BilateralToken::bytes(b"CFF", 1)`.
    pub fn bytes(symbols: &[u8], split: usize) -> Self {
        BilateralToken::new(symbols_of(symbols), split)
    }

    pub fn sentinel(split: usize) -> Self {
        BilateralToken::new(SENTINEL_PAIR.to_vec(), split)
    }

    pub fn as_token(&self) -> Token<'_> {
        Token {
            symbols: &self.symbols,
            split: self.split,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Bound {
    end: usize,
    split: usize,
}

/// Ordered list of bilateral tokens `[τ0, …, τ(k-1)]`.
///
/// The type itself accepts any list, well-formed or not; sequences returned
/// by the decomposers always satisfy the structural invariants, while
/// sequences parsed from text or built by hand may need checking with
/// [`crate::image::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TokenSequence {
    symbols: Vec<Symbol>,
    bounds: Vec<Bound>,
}

impl TokenSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(symbols: usize, tokens: usize) -> Self {
        TokenSequence {
            symbols: Vec::with_capacity(symbols),
            bounds: Vec::with_capacity(tokens),
        }
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    /// Sum of all token lengths.
    pub fn total_symbols(&self) -> usize {
        self.symbols.len()
    }

    pub fn push(&mut self, symbols: &[Symbol], split: usize) {
        self.symbols.extend_from_slice(symbols);
        self.push_bound(split);
    }

    /// Appends a token whose symbols are the concatenation of `front` and
    /// `back`, with the split at `front.len()` unless `terminal` is set.
    pub(crate) fn push_pair<I, J>(&mut self, front: I, back: J, terminal: bool)
    where
        I: IntoIterator<Item = Symbol>,
        J: IntoIterator<Item = Symbol>,
    {
        let start = self.symbols.len();
        self.symbols.extend(front);
        let split = if terminal {
            0
        } else {
            self.symbols.len() - start
        };
        self.symbols.extend(back);
        self.push_bound(split);
    }

    fn push_bound(&mut self, split: usize) {
        self.bounds.push(Bound {
            end: self.symbols.len(),
            split,
        });
    }

    pub fn get(&self, depth: usize) -> Option<Token<'_>> {
        let bound = self.bounds.get(depth)?;
        let start = match depth {
            0 => 0,
            _ => self.bounds[depth - 1].end,
        };
        Some(Token {
            symbols: &self.symbols[start..bound.end],
            split: bound.split,
        })
    }

    pub fn first(&self) -> Option<Token<'_>> {
        self.get(0)
    }

    pub fn last(&self) -> Option<Token<'_>> {
        self.len().checked_sub(1).and_then(|d| self.get(d))
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Token<'_>> + ExactSizeIterator + '_ {
        (0..self.len()).map(move |d| self.get(d).expect("depth in range"))
    }

    pub fn to_tokens(&self) -> Vec<BilateralToken> {
        self.iter().map(|t| t.to_owned()).collect()
    }

    /// Drops the leading token (normally the sentinel pair).
    pub fn without_head(&self) -> Vec<BilateralToken> {
        self.iter().skip(1).map(|t| t.to_owned()).collect()
    }
}

impl FromIterator<BilateralToken> for TokenSequence {
    fn from_iter<I: IntoIterator<Item = BilateralToken>>(iter: I) -> Self {
        let mut seq = TokenSequence::new();
        for tok in iter {
            seq.push(&tok.symbols, tok.split);
        }
        seq
    }
}

impl From<Vec<BilateralToken>> for TokenSequence {
    fn from(tokens: Vec<BilateralToken>) -> Self {
        tokens.into_iter().collect()
    }
}

impl fmt::Display for TokenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

/// Builds a token sequence from `(text, split)` pairs where `@` and `$`
/// stand for the sentinels and every other character is a byte.
///
/// Intended for tests and examples: `seq(&[("@$", 1), ("CFF", 1)])`.
pub fn seq(tokens: &[(&str, usize)]) -> TokenSequence {
    tokens
        .iter()
        .map(|&(text, split)| {
            let symbols = text
                .bytes()
                .map(|b| match b {
                    b'@' => Symbol::Open,
                    b'$' => Symbol::Close,
                    b => Symbol::Byte(b),
                })
                .collect();
            BilateralToken::new(symbols, split)
        })
        .collect()
}
