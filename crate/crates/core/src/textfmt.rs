//! `FLASHBACK v1` token text documents.
//!
//! ```text
//! FLASHBACK v1
//! @$ 1
//! CFF 1
//! AY 1
//! SSA 0
//! ```
//!
//! Each token line is `<escaped-symbols> <split>`. Sentinels render as `@`
//! and `$`; printable ASCII other than `@`, `$`, `\` and space renders as
//! itself; `\@`, `\$` and `\\` are the literal bytes; everything else,
//! space included, is `\xHH` with uppercase hex. Rendered lines end in
//! `\n`; a missing final newline is tolerated when parsing.

use crate::error::{Error, Result};
use crate::token::{Symbol, TokenSequence};

pub const HEADER: &str = "FLASHBACK v1";

pub fn escape_symbol(s: Symbol, out: &mut String) {
    match s {
        Symbol::Open => out.push('@'),
        Symbol::Close => out.push('$'),
        Symbol::Byte(b'@') => out.push_str("\\@"),
        Symbol::Byte(b'$') => out.push_str("\\$"),
        Symbol::Byte(b'\\') => out.push_str("\\\\"),
        Symbol::Byte(b) if (0x21..=0x7E).contains(&b) => out.push(b as char),
        Symbol::Byte(b) => out.push_str(&format!("\\x{b:02X}")),
    }
}

pub fn escape_symbols(symbols: &[Symbol]) -> String {
    let mut out = String::with_capacity(symbols.len());
    for &s in symbols {
        escape_symbol(s, &mut out);
    }
    out
}

/// Escapes a plain byte string (no sentinels), for reports.
pub fn escape_bytes(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len());
    for &b in bytes {
        escape_symbol(Symbol::Byte(b), &mut out);
    }
    out
}

pub fn render(tokens: &TokenSequence) -> String {
    let mut out =
        String::with_capacity(HEADER.len() + 1 + tokens.total_symbols() + 4 * tokens.len());
    out.push_str(HEADER);
    out.push('\n');
    for tok in tokens.iter() {
        for &s in tok.symbols {
            escape_symbol(s, &mut out);
        }
        out.push(' ');
        out.push_str(&tok.split.to_string());
        out.push('\n');
    }
    out
}

fn hex_digit(b: u8) -> Option<u8> {
    match b {
        b'0'..=b'9' => Some(b - b'0'),
        b'A'..=b'F' => Some(b - b'A' + 10),
        _ => None,
    }
}

pub fn unescape_symbols(text: &[u8], line: usize) -> Result<Vec<Symbol>> {
    let err = |msg: String| Error::Parse { line, msg };
    let mut out = Vec::with_capacity(text.len());
    let mut i = 0;
    while i < text.len() {
        let b = text[i];
        match b {
            b'@' => out.push(Symbol::Open),
            b'$' => out.push(Symbol::Close),
            b'\\' => {
                i += 1;
                match text.get(i) {
                    Some(b'@') => out.push(Symbol::Byte(b'@')),
                    Some(b'$') => out.push(Symbol::Byte(b'$')),
                    Some(b'\\') => out.push(Symbol::Byte(b'\\')),
                    Some(b'x') => {
                        let hi = text.get(i + 1).copied().and_then(hex_digit);
                        let lo = text.get(i + 2).copied().and_then(hex_digit);
                        match (hi, lo) {
                            (Some(hi), Some(lo)) => out.push(Symbol::Byte(hi << 4 | lo)),
                            _ => {
                                return Err(err(
                                    "\\x must be followed by two uppercase hex digits".into()
                                ))
                            }
                        }
                        i += 2;
                    }
                    Some(&c) => return Err(err(format!("unknown escape \\{}", c.escape_ascii()))),
                    None => return Err(err("dangling backslash".into())),
                }
            }
            0x21..=0x7E => out.push(Symbol::Byte(b)),
            _ => {
                return Err(err(format!(
                    "byte {:#04x} must be written as \\x{b:02X}",
                    b
                )))
            }
        }
        i += 1;
    }
    Ok(out)
}

fn parse_split(text: &[u8], line: usize) -> Result<usize> {
    let err = || Error::Parse {
        line,
        msg: format!(
            "split must be a decimal integer, got {:?}",
            String::from_utf8_lossy(text)
        ),
    };
    if text.is_empty()
        || !text.iter().all(u8::is_ascii_digit)
        || (text.len() > 1 && text[0] == b'0')
    {
        return Err(err());
    }
    std::str::from_utf8(text)
        .ok()
        .and_then(|t| t.parse().ok())
        .ok_or_else(err)
}

/// Parses a document. Line numbers in errors are 1-based, the header being
/// line 1. Structural validity of the tokens is not checked beyond
/// `split <= symbol count`.
pub fn parse(input: &[u8]) -> Result<TokenSequence> {
    if input.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "empty document".into(),
        });
    }
    // The final newline is optional.
    let body = input.strip_suffix(b"\n").unwrap_or(input);
    let mut lines = body.split(|&b| b == b'\n');
    if lines.next() != Some(HEADER.as_bytes()) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header {HEADER:?}"),
        });
    }
    let mut tokens = TokenSequence::new();
    for (idx, text) in lines.enumerate() {
        let line = idx + 2;
        let Some(space) = text.iter().position(|&b| b == b' ') else {
            return Err(Error::Parse {
                line,
                msg: "expected `<symbols> <split>`".into(),
            });
        };
        let (sym_text, split_text) = (&text[..space], &text[space + 1..]);
        if sym_text.is_empty() {
            return Err(Error::Parse {
                line,
                msg: "token has no symbols".into(),
            });
        }
        let symbols = unescape_symbols(sym_text, line)?;
        let split = parse_split(split_text, line)?;
        if split > symbols.len() {
            return Err(Error::Parse {
                line,
                msg: format!(
                    "split {split} exceeds the {} symbols of the token",
                    symbols.len()
                ),
            });
        }
        tokens.push(&symbols, split);
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::decompose;
    use crate::token::seq;

    #[test]
    fn worked_example_document() {
        let doc = render(&decompose(b"CASSAYFF"));
        assert_eq!(doc, "FLASHBACK v1\n@$ 1\nCFF 1\nAY 1\nSSA 0\n");
        assert_eq!(parse(doc.as_bytes()).unwrap(), decompose(b"CASSAYFF"));
    }

    #[test]
    fn empty_and_binary_inputs() {
        assert_eq!(render(&decompose(b"")), "FLASHBACK v1\n@$ 0\n");
        assert_eq!(render(&decompose(b"\x00")), "FLASHBACK v1\n@$ 1\n\\x00 0\n");
    }

    #[test]
    fn escaping_rules() {
        let t = decompose(b"@$\\ a\x7F\xFF");
        let doc = render(&t);
        assert!(doc.contains("\\@"));
        assert!(doc.contains("\\$"));
        assert!(doc.contains("\\\\"));
        assert!(doc.contains("\\x20"));
        assert!(doc.contains("\\x7F"));
        assert!(doc.contains("\\xFF"));
        assert_eq!(parse(doc.as_bytes()).unwrap(), t);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases: &[(&[u8], usize)] = &[
            (b"", 1),
            (b"FLASHBACK v2\n@$ 0\n", 1),
            (b"FLASHBACK v1\n@$ 1\nAB x\n", 3),
            (b"FLASHBACK v1\n@$ 1\nAB 3\n", 3),
            (b"FLASHBACK v1\n@$ 1\nA B 1\n", 3),
            (b"FLASHBACK v1\n@$ 1\nAB\n", 3),
            (b"FLASHBACK v1\n@$ 1\n 0\n", 3),
            (b"FLASHBACK v1\n@$ 1\n\\xff 0\n", 3),
            (b"FLASHBACK v1\n@$ 1\n\\q 0\n", 3),
            (b"FLASHBACK v1\n@$ 1\nAB 01\n", 3),
            (b"FLASHBACK v1\n@$ 1\nAB  1\n", 3),
            (b"FLASHBACK v1\n@$ 1\n\n", 3),
        ];
        for &(doc, line) in cases {
            match parse(doc) {
                Err(Error::Parse { line: l, .. }) => {
                    assert_eq!(l, line, "{}", String::from_utf8_lossy(doc))
                }
                other => panic!("{:?} parsed as {other:?}", String::from_utf8_lossy(doc)),
            }
        }
    }

    #[test]
    fn parse_keeps_invalid_but_well_formed_lines() {
        let t = parse(b"FLASHBACK v1\n@$ 1\nAB 0\nC 0\n").unwrap();
        assert_eq!(t, seq(&[("@$", 1), ("AB", 0), ("C", 0)]));
        assert!(parse(b"FLASHBACK v1\n").unwrap().is_empty());
        assert_eq!(parse(b"FLASHBACK v1\n@$ 0").unwrap(), seq(&[("@$", 0)]));
    }
}
