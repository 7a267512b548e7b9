//! Bilateral run-peeling decomposition of byte strings.
//!
//! A string is wrapped in two out-of-band sentinels and repeatedly peeled:
//! each step removes the maximal leading run and the maximal trailing run
//! and records them as one token `(front ++ back, |front|)`. The peeling
//! stops at a span that is a single run or that has nothing left between
//! the two runs; that span is the terminal token (split 0).
//!
//! ```
//! use flashback::{decompose, reconstruct};
//!
//! let t = decompose(b"CASSAYFF");
//! assert_eq!(t.to_string(), "[@$_1, CFF_1, AY_1, SSA_0]");
//! assert_eq!(reconstruct(&t).unwrap(), b"CASSAYFF");
//! ```

pub mod cli;
pub mod codec;
pub mod edit;
pub mod error;
pub mod image;
pub mod peeling;
pub mod runs;
pub mod stats;
pub mod textfmt;
pub mod token;

pub use codec::{decompose, decompose_iterative, reconstruct};
pub use error::{Error, Result};
pub use image::{validate, ValidationReport};
pub use runs::{predict_tokens, rle, Run, RunLengthEncoding};
pub use token::{BilateralToken, Symbol, Token, TokenSequence};
