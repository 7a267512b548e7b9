//! Command-line front end.
//!
//! Exit codes: 0 on success or a valid/PASS result, 1 for a semantic failure
//! (invalid or malformed sequence, FAIL verdict, DISAGREE), 2 for parse,
//! usage and I/O errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::codec::{decompose, decompose_iterative, reconstruct};
use crate::edit::{diff_tokens, predict_changed_depths, RunLengthEdit, TokenDiff};
use crate::error::Error;
use crate::image::{validate, ValidationReport};
use crate::peeling::{strings_of_len, verify_optimality, DEFAULT_BRANCH_LIMIT};
use crate::runs::{alphabet_size, is_palindrome_by_rle, predict_tokens, rle};
use crate::stats::{expected_k, kernel_singleton_prob, monte_carlo, variance_k, StatParams};
use crate::textfmt::{escape_bytes, escape_symbols, parse, render};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "flashback",
    version,
    about = "Bilateral run-peeling decomposition tools"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose bytes into a token document.
    Encode {
        /// Input file, `-` for stdin.
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Rebuild bytes from a token document.
    Decode {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Check whether a token document is the decomposition of some string.
    Validate {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Report runs, token count, kernel and the run pairing of the input.
    Analyze {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Token depths that differ between the decompositions of two inputs.
    Diff {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Closed-form token statistics against a Monte Carlo estimate.
    Stats {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        sigma: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0x5EED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustively check greedy optimality over all short strings.
    Search {
        #[arg(long)]
        max_len: usize,
        #[arg(long, default_value = "AB")]
        alphabet: String,
        /// Node budget per string.
        #[arg(long, default_value_t = DEFAULT_BRANCH_LIMIT)]
        limit: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Flashback(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Flashback(
                Error::MalformedSequence(_) | Error::NotInImage(_) | Error::SkeletonMismatch(_),
            ) => EXIT_FAILURE,
            _ => EXIT_USAGE,
        }
    }
}

type CliResult = Result<u8, CliError>;

fn read_input(path: &Path, stdin: &mut dyn Read) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    if path.as_os_str() == "-" {
        stdin.read_to_end(&mut buf).map_err(|source| CliError::Io {
            path: "<stdin>".into(),
            source,
        })?;
    } else {
        buf = fs::read(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(buf)
}

fn write_out(out: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    out.write_all(bytes)
        .and_then(|_| out.flush())
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    json: bool,
    value: &T,
    lines: Vec<(&str, String)>,
) -> Result<(), CliError> {
    let text = if json {
        let mut s = serde_json::to_string_pretty(value).expect("report serializes");
        s.push('\n');
        s
    } else {
        lines
            .into_iter()
            .map(|(k, v)| format!("{k}: {v}\n"))
            .collect()
    };
    write_out(out, text.as_bytes())
}

fn set_str(d: &TokenDiff) -> String {
    let items: Vec<String> = d.changed_depths.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Runs one command against the given streams and returns the exit code.
pub fn run(cli: Cli, stdin: &mut dyn Read, stdout: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Encode { input } => {
            let bytes = read_input(&input, stdin)?;
            write_out(stdout, render(&decompose_iterative(&bytes)).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Decode { input } => {
            let tokens = parse(&read_input(&input, stdin)?)?;
            let bytes = reconstruct(&tokens)?;
            write_out(stdout, &bytes)?;
            Ok(EXIT_OK)
        }
        Command::Validate { input, json } => {
            let tokens = parse(&read_input(&input, stdin)?)?;
            cmd_validate(&validate(&tokens), json, stdout)
        }
        Command::Analyze { input, json } => {
            let bytes = read_input(&input, stdin)?;
            let report = analyze(&bytes);
            emit(stdout, json, &report, report.lines())?;
            Ok(EXIT_OK)
        }
        Command::Diff {
            first,
            second,
            json,
        } => {
            if first.as_os_str() == "-" && second.as_os_str() == "-" {
                return Err(CliError::Usage("only one diff input may be stdin".into()));
            }
            let a = read_input(&first, stdin)?;
            let b = read_input(&second, stdin)?;
            let report = diff(&a, &b);
            emit(stdout, json, &report, report.lines())?;
            Ok(if report.verdict.as_deref() == Some("DISAGREE") {
                EXIT_FAILURE
            } else {
                EXIT_OK
            })
        }
        Command::Stats {
            n,
            sigma,
            trials,
            seed,
            json,
        } => {
            let report = stats(n, sigma, trials, seed)?;
            emit(stdout, json, &report, report.lines())?;
            Ok(if report.verdict == "PASS" {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
        Command::Search {
            max_len,
            alphabet,
            limit,
            json,
        } => {
            let report = search(max_len, alphabet.as_bytes(), limit)?;
            emit(stdout, json, &report, report.lines())?;
            Ok(if report.verdict == "PASS" {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
    }
}

fn cmd_validate(report: &ValidationReport, json: bool, stdout: &mut dyn Write) -> CliResult {
    let mut lines = vec![
        ("valid", report.valid.to_string()),
        ("violations", report.violations.len().to_string()),
    ];
    for v in &report.violations {
        lines.push((
            "violation",
            format!("{} depth={} {}", v.condition, v.depth, v.message),
        ));
    }
    emit(stdout, json, report, lines)?;
    Ok(if report.valid { EXIT_OK } else { EXIT_FAILURE })
}

#[derive(Debug, Serialize)]
pub struct RunEntry {
    pub symbol: String,
    pub multiplicity: usize,
}

#[derive(Debug, Serialize)]
pub struct PairEntry {
    pub depth: usize,
    pub left_run: usize,
    pub right_run: usize,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub rle: Vec<RunEntry>,
    pub kernel: String,
    pub kernel_alphabet_size: usize,
    pub kernel_runs: Vec<usize>,
    pub palindrome: bool,
    pub pairs: Vec<PairEntry>,
    /// Whether the run-pairing prediction equals the peeled decomposition.
    pub run_pairing_agrees: bool,
    pub empty_input: bool,
}

impl AnalyzeReport {
    fn lines(&self) -> Vec<(&'static str, String)> {
        let rle = self
            .rle
            .iter()
            .map(|r| format!("{}^{}", r.symbol, r.multiplicity))
            .collect::<Vec<_>>()
            .join(" ");
        let mut lines = vec![
            ("n", self.n.to_string()),
            ("r", self.r.to_string()),
            ("k", self.k.to_string()),
            ("rle", rle),
            ("kernel", self.kernel.clone()),
            (
                "kernel_alphabet_size",
                self.kernel_alphabet_size.to_string(),
            ),
            (
                "kernel_runs",
                self.kernel_runs
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("palindrome", self.palindrome.to_string()),
        ];
        for p in &self.pairs {
            lines.push((
                "pair",
                format!("depth={} runs={}<->{}", p.depth, p.left_run, p.right_run),
            ));
        }
        lines.push(("run_pairing_agrees", self.run_pairing_agrees.to_string()));
        lines.push(("empty_input", self.empty_input.to_string()));
        lines
    }
}

pub fn analyze(bytes: &[u8]) -> AnalyzeReport {
    let tokens = decompose(bytes);
    let terminal = tokens.last().expect("decompositions are non-empty");
    let Ok(enc) = rle(bytes) else {
        // The empty string decomposes to the lone sentinel terminal.
        return AnalyzeReport {
            n: 0,
            r: 0,
            k: tokens.len(),
            rle: Vec::new(),
            kernel: escape_symbols(terminal.symbols),
            kernel_alphabet_size: alphabet_size(terminal.symbols),
            kernel_runs: Vec::new(),
            palindrome: true,
            pairs: Vec::new(),
            run_pairing_agrees: true,
            empty_input: true,
        };
    };
    AnalyzeReport {
        n: bytes.len(),
        r: enc.run_count(),
        k: tokens.len(),
        rle: enc
            .runs()
            .iter()
            .map(|r| RunEntry {
                symbol: escape_bytes(&[r.symbol]),
                multiplicity: r.multiplicity,
            })
            .collect(),
        kernel: escape_symbols(terminal.symbols),
        kernel_alphabet_size: alphabet_size(terminal.symbols),
        kernel_runs: enc.kernel_runs(),
        palindrome: is_palindrome_by_rle(bytes).expect("non-empty"),
        pairs: enc
            .pairs()
            .into_iter()
            .enumerate()
            .map(|(i, (left_run, right_run))| PairEntry {
                depth: i + 1,
                left_run,
                right_run,
            })
            .collect(),
        run_pairing_agrees: predict_tokens(&enc) == tokens,
        empty_input: false,
    }
}

#[derive(Debug, Serialize)]
pub struct DiffReport {
    pub changed: TokenDiff,
    pub skeleton_match: bool,
    pub predicted: Option<TokenDiff>,
    /// `AGREE` or `DISAGREE` when the skeletons match.
    pub verdict: Option<String>,
}

impl DiffReport {
    fn lines(&self) -> Vec<(&'static str, String)> {
        let mut lines = vec![
            ("changed_depths", set_str(&self.changed)),
            ("skeleton_match", self.skeleton_match.to_string()),
        ];
        if let (Some(p), Some(v)) = (&self.predicted, &self.verdict) {
            lines.push(("predicted_depths", set_str(p)));
            lines.push(("verdict", v.clone()));
        }
        lines
    }
}

pub fn diff(a: &[u8], b: &[u8]) -> DiffReport {
    let changed = diff_tokens(&decompose(a), &decompose(b));
    let edit = match (rle(a), rle(b)) {
        (Ok(ra), Ok(rb)) => RunLengthEdit::between(&ra, &rb).ok(),
        _ => None,
    };
    let predicted = edit.as_ref().map(predict_changed_depths);
    let verdict = predicted
        .as_ref()
        .map(|p| if *p == changed { "AGREE" } else { "DISAGREE" }.to_string());
    DiffReport {
        changed,
        skeleton_match: edit.is_some(),
        predicted,
        verdict,
    }
}

#[derive(Debug, Serialize)]
pub struct StatsReport {
    pub n: u64,
    pub sigma: u64,
    pub trials: u64,
    pub seed: u64,
    pub expected_k: f64,
    pub variance_k: f64,
    pub kernel_singleton_prob: f64,
    pub mc_mean_k: f64,
    pub mc_var_k: f64,
    pub mc_frac_kernel_singleton: f64,
    pub se_mean_k: f64,
    pub se_kernel: f64,
    pub identity_violations: u64,
    /// `PASS` when both estimates lie within 4 standard errors.
    pub verdict: String,
}

impl StatsReport {
    fn lines(&self) -> Vec<(&'static str, String)> {
        vec![
            ("n", self.n.to_string()),
            ("sigma", self.sigma.to_string()),
            ("trials", self.trials.to_string()),
            ("seed", self.seed.to_string()),
            ("expected_k", self.expected_k.to_string()),
            ("variance_k", self.variance_k.to_string()),
            (
                "kernel_singleton_prob",
                self.kernel_singleton_prob.to_string(),
            ),
            ("mc_mean_k", self.mc_mean_k.to_string()),
            ("mc_var_k", self.mc_var_k.to_string()),
            (
                "mc_frac_kernel_singleton",
                self.mc_frac_kernel_singleton.to_string(),
            ),
            ("se_mean_k", self.se_mean_k.to_string()),
            ("se_kernel", self.se_kernel.to_string()),
            ("identity_violations", self.identity_violations.to_string()),
            ("verdict", self.verdict.clone()),
        ]
    }
}

/// Standard errors allowed between estimate and closed form.
pub const SE_TOLERANCE: f64 = 4.0;

pub fn stats(n: u64, sigma: u64, trials: u64, seed: u64) -> Result<StatsReport, Error> {
    let params = StatParams::new(n, sigma)?;
    let expected = expected_k(params)?;
    let variance = variance_k(params)?;
    let singleton = kernel_singleton_prob(params)?;
    let sample = monte_carlo(params, trials, seed)?;
    let se_mean_k = (variance / trials as f64).sqrt();
    let se_kernel = (singleton * (1.0 - singleton) / trials as f64).sqrt();
    let pass = (sample.mean_k - expected).abs() <= SE_TOLERANCE * se_mean_k
        && (sample.frac_kernel_singleton - singleton).abs() <= SE_TOLERANCE * se_kernel
        && sample.identity_violations == 0;
    Ok(StatsReport {
        n,
        sigma,
        trials,
        seed,
        expected_k: expected,
        variance_k: variance,
        kernel_singleton_prob: singleton,
        mc_mean_k: sample.mean_k,
        mc_var_k: sample.var_k,
        mc_frac_kernel_singleton: sample.frac_kernel_singleton,
        se_mean_k,
        se_kernel,
        identity_violations: sample.identity_violations,
        verdict: if pass { "PASS" } else { "FAIL" }.to_string(),
    })
}

#[derive(Debug, Serialize)]
pub struct SearchReport {
    pub max_len: usize,
    pub alphabet: String,
    pub limit: u64,
    pub strings: u64,
    pub lower_bound_met: u64,
    pub flashback_attains: u64,
    pub even_strings: u64,
    pub even_unique: u64,
    pub max_nodes: u64,
    pub counterexamples: Vec<String>,
    pub verdict: String,
}

impl SearchReport {
    fn lines(&self) -> Vec<(&'static str, String)> {
        let mut lines = vec![
            ("max_len", self.max_len.to_string()),
            ("alphabet", self.alphabet.clone()),
            ("limit", self.limit.to_string()),
            ("strings", self.strings.to_string()),
            ("lower_bound_met", self.lower_bound_met.to_string()),
            ("flashback_attains", self.flashback_attains.to_string()),
            ("even_strings", self.even_strings.to_string()),
            ("even_unique", self.even_unique.to_string()),
            ("max_nodes", self.max_nodes.to_string()),
            ("counterexamples", self.counterexamples.len().to_string()),
        ];
        for c in &self.counterexamples {
            lines.push(("counterexample", c.clone()));
        }
        lines.push(("verdict", self.verdict.clone()));
        lines
    }
}

pub fn search(max_len: usize, alphabet: &[u8], limit: u64) -> Result<SearchReport, Error> {
    let mut sorted = alphabet.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if alphabet.is_empty() || sorted.len() != alphabet.len() {
        return Err(Error::ParamOutOfRange(
            "alphabet must be a non-empty list of distinct bytes".into(),
        ));
    }
    let mut report = SearchReport {
        max_len,
        alphabet: escape_bytes(alphabet),
        limit,
        strings: 0,
        lower_bound_met: 0,
        flashback_attains: 0,
        even_strings: 0,
        even_unique: 0,
        max_nodes: 0,
        counterexamples: Vec::new(),
        verdict: String::new(),
    };
    for len in 1..=max_len {
        let words = strings_of_len(alphabet, len);
        let checks = words
            .par_iter()
            .map(|w| verify_optimality(w, limit))
            .collect::<Result<Vec<_>, _>>()?;
        for (w, c) in words.iter().zip(&checks) {
            report.strings += 1;
            report.lower_bound_met += u64::from(c.min_content == c.lower_bound);
            report.flashback_attains += u64::from(c.flashback_attains);
            if c.runs % 2 == 0 {
                report.even_strings += 1;
                report.even_unique += u64::from(c.minimizers == 1 && c.flashback_attains);
            }
            report.max_nodes = report.max_nodes.max(c.nodes);
            if !c.holds() {
                report.counterexamples.push(format!(
                    "{} r={} min={} bound={} minimizers={} attains={}",
                    escape_bytes(w),
                    c.runs,
                    c.min_content,
                    c.lower_bound,
                    c.minimizers,
                    c.flashback_attains
                ));
            }
        }
    }
    report.verdict = if report.counterexamples.is_empty() {
        "PASS"
    } else {
        "FAIL"
    }
    .to_string();
    Ok(report)
}
