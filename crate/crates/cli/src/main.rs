//! `rootlattice`: prime classification, certificates and lattice utilities
//! for root data given as presets (`SC(E8)`, `Sum(GL(3), AD(B2))`) or JSON
//! files.
//!
//! Exit codes: 0 ok, 1 mathematical negative (invalid datum, not
//! essentially standard, certificate rejected, suite failed), 2 usage or
//! input error.

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use rootlattice::certificate::{self, Certificate};
use rootlattice::intlin::{smith_normal_form, IntMatrix};
use rootlattice::primes::{self, Characteristic};
use rootlattice::rootdatum::{validate, DatumError, RawDatum};
use rootlattice::selftest;
use rootlattice::standardness::{self, StandardnessError};
use rootlattice::{Exec, Prime, RootDatum};

#[derive(Parser)]
#[command(name = "rootlattice", version, about = "Good, very good and pretty good primes of root data")]
struct Cli {
    #[command(flatten)]
    format: Format,
    /// Run batch computations on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(multiple = false)]
struct Format {
    /// Pretty-printed JSON output (default).
    #[arg(long, global = true)]
    json: bool,
    /// Human-readable output.
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the root datum axioms.
    Validate { datum: String },
    /// Classify every prime up to max(--max-prime, the failing-prime bound).
    Primes {
        datum: String,
        #[arg(long, default_value_t = 30)]
        max_prime: u64,
    },
    /// Emit a machine-checkable certificate for the verdict at p.
    Certificate {
        datum: String,
        #[arg(short, long)]
        p: u64,
    },
    /// Re-check a certificate file.
    Verify { certificate: String },
    /// Essential standardness in characteristic p (0 allowed).
    Classify {
        datum: String,
        #[arg(short, long)]
        p: u64,
    },
    /// Split components into type-A, very good and torus parts at a good p.
    Decompose {
        datum: String,
        #[arg(short, long)]
        p: u64,
    },
    /// Swap roots and coroots.
    Dual { datum: String },
    /// Direct sum of several data.
    Sum {
        #[arg(required = true, num_args = 1..)]
        data: Vec<String>,
    },
    /// Smith normal form of an integer matrix (JSON list of rows, inline or a file).
    Snf { matrix: String },
    /// Run the property suites.
    Selftest {
        /// Raise the exhaustive subset limit from 12 to 18 roots.
        #[arg(long)]
        deep: bool,
    },
}

/// An error the user can fix: bad input, bad arguments.
#[derive(Debug)]
struct UsageError(anyhow::Error);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(e: impl Into<anyhow::Error>) -> anyhow::Error {
    anyhow::Error::new(UsageError(e.into()))
}

struct Out {
    text: bool,
}

impl Out {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<()> {
        let body = if self.text { text() } else { serde_json::to_string_pretty(value)? };
        // a closed pipe (`| head`) is not an error
        match writeln!(std::io::stdout().lock(), "{}", body.trim_end()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let out = Out { text: cli.format.text };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match cli.command {
        Command::Validate { datum } => cmd_validate(&out, &datum),
        Command::Primes { datum, max_prime } => {
            let d = load_datum(&datum)?;
            let reports = primes::reports_up_to(&d, max_prime, exec);
            out.emit(&reports, || {
                reports
                    .iter()
                    .map(|r| {
                        format!(
                            "p={:<3} bad={:<5} good={:<5} very_good={:<5} pretty_good={:<5} center_smooth={:<5} dual_center_smooth={:<5} {}",
                            r.p, r.bad, r.good, r.very_good, r.pretty_good, r.center_smooth, r.dual_center_smooth, r.verdict()
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Certificate { datum, p } => {
            let d = load_datum(&datum)?;
            let p = Prime::new(p).map_err(|_| usage(anyhow!("certificates need a prime p, got {p}")))?;
            let cert = certificate::emit(&d, p)?;
            cert.verify().context("emitted certificate failed its own check")?;
            out.emit(&cert, || describe(&cert))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { certificate } => {
            let text = read_input(&certificate)?;
            let cert: Certificate = serde_json::from_str(&text).map_err(usage)?;
            match cert.verify() {
                Ok(()) => {
                    println!("ok: {}", describe(&cert));
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("rejected: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Classify { datum, p } => {
            let d = load_datum(&datum)?;
            let c = Characteristic::new(p).map_err(|_| usage(anyhow!("p must be 0 or a prime, got {p}")))?;
            let v = standardness::classify(&d, c);
            out.emit(&v, || format!("p={}: {} ({})", v.p, v.verdict, v.centralizers))?;
            Ok(if v.essentially_standard { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Decompose { datum, p } => {
            let d = load_datum(&datum)?;
            let p = Prime::new(p).map_err(|_| usage(anyhow!("p must be prime, got {p}")))?;
            match standardness::decompose(&d, p) {
                Ok(x) => {
                    out.emit(&x, || {
                        let vg: Vec<String> = x.vg_blocks.iter().map(ToString::to_string).collect();
                        let mut s = format!(
                            "p={}: torus rank {}, type-A blocks {:?}, very good blocks [{}]",
                            x.p,
                            x.torus_rank,
                            x.a_blocks,
                            vg.join(", ")
                        );
                        if !x.witness_ok {
                            s.push_str(&format!("; add a torus of rank {} to glue", x.torus_augmentation));
                        }
                        s
                    })?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(e @ StandardnessError::BadPrime(_)) => {
                    eprintln!("{e}");
                    Ok(ExitCode::from(1))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Dual { datum } => {
            let d = load_datum(&datum)?.dual();
            out.emit(&d, || text_datum(&d))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sum { data } => {
            let mut acc = RootDatum::torus(0);
            for s in &data {
                acc = acc.direct_sum(&load_datum(s)?);
            }
            out.emit(&acc, || text_datum(&acc))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Snf { matrix } => {
            let text = read_input(&matrix)?;
            let m: IntMatrix = serde_json::from_str(&text).map_err(usage)?;
            let s = smith_normal_form(&m);
            out.emit(&s, || {
                let d: Vec<String> = s.divisors.iter().map(ToString::to_string).collect();
                format!("divisors: [{}]\nU =\n{}V =\n{}", d.join(", "), s.u, s.v)
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { deep } => {
            let cfg = selftest::Config {
                exec,
                ..if deep { selftest::Config::deep() } else { selftest::Config::default() }
            };
            let results = selftest::run(&cfg);
            for r in &results {
                let mark = if r.passed { "PASS" } else { "FAIL" };
                println!("{mark} {} ({} checks, {} ms)", r.name, r.checks, r.elapsed.as_millis());
                if let Some(f) = &r.failure {
                    println!("     first failure: {f}");
                }
            }
            Ok(if selftest::all_passed(&results) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn cmd_validate(out: &Out, input: &str) -> Result<ExitCode> {
    let raw: RawDatum = if looks_like_json(input) {
        let text = read_input(input)?;
        serde_json::from_str(&text).map_err(usage)?
    } else {
        let d = rootlattice::rootdatum::preset(input).map_err(usage)?;
        d.into()
    };
    match validate(&raw) {
        Ok(()) => {
            out.emit(&serde_json::json!({ "valid": true }), || "valid".to_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Err(violations) => {
            out.emit(&serde_json::json!({ "valid": false, "violations": violations }), || {
                violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
            })?;
            Ok(ExitCode::from(1))
        }
    }
}

/// A path to an existing file or inline JSON is JSON; anything else is a
/// preset name.
fn looks_like_json(input: &str) -> bool {
    Path::new(input).is_file() || input.trim_start().starts_with('{') || input.trim_start().starts_with('[')
}

fn read_input(input: &str) -> Result<String> {
    if Path::new(input).is_file() {
        std::fs::read_to_string(input).with_context(|| format!("reading {input}")).map_err(usage)
    } else {
        Ok(input.to_string())
    }
}

/// Loads a preset or a JSON datum; invalid data are a mathematical negative,
/// unparsable input a usage error.
fn load_datum(input: &str) -> Result<RootDatum> {
    if looks_like_json(input) {
        let text = read_input(input)?;
        let raw: RawDatum = serde_json::from_str(&text).map_err(usage)?;
        RootDatum::try_from(raw).map_err(|e| match e {
            DatumError::Invalid(v) => {
                let lines: Vec<String> = v.iter().map(ToString::to_string).collect();
                anyhow!("invalid root datum:\n{}", lines.join("\n"))
            }
            other => usage(other),
        })
    } else {
        rootlattice::rootdatum::preset(input).map_err(usage)
    }
}

fn text_datum(d: &RootDatum) -> String {
    let ty = d.cartan_type().map(|t| t.to_string()).unwrap_or_else(|e| e.to_string());
    let mut s = format!("rank {}, type {}, {} roots", d.rank(), ty, d.num_roots());
    for i in 0..d.num_roots() {
        s.push_str(&format!("\n  {:?}  coroot {:?}", d.root(i), d.coroot(i)));
    }
    s
}

fn describe(cert: &Certificate) -> String {
    let kind = serde_json::to_value(cert.kind())
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default();
    let torsion = certificate::witness_torsion(cert);
    if cert.proves_pretty_good() {
        format!("{kind} at p={}: all centralizers smooth", cert.p.get())
    } else {
        let t: Vec<String> = torsion.iter().map(|x| format!("Z/{x}")).collect();
        format!(
            "{kind} at p={}: p-torsion {}; non-smooth centralizer exists",
            cert.p.get(),
            t.join(" + ")
        )
    }
}

