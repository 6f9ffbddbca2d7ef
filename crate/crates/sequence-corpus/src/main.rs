//! Command-line front end: build, analyze, verify, and export the corpus
//! automata. Exit status 0 on success, 1 when a mathematical precondition
//! fails, 2 on usage errors.

use clap::{Parser, Subcommand, ValueEnum};
use diagonal_automata::analysis::{
    attained_outputs, finitely_attained, output_frequencies, verify_period, Finiteness,
    FrequencyMode, PeriodVerdict,
};
use diagonal_automata::lucas::{lucas_check, prime_power_lucas_binomial, LucasOutcome};
use diagonal_automata::modarith::{ModulusSpec, Residue};
use diagonal_automata::{Dfao, EngineOptions, Variant};
use sequence_corpus::build::{build_for, BuildError, BuildMeta, Route};
use sequence_corpus::document::AutomatonDocument;
use sequence_corpus::fixtures::{self, FixtureError};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sequence-corpus",
    about = "Automata computing combinatorial sequences modulo prime powers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Standard,
    PostCartier,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Standard => Variant::Standard,
            VariantArg::PostCartier => Variant::PostCartier,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build an automaton and print or export it
    Automaton {
        fixture: String,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        alpha: u32,
        #[arg(long, value_enum, default_value = "standard")]
        variant: VariantArg,
        /// Write the JSON document here instead of stdout
        #[arg(long)]
        out: Option<String>,
        /// Also write a Graphviz DOT rendering
        #[arg(long)]
        dot: Option<String>,
    },
    /// Report attained, forbidden, and finitely attained residues
    Residues {
        /// Fixture name or path to an exported JSON document
        source: String,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        alpha: Option<u32>,
    },
    /// Report the asymptotic frequency of each residue
    Frequencies {
        /// Fixture name or path to an exported JSON document
        source: String,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        alpha: Option<u32>,
    },
    /// Report the density of each p-adic valuation below alpha
    Valuation {
        fixture: String,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        alpha: u32,
    },
    /// Decide whether outputs are eventually periodic with the given period
    Period {
        /// Fixture name or path to an exported JSON document
        source: String,
        #[arg(long)]
        period: u64,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        alpha: Option<u32>,
    },
    /// Check the one-digit-at-a-time product structure mod p
    Lucas {
        fixture: String,
        #[arg(long)]
        prime: u64,
        /// Override the fixture's root exponent s (sequence = coefficients
        /// of q^(-1/s))
        #[arg(long)]
        root_exponent: Option<u64>,
    },
    /// Compare automaton outputs against the brute-force oracle
    Verify {
        fixture: String,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        alpha: u32,
        #[arg(long, default_value = "512")]
        count: u64,
    },
    /// Binomial coefficient mod p^alpha via the generalized digit formula
    Pplucas {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        alpha: u32,
    },
}

enum CliError {
    Usage(String),
    Math(String),
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> CliError {
        match e {
            BuildError::PreconditionFailure(m) => CliError::Math(m),
            BuildError::Fixture(FixtureError::UnknownFixture(n)) => {
                CliError::Usage(format!("no fixture named {n:?}"))
            }
            other => CliError::Math(other.to_string()),
        }
    }
}

impl From<FixtureError> for CliError {
    fn from(e: FixtureError) -> CliError {
        match e {
            FixtureError::UnknownFixture(n) => CliError::Usage(format!("no fixture named {n:?}")),
            other => CliError::Math(other.to_string()),
        }
    }
}

fn modulus(p: u64, a: u32) -> Result<ModulusSpec, CliError> {
    ModulusSpec::new(p, a).map_err(|e| CliError::Usage(e.to_string()))
}

/// A built or loaded automaton plus the header lines describing it.
struct Loaded {
    dfao: Dfao<Residue>,
    modulus: ModulusSpec,
    n0: u64,
    initial_terms: Vec<u64>,
    heading: String,
}

fn route_str(r: Route) -> &'static str {
    match r {
        Route::Diagonal => "diagonal",
        Route::CurveDiagonal => "curve-diagonal",
        Route::HalvedCurveDiagonal => "halved-curve-diagonal",
        Route::AlgebraicDirect => "algebraic-direct",
    }
}

fn build(fixture: &str, p: u64, a: u32, variant: Variant) -> Result<(Dfao<Residue>, BuildMeta), CliError> {
    let f = fixtures::find(fixture)?;
    let options = EngineOptions {
        variant,
        ..EngineOptions::default()
    };
    Ok(build_for(f, modulus(p, a)?, &options)?)
}

/// `source` is a fixture name (prime/alpha required) or a JSON document path.
fn load(source: &str, p: Option<u64>, a: Option<u32>) -> Result<Loaded, CliError> {
    if std::path::Path::new(source).is_file() {
        let text = std::fs::read_to_string(source)
            .map_err(|e| CliError::Usage(format!("cannot read {source}: {e}")))?;
        let doc = AutomatonDocument::from_json(&text)
            .map_err(|e| CliError::Usage(format!("{source}: {e}")))?;
        let dfao = doc
            .to_automaton()
            .map_err(|e| CliError::Usage(format!("{source}: {e}")))?;
        let m = doc.modulus();
        Ok(Loaded {
            heading: format!(
                "{} mod {} (from {source}): {} states",
                doc.fixture,
                m.modulus(),
                dfao.num_states()
            ),
            dfao,
            modulus: m,
            n0: doc.validity_threshold,
            initial_terms: doc.initial_terms,
        })
    } else {
        let (p, a) = match (p, a) {
            (Some(p), Some(a)) => (p, a),
            _ => {
                return Err(CliError::Usage(format!(
                    "{source} is not a file; pass a fixture name with --prime and --alpha"
                )))
            }
        };
        let (dfao, meta) = build(source, p, a, Variant::Standard)?;
        Ok(Loaded {
            heading: format!(
                "{} mod {}: {} states ({} route)",
                meta.fixture,
                meta.modulus.modulus(),
                dfao.num_states(),
                route_str(meta.route)
            ),
            dfao,
            modulus: meta.modulus,
            n0: meta.n0,
            initial_terms: meta.initial_terms,
        })
    }
}

fn residue_universe(m: ModulusSpec) -> Vec<u64> {
    (0..m.modulus()).collect()
}

fn list(values: &[u64]) -> String {
    if values.is_empty() {
        "(none)".to_string()
    } else {
        values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn print_validity(n0: u64, initial: &[u64]) {
    if n0 > 0 {
        println!(
            "note: outputs are sequence values for n >= {n0}; true leading terms: {}",
            list(initial)
        );
    }
}

fn run() -> Result<(), CliError> {
    match Cli::parse().command {
        Command::Automaton { fixture, prime, alpha, variant, out, dot } => {
            let (d, meta) = build(&fixture, prime, alpha, variant.into())?;
            let doc = AutomatonDocument::from_automaton(&d, &meta);
            println!(
                "{} mod {}: {} states, {} route, valid for n >= {}",
                meta.fixture,
                meta.modulus.modulus(),
                d.num_states(),
                route_str(meta.route),
                meta.n0
            );
            match out {
                Some(path) => std::fs::write(&path, doc.to_json())
                    .map_err(|e| CliError::Usage(format!("cannot write {path}: {e}")))?,
                None => print!("{}", doc.to_json()),
            }
            if let Some(path) = dot {
                std::fs::write(&path, doc.to_dot())
                    .map_err(|e| CliError::Usage(format!("cannot write {path}: {e}")))?;
            }
            Ok(())
        }
        Command::Residues { source, prime, alpha } => {
            let loaded = load(&source, prime, alpha)?;
            println!("{}", loaded.heading);
            print_validity(loaded.n0, &loaded.initial_terms);
            let universe = residue_universe(loaded.modulus);
            let report = attained_outputs(&loaded.dfao, &universe);
            println!("attained:  {}", list(&report.attained));
            println!("forbidden: {}", list(&report.forbidden));
            if loaded.dfao.arity() == 1 {
                let fin = finitely_attained(&loaded.dfao, &report.attained)
                    .map_err(|e| CliError::Math(format!("{e:?}")))?;
                for (label, f) in &fin.per_label {
                    match f {
                        Finiteness::Infinite => {
                            println!("residue {label}: attained infinitely often")
                        }
                        Finiteness::Finite(ns) => println!(
                            "residue {label}: attained only at n in {{{}}}",
                            ns.iter()
                                .map(|v| v.to_string())
                                .collect::<Vec<_>>()
                                .join(", ")
                        ),
                    }
                }
            }
            Ok(())
        }
        Command::Frequencies { source, prime, alpha } => {
            let loaded = load(&source, prime, alpha)?;
            println!("{}", loaded.heading);
            let universe = residue_universe(loaded.modulus);
            let report = output_frequencies(&loaded.dfao, &universe);
            let mode = match report.mode {
                FrequencyMode::Limit => "natural density",
                FrequencyMode::Cesaro => "Cesàro density (plain limit may not exist)",
            };
            println!("mode: {mode}");
            for (label, freq) in &report.frequencies {
                println!("residue {label}: {freq}");
            }
            Ok(())
        }
        Command::Valuation { fixture, prime, alpha } => {
            let (d, meta) = build(&fixture, prime, alpha, Variant::Standard)?;
            println!(
                "{} mod {}: p-adic valuation densities",
                meta.fixture,
                meta.modulus.modulus()
            );
            print_validity(meta.n0, &meta.initial_terms);
            // Valuation of a residue mod p^alpha, with everything divisible
            // by p^(alpha-1)... capped as ">= alpha" for residue 0.
            let val = |r: &u64| -> u64 {
                let mut r = *r;
                let mut v = 0;
                while v < alpha as u64 && r % prime == 0 {
                    if r == 0 {
                        return alpha as u64;
                    }
                    r /= prime;
                    v += 1;
                }
                v
            };
            let relabeled = d.relabel(val);
            let universe: Vec<u64> = (0..=alpha as u64).collect();
            let report = output_frequencies(&relabeled, &universe);
            for (v, freq) in &report.frequencies {
                if *v == alpha as u64 {
                    println!("valuation >= {alpha}: {freq}");
                } else {
                    println!("valuation {v}: {freq}");
                }
            }
            Ok(())
        }
        Command::Period { source, period, prime, alpha } => {
            let loaded = load(&source, prime, alpha)?;
            println!("{}", loaded.heading);
            match verify_period(&loaded.dfao, period)
                .map_err(|e| CliError::Math(format!("{e:?}")))?
            {
                PeriodVerdict::Periodic { threshold } => {
                    println!("periodic with period {period} from N={threshold}")
                }
                PeriodVerdict::NotPeriodic { counterexample, .. } => println!(
                    "not eventually periodic with period {period}: \
                     a({counterexample}) != a({})",
                    counterexample + period
                ),
            }
            Ok(())
        }
        Command::Lucas { fixture, prime, root_exponent } => {
            let f = fixtures::find(&fixture)?;
            let mut spec = f
                .lucas_spec(prime)
                .map_err(|e| CliError::Math(e.to_string()))?;
            if let Some(s) = root_exponent {
                let data = f.lucas.expect("lucas_spec succeeded");
                let m = ModulusSpec::new(prime, 1).map_err(|e| CliError::Usage(e.to_string()))?;
                let q = sequence_corpus::parser::parse_mod_poly(data.q, data.arity, m)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                spec = diagonal_automata::LucasSpec::new(
                    q,
                    s,
                    data.partition.iter().map(|b| b.to_vec()).collect(),
                )
                .map_err(|e| CliError::Math(e.to_string()))?;
            }
            match lucas_check(&spec).map_err(|e| CliError::Math(e.to_string()))? {
                LucasOutcome::Table(table) => {
                    println!("{fixture} mod {prime}: digit-product structure holds");
                    let blocks = table.blocks();
                    let nsyms = (prime as usize).pow(blocks as u32);
                    for sym in 0..nsyms {
                        let mut digits = vec![0u64; blocks];
                        let mut rem = sym;
                        for d in digits.iter_mut().rev() {
                            *d = (rem % prime as usize) as u64;
                            rem /= prime as usize;
                        }
                        println!(
                            "c({}) = {}",
                            digits
                                .iter()
                                .map(|d| d.to_string())
                                .collect::<Vec<_>>()
                                .join(","),
                            table.entry(&digits)
                        );
                    }
                }
                LucasOutcome::Failure { digits, image } => {
                    println!(
                        "{fixture} mod {prime}: no digit-product structure; at digits ({}) \
                         the digit image is not constant: {:?}",
                        digits
                            .iter()
                            .map(|d| d.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                        image
                    );
                }
            }
            Ok(())
        }
        Command::Verify { fixture, prime, alpha, count } => {
            let f = fixtures::find(&fixture)?;
            let (d, meta) = build(&fixture, prime, alpha, Variant::Standard)?;
            if f.blocks() == 1 {
                let n = count.min(4096) as usize;
                let oracle = f
                    .oracle_terms(meta.modulus, n)
                    .map_err(|e| CliError::Math(e.to_string()))?;
                for i in 0..n as u64 {
                    let got = if i < meta.n0 {
                        meta.initial_terms[i as usize]
                    } else {
                        d.run(&[i]).map_err(|e| CliError::Math(format!("{e:?}")))?
                    };
                    if got != oracle[i as usize] {
                        return Err(CliError::Math(format!(
                            "mismatch at n={i}: automaton {got}, oracle {}",
                            oracle[i as usize]
                        )));
                    }
                }
                println!("{fixture} mod {}: {} terms agree with the oracle", meta.modulus.modulus(), n);
            } else {
                let side = (count as f64).sqrt() as u64 + 1;
                let side = side.clamp(2, 64);
                let rows =
                    sequence_corpus::oracle::pascal_rows(2 * side as usize, meta.modulus);
                for n in 0..side {
                    for k in 0..side {
                        let got = d
                            .run(&[n, k])
                            .map_err(|e| CliError::Math(format!("{e:?}")))?;
                        let want = sequence_corpus::oracle::binomial(&rows, n, k);
                        if got != want {
                            return Err(CliError::Math(format!(
                                "mismatch at (n,k)=({n},{k}): automaton {got}, oracle {want}"
                            )));
                        }
                    }
                }
                println!(
                    "{fixture} mod {}: {}x{} entries agree with the oracle",
                    meta.modulus.modulus(),
                    side,
                    side
                );
            }
            Ok(())
        }
        Command::Pplucas { n, m, prime, alpha } => {
            let spec = modulus(prime, alpha)?;
            let v = prime_power_lucas_binomial(n, m, spec);
            println!("C({n}, {m}) mod {} = {v}", spec.modulus());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
