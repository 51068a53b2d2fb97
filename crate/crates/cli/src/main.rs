//! Command-line front end: construct, check, instantiate, encode, decode and
//! simulate balanced sparsest MDS generator matrices.
//!
//! Exit status is 0 on success, 1 on a domain failure (a property check
//! fails, instantiation is refused or exhausted, decoding is beyond the
//! correction radius) and 2 on usage, parse or I/O errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sparse_mds::balancer::swap_bound;
use sparse_mds::{
    construct_balanced_support, instantiate, run_simulation, CodecError, DecodeResult, FieldChoice,
    FieldElement, GmFile, P3Check, SimulationConfig, SimulationError, SupportMatrix,
};

#[derive(Debug, Parser)]
#[command(name = "sparse-mds", version, about = "Balanced sparsest generator matrices for MDS codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a balanced sparsest k x n support matrix (.sm) and its swap trace.
    Construct {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'k')]
        k: usize,
        /// Output .sm path; the trace goes to <out>.trace. Prints to stdout if omitted.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        /// Largest n accepted.
        #[arg(long, default_value_t = 64)]
        max_n: usize,
    },
    /// Check P1 (sparsest rows), P2 (balanced columns) and P3 (row unions) on an .sm file.
    Check {
        path: PathBuf,
        /// Properties to check; all three by default.
        #[arg(short = 'p', long = "property", value_enum)]
        properties: Vec<Property>,
        #[arg(short = 'm', long, value_enum, default_value_t = Method::Brute)]
        method: Method,
    },
    /// Fill an .sm support with random nonzero entries to get an MDS generator (.gm).
    Instantiate {
        path: PathBuf,
        /// Field size: `auto` or an explicit prime.
        #[arg(short = 'q', long = "q", default_value = "auto")]
        q: FieldArg,
        /// With `-q auto`, pick the smallest prime above C(n-1,k-1) times this.
        #[arg(long, default_value_t = 1)]
        q_multiplier: u64,
        #[arg(short = 's', long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        max_attempts: usize,
        /// Accept an explicit q that does not exceed C(n-1,k-1).
        #[arg(long)]
        force: bool,
        /// Output .gm path; stdout if omitted.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Encode a comma-separated message with a .gm generator.
    Encode {
        path: PathBuf,
        #[arg(short = 'x', long)]
        message: String,
    },
    /// Decode a comma-separated received word, correcting up to floor((n-k)/2) errors.
    Decode {
        path: PathBuf,
        #[arg(short = 'y', long)]
        received: String,
    },
    /// Run the sensor-network encode / corrupt / decode simulation.
    Simulate {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'q', long = "q", default_value = "auto")]
        q: FieldArg,
        #[arg(long, default_value_t = 1)]
        q_multiplier: u64,
        #[arg(short = 'e', long, default_value_t = 0)]
        errors: usize,
        #[arg(short = 't', long, default_value_t = 100)]
        trials: usize,
        #[arg(short = 's', long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        max_attempts: usize,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        /// Also write the generator matrix used to this .gm path.
        #[arg(long)]
        gm_out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Property {
    P1,
    P2,
    P3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Matching,
}

#[derive(Debug, Clone, Copy)]
enum FieldArg {
    Auto,
    Prime(u64),
}

impl std::str::FromStr for FieldArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            Ok(FieldArg::Auto)
        } else {
            s.parse()
                .map(FieldArg::Prime)
                .map_err(|_| format!("expected `auto` or a prime, got {s:?}"))
        }
    }
}

impl FieldArg {
    fn choice(self, multiplier: u64, force: bool) -> FieldChoice {
        match self {
            FieldArg::Auto => FieldChoice::Auto { multiplier },
            FieldArg::Prime(q) => FieldChoice::Prime { q, force },
        }
    }
}

/// A failed command with its exit status.
#[derive(Debug)]
enum Failure {
    Domain(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Usage(m) => m,
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn say(text: impl std::fmt::Display) -> CmdResult {
    match write!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(usage(format!("cannot write to stdout: {e}"))),
        _ => Ok(()),
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn load_sm(path: &Path) -> Result<SupportMatrix, Failure> {
    read(path)?
        .parse()
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_gm(path: &Path) -> Result<GmFile, Failure> {
    read(path)?
        .parse()
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn join<T: ToString>(values: impl IntoIterator<Item = T>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn one_based(indices: &[usize]) -> String {
    join(indices.iter().map(|i| i + 1))
}

fn parse_vector(text: &str, gm: &GmFile, expected: usize) -> Result<Vec<FieldElement>, Failure> {
    let values: Vec<u64> = text
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|e| usage(format!("bad vector {text:?}: {e}")))?;
    if values.len() != expected {
        return Err(usage(format!("expected {expected} values, got {}", values.len())));
    }
    gm.generator.parse_vector(&values).map_err(usage)
}

fn cmd_construct(n: usize, k: usize, out: Option<PathBuf>, max_n: usize) -> CmdResult {
    if k == 0 || k > n {
        return Err(usage(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    if n > max_n {
        return Err(usage(format!("n = {n} exceeds the cap {max_n} (see --max-n)")));
    }
    let (m, trace) = construct_balanced_support(n, k).map_err(|e| Failure::Domain(e.to_string()))?;
    let summary = format!(
        "column weights: {}\nswaps: {} (bound {})",
        join(m.column_weights()),
        trace.swap_count(),
        swap_bound(n, k)
    );
    match out {
        Some(path) => {
            write(&path, &m.to_sm_string())?;
            let mut trace_path = path.into_os_string();
            trace_path.push(".trace");
            write(Path::new(&trace_path), &trace.to_log())?;
            say(format_args!("{summary}\n"))?;
        }
        None => {
            say(&m)?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn describe_p3(check: &P3Check) -> String {
    match check.witness() {
        None => "P3 PASS".into(),
        Some(w) => format!(
            "P3 FAIL rows {{{}}} cover {} columns, need {}",
            one_based(&w.violating_rows),
            w.union_size,
            w.required
        ),
    }
}

fn cmd_check(path: &Path, mut properties: Vec<Property>, method: Method) -> CmdResult {
    let m = load_sm(path)?;
    if properties.is_empty() {
        properties = vec![Property::P1, Property::P2, Property::P3];
    }
    properties.sort_unstable();
    properties.dedup();
    let mut all_pass = true;
    for p in properties {
        let (pass, line) = match p {
            Property::P1 => {
                let ok = m.check_p1();
                (ok, format!("P1 {}", if ok { "PASS" } else { "FAIL" }))
            }
            Property::P2 => {
                let ok = m.check_p2();
                (ok, format!("P2 {}", if ok { "PASS" } else { "FAIL" }))
            }
            Property::P3 => {
                let check = match method {
                    Method::Brute => m.check_p3_bruteforce(),
                    Method::Matching => m.check_p3_matching(),
                }
                .map_err(|e| usage(format!("P3 check not applicable: {e}")))?;
                (check.holds(), describe_p3(&check))
            }
        };
        say(format_args!("{line}\n"))?;
        all_pass &= pass;
    }
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Domain("property check failed".into()))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_instantiate(
    path: &Path,
    q: FieldArg,
    q_multiplier: u64,
    seed: u64,
    max_attempts: usize,
    force: bool,
    out: Option<PathBuf>,
) -> CmdResult {
    let m = load_sm(path)?;
    if force {
        if let FieldArg::Prime(q) = q {
            let bound = sparse_mds::finite_field::field_size_bound(m.n(), m.k()).unwrap_or(u64::MAX);
            if q <= bound {
                eprintln!("warning: q = {q} does not exceed C(n-1,k-1) = {bound}");
            }
        }
    }
    let inst = instantiate(&m, q.choice(q_multiplier, force), seed, max_attempts).map_err(|e| match e {
        CodecError::FieldTooSmall { .. } | CodecError::Field(_) | CodecError::FieldBoundOverflow => usage(e),
        other => Failure::Domain(format!("refusing to instantiate: {other}")),
    })?;
    let q_used = inst.generator.field().modulus();
    let gm = GmFile {
        generator: inst.generator,
        seed,
    };
    match out {
        Some(path) => {
            write(&path, &gm.to_string())?;
            say(format_args!("q: {q_used}\nattempts: {}\n", inst.attempts))?;
        }
        None => {
            say(&gm)?;
            eprintln!("q: {q_used}\nattempts: {}", inst.attempts);
        }
    }
    Ok(())
}

fn cmd_encode(path: &Path, message: &str) -> CmdResult {
    let gm = load_gm(path)?;
    let x = parse_vector(message, &gm, gm.generator.k())?;
    let c = gm.generator.encode(&x).map_err(usage)?;
    say(format_args!("{}\n", join(c)))?;
    Ok(())
}

fn cmd_decode(path: &Path, received: &str) -> CmdResult {
    let gm = load_gm(path)?;
    let y = parse_vector(received, &gm, gm.generator.n())?;
    match gm.generator.error_decode(&y).map_err(|e| Failure::Domain(e.to_string()))? {
        DecodeResult::Decoded {
            message,
            error_positions,
        } => {
            say(format_args!("message: {}\n", join(message)))?;
            say(format_args!("errors: [{}]\n", one_based(&error_positions)))?;
            Ok(())
        }
        DecodeResult::Failure => Err(Failure::Domain(format!(
            "decode failure: no codeword within {} errors",
            gm.generator.correction_radius()
        ))),
    }
}

fn cmd_simulate(cfg: SimulationConfig, json: bool, gm_out: Option<PathBuf>) -> CmdResult {
    let report = run_simulation(&cfg).map_err(|e| match e {
        SimulationError::InvalidConfig(_) => usage(e),
        SimulationError::Codec(CodecError::FieldTooSmall { .. } | CodecError::Field(_)) => usage(e),
        other => Failure::Domain(other.to_string()),
    })?;
    if let Some(path) = gm_out {
        write(&path, &report.generator_matrix)?;
    }
    if json {
        say(format_args!("{}\n", report.to_json()))?;
    } else {
        say(format_args!("{report}\n"))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Construct { n, k, out, max_n } => cmd_construct(n, k, out, max_n),
        Command::Check {
            path,
            properties,
            method,
        } => cmd_check(&path, properties, method),
        Command::Instantiate {
            path,
            q,
            q_multiplier,
            seed,
            max_attempts,
            force,
            out,
        } => cmd_instantiate(&path, q, q_multiplier, seed, max_attempts, force, out),
        Command::Encode { path, message } => cmd_encode(&path, &message),
        Command::Decode { path, received } => cmd_decode(&path, &received),
        Command::Simulate {
            n,
            k,
            q,
            q_multiplier,
            errors,
            trials,
            seed,
            max_attempts,
            json,
            gm_out,
        } => cmd_simulate(
            SimulationConfig {
                n,
                k,
                q: q.choice(q_multiplier, false),
                trials,
                errors_per_trial: errors,
                seed,
                max_attempts,
            },
            json,
            gm_out,
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
