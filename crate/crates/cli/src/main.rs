//! `parsort` command-line front end.
//!
//! Exit codes: 0 success, 1 runtime or data failure, 2 usage or
//! configuration error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parsort::dist::DistError;
use parsort::transport::{TrafficSnapshot, TransportKind, DEFAULT_PORT_BASE};
use parsort::workbench::{
    format_summary, gen_keys, read_key_file, run_algorithm, run_suite, verify, write_csv,
    write_key_file, BenchError, GenSpec, RunConfig, SuiteSpec,
};
use parsort::Algorithm;

#[derive(Parser)]
#[command(name = "parsort", version, about = "Hybrid parallel sorting workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key file.
    Gen(GenArgs),
    /// Sort a key file with one algorithm.
    Sort(SortArgs),
    /// Check that a key file is sorted, optionally against its source.
    Verify(VerifyArgs),
    /// Time a grid of algorithms and configurations.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    digits: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Draw keys from [0, 10^digits) instead of exactly `digits` digits.
    #[arg(long)]
    full_range: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransportArg {
    Local,
    Tcp,
}

#[derive(Args)]
struct TransportArgs {
    #[arg(long, value_enum, default_value_t = TransportArg::Local)]
    transport: TransportArg,
    #[arg(long, default_value_t = DEFAULT_PORT_BASE)]
    port_base: u16,
}

impl TransportArgs {
    fn kind(&self) -> TransportKind {
        match self.transport {
            TransportArg::Local => TransportKind::Local,
            TransportArg::Tcp => TransportKind::Tcp {
                port_base: self.port_base,
            },
        }
    }
}

#[derive(Args)]
struct SortArgs {
    #[arg(long, value_parser = parse_algo)]
    algo: Algorithm,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value_t = 1)]
    nodes: usize,
    #[arg(long, default_value_t = 3)]
    digits: u32,
    #[command(flatten)]
    transport: TransportArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Original unsorted file; also checks the multiset of keys.
    #[arg(long)]
    against: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_algo)]
    algos: Vec<Algorithm>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    threads: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    nodes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    digits: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    full_range: bool,
    #[command(flatten)]
    transport: TransportArgs,
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse::<Algorithm>().map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        if e.is_config() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Sort(a) => cmd_sort(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `parsort help` for usage");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn cmd_gen(a: GenArgs) -> Result<(), Failure> {
    let spec = GenSpec::new(a.n, a.digits, a.seed).full_range(a.full_range);
    let (lo, hi) = spec.range().map_err(|e| Failure::Usage(e.to_string()))?;
    let keys = gen_keys(&spec).map_err(|e| Failure::Usage(e.to_string()))?;
    write_key_file(&a.out, &keys).map_err(runtime)?;
    println!(
        "wrote {} keys in [{lo}, {hi}) to {}",
        keys.len(),
        a.out.display()
    );
    Ok(())
}

fn cmd_sort(a: SortArgs) -> Result<(), Failure> {
    let cfg = RunConfig::new(a.threads, a.nodes, a.digits).with_transport(a.transport.kind());
    cfg.validate(a.algo)?;
    let keys = read_key_file(&a.input).map_err(runtime)?;
    let run = run_algorithm(a.algo, &keys, &cfg).map_err(|e| match e {
        BenchError::Dist(DistError::KeyOutOfRange { index, key, digits }) => Failure::Runtime(
            format!("key {key} at index {index} has more than {digits} digits"),
        ),
        other => other.into(),
    })?;
    write_key_file(&a.out, &run.output).map_err(runtime)?;
    let cfg = cfg.normalized(a.algo);
    println!(
        "{}: sorted {} keys (threads={}, nodes={}) in {:.3} ms",
        a.algo,
        keys.len(),
        cfg.threads,
        cfg.nodes,
        run.elapsed.as_secs_f64() * 1e3
    );
    if let Some(t) = &run.traffic {
        println!("{}", traffic_note(t));
    }
    Ok(())
}

fn traffic_note(t: &TrafficSnapshot) -> String {
    let mut from_master = 0;
    let mut to_master = 0;
    let mut between = 0;
    for (src, dst, c) in t.keys_edges() {
        match (src, dst) {
            (0, _) => from_master += c,
            (_, 0) => to_master += c,
            _ => between += c,
        }
    }
    format!(
        "messages: master->nodes {from_master}, nodes->master {to_master}, node<->node {between}"
    )
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    let keys = read_key_file(&a.input).map_err(runtime)?;
    let reference = match &a.against {
        Some(path) => read_key_file(path).map_err(runtime)?,
        None => keys.clone(),
    };
    let report = verify(&reference, &keys, false);
    println!("{}: {report}", a.input.display());
    if report.passed() {
        Ok(())
    } else {
        let at = report
            .first_violation
            .map(|i| format!(" at index {i}"))
            .unwrap_or_default();
        Err(Failure::Runtime(format!("verification failed{at}")))
    }
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    let spec = SuiteSpec {
        sizes: a.sizes,
        algos: a.algos,
        threads: a.threads,
        nodes: a.nodes,
        digits: a.digits,
        seed: a.seed,
        trials: a.trials,
        full_range: a.full_range,
        transport: a.transport.kind(),
    };
    spec.validate()?;
    let records = run_suite(&spec)?;
    if let Some(path) = &a.csv {
        let mut out = BufWriter::new(File::create(path).map_err(runtime)?);
        write_csv(&mut out, &records).map_err(runtime)?;
        out.flush().map_err(runtime)?;
    }
    print!("{}", format_summary(&records));
    Ok(())
}
