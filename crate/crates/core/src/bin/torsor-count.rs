//! Command-line front end: morphism count tables and verification suites.
//!
//! Exit codes: 0 success, 1 failed verification or cross-method mismatch,
//! 2 usage error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use torsor_count::ff_poly::FieldCtx;
use torsor_count::heights::{count_records, CountRecord, Method};
use torsor_count::verify::{self, Case, Suite};

#[derive(Parser)]
#[command(name = "torsor-count", version, about = "Exact counts of rational curves of fixed anticanonical degree over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count morphisms N(n) for 0 ≤ n ≤ nmax.
    Count(CountArgs),
    /// Run invariant suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Torsor,
    Geometric,
    Moebius,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(clap::Args)]
struct CountArgs {
    /// Field size, a prime power.
    #[arg(long)]
    q: u32,
    /// Largest anticanonical degree.
    #[arg(long)]
    nmax: u32,
    #[arg(long, value_enum, default_value = "torsor")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Time each level; otherwise the seconds column is 0.
    #[arg(long)]
    timings: bool,
    /// Allow n beyond the default budget for this field.
    #[arg(long)]
    no_budget: bool,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = Suite::NAMES)]
    suite: String,
    /// Base fields for the kernel and decomposition suites.
    #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3])]
    q: Vec<u32>,
    /// Residue field sizes for the local suite.
    #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3, 4, 5, 7, 8, 9])]
    qv: Vec<u32>,
    /// Truncation for the series suite.
    #[arg(long, default_value_t = 6)]
    trunc: usize,
    /// Random instances per randomized family.
    #[arg(long, default_value_t = 200)]
    instances: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let threads = match &cli.command {
        Command::Count(a) => a.threads,
        Command::Verify(a) => a.threads,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => return usage(&format!("cannot start {threads} threads: {e}")),
    };
    let run = || match &cli.command {
        Command::Count(a) => cmd_count(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match pool.install(run) {
        Outcome::Ok => ExitCode::SUCCESS,
        Outcome::Failed(msg) => {
            eprintln!("torsor-count: {msg}");
            ExitCode::from(1)
        }
        Outcome::Usage(msg) => usage(&msg),
    }
}

enum Outcome {
    Ok,
    Failed(String),
    Usage(String),
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("torsor-count: {msg}");
    eprintln!("usage: torsor-count count --q Q --nmax N [--method torsor|geometric|moebius|all] [--format csv|json]");
    eprintln!("       torsor-count verify [--suite local|series|kernel|moebius|decomposition|all]");
    ExitCode::from(2)
}

fn cmd_count(a: &CountArgs) -> Outcome {
    let k = match FieldCtx::with_order(a.q) {
        Ok(k) => k,
        Err(e) => return Outcome::Usage(e.to_string()),
    };
    let methods: Vec<Method> = match a.method {
        MethodArg::Torsor => vec![Method::Torsor],
        MethodArg::Geometric => vec![Method::Geometric],
        MethodArg::Moebius => vec![Method::Moebius],
        MethodArg::All => Method::ALL.to_vec(),
    };
    if !a.no_budget {
        for m in &methods {
            if let Err(e) = m.check_budget(a.q, a.nmax) {
                return Outcome::Usage(format!("{e}; pass --no-budget to run anyway"));
            }
        }
    }
    let mut records: Vec<CountRecord> = Vec::new();
    for &m in &methods {
        match count_records(&k, m, a.nmax, a.timings) {
            Ok(r) => records.extend(r),
            Err(e) => return Outcome::Failed(e.to_string()),
        }
    }
    let text = match a.format {
        Format::Csv => render_csv(&records),
        Format::Json => render_json(&records),
    };
    if let Err(e) = emit(&text, a.out.as_ref()) {
        return Outcome::Failed(e.to_string());
    }
    let mismatches: Vec<u32> = (0..=a.nmax)
        .filter(|&n| {
            let mut counts = records.iter().filter(|r| r.n == n).map(|r| r.count);
            let first = counts.next();
            counts.any(|c| Some(c) != first)
        })
        .collect();
    if mismatches.is_empty() {
        Outcome::Ok
    } else {
        Outcome::Failed(format!("methods disagree at n = {mismatches:?}"))
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

/// `%.15g`: 15 significant digits, trailing zeros removed.
fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..15).contains(&exp) {
        let s = format!("{:.*}", (14 - exp).max(0) as usize, x);
        trim_zeros(&s)
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn render_csv(records: &[CountRecord]) -> String {
    let mut s = String::from("n,method,count,predicted,ratio,seconds\n");
    for r in records {
        let ratio = r.ratio.map(sig15).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{},{},{}", r.n, r.method.name(), r.count, sig15(r.predicted), ratio, sig15(r.seconds));
    }
    s
}

fn render_json(records: &[CountRecord]) -> String {
    let rows: Vec<String> = records
        .iter()
        .map(|r| {
            let ratio = r.ratio.map(sig15).unwrap_or_else(|| "null".into());
            format!(
                "  {{\"n\": {}, \"method\": \"{}\", \"count\": {}, \"predicted\": {}, \"ratio\": {}, \"seconds\": {}}}",
                r.n,
                r.method.name(),
                r.count,
                sig15(r.predicted),
                ratio,
                sig15(r.seconds)
            )
        })
        .collect();
    format!("[\n{}\n]\n", rows.join(",\n"))
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let suite: Suite = match a.suite.parse() {
        Ok(s) => s,
        Err(e) => return Outcome::Usage(e.to_string()),
    };
    let opts = verify::Options {
        q: a.q.clone(),
        qv: a.qv.clone(),
        trunc: a.trunc,
        instances: a.instances,
        seed: a.seed,
    };
    let cases = match verify::run(suite, &opts) {
        Ok(c) => c,
        Err(e @ torsor_count::Error::InvalidArgument(_)) => return Outcome::Usage(e.to_string()),
        Err(e) => return Outcome::Failed(e.to_string()),
    };
    let text = match a.format {
        ReportFormat::Text => render_cases(&cases),
        ReportFormat::Json => serde_json::to_string_pretty(&cases).expect("cases serialize") + "\n",
    };
    if let Err(e) = emit(&text, None) {
        return Outcome::Failed(e.to_string());
    }
    let (passed, total) = verify::tally(&cases);
    eprintln!("{passed}/{total} cases pass");
    if passed == total {
        Outcome::Ok
    } else {
        Outcome::Failed(format!("{} cases fail", total - passed))
    }
}

/// One line per case: status, suite, statement, case id, expected, actual.
fn render_cases(cases: &[Case]) -> String {
    let mut s = String::new();
    for c in cases {
        let status = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{status}\t{}\t{}\t{}\texpected {}\tgot {}", c.suite, c.anchor, c.id, c.expected, c.actual);
    }
    s
}
