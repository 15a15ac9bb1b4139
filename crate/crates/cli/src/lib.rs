//! `umbral-lab <compute|verify|table|bench> <target> [--n N | --max-n N]
//! [--format text|csv|json|markdown] [--jobs J] [--approx D]`
//!
//! Exit codes: 0 on success, 1 when any verification fails, 2 on usage
//! errors.

use std::io::Write;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use umbral_lab::identities::{self, IdentityId, VerifyReport};
use umbral_lab::lacasse::{self, XiValue};
use umbral_lab::umbra::derangement_poly;
use umbral_lab::{Int, Rat, Sequences};

pub mod render;

use render::Table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Print one exact value.
    Compute,
    /// Check identities over a range of n.
    Verify,
    /// Tabulate D_n, xi(n) and xi_2(n).
    Table,
    /// Time the three xi_2 algorithms.
    Bench,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
    Markdown,
}

#[derive(Debug, Parser)]
#[command(name = "umbral-lab", version, about = "Exact derangement-polynomial and xi(n) laboratory")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// compute: xi, xi2, xi-scaled, xi2-scaled, derangement, factorial, dpoly, chain.
    /// verify: eq22, eq23, eq24, umbral, conjecture, rewrites, chain, all.
    /// table: xi, xi2, all. bench: xi2, all.
    target: String,
    /// A single n.
    #[arg(long, conflicts_with = "max_n")]
    n: Option<usize>,
    /// Sweep every n in the target's domain up to this bound.
    #[arg(long = "max-n")]
    max_n: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for `verify` (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Also print decimal approximations with this many digits.
    #[arg(long)]
    approx: Option<usize>,
    /// Fault injection: add 1 to D_K in a private copy of the cache.
    #[arg(long = "inject-fault", value_name = "K")]
    inject_fault: Option<usize>,
}

/// Which `n` values a command covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Span {
    Single(usize),
    UpTo(usize),
}

impl Span {
    fn range(self, min_n: usize) -> RangeInclusive<usize> {
        match self {
            Span::Single(n) => n..=n,
            Span::UpTo(max) => min_n..=max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliConfig {
    pub command: Command,
    pub target: String,
    pub span: Span,
    pub format: Format,
    pub jobs: Option<usize>,
    pub approx: Option<usize>,
    pub inject_fault: Option<usize>,
}

#[derive(Debug)]
enum Outcome {
    Ok(String),
    Failed(String),
}

struct Usage(String);

type CmdResult = Result<Outcome, Usage>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Usage> {
    Err(Usage(msg.into()))
}

impl CliConfig {
    fn from_args(args: Args) -> Result<Self, Usage> {
        let span = match (args.n, args.max_n) {
            (Some(n), None) => Span::Single(n),
            (None, Some(max)) => {
                if max < 1 && args.command != Command::Compute {
                    return usage("--max-n must be at least 1");
                }
                Span::UpTo(max)
            }
            (None, None) => return usage("one of --n or --max-n is required"),
            (Some(_), Some(_)) => return usage("--n and --max-n are mutually exclusive"),
        };
        if args.command == Command::Compute && matches!(span, Span::UpTo(_)) {
            return usage("compute takes --n, not --max-n");
        }
        if args.jobs == Some(0) {
            return usage("--jobs must be at least 1");
        }
        Ok(Self {
            command: args.command,
            target: args.target.to_ascii_lowercase(),
            span,
            format: args.format,
            jobs: args.jobs,
            approx: args.approx,
            inject_fault: args.inject_fault,
        })
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let parsed = match Args::try_parse_from(args) {
        Ok(parsed) => parsed,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let config = match CliConfig::from_args(parsed) {
        Ok(config) => config,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    match execute(&config) {
        Ok(Outcome::Ok(text)) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Ok(Outcome::Failed(text)) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_FAILED
        }
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(config: &CliConfig) -> CmdResult {
    let forked;
    let seq: &Sequences = match config.inject_fault {
        Some(k) => {
            let mut copy = Sequences::global().fork();
            copy.inject_derangement_fault(k, Int::from(1));
            forked = copy;
            &forked
        }
        None => Sequences::global(),
    };
    match config.command {
        Command::Compute => compute(seq, config),
        Command::Verify => verify(seq, config),
        Command::Table => table(seq, config),
        Command::Bench => bench(seq, config),
    }
}

fn positive(target: &str, n: usize) -> Result<usize, Usage> {
    if n == 0 {
        usage(format!("{target} is defined for n >= 1 (got n = 0)"))
    } else {
        Ok(n)
    }
}

fn compute(seq: &Sequences, config: &CliConfig) -> CmdResult {
    let Span::Single(n) = config.span else {
        return usage("compute takes --n");
    };
    let target = config.target.as_str();

    if target == "chain" {
        let trace = identities::replay_proof(seq, positive(target, n)?).expect("n checked");
        let mut t = Table::new(["line", "value"]);
        for line in &trace.lines {
            t.push(vec![line.label.to_string(), line.value.to_string()]);
        }
        let text = match config.format {
            Format::Text => {
                let mut s: String = trace
                    .lines
                    .iter()
                    .map(|l| format!("{} = {}\n", l.label, l.value))
                    .collect();
                match trace.first_mismatch() {
                    None => s += "all six lines agree\n",
                    Some(i) => s += &format!("mismatch between L{} and L{}\n", i + 1, i + 2),
                }
                s
            }
            other => t.render(other),
        };
        return Ok(if trace.is_consistent() {
            Outcome::Ok(text)
        } else {
            Outcome::Failed(text)
        });
    }

    let (value, rational): (String, Option<Rat>) = match target {
        "xi" => {
            let v = lacasse::xi(seq, positive(target, n)?).expect("n checked");
            (render::rat(&v), Some(v))
        }
        "xi2" => {
            let v = lacasse::xi2(seq, positive(target, n)?).expect("n checked");
            (render::rat(&v), Some(v))
        }
        "xi-scaled" => {
            let v = lacasse::xi_scaled(seq, positive(target, n)?).expect("n checked");
            (v.to_string(), None)
        }
        "xi2-scaled" => {
            let v = lacasse::xi2_scaled(seq, positive(target, n)?).expect("n checked");
            (v.to_string(), None)
        }
        "derangement" => (seq.derangement(n).to_string(), None),
        "factorial" => (seq.factorial(n).to_string(), None),
        "dpoly" => (derangement_poly(seq, n).to_string(), None),
        other => return usage(format!("unknown compute target `{other}`")),
    };
    let approx = match (config.approx, &rational) {
        (Some(digits), Some(v)) => Some(render::approx(v, digits)),
        (Some(_), None) => return usage(format!("--approx applies to rational targets, not `{target}`")),
        _ => None,
    };

    let text = match config.format {
        Format::Text => {
            let mut s = value + "\n";
            if let Some(a) = approx {
                s += &format!("~ {a} (approximate)\n");
            }
            s
        }
        other => {
            let mut header = vec!["target", "n", "value"];
            let mut row = vec![target.to_string(), n.to_string(), value];
            if let Some(a) = approx {
                header.push("approximate");
                row.push(a);
            }
            let mut t = Table::new(header);
            t.push(row);
            t.render(other)
        }
    };
    Ok(Outcome::Ok(text))
}

fn thread_pool(jobs: Option<usize>) -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j);
    }
    builder.build().expect("thread pool")
}

fn verify(seq: &Sequences, config: &CliConfig) -> CmdResult {
    let ids: Vec<IdentityId> = match config.target.as_str() {
        "all" => IdentityId::ALL.to_vec(),
        name => match name.parse() {
            Ok(id) => vec![id],
            Err(_) => return usage(format!("unknown verify target `{name}`")),
        },
    };
    if let Span::Single(n) = config.span {
        if let Some(id) = ids.iter().find(|id| n < id.min_n()) {
            return usage(format!("{id} is defined for n >= {}", id.min_n()));
        }
    }

    let pool = thread_pool(config.jobs);
    // collect() keeps ascending n whatever order the workers finish in
    let groups: Vec<(IdentityId, Vec<VerifyReport>)> = ids
        .iter()
        .map(|&id| {
            let range: Vec<usize> = config.span.range(id.min_n()).collect();
            let reports = pool.install(|| {
                range
                    .into_par_iter()
                    .map(|n| identities::verify(seq, id, n).expect("n within domain"))
                    .collect()
            });
            (id, reports)
        })
        .collect();

    let all_passed = groups.iter().flat_map(|(_, r)| r).all(|r| r.passed);
    let text = match config.format {
        Format::Text => {
            let mut s = String::new();
            for (id, reports) in &groups {
                let passed = reports.iter().filter(|r| r.passed).count();
                s += &format!("{id}: {passed}/{} pass\n", reports.len());
                for r in reports.iter().filter(|r| !r.passed) {
                    for w in &r.witnesses {
                        s += &format!("  FAIL n={} at {}: lhs={} rhs={}\n", r.n, w.point, w.lhs, w.rhs);
                    }
                }
            }
            s
        }
        Format::Json => {
            let reports: Vec<&VerifyReport> = groups.iter().flat_map(|(_, r)| r).collect();
            serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n"
        }
        other => {
            let mut t = Table::new(["identity", "n", "passed", "point", "lhs", "rhs"]);
            for r in groups.iter().flat_map(|(_, r)| r) {
                let head = vec![r.identity.tag().to_string(), r.n.to_string(), r.passed.to_string()];
                if r.witnesses.is_empty() {
                    t.push([head.clone(), vec![String::new(); 3]].concat());
                }
                for w in &r.witnesses {
                    let tail = vec![w.point.clone(), w.lhs.to_string(), w.rhs.to_string()];
                    t.push([head.clone(), tail].concat());
                }
            }
            t.render(other)
        }
    };
    Ok(if all_passed {
        Outcome::Ok(text)
    } else {
        Outcome::Failed(text)
    })
}

fn table(seq: &Sequences, config: &CliConfig) -> CmdResult {
    if !matches!(config.target.as_str(), "xi" | "xi2" | "all") {
        return usage(format!("unknown table target `{}`", config.target));
    }
    let range = config.span.range(1);
    if range.contains(&0) {
        return usage("table rows need n >= 1");
    }
    let mut header = vec!["n", "derangement", "xi_scaled", "xi2_scaled", "xi", "xi2", "xi2_minus_xi"];
    if config.approx.is_some() {
        header.extend(["xi_approximate", "xi2_approximate"]);
    }
    let mut t = Table::new(header);
    for n in range {
        let a = XiValue::xi(seq, n).expect("n >= 1");
        let b = XiValue::xi2(seq, n).expect("n >= 1");
        let mut row = vec![
            n.to_string(),
            seq.derangement(n).to_string(),
            a.scaled.to_string(),
            b.scaled.to_string(),
            render::rat(&a.value),
            render::rat(&b.value),
            render::rat(&(&b.value - &a.value)),
        ];
        if let Some(digits) = config.approx {
            row.push(render::approx(&a.value, digits));
            row.push(render::approx(&b.value, digits));
        }
        t.push(row);
    }
    Ok(Outcome::Ok(t.render(config.format)))
}

type ScaledAlgorithm = fn(&Sequences, usize) -> umbral_lab::Result<Int>;

const BENCH_ALGORITHMS: [(&str, ScaledAlgorithm); 3] = [
    ("double_sum", lacasse::xi2_scaled),
    ("derangement", lacasse::xi2_via_derangement_scaled),
    ("closed", lacasse::xi2_closed_scaled),
];

const BENCH_RUNS: usize = 3;

fn median_time(seq: &Sequences, n: usize, f: ScaledAlgorithm) -> Duration {
    let mut times: Vec<Duration> = (0..BENCH_RUNS)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(f(seq, n).expect("n >= 1"));
            start.elapsed()
        })
        .collect();
    times.sort();
    times[BENCH_RUNS / 2]
}

fn bench(seq: &Sequences, config: &CliConfig) -> CmdResult {
    if !matches!(config.target.as_str(), "xi2" | "all") {
        return usage(format!("unknown bench target `{}`", config.target));
    }
    let range = config.span.range(1);
    if range.contains(&0) {
        return usage("bench needs n >= 1");
    }

    // agreement first; this run also warms every memo table
    for n in range.clone() {
        let values: Vec<Int> = BENCH_ALGORITHMS
            .iter()
            .map(|(_, f)| f(seq, n).expect("n >= 1"))
            .collect();
        if values.windows(2).any(|w| w[0] != w[1]) {
            let detail: Vec<String> = BENCH_ALGORITHMS
                .iter()
                .zip(&values)
                .map(|((name, _), v)| format!("{name}={v}"))
                .collect();
            return Ok(Outcome::Failed(format!(
                "xi2 algorithms disagree at n={n}: {}\n",
                detail.join(" ")
            )));
        }
    }

    let mut header = vec!["n".to_string()];
    header.extend(BENCH_ALGORITHMS.iter().map(|(name, _)| format!("{name}_us")));
    let mut t = Table::new(header);
    for n in range {
        let mut row = vec![n.to_string()];
        for (_, f) in BENCH_ALGORITHMS {
            let micros = median_time(seq, n, f).as_secs_f64() * 1e6;
            row.push(format!("{micros:.3}"));
        }
        t.push(row);
    }
    Ok(Outcome::Ok(t.render(config.format)))
}
