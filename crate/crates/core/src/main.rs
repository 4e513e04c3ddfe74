use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use peakmetrics::enumerate::class_summaries;
use peakmetrics::verify::{self, Sampling, TheoremId, DEFAULT_SAMPLES, DEFAULT_SEED};
use peakmetrics::{
    class_size, is_admissible, max_pair, min_pair, minimal_swap_path, peak_class, peak_set,
    DistanceSummary, Error, Limits, MetricKind, PeakSet, Permutation,
};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INADMISSIBLE: u8 = 3;
const EXIT_CAP: u8 = 4;

/// Hamming, l-infinity and Kendall-Tau distances on permutations grouped by
/// peak set.
#[derive(Parser, Debug)]
#[command(name = "peakmetrics", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the peak set of a permutation.
    Peaks {
        /// One-line notation, e.g. "5 8 3 2 7 1 6 4" or 5 8 3 2 7 1 6 4.
        #[arg(required = true, num_args = 1..)]
        perm: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Distance between two permutations.
    Dist {
        metric: MetricKind,
        a: String,
        b: String,
        /// Also print a minimal adjacent value swap path (kendall only).
        #[arg(long)]
        path: bool,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// List the permutations of 1..n with the given peak set.
    Class {
        peak_set: String,
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Exact min and max distance over a peak class.
    Summary {
        /// Peak set such as "{2,4}", or "all" for every admissible set.
        peak_set: String,
        n: usize,
        /// hamming, linf, kendall, or all.
        metric: MetricArg,
        /// Permit pairwise work up to the enumeration cap.
        #[arg(long)]
        allow_large: bool,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Print the pair attaining the maximum (or, with --min, the minimum)
    /// distance in a peak class.
    Extremal {
        peak_set: String,
        n: usize,
        metric: MetricKind,
        #[arg(long)]
        min: bool,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Check the closed-form extremes against exhaustive search.
    Verify {
        /// A theorem id, or "all".
        #[arg(long, default_value = "all")]
        theorem: String,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random samples per size beyond the exhaustive range.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
        /// Permit pairwise work up to the enumeration cap (slow at n = 9).
        #[arg(long)]
        allow_large: bool,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy)]
enum MetricArg {
    One(MetricKind),
    All,
}

impl std::str::FromStr for MetricArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            Ok(MetricArg::All)
        } else {
            s.parse().map(MetricArg::One)
        }
    }
}

/// A failure that maps onto one of the documented exit codes.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InadmissibleSet { .. } => EXIT_INADMISSIBLE,
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::DivisibilityViolation { .. } => EXIT_FAIL,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_FAIL,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: EXIT_FAIL,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn limits_from_env() -> Result<Limits, Failure> {
    let mut limits = Limits::default();
    if let Ok(raw) = std::env::var("PEAKMETRICS_CAP") {
        let cap: usize = raw.trim().parse().map_err(|_| {
            input_error(format!("PEAKMETRICS_CAP={raw:?} is not a positive integer"))
        })?;
        limits.enumeration = cap;
        limits.pairwise = limits.pairwise.min(cap);
    }
    Ok(limits)
}

fn allow_large(limits: &mut Limits, n: usize) {
    if n > limits.pairwise && n <= limits.enumeration {
        eprintln!("warning: pairwise search at n = {n} may take a long time");
        limits.pairwise = limits.enumeration;
    }
}

fn parse_perm(raw: &str) -> Result<Permutation, Failure> {
    raw.parse::<Permutation>().map_err(Failure::from)
}

fn parse_peak_set(raw: &str) -> Result<PeakSet, Failure> {
    raw.parse::<PeakSet>().map_err(Failure::from)
}

fn require_admissible(s: &PeakSet, n: usize) -> Result<(), Failure> {
    if n == 0 {
        return Err(input_error("n must be at least 1"));
    }
    if !is_admissible(s, n) {
        return Err(Error::InadmissibleSet { set: s.clone(), n }.into());
    }
    Ok(())
}

fn print_json(out: &mut impl Write, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value).map_err(|e| input_error(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let _ = out.flush();
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> Result<u8, Failure> {
    let mut limits = limits_from_env()?;
    match command {
        Command::Peaks { perm, format } => {
            let p = parse_perm(&perm.join(" "))?;
            let s = peak_set(&p);
            match format {
                Format::Json => print_json(out, &json!({ "permutation": p, "peak_set": s }))?,
                _ => writeln!(out, "{s}")?,
            }
        }
        Command::Dist {
            metric,
            a,
            b,
            path,
            format,
        } => {
            let (a, b) = (parse_perm(&a)?, parse_perm(&b)?);
            let distance = metric.distance(&a, &b)?;
            let path = match (path, metric) {
                (false, _) => None,
                (true, MetricKind::KendallTau) => Some(minimal_swap_path(&a, &b)?.to_string()),
                (true, _) => return Err(input_error("--path is only defined for kendall")),
            };
            match format {
                Format::Json => print_json(
                    out,
                    &json!({ "metric": metric, "a": a, "b": b, "distance": distance, "path": path }),
                )?,
                _ => {
                    writeln!(out, "{distance}")?;
                    if let Some(path) = path {
                        writeln!(out, "{path}")?;
                    }
                }
            }
        }
        Command::Class {
            peak_set,
            n,
            format,
        } => {
            let s = parse_peak_set(&peak_set)?;
            require_admissible(&s, n)?;
            let class = peak_class(&s, n, &limits)?;
            match format {
                Format::Json => {
                    let size = class_size(&s, n, &limits)?;
                    print_json(
                        out,
                        &json!({
                            "n": n,
                            "peak_set": s,
                            "class_size": size.size,
                            "exponent": size.exponent,
                            "quotient": size.quotient,
                            "members": class.members,
                        }),
                    )?
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["permutation"])?;
                    for p in &class.members {
                        w.write_record([p.to_string()])?;
                    }
                    w.flush()?;
                }
                Format::Plain => {
                    for p in &class.members {
                        writeln!(out, "{p}")?;
                    }
                }
            }
        }
        Command::Summary {
            peak_set,
            n,
            metric,
            allow_large: large,
            format,
        } => {
            if n == 0 {
                return Err(input_error("n must be at least 1"));
            }
            if large {
                allow_large(&mut limits, n);
            }
            let sets = if peak_set.trim() == "all" {
                PeakSet::all_admissible(n)
            } else {
                let s = parse_peak_set(&peak_set)?;
                require_admissible(&s, n)?;
                vec![s]
            };
            limits.check_pairwise(n)?;
            let mut rows = Vec::new();
            for s in &sets {
                let class = peak_class(s, n, &limits)?;
                for summary in class_summaries(&class)? {
                    if matches!(metric, MetricArg::One(m) if m != summary.metric) {
                        continue;
                    }
                    rows.push(summary);
                }
            }
            write_summaries(out, &rows, format)?;
        }
        Command::Extremal {
            peak_set,
            n,
            metric,
            min,
            format,
        } => {
            let s = parse_peak_set(&peak_set)?;
            require_admissible(&s, n)?;
            let pair = if min {
                min_pair(&s, n)?
                    .into_iter()
                    .find(|p| p.metric == metric)
                    .expect("one pair per metric")
            } else {
                max_pair(&s, n, metric)?
            };
            if !pair.holds() {
                return Err(Failure {
                    code: EXIT_FAIL,
                    message: format!("construction failed its self-check: {pair:?}"),
                });
            }
            match format {
                Format::Json => print_json(out, &pair)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["metric", "n", "peak_set", "claimed_distance", "a", "b"])?;
                    w.write_record([
                        pair.metric.to_string(),
                        n.to_string(),
                        pair.s.to_string(),
                        pair.claimed_distance.to_string(),
                        pair.a.to_string(),
                        pair.b.to_string(),
                    ])?;
                    w.flush()?;
                }
                Format::Plain => {
                    writeln!(out, "metric: {}", pair.metric)?;
                    writeln!(out, "n: {n}")?;
                    writeln!(out, "peak_set: {}", pair.s)?;
                    writeln!(out, "claimed_distance: {}", pair.claimed_distance)?;
                    writeln!(out, "a: {}", pair.a)?;
                    writeln!(out, "b: {}", pair.b)?;
                }
            }
        }
        Command::Verify {
            theorem,
            n_max,
            seed,
            samples,
            allow_large: large,
            format,
        } => {
            let theorem = match theorem.as_str() {
                "all" => None,
                id => Some(id.parse::<TheoremId>().map_err(input_error)?),
            };
            if n_max < 2 {
                return Err(input_error("--n-max must be at least 2"));
            }
            if large {
                allow_large(&mut limits, n_max);
            }
            let sampling = Sampling { samples, seed };
            let mut all_pass = true;
            let mut write_err = None;
            verify::verify_streaming(theorem, n_max, sampling, &limits, |r| {
                all_pass &= r.passed();
                let result = match format {
                    Format::Json | Format::Csv => serde_json::to_string(r)
                        .map_err(io::Error::other)
                        .and_then(|line| writeln!(out, "{line}")),
                    Format::Plain => write_plain_report(out, r),
                };
                if let Err(e) = result.and_then(|_| out.flush()) {
                    write_err.get_or_insert(e);
                }
            })?;
            if let Some(e) = write_err {
                return Err(e.into());
            }
            return Ok(if all_pass { 0 } else { EXIT_FAIL });
        }
    }
    Ok(0)
}

fn write_plain_report(out: &mut impl Write, r: &verify::VerificationReport) -> io::Result<()> {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    write!(
        out,
        "{status} {} n={}..={} ({} ms)",
        r.theorem_id,
        r.n_range[0],
        r.n_range[1],
        r.elapsed.as_millis()
    )?;
    if let Some(seed) = r.seed {
        write!(out, " seed={seed}")?;
    }
    writeln!(out)?;
    if let Some(cx) = &r.counterexample {
        writeln!(
            out,
            "  counterexample: {}",
            serde_json::to_string(cx).map_err(io::Error::other)?
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SummaryRow {
    n: usize,
    peak_set: String,
    metric: MetricKind,
    class_size: usize,
    min: u64,
    max: u64,
    min_witness: String,
    max_witness: String,
}

fn witness_string((a, b): &(Permutation, Permutation)) -> String {
    format!("{a} / {b}")
}

fn write_summaries(
    out: &mut impl Write,
    rows: &[DistanceSummary],
    format: Format,
) -> Result<(), Failure> {
    match format {
        Format::Json => {
            for r in rows {
                print_json(
                    out,
                    &json!({
                        "n": r.n,
                        "peak_set": r.s,
                        "metric": r.metric,
                        "class_size": r.class_size,
                        "min": r.min,
                        "max": r.max,
                        "min_witness": [&r.min_witness.0, &r.min_witness.1],
                        "max_witness": [&r.max_witness.0, &r.max_witness.1],
                    }),
                )?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in rows {
                w.serialize(SummaryRow {
                    n: r.n,
                    peak_set: r.s.to_string(),
                    metric: r.metric,
                    class_size: r.class_size,
                    min: r.min,
                    max: r.max,
                    min_witness: witness_string(&r.min_witness),
                    max_witness: witness_string(&r.max_witness),
                })?;
            }
            w.flush()?;
        }
        Format::Plain => {
            for r in rows {
                writeln!(
                    out,
                    "n={} peak_set={} metric={} class_size={} min={} max={} min_witness={} max_witness={}",
                    r.n,
                    r.s,
                    r.metric,
                    r.class_size,
                    r.min,
                    r.max,
                    witness_string(&r.min_witness),
                    witness_string(&r.max_witness),
                )?;
            }
        }
    }
    Ok(())
}
