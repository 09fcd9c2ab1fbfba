//! Command-line front end and the JSON-lines scanner.
//!
//! Exit codes:
//!
//! | code | meaning                                         |
//! |------|-------------------------------------------------|
//! | 0    | success                                         |
//! | 1    | any other error (i/o, internal check failures)  |
//! | 2    | level is not prime, or not ≡ 3 mod 4 (classnum) |
//! | 3    | index did not stabilize                         |
//! | 64   | bad command line                                |

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{is_prime, primes_between};
use crate::error::{Error, Result};
use crate::index::{analyze_level, format_terms, AnemicMode, IndexReport, ReportOptions};
use crate::manin::CONVENTION;
use crate::quadratic::{class_number_imag, predict_index_nontrivial};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_BAD_LEVEL: i32 = 2;
pub const EXIT_NO_STABILIZATION: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotPrime(_) | Error::WrongResidueClass(_) => EXIT_BAD_LEVEL,
        Error::NoStabilization { .. } => EXIT_NO_STABILIZATION,
        _ => EXIT_ERROR,
    }
}

/// sha256 of the modular-symbol conventions, hex encoded.
pub fn convention_fingerprint() -> String {
    hex::encode(Sha256::digest(CONVENTION.as_bytes()))
}

#[derive(Parser, Debug)]
#[command(name = "hecke-anemic", version, about = "Index of the anemic Hecke algebra at prime level")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute [T : T^an] and the theta-kernel dimension for one level.
    Index(IndexArgs),
    /// Scan a range of prime levels into a JSON-lines file.
    Scan(ScanArgs),
    /// Print a basis of the mod-2 theta-kernel.
    Forms(FormsArgs),
    /// Class number h(-N) and the predicted triviality of the index.
    Classnum { n: u64 },
}

#[derive(Args, Debug)]
pub struct IndexArgs {
    pub n: u64,
    /// Starting coefficient bound (default: 4 × Sturm bound).
    #[arg(long)]
    pub bound: Option<usize>,
    /// Use only T_n with gcd(n, 2N) = 1 as anemic generators.
    #[arg(long)]
    pub strict_anemic: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub from: u64,
    #[arg(long)]
    pub to: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Skip levels already recorded with this version.
    #[arg(long)]
    pub resume: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct FormsArgs {
    pub n: u64,
    /// Reduce mod 2 (the only supported mode).
    #[arg(long, required = true)]
    pub mod2: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Index(a) => cmd_index(&a, out),
        Command::Scan(a) => cmd_scan(&a, out, err),
        Command::Forms(a) => cmd_forms(&a, out),
        Command::Classnum { n } => cmd_classnum(n, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io<T>(r: std::io::Result<T>) -> Result<T> {
    r.map_err(Error::from)
}

fn require_prime(n: u64) -> Result<()> {
    if is_prime(n) {
        Ok(())
    } else {
        Err(Error::NotPrime(n))
    }
}

pub fn format_report(r: &IndexReport) -> String {
    let divisors: Vec<String> = r.elementary_divisors.iter().map(|d| d.to_string()).collect();
    let rows: Vec<(&str, String)> = vec![
        ("level", r.level.to_string()),
        ("genus", r.genus.to_string()),
        ("sturm_bound", r.sturm_bound.to_string()),
        ("bound_used", r.bound_used.to_string()),
        ("index", r.index.to_string()),
        ("two_rank", r.two_rank.map_or("-".into(), |k| k.to_string())),
        ("elementary_divisors", format!("[{}]", divisors.join(", "))),
        ("theta_kernel_dim", r.theta_kernel_dim.to_string()),
        ("weight1_dim", r.weight1_dim.to_string()),
        ("un_in_anemic", r.un_in_anemic.map_or("unknown".into(), |b| b.to_string())),
        ("t2_expression", r.t2_expression.as_ref().map_or("not in T^an".into(), |t| format_terms(t))),
        ("stabilized", r.stabilized.to_string()),
        ("methods_agree", r.methods_agree.to_string()),
    ];
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn cmd_index(a: &IndexArgs, out: &mut dyn Write) -> Result<i32> {
    require_prime(a.n)?;
    let mode = if a.strict_anemic { AnemicMode::Strict } else { AnemicMode::Extended };
    let report = analyze_level(a.n, ReportOptions { initial_bound: a.bound, mode })?.report;
    if a.json {
        io(writeln!(out, "{}", serde_json::to_string(&report).expect("report serializes")))?;
    } else {
        io(write!(out, "{}", format_report(&report)))?;
    }
    Ok(EXIT_OK)
}

fn cmd_forms(a: &FormsArgs, out: &mut dyn Write) -> Result<i32> {
    require_prime(a.n)?;
    let analysis = analyze_level(a.n, ReportOptions::default())?;
    let sturm = analysis.report.sturm_bound;
    let basis = analysis.theta_kernel_basis();
    io(writeln!(out, "# theta-kernel mod 2, N = {}, dim {}, through q^{}", a.n, basis.len(), sturm))?;
    if basis.is_empty() {
        io(writeln!(out, "(none)"))?;
    }
    for (i, f) in basis.iter().enumerate() {
        io(writeln!(out, "f{} = {}", i + 1, f.truncated(sturm)))?;
    }
    Ok(EXIT_OK)
}

fn cmd_classnum(n: u64, out: &mut dyn Write) -> Result<i32> {
    let nontrivial = predict_index_nontrivial(n)?;
    let h = class_number_imag(-(n as i64))?;
    io(writeln!(out, "h(-{n}) = {h}"))?;
    io(writeln!(out, "predicted index {}", if nontrivial { "> 1" } else { "= 1" }))?;
    Ok(EXIT_OK)
}

/// One persisted scan result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    #[serde(flatten)]
    pub report: IndexReport,
    pub n_mod_4: u64,
    /// `h(−N)` when `N ≡ 3 mod 4`.
    pub class_number: Option<u64>,
    pub duration_ms: u64,
    pub version: String,
    pub convention: String,
}

impl ScanRecord {
    pub fn is_current(&self) -> bool {
        self.version == VERSION && self.convention == convention_fingerprint()
    }
}

pub fn scan_record(n: u64) -> Result<ScanRecord> {
    require_prime(n)?;
    let start = Instant::now();
    let report = analyze_level(n, ReportOptions::default())?.report;
    let class_number = if n % 4 == 3 { Some(class_number_imag(-(n as i64))?) } else { None };
    Ok(ScanRecord {
        report,
        n_mod_4: n % 4,
        class_number,
        duration_ms: start.elapsed().as_millis() as u64,
        version: VERSION.to_string(),
        convention: convention_fingerprint(),
    })
}

/// Reads every complete record; a trailing partial line is ignored.
pub fn read_records(path: &Path) -> Result<Vec<ScanRecord>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut records = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if let Ok(r) = serde_json::from_str::<ScanRecord>(&line) {
            records.push(r);
        }
    }
    Ok(records)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub index_one: usize,
    pub index_gt_one: usize,
}

/// Counts of `index = 1` and `index > 1`, split by `N mod 4`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub mod4_1: ClassCounts,
    pub mod4_3: ClassCounts,
    /// `N = 2`.
    pub other: ClassCounts,
}

impl ScanSummary {
    pub fn from_records<'a>(records: impl IntoIterator<Item = &'a ScanRecord>) -> Self {
        let mut s = ScanSummary::default();
        for r in records {
            let bucket = match r.n_mod_4 {
                1 => &mut s.mod4_1,
                3 => &mut s.mod4_3,
                _ => &mut s.other,
            };
            if r.report.index.is_one() {
                bucket.index_one += 1;
            } else {
                bucket.index_gt_one += 1;
            }
        }
        s
    }
}

impl std::fmt::Display for ScanSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "summary: N≡1 mod 4: index=1 {}, index>1 {}; N≡3 mod 4: index=1 {}, index>1 {}; N=2: index=1 {}, index>1 {}",
            self.mod4_1.index_one,
            self.mod4_1.index_gt_one,
            self.mod4_3.index_one,
            self.mod4_3.index_gt_one,
            self.other.index_one,
            self.other.index_gt_one
        )
    }
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub from: u64,
    pub to: u64,
    pub out: PathBuf,
    pub resume: bool,
    pub jobs: usize,
}

#[derive(Clone, Debug)]
pub struct ScanOutcome {
    pub computed: Vec<u64>,
    pub skipped: Vec<u64>,
    pub failures: Vec<(u64, Error)>,
    /// Recomputed from the file after the scan, restricted to the range.
    pub summary: ScanSummary,
}

/// Cuts a trailing partial line left by an interrupted writer.
fn drop_partial_tail(file: &mut File) -> Result<()> {
    let mut buf = Vec::new();
    file.seek(SeekFrom::Start(0))?;
    file.read_to_end(&mut buf)?;
    if buf.last().is_some_and(|&b| b != b'\n') {
        let keep = buf.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        file.set_len(keep as u64)?;
    }
    file.seek(SeekFrom::End(0))?;
    Ok(())
}

/// Scans the primes in `[from, to]`. Without `resume` the file is started
/// afresh; with it, levels already recorded by this version are skipped and
/// new records are appended.
pub fn scan(opts: &ScanOptions) -> Result<ScanOutcome> {
    if opts.from < 2 || opts.from > opts.to {
        return Err(Error::Inconsistent(format!("scan range needs 2 ≤ from ≤ to, got {}..{}", opts.from, opts.to)));
    }
    let done: BTreeSet<u64> = if opts.resume {
        read_records(&opts.out)?.iter().filter(|r| r.is_current()).map(|r| r.report.level).collect()
    } else {
        BTreeSet::new()
    };
    let mut file = if opts.resume {
        OpenOptions::new().read(true).append(true).create(true).open(&opts.out)?
    } else {
        File::create(&opts.out)?
    };
    if opts.resume {
        drop_partial_tail(&mut file)?;
    }
    let (skipped, todo): (Vec<u64>, Vec<u64>) = primes_between(opts.from, opts.to).into_iter().partition(|n| done.contains(n));

    let writer = Mutex::new(file);
    let failures = Mutex::new(Vec::new());
    let work = |n: u64| -> Result<()> {
        match scan_record(n) {
            Ok(rec) => {
                let line = serde_json::to_string(&rec).expect("record serializes");
                let mut w = writer.lock().expect("writer lock");
                writeln!(w, "{line}")?;
                w.flush()?;
            }
            Err(e) => failures.lock().expect("failure lock").push((n, e)),
        }
        Ok(())
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Inconsistent(e.to_string()))?;
    pool.install(|| todo.par_iter().try_for_each(|&n| work(n)))?;

    let mut failures = failures.into_inner().expect("failure lock");
    failures.sort_by_key(|(n, _)| *n);
    let records = read_records(&opts.out)?;
    let in_range = records.iter().filter(|r| r.is_current() && (opts.from..=opts.to).contains(&r.report.level));
    let summary = ScanSummary::from_records(in_range);
    let computed = todo.into_iter().filter(|n| !failures.iter().any(|(m, _)| m == n)).collect();
    Ok(ScanOutcome { computed, skipped, failures, summary })
}

fn cmd_scan(a: &ScanArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let outcome = scan(&ScanOptions { from: a.from, to: a.to, out: a.out.clone(), resume: a.resume, jobs: a.jobs })?;
    for (n, e) in &outcome.failures {
        io(writeln!(err, "level {n}: {e}"))?;
    }
    io(writeln!(out, "computed {}, skipped {}, failed {}", outcome.computed.len(), outcome.skipped.len(), outcome.failures.len()))?;
    io(writeln!(out, "{}", outcome.summary))?;
    Ok(outcome.failures.iter().map(|(_, e)| exit_code(e)).max().unwrap_or(EXIT_OK))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let mut full = vec!["hecke-anemic"];
        full.extend_from_slice(args);
        let code = run(full, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["index", "4"]).0, EXIT_BAD_LEVEL);
        assert_eq!(run_str(&["classnum", "13"]).0, EXIT_BAD_LEVEL);
        assert_eq!(run_str(&["index"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["forms", "19"]).0, EXIT_USAGE);
    }

    #[test]
    fn classnum_output() {
        let (code, out, _) = run_str(&["classnum", "23"]);
        assert_eq!(code, 0);
        assert_eq!(out, "h(-23) = 3\npredicted index > 1\n");
    }

    #[test]
    fn fingerprint_is_stable_hex() {
        let f = convention_fingerprint();
        assert_eq!(f.len(), 64);
        assert_eq!(f, convention_fingerprint());
    }
}
