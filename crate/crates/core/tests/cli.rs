use std::collections::BTreeSet;
use std::io::Write;
use std::process::{Command, Output};

use hecke_anemic::cli::{read_records, ScanRecord, ScanSummary};
use hecke_anemic::index::IndexReport;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke-anemic")).args(args).output().expect("run binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn index_text_and_json() {
    let o = bin(&["index", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("−2·T1"), "{text}");
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["index", "1"]));

    let o = bin(&["index", "23", "--json"]);
    let line = stdout(&o);
    assert_eq!(line.lines().count(), 1);
    let report: IndexReport = serde_json::from_str(&line).unwrap();
    assert_eq!(report.index, 2.into());
    assert_eq!(serde_json::to_string(&report).unwrap(), line.trim_end());
}

#[test]
fn strict_mode_and_bound_flags() {
    let o = bin(&["index", "43", "--strict-anemic", "--bound", "20", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: IndexReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.index, 1.into());
    assert!(r.bound_used >= 40);
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["index", "4"]).status.code(), Some(2));
    assert_eq!(bin(&["forms", "1", "--mod2"]).status.code(), Some(2));
    assert_eq!(bin(&["classnum", "13"]).status.code(), Some(2));
    assert_eq!(bin(&["classnum", "21"]).status.code(), Some(2));
    assert_eq!(bin(&["index", "11", "--bound", "1"]).status.code(), Some(1));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(64));
}

#[test]
fn classnum_output() {
    assert_eq!(stdout(&bin(&["classnum", "163"])), "h(-163) = 1\npredicted index = 1\n");
    assert_eq!(stdout(&bin(&["classnum", "23"])), "h(-23) = 3\npredicted index > 1\n");
}

#[test]
fn forms_output() {
    let o = bin(&["forms", "19", "--mod2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "(none)"));

    let o = bin(&["forms", "23", "--mod2"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with('f')).collect();
    assert_eq!(rows.len(), 1);
    for row in rows {
        for term in row.split(" = ").nth(1).unwrap().split(" + ") {
            let exp: usize = term.strip_prefix("q^").unwrap_or("1").parse().unwrap();
            assert_eq!(exp % 2, 0, "odd exponent in {row}");
        }
    }
}

#[test]
fn scan_empty_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("empty.jsonl");
    let o = bin(&["scan", "--from", "24", "--to", "28", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "");
    assert!(stdout(&o).contains("computed 0"));
    assert_eq!(ScanSummary::from_records(&[]), ScanSummary::default());
    assert!(stdout(&o).contains(&ScanSummary::default().to_string()));
}

#[test]
fn scan_resume_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.jsonl");
    let path = out.to_str().unwrap();
    let o = bin(&["scan", "--from", "3", "--to", "200", "--out", path, "--jobs", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let records = read_records(&out).unwrap();
    assert_eq!(records.len(), hecke_anemic::arith::primes_between(3, 200).len());

    let heegner: BTreeSet<u64> = records.iter().filter(|r| r.n_mod_4 == 3 && r.report.index == 1.into()).map(|r| r.report.level).collect();
    assert_eq!(heegner, BTreeSet::from([3, 7, 11, 19, 43, 67, 163]));

    let summary = ScanSummary::from_records(&records);
    assert!(stdout(&o).contains(&summary.to_string()));

    // Simulate an interrupted append, then resume.
    let before = std::fs::read_to_string(&out).unwrap();
    std::fs::OpenOptions::new().append(true).open(&out).unwrap().write_all(b"{\"level\":19").unwrap();
    let o = bin(&["scan", "--from", "3", "--to", "200", "--out", path, "--resume"]);
    assert!(stdout(&o).starts_with("computed 0,"), "{}", stdout(&o));
    assert!(stdout(&o).contains(&summary.to_string()));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), before);

    // Records are reproducible apart from wall-clock time.
    let first: &ScanRecord = records.iter().find(|r| r.report.level == 43).unwrap();
    let again = hecke_anemic::cli::scan_record(43).unwrap();
    assert_eq!(ScanRecord { duration_ms: 0, ..first.clone() }, ScanRecord { duration_ms: 0, ..again });
}
