//! Resumable JSON-lines scan over a range of levels.
//!
//!     cargo run --release --example scan_levels -- 2 150 /tmp/levels.jsonl

use std::path::PathBuf;

use hecke_anemic::cli::{read_records, scan, ScanOptions};

fn main() {
    let mut args = std::env::args().skip(1);
    let from: u64 = args.next().map_or(2, |s| s.parse().expect("from"));
    let to: u64 = args.next().map_or(100, |s| s.parse().expect("to"));
    let out = args.next().map_or_else(|| std::env::temp_dir().join("hecke-anemic-scan.jsonl"), PathBuf::from);

    let opts = ScanOptions { from, to, out: out.clone(), resume: true, jobs: 2 };
    let first = scan(&opts).expect("scan");
    println!("computed {} levels into {}", first.computed.len(), out.display());
    let again = scan(&opts).expect("rescan");
    println!("resume: computed {}, skipped {}", again.computed.len(), again.skipped.len());
    println!("{}", again.summary);

    for r in read_records(&out).unwrap().iter().filter(|r| r.report.index > 1.into()) {
        println!("  N = {:>4}  index {}  h = {:?}", r.report.level, r.report.index, r.class_number);
    }
}
