//! The full report for one level: index, elementary divisors, θ-kernel.
//!
//!     cargo run --release --example anemic_index -- 163

use hecke_anemic::cli::format_report;
use hecke_anemic::index::{analyze_level, format_terms, ReportOptions};

fn main() {
    let n: u64 = std::env::args().nth(1).map_or(43, |s| s.parse().expect("level"));
    let analysis = analyze_level(n, ReportOptions::default()).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(1)
    });
    print!("{}", format_report(&analysis.report));
    if let Some(t) = &analysis.report.t2_expression {
        println!("T2 = {}", format_terms(t));
    }
    println!("doubling history:");
    for (b, idx, c) in &analysis.history {
        println!("  B = {b:>5}  index {}  theta dim {c}", idx.as_ref().map_or("-".into(), |x| x.to_string()));
    }
}
