//! Mod-2 forms with vanishing odd coefficients at N = 653.
//!
//!     cargo run --release --example theta_forms

use hecke_anemic::index::{analyze_level, ReportOptions};

fn main() {
    let n: u64 = std::env::args().nth(1).map_or(653, |s| s.parse().expect("level"));
    let a = analyze_level(n, ReportOptions::default()).expect("analysis");
    let r = &a.report;
    println!("N = {n}: index {}, theta-kernel dim {}, Sturm bound {}", r.index, r.theta_kernel_dim, r.sturm_bound);
    for (i, f) in a.theta_kernel_basis().iter().enumerate() {
        let prefix = f.truncated(13);
        let bits: String = prefix.coeffs.iter().map(|&b| if b { '1' } else { '0' }).collect();
        println!("  g{}: q^1..q^13 = {bits}   {}", i + 1, prefix);
        assert!(f.support().iter().all(|k| k % 2 == 0));
    }
}
