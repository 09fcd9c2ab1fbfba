//! Class numbers h(-N) against the index for primes N ≡ 3 mod 4.
//!
//!     cargo run --release --example class_numbers -- 200

use hecke_anemic::arith::primes_between;
use hecke_anemic::index::stabilized_report;
use hecke_anemic::quadratic::{class_number_imag, reduced_forms};

fn main() {
    let top: u64 = std::env::args().nth(1).map_or(100, |s| s.parse().expect("bound"));
    println!("reduced forms of discriminant -23: {:?}", reduced_forms(-23).unwrap());
    println!("{:>5} {:>4} {:>6}", "N", "h", "index");
    for n in primes_between(3, top).into_iter().filter(|n| n % 4 == 3) {
        let h = class_number_imag(-(n as i64)).unwrap();
        let r = stabilized_report(n, None).unwrap();
        let flag = if (h > 1) == (r.index > 1.into()) { "" } else { "  MISMATCH" };
        println!("{n:>5} {h:>4} {:>6}{flag}", r.index);
    }
}
