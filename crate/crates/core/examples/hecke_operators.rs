//! Hecke operators on cuspidal modular symbols and their characteristic polynomials.
//!
//!     cargo run --example hecke_operators -- 37 13

use hecke_anemic::arith::primes_between;
use hecke_anemic::hecke::{hecke_prime, HeckeCache};
use hecke_anemic::manin::build_space;
use num_rational::BigRational;

fn poly(c: &[BigRational]) -> String {
    let mut terms = Vec::new();
    for (k, a) in c.iter().enumerate().rev() {
        if a == &BigRational::from_integer(0.into()) {
            continue;
        }
        terms.push(match k {
            0 => format!("{a}"),
            1 => format!("({a})x"),
            _ => format!("({a})x^{k}"),
        });
    }
    terms.join(" + ")
}

fn main() {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().map_or(37, |s| s.parse().expect("level"));
    let pmax: u64 = args.next().map_or(13, |s| s.parse().expect("prime bound"));
    let space = build_space(n).expect("prime level");
    println!("N = {n}, genus {}", space.genus());

    for p in primes_between(2, pmax) {
        let t = hecke_prime(&space, p).unwrap();
        println!("charpoly T_{p}: {}", poly(&t.charpoly()));
    }

    let mut cache = HeckeCache::new(&space);
    let t2 = cache.hecke_n(2).unwrap().clone();
    let t3 = cache.hecke_n(3).unwrap().clone();
    println!("T_2 T_3 = T_3 T_2: {}", t2.commutes_with(&t3));
    let un = cache.hecke_n(n).unwrap();
    println!("U_N^2 = 1: {}", un.matrix.mul(&un.matrix).is_identity());
}
