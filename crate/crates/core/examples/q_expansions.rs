//! Integral q-expansion basis of S_2(Γ0(N)) from the Hecke algebra.
//!
//!     cargo run --example q_expansions -- 23 20

use hecke_anemic::hecke::{coefficient_matrix, sturm_bound};
use hecke_anemic::manin::build_space;

fn main() {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().map_or(23, |s| s.parse().expect("level"));
    let space = build_space(n).expect("prime level");
    let bound: usize = args.next().map_or(2 * sturm_bound(n), |s| s.parse().expect("bound"));
    let a = coefficient_matrix(&space, bound).expect("bound at least the Sturm bound");
    println!("N = {n}, genus {}, Sturm bound {}", a.genus(), a.sturm_bound());
    for j in 0..a.genus() {
        let col: Vec<String> = a.column(j).iter().map(|x| x.to_string()).collect();
        println!("f{} = [{}]", j + 1, col.join(", "));
    }
}
