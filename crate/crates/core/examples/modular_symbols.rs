//! Manin symbols, boundary map and continued-fraction path conversion.
//!
//!     cargo run --example modular_symbols -- 37

use hecke_anemic::manin::{boundary_map, build_space, genus_x0, p1_list, path_to_symbols, Point};

fn main() {
    let n: u64 = std::env::args().nth(1).map_or(11, |s| s.parse().expect("level"));
    let space = build_space(n).expect("prime level");
    println!("N = {n}: |P^1| = {}, genus {}", p1_list(n).len(), genus_x0(n));
    println!("full dim {}, cuspidal dim {}", space.full_dim(), space.cuspidal_dim());

    for s in p1_list(n).into_iter().take(4) {
        let b = boundary_map(s, n);
        println!("  ({}:{}) -> {}[0] + {}[oo]", s.c, s.d, b.zero, b.infinity);
    }

    let from = Point::Infinity;
    let to = Point::new(3, 7 * n as i64 + 1);
    let v = path_to_symbols(from, to, &space);
    let coords: Vec<String> = v.to_rationals().iter().map(|x| x.to_string()).collect();
    let Point::Rational(num, den) = to else { unreachable!() };
    println!("{{oo, {num}/{den}}} = [{}]", coords.join(", "));
    match space.to_cuspidal(&v) {
        Some(c) => println!("  cuspidal coordinates: {:?}", c.to_rationals().iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        None => println!("  not cuspidal"),
    }
}
