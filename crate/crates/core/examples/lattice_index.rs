//! Hermite and Smith normal forms, and the index of one row lattice in another.

use hecke_anemic::linalg::{hnf, lattice_quotient, snf_divisors, IntMatrix};

fn main() {
    let m = IntMatrix::from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    println!("M =\n{m:?}");
    println!("HNF(M) =\n{:?}", hnf(&m));
    let d: Vec<String> = snf_divisors(&m).iter().map(|x| x.to_string()).collect();
    println!("elementary divisors: {}", d.join(" "));

    // ℤ³ ⊃ span(M): the quotient has the same divisors.
    let q = lattice_quotient(&IntMatrix::identity(3), &m).expect("sublattice");
    println!("[Z^3 : span M] = {:?}", q.index);

    // An index-4 sublattice of ℤ² with quotient ℤ/2 × ℤ/2.
    let sub = IntMatrix::from_i64(&[vec![2, 0], vec![2, 2]]);
    let q = lattice_quotient(&IntMatrix::identity(2), &sub).unwrap();
    println!("[Z^2 : <(2,0),(2,2)>] = {:?}, divisors {:?}", q.index, q.divisors);
}
