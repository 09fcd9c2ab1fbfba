//! Rank and nullspace over GF(2) with bit-packed rows.

use hecke_anemic::linalg::F2Matrix;

fn show(m: &F2Matrix) {
    for i in 0..m.nrows() {
        let row: String = m.row_bits(i).iter().map(|&b| if b { '1' } else { '0' }).collect();
        println!("  {row}");
    }
}

fn main() {
    let m = F2Matrix::from_u8(5, &[vec![1, 1, 0, 0, 1], vec![0, 1, 1, 0, 0], vec![1, 0, 1, 0, 1]]);
    println!("M (rank {}):", m.rank());
    show(&m);
    let k = m.nullspace();
    println!("nullspace basis ({} vectors):", k.nrows());
    show(&k);
    for i in 0..k.nrows() {
        assert!(m.mul_vec(&k.row_bits(i)).iter().all(|&b| !b));
    }
}
