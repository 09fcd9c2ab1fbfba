//! Integer matrices and row lattices: Hermite and Smith normal forms,
//! lattice membership and index.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from rows that must all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        IntMatrix { rows: n, cols, data }
    }

    /// Convenience constructor; the column count is taken from the first row.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(
            cols,
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: &[BigInt]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(0, self.cols);
        for &i in idx {
            m.push_row(self.row(i));
        }
        m
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i).iter().map(ToString::to_string).collect::<Vec<_>>())).finish()
    }
}

fn first_nonzero(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    // dst -= q * src
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

/// Row echelon basis of a lattice built by incremental insertion, kept in
/// Hermite normal form. Optionally tracks each basis row as an integer
/// combination of the inserted rows.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    combos: Option<Vec<Vec<BigInt>>>,
    n_inputs: usize,
}

impl Echelon {
    pub(crate) fn new(cols: usize) -> Self {
        Echelon { cols, rows: Vec::new(), pivots: Vec::new(), combos: None, n_inputs: 0 }
    }

    pub(crate) fn tracking(cols: usize, n_inputs: usize) -> Self {
        Echelon { cols, rows: Vec::new(), pivots: Vec::new(), combos: Some(Vec::new()), n_inputs }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts `v`, which is input row number `input` when tracking.
    /// Returns true when the basis changed.
    pub(crate) fn insert(&mut self, v: &[BigInt], input: usize) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        let mut comb = self.combos.as_ref().map(|_| {
            let mut e = vec![BigInt::zero(); self.n_inputs];
            e[input] = BigInt::one();
            e
        });
        let mut changed = false;
        loop {
            let Some(c) = first_nonzero(&v) else { break };
            match self.pivots.binary_search(&c) {
                Ok(i) => {
                    let a = self.rows[i][c].clone();
                    let b = v[c].clone();
                    if b.is_multiple_of(&a) {
                        let q = &b / &a;
                        axpy(&mut v, &q, &self.rows[i]);
                        if let (Some(cv), Some(cs)) = (comb.as_mut(), self.combos.as_ref()) {
                            axpy(cv, &q, &cs[i]);
                        }
                        continue;
                    }
                    let ext = a.extended_gcd(&b);
                    let (mut g, mut x, mut y) = (ext.gcd, ext.x, ext.y);
                    if g.is_negative() {
                        g = -g;
                        x = -x;
                        y = -y;
                    }
                    let (ag, bg) = (&a / &g, &b / &g);
                    let h = &self.rows[i];
                    let new_h: Vec<BigInt> = h.iter().zip(&v).map(|(hh, vv)| &x * hh + &y * vv).collect();
                    let new_v: Vec<BigInt> = h.iter().zip(&v).map(|(hh, vv)| &ag * vv - &bg * hh).collect();
                    if let (Some(cv), Some(cs)) = (comb.as_mut(), self.combos.as_mut()) {
                        let hc = &cs[i];
                        let new_hc: Vec<BigInt> = hc.iter().zip(cv.iter()).map(|(hh, vv)| &x * hh + &y * vv).collect();
                        let new_vc: Vec<BigInt> = hc.iter().zip(cv.iter()).map(|(hh, vv)| &ag * vv - &bg * hh).collect();
                        cs[i] = new_hc;
                        *cv = new_vc;
                    }
                    self.rows[i] = new_h;
                    v = new_v;
                    changed = true;
                }
                Err(pos) => {
                    if v[c].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                        if let Some(cv) = comb.as_mut() {
                            cv.iter_mut().for_each(|x| *x = -&*x);
                        }
                    }
                    self.rows.insert(pos, v);
                    self.pivots.insert(pos, c);
                    if let (Some(cs), Some(cv)) = (self.combos.as_mut(), comb) {
                        cs.insert(pos, cv);
                    }
                    changed = true;
                    break;
                }
            }
        }
        if changed {
            self.reduce();
        }
        changed
    }

    /// Reduces entries above every pivot into `[0, pivot)`.
    fn reduce(&mut self) {
        for k in 0..self.rows.len() {
            let p = self.pivots[k];
            let (upper, lower) = self.rows.split_at_mut(k);
            let pk = &lower[0];
            let piv = &pk[p];
            for (i, row) in upper.iter_mut().enumerate() {
                let q = row[p].div_floor(piv);
                if !q.is_zero() {
                    axpy(row, &q, pk);
                    if let Some(cs) = self.combos.as_mut() {
                        let (cu, cl) = cs.split_at_mut(k);
                        axpy(&mut cu[i], &q, &cl[0]);
                    }
                }
            }
        }
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the lattice.
    pub(crate) fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rest = v.to_vec();
        let mut coords = vec![BigInt::zero(); self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let p = self.pivots[i];
            if rest[..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                axpy(&mut rest, &q, row);
            }
            coords[i] = q;
        }
        if rest.iter().all(Zero::is_zero) {
            Some(coords)
        } else {
            None
        }
    }

    /// Expresses `v` as an integer combination of the inserted rows.
    pub(crate) fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let coords = self.coordinates(v)?;
        let combos = self.combos.as_ref().expect("echelon built without tracking");
        let mut x = vec![BigInt::zero(); self.n_inputs];
        for (q, comb) in coords.iter().zip(combos) {
            if q.is_zero() {
                continue;
            }
            for (xi, ci) in x.iter_mut().zip(comb) {
                if !ci.is_zero() {
                    *xi += q * ci;
                }
            }
        }
        Some(x)
    }

    pub(crate) fn to_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.cols, self.rows.clone())
    }
}

fn echelon_of(m: &IntMatrix) -> Echelon {
    let mut e = Echelon::new(m.ncols());
    for i in 0..m.nrows() {
        e.insert(m.row(i), i);
    }
    e
}

/// Row-style Hermite normal form: same row span, zero rows removed,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    echelon_of(m).to_matrix()
}

/// Rank over the rationals (equivalently, of the row lattice).
pub fn rank(m: &IntMatrix) -> usize {
    echelon_of(m).rank()
}

/// Elementary divisors `d1 | d2 | ...` of `m`, `min(rows, cols)` of them,
/// zeros last.
pub fn snf_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let h = hnf(m);
    let mut divisors = smith_diagonal(h.row_vecs(), h.ncols());
    divisors.resize(m.nrows().min(m.ncols()), BigInt::zero());
    divisors
}

/// Smith diagonal of a full-row-rank matrix given as rows.
fn smith_diagonal(mut a: Vec<Vec<BigInt>>, cols: usize) -> Vec<BigInt> {
    let r = a.len();
    let mut diag = Vec::with_capacity(r);
    for t in 0..r.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                diag.resize(r.min(cols), BigInt::zero());
                return diag;
            };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..r {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                let (top, bottom) = a.split_at_mut(i);
                axpy(&mut bottom[0], &q, &top[t]);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                for row in a.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let piv = a[t][t].clone();
            let bad = (t + 1..r).find(|&i| a[i][t + 1..].iter().any(|x| !x.is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    let (top, bottom) = a.split_at_mut(i);
                    for (d, s) in top[t].iter_mut().zip(&bottom[0]) {
                        *d += s;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

/// Index of one row lattice inside another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

/// Index together with the elementary divisors of the quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub index: LatticeIndex,
    /// One divisor per basis vector of `sup` (zeros mark a rank drop).
    pub divisors: Vec<BigInt>,
}

/// `[span(sup) : span(sub)]` together with the elementary divisors of
/// `span(sup) / span(sub)`.
pub fn lattice_quotient(sup: &IntMatrix, sub: &IntMatrix) -> Result<Quotient> {
    assert_eq!(sup.ncols(), sub.ncols());
    let basis = echelon_of(sup);
    let r = basis.rank();
    let mut coords = IntMatrix::zeros(0, r);
    for i in 0..sub.nrows() {
        let c = basis.coordinates(sub.row(i)).ok_or(Error::NotASublattice)?;
        coords.push_row(&c);
    }
    let h = hnf(&coords);
    let mut divisors = smith_diagonal(h.row_vecs(), r);
    divisors.resize(r, BigInt::zero());
    let index = if h.nrows() < r {
        LatticeIndex::Infinite
    } else {
        LatticeIndex::Finite(divisors.iter().product())
    };
    Ok(Quotient { index, divisors })
}

pub fn lattice_index(sup: &IntMatrix, sub: &IntMatrix) -> Result<LatticeIndex> {
    lattice_quotient(sup, sub).map(|q| q.index)
}

/// Finds an integer `x` with `x * rows = target`, if one exists.
pub fn solve_integer(rows: &IntMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(rows.ncols(), target.len());
    let mut e = Echelon::tracking(rows.ncols(), rows.nrows());
    for i in 0..rows.nrows() {
        e.insert(rows.row(i), i);
    }
    e.solve(target)
}

/// True when every row of `sub` lies in the row lattice of `sup`.
pub fn contains_rows(sup: &IntMatrix, sub: &IntMatrix) -> bool {
    let basis = echelon_of(sup);
    (0..sub.nrows()).all(|i| basis.coordinates(sub.row(i)).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(hnf(&m(&[vec![2, 0], vec![0, 2]])), m(&[vec![2, 0], vec![0, 2]]));
        assert_eq!(hnf(&m(&[vec![1, 2], vec![3, 4]])), m(&[vec![1, 0], vec![0, 2]]));
        assert_eq!(hnf(&m(&[vec![0, 0]])).nrows(), 0);
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let h = hnf(&m(&[vec![3, 7, 1], vec![0, 5, 4], vec![6, 1, 1]]));
        for (k, row) in h.row_vecs().iter().enumerate() {
            let p = row.iter().position(|x| !x.is_zero()).unwrap();
            assert!(row[p] > BigInt::zero());
            for i in 0..k {
                assert!(h.get(i, p) >= &BigInt::zero() && h.get(i, p) < &row[p]);
            }
        }
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf_divisors(&m(&[vec![2, 0], vec![0, 2]])), ints(&[2, 2]));
        assert_eq!(snf_divisors(&m(&[vec![1, 2], vec![3, 4]])), ints(&[1, 2]));
        assert_eq!(snf_divisors(&m(&[vec![0]])), ints(&[0]));
        assert_eq!(snf_divisors(&m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]])), ints(&[2, 6, 12]));
    }

    #[test]
    fn index_examples() {
        let id = m(&[vec![1, 0], vec![0, 1]]);
        let big = BigInt::from;
        assert_eq!(lattice_index(&id, &m(&[vec![2, 0], vec![0, 2]])).unwrap(), LatticeIndex::Finite(big(4)));
        assert_eq!(lattice_index(&id, &m(&[vec![1, 0]])).unwrap(), LatticeIndex::Infinite);
        assert_eq!(
            lattice_index(&m(&[vec![1, 2], vec![3, 4]]), &m(&[vec![2, 4], vec![6, 8]])).unwrap(),
            LatticeIndex::Finite(big(4))
        );
        assert_eq!(lattice_index(&m(&[vec![2, 0]]), &m(&[vec![1, 0]])), Err(Error::NotASublattice));
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_integer(&m(&[vec![1, 0], vec![0, 1]]), &ints(&[5, -3])), Some(ints(&[5, -3])));
        assert_eq!(solve_integer(&m(&[vec![2, 0]]), &ints(&[1, 0])), None);
        assert_eq!(solve_integer(&m(&[vec![1, 1], vec![0, 2]]), &ints(&[1, 3])), Some(ints(&[1, 1])));
    }

    #[test]
    fn solve_with_dependent_rows() {
        let rows = m(&[vec![4, 6], vec![6, 9], vec![2, 3], vec![0, 5]]);
        let target = ints(&[2, 8]);
        let x = solve_integer(&rows, &target).unwrap();
        let mut acc = vec![BigInt::zero(); 2];
        for (i, xi) in x.iter().enumerate() {
            for j in 0..2 {
                acc[j] += xi * rows.get(i, j);
            }
        }
        assert_eq!(acc, target);
    }
}
