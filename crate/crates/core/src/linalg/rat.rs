//! Exact rational matrices and vectors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::int::IntMatrix;

#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigRational>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        RatMatrix { rows: n, cols, data }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        let data = (0..m.nrows())
            .flat_map(|i| m.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect::<Vec<_>>())
            .collect();
        RatMatrix { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMatrix::zeros(self.rows, other.cols);
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

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &BigRational) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// Least common multiple of all entry denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// `(num, den)` with `self = num / den` and `num` integral.
    pub fn clear_denominators(&self) -> (IntMatrix, BigInt) {
        let den = self.denominator_lcm();
        let mut num = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                num.set(i, j, x.numer() * (&den / x.denom()));
            }
        }
        (num, den)
    }

    /// Characteristic polynomial `det(xI - M)`, coefficients from the
    /// constant term up, computed by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> Vec<BigRational> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut aux = RatMatrix::zeros(n, n);
        for k in 1..=n {
            // aux_k = M * aux_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&aux);
            for i in 0..n {
                let v = next.get(i, i) + &coeffs[n - k + 1];
                next.set(i, i, v);
            }
            aux = next;
            let c = -self.mul(&aux).trace() / BigRational::from_integer(BigInt::from(k));
            coeffs[n - k] = c;
        }
        coeffs
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i).iter().map(ToString::to_string).collect::<Vec<_>>())).finish()
    }
}

/// Rational vector held as an integer numerator over one positive
/// denominator, kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QVec {
    num: Vec<BigInt>,
    den: BigInt,
}

impl QVec {
    pub fn zeros(len: usize) -> Self {
        QVec { num: vec![BigInt::zero(); len], den: BigInt::one() }
    }

    pub fn new(num: Vec<BigInt>, den: BigInt) -> Self {
        assert!(!den.is_zero());
        let mut v = QVec { num, den };
        v.normalize();
        v
    }

    pub fn from_ints(num: Vec<BigInt>) -> Self {
        QVec { num, den: BigInt::one() }
    }

    pub fn from_rationals(xs: &[BigRational]) -> Self {
        let den = xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num = xs.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        QVec::new(num, den)
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            self.num.iter_mut().for_each(|x| *x = -&*x);
        }
        let g = self.num.iter().fold(self.den.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() && !g.is_zero() {
            self.num.iter_mut().for_each(|x| *x /= &g);
            self.den /= &g;
        }
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn numer(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn get(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// `self - s * other`
    pub fn sub_scaled(&self, s: &BigInt, other: &QVec) -> QVec {
        let den = self.den.lcm(&other.den);
        let a = &den / &self.den;
        let b = &den / &other.den * s;
        let num = self.num.iter().zip(&other.num).map(|(x, y)| x * &a - y * &b).collect();
        QVec::new(num, den)
    }

    /// Row vector times matrix: `self * m`.
    pub fn mul_mat(&self, m: &ScaledMatrix) -> QVec {
        assert_eq!(self.len(), m.num.nrows());
        let mut out = vec![BigInt::zero(); m.num.ncols()];
        for (k, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, y) in out.iter_mut().zip(m.num.row(k)) {
                if !y.is_zero() {
                    *o += x * y;
                }
            }
        }
        QVec::new(out, &self.den * &m.den)
    }
}

/// Rational matrix stored as an integer matrix over a common positive
/// denominator; the fast path for repeated vector products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledMatrix {
    pub num: IntMatrix,
    pub den: BigInt,
}

impl ScaledMatrix {
    pub fn from_rat(m: &RatMatrix) -> Self {
        let (num, den) = m.clear_denominators();
        ScaledMatrix { num, den }
    }

    pub fn to_rat(&self) -> RatMatrix {
        let mut r = RatMatrix::zeros(self.num.nrows(), self.num.ncols());
        for i in 0..self.num.nrows() {
            for j in 0..self.num.ncols() {
                r.set(i, j, BigRational::new(self.num.get(i, j).clone(), self.den.clone()));
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn entries_in_lowest_terms() {
        let m = RatMatrix::from_rows(2, vec![vec![q(2, 4), q(-3, -6)], vec![q(4, -8), q(0, 5)]]);
        for i in 0..2 {
            for j in 0..2 {
                let x = m.get(i, j);
                assert!(x.denom().is_positive());
                assert!(x.numer().gcd(x.denom()).is_one());
            }
        }
    }

    #[test]
    fn charpoly_small() {
        // [[2,1],[1,2]] -> x^2 - 4x + 3
        let m = RatMatrix::from_rows(2, vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(2, 1)]]);
        assert_eq!(m.charpoly(), vec![q(3, 1), q(-4, 1), q(1, 1)]);
        assert_eq!(RatMatrix::zeros(0, 0).charpoly(), vec![q(1, 1)]);
    }

    #[test]
    fn qvec_products() {
        let m = ScaledMatrix::from_rat(&RatMatrix::from_rows(2, vec![vec![q(1, 2), q(0, 1)], vec![q(1, 3), q(1, 1)]]));
        assert_eq!(m.den, BigInt::from(6));
        let v = QVec::from_rationals(&[q(2, 1), q(3, 1)]);
        let w = v.mul_mat(&m);
        assert_eq!(w.to_rationals(), vec![q(2, 1), q(3, 1)]);
        let z = w.sub_scaled(&BigInt::from(1), &v);
        assert!(z.is_zero());
    }
}
