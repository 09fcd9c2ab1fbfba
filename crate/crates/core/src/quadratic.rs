//! Class numbers of imaginary quadratic fields by counting reduced forms.

use serde::{Deserialize, Serialize};

use crate::arith::{gcd_i64, is_prime};
use crate::error::{Error, Result};

/// Binary quadratic form `ax² + bxy + cy²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd_i64(gcd_i64(self.a, self.b), self.c) == 1
    }

    /// `|b| ≤ a ≤ c`, with `b ≥ 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        a > 0 && b.abs() <= a && a <= c && !(b < 0 && (b.abs() == a || a == c))
    }

    /// Reduces a positive definite form to the reduced form in its class.
    pub fn reduce(&self) -> QuadForm {
        assert!(self.discriminant() < 0 && self.a > 0, "reduce needs a positive definite form");
        let QuadForm { mut a, mut b, mut c } = *self;
        loop {
            // Translate so that -a < b <= a.
            if b > a || b <= -a {
                let k = (a - b).div_euclid(2 * a);
                c += k * (a * k + b);
                b += 2 * a * k;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            return QuadForm { a, b, c };
        }
    }
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// All primitive reduced forms of discriminant `d < 0`, sorted.
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidDiscriminant(d));
    }
    let mut out = Vec::new();
    let mut a = 1i64;
    // 3a² ≤ |D| for reduced forms.
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadForm::new(a, b, num / (4 * a));
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    Ok(out)
}

/// `h(D)` for a negative fundamental discriminant.
pub fn class_number_imag(d: i64) -> Result<u64> {
    if d >= 0 || !is_fundamental_discriminant(d) {
        return Err(Error::InvalidDiscriminant(d));
    }
    Ok(reduced_forms(d)?.len() as u64)
}

/// Whether `[𝕋 : 𝕋^an] > 1` is predicted for prime `N ≡ 3 mod 4`, namely
/// `h(−N) > 1`.
pub fn predict_index_nontrivial(n: u64) -> Result<bool> {
    if !is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    if n % 4 != 3 {
        return Err(Error::WrongResidueClass(n));
    }
    Ok(class_number_imag(-(n as i64))? > 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_numbers() {
        assert_eq!(class_number_imag(-3).unwrap(), 1);
        assert_eq!(class_number_imag(-4).unwrap(), 1);
        assert_eq!(class_number_imag(-23).unwrap(), 3);
        assert_eq!(class_number_imag(-163).unwrap(), 1);
        assert_eq!(class_number_imag(-20).unwrap(), 2);
        assert_eq!(
            reduced_forms(-23).unwrap(),
            vec![QuadForm::new(1, 1, 6), QuadForm::new(2, -1, 3), QuadForm::new(2, 1, 3)]
        );
    }

    #[test]
    fn bad_discriminants() {
        for d in [5, -1, -2, -12, -8 * 9] {
            assert_eq!(class_number_imag(d), Err(Error::InvalidDiscriminant(d)));
        }
    }

    #[test]
    fn predictions() {
        assert!(!predict_index_nontrivial(11).unwrap());
        assert!(predict_index_nontrivial(23).unwrap());
        assert!(!predict_index_nontrivial(163).unwrap());
        assert_eq!(predict_index_nontrivial(13), Err(Error::WrongResidueClass(13)));
        assert_eq!(predict_index_nontrivial(15), Err(Error::NotPrime(15)));
    }

    #[test]
    fn reduce_is_idempotent_on_reduced() {
        for f in reduced_forms(-971).unwrap() {
            assert_eq!(f.reduce(), f);
        }
        let f = QuadForm::new(6, 11, 6).reduce();
        assert!(f.is_reduced());
        assert_eq!(f.discriminant(), 121 - 144);
    }
}
