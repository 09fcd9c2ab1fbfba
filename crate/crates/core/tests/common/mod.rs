//! Independent brute-force oracles and property checks shared by the
//! integration test targets.
#![allow(dead_code)]

use hecke_anemic::hecke::{CoefficientEngine, HeckeCache};
use hecke_anemic::index::{compute_index, theta_kernel_dim, AnemicMode, AnemicRowSet};
use hecke_anemic::linalg::{hnf, lattice_index, snf_divisors, F2Matrix, IntMatrix, LatticeIndex};
use hecke_anemic::manin::{build_space, path_to_symbols, Point};
use hecke_anemic::Error;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

// ---------------------------------------------------------------- oracles

/// Coefficients `a_1..=a_len` of `q ∏ (1 − qⁿ)² (1 − q¹¹ⁿ)²`.
pub fn eta_11(len: usize) -> Vec<i64> {
    // series[k] is the coefficient of q^k in the product without the leading q.
    let mut series = vec![0i64; len];
    series[0] = 1;
    let mut times = |step: usize| {
        for _ in 0..2 {
            for k in (step..len).rev() {
                series[k] -= series[k - step];
            }
        }
    };
    for n in 1..len {
        times(n);
        if 11 * n < len {
            times(11 * n);
        }
    }
    series
}

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0i64;
    for j in 0..n {
        let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * det_cofactor(&minor);
    }
    total
}

/// Every `x ∈ GF(2)^cols` with `m x = 0`, by enumeration.
pub fn f2_kernel_brute(m: &[Vec<u8>], cols: usize) -> Vec<Vec<bool>> {
    (0u32..1 << cols)
        .map(|mask| (0..cols).map(|j| mask >> j & 1 == 1).collect::<Vec<bool>>())
        .filter(|x| m.iter().all(|row| row.iter().zip(x).filter(|(a, b)| **a == 1 && **b).count() % 2 == 0))
        .collect()
}

/// Solves `x·H = v` for an upper triangular HNF `H` by back substitution.
pub fn in_triangular_span(h: &IntMatrix, v: &[BigInt]) -> bool {
    let mut r = v.to_vec();
    for i in 0..h.nrows() {
        let row = h.row(i);
        let Some(p) = row.iter().position(|x| !x.is_zero()) else { continue };
        if r[..p].iter().any(|x| !x.is_zero()) {
            return false;
        }
        if (&r[p] % &row[p]) != BigInt::zero() {
            return false;
        }
        let q = &r[p] / &row[p];
        for (a, b) in r.iter_mut().zip(row) {
            *a -= &q * b;
        }
    }
    r.iter().all(|x| x.is_zero())
}

pub fn to_int(m: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_i64(m)
}

// ------------------------------------------------------------- strategies

pub fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

pub fn square_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-7i64..=7, n), n))
}

pub fn f2_matrix() -> impl Strategy<Value = (Vec<Vec<u8>>, usize)> {
    (1usize..=6, 1usize..=10).prop_flat_map(|(r, c)| (prop::collection::vec(prop::collection::vec(0u8..=1, c), r), Just(c)))
}

pub fn small_level() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![11u64, 23, 29, 37, 43])
}

pub fn point() -> impl Strategy<Value = Point> {
    prop_oneof![1 => Just(Point::Infinity), 6 => (-40i64..=40, 1i64..=40).prop_map(|(a, b)| Point::new(a, b))]
}

// --------------------------------------------------------------- properties

/// HNF spans the same lattice as its input and is in canonical shape.
pub fn prop_hnf_span(m: Vec<Vec<i64>>) -> Result<(), TestCaseError> {
    let a = to_int(&m);
    let h = hnf(&a);
    for i in 0..a.nrows() {
        prop_assert!(in_triangular_span(&h, a.row(i)), "input row {} not in HNF span", i);
    }
    let mut last_pivot = None;
    for i in 0..h.nrows() {
        let row = h.row(i);
        let p = row.iter().position(|x| !x.is_zero());
        prop_assert!(p.is_some(), "zero row in HNF");
        let p = p.unwrap();
        prop_assert!(last_pivot.is_none_or(|q| p > q));
        prop_assert!(row[p].is_positive());
        for k in 0..i {
            let above = h.get(k, p);
            prop_assert!(!above.is_negative() && above < &row[p], "entry above pivot not reduced");
        }
        last_pivot = Some(p);
    }
    // Each HNF row is an integer combination of the inputs: compare
    // determinants when the input is square and nonsingular.
    if m.len() == m[0].len() {
        let d = det_cofactor(&m);
        if d != 0 {
            let prod: BigInt = (0..h.nrows()).map(|i| h.get(i, i).clone()).product();
            prop_assert_eq!(prod, BigInt::from(d.abs()));
        }
    }
    Ok(())
}

/// `∏ SNF divisors = |det|` and `[ℤⁿ : span M] = |det|` on square matrices.
pub fn prop_snf_det(m: Vec<Vec<i64>>) -> Result<(), TestCaseError> {
    let a = to_int(&m);
    let d = det_cofactor(&m).abs();
    let divs = snf_divisors(&a);
    let prod: BigInt = divs.iter().product();
    prop_assert_eq!(&prod, &BigInt::from(d));
    for w in divs.windows(2) {
        if !w[0].is_zero() {
            prop_assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken: {:?}", divs);
        }
    }
    let idx = lattice_index(&IntMatrix::identity(m.len()), &a).unwrap();
    if d == 0 {
        prop_assert_eq!(idx, LatticeIndex::Infinite);
    } else {
        prop_assert_eq!(idx, LatticeIndex::Finite(BigInt::from(d)));
    }
    Ok(())
}

/// Nullspace basis has the brute-force kernel size and lies in the kernel.
pub fn prop_f2_nullspace((m, cols): (Vec<Vec<u8>>, usize)) -> Result<(), TestCaseError> {
    let f = F2Matrix::from_u8(cols, &m);
    let k = f.nullspace();
    let brute = f2_kernel_brute(&m, cols);
    prop_assert_eq!(brute.len(), 1usize << k.nrows());
    prop_assert_eq!(f.rank() + k.nrows(), cols);
    for i in 0..k.nrows() {
        prop_assert!(brute.contains(&k.row_bits(i)));
    }
    Ok(())
}

/// `{α, β} + {β, γ} = {α, γ}` in the modular symbol space.
pub fn prop_path_additivity((n, a, b, c): (u64, Point, Point, Point)) -> Result<(), TestCaseError> {
    let space = build_space(n).unwrap();
    let ab = path_to_symbols(a, b, &space).to_rationals();
    let bc = path_to_symbols(b, c, &space).to_rationals();
    let ac = path_to_symbols(a, c, &space).to_rationals();
    let sum: Vec<_> = ab.iter().zip(&bc).map(|(x, y)| x + y).collect();
    prop_assert_eq!(sum, ac);
    Ok(())
}

/// `T_m T_n = T_n T_m`, and `T_m T_n = T_{mn}` for coprime `m, n`.
pub fn prop_hecke_commute((n, m, k): (u64, u64, u64)) -> Result<(), TestCaseError> {
    let space = build_space(n).unwrap();
    let mut cache = HeckeCache::new(&space);
    let tm = cache.hecke_n(m).unwrap().clone();
    let tk = cache.hecke_n(k).unwrap().clone();
    prop_assert!(tm.commutes_with(&tk));
    if num_integer::gcd(m, k) == 1 {
        let tmk = cache.hecke_n(m * k).unwrap();
        prop_assert_eq!(&tm.matrix.mul(&tk.matrix), &tmk.matrix);
    }
    Ok(())
}

/// Raising the bound never increases the index or the θ-kernel dimension.
pub fn prop_monotone((n, extra): (u64, usize)) -> Result<(), TestCaseError> {
    let space = build_space(n).unwrap();
    let mut engine = CoefficientEngine::new(&space);
    let sturm = hecke_anemic::hecke::sturm_bound(n);
    let mut prev: Option<(Option<BigInt>, usize)> = None;
    for b in [sturm, sturm + extra, 2 * sturm + extra, 4 * sturm + 2 * extra] {
        let a = engine.coefficients(b).unwrap();
        let rows = AnemicRowSet::new(AnemicMode::Extended, n, b);
        let idx = match compute_index(&a, &rows) {
            Ok(r) => Some(r.index),
            Err(Error::BoundTooSmall { .. }) => None,
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let c = theta_kernel_dim(&a, &rows);
        if let Some((pi, pc)) = &prev {
            prop_assert!(c <= *pc, "theta dim grew at bound {}", b);
            if let (Some(p), Some(i)) = (pi, &idx) {
                prop_assert!((p % i).is_zero(), "index {} does not divide {} at bound {}", i, p, b);
            }
            prop_assert!(!(pi.is_some() && idx.is_none()));
        }
        prev = Some((idx, c));
    }
    Ok(())
}

pub fn hecke_triples() -> impl Strategy<Value = (u64, u64, u64)> {
    (small_level(), 1u64..=12, 1u64..=12)
}

pub fn monotone_cases() -> impl Strategy<Value = (u64, usize)> {
    (prop::sample::select(vec![11u64, 23, 31, 47, 53, 71, 79, 97]), 0usize..=7)
}

pub fn path_cases() -> impl Strategy<Value = (u64, Point, Point, Point)> {
    (small_level(), point(), point(), point())
}
