//! The index `[𝕋 : 𝕋^an]` and the mod-2 θ-kernel, computed independently
//! and cross-checked.
//!
//! In coefficient coordinates (see [`crate::hecke`]) the rows `1..=b` span
//! ℤ^g = 𝕋 and the anemic rows span 𝕋^an. The index comes from the Smith
//! form of the anemic rows. Separately, the θ-kernel is the space of mod-2
//! forms `Σ v_j f_j` whose anemic coefficients vanish, i.e. the right
//! kernel of the anemic rows reduced mod 2. The quotient is an elementary
//! abelian 2-group exactly when `index = 2^dim(θ-kernel)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::{sturm_bound, CoefficientEngine, CoefficientMatrix};
use crate::linalg::{lattice_quotient, rank, solve_integer, F2Matrix, IntMatrix, LatticeIndex};
use crate::manin::build_space;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnemicMode {
    /// `gcd(n, 2N) = 1`.
    Strict,
    /// All odd `n`, which adds `U_N` and its multiples.
    #[default]
    Extended,
}

/// Indices `n ≤ B` of the rows generating the anemic lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnemicRowSet {
    pub mode: AnemicMode,
    pub level: u64,
    pub bound: usize,
    rows: Vec<usize>,
}

impl AnemicRowSet {
    pub fn new(mode: AnemicMode, level: u64, bound: usize) -> Self {
        let rows = (1..=bound)
            .filter(|&n| n % 2 == 1 && (mode == AnemicMode::Extended || !(n as u64).is_multiple_of(level)))
            .collect();
        AnemicRowSet { mode, level, bound, rows }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn contains(&self, n: usize) -> bool {
        self.rows.binary_search(&n).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexResult {
    pub index: BigInt,
    /// Elementary divisors of `𝕋/𝕋^an`, one per basis vector of 𝕋.
    pub divisors: Vec<BigInt>,
}

fn check_rows(a: &CoefficientMatrix, rows: &AnemicRowSet) {
    assert!(rows.bound <= a.bound(), "anemic rows exceed the coefficient bound");
    assert_eq!(rows.level, a.level());
}

fn full_rows(a: &CoefficientMatrix) -> IntMatrix {
    a.select(&(1..=a.sturm_bound().min(a.bound())).collect::<Vec<_>>())
}

/// `[𝕋 : 𝕋^an]` with the elementary divisors of the quotient.
pub fn compute_index(a: &CoefficientMatrix, rows: &AnemicRowSet) -> Result<IndexResult> {
    check_rows(a, rows);
    let sub = a.select(rows.rows());
    let q = lattice_quotient(&full_rows(a), &sub)?;
    match q.index {
        LatticeIndex::Finite(index) => Ok(IndexResult { index, divisors: q.divisors }),
        LatticeIndex::Infinite => Err(Error::BoundTooSmall { bound: rows.bound, rank: rank(&sub), genus: a.genus() }),
    }
}

fn anemic_mod2(a: &CoefficientMatrix, rows: &AnemicRowSet) -> F2Matrix {
    let two = BigInt::from(2);
    let mut m = F2Matrix::zeros(0, a.genus());
    for &n in rows.rows() {
        let bits: Vec<bool> = a.row(n).iter().map(|x| !x.mod_floor(&two).is_zero()).collect();
        m.push_row(&bits);
    }
    m
}

/// θ-kernel as rows of coefficient vectors over GF(2) in the basis `f_j`.
pub fn theta_kernel(a: &CoefficientMatrix, rows: &AnemicRowSet) -> F2Matrix {
    check_rows(a, rows);
    anemic_mod2(a, rows).nullspace()
}

pub fn theta_kernel_dim(a: &CoefficientMatrix, rows: &AnemicRowSet) -> usize {
    theta_kernel(a, rows).nrows()
}

/// A mod-2 q-expansion prefix; `coeffs[n - 1]` is `a_n mod 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mod2Expansion {
    pub coeffs: Vec<bool>,
}

impl Mod2Expansion {
    pub fn coefficient(&self, n: usize) -> bool {
        self.coeffs[n - 1]
    }

    /// Exponents with odd coefficient.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.coeffs.len()).filter(|&n| self.coefficient(n)).collect()
    }

    pub fn truncated(&self, len: usize) -> Mod2Expansion {
        Mod2Expansion { coeffs: self.coeffs[..len].to_vec() }
    }
}

impl std::fmt::Display for Mod2Expansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self.support().into_iter().map(|n| if n == 1 { "q".to_string() } else { format!("q^{n}") }).collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// q-expansion prefixes (mod 2, through `q^B`) of a basis of the θ-kernel.
pub fn theta_kernel_basis(a: &CoefficientMatrix, rows: &AnemicRowSet) -> Vec<Mod2Expansion> {
    let kernel = theta_kernel(a, rows);
    let two = BigInt::from(2);
    let reduced: Vec<Vec<bool>> = (1..=a.bound()).map(|n| a.row(n).iter().map(|x| !x.mod_floor(&two).is_zero()).collect()).collect();
    (0..kernel.nrows())
        .map(|k| {
            let v = kernel.row_bits(k);
            let coeffs = reduced.iter().map(|row| row.iter().zip(&v).filter(|(x, y)| **x && **y).count() % 2 == 1).collect();
            Mod2Expansion { coeffs }
        })
        .collect()
}

/// One term `coeff · T_n` of an operator identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub n: usize,
    #[serde(with = "crate::json::int")]
    pub coeff: BigInt,
}

pub fn format_terms(terms: &[Term]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let neg = t.coeff.sign() == num_bigint::Sign::Minus;
        let mag = if neg { -&t.coeff } else { t.coeff.clone() };
        match (i, neg) {
            (0, true) => out.push('−'),
            (0, false) => {}
            (_, true) => out.push_str(" − "),
            (_, false) => out.push_str(" + "),
        }
        if mag.is_one() {
            out.push_str(&format!("T{}", t.n));
        } else {
            out.push_str(&format!("{mag}·T{}", t.n));
        }
    }
    out
}

/// True when `row(target) = Σ coeff·row(n)` holds exactly.
pub fn row_identity_holds(a: &CoefficientMatrix, target: usize, terms: &[Term]) -> bool {
    let mut acc = vec![BigInt::zero(); a.genus()];
    for t in terms {
        for (x, y) in acc.iter_mut().zip(a.row(t.n)) {
            *x += &t.coeff * y;
        }
    }
    acc == a.row(target)
}

fn express_row(a: &CoefficientMatrix, rows: &AnemicRowSet, target: usize) -> Option<Vec<Term>> {
    let sub = a.select(rows.rows());
    let x = solve_integer(&sub, a.row(target))?;
    Some(rows.rows().iter().zip(x).filter(|(_, c)| !c.is_zero()).map(|(&n, coeff)| Term { n, coeff }).collect())
}

/// Writes `T_2` as an integer combination of the anemic operators, if possible.
pub fn express_t2(a: &CoefficientMatrix, rows: &AnemicRowSet) -> Option<Vec<Term>> {
    check_rows(a, rows);
    express_row(a, rows, 2)
}

/// Whether `U_N` lies in the span of the strict anemic rows. `None` when
/// the bound is below `N`, so row `N` is unavailable.
pub fn un_membership(a: &CoefficientMatrix, rows: &AnemicRowSet) -> Option<bool> {
    let n = a.level() as usize;
    if a.bound() < n || rows.bound < n {
        return None;
    }
    let strict = AnemicRowSet::new(AnemicMode::Strict, a.level(), rows.bound);
    Some(express_row(a, &strict, n).is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub level: u64,
    pub sturm_bound: usize,
    pub genus: usize,
    pub bound_used: usize,
    #[serde(with = "crate::json::int")]
    pub index: BigInt,
    /// `log₂(index)` when the index is a power of two.
    pub two_rank: Option<u32>,
    #[serde(with = "crate::json::int_vec")]
    pub elementary_divisors: Vec<BigInt>,
    pub theta_kernel_dim: usize,
    pub weight1_dim: usize,
    pub un_in_anemic: Option<bool>,
    pub t2_expression: Option<Vec<Term>>,
    pub stabilized: bool,
    pub methods_agree: bool,
}

fn log2_exact(x: &BigInt) -> Option<u32> {
    if x.sign() != num_bigint::Sign::Plus {
        return None;
    }
    let bits = x.bits();
    let p = BigInt::one() << (bits - 1);
    if &p == x {
        (bits - 1).to_u32()
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReportOptions {
    /// Starting bound; defaults to four times the Sturm bound.
    pub initial_bound: Option<usize>,
    pub mode: AnemicMode,
}

/// Everything computed for one level.
#[derive(Clone, Debug)]
pub struct LevelAnalysis {
    pub report: IndexReport,
    pub coefficients: CoefficientMatrix,
    pub rows: AnemicRowSet,
    /// `(bound, index, θ-kernel dim)` at each step of the doubling.
    pub history: Vec<(usize, Option<BigInt>, usize)>,
}

impl LevelAnalysis {
    pub fn theta_kernel_basis(&self) -> Vec<Mod2Expansion> {
        theta_kernel_basis(&self.coefficients, &self.rows)
    }
}

type Snapshot = (Option<IndexResult>, usize);

fn snapshot(a: &CoefficientMatrix, rows: &AnemicRowSet) -> Result<Snapshot> {
    let index = match compute_index(a, rows) {
        Ok(r) => Some(r),
        Err(Error::BoundTooSmall { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok((index, theta_kernel_dim(a, rows)))
}

/// Computes the index and θ-kernel dimension, doubling the bound until both
/// are unchanged across one doubling.
pub fn analyze_level(n: u64, options: ReportOptions) -> Result<LevelAnalysis> {
    let space = build_space(n)?;
    let sturm = sturm_bound(n);
    let start = options.initial_bound.unwrap_or(4 * sturm);
    if start < sturm {
        return Err(Error::BelowSturmBound { bound: start, sturm });
    }
    let limit = (32 * sturm).max(2 * start);
    let mut engine = CoefficientEngine::new(&space);

    let mut bound = start;
    let mut a = engine.coefficients(bound)?;
    let mut rows = AnemicRowSet::new(options.mode, n, bound);
    let mut current = snapshot(&a, &rows)?;
    let mut history = vec![(bound, current.0.as_ref().map(|r| r.index.clone()), current.1)];
    loop {
        let next_bound = 2 * bound;
        if next_bound > limit {
            return Err(Error::NoStabilization { bound: next_bound, limit });
        }
        let next_a = engine.coefficients(next_bound)?;
        let next_rows = AnemicRowSet::new(options.mode, n, next_bound);
        let next = snapshot(&next_a, &next_rows)?;
        history.push((next_bound, next.0.as_ref().map(|r| r.index.clone()), next.1));
        let monotone = next.1 <= current.1
            && match (&current.0, &next.0) {
                (Some(c), Some(x)) => x.index <= c.index,
                (Some(_), None) => false,
                _ => true,
            };
        if !monotone {
            return Err(Error::Inconsistent(format!("level {n}: index or θ-kernel grew between bounds {bound} and {next_bound}")));
        }
        let same = next.1 == current.1 && current.0.as_ref().map(|r| &r.index) == next.0.as_ref().map(|r| &r.index);
        bound = next_bound;
        a = next_a;
        rows = next_rows;
        current = next;
        if same && current.0.is_some() {
            break;
        }
    }

    let (index_result, c_kernel) = current;
    let IndexResult { index, divisors } = index_result.expect("stable index");
    let two_rank = log2_exact(&index);
    let only_ones_and_twos = divisors.iter().all(|d| d.is_one() || *d == BigInt::from(2));
    let methods_agree = only_ones_and_twos && two_rank == Some(c_kernel as u32);
    let report = IndexReport {
        level: n,
        sturm_bound: sturm,
        genus: space.genus(),
        bound_used: bound,
        index,
        two_rank,
        elementary_divisors: divisors,
        theta_kernel_dim: c_kernel,
        weight1_dim: c_kernel,
        un_in_anemic: un_membership(&a, &rows),
        t2_expression: express_t2(&a, &rows),
        stabilized: true,
        methods_agree,
    };
    Ok(LevelAnalysis { report, coefficients: a, rows, history })
}

pub fn stabilized_report(n: u64, initial_bound: Option<usize>) -> Result<IndexReport> {
    analyze_level(n, ReportOptions { initial_bound, mode: AnemicMode::Extended }).map(|a| a.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::coefficient_matrix;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn row_sets() {
        let strict = AnemicRowSet::new(AnemicMode::Strict, 11, 25);
        let ext = AnemicRowSet::new(AnemicMode::Extended, 11, 25);
        assert_eq!(strict.rows(), &[1, 3, 5, 7, 9, 13, 15, 17, 19, 21, 23, 25]);
        assert!(strict.rows().iter().all(|n| ext.contains(*n)));
        let extra: Vec<usize> = ext.rows().iter().copied().filter(|n| !strict.contains(*n)).collect();
        assert_eq!(extra, vec![11]);
    }

    #[test]
    fn level_11() {
        let space = build_space(11).unwrap();
        let a = coefficient_matrix(&space, 12).unwrap();
        let rows = AnemicRowSet::new(AnemicMode::Extended, 11, 12);
        assert_eq!(compute_index(&a, &rows).unwrap().index, big(1));
        assert_eq!(express_t2(&a, &rows), Some(vec![Term { n: 1, coeff: big(-2) }]));
        assert_eq!(un_membership(&a, &rows), Some(true));
        assert_eq!(theta_kernel_dim(&a, &rows), 0);
    }

    #[test]
    fn level_3_is_trivial() {
        let r = stabilized_report(3, None).unwrap();
        assert_eq!((r.index.clone(), r.theta_kernel_dim, r.genus), (big(1), 0, 0));
        assert_eq!(r.un_in_anemic, Some(true));
        assert!(r.methods_agree && r.stabilized);
    }

    #[test]
    fn level_23_has_index_two() {
        let r = stabilized_report(23, None).unwrap();
        assert_eq!(r.index, big(2));
        assert_eq!(r.theta_kernel_dim, 1);
        assert!(r.methods_agree);
        assert_eq!(r.t2_expression, None);
    }

    #[test]
    fn terms_format() {
        let t = vec![Term { n: 1, coeff: big(-2) }, Term { n: 3, coeff: big(1) }, Term { n: 5, coeff: big(-4) }];
        assert_eq!(format_terms(&t), "−2·T1 + T3 − 4·T5");
        assert_eq!(format_terms(&[]), "0");
    }

    #[test]
    fn exact_log2() {
        assert_eq!(log2_exact(&big(16)), Some(4));
        assert_eq!(log2_exact(&big(1)), Some(0));
        assert_eq!(log2_exact(&big(12)), None);
    }

    #[test]
    fn below_sturm() {
        assert_eq!(
            analyze_level(653, ReportOptions { initial_bound: Some(5), ..Default::default() }).unwrap_err(),
            Error::BelowSturmBound { bound: 5, sturm: 109 }
        );
    }
}
