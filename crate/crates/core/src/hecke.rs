//! Hecke operators on cuspidal modular symbols and the integral
//! coefficient matrix they determine.
//!
//! `T_p` acts on a path `{α, β}` through the coset representatives
//! `[1 r; 0 p]` (`0 ≤ r < p`) together with `[p 0; 0 1]` when `p ≠ N`; the
//! images are converted back to Manin symbols by continued fractions.
//! Composite indices follow from `T_p·T_m = T_{pm} + p·T_{m/p}` (the second
//! term only when `p | m` and `p ≠ N`).
//!
//! The coefficient matrix realizes 𝕋 as a lattice: each `T_n` is evaluated on
//! a few cuspidal probe vectors, the images for `n ≤ b` (Sturm bound) span a
//! rank-`g` lattice `L ≅ 𝕋`, and row `n` of the matrix holds the coordinates
//! of `T_n` in a basis of `L` whose first vector is `T_1`. Read by columns,
//! the matrix lists `a_n(f_j)` for the dual integral basis `f_j` of
//! `S₂(Γ₀(N), ℤ)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{primes_between, smallest_prime_factor};
use crate::error::{Error, Result};
use crate::linalg::int::Echelon;
use crate::linalg::{IntMatrix, QVec, RatMatrix, ScaledMatrix};
use crate::manin::{symbol_path, ModSymSpace};

/// `ceil((N + 1) / 6)`, the weight-2 Sturm bound for Γ₀(N), N prime.
pub fn sturm_bound(n: u64) -> usize {
    (n as usize + 1).div_ceil(6)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeOperator {
    /// `n` of `T_n` (for `n = N` this is `U_N`).
    pub index: u64,
    /// Action on cuspidal-basis coordinates, rows are images of basis vectors.
    pub matrix: RatMatrix,
}

impl HeckeOperator {
    pub fn commutes_with(&self, other: &HeckeOperator) -> bool {
        self.matrix.mul(&other.matrix) == other.matrix.mul(&self.matrix)
    }

    /// Characteristic polynomial, constant term first.
    pub fn charpoly(&self) -> Vec<BigRational> {
        self.matrix.charpoly()
    }
}

/// Matrix of `T_p` on the full relation quotient.
pub fn hecke_prime_full(space: &ModSymSpace, p: u64) -> ScaledMatrix {
    let n = space.level();
    let pi = p as i64;
    let mut reps: Vec<(i64, i64, i64, i64)> = (0..pi).map(|r| (1, r, 0, pi)).collect();
    if p != n {
        reps.push((pi, 0, 0, 1));
    }
    let rows: Vec<QVec> = space
        .basis_symbols()
        .into_iter()
        .map(|s| {
            let (from, to) = symbol_path(s);
            let mut counts = vec![0i64; space.generators().len()];
            for &(a, b, c, d) in &reps {
                space.add_path(from.act(a, b, c, d), to.act(a, b, c, d), 1, &mut counts);
            }
            space.project_counts(&counts)
        })
        .collect();
    scaled_from_rows(space.full_dim(), &rows)
}

fn scaled_from_rows(cols: usize, rows: &[QVec]) -> ScaledMatrix {
    let den = rows.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let num = IntMatrix::from_rows(
        cols,
        rows.iter().map(|r| {
            let k = &den / r.denom();
            r.numer().iter().map(|x| x * &k).collect()
        }).collect(),
    );
    ScaledMatrix { num, den }
}

/// Restriction of a full-quotient operator to cuspidal coordinates.
fn restrict_to_cuspidal(space: &ModSymSpace, full: &ScaledMatrix) -> Result<ScaledMatrix> {
    let mut rows = Vec::with_capacity(space.cuspidal_dim());
    for i in 0..space.cuspidal_dim() {
        let c = QVec::from_rationals(space.cuspidal_basis().row(i));
        let image = c.mul_mat(full);
        let u = space
            .to_cuspidal(&image)
            .ok_or_else(|| Error::Inconsistent(format!("level {}: Hecke image leaves the cuspidal subspace", space.level())))?;
        rows.push(u);
    }
    Ok(scaled_from_rows(space.cuspidal_dim(), &rows))
}

fn hecke_prime_cuspidal(space: &ModSymSpace, p: u64) -> Result<ScaledMatrix> {
    restrict_to_cuspidal(space, &hecke_prime_full(space, p))
}

/// `T_p` on the cuspidal subspace (`U_N` when `p = N`).
pub fn hecke_prime(space: &ModSymSpace, p: u64) -> Result<HeckeOperator> {
    Ok(HeckeOperator { index: p, matrix: hecke_prime_cuspidal(space, p)?.to_rat() })
}

/// Memo table of operator matrices for one space, keyed by `n`.
#[derive(Debug)]
pub struct HeckeCache<'a> {
    space: &'a ModSymSpace,
    ops: HashMap<u64, HeckeOperator>,
}

impl<'a> HeckeCache<'a> {
    pub fn new(space: &'a ModSymSpace) -> Self {
        HeckeCache { space, ops: HashMap::new() }
    }

    pub fn space(&self) -> &ModSymSpace {
        self.space
    }

    /// `T_n`, built from prime operators by the multiplicative recurrences.
    pub fn hecke_n(&mut self, n: u64) -> Result<&HeckeOperator> {
        assert!(n >= 1);
        if !self.ops.contains_key(&n) {
            let op = self.compute(n)?;
            self.ops.insert(n, op);
        }
        Ok(&self.ops[&n])
    }

    fn compute(&mut self, n: u64) -> Result<HeckeOperator> {
        let dim = self.space.cuspidal_dim();
        if n == 1 {
            return Ok(HeckeOperator { index: 1, matrix: RatMatrix::identity(dim) });
        }
        let p = smallest_prime_factor(n);
        if p == n {
            return hecke_prime(self.space, p);
        }
        let m = n / p;
        let tp = self.hecke_n(p)?.matrix.clone();
        let tm = self.hecke_n(m)?.matrix.clone();
        let mut matrix = tm.mul(&tp);
        if m.is_multiple_of(p) && p != self.space.level() {
            let lower = &self.hecke_n(m / p)?.matrix;
            matrix = matrix.sub(&lower.scale(&BigRational::from_integer(p.into())));
        }
        Ok(HeckeOperator { index: n, matrix })
    }
}

/// Free-function form of [`HeckeCache::hecke_n`].
pub fn hecke_n(n: u64, cache: &mut HeckeCache<'_>) -> Result<HeckeOperator> {
    cache.hecke_n(n).cloned()
}

/// Integer matrix `A[n][j] = a_n(f_j)` for `1 ≤ n ≤ B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientMatrix {
    level: u64,
    sturm: usize,
    genus: usize,
    rows: IntMatrix,
}

impl CoefficientMatrix {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn sturm_bound(&self) -> usize {
        self.sturm
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Number of rows `B`.
    pub fn bound(&self) -> usize {
        self.rows.nrows()
    }

    /// Coordinates of `T_n` (1-based `n`).
    pub fn row(&self, n: usize) -> &[BigInt] {
        self.rows.row(n - 1)
    }

    pub fn coefficient(&self, n: usize, j: usize) -> &BigInt {
        self.rows.get(n - 1, j)
    }

    /// Column `j` as `(a_1, …, a_B)`.
    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (1..=self.bound()).map(|n| self.coefficient(n, j).clone()).collect()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.rows
    }

    /// Rows for the given 1-based indices.
    pub fn select(&self, ns: &[usize]) -> IntMatrix {
        self.rows.select_rows(&ns.iter().map(|n| n - 1).collect::<Vec<_>>())
    }

    pub fn truncated(&self, bound: usize) -> CoefficientMatrix {
        assert!(bound <= self.bound());
        CoefficientMatrix { rows: self.rows.select_rows(&(0..bound).collect::<Vec<_>>()), ..self.clone() }
    }
}

/// Lattice data fixed once rows `1..=b` are known.
#[derive(Clone, Debug)]
struct DualBasis {
    probes: usize,
    scale: BigInt,
    lattice: Echelon,
    /// Unimodular change of basis sending the coordinates of `T_1` to `e_1`.
    unimodular: IntMatrix,
}

/// Incremental producer of coefficient matrices for one level. Prime
/// operators and the probe orbits `T_n·w` are cached, so raising the bound
/// only computes the new rows.
pub struct CoefficientEngine<'a> {
    space: &'a ModSymSpace,
    primes: BTreeMap<u64, ScaledMatrix>,
    /// `orbits[k][n-1] = T_n · w_k` in cuspidal coordinates.
    orbits: Vec<Vec<QVec>>,
    dual: Option<DualBasis>,
}

impl<'a> CoefficientEngine<'a> {
    pub fn new(space: &'a ModSymSpace) -> Self {
        CoefficientEngine { space, primes: BTreeMap::new(), orbits: Vec::new(), dual: None }
    }

    pub fn space(&self) -> &ModSymSpace {
        self.space
    }

    /// Number of probe vectors needed to separate 𝕋 (0 before the first call).
    pub fn probes(&self) -> usize {
        self.dual.as_ref().map_or(0, |d| d.probes)
    }

    fn ensure_primes(&mut self, bound: usize) -> Result<()> {
        let missing: Vec<u64> = primes_between(2, bound as u64).into_iter().filter(|p| !self.primes.contains_key(p)).collect();
        let space = self.space;
        let computed: Vec<(u64, Result<ScaledMatrix>)> =
            missing.into_par_iter().map(|p| (p, hecke_prime_cuspidal(space, p))).collect();
        for (p, m) in computed {
            self.primes.insert(p, m?);
        }
        Ok(())
    }

    fn extend_orbit(&mut self, k: usize, bound: usize) {
        let level = self.space.level();
        let orbit = &mut self.orbits[k];
        for n in orbit.len() + 1..=bound {
            let n64 = n as u64;
            if n == 1 {
                let mut e = vec![BigInt::zero(); self.space.cuspidal_dim()];
                e[k] = BigInt::one();
                orbit.push(QVec::from_ints(e));
                continue;
            }
            let p = smallest_prime_factor(n64);
            let m = (n64 / p) as usize;
            let mut v = orbit[m - 1].mul_mat(&self.primes[&p]);
            if (m as u64).is_multiple_of(p) && p != level {
                v = v.sub_scaled(&BigInt::from(p), &orbit[m / p as usize - 1]);
            }
            orbit.push(v);
        }
    }

    /// Concatenated probe images of `T_n` times `scale`, if integral.
    fn flat_row(&self, n: usize, probes: usize, scale: &BigInt) -> Option<Vec<BigInt>> {
        let mut out = Vec::with_capacity(probes * self.space.cuspidal_dim());
        for orbit in &self.orbits[..probes] {
            let v = &orbit[n - 1];
            let (q, r) = scale.div_rem(v.denom());
            if !r.is_zero() {
                return None;
            }
            out.extend(v.numer().iter().map(|x| x * &q));
        }
        Some(out)
    }

    fn build_dual(&mut self, sturm: usize) -> Result<DualBasis> {
        let genus = self.space.genus();
        let dim = self.space.cuspidal_dim();
        let mut probes = 0;
        loop {
            probes += 1;
            if probes > dim {
                let rank = self.dual_rank(sturm, dim);
                return Err(Error::RankDeficient { bound: sturm, rank, genus });
            }
            self.orbits.push(Vec::new());
            self.extend_orbit(probes - 1, sturm);
            if self.dual_rank(sturm, probes) == genus {
                break;
            }
        }
        let scale = self.orbits[..probes]
            .iter()
            .flat_map(|o| o[..sturm].iter())
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let width = probes * dim;
        let mut lattice = Echelon::new(width);
        for n in 1..=sturm {
            lattice.insert(&self.flat_row(n, probes, &scale).expect("scaled row is integral"), n - 1);
        }
        let first = lattice
            .coordinates(&self.flat_row(1, probes, &scale).expect("integral"))
            .ok_or_else(|| Error::Inconsistent("T_1 outside its own lattice".into()))?;
        let unimodular = unimodular_to_first_axis(&first)?;
        Ok(DualBasis { probes, scale, lattice, unimodular })
    }

    fn dual_rank(&self, sturm: usize, probes: usize) -> usize {
        let rows: Vec<Vec<BigInt>> = (1..=sturm)
            .map(|n| {
                self.orbits[..probes]
                    .iter()
                    .flat_map(|o| {
                        let v = &o[n - 1];
                        v.numer().to_vec()
                    })
                    .collect()
            })
            .collect();
        // rank is scale-invariant per row, so unequal denominators are harmless
        let mut e = Echelon::new(probes * self.space.cuspidal_dim());
        for (i, r) in rows.iter().enumerate() {
            e.insert(r, i);
        }
        e.rank()
    }

    /// Coefficient matrix with `bound` rows.
    pub fn coefficients(&mut self, bound: usize) -> Result<CoefficientMatrix> {
        let level = self.space.level();
        let sturm = sturm_bound(level);
        if bound < sturm {
            return Err(Error::BelowSturmBound { bound, sturm });
        }
        let genus = self.space.genus();
        if genus == 0 {
            return Ok(CoefficientMatrix { level, sturm, genus, rows: IntMatrix::zeros(bound, 0) });
        }
        self.ensure_primes(bound)?;
        if self.dual.is_none() {
            let dual = self.build_dual(sturm)?;
            self.dual = Some(dual);
        }
        let probes = self.dual.as_ref().expect("dual").probes;
        for k in 0..probes {
            self.extend_orbit(k, bound);
        }
        let dual = self.dual.as_ref().expect("dual");
        let mut raw = IntMatrix::zeros(0, genus);
        for n in 1..=bound {
            let coords = self
                .flat_row(n, probes, &dual.scale)
                .and_then(|row| dual.lattice.coordinates(&row))
                .ok_or_else(|| Error::Inconsistent(format!("level {level}: T_{n} is not an integral combination of T_1..T_{sturm}")))?;
            raw.push_row(&coords);
        }
        let rows = raw.mul(&dual.unimodular);
        Ok(CoefficientMatrix { level, sturm, genus, rows })
    }
}

/// Coefficient matrix of `space` with `bound` rows.
pub fn coefficient_matrix(space: &ModSymSpace, bound: usize) -> Result<CoefficientMatrix> {
    CoefficientEngine::new(space).coefficients(bound)
}

/// Unimodular `U` with `v·U = e_1`, for a primitive integer vector `v`.
fn unimodular_to_first_axis(v: &[BigInt]) -> Result<IntMatrix> {
    let g = v.len();
    let mut u = IntMatrix::identity(g);
    let mut w = v.to_vec();
    let col_sub = |u: &mut IntMatrix, dst: usize, q: &BigInt, src: usize| {
        for r in 0..g {
            let x = u.get(r, dst) - q * u.get(r, src);
            u.set(r, dst, x);
        }
    };
    loop {
        let nonzero: Vec<usize> = (0..g).filter(|&i| !w[i].is_zero()).collect();
        let Some(&i) = nonzero.iter().min_by_key(|&&i| w[i].abs()) else {
            return Err(Error::Inconsistent("T_1 has zero coordinates".into()));
        };
        if nonzero.len() == 1 {
            if !w[i].abs().is_one() {
                return Err(Error::Inconsistent("T_1 is not primitive in the Hecke lattice".into()));
            }
            if w[i].is_negative() {
                let neg = BigInt::from(2);
                col_sub(&mut u, i, &neg, i);
                w[i] = -&w[i];
            }
            if i != 0 {
                for r in 0..g {
                    let a = u.get(r, 0).clone();
                    let b = u.get(r, i).clone();
                    u.set(r, 0, b);
                    u.set(r, i, a);
                }
            }
            return Ok(u);
        }
        for &j in &nonzero {
            if j != i {
                let q = &w[j] / &w[i];
                col_sub(&mut u, j, &q, i);
                w[j] = &w[j] - &q * &w[i];
            }
        }
    }
}
