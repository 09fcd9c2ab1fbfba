//! Weight-2 modular symbols for Γ₀(N), N prime, presented by Manin symbols.
//!
//! Conventions, fixed for the whole crate:
//!
//! * P¹(ℤ/N) is enumerated as `(0:1), (1:0), (1:1), …, (1:N-1)`; a symbol
//!   `(c:d)` with `c` invertible is stored as `(1 : d/c)`.
//! * The symbol `(c:d)` is the path `γ{∞, 0} = {a/c, b/d}` where
//!   `γ = [a b; c d] ∈ SL₂(ℤ)` is any lift of the bottom row. Its boundary is
//!   `[b/d] − [a/c]`, so `(1:0)` maps to `[∞] − [0]`.
//! * `S = [0 -1; 1 0]` and `T = [0 -1; 1 -1]` act on the right of row
//!   vectors: `(c:d)S = (d : -c)`, `(c:d)T = (d : -c-d)`. The relations are
//!   `x + xS = 0` and `x + xT + xT² = 0`.
//! * Vectors are row vectors; an operator matrix has `T(e_i)` as row `i`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{gcd_i64, inv_mod, is_prime};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, QVec, RatMatrix};

/// Machine-readable summary of the conventions above. Persisted results
/// carry a hash of it so they can be invalidated if it ever changes.
pub const CONVENTION: &str = "p1:(0:1),(1:0),(1:1..N-1);canon:c=0->(0:1),c unit->(1:d/c);\
symbol:(c:d)=gamma{oo,0},boundary=[b/d]-[a/c];S:(d:-c);T:(d:-c-d);\
hecke:[1 r;0 p],[p 0;0 1];rows=T(e_i);cuspidal=ker(boundary[oo])";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ManinSymbol {
    pub c: u64,
    pub d: u64,
}

/// Canonical representative of `(c:d)` in P¹(ℤ/N).
pub fn p1_normalize(c: i64, d: i64, n: u64) -> Result<ManinSymbol> {
    if !is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    let ni = n as i64;
    let (cr, dr) = (c.rem_euclid(ni) as u64, d.rem_euclid(ni) as u64);
    match (cr, dr) {
        (0, 0) => Err(Error::InvalidSymbol { c, d, n }),
        (0, _) => Ok(ManinSymbol { c: 0, d: 1 }),
        _ => Ok(ManinSymbol { c: 1, d: dr * inv_mod(cr, n) % n }),
    }
}

/// All of P¹(ℤ/N) in canonical order.
pub fn p1_list(n: u64) -> Vec<ManinSymbol> {
    std::iter::once(ManinSymbol { c: 0, d: 1 }).chain((0..n).map(|d| ManinSymbol { c: 1, d })).collect()
}

/// Genus of X₀(N) for prime N from the Riemann–Hurwitz formula.
pub fn genus_x0(n: u64) -> usize {
    let nu2 = (0..n).filter(|x| (x * x + 1) % n == 0).count() as i64;
    let nu3 = (0..n).filter(|x| (x * x + x + 1) % n == 0).count() as i64;
    let twelve_g = n as i64 + 1 - 3 * nu2 - 4 * nu3;
    debug_assert!(twelve_g >= 0 && twelve_g % 12 == 0);
    (twelve_g / 12) as usize
}

/// The two cusp classes of Γ₀(N) at prime level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cusp {
    Zero,
    Infinity,
}

/// A point of ℙ¹(ℚ), used as a path endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    /// `num/den` in lowest terms with `den > 0`.
    Rational(i64, i64),
}

impl Point {
    pub fn new(num: i64, den: i64) -> Point {
        if den == 0 {
            return Point::Infinity;
        }
        let g = gcd_i64(num, den);
        let s = if den < 0 { -1 } else { 1 };
        Point::Rational(s * num / g, s * den / g)
    }

    pub fn integer(k: i64) -> Point {
        Point::Rational(k, 1)
    }

    /// Image under the integer matrix `[a b; c d]` acting by Möbius transformation.
    pub fn act(self, a: i64, b: i64, c: i64, d: i64) -> Point {
        match self {
            Point::Infinity => Point::new(a, c),
            Point::Rational(u, v) => Point::new(a * u + b * v, c * u + d * v),
        }
    }

    pub fn cusp_class(self, n: u64) -> Cusp {
        match self {
            Point::Infinity => Cusp::Infinity,
            Point::Rational(_, den) if den % n as i64 == 0 => Cusp::Infinity,
            Point::Rational(..) => Cusp::Zero,
        }
    }
}

/// Formal difference of cusp classes, `zero·[0] + infinity·[∞]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CuspDivisor {
    pub zero: i64,
    pub infinity: i64,
}

impl CuspDivisor {
    fn add(&mut self, cusp: Cusp, k: i64) {
        match cusp {
            Cusp::Zero => self.zero += k,
            Cusp::Infinity => self.infinity += k,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero == 0 && self.infinity == 0
    }
}

/// Path endpoints `(γ∞, γ0)` of the canonical symbol `s`.
pub fn symbol_path(s: ManinSymbol) -> (Point, Point) {
    if s.c == 0 {
        (Point::Infinity, Point::integer(0))
    } else {
        // γ = [0 -1; 1 d]
        (Point::integer(0), Point::new(-1, s.d as i64))
    }
}

/// `[γ0] − [γ∞]` for the path of `s`.
pub fn boundary_map(s: ManinSymbol, n: u64) -> CuspDivisor {
    let (from, to) = symbol_path(s);
    let mut div = CuspDivisor::default();
    div.add(to.cusp_class(n), 1);
    div.add(from.cusp_class(n), -1);
    div
}

/// Integer numerators of the projection, kept as machine words when small.
#[derive(Clone, Debug)]
enum ProjectionNumerators {
    Small(Vec<i64>),
    Big(IntMatrix),
}

/// Cuspidal and full spaces of weight-2 modular symbols for Γ₀(N).
#[derive(Clone, Debug)]
pub struct ModSymSpace {
    level: u64,
    generators: Vec<ManinSymbol>,
    inverses: Vec<u64>,
    /// Generator index of each basis element of the relation quotient.
    basis: Vec<usize>,
    /// Row `x`: coordinates of free symbol `x` in the quotient.
    projection: RatMatrix,
    proj_num: ProjectionNumerators,
    proj_den: BigInt,
    /// `[∞]`-coefficient of the boundary of each quotient basis element.
    boundary: Vec<i64>,
    cusp_pivot: Option<usize>,
    cuspidal_basis: RatMatrix,
    genus: usize,
}

impl ModSymSpace {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn full_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn cuspidal_dim(&self) -> usize {
        self.cuspidal_basis.nrows()
    }

    pub fn generators(&self) -> &[ManinSymbol] {
        &self.generators
    }

    /// Manin symbols whose images form the basis of the relation quotient.
    pub fn basis_symbols(&self) -> Vec<ManinSymbol> {
        self.basis.iter().map(|&i| self.generators[i]).collect()
    }

    pub fn projection(&self) -> &RatMatrix {
        &self.projection
    }

    /// Rows are the cuspidal basis vectors in quotient coordinates.
    pub fn cuspidal_basis(&self) -> &RatMatrix {
        &self.cuspidal_basis
    }

    /// The boundary map on the quotient, as the `[∞]`-coefficient of each
    /// basis element (the `[0]`-coefficient is its negative).
    pub fn boundary_functional(&self) -> &[i64] {
        &self.boundary
    }

    /// Position of a canonical symbol in the generator list.
    pub fn index_of(&self, s: ManinSymbol) -> usize {
        if s.c == 0 {
            0
        } else {
            1 + s.d as usize
        }
    }

    /// Generator index of `(c:d)` for integers with `gcd(c, d, N) = 1`.
    pub(crate) fn symbol_index(&self, c: i64, d: i64) -> usize {
        let n = self.level as i64;
        let (cr, dr) = (c.rem_euclid(n) as u64, d.rem_euclid(n) as u64);
        if cr == 0 {
            debug_assert!(dr != 0);
            0
        } else {
            1 + (dr * self.inverses[cr as usize] % self.level) as usize
        }
    }

    /// Quotient coordinates of `Σ counts[x]·x` over free symbols `x`.
    pub fn project_counts(&self, counts: &[i64]) -> QVec {
        assert_eq!(counts.len(), self.generators.len());
        let m = self.full_dim();
        let num = match &self.proj_num {
            ProjectionNumerators::Small(p) => {
                let mut acc = vec![0i128; m];
                for (x, &k) in counts.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    for (a, &v) in acc.iter_mut().zip(&p[x * m..(x + 1) * m]) {
                        *a += k as i128 * v as i128;
                    }
                }
                acc.into_iter().map(BigInt::from).collect()
            }
            ProjectionNumerators::Big(p) => {
                let mut acc = vec![BigInt::zero(); m];
                for (x, &k) in counts.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    let k = BigInt::from(k);
                    for (a, v) in acc.iter_mut().zip(p.row(x)) {
                        *a += &k * v;
                    }
                }
                acc
            }
        };
        QVec::new(num, self.proj_den.clone())
    }

    /// Accumulates `sign · {∞, x}` as free-symbol counts.
    fn add_from_infinity(&self, x: Point, sign: i64, counts: &mut [i64]) {
        let Point::Rational(mut num, mut den) = x else { return };
        // convergents p_j/q_j; {p_{j-1}/q_{j-1}, p_j/q_j} = -(±q_j : q_{j-1})
        let (mut q_prev, mut q_cur) = (0i64, 1i64);
        let mut j = 0usize;
        loop {
            let a = num.div_euclid(den);
            let r = num - a * den;
            if j > 0 {
                let q_next = a * q_cur + q_prev;
                q_prev = q_cur;
                q_cur = q_next;
            }
            let c = if j % 2 == 1 { q_cur } else { -q_cur };
            counts[self.symbol_index(c, q_prev)] -= sign;
            if r == 0 {
                break;
            }
            num = den;
            den = r;
            j += 1;
        }
    }

    /// Accumulates `sign · {from, to}` as free-symbol counts.
    pub(crate) fn add_path(&self, from: Point, to: Point, sign: i64, counts: &mut [i64]) {
        self.add_from_infinity(to, sign, counts);
        self.add_from_infinity(from, -sign, counts);
    }

    /// Quotient coordinates of a cuspidal quotient vector restricted to the
    /// cuspidal basis. Returns `None` if `v` has nonzero boundary.
    pub fn to_cuspidal(&self, v: &QVec) -> Option<QVec> {
        let bd: BigInt = v.numer().iter().zip(&self.boundary).map(|(x, &b)| x * b).sum();
        if !bd.is_zero() {
            return None;
        }
        let j = self.cusp_pivot?;
        let num = v.numer().iter().enumerate().filter(|&(i, _)| i != j).map(|(_, x)| x.clone()).collect();
        Some(QVec::new(num, v.denom().clone()))
    }

    /// Inverse of [`to_cuspidal`](Self::to_cuspidal).
    pub fn from_cuspidal(&self, u: &QVec) -> QVec {
        let Some(j) = self.cusp_pivot else {
            assert!(u.is_empty());
            return QVec::zeros(self.full_dim());
        };
        let dj = BigInt::from(self.boundary[j]);
        let mut num: Vec<BigInt> = Vec::with_capacity(self.full_dim());
        let mut acc = BigInt::zero();
        let mut it = u.numer().iter();
        for i in 0..self.full_dim() {
            if i == j {
                num.push(BigInt::zero());
            } else {
                let x = it.next().expect("length");
                acc += x * self.boundary[i];
                num.push(x * &dj);
            }
        }
        num[j] = -acc;
        QVec::new(num, u.denom() * dj)
    }
}

/// Quotient coordinates of the modular symbol `{from, to}`.
pub fn path_to_symbols(from: Point, to: Point, space: &ModSymSpace) -> QVec {
    let mut counts = vec![0i64; space.generators.len()];
    space.add_path(from, to, 1, &mut counts);
    space.project_counts(&counts)
}

type SparseRow = BTreeMap<usize, BigRational>;

fn add_scaled(dst: &mut SparseRow, s: &BigRational, src: &SparseRow) {
    for (&k, v) in src {
        let e = dst.entry(k).or_insert_with(BigRational::zero);
        *e -= s * v;
        if e.is_zero() {
            dst.remove(&k);
        }
    }
}

/// Builds the space of weight-2 modular symbols of prime level `n`.
pub fn build_space(n: u64) -> Result<ModSymSpace> {
    if !is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    let generators = p1_list(n);
    let np = generators.len();
    let mut inverses = vec![0u64; n as usize];
    for (a, inv) in inverses.iter_mut().enumerate().skip(1) {
        *inv = inv_mod(a as u64, n);
    }
    let idx = |c: i64, d: i64| -> usize {
        let s = p1_normalize(c, d, n).expect("valid symbol");
        if s.c == 0 {
            0
        } else {
            1 + s.d as usize
        }
    };
    let act_s = |i: usize| {
        let s = generators[i];
        idx(s.d as i64, -(s.c as i64))
    };
    let act_t = |i: usize| {
        let s = generators[i];
        idx(s.d as i64, -(s.c as i64) - s.d as i64)
    };

    // x + xS = 0: each orbit keeps its smaller member up to sign, or dies.
    let mut rep: Vec<Option<(usize, i64)>> = vec![None; np];
    let mut seen = vec![false; np];
    for i in 0..np {
        if seen[i] {
            continue;
        }
        let j = act_s(i);
        seen[i] = true;
        seen[j] = true;
        if i != j {
            rep[i] = Some((i, 1));
            rep[j] = Some((i, -1));
        }
    }
    let vars: Vec<usize> = (0..np).filter(|&i| rep[i] == Some((i, 1))).collect();
    let var_of: BTreeMap<usize, usize> = vars.iter().enumerate().map(|(v, &g)| (g, v)).collect();

    // x + xT + xT² = 0, reduced to a fully reduced echelon form over ℚ.
    let mut pivot_rows: BTreeMap<usize, SparseRow> = BTreeMap::new();
    let mut seen = vec![false; np];
    for i in 0..np {
        if seen[i] {
            continue;
        }
        let orbit = [i, act_t(i), act_t(act_t(i))];
        let mut row = SparseRow::new();
        for &x in &orbit {
            seen[x] = true;
            if let Some((r, s)) = rep[x] {
                let e = row.entry(var_of[&r]).or_insert_with(BigRational::zero);
                *e += BigRational::from_integer(s.into());
            }
        }
        row.retain(|_, v| !v.is_zero());
        let present: Vec<usize> = row.keys().copied().filter(|k| pivot_rows.contains_key(k)).collect();
        for pv in present {
            if let Some(coef) = row.get(&pv).cloned() {
                add_scaled(&mut row, &coef, &pivot_rows[&pv]);
            }
        }
        let Some((&pv, lead)) = row.iter().next_back() else { continue };
        let inv = lead.recip();
        row.values_mut().for_each(|v| *v *= &inv);
        for prow in pivot_rows.values_mut() {
            if let Some(coef) = prow.get(&pv).cloned() {
                add_scaled(prow, &coef, &row);
            }
        }
        pivot_rows.insert(pv, row);
    }

    let free: Vec<usize> = (0..vars.len()).filter(|v| !pivot_rows.contains_key(v)).collect();
    let pos_of: BTreeMap<usize, usize> = free.iter().enumerate().map(|(p, &v)| (v, p)).collect();
    let m = free.len();
    let var_coords = |v: usize| -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); m];
        match pivot_rows.get(&v) {
            None => out[pos_of[&v]] = BigRational::one(),
            Some(row) => {
                for (&f, c) in row {
                    if f != v {
                        out[pos_of[&f]] = -c.clone();
                    }
                }
            }
        }
        out
    };
    let mut projection = RatMatrix::zeros(np, m);
    for x in 0..np {
        if let Some((r, s)) = rep[x] {
            let coords = var_coords(var_of[&r]);
            let sign = BigRational::from_integer(s.into());
            for (k, c) in coords.into_iter().enumerate() {
                projection.set(x, k, c * &sign);
            }
        }
    }
    let basis: Vec<usize> = free.iter().map(|&v| vars[v]).collect();

    let (pnum, pden) = projection.clear_denominators();
    let limit = BigInt::from(1i64 << 40);
    let small = (0..np).all(|i| pnum.row(i).iter().all(|x| x.abs() < limit));
    let proj_num = if small {
        ProjectionNumerators::Small(
            (0..np).flat_map(|i| pnum.row(i).iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>()).collect(),
        )
    } else {
        ProjectionNumerators::Big(pnum)
    };

    let boundary: Vec<i64> = basis.iter().map(|&g| boundary_map(generators[g], n).infinity).collect();
    let cusp_pivot = boundary.iter().position(|&b| b != 0);
    let mut cuspidal_basis = RatMatrix::zeros(0, m);
    if let Some(j) = cusp_pivot {
        let mut rows = Vec::with_capacity(m - 1);
        for i in (0..m).filter(|&i| i != j) {
            let mut r = vec![BigRational::zero(); m];
            r[i] = BigRational::one();
            r[j] = BigRational::new((-boundary[i]).into(), boundary[j].into());
            rows.push(r);
        }
        cuspidal_basis = RatMatrix::from_rows(m, rows);
    }

    let genus = genus_x0(n);
    if m != 2 * genus + 1 || cuspidal_basis.nrows() != 2 * genus {
        return Err(Error::Inconsistent(format!(
            "level {n}: quotient dimension {m}, cuspidal {}, genus {genus}",
            cuspidal_basis.nrows()
        )));
    }

    Ok(ModSymSpace {
        level: n,
        generators,
        inverses,
        basis,
        projection,
        proj_num,
        proj_den: pden,
        boundary,
        cusp_pivot,
        cuspidal_basis,
        genus,
    })
}
