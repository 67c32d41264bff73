//! Exact integer linear algebra.
//!
//! Everything here works over unbounded integers: Smith normal form with
//! transforms, row lattices with membership and coordinate solves, quotients
//! `Z^r / L` in invariant-factor form, and elementary divisors of one lattice
//! inside another.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::serde_int::{self, JsonInt};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntLinError {
    #[error("dimension mismatch: expected {expected} columns, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entry count {found} does not match shape {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, found: usize },
    #[error("row {row} of the sublattice is not contained in the ambient lattice")]
    NotContained { row: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

/// A prime number. Construction checks primality, so downstream predicates
/// never have to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, IntLinError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(IntLinError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// Whether `p` divides `n`.
    pub fn divides(self, n: &BigInt) -> bool {
        (n % BigInt::from(self.0)).is_zero()
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        Prime::new(p).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// All primes `<= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<Prime> {
    (2..=bound).filter(|&n| is_prime(n)).map(Prime).collect()
}

/// Dense row-major matrix of unbounded integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, IntLinError> {
        if entries.len() != rows * cols {
            return Err(IntLinError::BadShape {
                rows,
                cols,
                found: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from small-integer rows. `cols` fixes the width so that
    /// an empty row list still has a well-defined shape.
    pub fn from_i64_rows<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Result<Self, IntLinError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(IntLinError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self, IntLinError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(IntLinError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            entries.extend(r);
        }
        Ok(IntMatrix {
            rows: n,
            cols,
            entries,
        })
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, IntLinError> {
        if self.cols != other.rows {
            return Err(IntLinError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "vector length must equal row count");
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += a * &self[(i, j)];
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Fraction-free (Bareiss) determinant. Panics on non-square input.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.row_vecs();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * factor;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * factor;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(self.row_vecs()).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

// JSON form is a plain list of rows. An empty list reads back as 0x0.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<JsonInt>> = (0..self.rows)
            .map(|i| self.row(i).iter().cloned().map(JsonInt).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<JsonInt>>::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.0).collect())
            .collect();
        IntMatrix::from_rows(cols, rows).map_err(serde::de::Error::custom)
    }
}

/// Smith normal form `U * M * V = diag(divisors)` with unimodular `U`, `V`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub v: IntMatrix,
    #[serde(with = "serde_int::vec")]
    pub divisors: Vec<BigInt>,
}

impl SmithForm {
    /// Number of nonzero divisors.
    pub fn rank(&self) -> usize {
        self.divisors.iter().take_while(|d| !d.is_zero()).count()
    }

    pub fn diagonal_matrix(&self) -> IntMatrix {
        IntMatrix::diagonal(self.u.rows(), self.v.cols(), &self.divisors)
    }
}

/// Smith normal form with transforms.
///
/// Pivots on the smallest nonzero absolute value left in the active block,
/// clears its row and column by Euclidean steps, then enforces the
/// divisibility chain before moving on.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_nonzero(&a, t..rows, t..cols) else {
            break;
        };
        move_pivot(&mut a, &mut u, &mut v, t, pi, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&a[(t, t)]);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                // A nonzero remainder is smaller than the pivot; promote it.
                let row_best = min_nonzero(&a, t..rows, t..t + 1);
                let col_best = min_nonzero(&a, t..t + 1, t..cols);
                let best = match (row_best, col_best) {
                    (Some(r), Some(c)) => {
                        if a[r].abs() <= a[c].abs() {
                            r
                        } else {
                            c
                        }
                    }
                    (Some(r), None) => r,
                    (None, Some(c)) => c,
                    (None, None) => unreachable!("pivot vanished"),
                };
                move_pivot(&mut a, &mut u, &mut v, t, best.0, best.1);
                continue;
            }
            let pivot = a[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !(&a[(i, j)] % &pivot).is_zero())
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let divisors = (0..rows.min(cols)).map(|i| a[(i, i)].clone()).collect();
    SmithForm { u, v, divisors }
}

fn min_nonzero(
    a: &IntMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let mag = x.abs();
            if best.as_ref().is_none_or(|(_, b)| mag < *b) {
                best = Some(((i, j), mag));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

fn move_pivot(
    a: &mut IntMatrix,
    u: &mut IntMatrix,
    v: &mut IntMatrix,
    t: usize,
    i: usize,
    j: usize,
) {
    a.swap_rows(t, i);
    u.swap_rows(t, i);
    a.swap_cols(t, j);
    v.swap_cols(t, j);
}

/// Finite(ly generated) abelian group `Z^free_rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_t`
/// with `1 < d₁ | d₂ | … | d_t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinAbGroup {
    #[serde(with = "serde_int::vec")]
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup {
            torsion: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup {
            torsion: Vec::new(),
            free_rank: rank,
        }
    }

    /// Normalizes a list of Smith divisors for `Z^ambient / L`.
    pub fn from_divisors(ambient_rank: usize, divisors: &[BigInt]) -> Self {
        let rank = divisors.iter().filter(|d| !d.is_zero()).count();
        let torsion = divisors
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect();
        FinAbGroup {
            torsion,
            free_rank: ambient_rank - rank,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_order())
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn p_torsion_free(&self, p: Prime) -> bool {
        !self.torsion.iter().any(|d| p.divides(d))
    }

    /// The p-parts of the invariant factors, dropping trivial ones. These are
    /// the cyclic factors of the p-primary subgroup.
    pub fn p_primary(&self, p: Prime) -> Vec<BigInt> {
        self.torsion
            .iter()
            .map(|d| p_part(d, p))
            .filter(|q| !q.is_one())
            .collect()
    }

    pub fn is_cyclic_torsion(&self) -> bool {
        self.torsion.len() <= 1
    }

    /// Invariant-factor description of a direct sum.
    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut diag: Vec<BigInt> = self.torsion.clone();
        diag.extend(other.torsion.iter().cloned());
        let n = diag.len();
        let smith = smith_normal_form(&IntMatrix::diagonal(n, n, &diag));
        let mut g = FinAbGroup::from_divisors(n, &smith.divisors);
        g.free_rank = self.free_rank + other.free_rank;
        g
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Largest power of `p` dividing `n` (1 for `n = 0` is never asked for; returns 1).
pub fn p_part(n: &BigInt, p: Prime) -> BigInt {
    let pb = p.to_bigint();
    let mut n = n.abs();
    let mut out = BigInt::one();
    if n.is_zero() {
        return out;
    }
    while (&n % &pb).is_zero() {
        n /= &pb;
        out *= &pb;
    }
    out
}

/// `Z^ambient_rank` modulo the row span of `generators`.
pub fn quotient_group(ambient_rank: usize, generators: &IntMatrix) -> Result<FinAbGroup, IntLinError> {
    if generators.rows() == 0 {
        return Ok(FinAbGroup::free(ambient_rank));
    }
    if generators.cols() != ambient_rank {
        return Err(IntLinError::DimensionMismatch {
            expected: ambient_rank,
            found: generators.cols(),
        });
    }
    let smith = smith_normal_form(generators);
    Ok(FinAbGroup::from_divisors(ambient_rank, &smith.divisors))
}

pub fn p_torsion_free(group: &FinAbGroup, p: Prime) -> bool {
    group.p_torsion_free(p)
}

/// A lattice given by generating rows in `Z^ambient`, with a precomputed Smith
/// form so that many membership and coordinate queries are cheap.
#[derive(Clone, Debug)]
pub struct RowLattice {
    ambient: usize,
    generators: IntMatrix,
    smith: SmithForm,
    rank: usize,
}

impl RowLattice {
    pub fn new(ambient: usize, generators: &IntMatrix) -> Result<Self, IntLinError> {
        let generators = if generators.rows() == 0 {
            IntMatrix::zeros(0, ambient)
        } else if generators.cols() != ambient {
            return Err(IntLinError::DimensionMismatch {
                expected: ambient,
                found: generators.cols(),
            });
        } else {
            generators.clone()
        };
        let smith = smith_normal_form(&generators);
        let rank = smith.rank();
        Ok(RowLattice {
            ambient,
            generators,
            smith,
            rank,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    /// `(vV)_i / d_i` for the nonzero divisors, provided the quotient is
    /// exact and the tail of `vV` vanishes.
    fn reduced(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient, "vector outside the ambient space");
        let w = self.smith.v.left_apply(v);
        if w[self.rank..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut y = Vec::with_capacity(self.rank);
        for (wi, d) in w.iter().zip(&self.smith.divisors).take(self.rank) {
            let (q, r) = wi.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            y.push(q);
        }
        Some(y)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduced(v).is_some()
    }

    /// Coordinates of `v` in the lattice basis returned by [`Self::basis`].
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        self.reduced(v)
    }

    /// Integer coefficients `c` with `c * generators = v`, if any.
    pub fn express(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.reduced(v)?;
        let mut full = y;
        full.resize(self.generators.rows(), BigInt::zero());
        Some(self.smith.u.left_apply(&full))
    }

    /// A basis of the lattice, one row per basis vector.
    pub fn basis(&self) -> IntMatrix {
        // rows d_i * (V^-1)_i; V^-1 is recovered from the Smith form of V.
        let vinv = unimodular_inverse(&self.smith.v);
        let mut rows = Vec::with_capacity(self.rank);
        for i in 0..self.rank {
            let d = &self.smith.divisors[i];
            rows.push(vinv.row(i).iter().map(|x| x * d).collect());
        }
        IntMatrix::from_rows(self.ambient, rows).expect("basis rows have ambient width")
    }
}

/// Inverse of a unimodular matrix, via Smith form (`U W V = I`, so
/// `W^-1 = V U`).
pub fn unimodular_inverse(w: &IntMatrix) -> IntMatrix {
    assert!(w.is_square());
    let s = smith_normal_form(w);
    assert!(
        s.divisors.iter().all(One::is_one),
        "matrix is not unimodular"
    );
    s.v.mul(&s.u).expect("square shapes agree")
}

/// Elementary divisors of the row lattice of `sub` inside the row lattice of
/// `ambient`. The result has one entry per basis vector of the ambient
/// lattice; zeros at the end mark directions the sublattice does not reach.
pub fn relative_divisors(sub: &IntMatrix, ambient: &IntMatrix) -> Result<Vec<BigInt>, IntLinError> {
    let dim = if ambient.rows() > 0 {
        ambient.cols()
    } else {
        sub.cols()
    };
    let lattice = RowLattice::new(dim, ambient)?;
    relative_divisors_in(sub, &lattice)
}

pub fn relative_divisors_in(sub: &IntMatrix, lattice: &RowLattice) -> Result<Vec<BigInt>, IntLinError> {
    if sub.rows() > 0 && sub.cols() != lattice.ambient() {
        return Err(IntLinError::DimensionMismatch {
            expected: lattice.ambient(),
            found: sub.cols(),
        });
    }
    let mut coords = Vec::with_capacity(sub.rows());
    for i in 0..sub.rows() {
        coords.push(
            lattice
                .coordinates(sub.row(i))
                .ok_or(IntLinError::NotContained { row: i })?,
        );
    }
    let m = IntMatrix::from_rows(lattice.rank(), coords).expect("coordinate rows have lattice rank");
    let mut divisors = smith_normal_form(&m).divisors;
    divisors.resize(lattice.rank(), BigInt::zero());
    Ok(divisors)
}

/// Rank of `m` reduced modulo `p`, by Gaussian elimination over `F_p`.
pub fn rank_mod_p(m: &IntMatrix, p: Prime) -> usize {
    let pp = p.get() as u128;
    let pb = p.to_bigint();
    let mut a: Vec<Vec<u128>> = (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.mod_floor(&pb).to_u128().expect("residue fits"))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = mod_inverse(a[rank][col], pp);
        for x in a[rank].iter_mut() {
            *x = *x * inv % pp;
        }
        let pivot_row = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + pp * pp - f * y % pp) % pp;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse(a: u128, p: u128) -> u128 {
    // Fermat: a^(p-2) mod p
    let mut result = 1u128;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

pub fn big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(cols, rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        big_vec(v)
    }

    fn check_smith(mat: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(mat);
        let d = s.u.mul(mat).unwrap().mul(&s.v).unwrap();
        assert_eq!(d, s.diagonal_matrix());
        assert_eq!(s.u.determinant().abs(), BigInt::one());
        assert_eq!(s.v.determinant().abs(), BigInt::one());
        s
    }

    #[test]
    fn smith_identity() {
        let s = check_smith(&IntMatrix::identity(2));
        assert_eq!(s.divisors, ints(&[1, 1]));
    }

    #[test]
    fn smith_two_by_two() {
        let s = check_smith(&m(2, &[&[2, 4], &[6, 8]]));
        assert_eq!(s.divisors, ints(&[2, 4]));
    }

    #[test]
    fn smith_empty() {
        let s = check_smith(&IntMatrix::zeros(0, 0));
        assert!(s.divisors.is_empty());
        let s = check_smith(&IntMatrix::zeros(0, 3));
        assert!(s.divisors.is_empty());
        assert_eq!(s.v.rows(), 3);
    }

    #[test]
    fn smith_chain_needs_fixing() {
        // diag(2,3) is already diagonal but violates the chain.
        let s = check_smith(&m(2, &[&[2, 0], &[0, 3]]));
        assert_eq!(s.divisors, ints(&[1, 6]));
        let s = check_smith(&m(3, &[&[4, 0, 0], &[0, 6, 0], &[0, 0, 0]]));
        assert_eq!(s.divisors, ints(&[2, 12, 0]));
    }

    #[test]
    fn smith_rank_deficient_and_negative() {
        let s = check_smith(&m(3, &[&[-3, 6, 9], &[1, -2, -3]]));
        assert_eq!(s.divisors, ints(&[1, 0]));
    }

    #[test]
    fn quotient_examples() {
        let g = quotient_group(2, &m(2, &[&[2, 0]])).unwrap();
        assert_eq!(g.torsion, ints(&[2]));
        assert_eq!(g.free_rank, 1);

        let g = quotient_group(1, &m(1, &[&[2]])).unwrap();
        assert_eq!(g.torsion, ints(&[2]));
        assert_eq!(g.free_rank, 0);
        assert_eq!(g.order(), Some(BigInt::from(2)));

        let g = quotient_group(2, &IntMatrix::zeros(0, 2)).unwrap();
        assert_eq!(g, FinAbGroup::free(2));
    }

    #[test]
    fn quotient_dimension_mismatch() {
        let err = quotient_group(3, &m(2, &[&[1, 1]])).unwrap_err();
        assert_eq!(
            err,
            IntLinError::DimensionMismatch {
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn torsion_freeness() {
        let p2 = Prime::new(2).unwrap();
        let g = FinAbGroup {
            torsion: ints(&[2, 4]),
            free_rank: 0,
        };
        assert!(!g.p_torsion_free(p2));
        let g = FinAbGroup {
            torsion: ints(&[3]),
            free_rank: 0,
        };
        assert!(g.p_torsion_free(p2));
        assert!(FinAbGroup::free(5).p_torsion_free(Prime::new(7).unwrap()));
    }

    #[test]
    fn prime_construction() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(97).is_ok());
        assert_eq!(Prime::new(1), Err(IntLinError::NotPrime(1)));
        assert_eq!(Prime::new(0), Err(IntLinError::NotPrime(0)));
        assert_eq!(Prime::new(91), Err(IntLinError::NotPrime(91)));
        let ps: Vec<u64> = primes_up_to(30).into_iter().map(Prime::get).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn relative_divisor_examples() {
        let full = m(2, &[&[1, 1], &[0, 1]]);
        assert_eq!(relative_divisors(&full, &full).unwrap(), ints(&[1, 1]));

        let sub = m(2, &[&[2, 0], &[0, 3]]);
        let z2 = IntMatrix::identity(2);
        assert_eq!(relative_divisors(&sub, &z2).unwrap(), ints(&[1, 6]));

        assert_eq!(
            relative_divisors(&m(1, &[&[2]]), &m(1, &[&[1]])).unwrap(),
            ints(&[2])
        );
    }

    #[test]
    fn relative_divisors_in_a_coarse_ambient() {
        // 2Z² inside the lattice spanned by (2,0),(0,2),(1,1) (index 2 in Z²).
        let ambient = m(2, &[&[2, 0], &[0, 2], &[1, 1]]);
        let sub = m(2, &[&[2, 0], &[0, 2]]);
        assert_eq!(relative_divisors(&sub, &ambient).unwrap(), ints(&[1, 2]));
        // Missing direction shows up as a trailing zero.
        let line = m(2, &[&[2, 2]]);
        assert_eq!(relative_divisors(&line, &ambient).unwrap(), ints(&[2, 0]));
    }

    #[test]
    fn relative_divisors_containment_error() {
        let err = relative_divisors(&m(1, &[&[1]]), &m(1, &[&[2]])).unwrap_err();
        assert_eq!(err, IntLinError::NotContained { row: 0 });
    }

    #[test]
    fn lattice_express_and_basis() {
        let gens = m(3, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let lat = RowLattice::new(3, &gens).unwrap();
        assert_eq!(lat.rank(), 2);
        let v = ints(&[5, 7, 9]);
        let c = lat.express(&v).unwrap();
        assert_eq!(gens.left_apply(&c), v);
        assert!(!lat.contains(&ints(&[1, 0, 0])));
        let basis = lat.basis();
        assert_eq!(basis.rows(), 2);
        for i in 0..3 {
            let coords = RowLattice::new(3, &basis).unwrap().express(gens.row(i));
            assert!(coords.is_some());
        }
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(2, &[&[2, 4], &[6, 8]]).determinant(), BigInt::from(-8));
        assert_eq!(
            m(3, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]).determinant(),
            BigInt::from(-1)
        );
        assert_eq!(IntMatrix::zeros(0, 0).determinant(), BigInt::one());
    }

    #[test]
    fn rank_mod_p_examples() {
        let a = m(2, &[&[1, 0], &[0, 3]]);
        assert_eq!(rank_mod_p(&a, Prime::new(3).unwrap()), 1);
        assert_eq!(rank_mod_p(&a, Prime::new(2).unwrap()), 2);
        assert_eq!(rank_mod_p(&m(1, &[&[-4]]), Prime::new(2).unwrap()), 0);
    }

    #[test]
    fn group_helpers() {
        let p2 = Prime::new(2).unwrap();
        let g = FinAbGroup {
            torsion: ints(&[6, 12]),
            free_rank: 1,
        };
        assert_eq!(g.p_primary(p2), ints(&[2, 4]));
        assert_eq!(g.order(), None);
        assert_eq!(g.torsion_order(), BigInt::from(72));
        assert_eq!(g.to_string(), "Z/6 + Z/12 + Z");
        let h = FinAbGroup {
            torsion: ints(&[2]),
            free_rank: 0,
        }
        .direct_sum(&FinAbGroup {
            torsion: ints(&[3]),
            free_rank: 0,
        });
        assert_eq!(h.torsion, ints(&[6]));
    }

    #[test]
    fn big_entries_survive() {
        // 2^70 pivots: fixed-width arithmetic would overflow here.
        let big = BigInt::from(1u128 << 70);
        let mat = IntMatrix::new(2, 2, vec![big.clone(), BigInt::one(), BigInt::zero(), big.clone()]).unwrap();
        let s = check_smith(&mat);
        assert_eq!(s.divisors[0], BigInt::one());
        assert_eq!(s.divisors[1], &big * &big);
    }

    #[test]
    fn matrix_json() {
        let mat = m(2, &[&[1, -2], &[3, 4]]);
        let s = serde_json::to_string(&mat).unwrap();
        assert_eq!(s, "[[1,-2],[3,4]]");
        let back: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, mat);
        let huge: IntMatrix = serde_json::from_str(r#"[["100000000000000000000000"]]"#).unwrap();
        assert_eq!(huge[(0, 0)].to_string(), "100000000000000000000000");
        assert!(serde_json::from_str::<IntMatrix>("[[1,2],[3]]").is_err());
    }
}
