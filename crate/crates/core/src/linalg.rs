//! Dense exact matrices over a euclidean ring.
//!
//! Determinants use fraction-free (Bareiss) elimination. The Smith form keeps
//! both transforms and their inverses so that saturations can be read off
//! directly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{gcd, RingElement, RingId};

/// A column vector of ring elements.
pub type Vector = Vec<RingElement>;

pub fn zero_vector(ring: RingId, len: usize) -> Vector {
    vec![RingElement::zero(ring); len]
}

pub fn unit_vector(ring: RingId, len: usize, p: usize) -> Vector {
    let mut v = zero_vector(ring, len);
    v[p] = RingElement::one(ring);
    v
}

pub fn int_vector(ring: RingId, xs: &[i64]) -> Vector {
    xs.iter().map(|&x| RingElement::from_int(ring, x)).collect()
}

pub fn is_zero_vector(v: &[RingElement]) -> bool {
    v.iter().all(RingElement::is_zero)
}

pub fn vec_add(v: &[RingElement], w: &[RingElement]) -> Vector {
    v.iter().zip(w).map(|(a, b)| a + b).collect()
}

pub fn vec_sub(v: &[RingElement], w: &[RingElement]) -> Vector {
    v.iter().zip(w).map(|(a, b)| a - b).collect()
}

pub fn vec_scale(c: &RingElement, v: &[RingElement]) -> Vector {
    v.iter().map(|a| c * a).collect()
}

pub fn vec_neg(v: &[RingElement]) -> Vector {
    v.iter().map(|a| -a).collect()
}

/// `a*v + b*w`
pub fn vec_comb(a: &RingElement, v: &[RingElement], b: &RingElement, w: &[RingElement]) -> Vector {
    v.iter().zip(w).map(|(x, y)| a * x + b * y).collect()
}

/// Exact division of every entry; `None` if some entry is not divisible.
pub fn vec_div_exact(v: &[RingElement], c: &RingElement) -> Option<Vector> {
    v.iter().map(|a| a.div_exact(c)).collect()
}

/// The gcd of the entries, in canonical associate form.
pub fn content(v: &[RingElement]) -> Result<RingElement> {
    let mut g: Option<RingElement> = None;
    for a in v.iter().filter(|a| !a.is_zero()) {
        g = Some(match g {
            None => a.canonical(),
            Some(g) if g.is_one() => return Ok(g),
            Some(g) => gcd(&g, a)?,
        });
    }
    g.ok_or(Error::ZeroVector)
}

pub fn is_primitive(v: &[RingElement]) -> Result<bool> {
    Ok(content(v)?.is_unit())
}

/// Divides by the content; returns the primitive part and the content.
pub fn make_primitive(v: &[RingElement]) -> Result<(Vector, RingElement)> {
    let c = content(v)?;
    let p = vec_div_exact(v, &c).expect("content divides every entry");
    Ok((p, c))
}

/// Scales a nonzero vector by a unit so that its first nonzero entry is a
/// canonical associate.
pub fn canonical_vector(v: &[RingElement]) -> Vector {
    match v.iter().find(|a| !a.is_zero()) {
        None => v.to_vec(),
        Some(a) => {
            let (_, u) = a.canonical_associate();
            vec_scale(&u, v)
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: RingId,
    rows: usize,
    cols: usize,
    data: Vec<RingElement>,
}

impl Matrix {
    pub fn new(ring: RingId, rows: usize, cols: usize, data: Vec<RingElement>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if let Some(x) = data.iter().find(|x| x.ring() != ring) {
            return Err(Error::RingMismatch(ring.to_string(), x.ring().to_string()));
        }
        Ok(Matrix { ring, rows, cols, data })
    }

    pub fn zeros(ring: RingId, rows: usize, cols: usize) -> Self {
        Matrix { ring, rows, cols, data: vec![RingElement::zero(ring); rows * cols] }
    }

    pub fn identity(ring: RingId, n: usize) -> Self {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, RingElement::one(ring));
        }
        m
    }

    /// Builds from columns; all columns must have the same length.
    pub fn from_columns(ring: RingId, cols: &[Vector]) -> Result<Self> {
        let rows = cols.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(ring, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.len() });
            }
            for (i, x) in c.iter().enumerate() {
                if x.ring() != ring {
                    return Err(Error::RingMismatch(ring.to_string(), x.ring().to_string()));
                }
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn from_rows(ring: RingId, rows: &[Vector]) -> Result<Self> {
        Ok(Matrix::from_columns(ring, rows)?.transpose())
    }

    /// Integer entries, row-major; convenient for tests and fixtures.
    pub fn from_i64(ring: RingId, rows: &[&[i64]]) -> Self {
        let r: Vec<Vector> = rows.iter().map(|row| int_vector(ring, row)).collect();
        Matrix::from_rows(ring, &r).expect("rectangular integer rows")
    }

    pub fn ring(&self) -> RingId {
        self.ring
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

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: RingElement) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn set_column(&mut self, j: usize, v: &[RingElement]) {
        for (i, x) in v.iter().enumerate() {
            self.set(i, j, x.clone());
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut p = Matrix::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = RingElement::zero(self.ring);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc = acc + a * other.get(k, j);
                    }
                }
                p.set(i, j, acc);
            }
        }
        Ok(p)
    }

    pub fn mul_vec(&self, v: &[RingElement]) -> Result<Vector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(RingElement::zero(self.ring), |acc, k| {
                    acc + self.get(i, k) * &v[k]
                })
            })
            .collect())
    }

    pub fn neg(&self) -> Matrix {
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut s = Matrix::zeros(self.ring, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                s.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingElement::is_zero)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row `i` += c * row `k`
    pub(crate) fn row_add(&mut self, i: usize, k: usize, c: &RingElement) {
        for j in 0..self.cols {
            let d = c * self.get(k, j);
            let x = self.get(i, j) + &d;
            self.set(i, j, x);
        }
    }

    /// column `j` += c * column `k`
    pub(crate) fn col_add(&mut self, j: usize, k: usize, c: &RingElement) {
        for i in 0..self.rows {
            let d = self.get(i, k) * c;
            let x = self.get(i, j) + &d;
            self.set(i, j, x);
        }
    }

    pub(crate) fn row_scale(&mut self, i: usize, c: &RingElement) {
        for j in 0..self.cols {
            let x = c * self.get(i, j);
            self.set(i, j, x);
        }
    }

    pub(crate) fn col_scale(&mut self, j: usize, c: &RingElement) {
        for i in 0..self.rows {
            let x = self.get(i, j) * c;
            self.set(i, j, x);
        }
    }

    /// Determinant by Bareiss elimination.
    pub fn det(&self) -> Result<RingElement> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(RingElement::one(self.ring));
        }
        let mut a = self.clone();
        let mut sign_flip = false;
        let mut prev = RingElement::one(self.ring);
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign_flip = !sign_flip;
                    }
                    None => return Ok(RingElement::zero(self.ring)),
                }
            }
            let p = a.get(k, k).clone();
            for i in k + 1..n {
                let aik = a.get(i, k).clone();
                for j in k + 1..n {
                    let num = &p * a.get(i, j) - &aik * a.get(k, j);
                    let v = num.div_exact(&prev).expect("Bareiss division is exact");
                    a.set(i, j, v);
                }
                a.set(i, k, RingElement::zero(self.ring));
            }
            prev = p;
        }
        let d = a.get(n - 1, n - 1).clone();
        Ok(if sign_flip { -d } else { d })
    }

    /// Rank by fraction-free row reduction.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let piv = a.get(r, c).clone();
            for i in r + 1..a.rows {
                let f = a.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..a.cols {
                    let v = &piv * a.get(i, j) - &f * a.get(r, j);
                    a.set(i, j, v);
                }
                let row = a.row(i);
                if let Ok(g) = content(&row) {
                    if !g.is_one() {
                        for (j, x) in row.iter().enumerate() {
                            a.set(i, j, x.div_exact(&g).expect("content divides row"));
                        }
                    }
                }
            }
            r += 1;
        }
        r
    }

    /// `true` iff square with unit determinant.
    pub fn is_unimodular(&self) -> bool {
        self.det().map_or(false, |d| d.is_unit())
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<Matrix> {
        let s = smith_normal_form(self);
        if s.divisors.len() != self.rows || !self.is_square() || !s.divisors.iter().all(|d| d.is_unit()) {
            return Err(Error::Precondition("matrix is not unimodular".into()));
        }
        // U m V = I (divisors are canonical units, i.e. 1), so m^{-1} = V U
        s.v.mul(&s.u)
    }

    pub fn max_norm(&self) -> BigInt {
        self.data.iter().map(RingElement::norm).max().unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// `u * m * v = diag(divisors)` with `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub divisors: Vec<RingElement>,
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
    pub diagonal: Matrix,
}

/// Smith normal form over a euclidean ring, divisors in canonical form and
/// each dividing the next.
pub fn smith_normal_form(m: &Matrix) -> SmithForm {
    let ring = m.ring;
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = Matrix::identity(ring, r);
    let mut u_inv = Matrix::identity(ring, r);
    let mut v = Matrix::identity(ring, c);
    let mut v_inv = Matrix::identity(ring, c);

    // each elementary operation is mirrored on the transforms
    macro_rules! row_add {
        ($i:expr, $k:expr, $q:expr) => {{
            let q: &RingElement = $q;
            a.row_add($i, $k, q);
            u.row_add($i, $k, q);
            u_inv.col_add($k, $i, &-q);
        }};
    }
    macro_rules! col_add {
        ($j:expr, $k:expr, $q:expr) => {{
            let q: &RingElement = $q;
            a.col_add($j, $k, q);
            v.col_add($j, $k, q);
            v_inv.row_add($k, $j, &-q);
        }};
    }
    macro_rules! row_swap {
        ($i:expr, $k:expr) => {{
            a.swap_rows($i, $k);
            u.swap_rows($i, $k);
            u_inv.swap_cols($i, $k);
        }};
    }
    macro_rules! col_swap {
        ($j:expr, $k:expr) => {{
            a.swap_cols($j, $k);
            v.swap_cols($j, $k);
            v_inv.swap_rows($j, $k);
        }};
    }

    let mut divisors = Vec::new();
    for t in 0..r.min(c) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..r {
            for j in t..c {
                let x = a.get(i, j);
                if !x.is_zero() {
                    let nx = x.norm();
                    if best.as_ref().map_or(true, |b| nx < b.2) {
                        best = Some((i, j, nx));
                    }
                }
            }
        }
        let Some((bi, bj, _)) = best else { break };
        row_swap!(t, bi);
        col_swap!(t, bj);
        loop {
            let mut done = true;
            for i in t + 1..r {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let (q, rem) = a.get(i, t).div_rem(a.get(t, t)).expect("pivot nonzero");
                row_add!(i, t, &-q);
                if !rem.is_zero() {
                    row_swap!(t, i);
                    done = false;
                }
            }
            for j in t + 1..c {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let (q, rem) = a.get(t, j).div_rem(a.get(t, t)).expect("pivot nonzero");
                col_add!(j, t, &-q);
                if !rem.is_zero() {
                    col_swap!(t, j);
                    done = false;
                }
            }
            if !done {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = a.get(t, t).clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !p.divides(a.get(i, j))));
            match bad {
                Some(i) => {
                    let one = RingElement::one(ring);
                    row_add!(t, i, &one);
                }
                None => break,
            }
        }
        let (d, unit) = a.get(t, t).canonical_associate();
        if !unit.is_one() {
            let inv = unit.unit_inverse().expect("unit");
            a.row_scale(t, &unit);
            u.row_scale(t, &unit);
            u_inv.col_scale(t, &inv);
        }
        divisors.push(d);
    }
    SmithForm { divisors, u, u_inv, v, v_inv, diagonal: a }
}

/// A submodule of `O^ambient_rank` given by generator columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub ambient_rank: usize,
    pub generators: Matrix,
}

impl Lattice {
    pub fn new(generators: Matrix) -> Self {
        Lattice { ambient_rank: generators.rows(), generators }
    }

    pub fn from_columns(ring: RingId, cols: &[Vector]) -> Result<Self> {
        Ok(Lattice::new(Matrix::from_columns(ring, cols)?))
    }

    /// Product of the norms of the Smith divisors, or 0 when the generators
    /// are dependent. Equals 1 exactly when the lattice is saturated.
    pub fn index(&self) -> BigInt {
        let s = smith_normal_form(&self.generators);
        if s.divisors.len() < self.generators.cols() {
            return BigInt::zero();
        }
        s.divisors.iter().fold(BigInt::one(), |acc, d| acc * d.norm())
    }
}

/// Saturation of the column span of a full-column-rank matrix: returns
/// `(basis, coords)` with `basis` a basis of `span_K(m) ∩ O^rows` and
/// `m = basis * coords`. `norm(det(coords))` is the index of `m` in the
/// saturation.
pub fn saturate(m: &Matrix) -> Result<(Matrix, Matrix)> {
    let s = smith_normal_form(m);
    let k = m.cols();
    if s.divisors.len() < k {
        return Err(Error::Dependent);
    }
    let basis = s.u_inv.submatrix(0, m.rows(), 0, k);
    // m = u_inv * D * v_inv, and D has only its top k rows nonzero
    let top = s.diagonal.submatrix(0, k, 0, k);
    let coords = top.mul(&s.v_inv)?;
    Ok((basis, coords))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturatedPair {
    pub basis: (Vector, Vector),
    /// `[w w'] = [b b'] * coords`
    pub coords: Matrix,
}

/// An `O`-basis of `span_K(w, w') ∩ O^len` and the coordinates of `w`, `w'`.
pub fn saturate_pair(w: &[RingElement], w2: &[RingElement]) -> Result<SaturatedPair> {
    let ring = w.first().ok_or(Error::ZeroVector)?.ring();
    let m = Matrix::from_columns(ring, &[w.to_vec(), w2.to_vec()])?;
    let (basis, coords) = saturate(&m)?;
    Ok(SaturatedPair { basis: (basis.column(0), basis.column(1)), coords })
}

/// Solves `m * x = b` over the fraction field for square nonsingular `m` via
/// Cramer's rule; returns the numerators `det(m_i[b])` and `det(m)`.
pub fn cramer(m: &Matrix, b: &[RingElement]) -> Result<(Vec<RingElement>, RingElement)> {
    let d = m.det()?;
    if d.is_zero() {
        return Err(Error::Dependent);
    }
    let mut nums = Vec::with_capacity(m.cols());
    for i in 0..m.cols() {
        let mut mi = m.clone();
        mi.set_column(i, b);
        nums.push(mi.det()?);
    }
    Ok((nums, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Z: RingId = RingId::Integers;
    const ZI: RingId = RingId::GaussianIntegers;

    fn zi(a: i64, b: i64) -> RingElement {
        RingElement::from_pair(ZI, a, b)
    }

    fn z(a: i64) -> RingElement {
        RingElement::from_int(Z, a)
    }

    #[test]
    fn determinants() {
        assert_eq!(Matrix::identity(Z, 4).det().unwrap(), z(1));
        // columns e1, e2, e2bar, e1 + 3 e1bar in the order 1, 2, 2bar, 1bar
        let m = Matrix::from_i64(Z, &[&[1, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 3]]);
        assert_eq!(m.det().unwrap(), z(3));
        let rep = Matrix::from_i64(Z, &[&[1, 1, 2], &[3, 3, 4], &[5, 5, 7]]);
        assert!(rep.det().unwrap().is_zero());
        assert_eq!(
            Matrix::zeros(Z, 2, 3).det(),
            Err(Error::NonSquare { rows: 2, cols: 3 })
        );
        let swap = Matrix::from_i64(Z, &[&[0, 1], &[1, 0]]);
        assert_eq!(swap.det().unwrap(), z(-1));
    }

    #[test]
    fn smith_examples() {
        let s = smith_normal_form(&Matrix::from_i64(Z, &[&[2, 0], &[0, 3]]));
        assert_eq!(s.divisors, vec![z(1), z(6)]);
        assert!(smith_normal_form(&Matrix::zeros(Z, 3, 2)).divisors.is_empty());
        let s = smith_normal_form(&Matrix::from_i64(Z, &[&[2], &[4]]));
        assert_eq!(s.divisors, vec![z(2)]);
    }

    #[test]
    fn index_examples() {
        let l = Lattice::new(Matrix::from_i64(Z, &[&[2], &[4]]));
        assert_eq!(l.index(), BigInt::from(2));
        let dep = Lattice::new(Matrix::from_i64(Z, &[&[1, 2], &[0, 0]]));
        assert_eq!(dep.index(), BigInt::zero());
        assert_eq!(Lattice::new(Matrix::identity(Z, 4)).index(), BigInt::one());
    }

    #[test]
    fn saturation_examples() {
        let e1 = int_vector(Z, &[1, 0]);
        let e2 = int_vector(Z, &[0, 1]);
        let s = saturate_pair(&e1, &e2).unwrap();
        assert!(s.coords.is_unimodular());

        let s = saturate_pair(&int_vector(Z, &[2, 0]), &int_vector(Z, &[0, 3])).unwrap();
        let b = Matrix::from_columns(Z, &[s.basis.0.clone(), s.basis.1.clone()]).unwrap();
        assert!(b.is_unimodular());
        assert_eq!(s.coords.det().unwrap().norm(), BigInt::from(6));

        let w = int_vector(Z, &[1, 0, -5, 0]);
        let w2 = int_vector(Z, &[3, 0, -5, 0]);
        let s = saturate_pair(&w, &w2).unwrap();
        assert_eq!(s.coords.det().unwrap().norm(), BigInt::from(10));
        let b = Matrix::from_columns(Z, &[s.basis.0.clone(), s.basis.1.clone()]).unwrap();
        assert_eq!(Lattice::new(b.clone()).index(), BigInt::one());
        let m = Matrix::from_columns(Z, &[w, w2]).unwrap();
        assert_eq!(b.mul(&s.coords).unwrap(), m);

        assert_eq!(saturate_pair(&e1, &e1).unwrap_err(), Error::Dependent);
    }

    #[test]
    fn primitivity() {
        let v = int_vector(Z, &[2, 4, 6]);
        assert!(!is_primitive(&v).unwrap());
        assert_eq!(make_primitive(&v).unwrap(), (int_vector(Z, &[1, 2, 3]), z(2)));
        assert!(is_primitive(&int_vector(Z, &[3, 5])).unwrap());
        let g = vec![zi(1, 1), zi(2, 0)];
        let (p, c) = make_primitive(&g).unwrap();
        assert_eq!(c, zi(1, 1));
        assert_eq!(p, vec![zi(1, 0), zi(1, -1)]);
        assert_eq!(content(&int_vector(Z, &[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn rank_counts_independent_columns() {
        let m = Matrix::from_i64(Z, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(Matrix::zeros(Z, 2, 2).rank(), 0);
        assert_eq!(Matrix::identity(Z, 5).rank(), 5);
    }

    /// Index by exhaustive basis completion: min over integer completions W
    /// of |det(B, W)|, searched over small entries.
    fn index_by_completion(b: &Matrix) -> BigInt {
        let n = b.rows();
        let k = b.cols();
        assert!(n - k == 1);
        let mut best: Option<BigInt> = None;
        // Bezout coefficients for the 2x2 minors stay below this bound
        let r = 8i64;
        let range = -r..=r;
        let mut w = vec![-r; n];
        loop {
            let mut cols = b.columns();
            cols.push(int_vector(Z, &w));
            let d = Matrix::from_columns(Z, &cols).unwrap().det().unwrap().norm();
            if !d.is_zero() && best.as_ref().map_or(true, |b| &d < b) {
                best = Some(d);
            }
            let mut p = 0;
            loop {
                if p == n {
                    return best.unwrap_or_else(BigInt::zero);
                }
                if w[p] < *range.end() {
                    w[p] += 1;
                    break;
                }
                w[p] = *range.start();
                p += 1;
            }
        }
    }

    fn gcd_of_minors(b: &Matrix) -> BigInt {
        let n = b.rows();
        let k = b.cols();
        let mut g = BigInt::zero();
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let rows: Vec<Vector> = idx.iter().map(|&i| b.row(i)).collect();
            let d = Matrix::from_rows(Z, &rows).unwrap().det().unwrap();
            g = num_integer::Integer::gcd(&g, d.coefficients().0);
            let mut p = k;
            loop {
                if p == 0 {
                    return g;
                }
                p -= 1;
                if idx[p] < n - k + p {
                    idx[p] += 1;
                    for q in p + 1..k {
                        idx[q] = idx[q - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn small_int_matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = Matrix> {
        prop::collection::vec(-bound..=bound, rows * cols).prop_map(move |xs| {
            let data = xs.into_iter().map(|x| RingElement::from_int(Z, x)).collect();
            Matrix::new(Z, rows, cols, data).unwrap()
        })
    }

    fn gauss_matrix(n: usize, bound: i64) -> impl Strategy<Value = Matrix> {
        prop::collection::vec((-bound..=bound, -bound..=bound), n * n).prop_map(move |xs| {
            let data = xs.into_iter().map(|(a, b)| zi(a, b)).collect();
            Matrix::new(ZI, n, n, data).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn det_is_multiplicative(a in small_int_matrix(4, 4, 6), b in small_int_matrix(4, 4, 6)) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }

        #[test]
        fn gaussian_det_is_multiplicative(a in gauss_matrix(3, 4), b in gauss_matrix(3, 4)) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }

        #[test]
        fn smith_contract(rows in 1usize..=6, cols in 1usize..=6, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let data = (0..rows * cols).map(|_| z(rng.gen_range(-9..=9))).collect();
            let m = Matrix::new(Z, rows, cols, data).unwrap();
            let s = smith_normal_form(&m);
            prop_assert!(s.u.is_unimodular());
            prop_assert!(s.v.is_unimodular());
            prop_assert_eq!(s.u.mul(&s.u_inv).unwrap(), Matrix::identity(Z, rows));
            prop_assert_eq!(s.v.mul(&s.v_inv).unwrap(), Matrix::identity(Z, cols));
            let d = s.u.mul(&m).unwrap().mul(&s.v).unwrap();
            prop_assert!(d.is_diagonal());
            prop_assert_eq!(&d, &s.diagonal);
            for (t, x) in s.divisors.iter().enumerate() {
                prop_assert_eq!(d.get(t, t), x);
                prop_assert_eq!(x, &x.canonical());
            }
            for w in s.divisors.windows(2) {
                prop_assert!(w[0].divides(&w[1]));
            }
            prop_assert_eq!(s.divisors.len(), m.rank());
        }

        #[test]
        fn index_is_norm_of_det(m in small_int_matrix(4, 4, 7)) {
            let d = m.det().unwrap();
            prop_assert_eq!(Lattice::new(m).index(), d.norm());
        }

        #[test]
        fn gaussian_index_is_norm_of_det(m in gauss_matrix(3, 3)) {
            let d = m.det().unwrap();
            prop_assert_eq!(Lattice::new(m).index(), d.norm());
        }

        #[test]
        fn index_matches_minor_gcd(m in small_int_matrix(5, 3, 5)) {
            let idx = Lattice::new(m.clone()).index();
            let g = gcd_of_minors(&m);
            prop_assert_eq!(idx, g);
        }

        #[test]
        fn index_matches_basis_completion(m in small_int_matrix(3, 2, 2)) {
            prop_assume!(m.rank() == 2);
            let idx = Lattice::new(m.clone()).index();
            prop_assert_eq!(idx, index_by_completion(&m));
        }

        #[test]
        fn saturation_has_index_one(m in small_int_matrix(5, 2, 9)) {
            prop_assume!(m.rank() == 2);
            let (basis, coords) = saturate(&m).unwrap();
            prop_assert_eq!(Lattice::new(basis.clone()).index(), BigInt::one());
            prop_assert_eq!(basis.mul(&coords).unwrap(), m.clone());
            prop_assert_eq!(coords.det().unwrap().norm(), Lattice::new(m).index());
        }
    }
}
