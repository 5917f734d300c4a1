//! Symplectic modular symbols and the rank-two base case.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{canonical_vector, is_zero_vector, make_primitive, vec_scale, Matrix, Vector};
use crate::ring::{xgcd, RingElement, RingId};
use crate::subdivision::find_candidate_columns;
use crate::symplectic::{IndexName, SymplecticSpace};

/// `2n` columns in the order `1, ..., n, nbar, ..., 1bar` and a sign.
///
/// Columns with a linear dependency make a valid but zero symbol; see
/// [`SymplecticSymbol::is_degenerate`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymplecticSymbol {
    space: SymplecticSpace,
    columns: Vec<Vector>,
    sign: i8,
}

impl SymplecticSymbol {
    /// Checks shape, ring, nonzero columns and the isotropy condition.
    pub fn new(space: SymplecticSpace, columns: Vec<Vector>, sign: i8) -> Result<Self> {
        let s = Self::from_parts(space, columns, sign)?;
        if let Some((p, q)) = space.isotropy_violation(&s.matrix())? {
            return Err(Error::IsotropyViolated(
                IndexName::from_position(p, space.n).0,
                IndexName::from_position(q, space.n).0,
            ));
        }
        Ok(s)
    }

    /// Shape checks only.
    pub(crate) fn from_parts(space: SymplecticSpace, columns: Vec<Vector>, sign: i8) -> Result<Self> {
        let d = space.dim();
        if columns.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: columns.len() });
        }
        if sign != 1 && sign != -1 {
            return Err(Error::Precondition(format!("sign must be +1 or -1, got {sign}")));
        }
        for (p, c) in columns.iter().enumerate() {
            if c.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: c.len() });
            }
            if let Some(x) = c.iter().find(|x| x.ring() != space.ring) {
                return Err(Error::RingMismatch(space.ring.to_string(), x.ring().to_string()));
            }
            if is_zero_vector(c) {
                return Err(Error::ZeroColumn(IndexName::from_position(p, space.n).0));
            }
        }
        Ok(SymplecticSymbol { space, columns, sign })
    }

    pub fn from_matrix(space: SymplecticSpace, m: &Matrix, sign: i8) -> Result<Self> {
        Self::new(space, m.columns(), sign)
    }

    /// The symbol of the identity matrix.
    pub fn identity(space: SymplecticSpace) -> Self {
        Self::from_matrix(space, &Matrix::identity(space.ring, space.dim()), 1)
            .expect("identity satisfies the isotropy condition")
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    pub fn n(&self) -> usize {
        self.space.n
    }

    pub fn ring(&self) -> RingId {
        self.space.ring
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn columns(&self) -> &[Vector] {
        &self.columns
    }

    /// Column at position `p` (0-based).
    pub fn column_at(&self, p: usize) -> &Vector {
        &self.columns[p]
    }

    pub fn column(&self, i: IndexName) -> &Vector {
        &self.columns[i.position(self.space.n)]
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(self.space.ring, &self.columns).expect("square by construction")
    }

    pub fn with_sign(mut self, sign: i8) -> Self {
        self.sign = sign;
        self
    }

    pub fn negated(mut self) -> Self {
        self.sign = -self.sign;
        self
    }

    pub fn is_degenerate(&self) -> bool {
        self.matrix().det().map_or(true, |d| d.is_zero())
    }

    /// Primitive columns, each scaled so its first nonzero entry is a
    /// canonical associate.
    pub fn normalize(&self) -> Result<Self> {
        let mut cols = Vec::with_capacity(self.columns.len());
        for c in &self.columns {
            let (p, _) = make_primitive(c)?;
            cols.push(canonical_vector(&p));
        }
        Ok(SymplecticSymbol { space: self.space, columns: cols, sign: self.sign })
    }

    pub fn is_normalized(&self) -> bool {
        self.normalize().map_or(false, |s| s.columns == self.columns)
    }

    /// Moves column pairs: the new columns `k`, `kbar` are the old columns
    /// `tau[k]`, `tau[k]bar` (0-based). The sign is unchanged.
    pub fn permute(&self, tau: &[usize]) -> Result<Self> {
        let n = self.space.n;
        let mut seen = vec![false; n];
        if tau.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: tau.len() });
        }
        for &t in tau {
            if t >= n || seen[t] {
                return Err(Error::Precondition("not a permutation".into()));
            }
            seen[t] = true;
        }
        let mut cols = self.columns.clone();
        for k in 0..n {
            cols[k] = self.columns[tau[k]].clone();
            cols[self.space.bar(k)] = self.columns[self.space.bar(tau[k])].clone();
        }
        Ok(SymplecticSymbol { space: self.space, columns: cols, sign: self.sign })
    }

    /// `permute` followed by multiplying the sign by `sgn(tau)`. Moving column
    /// pairs reorders the coordinate axes of the apartment, so only this
    /// version represents the same chamber chain as `self`.
    pub fn permute_class(&self, tau: &[usize]) -> Result<Self> {
        let p = self.permute(tau)?;
        let s = permutation_sign(tau);
        Ok(SymplecticSymbol { sign: p.sign * s, ..p })
    }

    /// Exchanges columns `k` and `kbar` (0-based `k < n`) and negates the sign.
    pub fn swap_bar(&self, k: usize) -> Result<Self> {
        if k >= self.space.n {
            return Err(Error::BadIndex { index: k as i32 + 1, n: self.space.n });
        }
        let mut cols = self.columns.clone();
        cols.swap(k, self.space.bar(k));
        Ok(SymplecticSymbol { space: self.space, columns: cols, sign: -self.sign })
    }

    pub fn depth(&self) -> Result<BigInt> {
        self.space.depth(&self.matrix())
    }

    /// The rescaled member of `Sp_{2n}(O)` if the symbol is unimodular:
    /// column `kbar` is divided by the unit `<v_k, v_kbar>`.
    pub fn unimodular_form(&self) -> Result<Option<Matrix>> {
        if self.is_degenerate() {
            return Err(Error::Degenerate);
        }
        let n = self.space.n;
        let mut cols = self.columns.clone();
        for k in 0..n {
            let kb = self.space.bar(k);
            let c = self.space.pair(&cols[k], &cols[kb])?;
            match c.unit_inverse() {
                Some(u) => cols[kb] = vec_scale(&u, &cols[kb]),
                None => return Ok(None),
            }
        }
        let g = Matrix::from_columns(self.space.ring, &cols)?;
        if !self.space.is_sp_member(&g)? {
            return Ok(None);
        }
        Ok(Some(g))
    }

    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.unimodular_form()?.is_some())
    }

    /// `g * s`, columnwise.
    pub fn transform(&self, g: &Matrix) -> Result<Self> {
        let cols = self.columns.iter().map(|c| g.mul_vec(c)).collect::<Result<Vec<_>>>()?;
        Self::from_parts(self.space, cols, self.sign)
    }

    /// Ordering used for canonical relation output.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.columns.cmp(&other.columns).then(self.sign.cmp(&other.sign))
    }
}

impl fmt::Debug for SymplecticSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "+" };
        write!(f, "{sign}[")?;
        for (p, c) in self.columns.iter().enumerate() {
            if p == self.space.n {
                write!(f, "; ")?;
            } else if p > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "]")
    }
}

/// A formal sum of signed symbols in one space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedRelation {
    pub space: SymplecticSpace,
    pub terms: Vec<SymplecticSymbol>,
}

impl SignedRelation {
    pub fn new(space: SymplecticSpace, terms: Vec<SymplecticSymbol>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.space != space) {
            return Err(Error::Precondition(format!(
                "term in space n={} {} inside relation over n={} {}",
                t.space.n, t.space.ring, space.n, space.ring
            )));
        }
        Ok(SignedRelation { space, terms })
    }

    pub fn empty(space: SymplecticSpace) -> Self {
        SignedRelation { space, terms: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sorts terms by their normalized columns.
    pub fn sort_canonical(&mut self) {
        self.terms.sort_by(|a, b| a.canonical_cmp(b));
    }
}

/// A rank-two symbol `[v, w]` with a sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sl2Symbol {
    pub v: Vector,
    pub w: Vector,
    pub sign: i8,
}

impl Sl2Symbol {
    pub fn new(v: Vector, w: Vector, sign: i8) -> Result<Self> {
        for x in [&v, &w] {
            if x.len() != 2 {
                return Err(Error::DimensionMismatch { expected: 2, found: x.len() });
            }
        }
        if v[0].ring() != w[0].ring() {
            return Err(Error::RingMismatch(v[0].ring().to_string(), w[0].ring().to_string()));
        }
        Ok(Sl2Symbol { v, w, sign })
    }

    pub fn ring(&self) -> RingId {
        self.v[0].ring()
    }

    pub fn det(&self) -> RingElement {
        &self.v[0] * &self.w[1] - &self.v[1] * &self.w[0]
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().is_unit()
    }

    pub fn to_symbol(&self) -> Result<SymplecticSymbol> {
        let space = SymplecticSpace::new(1, self.ring())?;
        SymplecticSymbol::new(space, vec![self.v.clone(), self.w.clone()], self.sign)
    }

    pub fn from_symbol(s: &SymplecticSymbol) -> Result<Self> {
        if s.n() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: s.n() });
        }
        Sl2Symbol::new(s.columns[0].clone(), s.columns[1].clone(), s.sign)
    }
}

/// Rewrites `[v, w]` as a path of unimodular symbols from the line of `v` to
/// the line of `w`, by repeatedly inserting a candidate `x` and splitting
/// `[v, w] = [v, x] + [x, w]`.
pub fn reduce_sl2(s: &Sl2Symbol) -> Result<Vec<Sl2Symbol>> {
    for (c, name) in [(&s.v, 1), (&s.w, -1)] {
        if !crate::linalg::is_primitive(c)? {
            return Err(Error::NotPrimitive(name));
        }
    }
    if s.det().is_zero() {
        return Err(Error::Dependent);
    }
    let mut out = Vec::new();
    // explicit stack; the right half is pushed first so output follows the path
    let mut stack = vec![s.clone()];
    while let Some(t) = stack.pop() {
        let d = t.det();
        if d.is_unit() {
            out.push(t);
            continue;
        }
        let x = sl2_candidate(&t.v, &t.w)?;
        let left = Sl2Symbol { v: t.v.clone(), w: x.clone(), sign: t.sign };
        let right = Sl2Symbol { v: x, w: t.w.clone(), sign: t.sign };
        for half in [&right, &left] {
            let hd = half.det();
            if hd.is_zero() {
                continue;
            }
            if hd.norm() >= d.norm() {
                return Err(Error::DepthNotDecreasing {
                    parent: d.to_string(),
                    child: hd.to_string(),
                });
            }
        }
        if !right.det().is_zero() {
            stack.push(right);
        }
        if !left.det().is_zero() {
            stack.push(left);
        }
    }
    debug_assert!(out.iter().all(|t| t.det().is_unit()));
    Ok(out)
}

/// Candidate for `[v, w]` computed in the frame where `v = e1`.
fn sl2_candidate(v: &Vector, w: &Vector) -> Result<Vector> {
    let (g, s, t) = xgcd(&v[0], &v[1])?;
    if !g.is_one() {
        return Err(Error::NotPrimitive(1));
    }
    // gamma = [[s, t], [-v1, v0]] has det 1 and gamma v = e1
    let gamma = Matrix::new(
        v[0].ring(),
        2,
        2,
        vec![s.clone(), t.clone(), -&v[1], v[0].clone()],
    )?;
    let e1 = crate::linalg::unit_vector(v[0].ring(), 2, 0);
    let w1 = gamma.mul_vec(w)?;
    let cand = find_candidate_columns(&[e1, w1])?;
    // gamma^{-1} = [[v0, -t], [v1, s]]
    let inv = Matrix::new(v[0].ring(), 2, 2, vec![v[0].clone(), -&t, v[1].clone(), s])?;
    let x = inv.mul_vec(&cand.x)?;
    debug_assert!(gamma.mul(&inv)?.is_unimodular());
    Ok(canonical_vector(&x))
}

/// Sign of a permutation of `0..n` given by its images.
pub fn permutation_sign(tau: &[usize]) -> i8 {
    let mut s = 1;
    for i in 0..tau.len() {
        for j in i + 1..tau.len() {
            if tau[i] > tau[j] {
                s = -s;
            }
        }
    }
    s
}

/// Norm of the pairing `<v_k, v_kbar>` for each `k`.
pub fn pair_norms(s: &SymplecticSymbol) -> Result<Vec<BigInt>> {
    (0..s.n())
        .map(|k| Ok(s.space.pair(&s.columns[k], &s.columns[s.space.bar(k)])?.norm()))
        .collect()
}
