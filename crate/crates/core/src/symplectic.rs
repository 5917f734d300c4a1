//! The standard symplectic structure on `K^{2n}`.
//!
//! Coordinates are numbered by positions `0..2n`; position `p` carries the
//! index name `p + 1` for `p < n` and the barred name `2n - p` otherwise, so
//! the order `1 < ... < n < nbar < ... < 1bar` is position order and
//! `bar(p) = 2n - 1 - p`. The pairing is
//! `<v, w> = sum_{p < n} (v_p w_{bar p} - v_{bar p} w_p)`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_zero_vector, Matrix};
use crate::ring::{RingElement, RingId};

/// An element of `<n>±`, encoded as `+k` for `k` and `-k` for `kbar`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexName(pub i32);

impl IndexName {
    pub fn new(value: i32, n: usize) -> Result<Self> {
        if value == 0 || value.unsigned_abs() as usize > n {
            return Err(Error::BadIndex { index: value, n });
        }
        Ok(IndexName(value))
    }

    pub fn from_position(p: usize, n: usize) -> Self {
        assert!(p < 2 * n);
        if p < n {
            IndexName(p as i32 + 1)
        } else {
            IndexName(-((2 * n - p) as i32))
        }
    }

    pub fn position(self, n: usize) -> usize {
        if self.0 > 0 {
            self.0 as usize - 1
        } else {
            2 * n - (-self.0) as usize
        }
    }

    pub fn bar(self) -> Self {
        IndexName(-self.0)
    }

    pub fn is_barred(self) -> bool {
        self.0 < 0
    }

    /// The underlying `k` in `1..=n`.
    pub fn base(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn all(n: usize) -> impl Iterator<Item = IndexName> {
        (0..2 * n).map(move |p| IndexName::from_position(p, n))
    }
}

impl Ord for IndexName {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0 < 0, self.0).cmp(&(other.0 < 0, other.0))
    }
}

impl PartialOrd for IndexName {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IndexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 > 0 {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{}bar", -self.0)
        }
    }
}

/// Position of the partner coordinate.
pub fn bar_pos(p: usize, n: usize) -> usize {
    2 * n - 1 - p
}

/// A sorted set of index names with no pair `{i, ibar}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IsotropicIndexSet {
    members: BTreeSet<IndexName>,
}

impl IsotropicIndexSet {
    pub fn new(members: impl IntoIterator<Item = IndexName>, n: usize) -> Result<Self> {
        let members: BTreeSet<IndexName> = members.into_iter().collect();
        if members.is_empty() || members.len() > n {
            return Err(Error::NotIsotropic);
        }
        for i in &members {
            IndexName::new(i.0, n)?;
            if members.contains(&i.bar()) {
                return Err(Error::NotIsotropic);
            }
        }
        Ok(IsotropicIndexSet { members })
    }

    pub fn members(&self) -> &BTreeSet<IndexName> {
        &self.members
    }

    pub fn contains(&self, i: IndexName) -> bool {
        self.members.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `true` iff no two members are partners.
pub fn is_isotropic_set<'a>(members: impl IntoIterator<Item = &'a IndexName>) -> bool {
    let s: BTreeSet<IndexName> = members.into_iter().copied().collect();
    s.iter().all(|i| !s.contains(&i.bar()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymplecticSpace {
    pub n: usize,
    pub ring: RingId,
}

impl SymplecticSpace {
    pub fn new(n: usize, ring: RingId) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("n must be positive".into()));
        }
        Ok(SymplecticSpace { n, ring })
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn bar(&self, p: usize) -> usize {
        bar_pos(p, self.n)
    }

    /// `J[p][bar p] = 1` for `p < n`, `-1` otherwise.
    pub fn gram(&self) -> Matrix {
        let d = self.dim();
        let mut j = Matrix::zeros(self.ring, d, d);
        for p in 0..d {
            let s = if p < self.n { 1 } else { -1 };
            j.set(p, self.bar(p), RingElement::from_int(self.ring, s));
        }
        j
    }

    pub fn pair(&self, v: &[RingElement], w: &[RingElement]) -> Result<RingElement> {
        let d = self.dim();
        for x in [v, w] {
            if x.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: x.len() });
            }
        }
        let mut acc = RingElement::zero(self.ring);
        for p in 0..self.n {
            let pb = self.bar(p);
            acc = acc + &v[p] * &w[pb] - &v[pb] * &w[p];
        }
        Ok(acc)
    }

    fn check_square(&self, m: &Matrix) -> Result<()> {
        let d = self.dim();
        if m.rows() != d {
            return Err(Error::DimensionMismatch { expected: d, found: m.rows() });
        }
        if m.cols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: m.cols() });
        }
        Ok(())
    }

    /// `g^T J g = J`.
    pub fn is_sp_member(&self, g: &Matrix) -> Result<bool> {
        self.check_square(g)?;
        let j = self.gram();
        Ok(g.transpose().mul(&j)?.mul(g)? == j)
    }

    /// `g^{-1} = -J g^T J` for `g` in `Sp`.
    pub fn sp_inverse(&self, g: &Matrix) -> Result<Matrix> {
        self.check_square(g)?;
        let j = self.gram();
        Ok(j.mul(&g.transpose())?.mul(&j)?.neg())
    }

    /// Pairwise check of `<v_i, v_j> = 0` for `j != i, ibar`.
    pub fn isotropy_condition(&self, m: &Matrix) -> Result<bool> {
        Ok(self.isotropy_violation(m)?.is_none())
    }

    /// First pair of positions violating the isotropy condition.
    pub fn isotropy_violation(&self, m: &Matrix) -> Result<Option<(usize, usize)>> {
        self.check_square(m)?;
        let cols = m.columns();
        for (p, c) in cols.iter().enumerate() {
            if is_zero_vector(c) {
                return Err(Error::ZeroColumn(IndexName::from_position(p, self.n).0));
            }
        }
        for p in 0..cols.len() {
            for q in p + 1..cols.len() {
                if q != self.bar(p) && !self.pair(&cols[p], &cols[q])?.is_zero() {
                    return Ok(Some((p, q)));
                }
            }
        }
        Ok(None)
    }

    /// `max_{i <= n} norm(<v_i, v_ibar>)`, after checking primitivity,
    /// isotropy and independence of the columns.
    pub fn depth(&self, m: &Matrix) -> Result<BigInt> {
        self.check_square(m)?;
        for (p, c) in m.columns().iter().enumerate() {
            if !crate::linalg::is_primitive(c)
                .map_err(|_| Error::ZeroColumn(IndexName::from_position(p, self.n).0))?
            {
                return Err(Error::NotPrimitive(IndexName::from_position(p, self.n).0));
            }
        }
        if let Some((p, q)) = self.isotropy_violation(m)? {
            return Err(Error::IsotropyViolated(
                IndexName::from_position(p, self.n).0,
                IndexName::from_position(q, self.n).0,
            ));
        }
        let d = self.pairing_depth(m)?;
        if d.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(d)
    }

    /// The depth formula without precondition checks; zero for a degenerate
    /// isotropy-condition matrix.
    pub fn pairing_depth(&self, m: &Matrix) -> Result<BigInt> {
        let mut best = BigInt::zero();
        for p in 0..self.n {
            let x = self.pair(&m.column(p), &m.column(self.bar(p)))?.norm();
            if x.is_zero() {
                return Ok(BigInt::zero());
            }
            if x > best {
                best = x;
            }
        }
        Ok(best)
    }
}

/// Elementary symplectic row operations. Positions are 0-based; `p`, `i`, `k`
/// in `T2`, `T3`, `P2` are below `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpOp {
    /// `r_p += a r_pbar`
    T1 { p: usize, a: RingElement },
    /// `r_i += a r_k`, `r_kbar -= a r_ibar`
    T2 { i: usize, k: usize, a: RingElement },
    /// upper: `r_i += a r_kbar`, `r_k += a r_ibar`;
    /// lower: `r_ibar += a r_k`, `r_kbar += a r_i`
    T3 { i: usize, k: usize, a: RingElement, lower: bool },
    /// `(r_p, r_pbar) <- (r_pbar, -r_p)`
    P1 { p: usize },
    /// swaps `r_i, r_k` and `r_ibar, r_kbar`
    P2 { i: usize, k: usize },
}

impl SpOp {
    /// Applies the operation to the rows of `m` (left multiplication).
    pub fn apply(&self, m: &mut Matrix, n: usize) {
        let b = |p: usize| bar_pos(p, n);
        match self {
            SpOp::T1 { p, a } => m.row_add(*p, b(*p), a),
            SpOp::T2 { i, k, a } => {
                m.row_add(*i, *k, a);
                m.row_add(b(*k), b(*i), &-a);
            }
            SpOp::T3 { i, k, a, lower: false } => {
                m.row_add(*i, b(*k), a);
                m.row_add(*k, b(*i), a);
            }
            SpOp::T3 { i, k, a, lower: true } => {
                m.row_add(b(*i), *k, a);
                m.row_add(b(*k), *i, a);
            }
            SpOp::P1 { p } => {
                let pb = b(*p);
                m.swap_rows(*p, pb);
                let minus = RingElement::from_int(m.ring(), -1);
                m.row_scale(pb, &minus);
            }
            SpOp::P2 { i, k } => {
                m.swap_rows(*i, *k);
                m.swap_rows(b(*i), b(*k));
            }
        }
    }

    pub fn matrix(&self, space: &SymplecticSpace) -> Matrix {
        let mut g = Matrix::identity(space.ring, space.dim());
        self.apply(&mut g, space.n);
        g
    }
}

#[derive(Clone, Debug)]
pub struct HnfResult {
    /// `gamma` in `Sp_{2n}(O)` with `t = gamma * m` upper triangular.
    pub gamma: Matrix,
    pub t: Matrix,
    pub ops: Vec<SpOp>,
}

/// Symplectic Hermite form: row-reduces `m` by elementary symplectic
/// operations to an upper triangular matrix.
///
/// Level `t` treats column `t`: first each row pair `(p, pbar)` with `p >= t`
/// is merged by a euclidean algorithm (T1, P1), then rows `t..n` are merged
/// into row `t` (T2, P2). Isotropy forces the remaining entries below the
/// diagonal to vanish. A column that becomes zero on the active rows
/// signals [`Error::HnfDegenerate`].
pub fn symplectic_hnf(space: &SymplecticSpace, m: &Matrix) -> Result<HnfResult> {
    let n = space.n;
    if m.rows() != space.dim() || m.cols() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: m.rows() });
    }
    let mut t = m.clone();
    let mut gamma = Matrix::identity(space.ring, space.dim());
    let mut ops = Vec::new();
    let run = |op: SpOp, t: &mut Matrix, gamma: &mut Matrix, ops: &mut Vec<SpOp>| {
        op.apply(t, n);
        op.apply(gamma, n);
        ops.push(op);
    };
    for lvl in 0..n {
        let c = lvl;
        for p in lvl..n {
            let pb = space.bar(p);
            while !t.get(pb, c).is_zero() {
                if !t.get(p, c).is_zero() {
                    let (q, _) = t.get(p, c).div_rem(t.get(pb, c))?;
                    if !q.is_zero() {
                        run(SpOp::T1 { p, a: -q }, &mut t, &mut gamma, &mut ops);
                    }
                }
                run(SpOp::P1 { p }, &mut t, &mut gamma, &mut ops);
            }
        }
        for k in lvl + 1..n {
            while !t.get(k, c).is_zero() {
                if !t.get(lvl, c).is_zero() {
                    let (q, _) = t.get(k, c).div_rem(t.get(lvl, c))?;
                    if !q.is_zero() {
                        run(SpOp::T2 { i: k, k: lvl, a: -q }, &mut t, &mut gamma, &mut ops);
                    }
                }
                if !t.get(k, c).is_zero() {
                    run(SpOp::P2 { i: lvl, k }, &mut t, &mut gamma, &mut ops);
                }
            }
        }
        if t.get(lvl, c).is_zero() {
            return Err(Error::HnfDegenerate(lvl));
        }
    }
    if !t.is_upper_triangular() {
        return Err(Error::Precondition("isotropy condition fails; no upper triangular form".into()));
    }
    Ok(HnfResult { gamma, t, ops })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vector;
    use rand::{Rng, SeedableRng};

    const Z: RingId = RingId::Integers;

    fn sp(n: usize) -> SymplecticSpace {
        SymplecticSpace::new(n, Z).unwrap()
    }

    fn e(n: usize, p: usize) -> Vec<RingElement> {
        crate::linalg::unit_vector(Z, 2 * n, p)
    }

    fn z(a: i64) -> RingElement {
        RingElement::from_int(Z, a)
    }

    fn depth3() -> Matrix {
        // columns e1, e2, e2bar, e1 + 3 e1bar
        Matrix::from_columns(
            Z,
            &[e(2, 0), e(2, 1), e(2, 2), int_vector(Z, &[1, 0, 0, 3])],
        )
        .unwrap()
    }

    #[test]
    fn index_names() {
        let n = 3;
        let names: Vec<_> = IndexName::all(n).collect();
        assert_eq!(names.iter().map(|i| i.0).collect::<Vec<_>>(), vec![1, 2, 3, -3, -2, -1]);
        assert!(names.windows(2).all(|w| w[0] < w[1]));
        for (p, i) in names.iter().enumerate() {
            assert_eq!(i.position(n), p);
            assert_eq!(i.bar().bar(), *i);
            assert_eq!(i.bar().position(n), bar_pos(p, n));
        }
        assert!(IndexName::new(4, 3).is_err());
        assert!(IndexName::new(0, 3).is_err());
        assert!(IsotropicIndexSet::new([IndexName(1), IndexName(-1)], 2).is_err());
        assert!(IsotropicIndexSet::new([IndexName(1), IndexName(-2)], 2).is_ok());
    }

    #[test]
    fn pairing_examples() {
        let s = sp(2);
        assert_eq!(s.pair(&e(2, 0), &e(2, 3)).unwrap(), z(1));
        assert_eq!(s.pair(&e(2, 3), &e(2, 0)).unwrap(), z(-1));
        assert_eq!(s.pair(&int_vector(Z, &[1, 1, 1, 1]), &e(2, 0)).unwrap(), z(-1));
        for i in 0..2 {
            assert_eq!(s.pair(&e(2, i), &e(2, s.bar(i))).unwrap(), z(1));
        }
        assert!(s.pair(&e(2, 0), &e(1, 0)).is_err());
    }

    #[test]
    fn gram_matrix_identities() {
        for n in 1..=3 {
            let s = sp(n);
            let j = s.gram();
            assert_eq!(j.transpose(), j.neg());
            assert_eq!(j.mul(&j).unwrap(), Matrix::identity(Z, 2 * n).neg());
        }
    }

    #[test]
    fn sp_membership_examples() {
        assert!(sp(2).is_sp_member(&Matrix::identity(Z, 4)).unwrap());
        assert!(sp(1).is_sp_member(&Matrix::from_i64(Z, &[&[1, 1], &[0, 1]])).unwrap());
        let d = Matrix::from_i64(Z, &[&[2, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(!sp(2).is_sp_member(&d).unwrap());
        assert!(sp(2).is_sp_member(&Matrix::identity(Z, 2)).is_err());
    }

    #[test]
    fn isotropy_examples() {
        let s = sp(2);
        assert!(s.isotropy_condition(&depth3()).unwrap());
        let bad = Matrix::from_columns(Z, &[e(2, 0), e(2, 3), e(2, 1), e(2, 2)]).unwrap();
        assert!(!s.isotropy_condition(&bad).unwrap());
        let zero = Matrix::from_columns(Z, &[e(2, 0), e(2, 1), e(2, 2), int_vector(Z, &[0; 4])]).unwrap();
        assert_eq!(s.isotropy_condition(&zero), Err(Error::ZeroColumn(-1)));
    }

    #[test]
    fn depth_examples() {
        let s = sp(2);
        assert_eq!(s.depth(&Matrix::identity(Z, 4)).unwrap(), BigInt::from(1));
        assert_eq!(s.depth(&depth3()).unwrap(), BigInt::from(3));
        let imprimitive = Matrix::from_columns(Z, &[e(2, 0), e(2, 1), e(2, 2), int_vector(Z, &[0, 0, 0, 2])]).unwrap();
        assert_eq!(s.depth(&imprimitive), Err(Error::NotPrimitive(-1)));
    }

    fn all_ops(n: usize) -> Vec<SpOp> {
        let mut ops = Vec::new();
        let a = z(3);
        for p in 0..2 * n {
            ops.push(SpOp::T1 { p, a: a.clone() });
        }
        for p in 0..n {
            ops.push(SpOp::P1 { p });
            for k in 0..n {
                if k != p {
                    ops.push(SpOp::T2 { i: p, k, a: a.clone() });
                    ops.push(SpOp::T3 { i: p, k, a: a.clone(), lower: false });
                    ops.push(SpOp::T3 { i: p, k, a: a.clone(), lower: true });
                    ops.push(SpOp::P2 { i: p, k });
                }
            }
        }
        ops
    }

    #[test]
    fn elementary_operations_are_symplectic() {
        for n in 1..=3 {
            let s = sp(n);
            for op in all_ops(n) {
                let g = op.matrix(&s);
                assert!(s.is_sp_member(&g).unwrap(), "{op:?}");
                let gi = s.sp_inverse(&g).unwrap();
                assert_eq!(g.mul(&gi).unwrap(), Matrix::identity(Z, 2 * n));
            }
        }
    }

    fn random_sp(s: &SymplecticSpace, rng: &mut impl Rng, steps: usize) -> Matrix {
        let ops = all_ops(s.n);
        let mut g = Matrix::identity(Z, s.dim());
        for _ in 0..steps {
            let mut op = ops[rng.gen_range(0..ops.len())].clone();
            let a = z(rng.gen_range(-2..=2));
            match &mut op {
                SpOp::T1 { a: x, .. } | SpOp::T2 { a: x, .. } | SpOp::T3 { a: x, .. } => *x = a,
                _ => {}
            }
            op.apply(&mut g, s.n);
        }
        g
    }

    #[test]
    fn sp_closed_under_products_and_inverses() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 1..=3 {
            let s = sp(n);
            for _ in 0..30 {
                let g = random_sp(&s, &mut rng, 8);
                let h = random_sp(&s, &mut rng, 8);
                assert!(s.is_sp_member(&g.mul(&h).unwrap()).unwrap());
                let gi = s.sp_inverse(&g).unwrap();
                assert!(s.is_sp_member(&gi).unwrap());
                assert_eq!(gi.mul(&g).unwrap(), Matrix::identity(Z, 2 * n));
                assert!(s.isotropy_condition(&g).unwrap());
                assert_eq!(s.depth(&g).unwrap(), BigInt::from(1));
                let m = g.mul(&depth_like(&s, &mut rng)).unwrap();
                assert!(s.isotropy_condition(&m).unwrap());
            }
        }
    }

    /// An isotropy-condition matrix: pairs `(e_k, e_kbar)` replaced by
    /// `(e_k, c e_kbar + d e_k)`.
    fn depth_like(s: &SymplecticSpace, rng: &mut impl Rng) -> Matrix {
        let mut m = Matrix::identity(Z, s.dim());
        for k in 0..s.n {
            m.set(k, s.bar(k), z(rng.gen_range(-3..=3)));
            m.set(s.bar(k), s.bar(k), z(rng.gen_range(1..=4)));
        }
        m
    }

    #[test]
    fn hnf_examples() {
        let s = sp(2);
        let u = depth3();
        let h = symplectic_hnf(&s, &u).unwrap();
        assert!(h.t.is_upper_triangular());
        assert_eq!(h.gamma, Matrix::identity(Z, 4));

        let p1 = SpOp::P1 { p: 0 }.matrix(&s);
        let m = p1.mul(&Matrix::identity(Z, 4)).unwrap();
        let h = symplectic_hnf(&s, &m).unwrap();
        assert!(h.t.is_upper_triangular());
        assert!(s.is_sp_member(&h.gamma).unwrap());
        assert_eq!(h.gamma.mul(&m).unwrap(), h.t);
    }

    #[test]
    fn hnf_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in 1..=3 {
            let s = sp(n);
            for _ in 0..40 {
                let g = random_sp(&s, &mut rng, 10);
                let m = g.mul(&depth_like(&s, &mut rng)).unwrap();
                let h = symplectic_hnf(&s, &m).unwrap();
                assert!(s.is_sp_member(&h.gamma).unwrap());
                assert_eq!(h.gamma.mul(&m).unwrap(), h.t);
                assert!(h.t.is_upper_triangular());
                assert!(s.isotropy_condition(&h.t).unwrap());
                let mut replay = Matrix::identity(Z, 2 * n);
                for op in &h.ops {
                    op.apply(&mut replay, n);
                }
                assert_eq!(replay, h.gamma);
            }
        }
    }

    #[test]
    fn hnf_signals_degenerate_input() {
        let s = sp(2);
        let m = Matrix::from_columns(Z, &[e(2, 0), e(2, 0), e(2, 2), e(2, 3)]).unwrap();
        assert_eq!(symplectic_hnf(&s, &m).unwrap_err(), Error::HnfDegenerate(1));
    }
}
