//! Candidates and the subdivision relation.
//!
//! For a symbol with columns `v_i` and a vector `x`, the points
//! `x_ij = <x, v_i> v_j - <x, v_j> v_i` and the set `D_x` of indices with
//! `<x, v_i> = 0` determine symbols `m_i` (`i` outside `D_x`): column `ibar`
//! is replaced by `x` and every other column `j != i` by `x_ij`. The base
//! symbol equals the sum of the `m_i` as a chamber chain.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{cramer, make_primitive, saturate, unit_vector, vec_comb, Matrix, Vector};
use crate::ring::{FieldElement, RingElement};
use crate::symbol::{SignedRelation, SymplecticSymbol};
use crate::symplectic::{is_isotropic_set, IndexName, SymplecticSpace};

/// A primitive `x = sum q_i v_i` with `0 <= norm(q_i) < 1`, such that
/// replacing any single column by `x` strictly lowers the index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub x: Vector,
    /// `q_i` by column position.
    pub coefficients: Vec<FieldElement>,
    /// Index of the columns with column `i` replaced by `x`.
    pub witness_indices: Vec<BigInt>,
    /// Index of the input columns.
    pub index: BigInt,
    /// The lattice vector outside the column span used in the construction.
    pub w: Vector,
    pub alpha: Vec<RingElement>,
    pub beta: Vec<RingElement>,
    /// Content removed from `w - sum alpha_i v_i`.
    pub content: RingElement,
}

/// Candidate for a square nonsingular set of columns.
///
/// The first standard basis vector outside the column lattice `L` is taken as
/// `w`; `e_k` lies in `L` iff every Cramer numerator `det A_i[e_k]` is
/// divisible by `det A`.
pub fn find_candidate_columns(cols: &[Vector]) -> Result<Candidate> {
    let ring = cols.first().ok_or(Error::ZeroVector)?[0].ring();
    let a = Matrix::from_columns(ring, cols)?;
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    let d = a.det()?;
    if d.is_zero() {
        return Err(Error::Degenerate);
    }
    let index = d.norm();
    if index.is_one() {
        return Err(Error::IndexOne);
    }
    let dim = a.rows();
    let mut chosen = None;
    for k in 0..dim {
        let e = unit_vector(ring, dim, k);
        let (nums, _) = cramer(&a, &e)?;
        if !nums.iter().all(|x| d.divides(x)) {
            chosen = Some((e, nums));
            break;
        }
    }
    let (w, nums) = chosen.expect("a lattice of index > 1 misses some standard basis vector");
    let mut alpha = Vec::with_capacity(dim);
    let mut beta = Vec::with_capacity(dim);
    for num in &nums {
        let (q, r) = num.div_rem(&d)?;
        alpha.push(q);
        beta.push(r);
    }
    let mut x = w.clone();
    for (al, v) in alpha.iter().zip(cols) {
        x = vec_comb(&RingElement::one(ring), &x, &-al, v);
    }
    let (x, g) = make_primitive(&x)?;
    let gd = &g * &d;
    let coefficients = beta
        .iter()
        .map(|b| FieldElement::new(b.clone(), gd.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut witness_indices = Vec::with_capacity(dim);
    for (i, b) in beta.iter().enumerate() {
        let mut ai = a.clone();
        ai.set_column(i, &x);
        let wi = ai.det()?;
        debug_assert_eq!(Some(wi.clone()), b.div_exact(&g));
        witness_indices.push(wi.norm());
    }
    Ok(Candidate { x, coefficients, witness_indices, index, w, alpha, beta, content: g })
}

/// Candidate for `k` independent columns in `O^N`, `k <= N`: the columns are
/// expressed in a basis of their saturation, a candidate is built there and
/// mapped back.
pub fn find_candidate_partial(cols: &[Vector]) -> Result<Candidate> {
    let ring = cols.first().ok_or(Error::ZeroVector)?[0].ring();
    let m = Matrix::from_columns(ring, cols)?;
    if m.is_square() {
        return find_candidate_columns(cols);
    }
    let (basis, coords) = saturate(&m)?;
    let inner = find_candidate_columns(&coords.columns())?;
    let x = basis.mul_vec(&inner.x)?;
    let w = basis.mul_vec(&inner.w)?;
    Ok(Candidate { x, w, ..inner })
}

/// Candidate for the columns of a nondegenerate symbol.
pub fn find_candidate(s: &SymplecticSymbol) -> Result<Candidate> {
    if s.is_degenerate() {
        return Err(Error::Degenerate);
    }
    find_candidate_columns(s.columns())
}

/// `x`, `D_x` and the points `x_ij` for a symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionData {
    pub base: SymplecticSymbol,
    pub x: Vector,
    /// `<x, v_i>` by position.
    pub pairings: Vec<RingElement>,
    pub d_x: BTreeSet<IndexName>,
    /// Raw `x_ij` for `i != j`, `j != ibar`, not both in `D_x`.
    pub points: BTreeMap<(IndexName, IndexName), Vector>,
    /// Primitive parts of the same points.
    pub stripped: BTreeMap<(IndexName, IndexName), Vector>,
}

impl SubdivisionData {
    pub fn space(&self) -> SymplecticSpace {
        self.base.space()
    }

    pub fn pairing(&self, i: IndexName) -> &RingElement {
        &self.pairings[i.position(self.base.n())]
    }

    pub fn in_dx(&self, i: IndexName) -> bool {
        self.d_x.contains(&i)
    }

    /// `<x, v_i> v_j - <x, v_j> v_i`
    pub fn raw_point(&self, i: IndexName, j: IndexName) -> Vector {
        vec_comb(self.pairing(i), self.base.column(j), &-self.pairing(j), self.base.column(i))
    }

    /// Indices outside `D_x`, in order.
    pub fn active_indices(&self) -> Vec<IndexName> {
        IndexName::all(self.base.n()).filter(|i| !self.in_dx(*i)).collect()
    }
}

pub fn subdivision(s: &SymplecticSymbol, x: &[RingElement]) -> Result<SubdivisionData> {
    let space = s.space();
    if x.len() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: x.len() });
    }
    if crate::linalg::is_zero_vector(x) {
        return Err(Error::ZeroVector);
    }
    if s.is_degenerate() {
        return Err(Error::Degenerate);
    }
    let n = space.n;
    let pairings = s
        .columns()
        .iter()
        .map(|v| space.pair(x, v))
        .collect::<Result<Vec<_>>>()?;
    let d_x: BTreeSet<IndexName> = IndexName::all(n)
        .filter(|i| pairings[i.position(n)].is_zero())
        .collect();
    let mut data = SubdivisionData {
        base: s.clone(),
        x: x.to_vec(),
        pairings,
        d_x,
        points: BTreeMap::new(),
        stripped: BTreeMap::new(),
    };
    for i in IndexName::all(n) {
        for j in IndexName::all(n) {
            if i == j || j == i.bar() || (data.in_dx(i) && data.in_dx(j)) {
                continue;
            }
            let p = data.raw_point(i, j);
            let (q, _) = make_primitive(&p)?;
            data.points.insert((i, j), p);
            data.stripped.insert((i, j), q);
        }
    }
    Ok(data)
}

/// Columns of `m_i` before content stripping.
pub fn m_i_columns(data: &SubdivisionData, i: IndexName) -> Result<Vec<Vector>> {
    let n = data.base.n();
    IndexName::new(i.0, n)?;
    if data.in_dx(i) {
        return Err(Error::InDx(i.0));
    }
    let mut cols = data.base.columns().to_vec();
    for j in IndexName::all(n) {
        let p = j.position(n);
        if j == i {
            continue;
        } else if j == i.bar() {
            cols[p] = data.x.clone();
        } else {
            cols[p] = data.points[&(i, j)].clone();
        }
    }
    Ok(cols)
}

/// The symbol `m_i`, normalized; it may be degenerate.
pub fn make_m_i(data: &SubdivisionData, i: IndexName) -> Result<SymplecticSymbol> {
    let cols = m_i_columns(data, i)?;
    SymplecticSymbol::new(data.space(), cols, data.base.sign())?.normalize()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionRelation {
    /// The nonzero `m_i`, in index order.
    pub relation: SignedRelation,
    /// Index `i` of each term of `relation`.
    pub indices: Vec<IndexName>,
    /// Indices whose `m_i` is degenerate and was dropped.
    pub degenerate: Vec<IndexName>,
    pub data: SubdivisionData,
}

/// `[m] = sum_{i not in D_x} [m_i]`, with zero terms dropped.
pub fn subdivision_relation(s: &SymplecticSymbol, x: &[RingElement]) -> Result<SubdivisionRelation> {
    let data = subdivision(s, x)?;
    let mut terms = Vec::new();
    let mut indices = Vec::new();
    let mut degenerate = Vec::new();
    for i in data.active_indices() {
        let m = make_m_i(&data, i)?;
        if m.is_degenerate() {
            degenerate.push(i);
        } else {
            terms.push(m);
            indices.push(i);
        }
    }
    Ok(SubdivisionRelation {
        relation: SignedRelation::new(s.space(), terms)?,
        indices,
        degenerate,
        data,
    })
}

/// Checks `<x,v_k> x_ij = <x,v_j> x_ik - <x,v_i> x_jk` on raw points.
pub fn check_collinearity(data: &SubdivisionData, i: IndexName, j: IndexName, k: IndexName) -> Result<bool> {
    let n = data.base.n();
    for t in [i, j, k] {
        IndexName::new(t.0, n)?;
    }
    let set: BTreeSet<IndexName> = [i, j, k].into_iter().collect();
    if set.len() != 3 || !is_isotropic_set(&set) {
        return Err(Error::Precondition("indices must be distinct and isotropic".into()));
    }
    if set.iter().filter(|t| data.in_dx(**t)).count() > 1 {
        return Err(Error::Precondition("at most one index may lie in D_x".into()));
    }
    let xij = data.raw_point(i, j);
    let xik = data.raw_point(i, k);
    let xjk = data.raw_point(j, k);
    let lhs: Vector = xij.iter().map(|a| data.pairing(k) * a).collect();
    let rhs = vec_comb(data.pairing(j), &xik, &-data.pairing(i), &xjk);
    Ok(lhs == rhs)
}
