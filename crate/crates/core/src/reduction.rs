//! Reduction of an arbitrary symbol to a signed sum of unimodular symbols.
//!
//! One pass on a symbol `m` of depth `d > 1`:
//!
//! 1. pick a candidate `x` for the column lattice and split `m = sum m_i`;
//! 2. for each term, move `v_i` to the first column, bring the base symbol to
//!    symplectic Hermite form `gamma m = t` with `t e1 = e1`;
//! 3. the middle columns of `m_i` factor as `W m'` with `m'` the central block
//!    of `t`; reduce `m'` in rank `2n - 2` and lift each piece back as
//!    `[e1 | W m'_a | x]`;
//! 4. saturate every middle column pair with the rank-two algorithm.
//!
//! Every term of the pass has depth at most `norm(<x, v_i>) < d`.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::building::{chain_sum, chains_equal, expand, expand_all, ChamberChain};
use crate::error::{Error, Result};
use crate::linalg::{make_primitive, saturate_pair, unit_vector, vec_comb, Matrix, Vector};
use crate::ring::RingElement;
use crate::subdivision::{find_candidate, subdivision_relation, Candidate};
use crate::symbol::{reduce_sl2, SignedRelation, Sl2Symbol, SymplecticSymbol};
use crate::symplectic::{symplectic_hnf, IndexName, SymplecticSpace};

/// The factorization of the middle columns of `m_1` through the link of `e1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkData {
    /// Upper triangular, first column `e1`.
    pub base: SymplecticSymbol,
    pub x: Vector,
    /// `<e1, x>`
    pub c: RingElement,
    /// Middle columns `x_1j` of `m_1`, `2n x (2n-2)`.
    pub big_x: Matrix,
    /// Columns `w_j = <e_j, x> e1 - <e1, x> e_j`, `2n x (2n-2)`.
    pub w: Matrix,
    /// Central block of `base`.
    pub m_prime: Matrix,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TraceLevel {
    Off,
    #[default]
    Steps,
    /// Steps plus the chamber chain of every relation.
    Full,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReduceOptions {
    pub trace: TraceLevel,
    /// Check chain equality after every pass, not only at the end.
    pub verify_steps: bool,
}

#[derive(Clone, Debug)]
pub enum TraceStep {
    /// Start of a pass over a symbol of the given depth.
    Pass { depth: BigInt, symbol: SymplecticSymbol },
    Candidate(Candidate),
    Relation { indices: Vec<IndexName>, relation: SignedRelation },
    /// Distinguished index of a relation term and the Hermite transform.
    Hnf { index: IndexName, gamma: Matrix },
    LinkRecursion { link: LinkData, sub: ReductionTrace },
    /// Middle pair `(p, pbar)` (0-based `p`) expanded by the rank-two
    /// algorithm; `transform` is the saturated basis of the pair.
    PairSaturation { pair: usize, transform: Matrix, terms: usize },
    BaseCase { input: Sl2Symbol, path: Vec<Sl2Symbol> },
    Chain { label: String, chain: ChamberChain },
}

#[derive(Clone, Debug, Default)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
    /// Maximum depth over the work list at the start of each round.
    pub round_depths: Vec<BigInt>,
}

impl ReductionTrace {
    fn push(&mut self, level: TraceLevel, step: impl FnOnce() -> TraceStep) {
        if level != TraceLevel::Off {
            self.steps.push(step());
        }
    }
}

static LINK_CALLS: AtomicU64 = AtomicU64::new(0);
static LINK_MISMATCHES: AtomicU64 = AtomicU64::new(0);

/// Process-wide `(build_link calls, factorization mismatches)`.
pub fn link_stats() -> (u64, u64) {
    (LINK_CALLS.load(Ordering::Relaxed), LINK_MISMATCHES.load(Ordering::Relaxed))
}

fn e1(space: &SymplecticSpace) -> Vector {
    unit_vector(space.ring, space.dim(), 0)
}

/// Builds `m_1`'s factorization for a base symbol with first column `e1`.
pub fn build_link(s: &SymplecticSymbol, x: &[RingElement]) -> Result<LinkData> {
    let space = s.space();
    let d = space.dim();
    if space.n < 2 {
        return Err(Error::Precondition("the link needs n >= 2".into()));
    }
    if x.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: x.len() });
    }
    let t = s.matrix();
    if s.column_at(0) != &e1(&space) || !t.is_upper_triangular() {
        return Err(Error::Precondition("base must be upper triangular with first column e1".into()));
    }
    let e = e1(&space);
    let c = space.pair(&e, x)?;
    if c.is_zero() {
        return Err(Error::InDx(1));
    }
    let mut big_x = Matrix::zeros(space.ring, d, d - 2);
    let mut w = Matrix::zeros(space.ring, d, d - 2);
    let x_e1 = space.pair(x, &e)?;
    for j in 1..d - 1 {
        let vj = s.column_at(j);
        // x_1j = <x, v_1> v_j - <x, v_j> v_1
        let col = vec_comb(&x_e1, vj, &-space.pair(x, vj)?, &e);
        big_x.set_column(j - 1, &col);
        let ej = unit_vector(space.ring, d, j);
        let wj = vec_comb(&space.pair(&ej, x)?, &e, &-&c, &ej);
        w.set_column(j - 1, &wj);
    }
    let m_prime = t.submatrix(1, d - 1, 1, d - 1);
    LINK_CALLS.fetch_add(1, Ordering::Relaxed);
    if w.mul(&m_prime)? != big_x {
        LINK_MISMATCHES.fetch_add(1, Ordering::Relaxed);
        return Err(Error::FactorizationMismatch);
    }
    Ok(LinkData { base: s.clone(), x: x.to_vec(), c, big_x, w, m_prime })
}

/// `[e1 | W m_a | x]` with the sign of the base.
pub fn lift_link_term(link: &LinkData, m_alpha_prime: &Matrix) -> Result<SymplecticSymbol> {
    let space = link.base.space();
    let d = space.dim();
    if m_alpha_prime.rows() != d - 2 || m_alpha_prime.cols() != d - 2 {
        return Err(Error::DimensionMismatch { expected: d - 2, found: m_alpha_prime.rows() });
    }
    let mid = link.w.mul(m_alpha_prime)?;
    let mut cols = Vec::with_capacity(d);
    cols.push(e1(&space));
    cols.extend(mid.columns());
    cols.push(link.x.clone());
    let s = SymplecticSymbol::from_parts(space, cols, link.base.sign())?;
    if !space.isotropy_condition(&s.matrix())? {
        return Err(Error::LiftNotIsotropic);
    }
    Ok(s)
}

/// Expands every middle pair `(p, pbar)`, `1 <= p < n`, of a lifted symbol by
/// the rank-two algorithm inside the saturation of the pair.
pub fn saturate_link_pairs(s: &SymplecticSymbol) -> Result<SignedRelation> {
    saturate_pairs_traced(s, &mut ReductionTrace::default(), TraceLevel::Off)
}

fn saturate_pairs_traced(
    s: &SymplecticSymbol,
    trace: &mut ReductionTrace,
    level: TraceLevel,
) -> Result<SignedRelation> {
    let space = s.space();
    let mut terms = vec![s.clone()];
    for p in 1..space.n {
        let pb = space.bar(p);
        let mut next = Vec::new();
        for t in &terms {
            let u = t.column_at(p);
            let u2 = t.column_at(pb);
            let sat = saturate_pair(u, u2)?;
            let (a, _) = make_primitive(&sat.coords.column(0))?;
            let (b, _) = make_primitive(&sat.coords.column(1))?;
            let basis = Matrix::from_columns(space.ring, &[sat.basis.0.clone(), sat.basis.1.clone()])?;
            let path = reduce_sl2(&Sl2Symbol::new(a, b, 1)?)?;
            let before = next.len();
            for piece in &path {
                let mut cols = t.columns().to_vec();
                cols[p] = basis.mul_vec(&piece.v)?;
                cols[pb] = basis.mul_vec(&piece.w)?;
                next.push(SymplecticSymbol::from_parts(space, cols, t.sign() * piece.sign)?);
            }
            trace.push(level, || TraceStep::PairSaturation {
                pair: p,
                transform: basis.clone(),
                terms: next.len() - before,
            });
        }
        terms = next;
    }
    SignedRelation::new(space, terms)
}

/// Moves the columns of `s` so that index `i` comes first; the chain class is
/// unchanged.
fn move_to_front(s: &SymplecticSymbol, i: IndexName) -> Result<SymplecticSymbol> {
    let k = i.base() - 1;
    let mut t = if i.is_barred() { s.swap_bar(k)? } else { s.clone() };
    if k != 0 {
        let mut tau: Vec<usize> = (0..s.n()).collect();
        tau.swap(0, k);
        t = t.permute_class(&tau)?;
    }
    Ok(t)
}

/// Multiset of signed normalized terms with opposite pairs cancelled, in
/// canonical order.
fn collect_terms(space: SymplecticSpace, terms: Vec<SymplecticSymbol>) -> Result<SignedRelation> {
    let mut counts: BTreeMap<Vec<Vector>, i64> = BTreeMap::new();
    for t in terms {
        let t = t.normalize()?;
        *counts.entry(t.columns().to_vec()).or_insert(0) += i64::from(t.sign());
    }
    let mut out = Vec::new();
    for (cols, k) in counts {
        let sign = if k < 0 { -1 } else { 1 };
        for _ in 0..k.unsigned_abs() {
            out.push(SymplecticSymbol::from_parts(space, cols.clone(), sign)?);
        }
    }
    let mut rel = SignedRelation::new(space, out)?;
    rel.sort_canonical();
    Ok(rel)
}

/// Rewrites `s` as a signed sum of unimodular symbols.
pub fn reduce(s: &SymplecticSymbol) -> Result<(SignedRelation, ReductionTrace)> {
    reduce_with(s, ReduceOptions::default())
}

pub fn reduce_with(s: &SymplecticSymbol, opts: ReduceOptions) -> Result<(SignedRelation, ReductionTrace)> {
    let space = s.space();
    if s.is_degenerate() {
        return Err(Error::Degenerate);
    }
    for (p, c) in s.columns().iter().enumerate() {
        if !crate::linalg::is_primitive(c)? {
            return Err(Error::NotPrimitive(IndexName::from_position(p, space.n).0));
        }
    }
    if !space.isotropy_condition(&s.matrix())? {
        return Err(Error::NotIsotropic);
    }
    let s = s.normalize()?;
    let mut trace = ReductionTrace::default();
    let level = opts.trace;

    if space.n == 1 {
        let input = Sl2Symbol::from_symbol(&s)?;
        let path = reduce_sl2(&input)?;
        trace.round_depths.push(s.depth()?);
        let terms = path.iter().map(|t| t.to_symbol()).collect::<Result<Vec<_>>>()?;
        trace.push(level, || TraceStep::BaseCase { input, path });
        return Ok((collect_terms(space, terms)?, trace));
    }

    let mut done = Vec::new();
    let mut work = vec![s.clone()];
    while !work.is_empty() {
        let mut round_max = BigInt::zero();
        let mut next = Vec::new();
        for m in work {
            let d = m.depth()?;
            if d > round_max {
                round_max = d.clone();
            }
            if d.is_one() {
                done.push(m);
                continue;
            }
            let children = reduction_pass(&m, &d, opts, &mut trace)?;
            next.extend(children);
        }
        if let Some(prev) = trace.round_depths.last() {
            if &round_max >= prev {
                return Err(Error::DepthNotDecreasing {
                    parent: prev.to_string(),
                    child: round_max.to_string(),
                });
            }
        }
        trace.round_depths.push(round_max);
        work = next;
    }
    let rel = collect_terms(space, done)?;
    if level == TraceLevel::Full {
        trace.steps.push(TraceStep::Chain { label: "output".into(), chain: expand_all(&rel.terms) });
    }
    Ok((rel, trace))
}

/// One pass on `m` of depth `d > 1`; every returned term is normalized and
/// has depth `< d`.
fn reduction_pass(
    m: &SymplecticSymbol,
    d: &BigInt,
    opts: ReduceOptions,
    trace: &mut ReductionTrace,
) -> Result<Vec<SymplecticSymbol>> {
    let space = m.space();
    let level = opts.trace;
    trace.push(level, || TraceStep::Pass { depth: d.clone(), symbol: m.clone() });
    let cand = find_candidate(m)?;
    let x = cand.x.clone();
    trace.push(level, || TraceStep::Candidate(cand));
    let rel = subdivision_relation(m, &x)?;
    trace.push(level, || TraceStep::Relation {
        indices: rel.indices.clone(),
        relation: rel.relation.clone(),
    });
    if level == TraceLevel::Full {
        let chain = chain_sum(rel.relation.terms.iter().map(expand));
        trace.steps.push(TraceStep::Chain { label: "relation".into(), chain });
    }

    let mut out = Vec::new();
    for &i in &rel.indices {
        let moved = move_to_front(m, i)?;
        let hnf = symplectic_hnf(&space, &moved.matrix())?;
        trace.push(level, || TraceStep::Hnf { index: i, gamma: hnf.gamma.clone() });
        let mut t = hnf.t.clone();
        let u_inv = t
            .get(0, 0)
            .unit_inverse()
            .ok_or_else(|| Error::Precondition("first column is not primitive".into()))?;
        t.col_scale(0, &u_inv);
        let base = SymplecticSymbol::new(space, t.columns(), moved.sign())?;
        let x_t = hnf.gamma.mul_vec(&x)?;
        let link = build_link(&base, &x_t)?;
        let c_norm = link.c.norm();
        if &c_norm >= d {
            return Err(Error::DepthNotDecreasing { parent: d.to_string(), child: c_norm.to_string() });
        }

        let sub_space = SymplecticSpace::new(space.n - 1, space.ring)?;
        let m_prime = SymplecticSymbol::from_matrix(sub_space, &link.m_prime, 1)?.normalize()?;
        let sub_opts = ReduceOptions { trace: level, verify_steps: opts.verify_steps };
        let (sub_rel, sub_trace) = reduce_with(&m_prime, sub_opts)?;

        let gamma_inv = space.sp_inverse(&hnf.gamma)?;
        let mut lifted_terms = Vec::new();
        for alpha in &sub_rel.terms {
            let lifted = lift_link_term(&link, &alpha.matrix())?;
            let lifted = lifted.with_sign(moved.sign() * alpha.sign());
            let bound = &c_norm * &c_norm;
            if space.pairing_depth(&lifted.matrix())? > bound {
                return Err(Error::DepthNotDecreasing {
                    parent: bound.to_string(),
                    child: space.pairing_depth(&lifted.matrix())?.to_string(),
                });
            }
            let sat = saturate_pairs_traced(&lifted, trace, level)?;
            for term in sat.terms {
                let back = term.transform(&gamma_inv)?.normalize()?;
                let bd = back.depth()?;
                if bd > c_norm {
                    return Err(Error::DepthNotDecreasing { parent: c_norm.to_string(), child: bd.to_string() });
                }
                lifted_terms.push(back);
            }
        }
        trace.push(level, || TraceStep::LinkRecursion { link, sub: sub_trace });
        out.extend(lifted_terms);
    }

    if opts.verify_steps && !chains_equal(&expand(m), &expand_all(&out)) {
        return Err(Error::ChainMismatch(format!("{m:?}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::expand_all;
    use crate::linalg::int_vector;
    use crate::ring::RingId;

    const Z: RingId = RingId::Integers;

    fn sp(n: usize) -> SymplecticSpace {
        SymplecticSpace::new(n, Z).unwrap()
    }

    fn sym(n: usize, cols: &[&[i64]]) -> SymplecticSymbol {
        SymplecticSymbol::new(sp(n), cols.iter().map(|c| int_vector(Z, c)).collect(), 1).unwrap()
    }

    fn check(s: &SymplecticSymbol) -> SignedRelation {
        let opts = ReduceOptions { trace: TraceLevel::Off, verify_steps: true };
        let (rel, trace) = reduce_with(s, opts).unwrap();
        for t in &rel.terms {
            assert!(t.is_unimodular().unwrap(), "{t:?}");
        }
        assert!(chains_equal(&expand(s), &expand_all(&rel.terms)));
        assert!(trace.round_depths.windows(2).all(|w| w[0] > w[1]));
        rel
    }

    #[test]
    fn identity_reduces_to_itself() {
        let s = SymplecticSymbol::identity(sp(2));
        let rel = check(&s);
        assert_eq!(rel.terms, vec![s]);
    }

    #[test]
    fn rank_two_example() {
        let s = sym(1, &[&[1, 0], &[2, 5]]);
        assert_eq!(check(&s).len(), 3);
    }

    #[test]
    fn depth_three_example() {
        let s = sym(2, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[1, 0, 0, 3]]);
        assert_eq!(s.depth().unwrap(), BigInt::from(3));
        let rel = check(&s);
        assert!(!rel.is_empty());
    }

    #[test]
    fn link_identity_example() {
        let s = SymplecticSymbol::identity(sp(2));
        let x = int_vector(Z, &[1, 1, 1, 1]);
        let link = build_link(&s, &x).unwrap();
        // w_j = <e_j, x> e1 - <e1, x> e_j with <e1, x> = 1, <e2, x> = 1, <e2bar, x> = -1
        let w = Matrix::from_i64(Z, &[&[1, -1], &[-1, 0], &[0, -1], &[0, 0]]);
        assert_eq!(link.w, w);
        assert_eq!(link.m_prime, Matrix::identity(Z, 2));
        assert_eq!(link.w.mul(&link.m_prime).unwrap(), link.big_x);
        let lifted = lift_link_term(&link, &Matrix::identity(Z, 2)).unwrap();
        let data = crate::subdivision::subdivision(&s, &x).unwrap();
        let m1 = crate::subdivision::m_i_columns(&data, IndexName(1)).unwrap();
        assert_eq!(lifted.columns(), &m1[..]);
    }

    #[test]
    fn link_with_unit_pairing() {
        let s = SymplecticSymbol::identity(sp(2));
        let x = int_vector(Z, &[0, 0, 0, 1]);
        let link = build_link(&s, &x).unwrap();
        assert!(link.c.is_unit());
        assert!(link.w.mul(&link.m_prime).unwrap() == link.big_x);
        let rel = saturate_link_pairs(&lift_link_term(&link, &link.m_prime).unwrap()).unwrap();
        for t in &rel.terms {
            assert!(t.normalize().unwrap().is_unimodular().unwrap());
        }
    }

    #[test]
    fn link_rejects_bad_base() {
        let s = sym(2, &[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        let x = int_vector(Z, &[1, 1, 1, 1]);
        assert!(matches!(build_link(&s, &x), Err(Error::Precondition(_))));
        let id = SymplecticSymbol::identity(sp(2));
        assert_eq!(build_link(&id, &int_vector(Z, &[1, 0, 0, 0])), Err(Error::InDx(1)));
    }

    #[test]
    fn saturated_pairs_are_untouched() {
        let s = SymplecticSymbol::identity(sp(3));
        let rel = saturate_link_pairs(&s).unwrap();
        assert_eq!(rel.terms, vec![s]);
    }
}
