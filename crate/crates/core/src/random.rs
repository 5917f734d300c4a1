//! Seeded random instances.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_zero_vector, make_primitive, vec_comb, zero_vector, Matrix, Vector};
use crate::ring::{gcd, RingElement, RingId};
use crate::symbol::SymplecticSymbol;
use crate::symplectic::{IndexName, SpOp, SymplecticSpace};

const MAX_TRIES: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RandomMode {
    SpMember,
    IsotropyMatrix,
    DeepSymbol,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub ring: RingId,
    pub n: usize,
    /// Maximum entry norm.
    pub entry_bound: u64,
    pub seed: u64,
    pub mode: RandomMode,
    /// Maximum depth for `deep-symbol`; defaults to `entry_bound`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth_bound: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RandomInstance {
    Matrix(Matrix),
    Symbol(SymplecticSymbol),
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_instance(spec: &RandomSpec) -> Result<RandomInstance> {
    let space = SymplecticSpace::new(spec.n, spec.ring)?;
    let mut rng = rng_from_seed(spec.seed);
    let bound = BigInt::from(spec.entry_bound);
    match spec.mode {
        RandomMode::SpMember => Ok(RandomInstance::Matrix(random_sp_member(&space, &bound, &mut rng)?)),
        RandomMode::IsotropyMatrix => {
            Ok(RandomInstance::Matrix(random_isotropy_matrix(&space, &bound, &mut rng)?))
        }
        RandomMode::DeepSymbol => {
            let depth = BigInt::from(spec.depth_bound.unwrap_or(spec.entry_bound));
            Ok(RandomInstance::Symbol(random_deep_symbol(&space, &bound, &depth, &mut rng)?))
        }
    }
}

/// `a + b w` with `|a|, |b| <= r` (`b = 0` over `Z`).
pub fn random_element<R: Rng>(ring: RingId, r: i64, rng: &mut R) -> RingElement {
    let a = rng.gen_range(-r..=r);
    let b = if ring == RingId::Integers { 0 } else { rng.gen_range(-r..=r) };
    RingElement::from_pair(ring, a, b)
}

fn random_nonzero<R: Rng>(ring: RingId, r: i64, rng: &mut R) -> RingElement {
    loop {
        let x = random_element(ring, r, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn random_vector<R: Rng>(ring: RingId, len: usize, r: i64, rng: &mut R) -> Vector {
    (0..len).map(|_| random_element(ring, r, rng)).collect()
}

fn random_op<R: Rng>(space: &SymplecticSpace, rng: &mut R) -> SpOp {
    let n = space.n;
    let a = random_nonzero(space.ring, 2, rng);
    let pick_pair = |rng: &mut R| {
        let i = rng.gen_range(0..n);
        let mut k = rng.gen_range(0..n - 1);
        if k >= i {
            k += 1;
        }
        (i, k)
    };
    let kinds = if n == 1 { 2 } else { 5 };
    match rng.gen_range(0..kinds) {
        0 => SpOp::T1 { p: rng.gen_range(0..space.dim()), a },
        1 => SpOp::P1 { p: rng.gen_range(0..n) },
        2 => {
            let (i, k) = pick_pair(rng);
            SpOp::T2 { i, k, a }
        }
        3 => {
            let (i, k) = pick_pair(rng);
            SpOp::T3 { i, k, a, lower: rng.gen() }
        }
        _ => {
            let (i, k) = pick_pair(rng);
            SpOp::P2 { i, k }
        }
    }
}

fn within(m: &Matrix, bound: &BigInt) -> bool {
    &m.max_norm() <= bound
}

/// A product of random elementary symplectic operations with entry norms at
/// most `bound`.
pub fn random_sp_member<R: Rng>(space: &SymplecticSpace, bound: &BigInt, rng: &mut R) -> Result<Matrix> {
    for _ in 0..MAX_TRIES {
        let len = rng.gen_range(1..=4 * space.n);
        let mut g = Matrix::identity(space.ring, space.dim());
        for _ in 0..len {
            random_op(space, rng).apply(&mut g, space.n);
        }
        if within(&g, bound) {
            return Ok(g);
        }
    }
    Err(Error::BoundTooSmall(bound.try_into().unwrap_or(u64::MAX)))
}

/// `g * diag(P_1, ..., P_n)` with `P_k` a random nonsingular `2 x 2` block
/// acting on columns `(k, kbar)`; the columns need not be primitive.
pub fn random_isotropy_matrix<R: Rng>(space: &SymplecticSpace, bound: &BigInt, rng: &mut R) -> Result<Matrix> {
    for _ in 0..MAX_TRIES {
        let g = random_sp_member(space, bound, rng)?;
        let mut cols = g.columns();
        for k in 0..space.n {
            let kb = space.bar(k);
            let [a, b, c, d] = loop {
                let e: [RingElement; 4] = std::array::from_fn(|_| random_element(space.ring, 3, rng));
                if !(&e[0] * &e[3] - &e[1] * &e[2]).is_zero() {
                    break e;
                }
            };
            let (u, w) = (cols[k].clone(), cols[kb].clone());
            cols[k] = vec_comb(&a, &u, &c, &w);
            cols[kb] = vec_comb(&b, &u, &d, &w);
        }
        let m = Matrix::from_columns(space.ring, &cols)?;
        if within(&m, bound) {
            return Ok(m);
        }
    }
    Err(Error::BoundTooSmall(bound.try_into().unwrap_or(u64::MAX)))
}

/// An `Sp` member whose column pairs are deepened by
/// `v_kbar <- c v_kbar + d v_k` with `gcd(c, d) = 1`, so columns stay
/// primitive and `<v_k, v_kbar>` becomes `c`. Depth is in `2..=depth_bound`.
pub fn random_deep_symbol<R: Rng>(
    space: &SymplecticSpace,
    bound: &BigInt,
    depth_bound: &BigInt,
    rng: &mut R,
) -> Result<SymplecticSymbol> {
    let r = coefficient_range(space.ring, depth_bound);
    for _ in 0..MAX_TRIES {
        let g = random_sp_member(space, bound, rng)?;
        let mut cols = g.columns();
        for k in 0..space.n {
            let kb = space.bar(k);
            let c = random_nonzero(space.ring, r, rng);
            if &c.norm() > depth_bound {
                continue;
            }
            let d = random_element(space.ring, r.max(1) * 2, rng);
            if !gcd(&c, &d)?.is_one() {
                continue;
            }
            cols[kb] = vec_comb(&c, &cols[kb], &d, &cols[k]);
        }
        if rng.gen_bool(0.5) {
            let k = rng.gen_range(0..space.n);
            let kb = space.bar(k);
            cols.swap(k, kb);
        }
        let m = Matrix::from_columns(space.ring, &cols)?;
        if !within(&m, bound) {
            continue;
        }
        let s = SymplecticSymbol::from_matrix(*space, &m, 1)?;
        let depth = s.depth()?;
        if depth > BigInt::one() && &depth <= depth_bound {
            return Ok(s);
        }
    }
    Err(Error::BoundTooSmall(bound.try_into().unwrap_or(u64::MAX)))
}

/// Coefficient range whose elements reach norms up to about `b`.
fn coefficient_range(ring: RingId, b: &BigInt) -> i64 {
    let v: i64 = b.try_into().unwrap_or(i64::MAX);
    if ring == RingId::Integers {
        return v.max(1);
    }
    let mut r = 1;
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r.max(1)
}

/// A primitive `x = sum q_j v_j` with `D_x` equal to `dx`: `q_j = 0` exactly
/// for `j` in `bar(dx)`. `dx` must miss at least one index.
pub fn random_point_with_dx<R: Rng>(
    s: &SymplecticSymbol,
    dx: &BTreeSet<IndexName>,
    r: i64,
    rng: &mut R,
) -> Result<Vector> {
    let space = s.space();
    if dx.len() >= space.dim() {
        return Err(Error::Precondition("D_x must miss some index".into()));
    }
    let mut x = zero_vector(space.ring, space.dim());
    for j in IndexName::all(space.n) {
        if dx.contains(&j.bar()) {
            continue;
        }
        let q = random_nonzero(space.ring, r, rng);
        x = vec_comb(&RingElement::one(space.ring), &x, &q, s.column(j));
    }
    debug_assert!(!is_zero_vector(&x));
    Ok(make_primitive(&x)?.0)
}

/// A random isotropic index set of size `k <= n`.
pub fn random_isotropic_set<R: Rng>(n: usize, k: usize, rng: &mut R) -> BTreeSet<IndexName> {
    let mut bases: Vec<usize> = (1..=n).collect();
    bases.shuffle(rng);
    bases[..k]
        .iter()
        .map(|&b| if rng.gen() { IndexName(b as i32) } else { IndexName(-(b as i32)) })
        .collect()
}

/// A random set containing at least one pair `{k, kbar}`, of size below `2n`.
pub fn random_bar_closed_set<R: Rng>(n: usize, rng: &mut R) -> BTreeSet<IndexName> {
    let k = rng.gen_range(1..=n) as i32;
    let mut set: BTreeSet<IndexName> = [IndexName(k), IndexName(-k)].into_iter().collect();
    for i in IndexName::all(n) {
        if set.len() + 1 < 2 * n && rng.gen_bool(0.3) {
            set.insert(i);
        }
    }
    set
}

/// `dim` random primitive columns whose lattice is full rank with index > 1.
pub fn random_lattice_columns<R: Rng>(ring: RingId, dim: usize, r: i64, rng: &mut R) -> Result<Vec<Vector>> {
    for _ in 0..MAX_TRIES {
        let cols: Vec<Vector> = (0..dim).map(|_| random_vector(ring, dim, r, rng)).collect();
        if cols.iter().any(|c| is_zero_vector(c)) {
            continue;
        }
        let prim = cols.iter().map(|c| make_primitive(c).map(|p| p.0)).collect::<Result<Vec<_>>>()?;
        let d = Matrix::from_columns(ring, &prim)?.det()?;
        if !d.is_zero() && !d.is_unit() {
            return Ok(prim);
        }
    }
    Err(Error::BoundTooSmall(r as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(mode: RandomMode, seed: u64) -> RandomSpec {
        RandomSpec { ring: RingId::Integers, n: 2, entry_bound: 20, seed, mode, depth_bound: None }
    }

    #[test]
    fn determinism() {
        for mode in [RandomMode::SpMember, RandomMode::IsotropyMatrix, RandomMode::DeepSymbol] {
            assert_eq!(random_instance(&spec(mode, 7)).unwrap(), random_instance(&spec(mode, 7)).unwrap());
        }
    }

    #[test]
    fn modes_have_their_properties() {
        for ring in RingId::ALL {
            for n in 1..=3 {
                let space = SymplecticSpace::new(n, ring).unwrap();
                for seed in 0..20 {
                    let mut s = RandomSpec { ring, n, entry_bound: 30, seed, mode: RandomMode::SpMember, depth_bound: None };
                    let RandomInstance::Matrix(g) = random_instance(&s).unwrap() else { panic!() };
                    assert!(space.is_sp_member(&g).unwrap());
                    assert!(g.max_norm() <= BigInt::from(30));
                    s.mode = RandomMode::IsotropyMatrix;
                    let RandomInstance::Matrix(m) = random_instance(&s).unwrap() else { panic!() };
                    assert!(space.isotropy_condition(&m).unwrap());
                    assert!(!m.det().unwrap().is_zero());
                    s.mode = RandomMode::DeepSymbol;
                    let RandomInstance::Symbol(d) = random_instance(&s).unwrap() else { panic!() };
                    assert!(d.depth().unwrap() > BigInt::one());
                }
            }
        }
    }

    #[test]
    fn tiny_bound_is_reported() {
        let s = RandomSpec { ring: RingId::Integers, n: 2, entry_bound: 1, seed: 0, mode: RandomMode::DeepSymbol, depth_bound: Some(1) };
        assert_eq!(random_instance(&s), Err(Error::BoundTooSmall(1)));
    }

    #[test]
    fn prescribed_dx() {
        let mut rng = rng_from_seed(3);
        let s = SymplecticSymbol::identity(SymplecticSpace::new(3, RingId::Integers).unwrap());
        for k in 0..=3 {
            let dx = random_isotropic_set(3, k, &mut rng);
            let x = random_point_with_dx(&s, &dx, 5, &mut rng).unwrap();
            let data = crate::subdivision::subdivision(&s, &x).unwrap();
            assert_eq!(data.d_x, dx);
        }
        let dx = random_bar_closed_set(3, &mut rng);
        let x = random_point_with_dx(&s, &dx, 5, &mut rng).unwrap();
        assert_eq!(crate::subdivision::subdivision(&s, &x).unwrap().d_x, dx);
    }
}
