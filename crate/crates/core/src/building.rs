//! Chamber chains in the building of isotropic flags.
//!
//! A symbol expands to a signed sum of chambers, one per ordered isotropic
//! tuple of column indices. Identities between symbols are checked by
//! comparing these chains exactly.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::linalg::{make_primitive, Matrix, Vector};
use crate::ring::RingElement;
use crate::symbol::SymplecticSymbol;
use crate::symplectic::{bar_pos, SymplecticSpace};

/// A subspace stored by its canonical basis: the reduced echelon form scaled
/// to primitive integral rows whose pivots are canonical associates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    rows: Vec<Vector>,
}

impl Subspace {
    /// `None` if the vectors are dependent.
    pub fn span(vectors: &[Vector]) -> Option<Subspace> {
        let mut rows: Vec<Vector> = vectors.to_vec();
        let k = rows.len();
        let width = rows.first()?.len();
        let mut r = 0;
        for c in 0..width {
            if r == k {
                break;
            }
            let Some(p) = (r..k).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(p, r);
            let piv = rows[r][c].clone();
            for i in 0..k {
                if i == r || rows[i][c].is_zero() {
                    continue;
                }
                let f = rows[i][c].clone();
                let new: Vector = rows[i].iter().zip(&rows[r]).map(|(a, b)| &piv * a - &f * b).collect();
                rows[i] = make_primitive(&new).map(|(v, _)| v).unwrap_or(new);
            }
            r += 1;
        }
        if r < k {
            return None;
        }
        for row in rows.iter_mut() {
            let (p, _) = make_primitive(row).ok()?;
            let lead = p.iter().find(|a| !a.is_zero())?;
            let (_, u) = lead.canonical_associate();
            *row = p.iter().map(|a| &u * a).collect();
        }
        Some(Subspace { rows })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    /// Basis over the fraction field with pivots equal to one.
    pub fn to_field_rref(&self) -> Vec<Vec<crate::ring::FieldElement>> {
        self.rows
            .iter()
            .map(|row| {
                let lead = row.iter().find(|a| !a.is_zero()).expect("nonzero row").clone();
                row.iter()
                    .map(|a| crate::ring::FieldElement::new(a.clone(), lead.clone()).expect("nonzero pivot"))
                    .collect()
            })
            .collect()
    }

    pub fn is_isotropic(&self, space: &SymplecticSpace) -> bool {
        self.rows.iter().enumerate().all(|(i, a)| {
            self.rows[i + 1..].iter().all(|b| space.pair(a, b).map_or(false, |x| x.is_zero()))
        })
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let mut all = self.rows.clone();
        all.extend(other.rows.iter().cloned());
        let ring = self.rows[0][0].ring();
        Matrix::from_rows(ring, &all).map_or(false, |m| m.rank() == self.dim())
    }

    pub fn transform(&self, g: &Matrix) -> Option<Subspace> {
        let imgs: Vec<Vector> = self.rows.iter().map(|r| g.mul_vec(r).ok()).collect::<Option<_>>()?;
        Subspace::span(&imgs)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{r:?}")?;
        }
        write!(f, ">")
    }
}

/// A flag `F_1 < F_2 < ... ` of subspaces of dimensions `1, 2, ...`.
pub type Chamber = Vec<Subspace>;

/// Finitely supported integer combination of chambers (or, for boundaries,
/// of shorter flags).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ChamberChain {
    entries: BTreeMap<Chamber, i64>,
}

impl ChamberChain {
    pub fn new() -> Self {
        ChamberChain::default()
    }

    pub fn add_term(&mut self, c: Chamber, k: i64) {
        use std::collections::btree_map::Entry;
        if k == 0 {
            return;
        }
        match self.entries.entry(c) {
            Entry::Vacant(e) => {
                e.insert(k);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().checked_add(k).expect("chain coefficient overflow");
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&mut self, other: &ChamberChain) {
        for (c, k) in &other.entries {
            self.add_term(c.clone(), *k);
        }
    }

    pub fn neg(&self) -> ChamberChain {
        ChamberChain { entries: self.entries.iter().map(|(c, k)| (c.clone(), -k)).collect() }
    }

    pub fn sub(&self, other: &ChamberChain) -> ChamberChain {
        let mut r = self.clone();
        r.add(&other.neg());
        r
    }

    pub fn entries(&self) -> &BTreeMap<Chamber, i64> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn coefficient(&self, c: &Chamber) -> i64 {
        self.entries.get(c).copied().unwrap_or(0)
    }

    /// Image under `g` acting on every subspace.
    pub fn transform(&self, g: &Matrix) -> ChamberChain {
        let mut out = ChamberChain::new();
        for (c, k) in &self.entries {
            let img: Chamber = c.iter().map(|s| s.transform(g).expect("g is invertible")).collect();
            out.add_term(img, *k);
        }
        out
    }

    /// Chambers whose flag contains `v`.
    pub fn star(&self, v: &Subspace) -> ChamberChain {
        ChamberChain {
            entries: self.entries.iter().filter(|(c, _)| c.contains(v)).map(|(c, k)| (c.clone(), *k)).collect(),
        }
    }
}

impl fmt::Debug for ChamberChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(c, k)| (k, c))).finish()
    }
}

/// Sign of the permutation given as a list of distinct integers.
fn perm_sign(v: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                s = -s;
            }
        }
    }
    s
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Orientation of the ordered tuple with underlying values `sigma` and the
/// given barred flags: `sgn(sigma) * (-1)^{#barred}`.
pub fn orientation(sigma: &[usize], barred: &[bool]) -> i64 {
    let b = barred.iter().filter(|x| **x).count();
    perm_sign(sigma) * if b % 2 == 0 { 1 } else { -1 }
}

/// Chamber chain of a symbol; empty for a degenerate symbol.
pub fn expand(s: &SymplecticSymbol) -> ChamberChain {
    let mut chain = ChamberChain::new();
    if s.is_degenerate() {
        return chain;
    }
    let n = s.n();
    let mut cache: HashMap<u64, Option<Subspace>> = HashMap::new();
    let mut span_of = |mask: u64| -> Option<Subspace> {
        cache
            .entry(mask)
            .or_insert_with(|| {
                let vs: Vec<Vector> = (0..2 * n).filter(|p| mask >> p & 1 == 1).map(|p| s.column_at(p).clone()).collect();
                Subspace::span(&vs)
            })
            .clone()
    };
    let sign = s.sign() as i64;
    for sigma in permutations(n) {
        for bits in 0u32..(1 << n) {
            let barred: Vec<bool> = (0..n).map(|k| bits >> k & 1 == 1).collect();
            let mut mask = 0u64;
            let mut flag = Vec::with_capacity(n);
            let mut ok = true;
            for k in 0..n {
                let p = if barred[k] { bar_pos(sigma[k], n) } else { sigma[k] };
                mask |= 1 << p;
                match span_of(mask) {
                    Some(f) => flag.push(f),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                chain.add_term(flag, sign * orientation(&sigma, &barred));
            }
        }
    }
    chain
}

/// Simplicial boundary (faces drop one subspace, sign `(-1)^k`); for flags
/// of length one the augmentation is used.
pub fn boundary(c: &ChamberChain) -> ChamberChain {
    let mut out = ChamberChain::new();
    for (flag, k) in c.entries() {
        if flag.len() <= 1 {
            out.add_term(Vec::new(), *k);
            continue;
        }
        for d in 0..flag.len() {
            let mut face = flag.clone();
            face.remove(d);
            out.add_term(face, if d % 2 == 0 { *k } else { -*k });
        }
    }
    out
}

pub fn boundary_is_zero(c: &ChamberChain) -> bool {
    boundary(c).is_empty()
}

pub fn chains_equal(a: &ChamberChain, b: &ChamberChain) -> bool {
    a == b
}

pub fn chain_sum(chains: impl IntoIterator<Item = ChamberChain>) -> ChamberChain {
    let mut out = ChamberChain::new();
    for c in chains {
        out.add(&c);
    }
    out
}

/// Sum of the expansions of a list of symbols.
pub fn expand_all<'a>(terms: impl IntoIterator<Item = &'a SymplecticSymbol>) -> ChamberChain {
    chain_sum(terms.into_iter().map(expand))
}

/// The line through a column, as a vertex of the building.
pub fn vertex(v: &[RingElement]) -> Option<Subspace> {
    Subspace::span(&[v.to_vec()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vector;
    use crate::ring::RingId;
    use crate::symplectic::SymplecticSpace;

    const Z: RingId = RingId::Integers;

    fn sp(n: usize) -> SymplecticSpace {
        SymplecticSpace::new(n, Z).unwrap()
    }

    #[test]
    fn canonical_subspaces() {
        let a = Subspace::span(&[int_vector(Z, &[2, 4, 0]), int_vector(Z, &[0, 1, 1])]).unwrap();
        let b = Subspace::span(&[int_vector(Z, &[1, 3, 1]), int_vector(Z, &[-3, -5, 1])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[int_vector(Z, &[1, 0, -2]), int_vector(Z, &[0, 1, 1])]);
        assert!(Subspace::span(&[int_vector(Z, &[1, 2]), int_vector(Z, &[2, 4])]).is_none());
        let l = Subspace::span(&[int_vector(Z, &[-3, 0, 6])]).unwrap();
        assert_eq!(l.basis(), &[int_vector(Z, &[1, 0, -2])]);
        assert!(a.contains_subspace(&l));
    }

    #[test]
    fn chamber_counts() {
        for (n, count) in [(1, 2), (2, 8), (3, 48)] {
            let c = expand(&SymplecticSymbol::identity(sp(n)));
            assert_eq!(c.len(), count);
            assert!(c.entries().values().all(|k| k.abs() == 1));
            assert!(boundary_is_zero(&c));
        }
    }

    #[test]
    fn n1_chain_is_difference_of_points() {
        let c = expand(&SymplecticSymbol::identity(sp(1)));
        let e1 = vertex(&int_vector(Z, &[1, 0])).unwrap();
        let e1bar = vertex(&int_vector(Z, &[0, 1])).unwrap();
        assert_eq!(c.coefficient(&vec![e1]), 1);
        assert_eq!(c.coefficient(&vec![e1bar]), -1);
    }

    #[test]
    fn single_chamber_is_not_a_cycle() {
        let c = expand(&SymplecticSymbol::identity(sp(2)));
        let (first, k) = c.entries().iter().next().unwrap();
        let mut one = ChamberChain::new();
        one.add_term(first.clone(), *k);
        assert!(!boundary_is_zero(&one));
    }

    #[test]
    fn degenerate_symbols_expand_to_zero() {
        let s = SymplecticSymbol::new(
            sp(2),
            vec![int_vector(Z, &[1, 0, 0, 0]), int_vector(Z, &[0, 1, 0, 0]), int_vector(Z, &[0, 0, 1, 0]), int_vector(Z, &[1, 0, 0, 0])],
            1,
        )
        .unwrap();
        assert!(expand(&s).is_empty());
    }

    #[test]
    fn chain_is_scale_invariant() {
        let cols = vec![
            int_vector(Z, &[1, 0, 0, 0]),
            int_vector(Z, &[0, 1, 0, 0]),
            int_vector(Z, &[0, 0, 1, 0]),
            int_vector(Z, &[1, 0, 0, 3]),
        ];
        let s = SymplecticSymbol::new(sp(2), cols.clone(), 1).unwrap();
        let scaled: Vec<Vector> = cols
            .iter()
            .zip([2, -3, 5, 7])
            .map(|(c, k)| crate::linalg::vec_scale(&RingElement::from_int(Z, k), c))
            .collect();
        let t = SymplecticSymbol::new(sp(2), scaled, 1).unwrap();
        assert!(chains_equal(&expand(&s), &expand(&t)));
        assert!(chains_equal(&expand(&s.clone().negated()), &expand(&s).neg()));
    }

    #[test]
    fn transform_matches_expansion() {
        let s = sp(2);
        let g = crate::symplectic::SpOp::T2 { i: 0, k: 1, a: RingElement::from_int(Z, 2) }.matrix(&s);
        let sym = SymplecticSymbol::identity(s);
        let a = expand(&sym).transform(&g);
        let b = expand(&sym.transform(&g).unwrap());
        assert!(chains_equal(&a, &b));
    }
}
