//! Euclidean rings of integers with a multiplicative norm.
//!
//! Three instances are supported: the rational integers, the Gaussian
//! integers `Z[i]` and the Eisenstein integers `Z[w]` with `w = e^{2 pi i/3}`.
//! An element is stored as a coefficient pair `(a, b)` meaning `a + b*theta`,
//! where `theta` is `0`, `i` or `w`; for `Z` the second coefficient is always
//! zero.
//!
//! Division with remainder returns the remainder of minimal norm. Ties are
//! broken by the smallest key `(|a|, a < 0, |b|, b < 0)`: magnitudes first,
//! signs last, positive before negative. For `Z` this gives `3 = 1*2 + 1`
//! rather than `2*2 - 1`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RingId {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "Z[i]")]
    GaussianIntegers,
    #[serde(rename = "Z[w]")]
    EisensteinIntegers,
}

impl RingId {
    pub const ALL: [RingId; 3] = [
        RingId::Integers,
        RingId::GaussianIntegers,
        RingId::EisensteinIntegers,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            RingId::Integers => "Z",
            RingId::GaussianIntegers => "Z[i]",
            RingId::EisensteinIntegers => "Z[w]",
        }
    }

    /// The unit group, in a fixed order.
    pub fn units(self) -> Vec<RingElement> {
        let pairs: &[(i64, i64)] = match self {
            RingId::Integers => &[(1, 0), (-1, 0)],
            RingId::GaussianIntegers => &[(1, 0), (0, 1), (-1, 0), (0, -1)],
            // 1, w, w^2 = -1 - w, and their negatives
            RingId::EisensteinIntegers => &[(1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)],
        };
        pairs
            .iter()
            .map(|&(a, b)| RingElement::from_pair(self, a, b))
            .collect()
    }
}

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for RingId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" => Ok(RingId::Integers),
            "Z[i]" => Ok(RingId::GaussianIntegers),
            "Z[w]" => Ok(RingId::EisensteinIntegers),
            other => Err(Error::UnknownRing(other.to_string())),
        }
    }
}

/// An element `a + b*theta` of one of the supported rings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    ring: RingId,
    a: BigInt,
    b: BigInt,
}

impl RingElement {
    /// Panics if `b != 0` for the integers.
    pub fn new(ring: RingId, a: BigInt, b: BigInt) -> Self {
        assert!(
            ring != RingId::Integers || b.is_zero(),
            "integer ring element with nonzero second coefficient"
        );
        RingElement { ring, a, b }
    }

    pub fn from_pair(ring: RingId, a: i64, b: i64) -> Self {
        RingElement::new(ring, BigInt::from(a), BigInt::from(b))
    }

    pub fn from_int(ring: RingId, a: i64) -> Self {
        RingElement::from_pair(ring, a, 0)
    }

    pub fn from_bigint(ring: RingId, a: BigInt) -> Self {
        RingElement::new(ring, a, BigInt::zero())
    }

    pub fn zero(ring: RingId) -> Self {
        RingElement::from_int(ring, 0)
    }

    pub fn one(ring: RingId) -> Self {
        RingElement::from_int(ring, 1)
    }

    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn coefficients(&self) -> (&BigInt, &BigInt) {
        (&self.a, &self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// The multiplicative norm: `|a|` on `Z`, `a^2 + b^2` on `Z[i]`,
    /// `a^2 - ab + b^2` on `Z[w]`.
    pub fn norm(&self) -> BigInt {
        match self.ring {
            RingId::Integers => self.a.abs(),
            RingId::GaussianIntegers => &self.a * &self.a + &self.b * &self.b,
            RingId::EisensteinIntegers => {
                &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
            }
        }
    }

    /// `x * conj(x)` as an integer (for `Z` this is `a^2`, not the norm).
    fn field_norm(&self) -> BigInt {
        match self.ring {
            RingId::Integers => &self.a * &self.a,
            _ => self.norm(),
        }
    }

    pub fn conj(&self) -> RingElement {
        match self.ring {
            RingId::Integers => self.clone(),
            RingId::GaussianIntegers => RingElement::new(self.ring, self.a.clone(), -&self.b),
            RingId::EisensteinIntegers => {
                RingElement::new(self.ring, &self.a - &self.b, -&self.b)
            }
        }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn scale_int(&self, k: &BigInt) -> RingElement {
        RingElement::new(self.ring, &self.a * k, &self.b * k)
    }

    /// Tie-break key for remainders of equal norm.
    fn tie_key(&self) -> (BigInt, bool, BigInt, bool) {
        (
            self.a.abs(),
            self.a.is_negative(),
            self.b.abs(),
            self.b.is_negative(),
        )
    }

    /// Euclidean division: `self = q*d + r` with `norm(r) < norm(d)` and `r`
    /// of minimal norm.
    pub fn div_rem(&self, d: &RingElement) -> Result<(RingElement, RingElement)> {
        check_same(self, d)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self * &d.conj();
        let den = d.field_norm();
        let fa = num.a.div_floor(&den);
        let fb = num.b.div_floor(&den);
        let b_steps: &[i64] = if self.ring == RingId::Integers { &[0] } else { &[0, 1] };
        let mut best: Option<(RingElement, RingElement, BigInt)> = None;
        for da in [0i64, 1] {
            for &db in b_steps {
                let q = RingElement::new(self.ring, &fa + da, &fb + db);
                let r = self - &(&q * d);
                let nr = r.norm();
                let better = match &best {
                    None => true,
                    Some((_, br, bn)) => match nr.cmp(bn) {
                        Ordering::Less => true,
                        Ordering::Equal => r.tie_key() < br.tie_key(),
                        Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((q, r, nr));
                }
            }
        }
        let (q, r, nr) = best.expect("at least one quotient candidate");
        debug_assert!(nr < d.norm());
        Ok((q, r))
    }

    /// `self / d` when the division is exact.
    pub fn div_exact(&self, d: &RingElement) -> Option<RingElement> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, x: &RingElement) -> bool {
        if self.is_zero() {
            return x.is_zero();
        }
        x.div_exact(self).is_some()
    }

    /// Returns `(c, u)` with `u` a unit and `c = u * self` the canonical
    /// associate: positive on `Z`; on `Z[i]` and `Z[w]` the associate in the
    /// cone `a > 0, 0 <= b` (resp. `0 <= b < a`).
    pub fn canonical_associate(&self) -> (RingElement, RingElement) {
        let one = RingElement::one(self.ring);
        if self.is_zero() {
            return (self.clone(), one);
        }
        for u in self.ring.units() {
            let c = &u * self;
            let in_cone = match self.ring {
                RingId::Integers => c.a.is_positive(),
                RingId::GaussianIntegers => c.a.is_positive() && !c.b.is_negative(),
                RingId::EisensteinIntegers => {
                    c.a.is_positive() && !c.b.is_negative() && c.b < c.a
                }
            };
            if in_cone {
                return (c, u);
            }
        }
        unreachable!("every nonzero element has an associate in the fundamental cone")
    }

    pub fn canonical(&self) -> RingElement {
        self.canonical_associate().0
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self) -> Option<RingElement> {
        if !self.is_unit() {
            return None;
        }
        RingElement::one(self.ring).div_exact(self)
    }
}

fn check_same(x: &RingElement, y: &RingElement) -> Result<()> {
    if x.ring != y.ring {
        return Err(Error::RingMismatch(x.ring.to_string(), y.ring.to_string()));
    }
    Ok(())
}

/// Greatest common divisor in canonical associate form.
pub fn gcd(x: &RingElement, y: &RingElement) -> Result<RingElement> {
    check_same(x, y)?;
    if x.is_zero() && y.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let (mut a, mut b) = (x.clone(), y.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r;
    }
    Ok(a.canonical())
}

/// Extended gcd: `(g, s, t)` with `s*x + t*y = g`, `g` canonical.
pub fn xgcd(x: &RingElement, y: &RingElement) -> Result<(RingElement, RingElement, RingElement)> {
    check_same(x, y)?;
    if x.is_zero() && y.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let ring = x.ring;
    let (mut r0, mut r1) = (x.clone(), y.clone());
    let (mut s0, mut s1) = (RingElement::one(ring), RingElement::zero(ring));
    let (mut t0, mut t1) = (RingElement::zero(ring), RingElement::one(ring));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1)?;
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let (g, u) = r0.canonical_associate();
    Ok((g, &u * &s0, &u * &t0))
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.ring {
            RingId::Integers => return write!(f, "{}", self.a),
            RingId::GaussianIntegers => "i",
            RingId::EisensteinIntegers => "w",
        };
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}{}", self.b, sym)
        } else if self.b.is_negative() {
            write!(f, "{}-{}{}", self.a, -&self.b, sym)
        } else {
            write!(f, "{}+{}{}", self.a, self.b, sym)
        }
    }
}

impl<'a> Add<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        debug_assert_eq!(self.ring, rhs.ring);
        RingElement { ring: self.ring, a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl<'a> Sub<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        debug_assert_eq!(self.ring, rhs.ring);
        RingElement { ring: self.ring, a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl<'a> Mul<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        debug_assert_eq!(self.ring, rhs.ring);
        let (a, b, c, d) = (&self.a, &self.b, &rhs.a, &rhs.b);
        match self.ring {
            RingId::Integers => RingElement { ring: self.ring, a: a * c, b: BigInt::zero() },
            RingId::GaussianIntegers => RingElement {
                ring: self.ring,
                a: a * c - b * d,
                b: a * d + b * c,
            },
            // w^2 = -1 - w
            RingId::EisensteinIntegers => {
                let bd = b * d;
                RingElement { ring: self.ring, a: a * c - &bd, b: a * d + b * c - bd }
            }
        }
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement { ring: self.ring, a: -&self.a, b: -&self.b }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RingElement> for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RingElement> for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: &RingElement) -> RingElement {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

/// An element of the fraction field, kept in lowest terms with a canonical
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    num: RingElement,
    den: RingElement,
}

impl FieldElement {
    pub fn new(num: RingElement, den: RingElement) -> Result<Self> {
        check_same(&num, &den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            let ring = num.ring;
            return Ok(FieldElement { num, den: RingElement::one(ring) });
        }
        let g = gcd(&num, &den)?;
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        let (den, u) = den.canonical_associate();
        Ok(FieldElement { num: &u * &num, den })
    }

    pub fn from_ring(x: RingElement) -> Self {
        let ring = x.ring;
        FieldElement { num: x, den: RingElement::one(ring) }
    }

    pub fn numerator(&self) -> &RingElement {
        &self.num
    }

    pub fn denominator(&self) -> &RingElement {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Re-reduce to lowest terms; a no-op on values built through `new`.
    pub fn normalized(&self) -> Result<Self> {
        FieldElement::new(self.num.clone(), self.den.clone())
    }

    /// The norm extended multiplicatively to the fraction field.
    pub fn norm(&self) -> BigRational {
        BigRational::new(self.num.norm(), self.den.norm())
    }

    pub fn add(&self, o: &FieldElement) -> Result<Self> {
        FieldElement::new(&self.num * &o.den + &o.num * &self.den, &self.den * &o.den)
    }

    pub fn sub(&self, o: &FieldElement) -> Result<Self> {
        FieldElement::new(&self.num * &o.den - &o.num * &self.den, &self.den * &o.den)
    }

    pub fn mul(&self, o: &FieldElement) -> Result<Self> {
        FieldElement::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &FieldElement) -> Result<Self> {
        FieldElement::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
