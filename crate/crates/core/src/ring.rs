//! Coefficient rings: ℤ, ℚ, ℤ/n, GF(p), ℤ_(p) and ℤ[q].
//!
//! A [`Ring`] is a small descriptor; elements are plain [`Elem`] values and
//! all arithmetic is dispatched through the descriptor, which keeps elements
//! cheap to move between threads and lets one element type serve every ring.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory;
use crate::poly::IntPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RingJson", into = "RingJson")]
pub enum Ring {
    Integers,
    Rationals,
    IntegersMod(u64),
    PrimeField(u64),
    PLocal(u64),
    IntPoly,
}

/// Ring element in the exact representation chosen by its descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    /// ℤ, ℤ/n (residue in `[0, n)`) and GF(p).
    Int(BigInt),
    /// ℚ and ℤ_(p) (denominator coprime to p).
    Rat(BigRational),
    Poly(IntPoly),
}

impl Elem {
    pub fn as_int(&self) -> &BigInt {
        match self {
            Elem::Int(v) => v,
            other => panic!("expected an integer-backed element, got {other:?}"),
        }
    }

    pub fn as_rat(&self) -> &BigRational {
        match self {
            Elem::Rat(v) => v,
            other => panic!("expected a fraction-backed element, got {other:?}"),
        }
    }

    pub fn as_poly(&self) -> &IntPoly {
        match self {
            Elem::Poly(v) => v,
            other => panic!("expected a polynomial element, got {other:?}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RingJson {
    ring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
}

impl TryFrom<RingJson> for Ring {
    type Error = Error;
    fn try_from(j: RingJson) -> Result<Ring> {
        let need = |v: Option<u64>, key: &str| {
            v.ok_or_else(|| Error::InvalidRing(format!("ring `{}` needs field `{key}`", j.ring)))
        };
        match j.ring.as_str() {
            "Z" => Ok(Ring::Integers),
            "Q" => Ok(Ring::Rationals),
            "Zmod" => Ring::zmod(need(j.n, "n")?),
            "GF" => Ring::gf(need(j.p, "p")?),
            "Zloc" => Ring::zloc(need(j.p, "p")?),
            "ZPoly" => Ok(Ring::IntPoly),
            other => Err(Error::InvalidRing(format!("unknown ring kind `{other}`"))),
        }
    }
}

impl From<Ring> for RingJson {
    fn from(r: Ring) -> RingJson {
        let (ring, n, p) = match r {
            Ring::Integers => ("Z", None, None),
            Ring::Rationals => ("Q", None, None),
            Ring::IntegersMod(n) => ("Zmod", Some(n), None),
            Ring::PrimeField(p) => ("GF", None, Some(p)),
            Ring::PLocal(p) => ("Zloc", None, Some(p)),
            Ring::IntPoly => ("ZPoly", None, None),
        };
        RingJson { ring: ring.into(), n, p }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::IntegersMod(n) => write!(f, "Z/{n}"),
            Ring::PrimeField(p) => write!(f, "GF({p})"),
            Ring::PLocal(p) => write!(f, "Z({p})"),
            Ring::IntPoly => write!(f, "Z[q]"),
        }
    }
}

/// Parses the display forms `Z`, `Q`, `Z/n`, `GF(p)`, `Z(p)` and `Z[q]`; `Z_(p)` is also accepted.
impl std::str::FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidRing(format!("cannot parse ring `{s}`"));
        let num = |x: &str| x.parse::<u64>().map_err(|_| bad());
        let inner = |prefix: &str| t.strip_prefix(prefix).and_then(|r| r.strip_suffix(')'));
        match t.as_str() {
            "Z" => return Ok(Ring::Integers),
            "Q" => return Ok(Ring::Rationals),
            "Z[q]" => return Ok(Ring::IntPoly),
            _ => {}
        }
        if let Some(n) = t.strip_prefix("Z/") {
            return Ring::zmod(num(n)?);
        }
        if let Some(p) = inner("GF(") {
            return Ring::gf(num(p)?);
        }
        if let Some(p) = inner("Z_(").or_else(|| inner("Z(")) {
            return Ring::zloc(num(p)?);
        }
        Err(bad())
    }
}

pub(crate) fn modinv(a: &BigInt, n: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(n).extended_gcd(n);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(n))
    } else {
        None
    }
}

fn p_val(x: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    while !x.is_zero() && (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

impl Ring {
    pub fn zmod(n: u64) -> Result<Ring> {
        if n < 2 {
            return Err(Error::InvalidRing(format!("Z/{n} needs n >= 2")));
        }
        Ok(Ring::IntegersMod(n))
    }

    pub fn gf(p: u64) -> Result<Ring> {
        if !numtheory::is_prime(p) {
            return Err(Error::InvalidRing(format!("GF({p}): {p} is not prime")));
        }
        Ok(Ring::PrimeField(p))
    }

    pub fn zloc(p: u64) -> Result<Ring> {
        if !numtheory::is_prime(p) {
            return Err(Error::InvalidRing(format!("Z({p}): {p} is not prime")));
        }
        Ok(Ring::PLocal(p))
    }

    pub fn is_field(&self) -> bool {
        match self {
            Ring::Rationals | Ring::PrimeField(_) => true,
            Ring::IntegersMod(n) => numtheory::is_prime(*n),
            _ => false,
        }
    }

    pub fn is_domain(&self) -> bool {
        match self {
            Ring::IntegersMod(n) => numtheory::is_prime(*n),
            _ => true,
        }
    }

    pub fn is_pid(&self) -> bool {
        match self {
            Ring::IntPoly => false,
            Ring::IntegersMod(n) => numtheory::is_prime(*n),
            _ => true,
        }
    }

    /// Rings on which module linear algebra is available (ℤ/n via lifting).
    pub fn supports_linear_algebra(&self) -> bool {
        !matches!(self, Ring::IntPoly)
    }

    /// The residue characteristic of a local ring, if the ring is local.
    pub fn local_prime(&self) -> Option<u64> {
        match self {
            Ring::PrimeField(p) | Ring::PLocal(p) => Some(*p),
            Ring::IntegersMod(n) => numtheory::prime_power(*n).map(|(p, _)| p),
            _ => None,
        }
    }

    pub fn is_local(&self) -> bool {
        matches!(self, Ring::Rationals) || self.local_prime().is_some()
    }

    fn unsupported(&self, op: &'static str) -> Error {
        Error::UnsupportedRing { ring: self.to_string(), op }
    }

    pub fn zero(&self) -> Elem {
        self.from_int(0)
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> Elem {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Elem {
        match self {
            Ring::Integers => Elem::Int(v.clone()),
            Ring::IntegersMod(n) | Ring::PrimeField(n) => Elem::Int(v.mod_floor(&BigInt::from(*n))),
            Ring::Rationals | Ring::PLocal(_) => Elem::Rat(BigRational::from_integer(v.clone())),
            Ring::IntPoly => Elem::Poly(IntPoly::constant(v.clone())),
        }
    }

    /// The image of `num/den`, if `den` is invertible in the ring.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Elem> {
        let bad = || Error::Parse { input: format!("{num}/{den}"), ring: self.to_string() };
        if den.is_zero() {
            return Err(bad());
        }
        match self {
            Ring::Rationals => Ok(Elem::Rat(BigRational::new(num.clone(), den.clone()))),
            Ring::PLocal(p) => {
                let q = BigRational::new(num.clone(), den.clone());
                if (q.denom() % BigInt::from(*p)).is_zero() {
                    return Err(bad());
                }
                Ok(Elem::Rat(q))
            }
            Ring::Integers | Ring::IntPoly => {
                let (q, r) = num.div_rem(den);
                if !r.is_zero() {
                    return Err(bad());
                }
                Ok(self.from_bigint(&q))
            }
            Ring::IntegersMod(n) | Ring::PrimeField(n) => {
                let n = BigInt::from(*n);
                let inv = modinv(den, &n).ok_or_else(bad)?;
                Ok(Elem::Int((num * inv).mod_floor(&n)))
            }
        }
    }

    /// Parse a canonical string (`-3`, `2/5`, `q^2+q+1`).
    pub fn parse(&self, s: &str) -> Result<Elem> {
        let bad = || Error::Parse { input: s.to_string(), ring: self.to_string() };
        let t = s.trim();
        if let Ring::IntPoly = self {
            return IntPoly::parse(t).map(Elem::Poly).ok_or_else(bad);
        }
        match t.split_once('/') {
            Some((a, b)) => {
                let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                self.from_fraction(&a, &b).map_err(|_| bad())
            }
            None => {
                let a: BigInt = t.parse().map_err(|_| bad())?;
                Ok(self.from_bigint(&a))
            }
        }
    }

    pub fn format(&self, a: &Elem) -> String {
        match a {
            Elem::Int(v) => v.to_string(),
            Elem::Rat(v) => {
                if v.denom().is_one() {
                    v.numer().to_string()
                } else {
                    format!("{}/{}", v.numer(), v.denom())
                }
            }
            Elem::Poly(p) => p.to_string(),
        }
    }

    /// Bring an element into canonical form (idempotent).
    pub fn normalize(&self, a: Elem) -> Elem {
        match (self, a) {
            (Ring::IntegersMod(n) | Ring::PrimeField(n), Elem::Int(v)) => {
                Elem::Int(v.mod_floor(&BigInt::from(*n)))
            }
            (_, Elem::Rat(v)) => Elem::Rat(BigRational::new(v.numer().clone(), v.denom().clone())),
            (_, a) => a,
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Int(x), Elem::Int(y)) => self.reduce_int(x + y),
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (Elem::Poly(x), Elem::Poly(y)) => Elem::Poly(x + y),
            _ => panic!("mixed element representations"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Int(x), Elem::Int(y)) => self.reduce_int(x - y),
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x - y),
            (Elem::Poly(x), Elem::Poly(y)) => Elem::Poly(x - y),
            _ => panic!("mixed element representations"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Int(x), Elem::Int(y)) => self.reduce_int(x * y),
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Elem::Poly(x), Elem::Poly(y)) => Elem::Poly(x * y),
            _ => panic!("mixed element representations"),
        }
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn reduce_int(&self, v: BigInt) -> Elem {
        match self {
            Ring::IntegersMod(n) | Ring::PrimeField(n) => Elem::Int(v.mod_floor(&BigInt::from(*n))),
            _ => Elem::Int(v),
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Int(v) => v.is_zero(),
            Elem::Rat(v) => v.is_zero(),
            Elem::Poly(v) => v.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        match a {
            Elem::Int(v) => v.is_one(),
            Elem::Rat(v) => v.is_one(),
            Elem::Poly(v) => v.is_one(),
        }
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        match (self, a) {
            (Ring::Integers, Elem::Int(v)) => v.abs().is_one(),
            (Ring::IntegersMod(n), Elem::Int(v)) => v.gcd(&BigInt::from(*n)).is_one(),
            (Ring::PrimeField(_), Elem::Int(v)) => !v.is_zero(),
            (Ring::Rationals, Elem::Rat(v)) => !v.is_zero(),
            (Ring::PLocal(p), Elem::Rat(v)) => {
                !v.is_zero() && !(v.numer() % BigInt::from(*p)).is_zero()
            }
            (Ring::IntPoly, Elem::Poly(v)) => v.is_unit(),
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn inverse(&self, a: &Elem) -> Option<Elem> {
        if !self.is_unit(a) {
            return None;
        }
        Some(match (self, a) {
            (Ring::Integers, _) | (Ring::IntPoly, _) => a.clone(),
            (Ring::IntegersMod(n) | Ring::PrimeField(n), Elem::Int(v)) => {
                Elem::Int(modinv(v, &BigInt::from(*n))?)
            }
            (_, Elem::Rat(v)) => Elem::Rat(v.recip()),
            _ => unreachable!(),
        })
    }

    /// p-adic valuation of a nonzero element of ℤ_(p) (or of ℤ at the given prime).
    pub fn valuation(&self, a: &Elem, p: u64) -> Option<u32> {
        match a {
            Elem::Int(v) if !v.is_zero() => Some(p_val(v, p)),
            Elem::Rat(v) if !v.is_zero() => Some(p_val(v.numer(), p)),
            _ => None,
        }
    }

    /// Whether `a` divides `b`.
    pub fn divides(&self, a: &Elem, b: &Elem) -> bool {
        match (self, a, b) {
            (Ring::Integers, Elem::Int(x), Elem::Int(y)) => {
                if x.is_zero() {
                    y.is_zero()
                } else {
                    (y % x).is_zero()
                }
            }
            (Ring::IntegersMod(n), Elem::Int(x), Elem::Int(y)) => {
                (y % x.gcd(&BigInt::from(*n))).is_zero()
            }
            (Ring::PrimeField(_) | Ring::Rationals, _, _) => !self.is_zero(a) || self.is_zero(b),
            (Ring::PLocal(p), _, _) => match (self.valuation(a, *p), self.valuation(b, *p)) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(va), Some(vb)) => va <= vb,
            },
            (Ring::IntPoly, Elem::Poly(x), Elem::Poly(y)) => x.divides(y),
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// Some `x` with `a·x = b`, if one exists.
    pub fn div_exact(&self, b: &Elem, a: &Elem) -> Option<Elem> {
        match (self, a, b) {
            (Ring::Integers, Elem::Int(x), Elem::Int(y)) => {
                if x.is_zero() {
                    return y.is_zero().then(|| self.zero());
                }
                let (q, r) = y.div_rem(x);
                r.is_zero().then_some(Elem::Int(q))
            }
            (Ring::IntegersMod(n) | Ring::PrimeField(n), Elem::Int(x), Elem::Int(y)) => {
                let n = BigInt::from(*n);
                let g = x.gcd(&n);
                if !(y % &g).is_zero() {
                    return None;
                }
                let m = &n / &g;
                if m.is_one() {
                    return Some(self.zero());
                }
                let inv = modinv(&(x / &g), &m)?;
                Some(Elem::Int(((y / &g) * inv).mod_floor(&m)))
            }
            (Ring::Rationals | Ring::PLocal(_), Elem::Rat(x), Elem::Rat(y)) => {
                if x.is_zero() {
                    return y.is_zero().then(|| self.zero());
                }
                if !self.divides(a, b) {
                    return None;
                }
                Some(Elem::Rat(y / x))
            }
            (Ring::IntPoly, Elem::Poly(x), Elem::Poly(y)) => y.div_exact(x).map(Elem::Poly),
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// Canonical generator of the principal ideal `(a)`.
    pub fn associate_canonical(&self, a: &Elem) -> Elem {
        self.to_canonical(a).0
    }

    /// `(c, u)` with `u` a unit, `a·u = c` and `c` the canonical generator of `(a)`.
    pub fn to_canonical(&self, a: &Elem) -> (Elem, Elem) {
        match (self, a) {
            (Ring::Integers, Elem::Int(v)) => {
                if v.is_negative() {
                    (Elem::Int(-v), self.from_int(-1))
                } else {
                    (a.clone(), self.one())
                }
            }
            (Ring::IntegersMod(n), Elem::Int(v)) => {
                let nn = BigInt::from(*n);
                let g = v.gcd(&nn);
                if g == nn {
                    return (self.zero(), self.one());
                }
                let m = &nn / &g;
                let u0 = if m.is_one() { BigInt::zero() } else { modinv(&(v / &g), &m).unwrap() };
                let mut u = u0;
                while !u.gcd(&nn).is_one() {
                    u += &m;
                }
                (Elem::Int(g.mod_floor(&nn)), Elem::Int(u.mod_floor(&nn)))
            }
            (Ring::PrimeField(_) | Ring::Rationals, _) => {
                if self.is_zero(a) {
                    (self.zero(), self.one())
                } else {
                    (self.one(), self.inverse(a).unwrap())
                }
            }
            (Ring::PLocal(p), Elem::Rat(v)) => {
                if v.is_zero() {
                    return (self.zero(), self.one());
                }
                let c = BigRational::from_integer(BigInt::from(*p).pow(p_val(v.numer(), *p)));
                let u = &c / v;
                (Elem::Rat(c), Elem::Rat(u))
            }
            (Ring::IntPoly, Elem::Poly(v)) => {
                if v.leading().is_some_and(|l| l.is_negative()) {
                    (Elem::Poly(-v.clone()), self.from_int(-1))
                } else {
                    (a.clone(), self.one())
                }
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// Canonical generator of the ideal generated by `gens`.
    pub fn ideal_generator(&self, gens: &[Elem]) -> Result<Elem> {
        let mut g = self.zero();
        for x in gens {
            g = self.gcd(&g, x)?;
        }
        Ok(g)
    }

    /// Canonical generator of `(a, b)`.
    pub fn gcd(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(match (self, a, b) {
            (Ring::Integers, Elem::Int(x), Elem::Int(y)) => Elem::Int(x.gcd(y)),
            (Ring::IntegersMod(n), Elem::Int(x), Elem::Int(y)) => {
                let nn = BigInt::from(*n);
                Elem::Int(x.gcd(y).gcd(&nn).mod_floor(&nn))
            }
            (Ring::PrimeField(_) | Ring::Rationals, _, _) => {
                if self.is_zero(a) && self.is_zero(b) {
                    self.zero()
                } else {
                    self.one()
                }
            }
            (Ring::PLocal(p), _, _) => match (self.valuation(a, *p), self.valuation(b, *p)) {
                (None, None) => self.zero(),
                (Some(v), None) | (None, Some(v)) => self.from_bigint(&BigInt::from(*p).pow(v)),
                (Some(v), Some(w)) => self.from_bigint(&BigInt::from(*p).pow(v.min(w))),
            },
            (Ring::IntPoly, _, _) => {
                if self.is_zero(a) {
                    self.associate_canonical(b)
                } else if self.is_zero(b) || self.divides(a, b) {
                    self.associate_canonical(a)
                } else if self.divides(b, a) {
                    self.associate_canonical(b)
                } else {
                    return Err(self.unsupported("gcd of non-nested polynomial ideals"));
                }
            }
            _ => panic!("element does not belong to {self}"),
        })
    }

    /// Whether `(a, b)` is the unit ideal.
    pub fn unit_ideal(&self, a: &Elem, b: &Elem) -> Result<bool> {
        match self {
            Ring::IntPoly => Err(self.unsupported("unit-ideal test")),
            _ => Ok(self.is_unit(&self.gcd(a, b)?)),
        }
    }

    /// Membership of `x` in the ideal generated by `gens`.
    pub fn ideal_contains(&self, gens: &[Elem], x: &Elem) -> Result<bool> {
        if let Ring::IntPoly = self {
            if gens.len() > 1 {
                return Err(self.unsupported("ideal membership"));
            }
        }
        let g = self.ideal_generator(gens)?;
        Ok(self.divides(&g, x))
    }

    /// The lifted integer of an ℤ, ℤ/n or GF(p) element.
    pub fn lift_int(&self, a: &Elem) -> Option<BigInt> {
        match a {
            Elem::Int(v) => Some(v.clone()),
            Elem::Rat(v) if v.denom().is_one() => Some(v.numer().clone()),
            _ => None,
        }
    }

    /// Evaluate an integer polynomial at `x` inside this ring.
    pub fn eval_poly(&self, p: &IntPoly, x: &Elem) -> Elem {
        p.coeffs()
            .iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), &self.from_bigint(c)))
    }

    /// Multiplicative order of a nonzero element of GF(p).
    pub(crate) fn mult_order(&self, a: &Elem) -> Option<u64> {
        let Ring::PrimeField(p) = self else { return None };
        let v = a.as_int().to_u64()?;
        if v == 0 {
            return None;
        }
        (1..*p).find(|&k| numtheory::pow_mod(v, k, *p) == 1)
    }
}
