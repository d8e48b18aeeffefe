//! Element arithmetic in D(𝕜, π) and structure-constant utilities.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ModuleInvariants;
use crate::numtheory::gcd;
use crate::pi::{Admissibility, DivisibleSequence, PiSequence, PiSpec};
use crate::ring::{Elem, Ring};

/// Default horizon for the admissibility scan at context construction.
pub const ADMISSIBILITY_HORIZON: u64 = 64;

/// The algebra `D = D(𝕜, π)`.
#[derive(Debug, PartialEq, Eq)]
pub struct AlgebraContext {
    ring: Ring,
    pi: Arc<PiSequence>,
}

impl AlgebraContext {
    /// Build a context, scanning admissibility up to `horizon`.
    pub fn new(pi: PiSequence, horizon: u64) -> Result<Arc<Self>> {
        if let Admissibility::Violation(n, m) = pi.admissible_check(horizon)? {
            return Err(Error::Precondition(format!("π is not admissible: (π_{n}, π_{m}) is a proper ideal")));
        }
        Ok(Arc::new(AlgebraContext { ring: pi.ring().clone(), pi: Arc::new(pi) }))
    }

    /// Build a context without the admissibility scan.
    pub fn unchecked(pi: PiSequence) -> Arc<Self> {
        Arc::new(AlgebraContext { ring: pi.ring().clone(), pi: Arc::new(pi) })
    }

    pub fn classical(ring: &Ring) -> Arc<Self> {
        Self::unchecked(PiSequence::classical(ring))
    }

    pub fn all_ones(ring: &Ring) -> Arc<Self> {
        Self::unchecked(PiSequence::all_ones(ring))
    }

    pub fn from_spec(spec: &PiSpec) -> Result<Arc<Self>> {
        Self::new(spec.build()?, ADMISSIBILITY_HORIZON)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn pi(&self) -> &PiSequence {
        &self.pi
    }

    pub fn pi_arc(&self) -> &Arc<PiSequence> {
        &self.pi
    }

    /// `C(n, m)`.
    pub fn c(&self, n: u64, m: u64) -> Elem {
        self.pi.c_unchecked(n, m)
    }

    /// Coefficient of `x^[a+b]` in `x^[a]·x^[b]`.
    pub fn mult_coeff(&self, a: u64, b: u64) -> Elem {
        self.pi.c_unchecked(a + b, b)
    }
}

/// A finite sum `Σ c_n x^[n]`.
#[derive(Clone)]
pub struct GdpaElement {
    ctx: Arc<AlgebraContext>,
    terms: BTreeMap<u64, Elem>,
}

impl PartialEq for GdpaElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.ctx == other.ctx
    }
}

impl fmt::Debug for GdpaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GdpaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let r = &self.ctx.ring;
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(n, c)| if r.is_one(c) { format!("x^[{n}]") } else { format!("({})·x^[{n}]", r.format(c)) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub terms: Vec<(u64, String)>,
}

impl GdpaElement {
    pub fn zero(ctx: &Arc<AlgebraContext>) -> Self {
        GdpaElement { ctx: Arc::clone(ctx), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<AlgebraContext>) -> Self {
        Self::monomial(ctx, 0, ctx.ring.one())
    }

    /// `c·x^[n]`.
    pub fn monomial(ctx: &Arc<AlgebraContext>, n: u64, c: Elem) -> Self {
        Self::from_terms(ctx, [(n, c)])
    }

    pub fn from_terms(ctx: &Arc<AlgebraContext>, terms: impl IntoIterator<Item = (u64, Elem)>) -> Self {
        let r = &ctx.ring;
        let mut out: BTreeMap<u64, Elem> = BTreeMap::new();
        for (n, c) in terms {
            let c = r.normalize(c);
            let e = out.entry(n).or_insert_with(|| r.zero());
            *e = r.add(e, &c);
        }
        out.retain(|_, c| !r.is_zero(c));
        GdpaElement { ctx: Arc::clone(ctx), terms: out }
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<u64, Elem> {
        &self.terms
    }

    pub fn coeff(&self, n: u64) -> Elem {
        self.terms.get(&n).cloned().unwrap_or_else(|| self.ctx.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The degree if the element is a nonzero multiple of one monomial.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        match self.terms.len() {
            1 => self.terms.keys().next().copied(),
            _ => None,
        }
    }

    fn same_ctx(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        Ok(Self::from_terms(&self.ctx, self.terms.iter().chain(other.terms.iter()).map(|(n, c)| (*n, c.clone()))))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&self.ctx.ring.from_int(-1)))
    }

    pub fn scale(&self, c: &Elem) -> Self {
        let r = &self.ctx.ring;
        Self::from_terms(&self.ctx, self.terms.iter().map(|(n, v)| (*n, r.mul(v, c))))
    }

    /// Product by the rule `x^[a]·x^[b] = C(a+b, b)·x^[a+b]`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        let r = &self.ctx.ring;
        let mut out = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = self.ctx.mult_coeff(*a, *b);
                if r.is_zero(&c) {
                    continue;
                }
                out.push((a + b, r.mul(&r.mul(ca, cb), &c)));
            }
        }
        Ok(Self::from_terms(&self.ctx, out))
    }

    /// The `D^(h;k)` component: terms of degree `≡ k (mod h)`.
    pub fn veronese_decompose(&self, h: u64, k: u64) -> Result<Self> {
        if h == 0 || k >= h {
            return Err(Error::Precondition(format!("need 0 ≤ k < h, got h = {h}, k = {k}")));
        }
        Ok(Self::from_terms(&self.ctx, self.terms.iter().filter(|(n, _)| *n % h == k).map(|(n, c)| (*n, c.clone()))))
    }

    pub fn to_json(&self) -> ElementJson {
        ElementJson { terms: self.terms.iter().map(|(n, c)| (*n, self.ctx.ring.format(c))).collect() }
    }

    pub fn from_json(ctx: &Arc<AlgebraContext>, j: &ElementJson) -> Result<Self> {
        let terms = j.terms.iter().map(|(n, s)| Ok((*n, ctx.ring.parse(s)?))).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(ctx, terms))
    }
}

/// Whether adding `n` and `m` in the mixed radix `b` produces a carry.
pub fn has_carry(n: u64, m: u64, b: &DivisibleSequence) -> bool {
    b.terms_up_to(n + m).into_iter().skip(1).any(|place| n % place + m % place >= place)
}

/// Product in `S(𝕜, b)`: `x^[n]·x^[m] = x^[n+m]` without a base-`b` carry, else 0.
pub fn field_multiply_by_carries(e1: &GdpaElement, e2: &GdpaElement, b: &DivisibleSequence) -> Result<GdpaElement> {
    e1.same_ctx(e2)?;
    let r = &e1.ctx.ring;
    if !r.is_field() {
        return Err(Error::UnsupportedRing { ring: r.to_string(), op: "field_multiply_by_carries" });
    }
    let mut out = Vec::new();
    for (a, ca) in &e1.terms {
        for (c, cc) in &e2.terms {
            if !has_carry(*a, *c, b) {
                out.push((a + c, r.mul(ca, cc)));
            }
        }
    }
    Ok(GdpaElement::from_terms(&e1.ctx, out))
}

fn jacobson_radical(r: &Ring, x: &Elem) -> bool {
    r.is_zero(x) || (r.is_local() && !r.is_unit(x))
}

/// Units `u_n = ∏_{k∈S} π_k^{⌊hn/k⌋}` with `S = {k ≥ 2 : k ∤ h, h ∤ k}`,
/// checked against `u_n·u_m·C(h(n+m), hm) = u_{n+m}·C'(n+m, m)` where `π'_n = π_{hn}`.
pub fn regrade_units(pi: &PiSequence, h: u64, up_to: u64) -> Result<Vec<Elem>> {
    let r = pi.ring();
    if h == 0 {
        return Err(Error::Precondition("h must be positive".into()));
    }
    if h > 1 && !jacobson_radical(r, &pi.pi(h)) {
        return Err(Error::Precondition(format!("π_{h} is not in the Jacobson radical of {r}")));
    }
    let mut u = Vec::with_capacity(up_to as usize + 1);
    for n in 0..=up_to {
        let mut acc = r.one();
        for k in 2..=h * n {
            if !h.is_multiple_of(k) && k % h != 0 {
                let e = h * n / k;
                if e > 0 {
                    acc = r.mul(&acc, &r.pow(&pi.pi(k), e));
                }
            }
        }
        if !r.is_unit(&acc) {
            return Err(Error::Precondition(format!("u_{n} is not a unit")));
        }
        u.push(acc);
    }
    let shifted = PiSequence::custom(r, (2..=up_to.max(1)).map(|n| (n, pi.pi(h * n))).collect(), r.one())?;
    for total in 0..=up_to {
        for m in 0..=total {
            let n = total - m;
            let lhs = r.mul(&r.mul(&u[n as usize], &u[m as usize]), &pi.c(h * total, h * m)?);
            let rhs = r.mul(&u[total as usize], &shifted.c(total, m)?);
            if lhs != rhs {
                return Err(Error::NotGdpa { n: total, m });
            }
        }
    }
    Ok(u)
}

/// `β_n = ∏_{k≥2} α_k^{⌊n/k⌋}` for `π'_n = α_n π_n`, checked against
/// `C'(n+m, m) = β_{n+m} β_n^{-1} β_m^{-1} C(n+m, m)`.
pub fn associate_scaling(pi: &PiSequence, alpha: &BTreeMap<u64, Elem>, up_to: u64) -> Result<Vec<Elem>> {
    let r = pi.ring();
    let al = |k: u64| alpha.get(&k).cloned().unwrap_or_else(|| r.one());
    for (k, a) in alpha {
        if !r.is_unit(a) {
            return Err(Error::Precondition(format!("α_{k} is not a unit")));
        }
    }
    let beta: Vec<Elem> = (0..=up_to)
        .map(|n| (2..=n).fold(r.one(), |acc, k| r.mul(&acc, &r.pow(&al(k), n / k))))
        .collect();
    let primed = PiSequence::custom(r, (2..=up_to.max(2)).map(|k| (k, r.mul(&al(k), &pi.pi(k)))).collect(), r.one())?;
    for total in 0..=up_to {
        for m in 0..=total {
            let n = total - m;
            let lhs = r.mul(&r.mul(&primed.c(total, m)?, &beta[n as usize]), &beta[m as usize]);
            let rhs = r.mul(&beta[total as usize], &pi.c(total, m)?);
            if lhs != rhs {
                return Err(Error::NotGdpa { n: total, m });
            }
        }
    }
    Ok(beta)
}

/// Table `c(n, m)` for `0 ≤ m ≤ n ≤ horizon`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    pub ring: Ring,
    pub horizon: u64,
    rows: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureConstantsJson {
    pub ring: Ring,
    pub horizon: u64,
    pub rows: Vec<Vec<String>>,
}

impl StructureConstants {
    pub fn from_pi(pi: &PiSequence, horizon: u64) -> Self {
        let rows = (0..=horizon).map(|n| (0..=n).map(|m| pi.c_unchecked(n, m)).collect()).collect();
        StructureConstants { ring: pi.ring().clone(), horizon, rows }
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Elem>>) -> Result<Self> {
        for (n, row) in rows.iter().enumerate() {
            if row.len() != n + 1 {
                return Err(Error::Malformed(format!("row {n} has {} entries, expected {}", row.len(), n + 1)));
            }
        }
        let horizon = rows.len().saturating_sub(1) as u64;
        let rows = rows.into_iter().map(|r| r.into_iter().map(|x| ring.normalize(x)).collect()).collect();
        Ok(StructureConstants { ring: ring.clone(), horizon, rows })
    }

    pub fn get(&self, n: u64, m: u64) -> &Elem {
        &self.rows[n as usize][m as usize]
    }

    pub fn to_json(&self) -> StructureConstantsJson {
        StructureConstantsJson {
            ring: self.ring.clone(),
            horizon: self.horizon,
            rows: self.rows.iter().map(|r| r.iter().map(|x| self.ring.format(x)).collect()).collect(),
        }
    }

    pub fn from_json(j: &StructureConstantsJson) -> Result<Self> {
        let rows = j
            .rows
            .iter()
            .map(|r| r.iter().map(|s| j.ring.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let sc = Self::from_rows(&j.ring, rows)?;
        if sc.horizon != j.horizon {
            return Err(Error::Malformed(format!("horizon {} but {} rows", j.horizon, sc.horizon + 1)));
        }
        Ok(sc)
    }
}

/// Result of structure-constant recovery.
#[derive(Clone, Debug)]
pub struct RecoveredPi {
    /// Canonical associates of `π_2, …, π_N`.
    pub values: BTreeMap<u64, Elem>,
    /// The nonunit locus `1 = b_0 | b_1 | …` found along the way.
    pub b: Vec<u64>,
}

impl RecoveredPi {
    pub fn to_sequence(&self, ring: &Ring) -> Result<PiSequence> {
        PiSequence::custom(ring, self.values.clone(), ring.one())
    }
}

/// Recover `π` up to units from structure constants over a local ring.
pub fn recover_pi(sc: &StructureConstants) -> Result<RecoveredPi> {
    let r = &sc.ring;
    if !r.is_local() {
        return Err(Error::UnsupportedRing { ring: r.to_string(), op: "recover_pi (local rings only)" });
    }
    for n in 0..=sc.horizon {
        if !r.is_one(sc.get(n, 0)) {
            return Err(Error::NotGdpa { n, m: 0 });
        }
    }
    let mut raw: BTreeMap<u64, Elem> = BTreeMap::new();
    let mut b = vec![1u64];
    let carry_product = |raw: &BTreeMap<u64, Elem>, n: u64, m: u64, upto: u64| {
        let mut acc = r.one();
        for k in 2..=upto {
            if (n - m) % k + m % k >= k {
                acc = r.mul(&acc, &raw[&k]);
            }
        }
        acc
    };
    for n in 2..=sc.horizon {
        let m = *b.iter().rev().find(|&&bj| bj < n && n % bj == 0).unwrap();
        let lower = carry_product(&raw, n, m, n - 1);
        if !r.is_unit(&lower) {
            return Err(Error::NotGdpa { n, m });
        }
        let pn = r.div_exact(sc.get(n, m), &lower).ok_or(Error::NotGdpa { n, m })?;
        raw.insert(n, pn.clone());
        if !r.is_unit(&pn) {
            b.push(n);
        }
        for m2 in 0..=n {
            if carry_product(&raw, n, m2, n) != *sc.get(n, m2) {
                return Err(Error::NotGdpa { n, m: m2 });
            }
        }
    }
    let values = raw.iter().map(|(k, v)| (*k, r.associate_canonical(v))).collect();
    Ok(RecoveredPi { values, b })
}

/// The graded pieces `Tor₁(𝕜, 𝕜)_n = 𝕜/(π_n)`, with `π_1 = 0`.
pub fn tor1_closed_form(pi: &PiSequence, degrees: std::ops::RangeInclusive<u64>) -> Vec<(u64, ModuleInvariants)> {
    degrees.filter(|&n| n >= 1).map(|n| (n, ModuleInvariants::cyclic(pi.ring(), &pi.pi(n)))).collect()
}

/// Whether `π` and `π'` agree up to units on `2..=up_to`.
pub fn associates(r: &Ring, a: &PiSequence, b: &PiSequence, up_to: u64) -> bool {
    (2..=up_to).all(|n| {
        let (x, y) = (a.pi(n), b.pi(n));
        r.divides(&x, &y) && r.divides(&y, &x)
    })
}

/// `gcd(h/d, n) = 1` factorization helper: split a divisor `m` of `n·h` as `d·d'`
/// with `d | n`, `d' | h` and `gcd(h/d', d) = 1`.
pub fn divisor_factorizations(n: u64, h: u64, m: u64) -> Vec<(u64, u64)> {
    crate::numtheory::divisors(n)
        .into_iter()
        .flat_map(|d| crate::numtheory::divisors(h).into_iter().map(move |e| (d, e)))
        .filter(|&(d, e)| d * e == m && gcd(h / e, d) == 1)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products() {
        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        let x1 = GdpaElement::monomial(&ctx, 1, z.one());
        assert_eq!(x1.multiply(&x1).unwrap(), GdpaElement::monomial(&ctx, 2, z.from_int(2)));
        let f = Ring::PrimeField(2);
        let ctx2 = AlgebraContext::classical(&f);
        let y1 = GdpaElement::monomial(&ctx2, 1, f.one());
        assert!(y1.multiply(&y1).unwrap().is_zero());
        assert!(x1.multiply(&y1).is_err());
        let one = GdpaElement::one(&ctx);
        assert_eq!(one.multiply(&x1).unwrap(), x1);
    }

    #[test]
    fn carries_in_field() {
        let p = 5;
        let f = Ring::PrimeField(p);
        let ctx = AlgebraContext::classical(&f);
        let b = DivisibleSequence::powers(p);
        let m = |n| GdpaElement::monomial(&ctx, n, f.one());
        assert!(field_multiply_by_carries(&m(1), &m(p - 1), &b).unwrap().is_zero());
        assert!(field_multiply_by_carries(&m(p), &m(p * (p - 1)), &b).unwrap().is_zero());
        assert_eq!(field_multiply_by_carries(&m(1), &m(p - 2), &b).unwrap(), m(p - 1));
        let z = AlgebraContext::classical(&Ring::Integers);
        let e = GdpaElement::monomial(&z, 1, Ring::Integers.one());
        assert!(field_multiply_by_carries(&e, &e, &b).is_err());
    }

    #[test]
    fn veronese() {
        let f = Ring::PrimeField(2);
        let ctx = AlgebraContext::classical(&f);
        let e = GdpaElement::from_terms(&ctx, (0..3).map(|n| (n, f.one())));
        assert_eq!(e.veronese_decompose(2, 0).unwrap(), GdpaElement::from_terms(&ctx, [(0, f.one()), (2, f.one())]));
        assert_eq!(e.veronese_decompose(1, 0).unwrap(), e);
        let p = GdpaElement::monomial(&ctx, 1, f.one()).multiply(&GdpaElement::monomial(&ctx, 2, f.one())).unwrap();
        assert_eq!(p.veronese_decompose(2, 1).unwrap(), p);
        assert!(e.veronese_decompose(2, 2).is_err());
    }

    #[test]
    fn regrading() {
        let l = Ring::PLocal(2);
        let u = regrade_units(&PiSequence::classical(&l), 2, 10).unwrap();
        assert_eq!(u[1], l.one());
        let f = Ring::PrimeField(3);
        let u = regrade_units(&PiSequence::classical(&f), 3, 10).unwrap();
        assert!(u.iter().all(|x| f.is_unit(x)));
        assert!(regrade_units(&PiSequence::classical(&Ring::Integers), 2, 4).is_err());
        let ones = regrade_units(&PiSequence::all_ones(&l), 1, 6).unwrap();
        assert!(ones.iter().all(|x| l.is_one(x)));
    }

    #[test]
    fn associate_scalings() {
        let z = Ring::Integers;
        let pi = PiSequence::classical(&z);
        let alpha: BTreeMap<u64, Elem> = (2..=12).map(|k| (k, z.from_int(-1))).collect();
        let beta = associate_scaling(&pi, &alpha, 12).unwrap();
        for (n, b) in beta.iter().enumerate() {
            let e: u64 = (2..=n as u64).map(|k| n as u64 / k).sum();
            assert_eq!(*b, z.from_int(if e.is_multiple_of(2) { 1 } else { -1 }));
        }
        let l = Ring::PLocal(3);
        let alpha = BTreeMap::from([(2, l.from_int(2))]);
        associate_scaling(&PiSequence::classical(&l), &alpha, 9).unwrap();
        let bad = BTreeMap::from([(2, l.from_int(3))]);
        assert!(associate_scaling(&PiSequence::classical(&l), &bad, 9).is_err());
    }

    #[test]
    fn recovery_round_trip() {
        for p in [2, 3] {
            let l = Ring::PLocal(p);
            let pi = PiSequence::classical(&l);
            let rec = recover_pi(&StructureConstants::from_pi(&pi, 16)).unwrap();
            let got = rec.to_sequence(&l).unwrap();
            assert!(associates(&l, &pi, &got, 16));
        }
        let f = Ring::PrimeField(5);
        let pi = PiSequence::custom(&f, BTreeMap::from([(5, f.zero()), (25, f.zero()), (3, f.from_int(2))]), f.one()).unwrap();
        let rec = recover_pi(&StructureConstants::from_pi(&pi, 25)).unwrap();
        assert_eq!(rec.b, vec![1, 5, 25]);
        let mut bad = StructureConstants::from_pi(&PiSequence::classical(&l2()), 6);
        bad.rows[4][2] = l2().from_int(5);
        assert!(matches!(recover_pi(&bad), Err(Error::NotGdpa { .. })));
        assert!(recover_pi(&StructureConstants::from_pi(&PiSequence::classical(&Ring::Integers), 4)).is_err());
    }

    fn l2() -> Ring {
        Ring::PLocal(2)
    }

    #[test]
    fn tor1_forms() {
        let f = Ring::PrimeField(2);
        let t = tor1_closed_form(&PiSequence::classical(&f), 1..=16);
        let nz: Vec<u64> = t.iter().filter(|(_, m)| !m.is_zero()).map(|(n, _)| *n).collect();
        assert_eq!(nz, vec![1, 2, 4, 8, 16]);
        let z4 = Ring::IntegersMod(4);
        let t = tor1_closed_form(&PiSequence::classical(&z4), 1..=9);
        assert_eq!(t[0].1.free_rank, 1);
        assert_eq!(t[1].1.torsion_factors, vec![z4.from_int(2)]);
        assert!(t[2].1.is_zero());
    }

    #[test]
    fn divisor_factorization_is_unique() {
        for n in 1..=30 {
            for h in 1..=30 {
                for m in crate::numtheory::divisors(n * h) {
                    assert_eq!(divisor_factorizations(n, h, m).len(), 1, "n={n} h={h} m={m}");
                }
            }
        }
    }
}
