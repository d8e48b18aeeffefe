//! π-sequences, divisible sequences and the invariants a, A, C.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{divisors, gcd, mobius, prime_power};
use crate::poly::{cyclotomic, IntPoly};
use crate::ring::{Elem, Ring};

/// `1 = b_0 | b_1 | …` with proper divisibility. A geometric tail, when
/// present, extends the listed terms by repeated multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibleSequence {
    terms: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ratio: Option<u64>,
}

impl DivisibleSequence {
    pub fn new(terms: Vec<u64>) -> Result<Self> {
        Self::validate(&terms)?;
        Ok(DivisibleSequence { terms, ratio: None })
    }

    /// Terms `prefix`, then `last·r, last·r², …`.
    pub fn geometric(prefix: Vec<u64>, ratio: u64) -> Result<Self> {
        if ratio < 2 {
            return Err(Error::Malformed("geometric ratio must be at least 2".into()));
        }
        Self::validate(&prefix)?;
        Ok(DivisibleSequence { terms: prefix, ratio: Some(ratio) })
    }

    /// `1, p, p², …`.
    pub fn powers(p: u64) -> Self {
        DivisibleSequence { terms: vec![1], ratio: Some(p) }
    }

    fn validate(terms: &[u64]) -> Result<()> {
        if terms.first() != Some(&1) {
            return Err(Error::Malformed("a divisible sequence starts at 1".into()));
        }
        for w in terms.windows(2) {
            if w[1] <= w[0] || w[1] % w[0] != 0 {
                return Err(Error::Malformed(format!("{} does not properly divide {}", w[0], w[1])));
            }
        }
        Ok(())
    }

    pub fn is_bounded(&self) -> bool {
        self.ratio.is_none()
    }

    /// The `i`-th term, if defined.
    pub fn term(&self, i: usize) -> Option<u64> {
        if let Some(&t) = self.terms.get(i) {
            return Some(t);
        }
        let r = self.ratio?;
        let mut t = *self.terms.last().unwrap();
        for _ in self.terms.len()..=i {
            t = t.checked_mul(r)?;
        }
        Some(t)
    }

    /// All terms `≤ n`.
    pub fn terms_up_to(&self, n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut i = 0;
        while let Some(t) = self.term(i) {
            if t > n {
                break;
            }
            out.push(t);
            i += 1;
        }
        out
    }

    pub fn listed(&self) -> &[u64] {
        &self.terms
    }
}

impl fmt::Display for DivisibleSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        match self.ratio {
            Some(r) => write!(f, "({}, ... ×{r})", body.join(", ")),
            None => write!(f, "({})", body.join(", ")),
        }
    }
}

/// Digits `d_0, d_1, …` of `n` in a mixed radix given by a divisible sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseRep {
    pub digits: Vec<u64>,
}

impl BaseRep {
    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().sum()
    }
}

pub fn base_rep(n: u64, b: &DivisibleSequence) -> BaseRep {
    if n == 0 {
        return BaseRep { digits: Vec::new() };
    }
    let places = b.terms_up_to(n);
    let mut digits = vec![0; places.len()];
    let mut rest = n;
    for (i, &p) in places.iter().enumerate().rev() {
        digits[i] = rest / p;
        rest %= p;
    }
    BaseRep { digits }
}

/// `ε_k(n, m) = ⌊(n+m)/k⌋ − ⌊n/k⌋ − ⌊m/k⌋`.
pub fn carry(k: u64, n: u64, m: u64) -> Result<u8> {
    if k == 0 {
        return Err(Error::Precondition("carry at k = 0".into()));
    }
    Ok(((n + m) / k - n / k - m / k) as u8)
}

fn eps(k: u64, n: u64, m: u64) -> bool {
    n % k + m % k >= k
}

/// Source of an integer GCD-morphic sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GcdSource {
    Fibonacci,
    Identity,
    Ones,
    /// `a(1), a(2), …`; verified on the listed prefix, `π_n = 1` beyond it.
    Explicit(Vec<BigInt>),
}

impl GcdSource {
    pub fn value(&self, n: u64) -> Option<BigInt> {
        match self {
            GcdSource::Fibonacci => Some(fibonacci(n)),
            GcdSource::Identity => Some(BigInt::from(n)),
            GcdSource::Ones => Some(BigInt::one()),
            GcdSource::Explicit(v) => v.get(n as usize - 1).cloned(),
        }
    }

    fn len(&self) -> Option<u64> {
        match self {
            GcdSource::Explicit(v) => Some(v.len() as u64),
            _ => None,
        }
    }
}

pub fn fibonacci(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a
}

/// `∏_{d|n} a(n/d)^{μ(d)}` as an exact rational.
fn mobius_product(n: u64, a: impl Fn(u64) -> BigInt) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for d in divisors(n) {
        match mobius(d) {
            1 => num *= a(n / d),
            -1 => den *= a(n / d),
            _ => {}
        }
    }
    BigRational::new(num, den)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PiRule {
    AllOnes,
    Classical,
    CyclotomicSymbolic,
    CyclotomicAt(Elem),
    FromGcdMorphic(GcdSource),
    Custom { values: BTreeMap<u64, Elem>, default: Elem },
    Transformed { base: Arc<PiSequence>, h: u64 },
}

/// Where `π_n = 0`, for `n ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroLocus {
    Finite(Vec<u64>),
    /// Exactly `{m·p^s : s ≥ 0} ∖ {1}`.
    Geometric { m: u64, p: u64 },
    Unknown,
}

impl ZeroLocus {
    pub fn contains(&self, n: u64) -> Option<bool> {
        match self {
            ZeroLocus::Finite(v) => Some(v.contains(&n)),
            ZeroLocus::Geometric { m, p } => {
                if n < 2 || !n.is_multiple_of(*m) {
                    return Some(false);
                }
                let mut q = n / m;
                while q.is_multiple_of(*p) {
                    q /= p;
                }
                Some(q == 1)
            }
            ZeroLocus::Unknown => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ZeroLocus::Geometric { .. })
    }

    /// The divisible sequence `1, z_1, z_2, …` of zeros.
    pub fn sequence(&self) -> Option<DivisibleSequence> {
        match self {
            ZeroLocus::Finite(v) => {
                let mut t = vec![1];
                t.extend(v.iter().copied());
                DivisibleSequence::new(t).ok()
            }
            ZeroLocus::Geometric { m, p } => {
                if *m == 1 {
                    Some(DivisibleSequence::powers(*p))
                } else {
                    DivisibleSequence::geometric(vec![1, *m], *p).ok()
                }
            }
            ZeroLocus::Unknown => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Admissibility {
    Admissible,
    Violation(u64, u64),
}

/// A π-sequence in a coefficient ring with memoized values.
pub struct PiSequence {
    ring: Ring,
    rule: PiRule,
    cache: RwLock<HashMap<u64, Elem>>,
    c_cache: RwLock<HashMap<(u64, u64), Elem>>,
}

impl Clone for PiSequence {
    fn clone(&self) -> Self {
        PiSequence {
            ring: self.ring.clone(),
            rule: self.rule.clone(),
            cache: RwLock::new(self.cache.read().unwrap().clone()),
            c_cache: RwLock::new(HashMap::new()),
        }
    }
}

impl PartialEq for PiSequence {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.rule == other.rule
    }
}

impl Eq for PiSequence {}

impl fmt::Debug for PiSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiSequence").field("ring", &self.ring).field("rule", &self.rule).finish()
    }
}

impl PiSequence {
    pub fn new(ring: &Ring, rule: PiRule) -> Result<Self> {
        match (&rule, ring) {
            (PiRule::CyclotomicSymbolic, Ring::IntPoly) => {}
            (PiRule::CyclotomicSymbolic, _) => {
                return Err(Error::InvalidRing("symbolic cyclotomic π needs Z[q]".into()));
            }
            (PiRule::CyclotomicAt(q), _) => {
                ring.normalize(q.clone());
            }
            (PiRule::Custom { values, default }, _) => {
                if values.keys().any(|&k| k < 2) {
                    return Err(Error::Malformed("custom π values are indexed from 2".into()));
                }
                let _ = (ring.normalize(default.clone()), values.len());
            }
            (PiRule::FromGcdMorphic(src), _) => {
                if let Some(len) = src.len() {
                    verify_gcd_morphic(src, len)?;
                }
            }
            (PiRule::Transformed { base, .. }, _) if base.ring != *ring => return Err(Error::ContextMismatch),
            _ => {}
        }
        let rule = match rule {
            PiRule::CyclotomicAt(q) => PiRule::CyclotomicAt(ring.normalize(q)),
            PiRule::Custom { values, default } => PiRule::Custom {
                values: values.into_iter().map(|(k, v)| (k, ring.normalize(v))).collect(),
                default: ring.normalize(default),
            },
            r => r,
        };
        Ok(PiSequence { ring: ring.clone(), rule, cache: RwLock::default(), c_cache: RwLock::default() })
    }

    pub fn classical(ring: &Ring) -> Self {
        Self::new(ring, PiRule::Classical).unwrap()
    }

    pub fn all_ones(ring: &Ring) -> Self {
        Self::new(ring, PiRule::AllOnes).unwrap()
    }

    pub fn cyclotomic() -> Self {
        Self::new(&Ring::IntPoly, PiRule::CyclotomicSymbolic).unwrap()
    }

    pub fn custom(ring: &Ring, values: BTreeMap<u64, Elem>, default: Elem) -> Result<Self> {
        Self::new(ring, PiRule::Custom { values, default })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rule(&self) -> &PiRule {
        &self.rule
    }

    /// `π_n`, with `π_1 = 0`.
    pub fn pi(&self, n: u64) -> Elem {
        assert!(n >= 1, "π is indexed from 1");
        if n == 1 {
            return self.ring.zero();
        }
        if let Some(v) = self.cache.read().unwrap().get(&n) {
            return v.clone();
        }
        let v = self.compute(n);
        self.cache.write().unwrap().insert(n, v.clone());
        v
    }

    fn compute(&self, n: u64) -> Elem {
        let r = &self.ring;
        match &self.rule {
            PiRule::AllOnes => r.one(),
            PiRule::Classical => match prime_power(n) {
                Some((p, _)) => r.from_bigint(&BigInt::from(p)),
                None => r.one(),
            },
            PiRule::CyclotomicSymbolic => Elem::Poly(cyclotomic(n)),
            PiRule::CyclotomicAt(q) => r.eval_poly(&cyclotomic(n), q),
            PiRule::FromGcdMorphic(src) => {
                if src.len().is_some_and(|l| n > l) {
                    return r.one();
                }
                let v = mobius_product(n, |k| src.value(k).unwrap());
                r.from_bigint(&v.to_integer())
            }
            PiRule::Custom { values, default } => values.get(&n).cloned().unwrap_or_else(|| default.clone()),
            PiRule::Transformed { base, h } => {
                let mut acc = r.one();
                for d in divisors(*h) {
                    if gcd(h / d, n) == 1 {
                        acc = r.mul(&acc, &base.pi(d * n));
                    }
                }
                acc
            }
        }
    }

    /// `a(n) = ∏_{d|n, d≠1} π_d`.
    pub fn a(&self, n: u64) -> Elem {
        assert!(n >= 1);
        let r = &self.ring;
        divisors(n).into_iter().filter(|&d| d != 1).fold(r.one(), |acc, d| r.mul(&acc, &self.pi(d)))
    }

    /// `A(n) = a(1)·a(2)⋯a(n)`, `A(0) = 1`.
    pub fn big_a(&self, n: u64) -> Elem {
        let r = &self.ring;
        (1..=n).fold(r.one(), |acc, k| r.mul(&acc, &self.a(k)))
    }

    /// `C(n, m) = ∏_{k≥2} π_k^{ε_k(n−m, m)}` by the carry product.
    pub fn c(&self, n: u64, m: u64) -> Result<Elem> {
        if m > n {
            return Err(Error::Precondition(format!("C({n}, {m}) needs m ≤ n")));
        }
        Ok(self.c_unchecked(n, m))
    }

    pub(crate) fn c_unchecked(&self, n: u64, m: u64) -> Elem {
        let m = m.min(n - m);
        if m == 0 {
            return self.ring.one();
        }
        if let Some(v) = self.c_cache.read().unwrap().get(&(n, m)) {
            return v.clone();
        }
        let r = &self.ring;
        let mut acc = r.one();
        for k in 2..=n {
            if eps(k, n - m, m) {
                let p = self.pi(k);
                if !r.is_one(&p) {
                    acc = r.mul(&acc, &p);
                }
            }
        }
        self.c_cache.write().unwrap().insert((n, m), acc.clone());
        acc
    }

    pub fn h_transform(self: &Arc<Self>, h: u64) -> Result<PiSequence> {
        if h == 0 {
            return Err(Error::Precondition("h-transform needs h ≥ 1".into()));
        }
        if h == 1 {
            return Ok((**self).clone());
        }
        PiSequence::new(&self.ring, PiRule::Transformed { base: Arc::clone(self), h })
    }

    /// Scan pairs `2 ≤ n < m ≤ up_to` with `n ∤ m` for a proper ideal `(π_n, π_m)`.
    pub fn admissible_check(&self, up_to: u64) -> Result<Admissibility> {
        if self.rule == PiRule::CyclotomicSymbolic {
            return Ok(Admissibility::Admissible);
        }
        if self.ring == Ring::IntPoly {
            return Err(Error::UnsupportedRing { ring: self.ring.to_string(), op: "admissibility scan" });
        }
        for n in 2..=up_to {
            let pn = self.pi(n);
            if self.ring.is_unit(&pn) {
                continue;
            }
            for m in n + 1..=up_to {
                if m % n == 0 {
                    continue;
                }
                if !self.ring.unit_ideal(&pn, &self.pi(m))? {
                    return Ok(Admissibility::Violation(n, m));
                }
            }
        }
        Ok(Admissibility::Admissible)
    }

    /// `b_{𝔞,•}`: the successive smallest indices with `π_n ∈ 𝔞`.
    pub fn b_sequence_for_ideal(&self, gens: &[Elem], limit: u64) -> Result<DivisibleSequence> {
        let g = self.ring.ideal_generator(gens)?;
        let mut terms = vec![1u64];
        if self.ring.is_unit(&g) {
            return DivisibleSequence::new(terms);
        }
        for n in 2..=limit {
            if self.ring.ideal_contains(gens, &self.pi(n))? {
                let last = *terms.last().unwrap();
                if n % last != 0 {
                    return Err(Error::Precondition(format!(
                        "π is not admissible: π_{last} and π_{n} both lie in the ideal"
                    )));
                }
                terms.push(n);
            }
        }
        DivisibleSequence::new(terms)
    }

    /// The zero set of `π_n` for `n ≥ 2`, when it has a closed form.
    pub fn zero_locus(&self) -> ZeroLocus {
        let r = &self.ring;
        match &self.rule {
            PiRule::AllOnes | PiRule::CyclotomicSymbolic => ZeroLocus::Finite(Vec::new()),
            PiRule::Classical => match r {
                Ring::PrimeField(p) => ZeroLocus::Geometric { m: 1, p: *p },
                Ring::IntegersMod(n) if crate::numtheory::is_prime(*n) => ZeroLocus::Geometric { m: 1, p: *n },
                _ => ZeroLocus::Finite(Vec::new()),
            },
            PiRule::CyclotomicAt(q) => match r {
                Ring::PrimeField(p) => {
                    if r.is_zero(q) {
                        ZeroLocus::Finite(Vec::new())
                    } else {
                        let m = r.mult_order(q).unwrap();
                        ZeroLocus::Geometric { m, p: *p }
                    }
                }
                Ring::Integers | Ring::Rationals => {
                    let zs = (2..=2).filter(|&n| r.is_zero(&self.pi(n))).collect();
                    ZeroLocus::Finite(zs)
                }
                _ => ZeroLocus::Unknown,
            },
            PiRule::FromGcdMorphic(src) if src.len().is_some() => {
                let len = src.len().unwrap();
                let zs: Vec<u64> = (2..=len).filter(|&n| r.is_zero(&self.pi(n))).collect();
                ZeroLocus::Finite(zs)
            }
            PiRule::FromGcdMorphic(_) => match r {
                Ring::Integers | Ring::Rationals | Ring::PLocal(_) => ZeroLocus::Finite(Vec::new()),
                _ => ZeroLocus::Unknown,
            },
            PiRule::Custom { values, default } => {
                if r.is_zero(default) {
                    ZeroLocus::Unknown
                } else {
                    ZeroLocus::Finite(values.iter().filter(|(_, v)| r.is_zero(v)).map(|(k, _)| *k).collect())
                }
            }
            PiRule::Transformed { .. } => ZeroLocus::Unknown,
        }
    }

    /// Whether `π_n` is a unit for every `n ≥ 2`, when decidable.
    pub fn all_units(&self) -> Option<bool> {
        let r = &self.ring;
        match &self.rule {
            PiRule::AllOnes => Some(true),
            PiRule::Classical => Some(match r {
                Ring::Rationals => true,
                Ring::PrimeField(_) | Ring::Integers | Ring::PLocal(_) | Ring::IntegersMod(_) => false,
                Ring::IntPoly => false,
            }),
            PiRule::Custom { values, default } => Some(r.is_unit(default) && values.values().all(|v| r.is_unit(v))),
            PiRule::FromGcdMorphic(GcdSource::Ones) => Some(true),
            PiRule::FromGcdMorphic(GcdSource::Explicit(_)) => {
                let l = match &self.rule {
                    PiRule::FromGcdMorphic(s) => s.len().unwrap(),
                    _ => unreachable!(),
                };
                Some((2..=l).all(|n| r.is_unit(&self.pi(n))))
            }
            _ => None,
        }
    }

    pub fn to_spec(&self) -> PiSpec {
        let r = &self.ring;
        let mut spec = PiSpec {
            family: String::new(),
            ring: r.clone(),
            values: None,
            default: None,
            q0: None,
            source: None,
            a: None,
            h: None,
            base: None,
        };
        match &self.rule {
            PiRule::AllOnes => spec.family = "all_ones".into(),
            PiRule::Classical => spec.family = "classical".into(),
            PiRule::CyclotomicSymbolic => spec.family = "cyclotomic".into(),
            PiRule::CyclotomicAt(q) => {
                spec.family = "cyclotomic_at".into();
                spec.q0 = Some(r.format(q));
            }
            PiRule::FromGcdMorphic(src) => {
                spec.family = "gcd_morphic".into();
                match src {
                    GcdSource::Explicit(v) => {
                        spec.source = Some("explicit".into());
                        spec.a = Some(v.iter().map(|x| x.to_string()).collect());
                    }
                    GcdSource::Fibonacci => spec.source = Some("fibonacci".into()),
                    GcdSource::Identity => spec.source = Some("identity".into()),
                    GcdSource::Ones => spec.source = Some("ones".into()),
                }
            }
            PiRule::Custom { values, default } => {
                spec.family = "custom".into();
                spec.values = Some(values.iter().map(|(k, v)| (k.to_string(), r.format(v))).collect());
                spec.default = Some(r.format(default));
            }
            PiRule::Transformed { base, h } => {
                spec.family = "transformed".into();
                spec.h = Some(*h);
                spec.base = Some(Box::new(base.to_spec()));
            }
        }
        spec
    }
}

fn verify_gcd_morphic(src: &GcdSource, up_to: u64) -> Result<()> {
    let vals: Vec<BigInt> = (1..=up_to)
        .map(|n| src.value(n).ok_or_else(|| Error::Malformed(format!("a({n}) missing"))))
        .collect::<Result<_>>()?;
    if let Some(i) = vals.iter().position(|v| v.is_zero()) {
        return Err(Error::Malformed(format!("a({}) = 0", i + 1)));
    }
    for n in 1..=up_to {
        for m in n..=up_to {
            let g = vals[(n - 1) as usize].gcd(&vals[(m - 1) as usize]);
            if g != vals[(gcd(n, m) - 1) as usize].abs() {
                return Err(Error::NotGcdMorphic { n, m });
            }
        }
    }
    for n in 2..=up_to {
        let v = mobius_product(n, |k| vals[(k - 1) as usize].clone());
        if !v.is_integer() {
            return Err(Error::Malformed(format!("Möbius product at n = {n} is {v}, not an integer")));
        }
    }
    Ok(())
}

/// The π-sequence of a never-zero GCD-morphic integer sequence, verified up to `up_to`.
pub fn pi_from_gcd_morphic(ring: &Ring, src: GcdSource, up_to: u64) -> Result<PiSequence> {
    let src = match src {
        GcdSource::Explicit(v) => {
            if (v.len() as u64) < up_to {
                return Err(Error::Malformed(format!("need {up_to} values, got {}", v.len())));
            }
            GcdSource::Explicit(v[..up_to as usize].to_vec())
        }
        s => {
            verify_gcd_morphic(&s, up_to)?;
            s
        }
    };
    PiSequence::new(ring, PiRule::FromGcdMorphic(src))
}

/// JSON form of a π-sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiSpec {
    pub family: String,
    pub ring: Ring,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<PiSpec>>,
}

impl PiSpec {
    pub fn simple(family: &str, ring: Ring) -> Self {
        PiSpec { family: family.into(), ring, values: None, default: None, q0: None, source: None, a: None, h: None, base: None }
    }

    pub fn build(&self) -> Result<PiSequence> {
        let r = &self.ring;
        let rule = match self.family.as_str() {
            "all_ones" => PiRule::AllOnes,
            "classical" => PiRule::Classical,
            "cyclotomic" => PiRule::CyclotomicSymbolic,
            "cyclotomic_at" => {
                let q = self.q0.as_deref().ok_or_else(|| Error::Malformed("cyclotomic_at needs q0".into()))?;
                PiRule::CyclotomicAt(r.parse(q)?)
            }
            "gcd_morphic" => {
                let src = match self.source.as_deref().unwrap_or("explicit") {
                    "fibonacci" => GcdSource::Fibonacci,
                    "identity" => GcdSource::Identity,
                    "ones" => GcdSource::Ones,
                    "explicit" => {
                        let a = self.a.as_ref().ok_or_else(|| Error::Malformed("explicit gcd_morphic needs a".into()))?;
                        let v = a
                            .iter()
                            .map(|s| s.trim().parse::<BigInt>().map_err(|_| Error::Parse { input: s.clone(), ring: "Z".into() }))
                            .collect::<Result<Vec<_>>>()?;
                        let n = v.len() as u64;
                        return pi_from_gcd_morphic(r, GcdSource::Explicit(v), n);
                    }
                    other => return Err(Error::Malformed(format!("unknown gcd_morphic source `{other}`"))),
                };
                PiRule::FromGcdMorphic(src)
            }
            "custom" => {
                let mut values = BTreeMap::new();
                for (k, v) in self.values.iter().flatten() {
                    let n: u64 = k.parse().map_err(|_| Error::Malformed(format!("bad index `{k}`")))?;
                    values.insert(n, r.parse(v)?);
                }
                let default = match &self.default {
                    Some(d) => r.parse(d)?,
                    None => r.one(),
                };
                PiRule::Custom { values, default }
            }
            "transformed" => {
                let base = self.base.as_ref().ok_or_else(|| Error::Malformed("transformed needs base".into()))?;
                let h = self.h.ok_or_else(|| Error::Malformed("transformed needs h".into()))?;
                return Arc::new(base.build()?).h_transform(h);
            }
            other => return Err(Error::Malformed(format!("unknown π family `{other}`"))),
        };
        PiSequence::new(r, rule)
    }
}

/// Gaussian binomial by the q-Pascal recurrence `[n,k] = [n−1,k−1] + q^k·[n−1,k]`.
pub fn gaussian_binomial(n: u64, m: u64) -> IntPoly {
    if m > n {
        return IntPoly::zero();
    }
    let mut row = vec![IntPoly::one()];
    for i in 1..=n as usize {
        let mut next = vec![IntPoly::one(); i + 1];
        for j in 1..i {
            next[j] = &row[j - 1] + &(&IntPoly::monomial(j) * &row[j]);
        }
        row = next;
    }
    row[m as usize].clone()
}
