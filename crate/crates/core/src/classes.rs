//! Class-valued power series and their rational forms `Σ a_n t^n / ∏(1 − t^{h_i})`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::matrix::ModuleInvariants;
use crate::numtheory::factorize;
use crate::ring::{Elem, Ring};

/// Basis symbol of a class group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassKey {
    /// A free summand `[𝕜]`.
    Free,
    /// A cyclic summand `[𝕜/(q)]` with `q` a prime power.
    Torsion(Elem),
    /// Rank (or dimension) in `K(𝕜) ≅ ℤ`.
    Rank,
    /// `p`-primary length in `𝒦_+`.
    Plus(u64),
}

/// Finite formal ℤ-combination of class symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassVec(BTreeMap<ClassKey, i64>);

impl ClassVec {
    pub fn zero() -> Self {
        ClassVec(BTreeMap::new())
    }

    pub fn single(key: ClassKey, c: i64) -> Self {
        let mut v = Self::zero();
        v.add_term(key, c);
        v
    }

    pub fn add_term(&mut self, key: ClassKey, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.0.entry(key.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<ClassKey, i64> {
        &self.0
    }

    pub fn get(&self, key: &ClassKey) -> i64 {
        self.0.get(key).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.0 {
            out.add_term(k.clone(), *c);
        }
        out
    }

    pub fn scale(&self, s: i64) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.0 {
            out.add_term(k.clone(), c * s);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    /// Split-group class: free rank plus one symbol per prime-power cyclic summand.
    pub fn symbolic(inv: &ModuleInvariants) -> Self {
        let r = &inv.ring;
        let mut v = Self::single(ClassKey::Free, inv.free_rank as i64);
        for t in &inv.torsion_factors {
            match r {
                Ring::PLocal(_) => v.add_term(ClassKey::Torsion(t.clone()), 1),
                _ => match r.lift_int(t) {
                    Some(n) => {
                        let n: u64 = n.try_into().expect("torsion factor fits in u64");
                        for (p, e) in factorize(n) {
                            v.add_term(ClassKey::Torsion(r.from_bigint(&BigInt::from(p).pow(e))), 1);
                        }
                    }
                    None => v.add_term(ClassKey::Torsion(t.clone()), 1),
                },
            }
        }
        v
    }

    /// Class in `K(𝕜) ≅ ℤ` by rank.
    pub fn rank(inv: &ModuleInvariants) -> Self {
        Self::single(ClassKey::Rank, inv.free_rank as i64)
    }

    /// `[M]_+`: per-prime lengths when `M` is torsion, else 0.
    pub fn plus(inv: &ModuleInvariants) -> Self {
        let mut v = Self::zero();
        if inv.free_rank > 0 {
            return v;
        }
        for (p, k) in inv.elementary_divisors() {
            v.add_term(ClassKey::Plus(p), k as i64);
        }
        v
    }

    pub fn display(&self, ring: &Ring) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.0.iter().enumerate() {
            let sym = key_symbol(k, ring);
            let (sign, mag) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            match (sym.is_empty(), mag) {
                (true, m) => out.push_str(&m.to_string()),
                (false, 1) => out.push_str(&sym),
                (false, m) => out.push_str(&format!("{m}{sym}")),
            }
        }
        out
    }

    fn is_atom(&self) -> bool {
        self.0.len() == 1 && self.0.values().all(|&c| c > 0)
    }
}

fn key_symbol(k: &ClassKey, ring: &Ring) -> String {
    match k {
        ClassKey::Free => format!("[{ring}]"),
        ClassKey::Torsion(q) => match ring {
            Ring::Integers | Ring::IntegersMod(_) | Ring::PLocal(_) => format!("[Z/{}]", ring.format(q)),
            _ => format!("[{ring}/({})]", ring.format(q)),
        },
        ClassKey::Rank => String::new(),
        ClassKey::Plus(p) => format!("[Z/{p}]_+"),
    }
}

/// `num(t) / ∏_i (1 − t^{den_i})` with class-valued Laurent numerator.
#[derive(Clone, Debug)]
pub struct RationalClass {
    pub ring: Ring,
    pub num: BTreeMap<i64, ClassVec>,
    pub den: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalClassJson {
    pub numerator: Vec<(i64, String)>,
    pub denominator_periods: Vec<u64>,
    pub text: String,
}

fn mul_one_minus(num: &BTreeMap<i64, ClassVec>, h: u64) -> BTreeMap<i64, ClassVec> {
    let mut out: BTreeMap<i64, ClassVec> = BTreeMap::new();
    for (n, c) in num {
        let e = out.entry(*n).or_default();
        *e = e.add(c);
        let e = out.entry(*n + h as i64).or_default();
        *e = e.sub(c);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

impl RationalClass {
    pub fn new(ring: &Ring, num: BTreeMap<i64, ClassVec>, den: Vec<u64>) -> Self {
        let mut num = num;
        num.retain(|_, c| !c.is_zero());
        let mut den = den;
        den.sort_unstable();
        RationalClass { ring: ring.clone(), num, den }
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::new(ring, BTreeMap::new(), Vec::new())
    }

    /// `c / (1 − t^h)`.
    pub fn periodic(ring: &Ring, c: ClassVec, h: u64) -> Self {
        Self::new(ring, BTreeMap::from([(0, c)]), vec![h])
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Multiply by `∏(1 − t^a) / ∏(1 − t^b)`.
    pub fn scale_ratio(&self, num_periods: &[u64], den_periods: &[u64]) -> Self {
        let mut num = self.num.clone();
        for &h in num_periods {
            num = mul_one_minus(&num, h);
        }
        let mut den = self.den.clone();
        den.extend_from_slice(den_periods);
        Self::new(&self.ring, num, den)
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::new(&self.ring, self.num.iter().map(|(n, c)| (n + k, c.clone())).collect(), self.den.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let a = self.scale_ratio(&other.den, &[]);
        let b = other.scale_ratio(&self.den, &[]);
        let mut num = a.num;
        for (n, c) in b.num {
            let e = num.entry(n).or_default();
            *e = e.add(&c);
        }
        let mut den = self.den.clone();
        den.extend_from_slice(&other.den);
        Self::new(&self.ring, num, den)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ring, self.num.iter().map(|(n, c)| (*n, c.scale(-1))).collect(), self.den.clone())
    }

    /// Exact equality as rational functions.
    pub fn same_as(&self, other: &Self) -> bool {
        let a = self.scale_ratio(&other.den, &[]);
        let b = other.scale_ratio(&self.den, &[]);
        a.num == b.num
    }

    /// Power-series coefficients for `lo ≤ n ≤ hi`.
    pub fn expand(&self, lo: i64, hi: i64) -> Vec<ClassVec> {
        if hi < lo {
            return Vec::new();
        }
        let base = self.num.keys().next().copied().unwrap_or(lo).min(lo);
        let len = (hi - base + 1) as usize;
        let mut s = vec![ClassVec::zero(); len];
        for (n, c) in &self.num {
            if *n <= hi {
                s[(n - base) as usize] = c.clone();
            }
        }
        for &h in &self.den {
            let h = h as usize;
            for i in h..len {
                let prev = s[i - h].clone();
                s[i] = s[i].add(&prev);
            }
        }
        s.split_off((lo - base) as usize)
    }

    pub fn display(&self) -> String {
        let num = if self.num.is_empty() {
            "0".to_string()
        } else {
            let parts: Vec<String> = self
                .num
                .iter()
                .map(|(n, c)| {
                    let body = c.display(&self.ring);
                    let tp = match n {
                        0 => String::new(),
                        1 => "t".into(),
                        _ => format!("t^{n}"),
                    };
                    if tp.is_empty() {
                        body
                    } else if c.is_atom() && c.terms().keys().all(|k| *k != ClassKey::Rank) {
                        format!("{body}{tp}")
                    } else if c.terms().len() == 1 && c.terms().keys().all(|k| *k == ClassKey::Rank) {
                        let v = c.get(&ClassKey::Rank);
                        match v {
                            1 => tp,
                            -1 => format!("-{tp}"),
                            _ => format!("{v}{tp}"),
                        }
                    } else {
                        format!("({body}){tp}")
                    }
                })
                .collect();
            let joined = parts.join(" + ").replace("+ -", "- ");
            if self.den.is_empty() || parts.len() == 1 {
                joined
            } else {
                format!("({joined})")
            }
        };
        if self.den.is_empty() || self.num.is_empty() {
            return num;
        }
        let den: String = self
            .den
            .iter()
            .map(|&h| if h == 1 { "(1-t)".to_string() } else { format!("(1-t^{h})") })
            .collect();
        format!("{num}/{den}")
    }

    pub fn to_json(&self) -> RationalClassJson {
        RationalClassJson {
            numerator: self.num.iter().map(|(n, c)| (*n, c.display(&self.ring))).collect(),
            denominator_periods: self.den.clone(),
            text: self.display(),
        }
    }
}

impl fmt::Display for RationalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

/// Fit `Σ s_n t^n` (given for consecutive degrees from `lo`) as `num/(1 − t^h)` with the
/// smallest eventual period `h ≤ max_period`, using at least two periods of evidence.
/// A tail of zeros gives a polynomial.
pub fn fit_series(ring: &Ring, lo: i64, s: &[ClassVec], max_period: u64) -> Option<RationalClass> {
    let len = s.len();
    if len == 0 {
        return Some(RationalClass::zero(ring));
    }
    for h in 1..=max_period as usize {
        if 2 * h > len {
            break;
        }
        let mut n0 = len - h;
        while n0 > 0 && s[n0 - 1] == s[n0 - 1 + h] {
            n0 -= 1;
        }
        if len - n0 < 2 * h {
            continue;
        }
        if s[n0..n0 + h].iter().all(|c| c.is_zero()) {
            let num = (0..n0).map(|i| (lo + i as i64, s[i].clone())).collect();
            return Some(RationalClass::new(ring, num, Vec::new()));
        }
        let num = (0..n0 + h)
            .map(|i| {
                let prev = if i >= h { s[i - h].clone() } else { ClassVec::zero() };
                (lo + i as i64, s[i].sub(&prev))
            })
            .collect();
        return Some(RationalClass::new(ring, num, vec![h as u64]));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_periodic() {
        let z = Ring::Integers;
        let c = ClassVec::single(ClassKey::Torsion(z.from_int(2)), 1);
        let s: Vec<ClassVec> = (0..12).map(|n| if n % 2 == 0 { c.clone() } else { ClassVec::zero() }).collect();
        let f = fit_series(&z, 0, &s, 8).unwrap();
        assert_eq!(f.display(), "[Z/2]/(1-t^2)");
        assert_eq!(f.expand(0, 11), s);
        let one = ClassVec::single(ClassKey::Rank, 1);
        let f = fit_series(&z, 0, &vec![one.clone(); 6], 4).unwrap();
        assert_eq!(f.display(), "1/(1-t)");
    }

    #[test]
    fn fit_polynomial_and_shifted() {
        let z = Ring::Integers;
        let one = ClassVec::single(ClassKey::Free, 1);
        let mut s = vec![one.clone()];
        s.extend(vec![ClassVec::zero(); 7]);
        let f = fit_series(&z, 0, &s, 4).unwrap();
        assert!(f.den.is_empty());
        assert_eq!(f.display(), "[Z]");
        let s: Vec<ClassVec> = (0..10).map(|n| if n >= 3 { one.clone() } else { ClassVec::zero() }).collect();
        let f = fit_series(&z, 0, &s, 4).unwrap();
        assert_eq!(f.display(), "[Z]t^3/(1-t)");
        assert_eq!(f.expand(0, 9), s);
    }

    #[test]
    fn rational_identities() {
        let z = Ring::Integers;
        let c = ClassVec::single(ClassKey::Torsion(z.from_int(2)), 1);
        let mah4 = RationalClass::periodic(&z, c.clone(), 4);
        let mah2 = RationalClass::periodic(&z, c.clone(), 2);
        assert!(mah4.scale_ratio(&[4], &[2]).same_as(&mah2));
        assert!(!mah4.same_as(&mah2));
        let sum = mah2.add(&mah2.neg());
        assert!(sum.same_as(&RationalClass::zero(&z)));
        assert_eq!(mah4.expand(0, 8)[4], c);
    }

    #[test]
    fn class_maps() {
        let z = Ring::Integers;
        let inv = ModuleInvariants::from_diagonal(&z, &[z.from_int(12), z.zero()]);
        let s = ClassVec::symbolic(&inv);
        assert_eq!(s.get(&ClassKey::Free), 1);
        assert_eq!(s.get(&ClassKey::Torsion(z.from_int(4))), 1);
        assert_eq!(s.get(&ClassKey::Torsion(z.from_int(3))), 1);
        assert!(ClassVec::plus(&inv).is_zero());
        let t = ModuleInvariants::from_diagonal(&z, &[z.from_int(12)]);
        assert_eq!(ClassVec::plus(&t).get(&ClassKey::Plus(2)), 2);
        assert_eq!(ClassVec::rank(&inv).get(&ClassKey::Rank), 1);
    }
}
