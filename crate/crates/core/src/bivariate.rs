//! The two-variable algebra `D ⊗ D` and the syzygies of `(y^[1], x^[1])`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraContext;
use crate::error::{Error, Result};
use crate::lattice::{Lin, Vector};
use crate::matrix::{ExactMatrix, ModuleInvariants, ModuleInvariantsJson};
use crate::ring::{Elem, Ring};

/// Largest `p^r` handled by the counterexample.
pub const MAX_PRIME_POWER: u64 = 16;

/// Finite sum of `c·x^[a]y^[b]`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedElement {
    ctx: Arc<AlgebraContext>,
    terms: BTreeMap<(u64, u64), Elem>,
}

impl BigradedElement {
    pub fn zero(ctx: &Arc<AlgebraContext>) -> Self {
        BigradedElement { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    /// `c·x^[a]y^[b]`.
    pub fn monomial(ctx: &Arc<AlgebraContext>, a: u64, b: u64, c: Elem) -> Self {
        let mut e = Self::zero(ctx);
        e.add_term((a, b), c);
        e
    }

    fn add_term(&mut self, k: (u64, u64), c: Elem) {
        let r = self.ctx.ring();
        let v = match self.terms.remove(&k) {
            Some(old) => r.add(&old, &c),
            None => c,
        };
        if !r.is_zero(&v) {
            self.terms.insert(k, v);
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u64, u64), Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let r = self.ctx.ring();
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, r.neg(c));
        }
        out
    }

    /// `x^[a]y^[b]·x^[c]y^[d] = C(a+c,a)·C(b+d,b)·x^[a+c]y^[b+d]`.
    pub fn multiply(&self, other: &Self) -> Self {
        let r = self.ctx.ring();
        let mut out = Self::zero(&self.ctx);
        for ((a, b), u) in &self.terms {
            for ((c, d), v) in &other.terms {
                let k = r.mul(&self.ctx.c(a + c, *a), &self.ctx.c(b + d, *b));
                out.add_term((a + c, b + d), r.mul(&r.mul(u, v), &k));
            }
        }
        out
    }
}

/// Basis of syzygies `(u, w)` with `u·x^[a]y^[b−1]·y^[1] + w·x^[a−1]y^[b]·x^[1] = 0`.
fn syzygies(lin: &Lin, ctx: &AlgebraContext, a: u64, b: u64) -> Vec<Vector> {
    let r = ctx.ring();
    let u = if b >= 1 { ctx.c(b, 1) } else { r.zero() };
    let w = if a >= 1 { ctx.c(a, 1) } else { r.zero() };
    let m = ExactMatrix::from_rows(r, vec![vec![u, w]]).expect("one row").with_ring(&lin.comp);
    let mut k = lin.kernel(&m);
    // Components living in a zero bidegree are not there.
    for v in &mut k {
        if b == 0 {
            v[0] = lin.comp.zero();
        }
        if a == 0 {
            v[1] = lin.comp.zero();
        }
    }
    lin.span(2, &k)
}

/// Image of a bidegree-`(a', b')` syzygy at `(a, b)` under multiplication by `x^[a−a']y^[b−b']`.
fn push_up(ctx: &AlgebraContext, v: &[Elem], from: (u64, u64), to: (u64, u64)) -> Vector {
    let r = ctx.ring();
    let ((a1, b1), (a, b)) = (from, to);
    let first = if b1 >= 1 { r.mul(&v[0], &r.mul(&ctx.c(a, a1), &ctx.c(b - 1, b1 - 1))) } else { r.zero() };
    let second = if a1 >= 1 { r.mul(&v[1], &r.mul(&ctx.c(a - 1, a1 - 1), &ctx.c(b, b1))) } else { r.zero() };
    vec![first, second]
}

/// `Syz_{(a,b)} / (D₊·Syz)_{(a,b)}`: syzygies at `(a,b)` not generated from lower bidegrees.
pub fn new_syzygies(ctx: &AlgebraContext, a: u64, b: u64) -> Result<ModuleInvariants> {
    let lin = Lin::new(ctx.ring())?;
    let here = syzygies(&lin, ctx, a, b);
    let mut below = Vec::new();
    for a1 in 0..=a {
        for b1 in 0..=b {
            if (a1, b1) == (a, b) {
                continue;
            }
            for v in syzygies(&lin, ctx, a1, b1) {
                let v = lin.reduce_vec(&v);
                below.push(push_up(ctx, &v, (a1, b1), (a, b)));
            }
        }
    }
    let below: Vec<Vector> = below.iter().map(|v| v.iter().map(|x| lin.lift(x)).collect()).collect();
    Ok(lin.quotient(2, &here, &lin.span(2, &below))?.invariants)
}

/// Bidegrees through `(bound, bound)` that need a new syzygy generator.
pub fn syzygy_generators(ctx: &AlgebraContext, bound: u64) -> Result<Vec<((u64, u64), ModuleInvariants)>> {
    let mut out = Vec::new();
    for a in 0..=bound {
        for b in 0..=bound {
            let q = new_syzygies(ctx, a, b)?;
            if !q.is_zero() {
                out.push(((a, b), q));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    pub p: u64,
    pub r: u32,
    /// `(y^[q−1]x^[q])·y^[1] − (y^[q]x^[q−1])·x^[1] = 0` with `q = p^r`.
    pub identity_holds: bool,
    /// New syzygies at `(q, q)`.
    pub quotient: ModuleInvariants,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReportJson {
    pub p: u64,
    pub r: u32,
    pub bidegree: (u64, u64),
    pub identity_holds: bool,
    pub not_generated_below: bool,
    pub quotient: ModuleInvariantsJson,
}

impl CounterexampleReport {
    pub fn q(&self) -> u64 {
        self.p.pow(self.r)
    }

    pub fn not_generated_below(&self) -> bool {
        !self.quotient.is_zero()
    }

    pub fn to_json(&self) -> CounterexampleReportJson {
        CounterexampleReportJson {
            p: self.p,
            r: self.r,
            bidegree: (self.q(), self.q()),
            identity_holds: self.identity_holds,
            not_generated_below: self.not_generated_below(),
            quotient: self.quotient.to_json(),
        }
    }
}

pub fn bivariate_counterexample(p: u64, r: u32) -> Result<CounterexampleReport> {
    let ring = Ring::zloc(p)?;
    if r == 0 {
        return Err(Error::Precondition("r must be at least 1".into()));
    }
    let q = p.checked_pow(r).filter(|&q| q <= MAX_PRIME_POWER).ok_or_else(|| Error::Precondition(format!("p^r exceeds {MAX_PRIME_POWER}")))?;
    let ctx = AlgebraContext::classical(&ring);
    let one = ring.one();
    let x1 = BigradedElement::monomial(&ctx, 1, 0, one.clone());
    let y1 = BigradedElement::monomial(&ctx, 0, 1, one.clone());
    let s = BigradedElement::monomial(&ctx, q, q - 1, one.clone());
    let t = BigradedElement::monomial(&ctx, q - 1, q, one);
    let identity_holds = s.multiply(&y1).sub(&t.multiply(&x1)).is_zero();
    let quotient = new_syzygies(&ctx, q, q)?;
    Ok(CounterexampleReport { p, r, identity_holds, quotient })
}
