//! Degree bounds for `Tor_1` of ideals modulo π-torsion, and the bounded-torsion condition.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraContext;
use crate::error::{Error, Result};
use crate::lattice::{Lin, Vector};
use crate::matrix::ExactMatrix;
use crate::module::free::FreeModule;
use crate::module::resolve::tor1_of_quotient;
use crate::par;
use crate::pi::PiSequence;
use crate::ring::{Elem, Ring};

/// Largest `m` scanned when computing torsion exponents and searching for `N`.
pub const DEFAULT_SEARCH_LIMIT: u64 = 512;

/// The ideal `I = Σ_i 𝔞_i·x^[i]·D` for a chain `𝔞_0 ⊆ … ⊆ 𝔞_d`.
#[derive(Clone, Debug)]
pub struct IdealSpec {
    pub context: Arc<AlgebraContext>,
    /// Generators of `𝔞_i`, for `0 ≤ i ≤ d`.
    pub chain: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealSpecJson {
    pub chain: Vec<Vec<String>>,
}

impl IdealSpec {
    pub fn new(context: &Arc<AlgebraContext>, chain: Vec<Vec<Elem>>) -> Result<Self> {
        if chain.is_empty() {
            return Err(Error::Precondition("the ideal chain is empty".into()));
        }
        let r = context.ring();
        for i in 1..chain.len() {
            for g in &chain[i - 1] {
                if !r.ideal_contains(&chain[i], g)? {
                    return Err(Error::Precondition(format!("𝔞_{} is not contained in 𝔞_{i}", i - 1)));
                }
            }
        }
        Ok(IdealSpec { context: context.clone(), chain })
    }

    pub fn from_json(context: &Arc<AlgebraContext>, j: &IdealSpecJson) -> Result<Self> {
        let r = context.ring();
        let chain = j.chain.iter().map(|gs| gs.iter().map(|s| r.parse(s)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Self::new(context, chain)
    }

    pub fn to_json(&self) -> IdealSpecJson {
        let r = self.context.ring();
        IdealSpecJson { chain: self.chain.iter().map(|gs| gs.iter().map(|x| r.format(x)).collect()).collect() }
    }

    pub fn d(&self) -> usize {
        self.chain.len() - 1
    }

    /// Canonical generators `g_i` of `𝔞_i`.
    pub fn chain_generators(&self) -> Result<Vec<Elem>> {
        let r = self.context.ring();
        self.chain.iter().map(|gs| r.ideal_generator(gs)).collect()
    }

    /// Generator of the actual slice `I_n = Σ_{i ≤ min(n,d)} 𝔞_i·C(n,i)`.
    pub fn slice_generator(&self, n: u64) -> Result<Elem> {
        let r = self.context.ring();
        let g = self.chain_generators()?;
        let mut acc = r.zero();
        for (i, gi) in g.iter().enumerate().take(n as usize + 1) {
            acc = r.gcd(&acc, &r.mul(gi, &self.context.c(n, i as u64)))?;
        }
        Ok(acc)
    }

    /// Random chain over `ctx`: up to three generators with degrees in `[0, d]` and
    /// coefficients in `[0, 60]`, closed upward by accumulating gcds.
    pub fn random(ctx: &Arc<AlgebraContext>, d: usize, rng: &mut impl Rng) -> Result<Self> {
        let r = ctx.ring();
        let k = rng.gen_range(1..=3);
        let mut gens: Vec<(usize, i64)> = (0..k).map(|_| (rng.gen_range(0..=d), rng.gen_range(0..=60))).collect();
        gens[0].0 = d;
        let mut chain = Vec::with_capacity(d + 1);
        let mut acc = r.zero();
        for i in 0..=d {
            for (deg, c) in &gens {
                if *deg == i {
                    acc = r.gcd(&acc, &r.from_int(*c))?;
                }
            }
            chain.push(vec![acc.clone()]);
        }
        Self::new(ctx, chain)
    }
}

/// Integer model of a cyclic quotient `𝕜/(x)`: its order for ℤ/n, `p^v` for ℤ_(p), 0 when infinite.
fn model(ring: &Ring, x: &Elem) -> BigInt {
    match ring {
        Ring::Integers => x.as_int().abs(),
        Ring::IntegersMod(n) => x.as_int().gcd(&BigInt::from(*n)),
        Ring::PLocal(p) => match ring.valuation(x, *p) {
            Some(v) => BigInt::from(*p).pow(v),
            None => BigInt::zero(),
        },
        _ => {
            if ring.is_zero(x) {
                BigInt::zero()
            } else {
                BigInt::one()
            }
        }
    }
}

fn require_ring(ring: &Ring, op: &'static str) -> Result<()> {
    match ring {
        Ring::Integers | Ring::PLocal(_) | Ring::IntegersMod(_) | Ring::PrimeField(_) | Ring::Rationals => Ok(()),
        _ => Err(Error::UnsupportedRing { ring: ring.to_string(), op }),
    }
}

/// Generator of the π-torsion `T(𝕜) = {c : a(m)·c = 0 for some m}`.
pub fn ring_torsion(pi: &PiSequence, limit: u64) -> Result<Elem> {
    let r = pi.ring();
    require_ring(r, "ring_torsion")?;
    if let Ring::IntegersMod(n) = r {
        let n = BigInt::from(*n);
        let mut t = BigInt::zero();
        for m in 1..=limit {
            t = t.gcd(&(&n / pi.a(m).as_int().gcd(&n)));
            if t.is_one() {
                break;
            }
        }
        return Ok(r.from_bigint(&t));
    }
    let killed = (1..=limit).any(|m| r.is_zero(&pi.a(m)));
    Ok(if killed { r.one() } else { r.zero() })
}

/// `a^[h](m)` for `1 ≤ m ≤ limit`.
fn transformed_a(pi: &Arc<PiSequence>, h: u64, limit: u64) -> Result<Vec<Elem>> {
    let t = pi.h_transform(h)?;
    Ok((1..=limit).map(|m| t.a(m)).collect())
}

/// Annihilator (integer model) of `T^[h](𝕜/(g))`; zero means only `0` annihilates it.
fn torsion_exponent(ring: &Ring, g: &Elem, a: &[Elem]) -> BigInt {
    let gm = model(ring, g);
    if gm.is_zero() {
        return if a.iter().any(|x| ring.is_zero(x)) { BigInt::zero() } else { BigInt::one() };
    }
    a.iter().fold(BigInt::one(), |acc, x| acc.lcm(&gm.gcd(&model(ring, x))))
}

fn annihilates(ring: &Ring, exponent: &BigInt, a: &Elem) -> bool {
    if exponent.is_zero() {
        return ring.is_zero(a);
    }
    let am = model(ring, a);
    am.is_zero() || (am % exponent).is_zero()
}

/// Smallest `N ≤ limit` with `a^[h](N)` killing every exponent for `h`.
fn smallest_n(ring: &Ring, needs: &[(u64, BigInt)], tables: &[(u64, Vec<Elem>)]) -> Option<u64> {
    let limit = tables.first().map(|(_, a)| a.len() as u64).unwrap_or(1);
    (1..=limit).find(|&n| {
        needs.iter().all(|(h, e)| {
            let a = &tables.iter().find(|(k, _)| k == h).unwrap().1[(n - 1) as usize];
            annihilates(ring, e, a)
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionBound {
    /// `N` from the actual slices `I_i`, `i ≤ 3d`.
    pub n: Option<u64>,
    /// `N` with the chain extended constantly by `𝔞_d`.
    pub n_chain: Option<u64>,
    pub ring_torsion: String,
}

/// Smallest `N` with `a^[h](N)` killing `T^[h](𝕜/(𝔞_i + T(𝕜)))` for `1 ≤ h ≤ 2d`, `0 ≤ i ≤ 3d`.
pub fn torsion_bound_n(spec: &IdealSpec, limit: u64) -> Result<TorsionBound> {
    let ctx = &spec.context;
    let r = ctx.ring();
    require_ring(r, "torsion_bound_N")?;
    let d = spec.d() as u64;
    let t = ring_torsion(ctx.pi(), limit)?;
    let hs: Vec<u64> = (1..=(2 * d).max(1)).collect();
    let tables: Vec<(u64, Vec<Elem>)> = hs.iter().map(|&h| transformed_a(ctx.pi_arc(), h, limit).map(|a| (h, a))).collect::<Result<_>>()?;
    let chain = spec.chain_generators()?;
    let mut slices = Vec::new();
    let mut extended = Vec::new();
    for i in 0..=3 * d {
        slices.push(r.gcd(&spec.slice_generator(i)?, &t)?);
        extended.push(r.gcd(&chain[(i as usize).min(chain.len() - 1)], &t)?);
    }
    let needs = |gs: &[Elem]| -> Vec<(u64, BigInt)> {
        let mut out = Vec::new();
        for (h, a) in &tables {
            for g in gs {
                let e = torsion_exponent(r, g, a);
                if !e.is_one() {
                    out.push((*h, e));
                }
            }
        }
        out
    };
    Ok(TorsionBound {
        n: smallest_n(r, &needs(&slices), &tables),
        n_chain: smallest_n(r, &needs(&extended), &tables),
        ring_torsion: r.format(&t),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    /// `None` when no `N ≤ search_limit` works.
    pub n: Option<u64>,
    pub d: usize,
    pub search_limit: u64,
    /// `(2N+3)·d`, taking `N = search_limit + 1` as a lower bound when `n` is `None`.
    pub bound: i64,
    /// Top degree of `Tor_1(I/T(I))` found below the horizon.
    pub computed_t1: Option<i64>,
    pub pass: bool,
    pub horizon: i64,
    pub n_chain: Option<u64>,
    pub pass_chain: bool,
    pub chain: IdealSpecJson,
}

/// Compare `t_1(I/T(I))` with `(2N+3)·d`.
pub fn t1_bound_check(spec: &IdealSpec, limit: u64) -> Result<BoundReport> {
    let ctx = &spec.context;
    let r = ctx.ring();
    let lin = Lin::new(r)?;
    let tb = torsion_bound_n(spec, limit)?;
    let d = spec.d();
    let bound = |n: Option<u64>| (2 * n.unwrap_or(limit + 1) as i64 + 3) * d as i64;
    let b = bound(tb.n);
    let b_chain = bound(tb.n_chain);
    let window = [(tb.n, b), (tb.n_chain, b_chain)].iter().filter(|(n, _)| n.is_some()).map(|(_, b)| *b).max();
    let horizon = window.unwrap_or(0).max(3 * d as i64) + 2 * d as i64 + 4;
    let g = spec.chain_generators()?;
    let live: Vec<usize> = (0..=d).filter(|&i| !r.is_zero(&g[i])).collect();
    let f = FreeModule::new(ctx, live.iter().map(|&i| i as i64).collect());
    let t = ring_torsion(ctx.pi(), limit)?;
    let tsub: Vec<Vector> = if r.is_zero(&t) { Vec::new() } else { vec![vec![lin.lift(&t)]] };
    let k: Vec<Vec<Vector>> = par::map_range(0, horizon, |n| {
        let basis = f.basis(n);
        let row: Vec<Elem> = basis.iter().map(|&j| r.mul(&g[live[j]], &ctx.c(n as u64, live[j] as u64))).collect();
        let phi = ExactMatrix::from_rows(r, vec![row]).expect("one row").with_ring(&lin.comp);
        lin.preimage(&phi, &tsub)
    });
    let ex = tor1_of_quotient(&lin, &f, 0, &k)?;
    let computed_t1 = ex.tor.iter().filter(|(_, inv)| !inv.is_zero()).map(|(n, _)| *n).max();
    let passes = |b: i64| computed_t1.is_none_or(|t| t <= b);
    Ok(BoundReport {
        n: tb.n,
        d,
        search_limit: limit,
        bound: b,
        computed_t1,
        pass: passes(b),
        horizon,
        n_chain: tb.n_chain,
        pass_chain: passes(b_chain),
        chain: spec.to_json(),
    })
}

/// Seeded batch of random ideals over ℤ with classical π and `1 ≤ d ≤ max_d`.
pub fn random_batch(count: usize, max_d: usize, seed: u64) -> Result<Vec<IdealSpec>> {
    let ctx = AlgebraContext::classical(&Ring::Integers);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.gen_range(1..=max_d.max(1));
            IdealSpec::random(&ctx, d, &mut rng)
        })
        .collect()
}

/// Run `t1_bound_check` over a batch, one ideal per task.
pub fn check_batch(specs: &[IdealSpec], limit: u64) -> Vec<Result<BoundReport>> {
    par::map_slice(specs, |s| t1_bound_check(s, limit))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum A2Verdict {
    /// `a^[h](n)` kills the torsion; `exponent` is its annihilator.
    Bounded { n: u64, exponent: String },
    Unbounded,
    Inconclusive { searched: u64 },
}

/// Whether `T^[h](𝕜/𝔞)` is killed by a single `a^[h](n)`.
pub fn a2_condition_check(pi: &Arc<PiSequence>, ideal: &[Elem], h: u64, limit: u64) -> Result<A2Verdict> {
    let r = pi.ring();
    require_ring(r, "a2_condition_check")?;
    let g = r.ideal_generator(ideal)?;
    let a = transformed_a(pi, h, limit)?;
    let e = torsion_exponent(r, &g, &a);
    if let Some(n) = (1..=limit).find(|&n| annihilates(r, &e, &a[(n - 1) as usize])) {
        return Ok(A2Verdict::Bounded { n, exponent: e.to_string() });
    }
    // Over ℤ the exponent is exact; a nonzero exponent no a^[h](n) reaches means unbounded.
    if matches!(r, Ring::Integers) && !e.is_zero() && a.iter().all(|x| !r.is_zero(x)) {
        let reached = (1..=limit).any(|n| (model(r, &a[(n - 1) as usize]) % &e).is_zero());
        if !reached && limit >= DEFAULT_SEARCH_LIMIT {
            return Ok(A2Verdict::Unbounded);
        }
    }
    Ok(A2Verdict::Inconclusive { searched: limit })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zspec(chain: &[i64]) -> IdealSpec {
        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        IdealSpec::new(&ctx, chain.iter().map(|&c| vec![z.from_int(c)]).collect()).unwrap()
    }

    #[test]
    fn bound_n_examples() {
        assert_eq!(torsion_bound_n(&zspec(&[12, 12, 12]), 64).unwrap().n, Some(12));
        assert_eq!(torsion_bound_n(&zspec(&[1]), 64).unwrap().n, Some(1));
        assert_eq!(torsion_bound_n(&zspec(&[0, 0]), 64).unwrap().n, Some(1));
        assert_eq!(torsion_bound_n(&zspec(&[2, 1]), 64).unwrap().n, Some(2));
    }

    #[test]
    fn slices_differ_from_constant_extension() {
        let s = zspec(&[0, 1, 1]);
        assert_eq!(s.slice_generator(3).unwrap(), Ring::Integers.from_int(3));
        let b = torsion_bound_n(&s, 64).unwrap();
        assert_eq!(b.n_chain, Some(1));
        assert!(b.n.unwrap() > 1);
    }

    #[test]
    fn chain_must_ascend() {
        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        assert!(IdealSpec::new(&ctx, vec![vec![z.from_int(1)], vec![z.from_int(2)]]).is_err());
    }

    #[test]
    fn t1_examples() {
        let free = t1_bound_check(&zspec(&[0, 1]), 64).unwrap();
        assert_eq!(free.computed_t1, None);
        assert!(free.pass);
        let unit = t1_bound_check(&zspec(&[1]), 64).unwrap();
        assert_eq!(unit.computed_t1, None);
        let mixed = t1_bound_check(&zspec(&[2, 1]), 64).unwrap();
        assert_eq!(mixed.n, Some(2));
        assert!(mixed.computed_t1.is_some());
        assert!(mixed.pass, "{mixed:?}");
    }

    #[test]
    fn random_batch_is_deterministic() {
        let a: Vec<_> = random_batch(5, 4, 7).unwrap().iter().map(|s| s.to_json()).collect();
        let b: Vec<_> = random_batch(5, 4, 7).unwrap().iter().map(|s| s.to_json()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn a2_examples() {
        let z = Ring::Integers;
        let pi = Arc::new(PiSequence::classical(&z));
        assert_eq!(a2_condition_check(&pi, &[z.from_int(6)], 1, 64).unwrap(), A2Verdict::Bounded { n: 6, exponent: "6".into() });
        assert!(matches!(a2_condition_check(&pi, &[z.zero()], 1, 64).unwrap(), A2Verdict::Bounded { n: 1, .. }));
        let q = Ring::Rationals;
        let pq = Arc::new(PiSequence::classical(&q));
        assert!(matches!(a2_condition_check(&pq, &[q.zero()], 1, 64).unwrap(), A2Verdict::Bounded { n: 1, .. }));
        let f = Ring::PrimeField(3);
        let pf = Arc::new(PiSequence::classical(&f));
        assert!(matches!(a2_condition_check(&pf, &[f.zero()], 1, 64).unwrap(), A2Verdict::Bounded { n: 3, .. }));
    }

    #[test]
    fn modular_ring_torsion() {
        let r = Ring::IntegersMod(12);
        let pi = PiSequence::classical(&r);
        assert_eq!(ring_torsion(&pi, 64).unwrap(), r.one());
    }
}
