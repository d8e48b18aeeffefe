//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gdpa::algebra::{recover_pi, associates, tor1_closed_form, AlgebraContext, StructureConstants};
use gdpa::bivariate::{bivariate_counterexample, syzygy_generators};
use gdpa::classes::{ClassVec, RationalClass};
use gdpa::coherence::{check_batch, random_batch, DEFAULT_SEARCH_LIMIT};
use gdpa::kinv::{ktors_demo, special_relation_check};
use gdpa::matrix::ModuleInvariants;
use gdpa::module::{hilbert_series, tor, torsion_submodule, PresentedModule, TorsionVerdict};
use gdpa::pi::{pi_from_gcd_morphic, Admissibility, GcdSource, PiSequence};
use gdpa::poly::IntPoly;
use gdpa::ring::{Elem, Ring};
use gdpa::special::{make_special, special_resolve_field};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BINOMIAL_MAX_N: u64 = 60;
const BINOMIAL_BUDGET: Duration = Duration::from_secs(2);
const Q_BINOMIAL_MAX_N: u64 = 24;
const COCYCLE_SEQUENCES: usize = 200;
const COCYCLE_MAX_N: u64 = 24;
const TRANSFORM_MAX_H: u64 = 6;
const TRANSFORM_MAX_N: u64 = 20;
const FIB_GCD_MAX: u64 = 30;
const FIB_ADMISSIBLE_TO: u64 = 60;
const TOR1_MAX_N: i64 = 32;
const HILBERT_HORIZON: i64 = 40;
const BOUND_BATCH: usize = 50;
const BOUND_MAX_D: usize = 4;
const BOUND_BUDGET: Duration = Duration::from_secs(300);
const RECOVERY_N: u64 = 16;
const RANDOM_MODULES: usize = 20;
const MODULE_HORIZON: i64 = 40;
const SEED: u64 = 20240917;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn binomial(n: u64, m: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..m {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn classical_binomials() -> Outcome {
    let z = Ring::Integers;
    let start = Instant::now();
    let pi = PiSequence::classical(&z);
    for n in 0..=BINOMIAL_MAX_N {
        for m in 0..=n {
            let c = pi.c(n, m).map_err(err)?;
            check(c == Elem::Int(binomial(n, m)), || format!("C({n},{m}) = {c:?}"))?;
        }
    }
    let t = start.elapsed();
    check(t < BINOMIAL_BUDGET, || format!("took {t:?}"))?;
    Ok(format!("n ≤ {BINOMIAL_MAX_N} in {t:.2?}"))
}

/// `[n]_q! / ([m]_q! [n−m]_q!)` by exact polynomial division.
fn q_binomial_oracle(n: u64, m: u64) -> IntPoly {
    let q_int = |k: u64| IntPoly::from_coeffs(vec![BigInt::one(); k as usize]);
    let fact = |k: u64| (1..=k).fold(IntPoly::one(), |acc, i| &acc * &q_int(i));
    let den = &fact(m) * &fact(n - m);
    fact(n).div_exact(&den).expect("q-factorial quotient is exact")
}

fn q_binomials() -> Outcome {
    let pi = PiSequence::cyclotomic();
    for n in 0..=Q_BINOMIAL_MAX_N {
        for m in 0..=n {
            let c = pi.c(n, m).map_err(err)?;
            check(c == Elem::Poly(q_binomial_oracle(n, m)), || format!("[{n},{m}]_q mismatch"))?;
        }
    }
    Ok(format!("n ≤ {Q_BINOMIAL_MAX_N}"))
}

fn random_never_zero(r: &Ring, rng: &mut ChaCha8Rng, up_to: u64) -> PiSequence {
    let values: BTreeMap<u64, Elem> = (2..=up_to)
        .map(|n| {
            let v: i64 = rng.gen_range(1..=6) * if rng.gen_bool(0.5) { 1 } else { -1 };
            (n, r.from_int(v))
        })
        .collect();
    PiSequence::custom(r, values, r.one()).unwrap()
}

fn cocycle_identity() -> Outcome {
    let z = Ring::Integers;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for s in 0..COCYCLE_SEQUENCES {
        let pi = random_never_zero(&z, &mut rng, COCYCLE_MAX_N);
        let c = |n, m| pi.c(n, m).unwrap();
        for n in 0..=COCYCLE_MAX_N {
            for m in 0..=n {
                let fact = z.mul(&z.mul(&c(n, m), &pi.big_a(m)), &pi.big_a(n - m));
                check(fact == pi.big_a(n), || format!("sequence {s}: factorial identity at ({n},{m})"))?;
                for l in 0..=m {
                    let lhs = z.mul(&c(n, m), &c(m, l));
                    let rhs = z.mul(&c(n, l), &c(n - l, m - l));
                    check(lhs == rhs, || format!("sequence {s}: cocycle at ({n},{m},{l})"))?;
                }
            }
        }
    }
    Ok(format!("{COCYCLE_SEQUENCES} sequences, n ≤ {COCYCLE_MAX_N}"))
}

fn transform_laws() -> Outcome {
    let z = Ring::Integers;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let span = TRANSFORM_MAX_H * TRANSFORM_MAX_H * TRANSFORM_MAX_N;
    let mut seqs = vec![Arc::new(PiSequence::classical(&z))];
    for _ in 0..3 {
        seqs.push(Arc::new(random_never_zero(&z, &mut rng, span)));
    }
    for (s, pi) in seqs.iter().enumerate() {
        for h in 1..=TRANSFORM_MAX_H {
            let ph = Arc::new(pi.h_transform(h).map_err(err)?);
            for n in 1..=TRANSFORM_MAX_N {
                let lhs = z.mul(&ph.a(n), &pi.a(h));
                check(lhs == pi.a(h * n), || format!("sequence {s}: a^[{h}]({n})·a({h}) ≠ a({})", h * n))?;
            }
            for h2 in 1..=TRANSFORM_MAX_H {
                let twice = ph.h_transform(h2).map_err(err)?;
                let once = pi.h_transform(h * h2).map_err(err)?;
                for n in 1..=TRANSFORM_MAX_N {
                    check(twice.a(n) == once.a(n), || format!("sequence {s}: (π^[{h}])^[{h2}] vs π^[{}] at {n}", h * h2))?;
                }
            }
        }
    }
    Ok(format!("{} sequences, h,h' ≤ {TRANSFORM_MAX_H}, n ≤ {TRANSFORM_MAX_N}", seqs.len()))
}

fn fib(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let t = &a + &b;
        a = std::mem::replace(&mut b, t);
    }
    a
}

/// `π_n = ∏_{d | n} F_d^{μ(n/d)}`, accumulated as a fraction.
fn fib_pi_oracle(n: u64) -> BigInt {
    let mobius = |mut k: u64| {
        let mut sign = 1i32;
        let mut p = 2;
        while p * p <= k {
            if k.is_multiple_of(p) {
                k /= p;
                if k.is_multiple_of(p) {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if k > 1 {
            sign = -sign;
        }
        sign
    };
    let (mut num, mut den) = (BigInt::one(), BigInt::one());
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        match mobius(n / d) {
            1 => num *= fib(d),
            -1 => den *= fib(d),
            _ => {}
        }
    }
    let (q, r) = num.div_rem(&den);
    assert!(r.is_zero());
    q
}

fn fibonomial_bridge() -> Outcome {
    let z = Ring::Integers;
    let pi = pi_from_gcd_morphic(&z, GcdSource::Fibonacci, FIB_ADMISSIBLE_TO).map_err(err)?;
    let prefix: Vec<Elem> = (2..=7).map(|n| pi.pi(n)).collect();
    let expect: Vec<Elem> = [1, 2, 3, 5, 4, 13].iter().map(|&v| z.from_int(v)).collect();
    check(prefix == expect, || format!("prefix {prefix:?}"))?;
    for n in 2..=FIB_ADMISSIBLE_TO {
        check(pi.pi(n) == Elem::Int(fib_pi_oracle(n)), || format!("π_{n} differs from the Möbius oracle"))?;
    }
    for n in 1..=FIB_GCD_MAX {
        for m in 1..=FIB_GCD_MAX {
            check(fib(n).gcd(&fib(m)) == fib(n.gcd(&m)), || format!("gcd(F_{n}, F_{m})"))?;
        }
    }
    let adm = pi.admissible_check(FIB_ADMISSIBLE_TO).map_err(err)?;
    check(adm == Admissibility::Admissible, || format!("{adm:?}"))?;
    Ok(format!("prefix ok, gcd ≤ {FIB_GCD_MAX}, admissible to {FIB_ADMISSIBLE_TO}"))
}

fn residue_field(ctx: &Arc<AlgebraContext>, horizon: i64) -> PresentedModule {
    let r = ctx.ring();
    let rels: Vec<(i64, Elem)> = (1..=horizon).map(|n| (n, r.one())).collect();
    PresentedModule::cyclic(ctx, &rels).unwrap()
}

fn tor1_closed_forms() -> Outcome {
    for r in [Ring::PrimeField(2), Ring::PrimeField(3), Ring::IntegersMod(4), Ring::Integers] {
        let ctx = AlgebraContext::classical(&r);
        let t = tor(&residue_field(&ctx, TOR1_MAX_N), 1, TOR1_MAX_N).map_err(err)?;
        for (n, want) in tor1_closed_form(ctx.pi(), 1..=TOR1_MAX_N as u64) {
            let got = t.get(1, n as i64).cloned().unwrap_or_else(|| ModuleInvariants::zero(&r));
            check(got == want, || format!("{r}: Tor_1 in degree {n} is {got:?}"))?;
        }
    }
    let z = Ring::Integers;
    let ctx = AlgebraContext::classical(&z);
    let induced = [
        PresentedModule::free(&ctx, vec![0, 2, 3]),
        PresentedModule::from_i64(&ctx, vec![0, 1], vec![0, 1], &[vec![4, 0], vec![0, 6]]).unwrap(),
        PresentedModule::from_i64(&ctx, vec![1, 1], vec![1], &[vec![2, 3]]).unwrap(),
    ];
    for (k, m) in induced.iter().enumerate() {
        let t = tor(m, 3, 16).map_err(err)?;
        for i in 1..=3 {
            check(t.support(i).is_empty(), || format!("induced module {k}: Tor_{i} ≠ 0"))?;
        }
    }
    Ok(format!("GF(2), GF(3), Z/4, Z to degree {TOR1_MAX_N}; {} induced modules", induced.len()))
}

fn hilbert_fits() -> Outcome {
    let z = Ring::Integers;
    let ctx = AlgebraContext::classical(&z);
    let cases: [(u64, i64); 5] = [(1, 6), (2, 2), (3, 3), (4, 2), (8, 2)];
    for (h, a) in cases {
        let ideal = [z.from_int(a)];
        let hs = hilbert_series(&make_special(&ctx, &ideal, h).map_err(err)?, HILBERT_HORIZON).map_err(err)?;
        let fit = hs.fit.ok_or_else(|| format!("h = {h}: no fit"))?;
        let want = RationalClass::periodic(&z, ClassVec::symbolic(&ModuleInvariants::cyclic(&z, &ideal[0])), h);
        check(fit.same_as(&want), || format!("h = {h}: fit {fit}"))?;
        for k in (1..=h).filter(|k| h % k == 0) {
            let ok = special_relation_check(&ctx, &ideal, h, k, HILBERT_HORIZON).map_err(err)?;
            check(ok, || format!("relation fails for h = {h}, k = {k}"))?;
        }
    }
    Ok("h ∈ {1,2,3,4,8}".into())
}

fn degree_bound() -> Outcome {
    let start = Instant::now();
    let specs = random_batch(BOUND_BATCH, BOUND_MAX_D, SEED).map_err(err)?;
    for (k, rep) in check_batch(&specs, DEFAULT_SEARCH_LIMIT).into_iter().enumerate() {
        let rep = rep.map_err(|e| format!("ideal {k}: {e}"))?;
        check(rep.pass && rep.pass_chain, || format!("ideal {k}: t1 = {:?} against bound {} (chain N = {:?})", rep.computed_t1, rep.bound, rep.n_chain))?;
    }
    let t = start.elapsed();
    check(t < BOUND_BUDGET, || format!("took {t:?}"))?;
    Ok(format!("{BOUND_BATCH} ideals, d ≤ {BOUND_MAX_D}, in {t:.2?}"))
}

fn random_field_sequence(rng: &mut ChaCha8Rng) -> PiSequence {
    let f5 = Ring::PrimeField(5);
    let mut zeros = vec![rng.gen_range(2..=5u64)];
    while rng.gen_bool(0.6) {
        let next = zeros.last().unwrap() * rng.gen_range(2..=3);
        if next > RECOVERY_N {
            break;
        }
        zeros.push(next);
    }
    let values = (2..=RECOVERY_N)
        .map(|n| (n, if zeros.contains(&n) { f5.zero() } else { f5.from_int(rng.gen_range(1..=4)) }))
        .collect();
    PiSequence::custom(&f5, values, f5.one()).unwrap()
}

fn structure_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut seqs = vec![PiSequence::classical(&Ring::PLocal(2)), PiSequence::classical(&Ring::PLocal(3))];
    for _ in 0..5 {
        let pi = random_field_sequence(&mut rng);
        check(pi.admissible_check(RECOVERY_N).map_err(err)? == Admissibility::Admissible, || "generated sequence is not admissible".into())?;
        seqs.push(pi);
    }
    for (s, pi) in seqs.iter().enumerate() {
        let rec = recover_pi(&StructureConstants::from_pi(pi, RECOVERY_N)).map_err(|e| format!("sequence {s}: {e}"))?;
        let back = rec.to_sequence(pi.ring()).map_err(err)?;
        check(associates(pi.ring(), pi, &back, RECOVERY_N), || format!("sequence {s} over {} not recovered", pi.ring()))?;
    }
    Ok(format!("{} sequences, N = {RECOVERY_N}", seqs.len()))
}

fn random_module(ctx: &Arc<AlgebraContext>, rng: &mut ChaCha8Rng, coeff: impl Fn(&mut ChaCha8Rng) -> i64) -> PresentedModule {
    let r = ctx.ring();
    let gens: Vec<i64> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..=6)).collect();
    let lo = *gens.iter().min().unwrap();
    let rels: Vec<i64> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(lo..=6)).collect();
    let coeffs = rels
        .iter()
        .map(|&e| gens.iter().map(|&d| if d <= e { r.from_int(coeff(rng)) } else { r.zero() }).collect())
        .collect();
    PresentedModule::from_coeffs(ctx, gens, rels, coeffs).unwrap()
}

fn field_special_resolutions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut count = 0;
    for p in [2u64, 3] {
        let ctx = AlgebraContext::classical(&Ring::PrimeField(p));
        for k in 0..RANDOM_MODULES {
            let m = random_module(&ctx, &mut rng, |g| g.gen_range(0..p as i64));
            let res = special_resolve_field(&m, MODULE_HORIZON).map_err(|e| format!("GF({p}) module {k}: {e}"))?;
            check(res.verdict.valid, || format!("GF({p}) module {k}: {}", res.verdict.message))?;
            check(res.r <= 1, || format!("GF({p}) module {k}: r = {}", res.r))?;
            check(res.horizon >= MODULE_HORIZON, || format!("GF({p}) module {k}: horizon {}", res.horizon))?;
            count += 1;
        }
    }
    Ok(format!("{count} modules certified to degree {MODULE_HORIZON}"))
}

fn counterexample() -> Outcome {
    for r in 1..=3 {
        let rep = bivariate_counterexample(2, r).map_err(err)?;
        check(rep.identity_holds, || format!("r = {r}: relation identity fails"))?;
        check(rep.not_generated_below(), || format!("r = {r}: syzygy is generated below"))?;
    }
    let gens = syzygy_generators(&AlgebraContext::all_ones(&Ring::Rationals), 6).map_err(err)?;
    check(gens.len() == 1 && gens[0].0 == (1, 1), || format!("Koszul generators {gens:?}"))?;
    Ok("p = 2, r ∈ {1,2,3}; Koszul over Q has one generator".into())
}

fn torsion_class_demo() -> Outcome {
    for p in [2, 3] {
        let rep = ktors_demo(p, p).map_err(err)?;
        check(rep.h_vanishes(), || rep.text())?;
        check(rep.l_matches() && rep.l_nonzero(), || rep.text())?;
    }
    Ok("p ∈ {2,3}".into())
}

fn torsion_dichotomy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let ctx = AlgebraContext::classical(&Ring::PLocal(2));
    for k in 0..RANDOM_MODULES {
        let m = random_module(&ctx, &mut rng, |g| g.gen_range(-4..=4));
        let rep = torsion_submodule(&m, MODULE_HORIZON).map_err(|e| format!("module {k}: {e}"))?;
        check(rep.verdict == TorsionVerdict::TorsionFree, || format!("module {k}: {:?} ({})", rep.verdict, rep.note))?;
    }
    let q = Ring::Rationals;
    let ctx = AlgebraContext::all_ones(&q);
    let m = PresentedModule::cyclic(&ctx, &[(1, q.one())]).map_err(err)?;
    let rep = torsion_submodule(&m, MODULE_HORIZON).map_err(err)?;
    check(rep.verdict == TorsionVerdict::HasTorsion, || format!("D/(x^[1]) over Q: {:?}", rep.verdict))?;
    Ok(format!("{RANDOM_MODULES} modules over Z_(2) torsion-free; D/(x^[1]) over Q has torsion"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("classical binomials", classical_binomials),
        ("q-binomials", q_binomials),
        ("cocycle and factorial identities", cocycle_identity),
        ("transform laws", transform_laws),
        ("Fibonomial bridge", fibonomial_bridge),
        ("Tor_1 closed form and induced modules", tor1_closed_forms),
        ("Hilbert fits of special modules", hilbert_fits),
        ("degree bound on random ideals", degree_bound),
        ("structure-constant recovery", structure_recovery),
        ("field special resolutions", field_special_resolutions),
        ("bivariate counterexample", counterexample),
        ("torsion class in K(D)", torsion_class_demo),
        ("torsion dichotomy", torsion_dichotomy),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{t:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{t:.2?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
