//! Grothendieck-class invariants: the Hilbert class `H_M` and the torsion series `L_M`.

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraContext;
use crate::classes::{fit_series, ClassKey, ClassVec, RationalClass, RationalClassJson};
use crate::error::{Error, Result};
use crate::module::hilbert::{hilbert_series, DEFAULT_MAX_PERIOD};
use crate::module::presented::PresentedModule;
use crate::module::resolve::tor;
use crate::ring::Ring;
use crate::special::make_special;

/// A class-valued series with its rational fit.
#[derive(Clone, Debug)]
pub struct KClassSeries {
    pub ring: Ring,
    pub lo: i64,
    /// Coefficients for `lo ≤ n ≤ exact_through`.
    pub coefficients: Vec<ClassVec>,
    pub exact_through: i64,
    pub fit: Option<RationalClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KClassSeriesJson {
    pub lo: i64,
    pub exact_through: i64,
    pub coefficients: Vec<String>,
    pub fit: Option<RationalClassJson>,
}

impl KClassSeries {
    fn fitted(ring: &Ring, lo: i64, coefficients: Vec<ClassVec>) -> Self {
        let fit = fit_series(ring, lo, &coefficients, DEFAULT_MAX_PERIOD);
        let exact_through = lo + coefficients.len() as i64 - 1;
        KClassSeries { ring: ring.clone(), lo, coefficients, exact_through, fit }
    }

    /// Whether the fit re-expands to the computed coefficients.
    pub fn fit_consistent(&self) -> bool {
        self.fit.as_ref().is_some_and(|f| f.expand(self.lo, self.exact_through) == self.coefficients)
    }

    pub fn to_json(&self) -> KClassSeriesJson {
        KClassSeriesJson {
            lo: self.lo,
            exact_through: self.exact_through,
            coefficients: self.coefficients.iter().map(|c| c.display(&self.ring)).collect(),
            fit: self.fit.as_ref().map(|f| f.to_json()),
        }
    }
}

fn require_class_group(ring: &Ring, op: &'static str, allow_fields: bool) -> Result<()> {
    let ok = match ring {
        Ring::Integers | Ring::PLocal(_) => true,
        Ring::Rationals | Ring::PrimeField(_) => allow_fields,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::UnsupportedRing { ring: ring.to_string(), op })
    }
}

/// `H_M = Σ [M_n] t^n` in `K(𝕜)[[t]]`, classes taken by rank.
pub fn h_invariant(m: &PresentedModule, horizon: i64) -> Result<KClassSeries> {
    require_class_group(m.ring(), "h_invariant", true)?;
    let h = hilbert_series(m, horizon)?;
    Ok(KClassSeries::fitted(m.ring(), h.lo, h.classes(ClassVec::rank)))
}

/// `L_M = L⁰_M/(1 − t)` with `L⁰_M = Σ (−1)^i [Tor_i(M, 𝕜)]_+`.
pub fn l_invariant(m: &PresentedModule, max_i: usize, horizon: i64) -> Result<KClassSeries> {
    require_class_group(m.ring(), "l_invariant", false)?;
    let lo = m.min_degree();
    // Tor_i(M)_n vanishes for n < lo + i, so degree n needs i ≤ n − lo.
    let needed = (horizon - lo).max(0) as usize;
    let depth = max_i.min(needed);
    let table = tor(m, depth, horizon)?;
    let exact_through = if depth >= needed || !table.partial { horizon } else { lo + depth as i64 };
    let mut running = ClassVec::zero();
    let mut coefficients = Vec::new();
    for n in lo..=exact_through {
        for i in 0..=depth {
            if let Some(inv) = table.get(i, n) {
                let c = ClassVec::plus(inv);
                running = if i % 2 == 0 { running.add(&c) } else { running.sub(&c) };
            }
        }
        coefficients.push(running.clone());
    }
    Ok(KClassSeries::fitted(m.ring(), lo, coefficients))
}

/// Whether `(1 − t^h)/(1 − t^k)·H_{M(𝔞,h)} = H_{M(𝔞,k)}` under both the rank and the split class maps.
pub fn special_relation_check(ctx: &std::sync::Arc<AlgebraContext>, ideal: &[crate::ring::Elem], h: u64, k: u64, horizon: i64) -> Result<bool> {
    if k == 0 || !h.is_multiple_of(k) {
        return Err(Error::Precondition(format!("{k} must divide {h}")));
    }
    let mh = hilbert_series(&make_special(ctx, ideal, h)?, horizon)?;
    let mk = hilbert_series(&make_special(ctx, ideal, k)?, horizon)?;
    let maps: [fn(&crate::matrix::ModuleInvariants) -> ClassVec; 2] = [ClassVec::rank, ClassVec::symbolic];
    for f in maps {
        let (Some(a), Some(b)) = (mh.fit_with(f, DEFAULT_MAX_PERIOD), mk.fit_with(f, DEFAULT_MAX_PERIOD)) else {
            return Ok(false);
        };
        if !a.scale_ratio(&[h], &[k]).same_as(&b) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A class of `K(D)` that is torsion in the Hilbert class but detected by `L`.
#[derive(Clone, Debug)]
pub struct KtorsReport {
    pub p: u64,
    pub h: u64,
    /// `H_{D/pD}` by rank.
    pub h_quotient: RationalClass,
    /// `(1 − t^h)/(1 − t)·H_{M(p,h)}` by rank.
    pub h_scaled: RationalClass,
    pub l_special: RationalClass,
    pub l_expected: RationalClass,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KtorsReportJson {
    pub p: u64,
    pub h: u64,
    pub h_quotient: RationalClassJson,
    pub h_scaled: RationalClassJson,
    pub l_special: RationalClassJson,
    pub l_expected: RationalClassJson,
    pub h_vanishes: bool,
    pub l_matches: bool,
    pub l_nonzero: bool,
    pub note: Option<String>,
}

impl KtorsReport {
    pub fn h_vanishes(&self) -> bool {
        self.h_quotient.is_zero() && self.h_scaled.is_zero()
    }

    pub fn l_matches(&self) -> bool {
        self.l_special.same_as(&self.l_expected)
    }

    pub fn l_nonzero(&self) -> bool {
        !self.l_special.is_zero()
    }

    pub fn text(&self) -> String {
        let mut s = format!(
            "p = {}, h = {}\nH(D/pD) = {}\n(1-t^{})/(1-t) H(M(p,{})) = {}\nL(M(p,{})) = {} (expected {})\n",
            self.p, self.h, self.h_quotient, self.h, self.h, self.h_scaled, self.h, self.l_special, self.l_expected
        );
        if let Some(n) = &self.note {
            s.push_str(n);
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> KtorsReportJson {
        KtorsReportJson {
            p: self.p,
            h: self.h,
            h_quotient: self.h_quotient.to_json(),
            h_scaled: self.h_scaled.to_json(),
            l_special: self.l_special.to_json(),
            l_expected: self.l_expected.to_json(),
            h_vanishes: self.h_vanishes(),
            l_matches: self.l_matches(),
            l_nonzero: self.l_nonzero(),
            note: self.note.clone(),
        }
    }
}

pub fn ktors_demo(p: u64, h: u64) -> Result<KtorsReport> {
    let ring = Ring::zloc(p)?;
    let mut q = h;
    while q > 1 && q.is_multiple_of(p) {
        q /= p;
    }
    if h == 0 || q != 1 {
        return Err(Error::Precondition(format!("h = {h} is not a power of {p}")));
    }
    let ctx = AlgebraContext::classical(&ring);
    let horizon = 3 * h as i64 + 4;
    let pe = ring.from_int(p as i64);
    let quotient = make_special(&ctx, std::slice::from_ref(&pe), 1)?;
    let special = make_special(&ctx, std::slice::from_ref(&pe), h)?;
    let fit = |s: KClassSeries| s.fit.ok_or_else(|| Error::Precondition("series did not stabilise".into()));
    let h_quotient = fit(h_invariant(&quotient, horizon)?)?;
    let h_scaled = fit(h_invariant(&special, horizon)?)?.scale_ratio(&[h], &[1]);
    let l_special = fit(l_invariant(&special, horizon as usize, horizon)?)?;
    let l_expected = RationalClass::periodic(&ring, ClassVec::single(ClassKey::Plus(p), 1), h);
    let note = (h == 1).then(|| "h = 1: M(p,1) = D/pD, so the class is not a torsion phenomenon".to_string());
    Ok(KtorsReport { p, h, h_quotient, h_scaled, l_special, l_expected, note })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hilbert_classes() {
        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        let d = PresentedModule::free(&ctx, vec![0]);
        assert_eq!(h_invariant(&d, 10).unwrap().fit.unwrap().display(), "1/(1-t)");
        let q = make_special(&ctx, &[z.from_int(6)], 1).unwrap();
        assert!(h_invariant(&q, 10).unwrap().fit.unwrap().is_zero());
        for h in [2, 4] {
            assert!(special_relation_check(&ctx, &[z.from_int(2)], h, 1, 20).unwrap());
        }
        assert!(special_relation_check(&ctx, &[z.from_int(2)], 4, 2, 20).unwrap());
    }

    #[test]
    fn l_of_simple_modules() {
        let r = Ring::PLocal(2);
        let ctx = AlgebraContext::classical(&r);
        let d = PresentedModule::free(&ctx, vec![0]);
        assert!(l_invariant(&d, 4, 10).unwrap().fit.unwrap().is_zero());
        let q = make_special(&ctx, &[r.from_int(2)], 1).unwrap();
        assert_eq!(l_invariant(&q, 10, 10).unwrap().fit.unwrap().display(), "[Z/2]_+/(1-t)");
        let f = make_special(&ctx, &[r.zero()], 1).unwrap();
        assert!(l_invariant(&f, 4, 10).unwrap().fit.unwrap().is_zero());
    }

    #[test]
    fn torsion_class_example() {
        for (p, h) in [(2, 2), (3, 3), (2, 1)] {
            let rep = ktors_demo(p, h).unwrap();
            assert!(rep.h_vanishes(), "{}", rep.text());
            assert!(rep.l_matches(), "{}", rep.text());
            assert!(rep.l_nonzero());
            assert_eq!(rep.note.is_some(), h == 1);
        }
        assert!(ktors_demo(2, 3).is_err());
    }
}
