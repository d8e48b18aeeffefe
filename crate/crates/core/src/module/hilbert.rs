//! Hilbert series `H_M(t) = Σ [M_n] t^n`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::presented::PresentedModule;
use crate::classes::{fit_series, ClassVec, RationalClass, RationalClassJson};
use crate::error::Result;
use crate::matrix::{ModuleInvariants, ModuleInvariantsJson};

/// Largest eventual period tried by the rational fit.
pub const DEFAULT_MAX_PERIOD: u64 = 64;

#[derive(Clone, Debug)]
pub struct HilbertSeries {
    pub pieces: BTreeMap<i64, ModuleInvariants>,
    pub lo: i64,
    pub horizon: i64,
    /// Fit over split classes (free rank plus prime-power cyclic summands).
    pub fit: Option<RationalClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeriesJson {
    pub horizon: i64,
    pub pieces: Vec<(i64, ModuleInvariantsJson)>,
    pub fit: Option<RationalClassJson>,
}

impl HilbertSeries {
    /// Class stream under a chosen class map.
    pub fn classes(&self, f: impl Fn(&ModuleInvariants) -> ClassVec) -> Vec<ClassVec> {
        self.pieces.values().map(f).collect()
    }

    /// Fit under an arbitrary class map.
    pub fn fit_with(&self, f: impl Fn(&ModuleInvariants) -> ClassVec, max_period: u64) -> Option<RationalClass> {
        let ring = &self.pieces.values().next()?.ring;
        fit_series(ring, self.lo, &self.classes(f), max_period)
    }

    pub fn to_json(&self) -> HilbertSeriesJson {
        HilbertSeriesJson {
            horizon: self.horizon,
            pieces: self.pieces.iter().map(|(n, v)| (*n, v.to_json())).collect(),
            fit: self.fit.as_ref().map(|f| f.to_json()),
        }
    }
}

pub fn hilbert_series(m: &PresentedModule, horizon: i64) -> Result<HilbertSeries> {
    let lo = m.min_degree();
    let pieces: BTreeMap<i64, ModuleInvariants> = m.piece_invariants(lo, horizon)?.into_iter().collect();
    let mut h = HilbertSeries { pieces, lo, horizon, fit: None };
    h.fit = h.fit_with(ClassVec::symbolic, DEFAULT_MAX_PERIOD);
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraContext;
    use crate::ring::Ring;

    #[test]
    fn free_algebra_series() {
        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        let h = hilbert_series(&PresentedModule::free(&ctx, vec![0]), 10).unwrap();
        assert_eq!(h.fit.unwrap().display(), "[Z]/(1-t)");
    }

    #[test]
    fn finite_length_series() {
        let q = Ring::Rationals;
        let ctx = AlgebraContext::all_ones(&q);
        let m = PresentedModule::cyclic(&ctx, &[(1, q.one())]).unwrap();
        let f = hilbert_series(&m, 10).unwrap().fit.unwrap();
        assert!(f.den.is_empty());
        assert_eq!(f.display(), "[Q]");
    }
}
