//! Truncations `τ_{≥n} M = M_{≥n}` and `τ^{≤n} M = M/M_{>n}`.

use serde::{Deserialize, Serialize};

use super::free::HomMap;
use super::presented::{PresentationJson, PresentedModule};
use super::resolve::{extract, images};
use crate::error::{Error, Result};
use crate::lattice::Vector;
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncateMode {
    AtLeast(i64),
    AtMost(i64),
}

/// A truncation presented correctly through degree `horizon`.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub module: PresentedModule,
    pub mode: TruncateMode,
    pub horizon: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationJson {
    pub mode: TruncateMode,
    pub horizon: i64,
    pub module: PresentationJson,
}

impl Truncation {
    pub fn to_json(&self) -> TruncationJson {
        TruncationJson { mode: self.mode, horizon: self.horizon, module: self.module.to_json() }
    }
}

pub fn truncate(m: &PresentedModule, mode: TruncateMode, horizon: i64) -> Result<Truncation> {
    let module = match mode {
        TruncateMode::AtLeast(n) => at_least(m, n, horizon)?,
        TruncateMode::AtMost(n) => at_most(m, n, horizon)?,
    };
    Ok(Truncation { module, mode, horizon })
}

fn at_least(m: &PresentedModule, n: i64, horizon: i64) -> Result<PresentedModule> {
    if horizon < n {
        return Err(Error::Precondition(format!("horizon {horizon} is below the truncation degree {n}")));
    }
    let lin = m.lin()?;
    let f0 = &m.generators;
    let full: Vec<Vec<Vector>> = (n..=horizon).map(|e| lin.full(f0.dim(e))).collect();
    let rel = images(&lin, &m.relations, n, horizon);
    let gens = extract(&lin, f0, n, &full, Some(&rel), false)?.gens;
    let psi = HomMap::from_vectors(f0, &gens)?;
    let f1 = psi.source.clone();
    let pre: Vec<Vec<Vector>> = par::map_range(n, horizon, |e| lin.preimage(&psi.slice(e).with_ring(&lin.comp), &rel[(e - n) as usize]));
    let rgens = extract(&lin, &f1, n, &pre, None, false)?.gens;
    PresentedModule::new(f1.clone(), HomMap::from_vectors(&f1, &rgens)?)
}

fn at_most(m: &PresentedModule, n: i64, horizon: i64) -> Result<PresentedModule> {
    let f0 = &m.generators;
    let r = m.ring();
    let old = &m.relations;
    let mut degs = old.source.degrees().to_vec();
    let mut cols: Vec<Vec<_>> = (0..old.source.rank()).map(|j| (0..f0.rank()).map(|k| old.coeff(k, j).clone()).collect()).collect();
    for (g, &d) in f0.degrees().iter().enumerate() {
        for e in (n + 1).max(d)..=horizon {
            degs.push(e);
            cols.push((0..f0.rank()).map(|k| if k == g { r.one() } else { r.zero() }).collect());
        }
    }
    PresentedModule::from_coeffs(m.context(), f0.degrees().to_vec(), degs, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraContext;
    use crate::matrix::ModuleInvariants;
    use crate::ring::Ring;

    fn sample(r: &Ring) -> PresentedModule {
        let ctx = AlgebraContext::classical(r);
        PresentedModule::from_i64(&ctx, vec![0, 1], vec![2, 3], &[vec![2, 1], vec![0, 3]]).unwrap()
    }

    #[test]
    fn truncations_match_pieces() {
        for r in [Ring::Integers, Ring::PrimeField(2), Ring::IntegersMod(4)] {
            let m = sample(&r);
            let full = m.piece_invariants(0, 12).unwrap();
            let hi = truncate(&m, TruncateMode::AtLeast(3), 12).unwrap().module;
            for (d, inv) in hi.piece_invariants(0, 12).unwrap() {
                let expect = if d >= 3 { full[d as usize].1.clone() } else { ModuleInvariants::zero(&r) };
                assert_eq!(inv, expect, "{r} ≥3 degree {d}");
            }
            let low = truncate(&m, TruncateMode::AtMost(3), 12).unwrap().module;
            for (d, inv) in low.piece_invariants(0, 12).unwrap() {
                if d <= 3 {
                    assert_eq!(inv, full[d as usize].1, "{r} ≤3 degree {d}");
                } else {
                    assert!(inv.is_zero(), "{r} ≤3 degree {d}");
                }
            }
        }
    }
}
