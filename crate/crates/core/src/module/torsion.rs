//! Torsion submodule `T(M) = {m : x^[n]·m = 0 for n ≫ 0}`.

use serde::{Deserialize, Serialize};

use super::presented::PresentedModule;
use super::resolve::images;
use crate::error::Result;
use crate::lattice::{Lin, Vector};
use crate::matrix::{ModuleInvariants, ModuleInvariantsJson};
use crate::par;
use crate::pi::{PiRule, PiSequence, ZeroLocus};
use crate::ring::{Elem, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionVerdict {
    TorsionFree,
    HasTorsion,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TorsionMethod {
    /// Every maximal ideal contains infinitely many `π_n`, so f.p. modules are torsion-free.
    Theorem,
    /// `x^[s]` acts injectively past the presentation degrees, so `T_d = ker x^[ks]`.
    Structure { step: u64 },
    Unsupported,
}

#[derive(Clone, Debug)]
pub struct TorsionReport {
    pub verdict: TorsionVerdict,
    pub method: TorsionMethod,
    pub horizon: i64,
    /// Nonzero torsion pieces `T_d`.
    pub pieces: Vec<(i64, ModuleInvariants)>,
    /// Generators of the torsion, as per-generator coefficient vectors in degree `d`.
    pub generators: Vec<(i64, Vec<Elem>)>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReportJson {
    pub verdict: TorsionVerdict,
    pub method: TorsionMethod,
    pub horizon: i64,
    pub pieces: Vec<(i64, ModuleInvariantsJson)>,
    pub generators: Vec<(i64, Vec<String>)>,
    pub note: String,
}

impl TorsionReport {
    pub fn to_json(&self, ring: &Ring) -> TorsionReportJson {
        TorsionReportJson {
            verdict: self.verdict,
            method: self.method.clone(),
            horizon: self.horizon,
            pieces: self.pieces.iter().map(|(n, v)| (*n, v.to_json())).collect(),
            generators: self.generators.iter().map(|(n, v)| (*n, v.iter().map(|x| ring.format(x)).collect())).collect(),
            note: self.note.clone(),
        }
    }
}

/// Families covered by the torsion-freeness theorem.
fn theorem_applies(pi: &PiSequence) -> bool {
    let r = pi.ring();
    match pi.rule() {
        PiRule::Classical => matches!(r, Ring::Integers | Ring::PLocal(_) | Ring::IntegersMod(_) | Ring::PrimeField(_)),
        PiRule::CyclotomicAt(q) => matches!(r, Ring::PrimeField(_)) && !r.is_zero(q),
        _ => false,
    }
}

/// `s` with `x^[ks] = unit·(x^[s])^k` and `x^[s]` injective on high-degree pieces.
fn structure_step(pi: &PiSequence) -> Option<u64> {
    if pi.all_units() == Some(true) {
        return Some(1);
    }
    if pi.ring().is_field() {
        if let ZeroLocus::Finite(z) = pi.zero_locus() {
            return Some(z.iter().copied().max().unwrap_or(1));
        }
    }
    None
}

/// `{v ∈ F_d : x^[j]·v ∈ R_{d+j}}`.
fn killed_by(lin: &Lin, m: &PresentedModule, d: i64, j: u64, rel_target: &[Vector]) -> Vec<Vector> {
    let mu = m.generators.mult_matrix(d, j).with_ring(&lin.comp);
    lin.preimage(&mu, rel_target)
}

pub fn torsion_submodule(m: &PresentedModule, degree_bound: i64) -> Result<TorsionReport> {
    let lin = m.lin()?;
    let pi = m.context().pi();
    let lo = m.min_degree();
    if let Some(s) = structure_step(pi) {
        return structure_path(&lin, m, s, lo);
    }
    if theorem_applies(pi) {
        return theorem_path(&lin, m, lo, degree_bound);
    }
    Ok(TorsionReport {
        verdict: TorsionVerdict::Inconclusive,
        method: TorsionMethod::Unsupported,
        horizon: degree_bound,
        pieces: Vec::new(),
        generators: Vec::new(),
        note: "no persistence certificate is available for this π-sequence".into(),
    })
}

/// `(degree, T_d, torsion generators, stable)` for one degree.
type DegreeTorsion = (i64, ModuleInvariants, Vec<Vec<Elem>>, bool);

fn structure_path(lin: &Lin, m: &PresentedModule, s: u64, lo: i64) -> Result<TorsionReport> {
    let top = m.max_presentation_degree();
    let f = &m.generators;
    let results: Vec<Result<DegreeTorsion>> = par::map_range(lo, top - 1, |d| {
        let k = ((top - d) as u64).div_ceil(s).max(1);
        let j = k * s;
        let rd = m.relation_span(lin, d);
        let t1 = killed_by(lin, m, d, j, &m.relation_span(lin, d + j as i64));
        let t2 = killed_by(lin, m, d, 2 * j, &m.relation_span(lin, d + 2 * j as i64));
        let dim = f.dim(d);
        let stable = lin.same_span(dim, &t1, &t2);
        let q = lin.quotient(dim, &t1, &rd)?;
        let gens = q.generators.iter().map(|(v, _)| f.to_full(&lin.reduce_vec(v), d)).collect();
        Ok((d, q.invariants, gens, stable))
    });
    let mut pieces = Vec::new();
    let mut generators = Vec::new();
    let mut stable = true;
    for r in results {
        let (d, inv, gens, st) = r?;
        stable &= st;
        if !inv.is_zero() {
            pieces.push((d, inv));
            generators.extend(gens.into_iter().map(|g| (d, g)));
        }
    }
    let verdict = if !stable {
        TorsionVerdict::Inconclusive
    } else if pieces.is_empty() {
        TorsionVerdict::TorsionFree
    } else {
        TorsionVerdict::HasTorsion
    };
    Ok(TorsionReport {
        verdict,
        method: TorsionMethod::Structure { step: s },
        horizon: top + 2 * (top - lo).max(s as i64),
        pieces,
        generators,
        note: format!("x^[{s}] is injective from degree {top} on"),
    })
}

fn theorem_path(lin: &Lin, m: &PresentedModule, lo: i64, bound: i64) -> Result<TorsionReport> {
    let f = &m.generators;
    let rel = images(lin, &m.relations, lo, bound);
    let last = lo + (bound - lo) / 2;
    // Every cyclic generator of M_d must survive some x^[j] inside the window.
    let stuck: Vec<Option<i64>> = par::map_range(lo, last, |d| {
        let dim = f.dim(d);
        let q = match lin.quotient(dim, &lin.full(dim), &rel[(d - lo) as usize]) {
            Ok(q) => q,
            Err(_) => return Some(d),
        };
        for (g, _) in &q.generators {
            let escapes = (1..=(bound - d) as u64).any(|j| {
                let v = f.shift(g, d, d + j as i64);
                !lin.contains(f.dim(d + j as i64), &rel[(d + j as i64 - lo) as usize], &v)
            });
            if !escapes {
                return Some(d);
            }
        }
        None
    });
    let stuck: Vec<i64> = stuck.into_iter().flatten().collect();
    let (verdict, note) = if stuck.is_empty() {
        (
            TorsionVerdict::TorsionFree,
            format!("every maximal ideal contains infinitely many π_n; each generator of M_d for d ≤ {last} survives some x^[j] by degree {bound}"),
        )
    } else {
        (
            TorsionVerdict::Inconclusive,
            format!("generators in degrees {stuck:?} are killed by every x^[j] up to degree {bound}"),
        )
    };
    Ok(TorsionReport { verdict, method: TorsionMethod::Theorem, horizon: bound, pieces: Vec::new(), generators: Vec::new(), note })
}
