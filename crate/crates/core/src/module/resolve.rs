//! Degreewise generator extraction, syzygies and Tor.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::free::{FreeModule, HomMap};
use super::presented::{PresentationJson, PresentedModule};
use crate::error::{Error, Result};
use crate::lattice::{Lin, Vector};
use crate::matrix::{ModuleInvariants, ModuleInvariantsJson};
use crate::par;

/// Generators of a graded submodule `P ⊆ F` modulo a base submodule `B ⊆ P`, found degree by degree.
pub(crate) struct Extraction {
    pub gens: Vec<(i64, Vector)>,
    /// `(P_n ∩ D₊F_n)/(D₊P_n + B_n)` when requested.
    pub tor: Vec<(i64, ModuleInvariants)>,
}

/// `sub[n − lo]` and `base[n − lo]` are lattice bases in `F_n`.
pub(crate) fn extract(
    lin: &Lin,
    f: &FreeModule,
    lo: i64,
    sub: &[Vec<Vector>],
    base: Option<&[Vec<Vector>]>,
    want_tor: bool,
) -> Result<Extraction> {
    let mut gens: Vec<(i64, Vector)> = Vec::new();
    let mut tor = Vec::new();
    for (idx, p) in sub.iter().enumerate() {
        let n = lo + idx as i64;
        let dim = f.dim(n);
        let mut s: Vec<Vector> = gens.iter().filter(|(d, _)| *d < n).map(|(d, v)| f.shift(v, *d, n)).collect();
        if let Some(b) = base {
            s.extend(b[idx].iter().cloned());
        }
        let s = lin.span(dim, &s);
        if want_tor {
            let top = f.top_positions(n);
            let inner = lin.intersect_coordinates(dim, p, &top);
            tor.push((n, lin.quotient(dim, &inner, &s)?.invariants));
        }
        let q = lin.quotient(dim, p, &s)?;
        for (v, _) in q.generators {
            gens.push((n, v));
        }
    }
    Ok(Extraction { gens, tor })
}

/// Kernel bases of a map, degree by degree.
pub(crate) fn kernels(lin: &Lin, map: &HomMap, lo: i64, hi: i64) -> Vec<Vec<Vector>> {
    par::map_range(lo, hi, |n| lin.kernel(&map.slice(n).with_ring(&lin.comp)))
}

/// Image bases of a map, degree by degree.
pub(crate) fn images(lin: &Lin, map: &HomMap, lo: i64, hi: i64) -> Vec<Vec<Vector>> {
    par::map_range(lo, hi, |n| map.image_span(lin, n))
}

/// `Tor_i(M, 𝕜)_n` for `0 ≤ i ≤ max_i`, `lo ≤ n ≤ horizon`.
#[derive(Clone, Debug)]
pub struct TorTable {
    pub entries: BTreeMap<(usize, i64), ModuleInvariants>,
    pub max_i: usize,
    pub lo: i64,
    pub horizon: i64,
    /// Set when higher Tor groups may be nonzero inside the computed degree range.
    pub partial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorEntryJson {
    pub i: usize,
    pub degree: i64,
    pub invariants: ModuleInvariantsJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorTableJson {
    pub horizon: i64,
    pub max_i: usize,
    pub partial: bool,
    /// Top degree of each `Tor_i`, or null when it vanishes in range.
    pub top_degrees: Vec<Option<i64>>,
    pub entries: Vec<TorEntryJson>,
}

impl TorTable {
    pub fn get(&self, i: usize, n: i64) -> Option<&ModuleInvariants> {
        self.entries.get(&(i, n))
    }

    /// `t_i`: the largest degree with `Tor_i ≠ 0`, if any.
    pub fn top_degree(&self, i: usize) -> Option<i64> {
        self.entries.iter().filter(|((j, _), v)| *j == i && !v.is_zero()).map(|((_, n), _)| *n).max()
    }

    /// Degrees where `Tor_i` is nonzero.
    pub fn support(&self, i: usize) -> Vec<i64> {
        self.entries.iter().filter(|((j, _), v)| *j == i && !v.is_zero()).map(|((_, n), _)| *n).collect()
    }

    pub fn to_json(&self) -> TorTableJson {
        TorTableJson {
            horizon: self.horizon,
            max_i: self.max_i,
            partial: self.partial,
            top_degrees: (0..=self.max_i).map(|i| self.top_degree(i)).collect(),
            entries: self
                .entries
                .iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|((i, n), v)| TorEntryJson { i: *i, degree: *n, invariants: v.to_json() })
                .collect(),
        }
    }
}

/// A free resolution computed through a degree horizon.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// `F_0, F_1, …`.
    pub modules: Vec<FreeModule>,
    /// `∂_i : F_i → F_{i−1}` stored at index `i − 1`.
    pub maps: Vec<HomMap>,
    pub lo: i64,
    pub horizon: i64,
}

impl Resolution {
    /// Check `∂_{i}∘∂_{i+1} = 0` in every degree through the horizon.
    pub fn is_complex(&self) -> bool {
        self.maps.windows(2).all(|w| {
            (self.lo..=self.horizon).all(|n| match w[0].slice(n).mul(&w[1].slice(n)) {
                Ok(m) => m.is_zero(),
                Err(_) => false,
            })
        })
    }
}

/// Resolve `M` to length `max_i` through `horizon`, returning the resolution and Tor table.
pub fn resolve(m: &PresentedModule, max_i: usize, horizon: i64) -> Result<(Resolution, TorTable)> {
    let lin = m.lin()?;
    let lo = m.min_degree();
    let f0 = m.generators.clone();
    let mut entries = BTreeMap::new();
    let rel = images(&lin, &m.relations, lo, horizon);
    for (idx, r) in rel.iter().enumerate() {
        let n = lo + idx as i64;
        let dim = f0.dim(n);
        let mut sub = r.clone();
        for (i, g) in f0.basis(n).into_iter().enumerate() {
            if f0.degrees()[g] < n {
                let mut e = lin.zero_vec(dim);
                e[i] = lin.comp.one();
                sub.push(e);
            }
        }
        entries.insert((0, n), lin.cokernel(dim, &sub)?);
    }
    let mut modules = vec![f0];
    let mut maps: Vec<HomMap> = Vec::new();
    let mut sub = rel;
    let mut partial = false;
    for i in 1..=max_i + 1 {
        let prev = modules.last().unwrap().clone();
        if i == max_i + 1 {
            partial = sub.iter().any(|b| b.iter().any(|v| !lin.is_zero_vec(v)));
            break;
        }
        let ex = extract(&lin, &prev, lo, &sub, None, true)?;
        for (n, inv) in ex.tor {
            entries.insert((i, n), inv);
        }
        let map = HomMap::from_vectors(&prev, &ex.gens)?;
        sub = kernels(&lin, &map, lo, horizon);
        modules.push(map.source.clone());
        maps.push(map);
    }
    let res = Resolution { modules, maps, lo, horizon };
    Ok((res, TorTable { entries, max_i, lo, horizon, partial }))
}

pub fn tor(m: &PresentedModule, max_i: usize, horizon: i64) -> Result<TorTable> {
    Ok(resolve(m, max_i, horizon)?.1)
}

/// `Tor_1` of `F/K` with `K` given degreewise, together with the generators of `K`.
pub(crate) fn tor1_of_quotient(lin: &Lin, f: &FreeModule, lo: i64, k: &[Vec<Vector>]) -> Result<Extraction> {
    extract(lin, f, lo, k, None, true)
}

/// A homogeneous map of presented modules, given on generators.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: PresentedModule,
    pub target: PresentedModule,
    pub map: HomMap,
}

impl ModuleMap {
    pub fn new(source: PresentedModule, target: PresentedModule, map: HomMap) -> Result<Self> {
        if map.source != source.generators || map.target != target.generators {
            return Err(Error::Dimension("map must go between the generator modules".into()));
        }
        Ok(ModuleMap { source, target, map })
    }

    /// Check that relations map into relations through `horizon`.
    pub fn is_well_defined(&self, horizon: i64) -> Result<bool> {
        let lin = self.source.lin()?;
        let lo = self.source.min_degree();
        let composite = self.map.compose(&self.source.relations)?;
        for n in lo..=horizon {
            let q = self.target.relation_span(&lin, n);
            let dim = self.target.generators.dim(n);
            if !composite.image_columns(n).iter().all(|v| lin.contains(dim, &q, v)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Kernel of a module map, presented through a degree bound.
#[derive(Clone, Debug)]
pub struct KernelPresentation {
    pub module: PresentedModule,
    /// Generator vectors of the kernel inside the source generator module.
    pub inclusion: HomMap,
    pub degree_bound: i64,
    /// Set when a certificate shows no generators or relations occur past the bound.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelPresentationJson {
    pub degree_bound: i64,
    pub complete: bool,
    pub generator_degrees: Vec<i64>,
    pub module: PresentationJson,
}

impl KernelPresentation {
    pub fn generator_degrees(&self) -> &[i64] {
        self.module.generators.degrees()
    }

    pub fn to_json(&self) -> KernelPresentationJson {
        KernelPresentationJson {
            degree_bound: self.degree_bound,
            complete: self.complete,
            generator_degrees: self.generator_degrees().to_vec(),
            module: self.module.to_json(),
        }
    }
}

/// Kernel of `f : M → N`. `certificate` is a degree past which the kernel is known to
/// need no new generators or relations (for instance a `(2N+3)d` bound).
pub fn kernel_presentation(f: &ModuleMap, degree_bound: i64, certificate: Option<i64>) -> Result<KernelPresentation> {
    let src = &f.source;
    let lin = src.lin()?;
    let lo = src.min_degree();
    let f0 = &src.generators;
    let pre: Vec<Vec<Vector>> = par::map_range(lo, degree_bound, |n| {
        let q = f.target.relation_span(&lin, n);
        lin.preimage(&f.map.slice(n).with_ring(&lin.comp), &q)
    });
    let base = images(&lin, &src.relations, lo, degree_bound);
    let ex = extract(&lin, f0, lo, &pre, Some(&base), false)?;
    let inclusion = HomMap::from_vectors(f0, &ex.gens)?;
    let kf = inclusion.source.clone();
    let rel: Vec<Vec<Vector>> = par::map_range(lo, degree_bound, |n| {
        let r = src.relation_span(&lin, n);
        lin.preimage(&inclusion.slice(n).with_ring(&lin.comp), &r)
    });
    let rex = extract(&lin, &kf, lo, &rel, None, false)?;
    let relations = HomMap::from_vectors(&kf, &rex.gens)?;
    let module = PresentedModule::new(kf, relations)?;
    let complete = certificate.is_some_and(|c| c <= degree_bound);
    Ok(KernelPresentation { module, inclusion, degree_bound, complete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraContext;
    use crate::pi::PiSequence;
    use crate::ring::Ring;

    fn residue_field(r: &Ring, horizon: i64) -> PresentedModule {
        let ctx = AlgebraContext::classical(r);
        let rels: Vec<(i64, _)> = (1..=horizon).map(|n| (n, r.one())).collect();
        PresentedModule::cyclic(&ctx, &rels).unwrap()
    }

    #[test]
    fn tor1_of_residue_field_gf2() {
        let r = Ring::PrimeField(2);
        let t = tor(&residue_field(&r, 20), 1, 20).unwrap();
        assert_eq!(t.support(1), vec![1, 2, 4, 8, 16]);
        assert_eq!(t.support(0), vec![0]);
    }

    #[test]
    fn tor1_of_residue_field_z4() {
        let r = Ring::IntegersMod(4);
        let t = tor(&residue_field(&r, 12), 1, 12).unwrap();
        let pi = PiSequence::classical(&r);
        for n in 1..=12 {
            let want = if n == 1 { ModuleInvariants::free(&r, 1) } else { ModuleInvariants::cyclic(&r, &pi.pi(n as u64)) };
            assert_eq!(t.get(1, n).unwrap(), &want, "n = {n}");
        }
    }

    #[test]
    fn free_module_has_no_higher_tor() {
        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        let m = PresentedModule::from_i64(&ctx, vec![0], vec![0], &[vec![2]]).unwrap();
        let (res, t) = resolve(&m, 3, 10).unwrap();
        for i in 1..=3 {
            assert!(t.support(i).is_empty());
        }
        assert!(!t.partial);
        assert!(res.is_complex());
    }

    #[test]
    fn syzygy_examples() {
        let f2 = Ring::PrimeField(2);
        let ctx = AlgebraContext::classical(&f2);
        let d = PresentedModule::free(&ctx, vec![0]);
        let d1 = PresentedModule::free(&ctx, vec![1]);
        let map = HomMap::new(d1.generators.clone(), d.generators.clone(), vec![vec![f2.one()]]).unwrap();
        let f = ModuleMap::new(d1, d.clone(), map.clone()).unwrap();
        let k = kernel_presentation(&f, 16, None).unwrap();
        assert_eq!(k.generator_degrees(), &[2]);
        assert!(!k.complete);

        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        let d = PresentedModule::free(&ctx, vec![0]);
        let d1 = PresentedModule::free(&ctx, vec![1]);
        let map = HomMap::new(d1.generators.clone(), d.generators.clone(), vec![vec![z.one()]]).unwrap();
        let k = kernel_presentation(&ModuleMap::new(d1, d.clone(), map).unwrap(), 16, Some(4)).unwrap();
        assert!(k.generator_degrees().is_empty());
        assert!(k.complete);

        let id = HomMap::new(d.generators.clone(), d.generators.clone(), vec![vec![z.one()]]).unwrap();
        let k = kernel_presentation(&ModuleMap::new(d.clone(), d, id).unwrap(), 8, None).unwrap();
        assert!(k.generator_degrees().is_empty());
    }
}
