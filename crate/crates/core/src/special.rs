//! Principal special modules `M(𝔞,h) = (D/𝔞D)^(h)`, special filtrations and special resolutions.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraContext;
use crate::error::{Error, Result};
use crate::lattice::{Lin, Vector};
use crate::matrix::ModuleInvariants;
use crate::module::free::{FreeModule, HomMap};
use crate::module::presented::{PresentationJson, PresentedModule};
use crate::module::resolve::{extract, images};
use crate::par;
use crate::pi::ZeroLocus;
use crate::ring::{Elem, Ring};

/// One filtration step: the D-span of `generator` (degree `shift`) contributes a copy of `M(𝔞,h)[−shift]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialBlock {
    pub ideal_generators: Vec<Elem>,
    pub h: u64,
    pub shift: i64,
    /// Coefficients per generator of the ambient free module.
    pub generator: Vec<Elem>,
}

/// Filtration `B = P_0 ⊂ P_1 ⊂ … ⊂ P_k = T` inside a free module `F`, with
/// `P_j = P_{j−1} + D·v_j` and `P_j/P_{j−1} ≅ M(𝔞_j,h_j)[−s_j]`.
#[derive(Clone, Debug)]
pub struct SpecialFiltrationCertificate {
    pub ambient: FreeModule,
    /// Generators of `B`; the filtered module is `T/B`.
    pub base: HomMap,
    /// Generators of `T`; `None` means all of `F`.
    pub target: Option<HomMap>,
    pub blocks: Vec<SpecialBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationVerdict {
    pub valid: bool,
    /// `(block, degree)` of the first mismatch; `block == blocks.len()` flags the final span.
    pub witness: Option<(usize, i64)>,
    pub horizon: i64,
    pub message: String,
}

/// `0 → P_r → F_{r−1} → … → F_0 → M → 0` with `P_r` special.
#[derive(Clone, Debug)]
pub struct SpecialResolution {
    pub module: PresentedModule,
    pub r: usize,
    /// The free cover `F_0` when `r = 1`.
    pub free: Vec<FreeModule>,
    pub certificate: SpecialFiltrationCertificate,
    pub horizon: i64,
    pub verdict: FiltrationVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialBlockJson {
    pub ideal: Vec<String>,
    pub h: u64,
    pub shift: i64,
    pub generator: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialResolutionJson {
    pub r: usize,
    pub horizon: i64,
    pub module: PresentationJson,
    pub free_ranks: Vec<usize>,
    pub blocks: Vec<SpecialBlockJson>,
    pub verdict: FiltrationVerdict,
}

impl SpecialBlock {
    pub fn to_json(&self, ring: &Ring) -> SpecialBlockJson {
        SpecialBlockJson {
            ideal: self.ideal_generators.iter().map(|x| ring.format(x)).collect(),
            h: self.h,
            shift: self.shift,
            generator: self.generator.iter().map(|x| ring.format(x)).collect(),
        }
    }
}

impl SpecialResolution {
    pub fn to_json(&self) -> SpecialResolutionJson {
        let ring = self.module.ring();
        SpecialResolutionJson {
            r: self.r,
            horizon: self.horizon,
            module: self.module.to_json(),
            free_ranks: self.free.iter().map(|f| f.rank()).collect(),
            blocks: self.certificate.blocks.iter().map(|b| b.to_json(ring)).collect(),
            verdict: self.verdict.clone(),
        }
    }
}

/// `M(𝔞,h)`: one degree-0 generator with relations `a·e` for `a ∈ 𝔞` and `x^[j]·e` for `1 ≤ j < h`.
pub fn make_special(ctx: &Arc<AlgebraContext>, ideal: &[Elem], h: u64) -> Result<PresentedModule> {
    let r = ctx.ring();
    if h == 0 {
        return Err(Error::Precondition("h must be at least 1".into()));
    }
    let pi_h = ctx.pi().pi(h);
    if !r.ideal_contains(ideal, &pi_h)? {
        return Err(Error::Precondition(format!("π_{h} = {} is not in the ideal", r.format(&pi_h))));
    }
    let mut rels: Vec<(i64, Elem)> = ideal.iter().filter(|a| !r.is_zero(a)).map(|a| (0, a.clone())).collect();
    rels.extend((1..h).map(|j| (j as i64, r.one())));
    PresentedModule::cyclic(ctx, &rels)
}

fn expected_piece(ring: &Ring, block: &SpecialBlock, n: i64) -> Result<ModuleInvariants> {
    if n < block.shift || !((n - block.shift) as u64).is_multiple_of(block.h) {
        return Ok(ModuleInvariants::zero(ring));
    }
    Ok(ModuleInvariants::cyclic(ring, &ring.ideal_generator(&block.ideal_generators)?))
}

/// Check one degree; returns the index of the first failing block.
fn verify_degree(lin: &Lin, cert: &SpecialFiltrationCertificate, n: i64) -> Result<Option<usize>> {
    let f = &cert.ambient;
    let dim = f.dim(n);
    let ring = f.ring();
    let mut span = cert.base.image_span(lin, n);
    for (k, b) in cert.blocks.iter().enumerate() {
        let mut gens = span.clone();
        if n >= b.shift {
            let v = f.from_full(&b.generator, b.shift);
            gens.push(f.shift(&v, b.shift, n));
        }
        let next = lin.span(dim, &gens);
        let q = lin.quotient(dim, &next, &span)?;
        if q.invariants != expected_piece(ring, b, n)? {
            return Ok(Some(k));
        }
        span = next;
    }
    let target = match &cert.target {
        Some(t) => t.image_span(lin, n),
        None => lin.full(dim),
    };
    if !lin.same_span(dim, &span, &target) {
        return Ok(Some(cert.blocks.len()));
    }
    Ok(None)
}

pub fn verify_special_filtration(cert: &SpecialFiltrationCertificate, horizon: i64) -> Result<FiltrationVerdict> {
    let f = &cert.ambient;
    if cert.base.target != *f || cert.target.as_ref().is_some_and(|t| t.target != *f) {
        return Err(Error::Malformed("certificate maps must land in the ambient module".into()));
    }
    for (k, b) in cert.blocks.iter().enumerate() {
        if b.h == 0 || b.generator.len() != f.rank() {
            return Err(Error::Malformed(format!("block {k} is malformed")));
        }
        if f.degrees().iter().zip(&b.generator).any(|(&d, c)| d > b.shift && !f.ring().is_zero(c)) {
            return Err(Error::Malformed(format!("block {k} is not homogeneous of degree {}", b.shift)));
        }
    }
    let lin = Lin::new(f.ring())?;
    let lo = f.min_degree().unwrap_or(0);
    let checks = par::map_range(lo, horizon, |n| verify_degree(&lin, cert, n).map(|w| w.map(|k| (k, n))));
    for c in checks {
        if let Some((k, n)) = c? {
            let message = if k == cert.blocks.len() {
                format!("blocks do not exhaust the target in degree {n}")
            } else {
                format!("block {k} has the wrong graded piece in degree {n}")
            };
            return Ok(FiltrationVerdict { valid: false, witness: Some((k, n)), horizon, message });
        }
    }
    Ok(FiltrationVerdict { valid: true, witness: None, horizon, message: format!("{} blocks verified through degree {horizon}", cert.blocks.len()) })
}

/// `ord(j)`: the largest `i` with `x^[j] ∈ 𝔪^i` in `D_{<h}` over a field.
fn adic_order(ctx: &AlgebraContext, h: u64) -> Vec<u32> {
    let r = ctx.ring();
    let mut ord = vec![0u32; h as usize];
    for j in 1..h {
        let mut best = 1;
        for a in 1..j {
            if !r.is_zero(&ctx.c(j, a)) {
                best = best.max(ord[a as usize] + ord[(j - a) as usize]);
            }
        }
        ord[j as usize] = best;
    }
    ord
}

/// Positions of `basis(n)` outside `J_i F = span{x^[m]e_g : ord(m mod h) ≥ i}`.
fn outside_layer(f: &FreeModule, ord: &[u32], n: i64, i: u32) -> Vec<usize> {
    let h = ord.len() as i64;
    f.basis(n)
        .into_iter()
        .enumerate()
        .filter(|(_, g)| ord[((n - f.degrees()[*g]) % h) as usize] < i)
        .map(|(p, _)| p)
        .collect()
}

/// Blocks of `P/B` over the filtration `P ∩ J_i F`, deepest layer first.
fn layered_blocks(
    lin: &Lin,
    f: &FreeModule,
    ord: &[u32],
    lo: i64,
    horizon: i64,
    p: &[Vec<Vector>],
    b: &[Vec<Vector>],
) -> Result<Vec<SpecialBlock>> {
    let depth = ord.iter().copied().max().unwrap_or(0);
    let ring = f.ring();
    let layer = |i: u32| -> Vec<Vec<Vector>> {
        par::map_range(lo, horizon, |n| {
            let idx = (n - lo) as usize;
            let dim = f.dim(n);
            let cut = lin.intersect_coordinates(dim, &p[idx], &outside_layer(f, ord, n, i));
            lin.span(dim, &[cut, b[idx].clone()].concat())
        })
    };
    let mut blocks = Vec::new();
    let mut below = layer(depth + 1);
    for i in (0..=depth).rev() {
        let here = layer(i);
        let ex = extract(lin, f, lo, &here, Some(&below), false)?;
        for (n, v) in ex.gens {
            blocks.push(SpecialBlock { ideal_generators: vec![ring.zero()], h: ord.len() as u64, shift: n, generator: f.to_full(&lin.reduce_vec(&v), n) });
        }
        below = here;
    }
    Ok(blocks)
}

fn zero_map(f: &FreeModule) -> Result<HomMap> {
    HomMap::from_vectors(f, &[])
}

/// Candidate periods `h` for a field, in the order they are tried.
fn candidate_periods(m: &PresentedModule) -> Result<Vec<u64>> {
    let pi = m.context().pi();
    let span = (m.max_presentation_degree() - m.min_degree()).max(0) as u64;
    match pi.zero_locus() {
        ZeroLocus::Geometric { .. } => {
            let seq = pi.zero_locus().sequence().expect("geometric loci have a sequence");
            let mut out: Vec<u64> = (0..).map_while(|i| seq.term(i)).filter(|&t| t > span && t > 1).take(3).collect();
            if out.is_empty() {
                out.push(1);
            }
            Ok(out)
        }
        ZeroLocus::Finite(z) => Ok(vec![z.iter().copied().max().unwrap_or(1)]),
        ZeroLocus::Unknown => Err(Error::Precondition("the zero locus of π is not known".into())),
    }
}

/// Special resolution of length at most 1 over a field, verified through `horizon`.
pub fn special_resolve_field(m: &PresentedModule, horizon: i64) -> Result<SpecialResolution> {
    let ring = m.ring().clone();
    if !ring.is_field() {
        return Err(Error::UnsupportedRing { ring: ring.to_string(), op: "special_resolve_field" });
    }
    let lin = m.lin()?;
    let f0 = m.generators.clone();
    let ctx = m.context().clone();
    let lo = m.min_degree();
    let rel = images(&lin, &m.relations, lo, horizon);
    let full: Vec<Vec<Vector>> = (lo..=horizon).map(|n| lin.full(f0.dim(n))).collect();
    let none: Vec<Vec<Vector>> = (lo..=horizon).map(|_| Vec::new()).collect();
    let infinite = ctx.pi().zero_locus().is_infinite();
    let mut last = None;
    for h in candidate_periods(m)? {
        let ord = adic_order(&ctx, h);
        let blocks = layered_blocks(&lin, &f0, &ord, lo, horizon, &full, &rel)?;
        let cert = SpecialFiltrationCertificate { ambient: f0.clone(), base: m.relations.clone(), target: None, blocks };
        let verdict = verify_special_filtration(&cert, horizon)?;
        if verdict.valid {
            return Ok(SpecialResolution { module: m.clone(), r: 0, free: Vec::new(), certificate: cert, horizon, verdict });
        }
        last = Some(verdict);
        if infinite {
            continue;
        }
        let blocks = layered_blocks(&lin, &f0, &ord, lo, horizon, &rel, &none)?;
        let cert = SpecialFiltrationCertificate { ambient: f0.clone(), base: zero_map(&f0)?, target: Some(m.relations.clone()), blocks };
        let verdict = verify_special_filtration(&cert, horizon)?;
        if verdict.valid {
            return Ok(SpecialResolution { module: m.clone(), r: 1, free: vec![f0.clone()], certificate: cert, horizon, verdict });
        }
        last = Some(verdict);
    }
    Err(Error::Precondition(format!(
        "no special filtration verified: {}",
        last.map(|v| v.message).unwrap_or_default()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pi::PiSequence;

    #[test]
    fn special_pieces() {
        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        let two = z.from_int(2);
        let m = make_special(&ctx, std::slice::from_ref(&two), 2).unwrap();
        for (n, inv) in m.piece_invariants(0, 12).unwrap() {
            let want = if n % 2 == 0 { ModuleInvariants::cyclic(&z, &two) } else { ModuleInvariants::zero(&z) };
            assert_eq!(inv, want, "degree {n}");
        }
        assert!(make_special(&ctx, std::slice::from_ref(&two), 3).is_err());
        let d = make_special(&ctx, &[z.zero()], 1).unwrap();
        assert_eq!(d.piece_invariants(0, 5).unwrap()[5].1, ModuleInvariants::free(&z, 1));
    }

    #[test]
    fn residue_module_is_special() {
        let f = Ring::PrimeField(3);
        let ctx = AlgebraContext::classical(&f);
        let m = make_special(&ctx, &[f.zero()], 3).unwrap();
        let res = special_resolve_field(&m, 30).unwrap();
        assert_eq!(res.r, 0);
        assert_eq!(res.certificate.blocks.len(), 1);
    }

    #[test]
    fn polynomial_ring_needs_one_step() {
        let q = Ring::Rationals;
        let ctx = AlgebraContext::all_ones(&q);
        let m = PresentedModule::cyclic(&ctx, &[(1, q.one())]).unwrap();
        let res = special_resolve_field(&m, 12).unwrap();
        assert_eq!(res.r, 1);
        let shifts: Vec<i64> = res.certificate.blocks.iter().map(|b| b.shift).collect();
        assert_eq!(shifts, vec![1]);
    }

    #[test]
    fn corrupted_block_is_rejected() {
        let f = Ring::PrimeField(2);
        let ctx = AlgebraContext::classical(&f);
        let m = PresentedModule::from_i64(&ctx, vec![0, 1], vec![2, 3], &[vec![1, 1], vec![0, 1]]).unwrap();
        let res = special_resolve_field(&m, 30).unwrap();
        assert_eq!(res.r, 0);
        let mut cert = res.certificate.clone();
        cert.blocks[0].h *= 2;
        let v = verify_special_filtration(&cert, 30).unwrap();
        assert!(!v.valid);
        assert_eq!(v.witness.unwrap().0, 0);
    }

    #[test]
    fn ideal_filtered_by_translates() {
        let p = 5u64;
        let f = Ring::PrimeField(p);
        let ctx = AlgebraContext::classical(&f);
        let d = FreeModule::new(&ctx, vec![0]);
        let gens: Vec<(i64, Vector)> = (1..p as i64).map(|j| (j, vec![f.one()])).collect();
        let ideal = HomMap::from_vectors(&d, &gens).unwrap();
        let blocks = (1..p as i64)
            .rev()
            .map(|j| SpecialBlock { ideal_generators: vec![f.zero()], h: p, shift: j, generator: vec![f.one()] })
            .collect();
        let cert = SpecialFiltrationCertificate { ambient: d.clone(), base: zero_map(&d).unwrap(), target: Some(ideal), blocks };
        assert!(verify_special_filtration(&cert, 40).unwrap().valid);
    }

    #[test]
    fn finite_zero_field_resolution() {
        let f = Ring::PrimeField(5);
        let pi = PiSequence::custom(&f, [(5, f.zero())].into_iter().collect(), f.one()).unwrap();
        let ctx = AlgebraContext::new(pi, 40).unwrap();
        let m = PresentedModule::from_i64(&ctx, vec![0, 2], vec![3, 6], &[vec![1, 2], vec![0, 1]]).unwrap();
        let res = special_resolve_field(&m, 30).unwrap();
        assert!(res.r <= 1);
        assert!(res.verdict.valid);
    }
}
