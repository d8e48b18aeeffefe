//! Finitely presented graded modules `F₁ → F₀ → M → 0`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::free::{FreeModule, HomMap};
use crate::algebra::{AlgebraContext, ElementJson, GdpaElement};
use crate::error::{Error, Result};
use crate::lattice::{Lin, Vector};
use crate::matrix::{ExactMatrix, ModuleInvariants, ModuleInvariantsJson};
use crate::par;
use crate::pi::PiSpec;
use crate::ring::{Elem, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedModule {
    pub generators: FreeModule,
    /// Columns are relations; the source generators carry the relation degrees.
    pub relations: HomMap,
}

/// Realization of one graded piece `M_d` as a cokernel over the coefficient ring.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub degree: i64,
    pub presentation_matrix: ExactMatrix,
    pub invariants: ModuleInvariants,
    /// `(generator, shift)` for each row: the basis element `x^[shift]·e_generator`.
    pub labels: Vec<(usize, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub context: PiSpec,
    pub generators: Vec<i64>,
    #[serde(default)]
    pub relations: Vec<Vec<ElementJson>>,
    #[serde(default)]
    pub relation_degrees: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPieceJson {
    pub degree: i64,
    pub invariants: ModuleInvariantsJson,
    pub matrix: Vec<Vec<String>>,
    pub labels: Vec<(usize, u64)>,
}

impl PresentedModule {
    pub fn new(generators: FreeModule, relations: HomMap) -> Result<Self> {
        if relations.target != generators {
            return Err(Error::Dimension("relations must map into the generator module".into()));
        }
        Ok(PresentedModule { generators, relations })
    }

    /// Free module on generators of the given degrees.
    pub fn free(ctx: &Arc<AlgebraContext>, degrees: Vec<i64>) -> Self {
        let f0 = FreeModule::new(ctx, degrees);
        let f1 = FreeModule::new(ctx, Vec::new());
        let rel = HomMap::new(f1, f0.clone(), vec![Vec::new(); f0.rank()]).expect("empty map");
        PresentedModule { generators: f0, relations: rel }
    }

    /// Relations given by coefficients: relation `j` of degree `rel_degrees[j]` is
    /// `Σ_k coeffs[j][k]·x^[rel_degrees[j] − d_k]·e_k`.
    pub fn from_coeffs(ctx: &Arc<AlgebraContext>, degrees: Vec<i64>, rel_degrees: Vec<i64>, coeffs: Vec<Vec<Elem>>) -> Result<Self> {
        let f0 = FreeModule::new(ctx, degrees);
        let f1 = FreeModule::new(ctx, rel_degrees);
        if coeffs.len() != f1.rank() {
            return Err(Error::Dimension(format!("{} relations for {} relation degrees", coeffs.len(), f1.rank())));
        }
        let mut t = vec![vec![ctx.ring().zero(); f1.rank()]; f0.rank()];
        for (j, col) in coeffs.into_iter().enumerate() {
            if col.len() != f0.rank() {
                return Err(Error::Dimension(format!("relation {j} has {} entries, expected {}", col.len(), f0.rank())));
            }
            for (k, c) in col.into_iter().enumerate() {
                t[k][j] = c;
            }
        }
        Self::new(f0.clone(), HomMap::new(f1, f0, t)?)
    }

    pub fn from_i64(ctx: &Arc<AlgebraContext>, degrees: Vec<i64>, rel_degrees: Vec<i64>, coeffs: &[Vec<i64>]) -> Result<Self> {
        let r = ctx.ring();
        let c = coeffs.iter().map(|col| col.iter().map(|&x| r.from_int(x)).collect()).collect();
        Self::from_coeffs(ctx, degrees, rel_degrees, c)
    }

    /// Cyclic module `D/(Σ relations)` with a degree-0 generator and monomial relations `c·x^[n]`.
    pub fn cyclic(ctx: &Arc<AlgebraContext>, relations: &[(i64, Elem)]) -> Result<Self> {
        let degs = relations.iter().map(|(d, _)| *d).collect();
        let coeffs = relations.iter().map(|(_, c)| vec![c.clone()]).collect();
        Self::from_coeffs(ctx, vec![0], degs, coeffs)
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        self.generators.context()
    }

    pub fn ring(&self) -> &Ring {
        self.generators.ring()
    }

    pub fn lin(&self) -> Result<Lin> {
        Lin::new(self.ring())
    }

    pub fn relation_degrees(&self) -> &[i64] {
        self.relations.source.degrees()
    }

    /// Lowest degree where `M` can be nonzero.
    pub fn min_degree(&self) -> i64 {
        self.generators.min_degree().unwrap_or(0)
    }

    /// Largest generator or relation degree.
    pub fn max_presentation_degree(&self) -> i64 {
        let g = self.generators.max_degree().unwrap_or(0);
        let r = self.relations.source.max_degree().unwrap_or(g);
        g.max(r)
    }

    /// `4·(max relation degree + 1)`, measured from the lowest generator degree.
    pub fn default_horizon(&self) -> i64 {
        let lo = self.min_degree();
        lo + 4 * (self.max_presentation_degree() - lo + 1)
    }

    /// Basis of the relation submodule `R_n ⊆ F₀_n`.
    pub fn relation_span(&self, lin: &Lin, n: i64) -> Vec<Vector> {
        self.relations.image_span(lin, n)
    }

    pub fn graded_piece(&self, d: i64) -> Result<GradedPiece> {
        let lin = self.lin()?;
        let basis = self.generators.basis(d);
        let labels = basis.iter().map(|&g| (g, (d - self.generators.degrees()[g]) as u64)).collect();
        let m = self.relations.slice(d);
        let cols: Vec<Vector> = (0..m.cols()).map(|j| m.column(j)).collect();
        let invariants = lin.cokernel(basis.len(), &cols)?;
        Ok(GradedPiece { degree: d, presentation_matrix: m, invariants, labels })
    }

    /// Invariants of `M_n` for `lo ≤ n ≤ hi`.
    pub fn piece_invariants(&self, lo: i64, hi: i64) -> Result<Vec<(i64, ModuleInvariants)>> {
        let lin = self.lin()?;
        par::map_range(lo, hi, |n| {
            let rel = self.relation_span(&lin, n);
            lin.cokernel(self.generators.dim(n), &rel).map(|inv| (n, inv))
        })
        .into_iter()
        .collect()
    }

    pub fn to_json(&self) -> PresentationJson {
        let rel = &self.relations;
        PresentationJson {
            context: self.context().pi().to_spec(),
            generators: self.generators.degrees().to_vec(),
            relations: (0..rel.source.rank())
                .map(|j| (0..rel.target.rank()).map(|k| rel.element(k, j).to_json()).collect())
                .collect(),
            relation_degrees: rel.source.degrees().to_vec(),
        }
    }

    pub fn from_json(j: &PresentationJson) -> Result<Self> {
        let ctx = AlgebraContext::from_spec(&j.context)?;
        Self::from_json_in(&ctx, j)
    }

    /// Parse against an existing context (the embedded context must agree).
    pub fn from_json_in(ctx: &Arc<AlgebraContext>, j: &PresentationJson) -> Result<Self> {
        if j.relations.len() != j.relation_degrees.len() {
            return Err(Error::Malformed(format!(
                "{} relations but {} relation degrees",
                j.relations.len(),
                j.relation_degrees.len()
            )));
        }
        let f0 = FreeModule::new(ctx, j.generators.clone());
        let f1 = FreeModule::new(ctx, j.relation_degrees.clone());
        let cols = j
            .relations
            .iter()
            .map(|col| col.iter().map(|e| GdpaElement::from_json(ctx, e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(f0.clone(), HomMap::from_elements(f1, f0, &cols)?)
    }
}

impl GradedPiece {
    pub fn to_json(&self) -> GradedPieceJson {
        GradedPieceJson {
            degree: self.degree,
            invariants: self.invariants.to_json(),
            matrix: self.presentation_matrix.to_strings(),
            labels: self.labels.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::cokernel_invariants;

    #[test]
    fn free_pieces() {
        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        let d = PresentedModule::free(&ctx, vec![0]);
        for n in 0..6 {
            assert_eq!(d.graded_piece(n).unwrap().invariants, ModuleInvariants::free(&z, 1));
        }
        assert!(d.graded_piece(-1).unwrap().invariants.is_zero());
    }

    #[test]
    fn zero_module() {
        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        let m = PresentedModule::cyclic(&ctx, &[(0, z.one())]).unwrap();
        for (_, inv) in m.piece_invariants(0, 10).unwrap() {
            assert!(inv.is_zero());
        }
    }

    #[test]
    fn piece_matches_matrix_cokernel() {
        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        let m = PresentedModule::from_i64(&ctx, vec![0, 1], vec![2, 3], &[vec![1, 2], vec![3, 0]]).unwrap();
        for n in 0..8 {
            let p = m.graded_piece(n).unwrap();
            assert_eq!(p.invariants, cokernel_invariants(&p.presentation_matrix).unwrap());
        }
        let p = m.graded_piece(2).unwrap();
        assert_eq!(p.labels, vec![(0, 2), (1, 1)]);
    }

    #[test]
    fn modular_pieces() {
        let r = Ring::IntegersMod(4);
        let ctx = AlgebraContext::classical(&r);
        let m = PresentedModule::cyclic(&ctx, &[(1, r.one())]).unwrap();
        let inv = m.piece_invariants(0, 4).unwrap();
        assert_eq!(inv[0].1, ModuleInvariants::free(&r, 1));
        assert!(inv[1].1.is_zero());
        assert_eq!(inv[2].1.torsion_factors, vec![r.from_int(2)]);
    }

    #[test]
    fn json_round_trip() {
        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        let m = PresentedModule::from_i64(&ctx, vec![0, 1], vec![2], &[vec![5, -1]]).unwrap();
        let j = m.to_json();
        let s = serde_json::to_string(&j).unwrap();
        let back = PresentedModule::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back.relations.coeffs(), m.relations.coeffs());
        assert_eq!(back.generators.degrees(), m.generators.degrees());
    }
}
