//! Free graded modules and homogeneous maps between them.

use std::sync::Arc;

use crate::algebra::{AlgebraContext, GdpaElement};
use crate::error::{Error, Result};
use crate::lattice::{Lin, Vector};
use crate::matrix::ExactMatrix;
use crate::ring::{Elem, Ring};

/// `⊕_g D[−d_g]`; in degree `n` the basis is `x^[n−d_g]·e_g` for `d_g ≤ n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModule {
    ctx: Arc<AlgebraContext>,
    degrees: Vec<i64>,
}

impl FreeModule {
    pub fn new(ctx: &Arc<AlgebraContext>, degrees: Vec<i64>) -> Self {
        FreeModule { ctx: Arc::clone(ctx), degrees }
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn ring(&self) -> &Ring {
        self.ctx.ring()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.degrees.iter().copied().min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.degrees.iter().copied().max()
    }

    /// Generator indices present in degree `n`.
    pub fn basis(&self, n: i64) -> Vec<usize> {
        (0..self.degrees.len()).filter(|&g| self.degrees[g] <= n).collect()
    }

    pub fn dim(&self, n: i64) -> usize {
        self.degrees.iter().filter(|&&d| d <= n).count()
    }

    /// Positions (in `basis(n)`) of generators of degree exactly `n`.
    pub fn top_positions(&self, n: i64) -> Vec<usize> {
        self.basis(n).iter().enumerate().filter(|(_, &g)| self.degrees[g] == n).map(|(i, _)| i).collect()
    }

    /// Coordinates of `x^[to−from]·v` for `v ∈ F_from`, over the computation ring.
    pub fn shift(&self, v: &[Elem], from: i64, to: i64) -> Vector {
        let r = self.ring();
        let src = self.basis(from);
        let dst = self.basis(to);
        let mut out = vec![r.zero(); dst.len()];
        if to < from {
            return out;
        }
        let j = (to - from) as u64;
        let mut pos = 0;
        for (i, g) in src.iter().enumerate() {
            while dst[pos] != *g {
                pos += 1;
            }
            if r.is_zero(&v[i]) {
                continue;
            }
            let c = self.ctx.c((to - self.degrees[*g]) as u64, j);
            out[pos] = r.mul(&v[i], &c);
        }
        out
    }

    /// Matrix of multiplication by `x^[j]` from degree `n` to `n + j`.
    pub fn mult_matrix(&self, n: i64, j: u64) -> ExactMatrix {
        let r = self.ring();
        let src = self.basis(n);
        let dst = self.basis(n + j as i64);
        ExactMatrix::from_fn(r, dst.len(), src.len(), |a, b| {
            if dst[a] == src[b] {
                self.ctx.c((n + j as i64 - self.degrees[src[b]]) as u64, j)
            } else {
                r.zero()
            }
        })
    }

    /// Expand a degree-`n` vector into one coefficient per generator.
    pub fn to_full(&self, v: &[Elem], n: i64) -> Vec<Elem> {
        let mut out = vec![self.ring().zero(); self.rank()];
        for (i, g) in self.basis(n).into_iter().enumerate() {
            out[g] = v[i].clone();
        }
        out
    }

    /// Restrict a per-generator coefficient list to the degree-`n` basis.
    pub fn from_full(&self, full: &[Elem], n: i64) -> Vector {
        self.basis(n).into_iter().map(|g| full[g].clone()).collect()
    }

    /// Unit vector for generator `g` in degree `deg g`.
    pub fn generator_vector(&self, g: usize) -> Vector {
        let d = self.degrees[g];
        let r = self.ring();
        self.basis(d).into_iter().map(|k| if k == g { r.one() } else { r.zero() }).collect()
    }
}

/// Homogeneous map `source → target`: generator `g` goes to `Σ_k c_kg·x^[e_g − d_k]·f_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomMap {
    pub source: FreeModule,
    pub target: FreeModule,
    /// `coeffs[k][g]`.
    coeffs: Vec<Vec<Elem>>,
}

impl HomMap {
    pub fn new(source: FreeModule, target: FreeModule, coeffs: Vec<Vec<Elem>>) -> Result<Self> {
        let r = target.ring().clone();
        if coeffs.len() != target.rank() || coeffs.iter().any(|row| row.len() != source.rank()) {
            return Err(Error::Dimension(format!(
                "map needs a {}×{} coefficient matrix",
                target.rank(),
                source.rank()
            )));
        }
        let coeffs: Vec<Vec<Elem>> = coeffs.into_iter().map(|row| row.into_iter().map(|x| r.normalize(x)).collect()).collect();
        for (k, row) in coeffs.iter().enumerate() {
            for (g, c) in row.iter().enumerate() {
                if !r.is_zero(c) && source.degrees[g] < target.degrees[k] {
                    return Err(Error::Malformed(format!(
                        "entry ({k}, {g}) would have negative degree {}",
                        source.degrees[g] - target.degrees[k]
                    )));
                }
            }
        }
        Ok(HomMap { source, target, coeffs })
    }

    /// Build from a column per source generator, each column given as algebra elements.
    pub fn from_elements(source: FreeModule, target: FreeModule, columns: &[Vec<GdpaElement>]) -> Result<Self> {
        let r = target.ring().clone();
        if columns.len() != source.rank() {
            return Err(Error::Dimension(format!("{} columns for {} source generators", columns.len(), source.rank())));
        }
        let mut coeffs = vec![vec![r.zero(); source.rank()]; target.rank()];
        for (g, col) in columns.iter().enumerate() {
            if col.len() != target.rank() {
                return Err(Error::Dimension(format!("column {g} has {} entries, expected {}", col.len(), target.rank())));
            }
            for (k, e) in col.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let want = source.degrees[g] - target.degrees[k];
                match e.homogeneous_degree() {
                    Some(deg) if deg as i64 == want => coeffs[k][g] = e.coeff(deg),
                    _ => {
                        return Err(Error::Malformed(format!(
                            "entry ({k}, {g}) must be homogeneous of degree {want}, got {e}"
                        )))
                    }
                }
            }
        }
        HomMap::new(source, target, coeffs)
    }

    /// Map whose images are the given vectors, each living in `target` at the given degree.
    pub fn from_vectors(target: &FreeModule, gens: &[(i64, Vector)]) -> Result<Self> {
        let source = FreeModule::new(target.context(), gens.iter().map(|(d, _)| *d).collect());
        let r = target.ring();
        let mut coeffs = vec![vec![r.zero(); gens.len()]; target.rank()];
        for (g, (d, v)) in gens.iter().enumerate() {
            let full = target.to_full(v, *d);
            for k in 0..target.rank() {
                coeffs[k][g] = full[k].clone();
            }
        }
        HomMap::new(source, target.clone(), coeffs)
    }

    pub fn coeff(&self, k: usize, g: usize) -> &Elem {
        &self.coeffs[k][g]
    }

    pub fn coeffs(&self) -> &[Vec<Elem>] {
        &self.coeffs
    }

    /// Entry `(k, g)` as an algebra element.
    pub fn element(&self, k: usize, g: usize) -> GdpaElement {
        let c = self.coeffs[k][g].clone();
        let ctx = self.target.context();
        if self.target.ring().is_zero(&c) {
            return GdpaElement::zero(ctx);
        }
        GdpaElement::monomial(ctx, (self.source.degrees[g] - self.target.degrees[k]) as u64, c)
    }

    /// Degree-`n` matrix: rows `target.basis(n)`, columns `source.basis(n)`.
    pub fn slice(&self, n: i64) -> ExactMatrix {
        let r = self.target.ring();
        let rows = self.target.basis(n);
        let cols = self.source.basis(n);
        let ctx = self.target.context();
        ExactMatrix::from_fn(r, rows.len(), cols.len(), |a, b| {
            let (k, g) = (rows[a], cols[b]);
            let c = &self.coeffs[k][g];
            if r.is_zero(c) {
                return r.zero();
            }
            let dk = self.target.degrees[k];
            let eg = self.source.degrees[g];
            r.mul(c, &ctx.c((n - dk) as u64, (n - eg) as u64))
        })
    }

    /// Images of the degree-`n` monomial multiples of the source generators.
    pub fn image_columns(&self, n: i64) -> Vec<Vector> {
        let s = self.slice(n);
        (0..s.cols()).map(|j| s.column(j)).collect()
    }

    /// Span of the image in degree `n`, over the computation ring of `lin`.
    pub fn image_span(&self, lin: &Lin, n: i64) -> Vec<Vector> {
        lin.span(self.target.dim(n), &self.image_columns(n))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &HomMap) -> Result<HomMap> {
        if other.target != self.source {
            return Err(Error::Dimension("maps are not composable".into()));
        }
        let r = self.target.ring().clone();
        let ctx = self.target.context().clone();
        let mut coeffs = vec![vec![r.zero(); other.source.rank()]; self.target.rank()];
        for (k, row) in coeffs.iter_mut().enumerate() {
            for (g, slot) in row.iter_mut().enumerate() {
                let mut acc = r.zero();
                for m in 0..self.source.rank() {
                    let a = &self.coeffs[k][m];
                    let b = &other.coeffs[m][g];
                    if r.is_zero(a) || r.is_zero(b) {
                        continue;
                    }
                    let i = (self.source.degrees[m] - self.target.degrees[k]) as u64;
                    let j = (other.source.degrees[g] - self.source.degrees[m]) as u64;
                    acc = r.add(&acc, &r.mul(&r.mul(a, b), &ctx.c(i + j, j)));
                }
                *slot = acc;
            }
        }
        HomMap::new(other.source.clone(), self.target.clone(), coeffs)
    }

    pub fn is_zero(&self) -> bool {
        let r = self.target.ring();
        self.coeffs.iter().flatten().all(|c| r.is_zero(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slices_follow_binomials() {
        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        let d = FreeModule::new(&ctx, vec![0]);
        let src = FreeModule::new(&ctx, vec![1]);
        let f = HomMap::new(src, d.clone(), vec![vec![z.one()]]).unwrap();
        for n in 1..8 {
            assert_eq!(f.slice(n).get(0, 0), &z.from_int(n));
        }
        assert_eq!(f.slice(0).cols(), 0);
        let v = d.shift(&[z.one()], 1, 3);
        assert_eq!(v, vec![z.from_int(3)]);
        assert_eq!(d.mult_matrix(1, 2).get(0, 0), &z.from_int(3));
    }

    #[test]
    fn composition_matches_slices() {
        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        let a = FreeModule::new(&ctx, vec![0, 1]);
        let b = FreeModule::new(&ctx, vec![2]);
        let c = FreeModule::new(&ctx, vec![3, 4]);
        let f = HomMap::new(b.clone(), a.clone(), vec![vec![z.from_int(2)], vec![z.from_int(-1)]]).unwrap();
        let g = HomMap::new(c.clone(), b, vec![vec![z.from_int(3), z.from_int(1)]]).unwrap();
        let fg = f.compose(&g).unwrap();
        for n in 0..9 {
            assert_eq!(f.slice(n).mul(&g.slice(n)).unwrap(), fg.slice(n));
        }
    }

    #[test]
    fn rejects_inhomogeneous() {
        let z = Ring::Integers;
        let ctx = AlgebraContext::classical(&z);
        let a = FreeModule::new(&ctx, vec![0]);
        let b = FreeModule::new(&ctx, vec![2]);
        let e = GdpaElement::from_terms(&ctx, [(1, z.one()), (2, z.one())]);
        assert!(HomMap::from_elements(b.clone(), a.clone(), &[vec![e]]).is_err());
        assert!(HomMap::new(a, b, vec![vec![z.one()]]).is_err());
    }
}
