//! Submodules of `R^k` over a PID (or ℤ/n via lattices containing `nℤ^k`).

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{echelon_basis, snf_pid, ExactMatrix, ModuleInvariants};
use crate::ring::{Elem, Ring};

pub type Vector = Vec<Elem>;

/// Linear-algebra context: the user ring, the ring computations run in, and
/// for ℤ/n the modulus that every lattice implicitly contains.
#[derive(Clone, Debug)]
pub struct Lin {
    pub ring: Ring,
    pub comp: Ring,
    modulus: Option<BigInt>,
}

/// A quotient `L/S` with lifted generators of its cyclic summands.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub invariants: ModuleInvariants,
    /// `(vector, d)` with the summand generated by `vector` isomorphic to `R/(d)`.
    pub generators: Vec<(Vector, Elem)>,
}

/// Reusable solver for `B·x = v` with `B` of full column rank.
pub struct Solver {
    u: ExactMatrix,
    v: ExactMatrix,
    diag: Vec<Elem>,
    comp: Ring,
}

impl Solver {
    pub fn solve(&self, b: &[Elem]) -> Option<Vector> {
        let ub = self.u.mul_vec(b);
        let k = self.diag.len();
        let r = &self.comp;
        if ub[k..].iter().any(|x| !r.is_zero(x)) {
            return None;
        }
        let mut y = Vec::with_capacity(k);
        for (i, d) in self.diag.iter().enumerate() {
            y.push(r.div_exact(&ub[i], d)?);
        }
        Some(self.v.mul_vec(&y))
    }
}

impl Lin {
    pub fn new(ring: &Ring) -> Result<Lin> {
        match ring {
            Ring::IntegersMod(n) => Ok(Lin { ring: ring.clone(), comp: Ring::Integers, modulus: Some(BigInt::from(*n)) }),
            Ring::IntPoly => Err(Error::UnsupportedRing { ring: ring.to_string(), op: "module linear algebra" }),
            _ => Ok(Lin { ring: ring.clone(), comp: ring.clone(), modulus: None }),
        }
    }

    pub fn zero_vec(&self, dim: usize) -> Vector {
        vec![self.comp.zero(); dim]
    }

    /// Convert a user-ring element into the computation ring.
    pub fn lift(&self, a: &Elem) -> Elem {
        a.clone()
    }

    /// Convert a computation-ring element back to the user ring.
    pub fn reduce(&self, a: &Elem) -> Elem {
        match &self.modulus {
            Some(_) => self.ring.from_bigint(a.as_int()),
            None => a.clone(),
        }
    }

    pub fn reduce_vec(&self, v: &[Elem]) -> Vector {
        v.iter().map(|x| self.reduce(x)).collect()
    }

    fn modulus_columns(&self, dim: usize) -> Vec<Vector> {
        match &self.modulus {
            Some(n) => (0..dim)
                .map(|i| {
                    let mut v = self.zero_vec(dim);
                    v[i] = Elem::Int(n.clone());
                    v
                })
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn is_zero_vec(&self, v: &[Elem]) -> bool {
        match &self.modulus {
            Some(n) => v.iter().all(|x| (x.as_int() % n).is_zero()),
            None => v.iter().all(|x| self.comp.is_zero(x)),
        }
    }

    /// Basis of the submodule spanned by `gens` in `R^dim`.
    pub fn span(&self, dim: usize, gens: &[Vector]) -> Vec<Vector> {
        let mut cols: Vec<Vector> = gens.iter().filter(|g| !self.comp_zero(g)).cloned().collect();
        cols.extend(self.modulus_columns(dim));
        if cols.is_empty() || dim == 0 {
            return Vec::new();
        }
        echelon_basis(&self.comp, dim, cols)
    }

    fn comp_zero(&self, v: &[Elem]) -> bool {
        v.iter().all(|x| self.comp.is_zero(x))
    }

    /// Basis of `{v ∈ R^cols : a·v = 0}` with `a` given over the computation ring.
    pub fn kernel(&self, a: &ExactMatrix) -> Vec<Vector> {
        let (rows, cols) = (a.rows(), a.cols());
        if cols == 0 {
            return Vec::new();
        }
        let m = match &self.modulus {
            Some(_) if rows > 0 => a.hstack(&ExactMatrix::from_columns(&self.comp, rows, &self.modulus_columns(rows))),
            _ => a.clone(),
        };
        if rows == 0 {
            let mut out: Vec<Vector> = (0..cols)
                .map(|i| {
                    let mut v = self.zero_vec(cols);
                    v[i] = self.comp.one();
                    v
                })
                .collect();
            if self.modulus.is_some() {
                out = self.span(cols, &out);
            }
            return out;
        }
        let s = snf_pid(&m, false);
        let raw: Vec<Vector> = (s.rank..m.cols()).map(|j| s.v.column(j)[..cols].to_vec()).collect();
        self.span(cols, &raw)
    }

    /// Basis of `{v : a·v ∈ span(sub)}`.
    pub fn preimage(&self, a: &ExactMatrix, sub: &[Vector]) -> Vec<Vector> {
        let cols = a.cols();
        if sub.is_empty() {
            return self.kernel(a);
        }
        let s = ExactMatrix::from_columns(&self.comp, a.rows(), sub);
        let k = self.kernel(&a.hstack(&s));
        let proj: Vec<Vector> = k.into_iter().map(|v| v[..cols].to_vec()).collect();
        self.span(cols, &proj)
    }

    pub fn solver(&self, dim: usize, basis: &[Vector]) -> Solver {
        let b = ExactMatrix::from_columns(&self.comp, dim, basis);
        let s = snf_pid(&b, false);
        let diag = (0..basis.len()).map(|i| s.d.get(i, i).clone()).collect();
        Solver { u: s.u, v: s.v, diag, comp: self.comp.clone() }
    }

    /// Coordinates of `v` in `basis`, if `v` lies in the span.
    pub fn coords(&self, dim: usize, basis: &[Vector], v: &[Elem]) -> Option<Vector> {
        self.solver(dim, basis).solve(v)
    }

    pub fn contains(&self, dim: usize, basis: &[Vector], v: &[Elem]) -> bool {
        if self.is_zero_vec(v) {
            return true;
        }
        self.coords(dim, basis, v).is_some()
    }

    /// Whether two bases span the same submodule.
    pub fn same_span(&self, dim: usize, a: &[Vector], b: &[Vector]) -> bool {
        let sa = self.solver(dim, a);
        let sb = self.solver(dim, b);
        a.iter().all(|v| sb.solve(v).is_some()) && b.iter().all(|v| sa.solve(v).is_some())
    }

    /// `L/S` for `S ⊆ L` given by generators; `big` must be a basis.
    pub fn quotient(&self, dim: usize, big: &[Vector], small: &[Vector]) -> Result<Quotient> {
        let k = big.len();
        if k == 0 {
            return Ok(Quotient { invariants: ModuleInvariants::zero(&self.ring), generators: Vec::new() });
        }
        let solver = self.solver(dim, big);
        let mut coord_cols: Vec<Vector> = Vec::new();
        for s in small.iter().cloned().chain(self.modulus_columns(dim)) {
            if self.comp_zero(&s) {
                continue;
            }
            let c = solver
                .solve(&s)
                .ok_or_else(|| Error::Precondition("submodule is not contained in the ambient lattice".into()))?;
            coord_cols.push(c);
        }
        let bm = ExactMatrix::from_columns(&self.comp, dim, big);
        if coord_cols.is_empty() {
            let gens = big.iter().map(|v| (v.clone(), self.comp.zero())).collect();
            let diag = vec![self.comp.zero(); k];
            return Ok(Quotient { invariants: self.invariants_from_diag(&diag), generators: gens });
        }
        let x = ExactMatrix::from_columns(&self.comp, k, &coord_cols);
        let s = snf_pid(&x, true);
        let uinv = s.uinv.expect("requested");
        let mut diag = Vec::with_capacity(k);
        let mut gens = Vec::new();
        for i in 0..k {
            let d = if i < s.rank { s.d.get(i, i).clone() } else { self.comp.zero() };
            let d = self.normalize_factor(d);
            if !self.comp.is_unit(&d) {
                gens.push((bm.mul_vec(&uinv.column(i)), d.clone()));
            }
            diag.push(d);
        }
        Ok(Quotient { invariants: self.invariants_from_diag(&diag), generators: gens })
    }

    fn normalize_factor(&self, d: Elem) -> Elem {
        match &self.modulus {
            Some(n) if d.as_int() == n => self.comp.zero(),
            _ => d,
        }
    }

    fn invariants_from_diag(&self, diag: &[Elem]) -> ModuleInvariants {
        let d: Vec<Elem> = diag.iter().map(|x| self.reduce(x)).collect();
        ModuleInvariants::from_diagonal(&self.ring, &d)
    }

    /// `{v ∈ span(basis) : v_i = 0 for i ∈ zero}`.
    pub fn intersect_coordinates(&self, dim: usize, basis: &[Vector], zero: &[usize]) -> Vec<Vector> {
        if zero.is_empty() || basis.is_empty() {
            return basis.to_vec();
        }
        let restricted = ExactMatrix::from_fn(&self.comp, zero.len(), basis.len(), |i, j| basis[j][zero[i]].clone());
        let ker = self.kernel(&restricted);
        let bm = ExactMatrix::from_columns(&self.comp, dim, basis);
        let vs: Vec<Vector> = ker.iter().map(|x| bm.mul_vec(x)).collect();
        self.span(dim, &vs)
    }

    /// Basis of `span(a) + span(b)`.
    pub fn sum(&self, dim: usize, a: &[Vector], b: &[Vector]) -> Vec<Vector> {
        let mut all = a.to_vec();
        all.extend_from_slice(b);
        self.span(dim, &all)
    }

    /// Basis of the image `m·span(basis)`.
    pub fn image(&self, m: &ExactMatrix, basis: &[Vector]) -> Vec<Vector> {
        let vs: Vec<Vector> = basis.iter().map(|v| m.mul_vec(v)).collect();
        self.span(m.rows(), &vs)
    }

    /// Basis of the full module `R^dim`.
    pub fn full(&self, dim: usize) -> Vec<Vector> {
        (0..dim)
            .map(|i| {
                let mut v = self.zero_vec(dim);
                v[i] = self.comp.one();
                v
            })
            .collect()
    }

    /// Invariants of `R^dim / span(sub)`.
    pub fn cokernel(&self, dim: usize, sub: &[Vector]) -> Result<ModuleInvariants> {
        Ok(self.quotient(dim, &self.full(dim), sub)?.invariants)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(r: &Ring, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| r.from_int(x)).collect()
    }

    #[test]
    fn span_and_quotient_over_z() {
        let lin = Lin::new(&Ring::Integers).unwrap();
        let r = Ring::Integers;
        let s = lin.span(2, &[iv(&r, &[2, 0]), iv(&r, &[0, 3]), iv(&r, &[4, 6])]);
        assert_eq!(s.len(), 2);
        let q = lin.quotient(2, &lin.full(2), &s).unwrap();
        assert_eq!(q.invariants.torsion_factors, vec![r.from_int(6)]);
        assert!(lin.contains(2, &s, &iv(&r, &[2, 3])));
        assert!(!lin.contains(2, &s, &iv(&r, &[1, 0])));
    }

    #[test]
    fn modular_lattices() {
        let r = Ring::IntegersMod(4);
        let lin = Lin::new(&r).unwrap();
        let a = ExactMatrix::from_i64(&Ring::Integers, &[vec![2]]);
        let k = lin.kernel(&a);
        assert!(lin.contains(1, &k, &iv(&Ring::Integers, &[2])));
        assert!(!lin.contains(1, &k, &iv(&Ring::Integers, &[1])));
        let q = lin.quotient(1, &lin.full(1), &[iv(&Ring::Integers, &[2])]).unwrap();
        assert_eq!(q.invariants.torsion_factors, vec![r.from_int(2)]);
        let q = lin.quotient(1, &lin.full(1), &[]).unwrap();
        assert_eq!(q.invariants.free_rank, 1);
    }

    #[test]
    fn preimage_and_intersection() {
        let r = Ring::Integers;
        let lin = Lin::new(&r).unwrap();
        let a = ExactMatrix::from_i64(&r, &[vec![1, 1]]);
        let p = lin.preimage(&a, &[iv(&r, &[3])]);
        assert!(lin.contains(2, &p, &iv(&r, &[3, 0])));
        assert!(lin.contains(2, &p, &iv(&r, &[1, -1])));
        assert!(!lin.contains(2, &p, &iv(&r, &[1, 0])));
        let i = lin.intersect_coordinates(2, &p, &[1]);
        assert!(lin.same_span(2, &i, &[iv(&r, &[3, 0])]));
    }
}
