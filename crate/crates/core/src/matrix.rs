//! Dense exact matrices, Smith normal form, kernels and cokernels.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory;
use crate::ring::{Elem, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl ExactMatrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        ExactMatrix { ring: ring.clone(), rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn from_fn(ring: &Ring, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(ring.normalize(f(i, j)));
            }
        }
        ExactMatrix { ring: ring.clone(), rows, cols, data }
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self::from_fn(ring, r, c, |i, j| rows[i][j].clone()))
    }

    pub fn from_i64(ring: &Ring, rows: &[Vec<i64>]) -> Self {
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(ring, rows.len(), c, |i, j| ring.from_int(rows[i][j]))
    }

    /// Parse a row-major grid of canonical strings.
    pub fn from_strings(ring: &Ring, rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(ring, parsed)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.ring.format(self.get(i, j))).collect())
            .collect()
    }

    /// A matrix whose columns are the given vectors.
    pub fn from_columns(ring: &Ring, rows: usize, cols: &[Vec<Elem>]) -> Self {
        Self::from_fn(ring, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = self.ring.normalize(v);
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = &self.ring;
        Ok(Self::from_fn(r, self.rows, other.cols, |i, j| {
            let mut acc = r.zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if r.is_zero(a) {
                    continue;
                }
                acc = r.add(&acc, &r.mul(a, other.get(k, j)));
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        let r = &self.ring;
        (0..self.rows)
            .map(|i| {
                let mut acc = r.zero();
                for (k, x) in v.iter().enumerate() {
                    if !r.is_zero(x) {
                        acc = r.add(&acc, &r.mul(self.get(i, k), x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        Self::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(&self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.ring.is_zero(x))
    }

    /// Relabel the descriptor without touching the stored values.
    pub(crate) fn with_ring(&self, ring: &Ring) -> ExactMatrix {
        ExactMatrix { ring: ring.clone(), rows: self.rows, cols: self.cols, data: self.data.clone() }
    }

    /// Exact determinant by fraction-free elimination (square matrices over ℤ).
    pub fn determinant_int(&self) -> Option<BigInt> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| self.ring.lift_int(self.get(i, j))).collect::<Option<_>>()).collect::<Option<_>>()?;
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let sw = (k + 1..n).find(|&i| !a[i][k].is_zero())?;
                a.swap(k, sw);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Some(if n == 0 { BigInt::one() } else { sign * &a[n - 1][n - 1] })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[t] += f · row[s]
    fn add_row(&mut self, t: usize, s: usize, f: &Elem) {
        let r = self.ring.clone();
        for j in 0..self.cols {
            let x = self.data[s * self.cols + j].clone();
            if r.is_zero(&x) {
                continue;
            }
            let y = r.add(&self.data[t * self.cols + j], &r.mul(f, &x));
            self.data[t * self.cols + j] = y;
        }
    }

    /// col[t] += f · col[s]
    fn add_col(&mut self, t: usize, s: usize, f: &Elem) {
        let r = self.ring.clone();
        for i in 0..self.rows {
            let x = self.data[i * self.cols + s].clone();
            if r.is_zero(&x) {
                continue;
            }
            let y = r.add(&self.data[i * self.cols + t], &r.mul(f, &x));
            self.data[i * self.cols + t] = y;
        }
    }

    fn scale_row(&mut self, i: usize, f: &Elem) {
        for j in 0..self.cols {
            let y = self.ring.mul(&self.data[i * self.cols + j], f);
            self.data[i * self.cols + j] = y;
        }
    }

    fn scale_col(&mut self, j: usize, f: &Elem) {
        for i in 0..self.rows {
            let y = self.ring.mul(&self.data[i * self.cols + j], f);
            self.data[i * self.cols + j] = y;
        }
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_strings() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Finitely generated module over the coefficient ring: `R^free_rank ⊕ ⊕ R/(d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleInvariants {
    pub ring: Ring,
    pub free_rank: usize,
    /// Nonunit, nonzero canonical generators in a divisibility chain.
    pub torsion_factors: Vec<Elem>,
}

impl ModuleInvariants {
    pub fn zero(ring: &Ring) -> Self {
        ModuleInvariants { ring: ring.clone(), free_rank: 0, torsion_factors: Vec::new() }
    }

    pub fn free(ring: &Ring, rank: usize) -> Self {
        ModuleInvariants { ring: ring.clone(), free_rank: rank, torsion_factors: Vec::new() }
    }

    /// The cyclic module `R/(a)`.
    pub fn cyclic(ring: &Ring, a: &Elem) -> Self {
        let c = ring.associate_canonical(a);
        if ring.is_zero(&c) {
            Self::free(ring, 1)
        } else if ring.is_unit(&c) {
            Self::zero(ring)
        } else {
            ModuleInvariants { ring: ring.clone(), free_rank: 0, torsion_factors: vec![c] }
        }
    }

    /// Build from a list of diagonal entries (any order, units and zeros allowed).
    pub fn from_diagonal(ring: &Ring, diag: &[Elem]) -> Self {
        let mut free = 0;
        let mut factors: Vec<BigInt> = Vec::new();
        let mut local: Vec<u32> = Vec::new();
        let mut fields = 0;
        for d in diag {
            let c = ring.associate_canonical(d);
            if ring.is_zero(&c) {
                free += 1;
            } else if !ring.is_unit(&c) {
                match ring {
                    Ring::PLocal(p) => local.push(ring.valuation(&c, *p).unwrap()),
                    Ring::Integers | Ring::IntegersMod(_) => factors.push(ring.lift_int(&c).unwrap()),
                    _ => fields += 1,
                }
            }
        }
        debug_assert_eq!(fields, 0);
        let torsion = match ring {
            Ring::PLocal(p) => {
                local.sort();
                local.iter().map(|&v| ring.from_bigint(&BigInt::from(*p).pow(v))).collect()
            }
            _ => invariant_chain(factors).into_iter().map(|x| ring.from_bigint(&x)).collect(),
        };
        ModuleInvariants { ring: ring.clone(), free_rank: free, torsion_factors: torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion_factors.is_empty()
    }

    /// Whether the module has no free part (finite length over ℤ/ℤ_(p)).
    pub fn is_torsion(&self) -> bool {
        self.free_rank == 0
    }

    /// Elementary divisors `(p, k)` for each cyclic summand `R/p^k` of the torsion part.
    /// Over ℤ/n the free summands are counted too, as ℤ/n is itself finite.
    pub fn elementary_divisors(&self) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut push_int = |d: &BigInt| {
            let d: u64 = d.try_into().expect("torsion factor fits in u64");
            for (p, e) in numtheory::factorize(d) {
                out.push((p, e));
            }
        };
        match &self.ring {
            Ring::PLocal(p) => {
                for t in &self.torsion_factors {
                    out.push((*p, self.ring.valuation(t, *p).unwrap()));
                }
            }
            Ring::Integers => {
                for t in &self.torsion_factors {
                    push_int(t.as_int());
                }
            }
            Ring::IntegersMod(n) => {
                for t in &self.torsion_factors {
                    push_int(t.as_int());
                }
                for _ in 0..self.free_rank {
                    push_int(&BigInt::from(*n));
                }
            }
            _ => {}
        }
        out.sort();
        out
    }

    /// Length of the `p`-primary part.
    pub fn p_length(&self, p: u64) -> u32 {
        self.elementary_divisors().iter().filter(|(q, _)| *q == p).map(|(_, k)| k).sum()
    }

    /// Short human-readable form such as `Z^2 + Z/2 + Z/6`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        let name = self.ring.to_string();
        match self.free_rank {
            0 => {}
            1 => parts.push(name.clone()),
            k => parts.push(format!("{name}^{k}")),
        }
        for t in &self.torsion_factors {
            let s = self.ring.format(t);
            match &self.ring {
                Ring::Integers | Ring::IntegersMod(_) | Ring::PLocal(_) => parts.push(format!("Z/{s}")),
                _ => parts.push(format!("{name}/({s})")),
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn to_json(&self) -> ModuleInvariantsJson {
        ModuleInvariantsJson {
            free_rank: self.free_rank,
            torsion: self.torsion_factors.iter().map(|t| self.ring.format(t)).collect(),
            text: self.describe(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleInvariantsJson {
    pub free_rank: usize,
    pub torsion: Vec<String>,
    pub text: String,
}

/// Turn a multiset of nonzero integers into the invariant-factor chain of
/// `⊕ ℤ/d`, dropping units.
fn invariant_chain(factors: Vec<BigInt>) -> Vec<BigInt> {
    let mut by_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
    for d in factors {
        let d: u64 = d.abs().try_into().expect("torsion factor fits in u64");
        for (p, e) in numtheory::factorize(d) {
            by_prime.entry(p).or_default().push(e);
        }
    }
    let len = by_prime.values().map(|v| v.len()).max().unwrap_or(0);
    let mut chain = vec![BigInt::one(); len];
    for (p, mut es) in by_prime {
        es.sort_unstable_by(|a, b| b.cmp(a));
        for (k, e) in es.into_iter().enumerate() {
            let idx = len - 1 - k;
            chain[idx] *= BigInt::from(p).pow(e);
        }
    }
    chain
}

pub(crate) struct SnfData {
    pub u: ExactMatrix,
    pub uinv: Option<ExactMatrix>,
    pub d: ExactMatrix,
    pub v: ExactMatrix,
    pub rank: usize,
}

fn pivot_size(ring: &Ring, a: &Elem) -> BigInt {
    match ring {
        Ring::Integers => a.as_int().abs(),
        Ring::PLocal(p) => BigInt::from(ring.valuation(a, *p).unwrap()),
        _ => BigInt::zero(),
    }
}

/// Division with remainder in a Euclidean sense; for ℤ_(p) and fields the
/// remainder is zero exactly when `b | a`.
fn div_rem(ring: &Ring, a: &Elem, b: &Elem) -> (Elem, Elem) {
    match ring {
        Ring::Integers => {
            let (q, r) = a.as_int().div_mod_floor(b.as_int());
            (Elem::Int(q), Elem::Int(r))
        }
        _ => match ring.div_exact(a, b) {
            Some(q) => (q, ring.zero()),
            None => (ring.zero(), a.clone()),
        },
    }
}

/// `q` with `x − q·piv` the canonical residue of `x` modulo the canonical generator `piv`.
fn reduction_quotient(ring: &Ring, x: &Elem, piv: &Elem) -> Elem {
    match (ring, x) {
        (Ring::Integers, _) => Elem::Int(x.as_int().div_floor(piv.as_int())),
        (Ring::PLocal(_), Elem::Rat(v)) => {
            let m = piv.as_rat().numer().clone();
            let inv = crate::ring::modinv(&v.denom().mod_floor(&m), &m).unwrap_or_else(BigInt::zero);
            let r = (v.numer() * inv).mod_floor(&m);
            let rem = ring.from_bigint(&r);
            ring.div_exact(&ring.sub(x, &rem), piv).expect("residue differs by a multiple")
        }
        _ => ring.div_exact(x, piv).expect("field pivot"),
    }
}

/// Row-reduced echelon basis of the span of `rows` over ℤ, ℤ_(p) or a field.
pub(crate) fn echelon_basis(ring: &Ring, dim: usize, rows: Vec<Vec<Elem>>) -> Vec<Vec<Elem>> {
    let mut rows: Vec<Vec<Elem>> = rows.into_iter().filter(|r| r.iter().any(|x| !ring.is_zero(x))).collect();
    let sub_mul = |rows: &mut Vec<Vec<Elem>>, t: usize, s: usize, q: &Elem| {
        let src = rows[s].clone();
        for (y, x) in rows[t].iter_mut().zip(&src) {
            if !ring.is_zero(x) {
                *y = ring.sub(y, &ring.mul(q, x));
            }
        }
    };
    let mut p = 0;
    for c in 0..dim {
        if p == rows.len() {
            break;
        }
        loop {
            let best = (p..rows.len()).filter(|&i| !ring.is_zero(&rows[i][c])).min_by_key(|&i| pivot_size(ring, &rows[i][c]));
            let Some(b) = best else { break };
            rows.swap(p, b);
            let piv = rows[p][c].clone();
            let mut done = true;
            for i in p + 1..rows.len() {
                if ring.is_zero(&rows[i][c]) {
                    continue;
                }
                let (q, rem) = div_rem(ring, &rows[i][c], &piv);
                if !ring.is_zero(&q) {
                    sub_mul(&mut rows, i, p, &q);
                }
                if !ring.is_zero(&rem) {
                    done = false;
                }
            }
            if !done {
                continue;
            }
            let (canon, unit) = ring.to_canonical(&piv);
            if !ring.is_one(&unit) {
                for x in rows[p].iter_mut() {
                    *x = ring.mul(x, &unit);
                }
            }
            for i in 0..p {
                if ring.is_zero(&rows[i][c]) {
                    continue;
                }
                let q = reduction_quotient(ring, &rows[i][c], &canon);
                if !ring.is_zero(&q) {
                    sub_mul(&mut rows, i, p, &q);
                }
            }
            p += 1;
            break;
        }
    }
    rows.truncate(p);
    rows
}

/// Smith normal form over ℤ, ℤ_(p) or a field (`GF(p)`, ℚ).
pub(crate) fn snf_pid(m: &ExactMatrix, want_uinv: bool) -> SnfData {
    let ring = m.ring.clone();
    debug_assert!(matches!(ring, Ring::Integers | Ring::PLocal(_) | Ring::Rationals | Ring::PrimeField(_)));
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = ExactMatrix::identity(&ring, r);
    let mut uinv = want_uinv.then(|| ExactMatrix::identity(&ring, r));
    let mut v = ExactMatrix::identity(&ring, c);
    let mut rank = 0;
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(BigInt, usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = d.get(i, j);
                    if ring.is_zero(x) {
                        continue;
                    }
                    let s = pivot_size(&ring, x);
                    if best.as_ref().is_none_or(|(bs, _, _)| s < *bs) {
                        let done = s.is_zero();
                        best = Some((s, i, j));
                        if done {
                            break;
                        }
                    }
                }
                if best.as_ref().is_some_and(|(s, _, _)| s.is_zero()) {
                    break;
                }
            }
            let Some((_, pi, pj)) = best else {
                return finish(ring, u, uinv, d, v, rank);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            if let Some(ui) = uinv.as_mut() {
                ui.swap_cols(t, pi);
            }
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let piv = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..r {
                let x = d.get(i, t).clone();
                if ring.is_zero(&x) {
                    continue;
                }
                let (q, rem) = div_rem(&ring, &x, &piv);
                if !ring.is_zero(&q) {
                    let nq = ring.neg(&q);
                    d.add_row(i, t, &nq);
                    u.add_row(i, t, &nq);
                    if let Some(ui) = uinv.as_mut() {
                        ui.add_col(t, i, &q);
                    }
                }
                if !ring.is_zero(&rem) {
                    clean = false;
                }
            }
            for j in t + 1..c {
                let x = d.get(t, j).clone();
                if ring.is_zero(&x) {
                    continue;
                }
                let (q, rem) = div_rem(&ring, &x, &piv);
                if !ring.is_zero(&q) {
                    let nq = ring.neg(&q);
                    d.add_col(j, t, &nq);
                    v.add_col(j, t, &nq);
                }
                if !ring.is_zero(&rem) {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let mut bad = None;
            'scan: for i in t + 1..r {
                for j in t + 1..c {
                    if !ring.divides(&piv, d.get(i, j)) {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            if let Some(i) = bad {
                let one = ring.one();
                d.add_row(t, i, &one);
                u.add_row(t, i, &one);
                if let Some(ui) = uinv.as_mut() {
                    ui.add_col(i, t, &ring.neg(&one));
                }
                continue;
            }
            break;
        }
        let (canon, unit) = ring.to_canonical(d.get(t, t));
        if !ring.is_one(&unit) {
            d.set(t, t, canon);
            u.scale_row(t, &unit);
            if let Some(ui) = uinv.as_mut() {
                ui.scale_col(t, &ring.inverse(&unit).unwrap());
            }
        }
        rank = t + 1;
    }
    finish(ring, u, uinv, d, v, rank)
}

fn finish(_ring: Ring, u: ExactMatrix, uinv: Option<ExactMatrix>, d: ExactMatrix, v: ExactMatrix, rank: usize) -> SnfData {
    SnfData { u, uinv, d, v, rank }
}

fn require_la(ring: &Ring, op: &'static str) -> Result<()> {
    if ring.supports_linear_algebra() {
        Ok(())
    } else {
        Err(Error::UnsupportedRing { ring: ring.to_string(), op })
    }
}

/// Smith normal form: returns `(U, D, V)` with `U·m·V = D`.
///
/// Over ℤ/n the computation runs on an integer lift and is reduced at the end.
pub fn smith_normal_form(m: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix, ExactMatrix)> {
    require_la(&m.ring, "smith_normal_form")?;
    match &m.ring {
        Ring::IntegersMod(_) => {
            let ring = m.ring.clone();
            let s = snf_pid(&m.with_ring(&Ring::Integers), false);
            let reduce = |x: &ExactMatrix| ExactMatrix::from_fn(&ring, x.rows, x.cols, |i, j| ring.from_bigint(x.get(i, j).as_int()));
            let mut u = reduce(&s.u);
            let mut d = reduce(&s.d);
            let v = reduce(&s.v);
            for t in 0..d.rows.min(d.cols) {
                let (canon, unit) = ring.to_canonical(d.get(t, t));
                d.set(t, t, canon);
                u.scale_row(t, &unit);
            }
            Ok((u, d, v))
        }
        _ => {
            let s = snf_pid(m, false);
            Ok((s.u, s.d, s.v))
        }
    }
}

/// Invariants of `coker(m: R^cols → R^rows)`.
pub fn cokernel_invariants(m: &ExactMatrix) -> Result<ModuleInvariants> {
    require_la(&m.ring, "cokernel_invariants")?;
    match &m.ring {
        Ring::IntegersMod(n) => {
            let n = BigInt::from(*n);
            let lift = m.with_ring(&Ring::Integers);
            let nid = ExactMatrix::from_fn(&Ring::Integers, m.rows, m.rows, |i, j| {
                Elem::Int(if i == j { n.clone() } else { BigInt::zero() })
            });
            let s = snf_pid(&lift.hstack(&nid), false);
            let diag: Vec<Elem> = (0..m.rows)
                .map(|t| {
                    let d = s.d.get(t, t).as_int().clone();
                    Elem::Int(if d == n { BigInt::zero() } else { d })
                })
                .collect();
            Ok(ModuleInvariants::from_diagonal(&m.ring, &diag))
        }
        _ => {
            let s = snf_pid(m, false);
            let mut diag: Vec<Elem> = (0..s.rank).map(|t| s.d.get(t, t).clone()).collect();
            diag.extend(std::iter::repeat_n(m.ring.zero(), m.rows - s.rank));
            Ok(ModuleInvariants::from_diagonal(&m.ring, &diag))
        }
    }
}

/// Generators of `{v : m·v = 0}`; a basis over ℤ, ℤ_(p) and fields.
pub fn kernel_basis(m: &ExactMatrix) -> Result<Vec<Vec<Elem>>> {
    require_la(&m.ring, "kernel_basis")?;
    match &m.ring {
        Ring::IntegersMod(n) => {
            let ring = m.ring.clone();
            let n = BigInt::from(*n);
            let lift = m.with_ring(&Ring::Integers);
            let nid = ExactMatrix::from_fn(&Ring::Integers, m.rows, m.rows, |i, j| {
                Elem::Int(if i == j { n.clone() } else { BigInt::zero() })
            });
            let s = snf_pid(&lift.hstack(&nid), false);
            let mut out: Vec<Vec<Elem>> = Vec::new();
            for j in s.rank..s.v.cols {
                let v: Vec<Elem> = (0..m.cols).map(|i| ring.from_bigint(s.v.get(i, j).as_int())).collect();
                if v.iter().any(|x| !ring.is_zero(x)) && !out.contains(&v) {
                    out.push(v);
                }
            }
            Ok(out)
        }
        _ => {
            let s = snf_pid(m, false);
            Ok((s.rank..m.cols).map(|j| s.v.column(j)).collect())
        }
    }
}

/// Rank over a field or domain (for ℤ/n, the rank of the integer lift).
pub fn rank(m: &ExactMatrix) -> Result<usize> {
    require_la(&m.ring, "rank")?;
    let ring = match &m.ring {
        Ring::IntegersMod(_) => Ring::Integers,
        r => r.clone(),
    };
    Ok(snf_pid(&m.with_ring(&ring), false).rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_i64(&Ring::Integers, rows)
    }

    #[test]
    fn snf_examples() {
        let (u, d, v) = smith_normal_form(&z(&[vec![2, 4], vec![6, 8]])).unwrap();
        assert_eq!(d, z(&[vec![2, 0], vec![0, 4]]));
        assert_eq!(u.mul(&z(&[vec![2, 4], vec![6, 8]])).unwrap().mul(&v).unwrap(), d);
        let (u, d, v) = smith_normal_form(&ExactMatrix::identity(&Ring::Integers, 2)).unwrap();
        assert_eq!((u.clone(), v.clone()), (ExactMatrix::identity(&Ring::Integers, 2), ExactMatrix::identity(&Ring::Integers, 2)));
        assert_eq!(d, ExactMatrix::identity(&Ring::Integers, 2));
        let (u, d, v) = smith_normal_form(&ExactMatrix::zeros(&Ring::Integers, 2, 3)).unwrap();
        assert!(d.is_zero());
        assert_eq!(u, ExactMatrix::identity(&Ring::Integers, 2));
        assert_eq!(v, ExactMatrix::identity(&Ring::Integers, 3));
    }

    #[test]
    fn cokernels() {
        let c = cokernel_invariants(&z(&[vec![2]])).unwrap();
        assert_eq!((c.free_rank, c.torsion_factors.clone()), (0, vec![Ring::Integers.from_int(2)]));
        let c = cokernel_invariants(&ExactMatrix::zeros(&Ring::Integers, 1, 0)).unwrap();
        assert_eq!((c.free_rank, c.torsion_factors.len()), (1, 0));
        let c = cokernel_invariants(&z(&[vec![2, 0], vec![0, 3]])).unwrap();
        assert_eq!(c.torsion_factors, vec![Ring::Integers.from_int(6)]);
    }

    #[test]
    fn kernels() {
        let gf2 = Ring::PrimeField(2);
        let k = kernel_basis(&ExactMatrix::from_i64(&gf2, &[vec![1, 1]])).unwrap();
        assert_eq!(k, vec![vec![gf2.one(), gf2.one()]]);
        assert!(kernel_basis(&z(&[vec![2]])).unwrap().is_empty());
        let z4 = Ring::IntegersMod(4);
        let k = kernel_basis(&ExactMatrix::from_i64(&z4, &[vec![2]])).unwrap();
        assert_eq!(k, vec![vec![z4.from_int(2)]]);
    }

    #[test]
    fn modular_cokernel() {
        let z4 = Ring::IntegersMod(4);
        let c = cokernel_invariants(&ExactMatrix::from_i64(&z4, &[vec![2]])).unwrap();
        assert_eq!(c.torsion_factors, vec![z4.from_int(2)]);
        let c = cokernel_invariants(&ExactMatrix::zeros(&z4, 1, 0)).unwrap();
        assert_eq!(c.free_rank, 1);
    }

    #[test]
    fn local_snf_normalizes_to_prime_powers() {
        let r = Ring::PLocal(3);
        let m = ExactMatrix::from_i64(&r, &[vec![6, 5], vec![9, 15]]);
        let (u, d, v) = smith_normal_form(&m).unwrap();
        assert_eq!(u.mul(&m).unwrap().mul(&v).unwrap(), d);
        assert_eq!(d.get(0, 0), &r.one());
        assert_eq!(d.get(1, 1), &r.from_int(9));
    }

    #[test]
    fn ipoly_rejected() {
        let m = ExactMatrix::zeros(&Ring::IntPoly, 1, 1);
        assert!(smith_normal_form(&m).is_err());
    }
}
