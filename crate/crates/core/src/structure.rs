//! Primitive idempotents of commutative algebras, block idempotents of
//! `Z(KG)`, and Wedderburn component degrees in the semisimple case.

use rand::Rng;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::algebra::{convolve, AlgElem, AlgebraError, ClassAlgebra, GroupAlgebra};
use crate::gfq::{poly_factor, FieldError, FqElem, FqField, KrylovBasis, MatFq, Poly};

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("basis elements do not commute")]
    NotCommutative,
    #[error("span is not a unital subalgebra")]
    NotClosed,
    #[error("characteristic {p} divides the group order {order}")]
    NotSemisimple { p: u64, order: usize },
    #[error("component is not split: {0}")]
    NotSplit(String),
    #[error("decomposition invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A commutative algebra presented by coordinate vectors and a distinguished
/// spanning set used to drive the splitting.
trait Commutative {
    fn field(&self) -> &FqField;
    fn generators(&self) -> usize;
    fn generator(&self, i: usize) -> Vec<FqElem>;
    fn one(&self) -> Vec<FqElem>;
    fn mul_generator(&self, v: &[FqElem], i: usize) -> Vec<FqElem>;
    fn mul(&self, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem>;
}

impl Commutative for ClassAlgebra {
    fn field(&self) -> &FqField {
        self.algebra().field()
    }
    fn generators(&self) -> usize {
        self.dim()
    }
    fn generator(&self, i: usize) -> Vec<FqElem> {
        let mut v = vec![FqElem::ZERO; self.dim()];
        v[i] = self.field().one();
        v
    }
    fn one(&self) -> Vec<FqElem> {
        ClassAlgebra::one(self)
    }
    fn mul_generator(&self, v: &[FqElem], i: usize) -> Vec<FqElem> {
        self.mul_class(v, i)
    }
    fn mul(&self, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
        ClassAlgebra::mul(self, a, b)
    }
}

/// The span of commuting group-algebra elements, in group coordinates.
struct Span<'a> {
    alg: &'a GroupAlgebra,
    basis: &'a [AlgElem],
}

impl Commutative for Span<'_> {
    fn field(&self) -> &FqField {
        self.alg.field()
    }
    fn generators(&self) -> usize {
        self.basis.len()
    }
    fn generator(&self, i: usize) -> Vec<FqElem> {
        self.basis[i].coeffs().to_vec()
    }
    fn one(&self) -> Vec<FqElem> {
        self.alg.one().coeffs().to_vec()
    }
    fn mul_generator(&self, v: &[FqElem], i: usize) -> Vec<FqElem> {
        convolve(self.alg.group(), self.alg.field(), v, self.basis[i].coeffs())
    }
    fn mul(&self, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
        convolve(self.alg.group(), self.alg.field(), a, b)
    }
}

/// Outcome of examining one element `f z` of `fZ`.
enum Probe {
    Split(Vec<Vec<FqElem>>),
    /// Minimal polynomial is a power of one irreducible of this degree.
    PrimePower(usize),
}

/// Splits the idempotent `f` using the minimal polynomial of `f z` in `fZ`,
/// where `apply` multiplies by `z`. The Krylov sequence starts at `f`, the
/// unit of `fZ`, so its powers double as evaluation points for the
/// interpolants.
fn probe<R: Rng + ?Sized>(
    field: &FqField,
    f: &[FqElem],
    apply: impl Fn(&[FqElem]) -> Vec<FqElem>,
    rng: &mut R,
) -> Probe {
    let mut krylov = KrylovBasis::new();
    let mut powers: Vec<Vec<FqElem>> = Vec::new();
    let mut cur = f.to_vec();
    let min_poly = loop {
        if let Some(rel) = krylov.push(&cur, field) {
            break Poly::new(rel);
        }
        let next = apply(&cur);
        powers.push(cur);
        cur = next;
    };
    if min_poly.degree().unwrap_or(0) <= 1 {
        return Probe::PrimePower(1);
    }
    let fac = poly_factor(&min_poly, field, rng);
    if fac.factors.len() == 1 {
        return Probe::PrimePower(fac.factors[0].0.degree().unwrap_or(1));
    }
    let parts = fac
        .factors
        .iter()
        .map(|(q, m)| {
            let mut qm = Poly::one(field);
            for _ in 0..*m {
                qm = qm.mul(q, field);
            }
            let rest = min_poly.div_exact(&qm, field);
            let (g, s, _) = rest.ext_gcd(&qm, field);
            debug_assert!(g.is_one(field));
            let h = s.mul(&rest, field).rem(&min_poly, field);
            let mut v = vec![FqElem::ZERO; f.len()];
            for (j, &c) in h.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (x, &w) in v.iter_mut().zip(&powers[j]) {
                    *x = field.add(*x, field.mul(c, w));
                }
            }
            v
        })
        .collect();
    Probe::Split(parts)
}

fn split_all<A: Commutative, R: Rng + ?Sized>(a: &A, rng: &mut R) -> Result<Vec<Vec<FqElem>>, StructureError> {
    let field = a.field().clone();
    let mut done = Vec::new();
    let mut work = vec![(a.one(), 0usize)];
    let mut splits = 0usize;
    while let Some((f, start)) = work.pop() {
        let mut outcome = None;
        let mut nonsplit_residue = false;
        for i in start..a.generators() {
            match probe(&field, &f, |v| a.mul_generator(v, i), rng) {
                Probe::Split(parts) => {
                    outcome = Some((parts, i));
                    break;
                }
                Probe::PrimePower(d) => nonsplit_residue |= d > 1,
            }
        }
        // Over a splitting field every residue field of fZ is K, and then a
        // single generator always separates two local factors. Otherwise fall
        // back to pair products and pair sums.
        if outcome.is_none() && nonsplit_residue {
            let n = a.generators();
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            for (i, j) in pairs.clone() {
                let z = a.mul(&a.generator(i), &a.generator(j));
                if let Probe::Split(parts) = probe(&field, &f, |v| a.mul(v, &z), rng) {
                    outcome = Some((parts, 0));
                    break;
                }
            }
            if outcome.is_none() {
                for (i, j) in pairs {
                    let z: Vec<FqElem> = a
                        .generator(i)
                        .iter()
                        .zip(a.generator(j))
                        .map(|(&x, y)| field.add(x, y))
                        .collect();
                    if let Probe::Split(parts) = probe(&field, &f, |v| a.mul(v, &z), rng) {
                        outcome = Some((parts, 0));
                        break;
                    }
                }
            }
        }
        match outcome {
            Some((parts, i)) => {
                splits += parts.len() - 1;
                for part in parts.into_iter().rev() {
                    work.push((part, i));
                }
            }
            None => done.push(f),
        }
    }
    // orthogonal nonzero idempotents are independent, so at most dim(Z) - 1 splits
    if splits + 1 != done.len() || done.len() > a.generators() {
        return Err(StructureError::Invariant("too many splits".into()));
    }
    Ok(done)
}

/// Pairwise orthogonal primitive idempotents summing to 1 in the
/// commutative unital subalgebra spanned by `basis`.
pub fn primitive_idempotents_commutative<R: Rng + ?Sized>(
    alg: &GroupAlgebra,
    basis: &[AlgElem],
    rng: &mut R,
) -> Result<Vec<AlgElem>, StructureError> {
    let f = alg.field();
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            if a.mul(b)? != b.mul(a)? {
                return Err(StructureError::NotCommutative);
            }
        }
    }
    let rows = |extra: &[Vec<FqElem>]| -> usize {
        let mut r: Vec<Vec<FqElem>> = basis.iter().map(|b| b.coeffs().to_vec()).collect();
        r.extend(extra.iter().cloned());
        if r.is_empty() {
            0
        } else {
            MatFq::from_rows(r).rank(f)
        }
    };
    let base_rank = rows(&[]);
    let mut extra = vec![alg.one().coeffs().to_vec()];
    for a in basis {
        for b in basis {
            extra.push(a.mul(b)?.coeffs().to_vec());
        }
    }
    if rows(&extra) != base_rank {
        return Err(StructureError::NotClosed);
    }
    let span = Span { alg, basis };
    let mut out: Vec<AlgElem> = split_all(&span, rng)?
        .into_iter()
        .map(|v| alg.element(v))
        .collect::<Result<_, _>>()?;
    out.sort_by_cached_key(|e| e.coeffs().iter().map(|&c| f.index_of(c)).collect::<Vec<_>>());
    Ok(out)
}

/// Block idempotents of `KG` with their traces, dimensions and full-defect
/// flags. Blocks are ordered with the principal block first, then by
/// dimension and coefficient vector.
#[derive(Clone, Debug)]
pub struct BlockData {
    pub idempotents: Vec<AlgElem>,
    /// Traces as prime-field residues.
    pub traces: Vec<u32>,
    pub dims: Vec<usize>,
    pub full_defect: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSummary {
    pub traces: Vec<u32>,
    pub dims: Vec<usize>,
    pub full_defect: Vec<bool>,
}

impl BlockData {
    pub fn count(&self) -> usize {
        self.idempotents.len()
    }

    pub fn summary(&self) -> BlockSummary {
        BlockSummary {
            traces: self.traces.clone(),
            dims: self.dims.clone(),
            full_defect: self.full_defect.clone(),
        }
    }

    pub fn idempotents_json(&self) -> Vec<Value> {
        self.idempotents
            .iter()
            .map(|e| e.algebra().to_json(e))
            .collect()
    }
}

/// `dim_K (f KG)`, the rank of `{f g : g in G}`.
pub fn ideal_dimension(f: &AlgElem) -> usize {
    let alg = f.algebra();
    let g = alg.group();
    let n = g.order();
    let field = alg.field();
    let mut basis = KrylovBasis::new();
    let mut row = vec![FqElem::ZERO; n];
    for y in 0..n {
        // (f y)[x y] = f[x]
        for (x, &c) in f.coeffs().iter().enumerate() {
            row[g.mul(x, y)] = c;
        }
        basis.push(&row, field);
        if basis.rank() == n {
            break;
        }
    }
    basis.rank()
}

/// Reduction mod `p` of the p-integral rational `d / order`, or `None` when
/// it is not p-integral.
pub fn rational_trace_residue(d: usize, order: usize, p: u64) -> Option<u32> {
    let (mut d, mut order) = (d as u64, order as u64);
    while order % p == 0 {
        if d % p != 0 {
            return None;
        }
        d /= p;
        order /= p;
    }
    let inv = mod_inverse(order % p, p)?;
    Some(((d % p) * inv % p) as u32)
}

fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    (1..p).find(|&x| a * x % p == 1)
}

pub fn block_idempotents<R: Rng + ?Sized>(alg: &GroupAlgebra, rng: &mut R) -> Result<BlockData, StructureError> {
    let z = ClassAlgebra::new(alg);
    let field = alg.field();
    let vecs = split_all(&z, rng)?;
    // orthogonality via partial sums: s_{k-1} f_k = 0 for every k
    let mut partial = vec![FqElem::ZERO; z.dim()];
    for v in &vecs {
        if z.mul(v, v) != *v {
            return Err(StructureError::Invariant("block idempotent is not idempotent".into()));
        }
        if z.mul(&partial, v).iter().any(|c| !c.is_zero()) {
            return Err(StructureError::Invariant("block idempotents not orthogonal".into()));
        }
        for (s, &c) in partial.iter_mut().zip(v) {
            *s = field.add(*s, c);
        }
    }
    if partial != z.one() {
        return Err(StructureError::Invariant("block idempotents do not sum to 1".into()));
    }

    let g = alg.group();
    let p = field.p();
    let mut blocks: Vec<(AlgElem, usize, u32)> = Vec::new();
    for v in &vecs {
        let e = z.to_element(v);
        if !alg.is_central(&e) {
            return Err(StructureError::Invariant("block idempotent not central".into()));
        }
        let trace = field
            .prime_residue(e.trace())
            .ok_or_else(|| StructureError::Invariant("block trace outside the prime field".into()))?;
        let dim = ideal_dimension(&e);
        match rational_trace_residue(dim, g.order(), p) {
            Some(r) if r == trace => {}
            _ => {
                return Err(StructureError::Invariant(format!(
                    "trace {trace} does not match {dim}/{} mod {p}",
                    g.order()
                )))
            }
        }
        blocks.push((e, dim, trace));
    }
    if blocks.iter().map(|b| b.1).sum::<usize>() != g.order() {
        return Err(StructureError::Invariant("block dimensions do not sum to |G|".into()));
    }
    let augmentation = |e: &AlgElem| {
        e.coeffs()
            .iter()
            .fold(FqElem::ZERO, |acc, &c| field.add(acc, c))
    };
    blocks.sort_by_cached_key(|(e, dim, _)| {
        (
            !field.is_one(augmentation(e)),
            *dim,
            e.coeffs().iter().map(|&c| field.index_of(c)).collect::<Vec<_>>(),
        )
    });
    Ok(BlockData {
        traces: blocks.iter().map(|b| b.2).collect(),
        dims: blocks.iter().map(|b| b.1).collect(),
        full_defect: blocks.iter().map(|b| b.2 != 0).collect(),
        idempotents: blocks.into_iter().map(|b| b.0).collect(),
    })
}

/// Wedderburn data of a semisimple split group algebra.
#[derive(Clone, Debug)]
pub struct WedderburnData {
    /// Sorted degrees `n_1 <= ... <= n_s`.
    pub degrees: Vec<usize>,
    pub central_idempotents: Vec<AlgElem>,
    /// `n_i^2`, aligned with `central_idempotents`.
    pub component_dims: Vec<usize>,
}

pub fn wedderburn_degrees<R: Rng + ?Sized>(alg: &GroupAlgebra, rng: &mut R) -> Result<WedderburnData, StructureError> {
    let g = alg.group();
    let p = alg.field().p();
    if (g.order() as u64).is_multiple_of(p) {
        return Err(StructureError::NotSemisimple { p, order: g.order() });
    }
    let blocks = block_idempotents(alg, rng)?;
    let z = ClassAlgebra::new(alg);
    let mut degrees = Vec::with_capacity(blocks.count());
    for (e, &dim) in blocks.idempotents.iter().zip(&blocks.dims) {
        let n = (dim as f64).sqrt().round() as usize;
        if n * n != dim {
            return Err(StructureError::NotSplit(format!("component dimension {dim} is not a square")));
        }
        let fv = z.from_element(e).expect("central");
        let rows: Vec<Vec<FqElem>> = (0..z.dim()).map(|j| z.mul_class(&fv, j)).collect();
        let center_dim = MatFq::from_rows(rows).rank(alg.field());
        if center_dim != 1 {
            return Err(StructureError::NotSplit(format!(
                "component center has dimension {center_dim}"
            )));
        }
        degrees.push(n);
    }
    if degrees.len() != g.p_regular_class_count(p) {
        return Err(StructureError::Invariant(
            "component count differs from the number of p-regular classes".into(),
        ));
    }
    if degrees.iter().map(|n| n * n).sum::<usize>() != g.order() {
        return Err(StructureError::Invariant("sum of squared degrees differs from |G|".into()));
    }
    degrees.sort_unstable();
    Ok(WedderburnData {
        degrees,
        component_dims: blocks.dims.clone(),
        central_idempotents: blocks.idempotents,
    })
}
