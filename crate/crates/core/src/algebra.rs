//! The group algebra `KG` over a finite field: dense elements indexed by
//! group-element index, convolution, trace, center and the two idempotent
//! lifts (modulo a nilpotent ideal, and through a quotient by a p'-subgroup).

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::gfq::{
    splitting_field_for, FieldError, FqElem, FqField, KrylovBasis, MatFq, Poly,
};
use crate::groups::{FiniteGroup, GroupError, GroupHom, Subgroup};

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("a^2 - a is not nilpotent")]
    NotAlmostIdempotent,
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("characteristic {p} divides the subgroup order {order}")]
    CharDividesH { p: u64, order: usize },
    #[error("expected {expected} coefficients, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("lift postcondition failed: {0}")]
    LiftCheck(&'static str),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `KG` for a group `G` and finite field `K`. Cheap to clone.
#[derive(Clone)]
pub struct GroupAlgebra {
    group: Arc<FiniteGroup>,
    field: Arc<FqField>,
}

impl fmt::Debug for GroupAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}]", self.field, self.group.label())
    }
}

impl PartialEq for GroupAlgebra {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group)
            && (Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field)
    }
}

/// An element of a [`GroupAlgebra`].
#[derive(Clone, PartialEq)]
pub struct AlgElem {
    alg: GroupAlgebra,
    coeffs: Vec<FqElem>,
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| format!("{c:?}*g{g}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl GroupAlgebra {
    pub fn new(group: Arc<FiniteGroup>, field: Arc<FqField>) -> GroupAlgebra {
        GroupAlgebra { group, field }
    }

    /// `KG` over the splitting field chosen for `(G, p)`.
    pub fn over_splitting_field(group: Arc<FiniteGroup>, p: u64) -> Result<GroupAlgebra, AlgebraError> {
        let field = splitting_field_for(&group, p)?;
        Ok(GroupAlgebra::new(group, Arc::new(field)))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    pub fn zero(&self) -> AlgElem {
        AlgElem {
            alg: self.clone(),
            coeffs: vec![FqElem::ZERO; self.dim()],
        }
    }

    pub fn one(&self) -> AlgElem {
        self.basis(self.group.identity())
    }

    /// The group element `g` as an algebra element.
    pub fn basis(&self, g: usize) -> AlgElem {
        let mut e = self.zero();
        e.coeffs[g] = self.field.one();
        e
    }

    pub fn element(&self, coeffs: Vec<FqElem>) -> Result<AlgElem, AlgebraError> {
        if coeffs.len() != self.dim() {
            return Err(AlgebraError::BadLength {
                expected: self.dim(),
                got: coeffs.len(),
            });
        }
        Ok(AlgElem {
            alg: self.clone(),
            coeffs,
        })
    }

    /// Element with prime-field coefficients given as integers.
    pub fn from_ints(&self, coeffs: &[i64]) -> Result<AlgElem, AlgebraError> {
        self.element(coeffs.iter().map(|&c| self.field.from_i64(c)).collect())
    }

    pub fn multiply(&self, a: &AlgElem, b: &AlgElem) -> Result<AlgElem, AlgebraError> {
        if a.alg != *self || b.alg != *self {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(AlgElem {
            alg: self.clone(),
            coeffs: convolve(&self.group, &self.field, &a.coeffs, &b.coeffs),
        })
    }

    pub fn class_sum(&self, class: usize) -> AlgElem {
        let mut e = self.zero();
        for &g in &self.group.classes()[class].members {
            e.coeffs[g] = self.field.one();
        }
        e
    }

    /// One sum per conjugacy class, in the group's class order.
    pub fn class_sums(&self) -> Vec<AlgElem> {
        (0..self.group.classes().len()).map(|i| self.class_sum(i)).collect()
    }

    /// `a * C` for the class sum `C`, via `(aC)[g] = sum_{h in C} a[g h^-1]`.
    pub fn mul_by_class(&self, a: &AlgElem, class: usize) -> AlgElem {
        let f = &self.field;
        let g = &self.group;
        let members = &g.classes()[class].members;
        let coeffs = (0..g.order())
            .map(|x| {
                members
                    .iter()
                    .fold(FqElem::ZERO, |acc, &h| f.add(acc, a.coeffs[g.mul(x, g.inv(h))]))
            })
            .collect();
        AlgElem {
            alg: self.clone(),
            coeffs,
        }
    }

    /// Central elements are exactly those with class-constant coefficients.
    pub fn is_central(&self, a: &AlgElem) -> bool {
        self.group.classes().iter().all(|c| {
            let first = a.coeffs[c.members[0]];
            c.members.iter().all(|&m| a.coeffs[m] == first)
        })
    }

    /// Membership in `[KG, KG]`: every class has coefficient sum zero.
    pub fn commutator_contains(&self, a: &AlgElem) -> bool {
        let f = &self.field;
        self.group.classes().iter().all(|c| {
            c.members
                .iter()
                .fold(FqElem::ZERO, |acc, &m| f.add(acc, a.coeffs[m]))
                .is_zero()
        })
    }

    /// Matrix of `x -> a x` in the group basis.
    pub fn left_regular_matrix(&self, a: &AlgElem) -> MatFq {
        let n = self.dim();
        let mut m = MatFq::zeros(n, n);
        for y in 0..n {
            for (g, &c) in a.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    m.set(self.group.mul(g, y), y, c);
                }
            }
        }
        m
    }

    /// Minimal polynomial of `a`, from the first linear relation among
    /// `1, a, a^2, ...`.
    pub fn element_min_poly(&self, a: &AlgElem) -> Poly {
        let f = &self.field;
        let mut basis = KrylovBasis::new();
        let mut cur = self.one().coeffs;
        loop {
            if let Some(rel) = basis.push(&cur, f) {
                return Poly::new(rel);
            }
            cur = convolve(&self.group, f, &cur, &a.coeffs);
        }
    }

    /// Lifts an idempotent modulo a nilpotent ideal: returns `a^(p^m)` with
    /// `p^m >= dim`. Since `(a^p)^2 - a^p = (a^2 - a)^p` in characteristic
    /// p, this is an idempotent once `p^m` passes the nilpotency index.
    pub fn nilpotent_lift(&self, a: &AlgElem) -> Result<AlgElem, AlgebraError> {
        let n = self.dim();
        let mut b = a.square().sub(a);
        let mut reach = 1usize;
        while reach < n && !b.is_zero() {
            b = b.square();
            reach *= 2;
        }
        if !b.is_zero() {
            return Err(AlgebraError::NotAlmostIdempotent);
        }
        let p = self.field.p();
        let mut out = a.clone();
        let mut pm = 1usize;
        while pm < n {
            out = out.pow(p);
            pm = pm.saturating_mul(p as usize);
        }
        if !out.is_idempotent() {
            return Err(AlgebraError::LiftCheck("nilpotent lift is not idempotent"));
        }
        Ok(out)
    }

    /// `E_H = |H|^-1 sum_{h in H} h`. Requires `p` not dividing `|H|`.
    pub fn principal_idempotent(&self, h: &Subgroup) -> Result<AlgElem, AlgebraError> {
        let f = &self.field;
        let p = f.p();
        if (h.order() as u64).is_multiple_of(p) {
            return Err(AlgebraError::CharDividesH { p, order: h.order() });
        }
        let inv = f.inv(f.from_u64(h.order() as u64)).expect("unit");
        let mut e = self.zero();
        for &m in h.members() {
            e.coeffs[m] = inv;
        }
        Ok(e)
    }

    /// The algebra map `K[G] -> K[G/N]` induced by the quotient.
    pub fn quotient_hom(&self, normal: &Subgroup) -> Result<QuotientMap, AlgebraError> {
        if !normal.is_normal_in(&self.group) {
            return Err(AlgebraError::NotNormal);
        }
        let (q, hom) = self.group.quotient(normal)?;
        let target = GroupAlgebra::new(Arc::new(q), self.field.clone());
        let reps = self
            .group
            .cosets(normal)
            .into_iter()
            .map(|c| c[0])
            .collect();
        Ok(QuotientMap {
            source: self.clone(),
            target,
            hom,
            normal: normal.clone(),
            reps,
        })
    }

    /// Lifts an idempotent `e` of `K[G/H]` (with `p` not dividing `|H|`) to
    /// `u = E_H v`, where `v` carries the coefficients of `e` on the smallest
    /// representative of each coset. Checks `u^2 = u`, `rho(u) = e` and
    /// `tr u = |H|^-1 tr e` before returning.
    pub fn p_prime_quotient_lift(&self, e: &AlgElem, map: &QuotientMap) -> Result<AlgElem, AlgebraError> {
        if map.source != *self || e.alg != map.target {
            return Err(AlgebraError::AlgebraMismatch);
        }
        let eh = self.principal_idempotent(&map.normal)?;
        if !e.is_idempotent() {
            return Err(AlgebraError::NotIdempotent);
        }
        let mut v = self.zero();
        for (i, &c) in e.coeffs.iter().enumerate() {
            v.coeffs[map.reps[i]] = c;
        }
        let u = eh.mul(&v)?;
        if !u.is_idempotent() {
            return Err(AlgebraError::LiftCheck("u^2 != u"));
        }
        if map.apply(&u) != *e {
            return Err(AlgebraError::LiftCheck("rho(u) != e"));
        }
        let f = &self.field;
        let h_inv = f.inv(f.from_u64(map.normal.order() as u64)).expect("unit");
        if u.trace() != f.mul(h_inv, e.trace()) {
            return Err(AlgebraError::LiftCheck("tr u != |H|^-1 tr e"));
        }
        Ok(u)
    }

    /// JSON form: group label, field description, coefficient digit lists.
    pub fn to_json(&self, a: &AlgElem) -> Value {
        let f = &self.field;
        json!({
            "group": self.group.label(),
            "field": { "p": f.p(), "k": f.k(), "modulus": f.modulus() },
            "coeffs": a.coeffs.iter().map(|&c| f.digits(c)).collect::<Vec<_>>(),
        })
    }
}

/// `rho: K[G] -> K[G/N]` together with the coset representatives used by
/// the lift.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    source: GroupAlgebra,
    target: GroupAlgebra,
    hom: GroupHom,
    normal: Subgroup,
    reps: Vec<usize>,
}

impl QuotientMap {
    pub fn source(&self) -> &GroupAlgebra {
        &self.source
    }

    pub fn target(&self) -> &GroupAlgebra {
        &self.target
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn normal(&self) -> &Subgroup {
        &self.normal
    }

    /// Smallest element index in each coset, indexed like `G/N`.
    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    /// The coefficient of a coset is the sum of the coefficients over it.
    pub fn apply(&self, a: &AlgElem) -> AlgElem {
        let f = self.source.field();
        let mut out = self.target.zero();
        for (g, &c) in a.coeffs.iter().enumerate() {
            let i = self.hom.apply(g);
            out.coeffs[i] = f.add(out.coeffs[i], c);
        }
        out
    }

    /// The spanning set `{n g - g}` of the kernel.
    pub fn kernel_spanning_set(&self) -> Vec<AlgElem> {
        let g = self.source.group();
        let mut out = Vec::new();
        for &n in self.normal.members() {
            if n == g.identity() {
                continue;
            }
            for x in 0..g.order() {
                out.push(self.source.basis(g.mul(n, x)).sub(&self.source.basis(x)));
            }
        }
        out
    }
}

impl AlgElem {
    pub fn algebra(&self) -> &GroupAlgebra {
        &self.alg
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> FqElem {
        self.coeffs[g]
    }

    /// Coefficient of the identity.
    pub fn trace(&self) -> FqElem {
        self.coeffs[self.alg.group.identity()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FqElem::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == self.alg.one()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&g| !self.coeffs[g].is_zero()).collect()
    }

    pub fn add(&self, other: &AlgElem) -> AlgElem {
        self.zip(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &AlgElem) -> AlgElem {
        self.zip(other, |f, a, b| f.sub(a, b))
    }

    pub fn neg(&self) -> AlgElem {
        let f = self.alg.field.clone();
        self.map(|c| f.neg(c))
    }

    pub fn scale(&self, s: FqElem) -> AlgElem {
        let f = self.alg.field.clone();
        self.map(|c| f.mul(c, s))
    }

    pub fn mul(&self, other: &AlgElem) -> Result<AlgElem, AlgebraError> {
        self.alg.multiply(self, other)
    }

    pub fn square(&self) -> AlgElem {
        AlgElem {
            alg: self.alg.clone(),
            coeffs: convolve(&self.alg.group, &self.alg.field, &self.coeffs, &self.coeffs),
        }
    }

    pub fn pow(&self, mut e: u64) -> AlgElem {
        let mut base = self.clone();
        let mut acc = self.alg.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same algebra");
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn is_idempotent(&self) -> bool {
        self.square() == *self
    }

    fn zip(&self, other: &AlgElem, op: impl Fn(&FqField, FqElem, FqElem) -> FqElem) -> AlgElem {
        assert!(self.alg == other.alg, "elements belong to different algebras");
        let f = &self.alg.field;
        AlgElem {
            alg: self.alg.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| op(f, a, b))
                .collect(),
        }
    }

    fn map(&self, op: impl Fn(FqElem) -> FqElem) -> AlgElem {
        AlgElem {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().map(|&c| op(c)).collect(),
        }
    }
}

/// Convolution product on coefficient vectors.
pub fn convolve(g: &FiniteGroup, f: &FqField, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
    let n = g.order();
    let table = g.table();
    if f.k() == 1 {
        let p = f.p();
        let av: Vec<u64> = a.iter().map(|c| c.coeff(0) as u64).collect();
        let bv: Vec<u64> = b.iter().map(|c| c.coeff(0) as u64).collect();
        let nz: Vec<usize> = (0..n).filter(|&j| bv[j] != 0).collect();
        let mut acc = vec![0u64; n];
        for (x, &ax) in av.iter().enumerate() {
            if ax == 0 {
                continue;
            }
            let row = &table[x * n..(x + 1) * n];
            for &y in &nz {
                let t = row[y] as usize;
                // p <= 1021 keeps each product below 2^20; reduce lazily
                acc[t] += ax * bv[y];
                if acc[t] >= 1 << 62 {
                    acc[t] %= p;
                }
            }
        }
        return acc.into_iter().map(|v| f.from_u64(v % p)).collect();
    }
    let mut out = vec![FqElem::ZERO; n];
    let nz: Vec<usize> = (0..n).filter(|&j| !b[j].is_zero()).collect();
    for (x, &ax) in a.iter().enumerate() {
        if ax.is_zero() {
            continue;
        }
        let row = &table[x * n..(x + 1) * n];
        for &y in &nz {
            let t = row[y] as usize;
            out[t] = f.add(out[t], f.mul(ax, b[y]));
        }
    }
    out
}

/// Sparse class-multiplication constants of `Z(KG)` in the class-sum basis:
/// `C_j C_i = sum_k N[i][(j, k)] C_k`.
#[derive(Clone, Debug)]
pub struct ClassAlgebra {
    alg: GroupAlgebra,
    constants: Vec<Vec<(u32, u32, u32)>>,
}

impl ClassAlgebra {
    pub fn new(alg: &GroupAlgebra) -> ClassAlgebra {
        let g = alg.group();
        let classes = g.classes();
        let c = classes.len();
        let mut constants = Vec::with_capacity(c);
        let mut counts = vec![0u32; c];
        for ci in classes {
            let mut list = Vec::new();
            for (k, ck) in classes.iter().enumerate() {
                let gk = ck.representative;
                for &x in &ci.members {
                    counts[g.class_index(g.mul(gk, g.inv(x)))] += 1;
                }
                for (j, cnt) in counts.iter_mut().enumerate() {
                    if *cnt != 0 {
                        list.push((j as u32, k as u32, *cnt));
                        *cnt = 0;
                    }
                }
            }
            constants.push(list);
        }
        ClassAlgebra {
            alg: alg.clone(),
            constants,
        }
    }

    pub fn algebra(&self) -> &GroupAlgebra {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.constants.len()
    }

    pub fn one(&self) -> Vec<FqElem> {
        let mut v = vec![FqElem::ZERO; self.dim()];
        v[self.alg.group().class_index(self.alg.group().identity())] = self.alg.field().one();
        v
    }

    /// `a * C_i` in class coordinates.
    pub fn mul_class(&self, a: &[FqElem], i: usize) -> Vec<FqElem> {
        let f = self.alg.field();
        let mut out = vec![FqElem::ZERO; self.dim()];
        for &(j, k, cnt) in &self.constants[i] {
            let aj = a[j as usize];
            if !aj.is_zero() {
                let (k, s) = (k as usize, (cnt as u64 % f.p()) as u32);
                out[k] = f.add(out[k], f.scale(aj, s));
            }
        }
        out
    }

    pub fn mul(&self, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
        let f = self.alg.field();
        let mut out = vec![FqElem::ZERO; self.dim()];
        for (i, &bi) in b.iter().enumerate() {
            if bi.is_zero() {
                continue;
            }
            for (o, t) in out.iter_mut().zip(self.mul_class(a, i)) {
                *o = f.add(*o, f.mul(t, bi));
            }
        }
        out
    }

    /// Expands class coordinates into a group-algebra element.
    pub fn to_element(&self, v: &[FqElem]) -> AlgElem {
        let g = self.alg.group();
        let coeffs = (0..g.order()).map(|x| v[g.class_index(x)]).collect();
        AlgElem {
            alg: self.alg.clone(),
            coeffs,
        }
    }

    /// Class coordinates of a central element (`None` if not central).
    pub fn from_element(&self, a: &AlgElem) -> Option<Vec<FqElem>> {
        if !self.alg.is_central(a) {
            return None;
        }
        Some(
            self.alg
                .group()
                .classes()
                .iter()
                .map(|c| a.coeffs[c.members[0]])
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::{make_field, min_poly_matrix};
    use crate::groups::build_builtin;

    fn alg(family: &str, params: &[u64], p: u64, k: usize) -> GroupAlgebra {
        GroupAlgebra::new(
            Arc::new(build_builtin(family, params).unwrap()),
            Arc::new(make_field(p, k).unwrap()),
        )
    }

    /// Transpositions and 3-cycles of S3 by element order.
    fn s3_parts(a: &GroupAlgebra) -> (Vec<usize>, Vec<usize>) {
        let g = a.group();
        let t = (0..6).filter(|&x| g.element_order(x) == 2).collect();
        let c = (0..6).filter(|&x| g.element_order(x) == 3).collect();
        (t, c)
    }

    #[test]
    fn multiply_examples() {
        let a = alg("cyclic", &[2], 2, 1);
        let x = a.from_ints(&[1, 1]).unwrap();
        assert!(x.square().is_zero());
        assert!(!x.is_idempotent());
        assert_eq!(x.mul(&a.one()).unwrap(), x);

        let a = alg("cyclic", &[3], 2, 2);
        let e = a.from_ints(&[0, 1, 1]).unwrap();
        assert_eq!(e.square(), e);
        assert!(e.is_idempotent());
        assert!(e.trace().is_zero());
        assert!(a.zero().is_idempotent() && a.one().is_idempotent());
    }

    #[test]
    fn mismatch_detected() {
        let a = alg("cyclic", &[3], 2, 1);
        let b = alg("cyclic", &[3], 3, 1);
        assert!(matches!(
            a.multiply(&a.one(), &b.one()),
            Err(AlgebraError::AlgebraMismatch)
        ));
    }

    #[test]
    fn trace_examples() {
        let a = alg("cyclic", &[2], 5, 1);
        assert_eq!(a.one().trace(), a.field().one());
        assert!(a.basis(1).trace().is_zero());
        assert_eq!(a.from_ints(&[3, 2]).unwrap().trace(), a.field().from_u64(3));
    }

    #[test]
    fn class_sum_examples() {
        let a = alg("symmetric", &[3], 5, 1);
        let mut sizes: Vec<usize> = a.class_sums().iter().map(|c| c.support().len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert!(a.class_sums().iter().all(|c| a.is_central(c)));
        let (t, _) = s3_parts(&a);
        assert!(!a.is_central(&a.basis(t[0])));
        let t1 = alg("cyclic", &[1], 3, 1);
        assert_eq!(t1.class_sums(), vec![t1.one()]);
        assert_eq!(alg("cyclic", &[5], 3, 1).class_sums().len(), 5);
    }

    #[test]
    fn commutator_membership() {
        let a = alg("symmetric", &[3], 5, 1);
        let (t, _) = s3_parts(&a);
        assert!(a.commutator_contains(&a.basis(t[0]).sub(&a.basis(t[1]))));
        assert!(!a.commutator_contains(&a.one()));
        let x = a.from_ints(&[1, 2, 0, 3, 4, 1]).unwrap();
        let y = a.from_ints(&[0, 1, 1, 2, 0, 3]).unwrap();
        let c = x.mul(&y).unwrap().sub(&y.mul(&x).unwrap());
        assert!(a.commutator_contains(&c));
    }

    #[test]
    fn min_poly_examples() {
        let a = alg("symmetric", &[3], 3, 1);
        let f = a.field().clone();
        let x = Poly::x(&f);
        assert_eq!(a.element_min_poly(&a.zero()), x);
        assert_eq!(a.element_min_poly(&a.one()), x.sub(&Poly::one(&f), &f));
        let (t, _) = s3_parts(&a);
        let mut n = a.zero();
        for &g in &t {
            n = n.add(&a.basis(g));
        }
        assert_eq!(a.element_min_poly(&n), x.mul(&x, &f));
        let r = a.from_ints(&[1, 2, 0, 1, 1, 2]).unwrap();
        assert_eq!(a.element_min_poly(&r), min_poly_matrix(&a.left_regular_matrix(&r), &f));
    }

    #[test]
    fn nilpotent_lift_examples() {
        let a = alg("symmetric", &[3], 3, 1);
        let (t, _) = s3_parts(&a);
        let mut n = a.zero();
        for &g in &t {
            n = n.add(&a.basis(g));
        }
        assert_eq!(a.nilpotent_lift(&a.one().add(&n)).unwrap(), a.one());
        assert!(a.nilpotent_lift(&a.zero()).unwrap().is_zero());
        let b = alg("cyclic", &[3], 2, 2);
        let e = b.from_ints(&[0, 1, 1]).unwrap();
        assert_eq!(b.nilpotent_lift(&e).unwrap(), e);
        // g is a unit of finite order, so g^2 - g is not nilpotent
        assert!(matches!(
            b.nilpotent_lift(&b.basis(1)),
            Err(AlgebraError::NotAlmostIdempotent)
        ));
    }

    #[test]
    fn quotient_map_examples() {
        let a = alg("symmetric", &[3], 5, 1);
        let g = a.group().clone();
        let (_, c) = s3_parts(&a);
        let a3 = Subgroup::new(&g, vec![0, c[0], c[1]]).unwrap();
        let q = a.quotient_hom(&a3).unwrap();
        let x = a.one().add(&a.basis(c[0]));
        assert_eq!(q.apply(&x), q.target().from_ints(&[2, 0]).unwrap());
        for k in q.kernel_spanning_set() {
            assert!(q.apply(&k).is_zero());
        }
        let triv = a.quotient_hom(&Subgroup::trivial()).unwrap();
        let y = a.from_ints(&[1, 2, 3, 4, 0, 1]).unwrap();
        assert_eq!(triv.apply(&y).coeffs(), y.coeffs());
        let (t, _) = s3_parts(&a);
        let not_normal = Subgroup::new(&g, vec![0, t[0]]).unwrap();
        assert!(matches!(a.quotient_hom(&not_normal), Err(AlgebraError::NotNormal)));
    }

    #[test]
    fn principal_idempotent_properties() {
        let a = alg("symmetric", &[3], 5, 1);
        let g = a.group().clone();
        let (_, c) = s3_parts(&a);
        let a3 = Subgroup::new(&g, vec![0, c[0], c[1]]).unwrap();
        let eh = a.principal_idempotent(&a3).unwrap();
        assert!(eh.is_idempotent());
        assert!(a.is_central(&eh));
        for &h in a3.members() {
            assert_eq!(eh.mul(&a.basis(h)).unwrap(), eh);
        }
        let b = alg("symmetric", &[3], 3, 1);
        assert!(matches!(
            b.principal_idempotent(&a3),
            Err(AlgebraError::CharDividesH { .. })
        ));
    }

    #[test]
    fn lift_through_s3_mod_a3() {
        let a = alg("symmetric", &[3], 5, 1);
        let g = a.group().clone();
        let (_, c) = s3_parts(&a);
        let a3 = Subgroup::new(&g, vec![0, c[0], c[1]]).unwrap();
        let q = a.quotient_hom(&a3).unwrap();
        let t = q.target();
        let f = a.field();
        // idempotents of GF(5)[C2]: 3 + 3g and 3 + 2g
        for e in [t.from_ints(&[3, 3]).unwrap(), t.from_ints(&[3, 2]).unwrap()] {
            assert!(e.is_idempotent());
            let u = a.p_prime_quotient_lift(&e, &q).unwrap();
            // |A3|^-1 = 2 in GF(5), so tr u = 2 * 3 = 1
            assert_eq!(u.trace(), f.one());
        }
        let u = a.p_prime_quotient_lift(&t.one(), &q).unwrap();
        assert_eq!(u, a.principal_idempotent(&a3).unwrap());
        assert!(a.p_prime_quotient_lift(&t.zero(), &q).unwrap().is_zero());
        assert!(matches!(
            a.p_prime_quotient_lift(&t.basis(1), &q),
            Err(AlgebraError::NotIdempotent)
        ));
    }

    #[test]
    fn class_algebra_matches_convolution() {
        let a = alg("symmetric", &[4], 5, 1);
        let z = ClassAlgebra::new(&a);
        let sums = a.class_sums();
        for i in 0..z.dim() {
            for j in 0..z.dim() {
                let mut e = vec![FqElem::ZERO; z.dim()];
                e[j] = a.field().one();
                let via_class = z.to_element(&z.mul_class(&e, i));
                let direct = sums[j].mul(&sums[i]).unwrap();
                assert_eq!(via_class, direct);
                assert_eq!(a.mul_by_class(&sums[j], i), direct);
            }
        }
        assert_eq!(z.to_element(&z.one()), a.one());
    }

    #[test]
    fn json_shape() {
        let a = alg("cyclic", &[3], 2, 2);
        let v = a.to_json(&a.from_ints(&[0, 1, 1]).unwrap());
        assert_eq!(v["group"], "cyclic:3");
        assert_eq!(v["field"]["k"], 2);
        assert_eq!(v["coeffs"][1], json!([1, 0]));
    }
}
