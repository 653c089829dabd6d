//! Finite groups given by complete multiplication tables.
//!
//! Every group in this crate is stored as a dense Cayley table over element
//! indices `0..order`, with index 0 reserved for the identity. Builtin
//! families, permutation closures, user tables, quotients and direct products
//! all funnel through [`FiniteGroup::from_table`], which validates the group
//! axioms and precomputes inverses, element orders and conjugacy classes.

mod builtin;
mod cayley;
mod perm;

pub use builtin::{build_builtin, Family};
pub use perm::{parse_permutations, Permutation};

use serde::Serialize;
use thiserror::Error;

/// Largest group order accepted by any constructor.
pub const MAX_GROUP_ORDER: usize = 1024;

/// Builtin and permutation groups above this order skip the O(n^3)
/// associativity scan. User-supplied tables are always checked.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("unknown group family `{0}`")]
    UnknownFamily(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("group order {order} exceeds the cap of {cap} elements")]
    OrderCap { order: u128, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("table is not a Latin square")]
    NotLatinSquare,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("element set is not a subgroup: {0}")]
    NotSubgroup(String),
}

/// `order = p^r * d` with `p` not dividing `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PSplit {
    pub p: u64,
    pub r: u32,
    pub d: u64,
}

impl PSplit {
    pub fn of(order: u64, p: u64) -> PSplit {
        assert!(p >= 2, "p must be a prime");
        let mut d = order;
        let mut r = 0;
        while d.is_multiple_of(p) {
            d /= p;
            r += 1;
        }
        PSplit { p, r, d }
    }

    /// `p^r` as an integer.
    pub fn p_part(&self) -> u64 {
        self.p.pow(self.r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    /// Validates closure under multiplication and inverses.
    pub fn new(group: &FiniteGroup, mut members: Vec<usize>) -> Result<Subgroup, GroupError> {
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(GroupError::NotSubgroup("identity missing".into()));
        }
        if let Some(&bad) = members.iter().find(|&&m| m >= group.order()) {
            return Err(GroupError::NotSubgroup(format!("index {bad} out of range")));
        }
        let mut inside = vec![false; group.order()];
        for &m in &members {
            inside[m] = true;
        }
        for &a in &members {
            if !inside[group.inv(a)] {
                return Err(GroupError::NotSubgroup(format!("inverse of {a} missing")));
            }
            for &b in &members {
                if !inside[group.mul(a, b)] {
                    return Err(GroupError::NotSubgroup(format!("{a}*{b} missing")));
                }
            }
        }
        Ok(Subgroup { members })
    }

    pub fn trivial() -> Subgroup {
        Subgroup { members: vec![0] }
    }

    pub fn whole(group: &FiniteGroup) -> Subgroup {
        Subgroup {
            members: (0..group.order()).collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_normal_in(&self, group: &FiniteGroup) -> bool {
        (0..group.order()).all(|x| {
            self.members
                .iter()
                .all(|&h| self.contains(group.conjugate(h, x)))
        })
    }
}

/// A homomorphism between two groups stored as an image table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    image: Vec<usize>,
    codomain_order: usize,
}

impl GroupHom {
    pub fn apply(&self, g: usize) -> usize {
        self.image[g]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn codomain_order(&self) -> usize {
        self.codomain_order
    }

    pub fn kernel(&self) -> Vec<usize> {
        (0..self.image.len()).filter(|&g| self.image[g] == 0).collect()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain_order];
        for &i in &self.image {
            hit[i] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Exhaustive check of `image[xy] = image[x] image[y]`.
    pub fn is_homomorphism(&self, domain: &FiniteGroup, codomain: &FiniteGroup) -> bool {
        if self.image.len() != domain.order() || self.image[0] != 0 {
            return false;
        }
        (0..domain.order()).all(|x| {
            (0..domain.order()).all(|y| {
                self.image[domain.mul(x, y)] == codomain.mul(self.image[x], self.image[y])
            })
        })
    }
}

/// A finite group with a validated Cayley table. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    element_orders: Vec<u32>,
    classes: Vec<ConjClass>,
    class_of: Vec<u32>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a row-major table where `table[a * n + b]` is the
    /// index of `a * b`.
    pub fn from_table(
        label: impl Into<String>,
        order: usize,
        table: Vec<u32>,
        check_associativity: bool,
    ) -> Result<FiniteGroup, GroupError> {
        if order == 0 {
            return Err(GroupError::Parse("order must be positive".into()));
        }
        if order > MAX_GROUP_ORDER {
            return Err(GroupError::OrderCap {
                order: order as u128,
                cap: MAX_GROUP_ORDER,
            });
        }
        if table.len() != order * order {
            return Err(GroupError::Parse(format!(
                "expected {} table entries, found {}",
                order * order,
                table.len()
            )));
        }
        if table.iter().any(|&v| v as usize >= order) {
            return Err(GroupError::NotLatinSquare);
        }
        check_latin(order, &table)?;
        for a in 0..order {
            if table[a] as usize != a || table[a * order] as usize != a {
                return Err(GroupError::NoIdentity);
            }
        }
        if check_associativity {
            check_associative(order, &table)?;
        }

        let mut inverses = vec![0u32; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            inverses[a] = row.iter().position(|&v| v == 0).expect("latin row") as u32;
        }

        let mut element_orders = vec![0u32; order];
        for a in 0..order {
            let mut x = a;
            let mut n = 1u32;
            while x != 0 {
                x = table[x * order + a] as usize;
                n += 1;
            }
            element_orders[a] = n;
        }

        let mut group = FiniteGroup {
            label: label.into(),
            order,
            table,
            inverses,
            element_orders,
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        group.compute_classes();
        Ok(group)
    }

    fn compute_classes(&mut self) {
        let n = self.order;
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let mut members: Vec<usize> = (0..n).map(|x| self.conjugate(g, x)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                seen[m] = true;
            }
            classes.push(ConjClass {
                representative: members[0],
                members,
            });
        }
        classes.sort_by_key(|c| (c.size(), c.members[0]));
        let mut class_of = vec![0u32; n];
        for (i, c) in classes.iter().enumerate() {
            for &m in &c.members {
                class_of[m] = i as u32;
            }
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> FiniteGroup {
        self.label = label.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub const fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// `x * g * x^-1`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn pow(&self, g: usize, e: u64) -> usize {
        let e = e % self.element_orders[g] as u64;
        let mut acc = 0;
        for _ in 0..e {
            acc = self.mul(acc, g);
        }
        acc
    }

    pub fn element_order(&self, g: usize) -> u64 {
        self.element_orders[g] as u64
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class_index(&self, g: usize) -> usize {
        self.class_of[g] as usize
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn p_split(&self, p: u64) -> PSplit {
        PSplit::of(self.order as u64, p)
    }

    /// True when the order is a power of `p` (the trivial group counts).
    pub fn is_p_group(&self, p: u64) -> bool {
        self.p_split(p).d == 1
    }

    /// Splits `g` into commuting p-part and p'-part, both powers of `g`.
    pub fn p_prime_decomposition(&self, g: usize, p: u64) -> (usize, usize) {
        let n = self.element_order(g);
        let split = PSplit::of(n, p);
        let pa = split.p_part();
        let m = split.d;
        // e ≡ 1 (mod p^a), e ≡ 0 (mod m)
        let e = (0..n)
            .step_by(m as usize)
            .find(|e| e % pa == 1 % pa)
            .expect("CRT solution exists");
        let p_part = self.pow(g, e);
        let p_prime_part = self.pow(g, (n + 1 - e % n) % n);
        (p_part, p_prime_part)
    }

    /// Elements of order coprime to `p`, in index order.
    pub fn p_regular_set(&self, p: u64) -> Vec<usize> {
        (0..self.order)
            .filter(|&g| !self.element_order(g).is_multiple_of(p))
            .collect()
    }

    pub fn p_regular_class_count(&self, p: u64) -> usize {
        self.classes
            .iter()
            .filter(|c| !self.element_order(c.representative).is_multiple_of(p))
            .count()
    }

    /// The elements whose order is a power of `p`.
    pub fn p_elements(&self, p: u64) -> Vec<usize> {
        (0..self.order)
            .filter(|&g| PSplit::of(self.element_order(g), p).d == 1)
            .collect()
    }

    /// The Sylow p-subgroup when it is normal. It is then the set of all
    /// p-elements, so it suffices to check that set's size and closure.
    pub fn normal_sylow_p(&self, p: u64) -> Option<Subgroup> {
        let elems = self.p_elements(p);
        if elems.len() as u64 != self.p_split(p).p_part() {
            return None;
        }
        Subgroup::new(self, elems).ok()
    }

    /// A pair of p-elements whose product is not a p-element, if any.
    pub fn p_element_non_closure(&self, p: u64) -> Option<(usize, usize)> {
        let elems = self.p_elements(p);
        let mut is_p = vec![false; self.order];
        for &e in &elems {
            is_p[e] = true;
        }
        for &a in &elems {
            for &b in &elems {
                if !is_p[self.mul(a, b)] {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Cosets of a normal subgroup, ordered by smallest member. The coset of
    /// the identity comes first.
    pub fn cosets(&self, normal: &Subgroup) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.order];
        let mut cosets = Vec::new();
        for g in 0..self.order {
            if assigned[g] {
                continue;
            }
            let mut coset: Vec<usize> = normal.members().iter().map(|&h| self.mul(g, h)).collect();
            coset.sort_unstable();
            for &c in &coset {
                assigned[c] = true;
            }
            cosets.push(coset);
        }
        cosets
    }

    pub fn quotient(&self, normal: &Subgroup) -> Result<(FiniteGroup, GroupHom), GroupError> {
        if !normal.is_normal_in(self) {
            return Err(GroupError::NotNormal);
        }
        let cosets = self.cosets(normal);
        let m = cosets.len();
        let mut image = vec![0usize; self.order];
        for (i, c) in cosets.iter().enumerate() {
            for &g in c {
                image[g] = i;
            }
        }
        let mut table = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                table[i * m + j] = image[self.mul(cosets[i][0], cosets[j][0])] as u32;
            }
        }
        let label = if normal.order() == 1 {
            self.label.clone()
        } else {
            format!("{}/N{}", self.label, normal.order())
        };
        let q = FiniteGroup::from_table(label, m, table, m <= ASSOCIATIVITY_CHECK_LIMIT)?;
        Ok((
            q,
            GroupHom {
                image,
                codomain_order: m,
            },
        ))
    }

    /// Element `(g, h)` has index `g * |H| + h`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
        let (n, m) = (self.order, other.order);
        let order = n * m;
        if order > MAX_GROUP_ORDER {
            return Err(GroupError::OrderCap {
                order: order as u128,
                cap: MAX_GROUP_ORDER,
            });
        }
        let mut table = vec![0u32; order * order];
        for a in 0..order {
            let (a1, a2) = (a / m, a % m);
            for b in 0..order {
                let (b1, b2) = (b / m, b % m);
                table[a * order + b] = (self.mul(a1, b1) * m + other.mul(a2, b2)) as u32;
            }
        }
        FiniteGroup::from_table(
            format!("product({},{})", self.label, other.label),
            order,
            table,
            order <= ASSOCIATIVITY_CHECK_LIMIT,
        )
    }

    pub fn from_cayley_text(text: &str) -> Result<FiniteGroup, GroupError> {
        cayley::parse(text)
    }

    pub fn to_cayley_text(&self) -> String {
        cayley::render(self)
    }

    pub fn from_permutations(generators: &str) -> Result<FiniteGroup, GroupError> {
        perm::closure_from_text(generators)
    }
}

fn check_latin(n: usize, table: &[u32]) -> Result<(), GroupError> {
    let mut seen = vec![usize::MAX; n];
    for a in 0..n {
        for b in 0..n {
            let v = table[a * n + b] as usize;
            if seen[v] == a {
                return Err(GroupError::NotLatinSquare);
            }
            seen[v] = a;
        }
    }
    let mut seen = vec![usize::MAX; n];
    for b in 0..n {
        for a in 0..n {
            let v = table[a * n + b] as usize;
            if seen[v] == b {
                return Err(GroupError::NotLatinSquare);
            }
            seen[v] = b;
        }
    }
    Ok(())
}

fn check_associative(n: usize, table: &[u32]) -> Result<(), GroupError> {
    for a in 0..n {
        for b in 0..n {
            let ab = table[a * n + b] as usize;
            let row_ab = &table[ab * n..(ab + 1) * n];
            for c in 0..n {
                let bc = table[b * n + c] as usize;
                if row_ab[c] != table[a * n + bc] {
                    return Err(GroupError::NotAssociative(a, b, c));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orbit_class_sizes(g: &FiniteGroup) -> Vec<usize> {
        // independent oracle: orbit of each element under all conjugations
        let n = g.order();
        let mut sizes = Vec::new();
        let mut done = vec![false; n];
        for x in 0..n {
            if done[x] {
                continue;
            }
            let mut orbit = vec![x];
            let mut i = 0;
            while i < orbit.len() {
                let y = orbit[i];
                for h in 0..n {
                    let z = g.mul(g.mul(g.inv(h), y), h);
                    if !orbit.contains(&z) {
                        orbit.push(z);
                    }
                }
                i += 1;
            }
            for &o in &orbit {
                done[o] = true;
            }
            sizes.push(orbit.len());
        }
        sizes.sort_unstable();
        sizes
    }

    #[test]
    fn class_sizes_match_orbit_oracle() {
        for spec in [
            ("symmetric", vec![3]),
            ("symmetric", vec![4]),
            ("quaternion", vec![8]),
            ("dihedral", vec![5]),
            ("alternating", vec![4]),
        ] {
            let g = build_builtin(spec.0, &spec.1).unwrap();
            let mut sizes: Vec<usize> = g.classes().iter().map(|c| c.size()).collect();
            sizes.sort_unstable();
            assert_eq!(sizes, orbit_class_sizes(&g), "{}", g.label());
        }
    }

    #[test]
    fn classes_sorted_and_partition() {
        let g = build_builtin("symmetric", &[4]).unwrap();
        let cls = g.classes();
        assert_eq!(cls[0].members, vec![0]);
        for w in cls.windows(2) {
            assert!((w[0].size(), w[0].members[0]) < (w[1].size(), w[1].members[0]));
        }
        let total: usize = cls.iter().map(|c| c.size()).sum();
        assert_eq!(total, 24);
        for c in cls {
            assert_eq!(24 % c.size(), 0);
        }
    }

    #[test]
    fn s3_and_q8_class_structure() {
        let s3 = build_builtin("symmetric", &[3]).unwrap();
        let sizes: Vec<usize> = s3.classes().iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
        let q8 = build_builtin("quaternion", &[8]).unwrap();
        let sizes: Vec<usize> = q8.classes().iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
        let involutions = (0..8).filter(|&g| q8.element_order(g) == 2).count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn p_prime_decomposition_cyclic6() {
        let c6 = build_builtin("cyclic", &[6]).unwrap();
        // element 1 is the generator; g^k has index k
        assert_eq!(c6.p_prime_decomposition(1, 3), (4, 3));
        // coprime order: (identity, g)
        assert_eq!(c6.p_prime_decomposition(3, 3), (0, 3));
        // p-power order: (g, identity)
        assert_eq!(c6.p_prime_decomposition(2, 3), (2, 0));
    }

    #[test]
    fn p_prime_decomposition_all_pairs() {
        for g in [
            build_builtin("symmetric", &[4]).unwrap(),
            build_builtin("cyclic", &[12]).unwrap(),
            build_builtin("dihedral", &[6]).unwrap(),
        ] {
            for p in [2, 3, 5] {
                for x in 0..g.order() {
                    let (a, b) = g.p_prime_decomposition(x, p);
                    assert_eq!(g.mul(a, b), x);
                    assert_eq!(g.mul(b, a), x);
                    assert_eq!(PSplit::of(g.element_order(a), p).d, 1);
                    assert_ne!(g.element_order(b) % p, 0);
                }
            }
        }
    }

    #[test]
    fn p_regular_sets() {
        let c6 = build_builtin("cyclic", &[6]).unwrap();
        assert_eq!(c6.p_regular_set(3), vec![0, 3]);
        assert_eq!(c6.p_regular_set(7).len(), 6);
        let s3 = build_builtin("symmetric", &[3]).unwrap();
        let reg = s3.p_regular_set(3);
        assert_eq!(reg.len(), 4);
        let from_classes: usize = s3
            .classes()
            .iter()
            .filter(|c| !s3.element_order(c.representative).is_multiple_of(3))
            .map(|c| c.size())
            .sum();
        assert_eq!(from_classes, reg.len());
    }

    #[test]
    fn normal_sylow_detection() {
        let s3 = build_builtin("symmetric", &[3]).unwrap();
        let h = s3.normal_sylow_p(3).unwrap();
        assert_eq!(h.order(), 3);
        assert!(h.is_normal_in(&s3));
        assert!(s3.normal_sylow_p(2).is_none());

        let s4 = build_builtin("symmetric", &[4]).unwrap();
        assert_eq!(s4.p_elements(2).len(), 16);
        assert!(s4.normal_sylow_p(2).is_none());
        assert!(s4.p_element_non_closure(2).is_some());

        let q8 = build_builtin("quaternion", &[8]).unwrap();
        assert_eq!(q8.normal_sylow_p(2).unwrap().order(), 8);
    }

    #[test]
    fn quotients() {
        let s3 = build_builtin("symmetric", &[3]).unwrap();
        let a3 = s3.normal_sylow_p(3).unwrap();
        let (q, hom) = s3.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        assert!(hom.is_homomorphism(&s3, &q));
        assert!(hom.is_surjective());
        assert_eq!(hom.kernel(), a3.members());

        let (same, hom) = s3.quotient(&Subgroup::trivial()).unwrap();
        assert_eq!(same.order(), 6);
        assert_eq!(hom.images(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(same.table(), s3.table());

        let (triv, _) = s3.quotient(&Subgroup::whole(&s3)).unwrap();
        assert_eq!(triv.order(), 1);

        let t = Subgroup::new(&s3, vec![0, s3.p_elements(2)[1]]).unwrap();
        assert_eq!(s3.quotient(&t).unwrap_err(), GroupError::NotNormal);
    }

    #[test]
    fn direct_products() {
        let c2 = build_builtin("cyclic", &[2]).unwrap();
        let c3 = build_builtin("cyclic", &[3]).unwrap();
        let g = c2.direct_product(&c3).unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.is_abelian());
        let v4 = c2.direct_product(&c2).unwrap();
        assert!((1..4).all(|x| v4.element_order(x) == 2));
        let trivial = build_builtin("cyclic", &[1]).unwrap();
        let s3 = build_builtin("symmetric", &[3]).unwrap();
        assert_eq!(s3.direct_product(&trivial).unwrap().table(), s3.table());
        let big = build_builtin("cyclic", &[64]).unwrap();
        assert!(matches!(
            big.direct_product(&big),
            Err(GroupError::OrderCap { .. })
        ));
    }
}
