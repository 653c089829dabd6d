//! Factorization over `GF(q)`: squarefree decomposition, distinct-degree
//! splitting and randomized equal-degree splitting (Cantor–Zassenhaus).

use rand::Rng;

use super::field::{factor_u64, FqElem, FqField};
use super::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Leading coefficient of the input.
    pub unit: FqElem,
    /// Monic irreducible factors with multiplicities, sorted by
    /// [`Poly::sort_key`].
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, f: &FqField) -> Poly {
        let mut acc = Poly::constant(self.unit);
        for (g, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(g, f);
            }
        }
        acc
    }

    pub fn distinct_count(&self) -> usize {
        self.factors.len()
    }
}

/// Factors a nonzero polynomial into monic irreducibles.
pub fn poly_factor<R: Rng + ?Sized>(poly: &Poly, f: &FqField, rng: &mut R) -> Factorization {
    assert!(!poly.is_zero(), "cannot factor the zero polynomial");
    let unit = poly.lead();
    let monic = poly.monic(f);
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (sqf, mult) in squarefree(&monic, f) {
        for (block, d) in distinct_degree(&sqf, f) {
            for irr in equal_degree(&block, d, f, rng) {
                match factors.iter_mut().find(|(g, _)| *g == irr) {
                    Some((_, m)) => *m += mult,
                    None => factors.push((irr, mult)),
                }
            }
        }
    }
    factors.sort_by_cached_key(|(g, _)| g.sort_key(f));
    Factorization { unit, factors }
}

/// Squarefree decomposition of a monic polynomial: pairwise coprime
/// squarefree parts with multiplicities.
pub fn squarefree(poly: &Poly, f: &FqField) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    squarefree_rec(poly, 1, f, &mut out);
    out
}

fn squarefree_rec(poly: &Poly, mult: u32, f: &FqField, out: &mut Vec<(Poly, u32)>) {
    if poly.degree().unwrap_or(0) == 0 {
        return;
    }
    let p = f.p() as u32;
    let d = poly.derivative(f);
    if d.is_zero() {
        squarefree_rec(&poly.pth_root(f), mult * p, f, out);
        return;
    }
    let mut c = poly.gcd(&d, f);
    let mut w = poly.div_exact(&c, f);
    let mut i = 1;
    while !w.is_one(f) {
        let y = w.gcd(&c, f);
        let z = w.div_exact(&y, f);
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, mult * i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w, f);
    }
    if !c.is_one(f) {
        squarefree_rec(&c.pth_root(f), mult * p, f, out);
    }
}

/// Splits a monic squarefree polynomial into products of irreducibles of
/// equal degree, returned as `(product, degree)`.
pub fn distinct_degree(poly: &Poly, f: &FqField) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = poly.clone();
    let x = Poly::x(f);
    let mut h = x.rem(&rest, f);
    let mut i = 0;
    while rest.degree().unwrap_or(0) >= 2 * (i + 1) {
        i += 1;
        h = h.frobenius_mod(&rest, f);
        let g = rest.gcd(&h.sub(&x, f), f);
        if !g.is_one(f) {
            rest = rest.div_exact(&g, f);
            h = h.rem(&rest, f);
            out.push((g, i));
        }
    }
    if let Some(deg) = rest.degree().filter(|&d| d > 0) {
        out.push((rest, deg));
    }
    out
}

/// Splits a monic squarefree product of degree-`d` irreducibles.
pub fn equal_degree<R: Rng + ?Sized>(poly: &Poly, d: usize, f: &FqField, rng: &mut R) -> Vec<Poly> {
    let n = poly.degree().unwrap_or(0);
    if n <= d {
        return vec![poly.clone()];
    }
    loop {
        let a = Poly::new((0..n).map(|_| f.random(rng)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut g = a.gcd(poly, f);
        if g.is_one(f) {
            g = splitting_map(&a, poly, d, f).gcd(poly, f);
        }
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let other = poly.div_exact(&g, f);
            let mut out = equal_degree(&g, d, f, rng);
            out.extend(equal_degree(&other, d, f, rng));
            return out;
        }
    }
}

/// `a^((q^d - 1)/2) - 1` for odd `p`, or the absolute trace of `a` over
/// `GF(2)` for `p = 2`, reduced modulo `m`. All exponents are assembled
/// from Frobenius powers so that `q` never needs to be materialized.
fn splitting_map(a: &Poly, m: &Poly, d: usize, f: &FqField) -> Poly {
    let p = f.p();
    if p == 2 {
        let mut s = a.rem(m, f);
        let mut t = s.clone();
        for _ in 1..(d * f.k()) {
            s = s.mulmod(&s, m, f);
            t = t.add(&s, f);
        }
        return t;
    }
    // t = a^(1 + q + ... + q^(d-1))
    let mut s = a.rem(m, f);
    let mut t = s.clone();
    for _ in 1..d {
        s = s.frobenius_mod(m, f);
        t = t.mulmod(&s, m, f);
    }
    // v = t^(1 + p + ... + p^(k-1))
    let mut s = t.clone();
    let mut v = t;
    for _ in 1..f.k() {
        s = s.powmod(p, m, f);
        v = v.mulmod(&s, m, f);
    }
    v.powmod((p - 1) / 2, m, f).sub(&Poly::one(f), f)
}

/// Rabin's irreducibility test over `GF(q)`.
pub fn is_irreducible(poly: &Poly, f: &FqField) -> bool {
    let Some(n) = poly.degree() else {
        return false;
    };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let m = poly.monic(f);
    let x = Poly::x(f);
    let divisors: Vec<usize> = factor_u64(n as u64)
        .into_iter()
        .map(|(l, _)| n / l as usize)
        .collect();
    let mut h = x.clone();
    for i in 1..=n {
        h = h.frobenius_mod(&m, f);
        if divisors.contains(&i) && !m.gcd(&h.sub(&x, f), f).is_one(f) {
            return false;
        }
    }
    h == x.rem(&m, f)
}
