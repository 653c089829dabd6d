use std::fmt;

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use super::poly::Poly;
use super::FieldError;

/// Largest supported extension degree `k` in `GF(p^k)`.
pub const MAX_EXTENSION_DEGREE: usize = 32;

/// Largest supported characteristic. Coefficient products are accumulated in
/// `u32`, which stays exact for `p <= 1021` at the maximal degree.
pub const MAX_CHARACTERISTIC: u64 = 1021;

const K: usize = MAX_EXTENSION_DEGREE;

/// An element of `GF(p^k)` in polynomial-basis coordinates. Only the first
/// `k` coordinates are meaningful; the rest are always zero. The element is
/// interpreted relative to the [`FqField`] that produced it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem {
    c: [u16; K],
}

impl FqElem {
    pub const ZERO: FqElem = FqElem { c: [0; K] };

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    /// Coordinate `i` in the polynomial basis `1, x, ..., x^(k-1)`.
    pub fn coeff(&self, i: usize) -> u32 {
        self.c[i] as u32
    }

    pub fn coeffs(&self, k: usize) -> Vec<u32> {
        self.c[..k].iter().map(|&x| x as u32).collect()
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.c.iter().rposition(|&x| x != 0).unwrap_or(0);
        write!(f, "{:?}", &self.c[..=last])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    pub p: u64,
    pub k: usize,
}

/// The finite field `GF(p^k) = GF(p)[x]/(m(x))` with `m` monic irreducible.
#[derive(Clone)]
pub struct FqField {
    p: u32,
    k: usize,
    modulus: Vec<u32>,
    /// `-m_j mod p` for `j < k`, so that `x^k = sum neg_mod[j] x^j`.
    neg_mod: [u32; K],
    inv_table: Vec<u32>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.k, self.modulus)
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FqField {}

impl FqField {
    /// The prime field `GF(p)`, with modulus `x`.
    pub fn prime(p: u64) -> Result<FqField, FieldError> {
        check_prime(p)?;
        Self::with_modulus(p, vec![0, 1])
    }

    /// Builds `GF(p)[x]/(modulus)` without an irreducibility check.
    /// `modulus` is listed low-degree first and must be monic.
    pub(crate) fn with_modulus(p: u64, modulus: Vec<u32>) -> Result<FqField, FieldError> {
        check_prime(p)?;
        let k = modulus.len() - 1;
        if k == 0 || k > K {
            return Err(FieldError::DegreeCap { k, cap: K });
        }
        if *modulus.last().unwrap() != 1 {
            return Err(FieldError::NotIrreducible);
        }
        let p = p as u32;
        let mut neg_mod = [0u32; K];
        for j in 0..k {
            neg_mod[j] = (p - modulus[j] % p) % p;
        }
        let mut inv_table = vec![0u32; p as usize];
        for a in 1..p {
            inv_table[a as usize] = mod_pow(a, p - 2, p);
        }
        Ok(FqField {
            p,
            k,
            modulus,
            neg_mod,
            inv_table,
        })
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p as u64,
            k: self.k,
        }
    }

    /// Modulus coefficients, low degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `q = p^k`.
    pub fn size(&self) -> BigUint {
        BigUint::from(self.p).pow(self.k as u32)
    }

    pub fn size_u64(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.k as u32)
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }

    pub fn one(&self) -> FqElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> FqElem {
        let mut e = FqElem::ZERO;
        e.c[0] = (v % self.p as u64) as u16;
        e
    }

    pub fn from_i64(&self, v: i64) -> FqElem {
        self.from_u64(v.rem_euclid(self.p as i64) as u64)
    }

    /// Builds an element from basis coordinates (reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FqElem, FieldError> {
        if coeffs.len() > self.k {
            return Err(FieldError::BadElement(format!(
                "{} coordinates for a degree-{} field",
                coeffs.len(),
                self.k
            )));
        }
        let mut e = FqElem::ZERO;
        for (i, &c) in coeffs.iter().enumerate() {
            e.c[i] = (c % self.p) as u16;
        }
        Ok(e)
    }

    /// The generator `x` of the polynomial basis.
    pub fn generator_x(&self) -> FqElem {
        if self.k == 1 {
            // x = -m_0 in GF(p)
            let mut e = FqElem::ZERO;
            e.c[0] = self.neg_mod[0] as u16;
            e
        } else {
            let mut e = FqElem::ZERO;
            e.c[1] = 1;
            e
        }
    }

    pub fn is_one(&self, a: FqElem) -> bool {
        a == self.one()
    }

    /// `Some(r)` when `a` lies in the prime field.
    pub fn prime_residue(&self, a: FqElem) -> Option<u32> {
        if a.c[1..].iter().all(|&x| x == 0) {
            Some(a.c[0] as u32)
        } else {
            None
        }
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.p as u16;
        let mut out = FqElem::ZERO;
        for i in 0..self.k {
            let s = a.c[i] + b.c[i];
            out.c[i] = if s >= p { s - p } else { s };
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.p as u16;
        let mut out = FqElem::ZERO;
        for i in 0..self.k {
            out.c[i] = if a.c[i] >= b.c[i] {
                a.c[i] - b.c[i]
            } else {
                a.c[i] + p - b.c[i]
            };
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        self.sub(FqElem::ZERO, a)
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.p;
        if self.k == 1 {
            let mut out = FqElem::ZERO;
            out.c[0] = ((a.c[0] as u32 * b.c[0] as u32) % p) as u16;
            return out;
        }
        let k = self.k;
        let mut r = [0u32; 2 * K];
        for i in 0..k {
            let ai = a.c[i] as u32;
            if ai == 0 {
                continue;
            }
            for j in 0..k {
                r[i + j] += ai * b.c[j] as u32;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let t = r[i] % p;
            if t == 0 {
                continue;
            }
            let base = i - k;
            for j in 0..k {
                r[base + j] += t * self.neg_mod[j];
            }
        }
        let mut out = FqElem::ZERO;
        for i in 0..k {
            out.c[i] = (r[i] % p) as u16;
        }
        out
    }

    /// Multiplication by a prime-field scalar.
    pub fn scale(&self, a: FqElem, s: u32) -> FqElem {
        let p = self.p;
        let s = s % p;
        let mut out = FqElem::ZERO;
        for i in 0..self.k {
            out.c[i] = ((a.c[i] as u32 * s) % p) as u16;
        }
        out
    }

    pub fn square(&self, a: FqElem) -> FqElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FqElem, mut e: u64) -> FqElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, a: FqElem, e: &BigUint) -> FqElem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(acc, acc);
            if e.bit(i) {
                acc = self.mul(acc, a);
            }
        }
        acc
    }

    /// `a^p`.
    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p as u64)
    }

    /// The unique `b` with `b^p = a`, namely `a^(p^(k-1))`.
    pub fn pth_root(&self, a: FqElem) -> FqElem {
        let mut b = a;
        for _ in 1..self.k {
            b = self.frobenius(b);
        }
        b
    }

    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        if a.is_zero() {
            return None;
        }
        if self.k == 1 {
            let mut out = FqElem::ZERO;
            out.c[0] = self.inv_table[a.c[0] as usize] as u16;
            return Some(out);
        }
        // extended Euclid on GF(p)[x]: find s with s*a ≡ 1 mod m
        let p = self.p;
        let mut r0: Vec<u32> = self.modulus.clone();
        let mut r1: Vec<u32> = a.c[..self.k].iter().map(|&x| x as u32).collect();
        trim(&mut r1);
        let mut s0: Vec<u32> = vec![];
        let mut s1: Vec<u32> = vec![1];
        while r1.len() > 1 {
            let (q, r) = small_divrem(&r0, &r1, p, &self.inv_table);
            let s2 = small_sub(&s0, &small_mul(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r1.is_empty() {
            return None;
        }
        let c_inv = self.inv_table[r1[0] as usize];
        let mut out = FqElem::ZERO;
        for (i, &v) in s1.iter().enumerate() {
            out.c[i] = ((v * c_inv) % p) as u16;
        }
        Some(out)
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Option<FqElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Multiplicative inverse of a prime-field residue.
    pub fn inv_residue(&self, r: u32) -> Option<u32> {
        let r = r % self.p;
        (r != 0).then(|| self.inv_table[r as usize])
    }

    /// Position of `a` in the enumeration order `sum c_i p^i`.
    pub fn index_of(&self, a: FqElem) -> u128 {
        let mut idx = 0u128;
        for i in (0..self.k).rev() {
            idx = idx * self.p as u128 + a.c[i] as u128;
        }
        idx
    }

    pub fn from_index(&self, mut idx: u128) -> FqElem {
        let mut e = FqElem::ZERO;
        for i in 0..self.k {
            e.c[i] = (idx % self.p as u128) as u16;
            idx /= self.p as u128;
        }
        e
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        let mut e = FqElem::ZERO;
        for i in 0..self.k {
            e.c[i] = rng.gen_range(0..self.p) as u16;
        }
        e
    }

    /// Multiplicative order of a nonzero element, given `q - 1` factored.
    pub fn multiplicative_order(&self, a: FqElem, order_bound: u64) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let mut n = order_bound;
        for (l, _) in factor_u64(order_bound) {
            while n.is_multiple_of(l) && self.is_one(self.pow(a, n / l)) {
                n /= l;
            }
        }
        self.is_one(self.pow(a, n)).then_some(n)
    }

    /// An element of multiplicative order exactly `d`.
    ///
    /// Candidates are scanned in enumeration order; the first whose power
    /// `(q-1)/d` has exact order `d` is used.
    pub fn primitive_root_of_unity(&self, d: u64) -> Result<FqElem, FieldError> {
        if d == 0 {
            return Err(FieldError::NoSuchRoot { d, q: self.size().to_string() });
        }
        let q1 = self.size() - 1u32;
        if (&q1 % d) != BigUint::from(0u32) {
            return Err(FieldError::NoSuchRoot { d, q: self.size().to_string() });
        }
        if d == 1 {
            return Ok(self.one());
        }
        let exp = &q1 / d;
        let primes: Vec<u64> = factor_u64(d).into_iter().map(|(l, _)| l).collect();
        let mut idx = 1u128;
        loop {
            let cand = self.pow_big(self.from_index(idx), &exp);
            if primes.iter().all(|&l| !self.is_one(self.pow(cand, d / l))) {
                return Ok(cand);
            }
            idx += 1;
        }
    }

    /// Coordinates as a list of prime-field digits (for serialization).
    pub fn digits(&self, a: FqElem) -> Vec<u32> {
        a.coeffs(self.k)
    }

    pub fn poly(&self, coeffs: Vec<FqElem>) -> Poly {
        Poly::new(coeffs)
    }
}

fn check_prime(p: u64) -> Result<(), FieldError> {
    if !super::is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if p > MAX_CHARACTERISTIC {
        return Err(FieldError::CharacteristicCap {
            p,
            cap: MAX_CHARACTERISTIC,
        });
    }
    Ok(())
}

pub(crate) fn mod_pow(mut b: u32, mut e: u32, m: u32) -> u32 {
    let mut acc = 1u64 % m as u64;
    let mut base = b as u64 % m as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u64;
        }
        base = base * base % m as u64;
        e >>= 1;
    }
    b = acc as u32;
    b
}

/// Prime factorization by trial division.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn small_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    trim(&mut r);
    r
}

fn small_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut r: Vec<u32> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut r);
    r
}

fn small_divrem(a: &[u32], b: &[u32], p: u32, inv: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv[b[db] as usize];
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![0u32; r.len() - db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = (r[r.len() - 1] * lead_inv) % p;
        q[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - (c * bj) % p) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gf4_tables() {
        let f = FqField::with_modulus(2, vec![1, 1, 1]).unwrap();
        let w = f.generator_x();
        assert_eq!(f.mul(w, w), f.add(w, f.one()));
        assert_eq!(f.pow(w, 3), f.one());
        assert_eq!(f.mul(w, f.inv(w).unwrap()), f.one());
    }

    #[test]
    fn prime_field_inverse() {
        let f = FqField::prime(7).unwrap();
        for a in 1..7 {
            let x = f.from_u64(a);
            assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
        }
        assert!(f.inv(f.zero()).is_none());
    }

    #[test]
    fn index_roundtrip() {
        let f = FqField::with_modulus(3, vec![1, 0, 1]).unwrap();
        for i in 0..9u128 {
            assert_eq!(f.index_of(f.from_index(i)), i);
        }
    }

    #[test]
    fn residues_and_roots() {
        let f = FqField::with_modulus(5, vec![2, 0, 1]).unwrap(); // x^2 + 2 irreducible mod 5
        assert_eq!(f.prime_residue(f.from_u64(3)), Some(3));
        assert_eq!(f.prime_residue(f.generator_x()), None);
        let z = f.primitive_root_of_unity(6).unwrap();
        assert_eq!(f.pow(z, 6), f.one());
        assert_ne!(f.pow(z, 2), f.one());
        assert_ne!(f.pow(z, 3), f.one());
        assert_eq!(f.multiplicative_order(f.pow(z, 3), 24), Some(2));
        assert!(matches!(
            f.primitive_root_of_unity(7),
            Err(FieldError::NoSuchRoot { .. })
        ));
        let a = f.random(&mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(f.frobenius(f.pth_root(a)), a);
    }

    #[test]
    fn characteristic_bounds() {
        assert!(matches!(FqField::prime(4), Err(FieldError::NotPrime(4))));
        assert!(matches!(
            FqField::prime(1031),
            Err(FieldError::CharacteristicCap { .. })
        ));
    }
}
