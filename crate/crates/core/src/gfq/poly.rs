use super::field::{FqElem, FqField};

/// A univariate polynomial over `GF(q)`, coefficients low degree first with
/// trailing zeros trimmed. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<FqElem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FqElem>) -> Poly {
        while coeffs.last().is_some_and(FqElem::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: FqElem) -> Poly {
        Poly::new(vec![c])
    }

    pub fn one(f: &FqField) -> Poly {
        Poly::constant(f.one())
    }

    pub fn x(f: &FqField) -> Poly {
        Poly::new(vec![f.zero(), f.one()])
    }

    pub fn monomial(c: FqElem, degree: usize) -> Poly {
        let mut coeffs = vec![FqElem::ZERO; degree + 1];
        coeffs[degree] = c;
        Poly::new(coeffs)
    }

    /// `x - a`.
    pub fn linear(a: FqElem, f: &FqField) -> Poly {
        Poly::new(vec![f.neg(a), f.one()])
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self, f: &FqField) -> bool {
        self.coeffs.len() == 1 && f.is_one(self.coeffs[0])
    }

    pub fn is_monic(&self, f: &FqField) -> bool {
        self.coeffs.last().is_some_and(|&c| f.is_one(c))
    }

    pub fn lead(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn add(&self, other: &Poly, f: &FqField) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly, f: &FqField) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: FqElem, f: &FqField) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &FqField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Euclidean division. Panics on division by zero.
    pub fn divrem(&self, divisor: &Poly, f: &FqField) -> (Poly, Poly) {
        let db = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.lead()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![FqElem::ZERO; rem.len() - db];
        for shift in (0..quot.len()).rev() {
            let top = rem[shift + db];
            if top.is_zero() {
                continue;
            }
            let c = f.mul(top, lead_inv);
            quot[shift] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = f.sub(rem[shift + j], f.mul(c, d));
            }
        }
        rem.truncate(db);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Poly, f: &FqField) -> Poly {
        self.divrem(divisor, f).1
    }

    /// Exact quotient; debug-asserts a zero remainder.
    pub fn div_exact(&self, divisor: &Poly, f: &FqField) -> Poly {
        let (q, r) = self.divrem(divisor, f);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self, f: &FqField) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = f.inv(self.lead()).unwrap();
        self.scale(inv, f)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly, f: &FqField) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly, f: &FqField) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, f);
            let s2 = s0.sub(&q.mul(&s1, f), f);
            let t2 = t0.sub(&q.mul(&t1, f), f);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead()).unwrap();
        (r0.scale(inv, f), s0.scale(inv, f), t0.scale(inv, f))
    }

    pub fn derivative(&self, f: &FqField) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.scale(c, (i as u64 % f.p()) as u32))
                .collect(),
        )
    }

    pub fn eval(&self, x: FqElem, f: &FqField) -> FqElem {
        self.coeffs
            .iter()
            .rev()
            .fold(FqElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn mulmod(&self, other: &Poly, modulus: &Poly, f: &FqField) -> Poly {
        self.mul(other, f).rem(modulus, f)
    }

    pub fn powmod(&self, mut e: u64, modulus: &Poly, f: &FqField) -> Poly {
        let mut base = self.rem(modulus, f);
        let mut acc = Poly::one(f).rem(modulus, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, modulus, f);
            }
            base = base.mulmod(&base, modulus, f);
            e >>= 1;
        }
        acc
    }

    /// `self^q mod modulus` via `k` successive p-th powers.
    pub fn frobenius_mod(&self, modulus: &Poly, f: &FqField) -> Poly {
        let mut h = self.rem(modulus, f);
        for _ in 0..f.k() {
            h = h.powmod(f.p(), modulus, f);
        }
        h
    }

    /// For `self = g(x^p)` returns the `h` with `h^p = self`.
    pub fn pth_root(&self, f: &FqField) -> Poly {
        let p = f.p() as usize;
        debug_assert!(self
            .coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i % p == 0 || c.is_zero()));
        Poly::new(
            self.coeffs
                .iter()
                .step_by(p)
                .map(|&c| f.pth_root(c))
                .collect(),
        )
    }

    /// Comparison key: degree, then coordinates low degree first.
    pub fn sort_key(&self, f: &FqField) -> (usize, Vec<u128>) {
        (
            self.coeffs.len(),
            self.coeffs.iter().map(|&c| f.index_of(c)).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FqField {
        FqField::prime(p).unwrap()
    }

    fn poly(f: &FqField, c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| f.from_i64(v)).collect())
    }

    #[test]
    fn divrem_identity() {
        let f = gf(7);
        let a = poly(&f, &[3, 1, 4, 1, 5, 2]);
        let b = poly(&f, &[1, 0, 2]);
        let (q, r) = a.divrem(&b, &f);
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(q.mul(&b, &f).add(&r, &f), a);
    }

    #[test]
    fn gcd_and_bezout() {
        let f = gf(5);
        // (x-1)(x-2) and (x-1)(x-3)
        let a = poly(&f, &[2, -3, 1]);
        let b = poly(&f, &[3, -4, 1]);
        let (g, s, t) = a.ext_gcd(&b, &f);
        assert_eq!(g, poly(&f, &[-1, 1]));
        assert_eq!(s.mul(&a, &f).add(&t.mul(&b, &f), &f), g);
        assert_eq!(a.gcd(&b, &f), g);
    }

    #[test]
    fn derivative_in_char_p() {
        let f = gf(3);
        let a = poly(&f, &[1, 0, 0, 1]); // x^3 + 1
        assert!(a.derivative(&f).is_zero());
        assert_eq!(a.pth_root(&f), poly(&f, &[1, 1]));
    }

    #[test]
    fn powmod_matches_repeated_multiplication() {
        let f = gf(3);
        let m = poly(&f, &[2, 1, 0, 1]);
        let x = Poly::x(&f);
        let mut acc = Poly::one(&f);
        for _ in 0..11 {
            acc = acc.mulmod(&x, &m, &f);
        }
        assert_eq!(x.powmod(11, &m, &f), acc);
    }
}
