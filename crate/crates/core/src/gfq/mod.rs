//! Finite fields `GF(p^k)`, polynomials over them, factorization and dense
//! linear algebra.

mod factor;
mod field;
mod matrix;
mod poly;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::groups::FiniteGroup;

pub use factor::{distinct_degree, equal_degree, is_irreducible, poly_factor, squarefree, Factorization};
pub use field::{factor_u64, FieldSpec, FqElem, FqField, MAX_CHARACTERISTIC, MAX_EXTENSION_DEGREE};
pub use matrix::{mat_kernel, min_poly_matrix, KrylovBasis, MatFq};
pub use poly::Poly;

/// Default seed for every randomized routine.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Environment variable that overrides [`DEFAULT_SEED`].
pub const SEED_ENV: &str = "MSALG_SEED";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("extension degree {k} exceeds the cap {cap}")]
    DegreeCap { k: usize, cap: usize },
    #[error("modulus is not irreducible")]
    NotIrreducible,
    #[error("bad field element: {0}")]
    BadElement(String),
    #[error("no primitive {d}-th root of unity in a field of size {q}")]
    NoSuchRoot { d: u64, q: String },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {p} exceeds the cap {cap}")]
    CharacteristicCap { p: u64, cap: u64 },
    #[error("{p} and {d} are not coprime")]
    NotCoprime { p: u64, d: u64 },
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest `k >= 1` with `p^k = 1 (mod d)`.
pub fn order_mod(p: u64, d: u64) -> Result<usize, FieldError> {
    if d == 0 || gcd(p, d) != 1 {
        return Err(FieldError::NotCoprime { p, d });
    }
    if d == 1 {
        return Ok(1);
    }
    let base = p % d;
    let mut acc = base;
    let mut k = 1;
    while acc != 1 {
        acc = ((acc as u128 * base as u128) % d as u128) as u64;
        k += 1;
    }
    Ok(k)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `GF(p^k)` with the lexicographically smallest monic irreducible modulus,
/// comparing coefficients from the constant term upward.
pub fn make_field(p: u64, k: usize) -> Result<FqField, FieldError> {
    if k == 0 || k > MAX_EXTENSION_DEGREE {
        return Err(FieldError::DegreeCap {
            k,
            cap: MAX_EXTENSION_DEGREE,
        });
    }
    let base = FqField::prime(p)?;
    if k == 1 {
        return Ok(base);
    }
    let p32 = p as u32;
    // digits[0] is the constant term and varies slowest.
    let mut digits = vec![0u32; k];
    digits[0] = 1; // a zero constant term means x divides the candidate
    loop {
        let mut coeffs: Vec<FqElem> = digits.iter().map(|&d| base.from_u64(d as u64)).collect();
        coeffs.push(base.one());
        if is_irreducible(&Poly::new(coeffs), &base) {
            let mut modulus = digits.clone();
            modulus.push(1);
            return FqField::with_modulus(p, modulus);
        }
        // increment with the last digit least significant
        let mut i = k - 1;
        loop {
            digits[i] += 1;
            if digits[i] < p32 {
                break;
            }
            digits[i] = 0;
            assert!(i > 0, "an irreducible polynomial of every degree exists");
            i -= 1;
        }
    }
}

/// The field `GF(p^k)` with `k = order_mod(p, d)`, `d` the p'-part of `|G|`.
pub fn splitting_field_for(group: &FiniteGroup, p: u64) -> Result<FqField, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    let split = group.p_split(p);
    make_field(p, order_mod(p, split.d)?)
}

/// Seed from `MSALG_SEED` if set and parseable, else [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Independent deterministic stream for task `task` under `seed`.
pub fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::build_builtin;
    use rand::Rng;

    #[test]
    fn order_mod_examples() {
        assert_eq!(order_mod(3, 2), Ok(1));
        assert_eq!(order_mod(5, 6), Ok(2));
        assert_eq!(order_mod(2, 3), Ok(2));
        assert_eq!(order_mod(7, 1), Ok(1));
        assert!(matches!(order_mod(3, 6), Err(FieldError::NotCoprime { .. })));
    }

    #[test]
    fn make_field_examples() {
        assert_eq!(make_field(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(make_field(2, 2).unwrap().modulus(), &[1, 1, 1]);
        // x^2 + 1 is irreducible over GF(3) and has the smallest constant term
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
        // 1 + x^2 + x^3 beats 1 + x + x^3 on the x coefficient
        assert_eq!(make_field(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
        assert!(matches!(make_field(2, 33), Err(FieldError::DegreeCap { .. })));
    }

    /// Brute-force oracle: smallest candidate with no nontrivial factor,
    /// found by trial division against every monic polynomial of lower degree.
    #[test]
    fn make_field_matches_trial_division() {
        for (p, k) in [(2u64, 4usize), (3, 3), (5, 2), (2, 5), (3, 4)] {
            let base = FqField::prime(p).unwrap();
            let count = p.pow(k as u32);
            let digits_of = |n: u64, len: usize| -> Vec<u64> {
                let mut v = vec![0; len];
                let mut n = n;
                for i in (0..len).rev() {
                    v[i] = n % p;
                    n /= p;
                }
                v
            };
            let found = (0..count).find_map(|n| {
                let mut c: Vec<FqElem> = digits_of(n, k).iter().map(|&d| base.from_u64(d)).collect();
                c.push(base.one());
                let cand = Poly::new(c);
                let reducible = (1..=k / 2).any(|dd| {
                    (0..p.pow(dd as u32)).any(|m| {
                        let mut c: Vec<FqElem> =
                            digits_of(m, dd).iter().map(|&d| base.from_u64(d)).collect();
                        c.push(base.one());
                        cand.rem(&Poly::new(c), &base).is_zero()
                    })
                });
                (!reducible).then(|| {
                    let mut m: Vec<u32> = digits_of(n, k).iter().map(|&d| d as u32).collect();
                    m.push(1);
                    m
                })
            });
            assert_eq!(make_field(p, k).unwrap().modulus(), found.unwrap().as_slice());
        }
    }

    #[test]
    fn splitting_fields() {
        let s3 = build_builtin("symmetric", &[3]).unwrap();
        let q8 = build_builtin("quaternion", &[8]).unwrap();
        let c8 = build_builtin("cyclic", &[8]).unwrap();
        assert_eq!(splitting_field_for(&s3, 5).unwrap().spec(), FieldSpec { p: 5, k: 2 });
        assert_eq!(splitting_field_for(&q8, 3).unwrap().spec(), FieldSpec { p: 3, k: 2 });
        assert_eq!(splitting_field_for(&c8, 2).unwrap().spec(), FieldSpec { p: 2, k: 1 });
        let f = splitting_field_for(&s3, 5).unwrap();
        let w = f.primitive_root_of_unity(6).unwrap();
        assert_eq!(f.multiplicative_order(w, 24), Some(6));
    }

    #[test]
    fn large_extension_degrees() {
        // criterion-scale fields: C29 at p=2 and C31 at p=3
        assert_eq!(order_mod(2, 29), Ok(28));
        assert_eq!(order_mod(3, 31), Ok(30));
        let f = make_field(2, 28).unwrap();
        assert_eq!(f.k(), 28);
        let w = f.primitive_root_of_unity(29).unwrap();
        assert!(!f.is_one(w));
        assert!(f.is_one(f.pow(w, 29)));
    }

    #[test]
    fn task_streams_differ_and_repeat() {
        let a: u64 = task_rng(1, 0).gen();
        let b: u64 = task_rng(1, 1).gen();
        let c: u64 = task_rng(1, 0).gen();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }
}
