use std::collections::HashMap;

use crate::gfq::is_prime;

use super::{FiniteGroup, GroupError, ASSOCIATIVITY_CHECK_LIMIT, MAX_GROUP_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Cyclic,
    Dihedral,
    Symmetric,
    Alternating,
    Quaternion,
    ElementaryAbelian,
}

impl Family {
    pub fn parse(name: &str) -> Result<Family, GroupError> {
        Ok(match name {
            "cyclic" => Family::Cyclic,
            "dihedral" => Family::Dihedral,
            "symmetric" => Family::Symmetric,
            "alternating" => Family::Alternating,
            "quaternion" | "quaternion8" => Family::Quaternion,
            "elemabelian" | "elementary_abelian" => Family::ElementaryAbelian,
            other => return Err(GroupError::UnknownFamily(other.to_string())),
        })
    }
}

/// Builds one of the builtin families.
///
/// | family        | params | order        |
/// |---------------|--------|--------------|
/// | `cyclic`      | `n`    | `n`          |
/// | `dihedral`    | `n`    | `2n`         |
/// | `symmetric`   | `n`    | `n!`         |
/// | `alternating` | `n`    | `n!/2`       |
/// | `quaternion`  | `[4m]` | `4m` (dicyclic, default 8) |
/// | `elemabelian` | `p, k` | `p^k`        |
pub fn build_builtin(family: &str, params: &[u64]) -> Result<FiniteGroup, GroupError> {
    let family = Family::parse(family)?;
    let one = |name: &str| -> Result<u64, GroupError> {
        match params {
            [n] => Ok(*n),
            _ => Err(GroupError::ParameterOutOfRange(format!(
                "{name} takes exactly one parameter"
            ))),
        }
    };
    match family {
        Family::Cyclic => cyclic(one("cyclic")?),
        Family::Dihedral => dihedral(one("dihedral")?),
        Family::Symmetric => symmetric(one("symmetric")?),
        Family::Alternating => alternating(one("alternating")?),
        Family::Quaternion => match params {
            [] => dicyclic(8),
            [n] => dicyclic(*n),
            _ => Err(GroupError::ParameterOutOfRange(
                "quaternion takes at most one parameter".into(),
            )),
        },
        Family::ElementaryAbelian => match params {
            [p, k] => elementary_abelian(*p, *k),
            _ => Err(GroupError::ParameterOutOfRange(
                "elemabelian takes p and k".into(),
            )),
        },
    }
}

fn cap(order: u128) -> Result<usize, GroupError> {
    if order > MAX_GROUP_ORDER as u128 {
        Err(GroupError::OrderCap {
            order,
            cap: MAX_GROUP_ORDER,
        })
    } else {
        Ok(order as usize)
    }
}

fn finish(label: String, n: usize, table: Vec<u32>) -> Result<FiniteGroup, GroupError> {
    FiniteGroup::from_table(label, n, table, n <= ASSOCIATIVITY_CHECK_LIMIT)
}

fn cyclic(n: u64) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::ParameterOutOfRange("cyclic n must be >= 1".into()));
    }
    let n = cap(n as u128)?;
    let table = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
    finish(format!("cyclic:{n}"), n, table)
}

/// `r^i s^j` has index `i + n*j`.
fn dihedral(n: u64) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::ParameterOutOfRange("dihedral n must be >= 1".into()));
    }
    let order = cap(2 * n as u128)?;
    let n = n as usize;
    let mut table = vec![0u32; order * order];
    for a in 0..order {
        let (i, j) = (a % n, a / n);
        for b in 0..order {
            let (k, l) = (b % n, b / n);
            let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
            table[a * order + b] = (rot + n * ((j + l) % 2)) as u32;
        }
    }
    finish(format!("dihedral:{n}"), order, table)
}

/// Dicyclic group of order `4m`: `a^i x^j` with `a^(2m) = 1`, `x^2 = a^m`,
/// `x a x^-1 = a^-1`. Order 8 is the quaternion group; index order is
/// `1, a, a^2, ..., x, ax, ...`, so for order 8 the element `a^2 = -1` is
/// the unique involution.
fn dicyclic(order: u64) -> Result<FiniteGroup, GroupError> {
    if order < 8 || !order.is_multiple_of(4) {
        return Err(GroupError::ParameterOutOfRange(
            "quaternion order must be a multiple of 4 and at least 8".into(),
        ));
    }
    let order = cap(order as u128)?;
    let m = order / 4;
    let n = 2 * m;
    let mut table = vec![0u32; order * order];
    for a in 0..order {
        let (i, j) = (a % n, a / n);
        for b in 0..order {
            let (k, l) = (b % n, b / n);
            let c = if j == 0 {
                (i + k) % n + n * l
            } else if l == 0 {
                (i + n - k) % n + n
            } else {
                (i + n - k + m) % n
            };
            table[a * order + b] = c as u32;
        }
    }
    finish(format!("quaternion:{order}"), order, table)
}

fn elementary_abelian(p: u64, k: u64) -> Result<FiniteGroup, GroupError> {
    if p < 2 || !is_prime(p) {
        return Err(GroupError::ParameterOutOfRange(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(GroupError::ParameterOutOfRange("exponent must be >= 1".into()));
    }
    let order = (p as u128)
        .checked_pow(k.min(200) as u32)
        .unwrap_or(u128::MAX);
    let n = cap(order)?;
    let (p, k) = (p as usize, k as usize);
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            let (mut x, mut y, mut c, mut w) = (a, b, 0, 1);
            for _ in 0..k {
                c += ((x % p + y % p) % p) * w;
                x /= p;
                y /= p;
                w *= p;
            }
            table[a * n + b] = c as u32;
        }
    }
    finish(format!("elemabelian:{p}:{k}"), n, table)
}


fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

/// All permutations of `0..n` in lexicographic order (identity first).
fn lex_permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..n as u8).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

fn is_even(perm: &[u8]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

/// Product `x * y` acts as "first x, then y".
fn perm_table(elems: &[Vec<u8>]) -> Vec<u32> {
    let index: HashMap<&[u8], u32> = elems
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i as u32))
        .collect();
    let n = elems.len();
    let mut table = vec![0u32; n * n];
    let mut buf = vec![0u8; elems.first().map_or(0, |e| e.len())];
    for (a, x) in elems.iter().enumerate() {
        for (b, y) in elems.iter().enumerate() {
            for (i, slot) in buf.iter_mut().enumerate() {
                *slot = y[x[i] as usize];
            }
            table[a * n + b] = index[buf.as_slice()];
        }
    }
    table
}

fn symmetric(n: u64) -> Result<FiniteGroup, GroupError> {
    if n == 0 || n > 7 {
        return Err(GroupError::ParameterOutOfRange("symmetric n must be in 1..=7".into()));
    }
    let order = cap(factorial(n))?;
    let elems = lex_permutations(n as usize);
    debug_assert_eq!(elems.len(), order);
    finish(format!("symmetric:{n}"), order, perm_table(&elems))
}

fn alternating(n: u64) -> Result<FiniteGroup, GroupError> {
    if n == 0 || n > 7 {
        return Err(GroupError::ParameterOutOfRange("alternating n must be in 1..=7".into()));
    }
    cap(factorial(n).div_ceil(2))?;
    let elems: Vec<Vec<u8>> = lex_permutations(n as usize)
        .into_iter()
        .filter(|p| is_even(p))
        .collect();
    let order = elems.len();
    finish(format!("alternating:{n}"), order, perm_table(&elems))
}
