use std::collections::{HashMap, VecDeque};

use super::{FiniteGroup, GroupError, ASSOCIATIVITY_CHECK_LIMIT, MAX_GROUP_ORDER};

/// A permutation of `0..degree` stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Permutation {
        Permutation((0..degree).collect())
    }

    /// "First self, then other".
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    fn extend_to(&mut self, degree: usize) {
        let n = self.0.len();
        self.0.extend(n..degree);
    }
}

/// Parses comma-separated cycle products such as `(1 2 3)(4 5), (2 3)`.
///
/// Points are 1-based. Inside a cycle, points may be separated by spaces or
/// commas. Empty generators (e.g. a trailing comma) are ignored, and `()` is
/// the identity. All permutations are padded to the largest point used.
pub fn parse_permutations(text: &str) -> Result<Vec<Permutation>, GroupError> {
    let mut gens: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut current: Vec<Vec<usize>> = Vec::new();
    let mut cycle: Option<Vec<usize>> = None;
    let mut number = String::new();
    let mut max_point = 0usize;

    let flush_number = |number: &mut String,
                        cycle: &mut Option<Vec<usize>>,
                        max_point: &mut usize|
     -> Result<(), GroupError> {
        if number.is_empty() {
            return Ok(());
        }
        let v: usize = number
            .parse()
            .map_err(|_| GroupError::Parse(format!("bad point `{number}`")))?;
        if v == 0 {
            return Err(GroupError::Parse("points are 1-based".into()));
        }
        if v > 64 {
            return Err(GroupError::Parse(format!("point {v} exceeds 64")));
        }
        *max_point = (*max_point).max(v);
        cycle
            .as_mut()
            .ok_or_else(|| GroupError::Parse("point outside of a cycle".into()))?
            .push(v - 1);
        number.clear();
        Ok(())
    };

    for ch in text.chars() {
        match ch {
            '(' => {
                if cycle.is_some() {
                    return Err(GroupError::Parse("nested parentheses".into()));
                }
                cycle = Some(Vec::new());
            }
            ')' => {
                flush_number(&mut number, &mut cycle, &mut max_point)?;
                let c = cycle
                    .take()
                    .ok_or_else(|| GroupError::Parse("unbalanced `)`".into()))?;
                let mut sorted = c.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != c.len() {
                    return Err(GroupError::Parse("repeated point in a cycle".into()));
                }
                current.push(c);
            }
            ',' if cycle.is_none() => {
                gens.push(std::mem::take(&mut current));
            }
            ',' => flush_number(&mut number, &mut cycle, &mut max_point)?,
            c if c.is_ascii_digit() => {
                if cycle.is_none() {
                    return Err(GroupError::Parse("point outside of a cycle".into()));
                }
                number.push(c);
            }
            c if c.is_whitespace() => flush_number(&mut number, &mut cycle, &mut max_point)?,
            c => return Err(GroupError::Parse(format!("unexpected character `{c}`"))),
        }
    }
    if cycle.is_some() {
        return Err(GroupError::Parse("unclosed `(`".into()));
    }
    gens.push(current);

    let mut perms = Vec::new();
    for cycles in gens {
        if cycles.is_empty() {
            continue;
        }
        // cycles are applied left to right
        let mut p = Permutation::identity(max_point);
        for c in cycles {
            let mut cyc = Permutation::identity(max_point);
            for (i, &a) in c.iter().enumerate() {
                cyc.0[a] = c[(i + 1) % c.len()];
            }
            p = p.then(&cyc);
        }
        perms.push(p);
    }
    if perms.is_empty() {
        return Err(GroupError::Parse("no generators".into()));
    }
    Ok(perms)
}

/// Breadth-first closure under right multiplication by generators. Elements
/// are numbered in discovery order with the identity first.
pub(super) fn closure(label: String, generators: &[Permutation]) -> Result<FiniteGroup, GroupError> {
    let degree = generators.iter().map(Permutation::degree).max().unwrap_or(0);
    let gens: Vec<Permutation> = generators
        .iter()
        .cloned()
        .map(|mut g| {
            g.extend_to(degree);
            g
        })
        .collect();
    let id = Permutation::identity(degree);
    let mut elems = vec![id.clone()];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(id, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let next = elems[i].then(g);
            if !index.contains_key(&next) {
                if elems.len() == MAX_GROUP_ORDER {
                    return Err(GroupError::OrderCap {
                        order: MAX_GROUP_ORDER as u128 + 1,
                        cap: MAX_GROUP_ORDER,
                    });
                }
                index.insert(next.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(next);
            }
        }
    }
    let n = elems.len();
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = index[&elems[a].then(&elems[b])] as u32;
        }
    }
    FiniteGroup::from_table(label, n, table, n <= ASSOCIATIVITY_CHECK_LIMIT)
}

pub(super) fn closure_from_text(text: &str) -> Result<FiniteGroup, GroupError> {
    let gens = parse_permutations(text)?;
    closure(format!("perm:{}", text.trim()), &gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_simple() {
        let g = parse_permutations("(1 2 3)(4 5), (2 3)").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].0, vec![1, 2, 0, 4, 3]);
        assert_eq!(g[1].0, vec![0, 2, 1, 3, 4]);
        let g = parse_permutations("(1,2,3)").unwrap();
        assert_eq!(g[0].0, vec![1, 2, 0]);
    }

    #[test]
    fn parse_errors() {
        for bad in ["(1 2", "1 2)", "((1 2))", "(1 1)", "(0 1)", "(a b)", ""] {
            assert!(parse_permutations(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn closure_orders() {
        assert_eq!(FiniteGroup::from_permutations("(1 2)").unwrap().order(), 2);
        let c6 = FiniteGroup::from_permutations("(1 2 3)(4 5), ").unwrap();
        assert_eq!(c6.order(), 6);
        assert!(c6.is_abelian());
        assert!((0..6).any(|g| c6.element_order(g) == 6));
        let s3 = FiniteGroup::from_permutations("(1 2), (1 2 3)").unwrap();
        assert_eq!(s3.order(), 6);
        let sizes: Vec<usize> = s3.classes().iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(FiniteGroup::from_permutations("()").unwrap().order(), 1);
    }

    #[test]
    fn closure_cap() {
        // S7 has 5040 elements
        assert!(matches!(
            FiniteGroup::from_permutations("(1 2), (1 2 3 4 5 6 7)"),
            Err(GroupError::OrderCap { .. })
        ));
    }
}
