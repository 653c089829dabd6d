//! Plain-text Cayley tables: the first line holds the order `n`, followed by
//! `n` rows of `n` whitespace-separated 0-based indices. Element 0 must be
//! the identity. Blank lines and `#` comments are ignored.

use super::{FiniteGroup, GroupError};

pub(super) fn parse(text: &str) -> Result<FiniteGroup, GroupError> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| GroupError::Parse("empty Cayley table".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| GroupError::Parse(format!("bad order line `{header}`")))?;
    if n == 0 {
        return Err(GroupError::Parse("order must be positive".into()));
    }
    if n > super::MAX_GROUP_ORDER {
        return Err(GroupError::OrderCap {
            order: n as u128,
            cap: super::MAX_GROUP_ORDER,
        });
    }
    let mut table = Vec::with_capacity(n * n);
    for row in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| GroupError::Parse(format!("missing row {row}")))?;
        let before = table.len();
        for tok in line.split_whitespace() {
            let v: u32 = tok
                .parse()
                .map_err(|_| GroupError::Parse(format!("bad entry `{tok}` in row {row}")))?;
            if v as usize >= n {
                return Err(GroupError::Parse(format!("entry {v} out of range in row {row}")));
            }
            table.push(v);
        }
        if table.len() - before != n {
            return Err(GroupError::Parse(format!(
                "row {row} has {} entries, expected {n}",
                table.len() - before
            )));
        }
    }
    if lines.next().is_some() {
        return Err(GroupError::Parse("trailing rows after the table".into()));
    }
    FiniteGroup::from_table(format!("cayley:{n}"), n, table, true)
}

pub(super) fn render(g: &FiniteGroup) -> String {
    let n = g.order();
    let mut out = format!("{n}\n");
    for a in 0..n {
        let row: Vec<String> = (0..n).map(|b| g.mul(a, b).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
