//! Group-spec strings and the batch catalog runner.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::criteria::{implication_check, CriteriaError, ImplicationReport, MsVerdict, VERSION};
use crate::gfq::FieldError;
use crate::groups::{build_builtin, FiniteGroup, GroupError};
use crate::oracle::{cross_validate, CrossReport, ScanBudget};
use crate::structure::BlockSummary;

/// Default upper bound for `catalog --max-order`.
pub const DEFAULT_MAX_ORDER: usize = 64;

/// Parses a group spec:
/// `cyclic:n`, `dihedral:n`, `symmetric:n`, `alternating:n`,
/// `quaternion:8`, `elemabelian:p:k`, `product(A,B)`, `perm:<cycles>`,
/// `cayley:@path`.
pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup, GroupError> {
    let spec = spec.trim();
    if let Some(inner) = spec.strip_prefix("product(") {
        let inner = inner
            .strip_suffix(')')
            .ok_or_else(|| GroupError::Parse(format!("unbalanced `{spec}`")))?;
        let (a, b) = split_top_level(inner)?;
        let a = parse_group_spec(a)?;
        let b = parse_group_spec(b)?;
        return a.direct_product(&b);
    }
    if let Some(gens) = spec.strip_prefix("perm:") {
        return FiniteGroup::from_permutations(gens);
    }
    if let Some(rest) = spec.strip_prefix("cayley:") {
        let path = rest
            .strip_prefix('@')
            .ok_or_else(|| GroupError::Parse("expected cayley:@path".into()))?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| GroupError::Parse(format!("cannot read {path}: {e}")))?;
        return Ok(FiniteGroup::from_cayley_text(&text)?.with_label(spec));
    }
    let mut parts = spec.split(':');
    let family = parts.next().unwrap_or_default();
    let params = parts
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| GroupError::Parse(format!("bad parameter `{s}` in `{spec}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    build_builtin(family, &params)
}

fn split_top_level(s: &str) -> Result<(&str, &str), GroupError> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Ok((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    Err(GroupError::Parse(format!("expected two factors in `product({s})`")))
}

/// Spec strings of the builtin catalog up to `max_order`, sorted by order
/// and then by spec.
pub fn catalog_specs(max_order: usize) -> Vec<String> {
    let mut out: Vec<(usize, String)> = Vec::new();
    let mut add = |order: usize, s: String| {
        if order <= max_order {
            out.push((order, s));
        }
    };
    for n in 1..=max_order {
        add(n, format!("cyclic:{n}"));
    }
    for n in 3..=max_order / 2 {
        add(2 * n, format!("dihedral:{n}"));
    }
    for p in [2usize, 3, 5, 7] {
        let mut order = p * p;
        let mut k = 2;
        while order <= max_order {
            add(order, format!("elemabelian:{p}:{k}"));
            order *= p;
            k += 1;
        }
    }
    add(6, "symmetric:3".into());
    add(24, "symmetric:4".into());
    add(12, "alternating:4".into());
    add(8, "quaternion:8".into());
    // abelian groups C_a x C_b with a | b that are neither cyclic nor
    // elementary abelian
    for a in 2..=max_order {
        for b in (a..=max_order / a).filter(|b| b % a == 0) {
            let elementary = a == b && crate::gfq::is_prime(a as u64);
            if !elementary {
                add(a * b, format!("product(cyclic:{a},cyclic:{b})"));
            }
        }
    }
    // C_n x Q with a nonabelian factor
    for (q, order) in [("symmetric:3", 6), ("quaternion:8", 8), ("dihedral:4", 8), ("alternating:4", 12), ("dihedral:5", 10)] {
        for n in [2usize, 3, 5] {
            add(n * order, format!("product(cyclic:{n},{q})"));
        }
    }
    out.sort();
    out.dedup();
    out.into_iter().map(|(_, s)| s).collect()
}

/// One catalog line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub group: String,
    pub order: usize,
    pub p: u64,
    pub vg: Option<MsVerdict>,
    pub central: Option<MsVerdict>,
    pub blocks: Option<BlockSummary>,
    pub degrees: Option<Vec<usize>>,
    pub implications_passed: bool,
    pub oracle_passed: bool,
    pub oracle_hash: String,
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub seed: u64,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

/// Hex SHA-256 of the report's JSON serialization.
pub fn oracle_hash(report: &CrossReport) -> String {
    let json = serde_json::to_string(report).expect("report serializes");
    Sha256::digest(json.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Full analysis of one catalog entry, also returning the raw reports.
pub fn run_entry(group: &Arc<FiniteGroup>, p: u64, budget: &ScanBudget, timing: bool) -> (ResultRecord, CrossReport, ImplicationReport) {
    let start = Instant::now();
    let cross = cross_validate(group, p, budget);
    let implications = implication_check(group, p, budget.seed);
    // A degree beyond the field cap is a documented limit, not a failure.
    let capped = match crate::criteria::decide_vg(group, p, budget.seed) {
        Err(CriteriaError::Field(e @ FieldError::DegreeCap { .. })) => Some(e.to_string()),
        _ => None,
    };
    let error = capped.clone().or_else(|| {
        cross
            .checks
            .iter()
            .find(|c| c.name == "decisions" && !c.passed)
            .map(|c| c.detail.clone())
    });
    let consistent = capped.is_some() || (cross.passed && implications.passed);
    let record = ResultRecord {
        group: group.label().to_string(),
        order: group.order(),
        p,
        degrees: cross.vg.as_ref().and_then(|v| v.degrees.clone()),
        blocks: cross.central.as_ref().and_then(|v| v.blocks.clone()),
        vg: cross.vg.clone(),
        central: cross.central.clone(),
        implications_passed: implications.passed,
        oracle_passed: cross.passed,
        oracle_hash: oracle_hash(&cross),
        consistent,
        error,
        seed: budget.seed,
        version: VERSION.to_string(),
        timing_ms: timing.then(|| start.elapsed().as_millis() as u64),
    };
    (record, cross, implications)
}

/// Runs every catalog group against every prime, in canonical order.
pub fn run_catalog(max_order: usize, primes: &[u64], budget: &ScanBudget, timing: bool) -> Result<Vec<ResultRecord>, GroupError> {
    let groups = catalog_specs(max_order)
        .iter()
        .map(|s| parse_group_spec(s).map(Arc::new))
        .collect::<Result<Vec<_>, _>>()?;
    let tasks: Vec<(Arc<FiniteGroup>, u64)> = groups
        .iter()
        .flat_map(|g| primes.iter().map(move |&p| (g.clone(), p)))
        .collect();
    Ok(tasks
        .par_iter()
        .map(|(g, p)| run_entry(g, *p, budget, timing).0)
        .collect())
}

/// Fixed-width summary table, one row per record.
pub fn summary_table(records: &[ResultRecord]) -> String {
    let verdict = |v: &Option<MsVerdict>| match v {
        Some(v) if v.is_ms => "MS",
        Some(_) => "NOT MS",
        None => "error",
    };
    let mut out = format!("{:<40} {:>5} {:>3} {:>7} {:>7} {:>6}\n", "group", "order", "p", "V_G", "central", "ok");
    for r in records {
        out.push_str(&format!(
            "{:<40} {:>5} {:>3} {:>7} {:>7} {:>6}\n",
            r.group,
            r.order,
            r.p,
            verdict(&r.vg),
            verdict(&r.central),
            if r.consistent { "yes" } else { "NO" }
        ));
    }
    let bad = records.iter().filter(|r| !r.consistent).count();
    out.push_str(&format!("{} records, {} inconsistent\n", records.len(), bad));
    out
}
