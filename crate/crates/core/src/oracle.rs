//! Independent checks: exhaustive idempotent scans, complete enumeration of
//! central idempotents, a one-sided randomized witness search, and a
//! harness that compares all of them with the verdicts.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{AlgElem, AlgebraError, GroupAlgebra};
use crate::criteria::{
    central_subset_check, decide_central_full, decide_vg_full, CriteriaError, MsVerdict, Witness,
};
use crate::gfq::{poly_factor, task_rng, FqElem, FqField, Poly, DEFAULT_SEED};
use crate::groups::FiniteGroup;
use crate::structure::{block_idempotents, BlockData, StructureError};

/// Default cap on `q^|G|` for exhaustive scans.
pub const DEFAULT_MAX_STATES: u64 = 1 << 24;
/// Default number of random-search trials.
pub const DEFAULT_TRIALS: u64 = 10_000;
/// Block count limit for listing all central idempotents.
pub const MAX_LISTED_BLOCKS: usize = 20;
/// Block count limit for the streaming central witness search.
pub const MAX_STREAMED_BLOCKS: usize = 30;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("search space of {states} states exceeds the budget {budget}")]
    BudgetExceeded { states: String, budget: u64 },
    #[error("{t} blocks exceed the enumeration limit {cap}")]
    TooManyBlocks { t: usize, cap: usize },
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScanBudget {
    pub max_states: u64,
    pub trials: u64,
    pub seed: u64,
}

impl Default for ScanBudget {
    fn default() -> Self {
        ScanBudget {
            max_states: DEFAULT_MAX_STATES,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdempotentReport {
    pub element: AlgElem,
    pub trace: FqElem,
    pub central: bool,
    pub nonzero: bool,
}

impl IdempotentReport {
    pub fn new(element: AlgElem) -> IdempotentReport {
        let central = element.algebra().is_central(&element);
        IdempotentReport {
            trace: element.trace(),
            nonzero: !element.is_zero(),
            central,
            element,
        }
    }

    pub fn is_witness(&self) -> bool {
        self.nonzero && self.trace.is_zero()
    }

    pub fn to_json(&self) -> Value {
        let alg = self.element.algebra();
        json!({
            "coeffs": alg.to_json(&self.element)["coeffs"],
            "trace": alg.field().digits(self.trace),
            "central": self.central,
            "nonzero": self.nonzero,
        })
    }
}

/// Field arithmetic on element codes `0..q` through lookup tables.
struct CodeTables {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    sub: Vec<u8>,
}

impl CodeTables {
    fn new(f: &FqField) -> Option<CodeTables> {
        let q = f.size_u64().filter(|&q| q <= 256)? as usize;
        let elems: Vec<FqElem> = (0..q).map(|i| f.from_index(i as u128)).collect();
        let code = |e: FqElem| f.index_of(e) as u8;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let mut sub = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = code(f.add(elems[a], elems[b]));
                mul[a * q + b] = code(f.mul(elems[a], elems[b]));
                sub[a * q + b] = code(f.sub(elems[a], elems[b]));
            }
        }
        Some(CodeTables { q, add, mul, sub })
    }

    #[inline]
    fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }
    #[inline]
    fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }
    #[inline]
    fn sub(&self, a: u8, b: u8) -> u8 {
        self.sub[a as usize * self.q + b as usize]
    }
}

fn state_count(alg: &GroupAlgebra) -> Option<u128> {
    let q = alg.field().size_u64()? as u128;
    let mut s: u128 = 1;
    for _ in 0..alg.dim() {
        s = s.checked_mul(q)?;
        if s > u64::MAX as u128 {
            return None;
        }
    }
    Some(s)
}

/// Every idempotent of the algebra, by walking all `q^|G|` coefficient
/// vectors. Consecutive vectors differ in one coordinate (a modular q-ary
/// Gray code: step `m -> m+1` bumps digit `v_q(m+1)` by one), and the
/// square is updated in `O(|G|)` per step via
/// `(a + d g)^2 = a^2 + d (g a + a g) + d^2 g^2`.
pub fn scan_all_idempotents(alg: &GroupAlgebra, budget: &ScanBudget) -> Result<Vec<IdempotentReport>, OracleError> {
    let states = state_count(alg);
    if states.is_none_or(|s| s > budget.max_states as u128) {
        return Err(OracleError::BudgetExceeded {
            states: states.map_or_else(|| "> 2^64".to_string(), |s| s.to_string()),
            budget: budget.max_states,
        });
    }
    let f = alg.field();
    let Some(tables) = CodeTables::new(f) else {
        return Ok(scan_direct(alg, states.unwrap() as u64));
    };
    let n = alg.dim();
    let q = tables.q;
    // Fix the top `fixed` digits per parallel chunk.
    let mut fixed = 0;
    let mut chunks = 1usize;
    while fixed < n && chunks < 64 {
        fixed += 1;
        chunks *= q;
    }
    let free = n - fixed;
    let g = alg.group().as_ref();
    let mut codes: Vec<Vec<u8>> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|chunk| scan_chunk(g, &tables, free, chunk))
        .collect();
    codes.sort_unstable();
    Ok(codes
        .into_iter()
        .map(|c| {
            let coeffs = c.iter().map(|&x| f.from_index(x as u128)).collect();
            IdempotentReport::new(alg.element(coeffs).expect("length matches"))
        })
        .collect())
}

fn scan_chunk(g: &FiniteGroup, t: &CodeTables, free: usize, chunk: usize) -> Vec<Vec<u8>> {
    let n = g.order();
    let q = t.q;
    let mut a = vec![0u8; n];
    let mut c = chunk;
    for slot in a.iter_mut().skip(free) {
        *slot = (c % q) as u8;
        c /= q;
    }
    // square of the starting vector
    let mut sq = vec![0u8; n];
    for x in 0..n {
        if a[x] == 0 {
            continue;
        }
        for y in 0..n {
            if a[y] != 0 {
                let z = g.mul(x, y);
                sq[z] = t.add(sq[z], t.mul(a[x], a[y]));
            }
        }
    }
    let mut mismatches = (0..n).filter(|&x| sq[x] != a[x]).count();
    let mut found = Vec::new();
    if mismatches == 0 {
        found.push(a.clone());
    }
    let total = (q as u64).pow(free as u32);
    for m in 1..total {
        let mut j = 0;
        let mut r = m;
        while r % q as u64 == 0 {
            r /= q as u64;
            j += 1;
        }
        let old = a[j];
        let new = ((old as usize + 1) % q) as u8;
        let d = t.sub(new, old);
        // touch every position whose status may change
        let track = |pos: usize, sq: &[u8], a: &[u8]| (sq[pos] != a[pos]) as usize;
        for x in 0..n {
            if a[x] == 0 {
                continue;
            }
            let da = t.mul(d, a[x]);
            for z in [g.mul(j, x), g.mul(x, j)] {
                mismatches -= track(z, &sq, &a);
                sq[z] = t.add(sq[z], da);
                mismatches += track(z, &sq, &a);
            }
        }
        let jj = g.mul(j, j);
        mismatches -= track(jj, &sq, &a);
        sq[jj] = t.add(sq[jj], t.mul(d, d));
        mismatches += track(jj, &sq, &a);
        mismatches -= track(j, &sq, &a);
        a[j] = new;
        mismatches += track(j, &sq, &a);
        if mismatches == 0 {
            found.push(a.clone());
        }
    }
    found
}

/// Fallback for fields too large for lookup tables (then `|G| <= 2`).
fn scan_direct(alg: &GroupAlgebra, states: u64) -> Vec<IdempotentReport> {
    let f = alg.field();
    let n = alg.dim();
    let q = f.size_u64().expect("bounded by the budget") as u128;
    let mut out = Vec::new();
    for s in 0..states as u128 {
        let mut r = s;
        let coeffs: Vec<FqElem> = (0..n)
            .map(|_| {
                let c = f.from_index(r % q);
                r /= q;
                c
            })
            .collect();
        let e = alg.element(coeffs).expect("length matches");
        if e.is_idempotent() {
            out.push(IdempotentReport::new(e));
        }
    }
    out.sort_by_cached_key(|r| r.element.coeffs().iter().map(|&c| f.index_of(c)).collect::<Vec<_>>());
    out
}

/// All `2^t` sums of block idempotents, in subset-mask order.
pub fn enumerate_central_idempotents(blocks: &BlockData) -> Result<Vec<IdempotentReport>, OracleError> {
    let t = blocks.count();
    if t > MAX_LISTED_BLOCKS {
        return Err(OracleError::TooManyBlocks { t, cap: MAX_LISTED_BLOCKS });
    }
    let Some(first) = blocks.idempotents.first() else {
        return Ok(Vec::new());
    };
    let alg = first.algebra();
    Ok((0u32..1 << t)
        .map(|mask| {
            let e = (0..t)
                .filter(|i| mask >> i & 1 == 1)
                .fold(alg.zero(), |acc, i| acc.add(&blocks.idempotents[i]));
            IdempotentReport::new(e)
        })
        .collect())
}

/// Walks all nonempty subsets of the blocks in Gray-code order, tracking
/// the trace of the subset sum, and returns the first one whose sum is a
/// nonzero trace-zero idempotent. Complete for up to
/// [`MAX_STREAMED_BLOCKS`] blocks.
pub fn central_witness_search(blocks: &BlockData) -> Result<Option<(Vec<usize>, IdempotentReport)>, OracleError> {
    let t = blocks.count();
    if t > MAX_STREAMED_BLOCKS {
        return Err(OracleError::TooManyBlocks { t, cap: MAX_STREAMED_BLOCKS });
    }
    let Some(first) = blocks.idempotents.first() else {
        return Ok(None);
    };
    let f = first.algebra().field().clone();
    let traces: Vec<FqElem> = blocks.idempotents.iter().map(AlgElem::trace).collect();
    let mut in_set = vec![false; t];
    let mut trace = FqElem::ZERO;
    for m in 1u64..(1u64 << t) {
        let j = m.trailing_zeros() as usize;
        in_set[j] = !in_set[j];
        trace = if in_set[j] {
            f.add(trace, traces[j])
        } else {
            f.sub(trace, traces[j])
        };
        if trace.is_zero() {
            let subset: Vec<usize> = (0..t).filter(|&i| in_set[i]).collect();
            let alg = first.algebra();
            let e = subset
                .iter()
                .fold(alg.zero(), |acc, &i| acc.add(&blocks.idempotents[i]));
            let report = IdempotentReport::new(e);
            if report.is_witness() && report.element.is_idempotent() {
                return Ok(Some((subset, report)));
            }
        }
    }
    Ok(None)
}

/// Idempotents of the subalgebra `K[a]`: the primitive ones `h_i(a)`
/// for the coprime-interpolants `h_i` of the minimal polynomial.
pub fn subalgebra_primitive_idempotents<R: Rng + ?Sized>(a: &AlgElem, rng: &mut R) -> Vec<AlgElem> {
    let alg = a.algebra();
    let f = alg.field();
    let m = alg.element_min_poly(a);
    let fac = poly_factor(&m, f, rng);
    if fac.factors.len() < 2 {
        return vec![alg.one()];
    }
    let deg = m.degree().unwrap_or(0);
    let mut powers = Vec::with_capacity(deg);
    let mut cur = alg.one();
    for _ in 0..deg {
        let next = cur.mul(a).expect("same algebra");
        powers.push(cur);
        cur = next;
    }
    fac.factors
        .iter()
        .map(|(q, mult)| {
            let mut qm = Poly::one(f);
            for _ in 0..*mult {
                qm = qm.mul(q, f);
            }
            let rest = m.div_exact(&qm, f);
            let (_, s, _) = rest.ext_gcd(&qm, f);
            let h = s.mul(&rest, f).rem(&m, f);
            h.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .fold(alg.zero(), |acc, (j, &c)| acc.add(&powers[j].scale(c)))
        })
        .collect()
}

/// One-sided search: random elements, idempotents of the subalgebras they
/// generate, and a subset-sum search for a trace-zero combination. Finding
/// nothing proves nothing.
pub fn random_idempotent_search(alg: &GroupAlgebra, budget: &ScanBudget) -> Option<IdempotentReport> {
    let f = alg.field().clone();
    let p = f.p();
    for trial in 0..budget.trials {
        let mut rng = task_rng(budget.seed, trial);
        let coeffs = (0..alg.dim()).map(|_| f.random(&mut rng)).collect();
        let a = alg.element(coeffs).expect("length matches");
        let idems = subalgebra_primitive_idempotents(&a, &mut rng);
        if idems.len() < 2 {
            continue;
        }
        // traces of idempotents lie in the prime field
        let Some(traces) = idems
            .iter()
            .map(|e| f.prime_residue(e.trace()))
            .collect::<Option<Vec<u32>>>()
        else {
            continue;
        };
        if let (false, Some(subset)) = central_subset_check(&traces, p) {
            let e = subset.iter().fold(alg.zero(), |acc, &i| acc.add(&idems[i]));
            let report = IdempotentReport::new(e);
            if report.is_witness() && report.element.is_idempotent() {
                return Some(report);
            }
        }
    }
    None
}

/// For an idempotent `e`, the coefficient sum over every class of
/// p-singular elements is zero.
pub fn verify_singular_class_sums(e: &AlgElem, p: u64) -> Result<bool, OracleError> {
    if !e.is_idempotent() {
        return Err(OracleError::NotIdempotent);
    }
    let alg = e.algebra();
    let g = alg.group();
    let f = alg.field();
    Ok(g.classes()
        .iter()
        .filter(|c| g.element_order(c.representative).is_multiple_of(p))
        .all(|c| {
            c.members
                .iter()
                .fold(FqElem::ZERO, |acc, &m| f.add(acc, e.coeff(m)))
                .is_zero()
        }))
}

/// The zero-sum condition by enumerating every tuple `0 <= c_i <= n_i`.
pub fn naive_zero_sum(degrees: &[usize], p: u64) -> Result<(bool, Option<Vec<u64>>), OracleError> {
    let total = degrees
        .iter()
        .try_fold(1u64, |acc, &n| acc.checked_mul(n as u64 + 1))
        .filter(|&t| t <= 1_000_000);
    let Some(total) = total else {
        return Err(OracleError::BudgetExceeded {
            states: "> 1000000".into(),
            budget: 1_000_000,
        });
    };
    for idx in 1..total {
        let mut r = idx;
        let mut c = vec![0u64; degrees.len()];
        // first coordinate most significant, so witnesses come out in
        // lexicographic order
        for i in (0..degrees.len()).rev() {
            let radix = degrees[i] as u64 + 1;
            c[i] = r % radix;
            r /= radix;
        }
        let s: u64 = c.iter().zip(degrees).map(|(&c, &n)| c * n as u64).sum();
        if s.is_multiple_of(p) {
            return Ok((false, Some(c)));
        }
    }
    Ok((true, None))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossReport {
    pub group: String,
    pub p: u64,
    pub seed: u64,
    pub vg: Option<MsVerdict>,
    pub central: Option<MsVerdict>,
    pub central_witness: Option<Vec<usize>>,
    pub scanned_idempotents: Option<usize>,
    pub random_witness_found: Option<bool>,
    /// Idempotents checked against the singular class-sum property.
    pub singular_checks: usize,
    pub checks: Vec<OracleCheck>,
    pub passed: bool,
}

/// Runs both decisions and every applicable oracle and compares them.
pub fn cross_validate(group: &Arc<FiniteGroup>, p: u64, budget: &ScanBudget) -> CrossReport {
    let mut checks = Vec::new();
    let mut check = |name: &str, passed: bool, detail: String| {
        checks.push(OracleCheck {
            name: name.to_string(),
            passed,
            detail,
        })
    };
    let vg = decide_vg_full(group, p, budget.seed);
    let central = decide_central_full(group, p, budget.seed);
    check(
        "decisions",
        vg.is_ok() && central.is_ok(),
        match (&vg, &central) {
            (Err(e), _) | (_, Err(e)) => e.to_string(),
            _ => String::new(),
        },
    );
    let vg = vg.ok();
    let central = central.ok();
    let vg_ms = vg.as_ref().map(|d| d.verdict.is_ms);
    let central_ms = central.as_ref().map(|d| d.verdict.is_ms);
    let mut report = CrossReport {
        group: group.label().to_string(),
        p,
        seed: budget.seed,
        vg: vg.as_ref().map(|d| d.verdict.clone()),
        central: central.as_ref().map(|d| d.verdict.clone()),
        central_witness: None,
        scanned_idempotents: None,
        random_witness_found: None,
        singular_checks: 0,
        checks: Vec::new(),
        passed: false,
    };
    let singular = (group.order() as u64).is_multiple_of(p) && p >= 2;
    let mut singular_ok = true;
    let mut replay = |e: &AlgElem, count: &mut usize| {
        if singular {
            *count += 1;
            singular_ok &= verify_singular_class_sums(e, p).unwrap_or(false);
        }
    };

    // The oracle builds its own algebra and blocks, also for p > |G|.
    let alg = (p >= 2)
        .then(|| GroupAlgebra::over_splitting_field(group.clone(), p).ok())
        .flatten();
    if let Some(alg) = &alg {
        let mut rng = task_rng(budget.seed, crate::criteria::task_id(group.label(), p));
        match block_idempotents(alg, &mut rng).map_err(OracleError::from).and_then(|b| {
            central_witness_search(&b).map(|w| (b, w))
        }) {
            Ok((_, w)) => {
                let exists = w.is_some();
                check(
                    "central_enumeration_matches_verdict",
                    central_ms == Some(!exists),
                    format!("witness exists: {exists}, verdict MS: {central_ms:?}"),
                );
                if let Some((subset, rep)) = &w {
                    replay(&rep.element, &mut report.singular_checks);
                    report.central_witness = Some(subset.clone());
                    check(
                        "vg_not_ms_given_central_witness",
                        vg_ms == Some(false),
                        format!("vg MS: {vg_ms:?}"),
                    );
                }
            }
            Err(e) => check("central_enumeration", false, e.to_string()),
        }

        match scan_all_idempotents(alg, budget) {
            Ok(all) => {
                report.scanned_idempotents = Some(all.len());
                let witnesses = all.iter().filter(|r| r.is_witness()).count();
                if vg_ms == Some(true) {
                    check(
                        "scan_finds_no_witness_when_ms",
                        witnesses == 0,
                        format!("{witnesses} witnesses"),
                    );
                } else if vg_ms == Some(false) {
                    check(
                        "scan_finds_witness_when_not_ms",
                        witnesses > 0,
                        format!("{witnesses} witnesses"),
                    );
                }
                let one = alg.one();
                let closed = all.iter().all(|r| {
                    let c = one.sub(&r.element);
                    all.iter().any(|s| s.element == c)
                });
                check("scan_closed_under_complement", closed, String::new());
                for r in &all {
                    replay(&r.element, &mut report.singular_checks);
                }
            }
            Err(OracleError::BudgetExceeded { .. }) => {}
            Err(e) => check("scan", false, e.to_string()),
        }

        if budget.trials > 0 {
            let found = random_idempotent_search(alg, budget);
            report.random_witness_found = Some(found.is_some());
            if let Some(r) = &found {
                replay(&r.element, &mut report.singular_checks);
                check(
                    "random_witness_only_when_not_ms",
                    vg_ms == Some(false),
                    format!("vg MS: {vg_ms:?}"),
                );
            }
        }
    }

    if let Some(d) = &vg {
        check("vg_witness_valid", verdict_witness_valid(group, &d.verdict), String::new());
    }
    if let Some(c) = &central {
        let valid = match (&c.verdict.witness, &c.blocks) {
            (Some(Witness::Subset { indices }), Some(b)) => {
                let alg = b.idempotents[0].algebra();
                let e = indices.iter().fold(alg.zero(), |acc, &i| acc.add(&b.idempotents[i]));
                e.is_idempotent() && !e.is_zero() && e.trace().is_zero()
            }
            (None, _) => c.verdict.is_ms,
            _ => false,
        };
        check("central_witness_valid", valid, String::new());
    }
    check(
        "singular_class_sums",
        singular_ok,
        format!("{} idempotents replayed", report.singular_checks),
    );
    report.passed = checks.iter().all(|c| c.passed);
    report.checks = checks;
    report
}

/// Arithmetic validity of the witness attached to a `V_G` verdict.
pub fn verdict_witness_valid(group: &FiniteGroup, v: &MsVerdict) -> bool {
    match (&v.witness, v.is_ms) {
        (None, true) => true,
        (Some(Witness::ZeroSum { coefficients }), false) => {
            let Some(deg) = &v.degrees else { return false };
            coefficients.len() == deg.len()
                && coefficients.iter().zip(deg).all(|(&c, &n)| c <= n as u64)
                && coefficients.iter().any(|&c| c > 0)
                && coefficients.iter().zip(deg).map(|(&c, &n)| c * n as u64).sum::<u64>() % v.p == 0
        }
        (
            Some(Witness::Sylow {
                p_elements,
                sylow_order,
                pair,
            }),
            false,
        ) => {
            let elems = group.p_elements(v.p);
            let pair_ok = pair.is_none_or(|(a, b)| {
                elems.contains(&a) && elems.contains(&b) && !elems.contains(&group.mul(a, b))
            });
            *p_elements == elems.len()
                && *sylow_order == group.p_split(v.p).p_part()
                && (*p_elements as u64 != *sylow_order || pair.is_some())
                && pair_ok
        }
        _ => false,
    }
}
