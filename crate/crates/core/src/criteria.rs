//! Decision procedures for `V_G` (the trace-zero hyperplane of `KG`) and
//! `V_G ∩ Z(KG)` being Mathieu subspaces.

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::algebra::{AlgebraError, GroupAlgebra};
use crate::gfq::{is_prime, splitting_field_for, task_rng, FieldError, FieldSpec};
use crate::groups::{FiniteGroup, GroupError};
use crate::structure::{block_idempotents, wedderburn_degrees, BlockData, BlockSummary, StructureError, WedderburnData};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CriteriaError {
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("block dimensions sum to {sum}, expected {order}")]
    DimsMismatch { sum: usize, order: usize },
    #[error("{0} is neither 0 nor a prime")]
    BadCharacteristic(u64),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Subject {
    #[serde(rename = "VG")]
    Vg,
    #[serde(rename = "VG_CENTRAL")]
    VgCentral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    CharZeroOrLargeP,
    ZeroSumHolds,
    ZeroSumFails,
    NoNormalSylow,
    SubsetSumOk,
    SubsetSumZero,
    PGroupLocal,
}

impl Reason {
    pub fn is_ms(self) -> bool {
        matches!(
            self,
            Reason::CharZeroOrLargeP | Reason::ZeroSumHolds | Reason::SubsetSumOk | Reason::PGroupLocal
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `0 <= c_i <= n_i`, not all zero, `sum c_i n_i = 0 (mod p)`.
    ZeroSum { coefficients: Vec<u64> },
    /// 0-based block indices whose traces sum to zero.
    Subset { indices: Vec<usize> },
    /// The p-elements do not form a subgroup: either their number differs
    /// from the Sylow order, or `pair` multiplies to a non-p-element.
    Sylow {
        p_elements: usize,
        sylow_order: u64,
        pair: Option<(usize, usize)>,
    },
}

/// Where the degree list was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DegreeSource {
    #[serde(rename = "G")]
    Group,
    #[serde(rename = "G/H")]
    Quotient,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MsVerdict {
    pub subject: Subject,
    pub group: String,
    pub order: usize,
    pub p: u64,
    pub field: Option<FieldSpec>,
    pub is_ms: bool,
    pub reason: Reason,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees_computed_on: Option<DegreeSource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<BlockSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idempotents: Option<Vec<Value>>,
    pub seed: u64,
    pub version: String,
}

impl MsVerdict {
    fn new(subject: Subject, g: &FiniteGroup, p: u64, seed: u64, reason: Reason) -> MsVerdict {
        MsVerdict {
            subject,
            group: g.label().to_string(),
            order: g.order(),
            p,
            field: None,
            is_ms: reason.is_ms(),
            reason,
            witness: None,
            degrees: None,
            degrees_computed_on: None,
            blocks: None,
            idempotents: None,
            seed,
            version: VERSION.to_string(),
        }
    }
}

/// Stable per-(group, p) stream id, so results do not depend on the order
/// in which a batch is processed.
pub fn task_id(label: &str, p: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes().chain(p.to_le_bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn rng_for(g: &FiniteGroup, p: u64, seed: u64) -> ChaCha8Rng {
    task_rng(seed, task_id(g.label(), p))
}

fn check_characteristic(p: u64) -> Result<(), CriteriaError> {
    if p == 0 || is_prime(p) {
        Ok(())
    } else {
        Err(CriteriaError::BadCharacteristic(p))
    }
}

/// Zero-sum condition: no tuple `0 <= c_i <= n_i`, not all zero, has
/// `sum c_i n_i = 0 (mod p)`. Equivalently the sequence holding `n_i`
/// copies of each `n_i mod p` is zero-sum free.
///
/// DP over states (residue, some c_i > 0) with per-layer back-pointers.
pub fn zero_sum_condition(degrees: &[usize], p: u64) -> (bool, Option<Vec<u64>>) {
    assert!(p >= 2);
    let pu = p as usize;
    let idx = |r: usize, nz: bool| r * 2 + nz as usize;
    // layers[i][state] = (previous state, c_i)
    let mut layers: Vec<Vec<Option<(usize, u64)>>> = Vec::with_capacity(degrees.len());
    let mut reach = vec![false; 2 * pu];
    reach[idx(0, false)] = true;
    for &n in degrees {
        let mut next = vec![false; 2 * pu];
        let mut back = vec![None; 2 * pu];
        // c = p already covers every residue with the nonzero flag set
        let cmax = (n as u64).min(p);
        for r in 0..pu {
            for nz in [false, true] {
                if !reach[idx(r, nz)] {
                    continue;
                }
                for c in 0..=cmax {
                    let r2 = ((r as u64 + c * n as u64) % p) as usize;
                    let s2 = idx(r2, nz || c > 0);
                    if !next[s2] {
                        next[s2] = true;
                        back[s2] = Some((idx(r, nz), c));
                    }
                }
            }
        }
        layers.push(back);
        reach = next;
    }
    if !reach[idx(0, true)] {
        return (true, None);
    }
    let mut coeffs = vec![0u64; degrees.len()];
    let mut state = idx(0, true);
    for i in (0..degrees.len()).rev() {
        let (prev, c) = layers[i][state].expect("reachable state has a back-pointer");
        coeffs[i] = c;
        state = prev;
    }
    (false, Some(coeffs))
}

/// Every nonempty subset of `residues` has nonzero sum mod `p`; otherwise a
/// 0-based witness subset.
pub fn central_subset_check(residues: &[u32], p: u64) -> (bool, Option<Vec<usize>>) {
    assert!(p >= 2);
    let pu = p as usize;
    let idx = |r: usize, nz: bool| r * 2 + nz as usize;
    let mut layers: Vec<Vec<Option<(usize, bool)>>> = Vec::with_capacity(residues.len());
    let mut reach = vec![false; 2 * pu];
    reach[idx(0, false)] = true;
    for &t in residues {
        let t = (t as u64 % p) as usize;
        let mut next = vec![false; 2 * pu];
        let mut back = vec![None; 2 * pu];
        for r in 0..pu {
            for nz in [false, true] {
                if !reach[idx(r, nz)] {
                    continue;
                }
                for take in [false, true] {
                    let r2 = if take { (r + t) % pu } else { r };
                    let s2 = idx(r2, nz || take);
                    if !next[s2] {
                        next[s2] = true;
                        back[s2] = Some((idx(r, nz), take));
                    }
                }
            }
        }
        layers.push(back);
        reach = next;
    }
    if !reach[idx(0, true)] {
        return (true, None);
    }
    let mut subset = Vec::new();
    let mut state = idx(0, true);
    for i in (0..residues.len()).rev() {
        let (prev, take) = layers[i][state].expect("reachable state has a back-pointer");
        if take {
            subset.push(i);
        }
        state = prev;
    }
    subset.reverse();
    (false, Some(subset))
}

pub fn valuation(mut n: u64, p: u64) -> u32 {
    assert!(n > 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// The block-dimension form of the central criterion: for every nonempty
/// `J`, numerator and denominator of `sum_J d_i / |G|` are prime to `p`
/// once reduced.
///
/// With `r = v_p(|G|)`, the reduced fraction has both parts prime to `p`
/// exactly when `v_p(sum_J d_i) = r`: a larger valuation leaves `p` in the
/// numerator, a smaller one leaves it in the denominator. If some `d_i`
/// has valuation below `r` the singleton `{i}` already fails. Otherwise
/// `d_i = p^r e_i` and `v_p(sum_J d_i) = r` iff `sum_J e_i != 0 (mod p)`,
/// which is a subset-sum check on the residues `e_i mod p`.
pub fn rational_block_check(dims: &[usize], order: usize, p: u64) -> Result<(bool, Option<Vec<usize>>), CriteriaError> {
    let sum: usize = dims.iter().sum();
    if sum != order || dims.contains(&0) {
        return Err(CriteriaError::DimsMismatch { sum, order });
    }
    let r = valuation(order as u64, p);
    if let Some(i) = dims.iter().position(|&d| valuation(d as u64, p) < r) {
        return Ok((false, Some(vec![i])));
    }
    let pr = p.pow(r);
    let residues: Vec<u32> = dims.iter().map(|&d| ((d as u64 / pr) % p) as u32).collect();
    Ok(central_subset_check(&residues, p))
}

/// Full result of the `V_G` decision, with the structural data used.
#[derive(Debug, Clone)]
pub struct VgDecision {
    pub verdict: MsVerdict,
    pub wedderburn: Option<WedderburnData>,
}

/// Full result of the central decision, with the block data used.
#[derive(Debug, Clone)]
pub struct CentralDecision {
    pub verdict: MsVerdict,
    pub blocks: Option<BlockData>,
}

pub fn decide_vg(group: &Arc<FiniteGroup>, p: u64, seed: u64) -> Result<MsVerdict, CriteriaError> {
    Ok(decide_vg_full(group, p, seed)?.verdict)
}

pub fn decide_vg_full(group: &Arc<FiniteGroup>, p: u64, seed: u64) -> Result<VgDecision, CriteriaError> {
    decide_vg_with_degree(group, p, seed, None)
}

/// As [`decide_vg_full`], optionally over `GF(p^k)` with `k` a multiple of
/// the splitting degree.
pub fn decide_vg_with_degree(
    group: &Arc<FiniteGroup>,
    p: u64,
    seed: u64,
    field_degree: Option<usize>,
) -> Result<VgDecision, CriteriaError> {
    check_characteristic(p)?;
    let g = group.as_ref();
    let order = g.order() as u64;
    if p == 0 || p > order {
        return Ok(VgDecision {
            verdict: MsVerdict::new(Subject::Vg, g, p, seed, Reason::CharZeroOrLargeP),
            wedderburn: None,
        });
    }
    let mut field = splitting_field_for(g, p)?;
    if let Some(k) = field_degree {
        if k % field.k() != 0 {
            return Err(CriteriaError::InternalInconsistency(format!(
                "degree {k} does not contain the splitting degree {}",
                field.k()
            )));
        }
        field = crate::gfq::make_field(p, k)?;
    }
    let field = Arc::new(field);
    let mut rng = rng_for(g, p, seed);

    let (quotient_group, source) = if !order.is_multiple_of(p) {
        (group.clone(), DegreeSource::Group)
    } else {
        let Some(sylow) = g.normal_sylow_p(p) else {
            let mut v = MsVerdict::new(Subject::Vg, g, p, seed, Reason::NoNormalSylow);
            v.field = Some(field.spec());
            v.witness = Some(Witness::Sylow {
                p_elements: g.p_elements(p).len(),
                sylow_order: g.p_split(p).p_part(),
                pair: g.p_element_non_closure(p),
            });
            return Ok(VgDecision {
                verdict: v,
                wedderburn: None,
            });
        };
        let (q, _) = g.quotient(&sylow)?;
        (Arc::new(q), DegreeSource::Quotient)
    };
    let alg = GroupAlgebra::new(quotient_group, field.clone());
    let wd = wedderburn_degrees(&alg, &mut rng)?;
    let (holds, witness) = zero_sum_condition(&wd.degrees, p);
    let reason = match (holds, g.is_p_group(p)) {
        (true, true) => Reason::PGroupLocal,
        (true, false) => Reason::ZeroSumHolds,
        (false, true) => {
            return Err(CriteriaError::InternalInconsistency(
                "p-group failed the zero-sum condition".into(),
            ))
        }
        (false, false) => Reason::ZeroSumFails,
    };
    let mut v = MsVerdict::new(Subject::Vg, g, p, seed, reason);
    v.field = Some(field.spec());
    v.witness = witness.map(|coefficients| Witness::ZeroSum { coefficients });
    v.degrees = Some(wd.degrees.clone());
    v.degrees_computed_on = Some(source);
    Ok(VgDecision {
        verdict: v,
        wedderburn: Some(wd),
    })
}

pub fn decide_central(group: &Arc<FiniteGroup>, p: u64, seed: u64) -> Result<MsVerdict, CriteriaError> {
    Ok(decide_central_full(group, p, seed)?.verdict)
}

pub fn decide_central_full(group: &Arc<FiniteGroup>, p: u64, seed: u64) -> Result<CentralDecision, CriteriaError> {
    check_characteristic(p)?;
    let g = group.as_ref();
    let order = g.order();
    if p == 0 || p > order as u64 {
        return Ok(CentralDecision {
            verdict: MsVerdict::new(Subject::VgCentral, g, p, seed, Reason::CharZeroOrLargeP),
            blocks: None,
        });
    }
    let alg = GroupAlgebra::over_splitting_field(group.clone(), p)?;
    let mut rng = rng_for(g, p, seed);
    let blocks = block_idempotents(&alg, &mut rng)?;
    let (holds, witness) = central_subset_check(&blocks.traces, p);
    let (holds_rational, _) = rational_block_check(&blocks.dims, order, p)?;
    if holds != holds_rational {
        return Err(CriteriaError::InternalInconsistency(format!(
            "trace criterion says {holds}, dimension criterion says {holds_rational}"
        )));
    }
    if !(order as u64).is_multiple_of(p) {
        // semisimple: d_i = n_i^2, and the criterion reads sum_J n_i^2 != 0
        let squares: Vec<u32> = blocks
            .dims
            .iter()
            .map(|&d| {
                let n = (d as f64).sqrt().round() as u64;
                if (n * n) as usize != d {
                    return Err(CriteriaError::InternalInconsistency(format!(
                        "semisimple block dimension {d} is not a square"
                    )));
                }
                Ok(((n * n) % p) as u32)
            })
            .collect::<Result<_, _>>()?;
        let (holds_sq, _) = central_subset_check(&squares, p);
        if holds_sq != holds {
            return Err(CriteriaError::InternalInconsistency(format!(
                "trace criterion says {holds}, squared-degree criterion says {holds_sq}"
            )));
        }
    }
    let reason = if holds { Reason::SubsetSumOk } else { Reason::SubsetSumZero };
    let mut v = MsVerdict::new(Subject::VgCentral, g, p, seed, reason);
    v.field = Some(alg.field().spec());
    v.witness = witness.map(|indices| Witness::Subset { indices });
    v.blocks = Some(blocks.summary());
    Ok(CentralDecision {
        verdict: v,
        blocks: Some(blocks),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImplicationCheck {
    pub name: String,
    pub applicable: bool,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImplicationReport {
    pub group: String,
    pub p: u64,
    pub vg_is_ms: Option<bool>,
    pub central_is_ms: Option<bool>,
    pub checks: Vec<ImplicationCheck>,
    pub passed: bool,
}

/// Degrees of the semisimple algebra that determines the zero-sum condition: `KG`
/// itself when `p` does not divide `|G|`, else `K[G/H]` for the normal
/// Sylow subgroup `H`. `None` when there is no normal Sylow subgroup.
pub fn relevant_degrees(group: &Arc<FiniteGroup>, p: u64, seed: u64) -> Result<Option<Vec<usize>>, CriteriaError> {
    let g = group.as_ref();
    let semisimple_group = if !(g.order() as u64).is_multiple_of(p) {
        group.clone()
    } else {
        match g.normal_sylow_p(p) {
            Some(h) => Arc::new(g.quotient(&h)?.0),
            None => return Ok(None),
        }
    };
    let alg = GroupAlgebra::new(semisimple_group, Arc::new(splitting_field_for(g, p)?));
    Ok(Some(wedderburn_degrees(&alg, &mut rng_for(g, p, seed))?.degrees))
}

/// Evaluates both verdicts and the one-way implications between them and
/// the necessary conditions on the degrees. Failures are reported, not
/// raised.
pub fn implication_check(group: &Arc<FiniteGroup>, p: u64, seed: u64) -> ImplicationReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, applicable: bool, passed: bool, detail: String| {
        checks.push(ImplicationCheck {
            name: name.to_string(),
            applicable,
            passed: !applicable || passed,
            detail,
        })
    };
    let vg = decide_vg(group, p, seed);
    let central = decide_central_full(group, p, seed);
    let vg_ms = vg.as_ref().ok().map(|v| v.is_ms);
    let central_ms = central.as_ref().ok().map(|c| c.verdict.is_ms);
    push(
        "decided",
        true,
        vg.is_ok() && central.is_ok(),
        match (&vg, &central) {
            (Err(e), _) | (_, Err(e)) => e.to_string(),
            _ => String::new(),
        },
    );
    push(
        "vg_ms_implies_central_ms",
        vg_ms == Some(true),
        central_ms == Some(true),
        format!("vg={vg_ms:?} central={central_ms:?}"),
    );
    let degrees = if p >= 2 {
        relevant_degrees(group, p, seed).ok().flatten()
    } else {
        None
    };
    if let Some(deg) = &degrees {
        let sum: usize = deg.iter().sum();
        let sum_sq: usize = deg.iter().map(|n| n * n).sum();
        let max = deg.iter().copied().max().unwrap_or(0);
        let holds = zero_sum_condition(deg, p).0;
        push(
            "zero_sum_implies_p_exceeds_degree_sum",
            holds,
            p as usize > sum,
            format!("p={p} sum={sum}"),
        );
        push(
            "ms_implies_p_exceeds_degree_sum",
            vg_ms == Some(true),
            p as usize > sum,
            format!("p={p} sum={sum}"),
        );
        push(
            "ms_implies_degrees_below_p",
            vg_ms == Some(true),
            (max as u64) < p && (deg.len() as u64) < p,
            format!("p={p} max={max} s={}", deg.len()),
        );
        push(
            "p_exceeds_square_sum_implies_ms",
            p as usize > sum_sq,
            vg_ms == Some(true),
            format!("p={p} square_sum={sum_sq}"),
        );
    }
    if let Ok(CentralDecision { blocks: Some(b), .. }) = &central {
        push(
            "ms_implies_block_count_below_p",
            vg_ms == Some(true),
            (b.count() as u64) < p,
            format!("p={p} t={}", b.count()),
        );
    }
    let passed = checks.iter().all(|c| c.passed);
    ImplicationReport {
        group: group.label().to_string(),
        p,
        vg_is_ms: vg_ms,
        central_is_ms: central_ms,
        checks,
        passed,
    }
}
