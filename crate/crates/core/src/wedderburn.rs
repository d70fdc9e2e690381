//! Wedderburn decomposition of `T(D_{n,s})`, the central idempotents of the
//! conjugation representation, and the dihedral corollary audit.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::character::{character_value, multiplicities_closedform, CharLabel, CharTable, Multiplicities, Route};
use crate::error::{Error, Result};
use crate::group::{DnsGroup, GroupParams};

pub const IDEMPOTENT_TOL: f64 = 1e-8;
pub const TRACE_TOL: f64 = 1e-6;
/// Largest group order for which idempotents are built.
pub const IDEMPOTENT_MAX_ORDER: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedderburnReport {
    /// Simple-block sizes `d`, zero multiplicities dropped, descending.
    pub blocks: Vec<u64>,
    pub sum_of_squares: u64,
    pub expected_dimension: u64,
    pub matches_dimension: bool,
    pub route: Route,
}

/// Sorted nonzero block sizes of a multiplicity vector.
pub fn blocks_of(mult: &Multiplicities) -> Vec<u64> {
    let mut blocks: Vec<u64> = mult.by_label().into_iter().map(|(_, d)| d).filter(|&d| d > 0).collect();
    blocks.sort_unstable_by(|a, b| b.cmp(a));
    blocks
}

/// Assembles the blocks and compares `sum d^2` with the certified dimension.
pub fn decomposition(mult: &Multiplicities, expected_dimension: u64) -> Result<WedderburnReport> {
    let blocks = blocks_of(mult);
    let sum_of_squares = blocks.iter().map(|d| d * d).sum();
    if sum_of_squares != expected_dimension {
        return Err(Error::Wedderburn(format!(
            "sum of squared block sizes {sum_of_squares} != dimension {expected_dimension} ({:?} route)",
            mult.route
        )));
    }
    Ok(WedderburnReport { blocks, sum_of_squares, expected_dimension, matches_dimension: true, route: mult.route })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdempotentTrace {
    pub label: CharLabel,
    pub trace: f64,
    /// `d_i * chi_i(1)`.
    pub expected: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdempotentReport {
    pub idempotent_residual: f64,
    pub orthogonality_residual: f64,
    pub sum_residual: f64,
    pub traces: Vec<IdempotentTrace>,
    pub ok: bool,
}

fn max_abs(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Builds `e_i = (chi_i(1) / |G|) sum_g conj(chi_i(g)) X(g)` for every
/// irreducible character and checks `e_i^2 = e_i`, `e_i e_j = 0`,
/// `sum e_i = I` and `trace e_i = d_i chi_i(1)`.
pub fn central_idempotents(group: &DnsGroup, table: &CharTable, mult: &Multiplicities) -> Result<IdempotentReport> {
    let side = group.order();
    if side > IDEMPOTENT_MAX_ORDER {
        return Err(Error::SizeGuard { what: "central idempotents", order: side, limit: IDEMPOTENT_MAX_ORDER });
    }
    let params = group.params();
    let n = params.n();
    let cayley = group.table();
    let d: BTreeMap<CharLabel, u64> = mult.by_label().into_iter().collect();
    let idempotents: Vec<Array2<Complex64>> = table
        .rows
        .iter()
        .map(|row| {
            let mut e = Array2::<Complex64>::zeros((side, side));
            let scale = row.degree as f64 / side as f64;
            for g in 0..side {
                let chi = character_value(params, row.label, group.element(g)).numeric(n).conj() * scale;
                for u in 0..side {
                    e[[u, cayley.conj(g, u)]] += chi;
                }
            }
            e
        })
        .collect();

    let mut idempotent_residual: f64 = 0.0;
    let mut orthogonality_residual: f64 = 0.0;
    let mut sum = Array2::<Complex64>::zeros((side, side));
    for (i, ei) in idempotents.iter().enumerate() {
        sum += ei;
        for (j, ej) in idempotents.iter().enumerate() {
            let prod = ei.dot(ej);
            if i == j {
                idempotent_residual = idempotent_residual.max(max_abs(&(&prod - ei)));
            } else {
                orthogonality_residual = orthogonality_residual.max(max_abs(&prod));
            }
        }
    }
    let sum_residual = max_abs(&(sum - Array2::<Complex64>::eye(side)));
    let traces: Vec<IdempotentTrace> = table
        .rows
        .iter()
        .zip(&idempotents)
        .map(|(row, e)| IdempotentTrace {
            label: row.label,
            trace: e.diag().iter().sum::<Complex64>().re,
            expected: d[&row.label] * row.degree,
        })
        .collect();
    let traces_ok = traces.iter().all(|t| (t.trace - t.expected as f64).abs() < TRACE_TOL);
    let ok = idempotent_residual < IDEMPOTENT_TOL
        && orthogonality_residual < IDEMPOTENT_TOL
        && sum_residual < IDEMPOTENT_TOL
        && traces_ok;
    Ok(IdempotentReport { idempotent_residual, orthogonality_residual, sum_residual, traces, ok })
}

/// Printed dihedral decomposition against the general theorem at `s = n - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryAudit {
    pub n: u64,
    pub printed_blocks: Vec<u64>,
    pub derived_blocks: Vec<u64>,
    pub agree: bool,
    /// A negative printed copy count was clamped to zero.
    pub clamped: bool,
    pub note: String,
}

/// The dihedral decompositions as printed, with their copy counts taken
/// literally. Returns the blocks (descending) and whether a negative count was
/// clamped to zero.
///
/// * `n = 2 (mod 4)`: `M_a + M_{a-4} + floor((n-1)/4) M_2`, `a = floor((n-1)/2) + 4`
/// * `n = 0 (mod 4)`: `M_a + M_{a-4} + M_1 + M_1 + (floor((n-1)/4) - 1) M_2`
/// * `n` odd: `M_b + M_{b-2} + floor((n-1)/4) M_1`, `b = floor((n-1)/2) + 2`
pub fn printed_blocks(n: u64) -> (Vec<u64>, bool) {
    let quarter = ((n - 1) / 4) as i64;
    let mut blocks = Vec::new();
    let copies = if n % 2 == 0 {
        let a = (n - 1) / 2 + 4;
        blocks.extend([a, a - 4]);
        if n % 4 == 0 {
            blocks.extend([1, 1]);
            (2, quarter - 1)
        } else {
            (2, quarter)
        }
    } else {
        let b = (n - 1) / 2 + 2;
        blocks.extend([b, b - 2]);
        (1, quarter)
    };
    let (size, count) = copies;
    let clamped = count < 0;
    blocks.extend(std::iter::repeat(size).take(count.max(0) as usize));
    blocks.retain(|&d| d > 0);
    blocks.sort_unstable_by(|a, b| b.cmp(a));
    (blocks, clamped)
}

fn counts(blocks: &[u64]) -> BTreeMap<u64, i64> {
    let mut m = BTreeMap::new();
    for &b in blocks {
        *m.entry(b).or_insert(0) += 1;
    }
    m
}

pub fn corollary_audit(n: u64) -> Result<CorollaryAudit> {
    let params = GroupParams::new(n, n - 1)?;
    let derived = blocks_of(&multiplicities_closedform(&params)?);
    let derived_sq: u64 = derived.iter().map(|d| d * d).sum();
    if derived_sq != params.formula_dimension() {
        return Err(Error::Wedderburn(format!("derived blocks for n = {n} square-sum to {derived_sq}")));
    }
    let (printed, clamped) = printed_blocks(n);
    let agree = printed == derived;
    let mut parts = Vec::new();
    if !agree {
        let (p, d) = (counts(&printed), counts(&derived));
        let sizes: std::collections::BTreeSet<u64> = p.keys().chain(d.keys()).copied().collect();
        for size in sizes.into_iter().rev() {
            let (pc, dc) = (p.get(&size).copied().unwrap_or(0), d.get(&size).copied().unwrap_or(0));
            if pc != dc {
                parts.push(format!("M_{size}: printed {pc} derived {dc} (delta {:+})", dc - pc));
            }
        }
        let printed_sq: u64 = printed.iter().map(|d| d * d).sum();
        parts.push(format!("sum d^2: printed {printed_sq} derived {derived_sq}"));
    }
    if clamped {
        parts.push("negative copy count clamped to 0".into());
    }
    Ok(CorollaryAudit { n, printed_blocks: printed, derived_blocks: derived, agree, clamped, note: parts.join("; ") })
}
