//! End-to-end analysis of one `D_{n,s}` and sweeps over ranges of `n`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::character::{
    char_table, multiplicities_closedform, multiplicities_rowsum, orthogonality_check, permutation_character_residual,
    CharTable, HalfCaseCensus, INTEGRALITY_TOL,
};
use crate::error::Result;
use crate::group::{
    build_group, closed_form_centralizer, closed_form_orbital_count, conjugacy_classes, enumerate_orbitals,
    orbital_count, ClassLabel, ConjugacyData, GroupParams, BRUTE_FORCE_MAX_N,
};
use crate::scheme::{build_scheme, case_counts, dim_t0, expected_case_counts, intersection_numbers};
use crate::terwilliger::{
    algebra_closure, commutant_oracle, dual_idempotents, CertificateOptions, Provenance, COMMUTANT_MAX_ORDER,
};
use crate::wedderburn::{central_idempotents, decomposition, IDEMPOTENT_MAX_ORDER};

/// Largest `n` for which the closure runs unless forced.
pub const CLOSURE_MAX_N: u64 = 40;

/// Order in which generators are handed to the closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum GeneratorOrder {
    #[default]
    Natural,
    Reversed,
    /// Rotated left by the given amount (mod the generator count).
    Rotated(usize),
}

impl GeneratorOrder {
    pub fn permutation(&self, len: usize) -> Option<Vec<usize>> {
        match *self {
            GeneratorOrder::Natural => None,
            GeneratorOrder::Reversed => Some((0..len).rev().collect()),
            GeneratorOrder::Rotated(r) => Some((0..len).map(|i| (i + r) % len.max(1)).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Run brute-force conjugation and orbit routes; `None` means `n <= 40`.
    pub brute_force: Option<bool>,
    /// Run the closure; `None` means `n <= closure_max_n`.
    pub closure: Option<bool>,
    pub closure_max_n: u64,
    pub certificate: CertificateOptions,
    pub generator_order: GeneratorOrder,
    /// Run the desk-scale idempotent and commutant certificates when the group is small enough.
    pub desk_checks: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            brute_force: None,
            closure: None,
            closure_max_n: CLOSURE_MAX_N,
            certificate: CertificateOptions::default(),
            generator_order: GeneratorOrder::Natural,
            desk_checks: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub t0: u64,
    pub t: Option<u64>,
    pub t_tilde: u64,
    pub formula: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub label: ClassLabel,
    pub rep: String,
    pub size: usize,
    pub centralizer: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureSummary {
    pub provenance: Provenance,
    pub rounds: usize,
    pub history: Vec<usize>,
}

/// Everything computed for one group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub params: GroupParams,
    pub classes: Vec<ClassSummary>,
    pub identity_class: ClassLabel,
    pub dims: Dims,
    pub closure: Option<ClosureSummary>,
    pub case_counts: [u64; 9],
    pub triply_transitive: bool,
    pub blocks_rowsum: Vec<u64>,
    pub blocks_closedform: Vec<u64>,
    pub char_table: CharTable,
    pub census: HalfCaseCensus,
    pub checks: BTreeMap<String, bool>,
}

impl Analysis {
    pub fn passed(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, &ok)| !ok).map(|(k, _)| k.as_str()).collect()
    }
}

fn class_summaries(classes: &ConjugacyData) -> Vec<ClassSummary> {
    (0..classes.len())
        .map(|i| ClassSummary {
            label: classes.labels[i],
            rep: classes.reps[i].to_string(),
            size: classes.class_size(i),
            centralizer: classes.centralizer_orders[i],
        })
        .collect()
}

/// Runs every route for one group and records each consistency verdict.
///
/// Route disagreements inside a single computation (two primes, two orbit
/// counts, two class routes) are returned as errors.
pub fn analyze(params: GroupParams, options: &AnalysisOptions) -> Result<Analysis> {
    let n = params.n();
    let formula = params.formula_dimension();
    let brute = options.brute_force.unwrap_or(n <= BRUTE_FORCE_MAX_N);
    let run_closure = options.closure.unwrap_or(n <= options.closure_max_n);
    let mut checks = BTreeMap::new();

    let group = build_group(params);
    let classes = conjugacy_classes(&group, brute)?;
    if brute {
        checks.insert("classes_brute_force_match".into(), classes.brute_force_checked);
    }
    let table = group.table();
    let scheme = build_scheme(table, &classes.partition)?;
    let tensor = intersection_numbers(table, &classes.partition)?;
    let t0 = dim_t0(&tensor);
    let cases = case_counts(&tensor, &classes);
    checks.insert("case_counts_match".into(), cases == expected_case_counts(n, params.tau()));
    checks.insert("dim_t0_equals_formula".into(), t0 == formula);

    let closed_orbitals = closed_form_orbital_count(&classes);
    let t_tilde = if brute {
        let counted = orbital_count(table)?;
        checks.insert("orbital_count_routes_agree".into(), counted == closed_orbitals);
        counted
    } else {
        closed_orbitals
    };
    checks.insert("dim_t_tilde_equals_formula".into(), t_tilde == formula);
    checks.insert("triply_transitive".into(), t0 == t_tilde);

    let closure = if run_closure {
        let idem = dual_idempotents(&scheme, table.identity());
        checks.insert("dual_idempotents".into(), idem.verify());
        let mut cert_opts = options.certificate.clone();
        cert_opts.closure.generator_order = options.generator_order.permutation(2 * scheme.relation_count());
        let cert = algebra_closure(&scheme, &idem, t0, t_tilde, Some(formula), &cert_opts)?;
        checks.insert("dim_t_equals_formula".into(), cert.dim_t == formula);
        checks.insert("dimension_sandwich".into(), cert.sandwich_holds());
        Some((
            cert.dim_t,
            ClosureSummary {
                provenance: cert.provenance,
                rounds: cert.closure_rounds,
                history: cert.basis_size_history,
            },
        ))
    } else {
        None
    };

    let chars = char_table(&params, &classes);
    checks.insert("orthogonality".into(), orthogonality_check(&chars).is_ok());
    checks.insert("degree_square_sum".into(), chars.degree_square_sum() == 2 * n);
    let rowsum = multiplicities_rowsum(&chars)?;
    let closed = multiplicities_closedform(&params)?;
    checks.insert("multiplicity_routes_agree".into(), rowsum.same_values(&closed));
    let points = group.elements().map(|g| (g, closed_form_centralizer(&params, g)));
    checks.insert(
        "conjugation_character".into(),
        permutation_character_residual(&params, &closed, points) < INTEGRALITY_TOL,
    );
    let w_row = decomposition(&rowsum, formula);
    let w_closed = decomposition(&closed, formula);
    checks.insert("wedderburn_rowsum_matches".into(), w_row.is_ok());
    checks.insert("wedderburn_closedform_matches".into(), w_closed.is_ok());
    let blocks_rowsum = crate::wedderburn::blocks_of(&rowsum);
    let blocks_closedform = crate::wedderburn::blocks_of(&closed);
    checks.insert("wedderburn_routes_agree".into(), blocks_rowsum == blocks_closedform);

    if options.desk_checks && group.order() <= IDEMPOTENT_MAX_ORDER {
        let report = central_idempotents(&group, &chars, &rowsum)?;
        checks.insert("central_idempotents".into(), report.ok);
    }
    if options.desk_checks && group.order() <= COMMUTANT_MAX_ORDER {
        let report = commutant_oracle(table, &enumerate_orbitals(table))?;
        checks.insert("centralizer_algebra_commutant".into(), report.action_commutant_dim == t_tilde);
    }

    let identity_class = classes.labels[classes.identity_class()];
    Ok(Analysis {
        params,
        classes: class_summaries(&classes),
        identity_class,
        dims: Dims { t0, t: closure.as_ref().map(|c| c.0), t_tilde, formula },
        closure: closure.map(|c| c.1),
        case_counts: cases,
        triply_transitive: t0 == t_tilde,
        blocks_rowsum,
        blocks_closedform,
        char_table: chars,
        census: HalfCaseCensus::of(&params),
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: u64,
    pub s: u64,
    pub tau: u64,
    pub dim_t0: u64,
    pub dim_t: Option<u64>,
    pub dim_t_tilde: u64,
    pub formula: u64,
    pub pass: bool,
    /// Failed check names, or the error message if the analysis aborted.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub passed: usize,
    pub failed: usize,
    pub census: HalfCaseCensus,
}

/// Analyzes every valid `(n, s)` with `n_min <= n <= n_max`; rows come back
/// in `(n, s)` order whatever the degree of parallelism.
pub fn sweep(n_min: u64, n_max: u64, options: &AnalysisOptions) -> SweepReport {
    let params = GroupParams::enumerate(n_min, n_max);
    let rows: Vec<SweepRow> = params
        .par_iter()
        .map(|&p| match analyze(p, options) {
            Ok(a) => SweepRow {
                n: p.n(),
                s: p.s(),
                tau: p.tau(),
                dim_t0: a.dims.t0,
                dim_t: a.dims.t,
                dim_t_tilde: a.dims.t_tilde,
                formula: a.dims.formula,
                pass: a.passed(),
                failures: a.failed_checks().into_iter().map(String::from).collect(),
            },
            Err(e) => SweepRow {
                n: p.n(),
                s: p.s(),
                tau: p.tau(),
                dim_t0: 0,
                dim_t: None,
                dim_t_tilde: 0,
                formula: p.formula_dimension(),
                pass: false,
                failures: vec![e.to_string()],
            },
        })
        .collect();
    let passed = rows.iter().filter(|r| r.pass).count();
    let census = params.iter().map(HalfCaseCensus::of).fold(HalfCaseCensus::default(), HalfCaseCensus::merge);
    SweepReport { failed: rows.len() - passed, passed, rows, census }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_s3() {
        let a = analyze(GroupParams::new(3, 2).unwrap(), &AnalysisOptions::default()).unwrap();
        assert!(a.passed(), "{:?}", a.failed_checks());
        assert_eq!(a.dims, Dims { t0: 11, t: Some(11), t_tilde: 11, formula: 11 });
        assert_eq!(a.blocks_rowsum, [3, 1, 1]);
        assert_eq!(a.identity_class.to_string(), "X1");
        assert!(a.checks.contains_key("central_idempotents"));
        assert!(a.checks.contains_key("centralizer_algebra_commutant"));
    }

    #[test]
    fn analyze_without_closure() {
        let opts = AnalysisOptions { closure: Some(false), ..AnalysisOptions::default() };
        let a = analyze(GroupParams::new(24, 5).unwrap(), &opts).unwrap();
        assert!(a.passed());
        assert_eq!(a.dims.t, None);
        assert!(a.closure.is_none());
    }

    #[test]
    fn generator_order_permutations() {
        assert_eq!(GeneratorOrder::Natural.permutation(3), None);
        assert_eq!(GeneratorOrder::Reversed.permutation(3), Some(vec![2, 1, 0]));
        assert_eq!(GeneratorOrder::Rotated(4).permutation(3), Some(vec![1, 2, 0]));
    }

    #[test]
    fn small_sweep() {
        let report = sweep(3, 10, &AnalysisOptions::default());
        assert_eq!(report.failed, 0);
        let eights: Vec<u64> = report.rows.iter().filter(|r| r.n == 8).map(|r| r.s).collect();
        assert_eq!(eights, [3, 5, 7]);
        for n in [3, 5, 7] {
            assert_eq!(report.rows.iter().filter(|r| r.n == n).count(), 1);
        }
    }
}
