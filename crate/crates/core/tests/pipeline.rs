use terwilliger_core::analysis::{analyze, sweep, AnalysisOptions, GeneratorOrder};
use terwilliger_core::group::{build_group, conjugacy_classes, enumerate_orbitals, orbital_count, GroupParams};
use terwilliger_core::linalg::{PrimeField, DEFAULT_PRIME_1, DEFAULT_PRIME_2};
use terwilliger_core::scheme::build_scheme;
use terwilliger_core::terwilliger::{
    dual_idempotents, generator_supports, saturate, transpose_closed, ClosureOptions, ClosureStrategy,
};

fn closure_rank(p: GroupParams, prime: u64, options: &ClosureOptions, bound: Option<usize>) -> (usize, bool) {
    let group = build_group(p);
    let classes = conjugacy_classes(&group, false).unwrap();
    let scheme = build_scheme(group.table(), &classes.partition).unwrap();
    let idem = dual_idempotents(&scheme, group.table().identity());
    let gens = generator_supports(&scheme, &idem);
    let field = PrimeField::new(prime).unwrap();
    let (basis, run) = saturate(&field, p.order(), &gens, bound, options).unwrap();
    (run.rank, transpose_closed(&basis, p.order()))
}

#[test]
fn full_saturation_without_early_exit() {
    let opts = ClosureOptions { early_exit: false, ..ClosureOptions::default() };
    for p in GroupParams::enumerate(3, 16) {
        let (rank, closed) = closure_rank(p, DEFAULT_PRIME_1, &opts, None);
        assert_eq!(rank as u64, p.formula_dimension(), "{p}");
        assert!(closed, "{p}: span not transpose-closed");
    }
}

#[test]
fn full_basis_strategy_matches() {
    let opts = ClosureOptions { early_exit: false, strategy: ClosureStrategy::FullBasis, ..ClosureOptions::default() };
    for p in GroupParams::enumerate(3, 10) {
        assert_eq!(closure_rank(p, DEFAULT_PRIME_2, &opts, None).0 as u64, p.formula_dimension(), "{p}");
    }
}

#[test]
fn small_prime_gives_same_rank() {
    let opts = ClosureOptions { early_exit: false, ..ClosureOptions::default() };
    for p in GroupParams::enumerate(3, 12) {
        assert_eq!(closure_rank(p, 1_000_003, &opts, None).0 as u64, p.formula_dimension(), "{p}");
    }
}

#[test]
fn orbitals_enumerated_and_counted_agree() {
    for p in GroupParams::enumerate(3, 20) {
        let group = build_group(p);
        let orbitals = enumerate_orbitals(group.table());
        assert_eq!(orbitals.count() as u64, orbital_count(group.table()).unwrap());
        assert_eq!(orbitals.count() as u64, p.formula_dimension());
    }
}

#[test]
fn analysis_is_independent_of_generator_order() {
    let p = GroupParams::new(12, 7).unwrap();
    let base = analyze(p, &AnalysisOptions::default()).unwrap();
    for order in [GeneratorOrder::Reversed, GeneratorOrder::Rotated(5)] {
        let opts = AnalysisOptions { generator_order: order, ..AnalysisOptions::default() };
        let other = analyze(p, &opts).unwrap();
        assert_eq!(other.dims, base.dims);
        assert_eq!(other.checks, base.checks);
    }
}

#[test]
fn rational_mode_agrees() {
    let mut opts = AnalysisOptions::default();
    opts.certificate.rational = true;
    let a = analyze(GroupParams::new(8, 5).unwrap(), &opts).unwrap();
    assert!(a.passed(), "{:?}", a.failed_checks());
    assert_eq!(a.dims.t, Some(112));
}

#[test]
fn large_n_skips_closure_by_default() {
    let report = sweep(60, 64, &AnalysisOptions::default());
    assert_eq!(report.failed, 0);
    assert!(report.rows.iter().all(|r| r.dim_t.is_none() && r.dim_t0 == r.formula && r.dim_t_tilde == r.formula));
}

#[test]
fn forced_closure_beyond_default_bound() {
    let opts = AnalysisOptions { closure: Some(true), ..AnalysisOptions::default() };
    let a = analyze(GroupParams::new(42, 41).unwrap(), &opts).unwrap();
    assert!(a.passed());
    assert_eq!(a.dims.t, Some(a.dims.formula));
}

#[test]
fn commutant_dimensions() {
    use terwilliger_core::character::{char_table, multiplicities_rowsum};
    use terwilliger_core::terwilliger::commutant_oracle;
    for p in GroupParams::enumerate(3, 8) {
        let group = build_group(p);
        let classes = conjugacy_classes(&group, true).unwrap();
        let table = char_table(&p, &classes);
        let mult = multiplicities_rowsum(&table).unwrap();
        let present: u64 =
            mult.by_label().into_iter().filter(|&(_, d)| d > 0).map(|(label, _)| label.degree() * label.degree()).sum();
        let r = commutant_oracle(group.table(), &enumerate_orbitals(group.table())).unwrap();
        // Commuting with the conjugation action gives the orbital span;
        // commuting with the orbital matrices gives the span of the action.
        assert_eq!(r.action_commutant_dim, r.orbital_count, "{p}");
        assert_eq!(r.orbital_commutant_dim, present, "{p}");
    }
}
