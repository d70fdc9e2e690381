use proptest::prelude::*;
use terwilliger_core::character::{
    char_table, multiplicities_closedform, multiplicities_rowsum, orthogonality_check, ORTHOGONALITY_TOL,
};
use terwilliger_core::group::{
    brute_force_classes, build_group, closed_form_classes, conjugacy_classes, GroupElement, GroupParams,
};
use terwilliger_core::scheme::{
    build_scheme, case_counts, dim_t0, expected_case_counts, intersection_number_at, intersection_numbers,
};
use terwilliger_core::wedderburn::{blocks_of, decomposition};

fn params(max_n: u64) -> impl Strategy<Value = GroupParams> {
    (3..=max_n).prop_flat_map(|n| {
        let twists = GroupParams::valid_twists(n);
        (0..twists.len()).prop_map(move |i| GroupParams::new(n, twists[i]).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_law_is_associative(p in params(60), i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let order = p.order();
        let n = p.n();
        let (x, y, z) = (
            GroupElement::from_index(i % order, n),
            GroupElement::from_index(j % order, n),
            GroupElement::from_index(k % order, n),
        );
        prop_assert_eq!(x.mul(y, &p).mul(z, &p), x.mul(y.mul(z, &p), &p));
        prop_assert_eq!(x.mul(x.inverse(&p), &p), GroupElement::IDENTITY);
    }

    #[test]
    fn class_routes_agree(p in params(40)) {
        let group = build_group(p);
        let brute = brute_force_classes(group.table());
        let closed = closed_form_classes(&p);
        prop_assert_eq!(brute.canonical(), closed.partition.canonical());
        prop_assert_eq!(closed.len() as u64, p.class_count());
        let data = conjugacy_classes(&group, true).unwrap();
        prop_assert!(data.brute_force_checked);
        let total: u64 = data.centralizer_orders.iter().sum();
        prop_assert_eq!(total, p.formula_dimension());
    }

    #[test]
    fn intersection_numbers_match_definition(p in params(24), x in 0usize..1000, y in 0usize..1000) {
        let group = build_group(p);
        let classes = conjugacy_classes(&group, false).unwrap();
        let table = group.table();
        let scheme = build_scheme(table, &classes.partition).unwrap();
        let tensor = intersection_numbers(table, &classes.partition).unwrap();
        let (x, y) = (x % p.order(), y % p.order());
        let k = classes.partition.class_of(table.mul(y, table.inv(x)));
        for i in 0..classes.len() {
            for j in 0..classes.len() {
                prop_assert_eq!(intersection_number_at(&scheme, i, j, x, y), tensor.get(i, j, k));
            }
        }
    }

    #[test]
    fn triple_counts_follow_formula(p in params(40)) {
        let group = build_group(p);
        let classes = conjugacy_classes(&group, false).unwrap();
        let tensor = intersection_numbers(group.table(), &classes.partition).unwrap();
        prop_assert_eq!(dim_t0(&tensor), p.formula_dimension());
        let counts = case_counts(&tensor, &classes);
        prop_assert_eq!(counts, expected_case_counts(p.n(), p.tau()));
        prop_assert_eq!(counts.iter().sum::<u64>(), p.formula_dimension());
    }

    #[test]
    fn multiplicity_routes_agree(p in params(200)) {
        let classes = closed_form_classes(&p);
        let table = char_table(&p, &classes);
        prop_assert!(orthogonality_check(&table).unwrap().max_deviation < ORTHOGONALITY_TOL);
        let row = multiplicities_rowsum(&table).unwrap();
        let closed = multiplicities_closedform(&p).unwrap();
        prop_assert!(row.same_values(&closed));
        let report = decomposition(&closed, p.formula_dimension()).unwrap();
        prop_assert_eq!(report.sum_of_squares, p.formula_dimension());
        prop_assert_eq!(blocks_of(&row), report.blocks);
    }
}
