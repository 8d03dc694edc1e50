use irs_core::{
    count_incomplete_sums, deleted_part, deletion_set, ito_sum, k_of_n, sample_path, strat_average_sum,
    strat_midpoint_sum, sums, BrownianPath, DeletionSet, Integrand, IntegrandSpec, Partition, SeedSpec,
    Selection, Strategy as Deletion, SumForm,
};
use num_bigint::BigUint;
use proptest::prelude::*;

fn strategy() -> impl Strategy<Value = Deletion> {
    prop_oneof![Just(Deletion::Begin), Just(Deletion::Random), Just(Deletion::End)]
}

fn integrand_spec() -> impl Strategy<Value = IntegrandSpec> {
    prop_oneof![
        Just(IntegrandSpec::Identity),
        Just(IntegrandSpec::Sin),
        (-3.0..3.0f64).prop_map(IntegrandSpec::Constant),
        proptest::collection::vec(-2.0..2.0f64, 1..4).prop_map(IntegrandSpec::Poly),
    ]
}

fn path(n: usize, seed: u64) -> BrownianPath {
    sample_path(&Partition::equal(1.0, n).unwrap(), SeedSpec::new(seed, 0))
}

/// Sum of |terms|, the natural scale for rounding error in a compensated sum.
fn abs_scale(path: &BrownianPath, phi: &Integrand, form: SumForm) -> f64 {
    sums::terms(path, phi, form)
        .unwrap()
        .iter()
        .map(|t| t.abs())
        .sum::<f64>()
        + f64::MIN_POSITIVE
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn partition_invariants(horizon in 1e-3..1e3f64, n in 1usize..5000) {
        let p = Partition::equal(horizon, n).unwrap();
        let nodes = p.nodes();
        prop_assert_eq!(nodes.len(), n + 1);
        prop_assert_eq!(nodes[0], 0.0);
        prop_assert_eq!(nodes[n], horizon);
        let ulp = 4.0 * horizon * f64::EPSILON;
        let h = horizon / n as f64;
        for w in nodes.windows(2) {
            prop_assert!(w[1] > w[0]);
            prop_assert!((w[1] - w[0] - h).abs() <= ulp);
        }
        prop_assert!((p.mesh() - h).abs() <= ulp);
    }

    #[test]
    fn deletion_set_invariants(n in 1usize..400, frac in 0.0..1.0f64, s in strategy(), seed: u64) {
        let k = ((n as f64 * frac) as usize).min(n - 1);
        let d = deletion_set(n, k, s, seed).unwrap();
        prop_assert_eq!(d.k(), k);
        prop_assert!(d.indices().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(d.indices().iter().all(|&i| i < n));
        let kept: Vec<usize> = d.kept().collect();
        prop_assert_eq!(kept.len(), n - k);
        let mut all: Vec<usize> = kept.iter().chain(d.indices()).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(deletion_set(n, k, s, seed).unwrap(), d);
    }

    #[test]
    fn k_of_n_is_monotone_in_r(n in 1usize..10_000_000, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(k_of_n(n, lo).unwrap() <= k_of_n(n, hi).unwrap());
        prop_assert!(k_of_n(n, hi).unwrap() < n.max(2));
    }

    #[test]
    fn kept_plus_deleted_is_complete(
        n in 2usize..300,
        frac in 0.0..1.0f64,
        s in strategy(),
        seed: u64,
        spec in integrand_spec(),
    ) {
        let k = ((n as f64 * frac) as usize).min(n - 1);
        let p = path(n, seed);
        let d = deletion_set(n, k, s, seed).unwrap();
        let phi = spec.build();
        for form in [SumForm::ItoLeft, SumForm::StratMidpoint, SumForm::StratAverage] {
            let terms = sums::terms(&p, &phi, form).unwrap();
            let complete = sums::sum_terms(&terms, &DeletionSet::empty(n), Selection::Kept, form).unwrap();
            let kept = sums::sum_terms(&terms, &d, Selection::Kept, form).unwrap();
            let gone = deleted_part(&p, &phi, &d, form).unwrap();
            prop_assert_eq!(kept.kept_terms + kept.deleted_terms, n);
            let tol = 4.0 * f64::EPSILON * abs_scale(&p, &phi, form);
            prop_assert!((kept.value + gone.value - complete.value).abs() <= tol);
        }
    }

    #[test]
    fn sums_are_linear_in_the_integrand(
        n in 2usize..300,
        seed: u64,
        a in -3.0..3.0f64,
        b in -3.0..3.0f64,
        f in integrand_spec(),
        g in integrand_spec(),
        frac in 0.0..1.0f64,
    ) {
        let p = path(n, seed);
        let d = deletion_set(n, ((n as f64 * frac) as usize).min(n - 1), Deletion::Random, seed).unwrap();
        let (f, g) = (f.build(), g.build());
        let combo = Integrand::linear_combination(a, &f, b, &g);
        type SumFn = fn(&BrownianPath, &Integrand, &DeletionSet) -> irs_core::Result<irs_core::SumResult>;
        let forms: [(SumForm, SumFn); 3] = [
            (SumForm::ItoLeft, ito_sum),
            (SumForm::StratMidpoint, strat_midpoint_sum),
            (SumForm::StratAverage, strat_average_sum),
        ];
        for (form, sum) in forms {
            let lhs = sum(&p, &combo, &d).unwrap().value;
            let rhs = a * sum(&p, &f, &d).unwrap().value + b * sum(&p, &g, &d).unwrap().value;
            let scale = a.abs() * abs_scale(&p, &f, form) + b.abs() * abs_scale(&p, &g, form);
            prop_assert!((lhs - rhs).abs() <= 1e-13 * scale + 1e-300, "{form}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn identity_telescoping(n in 1usize..3000, seed: u64) {
        let p = path(n, seed);
        let id = Integrand::identity();
        let empty = DeletionSet::empty(n);
        let bt = p.terminal();
        let avg = strat_average_sum(&p, &id, &empty).unwrap().value;
        let mid = strat_midpoint_sum(&p, &id, &empty).unwrap().value;
        prop_assert_eq!(avg, mid);
        prop_assert_eq!(
            sums::terms(&p, &id, SumForm::StratAverage).unwrap(),
            sums::terms(&p, &id, SumForm::StratMidpoint).unwrap()
        );
        let scale = abs_scale(&p, &id, SumForm::StratAverage);
        prop_assert!((avg - 0.5 * bt * bt).abs() <= 8.0 * f64::EPSILON * scale);

        let qv = irs_core::compensated_sum((0..n).map(|j| p.increment(j).powi(2)));
        let ito = ito_sum(&p, &id, &empty).unwrap().value;
        prop_assert!((ito - (0.5 * bt * bt - 0.5 * qv)).abs() <= 8.0 * f64::EPSILON * (scale + qv));
    }

    #[test]
    fn bounded_integrands_respect_their_bound(x in -1e3..1e3f64, t in 0.0..10.0f64, c in -5.0..5.0f64) {
        for phi in [Integrand::sin(), Integrand::constant(c)] {
            let m = phi.sup_bound.unwrap();
            prop_assert!(phi.eval(x, t).abs() <= m);
        }
    }

    #[test]
    fn integrand_spec_survives_display(spec in integrand_spec()) {
        prop_assert_eq!(spec.to_string().parse::<IntegrandSpec>().unwrap(), spec);
    }

    #[test]
    fn single_deletions_count_n(n in 2usize..5000) {
        prop_assert_eq!(count_incomplete_sums(n, 1).unwrap(), BigUint::from(n));
    }
}
