use cmrank::oracle::is_indecomposable;
use cmrank::rim::canonical_rotation;
use cmrank::structure::{classify, count_indecomposables};
use cmrank::sweep::coefficient_edges;
use cmrank::{build_m, solve_constraint, CoefficientTuple, Profile, Rank2Module, Rim, TruncatedSeries};
use proptest::prelude::*;

const N: usize = 12;

fn series() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(-5i64..=5, 0..7).prop_map(|c| TruncatedSeries::from_ints(&c, N).unwrap())
}

fn unit() -> impl Strategy<Value = TruncatedSeries> {
    (prop_oneof![-4i64..=-1, 1i64..=4], prop::collection::vec(-3i64..=3, 0..5)).prop_map(|(c0, rest)| {
        let mut c = vec![c0];
        c.extend(rest);
        TruncatedSeries::from_ints(&c, N).unwrap()
    })
}

/// Random small integers on all coefficient edges but the last, which is
/// solved from the cycle constraint.
fn module_on(text: &'static str, n: usize) -> impl Strategy<Value = Rank2Module> {
    let p = Profile::parse(text, n).unwrap();
    let edges = coefficient_edges(&p);
    prop::collection::vec(-2i64..=2, edges.len() - 1).prop_filter_map("no series solution", move |vals| {
        let order = 4 * p.n();
        let mut b = CoefficientTuple::zeros(p.n(), order);
        for (&e, &v) in edges.iter().zip(&vals) {
            b.set(e, TruncatedSeries::from_int(v, order));
        }
        let b = solve_constraint(&p, &b, *edges.last().unwrap()).ok()?;
        build_m(&p, &b).ok()
    })
}

fn rotated(m: &Rank2Module, shift: usize) -> Rank2Module {
    let n = m.n();
    let mut b = CoefficientTuple::zeros(n, m.order());
    for e in 1..=n {
        b.set((e - 1 + shift) % n + 1, m.b().get(e).clone());
    }
    build_m(&m.profile().rotate(shift as isize), &b).unwrap()
}

fn summand_sets(m: &Rank2Module) -> Option<Vec<Rim>> {
    let r = classify(m).ok()?;
    r.summands().map(|(a, b)| vec![a.clone(), b.clone()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in series(), b in series(), c in series()) {
        prop_assert!((&(&a * &b) * &c).agrees_with(&(&a * &(&b * &c))));
        prop_assert!((&a * &b).agrees_with(&(&b * &a)));
        prop_assert!((&a * &(&b + &c)).agrees_with(&(&(&a * &b) + &(&a * &c))));
        prop_assert!((&(&a - &b) + &b).agrees_with(&a));
    }

    #[test]
    fn units_invert(u in unit()) {
        prop_assert!((&u * &u.inverse().unwrap()).agrees_with(&TruncatedSeries::one(N)));
    }

    #[test]
    fn valuations_add(a in series(), b in series()) {
        if let (Some(x), Some(y)) = (a.valuation().finite(), b.valuation().finite()) {
            prop_assert_eq!((&a * &b).valuation().finite(), Some(x + y));
        }
    }

    #[test]
    fn exact_division_undoes_shift(a in series(), k in 0usize..5) {
        let back = a.mul_t_power(k).divide_exact(k).unwrap();
        prop_assert!(back.agrees_with(&a));
        let expected = if a.is_zero() { N } else { N - k };
        prop_assert_eq!(back.precision(), expected);
    }

    #[test]
    fn literals_round_trip(a in series()) {
        prop_assert_eq!(TruncatedSeries::parse(&a.to_literal(), N).unwrap(), a);
    }

    #[test]
    fn canonical_rotation_is_idempotent(shift in 0usize..8) {
        let p = Profile::parse("2,4,7,8|1,3,5,6", 8).unwrap().rotate(shift as isize);
        let (c, s) = canonical_rotation(&p);
        prop_assert_eq!(canonical_rotation(&c).1, 0);
        prop_assert_eq!(p.rotate(-(s as isize)), c);
    }

    #[test]
    fn count_is_symmetric(a in 1usize..6, b in 1usize..6, c in 1usize..6) {
        let k = count_indecomposables([a, b, c]);
        prop_assert_eq!(k, count_indecomposables([c, a, b]));
        prop_assert_eq!(k, count_indecomposables([b, a, c]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constructed_modules_satisfy_relations(m in module_on("1,2,5,6,8|3,4,7,9,10", 10)) {
        prop_assert!(m.representation().verify_relations().unwrap());
    }

    #[test]
    fn verdict_is_unit_scaling_invariant(m in module_on("1,3,5,7|2,4,6,8", 8), u in unit()) {
        let u = u.with_order(m.order());
        let scaled = build_m(m.profile(), &m.b().scale(&u)).unwrap();
        let (a, b) = (classify(&m).unwrap(), classify(&scaled).unwrap());
        prop_assert_eq!(&a.verdict, &b.verdict);
        prop_assert_eq!(a.iso_key, b.iso_key);
    }

    #[test]
    fn verdict_is_rotation_equivariant(m in module_on("1,3,5|2,4,6", 6), shift in 1usize..6) {
        let r = rotated(&m, shift);
        let (a, b) = (classify(&m).unwrap(), classify(&r).unwrap());
        prop_assert_eq!(a.verdict.name(), b.verdict.name());
        let moved = summand_sets(&m).map(|v| {
            let mut v: Vec<Rim> = v.iter().map(|x| x.rotate(shift as isize)).collect();
            v.sort();
            v
        });
        prop_assert_eq!(moved, summand_sets(&r));
    }

    #[test]
    fn tight_four_matches_oracle(m in module_on("1,3,5,7|2,4,6,8", 8)) {
        let r = classify(&m).unwrap();
        let oracle = is_indecomposable(m.representation()).unwrap();
        prop_assert_eq!(r.verdict.name() == "Indecomposable", oracle);
    }
}
