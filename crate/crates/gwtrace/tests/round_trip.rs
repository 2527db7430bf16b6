use gwtrace::parse::{parse_cartan, parse_gw, parse_space};
use gwtrace_core::euler::{SpaceExpr, TorusStratum};
use gwtrace_core::weyl::{CartanType, ParabolicSubset};
use gwtrace_core::{FieldSpec, GwElement};
use num_rational::Rational64;
use proptest::prelude::*;

fn fields() -> Vec<FieldSpec> {
    let mut v = vec![FieldSpec::QuadraticallyClosed, FieldSpec::RealClosed, FieldSpec::Rational];
    v.extend([3, 5, 7, 9, 25].map(|q| FieldSpec::finite(q).unwrap()));
    v
}

fn element() -> impl Strategy<Value = GwElement> {
    (
        prop::sample::select(fields()),
        prop::collection::vec((-4i64..=4, (-60i64..=60).prop_filter("nonzero", |a| *a != 0), 1i64..=9), 0..5),
    )
        .prop_map(|(f, terms)| {
            terms.into_iter().fold(GwElement::zero(f), |acc, (n, a, d)| {
                match GwElement::unit_form(f, Rational64::new(a, d)) {
                    Ok(u) => acc.add(&u.scale(n)).unwrap(),
                    Err(_) => acc,
                }
            })
        })
}

fn cartan() -> impl Strategy<Value = CartanType> {
    prop::sample::select(vec!["A1", "A2", "B3", "C2", "D4", "G2", "F4", "E6", "A1xB2", "A2xA1xG2"])
        .prop_map(|s| parse_cartan(s).unwrap())
}

fn leaf() -> impl Strategy<Value = SpaceExpr> {
    prop_oneof![
        Just(SpaceExpr::Point),
        (0u32..6).prop_map(SpaceExpr::Affine),
        Just(SpaceExpr::Gm),
        (1u32..6).prop_map(SpaceExpr::Torus),
        (0u32..6).prop_map(SpaceExpr::Proj),
        cartan().prop_map(SpaceExpr::Flag),
        cartan().prop_map(SpaceExpr::GmodT),
        cartan().prop_map(SpaceExpr::GmodNT),
        (cartan(), any::<u32>()).prop_map(|(t, mask)| {
            let i = ParabolicSubset::new(&t, (1..=t.rank()).filter(|k| mask & (1 << (k - 1)) != 0)).unwrap();
            SpaceExpr::PartialFlag(t, i)
        }),
    ]
}

fn space() -> impl Strategy<Value = SpaceExpr> {
    leaf().prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SpaceExpr::product(a, b)),
            prop::collection::vec(inner.clone(), 1..4).prop_map(SpaceExpr::Disjoint),
            prop::collection::vec(inner.clone(), 1..4).prop_map(SpaceExpr::Strat),
            prop::collection::vec((any::<bool>(), inner), 1..4).prop_map(|xs| {
                SpaceExpr::TorusAction(
                    xs.into_iter()
                        .map(|(gamma_is_full_torus, slice)| TorusStratum { gamma_is_full_torus, slice })
                        .collect(),
                )
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn gw_elements_round_trip(x in element()) {
        prop_assert_eq!(parse_gw(&x.to_string(), x.field()).unwrap(), x);
    }

    #[test]
    fn spaces_round_trip(s in space()) {
        prop_assert_eq!(parse_space(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn cartan_types_round_trip(t in cartan()) {
        prop_assert_eq!(parse_cartan(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn garbage_never_panics(src in "[ -~]{0,24}") {
        let _ = parse_space(&src);
        let _ = parse_gw(&src, FieldSpec::Rational);
    }
}
