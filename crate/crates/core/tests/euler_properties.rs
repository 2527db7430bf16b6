use gwtrace_core::euler::{euler_char, expand, EulerError, SpaceExpr, TorusStratum};
use gwtrace_core::weyl::{CartanType, Family, ParabolicSubset, WeylGroup};
use gwtrace_core::{FieldSpec, GwElement};
use proptest::prelude::*;

fn small_types() -> Vec<CartanType> {
    use Family::*;
    [(A, 1), (A, 2), (B, 2), (G, 2), (A, 3)]
        .into_iter()
        .map(|(f, r)| CartanType::simple(f, r).unwrap())
        .collect()
}

fn leaf() -> impl Strategy<Value = SpaceExpr> {
    let types = small_types();
    prop_oneof![
        Just(SpaceExpr::Point),
        (0u32..4).prop_map(SpaceExpr::Affine),
        Just(SpaceExpr::Gm),
        (1u32..4).prop_map(SpaceExpr::Torus),
        (0u32..4).prop_map(SpaceExpr::Proj),
        prop::sample::select(types.clone()).prop_map(SpaceExpr::Flag),
        prop::sample::select(types.clone()).prop_map(SpaceExpr::GmodT),
        prop::sample::select(types.clone()).prop_map(SpaceExpr::GmodNT),
        (prop::sample::select(types), any::<u8>()).prop_map(|(t, mask)| {
            let r = t.rank();
            let i = ParabolicSubset::new(&t, (1..=r).filter(|k| mask & (1 << (k - 1)) != 0)).unwrap();
            SpaceExpr::PartialFlag(t, i)
        }),
    ]
}

fn space() -> impl Strategy<Value = SpaceExpr> {
    leaf().prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SpaceExpr::product(a, b)),
            prop::collection::vec(inner.clone(), 1..4).prop_map(SpaceExpr::Disjoint),
            prop::collection::vec(inner.clone(), 1..4).prop_map(SpaceExpr::Strat),
            prop::collection::vec((any::<bool>(), inner), 1..4).prop_map(|xs| {
                SpaceExpr::TorusAction(
                    xs.into_iter()
                        .map(|(full, slice)| TorusStratum { gamma_is_full_torus: full, slice })
                        .collect(),
                )
            }),
        ]
    })
}

fn fields() -> Vec<FieldSpec> {
    vec![FieldSpec::QuadraticallyClosed, FieldSpec::finite(5).unwrap(), FieldSpec::finite(13).unwrap()]
}

fn chi(x: &SpaceExpr, f: FieldSpec) -> GwElement {
    euler_char(x, f).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn additive_and_multiplicative(f in prop::sample::select(fields()), a in space(), b in space(), c in space()) {
        let sum = chi(&a, f).add(&chi(&b, f)).unwrap().add(&chi(&c, f)).unwrap();
        prop_assert_eq!(chi(&SpaceExpr::Strat(vec![a.clone(), b.clone(), c.clone()]), f), sum.clone());
        prop_assert_eq!(chi(&SpaceExpr::Disjoint(vec![a.clone(), b.clone(), c.clone()]), f), sum);
        prop_assert_eq!(
            chi(&SpaceExpr::product(a.clone(), b.clone()), f),
            chi(&a, f).mul(&chi(&b, f)).unwrap()
        );
        prop_assert!(chi(&SpaceExpr::product(SpaceExpr::Gm, a.clone()), f).is_zero());
    }

    #[test]
    fn expansion_preserves_chi(f in prop::sample::select(fields()), a in space()) {
        match expand(&a) {
            Ok(e) => {
                prop_assert!(!e.contains_expandable());
                prop_assert_eq!(chi(&e, f), chi(&a, f));
            }
            Err(err) => {
                prop_assert_eq!(err, EulerError::NothingToExpand);
                prop_assert!(!a.contains_expandable());
            }
        }
    }

    #[test]
    fn torus_action_keeps_fixed_strata(f in prop::sample::select(fields()), xs in prop::collection::vec((any::<bool>(), space()), 1..6)) {
        let expected = xs
            .iter()
            .filter(|(full, _)| *full)
            .fold(GwElement::zero(f), |acc, (_, s)| acc.add(&chi(s, f)).unwrap());
        let node = SpaceExpr::TorusAction(
            xs.into_iter().map(|(full, slice)| TorusStratum { gamma_is_full_torus: full, slice }).collect(),
        );
        prop_assert_eq!(chi(&node, f), expected);
    }
}

#[test]
fn homogeneous_spaces() {
    for f in fields() {
        for t in small_types() {
            let w = WeylGroup::generate(&t).unwrap();
            let order = w.order() as i64;
            assert_eq!(chi(&SpaceExpr::GmodNT(t.clone()), f), GwElement::one(f));
            assert_eq!(chi(&SpaceExpr::Flag(t.clone()), f), GwElement::from_int(f, order));
            assert_eq!(chi(&SpaceExpr::GmodT(t.clone()), f), GwElement::from_int(f, order));
            let total: u64 = w.length_spectrum().values().sum();
            assert_eq!(chi(&SpaceExpr::Flag(t), f).rank(), total as i64);
        }
        for n in 1..=5 {
            assert!(chi(&SpaceExpr::Torus(n), f).is_zero());
        }
    }
}

#[test]
fn fields_without_sqrt_minus_one_reject_gated_rules() {
    for f in [FieldSpec::RealClosed, FieldSpec::Rational, FieldSpec::finite(7).unwrap()] {
        let a2 = CartanType::simple(Family::A, 2).unwrap();
        assert!(matches!(
            euler_char(&SpaceExpr::GmodNT(a2), f),
            Err(EulerError::SqrtMinusOneRequired { .. })
        ));
        assert_eq!(chi(&SpaceExpr::Affine(4), f), GwElement::one(f));
    }
}
