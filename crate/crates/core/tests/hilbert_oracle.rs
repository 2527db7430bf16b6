mod oracles;

use gwtrace_core::{hilbert_symbol, Place};
use oracles::hilbert_by_solubility;
use proptest::prelude::*;

fn symbol(a: i64, b: i64, v: Option<u64>) -> i8 {
    let place = v.map_or(Place::Real, Place::Prime);
    hilbert_symbol(a.into(), b.into(), place).unwrap()
}

#[test]
fn agrees_with_solubility_on_a_grid() {
    for v in [None, Some(2), Some(3), Some(5), Some(7), Some(11)] {
        for a in -15i64..=15 {
            for b in -15i64..=15 {
                if a == 0 || b == 0 {
                    continue;
                }
                assert_eq!(symbol(a, b, v), hilbert_by_solubility(a, b, v), "({a},{b}) at {v:?}");
            }
        }
    }
}

#[test]
fn two_five_at_five_is_minus_one() {
    // 2 is not a square mod 5, so z^2 = 2x^2 + 5y^2 forces x = z = 0 mod 5
    assert_eq!(hilbert_by_solubility(2, 5, Some(5)), -1);
    assert_eq!(symbol(2, 5, Some(5)), -1);
}

#[test]
fn product_formula() {
    for a in -12i64..=12 {
        for b in -12i64..=12 {
            if a == 0 || b == 0 {
                continue;
            }
            let mut places = vec![None, Some(2)];
            places.extend(oracles::primes_dividing(a * b).into_iter().filter(|&p| p != 2).map(Some));
            let prod: i8 = places.iter().map(|&v| symbol(a, b, v)).product();
            assert_eq!(prod, 1, "({a},{b})");
        }
    }
}

fn nonzero() -> impl Strategy<Value = i64> {
    (-50i64..=50).prop_filter("nonzero", |x| *x != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bimultiplicative(a in nonzero(), b in nonzero(), c in nonzero(), extra in prop::sample::select(vec![3u64, 13, 31])) {
        let mut places = vec![None, Some(2), Some(extra)];
        places.extend(oracles::primes_dividing(a * b * c).into_iter().map(Some));
        places.sort();
        places.dedup();
        for v in places {
            let ab = symbol(a, b, v);
            let ac = symbol(a, c, v);
            prop_assert_eq!(ab, hilbert_by_solubility(a, b, v));
            prop_assert_eq!(ac, hilbert_by_solubility(a, c, v));
            prop_assert_eq!(symbol(a, b * c, v), ab * ac);
            prop_assert_eq!(symbol(a, b * c, v), hilbert_by_solubility(a, b * c, v));
            prop_assert_eq!(symbol(a, b, v), symbol(b, a, v));
        }
    }
}
