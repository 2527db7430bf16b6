use gwtrace_core::weyl::{CartanType, Family, ParabolicSubset, SimpleType, WeylError, WeylGroup};

fn ty(parts: &[(Family, u32)]) -> CartanType {
    CartanType::new(parts.iter().map(|&(f, r)| SimpleType::new(f, r).unwrap()).collect()).unwrap()
}

fn sample_types() -> Vec<CartanType> {
    use Family::*;
    vec![
        ty(&[(A, 1)]),
        ty(&[(A, 2)]),
        ty(&[(A, 3)]),
        ty(&[(A, 5)]),
        ty(&[(B, 2)]),
        ty(&[(B, 3)]),
        ty(&[(B, 4)]),
        ty(&[(C, 3)]),
        ty(&[(C, 4)]),
        ty(&[(D, 4)]),
        ty(&[(D, 5)]),
        ty(&[(G, 2)]),
        ty(&[(F, 4)]),
        ty(&[(E, 6)]),
        ty(&[(A, 1), (A, 1)]),
        ty(&[(A, 2), (B, 2)]),
        ty(&[(A, 1), (G, 2)]),
    ]
}

/// Coefficients of `prod_i (1 + t + .. + t^{d_i - 1})`.
fn poincare(degrees: &[u32]) -> Vec<u64> {
    let mut poly = vec![1u64];
    for &d in degrees {
        let mut next = vec![0u64; poly.len() + d as usize - 1];
        for (i, c) in poly.iter().enumerate() {
            for k in 0..d as usize {
                next[i + k] += c;
            }
        }
        poly = next;
    }
    poly
}

fn det(m: &[i8], n: usize) -> i64 {
    let mut a: Vec<f64> = m.iter().map(|&x| x as f64).collect();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i * n + c].abs().total_cmp(&a[j * n + c].abs())).unwrap();
        if a[p * n + c] == 0.0 {
            return 0;
        }
        if p != c {
            for k in 0..n {
                a.swap(p * n + k, c * n + k);
            }
            d = -d;
        }
        d *= a[c * n + c];
        for r in c + 1..n {
            let f = a[r * n + c] / a[c * n + c];
            for k in c..n {
                a[r * n + k] -= f * a[c * n + k];
            }
        }
    }
    d.round() as i64
}

#[test]
fn enumeration_matches_degrees() {
    for t in sample_types() {
        let w = WeylGroup::generate(&t).unwrap();
        assert_eq!(w.order() as u128, t.weyl_order(), "{t}");
        let spectrum: Vec<u64> = w.length_spectrum().values().copied().collect();
        assert_eq!(spectrum, poincare(&t.degrees()), "{t}");
        let top: u32 = t.degrees().iter().map(|d| d - 1).sum();
        assert_eq!(w.length(w.longest_element()), top);
        assert_eq!(t.positive_root_count(), top);
        assert_eq!(w.positive_roots().len() as u32, top, "{t}");
    }
}

#[test]
fn lengths_and_words_are_consistent() {
    for t in sample_types().into_iter().filter(|t| t.weyl_order() <= 1152) {
        let w = WeylGroup::generate(&t).unwrap();
        let n = w.rank();
        for x in 0..w.order() {
            let word = w.reduced_word(x);
            assert_eq!(word.len() as u32, w.length(x));
            let rebuilt = word.iter().fold(0, |acc, &i| w.mul_simple(acc, i as usize - 1));
            assert_eq!(rebuilt, x);
            let sign = if w.length(x).is_multiple_of(2) { 1 } else { -1 };
            assert_eq!(det(w.matrix(x), n), sign, "{t}");
            for i in 0..n {
                let y = w.mul_simple(x, i);
                assert_eq!(w.length(y).abs_diff(w.length(x)), 1);
                assert_eq!(w.mul_simple(y, i), x);
            }
        }
    }
}

#[test]
fn cosets_partition_the_group() {
    for t in sample_types().into_iter().filter(|t| t.weyl_order() <= 1152) {
        let w = WeylGroup::generate(&t).unwrap();
        let r = t.rank();
        for mask in 0u32..(1 << r) {
            let i = ParabolicSubset::new(&t, (1..=r).filter(|k| mask & (1 << (k - 1)) != 0)).unwrap();
            let sub = w.parabolic_elements(&i);
            assert_eq!(sub.len() as u128, i.weyl_order(&t), "{t} {i}");
            let reps = w.min_coset_reps(&i);
            assert_eq!(reps.len() * sub.len(), w.order(), "{t} {i}");
            let mut all: Vec<usize> = reps
                .iter()
                .flat_map(|&(x, lx)| {
                    sub.iter().map(move |&u| (x, lx, u)).collect::<Vec<_>>()
                })
                .map(|(x, lx, u)| {
                    let y = w.mul(x, u);
                    assert_eq!(w.length(y), lx + w.length(u));
                    y
                })
                .collect();
            all.sort_unstable();
            all.dedup();
            assert_eq!(all.len(), w.order());
        }
    }
}

#[test]
fn levi_orders_without_enumeration() {
    let e8 = ty(&[(Family::E, 8)]);
    let e7 = ParabolicSubset::new(&e8, 1..=7).unwrap();
    assert_eq!(e7.weyl_order(&e8), 2_903_040);
    let d7 = ParabolicSubset::new(&e8, 2..=8).unwrap();
    assert_eq!(e7.levi_type(&e8), vec![SimpleType::new(Family::E, 7).unwrap()]);
    assert_eq!(d7.levi_type(&e8), vec![SimpleType::new(Family::D, 7).unwrap()]);
    assert!(matches!(WeylGroup::generate(&e8), Err(WeylError::EnumerationCapExceeded(_))));
    let f4 = ty(&[(Family::F, 4)]);
    let b3 = ParabolicSubset::new(&f4, [1, 2, 3]).unwrap();
    let c3 = ParabolicSubset::new(&f4, [2, 3, 4]).unwrap();
    assert_eq!(b3.levi_type(&f4), vec![SimpleType::new(Family::B, 3).unwrap()]);
    assert_eq!(c3.levi_type(&f4), vec![SimpleType::new(Family::C, 3).unwrap()]);
}

#[test]
fn highest_roots_in_bourbaki_numbering() {
    let highest = |t: CartanType| {
        let w = WeylGroup::generate(&t).unwrap();
        w.positive_roots().into_iter().max_by_key(|r| r.iter().sum::<i64>()).unwrap()
    };
    assert_eq!(highest(ty(&[(Family::G, 2)])), vec![3, 2]);
    assert_eq!(highest(ty(&[(Family::F, 4)])), vec![2, 3, 4, 2]);
    assert_eq!(highest(ty(&[(Family::B, 3)])), vec![1, 2, 2]);
    assert_eq!(highest(ty(&[(Family::C, 3)])), vec![2, 2, 1]);
    assert_eq!(highest(ty(&[(Family::E, 6)])), vec![1, 2, 2, 3, 2, 1]);
}

#[test]
fn invalid_types() {
    assert!(SimpleType::new(Family::E, 5).is_err());
    assert!(SimpleType::new(Family::G, 3).is_err());
    assert!(SimpleType::new(Family::B, 1).is_err());
    assert!(CartanType::new(Vec::new()).is_err());
    let a2 = ty(&[(Family::A, 2)]);
    assert!(ParabolicSubset::new(&a2, [3]).is_err());
}
