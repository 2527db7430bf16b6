use gwtrace_core::smp::{expand, random_term};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn random_strategies_agree() {
    let mut rng = StdRng::seed_from_u64(7);
    for case in 0..200 {
        let steps = rng.gen_range(2..=8);
        let term = random_term(&mut |k| rng.gen_range(0..k), 4, steps);
        let reference = expand(&term).unwrap();
        for _ in 0..5 {
            let mut strat = StdRng::seed_from_u64(rng.gen());
            let other = term.normalize_with(|k| strat.gen_range(0..k)).unwrap();
            assert_eq!(reference, other, "case {case}: {term}");
        }
    }
}

#[test]
fn rewriting_preserves_source_and_target() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let steps = rng.gen_range(1..=8);
        let term = random_term(&mut |k| rng.gen_range(0..k), 4, steps);
        let nf = expand(&term).unwrap();
        assert_eq!(nf.inputs(), term.inputs());
        assert_eq!(nf.outputs(), term.outputs());
        for (d, _) in nf.summands() {
            assert_eq!(d.inputs(), term.inputs());
            assert_eq!(d.outputs(), term.outputs());
        }
        assert_eq!(expand(&nf).unwrap(), nf);
    }
}

#[test]
fn double_cosets_count_block_matrices() {
    use gwtrace_core::smp::gl_double_cosets;
    for n in 0..=7u32 {
        for i in 0..=n {
            for r in 0..=n {
                let (j, s) = (n - i, n - r);
                let mut brute = Vec::new();
                for a in 0..=n {
                    for b in 0..=n {
                        for c in 0..=n {
                            for d in 0..=n {
                                if a + c == r && b + d == s && a + b == i && c + d == j {
                                    brute.push((a, b));
                                }
                            }
                        }
                    }
                }
                brute.sort();
                assert_eq!(gl_double_cosets(i, j, r, s).unwrap(), brute, "({i},{j},{r},{s})");
            }
        }
    }
}

#[test]
fn splitting_certificates() {
    for n in 0..=12 {
        let c = gwtrace_core::verify_splitting(n).unwrap();
        assert!(c.triangular && c.diagonal_is_projection, "n = {n}");
        let text = c.to_string();
        assert!(text.ends_with("TRIANGULAR: yes\nDIAGONAL: yes"));
        assert_eq!(text.lines().count() as u32, (n + 1) * (n + 1) + 2);
    }
}
