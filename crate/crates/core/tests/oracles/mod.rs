//! Brute-force reference implementations used only by tests.
#![allow(dead_code)]

/// `n` with every square factor removed.
pub fn squarefree_part(n: i64) -> i64 {
    assert!(n != 0);
    let mut m = n.abs();
    let mut out = 1;
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    out * m * n.signum()
}

pub fn primes_dividing(n: i64) -> Vec<u64> {
    let mut m = n.unsigned_abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn residue(x: i128, m: u64) -> usize {
    x.rem_euclid(m as i128) as usize
}

/// Whether `z^2 = a x^2 + b y^2` has a primitive solution modulo `p^k`,
/// found by exhaustive search with one coordinate scaled to 1.
pub fn primitive_solution_mod(a: i64, b: i64, p: u64, k: u32) -> bool {
    let m = p.pow(k);
    let mut is_square = vec![false; m as usize];
    let mut b_times_square = vec![false; m as usize];
    for t in 0..m as i128 {
        is_square[residue(t * t, m)] = true;
        b_times_square[residue(b as i128 * t * t, m)] = true;
    }
    let (a, b) = (a as i128, b as i128);
    (0..m as i128).any(|t| {
        let tt = t * t;
        // z = 1
        b_times_square[residue(1 - a * tt, m)]
            // x = 1, t = y
            || is_square[residue(a + b * tt, m)]
            // y = 1, t = x
            || is_square[residue(a * tt + b, m)]
    })
}

/// `(a, b)_v` decided by local solubility: `None` is the real place.
pub fn hilbert_by_solubility(a: i64, b: i64, place: Option<u64>) -> i8 {
    let (a, b) = (squarefree_part(a), squarefree_part(b));
    let soluble = match place {
        None => a > 0 || b > 0,
        Some(2) => primitive_solution_mod(a, b, 2, 5),
        Some(p) => primitive_solution_mod(a, b, p, 3),
    };
    if soluble {
        1
    } else {
        -1
    }
}

/// Whether `<a, b>` and `<c, d>` are isometric over `Q`: equal
/// discriminants and `<a, b>` representing `c` at every place.
pub fn binary_isometric(a: i64, b: i64, c: i64, d: i64) -> bool {
    if squarefree_part(a * b) != squarefree_part(c * d) {
        return false;
    }
    let (alpha, beta) = (a * c, b * c);
    let mut places: Vec<Option<u64>> = vec![None, Some(2)];
    places.extend(primes_dividing(alpha * beta).into_iter().map(Some));
    places.into_iter().all(|v| hilbert_by_solubility(alpha, beta, v) == 1)
}

/// Searches small integer matrices `P` with `P^T diag(a,b) P = diag(c,d)`.
pub fn find_binary_isometry(a: i64, b: i64, c: i64, d: i64, bound: i64) -> Option<[i64; 4]> {
    let r = -bound..=bound;
    for p00 in r.clone() {
        for p10 in r.clone() {
            if a * p00 * p00 + b * p10 * p10 != c {
                continue;
            }
            for p01 in r.clone() {
                for p11 in r.clone() {
                    if a * p01 * p01 + b * p11 * p11 == d && a * p00 * p01 + b * p10 * p11 == 0 {
                        return Some([p00, p01, p10, p11]);
                    }
                }
            }
        }
    }
    None
}
