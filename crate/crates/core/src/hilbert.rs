//! Hilbert symbols over the rationals.

use num_rational::Rational64;

use crate::arith;
use crate::gw::{GwError, SquareClass};

/// A place of `Q`: the real place or a finite prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Prime(u64),
}

/// `(a, b)_v` for nonzero rationals `a`, `b`.
///
/// `+1` exactly when `z^2 = a x^2 + b y^2` has a nontrivial solution over the
/// completion of `Q` at `v`.
pub fn hilbert_symbol(a: Rational64, b: Rational64, place: Place) -> Result<i8, GwError> {
    let a = SquareClass::of_rational(a)?;
    let b = SquareClass::of_rational(b)?;
    hilbert_classes(&a, &b, place)
}

/// Hilbert symbol evaluated on rational square classes.
pub fn hilbert_classes(a: &SquareClass, b: &SquareClass, place: Place) -> Result<i8, GwError> {
    match place {
        Place::Real => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Prime(p) if !arith::is_prime(p) => Err(GwError::NotPrime(p)),
        Place::Prime(2) => Ok(at_two(a, b)),
        Place::Prime(p) => Ok(at_odd(a, b, p)),
    }
}

/// Splits a class as `p^alpha * u` and returns `(alpha, u mod m)` with `u`
/// taken as a signed product of the remaining primes.
fn unit_part(c: &SquareClass, p: u64, m: u64) -> (bool, u64) {
    let mut alpha = false;
    let mut u: u128 = 1;
    for &q in c.primes() {
        if q == p {
            alpha = true;
        } else {
            u = u * (q % m) as u128 % m as u128;
        }
    }
    let mut u = u as u64;
    if c.is_negative() {
        u = (m - u) % m;
    }
    (alpha, u)
}

fn at_odd(a: &SquareClass, b: &SquareClass, p: u64) -> i8 {
    let (alpha, u) = unit_part(a, p, p);
    let (beta, v) = unit_part(b, p, p);
    let mut sign = 1i8;
    if alpha && beta && (p - 1) / 2 % 2 == 1 {
        sign = -sign;
    }
    if beta {
        sign *= arith::legendre(u as i128, p);
    }
    if alpha {
        sign *= arith::legendre(v as i128, p);
    }
    sign
}

fn at_two(a: &SquareClass, b: &SquareClass) -> i8 {
    let (alpha, u) = unit_part(a, 2, 8);
    let (beta, v) = unit_part(b, 2, 8);
    let eps = |x: u64| ((x - 1) / 2) % 2;
    let omega = |x: u64| ((x * x - 1) / 8) % 2;
    let mut e = eps(u) * eps(v);
    if alpha {
        e += omega(v);
    }
    if beta {
        e += omega(u);
    }
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}
