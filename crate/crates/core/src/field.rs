//! Base-field descriptors.
//!
//! A [`FieldSpec`] records only what the quadratic-form calculus needs to
//! know about the base field: its square classes and whether `-1` is a
//! square. Characteristic 2 is never representable.

use core::fmt;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("F{0}: field order must be an odd prime power")]
    NotOddPrimePower(u64),
}

/// A finite field `F_q`, `q = p^k` with `p` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteField {
    q: u64,
    p: u64,
    k: u32,
}

impl FiniteField {
    pub fn new(q: u64) -> Result<Self, FieldError> {
        match arith::prime_power(q) {
            Some((p, k)) if p != 2 => Ok(Self { q, p, k }),
            _ => Err(FieldError::NotOddPrimePower(q)),
        }
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Whether the image of the integer `a` (assumed prime to `p`) is a
    /// square in `F_q`. Integers land in the prime field, and every element
    /// of `F_p` is a square in an even-degree extension.
    pub fn is_square_int(&self, a: i128) -> bool {
        self.k.is_multiple_of(2) || arith::legendre(a, self.p) == 1
    }

    /// The smallest positive integer that is a non-square in `F_q`, if any
    /// integer is. For even `k` every integer is a square and the non-square
    /// class has no integer representative.
    pub fn nonsquare_rep(&self) -> Option<u64> {
        if self.k.is_multiple_of(2) {
            return None;
        }
        (2..self.p).find(|&a| arith::legendre(a as i128, self.p) == -1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldSpec {
    QuadraticallyClosed,
    RealClosed,
    Finite(FiniteField),
    Rational,
}

impl FieldSpec {
    pub fn finite(q: u64) -> Result<Self, FieldError> {
        FiniteField::new(q).map(FieldSpec::Finite)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Finite(f) => f.characteristic(),
            _ => 0,
        }
    }

    pub fn has_sqrt_minus_one(&self) -> bool {
        match self {
            FieldSpec::QuadraticallyClosed => true,
            FieldSpec::RealClosed | FieldSpec::Rational => false,
            FieldSpec::Finite(f) => f.order() % 4 == 1,
        }
    }
}

/// Renders the short names used on the command line: `Qbar`, `R`, `F<q>`, `Q`.
impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::QuadraticallyClosed => f.write_str("Qbar"),
            FieldSpec::RealClosed => f.write_str("R"),
            FieldSpec::Finite(ff) => write!(f, "F{}", ff.order()),
            FieldSpec::Rational => f.write_str("Q"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_even_and_composite_orders() {
        assert!(FieldSpec::finite(2).is_err());
        assert!(FieldSpec::finite(8).is_err());
        assert!(FieldSpec::finite(15).is_err());
        assert!(FieldSpec::finite(1).is_err());
        assert!(FieldSpec::finite(9).is_ok());
    }

    #[test]
    fn sqrt_minus_one_predicate() {
        assert!(FieldSpec::QuadraticallyClosed.has_sqrt_minus_one());
        assert!(!FieldSpec::RealClosed.has_sqrt_minus_one());
        assert!(!FieldSpec::Rational.has_sqrt_minus_one());
        assert!(FieldSpec::finite(5).unwrap().has_sqrt_minus_one());
        assert!(FieldSpec::finite(13).unwrap().has_sqrt_minus_one());
        assert!(!FieldSpec::finite(7).unwrap().has_sqrt_minus_one());
        assert!(FieldSpec::finite(9).unwrap().has_sqrt_minus_one());
    }

    #[test]
    fn canonical_nonsquare() {
        let f = |q| FiniteField::new(q).unwrap().nonsquare_rep();
        assert_eq!(f(7), Some(3));
        assert_eq!(f(5), Some(2));
        assert_eq!(f(3), Some(2));
        assert_eq!(f(23), Some(5));
        assert_eq!(f(27), Some(2));
        assert_eq!(f(9), None);
    }
}
