//! The Grothendieck-Witt ring `GW(k)` of a supported base field.
//!
//! Every element is stored as a finite map from canonical square classes to
//! integer multiplicities, reduced per field:
//!
//! * quadratically closed: a single class `<1>`, so the map is just the rank;
//! * real closed: the free group on `<1>` and `<-1>`;
//! * `F_q`: `<1>` and the canonical non-square `<s>`, with the multiplicity
//!   of `<s>` kept in `{0, 1}` using `<s, s> = <1, 1>`;
//! * `Q`: free on squarefree integers. This presentation is not unique in
//!   `GW(Q)`; use [`GwElement::is_equal`] for equality in the ring.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::field::FieldSpec;
use crate::hilbert::{hilbert_classes, Place};

/// Largest numerator or denominator accepted for a rational representative.
pub const MAX_RATIONAL_INPUT: i64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GwError {
    #[error("representative is zero in the field")]
    ZeroRepresentative,
    #[error("operands live over different fields ({0} and {1})")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("|{0}| exceeds the factoring limit of 10^9")]
    InputTooLarge(i64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("denominator is not invertible in {0}")]
    DenominatorNotInvertible(FieldSpec),
}

/// A square class, stored as a sign and the ascending list of primes
/// dividing a squarefree representative.
///
/// Classes order by the absolute value of that representative, with the
/// positive class first on ties.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SquareClass {
    negative: bool,
    primes: Vec<u64>,
}

impl SquareClass {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn minus_one() -> Self {
        Self {
            negative: true,
            primes: Vec::new(),
        }
    }

    /// Class of a single positive prime (used for the finite-field non-square).
    pub fn prime(p: u64) -> Self {
        Self {
            negative: false,
            primes: alloc::vec![p],
        }
    }

    /// Square class of a nonzero rational, factoring numerator and
    /// denominator by trial division.
    pub fn of_rational(a: Rational64) -> Result<Self, GwError> {
        if a.is_zero() {
            return Err(GwError::ZeroRepresentative);
        }
        for part in [*a.numer(), *a.denom()] {
            if part.unsigned_abs() > MAX_RATIONAL_INPUT as u64 {
                return Err(GwError::InputTooLarge(part));
            }
        }
        let num = arith::odd_primes_of(a.numer().unsigned_abs());
        let den = arith::odd_primes_of(a.denom().unsigned_abs());
        Ok(Self {
            negative: a.is_negative(),
            primes: arith::sym_diff(&num, &den),
        })
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            negative: self.negative != other.negative,
            primes: arith::sym_diff(&self.primes, &other.primes),
        }
    }

    pub fn magnitude(&self) -> BigUint {
        self.primes
            .iter()
            .fold(BigUint::one(), |acc, &p| acc * BigUint::from(p))
    }

    /// The squarefree integer representing this class.
    pub fn to_bigint(&self) -> BigInt {
        let sign = if self.negative { Sign::Minus } else { Sign::Plus };
        BigInt::from_biguint(sign, self.magnitude())
    }
}

impl Ord for SquareClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.magnitude()
            .cmp(&other.magnitude())
            .then(self.negative.cmp(&other.negative))
    }
}

impl PartialOrd for SquareClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bigint())
    }
}

/// Complete invariants of an element: rank, discriminant and, where the
/// field has them, signature and Hasse invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub rank: i64,
    pub discriminant: SquareClass,
    pub signature: Option<i64>,
    /// Hasse invariants `prod_{i<j} (a_i, a_j)_p` keyed by prime; only over `Q`.
    pub hasse: Option<BTreeMap<u64, i8>>,
}

/// Diagonal entries with multiplicities.
type Diagonal = Vec<(SquareClass, u64)>;

/// An element of `GW(k)` in per-field normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GwElement {
    field: FieldSpec,
    terms: BTreeMap<SquareClass, i64>,
}

impl GwElement {
    pub fn zero(field: FieldSpec) -> Self {
        Self {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_int(field, 1)
    }

    /// `n * <1>`.
    pub fn from_int(field: FieldSpec, n: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(SquareClass::one(), n);
        Self::normalize(field, terms)
    }

    /// The rank-one form `<a>`.
    pub fn unit_form(field: FieldSpec, a: impl Into<Rational64>) -> Result<Self, GwError> {
        let a = a.into();
        if a.is_zero() {
            return Err(GwError::ZeroRepresentative);
        }
        let class = match field {
            FieldSpec::QuadraticallyClosed => SquareClass::one(),
            FieldSpec::RealClosed => {
                if a.is_negative() {
                    SquareClass::minus_one()
                } else {
                    SquareClass::one()
                }
            }
            FieldSpec::Finite(ff) => {
                let p = ff.characteristic() as i128;
                let num = *a.numer() as i128;
                let den = *a.denom() as i128;
                if den % p == 0 {
                    return Err(GwError::DenominatorNotInvertible(field));
                }
                if num % p == 0 {
                    return Err(GwError::ZeroRepresentative);
                }
                // a = num/den lies in the class of num*den
                let v = (num.rem_euclid(p)) * (den.rem_euclid(p));
                if ff.is_square_int(v) {
                    SquareClass::one()
                } else {
                    SquareClass::prime(
                        ff.nonsquare_rep()
                            .expect("odd-degree fields have an integer non-square"),
                    )
                }
            }
            FieldSpec::Rational => SquareClass::of_rational(a)?,
        };
        let mut terms = BTreeMap::new();
        terms.insert(class, 1);
        Ok(Self::normalize(field, terms))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero `(class, multiplicity)` pairs in rendering order.
    pub fn terms(&self) -> impl Iterator<Item = (&SquareClass, i64)> {
        self.terms.iter().map(|(c, &m)| (c, m))
    }

    pub fn multiplicity(&self, class: &SquareClass) -> i64 {
        self.terms.get(class).copied().unwrap_or(0)
    }

    /// Multiplicities of `<1>` and `<-1>`; meaningful over a real closed field.
    pub fn sign_parts(&self) -> (i64, i64) {
        (
            self.multiplicity(&SquareClass::one()),
            self.multiplicity(&SquareClass::minus_one()),
        )
    }

    /// `(a, b)` with the element equal to `a<1> + b<s>`, `b` in `{0, 1}`;
    /// meaningful over a finite field.
    pub fn finite_parts(&self) -> (i64, i64) {
        let ones = self.multiplicity(&SquareClass::one());
        let rest: i64 = self
            .terms
            .iter()
            .filter(|(c, _)| !c.is_one())
            .map(|(_, &m)| m)
            .sum();
        (ones, rest)
    }

    fn check_field(&self, other: &Self) -> Result<(), GwError> {
        if self.field != other.field {
            return Err(GwError::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Result<Self, GwError> {
        self.check_field(other)?;
        let mut terms = self.terms.clone();
        for (c, &m) in &other.terms {
            *terms.entry(c.clone()).or_insert(0) += m;
        }
        Ok(Self::normalize(self.field, terms))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GwError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, n: i64) -> Self {
        let terms = self.terms.iter().map(|(c, &m)| (c.clone(), m * n)).collect();
        Self::normalize(self.field, terms)
    }

    /// Bilinear extension of `<a><b> = <ab>`.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Self) -> Result<Self, GwError> {
        self.check_field(other)?;
        let mut terms: BTreeMap<SquareClass, i64> = BTreeMap::new();
        for (c, &m) in &self.terms {
            for (d, &n) in &other.terms {
                *terms.entry(c.mul(d)).or_insert(0) += m * n;
            }
        }
        Ok(Self::normalize(self.field, terms))
    }

    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Reduces arbitrary class products to the field's canonical classes.
    fn normalize(field: FieldSpec, raw: BTreeMap<SquareClass, i64>) -> Self {
        let mut terms: BTreeMap<SquareClass, i64> = BTreeMap::new();
        for (c, m) in raw {
            let c = match field {
                FieldSpec::QuadraticallyClosed => SquareClass::one(),
                FieldSpec::RealClosed => {
                    if c.negative {
                        SquareClass::minus_one()
                    } else {
                        SquareClass::one()
                    }
                }
                FieldSpec::Finite(ff) => {
                    let p = ff.characteristic();
                    let mut v: i128 = if c.negative { -1 } else { 1 };
                    for &q in &c.primes {
                        v = v * (q % p) as i128 % p as i128;
                    }
                    if ff.is_square_int(v) {
                        SquareClass::one()
                    } else {
                        SquareClass::prime(ff.nonsquare_rep().expect("odd-degree field"))
                    }
                }
                FieldSpec::Rational => c,
            };
            *terms.entry(c).or_insert(0) += m;
        }
        if let FieldSpec::Finite(_) = field {
            // <s, s> = <1, 1>: keep the non-square multiplicity in {0, 1}.
            let s_key = terms.keys().find(|c| !c.is_one()).cloned();
            if let Some(s) = s_key {
                let m = terms[&s];
                let b = m.rem_euclid(2);
                *terms.entry(SquareClass::one()).or_insert(0) += m - b;
                terms.insert(s, b);
            }
        }
        terms.retain(|_, m| *m != 0);
        Self { field, terms }
    }

    /// Product of the classes, each counted with its multiplicity.
    pub fn discriminant(&self) -> SquareClass {
        let mut d = SquareClass::one();
        for (c, &m) in &self.terms {
            if m.is_odd() {
                d = d.mul(c);
            }
        }
        d
    }

    pub fn signature(&self) -> Option<i64> {
        match self.field {
            FieldSpec::RealClosed | FieldSpec::Rational => Some(
                self.terms
                    .iter()
                    .map(|(c, &m)| if c.negative { -m } else { m })
                    .sum(),
            ),
            _ => None,
        }
    }

    /// Primes at which Hasse invariants are reported: 2 and every prime
    /// dividing a representative.
    fn hasse_support(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self
            .terms
            .keys()
            .flat_map(|c| c.primes.iter().copied())
            .chain(core::iter::once(2))
            .collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    pub fn invariants(&self) -> Invariants {
        let hasse = match self.field {
            FieldSpec::Rational => Some(
                self.hasse_support()
                    .into_iter()
                    .map(|p| (p, self.hasse_at(p)))
                    .collect(),
            ),
            _ => None,
        };
        Invariants {
            rank: self.rank(),
            discriminant: self.discriminant(),
            signature: self.signature(),
            hasse,
        }
    }

    /// Hasse invariant at `p` of a virtual rational form.
    ///
    /// The pair (discriminant, Hasse invariant) of an honest form multiplies
    /// under orthogonal sum as `(d, h)(d', h') = (dd', hh'(d, d')_p)`. This
    /// extends to virtual classes through inverses `(d, h)^-1 = (d, h (d, d)_p)`.
    fn hasse_at(&self, p: u64) -> i8 {
        let place = Place::Prime(p);
        let sym = |a: &SquareClass, b: &SquareClass| {
            hilbert_classes(a, b, place).expect("p is prime")
        };
        let combine = |(d, h): (SquareClass, i8), (e, k): (SquareClass, i8)| {
            let s = sym(&d, &e);
            (d.mul(&e), h * k * s)
        };
        let mut acc = (SquareClass::one(), 1i8);
        for (c, &m) in &self.terms {
            let step = if m > 0 {
                (c.clone(), 1)
            } else {
                (c.clone(), sym(c, c))
            };
            for _ in 0..m.unsigned_abs() {
                acc = combine(acc, step.clone());
            }
        }
        acc.1
    }

    /// Equality in `GW(k)`.
    ///
    /// Over `Q` the virtual difference is rearranged into two honest forms
    /// `x+ + y-` and `y+ + x-`, which are then compared by rank, signature,
    /// discriminant and Hasse invariants on the joint support plus 2.
    pub fn is_equal(&self, other: &Self) -> Result<bool, GwError> {
        self.check_field(other)?;
        if self.field != FieldSpec::Rational {
            return Ok(self.terms == other.terms);
        }
        let (xp, xn) = self.split_signs();
        let (yp, yn) = other.split_signs();
        let lhs = HonestForm::sum(&xp, &yn);
        let rhs = HonestForm::sum(&yp, &xn);
        Ok(lhs.isometric(&rhs))
    }

    fn split_signs(&self) -> (Diagonal, Diagonal) {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (c, &m) in &self.terms {
            if m > 0 {
                pos.push((c.clone(), m as u64));
            } else {
                neg.push((c.clone(), m.unsigned_abs()));
            }
        }
        (pos, neg)
    }
}

/// A genuine diagonal form over `Q`, given by nonnegative multiplicities.
struct HonestForm {
    diag: BTreeMap<SquareClass, u64>,
}

impl HonestForm {
    fn sum(a: &[(SquareClass, u64)], b: &[(SquareClass, u64)]) -> Self {
        let mut diag = BTreeMap::new();
        for (c, m) in a.iter().chain(b) {
            *diag.entry(c.clone()).or_insert(0) += m;
        }
        Self { diag }
    }

    fn rank(&self) -> u64 {
        self.diag.values().sum()
    }

    fn signature(&self) -> i64 {
        self.diag
            .iter()
            .map(|(c, &m)| if c.negative { -(m as i64) } else { m as i64 })
            .sum()
    }

    fn discriminant(&self) -> SquareClass {
        self.diag
            .iter()
            .filter(|(_, &m)| m % 2 == 1)
            .fold(SquareClass::one(), |d, (c, _)| d.mul(c))
    }

    /// `prod_{i<j} (a_i, a_j)_p` over the diagonal entries.
    fn hasse(&self, p: u64) -> i8 {
        let place = Place::Prime(p);
        let entries: Vec<(&SquareClass, u64)> = self.diag.iter().map(|(c, &m)| (c, m)).collect();
        let mut h = 1i8;
        for (i, &(c, m)) in entries.iter().enumerate() {
            // pairs inside the block of equal entries: C(m, 2) copies of (c, c)
            if (m * m.saturating_sub(1) / 2) % 2 == 1 {
                h *= hilbert_classes(c, c, place).expect("prime");
            }
            for &(d, n) in &entries[i + 1..] {
                if (m * n) % 2 == 1 {
                    h *= hilbert_classes(c, d, place).expect("prime");
                }
            }
        }
        h
    }

    fn isometric(&self, other: &Self) -> bool {
        if self.rank() != other.rank()
            || self.signature() != other.signature()
            || self.discriminant() != other.discriminant()
        {
            return false;
        }
        let mut primes: Vec<u64> = self
            .diag
            .keys()
            .chain(other.diag.keys())
            .flat_map(|c| c.primes.iter().copied())
            .chain(core::iter::once(2))
            .collect();
        primes.sort_unstable();
        primes.dedup();
        primes.into_iter().all(|p| self.hasse(p) == other.hasse(p))
    }
}

/// Renders `2*<1> + <-1> - <6>`; the zero element renders as `0`.
impl fmt::Display for GwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, &m)) in self.terms.iter().enumerate() {
            match (i, m < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = m.unsigned_abs();
            if a != 1 {
                write!(f, "{a}*")?;
            }
            write!(f, "<{c}>")?;
        }
        Ok(())
    }
}
