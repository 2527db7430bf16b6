//! Stratified-space expressions and their `GW(k)`-valued Euler characteristics.
//!
//! The evaluator applies the trace calculus bottom-up: additivity over
//! stratifications and disjoint unions, multiplicativity over products,
//! vanishing on split tori, reduction to the torus-fixed locus, and the
//! homogeneous-space values `chi(G/B) = |W|` and `chi(G/N(T)) = <1>`.
//! Every rule other than those for points, affine spaces, products and
//! disjoint unions requires `sqrt(-1)` in the base field.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::field::FieldSpec;
use crate::gw::GwElement;
use crate::weyl::{CartanType, ParabolicSubset, WeylError, WeylGroup};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EulerError {
    #[error("the {rule} rule needs sqrt(-1) in the base field, which {field} lacks")]
    SqrtMinusOneRequired { rule: &'static str, field: FieldSpec },
    #[error("invalid expression: {0}")]
    InvalidExpr(String),
    #[error("expression has no Proj, Flag, PartialFlag or GmodT node to expand")]
    NothingToExpand,
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// One stratum `X_j = (T/Gamma_j) x Y_j` of a torus-action decomposition.
///
/// The attractivity hypothesis under which non-fixed strata contribute
/// nothing is asserted by whoever builds the node; it is not checked.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusStratum {
    /// `Gamma_j = T`, i.e. the stratum is pointwise fixed.
    pub gamma_is_full_torus: bool,
    pub slice: SpaceExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SpaceExpr {
    Point,
    Affine(u32),
    Gm,
    /// `G_m^n`, `n >= 1`.
    Torus(u32),
    Proj(u32),
    /// `G/B`.
    Flag(CartanType),
    /// `G/P_I`.
    PartialFlag(CartanType, ParabolicSubset),
    GmodT(CartanType),
    GmodNT(CartanType),
    Product(Box<SpaceExpr>, Box<SpaceExpr>),
    Disjoint(Vec<SpaceExpr>),
    /// A stratification into locally closed smooth strata.
    Strat(Vec<SpaceExpr>),
    TorusAction(Vec<TorusStratum>),
}

/// Result of [`euler_char`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: GwElement,
    /// Set in positive characteristic, where the identities hold after
    /// inverting the characteristic.
    pub p_inverted: bool,
}

impl SpaceExpr {
    pub fn product(a: SpaceExpr, b: SpaceExpr) -> Self {
        SpaceExpr::Product(Box::new(a), Box::new(b))
    }

    fn is_expandable_node(&self) -> bool {
        matches!(
            self,
            SpaceExpr::Proj(_)
                | SpaceExpr::Flag(_)
                | SpaceExpr::PartialFlag(..)
                | SpaceExpr::GmodT(_)
        )
    }

    pub fn contains_expandable(&self) -> bool {
        if self.is_expandable_node() {
            return true;
        }
        match self {
            SpaceExpr::Product(a, b) => a.contains_expandable() || b.contains_expandable(),
            SpaceExpr::Disjoint(xs) | SpaceExpr::Strat(xs) => {
                xs.iter().any(SpaceExpr::contains_expandable)
            }
            SpaceExpr::TorusAction(entries) => {
                entries.iter().any(|e| e.slice.contains_expandable())
            }
            _ => false,
        }
    }
}

/// Evaluates `chi(space)` in `GW(field)`.
pub fn euler_char(space: &SpaceExpr, field: FieldSpec) -> Result<Evaluation, EulerError> {
    Ok(Evaluation {
        value: eval(space, field)?,
        p_inverted: field.characteristic() > 0,
    })
}

fn gate(rule: &'static str, field: FieldSpec) -> Result<(), EulerError> {
    if field.has_sqrt_minus_one() {
        Ok(())
    } else {
        Err(EulerError::SqrtMinusOneRequired { rule, field })
    }
}

fn count(n: u128) -> Result<i64, EulerError> {
    i64::try_from(n).map_err(|_| EulerError::InvalidExpr(format!("cell count {n} overflows")))
}

fn eval(space: &SpaceExpr, field: FieldSpec) -> Result<GwElement, EulerError> {
    let one = || GwElement::one(field);
    let sum = |parts: &[SpaceExpr], what: &str| -> Result<GwElement, EulerError> {
        if parts.is_empty() {
            return Err(EulerError::InvalidExpr(format!("empty {what} list")));
        }
        let mut acc = GwElement::zero(field);
        for p in parts {
            acc = acc.add(&eval(p, field)?).expect("same field");
        }
        Ok(acc)
    };
    match space {
        SpaceExpr::Point | SpaceExpr::Affine(_) => Ok(one()),
        SpaceExpr::Gm => {
            gate("Gm", field)?;
            Ok(GwElement::zero(field))
        }
        SpaceExpr::Torus(n) => {
            if *n == 0 {
                return Err(EulerError::InvalidExpr("Gm^0 is not a torus".into()));
            }
            gate("torus", field)?;
            Ok(GwElement::zero(field))
        }
        SpaceExpr::Proj(n) => {
            gate("projective space", field)?;
            Ok(GwElement::from_int(field, *n as i64 + 1))
        }
        SpaceExpr::Flag(ty) | SpaceExpr::GmodT(ty) => {
            gate(if matches!(space, SpaceExpr::Flag(_)) { "Flag" } else { "GmodT" }, field)?;
            Ok(GwElement::from_int(field, count(ty.weyl_order())?))
        }
        SpaceExpr::PartialFlag(ty, parabolic) => {
            gate("PartialFlag", field)?;
            check_parabolic(ty, parabolic)?;
            let cells = ty.weyl_order() / parabolic.weyl_order(ty);
            Ok(GwElement::from_int(field, count(cells)?))
        }
        SpaceExpr::GmodNT(_) => {
            gate("GmodNT", field)?;
            Ok(one())
        }
        SpaceExpr::Product(a, b) => Ok(eval(a, field)?
            .mul(&eval(b, field)?)
            .expect("same field")),
        SpaceExpr::Disjoint(parts) => sum(parts, "Disjoint"),
        SpaceExpr::Strat(parts) => {
            gate("stratification", field)?;
            sum(parts, "Strat")
        }
        SpaceExpr::TorusAction(entries) => {
            if entries.is_empty() {
                return Err(EulerError::InvalidExpr("empty TorusAction list".into()));
            }
            gate("torus fixed point", field)?;
            let mut acc = GwElement::zero(field);
            for e in entries {
                // evaluate every slice so malformed ones are still reported
                let v = eval(&e.slice, field)?;
                if e.gamma_is_full_torus {
                    acc = acc.add(&v).expect("same field");
                }
            }
            Ok(acc)
        }
    }
}

fn check_parabolic(ty: &CartanType, parabolic: &ParabolicSubset) -> Result<(), EulerError> {
    ParabolicSubset::new(ty, parabolic.indices())?;
    Ok(())
}

/// Replaces every `Proj`, `Flag`, `PartialFlag` and `GmodT` node by its
/// Bruhat cell decomposition, a `Strat` of affine cells in ascending
/// dimension.
pub fn expand(space: &SpaceExpr) -> Result<SpaceExpr, EulerError> {
    if !space.contains_expandable() {
        return Err(EulerError::NothingToExpand);
    }
    expand_node(space)
}

fn cells(mut dims: Vec<u32>) -> SpaceExpr {
    dims.sort_unstable();
    SpaceExpr::Strat(dims.into_iter().map(SpaceExpr::Affine).collect())
}

fn expand_node(space: &SpaceExpr) -> Result<SpaceExpr, EulerError> {
    Ok(match space {
        SpaceExpr::Proj(n) => cells((0..=*n).collect()),
        SpaceExpr::Flag(ty) => {
            let w = WeylGroup::generate(ty)?;
            cells((0..w.order()).map(|x| w.length(x)).collect())
        }
        SpaceExpr::PartialFlag(ty, parabolic) => {
            check_parabolic(ty, parabolic)?;
            let w = WeylGroup::generate(ty)?;
            cells(w.min_coset_reps(parabolic).into_iter().map(|(_, l)| l).collect())
        }
        SpaceExpr::GmodT(ty) => {
            // an affine bundle of rank |Phi+| over G/B
            let w = WeylGroup::generate(ty)?;
            let fibre = ty.positive_root_count();
            cells((0..w.order()).map(|x| w.length(x) + fibre).collect())
        }
        SpaceExpr::Product(a, b) => SpaceExpr::product(expand_node(a)?, expand_node(b)?),
        SpaceExpr::Disjoint(xs) => {
            SpaceExpr::Disjoint(xs.iter().map(expand_node).collect::<Result<_, _>>()?)
        }
        SpaceExpr::Strat(xs) => {
            SpaceExpr::Strat(xs.iter().map(expand_node).collect::<Result<_, _>>()?)
        }
        SpaceExpr::TorusAction(entries) => SpaceExpr::TorusAction(
            entries
                .iter()
                .map(|e| {
                    Ok(TorusStratum {
                        gamma_is_full_torus: e.gamma_is_full_torus,
                        slice: expand_node(&e.slice)?,
                    })
                })
                .collect::<Result<_, EulerError>>()?,
        ),
        other => other.clone(),
    })
}

fn write_list(f: &mut fmt::Formatter<'_>, head: &str, xs: &[SpaceExpr]) -> fmt::Result {
    write!(f, "{head}[")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("]")
}

/// Renders the space grammar: `pt`, `A^n`, `Gm`, `Gm^n`, `P^n`, `Flag(A2)`,
/// `PartialFlag(A2;{1})`, `GmodT(..)`, `GmodNT(..)`, `a*b`, `Strat[..]`,
/// `Disjoint[..]`, and `TorusAction[T:..,N:..]`.
impl fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceExpr::Point => f.write_str("pt"),
            SpaceExpr::Affine(n) => write!(f, "A^{n}"),
            SpaceExpr::Gm => f.write_str("Gm"),
            SpaceExpr::Torus(n) => write!(f, "Gm^{n}"),
            SpaceExpr::Proj(n) => write!(f, "P^{n}"),
            SpaceExpr::Flag(t) => write!(f, "Flag({t})"),
            SpaceExpr::PartialFlag(t, i) => write!(f, "PartialFlag({t};{i})"),
            SpaceExpr::GmodT(t) => write!(f, "GmodT({t})"),
            SpaceExpr::GmodNT(t) => write!(f, "GmodNT({t})"),
            SpaceExpr::Product(a, b) => {
                write!(f, "{a}*")?;
                if matches!(**b, SpaceExpr::Product(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            SpaceExpr::Disjoint(xs) => write_list(f, "Disjoint", xs),
            SpaceExpr::Strat(xs) => write_list(f, "Strat", xs),
            SpaceExpr::TorusAction(entries) => {
                f.write_str("TorusAction[")?;
                for (i, e) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    let tag = if e.gamma_is_full_torus { 'T' } else { 'N' };
                    write!(f, "{tag}:{}", e.slice)?;
                }
                f.write_str("]")
            }
        }
    }
}
