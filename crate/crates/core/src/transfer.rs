//! Double-coset transfer formulas and the averaging projector on the
//! polynomial model `Q[x_1, .., x_r]` with the reflection action of `W`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::weyl::{CartanType, ParabolicSubset, WeylError, WeylGroup};

/// Largest degree cap accepted by [`averaging_projector_check`].
pub const MAX_DEGREE: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransferError {
    #[error("degree cap {0} exceeds the maximum of 12")]
    DegreeCapExceeded(u32),
    #[error("integer overflow while accumulating the group sum")]
    ArithmeticOverflow,
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// The restriction `p*(K, H^g)` attached to a maximal-rank term; `H` is the
/// Levi factor of the parabolic `P_I` and `K = T`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Restriction {
    pub levi: ParabolicSubset,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransferTerm {
    /// Reduced word of the conjugator, 1-based; empty for the identity.
    pub conjugator: Vec<u32>,
    pub length: u32,
    pub restriction: Option<Restriction>,
    pub coefficient: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferFormula {
    pub cartan_type: CartanType,
    pub terms: Vec<TransferTerm>,
}

fn word(w: &[u32]) -> String {
    use core::fmt::Write;
    if w.is_empty() {
        return "e".into();
    }
    let mut s = String::new();
    for i in w {
        let _ = write!(s, "s{i}");
    }
    s
}

impl fmt::Display for TransferTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficient != 1 {
            write!(f, "{}*", self.coefficient)?;
        }
        let g = word(&self.conjugator);
        if let Some(r) = &self.restriction {
            write!(f, "p*(T,H{}^{g}) . ", r.levi)?;
        }
        write!(f, "C[{g}]")
    }
}

/// One line per term, in the enumeration order.
impl fmt::Display for TransferFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// `res^G_T tr^G_T = sum_{w in W} C_w`: one term per Weyl group element.
pub fn torus_transfer_formula(ty: &CartanType) -> Result<TransferFormula, TransferError> {
    let w = WeylGroup::generate(ty)?;
    let terms = (0..w.order())
        .map(|x| TransferTerm {
            conjugator: w.reduced_word(x),
            length: w.length(x),
            restriction: None,
            coefficient: 1,
        })
        .collect();
    Ok(TransferFormula {
        cartan_type: ty.clone(),
        terms,
    })
}

/// The maximal-rank formula `sum_{g in W/W_I} p*(T, H^g) . C_g`, one term
/// per minimal coset representative.
pub fn maxrank_transfer_formula(
    ty: &CartanType,
    parabolic: &ParabolicSubset,
) -> Result<TransferFormula, TransferError> {
    let parabolic = ParabolicSubset::new(ty, parabolic.indices())?;
    let w = WeylGroup::generate(ty)?;
    let restriction = (!parabolic.is_empty()).then(|| Restriction {
        levi: parabolic.clone(),
    });
    let terms = w
        .min_coset_reps(&parabolic)
        .into_iter()
        .map(|(x, length)| TransferTerm {
            conjugator: w.reduced_word(x),
            length,
            restriction: restriction.clone(),
            coefficient: 1,
        })
        .collect();
    Ok(TransferFormula {
        cartan_type: ty.clone(),
        terms,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectorReport {
    pub cartan_type: CartanType,
    pub degree_cap: u32,
    pub group_order: u64,
    /// `e . e = e` in every degree.
    pub projector_idempotent: bool,
    /// `dim im(e)` in degrees `0..=d`.
    pub image_dims: Vec<u64>,
    /// Molien-series coefficients in degrees `0..=d`.
    pub molien_dims: Vec<u64>,
    pub matches: bool,
    /// Every `W`-fixed polynomial is fixed by `e`.
    pub invariants_fixed: bool,
    /// `s_i . e = e` for every simple reflection.
    pub image_fixed: bool,
}

impl ProjectorReport {
    pub fn holds(&self) -> bool {
        self.projector_idempotent && self.matches && self.invariants_fixed && self.image_fixed
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn list(f: &mut fmt::Formatter<'_>, xs: &[u64]) -> fmt::Result {
    f.write_str("[")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("]")
}

impl fmt::Display for ProjectorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "type: {}", self.cartan_type)?;
        writeln!(f, "degree cap: {}", self.degree_cap)?;
        writeln!(f, "group order: {}", self.group_order)?;
        writeln!(f, "projector idempotent: {}", yes(self.projector_idempotent))?;
        f.write_str("image dims: ")?;
        list(f, &self.image_dims)?;
        f.write_str("\nmolien dims: ")?;
        list(f, &self.molien_dims)?;
        writeln!(f, "\nmatch: {}", yes(self.matches))?;
        writeln!(f, "invariants fixed: {}", yes(self.invariants_fixed))?;
        write!(f, "image fixed: {}", yes(self.image_fixed))
    }
}

/// Exponent vectors of degree `d` in `r` variables, lexicographically.
fn monomials(r: usize, d: u32) -> Vec<Vec<u8>> {
    fn go(r: usize, left: u32, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() + 1 == r {
            cur.push(left as u8);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e as u8);
            go(r, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(r, d, &mut Vec::new(), &mut out);
    out
}

/// Monomial bases of `Sym^0 .. Sym^d` with multiplication tables.
struct Basis {
    rank: usize,
    /// `up[d][m][k]`: index in degree `d + 1` of monomial `m * x_k`.
    up: Vec<Vec<Vec<usize>>>,
    /// For degree `d >= 1`, monomial `m` factors as `parent * x_var`.
    factor: Vec<Vec<(usize, usize)>>,
    sizes: Vec<usize>,
}

impl Basis {
    fn new(rank: usize, cap: u32) -> Self {
        let mons: Vec<Vec<Vec<u8>>> = (0..=cap).map(|d| monomials(rank, d)).collect();
        let index: Vec<BTreeMap<&[u8], usize>> = mons
            .iter()
            .map(|ms| ms.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect())
            .collect();
        let mut up = Vec::new();
        let mut factor = vec![Vec::new()];
        for d in 0..cap as usize {
            up.push(
                mons[d]
                    .iter()
                    .map(|m| {
                        (0..rank)
                            .map(|k| {
                                let mut n = m.clone();
                                n[k] += 1;
                                index[d + 1][n.as_slice()]
                            })
                            .collect()
                    })
                    .collect(),
            );
            factor.push(
                mons[d + 1]
                    .iter()
                    .map(|m| {
                        let k = m.iter().position(|&e| e > 0).expect("positive degree");
                        let mut p = m.clone();
                        p[k] -= 1;
                        (index[d][p.as_slice()], k)
                    })
                    .collect(),
            );
        }
        Self {
            rank,
            up,
            factor,
            sizes: mons.iter().map(Vec::len).collect(),
        }
    }

    /// Matrices of `w` on `Sym^0 .. Sym^cap`, column `m` holding the image
    /// of monomial `m`.
    fn action(&self, w: &[i8]) -> Result<Vec<Vec<Vec<i128>>>, TransferError> {
        let r = self.rank;
        let mut out: Vec<Vec<Vec<i128>>> = vec![vec![vec![1]]];
        for d in 1..self.sizes.len() {
            let prev = &out[d - 1];
            let mut cols = Vec::with_capacity(self.sizes[d]);
            for &(parent, k) in &self.factor[d] {
                let mut col = vec![0i128; self.sizes[d]];
                for (m, &c) in prev[parent].iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for j in 0..r {
                        let l = w[j * r + k] as i128;
                        if l != 0 {
                            let slot = &mut col[self.up[d - 1][m][j]];
                            *slot = c
                                .checked_mul(l)
                                .and_then(|x| slot.checked_add(x))
                                .ok_or(TransferError::ArithmeticOverflow)?;
                        }
                    }
                }
                cols.push(col);
            }
            out.push(cols);
        }
        Ok(out)
    }
}

/// Coefficients `1, a_1, .., a_r` of `det(I - t A)`, by Faddeev-LeVerrier.
fn det_one_minus_t(a: &[i8], r: usize) -> Vec<i128> {
    let mut coeffs = vec![1i128];
    let mut m = vec![0i128; r * r];
    for k in 1..=r {
        let prev = coeffs[k - 1];
        let mut next = vec![0i128; r * r];
        for i in 0..r {
            for j in 0..r {
                next[i * r + j] = (0..r).map(|l| a[i * r + l] as i128 * m[l * r + j]).sum();
            }
            next[i * r + i] += prev;
        }
        m = next;
        let trace: i128 = (0..r)
            .map(|i| (0..r).map(|l| a[i * r + l] as i128 * m[l * r + i]).sum::<i128>())
            .sum();
        coeffs.push(-trace / k as i128);
    }
    coeffs
}

/// First `d + 1` coefficients of `1 / p(t)` for `p(0) = 1`.
fn invert_series(p: &[i128], d: usize) -> Vec<i128> {
    let mut q = vec![0i128; d + 1];
    q[0] = 1;
    for n in 1..=d {
        q[n] = -(1..p.len().min(n + 1)).map(|k| p[k] * q[n - k]).sum::<i128>();
    }
    q
}

type Matrix = Vec<Vec<BigInt>>;

/// Converts column-major `i128` data to a row-major big-integer matrix.
fn to_rows(cols: &[Vec<i128>]) -> Matrix {
    let n = cols.len();
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(cols[j][i])).collect())
        .collect()
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for (k, aik) in a[i].iter().enumerate() {
                        if !aik.is_zero() {
                            s += aik * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (top, rest) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in rest.iter_mut().zip(top.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

fn rational(m: &Matrix) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Basis of the common kernel of the given square matrices.
fn common_kernel(ms: &[Matrix], n: usize) -> Vec<Vec<BigRational>> {
    let mut stacked: Vec<Vec<BigRational>> = ms.iter().flat_map(rational).collect();
    if stacked.is_empty() {
        stacked.push(vec![BigRational::zero(); n]);
    }
    let pivots = rref(&mut stacked);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -stacked[row][f].clone();
            }
            v
        })
        .collect()
}

/// Builds `S = sum_w C_w` on each `Sym^k`, `k <= d`, and checks that
/// `e = S / |W|` is an idempotent whose image is the space of invariants,
/// with dimensions given by the Molien series.
pub fn averaging_projector_check(
    ty: &CartanType,
    d: u32,
) -> Result<ProjectorReport, TransferError> {
    if d > MAX_DEGREE {
        return Err(TransferError::DegreeCapExceeded(d));
    }
    let group = WeylGroup::generate(ty)?;
    let r = group.rank();
    let order = group.order();
    let basis = Basis::new(r, d);
    let du = d as usize;

    let mut sums: Vec<Vec<Vec<i128>>> = basis.sizes.iter().map(|&n| vec![vec![0; n]; n]).collect();
    let mut molien_num = vec![0i128; du + 1];
    for w in 0..order {
        let mat = group.matrix(w);
        for (acc, cols) in sums.iter_mut().zip(basis.action(mat)?) {
            for (a, c) in acc.iter_mut().zip(cols) {
                for (x, y) in a.iter_mut().zip(c) {
                    *x = x.checked_add(y).ok_or(TransferError::ArithmeticOverflow)?;
                }
            }
        }
        let series = invert_series(&det_one_minus_t(mat, r), du);
        for (m, s) in molien_num.iter_mut().zip(series) {
            *m += s;
        }
    }
    let reflections: Vec<Vec<Matrix>> = (0..r)
        .map(|i| {
            basis
                .action(group.matrix(group.simple_reflection(i)))
                .map(|per_degree| per_degree.iter().map(|c| to_rows(c)).collect())
        })
        .collect::<Result<_, _>>()?;

    let big_order = BigInt::from(order);
    let mut idempotent = true;
    let mut invariants_fixed = true;
    let mut image_fixed = true;
    let mut image_dims = Vec::with_capacity(du + 1);
    for (k, cols) in sums.iter().enumerate() {
        let n = basis.sizes[k];
        let s = to_rows(cols);
        let scaled: Matrix = s.iter().map(|row| row.iter().map(|x| x * &big_order).collect()).collect();
        idempotent &= mat_mul(&s, &s) == scaled;

        let mut q = rational(&s);
        image_dims.push(rref(&mut q).len() as u64);

        let shifted: Vec<Matrix> = reflections
            .iter()
            .map(|per_degree| {
                let mut m = per_degree[k].clone();
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] -= 1;
                }
                m
            })
            .collect();
        let kernel = common_kernel(&shifted, n);
        let ratio_order = BigRational::from_integer(big_order.clone());
        for v in &kernel {
            let sv: Vec<BigRational> = s
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(v)
                        .map(|(a, b)| BigRational::from_integer(a.clone()) * b)
                        .fold(BigRational::zero(), |x, y| x + y)
                })
                .collect();
            invariants_fixed &= sv.iter().zip(v).all(|(a, b)| *a == b * &ratio_order);
        }
        invariants_fixed &= kernel.len() as u64 == image_dims[k];
        for per_degree in &reflections {
            image_fixed &= mat_mul(&per_degree[k], &s) == s;
        }
    }

    let mut exact = true;
    let molien_dims = molien_num
        .iter()
        .map(|&m| {
            exact &= m % order as i128 == 0;
            (m / order as i128) as u64
        })
        .collect::<Vec<_>>();
    let matches = exact && molien_dims == image_dims;
    Ok(ProjectorReport {
        cartan_type: ty.clone(),
        degree_cap: d,
        group_order: order as u64,
        projector_idempotent: idempotent,
        image_dims,
        molien_dims,
        matches,
        invariants_fixed,
        image_fixed,
    })
}
