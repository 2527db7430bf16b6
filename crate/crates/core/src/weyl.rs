//! Root data and finite Weyl groups.
//!
//! Weyl group elements are integer matrices on the simple-root basis. The
//! full group is materialized by breadth-first search over right
//! multiplication by simple reflections, which also yields Coxeter lengths.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Groups larger than this are never materialized.
pub const ENUMERATION_CAP: u128 = 2_000_000;

/// Largest total rank accepted for a Cartan type (keeps `|W|` inside `u128`).
pub const MAX_TOTAL_RANK: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error("{family}{rank} is not a valid Cartan type")]
    InvalidType { family: char, rank: u32 },
    #[error("Cartan type needs at least one factor")]
    EmptyType,
    #[error("total rank {0} exceeds the supported maximum {MAX_TOTAL_RANK}")]
    RankTooLarge(u32),
    #[error("|W| = {0} exceeds the enumeration cap of 2*10^6")]
    EnumerationCapExceeded(u128),
    #[error("simple root index {index} outside 1..={rank}")]
    IndexOutOfRange { index: u32, rank: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// An irreducible Cartan type such as `B3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleType {
    family: Family,
    rank: u32,
}

impl SimpleType {
    /// Validates rank bounds; `D3` is normalized to `A3`.
    pub fn new(family: Family, rank: u32) -> Result<Self, WeylError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(WeylError::InvalidType {
                family: family.letter(),
                rank,
            });
        }
        if family == Family::D && rank == 3 {
            return Ok(Self {
                family: Family::A,
                rank: 3,
            });
        }
        Ok(Self { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Degrees of the fundamental invariants.
    pub fn degrees(&self) -> Vec<u32> {
        let n = self.rank;
        match self.family {
            Family::A => (2..=n + 1).collect(),
            Family::B | Family::C => (1..=n).map(|i| 2 * i).collect(),
            Family::D => {
                let mut d: Vec<u32> = (1..n).map(|i| 2 * i).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
            Family::E => match n {
                6 => vec![2, 5, 6, 8, 9, 12],
                7 => vec![2, 6, 8, 10, 12, 14, 18],
                _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
            },
            Family::F => vec![2, 6, 8, 12],
            Family::G => vec![2, 6],
        }
    }

    /// Cartan matrix `a_ij = <alpha_i^vee, alpha_j>` in Bourbaki numbering,
    /// row-major.
    pub fn cartan_matrix(&self) -> Vec<i64> {
        let n = self.rank as usize;
        let mut a = vec![0i64; n * n];
        for i in 0..n {
            a[i * n + i] = 2;
        }
        let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
            a[i * n + j] = aij;
            a[j * n + i] = aji;
        };
        match self.family {
            Family::A => (0..n - 1).for_each(|i| link(i, i + 1, -1, -1)),
            Family::B => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 2, n - 1, -1, -2);
            }
            Family::C => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 2, n - 1, -2, -1);
            }
            Family::D => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 3, n - 1, -1, -1);
            }
            Family::E => {
                link(0, 2, -1, -1);
                link(1, 3, -1, -1);
                (2..n - 1).for_each(|i| link(i, i + 1, -1, -1));
            }
            Family::F => {
                link(0, 1, -1, -1);
                link(1, 2, -1, -2);
                link(2, 3, -1, -1);
            }
            Family::G => link(0, 1, -3, -1),
        }
        a
    }

    pub fn weyl_order(&self) -> u128 {
        self.degrees().iter().map(|&d| d as u128).product()
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// A possibly reducible Cartan type, as an ordered list of irreducible factors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CartanType {
    factors: Vec<SimpleType>,
}

impl CartanType {
    pub fn new(factors: Vec<SimpleType>) -> Result<Self, WeylError> {
        if factors.is_empty() {
            return Err(WeylError::EmptyType);
        }
        let total: u32 = factors.iter().map(|t| t.rank).sum();
        if total > MAX_TOTAL_RANK {
            return Err(WeylError::RankTooLarge(total));
        }
        Ok(Self { factors })
    }

    pub fn simple(family: Family, rank: u32) -> Result<Self, WeylError> {
        Self::new(vec![SimpleType::new(family, rank)?])
    }

    pub fn factors(&self) -> &[SimpleType] {
        &self.factors
    }

    pub fn rank(&self) -> u32 {
        self.factors.iter().map(|t| t.rank).sum()
    }

    /// Degrees of all factors, concatenated.
    pub fn degrees(&self) -> Vec<u32> {
        self.factors.iter().flat_map(|t| t.degrees()).collect()
    }

    /// `|W|` as the product of the degrees.
    pub fn weyl_order(&self) -> u128 {
        self.factors.iter().map(|t| t.weyl_order()).product()
    }

    /// Number of positive roots, `sum (d_i - 1)`.
    pub fn positive_root_count(&self) -> u32 {
        self.degrees().iter().map(|d| d - 1).sum()
    }

    /// Block-diagonal Cartan matrix, row-major, side `rank()`.
    pub fn cartan_matrix(&self) -> Vec<i64> {
        let n = self.rank() as usize;
        let mut a = vec![0i64; n * n];
        let mut off = 0;
        for t in &self.factors {
            let m = t.rank as usize;
            let b = t.cartan_matrix();
            for i in 0..m {
                for j in 0..m {
                    a[(off + i) * n + off + j] = b[i * m + j];
                }
            }
            off += m;
        }
        a
    }
}

/// Renders `A2`, `B3`, products as `A1xA1`.
impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// A subset `I` of simple-root indices (1-based), naming the parabolic `P_I`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ParabolicSubset {
    indices: BTreeSet<u32>,
}

impl ParabolicSubset {
    pub fn new(ty: &CartanType, indices: impl IntoIterator<Item = u32>) -> Result<Self, WeylError> {
        let rank = ty.rank();
        let indices: BTreeSet<u32> = indices.into_iter().collect();
        if let Some(&index) = indices.iter().find(|&&i| i == 0 || i > rank) {
            return Err(WeylError::IndexOutOfRange { index, rank });
        }
        Ok(Self { indices })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn indices(&self) -> impl Iterator<Item = u32> + '_ {
        self.indices.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Irreducible types of the Levi subdiagram on `I`.
    pub fn levi_type(&self, ty: &CartanType) -> Vec<SimpleType> {
        let n = ty.rank() as usize;
        let a = ty.cartan_matrix();
        let idx: Vec<usize> = self.indices.iter().map(|&i| (i - 1) as usize).collect();
        let m = idx.len();
        let mut sub = vec![0i64; m * m];
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                sub[r * m + c] = a[i * n + j];
            }
        }
        classify(&sub, m)
    }

    /// `|W_I|`, from the degrees of the Levi subdiagram.
    pub fn weyl_order(&self, ty: &CartanType) -> u128 {
        self.levi_type(ty).iter().map(|t| t.weyl_order()).product()
    }
}

impl fmt::Display for ParabolicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// Identifies the connected components of a Cartan matrix (row-major,
/// side `n`) as irreducible types.
pub fn classify(a: &[i64], n: usize) -> Vec<SimpleType> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            comp.push(i);
            for j in 0..n {
                if j != i && a[i * n + j] != 0 && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(classify_connected(a, n, &comp));
    }
    out
}

fn classify_connected(a: &[i64], n: usize, comp: &[usize]) -> SimpleType {
    let k = comp.len() as u32;
    let mk = |f, r| SimpleType::new(f, r).expect("classified types are valid");
    if k == 1 {
        return mk(Family::A, 1);
    }
    let neighbours = |i: usize| comp.iter().copied().filter(move |&j| j != i && a[i * n + j] != 0);
    let bond = |i: usize, j: usize| a[i * n + j] * a[j * n + i];
    let mut max_bond = 1;
    let mut double = None;
    for &i in comp {
        for j in neighbours(i) {
            let b = bond(i, j);
            if b > max_bond {
                max_bond = b;
            }
            if b == 2 {
                double = Some((i, j));
            }
        }
    }
    if max_bond == 3 {
        return mk(Family::G, 2);
    }
    if let Some((i, j)) = double {
        let deg = |x: usize| neighbours(x).count();
        if k == 4 && deg(i) == 2 && deg(j) == 2 {
            return mk(Family::F, 4);
        }
        let (end, other) = if deg(i) == 1 { (i, j) } else { (j, i) };
        // |a_{end,other}| = 2 means the end root is short: B_n
        let family = if k == 2 || a[end * n + other] == -2 {
            Family::B
        } else {
            Family::C
        };
        return mk(family, k);
    }
    let branch = comp.iter().copied().find(|&i| neighbours(i).count() == 3);
    let Some(b) = branch else {
        return mk(Family::A, k);
    };
    let mut arms: Vec<u32> = neighbours(b)
        .map(|start| {
            let mut len = 1;
            let (mut prev, mut cur) = (b, start);
            loop {
                let next = neighbours(cur).find(|&x| x != prev);
                match next {
                    Some(nx) => {
                        prev = cur;
                        cur = nx;
                        len += 1;
                    }
                    None => break len,
                }
            }
        })
        .collect();
    arms.sort_unstable();
    match arms.as_slice() {
        [1, 1, _] => mk(Family::D, k),
        _ => mk(Family::E, k),
    }
}

/// A finite Weyl group with every element materialized.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    ty: CartanType,
    rank: usize,
    cartan: Vec<i64>,
    elements: Vec<Vec<i8>>,
    lengths: Vec<u32>,
    right_mul: Vec<u32>,
    parent: Vec<(u32, u8)>,
}

impl WeylGroup {
    /// Generates `W` by breadth-first search from the identity.
    pub fn generate(ty: &CartanType) -> Result<Self, WeylError> {
        let order = ty.weyl_order();
        if order > ENUMERATION_CAP {
            return Err(WeylError::EnumerationCapExceeded(order));
        }
        let n = ty.rank() as usize;
        let cartan = ty.cartan_matrix();
        let mut identity = vec![0i8; n * n];
        for i in 0..n {
            identity[i * n + i] = 1;
        }
        let mut index: BTreeMap<Vec<i8>, u32> = BTreeMap::new();
        let mut elements = vec![identity.clone()];
        let mut lengths = vec![0u32];
        let mut parent = vec![(0u32, u8::MAX)];
        let mut right_mul: Vec<u32> = Vec::with_capacity(order as usize * n);
        index.insert(identity, 0);
        let mut cursor = 0usize;
        while cursor < elements.len() {
            for i in 0..n {
                let prod = right_reflect(&elements[cursor], &cartan, n, i);
                let id = match index.get(&prod) {
                    Some(&id) => id,
                    None => {
                        let id = elements.len() as u32;
                        index.insert(prod.clone(), id);
                        elements.push(prod);
                        lengths.push(lengths[cursor] + 1);
                        parent.push((cursor as u32, i as u8));
                        id
                    }
                };
                right_mul.push(id);
            }
            cursor += 1;
        }
        Ok(Self {
            ty: ty.clone(),
            rank: n,
            cartan,
            elements,
            lengths,
            right_mul,
            parent,
        })
    }

    pub fn cartan_type(&self) -> &CartanType {
        &self.ty
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Matrix of element `w` on the simple-root basis, row-major.
    pub fn matrix(&self, w: usize) -> &[i8] {
        &self.elements[w]
    }

    pub fn length(&self, w: usize) -> u32 {
        self.lengths[w]
    }

    /// Index of `w * s_i` (`i` 0-based).
    pub fn mul_simple(&self, w: usize, i: usize) -> usize {
        self.right_mul[w * self.rank + i] as usize
    }

    /// A reduced word for `w`, as 1-based simple reflection indices.
    pub fn reduced_word(&self, mut w: usize) -> Vec<u32> {
        let mut word = Vec::with_capacity(self.lengths[w] as usize);
        while w != 0 {
            let (p, i) = self.parent[w];
            word.push(i as u32 + 1);
            w = p as usize;
        }
        word.reverse();
        word
    }

    pub fn simple_reflection(&self, i: usize) -> usize {
        self.mul_simple(0, i)
    }

    /// Index of the matrix product `a * b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.reduced_word(b)
            .into_iter()
            .fold(a, |acc, i| self.mul_simple(acc, i as usize - 1))
    }

    /// The unique element of maximal length.
    pub fn longest_element(&self) -> usize {
        (0..self.order())
            .max_by_key(|&w| self.lengths[w])
            .expect("group is nonempty")
    }

    /// Count of elements per Coxeter length.
    pub fn length_spectrum(&self) -> BTreeMap<u32, u64> {
        let mut spec = BTreeMap::new();
        for &l in &self.lengths {
            *spec.entry(l).or_insert(0) += 1;
        }
        spec
    }

    /// Minimal-length representatives of the cosets `w W_I`, in BFS order,
    /// as `(element, length)`.
    pub fn min_coset_reps(&self, parabolic: &ParabolicSubset) -> Vec<(usize, u32)> {
        let gens: Vec<usize> = parabolic.indices().map(|i| i as usize - 1).collect();
        (0..self.order())
            .filter(|&w| {
                gens.iter()
                    .all(|&i| self.lengths[self.mul_simple(w, i)] > self.lengths[w])
            })
            .map(|w| (w, self.lengths[w]))
            .collect()
    }

    /// Elements of `W_I`, generated inside the materialized group.
    pub fn parabolic_elements(&self, parabolic: &ParabolicSubset) -> Vec<usize> {
        let gens: Vec<usize> = parabolic.indices().map(|i| i as usize - 1).collect();
        let mut seen = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for &i in &gens {
                let v = self.mul_simple(w, i);
                if seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Positive roots, as coefficient vectors on the simple roots, obtained
    /// as the orbit of the simple roots.
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut roots: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            roots.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 0..n {
                let pairing: i64 = (0..n).map(|j| self.cartan[i * n + j] * beta[j]).sum();
                let mut image = beta.clone();
                image[i] -= pairing;
                if roots.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
        }
        roots
            .into_iter()
            .filter(|r| r.iter().all(|&c| c >= 0))
            .collect()
    }
}

/// `w * s_i`: column `j` becomes `w[:, j] - a_ij w[:, i]`.
fn right_reflect(w: &[i8], cartan: &[i64], n: usize, i: usize) -> Vec<i8> {
    let mut out = w.to_vec();
    for j in 0..n {
        let aij = cartan[i * n + j];
        if aij == 0 || j == i {
            continue;
        }
        for r in 0..n {
            out[r * n + j] = (w[r * n + j] as i64 - aij * w[r * n + i] as i64) as i8;
        }
    }
    for r in 0..n {
        out[r * n + i] = -w[r * n + i];
    }
    out
}
