//! Formal rewriting for the stable splitting of `BGL_n,+`.
//!
//! Terms are string diagrams: generators are boxes whose ports carry the
//! spaces `B k = BGL_k,+` or `Q k = BGL_k / BGL_{k-1}`, and a summand is a
//! port graph between an ordered list of input wires and an ordered list
//! of output wires. Wires of index 0 are copies of `S^0` and are elided,
//! so `Tr(i,0)` has one input and one output.
//!
//! A summand is stored in a canonical numbering obtained by traversing the
//! graph from its boundary, so two isomorphic diagrams compare equal and a
//! [`StableTerm`] is a map from canonical diagrams to coefficients.
//!
//! Rewrite rules, all oriented to strictly shrink the multiset of `M`/`Tr`
//! block sizes or the number of boxes, hence terminating:
//!
//! * degenerate boxes with a zero index become wiring (`M(0,s)`, `Tr(i,0)`,
//!   `Mbar(0,v)`, `G(n,n)`, `Eps(0)`, `Proj(0)`, `Unit(0)`), and `F(i,0)`,
//!   `F(0,j)`, `G(0,n)`, `G(j,n)`, `Pi(i,j)` and `C` unfold into the
//!   generators they abbreviate;
//! * `Tr(i,j) . M(r,s)` expands over the double cosets `(a,b)` into
//!   `n{r,s;a,b} (M(a,b) ^ M(r-a,s-b)) . C . (Tr(a,r-a) ^ Tr(b,s-b))`;
//! * `F(i,j) . M(r,s)` expands into
//!   `n{r,s;a,b} Mbar(r-a,s-b) . (F(a,r-a) ^ F(b,s-b))`;
//! * `Proj . M` and `Eps . M` split over the two factors;
//! * `Tr(i,j)` followed by `Eps(i)` and `Proj(j)` folds into `F(i,j)`;
//! * `F(a,c) . Unit` and `Proj(k) . Unit` vanish for `c, k > 0`, and
//!   `Eps(k) . Unit(k)` is the identity of `S^0`.
//!
//! The coefficient of the identity double coset `(a,b) = (r,0)` is 1; every
//! other multiplicity stays symbolic.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest `n` accepted by [`verify_splitting`].
pub const MAX_SPLITTING_RANK: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SmpError {
    #[error("dimension mismatch: {i}+{j} != {r}+{s}")]
    DimensionMismatch { i: u32, j: u32, r: u32, s: u32 },
    #[error("ill-typed term: {0}")]
    IllTypedTerm(String),
    #[error("n = {0} exceeds the maximum of 12")]
    CapExceeded(u32),
}

/// The pairs `(a, b)` with `a + b = i`, `a <= r`, `b <= s`, indexing the
/// double cosets `GL_i x GL_j \ GL_n / GL_r x GL_s`; sorted by `a`.
pub fn gl_double_cosets(i: u32, j: u32, r: u32, s: u32) -> Result<Vec<(u32, u32)>, SmpError> {
    if i + j != r + s {
        return Err(SmpError::DimensionMismatch { i, j, r, s });
    }
    Ok((0..=i.min(r))
        .filter(|&a| i - a <= s)
        .map(|a| (a, i - a))
        .collect())
}

/// The space carried by a wire; the index is always positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Wire {
    B(u32),
    Q(u32),
}

impl fmt::Display for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wire::B(k) => write!(f, "BGL_{k}"),
            Wire::Q(k) => write!(f, "QGL_{k}"),
        }
    }
}

fn b(k: u32) -> Option<Wire> {
    (k > 0).then_some(Wire::B(k))
}

fn q(k: u32) -> Option<Wire> {
    (k > 0).then_some(Wire::Q(k))
}

fn wires<const N: usize>(ws: [Option<Wire>; N]) -> Vec<Wire> {
    ws.into_iter().flatten().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    /// `m_{r,s}: B r ^ B s -> B (r+s)`.
    M(u32, u32),
    /// `tr_{i,j}: B (i+j) -> B i ^ B j`.
    Tr(u32, u32),
    /// `f_{i,j}: B (i+j) -> Q j`.
    F(u32, u32),
    /// The block inclusion `g_j: B j -> B n`, written `G(j, n)`.
    G(u32, u32),
    /// `B i ^ B j -> Q j`.
    Pi(u32, u32),
    /// Augmentation `B i -> S^0`.
    Eps(u32),
    /// `B j -> Q j`.
    Proj(u32),
    /// `Q u ^ Q v -> Q (u+v)`.
    Mbar(u32, u32),
    /// Factor switch `B a ^ B (r-a) ^ B b ^ B (s-b) -> B a ^ B b ^ B (r-a) ^ B (s-b)`.
    C { a: u32, b: u32, r: u32, s: u32 },
    /// Basepoint `S^0 -> B k`.
    Unit(u32),
}

impl Gen {
    pub fn inputs(&self) -> Vec<Wire> {
        match *self {
            Gen::M(r, s) => wires([b(r), b(s)]),
            Gen::Tr(i, j) | Gen::F(i, j) => wires([b(i + j)]),
            Gen::G(j, _) => wires([b(j)]),
            Gen::Pi(i, j) => wires([b(i), b(j)]),
            Gen::Eps(k) | Gen::Proj(k) => wires([b(k)]),
            Gen::Mbar(u, v) => wires([q(u), q(v)]),
            Gen::C { a, b: bb, r, s } => {
                wires([b(a), b(r.saturating_sub(a)), b(bb), b(s.saturating_sub(bb))])
            }
            Gen::Unit(_) => Vec::new(),
        }
    }

    pub fn outputs(&self) -> Vec<Wire> {
        match *self {
            Gen::M(r, s) => wires([b(r + s)]),
            Gen::Tr(i, j) => wires([b(i), b(j)]),
            Gen::F(_, j) | Gen::Pi(_, j) | Gen::Proj(j) => wires([q(j)]),
            Gen::G(_, n) => wires([b(n)]),
            Gen::Eps(_) => Vec::new(),
            Gen::Mbar(u, v) => wires([q(u + v)]),
            Gen::C { a, b: bb, r, s } => {
                wires([b(a), b(bb), b(r.saturating_sub(a)), b(s.saturating_sub(bb))])
            }
            Gen::Unit(k) => wires([b(k)]),
        }
    }

    fn validate(&self) -> Result<(), SmpError> {
        match *self {
            Gen::G(j, n) if j > n => Err(SmpError::IllTypedTerm(format!(
                "G({j},{n}) needs j <= n"
            ))),
            Gen::C { a, b, r, s } if a > r || b > s => Err(SmpError::IllTypedTerm(format!(
                "C({a},{b};{r},{s}) needs a <= r and b <= s"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::M(r, s) => write!(f, "M({r},{s})"),
            Gen::Tr(i, j) => write!(f, "Tr({i},{j})"),
            Gen::F(i, j) => write!(f, "F({i},{j})"),
            Gen::G(j, n) => write!(f, "G({j},{n})"),
            Gen::Pi(i, j) => write!(f, "Pi({i},{j})"),
            Gen::Eps(i) => write!(f, "Eps({i})"),
            Gen::Proj(j) => write!(f, "Proj({j})"),
            Gen::Mbar(u, v) => write!(f, "Mbar({u},{v})"),
            Gen::C { a, b, r, s } => write!(f, "C({a},{b};{r},{s})"),
            Gen::Unit(k) => write!(f, "Unit({k})"),
        }
    }
}

/// The symbolic multiplicity `n{r,s;a,b}` of a double coset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiplicity {
    pub r: u32,
    pub s: u32,
    pub a: u32,
    pub b: u32,
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{{{},{};{},{}}}", self.r, self.s, self.a, self.b)
    }
}

type Monomial = BTreeMap<Multiplicity, u32>;

/// A polynomial in the multiplicities with positive integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coefficient(BTreeMap<Monomial, u64>);

impl Coefficient {
    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn integer(n: u64) -> Self {
        let mut m = BTreeMap::new();
        if n > 0 {
            m.insert(Monomial::new(), n);
        }
        Self(m)
    }

    fn of(c: Option<Multiplicity>) -> Self {
        match c {
            None => Self::one(),
            Some(m) => Self(BTreeMap::from([(Monomial::from([(m, 1)]), 1)])),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.0 {
            *self.0.entry(m.clone()).or_insert(0) += c;
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                let mut m = m1.clone();
                for (k, e) in m2 {
                    *m.entry(*k).or_insert(0) += e;
                }
                *out.entry(m).or_insert(0) += c1 * c2;
            }
        }
        Self(out)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let monomial = |f: &mut fmt::Formatter<'_>, m: &Monomial, c: u64| -> fmt::Result {
            let mut first = true;
            if c != 1 || m.is_empty() {
                write!(f, "{c}")?;
                first = false;
            }
            for (k, e) in m {
                for _ in 0..*e {
                    if !first {
                        f.write_str("*")?;
                    }
                    write!(f, "{k}")?;
                    first = false;
                }
            }
            Ok(())
        };
        if self.0.len() == 1 {
            let (m, c) = self.0.iter().next().expect("one monomial");
            return monomial(f, m, *c);
        }
        f.write_str("(")?;
        for (i, (m, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            monomial(f, m, *c)?;
        }
        f.write_str(")")
    }
}

/// Where a wire comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Src {
    In(usize),
    Node(usize, usize),
}

/// Where a wire goes to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Dst {
    Out(usize),
    Node(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Node {
    gen: Gen,
    ins: Vec<Src>,
}

/// One summand: a port graph in canonical numbering.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagram {
    inputs: Vec<Wire>,
    outputs: Vec<Wire>,
    nodes: Vec<Node>,
    outs: Vec<Src>,
}

impl Diagram {
    fn identity(ws: &[Wire]) -> Self {
        Self {
            inputs: ws.to_vec(),
            outputs: ws.to_vec(),
            nodes: Vec::new(),
            outs: (0..ws.len()).map(Src::In).collect(),
        }
    }

    fn generator(g: Gen) -> Self {
        let ins = g.inputs();
        Self {
            outputs: g.outputs(),
            nodes: vec![Node {
                gen: g,
                ins: (0..ins.len()).map(Src::In).collect(),
            }],
            outs: (0..g.outputs().len()).map(|p| Src::Node(0, p)).collect(),
            inputs: ins,
        }
    }

    /// Wires `ws` reordered so that output `k` is input `perm[k]`.
    fn permutation(ws: &[Wire], perm: &[usize]) -> Self {
        Self {
            inputs: ws.to_vec(),
            outputs: perm.iter().map(|&p| ws[p]).collect(),
            nodes: Vec::new(),
            outs: perm.iter().map(|&p| Src::In(p)).collect(),
        }
    }

    pub fn inputs(&self) -> &[Wire] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    /// Generators in canonical order.
    pub fn generators(&self) -> impl Iterator<Item = Gen> + '_ {
        self.nodes.iter().map(|n| n.gen)
    }

    fn shifted(src: Src, offset: usize, ins: &[Src]) -> Src {
        match src {
            Src::In(k) => ins[k],
            Src::Node(n, p) => Src::Node(n + offset, p),
        }
    }

    /// `self` followed by `next`.
    fn then(&self, next: &Diagram) -> Result<Self, SmpError> {
        if self.outputs != next.inputs {
            return Err(SmpError::IllTypedTerm(format!(
                "cannot compose: {} does not match {}",
                WireList(&self.outputs),
                WireList(&next.inputs)
            )));
        }
        let offset = self.nodes.len();
        let mut nodes = self.nodes.clone();
        for n in &next.nodes {
            nodes.push(Node {
                gen: n.gen,
                ins: n.ins.iter().map(|&s| Self::shifted(s, offset, &self.outs)).collect(),
            });
        }
        Ok(Self {
            inputs: self.inputs.clone(),
            outputs: next.outputs.clone(),
            nodes,
            outs: next.outs.iter().map(|&s| Self::shifted(s, offset, &self.outs)).collect(),
        }
        .canonical())
    }

    fn smash(&self, other: &Diagram) -> Self {
        let offset = self.nodes.len();
        let in_offset = self.inputs.len();
        let lift = |s: Src| match s {
            Src::In(k) => Src::In(k + in_offset),
            Src::Node(n, p) => Src::Node(n + offset, p),
        };
        let mut nodes = self.nodes.clone();
        nodes.extend(other.nodes.iter().map(|n| Node {
            gen: n.gen,
            ins: n.ins.iter().map(|&s| lift(s)).collect(),
        }));
        let mut outs = self.outs.clone();
        outs.extend(other.outs.iter().map(|&s| lift(s)));
        Self {
            inputs: [self.inputs.as_slice(), &other.inputs].concat(),
            outputs: [self.outputs.as_slice(), &other.outputs].concat(),
            nodes,
            outs,
        }
        .canonical()
    }

    fn consumers(&self) -> BTreeMap<Src, Dst> {
        let mut map = BTreeMap::new();
        for (n, node) in self.nodes.iter().enumerate() {
            for (p, &s) in node.ins.iter().enumerate() {
                map.insert(s, Dst::Node(n, p));
            }
        }
        for (k, &s) in self.outs.iter().enumerate() {
            map.insert(s, Dst::Out(k));
        }
        map
    }

    /// Breadth-first numbering of the nodes reachable from `starts`.
    fn traverse(&self, consumers: &BTreeMap<Src, Dst>, starts: &[usize], seen: &mut [bool]) -> Vec<usize> {
        let mut order = Vec::new();
        let mut queue: VecDeque<usize> = starts.iter().copied().collect();
        while let Some(n) = queue.pop_front() {
            if seen[n] {
                continue;
            }
            seen[n] = true;
            order.push(n);
            for s in &self.nodes[n].ins {
                if let Src::Node(m, _) = s {
                    queue.push_back(*m);
                }
            }
            for p in 0..self.nodes[n].gen.outputs().len() {
                if let Some(Dst::Node(m, _)) = consumers.get(&Src::Node(n, p)) {
                    queue.push_back(*m);
                }
            }
        }
        order
    }

    fn renumbered(&self, order: &[usize]) -> (Vec<Node>, Vec<Src>) {
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        for (i, &n) in order.iter().enumerate() {
            new_id[n] = i;
        }
        let map = |s: Src| match s {
            Src::In(k) => Src::In(k),
            Src::Node(n, p) => Src::Node(new_id[n], p),
        };
        let nodes = order
            .iter()
            .map(|&n| Node {
                gen: self.nodes[n].gen,
                ins: self.nodes[n].ins.iter().map(|&s| map(s)).collect(),
            })
            .collect();
        (nodes, self.outs.iter().map(|&s| map(s)).collect())
    }

    /// Renumbers nodes canonically: first everything reachable from the
    /// boundary in traversal order, then closed components, each numbered
    /// from its lexicographically least traversal.
    fn canonical(self) -> Self {
        let consumers = self.consumers();
        let mut seen = vec![false; self.nodes.len()];
        let mut starts = Vec::new();
        for k in 0..self.inputs.len() {
            if let Some(Dst::Node(n, _)) = consumers.get(&Src::In(k)) {
                starts.push(*n);
            }
        }
        for s in &self.outs {
            if let Src::Node(n, _) = s {
                starts.push(*n);
            }
        }
        let mut order = self.traverse(&consumers, &starts, &mut seen);

        let mut closed: Vec<(Vec<Node>, Vec<usize>)> = Vec::new();
        while let Some(first) = seen.iter().position(|s| !s) {
            let component = self.traverse(&consumers, &[first], &mut seen.clone());
            let mut best: Option<(Vec<Node>, Vec<usize>)> = None;
            for &start in &component {
                let mut scratch = vec![true; self.nodes.len()];
                for &c in &component {
                    scratch[c] = false;
                }
                let walk = self.traverse(&consumers, &[start], &mut scratch);
                let (enc, _) = self.renumbered(&walk);
                if best.as_ref().is_none_or(|(b, _)| enc < *b) {
                    best = Some((enc, walk));
                }
            }
            for &c in &component {
                seen[c] = true;
            }
            closed.push(best.expect("component is nonempty"));
        }
        closed.sort();
        for (_, walk) in closed {
            order.extend(walk);
        }
        let (nodes, outs) = self.renumbered(&order);
        Self {
            inputs: self.inputs,
            outputs: self.outputs,
            nodes,
            outs,
        }
    }

    /// Replaces the nodes `remove` by `frag`, whose inputs are fed by
    /// `ext_in` and whose outputs go to `ext_out`.
    fn splice(&self, remove: &[usize], ext_in: &[Src], ext_out: &[Dst], frag: &Diagram) -> Self {
        let offset = self.nodes.len();
        let mut nodes = self.nodes.clone();
        for n in &frag.nodes {
            nodes.push(Node {
                gen: n.gen,
                ins: n.ins.iter().map(|&s| Self::shifted(s, offset, ext_in)).collect(),
            });
        }
        let mut outs = self.outs.clone();
        for (k, dst) in ext_out.iter().enumerate() {
            let s = Self::shifted(frag.outs[k], offset, ext_in);
            match *dst {
                Dst::Out(o) => outs[o] = s,
                Dst::Node(n, p) => nodes[n].ins[p] = s,
            }
        }
        let keep: Vec<usize> = (0..nodes.len()).filter(|n| !remove.contains(n)).collect();
        let mut new_id = vec![usize::MAX; nodes.len()];
        for (i, &n) in keep.iter().enumerate() {
            new_id[n] = i;
        }
        let map = |s: Src| match s {
            Src::In(k) => Src::In(k),
            Src::Node(n, p) => {
                debug_assert!(new_id[n] != usize::MAX, "wire from a removed node");
                Src::Node(new_id[n], p)
            }
        };
        Self {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            nodes: keep
                .iter()
                .map(|&n| Node {
                    gen: nodes[n].gen,
                    ins: nodes[n].ins.iter().map(|&s| map(s)).collect(),
                })
                .collect(),
            outs: outs.into_iter().map(map).collect(),
        }
        .canonical()
    }

    fn dst_of(&self, consumers: &BTreeMap<Src, Dst>, n: usize, p: usize) -> Dst {
        consumers[&Src::Node(n, p)]
    }

    fn node_outs(&self, consumers: &BTreeMap<Src, Dst>, n: usize) -> Vec<Dst> {
        (0..self.nodes[n].gen.outputs().len())
            .map(|p| self.dst_of(consumers, n, p))
            .collect()
    }

    /// Every applicable rewrite, in a deterministic order.
    fn redexes(&self) -> Vec<Redex> {
        let consumers = self.consumers();
        let mut out = Vec::new();
        for (n, node) in self.nodes.iter().enumerate() {
            if local_rule(node.gen).is_some() {
                out.push(Redex::Local(n));
                continue;
            }
            let outs = self.node_outs(&consumers, n);
            let single_consumer = match outs.as_slice() {
                [Dst::Node(m, _)] => Some(*m),
                _ => None,
            };
            match (node.gen, single_consumer.map(|m| self.nodes[m].gen)) {
                (Gen::M(..), Some(Gen::Tr(..) | Gen::F(..) | Gen::Proj(_) | Gen::Eps(_)))
                | (Gen::Unit(_), Some(Gen::F(..) | Gen::Proj(_) | Gen::Eps(_))) => {
                    let m = single_consumer.expect("matched");
                    if local_rule(self.nodes[m].gen).is_none() {
                        out.push(Redex::Pair(n, m));
                    }
                }
                (Gen::Tr(i, j), _) => {
                    if let [Dst::Node(e, 0), Dst::Node(p, 0)] = outs.as_slice() {
                        if self.nodes[*e].gen == Gen::Eps(i) && self.nodes[*p].gen == Gen::Proj(j) {
                            out.push(Redex::Fold(n, *e, *p));
                        }
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// Applies one redex, returning the weighted replacement diagrams.
    fn apply(&self, redex: Redex) -> Vec<(Coefficient, Diagram)> {
        let consumers = self.consumers();
        match redex {
            Redex::Local(n) => {
                let frag = local_rule(self.nodes[n].gen).expect("local redex");
                let ext_out = self.node_outs(&consumers, n);
                vec![(
                    Coefficient::one(),
                    self.splice(&[n], &self.nodes[n].ins, &ext_out, &frag),
                )]
            }
            Redex::Fold(t, e, p) => {
                let Gen::Tr(i, j) = self.nodes[t].gen else {
                    unreachable!("fold redex starts at a transfer")
                };
                let ext_out = self.node_outs(&consumers, p);
                let frag = Diagram::generator(Gen::F(i, j));
                vec![(
                    Coefficient::one(),
                    self.splice(&[t, e, p], &self.nodes[t].ins, &ext_out, &frag),
                )]
            }
            Redex::Pair(x, y) => {
                let ext_in = self.nodes[x].ins.clone();
                let ext_out = self.node_outs(&consumers, y);
                pair_rule(self.nodes[x].gen, self.nodes[y].gen)
                    .into_iter()
                    .map(|(c, frag)| (c, self.splice(&[x, y], &ext_in, &ext_out, &frag)))
                    .collect()
            }
        }
    }

    fn validate(&self) -> Result<(), SmpError> {
        for node in &self.nodes {
            node.gen.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Redex {
    Local(usize),
    Pair(usize, usize),
    Fold(usize, usize, usize),
}

fn compose_all(parts: &[Diagram]) -> Diagram {
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = acc.then(p).expect("rule fragments are well typed");
    }
    acc
}

fn gen(g: Gen) -> Diagram {
    Diagram::generator(g)
}

/// Single-box rewrites: degenerate boxes and abbreviations.
fn local_rule(g: Gen) -> Option<Diagram> {
    let id = |ws: Vec<Wire>| Diagram::identity(&ws);
    Some(match g {
        Gen::M(0, _) | Gen::M(_, 0) | Gen::Tr(0, _) | Gen::Tr(_, 0) => id(g.inputs()),
        Gen::Mbar(0, _) | Gen::Mbar(_, 0) => id(g.inputs()),
        Gen::Eps(0) | Gen::Proj(0) | Gen::Unit(0) => id(Vec::new()),
        Gen::G(j, n) if j == n => id(g.inputs()),
        Gen::G(0, n) => gen(Gen::Unit(n)),
        Gen::G(j, n) => compose_all(&[
            gen(Gen::Unit(n - j)).smash(&id(wires([b(j)]))),
            gen(Gen::M(n - j, j)),
        ]),
        Gen::F(i, 0) => gen(Gen::Eps(i)),
        Gen::F(0, j) => gen(Gen::Proj(j)),
        Gen::Pi(i, j) => gen(Gen::Eps(i)).smash(&gen(Gen::Proj(j))),
        Gen::C { a, b: bb, r, s } => {
            let present = [a, r - a, bb, s - bb].map(|k| k > 0);
            let mut slot = [usize::MAX; 4];
            let mut next = 0;
            for (k, p) in present.iter().enumerate() {
                if *p {
                    slot[k] = next;
                    next += 1;
                }
            }
            let perm: Vec<usize> = [0, 2, 1, 3]
                .into_iter()
                .filter(|&k| present[k])
                .map(|k| slot[k])
                .collect();
            Diagram::permutation(&g.inputs(), &perm)
        }
        _ => return None,
    })
}

fn multiplicity(r: u32, s: u32, a: u32, bb: u32) -> Coefficient {
    Coefficient::of(((a, bb) != (r, 0)).then_some(Multiplicity { r, s, a, b: bb }))
}

/// Rewrites of a producer feeding a single consumer.
fn pair_rule(x: Gen, y: Gen) -> Vec<(Coefficient, Diagram)> {
    let one = Coefficient::one;
    match (x, y) {
        (Gen::M(r, s), Gen::Tr(i, j)) => gl_double_cosets(i, j, r, s)
            .expect("typed")
            .into_iter()
            .map(|(a, bb)| {
                let frag = compose_all(&[
                    gen(Gen::Tr(a, r - a)).smash(&gen(Gen::Tr(bb, s - bb))),
                    gen(Gen::C { a, b: bb, r, s }),
                    gen(Gen::M(a, bb)).smash(&gen(Gen::M(r - a, s - bb))),
                ]);
                (multiplicity(r, s, a, bb), frag)
            })
            .collect(),
        (Gen::M(r, s), Gen::F(i, j)) => gl_double_cosets(i, j, r, s)
            .expect("typed")
            .into_iter()
            .map(|(a, bb)| {
                let frag = compose_all(&[
                    gen(Gen::F(a, r - a)).smash(&gen(Gen::F(bb, s - bb))),
                    gen(Gen::Mbar(r - a, s - bb)),
                ]);
                (multiplicity(r, s, a, bb), frag)
            })
            .collect(),
        (Gen::M(r, s), Gen::Proj(_)) => vec![(
            one(),
            compose_all(&[gen(Gen::Proj(r)).smash(&gen(Gen::Proj(s))), gen(Gen::Mbar(r, s))]),
        )],
        (Gen::M(r, s), Gen::Eps(_)) => vec![(one(), gen(Gen::Eps(r)).smash(&gen(Gen::Eps(s))))],
        (Gen::Unit(_), Gen::Eps(_)) => vec![(one(), Diagram::identity(&[]))],
        (Gen::Unit(_), Gen::F(..) | Gen::Proj(_)) => Vec::new(),
        _ => unreachable!("no pair rule for {x} then {y}"),
    }
}

/// A formal sum of diagrams sharing one source and one target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableTerm {
    inputs: Vec<Wire>,
    outputs: Vec<Wire>,
    summands: BTreeMap<Diagram, Coefficient>,
}

struct WireList<'a>(&'a [Wire]);

impl fmt::Display for WireList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("S^0");
        }
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ^ ")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl StableTerm {
    pub fn generator(g: Gen) -> Result<Self, SmpError> {
        g.validate()?;
        Ok(Self::single(Diagram::generator(g)))
    }

    pub fn identity(ws: &[Wire]) -> Self {
        Self::single(Diagram::identity(ws))
    }

    pub fn zero(inputs: &[Wire], outputs: &[Wire]) -> Self {
        Self {
            inputs: inputs.to_vec(),
            outputs: outputs.to_vec(),
            summands: BTreeMap::new(),
        }
    }

    fn single(d: Diagram) -> Self {
        Self {
            inputs: d.inputs.clone(),
            outputs: d.outputs.clone(),
            summands: BTreeMap::from([(d, Coefficient::one())]),
        }
    }

    pub fn inputs(&self) -> &[Wire] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn summands(&self) -> impl Iterator<Item = (&Diagram, &Coefficient)> {
        self.summands.iter()
    }

    fn insert(&mut self, d: Diagram, c: Coefficient) {
        self.summands
            .entry(d)
            .and_modify(|x| x.add_assign(&c))
            .or_insert(c);
    }

    /// `next . self`: `self` first, then `next`.
    pub fn then(&self, next: &StableTerm) -> Result<Self, SmpError> {
        if self.outputs != next.inputs {
            return Err(SmpError::IllTypedTerm(format!(
                "cannot compose: {} does not match {}",
                WireList(&self.outputs),
                WireList(&next.inputs)
            )));
        }
        let mut out = Self::zero(&self.inputs, &next.outputs);
        for (d1, c1) in &self.summands {
            for (d2, c2) in &next.summands {
                out.insert(d1.then(d2)?, c1.mul(c2));
            }
        }
        Ok(out)
    }

    /// `self ^ other`.
    pub fn smash(&self, other: &StableTerm) -> Self {
        let mut out = Self::zero(
            &[self.inputs.as_slice(), &other.inputs].concat(),
            &[self.outputs.as_slice(), &other.outputs].concat(),
        );
        for (d1, c1) in &self.summands {
            for (d2, c2) in &other.summands {
                out.insert(d1.smash(d2), c1.mul(c2));
            }
        }
        out
    }

    pub fn plus(&self, other: &StableTerm) -> Result<Self, SmpError> {
        if self.inputs != other.inputs || self.outputs != other.outputs {
            return Err(SmpError::IllTypedTerm("summands have different types".into()));
        }
        let mut out = self.clone();
        for (d, c) in &other.summands {
            out.insert(d.clone(), c.clone());
        }
        Ok(out)
    }

    fn validate(&self) -> Result<(), SmpError> {
        for d in self.summands.keys() {
            if d.inputs != self.inputs || d.outputs != self.outputs {
                return Err(SmpError::IllTypedTerm("summand type differs from term".into()));
            }
            d.validate()?;
        }
        Ok(())
    }

    /// All `(summand, redex)` pairs available in the current term.
    fn redexes(&self) -> Vec<(&Diagram, Redex)> {
        self.summands
            .keys()
            .flat_map(|d| d.redexes().into_iter().map(move |r| (d, r)))
            .collect()
    }

    fn rewrite_once(&mut self, choose: &mut impl FnMut(usize) -> usize) -> bool {
        let options = self.redexes();
        if options.is_empty() {
            return false;
        }
        let pick = choose(options.len()).min(options.len() - 1);
        let (d, redex) = options[pick];
        let d = d.clone();
        let c = self.summands.remove(&d).expect("summand present");
        for (c2, d2) in d.apply(redex) {
            self.insert(d2, c.mul(&c2));
        }
        true
    }

    /// Rewrites to normal form, letting `choose(k)` pick which of the `k`
    /// available redexes fires next.
    pub fn normalize_with(&self, mut choose: impl FnMut(usize) -> usize) -> Result<Self, SmpError> {
        self.validate()?;
        let mut t = self.clone();
        while t.rewrite_once(&mut choose) {}
        Ok(t)
    }
}

/// Normal form under the leftmost-first strategy.
pub fn expand(term: &StableTerm) -> Result<StableTerm, SmpError> {
    term.normalize_with(|_| 0)
}

/// Renders one diagram as layers joined by ` . `, outermost first; boxes
/// side by side are written `(A ^ B)`, pass-through wires `id`, and wire
/// crossings `sigma[..]`.
impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.nodes.len();
        let mut depth = vec![0usize; n];
        // producers may be numbered after their consumers, so iterate to a fixpoint
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                let d = 1 + self.nodes[i]
                    .ins
                    .iter()
                    .map(|s| match s {
                        Src::Node(m, _) => depth[*m],
                        Src::In(_) => 0,
                    })
                    .max()
                    .unwrap_or(0);
                if d != depth[i] {
                    depth[i] = d;
                    changed = true;
                }
            }
        }
        let max_depth = depth.iter().copied().max().unwrap_or(0);
        let mut layers: Vec<String> = Vec::new();
        let mut current: Vec<Src> = (0..self.inputs.len()).map(Src::In).collect();
        let sigma = |from: &[Src], to: &[Src]| -> String {
            let idx: Vec<String> = to
                .iter()
                .map(|s| format!("{}", from.iter().position(|x| x == s).expect("wire present") + 1))
                .collect();
            format!("sigma[{}]", idx.join(","))
        };
        for level in 1..=max_depth {
            let here: Vec<usize> = (0..n).filter(|&i| depth[i] == level).collect();
            let mut items: Vec<Option<usize>> = Vec::new();
            let mut wanted: Vec<Src> = Vec::new();
            let mut placed = BTreeSet::new();
            for &i in &here {
                if self.nodes[i].ins.is_empty() {
                    items.push(Some(i));
                    placed.insert(i);
                }
            }
            for s in &current {
                match here.iter().find(|&&i| self.nodes[i].ins.contains(s)) {
                    Some(&i) => {
                        if placed.insert(i) {
                            items.push(Some(i));
                            wanted.extend(self.nodes[i].ins.iter().copied());
                        }
                    }
                    None => {
                        items.push(None);
                        wanted.push(*s);
                    }
                }
            }
            if wanted != current {
                layers.push(sigma(&current, &wanted));
            }
            let mut next = Vec::new();
            let mut names = Vec::new();
            let mut wire_iter = wanted.iter();
            for item in &items {
                match item {
                    Some(i) => {
                        for _ in 0..self.nodes[*i].ins.len() {
                            wire_iter.next();
                        }
                        names.push(format!("{}", self.nodes[*i].gen));
                        next.extend((0..self.nodes[*i].gen.outputs().len()).map(|p| Src::Node(*i, p)));
                    }
                    None => {
                        let s = *wire_iter.next().expect("pass-through wire");
                        names.push("id".into());
                        next.push(s);
                    }
                }
            }
            layers.push(if names.len() == 1 {
                names.pop().expect("one item")
            } else {
                format!("({})", names.join(" ^ "))
            });
            current = next;
        }
        if current != self.outs {
            layers.push(sigma(&current, &self.outs));
        }
        if layers.is_empty() {
            return f.write_str("id");
        }
        layers.reverse();
        f.write_str(&layers.join(" . "))
    }
}

impl fmt::Display for StableTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("Zero");
        }
        for (i, (d, c)) in self.summands.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// `expand(F(n-j, j) . G(j', n))`.
pub fn splitting_entry(n: u32, j: u32, j_prime: u32) -> Result<StableTerm, SmpError> {
    let g = StableTerm::generator(Gen::G(j_prime, n))?;
    let f = StableTerm::generator(Gen::F(n - j, j))?;
    expand(&g.then(&f)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingCertificate {
    pub n: u32,
    /// `entries[j][j']` is the normal form of `F(n-j,j) . G(j',n)`.
    pub entries: Vec<Vec<StableTerm>>,
    pub triangular: bool,
    pub diagonal_is_projection: bool,
}

impl SplittingCertificate {
    pub fn holds(&self) -> bool {
        self.triangular && self.diagonal_is_projection
    }
}

/// Builds the `(n+1) x (n+1)` matrix of composites and checks that it is
/// triangular with the projections `Proj(j)` on the diagonal.
pub fn verify_splitting(n: u32) -> Result<SplittingCertificate, SmpError> {
    if n > MAX_SPLITTING_RANK {
        return Err(SmpError::CapExceeded(n));
    }
    let mut entries = Vec::new();
    let mut triangular = true;
    let mut diagonal = true;
    for j in 0..=n {
        let mut row = Vec::new();
        for jp in 0..=n {
            let e = splitting_entry(n, j, jp)?;
            if j > jp {
                triangular &= e.is_zero();
            }
            if j == jp {
                diagonal &= e == expand(&StableTerm::generator(Gen::Proj(j))?)?;
            }
            row.push(e);
        }
        entries.push(row);
    }
    Ok(SplittingCertificate {
        n,
        entries,
        triangular,
        diagonal_is_projection: diagonal,
    })
}

/// One line per entry, then the two verdicts.
impl fmt::Display for SplittingCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        for (j, row) in self.entries.iter().enumerate() {
            for (jp, e) in row.iter().enumerate() {
                writeln!(f, "f({},{j}) . g({jp},{n}) => {e}", n as usize - j)?;
            }
        }
        let yes = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "TRIANGULAR: {}", yes(self.triangular))?;
        write!(f, "DIAGONAL: {}", yes(self.diagonal_is_projection))
    }
}

/// A random well-typed term on at most `max_index`-dimensional blocks,
/// built from `steps` generator applications; `next(k)` must return a value
/// in `0..k`.
pub fn random_term(next: &mut impl FnMut(u32) -> u32, max_index: u32, steps: u32) -> StableTerm {
    let max_index = max_index.max(1);
    let width = 1 + next(2);
    let mut wires_now: Vec<Wire> = (0..width).map(|_| Wire::B(1 + next(max_index))).collect();
    let mut term = StableTerm::identity(&wires_now);
    // weighted towards boxes that create redexes
    const MENU: [u8; 14] = [0, 0, 0, 1, 1, 2, 2, 4, 4, 5, 3, 7, 6, 8];
    for _ in 0..steps {
        let mut applied = None;
        for _ in 0..32 {
            let pos = next(wires_now.len().max(1) as u32) as usize;
            let here = wires_now.get(pos).copied();
            let there = wires_now.get(pos + 1).copied();
            let candidate = match (MENU[next(MENU.len() as u32) as usize], here, there) {
                (0, Some(Wire::B(r)), Some(Wire::B(s))) if r + s <= max_index => Some((Gen::M(r, s), 2)),
                (1, Some(Wire::B(k)), _) => {
                    let i = next(k + 1);
                    Some((Gen::Tr(i, k - i), 1))
                }
                (2, Some(Wire::B(k)), _) => {
                    let i = next(k + 1);
                    Some((Gen::F(i, k - i), 1))
                }
                (3, Some(Wire::B(k)), _) if k < max_index => Some((Gen::G(k, k + 1 + next(max_index - k)), 1)),
                (4, Some(Wire::B(k)), _) => Some((Gen::Proj(k), 1)),
                (5, Some(Wire::B(k)), _) => Some((Gen::Eps(k), 1)),
                (6, Some(Wire::Q(u)), Some(Wire::Q(v))) if u + v <= max_index => Some((Gen::Mbar(u, v), 2)),
                (7, Some(Wire::B(i)), Some(Wire::B(j))) => Some((Gen::Pi(i, j), 2)),
                (8, _, _) => Some((Gen::Unit(1 + next(max_index)), 0)),
                _ => None,
            };
            if let Some((g, take)) = candidate {
                applied = Some((pos.min(wires_now.len()), g, take));
                break;
            }
        }
        let Some((pos, g, take)) = applied else { break };
        let before = StableTerm::identity(&wires_now[..pos]);
        let after = StableTerm::identity(&wires_now[pos + take..]);
        let layer = before
            .smash(&StableTerm::generator(g).expect("generated boxes are valid"))
            .smash(&after);
        term = term.then(&layer).expect("layer matches current wires");
        wires_now = layer.outputs.clone();
    }
    term
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn nf(g: Gen, then: Gen) -> StableTerm {
        let t = StableTerm::generator(g).unwrap().then(&StableTerm::generator(then).unwrap()).unwrap();
        expand(&t).unwrap()
    }

    #[test]
    fn double_cosets() {
        assert_eq!(gl_double_cosets(2, 2, 2, 2).unwrap(), vec![(0, 2), (1, 1), (2, 0)]);
        assert_eq!(gl_double_cosets(1, 0, 1, 0).unwrap(), vec![(1, 0)]);
        assert_eq!(gl_double_cosets(2, 1, 1, 2).unwrap(), vec![(0, 2), (1, 1)]);
        assert!(matches!(
            gl_double_cosets(1, 1, 1, 2),
            Err(SmpError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn documented_expansions() {
        for n in 1..6 {
            for j in 0..=n {
                assert_eq!(
                    splitting_entry(n, j, j).unwrap(),
                    expand(&StableTerm::generator(Gen::Proj(j)).unwrap()).unwrap()
                );
                for jp in 0..j {
                    assert!(splitting_entry(n, j, jp).unwrap().is_zero());
                }
            }
            for jp in 1..=n {
                assert_eq!(splitting_entry(n, 0, jp).unwrap().to_string(), format!("Eps({jp})"));
            }
        }
        assert_eq!(splitting_entry(3, 1, 2).unwrap().to_string(), "n{1,2;1,1}*F(1,1)");
    }

    #[test]
    fn certificate_for_one() {
        let c = verify_splitting(1).unwrap();
        assert!(c.holds());
        assert_eq!(
            c.to_string(),
            "f(1,0) . g(0,1) => id\nf(1,0) . g(1,1) => Eps(1)\n\
             f(0,1) . g(0,1) => Zero\nf(0,1) . g(1,1) => Proj(1)\n\
             TRIANGULAR: yes\nDIAGONAL: yes"
        );
        assert!(verify_splitting(0).unwrap().holds());
        assert_eq!(verify_splitting(13), Err(SmpError::CapExceeded(13)));
    }

    #[test]
    fn transfer_after_multiplication() {
        let t = nf(Gen::M(1, 1), Gen::Tr(1, 1));
        assert_eq!(t.summands().count(), 2);
        let f = nf(Gen::M(1, 1), Gen::F(1, 1));
        assert_eq!(f.summands().count(), 2);
    }

    #[test]
    fn folding_and_vanishing() {
        let tr = StableTerm::generator(Gen::Tr(1, 2)).unwrap();
        let pi = StableTerm::generator(Gen::Pi(1, 2)).unwrap();
        assert_eq!(expand(&tr.then(&pi).unwrap()).unwrap().to_string(), "F(1,2)");
        assert!(nf(Gen::Unit(2), Gen::F(1, 1)).is_zero());
        assert!(nf(Gen::Unit(2), Gen::Proj(2)).is_zero());
        assert_eq!(nf(Gen::Unit(2), Gen::Eps(2)).to_string(), "id");
    }

    #[test]
    fn ill_typed_terms() {
        let m = StableTerm::generator(Gen::M(1, 1)).unwrap();
        let e = StableTerm::generator(Gen::Eps(3)).unwrap();
        assert!(matches!(m.then(&e), Err(SmpError::IllTypedTerm(_))));
        assert!(StableTerm::generator(Gen::G(3, 2)).is_err());
    }

    #[test]
    fn canonical_form_ignores_numbering() {
        let a = StableTerm::generator(Gen::Eps(1)).unwrap();
        let b2 = StableTerm::generator(Gen::Proj(2)).unwrap();
        let ab = a.smash(&b2);
        let id1 = StableTerm::identity(&[Wire::B(1)]);
        let id2 = StableTerm::identity(&[Wire::B(2)]);
        let seq = id1.smash(&b2).then(&a.smash(&StableTerm::identity(&[Wire::Q(2)]))).unwrap();
        let seq2 = a.smash(&id2).then(&b2).unwrap();
        assert_eq!(ab, seq);
        assert_eq!(ab, seq2);
    }
}
