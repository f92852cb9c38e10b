//! Rooted trees and their algebraic operations: symmetry factors, grafting,
//! Grossman–Larson products, polynomial decoration raising, the Butcher
//! coproduct, and the contracted-tree comodule and coproduct.
//!
//! A single canonical [`Tree`] type covers every flavor. A node carries a
//! color (used by the two-nonlinearity setting), a contracted polynomial
//! decoration `X^x` (used by contracted trees), a multiset of polynomial
//! leaves `𝒥X^n` with `n ≠ 0` (used by expanded trees) and a multiset of
//! child subtrees, each attached through one edge (an integration `𝓘` in the
//! gPAM reading). Plain rooted trees use color 0, `x = 0` and no leaves.

use crate::combo::{binom, factorial, q, qb, Combo, Monomial, Q};
use crate::index::{Letter, MultiIndex, NIdx, Params, N0};
use num_traits::One;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("cannot parse tree `{0}`")]
    Parse(String),
}

/// A canonical rooted tree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    color: u8,
    x: NIdx,
    leaves: Vec<NIdx>,
    children: Vec<Tree>,
}

/// Finitely supported rational combination of trees.
pub type TreeCombo = Combo<Tree>;

/// A commutative forest: a multiset of trees; the empty forest is the unit.
pub type Forest = Monomial<Tree>;

/// Combination of forests.
pub type ForestCombo = Combo<Forest>;

impl Tree {
    /// Canonical constructor; sorts leaves and children and drops zero leaves.
    pub fn new(color: u8, x: NIdx, leaves: Vec<NIdx>, children: Vec<Tree>) -> Tree {
        let mut leaves: Vec<NIdx> = leaves.into_iter().filter(|n| *n != N0).collect();
        leaves.sort();
        let mut children = children;
        children.sort();
        Tree { color, x, leaves, children }
    }

    /// The single node `•`.
    pub fn node() -> Tree {
        Tree::colored(0)
    }

    /// A single node of the given color.
    pub fn colored(color: u8) -> Tree {
        Tree { color, x: N0, leaves: vec![], children: vec![] }
    }

    /// `B₊(τ₁⋯τ_k)`: a new uncolored root joined to the given trees.
    pub fn b_plus(children: Vec<Tree>) -> Tree {
        Tree::new(0, N0, vec![], children)
    }

    /// `B₊` with a colored root.
    pub fn b_plus_colored(color: u8, children: Vec<Tree>) -> Tree {
        Tree::new(color, N0, vec![], children)
    }

    /// Chain with `n ≥ 1` nodes.
    pub fn chain(n: usize) -> Tree {
        let mut t = Tree::node();
        for _ in 1..n {
            t = Tree::b_plus(vec![t]);
        }
        t
    }

    pub fn color(&self) -> u8 {
        self.color
    }

    /// Contracted polynomial decoration of the root.
    pub fn x(&self) -> NIdx {
        self.x
    }

    /// Polynomial leaves `𝒥X^n` at the root.
    pub fn leaves(&self) -> &[NIdx] {
        &self.leaves
    }

    /// Child subtrees of the root.
    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    /// Root arity: children and polynomial leaves both count.
    pub fn arity(&self) -> u32 {
        (self.children.len() + self.leaves.len()) as u32
    }

    /// Number of nodes (polynomial leaves excluded).
    pub fn nodes(&self) -> u32 {
        1 + self.children.iter().map(Tree::nodes).sum::<u32>()
    }

    /// Number of edges between nodes (integration edges).
    pub fn edges(&self) -> u32 {
        self.nodes() - 1
    }

    /// Total number of polynomial leaves.
    pub fn leaf_count(&self) -> u32 {
        self.leaves.len() as u32 + self.children.iter().map(Tree::leaf_count).sum::<u32>()
    }

    /// The fertility multi-index: a letter per node for its arity, plus `e_n`
    /// per polynomial leaf. Colored nodes use the two-family letters.
    pub fn multi_index(&self, colored: bool) -> MultiIndex {
        let own = if colored { Letter::Z(self.color, self.arity()) } else { Letter::K(self.arity()) };
        let mut m = MultiIndex::var(own);
        for n in &self.leaves {
            m = m.add_var(&Letter::n(*n), 1);
        }
        for c in &self.children {
            m = m.mul(&c.multi_index(colored));
        }
        m
    }

    /// The automorphism count `σ(τ) = J! σ(τ₁)⋯σ(τ_k)`, with identical
    /// polynomial leaves counted as identical children.
    pub fn sigma(&self) -> u64 {
        let mut s: u64 = 1;
        for run in runs(&self.children) {
            s *= fact_u64(run.1) * run.0.sigma().pow(run.1 as u32);
        }
        for run in runs(&self.leaves) {
            s *= fact_u64(run.1);
        }
        s
    }

    /// `N(τ)`: the product of `n!` over all polynomial leaves.
    pub fn n_factor(&self) -> u64 {
        let own: u64 = self.leaves.iter().map(|n| fact_u64(n.0 as usize) * fact_u64(n.1 as usize)).product();
        own * self.children.iter().map(Tree::n_factor).product::<u64>()
    }

    /// The contraction `𝒬`: polynomial leaves are multiplied into the node decoration.
    pub fn contract(&self) -> Tree {
        let mut x = self.x;
        for n in &self.leaves {
            x = (x.0 + n.0, x.1 + n.1);
        }
        Tree::new(self.color, x, vec![], self.children.iter().map(Tree::contract).collect())
    }

    /// `|τ|_H` for a tree with a noise root: `|•|_H = α − 2`, `|X^n|_H = |n|`,
    /// additive under products and `+2` under `𝓘`. Leaves count as `𝓘X^n`,
    /// i.e. `|n|`, matching the contraction.
    pub fn hom_h(&self, p: &Params) -> Q {
        let mut h = &p.alpha - q(2) + q(p.nabs(self.x));
        for n in &self.leaves {
            h += q(p.nabs(*n));
        }
        for c in &self.children {
            h += c.hom_h(p) + q(2);
        }
        h
    }

    fn with_child(&self, t: Tree) -> Tree {
        let mut children = self.children.clone();
        children.push(t);
        Tree::new(self.color, self.x, self.leaves.clone(), children)
    }

    fn with_leaf(&self, n: NIdx) -> Tree {
        let mut leaves = self.leaves.clone();
        leaves.push(n);
        Tree::new(self.color, self.x, leaves, self.children.clone())
    }

    fn without_leaf(&self, j: usize) -> Tree {
        let mut leaves = self.leaves.clone();
        leaves.remove(j);
        Tree::new(self.color, self.x, leaves, self.children.clone())
    }

    fn without_child(&self, i: usize) -> Tree {
        let mut children = self.children.clone();
        children.remove(i);
        Tree::new(self.color, self.x, self.leaves.clone(), children)
    }

    /// Parses the bracket form, e.g. `o[I[o],X(1,0)]`.
    pub fn parse(s: &str) -> Result<Tree, TreeError> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = parse_tree(&chars, &mut pos).ok_or_else(|| TreeError::Parse(s.to_string()))?;
        if pos != chars.len() {
            return Err(TreeError::Parse(s.to_string()));
        }
        Ok(t)
    }
}

fn fact_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Runs of equal consecutive elements of a sorted slice.
fn runs<T: PartialEq>(v: &[T]) -> Vec<(&T, usize)> {
    let mut out: Vec<(&T, usize)> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some((y, c)) if *y == x => *c += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

fn parse_nidx(c: &[char], pos: &mut usize) -> Option<NIdx> {
    if c.get(*pos) != Some(&'X') || c.get(*pos + 1) != Some(&'(') {
        return None;
    }
    *pos += 2;
    let close = c[*pos..].iter().position(|&ch| ch == ')')? + *pos;
    let inner: String = c[*pos..close].iter().collect();
    let (a, b) = inner.split_once(',')?;
    *pos = close + 1;
    Some((a.parse().ok()?, b.parse().ok()?))
}

fn parse_tree(c: &[char], pos: &mut usize) -> Option<Tree> {
    if c.get(*pos) != Some(&'o') {
        return None;
    }
    *pos += 1;
    let mut color = 0u8;
    if let Some(d) = c.get(*pos).and_then(|ch| ch.to_digit(10)) {
        color = d as u8;
        *pos += 1;
    }
    let mut x = N0;
    if c.get(*pos) == Some(&'X') {
        x = parse_nidx(c, pos)?;
    }
    let mut leaves = Vec::new();
    let mut children = Vec::new();
    if c.get(*pos) == Some(&'[') {
        *pos += 1;
        loop {
            match c.get(*pos) {
                Some('I') => {
                    if c.get(*pos + 1) != Some(&'[') {
                        return None;
                    }
                    *pos += 2;
                    children.push(parse_tree(c, pos)?);
                    if c.get(*pos) != Some(&']') {
                        return None;
                    }
                    *pos += 1;
                }
                Some('X') => {
                    let n = parse_nidx(c, pos)?;
                    if n == N0 {
                        return None;
                    }
                    leaves.push(n);
                }
                _ => return None,
            }
            match c.get(*pos) {
                Some(',') => *pos += 1,
                Some(']') => {
                    *pos += 1;
                    break;
                }
                _ => return None,
            }
        }
    }
    Some(Tree::new(color, x, leaves, children))
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o")?;
        if self.color != 0 {
            write!(f, "{}", self.color)?;
        }
        if self.x != N0 {
            write!(f, "X({},{})", self.x.0, self.x.1)?;
        }
        if self.arity() > 0 {
            write!(f, "[")?;
            let mut first = true;
            for c in &self.children {
                if !first {
                    write!(f, ",")?;
                }
                first = false;
                write!(f, "I[{c}]")?;
            }
            for n in &self.leaves {
                if !first {
                    write!(f, ",")?;
                }
                first = false;
                write!(f, "X({},{})", n.0, n.1)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Tree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Tree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Tree::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// `σ(β) = Π_k (k!)^β(k)`; both letter families count, polynomial letters do not.
pub fn sigma_mi(beta: &MultiIndex) -> u64 {
    beta.iter()
        .map(|(l, c)| match l {
            Letter::K(k) | Letter::Z(_, k) => fact_u64(*k as usize).pow(*c),
            Letter::N(..) => 1,
        })
        .product()
}

/// Applies `f` at exactly one node of `t`, in every possible way; each
/// result pairs the payload with the rebuilt tree.
fn at_each_node<T: Clone>(t: &Tree, f: &dyn Fn(&Tree) -> Vec<(T, Tree)>) -> Vec<(T, Tree)> {
    let mut out = f(t);
    for i in 0..t.children.len() {
        for (payload, sub) in at_each_node(&t.children[i], f) {
            let mut children = t.children.clone();
            children[i] = sub;
            out.push((payload, Tree::new(t.color, t.x, t.leaves.clone(), children)));
        }
    }
    out
}

fn collect(v: Vec<((), Tree)>) -> TreeCombo {
    let mut out = TreeCombo::zero();
    for (_, t) in v {
        out.add_term(t, Q::one());
    }
    out
}

/// `τ₁ ↷ τ₂ = Σ_τ m(τ₁, τ₂; τ) τ`: attach `τ₁` to every node of `τ₂`.
pub fn graft(t1: &Tree, t2: &Tree) -> TreeCombo {
    graft_n(N0, t1, t2)
}

/// `τ₁ ↷_n τ₂`: for `n = 0` attach `τ₁` at a node, otherwise replace one
/// leaf `𝒥X^n` of `τ₂` by the child `𝓘τ₁`.
pub fn graft_n(n: NIdx, t1: &Tree, t2: &Tree) -> TreeCombo {
    let f = |v: &Tree| -> Vec<((), Tree)> {
        if n == N0 {
            vec![((), v.with_child(t1.clone()))]
        } else {
            (0..v.leaves.len()).filter(|&j| v.leaves[j] == n).map(|j| ((), v.without_leaf(j).with_child(t1.clone()))).collect()
        }
    };
    collect(at_each_node(t2, &f))
}

/// Linear extension of [`graft_n`].
pub fn graft_n_combo(n: NIdx, a: &TreeCombo, b: &TreeCombo) -> TreeCombo {
    let mut out = TreeCombo::zero();
    for (t1, c1) in a.iter() {
        for (t2, c2) in b.iter() {
            out.add_scaled(&graft_n(n, t1, t2), &(c1 * c2));
        }
    }
    out
}

/// The product `Z_{τ₁} *_n Z_{τ₂} = Σ m_n(τ₁,τ₂;τ) σ(τ)/(σ(τ₁)σ(τ₂)) Z_τ`,
/// i.e. the grafting count rescaled by symmetry factors.
pub fn star_n(n: NIdx, t1: &Tree, t2: &Tree) -> TreeCombo {
    let s12 = Q::from_i64((t1.sigma() * t2.sigma()) as i64);
    let mut out = TreeCombo::zero();
    for (t, m) in graft_n(n, t1, t2).iter() {
        out.add_term(t.clone(), m * Q::from_i64(t.sigma() as i64) / &s12);
    }
    out
}

/// The Grossman–Larson pre-Lie product `Z_{τ₁} * Z_{τ₂}`.
pub fn gl_product(t1: &Tree, t2: &Tree) -> TreeCombo {
    star_n(N0, t1, t2)
}

/// Bilinear extension of [`star_n`].
pub fn star_n_combo(n: NIdx, a: &TreeCombo, b: &TreeCombo) -> TreeCombo {
    let mut out = TreeCombo::zero();
    for (t1, c1) in a.iter() {
        for (t2, c2) in b.iter() {
            out.add_scaled(&star_n(n, t1, t2), &(c1 * c2));
        }
    }
    out
}

/// `n_n(τ₁, τ₂; τ)`: the single cuts of `τ` with branch `τ₁` whose trunk,
/// after adjoining `𝒥X^n` at the cut (for `n ≠ 0`), is `τ₂`.
pub fn single_cut_count(n: NIdx, t1: &Tree, t2: &Tree, t: &Tree) -> u64 {
    let f = |v: &Tree| -> Vec<(bool, Tree)> {
        (0..v.children.len())
            .map(|i| {
                let trunk = v.without_child(i);
                let trunk = if n == N0 { trunk } else { trunk.with_leaf(n) };
                (v.children[i] == *t1, trunk)
            })
            .collect()
    };
    at_each_node(t, &f).into_iter().filter(|(ok, trunk)| *ok && trunk == t2).count() as u64
}

/// Brute-force product `Σ_τ n_n(τ₁, τ₂; τ) Z_τ` from single cuts. The
/// candidates are the trees obtained by undoing a cut, i.e. the support
/// of the grafting.
pub fn star_n_by_cuts(n: NIdx, t1: &Tree, t2: &Tree) -> TreeCombo {
    let mut out = TreeCombo::zero();
    for (t, _) in graft_n(n, t1, t2).iter() {
        let c = single_cut_count(n, t1, t2, t);
        if c > 0 {
            out.add_term(t.clone(), Q::from_i64(c as i64));
        }
    }
    out
}

fn unit(i: u8) -> NIdx {
    if i == 1 {
        (1, 0)
    } else {
        (0, 1)
    }
}

/// `↑ᵢ τ`: at every node, either adjoin a leaf `X^{eᵢ}` or raise one
/// existing leaf `X^n` to `X^{n+eᵢ}`.
pub fn uparrow(i: u8, t: &Tree) -> TreeCombo {
    let e = unit(i);
    let f = |v: &Tree| -> Vec<((), Tree)> {
        let mut out = vec![((), v.with_leaf(e))];
        for j in 0..v.leaves.len() {
            let n = v.leaves[j];
            out.push(((), v.without_leaf(j).with_leaf((n.0 + e.0, n.1 + e.1))));
        }
        out
    };
    collect(at_each_node(t, &f))
}

/// `♯ᵢ Z_τ = Σ_n (nᵢ+1) Σ_τ' n_n(X^{n+eᵢ}, τ; τ') Z_τ'`, counting the cuts of
/// a leaf `X^m` (with `mᵢ ≥ 1`) that leave `τ` after adjoining `X^{m−eᵢ}`.
pub fn sharp(i: u8, t: &Tree) -> TreeCombo {
    let e = unit(i);
    let mut out = TreeCombo::zero();
    for (tp, _) in uparrow(i, t).iter() {
        let f = |v: &Tree| -> Vec<(u32, Tree)> {
            let mut r = Vec::new();
            for j in 0..v.leaves.len() {
                let m = v.leaves[j];
                let mi = if i == 1 { m.0 } else { m.1 };
                if mi == 0 {
                    continue;
                }
                let n = (m.0 - e.0, m.1 - e.1);
                let trunk = v.without_leaf(j);
                let trunk = if n == N0 { trunk } else { trunk.with_leaf(n) };
                r.push((mi, trunk));
            }
            r
        };
        let w: u32 = at_each_node(tp, &f).into_iter().filter(|(_, trunk)| trunk == t).map(|(w, _)| w).sum();
        if w > 0 {
            out.add_term(tp.clone(), q(w as i64));
        }
    }
    out
}

/// Tensor of forest combinations, pruned branches on the left.
pub type ForestTensor = Combo<(Forest, Forest)>;

fn forest_tensor_mul(a: &ForestTensor, b: &ForestTensor) -> ForestTensor {
    let mut out = ForestTensor::zero();
    for ((a1, a2), c) in a.iter() {
        for ((b1, b2), d) in b.iter() {
            out.add_term((a1.mul(b1), a2.mul(b2)), c * d);
        }
    }
    out
}

/// The Butcher–Connes–Kreimer coproduct with pruned branches on the left:
/// `Δ_B τ = τ ⊗ 1 + (id ⊗ B₊)Δ_B(τ₁⋯τ_k)`, multiplicative on forests.
/// The root keeps its color, contracted decoration and leaves.
pub fn butcher_coproduct(t: &Tree) -> ForestTensor {
    let mut inner = ForestTensor::basis((Forest::one(), Forest::one()));
    for c in &t.children {
        inner = forest_tensor_mul(&inner, &butcher_coproduct(c));
    }
    let mut out = ForestTensor::basis((Forest::var(t.clone()), Forest::one()));
    for ((l, r), c) in inner.iter() {
        let trunk_children: Vec<Tree> = r.iter().flat_map(|(tr, m)| std::iter::repeat(tr.clone()).take(*m as usize)).collect();
        let trunk = Tree::new(t.color, t.x, t.leaves.clone(), trunk_children);
        out.add_term((l.clone(), Forest::var(trunk)), c.clone());
    }
    out
}

/// Multiplicative extension of [`butcher_coproduct`] to a forest.
pub fn butcher_coproduct_forest(f: &Forest) -> ForestTensor {
    let mut out = ForestTensor::basis((Forest::one(), Forest::one()));
    for (t, m) in f.iter() {
        let d = butcher_coproduct(t);
        for _ in 0..*m {
            out = forest_tensor_mul(&out, &d);
        }
    }
    out
}

/// Coassociativity defect of `Δ_B` on a tree: `(Δ_B ⊗ id)Δ_B − (id ⊗ Δ_B)Δ_B`.
pub fn butcher_coassoc_defect(t: &Tree) -> Combo<(Forest, Forest, Forest)> {
    let d = butcher_coproduct(t);
    let mut out: Combo<(Forest, Forest, Forest)> = Combo::zero();
    for ((l, r), c) in d.iter() {
        for ((a, b), e) in butcher_coproduct_forest(l).iter() {
            out.add_term((a.clone(), b.clone(), r.clone()), c * e);
        }
        for ((a, b), e) in butcher_coproduct_forest(r).iter() {
            out.add_term((l.clone(), a.clone(), b.clone()), -(c * e));
        }
    }
    out
}

/// All plain rooted trees with exactly `n` nodes.
pub fn trees_with_nodes(n: u32) -> Vec<Tree> {
    fn forests(total: u32, max: Option<&Tree>, memo: &HashMap<u32, Vec<Tree>>) -> Vec<Vec<Tree>> {
        if total == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for size in 1..=total {
            for t in &memo[&size] {
                if max.is_some_and(|m| t > m) {
                    continue;
                }
                for mut rest in forests(total - size, Some(t), memo) {
                    rest.push(t.clone());
                    out.push(rest);
                }
            }
        }
        out
    }
    let mut memo: HashMap<u32, Vec<Tree>> = HashMap::new();
    for m in 1..=n {
        let mut ts: Vec<Tree> = forests(m - 1, None, &memo).into_iter().map(Tree::b_plus).collect();
        ts.sort();
        ts.dedup();
        memo.insert(m, ts);
    }
    memo.remove(&n).unwrap_or_default()
}

/// All plain rooted trees with at most `max_edges` edges.
pub fn trees_up_to_edges(max_edges: u32) -> Vec<Tree> {
    (1..=max_edges + 1).flat_map(trees_with_nodes).collect()
}

/// All trees with nodes colored by `{0, 1}` and at most `max_nodes` nodes.
pub fn colored_trees_up_to(max_nodes: u32) -> Vec<Tree> {
    fn recolor(t: &Tree) -> Vec<Tree> {
        let mut child_options: Vec<Vec<Tree>> = vec![vec![]];
        for c in &t.children {
            let mut next = Vec::new();
            for opt in &child_options {
                for rc in recolor(c) {
                    let mut o = opt.clone();
                    o.push(rc);
                    next.push(o);
                }
            }
            child_options = next;
        }
        let mut out = Vec::new();
        for color in 0..2u8 {
            for opt in &child_options {
                out.push(Tree::b_plus_colored(color, opt.clone()));
            }
        }
        out
    }
    let mut out: Vec<Tree> = trees_up_to_edges(max_nodes.saturating_sub(1)).iter().flat_map(recolor).collect();
    out.sort();
    out.dedup();
    out
}

/// Expanded gPAM trees with at most `max_edges` integration edges and at
/// most `max_leaves` polynomial leaves in total, drawn from `decorations`.
pub fn decorated_trees(max_edges: u32, decorations: &[NIdx], max_leaves: usize) -> Vec<Tree> {
    fn leaf_multisets(decos: &[NIdx], max: usize) -> Vec<Vec<NIdx>> {
        let mut out = vec![vec![]];
        fn rec(decos: &[NIdx], start: usize, cur: &mut Vec<NIdx>, max: usize, out: &mut Vec<Vec<NIdx>>) {
            if cur.len() == max {
                return;
            }
            for i in start..decos.len() {
                cur.push(decos[i]);
                out.push(cur.clone());
                rec(decos, i, cur, max, out);
                cur.pop();
            }
        }
        rec(decos, 0, &mut Vec::new(), max, &mut out);
        out
    }
    let leaf_sets = leaf_multisets(decorations, max_leaves);
    /// Decorations of `t` using at most `budget` leaves, with the number used.
    fn decorate(t: &Tree, leaf_sets: &[Vec<NIdx>], budget: usize) -> Vec<(Tree, usize)> {
        let mut child_options: Vec<(Vec<Tree>, usize)> = vec![(vec![], 0)];
        for c in &t.children {
            let mut next = Vec::new();
            for (opt, used) in &child_options {
                for (dc, u) in decorate(c, leaf_sets, budget - used) {
                    let mut o = opt.clone();
                    o.push(dc);
                    next.push((o, used + u));
                }
            }
            child_options = next;
        }
        let mut out = Vec::new();
        for ls in leaf_sets {
            for (opt, used) in &child_options {
                if used + ls.len() <= budget {
                    out.push((Tree::new(0, N0, ls.clone(), opt.clone()), used + ls.len()));
                }
            }
        }
        out
    }
    let mut out: Vec<Tree> =
        trees_up_to_edges(max_edges).iter().flat_map(|t| decorate(t, &leaf_sets, max_leaves)).map(|(t, _)| t).collect();
    out.sort();
    out.dedup();
    out
}

/// Basis element of the contracted model space: a product `•^ν X^x Π 𝓘τⱼ`
/// with `ν ∈ {0, 1}`. With `ν = 1` it is the tree `•X^x Π𝓘τⱼ`; `𝓘τ` and
/// `X^n` (including `1`) have `ν = 0`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HElem {
    pub noise: bool,
    pub x: NIdx,
    pub planted: Vec<Tree>,
}

impl HElem {
    /// The tree `τ` as an element.
    pub fn tree(t: &Tree) -> HElem {
        HElem { noise: true, x: t.x, planted: t.children.clone() }
    }

    /// `𝓘τ`.
    pub fn integrated(t: &Tree) -> HElem {
        HElem { noise: false, x: N0, planted: vec![t.clone()] }
    }

    /// `X^n`.
    pub fn poly(n: NIdx) -> HElem {
        HElem { noise: false, x: n, planted: vec![] }
    }

    /// Product; `None` if both factors carry a noise node.
    pub fn mul(&self, o: &HElem) -> Option<HElem> {
        if self.noise && o.noise {
            return None;
        }
        let mut planted = self.planted.clone();
        planted.extend(o.planted.iter().cloned());
        planted.sort();
        Some(HElem { noise: self.noise || o.noise, x: (self.x.0 + o.x.0, self.x.1 + o.x.1), planted })
    }

    /// The tree, if this element is one.
    pub fn as_tree(&self) -> Option<Tree> {
        self.noise.then(|| Tree::new(0, self.x, vec![], self.planted.clone()))
    }
}

impl fmt::Display for HElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(t) = self.as_tree() {
            return write!(f, "{t}");
        }
        let mut parts = Vec::new();
        if self.x != N0 {
            parts.push(format!("X({},{})", self.x.0, self.x.1));
        }
        for t in &self.planted {
            parts.push(format!("I[{t}]"));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

/// Generators of the contracted `T⁺_H`: `X₁`, `X₂` and `𝒥_n^H τ`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum HSym {
    X(u8),
    J(NIdx, Tree),
}

impl fmt::Display for HSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HSym::X(i) => write!(f, "X{i}"),
            HSym::J(n, t) => write!(f, "J({},{})[{t}]", n.0, n.1),
        }
    }
}

/// Basis monomial of `T⁺_H`.
pub type HPlus = Monomial<HSym>;

/// Elements of `T⁺_H ⊗ T_H`.
pub type HComodule = Combo<(HPlus, HElem)>;

/// Elements of `T⁺_H ⊗ T⁺_H`.
pub type HCoproduct = Combo<(HPlus, HPlus)>;

/// `X^n` as a monomial of `T⁺_H`.
pub fn x_plus(n: NIdx) -> HPlus {
    HPlus::from_pairs([(HSym::X(1), n.0), (HSym::X(2), n.1)])
}

/// `𝒥_n^H τ`, or `None` when `|n| ≥ |τ|_H + 2`.
pub fn j_h(n: NIdx, t: &Tree, p: &Params) -> Option<HSym> {
    (q(p.nabs(n)) < t.hom_h(p) + q(2)).then(|| HSym::J(n, t.clone()))
}

fn inv_nfact(n: NIdx) -> Q {
    Q::one() / qb(factorial(n.0) * factorial(n.1))
}

/// All `n` with `|n| < bound`.
fn n_below(bound: &Q, p: &Params) -> Vec<NIdx> {
    let mut out = Vec::new();
    let mut n1 = 0;
    while q(p.nabs((n1, 0))) < *bound {
        let mut n2 = 0;
        while q(p.nabs((n1, n2))) < *bound {
            out.push((n1, n2));
            n2 += 1;
        }
        n1 += 1;
    }
    out
}

type HKey = (Tree, Q, (u32, u32));

fn delta_h_cache() -> &'static Mutex<HashMap<HKey, HComodule>> {
    static C: OnceLock<Mutex<HashMap<HKey, HComodule>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn comodule_mul(a: &HComodule, b: &HComodule) -> HComodule {
    let mut out = HComodule::zero();
    for ((l1, r1), c) in a.iter() {
        for ((l2, r2), d) in b.iter() {
            if let Some(r) = r1.mul(r2) {
                out.add_term((l1.mul(l2), r), c * d);
            }
        }
    }
    out
}

fn delta_h_poly(x: NIdx) -> HComodule {
    let mut out = HComodule::zero();
    for a in 0..=x.0 {
        for b in 0..=x.1 {
            let c = qb(binom(x.0, a) * binom(x.1, b));
            out.add_term((x_plus((a, b)), HElem::poly((x.0 - a, x.1 - b))), c);
        }
    }
    out
}

/// `Δ_H 𝓘τ = (id ⊗ 𝓘)Δ_H τ + Σ_n 𝒥_n^H τ ⊗ X^n/n!`.
fn delta_h_integrated(t: &Tree, p: &Params) -> HComodule {
    let mut out = HComodule::zero();
    for ((l, r), c) in delta_h_tree(t, p).iter() {
        let rt = r.as_tree().expect("right legs of a tree carry the noise");
        out.add_term((l.clone(), HElem::integrated(&rt)), c.clone());
    }
    let bound = t.hom_h(p) + q(2);
    for n in n_below(&bound, p) {
        let j = HPlus::var(HSym::J(n, t.clone()));
        out.add_term((j, HElem::poly(n)), inv_nfact(n));
    }
    out
}

/// The comodule `Δ_H` on a contracted tree (twisted: `T⁺_H` on the left).
pub fn delta_h_tree(t: &Tree, p: &Params) -> HComodule {
    let key = (t.clone(), p.alpha.clone(), p.weights);
    if let Some(v) = delta_h_cache().lock().expect("cache").get(&key) {
        return v.clone();
    }
    let noise = HComodule::basis((HPlus::one(), HElem { noise: true, x: N0, planted: vec![] }));
    let mut out = comodule_mul(&noise, &delta_h_poly(t.x));
    for c in &t.children {
        out = comodule_mul(&out, &delta_h_integrated(c, p));
    }
    delta_h_cache().lock().expect("cache").insert(key, out.clone());
    out
}

/// `Δ_H` on a general basis element, by multiplicativity.
pub fn delta_h(e: &HElem, p: &Params) -> HComodule {
    if let Some(t) = e.as_tree() {
        return delta_h_tree(&t, p);
    }
    let mut out = delta_h_poly(e.x);
    for c in &e.planted {
        out = comodule_mul(&out, &delta_h_integrated(c, p));
    }
    out
}

fn coproduct_mul(a: &HCoproduct, b: &HCoproduct) -> HCoproduct {
    let mut out = HCoproduct::zero();
    for ((l1, r1), c) in a.iter() {
        for ((l2, r2), d) in b.iter() {
            out.add_term((l1.mul(l2), r1.mul(r2)), c * d);
        }
    }
    out
}

/// `Δ_H⁺` on a generator.
pub fn delta_h_plus_sym(s: &HSym, p: &Params) -> HCoproduct {
    match s {
        HSym::X(_) => {
            let x = HPlus::var(s.clone());
            HCoproduct::from_terms([((x.clone(), HPlus::one()), Q::one()), ((HPlus::one(), x), Q::one())])
        }
        HSym::J(n, t) => {
            let mut out = HCoproduct::zero();
            for ((l, r), c) in delta_h_tree(t, p).iter() {
                let rt = r.as_tree().expect("right legs of a tree carry the noise");
                if let Some(j) = j_h(*n, &rt, p) {
                    out.add_term((l.clone(), HPlus::var(j)), c.clone());
                }
            }
            let bound = t.hom_h(p) + q(2);
            for m in n_below(&bound, p) {
                let nm = (n.0 + m.0, n.1 + m.1);
                if let Some(j) = j_h(nm, t, p) {
                    out.add_term((HPlus::var(j), x_plus(m)), inv_nfact(m));
                }
            }
            out
        }
    }
}

/// `Δ_H⁺` on a monomial, by multiplicativity.
pub fn delta_h_plus(m: &HPlus, p: &Params) -> HCoproduct {
    let mut out = HCoproduct::basis((HPlus::one(), HPlus::one()));
    for (s, k) in m.iter() {
        let d = delta_h_plus_sym(s, p);
        for _ in 0..*k {
            out = coproduct_mul(&out, &d);
        }
    }
    out
}

/// `(Δ_H⁺ ⊗ id)Δ_H τ − (id ⊗ Δ_H)Δ_H τ`, which vanishes by the comodule law.
pub fn delta_h_comodule_defect(t: &Tree, p: &Params) -> Combo<(HPlus, HPlus, HElem)> {
    let d = delta_h_tree(t, p);
    let mut out: Combo<(HPlus, HPlus, HElem)> = Combo::zero();
    for ((l, r), c) in d.iter() {
        for ((a, b), e) in delta_h_plus(l, p).iter() {
            out.add_term((a.clone(), b.clone(), r.clone()), c * e);
        }
        for ((a, b), e) in delta_h(r, p).iter() {
            out.add_term((l.clone(), a.clone(), b.clone()), -(c * e));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combo::qr;

    fn cherry() -> Tree {
        Tree::b_plus(vec![Tree::node(), Tree::node()])
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["o", "o[I[o]]", "o[I[o],X(1,0)]", "o1[I[o],I[o1]]", "oX(2,0)[I[oX(0,1)]]"] {
            let t = Tree::parse(s).unwrap();
            assert_eq!(Tree::parse(&t.to_string()).unwrap(), t);
        }
        assert_eq!(Tree::parse("o[X(1,0),I[o]]").unwrap().to_string(), "o[I[o],X(1,0)]");
        assert!(Tree::parse("o[").is_err());
        assert!(Tree::parse("o[X(0,0)]").is_err());
    }

    #[test]
    fn symmetry_factors() {
        assert_eq!(Tree::node().sigma(), 1);
        assert_eq!(cherry().sigma(), 2);
        let t = Tree::parse("o[X(1,0),X(1,0),I[o]]").unwrap();
        assert_eq!(t.sigma(), 2);
        assert_eq!(Tree::parse("o[I[o[I[o],I[o]]],I[o[I[o],I[o]]]]").unwrap().sigma(), 8);
        assert_eq!(sigma_mi(&(crate::index::ek(2).mul(&crate::index::ek(0)).mul(&crate::index::ek(0)))), 2);
        assert_eq!(sigma_mi(&crate::index::ek(3)), 6);
        assert_eq!(Tree::parse("o[X(2,0)]").unwrap().n_factor(), 2);
    }

    #[test]
    fn b_plus_examples() {
        assert_eq!(Tree::b_plus(vec![]), Tree::node());
        assert_eq!(Tree::b_plus(vec![Tree::node()]), Tree::chain(2));
        assert_eq!(Tree::b_plus(vec![Tree::node(), Tree::node()]).to_string(), "o[I[o],I[o]]");
    }

    #[test]
    fn grafting_examples() {
        assert_eq!(graft(&Tree::node(), &Tree::node()), TreeCombo::basis(Tree::chain(2)));
        let expected = TreeCombo::from_terms([(Tree::chain(3), q(1)), (cherry(), q(1))]);
        assert_eq!(graft(&Tree::node(), &Tree::chain(2)), expected);
        assert!(graft_n((1, 0), &Tree::node(), &Tree::chain(2)).is_zero());
        let t2 = Tree::parse("o[X(1,0)]").unwrap();
        assert_eq!(graft_n((1, 0), &Tree::node(), &t2), TreeCombo::basis(Tree::chain(2)));
    }

    #[test]
    fn gl_product_examples() {
        assert_eq!(gl_product(&Tree::node(), &Tree::node()), TreeCombo::basis(Tree::chain(2)));
        let expected = TreeCombo::from_terms([(cherry(), q(2)), (Tree::chain(3), q(1))]);
        assert_eq!(gl_product(&Tree::node(), &Tree::chain(2)), expected);
        assert!(star_n((0, 1), &Tree::node(), &Tree::node()).is_zero());
    }

    #[test]
    fn gl_product_matches_single_cuts() {
        let pool = trees_up_to_edges(3);
        for a in &pool {
            for b in &pool {
                if a.edges() + b.edges() + 1 <= 5 {
                    assert_eq!(gl_product(a, b), star_n_by_cuts(N0, a, b), "{a} * {b}");
                }
            }
        }
        let dpool = decorated_trees(1, &[(1, 0), (0, 1)], 2);
        for a in &dpool {
            for b in &dpool {
                for n in [(1, 0), (0, 1)] {
                    assert_eq!(star_n(n, a, b), star_n_by_cuts(n, a, b), "{a} *_{n:?} {b}");
                }
            }
        }
    }

    #[test]
    fn grafting_is_pre_lie() {
        let pool = trees_up_to_edges(2);
        for n in [N0, (1, 0)] {
            let dpool: Vec<Tree> = if n == N0 { pool.clone() } else { decorated_trees(1, &[(1, 0)], 2) };
            for a in &dpool {
                for b in &dpool {
                    for c in &dpool {
                        let (a, b, c) = (TreeCombo::basis(a.clone()), TreeCombo::basis(b.clone()), TreeCombo::basis(c.clone()));
                        let assoc = |x: &TreeCombo, y: &TreeCombo| {
                            graft_n_combo(n, &graft_n_combo(n, x, y), &c) - graft_n_combo(n, x, &graft_n_combo(n, y, &c))
                        };
                        assert_eq!(assoc(&a, &b), assoc(&b, &a));
                    }
                }
            }
        }
    }

    #[test]
    fn uparrow_and_sharp_examples() {
        let leaf = Tree::parse("o[X(1,0)]").unwrap();
        assert_eq!(uparrow(1, &Tree::node()), TreeCombo::basis(leaf.clone()));
        assert_eq!(sharp(1, &Tree::node()), TreeCombo::basis(leaf.clone()));
        let up = uparrow(1, &leaf);
        assert_eq!(up.coeff(&Tree::parse("o[X(2,0)]").unwrap()), q(1));
        assert_eq!(up.coeff(&Tree::parse("o[X(1,0),X(1,0)]").unwrap()), q(1));
    }

    #[test]
    fn sharp_is_dual_to_uparrow() {
        for t in decorated_trees(2, &[(1, 0), (0, 1)], 2) {
            for i in [1u8, 2] {
                let w = qr((t.sigma() * t.n_factor()) as i64, 1);
                let lhs = sharp(i, &t).scale(&w);
                let mut rhs = TreeCombo::zero();
                for (tp, m) in uparrow(i, &t).iter() {
                    rhs.add_term(tp.clone(), m * Q::from_i64((tp.sigma() * tp.n_factor()) as i64));
                }
                assert_eq!(lhs, rhs, "τ = {t}");
            }
        }
    }

    #[test]
    fn butcher_examples() {
        let one = Forest::one();
        let f = |t: &Tree| Forest::var(t.clone());
        let dot = Tree::node();
        let d = butcher_coproduct(&dot);
        assert_eq!(d, ForestTensor::from_terms([((one.clone(), f(&dot)), q(1)), ((f(&dot), one.clone()), q(1))]));
        let ch = Tree::chain(2);
        let expected = ForestTensor::from_terms([
            ((one.clone(), f(&ch)), q(1)),
            ((f(&ch), one.clone()), q(1)),
            ((f(&dot), f(&dot)), q(1)),
        ]);
        assert_eq!(butcher_coproduct(&ch), expected);
        let ch3 = cherry();
        let expected = ForestTensor::from_terms([
            ((one.clone(), f(&ch3)), q(1)),
            ((f(&ch3), one.clone()), q(1)),
            ((f(&dot), f(&ch)), q(2)),
            ((Forest::var_pow(dot.clone(), 2), f(&dot)), q(1)),
        ]);
        assert_eq!(butcher_coproduct(&ch3), expected);
    }

    #[test]
    fn butcher_is_coassociative() {
        for t in trees_up_to_edges(5) {
            assert!(butcher_coassoc_defect(&t).is_zero(), "τ = {t}");
        }
    }

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| trees_with_nodes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20]);
    }

    #[test]
    fn hairer_homogeneity() {
        let p = Params::with_alpha(qr(1, 4));
        assert_eq!(Tree::node().hom_h(&p), qr(1, 4) - q(2));
        assert_eq!(Tree::chain(2).hom_h(&p), qr(-3, 2));
        let x = Tree::parse("oX(1,0)").unwrap();
        assert_eq!(x.hom_h(&p) - Tree::node().hom_h(&p), q(1));
    }

    #[test]
    fn hairer_comodule_examples() {
        let p = Params::with_alpha(qr(1, 4));
        let d = delta_h(&HElem::poly((1, 0)), &p);
        let expected = HComodule::from_terms([
            ((HPlus::one(), HElem::poly((1, 0))), q(1)),
            ((x_plus((1, 0)), HElem::poly(N0)), q(1)),
        ]);
        assert_eq!(d, expected);
        let d = delta_h(&HElem::integrated(&Tree::node()), &p);
        let expected = HComodule::from_terms([
            ((HPlus::one(), HElem::integrated(&Tree::node())), q(1)),
            ((HPlus::var(HSym::J(N0, Tree::node())), HElem::poly(N0)), q(1)),
        ]);
        assert_eq!(d, expected);
    }

    #[test]
    fn hairer_comodule_law() {
        let p = Params::with_alpha(qr(1, 4));
        let trees: Vec<Tree> = decorated_trees(3, &[(1, 0), (0, 1)], 1).iter().map(Tree::contract).collect();
        for t in trees {
            assert!(delta_h_comodule_defect(&t, &p).is_zero(), "τ = {t}");
        }
    }

    #[test]
    fn hairer_coproduct_is_multiplicative() {
        let p = Params::with_alpha(qr(1, 2));
        let a = HPlus::var(HSym::J(N0, Tree::node()));
        let b = HPlus::var(HSym::X(1));
        let lhs = delta_h_plus(&a.mul(&b), &p);
        let rhs = coproduct_mul(&delta_h_plus(&a, &p), &delta_h_plus(&b, &p));
        assert_eq!(lhs, rhs);
    }
}
