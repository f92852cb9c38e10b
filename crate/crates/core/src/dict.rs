//! Dictionaries between multi-indices and trees.
//!
//! Rough paths: `φ z_β = Σ_{τ∈𝒯_β} σ(β)/σ(τ) τ` and its transpose `φ†`.
//! gPAM: the expanded maps `φ̊₋`, `φ̊`, their contractions `φ₋ = 𝒬φ̊₋`,
//! `φ = 𝒬φ̊`, and the algebra map `Φ: T⁺ → T⁺_H`. The `Υ` maps evaluate
//! dictionary images on shifted nonlinearities. Every identity relating the
//! two sides has a verifier returning its counterexamples.

use crate::combo::{binom, factorial, q, qb, Combo, Monomial, Poly, Q};
use crate::envelope::EnvIndex;
use crate::group::{eval_on_ap, ApPair};
use crate::hopf::{delta_plus, delta_shared, HopfError};
use crate::index::{
    as_unit_poly, edge_count, hom_value, populated, series_mul, FormalSeries, Letter, Mode, MultiIndex, NIdx, Params, N0,
};
use crate::lie::{apply_del, apply_dn, pre_lie_elements, Generator, LieElement};
use crate::trees::{
    butcher_coproduct, delta_h_plus, delta_h_tree, graft_n, j_h, sharp, sigma_mi, star_n, uparrow, x_plus, Forest,
    ForestCombo, HComodule, HCoproduct, HElem, HPlus, HSym, Tree, TreeCombo,
};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

/// Outcome of an exhaustive verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub identity: String,
    pub pool: String,
    pub checked: usize,
    pub counterexamples: Vec<String>,
}

impl Report {
    pub fn new(identity: &str, pool: impl Into<String>) -> Report {
        Report { identity: identity.to_string(), pool: pool.into(), checked: 0, counterexamples: Vec::new() }
    }

    /// Records one check.
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.counterexamples.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// A child of a node in the recursions: a polynomial leaf or a subtree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
enum Child {
    Leaf(NIdx),
    Sub(Tree),
}

fn assemble(children: &[Child]) -> Tree {
    let mut leaves = Vec::new();
    let mut subs = Vec::new();
    for c in children {
        match c {
            Child::Leaf(n) => leaves.push(*n),
            Child::Sub(t) => subs.push(t.clone()),
        }
    }
    Tree::new(0, N0, leaves, subs)
}

fn k_letters(beta: &MultiIndex) -> Vec<u32> {
    beta.iter()
        .filter_map(|(l, _)| match l {
            Letter::K(k) => Some(*k),
            _ => None,
        })
        .collect()
}

/// `𝒯_β`: the trees with `β(k)` nodes of arity `k` and `β(n)` leaves `𝒥X^n`,
/// generated by recursive splits `e_k + β₁ + ⋯ + β_k = β`.
pub fn enumerate_trees(beta: &MultiIndex) -> BTreeSet<Tree> {
    fn rec(beta: &MultiIndex, memo: &mut HashMap<MultiIndex, BTreeSet<Tree>>) -> BTreeSet<Tree> {
        if let Some(v) = memo.get(beta) {
            return v.clone();
        }
        let mut out = BTreeSet::new();
        if beta.letters().all(|l| matches!(l, Letter::K(_) | Letter::N(..))) {
            for k in k_letters(beta) {
                let rest = beta.remove_var(&Letter::K(k), 1).expect("present");
                for split in ordered_splits(&rest, k) {
                    let mut options: Vec<Vec<Child>> = vec![vec![]];
                    for part in &split {
                        let choices: Vec<Child> = match as_unit_poly(part) {
                            Some(n) if n != N0 => vec![Child::Leaf(n)],
                            _ => rec(part, memo).into_iter().map(Child::Sub).collect(),
                        };
                        options = options
                            .iter()
                            .flat_map(|o| {
                                choices.iter().map(move |c| {
                                    let mut v = o.clone();
                                    v.push(c.clone());
                                    v
                                })
                            })
                            .collect();
                    }
                    for o in options {
                        out.insert(assemble(&o));
                    }
                }
            }
        }
        memo.insert(beta.clone(), out.clone());
        out
    }
    rec(beta, &mut HashMap::new())
}

/// Ordered tuples `(β₁, …, β_k)` of nonzero multi-indices summing to `β`.
fn ordered_splits(beta: &MultiIndex, k: u32) -> Vec<Vec<MultiIndex>> {
    if k == 0 {
        return if beta.is_one() { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for d in beta.divisors() {
        if d.is_one() {
            continue;
        }
        let rest = beta.checked_div(&d).expect("divisor");
        for mut tail in ordered_splits(&rest, k - 1) {
            tail.insert(0, d.clone());
            out.push(tail);
        }
    }
    out
}

fn ring_cache() -> &'static Mutex<HashMap<MultiIndex, TreeCombo>> {
    static C: OnceLock<Mutex<HashMap<MultiIndex, TreeCombo>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `φ̊ z_β` as a combination of children: `𝒥X^n` if `β = e_n`, else `𝓘φ̊₋ z_β`.
fn phi_ring_child(beta: &MultiIndex) -> Combo<Child> {
    match as_unit_poly(beta) {
        Some(n) if n != N0 => Combo::basis(Child::Leaf(n)),
        _ => phi_ring_minus(beta).map_keys(|t| Child::Sub(t.clone())),
    }
}

/// `φ̊₋ z_β = Σ_k Σ_{e_k+β₁+⋯+β_k=β} φ̊z_{β₁}⋯φ̊z_{β_k} •`, with `φ̊₋ z_0 = 0`.
pub fn phi_ring_minus(beta: &MultiIndex) -> TreeCombo {
    if let Some(v) = ring_cache().lock().expect("cache").get(beta) {
        return v.clone();
    }
    let mut out = TreeCombo::zero();
    if !beta.is_one() && beta.letters().all(|l| matches!(l, Letter::K(_) | Letter::N(..))) {
        for k in k_letters(beta) {
            let rest = beta.remove_var(&Letter::K(k), 1).expect("present");
            for split in ordered_splits(&rest, k) {
                let mut acc: Combo<Vec<Child>> = Combo::basis(vec![]);
                for part in &split {
                    let c = phi_ring_child(part);
                    let mut next = Combo::zero();
                    for (v, a) in acc.iter() {
                        for (ch, b) in c.iter() {
                            let mut w = v.clone();
                            w.push(ch.clone());
                            w.sort();
                            next.add_term(w, a * b);
                        }
                    }
                    acc = next;
                }
                for (v, c) in acc.iter() {
                    out.add_term(assemble(v), c.clone());
                }
            }
        }
    }
    ring_cache().lock().expect("cache").insert(beta.clone(), out.clone());
    out
}

/// The planted image `φ̊ z_β` for `β ≠ e_n`, returned as the tree under `𝓘`.
pub fn phi_ring(beta: &MultiIndex) -> Option<TreeCombo> {
    match as_unit_poly(beta) {
        Some(n) if n != N0 => None,
        _ => Some(phi_ring_minus(beta)),
    }
}

/// The rough-path dictionary `φ z_β = Σ_{τ∈𝒯_β} σ(β)/σ(τ) τ` on `k`-letters.
pub fn phi_rp(beta: &MultiIndex) -> TreeCombo {
    if beta.letters().any(|l| !matches!(l, Letter::K(_))) {
        return TreeCombo::zero();
    }
    phi_ring_minus(beta)
}

/// `φ†Z_τ = σ(β)/σ(τ) z^β D^(0)` for `τ ∈ 𝒯_β`; colored trees use the two-family letters.
pub fn phi_rp_dagger(t: &Tree) -> LieElement {
    let colored = has_color(t);
    let beta = t.multi_index(colored);
    let c = Q::from_i64(sigma_mi(&beta) as i64) / Q::from_i64(t.sigma() as i64);
    LieElement::term(Generator::zd(beta, N0), c)
}

fn has_color(t: &Tree) -> bool {
    t.color() != 0 || t.children().iter().any(has_color)
}

/// `φ†` on a tree, as the series coefficient of `D^(0)`.
pub fn phi_dagger_series(t: &Tree, colored: bool) -> FormalSeries {
    let beta = t.multi_index(colored);
    let c = Q::from_i64(sigma_mi(&beta) as i64) / Q::from_i64(t.sigma() as i64);
    FormalSeries::term(beta, c)
}

/// Linear extension of [`phi_dagger_series`].
pub fn phi_dagger_combo(x: &TreeCombo, colored: bool) -> FormalSeries {
    let mut out = FormalSeries::zero();
    for (t, c) in x.iter() {
        out.add_scaled(&phi_dagger_series(t, colored), c);
    }
    out
}

/// `φ̊₋†Z_τ = σ(β)/σ(τ) z^β` for expanded trees.
pub fn phi_ring_minus_dagger(t: &Tree) -> FormalSeries {
    phi_dagger_series(t, false)
}

fn ring_dagger_combo(x: &TreeCombo) -> FormalSeries {
    phi_dagger_combo(x, false)
}

/// The contraction `𝒬` on a combination.
pub fn q_contract(x: &TreeCombo) -> TreeCombo {
    x.map_keys(Tree::contract)
}

/// `φ₋ z_β = 𝒬 φ̊₋ z_β`.
pub fn phi_minus(beta: &MultiIndex) -> TreeCombo {
    q_contract(&phi_ring_minus(beta))
}

/// `φ z_β`: `X^n` for `β = e_n`, otherwise `𝓘φ₋ z_β`.
pub fn phi(beta: &MultiIndex) -> Combo<HElem> {
    match as_unit_poly(beta) {
        Some(n) if n != N0 => Combo::basis(HElem::poly(n)),
        _ => phi_minus(beta).map_keys(HElem::integrated),
    }
}

/// `Φ` on a length-one factor of `T⁺`.
fn phi_plus_factor(f: &EnvIndex, p: &Params) -> Combo<HPlus> {
    if f.j_is_empty() {
        let i = if f.m == (1, 0) { 1 } else { 2 };
        return Combo::basis(HPlus::var(HSym::X(i)));
    }
    let ((gamma, n), _) = f.labels().into_iter().next().expect("one label");
    let w = Q::one() / qb(factorial(n.0) * factorial(n.1));
    let mut out = Combo::zero();
    for (t, c) in phi_minus(&gamma).iter() {
        if let Some(j) = j_h(n, t, p) {
            out.add_term(HPlus::var(j), c * &w);
        }
    }
    out
}

fn hplus_combo_mul(a: &Combo<HPlus>, b: &Combo<HPlus>) -> Combo<HPlus> {
    let mut out = Combo::zero();
    for (x, c) in a.iter() {
        for (y, d) in b.iter() {
            out.add_term(x.mul(y), c * d);
        }
    }
    out
}

/// The algebra morphism `Φ: T⁺ → T⁺_H` with `Φ Z^(0,eᵢ) = Xᵢ` and
/// `Φ 𝒥_n z_β = 𝒥_n^H φ₋ z_β`, i.e. `Φ Z^(e_(β,n),0) = 𝒥_n^H φ₋ z_β / n!`.
pub fn phi_plus(idx: &EnvIndex, p: &Params) -> Combo<HPlus> {
    let mut out = Combo::basis(HPlus::one());
    for f in idx.factors() {
        out = hplus_combo_mul(&out, &phi_plus_factor(&f, p));
    }
    out
}

/// `φ` on the rough-path `T⁺`: multiplicative with `Z^(e_(γ,0),0) ↦ φ z_γ`,
/// and `Z^J ↦ Π (φ z_γ)^{J(γ)} / J!` when `normalized`.
pub fn phi_plus_rp(idx: &EnvIndex, normalized: bool) -> ForestCombo {
    let mut out = ForestCombo::basis(Forest::one());
    let mut norm = Q::one();
    for ((gamma, _), mult) in idx.labels() {
        let img = phi_rp(&gamma);
        for _ in 0..mult {
            let mut next = ForestCombo::zero();
            for (f, c) in out.iter() {
                for (t, d) in img.iter() {
                    next.add_term(f.mul(&Forest::var(t.clone())), c * d);
                }
            }
            out = next;
        }
        if normalized {
            norm = norm / qb(factorial(mult));
        }
    }
    out.scale(&norm)
}

/// Variables of the `Υ` polynomials: the shift `u` (rough paths), the
/// Taylor coefficients `u^(m)` of the polynomial `u`, and the base point `y`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum UVar {
    U,
    Coef(NIdx),
    Y(u8),
}

/// Polynomial in the `Υ` variables with rational coefficients.
pub type UPoly = Poly<UVar>;

/// Taylor coefficient `k` of `a(· + s)` for a polynomial shift `s`.
fn shifted_coefficient(a: &[Q], k: u32, s: &UPoly) -> UPoly {
    let mut out = UPoly::zero();
    for (j, aj) in a.iter().enumerate().skip(k as usize) {
        let c = aj * qb(binom(j as u32, k));
        out.add_scaled(&s.pow(j as u32 - k), &c);
    }
    out
}

/// `Υ^a[τ](u) = φ†σ(τ)Z_τ[a(· + u)] = Π_nodes a^{(arity)}(u)`, as a polynomial in `u`.
pub fn upsilon_rp_poly(t: &Tree, a: &[Q]) -> UPoly {
    let beta = t.multi_index(false);
    let s = UPoly::letter(UVar::U);
    let mut out = UPoly::constant(Q::from_i64(sigma_mi(&beta) as i64));
    for (l, m) in beta.iter() {
        if let Letter::K(k) = l {
            out = out.mul(&shifted_coefficient(a, *k, &s).pow(*m));
        }
    }
    out
}

/// `Υ^a[τ](u)` evaluated through the `(a, p)` coordinates of `a(· + u)`.
pub fn upsilon_rp(t: &Tree, a: &[Q], u: &Q) -> Q {
    let mut coeffs = a.to_vec();
    if coeffs.is_empty() {
        coeffs.push(Q::zero());
    }
    let ap = ApPair { a: coeffs, p: Default::default() };
    let shifted = ApPair { a: ap.shift_a(u), p: Default::default() };
    let s = phi_dagger_series(t, false).scale(&Q::from_i64(t.sigma() as i64));
    eval_on_ap(&s, &shifted)
}

fn upoly_of_letter(l: &Letter, a: &[Q], shift: &UPoly, max_deg: u32) -> UPoly {
    match l {
        Letter::K(k) => shifted_coefficient(a, *k, shift),
        Letter::N(n1, n2) => {
            let mut out = UPoly::zero();
            for m1 in *n1..=max_deg {
                for m2 in *n2..=max_deg.saturating_sub(m1) {
                    let c = qb(binom(m1, *n1) * binom(m2, *n2)) / qb(factorial(m1) * factorial(m2));
                    let mono = Monomial::from_pairs([
                        (UVar::Coef((m1, m2)), 1),
                        (UVar::Y(1), m1 - n1),
                        (UVar::Y(2), m2 - n2),
                    ]);
                    out.add_term(mono, c);
                }
            }
            out
        }
        Letter::Z(..) => UPoly::zero(),
    }
}

/// `Υ̊^a[τ](u, y) = φ̊₋†N(τ)σ(τ)Z_τ[a(· + u(y)), u(· + y) − u(y)]`, with `u` a
/// generic polynomial of total degree `max_deg` whose Taylor coefficients
/// `u^(m)` and the base point `y` are kept symbolic.
pub fn upsilon_gpam_poly(x: &TreeCombo, a: &[Q], max_deg: u32) -> UPoly {
    let mut shift = UPoly::zero();
    for m1 in 0..=max_deg {
        for m2 in 0..=max_deg - m1 {
            let mono = Monomial::from_pairs([(UVar::Coef((m1, m2)), 1), (UVar::Y(1), m1), (UVar::Y(2), m2)]);
            shift.add_term(mono, Q::one() / qb(factorial(m1) * factorial(m2)));
        }
    }
    let mut out = UPoly::zero();
    for (t, c) in x.iter() {
        let s = phi_ring_minus_dagger(t).scale(&Q::from_i64((t.n_factor() * t.sigma()) as i64));
        let v = s.substitute(|l| upoly_of_letter(l, a, &shift, max_deg));
        out.add_scaled(&v, c);
    }
    out
}

/// Evaluates a `Υ̊` polynomial at concrete `u^(m)` and `y`.
pub fn upsilon_gpam_eval(v: &UPoly, coef: &dyn Fn(NIdx) -> Q, y: (Q, Q)) -> Q {
    v.evaluate(|l| match l {
        UVar::U => Q::zero(),
        UVar::Coef(m) => coef(*m),
        UVar::Y(1) => y.0.clone(),
        UVar::Y(_) => y.1.clone(),
    })
}

/// Pre-Lie morphism `φ†(Z_{τ₁} * Z_{τ₂}) = φ†Z_{τ₁} ◁ φ†Z_{τ₂}` on all
/// pairs of trees with at most `max_edges` edges each.
pub fn verify_prelie_morphism_rp(max_edges: u32) -> Report {
    let pool = crate::trees::trees_up_to_edges(max_edges);
    let mut r = Report::new("prelie-rp", format!("tree pairs with at most {max_edges} edges each"));
    for a in &pool {
        for b in &pool {
            let mut lhs = LieElement::zero();
            for (t, c) in star_n(N0, a, b).iter() {
                lhs.add_scaled(&phi_rp_dagger(t), c);
            }
            let rhs = pre_lie_elements(&phi_rp_dagger(a), &phi_rp_dagger(b)).expect("no pure derivatives");
            r.check(lhs == rhs, || format!("{a} * {b}"));
        }
    }
    r
}

fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let mut rank = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for col in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(rank, piv);
        let pivot = rows[rank][col].clone();
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = &rows[i][col] / &pivot;
                for j in col..cols {
                    let d = &rows[rank][j] * &f;
                    rows[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Populated rough-path indices with `1 ≤ edges ≤ max_edges`, plus `e_0`.
pub fn rp_pool(max_edges: u32) -> Vec<MultiIndex> {
    let letters: Vec<Letter> = (0..=max_edges).map(Letter::K).collect();
    crate::index::enumerate_indices(&letters, max_edges + 1, |g| populated(g, Mode::Rp) && edge_count(g) <= max_edges)
}

/// `ker φ† = span{σ(τ₁)Z_{τ₁} − σ(τ₂)Z_{τ₂} : τ₁, τ₂ ∈ 𝒯_β}`, one `β` at a time
/// since `φ†` is block diagonal in `β`: the differences lie in the kernel,
/// span a space of dimension `|𝒯_β| − 1`, and `φ†` has rank one on `𝒯_β`.
pub fn verify_kernel_rp(max_edges: u32) -> Report {
    let mut r = Report::new("kernel-rp", format!("populated β with at most {max_edges} edges"));
    for beta in rp_pool(max_edges) {
        let trees: Vec<Tree> = enumerate_trees(&beta).into_iter().collect();
        let sig = |t: &Tree| Q::from_i64(t.sigma() as i64);
        let image: Vec<Q> = trees.iter().map(|t| phi_dagger_series(t, false).coeff(&beta)).collect();
        let in_kernel = trees.iter().all(|t| &image[0] * sig(&trees[0]) == &image[trees.iter().position(|u| u == t).unwrap()] * sig(t));
        let diffs: Vec<Vec<Q>> = (1..trees.len())
            .map(|i| {
                let mut row = vec![Q::zero(); trees.len()];
                row[0] = sig(&trees[0]);
                row[i] = -sig(&trees[i]);
                row
            })
            .collect();
        let dim_ok = trees.len() <= 1 || rank(diffs) == trees.len() - 1;
        let image_rank = rank(vec![image.clone()]);
        r.check(!trees.is_empty() && in_kernel && dim_ok && image_rank == 1, || format!("β = {beta}"));
    }
    r
}

/// Applies `f` to both legs of a `T⁺ ⊗ T⁺` element.
fn phi_rp_tensor(x: &Combo<(EnvIndex, EnvIndex)>, normalized: bool, swap: bool) -> Combo<(Forest, Forest)> {
    let mut out = Combo::zero();
    for ((l, r), c) in x.iter() {
        let (l, r) = if swap { (r, l) } else { (l, r) };
        for (fl, a) in phi_plus_rp(l, normalized).iter() {
            for (fr, b) in phi_plus_rp(r, normalized).iter() {
                out.add_term((fl.clone(), fr.clone()), c * a * b);
            }
        }
    }
    out
}

/// `(φ ⊗ φ)Δ⁺_RP Z = Δ_B φ Z` on the generators `Z^(e_(β,0),0)` for populated
/// `β` with at most `max_edges` edges; both sides are multiplicative.
pub fn verify_hopf_morphism_rp(max_edges: u32, p: &Params) -> Report {
    let mut r = Report::new("hopf-rp", format!("populated β with at most {max_edges} edges"));
    for beta in rp_pool(max_edges) {
        let idx = EnvIndex::gen(beta.clone(), N0);
        let lhs = phi_rp_tensor(&delta_plus(&idx, Mode::Rp, p), false, false);
        let mut rhs = Combo::zero();
        for (t, c) in phi_rp(&beta).iter() {
            rhs.add_scaled(&butcher_coproduct(t), c);
        }
        r.check(lhs == rhs, || format!("β = {beta}"));
    }
    r
}

/// The grafting pre-Lie morphism for `n = 0` and every decoration `|n| ≤ max_n`, on pairs of
/// expanded trees whose grafts have at most `max_edges` integration edges
/// and whose leaves, at most `max_leaves` per tree, satisfy `|n| ≤ max_n`.
pub fn verify_prelie_morphism_gpam(max_edges: u32, max_n: i64, max_leaves: usize, p: &Params) -> Report {
    let decos = decorations(max_n, p);
    let pool = crate::trees::decorated_trees(max_edges, &decos, max_leaves);
    let mut r = Report::new(
        "prelie-gpam",
        format!("pairs of decorated trees grafting to at most {max_edges} edges, |n| ≤ {max_n}, at most {max_leaves} leaves each"),
    );
    let mut ns = vec![N0];
    ns.extend(decos.iter().copied());
    for a in &pool {
        for b in &pool {
            if a.edges() + b.edges() + 1 > max_edges {
                continue;
            }
            for n in &ns {
                let lhs = ring_dagger_combo(&star_n(*n, a, b));
                let rhs = series_mul(&phi_ring_minus_dagger(a), &apply_dn(*n, &phi_ring_minus_dagger(b)));
                r.check(lhs == rhs, || format!("{a} *_{n:?} {b}"));
            }
        }
    }
    r
}

/// Intertwining of the sharp maps: `φ̊₋†♯ᵢZ_τ = ∂ᵢ φ̊₋†Z_τ`.
pub fn verify_sharp_intertwine(max_edges: u32, max_n: i64, max_leaves: usize, p: &Params) -> Report {
    let pool = crate::trees::decorated_trees(max_edges, &decorations(max_n, p), max_leaves);
    let mut r = Report::new(
        "sharp",
        format!("decorated trees with at most {max_edges} edges, |n| ≤ {max_n}, at most {max_leaves} leaves"),
    );
    for t in &pool {
        for i in [1u8, 2] {
            let lhs = ring_dagger_combo(&sharp(i, t));
            let rhs = apply_del(i, &phi_ring_minus_dagger(t));
            r.check(lhs == rhs, || format!("♯{i} {t}"));
        }
    }
    r
}

/// Nonzero `n` with `|n| ≤ max_n`.
pub fn decorations(max_n: i64, p: &Params) -> Vec<NIdx> {
    let mut v = Vec::new();
    for a in 0..=max_n.max(0) as u32 {
        for b in 0..=max_n.max(0) as u32 {
            if (a, b) != N0 && p.nabs((a, b)) <= max_n {
                v.push((a, b));
            }
        }
    }
    v
}

/// Model indices over `z_0..=z_kmax` and `z_n` (`|n| ≤ nmax`) of length at most `max_len`.
pub fn gpam_pool(kmax: u32, nmax: i64, max_len: u32, p: &Params) -> Vec<MultiIndex> {
    let letters = crate::index::full_letters(kmax, nmax, p);
    crate::index::enumerate_indices(&letters, max_len, |g| !g.is_one() && crate::index::is_model_index(g))
}

/// `Δ_H φ₋ z_β = (Φ ⊗ φ₋)Δ z_β`.
pub fn comodule_morphism_sides(beta: &MultiIndex, p: &Params) -> Result<(HComodule, HComodule), HopfError> {
    let mut lhs = HComodule::zero();
    for (t, c) in phi_minus(beta).iter() {
        lhs.add_scaled(&delta_h_tree(t, p), c);
    }
    let mut rhs = HComodule::zero();
    for ((idx, gamma), c) in delta_shared(beta, Mode::Full, p)?.iter() {
        let right = phi_minus(gamma);
        if right.is_zero() {
            continue;
        }
        for (x, a) in phi_plus(idx, p).iter() {
            for (t, b) in right.iter() {
                rhs.add_term((x.clone(), HElem::tree(t)), c * a * b);
            }
        }
    }
    Ok((lhs, rhs))
}

/// `Δ_H⁺ Φ Z = (Φ ⊗ Φ)Δ⁺ Z` on a basis element of `T⁺`.
pub fn coproduct_morphism_sides(idx: &EnvIndex, p: &Params) -> (HCoproduct, HCoproduct) {
    let mut lhs = HCoproduct::zero();
    for (x, c) in phi_plus(idx, p).iter() {
        lhs.add_scaled(&delta_h_plus(x, p), c);
    }
    let mut rhs = HCoproduct::zero();
    for ((l, r), c) in delta_plus(idx, Mode::Full, p).iter() {
        let pr = phi_plus(r, p);
        for (x, a) in phi_plus(l, p).iter() {
            for (y, b) in pr.iter() {
                rhs.add_term((x.clone(), y.clone()), c * a * b);
            }
        }
    }
    (lhs, rhs)
}

/// The identities `Δ_Hφ₋ = (Φ⊗φ₋)Δ` and `Δ_H⁺Φ = (Φ⊗Φ)Δ⁺` on a pool of
/// model indices; the latter on the generators `Z^(e_(β,n),0)` and `Z^(0,eᵢ)`.
pub fn verify_gpam_intertwining(pool: &[MultiIndex], p: &Params) -> Result<(Report, Report), HopfError> {
    let mut fw = Report::new("gpam-fw01", format!("{} model indices", pool.len()));
    let mut gp = Report::new("gpam-gp03", format!("generators over {} model indices", pool.len()));
    for beta in pool {
        let (l, r) = comodule_morphism_sides(beta, p)?;
        fw.check(l == r, || format!("β = {beta}"));
        let bound = hom_value(beta, p);
        for n in crate::index::n_indices_below(&bound, p, true) {
            if crate::lie::in_lie_algebra(beta, n, Mode::Full, p) {
                let idx = EnvIndex::gen(beta.clone(), n);
                let (l, r) = coproduct_morphism_sides(&idx, p);
                gp.check(l == r, || format!("Z^(e({beta},{n:?}),0)"));
            }
        }
    }
    for m in [(1, 0), (0, 1)] {
        let (l, r) = coproduct_morphism_sides(&EnvIndex::del(m), p);
        gp.check(l == r, || format!("Z^(0,{m:?})"));
    }
    Ok((fw, gp))
}

/// Homogeneity compatibility: `φ₋ z_β` lives on `|τ|_H = |β| − 2`.
pub fn verify_homogeneity(pool: &[MultiIndex], p: &Params) -> Report {
    let mut r = Report::new("gpam-homogeneity", format!("{} model indices", pool.len()));
    for beta in pool {
        let h = hom_value(beta, p) - q(2);
        let ok = phi_minus(beta).keys().all(|t| t.hom_h(p) == h);
        r.check(ok, || format!("β = {beta}"));
    }
    r
}

/// Pairs of distinct indices in the pool whose images under `f` share a tree.
pub fn collisions(pool: &[MultiIndex], f: &dyn Fn(&MultiIndex) -> TreeCombo) -> Vec<(MultiIndex, MultiIndex)> {
    let images: Vec<(MultiIndex, TreeCombo)> = pool.iter().map(|b| (b.clone(), f(b))).filter(|(_, x)| !x.is_zero()).collect();
    let mut out = Vec::new();
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[i].1.keys().any(|t| images[j].1.coeff(t) != Q::zero()) {
                out.push((images[i].0.clone(), images[j].0.clone()));
            }
        }
    }
    out
}

/// `Υ^a[τ₁ ↷ τ₂] = Υ^a[τ₁] · d/du Υ^a[τ₂]`.
pub fn upsilon_rp_graft_defect(t1: &Tree, t2: &Tree, a: &[Q]) -> UPoly {
    let mut lhs = UPoly::zero();
    for (t, c) in graft_n(N0, t1, t2).iter() {
        lhs.add_scaled(&upsilon_rp_poly(t, a), c);
    }
    lhs - upsilon_rp_poly(t1, a).mul(&upsilon_rp_poly(t2, a).derivative(&UVar::U))
}

/// Restriction to the base point `y = 0`, where the `u^(m)` are the jet of `u` at `y`.
fn at_origin(v: &UPoly) -> UPoly {
    v.filter(|m| !m.letters().any(|l| matches!(l, UVar::Y(_))))
}

/// `Υ̊^a[τ₁ ↷_n τ₂] − Υ̊^a[τ₁] · d/du^(n) Υ̊^a[τ₂]`. The derivative is taken
/// in the jet coordinates of `u` at the base point, so the identity is
/// evaluated at `y = 0`; translation invariance covers every other `y`.
pub fn upsilon_gpam_graft_defect(n: NIdx, t1: &Tree, t2: &Tree, a: &[Q], max_deg: u32) -> UPoly {
    let ev = |x: &TreeCombo| at_origin(&upsilon_gpam_poly(x, a, max_deg));
    let lhs = ev(&graft_n(n, t1, t2));
    let u1 = ev(&TreeCombo::basis(t1.clone()));
    let u2 = ev(&TreeCombo::basis(t2.clone()));
    lhs - u1.mul(&u2.derivative(&UVar::Coef(n)))
}

/// `Υ̊^a[↑ᵢτ] − d/dyᵢ Υ̊^a[τ]`.
pub fn upsilon_gpam_up_defect(i: u8, t: &Tree, a: &[Q], max_deg: u32) -> UPoly {
    let lhs = upsilon_gpam_poly(&uparrow(i, t), a, max_deg);
    lhs - upsilon_gpam_poly(&TreeCombo::basis(t.clone()), a, max_deg).derivative(&UVar::Y(i))
}

/// `X^n` image of a polynomial generator under `Φ`, for reference.
pub fn phi_plus_poly(n: NIdx) -> HPlus {
    x_plus(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combo::qr;
    use crate::index::{ek, en, parse_multi_index};

    fn mi(s: &str) -> MultiIndex {
        parse_multi_index(s).unwrap()
    }

    fn cherry() -> Tree {
        Tree::b_plus(vec![Tree::node(), Tree::node()])
    }

    #[test]
    fn tree_sets() {
        assert_eq!(enumerate_trees(&ek(0)).into_iter().collect::<Vec<_>>(), vec![Tree::node()]);
        let t = enumerate_trees(&mi("e2+e1+2e0"));
        assert_eq!(t.len(), 2);
        assert!(enumerate_trees(&mi("e1+e0+e0")).is_empty());
        assert!(enumerate_trees(&mi("e2")).is_empty());
    }

    #[test]
    fn phi_rp_examples() {
        assert_eq!(phi_rp(&mi("e2+2e0")), TreeCombo::basis(cherry()));
        let x = phi_rp(&mi("e2+e1+2e0"));
        let a = Tree::b_plus(vec![Tree::chain(2), Tree::node()]);
        let b = Tree::b_plus(vec![cherry()]);
        assert_eq!(x, TreeCombo::from_terms([(a, q(2)), (b, q(1))]));
        let d = phi_rp_dagger(&cherry());
        assert_eq!(d, LieElement::basis(Generator::zd(mi("e2+2e0"), N0)));
    }

    #[test]
    fn phi_matches_orbit_sizes() {
        for beta in rp_pool(5) {
            let expected: TreeCombo = enumerate_trees(&beta)
                .into_iter()
                .map(|t| {
                    let c = Q::from_i64(sigma_mi(&beta) as i64) / Q::from_i64(t.sigma() as i64);
                    assert!(c.is_integer() && c > Q::zero());
                    (t, c)
                })
                .collect();
            assert_eq!(phi_rp(&beta), expected, "β = {beta}");
        }
        let p = Params::with_alpha(qr(1, 4));
        for beta in gpam_pool(3, 2, 4, &p) {
            let expected: TreeCombo = enumerate_trees(&beta)
                .into_iter()
                .map(|t| {
                    let c = Q::from_i64(sigma_mi(&beta) as i64) / Q::from_i64(t.sigma() as i64);
                    (t, c)
                })
                .collect();
            assert_eq!(phi_ring_minus(&beta), expected, "β = {beta}");
        }
    }

    #[test]
    fn prelie_example() {
        let lhs = {
            let mut s = LieElement::zero();
            for (t, c) in crate::trees::gl_product(&Tree::node(), &Tree::chain(2)).iter() {
                s.add_scaled(&phi_rp_dagger(t), c);
            }
            s
        };
        let expected = LieElement::from_terms([
            (Generator::zd(mi("e0+2e1"), N0), q(1)),
            (Generator::zd(mi("2e0+e2"), N0), q(2)),
        ]);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn rough_path_dictionary_small() {
        assert!(verify_prelie_morphism_rp(3).passed());
        assert!(verify_kernel_rp(4).passed());
        let p = Params::with_alpha(qr(1, 4));
        let r = verify_hopf_morphism_rp(3, &p);
        assert!(r.passed(), "{:?}", r.counterexamples);
    }

    #[test]
    fn gpam_examples() {
        assert_eq!(phi_minus(&ek(0)), TreeCombo::basis(Tree::node()));
        assert_eq!(phi(&ek(0)), Combo::basis(HElem::integrated(&Tree::node())));
        assert_eq!(phi(&en(1, 0)), Combo::basis(HElem::poly((1, 0))));
        let a = phi_minus(&mi("e1+e(2,0)"));
        let b = phi_minus(&mi("e2+2e(1,0)"));
        assert_eq!(a.keys().collect::<Vec<_>>(), b.keys().collect::<Vec<_>>());
        assert_ne!(phi_ring_minus(&mi("e1+e(2,0)")), phi_ring_minus(&mi("e2+2e(1,0)")));
    }

    #[test]
    fn gpam_lemmas_small() {
        let p = Params::with_alpha(qr(1, 4));
        let r = verify_prelie_morphism_gpam(2, 2, 2, &p);
        assert!(r.passed(), "{:?}", r.counterexamples);
        let r = verify_sharp_intertwine(2, 2, 2, &p);
        assert!(r.passed(), "{:?}", r.counterexamples);
    }

    #[test]
    fn gpam_intertwining_small() {
        let p = Params::with_alpha(qr(1, 4));
        let pool = gpam_pool(2, 2, 3, &p);
        let (fw, gp) = verify_gpam_intertwining(&pool, &p).unwrap();
        assert!(fw.passed(), "{:?}", fw.counterexamples);
        assert!(gp.passed(), "{:?}", gp.counterexamples);
        assert!(verify_homogeneity(&pool, &p).passed());
    }

    #[test]
    fn upsilon_examples() {
        let a = vec![q(1), q(1)];
        assert_eq!(upsilon_rp(&Tree::node(), &a, &q(3)), q(4));
        let chain = upsilon_rp_poly(&Tree::chain(2), &a);
        let expected = UPoly::from_terms([(Monomial::one(), q(1)), (Monomial::var(UVar::U), q(1))]);
        assert_eq!(chain, expected);
        let a = vec![qr(1, 2), q(-1), qr(2, 3), q(3)];
        for t in crate::trees::trees_up_to_edges(3) {
            let u = qr(-2, 5);
            let v = upsilon_rp_poly(&t, &a).evaluate(|_| u.clone());
            assert_eq!(v, upsilon_rp(&t, &a, &u));
            let k = t.children().len();
            let mut rec = shifted_coefficient(&a, k as u32, &UPoly::letter(UVar::U)).scale(&qb(factorial(k as u32)));
            for c in t.children() {
                rec = rec.mul(&upsilon_rp_poly(c, &a));
            }
            assert_eq!(rec, upsilon_rp_poly(&t, &a));
        }
    }

    #[test]
    fn upsilon_morphisms() {
        let a = vec![qr(1, 2), q(-1), qr(2, 3), q(3)];
        let pool = crate::trees::trees_up_to_edges(2);
        for t1 in &pool {
            for t2 in &pool {
                assert!(upsilon_rp_graft_defect(t1, t2, &a).is_zero());
            }
        }
        let a = vec![qr(1, 3), q(2), qr(-1, 2)];
        let pool = crate::trees::decorated_trees(1, &[(1, 0), (0, 1)], 1);
        for t1 in &pool {
            for t2 in &pool {
                for n in [N0, (1, 0), (0, 1)] {
                    assert!(upsilon_gpam_graft_defect(n, t1, t2, &a, 2).is_zero(), "{t1} ↷{n:?} {t2}");
                }
            }
            for i in [1u8, 2] {
                assert!(upsilon_gpam_up_defect(i, t1, &a, 2).is_zero(), "↑{i} {t1}");
            }
        }
    }
}
