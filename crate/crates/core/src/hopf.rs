//! The polynomial algebra `T⁺` dual to the envelope, the comodule map
//! `Δ: T → T⁺ ⊗ T`, the coproduct `Δ⁺`, the maps `𝒥_n` and the antipode.

use crate::combo::{binom, factorial, q, qb, Combo, Q};
use crate::envelope::{grade_word, product_words, EnvIndex};
use crate::index::{
    as_unit_poly, hom_value, homogeneity, is_model_index, n_indices_below, noise_homogeneity, FormalSeries, Letter, Mode,
    MultiIndex, NIdx, Params, N0,
};
use crate::lie::{del_transpose, dn_transpose, in_lie_algebra};
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

/// Element of `T⁺`: polynomial in the variables `Z^(e_(γ,n),0)` and `Z^(0,eᵢ)`,
/// with `Z^a Z^b = Z^(a+b)`.
pub type PlusElement = Combo<EnvIndex>;

/// Element of `T⁺ ⊗ T`.
pub type TensorPlusModel = Combo<(EnvIndex, MultiIndex)>;

/// Element of `T⁺ ⊗ T⁺`.
pub type TensorPlusPlus = Combo<(EnvIndex, EnvIndex)>;

/// Element of `T⁺ ⊗ T⁺ ⊗ T` or `T⁺ ⊗ T⁺ ⊗ T⁺`.
pub type Triple<K> = Combo<(EnvIndex, EnvIndex, K)>;

/// Errors of the Hopf layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HopfError {
    #[error("{0} is not a model index")]
    NotModelIndex(String),
}

/// Product in `T⁺`.
pub fn plus_mul(a: &PlusElement, b: &PlusElement) -> PlusElement {
    let mut out = PlusElement::zero();
    for (x, c) in a.iter() {
        for (y, d) in b.iter() {
            out.add_term(x.add(y), c * d);
        }
    }
    out
}

/// Counit of `T⁺`: the coefficient of `Z^(0,0)`.
pub fn plus_counit(x: &PlusElement) -> Q {
    x.coeff(&EnvIndex::one())
}

/// Leg-wise product of two tensors in `T⁺ ⊗ T⁺`.
pub fn tensor_plus_mul(a: &TensorPlusPlus, b: &TensorPlusPlus) -> TensorPlusPlus {
    let mut out = TensorPlusPlus::zero();
    for ((a1, a2), c) in a.iter() {
        for ((b1, b2), d) in b.iter() {
            out.add_term((a1.add(b1), a2.add(b2)), c * d);
        }
    }
    out
}

type ModeKey = (Mode, Q, (u32, u32));

fn mode_key(mode: Mode, p: &Params) -> ModeKey {
    (mode, p.alpha.clone(), p.weights)
}

fn is_output_index(g: &MultiIndex, mode: Mode) -> bool {
    match mode {
        Mode::Full | Mode::Gpam => is_model_index(g),
        Mode::Rp | Mode::Rp2 => mode.alphabet().admits(g),
    }
}

fn check_input(beta: &MultiIndex, mode: Mode) -> Result<(), HopfError> {
    if is_output_index(beta, mode) {
        Ok(())
    } else {
        Err(HopfError::NotModelIndex(format!("{beta}")))
    }
}

/// Admissible labels `(γ, n)` of the mode with `γ` dividing `β`.
fn labels_below(beta: &MultiIndex, mode: Mode, p: &Params) -> Vec<(MultiIndex, NIdx)> {
    let mut out = Vec::new();
    for g in beta.divisors() {
        if noise_homogeneity(&g) < 0 || !mode.alphabet().admits(&g) {
            continue;
        }
        let ns = match mode {
            Mode::Full | Mode::Gpam => n_indices_below(&hom_value(&g, p), p, true),
            Mode::Rp | Mode::Rp2 => vec![N0],
        };
        for n in ns {
            if in_lie_algebra(&g, n, mode, p) {
                out.push((g.clone(), n));
            }
        }
    }
    out.sort();
    out
}

fn delta_cache() -> &'static Mutex<HashMap<(MultiIndex, ModeKey), Arc<TensorPlusModel>>> {
    static C: OnceLock<Mutex<HashMap<(MultiIndex, ModeKey), Arc<TensorPlusModel>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The comodule map `Δ z_β = Σ (D_(J,m))^γ_β Z^(J,m) ⊗ z_γ`.
///
/// Each coefficient is obtained by transposition: `ρ D_(J,m)` is
/// `(1/(J!m!)) z^{Σγᵢ} ∂^m Π D^(nᵢ)`, so the transposed chain is applied to
/// `z_β` and read off on model indices `γ`. The enumeration over `J` is finite
/// because every `γᵢ` divides `β` and the noise grades `1+[γᵢ] ≥ 1` sum to at
/// most `1+[β]`.
pub fn delta(beta: &MultiIndex, mode: Mode, p: &Params) -> Result<TensorPlusModel, HopfError> {
    delta_shared(beta, mode, p).map(|d| (*d).clone())
}

/// [`delta`] behind a shared pointer, avoiding a copy of cached values.
pub fn delta_shared(beta: &MultiIndex, mode: Mode, p: &Params) -> Result<Arc<TensorPlusModel>, HopfError> {
    check_input(beta, mode)?;
    let key = (beta.clone(), mode_key(mode, p));
    if let Some(v) = delta_cache().lock().expect("cache").get(&key) {
        return Ok(v.clone());
    }
    let labels = labels_below(beta, mode, p);
    let budget = noise_homogeneity(beta) + 1;
    let with_m = matches!(mode, Mode::Full | Mode::Gpam);
    let mut out = TensorPlusModel::zero();
    let mut stack: Vec<(usize, EnvIndex, MultiIndex, i64)> = vec![(0, EnvIndex::one(), beta.clone(), budget)];
    while let Some((start, j, rest, left)) = stack.pop() {
        accumulate_delta(&j, &rest, with_m, mode, &mut out);
        for (i, (g, n)) in labels.iter().enumerate().skip(start) {
            let cost = 1 + noise_homogeneity(g);
            if cost > left {
                continue;
            }
            if let Some(r) = rest.checked_div(g) {
                stack.push((i, j.with_label(&(g.clone(), *n)), r, left - cost));
            }
        }
    }
    let out = Arc::new(out);
    delta_cache().lock().expect("cache").insert(key, out.clone());
    Ok(out)
}

fn accumulate_delta(j: &EnvIndex, rest: &MultiIndex, with_m: bool, mode: Mode, out: &mut TensorPlusModel) {
    let labels = j.labels();
    let start = FormalSeries::basis(rest.clone());
    let mut m1_chain = vec![start];
    if with_m {
        loop {
            let next = del_transpose(1, m1_chain.last().expect("nonempty"));
            if next.is_zero() {
                break;
            }
            m1_chain.push(next);
        }
    }
    for (m1, s1) in m1_chain.iter().enumerate() {
        let mut s = s1.clone();
        let mut m2 = 0u32;
        loop {
            let mut t = s.clone();
            for ((_, n), c) in labels.iter() {
                for _ in 0..*c {
                    t = dn_transpose(*n, &t);
                }
            }
            let mut idx = j.clone();
            idx.m = (m1 as u32, m2);
            let norm = Q::new(1.into(), idx.factorial());
            for (g, c) in t.iter() {
                if is_output_index(g, mode) {
                    out.add_term((idx.clone(), g.clone()), c * &norm);
                }
            }
            if !with_m {
                break;
            }
            s = del_transpose(2, &s);
            if s.is_zero() {
                break;
            }
            m2 += 1;
        }
    }
}

/// `𝒥_n z_β = n! Z^(e_(β,n),0)` if `(β, n)` is admissible in the mode, else `0`.
pub fn j_map(n: NIdx, beta: &MultiIndex, mode: Mode, p: &Params) -> PlusElement {
    if in_lie_algebra(beta, n, mode, p) {
        PlusElement::term(EnvIndex::gen(beta.clone(), n), qb(factorial(n.0) * factorial(n.1)))
    } else {
        PlusElement::zero()
    }
}

/// Linear extension of `𝒥_n` to series.
pub fn j_map_series(n: NIdx, s: &FormalSeries, mode: Mode, p: &Params) -> PlusElement {
    let mut out = PlusElement::zero();
    for (b, c) in s.iter() {
        out.add_scaled(&j_map(n, b, mode, p), c);
    }
    out
}

/// Right side of the intertwining relation:
/// `(id ⊗ 𝒥_n) Δ z_γ + Σ_m 𝒥_{m+n} z_γ ⊗ Z^(0,m)/m!`.
pub fn intertwining_rhs(n: NIdx, gamma: &MultiIndex, mode: Mode, p: &Params) -> Result<TensorPlusPlus, HopfError> {
    let mut out = TensorPlusPlus::zero();
    for ((l, g), c) in delta(gamma, mode, p)?.iter() {
        for (r, d) in j_map(n, g, mode, p).iter() {
            out.add_term((l.clone(), r.clone()), c * d);
        }
    }
    let ms = match mode {
        Mode::Full | Mode::Gpam => n_indices_below(&hom_value(gamma, p), p, true),
        Mode::Rp | Mode::Rp2 => vec![N0],
    };
    for m in ms {
        let mn = (m.0 + n.0, m.1 + n.1);
        let norm = Q::new(1.into(), factorial(m.0) * factorial(m.1));
        for (l, c) in j_map(mn, gamma, mode, p).iter() {
            out.add_term((l.clone(), EnvIndex::del(m)), c * &norm);
        }
    }
    Ok(out)
}

fn dplus_cache() -> &'static Mutex<HashMap<(EnvIndex, ModeKey), Arc<TensorPlusPlus>>> {
    static C: OnceLock<Mutex<HashMap<(EnvIndex, ModeKey), Arc<TensorPlusPlus>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Δ⁺` on a length-one index.
fn delta_plus_generator(g: &EnvIndex, mode: Mode, p: &Params) -> Arc<TensorPlusPlus> {
    let key = (g.clone(), mode_key(mode, p));
    if let Some(v) = dplus_cache().lock().expect("cache").get(&key) {
        return v.clone();
    }
    let out = if g.j_is_empty() {
        let mut t = TensorPlusPlus::zero();
        t.add_term((g.clone(), EnvIndex::one()), Q::one());
        t.add_term((EnvIndex::one(), g.clone()), Q::one());
        t
    } else {
        let ((gamma, n), _) = g.labels().pop().expect("one letter");
        let norm = Q::new(1.into(), factorial(n.0) * factorial(n.1));
        intertwining_rhs(n, &gamma, mode, p).expect("label indices are model indices").scale(&norm)
    };
    let out = Arc::new(out);
    dplus_cache().lock().expect("cache").insert(key, out.clone());
    out
}

/// The coproduct `Δ⁺ Z^(J,m)`, multiplicative over the length-one factors.
pub fn delta_plus(idx: &EnvIndex, mode: Mode, p: &Params) -> TensorPlusPlus {
    let factors = idx.factors();
    if factors.len() == 1 {
        return (*delta_plus_generator(&factors[0], mode, p)).clone();
    }
    let mut acc: HashMap<(EnvIndex, EnvIndex), Q> = HashMap::new();
    acc.insert((EnvIndex::one(), EnvIndex::one()), Q::one());
    for f in factors {
        let g = delta_plus_generator(&f, mode, p);
        let mut next: HashMap<(EnvIndex, EnvIndex), Q> = HashMap::with_capacity(acc.len() * g.len());
        for ((a1, a2), c) in acc.iter() {
            for ((b1, b2), d) in g.iter() {
                *next.entry((a1.add(b1), a2.add(b2))).or_default() += c * d;
            }
        }
        acc = next;
    }
    TensorPlusPlus::from_distinct(acc)
}

/// Linear extension of `Δ⁺`.
pub fn delta_plus_element(x: &PlusElement, mode: Mode, p: &Params) -> TensorPlusPlus {
    let mut out = TensorPlusPlus::zero();
    for (idx, c) in x.iter() {
        out.add_scaled(&delta_plus(idx, mode, p), c);
    }
    out
}

fn antipode_cache() -> &'static Mutex<HashMap<(EnvIndex, ModeKey), PlusElement>> {
    static C: OnceLock<Mutex<HashMap<(EnvIndex, ModeKey), PlusElement>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The antipode on a basis monomial, multiplicative since `T⁺` is commutative.
pub fn antipode_index(idx: &EnvIndex, mode: Mode, p: &Params) -> PlusElement {
    if idx.is_one() {
        return PlusElement::basis(EnvIndex::one());
    }
    let key = (idx.clone(), mode_key(mode, p));
    if let Some(v) = antipode_cache().lock().expect("cache").get(&key) {
        return v.clone();
    }
    let factors = idx.factors();
    let out = if factors.len() > 1 {
        factors
            .iter()
            .fold(PlusElement::basis(EnvIndex::one()), |acc, f| plus_mul(&acc, &antipode_index(f, mode, p)))
    } else {
        let mut s = PlusElement::term(idx.clone(), -Q::one());
        for ((l, r), c) in delta_plus(idx, mode, p).iter() {
            if (l == idx && r.is_one()) || (l.is_one() && r == idx) {
                continue;
            }
            let term = plus_mul(&antipode_index(l, mode, p), &PlusElement::basis(r.clone()));
            s.add_scaled(&term, &(-c));
        }
        s
    };
    antipode_cache().lock().expect("cache").insert(key, out.clone());
    out
}

/// Linear extension of the antipode.
pub fn antipode(x: &PlusElement, mode: Mode, p: &Params) -> PlusElement {
    let mut out = PlusElement::zero();
    for (idx, c) in x.iter() {
        out.add_scaled(&antipode_index(idx, mode, p), c);
    }
    out
}

/// `(id ⊗ Δ) Δ z_β`.
pub fn comodule_left(beta: &MultiIndex, mode: Mode, p: &Params) -> Result<Triple<MultiIndex>, HopfError> {
    let mut out = Triple::zero();
    for ((l, g), c) in delta_shared(beta, mode, p)?.iter() {
        for ((l2, g2), d) in delta_shared(g, mode, p)?.iter() {
            out.add_term((l.clone(), l2.clone(), g2.clone()), c * d);
        }
    }
    Ok(out)
}

/// `(Δ⁺ ⊗ id) Δ z_β`.
pub fn comodule_right(beta: &MultiIndex, mode: Mode, p: &Params) -> Result<Triple<MultiIndex>, HopfError> {
    let mut out = Triple::zero();
    for ((l, g), c) in delta_shared(beta, mode, p)?.iter() {
        for ((a, b), d) in delta_plus(l, mode, p).iter() {
            out.add_term((a.clone(), b.clone(), g.clone()), c * d);
        }
    }
    Ok(out)
}

/// Whether the comodule law holds at `β`.
///
/// Both sides are accumulated into one hash map with opposite signs, which
/// avoids materializing two ordered triple tensors.
pub fn check_comodule(beta: &MultiIndex, mode: Mode, p: &Params) -> Result<bool, HopfError> {
    let d = delta_shared(beta, mode, p)?;
    let mut acc: HashMap<(EnvIndex, EnvIndex, MultiIndex), Q> = HashMap::new();
    for ((l, g), c) in d.iter() {
        for ((l2, g2), e) in delta_shared(g, mode, p)?.iter() {
            *acc.entry((l.clone(), l2.clone(), g2.clone())).or_default() += c * e;
        }
        for ((a, b), e) in delta_plus(l, mode, p).iter() {
            *acc.entry((a.clone(), b.clone(), g.clone())).or_default() -= c * e;
        }
    }
    Ok(acc.values().all(|v| v.is_zero()))
}

/// Whether the counit applied to the left leg of `Δ z_β` recovers `z_β`.
pub fn check_counit(beta: &MultiIndex, mode: Mode, p: &Params) -> Result<bool, HopfError> {
    let d = delta(beta, mode, p)?;
    let mut s = FormalSeries::zero();
    for ((l, g), c) in d.iter() {
        if l.is_one() {
            s.add_term(g.clone(), c.clone());
        }
    }
    Ok(s == FormalSeries::basis(beta.clone()))
}

/// Whether `Δ⁺` is coassociative on `Z^(J,m)`.
pub fn check_coassoc(idx: &EnvIndex, mode: Mode, p: &Params) -> bool {
    let d = delta_plus(idx, mode, p);
    let mut left = Triple::<EnvIndex>::zero();
    let mut right = Triple::<EnvIndex>::zero();
    for ((a, b), c) in d.iter() {
        for ((a1, a2), e) in delta_plus(a, mode, p).iter() {
            left.add_term((a1.clone(), a2.clone(), b.clone()), c * e);
        }
        for ((b1, b2), e) in delta_plus(b, mode, p).iter() {
            right.add_term((a.clone(), b1.clone(), b2.clone()), c * e);
        }
    }
    left == right
}

/// Whether `m(S ⊗ id)Δ⁺` and `m(id ⊗ S)Δ⁺` both equal `η ∘ ε` on `Z^(J,m)`.
pub fn check_antipode(idx: &EnvIndex, mode: Mode, p: &Params) -> bool {
    let d = delta_plus(idx, mode, p);
    let mut left = PlusElement::zero();
    let mut right = PlusElement::zero();
    for ((a, b), c) in d.iter() {
        left.add_scaled(&plus_mul(&antipode_index(a, mode, p), &PlusElement::basis(b.clone())), c);
        right.add_scaled(&plus_mul(&PlusElement::basis(a.clone()), &antipode_index(b, mode, p)), c);
    }
    let expected = if idx.is_one() { PlusElement::basis(EnvIndex::one()) } else { PlusElement::zero() };
    left == expected && right == expected
}

/// Whether `Δ⁺ 𝒥_n z_γ` equals the intertwining right side; for inadmissible
/// `(γ, n)` both sides must vanish.
pub fn check_intertwining(n: NIdx, gamma: &MultiIndex, mode: Mode, p: &Params) -> Result<bool, HopfError> {
    let lhs = delta_plus_element(&j_map(n, gamma, mode, p), mode, p);
    Ok(lhs == intertwining_rhs(n, gamma, mode, p)?)
}

/// The closed form `Δ z_{e_n} = Σ_{n'+n''=n, n''≠0} binom(n,n') Z^(0,n') ⊗ z_{e_{n''}}`.
pub fn comodule_poly_expected(n: NIdx) -> TensorPlusModel {
    let mut out = TensorPlusModel::zero();
    for a in 0..=n.0 {
        for b in 0..=n.1 {
            let rest = (n.0 - a, n.1 - b);
            if rest == N0 {
                continue;
            }
            let c = qb(binom(n.0, a) * binom(n.1, b));
            out.add_term((EnvIndex::del((a, b)), MultiIndex::var(Letter::N(rest.0, rest.1))), c);
        }
    }
    out
}

/// Whether `Δ z_{e_n}` matches its closed form.
pub fn check_comodule_poly(n: NIdx, p: &Params) -> bool {
    let beta = MultiIndex::var(Letter::N(n.0, n.1));
    delta(&beta, Mode::Full, p).map(|d| d == comodule_poly_expected(n)).unwrap_or(false)
}

/// Grading defects: terms of `Δ z_β` with `|β| ≠ grade(left) + |γ|`.
pub fn delta_grading_defects(beta: &MultiIndex, mode: Mode, p: &Params) -> Result<usize, HopfError> {
    let hb = homogeneity(beta, p);
    Ok(delta(beta, mode, p)?
        .keys()
        .filter(|(l, g)| {
            let rhs = grade_word(l, p) + homogeneity(g, p);
            let poly = as_unit_poly(g).is_some();
            if poly {
                p.value(&hb) != p.value(&grade_word(l, p)) + q(p.nabs(as_unit_poly(g).expect("unit")))
            } else {
                p.value(&hb) != p.value(&rhs)
            }
        })
        .count())
}

/// Whether the two legs of `Δ⁺ Z^(J,m)` have grades adding up to the grade of `(J,m)`.
pub fn delta_plus_grading_ok(idx: &EnvIndex, mode: Mode, p: &Params) -> bool {
    let g = p.value(&grade_word(idx, p));
    delta_plus(idx, mode, p)
        .keys()
        .all(|(a, b)| p.value(&grade_word(a, p)) + p.value(&grade_word(b, p)) == g)
}

/// Compares the coefficient of `Z^u ⊗ Z^v` in `Δ⁺ Z^w` with the coefficient of
/// `D_w` in the product `D_u D_v`, for all `u, v` in the pool of total length
/// at most `max_len` and every `w` occurring on either side. Returns the
/// mismatching triples.
pub fn product_duality_defects(
    pool: &[EnvIndex],
    max_len: u32,
    mode: Mode,
    p: &Params,
) -> Vec<(EnvIndex, EnvIndex, EnvIndex)> {
    let mut bad = Vec::new();
    let in_pool: std::collections::HashSet<&EnvIndex> = pool.iter().collect();
    for u in pool {
        for v in pool.iter().filter(|v| u.len() + v.len() <= max_len) {
            let prod = product_words(u, v);
            for (w, c) in prod.iter() {
                if delta_plus(w, mode, p).coeff(&(u.clone(), v.clone())) != *c {
                    bad.push((u.clone(), v.clone(), w.clone()));
                }
            }
        }
    }
    for w in pool {
        for ((u, v), c) in delta_plus(w, mode, p).iter() {
            if in_pool.contains(u) && in_pool.contains(v) && product_words(u, v).coeff(w) != *c {
                bad.push((u.clone(), v.clone(), w.clone()));
            }
        }
    }
    bad
}
