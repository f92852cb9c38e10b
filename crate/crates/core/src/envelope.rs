//! The universal envelope of the Lie algebra in the basis `D_(J,m)`, obtained
//! by iterated insertion `z^γ (·) D^(n)` applied to `∂^m/m!` and normalized by
//! `1/(J!m!)`, with its coproduct, representation, projections, counits and
//! concatenation product.

use crate::combo::{q, qb, Combo, Monomial, Q};
use crate::index::{homogeneity, noise_homogeneity, poly_weight, FormalSeries, Homogeneity, Mode, MultiIndex, NIdx, Params, N0};
use crate::lie::{apply_dn, apply_del, apply_monomial, bigrade, in_lie_algebra, Bigrade, Generator};
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock, RwLock};
use thiserror::Error;

/// Letter of the `J` part of an envelope index: a pair `(γ, n)`.
pub type GenLabel = (MultiIndex, NIdx);

/// Interned handle of a label `(γ, n)`; compares by interning order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(u32);

#[derive(Default)]
struct Interner {
    ids: HashMap<GenLabel, u32>,
    labels: Vec<GenLabel>,
}

fn interner() -> &'static RwLock<Interner> {
    static I: OnceLock<RwLock<Interner>> = OnceLock::new();
    I.get_or_init(|| RwLock::new(Interner::default()))
}

impl LabelId {
    pub fn of(label: &GenLabel) -> LabelId {
        if let Some(id) = interner().read().expect("interner").ids.get(label) {
            return LabelId(*id);
        }
        let mut w = interner().write().expect("interner");
        if let Some(id) = w.ids.get(label) {
            return LabelId(*id);
        }
        let id = w.labels.len() as u32;
        w.labels.push(label.clone());
        w.ids.insert(label.clone(), id);
        LabelId(id)
    }

    pub fn label(&self) -> GenLabel {
        interner().read().expect("interner").labels[self.0 as usize].clone()
    }
}

/// Index `(J, m)` of the basis element `D_(J,m)` and of the dual variable `Z^(J,m)`.
///
/// The labels of `J` are interned, so the derived order is deterministic
/// within a process but not canonical; use [`EnvIndex::canonical_key`] for
/// canonical sorting.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EnvIndex {
    j: Monomial<LabelId>,
    pub m: NIdx,
}

impl fmt::Debug for EnvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, ((g, n), c)) in self.labels().iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if *c > 1 {
                write!(f, "{c}")?;
            }
            write!(f, "e[{g};{},{}]", n.0, n.1)?;
        }
        write!(f, "|{},{})", self.m.0, self.m.1)
    }
}

#[derive(Serialize, Deserialize)]
struct EnvIndexJson {
    #[serde(rename = "J")]
    j: Vec<(GenLabel, u32)>,
    m: NIdx,
}

impl Serialize for EnvIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EnvIndexJson { j: self.labels(), m: self.m }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EnvIndex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = EnvIndexJson::deserialize(d)?;
        Ok(EnvIndex::new(v.j, v.m))
    }
}

impl EnvIndex {
    /// The empty index `(0, 0)`.
    pub fn one() -> EnvIndex {
        EnvIndex::default()
    }

    /// Index from label multiplicities and `m`.
    pub fn new<I: IntoIterator<Item = (GenLabel, u32)>>(j: I, m: NIdx) -> EnvIndex {
        EnvIndex { j: Monomial::from_pairs(j.into_iter().map(|(l, c)| (LabelId::of(&l), c))), m }
    }

    /// `(e_(γ,n), 0)`.
    pub fn gen(gamma: MultiIndex, n: NIdx) -> EnvIndex {
        EnvIndex { j: Monomial::var(LabelId::of(&(gamma, n))), m: N0 }
    }

    /// `(0, m)`.
    pub fn del(m: NIdx) -> EnvIndex {
        EnvIndex { j: Monomial::one(), m }
    }

    /// Labels of `J` with multiplicities, in canonical order.
    pub fn labels(&self) -> Vec<(GenLabel, u32)> {
        let mut v: Vec<(GenLabel, u32)> = self.j.iter().map(|(l, c)| (l.label(), *c)).collect();
        v.sort();
        v
    }

    /// Multiplicity `J(γ, n)`.
    pub fn count(&self, label: &GenLabel) -> u32 {
        self.j.get(&LabelId::of(label))
    }

    /// `Σ J`.
    pub fn j_len(&self) -> u32 {
        self.j.degree()
    }

    /// Whether `J = 0`.
    pub fn j_is_empty(&self) -> bool {
        self.j.is_one()
    }

    /// Canonical sort key.
    pub fn canonical_key(&self) -> (Vec<(GenLabel, u32)>, NIdx) {
        (self.labels(), self.m)
    }

    /// Multiplies `D_(J,m)` by the label, i.e. `J ↦ J + e_(γ,n)`.
    pub fn with_label(&self, label: &GenLabel) -> EnvIndex {
        EnvIndex { j: self.j.add_var(&LabelId::of(label), 1), m: self.m }
    }

    /// Index of a single generator.
    pub fn of_generator(g: &Generator) -> EnvIndex {
        match g {
            Generator::Del(1) => EnvIndex::del((1, 0)),
            Generator::Del(_) => EnvIndex::del((0, 1)),
            Generator::ZD { gamma, n } => EnvIndex::gen(gamma.clone(), *n),
        }
    }

    pub fn is_one(&self) -> bool {
        self.j.is_one() && self.m == N0
    }

    /// Index addition, i.e. the product `Z^a Z^b = Z^(a+b)` in the polynomial algebra.
    pub fn add(&self, o: &EnvIndex) -> EnvIndex {
        EnvIndex { j: self.j.mul(&o.j), m: (self.m.0 + o.m.0, self.m.1 + o.m.1) }
    }

    /// `Σ J + m₁ + m₂`.
    pub fn len(&self) -> u32 {
        self.j.degree() + self.m.0 + self.m.1
    }

    /// `J! m!`.
    pub fn factorial(&self) -> num_bigint::BigInt {
        self.j.factorial() * crate::combo::factorial(self.m.0) * crate::combo::factorial(self.m.1)
    }

    /// All splittings `(J', m') + (J'', m'') = (J, m)`.
    pub fn splits(&self) -> Vec<(EnvIndex, EnvIndex)> {
        let mut out = Vec::new();
        for (j1, j2) in self.j.splits() {
            for a in 0..=self.m.0 {
                for b in 0..=self.m.1 {
                    out.push((
                        EnvIndex { j: j1.clone(), m: (a, b) },
                        EnvIndex { j: j2.clone(), m: (self.m.0 - a, self.m.1 - b) },
                    ));
                }
            }
        }
        out
    }

    /// Length-one factors, with repetition.
    pub fn factors(&self) -> Vec<EnvIndex> {
        let mut out = Vec::new();
        for (l, c) in self.j.iter() {
            for _ in 0..*c {
                out.push(EnvIndex { j: Monomial::var(*l), m: N0 });
            }
        }
        for _ in 0..self.m.0 {
            out.push(EnvIndex::del((1, 0)));
        }
        for _ in 0..self.m.1 {
            out.push(EnvIndex::del((0, 1)));
        }
        out
    }

    /// The first `(γ, n)` letter of `J` and the rest, if `J ≠ 0`.
    fn peel(&self) -> Option<(GenLabel, u32, EnvIndex)> {
        let (l, c) = self.j.iter().next()?;
        let rest = EnvIndex { j: self.j.remove_var(l, 1).expect("present"), m: self.m };
        Some((l.label(), *c, rest))
    }

    /// Whether every `(γ, n)` in `J` is admissible in the mode, and `m = 0` outside the full modes.
    pub fn admissible(&self, mode: Mode, p: &Params) -> bool {
        let m_ok = matches!(mode, Mode::Full | Mode::Gpam) || self.m == N0;
        m_ok && self.j.letters().all(|l| {
            let (g, n) = l.label();
            in_lie_algebra(&g, n, mode, p)
        })
    }
}

/// Rational combination of basis words `D_(J,m)`.
pub type EnvElement = Combo<EnvIndex>;

/// Tensor of two envelope elements.
pub type EnvTensor = Combo<(EnvIndex, EnvIndex)>;

/// Errors of the envelope layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvelopeError {
    #[error("({0}, ({1},{2})) is not admissible in the Lie algebra")]
    Inadmissible(String, u32, u32),
}

/// Combinatorial insertion `z^γ U D^(n)` on a basis word: `(J(γ,n)+1) D_(J+e,m)`.
pub fn insert_raw(gamma: &MultiIndex, u: &EnvElement, n: NIdx) -> EnvElement {
    let label = (gamma.clone(), n);
    let mut out = EnvElement::zero();
    for (idx, c) in u.iter() {
        let mult = idx.count(&label) + 1;
        let next = idx.with_label(&label);
        out.add_term(next, c * q(mult as i64));
    }
    out
}

/// Insertion restricted to admissible `(γ, n)`.
pub fn insert(gamma: &MultiIndex, u: &EnvElement, n: NIdx, mode: Mode, p: &Params) -> Result<EnvElement, EnvelopeError> {
    if !in_lie_algebra(gamma, n, mode, p) {
        return Err(EnvelopeError::Inadmissible(format!("{gamma}"), n.0, n.1));
    }
    Ok(insert_raw(gamma, u, n))
}

/// The coproduct: every basis word splits with coefficient one.
pub fn cop(u: &EnvElement) -> EnvTensor {
    let mut out = EnvTensor::zero();
    for (idx, c) in u.iter() {
        for (a, b) in idx.splits() {
            out.add_term((a, b), c.clone());
        }
    }
    out
}

fn rho_cache() -> &'static Mutex<HashMap<(EnvIndex, MultiIndex), FormalSeries>> {
    static C: OnceLock<Mutex<HashMap<(EnvIndex, MultiIndex), FormalSeries>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `ρ D_(J,m)` applied to the monomial `z^δ`.
pub fn rho_word_monomial(idx: &EnvIndex, delta: &MultiIndex) -> FormalSeries {
    let key = (idx.clone(), delta.clone());
    if let Some(v) = rho_cache().lock().expect("cache").get(&key) {
        return v.clone();
    }
    let out = match idx.peel() {
        None => {
            let mut s = FormalSeries::basis(delta.clone());
            for _ in 0..idx.m.0 {
                s = apply_del(1, &s);
            }
            for _ in 0..idx.m.1 {
                s = apply_del(2, &s);
            }
            s.scale(&Q::new(1.into(), crate::combo::factorial(idx.m.0) * crate::combo::factorial(idx.m.1)))
        }
        Some(((gamma, n), c, rest)) => {
            let inner = apply_dn(n, &FormalSeries::basis(delta.clone()));
            let mut s = FormalSeries::zero();
            for (mono, coef) in inner.iter() {
                s.add_scaled(&rho_word_monomial(&rest, mono), coef);
            }
            s.map_keys(|b| b.mul(&gamma)).scale(&Q::new(1.into(), (c as i64).into()))
        }
    };
    rho_cache().lock().expect("cache").insert(key, out.clone());
    out
}

/// Applies the representation `ρ U` to a series.
pub fn rho_apply(u: &EnvElement, s: &FormalSeries) -> FormalSeries {
    let mut out = FormalSeries::zero();
    for (idx, c) in u.iter() {
        for (mono, d) in s.iter() {
            out.add_scaled(&rho_word_monomial(idx, mono), &(c * d));
        }
    }
    out
}

/// `(U)^γ_β`: the coefficient of `z^β` in `ρ(U) z^γ`.
pub fn envelope_entry(idx: &EnvIndex, gamma: &MultiIndex, beta: &MultiIndex) -> Q {
    rho_word_monomial(idx, gamma).coeff(beta)
}

/// `ι_n`: `ι_n D_(e_(β,n),0) = z^β`, zero on every other word.
pub fn iota(n: NIdx, u: &EnvElement) -> FormalSeries {
    let mut out = FormalSeries::zero();
    for (idx, c) in u.iter() {
        if idx.m == N0 && idx.j.degree() == 1 {
            let ((g, nn), _) = idx.labels().pop().expect("one letter");
            if nn == n {
                out.add_term(g, c.clone());
            }
        }
    }
    out
}

/// `ε_n`: the coefficient of `D_(0,n)`.
pub fn epsilon(n: NIdx, u: &EnvElement) -> Q {
    u.coeff(&EnvIndex::del(n))
}

fn del_cache() -> &'static Mutex<HashMap<(EnvIndex, u8), EnvElement>> {
    static C: OnceLock<Mutex<HashMap<(EnvIndex, u8), EnvElement>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Right multiplication of a basis word by `∂ᵢ`.
pub fn mul_del_word(idx: &EnvIndex, i: u8) -> EnvElement {
    let key = (idx.clone(), i);
    if let Some(v) = del_cache().lock().expect("cache").get(&key) {
        return v.clone();
    }
    let ei = if i == 1 { (1, 0) } else { (0, 1) };
    let out = match idx.peel() {
        None => {
            let m = (idx.m.0 + ei.0, idx.m.1 + ei.1);
            let c = if i == 1 { m.0 } else { m.1 };
            EnvElement::term(EnvIndex::del(m), q(c as i64))
        }
        Some(((gamma, n), c, rest)) => {
            let mut s = insert_raw(&gamma, &mul_del_word(&rest, i), n);
            let ni = if i == 1 { n.0 } else { n.1 };
            if ni > 0 {
                let lower = (n.0 - ei.0, n.1 - ei.1);
                s.add_scaled(&insert_raw(&gamma, &EnvElement::basis(rest.clone()), lower), &q(ni as i64));
            }
            s.scale(&Q::new(1.into(), (c as i64).into()))
        }
    };
    del_cache().lock().expect("cache").insert(key, out.clone());
    out
}

fn prod_cache() -> &'static Mutex<HashMap<(EnvIndex, EnvIndex), EnvElement>> {
    static C: OnceLock<Mutex<HashMap<(EnvIndex, EnvIndex), EnvElement>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Product `D_a · D_b` of two basis words, peeling the right factor.
pub fn product_words(a: &EnvIndex, b: &EnvIndex) -> EnvElement {
    let key = (a.clone(), b.clone());
    if let Some(v) = prod_cache().lock().expect("cache").get(&key) {
        return v.clone();
    }
    let out = match b.peel() {
        None => {
            let mut s = EnvElement::basis(a.clone());
            for _ in 0..b.m.0 {
                s = s.map_linear(|w| mul_del_word(w, 1));
            }
            for _ in 0..b.m.1 {
                s = s.map_linear(|w| mul_del_word(w, 2));
            }
            s.scale(&Q::new(1.into(), crate::combo::factorial(b.m.0) * crate::combo::factorial(b.m.1)))
        }
        Some(((gamma, n), c, rest)) => {
            let mut s = EnvElement::zero();
            for (a1, a2) in a.splits() {
                let entries = rho_word_monomial(&a1, &gamma);
                if entries.is_zero() {
                    continue;
                }
                let inner = product_words(&a2, &rest);
                for (beta, coef) in entries.iter() {
                    s.add_scaled(&insert_raw(beta, &inner, n), coef);
                }
            }
            s.scale(&Q::new(1.into(), (c as i64).into()))
        }
    };
    prod_cache().lock().expect("cache").insert(key, out.clone());
    out
}

/// Bilinear concatenation product.
pub fn envelope_product(u1: &EnvElement, u2: &EnvElement) -> EnvElement {
    let mut out = EnvElement::zero();
    for (a, c1) in u1.iter() {
        for (b, c2) in u2.iter() {
            out.add_scaled(&product_words(a, b), &(c1 * c2));
        }
    }
    out
}

/// Product of two tensors, leg by leg, in the envelope.
pub fn tensor_product(x: &EnvTensor, y: &EnvTensor) -> EnvTensor {
    let mut out = EnvTensor::zero();
    for ((a1, a2), c) in x.iter() {
        for ((b1, b2), d) in y.iter() {
            let left = product_words(a1, b1);
            let right = product_words(a2, b2);
            let cd = c * d;
            for (l, lc) in left.iter() {
                for (r, rc) in right.iter() {
                    out.add_term((l.clone(), r.clone()), &cd * lc * rc);
                }
            }
        }
    }
    out
}

/// Bigrade of a basis word: sum of generator bigrades plus `(0, |m|)`.
pub fn bigrade_word(idx: &EnvIndex, p: &Params) -> Bigrade {
    let mut b = (0i64, p.nabs(idx.m));
    for ((g, n), c) in idx.labels() {
        let (x, y) = bigrade(&Generator::zd(g, n), p);
        b.0 += x * c as i64;
        b.1 += y * c as i64;
    }
    b
}

/// Grade `Σ J(γ,n)(|γ| − |n|) + |m|`.
pub fn grade_word(idx: &EnvIndex, p: &Params) -> Homogeneity {
    let mut h = Homogeneity::new(0, p.nabs(idx.m));
    for ((g, n), c) in idx.labels() {
        let one = homogeneity(&g, p) - Homogeneity::new(0, p.nabs(n));
        h = h + Homogeneity::new(one.a_coeff * c as i64, one.int_part * c as i64);
    }
    h
}

/// Noncommutative word in generators, as an element of the free algebra.
pub type FreeWord = Vec<Generator>;

/// Rational combination of free words.
pub type FreeElement = Combo<FreeWord>;

/// Insertion `z^γ W D^(n)` defined on free words by the recursion
/// `z^γ (g W') D^(n) = g (z^γ W' D^(n)) − Σ_β g^γ_β z^β W' D^(n)` with base `z^γ D^(n)`.
pub fn insert_free(gamma: &MultiIndex, w: &FreeElement, n: NIdx) -> FreeElement {
    let mut out = FreeElement::zero();
    for (word, c) in w.iter() {
        out.add_scaled(&insert_free_word(gamma, word, n), c);
    }
    out
}

fn insert_free_word(gamma: &MultiIndex, word: &[Generator], n: NIdx) -> FreeElement {
    if word.is_empty() {
        return FreeElement::basis(vec![Generator::zd(gamma.clone(), n)]);
    }
    let g = &word[0];
    let rest = &word[1..];
    let mut out = insert_free_word(gamma, rest, n).map_keys(|w| {
        let mut v = vec![g.clone()];
        v.extend(w.iter().cloned());
        v
    });
    for (beta, c) in apply_monomial(g, gamma).iter() {
        out.add_scaled(&insert_free_word(beta, rest, n), &(-c));
    }
    out
}

/// Expresses a basis word in the free algebra by unfolding its definition.
pub fn basis_to_free(idx: &EnvIndex) -> FreeElement {
    match idx.peel() {
        None => {
            let mut w = Vec::new();
            w.extend(std::iter::repeat_n(Generator::Del(1), idx.m.0 as usize));
            w.extend(std::iter::repeat_n(Generator::Del(2), idx.m.1 as usize));
            FreeElement::term(w, Q::new(1.into(), crate::combo::factorial(idx.m.0) * crate::combo::factorial(idx.m.1)))
        }
        Some(((gamma, n), c, rest)) => insert_free(&gamma, &basis_to_free(&rest), n).scale(&Q::new(1.into(), (c as i64).into())),
    }
}

/// Evaluates a free element in the envelope through the concatenation product.
pub fn free_to_envelope(w: &FreeElement) -> EnvElement {
    let mut out = EnvElement::zero();
    for (word, c) in w.iter() {
        let mut acc = EnvElement::basis(EnvIndex::one());
        for g in word.iter() {
            acc = envelope_product(&acc, &EnvElement::basis(EnvIndex::of_generator(g)));
        }
        out.add_scaled(&acc, c);
    }
    out
}

/// Applies a free element to a series, generator by generator from the right.
pub fn free_apply(w: &FreeElement, s: &FormalSeries) -> FormalSeries {
    let mut out = FormalSeries::zero();
    for (word, c) in w.iter() {
        let mut cur = s.clone();
        for g in word.iter().rev() {
            cur = cur.map_linear(|m| apply_monomial(g, m));
        }
        out.add_scaled(&cur, c);
    }
    out
}

/// Left side of the extended chain rule: `(1/m!) ∂^m (l! z_l)`.
pub fn faa_di_bruno_lhs(l: u32, m: NIdx) -> FormalSeries {
    let idx = EnvIndex::del(m);
    rho_word_monomial(&idx, &crate::index::ek(l)).scale(&qb(crate::combo::factorial(l)))
}

/// Right side of the extended chain rule:
/// `Σ_k (1/k!) (l+k)! z_{k+l} Σ_{m₁+⋯+m_k=m, mᵢ≠0} z_{m₁}⋯z_{m_k}`.
pub fn faa_di_bruno_rhs(l: u32, m: NIdx) -> FormalSeries {
    fn compositions(m: NIdx, k: u32) -> Vec<Vec<NIdx>> {
        if k == 0 {
            return if m == N0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        for a in 0..=m.0 {
            for b in 0..=m.1 {
                if (a, b) == N0 {
                    continue;
                }
                for mut rest in compositions((m.0 - a, m.1 - b), k - 1) {
                    rest.insert(0, (a, b));
                    out.push(rest);
                }
            }
        }
        out
    }
    let mut out = FormalSeries::zero();
    for k in 0..=(m.0 + m.1) {
        let coef = Q::new(crate::combo::factorial(l + k), crate::combo::factorial(k));
        for parts in compositions(m, k) {
            let mono = parts
                .iter()
                .fold(crate::index::ek(k + l), |acc, n| acc.add_var(&crate::index::Letter::N(n.0, n.1), 1));
            out.add_term(mono, coef.clone());
        }
    }
    out
}

/// Checks the bookkeeping `|β| = |γ| + |(J,m)|_gr` and the bigrade balance on
/// every nonzero entry of `ρ D_(J,m) z^γ`.
pub fn grading_defects(idx: &EnvIndex, gamma: &MultiIndex, p: &Params) -> Vec<MultiIndex> {
    let gr = grade_word(idx, p);
    let bi = bigrade_word(idx, p);
    rho_word_monomial(idx, gamma)
        .keys()
        .filter(|beta| {
            let hom_ok = homogeneity(beta, p) == homogeneity(gamma, p) + gr;
            let bi_ok = noise_homogeneity(beta) == noise_homogeneity(gamma) + bi.0
                && poly_weight(beta, p) == poly_weight(gamma, p) + bi.1;
            !(hom_ok && bi_ok)
        })
        .cloned()
        .collect()
}

/// Whether `D_(J,m)` is the unit word.
pub fn is_unit(u: &EnvElement) -> bool {
    u.len() == 1 && u.coeff(&EnvIndex::one()) == Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combo::qr;
    use crate::index::{ek, en, monomial};

    fn b(idx: EnvIndex) -> EnvElement {
        EnvElement::basis(idx)
    }

    fn g0() -> EnvIndex {
        EnvIndex::gen(MultiIndex::one(), N0)
    }

    #[test]
    fn insert_examples() {
        let p = Params::default();
        let one = b(EnvIndex::one());
        assert_eq!(insert(&ek(0), &one, N0, Mode::Full, &p).unwrap(), b(EnvIndex::gen(ek(0), N0)));
        let twice = insert(&ek(0), &b(EnvIndex::gen(ek(0), N0)), N0, Mode::Full, &p).unwrap();
        let j2 = EnvIndex::new([((ek(0), N0), 2)], N0);
        assert_eq!(twice, EnvElement::term(j2, q(2)));
        assert!(insert(&ek(0), &one, (1, 0), Mode::Full, &p).is_err());
    }

    #[test]
    fn cop_examples() {
        let one = b(EnvIndex::one());
        assert_eq!(cop(&one), EnvTensor::basis((EnvIndex::one(), EnvIndex::one())));
        let d = EnvIndex::gen(ek(0), N0);
        let c = cop(&b(d.clone()));
        assert_eq!(c.len(), 2);
        assert_eq!(c.coeff(&(d.clone(), EnvIndex::one())), q(1));
        assert_eq!(c.coeff(&(EnvIndex::one(), d)), q(1));
        assert_eq!(cop(&b(EnvIndex::del((1, 1)))).len(), 4);
    }

    #[test]
    fn rho_examples() {
        let z0 = monomial(&ek(0));
        assert_eq!(rho_apply(&b(EnvIndex::one()), &z0), z0);
        assert_eq!(rho_apply(&b(EnvIndex::gen(ek(0), N0)), &z0), monomial(&ek(0).mul(&ek(1))));
        assert_eq!(rho_apply(&b(EnvIndex::del((1, 0))), &monomial(&en(0, 1))), monomial(&en(1, 1)));
    }

    #[test]
    fn iota_epsilon_examples() {
        let d = b(EnvIndex::gen(ek(0), N0));
        assert_eq!(iota(N0, &d), monomial(&ek(0)));
        assert!(iota(N0, &b(EnvIndex::one())).is_zero());
        assert!(iota((1, 0), &b(EnvIndex::del((1, 0)))).is_zero());
        assert_eq!(epsilon(N0, &b(EnvIndex::one())), q(1));
        assert_eq!(epsilon((1, 0), &b(EnvIndex::del((1, 0)))), q(1));
        assert_eq!(epsilon(N0, &d), q(0));
    }

    #[test]
    fn product_examples() {
        let d = b(g0());
        let j2 = EnvIndex::new([((MultiIndex::one(), N0), 2)], N0);
        assert_eq!(envelope_product(&d, &d), EnvElement::term(j2, q(2)));
        let del1 = b(EnvIndex::del((1, 0)));
        assert_eq!(envelope_product(&del1, &del1), EnvElement::term(EnvIndex::del((2, 0)), q(2)));
        let e0 = EnvIndex::gen(ek(0), N0);
        let expected = &b(EnvIndex::new([((MultiIndex::one(), N0), 1), ((ek(0), N0), 1)], N0))
            + &b(EnvIndex::gen(ek(1), N0));
        assert_eq!(envelope_product(&d, &b(e0)), expected);
    }

    #[test]
    fn grade_examples() {
        let p = Params::default();
        assert_eq!(bigrade_word(&EnvIndex::del((1, 0)), &p), (0, 1));
        assert_eq!(grade_word(&EnvIndex::del((1, 0)), &p), Homogeneity::new(0, 1));
        assert_eq!(bigrade_word(&EnvIndex::gen(ek(0), N0), &p), (1, 0));
        assert_eq!(grade_word(&EnvIndex::gen(ek(0), N0), &p), Homogeneity::new(1, 0));
        let g = EnvIndex::gen(ek(1).mul(&en(1, 0)), (1, 0));
        assert_eq!(bigrade_word(&g, &p), (1, 0));
        assert_eq!(p.value(&grade_word(&g, &p)), qr(1, 4));
    }

    #[test]
    fn basis_unfolds_consistently() {
        let words = [
            EnvIndex::gen(ek(0), N0).add(&EnvIndex::del((1, 0))),
            EnvIndex::gen(MultiIndex::one(), N0).add(&EnvIndex::gen(ek(0), N0)),
            EnvIndex::gen(ek(1).mul(&en(1, 0)), (1, 0)).add(&EnvIndex::gen(MultiIndex::one(), N0)),
        ];
        let s = &monomial(&ek(0).mul(&en(1, 0))) + &monomial(&ek(1).mul(&en(0, 1)).mul(&en(2, 0)));
        for w in words.iter() {
            let free = basis_to_free(w);
            assert_eq!(free_to_envelope(&free), b(w.clone()));
            assert_eq!(free_apply(&free, &s), rho_apply(&b(w.clone()), &s));
        }
    }

    #[test]
    fn faa_di_bruno_small() {
        for l in 0..=2 {
            for m in [(1, 0), (0, 1), (2, 0), (1, 1), (3, 0)] {
                assert_eq!(faa_di_bruno_lhs(l, m), faa_di_bruno_rhs(l, m), "l={l} m={m:?}");
            }
        }
    }
}
