//! Characters of `T⁺`, their convolution, the structure group `Γ_f` acting
//! on `T`, the dual action `Γ_f*` on formal series, the exponential formula
//! and evaluation of series on concrete pairs `(a, p)`.
//!
//! A character is stored through its generating data: the shift `h ∈ ℚ²` and
//! a finitely supported tilt `(γ, n) ↦ π_γ^(n)`. Its value on a basis monomial
//! `Z^(J,m)` is `h^m Π (π_γ^(n))^J(γ,n)`.
//!
//! The dual action is infinite in general. Every routine producing a series
//! takes a [`Truncation`]; the homogeneity cutoff is compatible with
//! composition because `Γ_f* − id` strictly raises homogeneity, while the
//! letter bounds give exact values when the result is evaluated on a pair
//! `(a, p)` whose degrees respect them.

use crate::combo::{binom, q, Combo, Q};
use crate::envelope::{EnvIndex, GenLabel};
use crate::hopf::{antipode_index, delta_plus, delta_shared, HopfError};
use crate::index::{full_letters, hom_value, is_model_index, FormalSeries, Letter, MultiIndex, Mode, NIdx, Params, N0};
use crate::lie::in_lie_algebra;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("tilt entry ({gamma}, {n:?}) is not an admissible Lie-algebra label")]
    InadmissibleTilt { gamma: MultiIndex, n: NIdx },
    #[error("truncation needs a homogeneity cutoff or both letter bounds")]
    UnboundedTruncation,
    #[error(transparent)]
    Hopf(#[from] HopfError),
}

/// A character `f ∈ Alg(T⁺, ℚ)` given by its shift and tilt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    h: (Q, Q),
    tilt: BTreeMap<GenLabel, Q>,
}

#[derive(Serialize, Deserialize)]
struct CharacterJson {
    h: (Q, Q),
    tilt: Vec<(MultiIndex, NIdx, Q)>,
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CharacterJson { h: self.h.clone(), tilt: self.tilt.iter().map(|((g, n), c)| (g.clone(), *n, c.clone())).collect() }
            .serialize(s)
    }
}

impl Character {
    /// Validated constructor; zero tilt entries are dropped and repeated
    /// labels are summed.
    pub fn new<I: IntoIterator<Item = (GenLabel, Q)>>(h: (Q, Q), tilt: I, p: &Params) -> Result<Character, GroupError> {
        let mut map: BTreeMap<GenLabel, Q> = BTreeMap::new();
        for ((gamma, n), c) in tilt {
            if !in_lie_algebra(&gamma, n, Mode::Full, p) {
                return Err(GroupError::InadmissibleTilt { gamma, n });
            }
            *map.entry((gamma, n)).or_default() += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Character { h, tilt: map })
    }

    /// The counit `e`, neutral for convolution.
    pub fn counit() -> Character {
        Character { h: (Q::zero(), Q::zero()), tilt: BTreeMap::new() }
    }

    /// The pure shift with the given `h` and no tilt.
    pub fn shift(h: (Q, Q)) -> Character {
        Character { h, tilt: BTreeMap::new() }
    }

    /// Parses the JSON form `{"h":[q,q],"tilt":[[γ,n,q],…]}` and validates it.
    pub fn from_json(s: &str, p: &Params) -> Result<Character, serde_json::Error> {
        let raw: CharacterJson = serde_json::from_str(s)?;
        Character::new(raw.h, raw.tilt.into_iter().map(|(g, n, c)| ((g, n), c)), p)
            .map_err(|e| <serde_json::Error as serde::de::Error>::custom(e.to_string()))
    }

    pub fn h(&self) -> &(Q, Q) {
        &self.h
    }

    /// Tilt entries `((γ, n), π_γ^(n))` in canonical order.
    pub fn tilt(&self) -> &BTreeMap<GenLabel, Q> {
        &self.tilt
    }

    /// `π_γ^(n)`, zero off the support.
    pub fn tilt_value(&self, label: &GenLabel) -> Q {
        self.tilt.get(label).cloned().unwrap_or_else(Q::zero)
    }

    /// `f^(J,m) = h^m Π (π_γ^(n))^J(γ,n)`.
    pub fn eval(&self, idx: &EnvIndex) -> Q {
        let mut v = num_traits::pow(self.h.0.clone(), idx.m.0 as usize) * num_traits::pow(self.h.1.clone(), idx.m.1 as usize);
        for (label, c) in idx.labels() {
            if v.is_zero() {
                break;
            }
            v *= num_traits::pow(self.tilt_value(&label), c as usize);
        }
        v
    }

    /// Linear extension of [`Character::eval`].
    pub fn eval_element(&self, x: &Combo<EnvIndex>) -> Q {
        x.iter().map(|(idx, c)| c * self.eval(idx)).sum()
    }

    /// `f ∘ S` restricted to the given labels; the shift is negated exactly.
    pub fn inverse_on(&self, labels: &[GenLabel], p: &Params) -> Character {
        let tilt = labels.iter().map(|l| {
            let idx = EnvIndex::gen(l.0.clone(), l.1);
            (l.clone(), self.eval_element(&antipode_index(&idx, Mode::Full, p)))
        });
        let mut out = Character { h: (-&self.h.0, -&self.h.1), tilt: BTreeMap::new() };
        for (l, c) in tilt {
            if !c.is_zero() {
                out.tilt.insert(l, c);
            }
        }
        out
    }

    /// `f ∘ S` on every admissible label within the given bounds.
    pub fn inverse(&self, max_hom: &Q, max_len: u32, p: &Params) -> Character {
        self.inverse_on(&labels_below(max_hom, max_len, p), p)
    }
}

/// `(f ⊗ g) Δ⁺ X`.
pub fn convolve_eval(f: &Character, g: &Character, idx: &EnvIndex, p: &Params) -> Q {
    delta_plus(idx, Mode::Full, p).iter().map(|((a, b), c)| c * f.eval(a) * g.eval(b)).sum()
}

/// The convolution `fg = (f ⊗ g)Δ⁺`, read off on the given labels.
///
/// The tilt of `fg` is not finitely supported in general, so the result is
/// exact on the listed labels and zero elsewhere. The shift is `h_f + h_g`.
pub fn convolve_on(f: &Character, g: &Character, labels: &[GenLabel], p: &Params) -> Character {
    let mut out = Character { h: (&f.h.0 + &g.h.0, &f.h.1 + &g.h.1), tilt: BTreeMap::new() };
    for l in labels {
        let c = convolve_eval(f, g, &EnvIndex::gen(l.0.clone(), l.1), p);
        if !c.is_zero() {
            out.tilt.insert(l.clone(), c);
        }
    }
    out
}

/// The convolution read off on every admissible label within the given bounds.
pub fn convolve(f: &Character, g: &Character, max_hom: &Q, max_len: u32, p: &Params) -> Character {
    convolve_on(f, g, &labels_below(max_hom, max_len, p), p)
}

/// All admissible labels `(γ, n)` with `|γ| ≤ max_hom` and `γ` of length at
/// most `max_len`. Both bounds are needed: `|j e₀| = α` for every `j`.
pub fn labels_below(max_hom: &Q, max_len: u32, p: &Params) -> Vec<GenLabel> {
    let kmax = (max_hom / &p.alpha).to_f64().floor().max(0.0) as u32;
    let nmax = max_hom.to_f64().floor().max(0.0) as i64;
    let letters = full_letters(kmax, nmax, p);
    let gammas = crate::index::enumerate_indices(&letters, max_len, |g| is_model_index(g) && &hom_value(g, p) <= max_hom);
    let mut out = Vec::new();
    for g in gammas {
        let hg = hom_value(&g, p);
        let bound = hg.to_f64().ceil() as u32;
        for n1 in 0..=bound {
            for n2 in 0..=bound {
                if in_lie_algebra(&g, (n1, n2), Mode::Full, p) && q(p.nabs((n1, n2))) < hg {
                    out.push((g.clone(), (n1, n2)));
                }
            }
        }
    }
    out.sort();
    out
}

/// Labels occurring in the left legs of `Δ𝗓_β`.
pub fn labels_in_delta(beta: &MultiIndex, p: &Params) -> Result<Vec<GenLabel>, GroupError> {
    let d = delta_shared(beta, Mode::Full, p)?;
    let mut set = BTreeSet::new();
    for ((l, _), _) in d.iter() {
        for (label, _) in l.labels() {
            set.insert(label);
        }
    }
    Ok(set.into_iter().collect())
}

/// Labels needed to apply `Γ_g Γ_f` to `𝗓_β`: those of `Δ𝗓_γ` for every
/// right leg `γ` of `Δ𝗓_β`, which includes `β` itself.
pub fn labels_for_composition(beta: &MultiIndex, p: &Params) -> Result<Vec<GenLabel>, GroupError> {
    let d = delta_shared(beta, Mode::Full, p)?;
    let mut gammas = BTreeSet::new();
    for ((_, g), _) in d.iter() {
        gammas.insert(g.clone());
    }
    let mut set = BTreeSet::new();
    for g in gammas {
        set.extend(labels_in_delta(&g, p)?);
    }
    Ok(set.into_iter().collect())
}

/// `Γ_f 𝗓_β = (f ⊗ id)Δ𝗓_β`.
pub fn gamma(f: &Character, beta: &MultiIndex, p: &Params) -> Result<FormalSeries, GroupError> {
    let d = delta_shared(beta, Mode::Full, p)?;
    let mut out = FormalSeries::zero();
    for ((l, g), c) in d.iter() {
        let v = f.eval(l);
        if !v.is_zero() {
            out.add_term(g.clone(), c * v);
        }
    }
    Ok(out)
}

/// Linear extension of [`gamma`] to series supported on model indices.
pub fn gamma_series(f: &Character, s: &FormalSeries, p: &Params) -> Result<FormalSeries, GroupError> {
    let mut out = FormalSeries::zero();
    for (b, c) in s.iter() {
        out.add_scaled(&gamma(f, b, p)?, c);
    }
    Ok(out)
}

/// Truncation applied to the outputs of the dual action.
///
/// `max_hom` keeps monomials of homogeneity at most the cutoff, `max_len`
/// those of bounded length; `max_k` drops monomials containing `𝗓_k` with
/// `k > max_k` and `max_deg` those containing `𝗓_n` with `n₁ + n₂ > max_deg`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub max_hom: Option<Q>,
    pub max_len: Option<u32>,
    pub max_k: Option<u32>,
    pub max_deg: Option<u32>,
}

impl Truncation {
    /// Homogeneity cutoff only.
    pub fn hom(h: Q) -> Truncation {
        Truncation { max_hom: Some(h), ..Default::default() }
    }

    /// Letter bounds matching `deg a ≤ max_k` and `deg p ≤ max_deg`.
    pub fn letters(max_k: u32, max_deg: u32) -> Truncation {
        Truncation { max_k: Some(max_k), max_deg: Some(max_deg), ..Default::default() }
    }

    /// The cutoffs recorded in the parameters.
    pub fn from_params(p: &Params) -> Truncation {
        Truncation { max_hom: p.cutoff_hom.clone(), max_len: p.cutoff_len, ..Default::default() }
    }

    fn check(&self) -> Result<(), GroupError> {
        if self.max_hom.is_some() || (self.max_k.is_some() && self.max_deg.is_some()) {
            Ok(())
        } else {
            Err(GroupError::UnboundedTruncation)
        }
    }

    fn letter_ok(&self, l: &Letter) -> bool {
        match l {
            Letter::K(k) => self.max_k.map_or(true, |b| *k <= b),
            Letter::N(a, b) => self.max_deg.map_or(true, |d| a + b <= d),
            Letter::Z(..) => true,
        }
    }

    fn letters_ok(&self, m: &MultiIndex) -> bool {
        m.letters().all(|l| self.letter_ok(l))
    }

    /// Whether an output monomial survives every bound.
    pub fn keeps(&self, m: &MultiIndex, p: &Params) -> bool {
        self.letters_ok(m)
            && self.max_len.map_or(true, |b| m.degree() <= b)
            && self.max_hom.as_ref().map_or(true, |h| &hom_value(m, p) <= h)
    }

    /// Applies the bounds to a series.
    pub fn apply(&self, s: &FormalSeries, p: &Params) -> FormalSeries {
        s.filter(|m| self.keeps(m, p))
    }
}

/// Terms tagged with their homogeneity excess over a reference.
type Tagged = Vec<(MultiIndex, Q, Q)>;

/// Product of tagged series, dropping terms whose total excess exceeds the
/// budget or whose letters violate the bounds.
fn tagged_mul(a: &Tagged, b: &Tagged, budget: Option<&Q>, tr: &Truncation) -> Tagged {
    let mut acc: HashMap<MultiIndex, (Q, Q)> = HashMap::new();
    for (ma, ca, ea) in a {
        for (mb, cb, eb) in b {
            let e = ea + eb;
            if budget.is_some_and(|bd| &e > bd) {
                continue;
            }
            let m = ma.mul(mb);
            if !tr.letters_ok(&m) {
                continue;
            }
            let entry = acc.entry(m).or_insert_with(|| (Q::zero(), e));
            entry.0 += ca * cb;
        }
    }
    let mut out: Tagged = acc.into_iter().filter(|(_, (c, _))| !c.is_zero()).map(|(m, (c, e))| (m, c, e)).collect();
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

fn tagged_one() -> Tagged {
    vec![(MultiIndex::one(), Q::one(), Q::zero())]
}

/// Source of the coordinate series `π^(n)` driving the dual action.
pub trait Tilt {
    /// `π^(n)` restricted to terms `𝗓^γ` with `|γ| − |n| ≤ excess` (when
    /// given) and to the letter bounds of `tr`.
    fn pi(&self, n: NIdx, excess: Option<&Q>, tr: &Truncation, p: &Params) -> FormalSeries;
}

impl Tilt for Character {
    fn pi(&self, n: NIdx, excess: Option<&Q>, tr: &Truncation, p: &Params) -> FormalSeries {
        let nabs = q(p.nabs(n));
        let within = |g: &MultiIndex| -> bool {
            tr.letters_ok(g) && excess.map_or(true, |e| hom_value(g, p) - &nabs <= *e)
        };
        let mut out = FormalSeries::zero();
        for ((g, nn), c) in &self.tilt {
            if *nn == n && within(g) {
                out.add_term(g.clone(), c.clone());
            }
        }
        if self.h.0.is_zero() && self.h.1.is_zero() {
            return out;
        }
        // Σ_{m > n} binom(m, n) h^(m−n) 𝗓_m, bounded by the excess or the degree bound.
        let deg_bound = match (excess, tr.max_deg) {
            (_, Some(d)) => d,
            (Some(e), None) => {
                let w = p.weights.0.min(p.weights.1) as i64;
                ((&nabs + e).to_f64().floor() as i64 / w).max(0) as u32
            }
            (None, None) => return out,
        };
        for m1 in n.0..=deg_bound {
            for m2 in n.1..=deg_bound.saturating_sub(m1) {
                let m = (m1, m2);
                if m == n || m == N0 {
                    continue;
                }
                let g = MultiIndex::var(Letter::n(m));
                if !within(&g) {
                    continue;
                }
                let c = Q::from_integer(binom(m1, n.0) * binom(m2, n.1))
                    * num_traits::pow(self.h.0.clone(), (m1 - n.0) as usize)
                    * num_traits::pow(self.h.1.clone(), (m2 - n.1) as usize);
                if !c.is_zero() {
                    out.add_term(g, c);
                }
            }
        }
        out
    }
}

/// The tilt `π̄^(n) = π^(n) + Γ*π′^(n)` of the composition rule.
pub struct ComposedTilt<'a> {
    pub outer: &'a dyn Tilt,
    pub inner: &'a dyn Tilt,
}

impl Tilt for ComposedTilt<'_> {
    fn pi(&self, n: NIdx, excess: Option<&Q>, tr: &Truncation, p: &Params) -> FormalSeries {
        let mut out = self.outer.pi(n, excess, tr, p);
        let inner = self.inner.pi(n, excess, &Truncation::default(), p);
        let sub = Truncation {
            max_hom: excess.map(|e| q(p.nabs(n)) + e),
            max_len: None,
            max_k: tr.max_k,
            max_deg: tr.max_deg,
        };
        out += &gamma_star_with(self.outer, &inner, &sub, p).expect("bounded truncation");
        out
    }
}

fn tag(s: &FormalSeries, reference: &Q, p: &Params) -> Tagged {
    s.iter().map(|(m, c)| (m.clone(), c.clone(), hom_value(m, p) - reference)).collect()
}

/// `Γ*` of one letter, with excess measured against the letter.
fn letter_image(t: &dyn Tilt, l: &Letter, budget: Option<&Q>, tr: &Truncation, p: &Params) -> Tagged {
    match l {
        Letter::K(k) => {
            // Σ_l binom(k+l, k) (π^(0))^l 𝗓_{k+l}
            let pi0 = tag(&t.pi(N0, budget, tr, p), &Q::zero(), p);
            let mut out = Tagged::new();
            let mut power = tagged_one();
            let mut l = 0u32;
            while !power.is_empty() {
                let kl = k + l;
                if tr.max_k.is_some_and(|b| kl > b) {
                    break;
                }
                let c = Q::from_integer(binom(kl, *k));
                let z = MultiIndex::var(Letter::K(kl));
                for (m, cm, e) in &power {
                    out.push((m.mul(&z), cm * &c, e.clone()));
                }
                if pi0.is_empty() {
                    break;
                }
                power = tagged_mul(&power, &pi0, budget, tr);
                l += 1;
            }
            out
        }
        Letter::N(a, b) => {
            let n = (*a, *b);
            let mut out = vec![(MultiIndex::var(*l), Q::one(), Q::zero())];
            out.extend(tag(&t.pi(n, budget, tr, p), &q(p.nabs(n)), p));
            out
        }
        Letter::Z(..) => vec![(MultiIndex::var(*l), Q::one(), Q::zero())],
    }
}

/// The dual action of a general tilt, extended multiplicatively from the
/// coordinate actions and truncated by `tr`.
pub fn gamma_star_with(t: &dyn Tilt, s: &FormalSeries, tr: &Truncation, p: &Params) -> Result<FormalSeries, GroupError> {
    tr.check()?;
    let mut letter_cache: HashMap<(Letter, Option<Q>), Tagged> = HashMap::new();
    let mut out = FormalSeries::zero();
    for (mono, c) in s.iter() {
        let budget = tr.max_hom.as_ref().map(|h| h - hom_value(mono, p));
        if budget.as_ref().is_some_and(|b| b < &Q::zero()) {
            continue;
        }
        let mut acc = tagged_one();
        for (l, mult) in mono.iter() {
            let img = letter_cache
                .entry((*l, budget.clone()))
                .or_insert_with(|| letter_image(t, l, budget.as_ref(), tr, p))
                .clone();
            for _ in 0..*mult {
                acc = tagged_mul(&acc, &img, budget.as_ref(), tr);
            }
        }
        for (m, cm, _) in acc {
            if tr.keeps(&m, p) {
                out.add_term(m, c * &cm);
            }
        }
    }
    Ok(out)
}

/// `Γ_f* s` truncated by `tr`.
pub fn gamma_star(f: &Character, s: &FormalSeries, tr: &Truncation, p: &Params) -> Result<FormalSeries, GroupError> {
    gamma_star_with(f, s, tr, p)
}

/// `D^(n)` on series: the shift derivation for `n = 0`, `∂/∂𝗓_n` otherwise.
fn apply_d(n: NIdx, s: &FormalSeries) -> FormalSeries {
    crate::lie::apply_dn(n, s)
}

/// The exponential formula `Σ_k (1/k!) Σ π^(n₁)⋯π^(n_k) D^(n_k)⋯D^(n₁) s`,
/// truncated identically to [`gamma_star_with`].
///
/// The operators `D^(n)` commute, so the inner sum is grouped by multisets
/// `N` of derivative indices with weight `1/N!`.
pub fn exp_formula_with(t: &dyn Tilt, s: &FormalSeries, tr: &Truncation, p: &Params) -> Result<FormalSeries, GroupError> {
    tr.check()?;
    let mut out = FormalSeries::zero();
    for (mono, c) in s.iter() {
        let budget = tr.max_hom.as_ref().map(|h| h - hom_value(mono, p));
        if budget.as_ref().is_some_and(|b| b < &Q::zero()) {
            continue;
        }
        let mut ns: Vec<NIdx> = vec![N0];
        for l in mono.letters() {
            if let Letter::N(a, b) = l {
                ns.push((*a, *b));
            }
        }
        let pis: Vec<Tagged> = ns.iter().map(|n| tag(&t.pi(*n, budget.as_ref(), tr, p), &q(p.nabs(*n)), p)).collect();
        let start = FormalSeries::basis(mono.clone());
        let mut stack: Vec<(usize, FormalSeries, Tagged, Q)> = vec![(0, start, tagged_one(), Q::one())];
        while let Some((i, ds, prod, weight)) = stack.pop() {
            if i == ns.len() {
                for (pm, pc, _) in &prod {
                    for (dm, dc) in ds.iter() {
                        let m = pm.mul(dm);
                        if tr.keeps(&m, p) {
                            out.add_term(m, c * &weight * pc * dc);
                        }
                    }
                }
                continue;
            }
            let n = ns[i];
            let (mut ds_j, mut prod_j, mut w_j) = (ds, prod, weight);
            let mut j = 0u32;
            loop {
                stack.push((i + 1, ds_j.clone(), prod_j.clone(), w_j.clone()));
                j += 1;
                ds_j = apply_d(n, &ds_j);
                if n == N0 {
                    if let Some(b) = tr.max_k {
                        ds_j = ds_j.filter(|m| m.letters().all(|l| !matches!(l, Letter::K(k) if *k > b)));
                    }
                }
                prod_j = tagged_mul(&prod_j, &pis[i], budget.as_ref(), tr);
                if ds_j.is_zero() || prod_j.is_empty() {
                    break;
                }
                w_j = w_j / q(j as i64);
            }
        }
    }
    Ok(out)
}

/// [`exp_formula_with`] for a character.
pub fn exp_formula(f: &Character, s: &FormalSeries, tr: &Truncation, p: &Params) -> Result<FormalSeries, GroupError> {
    exp_formula_with(f, s, tr, p)
}

/// A pair `(a, p)`: `a` a univariate polynomial by coefficients, `p` a
/// bivariate polynomial without constant term.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApPair {
    pub a: Vec<Q>,
    pub p: BTreeMap<NIdx, Q>,
}

impl ApPair {
    /// Validated constructor; drops zero coefficients and rejects a constant term in `p`.
    pub fn new(a: Vec<Q>, p: BTreeMap<NIdx, Q>) -> Option<ApPair> {
        if p.get(&N0).is_some_and(|c| !c.is_zero()) {
            return None;
        }
        let p = p.into_iter().filter(|(n, c)| *n != N0 && !c.is_zero()).collect();
        let mut a = a;
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        Some(ApPair { a, p })
    }

    /// `deg a`, zero for the zero polynomial.
    pub fn deg_a(&self) -> u32 {
        self.a.len().saturating_sub(1) as u32
    }

    /// Total degree of `p`.
    pub fn deg_p(&self) -> u32 {
        self.p.keys().map(|n| n.0 + n.1).max().unwrap_or(0)
    }

    /// The letter bounds under which evaluation at this pair is exact.
    pub fn truncation(&self) -> Truncation {
        Truncation::letters(self.deg_a(), self.deg_p())
    }

    /// Coordinate value: `𝗓_k[a] = a^(k)(0)/k!`, `𝗓_n[p]` the coefficient of `x^n`.
    pub fn coordinate(&self, l: &Letter) -> Q {
        match l {
            Letter::K(k) => self.a.get(*k as usize).cloned().unwrap_or_else(Q::zero),
            Letter::N(a, b) => self.p.get(&(*a, *b)).cloned().unwrap_or_else(Q::zero),
            Letter::Z(..) => Q::zero(),
        }
    }

    /// `a(· + c)`.
    pub fn shift_a(&self, c: &Q) -> Vec<Q> {
        let d = self.a.len();
        let mut out = vec![Q::zero(); d];
        for (j, aj) in self.a.iter().enumerate() {
            let mut pw = Q::one();
            for i in (0..=j).rev() {
                out[i] += aj * Q::from_integer(binom(j as u32, i as u32)) * &pw;
                pw = pw * c;
            }
        }
        out
    }

    /// `p(x + h)` evaluated coefficientwise, including its constant term.
    fn shifted_p(&self, h: &(Q, Q)) -> BTreeMap<NIdx, Q> {
        let mut out: BTreeMap<NIdx, Q> = BTreeMap::new();
        for (m, c) in &self.p {
            for i in 0..=m.0 {
                for j in 0..=m.1 {
                    let coef = c
                        * Q::from_integer(binom(m.0, i) * binom(m.1, j))
                        * num_traits::pow(h.0.clone(), (m.0 - i) as usize)
                        * num_traits::pow(h.1.clone(), (m.1 - j) as usize);
                    *out.entry((i, j)).or_default() += coef;
                }
            }
        }
        out
    }

    /// `p(h)`.
    pub fn p_at(&self, h: &(Q, Q)) -> Q {
        self.p.iter().map(|(m, c)| c * num_traits::pow(h.0.clone(), m.0 as usize) * num_traits::pow(h.1.clone(), m.1 as usize)).sum()
    }

    /// The pure-shift image `(a(· + p(h)), p(· + h) − p(h))`.
    pub fn shift_action(&self, h: &(Q, Q)) -> ApPair {
        let a = self.shift_a(&self.p_at(h));
        let mut pp = self.shifted_p(h);
        pp.remove(&N0);
        ApPair::new(a, pp).expect("no constant term")
    }
}

/// Evaluates a polynomial in the coordinates at `(a, p)`.
pub fn eval_on_ap(s: &FormalSeries, ap: &ApPair) -> Q {
    s.evaluate(|l| ap.coordinate(l))
}

/// The image pair `(a(· + π^(0)[a,p]), p + Σ_{n≠0} π^(n)[a,p] xⁿ)` of the
/// action identity, with `n` ranging over the given polynomial letters.
pub fn act_image(t: &dyn Tilt, ap: &ApPair, ns: &[NIdx], p: &Params) -> ApPair {
    let tr = ap.truncation();
    let shift = eval_on_ap(&t.pi(N0, None, &tr, p), ap);
    let a = ap.shift_a(&shift);
    let mut pp = ap.p.clone();
    for n in ns {
        if *n == N0 {
            continue;
        }
        let v = eval_on_ap(&t.pi(*n, None, &tr, p), ap);
        *pp.entry(*n).or_default() += v;
    }
    ApPair::new(a, pp).expect("no constant term")
}

/// Polynomial letters `n` occurring in a series.
pub fn poly_letters(s: &FormalSeries) -> Vec<NIdx> {
    let mut set = BTreeSet::new();
    for m in s.keys() {
        for l in m.letters() {
            if let Letter::N(a, b) = l {
                set.insert((*a, *b));
            }
        }
    }
    set.into_iter().collect()
}
