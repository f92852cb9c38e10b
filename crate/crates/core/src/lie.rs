//! The derivations `D^(0)`, `D^(n)`, `∂₁`, `∂₂` and `z^γ D^(n)` acting on formal
//! series, their matrix entries and transposes, the pre-Lie product and the
//! Lie bracket, and membership in the Lie algebra and its sub-algebras.

use crate::combo::{q, Combo, Q};
use crate::index::{
    hom_value, is_model_index, noise_homogeneity, poly_weight, populated, FormalSeries, Letter, Mode, MultiIndex,
    NIdx, Params, N0,
};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// A generator of the Lie algebra: `∂ᵢ` or `z^γ D^(n)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// `∂ᵢ`, `i ∈ {1, 2}`.
    #[serde(rename = "del")]
    Del(u8),
    /// `z^γ D^(n)`.
    #[serde(rename = "zd")]
    ZD { gamma: MultiIndex, n: NIdx },
}

impl Generator {
    pub fn zd(gamma: MultiIndex, n: NIdx) -> Generator {
        Generator::ZD { gamma, n }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Del(i) => write!(f, "∂{i}"),
            Generator::ZD { gamma, n } => write!(f, "z^[{gamma}]D({},{})", n.0, n.1),
        }
    }
}

/// Rational combination of generators.
pub type LieElement = Combo<Generator>;

/// Errors of the Lie layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("the pre-Lie product ∂{0} ◁ ∂{1} is not a finite combination of generators")]
    UndefinedPreLie(u8, u8),
}

/// Pair `(Z≥0 component, Z component)` of the bigrading.
pub type Bigrade = (i64, i64);

fn unit_of(i: u8) -> NIdx {
    if i == 1 {
        (1, 0)
    } else {
        (0, 1)
    }
}

fn n_component(n: NIdx, i: u8) -> u32 {
    if i == 1 {
        n.0
    } else {
        n.1
    }
}

fn add_n(a: NIdx, b: NIdx) -> NIdx {
    (a.0 + b.0, a.1 + b.1)
}

/// Applies `D^(0) = Σ_k (k+1) z_{k+1} ∂_{z_k}` (on both families for `z^i_k`) to `z^γ`.
pub fn d0_monomial(g: &MultiIndex) -> FormalSeries {
    let mut out = FormalSeries::zero();
    for (l, p) in g.iter() {
        let next = match l {
            Letter::K(k) => Letter::K(k + 1),
            Letter::Z(i, k) => Letter::Z(*i, k + 1),
            Letter::N(..) => continue,
        };
        let k = match l {
            Letter::K(k) | Letter::Z(_, k) => *k,
            Letter::N(..) => unreachable!(),
        };
        let m = g.remove_var(l, 1).expect("present").add_var(&next, 1);
        out.add_term(m, q(*p as i64 * (k as i64 + 1)));
    }
    out
}

/// Applies `D^(n) = ∂_{z_n}` for `n ≠ 0`, and `D^(0)` for `n = 0`, to `z^γ`.
pub fn dn_monomial(n: NIdx, g: &MultiIndex) -> FormalSeries {
    if n == N0 {
        return d0_monomial(g);
    }
    let l = Letter::N(n.0, n.1);
    let p = g.get(&l);
    if p == 0 {
        return FormalSeries::zero();
    }
    FormalSeries::term(g.remove_var(&l, 1).expect("present"), q(p as i64))
}

/// Applies `∂ᵢ = Σ_n (nᵢ+1) z_{n+eᵢ} D^(n)` to `z^γ`.
pub fn del_monomial(i: u8, g: &MultiIndex) -> FormalSeries {
    let ei = unit_of(i);
    let mut out = FormalSeries::zero();
    let lead = Letter::N(ei.0, ei.1);
    for (m, c) in d0_monomial(g).iter() {
        out.add_term(m.add_var(&lead, 1), c.clone());
    }
    for (l, p) in g.iter() {
        if let Letter::N(a, b) = l {
            let n = (*a, *b);
            let np = add_n(n, ei);
            let m = g.remove_var(l, 1).expect("present").add_var(&Letter::N(np.0, np.1), 1);
            out.add_term(m, q((n_component(n, i) as i64 + 1) * *p as i64));
        }
    }
    out
}

/// Applies a generator to a monomial.
pub fn apply_monomial(g: &Generator, m: &MultiIndex) -> FormalSeries {
    match g {
        Generator::Del(i) => del_monomial(*i, m),
        Generator::ZD { gamma, n } => {
            let d = dn_monomial(*n, m);
            d.map_keys(|b| b.mul(gamma))
        }
    }
}

/// Applies a generator term by term via the Leibniz rule.
pub fn apply_generator(g: &Generator, s: &FormalSeries) -> FormalSeries {
    s.map_linear(|m| apply_monomial(g, m))
}

/// Applies a Lie element (as a derivation) to a series.
pub fn apply_lie(x: &LieElement, s: &FormalSeries) -> FormalSeries {
    let mut out = FormalSeries::zero();
    for (g, c) in x.iter() {
        out.add_scaled(&apply_generator(g, s), c);
    }
    out
}

/// Applies `D^(n)` (any `n`, including `0`) to a series.
pub fn apply_dn(n: NIdx, s: &FormalSeries) -> FormalSeries {
    s.map_linear(|m| dn_monomial(n, m))
}

/// Applies `∂ᵢ` to a series.
pub fn apply_del(i: u8, s: &FormalSeries) -> FormalSeries {
    s.map_linear(|m| del_monomial(i, m))
}

/// `(g)_β^γ`: the coefficient of `z^β` in `g z^γ`.
pub fn matrix_entry(g: &Generator, gamma: &MultiIndex, beta: &MultiIndex) -> Q {
    apply_monomial(g, gamma).coeff(beta)
}

/// Transpose of multiplication by `z^γ` in the monomial pairing: `z_β ↦ z_{β−γ}`.
pub fn mult_transpose(gamma: &MultiIndex, s: &FormalSeries) -> FormalSeries {
    let mut out = FormalSeries::zero();
    for (b, c) in s.iter() {
        if let Some(r) = b.checked_div(gamma) {
            out.add_term(r, c.clone());
        }
    }
    out
}

/// Transpose of `D^(0)`.
pub fn d0_transpose(s: &FormalSeries) -> FormalSeries {
    let mut out = FormalSeries::zero();
    for (b, c) in s.iter() {
        for (l, _) in b.iter() {
            let (prev, k) = match l {
                Letter::K(k) if *k >= 1 => (Letter::K(k - 1), *k - 1),
                Letter::Z(i, k) if *k >= 1 => (Letter::Z(*i, k - 1), *k - 1),
                _ => continue,
            };
            let g = b.remove_var(l, 1).expect("present").add_var(&prev, 1);
            let coef = q(g.get(&prev) as i64 * (k as i64 + 1));
            out.add_term(g, coef * c);
        }
    }
    out
}

/// Transpose of `D^(n)` for any `n`.
pub fn dn_transpose(n: NIdx, s: &FormalSeries) -> FormalSeries {
    if n == N0 {
        return d0_transpose(s);
    }
    let l = Letter::N(n.0, n.1);
    let mut out = FormalSeries::zero();
    for (b, c) in s.iter() {
        let g = b.add_var(&l, 1);
        let coef = q(g.get(&l) as i64);
        out.add_term(g, coef * c);
    }
    out
}

/// Transpose of `∂ᵢ`.
pub fn del_transpose(i: u8, s: &FormalSeries) -> FormalSeries {
    let ei = unit_of(i);
    let lead = Letter::N(ei.0, ei.1);
    let mut out = FormalSeries::zero();
    for (b, c) in s.iter() {
        if let Some(rest) = b.remove_var(&lead, 1) {
            out.add_scaled(&d0_transpose(&FormalSeries::basis(rest)), c);
        }
        for (l, _) in b.iter() {
            if let Letter::N(a0, b0) = l {
                let np = (*a0, *b0);
                if n_component(np, i) == 0 {
                    continue;
                }
                let n = if i == 1 { (np.0 - 1, np.1) } else { (np.0, np.1 - 1) };
                if n == N0 {
                    continue;
                }
                let ln = Letter::N(n.0, n.1);
                let g = b.remove_var(l, 1).expect("present").add_var(&ln, 1);
                let coef = q(n_component(np, i) as i64 * g.get(&ln) as i64);
                out.add_term(g, coef * c);
            }
        }
    }
    out
}

/// Transpose of a generator.
pub fn generator_transpose(g: &Generator, s: &FormalSeries) -> FormalSeries {
    match g {
        Generator::Del(i) => del_transpose(*i, s),
        Generator::ZD { gamma, n } => dn_transpose(*n, &mult_transpose(gamma, s)),
    }
}

/// Pre-Lie product `g₁ ◁ g₂`, the covariant derivative of `g₂` along `g₁`.
pub fn pre_lie(g1: &Generator, g2: &Generator) -> Result<LieElement, LieError> {
    match (g1, g2) {
        (Generator::Del(i), Generator::Del(j)) => Err(LieError::UndefinedPreLie(*i, *j)),
        (_, Generator::ZD { gamma, n }) => {
            let s = apply_monomial(g1, gamma);
            Ok(s.map_keys(|b| Generator::zd(b.clone(), *n)))
        }
        (Generator::ZD { gamma, n }, Generator::Del(i)) => {
            let c = n_component(*n, *i);
            if c == 0 {
                return Ok(LieElement::zero());
            }
            let m = if *i == 1 { (n.0 - 1, n.1) } else { (n.0, n.1 - 1) };
            Ok(LieElement::term(Generator::zd(gamma.clone(), m), q(c as i64)))
        }
    }
}

/// Bilinear extension of the pre-Lie product.
pub fn pre_lie_elements(a: &LieElement, b: &LieElement) -> Result<LieElement, LieError> {
    let mut out = LieElement::zero();
    for (g1, c1) in a.iter() {
        for (g2, c2) in b.iter() {
            out.add_scaled(&pre_lie(g1, g2)?, &(c1 * c2));
        }
    }
    Ok(out)
}

/// Lie bracket `a ◁ b − b ◁ a`, with `[∂ᵢ, ∂ⱼ] = 0`.
pub fn lie_bracket(a: &LieElement, b: &LieElement) -> LieElement {
    let mut out = LieElement::zero();
    for (g1, c1) in a.iter() {
        for (g2, c2) in b.iter() {
            if matches!((g1, g2), (Generator::Del(_), Generator::Del(_))) {
                continue;
            }
            let c = c1 * c2;
            out.add_scaled(&pre_lie(g1, g2).expect("defined"), &c);
            out.add_scaled(&pre_lie(g2, g1).expect("defined"), &(-c));
        }
    }
    out
}

/// Admissibility of `z^γ D^(n)` in the Lie algebra of the given mode.
pub fn in_lie_algebra(gamma: &MultiIndex, n: NIdx, mode: Mode, p: &Params) -> bool {
    if !mode.alphabet().admits(gamma) {
        return false;
    }
    match mode {
        Mode::Full | Mode::Gpam => noise_homogeneity(gamma) >= 0 && hom_value(gamma, p) > q(p.nabs(n)),
        Mode::Rp | Mode::Rp2 => n == N0 && populated(gamma, mode),
    }
}

/// Admissibility of a generator; `∂ᵢ` belongs to the full algebra only.
pub fn generator_in_lie(g: &Generator, mode: Mode, p: &Params) -> bool {
    match g {
        Generator::Del(_) => matches!(mode, Mode::Full | Mode::Gpam),
        Generator::ZD { gamma, n } => in_lie_algebra(gamma, *n, mode, p),
    }
}

/// Bigrade `(1+[γ], Σ|m|γ(m) − |n|)` of `z^γ D^(n)` and `(0, wᵢ)` of `∂ᵢ`.
pub fn bigrade(g: &Generator, p: &Params) -> Bigrade {
    match g {
        Generator::Del(i) => (0, if *i == 1 { p.weights.0 as i64 } else { p.weights.1 as i64 }),
        Generator::ZD { gamma, n } => (1 + noise_homogeneity(gamma), poly_weight(gamma, p) - p.nabs(*n)),
    }
}

/// Whether the transposed action of `g` maps the model index `β` only to model indices.
pub fn preserves_model(g: &Generator, beta: &MultiIndex) -> bool {
    generator_transpose(g, &FormalSeries::basis(beta.clone())).keys().all(is_model_index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::{ek, en, monomial};

    fn zd(g: MultiIndex, n: NIdx) -> Generator {
        Generator::zd(g, n)
    }

    #[test]
    fn d0_examples() {
        let z0 = monomial(&ek(0));
        assert_eq!(apply_dn(N0, &z0), monomial(&ek(1)));
        let s = apply_dn(N0, &monomial(&ek(0).mul(&ek(1))));
        assert_eq!(s.coeff(&ek(1).mul(&ek(1))), q(1));
        assert_eq!(s.coeff(&ek(0).mul(&ek(2))), q(2));
        assert_eq!(s.len(), 2);
        assert!(apply_dn(N0, &monomial(&en(1, 0))).is_zero());
    }

    #[test]
    fn del_examples() {
        assert_eq!(apply_del(1, &monomial(&en(0, 1))), monomial(&en(1, 1)));
        assert_eq!(apply_del(1, &monomial(&ek(0))), monomial(&en(1, 0).mul(&ek(1))));
    }

    #[test]
    fn matrix_entry_examples() {
        assert_eq!(matrix_entry(&zd(MultiIndex::one(), N0), &ek(0), &ek(1)), q(1));
        assert_eq!(matrix_entry(&zd(ek(0), N0), &ek(0), &ek(0).mul(&ek(1))), q(1));
        let beta = ek(3).mul(&en(1, 0));
        let gamma = beta.add_var(&Letter::N(1, 0), 1);
        assert_eq!(matrix_entry(&zd(MultiIndex::one(), (1, 0)), &gamma, &beta), q(2));
    }

    #[test]
    fn pre_lie_examples() {
        let a = zd(ek(0), N0);
        assert_eq!(pre_lie(&a, &a).unwrap(), LieElement::basis(zd(ek(0).mul(&ek(1)), N0)));
        let b = zd(ek(0).mul(&ek(1)), (1, 0));
        assert_eq!(pre_lie(&b, &Generator::Del(1)).unwrap(), LieElement::basis(zd(ek(0).mul(&ek(1)), N0)));
        assert_eq!(
            pre_lie(&Generator::Del(1), &a).unwrap(),
            LieElement::basis(zd(ek(1).mul(&en(1, 0)), N0))
        );
        assert_eq!(pre_lie(&Generator::Del(1), &Generator::Del(2)), Err(LieError::UndefinedPreLie(1, 2)));
    }

    #[test]
    fn bracket_examples() {
        let d1 = LieElement::basis(Generator::Del(1));
        let d2 = LieElement::basis(Generator::Del(2));
        assert!(lie_bracket(&d1, &d2).is_zero());
        let a = LieElement::basis(zd(ek(0), (1, 0)));
        let expected = &LieElement::basis(zd(ek(0), N0)) - &LieElement::basis(zd(ek(1).mul(&en(1, 0)), (1, 0)));
        assert_eq!(lie_bracket(&a, &d1), expected);
        let b = LieElement::basis(zd(ek(0), N0));
        assert!(lie_bracket(&b, &b).is_zero());
    }

    #[test]
    fn admissibility_examples() {
        let p = Params::default();
        assert!(in_lie_algebra(&MultiIndex::one(), N0, Mode::Full, &p));
        assert!(!in_lie_algebra(&ek(1).mul(&en(1, 0)), (2, 0), Mode::Full, &p));
        assert!(in_lie_algebra(&ek(0), N0, Mode::Rp, &p));
        assert!(!in_lie_algebra(&ek(1), N0, Mode::Rp, &p));
    }

    #[test]
    fn transposes_match_matrix_entries() {
        let letters = [Letter::K(0), Letter::K(1), Letter::K(2), Letter::N(1, 0), Letter::N(0, 1), Letter::N(1, 1)];
        let pool = crate::index::enumerate_indices(&letters, 3, |_| true);
        let gens = [
            Generator::Del(1),
            Generator::Del(2),
            zd(MultiIndex::one(), N0),
            zd(ek(0), N0),
            zd(MultiIndex::one(), (1, 0)),
            zd(ek(1), (0, 1)),
        ];
        for g in gens.iter() {
            for gamma in pool.iter() {
                for (beta, c) in apply_monomial(g, gamma).iter() {
                    let t = generator_transpose(g, &FormalSeries::basis(beta.clone()));
                    assert_eq!(t.coeff(gamma), *c, "{g:?} {gamma} {beta}");
                }
            }
            for beta in pool.iter() {
                for (gamma, c) in generator_transpose(g, &FormalSeries::basis(beta.clone())).iter() {
                    assert_eq!(matrix_entry(g, gamma, beta), *c);
                }
            }
        }
    }
}
