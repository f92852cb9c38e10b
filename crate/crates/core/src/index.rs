//! Multi-indices over the coordinate alphabets, homogeneities, population
//! conditions and formal series with exact rational coefficients.
//!
//! A letter is one of the coordinates `z_k` (the Taylor coefficients of the
//! nonlinearity), `z_n` with `n ≠ 0` (the coefficients of the polynomial
//! parameter), or `z^i_k` for the two-nonlinearity alphabet. A multi-index is
//! a [`Monomial`] over letters and a formal series is a [`Poly`] over letters.

use crate::combo::{q, Monomial, Poly, Q};
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

/// Derivative index `n ∈ ℕ₀²` of a polynomial coordinate or of `D^(n)`.
pub type NIdx = (u32, u32);

/// The zero derivative index.
pub const N0: NIdx = (0, 0);

/// A coordinate letter.
///
/// The derived order (all `K` before all `N` before all `Z`) is the canonical
/// serialization order; it carries no algebraic meaning.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// `z_k`, the `k`-th Taylor coefficient of the nonlinearity.
    K(u32),
    /// `z_n` for `n ≠ 0`, the `n`-th coefficient of the polynomial parameter.
    N(u32, u32),
    /// `z^i_k`, the `k`-th Taylor coefficient of the nonlinearity `a_i`, `i ∈ {0, 1}`.
    Z(u8, u32),
}

impl Letter {
    /// The polynomial letter `z_n`; `n` must be nonzero.
    pub fn n(n: NIdx) -> Letter {
        debug_assert!(n != N0, "z_n requires n ≠ 0");
        Letter::N(n.0, n.1)
    }

    /// Canonical string form: `k:3`, `n:1,0`, `z0:2`.
    pub fn code(&self) -> String {
        match self {
            Letter::K(k) => format!("k:{k}"),
            Letter::N(a, b) => format!("n:{a},{b}"),
            Letter::Z(i, k) => format!("z{i}:{k}"),
        }
    }

    /// Parses the canonical string form.
    pub fn from_code(s: &str) -> Result<Letter, IndexError> {
        let bad = || IndexError::Parse(format!("bad letter `{s}`"));
        let (head, tail) = s.split_once(':').ok_or_else(bad)?;
        match head {
            "k" => Ok(Letter::K(tail.parse().map_err(|_| bad())?)),
            "n" => {
                let (a, b) = tail.split_once(',').ok_or_else(bad)?;
                let n = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                if n == N0 {
                    return Err(bad());
                }
                Ok(Letter::N(n.0, n.1))
            }
            "z0" | "z1" => {
                let i = if head == "z0" { 0 } else { 1 };
                Ok(Letter::Z(i, tail.parse().map_err(|_| bad())?))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::K(k) => write!(f, "z{k}"),
            Letter::N(a, b) => write!(f, "z({a},{b})"),
            Letter::Z(i, k) => write!(f, "z{i}_{k}"),
        }
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.code())
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Letter::from_code(&s).map_err(serde::de::Error::custom)
    }
}

/// Multi-index: finitely supported map from letters to positive integers.
pub type MultiIndex = Monomial<Letter>;

/// Formal series: finitely supported rational combination of monomials `z^γ`.
pub type FormalSeries = Poly<Letter>;

/// Errors raised by the index layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("multi-index {0} is not over the {1:?} alphabet")]
    AlphabetMismatch(String, Alphabet),
    #[error("population is not defined for mode {0:?}")]
    NoPopulation(Mode),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coordinate alphabets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    /// `{z_k} ∪ {z_n : n ≠ 0}`.
    Full,
    /// `{z_k}` only.
    Rp,
    /// `{z^0_k, z^1_k}`.
    Rp2,
    /// Any letters.
    Custom,
}

impl Alphabet {
    pub fn contains(&self, l: &Letter) -> bool {
        match (self, l) {
            (Alphabet::Custom, _) => true,
            (Alphabet::Full, Letter::K(_)) | (Alphabet::Full, Letter::N(..)) => true,
            (Alphabet::Rp, Letter::K(_)) => true,
            (Alphabet::Rp2, Letter::Z(..)) => true,
            _ => false,
        }
    }

    /// Whether every letter of `γ` belongs to the alphabet.
    pub fn admits(&self, g: &MultiIndex) -> bool {
        g.letters().all(|l| self.contains(l))
    }
}

/// Sub-structure selector: which letters are admitted and which Lie algebra is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// The full structure over the full alphabet.
    Full,
    /// Branched rough paths: `k`-letters only, populated generators `z^γ D^(0)`.
    Rp,
    /// Two nonlinearities: `z^i_k` letters, populated generators `z^γ D^(0)`.
    Rp2,
    /// gPAM: the full structure with the gPAM population condition.
    Gpam,
}

impl Mode {
    pub fn alphabet(&self) -> Alphabet {
        match self {
            Mode::Full | Mode::Gpam => Alphabet::Full,
            Mode::Rp => Alphabet::Rp,
            Mode::Rp2 => Alphabet::Rp2,
        }
    }
}

/// Global parameters: the homogeneity unit α, the weights of the two
/// directions, and optional truncation cutoffs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub alpha: Q,
    pub weights: (u32, u32),
    pub cutoff_hom: Option<Q>,
    pub cutoff_len: Option<u32>,
}

impl Params {
    /// Validated constructor.
    pub fn new(alpha: Q, weights: (u32, u32)) -> Result<Params, IndexError> {
        if alpha <= Q::zero() {
            return Err(IndexError::Params("alpha must be positive".into()));
        }
        if weights.0 == 0 || weights.1 == 0 {
            return Err(IndexError::Params("weights must be positive".into()));
        }
        Ok(Params { alpha, weights, cutoff_hom: None, cutoff_len: None })
    }

    /// `α` with the default weights `(1, 2)`.
    pub fn with_alpha(alpha: Q) -> Params {
        Params::new(alpha, (1, 2)).expect("valid alpha")
    }

    pub fn with_cutoffs(mut self, hom: Option<Q>, len: Option<u32>) -> Params {
        self.cutoff_hom = hom;
        self.cutoff_len = len;
        self
    }

    /// `|n| = n₁w₁ + n₂w₂`.
    pub fn nabs(&self, n: NIdx) -> i64 {
        n.0 as i64 * self.weights.0 as i64 + n.1 as i64 * self.weights.1 as i64
    }

    /// Exact value of a symbolic homogeneity.
    pub fn value(&self, h: &Homogeneity) -> Q {
        &self.alpha * q(h.a_coeff) + q(h.int_part)
    }
}

impl Default for Params {
    fn default() -> Self {
        Params::with_alpha(Q::new(1.into(), 4.into()))
    }
}

/// Homogeneity `a_coeff·α + int_part`, kept symbolic in α.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Homogeneity {
    pub a_coeff: i64,
    pub int_part: i64,
}

impl Homogeneity {
    pub fn new(a_coeff: i64, int_part: i64) -> Self {
        Homogeneity { a_coeff, int_part }
    }

    /// Exact comparison after substituting α.
    pub fn cmp_at(&self, other: &Homogeneity, p: &Params) -> Ordering {
        p.value(self).cmp(&p.value(other))
    }
}

impl std::ops::Add for Homogeneity {
    type Output = Homogeneity;
    fn add(self, o: Homogeneity) -> Homogeneity {
        Homogeneity::new(self.a_coeff + o.a_coeff, self.int_part + o.int_part)
    }
}

impl std::ops::Sub for Homogeneity {
    type Output = Homogeneity;
    fn sub(self, o: Homogeneity) -> Homogeneity {
        Homogeneity::new(self.a_coeff - o.a_coeff, self.int_part - o.int_part)
    }
}

impl fmt::Display for Homogeneity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}a{:+}", self.a_coeff, self.int_part)
    }
}

/// `e_k`.
pub fn ek(k: u32) -> MultiIndex {
    MultiIndex::var(Letter::K(k))
}

/// `e_n` for `n ≠ 0`.
pub fn en(n1: u32, n2: u32) -> MultiIndex {
    MultiIndex::var(Letter::N(n1, n2))
}

/// `e_(i,k)` in the two-nonlinearity alphabet.
pub fn ez(i: u8, k: u32) -> MultiIndex {
    MultiIndex::var(Letter::Z(i, k))
}

/// The empty multi-index.
pub fn zero_index() -> MultiIndex {
    MultiIndex::one()
}

/// The monomial `z^γ` as a series.
pub fn monomial(g: &MultiIndex) -> FormalSeries {
    FormalSeries::basis(g.clone())
}

/// If `γ = e_n` for some `n ≠ 0`, returns `n`.
pub fn as_unit_poly(g: &MultiIndex) -> Option<NIdx> {
    let mut it = g.iter();
    match (it.next(), it.next()) {
        (Some((Letter::N(a, b), 1)), None) => Some((*a, *b)),
        _ => None,
    }
}

/// Noise homogeneity `[γ] = Σ_k k·γ(k) − Σ_{n≠0} γ(n)`; both families count for `z^i_k`.
pub fn noise_homogeneity(g: &MultiIndex) -> i64 {
    g.iter()
        .map(|(l, p)| match l {
            Letter::K(k) | Letter::Z(_, k) => *k as i64 * *p as i64,
            Letter::N(..) => -(*p as i64),
        })
        .sum()
}

/// Polynomial part `Σ_{n≠0} |n|·γ(n)` of the homogeneity.
pub fn poly_weight(g: &MultiIndex, p: &Params) -> i64 {
    g.iter()
        .map(|(l, m)| match l {
            Letter::N(a, b) => p.nabs((*a, *b)) * *m as i64,
            _ => 0,
        })
        .sum()
}

/// `|γ| = α([γ]+1) + Σ_{n≠0}|n|γ(n)`.
pub fn homogeneity(g: &MultiIndex, p: &Params) -> Homogeneity {
    Homogeneity::new(noise_homogeneity(g) + 1, poly_weight(g, p))
}

/// Exact value of `|γ|`.
pub fn hom_value(g: &MultiIndex, p: &Params) -> Q {
    p.value(&homogeneity(g, p))
}

/// Whether `z_γ` belongs to the model space: `[γ] ≥ 0` or `γ = e_n`.
pub fn is_model_index(g: &MultiIndex) -> bool {
    noise_homogeneity(g) >= 0 || as_unit_poly(g).is_some()
}

/// The population identity of the given mode.
pub fn is_populated(g: &MultiIndex, mode: Mode) -> Result<bool, IndexError> {
    let alphabet = mode.alphabet();
    if !alphabet.admits(g) {
        return Err(IndexError::AlphabetMismatch(format!("{g}"), alphabet));
    }
    let s: i64 = g
        .iter()
        .map(|(l, m)| {
            let m = *m as i64;
            match l {
                Letter::K(k) | Letter::Z(_, k) => (*k as i64 - 1) * m,
                Letter::N(..) => -m,
            }
        })
        .sum();
    match mode {
        Mode::Rp | Mode::Rp2 | Mode::Gpam => Ok(s == -1),
        Mode::Full => Err(IndexError::NoPopulation(mode)),
    }
}

/// Convenience predicate that treats alphabet mismatches as unpopulated.
pub fn populated(g: &MultiIndex, mode: Mode) -> bool {
    is_populated(g, mode).unwrap_or(false)
}

/// Number of edges `Σ_k k·γ(k)` of the trees encoded by an RP index.
pub fn edge_count(g: &MultiIndex) -> u32 {
    g.iter()
        .map(|(l, m)| match l {
            Letter::K(k) | Letter::Z(_, k) => k * m,
            Letter::N(..) => 0,
        })
        .sum()
}

/// Product of two series.
pub fn series_mul(a: &FormalSeries, b: &FormalSeries) -> FormalSeries {
    a.mul(b)
}

/// The unit series `z^0`.
pub fn series_one() -> FormalSeries {
    FormalSeries::basis(MultiIndex::one())
}

impl fmt::Display for Monomial<Letter> {
    /// Human form such as `2e0+e1+e(1,0)+z1:2`, or `0` for the empty index.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(l, m)| {
                let body = match l {
                    Letter::K(k) => format!("e{k}"),
                    Letter::N(a, b) => format!("e({a},{b})"),
                    Letter::Z(i, k) => format!("z{i}:{k}"),
                };
                if *m == 1 {
                    body
                } else {
                    format!("{m}{body}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Parses the human form produced by `Display`, e.g. `2e0+e1`, `e(1,0)`, `z1:0+z1:1`, `0`.
pub fn parse_multi_index(s: &str) -> Result<MultiIndex, IndexError> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = |t: &str| IndexError::Parse(format!("bad multi-index term `{t}` in `{s}`"));
    if s.is_empty() {
        return Err(IndexError::Parse("empty multi-index".into()));
    }
    if s == "0" {
        return Ok(MultiIndex::one());
    }
    let mut pairs = Vec::new();
    // Split on '+' outside parentheses.
    let mut depth = 0;
    let mut start = 0;
    let bytes: Vec<char> = s.chars().collect();
    let mut terms = Vec::new();
    for (i, c) in bytes.iter().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                terms.push(bytes[start..i].iter().collect::<String>());
                start = i + 1;
            }
            _ => {}
        }
    }
    terms.push(bytes[start..].iter().collect::<String>());
    for t in terms {
        let digits: String = t.chars().take_while(|c| c.is_ascii_digit()).collect();
        let rest = &t[digits.len()..];
        let mult: u32 = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| bad(&t))? };
        let letter = if let Some(body) = rest.strip_prefix('e') {
            if let Some(inner) = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
                let (a, b) = inner.split_once(',').ok_or_else(|| bad(&t))?;
                let n: NIdx = (a.parse().map_err(|_| bad(&t))?, b.parse().map_err(|_| bad(&t))?);
                if n == N0 {
                    return Err(bad(&t));
                }
                Letter::N(n.0, n.1)
            } else {
                Letter::K(body.parse().map_err(|_| bad(&t))?)
            }
        } else if rest.starts_with('z') || rest.starts_with('k') || rest.starts_with('n') {
            Letter::from_code(rest).map_err(|_| bad(&t))?
        } else {
            return Err(bad(&t));
        };
        pairs.push((letter, mult));
    }
    Ok(MultiIndex::from_pairs(pairs))
}

impl<L: Ord + Clone + Serialize> Serialize for Monomial<L> {
    /// Sorted array of `[letter, multiplicity]` pairs.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.support_len()))?;
        for (l, p) in self.iter() {
            seq.serialize_element(&(l, p))?;
        }
        seq.end()
    }
}

impl<'de, L: Ord + Clone + Deserialize<'de>> Deserialize<'de> for Monomial<L> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs: Vec<(L, u32)> = Vec::deserialize(d)?;
        Ok(Monomial::from_pairs(pairs))
    }
}

/// All multi-indices over the given letters with total length at most `max_len`,
/// filtered by `keep`. The letters must be distinct.
pub fn enumerate_indices<F: Fn(&MultiIndex) -> bool>(letters: &[Letter], max_len: u32, keep: F) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur: Vec<(Letter, u32)> = Vec::new();
    fn rec<F: Fn(&MultiIndex) -> bool>(
        letters: &[Letter],
        i: usize,
        left: u32,
        cur: &mut Vec<(Letter, u32)>,
        out: &mut Vec<MultiIndex>,
        keep: &F,
    ) {
        if i == letters.len() {
            let m = MultiIndex::from_pairs(cur.iter().cloned());
            if keep(&m) {
                out.push(m);
            }
            return;
        }
        for e in 0..=left {
            if e > 0 {
                cur.push((letters[i], e));
            }
            rec(letters, i + 1, left - e, cur, out, keep);
            if e > 0 {
                cur.pop();
            }
        }
    }
    rec(letters, 0, max_len, &mut cur, &mut out, &keep);
    out.sort();
    out
}

/// Letters `z_0..=z_kmax` and `z_n` for `0 < |n| ≤ nmax`.
pub fn full_letters(kmax: u32, nmax: i64, p: &Params) -> Vec<Letter> {
    let mut v: Vec<Letter> = (0..=kmax).map(Letter::K).collect();
    for a in 0..=(nmax.max(0) as u32) {
        for b in 0..=(nmax.max(0) as u32) {
            if (a, b) != N0 && p.nabs((a, b)) <= nmax {
                v.push(Letter::N(a, b));
            }
        }
    }
    v
}

/// All `n ∈ ℕ₀²` with `|n| ≤ bound` (exact rational bound), including `0`.
pub fn n_indices_below(bound: &Q, p: &Params, strict: bool) -> Vec<NIdx> {
    let mut out = Vec::new();
    let mut a = 0u32;
    loop {
        if q(p.nabs((a, 0))) > *bound {
            break;
        }
        let mut b = 0u32;
        loop {
            let v = q(p.nabs((a, b)));
            let ok = if strict { v < *bound } else { v <= *bound };
            if !ok {
                break;
            }
            out.push((a, b));
            b += 1;
        }
        a += 1;
    }
    out
}

/// Whether the series is supported on model indices.
pub fn supported_on_model(s: &FormalSeries) -> bool {
    s.keys().all(is_model_index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combo::qr;

    fn p() -> Params {
        Params::default()
    }

    #[test]
    fn noise_homogeneity_examples() {
        assert_eq!(noise_homogeneity(&ek(0)), 0);
        assert_eq!(noise_homogeneity(&ek(1).mul(&en(1, 0))), 0);
        assert_eq!(noise_homogeneity(&ek(2).mul(&ek(0).add_var(&Letter::K(0), 1))), 2);
    }

    #[test]
    fn homogeneity_examples() {
        let p = p();
        assert_eq!(hom_value(&ek(0), &p), qr(1, 4));
        assert_eq!(hom_value(&en(1, 0), &p), q(1));
        assert_eq!(hom_value(&MultiIndex::var_pow(Letter::K(0), 3), &p), qr(1, 4));
    }

    #[test]
    fn model_index_examples() {
        assert!(is_model_index(&zero_index()));
        assert!(is_model_index(&en(0, 1)));
        assert!(!is_model_index(&MultiIndex::var_pow(Letter::N(1, 0), 2)));
    }

    #[test]
    fn population_examples() {
        assert_eq!(is_populated(&ek(0), Mode::Rp), Ok(true));
        assert_eq!(is_populated(&MultiIndex::var_pow(Letter::K(0), 2), Mode::Rp), Ok(false));
        assert_eq!(is_populated(&ek(1).mul(&en(1, 0)), Mode::Gpam), Ok(true));
        assert_eq!(is_populated(&ek(1).mul(&en(1, 0)).mul(&en(0, 1)), Mode::Gpam), Ok(false));
        assert_eq!(is_populated(&ek(1).mul(&ek(0)), Mode::Gpam), Ok(true));
        assert!(is_populated(&en(1, 0), Mode::Rp).is_err());
        assert_eq!(is_populated(&ez(1, 0), Mode::Rp2), Ok(true));
    }

    #[test]
    fn series_examples() {
        let z0 = monomial(&ek(0));
        let z1 = monomial(&ek(1));
        assert_eq!(series_mul(&z0, &z1), monomial(&ek(0).mul(&ek(1))));
        let s = &z0 + &z1;
        let sq = series_mul(&s, &s);
        assert_eq!(sq.coeff(&ek(0).mul(&ek(1))), q(2));
        assert_eq!(sq.len(), 3);
        assert!(series_mul(&FormalSeries::zero(), &z0).is_zero());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "2e0+e1", "e(1,0)", "e1+e(1,0)", "z0:2+2z1:0"] {
            let m = parse_multi_index(s).unwrap();
            assert_eq!(parse_multi_index(&m.to_string()).unwrap(), m);
        }
        assert_eq!(parse_multi_index("2e0+e1").unwrap(), ek(0).mul(&ek(0)).mul(&ek(1)));
        assert!(parse_multi_index("2x0").is_err());
        assert!(parse_multi_index("").is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = parse_multi_index("2e0+e(1,0)+z1:3").unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["k:0",2],["n:1,0",1],["z1:3",1]]"#);
        let back: MultiIndex = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(q(0), (1, 2)).is_err());
        assert!(Params::new(q(1), (0, 2)).is_err());
    }
}
