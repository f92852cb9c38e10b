//! Sparse exact linear combinations over an ordered key set, and commutative
//! monomials over an ordered alphabet.
//!
//! Every algebraic object of the crate (series, Lie elements, envelope
//! elements, tensors, tree combinations, polynomials) is a [`Combo`] over a
//! suitable key type. Keys with a commutative monoid structure are
//! [`Monomial`]s, and combinations of monomials multiply as polynomials.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Exact rational scalar used throughout.
pub type Q = crate::rational::Rational;

/// Integer rational.
pub fn q(n: i64) -> Q {
    Q::from_i64(n)
}

/// Rational `n/d`; panics on `d == 0`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from a big integer.
pub fn qb(n: BigInt) -> Q {
    Q::from_integer(n)
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient `binom(n, k)`, zero when `k > n`.
pub fn binom(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Canonical string of a rational: `"n"` or `"n/d"` with positive denominator.
pub fn q_to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"n"` or `"n/d"` into a rational.
pub fn parse_q(s: &str) -> Option<Q> {
    Q::parse(s)
}

/// Lossy conversion to `f64` for numerical consumers.
pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64()
}

/// Commutative monomial: sorted `(letter, exponent)` pairs with positive exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial<L: Ord>(Vec<(L, u32)>);

impl<L: Ord + Clone> Default for Monomial<L> {
    fn default() -> Self {
        Monomial(Vec::new())
    }
}

impl<L: Ord + Clone> Monomial<L> {
    /// The empty monomial.
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// A single letter to the first power.
    pub fn var(l: L) -> Self {
        Monomial(vec![(l, 1)])
    }

    /// A single letter to the power `p` (the empty monomial if `p == 0`).
    pub fn var_pow(l: L, p: u32) -> Self {
        if p == 0 {
            Self::one()
        } else {
            Monomial(vec![(l, p)])
        }
    }

    /// Builds a monomial from arbitrary pairs, merging repeats and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (L, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<L, u32> = BTreeMap::new();
        for (l, p) in pairs {
            if p > 0 {
                *map.entry(l).or_insert(0) += p;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Exponent of `l` (zero when absent).
    pub fn get(&self, l: &L) -> u32 {
        match self.0.binary_search_by(|(k, _)| k.cmp(l)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    /// Total degree, i.e. the length of a multi-index.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, p)| *p).sum()
    }

    /// Number of distinct letters.
    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, (L, u32)> {
        self.0.iter()
    }

    pub fn letters(&self) -> impl Iterator<Item = &L> {
        self.0.iter().map(|(l, _)| l)
    }

    /// Product of monomials (exponent addition).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Multiplies by `l^p`.
    pub fn add_var(&self, l: &L, p: u32) -> Self {
        if p == 0 {
            return self.clone();
        }
        let mut v = self.0.clone();
        match v.binary_search_by(|(k, _)| k.cmp(l)) {
            Ok(i) => v[i].1 += p,
            Err(i) => v.insert(i, (l.clone(), p)),
        }
        Monomial(v)
    }

    /// Divides by `l^p`, or `None` if the exponent of `l` is below `p`.
    pub fn remove_var(&self, l: &L, p: u32) -> Option<Self> {
        if p == 0 {
            return Some(self.clone());
        }
        let mut v = self.0.clone();
        match v.binary_search_by(|(k, _)| k.cmp(l)) {
            Ok(i) => {
                if v[i].1 < p {
                    return None;
                }
                v[i].1 -= p;
                if v[i].1 == 0 {
                    v.remove(i);
                }
                Some(Monomial(v))
            }
            Err(_) => None,
        }
    }

    /// Quotient `self / other` if `other` divides `self`.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        let mut cur = self.clone();
        for (l, p) in other.iter() {
            cur = cur.remove_var(l, *p)?;
        }
        Some(cur)
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Self) -> bool {
        self.iter().all(|(l, p)| other.get(l) >= *p)
    }

    /// `Π exponent!`, the multi-index factorial.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, (_, p)| acc * factorial(*p))
    }

    /// All divisors of `self`, the empty monomial first.
    pub fn divisors(&self) -> Vec<Self> {
        let mut out = vec![Self::one()];
        for (l, p) in self.0.iter() {
            let mut next = Vec::with_capacity(out.len() * (*p as usize + 1));
            for m in out.iter() {
                for e in 0..=*p {
                    next.push(m.add_var(l, e));
                }
            }
            out = next;
        }
        out
    }

    /// All ordered splittings `self = a · b`.
    pub fn splits(&self) -> Vec<(Self, Self)> {
        self.divisors()
            .into_iter()
            .map(|a| {
                let b = self.checked_div(&a).expect("divisor");
                (a, b)
            })
            .collect()
    }

    /// Applies a letter map that is injective on the support.
    pub fn map_letters<M: Ord + Clone, F: Fn(&L) -> M>(&self, f: F) -> Monomial<M> {
        Monomial::from_pairs(self.0.iter().map(|(l, p)| (f(l), *p)))
    }
}

impl<L: Ord + fmt::Debug> fmt::Debug for Monomial<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (l, p)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            if *p == 1 {
                write!(f, "{:?}", l)?;
            } else {
                write!(f, "{:?}^{}", l, p)?;
            }
        }
        Ok(())
    }
}

/// Finitely supported rational linear combination of keys.
#[derive(Clone, PartialEq, Eq)]
pub struct Combo<K: Ord> {
    terms: BTreeMap<K, Q>,
}

impl<K: Ord> Default for Combo<K> {
    fn default() -> Self {
        Combo { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Combo<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The single basis element `k` with coefficient one.
    pub fn basis(k: K) -> Self {
        Self::term(k, Q::one())
    }

    /// `c · k`.
    pub fn term(k: K, c: Q) -> Self {
        let mut out = Self::zero();
        out.add_term(k, c);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (K, Q)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in it {
            out.add_term(k, c);
        }
        out
    }

    /// Collects unordered `(key, coefficient)` pairs with distinct keys, dropping zeros.
    pub fn from_distinct<I: IntoIterator<Item = (K, Q)>>(it: I) -> Self {
        Combo { terms: it.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Adds `c · k`, removing the key if the coefficient cancels.
    pub fn add_term(&mut self, k: K, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (k, v) in other.terms.iter() {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn coeff(&self, k: &K) -> Q {
        self.terms.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> std::collections::btree_map::Iter<'_, K, Q> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Combo { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// Applies a linear map given on basis elements.
    pub fn map_linear<M: Ord + Clone, F: FnMut(&K) -> Combo<M>>(&self, mut f: F) -> Combo<M> {
        let mut out = Combo::zero();
        for (k, c) in self.terms.iter() {
            out.add_scaled(&f(k), c);
        }
        out
    }

    /// Relabels keys; colliding images are summed.
    pub fn map_keys<M: Ord + Clone, F: FnMut(&K) -> M>(&self, mut f: F) -> Combo<M> {
        let mut out = Combo::zero();
        for (k, c) in self.terms.iter() {
            out.add_term(f(k), c.clone());
        }
        out
    }

    /// Keeps only the terms satisfying `pred`.
    pub fn filter<F: FnMut(&K) -> bool>(&self, mut pred: F) -> Self {
        Combo {
            terms: self.terms.iter().filter(|(k, _)| pred(k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    /// Largest absolute coefficient, zero for the zero combination.
    pub fn max_abs(&self) -> Q {
        self.terms.values().map(|v| v.abs()).max().unwrap_or_else(Q::zero)
    }

    pub fn into_terms(self) -> BTreeMap<K, Q> {
        self.terms
    }
}

impl<K: Ord + Clone> AddAssign<&Combo<K>> for Combo<K> {
    fn add_assign(&mut self, rhs: &Combo<K>) {
        for (k, v) in rhs.terms.iter() {
            self.add_term(k.clone(), v.clone());
        }
    }
}

impl<K: Ord + Clone> SubAssign<&Combo<K>> for Combo<K> {
    fn sub_assign(&mut self, rhs: &Combo<K>) {
        for (k, v) in rhs.terms.iter() {
            self.add_term(k.clone(), -v.clone());
        }
    }
}

impl<K: Ord + Clone> Add for &Combo<K> {
    type Output = Combo<K>;
    fn add(self, rhs: &Combo<K>) -> Combo<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Sub for &Combo<K> {
    type Output = Combo<K>;
    fn sub(self, rhs: &Combo<K>) -> Combo<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K: Ord + Clone> Add for Combo<K> {
    type Output = Combo<K>;
    fn add(mut self, rhs: Combo<K>) -> Combo<K> {
        self += &rhs;
        self
    }
}

impl<K: Ord + Clone> Sub for Combo<K> {
    type Output = Combo<K>;
    fn sub(mut self, rhs: Combo<K>) -> Combo<K> {
        self -= &rhs;
        self
    }
}

impl<K: Ord + Clone> Neg for &Combo<K> {
    type Output = Combo<K>;
    fn neg(self) -> Combo<K> {
        Combo { terms: self.terms.iter().map(|(k, v)| (k.clone(), -v.clone())).collect() }
    }
}

impl<K: Ord + Clone> Neg for Combo<K> {
    type Output = Combo<K>;
    fn neg(self) -> Combo<K> {
        -&self
    }
}

impl<K: Ord + Clone> FromIterator<(K, Q)> for Combo<K> {
    fn from_iter<I: IntoIterator<Item = (K, Q)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Combo<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})·{:?}", q_to_string(v), k)?;
        }
        Ok(())
    }
}

/// Polynomial over an alphabet: a combination of monomials.
pub type Poly<L> = Combo<Monomial<L>>;

impl<L: Ord + Clone> Combo<Monomial<L>> {
    /// The unit polynomial.
    pub fn one() -> Self {
        Self::basis(Monomial::one())
    }

    /// A constant polynomial.
    pub fn constant(c: Q) -> Self {
        Self::term(Monomial::one(), c)
    }

    /// The polynomial consisting of a single letter.
    pub fn letter(l: L) -> Self {
        Self::basis(Monomial::var(l))
    }

    /// Polynomial product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }

    /// `self^k`.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Constant coefficient.
    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one())
    }

    /// Formal partial derivative with respect to `l`.
    pub fn derivative(&self, l: &L) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.iter() {
            let p = m.get(l);
            if p > 0 {
                out.add_term(m.remove_var(l, 1).expect("present"), c * q(p as i64));
            }
        }
        out
    }

    /// Substitutes each letter by a rational value.
    pub fn evaluate<F: Fn(&L) -> Q>(&self, val: F) -> Q {
        let mut total = Q::zero();
        for (m, c) in self.iter() {
            let mut t = c.clone();
            for (l, p) in m.iter() {
                let v = val(l);
                t *= num_traits::pow(v, *p as usize);
                if t.is_zero() {
                    break;
                }
            }
            total += t;
        }
        total
    }

    /// Substitutes each letter by a polynomial in another alphabet.
    pub fn substitute<M: Ord + Clone, F: Fn(&L) -> Poly<M>>(&self, f: F) -> Poly<M> {
        let mut out = Poly::<M>::zero();
        for (m, c) in self.iter() {
            let mut t = Poly::<M>::constant(c.clone());
            for (l, p) in m.iter() {
                t = t.mul(&f(l).pow(*p));
                if t.is_zero() {
                    break;
                }
            }
            out += &t;
        }
        out
    }
}

impl<L: Ord + Clone> Mul for &Combo<Monomial<L>> {
    type Output = Combo<Monomial<L>>;
    fn mul(self, rhs: &Combo<Monomial<L>>) -> Combo<Monomial<L>> {
        Combo::<Monomial<L>>::mul(self, rhs)
    }
}

/// Tensor product of two basis-indexed combinations.
pub fn tensor<A: Ord + Clone, B: Ord + Clone>(a: &Combo<A>, b: &Combo<B>) -> Combo<(A, B)> {
    let mut out = Combo::zero();
    for (ka, ca) in a.iter() {
        for (kb, cb) in b.iter() {
            out.add_term((ka.clone(), kb.clone()), ca * cb);
        }
    }
    out
}
