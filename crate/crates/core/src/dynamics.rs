//! Numerical model hierarchies for smooth drivers and the algebraic
//! translation maps.
//!
//! The multi-index model solves `dΠ_β/dx₂ = Σ_k Σ_{e_k+β₁+⋯+β_k=β} Π_{β₁}⋯Π_{β_k} ξ`
//! with `Π_β(0) = 0`; the tree lift solves `d𝕏_τ/dx₂ = 𝕏_{τ₁}⋯𝕏_{τ_k} ξ`.
//! With two nonlinearities the letters `z⁰_k` carry the factor `1` and the
//! letters `z¹_k` the factor `ξ`. Both recursions are integrated with the
//! same cumulative quadrature on a shared uniform grid.

use crate::combo::{factorial, qb, Q};
use crate::dict::{phi_dagger_combo, rp_pool, Report};
use crate::index::{enumerate_indices, populated, series_mul, FormalSeries, Letter, Mode, MultiIndex};
use crate::lie::apply_dn;
use crate::trees::{colored_trees_up_to, star_n_combo, Tree, TreeCombo};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("grid mismatch: {0} samples against a grid of {1} points")]
    GridMismatch(usize, usize),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("invalid translation: {0}")]
    Translation(String),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("output failed: {0}")]
    Io(#[from] std::io::Error),
}

/// Uniform partition of `[0, T]` into `N` steps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub t: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(t: f64, n: usize) -> Result<Grid, DynamicsError> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(DynamicsError::Grid(format!("horizon {t} must be positive")));
        }
        if n < 2 {
            return Err(DynamicsError::Grid("at least two steps are required".into()));
        }
        Ok(Grid { t, n })
    }

    pub fn h(&self) -> f64 {
        self.t / self.n as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..=self.n).map(|i| i as f64 * self.h()).collect()
    }
}

/// Cumulative quadrature rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    Trapezoid,
    /// Third-order local rule `h/12 (5fᵢ + 8fᵢ₊₁ − fᵢ₊₂)`, mirrored on the last step.
    Simpson,
}

/// Driver `ξ` given by a named analytic function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Driver {
    Const(f64),
    Cos,
    /// Polynomial with coefficients in increasing degree.
    Poly(Vec<f64>),
}

impl Driver {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Driver::Const(c) => *c,
            Driver::Cos => x.cos(),
            Driver::Poly(c) => c.iter().rev().fold(0.0, |acc, a| acc * x + a),
        }
    }

    pub fn sample(&self, grid: Grid) -> SampledPath {
        SampledPath { grid, values: grid.points().into_iter().map(|x| self.eval(x)).collect() }
    }
}

/// Values of a path on the grid points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledPath {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl SampledPath {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<SampledPath, DynamicsError> {
        if values.len() != grid.n + 1 {
            return Err(DynamicsError::GridMismatch(values.len(), grid.n + 1));
        }
        Ok(SampledPath { grid, values })
    }

    pub fn zeros(grid: Grid) -> SampledPath {
        SampledPath { grid, values: vec![0.0; grid.n + 1] }
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("nonempty grid")
    }

    /// `max_i |self_i − other_i|`.
    pub fn max_diff(&self, o: &SampledPath) -> f64 {
        self.values.iter().zip(&o.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Cumulative integral `F(xᵢ) = ∫₀^{xᵢ} f` of grid samples.
pub fn cumulative(rule: Rule, h: f64, f: &[f64]) -> Vec<f64> {
    let n = f.len() - 1;
    let mut out = vec![0.0; n + 1];
    for i in 0..n {
        let step = match rule {
            Rule::Trapezoid => h / 2.0 * (f[i] + f[i + 1]),
            Rule::Simpson if i + 2 <= n => h / 12.0 * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]),
            Rule::Simpson => h / 12.0 * (-f[i - 1] + 8.0 * f[i] + 5.0 * f[i + 1]),
        };
        out[i + 1] = out[i] + step;
    }
    out
}

fn pointwise_product<'a>(paths: impl Iterator<Item = &'a [f64]>, len: usize) -> Vec<f64> {
    let mut out = vec![1.0; len];
    for p in paths {
        for (o, v) in out.iter_mut().zip(p) {
            *o *= v;
        }
    }
    out
}

/// Solver for the multi-index and tree hierarchies driven by one path.
pub struct Hierarchy {
    xi: SampledPath,
    rule: Rule,
    pi: HashMap<MultiIndex, Vec<f64>>,
    trees: HashMap<Tree, Vec<f64>>,
}

impl Hierarchy {
    pub fn new(xi: SampledPath, rule: Rule) -> Hierarchy {
        Hierarchy { xi, rule, pi: HashMap::new(), trees: HashMap::new() }
    }

    pub fn grid(&self) -> Grid {
        self.xi.grid
    }

    fn factor(&self, l: &Letter) -> Option<&[f64]> {
        match l {
            Letter::Z(0, _) => None,
            _ => Some(&self.xi.values),
        }
    }

    /// `Π_β` over the `k`-letters, or over the two-family letters.
    pub fn model(&mut self, beta: &MultiIndex) -> SampledPath {
        SampledPath { grid: self.grid(), values: self.model_values(beta) }
    }

    fn model_values(&mut self, beta: &MultiIndex) -> Vec<f64> {
        if let Some(v) = self.pi.get(beta) {
            return v.clone();
        }
        let len = self.grid().n + 1;
        let mut rhs = vec![0.0; len];
        if !beta.is_one() {
            let heads: Vec<Letter> = beta.letters().filter(|l| !matches!(l, Letter::N(..))).cloned().collect();
            for head in heads {
                let k = match head {
                    Letter::K(k) | Letter::Z(_, k) => k,
                    Letter::N(..) => unreachable!(),
                };
                let rest = beta.remove_var(&head, 1).expect("present");
                for (parts, mult) in multiset_splits(&rest, k) {
                    let vals: Vec<Vec<f64>> = parts.iter().map(|b| self.model_values(b)).collect();
                    let mut prod = pointwise_product(vals.iter().map(Vec::as_slice), len);
                    if let Some(f) = self.factor(&head) {
                        for (o, v) in prod.iter_mut().zip(f) {
                            *o *= v;
                        }
                    }
                    for (r, p) in rhs.iter_mut().zip(prod) {
                        *r += mult * p;
                    }
                }
            }
        }
        let out = cumulative(self.rule, self.grid().h(), &rhs);
        self.pi.insert(beta.clone(), out.clone());
        out
    }

    /// The tree lift `𝕏_τ`.
    pub fn lift_tree(&mut self, t: &Tree) -> SampledPath {
        SampledPath { grid: self.grid(), values: self.tree_values(t) }
    }

    fn tree_values(&mut self, t: &Tree) -> Vec<f64> {
        if let Some(v) = self.trees.get(t) {
            return v.clone();
        }
        let len = self.grid().n + 1;
        let vals: Vec<Vec<f64>> = t.children().iter().map(|c| self.tree_values(c)).collect();
        let mut rhs = pointwise_product(vals.iter().map(Vec::as_slice), len);
        for (o, v) in rhs.iter_mut().zip(&self.xi.values) {
            *o *= v;
        }
        let out = cumulative(self.rule, self.grid().h(), &rhs);
        self.trees.insert(t.clone(), out.clone());
        out
    }
}

/// Unordered splits of `β` into `k` nonzero parts, with the number of
/// ordered tuples realizing each.
fn multiset_splits(beta: &MultiIndex, k: u32) -> Vec<(Vec<MultiIndex>, f64)> {
    fn rec(beta: &MultiIndex, k: u32, min: Option<&MultiIndex>, out: &mut Vec<Vec<MultiIndex>>, cur: &mut Vec<MultiIndex>) {
        if k == 0 {
            if beta.is_one() {
                out.push(cur.clone());
            }
            return;
        }
        for d in beta.divisors() {
            if d.is_one() || min.is_some_and(|m| &d < m) {
                continue;
            }
            let rest = beta.checked_div(&d).expect("divisor");
            cur.push(d.clone());
            rec(&rest, k - 1, Some(&d), out, cur);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    rec(beta, k, None, &mut parts, &mut Vec::new());
    parts
        .into_iter()
        .map(|p| {
            let mut ordered = (1..=p.len() as u64).product::<u64>() as f64;
            let mut i = 0;
            while i < p.len() {
                let j = (i..p.len()).take_while(|&j| p[j] == p[i]).count();
                ordered /= (1..=j as u64).product::<u64>() as f64;
                i += j;
            }
            (p, ordered)
        })
        .collect()
}

/// `Π_β` for a driver on a grid.
pub fn model_mi(xi: &SampledPath, beta: &MultiIndex, rule: Rule) -> SampledPath {
    Hierarchy::new(xi.clone(), rule).model(beta)
}

/// `𝕏_τ` for a driver on a grid.
pub fn lift_tree(xi: &SampledPath, t: &Tree, rule: Rule) -> SampledPath {
    Hierarchy::new(xi.clone(), rule).lift_tree(t)
}

/// Largest pointwise defect of `Π_β = Σ_{τ∈𝒯_β} σ(β)/σ(τ) 𝕏_τ` over populated
/// `β` with at most `max_edges` edges.
pub fn verify_lemma_rp(xi: &SampledPath, max_edges: u32, rule: Rule) -> f64 {
    let mut h = Hierarchy::new(xi.clone(), rule);
    let mut worst: f64 = 0.0;
    for beta in rp_pool(max_edges) {
        let pi = h.model(&beta);
        let mut sum = SampledPath::zeros(h.grid());
        for (t, c) in crate::dict::phi_rp(&beta).iter() {
            let x = h.lift_tree(t);
            let c = c.to_f64();
            for (s, v) in sum.values.iter_mut().zip(&x.values) {
                *s += c * v;
            }
        }
        worst = worst.max(pi.max_diff(&sum));
    }
    worst
}

/// Writes paths as CSV with a leading column of grid points.
pub fn write_csv<W: Write>(paths: &[(String, SampledPath)], w: W) -> Result<(), DynamicsError> {
    let mut wr = csv::Writer::from_writer(w);
    let mut header = vec!["x".to_string()];
    header.extend(paths.iter().map(|(n, _)| n.clone()));
    wr.write_record(&header)?;
    if let Some((_, first)) = paths.first() {
        for (i, x) in first.grid.points().iter().enumerate() {
            let mut row = vec![format!("{x:.12e}")];
            row.extend(paths.iter().map(|(_, p)| format!("{:.12e}", p.values[i])));
            wr.write_record(&row)?;
        }
    }
    wr.flush()?;
    Ok(())
}

/// A translation `M_c` of the two-nonlinearity alphabet: `c` has no
/// constant term, involves only `z¹`-letters and is populated.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslationMap {
    c: FormalSeries,
}

impl TranslationMap {
    pub fn new(c: FormalSeries) -> Result<TranslationMap, DynamicsError> {
        if !c.constant_term().is_zero() {
            return Err(DynamicsError::Translation("c must vanish at the empty index".into()));
        }
        for m in c.keys() {
            if m.letters().any(|l| !matches!(l, Letter::Z(1, _))) {
                return Err(DynamicsError::Translation(format!("{m} involves letters other than z¹_k")));
            }
            if !populated(m, Mode::Rp2) {
                return Err(DynamicsError::Translation(format!("{m} is not populated")));
            }
        }
        Ok(TranslationMap { c })
    }

    /// The identity translation `M_0`.
    pub fn zero() -> TranslationMap {
        TranslationMap { c: FormalSeries::zero() }
    }

    pub fn c(&self) -> &FormalSeries {
        &self.c
    }

    /// `c₁ + c₂`.
    pub fn sum(&self, o: &TranslationMap) -> TranslationMap {
        TranslationMap { c: &self.c + &o.c }
    }

    /// `M_c z⁰_k = z⁰_k + (1/k!)(D^(0))^k c`.
    pub fn image_of_letter(&self, l: &Letter) -> FormalSeries {
        let mut out = FormalSeries::letter(*l);
        if let Letter::Z(0, k) = l {
            let mut d = self.c.clone();
            for _ in 0..*k {
                d = apply_dn((0, 0), &d);
            }
            out.add_scaled(&d, &(Q::one() / qb(factorial(*k))));
        }
        out
    }
}

/// `M_c s`, multiplicative on monomials.
pub fn translate(c: &TranslationMap, s: &FormalSeries) -> FormalSeries {
    s.substitute(|l| c.image_of_letter(l))
}

/// `(D^(0) π₁) π₂`-style pre-Lie product of series: `π₁ (D^(0) π₂)`.
pub fn series_pre_lie(p1: &FormalSeries, p2: &FormalSeries) -> FormalSeries {
    series_mul(p1, &apply_dn((0, 0), p2))
}

/// The Itô–Stratonovich correction `c = ½ z¹₀ z¹₁`.
pub fn ito_stratonovich() -> TranslationMap {
    let m = MultiIndex::from_pairs([(Letter::Z(1, 0), 1), (Letter::Z(1, 1), 1)]);
    TranslationMap::new(FormalSeries::term(m, Q::from_i64(1) / Q::from_i64(2))).expect("valid translation")
}

/// Populated two-family indices of length at most `max_len`.
pub fn rp2_pool(max_len: u32) -> Vec<MultiIndex> {
    let mut letters = Vec::new();
    for i in 0..2u8 {
        for k in 0..max_len {
            letters.push(Letter::Z(i, k));
        }
    }
    enumerate_indices(&letters, max_len, |g| populated(g, Mode::Rp2))
}

/// The renormalized model `Π̃ = M_c Π`, componentwise on `pool`.
pub fn renormalized_model(h: &mut Hierarchy, c: &TranslationMap, pool: &[MultiIndex]) -> BTreeMap<MultiIndex, Vec<f64>> {
    let len = h.grid().n + 1;
    let mut out: BTreeMap<MultiIndex, Vec<f64>> = pool.iter().map(|g| (g.clone(), vec![0.0; len])).collect();
    for beta in pool {
        let pi = h.model(beta);
        for (g, coef) in translate(c, &FormalSeries::basis(beta.clone())).iter() {
            if let Some(v) = out.get_mut(g) {
                let coef = coef.to_f64();
                for (o, p) in v.iter_mut().zip(&pi.values) {
                    *o += coef * p;
                }
            }
        }
    }
    out
}

type NumSeries = BTreeMap<MultiIndex, Vec<f64>>;

fn num_mul(a: &NumSeries, b: &NumSeries, keep: &dyn Fn(&MultiIndex) -> bool) -> NumSeries {
    let mut out = NumSeries::new();
    for (ga, va) in a {
        for (gb, vb) in b {
            let g = ga.mul(gb);
            if !keep(&g) {
                continue;
            }
            let e = out.entry(g).or_insert_with(|| vec![0.0; va.len()]);
            for ((o, x), y) in e.iter_mut().zip(va).zip(vb) {
                *o += x * y;
            }
        }
    }
    out
}

/// Defect of the counter-term equation
/// `dΠ̃ = Σ_k z⁰_k Π̃^k + Σ_k z¹_k Π̃^k ξ + Σ_k (1/k!) Π̃^k (D^(0))^k c`
/// for `Π̃ = M_c Π`, over populated indices of length at most `max_len`:
/// the largest gap between `Π̃_γ` and the integral of the right-hand side.
pub fn verify_renormalized_hierarchy(xi: &SampledPath, c: &TranslationMap, max_len: u32, rule: Rule) -> f64 {
    let pool = rp2_pool(max_len);
    let mut h = Hierarchy::new(xi.clone(), rule);
    let len = h.grid().n + 1;
    let tilde = renormalized_model(&mut h, c, &pool);
    let keep = |g: &MultiIndex| g.degree() <= max_len;
    let mut one = NumSeries::new();
    one.insert(MultiIndex::one(), vec![1.0; len]);
    let mut powers = vec![one];
    for k in 1..max_len {
        let next = num_mul(&powers[k as usize - 1], &tilde, &keep);
        powers.push(next);
    }
    let mut rhs = NumSeries::new();
    let add = |rhs: &mut NumSeries, g: MultiIndex, v: Vec<f64>| {
        let e = rhs.entry(g).or_insert_with(|| vec![0.0; len]);
        for (o, x) in e.iter_mut().zip(v) {
            *o += x;
        }
    };
    for (k, pw) in powers.iter().enumerate() {
        let k = k as u32;
        for (g, v) in pw {
            let g0 = g.add_var(&Letter::Z(0, k), 1);
            if keep(&g0) {
                add(&mut rhs, g0, v.clone());
            }
            let g1 = g.add_var(&Letter::Z(1, k), 1);
            if keep(&g1) {
                let w: Vec<f64> = v.iter().zip(&xi.values).map(|(a, b)| a * b).collect();
                add(&mut rhs, g1, w);
            }
        }
        let mut d = c.c.clone();
        for _ in 0..k {
            d = apply_dn((0, 0), &d);
        }
        let scale = (Q::one() / qb(factorial(k))).to_f64();
        for (m, coef) in d.iter() {
            let coef = coef.to_f64() * scale;
            for (g, v) in pw {
                let gm = g.mul(m);
                if keep(&gm) {
                    add(&mut rhs, gm, v.iter().map(|x| coef * x).collect());
                }
            }
        }
    }
    let mut worst: f64 = 0.0;
    for (g, v) in &tilde {
        let f = rhs.remove(g).unwrap_or_else(|| vec![0.0; len]);
        let integral = cumulative(rule, h.grid().h(), &f);
        let d = v.iter().zip(&integral).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(d);
    }
    worst
}

/// The unique pre-Lie morphism `M_v^BCFP` of the colored Grossman–Larson
/// algebra with `Z_{•₀} ↦ Z_{•₀} + v` and `Z_{•₁} ↦ Z_{•₁}`.
pub struct BcfpTranslation {
    v: TreeCombo,
    memo: HashMap<Tree, TreeCombo>,
}

impl BcfpTranslation {
    pub fn new(v: TreeCombo) -> BcfpTranslation {
        BcfpTranslation { v, memo: HashMap::new() }
    }

    /// `M_v Z_τ`, from `Z_{τ_k} * Z_{τ'} = c Z_τ + (trees whose root has one
    /// child fewer)`, where `τ'` is `τ` with the root child `τ_k` removed.
    pub fn apply_tree(&mut self, t: &Tree) -> TreeCombo {
        if let Some(v) = self.memo.get(t) {
            return v.clone();
        }
        let out = if t.children().is_empty() {
            let mut out = TreeCombo::basis(t.clone());
            if t.color() == 0 {
                out += &self.v;
            }
            out
        } else {
            let last = t.children().last().expect("nonempty").clone();
            let rest: Vec<Tree> = t.children()[..t.children().len() - 1].to_vec();
            let trunk = Tree::b_plus_colored(t.color(), rest);
            let prod = star_n_combo((0, 0), &TreeCombo::basis(last.clone()), &TreeCombo::basis(trunk.clone()));
            let c = prod.coeff(t);
            let mut acc = star_n_combo((0, 0), &self.apply_tree(&last), &self.apply_tree(&trunk));
            for (s, coef) in prod.iter() {
                if s != t {
                    let img = self.apply_tree(s);
                    acc.add_scaled(&img, &-coef.clone());
                }
            }
            acc.scale(&(Q::one() / c))
        };
        self.memo.insert(t.clone(), out.clone());
        out
    }

    pub fn apply(&mut self, x: &TreeCombo) -> TreeCombo {
        let mut out = TreeCombo::zero();
        for (t, c) in x.iter() {
            let img = self.apply_tree(t);
            out.add_scaled(&img, c);
        }
        out
    }
}

/// `M_v^BCFP x`.
pub fn bcfp_translate(v: &TreeCombo, x: &TreeCombo) -> TreeCombo {
    BcfpTranslation::new(v.clone()).apply(x)
}

/// `φ†M_v^BCFP = M_{φ†v} φ†` on colored trees with at most `max_nodes` nodes,
/// for each `v` of the list.
pub fn verify_tra08(max_nodes: u32, vs: &[TreeCombo]) -> Result<Report, DynamicsError> {
    let pool = colored_trees_up_to(max_nodes);
    let mut r = Report::new("tra08", format!("colored trees with at most {max_nodes} nodes, {} translations", vs.len()));
    for v in vs {
        let c = TranslationMap::new(phi_dagger_combo(v, true))?;
        let mut m = BcfpTranslation::new(v.clone());
        for t in &pool {
            let lhs = phi_dagger_combo(&m.apply_tree(t), true);
            let rhs = translate(&c, &phi_dagger_combo(&TreeCombo::basis(t.clone()), true));
            r.check(lhs == rhs, || format!("τ = {t}"));
        }
    }
    Ok(r)
}

/// Sample translations for [`verify_tra08`]: combinations of `1`-colored trees.
pub fn sample_bcfp_translations() -> Vec<TreeCombo> {
    let one = Tree::colored(1);
    let chain = Tree::b_plus_colored(1, vec![one.clone()]);
    let cherry = Tree::b_plus_colored(1, vec![one.clone(), one.clone()]);
    vec![
        TreeCombo::term(chain.clone(), Q::from_i64(1) / Q::from_i64(2)),
        TreeCombo::basis(one.clone()),
        TreeCombo::from_terms([(cherry, Q::from_i64(3)), (chain, Q::from_i64(-2)), (one, Q::from_i64(1) / Q::from_i64(5))]),
    ]
}
