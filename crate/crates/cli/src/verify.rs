//! Runners behind `mihopf verify <identity>`.

use crate::config::UsageError;
use clap::ValueEnum;
use mihopf::combo::{q, qr, Q};
use mihopf::dict::*;
use mihopf::dynamics::*;
use mihopf::envelope::{faa_di_bruno_lhs, faa_di_bruno_rhs, EnvIndex, GenLabel};
use mihopf::group::*;
use mihopf::hopf::*;
use mihopf::index::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeSet;

/// Identities that `verify` can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    Comodule,
    Coassoc,
    Antipode,
    #[value(name = "intertwine-J")]
    #[serde(rename = "intertwine-J")]
    IntertwineJ,
    GroupLaws,
    Composition,
    ExpFormula,
    PrelieRp,
    HopfRp,
    PrelieGpam,
    Sharp,
    GpamFw01,
    GpamGp03,
    FaaDiBruno,
    Translate,
    Tra08,
    LemmaRpNumeric,
}

/// Pool bounds and numerical settings, echoed into the report.
#[derive(Clone, Debug, Serialize)]
pub struct Bounds {
    pub max_hom: String,
    pub max_len: u32,
    pub max_n: i64,
    pub max_k: u32,
    pub max_l: u32,
    pub max_edges: u32,
    pub max_leaves: usize,
    pub max_nodes: u32,
    pub samples: usize,
    pub seed: u64,
    pub driver: String,
    pub grid_points: usize,
    pub tol: f64,
}

/// Model indices of the mode's alphabet below the homogeneity and length bounds.
fn model_pool(mode: Mode, max_hom: &Q, b: &Bounds, p: &Params) -> Vec<MultiIndex> {
    let kmax = (max_hom / &p.alpha).to_f64().floor().max(0.0) as u32;
    let letters: Vec<Letter> = match mode {
        Mode::Full | Mode::Gpam => full_letters(kmax, b.max_n, p),
        Mode::Rp => (0..=kmax).map(Letter::K).collect(),
        Mode::Rp2 => (0..=kmax).flat_map(|k| [Letter::Z(0, k), Letter::Z(1, k)]).collect(),
    };
    enumerate_indices(&letters, b.max_len, |g| {
        let ok = match mode {
            Mode::Full | Mode::Gpam => is_model_index(g),
            Mode::Rp | Mode::Rp2 => true,
        };
        ok && !g.is_one() && &hom_value(g, p) <= max_hom
    })
}

fn random_character(rng: &mut ChaCha8Rng, labels: &[GenLabel], p: &Params) -> Character {
    let tilt: Vec<_> = (0..8)
        .map(|_| (labels[rng.gen_range(0..labels.len())].clone(), qr(rng.gen_range(-3..=3), rng.gen_range(1..=3))))
        .collect();
    Character::new((qr(rng.gen_range(-2..=2), 2), qr(rng.gen_range(-2..=2), 3)), tilt, p).expect("labels are admissible")
}

fn random_ap(rng: &mut ChaCha8Rng) -> ApPair {
    let a = (0..4).map(|_| qr(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect();
    let pp = [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
        .into_iter()
        .map(|n| (n, qr(rng.gen_range(-2..=2), rng.gen_range(1..=2))))
        .collect();
    ApPair::new(a, pp).expect("no constant coefficient")
}

fn need_full(mode: Mode, what: &str) -> Result<(), UsageError> {
    match mode {
        Mode::Full | Mode::Gpam => Ok(()),
        _ => Err(UsageError::Input(format!("{what} requires --mode full"))),
    }
}

fn hopf_err(e: HopfError) -> UsageError {
    UsageError::Input(e.to_string())
}

fn group_err(e: GroupError) -> UsageError {
    UsageError::Input(e.to_string())
}

/// Runs the named identity on the pool described by the bounds.
pub fn run(id: Identity, b: &Bounds, mode: Mode, p: &Params) -> Result<Report, UsageError> {
    let max_hom = crate::config::parse_hom(&b.max_hom, &p.alpha)?;
    let pool_desc = || format!("model indices with |β| ≤ {}, length ≤ {}, |n| ≤ {}", b.max_hom, b.max_len, b.max_n);
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    Ok(match id {
        Identity::Comodule => {
            let mut r = Report::new("comodule", pool_desc());
            for beta in model_pool(mode, &max_hom, b, p) {
                r.check(check_comodule(&beta, mode, p).map_err(hopf_err)?, || format!("comodule law at {beta}"));
                r.check(check_counit(&beta, mode, p).map_err(hopf_err)?, || format!("counit at {beta}"));
            }
            r
        }
        Identity::Coassoc | Identity::Antipode => {
            let name = if id == Identity::Coassoc { "coassoc" } else { "antipode" };
            let mut r = Report::new(name, format!("left legs of Δ over {}", pool_desc()));
            let legs = left_legs(&model_pool(mode, &max_hom, b, p), mode, p).map_err(hopf_err)?;
            for idx in &legs {
                let ok = if id == Identity::Coassoc { check_coassoc(idx, mode, p) } else { check_antipode(idx, mode, p) };
                r.check(ok, || serde_json::to_string(idx).expect("serializable"));
            }
            r
        }
        Identity::IntertwineJ => {
            let mut r = Report::new("intertwine-J", pool_desc());
            for gamma in model_pool(mode, &max_hom, b, p) {
                for n in n_indices_below(&q(b.max_n), p, false) {
                    r.check(check_intertwining(n, &gamma, mode, p).map_err(hopf_err)?, || format!("n = {n:?}, γ = {gamma}"));
                }
            }
            r
        }
        Identity::GroupLaws | Identity::Composition | Identity::ExpFormula => {
            need_full(mode, "this identity")?;
            group_identity(id, &max_hom, b, p, &mut rng)?
        }
        Identity::PrelieRp => {
            let mut r = verify_prelie_morphism_rp(b.max_edges);
            let k = verify_kernel_rp(b.max_edges);
            r.identity = "prelie-rp".into();
            r.checked += k.checked;
            r.counterexamples.extend(k.counterexamples);
            r
        }
        Identity::HopfRp => verify_hopf_morphism_rp(b.max_edges, p),
        Identity::PrelieGpam => verify_prelie_morphism_gpam(b.max_edges, b.max_n, b.max_leaves, p),
        Identity::Sharp => verify_sharp_intertwine(b.max_edges, b.max_n, b.max_leaves, p),
        Identity::GpamFw01 | Identity::GpamGp03 => {
            let pool = gpam_pool(b.max_k, b.max_n, b.max_len, p);
            let (fw, gp) = verify_gpam_intertwining(&pool, p).map_err(hopf_err)?;
            if id == Identity::GpamFw01 {
                fw
            } else {
                gp
            }
        }
        Identity::FaaDiBruno => {
            let mut r = Report::new("faa-di-bruno", format!("l ≤ {}, |m| ≤ {}", b.max_l, b.max_n));
            for l in 0..=b.max_l {
                for m in n_indices_below(&q(b.max_n), p, false) {
                    r.check(faa_di_bruno_lhs(l, m) == faa_di_bruno_rhs(l, m), || format!("l = {l}, m = {m:?}"));
                }
            }
            r
        }
        Identity::Translate => translate_identity(b, &mut rng),
        Identity::Tra08 => verify_tra08(b.max_nodes, &sample_bcfp_translations()).map_err(|e| UsageError::Input(e.to_string()))?,
        Identity::LemmaRpNumeric => {
            let driver = crate::config::parse_driver(&b.driver)?;
            let grid = Grid::new(1.0, b.grid_points).map_err(|e| UsageError::Input(e.to_string()))?;
            let defect = verify_lemma_rp(&driver.sample(grid), b.max_edges, Rule::Simpson);
            let mut r = Report::new(
                "lemma-rp-numeric",
                format!("populated β with at most {} edges, driver {}, {} grid steps", b.max_edges, b.driver, b.grid_points),
            );
            r.check(defect <= b.tol, || format!("max defect {defect:e} exceeds {:e}", b.tol));
            r
        }
    })
}

fn group_identity(id: Identity, max_hom: &Q, b: &Bounds, p: &Params, rng: &mut ChaCha8Rng) -> Result<Report, UsageError> {
    let labels = labels_below(&q(2), 2, p);
    let pool = model_pool(Mode::Full, max_hom, b, p);
    let chars: Vec<Character> = (0..b.samples.max(2)).map(|_| random_character(rng, &labels, p)).collect();
    let tr = Truncation::hom(max_hom + &q(1));
    let desc = format!(
        "model indices with |β| ≤ {}, length ≤ {}, {} random characters (seed {})",
        b.max_hom,
        b.max_len,
        chars.len(),
        b.seed
    );
    let mut r = match id {
        Identity::GroupLaws => Report::new("group-laws", desc),
        Identity::Composition => Report::new("composition", desc),
        _ => Report::new("exp-formula", desc),
    };
    for (i, f) in chars.iter().enumerate() {
        let g = &chars[(i + 1) % chars.len()];
        for beta in &pool {
            let z = FormalSeries::basis(beta.clone());
            match id {
                Identity::GroupLaws => {
                    let comp = labels_for_composition(beta, p).map_err(group_err)?;
                    let fg = convolve_on(f, g, &comp, p);
                    let lhs = gamma(&fg, beta, p).map_err(group_err)?;
                    let rhs = gamma_series(g, &gamma(f, beta, p).map_err(group_err)?, p).map_err(group_err)?;
                    r.check(lhs == rhs, || format!("Γ_(fg) = Γ_g Γ_f at {beta}"));
                    let inv = f.inverse_on(&comp, p);
                    let back = gamma_series(&inv, &gamma(f, beta, p).map_err(group_err)?, p).map_err(group_err)?;
                    r.check(back == z, || format!("Γ_(f∘S) Γ_f = id at {beta}"));
                }
                Identity::Composition => {
                    let composed = ComposedTilt { outer: f, inner: g };
                    let nested = gamma_star(f, &gamma_star(g, &z, &tr, p).map_err(group_err)?, &tr, p).map_err(group_err)?;
                    let direct = gamma_star_with(&composed, &z, &tr, p).map_err(group_err)?;
                    r.check(direct == nested, || format!("composition rule at {beta}"));
                }
                _ => {
                    let lhs = exp_formula(f, &z, &tr, p).map_err(group_err)?;
                    let rhs = gamma_star(f, &z, &tr, p).map_err(group_err)?;
                    r.check(lhs == rhs, || format!("exponential formula at {beta}"));
                    let ap = random_ap(rng);
                    let v = eval_on_ap(&gamma_star(f, &z, &ap.truncation(), p).map_err(group_err)?, &ap);
                    let image = act_image(f, &ap, &poly_letters(&z), p);
                    r.check(v == eval_on_ap(&z, &image), || format!("(a,p)-action at {beta}"));
                }
            }
        }
    }
    Ok(r)
}

fn translate_identity(b: &Bounds, rng: &mut ChaCha8Rng) -> Report {
    let series_pool = rp2_pool(b.max_len);
    let c_pool: Vec<MultiIndex> =
        series_pool.iter().filter(|m| m.letters().all(|l| matches!(l, Letter::Z(1, _)))).cloned().collect();
    let mut r = Report::new(
        "translate",
        format!("populated two-family indices of length ≤ {}, {} random translations (seed {})", b.max_len, b.samples, b.seed),
    );
    let random_series = |rng: &mut ChaCha8Rng, pool: &[MultiIndex]| {
        let mut s = FormalSeries::zero();
        for _ in 0..3 {
            s.add_term(pool[rng.gen_range(0..pool.len())].clone(), qr(rng.gen_range(-3..=3), rng.gen_range(1..=4)));
        }
        s
    };
    for _ in 0..b.samples {
        let c1 = TranslationMap::new(random_series(rng, &c_pool)).expect("populated z¹ series");
        let c2 = TranslationMap::new(random_series(rng, &c_pool)).expect("populated z¹ series");
        let s = random_series(rng, &series_pool);
        let t = random_series(rng, &series_pool);
        let lhs = translate(&c1, &series_pre_lie(&s, &t));
        let rhs = series_pre_lie(&translate(&c1, &s), &translate(&c1, &t));
        r.check(lhs == rhs, || format!("pre-Lie morphism for c = {:?}", c1.c()));
        let nested = translate(&c1, &translate(&c2, &s));
        r.check(nested == translate(&c1.sum(&c2), &s), || format!("M_c1 M_c2 = M_(c1+c2) on {s:?}"));
    }
    r
}

/// Every left leg of `Δ` over the pool.
fn left_legs(pool: &[MultiIndex], mode: Mode, p: &Params) -> Result<BTreeSet<EnvIndex>, HopfError> {
    let mut legs = BTreeSet::new();
    for beta in pool {
        for ((l, _), _) in delta_shared(beta, mode, p)?.iter() {
            legs.insert(l.clone());
        }
    }
    Ok(legs)
}
