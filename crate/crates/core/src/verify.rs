//! Named randomized verification suites.
//!
//! Each trial draws its inputs from its own seeded stream, trials run in
//! parallel, and reports list results in trial order, so a given
//! configuration always produces the same report.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::aut::{FreeGroupEndo, MagnusGenerator};
use crate::check::Verdict;
use crate::cochain::{
    check_dsquare, check_eq49, check_leibniz, check_tau1_cocycle, check_tau2_coboundary,
    contraction_r, cup, k0_cochain, tau_cochain, theta2_tilde_cochain, GroupElement, Pairing,
};
use crate::error::{Error, Result};
use crate::ia_abel::{abelianize_ia_word, iota_star, predicted_row, tau1_matrix, IaWord};
use crate::johnson::Johnson;
use crate::lcs::{
    check_commutator_formula, graded_image, in_filtration_a, johnson_hom, lcs_degree,
    left_normed_commutator, LcsDepth,
};
use crate::magnus::MagnusExpansion;
use crate::random::{
    library, random_expansion, random_nontrivial_word, random_product, random_word, trial_rng,
    TrialRng,
};
use crate::scalar::Scalar;
use crate::stasheff::{catalan, h_word_cochain, sigma_tau1, stasheff_vertices, ParenWord};
use crate::surface::SurfaceContext;
use crate::tensor::Tensor;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub rank: usize,
    #[serde(rename = "N")]
    pub trunc: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub inputs: String,
    pub identity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: SuiteConfig,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Failure>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 13] = [
    "thm13", "eq24", "eq26", "lemma22", "lemma23", "eq31", "thm31", "thm61", "eq65", "surface",
    "eq49", "dsquare", "stasheff",
];

type Trial = fn(&SuiteConfig, usize, &mut TrialRng) -> Result<(String, Verdict)>;

fn suite_fn(name: &str) -> Option<Trial> {
    Some(match name {
        "thm13" => trial_transition,
        "eq24" => trial_cocycle,
        "eq26" => trial_tau2_coboundary,
        "lemma22" => trial_tau1_products,
        "lemma23" => trial_inner_closed_form,
        "eq31" => trial_lower_central,
        "thm31" => trial_johnson_hom_independence,
        "thm61" => trial_tau1_matrix,
        "eq65" => trial_inner_tau1,
        "surface" => trial_surface,
        "eq49" => trial_semidirect,
        "dsquare" => trial_dsquare,
        "stasheff" => trial_stasheff,
        _ => return None,
    })
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let f = suite_fn(name).ok_or_else(|| Error::UnknownKind(name.to_string()))?;
    if cfg.trunc < 2 {
        return Err(Error::InvalidTruncation(cfg.trunc));
    }
    if cfg.rank < 2 {
        return Err(Error::InvalidRank(cfg.rank));
    }
    let outcomes: Vec<Option<Failure>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t as u64);
            match f(cfg, t, &mut rng) {
                Ok((_, v)) if v.holds => None,
                Ok((inputs, v)) => Some(Failure {
                    trial: t,
                    inputs,
                    identity: v.identity,
                    lhs: v.lhs,
                    rhs: v.rhs,
                }),
                Err(e) => Some(Failure {
                    trial: t,
                    inputs: String::new(),
                    identity: format!("error: {e}"),
                    lhs: None,
                    rhs: None,
                }),
            }
        })
        .collect();
    let failed = outcomes.iter().filter(|o| o.is_some()).count();
    Ok(SuiteReport {
        suite: name.to_string(),
        config: cfg.clone(),
        passed: cfg.trials - failed,
        failed,
        first_failure: outcomes.into_iter().flatten().next(),
    })
}

const TERMS_PER_DEGREE: usize = 2;
const WORD_LEN: usize = 6;
const PRODUCT_LEN: usize = 2;

fn describe_theta(theta: &MagnusExpansion) -> String {
    let xi: Vec<String> = theta.xi().iter().map(|s| s.render()).collect();
    format!("xi = [{}]", xi.join(", "))
}

fn auts(rank: usize) -> Result<Vec<FreeGroupEndo>> {
    library(&["nielsen", "magnus-K"], rank)
}

fn trial_transition(cfg: &SuiteConfig, _t: usize, rng: &mut TrialRng) -> Result<(String, Verdict)> {
    let (n, trunc) = (cfg.rank, cfg.trunc);
    let from = random_expansion(rng, n, trunc, TERMS_PER_DEGREE)?;
    let to = random_expansion(rng, n, trunc, TERMS_PER_DEGREE)?;
    let u = MagnusExpansion::transition(&from, &to)?;
    let inputs = format!(
        "from: {}; to: {}",
        describe_theta(&from),
        describe_theta(&to)
    );
    let mut parts = vec![Verdict::compare(
        "transition lies in IA",
        &u.linear_part().is_identity(),
        &true,
        |b| b.to_string(),
    )];
    for _ in 0..50 {
        let g = random_word(rng, n, 2 * WORD_LEN);
        parts.push(Verdict::compare(
            format!("U(theta'({g})) = theta''({g})"),
            &u.apply(&from.evaluate(&g)?)?,
            &to.evaluate(&g)?,
            |s| s.render(),
        ));
    }
    Ok((inputs, Verdict::all("transition", parts)))
}

fn random_pair(
    cfg: &SuiteConfig,
    rng: &mut TrialRng,
) -> Result<(MagnusExpansion, FreeGroupEndo, FreeGroupEndo)> {
    let theta = random_expansion(rng, cfg.rank, cfg.trunc, TERMS_PER_DEGREE)?;
    let lib = auts(cfg.rank)?;
    let phi = random_product(rng, &lib, PRODUCT_LEN)?;
    let psi = random_product(rng, &lib, PRODUCT_LEN)?;
    Ok((theta, phi, psi))
}

fn trial_cocycle(cfg: &SuiteConfig, _t: usize, rng: &mut TrialRng) -> Result<(String, Verdict)> {
    let (theta, phi, psi) = random_pair(cfg, rng)?;
    let g = random_word(rng, cfg.rank, WORD_LEN);
    let inputs = format!(
        "{}; phi = {phi:?}; psi = {psi:?}; gamma = {g}",
        describe_theta(&theta)
    );
    let j = Johnson::new(&theta)?;
    let v = Verdict::all(
        "Johnson cocycle",
        [
            j.check_defining(&phi, &g)?,
            j.check_cocycle_total(&phi, &psi)?,
            j.check_cocycle_tau1(&phi, &psi)?,
        ],
    );
    Ok((inputs, v))
}

fn trial_tau2_coboundary(
    cfg: &SuiteConfig,
    _t: usize,
    rng: &mut TrialRng,
) -> Result<(String, Verdict)> {
    let (theta, phi, psi) = random_pair(cfg, rng)?;
    let inputs = format!("{}; phi = {phi:?}; psi = {psi:?}", describe_theta(&theta));
    let j = Arc::new(Johnson::new(&theta)?);
    let (a, b) = (
        GroupElement::Aut(phi.clone()),
        GroupElement::Aut(psi.clone()),
    );
    let v = Verdict::all(
        "tau2 coboundary",
        [
            check_tau1_cocycle(&j, &a, &b)?,
            check_tau2_coboundary(&j, &a, &b)?,
            j.check_tau2_relation(&phi, &psi)?,
        ],
    );
    Ok((inputs, v))
}

fn trial_tau1_products(
    cfg: &SuiteConfig,
    _t: usize,
    rng: &mut TrialRng,
) -> Result<(String, Verdict)> {
    let (theta, phi, _) = random_pair(cfg, rng)?;
    let g = random_word(rng, cfg.rank, WORD_LEN);
    let inputs = format!("{}; phi = {phi:?}; gamma = {g}", describe_theta(&theta));
    Ok((inputs, Johnson::new(&theta)?.check_lemma22(&phi, &g)?))
}

fn trial_inner_closed_form(
    cfg: &SuiteConfig,
    _t: usize,
    rng: &mut TrialRng,
) -> Result<(String, Verdict)> {
    let theta = random_expansion(rng, cfg.rank, cfg.trunc, TERMS_PER_DEGREE)?;
    let g = random_word(rng, cfg.rank, WORD_LEN);
    let inputs = format!("{}; gamma = {g}", describe_theta(&theta));
    let max_p = (cfg.trunc - 1).min(4);
    Ok((inputs, Johnson::new(&theta)?.check_inner(&g, max_p)?))
}

/// A left-normed commutator of generators `[x_{i_1}, …, x_{i_d}]` with
/// `i_1 ≠ i_2`, conjugated by a random word; its depth is exactly `d`.
fn nested_commutator(rng: &mut TrialRng, n: usize, d: usize) -> Result<Word> {
    let a = rng.gen_range(0..n);
    let b = (a + rng.gen_range(1..n)) % n;
    let mut gens = vec![Word::generator(n, a)?];
    if d >= 2 {
        gens.push(Word::generator(n, b)?);
    }
    for _ in 2..d {
        gens.push(Word::generator(n, rng.gen_range(0..n))?);
    }
    let c = left_normed_commutator(&gens)?;
    let h = random_word(rng, n, 4);
    h.mul(&c)?.mul(&h.inv())
}

fn trial_lower_central(
    cfg: &SuiteConfig,
    t: usize,
    rng: &mut TrialRng,
) -> Result<(String, Verdict)> {
    let n = cfg.rank;
    let theta = random_expansion(rng, n, cfg.trunc, TERMS_PER_DEGREE)?;
    let d = 1 + t % cfg.trunc.min(4);
    let gamma = nested_commutator(rng, n, d)?;
    let delta = random_nontrivial_word(rng, n, WORD_LEN);
    let inputs = format!(
        "{}; gamma = {gamma}; delta = {delta}",
        describe_theta(&theta)
    );
    let mut parts = vec![Verdict::compare(
        format!("depth of a {d}-fold commutator"),
        &lcs_degree(&theta, &gamma)?,
        &LcsDepth::Exactly(d),
        |x| x.to_string(),
    )];
    // graded_image certifies the Lie property or fails
    let lie_ok = graded_image(&theta, &gamma, d).is_ok();
    parts.push(Verdict::compare(
        "graded image is Lie",
        &lie_ok,
        &true,
        |b| b.to_string(),
    ));
    if d < cfg.trunc {
        parts.push(check_commutator_formula(&theta, &gamma, &delta, d + 1)?);
        let c = Word::commutator(&gamma, &delta)?;
        if lcs_degree(&theta, &c)?.at_least(d + 1) {
            let ok = graded_image(&theta, &c, d + 1).is_ok();
            parts.push(Verdict::compare(
                "graded image of [gamma, delta] is Lie",
                &ok,
                &true,
                |b| b.to_string(),
            ));
        }
    }
    Ok((inputs, Verdict::all("lower central series", parts)))
}

fn trial_johnson_hom_independence(
    cfg: &SuiteConfig,
    _t: usize,
    rng: &mut TrialRng,
) -> Result<(String, Verdict)> {
    if cfg.trunc < 3 {
        return Err(Error::Precondition("thm31 needs N >= 3".into()));
    }
    let n = cfg.rank;
    let gens = MagnusGenerator::all(n);
    let pick = |rng: &mut TrialRng| -> Result<FreeGroupEndo> {
        let g = gens[rng.gen_range(0..gens.len())];
        g.endo(n)
    };
    let a = pick(rng)?;
    let b = pick(rng)?;
    let phi = FreeGroupEndo::commutator(&a, &b)?;
    let inputs = format!("phi = {phi:?}");
    let mut parts = Vec::new();
    let std = MagnusExpansion::standard(n, cfg.trunc)?;
    parts.push(Verdict::compare(
        "commutator lies in A(2)",
        &in_filtration_a(&std, &phi, 2)?,
        &true,
        |b| b.to_string(),
    ));
    let reference = johnson_hom(&std, &phi, 2)?;
    for _ in 0..5 {
        let theta = random_expansion(rng, n, cfg.trunc, TERMS_PER_DEGREE)?;
        parts.push(Verdict::compare(
            format!(
                "tau_2(phi) = tau^theta_2(phi) for {}",
                describe_theta(&theta)
            ),
            &reference,
            &Johnson::new(&theta)?.component(&phi, 2)?,
            |m| m.render(),
        ));
        parts.push(Verdict::compare(
            "johnson_hom independent of theta",
            &reference,
            &johnson_hom(&theta, &phi, 2)?,
            |m| m.render(),
        ));
    }
    Ok((inputs, Verdict::all("Johnson homomorphism", parts)))
}

fn trial_tau1_matrix(cfg: &SuiteConfig, t: usize, rng: &mut TrialRng) -> Result<(String, Verdict)> {
    if t < 3 {
        let n = 3 + t;
        let m = tau1_matrix(n)?;
        let det = m.det()?;
        let mut parts = vec![
            Verdict::compare(
                "signed permutation",
                &m.is_signed_permutation(),
                &true,
                |b| b.to_string(),
            ),
            Verdict::compare(
                "|det| = 1",
                &(det.is_one() || (-&det).is_one()),
                &true,
                |b| b.to_string(),
            ),
        ];
        for (r, g) in MagnusGenerator::all(n).into_iter().enumerate() {
            let row: Vec<Scalar> = (0..m.cols()).map(|c| m.get(r, c).clone()).collect();
            let expect: Vec<Scalar> = predicted_row(n, g)
                .into_iter()
                .map(Scalar::from_int)
                .collect();
            parts.push(Verdict::compare(
                format!("row {}", g.label()),
                &row,
                &expect,
                |v| format!("{v:?}"),
            ));
        }
        return Ok((format!("n = {n}"), Verdict::all("tau1 matrix", parts)));
    }
    let n = cfg.rank;
    let gens = MagnusGenerator::all(n);
    let len = rng.gen_range(1..=6);
    let word: IaWord = (0..len)
        .map(|_| {
            let g = gens[rng.gen_range(0..gens.len())];
            (g, if rng.gen_bool(0.5) { 1 } else { -1 })
        })
        .collect();
    let text: Vec<String> = word
        .iter()
        .map(|(g, e)| format!("{}^{e}", g.label()))
        .collect();
    let inputs = format!("word = {}", text.join("*"));
    let ok = abelianize_ia_word(&word, n).is_ok();
    Ok((
        inputs,
        Verdict::compare("additive coordinates match tau1", &ok, &true, |b| {
            b.to_string()
        }),
    ))
}

fn trial_inner_tau1(cfg: &SuiteConfig, t: usize, rng: &mut TrialRng) -> Result<(String, Verdict)> {
    let n = 2 + t % 4;
    let theta = random_expansion(rng, n, cfg.trunc, TERMS_PER_DEGREE)?;
    let j = Johnson::new(&theta)?;
    let g = random_word(rng, n, WORD_LEN);
    let inputs = format!("n = {n}; {}; gamma = {g}", describe_theta(&theta));
    let mut parts = Vec::new();
    for i in 0..n {
        let x = Word::generator(n, i)?;
        let t1 = j.component(&FreeGroupEndo::inner(&x), 1)?;
        parts.push(Verdict::compare(
            format!("tau1(inner(x{})) = iota_*(X{})", i + 1, i + 1),
            &t1,
            &iota_star(&Tensor::basis(n, i))?,
            |m| m.render(),
        ));
        parts.push(Verdict::compare(
            format!("r1(tau1(inner(x{}))) = (1-n)X{}", i + 1, i + 1),
            &contraction_r(1, &t1)?,
            &Tensor::basis(n, i).scale(&Scalar::from_int(1 - n as i64)),
            Tensor::render,
        ));
    }
    parts.push(Verdict::compare(
        "tau1(inner(gamma)) = iota_*([gamma])",
        &j.component(&FreeGroupEndo::inner(&g), 1)?,
        &iota_star(&theta.component(&g, 1)?)?,
        |m| m.render(),
    ));
    Ok((inputs, Verdict::all("inner automorphisms", parts)))
}

fn trial_surface(cfg: &SuiteConfig, t: usize, rng: &mut TrialRng) -> Result<(String, Verdict)> {
    let g = 1 + t % 3;
    let s = SurfaceContext::new(g)?;
    let n = s.rank();
    let theta = if t < 3 {
        MagnusExpansion::standard(n, cfg.trunc)?
    } else {
        random_expansion(rng, n, cfg.trunc, TERMS_PER_DEGREE)?
    };
    let h = random_word(rng, n, WORD_LEN);
    let inputs = format!("g = {g}; {}; conjugator = {h}", describe_theta(&theta));
    let w0 = s.boundary_word();
    let mut parts = vec![s.theta2_w0_check(&theta)?];
    let conj = h.mul(&w0)?.mul(&h.inv())?;
    parts.push(Verdict::compare(
        "theta2 of a conjugate of w0",
        &theta.component(&conj, 2)?,
        s.intersection_form(),
        Tensor::render,
    ));
    parts.push(Verdict::compare("nu0(w0) = -1", &s.nu0(&w0)?, &-1, |v| {
        v.to_string()
    }));
    parts.push(Verdict::compare(
        "nu0 of a conjugate of w0",
        &s.nu0(&conj)?,
        &-1,
        |v| v.to_string(),
    ));
    let prod = conj.mul(&w0.inv())?.mul(&conj)?;
    parts.push(Verdict::compare("nu0 additive", &s.nu0(&prod)?, &-1, |v| {
        v.to_string()
    }));
    if g == 1 {
        let torus = Word::parse("x2*x1*x2^-1*x1^-1", 2)?;
        parts.push(Verdict::compare(
            "nu0(x2x1x2^-1x1^-1) = 1",
            &s.nu0(&torus)?,
            &1,
            |v| v.to_string(),
        ));
    }
    if g <= 2 && cfg.trunc >= 3 {
        parts.push(s.tau2_boundary_check(&theta)?);
    }
    Ok((inputs, Verdict::all("surface", parts)))
}

fn random_semidirect(rng: &mut TrialRng, n: usize, lib: &[FreeGroupEndo]) -> Result<GroupElement> {
    let w = random_word(rng, n, WORD_LEN);
    let phi = if rng.gen_bool(0.25) {
        FreeGroupEndo::inner(&random_word(rng, n, 3))
    } else {
        random_product(rng, lib, PRODUCT_LEN)?
    };
    Ok(GroupElement::Semidirect(w, phi))
}

fn trial_semidirect(cfg: &SuiteConfig, _t: usize, rng: &mut TrialRng) -> Result<(String, Verdict)> {
    let n = cfg.rank;
    let theta = random_expansion(rng, n, cfg.trunc, TERMS_PER_DEGREE)?;
    let lib = auts(n)?;
    let a = random_semidirect(rng, n, &lib)?;
    let b = random_semidirect(rng, n, &lib)?;
    let inputs = format!("{}; g1 = {a:?}; g2 = {b:?}", describe_theta(&theta));
    let j = Arc::new(Johnson::new(&theta)?);
    Ok((inputs, check_eq49(&j, &a, &b)?))
}

fn trial_dsquare(cfg: &SuiteConfig, _t: usize, rng: &mut TrialRng) -> Result<(String, Verdict)> {
    let n = cfg.rank;
    let theta = random_expansion(rng, n, cfg.trunc, TERMS_PER_DEGREE)?;
    let j = Arc::new(Johnson::new(&theta)?);
    let lib = auts(n)?;
    let autos = (0..3)
        .map(|_| random_product(rng, &lib, 1).map(GroupElement::Aut))
        .collect::<Result<Vec<_>>>()?;
    let semis = (0..4)
        .map(|_| random_semidirect(rng, n, &lib))
        .collect::<Result<Vec<_>>>()?;
    let inputs = format!(
        "{}; autos = {autos:?}; semidirect = {semis:?}",
        describe_theta(&theta)
    );
    let t1 = tau_cochain(j.clone(), 1);
    let t2 = tau_cochain(j.clone(), 2);
    let k = k0_cochain(n);
    let th = theta2_tilde_cochain(j.clone());
    let parts = vec![
        check_dsquare(&t2, &autos)?,
        check_dsquare(&th, &semis[..3])?,
        check_dsquare(&cup(&k, &k, Pairing::Tensor)?, &semis)?,
        check_leibniz(&t1, &t2, Pairing::Tensor, &autos)?,
        check_leibniz(&k, &th, Pairing::Tensor, &semis[..3])?,
        check_leibniz(&t1, &k, Pairing::Compose, &semis[..3])?,
    ];
    Ok((inputs, Verdict::all("cochain algebra", parts)))
}

fn trial_stasheff(cfg: &SuiteConfig, t: usize, rng: &mut TrialRng) -> Result<(String, Verdict)> {
    let p = t % 9;
    let verts = stasheff_vertices(p);
    let mut parts = vec![
        Verdict::compare(
            format!("|S0_{p}| = Catalan({p})"),
            &(verts.len() as u64),
            &catalan(p),
            |v| v.to_string(),
        ),
        Verdict::compare(
            "sgn(left comb) = 1",
            &ParenWord::left_comb(p).sgn(),
            &1,
            |v| v.to_string(),
        ),
    ];
    let q = 1 + t % (cfg.trunc - 1).min(3);
    let n = cfg.rank;
    let theta = random_expansion(rng, n, cfg.trunc, TERMS_PER_DEGREE)?;
    let j = Arc::new(Johnson::new(&theta)?);
    let lib = auts(n)?;
    let args = (0..q)
        .map(|_| random_product(rng, &lib, 1).map(GroupElement::Aut))
        .collect::<Result<Vec<_>>>()?;
    let h = h_word_cochain(&j, &ParenWord::left_comb(q))?;
    parts.push(Verdict::compare(
        format!("h(left comb) = sigma_{q}(tau1, ...)"),
        &h.eval(&args)?,
        &sigma_tau1(&j, &args)?,
        |m| m.render(),
    ));
    let inputs = format!(
        "p = {p}; q = {q}; {}; args = {args:?}",
        describe_theta(&theta)
    );
    Ok((inputs, Verdict::all("Stasheff", parts)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_small() {
        for name in SUITES {
            let cfg = SuiteConfig {
                rank: 2,
                trunc: 4,
                trials: 4,
                seed: 3,
            };
            let r = run_suite(name, &cfg).unwrap();
            assert!(r.all_passed(), "{name}: {:?}", r.first_failure);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = SuiteConfig {
            rank: 3,
            trunc: 3,
            trials: 6,
            seed: 42,
        };
        let a = serde_json::to_string(&run_suite("eq24", &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite("eq24", &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_suite() {
        let cfg = SuiteConfig {
            rank: 3,
            trunc: 3,
            trials: 1,
            seed: 0,
        };
        assert!(matches!(
            run_suite("eq99", &cfg),
            Err(Error::UnknownKind(_))
        ));
    }
}
