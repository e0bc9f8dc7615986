//! Normalized group cochains with tensor coefficients.
//!
//! Groups are `Aut(F_n)` and the semidirect product `F_n ⋊ Aut(F_n)` with
//! `(γ₁,φ₁)(γ₂,φ₂) = (γ₁φ₁(γ₂), φ₁φ₂)`. Coefficients are spaces
//! `Hom(H^{⊗a}, H^{⊗b})` on which an element acts through `|φ|`. Cochains
//! are evaluators, never tables.

use std::fmt;
use std::sync::Arc;

use crate::aut::FreeGroupEndo;
use crate::check::Verdict;
use crate::error::{Error, Result};
use crate::johnson::{Johnson, Linear};
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use crate::tensor_map::TensorMap;
use crate::word::Word;

#[derive(Clone, PartialEq, Eq)]
pub enum GroupElement {
    Aut(FreeGroupEndo),
    Semidirect(Word, FreeGroupEndo),
}

impl GroupElement {
    pub fn rank(&self) -> usize {
        self.aut().rank()
    }

    pub fn aut(&self) -> &FreeGroupEndo {
        match self {
            GroupElement::Aut(phi) | GroupElement::Semidirect(_, phi) => phi,
        }
    }

    pub fn word(&self) -> Result<&Word> {
        match self {
            GroupElement::Semidirect(w, _) => Ok(w),
            GroupElement::Aut(_) => Err(Error::WrongElementKind(
                "expected an element of the semidirect product".into(),
            )),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Aut(phi) => phi.is_identity(),
            GroupElement::Semidirect(w, phi) => w.is_identity() && phi.is_identity(),
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (GroupElement::Aut(a), GroupElement::Aut(b)) => Ok(GroupElement::Aut(a.compose(b)?)),
            (GroupElement::Semidirect(g1, p1), GroupElement::Semidirect(g2, p2)) => Ok(
                GroupElement::Semidirect(g1.mul(&p1.apply(g2)?)?, p1.compose(p2)?),
            ),
            _ => Err(Error::WrongElementKind("mixed group element kinds".into())),
        }
    }

    /// The action on coefficients, through `|φ|`.
    pub fn act(&self, v: &TensorMap) -> Result<TensorMap> {
        if self.aut().is_identity() {
            return Ok(v.clone());
        }
        Linear::of(self.aut())?.act(v)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Aut(phi) => write!(f, "{phi:?}"),
            GroupElement::Semidirect(w, phi) => write!(f, "({w}, {phi:?})"),
        }
    }
}

/// The coefficient space `Hom(H^{⊗src}, H^{⊗dst})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoeffModule {
    pub src: usize,
    pub dst: usize,
}

/// How the two values of a cup product are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pairing {
    /// `f ⊗ g`.
    Tensor,
    /// `f ∘ g`.
    Compose,
}

type Evaluator = dyn Fn(&[GroupElement]) -> Result<TensorMap> + Send + Sync;

#[derive(Clone)]
pub struct Cochain {
    name: String,
    rank: usize,
    arity: usize,
    module: CoeffModule,
    eval: Arc<Evaluator>,
}

impl Cochain {
    pub fn new<F>(
        name: impl Into<String>,
        rank: usize,
        arity: usize,
        module: CoeffModule,
        f: F,
    ) -> Self
    where
        F: Fn(&[GroupElement]) -> Result<TensorMap> + Send + Sync + 'static,
    {
        Cochain {
            name: name.into(),
            rank,
            arity,
            module,
            eval: Arc::new(f),
        }
    }

    /// A 0-cochain.
    pub fn constant(name: impl Into<String>, value: TensorMap) -> Self {
        let module = CoeffModule {
            src: value.src(),
            dst: value.dst(),
        };
        let rank = value.rank();
        Cochain::new(name, rank, 0, module, move |_| Ok(value.clone()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn module(&self) -> CoeffModule {
        self.module
    }

    pub fn eval(&self, args: &[GroupElement]) -> Result<TensorMap> {
        if args.len() != self.arity {
            return Err(Error::ShapeMismatch(format!(
                "{} takes {} arguments, got {}",
                self.name,
                self.arity,
                args.len()
            )));
        }
        let v = (self.eval)(args)?;
        if v.src() != self.module.src || v.dst() != self.module.dst || v.rank() != self.rank {
            return Err(Error::ShapeMismatch(format!(
                "{} returned a value outside its coefficient module",
                self.name
            )));
        }
        Ok(v)
    }

    pub fn zero_value(&self) -> TensorMap {
        TensorMap::zero(self.rank, self.module.src, self.module.dst).expect("module fits")
    }

    /// Vanishing whenever some argument is the identity, checked at each
    /// position of the given tuple.
    pub fn check_normalized(&self, args: &[GroupElement]) -> Result<bool> {
        let Some(first) = args.first() else {
            return Ok(true);
        };
        let id = match first {
            GroupElement::Aut(_) => GroupElement::Aut(FreeGroupEndo::identity(self.rank)),
            GroupElement::Semidirect(..) => GroupElement::Semidirect(
                Word::identity(self.rank),
                FreeGroupEndo::identity(self.rank),
            ),
        };
        for k in 0..args.len() {
            let mut a = args.to_vec();
            a[k] = id.clone();
            if !self.eval(&a)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn neg(&self) -> Cochain {
        let f = self.clone();
        Cochain::new(
            format!("-{}", self.name),
            self.rank,
            self.arity,
            self.module,
            move |a| Ok(f.eval(a)?.neg()),
        )
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        if self.arity != other.arity || self.module != other.module || self.rank != other.rank {
            return Err(Error::ShapeMismatch(format!(
                "cannot add {} and {}",
                self.name, other.name
            )));
        }
        let (f, g) = (self.clone(), other.clone());
        Ok(Cochain::new(
            format!("({} + {})", self.name, other.name),
            self.rank,
            self.arity,
            self.module,
            move |a| f.eval(a)?.try_add(&g.eval(a)?),
        ))
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Cochain({}, arity {}, Hom(H^{}, H^{}))",
            self.name, self.arity, self.module.src, self.module.dst
        )
    }
}

fn product(args: &[GroupElement]) -> Result<Option<GroupElement>> {
    let mut it = args.iter();
    let Some(first) = it.next() else {
        return Ok(None);
    };
    it.try_fold(first.clone(), |acc, g| acc.mul(g)).map(Some)
}

/// `(df)(g₁,…,g_{p+1}) = g₁·f(g₂,…) + Σ_i (-1)^i f(…, g_i g_{i+1}, …)
/// + (-1)^{p+1} f(g₁,…,g_p)`.
pub fn coboundary(f: &Cochain) -> Cochain {
    let p = f.arity;
    let g = f.clone();
    Cochain::new(format!("d{}", f.name), f.rank, p + 1, f.module, move |a| {
        let mut acc = a[0].act(&g.eval(&a[1..])?)?;
        for i in 1..=p {
            let mut merged: Vec<GroupElement> = a[..i - 1].to_vec();
            merged.push(a[i - 1].mul(&a[i])?);
            merged.extend_from_slice(&a[i + 1..]);
            let term = g.eval(&merged)?;
            acc = if i % 2 == 1 {
                acc.try_sub(&term)?
            } else {
                acc.try_add(&term)?
            };
        }
        let last = g.eval(&a[..p])?;
        if (p + 1) % 2 == 1 {
            acc.try_sub(&last)
        } else {
            acc.try_add(&last)
        }
    })
}

/// Alexander–Whitney cup product
/// `(f∪g)(g₁,…,g_{p+q}) = f(g₁,…,g_p) · (g₁⋯g_p)·g(g_{p+1},…,g_{p+q})`.
pub fn cup(f: &Cochain, g: &Cochain, pairing: Pairing) -> Result<Cochain> {
    if f.rank != g.rank {
        return Err(Error::RankMismatch(f.rank, g.rank));
    }
    let module = match pairing {
        Pairing::Tensor => CoeffModule {
            src: f.module.src + g.module.src,
            dst: f.module.dst + g.module.dst,
        },
        Pairing::Compose => {
            if f.module.src != g.module.dst {
                return Err(Error::ShapeMismatch(format!(
                    "cannot compose values of {} after values of {}",
                    f.name, g.name
                )));
            }
            CoeffModule {
                src: g.module.src,
                dst: f.module.dst,
            }
        }
    };
    let p = f.arity;
    let (ff, gg) = (f.clone(), g.clone());
    let op = match pairing {
        Pairing::Tensor => "x",
        Pairing::Compose => "o",
    };
    Ok(Cochain::new(
        format!("({} u{op} {})", f.name, g.name),
        f.rank,
        f.arity + g.arity,
        module,
        move |a| {
            let left = ff.eval(&a[..p])?;
            let mut right = gg.eval(&a[p..])?;
            if let Some(h) = product(&a[..p])? {
                right = h.act(&right)?;
            }
            match pairing {
                Pairing::Tensor => left.tensor(&right),
                Pairing::Compose => left.compose(&right),
            }
        },
    ))
}

/// `k₀(γ, φ) = [γ]`.
pub fn k0(e: &GroupElement) -> Result<Tensor> {
    let w = e.word()?;
    let ex = w.exponent_sums();
    Tensor::from_terms(
        w.rank(),
        1,
        ex.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (vec![i], Scalar::from_int(c))),
    )
}

/// `k₀` as a 1-cochain on the semidirect product with values in `H`.
pub fn k0_cochain(rank: usize) -> Cochain {
    Cochain::new("k0", rank, 1, CoeffModule { src: 0, dst: 1 }, |a| {
        Ok(TensorMap::from_tensor(k0(&a[0])?))
    })
}

/// `τ^θ_p` as a 1-cochain (on the semidirect product it factors through
/// the projection to `Aut(F_n)`).
pub fn tau_cochain(j: Arc<Johnson>, p: usize) -> Cochain {
    let rank = j.rank();
    Cochain::new(
        format!("tau{p}"),
        rank,
        1,
        CoeffModule { src: 1, dst: p + 1 },
        move |a| j.component(a[0].aut(), p),
    )
}

/// `τ^θ₁ ⊗ 1 + 1 ⊗ τ^θ₁` with values in `Hom(H^{⊗2}, H^{⊗3})`.
pub fn tau1_derivation_cochain(j: Arc<Johnson>) -> Cochain {
    let rank = j.rank();
    Cochain::new(
        "(tau1x1 + 1xtau1)",
        rank,
        1,
        CoeffModule { src: 2, dst: 3 },
        move |a| {
            let t = j.component(a[0].aut(), 1)?;
            let id = TensorMap::identity(t.rank(), 1)?;
            t.tensor(&id)?.try_add(&id.tensor(&t)?)
        },
    )
}

/// `θ̃₂(γφ) = θ₂(γ)` on the semidirect product.
pub fn theta2_tilde_cochain(j: Arc<Johnson>) -> Cochain {
    let rank = j.rank();
    Cochain::new(
        "theta2~",
        rank,
        1,
        CoeffModule { src: 0, dst: 2 },
        move |a| {
            Ok(TensorMap::from_tensor(
                j.theta().component(a[0].word()?, 2)?,
            ))
        },
    )
}

/// The identity `1_H` as a 0-cochain.
pub fn identity_cochain(rank: usize) -> Result<Cochain> {
    Ok(Cochain::constant("1", TensorMap::identity(rank, 1)?))
}

/// `r_p: H^* ⊗ H^{⊗(p+1)} → H^{⊗p}`, `f⊗v₀⊗v₁⊗…⊗v_p ↦ f(v₀) v₁⊗…⊗v_p`.
pub fn contraction_r(p: usize, u: &TensorMap) -> Result<Tensor> {
    if u.src() != 1 || u.dst() != p + 1 {
        return Err(Error::ShapeMismatch(format!(
            "r_{p} needs an element of H^* ⊗ H^{}, got Hom(H^{}, H^{})",
            p + 1,
            u.src(),
            u.dst()
        )));
    }
    u.contract()
}

/// `ς_p(u₁,…,u_p) = (u₁⊗1^{⊗(p-1)}) ∘ ⋯ ∘ (u_{p-1}⊗1) ∘ u_p` for
/// `u_k: H → H^{⊗2}`; `ς₁` is the identity.
pub fn compose_sigma(us: &[TensorMap]) -> Result<TensorMap> {
    let (last, rest) = us
        .split_last()
        .ok_or_else(|| Error::Precondition("compose_sigma needs p >= 1".into()))?;
    for u in us {
        if u.src() != 1 || u.dst() != 2 {
            return Err(Error::ShapeMismatch(
                "compose_sigma takes maps H -> H^2".into(),
            ));
        }
    }
    let mut acc = last.clone();
    for (k, u) in rest.iter().enumerate().rev() {
        let pad = TensorMap::identity(u.rank(), rest.len() - k)?;
        acc = u.tensor(&pad)?.compose(&acc)?;
    }
    Ok(acc)
}

fn render_args(args: &[GroupElement]) -> String {
    let parts: Vec<String> = args.iter().map(|g| format!("{g:?}")).collect();
    parts.join(", ")
}

fn compare_values(
    identity: &str,
    args: &[GroupElement],
    lhs: &TensorMap,
    rhs: &TensorMap,
) -> Verdict {
    Verdict::compare(
        format!("{identity} at [{}]", render_args(args)),
        lhs,
        rhs,
        TensorMap::render,
    )
}

/// `dθ̃₂ = -(τ^θ₁ ∘ k₀ + k₀^{⊗2})` on a pair of semidirect elements.
pub fn check_eq49(j: &Arc<Johnson>, g1: &GroupElement, g2: &GroupElement) -> Result<Verdict> {
    let rank = j.rank();
    let args = [g1.clone(), g2.clone()];
    let lhs = coboundary(&theta2_tilde_cochain(j.clone())).eval(&args)?;
    let k = k0_cochain(rank);
    let rhs = cup(&tau_cochain(j.clone(), 1), &k, Pairing::Compose)?
        .add(&cup(&k, &k, Pairing::Tensor)?)?
        .neg()
        .eval(&args)?;
    Ok(compare_values(
        "d theta2~ = -(tau1 o k0 + k0 x k0)",
        &args,
        &lhs,
        &rhs,
    ))
}

/// `-dτ^θ₂ = (τ^θ₁⊗1 + 1⊗τ^θ₁) ∪ τ^θ₁` on a pair of automorphisms.
pub fn check_tau2_coboundary(
    j: &Arc<Johnson>,
    g1: &GroupElement,
    g2: &GroupElement,
) -> Result<Verdict> {
    let args = [g1.clone(), g2.clone()];
    let lhs = coboundary(&tau_cochain(j.clone(), 2)).neg().eval(&args)?;
    let rhs = cup(
        &tau1_derivation_cochain(j.clone()),
        &tau_cochain(j.clone(), 1),
        Pairing::Compose,
    )?
    .eval(&args)?;
    Ok(compare_values(
        "-d tau2 = (tau1x1 + 1xtau1) u tau1",
        &args,
        &lhs,
        &rhs,
    ))
}

/// `dτ^θ₁ = 0` on a pair.
pub fn check_tau1_cocycle(
    j: &Arc<Johnson>,
    g1: &GroupElement,
    g2: &GroupElement,
) -> Result<Verdict> {
    let args = [g1.clone(), g2.clone()];
    let f = coboundary(&tau_cochain(j.clone(), 1));
    let lhs = f.eval(&args)?;
    Ok(compare_values("d tau1 = 0", &args, &lhs, &f.zero_value()))
}

/// `d(df) = 0` on a tuple of length `arity + 2`.
pub fn check_dsquare(f: &Cochain, args: &[GroupElement]) -> Result<Verdict> {
    let dd = coboundary(&coboundary(f));
    let lhs = dd.eval(args)?;
    Ok(compare_values(
        &format!("dd{} = 0", f.name),
        args,
        &lhs,
        &dd.zero_value(),
    ))
}

/// `d(f∪g) = df∪g + (-1)^p f∪dg`.
pub fn check_leibniz(
    f: &Cochain,
    g: &Cochain,
    pairing: Pairing,
    args: &[GroupElement],
) -> Result<Verdict> {
    let lhs = coboundary(&cup(f, g, pairing)?).eval(args)?;
    let a = cup(&coboundary(f), g, pairing)?;
    let b = cup(f, &coboundary(g), pairing)?;
    let b = if f.arity % 2 == 1 { b.neg() } else { b };
    let rhs = a.add(&b)?.eval(args)?;
    Ok(compare_values(
        &format!("Leibniz for {} and {}", f.name, g.name),
        args,
        &lhs,
        &rhs,
    ))
}
