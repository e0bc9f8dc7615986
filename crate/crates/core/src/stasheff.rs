//! Full parenthesizations of `p+1` letters (vertices of the Stasheff
//! associahedron), their signs, and the cochains `h(w)` built from `τ^θ₁`.

use std::fmt;
use std::sync::Arc;

use crate::cochain::{cup, identity_cochain, tau_cochain, Cochain, GroupElement, Pairing};
use crate::error::{Error, Result};
use crate::johnson::Johnson;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ParenWord {
    Leaf,
    Node(Box<ParenWord>, Box<ParenWord>),
}

impl ParenWord {
    pub fn node(a: ParenWord, b: ParenWord) -> ParenWord {
        ParenWord::Node(Box::new(a), Box::new(b))
    }

    /// `|w|`: number of leaves minus one.
    pub fn size(&self) -> usize {
        match self {
            ParenWord::Leaf => 0,
            ParenWord::Node(a, b) => a.size() + b.size() + 1,
        }
    }

    /// `sgn(1) = 1`, `sgn((w₁,w₂)) = (-1)^{|w₂|} sgn(w₁) sgn(w₂)`.
    pub fn sgn(&self) -> i64 {
        match self {
            ParenWord::Leaf => 1,
            ParenWord::Node(a, b) => {
                let s = a.sgn() * b.sgn();
                if b.size() % 2 == 1 {
                    -s
                } else {
                    s
                }
            }
        }
    }

    /// `((…((12)3)…)(p+1))`.
    pub fn left_comb(p: usize) -> ParenWord {
        (0..p).fold(ParenWord::Leaf, |acc, _| {
            ParenWord::node(acc, ParenWord::Leaf)
        })
    }

    /// Text form with leaves numbered left to right, e.g. `((12)3)`.
    pub fn render(&self) -> String {
        let mut next = 1;
        self.render_from(&mut next)
    }

    fn render_from(&self, next: &mut usize) -> String {
        match self {
            ParenWord::Leaf => {
                let s = next.to_string();
                *next += 1;
                s
            }
            ParenWord::Node(a, b) => {
                let l = a.render_from(next);
                let r = b.render_from(next);
                format!("({l}{r})")
            }
        }
    }
}

impl fmt::Debug for ParenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for ParenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `S⁰_p = ⊔_{q=0}^{p-1} S⁰_q × S⁰_{p-q-1}`, listed by increasing `q`.
pub fn stasheff_vertices(p: usize) -> Vec<ParenWord> {
    let mut table: Vec<Vec<ParenWord>> = vec![vec![ParenWord::Leaf]];
    for k in 1..=p {
        let mut level = Vec::new();
        for q in 0..k {
            for a in &table[q] {
                for b in &table[k - q - 1] {
                    level.push(ParenWord::node(a.clone(), b.clone()));
                }
            }
        }
        table.push(level);
    }
    table.swap_remove(p)
}

/// `h(1) = 1_H`, `h((w₁,w₂)) = (h(w₁) ⊗ h(w₂)) ∘ τ^θ₁` realized by cup
/// products: the factors `h(w₁)`, `h(w₂)` take the first `|w₁| + |w₂|`
/// arguments and `τ^θ₁` the last one.
pub fn h_word_cochain(j: &Arc<Johnson>, w: &ParenWord) -> Result<Cochain> {
    if w.size() + 1 > j.trunc() {
        return Err(Error::DegreeOutOfRange {
            degree: w.size(),
            max: j.trunc() - 1,
        });
    }
    build_h(j, w)
}

fn build_h(j: &Arc<Johnson>, w: &ParenWord) -> Result<Cochain> {
    match w {
        ParenWord::Leaf => identity_cochain(j.rank()),
        ParenWord::Node(a, b) => {
            let pair = cup(&build_h(j, a)?, &build_h(j, b)?, Pairing::Tensor)?;
            let out = cup(&pair, &tau_cochain(j.clone(), 1), Pairing::Compose)?;
            Ok(rename(out, format!("h{}", w.render())))
        }
    }
}

fn rename(c: Cochain, name: String) -> Cochain {
    let inner = c.clone();
    Cochain::new(name, c.rank(), c.arity(), c.module(), move |a| {
        inner.eval(a)
    })
}

/// `ς_p(τ₁(g₁), g₁·τ₁(g₂), …, (g₁⋯g_{p-1})·τ₁(g_p))`.
pub fn sigma_tau1(j: &Arc<Johnson>, args: &[GroupElement]) -> Result<crate::tensor_map::TensorMap> {
    let mut us = Vec::with_capacity(args.len());
    let mut prefix: Option<GroupElement> = None;
    for g in args {
        let t = j.component(g.aut(), 1)?;
        us.push(match &prefix {
            Some(h) => h.act(&t)?,
            None => t,
        });
        prefix = Some(match prefix {
            Some(h) => h.mul(g)?,
            None => g.clone(),
        });
    }
    crate::cochain::compose_sigma(&us)
}

/// Catalan number `C_p = binom(2p, p) / (p+1)`.
pub fn catalan(p: usize) -> u64 {
    let mut c: u64 = 1;
    for k in 0..p as u64 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aut::{generator_library, FreeGroupEndo};
    use crate::magnus::{xi_monomial, MagnusExpansion};

    #[test]
    fn vertex_counts() {
        assert_eq!(stasheff_vertices(0).len(), 1);
        for p in 1..=8 {
            assert_eq!(stasheff_vertices(p).len() as u64, catalan(p));
        }
        assert_eq!(catalan(3), 5);
    }

    #[test]
    fn rendering_and_order() {
        let v: Vec<String> = stasheff_vertices(2).iter().map(ParenWord::render).collect();
        assert_eq!(v, ["(1(23))", "((12)3)"]);
        assert_eq!(ParenWord::left_comb(3).render(), "(((12)3)4)");
    }

    #[test]
    fn signs() {
        for p in 0..=8 {
            assert_eq!(ParenWord::left_comb(p).sgn(), 1);
        }
        let w = ParenWord::node(ParenWord::Leaf, ParenWord::left_comb(1));
        assert_eq!(w.render(), "(1(23))");
        assert_eq!(w.sgn(), -1);
        assert_eq!(ParenWord::left_comb(1).sgn(), 1);
    }

    #[test]
    fn h_cochains() {
        let th = MagnusExpansion::new(xi_monomial(3, 4, 1, &[0, 2], 1).unwrap()).unwrap();
        let j = Arc::new(Johnson::new(&th).unwrap());
        let lib: Vec<FreeGroupEndo> = generator_library("nielsen", 3)
            .unwrap()
            .into_iter()
            .chain(generator_library("magnus-K", 3).unwrap())
            .map(|e| e.endo)
            .collect();
        let args: Vec<GroupElement> = [1, 8, 15]
            .iter()
            .map(|&i| GroupElement::Aut(lib[i].clone()))
            .collect();
        let h1 = h_word_cochain(&j, &ParenWord::left_comb(1)).unwrap();
        assert_eq!(h1.arity(), 1);
        assert_eq!(
            h1.eval(&args[..1]).unwrap(),
            j.component(&lib[1], 1).unwrap()
        );
        for p in 2..=3 {
            let h = h_word_cochain(&j, &ParenWord::left_comb(p)).unwrap();
            assert_eq!(h.arity(), p);
            assert_eq!(
                h.eval(&args[..p]).unwrap(),
                sigma_tau1(&j, &args[..p]).unwrap()
            );
        }
        for w in stasheff_vertices(3) {
            assert_eq!(h_word_cochain(&j, &w).unwrap().arity(), 3);
        }
        assert!(h_word_cochain(&j, &ParenWord::left_comb(4)).is_err());
    }
}
