//! Coalgebra structure on `H_0`, root vectors, `u`-elements, and the
//! presentations `H_0 / I` on which identities are checked.

mod checks;
mod structure;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::datum::{derived, DatumError, DerivedScalars, LinkingDatum, Root, RootParameterFamily};
use crate::ncalg::{
    relations, root_vector, u_element, CompletionError, Ctx, Flavor, Monomial, Reduced, Relation, RewriteSystem,
    SmashContext, SmashElement, Tensor, TensorKey, Word,
};
use crate::par::Execution;
use crate::scalars::CycScalar;

pub use checks::{
    antipode_recursion_suite, central_suite, check_antipode_recursion, check_commutation, check_delroot,
    check_hopf_ideal, commutation_cases, commutation_suite, delroot_suite, hopf_ideal_suite, CommutationCase,
    CommutationKind, CommutationSelector, TechcomCase,
};
pub use structure::{hopf_axioms_suite, normal_form_suite, random_element};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HopfError {
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error(transparent)]
    Completion(#[from] CompletionError),
    #[error("quotient operations need a certified Hopf ideal: {0}")]
    NotCertified(String),
    #[error("{0}")]
    Invalid(String),
}

/// Longest word whose coproduct is expanded by subsets.
const MAX_COPRODUCT_DEGREE: usize = 24;

/// `Δ(a_{i_1} ⋯ a_{i_n} g)` as triples `(left, right, ζ-exponent)`.
///
/// The subset `S` of positions sent to the right leg contributes
/// `∏_{p ∈ S, m ∉ S, m > p} χ_{i_m}(g_{i_p})` from moving the group-likes
/// `g_{i_p}` left of the later letters on the left leg.
pub fn coproduct_monomial(ctx: &Ctx, m: &Monomial) -> Vec<(Monomial, Monomial, u64)> {
    let w = &m.word;
    let n = w.len();
    assert!(n <= MAX_COPRODUCT_DEGREE, "coproduct of a word of length {n}");
    let letter_g: Vec<u32> = w.iter().map(|&l| ctx.letter_group(l as usize)).collect();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u32..(1u32 << n) {
        let mut left = Word::new();
        let mut right = Word::new();
        let mut g = 0u32;
        let mut exp = 0u64;
        for p in 0..n {
            if mask >> p & 1 == 1 {
                right.push(w[p]);
                g = ctx.gmul(g, letter_g[p]);
                for q in p + 1..n {
                    if mask >> q & 1 == 0 {
                        exp += ctx.char_exp(w[q] as usize, letter_g[p]) as u64;
                    }
                }
            } else {
                left.push(w[p]);
            }
        }
        out.push((Monomial { word: left, g: ctx.gmul(g, m.g) }, Monomial { word: right, g: m.g }, exp));
    }
    out
}

fn coproduct_tensor(ctx: &Ctx, m: &Monomial) -> Tensor {
    let mut t = Tensor::zero(vec![ctx.clone(), ctx.clone()]);
    let one = ctx.field().one();
    for (l, r, e) in coproduct_monomial(ctx, m) {
        t.add_term(TensorKey::from_iter([l, r]), one.mul_zeta(e as i64));
    }
    t
}

/// `Δ` on `H_0`: `Δ(g) = g ⊗ g`, `Δ(a_i) = a_i ⊗ 1 + g_i ⊗ a_i`.
pub fn coproduct(x: &SmashElement) -> Tensor {
    let ctx = x.ctx();
    let t = Tensor::pure(&[x]);
    if t.is_zero() {
        return Tensor::zero(vec![ctx.clone(), ctx.clone()]);
    }
    t.expand_leg(0, |m| coproduct_tensor(ctx, m))
}

/// Iterated coproduct with `legs` tensor factors (`legs ≥ 1`).
pub fn coproduct_iter(x: &SmashElement, legs: usize) -> Tensor {
    assert!(legs >= 1);
    let ctx = x.ctx();
    let mut t = Tensor::pure(&[x]);
    for _ in 1..legs {
        if t.is_zero() {
            return Tensor::zero(vec![ctx.clone(); legs]);
        }
        t = t.expand_leg(0, |m| coproduct_tensor(ctx, m));
    }
    t
}

/// Apply `Δ` to one leg of a tensor.
pub fn coproduct_on_leg(t: &Tensor, leg: usize) -> Tensor {
    let ctx = t.ctxs()[leg].clone();
    if t.is_zero() {
        let mut ctxs = t.ctxs().to_vec();
        ctxs.insert(leg, ctx);
        return Tensor::zero(ctxs);
    }
    t.expand_leg(leg, |m| coproduct_tensor(&ctx, m))
}

/// `ε(g) = 1`, `ε(a_i) = 0`.
pub fn counit(x: &SmashElement) -> CycScalar {
    let mut s = x.ctx().field().zero();
    for (m, c) in x.terms() {
        if m.word.is_empty() {
            s = &s + c;
        }
    }
    s
}

pub fn counit_monomial(m: &Monomial) -> bool {
    m.word.is_empty()
}

/// `S(g) = g^{-1}`, `S(a_i) = −g_i^{-1} a_i`, extended anti-multiplicatively.
pub fn antipode(x: &SmashElement) -> SmashElement {
    let ctx = x.ctx();
    let mut out = ctx.zero();
    for (m, c) in x.terms() {
        let (exp, mono) = antipode_monomial(ctx, m);
        let mut v = c.mul_zeta(exp as i64);
        if m.word.len() % 2 == 1 {
            v = -&v;
        }
        out.add_term(mono, v);
    }
    out
}

/// `S(w g)` up to the sign `(−1)^{|w|}`: returns the `ζ`-exponent and monomial.
fn antipode_monomial(ctx: &Ctx, m: &Monomial) -> (u64, Monomial) {
    let mut acc = Monomial::group(ctx.ginv(m.g));
    let mut exp = 0u64;
    for &l in m.word.iter().rev() {
        let s = Monomial { word: Word::from_slice(&[l]), g: 0 };
        let gi = Monomial::group(ctx.ginv(ctx.letter_group(l as usize)));
        let (e1, t) = ctx.mul_monomials(&gi, &s);
        let (e2, next) = ctx.mul_monomials(&acc, &t);
        exp += e1 + e2;
        acc = next;
    }
    (exp, acc)
}

/// Root vectors of one component, with `N`-th powers built on demand.
#[derive(Debug)]
pub struct RootVectorTable {
    component: usize,
    n: u32,
    vectors: BTreeMap<Root, SmashElement>,
    powers: BTreeMap<Root, OnceLock<SmashElement>>,
}

impl RootVectorTable {
    pub fn new(ctx: &Ctx, d: &LinkingDatum, ds: &DerivedScalars, component: usize) -> Self {
        let mut vectors = BTreeMap::new();
        for r in d.cartan().roots(component) {
            vectors.insert(r, root_vector(ctx, ds, r));
        }
        let powers = vectors.keys().map(|&r| (r, OnceLock::new())).collect();
        RootVectorTable { component, n: ds.n[component], vectors, powers }
    }

    pub fn component(&self) -> usize {
        self.component
    }

    pub fn get(&self, r: Root) -> &SmashElement {
        &self.vectors[&r]
    }

    /// `e_r^N`.
    pub fn power(&self, r: Root) -> &SmashElement {
        self.powers[&r].get_or_init(|| self.vectors[&r].pow(self.n))
    }

    pub fn roots(&self) -> impl Iterator<Item = Root> + '_ {
        self.vectors.keys().copied()
    }
}

/// The elements `u_r(γ) ∈ kΓ` of one component.
#[derive(Debug, Clone)]
pub struct UElementTable {
    values: BTreeMap<Root, SmashElement>,
}

impl UElementTable {
    pub fn new(
        ctx: &Ctx,
        d: &LinkingDatum,
        ds: &DerivedScalars,
        gamma: &RootParameterFamily,
        component: usize,
    ) -> Self {
        let values = d.cartan().roots(component).into_iter().map(|r| (r, u_element(ctx, ds, gamma, r))).collect();
        UElementTable { values }
    }

    pub fn get(&self, r: Root) -> &SmashElement {
        &self.values[&r]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Root, &SmashElement)> {
        self.values.iter()
    }
}

/// `H_0 / I` for one flavor: a completed rewrite system plus the datum it
/// came from.
#[derive(Debug)]
pub struct Presentation {
    datum: LinkingDatum,
    ds: DerivedScalars,
    gamma: RootParameterFamily,
    flavor: Flavor,
    relations: Vec<Relation>,
    rs: RewriteSystem,
}

impl Presentation {
    pub fn new(
        d: &LinkingDatum,
        gamma: &RootParameterFamily,
        flavor: Flavor,
        bound: usize,
    ) -> Result<Presentation, HopfError> {
        let ctx = SmashContext::from_datum(d);
        let ds = derived(d)?;
        let rels = relations(&ctx, d, &ds, gamma, &flavor);
        let rs = RewriteSystem::complete(&ctx, rels.iter().map(|r| r.element.clone()).collect(), bound)?;
        Ok(Presentation { datum: d.clone(), ds, gamma: gamma.clone(), flavor, relations: rels, rs })
    }

    pub fn ctx(&self) -> &Ctx {
        self.rs.ctx()
    }

    pub fn datum(&self) -> &LinkingDatum {
        &self.datum
    }

    pub fn derived(&self) -> &DerivedScalars {
        &self.ds
    }

    pub fn gamma(&self) -> &RootParameterFamily {
        &self.gamma
    }

    pub fn flavor(&self) -> &Flavor {
        &self.flavor
    }

    /// Generators of the ideal `I`.
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn rewrite_system(&self) -> &RewriteSystem {
        &self.rs
    }

    /// True if a nonzero remainder in degree `deg` is not certified.
    pub fn provisional(&self, deg: usize) -> bool {
        self.rs.certified_degree().is_some_and(|d| deg > d)
    }

    pub fn reduce(&self, x: &SmashElement) -> Reduced {
        self.rs.normal_form(x)
    }

    /// Leg-wise normal form: the class of `t` modulo
    /// `I ⊗ H_0 ⊗ … + H_0 ⊗ I ⊗ … + …`.
    pub fn reduce_tensor(&self, t: &Tensor) -> Reduced2 {
        let ctx = self.ctx();
        let degree = t.terms().keys().flat_map(|k| k.iter().map(|m| m.degree())).max().unwrap_or(0);
        let mut out = t.clone();
        for leg in 0..t.arity() {
            out = out.map_leg(leg, ctx, |m| self.rs.reduce_monomial(m));
        }
        Reduced2 { tensor: out, provisional: self.provisional(degree) }
    }

    pub fn root_vectors(&self, component: usize) -> RootVectorTable {
        RootVectorTable::new(self.ctx(), &self.datum, &self.ds, component)
    }

    pub fn u_elements(&self, component: usize) -> UElementTable {
        UElementTable::new(self.ctx(), &self.datum, &self.ds, &self.gamma, component)
    }

    /// Run the Hopf-ideal check and, if it passes, hand out the quotient
    /// coalgebra operations.
    pub fn certify(&self, exec: Execution) -> Result<CertifiedQuotient<'_>, HopfError> {
        let suite = check_hopf_ideal(self, exec);
        if suite.passed() {
            Ok(CertifiedQuotient { p: self })
        } else {
            let why = suite
                .failures()
                .next()
                .map(|c| format!("{} {} is {}", c.identity, c.case, c.outcome.label()))
                .unwrap_or_default();
            Err(HopfError::NotCertified(why))
        }
    }
}

/// Result of a leg-wise reduction.
#[derive(Debug, Clone)]
pub struct Reduced2 {
    pub tensor: Tensor,
    pub provisional: bool,
}

/// `Δ`, `ε`, `S` on `H_0 / I` once `I` is known to be a Hopf ideal.
#[derive(Debug, Clone, Copy)]
pub struct CertifiedQuotient<'a> {
    p: &'a Presentation,
}

impl<'a> CertifiedQuotient<'a> {
    pub fn presentation(&self) -> &'a Presentation {
        self.p
    }

    pub fn coproduct(&self, x: &SmashElement) -> Tensor {
        self.p.reduce_tensor(&coproduct(x)).tensor
    }

    pub fn counit(&self, x: &SmashElement) -> CycScalar {
        counit(&self.p.reduce(x).element)
    }

    pub fn antipode(&self, x: &SmashElement) -> SmashElement {
        self.p.reduce(&antipode(x)).element
    }

    pub fn normal_form(&self, x: &SmashElement) -> SmashElement {
        self.p.reduce(x).element
    }
}

#[cfg(test)]
pub(crate) mod tests;
