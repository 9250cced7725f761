use std::collections::BTreeMap;
use std::fmt;

use super::{Ctx, CompletionError, RewriteSystem, SmashContext, SmashElement};
use crate::datum::{derived, DerivedScalars, LinkingDatum, Root, RootParameterFamily};

/// Which quotient of `H_0` to present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flavor {
    /// `u(D)`: Serre, linking, and `e_α^N = 0`.
    Small,
    /// `U(D)`: Serre and linking only.
    Enveloping,
    /// `A(D, γ)`: Serre, linking, and `e_α^N = u_α(γ)`.
    Lifted,
    /// Serre, linking, and `e_α^N = u_α(γ)` for the listed roots only.
    Custom(Vec<Root>),
}

impl Flavor {
    /// The roots entering the ideal `(e_{i,j}^N − u_{i,j} : i ≠ i_0 or χ_{i,j}^N ≠ ε)`
    /// for a vertex `i0` (0-based); roots of other components are all kept.
    pub fn partial(d: &LinkingDatum, i0: usize) -> Flavor {
        let roots = d
            .cartan()
            .all_roots()
            .into_iter()
            .filter(|r| {
                r.start != i0 || !d.group().char_pow(&d.root_character(*r), d.root_order(*r) as i64).is_trivial()
            })
            .collect();
        Flavor::Custom(roots)
    }

    fn root_set(&self, d: &LinkingDatum) -> Vec<Root> {
        match self {
            Flavor::Enveloping => Vec::new(),
            Flavor::Small | Flavor::Lifted => d.cartan().all_roots(),
            Flavor::Custom(r) => r.clone(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Flavor::Small => "u",
            Flavor::Enveloping => "U",
            Flavor::Lifted => "A",
            Flavor::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    /// `(ad a_i)^{1−a_ij} a_j`
    Serre { i: usize, j: usize },
    /// `a_i a_j − χ_j(g_i) a_j a_i − λ_ij (1 − g_i g_j)`
    Linking { i: usize, j: usize },
    /// `e_α^N − u_α`
    RootPower(Root),
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationKind::Serre { i, j } => write!(f, "serre({},{})", i + 1, j + 1),
            RelationKind::Linking { i, j } => write!(f, "linking({},{})", i + 1, j + 1),
            RelationKind::RootPower(r) => write!(f, "root{r}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Relation {
    pub kind: RelationKind,
    pub element: SmashElement,
}

/// `(ad a_i)^k a_j` with `(ad a_i) x = a_i x − g_i x g_i^{-1} a_i`.
pub fn adjoint_power(ctx: &Ctx, i: usize, j: usize, k: u32) -> SmashElement {
    let a = ctx.letter(i);
    let gi = ctx.group_element(ctx.letter_group(i));
    let gi_inv = ctx.group_element(ctx.ginv(ctx.letter_group(i)));
    let mut x = ctx.letter(j);
    for _ in 0..k {
        let conj = &(&gi * &x) * &gi_inv;
        x = &(&a * &x) - &(&conj * &a);
    }
    x
}

/// Root vector `e_{i,j}`: `e_{i,i+1} = a_i`,
/// `e_{i,j} = e_{i,j−1} a_{j−1} − B^{i,j−1}_{j−1,j} a_{j−1} e_{i,j−1}`.
pub fn root_vector(ctx: &Ctx, ds: &DerivedScalars, r: Root) -> SmashElement {
    if r.is_simple() {
        return ctx.letter(r.start);
    }
    let prev = Root::new(r.start, r.end - 1);
    let last = Root::new(r.end - 1, r.end);
    let e = root_vector(ctx, ds, prev);
    let a = ctx.letter(r.end - 1);
    let b = ds.b(prev, last);
    &(&e * &a) - &(&a * &e).scale(&b)
}

/// `u_{i,j}(γ) = γ_{i,j}(1 − h_{i,j}) + Σ_{i<p<j} C^j_{i,p} γ_{i,p} u_{p,j}(γ)`.
pub fn u_element(ctx: &Ctx, ds: &DerivedScalars, gamma: &RootParameterFamily, r: Root) -> SmashElement {
    let mut memo = BTreeMap::new();
    u_rec(ctx, ds, gamma, r, &mut memo)
}

fn u_rec(
    ctx: &Ctx,
    ds: &DerivedScalars,
    gamma: &RootParameterFamily,
    r: Root,
    memo: &mut BTreeMap<Root, SmashElement>,
) -> SmashElement {
    if let Some(v) = memo.get(&r) {
        return v.clone();
    }
    let h = ctx.index(&ds.h[&r]);
    let mut u = (&ctx.one() - &ctx.group_element(h)).scale(&gamma.get(r));
    for p in r.start + 1..r.end {
        let gp = gamma.get(Root::new(r.start, p));
        if gp.is_zero() {
            continue;
        }
        let c = ds.c_coeff(r.start, p, r.end) * &gp;
        let tail = u_rec(ctx, ds, gamma, Root::new(p, r.end), memo);
        u += &tail.scale(&c);
    }
    memo.insert(r, u.clone());
    u
}

/// The defining relations of a flavor, as elements of `H_0`.
pub fn relations(
    ctx: &Ctx,
    d: &LinkingDatum,
    ds: &DerivedScalars,
    gamma: &RootParameterFamily,
    flavor: &Flavor,
) -> Vec<Relation> {
    let theta = d.rank();
    let cartan = d.cartan();
    let mut out = Vec::new();
    for i in 0..theta {
        for j in 0..theta {
            if i != j && cartan.same_component(i, j) {
                let k = (1 - cartan.entry(i, j)) as u32;
                // for non-adjacent vertices both orders give the same relation
                if k == 1 && i > j {
                    continue;
                }
                out.push(Relation { kind: RelationKind::Serre { i, j }, element: adjoint_power(ctx, i, j, k) });
            }
        }
    }
    for i in 0..theta {
        for j in i + 1..theta {
            if cartan.same_component(i, j) {
                continue;
            }
            let ai = ctx.letter(i);
            let aj = ctx.letter(j);
            let mut e = &(&ai * &aj) - &(&aj * &ai).scale(&d.q(i, j));
            let lam = d.lambda(i, j);
            if !lam.is_zero() {
                let gg = ctx.gmul(ctx.letter_group(i), ctx.letter_group(j));
                e -= &(&ctx.one() - &ctx.group_element(gg)).scale(&lam);
            }
            out.push(Relation { kind: RelationKind::Linking { i, j }, element: e });
        }
    }
    let use_gamma = !matches!(flavor, Flavor::Small);
    for r in flavor.root_set(d) {
        let n = d.root_order(r);
        let mut e = root_vector(ctx, ds, r).pow(n);
        if use_gamma {
            e -= &u_element(ctx, ds, gamma, r);
        }
        out.push(Relation { kind: RelationKind::RootPower(r), element: e });
    }
    out
}

/// Orient and complete the relations of `flavor` up to overlap degree `bound`.
pub fn build_rules(
    d: &LinkingDatum,
    gamma: &RootParameterFamily,
    flavor: &Flavor,
    bound: usize,
) -> Result<RewriteSystem, CompletionError> {
    let ctx = SmashContext::from_datum(d);
    let ds = derived(d).map_err(|e| CompletionError::Datum(e.to_string()))?;
    let rels = relations(&ctx, d, &ds, gamma, flavor);
    RewriteSystem::complete(&ctx, rels.into_iter().map(|r| r.element).collect(), bound)
}
