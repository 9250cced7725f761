use std::time::Instant;

use super::{antipode, coproduct, counit, HopfError, Presentation, RootVectorTable, UElementTable};
use crate::datum::{derived, LinkingDatum, Root, RootParameterFamily};
use crate::ncalg::{CompletionError, Flavor, SmashContext, Tensor};
use crate::par::Execution;
use crate::report::{Check, Suite};

/// `Δ`, `ε` and `S` of every generator of `I` lie in `H_0⊗I + I⊗H_0`,
/// in `0`, and in `I`.
pub fn check_hopf_ideal(p: &Presentation, exec: Execution) -> Suite {
    let mut suite = Suite::new(format!("hopf-ideal ({})", p.flavor().name()));
    let rels = p.relations();
    let checks = exec.map(rels, |rel| {
        let case = rel.kind.to_string();
        let t0 = Instant::now();
        let d = coproduct(&rel.element);
        let red = p.reduce_tensor(&d);
        let c1 = Check::tensor_residual("coproduct", &case, &red.tensor, red.provisional).timed(t0);

        let t0 = Instant::now();
        let e = counit(&rel.element);
        let c2 = if e.is_zero() {
            Check::pass("counit", &case)
        } else {
            Check::fail("counit", &case, format!("ε = {e}"))
        }
        .timed(t0);

        let t0 = Instant::now();
        let s = antipode(&rel.element);
        let red = p.reduce(&s);
        let c3 = Check::residual("antipode", &case, &red.element, red.provisional).timed(t0);
        [c1, c2, c3]
    });
    for c in checks.into_iter().flatten() {
        suite.push(c);
    }
    suite
}

/// [`check_hopf_ideal`] for a flavor built from scratch. An ideal that
/// meets the group algebra is reported as a failure with that element as
/// witness.
pub fn hopf_ideal_suite(
    d: &LinkingDatum,
    gamma: &RootParameterFamily,
    flavor: Flavor,
    bound: usize,
    exec: Execution,
) -> Result<Suite, HopfError> {
    let name = flavor.name();
    match Presentation::new(d, gamma, flavor, bound) {
        Ok(p) => Ok(check_hopf_ideal(&p, exec)),
        Err(HopfError::Completion(CompletionError::GroupRelation(g))) => {
            let mut s = Suite::new(format!("hopf-ideal ({name})"));
            s.push(Check::fail("ideal", "meets kΓ", g).note("the relations force a nonzero element of the group algebra"));
            Ok(s)
        }
        Err(e) => Err(e),
    }
}

fn root_tables(p: &Presentation) -> (Vec<RootVectorTable>, Vec<UElementTable>) {
    let k = p.datum().cartan().num_components();
    ((0..k).map(|c| p.root_vectors(c)).collect(), (0..k).map(|c| p.u_elements(c)).collect())
}

/// `Δ(e^N − u) = (e^N − u)⊗1 + h⊗(e^N − u) + Σ_p C^j_{i,p} e_{i,p}^N h_{p,j}⊗(e_{p,j}^N − u_{p,j})
/// + Σ_p C^j_{i,p} (e_{i,p}^N − u_{i,p}) h_{p,j}⊗u_{p,j}`, checked in `U(D) ⊗ U(D)`.
pub fn check_delroot(p: &Presentation, rv: &RootVectorTable, us: &UElementTable, r: Root) -> Check {
    let t0 = Instant::now();
    let ctx = p.ctx();
    let ds = p.derived();
    let one = ctx.one();
    let h = |r: Root| ctx.group_element(ctx.index(&ds.h[&r]));
    let x = rv.power(r) - us.get(r);
    let lhs = coproduct(&x);
    let mut rhs = Tensor::pure(&[&x, &one]);
    rhs.add_assign(&Tensor::pure(&[&h(r), &x]));
    for p_ in r.start + 1..r.end {
        let (rip, rpj) = (Root::new(r.start, p_), Root::new(p_, r.end));
        let c = ds.c_coeff(r.start, p_, r.end);
        let hp = h(rpj);
        let left = (rv.power(rip) * &hp).scale(c);
        let right = rv.power(rpj) - us.get(rpj);
        rhs.add_assign(&Tensor::pure(&[&left, &right]));
        let left = (&(rv.power(rip) - us.get(rip)) * &hp).scale(c);
        rhs.add_assign(&Tensor::pure(&[&left, us.get(rpj)]));
    }
    let red = p.reduce_tensor(&lhs.sub(&rhs));
    Check::tensor_residual("delroot", r.to_string(), &red.tensor, red.provisional).timed(t0)
}

pub fn delroot_suite(
    d: &LinkingDatum,
    gamma: &RootParameterFamily,
    roots: Option<&[Root]>,
    bound: usize,
    exec: Execution,
) -> Result<Suite, HopfError> {
    let p = Presentation::new(d, gamma, Flavor::Enveloping, bound)?;
    let (rv, us) = root_tables(&p);
    let all = d.cartan().all_roots();
    let roots = roots.unwrap_or(&all);
    for r in roots {
        d.check_root(*r)?;
    }
    let mut s = Suite::new("delroot");
    for c in exec.map(roots, |r| {
        let k = d.cartan().component_of(r.start);
        check_delroot(&p, &rv[k], &us[k], *r)
    }) {
        s.push(c);
    }
    Ok(s)
}

/// The generic antipode agrees with
/// `S(e_{i,j}^N) = −h_{i,j}^{-1}e_{i,j}^N − Σ_p C^j_{i,p} h_{p,j}^{-1} S(e_{i,p}^N) e_{p,j}^N`
/// and, on simple roots, with `S(e^N − u) = −g_i^{-N}(e^N − u)`.
pub fn check_antipode_recursion(p: &Presentation, rv: &RootVectorTable, us: &UElementTable, r: Root) -> Check {
    let t0 = Instant::now();
    let ctx = p.ctx();
    let ds = p.derived();
    let hinv = |r: Root| ctx.group_element(ctx.ginv(ctx.index(&ds.h[&r])));
    let mut residual = antipode(rv.power(r));
    residual += &(&hinv(r) * rv.power(r));
    for p_ in r.start + 1..r.end {
        let (rip, rpj) = (Root::new(r.start, p_), Root::new(p_, r.end));
        let term = &(&hinv(rpj) * &antipode(rv.power(rip))) * rv.power(rpj);
        residual += &term.scale(ds.c_coeff(r.start, p_, r.end));
    }
    if r.is_simple() {
        let x = rv.power(r) - us.get(r);
        residual += &(&antipode(&x) + &(&hinv(r) * &x));
    }
    let red = p.reduce(&residual);
    Check::residual("antipode-recursion", r.to_string(), &red.element, red.provisional).timed(t0)
}

pub fn antipode_recursion_suite(
    d: &LinkingDatum,
    gamma: &RootParameterFamily,
    bound: usize,
    exec: Execution,
) -> Result<Suite, HopfError> {
    let p = Presentation::new(d, gamma, Flavor::Enveloping, bound)?;
    let (rv, us) = root_tables(&p);
    let roots = d.cartan().all_roots();
    let mut s = Suite::new("antipode-recursion");
    for c in exec.map(&roots, |r| {
        let k = d.cartan().component_of(r.start);
        check_antipode_recursion(&p, &rv[k], &us[k], *r)
    }) {
        s.push(c);
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TechcomCase {
    /// `j = l`
    Case1,
    /// `λ_{il} = 0`, `j < l`
    Case2,
    /// otherwise
    Case3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommutationKind {
    /// `e_a e_b^N = χ_b^N(g_a) e_b^N e_a` within one component.
    Crucial,
    /// The same across two components.
    Commute,
    /// `a_i e_{j,l+1}` for `i` outside the component of `j, l`.
    Techcom(TechcomCase),
    /// `a_i e_{j,l+1}^N = χ_{j,l+1}^N(g_i) e_{j,l+1}^N a_i`.
    TechcomPower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommutationCase {
    pub kind: CommutationKind,
    /// Vertex `i` for the techcom cases.
    pub vertex: usize,
    /// `e_a` (crucial, commute) or `e_{j,l+1}` (techcom).
    pub a: Root,
    /// `e_b` for crucial and commute; equal to `a` otherwise.
    pub b: Root,
}

impl CommutationCase {
    pub fn name(&self) -> &'static str {
        match self.kind {
            CommutationKind::Crucial => "crucial",
            CommutationKind::Commute => "commute",
            CommutationKind::Techcom(TechcomCase::Case1) => "techcom-case1",
            CommutationKind::Techcom(TechcomCase::Case2) => "techcom-case2",
            CommutationKind::Techcom(TechcomCase::Case3) => "techcom-case3",
            CommutationKind::TechcomPower => "techcom-ii",
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            CommutationKind::Crucial | CommutationKind::Commute => format!("e{} e{}^N", self.a, self.b),
            _ => format!("a{} e{}", self.vertex + 1, self.a),
        }
    }
}

/// Selector for [`commutation_cases`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommutationSelector {
    Crucial,
    Techcom,
}

/// All instances of the selected identities for a datum.
pub fn commutation_cases(d: &LinkingDatum, sel: CommutationSelector) -> Vec<CommutationCase> {
    let cartan = d.cartan();
    let mut out = Vec::new();
    match sel {
        CommutationSelector::Crucial => {
            for k in 0..cartan.num_components() {
                for l in 0..cartan.num_components() {
                    let kind = if k == l { CommutationKind::Crucial } else { CommutationKind::Commute };
                    for a in cartan.roots(k) {
                        for b in cartan.roots(l) {
                            out.push(CommutationCase { kind, vertex: 0, a, b });
                        }
                    }
                }
            }
        }
        CommutationSelector::Techcom => {
            for k in 0..cartan.num_components() {
                let range = cartan.vertices(k);
                for i in (0..d.rank()).filter(|&i| cartan.component_of(i) != k) {
                    for j in range.clone() {
                        for l in j..range.end {
                            let case = if j == l {
                                TechcomCase::Case1
                            } else if d.lambda(i, l).is_zero() {
                                TechcomCase::Case2
                            } else {
                                TechcomCase::Case3
                            };
                            let r = Root::new(j, l + 1);
                            out.push(CommutationCase { kind: CommutationKind::Techcom(case), vertex: i, a: r, b: r });
                            out.push(CommutationCase { kind: CommutationKind::TechcomPower, vertex: i, a: r, b: r });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Left side minus right side of one commutation identity, reduced in `U(D)`.
pub fn check_commutation(p: &Presentation, rv: &[RootVectorTable], case: &CommutationCase) -> Check {
    let t0 = Instant::now();
    let d = p.datum();
    let ctx = p.ctx();
    let cartan = d.cartan();
    let table = |r: Root| &rv[cartan.component_of(r.start)];
    let expr = match case.kind {
        CommutationKind::Crucial | CommutationKind::Commute => {
            let (a, b) = (case.a, case.b);
            let n = d.root_order(b) as i64;
            let coef = d.evaluate(&d.group().char_pow(&d.root_character(b), n), &d.root_element(a));
            let ea = table(a).get(a);
            let eb = table(b).power(b);
            &(ea * eb) - &(eb * ea).scale(&coef)
        }
        CommutationKind::Techcom(tc) => {
            let i = case.vertex;
            let r = case.a;
            let (j, l) = (r.start, r.end - 1);
            let ai = ctx.letter(i);
            let e = table(r).get(r);
            let gi = d.g(i);
            let mut x = &(&ai * e) - &(e * &ai).scale(&d.evaluate(&d.root_character(r), gi));
            let q = d.q(j, j);
            let one_minus = &d.field().one() - &q.inv().expect("root of unity");
            match tc {
                TechcomCase::Case1 => {
                    let gg = ctx.gmul(ctx.letter_group(i), ctx.letter_group(j));
                    x -= &(&ctx.one() - &ctx.group_element(gg)).scale(&d.lambda(i, j));
                }
                TechcomCase::Case2 => {
                    let next = Root::new(j + 1, l + 1);
                    x -= &table(next).get(next).scale(&(&d.lambda(i, j) * &one_minus));
                }
                TechcomCase::Case3 => {
                    let prev = Root::new(j, l);
                    let coef = &(&d.lambda(i, l) * &one_minus) * &d.evaluate(&d.root_character(prev), gi);
                    let gg = ctx.gmul(ctx.letter_group(i), ctx.letter_group(l));
                    x += &table(prev).get(prev).mul_group_right(gg).scale(&coef);
                }
            }
            x
        }
        CommutationKind::TechcomPower => {
            let i = case.vertex;
            let r = case.a;
            let n = d.root_order(r) as i64;
            let coef = d.evaluate(&d.group().char_pow(&d.root_character(r), n), d.g(i));
            let ai = ctx.letter(i);
            let en = table(r).power(r);
            &(&ai * en) - &(en * &ai).scale(&coef)
        }
    };
    let red = p.reduce(&expr);
    Check::residual(case.name(), case.label(), &red.element, red.provisional).timed(t0)
}

pub fn commutation_suite(
    d: &LinkingDatum,
    sel: CommutationSelector,
    kinds: Option<&[CommutationKind]>,
    bound: usize,
    exec: Execution,
) -> Result<Suite, HopfError> {
    let p = Presentation::new(d, &RootParameterFamily::zero(d.field()), Flavor::Enveloping, bound)?;
    let (rv, _) = root_tables(&p);
    let mut cases = commutation_cases(d, sel);
    if let Some(ks) = kinds {
        cases.retain(|c| ks.contains(&c.kind));
    }
    let name = match sel {
        CommutationSelector::Crucial => "crucial",
        CommutationSelector::Techcom => "techcom",
    };
    let mut s = Suite::new(name);
    for c in exec.map(&cases, |c| check_commutation(&p, &rv, c)) {
        s.push(c);
    }
    Ok(s)
}

/// `u_r a_x = a_x u_r` for every root and letter, and `u_r = 0` whenever
/// `χ_r^N ≠ ε`.
pub fn central_suite(d: &LinkingDatum, gamma: &RootParameterFamily) -> Result<Suite, HopfError> {
    let ctx = SmashContext::from_datum(d);
    let ds = derived(d)?;
    let mut s = Suite::new("central");
    for k in 0..d.cartan().num_components() {
        let us = UElementTable::new(&ctx, d, &ds, gamma, k);
        for (r, u) in us.iter() {
            let t0 = Instant::now();
            let chi_n = d.group().char_pow(&ds.chi[r], ds.n[k] as i64);
            if !chi_n.is_trivial() {
                let c = if u.is_zero() {
                    Check::pass("u-vanishing", r.to_string())
                } else {
                    Check::fail("u-vanishing", r.to_string(), format!("χ^N = {chi_n} but u = {u}"))
                };
                s.push(c.timed(t0));
            }
            let t0 = Instant::now();
            let mut bad = None;
            for x in 0..d.rank() {
                let ax = ctx.letter(x);
                let comm = &(u * &ax) - &(&ax * u);
                if !comm.is_zero() {
                    bad = Some((x, comm));
                    break;
                }
            }
            let c = match bad {
                None => Check::pass("central", format!("u{r}")),
                Some((x, comm)) => Check::fail("central", format!("u{r}"), format!("[u, a{}] = {comm}", x + 1)),
            };
            s.push(c.timed(t0));
        }
    }
    Ok(s)
}
