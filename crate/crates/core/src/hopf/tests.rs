use super::*;
use crate::datum::{parse_datum, Instance};
use crate::ncalg::parse_element;
use crate::report::Outcome;

pub(crate) fn load(name: &str) -> Instance {
    let text = match name {
        "i1" => include_str!("../../../../data/i1.toml"),
        "i2" => include_str!("../../../../data/i2.toml"),
        "i3" => include_str!("../../../../data/i3.toml"),
        "link12" => include_str!("../../../../data/a1a2_link12.toml"),
        "link13" => include_str!("../../../../data/a1a2_link13.toml"),
        _ => panic!("no instance {name}"),
    };
    parse_datum(text).unwrap()
}

fn el(ctx: &Ctx, s: &str) -> SmashElement {
    parse_element(ctx, s).unwrap()
}

fn show(s: &crate::report::Suite) -> String {
    s.checks
        .iter()
        .filter(|c| c.outcome != Outcome::Pass)
        .map(|c| format!("{} {} {:?} {:?}", c.identity, c.case, c.outcome, c.witness))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn coproduct_examples() {
    let inst = load("i2");
    let ctx = SmashContext::from_datum(&inst.datum);
    let g = el(&ctx, "g[2,3]");
    assert_eq!(coproduct(&g), Tensor::pure(&[&g, &g]));
    let a1 = el(&ctx, "a1");
    let g1 = el(&ctx, "g[1,0]");
    let one = ctx.one();
    let expect = Tensor::pure(&[&a1, &one]).add(&Tensor::pure(&[&g1, &a1]));
    assert_eq!(coproduct(&a1), expect);

    // Δ(a1 a2) = a1a2⊗1 + a1g2⊗a2 + g1a2⊗a1 + g1g2⊗a1a2
    let x = el(&ctx, "a1 a2");
    let mut expect = Tensor::pure(&[&x, &one]);
    expect.add_assign(&Tensor::pure(&[&el(&ctx, "a1 g[0,1]"), &el(&ctx, "a2")]));
    expect.add_assign(&Tensor::pure(&[&el(&ctx, "g[1,0] a2"), &el(&ctx, "a1")]));
    expect.add_assign(&Tensor::pure(&[&el(&ctx, "g[1,1]"), &x]));
    assert_eq!(coproduct(&x), expect);

    // multiplicativity on a longer word, against products of generator coproducts
    let w = el(&ctx, "a2 a1 a1 g[3,1] a2");
    let mut prod = Tensor::pure(&[&one, &one]);
    for f in ["a2", "a1", "a1", "g[3,1]", "a2"] {
        prod = prod.mul(&coproduct(&el(&ctx, f)));
    }
    assert_eq!(coproduct(&w), prod);
}

#[test]
fn counit_and_antipode_examples() {
    let inst = load("i1");
    let ctx = SmashContext::from_datum(&inst.datum);
    assert_eq!(counit(&ctx.one()), ctx.field().one());
    assert!(counit(&el(&ctx, "a1 g[4]")).is_zero());
    assert_eq!(counit(&el(&ctx, "3 g[2] - a1 + 2")), ctx.field().int(5));
    assert_eq!(antipode(&el(&ctx, "g[3]")), el(&ctx, "g[-3]"));
    assert_eq!(antipode(&el(&ctx, "a1")), el(&ctx, "-g[-1] a1"));
    // m(S⊗id)Δ(x) = ε(x) on free monomials
    for src in ["a1", "a1 a1 g[2]", "a1^3 g[7]"] {
        let x = el(&ctx, src);
        let t = coproduct(&x);
        let s_id = t.map_leg(0, &ctx, |m| antipode(&ctx.term(m.clone(), ctx.field().one())));
        assert_eq!(s_id.multiply_legs(), ctx.scalar(counit(&x)), "{src}");
        let id_s = t.map_leg(1, &ctx, |m| antipode(&ctx.term(m.clone(), ctx.field().one())));
        assert_eq!(id_s.multiply_legs(), ctx.scalar(counit(&x)), "{src}");
    }
}

#[test]
fn root_vectors_and_u() {
    let inst = load("i3");
    let d = &inst.datum;
    let p = Presentation::new(d, &inst.gamma, Flavor::Enveloping, 12).unwrap();
    let ctx = p.ctx();
    let rv = p.root_vectors(0);
    assert_eq!(rv.get(Root::new(0, 1)), &el(ctx, "a1"));
    // e13 = a1a2 − χ2(g1) a2a1; χ2(g1) = ζ_25^20
    assert_eq!(rv.get(Root::new(0, 2)), &el(ctx, "a1 a2 - zeta(25)^20 * a2 a1"));

    let us = p.u_elements(0);
    let f = d.field();
    // independent C^3_{1,2}: (1 − q^{-1})^5 (χ_{1,2}(g_{2,3}))^{10}, q = ζ^5
    let q = f.zeta_pow(5);
    let base = (&f.one() - &q.inv().unwrap()).pow(5).unwrap();
    let b = d.evaluate(d.chi(0), d.g(1));
    let c = &base * &b.pow(10).unwrap();
    let (g12, g13, g23) = (f.int(1), f.int(3), f.int(2));
    let one = ctx.one();
    let h13 = el(ctx, "g[5,5]");
    let h23 = el(ctx, "g[0,5]");
    let expect = &(&one - &h13).scale(&g13) + &(&one - &h23).scale(&(&(&c * &g12) * &g23));
    assert_eq!(us.get(Root::new(0, 2)), &expect);
    assert_eq!(us.get(Root::new(1, 2)), &(&one - &h23).scale(&g23));
    for (_, u) in us.iter() {
        assert!(u.is_group_only());
        assert!(counit(u).is_zero());
    }
}

#[test]
fn hopf_ideal_passes_on_instances() {
    let exec = Execution::Parallel;
    for (name, flavor, bound) in
        [("i1", Flavor::Lifted, 12), ("i2", Flavor::Small, 12), ("i3", Flavor::Lifted, 24), ("i3", Flavor::Small, 24)]
    {
        let inst = load(name);
        let s = hopf_ideal_suite(&inst.datum, &inst.gamma, flavor.clone(), bound, exec).unwrap();
        assert!(s.passed(), "{name} {flavor:?}\n{}", show(&s));
    }
    let inst = load("i3");
    let partial = Flavor::partial(&inst.datum, 0);
    let s = hopf_ideal_suite(&inst.datum, &inst.gamma, partial, 24, exec).unwrap();
    assert!(s.passed(), "{}", show(&s));
}

#[test]
fn hopf_ideal_negative_control() {
    // χ^5 = [0,5] ≠ ε while h = g^5 ≠ 1, so γ = 1 is not admissible
    let text = "[group]\norders = [25, 25]\n[cartan]\ncomponents = [1]\n[[vertices]]\ng = [1, 0]\nchi = [5, 1]\n\
                [[gamma]]\ncomponent = 1\ni = 1\nj = 2\nvalue = 1\n";
    let inst = parse_datum(text).unwrap();
    let s = hopf_ideal_suite(&inst.datum, &inst.gamma, Flavor::Lifted, 12, Execution::Sequential).unwrap();
    assert_eq!(s.outcome(), Outcome::Fail);
    assert!(s.checks[0].witness.is_some());
    let c = central_suite(&inst.datum, &inst.gamma).unwrap();
    assert_eq!(c.outcome(), Outcome::Fail);
}

#[test]
fn certified_quotient_gate() {
    let inst = load("i1");
    let p = Presentation::new(&inst.datum, &inst.gamma, Flavor::Lifted, 12).unwrap();
    let q = p.certify(Execution::Sequential).unwrap();
    let ctx = p.ctx();
    let a5 = el(ctx, "a1^5");
    assert_eq!(q.normal_form(&a5), el(ctx, "1 - g[5]"));
    assert!(q.counit(&a5).is_zero());
    // Δ(a^5) ≡ (1 − g^5)⊗1 + g^5⊗(1 − g^5) = 1⊗1 − g^5⊗g^5 in the quotient
    let g5 = el(ctx, "g[5]");
    let expect = Tensor::pure(&[&ctx.one(), &ctx.one()]).sub(&Tensor::pure(&[&g5, &g5]));
    assert_eq!(q.coproduct(&a5), expect);
    assert_eq!(q.antipode(&a5), el(ctx, "1 - g[-5]"));
}

#[test]
fn delroot_on_instances() {
    let exec = Execution::Parallel;
    let inst = load("i1");
    let s = delroot_suite(&inst.datum, &inst.gamma, None, 12, exec).unwrap();
    assert!(s.passed(), "{}", show(&s));
    let inst = load("i3");
    let f = inst.datum.field();
    let zero = RootParameterFamily::zero(f);
    let only12 = RootParameterFamily::new(&inst.datum, [(Root::new(0, 1), f.one())]).unwrap();
    for gamma in [&zero, &only12, &inst.gamma] {
        let s = delroot_suite(&inst.datum, gamma, None, 12, exec).unwrap();
        assert_eq!(s.checks.len(), 3);
        assert!(s.passed(), "{}", show(&s));
        let s = antipode_recursion_suite(&inst.datum, gamma, 12, exec).unwrap();
        assert!(s.passed(), "{}", show(&s));
    }
}

#[test]
fn commutation_on_instances() {
    let exec = Execution::Parallel;
    let inst = load("i2");
    let s = commutation_suite(&inst.datum, CommutationSelector::Techcom, None, 12, exec).unwrap();
    assert_eq!(s.checks.len(), 4);
    assert!(s.passed(), "{}", show(&s));
    let mut seen = std::collections::BTreeSet::new();
    for name in ["link12", "link13"] {
        let inst = load(name);
        let s = commutation_suite(&inst.datum, CommutationSelector::Techcom, None, 12, exec).unwrap();
        assert!(s.passed(), "{name}\n{}", show(&s));
        for c in &s.checks {
            seen.insert(c.identity.clone());
        }
        let s = commutation_suite(&inst.datum, CommutationSelector::Crucial, None, 12, exec).unwrap();
        assert!(s.passed(), "{name}\n{}", show(&s));
    }
    for k in ["techcom-case1", "techcom-case2", "techcom-case3", "techcom-ii"] {
        assert!(seen.contains(k), "{k} not exercised");
    }
    let inst = load("i3");
    let s = commutation_suite(&inst.datum, CommutationSelector::Crucial, None, 12, exec).unwrap();
    assert_eq!(s.checks.len(), 9);
    assert!(s.passed(), "{}", show(&s));
}

#[test]
fn techcom_case1_is_the_linking_relation() {
    let inst = load("i2");
    let p = Presentation::new(&inst.datum, &inst.gamma, Flavor::Enveloping, 12).unwrap();
    let ctx = p.ctx();
    // a1 e23 − χ2(g1) e23 a1 − λ12 (1 − g1 g2), χ2(g1) = ζ_5
    let x = el(ctx, "a1 a2 - zeta(5) * a2 a1 - (1 - g[1,1])");
    assert!(p.reduce(&x).element.is_zero());
}

#[test]
fn central_on_instances() {
    for name in ["i1", "i2", "i3", "link12", "link13"] {
        let inst = load(name);
        let s = central_suite(&inst.datum, &inst.gamma).unwrap();
        assert!(s.passed(), "{name}\n{}", show(&s));
    }
}

#[test]
fn checks_are_not_vacuous() {
    let inst = load("i2");
    let p = Presentation::new(&inst.datum, &inst.gamma, Flavor::Enveloping, 12).unwrap();
    let ctx = p.ctx();
    // a1 commutes with e23^5 up to the scalar, but not with e23^4
    let e4 = el(ctx, "a2^4");
    let x = &(&el(ctx, "a1") * &e4) - &(&e4 * &el(ctx, "a1")).scale(&ctx.field().zeta_pow(4 * 5));
    assert!(!p.reduce(&x).element.is_zero());

    // the middle terms of Δ(e13^5) are really there
    let inst = load("i3");
    let zero = RootParameterFamily::zero(inst.datum.field());
    let p = Presentation::new(&inst.datum, &zero, Flavor::Enveloping, 12).unwrap();
    let rv = p.root_vectors(0);
    let r = Root::new(0, 2);
    let h = p.ctx().group_element(p.ctx().index(&p.derived().h[&r]));
    let short = Tensor::pure(&[rv.power(r), &p.ctx().one()]).add(&Tensor::pure(&[&h, rv.power(r)]));
    let rest = p.reduce_tensor(&coproduct(rv.power(r)).sub(&short));
    assert!(!rest.tensor.is_zero());
}

#[test]
fn structural_suites() {
    for name in ["i1", "i2", "link12"] {
        let inst = load(name);
        let ctx = SmashContext::from_datum(&inst.datum);
        let s = hopf_axioms_suite(&ctx, 1, 100, Execution::Parallel);
        assert!(s.passed(), "{name}: {}", show(&s));
    }
    let inst = load("i2");
    let p = Presentation::new(&inst.datum, &inst.gamma, Flavor::Small, 12).unwrap();
    let s = normal_form_suite(&p, 2, 100, 6, Execution::Parallel);
    assert!(s.passed(), "{}", show(&s));
    let inst = load("i3");
    let p = Presentation::new(&inst.datum, &inst.gamma, Flavor::Lifted, 24).unwrap();
    let s = normal_form_suite(&p, 3, 100, 8, Execution::Parallel);
    assert!(s.passed(), "{}", show(&s));
}
