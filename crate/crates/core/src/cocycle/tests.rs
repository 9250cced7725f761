use super::*;
use crate::datum::{Root, RootParameterFamily};
use crate::datum::Instance;
use crate::hopf::Presentation;
use crate::ncalg::{parse_element, Flavor};
use crate::report::Outcome;

fn load(name: &str) -> Instance {
    crate::hopf::tests::load(name)
}

fn show(s: &Suite) -> String {
    s.failures().map(|c| format!("{} {} {:?} {:?}", c.identity, c.case, c.outcome, c.witness)).collect::<Vec<_>>().join("\n")
}

/// `ζ_E^{k E / m}`: the value of an `m`-th root of unity, computed by hand.
fn root(alg: &SplitAlgebras, k: i64, m: i64) -> CycScalar {
    let e = alg.field().conductor() as i64;
    alg.field().zeta_pow(k * e / m)
}

fn key(u: Monomial, b: Monomial) -> TensorKey {
    TensorKey::from_iter([u, b])
}

#[test]
fn tau_examples_on_i2() {
    let inst = load("i2");
    let alg = SplitAlgebras::new(&inst.datum, 0).unwrap();
    let (u, b) = (alg.u_ctx(), alg.b_ctx());
    let tau = Tau::new(&alg);
    let f = alg.field();
    let z1 = u.index(&alg.split().part.group().generator(0));
    let y: Vec<u32> = (0..2).map(|k| b.index(&inst.datum.group().generator(k))).collect();

    // τ(1, b) = ε(b)
    assert!(tau.eval_monomials(&Monomial::group(0), &Monomial::group(y[0])).is_one());
    assert!(tau.eval_monomials(&Monomial::group(0), &Monomial::new(&[0], 0)).is_zero());
    // τ(z_1, y_k) = χ_1(y_k), χ_1 = (4, 4)
    for &yk in &y {
        assert_eq!(tau.eval_monomials(&Monomial::group(z1), &Monomial::group(yk)), root(&alg, 4, 5));
    }
    // τ(u_1, b_2) = −χ_1(g_2) λ_12 = −ζ_5^4
    let u1b2 = tau.eval_monomials(&Monomial::new(&[0], 0), &Monomial::new(&[0], 0));
    assert_eq!(u1b2, -&root(&alg, 4, 5));
    // τ̃ kills every nonempty U-word
    assert!(Tau::zeroed(&alg).eval_monomials(&Monomial::new(&[0], 0), &Monomial::new(&[0], 0)).is_zero());

    // τ^{-1}(z_1, y_k) = χ_1^{-1}(y_k)
    let inv = tau.inverse();
    assert_eq!(inv.eval_monomials(&Monomial::group(z1), &Monomial::group(y[1])), root(&alg, 1, 5));

    // σ(1⊗b_2, u_1⊗1) = τ(u_1, b_2), σ(u⊗a, 1⊗1) = ε(u)ε(a)
    let sigma = Sigma::new(&alg, &tau);
    let x = key(Monomial::group(0), Monomial::new(&[0], 0));
    let yk = key(Monomial::new(&[0], 0), Monomial::group(0));
    assert_eq!(sigma.eval_keys(&x, &yk), u1b2);
    let one = key(Monomial::group(0), Monomial::group(0));
    assert!(sigma.eval_keys(&one, &one).is_one());
    assert!(sigma.eval_keys(&yk, &one).is_zero());
    assert!(sigma.eval_keys(&key(Monomial::group(z1), Monomial::group(y[0])), &one).is_one());

    // (σ * σ^{-1})(z_1⊗1, 1⊗y_k) = 1
    let sigma_inv = Sigma::new(&alg, &inv);
    let conv = Convolution::new(&alg, &sigma, &sigma_inv);
    let zk = key(Monomial::group(z1), Monomial::group(0));
    let yk = key(Monomial::group(0), Monomial::group(y[0]));
    assert!(conv.eval_keys(&zk, &yk).is_one());
    assert!(f.one().is_one());
}

#[test]
fn cocycle_identity_on_splits() {
    for (name, comp) in [("i2", 0), ("i2", 1), ("link12", 0), ("link12", 1)] {
        let inst = load(name);
        let alg = SplitAlgebras::new(&inst.datum, comp).unwrap();
        let s = cocycle_suite(&alg, 7, 30, Execution::Parallel);
        assert!(s.passed(), "{name}/{comp}: {}", show(&s));
        let n = alg.generators().len() + 1;
        assert_eq!(s.checks[0].case, format!("{} generator triples", n * n * n));
        if name == "i2" {
            assert_eq!(n, 6);
        }
        let s = tau_property_suite(&alg, 11, 100);
        assert!(s.passed(), "{name}/{comp}: {}", show(&s));
    }
}

/// A form that agrees with `τ` except that `τ(u_j, b_l)` is doubled.
struct Doubled<'t>(&'t Tau<'t>);

impl UBForm for Doubled<'_> {
    fn eval_monomials(&self, u: &Monomial, b: &Monomial) -> CycScalar {
        let v = self.0.eval_monomials(u, b);
        if u.word.len() == 1 && b.word.len() == 1 {
            &v + &v
        } else {
            v
        }
    }
}

#[test]
fn cocycle_identity_detects_a_bad_form() {
    let inst = load("i2");
    let alg = SplitAlgebras::new(&inst.datum, 0).unwrap();
    let tau = Tau::new(&alg);
    let bad = Doubled(&tau);
    let sigma = Sigma::new(&alg, &bad);
    let gens = alg.generators();
    let u1 = &gens[0].1;
    let b2 = &gens[2].1;
    let (l, r) = cocycle_sides(&alg, &sigma, b2, b2, &u1.mul(u1));
    let (l2, r2) = cocycle_sides(&alg, &sigma, &b2.mul(b2), u1, u1);
    assert!(l != r || l2 != r2);
}

#[test]
fn descent_on_splits() {
    for (name, comp) in [("i2", 0), ("i2", 1), ("link12", 0), ("link13", 1)] {
        let inst = load(name);
        let alg = SplitAlgebras::new(&inst.datum, comp).unwrap();
        let s = descent_suite(&alg, 3, 40);
        assert!(s.passed(), "{name}/{comp}: {}", show(&s));
    }
    // the displayed generator cases: b = b_k and u = u_j give 0 + 0
    let inst = load("i2");
    let alg = SplitAlgebras::new(&inst.datum, 0).unwrap();
    let s = descent_suite(&alg, 3, 5);
    let bk = s.checks.iter().find(|c| c.identity == "chk1" && c.case.ends_with("b = b2")).unwrap();
    assert_eq!(bk.notes.len(), 2);
    assert!(bk.notes.iter().all(|n| n.ends_with("= 0")), "{:?}", bk.notes);
    let uj = s.checks.iter().find(|c| c.identity == "chk2" && c.case.ends_with("u = u1")).unwrap();
    assert!(uj.notes.iter().all(|n| n.ends_with("= 0")), "{:?}", uj.notes);
    let yk = s.checks.iter().find(|c| c.identity == "chk1" && c.case.ends_with("b = y1")).unwrap();
    assert_eq!(yk.notes.len(), 1);
    assert!(yk.notes[0].ends_with("= 1"), "{:?}", yk.notes);
}

#[test]
fn deformation_witness_on_i2() {
    let inst = load("i2");
    let alg = SplitAlgebras::new(&inst.datum, 0).unwrap();
    let s = deformation_suite(&alg);
    assert!(s.passed(), "{}", show(&s));
    assert_eq!(s.checks.len(), 2);

    // explicit: D_σ = λ_12 (1⊗1 − z_1⊗g_2), mapping to 1 − g_1 g_2
    let tau = Tau::new(&alg);
    let inv = tau.inverse();
    let (sigma, sigma_inv) = (Sigma::new(&alg, &tau), Sigma::new(&alg, &inv));
    let (u, b, h) = (alg.u_ctx(), alg.b_ctx(), alg.h_ctx());
    let x = alg.pair(&u.letter(0), &b.one());
    let y = alg.pair(&u.one(), &b.letter(0));
    let q = inst.datum.q(0, 1);
    let d = deform_product(&alg, &x, &y, &sigma, &sigma_inv).sub(&deform_product(&alg, &y, &x, &sigma, &sigma_inv).scale(&q));
    let z1 = u.group_element(1);
    let g2 = parse_element(b, "g[0,1]").unwrap();
    assert_eq!(d, alg.one().sub(&alg.pair(&z1, &g2)));
    assert_eq!(alg.coset_image(&d), parse_element(h, "1 - g[1,1]").unwrap());

    // on group-likes the deformed product is the plain one
    let g = alg.pair(&z1, &g2);
    assert_eq!(deform_product(&alg, &g, &g, &sigma, &sigma_inv), g.mul(&g));
}

#[test]
fn deformed_product_structure() {
    for (name, comp) in [("i2", 0), ("link12", 1)] {
        let inst = load(name);
        let alg = SplitAlgebras::new(&inst.datum, comp).unwrap();
        let s = deformed_structure_suite(&alg, 5, 20, Execution::Parallel);
        assert!(s.passed(), "{name}: {}", show(&s));
    }
}

#[test]
fn fif_on_i1() {
    let inst = load("i1");
    let d = &inst.datum;
    let p = Presentation::new(d, &inst.gamma, Flavor::partial(d, 0), 12).unwrap();
    let q = p.certify(Execution::Parallel).unwrap();
    let f = build_f(q, 0).unwrap();
    let ctx = p.ctx();
    let el = |s: &str| parse_element(ctx, s).unwrap();
    assert_eq!(f.generators(), &[Root::new(0, 1)]);
    assert!(f.eval(&el("g[7]")).unwrap().is_one());
    assert!(f.eval(&el("1 - g[5]")).unwrap().is_zero());
    assert!(f.eval(&el("a1^5")).unwrap().is_one());
    assert_eq!(f.eval(&el("2 a1^10 g[3] + a1^5")).unwrap(), ctx.field().int(3));
    assert!(matches!(f.eval(&el("a1")), Err(TwistError::NotInK(_))));

    let e = el("a1^5");
    assert_eq!(f.left(&e).unwrap(), el("a1^5 + g[5]"));
    let lhs = f.right_inverse(&f.left(&e).unwrap()).unwrap();
    assert_eq!(lhs, el("a1^5 - 1 + g[5]"));

    let s = fif_suite(d, &inst.gamma, 0, 12, Execution::Parallel).unwrap();
    assert!(s.passed(), "{}", show(&s));
}

#[test]
fn fif_on_i3() {
    let inst = load("i3");
    let d = &inst.datum;
    let s = fif_suite(d, &inst.gamma, 0, 24, Execution::Parallel).unwrap();
    assert!(s.passed(), "{}", show(&s));
    assert_eq!(s.checks.iter().filter(|c| c.identity == "fif").count(), 2);

    let p = Presentation::new(d, &inst.gamma, Flavor::partial(d, 0), 24).unwrap();
    let f = build_f(p.certify(Execution::Parallel).unwrap(), 0).unwrap();
    assert!(f.generator_value(Root::from_one_based(1, 2)).unwrap().is_one());
    assert_eq!(*f.generator_value(Root::from_one_based(1, 3)).unwrap(), d.field().int(3));
    assert!(matches!(f.generator_value(Root::from_one_based(2, 3)), Err(TwistError::NotGenerator(_))));
    // f(u_{i,i+1}) = 0
    let us = p.u_elements(0);
    assert!(f.eval(us.get(Root::from_one_based(1, 2))).unwrap().is_zero());
    assert!(f.eval(us.get(Root::from_one_based(2, 3))).unwrap().is_zero());

    let zero = RootParameterFamily::zero(d.field());
    let s = fif_suite(d, &zero, 0, 24, Execution::Sequential).unwrap();
    assert!(s.passed(), "{}", show(&s));
}

#[test]
fn fif_detects_a_wrong_target() {
    let inst = load("i1");
    let d = &inst.datum;
    let p = Presentation::new(d, &inst.gamma, Flavor::partial(d, 0), 12).unwrap();
    let f = build_f(p.certify(Execution::Parallel).unwrap(), 0).unwrap();
    let ctx = p.ctx();
    let e = parse_element(ctx, "a1^5").unwrap();
    // without f^{-1} the u-term does not appear
    let once = f.left(&e).unwrap();
    assert_ne!(once, parse_element(ctx, "a1^5 - 1 + g[5]").unwrap());
    assert_eq!(check_fif(&f, Root::new(0, 1)).outcome, Outcome::Pass);
}
