use std::path::PathBuf;
use std::sync::OnceLock;

use proptest::prelude::*;

use pointed_hopf::cocycle::{SplitAlgebras, Tau, UBForm};
use pointed_hopf::datum::{load_datum, Instance};
use pointed_hopf::group::GroupSpec;
use pointed_hopf::hopf::{antipode, coproduct, coproduct_on_leg, counit, Presentation};
use pointed_hopf::ncalg::{Flavor, Monomial, SmashElement, Strategy as Order};
use pointed_hopf::scalars::CycField;

fn instance(name: &str) -> Instance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    load_datum(path).unwrap()
}

fn i3() -> &'static Presentation {
    static P: OnceLock<Presentation> = OnceLock::new();
    P.get_or_init(|| {
        let inst = instance("i3.toml");
        Presentation::new(&inst.datum, &inst.gamma, Flavor::Lifted, 24).unwrap()
    })
}

/// (word, group index, integer coefficient, ζ-exponent) terms.
fn terms(letters: u8, group: u32, max_len: usize) -> impl Strategy<Value = Vec<(Vec<u8>, u32, i64, i64)>> {
    prop::collection::vec(
        (prop::collection::vec(0..letters, 0..=max_len), 0..group, -3i64..=3, 0i64..50),
        1..=3,
    )
}

fn build(ctx: &pointed_hopf::ncalg::Ctx, t: &[(Vec<u8>, u32, i64, i64)]) -> SmashElement {
    let f = ctx.field();
    let mut x = ctx.zero();
    for (w, g, c, k) in t {
        x.add_term(Monomial::new(w, *g), f.int(*c).mul_zeta(*k));
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_arithmetic(a in prop::collection::vec(-5i64..=5, 4), b in prop::collection::vec(-5i64..=5, 4), k in 0i64..100) {
        let f = CycField::get(20);
        let x = (0..4).fold(f.zero(), |s, i| &s + &f.int(a[i]).mul_zeta(i as i64 * 3));
        let y = (0..4).fold(f.zero(), |s, i| &s + &f.int(b[i]).mul_zeta(i as i64 * 7 + 1));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) * &f.zeta_pow(k), &x.mul_zeta(k) + &y.mul_zeta(k));
        prop_assert_eq!(f.zeta_pow(k).pow(20).unwrap(), f.one());
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), f.one());
        }
    }

    #[test]
    fn group_index_roundtrip(orders in prop::collection::vec(1u32..8, 1..4), seed in 0u32..10_000) {
        let g = GroupSpec::new(orders).unwrap();
        let idx = seed % g.size() as u32;
        prop_assert_eq!(g.index_of(&g.element_at(idx)), idx);
    }

    #[test]
    fn coalgebra_axioms_on_i3(t in terms(2, 625, 5)) {
        let ctx = i3().ctx();
        let x = build(ctx, &t);
        let d = coproduct(&x);
        prop_assert_eq!(coproduct_on_leg(&d, 0), coproduct_on_leg(&d, 1));
        let s = d.map_leg(0, ctx, |m| antipode(&ctx.term(m.clone(), ctx.field().one()))).multiply_legs();
        prop_assert_eq!(s, ctx.one().scale(&counit(&x)));
    }

    #[test]
    fn coproduct_is_multiplicative(a in terms(2, 625, 3), b in terms(2, 625, 3)) {
        let ctx = i3().ctx();
        let (x, y) = (build(ctx, &a), build(ctx, &b));
        prop_assert_eq!(coproduct(&(&x * &y)), coproduct(&x).mul(&coproduct(&y)));
    }

    #[test]
    fn normal_forms_on_i3(a in terms(2, 625, 8), b in terms(2, 625, 8), c in -4i64..=4) {
        let p = i3();
        let rs = p.rewrite_system();
        let (x, y) = (build(p.ctx(), &a), build(p.ctx(), &b));
        let nx = rs.reduce(&x);
        prop_assert_eq!(rs.reduce(&nx), nx.clone());
        prop_assert_eq!(rs.reduce_with(&x, Order::Leftmost), rs.reduce_with(&x, Order::Rightmost));
        let k = p.ctx().field().int(c);
        prop_assert_eq!(rs.reduce(&(&x.scale(&k) + &y)), &nx.scale(&k) + &rs.reduce(&y));
        // a normal form of a product only depends on the factors' classes
        prop_assert_eq!(rs.reduce(&(&x * &y)), rs.reduce(&(&nx * &rs.reduce(&y))));
    }

    #[test]
    fn tau_is_multiplicative_in_u(w1 in prop::collection::vec(0u8..1, 0..3), w2 in prop::collection::vec(0u8..1, 0..3),
                                  a in prop::collection::vec(0u8..1, 0..4), g in 0u32..25) {
        let inst = instance("i2.toml");
        let alg = SplitAlgebras::new(&inst.datum, 0).unwrap();
        let (u, b) = (alg.u_ctx(), alg.b_ctx());
        let tau = Tau::new(&alg);
        let x = u.term(Monomial::new(&w1, 1), u.field().one());
        let y = u.term(Monomial::new(&w2, 2), u.field().one());
        let bel = b.term(Monomial::new(&a, g), b.field().one());
        let mut rhs = u.field().zero();
        for (k, c) in coproduct(&bel).terms() {
            let v = &tau.eval(&x, &b.term(k[0].clone(), b.field().one())) * &tau.eval(&y, &b.term(k[1].clone(), b.field().one()));
            rhs = &rhs + &(c * &v);
        }
        prop_assert_eq!(tau.eval(&(&x * &y), &bel), rhs);
    }
}
