//! Seeded structural checks: the Hopf axioms of `H_0` and the properties of
//! normal forms in a presentation.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{antipode, coproduct, coproduct_on_leg, counit, counit_monomial, Presentation};
use crate::ncalg::{Ctx, Monomial, SmashElement, Strategy, Tensor};
use crate::par::Execution;
use crate::report::{Check, Suite};

/// A random element of `H_0`: up to three terms, words of length at most
/// `max_len`, coefficients `c ζ^k` with small integers `c`.
pub fn random_element(ctx: &Ctx, rng: &mut ChaCha8Rng, max_len: usize) -> SmashElement {
    let f = ctx.field();
    let mut x = ctx.zero();
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(0..=max_len);
        let w: Vec<u8> = (0..len).map(|_| rng.gen_range(0..ctx.num_letters()) as u8).collect();
        let g = rng.gen_range(0..ctx.group_size());
        let c = f.int(rng.gen_range(-3..=3)).mul_zeta(rng.gen_range(0..f.conductor()) as i64);
        x.add_term(Monomial::new(&w, g), c);
    }
    x
}

fn counit_leg(t: &Tensor, leg: usize) -> SmashElement {
    let f = t.ctxs()[0].field();
    t.contract_leg(leg, |m| if counit_monomial(m) { f.one() } else { f.zero() }).into_element()
}

fn summarize(identity: &str, samples: usize, bad: Vec<Option<String>>, t0: Instant) -> Check {
    let bad: Vec<String> = bad.into_iter().flatten().collect();
    let case = format!("{samples} samples");
    match bad.first() {
        None => Check::pass(identity, case).timed(t0),
        Some(w) => Check::fail(identity, case, w.clone()).note(format!("{} failures", bad.len())).timed(t0),
    }
}

/// Coassociativity, counit, antipode, and multiplicativity of `Δ` on
/// `samples` random elements of `H_0`.
pub fn hopf_axioms_suite(ctx: &Ctx, seed: u64, samples: usize, exec: Execution) -> Suite {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<SmashElement> = (0..2 * samples).map(|_| random_element(ctx, &mut rng, 4)).collect();
    let mut suite = Suite::new("hopf-axioms");

    let t0 = Instant::now();
    let bad = exec.map(&xs[..samples], |x| {
        let d = coproduct(x);
        (coproduct_on_leg(&d, 0) != coproduct_on_leg(&d, 1)).then(|| format!("x = {x}"))
    });
    suite.push(summarize("coassociativity", samples, bad, t0));

    let t0 = Instant::now();
    let bad = exec.map(&xs[..samples], |x| {
        let d = coproduct(x);
        (counit_leg(&d, 0) != *x || counit_leg(&d, 1) != *x).then(|| format!("x = {x}"))
    });
    suite.push(summarize("counit", samples, bad, t0));

    let t0 = Instant::now();
    let bad = exec.map(&xs[..samples], |x| {
        let d = coproduct(x);
        let e = ctx.one().scale(&counit(x));
        let s_left = d.map_leg(0, ctx, |m| antipode(&ctx.term(m.clone(), ctx.field().one()))).multiply_legs();
        let s_right = d.map_leg(1, ctx, |m| antipode(&ctx.term(m.clone(), ctx.field().one()))).multiply_legs();
        (s_left != e || s_right != e).then(|| format!("x = {x}"))
    });
    suite.push(summarize("antipode", samples, bad, t0));

    let t0 = Instant::now();
    let bad = exec.map_range(samples, |i| {
        let (x, y) = (&xs[i], &xs[samples + i]);
        (coproduct(&(x * y)) != coproduct(x).mul(&coproduct(y))).then(|| format!("x = {x}, y = {y}"))
    });
    suite.push(summarize("coproduct-multiplicative", samples, bad, t0));
    suite
}

/// Normal forms in `p`: idempotent, linear, independent of the rewriting
/// strategy and of the execution mode.
pub fn normal_form_suite(p: &Presentation, seed: u64, samples: usize, max_len: usize, exec: Execution) -> Suite {
    let ctx = p.ctx();
    let rs = p.rewrite_system();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<SmashElement> = (0..2 * samples).map(|_| random_element(ctx, &mut rng, max_len)).collect();
    let f = ctx.field();
    let scalars: Vec<_> = (0..samples).map(|_| f.int(rng.gen_range(-4..=4)).mul_zeta(rng.gen_range(0..8))).collect();
    let mut suite = Suite::new(format!("normal-form ({})", p.flavor().name()));

    let t0 = Instant::now();
    let bad = exec.map(&xs[..samples], |x| {
        let n = rs.reduce(x);
        (rs.reduce(&n) != n).then(|| format!("x = {x}"))
    });
    suite.push(summarize("idempotent", samples, bad, t0));

    let t0 = Instant::now();
    let bad = exec.map_range(samples, |i| {
        let (x, y, c) = (&xs[i], &xs[samples + i], &scalars[i]);
        let lhs = rs.reduce(&(&x.scale(c) + y));
        let rhs = &rs.reduce(x).scale(c) + &rs.reduce(y);
        (lhs != rhs).then(|| format!("x = {x}, y = {y}, c = {c}"))
    });
    suite.push(summarize("linear", samples, bad, t0));

    let t0 = Instant::now();
    let bad = exec.map(&xs[..samples], |x| {
        let l = rs.reduce_with(x, Strategy::Leftmost);
        let r = rs.reduce_with(x, Strategy::Rightmost);
        (l != r).then(|| format!("x = {x}: {l} vs {r}"))
    });
    suite.push(summarize("strategies-agree", samples, bad, t0));

    let t0 = Instant::now();
    let bad: Vec<Option<String>> = xs[..samples]
        .iter()
        .map(|x| {
            let s = rs.reduce_exec(x, Execution::Sequential);
            let q = rs.reduce_exec(x, Execution::Parallel);
            (s != q).then(|| format!("x = {x}"))
        })
        .collect();
    suite.push(summarize("modes-agree", samples, bad, t0));
    suite
}
