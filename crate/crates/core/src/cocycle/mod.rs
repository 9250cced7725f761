//! The cocycle `σ` on `U ⊗ B` attached to a split datum, the deformed
//! product, the descent checks for `ρ = σ̃σ^{-1}`, and the algebra-map twist
//! `f` of a root-vector quotient.

mod twist;

use std::time::Instant;

use dashmap::DashMap;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::datum::{split_datum, DatumError, LinkingDatum, SplitDatum};
use crate::hopf::{antipode, coproduct_monomial};
use crate::ncalg::{Ctx, Monomial, SmashContext, SmashElement, Tensor, TensorKey};
use crate::par::Execution;
use crate::report::{Check, Suite};
use crate::scalars::{CycField, CycScalar};

pub use twist::{build_f, check_fif, fif_suite, k_generators, TwistError, TwistMap};

/// `U = u(D_2)` over `Υ` and `B = u(D_1)` over `Γ` for one split, together
/// with the original `H_0` for the coset map `z_i ↦ g_i`.
#[derive(Debug)]
pub struct SplitAlgebras {
    split: SplitDatum,
    datum: LinkingDatum,
    u: Ctx,
    b: Ctx,
    h: Ctx,
    /// `ζ`-exponent of `χ_i(y)` for part vertex `i` and `y ∈ Γ` (by index).
    chi_part: Vec<Vec<u32>>,
    /// `δ_j(b_l) = −χ_j(g_l) λ_{jl}` for local `j`, `l`.
    delta: Vec<Vec<CycScalar>>,
}

impl SplitAlgebras {
    pub fn new(d: &LinkingDatum, component: usize) -> Result<Self, DatumError> {
        let split = split_datum(d, component)?;
        let u = SmashContext::from_datum(&split.part);
        let b = SmashContext::from_datum(&split.rest);
        let h = SmashContext::from_datum(d);
        let e = d.field().conductor();
        let chi_part = split
            .part_chi
            .iter()
            .map(|chi| d.group().elements().map(|y| d.group().pairing_exponent(chi, &y, e)).collect())
            .collect();
        let delta = (0..split.part_vertices.len())
            .map(|j| {
                (0..split.rest_vertices.len())
                    .map(|l| match split.cross.get(&(j, l)) {
                        Some(lam) => -&(&d.evaluate(&split.part_chi[j], split.rest.g(l)) * lam),
                        None => d.field().zero(),
                    })
                    .collect()
            })
            .collect();
        Ok(SplitAlgebras { split, datum: d.clone(), u, b, h, chi_part, delta })
    }

    pub fn split(&self) -> &SplitDatum {
        &self.split
    }

    pub fn u_ctx(&self) -> &Ctx {
        &self.u
    }

    pub fn b_ctx(&self) -> &Ctx {
        &self.b
    }

    /// `H_0` of the original datum.
    pub fn h_ctx(&self) -> &Ctx {
        &self.h
    }

    pub fn field(&self) -> &'static CycField {
        self.datum.field()
    }

    /// `γ_z(y) = ∏ χ_i(y)^{z_i}` as a `ζ`-exponent.
    fn gamma_exp(&self, z: u32, y: u32) -> u64 {
        let zel = self.u.element(z);
        zel.exponents().iter().zip(&self.chi_part).map(|(&k, row)| k as u64 * row[y as usize] as u64).sum()
    }

    /// A `U`-monomial as `u_j … z[…]`, letters numbered by global vertex.
    pub fn show_u(&self, m: &Monomial) -> String {
        self.show(m, &self.u, &self.split.part_vertices, 'u', 'z')
    }

    /// A `B`-monomial as `b_l … y[…]`.
    pub fn show_b(&self, m: &Monomial) -> String {
        self.show(m, &self.b, &self.split.rest_vertices, 'b', 'y')
    }

    /// An element of `U ⊗ B` as a sum of `c·(u ⊗ b)`.
    pub fn show_pair(&self, t: &Tensor) -> String {
        if t.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = t
            .terms()
            .iter()
            .map(|(k, c)| {
                let body = format!("({} ⊗ {})", self.show_u(&k[0]), self.show_b(&k[1]));
                if c.is_one() {
                    body
                } else if (-c).is_one() {
                    format!("-{body}")
                } else {
                    format!("({c})·{body}")
                }
            })
            .collect();
        terms.join(" + ").replace("+ -", "- ")
    }

    fn show(&self, m: &Monomial, ctx: &Ctx, vertices: &[usize], letter: char, group: char) -> String {
        let mut parts: Vec<String> = m.word.iter().map(|&l| format!("{letter}{}", vertices[l as usize] + 1)).collect();
        if m.g != 0 {
            parts.push(format!("{group}{}", ctx.element(m.g)));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    /// `u ⊗ b` as an element of `U ⊗ B`.
    pub fn pair(&self, u: &SmashElement, b: &SmashElement) -> Tensor {
        Tensor::pure(&[u, b])
    }

    pub fn one(&self) -> Tensor {
        self.pair(&self.u.one(), &self.b.one())
    }

    /// Algebra generators of `U ⊗ B` with display names: `u_j⊗1`, `z_i⊗1`,
    /// `1⊗b_l`, `1⊗y_k`.
    pub fn generators(&self) -> Vec<(String, Tensor)> {
        let mut out = Vec::new();
        let (u1, b1) = (self.u.one(), self.b.one());
        for j in 0..self.u.num_letters() {
            out.push((format!("u{}", self.split.part_vertices[j] + 1), self.pair(&self.u.letter(j), &b1)));
        }
        for i in 0..self.split.part.group().rank() {
            let z = self.u.index(&self.split.part.group().generator(i));
            out.push((format!("z{}", self.split.part_vertices[i] + 1), self.pair(&self.u.group_element(z), &b1)));
        }
        for l in 0..self.b.num_letters() {
            out.push((format!("b{}", self.split.rest_vertices[l] + 1), self.pair(&u1, &self.b.letter(l))));
        }
        for k in 0..self.datum.group().rank() {
            let y = self.b.index(&self.datum.group().generator(k));
            out.push((format!("y{}", k + 1), self.pair(&u1, &self.b.group_element(y))));
        }
        out
    }

    /// `Δ(u ⊗ a) = (u_1 ⊗ a_1) ⊗ (u_2 ⊗ a_2)` on one key.
    pub fn coproduct_key(&self, k: &TensorKey) -> Vec<(TensorKey, TensorKey, u64)> {
        let du = coproduct_monomial(&self.u, &k[0]);
        let db = coproduct_monomial(&self.b, &k[1]);
        let mut out = Vec::with_capacity(du.len() * db.len());
        for (u1, u2, e1) in &du {
            for (b1, b2, e2) in &db {
                out.push((TensorKey::from_iter([u1.clone(), b1.clone()]), TensorKey::from_iter([u2.clone(), b2.clone()]), e1 + e2));
            }
        }
        out
    }

    /// Leg-wise product of two keys.
    pub fn mul_keys(&self, x: &TensorKey, y: &TensorKey) -> (u64, TensorKey) {
        let (e1, u) = self.u.mul_monomials(&x[0], &y[0]);
        let (e2, b) = self.b.mul_monomials(&x[1], &y[1]);
        (e1 + e2, TensorKey::from_iter([u, b]))
    }

    pub fn mul(&self, x: &Tensor, y: &Tensor) -> Tensor {
        x.mul(y)
    }

    pub fn counit_key(k: &TensorKey) -> bool {
        k[0].word.is_empty() && k[1].word.is_empty()
    }

    pub fn counit(&self, x: &Tensor) -> CycScalar {
        let mut s = self.field().zero();
        for (k, c) in x.terms() {
            if Self::counit_key(k) {
                s = &s + c;
            }
        }
        s
    }

    /// `z_i ↦ g_i`, `u_j ↦ a_j`, `b_l ↦ a_l`: the image in `H_0` of a
    /// representative, read as `(u-part)(b-part)`.
    pub fn coset_image(&self, x: &Tensor) -> SmashElement {
        let h = &self.h;
        let mut out = h.zero();
        for (k, c) in x.terms() {
            let mut e = h.scalar(c.clone());
            for &l in &k[0].word {
                e = &e * &h.letter(self.split.part_vertices[l as usize]);
            }
            let z = self.u.element(k[0].g);
            let mut g = 0u32;
            for (i, &zi) in z.exponents().iter().enumerate() {
                let gi = h.index(&self.split.part_g[i]);
                g = h.gmul(g, h.gpow(gi, zi as i64));
            }
            e = &e * &h.group_element(g);
            for &l in &k[1].word {
                e = &e * &h.letter(self.split.rest_vertices[l as usize]);
            }
            e = &e * &h.group_element(h.index(&self.b.element(k[1].g)));
            out += &e;
        }
        out
    }
}

/// A bilinear form `U × B → k` given on monomials.
pub trait UBForm: Sync {
    fn eval_monomials(&self, u: &Monomial, b: &Monomial) -> CycScalar;

    fn eval(&self, u: &SmashElement, b: &SmashElement) -> CycScalar {
        let mut s = u.ctx().field().zero();
        for (mu, cu) in u.terms() {
            for (mb, cb) in b.terms() {
                let v = self.eval_monomials(mu, mb);
                if !v.is_zero() {
                    s = &s + &(&(cu * cb) * &v);
                }
            }
        }
        s
    }
}

/// `τ(u, b) = φ(u)(b)` with `φ(z_i) = γ_i`, `φ(u_j) = δ_j`; the zeroed
/// variant uses `δ̃_j = 0`.
#[derive(Debug)]
pub struct Tau<'a> {
    alg: &'a SplitAlgebras,
    zeroed: bool,
    memo: DashMap<(Monomial, Monomial), CycScalar>,
}

impl<'a> Tau<'a> {
    pub fn new(alg: &'a SplitAlgebras) -> Self {
        Tau { alg, zeroed: false, memo: DashMap::new() }
    }

    /// `τ̃`, built from `δ̃_j(b_l) = 0`.
    pub fn zeroed(alg: &'a SplitAlgebras) -> Self {
        Tau { alg, zeroed: true, memo: DashMap::new() }
    }

    pub fn algebras(&self) -> &'a SplitAlgebras {
        self.alg
    }

    pub fn inverse(&self) -> TauInverse<'_, 'a> {
        TauInverse { tau: self }
    }

    fn compute(&self, u: &Monomial, b: &Monomial) -> CycScalar {
        let alg = self.alg;
        let f = alg.field();
        if u.word.is_empty() {
            // γ_z is a character of B: zero on the letters
            return if b.word.is_empty() { f.zeta_pow(alg.gamma_exp(u.g, b.g) as i64) } else { f.zero() };
        }
        if self.zeroed {
            return f.zero();
        }
        // τ(u_j v, b) = Σ δ_j(b_1) τ(v, b_2); δ_j(b_l y) = δ_j(b_l) γ_j(y)
        let j = u.word[0] as usize;
        let rest = Monomial::new(&u.word[1..], u.g);
        let mut s = f.zero();
        for (b1, b2, e) in coproduct_monomial(&alg.b, b) {
            if b1.word.len() != 1 {
                continue;
            }
            let dj = &alg.delta[j][b1.word[0] as usize];
            if dj.is_zero() {
                continue;
            }
            let t = self.eval_monomials(&rest, &b2);
            if t.is_zero() {
                continue;
            }
            let gy = alg.chi_part[j][b1.g as usize] as i64;
            s = &s + &(dj * &t).mul_zeta(e as i64 + gy);
        }
        s
    }
}

impl UBForm for Tau<'_> {
    fn eval_monomials(&self, u: &Monomial, b: &Monomial) -> CycScalar {
        let key = (u.clone(), b.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = self.compute(u, b);
        self.memo.insert(key, v.clone());
        v
    }
}

/// `τ^{-1}(u, b) = τ(S u, b)`.
#[derive(Debug, Clone, Copy)]
pub struct TauInverse<'t, 'a> {
    tau: &'t Tau<'a>,
}

impl UBForm for TauInverse<'_, '_> {
    fn eval_monomials(&self, u: &Monomial, b: &Monomial) -> CycScalar {
        let ctx = &self.tau.alg.u;
        let su = antipode(&ctx.term(u.clone(), ctx.field().one()));
        let mut s = ctx.field().zero();
        for (m, c) in su.terms() {
            s = &s + &(c * &self.tau.eval_monomials(m, b));
        }
        s
    }
}

/// A bilinear form on `U ⊗ B`.
pub trait PairForm: Sync {
    fn eval_keys(&self, x: &TensorKey, y: &TensorKey) -> CycScalar;
}

pub fn eval_pair(f: &dyn PairForm, x: &Tensor, y: &Tensor) -> CycScalar {
    let field = x.ctxs()[0].field();
    let mut s = field.zero();
    for (kx, cx) in x.terms() {
        for (ky, cy) in y.terms() {
            let v = f.eval_keys(kx, ky);
            if !v.is_zero() {
                s = &s + &(&(cx * cy) * &v);
            }
        }
    }
    s
}

/// `σ(u⊗a, v⊗b) = ε_U(u) τ(v, a) ε_B(b)` for any form `τ`.
pub struct Sigma<'f> {
    tau: &'f dyn UBForm,
    field: &'static CycField,
}

impl<'f> Sigma<'f> {
    pub fn new(alg: &SplitAlgebras, tau: &'f dyn UBForm) -> Self {
        Sigma { tau, field: alg.field() }
    }
}

impl PairForm for Sigma<'_> {
    fn eval_keys(&self, x: &TensorKey, y: &TensorKey) -> CycScalar {
        if !x[0].word.is_empty() || !y[1].word.is_empty() {
            return self.field.zero();
        }
        self.tau.eval_monomials(&y[0], &x[1])
    }
}

/// `(f * g)(x, y) = f(x_1, y_1) g(x_2, y_2)`.
pub struct Convolution<'f> {
    alg: &'f SplitAlgebras,
    f: &'f dyn PairForm,
    g: &'f dyn PairForm,
    memo: DashMap<(TensorKey, TensorKey), CycScalar>,
}

impl<'f> Convolution<'f> {
    pub fn new(alg: &'f SplitAlgebras, f: &'f dyn PairForm, g: &'f dyn PairForm) -> Self {
        Convolution { alg, f, g, memo: DashMap::new() }
    }
}

impl PairForm for Convolution<'_> {
    fn eval_keys(&self, x: &TensorKey, y: &TensorKey) -> CycScalar {
        let key = (x.clone(), y.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let field = self.alg.field();
        let dy = self.alg.coproduct_key(y);
        let mut s = field.zero();
        for (x1, x2, ex) in self.alg.coproduct_key(x) {
            for (y1, y2, ey) in &dy {
                let a = self.f.eval_keys(&x1, y1);
                if a.is_zero() {
                    continue;
                }
                let b = self.g.eval_keys(&x2, y2);
                if b.is_zero() {
                    continue;
                }
                s = &s + &(&a * &b).mul_zeta((ex + ey) as i64);
            }
        }
        self.memo.insert(key, s.clone());
        s
    }
}

/// `x ·_σ y = σ(x_1, y_1) x_2 y_2 σ^{-1}(x_3, y_3)`.
pub fn deform_product(alg: &SplitAlgebras, x: &Tensor, y: &Tensor, sigma: &dyn PairForm, sigma_inv: &dyn PairForm) -> Tensor {
    let mut out = Tensor::zero(vec![alg.u.clone(), alg.b.clone()]);
    for (kx, cx) in x.terms() {
        let tx = coproduct3_key(alg, kx);
        for (ky, cy) in y.terms() {
            let ty = coproduct3_key(alg, ky);
            let c0 = cx * cy;
            for (x1, x2, x3, ex) in &tx {
                for (y1, y2, y3, ey) in &ty {
                    let a = sigma.eval_keys(x1, y1);
                    if a.is_zero() {
                        continue;
                    }
                    let b = sigma_inv.eval_keys(x3, y3);
                    if b.is_zero() {
                        continue;
                    }
                    let (e, k) = alg.mul_keys(x2, y2);
                    out.add_term(k, (&(&c0 * &a) * &b).mul_zeta((ex + ey + e) as i64));
                }
            }
        }
    }
    out
}

type Key3 = (TensorKey, TensorKey, TensorKey, u64);

fn coproduct3_key(alg: &SplitAlgebras, k: &TensorKey) -> Vec<Key3> {
    let mut out = Vec::new();
    for (k1, k23, e1) in alg.coproduct_key(k) {
        for (k2, k3, e2) in alg.coproduct_key(&k23) {
            out.push((k1.clone(), k2, k3, e1 + e2));
        }
    }
    out
}

/// Everything needed to run the cocycle checks on one split.
pub struct CocycleSetting<'a> {
    pub alg: &'a SplitAlgebras,
    pub tau: Tau<'a>,
    pub tau_tilde: Tau<'a>,
}

impl<'a> CocycleSetting<'a> {
    pub fn new(alg: &'a SplitAlgebras) -> Self {
        CocycleSetting { alg, tau: Tau::new(alg), tau_tilde: Tau::zeroed(alg) }
    }
}

/// Seeded random elements of `U ⊗ B`: small integer combinations of products
/// of at most `max_len` generators.
pub fn random_pairs(alg: &SplitAlgebras, rng: &mut ChaCha8Rng, count: usize, max_len: usize) -> Vec<Tensor> {
    let gens = alg.generators();
    let f = alg.field();
    (0..count)
        .map(|_| {
            let mut x = Tensor::zero(vec![alg.u.clone(), alg.b.clone()]);
            for _ in 0..rng.gen_range(1..=2) {
                let mut t = alg.one();
                for _ in 0..rng.gen_range(0..=max_len) {
                    let (_, g) = gens.choose(rng).expect("generators");
                    t = t.mul(g);
                }
                x.add_assign(&t.scale(&f.int(rng.gen_range(-3..=3))));
            }
            x
        })
        .collect()
}

fn scalar_check(identity: &str, case: String, lhs: &CycScalar, rhs: &CycScalar, t0: Instant) -> Check {
    if lhs == rhs {
        Check::pass(identity, case).timed(t0)
    } else {
        Check::fail(identity, case, format!("{lhs} ≠ {rhs}")).timed(t0)
    }
}

/// `σ(x_1, y_1) σ(x_2 y_2, z) = σ(y_1, z_1) σ(x, y_2 z_2)`.
fn cocycle_sides(alg: &SplitAlgebras, s: &dyn PairForm, x: &Tensor, y: &Tensor, z: &Tensor) -> (CycScalar, CycScalar) {
    let f = alg.field();
    let mut lhs = f.zero();
    let mut rhs = f.zero();
    for (kx, cx) in x.terms() {
        for (ky, cy) in y.terms() {
            for (kz, cz) in z.terms() {
                let c = &(cx * cy) * cz;
                for (x1, x2, ex) in alg.coproduct_key(kx) {
                    for (y1, y2, ey) in alg.coproduct_key(ky) {
                        let a = s.eval_keys(&x1, &y1);
                        if a.is_zero() {
                            continue;
                        }
                        let (e, xy) = alg.mul_keys(&x2, &y2);
                        let b = s.eval_keys(&xy, kz);
                        lhs = &lhs + &(&(&c * &a) * &b).mul_zeta((ex + ey + e) as i64);
                    }
                }
                for (y1, y2, ey) in alg.coproduct_key(ky) {
                    for (z1, z2, ez) in alg.coproduct_key(kz) {
                        let a = s.eval_keys(&y1, &z1);
                        if a.is_zero() {
                            continue;
                        }
                        let (e, yz) = alg.mul_keys(&y2, &z2);
                        let b = s.eval_keys(kx, &yz);
                        rhs = &rhs + &(&(&c * &a) * &b).mul_zeta((ey + ez + e) as i64);
                    }
                }
            }
        }
    }
    (lhs, rhs)
}

/// Cocycle identity on all generator triples and `samples` random triples,
/// unitality, and `σ * σ^{-1} = ε ⊗ ε`.
pub fn cocycle_suite(alg: &SplitAlgebras, seed: u64, samples: usize, exec: Execution) -> Suite {
    let set = CocycleSetting::new(alg);
    let tau_inv = set.tau.inverse();
    let sigma = Sigma::new(alg, &set.tau);
    let sigma_inv = Sigma::new(alg, &tau_inv);
    let mut suite = Suite::new("cocycle");
    let mut gens = vec![("1".to_string(), alg.one())];
    gens.extend(alg.generators());

    let mut triples = Vec::new();
    for a in 0..gens.len() {
        for b in 0..gens.len() {
            for c in 0..gens.len() {
                triples.push((a, b, c));
            }
        }
    }
    let t0 = Instant::now();
    let bad: Vec<String> = exec
        .map(&triples, |&(a, b, c)| {
            let (l, r) = cocycle_sides(alg, &sigma, &gens[a].1, &gens[b].1, &gens[c].1);
            (l != r).then(|| format!("({}, {}, {}): {l} ≠ {r}", gens[a].0, gens[b].0, gens[c].0))
        })
        .into_iter()
        .flatten()
        .collect();
    suite.push(summary("cocycle-identity", format!("{} generator triples", triples.len()), &bad, t0));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = random_pairs(alg, &mut rng, samples * 3, 2);
    let t0 = Instant::now();
    let bad: Vec<String> = exec
        .map_range(samples, |i| {
            let (x, y, z) = (&pool[3 * i], &pool[3 * i + 1], &pool[3 * i + 2]);
            let (l, r) = cocycle_sides(alg, &sigma, x, y, z);
            (l != r).then(|| format!("sample {i}: {l} ≠ {r}"))
        })
        .into_iter()
        .flatten()
        .collect();
    suite.push(summary("cocycle-identity", format!("{samples} random triples"), &bad, t0));

    let t0 = Instant::now();
    let one = alg.one();
    let mut bad = Vec::new();
    for (name, x) in gens.iter().map(|(n, x)| (n.clone(), x)).chain(pool.iter().take(samples).enumerate().map(|(i, x)| (format!("sample {i}"), x))) {
        let e = alg.counit(x);
        let a = eval_pair(&sigma, x, &one);
        let b = eval_pair(&sigma, &one, x);
        if a != e || b != e {
            bad.push(format!("{name}: σ(x,1) = {a}, σ(1,x) = {b}, ε(x) = {e}"));
        }
    }
    suite.push(summary("unitality", "σ(x,1) = ε(x) = σ(1,x)".into(), &bad, t0));

    let t0 = Instant::now();
    let conv = Convolution::new(alg, &sigma, &sigma_inv);
    let mut bad = Vec::new();
    for (a, x) in gens.iter().enumerate() {
        for y in &gens[a..] {
            let v = eval_pair(&conv, &x.1, &y.1);
            let e = &alg.counit(&x.1) * &alg.counit(&y.1);
            if v != e {
                bad.push(format!("({}, {}): {v} ≠ {e}", x.0, y.0));
            }
        }
    }
    for i in 0..samples {
        let (x, y) = (&pool[2 * i], &pool[2 * i + 1]);
        let v = eval_pair(&conv, x, y);
        let e = &alg.counit(x) * &alg.counit(y);
        if v != e {
            bad.push(format!("sample {i}: {v} ≠ {e}"));
        }
    }
    suite.push(summary("convolution-inverse", "σ * σ⁻¹ = ε⊗ε".into(), &bad, t0));
    suite
}

fn summary(identity: &str, case: String, bad: &[String], t0: Instant) -> Check {
    match bad.first() {
        None => Check::pass(identity, case).timed(t0),
        Some(w) => Check::fail(identity, case, w.clone()).note(format!("{} failures", bad.len())).timed(t0),
    }
}

/// The defining properties of `τ` on seeded random monomials:
/// `τ(uv, a) = τ(u, a_1) τ(v, a_2)`, `τ(u, ab) = τ(u_1, b) τ(u_2, a)`,
/// `τ(1, a) = ε(a)` and `τ(u, 1) = ε(u)`.
pub fn tau_property_suite(alg: &SplitAlgebras, seed: u64, samples: usize) -> Suite {
    let tau = Tau::new(alg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = alg.field();
    let (u, b) = (&alg.u, &alg.b);
    let rand_mono = |rng: &mut ChaCha8Rng, ctx: &Ctx, len: usize| {
        let w: Vec<u8> = (0..rng.gen_range(0..=len)).map(|_| rng.gen_range(0..ctx.num_letters()) as u8).collect();
        Monomial::new(&w, rng.gen_range(0..ctx.group_size()))
    };
    let mut bad: [Vec<String>; 4] = Default::default();
    let t0 = Instant::now();
    for i in 0..samples {
        let (x, y) = (rand_mono(&mut rng, u, 2), rand_mono(&mut rng, u, 2));
        let (a, c) = (rand_mono(&mut rng, b, 2), rand_mono(&mut rng, b, 2));

        let (e, xy) = u.mul_monomials(&x, &y);
        let lhs = tau.eval_monomials(&xy, &a).mul_zeta(e as i64);
        let mut rhs = f.zero();
        for (a1, a2, e) in coproduct_monomial(b, &a) {
            let v = &tau.eval_monomials(&x, &a1) * &tau.eval_monomials(&y, &a2);
            rhs = &rhs + &v.mul_zeta(e as i64);
        }
        if lhs != rhs {
            bad[0].push(format!("sample {i}: u = {}, v = {}, a = {}", alg.show_u(&x), alg.show_u(&y), alg.show_b(&a)));
        }

        let (e, ac) = b.mul_monomials(&a, &c);
        let lhs = tau.eval_monomials(&x, &ac).mul_zeta(e as i64);
        let mut rhs = f.zero();
        for (x1, x2, e) in coproduct_monomial(u, &x) {
            let v = &tau.eval_monomials(&x1, &c) * &tau.eval_monomials(&x2, &a);
            rhs = &rhs + &v.mul_zeta(e as i64);
        }
        if lhs != rhs {
            bad[1].push(format!("sample {i}: u = {}, a = {}, b = {}", alg.show_u(&x), alg.show_b(&a), alg.show_b(&c)));
        }

        let eps = |m: &Monomial| if m.word.is_empty() { f.one() } else { f.zero() };
        if tau.eval_monomials(&Monomial::group(0), &a) != eps(&a) {
            bad[2].push(format!("sample {i}: a = {}", alg.show_b(&a)));
        }
        if tau.eval_monomials(&x, &Monomial::group(0)) != eps(&x) {
            bad[3].push(format!("sample {i}: u = {}", alg.show_u(&x)));
        }
    }
    let mut suite = Suite::new("tau-properties");
    let names = ["τ(uv,a) = τ(u,a₁)τ(v,a₂)", "τ(u,ab) = τ(u₁,b)τ(u₂,a)", "τ(1,a) = ε(a)", "τ(u,1) = ε(u)"];
    for (k, name) in names.iter().enumerate() {
        suite.push(summary(&format!("tau-{}", k + 1), format!("{name}, {samples} samples"), &bad[k], t0));
    }
    suite
}

/// The `(chk1)`/`(chk2)` verifications on generators, on random elements,
/// and `ρ(x, z_i⊗g_i^{-1}) = ρ(x, 1)`, `ρ(z_i⊗g_i^{-1}, x) = ρ(1, x)`.
pub fn descent_suite(alg: &SplitAlgebras, seed: u64, samples: usize) -> Suite {
    let set = CocycleSetting::new(alg);
    let (tau, tt) = (&set.tau, &set.tau_tilde);
    let f = alg.field();
    let (u, b) = (&alg.u, &alg.b);
    let split = &alg.split;
    let mut suite = Suite::new("descent");
    let zs: Vec<u32> = (0..split.part.group().rank()).map(|i| u.index(&split.part.group().generator(i))).collect();

    // chk1: τ̃(z_i, b_1) τ(z_i^{-1}, b_2) = ε_B(b)
    let chk1 = |i: usize, bel: &SmashElement| -> (CycScalar, Vec<String>) {
        let z = zs[i];
        let zinv = u.ginv(z);
        let zn = format!("z{}", split.part_vertices[i] + 1);
        let mut s = f.zero();
        let mut parts = Vec::new();
        for (k, c) in crate::hopf::coproduct(bel).terms() {
            let a = tt.eval_monomials(&Monomial::group(z), &k[0]);
            let bv = tau.eval_monomials(&Monomial::group(zinv), &k[1]);
            let v = &(c * &a) * &bv;
            parts.push(format!("τ̃({zn}, {})τ({zn}⁻¹, {}) = {v}", alg.show_b(&k[0]), alg.show_b(&k[1])));
            s = &s + &v;
        }
        (s, parts)
    };
    // chk2: τ̃(u_1, g_i^{-1}) τ(u_2, g_i) = ε_U(u)
    let chk2 = |i: usize, uel: &SmashElement| -> (CycScalar, Vec<String>) {
        let gi = b.index(&split.part_g[i]);
        let ginv = b.ginv(gi);
        let gn = format!("g{}", split.part_vertices[i] + 1);
        let mut s = f.zero();
        let mut parts = Vec::new();
        for (k, c) in crate::hopf::coproduct(uel).terms() {
            let a = tt.eval_monomials(&k[0], &Monomial::group(ginv));
            let bv = tau.eval_monomials(&k[1], &Monomial::group(gi));
            let v = &(c * &a) * &bv;
            parts.push(format!("τ̃({}, {gn}⁻¹)τ({}, {gn}) = {v}", alg.show_u(&k[0]), alg.show_u(&k[1])));
            s = &s + &v;
        }
        (s, parts)
    };

    for i in 0..zs.len() {
        let zname = format!("z{}", split.part_vertices[i] + 1);
        for k in 0..alg.datum.group().rank() {
            let t0 = Instant::now();
            let y = b.group_element(b.index(&alg.datum.group().generator(k)));
            let (v, parts) = chk1(i, &y);
            let mut c = scalar_check("chk1", format!("{zname}, b = y{}", k + 1), &v, &crate::hopf::counit(&y), t0);
            c.notes = parts;
            suite.push(c);
        }
        for l in 0..b.num_letters() {
            let t0 = Instant::now();
            let bl = b.letter(l);
            let (v, parts) = chk1(i, &bl);
            let mut c = scalar_check(
                "chk1",
                format!("{zname}, b = b{}", split.rest_vertices[l] + 1),
                &v,
                &crate::hopf::counit(&bl),
                t0,
            );
            c.notes = parts;
            suite.push(c);
        }
        for j in 0..zs.len() {
            let t0 = Instant::now();
            let z = u.group_element(zs[j]);
            let (v, parts) = chk2(i, &z);
            let name = format!("g{}, u = z{}", split.part_vertices[i] + 1, split.part_vertices[j] + 1);
            let mut c = scalar_check("chk2", name, &v, &crate::hopf::counit(&z), t0);
            c.notes = parts;
            suite.push(c);
        }
        for j in 0..u.num_letters() {
            let t0 = Instant::now();
            let uj = u.letter(j);
            let (v, parts) = chk2(i, &uj);
            let name = format!("g{}, u = u{}", split.part_vertices[i] + 1, split.part_vertices[j] + 1);
            let mut c = scalar_check("chk2", name, &v, &crate::hopf::counit(&uj), t0);
            c.notes = parts;
            suite.push(c);
        }
    }

    // random reinforcement
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = random_pairs(alg, &mut rng, samples, 2);
    let rand_el = |rng: &mut ChaCha8Rng, ctx: &Ctx| {
        let mut x = ctx.zero();
        for _ in 0..3 {
            let w: Vec<u8> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..ctx.num_letters()) as u8).collect();
            x.add_term(Monomial::new(&w, rng.gen_range(0..ctx.group_size())), f.int(rng.gen_range(-3..=3)));
        }
        x
    };
    let t0 = Instant::now();
    let mut bad = Vec::new();
    for n in 0..samples {
        let (uel, bel) = (rand_el(&mut rng, u), rand_el(&mut rng, b));
        for i in 0..zs.len() {
            let (v1, _) = chk1(i, &bel);
            let (v2, _) = chk2(i, &uel);
            if v1 != crate::hopf::counit(&bel) || v2 != crate::hopf::counit(&uel) {
                bad.push(format!("sample {n}: u = {uel}, b = {bel}"));
            }
        }
    }
    suite.push(summary("chk1+chk2", format!("{samples} random elements"), &bad, t0));

    // ρ = σ̃ * σ^{-1} on K^+
    let t0 = Instant::now();
    let tau_inv = tau.inverse();
    let sigma_t = Sigma::new(alg, tt);
    let sigma_inv = Sigma::new(alg, &tau_inv);
    let rho = Convolution::new(alg, &sigma_t, &sigma_inv);
    let one = alg.one();
    let mut bad = Vec::new();
    let mut xs: Vec<(String, Tensor)> = vec![("1".into(), one.clone())];
    xs.extend(alg.generators());
    xs.extend(pool.iter().take(samples.min(20)).enumerate().map(|(n, x)| (format!("sample {n}"), x.clone())));
    for i in 0..zs.len() {
        let gi = b.index(&split.part_g[i]);
        let k = alg.pair(&u.group_element(zs[i]), &b.group_element(b.ginv(gi)));
        for (name, x) in &xs {
            let a = eval_pair(&rho, x, &k);
            let a1 = eval_pair(&rho, x, &one);
            let c = eval_pair(&rho, &k, x);
            let c1 = eval_pair(&rho, &one, x);
            if a != a1 || c != c1 {
                bad.push(format!("{name}: ρ(x,k) = {a}, ρ(x,1) = {a1}, ρ(k,x) = {c}, ρ(1,x) = {c1}"));
            }
        }
    }
    suite.push(summary("rho-kernel", format!("ρ(x, z⊗g⁻¹) = ρ(x, 1), {} elements", xs.len()), &bad, t0));
    suite
}

/// For each linked pair `j ∈ I`, `l ∉ I`: with `x = u_j⊗1`, `y = 1⊗b_l`,
/// `x·_σ y − χ_l(g_j) y·_σ x = λ_{jl}(1⊗1 − z_j⊗g_l)` while the same
/// commutator vanishes for `σ̃`; the coset map sends the difference to
/// `λ_{jl}(1 − g_j g_l)`. Also `x·_ρ y = x·_σ̃ y` in `(U⊗B)_σ`.
pub fn deformation_suite(alg: &SplitAlgebras) -> Suite {
    let set = CocycleSetting::new(alg);
    let tau_inv = set.tau.inverse();
    let tt_inv = set.tau_tilde.inverse();
    let sigma = Sigma::new(alg, &set.tau);
    let sigma_inv = Sigma::new(alg, &tau_inv);
    let sigma_t = Sigma::new(alg, &set.tau_tilde);
    let sigma_t_inv = Sigma::new(alg, &tt_inv);
    let rho = Convolution::new(alg, &sigma_t, &sigma_inv);
    let rho_inv = Convolution::new(alg, &sigma, &sigma_t_inv);
    let (u, b, h) = (&alg.u, &alg.b, &alg.h);
    let split = &alg.split;
    let d = &alg.datum;
    let mut suite = Suite::new("deformation");
    for (j, &gj) in split.part_vertices.iter().enumerate() {
        for (l, &gl) in split.rest_vertices.iter().enumerate() {
            let t0 = Instant::now();
            let case = format!("a{} a{}", gj + 1, gl + 1);
            let x = alg.pair(&u.letter(j), &b.one());
            let y = alg.pair(&u.one(), &b.letter(l));
            let q = d.q(gj, gl);
            let comm = |s: &dyn PairForm, si: &dyn PairForm| {
                deform_product(alg, &x, &y, s, si).sub(&deform_product(alg, &y, &x, s, si).scale(&q))
            };
            let d_sigma = comm(&sigma, &sigma_inv);
            let d_tilde = comm(&sigma_t, &sigma_t_inv);
            let lam = d.lambda(gj, gl);
            let zj = u.group_element(u.index(&split.part.group().generator(j)));
            let gl_el = b.group_element(b.index(d.g(gl)));
            let expect = alg.one().sub(&alg.pair(&zj, &gl_el)).scale(&lam);
            let mut c = if d_sigma != expect {
                Check::fail("linking-appears", case.clone(), format!("{d_sigma} ≠ {expect}"))
            } else if !d_tilde.is_zero() {
                Check::fail("linking-appears", case.clone(), format!("σ̃ commutator {d_tilde} ≠ 0"))
            } else {
                let img = alg.coset_image(&d_sigma.sub(&d_tilde));
                let gg = h.gmul(h.letter_group(gj), h.letter_group(gl));
                let target = (&h.one() - &h.group_element(gg)).scale(&lam);
                if img == target {
                    Check::pass("linking-appears", case.clone())
                } else {
                    Check::fail("linking-appears", case.clone(), format!("coset image {img} ≠ {target}"))
                }
            };
            c = c
                .note(format!("σ: {}", alg.show_pair(&d_sigma)))
                .note(format!("σ̃: {}", alg.show_pair(&d_tilde)))
                .note(format!("coset image: {}", alg.coset_image(&d_sigma.sub(&d_tilde))));
            suite.push(c.timed(t0));

            let t0 = Instant::now();
            let via_rho = rho_product(alg, &x, &y, &rho, &rho_inv, &sigma, &sigma_inv);
            let direct = deform_product(alg, &x, &y, &sigma_t, &sigma_t_inv);
            let c = if via_rho == direct {
                Check::pass("rho-deforms-sigma", case)
            } else {
                Check::fail("rho-deforms-sigma", case, format!("{via_rho} ≠ {direct}"))
            };
            suite.push(c.timed(t0));
        }
    }
    suite
}

/// `x ·_ρ y = ρ(x_1, y_1) (x_2 ·_σ y_2) ρ^{-1}(x_3, y_3)`.
fn rho_product(
    alg: &SplitAlgebras,
    x: &Tensor,
    y: &Tensor,
    rho: &dyn PairForm,
    rho_inv: &dyn PairForm,
    sigma: &dyn PairForm,
    sigma_inv: &dyn PairForm,
) -> Tensor {
    let mut out = Tensor::zero(vec![alg.u.clone(), alg.b.clone()]);
    for (kx, cx) in x.terms() {
        let tx = coproduct3_key(alg, kx);
        for (ky, cy) in y.terms() {
            let ty = coproduct3_key(alg, ky);
            for (x1, x2, x3, ex) in &tx {
                for (y1, y2, y3, ey) in &ty {
                    let a = rho.eval_keys(x1, y1);
                    if a.is_zero() {
                        continue;
                    }
                    let c = rho_inv.eval_keys(x3, y3);
                    if c.is_zero() {
                        continue;
                    }
                    let px = key_tensor(alg, x2);
                    let py = key_tensor(alg, y2);
                    let prod = deform_product(alg, &px, &py, sigma, sigma_inv);
                    let coef = (&(&(cx * cy) * &a) * &c).mul_zeta((ex + ey) as i64);
                    out.add_assign(&prod.scale(&coef));
                }
            }
        }
    }
    out
}

fn key_tensor(alg: &SplitAlgebras, k: &TensorKey) -> Tensor {
    let mut t = Tensor::zero(vec![alg.u.clone(), alg.b.clone()]);
    t.add_term(k.clone(), alg.field().one());
    t
}

/// `·_σ` is associative and `Δ` is multiplicative for it, on seeded samples.
pub fn deformed_structure_suite(alg: &SplitAlgebras, seed: u64, samples: usize, exec: Execution) -> Suite {
    let set = CocycleSetting::new(alg);
    let tau_inv = set.tau.inverse();
    let sigma = Sigma::new(alg, &set.tau);
    let sigma_inv = Sigma::new(alg, &tau_inv);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = random_pairs(alg, &mut rng, samples * 3, 2);
    let mut suite = Suite::new("deformed-product");
    let t0 = Instant::now();
    let bad: Vec<String> = exec
        .map_range(samples, |i| {
            let (x, y, z) = (&pool[3 * i], &pool[3 * i + 1], &pool[3 * i + 2]);
            let xy = deform_product(alg, x, y, &sigma, &sigma_inv);
            let yz = deform_product(alg, y, z, &sigma, &sigma_inv);
            let l = deform_product(alg, &xy, z, &sigma, &sigma_inv);
            let r = deform_product(alg, x, &yz, &sigma, &sigma_inv);
            (l != r).then(|| format!("sample {i}: x = {x}, y = {y}, z = {z}"))
        })
        .into_iter()
        .flatten()
        .collect();
    suite.push(summary("associativity", format!("{samples} random triples"), &bad, t0));

    let t0 = Instant::now();
    let one = alg.one();
    let mut bad = Vec::new();
    for (i, x) in pool.iter().take(samples).enumerate() {
        if deform_product(alg, x, &one, &sigma, &sigma_inv) != *x || deform_product(alg, &one, x, &sigma, &sigma_inv) != *x {
            bad.push(format!("sample {i}: {x}"));
        }
    }
    suite.push(summary("unit", format!("x·1 = x = 1·x, {samples} samples"), &bad, t0));

    let t0 = Instant::now();
    let bad: Vec<String> = exec
        .map_range(samples, |i| {
            let (x, y) = (&pool[2 * i], &pool[2 * i + 1]);
            let lhs = pair_coproduct(alg, &deform_product(alg, x, y, &sigma, &sigma_inv));
            let dx = pair_coproduct(alg, x);
            let dy = pair_coproduct(alg, y);
            let rhs = deformed_tensor_product(alg, &dx, &dy, &sigma, &sigma_inv);
            (lhs != rhs).then(|| format!("sample {i}: x = {x}, y = {y}"))
        })
        .into_iter()
        .flatten()
        .collect();
    suite.push(summary("coproduct-multiplicative", format!("{samples} random pairs"), &bad, t0));
    suite
}

/// `Δ` on `U ⊗ B` as a four-leg tensor `(u_1, b_1, u_2, b_2)`.
pub fn pair_coproduct(alg: &SplitAlgebras, x: &Tensor) -> Tensor {
    let mut out = Tensor::zero(vec![alg.u.clone(), alg.b.clone(), alg.u.clone(), alg.b.clone()]);
    let one = alg.field().one();
    for (k, c) in x.terms() {
        for (k1, k2, e) in alg.coproduct_key(k) {
            let key = TensorKey::from_iter([k1[0].clone(), k1[1].clone(), k2[0].clone(), k2[1].clone()]);
            out.add_term(key, (c * &one).mul_zeta(e as i64));
        }
    }
    out
}

/// Product of `Δ(x)` and `Δ(y)` in `(U⊗B)_σ ⊗ (U⊗B)_σ`.
fn deformed_tensor_product(alg: &SplitAlgebras, dx: &Tensor, dy: &Tensor, s: &dyn PairForm, si: &dyn PairForm) -> Tensor {
    let mut out = Tensor::zero(dx.ctxs().to_vec());
    let single = |m0: &Monomial, m1: &Monomial| key_tensor(alg, &TensorKey::from_iter([m0.clone(), m1.clone()]));
    for (kx, cx) in dx.terms() {
        for (ky, cy) in dy.terms() {
            let left = deform_product(alg, &single(&kx[0], &kx[1]), &single(&ky[0], &ky[1]), s, si);
            let right = deform_product(alg, &single(&kx[2], &kx[3]), &single(&ky[2], &ky[3]), s, si);
            let c = cx * cy;
            for (a, ca) in left.terms() {
                for (b, cb) in right.terms() {
                    let key = TensorKey::from_iter([a[0].clone(), a[1].clone(), b[0].clone(), b[1].clone()]);
                    out.add_term(key, &(&c * ca) * cb);
                }
            }
        }
    }
    out
}

pub fn split_algebras(d: &LinkingDatum, component: usize) -> Result<SplitAlgebras, DatumError> {
    SplitAlgebras::new(d, component)
}

#[cfg(test)]
mod tests;
