//! The algebra map `f: K → k` on the commutative sub-Hopf-algebra `K`
//! generated by `Γ` and the central powers `e_{i0,j}^N`, and the actions
//! `f.x = x_1 f(x_2)`, `x.f = f(x_1) x_2`.

use std::collections::BTreeMap;
use std::time::Instant;

use dashmap::DashMap;

use crate::datum::{LinkingDatum, Root, RootParameterFamily};
use crate::hopf::{CertifiedQuotient, HopfError, Presentation};
use crate::ncalg::{Flavor, Monomial, SmashElement, Word};
use crate::par::Execution;
use crate::report::{Check, Suite};
use crate::scalars::CycScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwistError {
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error("root {0} is not a generator of K (χ^N ≠ ε or wrong start vertex)")]
    NotGenerator(Root),
    #[error("element is not in K: {0}")]
    NotInK(String),
}

/// `f(g) = 1`, `f(e_{i0,j}^N) = γ_{i0,j}`, evaluated on `K` through the
/// polynomial presentation of `K` modulo the group.
#[derive(Debug)]
pub struct TwistMap<'a> {
    q: CertifiedQuotient<'a>,
    i0: usize,
    roots: Vec<Root>,
    values: Vec<CycScalar>,
    powers: Vec<SmashElement>,
    degrees: Vec<usize>,
    /// Collapsed normal forms of ordered `K`-monomials, by exponent vector.
    basis: DashMap<Vec<u32>, BTreeMap<Word, CycScalar>>,
}

/// Roots `e_{i0,j}` whose `N`-th power is central, i.e. `χ_{i0,j}^N = ε`.
pub fn k_generators(d: &LinkingDatum, i0: usize) -> Vec<Root> {
    let c = d.cartan();
    let k = c.component_of(i0);
    c.vertices(k)
        .filter(|&v| v >= i0)
        .map(|v| Root::new(i0, v + 1))
        .filter(|&r| d.group().char_pow(&d.root_character(r), d.root_order(r) as i64).is_trivial())
        .collect()
}

pub fn build_f<'a>(q: CertifiedQuotient<'a>, i0: usize) -> Result<TwistMap<'a>, TwistError> {
    let p = q.presentation();
    let d = p.datum();
    let roots = k_generators(d, i0);
    let component = d.cartan().component_of(i0);
    let rv = p.root_vectors(component);
    let n = p.derived().n[component] as usize;
    let powers = roots.iter().map(|&r| q.normal_form(rv.power(r))).collect();
    let degrees = roots.iter().map(|r| n * r.height()).collect();
    let values = roots.iter().map(|&r| p.gamma().get(r)).collect();
    Ok(TwistMap { q, i0, roots, values, powers, degrees, basis: DashMap::new() })
}

/// Drop the group part of every monomial: `f(w g) = f(w)`.
fn collapse(x: &SmashElement) -> BTreeMap<Word, CycScalar> {
    let mut out: BTreeMap<Word, CycScalar> = BTreeMap::new();
    for (m, c) in x.terms() {
        let e = out.entry(m.word.clone()).or_insert_with(|| c.field().zero());
        *e = &*e + c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

impl<'a> TwistMap<'a> {
    pub fn quotient(&self) -> CertifiedQuotient<'a> {
        self.q
    }

    pub fn i0(&self) -> usize {
        self.i0
    }

    pub fn generators(&self) -> &[Root] {
        &self.roots
    }

    /// `f(e_r^N)`.
    pub fn generator_value(&self, r: Root) -> Result<&CycScalar, TwistError> {
        self.roots.iter().position(|&x| x == r).map(|k| &self.values[k]).ok_or(TwistError::NotGenerator(r))
    }

    fn k_monomial(&self, exps: &[u32]) -> BTreeMap<Word, CycScalar> {
        if let Some(v) = self.basis.get(exps) {
            return v.clone();
        }
        let ctx = self.q.presentation().ctx();
        let mut x = ctx.one();
        for (k, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                x = self.q.normal_form(&(&x * &self.powers[k]));
            }
        }
        let v = collapse(&x);
        self.basis.insert(exps.to_vec(), v.clone());
        v
    }

    /// Exponent vectors of `K`-monomials of degree at most `deg` in `H_0`.
    fn exponent_vectors(&self, deg: usize) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for &dk in &self.degrees {
            let mut next = Vec::new();
            for v in out {
                let used: usize = v.iter().zip(&self.degrees).map(|(&e, &d)| e as usize * d).sum();
                for e in 0..=((deg - used) / dk) {
                    let mut w = v.clone();
                    w.push(e as u32);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    /// `f(y)` for `y ∈ K`: write the collapsed normal form of `y` as a
    /// combination of collapsed `K`-monomials and read off `Σ α_m f(m)`.
    pub fn eval(&self, y: &SmashElement) -> Result<CycScalar, TwistError> {
        let field = y.ctx().field();
        let nf = self.q.normal_form(y);
        let target = collapse(&nf);
        if target.is_empty() {
            return Ok(field.zero());
        }
        let monos = self.exponent_vectors(nf.degree());
        let cols: Vec<BTreeMap<Word, CycScalar>> = monos.iter().map(|e| self.k_monomial(e)).collect();
        let alpha = solve(&cols, &target).ok_or_else(|| TwistError::NotInK(nf.to_string()))?;
        let mut s = field.zero();
        for (a, e) in alpha.iter().zip(&monos) {
            if a.is_zero() {
                continue;
            }
            let mut v = a.clone();
            for (k, &ek) in e.iter().enumerate() {
                for _ in 0..ek {
                    v = &v * &self.values[k];
                }
            }
            s = &s + &v;
        }
        Ok(s)
    }

    /// `f^{-1} = f ∘ S`.
    pub fn eval_inverse(&self, y: &SmashElement) -> Result<CycScalar, TwistError> {
        self.eval(&self.q.antipode(y))
    }

    /// `f.x = x_1 f(x_2)`.
    pub fn left(&self, x: &SmashElement) -> Result<SmashElement, TwistError> {
        self.act(x, 1, false)
    }

    /// `x.f = f(x_1) x_2`.
    pub fn right(&self, x: &SmashElement) -> Result<SmashElement, TwistError> {
        self.act(x, 0, false)
    }

    /// `f^{-1}.x`.
    pub fn left_inverse(&self, x: &SmashElement) -> Result<SmashElement, TwistError> {
        self.act(x, 1, true)
    }

    /// `x.f^{-1}`.
    pub fn right_inverse(&self, x: &SmashElement) -> Result<SmashElement, TwistError> {
        self.act(x, 0, true)
    }

    /// Evaluate `f` (or `f^{-1}`) on leg `leg` of `Δ(x)`, grouping by the
    /// monomial on the other leg.
    fn act(&self, x: &SmashElement, leg: usize, inverse: bool) -> Result<SmashElement, TwistError> {
        let ctx = self.q.presentation().ctx();
        let keep = 1 - leg;
        let mut groups: BTreeMap<Monomial, SmashElement> = BTreeMap::new();
        for (k, c) in self.q.coproduct(x).terms() {
            groups.entry(k[keep].clone()).or_insert_with(|| ctx.zero()).add_term(k[leg].clone(), c.clone());
        }
        let mut out = ctx.zero();
        for (m, y) in groups {
            let v = if inverse { self.eval_inverse(&y)? } else { self.eval(&y)? };
            if !v.is_zero() {
                out.add_term(m, v);
            }
        }
        Ok(self.q.normal_form(&out))
    }
}

/// Solve `Σ α_m cols[m] = target`; `None` if inconsistent.
fn solve(cols: &[BTreeMap<Word, CycScalar>], target: &BTreeMap<Word, CycScalar>) -> Option<Vec<CycScalar>> {
    let field = target.values().next()?.field();
    let mut words: Vec<&Word> = cols.iter().flat_map(|c| c.keys()).chain(target.keys()).collect();
    words.sort();
    words.dedup();
    let n = cols.len();
    let mut rows: Vec<Vec<CycScalar>> = words
        .iter()
        .map(|w| {
            let mut r: Vec<CycScalar> = cols.iter().map(|c| c.get(*w).cloned().unwrap_or_else(|| field.zero())).collect();
            r.push(target.get(*w).cloned().unwrap_or_else(|| field.zero()));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(row, p);
        let inv = rows[row][col].inv().ok()?;
        for v in rows[row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let (src, dst) = if r < row {
                    let (a, b) = rows.split_at_mut(row);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = rows.split_at_mut(r);
                    (&a[row], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src) {
                    *d = &*d - &(&f * s);
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    if rows[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut alpha = vec![field.zero(); n];
    for (r, c) in pivots {
        alpha[c] = rows[r][n].clone();
    }
    Some(alpha)
}

/// `(f.e_r^N).f^{-1} = e_r^N − u_r` in `H`.
pub fn check_fif(f: &TwistMap<'_>, r: Root) -> Check {
    let t0 = Instant::now();
    let p = f.q.presentation();
    let case = r.to_string();
    let rv = p.root_vectors(p.datum().cartan().component_of(r.start));
    let us = p.u_elements(p.datum().cartan().component_of(r.start));
    let e = rv.power(r);
    let res = f.left(e).and_then(|fe| f.right_inverse(&fe));
    match res {
        Err(err) => Check::fail("fif", case, err.to_string()).timed(t0),
        Ok(lhs) => {
            let rhs = f.q.normal_form(&(e - us.get(r)));
            Check::residual("fif", case, &(&lhs - &rhs), p.provisional(e.degree())).timed(t0)
        }
    }
}

/// The twisted generator `f.e_r^N`, compared with `e_r^N + γ_r h_r`.
fn check_twisted_generator(f: &TwistMap<'_>, r: Root) -> Check {
    let t0 = Instant::now();
    let p = f.q.presentation();
    let d = p.datum();
    let ctx = p.ctx();
    let case = r.to_string();
    let e = p.root_vectors(d.cartan().component_of(r.start)).power(r).clone();
    let gamma = p.gamma().get(r);
    let h = ctx.group_element(ctx.index(&d.root_h(r)));
    match f.left(&e) {
        Err(err) => Check::fail("f.J", case, err.to_string()).timed(t0),
        Ok(fe) => {
            let expect = f.q.normal_form(&(&e + &h.scale(&gamma)));
            Check::residual("f.J", case, &(&fe - &expect), p.provisional(e.degree()))
                .note(format!("f.e^N = {fe}"))
                .timed(t0)
        }
    }
}

/// `χ_r^N(g_k^{-1}) = 1` for every vertex `k`, so `γ_r h_r` is central.
fn check_centrality(d: &LinkingDatum, r: Root) -> Check {
    let t0 = Instant::now();
    let chi = d.group().char_pow(&d.root_character(r), d.root_order(r) as i64);
    let bad: Vec<String> = (0..d.rank())
        .filter_map(|k| {
            let v = d.evaluate(&chi, &d.group().inverse(d.g(k)));
            (!v.is_one()).then(|| format!("χ^N(g{}⁻¹) = {v}", k + 1))
        })
        .collect();
    match bad.first() {
        None => Check::pass("centrality", r.to_string()).timed(t0),
        Some(w) => Check::fail("centrality", r.to_string(), w.clone()).timed(t0),
    }
}

/// Products of `K`-generators longer than this are skipped by the action
/// checks: the coproduct of a word of length `n` has `2^n` terms.
const ACTION_DEGREE: usize = 12;

/// `f.(xy) = (f.x)(f.y)` and `f^{-1}.(f.x) = x` on products of generators of `K`.
fn check_actions(f: &TwistMap<'_>) -> Vec<Check> {
    let p = f.q.presentation();
    let d = p.datum();
    let ctx = p.ctx();
    let mut gens: Vec<(String, SmashElement)> = (0..d.group().rank())
        .map(|k| (format!("y{}", k + 1), ctx.group_element(ctx.index(&d.group().generator(k)))))
        .collect();
    for (r, e) in f.roots.iter().zip(&f.powers) {
        gens.push((format!("e{r}^N"), e.clone()));
    }
    let mut mult = Vec::new();
    let mut inv = Vec::new();
    let t0 = Instant::now();
    for (a, (na, x)) in gens.iter().enumerate() {
        for (nb, y) in &gens[a..] {
            if x.degree() + y.degree() > ACTION_DEGREE {
                continue;
            }
            let xy = f.q.normal_form(&(x * y));
            let ok = match (f.left(&xy), f.left(x), f.left(y)) {
                (Ok(l), Ok(fx), Ok(fy)) => l == f.q.normal_form(&(&fx * &fy)),
                _ => false,
            };
            if !ok {
                mult.push(format!("x = {na}, y = {nb}"));
            }
            let back = f.left(&xy).and_then(|z| f.left_inverse(&z));
            if back.as_ref().ok() != Some(&xy) {
                inv.push(format!("x = {na}·{nb}"));
            }
        }
    }
    let done = |identity: &str, case: String, bad: &[String]| match bad.first() {
        None => Check::pass(identity, case).timed(t0),
        Some(w) => Check::fail(identity, case, w.clone()).timed(t0),
    };
    vec![
        done("f-action-multiplicative", format!("f.(xy) = (f.x)(f.y) on K, degree ≤ {ACTION_DEGREE}"), &mult),
        done("f-action-inverse", format!("f⁻¹.(f.x) = x on K, degree ≤ {ACTION_DEGREE}"), &inv),
    ]
}

/// All checks of the twist for vertex `i0` (0-based): `(fif)` and the
/// twisted generators for each generator of `K`, centrality, and the
/// action properties.
pub fn fif_suite(
    d: &LinkingDatum,
    gamma: &RootParameterFamily,
    i0: usize,
    bound: usize,
    exec: Execution,
) -> Result<Suite, TwistError> {
    let p = Presentation::new(d, gamma, Flavor::partial(d, i0), bound)?;
    let q = p.certify(exec)?;
    let f = build_f(q, i0)?;
    let mut suite = Suite::new(format!("fif (i0 = {})", i0 + 1));
    for &r in f.generators() {
        suite.push(check_fif(&f, r));
        suite.push(check_twisted_generator(&f, r));
        suite.push(check_centrality(d, r));
    }
    for c in check_actions(&f) {
        suite.push(c);
    }
    Ok(suite)
}
