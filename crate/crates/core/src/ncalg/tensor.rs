use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::{write_term, Ctx, Monomial, SmashElement};
use crate::scalars::CycScalar;

pub type TensorKey = SmallVec<[Monomial; 2]>;

/// Element of `H_1 ⊗ … ⊗ H_n` for smash contexts `H_k` (one per leg).
#[derive(Clone)]
pub struct Tensor {
    ctxs: Vec<Ctx>,
    terms: BTreeMap<TensorKey, CycScalar>,
}

impl PartialEq for Tensor {
    fn eq(&self, other: &Self) -> bool {
        self.ctxs.len() == other.ctxs.len()
            && self.ctxs.iter().zip(&other.ctxs).all(|(a, b)| a.id() == b.id())
            && self.terms == other.terms
    }
}

impl Eq for Tensor {}

fn add_key(map: &mut BTreeMap<TensorKey, CycScalar>, k: TensorKey, c: CycScalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

impl Tensor {
    pub fn zero(ctxs: Vec<Ctx>) -> Self {
        Tensor { ctxs, terms: BTreeMap::new() }
    }

    /// `x_1 ⊗ … ⊗ x_n`.
    pub fn pure(legs: &[&SmashElement]) -> Self {
        let ctxs: Vec<Ctx> = legs.iter().map(|x| x.ctx().clone()).collect();
        let mut keys: Vec<(TensorKey, CycScalar)> = vec![(TensorKey::new(), ctxs[0].field().one())];
        for x in legs {
            let mut next = Vec::with_capacity(keys.len() * x.len());
            for (k, c) in &keys {
                for (m, v) in x.terms() {
                    let mut k2 = k.clone();
                    k2.push(m.clone());
                    next.push((k2, c * v));
                }
            }
            keys = next;
        }
        let mut t = Tensor::zero(ctxs);
        for (k, c) in keys {
            add_key(&mut t.terms, k, c);
        }
        t
    }

    pub fn ctxs(&self) -> &[Ctx] {
        &self.ctxs
    }

    pub fn arity(&self) -> usize {
        self.ctxs.len()
    }

    pub fn terms(&self) -> &BTreeMap<TensorKey, CycScalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: TensorKey, c: CycScalar) {
        debug_assert_eq!(k.len(), self.ctxs.len());
        add_key(&mut self.terms, k, c);
    }

    fn check(&self, other: &Tensor) {
        assert!(
            self.ctxs.len() == other.ctxs.len()
                && self.ctxs.iter().zip(&other.ctxs).all(|(a, b)| a.id() == b.id()),
            "tensors over different contexts"
        );
    }

    pub fn add_assign(&mut self, other: &Tensor) {
        self.check(other);
        for (k, c) in &other.terms {
            add_key(&mut self.terms, k.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Tensor) {
        self.check(other);
        for (k, c) in &other.terms {
            add_key(&mut self.terms, k.clone(), -c);
        }
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        let mut t = self.clone();
        t.add_assign(other);
        t
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        let mut t = self.clone();
        t.sub_assign(other);
        t
    }

    pub fn scale(&self, c: &CycScalar) -> Tensor {
        let mut t = Tensor::zero(self.ctxs.clone());
        for (k, v) in &self.terms {
            add_key(&mut t.terms, k.clone(), v * c);
        }
        t
    }

    /// Leg-wise product `(x_1 ⊗ x_2)(y_1 ⊗ y_2) = x_1 y_1 ⊗ x_2 y_2`.
    pub fn mul(&self, other: &Tensor) -> Tensor {
        self.check(other);
        let mut t = Tensor::zero(self.ctxs.clone());
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut exp = 0u64;
                let mut key = TensorKey::with_capacity(k1.len());
                for (leg, (m1, m2)) in k1.iter().zip(k2).enumerate() {
                    let (e, m) = self.ctxs[leg].mul_monomials(m1, m2);
                    exp += e;
                    key.push(m);
                }
                add_key(&mut t.terms, key, (c1 * c2).mul_zeta(exp as i64));
            }
        }
        t
    }

    /// Replace leg `leg` by the image of a linear map given on monomials.
    pub fn map_leg(&self, leg: usize, target: &Ctx, f: impl Fn(&Monomial) -> SmashElement) -> Tensor {
        let mut ctxs = self.ctxs.clone();
        ctxs[leg] = target.clone();
        let mut t = Tensor::zero(ctxs);
        let mut cache: BTreeMap<&Monomial, SmashElement> = BTreeMap::new();
        for (k, c) in &self.terms {
            let img = cache.entry(&k[leg]).or_insert_with(|| f(&k[leg]));
            for (m, v) in img.terms() {
                let mut key = k.clone();
                key[leg] = m.clone();
                add_key(&mut t.terms, key, c * v);
            }
        }
        t
    }

    /// Replace leg `leg` by a tensor of higher arity (e.g. apply a coproduct
    /// to one leg).
    pub fn expand_leg(&self, leg: usize, f: impl Fn(&Monomial) -> Tensor) -> Tensor {
        let mut cache: BTreeMap<&Monomial, Tensor> = BTreeMap::new();
        let mut out: Option<Tensor> = None;
        for (k, c) in &self.terms {
            let img = cache.entry(&k[leg]).or_insert_with(|| f(&k[leg]));
            let t = out.get_or_insert_with(|| {
                let mut ctxs = self.ctxs[..leg].to_vec();
                ctxs.extend(img.ctxs.iter().cloned());
                ctxs.extend(self.ctxs[leg + 1..].iter().cloned());
                Tensor::zero(ctxs)
            });
            for (ik, v) in &img.terms {
                let mut key: TensorKey = k[..leg].iter().cloned().collect();
                key.extend(ik.iter().cloned());
                key.extend(k[leg + 1..].iter().cloned());
                add_key(&mut t.terms, key, c * v);
            }
        }
        out.unwrap_or_else(|| {
            let mut ctxs = self.ctxs[..leg].to_vec();
            ctxs.push(self.ctxs[leg].clone());
            ctxs.extend(self.ctxs[leg + 1..].iter().cloned());
            Tensor::zero(ctxs)
        })
    }

    /// Apply a linear functional to leg `leg`, dropping it.
    pub fn contract_leg(&self, leg: usize, f: impl Fn(&Monomial) -> CycScalar) -> Tensor {
        let mut ctxs = self.ctxs.clone();
        ctxs.remove(leg);
        let mut t = Tensor::zero(ctxs);
        for (k, c) in &self.terms {
            let v = f(&k[leg]);
            if v.is_zero() {
                continue;
            }
            let mut key = k.clone();
            key.remove(leg);
            add_key(&mut t.terms, key, c * &v);
        }
        t
    }

    /// Multiply all legs together in order (all legs share one context).
    pub fn multiply_legs(&self) -> SmashElement {
        let ctx = &self.ctxs[0];
        assert!(self.ctxs.iter().all(|c| c.id() == ctx.id()), "legs over different contexts");
        let mut out = ctx.zero();
        for (k, c) in &self.terms {
            let mut m = k[0].clone();
            let mut exp = 0u64;
            for next in &k[1..] {
                let (e, p) = ctx.mul_monomials(&m, next);
                exp += e;
                m = p;
            }
            out.add_term(m, c.mul_zeta(exp as i64));
        }
        out
    }

    /// Arity-one tensor as an element.
    pub fn into_element(self) -> SmashElement {
        assert_eq!(self.arity(), 1);
        let ctx = self.ctxs[0].clone();
        ctx.from_terms(self.terms.into_iter().map(|(mut k, c)| (k.remove(0), c)))
    }

    /// Arity-zero tensor as a scalar.
    pub fn into_scalar(self, field: &'static crate::scalars::CycField) -> CycScalar {
        assert_eq!(self.arity(), 0);
        self.terms.into_values().next().unwrap_or_else(|| field.zero())
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let body = k
                .iter()
                .zip(&self.ctxs)
                .map(|(m, ctx)| {
                    let b = ctx.monomial_body(m);
                    format!("({})", if b.is_empty() { "1".to_string() } else { b })
                })
                .collect::<Vec<_>>()
                .join(" ⊗ ");
            write_term(&mut out, i == 0, c, &body);
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
