//! Exact arithmetic in the cyclotomic field `Q(ζ_E)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(E)-1}`, i.e. as
//! residues modulo the `E`-th cyclotomic polynomial. Only nonzero
//! coordinates are kept, sorted by exponent, so equality is structural.

mod rational;

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

pub use rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("root of unity of order {order} is not available in Q(zeta_{conductor})")]
    Conductor { order: u32, conductor: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

/// Static data for `Q(ζ_E)`: the cyclotomic polynomial and the reductions of
/// the powers `ζ^m`, `φ(E) ≤ m < E`, into the power basis.
#[derive(Debug)]
pub struct CycField {
    conductor: u32,
    phi: usize,
    poly: Vec<i64>,
    high_powers: Vec<Vec<(u16, i64)>>,
    units: Vec<u32>,
}

impl PartialEq for CycField {
    fn eq(&self, other: &Self) -> bool {
        self.conductor == other.conductor
    }
}

impl Eq for CycField {}

thread_local! {
    static FIELDS: RefCell<HashMap<u32, &'static CycField>> = RefCell::new(HashMap::new());
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut memo: HashMap<u32, Vec<i64>> = HashMap::new();
    fn go(n: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        let mut num = vec![0i64; n as usize + 1];
        num[0] = -1;
        num[n as usize] = 1;
        for d in 1..n {
            if n.is_multiple_of(d) {
                let pd = go(d, memo);
                num = poly_div_exact(&num, &pd);
            }
        }
        memo.insert(n, num.clone());
        num
    }
    go(n, &mut memo)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

impl CycField {
    /// The field of conductor `e`, built once per thread.
    pub fn get(e: u32) -> &'static CycField {
        assert!(e >= 1, "conductor must be positive");
        FIELDS.with(|f| {
            *f.borrow_mut()
                .entry(e)
                .or_insert_with(|| Box::leak(Box::new(CycField::build(e))))
        })
    }

    fn build(e: u32) -> CycField {
        let poly = cyclotomic_polynomial(e);
        let phi = poly.len() - 1;
        let mut high_powers = Vec::new();
        // x^phi = -(poly - x^phi)
        let mut cur: Vec<i64> = poly[..phi].iter().map(|c| -c).collect();
        for _m in phi..e as usize {
            high_powers.push(
                cur.iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(i, c)| (i as u16, *c))
                    .collect(),
            );
            // multiply by x and reduce
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            next[1..phi].copy_from_slice(&cur[..phi - 1]);
            if top != 0 {
                for i in 0..phi {
                    next[i] -= top * poly[i];
                }
            }
            cur = next;
        }
        let units = (1..=e).filter(|k| gcd(*k as u64, e as u64) == 1).collect();
        CycField { conductor: e, phi, poly, high_powers, units }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Euler totient of the conductor, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn polynomial(&self) -> &[i64] {
        &self.poly
    }

    pub fn zero(&'static self) -> CycScalar {
        CycScalar { field: self, terms: SmallVec::new() }
    }

    pub fn one(&'static self) -> CycScalar {
        self.rational(Rational::ONE)
    }

    pub fn int(&'static self, n: i64) -> CycScalar {
        self.rational(Rational::from_int(n))
    }

    pub fn rational(&'static self, r: Rational) -> CycScalar {
        let mut terms = SmallVec::new();
        if !r.is_zero() {
            terms.push((0u16, r));
        }
        CycScalar { field: self, terms }
    }

    /// `ζ_E^k` for any integer `k`.
    pub fn zeta_pow(&'static self, k: i64) -> CycScalar {
        self.one().mul_zeta(k)
    }

    /// `ζ_order^exponent` embedded in this field.
    pub fn root_of_unity(&'static self, order: u32, exponent: i64) -> Result<CycScalar, ScalarError> {
        if order == 0 || !self.conductor.is_multiple_of(order) {
            return Err(ScalarError::Conductor { order, conductor: self.conductor });
        }
        let e = exponent.rem_euclid(order as i64);
        Ok(self.zeta_pow(e * (self.conductor / order) as i64))
    }

    fn accumulate(&self, buf: &mut [Rational], exp: u32, c: &Rational) {
        let e = (exp % self.conductor) as usize;
        if e < self.phi {
            buf[e] = &buf[e] + c;
        } else {
            for (t, ic) in &self.high_powers[e - self.phi] {
                let prod = c * &Rational::from_int(*ic);
                buf[*t as usize] = &buf[*t as usize] + &prod;
            }
        }
    }

    fn collect(&'static self, buf: Vec<Rational>) -> CycScalar {
        let terms = buf
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u16, c))
            .collect();
        CycScalar { field: self, terms }
    }
}

/// An element of `Q(ζ_E)` in canonical sparse power-basis form.
#[derive(Clone)]
pub struct CycScalar {
    field: &'static CycField,
    terms: SmallVec<[(u16, Rational); 2]>,
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.terms == other.terms
    }
}

impl Eq for CycScalar {}

impl Hash for CycScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor.hash(state);
        self.terms.hash(state);
    }
}

impl CycScalar {
    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    /// Nonzero power-basis coordinates `(exponent, coefficient)`.
    pub fn terms(&self) -> &[(u16, Rational)] {
        &self.terms
    }

    /// Dense coordinate vector of length `φ(E)`.
    pub fn coefficients(&self) -> Vec<Rational> {
        let mut v = vec![Rational::ZERO; self.field.phi];
        for (e, c) in &self.terms {
            v[*e as usize] = c.clone();
        }
        v
    }

    pub fn from_coefficients(field: &'static CycField, coeffs: &[Rational]) -> CycScalar {
        let mut buf = vec![Rational::ZERO; field.phi];
        for (i, c) in coeffs.iter().enumerate() {
            field.accumulate(&mut buf, i as u32, c);
        }
        field.collect(buf)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// The value as a rational number, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::ZERO),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    fn check(&self, other: &CycScalar) -> Result<(), ScalarError> {
        if self.field.conductor != other.field.conductor {
            Err(ScalarError::ConductorMismatch(self.field.conductor, other.field.conductor))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &CycScalar) -> Result<CycScalar, ScalarError> {
        self.check(other)?;
        let mut out: SmallVec<[(u16, Rational); 2]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j].clone());
                j += 1;
            } else {
                let s = &a[i].1 + &b[j].1;
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        Ok(CycScalar { field: self.field, terms: out })
    }

    pub fn try_mul(&self, other: &CycScalar) -> Result<CycScalar, ScalarError> {
        self.check(other)?;
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Ok(f.zero());
        }
        if let Some(r) = other.as_rational() {
            return Ok(self.scale(&r));
        }
        if let Some(r) = self.as_rational() {
            return Ok(other.scale(&r));
        }
        if self.terms.len() == 1 && other.terms.len() == 1 {
            let (e1, c1) = &self.terms[0];
            let (e2, c2) = &other.terms[0];
            let c = c1 * c2;
            return Ok(f.rational(c).mul_zeta(*e1 as i64 + *e2 as i64));
        }
        let mut buf = vec![Rational::ZERO; f.phi];
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                f.accumulate(&mut buf, *e1 as u32 + *e2 as u32, &(c1 * c2));
            }
        }
        Ok(f.collect(buf))
    }

    /// Multiply by a rational number.
    pub fn scale(&self, r: &Rational) -> CycScalar {
        if r.is_zero() {
            return self.field.zero();
        }
        if r.is_one() {
            return self.clone();
        }
        CycScalar {
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect(),
        }
    }

    /// Multiply by `ζ_E^k`.
    pub fn mul_zeta(&self, k: i64) -> CycScalar {
        let f = self.field;
        let n = f.conductor as i64;
        let k = k.rem_euclid(n) as u32;
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            let ne = (*e as u32 + k) % f.conductor;
            if (ne as usize) < f.phi {
                let mut terms = SmallVec::new();
                terms.push((ne as u16, c.clone()));
                return CycScalar { field: f, terms };
            }
        }
        let mut buf = vec![Rational::ZERO; f.phi];
        for (e, c) in &self.terms {
            f.accumulate(&mut buf, *e as u32 + k, c);
        }
        f.collect(buf)
    }

    /// Apply the Galois automorphism `ζ ↦ ζ^k` (`k` coprime to `E`).
    pub fn galois(&self, k: u32) -> CycScalar {
        let f = self.field;
        let mut buf = vec![Rational::ZERO; f.phi];
        for (e, c) in &self.terms {
            let ne = (*e as u64 * k as u64 % f.conductor as u64) as u32;
            f.accumulate(&mut buf, ne, c);
        }
        f.collect(buf)
    }

    /// Multiplicative inverse via the norm: `a⁻¹ = ∏_{σ≠1} σ(a) / N(a)`.
    pub fn inv(&self) -> Result<CycScalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(self.field.rational(r.recip().expect("nonzero")));
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return Ok(self.field.rational(c.recip().expect("nonzero")).mul_zeta(-(*e as i64)));
        }
        let mut conj = self.field.one();
        for &k in self.field.units.iter().filter(|&&k| k != 1) {
            conj = &conj * &self.galois(k);
        }
        let norm = (&conj * self).as_rational().expect("field norm is rational");
        Ok(conj.scale(&norm.recip().expect("nonzero norm")))
    }

    pub fn pow(&self, e: i64) -> Result<CycScalar, ScalarError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Least `k ≥ 1` with `a^k = 1`, or `None` if `a` is not a root of unity.
    pub fn order_of(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        // roots of unity in Q(ζ_E) have order dividing lcm(2, E)
        let bound = lcm(2, self.field.conductor as u64) as u32;
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_one() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }

    /// `∑_{m=0}^{n-1} q^m`.
    pub fn geometric_sum(&self, n: u32) -> CycScalar {
        let mut acc = self.field.zero();
        let mut p = self.field.one();
        for _ in 0..n {
            acc = &acc + &p;
            p = &p * self;
        }
        acc
    }

    /// If the value is `c·ζ_E^k` with rational `c`, return `(c, k)` with the
    /// smallest such `k`.
    pub fn as_scaled_root(&self) -> Option<(Rational, u32)> {
        if let [(e, c)] = self.terms.as_slice() {
            return Some((c.clone(), *e as u32));
        }
        (0..self.field.conductor).find_map(|k| {
            let r = self.mul_zeta(-(k as i64)).as_rational()?;
            Some((r, k))
        })
    }
}

impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    /// Panics on conductor mismatch; use [`CycScalar::try_add`] to handle it.
    fn add(self, rhs: &'a CycScalar) -> CycScalar {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &'a CycScalar) -> CycScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    /// Panics on conductor mismatch; use [`CycScalar::try_mul`] to handle it.
    fn mul(self, rhs: &'a CycScalar) -> CycScalar {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl Add for CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: CycScalar) -> CycScalar {
        &self + &rhs
    }
}

impl Sub for CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: CycScalar) -> CycScalar {
        &self - &rhs
    }
}

impl Mul for CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: CycScalar) -> CycScalar {
        &self * &rhs
    }
}

fn fmt_root_term(f: &mut fmt::Formatter<'_>, first: bool, c: &Rational, e: u32, n: u32) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, "{}", if neg { " - " } else { " + " })?;
    }
    match (e, a.is_one()) {
        (0, _) => write!(f, "{a}"),
        (_, true) => write!(f, "zeta({n})^{e}"),
        (_, false) => write!(f, "{a}*zeta({n})^{e}"),
    }
}

impl CycScalar {
    /// True if the printed form needs parentheses when used as a factor.
    pub fn is_compound(&self) -> bool {
        self.as_scaled_root().is_none()
    }
}

/// Prints `c*zeta(E)^k` when the value is a rational multiple of a root of
/// unity, and the power-basis sum otherwise. Both forms parse back.
impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.field.conductor;
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some((c, k)) = self.as_scaled_root() {
            return fmt_root_term(f, true, &c, k, n);
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            fmt_root_term(f, i == 0, c, *e as u32, n)?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.field.conductor, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        let p25 = cyclotomic_polynomial(25);
        assert_eq!(p25.len(), 21);
        assert!(p25.iter().enumerate().all(|(i, c)| *c == if i % 5 == 0 { 1 } else { 0 }));
        assert_eq!(CycField::get(15).degree(), 8);
    }

    #[test]
    fn root_of_unity_examples() {
        let f = CycField::get(10);
        assert!(f.root_of_unity(1, 0).unwrap().is_one());
        assert_eq!(f.root_of_unity(2, 1).unwrap(), f.int(-1));
        assert!(f.root_of_unity(5, 5).unwrap().is_one());
        assert_eq!(f.root_of_unity(5, 7).unwrap(), f.root_of_unity(5, 2).unwrap());
        assert!(matches!(f.root_of_unity(3, 1), Err(ScalarError::Conductor { .. })));
    }

    #[test]
    fn arithmetic_examples() {
        let f = CycField::get(5);
        let z = f.root_of_unity(5, 1).unwrap();
        assert!((&z * &z.pow(4).unwrap()).is_one());
        // oracle: x + x^2 + x^3 + x^4 reduced mod 1+x+x^2+x^3+x^4 is -1
        let mut s = f.zero();
        for k in 1..5 {
            s = &s + &z.pow(k).unwrap();
        }
        assert_eq!(s, f.int(-1));
        assert_eq!(f.int(-1).inv().unwrap(), f.int(-1));
        assert_eq!(f.zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn order_examples() {
        let f = CycField::get(25);
        assert_eq!(f.one().order_of(), Some(1));
        assert_eq!(f.int(-1).order_of(), Some(2));
        assert_eq!(f.zeta_pow(5).order_of(), Some(5));
        assert_eq!(f.int(2).order_of(), None);
        assert_eq!(f.zeta_pow(1).order_of(), Some(25));
        // -ζ has order 50 in Q(ζ_25)
        assert_eq!((-f.zeta_pow(1)).order_of(), Some(50));
    }

    #[test]
    fn geometric_sum_examples() {
        let f = CycField::get(5);
        assert!(f.zeta_pow(1).geometric_sum(5).is_zero());
        assert_eq!(f.one().geometric_sum(3), f.int(3));
        assert!(f.int(-1).geometric_sum(2).is_zero());
    }

    #[test]
    fn inverse_of_dense_element() {
        let f = CycField::get(25);
        let a = &f.one() - &f.zeta_pow(-5);
        let a5 = a.pow(5).unwrap();
        let inv = a5.inv().unwrap();
        assert!((&a5 * &inv).is_one());
    }

    #[test]
    fn mismatch_is_error() {
        let a = CycField::get(5).one();
        let b = CycField::get(25).one();
        assert_eq!(a.try_add(&b), Err(ScalarError::ConductorMismatch(5, 25)));
    }

    #[test]
    fn display_forms() {
        let f = CycField::get(25);
        assert_eq!(f.zeta_pow(5).to_string(), "zeta(25)^5");
        assert_eq!(f.zeta_pow(20).to_string(), "zeta(25)^20");
        assert_eq!((-f.zeta_pow(3)).scale(&Rational::new(3, 5)).to_string(), "-3/5*zeta(25)^3");
        assert_eq!((&f.one() + &f.zeta_pow(5)).to_string(), "1 + zeta(25)^5");
        assert_eq!(f.int(-7).to_string(), "-7");
    }
}
