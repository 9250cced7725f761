//! Finite abelian groups `Γ = ⟨Y_1⟩ ⊕ … ⊕ ⟨Y_s⟩`, their elements and characters.
//!
//! Elements and characters share the exponent-vector shape: an element is
//! `∏ Y_h^{e_h}` and a character `χ` is determined by `χ(Y_h) = ζ_{M_h}^{c_h}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalars::{lcm, CycField, CycScalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group needs at least one cyclic factor")]
    Empty,
    #[error("cyclic factor orders must be >= 1, got {0}")]
    BadOrder(u32),
    #[error("expected {expected} exponents, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("group spec mismatch")]
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    orders: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    exps: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    exps: Vec<u32>,
}

impl GroupSpec {
    pub fn new(orders: Vec<u32>) -> Result<Self, GroupError> {
        if orders.is_empty() {
            return Err(GroupError::Empty);
        }
        if let Some(&m) = orders.iter().find(|&&m| m == 0) {
            return Err(GroupError::BadOrder(m));
        }
        Ok(GroupSpec { orders })
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> u64 {
        self.orders.iter().map(|&m| m as u64).product()
    }

    /// Least common multiple of the cyclic orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, &m| lcm(a, m as u64))
    }

    fn reduce(&self, exps: &[i64]) -> Result<Vec<u32>, GroupError> {
        if exps.len() != self.orders.len() {
            return Err(GroupError::Shape { expected: self.orders.len(), got: exps.len() });
        }
        Ok(exps
            .iter()
            .zip(&self.orders)
            .map(|(&e, &m)| e.rem_euclid(m as i64) as u32)
            .collect())
    }

    pub fn element(&self, exps: &[i64]) -> Result<GroupElement, GroupError> {
        Ok(GroupElement { exps: self.reduce(exps)? })
    }

    pub fn character(&self, exps: &[i64]) -> Result<Character, GroupError> {
        Ok(Character { exps: self.reduce(exps)? })
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { exps: vec![0; self.orders.len()] }
    }

    pub fn trivial_character(&self) -> Character {
        Character { exps: vec![0; self.orders.len()] }
    }

    /// The generator `Y_h` (0-based `h`).
    pub fn generator(&self, h: usize) -> GroupElement {
        let mut exps = vec![0; self.orders.len()];
        exps[h] = 1 % self.orders[h];
        GroupElement { exps }
    }

    /// Mixed-radix index in `0..|Γ|`, first factor least significant.
    pub fn index_of(&self, g: &GroupElement) -> u32 {
        let mut idx = 0u64;
        for (e, m) in g.exps.iter().zip(&self.orders).rev() {
            idx = idx * *m as u64 + *e as u64;
        }
        idx as u32
    }

    pub fn element_at(&self, mut idx: u32) -> GroupElement {
        let exps = self
            .orders
            .iter()
            .map(|&m| {
                let e = idx % m;
                idx /= m;
                e
            })
            .collect();
        GroupElement { exps }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.size() as u32).map(|i| self.element_at(i))
    }

    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        self.elements().map(|g| Character { exps: g.exps })
    }

    fn check(&self, exps: &[u32]) -> Result<(), GroupError> {
        if exps.len() != self.orders.len() || exps.iter().zip(&self.orders).any(|(e, m)| e >= m) {
            Err(GroupError::Mismatch)
        } else {
            Ok(())
        }
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(&a.exps)?;
        self.check(&b.exps)?;
        Ok(GroupElement { exps: add_mod(&a.exps, &b.exps, &self.orders) })
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        GroupElement { exps: neg_mod(&a.exps, &self.orders) }
    }

    pub fn pow(&self, a: &GroupElement, k: i64) -> GroupElement {
        GroupElement { exps: pow_mod(&a.exps, k, &self.orders) }
    }

    pub fn char_mul(&self, a: &Character, b: &Character) -> Result<Character, GroupError> {
        self.check(&a.exps)?;
        self.check(&b.exps)?;
        Ok(Character { exps: add_mod(&a.exps, &b.exps, &self.orders) })
    }

    pub fn char_inverse(&self, a: &Character) -> Character {
        Character { exps: neg_mod(&a.exps, &self.orders) }
    }

    pub fn char_pow(&self, a: &Character, k: i64) -> Character {
        Character { exps: pow_mod(&a.exps, k, &self.orders) }
    }

    /// Exponent `k` with `χ(g) = ζ_E^k`, where `E` is any multiple of the
    /// group exponent.
    pub fn pairing_exponent(&self, chi: &Character, g: &GroupElement, conductor: u32) -> u32 {
        let mut k = 0u64;
        for ((c, e), m) in chi.exps.iter().zip(&g.exps).zip(&self.orders) {
            let prod = (*c as u64 * *e as u64) % *m as u64;
            k += prod * (conductor / m) as u64;
        }
        (k % conductor as u64) as u32
    }

    /// `χ(g) = ∏_h ζ_{M_h}^{c_h e_h}` in `Q(ζ_E)`.
    pub fn evaluate(
        &self,
        chi: &Character,
        g: &GroupElement,
        field: &'static CycField,
    ) -> Result<CycScalar, GroupError> {
        self.check(&chi.exps)?;
        self.check(&g.exps)?;
        if !(field.conductor() as u64).is_multiple_of(self.exponent()) {
            return Err(GroupError::Mismatch);
        }
        Ok(field.zeta_pow(self.pairing_exponent(chi, g, field.conductor()) as i64))
    }

    pub fn element_order(&self, g: &GroupElement) -> u64 {
        vector_order(&g.exps, &self.orders)
    }

    pub fn character_order(&self, chi: &Character) -> u64 {
        vector_order(&chi.exps, &self.orders)
    }
}

fn add_mod(a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    a.iter().zip(b).zip(m).map(|((x, y), m)| (x + y) % m).collect()
}

fn neg_mod(a: &[u32], m: &[u32]) -> Vec<u32> {
    a.iter().zip(m).map(|(x, m)| (m - x % m) % m).collect()
}

fn pow_mod(a: &[u32], k: i64, m: &[u32]) -> Vec<u32> {
    a.iter()
        .zip(m)
        .map(|(x, m)| (*x as i64 * k).rem_euclid(*m as i64) as u32)
        .collect()
}

fn vector_order(exps: &[u32], orders: &[u32]) -> u64 {
    exps.iter().zip(orders).fold(1, |acc, (&e, &m)| {
        let g = num_integer::gcd(e as u64, m as u64);
        let g = if g == 0 { m as u64 } else { g };
        lcm(acc, m as u64 / g)
    })
}

impl GroupElement {
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

impl Character {
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

fn write_vec(f: &mut fmt::Formatter<'_>, v: &[u32]) -> fmt::Result {
    write!(f, "[")?;
    for (i, e) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{e}")?;
    }
    write!(f, "]")
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_vec(f, &self.exps)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_vec(f, &self.exps)
    }
}
