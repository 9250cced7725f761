//! The smash product `H_0 = R # kΓ` as a computational algebra.
//!
//! A [`Monomial`] is a word in the letters `a_i` followed by a group
//! element; the commutation `g a_i = χ_i(g) a_i g` is applied eagerly by
//! multiplication, so every element is a combination of such monomials.
//! Relations among the letters are handled by [`RewriteSystem`].

mod expr;
mod rewrite;
mod rules;
mod tensor;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::datum::LinkingDatum;
use crate::group::{Character, GroupElement, GroupSpec};
use crate::scalars::{CycField, CycScalar};

pub use expr::{parse_element, ExprError};
pub use rewrite::{
    enumerate_basis, BasisError, Basis, CompletionError, CompletionStatus, ReduceError, Reduced, RewriteSystem,
    Rule, Strategy,
};
pub use rules::{adjoint_power, build_rules, relations, root_vector, u_element, Flavor, Relation, RelationKind};
pub use tensor::{Tensor, TensorKey};

/// Letters are stored as 0-based vertex indices.
pub type Word = SmallVec<[u8; 16]>;

/// Degree-lexicographic order on words in which a letter with a smaller
/// vertex index is the larger letter.
pub fn word_cmp(a: &[u8], b: &[u8]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| b.cmp(a))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub word: Word,
    pub g: u32,
}

impl Monomial {
    pub fn new(word: &[u8], g: u32) -> Self {
        Monomial { word: Word::from_slice(word), g }
    }

    pub fn group(g: u32) -> Self {
        Monomial { word: Word::new(), g }
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        word_cmp(&self.word, &other.word).then_with(|| self.g.cmp(&other.g))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

const TABLE_LIMIT: u32 = 1024;

/// Letters, group, and character tables of one smash product.
#[derive(Debug)]
pub struct SmashContext {
    id: u64,
    group: GroupSpec,
    field: &'static CycField,
    size: u32,
    g: Vec<u32>,
    chi: Vec<Character>,
    char_exp: Vec<Vec<u32>>,
    mul_table: Vec<u32>,
    inv_table: Vec<u32>,
}

pub type Ctx = Arc<SmashContext>;

impl SmashContext {
    pub fn new(
        group: GroupSpec,
        field: &'static CycField,
        g: &[GroupElement],
        chi: &[Character],
    ) -> Ctx {
        assert_eq!(g.len(), chi.len());
        assert!(g.len() < u8::MAX as usize, "too many letters");
        let size = u32::try_from(group.size()).expect("group too large");
        let e = field.conductor();
        let char_exp = chi
            .iter()
            .map(|c| group.elements().map(|x| group.pairing_exponent(c, &x, e)).collect())
            .collect();
        let mut mul_table = Vec::new();
        if size <= TABLE_LIMIT {
            mul_table.reserve((size * size) as usize);
            for a in group.elements() {
                for b in group.elements() {
                    mul_table.push(group.index_of(&group.mul(&a, &b).expect("same group")));
                }
            }
        }
        let inv_table = group.elements().map(|a| group.index_of(&group.inverse(&a))).collect();
        Arc::new(SmashContext {
            id: NEXT_ID.fetch_add(1, AtomicOrdering::Relaxed),
            g: g.iter().map(|x| group.index_of(x)).collect(),
            chi: chi.to_vec(),
            group,
            field,
            size,
            char_exp,
            mul_table,
            inv_table,
        })
    }

    pub fn from_datum(d: &LinkingDatum) -> Ctx {
        SmashContext::new(d.group().clone(), d.field(), d.g_all(), d.chi_all())
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn num_letters(&self) -> usize {
        self.g.len()
    }

    pub fn group_size(&self) -> u32 {
        self.size
    }

    /// Index of `g_i`.
    pub fn letter_group(&self, i: usize) -> u32 {
        self.g[i]
    }

    pub fn letter_character(&self, i: usize) -> &Character {
        &self.chi[i]
    }

    /// Exponent of `χ_i(g)` as a power of `ζ_E`.
    pub fn char_exp(&self, i: usize, g: u32) -> u32 {
        self.char_exp[i][g as usize]
    }

    /// Exponent of `χ_w(g) = ∏_l χ_{w_l}(g)`.
    pub fn word_char_exp(&self, word: &[u8], g: u32) -> u64 {
        word.iter().map(|&l| self.char_exp[l as usize][g as usize] as u64).sum()
    }

    pub fn gmul(&self, a: u32, b: u32) -> u32 {
        if self.mul_table.is_empty() {
            let x = self.group.element_at(a);
            let y = self.group.element_at(b);
            self.group.index_of(&self.group.mul(&x, &y).expect("same group"))
        } else {
            self.mul_table[(a * self.size + b) as usize]
        }
    }

    pub fn ginv(&self, a: u32) -> u32 {
        self.inv_table[a as usize]
    }

    pub fn gpow(&self, a: u32, k: i64) -> u32 {
        self.group.index_of(&self.group.pow(&self.group.element_at(a), k))
    }

    pub fn element(&self, g: u32) -> GroupElement {
        self.group.element_at(g)
    }

    pub fn index(&self, g: &GroupElement) -> u32 {
        self.group.index_of(g)
    }

    /// `(w_1 g_1)(w_2 g_2) = χ_{w_2}(g_1) w_1 w_2 g_1 g_2`; returns the
    /// exponent of the root of unity and the product monomial.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> (u64, Monomial) {
        let k = self.word_char_exp(&b.word, a.g);
        let mut word = a.word.clone();
        word.extend_from_slice(&b.word);
        (k, Monomial { word, g: self.gmul(a.g, b.g) })
    }

    pub fn zero(self: &Arc<Self>) -> SmashElement {
        SmashElement { ctx: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(self: &Arc<Self>) -> SmashElement {
        self.term(Monomial::group(0), self.field.one())
    }

    pub fn scalar(self: &Arc<Self>, c: CycScalar) -> SmashElement {
        self.term(Monomial::group(0), c)
    }

    pub fn letter(self: &Arc<Self>, i: usize) -> SmashElement {
        assert!(i < self.num_letters(), "letter out of range");
        self.term(Monomial::new(&[i as u8], 0), self.field.one())
    }

    pub fn word(self: &Arc<Self>, w: &[u8]) -> SmashElement {
        self.term(Monomial::new(w, 0), self.field.one())
    }

    pub fn group_element(self: &Arc<Self>, g: u32) -> SmashElement {
        self.term(Monomial::group(g), self.field.one())
    }

    pub fn term(self: &Arc<Self>, m: Monomial, c: CycScalar) -> SmashElement {
        let mut e = self.zero();
        e.add_term(m, c);
        e
    }

    pub fn from_terms(self: &Arc<Self>, terms: impl IntoIterator<Item = (Monomial, CycScalar)>) -> SmashElement {
        let mut e = self.zero();
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn letter_name(&self, i: u8) -> String {
        format!("a{}", i as usize + 1)
    }

    pub fn monomial_body(&self, m: &Monomial) -> String {
        let mut parts: Vec<String> = m.word.iter().map(|&l| self.letter_name(l)).collect();
        if m.g != 0 {
            parts.push(format!("g{}", self.element(m.g)));
        }
        parts.join(" ")
    }
}

pub(crate) fn add_to(map: &mut BTreeMap<Monomial, CycScalar>, m: Monomial, c: CycScalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
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

/// Finite linear combination of monomials with nonzero coefficients.
#[derive(Clone)]
pub struct SmashElement {
    ctx: Ctx,
    terms: BTreeMap<Monomial, CycScalar>,
}

impl PartialEq for SmashElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id == other.ctx.id && self.terms == other.terms
    }
}

impl Eq for SmashElement {}

impl SmashElement {
    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, CycScalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, CycScalar> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: CycScalar) {
        add_to(&mut self.terms, m, c);
    }

    pub fn coefficient(&self, m: &Monomial) -> CycScalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ctx.field.zero())
    }

    /// Largest monomial in the monomial order.
    pub fn leading(&self) -> Option<(&Monomial, &CycScalar)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// True if every monomial has an empty word, i.e. the element lies in `kΓ`.
    pub fn is_group_only(&self) -> bool {
        self.terms.keys().all(|m| m.word.is_empty())
    }

    fn check(&self, other: &SmashElement) {
        assert!(self.ctx.id == other.ctx.id, "elements from different smash contexts");
    }

    pub fn same_context(&self, other: &SmashElement) -> bool {
        self.ctx.id == other.ctx.id
    }

    pub fn scale(&self, c: &CycScalar) -> SmashElement {
        if c.is_zero() {
            return self.ctx.zero();
        }
        SmashElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiply every monomial on the right by the group element `g`.
    pub fn mul_group_right(&self, g: u32) -> SmashElement {
        let mut out = self.ctx.zero();
        for (m, c) in &self.terms {
            out.add_term(Monomial { word: m.word.clone(), g: self.ctx.gmul(m.g, g) }, c.clone());
        }
        out
    }

    pub fn pow(&self, n: u32) -> SmashElement {
        let mut acc = self.ctx.one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_terms(&self, f: impl Fn(&Monomial, &CycScalar) -> SmashElement) -> SmashElement {
        let mut out = self.ctx.zero();
        for (m, c) in &self.terms {
            out += &f(m, c);
        }
        out
    }
}

impl std::ops::AddAssign<&SmashElement> for SmashElement {
    fn add_assign(&mut self, rhs: &SmashElement) {
        self.check(rhs);
        for (m, c) in &rhs.terms {
            add_to(&mut self.terms, m.clone(), c.clone());
        }
    }
}

impl std::ops::SubAssign<&SmashElement> for SmashElement {
    fn sub_assign(&mut self, rhs: &SmashElement) {
        self.check(rhs);
        for (m, c) in &rhs.terms {
            add_to(&mut self.terms, m.clone(), -c);
        }
    }
}

impl<'a> Add<&'a SmashElement> for &'a SmashElement {
    type Output = SmashElement;
    fn add(self, rhs: &'a SmashElement) -> SmashElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a SmashElement> for &'a SmashElement {
    type Output = SmashElement;
    fn sub(self, rhs: &'a SmashElement) -> SmashElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &SmashElement {
    type Output = SmashElement;
    fn neg(self) -> SmashElement {
        SmashElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a SmashElement> for &'a SmashElement {
    type Output = SmashElement;
    fn mul(self, rhs: &'a SmashElement) -> SmashElement {
        self.check(rhs);
        let ctx = &self.ctx;
        let mut out = ctx.zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let (k, m) = ctx.mul_monomials(m1, m2);
                out.add_term(m, (c1 * c2).mul_zeta(k as i64));
            }
        }
        out
    }
}

impl Add for SmashElement {
    type Output = SmashElement;
    fn add(mut self, rhs: SmashElement) -> SmashElement {
        self += &rhs;
        self
    }
}

impl Sub for SmashElement {
    type Output = SmashElement;
    fn sub(mut self, rhs: SmashElement) -> SmashElement {
        self -= &rhs;
        self
    }
}

impl Mul for SmashElement {
    type Output = SmashElement;
    fn mul(self, rhs: SmashElement) -> SmashElement {
        &self * &rhs
    }
}

/// Appends `c * body` to `out` in the expression syntax.
pub(crate) fn write_term(out: &mut String, first: bool, c: &CycScalar, body: &str) {
    let neg_c = -c;
    let (negative, mag) = match neg_c.as_scaled_root() {
        Some((r, _)) if !r.is_negative() => (true, neg_c),
        _ => (false, c.clone()),
    };
    if first {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    let mag_text = if mag.is_compound() { format!("({mag})") } else { mag.to_string() };
    if body.is_empty() {
        out.push_str(&mag_text);
    } else if mag.is_one() {
        out.push_str(body);
    } else {
        out.push_str(&mag_text);
        out.push_str(" * ");
        out.push_str(body);
    }
}

/// Prints in ascending monomial order, e.g. `1 - g[5]`,
/// `zeta(25)^5 * a1 g[1]`; the output parses back with [`parse_element`].
impl fmt::Display for SmashElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            write_term(&mut out, i == 0, c, &self.ctx.monomial_body(m));
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for SmashElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::{CartanMatrix, LinkingDatum};

    pub(crate) fn i1_ctx() -> Ctx {
        let group = GroupSpec::new(vec![25]).unwrap();
        let field = CycField::get(25);
        SmashContext::new(group.clone(), field, &[group.element(&[1]).unwrap()], &[group.character(&[5]).unwrap()])
    }

    fn i2_datum() -> LinkingDatum {
        let group = GroupSpec::new(vec![5, 5]).unwrap();
        let field = CycField::get(5);
        LinkingDatum::new(
            group.clone(),
            CartanMatrix::new(vec![1, 1]).unwrap(),
            vec![group.element(&[1, 0]).unwrap(), group.element(&[0, 1]).unwrap()],
            vec![group.character(&[-1, -1]).unwrap(), group.character(&[1, 1]).unwrap()],
            [((0, 1), field.one())].into_iter().collect(),
            field,
        )
        .unwrap()
    }

    #[test]
    fn order_prefers_lower_index() {
        assert_eq!(word_cmp(&[0, 1], &[1, 0]), Ordering::Greater);
        assert_eq!(word_cmp(&[1, 1, 1], &[0, 0]), Ordering::Greater);
        assert_eq!(word_cmp(&[0], &[0]), Ordering::Equal);
    }

    #[test]
    fn relation_two_examples() {
        let ctx = i1_ctx();
        let g = ctx.group_element(1);
        let a = ctx.letter(0);
        let p = &g * &a;
        assert_eq!(p.to_string(), "zeta(25)^5 * a1 g[1]");
        assert_eq!(&ctx.one() * &a, a);
        // (a g)(a g) = χ(g) a a g²
        let ag = &a * &g;
        let sq = &ag * &ag;
        let expect = ctx.term(Monomial::new(&[0, 0], 2), ctx.field().zeta_pow(5));
        assert_eq!(sq, expect);
    }

    #[test]
    fn associativity_small() {
        let d = i2_datum();
        let ctx = SmashContext::from_datum(&d);
        let x = &ctx.letter(0) + &ctx.group_element(3);
        let y = &ctx.letter(1) * &ctx.group_element(7);
        let z = &(&ctx.letter(0) * &ctx.letter(1)) - &ctx.group_element(11);
        assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }

    #[test]
    fn printing() {
        let ctx = i1_ctx();
        let f = ctx.field();
        let e = &ctx.one() - &ctx.group_element(5);
        assert_eq!(e.to_string(), "1 - g[5]");
        assert_eq!(ctx.zero().to_string(), "0");
        let c = &f.one() + &f.zeta_pow(5);
        let t = ctx.letter(0).scale(&c);
        assert_eq!(t.to_string(), "(1 + zeta(25)^5) * a1");
        let n = ctx.letter(0).scale(&f.int(-3));
        assert_eq!(n.to_string(), "-3 * a1");
    }
}
