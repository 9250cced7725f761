use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;

use super::{add_to, word_cmp, Ctx, Monomial, SmashElement, Word};
use crate::par::Execution;
use crate::scalars::CycScalar;

/// An oriented relation `lhs → rhs` where `lhs` is a bare word and `rhs`
/// is a combination of strictly smaller monomials.
#[derive(Debug, Clone)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Vec<(Monomial, CycScalar)>,
}

impl Rule {
    /// `lhs − rhs` as an element.
    pub fn relation(&self, ctx: &Ctx) -> SmashElement {
        let mut e = ctx.word(&self.lhs);
        for (m, c) in &self.rhs {
            e.add_term(m.clone(), -c);
        }
        e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletionStatus {
    /// Every overlap resolved.
    Confluent,
    /// Overlaps of length at most the given degree resolved; longer ones skipped.
    CompleteToDegree(usize),
}

impl fmt::Display for CompletionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompletionStatus::Confluent => write!(f, "confluent"),
            CompletionStatus::CompleteToDegree(d) => write!(f, "complete to degree {d}"),
        }
    }
}

/// Which occurrence of a leading word is rewritten first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompletionError {
    #[error("cannot orient {element}: leading word {word} has coefficient {coefficient} in the group algebra")]
    NotOrientable { element: String, word: String, coefficient: String },
    #[error("relation reduces to a nonzero element of the group algebra: {0}")]
    GroupRelation(String),
    #[error("{0}")]
    Datum(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("degree bound {bound} exceeded by monomial {monomial} of degree {degree}")]
    Bound { monomial: String, degree: usize, bound: usize },
}

/// Reduction result; `provisional` is set when the system is only complete
/// to a degree below the degree of the input.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub element: SmashElement,
    pub provisional: bool,
}

type Poly = Arc<Vec<(Monomial, CycScalar)>>;

pub struct RewriteSystem {
    ctx: Ctx,
    rules: Vec<Rule>,
    by_first: Vec<Vec<usize>>,
    status: CompletionStatus,
    bound: usize,
    caches: [DashMap<Word, Poly>; 2],
}

impl Clone for RewriteSystem {
    fn clone(&self) -> Self {
        RewriteSystem::from_rules(&self.ctx, self.rules.clone(), self.status, self.bound)
    }
}

impl fmt::Debug for RewriteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RewriteSystem")
            .field("rules", &self.rules.len())
            .field("status", &self.status)
            .field("bound", &self.bound)
            .finish()
    }
}

impl RewriteSystem {
    /// A system from already oriented rules (no completion is run).
    pub fn from_rules(ctx: &Ctx, mut rules: Vec<Rule>, status: CompletionStatus, bound: usize) -> Self {
        rules.sort_by(|a, b| word_cmp(&a.lhs, &b.lhs));
        let mut by_first = vec![Vec::new(); ctx.num_letters()];
        for (k, r) in rules.iter().enumerate() {
            by_first[r.lhs[0] as usize].push(k);
        }
        RewriteSystem {
            ctx: ctx.clone(),
            rules,
            by_first,
            status,
            bound,
            caches: [DashMap::new(), DashMap::new()],
        }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn status(&self) -> CompletionStatus {
        self.status
    }

    pub fn is_confluent(&self) -> bool {
        self.status == CompletionStatus::Confluent
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Degree up to which normal forms are certified unique.
    pub fn certified_degree(&self) -> Option<usize> {
        match self.status {
            CompletionStatus::Confluent => None,
            CompletionStatus::CompleteToDegree(d) => Some(d),
        }
    }

    pub fn clear_caches(&self) {
        for c in &self.caches {
            c.clear();
        }
    }

    fn find(&self, w: &[u8], strategy: Strategy) -> Option<(usize, usize)> {
        let hit = |p: usize| {
            self.by_first[w[p] as usize]
                .iter()
                .find(|&&k| w[p..].starts_with(&self.rules[k].lhs))
                .map(|&k| (p, k))
        };
        match strategy {
            Strategy::Leftmost => (0..w.len()).find_map(hit),
            Strategy::Rightmost => (0..w.len()).rev().find_map(hit),
        }
    }

    pub fn is_irreducible(&self, w: &[u8]) -> bool {
        self.find(w, Strategy::Leftmost).is_none()
    }

    /// Rewrite one occurrence of a leading word inside `w`.
    fn one_step(&self, w: &[u8], strategy: Strategy) -> Option<Vec<(Monomial, CycScalar)>> {
        let (p, k) = self.find(w, strategy)?;
        let rule = &self.rules[k];
        let (x, y) = (&w[..p], &w[p + rule.lhs.len()..]);
        let mut out = Vec::with_capacity(rule.rhs.len());
        for (m, c) in &rule.rhs {
            let mut word = Word::from_slice(x);
            word.extend_from_slice(&m.word);
            word.extend_from_slice(y);
            let k = self.ctx.word_char_exp(y, m.g);
            out.push((Monomial { word, g: m.g }, c.mul_zeta(k as i64)));
        }
        Some(out)
    }

    /// Normal form of a bare word, memoized.
    fn nf_word(&self, w: &Word, strategy: Strategy) -> Poly {
        let cache = &self.caches[strategy as usize];
        if let Some(v) = cache.get(w) {
            return v.clone();
        }
        let one = self.ctx.field().one();
        let mut stack: Vec<(Word, Option<Vec<(Monomial, CycScalar)>>)> = vec![(w.clone(), None)];
        while !stack.is_empty() {
            let top = stack.len() - 1;
            if cache.contains_key(&stack[top].0) {
                stack.pop();
                continue;
            }
            if stack[top].1.is_none() {
                match self.one_step(&stack[top].0, strategy) {
                    None => {
                        let (word, _) = stack.pop().expect("nonempty");
                        let m = Monomial { word: word.clone(), g: 0 };
                        cache.insert(word, Arc::new(vec![(m, one.clone())]));
                        continue;
                    }
                    Some(e) => stack[top].1 = Some(e),
                }
            }
            let mut missing: Vec<Word> = Vec::new();
            let mut seen = HashSet::new();
            for (m, _) in stack[top].1.as_ref().expect("expanded") {
                if !cache.contains_key(&m.word) && seen.insert(&m.word) {
                    missing.push(m.word.clone());
                }
            }
            if missing.is_empty() {
                let (word, exp) = stack.pop().expect("nonempty");
                let mut acc = BTreeMap::new();
                for (m, c) in exp.expect("expanded") {
                    let nf = cache.get(&m.word).map(|r| r.clone()).expect("child computed");
                    for (m2, c2) in nf.iter() {
                        let g = self.ctx.gmul(m2.g, m.g);
                        add_to(&mut acc, Monomial { word: m2.word.clone(), g }, &c * c2);
                    }
                }
                cache.insert(word, Arc::new(acc.into_iter().collect()));
            } else {
                stack.extend(missing.into_iter().map(|w| (w, None)));
            }
        }
        cache.get(w).map(|r| r.clone()).expect("computed")
    }

    fn nf_monomial(&self, m: &Monomial, c: &CycScalar, strategy: Strategy, out: &mut BTreeMap<Monomial, CycScalar>) {
        let nf = self.nf_word(&m.word, strategy);
        for (m2, c2) in nf.iter() {
            add_to(out, Monomial { word: m2.word.clone(), g: self.ctx.gmul(m2.g, m.g) }, c * c2);
        }
    }

    /// Normal form of a single monomial (coefficient one).
    pub fn reduce_monomial(&self, m: &Monomial) -> SmashElement {
        let mut out = BTreeMap::new();
        self.nf_monomial(m, &self.ctx.field().one(), Strategy::Leftmost, &mut out);
        self.ctx.from_terms(out)
    }

    pub fn reduce(&self, x: &SmashElement) -> SmashElement {
        self.reduce_with(x, Strategy::Leftmost)
    }

    pub fn reduce_with(&self, x: &SmashElement, strategy: Strategy) -> SmashElement {
        assert!(x.ctx().id() == self.ctx.id(), "element from a different context");
        let mut out = BTreeMap::new();
        for (m, c) in x.terms() {
            self.nf_monomial(m, c, strategy, &mut out);
        }
        self.ctx.from_terms(out)
    }

    /// Reduction with the word normal forms computed under `exec`.
    pub fn reduce_exec(&self, x: &SmashElement, exec: Execution) -> SmashElement {
        let words: Vec<Word> = x.terms().keys().map(|m| m.word.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        exec.map(&words, |w| {
            self.nf_word(w, Strategy::Leftmost);
        });
        self.reduce(x)
    }

    pub fn normal_form(&self, x: &SmashElement) -> Reduced {
        let provisional = matches!(self.status, CompletionStatus::CompleteToDegree(d) if x.degree() > d);
        Reduced { element: self.reduce(x), provisional }
    }

    /// Normal form, refusing inputs above the certified degree.
    pub fn normal_form_strict(&self, x: &SmashElement) -> Result<SmashElement, ReduceError> {
        if let CompletionStatus::CompleteToDegree(d) = self.status {
            if let Some(m) = x.terms().keys().rev().find(|m| m.degree() > d) {
                return Err(ReduceError::Bound {
                    monomial: self.ctx.monomial_body(m),
                    degree: m.degree(),
                    bound: d,
                });
            }
        }
        Ok(self.reduce(x))
    }

    /// Turn a reduced nonzero relation into a rule.
    fn orient(&self, r: &SmashElement) -> Result<Rule, CompletionError> {
        let (lead, _) = r.leading().expect("nonzero");
        if lead.word.is_empty() {
            return Err(CompletionError::GroupRelation(r.to_string()));
        }
        let word = lead.word.clone();
        let lead_terms: Vec<(&Monomial, &CycScalar)> = r.terms().iter().filter(|(m, _)| m.word == word).collect();
        if lead_terms.len() != 1 {
            let coefficient = self
                .ctx
                .from_terms(lead_terms.iter().map(|(m, c)| (Monomial::group(m.g), (*c).clone())))
                .to_string();
            return Err(CompletionError::NotOrientable {
                element: r.to_string(),
                word: self.ctx.monomial_body(&Monomial::new(&word, 0)),
                coefficient,
            });
        }
        let (m0, c0) = lead_terms[0];
        let g0_inv = self.ctx.ginv(m0.g);
        let factor = -c0.inv().expect("nonzero coefficient");
        let rhs = r
            .terms()
            .iter()
            .filter(|(m, _)| m.word != word)
            .map(|(m, c)| (Monomial { word: m.word.clone(), g: self.ctx.gmul(m.g, g0_inv) }, c * &factor))
            .collect::<BTreeMap<_, _>>()
            .into_iter()
            .collect();
        Ok(Rule { lhs: word, rhs })
    }

    /// Orient `relations` and resolve overlaps of length at most `bound`.
    pub fn complete(ctx: &Ctx, relations: Vec<SmashElement>, bound: usize) -> Result<RewriteSystem, CompletionError> {
        let mut slots: Vec<Option<Rule>> = Vec::new();
        let mut queue: VecDeque<SmashElement> = relations.into();
        // (overlap length, sequence, rule a, rule b, overlap size)
        let mut pairs: BinaryHeap<Reverse<(usize, usize, usize, usize, usize)>> = BinaryHeap::new();
        let mut skipped: Vec<(usize, usize)> = Vec::new();
        let mut seq = 0usize;
        let mut sys = RewriteSystem::from_rules(ctx, Vec::new(), CompletionStatus::Confluent, bound);

        let rebuild = |slots: &[Option<Rule>]| {
            RewriteSystem::from_rules(ctx, slots.iter().flatten().cloned().collect(), CompletionStatus::Confluent, bound)
        };

        loop {
            while let Some(r) = queue.pop_front() {
                let r = sys.reduce(&r);
                if r.is_zero() {
                    continue;
                }
                let rule = sys.orient(&r)?;
                // the ideal is two-sided in the smash product: close under
                // conjugation by the group generators
                let rel = rule.relation(ctx);
                for h in 0..ctx.group().rank() {
                    let y = ctx.index(&ctx.group().generator(h));
                    let conj = &(&ctx.group_element(y) * &rel) * &ctx.group_element(ctx.ginv(y));
                    let chi = ctx.field().zeta_pow(ctx.word_char_exp(&rule.lhs, y) as i64);
                    let defect = &conj - &rel.scale(&chi);
                    if !defect.is_zero() {
                        queue.push_back(defect);
                    }
                }
                let id = slots.len();
                for slot in slots.iter_mut() {
                    let contains = matches!(slot, Some(old) if old.lhs.windows(rule.lhs.len()).any(|w| w == rule.lhs.as_slice()));
                    if contains {
                        let old = slot.take().expect("present");
                        queue.push_back(old.relation(ctx));
                    }
                }
                slots.push(Some(rule));
                for other in 0..slots.len() {
                    let Some(b) = &slots[other] else { continue };
                    let a = slots[id].as_ref().expect("just added");
                    for (x, y, lx, ly) in [(id, other, &a.lhs, &b.lhs), (other, id, &b.lhs, &a.lhs)] {
                        for k in 1..lx.len().min(ly.len()) {
                            if lx[lx.len() - k..] == ly[..k] {
                                let len = lx.len() + ly.len() - k;
                                pairs.push(Reverse((len, seq, x, y, k)));
                                seq += 1;
                            }
                        }
                        if x == y {
                            break;
                        }
                    }
                }
                sys = rebuild(&slots);
            }
            let Some(Reverse((len, _, a, b, k))) = pairs.pop() else { break };
            let (Some(ra), Some(rb)) = (&slots[a], &slots[b]) else { continue };
            if len > bound {
                skipped.push((a, b));
                continue;
            }
            // word = la · lb[k..] = la[..|la|-k] · lb
            let tail = &rb.lhs[k..];
            let head = &ra.lhs[..ra.lhs.len() - k];
            let left = ra.rhs_times(ctx, &[], tail);
            let right = rb.rhs_times(ctx, head, &[]);
            let s = &sys.reduce(&left) - &sys.reduce(&right);
            if !s.is_zero() {
                queue.push_back(s);
            }
        }
        let open = skipped.iter().any(|(a, b)| slots[*a].is_some() && slots[*b].is_some());
        let status = if open { CompletionStatus::CompleteToDegree(bound) } else { CompletionStatus::Confluent };
        Ok(RewriteSystem::from_rules(ctx, slots.into_iter().flatten().collect(), status, bound))
    }
}

impl Rule {
    /// `x · rhs · y` as an element.
    fn rhs_times(&self, ctx: &Ctx, x: &[u8], y: &[u8]) -> SmashElement {
        let mut out = ctx.zero();
        for (m, c) in &self.rhs {
            let mut word = Word::from_slice(x);
            word.extend_from_slice(&m.word);
            word.extend_from_slice(y);
            let k = ctx.word_char_exp(y, m.g);
            out.add_term(Monomial { word, g: m.g }, c.mul_zeta(k as i64));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BasisError {
    #[error("basis is infinite at bound {bound}: irreducible words of unbounded length")]
    Infinite { bound: usize },
    #[error("basis size exceeds cap {cap}")]
    CapExceeded { cap: u128 },
}

/// Irreducible words times group elements.
#[derive(Debug, Clone)]
pub struct Basis {
    pub words: Vec<Word>,
    pub group_size: u32,
    /// Set when the system is not known to be confluent.
    pub provisional: bool,
}

impl Basis {
    pub fn count(&self) -> u128 {
        self.words.len() as u128 * self.group_size as u128
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.words
            .iter()
            .flat_map(move |w| (0..self.group_size).map(move |g| Monomial { word: w.clone(), g }))
    }
}

/// Aho–Corasick automaton over the leading words; live states are those
/// not recognizing any leading word.
struct Automaton {
    next: Vec<Vec<usize>>,
    dead: Vec<bool>,
}

impl Automaton {
    fn new(alphabet: usize, words: &[&[u8]]) -> Self {
        let mut children: Vec<Vec<Option<usize>>> = vec![vec![None; alphabet]];
        let mut dead = vec![false];
        for w in words {
            let mut s = 0;
            for &c in w.iter() {
                s = match children[s][c as usize] {
                    Some(t) => t,
                    None => {
                        children.push(vec![None; alphabet]);
                        dead.push(false);
                        let t = children.len() - 1;
                        children[s][c as usize] = Some(t);
                        t
                    }
                };
            }
            dead[s] = true;
        }
        let n = children.len();
        let mut next = vec![vec![0usize; alphabet]; n];
        let mut fail = vec![0usize; n];
        let mut order = VecDeque::new();
        for c in 0..alphabet {
            if let Some(t) = children[0][c] {
                next[0][c] = t;
                order.push_back(t);
            }
        }
        while let Some(s) = order.pop_front() {
            dead[s] = dead[s] || dead[fail[s]];
            for c in 0..alphabet {
                match children[s][c] {
                    Some(t) => {
                        fail[t] = next[fail[s]][c];
                        next[s][c] = t;
                        order.push_back(t);
                    }
                    None => next[s][c] = next[fail[s]][c],
                }
            }
        }
        Automaton { next, dead }
    }

    fn has_cycle(&self) -> bool {
        // iterative DFS with colors over live states
        let n = self.next.len();
        let mut color = vec![0u8; n];
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        color[0] = 1;
        while let Some(top) = stack.last_mut() {
            let (s, c) = *top;
            if c == self.next[s].len() {
                color[s] = 2;
                stack.pop();
                continue;
            }
            top.1 += 1;
            let t = self.next[s][c];
            if self.dead[t] {
                continue;
            }
            match color[t] {
                0 => {
                    color[t] = 1;
                    stack.push((t, 0));
                }
                1 => return true,
                _ => {}
            }
        }
        false
    }
}

/// All irreducible monomials of a system whose irreducible words form a
/// finite set.
pub fn enumerate_basis(rs: &RewriteSystem, cap: u128) -> Result<Basis, BasisError> {
    let ctx = rs.ctx();
    let alphabet = ctx.num_letters();
    let lhs: Vec<&[u8]> = rs.rules().iter().map(|r| r.lhs.as_slice()).collect();
    let auto = Automaton::new(alphabet, &lhs);
    if auto.has_cycle() {
        return Err(BasisError::Infinite { bound: rs.bound() });
    }
    let g = ctx.group_size() as u128;
    let mut words: Vec<Word> = Vec::new();
    let mut stack: Vec<(usize, Word)> = vec![(0, Word::new())];
    while let Some((s, w)) = stack.pop() {
        if (words.len() as u128 + 1) * g > cap {
            return Err(BasisError::CapExceeded { cap });
        }
        for c in 0..alphabet {
            let t = auto.next[s][c];
            if !auto.dead[t] {
                let mut w2 = w.clone();
                w2.push(c as u8);
                stack.push((t, w2));
            }
        }
        words.push(w);
    }
    words.sort_by(|a, b| word_cmp(a, b));
    Ok(Basis { words, group_size: ctx.group_size(), provisional: !rs.is_confluent() })
}
