//! Linking data of type `A_{n_1} × … × A_{n_t}`, root-vector parameter
//! families, the scalars derived from them, and the component split used by
//! the cocycle construction.

mod file;

use std::collections::BTreeMap;
use std::fmt;

use crate::group::{Character, GroupElement, GroupError, GroupSpec};
use crate::scalars::{CycField, CycScalar, ScalarError};

pub use file::{load_datum, parse_datum, DatumFile, Instance};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DatumError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("malformed datum: {0}")]
    Shape(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Cartan matrix of a disjoint union of type `A` diagrams, vertices numbered
/// consecutively component by component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanMatrix {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    owner: Vec<usize>,
}

impl CartanMatrix {
    pub fn new(sizes: Vec<usize>) -> Result<Self, DatumError> {
        if sizes.contains(&0) {
            return Err(DatumError::Shape("component of size 0".into()));
        }
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut owner = Vec::new();
        for (k, &n) in sizes.iter().enumerate() {
            offsets.push(owner.len());
            owner.extend(std::iter::repeat_n(k, n));
        }
        Ok(CartanMatrix { sizes, offsets, owner })
    }

    /// Number of vertices `θ`.
    pub fn rank(&self) -> usize {
        self.owner.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn num_components(&self) -> usize {
        self.sizes.len()
    }

    /// First vertex `S_k` of component `k`.
    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.owner[v]
    }

    pub fn same_component(&self, a: usize, b: usize) -> bool {
        self.owner[a] == self.owner[b]
    }

    pub fn entry(&self, i: usize, j: usize) -> i32 {
        if i == j {
            2
        } else if self.same_component(i, j) && i.abs_diff(j) == 1 {
            -1
        } else {
            0
        }
    }

    pub fn vertices(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k] + self.sizes[k]
    }

    /// All positive roots of component `k`, ordered by `(start, end)`.
    pub fn roots(&self, k: usize) -> Vec<Root> {
        let r = self.vertices(k);
        let mut out = Vec::new();
        for s in r.clone() {
            for e in s + 1..=r.end {
                out.push(Root { start: s, end: e });
            }
        }
        out
    }

    pub fn all_roots(&self) -> Vec<Root> {
        (0..self.num_components()).flat_map(|k| self.roots(k)).collect()
    }
}

/// A positive root of type `A`, i.e. the vertex interval `start..end`
/// (0-based, half-open). In 1-based global numbering this is the pair
/// `(start+1, end+1)` indexing `e_{i,j}`, `χ_{i,j}`, `g_{i,j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub start: usize,
    pub end: usize,
}

impl Root {
    pub fn new(start: usize, end: usize) -> Self {
        assert!(start < end, "empty root interval");
        Root { start, end }
    }

    /// Root from 1-based global indices `(i, j)`, `i < j`.
    pub fn from_one_based(i: usize, j: usize) -> Self {
        Root::new(i - 1, j - 1)
    }

    pub fn height(&self) -> usize {
        self.end - self.start
    }

    pub fn is_simple(&self) -> bool {
        self.height() == 1
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.start + 1, self.end + 1)
    }
}

#[derive(Debug, Clone)]
pub struct LinkingDatum {
    group: GroupSpec,
    cartan: CartanMatrix,
    g: Vec<GroupElement>,
    chi: Vec<Character>,
    lambda: BTreeMap<(usize, usize), CycScalar>,
    field: &'static CycField,
}

impl LinkingDatum {
    /// Structural construction. `lambda` is keyed by 0-based pairs `i < j`;
    /// zero entries are dropped. Semantic constraints are checked separately
    /// by [`validate_datum`].
    pub fn new(
        group: GroupSpec,
        cartan: CartanMatrix,
        g: Vec<GroupElement>,
        chi: Vec<Character>,
        lambda: BTreeMap<(usize, usize), CycScalar>,
        field: &'static CycField,
    ) -> Result<Self, DatumError> {
        let theta = cartan.rank();
        if g.len() != theta || chi.len() != theta {
            return Err(DatumError::Shape(format!(
                "{theta} vertices in the Cartan data but {} group elements and {} characters",
                g.len(),
                chi.len()
            )));
        }
        if !(field.conductor() as u64).is_multiple_of(group.exponent()) {
            return Err(DatumError::Shape(format!(
                "conductor {} is not a multiple of the group exponent {}",
                field.conductor(),
                group.exponent()
            )));
        }
        let ident = group.identity();
        for x in g.iter() {
            group.mul(x, &ident)?;
        }
        for c in chi.iter() {
            group.char_mul(c, &group.trivial_character())?;
        }
        let mut lam = BTreeMap::new();
        for ((i, j), v) in lambda {
            if i >= j || j >= theta {
                return Err(DatumError::Shape(format!(
                    "lambda index ({}, {}) must satisfy 1 <= i < j <= {theta}",
                    i + 1,
                    j + 1
                )));
            }
            if v.conductor() != field.conductor() {
                return Err(ScalarError::ConductorMismatch(v.conductor(), field.conductor()).into());
            }
            if !v.is_zero() {
                lam.insert((i, j), v);
            }
        }
        Ok(LinkingDatum { group, cartan, g, chi, lambda: lam, field })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn g(&self, i: usize) -> &GroupElement {
        &self.g[i]
    }

    pub fn chi(&self, i: usize) -> &Character {
        &self.chi[i]
    }

    pub fn g_all(&self) -> &[GroupElement] {
        &self.g
    }

    pub fn chi_all(&self) -> &[Character] {
        &self.chi
    }

    /// Stored upper triangle, 0-based `i < j`.
    pub fn lambda_entries(&self) -> &BTreeMap<(usize, usize), CycScalar> {
        &self.lambda
    }

    /// `λ_{ij}` for any ordered pair; the lower triangle is
    /// `λ_{ji} = −χ_j(g_i)^{-1} λ_{ij}`.
    pub fn lambda(&self, i: usize, j: usize) -> CycScalar {
        if i < j {
            self.lambda.get(&(i, j)).cloned().unwrap_or_else(|| self.field.zero())
        } else if i > j {
            match self.lambda.get(&(j, i)) {
                // λ_{ji} = −χ_i(g_j)^{-1} λ_{ij}, here with roles (j,i)
                Some(v) => -(v * &self.q(j, i).inv().expect("root of unity")),
                None => self.field.zero(),
            }
        } else {
            self.field.zero()
        }
    }

    /// `q_{ij} = χ_j(g_i)`.
    pub fn q(&self, i: usize, j: usize) -> CycScalar {
        self.field.zeta_pow(self.q_exp(i, j) as i64)
    }

    /// Exponent `k` with `χ_j(g_i) = ζ_E^k`.
    pub fn q_exp(&self, i: usize, j: usize) -> u32 {
        self.group.pairing_exponent(&self.chi[j], &self.g[i], self.field.conductor())
    }

    pub fn evaluate(&self, chi: &Character, g: &GroupElement) -> CycScalar {
        self.group.evaluate(chi, g, self.field).expect("element of the datum group")
    }

    /// `N_i`, the order of `χ_i(g_i)`.
    pub fn vertex_order(&self, i: usize) -> u32 {
        let k = self.q_exp(i, i) as u64;
        let e = self.field.conductor() as u64;
        (e / num_integer::gcd(k, e)) as u32
    }

    /// `N` of component `k` (taken at its first vertex).
    pub fn component_order(&self, k: usize) -> u32 {
        self.vertex_order(self.cartan.offset(k))
    }

    /// `i` and `j` are linked: `λ_{ij} ≠ 0`.
    pub fn linked(&self, i: usize, j: usize) -> bool {
        let key = if i < j { (i, j) } else { (j, i) };
        self.lambda.contains_key(&key)
    }

    /// Same datum with every `λ` set to zero.
    pub fn without_lambda(&self) -> LinkingDatum {
        LinkingDatum { lambda: BTreeMap::new(), ..self.clone() }
    }

    /// `χ_{i,j} = ∏_{i≤l<j} χ_l`.
    pub fn root_character(&self, r: Root) -> Character {
        r.vertices().fold(self.group.trivial_character(), |acc, l| {
            self.group.char_mul(&acc, &self.chi[l]).expect("same group")
        })
    }

    /// `g_{i,j} = ∏_{i≤l<j} g_l`.
    pub fn root_element(&self, r: Root) -> GroupElement {
        r.vertices().fold(self.group.identity(), |acc, l| {
            self.group.mul(&acc, &self.g[l]).expect("same group")
        })
    }

    pub fn root_order(&self, r: Root) -> u32 {
        self.component_order(self.cartan.component_of(r.start))
    }

    /// `h_{i,j} = g_{i,j}^N`.
    pub fn root_h(&self, r: Root) -> GroupElement {
        self.group.pow(&self.root_element(r), self.root_order(r) as i64)
    }

    pub fn check_root(&self, r: Root) -> Result<(), DatumError> {
        if r.start >= r.end || r.end > self.rank() {
            return Err(DatumError::Shape(format!("root {r} out of range")));
        }
        let k = self.cartan.component_of(r.start);
        if r.end > self.cartan.vertices(k).end {
            return Err(DatumError::Shape(format!("root {r} crosses a component boundary")));
        }
        Ok(())
    }
}

/// Root-vector parameters `γ`, keyed by root. Missing entries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootParameterFamily {
    values: BTreeMap<Root, CycScalar>,
    field: &'static CycField,
}

impl RootParameterFamily {
    pub fn zero(field: &'static CycField) -> Self {
        RootParameterFamily { values: BTreeMap::new(), field }
    }

    pub fn new(
        d: &LinkingDatum,
        values: impl IntoIterator<Item = (Root, CycScalar)>,
    ) -> Result<Self, DatumError> {
        let mut out = RootParameterFamily::zero(d.field());
        for (r, v) in values {
            d.check_root(r)?;
            if v.conductor() != d.field().conductor() {
                return Err(ScalarError::ConductorMismatch(v.conductor(), d.field().conductor()).into());
            }
            out.set(r, v);
        }
        Ok(out)
    }

    pub fn set(&mut self, r: Root, v: CycScalar) {
        if v.is_zero() {
            self.values.remove(&r);
        } else {
            self.values.insert(r, v);
        }
    }

    pub fn get(&self, r: Root) -> CycScalar {
        self.values.get(&r).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn entries(&self) -> &BTreeMap<Root, CycScalar> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Family with only the listed roots kept.
    pub fn restricted(&self, keep: impl Fn(Root) -> bool) -> Self {
        RootParameterFamily {
            values: self.values.iter().filter(|(r, _)| keep(**r)).map(|(r, v)| (*r, v.clone())).collect(),
            field: self.field,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Cartype { i: usize, j: usize },
    VertexOrder { i: usize, order: Option<u32> },
    ComponentOrder { component: usize, i: usize },
    LambdaSameComponent { i: usize, j: usize },
    LambdaGroup { i: usize, j: usize },
    LambdaCharacter { i: usize, j: usize },
    LinkedTwice { vertex: usize },
    Gamma { root: Root, chi_power_trivial: bool, h_trivial: bool },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cartype { i, j } => {
                write!(f, "cartype: chi_{0}(g_{1}) chi_{1}(g_{0}) != chi_{0}(g_{0})^a_{0}{1}", i + 1, j + 1)
            }
            Violation::VertexOrder { i, order } => match order {
                Some(n) => write!(f, "order of chi_{0}(g_{0}) is {n}, must be odd and > 3", i + 1),
                None => write!(f, "chi_{0}(g_{0}) is not a root of unity", i + 1),
            },
            Violation::ComponentOrder { component, i } => write!(
                f,
                "component {}: order of chi_{1}(g_{1}) differs from the rest of the component",
                component + 1,
                i + 1
            ),
            Violation::LambdaSameComponent { i, j } => {
                write!(f, "lambda_{}{} nonzero inside one component", i + 1, j + 1)
            }
            Violation::LambdaGroup { i, j } => {
                write!(f, "lambda_{0}{1} nonzero but g_{0} g_{1} = 1", i + 1, j + 1)
            }
            Violation::LambdaCharacter { i, j } => {
                write!(f, "lambda_{0}{1} nonzero but chi_{0} chi_{1} != eps", i + 1, j + 1)
            }
            Violation::LinkedTwice { vertex } => {
                write!(f, "vertex {} is linked to two different vertices", vertex + 1)
            }
            Violation::Gamma { root, chi_power_trivial, h_trivial } => {
                write!(f, "gamma{root} nonzero but ")?;
                match (chi_power_trivial, h_trivial) {
                    (false, true) => write!(f, "chi{root}^N != eps and h{root} = 1"),
                    (false, false) => write!(f, "chi{root}^N != eps"),
                    _ => write!(f, "h{root} = 1"),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_datum(d: &LinkingDatum) -> ValidationReport {
    let mut v = Vec::new();
    let theta = d.rank();
    let e = d.field().conductor();
    for i in 0..theta {
        for j in i..theta {
            let lhs = (d.q_exp(j, i) + d.q_exp(i, j)) % e;
            let a = d.cartan().entry(i, j) as i64;
            let rhs = (d.q_exp(i, i) as i64 * a).rem_euclid(e as i64) as u32;
            if lhs != rhs {
                v.push(Violation::Cartype { i, j });
            }
        }
    }
    for i in 0..theta {
        let n = d.q(i, i).order_of();
        // the G_2 divisibility condition never applies to type A
        if !matches!(n, Some(n) if n % 2 == 1 && n > 3) {
            v.push(Violation::VertexOrder { i, order: n });
        }
    }
    for k in 0..d.cartan().num_components() {
        let first = d.cartan().offset(k);
        for i in d.cartan().vertices(k).skip(1) {
            if d.vertex_order(i) != d.vertex_order(first) {
                v.push(Violation::ComponentOrder { component: k, i });
            }
        }
    }
    let mut link_count = vec![0usize; theta];
    for &(i, j) in d.lambda_entries().keys() {
        link_count[i] += 1;
        link_count[j] += 1;
        if d.cartan().same_component(i, j) {
            v.push(Violation::LambdaSameComponent { i, j });
        }
        if d.group().mul(d.g(i), d.g(j)).expect("same group").is_identity() {
            v.push(Violation::LambdaGroup { i, j });
        }
        if !d.group().char_mul(d.chi(i), d.chi(j)).expect("same group").is_trivial() {
            v.push(Violation::LambdaCharacter { i, j });
        }
    }
    for (vertex, &c) in link_count.iter().enumerate() {
        if c > 1 {
            v.push(Violation::LinkedTwice { vertex });
        }
    }
    ValidationReport { violations: v }
}

/// Root `r` may carry a nonzero parameter: `χ_r^N = ε` and `h_r ≠ 1`.
pub fn root_admits_parameter(d: &LinkingDatum, r: Root) -> (bool, bool) {
    let n = d.root_order(r) as i64;
    let chi_ok = d.group().char_pow(&d.root_character(r), n).is_trivial();
    let h_trivial = d.root_h(r).is_identity();
    (chi_ok, h_trivial)
}

pub fn validate_gamma(d: &LinkingDatum, gamma: &RootParameterFamily) -> ValidationReport {
    let mut v = Vec::new();
    for &root in gamma.entries().keys() {
        let (chi_power_trivial, h_trivial) = root_admits_parameter(d, root);
        if !chi_power_trivial || h_trivial {
            v.push(Violation::Gamma { root, chi_power_trivial, h_trivial });
        }
    }
    ValidationReport { violations: v }
}

/// Tables of the scalars attached to a datum, computed once.
#[derive(Debug, Clone)]
pub struct DerivedScalars {
    /// `q_exp[i][j]`: exponent of `q_{ij} = χ_j(g_i)` as a power of `ζ_E`.
    pub q_exp: Vec<Vec<u32>>,
    /// `N` per component.
    pub n: Vec<u32>,
    pub chi: BTreeMap<Root, Character>,
    pub g: BTreeMap<Root, GroupElement>,
    pub h: BTreeMap<Root, GroupElement>,
    /// `C^j_{i,p}` keyed by 0-based boundaries `(i, p, j)`.
    pub c: BTreeMap<(usize, usize, usize), CycScalar>,
    field: &'static CycField,
}

impl DerivedScalars {
    pub fn field(&self) -> &'static CycField {
        self.field
    }

    /// `B^{i,j}_{p,r} = ∏_{l ∈ r1, h ∈ r2} q_{l,h}` as an exponent of `ζ_E`.
    pub fn b_exp(&self, r1: Root, r2: Root) -> u32 {
        let e = self.field.conductor() as u64;
        let mut k = 0u64;
        for l in r1.vertices() {
            for h in r2.vertices() {
                k += self.q_exp[l][h] as u64;
            }
        }
        (k % e) as u32
    }

    pub fn b(&self, r1: Root, r2: Root) -> CycScalar {
        self.field.zeta_pow(self.b_exp(r1, r2) as i64)
    }

    /// `C^j_{i,p}` for `i < p < j` in one component (0-based boundaries).
    pub fn c_coeff(&self, i: usize, p: usize, j: usize) -> &CycScalar {
        &self.c[&(i, p, j)]
    }
}

fn binom2(n: u32) -> i64 {
    n as i64 * (n as i64 - 1) / 2
}

pub fn derived(d: &LinkingDatum) -> Result<DerivedScalars, DatumError> {
    let theta = d.rank();
    let field = d.field();
    let q_exp: Vec<Vec<u32>> = (0..theta).map(|i| (0..theta).map(|j| d.q_exp(i, j)).collect()).collect();
    let n: Vec<u32> = (0..d.cartan().num_components()).map(|k| d.component_order(k)).collect();
    let mut out = DerivedScalars {
        q_exp,
        n,
        chi: BTreeMap::new(),
        g: BTreeMap::new(),
        h: BTreeMap::new(),
        c: BTreeMap::new(),
        field,
    };
    for k in 0..d.cartan().num_components() {
        let roots = d.cartan().roots(k);
        for &r in &roots {
            out.chi.insert(r, d.root_character(r));
            out.g.insert(r, d.root_element(r));
            out.h.insert(r, d.root_h(r));
        }
        for &r1 in &roots {
            for &r2 in &roots {
                let via_eval = d.evaluate(&out.chi[&r2], &out.g[&r1]);
                if via_eval != out.b(r1, r2) {
                    return Err(DatumError::Internal(format!(
                        "B product for {r1}, {r2} disagrees with chi{r2}(g{r1})"
                    )));
                }
            }
        }
        let nk = out.n[k];
        let q = field.zeta_pow(out.q_exp[d.cartan().offset(k)][d.cartan().offset(k)] as i64);
        let base = (field.one() - q.inv()?).pow(nk as i64)?;
        let range = d.cartan().vertices(k);
        for i in range.clone() {
            for p in i + 1..=range.end {
                for j in p + 1..=range.end {
                    let b = out.b(Root::new(p, j), Root::new(i, p));
                    let c = &base * &b.pow(binom2(nk))?;
                    out.c.insert((i, p, j), c);
                }
            }
        }
    }
    Ok(out)
}

/// `|Γ| · ∏_k N_k^{n_k(n_k+1)/2}`.
pub fn expected_dimension(d: &LinkingDatum) -> u128 {
    let mut dim = d.group().size() as u128;
    for (k, &nk) in d.cartan().sizes().iter().enumerate() {
        let roots = (nk * (nk + 1) / 2) as u32;
        dim *= (d.component_order(k) as u128).pow(roots);
    }
    dim
}

/// Result of splitting a datum at one connected component `I`.
#[derive(Debug, Clone)]
pub struct SplitDatum {
    /// Complement of `I`, over `Γ`.
    pub rest: LinkingDatum,
    /// `I` over `Υ = ⊕ ⟨Z_i⟩`, with `g ↦ Z_i`, `χ_j ↦ η_j`.
    pub part: LinkingDatum,
    /// Global vertices of `I`, in order.
    pub part_vertices: Vec<usize>,
    /// Global vertices of the complement, in order.
    pub rest_vertices: Vec<usize>,
    /// `λ_{jl}` for `j ∈ I`, `l ∉ I` (local indices into `part`, `rest`),
    /// taken from the original datum with `λ_{jl}` for `j > l` derived.
    pub cross: BTreeMap<(usize, usize), CycScalar>,
    /// The characters `χ_j`, `j ∈ I`, on `Γ`.
    pub part_chi: Vec<Character>,
    /// The elements `g_j`, `j ∈ I`, in `Γ`.
    pub part_g: Vec<GroupElement>,
}

pub fn split_datum(d: &LinkingDatum, component: usize) -> Result<SplitDatum, DatumError> {
    let cartan = d.cartan();
    if component >= cartan.num_components() {
        return Err(DatumError::Shape(format!("no component {}", component + 1)));
    }
    let part_vertices: Vec<usize> = cartan.vertices(component).collect();
    let rest_vertices: Vec<usize> = (0..d.rank()).filter(|v| cartan.component_of(*v) != component).collect();
    let e = d.field().conductor();

    let orders: Vec<u32> = part_vertices
        .iter()
        .map(|&i| {
            crate::scalars::lcm(d.group().element_order(d.g(i)), d.group().character_order(d.chi(i))) as u32
        })
        .collect();
    let upsilon = GroupSpec::new(orders.clone())?;
    let z: Vec<GroupElement> = (0..part_vertices.len()).map(|h| upsilon.generator(h)).collect();
    let mut eta = Vec::new();
    for &j in &part_vertices {
        let mut exps = Vec::new();
        for (h, &i) in part_vertices.iter().enumerate() {
            let k = d.q_exp(i, j);
            let step = e / orders[h];
            if !k.is_multiple_of(step) {
                return Err(DatumError::Internal(format!(
                    "chi_{}(g_{}) is not an {}-th root of unity",
                    j + 1,
                    i + 1,
                    orders[h]
                )));
            }
            exps.push((k / step) as i64);
        }
        eta.push(upsilon.character(&exps)?);
    }
    let part = LinkingDatum::new(
        upsilon,
        CartanMatrix::new(vec![part_vertices.len()])?,
        z,
        eta,
        BTreeMap::new(),
        d.field(),
    )?;

    let rest_sizes: Vec<usize> =
        (0..cartan.num_components()).filter(|&k| k != component).map(|k| cartan.sizes()[k]).collect();
    let local = |v: usize| rest_vertices.iter().position(|&x| x == v).expect("complement vertex");
    let rest_lambda = d
        .lambda_entries()
        .iter()
        .filter(|((i, j), _)| cartan.component_of(*i) != component && cartan.component_of(*j) != component)
        .map(|((i, j), v)| ((local(*i), local(*j)), v.clone()))
        .collect();
    let rest = LinkingDatum::new(
        d.group().clone(),
        CartanMatrix::new(rest_sizes)?,
        rest_vertices.iter().map(|&v| d.g(v).clone()).collect(),
        rest_vertices.iter().map(|&v| d.chi(v).clone()).collect(),
        rest_lambda,
        d.field(),
    )?;

    let mut cross = BTreeMap::new();
    for (a, &j) in part_vertices.iter().enumerate() {
        for (b, &l) in rest_vertices.iter().enumerate() {
            let v = d.lambda(j, l);
            if !v.is_zero() {
                cross.insert((a, b), v);
            }
        }
    }
    Ok(SplitDatum {
        part_chi: part_vertices.iter().map(|&v| d.chi(v).clone()).collect(),
        part_g: part_vertices.iter().map(|&v| d.g(v).clone()).collect(),
        rest,
        part,
        part_vertices,
        rest_vertices,
        cross,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(orders: &[u32], sizes: &[usize], g: &[&[i64]], chi: &[&[i64]], lambda: &[(usize, usize, i64)]) -> LinkingDatum {
        let group = GroupSpec::new(orders.to_vec()).unwrap();
        let field = CycField::get(group.exponent() as u32);
        LinkingDatum::new(
            group.clone(),
            CartanMatrix::new(sizes.to_vec()).unwrap(),
            g.iter().map(|x| group.element(x).unwrap()).collect(),
            chi.iter().map(|x| group.character(x).unwrap()).collect(),
            lambda.iter().map(|&(i, j, v)| ((i, j), field.int(v))).collect(),
            field,
        )
        .unwrap()
    }

    fn i1() -> LinkingDatum {
        datum(&[25], &[1], &[&[1]], &[&[5]], &[])
    }

    fn i2() -> LinkingDatum {
        datum(&[5, 5], &[1, 1], &[&[1, 0], &[0, 1]], &[&[-1, -1], &[1, 1]], &[(0, 1, 1)])
    }

    fn i3() -> LinkingDatum {
        datum(&[25, 25], &[2], &[&[1, 0], &[0, 1]], &[&[5, 0], &[-5, 5]], &[])
    }

    #[test]
    fn validate_examples() {
        assert!(validate_datum(&i1()).is_valid());
        assert_eq!(i1().vertex_order(0), 5);
        assert!(validate_datum(&i2()).is_valid());
        assert!(validate_datum(&i3()).is_valid());

        let bad = datum(&[5, 5], &[1, 1], &[&[1, 0], &[0, 1]], &[&[-1, -1], &[1, 2]], &[(0, 1, 1)]);
        let r = validate_datum(&bad);
        assert!(r.violations.contains(&Violation::LambdaCharacter { i: 0, j: 1 }));

        let inside = datum(&[25, 25], &[2], &[&[1, 0], &[0, 1]], &[&[5, 0], &[-5, 5]], &[(0, 1, 1)]);
        assert!(validate_datum(&inside).violations.contains(&Violation::LambdaSameComponent { i: 0, j: 1 }));
    }

    #[test]
    fn brute_force_cartype_oracle() {
        // evaluate the compatibility condition with CycScalar arithmetic
        for d in [i1(), i2(), i3()] {
            for i in 0..d.rank() {
                for j in 0..d.rank() {
                    let lhs = &d.evaluate(d.chi(i), d.g(j)) * &d.evaluate(d.chi(j), d.g(i));
                    let rhs = d.evaluate(d.chi(i), d.g(i)).pow(d.cartan().entry(i, j) as i64).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn gamma_examples() {
        let d = i1();
        let f = d.field();
        assert!(validate_gamma(&d, &RootParameterFamily::zero(f)).is_valid());
        let g = RootParameterFamily::new(&d, [(Root::new(0, 1), f.one())]).unwrap();
        assert!(validate_gamma(&d, &g).is_valid());

        let small = datum(&[5], &[1], &[&[1]], &[&[1]], &[]);
        let g = RootParameterFamily::new(&small, [(Root::new(0, 1), small.field().one())]).unwrap();
        let r = validate_gamma(&small, &g);
        assert_eq!(
            r.violations,
            vec![Violation::Gamma { root: Root::new(0, 1), chi_power_trivial: true, h_trivial: true }]
        );
    }

    #[test]
    fn derived_examples() {
        let d = i1();
        let ds = derived(&d).unwrap();
        assert_eq!(ds.chi[&Root::new(0, 1)], *d.chi(0));
        assert_eq!(ds.g[&Root::new(0, 1)], *d.g(0));

        let d = i3();
        let ds = derived(&d).unwrap();
        let f = d.field();
        assert_eq!(d.q(0, 0), f.zeta_pow(5));
        assert_eq!(ds.b(Root::from_one_based(1, 2), Root::from_one_based(2, 3)), f.zeta_pow(-5));
        // independent re-evaluation of (1 - q^{-1})^5 (B^{2,3}_{1,2})^{10}
        let q = f.zeta_pow(5);
        let mut base = f.one();
        for _ in 0..5 {
            base = &base * &(f.one() - q.inv().unwrap());
        }
        let b = d.evaluate(d.chi(0), d.g(1));
        let mut bp = f.one();
        for _ in 0..10 {
            bp = &bp * &b;
        }
        assert_eq!(*ds.c_coeff(0, 1, 2), &base * &bp);
    }

    #[test]
    fn split_examples() {
        let d = i2();
        let s = split_datum(&d, 0).unwrap();
        assert_eq!(s.part.group().orders(), &[5]);
        assert_eq!(s.part.q(0, 0), d.field().root_of_unity(5, -1).unwrap());
        assert_eq!(s.cross.get(&(0, 0)), Some(&d.field().one()));
        assert_eq!(s.rest.rank(), 1);
        assert!(s.rest.lambda_entries().is_empty());

        let s = split_datum(&i1(), 0).unwrap();
        assert_eq!(s.rest.rank(), 0);
        assert!(split_datum(&i1(), 1).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(expected_dimension(&i1()), 125);
        assert_eq!(expected_dimension(&i2()), 625);
        assert_eq!(expected_dimension(&i3()), 78125);
    }

    #[test]
    fn lambda_lower_triangle() {
        let d = i2();
        // λ_21 = −χ_2(g_1)^{-1} λ_12 and λ_12 = −χ_2(g_1) λ_21
        let l21 = d.lambda(1, 0);
        assert_eq!(-(&d.q(0, 1) * &l21), d.lambda(0, 1));
    }
}
