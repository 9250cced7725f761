//! TOML datum files.
//!
//! ```toml
//! [group]
//! orders = [5, 5]
//!
//! [cartan]
//! components = [1, 1]
//!
//! [[vertices]]
//! g = [1, 0]
//! chi = [4, 4]
//!
//! [[vertices]]
//! g = [0, 1]
//! chi = [1, 1]
//!
//! [[lambda]]
//! i = 1
//! j = 2
//! value = 1
//! ```
//!
//! `gamma` entries carry a 1-based `component` and local indices
//! `1 <= i < j <= n_k + 1`. Scalar values are integers or strings in the
//! expression syntax (`"3/5"`, `"zeta(5)^2"`, `"1 + zeta(25)^5"`).

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CartanMatrix, DatumError, LinkingDatum, Root, RootParameterFamily};
use crate::group::GroupSpec;
use crate::scalars::{lcm, CycField, CycScalar};
use crate::syntax::{eval_scalar, parse_expr};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    pub group: GroupSection,
    pub cartan: CartanSection,
    #[serde(default)]
    pub vertices: Vec<VertexEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambda: Vec<LambdaEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gamma: Vec<GammaEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    pub orders: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CartanSection {
    pub components: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub g: Vec<i64>,
    pub chi: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaEntry {
    pub i: usize,
    pub j: usize,
    pub value: ScalarValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaEntry {
    pub component: usize,
    pub i: usize,
    pub j: usize,
    pub value: ScalarValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarValue {
    Int(i64),
    Text(String),
}

impl ScalarValue {
    fn expr_text(&self) -> String {
        match self {
            ScalarValue::Int(n) => n.to_string(),
            ScalarValue::Text(s) => s.clone(),
        }
    }

    fn canonical(v: &CycScalar) -> ScalarValue {
        match v.as_rational() {
            Some(r) if r.is_integer() => match r.to_string().parse::<i64>() {
                Ok(n) => ScalarValue::Int(n),
                Err(_) => ScalarValue::Text(r.to_string()),
            },
            _ => ScalarValue::Text(v.to_string()),
        }
    }
}

/// A datum together with its root-vector parameters.
#[derive(Debug, Clone)]
pub struct Instance {
    pub datum: LinkingDatum,
    pub gamma: RootParameterFamily,
}

fn field_error(what: String, e: impl std::fmt::Display) -> DatumError {
    DatumError::Parse(format!("{what}: {e}"))
}

impl DatumFile {
    pub fn from_toml(text: &str) -> Result<Self, DatumError> {
        toml::from_str(text).map_err(|e| DatumError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("datum file serializes")
    }

    pub fn into_instance(self) -> Result<Instance, DatumError> {
        let group = GroupSpec::new(self.group.orders.clone())?;
        let cartan = CartanMatrix::new(self.cartan.components.clone())?;
        if self.vertices.len() != cartan.rank() {
            return Err(DatumError::Shape(format!(
                "cartan.components lists {} vertices but {} are given",
                cartan.rank(),
                self.vertices.len()
            )));
        }

        let mut exprs = Vec::new();
        for (n, l) in self.lambda.iter().enumerate() {
            let e = parse_expr(&l.value.expr_text()).map_err(|e| field_error(format!("lambda[{n}].value"), e))?;
            exprs.push(e);
        }
        for (n, g) in self.gamma.iter().enumerate() {
            let e = parse_expr(&g.value.expr_text()).map_err(|e| field_error(format!("gamma[{n}].value"), e))?;
            exprs.push(e);
        }
        let conductor = exprs
            .iter()
            .flat_map(|e| e.zeta_orders())
            .fold(group.exponent(), |a, k| lcm(a, k as u64));
        let conductor = u32::try_from(conductor)
            .map_err(|_| DatumError::Shape(format!("conductor {conductor} too large")))?;
        let field = CycField::get(conductor);
        let mut values = exprs.iter().map(|e| eval_scalar(e, field));

        let mut g = Vec::new();
        let mut chi = Vec::new();
        for v in &self.vertices {
            g.push(group.element(&v.g)?);
            chi.push(group.character(&v.chi)?);
        }
        let theta = cartan.rank();
        let mut lambda = BTreeMap::new();
        for (n, l) in self.lambda.iter().enumerate() {
            let v = values.next().expect("one value per entry").map_err(|e| field_error(format!("lambda[{n}].value"), e))?;
            if l.i == 0 || l.i >= l.j || l.j > theta {
                return Err(DatumError::Shape(format!(
                    "lambda[{n}]: indices ({}, {}) must satisfy 1 <= i < j <= {theta}",
                    l.i, l.j
                )));
            }
            if lambda.insert((l.i - 1, l.j - 1), v).is_some() {
                return Err(DatumError::Shape(format!("lambda[{n}]: duplicate entry ({}, {})", l.i, l.j)));
            }
        }
        let datum = LinkingDatum::new(group, cartan, g, chi, lambda, field)?;

        let mut gamma = RootParameterFamily::zero(field);
        let mut seen = std::collections::BTreeSet::new();
        for (n, e) in self.gamma.iter().enumerate() {
            let v = values.next().expect("one value per entry").map_err(|err| field_error(format!("gamma[{n}].value"), err))?;
            let cartan = datum.cartan();
            if e.component == 0 || e.component > cartan.num_components() {
                return Err(DatumError::Shape(format!("gamma[{n}]: no component {}", e.component)));
            }
            let k = e.component - 1;
            let nk = cartan.sizes()[k];
            if e.i == 0 || e.i >= e.j || e.j > nk + 1 {
                return Err(DatumError::Shape(format!(
                    "gamma[{n}]: indices ({}, {}) must satisfy 1 <= i < j <= {}",
                    e.i,
                    e.j,
                    nk + 1
                )));
            }
            let s = cartan.offset(k);
            let root = Root::new(s + e.i - 1, s + e.j - 1);
            if !seen.insert(root) {
                return Err(DatumError::Shape(format!("gamma[{n}]: duplicate entry")));
            }
            gamma.set(root, v);
        }
        Ok(Instance { datum, gamma })
    }
}

impl Instance {
    pub fn to_file(&self) -> DatumFile {
        let d = &self.datum;
        let cartan = d.cartan();
        DatumFile {
            group: GroupSection { orders: d.group().orders().to_vec() },
            cartan: CartanSection { components: cartan.sizes().to_vec() },
            vertices: (0..d.rank())
                .map(|i| VertexEntry {
                    g: d.g(i).exponents().iter().map(|&e| e as i64).collect(),
                    chi: d.chi(i).exponents().iter().map(|&e| e as i64).collect(),
                })
                .collect(),
            lambda: d
                .lambda_entries()
                .iter()
                .map(|(&(i, j), v)| LambdaEntry { i: i + 1, j: j + 1, value: ScalarValue::canonical(v) })
                .collect(),
            gamma: self
                .gamma
                .entries()
                .iter()
                .map(|(r, v)| {
                    let k = cartan.component_of(r.start);
                    let s = cartan.offset(k);
                    GammaEntry {
                        component: k + 1,
                        i: r.start - s + 1,
                        j: r.end - s + 1,
                        value: ScalarValue::canonical(v),
                    }
                })
                .collect(),
        }
    }

    /// Canonical TOML text; parsing it back yields the same instance and the
    /// same text.
    pub fn to_toml(&self) -> String {
        self.to_file().to_toml()
    }
}

pub fn parse_datum(text: &str) -> Result<Instance, DatumError> {
    DatumFile::from_toml(text)?.into_instance()
}

pub fn load_datum(path: impl AsRef<Path>) -> Result<Instance, DatumError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| DatumError::Parse(format!("{}: {e}", path.display())))?;
    parse_datum(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const I2: &str = r#"
[group]
orders = [5, 5]

[cartan]
components = [1, 1]

[[vertices]]
g = [1, 0]
chi = [-1, -1]

[[vertices]]
g = [0, 1]
chi = [1, 1]

[[lambda]]
i = 1
j = 2
value = 1
"#;

    #[test]
    fn parses_and_roundtrips() {
        let inst = parse_datum(I2).unwrap();
        assert_eq!(inst.datum.rank(), 2);
        assert_eq!(inst.datum.chi(0).exponents(), &[4, 4]);
        let text = inst.to_toml();
        let again = parse_datum(&text).unwrap();
        assert_eq!(again.to_toml(), text);
        assert_eq!(again.datum.lambda(0, 1), inst.datum.lambda(0, 1));
    }

    #[test]
    fn roundtrip_with_roots_and_rationals() {
        let text = r#"
[group]
orders = [25, 25]

[cartan]
components = [2]

[[vertices]]
g = [1, 0]
chi = [5, 0]

[[vertices]]
g = [0, 1]
chi = [-5, 5]

[[gamma]]
component = 1
i = 1
j = 3
value = "3/7*zeta(5)^2"

[[gamma]]
component = 1
i = 1
j = 2
value = "1 + zeta(25)^5"
"#;
        let inst = parse_datum(text).unwrap();
        assert_eq!(inst.datum.field().conductor(), 25);
        let canon = inst.to_toml();
        let again = parse_datum(&canon).unwrap();
        assert_eq!(again.gamma, inst.gamma);
        assert_eq!(again.to_toml(), canon);
    }

    #[test]
    fn extra_zeta_orders_raise_conductor() {
        let text = I2.replace("value = 1", "value = \"zeta(3)\"");
        let inst = parse_datum(&text).unwrap();
        assert_eq!(inst.datum.field().conductor(), 15);
        let canon = inst.to_toml();
        assert_eq!(parse_datum(&canon).unwrap().to_toml(), canon);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_datum(""), Err(DatumError::Parse(_))));
        let e = parse_datum("[group\norders = [5]").unwrap_err().to_string();
        assert!(e.contains("line 1"), "{e}");
        let bad = I2.replace("value = 1", "value = \"1 +\"");
        assert!(parse_datum(&bad).unwrap_err().to_string().contains("lambda[0].value"));
        let bad = I2.replace("j = 2", "j = 3");
        assert!(matches!(parse_datum(&bad), Err(DatumError::Shape(_))));
    }
}
