use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Element, Family, FiniteGroup, ModMatrix};
use crate::error::{Error, Result};

/// Group description as it appears in config files, e.g.
/// `{"family":"cyclic","m":6}` or `{"family":"sl","n":2,"modulus":5}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GroupDescriptor {
    Cyclic { m: u64 },
    Dihedral { m: u64 },
    Sl { n: usize, modulus: u64 },
    Product { factors: Vec<GroupDescriptor> },
    Permutation { degree: usize, generators: Vec<Vec<u32>> },
    Matrix { n: usize, modulus: u64, generators: Vec<Vec<i64>> },
}

impl GroupDescriptor {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupDescriptor::Cyclic { m } => FiniteGroup::cyclic(*m),
            GroupDescriptor::Dihedral { m } => FiniteGroup::dihedral(*m),
            GroupDescriptor::Sl { n, modulus } => FiniteGroup::special_linear(*n, *modulus),
            GroupDescriptor::Product { factors } => {
                FiniteGroup::product(factors.iter().map(|f| f.build()).collect::<Result<_>>()?)
            }
            GroupDescriptor::Permutation { degree, generators } => {
                let gens = generators
                    .iter()
                    .map(|p| parse_perm(*degree, p))
                    .collect::<Result<Vec<_>>>()?;
                FiniteGroup::enumerate_by_bfs(&gens)
            }
            GroupDescriptor::Matrix { n, modulus, generators } => {
                let gens = generators
                    .iter()
                    .map(|g| ModMatrix::from_signed(*n, *modulus, g).map(Element::Matrix))
                    .collect::<Result<Vec<_>>>()?;
                FiniteGroup::enumerate_by_bfs(&gens)
            }
        }
    }
}

fn parse_perm(degree: usize, p: &[u32]) -> Result<Element> {
    let mut seen = vec![false; degree];
    if p.len() != degree {
        return Err(Error::Domain(format!("permutation {p:?} is not of degree {degree}")));
    }
    for &i in p {
        if i as usize >= degree || std::mem::replace(&mut seen[i as usize], true) {
            return Err(Error::Domain(format!("{p:?} is not a permutation of 0..{degree}")));
        }
    }
    Ok(Element::Perm(p.to_vec()))
}

fn as_i64(v: &Value) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::Domain(format!("expected an integer, got {v}")))
}

fn as_array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Domain(format!("expected an array, got {v}")))
}

impl FiniteGroup {
    /// Parse an element literal against this group: a residue, a
    /// `[rotation, flip]` pair, a permutation array, a row-major matrix
    /// (flat or nested), or an array of component literals for products.
    pub fn parse_element(&self, v: &Value) -> Result<Element> {
        let e = match &self.family {
            Family::Cyclic { m } => Element::Cyclic { m: *m, r: (as_i64(v)?).rem_euclid(*m as i64) as u64 },
            Family::Dihedral { m } => {
                let a = as_array(v)?;
                if a.len() != 2 {
                    return Err(Error::Domain(format!("dihedral literal must be [rot, flip], got {v}")));
                }
                let rot = as_i64(&a[0])?.rem_euclid(*m as i64) as u64;
                let flip = match &a[1] {
                    Value::Bool(b) => *b,
                    other => as_i64(other)? != 0,
                };
                Element::Dihedral { m: *m, rot, flip }
            }
            Family::Product(factors) => {
                let a = as_array(v)?;
                if a.len() != factors.len() {
                    return Err(Error::Domain(format!(
                        "product literal needs {} components, got {v}",
                        factors.len()
                    )));
                }
                Element::Tuple(
                    factors.iter().zip(a).map(|(f, x)| f.parse_element(x)).collect::<Result<_>>()?,
                )
            }
            Family::Permutation { degree, .. } => {
                let p = as_array(v)?
                    .iter()
                    .map(|x| as_i64(x).map(|i| i as u32))
                    .collect::<Result<Vec<_>>>()?;
                parse_perm(*degree, &p)?
            }
            Family::Matrix { n, modulus, .. } => {
                let mut flat = Vec::new();
                for x in as_array(v)? {
                    match x {
                        Value::Array(row) => {
                            for y in row {
                                flat.push(as_i64(y)?);
                            }
                        }
                        other => flat.push(as_i64(other)?),
                    }
                }
                Element::Matrix(ModMatrix::from_signed(*n, *modulus, &flat)?)
            }
            Family::Generated { .. } => {
                // Generated subgroups accept the literal of their ambient
                // element kind; match by printed literal.
                return self
                    .elements()
                    .iter()
                    .find(|e| &e.to_literal() == v)
                    .cloned()
                    .ok_or_else(|| Error::Domain(format!("{v} is not an element of {}", self.describe())));
            }
        };
        self.require_index(&e)?;
        Ok(e)
    }
}
