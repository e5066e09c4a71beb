//! JSON form of cochains: `{"coefficient": {"sym": n} | "f2", "values": {id: value}}`.
//! Cells missing from `values` carry the identity.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Cochain0, Cochain1};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficient {
    Sym(usize),
    F2,
}

impl Coefficient {
    pub fn degree(self) -> usize {
        match self {
            Coefficient::Sym(n) => n,
            Coefficient::F2 => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CochainFile {
    pub coefficient: Coefficient,
    pub values: BTreeMap<String, Value>,
}

impl CochainFile {
    fn from_values(coefficient: Coefficient, values: &[Permutation]) -> Self {
        let values = values
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_identity())
            .map(|(i, p)| {
                let v = match coefficient {
                    Coefficient::F2 => Value::from(1),
                    Coefficient::Sym(_) => Value::from(p.to_string()),
                };
                (i.to_string(), v)
            })
            .collect();
        CochainFile { coefficient, values }
    }

    pub fn from_cochain1(a: &Cochain1, coefficient: Coefficient) -> Self {
        Self::from_values(coefficient, a.values())
    }

    pub fn from_cochain0(b: &Cochain0, coefficient: Coefficient) -> Self {
        Self::from_values(coefficient, b.values())
    }

    fn values_for(&self, cells: usize) -> Result<Vec<Permutation>> {
        let n = self.coefficient.degree();
        let mut out = vec![Permutation::identity(n); cells];
        for (key, v) in &self.values {
            let loc = || format!("cochain value {key}");
            let i: usize = key.parse().map_err(|_| Error::schema(loc(), "key is not a cell id"))?;
            if i >= cells {
                return Err(Error::schema(loc(), format!("cell {i} does not exist")));
            }
            out[i] = match (self.coefficient, v) {
                (Coefficient::F2, Value::Number(b)) if b.as_u64() == Some(0) => Permutation::identity(2),
                (Coefficient::F2, Value::Number(b)) if b.as_u64() == Some(1) => Permutation::transposition(2, 0, 1),
                (Coefficient::F2, Value::Bool(b)) => {
                    if *b { Permutation::transposition(2, 0, 1) } else { Permutation::identity(2) }
                }
                (Coefficient::Sym(n), Value::String(s)) => {
                    Permutation::parse_with_degree(s, n).map_err(|e| Error::schema(loc(), e.to_string()))?
                }
                _ => return Err(Error::schema(loc(), format!("{v} does not match the coefficient"))),
            };
        }
        Ok(out)
    }

    pub fn to_cochain1(&self, complex: Arc<Complex>) -> Result<Cochain1> {
        let values = self.values_for(complex.n_edges())?;
        Cochain1::with_degree(complex, self.coefficient.degree(), values)
    }

    pub fn to_cochain0(&self, complex: Arc<Complex>) -> Result<Cochain0> {
        let values = self.values_for(complex.n_vertices())?;
        Cochain0::new(complex, values)
    }
}

pub fn save_cochain(a: &Cochain1, coefficient: Coefficient, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&CochainFile::from_cochain1(a, coefficient))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn load_cochain(complex: Arc<Complex>, path: impl AsRef<Path>) -> Result<Cochain1> {
    let file: CochainFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    file.to_cochain1(complex)
}
