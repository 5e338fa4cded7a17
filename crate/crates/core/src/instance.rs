//! JSON instance files.
//!
//! ```json
//! {
//!   "variables": ["X1", "X2"],
//!   "polynomials": [
//!     {"name": "h", "terms": [{"coeff": "1", "exps": [1, 1]}, {"coeff": "-1", "exps": [0, 0]}]}
//!   ],
//!   "sign_condition": {"h": 0}
//! }
//! ```
//!
//! Coefficients are decimal strings so that any size survives a JSON parser.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::SignCondition;
use crate::poly::{var_list, IntPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: String,
    pub exps: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedPoly {
    pub name: String,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub variables: Vec<String>,
    pub polynomials: Vec<NamedPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_condition: Option<BTreeMap<String, i8>>,
}

/// `(k, d, tau, s)` as measured on a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Measured {
    pub k: u64,
    pub d: u64,
    pub tau: u64,
    pub s: u64,
}

impl InstanceFile {
    /// Parses and validates.
    pub fn from_json(text: &str) -> Result<Self> {
        let f: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        f.validate()?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }

    /// Builds a file from polynomials over a common variable list; names
    /// default to `P1, P2, ...`.
    pub fn from_polys(polys: &[IntPoly]) -> Result<Self> {
        let vars = polys
            .first()
            .ok_or_else(|| Error::Precondition("empty family".into()))?
            .vars()
            .clone();
        let polynomials = polys
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let p = p.with_vars(vars.clone())?;
                let terms = p
                    .terms()
                    .map(|(e, c)| Term {
                        coeff: c.to_string(),
                        exps: e.to_vec(),
                    })
                    .collect();
                Ok(NamedPoly {
                    name: format!("P{}", i + 1),
                    terms,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(InstanceFile {
            variables: vars.to_vec(),
            polynomials,
            sign_condition: None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.variables.is_empty() {
            return Err(Error::Parse("no variables".into()));
        }
        for (i, v) in self.variables.iter().enumerate() {
            if self.variables[..i].contains(v) {
                return Err(Error::Parse(format!("duplicate variable {v}")));
            }
        }
        if self.polynomials.is_empty() {
            return Err(Error::Parse("no polynomials".into()));
        }
        for (i, p) in self.polynomials.iter().enumerate() {
            if self.polynomials[..i].iter().any(|q| q.name == p.name) {
                return Err(Error::Parse(format!("duplicate polynomial name {}", p.name)));
            }
            for t in &p.terms {
                if t.exps.len() != self.variables.len() {
                    return Err(Error::ExponentLength {
                        expected: self.variables.len(),
                        got: t.exps.len(),
                    });
                }
                parse_coeff(&t.coeff)?;
            }
        }
        if let Some(sc) = &self.sign_condition {
            for (name, s) in sc {
                if !self.polynomials.iter().any(|p| &p.name == name) {
                    return Err(Error::Parse(format!("sign condition names unknown polynomial {name}")));
                }
                if !(-1..=1).contains(s) {
                    return Err(Error::Parse(format!("sign {s} for {name} is not in {{-1, 0, 1}}")));
                }
            }
        }
        Ok(())
    }

    pub fn polys(&self) -> Result<Vec<IntPoly>> {
        let vars = var_list(&self.variables);
        self.polynomials
            .iter()
            .map(|p| {
                let terms = p
                    .terms
                    .iter()
                    .map(|t| Ok((t.exps.clone(), parse_coeff(&t.coeff)?)))
                    .collect::<Result<Vec<_>>>()?;
                IntPoly::from_terms(vars.clone(), terms)
            })
            .collect()
    }

    /// Number of variables, maximum total degree, maximum coefficient
    /// bitsize and number of polynomials.
    pub fn measured(&self) -> Result<Measured> {
        let polys = self.polys()?;
        Ok(Measured {
            k: self.variables.len() as u64,
            d: polys.iter().map(|p| p.total_degree() as u64).max().unwrap_or(0),
            tau: polys.iter().map(IntPoly::bitsize).max().unwrap_or(0),
            s: polys.len() as u64,
        })
    }

    /// The sign condition by polynomial index. Polynomials the file leaves
    /// out default to 0.
    pub fn sign_condition(&self) -> Option<SignCondition> {
        let sc = self.sign_condition.as_ref()?;
        let signs: Vec<i8> = self
            .polynomials
            .iter()
            .map(|p| sc.get(&p.name).copied().unwrap_or(0))
            .collect();
        SignCondition::new(&signs).ok()
    }
}

fn parse_coeff(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::Parse(format!("coefficient {s:?} is not an integer")))
}
