use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::{TruncatedSeries1, TruncatedSeries2};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub a: u32,
    pub b: u32,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Series2Json {
    pub order: u32,
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniTermJson {
    pub exponent: u32,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Series1Json {
    pub order: u32,
    pub var: String,
    pub terms: Vec<UniTermJson>,
}

fn parse_parts(num: &str, den: &str) -> Result<Rational> {
    let n: Integer = num.parse().map_err(|e| Error::Parse(format!("numerator {num:?}: {e}")))?;
    let d: Integer = den.parse().map_err(|e| Error::Parse(format!("denominator {den:?}: {e}")))?;
    if d <= 0 {
        return Err(Error::Parse(format!("denominator must be positive, got {den}")));
    }
    Ok(Rational::from((n, d)))
}

impl From<&TruncatedSeries2> for Series2Json {
    fn from(s: &TruncatedSeries2) -> Self {
        Series2Json {
            order: s.order(),
            vars: s.vars().iter().map(|v| v.to_string()).collect(),
            terms: s
                .terms()
                .map(|(&(a, b), c)| TermJson { a, b, num: c.numer().to_string(), den: c.denom().to_string() })
                .collect(),
        }
    }
}

impl TryFrom<&Series2Json> for TruncatedSeries2 {
    type Error = Error;

    fn try_from(j: &Series2Json) -> Result<Self> {
        if j.vars.len() != 2 {
            return Err(Error::Parse(format!("expected two variables, got {}", j.vars.len())));
        }
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.a + t.b > j.order {
                return Err(Error::Order(format!("term ({}, {}) exceeds order {}", t.a, t.b, j.order)));
            }
            terms.push(((t.a, t.b), parse_parts(&t.num, &t.den)?));
        }
        Ok(TruncatedSeries2::from_terms(j.order, [&j.vars[0], &j.vars[1]], terms))
    }
}

impl From<&TruncatedSeries1> for Series1Json {
    fn from(s: &TruncatedSeries1) -> Self {
        Series1Json {
            order: s.order(),
            var: s.var().to_string(),
            terms: s
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(k, c)| UniTermJson {
                    exponent: k as u32,
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&Series1Json> for TruncatedSeries1 {
    type Error = Error;

    fn try_from(j: &Series1Json) -> Result<Self> {
        let mut c = vec![Rational::new(); j.order as usize + 1];
        for t in &j.terms {
            if t.exponent > j.order {
                return Err(Error::Order(format!("exponent {} exceeds order {}", t.exponent, j.order)));
            }
            c[t.exponent as usize] = parse_parts(&t.num, &t.den)?;
        }
        Ok(TruncatedSeries1::from_coeffs(j.order, &j.var, c))
    }
}

impl TruncatedSeries2 {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&Series2Json::from(self)).expect("series serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: Series2Json = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        TruncatedSeries2::try_from(&j)
    }
}

impl TruncatedSeries1 {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&Series1Json::from(self)).expect("series serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: Series1Json = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        TruncatedSeries1::try_from(&j)
    }
}
