//! The JSON interchange format for operators.
//!
//! ```json
//! {"format": "bcpair-operator", "version": 1, "params": ["alpha"],
//!  "terms": [{"order": 2, "coeff": [{"c": "1", "x": 0, "p": []}]},
//!            {"order": 0, "coeff": [{"c": "1", "x": 3, "p": []},
//!                                   {"c": "1", "x": 0, "p": [["alpha", 1]]}]}]}
//! ```
//!
//! Rationals are strings in lowest terms. Serialization is canonical: terms by
//! ascending order, monomials in the coefficient ring's monomial order, so
//! serializing a parsed canonical document gives back the same bytes.

use std::path::Path;

use bcpair_core::rat::{format_rat, parse_rat};
use bcpair_core::{CoefPoly, DiffOp, Monomial, ParamSet};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT: &str = "bcpair-operator";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDocument {
    pub format: String,
    pub version: u32,
    pub params: Vec<String>,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub order: usize,
    pub coeff: Vec<MonomialDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialDoc {
    pub c: String,
    pub x: u32,
    pub p: Vec<(String, u32)>,
}

impl OperatorDocument {
    pub fn from_op(op: &DiffOp) -> Self {
        let ps = op.params();
        let terms = op.coeffs().map(|(order, c)| TermDoc { order, coeff: monomials(ps, c) }).collect();
        OperatorDocument { format: FORMAT.into(), version: VERSION, params: ps.names().to_vec(), terms }
    }

    pub fn to_op(&self) -> Result<DiffOp, CliError> {
        let bad = |msg: String| CliError::Document(msg);
        if self.format != FORMAT {
            return Err(bad(format!("unknown format {:?}, expected {FORMAT:?}", self.format)));
        }
        if self.version != VERSION {
            return Err(bad(format!("unsupported version {}", self.version)));
        }
        let ps = ParamSet::new(self.params.iter().map(String::as_str))?;
        let mut op = DiffOp::zero(&ps);
        for term in &self.terms {
            let mut raw = Vec::with_capacity(term.coeff.len());
            for m in &term.coeff {
                let c = parse_rat(&m.c).ok_or_else(|| bad(format!("invalid rational {:?}", m.c)))?;
                let mut p = vec![0; ps.len()];
                for (name, e) in &m.p {
                    let i = ps.index_of(name).ok_or_else(|| bad(format!("undeclared parameter {name:?}")))?;
                    p[i] += e;
                }
                raw.push((Monomial { x: m.x, p }, c));
            }
            let c = CoefPoly::from_terms(&ps, raw)?;
            op = op.try_add(&DiffOp::term(term.order, c))?;
        }
        Ok(op)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Document(e.to_string()))
    }
}

fn monomials(ps: &ParamSet, c: &CoefPoly) -> Vec<MonomialDoc> {
    c.terms()
        .map(|(m, v)| MonomialDoc {
            c: format_rat(v),
            x: m.x,
            p: ps.names().iter().zip(&m.p).filter(|(_, e)| **e > 0).map(|(n, e)| (n.clone(), *e)).collect(),
        })
        .collect()
}

/// JSON value of an operator, for embedding in reports.
pub fn op_value(op: &DiffOp) -> serde_json::Value {
    serde_json::to_value(OperatorDocument::from_op(op)).expect("documents always serialize")
}

pub fn read_op(path: &Path) -> Result<DiffOp, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    OperatorDocument::from_json(&text).and_then(|d| d.to_op()).map_err(|e| match e {
        CliError::Document(msg) => CliError::Document(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_op(path: &Path, op: &DiffOp) -> Result<(), CliError> {
    let mut text = OperatorDocument::from_op(op).to_json();
    text.push('\n');
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}
