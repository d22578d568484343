use std::fmt::Write;
use std::str::FromStr;

use num::{One, Signed};
use serde::{Deserialize, Serialize};

use super::{FormulaPolynomial, TermKey};
use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Latex,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Format::Plain),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            other => Err(Error::invalid(format!(
                "unknown format {other:?} (expected plain, latex or json)"
            ))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonFormula {
    k: usize,
    terms: Vec<JsonTerm>,
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    coeff: String,
    key: Vec<Vec<usize>>,
}

/// Deterministic text form; equal polynomials render byte-identically.
pub fn render(f: &FormulaPolynomial, format: Format) -> String {
    match format {
        Format::Plain => render_plain(f),
        Format::Latex => render_latex(f),
        Format::Json => render_json(f),
    }
}

fn render_plain(f: &FormulaPolynomial) -> String {
    if f.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (key, coeff)) in f.terms().enumerate() {
        let magnitude = rational::format(&coeff.abs());
        match (i, coeff.is_negative()) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&magnitude);
        for factor in key.factors() {
            write!(out, "*S{factor}").unwrap();
        }
    }
    out
}

fn render_latex(f: &FormulaPolynomial) -> String {
    if f.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (key, coeff)) in f.terms().enumerate() {
        match (i, coeff.is_negative()) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        let magnitude = coeff.abs();
        if !magnitude.is_one() {
            if magnitude.denom().is_one() {
                write!(out, "{} ", magnitude.numer()).unwrap();
            } else {
                write!(out, "\\frac{{{}}}{{{}}} ", magnitude.numer(), magnitude.denom()).unwrap();
            }
        }
        // equal factors are adjacent in a canonical key
        let factors = key.factors();
        let mut j = 0;
        let mut first = true;
        while j < factors.len() {
            let run = factors[j..].iter().take_while(|f| **f == factors[j]).count();
            if !first {
                out.push(' ');
            }
            first = false;
            write!(out, "S_{{{}}}", factors[j]).unwrap();
            if run > 1 {
                write!(out, "^{{{run}}}").unwrap();
            }
            j += run;
        }
    }
    out
}

fn render_json(f: &FormulaPolynomial) -> String {
    let doc = JsonFormula {
        k: f.degree(),
        terms: f
            .terms()
            .map(|(key, coeff)| JsonTerm {
                coeff: rational::format(coeff),
                key: key.factors().iter().map(|p| p.parts().to_vec()).collect(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("formula serialization cannot fail")
}

/// Parses the json rendering back into a polynomial.
pub fn from_json(text: &str) -> Result<FormulaPolynomial> {
    let doc: JsonFormula = serde_json::from_str(text).map_err(|e| Error::from_json(&e))?;
    let mut out = FormulaPolynomial::zero(doc.k, format!("X_{}", doc.k));
    for term in doc.terms {
        let coeff: Rational = rational::parse(&term.coeff)?;
        if rational::format(&coeff) != term.coeff {
            return Err(Error::invalid(format!("coefficient {:?} is not in lowest terms", term.coeff)));
        }
        let factors = term
            .key
            .into_iter()
            .map(Partition::new)
            .collect::<Result<Vec<_>>>()?;
        let key = TermKey::new(factors);
        if out.terms.contains_key(&key) {
            return Err(Error::invalid("duplicate term key in formula json"));
        }
        if num::Zero::is_zero(&coeff) {
            return Err(Error::invalid("zero coefficient in formula json"));
        }
        out.terms.insert(key, coeff);
    }
    Ok(out)
}
