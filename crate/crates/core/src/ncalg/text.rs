//! Text form of polynomials using vertex names: `1/2*q[a,1|b,2]*q[b,1|a,1] + -1`.

use thiserror::Error;

use super::{GeneratorId, NCPolynomial, Word};
use crate::multigraph::Slot;
use crate::scalar::Coefficient;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TextError {
    #[error("malformed generator `{0}`")]
    Generator(String),
    #[error("unknown vertex `{0}`")]
    Vertex(String),
    #[error("malformed coefficient `{0}`")]
    Coefficient(String),
}

pub fn format_generator(g: GeneratorId, names: &[String]) -> String {
    format!(
        "q[{},{}|{},{}]",
        names[g.row.v()],
        g.row.label,
        names[g.col.v()],
        g.col.label
    )
}

pub fn format_word(w: &Word, names: &[String]) -> String {
    if w.is_unit() {
        return "1".to_string();
    }
    w.0.iter()
        .map(|&g| format_generator(g, names))
        .collect::<Vec<_>>()
        .join("*")
}

pub fn format_poly<C: Coefficient>(p: &NCPolynomial<C>, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    p.terms()
        .map(|(w, c)| {
            let mut s = c.to_string();
            for &g in &w.0 {
                s.push('*');
                s.push_str(&format_generator(g, names));
            }
            s
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn parse_slot(v: &str, l: &str, names: &[String], whole: &str) -> Result<Slot, TextError> {
    let idx = names
        .iter()
        .position(|n| n == v.trim())
        .ok_or_else(|| TextError::Vertex(v.trim().to_string()))?;
    let label: u32 = l
        .trim()
        .parse()
        .map_err(|_| TextError::Generator(whole.to_string()))?;
    if label == 0 {
        return Err(TextError::Generator(whole.to_string()));
    }
    Ok(Slot::new(idx, label))
}

pub fn parse_generator(s: &str, names: &[String]) -> Result<GeneratorId, TextError> {
    let t = s.trim();
    let inner = t
        .strip_prefix("q[")
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| TextError::Generator(t.to_string()))?;
    let (row, col) = inner
        .split_once('|')
        .ok_or_else(|| TextError::Generator(t.to_string()))?;
    let (rv, rl) = row.split_once(',').ok_or_else(|| TextError::Generator(t.to_string()))?;
    let (cv, cl) = col.split_once(',').ok_or_else(|| TextError::Generator(t.to_string()))?;
    Ok(GeneratorId::new(
        parse_slot(rv, rl, names, t)?,
        parse_slot(cv, cl, names, t)?,
    ))
}

pub fn parse_poly<C: Coefficient>(s: &str, names: &[String]) -> Result<NCPolynomial<C>, TextError> {
    let t = s.trim();
    let mut p = NCPolynomial::zero();
    if t == "0" {
        return Ok(p);
    }
    for term in t.split(" + ") {
        let mut coef = C::one();
        let mut gens = Vec::new();
        for (n, factor) in term.trim().split('*').enumerate() {
            let f = factor.trim();
            if f.starts_with("q[") {
                gens.push(parse_generator(f, names)?);
            } else if n == 0 {
                coef = f.parse().map_err(|_| TextError::Coefficient(f.to_string()))?;
            } else {
                return Err(TextError::Generator(f.to_string()));
            }
        }
        p.add_term(Word(gens), coef);
    }
    Ok(p)
}
