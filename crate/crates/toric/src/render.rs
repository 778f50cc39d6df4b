//! Canonical text and JSON rendering of polynomials. Identical inputs render
//! byte-identically: terms in descending graded-lexicographic order, variables
//! printed `T1, ..., F1, ..., y`, coefficients as `p/q`.

use std::fmt;

use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::exactalg::{rat_to_string, MPoly, Monomial, Rat, VarId};

/// Canonical text form of a polynomial.
pub fn render_polynomial(p: &MPoly) -> String {
    render_with(p, |v| v.display_name())
}

/// Text form with face variables printed as Chern classes `c1, c2, ...`,
/// for polynomials produced in Chern-class variables.
pub fn render_chern_polynomial(p: &MPoly) -> String {
    render_with(p, |v| match v {
        VarId::Face(i) => format!("c{i}"),
        other => other.display_name(),
    })
}

fn render_with(p: &MPoly, var_name: impl Fn(VarId) -> String) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let terms: Vec<(&Monomial, &Rat)> = p.terms().collect();
    for (pos, (monomial, coeff)) in terms.iter().rev().enumerate() {
        let negative = coeff.is_negative();
        if pos == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let magnitude = coeff.abs();
        let vars = render_monomial(monomial, &var_name);
        if vars.is_empty() {
            out.push_str(&rat_to_string(&magnitude));
        } else if magnitude.is_one() {
            out.push_str(&vars);
        } else {
            out.push_str(&rat_to_string(&magnitude));
            out.push('*');
            out.push_str(&vars);
        }
    }
    out
}

fn render_monomial(m: &Monomial, var_name: &impl Fn(VarId) -> String) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .map(|&(v, e)| {
            if e == 1 {
                var_name(v)
            } else {
                format!("{}^{}", var_name(v), e)
            }
        })
        .collect();
    parts.join("*")
}

/// Structured form `{degree, terms: [{coeff, exponents}]}` for machine
/// diffing; terms in descending canonical order.
pub fn poly_to_json(p: &MPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .collect::<Vec<_>>()
        .iter()
        .rev()
        .map(|(m, c)| {
            let exponents: Vec<Value> = m
                .exponents()
                .iter()
                .map(|&(v, e)| json!([v.display_name(), e]))
                .collect();
            json!({ "coeff": rat_to_string(c), "exponents": exponents })
        })
        .collect();
    json!({ "degree": p.coh_degree(), "terms": terms })
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_polynomial(self))
    }
}
