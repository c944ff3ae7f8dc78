//! Text, JSON and LaTeX renderings of an I-function series.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{IFunCoefficient, IFunctionSeries};
use crate::arith::{parse_scalar, ArithError, FactoredRational, LinearForm, Monomial, RatExpr, Scalar, SparsePoly};

const MONOMIAL_ORDER: &str = "graded lex, y_1 < ... < y_r < z";
const MOVING_PART: &str = "weight k = 0 fixed; H^0 moving weights k = 1..m; H^1 moving weights k = m+1..-1";
const ROOT_TWIST: &str = "root pairs combined as (-1)^m (a + m z) / a";
const PRESENTATION: &str = "abelianized: Chern roots of the torus, before Weyl descent";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub monomial_order: String,
    pub moving_part: String,
    pub root_twist: String,
    pub presentation: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            monomial_order: MONOMIAL_ORDER.into(),
            moving_part: MOVING_PART.into(),
            root_twist: ROOT_TWIST.into(),
            presentation: PRESENTATION.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub form: LinearForm,
    pub exponent: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub beta_t: Vec<i64>,
    pub scalar: String,
    pub factors: Vec<FactorJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedJson {
    pub numerator: Vec<MonomialJson>,
    pub denominator: Vec<FactorJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientJson {
    pub beta: Vec<i64>,
    pub terms: Vec<TermJson>,
    pub reduced: ReducedJson,
    pub canonical: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub target: String,
    pub variables: Vec<String>,
    pub degree_bound: u32,
    pub constant_term: String,
    pub conventions: Conventions,
    pub coefficients: Vec<CoefficientJson>,
}

fn term_json<S: Scalar>(beta_t: &[i64], f: &FactoredRational<S>) -> TermJson {
    TermJson {
        beta_t: beta_t.to_vec(),
        scalar: f.scalar().canonical(),
        factors: f.factors().map(|(form, e)| FactorJson { form: form.clone(), exponent: e }).collect(),
    }
}

fn reduced_json<S: Scalar>(e: &RatExpr<S>) -> ReducedJson {
    ReducedJson {
        numerator: e
            .numerator()
            .terms()
            .rev()
            .map(|(m, c)| MonomialJson { exponents: m.exponents().to_vec(), coeff: c.canonical() })
            .collect(),
        denominator: e.denominator().iter().map(|(f, &e)| FactorJson { form: f.clone(), exponent: e as i32 }).collect(),
    }
}

impl<S: Scalar> From<&IFunctionSeries<S>> for SeriesJson {
    fn from(s: &IFunctionSeries<S>) -> Self {
        SeriesJson {
            target: s.target.clone(),
            variables: s.variables.clone(),
            degree_bound: s.degree_bound,
            constant_term: "1".into(),
            conventions: Conventions::default(),
            coefficients: s
                .coefficients
                .values()
                .map(|c| CoefficientJson {
                    beta: c.beta.clone(),
                    terms: c.terms.iter().map(|(b, f)| term_json(b, f)).collect(),
                    reduced: reduced_json(&c.expr),
                    canonical: c.expr.canonical(),
                })
                .collect(),
        }
    }
}

pub fn to_json<S: Scalar>(s: &IFunctionSeries<S>) -> String {
    serde_json::to_string_pretty(&SeriesJson::from(s)).expect("series serializes")
}

fn scalar<S: Scalar>(text: &str) -> Result<S, ArithError> {
    parse_scalar(text).ok_or_else(|| ArithError::Parse(format!("bad rational {text:?}")))
}

fn check_arity(form: &LinearForm, nvars: usize) -> Result<(), ArithError> {
    if form.nvars() == nvars {
        Ok(())
    } else {
        Err(ArithError::DimensionMismatch)
    }
}

/// Rebuilds a series from its JSON form.
pub fn parse_json<S: Scalar>(text: &str) -> Result<IFunctionSeries<S>, ArithError> {
    let js: SeriesJson = serde_json::from_str(text).map_err(|e| ArithError::Parse(e.to_string()))?;
    let nvars = js.variables.len();
    let mut coefficients = BTreeMap::new();
    for c in js.coefficients {
        let mut terms = Vec::new();
        for t in c.terms {
            for f in &t.factors {
                check_arity(&f.form, nvars)?;
            }
            let f = FactoredRational::from_parts(
                nvars,
                scalar(&t.scalar)?,
                t.factors.into_iter().map(|f| (f.form, f.exponent)),
            );
            terms.push((t.beta_t, f));
        }
        let mut mono = Vec::new();
        for m in c.reduced.numerator {
            if m.exponents.len() != nvars {
                return Err(ArithError::DimensionMismatch);
            }
            mono.push((Monomial::new(m.exponents), scalar(&m.coeff)?));
        }
        let mut den = BTreeMap::new();
        for f in c.reduced.denominator {
            check_arity(&f.form, nvars)?;
            let e = u32::try_from(f.exponent).map_err(|_| ArithError::Parse("negative exponent".into()))?;
            den.insert(f.form, e);
        }
        let expr = RatExpr::new(SparsePoly::from_terms(nvars, mono), den);
        coefficients.insert(c.beta.clone(), IFunCoefficient { beta: c.beta, terms, expr });
    }
    Ok(IFunctionSeries { target: js.target, variables: js.variables, degree_bound: js.degree_bound, coefficients })
}

fn degree_label(beta: &[i64]) -> String {
    let parts: Vec<String> = beta.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Line-oriented canonical text; byte-identical across runs.
pub fn to_text<S: Scalar>(s: &IFunctionSeries<S>) -> String {
    let mut out = String::new();
    writeln!(out, "target {}", s.target).unwrap();
    writeln!(out, "variables {}", s.variables.join(" ")).unwrap();
    writeln!(out, "degree-bound {}", s.degree_bound).unwrap();
    writeln!(out, "beta [0]").unwrap();
    writeln!(out, "  reduced ((1/1)[{}]) / (1)", vec!["0"; s.variables.len()].join(",")).unwrap();
    for c in s.coefficients.values() {
        writeln!(out, "beta {}", degree_label(&c.beta)).unwrap();
        for (b, f) in &c.terms {
            writeln!(out, "  term {} {}", degree_label(b), f.canonical()).unwrap();
        }
        writeln!(out, "  reduced {}", c.expr.canonical()).unwrap();
        writeln!(out, "  display {}", c.expr.render(&s.variables)).unwrap();
    }
    out
}

/// An `align*` block with one line per coefficient; `names` are the LaTeX
/// variable names.
pub fn to_latex<S: Scalar>(s: &IFunctionSeries<S>, names: &[String]) -> String {
    let mut out = String::from("\\begin{align*}\n");
    let mut lines = vec![format!("I_{{0}}(z) &= 1")];
    for c in s.coefficients.values() {
        let label: Vec<String> = c.beta.iter().map(i64::to_string).collect();
        let label = if label.len() == 1 { label[0].clone() } else { format!("({})", label.join(",")) };
        lines.push(format!("I_{{{label}}}(z) &= {}", c.expr.render_latex(names)));
    }
    out.push_str(&lines.join(" \\\\\n"));
    out.push_str("\n\\end{align*}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::git::Target;
    use crate::ifunction::assemble_series;
    use crate::Rat;

    #[test]
    fn json_round_trip() {
        for t in [Target::projective(2).unwrap(), Target::grassmannian(2, 4).unwrap()] {
            let s = assemble_series::<Rat>(&t, 2, None).unwrap();
            let back: IFunctionSeries<Rat> = parse_json(&to_json(&s)).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn json_rejects_garbage() {
        assert!(parse_json::<Rat>("{").is_err());
        assert!(parse_json::<Rat>(r#"{"target":"x"}"#).is_err());
    }

    #[test]
    fn text_and_latex() {
        let t = Target::projective(1).unwrap();
        let s = assemble_series::<Rat>(&t, 1, None).unwrap();
        let text = to_text(&s);
        assert!(text.contains("beta [1]\n  term [1] 1/1 * [1,1]^-2\n  reduced ((1/1)[0,0]) / ([1,1]^2)"), "{text}");
        let latex = to_latex(&s, &t.latex_variable_names());
        assert!(latex.starts_with("\\begin{align*}"));
        assert!(latex.contains("I_{1}(z) &= "));
    }
}
