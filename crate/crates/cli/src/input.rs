//! TOML target and quasimap description files.
//!
//! Every failure is reported as a [`Diagnostic`] anchored at a line and
//! column of the source file.

use std::fmt;
use std::ops::Range;

use qmap_core::arith::parse_scalar;
use qmap_core::git::{EffectivityMode, Target, TargetSpec};
use qmap_core::quasimap::{PolyQuasimap, QuasimapError, QuasimapTarget};
use qmap_core::{Form, Quasimap, Rat};
use serde::Deserialize;
use toml::{Spanned, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}", self.path, self.line, self.column, self.message)
    }
}

/// Source text plus its name, for turning byte offsets into positions.
struct Source<'a> {
    path: &'a str,
    text: &'a str,
}

impl Source<'_> {
    fn at(&self, offset: usize, message: impl Into<String>) -> Diagnostic {
        let offset = offset.min(self.text.len());
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Diagnostic { path: self.path.to_string(), line, column, message: message.into() }
    }

    fn span<T>(&self, s: &Spanned<T>, message: impl Into<String>) -> Diagnostic {
        self.at(s.span().start, message)
    }

    fn parse<T: for<'de> Deserialize<'de>>(&self) -> Result<T, Diagnostic> {
        toml::from_str(self.text).map_err(|e| {
            let start = e.span().map_or(0, |r: Range<usize>| r.start);
            self.at(start, e.message().trim().to_string())
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    name: Option<Spanned<String>>,
    preset: Spanned<String>,
    n: Option<Spanned<i64>>,
    k: Option<Spanned<i64>>,
    weight_matrix: Option<Spanned<Vec<Vec<i64>>>>,
    theta: Option<Spanned<Vec<i64>>>,
    weights: Option<Spanned<Vec<Vec<i64>>>>,
    roots: Option<Spanned<Vec<Vec<i64>>>>,
    weyl_gens: Option<Spanned<Vec<Vec<Vec<i64>>>>>,
    tau: Option<Spanned<Vec<Vec<i64>>>>,
    effectivity_mode: Option<Spanned<String>>,
    nonabelian_free: Option<Spanned<bool>>,
    bound: Option<Spanned<i64>>,
}

/// A validated target together with the file's default enumeration bound.
#[derive(Clone, Debug)]
pub struct TargetFile {
    pub target: Target,
    pub bound: Option<i64>,
}

fn require<'a, T>(
    src: &Source,
    field: &'a Option<Spanned<T>>,
    key: &str,
    preset: &Spanned<String>,
) -> Result<&'a Spanned<T>, Diagnostic> {
    field.as_ref().ok_or_else(|| src.span(preset, format!("preset `{}` requires key `{key}`", preset.get_ref())))
}

fn positive(src: &Source, v: &Spanned<i64>, key: &str) -> Result<usize, Diagnostic> {
    usize::try_from(*v.get_ref())
        .ok()
        .filter(|&x| x > 0)
        .ok_or_else(|| src.span(v, format!("`{key}` must be a positive integer")))
}

pub fn parse_target(path: &str, text: &str) -> Result<TargetFile, Diagnostic> {
    let src = Source { path, text };
    let raw: RawTarget = src.parse()?;
    let preset = &raw.preset;
    let allowed: &[&str] = match preset.get_ref().as_str() {
        "projective" => &["n"],
        "grassmannian" => &["k", "n"],
        "toric" => &["weight_matrix", "theta"],
        "custom" => &["weights", "theta", "roots", "weyl_gens", "tau", "effectivity_mode", "nonabelian_free"],
        other => {
            return Err(src
                .span(preset, format!("unknown preset `{other}`; expected projective, grassmannian, toric or custom")))
        }
    };
    let present: [(&str, Option<usize>); 11] = [
        ("n", raw.n.as_ref().map(|s| s.span().start)),
        ("k", raw.k.as_ref().map(|s| s.span().start)),
        ("weight_matrix", raw.weight_matrix.as_ref().map(|s| s.span().start)),
        ("theta", raw.theta.as_ref().map(|s| s.span().start)),
        ("weights", raw.weights.as_ref().map(|s| s.span().start)),
        ("roots", raw.roots.as_ref().map(|s| s.span().start)),
        ("weyl_gens", raw.weyl_gens.as_ref().map(|s| s.span().start)),
        ("tau", raw.tau.as_ref().map(|s| s.span().start)),
        ("effectivity_mode", raw.effectivity_mode.as_ref().map(|s| s.span().start)),
        ("nonabelian_free", raw.nonabelian_free.as_ref().map(|s| s.span().start)),
        ("bound", None),
    ];
    for (key, at) in present {
        if let Some(at) = at {
            if !allowed.contains(&key) {
                return Err(src.at(at, format!("key `{key}` is not used by preset `{}`", preset.get_ref())));
            }
        }
    }
    let bound = match &raw.bound {
        Some(b) if *b.get_ref() < 0 => return Err(src.span(b, "`bound` must be nonnegative")),
        b => b.as_ref().map(|b| *b.get_ref()),
    };
    let invalid = |e: qmap_core::git::GitError| src.span(preset, e.to_string());
    let target = match preset.get_ref().as_str() {
        "projective" => {
            let n = positive(&src, require(&src, &raw.n, "n", preset)?, "n")?;
            Target::projective(n).map_err(invalid)?
        }
        "grassmannian" => {
            let k = positive(&src, require(&src, &raw.k, "k", preset)?, "k")?;
            let n_field = require(&src, &raw.n, "n", preset)?;
            let n = positive(&src, n_field, "n")?;
            if k >= n {
                return Err(src.span(n_field, format!("Gr({k},{n}) needs k < n")));
            }
            Target::grassmannian(k, n).map_err(invalid)?
        }
        "toric" => {
            let m = require(&src, &raw.weight_matrix, "weight_matrix", preset)?;
            let theta = require(&src, &raw.theta, "theta", preset)?;
            let name = raw.name.as_ref().map_or("toric", |s| s.get_ref().as_str());
            Target::toric(name, m.get_ref(), theta.get_ref()).map_err(|e| src.span(m, e.to_string()))?
        }
        _ => {
            let weights = require(&src, &raw.weights, "weights", preset)?;
            let theta = require(&src, &raw.theta, "theta", preset)?;
            let tau = require(&src, &raw.tau, "tau", preset)?;
            let mode = require(&src, &raw.effectivity_mode, "effectivity_mode", preset)?;
            let effectivity = match mode.get_ref().as_str() {
                "toric" => EffectivityMode::Toric,
                "nonnegative_gl" => EffectivityMode::NonnegativeGl,
                "custom_bounded" => EffectivityMode::CustomBounded,
                other => {
                    return Err(src.span(
                        mode,
                        format!("unknown effectivity_mode `{other}`; expected toric, nonnegative_gl or custom_bounded"),
                    ))
                }
            };
            let spec = TargetSpec {
                name: raw.name.as_ref().map_or("custom", |s| s.get_ref().as_str()).to_string(),
                rank: theta.get_ref().len(),
                weights: weights.get_ref().clone(),
                theta: theta.get_ref().clone(),
                roots: raw.roots.as_ref().map(|r| r.get_ref().clone()).unwrap_or_default(),
                weyl_gens: raw.weyl_gens.as_ref().map(|g| g.get_ref().clone()).unwrap_or_default(),
                tau: tau.get_ref().clone(),
                effectivity,
                nonabelian_free: raw.nonabelian_free.as_ref().is_some_and(|b| *b.get_ref()),
            };
            Target::custom(spec).map_err(invalid)?
        }
    };
    Ok(TargetFile { target, bound })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuasimap {
    target: Spanned<String>,
    n: Spanned<i64>,
    k: Option<Spanned<i64>>,
    degree: Option<Spanned<u32>>,
    row_degrees: Option<Spanned<Vec<u32>>>,
    entries: Spanned<Vec<Spanned<Value>>>,
    #[serde(default)]
    marks: Vec<Spanned<String>>,
}

/// Either a validated quasimap or the reason it is not one.
#[derive(Debug)]
pub enum QuasimapInput {
    Valid(Quasimap),
    /// Well-formed file whose data is not a prestable quasimap.
    Invalid(Diagnostic),
}

fn coefficient(v: &Value) -> Option<Rat> {
    match v {
        Value::Integer(i) => Some(Rat::from_integer((*i).into())),
        Value::String(s) => parse_scalar(s),
        _ => None,
    }
}

/// An entry as a monomial string (`"3x^2y - y^3"`) or as coefficients of
/// `x^d, x^{d-1}y, …, y^d`.
fn entry_form(v: &Value, degree: u32) -> Result<Form, String> {
    match v {
        Value::String(s) => Form::parse(s, degree).map_err(|e| e.to_string()),
        Value::Array(cs) => {
            if cs.len() != degree as usize + 1 {
                return Err(format!("expected {} coefficients for degree {degree}, got {}", degree + 1, cs.len()));
            }
            let coeffs = cs
                .iter()
                .map(|c| coefficient(c).ok_or_else(|| format!("bad coefficient `{c}`")))
                .collect::<Result<Vec<_>, _>>()?;
            Form::new(degree, coeffs).map_err(|e| e.to_string())
        }
        other => Err(format!("expected a form string or coefficient array, got `{other}`")),
    }
}

/// `[a:b]` for a rational point, or a homogeneous form whose roots are the
/// marked points.
fn mark_form(text: &str) -> Result<Form, String> {
    let t = text.trim();
    if let Some(inner) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
        let (a, b) = inner.split_once(':').ok_or("a point is written `[a:b]`")?;
        let a: Rat = parse_scalar(a).ok_or_else(|| format!("bad coordinate `{a}`"))?;
        let b: Rat = parse_scalar(b).ok_or_else(|| format!("bad coordinate `{b}`"))?;
        return Form::vanishing_at(&a, &b).map_err(|_| "[0:0] is not a point".to_string());
    }
    let mut last = String::from("empty mark");
    for d in 1..=64 {
        match Form::parse(t, d) {
            Ok(f) => return Ok(f),
            Err(e) => last = e.to_string(),
        }
    }
    Err(last)
}

pub fn parse_quasimap(path: &str, text: &str) -> Result<QuasimapInput, Diagnostic> {
    let src = Source { path, text };
    let raw: RawQuasimap = src.parse()?;
    let n = usize::try_from(*raw.n.get_ref()).map_err(|_| src.span(&raw.n, "`n` must be nonnegative"))?;
    let (target, rows) = match raw.target.get_ref().as_str() {
        "projective" => {
            if let Some(k) = &raw.k {
                return Err(src.span(k, "key `k` is not used by target `projective`"));
            }
            if n == 0 {
                return Err(src.span(&raw.n, "`n` must be positive"));
            }
            (QuasimapTarget::Pn { n }, 1)
        }
        "grassmannian" => {
            let k = raw.k.as_ref().ok_or_else(|| src.span(&raw.target, "target `grassmannian` requires key `k`"))?;
            let kv = positive(&src, k, "k")?;
            (QuasimapTarget::Gr { k: kv, n }, kv)
        }
        other => {
            return Err(src.span(&raw.target, format!("unknown target `{other}`; expected projective or grassmannian")))
        }
    };
    let row_degrees = match (&raw.degree, &raw.row_degrees) {
        (Some(d), None) if rows == 1 => vec![*d.get_ref()],
        (Some(d), None) => return Err(src.span(d, "`degree` is only for projective targets; use `row_degrees`")),
        (None, Some(r)) => {
            if r.get_ref().len() != rows {
                return Err(src.span(r, format!("expected {rows} row degrees, got {}", r.get_ref().len())));
            }
            r.get_ref().clone()
        }
        (Some(d), Some(_)) => return Err(src.span(d, "give either `degree` or `row_degrees`, not both")),
        (None, None) => return Err(src.span(&raw.target, "missing `degree` or `row_degrees`")),
    };

    let mut entries = Vec::with_capacity(rows);
    if rows == 1 && matches!(target, QuasimapTarget::Pn { .. }) {
        let mut row = Vec::new();
        for (j, e) in raw.entries.get_ref().iter().enumerate() {
            row.push(
                entry_form(e.get_ref(), row_degrees[0]).map_err(|m| src.span(e, format!("entry {}: {m}", j + 1)))?,
            );
        }
        entries.push(row);
    } else {
        for (i, r) in raw.entries.get_ref().iter().enumerate() {
            let Value::Array(items) = r.get_ref() else {
                return Err(src.span(r, format!("row {} must be an array of entries", i + 1)));
            };
            let d = *row_degrees.get(i).ok_or_else(|| src.span(r, format!("expected {rows} rows")))?;
            let mut row = Vec::new();
            for (j, e) in items.iter().enumerate() {
                row.push(entry_form(e, d).map_err(|m| src.span(r, format!("entry ({},{}): {m}", i + 1, j + 1)))?);
            }
            entries.push(row);
        }
    }

    let mut marks = Vec::with_capacity(raw.marks.len());
    for m in &raw.marks {
        marks.push(mark_form(m.get_ref()).map_err(|e| src.span(m, format!("mark: {e}")))?);
    }

    let q = match PolyQuasimap::new(target, row_degrees, entries, marks) {
        Ok(q) => q,
        Err(e @ QuasimapError::Malformed(_)) => {
            return Ok(QuasimapInput::Invalid(src.span(&raw.entries, e.to_string())))
        }
        Err(e) => return Err(src.span(&raw.entries, e.to_string())),
    };
    if let Err(e @ QuasimapError::NotPrestable(_)) = q.epsilon_stability_range() {
        return Ok(QuasimapInput::Invalid(src.span(&raw.entries, e.to_string())));
    }
    Ok(QuasimapInput::Valid(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_one_based() {
        let d = parse_target("t.toml", "preset = \"projective\"\nn = 0\n").unwrap_err();
        assert_eq!((d.line, d.column), (2, 5));
        assert_eq!(d.to_string(), "t.toml:2:5: `n` must be a positive integer");
    }

    #[test]
    fn syntax_errors_are_anchored() {
        let d = parse_target("t.toml", "preset = \"projective\"\nn = [\n").unwrap_err();
        assert_eq!(d.line, 2);
        let d = parse_target("t.toml", "preset = \"projective\"\nm = 3\n").unwrap_err();
        assert_eq!(d.line, 2);
    }

    #[test]
    fn foreign_keys_are_rejected() {
        let d = parse_target("t.toml", "preset = \"projective\"\nn = 2\nk = 1\n").unwrap_err();
        assert_eq!(d.line, 3);
        assert!(d.message.contains("`k`"));
    }

    #[test]
    fn presets_parse() {
        let t = parse_target("t", "preset = \"grassmannian\"\nk = 2\nn = 4\nbound = 3\n").unwrap();
        assert_eq!(t.target.rank(), 2);
        assert_eq!(t.bound, Some(3));
        let t = parse_target(
            "t",
            "preset = \"toric\"\nname = \"P1xP1\"\nweight_matrix = [[1,1,0,0],[0,0,1,1]]\ntheta = [1,1]\n",
        )
        .unwrap();
        assert_eq!(t.target.dim(), 4);
    }

    #[test]
    fn marks_and_entries() {
        assert_eq!(
            mark_form("[1:1]").unwrap(),
            Form::vanishing_at(&Rat::from_integer(1.into()), &Rat::from_integer(1.into())).unwrap()
        );
        assert_eq!(mark_form("x^2 + y^2").unwrap().degree(), 2);
        assert!(mark_form("[0:0]").is_err());
        let f = entry_form(&Value::Array(vec![Value::Integer(1), Value::String("1/2".into())]), 1).unwrap();
        assert_eq!(f, Form::parse("x + 1/2y", 1).unwrap());
        assert!(entry_form(&Value::Integer(3), 1).is_err());
    }

    #[test]
    fn quasimap_rows() {
        let text = "target = \"grassmannian\"\nk = 2\nn = 3\nrow_degrees = [1, 0]\nentries = [[\"x\", \"y\", \"0\"], [[0], [0], [1]]]\n";
        let QuasimapInput::Valid(q) = parse_quasimap("q", text).unwrap() else { panic!() };
        assert_eq!(q.degree(), 1);
        let bad = "target = \"projective\"\nn = 2\ndegree = 1\nentries = [\"x\", \"y\", \"x^2\"]\n";
        let d = parse_quasimap("q", bad).unwrap_err();
        assert_eq!(d.line, 4);
    }
}
