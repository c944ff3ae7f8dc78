use std::fmt::Write;

use num_traits::Zero;
use qmap_core::fixed_locus::{
    dim_fixed_component, effectivity_is_exact, enumerate_effective, weyl_orbit_partition, FixedLocusError,
};
use qmap_core::git::{
    maximal_unstable_supports_with_cap, verify_assumptions_with_cap, AssumptionFailure, GitError, Preset, Target,
};
use qmap_core::ifunction::{
    assemble_series, check_weyl_invariance, reduce_in_cohomology, to_json, to_latex, to_text, verify_proof_identities,
    IFunctionError,
};
use qmap_core::quasimap::{plain_scalar, QuasimapError};
use qmap_core::{Form, Quasimap, Rat, Series};

use crate::input::{parse_quasimap, parse_target, QuasimapInput, TargetFile};
use crate::{exit, CliError, Command, Output};

pub(crate) fn dispatch(command: Command, cap: usize, out: &mut Output) -> Result<i32, CliError> {
    match command {
        Command::Stability { target, supports, verify } => {
            let t = load_target(&target)?;
            stability(&t.target, supports, verify, cap, out)
        }
        Command::Quasimap { file } => {
            let text = read(&file)?;
            match parse_quasimap(&file, &text).map_err(CliError::Input)? {
                QuasimapInput::Valid(q) => quasimap(&file, &q, out),
                QuasimapInput::Invalid(d) => Err(CliError::InvalidQuasimap(d)),
            }
        }
        Command::FixedLoci { target, degree, bound } => {
            let t = load_target(&target)?;
            fixed_loci(&t, &degree, bound.bound.or(t.bound), out)
        }
        Command::Ifunction { target, max_degree, json, latex, reduce_pn, check, bound } => {
            let t = load_target(&target)?;
            let format = match (json, latex, reduce_pn) {
                (true, _, _) => Format::Json,
                (_, true, _) => Format::Latex,
                (_, _, true) => Format::ReducePn,
                _ => Format::Text,
            };
            ifunction(&t, max_degree, format, check, bound.bound.or(t.bound), out)
        }
    }
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))
}

fn load_target(path: &str) -> Result<TargetFile, CliError> {
    parse_target(path, &read(path)?).map_err(CliError::Input)
}

fn git_error(e: GitError) -> CliError {
    match e {
        GitError::TooLarge { .. } => CliError::Enumeration(format!("{e}; raise QMAP_ENUM_CAP to allow it")),
        e => CliError::Usage(e.to_string()),
    }
}

fn label(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn stability(t: &Target, supports: bool, verify: bool, cap: usize, out: &mut Output) -> Result<i32, CliError> {
    let (show_supports, show_report) = if supports || verify { (supports, verify) } else { (true, true) };
    let s = &mut out.stdout;
    writeln!(s, "target {}", t.name()).unwrap();
    if show_supports {
        let sup = maximal_unstable_supports_with_cap(t, cap).map_err(git_error)?;
        writeln!(s, "maximal-unstable-supports {}", sup.len()).unwrap();
        for x in &sup {
            writeln!(s, "  {x}").unwrap();
        }
    }
    if !show_report {
        return Ok(exit::OK);
    }
    let r = verify_assumptions_with_cap(t, cap).map_err(git_error)?;
    writeln!(s, "assumptions").unwrap();
    writeln!(s, "  semistable-equals-stable {}", yes(r.ss_equals_s)).unwrap();
    writeln!(s, "  semistable-nonempty {}", yes(r.semistable_nonempty)).unwrap();
    writeln!(s, "  torus-free-on-stable {}", yes(r.torus_free_on_stable)).unwrap();
    writeln!(s, "  nonabelian-free-declared {}", yes(r.nonabelian_free_declared)).unwrap();
    writeln!(s, "  action-free-on-stable {}", yes(r.action_free_on_stable)).unwrap();
    for (kind, sup) in &r.witnesses {
        let kind = match kind {
            AssumptionFailure::StrictlySemistable => "strictly-semistable",
            AssumptionFailure::NonFreeTorus => "non-free-torus",
        };
        writeln!(s, "  witness {kind} {sup}").unwrap();
    }
    writeln!(s, "verdict {}", if r.all_hold() { "hold" } else { "fail" }).unwrap();
    Ok(if verify && !r.all_hold() { exit::ASSUMPTIONS } else { exit::OK })
}

/// `[a:b]` for a linear form, `None` for higher degree.
fn point_of(f: &Form) -> Option<String> {
    if f.degree() != 1 {
        return None;
    }
    let c = f.coeffs();
    Some(if c[0].is_zero() {
        "[1:0]".to_string()
    } else {
        format!("[{}:1]", plain_scalar(&(-(c[1].clone()) / c[0].clone())))
    })
}

fn quasimap(path: &str, q: &Quasimap, out: &mut Output) -> Result<i32, CliError> {
    let invalid = |e: QuasimapError| match e {
        QuasimapError::NotPrestable(_) | QuasimapError::Malformed(_) => CliError::InvalidQuasimap(crate::Diagnostic {
            path: path.to_string(),
            line: 1,
            column: 1,
            message: e.to_string(),
        }),
        e => CliError::Check(e.to_string()),
    };
    let divisor = q.basepoint_divisor().map_err(invalid)?;
    let constant = q.is_constant_map().map_err(invalid)?;
    let range = q.epsilon_stability_range().map_err(invalid)?;
    let s = &mut out.stdout;
    writeln!(s, "target {}", q.target()).unwrap();
    writeln!(s, "degree {}", q.degree()).unwrap();
    let degrees: Vec<String> = q.row_degrees().iter().map(u32::to_string).collect();
    writeln!(s, "row-degrees [{}]", degrees.join(",")).unwrap();
    writeln!(s, "marks {}", q.mark_count()).unwrap();
    for m in q.marks() {
        match point_of(m) {
            Some(p) => writeln!(s, "  {p}").unwrap(),
            None => writeln!(s, "  {}", m.render()).unwrap(),
        }
    }
    writeln!(s, "basepoints {}", divisor.points.len()).unwrap();
    for (f, len) in &divisor.points {
        match point_of(f) {
            Some(p) => writeln!(s, "  {p} length {len}").unwrap(),
            None => writeln!(s, "  {} length {len}", f.render()).unwrap(),
        }
    }
    writeln!(s, "basepoint-length {}", divisor.total_length()).unwrap();
    writeln!(s, "constant {}", yes(constant)).unwrap();
    writeln!(s, "epsilon-stable {range}").unwrap();
    Ok(exit::OK)
}

fn enumeration_error(e: FixedLocusError) -> CliError {
    match e {
        FixedLocusError::UnboundedEnumeration => CliError::Enumeration(
            "effective lifted degrees are not bounded for this target; pass --bound or set `bound` in the file".into(),
        ),
        FixedLocusError::NotClosed(v) => CliError::Enumeration(format!(
            "lifts inside the bound are not closed under the Weyl group ({} is missing); raise --bound",
            label(&v)
        )),
        FixedLocusError::DimensionMismatch { expected, got } => {
            CliError::Usage(format!("--degree needs {expected} entries, got {got}"))
        }
        e => CliError::Enumeration(e.to_string()),
    }
}

fn warn_inexact(t: &Target, out: &mut Output) {
    if !effectivity_is_exact(t) {
        out.stderr.push_str(
            "warning: custom_bounded effectivity is a necessary condition only; listed lifts may include non-effective ones\n",
        );
    }
}

fn fixed_loci(tf: &TargetFile, beta: &[i64], bound: Option<i64>, out: &mut Output) -> Result<i32, CliError> {
    let t = &tf.target;
    let lifts = enumerate_effective(t, beta, bound).map_err(enumeration_error)?;
    let orbits = weyl_orbit_partition(t, &lifts).map_err(enumeration_error)?;
    warn_inexact(t, out);
    let mut rows = vec![["beta_t".to_string(), "dim_V".into(), "dim_P".into(), "dim_F".into(), "orbit".into()]];
    for b in &lifts {
        let c = dim_fixed_component(t, b).map_err(enumeration_error)?;
        let orbit = orbits
            .iter()
            .find(|o| qmap_core::fixed_locus::weyl_orbit(t, &o.representative).contains(b))
            .map_or_else(|| label(b), |o| label(&o.representative));
        rows.push([label(b), c.dim_v.to_string(), c.dim_p.to_string(), c.dim_f.to_string(), orbit]);
    }
    let widths: Vec<usize> = (0..5).map(|i| rows.iter().map(|r| r[i].len()).max().unwrap_or(0)).collect();
    let s = &mut out.stdout;
    writeln!(s, "target {}", t.name()).unwrap();
    writeln!(s, "degree {}", label(beta)).unwrap();
    writeln!(s, "lifts {}", lifts.len()).unwrap();
    for r in &rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        writeln!(s, "  {}", cells.join("  ").trim_end()).unwrap();
    }
    writeln!(s, "orbits {}", orbits.len()).unwrap();
    for o in &orbits {
        writeln!(s, "  {} size {} stabilizer {}", label(&o.representative), o.size, o.stabilizer_order).unwrap();
    }
    Ok(exit::OK)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Latex,
    ReducePn,
}

fn ifunction_error(e: IFunctionError) -> CliError {
    match e {
        IFunctionError::Enumeration(e) => enumeration_error(e),
        IFunctionError::NotProjective | IFunctionError::BadBound => CliError::Usage(e.to_string()),
        e => CliError::Check(e.to_string()),
    }
}

fn reduced_text(t: &Target, s: &Series) -> Result<String, CliError> {
    let mut out = String::new();
    writeln!(out, "target {}", s.target).unwrap();
    writeln!(out, "variables {}", s.variables.join(" ")).unwrap();
    writeln!(out, "degree-bound {}", s.degree_bound).unwrap();
    writeln!(out, "relation H^{}", t.rank() + t.dim() - 1).unwrap();
    for c in s.coefficients.values() {
        let red = reduce_in_cohomology(t, c).map_err(ifunction_error)?;
        writeln!(out, "beta {}", label(&c.beta)).unwrap();
        writeln!(out, "  reduced {}", red.canonical()).unwrap();
        writeln!(out, "  display {}", red.render(&s.variables)).unwrap();
    }
    Ok(out)
}

/// One line per coefficient; returns whether everything passed.
fn check_series(t: &Target, s: &Series, report: &mut String) -> bool {
    let mut all = true;
    for c in s.coefficients.values() {
        let identities = c.terms.iter().all(|(b, _)| verify_proof_identities::<Rat>(t, b));
        let weyl = check_weyl_invariance(t, &c.expr);
        let verdict = |ok: bool| if ok { "pass" } else { "fail" };
        writeln!(report, "check {} identities {} weyl {}", label(&c.beta), verdict(identities), verdict(weyl)).unwrap();
        all &= identities && weyl;
    }
    writeln!(report, "check {}", if all { "pass" } else { "fail" }).unwrap();
    all
}

fn ifunction(
    tf: &TargetFile,
    max_degree: u32,
    format: Format,
    check: bool,
    bound: Option<i64>,
    out: &mut Output,
) -> Result<i32, CliError> {
    let t = &tf.target;
    if format == Format::ReducePn && !matches!(t.preset(), Preset::Projective { .. }) {
        return Err(CliError::Usage("--reduce-pn needs a projective target".into()));
    }
    let series: Series = assemble_series(t, max_degree, bound).map_err(ifunction_error)?;
    warn_inexact(t, out);
    out.stdout.push_str(&match format {
        Format::Text => to_text(&series),
        Format::Json => to_json(&series) + "\n",
        Format::Latex => to_latex(&series, &t.latex_variable_names()),
        Format::ReducePn => reduced_text(t, &series)?,
    });
    if !check {
        return Ok(exit::OK);
    }
    let mut report = String::new();
    let ok = check_series(t, &series, &mut report);
    if matches!(format, Format::Text | Format::ReducePn) {
        out.stdout.push_str(&report);
    } else {
        out.stderr.push_str(&report);
    }
    Ok(if ok { exit::OK } else { exit::CHECK })
}
