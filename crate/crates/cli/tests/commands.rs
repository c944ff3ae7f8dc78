use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use qmap_cli::{exit, run, Output};
use qmap_core::git::Target;
use qmap_core::ifunction::{assemble_series, parse_json, to_text};
use qmap_core::Series;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn qmap(args: &[&str]) -> Output {
    run(std::iter::once("qmap").chain(args.iter().copied()), None)
}

fn temp_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn stability_projective_plane_holds() {
    let out = qmap(&["stability", &data("p2.toml"), "--verify"]);
    assert_eq!(out.code, exit::OK);
    assert!(out.stdout.contains("verdict hold"));
    assert!(!out.stdout.contains("false"));
}

#[test]
fn stability_weight_two_fails_freeness() {
    let out = qmap(&["stability", &data("weight2.toml"), "--verify"]);
    assert_eq!(out.code, exit::ASSUMPTIONS);
    assert!(out.stdout.contains("torus-free-on-stable false"));
    assert!(out.stdout.contains("witness non-free-torus {1}"));
    let report_only = qmap(&["stability", &data("weight2.toml")]);
    assert_eq!(report_only.code, exit::OK, "failure only sets the exit code under --verify");
}

#[test]
fn stability_supports_of_p1xp1() {
    let out = qmap(&["stability", &data("p1xp1.toml"), "--supports"]);
    assert_eq!(out.code, exit::OK);
    assert_eq!(out.stdout, "target P1xP1\nmaximal-unstable-supports 2\n  {1,2}\n  {3,4}\n");
}

#[test]
fn enumeration_cap_is_enforced() {
    let args = ["qmap", "stability", &data("p2.toml")];
    assert_eq!(run(args, Some("2")).code, exit::ENUMERATION);
    assert_eq!(run(args, Some("3")).code, exit::OK);
    assert_eq!(run(args, Some("lots")).code, exit::USAGE);
    assert_eq!(run(args, Some("0")).code, exit::USAGE);
}

#[test]
fn quasimap_reports() {
    let out = qmap(&["quasimap", &data("conic_marked.toml")]);
    assert_eq!(out.code, exit::OK);
    assert_eq!(out.stdout, golden("conic_marked.txt"));
    assert!(out.stdout.ends_with("epsilon-stable (0, 1]\n"));

    let out = qmap(&["quasimap", &data("constant.toml")]);
    assert_eq!(out.code, exit::OK);
    assert!(out.stdout.contains("constant true\n"));
    assert!(out.stdout.contains("epsilon-stable never stable\n"));

    let out = qmap(&["quasimap", &data("zero.toml")]);
    assert_eq!(out.code, exit::INVALID_QUASIMAP);
    assert!(out.stderr.contains("zero.toml:4:11: quasimap is not prestable"), "{}", out.stderr);

    let out = qmap(&["quasimap", &data("gr24_line.toml")]);
    assert_eq!(out.code, exit::OK);
    assert!(out.stdout.contains("target Gr(2,4)\ndegree 2\n"));
}

#[test]
fn quasimap_with_basepoint_at_a_mark_is_invalid() {
    let f = temp_file("target = \"projective\"\nn = 1\ndegree = 1\nentries = [\"x\", \"2x\"]\nmarks = [\"[0:1]\"]\n");
    let out = qmap(&["quasimap", f.path().to_str().unwrap()]);
    assert_eq!(out.code, exit::INVALID_QUASIMAP);
    assert!(out.stderr.contains(":4:11: quasimap is not prestable: basepoint at mark x"), "{}", out.stderr);
}

#[test]
fn quasimap_shape_errors_are_invalid_quasimaps() {
    let f = temp_file("target = \"projective\"\nn = 2\ndegree = 1\nentries = [\"x\", \"y\"]\n");
    let out = qmap(&["quasimap", f.path().to_str().unwrap()]);
    assert_eq!(out.code, exit::INVALID_QUASIMAP);
    assert!(out.stderr.contains(":4:11:"), "{}", out.stderr);
}

#[test]
fn input_diagnostics_name_a_line() {
    let cases = [
        ("preset = \"projective\"\nn = 2\nweights = [[1]]\n", 3, exit::USAGE),
        ("preset = \"grassmannian\"\nk = 4\nn = 4\n", 3, exit::USAGE),
        ("preset = \"banana\"\n", 1, exit::USAGE),
        (
            "preset = \"custom\"\nweights = [[1]]\ntheta = [1]\ntau = [[1]]\neffectivity_mode = \"fuzzy\"\n",
            5,
            exit::USAGE,
        ),
        ("preset = \"toric\"\nweight_matrix = [[1, 1], [1]]\ntheta = [1, 1]\n", 2, exit::USAGE),
        ("preset = \"projective\"\n\n\nn = \"two\"\n", 4, exit::USAGE),
    ];
    for (text, line, code) in cases {
        let f = temp_file(text);
        let path = f.path().to_str().unwrap().to_string();
        let out = qmap(&["stability", &path]);
        assert_eq!(out.code, code, "{text}");
        assert!(out.stderr.starts_with(&format!("error: {path}:{line}:")), "{text}\n{}", out.stderr);
    }
}

#[test]
fn bad_quasimap_entries_name_a_line() {
    let f = temp_file("target = \"projective\"\nn = 1\ndegree = 2\nentries = [\n  \"x^2\",\n  \"3x^2y\",\n]\n");
    let out = qmap(&["quasimap", f.path().to_str().unwrap()]);
    assert_eq!(out.code, exit::USAGE);
    assert!(out.stderr.contains(":6:3: entry 2:"), "{}", out.stderr);
}

#[test]
fn fixed_loci_tables() {
    let out = qmap(&["fixed-loci", &data("gr24.toml"), "--degree", "1"]);
    assert_eq!(out.code, exit::OK);
    assert_eq!(out.stdout, golden("gr24_fixed_d1.txt"));
    assert!(out.stdout.contains("lifts 2\n") && out.stdout.contains("orbits 1\n"));

    let out = qmap(&["fixed-loci", &data("p2.toml"), "--degree", "2"]);
    assert!(out.stdout.contains("  [2]     3      1      2      [2]\n"), "{}", out.stdout);
}

#[test]
fn unbounded_custom_enumeration_is_guarded() {
    let out = qmap(&["fixed-loci", &data("custom_kernel.toml"), "--degree", "1"]);
    assert_eq!(out.code, exit::ENUMERATION);
    assert!(out.stderr.contains("--bound"));

    let out = qmap(&["fixed-loci", &data("custom_kernel.toml"), "--degree", "1", "--bound", "1"]);
    assert_eq!(out.code, exit::OK);
    assert!(out.stdout.contains("lifts 3\n"));
    assert!(out.stderr.starts_with("warning: custom_bounded effectivity"));

    let out = qmap(&["ifunction", &data("custom_kernel.toml"), "--max-degree", "1"]);
    assert_eq!(out.code, exit::ENUMERATION);
}

#[test]
fn degree_arity_is_a_usage_error() {
    let out = qmap(&["fixed-loci", &data("gr24.toml"), "--degree", "1,0"]);
    assert_eq!(out.code, exit::USAGE);
    assert!(out.stderr.contains("--degree needs 1 entries, got 2"));
}

#[test]
fn ifunction_projective_line_golden() {
    let out = qmap(&["ifunction", &data("p1.toml"), "--max-degree", "2"]);
    assert_eq!(out.code, exit::OK);
    assert_eq!(out.stdout, golden("p1_d2.txt"));
    let reduced = qmap(&["ifunction", &data("p1.toml"), "--max-degree", "2", "--reduce-pn"]);
    assert_eq!(reduced.stdout, golden("p1_d2_reduced.txt"));
    assert!(reduced.stdout.contains("  reduced (1/1)[0]z^-2 + (-2/1)[1]z^-3\n"));
}

#[test]
fn ifunction_check_passes_on_gr24() {
    let out = qmap(&["ifunction", &data("gr24.toml"), "--max-degree", "1", "--check"]);
    assert_eq!(out.code, exit::OK);
    assert!(out.stdout.ends_with("check [1] identities pass weyl pass\ncheck pass\n"));

    let out = qmap(&["ifunction", &data("gr24.toml"), "--max-degree", "1", "--check", "--json"]);
    assert_eq!(out.code, exit::OK);
    assert!(out.stderr.ends_with("check pass\n"));
    assert!(serde_json::from_str::<serde_json::Value>(&out.stdout).is_ok());
}

#[test]
fn reduce_pn_needs_a_projective_target() {
    let out = qmap(&["ifunction", &data("gr24.toml"), "--max-degree", "1", "--reduce-pn"]);
    assert_eq!(out.code, exit::USAGE);
    assert!(out.stdout.is_empty());
}

#[test]
fn flag_misuse_is_a_usage_error() {
    for args in [
        vec!["ifunction", "x.toml", "--max-degree", "0"],
        vec!["ifunction", "x.toml", "--max-degree", "1", "--json", "--latex"],
        vec!["fixed-loci", "x.toml"],
        vec!["frobnicate"],
        vec!["stability", "/nonexistent/target.toml"],
    ] {
        assert_eq!(qmap(&args).code, exit::USAGE, "{args:?}");
    }
    let help = qmap(&["--help"]);
    assert_eq!(help.code, exit::OK);
    assert!(help.stdout.contains("fixed-loci"));
}

#[test]
fn json_round_trip_reproduces_canonical_text() {
    for (file, d) in [("p2.toml", 3), ("gr24.toml", 2), ("p1xp1.toml", 2)] {
        let out = qmap(&["ifunction", &data(file), "--max-degree", &d.to_string(), "--json"]);
        assert_eq!(out.code, exit::OK);
        let back: Series = parse_json(&out.stdout).unwrap();
        let text = qmap(&["ifunction", &data(file), "--max-degree", &d.to_string()]);
        assert_eq!(to_text(&back), text.stdout, "{file}");
    }
}

#[test]
fn latex_is_one_aligned_block() {
    let out = qmap(&["ifunction", &data("gr24.toml"), "--max-degree", "1", "--latex"]);
    assert!(out.stdout.starts_with("\\begin{align*}\nI_{0}(z) &= 1 \\\\\nI_{1}(z) &= \\frac{"));
    assert!(out.stdout.ends_with("\\end{align*}\n"));
    assert!(out.stdout.contains("x_{1}") && out.stdout.contains("x_{2}"));
}

#[test]
fn output_is_deterministic() {
    let runs: [&[&str]; 4] = [
        &["ifunction", "gr24.toml", "--max-degree", "2", "--json"],
        &["ifunction", "p1xp1.toml", "--max-degree", "2"],
        &["stability", "p1xp1.toml"],
        &["fixed-loci", "gr24.toml", "--degree", "3"],
    ];
    for args in runs {
        let args: Vec<String> =
            args.iter().map(|a| if a.ends_with(".toml") { data(a) } else { a.to_string() }).collect();
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(qmap(&argv), qmap(&argv), "{argv:?}");
    }
}

#[test]
fn cli_series_matches_library_series() {
    let t = Target::grassmannian(2, 4).unwrap();
    let lib: Series = assemble_series(&t, 2, None).unwrap();
    let out = qmap(&["ifunction", &data("gr24.toml"), "--max-degree", "2"]);
    assert_eq!(out.stdout, to_text(&lib));
}

#[test]
fn binary_honours_exit_codes_and_environment() {
    let bin = env!("CARGO_BIN_EXE_qmap");
    let status = |args: &[&str], cap: Option<&str>| {
        let mut cmd = Command::new(bin);
        cmd.args(args).env_remove("QMAP_ENUM_CAP");
        if let Some(c) = cap {
            cmd.env("QMAP_ENUM_CAP", c);
        }
        cmd.output().unwrap()
    };
    let p2 = data("p2.toml");
    let ok = status(&["stability", &p2, "--verify"], None);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), qmap(&["stability", &p2, "--verify"]).stdout);
    assert_eq!(status(&["stability", &p2], Some("1")).status.code(), Some(exit::ENUMERATION));
    assert_eq!(status(&["stability", &data("weight2.toml"), "--verify"], None).status.code(), Some(1));
    assert_eq!(status(&["quasimap", &data("zero.toml")], None).status.code(), Some(2));
    assert_eq!(status(&["bogus"], None).status.code(), Some(exit::USAGE));
}

#[test]
fn custom_datum_reproduces_the_grassmannian_preset() {
    let custom = qmap(&["ifunction", &data("gr23_custom.toml"), "--max-degree", "2", "--check"]);
    let preset = qmap(&["ifunction", &data("gr23.toml"), "--max-degree", "2", "--check"]);
    assert_eq!(custom.code, exit::OK);
    let body = |s: &str| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&custom.stdout), body(&preset.stdout));
    assert!(custom.stderr.is_empty(), "nonnegative_gl is exact, so no warning");
}
