use std::path::{Path, PathBuf};
use std::process::Command;

use gsc_cli::report::Verdict;
use gsc_cli::{parse_instance, render, run_command, run_pipeline, Command as Cmd, Format};

fn instance(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("instances").join(name)
}

fn gsc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gsc")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn a7_json_matches_golden_file() {
    let spec = parse_instance(&instance("a7.toml")).unwrap();
    let json = render(&run_pipeline(&spec), Format::Json);
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/a7.json")).unwrap();
    assert_eq!(json, golden);
}

#[test]
fn reports_are_byte_stable() {
    for name in ["a7.toml", "z3_z5_overlapping.toml", "hexagon.toml"] {
        let spec = parse_instance(&instance(name)).unwrap();
        let first = render(&run_pipeline(&spec), Format::Json);
        for _ in 0..2 {
            assert_eq!(render(&run_pipeline(&spec), Format::Json), first, "{name}");
        }
        let path = instance(name);
        let (_, a, _) = gsc(&["all", path.to_str().unwrap()]);
        assert_eq!(a, first, "{name} via the binary");
    }
}

#[test]
fn a7_end_to_end() {
    let spec = parse_instance(&instance("a7.toml")).unwrap();
    let r = run_pipeline(&spec);
    assert_eq!(r.verdict, Verdict::Pass);
    let c = r.small_cancellation.data.as_ref().unwrap();
    assert_eq!((c.l_max, c.r_min), (Some(0), Some(7)));
    let q = r.quotient.data.as_ref().unwrap();
    assert_eq!(q.presentation, "<a, b | a^7>");
    assert_eq!(q.abelianization, "Z/7 ⊕ Z");
}

#[test]
fn failing_gate_skips_construction() {
    let spec = parse_instance(&instance("gated.toml")).unwrap();
    let r = run_pipeline(&spec);
    assert_eq!(r.small_cancellation.verdict, Verdict::Fail);
    assert_eq!(r.verdict, Verdict::Fail);
    for v in [r.complex.verdict, r.links.verdict, r.stabilizers.verdict, r.complex_of_groups.verdict] {
        assert_eq!(v, Verdict::NotAttempted);
    }
    assert!(r.links.data.is_none() && r.graphs.is_empty());
    let json = render(&r, Format::Json);
    assert!(json.contains("\"not attempted\"") && !json.contains("k_centres"));
    // the quotient does not depend on the gate
    assert_eq!(r.quotient.verdict, Verdict::Pass);
}

#[test]
fn empty_family_is_vacuous() {
    let spec = parse_instance(&instance("empty.toml")).unwrap();
    let r = run_pipeline(&spec);
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.quotient.data.unwrap().presentation, "<a, b | >");
}

#[test]
fn short_relator_fails_at_a_tree_vertex() {
    let spec = parse_instance(&instance("short_relator.toml")).unwrap();
    assert_eq!(spec.warnings.len(), 1);
    let r = run_pipeline(&spec);
    assert_eq!(r.small_cancellation.verdict, Verdict::Pass);
    assert_eq!(r.links.verdict, Verdict::Fail);
    let tv = &r.links.data.as_ref().unwrap().tree_vertices[0];
    assert_eq!(tv.girth.as_ref().unwrap().at_lo_over_pi.as_deref(), Some("9/5"));
}

#[test]
fn commands_select_sections() {
    let spec = parse_instance(&instance("a7.toml")).unwrap();
    let check = run_command(&spec, Cmd::Check);
    assert_eq!(check.small_cancellation.verdict, Verdict::Pass);
    assert_eq!(check.complex.verdict, Verdict::NotAttempted);
    assert_eq!(check.quotient.verdict, Verdict::NotAttempted);
    let build = run_command(&spec, Cmd::Build);
    assert_eq!((build.complex.verdict, build.links.verdict), (Verdict::Pass, Verdict::NotAttempted));
    assert_eq!(build.complex_of_groups.verdict, Verdict::Pass);
    let links = run_command(&spec, Cmd::Links);
    assert_eq!((links.links.verdict, links.stabilizers.verdict), (Verdict::Pass, Verdict::Pass));
    let q = run_command(&spec, Cmd::Quotient);
    assert_eq!((q.rotation_family.verdict, q.quotient.verdict), (Verdict::NotAttempted, Verdict::Pass));
}

#[test]
fn text_summary_has_the_verdict_first() {
    for (name, verdict) in [("a7.toml", "pass"), ("gated.toml", "fail")] {
        let spec = parse_instance(&instance(name)).unwrap();
        let text = render(&run_pipeline(&spec), Format::Text);
        assert_eq!(text.lines().next().unwrap(), format!("verdict: {verdict}"));
    }
}

/// Nodes and edges of each graph in a DOT file with one statement per line.
fn parse_dot(text: &str) -> Vec<(String, usize, Vec<(String, String)>)> {
    let mut graphs = Vec::new();
    let mut current: Option<(String, usize, Vec<(String, String)>)> = None;
    let quoted = |s: &str| -> Vec<String> { s.split('"').skip(1).step_by(2).map(|x| x.to_string()).collect() };
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with("//")) {
        if let Some(head) = line.strip_prefix("graph ") {
            assert!(current.is_none() && head.ends_with('{'), "{line}");
            current = Some((quoted(head)[0].clone(), 0, Vec::new()));
        } else if line == "}" {
            graphs.push(current.take().expect("closing brace inside a graph"));
        } else {
            let g = current.as_mut().expect("statement inside a graph");
            assert!(line.ends_with("];"), "{line}");
            let q = quoted(line);
            if line.contains(" -- ") {
                g.2.push((q[0].clone(), q[1].clone()));
            } else {
                g.1 += 1;
            }
        }
    }
    assert!(current.is_none());
    graphs
}

#[test]
fn dot_export_round_trips() {
    let spec = parse_instance(&instance("small_cancellation.toml")).unwrap();
    let r = run_command(&spec, Cmd::Links);
    let parsed = parse_dot(&render(&r, Format::Dot));
    assert_eq!(parsed.len(), r.graphs.len());
    for ((name, nodes, edges), (n, g)) in parsed.iter().zip(&r.graphs) {
        assert_eq!(name, n);
        assert_eq!(*nodes, g.vertex_count());
        let expect: Vec<(String, String)> = g.edges.iter().map(|e| (g.labels[e.u].clone(), g.labels[e.v].clone())).collect();
        assert_eq!(*edges, expect);
    }
    assert!(parsed.iter().any(|g| g.0.starts_with("tree_vertex")));
    let gated = run_pipeline(&parse_instance(&instance("gated.toml")).unwrap());
    assert!(parse_dot(&render(&gated, Format::Dot)).is_empty());
}

#[test]
fn exit_codes() {
    let p = |n: &str| instance(n).to_str().unwrap().to_string();
    assert_eq!(gsc(&["check", &p("a7.toml")]).0, 0);
    assert_eq!(gsc(&["all", &p("gated.toml")]).0, 1);
    assert_eq!(gsc(&["links", &p("short_relator.toml")]).0, 1);
    assert_eq!(gsc(&["all", &p("a7.toml"), "--radius", "1"]).0, 2);
    let (code, _, err) = gsc(&["check", &p("undeclared.toml")]);
    assert_eq!(code, 3);
    assert!(err.contains("line 5") && err.contains("\"c\""), "{err}");
    assert_eq!(gsc(&["frobnicate", &p("a7.toml")]).0, 3);
    assert_eq!(gsc(&["check", "/nonexistent.toml"]).0, 3);
    assert_eq!(gsc(&["check", &p("a7.toml"), "--lambda", "one"]).0, 3);
    assert_eq!(gsc(&["check", &p("a7.toml"), "--precision", "8"]).0, 3);
    assert_eq!(gsc(&["--help"]).0, 0);
}

#[test]
fn flags_override_the_file() {
    let p = instance("hexagon.toml");
    let (code, out, err) = gsc(&["check", p.to_str().unwrap(), "--lambda", "1/8", "--format", "text"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("verdict: fail\n") && err.is_empty(), "{out}{err}");
    let (code, _, err) = gsc(&["check", p.to_str().unwrap(), "--lambda", "7/6"]);
    assert_eq!(code, 0);
    assert!(err.contains("warning"), "{err}");
}

#[test]
fn out_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("gsc-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("a7.txt");
    let (code, stdout, _) = gsc(&["all", instance("a7.toml").to_str().unwrap(), "--format", "text", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("verdict: pass\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}
