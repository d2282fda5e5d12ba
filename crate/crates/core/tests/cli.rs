use std::path::PathBuf;
use std::process::Command;

use todakit::cli::{render_text, run_session, CliError, Options, Output, Report};

fn session_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../sessions").join(name)
}

fn run(name: &str) -> Report {
    let src = std::fs::read_to_string(session_path(name)).unwrap();
    run_session(&src, &Options::default()).unwrap_or_else(|f| panic!("{}", f.error))
}

fn snapshot(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/snapshots").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_todakit")).args(args).output().unwrap()
}

#[test]
fn resolution_session_reports_d2_and_the_proper_inclusion() {
    let r = run("prop_a1.toda");
    let dr = r
        .results
        .iter()
        .find_map(|c| match &c.output {
            Output::Dr { normalized, set, .. } => Some((normalized.clone(), set.clone())),
            _ => None,
        })
        .unwrap();
    assert_eq!(dr.0.len(), 1);
    assert_eq!(dr.0[0].src, vec![3, 1]);
    assert_eq!(dr.0[0].tgt, vec![2]);
    assert_eq!(dr.0[0].text, "[[mu(1), mu(x)]]");
    assert_eq!(dr.1.indeterminacy_rank, Some(0));
    let proper = r.results.iter().any(|c| {
        matches!(&c.output, Output::Drforms { d2: Some(d), full_equal: true, restricted_equal: true, .. }
            if d.middle_proper || d.outer_proper)
    });
    assert!(proper);
    assert_eq!(render_text(&r), snapshot("prop_a1.txt"));
}

#[test]
fn c3_bracket_is_minus_one() {
    let r = run("c3_negative.toda");
    let Output::Bracket { bracket } = &r.results[0].output else { panic!("not a bracket") };
    assert_eq!(bracket.elements, vec![vec![2]]);
    assert_eq!(bracket.rendered, vec!["-mu(1)".to_string()]);
    assert_eq!(render_text(&r), snapshot("c3_negative.txt"));
}

#[test]
fn json_round_trip_renders_the_same_tables() {
    for name in ["prop_a1.toda", "c3_negative.toda"] {
        let r = run(name);
        let json = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(render_text(&back), render_text(&r));
    }
    let out = binary(&["--json", session_path("c3_negative.toda").to_str().unwrap()]);
    assert!(out.status.success());
    let back: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(render_text(&back), snapshot("c3_negative.txt"));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["ring", "objects", "results"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let b = &v["results"][0]["output"]["bracket"];
    for key in ["elements", "basis_labels", "indeterminacy_rank"] {
        assert!(b.get(key).is_some(), "{key}");
    }
}

#[test]
fn output_is_deterministic() {
    let path = session_path("prop_a1.toda");
    let a = binary(&[path.to_str().unwrap()]);
    let b = binary(&[path.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let src = "ring p=3 m=4\npropcheck 15\n";
    let opts = Options { seed: 11, ..Options::default() };
    let x = render_text(&run_session(src, &opts).unwrap());
    let y = render_text(&run_session(src, &opts).unwrap());
    assert_eq!(x, y);
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("todakit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        ("ok.toda", "ring p=2 m=4\nmodule M = [2]\nsthom M M\n", 0),
        ("parse.toda", "ring p=2 m=4\nfrobnicate\n", 2),
        ("linear.toda", "ring p=2 m=4\nmodule M = [2]\nmap f: M -> M = matrix [[0,1],[0,0]]\n", 2),
        ("name.toda", "ring p=2 m=4\nmodule M = [2]\ncone g\n", 2),
        ("adams.toda", "ring p=2 m=4\nmodule M = [2]\npage 1\n", 2),
        ("short.toda", "ring p=2 m=4\nmodule M = [2]\nmodule k = [1]\nadams M gen=k len=2\npage 3\n", 1),
    ];
    for (file, src, code) in cases {
        let p = dir.join(file);
        std::fs::write(&p, src).unwrap();
        let out = binary(&[p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(code), "{file}: {}", String::from_utf8_lossy(&out.stderr));
    }
    // the partial report is still printed before an engine error
    let out = binary(&[dir.join("short.toda").to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("adams M gen=k len=2"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("page 3"));
}

#[test]
fn overflow_names_the_command() {
    let src = "ring p=3 m=4\nmodule A = [2,3]\nmap f: A -> A = blocks [[0, 0], [0, 0]]\nbracket fc f f f\n";
    let err = run_session(src, &Options { max_enumerate: 2, seed: 0 }).unwrap_err();
    match err.error {
        CliError::Engine { line, command, msg } => {
            assert_eq!(line, 4);
            assert_eq!(command, "bracket fc f f f");
            assert!(msg.contains("enumeration"), "{msg}");
        }
        e => panic!("{e}"),
    }
    assert!(err.partial.is_some());
}

#[test]
fn matrix_declarations_reduce_to_parts() {
    // x sends e1 to e0: one 2-block with the basis reversed
    let src = "ring p=2 m=4\nmodule M = matrix [[0,1],[0,0]]\nmodule F = [2,4]\nmap f: M -> F = matrix [[0,1],[1,0],[0,0],[0,0],[0,0],[0,0]]\nsthom M F\ncone f\n";
    let r = run_session(src, &Options::default()).unwrap();
    assert_eq!(r.objects[0].parts, vec![2]);
    assert_eq!(r.objects[1].parts, vec![2]);
    assert_eq!(r.objects[1].free, 1);
    let Output::Triangle { f, .. } = &r.results[1].output else { panic!() };
    assert_eq!(f.text, "mu(1)");
}
