use std::path::PathBuf;
use std::process::{Command, Output};

use operadica::koszul::{identity_map, relations_equivalent};
use operadica::presentation::parse;
use operadica::registry::Registry;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_operadica")).args(args).env_remove("OPERADICA_REGISTRY_DIR").output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("operadica-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn dims_dend_and_leib() {
    let o = run(&["dims", "Dend", "--max-arity", "7"]);
    assert!(o.status.success());
    let last = stdout(&o).lines().rfind(|l| l.trim_start().starts_with('7')).unwrap().to_string();
    assert!(last.trim_end().ends_with("429"), "{last}");

    let o = run(&["dims", "Leib", "--max-arity", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["quotientDim"], serde_json::json!([1, 2, 6, 24, 120]));
    assert_eq!(v["result"]["freeDim"][1], 2);
    assert!(v["result"]["truncated"].is_null());
}

#[test]
fn dims_from_file_and_mode_override() {
    let d = scratch_dir("file");
    let f = d.join("mytype.operad");
    std::fs::write(&f, "name Mine\nmode ns\nop m arity 2\nrel m(m(x1,x2),x3) = m(x1,m(x2,x3))\n").unwrap();
    let o = run(&["dims", f.to_str().unwrap(), "--max-arity", "4", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["quotientDim"], serde_json::json!([1, 1, 1, 1]));
    let o = run(&["dims", f.to_str().unwrap(), "--max-arity", "4", "--mode", "symmetric", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["quotientDim"], serde_json::json!([1, 2, 6, 24]));
}

#[test]
fn parse_errors_exit_2() {
    let d = scratch_dir("bad");
    let f = d.join("bad.operad");
    std::fs::write(&f, "name Bad\nop m arity 2\nrel m(x1,\n").unwrap();
    let o = run(&["dims", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert_eq!(run(&["dims", "NoSuchThing"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn budget_exceeded_exits_3_with_partial_table() {
    let o = run(&["dims", "Mag", "--max-arity", "8", "--max-basis", "50", "--format", "json"]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v["result"]["truncated"].is_null());
    assert!(!v["result"]["quotientDim"].as_array().unwrap().is_empty());
}

#[test]
fn duals() {
    let r = Registry::embedded();
    for (src, target) in [("Dend", "Dias"), ("Mag", "Nil2"), ("Lie", "Com")] {
        let o = run(&["dual", src]);
        assert!(o.status.success(), "{src}");
        let d = parse(&stdout(&o)).unwrap();
        let t = &r.get(target).unwrap().presentation;
        let map: Vec<(&str, &str)> = if src == "Lie" { vec![("b", "m")] } else { identity_map(&d) };
        assert!(relations_equivalent(&d, t, &map).unwrap(), "{src}! vs {target}");
    }
    assert_eq!(run(&["dual", "Moufang"]).status.code(), Some(2));
}

#[test]
fn koszul_checks() {
    let o = run(&["koszul-check", "Com", "Lie", "--order", "12"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("pass"));
    assert!(run(&["koszul-check", "Tridend", "Trias", "--order", "7"]).status.success());
    let o = run(&["koszul-check", "As", "Com"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("t^2"));
    // no closed forms: both sides from engine dims
    let o = run(&["koszul-check", "Altern"]);
    assert!(o.status.code().is_some());
    assert!(stdout(&o).contains("engine dims"));
}

#[test]
fn verify_commands() {
    let o = run(&["verify", "Dup"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for k in ["dims", "dual relations", "model duplicial"] {
        assert!(text.lines().any(|l| l.contains("pass") && l.contains(k)), "{k}\n{text}");
    }
    assert_eq!(run(&["verify", "NoSuch"]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    let o = run(&["verify", "Lie-adm", "--checks", "dims,tableau", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v["result"]["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn verify_all_lists_conflicts_as_warnings() {
    let o = run(&["verify", "--all", "--ns-max", "7", "--sym-max", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let r = Registry::embedded();
    for (_, c) in r.conflicts() {
        assert!(text.contains(&format!("warning  {c}")), "{c}");
    }
    assert!(text.contains(" 0 fail"));
}

#[test]
fn models_and_complexes() {
    let o = run(&["models", "check", "dend", "--size", "4"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = run(&["models", "check", "zinbiel", "--size", "3", "--operad", "Com"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["models", "check", "nope"]).status.code(), Some(2));
    for (k, s) in [("hochschild", "5"), ("ce", "3"), ("leibniz", "4")] {
        let o = run(&["complex", "check", k, "--size", s]);
        assert!(o.status.success(), "{k}");
        assert!(stdout(&o).contains("d∘d = 0"));
    }
    assert_eq!(run(&["complex", "check", "dr"]).status.code(), Some(2));
}

#[test]
fn list_show_series() {
    let o = run(&["list"]);
    let names: Vec<String> = stdout(&o).lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    assert!(names.len() >= 40);
    assert!(names.contains(&"JT".to_string()));
    let o = run(&["list", "--property", "non-Koszul", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["result"].as_array().unwrap().iter().any(|e| e["name"] == "Altern"));
    let o = run(&["show", "Leib"]);
    assert!(stdout(&o).contains("dual: Zinb"));
    let o = run(&["series", "catalan", "--order", "6"]);
    assert!(stdout(&o).contains("1, 2, 5, 14, 42, 132"));
    let o = run(&["series", "exp(t)-1", "--kind", "exponential", "--order", "4"]);
    assert!(stdout(&o).contains("dims: 1, 1, 1, 1"));
}

#[test]
fn output_is_deterministic() {
    for args in [&["verify", "Dias"][..], &["dims", "PostLie", "--max-arity", "4", "--format", "json"][..]] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn registry_dir_override() {
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/registry");
    let d = scratch_dir("reg");
    for e in std::fs::read_dir(&src).unwrap() {
        let p = e.unwrap().path();
        std::fs::copy(&p, d.join(p.file_name().unwrap())).unwrap();
    }
    // an undocumented wrong table must fail verification
    let meta = d.join("dias.meta");
    let text = std::fs::read_to_string(&meta).unwrap().replace("ns_dims: 1, 2, 3,", "ns_dims: 1, 2, 4,");
    std::fs::write(&meta, text).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_operadica"))
        .args(["verify", "Dias", "--checks", "dims"])
        .env("OPERADICA_REGISTRY_DIR", &d)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_operadica")).args(["list"]).env("OPERADICA_REGISTRY_DIR", d.join("missing")).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
