use std::path::PathBuf;
use std::process::Command;

use difmod::cplx::{BassReport, Resolution};
use difmod::verify::SuiteReport;
use difmod::{Complex, DiffMod, Module};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_difmod")).args(args).output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

fn code(args: &[&str]) -> i32 {
    run(args).0
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("difmod-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Parses `v` as `T` and checks that serializing it again gives `v` back.
fn round_trips<T: Serialize + DeserializeOwned>(v: &Value) {
    let t: T = serde_json::from_value(v.clone()).expect("document parses");
    assert_eq!(&serde_json::to_value(&t).unwrap(), v);
}

#[test]
fn resolve_example() {
    let (c, v) = run(&["cx", "resolve", "--ring", "Z/4", "--module", "[1]", "--length", "5"]);
    assert_eq!(c, 0);
    let res = &v["result"]["resolution"];
    let terms: Vec<Value> = res["complex"]["terms"].as_array().unwrap().iter().map(|t| t["invariants"].clone()).collect();
    assert_eq!(terms, vec![serde_json::json!([[2]]); 6]);
    for d in res["complex"]["diffs"].as_array().unwrap() {
        assert_eq!(d["matrix"], serde_json::json!([["2"]]));
    }
    assert_eq!(res["period"]["length"], 1);
    round_trips::<Resolution>(res);
}

#[test]
fn bass_example() {
    let (c, v) = run(&["cx", "bass", "--ring", "Z/4", "--module", "[2]", "--length", "8"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["mu"], serde_json::json!([1, 0, 0, 0, 0, 0, 0, 0, 0]));
    assert_eq!(v["result"]["verdict"], serde_json::json!({ "finite": 0 }));
    round_trips::<BassReport>(&v["result"]);
}

#[test]
fn documents_round_trip_and_chain() {
    let (c, v) = run(&["dm", "make", "--ring", "Z/8", "--module", "[3,1]", "--d", "[[0,4],[0,0]]"]);
    assert_eq!(c, 0);
    round_trips::<DiffMod>(&v["result"]);
    let path = scratch("dm.json");
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let (c, h) = run(&["dm", "cohomology", "--input", p]);
    assert_eq!(c, 0);
    round_trips::<Module>(&h["result"]["module"]);
    let (c, w) = run(&["fun", "exp", "--input", p, "--from", "-1", "--to", "2"]);
    assert_eq!(c, 0);
    round_trips::<Complex>(&w["result"]);
    let (c, _) = run(&["dm", "contractible", "--input", p]);
    assert_eq!(c, 0);

    let (c, y) = run(&["cx", "make", "--ring", "Z/4", "--lo", "-1", "--term", "[2]", "--term", "[2,1]", "--diff", "[[2],[1]]"]);
    assert_eq!(c, 0);
    round_trips::<Complex>(&y["result"]);
    let cpath = scratch("cx.json");
    std::fs::write(&cpath, serde_json::to_string(&y).unwrap()).unwrap();
    let (c, comp) = run(&["fun", "comp", "--input", cpath.to_str().unwrap()]);
    assert_eq!(c, 0);
    round_trips::<DiffMod>(&comp["result"]);
    let (c, l) = run(&["fun", "lemma44", "--input", cpath.to_str().unwrap(), "--with", "[1,2]"]);
    assert_eq!(c, 0);
    assert_eq!(l["result"]["holds"], true);
    let (c, a) = run(&["fun", "adjcheck", "--variant", "exp-cocomp", "--input", p, "--target", cpath.to_str().unwrap()]);
    assert_eq!(c, 3, "ring mismatch between Z/8 and Z/4 is a precondition failure: {a}");
}

#[test]
fn module_commands() {
    let (c, v) = run(&["mod", "normalize", "--ring", "Z/12", "--module", "[[1,2],[1]]"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["length"], 4);
    let (c, v) = run(&["mod", "hom", "--ring", "Z/8", "--module", "[3,1]", "--other", "[2]"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["normal_form"]["invariants"], serde_json::json!([[2, 1]]));
    let (c, v) = run(&["mod", "ker", "--ring", "Z/4", "--dom", "[2]", "--cod", "[2]", "--matrix", "[[2]]"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["module"]["invariants"], serde_json::json!([[1]]));
    let (c, v) = run(&["mod", "essential", "--ring", "Z/4", "--module", "[2,1]", "--gens", "[[2,0]]"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["essential"], false);
    let (c, v) = run(&["mod", "essential", "--ring", "Z/4", "--module", "[2,1]", "--gens", "[[2,0],[0,1]]"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["essential"], true);
    for sub in ["soc", "env"] {
        assert_eq!(code(&["mod", sub, "--ring", "F2[x]/(x^3)", "--module", "[3,1]"]), 0);
    }
    assert_eq!(code(&["mod", "tensor", "--ring", "Q[x]/(x^2)", "--module", "[2]", "--other", "[1]"]), 0);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["ring", "info", "--ring", "Z/1"]), 2);
    assert_eq!(code(&["ring", "info", "--ring", "R[x]"]), 2);
    assert_eq!(code(&["mod", "normalize", "--ring", "Z/4", "--module", "[3]"]), 3);
    assert_eq!(code(&["mod", "normalize", "--ring", "Z/4", "--module", "[2"]), 2);
    assert_eq!(code(&["dm", "make", "--ring", "Z/4", "--module", "[2]", "--d", "[[1]]"]), 3);
    assert_eq!(code(&["dm", "strip", "--ring", "Z/4", "--module", "[1]"]), 3);
    assert_eq!(code(&["dm", "minimal", "--ring", "Z/4", "--module", "[1]"]), 3);
    assert_eq!(code(&["fun", "prop45", "--ring", "Z/4", "--term", "[2]", "--term", "[2]", "--diff", "[[1]]"]), 3);
    assert_eq!(code(&["verify", "--prop", "P9.9"]), 2);
    assert_eq!(code(&["verify"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
}

#[test]
fn verify_example_and_report_schema() {
    let (c, v) = run(&["verify", "--prop", "P3.3", "--trials", "500", "--seed", "0", "--ring", "Z/4"]);
    assert_eq!(c, 0);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    let report = &v["result"]["reports"][0];
    round_trips::<SuiteReport>(report);
    assert_eq!(report["config"]["gen"]["rings"], serde_json::json!(["Z/4"]));
    assert!(report.get("wall_time_ms").is_none());
    let (_, t) = run(&["verify", "--prop", "C5.3", "--timing"]);
    assert!(t["result"]["reports"][0]["wall_time_ms"].is_u64());
}

#[test]
fn dm_queries() {
    let base = ["--ring", "Z/4", "--module", "[2,2]", "--d", "[[0,0],[1,0]]"];
    let q = |sub: &str| {
        let mut a = vec!["dm", sub];
        a.extend_from_slice(&base);
        run(&a)
    };
    assert_eq!(q("injective").1["result"]["injective"], true);
    assert_eq!(q("minimal").1["result"]["minimal"], false);
    assert_eq!(q("contractible").1["result"]["contractible"], true);
    let (c, s) = q("strip");
    assert_eq!(c, 0);
    assert_eq!(s["result"]["verified"], true);
    assert_eq!(q("mu").1["result"]["total"], 2);
    let (c, t) = run(&["fun", "cocomp-trunc", "--ring", "Z/4", "--module", "[1]", "--length", "3"]);
    assert_eq!(c, 0);
    assert_eq!(t["result"]["mu_d"]["total"], 4);
    assert_eq!(t["result"]["provenance"]["certified"], false);
}
