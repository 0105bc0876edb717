//! One check per acceptance criterion, each run through the `difmod` binary
//! and timed.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

fn difmod(args: &[&str]) -> (i32, Vec<u8>, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_difmod")).args(args).output().expect("binary runs");
    let elapsed = start.elapsed();
    if !out.status.success() {
        eprintln!("{}", String::from_utf8_lossy(&out.stderr));
    }
    (out.status.code().unwrap_or(-1), out.stdout, elapsed)
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("report is JSON")
}

struct Outcome {
    id: usize,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn report(id: usize, name: &'static str, passed: bool, detail: String) -> Outcome {
    println!("{} criterion {id} ({name}): {detail}", if passed { "PASS" } else { "FAIL" });
    Outcome { id, name, passed, detail }
}

fn suite(args: &[&str]) -> (bool, Value, Duration) {
    let mut full = vec!["verify"];
    full.extend_from_slice(args);
    let (code, out, t) = difmod(&full);
    let v = json(&out);
    (code == 0 && v["result"]["failures"] == 0, v, t)
}

fn counter(v: &Value, k: usize, name: &str) -> u64 {
    v["result"]["reports"][k]["counters"][name].as_u64().unwrap_or(0)
}

fn residue_field_resolution() -> Outcome {
    let mut ok = true;
    let mut total = Duration::ZERO;
    for (ring, pi) in [("Z/4", "2"), ("F2[x]/(x^2)", "x")] {
        let (code, out, t) = difmod(&["cx", "resolve", "--ring", ring, "--module", "[1]", "--length", "10"]);
        total += t;
        let v = json(&out);
        let res = &v["result"]["resolution"];
        let terms = res["complex"]["terms"].as_array().cloned().unwrap_or_default();
        let diffs = res["complex"]["diffs"].as_array().cloned().unwrap_or_default();
        ok &= code == 0
            && terms.len() == 11
            && terms.iter().all(|t| t["invariants"] == serde_json::json!([[2]]))
            && diffs.len() == 10
            && diffs.iter().chain(std::iter::once(&res["next_diff"])).all(|d| d["matrix"] == serde_json::json!([[pi]]))
            && res["period"]["length"] == 1
            && v["result"]["verdict"] == "infinite";
    }
    ok &= total < Duration::from_secs(1);
    report(1, "residue-field resolution", ok, format!("J^i = R, d = pi, period 1 over Z/4 and F2[x]/(x^2) in {total:?}"))
}

fn bass_cross_validation() -> Outcome {
    let (ok, v, t) = suite(&[
        "--prop", "P5.1", "--trials", "200", "--seed", "2", "--ring", "Z/4", "--ring", "Z/8", "--ring", "F3[x]/(x^3)",
        "--max-dim", "4",
    ]);
    let agree = counter(&v, 0, "bass_routes_agree");
    let ok = ok && agree == 200 && t < Duration::from_secs(60);
    report(2, "Bass cross-validation", ok, format!("{agree}/200 modules with route A = route B through i = 8 in {t:?}"))
}

fn contractibility() -> Outcome {
    let (ok, v, t) = suite(&["--prop", "P3.3", "--trials", "500", "--seed", "0", "--max-dim", "6"]);
    let anc = counter(&v, 0, "acyclic_noncontractible");
    let ok = ok && anc >= 1 && t < Duration::from_secs(120);
    report(3, "contractibility equivalence", ok, format!("500 trials, {anc} acyclic non-contractible, in {t:?}"))
}

fn cohomology() -> Outcome {
    let (ok, v, t) = suite(&["--prop", "P3.4", "--trials", "200", "--seed", "0"]);
    let (c, d) = (counter(&v, 0, "complex_checked"), counter(&v, 0, "dm_checked"));
    let ok = ok && c == 200 && d == 200 && t < Duration::from_secs(60);
    report(4, "cohomology isomorphisms", ok, format!("{c} complexes, {d} differential modules in {t:?}"))
}

fn adjunctions() -> Outcome {
    let common = ["--trials", "100", "--seed", "0", "--ring", "Z/4", "--max-dim", "4"];
    let mut a = vec!["--prop", "P4.1"];
    a.extend_from_slice(&common);
    let mut b = vec!["--prop", "P3.2"];
    b.extend_from_slice(&common);
    let (ok1, v1, t1) = suite(&a);
    let (ok2, v2, t2) = suite(&b);
    let (n1, n2) = (counter(&v1, 0, "adjunction_checked"), counter(&v2, 0, "adjunction_checked"));
    let ok = ok1 && ok2 && n1 == 100 && n2 == 100 && t1 + t2 < Duration::from_secs(60);
    report(5, "adjunctions", ok, format!("tensor-hom {n1}/100, exp-cocomp {n2}/100 in {:?}", t1 + t2))
}

fn main_theorem() -> Outcome {
    let (ok1, v1, t1) = suite(&["--prop", "T5.2", "--trials", "100", "--seed", "0"]);
    let (ok2, _, t2) = suite(&["--prop", "P6.3", "--trials", "100", "--seed", "0"]);
    let free = counter(&v1, 0, "free");
    let ok = ok1 && ok2 && free > 0 && free < 100 && t1 + t2 < Duration::from_secs(120);
    report(6, "finite injective dimension desk check", ok, format!("{free} free of 100 modules, 100 minimal complexes in {:?}", t1 + t2))
}

fn exactness() -> Outcome {
    let (ok, v, t) = suite(&["--prop", "P3.2", "--trials", "100", "--seed", "7"]);
    let (ch, dif) = (counter(&v, 0, "ses_ch_exact"), counter(&v, 0, "ses_dif_exact"));
    let ok = ok && ch == 100 && dif == 100 && t < Duration::from_secs(60);
    report(7, "exactness preservation", ok, format!("{ch} sequences in Ch, {dif} in Dif in {t:?}"))
}

fn full_run() -> Outcome {
    let (c1, out1, t1) = difmod(&["verify", "--all", "--seed", "42"]);
    let (c2, out2, t2) = difmod(&["verify", "--all", "--seed", "42"]);
    let v = json(&out1);
    let ok = c1 == 0 && c2 == 0 && v["result"]["failures"] == 0 && out1 == out2 && t1 < Duration::from_secs(300);
    report(8, "full verify run", ok, format!("failures {}, identical rerun {}, in {t1:?} and {t2:?}", v["result"]["failures"], out1 == out2))
}

#[test]
fn acceptance() {
    let outcomes = [
        residue_field_resolution(),
        bass_cross_validation(),
        contractibility(),
        cohomology(),
        adjunctions(),
        main_theorem(),
        exactness(),
        full_run(),
    ];
    let failed: Vec<String> =
        outcomes.iter().filter(|o| !o.passed).map(|o| format!("{} ({}): {}", o.id, o.name, o.detail)).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
