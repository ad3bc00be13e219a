use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fock-duality")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn sp_pairs_table() {
    let o = run(&["pairs", "--d", "2", "--k", "1", "--pair", "sp-sp"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "sp-sp pairs, d=2, k=1: 2 entries\n\nλ=(0)  w=(1)\n  (empty)    []\n\nλ=(1)  w=(0)\n  []    (empty)\n"
    );
}

#[test]
fn neer_entry_listed() {
    let v = json(&["pairs", "--d", "13", "--k", "4", "--pair", "o-o", "--format", "json"]);
    let hit = v["entries"].as_array().unwrap().iter().any(|e| {
        e["lambda"] == serde_json::json!(["4", "3", "3", "2", "1", "0"])
            && e["w"] == serde_json::json!(["11/2", "7/2", "5/2", "3/2"])
            && e["marker"] == "w_last"
    });
    assert!(hit);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["pairs", "--d", "0", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["pairs", "--d", "2"]).status.code(), Some(2));
    assert_eq!(run(&["pairs", "--d", "2", "--k", "1", "--pair", "so-so"]).status.code(), Some(2));
    assert_eq!(run(&["decompose", "--d", "6", "--k", "5"]).status.code(), Some(3));
    assert_eq!(run(&["hw", "--d", "3", "--k", "1", "--lambda", "1,1,1,1"]).status.code(), Some(2));
}

#[test]
fn decompose_o_o_d3_k1() {
    let v = json(&["decompose", "--d", "3", "--k", "1", "--format", "json"]);
    let recs = v["records"].as_array().unwrap();
    let mut dims: Vec<u64> = recs.iter().map(|r| r["dim"].as_u64().unwrap()).collect();
    dims.sort();
    assert_eq!(dims, vec![1, 1, 3, 3]);
    assert_eq!(v["checks"]["multiplicity_free"], true);
    assert_eq!(v["checks"]["dimension_sum"], true);
    assert_eq!(v["checks"]["prediction_diff"], serde_json::json!([]));
}

#[test]
fn decompose_gl_gl_conjugate() {
    let v = json(&["decompose", "--d", "2", "--k", "2", "--pair", "gl-gl", "--format", "json"]);
    let pairs: Vec<(Value, Value)> =
        v["records"].as_array().unwrap().iter().map(|r| (r["lambda"].clone(), r["w"].clone())).collect();
    assert!(pairs.contains(&(serde_json::json!(["1", "1"]), serde_json::json!(["2", "0"]))));
    assert_eq!(pairs.len(), 6);
}

#[test]
fn output_is_deterministic() {
    let args = ["decompose", "--d", "4", "--k", "2", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["verify", "--suite", "tensor"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn verify_suites_pass() {
    let o = run(&["verify", "--suite", "involutions", "--max-dk", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&["verify", "--suite", "quasispin", "--d", "3", "--format", "json"]);
    assert_eq!(v["all_pass"], true);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["name"] == "Q₀ = ½(n − d) on n-particle states"));
    let v = json(&["verify", "--suite", "tensor", "--format", "json"]);
    assert_eq!(v["all_pass"], true);
}

#[test]
fn verify_guard() {
    assert_eq!(run(&["verify", "--suite", "car", "--max-dk", "30", "--d", "30"]).status.code(), Some(3));
}

#[test]
fn hw_state_json_round_trips() {
    let v = json(&["hw", "--d", "4", "--k", "2", "--lambda", "1,1", "--format", "json"]);
    assert_eq!(v["w"], serde_json::json!(["2", "0"]));
    assert_eq!(v["raising_b_annihilates"], true);
    let state = fock_duality::StateVector::from_json(&v["state"]).unwrap();
    assert_eq!(state.to_json(), v["state"]);
    let g = json(&["hw", "--d", "2", "--k", "1", "--pair", "sp-sp", "--generators", "--format", "json"]);
    assert_eq!(g["side_b"].as_array().unwrap().len(), 3);
    for gen in g["side_b"].as_array().unwrap() {
        let op = fock_duality::QuadraticOperator::from_json(&gen["operator"]).unwrap();
        assert_eq!(op.to_json(), gen["operator"]);
    }
}

#[test]
fn pairing_table_json_round_trips() {
    let v = json(&["pairs", "--d", "4", "--k", "2", "--format", "json"]);
    let t: fock_duality::diagram::PairingTable = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&t).unwrap(), v);
}

#[test]
fn out_file() {
    let dir = std::env::temp_dir().join(format!("fock-duality-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pairs.txt");
    let o = run(&["pairs", "--d", "3", "--k", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("o-o pairs, d=3, k=1"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn render_rows() {
    let o = run(&["render", "--w", "3/2,-1/2"]);
    assert_eq!(stdout(&o), "|[]\n-|\n");
    let o = run(&["render", "--lambda", "2,1"]);
    assert_eq!(stdout(&o), "[][]\n[]\n");
}
