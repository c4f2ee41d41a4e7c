#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use asyncdyn_core::netio::{compile, parse_network, parse_state_set, parse_truth_table};
use asyncdyn_core::schedule::parse_schedule;
use asyncdyn_core::{flow, GeneratorFunction, StateSet, StateVector, UpdateMask};
use serde_json::Value;

pub fn network(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "networks", name]
        .iter()
        .collect();
    path.to_str().unwrap().to_string()
}

pub fn load(name: &str) -> GeneratorFunction {
    let text = std::fs::read_to_string(network(name)).unwrap();
    if name.ends_with(".tt") {
        parse_truth_table(&text).unwrap()
    } else {
        compile(&parse_network(&text).unwrap()).unwrap()
    }
}

/// `--network` or `--table` for a sample network.
pub fn source(name: &str) -> [String; 2] {
    let flag = if name.ends_with(".tt") {
        "--table"
    } else {
        "--network"
    };
    [flag.to_string(), network(name)]
}

pub fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_asyncdyn"));
    cmd.args(args).env_remove("ASYNCDYN_MAX_N");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

pub fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

/// Runs with a sample network prepended.
pub fn run_on(name: &str, args: &[&str]) -> Output {
    let src = source(name);
    let mut all: Vec<&str> = vec![args[0], &src[0], &src[1]];
    all.extend_from_slice(&args[1..]);
    run(&all)
}

pub fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

pub fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

pub fn set_of(value: &Value, n: usize) -> StateSet {
    let items: Vec<&str> = value
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    parse_state_set(&format!("{{{}}}", items.join(",")), n).unwrap()
}

pub fn state_of(value: &Value) -> StateVector {
    value.as_str().unwrap().parse().unwrap()
}

/// Simulates a witness object `{state, schedule}` and returns (orbit, ω).
pub fn resimulate(phi: &GeneratorFunction, witness: &Value) -> (StateSet, StateSet) {
    let mu = state_of(&witness["state"]);
    let rho = parse_schedule(witness["schedule"].as_str().unwrap(), Some(phi.n())).unwrap();
    let trajectory = flow(phi, mu, &rho).unwrap();
    (trajectory.orbit_set(), trajectory.omega_set().states)
}

pub fn apply(phi: &GeneratorFunction, state: &Value, mask: &Value) -> StateVector {
    let mask: UpdateMask = mask.as_str().unwrap().parse().unwrap();
    phi.apply_mask(state_of(state), mask).unwrap()
}
