use std::path::Path;

use asyncdyn_core::netio::{
    compile_capped, parse_network, parse_state_set, parse_truth_table_capped,
};
use asyncdyn_core::schedule::{parse_schedule, parse_time};
use asyncdyn_core::{DimensionCap, GeneratorFunction, StateSet, StateVector, Time, TimedSchedule};

use crate::error::{CliError, CliResult, ExitKind};

pub const MAX_N_ENV: &str = "ASYNCDYN_MAX_N";

/// Dimension cap from the environment, or the default.
pub fn dimension_cap() -> CliResult<DimensionCap> {
    match std::env::var(MAX_N_ENV) {
        Err(_) => Ok(DimensionCap::default()),
        Ok(value) => {
            let n: usize = value.trim().parse().map_err(|_| {
                CliError::new(
                    ExitKind::Capacity,
                    format!("{MAX_N_ENV}: invalid value `{value}`"),
                )
            })?;
            DimensionCap::new(n)
                .map_err(|e| CliError::new(ExitKind::Capacity, format!("{MAX_N_ENV}: {e}")))
        }
    }
}

/// A network argument is a path when such a file exists, otherwise the
/// document text itself.
fn read_source(arg: &str, inline_marker: &str) -> CliResult<(String, String)> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::new(ExitKind::Parse, format!("{arg}: {e}")))?;
        Ok((arg.to_string(), text))
    } else if arg.contains(inline_marker) {
        Ok(("<inline>".to_string(), arg.to_string()))
    } else {
        Err(CliError::new(
            ExitKind::Parse,
            format!("{arg}: no such file"),
        ))
    }
}

pub fn load_network(
    network: Option<&str>,
    table: Option<&str>,
    cap: DimensionCap,
) -> CliResult<GeneratorFunction> {
    match (network, table) {
        (Some(arg), None) => {
            let (name, text) = read_source(arg, "vars")?;
            let doc = parse_network(&text).map_err(|e| CliError::network(&name, e.into()))?;
            compile_capped(&doc, cap).map_err(|e| CliError::network(&name, e))
        }
        (None, Some(arg)) => {
            let (name, text) = read_source(arg, "n=")?;
            parse_truth_table_capped(&text, cap).map_err(|e| CliError::network(&name, e))
        }
        _ => Err(CliError::new(
            ExitKind::Parse,
            "exactly one of --network and --table is required",
        )),
    }
}

pub fn state(text: &str, n: usize) -> CliResult<StateVector> {
    StateVector::parse_with_dim(text.trim(), n)
        .map_err(|e| CliError::new(ExitKind::Parse, format!("--init: {e}")))
}

pub fn schedule(text: &str, n: usize) -> CliResult<TimedSchedule> {
    parse_schedule(text, Some(n))
        .map_err(|e| CliError::new(ExitKind::Schedule, format!("--schedule: {e}")))
}

pub fn time(flag: &str, text: &str) -> CliResult<Time> {
    parse_time(text)
        .ok_or_else(|| CliError::new(ExitKind::Parse, format!("{flag}: invalid time `{text}`")))
}

/// A nonempty state set of width `n`.
pub fn set(flag: &str, text: &str, n: usize) -> CliResult<StateSet> {
    let set = parse_state_set(text, n)
        .map_err(|e| CliError::new(ExitKind::SetArgument, format!("{flag}: {e}")))?;
    set.require_nonempty()
        .map_err(|e| CliError::new(ExitKind::SetArgument, format!("{flag}: {e}")))?;
    Ok(set)
}
