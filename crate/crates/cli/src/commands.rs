use std::fmt::Write;

use asyncdyn_core::analysis::{Analyzer, Attractiveness, BasinReport, InvarianceReport, Witness};
use asyncdyn_core::oracle::{Oracle, OracleBudget};
use asyncdyn_core::portrait::{
    build_graph, build_graph_parallel, fair_recurrent_within, to_dot, GraphDump, TransitionGraph,
};
use asyncdyn_core::{
    flow, DimensionCap, GeneratorFunction, Segment, StateSet, StateVector, Trajectory,
};
use serde::Serialize;

use crate::error::{CliError, CliResult, ExitKind};
use crate::input;
use crate::{
    ClassifyArgs, Common, Format, OmegaArgs, OracleArgs, PortraitArgs, SetArgs, SimulateArgs,
};

fn network(common: &Common, cap: DimensionCap) -> CliResult<GeneratorFunction> {
    input::load_network(
        common.source.network.as_deref(),
        common.source.table.as_deref(),
        cap,
    )
}

fn json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("reports serialize");
    out.push('\n');
    out
}

fn no_dot(format: Format) -> CliResult<()> {
    if format == Format::Dot {
        Err(CliError::new(
            ExitKind::Parse,
            "--format dot is only available for `portrait`",
        ))
    } else {
        Ok(())
    }
}

fn full_space(g: &TransitionGraph) -> StateSet {
    StateSet::full(g.n()).expect("graph dimension is valid")
}

pub fn portrait(args: &PortraitArgs, cap: DimensionCap) -> CliResult<String> {
    let phi = network(&args.common, cap)?;
    let g = if args.parallel {
        build_graph_parallel(&phi)
    } else {
        build_graph(&phi)
    };
    if args.format == Format::Dot {
        return Ok(to_dot(&g));
    }
    let fair = fair_recurrent_within(&g, &full_space(&g)).expect("same dimension");
    if args.format == Format::Json {
        return Ok(json(&GraphDump::new(&g, &fair)));
    }
    let mut out = String::new();
    for mu in g.states() {
        let targets: Vec<String> = g
            .edges_from(mu)
            .expect("same dimension")
            .iter()
            .map(|e| e.target.to_string())
            .collect();
        let unstable = g.unstable_set(mu).expect("same dimension");
        if targets.is_empty() {
            let _ = writeln!(out, "{mu} U={unstable}: fixed");
        } else {
            let _ = writeln!(out, "{mu} U={unstable}: {}", targets.join(" "));
        }
    }
    for id in fair.sustainable_ids() {
        let _ = writeln!(out, "sustainable: {}", fair.sccs().component_set(id));
    }
    Ok(out)
}

struct Run {
    initial: StateVector,
    trajectory: Trajectory,
}

fn run(common: &Common, init: &str, schedule: &str, cap: DimensionCap) -> CliResult<Run> {
    let phi = network(common, cap)?;
    let initial = input::state(init, phi.n())?;
    let rho = input::schedule(schedule, phi.n())?;
    let trajectory = flow(&phi, initial, &rho).expect("dimensions checked");
    Ok(Run {
        initial,
        trajectory,
    })
}

#[derive(Serialize)]
struct TailReport {
    start: usize,
    length: usize,
    settle_time: String,
}

#[derive(Serialize)]
struct SimulateReport {
    initial: StateVector,
    schedule: String,
    horizon: String,
    segments: Vec<Segment>,
    tail: TailReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega: Option<StateSet>,
    final_value: Option<StateVector>,
}

pub fn simulate(args: &SimulateArgs, cap: DimensionCap) -> CliResult<String> {
    no_dot(args.format)?;
    let Run {
        initial,
        trajectory,
    } = run(&args.common, &args.init, &args.schedule, cap)?;
    let rho = trajectory.schedule();
    let horizon = match &args.horizon {
        Some(text) => input::time("--horizon", text)?,
        None => rho.time(rho.lasso().prefix().len() + 2 * rho.lasso().cycle().len()),
    };
    let segments = trajectory.segments(horizon);
    let tail = trajectory.tail();
    let omega = trajectory.omega_set();
    if args.format == Format::Json {
        return Ok(json(&SimulateReport {
            initial,
            schedule: rho.to_string(),
            horizon: horizon.to_string(),
            segments,
            tail: TailReport {
                start: tail.start,
                length: tail.length,
                settle_time: omega.settle_time.to_string(),
            },
            omega: args.omega.then(|| omega.states.clone()),
            final_value: trajectory.final_value(),
        }));
    }
    let mut out = String::new();
    for segment in &segments {
        let _ = writeln!(out, "{segment}");
    }
    let _ = writeln!(
        out,
        "tail: start {}, length {}, settle time {}",
        tail.start, tail.length, omega.settle_time
    );
    if args.omega {
        let _ = writeln!(out, "omega: {}", omega.states);
    }
    Ok(out)
}

#[derive(Serialize)]
struct OmegaReport {
    initial: StateVector,
    schedule: String,
    omega: StateSet,
    settle_time: String,
    final_value: Option<StateVector>,
}

pub fn omega(args: &OmegaArgs, cap: DimensionCap) -> CliResult<String> {
    no_dot(args.format)?;
    let Run {
        initial,
        trajectory,
    } = run(&args.common, &args.init, &args.schedule, cap)?;
    let omega = trajectory.omega_set();
    if args.format == Format::Json {
        return Ok(json(&OmegaReport {
            initial,
            schedule: trajectory.schedule().to_string(),
            omega: omega.states,
            settle_time: omega.settle_time.to_string(),
            final_value: trajectory.final_value(),
        }));
    }
    Ok(format!("{}\n", omega.states))
}

struct Query {
    phi: GeneratorFunction,
    set: StateSet,
}

fn query(args: &SetArgs, cap: DimensionCap) -> CliResult<Query> {
    no_dot(args.format)?;
    let phi = network(&args.common, cap)?;
    let set = input::set("--set", &args.set, phi.n())?;
    Ok(Query { phi, set })
}

fn write_witnesses(out: &mut String, title: &str, witnesses: &[Witness]) {
    if witnesses.is_empty() {
        return;
    }
    let _ = writeln!(out, "{title}:");
    for w in witnesses {
        let _ = writeln!(out, "  {}: {}", w.state, w.schedule);
    }
}

fn write_invariance(out: &mut String, report: &InvarianceReport) {
    let _ = writeln!(out, "p-invariant: {}", report.p_invariant);
    let _ = writeln!(out, "n-invariant: {}", report.n_invariant);
    if let Some(c) = &report.counterexample {
        let _ = writeln!(
            out,
            "counterexample: {} under {} -> {}",
            c.state, c.mask, c.target
        );
    }
}

fn write_basins(out: &mut String, report: &BasinReport) {
    let _ = writeln!(out, "p-basin: {}", report.p_basin);
    let _ = writeln!(out, "n-basin: {}", report.n_basin);
    let _ = writeln!(out, "p-attraction: {}", report.p_class);
    let _ = writeln!(out, "n-attraction: {}", report.n_class);
}

pub fn invariance(args: &SetArgs, cap: DimensionCap) -> CliResult<String> {
    let Query { phi, set } = query(args, cap)?;
    let g = build_graph(&phi);
    let report = Analyzer::new(&g)
        .invariance(&set)
        .expect("dimensions checked");
    if args.format == Format::Json {
        return Ok(json(&report));
    }
    let mut out = format!("set: {}\n", report.set);
    write_invariance(&mut out, &report);
    write_witnesses(&mut out, "witnesses", &report.witnesses);
    if !report.unconfinable.is_empty() {
        let list: Vec<String> = report.unconfinable.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "unconfinable: {}", list.join(" "));
    }
    Ok(out)
}

pub fn basin(args: &SetArgs, cap: DimensionCap) -> CliResult<String> {
    let Query { phi, set } = query(args, cap)?;
    let g = build_graph(&phi);
    let report = Analyzer::new(&g).basins(&set).expect("dimensions checked");
    if args.format == Format::Json {
        return Ok(json(&report));
    }
    let mut out = format!("set: {}\n", report.set);
    write_basins(&mut out, &report);
    write_witnesses(&mut out, "p-witnesses", &report.p_witnesses);
    write_witnesses(&mut out, "n-escapes", &report.n_escapes);
    Ok(out)
}

#[derive(Serialize)]
struct AttractionQuery {
    set: StateSet,
    p_attracted: bool,
    n_attracted: bool,
}

#[derive(Serialize)]
struct ClassifyReport {
    set: StateSet,
    p_invariant: bool,
    n_invariant: bool,
    p_basin: StateSet,
    n_basin: StateSet,
    p_class: Attractiveness,
    n_class: Attractiveness,
    queries: Vec<AttractionQuery>,
}

pub fn classify(args: &ClassifyArgs, cap: DimensionCap) -> CliResult<String> {
    let Query { phi, set } = query(&args.inner, cap)?;
    let queries = args
        .query
        .iter()
        .map(|text| input::set("--query", text, phi.n()))
        .collect::<CliResult<Vec<_>>>()?;
    let g = build_graph(&phi);
    let analyzer = Analyzer::new(&g);
    let invariance = analyzer.invariance(&set).expect("dimensions checked");
    let basins = analyzer.basins(&set).expect("dimensions checked");
    let queries: Vec<AttractionQuery> = queries
        .into_iter()
        .map(|b| AttractionQuery {
            p_attracted: basins.p_attracts(&b),
            n_attracted: basins.n_attracts(&b),
            set: b,
        })
        .collect();
    if args.inner.format == Format::Json {
        return Ok(json(&ClassifyReport {
            set,
            p_invariant: invariance.p_invariant,
            n_invariant: invariance.n_invariant,
            p_basin: basins.p_basin,
            n_basin: basins.n_basin,
            p_class: basins.p_class,
            n_class: basins.n_class,
            queries,
        }));
    }
    let mut out = format!("set: {set}\n");
    write_invariance(&mut out, &invariance);
    write_basins(&mut out, &basins);
    for q in &queries {
        let _ = writeln!(
            out,
            "query {}: p-attracted {}, n-attracted {}",
            q.set, q.p_attracted, q.n_attracted
        );
    }
    Ok(out)
}

#[derive(Serialize)]
struct OmegaEntry {
    state: StateVector,
    omega_sets: Vec<StateSet>,
}

#[derive(Serialize)]
struct OracleBasins {
    set: StateSet,
    p_basin: StateSet,
    n_basin: StateSet,
    p_invariant: bool,
}

#[derive(Serialize)]
struct OracleReport {
    n: usize,
    max_prefix: usize,
    max_cycle: usize,
    sustainable_sets: Vec<StateSet>,
    states: Vec<OmegaEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basins: Option<OracleBasins>,
}

fn capacity(err: asyncdyn_core::Error) -> CliError {
    CliError::new(ExitKind::Capacity, format!("oracle: {err}"))
}

pub fn oracle(args: &OracleArgs, cap: DimensionCap) -> CliResult<String> {
    no_dot(args.format)?;
    let phi = network(&args.common, cap)?;
    let set = args
        .set
        .as_deref()
        .map(|text| input::set("--set", text, phi.n()))
        .transpose()?;
    let defaults = OracleBudget::for_dimension(phi.n()).map_err(capacity)?;
    let budget = OracleBudget::new(
        args.max_prefix.unwrap_or(defaults.max_prefix()),
        args.max_cycle.unwrap_or(defaults.max_cycle()),
        phi.n(),
    )
    .map_err(capacity)?;
    let oracle = Oracle::new(&phi, budget).map_err(capacity)?;
    let states = phi
        .states()
        .map(|mu| OmegaEntry {
            state: mu,
            omega_sets: oracle.omega_sets(mu).expect("same dimension"),
        })
        .collect();
    let basins = set.map(|a| {
        let (p_basin, n_basin) = oracle.basins(&a).expect("same dimension");
        OracleBasins {
            p_invariant: oracle.is_p_invariant(&a).expect("same dimension"),
            set: a,
            p_basin,
            n_basin,
        }
    });
    let report = OracleReport {
        n: phi.n(),
        max_prefix: budget.max_prefix(),
        max_cycle: budget.max_cycle(),
        sustainable_sets: oracle.sustainable_sets(),
        states,
        basins,
    };
    if args.format == Format::Json {
        return Ok(json(&report));
    }
    let mut out = format!(
        "budget: prefix {}, cycle {}\n",
        report.max_prefix, report.max_cycle
    );
    for s in &report.sustainable_sets {
        let _ = writeln!(out, "sustainable: {s}");
    }
    for entry in &report.states {
        let sets: Vec<String> = entry.omega_sets.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "omega {}: {}", entry.state, sets.join(" "));
    }
    if let Some(b) = &report.basins {
        let _ = writeln!(out, "set: {}", b.set);
        let _ = writeln!(out, "p-basin: {}", b.p_basin);
        let _ = writeln!(out, "n-basin: {}", b.n_basin);
        let _ = writeln!(out, "p-invariant: {}", b.p_invariant);
    }
    Ok(out)
}
