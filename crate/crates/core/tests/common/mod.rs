#![allow(dead_code)]

use asyncdyn_core::analysis::Analyzer;
use asyncdyn_core::portrait::{build_graph, fair_recurrent_within, Coverage, TransitionGraph};
use asyncdyn_core::{
    flow, GeneratorFunction, LassoSchedule, StateSet, StateVector, Time, TimedSchedule, UpdateMask,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

pub fn sv(s: &str) -> StateVector {
    s.parse().unwrap()
}

pub fn set(n: usize, items: &[&str]) -> StateSet {
    StateSet::from_states(n, items.iter().map(|s| sv(s))).unwrap()
}

pub fn phi_fig1() -> GeneratorFunction {
    GeneratorFunction::from_table(2, vec![0b11, 0b11, 0b10, 0b01]).unwrap()
}

pub fn phi_omega() -> GeneratorFunction {
    GeneratorFunction::from_table(2, vec![0b11, 0b00, 0b00, 0b11]).unwrap()
}

pub fn phi_not() -> GeneratorFunction {
    GeneratorFunction::from_table(2, vec![0b11, 0b10, 0b01, 0b00]).unwrap()
}

/// Φ(μ1, μ2) = (μ1, !μ2)
pub fn phi_half() -> GeneratorFunction {
    GeneratorFunction::from_table(2, vec![0b01, 0b00, 0b11, 0b10]).unwrap()
}

/// Every nonempty subset of {0,1}^n, n ≤ 4.
pub fn all_nonempty_sets(n: usize) -> Vec<StateSet> {
    let count = 1u32 << n;
    (1u64..(1u64 << count))
        .map(|code| {
            let members = (0..count).filter(|&v| code & (1 << v) != 0);
            StateSet::from_states(n, members.map(|v| StateVector::new(n, v).unwrap())).unwrap()
        })
        .collect()
}

// ---- random generation (seeded, for the acceptance loops) ----

pub fn random_phi(rng: &mut StdRng, n: usize) -> GeneratorFunction {
    let table = (0..1u32 << n)
        .map(|_| rng.random_range(0..1u32 << n))
        .collect();
    GeneratorFunction::from_table(n, table).unwrap()
}

pub fn random_set(rng: &mut StdRng, n: usize) -> StateSet {
    loop {
        let members = (0..1u32 << n).filter(|_| rng.random_bool(0.4));
        let s = StateSet::from_states(n, members.map(|v| StateVector::new(n, v).unwrap())).unwrap();
        if !s.is_empty() {
            return s;
        }
    }
}

pub fn random_state(rng: &mut StdRng, n: usize) -> StateVector {
    StateVector::new(n, rng.random_range(0..1u32 << n)).unwrap()
}

/// Random progressive lasso with random rational firing times.
pub fn random_schedule(rng: &mut StdRng, n: usize) -> TimedSchedule {
    let prefix: Vec<u32> = (0..rng.random_range(0..=3))
        .map(|_| rng.random_range(0..1u32 << n))
        .collect();
    let cycle: Vec<u32> = (0..rng.random_range(1..=4))
        .map(|_| rng.random_range(0..1u32 << n))
        .collect();
    let steps: Vec<(i64, i64)> = (0..prefix.len() + cycle.len() + 1)
        .map(|_| (rng.random_range(1..=4), rng.random_range(1..=3)))
        .collect();
    build_schedule(n, prefix, cycle, rng.random_range(-3..=3), &steps)
}

/// Assembles a schedule, repairing progressivity by adding the missing
/// coordinates to the last cycle mask. `steps` gives positive time gaps
/// (numerator, denominator); the last one closes the period.
pub fn build_schedule(
    n: usize,
    prefix: Vec<u32>,
    mut cycle: Vec<u32>,
    t0: i64,
    steps: &[(i64, i64)],
) -> TimedSchedule {
    let full = (1u32 << n) - 1;
    let covered = cycle.iter().fold(0, |a, m| a | m);
    *cycle.last_mut().unwrap() |= full & !covered;
    let masks = |v: Vec<u32>| {
        v.into_iter()
            .map(|b| UpdateMask::new(n, b).unwrap())
            .collect::<Vec<_>>()
    };
    let (p, c) = (prefix.len(), cycle.len());
    let lasso = LassoSchedule::new(masks(prefix), masks(cycle)).unwrap();
    let mut t = Time::from_integer(t0);
    let mut times = Vec::with_capacity(p + c);
    for &(a, b) in &steps[..p + c] {
        times.push(t);
        t += Time::new(a, b);
    }
    let (a, b) = steps[p + c];
    let period = times[p + c - 1] - times[p] + Time::new(a, b);
    TimedSchedule::new(lasso, times, period).unwrap()
}

// ---- proptest strategies ----

pub fn arb_phi(n: usize) -> impl Strategy<Value = GeneratorFunction> {
    prop::collection::vec(0..1u32 << n, 1usize << n)
        .prop_map(move |table| GeneratorFunction::from_table(n, table).unwrap())
}

pub fn arb_state(n: usize) -> impl Strategy<Value = StateVector> {
    (0..1u32 << n).prop_map(move |v| StateVector::new(n, v).unwrap())
}

pub fn arb_set(n: usize) -> impl Strategy<Value = StateSet> {
    (1u64..(1u64 << (1u32 << n))).prop_map(move |code| {
        let members = (0..1u32 << n).filter(|&v| code & (1 << v) != 0);
        StateSet::from_states(n, members.map(|v| StateVector::new(n, v).unwrap())).unwrap()
    })
}

pub fn arb_schedule(n: usize) -> impl Strategy<Value = TimedSchedule> {
    let mask = 0..1u32 << n;
    (
        prop::collection::vec(mask.clone(), 0..=3),
        prop::collection::vec(mask, 1..=4),
        -3i64..=3,
        prop::collection::vec((1i64..=4, 1i64..=3), 8),
    )
        .prop_map(move |(prefix, cycle, t0, steps)| build_schedule(n, prefix, cycle, t0, &steps))
}

pub fn arb_dim() -> impl Strategy<Value = usize> {
    1usize..=4
}

/// A dimension, a function, a state and a schedule.
pub fn arb_system() -> impl Strategy<Value = (GeneratorFunction, StateVector, TimedSchedule)> {
    arb_dim().prop_flat_map(|n| (arb_phi(n), arb_state(n), arb_schedule(n)))
}

/// Sample times around every firing of the first passes of a trajectory.
pub fn probe_times(rho: &TimedSchedule, passes: usize) -> Vec<Time> {
    let count = rho.lasso().prefix().len() + passes * rho.lasso().cycle().len();
    let half = Time::new(1, 2);
    let mut out = vec![rho.time(0) - Time::from_integer(1)];
    for k in 0..count {
        let t = rho.time(k);
        let next = rho.time(k + 1);
        out.push(t);
        out.push((t + next) * half);
    }
    out
}

// ---- flow invariants ----

/// Every flow-level identity for one (Φ, μ, ρ).
pub fn check_flow(phi: &GeneratorFunction, mu: StateVector, rho: &TimedSchedule) -> Check {
    let traj = flow(phi, mu, rho).map_err(|e| e.to_string())?;
    let omega = traj.omega_set();
    let orbit = traj.orbit_set();
    let probes = probe_times(rho, 3);

    // ω nonempty, and equal to the suffix set from the settle time on
    ensure!(!omega.states.is_empty(), "empty ω for {mu} under {rho}");
    ensure!(
        traj.values_from(omega.settle_time) == omega.states,
        "ω differs from suffix set at settle time"
    );
    // any later start gives the same suffix set
    ensure!(
        traj.values_from(omega.settle_time + rho.period()) == omega.states,
        "suffix set changes after one more period"
    );

    for &tp in &probes {
        // ω ⊆ suffix ⊆ orbit
        let suffix = traj.values_from(tp);
        ensure!(omega.states.is_subset(&suffix), "ω ⊄ suffix from {tp}");
        ensure!(suffix.is_subset(&orbit), "suffix from {tp} ⊄ orbit");
        // a suffix set that no later start changes is ω
        let far = tp.max(omega.settle_time) + rho.period() * Time::from_integer(3);
        let mut later = probes.iter().copied().filter(|&tq| tq >= tp).chain([far]);
        if later.all(|tq| traj.values_from(tq) == suffix) {
            ensure!(
                suffix == omega.states,
                "stationary suffix from {tp} is not ω"
            );
        }

        let value = traj.value_at(tp);
        let rest = rho.restrict_after(tp);
        let restarted = flow(phi, value, &rest).map_err(|e| e.to_string())?;
        for &t in probes.iter().filter(|&&t| t >= tp) {
            ensure!(
                restarted.value_at(t) == traj.value_at(t),
                "restriction at {tp} breaks value at {t}"
            );
        }
        ensure!(
            restarted.omega_set().states == omega.states,
            "restart at {tp} changes ω"
        );
        // restarting from a tail state reproduces ω as the whole orbit
        if tp >= omega.settle_time {
            ensure!(
                restarted.orbit_set() == omega.states,
                "tail restart orbit differs from ω"
            );
        }
    }

    for tau in [Time::new(-7, 3), Time::from_integer(0), Time::new(5, 2)] {
        let shifted = flow(phi, mu, &rho.shift(tau)).map_err(|e| e.to_string())?;
        for &t in &probes {
            ensure!(
                shifted.value_at(t + tau) == traj.value_at(t),
                "shift by {tau} breaks value at {t}"
            );
        }
        ensure!(
            shifted.omega_set().states == omega.states,
            "shift changes ω"
        );
    }

    // fixed points: absorbing, and they pin ω and the limit
    for k in 0..probes.len() {
        let v = traj.value_after_firing(k);
        if phi.is_fixed_point(v).unwrap() {
            ensure!(
                (k..k + 8).all(|j| traj.value_after_firing(j) == v),
                "fixed point {v} left after firing {k}"
            );
        }
    }
    if phi.is_fixed_point(mu).unwrap() {
        ensure!(orbit.len() == 1, "fixed point {mu} moved");
    }
    if let Some(fp) = orbit.iter().find(|v| phi.is_fixed_point(*v).unwrap()) {
        ensure!(
            omega.states.len() == 1 && omega.states.contains(fp),
            "fixed point {fp} in orbit but ω = {}",
            omega.states
        );
    }
    match traj.final_value() {
        Some(v) => {
            ensure!(omega.states.len() == 1, "limit with non-singleton ω");
            ensure!(
                phi.is_fixed_point(v).unwrap(),
                "limit {v} is not a fixed point"
            );
        }
        None => ensure!(omega.states.len() > 1, "singleton ω without a limit"),
    }
    Ok(())
}

// ---- portrait invariants ----

pub fn check_portrait(g: &TransitionGraph, b: &StateSet) -> Check {
    let phi = g.phi();
    let n = g.n();
    for mu in g.states() {
        let edges = g.edges_from(mu).unwrap();
        let unstable = phi.unstable_set(mu).unwrap();
        for e in &edges {
            ensure!(
                e.mask.is_subset(&unstable),
                "edge mask {} ⊄ U({mu})",
                e.mask
            );
            let nu = UpdateMask::from_coordinate_set(&e.mask);
            ensure!(
                phi.apply_mask(mu, nu).unwrap() == e.target,
                "edge {mu}->{} unsound",
                e.target
            );
        }
        for nu in 0..1u32 << n {
            let target = phi.apply_mask(mu, UpdateMask::new(n, nu).unwrap()).unwrap();
            ensure!(
                target == mu || edges.iter().any(|e| e.target == target),
                "successor {target} of {mu} missing"
            );
        }
    }
    let fr = fair_recurrent_within(g, b).map_err(|e| e.to_string())?;
    ensure!(fr.states().is_subset(b), "fair recurrence leaves B");
    let sccs = fr.sccs();
    for id in fr.sustainable_ids() {
        let comp = sccs.component_set(id);
        for i in 1..=n {
            match fr.coverage(id, i) {
                Some(Coverage::Stable { state }) => {
                    ensure!(comp.contains(state), "stable witness outside component");
                    ensure!(
                        !phi.unstable_set(state).unwrap().contains(i),
                        "coordinate {i} not stable at {state}"
                    );
                }
                Some(Coverage::Flipped { edge }) => {
                    ensure!(
                        comp.contains(edge.source) && comp.contains(edge.target),
                        "flip witness leaves component"
                    );
                    ensure!(edge.mask.contains(i), "edge does not flip {i}");
                    ensure!(
                        g.edges_from(edge.source).unwrap().contains(&edge),
                        "witness edge is not an edge"
                    );
                }
                None => return Err(format!("sustainable component {id} lacks coordinate {i}")),
            }
        }
    }
    Ok(())
}

// ---- analysis invariants ----

pub fn verify_confining(
    phi: &GeneratorFunction,
    mu: StateVector,
    rho: &TimedSchedule,
    a: &StateSet,
) -> Check {
    let traj = flow(phi, mu, rho).map_err(|e| e.to_string())?;
    ensure!(
        traj.orbit_set().is_subset(a),
        "witness {rho} lets {mu} leave {a}"
    );
    Ok(())
}

pub fn verify_omega_inside(
    phi: &GeneratorFunction,
    mu: StateVector,
    rho: &TimedSchedule,
    a: &StateSet,
    inside: bool,
) -> Check {
    let omega = flow(phi, mu, rho)
        .map_err(|e| e.to_string())?
        .omega_set()
        .states;
    ensure!(
        omega.is_subset(a) == inside,
        "witness {rho} from {mu}: ω = {omega}, expected inside {a} = {inside}"
    );
    Ok(())
}

/// Basin and invariance identities for one set.
pub fn check_analysis(an: &Analyzer, a: &StateSet, wider: &StateSet) -> Check {
    let g = an.graph();
    let phi = g.phi();
    let err = |e: asyncdyn_core::Error| e.to_string();

    let p_basin = an.p_basin(a).map_err(err)?;
    let n_basin = an.n_basin(a).map_err(err)?;
    let p_invariant = an.is_p_invariant(a).map_err(err)?;
    let counterexample = an.is_n_invariant(a).map_err(err)?;
    ensure!(n_basin.is_subset(&p_basin), "n_basin ⊄ p_basin for {a}");

    // monotone in A
    let bigger = a.union(wider).unwrap();
    ensure!(
        p_basin.is_subset(&an.p_basin(&bigger).map_err(err)?),
        "p_basin not monotone"
    );
    ensure!(
        n_basin.is_subset(&an.n_basin(&bigger).map_err(err)?),
        "n_basin not monotone"
    );

    if p_invariant {
        ensure!(a.is_subset(&p_basin), "p-invariant {a} ⊄ p_basin");
    }
    if counterexample.is_none() {
        ensure!(a.is_subset(&n_basin), "n-invariant {a} ⊄ n_basin");
    }
    if !p_basin.is_empty() {
        ensure!(
            an.is_p_invariant(&p_basin).map_err(err)?,
            "p_basin of {a} is not p-invariant"
        );
    }
    if !n_basin.is_empty() {
        ensure!(
            an.is_n_invariant(&n_basin).map_err(err)?.is_none(),
            "n_basin of {a} is not n-invariant"
        );
    }
    if let Some(cx) = counterexample {
        ensure!(
            a.contains(cx.state) && !a.contains(cx.target),
            "counterexample does not exit"
        );
        ensure!(
            phi.apply_mask(cx.state, cx.mask).unwrap() == cx.target,
            "counterexample mask is wrong"
        );
    }
    Ok(())
}

/// Re-simulates every witness of the invariance and basin reports for A;
/// returns how many were checked.
pub fn verify_witnesses(an: &Analyzer, a: &StateSet) -> Result<usize, String> {
    let phi = an.graph().phi();
    let err = |e: asyncdyn_core::Error| e.to_string();
    let full = StateSet::full(a.n()).unwrap();
    let report = an.basins(a).map_err(err)?;
    let inv = an.invariance(a).map_err(err)?;
    let mut count = 0;

    ensure!(
        report.p_basin == an.p_basin(a).map_err(err)?,
        "report p_basin disagrees"
    );
    ensure!(
        report.n_basin == an.n_basin(a).map_err(err)?,
        "report n_basin disagrees"
    );
    ensure!(
        inv.p_invariant == an.is_p_invariant(a).map_err(err)?,
        "report p-invariance disagrees"
    );
    ensure!(
        inv.witnesses.len() + inv.unconfinable.len() == a.len(),
        "every state of A needs a verdict"
    );
    for w in &inv.witnesses {
        verify_confining(phi, w.state, &w.schedule, a)?;
        count += 1;
    }
    ensure!(
        report.p_witnesses.len() == report.p_basin.len(),
        "missing p witnesses"
    );
    for w in &report.p_witnesses {
        ensure!(
            report.p_basin.contains(w.state),
            "witness for a state outside p_basin"
        );
        verify_omega_inside(phi, w.state, &w.schedule, a, true)?;
        count += 1;
    }
    ensure!(
        report.n_escapes.len() + report.n_basin.len() == full.len(),
        "missing escapes"
    );
    for w in &report.n_escapes {
        ensure!(
            !report.n_basin.contains(w.state),
            "escape from inside n_basin"
        );
        verify_omega_inside(phi, w.state, &w.schedule, a, false)?;
        count += 1;
    }
    Ok(count)
}

/// Structural invariants that do not depend on a query set.
pub fn check_global_analysis(an: &Analyzer) -> Check {
    let g = an.graph();
    let phi = g.phi();
    let err = |e: asyncdyn_core::Error| e.to_string();
    let full = StateSet::full(g.n()).unwrap();
    ensure!(
        an.p_basin(&full).map_err(err)?.is_full(),
        "p_basin(B^n) is not B^n"
    );
    ensure!(
        an.n_basin(&full).map_err(err)?.is_full(),
        "n_basin(B^n) is not B^n"
    );
    let fixed = phi.fixed_points();
    if !fixed.is_empty() {
        ensure!(
            an.is_n_invariant(&fixed).map_err(err)?.is_none(),
            "fixed points are not n-invariant"
        );
        for fp in fixed.iter() {
            let single = StateSet::from_states(g.n(), [fp]).unwrap();
            ensure!(
                an.is_n_invariant(&single).map_err(err)?.is_none(),
                "fixed point {fp} is not n-invariant"
            );
        }
    }
    for mu in g.states() {
        let reach = g.reachable_from(mu).unwrap();
        ensure!(
            an.is_n_invariant(&reach).map_err(err)?.is_none(),
            "reachable set of {mu} is not n-invariant"
        );
    }
    Ok(())
}

/// Trajectory-level identities relating one schedule to the analysis.
pub fn check_trajectory_analysis(
    an: &Analyzer,
    mu: StateVector,
    rho: &TimedSchedule,
    a: &StateSet,
) -> Check {
    let phi = an.graph().phi();
    let err = |e: asyncdyn_core::Error| e.to_string();
    let traj = flow(phi, mu, rho).map_err(|e| e.to_string())?;
    let omega = traj.omega_set();
    ensure!(
        an.is_p_invariant(&traj.orbit_set()).map_err(err)?,
        "orbit of {mu} under {rho} is not p-invariant"
    );
    ensure!(
        an.is_p_invariant(&omega.states).map_err(err)?,
        "ω of {mu} under {rho} is not p-invariant"
    );

    // ω ⊆ A iff the trajectory eventually stays in A
    let inside = omega.states.is_subset(a);
    let eventually = traj.values_from(omega.settle_time).is_subset(a);
    ensure!(
        inside == eventually,
        "ω ⊆ A disagrees with eventual confinement"
    );
    if !inside {
        let later = omega.settle_time + rho.period() * Time::from_integer(5);
        ensure!(
            !traj.values_from(later).is_subset(a),
            "trajectory confined late despite ω ⊄ A"
        );
    }
    // the basins bound what any single schedule can do
    if inside {
        ensure!(
            an.p_basin(a).map_err(err)?.contains(mu),
            "{mu} has ω ⊆ A but is outside p_basin"
        );
    } else {
        ensure!(
            !an.n_basin(a).map_err(err)?.contains(mu),
            "{mu} has ω ⊄ A but is inside n_basin"
        );
    }
    Ok(())
}

pub fn graph(phi: &GeneratorFunction) -> TransitionGraph {
    build_graph(phi)
}
