use std::fmt::Write;

use serde::Serialize;

use super::fair::{Coverage, FairRecurrence};
use super::graph::{Edge, TransitionGraph};
use crate::state::{CoordinateSet, StateVector};

/// Renders the state portrait in DOT.
///
/// Node labels are the bitstrings with unstable coordinates underlined;
/// one arrow per nonempty effective mask. Nodes and arrows appear in
/// increasing encoding order, so the output is stable and diffable.
pub fn to_dot(g: &TransitionGraph) -> String {
    let mut out = String::new();
    out.push_str("digraph portrait {\n");
    out.push_str("  node [shape=plaintext, fontname=\"monospace\"];\n");
    for mu in g.states() {
        let unstable = g.unstable_raw(mu.bits());
        let mut label = String::new();
        for i in 1..=g.n() {
            let digit = if mu.get(i) { '1' } else { '0' };
            if unstable & (1u32 << (g.n() - i)) != 0 {
                let _ = write!(label, "<u>{digit}</u>");
            } else {
                label.push(digit);
            }
        }
        let _ = writeln!(out, "  \"{mu}\" [label=<{label}>];");
    }
    for edge in g.edges() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", edge.source, edge.target);
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct StateEntry {
    state: StateVector,
    unstable: CoordinateSet,
    scc: usize,
}

#[derive(Serialize)]
struct SccEntry {
    id: usize,
    states: Vec<StateVector>,
    sustainable: bool,
    coverage: Vec<Option<Coverage>>,
}

/// JSON-serializable dump of the portrait and its fair-recurrence analysis
/// over the whole state space.
#[derive(Serialize)]
pub struct GraphDump {
    n: usize,
    variables: Option<Vec<String>>,
    states: Vec<StateEntry>,
    edges: Vec<Edge>,
    sccs: Vec<SccEntry>,
}

impl GraphDump {
    /// `analysis` must be the fair recurrence of the full state space.
    pub fn new(g: &TransitionGraph, analysis: &FairRecurrence) -> Self {
        let sccs = analysis.sccs();
        let states = g
            .states()
            .map(|mu| StateEntry {
                state: mu,
                unstable: g.unstable_set(mu).expect("same dimension"),
                scc: sccs.component_of(mu).expect("full-space decomposition"),
            })
            .collect();
        let components = (0..sccs.len())
            .map(|id| SccEntry {
                id,
                states: sccs.members(id).collect(),
                sustainable: analysis.is_sustainable(id),
                coverage: analysis.coverage_of(id).to_vec(),
            })
            .collect();
        GraphDump {
            n: g.n(),
            variables: g.phi().names().map(|v| v.to_vec()),
            states,
            edges: g.edges().collect(),
            sccs: components,
        }
    }
}
