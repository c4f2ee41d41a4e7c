//! The asynchronous state portrait of Φ and its fair-recurrence analysis.

mod export;
mod fair;
mod graph;
mod scc;

pub use export::{to_dot, GraphDump};
pub use fair::{fair_recurrent_within, is_sustainable_set, Coverage, FairRecurrence};
pub use graph::{build_graph, build_graph_parallel, Edge, Predecessors, TransitionGraph};
pub use scc::{sccs_within, SccPartition};

pub(crate) use graph::Subsets;
