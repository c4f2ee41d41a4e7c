use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::generator::GeneratorFunction;
use crate::set::StateSet;
use crate::state::{check_same, CoordinateSet, StateVector};

/// Iterates the nonempty subsets of `full` in increasing numeric order.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Subsets {
    full: u32,
    current: u32,
    done: bool,
}

impl Subsets {
    pub(crate) fn new(full: u32) -> Self {
        Subsets {
            full,
            current: 0,
            done: full == 0,
        }
    }
}

impl Iterator for Subsets {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.done {
            return None;
        }
        self.current = (self.current | !self.full).wrapping_add(1) & self.full;
        if self.current == self.full {
            self.done = true;
        }
        Some(self.current)
    }
}

/// One asynchronous move μ → Φ^ν(μ), labelled by its effective mask
/// ν ∩ U(μ). The effective mask alone determines the target: the target is
/// μ with exactly the effective coordinates flipped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub source: StateVector,
    pub mask: CoordinateSet,
    pub target: StateVector,
}

/// The asynchronous state portrait of Φ.
///
/// For every state the graph keeps its unstable coordinates U(μ); the
/// successors are enumerated on demand as the nonempty subsets of U(μ). The
/// empty-mask self loop is implicit and never reported as an edge.
#[derive(Clone, Debug)]
pub struct TransitionGraph {
    phi: GeneratorFunction,
    unstable: Vec<u32>,
}

/// Builds the portrait sequentially.
pub fn build_graph(phi: &GeneratorFunction) -> TransitionGraph {
    let unstable = (0..phi.state_count() as u32)
        .map(|mu| phi.unstable_raw(mu))
        .collect();
    TransitionGraph {
        phi: phi.clone(),
        unstable,
    }
}

/// Builds the portrait with one task per block of states.
pub fn build_graph_parallel(phi: &GeneratorFunction) -> TransitionGraph {
    let unstable = (0..phi.state_count() as u32)
        .into_par_iter()
        .map(|mu| phi.unstable_raw(mu))
        .collect();
    TransitionGraph {
        phi: phi.clone(),
        unstable,
    }
}

impl TransitionGraph {
    pub fn phi(&self) -> &GeneratorFunction {
        &self.phi
    }

    pub fn n(&self) -> usize {
        self.phi.n()
    }

    pub fn state_count(&self) -> usize {
        self.unstable.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateVector> + '_ {
        self.phi.states()
    }

    #[inline]
    pub(crate) fn unstable_raw(&self, mu: u32) -> u32 {
        self.unstable[mu as usize]
    }

    pub fn unstable_set(&self, mu: StateVector) -> Result<CoordinateSet> {
        check_same(self.n(), mu.n())?;
        Ok(CoordinateSet::from_raw(
            self.n(),
            self.unstable_raw(mu.bits()),
        ))
    }

    /// Targets of the nonempty-mask edges out of `mu`, paired with their
    /// effective masks, in increasing mask order.
    #[inline]
    pub(crate) fn successors_raw(&self, mu: u32) -> impl Iterator<Item = (u32, u32)> {
        Subsets::new(self.unstable_raw(mu)).map(move |e| (e, mu ^ e))
    }

    /// Out-edges of `mu`, sorted by target encoding.
    pub fn edges_from(&self, mu: StateVector) -> Result<Vec<Edge>> {
        check_same(self.n(), mu.n())?;
        let n = self.n();
        let mut edges: Vec<Edge> = self
            .successors_raw(mu.bits())
            .map(|(e, t)| Edge {
                source: mu,
                mask: CoordinateSet::from_raw(n, e),
                target: StateVector::from_raw(n, t),
            })
            .collect();
        edges.sort_by_key(|e| e.target);
        Ok(edges)
    }

    /// All edges, sources in increasing order and targets increasing per source.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.states()
            .flat_map(move |mu| self.edges_from(mu).expect("same dimension"))
    }

    pub fn out_degree(&self, mu: StateVector) -> usize {
        (1usize << self.unstable_raw(mu.bits()).count_ones()) - 1
    }

    pub fn edge_count(&self) -> u64 {
        self.unstable
            .iter()
            .map(|u| (1u64 << u.count_ones()) - 1)
            .sum()
    }

    /// Least set containing `mu` and closed under every edge.
    pub fn reachable_from(&self, mu: StateVector) -> Result<StateSet> {
        check_same(self.n(), mu.n())?;
        let mut seen = StateSet::empty(self.n())?;
        seen.insert_index(mu.bits() as usize);
        let mut stack = vec![mu.bits()];
        while let Some(v) = stack.pop() {
            for (_, t) in self.successors_raw(v) {
                if seen.insert_index(t as usize) {
                    stack.push(t);
                }
            }
        }
        Ok(seen)
    }

    /// Reverse adjacency in compressed form, for backward closures.
    pub fn predecessors(&self) -> Predecessors {
        let count = self.state_count();
        let mut offsets = vec![0usize; count + 1];
        for v in 0..count as u32 {
            for (_, t) in self.successors_raw(v) {
                offsets[t as usize + 1] += 1;
            }
        }
        for i in 0..count {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut sources = vec![0u32; offsets[count]];
        for v in 0..count as u32 {
            for (_, t) in self.successors_raw(v) {
                sources[fill[t as usize]] = v;
                fill[t as usize] += 1;
            }
        }
        Predecessors { offsets, sources }
    }
}

/// Sources of the edges into each state.
#[derive(Clone, Debug)]
pub struct Predecessors {
    offsets: Vec<usize>,
    sources: Vec<u32>,
}

impl Predecessors {
    pub(crate) fn of(&self, v: u32) -> &[u32] {
        &self.sources[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// Every state with a path (possibly empty) into `targets`.
    pub fn backward_closure(&self, targets: &StateSet) -> StateSet {
        let mut closure = targets.clone();
        let mut stack: Vec<u32> = targets.indices().map(|i| i as u32).collect();
        while let Some(v) = stack.pop() {
            for &u in self.of(v) {
                if closure.insert_index(u as usize) {
                    stack.push(u);
                }
            }
        }
        closure
    }
}
