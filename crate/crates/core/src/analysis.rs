//! Invariance and basins of attraction.
//!
//! * A is **n-invariant** when every masked update of every μ ∈ A stays in A.
//! * A is **p-invariant** when from each μ ∈ A some progressive schedule
//!   keeps the whole orbit inside A.
//! * The basin of **p-attraction** W̄(A) holds the states from which some
//!   progressive schedule has its ω-limit set inside A; the basin of
//!   **n-attraction** W̲(A) those from which every progressive schedule does.
//!
//! All four reduce to reachability against sustainable components (see
//! [`crate::portrait::fair_recurrent_within`]). Positive p-answers come with
//! witness schedules and negative n-answers with counterexamples, so every
//! verdict can be re-checked by simulation.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::portrait::{
    fair_recurrent_within, Coverage, FairRecurrence, Predecessors, TransitionGraph,
};
use crate::schedule::{LassoSchedule, TimedSchedule};
use crate::set::StateSet;
use crate::state::{check_same, low_mask, StateVector, UpdateMask};

/// A progressive lasso schedule exhibited for one initial state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub state: StateVector,
    pub schedule: TimedSchedule,
}

/// μ ∈ A and a mask λ with Φ^λ(μ) ∉ A.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub state: StateVector,
    pub mask: UpdateMask,
    pub target: StateVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub set: StateSet,
    pub p_invariant: bool,
    pub n_invariant: bool,
    /// One confining schedule per state of A that has one.
    pub witnesses: Vec<Witness>,
    /// States of A from which no schedule stays inside A.
    pub unconfinable: Vec<StateVector>,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Attractiveness {
    NotAttractive,
    PartiallyAttractive,
    TotallyAttractive,
}

impl Attractiveness {
    pub fn of_basin(basin: &StateSet) -> Self {
        if basin.is_empty() {
            Attractiveness::NotAttractive
        } else if basin.is_full() {
            Attractiveness::TotallyAttractive
        } else {
            Attractiveness::PartiallyAttractive
        }
    }
}

impl fmt::Display for Attractiveness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Attractiveness::NotAttractive => "not attractive",
            Attractiveness::PartiallyAttractive => "partially attractive",
            Attractiveness::TotallyAttractive => "totally attractive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasinReport {
    pub set: StateSet,
    pub p_basin: StateSet,
    pub n_basin: StateSet,
    pub p_class: Attractiveness,
    pub n_class: Attractiveness,
    /// For each μ ∈ W̄(A), a schedule whose ω-limit set lies in A.
    pub p_witnesses: Vec<Witness>,
    /// For each μ ∉ W̲(A), a schedule whose ω-limit set leaves A.
    pub n_escapes: Vec<Witness>,
}

impl BasinReport {
    /// Whether `b` is p-attracted by A: nonempty and inside W̄(A).
    pub fn p_attracts(&self, b: &StateSet) -> bool {
        !b.is_empty() && b.is_subset(&self.p_basin)
    }

    /// Whether `b` is n-attracted by A: nonempty and inside W̲(A).
    pub fn n_attracts(&self, b: &StateSet) -> bool {
        !b.is_empty() && b.is_subset(&self.n_basin)
    }
}

/// Three-way classification of A from its basins.
pub fn classify(set: &StateSet, p_basin: &StateSet, n_basin: &StateSet) -> BasinReport {
    BasinReport {
        set: set.clone(),
        p_basin: p_basin.clone(),
        n_basin: n_basin.clone(),
        p_class: Attractiveness::of_basin(p_basin),
        n_class: Attractiveness::of_basin(n_basin),
        p_witnesses: Vec::new(),
        n_escapes: Vec::new(),
    }
}

/// Reusable query context: the portrait plus its reverse adjacency.
pub struct Analyzer<'g> {
    graph: &'g TransitionGraph,
    preds: Predecessors,
}

/// Next hop toward a target set: from u fire `mask`, arriving at `next`.
#[derive(Clone, Copy)]
struct Hop {
    mask: u32,
    next: u32,
}

impl<'g> Analyzer<'g> {
    pub fn new(graph: &'g TransitionGraph) -> Self {
        Analyzer {
            graph,
            preds: graph.predecessors(),
        }
    }

    pub fn graph(&self) -> &TransitionGraph {
        self.graph
    }

    fn check(&self, set: &StateSet) -> Result<()> {
        check_same(self.graph.n(), set.n())?;
        set.require_nonempty()
    }

    fn mask(&self, bits: u32) -> UpdateMask {
        UpdateMask::from_raw(self.graph.n(), bits)
    }

    fn state(&self, bits: u32) -> StateVector {
        StateVector::from_raw(self.graph.n(), bits)
    }

    /// Every μ ∈ A has all its successors in A; otherwise the first exit
    /// found, trying single-coordinate masks first in coordinate order.
    pub fn is_n_invariant(&self, set: &StateSet) -> Result<Option<Counterexample>> {
        self.check(set)?;
        let n = self.graph.n();
        for v in set.indices().map(|v| v as u32) {
            let unstable = self.graph.unstable_raw(v);
            let singles = (1..=n)
                .map(|i| 1u32 << (n - i))
                .filter(|b| unstable & b != 0);
            let exit = singles
                .chain(crate::portrait::Subsets::new(unstable).filter(|e| e.count_ones() > 1))
                .find(|&e| !set.contains_index((v ^ e) as usize));
            if let Some(e) = exit {
                return Ok(Some(Counterexample {
                    state: self.state(v),
                    mask: self.mask(e),
                    target: self.state(v ^ e),
                }));
            }
        }
        Ok(None)
    }

    /// Multi-source backward BFS from `targets`, staying inside `allowed`
    /// (or anywhere when `None`). Returns the next hop for every reached
    /// state outside `targets`.
    fn hops_toward(
        &self,
        targets: &StateSet,
        allowed: Option<&StateSet>,
    ) -> (StateSet, HashMap<u32, Hop>) {
        let mut reached = targets.clone();
        let mut hops = HashMap::new();
        let mut queue: VecDeque<u32> = targets.indices().map(|v| v as u32).collect();
        while let Some(v) = queue.pop_front() {
            for &u in self.preds.of(v) {
                if allowed.is_some_and(|a| !a.contains_index(u as usize)) {
                    continue;
                }
                if reached.insert_index(u as usize) {
                    hops.insert(
                        u,
                        Hop {
                            mask: u ^ v,
                            next: v,
                        },
                    );
                    queue.push_back(u);
                }
            }
        }
        (reached, hops)
    }

    /// Shortest mask path from `from` to `to` through states of `region`.
    fn path_within(&self, from: u32, to: u32, region: &dyn Fn(u32) -> bool) -> Vec<u32> {
        if from == to {
            return Vec::new();
        }
        let mut parent: HashMap<u32, (u32, u32)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        parent.insert(from, (from, 0));
        while let Some(v) = queue.pop_front() {
            for (e, w) in self.graph.successors_raw(v) {
                if !region(w) || parent.contains_key(&w) {
                    continue;
                }
                parent.insert(w, (v, e));
                if w == to {
                    let mut masks = Vec::new();
                    let mut cur = to;
                    while cur != from {
                        let (p, e) = parent[&cur];
                        masks.push(e);
                        cur = p;
                    }
                    masks.reverse();
                    return masks;
                }
                queue.push_back(w);
            }
        }
        unreachable!("{to} is not reachable from {from} inside a strongly connected region");
    }

    /// Closed walk from the smallest member of component `id` that fires
    /// every coordinate at its coverage witness and passes through `extra`.
    fn tour(&self, fr: &FairRecurrence, id: usize, extra: Option<u32>) -> (u32, Vec<u32>) {
        let sccs = fr.sccs();
        let region = |v: u32| sccs.component_raw(v) == Some(id);
        let root = sccs.members_raw(id)[0];
        let mut masks = Vec::new();
        let mut cur = root;

        let mut stops: Vec<(u32, u32, bool)> = Vec::new(); // (state, mask, is_edge)
        for (i, cov) in fr.coverage_of(id).iter().enumerate() {
            let bit = 1u32 << (self.graph.n() - 1 - i);
            match cov.expect("sustainable component covers every coordinate") {
                Coverage::Stable { state } => {
                    match stops.iter_mut().find(|s| !s.2 && s.0 == state.bits()) {
                        Some(stop) => stop.1 |= bit,
                        None => stops.push((state.bits(), bit, false)),
                    }
                }
                Coverage::Flipped { edge } => {
                    let stop = (edge.source.bits(), edge.mask.bits(), true);
                    if !stops.contains(&stop) {
                        stops.push(stop);
                    }
                }
            }
        }
        for (state, mask, is_edge) in stops {
            masks.extend(self.path_within(cur, state, &region));
            masks.push(mask);
            cur = if is_edge { state ^ mask } else { state };
        }
        if let Some(x) = extra {
            masks.extend(self.path_within(cur, x, &region));
            cur = x;
        }
        masks.extend(self.path_within(cur, root, &region));
        (root, masks)
    }

    fn follow(&self, hops: &HashMap<u32, Hop>, mut v: u32, masks: &mut Vec<u32>) -> u32 {
        while let Some(hop) = hops.get(&v) {
            masks.push(hop.mask);
            v = hop.next;
        }
        v
    }

    fn schedule(&self, prefix: Vec<u32>, cycle: Vec<u32>) -> TimedSchedule {
        let prefix = prefix.into_iter().map(|m| self.mask(m)).collect();
        let cycle = cycle.into_iter().map(|m| self.mask(m)).collect();
        LassoSchedule::new(prefix, cycle)
            .expect("tours fire every coordinate")
            .with_unit_times()
    }

    /// Witnesses for `members`: reach a sustainable component of `fr` by
    /// `hops`, walk to its root, then tour it forever.
    fn witnesses(
        &self,
        fr: &FairRecurrence,
        hops: &HashMap<u32, Hop>,
        members: impl Iterator<Item = u32>,
        extra: impl Fn(usize) -> Option<u32>,
    ) -> Vec<Witness> {
        let sccs = fr.sccs();
        let mut tours: HashMap<usize, (u32, Vec<u32>)> = HashMap::new();
        members
            .map(|v| {
                let mut prefix = Vec::new();
                let entry = self.follow(hops, v, &mut prefix);
                let id = sccs
                    .component_raw(entry)
                    .expect("hops end in a sustainable component");
                let (root, cycle) = tours
                    .entry(id)
                    .or_insert_with(|| self.tour(fr, id, extra(id)))
                    .clone();
                prefix
                    .extend(self.path_within(entry, root, &|w| sccs.component_raw(w) == Some(id)));
                Witness {
                    state: self.state(v),
                    schedule: self.schedule(prefix, cycle),
                }
            })
            .collect()
    }

    /// p-invariance with one confining schedule per state of A.
    pub fn invariance(&self, set: &StateSet) -> Result<InvarianceReport> {
        self.check(set)?;
        let fr = fair_recurrent_within(self.graph, set)?;
        let (confinable, hops) = self.hops_toward(&fr.states(), Some(set));
        let witnesses =
            self.witnesses(&fr, &hops, confinable.indices().map(|v| v as u32), |_| None);
        let unconfinable: Vec<StateVector> =
            set.iter().filter(|s| !confinable.contains(*s)).collect();
        let counterexample = self.is_n_invariant(set)?;
        Ok(InvarianceReport {
            set: set.clone(),
            p_invariant: unconfinable.is_empty(),
            n_invariant: counterexample.is_none(),
            witnesses,
            unconfinable,
            counterexample,
        })
    }

    pub fn is_p_invariant(&self, set: &StateSet) -> Result<bool> {
        self.check(set)?;
        let fr = fair_recurrent_within(self.graph, set)?;
        let (confinable, _) = self.hops_toward(&fr.states(), Some(set));
        Ok(set.is_subset(&confinable))
    }

    /// W̄(A): states that can reach, along any edges, a sustainable
    /// component of the subgraph induced by A.
    pub fn p_basin(&self, set: &StateSet) -> Result<StateSet> {
        self.check(set)?;
        let fr = fair_recurrent_within(self.graph, set)?;
        Ok(self.preds.backward_closure(&fr.states()))
    }

    /// Sustainable components of the whole portrait that are not inside A.
    fn escaping(&self, full: &FairRecurrence, set: &StateSet) -> StateSet {
        let sccs = full.sccs();
        StateSet::from_indices(
            set.n(),
            full.sustainable_ids()
                .filter(|&id| {
                    sccs.members_raw(id)
                        .iter()
                        .any(|&v| !set.contains_index(v as usize))
                })
                .flat_map(|id| sccs.members_raw(id).iter().map(|&v| v as usize)),
        )
    }

    /// W̲(A): states that cannot reach a sustainable component of the whole
    /// portrait that leaves A.
    pub fn n_basin(&self, set: &StateSet) -> Result<StateSet> {
        self.check(set)?;
        let full = fair_recurrent_within(self.graph, &StateSet::full(set.n())?)?;
        Ok(self
            .preds
            .backward_closure(&self.escaping(&full, set))
            .complement())
    }

    /// Both basins, their classification and per-state witnesses.
    pub fn basins(&self, set: &StateSet) -> Result<BasinReport> {
        self.check(set)?;
        let inner = fair_recurrent_within(self.graph, set)?;
        let (p_basin, p_hops) = self.hops_toward(&inner.states(), None);
        let p_witnesses =
            self.witnesses(&inner, &p_hops, p_basin.indices().map(|v| v as u32), |_| {
                None
            });

        let full = fair_recurrent_within(self.graph, &StateSet::full(set.n())?)?;
        let (escape, n_hops) = self.hops_toward(&self.escaping(&full, set), None);
        let outside = |id: usize| {
            full.sccs()
                .members_raw(id)
                .iter()
                .copied()
                .find(|&v| !set.contains_index(v as usize))
        };
        let n_escapes = self.witnesses(&full, &n_hops, escape.indices().map(|v| v as u32), outside);
        let n_basin = escape.complement();

        let mut report = classify(set, &p_basin, &n_basin);
        report.p_witnesses = p_witnesses;
        report.n_escapes = n_escapes;
        Ok(report)
    }
}

pub fn is_n_invariant(g: &TransitionGraph, set: &StateSet) -> Result<Option<Counterexample>> {
    Analyzer::new(g).is_n_invariant(set)
}

pub fn is_p_invariant(g: &TransitionGraph, set: &StateSet) -> Result<bool> {
    Analyzer::new(g).is_p_invariant(set)
}

pub fn invariance(g: &TransitionGraph, set: &StateSet) -> Result<InvarianceReport> {
    Analyzer::new(g).invariance(set)
}

pub fn p_basin(g: &TransitionGraph, set: &StateSet) -> Result<StateSet> {
    Analyzer::new(g).p_basin(set)
}

pub fn n_basin(g: &TransitionGraph, set: &StateSet) -> Result<StateSet> {
    Analyzer::new(g).n_basin(set)
}

pub fn basins(g: &TransitionGraph, set: &StateSet) -> Result<BasinReport> {
    Analyzer::new(g).basins(set)
}

/// Whether `mask` fires every coordinate; used by report consumers that
/// want to double-check witness progressivity.
pub fn fires_all(n: usize, masks: &[UpdateMask]) -> bool {
    masks.iter().fold(0u32, |acc, m| acc | m.bits()) == low_mask(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::flow;
    use crate::generator::GeneratorFunction;
    use crate::portrait::build_graph;

    fn set(items: &[&str]) -> StateSet {
        let n = items[0].len();
        StateSet::from_states(n, items.iter().map(|s| s.parse().unwrap())).unwrap()
    }

    fn fig1() -> TransitionGraph {
        build_graph(&GeneratorFunction::from_table(2, vec![0b11, 0b11, 0b10, 0b01]).unwrap())
    }

    fn not2() -> TransitionGraph {
        build_graph(&GeneratorFunction::from_table(2, vec![3, 2, 1, 0]).unwrap())
    }

    /// Φ(μ1, μ2) = (μ1, !μ2)
    fn half() -> TransitionGraph {
        build_graph(&GeneratorFunction::from_table(2, vec![0b01, 0b00, 0b11, 0b10]).unwrap())
    }

    #[test]
    fn n_invariance_examples() {
        assert_eq!(is_n_invariant(&half(), &set(&["00", "01"])).unwrap(), None);
        assert_eq!(is_n_invariant(&half(), &set(&["10", "11"])).unwrap(), None);
        let cx = is_n_invariant(&not2(), &set(&["01", "10"]))
            .unwrap()
            .unwrap();
        assert_eq!(cx.state.to_string(), "01");
        assert_eq!(cx.mask.to_string(), "10");
        assert_eq!(cx.target.to_string(), "11");
        assert_eq!(
            is_n_invariant(&fig1(), &StateSet::full(2).unwrap()).unwrap(),
            None
        );
    }

    #[test]
    fn p_invariance_examples() {
        assert!(is_p_invariant(&not2(), &set(&["01", "10"])).unwrap());
        assert!(is_p_invariant(&not2(), &set(&["00", "11"])).unwrap());
        assert!(!is_p_invariant(&fig1(), &set(&["00"])).unwrap());
        assert!(is_p_invariant(&fig1(), &set(&["10"])).unwrap());
        assert!(is_p_invariant(&half(), &set(&["00", "01"])).unwrap());
    }

    #[test]
    fn basin_examples() {
        let g = fig1();
        assert!(p_basin(&g, &StateSet::full(2).unwrap()).unwrap().is_full());
        assert!(n_basin(&g, &StateSet::full(2).unwrap()).unwrap().is_full());
        assert_eq!(p_basin(&g, &set(&["10"])).unwrap().to_string(), "{00, 10}");
        assert_eq!(n_basin(&g, &set(&["10"])).unwrap().to_string(), "{10}");
        assert!(p_basin(&g, &set(&["00"])).unwrap().is_empty());
        assert!(n_basin(&g, &set(&["00"])).unwrap().is_empty());
        assert_eq!(
            n_basin(&half(), &set(&["00", "01"])).unwrap().to_string(),
            "{00, 01}"
        );
    }

    #[test]
    fn classification_examples() {
        let g = fig1();
        let full = basins(&g, &StateSet::full(2).unwrap()).unwrap();
        assert_eq!(full.p_class, Attractiveness::TotallyAttractive);
        assert_eq!(full.n_class, Attractiveness::TotallyAttractive);
        let r = basins(&g, &set(&["10"])).unwrap();
        assert_eq!(r.p_class, Attractiveness::PartiallyAttractive);
        assert_eq!(r.n_class, Attractiveness::PartiallyAttractive);
        assert!(r.p_attracts(&set(&["00"])));
        assert!(!r.n_attracts(&set(&["00"])));
        assert!(!r.p_attracts(&StateSet::empty(2).unwrap()));
        let r = basins(&g, &set(&["00"])).unwrap();
        assert_eq!(r.p_class, Attractiveness::NotAttractive);
        assert_eq!(r.n_class, Attractiveness::NotAttractive);
    }

    #[test]
    fn witnesses_resimulate() {
        let g = fig1();
        let phi = g.phi().clone();
        let a = set(&["10"]);
        let r = basins(&g, &a).unwrap();
        assert_eq!(r.p_witnesses.len(), 2);
        for w in &r.p_witnesses {
            let omega = flow(&phi, w.state, &w.schedule).unwrap().omega_set().states;
            assert!(omega.is_subset(&a), "{} under {}", w.state, w.schedule);
        }
        assert_eq!(r.n_escapes.len(), 3);
        for w in &r.n_escapes {
            let omega = flow(&phi, w.state, &w.schedule).unwrap().omega_set().states;
            assert!(!omega.is_subset(&a), "{} under {}", w.state, w.schedule);
        }

        let a = set(&["01", "10"]);
        let inv = invariance(&not2(), &a).unwrap();
        assert!(inv.p_invariant && !inv.n_invariant);
        assert_eq!(inv.witnesses.len(), 2);
        for w in &inv.witnesses {
            let orbit = flow(not2().phi(), w.state, &w.schedule)
                .unwrap()
                .orbit_set();
            assert!(orbit.is_subset(&a));
        }
    }

    #[test]
    fn empty_and_mismatched_sets_are_rejected() {
        let g = fig1();
        assert!(p_basin(&g, &StateSet::empty(2).unwrap()).is_err());
        assert!(is_n_invariant(&g, &StateSet::full(3).unwrap()).is_err());
    }
}
