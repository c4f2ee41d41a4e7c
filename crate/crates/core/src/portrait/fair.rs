//! Fair recurrence: which strongly connected regions can be the ω-limit set
//! of a progressive schedule.
//!
//! A component C is *sustainable* when every coordinate i is either stable
//! at some state of C (firing i there is a no-op) or flipped by some edge
//! that stays inside C. Touring C while firing each coordinate at its
//! witness gives a progressive lasso whose ω-limit set lies in C.

use serde::Serialize;

use super::graph::{Edge, Subsets, TransitionGraph};
use super::scc::{sccs_within, SccPartition};
use crate::error::Result;
use crate::set::StateSet;
use crate::state::{low_mask, CoordinateSet, StateVector};

/// Why a coordinate can fire infinitely often inside a component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coverage {
    /// The coordinate is stable at `state`.
    Stable { state: StateVector },
    /// The coordinate is in the effective mask of an edge inside the component.
    Flipped { edge: Edge },
}

#[derive(Clone, Debug)]
pub struct FairRecurrence {
    sccs: SccPartition,
    sustainable: Vec<bool>,
    /// coverage[id][i - 1] for coordinate i.
    coverage: Vec<Vec<Option<Coverage>>>,
}

impl FairRecurrence {
    pub fn sccs(&self) -> &SccPartition {
        &self.sccs
    }

    pub fn is_sustainable(&self, id: usize) -> bool {
        self.sustainable[id]
    }

    pub fn sustainable_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.sccs.len()).filter(move |&id| self.sustainable[id])
    }

    /// Coverage witness for 1-based coordinate `i` in component `id`.
    pub fn coverage(&self, id: usize, i: usize) -> Option<Coverage> {
        self.coverage[id][i - 1]
    }

    pub fn coverage_of(&self, id: usize) -> &[Option<Coverage>] {
        &self.coverage[id]
    }

    /// Union of the sustainable components.
    pub fn states(&self) -> StateSet {
        let n = self.sccs.n();
        StateSet::from_indices(
            n,
            self.sustainable_ids()
                .flat_map(|id| self.sccs.members_raw(id).iter().map(|&v| v as usize)),
        )
    }
}

/// Decides sustainability of one component, recording a witness per
/// coordinate. `inside(v)` tests membership in the component.
fn cover_component(
    g: &TransitionGraph,
    members: &[u32],
    inside: impl Fn(u32) -> bool,
) -> (bool, Vec<Option<Coverage>>) {
    let n = g.n();
    let all = low_mask(n);
    let mut covered = 0u32;
    let mut witnesses: Vec<Option<Coverage>> = vec![None; n];
    let bit_of = |i: usize| 1u32 << (n - 1 - i);

    let record =
        |covered: &mut u32, witnesses: &mut Vec<Option<Coverage>>, bits: u32, w: Coverage| {
            for (i, slot) in witnesses.iter_mut().enumerate() {
                if bits & bit_of(i) != 0 && *covered & bit_of(i) == 0 {
                    *slot = Some(w);
                }
            }
            *covered |= bits;
        };

    for &v in members {
        let stable = all & !g.unstable_raw(v) & !covered;
        if stable != 0 {
            let w = Coverage::Stable {
                state: StateVector::from_raw(n, v),
            };
            record(&mut covered, &mut witnesses, stable, w);
        }
        if covered == all {
            return (true, witnesses);
        }
    }
    if members.len() == 1 {
        // no nonempty-mask edge returns to the same state
        return (false, witnesses);
    }

    let edge = |v: u32, e: u32| Coverage::Flipped {
        edge: Edge {
            source: StateVector::from_raw(n, v),
            mask: CoordinateSet::from_raw(n, e),
            target: StateVector::from_raw(n, v ^ e),
        },
    };
    // single flips first, they cover most coordinates cheaply
    for &v in members {
        let open = g.unstable_raw(v) & !covered;
        for e in (0..n).map(bit_of).filter(|b| open & b != 0) {
            if inside(v ^ e) {
                record(&mut covered, &mut witnesses, e, edge(v, e));
            }
        }
        if covered == all {
            return (true, witnesses);
        }
    }
    for &v in members {
        let u = g.unstable_raw(v);
        if u & !covered == 0 || u.count_ones() < 2 {
            continue;
        }
        for e in Subsets::new(u) {
            if e & !covered != 0 && e.count_ones() > 1 && inside(v ^ e) {
                record(&mut covered, &mut witnesses, e, edge(v, e));
                if covered == all {
                    return (true, witnesses);
                }
            }
        }
    }
    (covered == all, witnesses)
}

/// Union of the sustainable components of the subgraph induced by `within`,
/// with the decomposition and witnesses.
pub fn fair_recurrent_within(g: &TransitionGraph, within: &StateSet) -> Result<FairRecurrence> {
    let sccs = sccs_within(g, within)?;
    let mut sustainable = Vec::with_capacity(sccs.len());
    let mut coverage = Vec::with_capacity(sccs.len());
    for id in 0..sccs.len() {
        let members = sccs.members_raw(id);
        let (ok, witnesses) = cover_component(g, members, |v| sccs.component_raw(v) == Some(id));
        sustainable.push(ok);
        coverage.push(witnesses);
    }
    Ok(FairRecurrence {
        sccs,
        sustainable,
        coverage,
    })
}

/// Whether `set` itself, taken as one region, is strongly connected under
/// its internal edges and sustainable. This characterizes the sets that
/// occur as ω-limit sets of progressive schedules.
pub fn is_sustainable_set(g: &TransitionGraph, set: &StateSet) -> Result<bool> {
    let sccs = sccs_within(g, set)?;
    if sccs.len() != 1 {
        return Ok(false);
    }
    let members: Vec<u32> = set.indices().map(|v| v as u32).collect();
    Ok(cover_component(g, &members, |v| set.contains_index(v as usize)).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::GeneratorFunction;
    use crate::portrait::build_graph;

    fn fig1() -> TransitionGraph {
        build_graph(&GeneratorFunction::from_table(2, vec![0b11, 0b11, 0b10, 0b01]).unwrap())
    }

    fn set(n: usize, items: &[&str]) -> StateSet {
        StateSet::from_states(n, items.iter().map(|s| s.parse().unwrap())).unwrap()
    }

    #[test]
    fn figure_one_recurrence() {
        let g = fig1();
        let fr = fair_recurrent_within(&g, &StateSet::full(2).unwrap()).unwrap();
        assert_eq!(fr.states().to_string(), "{01, 10, 11}");
        // components: {00}, {01,11}, {10}
        assert!(!fr.is_sustainable(0));
        assert!(fr.is_sustainable(1));
        assert!(fr.is_sustainable(2));
        assert_eq!(
            fr.coverage(1, 2),
            Some(Coverage::Stable {
                state: "01".parse().unwrap()
            })
        );
        match fr.coverage(1, 1) {
            Some(Coverage::Flipped { edge }) => assert_eq!(edge.mask.indices(), vec![1]),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn identity_everything_recurrent() {
        let g = build_graph(&GeneratorFunction::identity(3).unwrap());
        let fr = fair_recurrent_within(&g, &StateSet::full(3).unwrap()).unwrap();
        assert!(fr.states().is_full());
    }

    #[test]
    fn lone_transient_state_is_not_recurrent() {
        let g = fig1();
        let fr = fair_recurrent_within(&g, &set(2, &["00"])).unwrap();
        assert!(fr.states().is_empty());
    }

    #[test]
    fn sustainable_sets_of_negation() {
        let g = build_graph(&GeneratorFunction::from_table(2, vec![3, 2, 1, 0]).unwrap());
        assert!(is_sustainable_set(&g, &set(2, &["01", "10"])).unwrap());
        assert!(is_sustainable_set(&g, &set(2, &["00", "11"])).unwrap());
        assert!(is_sustainable_set(&g, &StateSet::full(2).unwrap()).unwrap());
        assert!(!is_sustainable_set(&g, &set(2, &["00"])).unwrap());
        // 00 and 01 differ in coordinate 2 only; coordinate 1 never stays inside
        assert!(!is_sustainable_set(&g, &set(2, &["00", "01"])).unwrap());
    }

    #[test]
    fn multi_coordinate_edge_is_needed() {
        // 00 <-> 11 only through simultaneous flips
        let g = build_graph(&GeneratorFunction::from_table(2, vec![3, 1, 2, 0]).unwrap());
        assert!(is_sustainable_set(&g, &set(2, &["00", "11"])).unwrap());
        let fr = fair_recurrent_within(&g, &set(2, &["00", "11"])).unwrap();
        assert_eq!(fr.states().len(), 2);
    }
}
