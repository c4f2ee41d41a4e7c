use super::graph::{Subsets, TransitionGraph};
use crate::error::Result;
use crate::set::StateSet;
use crate::state::{check_same, StateVector};

const NONE: u32 = u32::MAX;

/// Strongly connected components of the subgraph induced by a state set.
///
/// Components are numbered by their smallest member; members of each
/// component are listed in increasing encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccPartition {
    n: usize,
    /// Component id per state, `u32::MAX` for states outside the set.
    component: Vec<u32>,
    offsets: Vec<usize>,
    members: Vec<u32>,
}

impl SccPartition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn members_raw(&self, id: usize) -> &[u32] {
        &self.members[self.offsets[id]..self.offsets[id + 1]]
    }

    pub fn members(&self, id: usize) -> impl Iterator<Item = StateVector> + '_ {
        let n = self.n;
        self.members_raw(id)
            .iter()
            .map(move |&v| StateVector::from_raw(n, v))
    }

    pub fn component_set(&self, id: usize) -> StateSet {
        StateSet::from_indices(self.n, self.members_raw(id).iter().map(|&v| v as usize))
    }

    /// Component containing `mu`, if `mu` belongs to the partitioned set.
    pub fn component_of(&self, mu: StateVector) -> Option<usize> {
        if mu.n() != self.n {
            return None;
        }
        self.component_raw(mu.bits())
    }

    #[inline]
    pub(crate) fn component_raw(&self, v: u32) -> Option<usize> {
        match self.component[v as usize] {
            NONE => None,
            c => Some(c as usize),
        }
    }

    pub fn to_sets(&self) -> Vec<StateSet> {
        (0..self.len()).map(|id| self.component_set(id)).collect()
    }
}

struct Frame {
    v: u32,
    subsets: Subsets,
}

/// Tarjan's algorithm restricted to edges with both ends in `within`.
pub fn sccs_within(g: &TransitionGraph, within: &StateSet) -> Result<SccPartition> {
    check_same(g.n(), within.n())?;
    within.require_nonempty()?;
    let count = g.state_count();

    let mut index = vec![NONE; count];
    let mut lowlink = vec![0u32; count];
    let mut on_stack = vec![false; count];
    let mut stack: Vec<u32> = Vec::new();
    let mut frames: Vec<Frame> = Vec::new();
    let mut next_index = 0u32;
    // components in discovery order, each a run in `found`
    let mut found: Vec<u32> = Vec::with_capacity(within.len());
    let mut found_offsets = vec![0usize];

    for root in within.indices() {
        let root = root as u32;
        if index[root as usize] != NONE {
            continue;
        }
        index[root as usize] = next_index;
        lowlink[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        frames.push(Frame {
            v: root,
            subsets: Subsets::new(g.unstable_raw(root)),
        });

        while let Some(frame) = frames.last_mut() {
            let v = frame.v;
            let mut descend = None;
            for e in frame.subsets.by_ref() {
                let w = v ^ e;
                if !within.contains_index(w as usize) {
                    continue;
                }
                if index[w as usize] == NONE {
                    descend = Some(w);
                    break;
                }
                if on_stack[w as usize] {
                    lowlink[v as usize] = lowlink[v as usize].min(index[w as usize]);
                }
            }
            if let Some(w) = descend {
                index[w as usize] = next_index;
                lowlink[w as usize] = next_index;
                next_index += 1;
                stack.push(w);
                on_stack[w as usize] = true;
                frames.push(Frame {
                    v: w,
                    subsets: Subsets::new(g.unstable_raw(w)),
                });
                continue;
            }

            frames.pop();
            if let Some(parent) = frames.last() {
                let p = parent.v as usize;
                lowlink[p] = lowlink[p].min(lowlink[v as usize]);
            }
            if lowlink[v as usize] == index[v as usize] {
                loop {
                    let w = stack.pop().expect("v is on the stack");
                    on_stack[w as usize] = false;
                    found.push(w);
                    if w == v {
                        break;
                    }
                }
                found_offsets.push(found.len());
            }
        }
    }

    // renumber by smallest member
    let runs = found_offsets.len() - 1;
    let mut order: Vec<(u32, usize)> = (0..runs)
        .map(|r| {
            let run = &mut found[found_offsets[r]..found_offsets[r + 1]];
            run.sort_unstable();
            (run[0], r)
        })
        .collect();
    order.sort_unstable();

    let mut component = vec![NONE; count];
    let mut offsets = Vec::with_capacity(runs + 1);
    let mut members = Vec::with_capacity(found.len());
    offsets.push(0);
    for (id, &(_, r)) in order.iter().enumerate() {
        for &v in &found[found_offsets[r]..found_offsets[r + 1]] {
            component[v as usize] = id as u32;
            members.push(v);
        }
        offsets.push(members.len());
    }
    Ok(SccPartition {
        n: g.n(),
        component,
        offsets,
        members,
    })
}
