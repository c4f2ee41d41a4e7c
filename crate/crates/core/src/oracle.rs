//! Brute-force reference procedures for small dimensions.
//!
//! Everything here works directly from the definitions: raw masks
//! ν ∈ {0,1}^n are enumerated exhaustively, and every ω-limit set the oracle
//! reports is realized by an explicit progressive lasso whose simulation
//! through [`crate::flow`] reproduces it. Nothing in this module uses the
//! portrait or analysis code, so agreement with them is meaningful.
//!
//! Achievable recurrent sets are found as the visited sets of closed walks
//! `s → … → s` of length at most `max_cycle` whose masks fire every
//! coordinate; a walk read as a lasso cycle repeats forever and its ω-limit
//! set is exactly the walk's visited set. A state μ realizes such a set S
//! when some member of S is reachable from μ in at most `max_prefix` masked
//! updates.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::flow::flow;
use crate::generator::GeneratorFunction;
use crate::schedule::{LassoSchedule, TimedSchedule};
use crate::set::StateSet;
use crate::state::{check_same, low_mask, StateVector, UpdateMask};

pub const ORACLE_MAX_N: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    max_prefix: usize,
    max_cycle: usize,
    max_n: usize,
}

impl OracleBudget {
    pub fn new(max_prefix: usize, max_cycle: usize, max_n: usize) -> Result<Self> {
        if max_n > ORACLE_MAX_N {
            return Err(Error::BudgetExceeded(format!(
                "oracle supports n <= {ORACLE_MAX_N}, budget asks for {max_n}"
            )));
        }
        if max_cycle == 0 {
            return Err(Error::BudgetExceeded(
                "cycle length must be at least 1".into(),
            ));
        }
        Ok(OracleBudget {
            max_prefix,
            max_cycle,
            max_n,
        })
    }

    /// Prefix up to 2^n - 1 (any simple path) and cycle up to n·2^n.
    pub fn for_dimension(n: usize) -> Result<Self> {
        Self::new((1usize << n) - 1, n << n, n)
    }

    pub fn max_prefix(&self) -> usize {
        self.max_prefix
    }

    pub fn max_cycle(&self) -> usize {
        self.max_cycle
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }
}

/// A closed walk from `start`: `states[k]` is the state after `masks[k]`,
/// the last one being `start` again.
#[derive(Clone, Debug)]
struct Walk {
    start: u32,
    masks: Vec<u32>,
    states: Vec<u32>,
}

impl Walk {
    /// The same walk read from the first visit of `entry`.
    fn rotated_to(&self, entry: u32) -> Vec<u32> {
        if entry == self.start {
            return self.masks.clone();
        }
        let j = self
            .states
            .iter()
            .position(|&v| v == entry)
            .expect("entry lies on the walk")
            + 1;
        let mut cycle = self.masks[j..].to_vec();
        cycle.extend_from_slice(&self.masks[..j]);
        cycle
    }
}

/// An ω-limit set together with a schedule producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaWitness {
    pub set: StateSet,
    pub schedule: TimedSchedule,
}

/// Exhaustive enumeration of achievable recurrent sets for one Φ.
pub struct Oracle<'a> {
    phi: &'a GeneratorFunction,
    budget: OracleBudget,
    walks: BTreeMap<StateSet, Walk>,
    /// Achievable ω-limit sets per initial state.
    omega: Vec<Vec<StateSet>>,
}

impl<'a> Oracle<'a> {
    pub fn new(phi: &'a GeneratorFunction, budget: OracleBudget) -> Result<Self> {
        if phi.n() > budget.max_n {
            return Err(Error::BudgetExceeded(format!(
                "dimension {} exceeds the oracle budget of {}",
                phi.n(),
                budget.max_n
            )));
        }
        let mut oracle = Oracle {
            phi,
            budget,
            walks: BTreeMap::new(),
            omega: Vec::new(),
        };
        for s in 0..phi.state_count() as u32 {
            oracle.closed_walks_from(s);
        }
        for (set, walk) in &oracle.walks {
            let start = StateVector::from_raw(phi.n(), walk.start);
            let rho = oracle.schedule(Vec::new(), walk.masks.clone());
            let trajectory = flow(phi, start, &rho)?;
            assert_eq!(
                &trajectory.omega_set().states,
                set,
                "walk from {start} under {rho}"
            );
            assert!(trajectory.orbit_set().is_subset(set));
        }
        oracle.omega = (0..phi.state_count() as u32)
            .map(|mu| {
                oracle
                    .reachable_sets(mu, None)
                    .into_iter()
                    .map(|(s, _, _)| s.clone())
                    .collect()
            })
            .collect();
        Ok(oracle)
    }

    pub fn budget(&self) -> OracleBudget {
        self.budget
    }

    fn n(&self) -> usize {
        self.phi.n()
    }

    fn step(&self, v: u32, nu: u32) -> u32 {
        v ^ (nu & (self.phi.table()[v as usize] ^ v))
    }

    fn schedule(&self, prefix: Vec<u32>, cycle: Vec<u32>) -> TimedSchedule {
        let n = self.n();
        let masks = |m: Vec<u32>| m.into_iter().map(|b| UpdateMask::from_raw(n, b)).collect();
        LassoSchedule::new(masks(prefix), masks(cycle))
            .expect("oracle walks fire every coordinate")
            .with_unit_times()
    }

    /// Breadth-first search over (position, visited states, fired
    /// coordinates), restricted to states ≥ `s` so every closed walk is
    /// found from its smallest state.
    fn closed_walks_from(&mut self, s: u32) {
        let n = self.n();
        let all = low_mask(n);
        let count = 1u32 << n;
        let key = |v: u32, visited: u32, fired: u32| {
            ((visited as usize) << (2 * n)) | ((fired as usize) << n) | v as usize
        };
        let size = 1usize << (count as usize + 2 * n);
        const UNSEEN: u32 = u32::MAX;
        let mut parent = vec![UNSEEN; size];
        let mut via = vec![0u8; size];
        let mut depth = vec![0u16; size];

        let root = key(s, 1 << s, 0);
        parent[root] = root as u32;
        let mut queue = VecDeque::from([(s, 1u32 << s, 0u32)]);
        while let Some((v, visited, fired)) = queue.pop_front() {
            let here = key(v, visited, fired);
            let d = depth[here] as usize;
            if d == self.budget.max_cycle {
                continue;
            }
            for nu in 1..=all {
                let w = self.step(v, nu);
                if w < s {
                    continue;
                }
                let (vis, f) = (visited | 1 << w, fired | nu);
                let next = key(w, vis, f);
                if parent[next] != UNSEEN {
                    continue;
                }
                parent[next] = here as u32;
                via[next] = nu as u8;
                depth[next] = (d + 1) as u16;
                queue.push_back((w, vis, f));
                if w == s && f == all {
                    let set = StateSet::from_indices(
                        n,
                        (0..count as usize).filter(|&x| vis & (1 << x) != 0),
                    );
                    if self.walks.contains_key(&set) {
                        continue;
                    }
                    let mut masks = Vec::new();
                    let mut states = Vec::new();
                    let mut cur = next;
                    while cur != root {
                        masks.push(via[cur] as u32);
                        states.push((cur & ((1 << n) - 1)) as u32);
                        cur = parent[cur] as usize;
                    }
                    masks.reverse();
                    states.reverse();
                    self.walks.insert(
                        set,
                        Walk {
                            start: s,
                            masks,
                            states,
                        },
                    );
                }
            }
        }
    }

    /// Sets S for which a progressive lasso started in S has ω-limit set S.
    pub fn sustainable_sets(&self) -> Vec<StateSet> {
        self.walks.keys().cloned().collect()
    }

    /// Shortest raw-mask paths from `mu` within `max_prefix` steps, through
    /// states accepted by `allowed`.
    fn paths_from(&self, mu: u32, allowed: impl Fn(u32) -> bool) -> BTreeMap<u32, Vec<u32>> {
        let all = low_mask(self.n());
        let mut paths = BTreeMap::from([(mu, Vec::new())]);
        let mut queue = VecDeque::from([mu]);
        while let Some(v) = queue.pop_front() {
            let path = paths[&v].clone();
            if path.len() == self.budget.max_prefix {
                continue;
            }
            for nu in 1..=all {
                let w = self.step(v, nu);
                if !allowed(w) || paths.contains_key(&w) {
                    continue;
                }
                let mut p = path.clone();
                p.push(nu);
                paths.insert(w, p);
                queue.push_back(w);
            }
        }
        paths
    }

    /// Achievable sets for `mu` (inside `within`, with the whole orbit kept
    /// there) with the entry state and prefix reaching them.
    fn reachable_sets(
        &self,
        mu: u32,
        within: Option<&StateSet>,
    ) -> Vec<(&StateSet, u32, Vec<u32>)> {
        let n = self.n();
        let allowed = |v: u32| within.is_none_or(|a| a.contains(StateVector::from_raw(n, v)));
        if !allowed(mu) {
            return Vec::new();
        }
        let paths = self.paths_from(mu, allowed);
        self.walks
            .iter()
            .filter(|(set, _)| within.is_none_or(|a| set.is_subset(a)))
            .filter_map(|(set, walk)| {
                walk.states
                    .iter()
                    .find_map(|v| paths.get(v).map(|p| (set, *v, p.clone())))
            })
            .collect()
    }

    fn witnesses(&self, mu: StateVector, within: Option<&StateSet>) -> Result<Vec<OmegaWitness>> {
        check_same(self.n(), mu.n())?;
        let mut out = Vec::new();
        for (set, entry, prefix) in self.reachable_sets(mu.bits(), within) {
            let schedule = self.schedule(prefix, self.walks[set].rotated_to(entry));
            let trajectory = flow(self.phi, mu, &schedule)?;
            assert_eq!(&trajectory.omega_set().states, set, "{mu} under {schedule}");
            if let Some(a) = within {
                assert!(trajectory.orbit_set().is_subset(a), "{mu} under {schedule}");
            }
            out.push(OmegaWitness {
                set: set.clone(),
                schedule,
            });
        }
        Ok(out)
    }

    /// Every ω-limit set of `mu` in the budgeted schedule space, each with
    /// a schedule that produces it.
    pub fn omega_witnesses(&self, mu: StateVector) -> Result<Vec<OmegaWitness>> {
        self.witnesses(mu, None)
    }

    pub fn omega_sets(&self, mu: StateVector) -> Result<Vec<StateSet>> {
        check_same(self.n(), mu.n())?;
        Ok(self.omega[mu.bits() as usize].clone())
    }

    /// ∃ρ: ω ⊆ A, and ∀ρ: ω ⊆ A, per state.
    pub fn basins(&self, a: &StateSet) -> Result<(StateSet, StateSet)> {
        check_same(self.n(), a.n())?;
        a.require_nonempty()?;
        let mut p = StateSet::empty(self.n())?;
        let mut q = StateSet::empty(self.n())?;
        for (mu, sets) in self.phi.states().zip(&self.omega) {
            if sets.iter().any(|s| s.is_subset(a)) {
                p.insert(mu)?;
            }
            if sets.iter().all(|s| s.is_subset(a)) {
                q.insert(mu)?;
            }
        }
        Ok((p, q))
    }

    /// Schedules keeping the whole orbit of `mu` inside A.
    pub fn confined_witnesses(&self, mu: StateVector, a: &StateSet) -> Result<Vec<OmegaWitness>> {
        check_same(self.n(), a.n())?;
        if !a.contains(mu) {
            return Ok(Vec::new());
        }
        self.witnesses(mu, Some(a))
    }

    /// Every μ ∈ A has a progressive schedule whose orbit stays in A.
    pub fn is_p_invariant(&self, a: &StateSet) -> Result<bool> {
        a.require_nonempty()?;
        check_same(self.n(), a.n())?;
        Ok(a.iter()
            .all(|mu| !self.reachable_sets(mu.bits(), Some(a)).is_empty()))
    }

    /// Union of the achievable recurrent sets inside B.
    pub fn fair_recurrent_within(&self, b: &StateSet) -> Result<StateSet> {
        check_same(self.n(), b.n())?;
        b.require_nonempty()?;
        let mut out = StateSet::empty(self.n())?;
        for set in self.walks.keys().filter(|s| s.is_subset(b)) {
            out = out.union(set)?;
        }
        Ok(out)
    }
}

pub fn oracle_omega_sets(
    phi: &GeneratorFunction,
    mu: StateVector,
    budget: OracleBudget,
) -> Result<Vec<StateSet>> {
    Oracle::new(phi, budget)?.omega_sets(mu)
}

pub fn oracle_sustainable_sets(
    phi: &GeneratorFunction,
    budget: OracleBudget,
) -> Result<Vec<StateSet>> {
    Ok(Oracle::new(phi, budget)?.sustainable_sets())
}

pub fn oracle_basins(
    phi: &GeneratorFunction,
    a: &StateSet,
    budget: OracleBudget,
) -> Result<(StateSet, StateSet)> {
    Oracle::new(phi, budget)?.basins(a)
}

/// ω-limit sets of every progressive lasso with at most `max_prefix` prefix
/// masks and at most `max_cycle` cycle masks, enumerated literally over all
/// mask words (the empty mask included). Only usable for tiny budgets.
pub fn enumerate_lassos(
    phi: &GeneratorFunction,
    mu: StateVector,
    max_prefix: usize,
    max_cycle: usize,
) -> Result<BTreeSet<StateSet>> {
    check_same(phi.n(), mu.n())?;
    let n = phi.n();
    if n > ORACLE_MAX_N {
        return Err(Error::BudgetExceeded(format!(
            "literal enumeration needs n <= {ORACLE_MAX_N}"
        )));
    }
    let masks = 1usize << n;
    let words = |len: usize| {
        (0..masks.pow(len as u32)).map(move |mut code| {
            let mut word = Vec::with_capacity(len);
            for _ in 0..len {
                word.push(UpdateMask::from_raw(n, (code % masks) as u32));
                code /= masks;
            }
            word
        })
    };
    let mut out = BTreeSet::new();
    for p in 0..=max_prefix {
        for prefix in words(p) {
            for c in 1..=max_cycle {
                for cycle in words(c) {
                    let Ok(lasso) = LassoSchedule::new(prefix.clone(), cycle) else {
                        continue;
                    };
                    out.insert(flow(phi, mu, &lasso.with_unit_times())?.omega_set().states);
                }
            }
        }
    }
    Ok(out)
}
