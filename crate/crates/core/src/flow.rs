//! The flow Φ^ρ(μ, t) of a state under a timed schedule.
//!
//! The trajectory is piecewise constant: it equals μ before t_0 and
//! Φ^{α^0...α^k}(μ) on [t_k, t_{k+1}). Under a lasso schedule the pair
//! (state, position in the cycle) eventually repeats, after which the
//! trajectory is periodic. Only the breakpoints up to the first repetition
//! are stored; later values are resolved through the period.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::generator::GeneratorFunction;
use crate::schedule::{Time, TimedSchedule};
use crate::set::StateSet;
use crate::state::{check_same, StateVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    initial: StateVector,
    schedule: TimedSchedule,
    /// values[k] = Φ^{α^0...α^k}(μ) for k < tail_start + tail_len.
    values: Vec<StateVector>,
    tail_start: usize,
    tail_len: usize,
}

/// The periodic suffix of a trajectory, in firing indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Tail {
    pub start: usize,
    pub length: usize,
}

/// A maximal interval on which the trajectory is constant.
/// `None` bounds stand for −∞ and +∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: Option<Time>,
    pub end: Option<Time>,
    pub value: StateVector,
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.start {
            Some(t) => write!(f, "[{t}, ")?,
            None => f.write_str("(-inf, ")?,
        }
        match self.end {
            Some(t) => write!(f, "{t}) -> {}", self.value),
            None => write!(f, "inf) -> {}", self.value),
        }
    }
}

/// ω_ρ(μ) together with a time past which the trajectory stays inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaSet {
    pub states: StateSet,
    pub settle_time: Time,
}

/// Computes the trajectory of `mu` under `rho` up to its periodic tail.
pub fn flow(phi: &GeneratorFunction, mu: StateVector, rho: &TimedSchedule) -> Result<Trajectory> {
    check_same(phi.n(), mu.n())?;
    check_same(phi.n(), rho.n())?;
    let lasso = rho.lasso();
    let prefix_len = lasso.prefix().len();
    let cycle_len = lasso.cycle().len();

    let mut values = Vec::new();
    let mut seen: HashMap<(u32, usize), usize> = HashMap::new();
    let mut state = mu.bits();
    let mut k = 0usize;
    loop {
        state = phi.apply_raw(state, lasso.mask(k).bits());
        if k >= prefix_len {
            let next_position = (k + 1 - prefix_len) % cycle_len;
            if let Some(&j) = seen.get(&(state, next_position)) {
                return Ok(Trajectory {
                    initial: mu,
                    schedule: rho.clone(),
                    values,
                    tail_start: j,
                    tail_len: k - j,
                });
            }
            seen.insert((state, next_position), k);
        }
        values.push(StateVector::from_raw(phi.n(), state));
        k += 1;
    }
}

impl Trajectory {
    pub fn initial(&self) -> StateVector {
        self.initial
    }

    pub fn schedule(&self) -> &TimedSchedule {
        &self.schedule
    }

    pub fn tail(&self) -> Tail {
        Tail {
            start: self.tail_start,
            length: self.tail_len,
        }
    }

    /// Materialized breakpoints (t_k, Φ^{α^0...α^k}(μ)), through the end of
    /// the first tail block.
    pub fn breakpoints(&self) -> impl Iterator<Item = (Time, StateVector)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (self.schedule.time(k), v))
    }

    /// Value on [t_k, t_{k+1}).
    pub fn value_after_firing(&self, k: usize) -> StateVector {
        if k < self.values.len() {
            self.values[k]
        } else {
            self.values[self.tail_start + (k - self.tail_start) % self.tail_len]
        }
    }

    /// Φ^ρ(μ, t).
    pub fn value_at(&self, t: Time) -> StateVector {
        match self.schedule.last_firing_at(t) {
            None => self.initial,
            Some(k) => self.value_after_firing(k),
        }
    }

    /// Or_ρ(μ): every value the trajectory takes.
    pub fn orbit_set(&self) -> StateSet {
        let mut set = StateSet::from_states(self.initial.n(), self.values.iter().copied())
            .expect("values share the dimension");
        set.insert_index(self.initial.bits() as usize);
        set
    }

    /// {Φ^ρ(μ, t) | t ≥ t′}.
    pub fn values_from(&self, t_prime: Time) -> StateSet {
        let mut set = StateSet::from_states(self.initial.n(), [self.value_at(t_prime)])
            .expect("values share the dimension");
        let first = self.schedule.first_firing_after(t_prime);
        // one full tail block past both `first` and the tail start
        let last = first.max(self.tail_start) + self.tail_len;
        for k in first..last {
            set.insert_index(self.value_after_firing(k).bits() as usize);
        }
        set
    }

    /// ω_ρ(μ): the values of the periodic tail.
    pub fn omega_set(&self) -> OmegaSet {
        let tail = &self.values[self.tail_start..self.tail_start + self.tail_len];
        OmegaSet {
            states: StateSet::from_states(self.initial.n(), tail.iter().copied())
                .expect("values share the dimension"),
            settle_time: self.schedule.time(self.tail_start),
        }
    }

    /// lim Φ^ρ(μ, t) when it exists, i.e. when the ω-limit set is a singleton.
    pub fn final_value(&self) -> Option<StateVector> {
        let omega = self.omega_set().states;
        if omega.len() == 1 {
            omega.first()
        } else {
            None
        }
    }

    fn tail_is_constant_from(&self, k: usize) -> bool {
        if k < self.tail_start {
            return false;
        }
        let v = self.value_after_firing(k);
        self.values[self.tail_start..].iter().all(|&w| w == v)
    }

    /// Maximal constant segments in time order, from the one containing −∞
    /// through the one that reaches `horizon`.
    pub fn segments(&self, horizon: Time) -> Vec<Segment> {
        let mut out = Vec::new();
        let mut current = Segment {
            start: None,
            end: None,
            value: self.initial,
        };
        let mut j = 0usize;
        loop {
            while self.value_after_firing(j) == current.value {
                if self.tail_is_constant_from(j) {
                    out.push(current);
                    return out;
                }
                j += 1;
            }
            let change = self.schedule.time(j);
            current.end = Some(change);
            out.push(current);
            if change >= horizon {
                return out;
            }
            current = Segment {
                start: Some(change),
                end: None,
                value: self.value_after_firing(j),
            };
            j += 1;
        }
    }
}

impl Serialize for Segment {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Segment", 3)?;
        st.serialize_field("start", &self.start.map(|t| t.to_string()))?;
        st.serialize_field("end", &self.end.map(|t| t.to_string()))?;
        st.serialize_field("state", &self.value)?;
        st.end()
    }
}
