//! Universal regular autonomous asynchronous systems generated by a Boolean
//! function Φ: {0,1}^n → {0,1}^n.
//!
//! The crate covers the whole pipeline: reading Φ from text ([`netio`]),
//! masked asynchronous updates ([`GeneratorFunction`]), progressive lasso
//! schedules ([`schedule`]), flows and ω-limit sets ([`flow`]), the
//! asynchronous state portrait with its fair-recurrence analysis
//! ([`portrait`]), and the invariance and basin decision procedures
//! ([`analysis`]). [`oracle`] holds brute-force reference procedures used to
//! cross-check the graph algorithms at small dimension.

pub mod analysis;
pub mod error;
pub mod flow;
pub mod netio;
pub mod oracle;
pub mod portrait;
pub mod schedule;

mod generator;
mod set;
mod state;

pub use error::{Error, ParseError, ParseErrorKind, Position, Result};
pub use flow::{flow, OmegaSet, Segment, Tail, Trajectory};
pub use generator::GeneratorFunction;
pub use schedule::{LassoSchedule, Time, TimedSchedule};
pub use set::StateSet;
pub use state::{CoordinateSet, DimensionCap, StateVector, UpdateMask, DEFAULT_MAX_N, HARD_MAX_N};
