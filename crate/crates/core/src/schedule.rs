//! Progressive update schedules in eventually-periodic (lasso) form.
//!
//! A [`LassoSchedule`] is the mask sequence `prefix ++ cycle ++ cycle ++ ...`.
//! It is progressive when every coordinate is set in some cycle mask, so each
//! coordinate is computed infinitely often. A [`TimedSchedule`] attaches
//! strictly increasing, unbounded firing times to the masks.

use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::state::{check_same, low_mask, UpdateMask};

/// Exact firing time.
pub type Time = Ratio<i64>;

/// Integer time `k`.
pub fn time(k: i64) -> Time {
    Time::from_integer(k)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LassoSchedule {
    n: usize,
    prefix: Vec<UpdateMask>,
    cycle: Vec<UpdateMask>,
}

impl LassoSchedule {
    /// Builds a lasso and checks that it is progressive.
    pub fn new(prefix: Vec<UpdateMask>, cycle: Vec<UpdateMask>) -> Result<Self> {
        let n = cycle.first().ok_or(Error::EmptyCycle)?.n();
        for m in prefix.iter().chain(&cycle) {
            check_same(n, m.n())?;
        }
        validate_progressive(LassoSchedule { n, prefix, cycle })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prefix(&self) -> &[UpdateMask] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[UpdateMask] {
        &self.cycle
    }

    /// The k-th mask α^k.
    pub fn mask(&self, k: usize) -> UpdateMask {
        if k < self.prefix.len() {
            self.prefix[k]
        } else {
            self.cycle[(k - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Attaches the default times t_k = k (period = cycle length).
    pub fn with_unit_times(self) -> TimedSchedule {
        let count = self.prefix.len() + self.cycle.len();
        let times = (0..count as i64).map(time).collect();
        let period = time(self.cycle.len() as i64);
        TimedSchedule {
            lasso: self,
            times,
            period,
        }
    }
}

/// Accepts `s` iff every coordinate is set in at least one cycle mask.
pub fn validate_progressive(s: LassoSchedule) -> Result<LassoSchedule> {
    if s.cycle.is_empty() {
        return Err(Error::EmptyCycle);
    }
    let covered = s.cycle.iter().fold(0u32, |acc, m| acc | m.bits());
    let missing = low_mask(s.n) & !covered;
    if missing != 0 {
        let starving = (1..=s.n)
            .filter(|&i| missing & (1u32 << (s.n - i)) != 0)
            .collect();
        return Err(Error::NotProgressive { starving });
    }
    Ok(s)
}

fn write_masks(f: &mut fmt::Formatter<'_>, masks: &[UpdateMask]) -> fmt::Result {
    for (k, m) in masks.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        write!(f, "{m}")?;
    }
    Ok(())
}

/// Literal form `prefix;cycle`, e.g. `;11,01`.
impl fmt::Display for LassoSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_masks(f, &self.prefix)?;
        f.write_str(";")?;
        write_masks(f, &self.cycle)
    }
}

impl fmt::Debug for LassoSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LassoSchedule({self})")
    }
}

/// A lasso with firing times.
///
/// `times` holds t_0..t_{P+C-1} for the prefix and the first cycle pass.
/// Later firings repeat the first pass shifted by multiples of `period`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TimedSchedule {
    lasso: LassoSchedule,
    times: Vec<Time>,
    period: Time,
}

impl TimedSchedule {
    pub fn new(lasso: LassoSchedule, times: Vec<Time>, period: Time) -> Result<Self> {
        let expected = lasso.prefix.len() + lasso.cycle.len();
        if times.len() != expected {
            return Err(Error::InvalidTimes(format!(
                "expected {expected} times (prefix plus one cycle pass), found {}",
                times.len()
            )));
        }
        if !period.is_positive() {
            return Err(Error::InvalidTimes(format!(
                "period {period} must be positive"
            )));
        }
        if let Some(w) = times.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTimes(format!(
                "times must strictly increase, found {} then {}",
                w[0], w[1]
            )));
        }
        let first_pass = times[lasso.prefix.len()];
        let last = *times.last().expect("cycle is nonempty");
        if last >= first_pass + period {
            return Err(Error::InvalidTimes(format!(
                "cycle pass spans [{first_pass}, {last}], longer than the period {period}"
            )));
        }
        Ok(TimedSchedule {
            lasso,
            times,
            period,
        })
    }

    pub fn lasso(&self) -> &LassoSchedule {
        &self.lasso
    }

    pub fn n(&self) -> usize {
        self.lasso.n
    }

    pub fn times(&self) -> &[Time] {
        &self.times
    }

    pub fn period(&self) -> Time {
        self.period
    }

    fn prefix_len(&self) -> usize {
        self.lasso.prefix.len()
    }

    fn cycle_len(&self) -> usize {
        self.lasso.cycle.len()
    }

    /// The time t_k of the k-th firing.
    pub fn time(&self, k: usize) -> Time {
        let p = self.prefix_len();
        if k < p {
            return self.times[k];
        }
        let j = k - p;
        let (q, r) = (j / self.cycle_len(), j % self.cycle_len());
        self.times[p + r] + self.period * Time::from_integer(q as i64)
    }

    /// (t_k, α^k).
    pub fn firing(&self, k: usize) -> (Time, UpdateMask) {
        (self.time(k), self.lasso.mask(k))
    }

    /// Index of the last firing with t_k ≤ t, or `None` when t < t_0.
    pub fn last_firing_at(&self, t: Time) -> Option<usize> {
        if t < self.times[0] {
            return None;
        }
        let p = self.prefix_len();
        let c = self.cycle_len();
        let start = self.times[p];
        if t < start {
            // only prefix firings are due
            return Some(self.times[..p].partition_point(|&tk| tk <= t) - 1);
        }
        let q = ((t - start) / self.period)
            .floor()
            .to_integer()
            .to_usize()
            .expect("nonnegative pass index");
        let offset = self.period * Time::from_integer(q as i64);
        let within = self.times[p..].partition_point(|&tk| tk + offset <= t);
        debug_assert!(within >= 1);
        Some(p + q * c + within - 1)
    }

    /// Index of the first firing with t_k > t.
    pub fn first_firing_after(&self, t: Time) -> usize {
        self.last_firing_at(t).map_or(0, |k| k + 1)
    }

    /// Every firing time increased by `tau`; masks unchanged.
    pub fn shift(&self, tau: Time) -> TimedSchedule {
        TimedSchedule {
            lasso: self.lasso.clone(),
            times: self.times.iter().map(|&t| t + tau).collect(),
            period: self.period,
        }
    }

    /// Drops every firing with t_k ≤ `t_cut`.
    pub fn restrict_after(&self, t_cut: Time) -> TimedSchedule {
        self.drop_firings(self.first_firing_after(t_cut))
    }

    /// The schedule of firings k, k+1, ... of `self`.
    pub fn drop_firings(&self, k: usize) -> TimedSchedule {
        let p = self.prefix_len();
        let c = self.cycle_len();
        if k <= p {
            return TimedSchedule {
                lasso: LassoSchedule {
                    n: self.lasso.n,
                    prefix: self.lasso.prefix[k..].to_vec(),
                    cycle: self.lasso.cycle.clone(),
                },
                times: self.times[k..].to_vec(),
                period: self.period,
            };
        }
        // rotate the cycle so that firing k opens it
        let r = (k - p) % c;
        let mut cycle = self.lasso.cycle[r..].to_vec();
        cycle.extend_from_slice(&self.lasso.cycle[..r]);
        let times = (k..k + c).map(|j| self.time(j)).collect();
        TimedSchedule {
            lasso: LassoSchedule {
                n: self.lasso.n,
                prefix: Vec::new(),
                cycle,
            },
            times,
            period: self.period,
        }
    }

    /// Whether the times are exactly t_k = k with period = cycle length.
    pub fn has_unit_times(&self) -> bool {
        self.period == time(self.cycle_len() as i64)
            && self
                .times
                .iter()
                .enumerate()
                .all(|(k, &t)| t == time(k as i64))
    }
}

/// Literal form `prefix;cycle@t0,t1,.../period`; the time suffix is omitted
/// for unit times. Fractions are parenthesized so the period separator stays
/// unambiguous.
impl fmt::Display for TimedSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lasso)?;
        if !self.has_unit_times() {
            let times: Vec<String> = self.times.iter().map(|&t| time_literal(t)).collect();
            write!(f, "@{}/{}", times.join(","), time_literal(self.period))?;
        }
        Ok(())
    }
}

impl fmt::Debug for TimedSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TimedSchedule({self})")
    }
}

impl Serialize for TimedSchedule {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn literal_error(column: usize, message: String) -> Error {
    ParseError::new(1, column, ParseErrorKind::Malformed(message)).into()
}

fn time_literal(t: Time) -> String {
    if t.is_integer() {
        t.to_string()
    } else {
        format!("({t})")
    }
}

/// Splits `t0,...,tk/period` at the last `/` outside parentheses.
fn split_period(timing: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    let mut split = None;
    for (k, ch) in timing.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => split = Some(k),
            _ => {}
        }
    }
    split.map(|k| (&timing[..k], &timing[k + 1..]))
}

/// Parses a decimal (`1.25`), integer (`-3`) or fraction (`7/2`) time,
/// optionally in parentheses.
pub fn parse_time(text: &str) -> Option<Time> {
    let mut text = text.trim();
    if let Some(inner) = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        text = inner.trim();
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().ok()?;
        let den: i64 = den.trim().parse().ok()?;
        return (den != 0).then(|| Time::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 12 {
            return None;
        }
        let negative = int.trim_start().starts_with('-');
        let whole: i64 = if int == "-" || int.is_empty() {
            0
        } else {
            int.parse().ok()?
        };
        let scale = 10i64.checked_pow(frac.len() as u32)?;
        let part = Time::new(frac.parse().ok()?, scale);
        let whole = Time::from_integer(whole);
        return Some(if negative { whole - part } else { whole + part });
    }
    text.parse::<i64>().ok().map(Time::from_integer)
}

fn parse_mask_list(text: &str, base: usize, n: Option<usize>) -> Result<Vec<UpdateMask>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut masks = Vec::new();
    let mut column = base;
    for item in text.split(',') {
        let lead = item.len() - item.trim_start().len();
        let element = item.trim();
        let mask: UpdateMask = match n {
            Some(n) => UpdateMask::parse_with_dim(element, n)
                .map_err(|k| Error::from(ParseError::new(1, column + lead, k)))?,
            None => element
                .parse()
                .map_err(|e: ParseError| Error::from(ParseError::new(1, column + lead, e.kind)))?,
        };
        masks.push(mask);
        column += item.len() + 1;
    }
    Ok(masks)
}

/// Parses a schedule literal `prefix;cycle`, optionally followed by
/// `@t0,t1,.../period` listing the times of the prefix and first cycle pass.
///
/// Without explicit times the schedule fires at t_k = k. When `n` is given,
/// every mask must have that width.
pub fn parse_schedule(text: &str, n: Option<usize>) -> Result<TimedSchedule> {
    let (masks, timing) = match text.split_once('@') {
        Some((m, t)) => (m, Some((t, m.len() + 2))),
        None => (text, None),
    };
    let (prefix_text, cycle_text) = masks.split_once(';').ok_or_else(|| {
        literal_error(
            1,
            format!("expected `prefix;cycle`, found `{}`", text.trim()),
        )
    })?;
    let prefix = parse_mask_list(prefix_text, 1, n)?;
    let cycle = parse_mask_list(cycle_text, prefix_text.len() + 2, n)?;
    if cycle.is_empty() {
        return Err(Error::EmptyCycle);
    }
    let lasso = LassoSchedule::new(prefix, cycle)?;
    let Some((timing, column)) = timing else {
        return Ok(lasso.with_unit_times());
    };
    let (times_text, period_text) = split_period(timing)
        .ok_or_else(|| literal_error(column, "expected `@t0,t1,.../period`".into()))?;
    let times = times_text
        .split(',')
        .map(|t| {
            parse_time(t)
                .ok_or_else(|| literal_error(column, format!("invalid time `{}`", t.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    let period = parse_time(period_text)
        .ok_or_else(|| literal_error(column, format!("invalid period `{}`", period_text.trim())))?;
    if period.is_zero() {
        return Err(Error::InvalidTimes("period must be positive".into()));
    }
    TimedSchedule::new(lasso, times, period)
}
