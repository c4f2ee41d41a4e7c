use std::fmt::Write;

use crate::error::{ParseError, ParseErrorKind, Result};
use crate::generator::GeneratorFunction;
use crate::set::StateSet;
use crate::state::{parse_bitstring, DimensionCap, StateVector};

/// Parses the `.tt` format: `n=<k>` followed by all 2^k rows
/// `<input> -> <output>` in increasing input order. Blank lines are ignored.
pub fn parse_truth_table(text: &str) -> Result<GeneratorFunction> {
    parse_truth_table_capped(text, DimensionCap::default())
}

pub fn parse_truth_table_capped(text: &str, cap: DimensionCap) -> Result<GeneratorFunction> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());

    let (header_line, header) = lines.next().ok_or_else(|| {
        ParseError::new(
            1,
            1,
            ParseErrorKind::Malformed("missing `n=<k>` header".into()),
        )
    })?;
    let n: usize = header
        .trim()
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| {
            ParseError::new(
                header_line,
                1,
                ParseErrorKind::Malformed(format!("expected `n=<k>`, found `{}`", header.trim())),
            )
        })?;
    cap.check(n)?;

    let rows: Vec<(usize, &str)> = lines.collect();
    let expected = 1usize << n;
    if rows.len() != expected {
        let line = rows.last().map_or(header_line, |r| r.0);
        return Err(ParseError::new(
            line,
            1,
            ParseErrorKind::WrongLineCount {
                expected,
                found: rows.len(),
            },
        )
        .into());
    }

    let mut table = Vec::with_capacity(expected);
    for (index, (line, row)) in rows.into_iter().enumerate() {
        let column = |part: &str| row.find(part).map_or(1, |c| c + 1);
        let (input, output) = row.split_once("->").ok_or_else(|| {
            ParseError::new(
                line,
                1,
                ParseErrorKind::Malformed(format!(
                    "expected `<input> -> <output>`, found `{}`",
                    row.trim()
                )),
            )
        })?;
        let (input, output) = (input.trim(), output.trim());
        let parse = |part: &str| -> Result<u32, ParseError> {
            let (len, bits) =
                parse_bitstring(part).map_err(|k| ParseError::new(line, column(part), k))?;
            if len != n {
                return Err(ParseError::new(
                    line,
                    column(part),
                    ParseErrorKind::WrongLength {
                        found: part.to_string(),
                        expected: n,
                    },
                ));
            }
            Ok(bits)
        };
        let in_bits = parse(input)?;
        if in_bits as usize != index {
            let expected = StateVector::new(n, index as u32)?.to_string();
            return Err(ParseError::new(
                line,
                column(input),
                ParseErrorKind::OutOfOrder {
                    found: input.to_string(),
                    expected,
                },
            )
            .into());
        }
        table.push(parse(output)?);
    }
    GeneratorFunction::from_table_capped(n, table, cap)
}

/// Renders Φ in the `.tt` format.
pub fn write_truth_table(phi: &GeneratorFunction) -> String {
    let mut out = format!("n={}\n", phi.n());
    for mu in phi.states() {
        let image = phi.evaluate(mu).expect("same dimension");
        let _ = writeln!(out, "{mu} -> {image}");
    }
    out
}

/// Parses a state-set literal such as `{01, 10}`. `{}` is the empty set.
pub fn parse_state_set(text: &str, n: usize) -> Result<StateSet> {
    let trimmed = text.trim();
    let offset = text.len() - text.trim_start().len();
    let inner = trimmed
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| {
            ParseError::new(
                1,
                offset + 1,
                ParseErrorKind::Malformed(format!("expected `{{...}}`, found `{trimmed}`")),
            )
        })?;
    let mut set = StateSet::empty(n)?;
    if inner.trim().is_empty() {
        return Ok(set);
    }
    let mut column = offset + 2;
    for item in inner.split(',') {
        let lead = item.len() - item.trim_start().len();
        let element = item.trim();
        let at = column + lead;
        let state =
            StateVector::parse_with_dim(element, n).map_err(|k| ParseError::new(1, at, k))?;
        if !set.insert(state)? {
            return Err(ParseError::new(
                1,
                at,
                ParseErrorKind::DuplicateElement(element.to_string()),
            )
            .into());
        }
        column += item.len() + 1;
    }
    Ok(set)
}
