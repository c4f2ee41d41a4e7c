//! Points of the Boolean cube, update masks and coordinate sets.
//!
//! All three are `n`-bit vectors packed into a `u32`. Coordinate 1 is the
//! most significant bit, so the integer encoding orders states exactly like
//! their bitstrings `μ_1μ_2...μ_n` sort lexicographically.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, ParseError, ParseErrorKind, Result};

/// Default upper bound on the dimension.
pub const DEFAULT_MAX_N: usize = 20;

/// Largest dimension the packed encoding can ever hold.
pub const HARD_MAX_N: usize = 28;

/// Configured ceiling on the dimension of generator functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimensionCap(usize);

impl DimensionCap {
    pub fn new(max_n: usize) -> Result<Self> {
        if max_n == 0 || max_n > HARD_MAX_N {
            return Err(Error::DimensionOutOfRange {
                n: max_n,
                max: HARD_MAX_N,
            });
        }
        Ok(DimensionCap(max_n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn check(self, n: usize) -> Result<()> {
        if n == 0 || n > self.0 {
            Err(Error::DimensionOutOfRange { n, max: self.0 })
        } else {
            Ok(())
        }
    }
}

impl Default for DimensionCap {
    fn default() -> Self {
        DimensionCap(DEFAULT_MAX_N)
    }
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Bit index (from the least significant end) of 1-based coordinate `i`.
#[inline]
pub(crate) fn coordinate_bit(n: usize, i: usize) -> u32 {
    1u32 << (n - i)
}

pub(crate) fn check_same(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

pub(crate) fn parse_bitstring(text: &str) -> std::result::Result<(usize, u32), ParseErrorKind> {
    let n = text.chars().count();
    if n == 0 || n > HARD_MAX_N || !text.chars().all(|c| c == '0' || c == '1') {
        return Err(ParseErrorKind::MalformedBitstring(text.to_string()));
    }
    let bits = text
        .bytes()
        .fold(0u32, |acc, b| (acc << 1) | u32::from(b == b'1'));
    Ok((n, bits))
}

fn write_bits(f: &mut fmt::Formatter<'_>, n: usize, bits: u32) -> fmt::Result {
    for i in 1..=n {
        let set = bits & coordinate_bit(n, i) != 0;
        f.write_str(if set { "1" } else { "0" })?;
    }
    Ok(())
}

macro_rules! packed_bits {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name {
            n: u8,
            bits: u32,
        }

        impl $name {
            /// Builds the vector from its integer encoding.
            pub fn new(n: usize, bits: u32) -> Result<Self> {
                if n == 0 || n > HARD_MAX_N {
                    return Err(Error::DimensionOutOfRange { n, max: HARD_MAX_N });
                }
                if bits & !low_mask(n) != 0 {
                    return Err(Error::BitsOutOfRange { value: u64::from(bits), n });
                }
                Ok($name { n: n as u8, bits })
            }

            /// Caller guarantees `1 <= n <= HARD_MAX_N` and `bits < 2^n`.
            #[inline]
            pub(crate) fn from_raw(n: usize, bits: u32) -> Self {
                debug_assert!((1..=HARD_MAX_N).contains(&n) && bits & !low_mask(n) == 0);
                $name { n: n as u8, bits }
            }

            pub fn zeros(n: usize) -> Result<Self> {
                Self::new(n, 0)
            }

            pub fn ones(n: usize) -> Result<Self> {
                Self::new(n, if n <= HARD_MAX_N { low_mask(n) } else { 0 })
            }

            /// Builds the vector from coordinate values, coordinate 1 first.
            pub fn from_coordinates(values: &[bool]) -> Result<Self> {
                let bits = values.iter().fold(0u32, |acc, &b| (acc << 1) | u32::from(b));
                Self::new(values.len(), bits)
            }

            #[inline]
            pub fn n(&self) -> usize {
                self.n as usize
            }

            /// Integer encoding (coordinate 1 is the most significant bit).
            #[inline]
            pub fn bits(&self) -> u32 {
                self.bits
            }

            /// Value of 1-based coordinate `i`.
            pub fn get(&self, i: usize) -> bool {
                assert!(i >= 1 && i <= self.n(), "coordinate {} out of range 1..={}", i, self.n);
                self.bits & coordinate_bit(self.n(), i) != 0
            }

            pub fn coordinates(&self) -> Vec<bool> {
                (1..=self.n()).map(|i| self.get(i)).collect()
            }

            /// Parses a bitstring whose length must equal `n`.
            pub fn parse_with_dim(text: &str, n: usize) -> std::result::Result<Self, ParseErrorKind> {
                let (len, bits) = parse_bitstring(text)?;
                if len != n {
                    return Err(ParseErrorKind::WrongLength { found: text.to_string(), expected: n });
                }
                Ok($name::from_raw(n, bits))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_bits(f, self.n(), self.bits)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}(", stringify!($name))?;
                write_bits(f, self.n(), self.bits)?;
                f.write_str(")")
            }
        }

        impl FromStr for $name {
            type Err = ParseError;

            fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
                let (n, bits) = parse_bitstring(s).map_err(|k| ParseError::new(1, 1, k))?;
                Ok($name::from_raw(n, bits))
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
                let text = String::deserialize(deserializer)?;
                text.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

packed_bits!(
    /// A point μ of {0,1}^n.
    StateVector
);

packed_bits!(
    /// An update mask ν: coordinate i is recomputed iff ν_i = 1.
    UpdateMask
);

impl UpdateMask {
    /// The mask with exactly the given 1-based coordinates set.
    pub fn from_coordinate_set(set: &CoordinateSet) -> Self {
        UpdateMask::from_raw(set.n(), set.bits())
    }
}

/// A subset of the coordinates {1,...,n}.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoordinateSet {
    n: u8,
    bits: u32,
}

impl CoordinateSet {
    pub fn empty(n: usize) -> Result<Self> {
        StateVector::zeros(n).map(|z| CoordinateSet { n: z.n, bits: 0 })
    }

    pub(crate) fn from_raw(n: usize, bits: u32) -> Self {
        debug_assert!(bits & !low_mask(n) == 0);
        CoordinateSet { n: n as u8, bits }
    }

    /// Builds the set from 1-based coordinate indices.
    pub fn from_indices(n: usize, members: &[usize]) -> Result<Self> {
        let mut set = CoordinateSet::empty(n)?;
        for &i in members {
            if i == 0 || i > n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: i,
                });
            }
            set.bits |= coordinate_bit(n, i);
        }
        Ok(set)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.n() && self.bits & coordinate_bit(self.n(), i) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_subset(&self, other: &CoordinateSet) -> bool {
        self.bits & !other.bits == 0
    }

    /// Members in increasing order, 1-based.
    pub fn indices(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&i| self.contains(i)).collect()
    }
}

impl fmt::Display for CoordinateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", list.join(","))
    }
}

impl fmt::Debug for CoordinateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoordinateSet{self}")
    }
}

impl Serialize for CoordinateSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices().serialize(serializer)
    }
}
