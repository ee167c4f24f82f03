//! Fixed-width bit strings labelling machine and joint energy levels.
//!
//! The textual form is `b1 b2 ... bn` with `b1` the leftmost character. For
//! machine strings `b1` is the warmest qubit (smallest gap). Joint strings
//! prepend the system bit, so qubit index 0 is always the leftmost character.
//! Internally `b1` is the most significant bit of `value`, which makes the
//! numeric order coincide with the lexicographic order of the text.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported width.
pub const MAX_WIDTH: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    width: u8,
    value: u32,
}

impl BitString {
    pub fn new(width: usize, value: u32) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::TooLarge {
                what: "width",
                value: width,
                max: MAX_WIDTH,
            });
        }
        if u64::from(value) >= 1u64 << width {
            return Err(Error::Usage(format!(
                "value {value} does not fit in {width} bits"
            )));
        }
        Ok(Self::from_parts(width, value))
    }

    /// Unchecked constructor for callers that already hold the invariants.
    pub(crate) fn from_parts(width: usize, value: u32) -> Self {
        debug_assert!(width <= MAX_WIDTH && u64::from(value) < 1u64 << width);
        Self {
            width: width as u8,
            value,
        }
    }

    pub fn zeros(width: usize) -> Self {
        Self::from_parts(width, 0)
    }

    pub fn ones(width: usize) -> Self {
        Self::from_parts(width, mask(width))
    }

    /// Every string of the given width in ascending numeric order.
    pub fn all(width: usize) -> impl DoubleEndedIterator<Item = BitString> + ExactSizeIterator {
        assert!(width <= MAX_WIDTH, "width {width} exceeds {MAX_WIDTH}");
        (0..1u32 << width).map(move |v| Self::from_parts(width, v))
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    /// Bit at position `i`, counted from the left starting at 0.
    pub fn bit(&self, i: usize) -> bool {
        assert!(
            i < self.width(),
            "bit {i} out of range for width {}",
            self.width
        );
        (self.value >> (self.width() - 1 - i)) & 1 == 1
    }

    pub fn flip(&self, i: usize) -> Self {
        assert!(
            i < self.width(),
            "bit {i} out of range for width {}",
            self.width
        );
        Self::from_parts(self.width(), self.value ^ (1 << (self.width() - 1 - i)))
    }

    pub fn with_bit(&self, i: usize, bit: bool) -> Self {
        if self.bit(i) == bit {
            *self
        } else {
            self.flip(i)
        }
    }

    pub fn hamming_weight(&self) -> u32 {
        self.value.count_ones()
    }

    /// Every bit flipped (addition of `1^n` modulo 2).
    pub fn conjugate(&self) -> Self {
        Self::from_parts(self.width(), self.value ^ mask(self.width()))
    }

    /// Positions (0-based, from the left) of the set bits, ascending.
    pub fn ones_positions(&self) -> Vec<usize> {
        (0..self.width()).filter(|&i| self.bit(i)).collect()
    }

    /// `bit` followed by the bits of `self`.
    pub fn prepend(&self, bit: bool) -> Self {
        let width = self.width() + 1;
        Self::from_parts(width, self.value | (u32::from(bit) << self.width()))
    }

    /// Split off the leftmost bit.
    pub fn split_first(&self) -> (bool, BitString) {
        assert!(self.width > 0, "cannot split an empty bit string");
        let rest = self.width() - 1;
        (self.bit(0), Self::from_parts(rest, self.value & mask(rest)))
    }

    /// Human rendering of a joint string, e.g. `0_S101`.
    pub fn render_joint(&self) -> String {
        let (system, machine) = self.split_first();
        format!("{}_S{}", u8::from(system), machine)
    }
}

pub(crate) fn mask(width: usize) -> u32 {
    if width == 0 {
        0
    } else {
        u32::MAX >> (32 - width)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.width == 0 {
            return Ok(());
        }
        write!(f, "{:0width$b}", self.value, width = self.width())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() > MAX_WIDTH {
            return Err(Error::TooLarge {
                what: "width",
                value: s.len(),
                max: MAX_WIDTH,
            });
        }
        let mut value = 0u32;
        for c in s.chars() {
            value = (value << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    other => {
                        return Err(Error::Parse(format!(
                            "unexpected character {other:?} in bit string {s:?}"
                        )))
                    }
                };
        }
        Ok(Self::from_parts(s.len(), value))
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_widths(a: &BitString, b: &BitString) -> Result<()> {
    if a.width != b.width {
        return Err(Error::width_mismatch(a.width(), b.width()));
    }
    Ok(())
}

pub fn hamming_distance(a: &BitString, b: &BitString) -> Result<u32> {
    check_widths(a, b)?;
    Ok((a.value ^ b.value).count_ones())
}

/// Outcome of comparing two strings under the lexicographic partial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderRelation {
    /// Strictly greater.
    Greater,
    /// Strictly less.
    Less,
    Equal,
    Incomparable,
}

impl OrderRelation {
    /// `Greater` or `Equal`.
    pub fn is_at_least(self) -> bool {
        matches!(self, OrderRelation::Greater | OrderRelation::Equal)
    }

    pub fn reverse(self) -> Self {
        match self {
            OrderRelation::Greater => OrderRelation::Less,
            OrderRelation::Less => OrderRelation::Greater,
            other => other,
        }
    }
}

/// `j ⪰ k`: `j` has at least as many ones as `k`, and the ones of `k` can be
/// matched to distinct ones of `j` lying at the same or a colder position.
/// Widths must already agree.
pub(crate) fn lex_ge(j: &BitString, k: &BitString) -> bool {
    let jw = j.hamming_weight() as usize;
    let kw = k.hamming_weight() as usize;
    if jw < kw {
        return false;
    }
    let jp = j.ones_positions();
    let kp = k.ones_positions();
    let offset = jw - kw;
    kp.iter().enumerate().all(|(i, &p)| jp[i + offset] >= p)
}

pub fn lex_compare(j: &BitString, k: &BitString) -> Result<OrderRelation> {
    check_widths(j, k)?;
    Ok(if j == k {
        OrderRelation::Equal
    } else if lex_ge(j, k) {
        OrderRelation::Greater
    } else if lex_ge(k, j) {
        OrderRelation::Less
    } else {
        OrderRelation::Incomparable
    })
}

/// Strings reachable from `b` by one generating move: a `0` raised to `1`, or
/// an adjacent `10` replaced by `01`.
pub fn successors(b: &BitString) -> impl Iterator<Item = BitString> + '_ {
    let n = b.width();
    let raises = (0..n).filter(move |&i| !b.bit(i)).map(move |i| b.flip(i));
    let shifts = (0..n.saturating_sub(1))
        .filter(move |&i| b.bit(i) && !b.bit(i + 1))
        .map(move |i| b.flip(i).flip(i + 1));
    raises.chain(shifts)
}

/// All `j` with `j ⪰ a`, ascending. Computed by breadth-first closure under
/// the two generating moves.
pub fn upset(a: &BitString) -> Vec<BitString> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(*a);
    queue.push_back(*a);
    while let Some(b) = queue.pop_front() {
        for next in successors(&b) {
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Reference implementation of [`upset`] that filters all `2^n` strings.
pub fn upset_by_filter(a: &BitString) -> Vec<BitString> {
    BitString::all(a.width()).filter(|j| lex_ge(j, a)).collect()
}
