//! Ternary values, the stability order and the metastable closure.
//!
//! A [`Trit`] is one of `0`, `1` or `u`, where `u` stands for a value that
//! may resolve to either stable value. Words over trits are [`TritWord`]s.
//! The gates [`and_u`], [`or_u`] and [`not_u`] are the strong Kleene
//! connectives, and [`closure_oracle`] lifts any Boolean function to the
//! ternary domain by brute force over all resolutions of its input.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of `u` positions a resolution enumeration may
/// expand.
pub const DEFAULT_CAPACITY: usize = 24;

/// Minimum number of resolutions before [`closure_oracle`] fans out to the
/// rayon pool.
const PARALLEL_THRESHOLD: usize = 1 << 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Trit {
    Zero,
    One,
    U,
}

impl Trit {
    pub const ALL: [Trit; 3] = [Trit::Zero, Trit::One, Trit::U];

    #[inline]
    pub fn is_stable(self) -> bool {
        self != Trit::U
    }

    /// The Boolean value of a stable trit.
    #[inline]
    pub fn to_bool(self) -> Option<bool> {
        match self {
            Trit::Zero => Some(false),
            Trit::One => Some(true),
            Trit::U => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Trit::Zero => '0',
            Trit::One => '1',
            Trit::U => 'u',
        }
    }

    pub fn from_char(c: char) -> Result<Trit> {
        match c {
            '0' => Ok(Trit::Zero),
            '1' => Ok(Trit::One),
            'u' | 'U' => Ok(Trit::U),
            other => Err(Error::InvalidTrit(other)),
        }
    }

    /// Superposition of two trits: equal values are kept, anything else is `u`.
    #[inline]
    pub fn superpose(self, other: Trit) -> Trit {
        if self == other {
            self
        } else {
            Trit::U
        }
    }
}

impl From<bool> for Trit {
    fn from(b: bool) -> Self {
        if b {
            Trit::One
        } else {
            Trit::Zero
        }
    }
}

impl fmt::Display for Trit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Kleene conjunction. `0` dominates.
#[inline]
pub fn and_u(a: Trit, b: Trit) -> Trit {
    match (a, b) {
        (Trit::Zero, _) | (_, Trit::Zero) => Trit::Zero,
        (Trit::One, Trit::One) => Trit::One,
        _ => Trit::U,
    }
}

/// Kleene disjunction. `1` dominates.
#[inline]
pub fn or_u(a: Trit, b: Trit) -> Trit {
    match (a, b) {
        (Trit::One, _) | (_, Trit::One) => Trit::One,
        (Trit::Zero, Trit::Zero) => Trit::Zero,
        _ => Trit::U,
    }
}

#[inline]
pub fn not_u(a: Trit) -> Trit {
    match a {
        Trit::Zero => Trit::One,
        Trit::One => Trit::Zero,
        Trit::U => Trit::U,
    }
}

/// The stability order: `u` is below everything, `0` and `1` are incomparable.
#[inline]
pub fn leq_stab(a: Trit, b: Trit) -> bool {
    a == Trit::U || a == b
}

/// Pointwise [`leq_stab`].
pub fn leq_word(x: &TritWord, y: &TritWord) -> Result<bool> {
    check_len(x.len(), y.len())?;
    Ok(x.iter().zip(y.iter()).all(|(a, b)| leq_stab(a, b)))
}

fn check_len(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::LengthMismatch { left, right })
    }
}

/// A finite word over [`Trit`]. Index 0 is the leftmost symbol.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TritWord(Vec<Trit>);

impl TritWord {
    pub fn new(trits: Vec<Trit>) -> Self {
        TritWord(trits)
    }

    pub fn empty() -> Self {
        TritWord(Vec::new())
    }

    pub fn repeat(t: Trit, n: usize) -> Self {
        TritWord(vec![t; n])
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        bits.iter().map(|&b| Trit::from(b)).collect()
    }

    /// The stable `n`-bit big-endian encoding of `index`.
    pub fn from_index(index: u64, n: usize) -> Self {
        (0..n)
            .map(|i| Trit::from((index >> (n - 1 - i)) & 1 == 1))
            .collect()
    }

    /// Big-endian value of a stable word; `None` if it contains `u` or is too
    /// wide for a `u64`.
    pub fn to_index(&self) -> Option<u64> {
        if self.len() > 64 {
            return None;
        }
        self.iter().try_fold(0u64, |acc, t| {
            t.to_bool().map(|b| (acc << 1) | u64::from(b))
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> Option<Trit> {
        self.0.get(i).copied()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Trit> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Trit] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Trit> {
        self.0
    }

    pub fn push(&mut self, t: Trit) {
        self.0.push(t);
    }

    pub fn set(&mut self, i: usize, t: Trit) {
        self.0[i] = t;
    }

    pub fn concat(&self, other: &TritWord) -> TritWord {
        self.iter().chain(other.iter()).collect()
    }

    pub fn u_count(&self) -> usize {
        self.0.iter().filter(|t| **t == Trit::U).count()
    }

    pub fn is_stable(&self) -> bool {
        self.0.iter().all(|t| t.is_stable())
    }
}

impl std::ops::Index<usize> for TritWord {
    type Output = Trit;

    fn index(&self, i: usize) -> &Trit {
        &self.0[i]
    }
}

impl FromIterator<Trit> for TritWord {
    fn from_iter<I: IntoIterator<Item = Trit>>(iter: I) -> Self {
        TritWord(iter.into_iter().collect())
    }
}

impl From<Vec<Trit>> for TritWord {
    fn from(v: Vec<Trit>) -> Self {
        TritWord(v)
    }
}

impl fmt::Display for TritWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for TritWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim().chars().map(Trit::from_char).collect()
    }
}

impl Serialize for TritWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TritWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Iterator over `res(x)`: every stable word that agrees with `x` on its
/// stable positions.
///
/// The `u` positions are scanned left to right and filled from the low bits
/// of an internal cursor, so the leftmost `u` toggles fastest.
#[derive(Debug, Clone)]
pub struct ResolutionIterator {
    base: TritWord,
    unstable: Vec<usize>,
    cursor: u64,
    end: u64,
}

impl ResolutionIterator {
    /// Hard ceiling on `u` positions, keeping the cursor arithmetic in range.
    pub const MAX_UNSTABLE: usize = 62;

    pub fn new(base: &TritWord) -> Result<Self> {
        Self::with_capacity(base, DEFAULT_CAPACITY)
    }

    pub fn with_capacity(base: &TritWord, capacity: usize) -> Result<Self> {
        let unstable: Vec<usize> = base
            .iter()
            .enumerate()
            .filter(|(_, t)| *t == Trit::U)
            .map(|(i, _)| i)
            .collect();
        let limit = capacity.min(Self::MAX_UNSTABLE);
        if unstable.len() > limit {
            return Err(Error::CapacityExceeded {
                unstable: unstable.len(),
                limit,
            });
        }
        Ok(ResolutionIterator {
            base: base.clone(),
            end: 1u64 << unstable.len(),
            unstable,
            cursor: 0,
        })
    }

    /// Number of resolutions, `2^u_count`.
    pub fn count_total(&self) -> u64 {
        self.end
    }

    /// The resolution at position `cursor`.
    pub fn nth_resolution(&self, cursor: u64) -> TritWord {
        let mut w = self.base.clone();
        for (bit, &pos) in self.unstable.iter().enumerate() {
            w.set(pos, Trit::from((cursor >> bit) & 1 == 1));
        }
        w
    }
}

impl Iterator for ResolutionIterator {
    type Item = TritWord;

    fn next(&mut self) -> Option<TritWord> {
        if self.cursor >= self.end {
            return None;
        }
        let w = self.nth_resolution(self.cursor);
        self.cursor += 1;
        Some(w)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.end - self.cursor) as usize;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for ResolutionIterator {}

/// `res(x)` with the default capacity.
pub fn res(x: &TritWord) -> Result<ResolutionIterator> {
    ResolutionIterator::new(x)
}

pub fn superpose(x: &TritWord, y: &TritWord) -> Result<TritWord> {
    check_len(x.len(), y.len())?;
    Ok(x.iter().zip(y.iter()).map(|(a, b)| a.superpose(b)).collect())
}

/// Folds [`superpose`] over a nonempty collection.
pub fn superpose_all<'a, I>(words: I) -> Result<TritWord>
where
    I: IntoIterator<Item = &'a TritWord>,
{
    let mut iter = words.into_iter();
    let mut acc = iter.next().ok_or(Error::EmptyCollection)?.clone();
    for w in iter {
        check_len(acc.len(), w.len())?;
        for (i, t) in w.iter().enumerate() {
            acc.0[i] = acc.0[i].superpose(t);
        }
    }
    Ok(acc)
}

/// The metastable closure of `f` at `x`, computed by brute force over
/// `res(x)`. This is the reference every faster route is checked against.
pub fn closure_oracle<F>(f: F, x: &TritWord) -> Result<TritWord>
where
    F: Fn(&TritWord) -> TritWord + Sync,
{
    closure_oracle_within(f, x, DEFAULT_CAPACITY)
}

pub fn closure_oracle_within<F>(f: F, x: &TritWord, capacity: usize) -> Result<TritWord>
where
    F: Fn(&TritWord) -> TritWord + Sync,
{
    let resolutions = ResolutionIterator::with_capacity(x, capacity)?;
    let total = resolutions.count_total();
    if total as usize >= PARALLEL_THRESHOLD {
        // Chunked so the fold order inside each chunk is fixed; superposition
        // is commutative and associative, so the merge order is irrelevant.
        let partials: Vec<Result<TritWord>> = (0..total)
            .into_par_iter()
            .map(|c| f(&resolutions.nth_resolution(c)))
            .fold(
                || None::<Result<TritWord>>,
                |acc, out| Some(merge(acc, out)),
            )
            .filter_map(|r| r)
            .collect();
        let mut acc: Option<Result<TritWord>> = None;
        for p in partials {
            acc = Some(match (acc, p) {
                (None, p) => p,
                (Some(Err(e)), _) | (Some(Ok(_)), Err(e)) => Err(e),
                (Some(Ok(a)), Ok(b)) => superpose_checked(&a, &b),
            });
        }
        acc.unwrap_or(Err(Error::EmptyCollection))
    } else {
        let mut acc: Option<Result<TritWord>> = None;
        for w in resolutions {
            acc = Some(merge(acc, f(&w)));
        }
        acc.unwrap_or(Err(Error::EmptyCollection))
    }
}

fn merge(acc: Option<Result<TritWord>>, out: TritWord) -> Result<TritWord> {
    match acc {
        None => Ok(out),
        Some(Err(e)) => Err(e),
        Some(Ok(a)) => superpose_checked(&a, &out),
    }
}

fn superpose_checked(a: &TritWord, b: &TritWord) -> Result<TritWord> {
    if a.len() != b.len() {
        return Err(Error::InconsistentOutputLength {
            expected: a.len(),
            found: b.len(),
        });
    }
    superpose(a, b)
}

/// All `3^n` ternary words of length `n`, in base-3 order with digits
/// `0 < 1 < u` and the leftmost position most significant.
pub fn all_words(n: usize) -> impl Iterator<Item = TritWord> {
    let total = 3usize.pow(n as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![Trit::Zero; n];
        for i in (0..n).rev() {
            v[i] = Trit::ALL[idx % 3];
            idx /= 3;
        }
        TritWord(v)
    })
}

/// All `2^n` stable words of length `n` in ascending big-endian order.
pub fn all_stable_words(n: usize) -> impl Iterator<Item = TritWord> {
    (0..1u64 << n).map(move |i| TritWord::from_index(i, n))
}
