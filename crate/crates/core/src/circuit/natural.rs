//! Total ternary functions and the test for whether a circuit can realize
//! them.
//!
//! A function `f: T^n -> T` is implementable by a combinational circuit
//! exactly when it maps stable inputs to stable outputs and is monotone in
//! the stability order. Monotonicity only needs checking on covering pairs
//! (one `u` replaced by a stable value); the full order is their transitive
//! closure.

use std::fmt;

use crate::error::{Error, Result};
use crate::kleene::{all_words, closure_oracle, leq_stab, Trit, TritWord};

use super::Circuit;

/// Largest arity accepted by the table constructors (`3^12` entries).
const MAX_TABLE_ARITY: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryTable {
    arity: usize,
    entries: Vec<Trit>,
}

fn digit(t: Trit) -> usize {
    match t {
        Trit::Zero => 0,
        Trit::One => 1,
        Trit::U => 2,
    }
}

impl TernaryTable {
    fn check_arity(arity: usize) -> Result<()> {
        if arity > MAX_TABLE_ARITY {
            return Err(Error::SizeLimit(format!(
                "ternary table of arity {arity} exceeds {MAX_TABLE_ARITY}"
            )));
        }
        Ok(())
    }

    pub fn from_fn(arity: usize, f: impl Fn(&TritWord) -> Trit) -> Result<Self> {
        Self::check_arity(arity)?;
        Ok(TernaryTable {
            arity,
            entries: all_words(arity).map(|x| f(&x)).collect(),
        })
    }

    /// Table of one output line of a circuit under Kleene evaluation.
    pub fn from_circuit(c: &Circuit, output: usize) -> Result<Self> {
        if output >= c.n_outputs() {
            return Err(Error::InvalidCircuit(format!("no output line {output}")));
        }
        Self::from_fn(c.n_inputs(), |x| {
            c.eval_kleene(x).expect("arity matches by construction")[output]
        })
    }

    /// The metastable closure of a single-output Boolean function.
    pub fn closure_of(arity: usize, f: impl Fn(&[bool]) -> bool + Sync) -> Result<Self> {
        let lifted = |x: &TritWord| {
            let bits: Vec<bool> = x.iter().map(|t| t == Trit::One).collect();
            TritWord::new(vec![Trit::from(f(&bits))])
        };
        Self::check_arity(arity)?;
        let entries = all_words(arity)
            .map(|x| closure_oracle(lifted, &x).map(|w| w[0]))
            .collect::<Result<Vec<_>>>()?;
        Ok(TernaryTable { arity, entries })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, x: &TritWord) -> Result<Trit> {
        if x.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: x.len(),
            });
        }
        Ok(self.entries[Self::index(x)])
    }

    fn index(x: &TritWord) -> usize {
        x.iter().fold(0, |acc, t| acc * 3 + digit(t))
    }

    pub fn iter(&self) -> impl Iterator<Item = (TritWord, Trit)> + '_ {
        all_words(self.arity).zip(self.entries.iter().copied())
    }

    /// Parses lines of the form `<word> -> <trit>`; `#` starts a comment.
    /// Every one of the `3^n` inputs must appear exactly once.
    pub fn parse(text: &str) -> Result<Self> {
        let mut arity = None;
        let mut rows: Vec<(usize, TritWord, Trit)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let table_err = |message: String| Error::Table { line, message };
            let (lhs, rhs) = content
                .split_once("->")
                .ok_or_else(|| table_err("expected `<word> -> <trit>`".into()))?;
            let x: TritWord = lhs.trim().parse().map_err(|e| table_err(format!("{e}")))?;
            let y: TritWord = rhs.trim().parse().map_err(|e| table_err(format!("{e}")))?;
            if y.len() != 1 {
                return Err(table_err("output must be a single trit".into()));
            }
            match arity {
                None => arity = Some(x.len()),
                Some(n) if n != x.len() => {
                    return Err(table_err(format!("row has arity {}, expected {n}", x.len())))
                }
                _ => {}
            }
            rows.push((line, x, y[0]));
        }
        let arity = arity.ok_or(Error::Table {
            line: 0,
            message: "empty table".into(),
        })?;
        Self::check_arity(arity)?;
        let mut entries: Vec<Option<Trit>> = vec![None; 3usize.pow(arity as u32)];
        for (line, x, y) in rows {
            let slot = &mut entries[Self::index(&x)];
            if slot.is_some() {
                return Err(Error::Table {
                    line,
                    message: format!("duplicate row for {x}"),
                });
            }
            *slot = Some(y);
        }
        let entries = entries
            .into_iter()
            .zip(all_words(arity))
            .map(|(e, x)| {
                e.ok_or_else(|| Error::Table {
                    line: 0,
                    message: format!("table is not total: no row for {x}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TernaryTable { arity, entries })
    }
}

impl fmt::Display for TernaryTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, y) in self.iter() {
            writeln!(f, "{x} -> {y}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NaturalnessReport {
    Natural,
    /// A stable input mapped to `u`.
    NotBooleanPreserving { input: TritWord },
    /// `lower ⪯ upper` but `f(lower) ⋠ f(upper)`.
    NotMonotone {
        lower: TritWord,
        upper: TritWord,
        f_lower: Trit,
        f_upper: Trit,
    },
}

impl NaturalnessReport {
    pub fn is_natural(&self) -> bool {
        matches!(self, NaturalnessReport::Natural)
    }
}

pub fn is_natural(t: &TernaryTable) -> NaturalnessReport {
    for (x, y) in t.iter() {
        if x.is_stable() && !y.is_stable() {
            return NaturalnessReport::NotBooleanPreserving { input: x };
        }
    }
    for (x, fx) in t.iter() {
        for i in 0..x.len() {
            if x[i] != Trit::U {
                continue;
            }
            for s in [Trit::Zero, Trit::One] {
                let mut y = x.clone();
                y.set(i, s);
                let fy = t.entries[TernaryTable::index(&y)];
                if !leq_stab(fx, fy) {
                    return NaturalnessReport::NotMonotone {
                        lower: x,
                        upper: y,
                        f_lower: fx,
                        f_upper: fy,
                    };
                }
            }
        }
    }
    NaturalnessReport::Natural
}
