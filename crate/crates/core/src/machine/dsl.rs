//! Line-oriented machine description language.
//!
//! ```text
//! states: scan done
//! start: scan
//! final: done
//! default-u: as0        # copy each missing `u` row from the `0` row
//! scan, 0 -> scan, 0, R
//! scan, 1 -> scan, 1, R
//! scan, _ -> done, _, L
//! ```
//!
//! `_` is the blank symbol. `accept:` and `reject:` name final states whose
//! output is `1` and `0` respectively.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Action, BooleanTM, Move, Symbol};
use crate::error::{Error, Result};

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::MachineSyntax {
        line,
        message: message.into(),
    }
}

/// Strict parse; any defect is an error.
pub fn parse_tm(text: &str) -> Result<BooleanTM> {
    let mut states: Option<Vec<String>> = None;
    let mut start = None;
    let mut finals = Vec::new();
    let mut accept = None;
    let mut reject = None;
    let mut default_u = false;
    let mut rows: Vec<(usize, String, Symbol, String, Symbol, Move)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((lhs, rhs)) = content.split_once("->") {
            let (q, s) = lhs
                .split_once(',')
                .ok_or_else(|| syntax(line, "expected `state, symbol -> state, symbol, L|R`"))?;
            let parts: Vec<&str> = rhs.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(syntax(line, "right-hand side needs `state, symbol, L|R`"));
            }
            let sym = |t: &str| -> Result<Symbol> {
                let mut cs = t.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) => Symbol::from_char(c),
                    _ => None,
                }
                .ok_or_else(|| syntax(line, format!("bad symbol {t:?}")))
            };
            let mv = match parts[2] {
                "L" => Move::L,
                "R" => Move::R,
                other => return Err(syntax(line, format!("bad move {other:?}"))),
            };
            rows.push((
                line,
                q.trim().to_string(),
                sym(s.trim())?,
                parts[0].to_string(),
                sym(parts[1])?,
                mv,
            ));
            continue;
        }
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| syntax(line, format!("unrecognized line {content:?}")))?;
        let names: Vec<String> = value.split_whitespace().map(String::from).collect();
        let single = || -> Result<String> {
            match names.as_slice() {
                [one] => Ok(one.clone()),
                _ => Err(syntax(line, format!("`{key}:` takes exactly one state"))),
            }
        };
        match key.trim() {
            "states" => {
                if names.is_empty() {
                    return Err(syntax(line, "no states declared"));
                }
                states = Some(names.clone());
            }
            "start" => start = Some(single()?),
            "final" => finals.extend(names.iter().cloned()),
            "accept" => accept = Some(single()?),
            "reject" => reject = Some(single()?),
            "default-u" => match value.trim() {
                "as0" => default_u = true,
                other => return Err(syntax(line, format!("unknown default-u mode {other:?}"))),
            },
            other => return Err(syntax(line, format!("unknown header {other:?}"))),
        }
    }

    let states = states.ok_or_else(|| syntax(0, "missing `states:` header"))?;
    let index: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    if index.len() != states.len() {
        return Err(syntax(0, "duplicate state name"));
    }
    let lookup = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UndefinedState(name.to_string()))
    };
    let start = lookup(&start.ok_or_else(|| syntax(0, "missing `start:` header"))?)?;
    let finals = finals.iter().map(|f| lookup(f)).collect::<Result<Vec<_>>>()?;
    let accept = accept.as_deref().map(lookup).transpose()?;
    let reject = reject.as_deref().map(lookup).transpose()?;

    let mut delta: Vec<[Option<Action>; 4]> = vec![[None; 4]; states.len()];
    for (_, q, s, next, write, mv) in rows {
        let qi = lookup(&q)?;
        let slot = &mut delta[qi][s.index()];
        if slot.is_some() {
            return Err(Error::DuplicateTransition {
                state: q,
                symbol: s.as_char(),
            });
        }
        *slot = Some(Action {
            next: lookup(&next)?,
            write,
            mv,
        });
    }
    if default_u {
        for row in &mut delta {
            if row[Symbol::U.index()].is_none() {
                row[Symbol::U.index()] = row[Symbol::Zero.index()];
            }
        }
    }
    BooleanTM::new(states, delta, start, finals, accept, reject)
}

/// Like [`parse_tm`], but malformed text yields [`default_machine`].
pub fn parse_tm_lenient(text: &str) -> BooleanTM {
    parse_tm(text).unwrap_or_else(|_| default_machine())
}

/// The fallback machine: writes `0` on cell 0, erases the rest of the
/// input and halts, so its output is `0` on every input.
pub fn default_machine() -> BooleanTM {
    parse_tm(
        "states: write0 erase halt\n\
         start: write0\n\
         final: halt\n\
         write0, 0 -> erase, 0, R\n\
         write0, 1 -> erase, 0, R\n\
         write0, u -> erase, 0, R\n\
         write0, _ -> erase, 0, R\n\
         erase, 0 -> erase, _, R\n\
         erase, 1 -> erase, _, R\n\
         erase, u -> erase, _, R\n\
         erase, _ -> halt, _, R\n",
    )
    .expect("built-in machine is well formed")
}

impl BooleanTM {
    /// Renders the machine in the description language, with every row
    /// written out explicitly.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "states: {}", self.states.join(" "));
        let _ = writeln!(out, "start: {}", self.states[self.start]);
        let finals: Vec<&str> = (0..self.n_states())
            .filter(|&q| self.finals[q])
            .map(|q| self.states[q].as_str())
            .collect();
        if !finals.is_empty() {
            let _ = writeln!(out, "final: {}", finals.join(" "));
        }
        if let Some(a) = self.accept {
            let _ = writeln!(out, "accept: {}", self.states[a]);
        }
        if let Some(r) = self.reject {
            let _ = writeln!(out, "reject: {}", self.states[r]);
        }
        for (q, row) in self.delta.iter().enumerate() {
            for (s, a) in Symbol::ALL.iter().zip(row) {
                if let Some(a) = a {
                    let _ = writeln!(
                        out,
                        "{}, {} -> {}, {}, {:?}",
                        self.states[q], s, self.states[a.next], a.write, a.mv
                    );
                }
            }
        }
        out
    }
}
