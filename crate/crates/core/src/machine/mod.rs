//! Single-tape deterministic Turing machines over `Γ = {0, 1, u, ⊥}`.
//!
//! The tape is semi-infinite: a left move at cell 0 leaves the head at 0.
//! A machine halts as soon as it enters a final state; the output is the
//! longest blank-free prefix of the tape, unless the machine designates
//! accept/reject states, in which case it outputs `1`/`0`.

mod dsl;
mod natural;
mod oblivious;
mod sim;

pub use dsl::{default_machine, parse_tm, parse_tm_lenient};
pub use natural::{simulate_natural, simulate_natural_traced, HeadSchedule, NaturalTM};
pub use oblivious::{is_oblivious_probe, is_oblivious_probe_on, ObliviousnessReport};
pub use sim::{
    simulate, simulate_traced, utm_bounded, Execution, MachineRef, MachineSpec, ScriptedRun,
    SimOutcome, UtmResult, VirtualMachine, VirtualRun,
};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kleene::{Trit, TritWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbol {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "u")]
    U,
    #[serde(rename = "_")]
    Blank,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::Zero, Symbol::One, Symbol::U, Symbol::Blank];

    fn index(self) -> usize {
        match self {
            Symbol::Zero => 0,
            Symbol::One => 1,
            Symbol::U => 2,
            Symbol::Blank => 3,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::U => 'u',
            Symbol::Blank => '_',
        }
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            '0' => Some(Symbol::Zero),
            '1' => Some(Symbol::One),
            'u' | 'U' => Some(Symbol::U),
            '_' => Some(Symbol::Blank),
            _ => None,
        }
    }

    pub fn to_trit(self) -> Option<Trit> {
        match self {
            Symbol::Zero => Some(Trit::Zero),
            Symbol::One => Some(Trit::One),
            Symbol::U => Some(Trit::U),
            Symbol::Blank => None,
        }
    }
}

impl From<Trit> for Symbol {
    fn from(t: Trit) -> Self {
        match t {
            Trit::Zero => Symbol::Zero,
            Trit::One => Symbol::One,
            Trit::U => Symbol::U,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    L,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Action {
    pub next: usize,
    pub write: Symbol,
    pub mv: Move,
}

/// A validated machine. Rows for final states are optional since they are
/// never used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanTM {
    states: Vec<String>,
    delta: Vec<[Option<Action>; 4]>,
    start: usize,
    finals: Vec<bool>,
    accept: Option<usize>,
    reject: Option<usize>,
}

impl BooleanTM {
    pub fn new(
        states: Vec<String>,
        delta: Vec<[Option<Action>; 4]>,
        start: usize,
        finals: Vec<usize>,
        accept: Option<usize>,
        reject: Option<usize>,
    ) -> Result<Self> {
        let n = states.len();
        if delta.len() != n || start >= n {
            return Err(Error::InstanceMalformed("inconsistent machine tables".into()));
        }
        let mut is_final = vec![false; n];
        for f in finals {
            *is_final.get_mut(f).ok_or_else(|| Error::UndefinedState(format!("#{f}")))? = true;
        }
        for d in [accept, reject].into_iter().flatten() {
            if d >= n || !is_final[d] {
                return Err(Error::InstanceMalformed(format!(
                    "accept/reject state {} must be final",
                    states.get(d).map_or("?", |s| s.as_str())
                )));
            }
        }
        for (q, row) in delta.iter().enumerate() {
            for (sym, a) in Symbol::ALL.iter().zip(row) {
                match a {
                    Some(a) if a.next >= n => {
                        return Err(Error::UndefinedState(format!("#{}", a.next)))
                    }
                    None if !is_final[q] => {
                        return Err(Error::PartialTransition {
                            state: states[q].clone(),
                            symbol: sym.as_char(),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(BooleanTM {
            states,
            delta,
            start,
            finals: is_final,
            accept,
            reject,
        })
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn accept(&self) -> Option<usize> {
        self.accept
    }

    pub fn reject(&self) -> Option<usize> {
        self.reject
    }

    pub fn action(&self, q: usize, read: Symbol) -> Option<Action> {
        self.delta[q][read.index()]
    }

    /// Initial configuration: `x` on cells `0..|x|`, blanks after, head at 0.
    pub fn initial(&self, x: &TritWord) -> Configuration {
        Configuration {
            state: self.start,
            tape: x.iter().map(Symbol::from).collect(),
            head: 0,
            steps: 0,
        }
    }

    pub fn is_halted(&self, c: &Configuration) -> bool {
        self.finals[c.state]
    }

    /// Applies one transition in place.
    pub fn step(&self, c: &mut Configuration) -> Result<TraceEntry> {
        if self.is_halted(c) {
            return Err(Error::AlreadyHalted);
        }
        let read = c.read();
        let a = self.delta[c.state][read.index()].expect("validated: non-final rows are total");
        let entry = TraceEntry {
            step: c.steps,
            state: self.states[c.state].clone(),
            head: c.head,
            read,
            write: a.write,
            mv: a.mv,
        };
        c.write(a.write);
        c.state = a.next;
        c.head = match a.mv {
            Move::L => c.head.saturating_sub(1),
            Move::R => c.head + 1,
        };
        c.steps += 1;
        Ok(entry)
    }

    /// Output of a halted configuration.
    pub fn output(&self, c: &Configuration) -> TritWord {
        if Some(c.state) == self.accept {
            return TritWord::new(vec![Trit::One]);
        }
        if Some(c.state) == self.reject {
            return TritWord::new(vec![Trit::Zero]);
        }
        c.tape.iter().map_while(|s| s.to_trit()).collect()
    }
}

/// Machine snapshot. Cells past the end of `tape` hold `⊥`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub state: usize,
    pub tape: Vec<Symbol>,
    pub head: usize,
    pub steps: u64,
}

impl Configuration {
    pub fn read(&self) -> Symbol {
        self.tape.get(self.head).copied().unwrap_or(Symbol::Blank)
    }

    fn write(&mut self, s: Symbol) {
        if self.head >= self.tape.len() {
            if s == Symbol::Blank {
                return;
            }
            self.tape.resize(self.head + 1, Symbol::Blank);
        }
        self.tape[self.head] = s;
        while self.tape.last() == Some(&Symbol::Blank) {
            self.tape.pop();
        }
    }

    pub fn cell(&self, i: usize) -> Symbol {
        self.tape.get(i).copied().unwrap_or(Symbol::Blank)
    }
}

/// One executed transition, as emitted by `--trace json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: u64,
    pub state: String,
    pub head: usize,
    pub read: Symbol,
    pub write: Symbol,
    #[serde(rename = "move")]
    pub mv: Move,
}
