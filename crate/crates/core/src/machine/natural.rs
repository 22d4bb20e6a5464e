//! Natural machines: the state is a ternary word of fixed width and every
//! transition is the Kleene evaluation of one combinational circuit.
//!
//! A tape symbol is carried on two lines, a blank flag that is always stable
//! and a value in `{0, 1, u}`. The transition circuit takes
//! `state ++ [blank, value]` and produces `next_state ++ [blank', value']`.
//! Head movement is input independent and supplied by a [`HeadSchedule`].

use std::fmt;

use super::{Move, SimOutcome};
use crate::circuit::{is_natural, Circuit, NaturalnessReport, TernaryTable};
use crate::error::{Error, Result};
use crate::kleene::{Trit, TritWord};

#[derive(Clone, Copy)]
pub enum HeadSchedule {
    /// Right for `n` steps, left for `n` steps, then right.
    ScanAndReturn,
    /// Direction as a function of `(input_length, step_index)`.
    Custom(fn(usize, u64) -> Move),
}

impl HeadSchedule {
    pub fn direction(&self, input_len: usize, step: u64) -> Move {
        match self {
            HeadSchedule::ScanAndReturn => {
                let n = input_len as u64;
                if step < n || step >= 2 * n {
                    Move::R
                } else {
                    Move::L
                }
            }
            HeadSchedule::Custom(f) => f(input_len, step),
        }
    }
}

impl fmt::Debug for HeadSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeadSchedule::ScanAndReturn => write!(f, "ScanAndReturn"),
            HeadSchedule::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NaturalTM {
    state_width: usize,
    circuit: Circuit,
    schedule: HeadSchedule,
    start: TritWord,
    finals: Vec<TritWord>,
}

impl NaturalTM {
    pub fn new(
        state_width: usize,
        circuit: Circuit,
        schedule: HeadSchedule,
        start: TritWord,
        finals: Vec<TritWord>,
    ) -> Result<Self> {
        let lines = state_width + 2;
        if circuit.n_inputs() != lines || circuit.n_outputs() != lines {
            return Err(Error::NaturalMachine(format!(
                "transition circuit must have {lines} inputs and outputs, has {} and {}",
                circuit.n_inputs(),
                circuit.n_outputs()
            )));
        }
        for w in std::iter::once(&start).chain(&finals) {
            if w.len() != state_width || !w.is_stable() {
                return Err(Error::NaturalMachine(format!(
                    "start and final states must be stable words of width {state_width}, got {w}"
                )));
            }
        }
        for line in 0..lines {
            let table = TernaryTable::from_circuit(&circuit, line)?;
            if let report @ (NaturalnessReport::NotBooleanPreserving { .. }
            | NaturalnessReport::NotMonotone { .. }) = is_natural(&table)
            {
                return Err(Error::NaturalMachine(format!(
                    "output line {line} is not natural: {report:?}"
                )));
            }
        }
        Ok(NaturalTM {
            state_width,
            circuit,
            schedule,
            start,
            finals,
        })
    }

    pub fn state_width(&self) -> usize {
        self.state_width
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn start(&self) -> &TritWord {
        &self.start
    }

    pub fn schedule(&self) -> HeadSchedule {
        self.schedule
    }

    fn is_final(&self, state: &TritWord) -> bool {
        self.finals.iter().any(|f| f == state)
    }
}

/// Like [`simulate_natural`], also returning the state word before every
/// step and after the last one.
pub fn simulate_natural_traced(
    m: &NaturalTM,
    x: &TritWord,
    budget: u64,
) -> Result<(SimOutcome, Vec<TritWord>)> {
    let blank = (true, Trit::Zero);
    let mut tape: Vec<(bool, Trit)> = x.iter().map(|t| (false, t)).collect();
    let mut head = 0usize;
    let mut state = m.start.clone();
    let mut states = vec![state.clone()];
    let mut steps = 0u64;

    while !m.is_final(&state) {
        if steps >= budget {
            return Ok((SimOutcome::BudgetExhausted { steps }, states));
        }
        let (is_blank, value) = tape.get(head).copied().unwrap_or(blank);
        let mut input = state.clone();
        input.push(Trit::from(is_blank));
        input.push(value);
        let out = m.circuit.eval_kleene(&input)?;
        let q = m.state_width;
        state = out.iter().take(q).collect();
        let written = match out[q] {
            Trit::One => blank,
            Trit::Zero => (false, out[q + 1]),
            Trit::U => return Err(Error::UnstableBlank { step: steps }),
        };
        if head >= tape.len() {
            tape.resize(head + 1, blank);
        }
        tape[head] = written;
        head = match m.schedule.direction(x.len(), steps) {
            Move::L => head.saturating_sub(1),
            Move::R => head + 1,
        };
        steps += 1;
        states.push(state.clone());
    }
    let output = tape.iter().take_while(|c| !c.0).map(|c| c.1).collect();
    Ok((SimOutcome::Halted { output, steps }, states))
}

pub fn simulate_natural(m: &NaturalTM, x: &TritWord, budget: u64) -> Result<SimOutcome> {
    simulate_natural_traced(m, x, budget).map(|(o, _)| o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CircuitBuilder, Gate};
    use crate::corpus::{natural_and, natural_parity};
    use crate::kleene::leq_word;

    fn w(s: &str) -> TritWord {
        s.parse().unwrap()
    }

    #[test]
    fn natural_parity_on_stable_input() {
        let m = natural_parity();
        assert_eq!(
            simulate_natural(&m, &w("11"), 100).unwrap(),
            SimOutcome::Halted { output: w("0"), steps: 5 }
        );
        assert_eq!(
            simulate_natural(&m, &w("101"), 100).unwrap(),
            SimOutcome::Halted { output: w("0"), steps: 7 }
        );
    }

    #[test]
    fn zero_budget() {
        assert_eq!(
            simulate_natural(&natural_parity(), &w("1"), 0).unwrap(),
            SimOutcome::BudgetExhausted { steps: 0 }
        );
    }

    #[test]
    fn and_machine_with_unmasked_u_never_halts() {
        let m = natural_and();
        let (outcome, states) = simulate_natural_traced(&m, &w("u1"), 50).unwrap();
        assert_eq!(outcome, SimOutcome::BudgetExhausted { steps: 50 });
        assert!(!states[1].is_stable());
        assert!(states.iter().skip(1).all(|s| !s.is_stable()));
    }

    #[test]
    fn and_machine_masks_u_with_zero() {
        let m = natural_and();
        let (outcome, states) = simulate_natural_traced(&m, &w("u0"), 50).unwrap();
        assert_eq!(outcome, SimOutcome::Halted { output: w("0"), steps: 5 });
        assert!(!states[1].is_stable());
        assert!(states[2].is_stable());
    }

    #[test]
    fn run_monotonicity_for_parity() {
        let m = natural_parity();
        let (_, lo) = simulate_natural_traced(&m, &w("u1u"), 7).unwrap();
        let (_, hi) = simulate_natural_traced(&m, &w("011"), 7).unwrap();
        for (a, b) in lo.iter().zip(&hi) {
            assert!(leq_word(a, b).unwrap(), "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let mut cb = CircuitBuilder::new(3);
        let g = cb.input(0);
        cb.output(g);
        let c = cb.finish().unwrap();
        assert!(NaturalTM::new(1, c, HeadSchedule::ScanAndReturn, w("0"), vec![]).is_err());
        let c = Circuit::new(
            3,
            vec![Gate::Input(0), Gate::Input(1), Gate::Input(2)],
            vec![0, 1, 2],
        )
        .unwrap();
        assert!(NaturalTM::new(1, c.clone(), HeadSchedule::ScanAndReturn, w("u"), vec![]).is_err());
        assert!(NaturalTM::new(1, c, HeadSchedule::ScanAndReturn, w("0"), vec![w("1")]).is_ok());
    }

    #[test]
    fn unstable_blank_flag_is_an_error() {
        // next state = state, blank' = value, value' = value
        let c = Circuit::new(
            3,
            vec![Gate::Input(0), Gate::Input(1), Gate::Input(2)],
            vec![0, 2, 2],
        )
        .unwrap();
        let m = NaturalTM::new(1, c, HeadSchedule::ScanAndReturn, w("0"), vec![w("1")]).unwrap();
        assert_eq!(
            simulate_natural(&m, &w("u"), 5),
            Err(Error::UnstableBlank { step: 0 })
        );
    }

    #[test]
    fn schedule_shape() {
        let s = HeadSchedule::ScanAndReturn;
        let dirs: Vec<Move> = (0..5).map(|i| s.direction(2, i)).collect();
        assert_eq!(dirs, [Move::R, Move::R, Move::L, Move::L, Move::R]);
    }
}
