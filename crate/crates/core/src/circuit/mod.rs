//! Combinational circuits over `and`/`or`/`not` with fan-in two.
//!
//! Gates are numbered topologically: every source reference points to an
//! earlier gate, so a [`Circuit`] is acyclic by construction. The same
//! netlist can be evaluated with Boolean semantics ([`Circuit::eval_boolean`])
//! or with Kleene semantics ([`Circuit::eval_kleene`]).

mod build;
mod hazard;
mod natural;
mod netlist;

pub use build::{
    build_cmux_bit, build_cmux_tree, build_mux, realize_table, synthesize_closure, TableRealization,
    MAX_MUX_LEVELS,
};
pub use hazard::{is_hazard_free, HazardCheck, HazardReport, EXHAUSTIVE_BUDGET};
pub use natural::{is_natural, NaturalnessReport, TernaryTable};
pub use netlist::{parse_netlist, write_netlist};

use crate::error::{Error, Result};
use crate::kleene::{and_u, not_u, or_u, Trit, TritWord};

/// A gate; sources are indices of earlier gates in the same circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Input(usize),
    Const(bool),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
}

impl Gate {
    fn sources(self) -> impl Iterator<Item = usize> {
        let (a, b) = match self {
            Gate::Input(_) | Gate::Const(_) => (None, None),
            Gate::Not(a) => (Some(a), None),
            Gate::And(a, b) | Gate::Or(a, b) => (Some(a), Some(b)),
        };
        a.into_iter().chain(b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n_inputs: usize,
    gates: Vec<Gate>,
    outputs: Vec<usize>,
}

impl Circuit {
    pub fn new(n_inputs: usize, gates: Vec<Gate>, outputs: Vec<usize>) -> Result<Self> {
        for (id, gate) in gates.iter().enumerate() {
            if let Gate::Input(k) = gate {
                if *k >= n_inputs {
                    return Err(Error::InvalidCircuit(format!(
                        "g{id} reads input {k} but the circuit has {n_inputs} inputs"
                    )));
                }
            }
            if let Some(src) = gate.sources().find(|&s| s >= id) {
                return Err(Error::InvalidCircuit(format!(
                    "g{id} references g{src}, which is not an earlier gate"
                )));
            }
        }
        if let Some(&o) = outputs.iter().find(|&&o| o >= gates.len()) {
            return Err(Error::InvalidCircuit(format!("output g{o} does not exist")));
        }
        Ok(Circuit {
            n_inputs,
            gates,
            outputs,
        })
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Number of gates that are neither inputs nor outputs.
    pub fn size(&self) -> usize {
        self.gates
            .iter()
            .enumerate()
            .filter(|(id, g)| !matches!(g, Gate::Input(_)) && !self.outputs.contains(id))
            .count()
    }

    /// Longest path, counted in gates, from any input or constant to an output.
    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.gates.len()];
        for (id, g) in self.gates.iter().enumerate() {
            depth[id] = g.sources().map(|s| depth[s] + 1).max().unwrap_or(0);
        }
        self.outputs.iter().map(|&o| depth[o]).max().unwrap_or(0)
    }

    fn eval_with<T: Copy>(
        &self,
        x: &[T],
        konst: impl Fn(bool) -> T,
        not: impl Fn(T) -> T,
        and: impl Fn(T, T) -> T,
        or: impl Fn(T, T) -> T,
    ) -> Vec<T> {
        let mut vals: Vec<T> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match *g {
                Gate::Input(k) => x[k],
                Gate::Const(b) => konst(b),
                Gate::Not(a) => not(vals[a]),
                Gate::And(a, b) => and(vals[a], vals[b]),
                Gate::Or(a, b) => or(vals[a], vals[b]),
            };
            vals.push(v);
        }
        self.outputs.iter().map(|&o| vals[o]).collect()
    }

    fn check_arity(&self, x: &TritWord) -> Result<()> {
        if x.len() != self.n_inputs {
            return Err(Error::ArityMismatch {
                expected: self.n_inputs,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn eval_bools(&self, x: &[bool]) -> Vec<bool> {
        self.eval_with(x, |b| b, |a| !a, |a, b| a && b, |a, b| a || b)
    }

    pub fn eval_boolean(&self, x: &TritWord) -> Result<TritWord> {
        self.check_arity(x)?;
        let bits: Option<Vec<bool>> = x.iter().map(Trit::to_bool).collect();
        let bits = bits.ok_or_else(|| Error::UnstableInput(x.clone()))?;
        Ok(TritWord::from_bools(&self.eval_bools(&bits)))
    }

    pub fn eval_kleene(&self, x: &TritWord) -> Result<TritWord> {
        self.check_arity(x)?;
        Ok(self
            .eval_with(x.as_slice(), Trit::from, not_u, and_u, or_u)
            .into())
    }
}

/// Incremental construction helper; every method returns the new gate index.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    n_inputs: usize,
    gates: Vec<Gate>,
    outputs: Vec<usize>,
}

impl CircuitBuilder {
    pub fn new(n_inputs: usize) -> Self {
        CircuitBuilder {
            n_inputs,
            ..Default::default()
        }
    }

    fn push(&mut self, g: Gate) -> usize {
        self.gates.push(g);
        self.gates.len() - 1
    }

    pub fn input(&mut self, k: usize) -> usize {
        self.push(Gate::Input(k))
    }

    pub fn constant(&mut self, b: bool) -> usize {
        self.push(Gate::Const(b))
    }

    pub fn not(&mut self, a: usize) -> usize {
        self.push(Gate::Not(a))
    }

    pub fn and(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::And(a, b))
    }

    pub fn or(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::Or(a, b))
    }

    pub fn output(&mut self, g: usize) {
        self.outputs.push(g);
    }

    pub fn finish(self) -> Result<Circuit> {
        Circuit::new(self.n_inputs, self.gates, self.outputs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> TritWord {
        s.parse().unwrap()
    }

    fn and2() -> Circuit {
        Circuit::new(2, vec![Gate::Input(0), Gate::Input(1), Gate::And(0, 1)], vec![2]).unwrap()
    }

    #[test]
    fn boolean_examples() {
        assert_eq!(and2().eval_boolean(&w("11")).unwrap(), w("1"));
        let not = Circuit::new(1, vec![Gate::Input(0), Gate::Not(0)], vec![1]).unwrap();
        assert_eq!(not.eval_boolean(&w("0")).unwrap(), w("1"));
    }

    #[test]
    fn boolean_rejects_unstable_and_bad_arity() {
        assert_eq!(and2().eval_boolean(&w("1u")), Err(Error::UnstableInput(w("1u"))));
        assert_eq!(
            and2().eval_kleene(&w("1")),
            Err(Error::ArityMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn rejects_forward_references_and_missing_outputs() {
        assert!(Circuit::new(1, vec![Gate::Not(1), Gate::Input(0)], vec![0]).is_err());
        assert!(Circuit::new(1, vec![Gate::Input(0)], vec![3]).is_err());
        assert!(Circuit::new(1, vec![Gate::Input(2)], vec![0]).is_err());
    }

    #[test]
    fn size_and_depth() {
        let c = build_cmux_bit();
        // not s, three ands, one inner or; the outer or is the output
        assert_eq!(c.size(), 5);
        assert_eq!(c.depth(), 3);
        let m = build_mux(1).unwrap();
        assert_eq!(m.size(), 3);
        assert_eq!(m.depth(), 3);
    }
}
