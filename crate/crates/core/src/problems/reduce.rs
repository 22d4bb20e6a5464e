//! Instance-level reductions and the virtual machines they construct.
//!
//! Every constructed machine charges one step per simulated inner step. The
//! halt detector and the tautology evaluator add one terminal step for
//! producing their output; the sink wrapper halts on the very step its
//! inner machine halts.

use std::collections::BTreeMap;

use super::formula::{formula_eval_kleene, Formula, Node};
use super::{Detect1Instance, DetectPolyInstance, PExpBhpInstance};
use crate::error::{Error, Result};
use crate::kleene::{or_u, Trit, TritWord};
use crate::machine::{
    simulate, MachineRef, MachineSpec, ScriptedRun, SimOutcome, VirtualMachine, VirtualRun,
};

/// Runs the inner machine for at most `k` steps; if it has not halted by
/// then, enters a sink state and loops forever.
#[derive(Debug, Clone)]
pub struct SinkAfter {
    pub inner: MachineRef,
    pub k: u64,
}

impl VirtualMachine for SinkAfter {
    fn name(&self) -> &str {
        "pexp-sink"
    }

    fn cost_convention(&self) -> &str {
        "one step per inner step; halts on the inner machine's halting step"
    }

    fn start<'a>(&'a self, input: &TritWord) -> Box<dyn VirtualRun + 'a> {
        Box::new(match simulate(&self.inner, input, self.k) {
            SimOutcome::Halted { output, steps } => ScriptedRun::halting(steps, output),
            SimOutcome::BudgetExhausted { .. } => ScriptedRun::diverging(),
        })
    }

    fn spec(&self) -> MachineSpec {
        MachineSpec::Construction {
            name: self.name().into(),
            params: BTreeMap::from([("k".to_string(), self.k.to_string())]),
            inner: vec![self.inner.spec()],
        }
    }
}

/// Ignores the bits of its input except for their shape: runs the inner
/// machine on `s` with bound `k`, then outputs `1` iff the inner machine
/// halted and the input is in `0*1` with a leading `0`.
#[derive(Debug, Clone)]
pub struct HaltDetector {
    pub inner: MachineRef,
    pub s: TritWord,
    pub k: u64,
}

/// Whether `y ∈ 00*1`.
fn is_unit_encoding(y: &TritWord) -> bool {
    let t = y.as_slice();
    t.len() >= 2 && t[t.len() - 1] == Trit::One && t[..t.len() - 1].iter().all(|&b| b == Trit::Zero)
}

impl VirtualMachine for HaltDetector {
    fn name(&self) -> &str {
        "halt-detector"
    }

    fn cost_convention(&self) -> &str {
        "one step per inner step, plus one terminal step"
    }

    fn start<'a>(&'a self, input: &TritWord) -> Box<dyn VirtualRun + 'a> {
        let outcome = simulate(&self.inner, &self.s, self.k);
        let bit = outcome.halted() && is_unit_encoding(input);
        Box::new(ScriptedRun::halting(
            outcome.steps() + 1,
            TritWord::new(vec![Trit::from(bit)]),
        ))
    }

    fn spec(&self) -> MachineSpec {
        MachineSpec::Construction {
            name: self.name().into(),
            params: BTreeMap::from([
                ("k".to_string(), self.k.to_string()),
                ("s".to_string(), self.s.to_string()),
            ]),
            inner: vec![self.inner.spec()],
        }
    }
}

// ----- formula encoding -----------------------------------------------------
//
// ⟨τ⟩ = 1^L 0 body, where body is the postfix token sequence of τ (L bits):
// variable i as 0 1^i 0, negation as 10, conjunction as 110, disjunction as
// 111. The unary header makes the split between ⟨τ⟩ and the assignment
// unambiguous.

fn encode_node(n: &Node, out: &mut Vec<bool>) {
    match n {
        Node::Var(i) => {
            out.push(false);
            out.extend(std::iter::repeat_n(true, *i));
            out.push(false);
        }
        Node::Not(a) => {
            encode_node(a, out);
            out.extend([true, false]);
        }
        Node::And(a, b) => {
            encode_node(a, out);
            encode_node(b, out);
            out.extend([true, true, false]);
        }
        Node::Or(a, b) => {
            encode_node(a, out);
            encode_node(b, out);
            out.extend([true, true, true]);
        }
    }
}

pub fn encode_formula(tau: &Formula) -> TritWord {
    let mut body = Vec::new();
    encode_node(tau.root(), &mut body);
    let mut bits = vec![true; body.len()];
    bits.push(false);
    bits.extend(body);
    TritWord::from_bools(&bits)
}

/// Splits `input` into the formula root and the remaining word.
pub fn decode_formula(input: &TritWord) -> Option<(Node, TritWord)> {
    let t = input.as_slice();
    let len = t.iter().position(|&b| b != Trit::One)?;
    if t[len] != Trit::Zero || t.len() < len + 1 + len {
        return None;
    }
    let body: Vec<bool> = t[len + 1..len + 1 + len]
        .iter()
        .map(|b| b.to_bool())
        .collect::<Option<_>>()?;
    let mut stack: Vec<Node> = Vec::new();
    let mut i = 0;
    while i < body.len() {
        if !body[i] {
            let ones = body[i + 1..].iter().take_while(|&&b| b).count();
            if i + 1 + ones >= body.len() {
                return None;
            }
            stack.push(Node::Var(ones));
            i += ones + 2;
        } else if body.get(i + 1) == Some(&false) {
            let a = stack.pop()?;
            stack.push(Node::not(a));
            i += 2;
        } else {
            let b = stack.pop()?;
            let a = stack.pop()?;
            stack.push(match body.get(i + 2)? {
                false => Node::and(a, b),
                true => Node::or(a, b),
            });
            i += 3;
        }
    }
    let root = stack.pop()?;
    if !stack.is_empty() {
        return None;
    }
    Some((root, t[len + 1 + len..].iter().copied().collect()))
}

/// Reads `⟨τ⟩ ∘ y`. If `τ(0ⁿ) = 0` it outputs whether `y ≠ 0ⁿ`; otherwise
/// it outputs `τ(y)`. Malformed input, or a formula using more variables
/// than `|y|`, yields `0`.
///
/// Cost: `|input| + 2·(size(τ) + |y|) + 1` steps on every input.
#[derive(Debug, Clone, Copy, Default)]
pub struct TautologyEvaluator;

impl TautologyEvaluator {
    pub fn cost(input_len: usize, formula_size: usize, n_vars: usize) -> u64 {
        (input_len + 2 * (formula_size + n_vars) + 1) as u64
    }

    fn evaluate(input: &TritWord) -> (Trit, u64) {
        let malformed = (Trit::Zero, Self::cost(input.len(), 0, 0));
        let Some((root, y)) = decode_formula(input) else {
            return malformed;
        };
        let Ok(tau) = Formula::new(root, y.len()) else {
            return malformed;
        };
        let cost = Self::cost(input.len(), tau.size(), y.len());
        let zeros = TritWord::repeat(Trit::Zero, y.len());
        let at_zero = formula_eval_kleene(&tau, &zeros).expect("arity checked");
        let out = if at_zero == Trit::Zero {
            y.iter().fold(Trit::Zero, or_u)
        } else {
            formula_eval_kleene(&tau, &y).expect("arity checked")
        };
        (out, cost)
    }
}

impl VirtualMachine for TautologyEvaluator {
    fn name(&self) -> &str {
        "tautology-evaluator"
    }

    fn cost_convention(&self) -> &str {
        "|input| + 2(size + n) + 1 steps: one read pass, two evaluations, one output step"
    }

    fn start<'a>(&'a self, input: &TritWord) -> Box<dyn VirtualRun + 'a> {
        let (out, cost) = Self::evaluate(input);
        Box::new(ScriptedRun::halting(cost, TritWord::new(vec![out])))
    }

    fn spec(&self) -> MachineSpec {
        MachineSpec::Construction {
            name: self.name().into(),
            params: BTreeMap::new(),
            inner: Vec::new(),
        }
    }
}

// ----- reductions -----------------------------------------------------------

/// Largest exponent tried when choosing `c′`.
pub const MAX_EXPONENT: u32 = 16;

/// Smallest `2^i + 1 ≥ k` with `i ≥ 1`.
pub fn next_pexp_bound(k: u64) -> u64 {
    let mut b = 3u64;
    while b < k {
        b = 2 * (b - 1) + 1;
    }
    b
}

/// Whether `k = 2^i + 1` for some `i ≥ 1`, i.e. `k` is `10*1` in binary.
pub fn is_pexp_bound(k: u64) -> bool {
    k >= 3 && (k - 1).is_power_of_two()
}

pub fn reduce_bhp_to_pexp(m: &MachineRef, x: &TritWord, k: u64) -> PExpBhpInstance {
    PExpBhpInstance {
        m: MachineRef::virtual_machine(SinkAfter { inner: m.clone(), k }),
        x: x.clone(),
        k: next_pexp_bound(k),
    }
}

fn binary(k: u64) -> TritWord {
    let bits = 64 - k.leading_zeros() as usize;
    TritWord::from_index(k, bits.max(1))
}

/// Maps `(m, s, k)` to `(M′, k′, k + 1)`, where `k′` is `k` in binary with
/// its leading `1` replaced by `u`.
pub fn reduce_pexp_to_detect1(m: &MachineRef, s: &TritWord, k: u64) -> Result<Detect1Instance> {
    if !is_pexp_bound(k) {
        return Err(Error::MalformedBound(k));
    }
    let mut x = binary(k);
    x.set(0, Trit::U);
    Detect1Instance::new(
        MachineRef::virtual_machine(HaltDetector {
            inner: m.clone(),
            s: s.clone(),
            k,
        }),
        x,
        k + 1,
    )
}

/// Maps `τ` to `(M_τ, ⟨τ⟩ ∘ uⁿ, c′)`.
pub fn reduce_tautology_to_detect_poly(tau: &Formula) -> Result<DetectPolyInstance> {
    let n = tau.n_vars();
    if n > crate::kleene::DEFAULT_CAPACITY {
        return Err(Error::CapacityExceeded {
            unstable: n,
            limit: crate::kleene::DEFAULT_CAPACITY,
        });
    }
    let x = encode_formula(tau).concat(&TritWord::repeat(Trit::U, n));
    let needed = TautologyEvaluator::cost(x.len(), tau.size(), n) + 1;
    let base = x.len() as u64;
    let c = (1..=MAX_EXPONENT)
        .find(|&c| base.saturating_pow(c) >= needed)
        .ok_or_else(|| Error::SizeLimit(format!("no exponent up to {MAX_EXPONENT} covers {needed} steps")))?;
    DetectPolyInstance::new(MachineRef::virtual_machine(TautologyEvaluator), x, c)
}
