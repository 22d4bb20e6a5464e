//! Decision problems about budgeted machine runs, their deciders, and
//! reductions between them.
//!
//! Instances are always ordered `(machine, input, bound)`.

pub mod bundle;
pub mod formula;
pub mod random;
pub mod reduce;

pub use bundle::{machine_from_spec, InstanceBundle};
pub use formula::{
    decide_tautology_bruteforce, enumerate_formulas, formula_eval, formula_eval_kleene,
    parse_formula_file, Formula, Node,
};
pub use reduce::{
    decode_formula, encode_formula, is_pexp_bound, next_pexp_bound, reduce_bhp_to_pexp,
    reduce_pexp_to_detect1, reduce_tautology_to_detect_poly, HaltDetector, SinkAfter,
    TautologyEvaluator,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kleene::{ResolutionIterator, Trit, TritWord, DEFAULT_CAPACITY};
use crate::machine::{simulate, utm_bounded, MachineRef, UtmResult};
use crate::universal::{mc_universal_bounded_within, ExtendedOutcome};

/// Bounded halting with a bound of the form `2^i + 1`.
#[derive(Debug, Clone)]
pub struct PExpBhpInstance {
    pub m: MachineRef,
    pub x: TritWord,
    pub k: u64,
}

/// Does one unstable bit change the bounded outcome?
#[derive(Debug, Clone)]
pub struct Detect1Instance {
    pub m: MachineRef,
    pub x: TritWord,
    pub k: u64,
}

impl Detect1Instance {
    pub fn new(m: MachineRef, x: TritWord, k: u64) -> Result<Self> {
        let inst = Detect1Instance { m, x, k };
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<()> {
        if self.x.u_count() != 1 {
            return Err(Error::InstanceMalformed(format!(
                "input must contain exactly one u, {} has {}",
                self.x,
                self.x.u_count()
            )));
        }
        if self.k == 0 {
            return Err(Error::InstanceMalformed("bound must be at least 1".into()));
        }
        Ok(())
    }
}

/// Do all resolutions agree on one output bit within `|x|^c` steps?
#[derive(Debug, Clone)]
pub struct DetectPolyInstance {
    pub m: MachineRef,
    pub x: TritWord,
    pub c: u32,
}

impl DetectPolyInstance {
    pub fn new(m: MachineRef, x: TritWord, c: u32) -> Result<Self> {
        if c == 0 {
            return Err(Error::InstanceMalformed("exponent must be at least 1".into()));
        }
        Ok(DetectPolyInstance { m, x, c })
    }

    /// `|x|^c`, saturating.
    pub fn budget(&self) -> u64 {
        (self.x.len() as u64).saturating_pow(self.c)
    }
}

/// Whether `m` halts on `x` within `bound` steps.
pub fn decide_bhp(m: &MachineRef, x: &TritWord, bound: u64) -> bool {
    simulate(m, x, bound).halted()
}

pub fn decide_pexp_bhp(inst: &PExpBhpInstance) -> bool {
    is_pexp_bound(inst.k) && decide_bhp(&inst.m, &inst.x, inst.k)
}

/// True iff the two resolutions of `x` have different bounded outcomes,
/// where not halting counts as an outcome of its own.
pub fn decide_detect1(inst: &Detect1Instance) -> Result<bool> {
    inst.validate()?;
    let mut outcomes = ResolutionIterator::new(&inst.x)?.map(|r| utm_bounded(&inst.m, &r, inst.k));
    let a = outcomes.next().ok_or(Error::EmptyCollection)?;
    let b = outcomes.next().ok_or(Error::EmptyCollection)?;
    Ok(a != b)
}

/// True iff some `b ∈ {0, 1}` is the bounded output on every resolution.
pub fn decide_detect_poly(inst: &DetectPolyInstance) -> Result<bool> {
    decide_detect_poly_within(inst, DEFAULT_CAPACITY)
}

pub fn decide_detect_poly_within(inst: &DetectPolyInstance, capacity: usize) -> Result<bool> {
    let resolutions = ResolutionIterator::with_capacity(&inst.x, capacity)?;
    let budget = inst.budget();
    let outcomes: Vec<UtmResult> = (0..resolutions.count_total())
        .into_par_iter()
        .map(|i| utm_bounded(&inst.m, &resolutions.nth_resolution(i), budget))
        .collect();
    let bit = |o: &UtmResult| match o {
        UtmResult::Output(w) if w.len() == 1 && w[0].is_stable() => Some(w[0]),
        _ => None,
    };
    let first = bit(&outcomes[0]);
    Ok(first.is_some() && outcomes.iter().all(|o| bit(o) == first))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DemoVerdict {
    Accept,
    Reject,
    Unknown,
}

/// Bounded test of "accepts every input of length `k`": superposes the runs
/// on all resolutions of `u^k`.
pub fn demo_accepts_all(m: &MachineRef, k: usize, per_run_budget: u64) -> Result<DemoVerdict> {
    demo_accepts_all_within(m, k, per_run_budget, DEFAULT_CAPACITY)
}

pub fn demo_accepts_all_within(
    m: &MachineRef,
    k: usize,
    per_run_budget: u64,
    capacity: usize,
) -> Result<DemoVerdict> {
    let x = TritWord::repeat(Trit::U, k);
    let (outcome, _) = mc_universal_bounded_within(m, &x, per_run_budget, capacity)?;
    Ok(match outcome {
        ExtendedOutcome::Value(Trit::One) => DemoVerdict::Accept,
        ExtendedOutcome::NoHalt => DemoVerdict::Unknown,
        ExtendedOutcome::Value(_) | ExtendedOutcome::USym => DemoVerdict::Reject,
    })
}
