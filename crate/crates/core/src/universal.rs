//! Tape-level CMUX selection and the universal machine that computes the
//! metastable closure of an arbitrary machine.
//!
//! Step accounting is uniform: one unit per cell read, one per cell write
//! and one per `cmux_bit` application. Simulated machine steps are counted
//! as reported by the simulator.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kleene::{and_u, not_u, or_u, ResolutionIterator, Trit, TritWord, DEFAULT_CAPACITY};
use crate::machine::{
    simulate, MachineRef, MachineSpec, ScriptedRun, SimOutcome, UtmResult,
    VirtualMachine, VirtualRun,
};

/// Hazard-free one-bit multiplexer: `s = 0` selects `a`, `s = 1` selects `b`.
pub fn cmux_bit(a: Trit, b: Trit, s: Trit) -> Trit {
    or_u(and_u(a, not_u(s)), or_u(and_u(b, s), and_u(a, b)))
}

/// A work tape of `2^ℓ` cells with operation counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionTape {
    cells: Vec<Trit>,
    levels: usize,
    ops: u64,
    cmux_applications: u64,
    trajectory: Vec<usize>,
}

impl SelectionTape {
    /// Fails unless `|cells| = 2^ℓ` for some `ℓ ≥ 1`.
    pub fn new(cells: TritWord) -> Result<Self> {
        let len = cells.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::LengthMismatch {
                left: len,
                right: len.max(2).next_power_of_two(),
            });
        }
        Ok(SelectionTape {
            levels: len.trailing_zeros() as usize,
            cells: cells.into_vec(),
            ops: 0,
            cmux_applications: 0,
            trajectory: Vec::new(),
        })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn cells(&self) -> &[Trit] {
        &self.cells
    }

    /// Reads, writes and `cmux_bit` applications so far.
    pub fn ops(&self) -> u64 {
        self.ops
    }

    pub fn cmux_applications(&self) -> u64 {
        self.cmux_applications
    }

    /// Every cell index read or written, in order.
    pub fn trajectory(&self) -> &[usize] {
        &self.trajectory
    }

    fn read(&mut self, j: usize) -> Trit {
        self.ops += 1;
        self.trajectory.push(j);
        self.cells[j]
    }

    fn write(&mut self, j: usize, t: Trit) {
        self.ops += 1;
        self.trajectory.push(j);
        self.cells[j] = t;
    }

    fn cmux(&mut self, a: Trit, b: Trit, s: Trit) -> Trit {
        self.ops += 1;
        self.cmux_applications += 1;
        cmux_bit(a, b, s)
    }
}

/// Selects `y[⟨s⟩]` by repeated halving, `s[0]` being the most significant
/// select bit. Overwrites the lower half of the tape in place and returns
/// the final content of cell 0.
pub fn t_cmux(y: &mut SelectionTape, s: &TritWord) -> Result<Trit> {
    if s.len() != y.levels {
        return Err(Error::LengthMismatch {
            left: s.len(),
            right: y.levels,
        });
    }
    for i in 0..y.levels {
        let half = 1usize << (y.levels - i - 1);
        for j in 0..half {
            let a = y.read(j);
            let b = y.read(j + half);
            let c = y.cmux(a, b, s[i]);
            y.write(j, c);
        }
    }
    Ok(y.read(0))
}

/// [`t_cmux`] on the tape `y ∘ s` as a virtual machine.
///
/// An input whose length is not `2^ℓ + ℓ` for some `ℓ ≥ 1` halts at once
/// with empty output.
#[derive(Debug, Clone, Copy, Default)]
pub struct TCmuxMachine;

impl TCmuxMachine {
    fn split(input: &TritWord) -> Option<(TritWord, TritWord)> {
        let n = input.len();
        let levels = (1..usize::BITS as usize - 1).find(|&l| (1usize << l) + l >= n)?;
        let cells = 1usize << levels;
        if cells + levels != n {
            return None;
        }
        let y = input.iter().take(cells).collect();
        let s = input.iter().skip(cells).collect();
        Some((y, s))
    }
}

impl VirtualMachine for TCmuxMachine {
    fn name(&self) -> &str {
        "t-cmux"
    }

    fn cost_convention(&self) -> &str {
        "one step per cell read, cell write and cmux_bit application"
    }

    fn start<'a>(&'a self, input: &TritWord) -> Box<dyn VirtualRun + 'a> {
        let run = Self::split(input).and_then(|(y, s)| {
            let mut tape = SelectionTape::new(y).ok()?;
            let out = t_cmux(&mut tape, &s).ok()?;
            Some(
                ScriptedRun::halting(tape.ops(), TritWord::new(vec![out]))
                    .with_trajectory(tape.trajectory().to_vec()),
            )
        });
        Box::new(run.unwrap_or_else(|| ScriptedRun::halting(0, TritWord::empty())))
    }

    fn spec(&self) -> MachineSpec {
        MachineSpec::Construction {
            name: "t-cmux".into(),
            params: Default::default(),
            inner: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupRecord {
    pub n: usize,
    pub total_steps: u64,
    pub per_resolution_steps: Vec<u64>,
}

/// Outcome of a bounded universal run, with `NoHalt` as the special symbol
/// for "no resolution halted within the bound".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtendedOutcome {
    Value(Trit),
    NoHalt,
    USym,
}

impl ExtendedOutcome {
    /// Superposition over `{0, 1, u, NoHalt}`: equal outcomes are kept,
    /// anything else becomes `USym`.
    pub fn join(self, other: ExtendedOutcome) -> ExtendedOutcome {
        if self == other {
            self
        } else {
            ExtendedOutcome::USym
        }
    }
}

impl std::fmt::Display for ExtendedOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedOutcome::Value(t) => write!(f, "{t}"),
            ExtendedOutcome::NoHalt => write!(f, "nohalt"),
            ExtendedOutcome::USym => write!(f, "u"),
        }
    }
}

/// Folds per-resolution outcomes; `None` for an empty collection.
pub fn aggregate(outcomes: impl IntoIterator<Item = ExtendedOutcome>) -> Option<ExtendedOutcome> {
    outcomes.into_iter().reduce(ExtendedOutcome::join)
}

fn single_trit(input: &TritWord, output: &TritWord) -> Result<Trit> {
    match output.as_slice() {
        [t] => Ok(*t),
        _ => Err(Error::NonSingleBitOutput {
            input: input.clone(),
            output: output.clone(),
        }),
    }
}

fn check_capacity(n: usize, capacity: usize) -> Result<()> {
    if n > capacity.min(ResolutionIterator::MAX_UNSTABLE) {
        return Err(Error::CapacityExceeded {
            unstable: n,
            limit: capacity.min(ResolutionIterator::MAX_UNSTABLE),
        });
    }
    Ok(())
}

/// [`mc_universal_within`] at [`DEFAULT_CAPACITY`].
pub fn mc_universal(m: &MachineRef, x: &TritWord, per_run_budget: u64) -> Result<(Trit, BlowupRecord)> {
    mc_universal_within(m, x, per_run_budget, DEFAULT_CAPACITY)
}

/// Runs `m` on every stable word of length `|x|`, stores the outputs in a
/// table indexed by the word's binary value and selects from the table with
/// [`t_cmux`] under select word `x`.
///
/// `total_steps` adds one write per table entry and the selection's
/// operations to the simulated steps; it does not depend on how unstable
/// `x` is.
pub fn mc_universal_within(
    m: &MachineRef,
    x: &TritWord,
    per_run_budget: u64,
    capacity: usize,
) -> Result<(Trit, BlowupRecord)> {
    let n = x.len();
    check_capacity(n, capacity)?;
    let runs: Vec<(TritWord, SimOutcome)> = (0..1u64 << n)
        .into_par_iter()
        .map(|i| {
            let input = TritWord::from_index(i, n);
            let out = simulate(m, &input, per_run_budget);
            (input, out)
        })
        .collect();

    let mut table = Vec::with_capacity(runs.len());
    let mut per_resolution_steps = Vec::with_capacity(runs.len());
    for (input, out) in runs {
        match out {
            SimOutcome::Halted { output, steps } => {
                table.push(single_trit(&input, &output)?);
                per_resolution_steps.push(steps);
            }
            SimOutcome::BudgetExhausted { .. } => {
                return Err(Error::NonTotalWithinBudget {
                    witness: input,
                    budget: per_run_budget,
                });
            }
        }
    }
    let writes = table.len() as u64;
    let (result, select_ops) = if n == 0 {
        (table[0], 1)
    } else {
        let mut tape = SelectionTape::new(TritWord::new(table))?;
        let c = t_cmux(&mut tape, x)?;
        (c, tape.ops())
    };
    let total_steps = per_resolution_steps.iter().sum::<u64>() + writes + select_ops;
    Ok((
        result,
        BlowupRecord {
            n,
            total_steps,
            per_resolution_steps,
        },
    ))
}

/// [`mc_universal_bounded_within`] at [`DEFAULT_CAPACITY`].
pub fn mc_universal_bounded(m: &MachineRef, x: &TritWord, bound: u64) -> Result<(ExtendedOutcome, BlowupRecord)> {
    mc_universal_bounded_within(m, x, bound, DEFAULT_CAPACITY)
}

/// Runs `m` with bound `bound` on every resolution of `x` and superposes
/// the outcomes, a run that does not halt contributing `NoHalt`.
///
/// `total_steps` is the simulated steps plus one unit per aggregated
/// outcome.
pub fn mc_universal_bounded_within(
    m: &MachineRef,
    x: &TritWord,
    bound: u64,
    capacity: usize,
) -> Result<(ExtendedOutcome, BlowupRecord)> {
    let resolutions: Vec<TritWord> = ResolutionIterator::with_capacity(x, capacity)?.collect();
    let runs: Vec<(TritWord, SimOutcome)> = resolutions
        .into_par_iter()
        .map(|r| {
            let out = simulate(m, &r, bound);
            (r, out)
        })
        .collect();
    let mut outcomes = Vec::with_capacity(runs.len());
    let mut per_resolution_steps = Vec::with_capacity(runs.len());
    for (r, out) in runs {
        per_resolution_steps.push(out.steps());
        outcomes.push(match out {
            SimOutcome::Halted { output, .. } => ExtendedOutcome::Value(single_trit(&r, &output)?),
            SimOutcome::BudgetExhausted { .. } => ExtendedOutcome::NoHalt,
        });
    }
    let total_steps = per_resolution_steps.iter().sum::<u64>() + outcomes.len() as u64;
    let outcome = aggregate(outcomes).ok_or(Error::EmptyCollection)?;
    Ok((
        outcome,
        BlowupRecord {
            n: x.len(),
            total_steps,
            per_resolution_steps,
        },
    ))
}

/// Per-resolution outcome of [`crate::machine::utm_bounded`], mapped into the extended
/// alphabet.
pub fn extended_outcome(result: &UtmResult) -> Option<ExtendedOutcome> {
    match result {
        UtmResult::Output(w) => match w.as_slice() {
            [t] => Some(ExtendedOutcome::Value(*t)),
            _ => None,
        },
        UtmResult::Failure => Some(ExtendedOutcome::NoHalt),
    }
}

/// Runs [`mc_universal_within`] on `u^n` for every `n` in `ns`, with the
/// machine for each `n` drawn from `family`.
pub fn blowup_bench(
    family: impl Fn(usize) -> MachineRef,
    ns: RangeInclusive<usize>,
    per_run_budget: u64,
    capacity: usize,
) -> Result<Vec<BlowupRecord>> {
    ns.map(|n| {
        let x = TritWord::repeat(Trit::U, n);
        mc_universal_within(&family(n), &x, per_run_budget, capacity).map(|(_, r)| r)
    })
    .collect()
}

/// `total_steps(n) / total_steps(n - 1)` for consecutive records.
pub fn growth_ratios(records: &[BlowupRecord]) -> Vec<Option<f64>> {
    std::iter::once(None)
        .chain(records.windows(2).map(|w| {
            (w[0].total_steps > 0).then(|| w[1].total_steps as f64 / w[0].total_steps as f64)
        }))
        .take(records.len())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::kleene::{all_words, closure_oracle};

    fn w(s: &str) -> TritWord {
        s.parse().unwrap()
    }

    fn select(y: &str, s: &str) -> Trit {
        let mut tape = SelectionTape::new(w(y)).unwrap();
        t_cmux(&mut tape, &w(s)).unwrap()
    }

    #[test]
    fn cmux_bit_examples() {
        use Trit::*;
        assert_eq!(cmux_bit(One, One, U), One);
        assert_eq!(cmux_bit(Zero, One, Zero), Zero);
        assert_eq!(cmux_bit(Zero, One, U), U);
    }

    #[test]
    fn t_cmux_examples() {
        assert_eq!(select("0110", "10"), Trit::One);
        assert_eq!(select("0001", "uu"), Trit::U);
        assert_eq!(select("0110", "01"), Trit::One);
        assert_eq!(select("0110", "00"), Trit::Zero);
    }

    #[test]
    fn t_cmux_shape_errors() {
        assert!(SelectionTape::new(w("011")).is_err());
        assert!(SelectionTape::new(w("0")).is_err());
        let mut tape = SelectionTape::new(w("0110")).unwrap();
        assert!(t_cmux(&mut tape, &w("1")).is_err());
    }

    #[test]
    fn counters() {
        let mut tape = SelectionTape::new(TritWord::repeat(Trit::Zero, 8)).unwrap();
        t_cmux(&mut tape, &w("u01")).unwrap();
        assert_eq!(tape.cmux_applications(), 7);
        assert_eq!(tape.ops(), 4 * 7 + 1);
        assert_eq!(tape.trajectory().len(), 3 * 7 + 1);
    }

    #[test]
    fn virtual_t_cmux_matches_function() {
        let m = MachineRef::virtual_machine(TCmuxMachine);
        let out = simulate(&m, &w("0110").concat(&w("10")), 1000);
        assert_eq!(out.output(), Some(&w("1")));
        assert_eq!(out.steps(), 4 * 3 + 1);
        assert_eq!(simulate(&m, &w("0110"), 10).output(), Some(&TritWord::empty()));
    }

    #[test]
    fn universal_examples() {
        let parity = MachineRef::table(corpus::parity());
        let and = MachineRef::table(corpus::and());
        assert_eq!(mc_universal(&parity, &w("u1"), 100).unwrap().0, Trit::U);
        assert_eq!(mc_universal(&and, &w("0u"), 100).unwrap().0, Trit::Zero);
        let (c, rec) = mc_universal(&parity, &w("101"), 100).unwrap();
        assert_eq!(c, Trit::Zero);
        assert_eq!(rec.per_resolution_steps, vec![7; 8]);
    }

    #[test]
    fn universal_equals_closure_small() {
        let m = MachineRef::table(corpus::majority());
        for n in 0..=3 {
            for x in all_words(n) {
                let f = |i: &TritWord| simulate(&m, i, 1000).output().unwrap().clone();
                let expect = closure_oracle(f, &x).unwrap();
                let (c, _) = mc_universal(&m, &x, 1000).unwrap();
                assert_eq!(TritWord::new(vec![c]), expect, "{x}");
            }
        }
    }

    #[test]
    fn universal_errors() {
        let looper = MachineRef::table(corpus::looper());
        assert_eq!(
            mc_universal(&looper, &w("u"), 10),
            Err(Error::NonTotalWithinBudget {
                witness: w("0"),
                budget: 10
            })
        );
        let id = MachineRef::table(corpus::immediate_halt());
        assert!(matches!(
            mc_universal(&id, &w("uu"), 10),
            Err(Error::NonSingleBitOutput { .. })
        ));
        assert!(matches!(
            mc_universal_within(&id, &w("uuu"), 10, 2),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn bounded_aggregation() {
        let looper = MachineRef::table(corpus::looper());
        let accept = MachineRef::table(corpus::accept_all());
        assert_eq!(
            mc_universal_bounded(&looper, &w("uu"), 50).unwrap().0,
            ExtendedOutcome::NoHalt
        );
        assert_eq!(
            mc_universal_bounded(&accept, &w("u1"), 50).unwrap().0,
            ExtendedOutcome::Value(Trit::One)
        );
        // seek_one halts on 1 at once and runs off right on 0 forever
        let seek = MachineRef::table(corpus::seek_one());
        let (o, rec) = mc_universal_bounded(&seek, &w("u"), 1).unwrap();
        assert_eq!(rec.per_resolution_steps.len(), 2);
        assert_eq!(o, ExtendedOutcome::USym);
    }

    #[test]
    fn join_is_a_semilattice() {
        use ExtendedOutcome::*;
        let all = [Value(Trit::Zero), Value(Trit::One), Value(Trit::U), NoHalt, USym];
        for a in all {
            assert_eq!(a.join(a), a);
            assert_eq!(a.join(USym), USym);
            for b in all {
                assert_eq!(a.join(b), b.join(a));
                for c in all {
                    assert_eq!(a.join(b).join(c), a.join(b.join(c)));
                }
            }
        }
    }

    #[test]
    fn bench_shapes() {
        let recs = blowup_bench(|_| MachineRef::table(corpus::accept_all()), 1..=3, 100, 24).unwrap();
        assert_eq!(recs[0].per_resolution_steps.len(), 2);
        let ratios = growth_ratios(&recs);
        assert_eq!(ratios.len(), 3);
        assert!(ratios[0].is_none());
        assert!(blowup_bench(|_| MachineRef::table(corpus::parity()), 5..=5, 100, 4).is_err());
    }
}
