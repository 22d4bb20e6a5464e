//! Budgeted simulation over a uniform machine handle.
//!
//! [`MachineRef`] covers both parsed table machines and host-constructed
//! virtual machines (the outputs of reductions, the tape-level CMUX).
//! Virtual machines declare how they charge steps; the simulator treats both
//! kinds identically.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{BooleanTM, Configuration, TraceEntry};
use crate::error::Result;
use crate::kleene::TritWord;

/// Serializable description of a machine, used for instance bundles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MachineSpec {
    Table {
        dsl: String,
    },
    Construction {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, String>,
        #[serde(default)]
        inner: Vec<MachineSpec>,
    },
}

pub trait VirtualMachine: fmt::Debug + Send + Sync {
    fn name(&self) -> &str;

    /// Human-readable statement of how steps are charged.
    fn cost_convention(&self) -> &str;

    fn start<'a>(&'a self, input: &TritWord) -> Box<dyn VirtualRun + 'a>;

    fn spec(&self) -> MachineSpec;
}

/// A running virtual machine.
pub trait VirtualRun {
    /// Performs one step. Must not be called once halted.
    fn step(&mut self);

    fn output(&self) -> Option<&TritWord>;

    fn head(&self) -> usize;

    fn steps(&self) -> u64;

    /// Runs at most `max_steps` further steps, stopping early on halt.
    fn advance(&mut self, max_steps: u64) {
        for _ in 0..max_steps {
            if self.output().is_some() {
                break;
            }
            self.step();
        }
    }
}

/// A virtual run whose result is known up front: it charges steps until
/// `halt_at` (forever if `None`) and then exposes `output`. The head follows
/// `trajectory` and stays on its last entry afterwards.
#[derive(Debug, Clone)]
pub struct ScriptedRun {
    halt_at: Option<u64>,
    output: TritWord,
    trajectory: Vec<usize>,
    steps: u64,
}

impl ScriptedRun {
    pub fn halting(after: u64, output: TritWord) -> Self {
        ScriptedRun {
            halt_at: Some(after),
            output,
            trajectory: Vec::new(),
            steps: 0,
        }
    }

    pub fn diverging() -> Self {
        ScriptedRun {
            halt_at: None,
            output: TritWord::empty(),
            trajectory: Vec::new(),
            steps: 0,
        }
    }

    pub fn with_trajectory(mut self, trajectory: Vec<usize>) -> Self {
        self.trajectory = trajectory;
        self
    }
}

impl VirtualRun for ScriptedRun {
    fn step(&mut self) {
        debug_assert!(self.output().is_none());
        self.steps += 1;
    }

    fn output(&self) -> Option<&TritWord> {
        (self.halt_at == Some(self.steps)).then_some(&self.output)
    }

    fn head(&self) -> usize {
        let i = self.steps as usize;
        self.trajectory
            .get(i)
            .or(self.trajectory.last())
            .copied()
            .unwrap_or(0)
    }

    fn steps(&self) -> u64 {
        self.steps
    }

    fn advance(&mut self, max_steps: u64) {
        let target = self.steps.saturating_add(max_steps);
        self.steps = match self.halt_at {
            Some(h) if h >= self.steps => target.min(h),
            _ => target,
        };
    }
}

#[derive(Debug, Clone)]
pub enum MachineRef {
    Table(Arc<BooleanTM>),
    Virtual(Arc<dyn VirtualMachine>),
}

impl MachineRef {
    pub fn table(tm: BooleanTM) -> Self {
        MachineRef::Table(Arc::new(tm))
    }

    pub fn virtual_machine(vm: impl VirtualMachine + 'static) -> Self {
        MachineRef::Virtual(Arc::new(vm))
    }

    pub fn name(&self) -> &str {
        match self {
            MachineRef::Table(_) => "table",
            MachineRef::Virtual(v) => v.name(),
        }
    }

    pub fn cost_convention(&self) -> &str {
        match self {
            MachineRef::Table(_) => "one step per transition",
            MachineRef::Virtual(v) => v.cost_convention(),
        }
    }

    pub fn spec(&self) -> MachineSpec {
        match self {
            MachineRef::Table(tm) => MachineSpec::Table { dsl: tm.to_dsl() },
            MachineRef::Virtual(v) => v.spec(),
        }
    }

    pub fn start(&self, x: &TritWord) -> Execution<'_> {
        match self {
            MachineRef::Table(tm) => Execution::Table {
                tm,
                config: tm.initial(x),
            },
            MachineRef::Virtual(v) => Execution::Virtual(v.start(x)),
        }
    }
}

impl From<BooleanTM> for MachineRef {
    fn from(tm: BooleanTM) -> Self {
        MachineRef::table(tm)
    }
}

/// An in-progress run of either machine kind.
pub enum Execution<'a> {
    Table {
        tm: &'a BooleanTM,
        config: Configuration,
    },
    Virtual(Box<dyn VirtualRun + 'a>),
}

impl Execution<'_> {
    pub fn is_halted(&self) -> bool {
        match self {
            Execution::Table { tm, config } => tm.is_halted(config),
            Execution::Virtual(v) => v.output().is_some(),
        }
    }

    pub fn output(&self) -> Option<TritWord> {
        match self {
            Execution::Table { tm, config } => tm.is_halted(config).then(|| tm.output(config)),
            Execution::Virtual(v) => v.output().cloned(),
        }
    }

    pub fn head(&self) -> usize {
        match self {
            Execution::Table { config, .. } => config.head,
            Execution::Virtual(v) => v.head(),
        }
    }

    pub fn steps(&self) -> u64 {
        match self {
            Execution::Table { config, .. } => config.steps,
            Execution::Virtual(v) => v.steps(),
        }
    }

    /// One step; `Err(AlreadyHalted)` if the run has halted.
    pub fn step(&mut self) -> Result<Option<TraceEntry>> {
        match self {
            Execution::Table { tm, config } => tm.step(config).map(Some),
            Execution::Virtual(v) => {
                if v.output().is_some() {
                    return Err(crate::Error::AlreadyHalted);
                }
                v.step();
                Ok(None)
            }
        }
    }

    /// Steps until halted or until `budget` total steps have been taken.
    pub fn run(&mut self, budget: u64) {
        match self {
            Execution::Table { tm, config } => {
                while !tm.is_halted(config) && config.steps < budget {
                    tm.step(config).expect("not halted");
                }
            }
            Execution::Virtual(v) => {
                let left = budget.saturating_sub(v.steps());
                v.advance(left);
            }
        }
    }

    pub fn outcome(&self) -> SimOutcome {
        match self.output() {
            Some(output) => SimOutcome::Halted {
                output,
                steps: self.steps(),
            },
            None => SimOutcome::BudgetExhausted {
                steps: self.steps(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SimOutcome {
    Halted { output: TritWord, steps: u64 },
    BudgetExhausted { steps: u64 },
}

impl SimOutcome {
    pub fn steps(&self) -> u64 {
        match self {
            SimOutcome::Halted { steps, .. } | SimOutcome::BudgetExhausted { steps } => *steps,
        }
    }

    pub fn output(&self) -> Option<&TritWord> {
        match self {
            SimOutcome::Halted { output, .. } => Some(output),
            SimOutcome::BudgetExhausted { .. } => None,
        }
    }

    pub fn halted(&self) -> bool {
        matches!(self, SimOutcome::Halted { .. })
    }
}

pub fn simulate(m: &MachineRef, x: &TritWord, budget: u64) -> SimOutcome {
    let mut run = m.start(x);
    run.run(budget);
    run.outcome()
}

/// [`simulate`] for table machines, recording every transition.
pub fn simulate_traced(tm: &BooleanTM, x: &TritWord, budget: u64) -> (SimOutcome, Vec<TraceEntry>) {
    let mut config = tm.initial(x);
    let mut trace = Vec::new();
    while !tm.is_halted(&config) && config.steps < budget {
        trace.push(tm.step(&mut config).expect("not halted"));
    }
    let outcome = if tm.is_halted(&config) {
        SimOutcome::Halted {
            output: tm.output(&config),
            steps: config.steps,
        }
    } else {
        SimOutcome::BudgetExhausted {
            steps: config.steps,
        }
    };
    (outcome, trace)
}

/// Result of a time-bounded universal simulation; `Failure` is the special
/// symbol for "did not halt within the bound".
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UtmResult {
    Output(TritWord),
    Failure,
}

impl fmt::Display for UtmResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UtmResult::Output(w) => write!(f, "{w}"),
            UtmResult::Failure => write!(f, "failure"),
        }
    }
}

pub fn utm_bounded(m: &MachineRef, x: &TritWord, bound: u64) -> UtmResult {
    match simulate(m, x, bound) {
        SimOutcome::Halted { output, .. } => UtmResult::Output(output),
        SimOutcome::BudgetExhausted { .. } => UtmResult::Failure,
    }
}
