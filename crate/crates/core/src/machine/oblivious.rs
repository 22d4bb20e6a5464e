//! Empirical obliviousness check.
//!
//! A machine is oblivious when its head position at step `i` depends only
//! on the input length and `i`. The probe runs the machine on a handful of
//! inputs of one length and compares head trajectories. Agreement on the
//! sample is evidence, not proof.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::MachineRef;
use crate::kleene::{Trit, TritWord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObliviousnessReport {
    /// Head position before each executed step, shared by every sample.
    ConsistentTrajectory(Vec<usize>),
    /// The trajectories of `x1` and `x2` first differ at `step`, either in
    /// head position or because one run stopped earlier.
    Witness { x1: TritWord, x2: TritWord, step: u64 },
}

fn trajectory(m: &MachineRef, x: &TritWord, budget: u64) -> Vec<usize> {
    let mut run = m.start(x);
    let mut heads = Vec::new();
    while !run.is_halted() && run.steps() < budget {
        heads.push(run.head());
        run.step().expect("not halted");
    }
    heads
}

pub fn is_oblivious_probe_on(m: &MachineRef, inputs: &[TritWord], budget: u64) -> ObliviousnessReport {
    let mut reference: Option<(&TritWord, Vec<usize>)> = None;
    for x in inputs {
        let t = trajectory(m, x, budget);
        match &reference {
            None => reference = Some((x, t)),
            Some((x0, t0)) => {
                let common = t0.len().min(t.len());
                let diverge = (0..common).find(|&i| t0[i] != t[i]).or_else(|| {
                    (t0.len() != t.len()).then_some(common)
                });
                if let Some(step) = diverge {
                    return ObliviousnessReport::Witness {
                        x1: (*x0).clone(),
                        x2: x.clone(),
                        step: step as u64,
                    };
                }
            }
        }
    }
    ObliviousnessReport::ConsistentTrajectory(reference.map(|r| r.1).unwrap_or_default())
}

/// Probes `samples` random stable inputs of length `n`.
pub fn is_oblivious_probe(
    m: &MachineRef,
    n: usize,
    budget: u64,
    samples: usize,
    seed: u64,
) -> ObliviousnessReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<TritWord> = (0..samples.max(2))
        .map(|_| (0..n).map(|_| Trit::from(rng.gen_bool(0.5))).collect())
        .collect();
    is_oblivious_probe_on(m, &inputs, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn w(s: &str) -> TritWord {
        s.parse().unwrap()
    }

    #[test]
    fn fold_machines_are_oblivious() {
        let m = MachineRef::table(corpus::parity());
        match is_oblivious_probe(&m, 5, 1000, 20, 1) {
            ObliviousnessReport::ConsistentTrajectory(t) => {
                assert_eq!(t, [0, 1, 2, 3, 4, 5, 4, 3, 2, 1, 0]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn seek_first_one_is_not() {
        let m = MachineRef::table(corpus::seek_one());
        assert_eq!(
            is_oblivious_probe_on(&m, &[w("001"), w("100")], 100),
            ObliviousnessReport::Witness { x1: w("001"), x2: w("100"), step: 1 }
        );
        assert!(matches!(
            is_oblivious_probe(&m, 6, 100, 16, 9),
            ObliviousnessReport::Witness { .. }
        ));
    }

    #[test]
    fn identical_inputs_are_vacuously_consistent() {
        let m = MachineRef::table(corpus::seek_one());
        assert!(matches!(
            is_oblivious_probe_on(&m, &[w("0010"), w("0010")], 100),
            ObliviousnessReport::ConsistentTrajectory(_)
        ));
    }
}
