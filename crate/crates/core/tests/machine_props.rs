use mcturing_core::corpus;
use mcturing_core::kleene::{leq_word, Trit, TritWord};
use mcturing_core::machine::{
    is_oblivious_probe, simulate, simulate_natural_traced, simulate_traced, BooleanTM, MachineRef,
    ObliviousnessReport, SimOutcome,
};
use mcturing_core::problems::random::random_machine;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn stable_word(max: usize) -> impl Strategy<Value = TritWord> {
    prop::collection::vec(any::<bool>(), 0..=max).prop_map(|b| TritWord::from_bools(&b))
}

fn machine() -> impl Strategy<Value = BooleanTM> {
    any::<u64>().prop_map(|seed| random_machine(&mut ChaCha8Rng::seed_from_u64(seed), 4))
}

proptest! {
    #[test]
    fn simulation_is_deterministic(tm in machine(), x in stable_word(6), budget in 0u64..80) {
        prop_assert_eq!(simulate_traced(&tm, &x, budget), simulate_traced(&tm, &x, budget));
    }

    #[test]
    fn halting_outcomes_are_budget_monotone(tm in machine(), x in stable_word(6), budget in 0u64..80, extra in 0u64..100) {
        let m = MachineRef::table(tm);
        let first = simulate(&m, &x, budget);
        if first.halted() {
            prop_assert_eq!(simulate(&m, &x, budget + extra), first);
        } else {
            prop_assert_eq!(first.steps(), budget);
        }
    }

    #[test]
    fn each_step_changes_at_most_the_cell_under_the_head(tm in machine(), x in stable_word(6)) {
        let mut c = tm.initial(&x);
        for _ in 0..60 {
            if tm.is_halted(&c) {
                break;
            }
            let before = c.clone();
            let entry = tm.step(&mut c).unwrap();
            prop_assert_eq!(entry.head, before.head);
            let width = before.tape.len().max(c.tape.len()) + 1;
            for i in (0..width).filter(|&i| i != before.head) {
                prop_assert_eq!(before.cell(i), c.cell(i));
            }
            prop_assert_eq!(c.cell(before.head), entry.write);
        }
    }

    #[test]
    fn natural_twins_agree_on_stable_inputs(x in stable_word(7), which in any::<bool>()) {
        let (tm, nat) = if which {
            (corpus::parity(), corpus::natural_parity())
        } else {
            (corpus::and(), corpus::natural_and())
        };
        let mut c = tm.initial(&x);
        let mut codes = vec![corpus::natural_state_code(&tm, c.state)];
        while !tm.is_halted(&c) {
            tm.step(&mut c).unwrap();
            codes.push(corpus::natural_state_code(&tm, c.state));
        }
        let (outcome, states) = simulate_natural_traced(&nat, &x, 1000).unwrap();
        prop_assert!(states.iter().all(TritWord::is_stable));
        prop_assert_eq!(states, codes);
        prop_assert_eq!(outcome.output(), Some(&tm.output(&c)));
    }

    #[test]
    fn natural_runs_are_monotone(
        v in prop::collection::vec((0u8..3, any::<bool>(), any::<bool>()), 0..=6),
        which in any::<bool>(),
    ) {
        let lo: TritWord = v.iter().map(|&(t, _, _)| [Trit::Zero, Trit::One, Trit::U][t as usize]).collect();
        let hi: TritWord = v
            .iter()
            .zip(lo.iter())
            .map(|(&(_, fix, b), t)| if t == Trit::U && fix { Trit::from(b) } else { t })
            .collect();
        let nat = if which { corpus::natural_parity() } else { corpus::natural_and() };
        let budget = 2 * lo.len() as u64 + 3;
        let (_, a) = simulate_natural_traced(&nat, &lo, budget).unwrap();
        let (_, b) = simulate_natural_traced(&nat, &hi, budget).unwrap();
        for (s, t) in a.iter().zip(&b) {
            prop_assert!(leq_word(s, t).unwrap(), "{} vs {}", s, t);
        }
    }
}

#[test]
fn fold_machines_pass_the_obliviousness_probe() {
    for tm in [corpus::parity(), corpus::and(), corpus::or(), corpus::majority()] {
        let m = MachineRef::table(tm);
        for n in 1..=6 {
            let report = is_oblivious_probe(&m, n, 1000, 32, n as u64);
            let ObliviousnessReport::ConsistentTrajectory(t) = report else {
                panic!("{report:?}");
            };
            assert_eq!(t.len(), 2 * n + 1);
        }
    }
}

#[test]
fn t_cmux_passes_the_obliviousness_probe() {
    let m = MachineRef::virtual_machine(mcturing_core::universal::TCmuxMachine);
    for levels in 1..=4 {
        let n = (1 << levels) + levels;
        assert!(matches!(
            is_oblivious_probe(&m, n, 10_000, 32, 1),
            ObliviousnessReport::ConsistentTrajectory(_)
        ));
    }
}

#[test]
fn budget_zero_only_halts_machines_that_start_final() {
    let x: TritWord = "01".parse().unwrap();
    assert_eq!(
        simulate(&MachineRef::table(corpus::parity()), &x, 0),
        SimOutcome::BudgetExhausted { steps: 0 }
    );
    assert!(simulate(&MachineRef::table(corpus::immediate_halt()), &x, 0).halted());
}
