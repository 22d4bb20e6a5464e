//! Seeded random instances for the reduction suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus;
use crate::kleene::{Trit, TritWord};
use crate::machine::{Action, BooleanTM, MachineRef, Move, Symbol};

/// A machine with `1..=max_states` working states plus one final state and
/// a uniformly random total transition table. Writes are stable or blank.
pub fn random_machine(rng: &mut impl Rng, max_states: usize) -> BooleanTM {
    let working = rng.gen_range(1..=max_states.max(1));
    let n = working + 1;
    let mut states: Vec<String> = (0..working).map(|q| format!("q{q}")).collect();
    states.push("halt".into());
    let writes = [Symbol::Zero, Symbol::One, Symbol::Blank];
    let mut delta = vec![[None; 4]; n];
    for row in delta.iter_mut().take(working) {
        for slot in row.iter_mut() {
            *slot = Some(Action {
                next: rng.gen_range(0..n),
                write: *writes.choose(rng).expect("nonempty"),
                mv: if rng.gen_bool(0.5) { Move::L } else { Move::R },
            });
        }
    }
    BooleanTM::new(states, delta, 0, vec![working], None, None).expect("random machine is total")
}

/// `count` bounded-halting instances `(m, x, k)` with `|x| ≤ 6` and
/// `1 ≤ k ≤ 64`. Every fourth machine comes from the corpus.
pub fn bhp_instances(seed: u64, count: usize) -> Vec<(MachineRef, TritWord, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fixed = [
        corpus::parity(),
        corpus::and(),
        corpus::majority(),
        corpus::looper(),
        corpus::immediate_halt(),
        corpus::seek_one(),
    ];
    (0..count)
        .map(|i| {
            let tm = if i % 4 == 0 {
                fixed[(i / 4) % fixed.len()].clone()
            } else {
                random_machine(&mut rng, 4)
            };
            let len = rng.gen_range(0..=6);
            let x = (0..len).map(|_| Trit::from(rng.gen_bool(0.5))).collect();
            let k = rng.gen_range(1..=64);
            (MachineRef::table(tm), x, k)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::decide_bhp;

    #[test]
    fn seeded_and_mixed() {
        let a = bhp_instances(7, 40);
        let b = bhp_instances(7, 40);
        assert_eq!(a.len(), 40);
        for ((m1, x1, k1), (m2, x2, k2)) in a.iter().zip(&b) {
            assert_eq!((m1.spec(), x1, k1), (m2.spec(), x2, k2));
        }
        let halting = a.iter().filter(|(m, x, k)| decide_bhp(m, x, *k)).count();
        assert!(halting > 0 && halting < a.len());
    }
}
