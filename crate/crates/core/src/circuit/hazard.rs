use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Circuit;
use crate::error::{Error, Result};
use crate::kleene::{all_words, closure_oracle, Trit, TritWord};

/// Exhaustive checking is used while `3^n * 2^n` stays within this many
/// oracle evaluations.
pub const EXHAUSTIVE_BUDGET: u128 = 10_000_000;

/// Default sample count when the automatic mode falls back to sampling.
const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HazardCheck {
    /// Exhaustive if within [`EXHAUSTIVE_BUDGET`], sampled otherwise.
    Auto { samples: usize, seed: u64 },
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

impl Default for HazardCheck {
    fn default() -> Self {
        HazardCheck::Auto {
            samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HazardReport {
    HazardFree { checked: usize, exhaustive: bool },
    /// An input where the Kleene evaluation is less stable than the closure.
    Hazard {
        input: TritWord,
        kleene: TritWord,
        closure: TritWord,
    },
}

impl HazardReport {
    pub fn is_hazard_free(&self) -> bool {
        matches!(self, HazardReport::HazardFree { .. })
    }
}

fn exhaustive_cost(n: usize) -> u128 {
    3u128.saturating_pow(n as u32).saturating_mul(2u128.saturating_pow(n as u32))
}

/// Compares Kleene evaluation against the brute-force closure of the
/// circuit's Boolean function.
pub fn is_hazard_free(c: &Circuit, mode: HazardCheck) -> Result<HazardReport> {
    let n = c.n_inputs();
    let cost = exhaustive_cost(n);
    let (exhaustive, samples, seed) = match mode {
        HazardCheck::Exhaustive => {
            if cost > EXHAUSTIVE_BUDGET {
                return Err(Error::BudgetExceeded {
                    needed: cost,
                    budget: EXHAUSTIVE_BUDGET,
                });
            }
            (true, 0, 0)
        }
        HazardCheck::Auto { samples, seed } => (cost <= EXHAUSTIVE_BUDGET, samples, seed),
        HazardCheck::Sampled { samples, seed } => (false, samples, seed),
    };

    let boolean = |y: &TritWord| {
        let bits: Vec<bool> = y.iter().map(|t| t == Trit::One).collect();
        TritWord::from_bools(&c.eval_bools(&bits))
    };
    let check = |x: TritWord| -> Result<Option<HazardReport>> {
        let kleene = c.eval_kleene(&x)?;
        let closure = closure_oracle(boolean, &x)?;
        if kleene == closure {
            Ok(None)
        } else {
            Ok(Some(HazardReport::Hazard {
                input: x,
                kleene,
                closure,
            }))
        }
    };

    let mut checked = 0;
    if exhaustive {
        for x in all_words(n) {
            if let Some(h) = check(x)? {
                return Ok(h);
            }
            checked += 1;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x: TritWord = (0..n).map(|_| Trit::ALL[rng.gen_range(0..3)]).collect();
            if let Some(h) = check(x)? {
                return Ok(h);
            }
            checked += 1;
        }
    }
    Ok(HazardReport::HazardFree {
        checked,
        exhaustive,
    })
}
