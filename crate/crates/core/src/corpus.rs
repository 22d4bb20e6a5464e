//! Bundled fixtures and the generators behind them.
//!
//! Most corpus machines are *fold machines*: they stream the input once,
//! feeding each bit to a small automaton and erasing as they go, then walk
//! back to cell 0 and write the automaton's verdict there. Cell 0 is
//! overwritten with a `0` marker on the way out so the return trip can find
//! it. On an input of length `n ≥ 1` a fold machine halts after exactly
//! `2n + 1` steps, and its head trajectory depends only on `n`.

use crate::circuit::{parse_netlist, synthesize_closure, Circuit};
use crate::kleene::TritWord;
use crate::machine::{parse_tm, Action, BooleanTM, HeadSchedule, Move, NaturalTM, Symbol};

/// A bundled fixture file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub kind: CorpusKind,
    pub contents: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusKind {
    Machine,
    Circuit,
    Table,
    Formulas,
}

macro_rules! entry {
    ($kind:ident, $file:literal) => {
        CorpusEntry {
            name: $file,
            kind: CorpusKind::$kind,
            contents: include_str!(concat!("../corpus/", $file)),
        }
    };
}

const ENTRIES: &[CorpusEntry] = &[
    entry!(Machine, "parity.tm"),
    entry!(Machine, "and.tm"),
    entry!(Machine, "or.tm"),
    entry!(Machine, "majority.tm"),
    entry!(Machine, "accept_all.tm"),
    entry!(Machine, "reject_all.tm"),
    entry!(Machine, "looper.tm"),
    entry!(Machine, "immediate_halt.tm"),
    entry!(Machine, "seek_one.tm"),
    entry!(Circuit, "natural_parity.ckt"),
    entry!(Circuit, "natural_and.ckt"),
    entry!(Circuit, "mux.ckt"),
    entry!(Circuit, "cmux_bit.ckt"),
    entry!(Circuit, "cmux_tree_2.ckt"),
    entry!(Circuit, "cmux_tree_3.ckt"),
    entry!(Table, "and.tbl"),
    entry!(Table, "d.tbl"),
    entry!(Table, "r.tbl"),
    entry!(Formulas, "formulas.txt"),
];

pub fn corpus_list() -> &'static [CorpusEntry] {
    ENTRIES
}

pub fn corpus_file(name: &str) -> Option<&'static CorpusEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

fn bundled_machine(name: &str) -> BooleanTM {
    parse_tm(corpus_file(name).expect("bundled").contents).expect("bundled machine parses")
}

fn bundled_circuit(name: &str) -> Circuit {
    parse_netlist(corpus_file(name).expect("bundled").contents).expect("bundled netlist parses")
}

pub fn parity() -> BooleanTM {
    bundled_machine("parity.tm")
}

pub fn and() -> BooleanTM {
    bundled_machine("and.tm")
}

pub fn or() -> BooleanTM {
    bundled_machine("or.tm")
}

/// Majority (`ones > zeros`), exact for inputs of length up to
/// [`MAJORITY_MAX_LEN`].
pub fn majority() -> BooleanTM {
    bundled_machine("majority.tm")
}

pub fn accept_all() -> BooleanTM {
    bundled_machine("accept_all.tm")
}

pub fn reject_all() -> BooleanTM {
    bundled_machine("reject_all.tm")
}

pub fn looper() -> BooleanTM {
    bundled_machine("looper.tm")
}

/// Start state is final: halts at step 0 and outputs its input.
pub fn immediate_halt() -> BooleanTM {
    bundled_machine("immediate_halt.tm")
}

/// Runs right until the first `1` (or blank); not oblivious.
pub fn seek_one() -> BooleanTM {
    bundled_machine("seek_one.tm")
}

pub fn natural_parity() -> NaturalTM {
    natural_from(bundled_circuit("natural_parity.ckt"))
}

pub fn natural_and() -> NaturalTM {
    natural_from(bundled_circuit("natural_and.ckt"))
}

fn natural_from(c: Circuit) -> NaturalTM {
    NaturalTM::new(
        NATURAL_STATE_WIDTH,
        c,
        HeadSchedule::ScanAndReturn,
        "000".parse().expect("literal"),
        vec!["110".parse().expect("literal"), "111".parse().expect("literal")],
    )
    .expect("bundled natural machine is valid")
}

// ----- generators -----------------------------------------------------------

pub const MAJORITY_MAX_LEN: usize = 8;

/// Builds a fold machine from a finite automaton over input bits.
///
/// `names[j]` names automaton state `j`. Input `u` is read as `0`.
pub fn fold_machine(
    names: &[&str],
    init: usize,
    update: impl Fn(usize, bool) -> usize,
    verdict: impl Fn(usize) -> bool,
) -> BooleanTM {
    let k = names.len();
    let mut states = vec!["start".to_string()];
    states.extend(names.iter().map(|s| s.to_string()));
    states.extend(["back0", "back1", "halt0", "halt1"].map(String::from));
    let scan = |j: usize| 1 + j;
    let back = |b: bool| 1 + k + usize::from(b);
    let halt = |b: bool| 3 + k + usize::from(b);
    let bit = |b: bool| if b { Symbol::One } else { Symbol::Zero };
    let act = |next, write, mv| Some(Action { next, write, mv });

    let mut delta = vec![[None; 4]; states.len()];
    // Symbol order: 0, 1, u, _
    let first = |b: bool| act(scan(update(init, b)), Symbol::Zero, Move::R);
    delta[0] = [
        first(false),
        first(true),
        first(false),
        act(halt(verdict(init)), bit(verdict(init)), Move::R),
    ];
    for j in 0..k {
        let next = |b: bool| act(scan(update(j, b)), Symbol::Blank, Move::R);
        delta[scan(j)] = [
            next(false),
            next(true),
            next(false),
            act(back(verdict(j)), Symbol::Blank, Move::L),
        ];
    }
    for v in [false, true] {
        let done = act(halt(v), bit(v), Move::R);
        delta[back(v)] = [done, done, done, act(back(v), Symbol::Blank, Move::L)];
    }
    BooleanTM::new(states, delta, 0, vec![halt(false), halt(true)], None, None)
        .expect("fold machine is total")
}

pub fn parity_machine() -> BooleanTM {
    fold_machine(&["even", "odd"], 0, |j, b| j ^ usize::from(b), |j| j == 1)
}

pub fn and_machine() -> BooleanTM {
    fold_machine(&["seen0", "all1"], 1, |j, b| if b { j } else { 0 }, |j| j == 1)
}

pub fn or_machine() -> BooleanTM {
    fold_machine(&["none", "seen1"], 0, |j, b| if b { 1 } else { j }, |j| j == 1)
}

pub fn constant_machine(value: bool) -> BooleanTM {
    fold_machine(&["any"], 0, |_, _| 0, move |_| value)
}

pub fn majority_machine() -> BooleanTM {
    let k = MAJORITY_MAX_LEN as isize;
    let names: Vec<String> = (-k..=k)
        .map(|d| match d {
            0 => "d0".to_string(),
            d if d > 0 => format!("dp{d}"),
            d => format!("dm{}", -d),
        })
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let at = |d: isize| (d + k) as usize;
    fold_machine(
        &refs,
        at(0),
        |j, b| {
            let d = j as isize - k + if b { 1 } else { -1 };
            at(d.clamp(-k, k))
        },
        |j| j as isize > k,
    )
}

/// State width of the natural fold machines: two phase bits and one
/// accumulator bit.
pub const NATURAL_STATE_WIDTH: usize = 3;

/// Transition circuit of a natural fold machine with a one-bit accumulator.
///
/// State layout `[p1, p0, acc]` with phases start `00`, scan `01`, back
/// `10`, halt `11`; the halting states are `110` and `111`. The code `001`
/// is unused and behaves like start. The circuit is the metastable closure
/// of the Boolean transition function, so the phase bits stay stable under
/// any `u` in the data.
pub fn natural_fold_circuit(init: bool, update: fn(bool, bool) -> bool) -> Circuit {
    synthesize_closure(5, 5, move |x| {
        let (p1, p0, acc, blank, value) = (x[0], x[1], x[2], x[3], x[4]);
        // (phase, acc, write_blank, write_value)
        let (phase, acc, wb, wv) = match (p1, p0) {
            (false, false) if blank => ((true, true), init, false, init),
            (false, false) => ((false, true), update(init, value), false, false),
            (false, true) if blank => ((true, false), acc, true, false),
            (false, true) => ((false, true), update(acc, value), true, false),
            (true, false) if blank => ((true, false), acc, true, false),
            (true, false) => ((true, true), acc, false, acc),
            (true, true) => ((true, true), acc, blank, value && !blank),
        };
        vec![phase.0, phase.1, acc, wb, wv]
    })
    .expect("five inputs are within the synthesis limit")
}

/// State code of the natural machine matching a state of a two-state fold
/// machine (such as [`parity`] or [`and`]), whose automaton state index is
/// the accumulator bit.
pub fn natural_state_code(tm: &BooleanTM, q: usize) -> TritWord {
    let name = tm.state_name(q);
    let bits = match name {
        "start" => [false, false, false],
        "back0" => [true, false, false],
        "back1" => [true, false, true],
        "halt0" => [true, true, false],
        "halt1" => [true, true, true],
        _ => [false, true, q == 2],
    };
    TritWord::from_bools(&bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_cmux_bit, build_cmux_tree, build_mux, write_netlist, TernaryTable};
    use crate::kleene::{all_stable_words, and_u, Trit};

    fn sample_word(s: &str) -> TritWord {
        s.parse().unwrap()
    }
    use crate::machine::{simulate, simulate_natural_traced, MachineRef, SimOutcome};

    fn regenerate() -> Vec<(&'static str, String)> {
        let d = TernaryTable::from_fn(1, |x| Trit::from(x[0] == Trit::U)).unwrap();
        let r = TernaryTable::from_fn(1, |x| if x[0] == Trit::U { Trit::One } else { x[0] }).unwrap();
        let and = TernaryTable::from_fn(2, |x| and_u(x[0], x[1])).unwrap();
        vec![
            ("parity.tm", parity_machine().to_dsl()),
            ("and.tm", and_machine().to_dsl()),
            ("or.tm", or_machine().to_dsl()),
            ("majority.tm", majority_machine().to_dsl()),
            ("accept_all.tm", constant_machine(true).to_dsl()),
            ("reject_all.tm", constant_machine(false).to_dsl()),
            ("natural_parity.ckt", write_netlist(&natural_fold_circuit(false, |a, b| a ^ b))),
            ("natural_and.ckt", write_netlist(&natural_fold_circuit(true, |a, b| a && b))),
            ("mux.ckt", write_netlist(&build_mux(1).unwrap())),
            ("cmux_bit.ckt", write_netlist(&build_cmux_bit())),
            ("cmux_tree_2.ckt", write_netlist(&build_cmux_tree(2).unwrap())),
            ("cmux_tree_3.ckt", write_netlist(&build_cmux_tree(3).unwrap())),
            ("and.tbl", and.to_string()),
            ("d.tbl", d.to_string()),
            ("r.tbl", r.to_string()),
        ]
    }

    /// Rewrites generated fixtures: `MCTURING_REGENERATE=1 cargo test -p mcturing-core regenerate`.
    #[test]
    fn regenerate_corpus_when_requested() {
        if std::env::var_os("MCTURING_REGENERATE").is_none() {
            return;
        }
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
        for (name, text) in regenerate() {
            std::fs::write(format!("{dir}/{name}"), text).unwrap();
        }
    }

    #[test]
    fn bundled_fixtures_match_generators() {
        for (name, text) in regenerate() {
            assert_eq!(corpus_file(name).unwrap().contents, text, "{name} is stale");
        }
    }

    #[test]
    fn listing() {
        let names: Vec<&str> = corpus_list().iter().map(|e| e.name).collect();
        assert!(names.contains(&"parity.tm"));
        assert!(names.contains(&"cmux_bit.ckt"));
        assert!(!names.is_empty());
    }

    fn run(tm: BooleanTM, x: &str) -> SimOutcome {
        simulate(&MachineRef::table(tm), &sample_word(x), 10_000)
    }

    #[test]
    fn fold_machines_compute_their_functions() {
        for n in 0..=6 {
            for x in all_stable_words(n) {
                let ones = x.iter().filter(|t| *t == Trit::One).count();
                let s = x.to_string();
                let expect = |b: bool| SimOutcome::Halted {
                    output: TritWord::new(vec![Trit::from(b)]),
                    steps: 2 * n as u64 + 1,
                };
                let steps_for_empty = |b: bool| SimOutcome::Halted {
                    output: TritWord::new(vec![Trit::from(b)]),
                    steps: 1,
                };
                let e = |b| if n == 0 { steps_for_empty(b) } else { expect(b) };
                assert_eq!(run(parity(), &s), e(ones % 2 == 1), "parity {s}");
                assert_eq!(run(and(), &s), e(ones == n), "and {s}");
                assert_eq!(run(or(), &s), e(ones > 0), "or {s}");
                assert_eq!(run(majority(), &s), e(2 * ones > n), "majority {s}");
                assert_eq!(run(accept_all(), &s), e(true), "accept_all {s}");
                assert_eq!(run(reject_all(), &s), e(false), "reject_all {s}");
            }
        }
    }

    #[test]
    fn natural_twin_traces_agree_on_stable_inputs() {
        let tm = parity();
        let nat = natural_parity();
        for n in 0..=5 {
            for x in all_stable_words(n) {
                let mut c = tm.initial(&x);
                let mut codes = vec![natural_state_code(&tm, c.state)];
                while !tm.is_halted(&c) {
                    tm.step(&mut c).unwrap();
                    codes.push(natural_state_code(&tm, c.state));
                }
                let (outcome, states) = simulate_natural_traced(&nat, &x, 1000).unwrap();
                assert_eq!(states, codes, "{x}");
                assert_eq!(outcome.output(), Some(&tm.output(&c)), "{x}");
            }
        }
    }
}
