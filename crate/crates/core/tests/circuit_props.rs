mod common;

use common::{brute_closure, index_of, ternary_words, w};
use mcturing_core::circuit::{
    is_natural, parse_netlist, realize_table, write_netlist, Circuit, Gate, TableRealization,
    TernaryTable,
};
use mcturing_core::kleene::{and_u, leq_stab, leq_word, not_u, or_u, Trit};
use proptest::prelude::*;

/// Random well-formed circuit: inputs first, then gates over earlier ids.
fn circuit() -> impl Strategy<Value = Circuit> {
    (1usize..=4, prop::collection::vec((0u8..4, any::<u16>(), any::<u16>()), 1..12), 1usize..=2)
        .prop_map(|(n, ops, outs)| {
            let mut gates: Vec<Gate> = (0..n).map(Gate::Input).collect();
            for (op, a, b) in ops {
                let len = gates.len();
                let (a, b) = (a as usize % len, b as usize % len);
                gates.push(match op {
                    0 => Gate::Not(a),
                    1 => Gate::And(a, b),
                    2 => Gate::Or(a, b),
                    _ => Gate::Const(a % 2 == 0),
                });
            }
            let len = gates.len();
            let outputs = (0..outs).map(|k| len - 1 - k.min(len - 1)).collect();
            Circuit::new(n, gates, outputs).unwrap()
        })
}

proptest! {
    #[test]
    fn kleene_evaluation_is_monotone(c in circuit()) {
        let words = ternary_words(c.n_inputs());
        let outs: Vec<_> = words.iter().map(|x| c.eval_kleene(x).unwrap()).collect();
        for (x, fx) in words.iter().zip(&outs) {
            for i in 0..x.len() {
                if x[i] != Trit::U {
                    continue;
                }
                for b in [Trit::Zero, Trit::One] {
                    let mut y = x.clone();
                    y.set(i, b);
                    let fy = c.eval_kleene(&y).unwrap();
                    prop_assert!(leq_word(fx, &fy).unwrap(), "{} -> {}, {} -> {}", x, fx, y, fy);
                }
            }
        }
    }

    #[test]
    fn kleene_evaluation_is_below_the_closure(c in circuit()) {
        for x in ternary_words(c.n_inputs()) {
            let k = c.eval_kleene(&x).unwrap();
            for (line, kt) in k.iter().enumerate() {
                let cl = brute_closure(|b| Trit::from(c.eval_bools(b)[line]), &x);
                prop_assert!(leq_stab(kt, cl), "{} line {}: {} vs {}", x, line, kt, cl);
            }
        }
    }

    #[test]
    fn netlists_round_trip(c in circuit()) {
        prop_assert_eq!(parse_netlist(&write_netlist(&c)).unwrap(), c);
    }

    #[test]
    fn closures_are_natural(
        (n, table) in (0usize..=3).prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), 1 << n)))
    ) {
        let t = TernaryTable::closure_of(n, |b| table[index_of(b)]).unwrap();
        prop_assert!(is_natural(&t).is_natural());
        match realize_table(&t).unwrap() {
            TableRealization::Circuit(c) => {
                prop_assert_eq!(TernaryTable::from_circuit(&c, 0).unwrap(), t);
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }
}

#[test]
fn gate_tables_realize_and_round_trip() {
    let tables = [
        TernaryTable::from_fn(2, |x| and_u(x[0], x[1])).unwrap(),
        TernaryTable::from_fn(2, |x| or_u(x[0], x[1])).unwrap(),
        TernaryTable::from_fn(1, |x| not_u(x[0])).unwrap(),
    ];
    for t in tables {
        assert!(is_natural(&t).is_natural());
        let TableRealization::Circuit(c) = realize_table(&t).unwrap() else {
            panic!("{t}");
        };
        let back = TernaryTable::from_circuit(&c, 0).unwrap();
        assert_eq!(back, t);
        assert_eq!(TernaryTable::parse(&t.to_string()).unwrap(), t);
    }
}

#[test]
fn natural_tables_that_are_not_closures_get_a_witness() {
    // x ∨ ¬x under Kleene evaluation: natural, but its closure is constant 1
    let t = TernaryTable::from_fn(1, |x| or_u(x[0], not_u(x[0]))).unwrap();
    assert!(is_natural(&t).is_natural());
    assert_eq!(
        realize_table(&t).unwrap(),
        TableRealization::NotAClosure { input: w("u"), table: Trit::U, closure: Trit::One }
    );
    let d = TernaryTable::from_fn(1, |_| Trit::U).unwrap();
    assert_eq!(
        realize_table(&d).unwrap(),
        TableRealization::NotBooleanPreserving { input: w("0") }
    );
}
