mod common;

use common::w;
use mcturing_core::corpus;
use mcturing_core::kleene::res;
use mcturing_core::machine::{utm_bounded, MachineRef, UtmResult};
use mcturing_core::problems::{
    decide_bhp, decide_detect1, decide_detect_poly, decide_pexp_bhp, reduce_bhp_to_pexp,
    reduce_pexp_to_detect1, reduce_tautology_to_detect_poly, Formula,
};

fn outputs_over_resolutions(m: &MachineRef, x: &mcturing_core::TritWord, bound: u64) -> Vec<UtmResult> {
    res(x).unwrap().map(|r| utm_bounded(m, &r, bound)).collect()
}

#[test]
fn bound_rounding() {
    let m = MachineRef::table(corpus::parity());
    assert_eq!(reduce_bhp_to_pexp(&m, &w("1"), 4).k, 5);
    assert_eq!(reduce_bhp_to_pexp(&m, &w("1"), 3).k, 3);
    assert_eq!(reduce_bhp_to_pexp(&m, &w("1"), 64).k, 65);
}

#[test]
fn halting_at_exactly_the_bound_survives_rounding() {
    // parity on "1" halts in exactly 3 steps
    let m = MachineRef::table(corpus::parity());
    for k in 1..=9 {
        let p = reduce_bhp_to_pexp(&m, &w("1"), k);
        assert_eq!(decide_bhp(&m, &w("1"), k), decide_pexp_bhp(&p), "k = {k}");
    }
}

#[test]
fn detect1_mapping_splits_outputs_iff_the_machine_halts() {
    let parity = MachineRef::table(corpus::parity());
    let inst = reduce_pexp_to_detect1(&parity, &w("101"), 9).unwrap();
    let outs = outputs_over_resolutions(&inst.m, &inst.x, inst.k);
    assert_eq!(outs, [UtmResult::Output(w("1")), UtmResult::Output(w("0"))]);
    assert!(decide_detect1(&inst).unwrap());

    let looper = MachineRef::table(corpus::looper());
    let inst = reduce_pexp_to_detect1(&looper, &w("101"), 9).unwrap();
    let outs = outputs_over_resolutions(&inst.m, &inst.x, inst.k);
    assert_eq!(outs, [UtmResult::Output(w("0")), UtmResult::Output(w("0"))]);
    assert!(!decide_detect1(&inst).unwrap());
}

#[test]
fn contradiction_guard_forces_two_outputs() {
    let tau: Formula = "& ! x0 x0".parse().unwrap();
    let inst = reduce_tautology_to_detect_poly(&tau).unwrap();
    let outs = outputs_over_resolutions(&inst.m, &inst.x, inst.budget());
    // resolutions are enumerated with the first u toggling fastest
    let expect: Vec<UtmResult> = ["0", "1"].iter().map(|o| UtmResult::Output(w(o))).collect();
    assert_eq!(outs, expect);
    assert!(!decide_detect_poly(&inst).unwrap());

    let tau: Formula = "& ! x0 & x1 x0".parse().unwrap();
    let inst = reduce_tautology_to_detect_poly(&tau).unwrap();
    let outs = outputs_over_resolutions(&inst.m, &inst.x, inst.budget());
    assert_eq!(outs.iter().filter(|o| **o == UtmResult::Output(w("0"))).count(), 1);
    assert_eq!(outs.len(), 4);
}

#[test]
fn tautologies_agree_everywhere() {
    let tau: Formula = "| | & x0 x1 ! x0 ! x1".parse().unwrap();
    let inst = reduce_tautology_to_detect_poly(&tau).unwrap();
    let outs = outputs_over_resolutions(&inst.m, &inst.x, inst.budget());
    assert!(outs.iter().all(|o| *o == UtmResult::Output(w("1"))));
    assert!(decide_detect_poly(&inst).unwrap());
    let sat: Formula = "x0".parse().unwrap();
    assert!(!decide_detect_poly(&reduce_tautology_to_detect_poly(&sat).unwrap()).unwrap());
}
