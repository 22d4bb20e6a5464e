//! Line-oriented netlist text format.
//!
//! ```text
//! # 2-to-1 multiplexer
//! g0 = INPUT 0
//! g1 = INPUT 1
//! g2 = INPUT 2
//! g3 = NOT g2
//! g4 = AND g0 g3
//! g5 = AND g1 g2
//! g6 = OR g4 g5
//! OUTPUTS g6
//! ```
//!
//! Gate ids must be strictly increasing and may only reference earlier ids.
//! The input arity is one more than the largest `INPUT` index.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Circuit, Gate};
use crate::error::{Error, Result};

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Netlist {
        line,
        message: message.into(),
    }
}

fn parse_id(tok: &str, line: usize) -> Result<usize> {
    tok.strip_prefix('g')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| err(line, format!("expected a gate id like g3, found {tok:?}")))
}

pub fn parse_netlist(text: &str) -> Result<Circuit> {
    let mut gates = Vec::new();
    // netlist id -> position
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut last_id: Option<usize> = None;
    let mut outputs: Option<Vec<usize>> = None;
    let mut n_inputs = 0;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if outputs.is_some() {
            return Err(err(line, "content after OUTPUTS"));
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks[0] == "OUTPUTS" {
            let ids = toks[1..]
                .iter()
                .map(|t| {
                    let id = parse_id(t, line)?;
                    index
                        .get(&id)
                        .copied()
                        .ok_or_else(|| err(line, format!("output g{id} is not defined")))
                })
                .collect::<Result<Vec<_>>>()?;
            if ids.is_empty() {
                return Err(err(line, "OUTPUTS needs at least one gate"));
            }
            outputs = Some(ids);
            continue;
        }
        if toks.len() < 3 || toks[1] != "=" {
            return Err(err(line, "expected `g<id> = <KIND> ...`"));
        }
        let id = parse_id(toks[0], line)?;
        if last_id.is_some_and(|prev| id <= prev) {
            return Err(err(line, format!("gate id g{id} is not increasing")));
        }
        let src = |tok: &str| -> Result<usize> {
            let s = parse_id(tok, line)?;
            index
                .get(&s)
                .copied()
                .ok_or_else(|| err(line, format!("g{s} is referenced before it is defined")))
        };
        let args = &toks[3..];
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(err(line, format!("{} takes {n} operand(s)", toks[2])))
            }
        };
        let gate = match toks[2] {
            "INPUT" => {
                arity(1)?;
                let k: usize = args[0]
                    .parse()
                    .map_err(|_| err(line, format!("bad input index {:?}", args[0])))?;
                n_inputs = n_inputs.max(k + 1);
                Gate::Input(k)
            }
            "CONST" => {
                arity(1)?;
                match args[0] {
                    "0" => Gate::Const(false),
                    "1" => Gate::Const(true),
                    other => return Err(err(line, format!("CONST must be 0 or 1, found {other:?}"))),
                }
            }
            "NOT" => {
                arity(1)?;
                Gate::Not(src(args[0])?)
            }
            "AND" => {
                arity(2)?;
                Gate::And(src(args[0])?, src(args[1])?)
            }
            "OR" => {
                arity(2)?;
                Gate::Or(src(args[0])?, src(args[1])?)
            }
            other => return Err(err(line, format!("unknown gate kind {other:?}"))),
        };
        index.insert(id, gates.len());
        gates.push(gate);
        last_id = Some(id);
    }

    let outputs = outputs.ok_or_else(|| err(text.lines().count().max(1), "missing OUTPUTS line"))?;
    Circuit::new(n_inputs, gates, outputs)
}

/// Serializes a circuit with gate ids equal to gate positions.
pub fn write_netlist(c: &Circuit) -> String {
    let mut out = String::new();
    for (id, g) in c.gates().iter().enumerate() {
        let _ = match *g {
            Gate::Input(k) => writeln!(out, "g{id} = INPUT {k}"),
            Gate::Const(b) => writeln!(out, "g{id} = CONST {}", u8::from(b)),
            Gate::Not(a) => writeln!(out, "g{id} = NOT g{a}"),
            Gate::And(a, b) => writeln!(out, "g{id} = AND g{a} g{b}"),
            Gate::Or(a, b) => writeln!(out, "g{id} = OR g{a} g{b}"),
        };
    }
    let outs: Vec<String> = c.outputs().iter().map(|o| format!("g{o}")).collect();
    let _ = writeln!(out, "OUTPUTS {}", outs.join(" "));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::build_cmux_tree;

    const MUX: &str = "\
# plain multiplexer
g0 = INPUT 0
g1 = INPUT 1
g2 = INPUT 2   # select
g3 = NOT g2
g4 = AND g0 g3
g5 = AND g1 g2
g6 = OR g4 g5
OUTPUTS g6
";

    #[test]
    fn parses_mux() {
        let c = parse_netlist(MUX).unwrap();
        assert_eq!(c.n_inputs(), 3);
        assert_eq!(c.eval_boolean(&"011".parse().unwrap()).unwrap().to_string(), "1");
        assert_eq!(c.eval_kleene(&"11u".parse().unwrap()).unwrap().to_string(), "u");
    }

    #[test]
    fn sparse_ids_are_accepted() {
        let c = parse_netlist("g2 = INPUT 0\ng7 = NOT g2\ng9 = CONST 1\ng10 = AND g7 g9\nOUTPUTS g10 g2\n")
            .unwrap();
        assert_eq!(c.eval_boolean(&"0".parse().unwrap()).unwrap().to_string(), "10");
    }

    #[test]
    fn round_trip() {
        let c = build_cmux_tree(2).unwrap();
        assert_eq!(parse_netlist(&write_netlist(&c)).unwrap(), c);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("g0 = INPUT 0\ng1 = AND g0 g5\nOUTPUTS g1", 2),
            ("g0 = INPUT 0\ng0 = NOT g0\nOUTPUTS g0", 2),
            ("g0 = XOR g1 g2\nOUTPUTS g0", 1),
            ("g0 = CONST 2\nOUTPUTS g0", 1),
            ("g0 = INPUT 0\nOUTPUTS g4", 2),
            ("g0 = INPUT 0\nOUTPUTS g0\ng1 = NOT g0", 3),
            ("g0 INPUT 0", 1),
        ];
        for (text, expected) in cases {
            match parse_netlist(text) {
                Err(Error::Netlist { line, .. }) => assert_eq!(line, expected, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(parse_netlist("g0 = INPUT 0\n"), Err(Error::Netlist { .. })));
    }
}
