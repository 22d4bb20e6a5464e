//! Circuit generators: the plain and metastability-containing multiplexers,
//! and closure synthesis from a Boolean function.

use super::{Circuit, CircuitBuilder, TernaryTable};
use crate::error::{Error, Result};
use crate::kleene::{all_words, Trit, TritWord};

/// Largest select width accepted by [`build_mux`] and [`build_cmux_tree`].
pub const MAX_MUX_LEVELS: usize = 16;

/// Largest arity accepted by [`synthesize_closure`].
const MAX_SYNTH_ARITY: usize = 10;

type Mux2 = fn(&mut CircuitBuilder, usize, usize, usize, usize) -> usize;

// or(and(a, !s), and(b, s))
fn plain_mux2(cb: &mut CircuitBuilder, a: usize, b: usize, s: usize, not_s: usize) -> usize {
    let lo = cb.and(a, not_s);
    let hi = cb.and(b, s);
    cb.or(lo, hi)
}

// or(and(a, !s), or(and(b, s), and(a, b)))
fn cmux2(cb: &mut CircuitBuilder, a: usize, b: usize, s: usize, not_s: usize) -> usize {
    let lo = cb.and(a, not_s);
    let hi = cb.and(b, s);
    let both = cb.and(a, b);
    let rest = cb.or(hi, both);
    cb.or(lo, rest)
}

/// The single-bit CMUX with inputs `(a, b, s)`.
pub fn build_cmux_bit() -> Circuit {
    build_tree(1, cmux2).expect("one level is within limits")
}

/// The `2^levels`-to-1 multiplexer built from plain 2-to-1 muxes.
///
/// Inputs are the data bits `x_0..x_{n-1}` followed by the select bits
/// `s_0..s_{levels-1}`; `s_0` is the most significant select bit.
pub fn build_mux(levels: usize) -> Result<Circuit> {
    build_tree(levels, plain_mux2)
}

/// Same layout as [`build_mux`], composed from single-bit CMUX stages.
pub fn build_cmux_tree(levels: usize) -> Result<Circuit> {
    build_tree(levels, cmux2)
}

fn build_tree(levels: usize, mux2: Mux2) -> Result<Circuit> {
    if levels == 0 || levels > MAX_MUX_LEVELS {
        return Err(Error::SizeLimit(format!(
            "multiplexer levels must be in 1..={MAX_MUX_LEVELS}, got {levels}"
        )));
    }
    let n = 1usize << levels;
    let mut cb = CircuitBuilder::new(n + levels);
    let mut nodes: Vec<usize> = (0..n).map(|k| cb.input(k)).collect();
    let selects: Vec<usize> = (0..levels).map(|i| cb.input(n + i)).collect();
    // Stage i folds the upper half onto the lower half under s_i.
    for (i, &s) in selects.iter().enumerate() {
        let half = 1usize << (levels - i - 1);
        let not_s = cb.not(s);
        for j in 0..half {
            nodes[j] = mux2(&mut cb, nodes[j], nodes[j + half], s, not_s);
        }
    }
    cb.output(nodes[0]);
    cb.finish()
}

fn is_implicant(cube: &TritWord, f: &dyn Fn(&[bool]) -> bool) -> bool {
    let free: Vec<usize> = (0..cube.len()).filter(|&i| cube[i] == Trit::U).collect();
    let mut bits: Vec<bool> = cube.iter().map(|t| t == Trit::One).collect();
    (0..1u64 << free.len()).all(|c| {
        for (b, &pos) in free.iter().enumerate() {
            bits[pos] = (c >> b) & 1 == 1;
        }
        f(&bits)
    })
}

/// Prime implicants of `f`, as cubes where `u` marks an absent literal.
fn prime_implicants(n: usize, f: &dyn Fn(&[bool]) -> bool) -> Vec<TritWord> {
    all_words(n)
        .filter(|cube| is_implicant(cube, f))
        .filter(|cube| {
            (0..n).filter(|&i| cube[i] != Trit::U).all(|i| {
                let mut wider = cube.clone();
                wider.set(i, Trit::U);
                !is_implicant(&wider, f)
            })
        })
        .collect()
}

/// Builds a circuit whose Kleene evaluation is the metastable closure of
/// `f`, one output line per element of `f`'s result.
///
/// Each output is the disjunction of all prime implicants of that output
/// bit. The complete sum covers every subcube on which the bit is constant,
/// which is exactly what the closure needs.
pub fn synthesize_closure(
    n_inputs: usize,
    n_outputs: usize,
    f: impl Fn(&[bool]) -> Vec<bool>,
) -> Result<Circuit> {
    if n_inputs > MAX_SYNTH_ARITY {
        return Err(Error::SizeLimit(format!(
            "closure synthesis supports at most {MAX_SYNTH_ARITY} inputs, got {n_inputs}"
        )));
    }
    let mut cb = CircuitBuilder::new(n_inputs);
    let inputs: Vec<usize> = (0..n_inputs).map(|k| cb.input(k)).collect();
    let mut negated: Vec<Option<usize>> = vec![None; n_inputs];

    for out in 0..n_outputs {
        let bit = |x: &[bool]| f(x)[out];
        let mut terms = Vec::new();
        for cube in prime_implicants(n_inputs, &bit) {
            let mut term: Option<usize> = None;
            for (i, t) in cube.iter().enumerate() {
                let lit = match t {
                    Trit::U => continue,
                    Trit::One => inputs[i],
                    Trit::Zero => *negated[i].get_or_insert_with(|| cb.not(inputs[i])),
                };
                term = Some(match term {
                    None => lit,
                    Some(acc) => cb.and(acc, lit),
                });
            }
            terms.push(term.unwrap_or_else(|| cb.constant(true)));
        }
        let gate = terms
            .into_iter()
            .reduce(|acc, t| cb.or(acc, t))
            .unwrap_or_else(|| cb.constant(false));
        cb.output(gate);
    }
    cb.finish()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableRealization {
    Circuit(Circuit),
    /// A stable input the table maps to `u`.
    NotBooleanPreserving { input: TritWord },
    /// The table differs from the closure of its Boolean restriction.
    NotAClosure {
        input: TritWord,
        table: Trit,
        closure: Trit,
    },
}

/// Builds a circuit whose Kleene evaluation is `t`, provided `t` is the
/// closure of its own Boolean restriction.
pub fn realize_table(t: &TernaryTable) -> Result<TableRealization> {
    let n = t.arity();
    let mut restriction = Vec::with_capacity(1 << n);
    for i in 0..1u64 << n {
        let x = TritWord::from_index(i, n);
        match t.get(&x)?.to_bool() {
            Some(b) => restriction.push(b),
            None => return Ok(TableRealization::NotBooleanPreserving { input: x }),
        }
    }
    let c = synthesize_closure(n, 1, |bits| {
        let i = bits.iter().fold(0, |acc, &b| 2 * acc + usize::from(b));
        vec![restriction[i]]
    })?;
    for (x, want) in t.iter() {
        let got = c.eval_kleene(&x)?[0];
        if got != want {
            return Ok(TableRealization::NotAClosure {
                input: x,
                table: want,
                closure: got,
            });
        }
    }
    Ok(TableRealization::Circuit(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{is_hazard_free, HazardCheck};

    fn w(s: &str) -> TritWord {
        s.parse().unwrap()
    }

    #[test]
    fn cmux_bit_examples() {
        let c = build_cmux_bit();
        assert_eq!(c.eval_kleene(&w("010")).unwrap(), w("0"));
        assert_eq!(c.eval_kleene(&w("11u")).unwrap(), w("1"));
        assert_eq!(c.eval_kleene(&w("01u")).unwrap(), w("u"));
    }

    #[test]
    fn plain_mux_selects_b_when_s_is_one() {
        let c = build_mux(1).unwrap();
        assert_eq!(c.eval_boolean(&w("011")).unwrap(), w("1"));
        assert_eq!(c.eval_kleene(&w("11u")).unwrap(), w("u"));
    }

    #[test]
    fn cmux_tree_examples() {
        assert_eq!(build_cmux_tree(1).unwrap(), build_cmux_bit());
        let c = build_cmux_tree(2).unwrap();
        assert_eq!(c.eval_kleene(&w("011010")).unwrap(), w("1"));
        assert_eq!(c.eval_kleene(&w("01101u")).unwrap(), w("u"));
    }

    #[test]
    fn mux_selects_index_msb_first() {
        let c = build_mux(3).unwrap();
        let data = w("00010000");
        // index 3 = 011
        assert_eq!(c.eval_boolean(&data.concat(&w("011"))).unwrap(), w("1"));
        assert_eq!(c.eval_boolean(&data.concat(&w("110"))).unwrap(), w("0"));
    }

    #[test]
    fn level_limits() {
        assert!(build_mux(0).is_err());
        assert!(build_cmux_tree(MAX_MUX_LEVELS + 1).is_err());
    }

    #[test]
    fn synthesized_xor_and_constants() {
        let xor = synthesize_closure(2, 1, |b| vec![b[0] ^ b[1]]).unwrap();
        assert!(is_hazard_free(&xor, HazardCheck::Exhaustive).unwrap().is_hazard_free());
        let k = synthesize_closure(2, 2, |_| vec![true, false]).unwrap();
        assert_eq!(k.eval_kleene(&w("uu")).unwrap(), w("10"));
    }

    #[test]
    fn synthesized_mux_is_the_cmux() {
        let mux = synthesize_closure(3, 1, |b| vec![if b[2] { b[1] } else { b[0] }]).unwrap();
        let cmux = build_cmux_bit();
        for x in all_words(3) {
            assert_eq!(mux.eval_kleene(&x).unwrap(), cmux.eval_kleene(&x).unwrap(), "{x}");
        }
    }
}
