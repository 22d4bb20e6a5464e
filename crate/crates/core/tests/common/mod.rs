//! Reference implementations written independently of the library's
//! resolution iterator and closure routine.
#![allow(dead_code)]

use mcturing_core::{Trit, TritWord};

pub fn w(s: &str) -> TritWord {
    s.parse().unwrap()
}

/// Trit-level merge: equal values survive, anything else is `u`.
pub fn merge(a: Trit, b: Trit) -> Trit {
    if a == b {
        a
    } else {
        Trit::U
    }
}

/// Whether stable `bits` agrees with `x` on every stable position.
pub fn is_resolution(x: &TritWord, bits: &[bool]) -> bool {
    x.iter()
        .zip(bits)
        .all(|(t, &b)| t == Trit::U || t == Trit::from(b))
}

/// Closure of a single-output Boolean function by scanning every stable
/// word of the right length and keeping those that resolve `x`.
pub fn brute_closure(f: impl Fn(&[bool]) -> Trit, x: &TritWord) -> Trit {
    let n = x.len();
    let mut acc: Option<Trit> = None;
    for i in 0..1u64 << n {
        let bits: Vec<bool> = (0..n).map(|k| (i >> (n - 1 - k)) & 1 == 1).collect();
        if is_resolution(x, &bits) {
            let v = f(&bits);
            acc = Some(acc.map_or(v, |a| merge(a, v)));
        }
    }
    acc.expect("every word has a resolution")
}

/// Every word over `{0, 1, u}` of length `n`.
pub fn ternary_words(n: usize) -> Vec<TritWord> {
    let mut out = vec![TritWord::empty()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                [Trit::Zero, Trit::One, Trit::U].map(|t| {
                    let mut q = p.clone();
                    q.push(t);
                    q
                })
            })
            .collect();
    }
    out
}

/// `a ⪯ b` in the stability order.
pub fn below(a: Trit, b: Trit) -> bool {
    a == Trit::U || a == b
}

pub fn word_below(a: &TritWord, b: &TritWord) -> bool {
    a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| below(x, y))
}

/// Big-endian value of a stable bit slice.
pub fn index_of(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| 2 * acc + usize::from(b))
}
