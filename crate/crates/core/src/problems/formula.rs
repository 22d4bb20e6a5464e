//! Boolean formulas (fan-out 1 circuits) in prefix notation.
//!
//! ```text
//! | x0 ! x0          # excluded middle
//! & x0 x1
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kleene::{and_u, not_u, or_u, Trit, TritWord, DEFAULT_CAPACITY};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Var(usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
}

impl Node {
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Node) -> Node {
        Node::Not(Box::new(a))
    }

    pub fn and(a: Node, b: Node) -> Node {
        Node::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Node, b: Node) -> Node {
        Node::Or(Box::new(a), Box::new(b))
    }

    /// Number of nodes, leaves included.
    pub fn size(&self) -> usize {
        match self {
            Node::Var(_) => 1,
            Node::Not(a) => 1 + a.size(),
            Node::And(a, b) | Node::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn max_var(&self) -> usize {
        match self {
            Node::Var(i) => *i,
            Node::Not(a) => a.max_var(),
            Node::And(a, b) | Node::Or(a, b) => a.max_var().max(b.max_var()),
        }
    }

    fn eval(&self, y: &[Trit]) -> Trit {
        match self {
            Node::Var(i) => y[*i],
            Node::Not(a) => not_u(a.eval(y)),
            Node::And(a, b) => and_u(a.eval(y), b.eval(y)),
            Node::Or(a, b) => or_u(a.eval(y), b.eval(y)),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Var(i) => write!(f, "x{i}"),
            Node::Not(a) => write!(f, "! {a}"),
            Node::And(a, b) => write!(f, "& {a} {b}"),
            Node::Or(a, b) => write!(f, "| {a} {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    root: Node,
    n_vars: usize,
}

impl Formula {
    pub fn new(root: Node, n_vars: usize) -> Result<Self> {
        if root.max_var() >= n_vars {
            return Err(Error::Formula(format!(
                "variable x{} out of range for {n_vars} variables",
                root.max_var()
            )));
        }
        Ok(Formula { root, n_vars })
    }

    /// Uses the smallest `n_vars` covering every variable that occurs.
    pub fn from_root(root: Node) -> Self {
        let n_vars = root.max_var() + 1;
        Formula { root, n_vars }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn size(&self) -> usize {
        self.root.size()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

fn tokenize(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '&' | '|' | '!' => out.push(c.to_string()),
            'x' => {
                let mut tok = String::from("x");
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    tok.push(*d);
                    chars.next();
                }
                if tok.len() == 1 {
                    return Err(Error::Formula("`x` without an index".into()));
                }
                out.push(tok);
            }
            other => return Err(Error::Formula(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

fn parse_node(tokens: &mut std::slice::Iter<'_, String>) -> Result<Node> {
    let tok = tokens
        .next()
        .ok_or_else(|| Error::Formula("unexpected end of formula".into()))?;
    Ok(match tok.as_str() {
        "!" => Node::not(parse_node(tokens)?),
        "&" => Node::and(parse_node(tokens)?, parse_node(tokens)?),
        "|" => Node::or(parse_node(tokens)?, parse_node(tokens)?),
        var => Node::Var(
            var[1..]
                .parse()
                .map_err(|_| Error::Formula(format!("bad variable {var:?}")))?,
        ),
    })
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s)?;
        let mut it = tokens.iter();
        let root = parse_node(&mut it)?;
        if it.next().is_some() {
            return Err(Error::Formula("trailing tokens after formula".into()));
        }
        Ok(Formula::from_root(root))
    }
}

/// One formula per non-empty line; `#` starts a comment.
pub fn parse_formula_file(text: &str) -> Result<Vec<Formula>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let content = line.split('#').next().unwrap_or("").trim();
            (!content.is_empty()).then(|| {
                content
                    .parse()
                    .map_err(|e: Error| Error::Formula(format!("line {}: {e}", i + 1)))
            })
        })
        .collect()
}

fn check_arity(tau: &Formula, y: &TritWord) -> Result<()> {
    if y.len() != tau.n_vars {
        return Err(Error::ArityMismatch {
            expected: tau.n_vars,
            found: y.len(),
        });
    }
    Ok(())
}

/// Boolean evaluation; `y` must be stable.
pub fn formula_eval(tau: &Formula, y: &TritWord) -> Result<Trit> {
    check_arity(tau, y)?;
    if !y.is_stable() {
        return Err(Error::UnstableInput(y.clone()));
    }
    Ok(tau.root.eval(y.as_slice()))
}

/// Gate-by-gate Kleene evaluation.
pub fn formula_eval_kleene(tau: &Formula, y: &TritWord) -> Result<Trit> {
    check_arity(tau, y)?;
    Ok(tau.root.eval(y.as_slice()))
}

pub fn decide_tautology_bruteforce(tau: &Formula) -> Result<bool> {
    if tau.n_vars > DEFAULT_CAPACITY {
        return Err(Error::CapacityExceeded {
            unstable: tau.n_vars,
            limit: DEFAULT_CAPACITY,
        });
    }
    Ok((0..1u64 << tau.n_vars)
        .all(|i| tau.root.eval(TritWord::from_index(i, tau.n_vars).as_slice()) == Trit::One))
}

/// Every formula over `n_vars` variables with at most `max_size` nodes.
pub fn enumerate_formulas(n_vars: usize, max_size: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Node>> = vec![Vec::new(); max_size + 1];
    for s in 1..=max_size {
        let mut nodes = Vec::new();
        if s == 1 {
            nodes.extend((0..n_vars).map(Node::Var));
        } else {
            nodes.extend(by_size[s - 1].iter().cloned().map(Node::not));
            for left in 1..s - 1 {
                let right = s - 1 - left;
                for a in &by_size[left] {
                    for b in &by_size[right] {
                        nodes.push(Node::and(a.clone(), b.clone()));
                        nodes.push(Node::or(a.clone(), b.clone()));
                    }
                }
            }
        }
        by_size[s] = nodes;
    }
    by_size
        .into_iter()
        .flatten()
        .map(|root| Formula { root, n_vars })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    fn w(s: &str) -> TritWord {
        s.parse().unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(formula_eval(&f("| x0 ! x0"), &w("0")).unwrap(), Trit::One);
        assert_eq!(formula_eval(&f("& x0 x1"), &w("10")).unwrap(), Trit::Zero);
        assert_eq!(formula_eval_kleene(&f("| x0 ! x0"), &w("u")).unwrap(), Trit::U);
        assert!(formula_eval(&f("x0"), &w("u")).is_err());
        assert!(formula_eval(&f("x1"), &w("0")).is_err());
    }

    #[test]
    fn tautology_examples() {
        assert!(decide_tautology_bruteforce(&f("| x0 ! x0")).unwrap());
        assert!(!decide_tautology_bruteforce(&f("x0")).unwrap());
        assert!(decide_tautology_bruteforce(&f("| | & x0 x1 ! x0 ! x1")).unwrap());
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let t = f("|&x0 x1!x2");
        assert_eq!(t.to_string(), "| & x0 x1 ! x2");
        assert_eq!(t.n_vars(), 3);
        assert_eq!(t.size(), 6);
        assert_eq!(f(&t.to_string()), t);
        for bad in ["", "& x0", "x0 x1", "y0", "x", "! "] {
            assert!(bad.parse::<Formula>().is_err(), "{bad:?}");
        }
        assert!(Formula::new(Node::Var(2), 2).is_err());
    }

    #[test]
    fn file_format() {
        let fs = parse_formula_file("# c\n| x0 ! x0\n\n& x0 x1 # and\n").unwrap();
        assert_eq!(fs.len(), 2);
        assert!(parse_formula_file("& x0\n").is_err());
    }

    #[test]
    fn enumeration_counts() {
        // one variable: sizes 1..=3 give 1, 1, 1 + 2 formulas
        assert_eq!(enumerate_formulas(1, 3).len(), 5);
        let all = enumerate_formulas(2, 4);
        assert!(all.iter().all(|t| t.size() <= 4 && t.n_vars() == 2));
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
    }
}
