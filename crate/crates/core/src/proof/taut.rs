//! Truth-table check for the propositional skeleton of a formula.

use std::collections::HashMap;

use crate::formula::Formula;

/// Above this many propositional variables the check gives up.
pub const MAX_TAUT_VARIABLES: usize = 20;

enum Node {
    Var(usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
}

impl Node {
    fn eval(&self, bits: u32) -> bool {
        match self {
            Node::Var(i) => bits >> i & 1 == 1,
            Node::Not(a) => !a.eval(bits),
            Node::And(a, b) => a.eval(bits) && b.eval(bits),
        }
    }
}

fn compile<'a>(f: &'a Formula, vars: &mut HashMap<&'a Formula, usize>) -> Node {
    match f {
        Formula::Not(g) => Node::Not(Box::new(compile(g, vars))),
        Formula::And(a, b) => Node::And(Box::new(compile(a, vars)), Box::new(compile(b, vars))),
        // modal, dynamic and atomic subformulas are opaque variables
        other => {
            let n = vars.len();
            Node::Var(*vars.entry(other).or_insert(n))
        }
    }
}

/// Treats every maximal subformula not headed by `not`/`and` as a variable.
/// Expects a primitive formula. `Err(n)` reports `n` variables over the cap.
pub fn is_tautology(f: &Formula) -> Result<bool, usize> {
    let mut vars = HashMap::new();
    let node = compile(f, &mut vars);
    let n = vars.len();
    if n > MAX_TAUT_VARIABLES {
        return Err(n);
    }
    Ok((0u32..1 << n).all(|bits| node.eval(bits)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::expand_derived;

    fn t(f: Formula) -> bool {
        is_tautology(&expand_derived(&f)).unwrap()
    }

    #[test]
    fn classics() {
        let p = Formula::atom("p");
        let q = Formula::atom("q");
        assert!(t(p.clone().or(p.clone().not())));
        assert!(t(p.clone().implies(q.clone().implies(p.clone()))));
        assert!(!t(p.clone().implies(q.clone())));
        // modal atoms are opaque but identical ones are shared
        let kp = Formula::knows("i", p.clone());
        assert!(t(kp.clone().implies(kp.clone())));
        assert!(!t(kp.implies(p)));
    }

    #[test]
    fn too_many_variables() {
        let f = Formula::conjunction((0..25).map(|i| Formula::atom(format!("v{i}"))));
        assert_eq!(is_tautology(&f), Err(25));
    }
}
