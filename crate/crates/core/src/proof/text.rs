//! Proof files: one parenthesised node per rule application.
//!
//! ```text
//! scenario af447;        # optional: names the scenario providing actions
//! (MP (Taut ((atom p -> atom p) -> atom q or not atom q)) (Taut (atom p -> atom p)))
//! ```
//!
//! Agent parameters are bare names, action parameters are `[i, A.t]`,
//! formula parameters are parenthesised formulas, and premises are nested
//! nodes.

use std::fmt::Write;

use super::{Proof, RuleTag};
use crate::dsl::lexer::Tok;
use crate::dsl::{DslError, Parser};
use crate::formula::{ActionRef, AgentId, Formula};

#[derive(Clone, Copy)]
enum Arg {
    Agent,
    Action,
    Formula,
    Child,
}

fn signature(t: RuleTag) -> &'static [Arg] {
    use Arg::*;
    use RuleTag::*;
    match t {
        HilbertK => &[Formula, Formula],
        HilbertS => &[Formula, Formula, Formula],
        ClassicNotNot | Taut => &[Formula],
        MP | AndIntro => &[Child, Child],
        KNec | BNec => &[Agent, Child],
        KK | BK => &[Agent, Formula, Formula],
        KT | BSerial | B4 | B5 | KB | BBK | KBIntro => &[Agent, Formula],
        SP | PR | PreS => &[Action, Formula],
        AndSimplL | AndSimplR => &[Child],
    }
}

enum Value {
    Agent(AgentId),
    Action(ActionRef),
    Formula(Formula),
    Child(Proof),
}

/// A parsed proof file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofFile {
    /// Scenario named by the `scenario` header, if any.
    pub scenario: Option<String>,
    pub proof: Proof,
}

impl Parser {
    fn proof_node(&mut self) -> Result<Proof, DslError> {
        self.expect(Tok::LParen)?;
        let span = self.span();
        let Tok::Ident(tag) = self.peek().clone() else {
            return self.unexpected(&["rule name"]);
        };
        let Some(tag) = RuleTag::from_name(&tag) else {
            return Err(DslError::Name {
                span,
                message: format!("unknown rule `{tag}`"),
            });
        };
        self.expect(Tok::Ident(tag.name().to_string()))?;
        let mut vals = vec![];
        for arg in signature(tag) {
            vals.push(match arg {
                Arg::Agent => Value::Agent(AgentId::new(self.name("agent name")?.0)),
                Arg::Action => {
                    self.expect(Tok::LBracket)?;
                    let agent = self.name("agent name")?.0;
                    self.expect(Tok::Comma)?;
                    let s = self.name("action structure name")?.0;
                    self.expect(Tok::Dot)?;
                    let t = self.name("token name")?.0;
                    self.expect(Tok::RBracket)?;
                    Value::Action(ActionRef::new(agent, s, t))
                }
                Arg::Formula => {
                    self.expect(Tok::LParen)?;
                    let f = self.formula(&Default::default())?;
                    self.expect(Tok::RParen)?;
                    Value::Formula(f)
                }
                Arg::Child => Value::Child(self.proof_node()?),
            });
        }
        self.expect(Tok::RParen)?;
        Ok(build(tag, vals))
    }
}

struct Args(std::vec::IntoIter<Value>);

impl Args {
    fn agent(&mut self) -> AgentId {
        match self.0.next() {
            Some(Value::Agent(a)) => a,
            _ => unreachable!("signature mismatch"),
        }
    }

    fn action(&mut self) -> ActionRef {
        match self.0.next() {
            Some(Value::Action(a)) => a,
            _ => unreachable!("signature mismatch"),
        }
    }

    fn formula(&mut self) -> Formula {
        match self.0.next() {
            Some(Value::Formula(f)) => f,
            _ => unreachable!("signature mismatch"),
        }
    }

    fn child(&mut self) -> Box<Proof> {
        match self.0.next() {
            Some(Value::Child(p)) => Box::new(p),
            _ => unreachable!("signature mismatch"),
        }
    }
}

fn build(tag: RuleTag, vals: Vec<Value>) -> Proof {
    let mut a = Args(vals.into_iter());
    use RuleTag as T;
    match tag {
        T::HilbertK => Proof::HilbertK(a.formula(), a.formula()),
        T::HilbertS => Proof::HilbertS(a.formula(), a.formula(), a.formula()),
        T::ClassicNotNot => Proof::ClassicNotNot(a.formula()),
        T::Taut => Proof::Taut(a.formula()),
        T::MP => Proof::MP(a.child(), a.child()),
        T::AndIntro => Proof::AndIntro(a.child(), a.child()),
        T::KNec => Proof::KNec(a.agent(), a.child()),
        T::BNec => Proof::BNec(a.agent(), a.child()),
        T::KK => Proof::KK(a.agent(), a.formula(), a.formula()),
        T::BK => Proof::BK(a.agent(), a.formula(), a.formula()),
        T::KT => Proof::KT(a.agent(), a.formula()),
        T::BSerial => Proof::BSerial(a.agent(), a.formula()),
        T::B4 => Proof::B4(a.agent(), a.formula()),
        T::B5 => Proof::B5(a.agent(), a.formula()),
        T::KB => Proof::KB(a.agent(), a.formula()),
        T::BBK => Proof::BBK(a.agent(), a.formula()),
        T::KBIntro => Proof::KBIntro(a.agent(), a.formula()),
        T::SP => Proof::SP(a.action(), a.formula()),
        T::PR => Proof::PR(a.action(), a.formula()),
        T::PreS => Proof::PreS(a.action(), a.formula()),
        T::AndSimplL => Proof::AndSimplL(a.child()),
        T::AndSimplR => Proof::AndSimplR(a.child()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{derive_ud_implies_sni, check_proof, ProofContext};

    #[test]
    fn round_trip_library_proof() {
        let t = derive_ud_implies_sni(&"i".into(), &Formula::atom("p")).unwrap();
        let text = print_proof(&t.proof, Some("demo"));
        let back = parse_proof(&text).unwrap();
        assert_eq!(back.scenario.as_deref(), Some("demo"));
        assert_eq!(back.proof, t.proof);
        assert_eq!(check_proof(&back.proof, &ProofContext::empty()).unwrap(), t.conclusion);
    }

    #[test]
    fn unknown_rule_is_a_name_error() {
        let err = parse_proof("(K_X i (atom p))").unwrap_err();
        assert_eq!(err.kind(), "name");
    }

    #[test]
    fn action_argument() {
        let f = parse_proof("(PR [i, A.t] (true))").unwrap();
        assert_eq!(f.proof, Proof::PR(ActionRef::new("i", "A", "t"), Formula::True));
    }
}

/// Parses a proof file.
pub fn parse_proof(src: &str) -> Result<ProofFile, DslError> {
    let mut p = Parser::new(src)?;
    let scenario = if p.eat_word("scenario") {
        let n = p.name("scenario name")?.0;
        p.expect(Tok::Semi)?;
        Some(n)
    } else {
        None
    };
    let proof = p.proof_node()?;
    if !p.at_eof() {
        return p.unexpected(&["end of input"]);
    }
    Ok(ProofFile { scenario, proof })
}

fn write_node(out: &mut String, p: &Proof, depth: usize) {
    let pad = "  ".repeat(depth);
    let _ = write!(out, "{pad}({}", p.tag());
    let f = |g: &Formula| format!(" ({g})");
    let mut kids = vec![];
    match p {
        Proof::HilbertK(a, b) => out.push_str(&(f(a) + &f(b))),
        Proof::HilbertS(a, b, c) => out.push_str(&(f(a) + &f(b) + &f(c))),
        Proof::ClassicNotNot(a) | Proof::Taut(a) => out.push_str(&f(a)),
        Proof::MP(a, b) | Proof::AndIntro(a, b) => kids = vec![a.as_ref(), b.as_ref()],
        Proof::KNec(i, c) | Proof::BNec(i, c) => {
            let _ = write!(out, " {i}");
            kids = vec![c.as_ref()];
        }
        Proof::KK(i, a, b) | Proof::BK(i, a, b) => {
            let _ = write!(out, " {i}{}{}", f(a), f(b));
        }
        Proof::KT(i, a)
        | Proof::BSerial(i, a)
        | Proof::B4(i, a)
        | Proof::B5(i, a)
        | Proof::KB(i, a)
        | Proof::BBK(i, a)
        | Proof::KBIntro(i, a) => {
            let _ = write!(out, " {i}{}", f(a));
        }
        Proof::SP(act, a) | Proof::PR(act, a) | Proof::PreS(act, a) => {
            let _ = write!(out, " [{act}]{}", f(a));
        }
        Proof::AndSimplL(c) | Proof::AndSimplR(c) => kids = vec![c.as_ref()],
    }
    for k in kids {
        out.push('\n');
        write_node(out, k, depth + 1);
    }
    out.push(')');
}

/// Prints a proof in the file format, one node per line.
pub fn print_proof(p: &Proof, scenario: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(s) = scenario {
        let _ = writeln!(out, "scenario {s};");
    }
    write_node(&mut out, p, 0);
    out.push('\n');
    out
}
