use std::collections::{BTreeMap, BTreeSet};

use super::lexer::{lex, Spanned, Tok};
use super::{DslError, Span};
use crate::action::{ActionLibrary, ActionStructure, ActionToken};
use crate::formula::{ActionRef, AgentId, AtomId, Formula};
use crate::kripke::{KripkeModel, WorldId};
use crate::scenario::{Link, Scenario, ScenarioError};

/// Words that cannot name atoms, agents or definitions.
pub const FORMULA_KEYWORDS: [&str; 10] = [
    "not", "and", "or", "K", "B", "Khat", "Bhat", "atom", "true", "false",
];

/// Words with a fixed meaning at the start of a scenario item.
pub const SCENARIO_KEYWORDS: [&str; 16] = [
    "scenario", "raw", "agents", "atoms", "link", "world", "actual", "action", "for", "token",
    "pre", "pre_s", "post", "define", "query", "S",
];

/// Names visible while parsing a formula. `None` vocabularies accept
/// anything.
#[derive(Default)]
pub(crate) struct Env<'a> {
    pub agents: Option<&'a [AgentId]>,
    pub atoms: Option<&'a [AtomId]>,
    pub actions: Option<&'a ActionLibrary>,
    pub definitions: &'a [(String, Formula)],
}

pub(crate) struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = Result<T, DslError>;

impl Parser {
    pub(crate) fn new(src: &str) -> PResult<Self> {
        Ok(Self {
            toks: lex(src)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn unexpected<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(DslError::Syntax {
            span: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    pub(crate) fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.unexpected(&[&format!("'{}'", t.text())])
        }
    }

    pub(crate) fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    pub(crate) fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.unexpected(&[&format!("'{w}'")])
        }
    }

    /// An identifier that is not a formula keyword.
    pub(crate) fn name(&mut self, what: &str) -> PResult<(String, Span)> {
        let span = self.span();
        match self.peek() {
            Tok::Ident(s) if !FORMULA_KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok((s, span))
            }
            _ => self.unexpected(&[what]),
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    // formula := disj ('->' formula)?
    pub(crate) fn formula(&mut self, env: &Env<'_>) -> PResult<Formula> {
        let lhs = self.disj(env)?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula(env)?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self, env: &Env<'_>) -> PResult<Formula> {
        let mut f = self.conj(env)?;
        while self.eat_word("or") {
            f = f.or(self.conj(env)?);
        }
        Ok(f)
    }

    fn conj(&mut self, env: &Env<'_>) -> PResult<Formula> {
        let mut f = self.unary(env)?;
        while self.eat_word("and") {
            f = f.and(self.unary(env)?);
        }
        Ok(f)
    }

    fn agent(&mut self, env: &Env<'_>) -> PResult<AgentId> {
        let (name, span) = self.name("agent name")?;
        if let Some(agents) = env.agents {
            if !agents.iter().any(|a| a.as_str() == name) {
                return Err(DslError::Name {
                    span,
                    message: format!("undeclared agent `{name}`"),
                });
            }
        }
        Ok(AgentId::new(name))
    }

    /// `i, A.t` optionally followed by `, S`. Returns the safe flag.
    fn action(&mut self, env: &Env<'_>) -> PResult<(ActionRef, bool)> {
        let agent = self.agent(env)?;
        self.expect(Tok::Comma)?;
        let (structure, span) = self.name("action structure name")?;
        self.expect(Tok::Dot)?;
        let (token, _) = self.name("token name")?;
        if let Some(lib) = env.actions {
            if lib.token(&structure, &token).is_none() {
                return Err(DslError::Name {
                    span,
                    message: format!("unknown action `{structure}.{token}`"),
                });
            }
        }
        let safe = if self.eat(&Tok::Comma) {
            self.expect_word("S")?;
            true
        } else {
            false
        };
        Ok((ActionRef::new(agent, structure, token), safe))
    }

    fn unary(&mut self, env: &Env<'_>) -> PResult<Formula> {
        let Tok::Ident(word) = self.peek().clone() else {
            return match self.peek() {
                Tok::LBracket => {
                    self.bump();
                    let (act, safe) = self.action(env)?;
                    self.expect(Tok::RBracket)?;
                    let f = self.unary(env)?;
                    Ok(if safe {
                        Formula::after_safe(act, f)
                    } else {
                        Formula::after(act, f)
                    })
                }
                Tok::Lt => {
                    self.bump();
                    let (act, safe) = self.action(env)?;
                    self.expect(Tok::Gt)?;
                    let f = self.unary(env)?;
                    Ok(if safe {
                        Formula::can_act_safely(act, f)
                    } else {
                        Formula::can_act(act, f)
                    })
                }
                _ => self.primary(env),
            };
        };
        let modal: Option<fn(AgentId, Formula) -> Formula> = match word.as_str() {
            "not" => {
                self.bump();
                return Ok(self.unary(env)?.not());
            }
            "K" => Some(|i, f| Formula::knows(i, f)),
            "B" => Some(|i, f| Formula::believes(i, f)),
            "Khat" => Some(|i, f| Formula::knows_possible(i, f)),
            "Bhat" => Some(|i, f| Formula::believes_possible(i, f)),
            _ => None,
        };
        match modal {
            Some(build) => {
                self.bump();
                let i = self.agent(env)?;
                Ok(build(i, self.unary(env)?))
            }
            None => self.primary(env),
        }
    }

    fn atom(&mut self, env: &Env<'_>, name: String, span: Span) -> PResult<Formula> {
        if let Some(atoms) = env.atoms {
            if !atoms.iter().any(|a| a.as_str() == name) {
                return Err(DslError::Name {
                    span,
                    message: format!("undeclared atom `{name}`"),
                });
            }
        }
        Ok(Formula::atom(name))
    }

    fn primary(&mut self, env: &Env<'_>) -> PResult<Formula> {
        const EXPECTED: [&str; 10] = [
            "'('", "'not'", "'K'", "'B'", "'Khat'", "'Bhat'", "'['", "'<'", "'atom'", "name",
        ];
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula(env)?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(w) if w == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(w) if w == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(w) if w == "atom" => {
                self.bump();
                let (name, span) = self.name("atom name")?;
                self.atom(env, name, span)
            }
            Tok::Ident(w) if !FORMULA_KEYWORDS.contains(&w.as_str()) => {
                let span = self.span();
                self.bump();
                if let Some((_, f)) = env.definitions.iter().find(|(n, _)| *n == w) {
                    return Ok(f.clone());
                }
                self.atom(env, w, span)
            }
            _ => self.unexpected(&EXPECTED),
        }
    }
}

/// Parses a standalone formula; bare identifiers are atoms.
pub fn parse_formula(src: &str) -> Result<Formula, DslError> {
    let mut p = Parser::new(src)?;
    let f = p.formula(&Env::default())?;
    if !p.at_eof() {
        return p.unexpected(&["end of input", "'->'", "'and'", "'or'"]);
    }
    Ok(f)
}

/// Parses a formula against a scenario's vocabulary and definitions.
pub fn parse_formula_in(src: &str, s: &Scenario) -> Result<Formula, DslError> {
    let mut p = Parser::new(src)?;
    let env = Env {
        agents: Some(&s.agents),
        atoms: Some(&s.atoms),
        actions: Some(&s.actions),
        definitions: &s.definitions,
    };
    let f = p.formula(&env)?;
    if !p.at_eof() {
        return p.unexpected(&["end of input", "'->'", "'and'", "'or'"]);
    }
    Ok(f)
}

#[derive(Default)]
struct Draft {
    name: String,
    header: Option<Span>,
    raw: bool,
    agents: Vec<AgentId>,
    atoms: Vec<AtomId>,
    links: Vec<Link>,
    worlds: Vec<(String, Vec<AtomId>, Span)>,
    k: Vec<(AgentId, String, String)>,
    b: Vec<(AgentId, String, String)>,
    relation_spans: BTreeMap<AgentId, Span>,
    actual: Option<(String, Span)>,
    actions: ActionLibrary,
    definitions: Vec<(String, Formula)>,
    queries: Vec<(String, Formula)>,
}

impl Draft {
    fn names_in_use(&self) -> BTreeSet<&str> {
        self.atoms
            .iter()
            .map(|a| a.as_str())
            .chain(self.definitions.iter().map(|(n, _)| n.as_str()))
            .collect()
    }

    fn env(&self) -> Env<'_> {
        Env {
            agents: Some(&self.agents),
            atoms: Some(&self.atoms),
            actions: Some(&self.actions),
            definitions: &self.definitions,
        }
    }

    fn has_world(&self, w: &str) -> bool {
        self.worlds.iter().any(|(n, _, _)| n == w)
    }
}

fn name_err<T>(span: Span, message: String) -> PResult<T> {
    Err(DslError::Name { span, message })
}

fn invariant<T>(span: Span, message: impl Into<String>) -> PResult<T> {
    Err(DslError::Invariant {
        span,
        message: message.into(),
    })
}

impl Parser {
    fn id_list(&mut self, what: &str, close: &Tok) -> PResult<Vec<(String, Span)>> {
        let mut out = vec![];
        if self.peek() == close {
            return Ok(out);
        }
        loop {
            out.push(self.name(what)?);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    /// `(x, y), (x, z)` or nothing, terminated by `;`.
    fn pair_list(&mut self) -> PResult<Vec<((String, Span), (String, Span))>> {
        let mut out = vec![];
        if *self.peek() == Tok::Semi {
            return Ok(out);
        }
        loop {
            self.expect(Tok::LParen)?;
            let a = self.name("name")?;
            self.expect(Tok::Comma)?;
            let b = self.name("name")?;
            self.expect(Tok::RParen)?;
            out.push((a, b));
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    fn declared_agent(&mut self, d: &Draft) -> PResult<(AgentId, Span)> {
        let (name, span) = self.name("agent name")?;
        if !d.agents.iter().any(|a| a.as_str() == name) {
            return name_err(span, format!("undeclared agent `{name}`"));
        }
        Ok((AgentId::new(name), span))
    }

    fn fresh_name(&mut self, d: &Draft, what: &str) -> PResult<(String, Span)> {
        let (n, span) = self.name(what)?;
        if d.names_in_use().contains(n.as_str()) {
            return name_err(span, format!("`{n}` is already defined"));
        }
        Ok((n, span))
    }

    fn scenario_item(&mut self, d: &mut Draft) -> PResult<()> {
        const ITEMS: [&str; 11] = [
            "'raw'", "'agents'", "'atoms'", "'link'", "'world'", "'K'", "'B'", "'actual'",
            "'action'", "'define'", "'query'",
        ];
        let Tok::Ident(word) = self.peek().clone() else {
            return self.unexpected(&ITEMS);
        };
        match word.as_str() {
            "raw" => {
                self.bump();
                d.raw = true;
                self.expect(Tok::Semi)
            }
            "agents" => {
                self.bump();
                self.expect(Tok::Colon)?;
                for (n, span) in self.id_list("agent name", &Tok::Semi)? {
                    let a = AgentId::new(n);
                    if d.agents.contains(&a) {
                        return name_err(span, format!("agent `{a}` declared twice"));
                    }
                    d.agents.push(a);
                }
                self.expect(Tok::Semi)
            }
            "atoms" => {
                self.bump();
                self.expect(Tok::Colon)?;
                for (n, span) in self.id_list("atom name", &Tok::Semi)? {
                    if d.names_in_use().contains(n.as_str()) {
                        return name_err(span, format!("`{n}` is already defined"));
                    }
                    d.atoms.push(AtomId::new(n));
                }
                self.expect(Tok::Semi)
            }
            "link" => {
                self.bump();
                let check = |p: &mut Parser| -> PResult<AtomId> {
                    let (n, span) = p.name("atom name")?;
                    if !d.atoms.iter().any(|a| a.as_str() == n) {
                        return name_err(span, format!("undeclared atom `{n}`"));
                    }
                    Ok(AtomId::new(n))
                };
                let atom = check(self)?;
                self.expect(Tok::Assign)?;
                let mut components = vec![check(self)?];
                while self.eat_word("and") {
                    components.push(check(self)?);
                }
                self.expect(Tok::Semi)?;
                d.links.push(Link { atom, components });
                Ok(())
            }
            "world" => {
                self.bump();
                let (n, span) = self.name("world name")?;
                if d.has_world(&n) {
                    return name_err(span, format!("world `{n}` declared twice"));
                }
                self.expect(Tok::LBrace)?;
                let mut atoms = vec![];
                for (a, aspan) in self.id_list("atom name", &Tok::RBrace)? {
                    if !d.atoms.iter().any(|x| x.as_str() == a) {
                        return name_err(aspan, format!("undeclared atom `{a}`"));
                    }
                    atoms.push(AtomId::new(a));
                }
                self.expect(Tok::RBrace)?;
                d.worlds.push((n, atoms, span));
                Ok(())
            }
            "K" | "B" => {
                self.bump();
                let (agent, span) = self.declared_agent(d)?;
                self.expect(Tok::Colon)?;
                let pairs = self.pair_list()?;
                self.expect(Tok::Semi)?;
                d.relation_spans.entry(agent.clone()).or_insert(span);
                for ((x, xs), (y, ys)) in pairs {
                    for (w, s) in [(&x, xs), (&y, ys)] {
                        if !d.has_world(w) {
                            return name_err(s, format!("undeclared world `{w}`"));
                        }
                    }
                    let target = if word == "K" { &mut d.k } else { &mut d.b };
                    target.push((agent.clone(), x, y));
                }
                Ok(())
            }
            "actual" => {
                self.bump();
                self.expect(Tok::Colon)?;
                let (w, span) = self.name("world name")?;
                if !d.has_world(&w) {
                    return name_err(span, format!("undeclared world `{w}`"));
                }
                self.expect(Tok::Semi)?;
                d.actual = Some((w, span));
                Ok(())
            }
            "action" => self.action_item(d),
            "define" => {
                self.bump();
                let (n, _) = self.fresh_name(d, "definition name")?;
                self.expect(Tok::Assign)?;
                let f = self.formula(&d.env())?;
                self.expect(Tok::Semi)?;
                d.definitions.push((n, f));
                Ok(())
            }
            "query" => {
                self.bump();
                let (n, span) = self.name("query name")?;
                if d.queries.iter().any(|(q, _)| *q == n) {
                    return name_err(span, format!("query `{n}` declared twice"));
                }
                self.expect(Tok::Colon)?;
                let f = self.formula(&d.env())?;
                self.expect(Tok::Semi)?;
                d.queries.push((n, f));
                Ok(())
            }
            _ => self.unexpected(&ITEMS),
        }
    }

    fn action_item(&mut self, d: &mut Draft) -> PResult<()> {
        self.expect_word("action")?;
        let (name, span) = self.name("action structure name")?;
        if d.actions.get(&name).is_some() {
            return name_err(span, format!("action structure `{name}` declared twice"));
        }
        self.expect_word("for")?;
        let (actor, _) = self.declared_agent(d)?;
        self.expect(Tok::LBrace)?;
        let mut builder = ActionStructure::builder(name.clone(), actor);
        let mut tokens: Vec<String> = vec![];
        let known = |tokens: &Vec<String>, t: &str, s: Span| {
            if tokens.iter().any(|x| x == t) {
                Ok(())
            } else {
                name_err(s, format!("unknown token `{t}` in `{name}`"))
            }
        };
        loop {
            if self.eat(&Tok::RBrace) {
                break;
            }
            if self.eat_word("token") {
                let (t, tspan) = self.name("token name")?;
                if tokens.contains(&t) {
                    return name_err(tspan, format!("token `{t}` declared twice"));
                }
                self.expect(Tok::LBrace)?;
                self.expect_word("pre")?;
                self.expect(Tok::Colon)?;
                let pre_span = self.span();
                let pre = self.formula(&d.env())?;
                self.expect(Tok::Semi)?;
                self.expect_word("pre_s")?;
                self.expect(Tok::Colon)?;
                let pre_s = self.formula(&d.env())?;
                self.expect(Tok::Semi)?;
                if !pre.is_static() || !pre_s.is_static() {
                    return invariant(pre_span, format!("preconditions of `{t}` must be static"));
                }
                let mut token = ActionToken::new(t.clone(), pre, pre_s);
                if self.eat_word("post") {
                    self.expect(Tok::Colon)?;
                    self.expect(Tok::LBrace)?;
                    loop {
                        let (a, aspan) = self.name("atom name")?;
                        if !d.atoms.iter().any(|x| x.as_str() == a) {
                            return name_err(aspan, format!("undeclared atom `{a}`"));
                        }
                        self.expect(Tok::Assign)?;
                        let v = if self.eat_word("true") {
                            true
                        } else if self.eat_word("false") {
                            false
                        } else {
                            return self.unexpected(&["'true'", "'false'"]);
                        };
                        token = token.with_post(a, v);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::RBrace)?;
                    self.expect(Tok::Semi)?;
                }
                self.expect(Tok::RBrace)?;
                tokens.push(t);
                builder = builder.token(token);
            } else if self.is_word("K") || self.is_word("B") {
                let knows = self.is_word("K");
                self.bump();
                let (agent, _) = self.declared_agent(d)?;
                self.expect(Tok::Colon)?;
                let pairs = self.pair_list()?;
                self.expect(Tok::Semi)?;
                builder = builder.agent(agent.clone());
                for ((x, xs), (y, ys)) in pairs {
                    known(&tokens, &x, xs)?;
                    known(&tokens, &y, ys)?;
                    builder = if knows {
                        builder.k(agent.clone(), &x, &y)
                    } else {
                        builder.b(agent.clone(), &x, &y)
                    };
                }
            } else if self.eat_word("actual") {
                self.expect(Tok::Colon)?;
                let (t, tspan) = self.name("token name")?;
                known(&tokens, &t, tspan)?;
                self.expect(Tok::Semi)?;
                builder = builder.actual(&t);
            } else {
                return self.unexpected(&["'token'", "'K'", "'B'", "'actual'", "'}'"]);
            }
        }
        match builder.build() {
            Ok(s) => {
                d.actions.insert(s);
                Ok(())
            }
            Err(e) => invariant(span, e.to_string()),
        }
    }
}

/// Parses a `.dasl` scenario file. Names must be declared before use.
pub fn parse_scenario(src: &str) -> Result<Scenario, DslError> {
    let mut p = Parser::new(src)?;
    let mut d = Draft::default();
    let header = p.span();
    p.expect_word("scenario")?;
    d.header = Some(header);
    d.name = p.name("scenario name")?.0;
    p.expect(Tok::LBrace)?;
    while !p.eat(&Tok::RBrace) {
        p.scenario_item(&mut d)?;
    }
    let close = p.span();
    if !p.at_eof() {
        return p.unexpected(&["end of input"]);
    }
    finish(d, header, close)
}

fn finish(d: Draft, header: Span, close: Span) -> PResult<Scenario> {
    if d.worlds.is_empty() {
        return invariant(close, "scenario declares no worlds");
    }
    let Some((actual, _)) = d.actual.clone() else {
        return invariant(close, "actual world not set");
    };
    let mut mb = KripkeModel::builder();
    for a in &d.agents {
        mb = mb.agent(a.clone());
    }
    for (w, atoms, _) in &d.worlds {
        mb = mb.world(WorldId::base(w.as_str()), atoms.iter().cloned());
    }
    for (a, x, y) in &d.k {
        mb = mb.k(a.clone(), WorldId::base(x.as_str()), WorldId::base(y.as_str()));
    }
    for (a, x, y) in &d.b {
        mb = mb.b(a.clone(), WorldId::base(x.as_str()), WorldId::base(y.as_str()));
    }
    let model = match mb.actual(WorldId::base(actual.as_str())).build() {
        Ok(m) => m,
        Err(e) => return invariant(close, e.to_string()),
    };
    let world_span = |w: &WorldId| {
        d.worlds
            .iter()
            .find(|(n, _, _)| WorldId::base(n.as_str()) == *w)
            .map_or(header, |(_, _, s)| *s)
    };
    let s = Scenario {
        name: d.name.clone(),
        raw: d.raw,
        agents: d.agents.clone(),
        atoms: d.atoms.clone(),
        links: d.links.clone(),
        model,
        actions: d.actions.clone(),
        definitions: d.definitions.clone(),
        queries: d.queries.clone(),
    };
    match s.validate() {
        Ok(()) => Ok(s),
        Err(e) => {
            let span = match &e {
                ScenarioError::LinkViolated { world, .. } => world_span(world),
                ScenarioError::FrameCondition { agent, .. } => {
                    d.relation_spans.get(agent).copied().unwrap_or(header)
                }
                _ => header,
            };
            invariant(span, e.to_string())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let f = parse_formula("p and q or r -> s").unwrap();
        let p = Formula::atom;
        assert_eq!(f, p("p").and(p("q")).or(p("r")).implies(p("s")));
        let g = parse_formula("not K i p -> K i not K i p").unwrap();
        let kp = Formula::knows("i", p("p"));
        assert_eq!(g, kp.clone().not().implies(Formula::knows("i", kp.not())));
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_formula("a -> b -> c").unwrap();
        let p = Formula::atom;
        assert_eq!(f, p("a").implies(p("b").implies(p("c"))));
    }

    #[test]
    fn dynamic_boxes() {
        let f = parse_formula("[i, A.t, S] p and <i, A.t> true").unwrap();
        let act = ActionRef::new("i", "A", "t");
        assert_eq!(
            f,
            Formula::after_safe(act.clone(), Formula::atom("p")).and(Formula::can_act(act, Formula::True))
        );
    }

    #[test]
    fn structure_named_s() {
        let f = parse_formula("[i, S.t] p").unwrap();
        assert_eq!(f, Formula::after(ActionRef::new("i", "S", "t"), Formula::atom("p")));
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "not (K i atom p -> B j (atom q or false))",
            "Khat i Bhat j <i, A.t, S> true",
            "[a, X.y] (p and (q and r))",
        ] {
            let f = parse_formula(src).unwrap();
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn empty_file_expects_scenario() {
        let err = parse_scenario("").unwrap_err();
        match err {
            DslError::Syntax { expected, .. } => assert_eq!(expected, vec!["'scenario'"]),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn undefined_agent_in_relation() {
        let src = "scenario x {\n agents: a;\n world w { }\n K b: (w, w);\n}";
        let err = parse_scenario(src).unwrap_err();
        assert_eq!(err.kind(), "name");
        assert_eq!(err.span(), Span { line: 4, col: 4 });
    }

    #[test]
    fn raw_skips_frame_check() {
        let body = "agents: a; atoms: p; world w { p } K a: ; B a: ; actual: w;";
        let err = parse_scenario(&format!("scenario x {{ {body} }}")).unwrap_err();
        assert_eq!(err.kind(), "invariant");
        parse_scenario(&format!("scenario x {{ raw; {body} }}")).unwrap();
    }
}
