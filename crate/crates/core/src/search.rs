//! Bounded model enumeration and countermodel search.
//!
//! Models with `n` worlds are named `w0 .. w{n-1}`; the actual world is
//! `w0` unless a countermodel points elsewhere. Enumeration order is fixed:
//! world count ascending, then one frame per agent (agents in name order,
//! first agent slowest; each agent's frames densest first), then the
//! valuation as an integer counted down from all-true. Bit `a * n + w` of
//! the valuation says atom `a` holds at world `w`.
//!
//! Countermodel search only varies what the formula can see: agents it
//! never mentions keep their first frame, relations it never consults keep
//! their first witness, and unmentioned atoms stay true. Because each of
//! those choices is the earliest in enumeration order, the reported
//! countermodel is the same one a full scan would report first.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::ops::ControlFlow;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::action::ActionLibrary;
use crate::formula::{atoms_of, expand_derived, AgentId, AtomId, Formula};
use crate::kripke::{AgentRelations, FrameCondition, KripkeModel, WorldId};
use crate::relation::Relation;
use crate::semantics::{extension, SemanticsError};

/// Hard ceiling: relation rows are bytes.
pub const MAX_WORLDS_HARD: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_worlds: usize,
    pub atoms: Vec<AtomId>,
    pub agents: Vec<AgentId>,
    pub constraints: BTreeSet<FrameCondition>,
}

impl SearchBounds {
    pub fn new(
        max_worlds: usize,
        atoms: impl IntoIterator<Item = impl Into<AtomId>>,
        agents: impl IntoIterator<Item = impl Into<AgentId>>,
        constraints: impl IntoIterator<Item = FrameCondition>,
    ) -> Self {
        let mut atoms: Vec<AtomId> = atoms.into_iter().map(Into::into).collect();
        atoms.sort();
        atoms.dedup();
        let mut agents: Vec<AgentId> = agents.into_iter().map(Into::into).collect();
        agents.sort();
        agents.dedup();
        Self {
            max_worlds,
            atoms,
            agents,
            constraints: constraints.into_iter().collect(),
        }
    }

    /// Bounds covering exactly the atoms and agents of `f`.
    pub fn for_formula(
        f: &Formula,
        max_worlds: usize,
        constraints: impl IntoIterator<Item = FrameCondition>,
    ) -> Self {
        let atoms = atoms_of(&expand_derived(f), None)
            .into_iter()
            .filter(|a| *a != AtomId::top());
        Self::new(max_worlds, atoms, f.agents(), constraints)
    }
}

/// Size limits checked before any search starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchGuard {
    pub max_worlds: usize,
    pub max_atoms: usize,
    pub max_agents: usize,
    /// Cap on `|epistemic candidates| * |belief candidates|` per world count.
    pub max_frame_candidates: u64,
}

impl Default for SearchGuard {
    fn default() -> Self {
        Self {
            max_worlds: 4,
            max_atoms: 2,
            max_agents: 2,
            max_frame_candidates: 1 << 22,
        }
    }
}

impl SearchGuard {
    /// The default guard, with `DASL_MAX_SEARCH` overriding the world cap.
    pub fn from_env() -> Self {
        let mut g = Self::default();
        if let Some(n) = std::env::var("DASL_MAX_SEARCH")
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            g.max_worlds = n;
        }
        g
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search bounds too large: {0}")]
    BoundsTooLarge(String),
    #[error("max_worlds must be at least 1")]
    NoWorlds,
    #[error("formula uses atom `{0}` outside the search bounds")]
    AtomOutOfBounds(AtomId),
    #[error("formula uses agent `{0}` outside the search bounds")]
    AgentOutOfBounds(AgentId),
    #[error("formula has dynamic modalities; use the action-aware search")]
    DynamicFormula,
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// One agent's relations over `n` worlds as row bitmasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Frame {
    k: [u8; MAX_WORLDS_HARD],
    b: [u8; MAX_WORLDS_HARD],
}

fn rows(mask: u64, n: usize) -> [u8; MAX_WORLDS_HARD] {
    let mut r = [0u8; MAX_WORLDS_HARD];
    let full = (1u64 << n) - 1;
    for (w, row) in r.iter_mut().enumerate().take(n) {
        *row = ((mask >> (w * n)) & full) as u8;
    }
    r
}

fn bits(row: u8) -> impl Iterator<Item = usize> {
    (0..8).filter(move |i| row >> i & 1 == 1)
}

fn subset(a: u8, b: u8) -> bool {
    a & !b == 0
}

fn k_ok(k: &[u8; MAX_WORLDS_HARD], n: usize, c: &BTreeSet<FrameCondition>) -> bool {
    !c.contains(&FrameCondition::RkReflexive) || (0..n).all(|w| k[w] >> w & 1 == 1)
}

fn b_ok(b: &[u8; MAX_WORLDS_HARD], n: usize, c: &BTreeSet<FrameCondition>) -> bool {
    use FrameCondition::*;
    (!c.contains(&RbSerial) || (0..n).all(|w| b[w] != 0))
        && (!c.contains(&RbTransitive) || (0..n).all(|w| bits(b[w]).all(|v| subset(b[v], b[w]))))
        && (!c.contains(&RbEuclidean) || (0..n).all(|w| bits(b[w]).all(|v| subset(b[w], b[v]))))
}

fn joint_ok(f: &Frame, n: usize, c: &BTreeSet<FrameCondition>) -> bool {
    use FrameCondition::*;
    (!c.contains(&RbSubsetRk) || (0..n).all(|w| subset(f.b[w], f.k[w])))
        && (!c.contains(&Ep2) || (0..n).all(|w| bits(f.b[w]).all(|v| subset(f.k[v], f.b[w]))))
        && (!c.contains(&Ep3) || (0..n).all(|w| bits(f.k[w]).all(|v| subset(f.b[v], f.b[w]))))
}

/// Every admissible single-agent frame on `n` worlds, densest first.
fn frames(n: usize, c: &BTreeSet<FrameCondition>, guard: &SearchGuard) -> Result<Vec<Frame>, SearchError> {
    if n * n > 25 {
        return Err(SearchError::BoundsTooLarge(format!("{n} worlds: relation space 2^{} per agent", n * n)));
    }
    let total = 1u64 << (n * n);
    let ks: Vec<_> = (0..total).rev().map(|m| rows(m, n)).filter(|k| k_ok(k, n, c)).collect();
    let bs: Vec<_> = (0..total).rev().map(|m| rows(m, n)).filter(|b| b_ok(b, n, c)).collect();
    let candidates = ks.len() as u64 * bs.len() as u64;
    if candidates > guard.max_frame_candidates {
        return Err(SearchError::BoundsTooLarge(format!(
            "{candidates} frame candidates at {n} worlds (cap {}); add frame constraints or lower max_worlds",
            guard.max_frame_candidates
        )));
    }
    let mut out = vec![];
    for k in &ks {
        for b in &bs {
            let f = Frame { k: *k, b: *b };
            if joint_ok(&f, n, c) {
                out.push(f);
            }
        }
    }
    Ok(out)
}

/// Frame lists for every world count up to the bound.
struct FrameTable {
    by_n: Vec<Vec<Frame>>,
}

impl FrameTable {
    fn new(b: &SearchBounds, guard: &SearchGuard) -> Result<Self, SearchError> {
        check_bounds(b, guard)?;
        let by_n = (1..=b.max_worlds)
            .map(|n| frames(n, &b.constraints, guard))
            .collect::<Result<_, _>>()?;
        Ok(Self { by_n })
    }

    fn get(&self, n: usize) -> &[Frame] {
        &self.by_n[n - 1]
    }
}

fn check_bounds(b: &SearchBounds, guard: &SearchGuard) -> Result<(), SearchError> {
    if b.max_worlds == 0 {
        return Err(SearchError::NoWorlds);
    }
    let limit = guard.max_worlds.min(MAX_WORLDS_HARD);
    if b.max_worlds > limit {
        return Err(SearchError::BoundsTooLarge(format!(
            "max_worlds {} exceeds the limit {limit}",
            b.max_worlds
        )));
    }
    if b.atoms.len() > guard.max_atoms {
        return Err(SearchError::BoundsTooLarge(format!(
            "{} atoms exceed the limit {}",
            b.atoms.len(),
            guard.max_atoms
        )));
    }
    if b.agents.len() > guard.max_agents {
        return Err(SearchError::BoundsTooLarge(format!(
            "{} agents exceed the limit {}",
            b.agents.len(),
            guard.max_agents
        )));
    }
    if b.max_worlds * b.atoms.len() > 63 {
        return Err(SearchError::BoundsTooLarge("valuation does not fit 63 bits".into()));
    }
    Ok(())
}

fn world_name(i: usize) -> WorldId {
    WorldId::base(format!("w{i}"))
}

fn to_relation(r: &[u8; MAX_WORLDS_HARD], n: usize) -> Relation {
    Relation::from_pairs(n, (0..n).flat_map(|w| bits(r[w]).map(move |v| (w, v))))
}

fn build_model(b: &SearchBounds, n: usize, frames: &[&Frame], val: u64, actual: usize) -> KripkeModel {
    let worlds = (0..n).map(world_name).collect();
    let relations = b
        .agents
        .iter()
        .zip(frames)
        .map(|(a, f)| {
            (
                a.clone(),
                AgentRelations {
                    k: to_relation(&f.k, n),
                    b: to_relation(&f.b, n),
                },
            )
        })
        .collect();
    let valuation = (0..n)
        .map(|w| {
            b.atoms
                .iter()
                .enumerate()
                .filter(|(a, _)| val >> (a * n + w) & 1 == 1)
                .map(|(_, atom)| atom.clone())
                .collect()
        })
        .collect();
    KripkeModel::from_parts(worlds, relations, actual, valuation)
}

/// Streams every model within the bounds, in enumeration order.
pub struct ModelStream {
    bounds: SearchBounds,
    table: FrameTable,
    n: usize,
    odometer: Vec<usize>,
    val: u64,
    done: bool,
}

impl ModelStream {
    fn reset(&mut self) {
        self.odometer = vec![0; self.bounds.agents.len()];
        self.val = (1u64 << (self.n * self.bounds.atoms.len())) - 1;
    }

    fn advance(&mut self) {
        if self.val > 0 {
            self.val -= 1;
            return;
        }
        let len = self.table.get(self.n).len();
        for slot in self.odometer.iter_mut().rev() {
            *slot += 1;
            if *slot < len {
                self.val = (1u64 << (self.n * self.bounds.atoms.len())) - 1;
                return;
            }
            *slot = 0;
        }
        self.n += 1;
        if self.n > self.bounds.max_worlds {
            self.done = true;
        } else {
            self.reset();
        }
    }
}

impl Iterator for ModelStream {
    type Item = KripkeModel;

    fn next(&mut self) -> Option<KripkeModel> {
        loop {
            if self.done {
                return None;
            }
            if self.table.get(self.n).is_empty() && !self.bounds.agents.is_empty() {
                // no admissible frame at this size
                self.n += 1;
                if self.n > self.bounds.max_worlds {
                    self.done = true;
                } else {
                    self.reset();
                }
                continue;
            }
            let frames = self.table.get(self.n);
            let picked: Vec<&Frame> = self.odometer.iter().map(|&i| &frames[i]).collect();
            let m = build_model(&self.bounds, self.n, &picked, self.val, 0);
            self.advance();
            return Some(m);
        }
    }
}

/// All models within the bounds satisfying the frame constraints, streamed.
pub fn enumerate_models(b: &SearchBounds) -> Result<ModelStream, SearchError> {
    enumerate_models_guarded(b, &SearchGuard::from_env())
}

pub fn enumerate_models_guarded(b: &SearchBounds, guard: &SearchGuard) -> Result<ModelStream, SearchError> {
    let table = FrameTable::new(b, guard)?;
    let mut s = ModelStream {
        bounds: b.clone(),
        table,
        n: 1,
        odometer: vec![],
        val: 0,
        done: false,
    };
    s.reset();
    Ok(s)
}

/// Which parts of a model a formula can observe.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Relevance {
    /// Per agent: (epistemic relation used, belief relation used).
    pub agents: BTreeMap<AgentId, (bool, bool)>,
    pub atoms: BTreeSet<AtomId>,
}

impl Relevance {
    /// What `f` reads. With a library, the preconditions of referenced
    /// tokens count as read too.
    pub fn of_formula(f: &Formula, actions: Option<&ActionLibrary>) -> Self {
        let mut r = Relevance::default();
        r.add(f);
        if let Some(lib) = actions {
            for act in f.action_refs() {
                if let Some(t) = lib.token(&act.structure, &act.token) {
                    r.add(&t.pre);
                    r.add(&t.pre_s);
                }
            }
        }
        r
    }

    fn add(&mut self, f: &Formula) {
        f.visit(&mut |g| match g {
            Formula::Atom(a) if *a != AtomId::top() => {
                self.atoms.insert(a.clone());
            }
            Formula::Knows(i, _) | Formula::KnowsPossible(i, _) => {
                self.agents.entry(i.clone()).or_default().0 = true;
            }
            Formula::Believes(i, _) | Formula::BelievesPossible(i, _) => {
                self.agents.entry(i.clone()).or_default().1 = true;
            }
            _ => {}
        });
    }

    /// Everything is relevant: the search degenerates to full enumeration.
    pub fn everything(b: &SearchBounds) -> Self {
        Self {
            agents: b.agents.iter().map(|a| (a.clone(), (true, true))).collect(),
            atoms: b.atoms.iter().cloned().collect(),
        }
    }

    fn check(&self, b: &SearchBounds) -> Result<(), SearchError> {
        if let Some(a) = self.atoms.iter().find(|a| !b.atoms.contains(a)) {
            return Err(SearchError::AtomOutOfBounds(a.clone()));
        }
        if let Some(a) = self.agents.keys().find(|a| !b.agents.contains(a)) {
            return Err(SearchError::AgentOutOfBounds(a.clone()));
        }
        Ok(())
    }
}

/// Frame indices worth trying for one agent, earliest representative of
/// each observable class.
fn choices(frames: &[Frame], n: usize, used: (bool, bool)) -> Vec<usize> {
    if frames.is_empty() {
        return vec![];
    }
    let mut seen = HashSet::new();
    let mut out = vec![];
    for (i, f) in frames.iter().enumerate() {
        let key = (
            if used.0 { f.k[..n].to_vec() } else { vec![] },
            if used.1 { f.b[..n].to_vec() } else { vec![] },
        );
        if seen.insert(key) {
            out.push(i);
        }
    }
    out
}

/// Projected enumeration: calls `visit(n, frames, valuation)` in
/// enumeration order over one representative per observable class.
fn for_each_projected(
    b: &SearchBounds,
    table: &FrameTable,
    rel: &Relevance,
    mut visit: impl FnMut(usize, &[&Frame], u64) -> ControlFlow<()>,
) -> u64 {
    let mut examined = 0u64;
    for n in 1..=b.max_worlds {
        let frames = table.get(n);
        let lists: Vec<Vec<usize>> = b
            .agents
            .iter()
            .map(|a| match rel.agents.get(a) {
                Some(&used) => choices(frames, n, used),
                None => choices(frames, n, (false, false)),
            })
            .collect();
        if lists.iter().any(Vec::is_empty) {
            continue;
        }
        let mut relevant = 0u64;
        for (ai, atom) in b.atoms.iter().enumerate() {
            if rel.atoms.contains(atom) {
                relevant |= ((1u64 << n) - 1) << (ai * n);
            }
        }
        let full = (1u64 << (n * b.atoms.len())) - 1;
        let fixed = full & !relevant;
        let mut odo = vec![0usize; lists.len()];
        loop {
            let picked: Vec<&Frame> = odo.iter().zip(&lists).map(|(&i, l)| &frames[l[i]]).collect();
            // descending submasks of the relevant bits
            let mut s = relevant;
            loop {
                examined += 1;
                if visit(n, &picked, s | fixed).is_break() {
                    return examined;
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & relevant;
            }
            let mut carry = true;
            for (slot, l) in odo.iter_mut().zip(&lists).rev() {
                *slot += 1;
                if *slot < l.len() {
                    carry = false;
                    break;
                }
                *slot = 0;
            }
            if carry {
                break;
            }
        }
    }
    examined
}

/// Post-order program over world bitmasks for a primitive static formula.
enum Op {
    Atom(usize),
    Top,
    Not,
    And,
    K(usize),
    B(usize),
}

fn compile(f: &Formula, b: &SearchBounds, out: &mut Vec<Op>) -> Result<(), SearchError> {
    match f {
        Formula::Atom(a) if *a == AtomId::top() => out.push(Op::Top),
        Formula::Atom(a) => {
            let i = b
                .atoms
                .iter()
                .position(|x| x == a)
                .ok_or_else(|| SearchError::AtomOutOfBounds(a.clone()))?;
            out.push(Op::Atom(i));
        }
        Formula::Not(g) => {
            compile(g, b, out)?;
            out.push(Op::Not);
        }
        Formula::And(x, y) => {
            compile(x, b, out)?;
            compile(y, b, out)?;
            out.push(Op::And);
        }
        Formula::Knows(i, g) | Formula::Believes(i, g) => {
            compile(g, b, out)?;
            let ix = b
                .agents
                .iter()
                .position(|x| x == i)
                .ok_or_else(|| SearchError::AgentOutOfBounds(i.clone()))?;
            out.push(if matches!(f, Formula::Knows(..)) { Op::K(ix) } else { Op::B(ix) });
        }
        _ => return Err(SearchError::DynamicFormula),
    }
    Ok(())
}

fn run(prog: &[Op], n: usize, frames: &[&Frame], val: u64, stack: &mut Vec<u8>) -> u8 {
    let full = ((1u16 << n) - 1) as u8;
    stack.clear();
    for op in prog {
        let v = match op {
            Op::Atom(a) => ((val >> (a * n)) as u8) & full,
            Op::Top => 0,
            Op::Not => !stack.pop().unwrap() & full,
            Op::And => {
                let y = stack.pop().unwrap();
                stack.pop().unwrap() & y
            }
            Op::K(i) | Op::B(i) => {
                let e = stack.pop().unwrap();
                let rows = if matches!(op, Op::K(_)) { &frames[*i].k } else { &frames[*i].b };
                (0..n).filter(|&w| subset(rows[w], e)).fold(0u8, |acc, w| acc | 1 << w)
            }
        };
        stack.push(v);
    }
    stack.pop().unwrap_or(full)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Countermodel {
    /// Pointed at the falsifying world.
    #[serde(skip)]
    pub model: KripkeModel,
    pub world: WorldId,
    pub world_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        countermodel: Countermodel,
        examined: u64,
    },
    /// No countermodel within the bounds.
    Exhausted { examined: u64, max_worlds: usize },
}

impl SearchOutcome {
    pub fn countermodel(&self) -> Option<&Countermodel> {
        match self {
            SearchOutcome::Found { countermodel, .. } => Some(countermodel),
            SearchOutcome::Exhausted { .. } => None,
        }
    }

    pub fn examined(&self) -> u64 {
        match self {
            SearchOutcome::Found { examined, .. } | SearchOutcome::Exhausted { examined, .. } => *examined,
        }
    }
}

/// First model and world, in enumeration order, falsifying a static `f`.
pub fn find_countermodel(f: &Formula, b: &SearchBounds) -> Result<SearchOutcome, SearchError> {
    find_countermodel_guarded(f, b, &SearchGuard::from_env())
}

pub fn find_countermodel_guarded(
    f: &Formula,
    b: &SearchBounds,
    guard: &SearchGuard,
) -> Result<SearchOutcome, SearchError> {
    if !f.is_static() {
        return Err(SearchError::DynamicFormula);
    }
    let f = expand_derived(f);
    let mut prog = vec![];
    compile(&f, b, &mut prog)?;
    let rel = Relevance::of_formula(&f, None);
    rel.check(b)?;
    let table = FrameTable::new(b, guard)?;
    let mut found = None;
    let mut stack = vec![];
    let examined = for_each_projected(b, &table, &rel, |n, frames, val| {
        let full = ((1u16 << n) - 1) as u8;
        let ext = run(&prog, n, frames, val, &mut stack);
        if ext != full {
            let w = (!ext & full).trailing_zeros() as usize;
            found = Some(build_model(b, n, frames, val, w));
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    Ok(outcome(found, examined, b))
}

fn outcome(found: Option<KripkeModel>, examined: u64, b: &SearchBounds) -> SearchOutcome {
    match found {
        Some(model) => SearchOutcome::Found {
            countermodel: Countermodel {
                world: model.actual_world().clone(),
                world_count: model.world_count(),
                model,
            },
            examined,
        },
        None => SearchOutcome::Exhausted {
            examined,
            max_worlds: b.max_worlds,
        },
    }
}

/// Countermodel search for formulas with dynamic modalities. Only the
/// static model varies; `actions` is fixed and must mention every agent in
/// the bounds.
pub fn find_countermodel_with_actions(
    f: &Formula,
    b: &SearchBounds,
    actions: &ActionLibrary,
) -> Result<SearchOutcome, SearchError> {
    find_countermodel_where(f, b, actions, &SearchGuard::from_env(), |_, _| true)
}

/// As [`find_countermodel_with_actions`], skipping pointed models for
/// which `admit(model, world)` is false.
pub fn find_countermodel_where(
    f: &Formula,
    b: &SearchBounds,
    actions: &ActionLibrary,
    guard: &SearchGuard,
    mut admit: impl FnMut(&KripkeModel, usize) -> bool,
) -> Result<SearchOutcome, SearchError> {
    let rel = Relevance::of_formula(f, Some(actions));
    rel.check(b)?;
    let table = FrameTable::new(b, guard)?;
    let mut found = None;
    let mut err = None;
    let examined = for_each_projected(b, &table, &rel, |n, frames, val| {
        let m = build_model(b, n, frames, val, 0);
        match extension(&m, f, actions) {
            Ok(ext) => {
                if let Some(w) = (0..n).find(|&w| !ext.contains(w) && admit(&m, w)) {
                    found = Some(m.with_actual(w));
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            }
            Err(e) => {
                err = Some(e);
                ControlFlow::Break(())
            }
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(outcome(found, examined, b))
}

/// Visits every model of a projected enumeration (see module docs) with
/// the full model built. Returns the number of models visited.
pub fn for_each_model(
    b: &SearchBounds,
    rel: &Relevance,
    guard: &SearchGuard,
    mut visit: impl FnMut(&KripkeModel) -> ControlFlow<()>,
) -> Result<u64, SearchError> {
    rel.check(b)?;
    let table = FrameTable::new(b, guard)?;
    Ok(for_each_projected(b, &table, rel, |n, frames, val| {
        visit(&build_model(b, n, frames, val, 0))
    }))
}

/// Uniform sampling over world count, per-agent frames and valuations.
pub struct ModelSampler {
    bounds: SearchBounds,
    table: FrameTable,
}

impl ModelSampler {
    pub fn new(b: &SearchBounds, guard: &SearchGuard) -> Result<Self, SearchError> {
        Ok(Self {
            bounds: b.clone(),
            table: FrameTable::new(b, guard)?,
        })
    }

    /// A random model with actual world `w0`. `None` only when no world
    /// count admits a frame.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<KripkeModel> {
        let sizes: Vec<usize> = (1..=self.bounds.max_worlds)
            .filter(|&n| !self.table.get(n).is_empty())
            .collect();
        if sizes.is_empty() {
            return None;
        }
        let n = sizes[rng.gen_range(0..sizes.len())];
        let frames = self.table.get(n);
        let picked: Vec<&Frame> = self
            .bounds
            .agents
            .iter()
            .map(|_| &frames[rng.gen_range(0..frames.len())])
            .collect();
        let bits = n * self.bounds.atoms.len();
        let val = if bits == 0 { 0 } else { rng.gen::<u64>() & ((1u64 << bits) - 1) };
        Some(build_model(&self.bounds, n, &picked, val, 0))
    }
}

/// Number of admissible single-agent frames on `n` worlds.
pub fn frame_count(n: usize, constraints: &BTreeSet<FrameCondition>, guard: &SearchGuard) -> Result<usize, SearchError> {
    if n == 0 || n > MAX_WORLDS_HARD {
        return Err(SearchError::BoundsTooLarge(format!("{n} worlds")));
    }
    Ok(frames(n, constraints, guard)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::check_frames;
    use crate::semantics::{satisfies, PointedModel};

    fn all() -> BTreeSet<FrameCondition> {
        FrameCondition::all()
    }

    #[test]
    fn single_world_counts() {
        let b = SearchBounds::new(1, ["p"], ["i"], [FrameCondition::RkReflexive]);
        assert_eq!(enumerate_models(&b).unwrap().count(), 4);
        let b = SearchBounds::new(1, ["p"], ["i"], all());
        assert_eq!(enumerate_models(&b).unwrap().count(), 2);
    }

    #[test]
    fn frame_counts_under_all_conditions() {
        let g = SearchGuard::default();
        let counts: Vec<usize> = (1..=4).map(|n| frame_count(n, &all(), &g).unwrap()).collect();
        assert_eq!(counts, vec![1, 4, 26, 395]);
    }

    #[test]
    fn stream_respects_constraints() {
        let b = SearchBounds::new(3, ["p"], ["i"], all());
        for m in enumerate_models(&b).unwrap() {
            assert!(check_frames(&m).all_hold());
        }
    }

    #[test]
    fn t_axiom_exhausts() {
        let f = Formula::knows("i", Formula::atom("p")).implies(Formula::atom("p"));
        let b = SearchBounds::new(3, ["p"], ["i"], [FrameCondition::RkReflexive]);
        assert!(find_countermodel(&f, &b).unwrap().countermodel().is_none());
    }

    #[test]
    fn countermodel_falsifies() {
        let p = Formula::atom("p");
        let f = p.clone().not().implies(Formula::knows("i", p.not()));
        let b = SearchBounds::new(2, ["p"], ["i"], [FrameCondition::RkReflexive]);
        let out = find_countermodel(&f, &b).unwrap();
        let cm = out.countermodel().unwrap();
        assert_eq!(cm.world_count, 2);
        let pm = PointedModel::actual(cm.model.clone());
        assert!(!satisfies(&pm, &f, &ActionLibrary::new()).unwrap());
    }

    #[test]
    fn guard_rejects_large_bounds() {
        let b = SearchBounds::new(5, ["p"], ["i"], all());
        assert!(matches!(
            find_countermodel_guarded(&Formula::atom("p"), &b, &SearchGuard::default()),
            Err(SearchError::BoundsTooLarge(_))
        ));
    }

    #[test]
    fn out_of_bounds_names() {
        let b = SearchBounds::new(1, ["p"], ["i"], all());
        assert!(matches!(
            find_countermodel(&Formula::atom("q"), &b),
            Err(SearchError::AtomOutOfBounds(_))
        ));
    }
}
