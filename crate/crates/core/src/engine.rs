//! The reachability checker, the trace analyzer, and the refinement loop
//! tying them together, in forward or backward direction.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::counters::{Multiset, Resolution, StateId};
use crate::error::{Error, Result};
use crate::meet::{meet_sets, sets_meet};
use crate::separation::{xi, Separation};
use crate::system::{ParameterizedSystem, Transition};
use crate::words::{Configuration, CountedWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Direction> {
        match s {
            "forward" => Ok(Direction::Forward),
            "backward" => Ok(Direction::Backward),
            other => Err(Error::Usage(format!("unknown direction `{other}`"))),
        }
    }
}

/// The direction-dependent wiring: where the search starts, what it tries
/// to hit, and which symbolic step it takes.
struct Roles<'a> {
    sys: &'a ParameterizedSystem,
    direction: Direction,
}

impl Roles<'_> {
    fn source(&self) -> &[CountedWord] {
        match self.direction {
            Direction::Forward => &self.sys.init_set,
            Direction::Backward => &self.sys.bad_set,
        }
    }

    fn target(&self) -> &[CountedWord] {
        match self.direction {
            Direction::Forward => &self.sys.bad_set,
            Direction::Backward => &self.sys.init_set,
        }
    }

    fn step(&self, t: &Transition, w: &CountedWord) -> Vec<CountedWord> {
        match self.direction {
            Direction::Forward => t.post_word(w),
            Direction::Backward => t.pre_word(w),
        }
    }

    fn step_back(&self, t: &Transition, w: &CountedWord) -> Vec<CountedWord> {
        match self.direction {
            Direction::Forward => t.pre_word(w),
            Direction::Backward => t.post_word(w),
        }
    }

    fn concrete_step(&self, t: &Transition, c: &Configuration) -> Vec<Configuration> {
        match self.direction {
            Direction::Forward => t.step_concrete(c),
            Direction::Backward => t.step_concrete_back(c),
        }
    }
}

/// `e₀ · t₁ · e₁ ⋯ e_m`; `transitions[i]` indexes into the system's list
/// and leads from `words[i]` to `words[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub words: Vec<CountedWord>,
    pub transitions: Vec<usize>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    /// The trace shape used for the no-repeat check: bases and transitions.
    pub fn signature(&self) -> (Vec<Vec<u16>>, Vec<usize>) {
        (
            self.words.iter().map(|w| w.base().iter().map(|q| q.0).collect()).collect(),
            self.transitions.clone(),
        )
    }

    pub fn render(&self, sys: &ParameterizedSystem) -> String {
        let mut out = String::new();
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                let t = &sys.transitions[self.transitions[i - 1]];
                out.push_str(&format!("  --{}-->\n", t.id));
            }
            out.push_str(&format!("  {}\n", w.display(&sys.alphabet)));
        }
        out
    }
}

#[derive(Debug)]
struct Node {
    word: CountedWord,
    base: Vec<StateId>,
    parikh: Multiset,
    /// Bit `q mod 128` set when `q` occurs in the base.
    mask: u128,
    transition: Option<usize>,
    parent: Option<Arc<Node>>,
    /// Cleared once a weaker word enters the search.
    live: AtomicBool,
}

impl Node {
    fn trace(&self) -> Trace {
        let mut words = vec![self.word.clone()];
        let mut transitions = Vec::new();
        let mut cur = self;
        while let (Some(t), Some(p)) = (cur.transition, cur.parent.as_deref()) {
            transitions.push(t);
            words.push(p.word.clone());
            cur = p;
        }
        words.reverse();
        transitions.reverse();
        Trace { words, transitions }
    }

    /// `self.word ⊑ other.word`, with a Parikh pre-filter.
    fn entailed_by(&self, other: &Node) -> bool {
        self.mask & !other.mask == 0
            && self.word.len() <= other.word.len()
            && self.parikh.is_included_in(&other.parikh)
            && self.word.is_entailed_by(&other.word)
    }
}

fn node(word: CountedWord, transition: Option<usize>, parent: Option<Arc<Node>>) -> Arc<Node> {
    let base = word.base();
    let parikh = Multiset::parikh(word.width(), &base);
    let mask = base.iter().fold(0u128, |m, q| m | 1u128 << (q.index() % 128));
    Arc::new(Node {
        word,
        base,
        parikh,
        mask,
        live: AtomicBool::new(true),
        transition,
        parent,
    })
}

/// Bases longer than this are checked by a full scan instead of a
/// subsequence lookup.
const SUBSEQUENCE_LOOKUP_LIMIT: usize = 12;

fn is_subsequence(short: &[StateId], long: &[StateId]) -> bool {
    let mut it = long.iter();
    short.iter().all(|q| it.any(|p| p == q))
}

fn subsequences(base: &[StateId]) -> HashSet<Vec<StateId>> {
    let mut out = HashSet::new();
    for bits in 0u32..(1 << base.len()) {
        out.insert(
            base.iter()
                .enumerate()
                .filter(|(i, _)| bits & (1 << i) != 0)
                .map(|(_, &q)| q)
                .collect(),
        );
    }
    out
}

/// The minimal set `W ∪ V`, indexed by base. A word can only be entailed by
/// words whose base is a subsequence of its own.
#[derive(Default)]
struct Antichain {
    by_base: HashMap<Vec<StateId>, Vec<Arc<Node>>>,
    len: usize,
}

impl Antichain {
    fn covers(&self, n: &Node) -> bool {
        let hit = |nodes: &Vec<Arc<Node>>| nodes.iter().any(|o| o.entailed_by(n));
        if n.base.len() > SUBSEQUENCE_LOOKUP_LIMIT {
            return self
                .by_base
                .iter()
                .any(|(base, nodes)| base.len() <= n.base.len() && hit(nodes));
        }
        subsequences(&n.base)
            .iter()
            .any(|s| self.by_base.get(s).is_some_and(hit))
    }

    /// Inserts `n`, dropping (and marking dead) every entry it entails.
    fn insert(&mut self, n: Arc<Node>) {
        let mut removed = 0;
        for (base, nodes) in self.by_base.iter_mut() {
            if base.len() < n.base.len() || !is_subsequence(&n.base, base) {
                continue;
            }
            nodes.retain(|o| {
                let keep = !n.entailed_by(o);
                if !keep {
                    o.live.store(false, Ordering::Relaxed);
                    removed += 1;
                }
                keep
            });
        }
        self.by_base.retain(|_, nodes| !nodes.is_empty());
        self.len = self.len + 1 - removed;
        self.by_base.entry(n.base.clone()).or_default().push(n);
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckStats {
    pub iterations: u64,
    pub words: u64,
    #[serde(with = "duration_secs")]
    pub elapsed: Duration,
}

mod duration_secs {
    use serde::Serializer;
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }
}

#[derive(Clone, Debug)]
pub enum CheckOutcome {
    Unreachable,
    Trace(Trace),
    BudgetExhausted,
}

/// One run of the worklist algorithm with a fixed resolution. Source words
/// are used unrelaxed; every successor is relaxed before insertion.
pub fn check_reachability(
    sys: &ParameterizedSystem,
    rho: &Resolution,
    direction: Direction,
    deadline: Option<Instant>,
) -> (CheckOutcome, CheckStats) {
    let roles = Roles { sys, direction };
    let start = Instant::now();
    let mut stats = CheckStats::default();
    let mut work: VecDeque<Arc<Node>> = VecDeque::new();
    let mut seen = Antichain::default();
    for e in roles.source() {
        let n = node(e.clone(), None, None);
        if !seen.covers(&n) {
            seen.insert(n.clone());
            work.push_back(n);
        }
    }
    let outcome = loop {
        let Some(current) = work.pop_front() else {
            break CheckOutcome::Unreachable;
        };
        if !current.live.load(Ordering::Relaxed) {
            continue;
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break CheckOutcome::BudgetExhausted;
        }
        stats.iterations += 1;
        if stats.iterations % 500 == 0 {
            tracing::debug!(
                iterations = stats.iterations,
                stored = seen.len,
                queued = work.len(),
                length = current.word.len(),
                "search progress"
            );
        }
        if sets_meet(std::slice::from_ref(&current.word), roles.target()) {
            break CheckOutcome::Trace(current.trace());
        }
        let word = &current.word;
        let successors: Vec<(usize, Vec<CountedWord>)> = sys
            .transitions
            .par_iter()
            .enumerate()
            .map(|(ti, t)| {
                let next = roles.step(t, word).iter().map(|w| w.relax(rho)).collect();
                (ti, next)
            })
            .collect();
        for (ti, words) in successors {
            for w in words {
                stats.words += 1;
                let n = node(w, Some(ti), Some(current.clone()));
                if seen.covers(&n) {
                    continue;
                }
                seen.insert(n.clone());
                work.push_back(n);
            }
        }
    };
    stats.elapsed = start.elapsed();
    (outcome, stats)
}

/// A concrete run from an initial to a bad configuration.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub trace: Trace,
    /// Configurations in execution order, `run[0]` initial and the last bad.
    pub run: Vec<Configuration>,
    /// `transitions[i]` leads from `run[i]` to `run[i + 1]`.
    pub transitions: Vec<usize>,
}

impl Counterexample {
    /// Replays the run with the concrete semantics.
    pub fn replays(&self, sys: &ParameterizedSystem) -> bool {
        let Some(first) = self.run.first() else {
            return false;
        };
        let n = first.len();
        if *first != sys.initial_configuration(n) && !sys.is_initial(first) {
            return false;
        }
        if !sys.is_bad(self.run.last().unwrap()) {
            return false;
        }
        self.run
            .windows(2)
            .zip(&self.transitions)
            .all(|(pair, &t)| sys.transitions[t].step_concrete(&pair[0]).contains(&pair[1]))
    }
}

#[derive(Clone, Debug)]
pub enum Analysis {
    Reachable(Counterexample),
    Refined(Separation),
}

/// Simulates a trace in the exact semantics, from its last word back to
/// its first. Returns a concrete counterexample or a stronger resolution.
pub fn analyze_trace(
    sys: &ParameterizedSystem,
    trace: &Trace,
    rho: &Resolution,
    direction: Direction,
) -> Result<Analysis> {
    let roles = Roles { sys, direction };
    let m = trace.len();
    let mut current = meet_sets(std::slice::from_ref(&trace.words[m]), roles.target());
    if current.is_empty() {
        return Err(Error::Usage("the trace does not reach the target set".into()));
    }
    // layers[i] holds the exact set at position i (filled from the back)
    let mut layers: Vec<Vec<CountedWord>> = vec![Vec::new(); m + 1];
    layers[m] = current.clone();
    for i in (0..m).rev() {
        let t = &sys.transitions[trace.transitions[i]];
        let stepped: Vec<CountedWord> = current.iter().flat_map(|e| roles.step_back(t, e)).collect();
        let predecessor = meet_sets(&stepped, std::slice::from_ref(&trace.words[i]));
        if predecessor.is_empty() {
            tracing::debug!(position = i, transition = %t.id, "trace refuted");
            let forward = roles.step(t, &trace.words[i]);
            return xi(&forward, &current, rho).map(Analysis::Refined);
        }
        current = predecessor;
        layers[i] = current.clone();
    }
    let inter = meet_sets(&current, roles.source());
    if inter.is_empty() {
        return xi(std::slice::from_ref(&trace.words[0]), roles.source(), rho).map(Analysis::Refined);
    }
    let mut configs = vec![inter[0].base_config()];
    for i in 0..m {
        let t = &sys.transitions[trace.transitions[i]];
        let next = roles
            .concrete_step(t, &configs[i])
            .into_iter()
            .find(|c| layers[i + 1].iter().any(|w| w.models(c)))
            .ok_or_else(|| Error::Usage("exact layers admit no concrete continuation".into()))?;
        configs.push(next);
    }
    let mut transitions = trace.transitions.clone();
    if direction == Direction::Backward {
        configs.reverse();
        transitions.reverse();
    }
    Ok(Analysis::Reachable(Counterexample {
        trace: trace.clone(),
        run: configs,
        transitions,
    }))
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub direction: Direction,
    pub initial: Option<Resolution>,
    /// Wall-clock budget for each reachability check.
    pub budget: Duration,
    pub max_refinements: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions {
            direction: Direction::Backward,
            initial: None,
            budget: Duration::from_secs(1200),
            max_refinements: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RoundOutcome {
    /// A trace was found and refuted (`?`).
    #[serde(rename = "?")]
    Spurious,
    /// No trace exists (`√`).
    #[serde(rename = "√")]
    Safe,
    /// The budget ran out (`×`).
    #[serde(rename = "×")]
    Exhausted,
    /// The trace is realizable.
    #[serde(rename = "reachable")]
    Reachable,
}

impl RoundOutcome {
    pub fn symbol(self) -> &'static str {
        match self {
            RoundOutcome::Spurious => "?",
            RoundOutcome::Safe => "√",
            RoundOutcome::Exhausted => "×",
            RoundOutcome::Reachable => "reachable",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Round {
    pub index: usize,
    pub resolution: Resolution,
    pub stats: CheckStats,
    pub outcome: RoundOutcome,
    pub trace: Option<Trace>,
    pub separation: Option<Separation>,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Unreachable,
    Reachable(Box<Counterexample>),
    BudgetExhausted(CheckStats),
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Unreachable => 0,
            Verdict::Reachable(_) => 1,
            Verdict::BudgetExhausted(_) => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Unreachable => "unreachable",
            Verdict::Reachable(_) => "reachable",
            Verdict::BudgetExhausted(_) => "budget_exhausted",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub verdict: Verdict,
    pub rounds: Vec<Round>,
}

impl VerifyReport {
    pub fn refinements(&self) -> usize {
        self.rounds.len()
    }

    /// Whether some trace shape was produced twice.
    pub fn has_repeated_trace(&self) -> bool {
        let mut seen = HashSet::new();
        self.rounds
            .iter()
            .filter_map(|r| r.trace.as_ref())
            .any(|t| !seen.insert(t.signature()))
    }
}

/// The refinement loop: check, analyze, refine until a verdict.
pub fn verify(sys: &ParameterizedSystem, options: &VerifyOptions) -> Result<VerifyReport> {
    let mut rho = options.initial.clone().unwrap_or_else(|| Resolution::zero(sys.width()));
    if rho.len() != sys.width() {
        return Err(Error::AlphabetMismatch {
            expected: sys.width(),
            found: rho.len(),
        });
    }
    let mut rounds = Vec::new();
    loop {
        let index = rounds.len() + 1;
        let deadline = Instant::now() + options.budget;
        let (outcome, stats) = check_reachability(sys, &rho, options.direction, Some(deadline));
        tracing::info!(
            round = index,
            iterations = stats.iterations,
            words = stats.words,
            elapsed = ?stats.elapsed,
            "reachability check finished"
        );
        let mut round = Round {
            index,
            resolution: rho.clone(),
            stats,
            outcome: RoundOutcome::Safe,
            trace: None,
            separation: None,
        };
        match outcome {
            CheckOutcome::Unreachable => {
                rounds.push(round);
                return Ok(VerifyReport {
                    verdict: Verdict::Unreachable,
                    rounds,
                });
            }
            CheckOutcome::BudgetExhausted => {
                round.outcome = RoundOutcome::Exhausted;
                rounds.push(round);
                return Ok(VerifyReport {
                    verdict: Verdict::BudgetExhausted(stats),
                    rounds,
                });
            }
            CheckOutcome::Trace(trace) => {
                let analysis = analyze_trace(sys, &trace, &rho, options.direction)?;
                round.trace = Some(trace);
                match analysis {
                    Analysis::Reachable(cex) => {
                        round.outcome = RoundOutcome::Reachable;
                        rounds.push(round);
                        return Ok(VerifyReport {
                            verdict: Verdict::Reachable(Box::new(cex)),
                            rounds,
                        });
                    }
                    Analysis::Refined(sep) => {
                        round.outcome = RoundOutcome::Spurious;
                        tracing::info!(round = index, resolution = ?sep.resolution, "refined");
                        rho = sep.resolution.clone();
                        round.separation = Some(sep);
                        rounds.push(round);
                    }
                }
            }
        }
        if options.max_refinements.is_some_and(|max| rounds.len() >= max) {
            let stats = rounds.last().map(|r| r.stats).unwrap_or_default();
            return Ok(VerifyReport {
                verdict: Verdict::BudgetExhausted(stats),
                rounds,
            });
        }
    }
}
