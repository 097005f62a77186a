//! Parameterized systems: concrete transition semantics and the symbolic
//! successor/predecessor operators on counted words.

use std::fmt;

use crate::counters::{Alphabet, Counter, StateId};
use crate::error::{Error, Result};
use crate::meet::{insert_positions, insert_positions_unchecked, minimal_set};
use crate::words::{minus_unit, plus_unit, Configuration, CountedWord, Tuple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    ExistsL,
    ExistsR,
    ExistsLR,
    ForallL,
    ForallR,
    ForallLR,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::ExistsL => "exists_l",
            Quantifier::ExistsR => "exists_r",
            Quantifier::ExistsLR => "exists_lr",
            Quantifier::ForallL => "forall_l",
            Quantifier::ForallR => "forall_r",
            Quantifier::ForallLR => "forall_lr",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Quantifier> {
        Some(match word {
            "exists_l" => Quantifier::ExistsL,
            "exists_r" => Quantifier::ExistsR,
            "exists_lr" => Quantifier::ExistsLR,
            "forall_l" => Quantifier::ForallL,
            "forall_r" => Quantifier::ForallR,
            "forall_lr" => Quantifier::ForallLR,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Guard {
    pub quantifier: Quantifier,
    /// Sorted, without duplicates.
    pub witnesses: Vec<StateId>,
}

impl Guard {
    pub fn new(quantifier: Quantifier, witnesses: impl IntoIterator<Item = StateId>) -> Guard {
        let mut witnesses: Vec<StateId> = witnesses.into_iter().collect();
        witnesses.sort();
        witnesses.dedup();
        Guard { quantifier, witnesses }
    }

    fn contains(&self, q: StateId) -> bool {
        self.witnesses.binary_search(&q).is_ok()
    }

    fn holds(&self, left: &[StateId], right: &[StateId]) -> bool {
        let any = |side: &[StateId]| side.iter().any(|&q| self.contains(q));
        let all = |side: &[StateId]| side.iter().all(|&q| self.contains(q));
        match self.quantifier {
            Quantifier::ExistsL => any(left),
            Quantifier::ExistsR => any(right),
            Quantifier::ExistsLR => any(left) || any(right),
            Quantifier::ForallL => all(left),
            Quantifier::ForallR => all(right),
            Quantifier::ForallLR => all(left) && all(right),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub id: String,
    pub source: StateId,
    pub target: StateId,
    pub guard: Option<Guard>,
}

impl Transition {
    pub fn local(id: impl Into<String>, source: StateId, target: StateId) -> Transition {
        Transition {
            id: id.into(),
            source,
            target,
            guard: None,
        }
    }

    pub fn global(id: impl Into<String>, source: StateId, target: StateId, guard: Guard) -> Transition {
        Transition {
            id: id.into(),
            source,
            target,
            guard: Some(guard),
        }
    }

    /// Same guard, source and target swapped.
    pub fn reversed(&self) -> Transition {
        Transition {
            id: self.id.clone(),
            source: self.target,
            target: self.source,
            guard: self.guard.clone(),
        }
    }

    /// All `c'` with `c →_t c'`.
    pub fn step_concrete(&self, c: &Configuration) -> Vec<Configuration> {
        let letters = c.letters();
        let mut out = Vec::new();
        for (i, &q) in letters.iter().enumerate() {
            if q != self.source {
                continue;
            }
            if let Some(g) = &self.guard {
                if !g.holds(&letters[..i], &letters[i + 1..]) {
                    continue;
                }
            }
            let mut next = letters.to_vec();
            next[i] = self.target;
            out.push(Configuration(next));
        }
        out.sort();
        out.dedup();
        out
    }

    /// All `c` with `c →_t c'`.
    pub fn step_concrete_back(&self, c: &Configuration) -> Vec<Configuration> {
        self.reversed().step_concrete(c)
    }

    /// `post_t(φ)` for a strengthened well-formed `φ`.
    pub fn post_word(&self, phi: &CountedWord) -> Vec<CountedWord> {
        let width = phi.width();
        let (q, q2) = (self.source, self.target);
        let mut results = Vec::new();
        for ins in insert_positions(q, phi) {
            let (prefix, mid, suffix) = (ins.prefix, ins.inserted, ins.suffix);
            let Some(g) = &self.guard else {
                results.push(fire(width, prefix, mid, suffix, q, q2));
                continue;
            };
            let absent = Counter::absent(
                width,
                (0..width).map(StateId::from).filter(|&p| !g.contains(p)),
            );
            match g.quantifier {
                Quantifier::ForallL | Quantifier::ForallR | Quantifier::ForallLR => {
                    let (check_left, check_right) = match g.quantifier {
                        Quantifier::ForallL => (true, false),
                        Quantifier::ForallR => (false, true),
                        _ => (true, true),
                    };
                    let mut prefix = prefix;
                    let mut suffix = suffix;
                    let mut mid = mid;
                    if check_left {
                        if !prefix.iter().all(|t| g.contains(t.state)) {
                            continue;
                        }
                        for t in &mut prefix {
                            t.left = t.left.meet(&absent);
                        }
                        mid.left = mid.left.meet(&absent);
                    }
                    if check_right {
                        if !suffix.iter().all(|t| g.contains(t.state)) {
                            continue;
                        }
                        for t in &mut suffix {
                            t.right = t.right.meet(&absent);
                        }
                        mid.right = mid.right.meet(&absent);
                    }
                    results.push(fire(width, prefix, mid, suffix, q, q2));
                }
                Quantifier::ExistsL | Quantifier::ExistsR | Quantifier::ExistsLR => {
                    let left = matches!(g.quantifier, Quantifier::ExistsL | Quantifier::ExistsLR);
                    let right = matches!(g.quantifier, Quantifier::ExistsR | Quantifier::ExistsLR);
                    for &p in &g.witnesses {
                        if left {
                            let side = CountedWord::new(width, prefix.clone());
                            for w in insert_positions_unchecked(p, &side) {
                                let widened = w.into_word(width).into_tuples();
                                results.push(fire(width, widened, mid.clone(), suffix.clone(), q, q2));
                            }
                        }
                        if right {
                            let side = CountedWord::new(width, suffix.clone());
                            for w in insert_positions_unchecked(p, &side) {
                                let widened = w.into_word(width).into_tuples();
                                results.push(fire(width, prefix.clone(), mid.clone(), widened, q, q2));
                            }
                        }
                    }
                }
            }
        }
        let valid = results.into_iter().filter_map(|w| w.try_strengthen()).collect();
        minimal_set(valid)
    }

    /// `pre_t(φ)`: post of the reversed transition.
    pub fn pre_word(&self, phi: &CountedWord) -> Vec<CountedWord> {
        self.reversed().post_word(phi)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        TransitionDisplay { t: self, alphabet }
    }
}

/// Replaces the fired `q` by `q2` and shifts the counters that see it.
/// Returns a possibly ill-formed word; the caller filters.
fn fire(width: usize, prefix: Vec<Tuple>, mid: Tuple, suffix: Vec<Tuple>, q: StateId, q2: StateId) -> CountedWord {
    let mut tuples = Vec::with_capacity(prefix.len() + suffix.len() + 1);
    for mut t in prefix {
        t.right = minus_unit(&plus_unit(&t.right, q2), q);
        tuples.push(t);
    }
    tuples.push(Tuple::new(mid.left, q2, mid.right));
    for mut t in suffix {
        t.left = minus_unit(&plus_unit(&t.left, q2), q);
        tuples.push(t);
    }
    CountedWord::new(width, tuples)
}

struct TransitionDisplay<'a> {
    t: &'a Transition,
    alphabet: &'a Alphabet,
}

impl fmt::Display for TransitionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} -> {}",
            self.t.id,
            self.alphabet.name(self.t.source),
            self.alphabet.name(self.t.target)
        )?;
        if let Some(g) = &self.t.guard {
            write!(f, " {} {{", g.quantifier.keyword())?;
            for (i, p) in g.witnesses.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(self.alphabet.name(*p))?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

/// A parameterized system together with its initial and bad symbolic sets.
#[derive(Clone, Debug)]
pub struct ParameterizedSystem {
    pub name: String,
    pub alphabet: Alphabet,
    pub transitions: Vec<Transition>,
    pub init_state: StateId,
    pub init_set: Vec<CountedWord>,
    pub bad_set: Vec<CountedWord>,
}

impl ParameterizedSystem {
    pub fn new(
        name: impl Into<String>,
        alphabet: Alphabet,
        transitions: Vec<Transition>,
        init_state: StateId,
        init_set: Vec<CountedWord>,
        bad_set: Vec<CountedWord>,
    ) -> Result<ParameterizedSystem> {
        let width = alphabet.len();
        for w in init_set.iter().chain(&bad_set) {
            if w.width() != width {
                return Err(Error::AlphabetMismatch {
                    expected: width,
                    found: w.width(),
                });
            }
            if !w.is_well_formed() {
                return Err(Error::Semantic("symbolic sets must contain well-formed words".into()));
            }
        }
        if bad_set.is_empty() {
            return Err(Error::Semantic("at least one bad pattern is required".into()));
        }
        let init_set = minimal_set(init_set.iter().map(CountedWord::strengthen).collect());
        let bad_set = minimal_set(bad_set.iter().map(CountedWord::strengthen).collect());
        Ok(ParameterizedSystem {
            name: name.into(),
            alphabet,
            transitions,
            init_state,
            init_set,
            bad_set,
        })
    }

    pub fn width(&self) -> usize {
        self.alphabet.len()
    }

    /// `(cr_i, p_init, cr_i)` with `cr_i` pinning every other state to zero:
    /// denotes `p_init⁺`.
    pub fn default_init_word(alphabet: &Alphabet, init: StateId) -> CountedWord {
        let width = alphabet.len();
        let cr = Counter::absent(width, alphabet.states().filter(|&q| q != init));
        CountedWord::new(width, vec![Tuple::new(cr.clone(), init, cr)])
    }

    pub fn transition(&self, id: &str) -> Option<&Transition> {
        self.transitions.iter().find(|t| t.id == id)
    }

    pub fn initial_configuration(&self, n: usize) -> Configuration {
        Configuration(vec![self.init_state; n])
    }

    pub fn is_bad(&self, c: &Configuration) -> bool {
        self.bad_set.iter().any(|w| w.models(c))
    }

    pub fn is_initial(&self, c: &Configuration) -> bool {
        self.init_set.iter().any(|w| w.models(c))
    }

    /// All one-step successors under any transition, with the transition index.
    pub fn successors(&self, c: &Configuration) -> Vec<(usize, Configuration)> {
        self.transitions
            .iter()
            .enumerate()
            .flat_map(|(i, t)| t.step_concrete(c).into_iter().map(move |d| (i, d)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"])
    }

    fn c(text: &str, alphabet: &Alphabet) -> Configuration {
        Configuration::parse(text, alphabet).unwrap()
    }

    #[test]
    fn local_step() {
        let a = ab();
        let t = Transition::local("t", StateId(0), StateId(1));
        assert_eq!(t.step_concrete(&c("a a", &a)), vec![c("a b", &a), c("b a", &a)]);
    }

    #[test]
    fn forall_right_step() {
        let q = Alphabet::new(["q1", "q2", "q3", "q5", "q6"]);
        let ids = |names: &[&str]| names.iter().map(|n| q.lookup(n).unwrap()).collect::<Vec<_>>();
        let t = Transition::global(
            "t",
            q.lookup("q5").unwrap(),
            q.lookup("q6").unwrap(),
            Guard::new(Quantifier::ForallR, ids(&["q1", "q2", "q3"])),
        );
        assert_eq!(t.step_concrete(&c("q5 q5", &q)), vec![c("q5 q6", &q)]);
    }

    #[test]
    fn exists_left_needs_a_left_neighbour() {
        let a = ab();
        let t = Transition::global("t", StateId(0), StateId(1), Guard::new(Quantifier::ExistsL, [StateId(0)]));
        assert!(t.step_concrete(&c("a", &a)).is_empty());
        assert_eq!(t.step_concrete(&c("a a", &a)), vec![c("a b", &a)]);
    }

    #[test]
    fn post_reaches_one_critical_process() {
        let q = Alphabet::new(["q1", "q2", "q3", "q5", "q6"]);
        let id = |n: &str| q.lookup(n).unwrap();
        let t = Transition::global("t", id("q5"), id("q6"), Guard::new(Quantifier::ForallR, [id("q1"), id("q2"), id("q3")]));
        let plus = ParameterizedSystem::default_init_word(&q, id("q5"));
        let post = t.post_word(&plus);
        assert_eq!(post.len(), 1);
        let phi1 = CountedWord::parse("(q1=0, q2=0, q3=0, q6=0 | q6 | q1=0, q2=0, q3=0, q5=0, q6=0)", &q).unwrap();
        assert_eq!(post[0], phi1);
    }

    #[test]
    fn post_of_absent_source_is_empty() {
        let a = ab();
        let t = Transition::local("t", StateId(1), StateId(0));
        let w = CountedWord::parse("(b=0 | a | b=0)", &a).unwrap();
        assert!(t.post_word(&w).is_empty());
    }
}
