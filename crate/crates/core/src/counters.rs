//! Counters: per-state `v_q = k` / `v_q >= k` constraints on Parikh images.
//!
//! A counter constrains each state independently, so every operation here is
//! a pointwise case table over atoms. `Counter::Bottom` is the unsatisfiable
//! counter; any per-state contradiction collapses the whole counter to it.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Index of a local state in the owning system's alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u16);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for StateId {
    fn from(i: usize) -> Self {
        StateId(u16::try_from(i).expect("state index out of range"))
    }
}

/// The ordered set of local states together with their display names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Alphabet {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name).map(StateId::from)
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.names.len()).map(StateId::from)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// A single per-state predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Eq(u32),
    Geq(u32),
}

impl Atom {
    pub fn holds(self, v: u32) -> bool {
        match self {
            Atom::Eq(k) => v == k,
            Atom::Geq(k) => v >= k,
        }
    }

    /// `None` when the conjunction is unsatisfiable.
    pub fn meet(self, other: Atom) -> Option<Atom> {
        match (self, other) {
            (Atom::Eq(a), Atom::Eq(b)) => (a == b).then_some(Atom::Eq(a)),
            (Atom::Eq(a), Atom::Geq(k)) | (Atom::Geq(k), Atom::Eq(a)) => {
                (a >= k).then_some(Atom::Eq(a))
            }
            (Atom::Geq(a), Atom::Geq(b)) => Some(Atom::Geq(a.max(b))),
        }
    }

    /// Whether `stronger` implies `self`.
    pub fn is_implied_by(self, stronger: Atom) -> bool {
        match (self, stronger) {
            (Atom::Eq(a), Atom::Eq(b)) => a == b,
            (Atom::Eq(_), Atom::Geq(_)) => false,
            (Atom::Geq(k), Atom::Eq(a)) => a >= k,
            (Atom::Geq(k), Atom::Geq(k2)) => k2 >= k,
        }
    }

    pub fn plus(self, other: Atom) -> Atom {
        match (self, other) {
            (Atom::Eq(a), Atom::Eq(b)) => Atom::Eq(a + b),
            (Atom::Eq(a), Atom::Geq(b)) | (Atom::Geq(a), Atom::Eq(b)) | (Atom::Geq(a), Atom::Geq(b)) => {
                Atom::Geq(a + b)
            }
        }
    }

    /// Pointwise difference. The second component is `false` when the result
    /// strictly over-approximates the exact set of differences.
    pub fn minus(self, other: Atom) -> (Option<Atom>, bool) {
        match (self, other) {
            (Atom::Eq(a), Atom::Eq(b)) => ((a >= b).then(|| Atom::Eq(a - b)), true),
            (Atom::Geq(a), Atom::Eq(b)) => (Some(Atom::Geq(a.saturating_sub(b))), true),
            (Atom::Geq(_), Atom::Geq(_)) => (Some(Atom::Geq(0)), true),
            (Atom::Eq(a), Atom::Geq(b)) => {
                if a < b {
                    (None, true)
                } else if a == b {
                    (Some(Atom::Eq(0)), true)
                } else {
                    // exact set is the interval [0, a - b]
                    (Some(Atom::Geq(0)), false)
                }
            }
        }
    }

    /// 0 for `>=` atoms, `k + 1` for `= k`.
    pub fn precision(self) -> u32 {
        match self {
            Atom::Eq(k) => k + 1,
            Atom::Geq(_) => 0,
        }
    }

    pub fn relax(self, threshold: u32) -> Atom {
        match self {
            Atom::Eq(k) if k >= threshold => Atom::Geq(k),
            a => a,
        }
    }
}

pub(crate) type Atoms = SmallVec<[Atom; 16]>;

/// A conjunction of one atom per state, or the unsatisfiable counter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Counter {
    Bottom,
    Atoms(Atoms),
}

impl Counter {
    pub fn top(width: usize) -> Counter {
        Counter::Atoms(SmallVec::from_elem(Atom::Geq(0), width))
    }

    pub fn bottom() -> Counter {
        Counter::Bottom
    }

    /// All-`= 0`: satisfied only by the empty multiset.
    pub fn zero(width: usize) -> Counter {
        Counter::Atoms(SmallVec::from_elem(Atom::Eq(0), width))
    }

    /// `cr_q`: exactly one occurrence of `q` and nothing else.
    pub fn unit(width: usize, q: StateId) -> Counter {
        let mut atoms: Atoms = SmallVec::from_elem(Atom::Eq(0), width);
        atoms[q.index()] = Atom::Eq(1);
        Counter::Atoms(atoms)
    }

    /// `0_P`: `v_q = 0` for `q` in `states`, unconstrained elsewhere.
    pub fn absent(width: usize, states: impl IntoIterator<Item = StateId>) -> Counter {
        let mut atoms: Atoms = SmallVec::from_elem(Atom::Geq(0), width);
        for q in states {
            atoms[q.index()] = Atom::Eq(0);
        }
        Counter::Atoms(atoms)
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Counter {
        Counter::Atoms(atoms.into_iter().collect())
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Counter::Bottom)
    }

    pub fn is_top(&self) -> bool {
        match self {
            Counter::Bottom => false,
            Counter::Atoms(a) => a.iter().all(|&x| x == Atom::Geq(0)),
        }
    }

    pub fn atoms(&self) -> Option<&[Atom]> {
        match self {
            Counter::Bottom => None,
            Counter::Atoms(a) => Some(a),
        }
    }

    pub fn atom(&self, q: StateId) -> Option<Atom> {
        self.atoms().map(|a| a[q.index()])
    }

    /// Number of states; `None` for bottom.
    pub fn width(&self) -> Option<usize> {
        self.atoms().map(<[Atom]>::len)
    }

    fn check_width(&self, other: &Counter) {
        if let (Some(a), Some(b)) = (self.width(), other.width()) {
            assert_eq!(a, b, "counters over different alphabets");
        }
    }

    fn zip_with(&self, other: &Counter, f: impl Fn(Atom, Atom) -> Option<Atom>) -> Counter {
        self.check_width(other);
        match (self, other) {
            (Counter::Atoms(a), Counter::Atoms(b)) => {
                let mut out = Atoms::with_capacity(a.len());
                for (&x, &y) in a.iter().zip(b.iter()) {
                    match f(x, y) {
                        Some(z) => out.push(z),
                        None => return Counter::Bottom,
                    }
                }
                Counter::Atoms(out)
            }
            _ => Counter::Bottom,
        }
    }

    pub fn satisfies(&self, m: &Multiset) -> Result<bool> {
        match self {
            Counter::Bottom => Ok(false),
            Counter::Atoms(a) => {
                if a.len() != m.len() {
                    return Err(Error::AlphabetMismatch {
                        expected: a.len(),
                        found: m.len(),
                    });
                }
                Ok(self.accepts(m.counts()))
            }
        }
    }

    /// Unchecked satisfaction on a raw count vector of the right width.
    pub(crate) fn accepts(&self, counts: &[u32]) -> bool {
        match self {
            Counter::Bottom => false,
            Counter::Atoms(a) => a.iter().zip(counts).all(|(atom, &v)| atom.holds(v)),
        }
    }

    pub fn meet(&self, other: &Counter) -> Counter {
        self.zip_with(other, Atom::meet)
    }

    /// `self ⊑ other`: `other` implies `self`, so `[[other]] ⊆ [[self]]`.
    pub fn is_entailed_by(&self, other: &Counter) -> bool {
        self.check_width(other);
        match (self, other) {
            (_, Counter::Bottom) => true,
            (Counter::Bottom, _) => false,
            (Counter::Atoms(a), Counter::Atoms(b)) => {
                a.iter().zip(b.iter()).all(|(&x, &y)| x.is_implied_by(y))
            }
        }
    }

    pub fn plus(&self, other: &Counter) -> Counter {
        self.zip_with(other, |x, y| Some(x.plus(y)))
    }

    pub fn minus(&self, other: &Counter) -> Counter {
        self.minus_checked(other).0
    }

    /// Difference together with an exactness flag; the flag is `false` when
    /// some state hit the `Eq(a) - Geq(b)`, `a > b` case.
    pub fn minus_checked(&self, other: &Counter) -> (Counter, bool) {
        self.check_width(other);
        match (self, other) {
            (Counter::Atoms(a), Counter::Atoms(b)) => {
                let mut exact = true;
                let mut out = Atoms::with_capacity(a.len());
                for (&x, &y) in a.iter().zip(b.iter()) {
                    let (z, e) = x.minus(y);
                    exact &= e;
                    match z {
                        Some(z) => out.push(z),
                        None => return (Counter::Bottom, true),
                    }
                }
                (Counter::Atoms(out), exact)
            }
            _ => (Counter::Bottom, true),
        }
    }

    pub fn precision(&self) -> Result<Multiset> {
        match self {
            Counter::Bottom => Err(Error::BottomCounter),
            Counter::Atoms(a) => Ok(Multiset(a.iter().map(|x| x.precision()).collect())),
        }
    }

    /// Membership in `cxt(cr)`: the atom at `q` is a `>=`.
    pub fn allows_more(&self, q: StateId) -> bool {
        matches!(self.atom(q), Some(Atom::Geq(_)))
    }

    pub fn context(&self) -> Result<Vec<StateId>> {
        match self {
            Counter::Bottom => Err(Error::BottomCounter),
            Counter::Atoms(a) => Ok(a
                .iter()
                .enumerate()
                .filter(|(_, x)| matches!(x, Atom::Geq(_)))
                .map(|(i, _)| StateId::from(i))
                .collect()),
        }
    }

    pub fn relax(&self, rho: &Resolution) -> Counter {
        match self {
            Counter::Bottom => Counter::Bottom,
            Counter::Atoms(a) => {
                assert_eq!(a.len(), rho.len(), "resolution over a different alphabet");
                Counter::Atoms(
                    a.iter()
                        .zip(rho.thresholds())
                        .map(|(&x, &t)| x.relax(t))
                        .collect(),
                )
            }
        }
    }

    /// Largest `κ(cr)(q)` over all states; 0 for bottom.
    pub fn max_precision(&self) -> u32 {
        self.atoms()
            .map(|a| a.iter().map(|x| x.precision()).max().unwrap_or(0))
            .unwrap_or(0)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> CounterDisplay<'a> {
        CounterDisplay {
            counter: self,
            alphabet,
        }
    }
}

/// Canonical rendering: comma-separated `q=k` / `q>=k`, `>=0` omitted,
/// `false` for bottom.
pub struct CounterDisplay<'a> {
    counter: &'a Counter,
    alphabet: &'a Alphabet,
}

impl fmt::Display for CounterDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms = match self.counter {
            Counter::Bottom => return f.write_str("false"),
            Counter::Atoms(a) => a,
        };
        let mut first = true;
        for (i, atom) in atoms.iter().enumerate() {
            let name = self.alphabet.name(StateId::from(i));
            let text = match atom {
                Atom::Geq(0) => continue,
                Atom::Geq(k) => format!("{name}>={k}"),
                Atom::Eq(k) => format!("{name}={k}"),
            };
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            f.write_str(&text)?;
        }
        Ok(())
    }
}

/// A multiset over the alphabet, stored as a dense count vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Multiset(Vec<u32>);

impl Multiset {
    pub fn zero(width: usize) -> Multiset {
        Multiset(vec![0; width])
    }

    pub fn from_counts(counts: Vec<u32>) -> Multiset {
        Multiset(counts)
    }

    /// Parikh image of a word.
    pub fn parikh(width: usize, word: &[StateId]) -> Multiset {
        let mut m = Multiset::zero(width);
        for q in word {
            m.0[q.index()] += 1;
        }
        m
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, q: StateId) -> u32 {
        self.0[q.index()]
    }

    pub fn set(&mut self, q: StateId, v: u32) {
        self.0[q.index()] = v;
    }

    pub fn is_included_in(&self, other: &Multiset) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn union(&self, other: &Multiset) -> Multiset {
        Multiset(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `None` unless `other ⊆ self`.
    pub fn difference(&self, other: &Multiset) -> Option<Multiset> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Multiset)
    }

    pub fn pointwise_max(&self, other: &Multiset) -> Multiset {
        Multiset(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }
}

/// Per-state thresholds of the relaxation operator: an `= k` atom survives
/// relaxation only while `k < threshold`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Resolution(Vec<u32>);

impl Resolution {
    pub fn zero(width: usize) -> Resolution {
        Resolution(vec![0; width])
    }

    pub fn from_thresholds(t: Vec<u32>) -> Resolution {
        Resolution(t)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn thresholds(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, q: StateId) -> u32 {
        self.0[q.index()]
    }

    pub fn set(&mut self, q: StateId, v: u32) {
        self.0[q.index()] = v;
    }

    pub fn max_threshold(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn is_included_in(&self, other: &Resolution) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Resolution) -> Resolution {
        Resolution(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Pointwise `>=` with at least one strict increase.
    pub fn strictly_refines(&self, coarser: &Resolution) -> bool {
        coarser.is_included_in(self) && self != coarser
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        ResolutionDisplay {
            rho: self,
            alphabet,
        }
    }
}

struct ResolutionDisplay<'a> {
    rho: &'a Resolution,
    alphabet: &'a Alphabet,
}

impl fmt::Display for ResolutionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        f.write_str("{")?;
        for (i, &t) in self.rho.0.iter().enumerate() {
            if t == 0 {
                continue;
            }
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{}:{}", self.alphabet.name(StateId::from(i)), t)?;
        }
        f.write_str("}")
    }
}
