//! Counted words: sequences of `(left counter, state, right counter)` tuples.
//!
//! A configuration `w` is in the denotation of a counted word when the base
//! embeds into `w` through an increasing injection such that every left
//! (right) counter accepts the Parikh image of `w` strictly before (after)
//! the image position.

use std::fmt;

use crate::counters::{Alphabet, Atom, Counter, Multiset, Resolution, StateId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tuple {
    pub left: Counter,
    pub state: StateId,
    pub right: Counter,
}

impl Tuple {
    pub fn new(left: Counter, state: StateId, right: Counter) -> Tuple {
        Tuple { left, state, right }
    }
}

/// A configuration: one local state per process, ordered by array index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Configuration(pub Vec<StateId>);

impl Configuration {
    pub fn new(letters: Vec<StateId>) -> Configuration {
        Configuration(letters)
    }

    pub fn letters(&self) -> &[StateId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Configuration> {
        text.split_whitespace()
            .map(|name| {
                alphabet
                    .lookup(name)
                    .ok_or_else(|| Error::Semantic(format!("undeclared state `{name}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Configuration)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        ConfigurationDisplay {
            config: self,
            alphabet,
        }
    }
}

struct ConfigurationDisplay<'a> {
    config: &'a Configuration,
    alphabet: &'a Alphabet,
}

impl fmt::Display for ConfigurationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.config.is_empty() {
            return f.write_str("ε");
        }
        for (i, q) in self.config.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.alphabet.name(*q))?;
        }
        Ok(())
    }
}

/// Order in which adjacent pairs are visited during strengthening.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepOrder {
    LeftToRight,
    RightToLeft,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountedWord {
    width: usize,
    tuples: Vec<Tuple>,
}

impl CountedWord {
    pub fn epsilon(width: usize) -> CountedWord {
        CountedWord {
            width,
            tuples: Vec::new(),
        }
    }

    pub fn new(width: usize, tuples: Vec<Tuple>) -> CountedWord {
        debug_assert!(tuples.iter().all(|t| {
            t.left.width().map_or(true, |w| w == width) && t.right.width().map_or(true, |w| w == width)
        }));
        CountedWord { width, tuples }
    }

    /// The word over `base` whose counters all read `>= 0`.
    pub fn upward_closure(width: usize, base: &[StateId]) -> CountedWord {
        let tuples = base
            .iter()
            .map(|&q| Tuple::new(Counter::top(width), q, Counter::top(width)))
            .collect();
        CountedWord { width, tuples }
    }

    /// The word over `base` whose counters pin the exact prefix and suffix
    /// Parikh images. Denotes `{base}` only.
    pub fn exact(width: usize, base: &[StateId]) -> CountedWord {
        let total = Multiset::parikh(width, base);
        let mut prefix = Multiset::zero(width);
        let mut tuples = Vec::with_capacity(base.len());
        for &q in base {
            let mut suffix = total.difference(&prefix).expect("prefix within total");
            suffix.set(q, suffix.get(q) - 1);
            tuples.push(Tuple::new(
                Counter::from_atoms(prefix.counts().iter().map(|&k| Atom::Eq(k))),
                q,
                Counter::from_atoms(suffix.counts().iter().map(|&k| Atom::Eq(k))),
            ));
            prefix.set(q, prefix.get(q) + 1);
        }
        CountedWord { width, tuples }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn into_tuples(self) -> Vec<Tuple> {
        self.tuples
    }

    pub fn base(&self) -> Vec<StateId> {
        self.tuples.iter().map(|t| t.state).collect()
    }

    pub fn base_config(&self) -> Configuration {
        Configuration(self.base())
    }

    /// `lc(φ)`: the first left counter, or top for ε.
    pub fn lc(&self) -> Counter {
        self.tuples
            .first()
            .map_or_else(|| Counter::top(self.width), |t| t.left.clone())
    }

    /// `rc(φ)`: the last right counter, or top for ε.
    pub fn rc(&self) -> Counter {
        self.tuples
            .last()
            .map_or_else(|| Counter::top(self.width), |t| t.right.clone())
    }

    pub fn is_well_formed(&self) -> bool {
        let base = self.base();
        let total = Multiset::parikh(self.width, &base);
        let mut prefix = vec![0u32; self.width];
        for t in &self.tuples {
            let q = t.state.index();
            let suffix: Vec<u32> = total
                .counts()
                .iter()
                .zip(&prefix)
                .enumerate()
                .map(|(i, (tot, pre))| tot - pre - u32::from(i == q))
                .collect();
            if !t.left.accepts(&prefix) || !t.right.accepts(&suffix) {
                return false;
            }
            prefix[q] += 1;
        }
        true
    }

    /// `w ⊨ φ`. Each position's admissible images are independent of the
    /// others, so the leftmost admissible image is always a safe choice.
    pub fn models(&self, w: &Configuration) -> bool {
        let width = self.width;
        let n = w.len();
        if self.tuples.len() > n {
            return false;
        }
        // prefix[j] = Parikh image of w[..j]
        let mut prefix = Vec::with_capacity((n + 1) * width);
        prefix.extend(std::iter::repeat(0u32).take(width));
        for (j, q) in w.0.iter().enumerate() {
            let start = j * width;
            prefix.extend_from_within(start..start + width);
            prefix[(j + 1) * width + q.index()] += 1;
        }
        let total = &prefix[n * width..(n + 1) * width];
        let mut suffix = vec![0u32; width];
        let mut next = 0usize;
        for t in &self.tuples {
            let mut found = false;
            while next < n {
                let j = next;
                next += 1;
                if w.0[j] != t.state {
                    continue;
                }
                let pre = &prefix[j * width..(j + 1) * width];
                if !t.left.accepts(pre) {
                    continue;
                }
                let upto = &prefix[(j + 1) * width..(j + 2) * width];
                for (s, (tot, u)) in suffix.iter_mut().zip(total.iter().zip(upto)) {
                    *s = tot - u;
                }
                if t.right.accepts(&suffix) {
                    found = true;
                    break;
                }
            }
            if !found {
                return false;
            }
        }
        true
    }

    /// `self ⊑ other`: some increasing injection maps every tuple of `self`
    /// onto a tuple of `other` with the same state and stronger counters.
    pub fn is_entailed_by(&self, other: &CountedWord) -> bool {
        if self.tuples.len() > other.tuples.len() {
            return false;
        }
        let mut next = 0usize;
        let remaining = |i: usize| self.tuples.len() - i;
        for (i, t) in self.tuples.iter().enumerate() {
            let mut found = false;
            while next < other.tuples.len() && other.tuples.len() - next >= remaining(i) {
                let u = &other.tuples[next];
                next += 1;
                if u.state == t.state && t.left.is_entailed_by(&u.left) && t.right.is_entailed_by(&u.right) {
                    found = true;
                    break;
                }
            }
            if !found {
                return false;
            }
        }
        true
    }

    /// Pointwise maximum of the precisions of all counters; all-zero for ε.
    pub fn precision(&self) -> Multiset {
        let mut m = Multiset::zero(self.width);
        for t in &self.tuples {
            for c in [&t.left, &t.right] {
                if let Ok(p) = c.precision() {
                    m = m.pointwise_max(&p);
                }
            }
        }
        m
    }

    /// Strengthening fixpoint. Panics when a counter collapses to bottom,
    /// which cannot happen on well-formed input.
    pub fn strengthen(&self) -> CountedWord {
        self.strengthen_with(SweepOrder::LeftToRight)
            .expect("strengthening a well-formed word produced a bottom counter")
    }

    /// Strengthening of arbitrary words: `None` when the word is not well
    /// formed (its denotation need not contain the base) or a counter
    /// collapses.
    pub fn try_strengthen(&self) -> Option<CountedWord> {
        if self.tuples.iter().any(|t| t.left.is_bottom() || t.right.is_bottom()) || !self.is_well_formed() {
            return None;
        }
        self.strengthen_with(SweepOrder::LeftToRight)
    }

    pub fn strengthen_with(&self, order: SweepOrder) -> Option<CountedWord> {
        let mut tuples = self.tuples.clone();
        let n = tuples.len();
        if n < 2 {
            return Some(self.clone());
        }
        let mut first = order == SweepOrder::LeftToRight;
        loop {
            let mut changed = false;
            if first {
                for i in 0..n - 1 {
                    changed |= strengthen_pair(&mut tuples, i)?;
                }
            } else {
                for i in (0..n - 1).rev() {
                    changed |= strengthen_pair(&mut tuples, i)?;
                }
            }
            if !changed {
                break;
            }
            first = !first;
        }
        Some(CountedWord {
            width: self.width,
            tuples,
        })
    }

    /// Relax every counter wrt `rho`, then strengthen.
    pub fn relax(&self, rho: &Resolution) -> CountedWord {
        let relaxed = CountedWord {
            width: self.width,
            tuples: self
                .tuples
                .iter()
                .map(|t| Tuple::new(t.left.relax(rho), t.state, t.right.relax(rho)))
                .collect(),
        };
        relaxed.strengthen()
    }

    pub fn concat(&self, other: &CountedWord) -> CountedWord {
        let mut tuples = self.tuples.clone();
        tuples.extend(other.tuples.iter().cloned());
        CountedWord {
            width: self.width,
            tuples,
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay { word: self, alphabet }
    }

    /// Parses the canonical rendering, e.g. `(a=0 | a | )(a=1, b=0 | a | a=0)`.
    /// `ε` or an empty string denotes the empty word.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<CountedWord> {
        parse_word(text, alphabet, 1, 1)
    }
}

pub struct WordDisplay<'a> {
    word: &'a CountedWord,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("ε");
        }
        for t in &self.word.tuples {
            write!(
                f,
                "({} | {} | {})",
                t.left.display(self.alphabet),
                self.alphabet.name(t.state),
                t.right.display(self.alphabet)
            )?;
        }
        Ok(())
    }
}

fn add_unit(c: &mut Counter, q: StateId) {
    if let Counter::Atoms(a) = c {
        a[q.index()] = match a[q.index()] {
            Atom::Eq(k) => Atom::Eq(k + 1),
            Atom::Geq(k) => Atom::Geq(k + 1),
        };
    }
}

fn sub_unit(c: &mut Counter, q: StateId) {
    if let Counter::Atoms(a) = c {
        a[q.index()] = match a[q.index()] {
            Atom::Eq(0) => {
                *c = Counter::Bottom;
                return;
            }
            Atom::Eq(k) => Atom::Eq(k - 1),
            Atom::Geq(k) => Atom::Geq(k.saturating_sub(1)),
        };
    }
}

/// `c ⊕ cr_q`.
pub(crate) fn plus_unit(c: &Counter, q: StateId) -> Counter {
    let mut c = c.clone();
    add_unit(&mut c, q);
    c
}

/// `c ⊖ cr_q`.
pub(crate) fn minus_unit(c: &Counter, q: StateId) -> Counter {
    let mut c = c.clone();
    sub_unit(&mut c, q);
    c
}

/// One application of the four adjacent-pair rules at `(i, i + 1)`.
/// Returns `None` if a counter collapses to bottom.
fn strengthen_pair(t: &mut [Tuple], i: usize) -> Option<bool> {
    let (q, q2) = (t[i].state, t[i + 1].state);
    let mut changed = false;

    // right: r := r ⊓ (r' ⊕ cr_q' ⊕ (l' ⊖ (l ⊕ cr_q)))
    let gap = t[i + 1].left.minus(&plus_unit(&t[i].left, q));
    let bound = plus_unit(&t[i + 1].right, q2).plus(&gap);
    changed |= tighten(&mut t[i].right, &bound)?;

    // left: l := l ⊓ (l' ⊖ cr_q)
    let bound = minus_unit(&t[i + 1].left, q);
    changed |= tighten(&mut t[i].left, &bound)?;

    // right': r' := r' ⊓ (r ⊖ cr_q')
    let bound = minus_unit(&t[i].right, q2);
    changed |= tighten(&mut t[i + 1].right, &bound)?;

    // left': l' := l' ⊓ (l ⊕ cr_q ⊕ (r ⊖ (r' ⊕ cr_q')))
    let gap = t[i].right.minus(&plus_unit(&t[i + 1].right, q2));
    let bound = plus_unit(&t[i].left, q).plus(&gap);
    changed |= tighten(&mut t[i + 1].left, &bound)?;

    Some(changed)
}

fn tighten(target: &mut Counter, bound: &Counter) -> Option<bool> {
    let met = target.meet(bound);
    if met.is_bottom() {
        return None;
    }
    if met != *target {
        *target = met;
        Ok::<bool, ()>(true).ok()
    } else {
        Some(false)
    }
}

pub(crate) fn parse_word(text: &str, alphabet: &Alphabet, line: usize, col0: usize) -> Result<CountedWord> {
    let width = alphabet.len();
    let syntax = |offset: usize, message: String| Error::Syntax {
        line,
        column: col0 + offset,
        message,
    };
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed == "ε" || trimmed == "eps" {
        return Ok(CountedWord::epsilon(width));
    }
    let mut tuples = Vec::new();
    let mut depth = 0usize;
    let mut start = None;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => {
                if depth == 0 {
                    start = Some(i + 1);
                }
                depth += 1;
            }
            ')' => {
                if depth == 0 {
                    return Err(syntax(i, "unbalanced `)`".into()));
                }
                depth -= 1;
                if depth == 0 {
                    let s = start.take().expect("tuple start");
                    tuples.push(parse_tuple(&text[s..i], alphabet, line, col0 + s)?);
                }
            }
            c if depth == 0 && !c.is_whitespace() => {
                return Err(syntax(i, format!("unexpected `{c}` outside a tuple")));
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(syntax(text.len(), "unterminated tuple".into()));
    }
    Ok(CountedWord::new(width, tuples))
}

fn parse_tuple(text: &str, alphabet: &Alphabet, line: usize, col0: usize) -> Result<Tuple> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut last = 0usize;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '|' if depth == 0 => {
                parts.push((last, &text[last..i]));
                last = i + 1;
            }
            _ => {}
        }
    }
    parts.push((last, &text[last..]));
    if parts.len() != 3 {
        return Err(Error::Syntax {
            line,
            column: col0,
            message: format!("a tuple needs three `|`-separated fields, found {}", parts.len()),
        });
    }
    let left = parse_counter(parts[0].1, alphabet, line, col0 + parts[0].0)?;
    let name = parts[1].1.trim();
    let state = alphabet.lookup(name).ok_or_else(|| Error::Syntax {
        line,
        column: col0 + parts[1].0,
        message: format!("undeclared state `{name}`"),
    })?;
    let right = parse_counter(parts[2].1, alphabet, line, col0 + parts[2].0)?;
    Ok(Tuple::new(left, state, right))
}

pub(crate) fn parse_counter(text: &str, alphabet: &Alphabet, line: usize, col0: usize) -> Result<Counter> {
    let trimmed = text.trim();
    if trimmed == "false" {
        return Ok(Counter::Bottom);
    }
    let mut atoms = vec![Atom::Geq(0); alphabet.len()];
    if trimmed.is_empty() {
        return Ok(Counter::from_atoms(atoms));
    }
    let mut offset = 0usize;
    for piece in text.split(',') {
        let err = |message: String| Error::Syntax {
            line,
            column: col0 + offset,
            message,
        };
        let p = piece.trim();
        let (name, atom) = if let Some((n, k)) = p.split_once(">=") {
            let k: u32 = k.trim().parse().map_err(|_| err(format!("bad bound in `{p}`")))?;
            (n.trim(), Atom::Geq(k))
        } else if let Some((n, k)) = p.split_once('=') {
            let k: u32 = k.trim().parse().map_err(|_| err(format!("bad bound in `{p}`")))?;
            (n.trim(), Atom::Eq(k))
        } else {
            return Err(err(format!("expected `q=k` or `q>=k`, found `{p}`")));
        };
        let q = alphabet
            .lookup(name)
            .ok_or_else(|| err(format!("undeclared state `{name}`")))?;
        atoms[q.index()] = atom;
        offset += piece.len() + 1;
    }
    Ok(Counter::from_atoms(atoms))
}
