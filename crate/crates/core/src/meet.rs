//! Symbolic intersection of counted words: the insertion operator `q ⊗ φ`
//! and the constrained shuffle `zip`.

use std::collections::HashSet;

use crate::counters::{Counter, StateId};
use crate::words::{CountedWord, Tuple};

/// `(φ₁, (l, q, r), φ₂)`: a way of placing `q` inside a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InsertionTuple {
    pub prefix: Vec<Tuple>,
    pub inserted: Tuple,
    pub suffix: Vec<Tuple>,
    /// Whether `inserted` is a new gap tuple rather than an existing one.
    pub fresh: bool,
}

impl InsertionTuple {
    pub fn into_word(self, width: usize) -> CountedWord {
        let mut tuples = self.prefix;
        tuples.push(self.inserted);
        tuples.extend(self.suffix);
        CountedWord::new(width, tuples)
    }
}

fn right_boundary(width: usize, tuples: &[Tuple], at: usize) -> Counter {
    if at == 0 {
        Counter::top(width)
    } else {
        tuples[at - 1].right.clone()
    }
}

fn left_boundary(width: usize, tuples: &[Tuple], at: usize) -> Counter {
    tuples.get(at).map_or_else(|| Counter::top(width), |t| t.left.clone())
}

/// `q ⊗ φ`: every existing `q` tuple, plus every gap whose boundary
/// counters both leave room for another `q`. Candidates that are not well
/// formed are dropped.
pub fn insert_positions(q: StateId, phi: &CountedWord) -> Vec<InsertionTuple> {
    insert_positions_unchecked(q, phi)
        .into_iter()
        .filter(|ins| ins.clone().into_word(phi.width()).is_well_formed())
        .collect()
}

/// `q ⊗ φ` without the well-formedness filter; used when the word is only
/// a fragment of a larger word.
pub(crate) fn insert_positions_unchecked(q: StateId, phi: &CountedWord) -> Vec<InsertionTuple> {
    let width = phi.width();
    let tuples = phi.tuples();
    let mut out = Vec::new();
    for gap in 0..=tuples.len() {
        let r = right_boundary(width, tuples, gap);
        let l = left_boundary(width, tuples, gap);
        if r.allows_more(q) && l.allows_more(q) {
            out.push(InsertionTuple {
                prefix: tuples[..gap].to_vec(),
                inserted: Tuple::new(l, q, r),
                suffix: tuples[gap..].to_vec(),
                fresh: true,
            });
        }
        if gap < tuples.len() && tuples[gap].state == q {
            out.push(InsertionTuple {
                prefix: tuples[..gap].to_vec(),
                inserted: tuples[gap].clone(),
                suffix: tuples[gap + 1..].to_vec(),
                fresh: false,
            });
        }
    }
    out
}

/// Procedure `zip(ε, (ε : φ), (ε : φ'))`: all constrained shuffles of the two
/// words, unstrengthened and deduplicated.
pub fn zip(phi: &CountedWord, other: &CountedWord) -> Vec<CountedWord> {
    let width = phi.width();
    let s = phi.tuples();
    let t = other.tuples();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<Tuple>, usize, usize)> = vec![(Vec::with_capacity(s.len() + t.len()), 0, 0)];
    while let Some((z, i, j)) = stack.pop() {
        if i == s.len() && j == t.len() {
            if seen.insert(z.clone()) {
                out.push(CountedWord::new(width, z));
            }
            continue;
        }
        if j < t.len() {
            let u = &t[j];
            if right_boundary(width, s, i).allows_more(u.state) && left_boundary(width, s, i).allows_more(u.state) {
                let mut z2 = z.clone();
                z2.push(u.clone());
                stack.push((z2, i, j + 1));
            }
        }
        if i < s.len() && j < t.len() {
            if let Some(e) = merge_tuples(&s[i], &t[j]) {
                let mut z2 = z.clone();
                z2.push(e);
                stack.push((z2, i + 1, j + 1));
            }
        }
        if i < s.len() {
            let u = &s[i];
            if right_boundary(width, t, j).allows_more(u.state) && left_boundary(width, t, j).allows_more(u.state) {
                let mut z2 = z;
                z2.push(u.clone());
                stack.push((z2, i + 1, j));
            }
        }
    }
    out
}

/// The merged tuple of the second zip branch, if states agree and both
/// counter meets are satisfiable.
pub(crate) fn merge_tuples(a: &Tuple, b: &Tuple) -> Option<Tuple> {
    if a.state != b.state {
        return None;
    }
    let left = a.left.meet(&b.left);
    if left.is_bottom() {
        return None;
    }
    let right = a.right.meet(&b.right);
    if right.is_bottom() {
        return None;
    }
    Some(Tuple::new(left, a.state, right))
}

/// `φ ⊓ φ'`: strengthened, well-formed zip results, reduced to an
/// entailment-minimal set.
pub fn meet_words(phi: &CountedWord, other: &CountedWord) -> Vec<CountedWord> {
    if !could_meet(phi, other) {
        return Vec::new();
    }
    let words = zip(phi, other).iter().filter_map(CountedWord::try_strengthen).collect();
    minimal_set(words)
}

/// Whether `φ ⊓ φ'` is non-empty, without building the full result.
pub fn words_meet(phi: &CountedWord, other: &CountedWord) -> bool {
    could_meet(phi, other) && zip(phi, other).iter().any(|z| z.try_strengthen().is_some())
}

/// Union of pairwise meets.
pub fn meet_sets(left: &[CountedWord], right: &[CountedWord]) -> Vec<CountedWord> {
    let mut all = Vec::new();
    for a in left {
        for b in right {
            all.extend(meet_words(a, b));
        }
    }
    minimal_set(all)
}

pub fn sets_meet(left: &[CountedWord], right: &[CountedWord]) -> bool {
    left.iter().any(|a| right.iter().any(|b| words_meet(a, b)))
}

/// Cheap necessary condition for a non-empty meet: each word's first left
/// and last right counters must accept some configuration containing the
/// other's base letters. Checked through the total letter counts pinned by
/// the boundary counters.
fn could_meet(phi: &CountedWord, other: &CountedWord) -> bool {
    if phi.is_empty() || other.is_empty() {
        return true;
    }
    // Exactly pinned totals: lc ⊕ cr_q ⊕ rc of any tuple bounds the whole word.
    let total = |w: &CountedWord| {
        let t = &w.tuples()[0];
        crate::words::plus_unit(&t.left, t.state).plus(&t.right)
    };
    !total(phi).meet(&total(other)).is_bottom()
}

/// Removes every word that entails another member (keeps the weakest
/// representatives) and duplicates.
pub fn minimal_set(words: Vec<CountedWord>) -> Vec<CountedWord> {
    let mut kept: Vec<CountedWord> = Vec::with_capacity(words.len());
    for w in words {
        if kept.iter().any(|k| k.is_entailed_by(&w)) {
            continue;
        }
        kept.retain(|k| !w.is_entailed_by(k));
        kept.push(w);
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counters::Alphabet;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"])
    }

    fn word(text: &str) -> CountedWord {
        CountedWord::parse(text, &ab()).unwrap()
    }

    #[test]
    fn insertion_into_epsilon() {
        let ins = insert_positions(StateId(0), &CountedWord::epsilon(2));
        assert_eq!(ins.len(), 1);
        assert!(ins[0].prefix.is_empty() && ins[0].suffix.is_empty());
        assert!(ins[0].inserted.left.is_top() && ins[0].inserted.right.is_top());
    }

    #[test]
    fn insertion_blocked_by_exact_counters() {
        let w = word("(b=0 | a | b=0)");
        assert!(insert_positions(StateId(1), &w).is_empty());
    }

    #[test]
    fn insertion_into_example2() {
        let w = word("(a=0 | a | )(a=1, b=0 | a | a=0)").strengthen();
        let ins = insert_positions(StateId(0), &w);
        // both explicit a positions, no gap admits another a
        assert_eq!(ins.len(), 2);
        assert!(ins.iter().all(|i| !i.fresh));
        let ins = insert_positions(StateId(1), &w);
        // b only fits after the last a
        assert_eq!(ins.len(), 1);
        assert_eq!(ins[0].prefix.len(), 2);
        for i in ins {
            assert!(w.is_entailed_by(&i.into_word(2)));
        }
    }

    #[test]
    fn meet_with_epsilon_and_self() {
        let w = word("(a=0 | a | )(a=1, b=0 | a | a=0)").strengthen();
        assert_eq!(meet_words(&w, &CountedWord::epsilon(2)), vec![w.clone()]);
        assert_eq!(meet_words(&w, &w), vec![w.clone()]);
        assert!(meet_sets(&[w.clone()], &[]).is_empty());
    }

    #[test]
    fn meet_is_empty_when_letters_are_excluded() {
        let w = word("(a=0 | a | )(a=1, b=0 | a | a=0)").strengthen();
        let b = word("( | b | b=0)").strengthen();
        let m = meet_words(&w, &b);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].base(), vec![StateId(0), StateId(0), StateId(1)]);
        let exactly_two_b = word("(b=0 | b | b=1)(b=1 | b | b=0)").strengthen();
        let three_b = word("( | b | )( | b | )( | b | )").strengthen();
        assert!(meet_words(&exactly_two_b, &three_b).is_empty());
    }

    #[test]
    fn minimal_set_keeps_weakest() {
        let strong = word("(a=0 | a | )");
        let weak = word("( | a | )");
        let kept = minimal_set(vec![strong.clone(), weak.clone(), weak.clone()]);
        assert_eq!(kept, vec![weak]);
    }
}
