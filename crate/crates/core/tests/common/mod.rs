//! Word generators and bounded-denotation helpers shared by the integration
//! tests and the acceptance harness.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cwverify::oracle::enumerate_denotation;
use cwverify::{Atom, Configuration, Counter, CountedWord, Multiset, StateId, Transition, Tuple};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Atoms accepted by a Parikh count `count` with constants at most
/// `max_bound`.
pub fn atom_choices(count: u32, max_bound: u32) -> Vec<Atom> {
    let mut out: Vec<Atom> = (0..=count.min(max_bound)).map(Atom::Geq).collect();
    if count <= max_bound {
        out.push(Atom::Eq(count));
    }
    out
}

/// All counters accepting `counts`, constants at most `max_bound`.
pub fn counter_choices(counts: &[u32], max_bound: u32) -> Vec<Counter> {
    let mut out: Vec<Vec<Atom>> = vec![Vec::new()];
    for &c in counts {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                atom_choices(c, max_bound).into_iter().map(move |a| {
                    let mut next = prefix.clone();
                    next.push(a);
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(Counter::from_atoms).collect()
}

fn counts(width: usize, letters: &[StateId]) -> Vec<u32> {
    let m = Multiset::parikh(width, letters);
    (0..width).map(|q| m.get(StateId::from(q))).collect()
}

fn random_counter(rng: &mut ChaCha8Rng, counts: &[u32], max_bound: u32) -> Counter {
    Counter::from_atoms(counts.iter().map(|&c| {
        // favour unconstrained atoms so words stay satisfiable by long
        // configurations
        if rng.gen_bool(0.4) {
            Atom::Geq(0)
        } else {
            let choices = atom_choices(c, max_bound);
            choices[rng.gen_range(0..choices.len())]
        }
    }))
}

/// The well-formed word over `base` whose counters are picked by `pick`.
fn word_over(
    width: usize,
    base: &[StateId],
    mut pick: impl FnMut(&[u32]) -> Counter,
) -> CountedWord {
    let tuples = (0..base.len())
        .map(|i| {
            let left = pick(&counts(width, &base[..i]));
            let right = pick(&counts(width, &base[i + 1..]));
            Tuple::new(left, base[i], right)
        })
        .collect();
    CountedWord::new(width, tuples)
}

pub fn random_base(rng: &mut ChaCha8Rng, width: usize, min_len: usize, max_len: usize) -> Vec<StateId> {
    let len = rng.gen_range(min_len..=max_len);
    (0..len).map(|_| StateId::from(rng.gen_range(0..width))).collect()
}

/// A random well-formed word, not strengthened.
pub fn random_raw_word(rng: &mut ChaCha8Rng, width: usize, max_base: usize, max_bound: u32) -> CountedWord {
    let base = random_base(rng, width, 1, max_base);
    word_over(width, &base, |c| random_counter(rng, c, max_bound))
}

/// A random strengthened word.
pub fn random_word(rng: &mut ChaCha8Rng, width: usize, max_base: usize, max_bound: u32) -> CountedWord {
    random_raw_word(rng, width, max_base, max_bound).strengthen()
}

/// Every well-formed word over `width` letters with base length at most
/// `max_base` and constants at most `max_bound`.
pub fn well_formed_family(width: usize, max_base: usize, max_bound: u32) -> Vec<CountedWord> {
    let mut bases: Vec<Vec<StateId>> = vec![Vec::new()];
    let mut all_bases = vec![Vec::new()];
    for _ in 0..max_base {
        bases = bases
            .into_iter()
            .flat_map(|b| {
                (0..width).map(move |q| {
                    let mut next = b.clone();
                    next.push(StateId::from(q));
                    next
                })
            })
            .collect();
        all_bases.extend(bases.iter().cloned());
    }
    let mut out = Vec::new();
    for base in all_bases {
        let mut partial: Vec<Vec<Tuple>> = vec![Vec::new()];
        for i in 0..base.len() {
            let lefts = counter_choices(&counts(width, &base[..i]), max_bound);
            let rights = counter_choices(&counts(width, &base[i + 1..]), max_bound);
            let mut next = Vec::with_capacity(partial.len() * lefts.len() * rights.len());
            for p in &partial {
                for l in &lefts {
                    for r in &rights {
                        let mut t = p.clone();
                        t.push(Tuple::new(l.clone(), base[i], r.clone()));
                        next.push(t);
                    }
                }
            }
            partial = next;
        }
        out.extend(partial.into_iter().map(|t| CountedWord::new(width, t)));
    }
    out
}

pub fn denotation(phi: &CountedWord, max_len: usize) -> BTreeSet<Configuration> {
    enumerate_denotation(phi, max_len).expect("bounded enumeration").into_iter().collect()
}

pub fn denotation_of_set(words: &[CountedWord], max_len: usize) -> BTreeSet<Configuration> {
    words.iter().flat_map(|w| denotation(w, max_len)).collect()
}

/// Compares `post_word` and `pre_word` of `t` at `phi` against the concrete
/// image and preimage of its bounded denotation; returns the number of
/// mismatching configurations.
pub fn step_discrepancies(t: &Transition, phi: &CountedWord, max_len: usize) -> usize {
    let d = denotation(phi, max_len);
    let image: BTreeSet<Configuration> = d.iter().flat_map(|c| t.step_concrete(c)).collect();
    let preimage: BTreeSet<Configuration> = d.iter().flat_map(|c| t.step_concrete_back(c)).collect();
    let post = denotation_of_set(&t.post_word(phi), max_len);
    let pre = denotation_of_set(&t.pre_word(phi), max_len);
    image.symmetric_difference(&post).count() + preimage.symmetric_difference(&pre).count()
}
