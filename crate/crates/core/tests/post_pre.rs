mod common;

use common::{denotation, denotation_of_set, random_word, rng, step_discrepancies};
use cwverify::frontend::models::{load, BUNDLED};
use cwverify::CountedWord;

const WORDS_PER_MODEL: usize = 30;

#[test]
fn symbolic_steps_match_concrete_steps_on_bounded_denotations() {
    for (i, (name, _)) in BUNDLED.iter().enumerate() {
        let sys = load(name).unwrap();
        let mut r = rng(100 + i as u64);
        for _ in 0..WORDS_PER_MODEL {
            let phi = random_word(&mut r, sys.width(), 3, 2);
            for t in &sys.transitions {
                let bad = step_discrepancies(t, &phi, 4);
                assert_eq!(bad, 0, "{name} {} at {}", t.id, phi.display(&sys.alphabet));
            }
        }
    }
}

#[test]
fn steps_from_bad_and_initial_words_are_exact() {
    for (name, _) in BUNDLED {
        let sys = load(name).unwrap();
        for phi in sys.bad_set.iter().chain(&sys.init_set) {
            for t in &sys.transitions {
                assert_eq!(step_discrepancies(t, phi, 4), 0, "{name} {}", t.id);
            }
        }
    }
}

/// `φ ⊑ φ'` implies every successor word of `φ'` is covered by one of `φ`.
#[test]
fn post_is_monotone_under_entailment() {
    let sys = load("burns").unwrap();
    let mut r = rng(7);
    let mut checked = 0;
    while checked < 40 {
        let strong = random_word(&mut r, sys.width(), 3, 2);
        let weak = strong.relax(&cwverify::Resolution::zero(sys.width()));
        assert!(weak.is_entailed_by(&strong));
        for t in &sys.transitions {
            let from_weak = t.post_word(&weak);
            for s in t.post_word(&strong) {
                assert!(
                    from_weak.iter().any(|w| w.is_entailed_by(&s)),
                    "{} at {}",
                    t.id,
                    strong.display(&sys.alphabet)
                );
            }
        }
        checked += 1;
    }
}

#[test]
fn steps_preserve_length() {
    let sys = load("szymanski_compact").unwrap();
    let mut r = rng(11);
    for _ in 0..20 {
        let phi = random_word(&mut r, sys.width(), 3, 2);
        for c in denotation(&phi, 4) {
            for t in &sys.transitions {
                for d in t.step_concrete(&c) {
                    assert_eq!(d.len(), c.len());
                }
            }
        }
        for t in &sys.transitions {
            for psi in t.post_word(&phi) {
                assert!(psi.len() >= phi.len());
            }
        }
    }
}

#[test]
fn post_of_bad_pattern_has_exact_denotation_example() {
    // a process leaving the critical section of Burns: the post word
    // denotes exactly the images of the bounded denotation
    let sys = load("burns").unwrap();
    let phi = CountedWord::parse("( | q(6:1) | )", &sys.alphabet).unwrap();
    let t7 = sys.transition("t7").unwrap();
    let image: std::collections::BTreeSet<_> = denotation(&phi, 3).iter().flat_map(|c| t7.step_concrete(c)).collect();
    assert_eq!(denotation_of_set(&t7.post_word(&phi), 3), image);
}
