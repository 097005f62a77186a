mod common;

use common::{denotation, random_raw_word, random_word, rng, well_formed_family};
use cwverify::words::SweepOrder;
use cwverify::{CountedWord, Resolution, StateId};

#[test]
fn strengthening_preserves_denotation_and_is_order_independent() {
    for phi in well_formed_family(2, 2, 2) {
        let s = phi.strengthen_with(SweepOrder::LeftToRight).expect("well formed");
        let s2 = phi.strengthen_with(SweepOrder::RightToLeft).expect("well formed");
        assert_eq!(s, s2, "{phi:?}");
        assert_eq!(denotation(&phi, 6), denotation(&s, 6), "{phi:?}");
        assert!(phi.is_entailed_by(&s));
    }
}

#[test]
fn strengthening_random_length_three_words() {
    let mut r = rng(31);
    for _ in 0..300 {
        let phi = random_raw_word(&mut r, 2, 3, 2);
        let s = phi.strengthen();
        assert_eq!(s, phi.strengthen_with(SweepOrder::RightToLeft).unwrap());
        assert_eq!(denotation(&phi, 6), denotation(&s, 6));
        assert_eq!(s.strengthen(), s);
    }
}

#[test]
fn well_formed_words_contain_their_base() {
    let mut r = rng(32);
    for _ in 0..300 {
        let phi = random_raw_word(&mut r, 3, 4, 2);
        assert!(phi.is_well_formed());
        assert!(phi.models(&phi.base_config()));
        assert!(phi.strengthen().models(&phi.base_config()));
    }
}

#[test]
fn entailment_is_sound_on_bounded_denotations() {
    let mut r = rng(33);
    let mut positives = 0;
    for _ in 0..2000 {
        let a = random_word(&mut r, 2, 2, 2);
        let b = random_word(&mut r, 2, 3, 2);
        if a.is_entailed_by(&b) {
            positives += 1;
            assert!(denotation(&b, 6).is_subset(&denotation(&a, 6)), "{a:?} ⊑ {b:?}");
        }
    }
    assert!(positives > 20, "only {positives} entailed pairs sampled");
}

#[test]
fn relaxation_is_monotone_and_within_twice_the_threshold() {
    let mut r = rng(34);
    for _ in 0..500 {
        let phi = random_word(&mut r, 2, 3, 3);
        let k = [0u32, 1, 2];
        let rho = Resolution::from_thresholds(vec![k[phi.len() % 3], k[(phi.len() + 1) % 3]]);
        let mut rho2 = rho.clone();
        rho2.set(StateId(0), rho.get(StateId(0)) + 1);
        let weak = phi.relax(&rho);
        let strong = phi.relax(&rho2);
        assert!(weak.is_entailed_by(&strong), "{phi:?}");
        assert!(strong.is_entailed_by(&phi), "{phi:?}");
        assert!(denotation(&phi, 5).is_subset(&denotation(&weak, 5)));
        let top = rho.max_threshold();
        for q in 0..2 {
            let q = StateId::from(q);
            assert!(weak.precision().get(q) <= 2 * top, "{phi:?}");
        }
    }
}

#[test]
fn zero_resolution_gives_upward_closed_words() {
    let mut r = rng(35);
    for _ in 0..200 {
        let phi = random_word(&mut r, 3, 3, 2);
        let up = phi.relax(&Resolution::zero(3));
        assert_eq!(up, CountedWord::upward_closure(3, &phi.base()).strengthen());
    }
}
