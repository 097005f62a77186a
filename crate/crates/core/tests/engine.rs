use std::time::Duration;

use cwverify::engine::{analyze_trace, check_reachability, verify, Analysis, CheckOutcome, RoundOutcome, VerifyOptions};
use cwverify::frontend::models::{load, BURNS};
use cwverify::frontend::parse_model;
use cwverify::meet::meet_words;
use cwverify::oracle::explicit_reach;
use cwverify::{Direction, ParameterizedSystem, Resolution, Verdict};

fn options(direction: Direction) -> VerifyOptions {
    VerifyOptions {
        direction,
        initial: None,
        budget: Duration::from_secs(300),
        max_refinements: Some(30),
    }
}

fn assert_safe_for_small_n(sys: &ParameterizedSystem) {
    for n in 2..=4 {
        assert!(!explicit_reach(sys, n).unwrap().bad_hit, "{} n={n}", sys.name);
    }
}

/// Burns with the guard of `id` deleted.
fn burns_without_guard(id: &str) -> ParameterizedSystem {
    let text: String = BURNS
        .lines()
        .map(|line| {
            let prefix = format!("transition {id}:");
            if line.starts_with(&prefix) {
                line.split_whitespace().take(5).collect::<Vec<_>>().join(" ")
            } else {
                line.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    parse_model(&text).unwrap()
}

#[test]
fn burns_backward_is_safe_in_one_round() {
    let sys = load("burns").unwrap();
    let report = verify(&sys, &options(Direction::Backward)).unwrap();
    assert!(matches!(report.verdict, Verdict::Unreachable));
    assert_eq!(report.refinements(), 1);
    assert_safe_for_small_n(&sys);
}

#[test]
fn burns_forward_refines_the_critical_state_first() {
    let sys = load("burns").unwrap();
    let report = verify(&sys, &options(Direction::Forward)).unwrap();
    assert!(matches!(report.verdict, Verdict::Unreachable));
    assert!(report.refinements() <= 9);
    let first = &report.rounds[0];
    assert_eq!(first.outcome, RoundOutcome::Spurious);
    let crit = sys.alphabet.lookup("q(6:1)").unwrap();
    assert!(report.rounds[1].resolution.get(crit) >= 1);
    let spurious = first.trace.as_ref().unwrap();
    let last = spurious.words.last().unwrap();
    let hits: Vec<_> = sys.bad_set.iter().flat_map(|b| meet_words(last, b)).collect();
    assert!(!hits.is_empty());
    for z in &hits {
        assert_eq!(z.base().iter().filter(|&&q| q == crit).count(), 2);
    }
    for later in &report.rounds[1..] {
        if let Some(t) = &later.trace {
            assert_ne!(t.signature(), spurious.signature());
        }
    }
    assert!(!report.has_repeated_trace());
}

#[test]
fn resolutions_grow_strictly_between_rounds() {
    let sys = load("burns").unwrap();
    let report = verify(&sys, &options(Direction::Forward)).unwrap();
    for pair in report.rounds.windows(2) {
        assert!(pair[1].resolution.strictly_refines(&pair[0].resolution));
    }
}

#[test]
fn compact_szymanski_backward_is_safe() {
    let sys = load("szymanski_compact").unwrap();
    let report = verify(&sys, &options(Direction::Backward)).unwrap();
    assert!(matches!(report.verdict, Verdict::Unreachable));
    assert!(report.refinements() <= 3);
    assert_safe_for_small_n(&sys);
}

#[test]
fn gribomont_zenner_backward_is_safe() {
    let sys = load("gribomont_zenner").unwrap();
    let report = verify(&sys, &options(Direction::Backward)).unwrap();
    assert!(matches!(report.verdict, Verdict::Unreachable));
    assert!(report.refinements() <= 6);
    assert_safe_for_small_n(&sys);
}

#[test]
fn removing_the_right_check_breaks_burns() {
    let sys = burns_without_guard("t8");
    assert!(sys.transitions[7].guard.is_none());
    assert!(explicit_reach(&sys, 2).unwrap().bad_hit);
    for direction in [Direction::Backward, Direction::Forward] {
        let report = verify(&sys, &options(direction)).unwrap();
        let Verdict::Reachable(cex) = &report.verdict else {
            panic!("{direction:?}: expected a counterexample, got {:?}", report.verdict.name());
        };
        assert!(cex.replays(&sys));
    }
}

#[test]
fn removing_the_first_left_check_keeps_burns_safe() {
    let sys = burns_without_guard("t4");
    assert!(sys.transitions[3].guard.is_none());
    for n in 2..=5 {
        assert!(!explicit_reach(&sys, n).unwrap().bad_hit, "n={n}");
    }
    let report = verify(&sys, &options(Direction::Backward)).unwrap();
    assert!(!matches!(report.verdict, Verdict::Reachable(_)));
}

#[test]
fn spurious_traces_are_refuted_with_a_stronger_resolution() {
    let sys = load("burns").unwrap();
    let rho = Resolution::zero(sys.width());
    let (outcome, _) = check_reachability(&sys, &rho, Direction::Forward, None);
    let CheckOutcome::Trace(trace) = outcome else {
        panic!("expected a trace under the coarsest resolution");
    };
    match analyze_trace(&sys, &trace, &rho, Direction::Forward).unwrap() {
        Analysis::Refined(sep) => assert!(sep.resolution.strictly_refines(&rho)),
        Analysis::Reachable(_) => panic!("Burns is safe"),
    }
}

#[test]
fn budget_exhaustion_is_reported() {
    let sys = load("szymanski").unwrap();
    let options = VerifyOptions {
        direction: Direction::Forward,
        initial: None,
        budget: Duration::from_millis(1),
        max_refinements: Some(5),
    };
    let report = verify(&sys, &options).unwrap();
    assert!(matches!(report.verdict, Verdict::BudgetExhausted(_)));
    assert_eq!(report.verdict.exit_code(), 2);
}
