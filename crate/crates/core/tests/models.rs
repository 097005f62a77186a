//! The bundled models against hand-copied tables of the published
//! benchmark definitions.

use cwverify::frontend::models::load;
use cwverify::{Atom, CountedWord, ParameterizedSystem, Quantifier};

/// `id source target [quantifier witnesses...]`
type Row = &'static str;

const BURNS: &[Row] = &[
    "t1 q(1:0) q(2:0)",
    "t2 q(1:1) q(2:0)",
    "t3 q(2:0) q(1:0) exists_l q(1:1) q(3:1) q(4:1) q(5:1) q(6:1) q(7:1)",
    "t4 q(2:0) q(3:0) forall_l q(1:0) q(2:0) q(3:0)",
    "t5 q(3:0) q(4:1)",
    "t6 q(4:1) q(1:1) exists_l q(1:1) q(3:1) q(4:1) q(5:1) q(6:1) q(7:1)",
    "t7 q(6:1) q(7:1)",
    "t8 q(5:1) q(6:1) forall_r q(1:0) q(2:0) q(3:0)",
    "t9 q(4:1) q(5:1) forall_l q(1:0) q(2:0) q(3:0)",
    "t10 q(7:1) q(1:0)",
];

const SZYMANSKI_COMPACT: &[Row] = &[
    "t1 q0 q1",
    "t2 q1 q2 forall_lr q0 q1 q2 q4",
    "t3 q2 q3",
    "t4 q3 q4 exists_lr q1 q2 q5 q6 q7",
    "t5 q4 q5 exists_lr q5 q6 q7",
    "t6 q3 q5 forall_lr q0 q1 q3 q4",
    "t7 q5 q6 forall_lr q0 q1 q2 q5 q6 q7",
    "t8 q6 q7 forall_l q0 q1 q2 q4",
    "t9 q7 q0",
];

const SZYMANSKI: &[Row] = &[
    "t1 q0 q1",
    "t2 q1 q2",
    "t3 q2 q3 forall_lr q0 q1 q2 q3 q7 q8",
    "t4 q3 q4",
    "t5 q4 q6 exists_lr q2 q3",
    "t6 q6 q7",
    "t7 q7 q8 exists_lr q9 q10 q11",
    "t8 q5 q9",
    "t9 q4 q5 forall_lr q0 q1 q4 q5 q6 q7 q8 q9 q10 q11",
    "t10 q8 q9",
    "t11 q9 q10 forall_l q0 q1 q2 q3",
    "t12 q10 q11 forall_r q0 q1 q2 q3 q9 q10 q11",
    "t13 q11 q0",
];

// q0 is not a state of this model and is left out of the guard sets.
const GRIBOMONT_ZENNER: &[Row] = &[
    "t1 q1 q2",
    "t2 q2 q3",
    "t3 q3 q4 forall_lr q1 q2 q3 q7 q8",
    "t4 q4 q5",
    "t5 q5 q6 exists_lr q2 q3",
    "t6 q6 q7",
    "t7 q7 q8 exists_lr q9 q10 q11",
    "t8 q8 q9",
    "t9 q5 q9 forall_lr q1 q4 q5 q6 q7 q8 q9 q10 q11",
    "t10 q9 q10",
    "t11 q10 q11 forall_l q1 q2 q3",
    "t12 q11 q12 forall_r q1 q2 q3 q9 q10 q11",
    "t13 q12 q12",
    "t14 q13 q1",
];

fn check(name: &str, states: &[&str], init: &str, critical: &str, rows: &[Row]) -> ParameterizedSystem {
    let sys = load(name).unwrap();
    assert_eq!(sys.alphabet.names().iter().map(String::as_str).collect::<Vec<_>>(), states, "{name}");
    assert_eq!(sys.alphabet.name(sys.init_state), init);
    assert_eq!(sys.transitions.len(), rows.len(), "{name}");
    for (t, row) in sys.transitions.iter().zip(rows) {
        let f: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(t.id, f[0]);
        assert_eq!(sys.alphabet.name(t.source), f[1], "{name} {}", t.id);
        assert_eq!(sys.alphabet.name(t.target), f[2], "{name} {}", t.id);
        match &t.guard {
            None => assert_eq!(f.len(), 3, "{name} {} lost its guard", t.id),
            Some(g) => {
                assert_eq!(Some(g.quantifier), Quantifier::from_keyword(f[3]), "{name} {}", t.id);
                let mut want: Vec<&str> = f[4..].to_vec();
                let mut got: Vec<&str> = g.witnesses.iter().map(|&q| sys.alphabet.name(q)).collect();
                want.sort();
                got.sort();
                assert_eq!(got, want, "{name} {}", t.id);
            }
        }
    }
    // init: (cr_i, p, cr_i) with every other state pinned to zero
    assert_eq!(sys.init_set.len(), 1);
    let w = &sys.init_set[0];
    assert_eq!(w.len(), 1);
    let t = &w.tuples()[0];
    for q in sys.alphabet.states() {
        let want = if q == sys.init_state { Atom::Geq(0) } else { Atom::Eq(0) };
        assert_eq!(t.left.atom(q), Some(want));
        assert_eq!(t.right.atom(q), Some(want));
    }
    // bad: two critical processes, upward closed; the second tuple sees
    // the first one to its left
    let crit = sys.alphabet.lookup(critical).unwrap();
    assert_eq!(sys.bad_set.len(), 1);
    let bad = &sys.bad_set[0];
    assert_eq!(bad.base(), vec![crit, crit]);
    assert_eq!(bad.tuples()[1].left.atom(crit), Some(Atom::Geq(1)));
    assert_eq!(bad.tuples()[0].right.atom(crit), Some(Atom::Geq(1)));
    assert_eq!(*bad, CountedWord::upward_closure(sys.width(), &bad.base()).strengthen());
    sys
}

fn names(prefix: &str, range: std::ops::RangeInclusive<u32>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

#[test]
fn burns_matches_its_table() {
    let states = [
        "q(1:0)", "q(2:0)", "q(3:0)", "q(1:1)", "q(3:1)", "q(4:1)", "q(5:1)", "q(6:1)", "q(7:1)",
    ];
    check("burns", &states, "q(1:0)", "q(6:1)", BURNS);
}

#[test]
fn compact_szymanski_matches_its_table() {
    let states = names("q", 0..=7);
    let states: Vec<&str> = states.iter().map(String::as_str).collect();
    check("szymanski_compact", &states, "q0", "q7", SZYMANSKI_COMPACT);
}

#[test]
fn szymanski_matches_its_table() {
    let states = names("q", 0..=13);
    let states: Vec<&str> = states.iter().map(String::as_str).collect();
    check("szymanski", &states, "q0", "q10", SZYMANSKI);
}

#[test]
fn gribomont_zenner_matches_its_table() {
    let states = names("q", 1..=13);
    let states: Vec<&str> = states.iter().map(String::as_str).collect();
    check("gribomont_zenner", &states, "q1", "q12", GRIBOMONT_ZENNER);
}
