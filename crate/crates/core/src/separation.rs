//! Separation: the instrumented zip, avoid formulas over resolutions, and
//! the operator computing a strictly stronger resolution that re-empties a
//! spurious relaxed meet.

use std::collections::HashMap;
use std::fmt;

use crate::counters::{Alphabet, Atom, Counter, Resolution, StateId};
use crate::error::{Error, Result};
use crate::meet::{merge_tuples, sets_meet};
use crate::words::{CountedWord, Tuple};

/// Positive and/or tree over atoms `v_q > k`; a resolution `ρ` satisfies the
/// atom when `ρ(q) > k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AvoidFormula {
    True,
    False,
    Gt(StateId, u32),
    And(Vec<AvoidFormula>),
    Or(Vec<AvoidFormula>),
}

impl AvoidFormula {
    pub fn and(parts: impl IntoIterator<Item = AvoidFormula>) -> AvoidFormula {
        let mut kept = Vec::new();
        for p in parts {
            match p {
                AvoidFormula::True => {}
                AvoidFormula::False => return AvoidFormula::False,
                AvoidFormula::And(inner) => kept.extend(inner),
                other => kept.push(other),
            }
        }
        match kept.len() {
            0 => AvoidFormula::True,
            1 => kept.pop().unwrap(),
            _ => AvoidFormula::And(kept),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = AvoidFormula>) -> AvoidFormula {
        let mut kept = Vec::new();
        for p in parts {
            match p {
                AvoidFormula::False => {}
                AvoidFormula::True => return AvoidFormula::True,
                AvoidFormula::Or(inner) => kept.extend(inner),
                other => {
                    if !kept.contains(&other) {
                        kept.push(other)
                    }
                }
            }
        }
        match kept.len() {
            0 => AvoidFormula::False,
            1 => kept.pop().unwrap(),
            _ => AvoidFormula::Or(kept),
        }
    }

    pub fn holds(&self, rho: &Resolution) -> bool {
        match self {
            AvoidFormula::True => true,
            AvoidFormula::False => false,
            AvoidFormula::Gt(q, k) => rho.get(*q) > *k,
            AvoidFormula::And(parts) => parts.iter().all(|p| p.holds(rho)),
            AvoidFormula::Or(parts) => parts.iter().any(|p| p.holds(rho)),
        }
    }

    fn count_atoms(&self, freq: &mut HashMap<StateId, usize>) {
        match self {
            AvoidFormula::Gt(q, _) => *freq.entry(*q).or_default() += 1,
            AvoidFormula::And(parts) | AvoidFormula::Or(parts) => parts.iter().for_each(|p| p.count_atoms(freq)),
            _ => {}
        }
    }

    fn weight(&self, freq: &HashMap<StateId, usize>) -> usize {
        match self {
            AvoidFormula::Gt(q, _) => freq.get(q).copied().unwrap_or(0),
            AvoidFormula::And(parts) | AvoidFormula::Or(parts) => {
                parts.iter().map(|p| p.weight(freq)).max().unwrap_or(0)
            }
            _ => 0,
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        FormulaDisplay { f: self, alphabet }
    }
}

struct FormulaDisplay<'a> {
    f: &'a AvoidFormula,
    alphabet: &'a Alphabet,
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, parts: &[AvoidFormula], sep: &str| -> fmt::Result {
            f.write_str("(")?;
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{}", p.display(self.alphabet))?;
            }
            f.write_str(")")
        };
        match self.f {
            AvoidFormula::True => f.write_str("true"),
            AvoidFormula::False => f.write_str("false"),
            AvoidFormula::Gt(q, k) => write!(f, "v_{} > {}", self.alphabet.name(*q), k),
            AvoidFormula::And(parts) => join(f, parts, " & "),
            AvoidFormula::Or(parts) => join(f, parts, " | "),
        }
    }
}

/// `reasons(q ∉ cxt(cr))`.
pub fn reasons_context(q: StateId, cr: &Counter) -> AvoidFormula {
    match cr.atom(q) {
        Some(Atom::Eq(k)) => AvoidFormula::Gt(q, k + 1),
        _ => AvoidFormula::False,
    }
}

/// `reasons(cr ⊓ cr' = ⊥)`: one disjunct per state where the atoms conflict.
pub fn reasons_meet(cr: &Counter, other: &Counter) -> AvoidFormula {
    let (Some(a), Some(b)) = (cr.atoms(), other.atoms()) else {
        return AvoidFormula::False;
    };
    AvoidFormula::or(
        a.iter()
            .zip(b)
            .enumerate()
            .filter(|(_, (x, y))| x.meet(**y).is_none())
            .map(|(q, (x, _))| AvoidFormula::Gt(StateId::from(q), x.precision())),
    )
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

struct AugZip<'a> {
    width: usize,
    s: &'a [Tuple],
    hat: &'a [Tuple],
    t: &'a [Tuple],
    collect: Vec<CountedWord>,
}

impl AugZip<'_> {
    fn run(&mut self, z: &mut Vec<Tuple>, i: usize, j: usize) -> AvoidFormula {
        let (n, m) = (self.s.len(), self.t.len());
        if i == n && j == m {
            let w = CountedWord::new(self.width, z.clone());
            return if w.try_strengthen().is_some() {
                self.collect.push(w);
                AvoidFormula::False
            } else {
                AvoidFormula::True
            };
        }
        let mut avoid = Vec::new();
        if i < n {
            let u = &self.s[i];
            if right_boundary(self.width, self.t, j).allows_more(u.state)
                && left_boundary(self.width, self.t, j).allows_more(u.state)
            {
                z.push(u.clone());
                avoid.push(self.run(z, i + 1, j));
                z.pop();
            }
        }
        if i < n && j < m {
            if let Some(e) = merge_tuples(&self.s[i], &self.t[j]) {
                z.push(e);
                let v = self.run(z, i + 1, j + 1);
                z.pop();
                avoid.push(AvoidFormula::or([
                    v,
                    reasons_meet(&self.hat[i].left, &self.t[j].left),
                    reasons_meet(&self.hat[i].right, &self.t[j].right),
                ]));
            }
        }
        if j < m {
            let u = &self.t[j];
            if right_boundary(self.width, self.s, i).allows_more(u.state)
                && left_boundary(self.width, self.s, i).allows_more(u.state)
            {
                z.push(u.clone());
                let v = self.run(z, i, j + 1);
                z.pop();
                avoid.push(AvoidFormula::or([
                    v,
                    reasons_context(u.state, &right_boundary(self.width, self.hat, i)),
                    reasons_context(u.state, &left_boundary(self.width, self.hat, i)),
                ]));
            }
        }
        AvoidFormula::and(avoid)
    }
}

/// `augzip(ε, (ε : relaxed), (ε : exact), (ε : other))`. `relaxed` must be a
/// relaxation of `exact` (same base).
pub fn augzip(relaxed: &CountedWord, exact: &CountedWord, other: &CountedWord) -> (Vec<CountedWord>, AvoidFormula) {
    assert_eq!(relaxed.base(), exact.base(), "augzip needs a relaxation of the exact word");
    let mut state = AugZip {
        width: relaxed.width(),
        s: relaxed.tuples(),
        hat: exact.tuples(),
        t: other.tuples(),
        collect: Vec::new(),
    };
    let avoid = state.run(&mut Vec::new(), 0, 0);
    (state.collect, avoid)
}

/// A small resolution satisfying `f`, or `None` if no resolution does.
/// Disjunctions prefer an already satisfied branch, then the cheapest one,
/// then the one whose states occur most often in `f`.
pub fn solve_avoid(f: &AvoidFormula, width: usize) -> Option<Resolution> {
    let mut freq = HashMap::new();
    f.count_atoms(&mut freq);
    let mut rho = Resolution::zero(width);
    solve_into(f, &mut rho, &freq).then_some(rho)
}

fn solve_into(f: &AvoidFormula, rho: &mut Resolution, freq: &HashMap<StateId, usize>) -> bool {
    match f {
        AvoidFormula::True => true,
        AvoidFormula::False => false,
        AvoidFormula::Gt(q, k) => {
            if rho.get(*q) <= *k {
                rho.set(*q, k + 1);
            }
            true
        }
        AvoidFormula::And(parts) => parts.iter().all(|p| solve_into(p, rho, freq)),
        AvoidFormula::Or(parts) => {
            if parts.iter().any(|p| p.holds(rho)) {
                return true;
            }
            let base: u64 = rho.thresholds().iter().map(|&k| u64::from(k)).sum();
            let mut best: Option<(u64, std::cmp::Reverse<usize>, Resolution)> = None;
            for p in parts {
                let mut candidate = rho.clone();
                if solve_into(p, &mut candidate, freq) {
                    let cost = candidate.thresholds().iter().map(|&k| u64::from(k)).sum::<u64>() - base;
                    let key = (cost, std::cmp::Reverse(p.weight(freq)));
                    if best.as_ref().map_or(true, |(c, w, _)| key < (*c, *w)) {
                        best = Some((key.0, key.1, candidate));
                    }
                }
            }
            match best {
                Some((_, _, r)) => {
                    *rho = r;
                    true
                }
                None => false,
            }
        }
    }
}

/// Result of the separation operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub resolution: Resolution,
    /// Whether the precision-based fallback had to be used.
    pub fallback: bool,
}

pub fn relax_set(words: &[CountedWord], rho: &Resolution) -> Vec<CountedWord> {
    words.iter().map(|w| w.relax(rho)).collect()
}

/// `Ξ(E, E', ρ)`: requires `E ⊓ E' = ∅` and `∇_ρ(E) ⊓ E' ≠ ∅`; returns a
/// resolution strictly above `ρ` for which the relaxed meet is empty again.
pub fn xi(source: &[CountedWord], target: &[CountedWord], rho: &Resolution) -> Result<Separation> {
    if sets_meet(source, target) {
        return Err(Error::Usage("separation requires an empty exact meet".into()));
    }
    let relaxed = relax_set(source, rho);
    if !sets_meet(&relaxed, target) {
        return Err(Error::Usage("separation requires a non-empty relaxed meet".into()));
    }
    let width = rho.len();
    let mut avoid = Vec::new();
    for (r, e) in relaxed.iter().zip(source) {
        for t in target {
            avoid.push(augzip(r, e, t).1);
        }
    }
    let formula = AvoidFormula::and(avoid);
    tracing::debug!(avoid = ?formula, "separation formula");
    if let Some(solution) = solve_avoid(&formula, width) {
        let candidate = rho.join(&solution);
        if candidate.strictly_refines(rho) && !sets_meet(&relax_set(source, &candidate), target) {
            return Ok(Separation {
                resolution: candidate,
                fallback: false,
            });
        }
    }
    let mut precision = Resolution::zero(width);
    for w in source {
        let p = w.precision();
        for q in 0..width {
            let q = StateId::from(q);
            precision.set(q, precision.get(q).max(p.get(q)));
        }
    }
    let candidate = rho.join(&precision);
    if !candidate.strictly_refines(rho) || sets_meet(&relax_set(source, &candidate), target) {
        return Err(Error::Usage("no stronger resolution separates the sets".into()));
    }
    Ok(Separation {
        resolution: candidate,
        fallback: true,
    })
}
