//! Brute-force ground truth: bounded denotations, explicit-state
//! reachability for a fixed number of processes, and the goodness check for
//! zip outputs.

use std::collections::{HashMap, VecDeque};

use crate::counters::{Counter, StateId};
use crate::error::{Error, Result};
use crate::system::ParameterizedSystem;
use crate::words::{Configuration, CountedWord, Tuple};

/// Upper bound on the number of candidate configurations any enumeration
/// may visit.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

fn guard(width: usize, len: usize) -> Result<()> {
    let total = (width as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if total > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge(total));
    }
    Ok(())
}

/// Every configuration over `width` letters of length exactly `len`, in
/// lexicographic order.
pub fn configurations(width: usize, len: usize) -> Result<Vec<Configuration>> {
    guard(width, len)?;
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<StateId>| {
                (0..width).map(move |q| {
                    let mut next = prefix.clone();
                    next.push(StateId::from(q));
                    next
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(Configuration).collect())
}

/// Every configuration of length at most `max_len`.
pub fn configurations_up_to(width: usize, max_len: usize) -> Result<Vec<Configuration>> {
    guard(width, max_len)?;
    let mut out = Vec::new();
    for len in 0..=max_len {
        out.extend(configurations(width, len)?);
    }
    Ok(out)
}

/// Every configuration of length at most `max_len` that has `base` as a
/// (scattered) subword, each listed once.
pub fn superwords(base: &[StateId], width: usize, max_len: usize) -> Result<Vec<Configuration>> {
    guard(width, max_len)?;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(max_len);
    // Each superword is produced along its leftmost embedding of `base`:
    // a letter either matches the next base letter or differs from it.
    fn extend(
        base: &[StateId],
        width: usize,
        max_len: usize,
        matched: usize,
        current: &mut Vec<StateId>,
        out: &mut Vec<Configuration>,
    ) {
        if matched == base.len() {
            out.push(Configuration(current.clone()));
        }
        if current.len() == max_len {
            return;
        }
        for q in (0..width).map(StateId::from) {
            let next = if base.get(matched) == Some(&q) { matched + 1 } else { matched };
            if current.len() + 1 + (base.len() - next) > max_len {
                continue;
            }
            current.push(q);
            extend(base, width, max_len, next, current, out);
            current.pop();
        }
    }
    if base.len() <= max_len {
        extend(base, width, max_len, 0, &mut current, &mut out);
    }
    Ok(out)
}

/// `{w : |w| ≤ max_len, w ⊨ φ}`. Every model embeds the base, so only
/// superwords of the base are tested.
pub fn enumerate_denotation(phi: &CountedWord, max_len: usize) -> Result<Vec<Configuration>> {
    let mut out: Vec<Configuration> = superwords(&phi.base(), phi.width(), max_len)?
        .into_iter()
        .filter(|w| phi.models(w))
        .collect();
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ExplicitReach {
    pub reached: Vec<Configuration>,
    pub bad_hit: bool,
    /// Shortest run from the initial configuration to a bad one, if any.
    pub witness: Option<Vec<Configuration>>,
}

/// Breadth-first exploration from `p_init^n`.
pub fn explicit_reach(sys: &ParameterizedSystem, n: usize) -> Result<ExplicitReach> {
    guard(sys.width(), n)?;
    let start = sys.initial_configuration(n);
    let mut parent: HashMap<Configuration, Option<Configuration>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    let mut order = Vec::new();
    let mut first_bad = None;
    while let Some(c) = queue.pop_front() {
        if first_bad.is_none() && sys.is_bad(&c) {
            first_bad = Some(c.clone());
        }
        for (_, d) in sys.successors(&c) {
            if !parent.contains_key(&d) {
                parent.insert(d.clone(), Some(c.clone()));
                queue.push_back(d);
            }
        }
        order.push(c);
    }
    let witness = first_bad.map(|bad| {
        let mut run = vec![bad.clone()];
        let mut cur = bad;
        while let Some(Some(p)) = parent.get(&cur) {
            run.push(p.clone());
            cur = p.clone();
        }
        run.reverse();
        run
    });
    Ok(ExplicitReach {
        bad_hit: witness.is_some(),
        reached: order,
        witness,
    })
}

/// A strictly increasing map from positions of one word into another
/// (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Injection(pub Vec<usize>);

impl Injection {
    pub fn is_valid(&self, target_len: usize) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1]) && self.0.last().map_or(true, |&j| j < target_len)
    }

    fn preimage(&self, j: usize) -> Option<usize> {
        self.0.iter().position(|&x| x == j)
    }

    /// Number of source positions mapped at or before `j`.
    fn mapped_up_to(&self, j: usize) -> usize {
        self.0.iter().filter(|&&x| x <= j).count()
    }

    /// Every strictly increasing map from `n` positions into `m`.
    pub fn all(n: usize, m: usize) -> Vec<Injection> {
        fn rec(n: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Injection>) {
            if cur.len() == n {
                out.push(Injection(cur.clone()));
                return;
            }
            for j in start..m {
                if m - j < n - cur.len() {
                    break;
                }
                cur.push(j);
                rec(n, m, j + 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, m, 0, &mut Vec::new(), &mut out);
        out
    }
}

fn lc_of(width: usize, parts: &[&[Tuple]]) -> Counter {
    parts
        .iter()
        .flat_map(|p| p.iter())
        .next()
        .map_or_else(|| Counter::top(width), |t| t.left.clone())
}

fn rc_of(width: usize, part: &[Tuple]) -> Counter {
    part.last().map_or_else(|| Counter::top(width), |t| t.right.clone())
}

/// Whether `(w : (u, v) : (u', v'))` is good with respect to `h` (for `u`)
/// and `h2` (for `u'`), read literally from the three positional
/// conditions.
pub fn check_goodness(
    w: &CountedWord,
    u: &CountedWord,
    v: &CountedWord,
    u2: &CountedWord,
    v2: &CountedWord,
    h: &Injection,
    h2: &Injection,
) -> bool {
    let width = w.width();
    let wt = w.tuples();
    if h.0.len() != u.len() || h2.0.len() != u2.len() || !h.is_valid(wt.len()) || !h2.is_valid(wt.len()) {
        return false;
    }
    let covered = (0..wt.len()).all(|j| h.0.contains(&j) || h2.0.contains(&j));
    if !covered {
        return false;
    }
    let solo = |j: usize, tuple: &Tuple, other: &CountedWord, other_rest: &CountedWord, other_h: &Injection| {
        let k = other_h.mapped_up_to(j);
        let ot = other.tuples();
        let rc = rc_of(width, &ot[..k]);
        let lc = lc_of(width, &[&ot[k..], other_rest.tuples()]);
        rc.allows_more(tuple.state) && lc.allows_more(tuple.state) && wt[j] == *tuple
    };
    for j in 0..wt.len() {
        match (h.preimage(j), h2.preimage(j)) {
            (Some(i), None) => {
                if !solo(j, &u.tuples()[i], u2, v2, h2) {
                    return false;
                }
            }
            (None, Some(i2)) => {
                if !solo(j, &u2.tuples()[i2], u, v, h) {
                    return false;
                }
            }
            (Some(i), Some(i2)) => {
                let (a, b) = (&u.tuples()[i], &u2.tuples()[i2]);
                let l = a.left.meet(&b.left);
                let r = a.right.meet(&b.right);
                if l.is_bottom() || r.is_bottom() || a.state != b.state {
                    return false;
                }
                if wt[j] != Tuple::new(l, a.state, r) {
                    return false;
                }
            }
            (None, None) => return false,
        }
    }
    true
}

/// Every word `z` such that `(z : (φ, ε) : (φ', ε))` is good for some pair
/// of injections; the reference answer for zip.
pub fn good_completions(phi: &CountedWord, other: &CountedWord) -> Vec<CountedWord> {
    let width = phi.width();
    let eps = CountedWord::epsilon(width);
    let (n, m) = (phi.len(), other.len());
    let mut out: Vec<CountedWord> = Vec::new();
    for len in n.max(m)..=n + m {
        for h in Injection::all(n, len) {
            for h2 in Injection::all(m, len) {
                let mut tuples = Vec::with_capacity(len);
                let mut ok = true;
                for j in 0..len {
                    match (h.preimage(j), h2.preimage(j)) {
                        (Some(i), None) => tuples.push(phi.tuples()[i].clone()),
                        (None, Some(i2)) => tuples.push(other.tuples()[i2].clone()),
                        (Some(i), Some(i2)) => {
                            let (a, b) = (&phi.tuples()[i], &other.tuples()[i2]);
                            tuples.push(Tuple::new(a.left.meet(&b.left), a.state, a.right.meet(&b.right)));
                        }
                        (None, None) => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                let z = CountedWord::new(width, tuples);
                if check_goodness(&z, phi, &eps, other, &eps, &h, &h2) && !out.contains(&z) {
                    out.push(z);
                }
            }
        }
    }
    out
}
