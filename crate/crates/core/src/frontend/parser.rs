//! The line-oriented model format.
//!
//! ```text
//! model burns
//! state q(1:0) q(2:0)
//! init q(1:0)
//! transition t4: q(2:0) -> q(3:0) forall_l {q(1:0), q(2:0), q(3:0)}
//! bad q(6:1) q(6:1)
//! bad_word ( | q(6:1) | )( | q(6:1) | )
//! init_word (q(2:0)=0 | q(1:0) | q(2:0)=0)
//! ```
//!
//! `#` starts a comment. `bad` lists a base word whose upward closure is
//! bad; `init_word`/`bad_word` give counted words explicitly. Without
//! `init_word` the initial set is `p_init⁺`.

use std::collections::HashSet;

use crate::counters::{Alphabet, StateId};
use crate::error::{Error, Result};
use crate::system::{Guard, ParameterizedSystem, Quantifier, Transition};
use crate::words::{parse_word, CountedWord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardSpec {
    pub quantifier: Quantifier,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSpec {
    pub id: String,
    pub source: String,
    pub target: String,
    pub guard: Option<GuardSpec>,
    pub line: usize,
}

/// Parsed, unvalidated content of a model file.
#[derive(Clone, Debug, Default)]
pub struct ModelFile {
    pub name: Option<String>,
    pub states: Vec<(String, usize)>,
    pub init: Option<(String, usize)>,
    pub transitions: Vec<TransitionSpec>,
    pub bad_patterns: Vec<(Vec<String>, usize)>,
    pub init_words: Vec<(String, usize, usize)>,
    pub bad_words: Vec<(String, usize, usize)>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn column_of(line: &str, part: &str) -> usize {
    part.as_ptr() as usize - line.as_ptr() as usize + 1
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile> {
        let mut file = ModelFile::default();
        let mut any = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            any = true;
            let split = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
            let (keyword, rest) = trimmed.split_at(split);
            let rest_col = column_of(raw, rest.trim_start());
            let rest = rest.trim();
            match keyword {
                "model" => file.name = Some(rest.to_string()),
                "state" => {
                    if rest.is_empty() {
                        return Err(syntax(line_no, rest_col, "`state` needs at least one name"));
                    }
                    file.states.extend(rest.split_whitespace().map(|s| (s.to_string(), line_no)));
                }
                "init" => {
                    if rest.is_empty() || rest.split_whitespace().count() != 1 {
                        return Err(syntax(line_no, rest_col, "`init` needs exactly one state"));
                    }
                    file.init = Some((rest.to_string(), line_no));
                }
                "transition" => file.transitions.push(parse_transition(raw, rest, line_no)?),
                "bad" => {
                    if rest.is_empty() {
                        return Err(syntax(line_no, rest_col, "`bad` needs a non-empty base word"));
                    }
                    file.bad_patterns
                        .push((rest.split_whitespace().map(str::to_string).collect(), line_no));
                }
                "init_word" => file.init_words.push((rest.to_string(), line_no, rest_col)),
                "bad_word" => file.bad_words.push((rest.to_string(), line_no, rest_col)),
                other => {
                    return Err(syntax(line_no, column_of(raw, trimmed), format!("unknown keyword `{other}`")));
                }
            }
        }
        if !any {
            return Err(syntax(1, 1, "empty model"));
        }
        Ok(file)
    }

    pub fn into_system(self) -> Result<ParameterizedSystem> {
        let mut seen = HashSet::new();
        for (s, line) in &self.states {
            if !seen.insert(s.as_str()) {
                return Err(Error::Semantic(format!("line {line}: state `{s}` declared twice")));
            }
        }
        let alphabet = Alphabet::new(self.states.iter().map(|(s, _)| s.clone()));
        if alphabet.is_empty() {
            return Err(Error::Semantic("no states declared".into()));
        }
        let lookup = |name: &str, line: usize| {
            alphabet
                .lookup(name)
                .ok_or_else(|| Error::Semantic(format!("line {line}: undeclared state `{name}`")))
        };
        let (init_name, init_line) = self
            .init
            .clone()
            .ok_or_else(|| Error::Semantic("no `init` state given".into()))?;
        let init = lookup(&init_name, init_line)?;
        let mut ids = HashSet::new();
        let mut transitions = Vec::new();
        for t in &self.transitions {
            if !ids.insert(t.id.clone()) {
                return Err(Error::Semantic(format!("line {}: duplicate transition id `{}`", t.line, t.id)));
            }
            let source = lookup(&t.source, t.line)?;
            let target = lookup(&t.target, t.line)?;
            let guard = match &t.guard {
                None => None,
                Some(g) => Some(Guard::new(
                    g.quantifier,
                    g.witnesses.iter().map(|w| lookup(w, t.line)).collect::<Result<Vec<StateId>>>()?,
                )),
            };
            transitions.push(Transition {
                id: t.id.clone(),
                source,
                target,
                guard,
            });
        }
        let width = alphabet.len();
        let mut bad = Vec::new();
        for (pattern, line) in &self.bad_patterns {
            let base = pattern.iter().map(|p| lookup(p, *line)).collect::<Result<Vec<_>>>()?;
            bad.push(CountedWord::upward_closure(width, &base).strengthen());
        }
        for (text, line, col) in &self.bad_words {
            bad.push(checked_word(text, &alphabet, *line, *col)?);
        }
        if bad.is_empty() {
            return Err(Error::Semantic("at least one `bad` pattern is required".into()));
        }
        let mut init_set = Vec::new();
        for (text, line, col) in &self.init_words {
            init_set.push(checked_word(text, &alphabet, *line, *col)?);
        }
        if init_set.is_empty() {
            init_set.push(ParameterizedSystem::default_init_word(&alphabet, init));
        }
        ParameterizedSystem::new(
            self.name.unwrap_or_else(|| "model".into()),
            alphabet,
            transitions,
            init,
            init_set,
            bad,
        )
    }
}

fn checked_word(text: &str, alphabet: &Alphabet, line: usize, col: usize) -> Result<CountedWord> {
    let w = parse_word(text, alphabet, line, col)?;
    if !w.is_well_formed() {
        return Err(Error::Semantic(format!("line {line}: counted word is not well formed")));
    }
    Ok(w)
}

fn parse_transition(raw: &str, rest: &str, line: usize) -> Result<TransitionSpec> {
    let col = |part: &str| column_of(raw, part);
    let split = rest
        .char_indices()
        .find(|&(i, c)| c == ':' && rest[i + 1..].starts_with(char::is_whitespace))
        .map(|(i, _)| i)
        .ok_or_else(|| syntax(line, col(rest), "expected `<id>: <source> -> <target>`"))?;
    let id = rest[..split].trim();
    if id.is_empty() {
        return Err(syntax(line, col(rest), "missing transition id"));
    }
    let body = &rest[split + 1..];
    let (source, after) = body
        .split_once("->")
        .ok_or_else(|| syntax(line, col(body), "expected `->`"))?;
    let source = source.trim();
    if source.is_empty() {
        return Err(syntax(line, col(body), "missing source state"));
    }
    let after_trim = after.trim_start();
    let (target, guard_text) = after_trim
        .split_once(char::is_whitespace)
        .unwrap_or((after_trim, ""));
    if target.is_empty() {
        return Err(syntax(line, col(after), "missing target state"));
    }
    let guard_text = guard_text.trim();
    let guard = if guard_text.is_empty() {
        None
    } else {
        let (keyword, set) = guard_text.split_once(char::is_whitespace).unwrap_or((guard_text, ""));
        let quantifier = Quantifier::from_keyword(keyword)
            .ok_or_else(|| syntax(line, col(guard_text), format!("unknown quantifier `{keyword}`")))?;
        let set = set.trim();
        let inner = set
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| syntax(line, col(keyword) + keyword.len() + 1, "expected `{...}` witness set"))?;
        let witnesses: Vec<String> = inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        Some(GuardSpec { quantifier, witnesses })
    };
    Ok(TransitionSpec {
        id: id.to_string(),
        source: source.to_string(),
        target: target.to_string(),
        guard,
        line,
    })
}

/// Parses and validates a model.
pub fn parse_model(text: &str) -> Result<ParameterizedSystem> {
    ModelFile::parse(text)?.into_system()
}
