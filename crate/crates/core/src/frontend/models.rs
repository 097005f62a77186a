//! The four bundled mutual exclusion benchmarks.

use crate::error::{Error, Result};
use crate::frontend::parser::parse_model;
use crate::system::ParameterizedSystem;

pub const BURNS: &str = include_str!("../../models/burns.model");
pub const SZYMANSKI_COMPACT: &str = include_str!("../../models/szymanski_compact.model");
pub const SZYMANSKI: &str = include_str!("../../models/szymanski.model");
pub const GRIBOMONT_ZENNER: &str = include_str!("../../models/gribomont_zenner.model");

/// `(name, model text)` in benchmark order.
pub const BUNDLED: [(&str, &str); 4] = [
    ("burns", BURNS),
    ("szymanski_compact", SZYMANSKI_COMPACT),
    ("szymanski", SZYMANSKI),
    ("gribomont_zenner", GRIBOMONT_ZENNER),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn load(name: &str) -> Result<ParameterizedSystem> {
    let text = bundled(name).ok_or_else(|| Error::Usage(format!("no bundled model named `{name}`")))?;
    parse_model(text)
}
