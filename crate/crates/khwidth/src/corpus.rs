//! Fixtures shipped under `corpus/`, embedded at build time.

use crate::error::{Error, Result};
use crate::format::{parse, Fixture};

macro_rules! fixtures {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../../corpus/", $name, ".txt")))),*]
    };
}

/// `(name, text)` for every fixture.
pub const FIXTURES: &[(&str, &str)] = fixtures![
    "unknot",
    "unlink2",
    "trefoil",
    "hopf",
    "cinquefoil",
    "4_1",
    "10_124",
    "fig8-tau0",
    "trivial",
    "fig8",
    "trefoil-tangle",
    "pretzel-5",
    "pretzel-5-alt",
];

pub fn load(name: &str) -> Result<Fixture> {
    let (_, text) = FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Invalid(format!("no corpus fixture named {name:?}")))?;
    parse(text)
}

pub fn all() -> Result<Vec<Fixture>> {
    FIXTURES.iter().map(|(_, t)| parse(t)).collect()
}
