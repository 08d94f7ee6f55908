//! Named constraints used in examples, tests and the CLI.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gadic::QuotientSequence;
use crate::index_set::IndexSet;
use crate::missing_digits::{fixed_bits_rule, DigitConstraint, DigitSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "kempner10",
        summary: "base 10, digit 9 forbidden everywhere",
    },
    Preset {
        name: "base-g-no-c",
        summary: "base g, digit c forbidden everywhere (defaults g = 3, c = 0)",
    },
    Preset {
        name: "power2-no-zero",
        summary: "quotients 2^(i+1), digit 0 forbidden everywhere",
    },
    Preset {
        name: "fixed-bits",
        summary: "binary, bit 0 forced at positions 1, 2, 4, 8, ...",
    },
    Preset {
        name: "div-log",
        summary: "binary, digit 0 forbidden at positions 4^j",
    },
    Preset {
        name: "open-boundary",
        summary: "binary, digit 0 forbidden at positions 2^j",
    },
];

/// Parameters of the `base-g-no-c` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaseParams {
    pub g: u64,
    pub c: u64,
}

impl Default for BaseParams {
    fn default() -> Self {
        BaseParams { g: 3, c: 0 }
    }
}

fn bounded(d: u64) -> Result<QuotientSequence> {
    QuotientSequence::constant(d)?.with_bound_hint(d)
}

pub fn preset(name: &str) -> Result<DigitConstraint> {
    preset_with(name, BaseParams::default())
}

/// Builds a preset; `params` only affects `base-g-no-c`.
pub fn preset_with(name: &str, params: BaseParams) -> Result<DigitConstraint> {
    match name {
        "kempner10" => DigitConstraint::uniform(bounded(10)?, IndexSet::All, DigitSet::listed([9])),
        "base-g-no-c" => DigitConstraint::uniform(bounded(params.g)?, IndexSet::All, DigitSet::listed([params.c])),
        "power2-no-zero" => DigitConstraint::uniform(QuotientSequence::power(2)?, IndexSet::All, DigitSet::listed([0])),
        "fixed-bits" => fixed_bits_rule(IndexSet::PowersOf(2), 0, &BTreeMap::new()),
        "div-log" => DigitConstraint::uniform(bounded(2)?, IndexSet::PowersOf(4), DigitSet::listed([0])),
        "open-boundary" => DigitConstraint::uniform(bounded(2)?, IndexSet::PowersOf(2), DigitSet::listed([0])),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}
