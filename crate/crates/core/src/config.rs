//! JSON configuration: a sequence, a digit constraint and optional run
//! parameters.
//!
//! ```json
//! {
//!   "sequence": { "kind": "constant", "d": 10, "bound_hint": 10 },
//!   "constraint": {
//!     "index_set": { "kind": "all" },
//!     "forbidden": { "default": [9], "overrides": { "3": [8, 9] } }
//!   }
//! }
//! ```
//!
//! A forbidden set may also be the string `"nonzero"`, meaning `[1, d_i - 1]`.
//! Errors carry the path of the offending field.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadic::{Extension, QuotientRule, QuotientSequence};
use crate::index_set::IndexSet;
use crate::missing_digits::{DigitConstraint, DigitSet};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub sequence: SequenceSpec,
    pub constraint: ConstraintSpec,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    Constant,
    Explicit,
    Power,
    Factorial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtendSpec {
    RepeatLast,
    Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub kind: SequenceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extend: Option<ExtendSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_hint: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexSetKind {
    All,
    Explicit,
    Arithmetic,
    PowersOf,
    Complement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexSetSpec {
    pub kind: IndexSetKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub of: Option<Box<IndexSetSpec>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Keyword {
    Nonzero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DigitSetSpec {
    Digits(Vec<u64>),
    Keyword(Keyword),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForbiddenSpec {
    pub default: DigitSetSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<usize, DigitSetSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSpec {
    pub index_set: IndexSetSpec,
    pub forbidden: ForbiddenSpec,
}

/// Defaults for CLI operations; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// `"p/q"` or a decimal such as `"0.4"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_window: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i_window: Option<usize>,
}

impl Params {
    pub fn is_empty(&self) -> bool {
        *self == Params::default()
    }
}

fn required<T: Copy>(value: Option<T>, path: &str) -> Result<T> {
    value.ok_or_else(|| Error::ConfigInvalid {
        path: path.into(),
        message: "missing field".into(),
    })
}

impl SequenceSpec {
    pub fn build(&self) -> Result<QuotientSequence> {
        let rule = match self.kind {
            SequenceKind::Constant => QuotientRule::Constant(required(self.d, "sequence.d")?),
            SequenceKind::Explicit => QuotientRule::Explicit {
                values: self.values.clone().ok_or_else(|| Error::ConfigInvalid {
                    path: "sequence.values".into(),
                    message: "missing field".into(),
                })?,
                extension: match self.extend.unwrap_or(ExtendSpec::RepeatLast) {
                    ExtendSpec::RepeatLast => Extension::RepeatLast,
                    ExtendSpec::Cycle => Extension::Cycle,
                },
            },
            SequenceKind::Power => QuotientRule::Power {
                base: required(self.base, "sequence.base")?,
            },
            SequenceKind::Factorial => QuotientRule::Factorial,
        };
        QuotientSequence::new(rule, self.bound_hint).map_err(|e| {
            let path = match e {
                Error::BoundHintViolated { .. } => "sequence.bound_hint",
                _ => match self.kind {
                    SequenceKind::Constant => "sequence.d",
                    SequenceKind::Explicit => "sequence.values",
                    _ => "sequence.base",
                },
            };
            Error::config(path, e)
        })
    }

    pub fn from_sequence(seq: &QuotientSequence) -> Self {
        let mut spec = SequenceSpec {
            kind: SequenceKind::Factorial,
            d: None,
            values: None,
            extend: None,
            base: None,
            bound_hint: seq.bound_hint(),
        };
        match seq.rule() {
            QuotientRule::Constant(d) => {
                spec.kind = SequenceKind::Constant;
                spec.d = Some(*d);
            }
            QuotientRule::Explicit { values, extension } => {
                spec.kind = SequenceKind::Explicit;
                spec.values = Some(values.clone());
                spec.extend = Some(match extension {
                    Extension::RepeatLast => ExtendSpec::RepeatLast,
                    Extension::Cycle => ExtendSpec::Cycle,
                });
            }
            QuotientRule::Power { base } => {
                spec.kind = SequenceKind::Power;
                spec.base = Some(*base);
            }
            QuotientRule::Factorial => {}
        }
        spec
    }
}

impl IndexSetSpec {
    fn bare(kind: IndexSetKind) -> Self {
        IndexSetSpec {
            kind,
            indices: None,
            first: None,
            step: None,
            base: None,
            of: None,
        }
    }

    pub fn build(&self) -> Result<IndexSet> {
        self.build_at("constraint.index_set")
    }

    fn build_at(&self, path: &str) -> Result<IndexSet> {
        let field = |name: &str| format!("{path}.{name}");
        let set = match self.kind {
            IndexSetKind::All => IndexSet::All,
            IndexSetKind::Explicit => IndexSet::explicit(self.indices.clone().ok_or_else(|| Error::ConfigInvalid {
                path: field("indices"),
                message: "missing field".into(),
            })?),
            IndexSetKind::Arithmetic => IndexSet::Arithmetic {
                first: self.first.unwrap_or(0),
                step: required(self.step, &field("step"))?,
            },
            IndexSetKind::PowersOf => IndexSet::PowersOf(required(self.base, &field("base"))?),
            IndexSetKind::Complement => {
                let inner = self.of.as_ref().ok_or_else(|| Error::ConfigInvalid {
                    path: field("of"),
                    message: "missing field".into(),
                })?;
                IndexSet::complement(inner.build_at(&field("of"))?)
            }
        };
        set.validate().map_err(|e| Error::config(path, e))?;
        Ok(set)
    }

    pub fn from_index_set(set: &IndexSet) -> Self {
        match set {
            IndexSet::All => Self::bare(IndexSetKind::All),
            IndexSet::Explicit(s) => IndexSetSpec {
                indices: Some(s.iter().copied().collect()),
                ..Self::bare(IndexSetKind::Explicit)
            },
            IndexSet::Arithmetic { first, step } => IndexSetSpec {
                first: Some(*first),
                step: Some(*step),
                ..Self::bare(IndexSetKind::Arithmetic)
            },
            IndexSet::PowersOf(b) => IndexSetSpec {
                base: Some(*b),
                ..Self::bare(IndexSetKind::PowersOf)
            },
            IndexSet::Complement(inner) => IndexSetSpec {
                of: Some(Box::new(Self::from_index_set(inner))),
                ..Self::bare(IndexSetKind::Complement)
            },
        }
    }
}

impl DigitSetSpec {
    fn build(&self) -> DigitSet {
        match self {
            DigitSetSpec::Digits(v) => DigitSet::listed(v.iter().copied()),
            DigitSetSpec::Keyword(Keyword::Nonzero) => DigitSet::NonZero,
        }
    }

    fn from_digit_set(set: &DigitSet) -> Self {
        match set {
            DigitSet::Listed(s) => DigitSetSpec::Digits(s.iter().copied().collect()),
            DigitSet::NonZero => DigitSetSpec::Keyword(Keyword::Nonzero),
        }
    }
}

impl Config {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Config> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Config = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::ConfigInvalid {
                path: if path == "." || path == "?" { "<root>".into() } else { path },
                message: e.into_inner().to_string(),
            }
        })?;
        config.build()?;
        config.delta()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn build(&self) -> Result<DigitConstraint> {
        let sequence = self.sequence.build()?;
        let index_set = self.constraint.index_set.build()?;
        let f = &self.constraint.forbidden;
        let overrides = f.overrides.iter().map(|(i, s)| (*i, s.build())).collect();
        DigitConstraint::new(sequence, index_set, f.default.build(), overrides).map_err(|e| {
            let index = match &e {
                Error::OverrideOutsideIndexSet { index }
                | Error::EmptyForbiddenSet { index }
                | Error::DigitOutOfRange { index, .. }
                | Error::ForbiddenSetNotProper { index, .. } => Some(*index),
                _ => None,
            };
            let path = match index {
                Some(i) if f.overrides.contains_key(&i) => format!("constraint.forbidden.overrides.{i}"),
                _ => "constraint.forbidden.default".into(),
            };
            Error::config(path, e)
        })
    }

    pub fn from_constraint(c: &DigitConstraint) -> Config {
        Config {
            sequence: SequenceSpec::from_sequence(c.sequence()),
            constraint: ConstraintSpec {
                index_set: IndexSetSpec::from_index_set(c.index_set()),
                forbidden: ForbiddenSpec {
                    default: DigitSetSpec::from_digit_set(c.default_forbidden()),
                    overrides: c
                        .overrides()
                        .iter()
                        .map(|(i, s)| (*i, DigitSetSpec::from_digit_set(s)))
                        .collect(),
                },
            },
            params: Params::default(),
        }
    }

    /// The `params.delta` override, parsed.
    pub fn delta(&self) -> Result<Option<Rational>> {
        self.params
            .delta
            .as_deref()
            .map(|s| parse_rational(s).map_err(|e| Error::config("params.delta", e)))
            .transpose()
    }
}

/// Parses `"p/q"`, an integer, or a decimal such as `"0.4"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InputOutOfRange(format!("`{s}` is not a rational number"));
    let s = s.trim();
    let int = |t: &str| t.parse::<BigInt>().map_err(|_| bad());
    if let Some((p, q)) = s.split_once('/') {
        let q = int(q)?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Ratio::new(int(p)?, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" { BigInt::zero() } else { int(whole)? };
        let scale = BigInt::from(BigUint::from(10u32).pow(frac.len() as u32));
        let mut num = whole.magnitude().clone() * scale.magnitude() + int(frac)?.magnitude();
        if negative {
            return Ok(Ratio::new(-BigInt::from(std::mem::take(&mut num)), scale));
        }
        return Ok(Ratio::new(BigInt::from(num), scale));
    }
    Ok(Ratio::from_integer(int(s)?))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::presets::{preset, PRESETS};
    use crate::ratio;

    const KEMPNER: &str = r#"{
        "sequence": { "kind": "constant", "d": 10, "bound_hint": 10 },
        "constraint": {
            "index_set": { "kind": "all" },
            "forbidden": { "default": [9] }
        }
    }"#;

    fn error_path(text: &str) -> String {
        match Config::from_json(text) {
            Err(Error::ConfigInvalid { path, .. }) => path,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn parses_kempner() {
        let config = Config::from_json(KEMPNER).unwrap();
        assert_eq!(config.build().unwrap(), preset("kempner10").unwrap());
    }

    #[test]
    fn presets_round_trip() {
        for p in PRESETS {
            let c = preset(p.name).unwrap();
            let config = Config::from_constraint(&c);
            let again = Config::from_json(&config.to_json()).unwrap();
            assert_eq!(again, config);
            assert_eq!(again.build().unwrap(), c);
        }
    }

    #[test]
    fn error_paths() {
        assert_eq!(error_path(&KEMPNER.replace("\"d\": 10", "\"d\": 1")), "sequence.d");
        assert_eq!(error_path(&KEMPNER.replace("\"bound_hint\": 10", "\"bound_hint\": 9")), "sequence.bound_hint");
        assert_eq!(error_path(&KEMPNER.replace("\"constant\"", "\"geometric\"")), "sequence.kind");
        assert_eq!(error_path(&KEMPNER.replace("[9]", "[10]")), "constraint.forbidden.default");
        assert_eq!(error_path(&KEMPNER.replace("[9]", "[9], \"overrides\": {\"2\": []}")), "constraint.forbidden.overrides.2");
        assert_eq!(error_path(&KEMPNER.replace("\"all\"", "\"powers-of\"")), "constraint.index_set.base");
        assert_eq!(
            error_path(&KEMPNER.replace(r#"{ "kind": "all" }"#, r#"{ "kind": "complement", "of": { "kind": "arithmetic", "step": 0 } }"#)),
            "constraint.index_set.of"
        );
        assert_eq!(error_path(&KEMPNER.replace("\"d\": 10", "\"d\": 10, \"colour\": 1")), "sequence.colour");
        assert_eq!(error_path(&KEMPNER.replace("\"d\": 10", "\"d\": -3")), "sequence.d");
        assert_eq!(error_path("{"), "<root>");
    }

    #[test]
    fn nonzero_keyword_and_params() {
        let text = r#"{
            "sequence": { "kind": "power", "base": 2 },
            "constraint": {
                "index_set": { "kind": "complement", "of": { "kind": "explicit", "indices": [0, 1] } },
                "forbidden": { "default": "nonzero" }
            },
            "params": { "max_k": 4, "delta": "2/5" }
        }"#;
        let config = Config::from_json(text).unwrap();
        assert_eq!(config.build().unwrap().default_forbidden(), &DigitSet::NonZero);
        assert_eq!(config.delta().unwrap(), Some(ratio(2u32.into(), 5u32.into())));
        assert_eq!(Config::from_json(&config.to_json()).unwrap(), config);
        let bad = text.replace("2/5", "two fifths");
        assert!(matches!(Config::from_json(&bad), Err(Error::ConfigInvalid { path, .. }) if path == "params.delta"));
    }

    #[test]
    fn rationals() {
        let q = |n: i64, d: i64| Ratio::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(parse_rational("2/5").unwrap(), q(2, 5));
        assert_eq!(parse_rational("0.4").unwrap(), q(2, 5));
        assert_eq!(parse_rational(".05").unwrap(), q(1, 20));
        assert_eq!(parse_rational("-1.5").unwrap(), q(-3, 2));
        assert_eq!(parse_rational("3").unwrap(), q(3, 1));
        for bad in ["", "1/0", "a", "1.", "1.2.3", "0.x"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    fn digit_set() -> impl Strategy<Value = DigitSetSpec> {
        prop_oneof![
            prop::collection::vec(0u64..1000, 0..4).prop_map(DigitSetSpec::Digits),
            Just(DigitSetSpec::Keyword(Keyword::Nonzero)),
        ]
    }

    fn index_set() -> impl Strategy<Value = IndexSetSpec> {
        let leaf = prop_oneof![
            Just(IndexSetSpec::bare(IndexSetKind::All)),
            prop::collection::vec(0usize..50, 0..5).prop_map(|v| IndexSetSpec {
                indices: Some(v),
                ..IndexSetSpec::bare(IndexSetKind::Explicit)
            }),
            (0usize..10, 1usize..5).prop_map(|(f, s)| IndexSetSpec {
                first: Some(f),
                step: Some(s),
                ..IndexSetSpec::bare(IndexSetKind::Arithmetic)
            }),
            (2u64..5).prop_map(|b| IndexSetSpec {
                base: Some(b),
                ..IndexSetSpec::bare(IndexSetKind::PowersOf)
            }),
        ];
        leaf.prop_recursive(2, 4, 1, |inner| {
            inner.prop_map(|s| IndexSetSpec {
                of: Some(Box::new(s)),
                ..IndexSetSpec::bare(IndexSetKind::Complement)
            })
        })
    }

    proptest! {
        #[test]
        fn serialization_is_lossless(
            d in 2u64..100,
            hint in prop::option::of(2u64..200),
            set in index_set(),
            default in digit_set(),
            overrides in prop::collection::btree_map(0usize..20, digit_set(), 0..3),
            max_k in prop::option::of(0usize..20),
        ) {
            let config = Config {
                sequence: SequenceSpec {
                    kind: SequenceKind::Constant,
                    d: Some(d),
                    values: None,
                    extend: None,
                    base: None,
                    bound_hint: hint,
                },
                constraint: ConstraintSpec { index_set: set, forbidden: ForbiddenSpec { default, overrides } },
                params: Params { max_k, ..Params::default() },
            };
            let text = config.to_json();
            let back: Config = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, &config);
        }
    }
}
