//! Categories, feature keys and feature bundles.
//!
//! Bundles serialize as `key=value` pairs joined by commas. A value is
//! either the wildcard `any` or an ordered, non-empty set of alternatives
//! joined by `|` (`person=2|3`).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Noun,
    Verb,
    Pronoun,
    Adjective,
    Postposition,
    Auxiliary,
    Particle,
    Punctuation,
}

impl Category {
    pub const ALL: [Category; 8] = [
        Category::Noun,
        Category::Verb,
        Category::Pronoun,
        Category::Adjective,
        Category::Postposition,
        Category::Auxiliary,
        Category::Particle,
        Category::Punctuation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::Noun => "noun",
            Category::Verb => "verb",
            Category::Pronoun => "pronoun",
            Category::Adjective => "adjective",
            Category::Postposition => "postposition",
            Category::Auxiliary => "auxiliary",
            Category::Particle => "particle",
            Category::Punctuation => "punctuation",
        }
    }

    /// Short tag used by the analyzer debug format (`cat=n`).
    pub fn abbrev(self) -> &'static str {
        match self {
            Category::Noun => "n",
            Category::Verb => "v",
            Category::Pronoun => "pn",
            Category::Adjective => "adj",
            Category::Postposition => "psp",
            Category::Auxiliary => "aux",
            Category::Particle => "part",
            Category::Punctuation => "punc",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.name() == s || c.abbrev() == s)
            .ok_or_else(|| format!("unknown category `{s}`"))
    }
}

/// Closed feature vocabulary. Declaration order is display order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FeatureKey {
    #[serde(rename = "gender")]
    Gender,
    #[serde(rename = "number")]
    Number,
    #[serde(rename = "person")]
    Person,
    #[serde(rename = "case")]
    Case,
    #[serde(rename = "TAM")]
    Tam,
    #[serde(rename = "gnp")]
    Gnp,
    #[serde(rename = "qmarker")]
    Qmarker,
}

impl FeatureKey {
    pub const ALL: [FeatureKey; 7] = [
        FeatureKey::Gender,
        FeatureKey::Number,
        FeatureKey::Person,
        FeatureKey::Case,
        FeatureKey::Tam,
        FeatureKey::Gnp,
        FeatureKey::Qmarker,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FeatureKey::Gender => "gender",
            FeatureKey::Number => "number",
            FeatureKey::Person => "person",
            FeatureKey::Case => "case",
            FeatureKey::Tam => "TAM",
            FeatureKey::Gnp => "gnp",
            FeatureKey::Qmarker => "qmarker",
        }
    }

    /// Keys a suffix row may contribute.
    pub fn is_suffix_key(self) -> bool {
        matches!(
            self,
            FeatureKey::Number
                | FeatureKey::Case
                | FeatureKey::Tam
                | FeatureKey::Gnp
                | FeatureKey::Qmarker
        )
    }
}

impl fmt::Display for FeatureKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FeatureKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FeatureKey::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown feature key `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FeatureValue {
    Any,
    /// Non-empty, ordered alternatives.
    OneOf(Vec<String>),
}

impl FeatureValue {
    pub fn single(v: impl Into<String>) -> Self {
        FeatureValue::OneOf(vec![v.into()])
    }

    pub fn is_any(&self) -> bool {
        matches!(self, FeatureValue::Any)
    }

    /// The value when it is a single concrete symbol.
    pub fn as_single(&self) -> Option<&str> {
        match self {
            FeatureValue::OneOf(vs) if vs.len() == 1 => Some(&vs[0]),
            _ => None,
        }
    }

    pub fn alternatives(&self) -> &[String] {
        match self {
            FeatureValue::Any => &[],
            FeatureValue::OneOf(vs) => vs,
        }
    }

    /// Does `self` (an offered value, e.g. from a table row) admit every
    /// alternative of `request`?
    pub fn admits(&self, key: FeatureKey, request: &FeatureValue) -> bool {
        match (self, request) {
            (FeatureValue::Any, _) => true,
            (FeatureValue::OneOf(_), FeatureValue::Any) => false,
            (FeatureValue::OneOf(offered), FeatureValue::OneOf(wanted)) => wanted
                .iter()
                .all(|w| offered.iter().any(|o| symbol_admits(key, o, w))),
        }
    }

    /// True when some alternative of `self` is compatible with some
    /// alternative of `other`.
    pub fn overlaps(&self, key: FeatureKey, other: &FeatureValue) -> bool {
        match (self, other) {
            (FeatureValue::Any, _) | (_, FeatureValue::Any) => true,
            (FeatureValue::OneOf(a), FeatureValue::OneOf(b)) => a
                .iter()
                .any(|x| b.iter().any(|y| symbol_admits(key, x, y) || symbol_admits(key, y, x))),
        }
    }
}

fn symbol_admits(key: FeatureKey, offered: &str, wanted: &str) -> bool {
    if key == FeatureKey::Gnp {
        match (Gnp::parse(offered), Gnp::parse(wanted)) {
            (Some(o), Some(w)) => o.admits(&w),
            _ => offered == wanted,
        }
    } else {
        offered == wanted
    }
}

impl fmt::Display for FeatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureValue::Any => f.write_str("any"),
            FeatureValue::OneOf(vs) => f.write_str(&vs.join("|")),
        }
    }
}

impl FromStr for FeatureValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "any" {
            return Ok(FeatureValue::Any);
        }
        let parts: Vec<String> = s.split('|').map(str::to_owned).collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(format!("empty alternative in value `{s}`"));
        }
        Ok(FeatureValue::OneOf(parts))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureBundle(BTreeMap<FeatureKey, FeatureValue>);

impl FeatureBundle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: FeatureKey, value: FeatureValue) -> Self {
        self.0.insert(key, value);
        self
    }

    pub fn get(&self, key: FeatureKey) -> Option<&FeatureValue> {
        self.0.get(&key)
    }

    pub fn insert(&mut self, key: FeatureKey, value: FeatureValue) {
        self.0.insert(key, value);
    }

    pub fn remove(&mut self, key: FeatureKey) -> Option<FeatureValue> {
        self.0.remove(&key)
    }

    pub fn contains(&self, key: FeatureKey) -> bool {
        self.0.contains_key(&key)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (FeatureKey, &FeatureValue)> {
        self.0.iter().map(|(k, v)| (*k, v))
    }

    pub fn keys(&self) -> impl Iterator<Item = FeatureKey> + '_ {
        self.0.keys().copied()
    }

    /// Right-biased union.
    pub fn merged(&self, other: &FeatureBundle) -> FeatureBundle {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.0.insert(k, v.clone());
        }
        out
    }

    pub fn single(&self, key: FeatureKey) -> Option<&str> {
        self.get(key).and_then(FeatureValue::as_single)
    }
}

impl fmt::Display for FeatureBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        let mut first = true;
        for (k, v) in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for FeatureBundle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut out = FeatureBundle::new();
        if s.is_empty() || s == "-" {
            return Ok(out);
        }
        for pair in s.split(',') {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, found `{pair}`"))?;
            let key: FeatureKey = k.trim().parse()?;
            let value: FeatureValue = v.trim().parse()?;
            if out.0.insert(key, value).is_some() {
                return Err(format!("feature `{key}` given twice"));
            }
        }
        Ok(out)
    }
}

impl FromIterator<(FeatureKey, FeatureValue)> for FeatureBundle {
    fn from_iter<I: IntoIterator<Item = (FeatureKey, FeatureValue)>>(iter: I) -> Self {
        FeatureBundle(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gender {
    Any,
    Masc,
    Fem,
    Neuter,
    NonMasc,
    NonNeuter,
}

impl Gender {
    fn parse(s: &str) -> Option<Gender> {
        Some(match s {
            "any" => Gender::Any,
            "m" | "masc" => Gender::Masc,
            "f" | "fem" => Gender::Fem,
            "n" | "neuter" => Gender::Neuter,
            "non-masc" | "~m" => Gender::NonMasc,
            "non-neuter" | "~n" => Gender::NonNeuter,
            _ => return None,
        })
    }

    fn admits(self, wanted: Gender) -> bool {
        use Gender::*;
        match (self, wanted) {
            (Any, _) | (_, Any) => true,
            (a, b) if a == b => true,
            (NonMasc, Fem | Neuter) => true,
            (NonNeuter, Masc | Fem) => true,
            _ => false,
        }
    }

    /// Display abbreviation used in dialect annotations; `None` for `any`.
    pub fn abbrev(self) -> Option<&'static str> {
        match self {
            Gender::Any => None,
            Gender::Masc => Some("m."),
            Gender::Fem => Some("f."),
            Gender::Neuter => Some("n."),
            Gender::NonMasc => Some("~m."),
            Gender::NonNeuter => Some("~n."),
        }
    }

    pub fn from_abbrev(s: &str) -> Option<Gender> {
        [
            Gender::Masc,
            Gender::Fem,
            Gender::Neuter,
            Gender::NonMasc,
            Gender::NonNeuter,
        ]
        .into_iter()
        .find(|g| g.abbrev() == Some(s))
    }

    /// Canonical data spelling.
    pub fn symbol(self) -> &'static str {
        match self {
            Gender::Any => "any",
            Gender::Masc => "m",
            Gender::Fem => "f",
            Gender::Neuter => "n",
            Gender::NonMasc => "non-masc",
            Gender::NonNeuter => "non-neuter",
        }
    }
}

/// A parsed `gender_number_person` value such as `non-neuter_pl_3`.
/// Each slot may be `any`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Gnp {
    pub gender: Gender,
    pub number: Option<String>,
    pub person: Option<String>,
}

impl Gnp {
    pub fn parse(s: &str) -> Option<Gnp> {
        if s == "any" {
            return Some(Gnp {
                gender: Gender::Any,
                number: None,
                person: None,
            });
        }
        let mut it = s.split('_');
        let gender = Gender::parse(it.next()?)?;
        let number = it.next()?;
        let person = it.next()?;
        if it.next().is_some() || !matches!(number, "sg" | "pl" | "any") {
            return None;
        }
        if person != "any" && !person.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let slot = |v: &str| (v != "any").then(|| v.to_owned());
        Some(Gnp {
            gender,
            number: slot(number),
            person: slot(person),
        })
    }

    pub fn admits(&self, wanted: &Gnp) -> bool {
        let slot_ok = |a: &Option<String>, b: &Option<String>| match (a, b) {
            (Some(x), Some(y)) => x == y,
            _ => true,
        };
        self.gender.admits(wanted.gender)
            && slot_ok(&self.number, &wanted.number)
            && slot_ok(&self.person, &wanted.person)
    }

    /// Fills unspecified slots of `self` from `defaults`.
    pub fn filled_from(&self, defaults: &Gnp) -> Gnp {
        Gnp {
            gender: if self.gender == Gender::Any {
                defaults.gender
            } else {
                self.gender
            },
            number: self.number.clone().or_else(|| defaults.number.clone()),
            person: self.person.clone().or_else(|| defaults.person.clone()),
        }
    }

    pub fn is_fully_specified(&self) -> bool {
        self.gender != Gender::Any && self.number.is_some() && self.person.is_some()
    }
}

impl fmt::Display for Gnp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gender == Gender::Any && self.number.is_none() && self.person.is_none() {
            return f.write_str("any");
        }
        write!(
            f,
            "{}_{}_{}",
            self.gender.symbol(),
            self.number.as_deref().unwrap_or("any"),
            self.person.as_deref().unwrap_or("any")
        )
    }
}

macro_rules! string_serde {
    ($t:ty, $parse:expr) => {
        impl From<$t> for String {
            fn from(v: $t) -> String {
                v.to_string()
            }
        }

        impl TryFrom<String> for $t {
            type Error = String;

            fn try_from(s: String) -> Result<Self, String> {
                $parse(&s)
            }
        }
    };
}

string_serde!(FeatureValue, |s: &str| s.parse::<FeatureValue>());
string_serde!(Gnp, |s: &str| Gnp::parse(s).ok_or_else(|| format!("bad gnp `{s}`")));
