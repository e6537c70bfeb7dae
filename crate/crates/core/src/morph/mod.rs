//! Word analyzer (propose and test, with a one-level sandhi fallback) and
//! its inverse, the word synthesizer.

mod sandhi;
mod synth;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lexicon::{
    Category, FeatureBundle, JoinRule, Language, Lexicon, VariantEntry, INDECLINABLE,
};

pub use sandhi::{split_sandhi, split_sandhi_in};
pub use synth::{synthesize, SynthesisError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentRole {
    Root,
    Suffix,
    SandhiPart,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub surface: String,
    pub role: SegmentRole,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub root: String,
    /// Debug display name for entries that carry one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub category: Category,
    pub features: FeatureBundle,
    pub paradigm: String,
    pub segmentation: Vec<Segment>,
    /// The two halves of a sandhi analysis; empty otherwise.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<Analysis>,
}

impl Analysis {
    pub fn is_compound(&self) -> bool {
        !self.parts.is_empty()
    }

    pub fn surface(&self) -> String {
        self.segmentation.iter().map(|s| s.surface.as_str()).collect()
    }

    /// The analyzer debug format: `root{cat=n,number=sg,case=oblique}`.
    pub fn debug_form(&self) -> String {
        if self.is_compound() {
            return self
                .parts
                .iter()
                .map(Analysis::debug_form)
                .collect::<Vec<_>>()
                .join("+");
        }
        let mut s = format!(
            "{}{{cat={}",
            self.label.as_deref().unwrap_or(&self.root),
            self.category.abbrev()
        );
        for (k, v) in self.features.iter() {
            s.push_str(&format!(",{k}={v}"));
        }
        s.push('}');
        s
    }
}

impl fmt::Display for Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.debug_form())
    }
}

/// `/`-separated analyses, as printed by `anusaaraka analyze`.
pub fn debug_format(analyses: &[Analysis]) -> String {
    analyses
        .iter()
        .map(Analysis::debug_form)
        .collect::<Vec<_>>()
        .join("/")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCandidate {
    pub root_part: String,
    pub suffix_part: String,
    /// `None` when the suffix attaches without boundary changes.
    pub applied_join_rule: Option<JoinRule>,
    pub root: String,
    pub(crate) root_index: usize,
    pub(crate) suffix_index: usize,
}

/// Every (root, suffix) breakup of `word` where both the root dictionary and
/// the suffix table agree. Ordered by split point, then suffix row, then
/// root entry.
pub fn propose_splits(word: &str, lang: &Language) -> Vec<SplitCandidate> {
    let mut out = Vec::new();
    let max = lang.max_suffix_len();
    for (i, _) in word.char_indices().skip(1).chain(std::iter::once((word.len(), ' '))) {
        if i == 0 || word.len() - i > max {
            continue;
        }
        let (root_part, suffix_part) = word.split_at(i);
        for &si in lang.suffix_indices(suffix_part) {
            let suffix = &lang.suffixes()[si];
            let Some(root) = suffix.join.recover_root(root_part) else {
                continue;
            };
            for &ri in lang.root_indices(&root) {
                if lang.roots()[ri].paradigm != suffix.paradigm {
                    continue;
                }
                out.push(SplitCandidate {
                    root_part: root_part.to_owned(),
                    suffix_part: suffix_part.to_owned(),
                    applied_join_rule: (!suffix.join.is_identity()).then(|| suffix.join.clone()),
                    root: root.clone(),
                    root_index: ri,
                    suffix_index: si,
                });
            }
        }
    }
    out
}

/// Dictionary and suffix analyses only, no sandhi.
pub fn analyze_plain(word: &str, lang: &Language) -> Vec<Analysis> {
    let mut out: Vec<Analysis> = lang
        .lookup_root(word)
        .into_iter()
        .filter(|e| e.paradigm == INDECLINABLE)
        .map(|e| Analysis {
            root: e.root.clone(),
            label: e.label.clone(),
            category: e.category,
            features: e.inherent.clone(),
            paradigm: e.paradigm.clone(),
            segmentation: vec![Segment {
                surface: word.to_owned(),
                role: SegmentRole::Root,
            }],
            parts: Vec::new(),
        })
        .collect();
    for c in propose_splits(word, lang) {
        let entry = &lang.roots()[c.root_index];
        let suffix = &lang.suffixes()[c.suffix_index];
        let mut segmentation = vec![Segment {
            surface: c.root_part.clone(),
            role: SegmentRole::Root,
        }];
        if !c.suffix_part.is_empty() {
            segmentation.push(Segment {
                surface: c.suffix_part.clone(),
                role: SegmentRole::Suffix,
            });
        }
        out.push(Analysis {
            root: entry.root.clone(),
            label: entry.label.clone(),
            category: entry.category,
            features: entry.inherent.merged(&suffix.features),
            paradigm: entry.paradigm.clone(),
            segmentation,
            parts: Vec::new(),
        });
    }
    out
}

/// All analyses of `word` in one language: plain analyses, or, only when
/// there are none, sandhi analyses using `junctions`.
pub fn analyze_in(word: &str, lang: &Language, junctions: &[&VariantEntry]) -> Vec<Analysis> {
    let plain = analyze_plain(word, lang);
    if !plain.is_empty() || word.chars().count() < 2 {
        return plain;
    }
    sandhi::compound_analyses(word, lang, junctions)
}

/// Source-side analysis of one word. Never disambiguates; an unknown word
/// yields an empty list.
pub fn analyze_word(word: &str, lex: &Lexicon) -> Vec<Analysis> {
    let junctions: Vec<&VariantEntry> = lex.junction_rules().collect();
    analyze_in(word, lex.source(), &junctions)
}
