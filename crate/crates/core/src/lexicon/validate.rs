use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    UnmappedRoot,
    UnmappedTam,
    UnmappedVibhakti,
    UnmappedQmarker,
    MissingTargetRoot,
    UnknownGroupRoot,
    ParadigmCategoryMismatch,
    UnanalyzableStandard,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
    pub location: Option<Location>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Some(loc) => write!(f, "{loc}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Case values that carry no vibhakti of their own.
pub(crate) fn is_null_case(value: &str) -> bool {
    value == "0" || value == "oblique" || (value.len() > 1 && value.starts_with('*') && value.ends_with('*'))
}

pub fn validate_lexicon(lex: &Lexicon) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut push = |kind, message: String, location: Option<&Location>| {
        out.push(Diagnostic {
            kind,
            message,
            location: location.cloned(),
        })
    };

    for e in lex.source.roots() {
        if e.category != Category::Punctuation && lex.root_mapping(&e.root, e.category).is_none() {
            push(
                DiagnosticKind::UnmappedRoot,
                format!("source root `{}` ({}) has no mapping", e.root, e.category),
                Some(&e.location),
            );
        }
    }

    let mut seen_tam = BTreeSet::new();
    let mut seen_case = BTreeSet::new();
    let mut seen_q = BTreeSet::new();
    for s in lex.source.suffixes() {
        for tam in s.features.get(FeatureKey::Tam).into_iter().flat_map(|v| v.alternatives()) {
            if lex.tam_mapping(tam).is_none() && seen_tam.insert(tam.clone()) {
                push(
                    DiagnosticKind::UnmappedTam,
                    format!("TAM `{tam}` has no TAM mapping"),
                    Some(&s.location),
                );
            }
        }
        for case in s.features.get(FeatureKey::Case).into_iter().flat_map(|v| v.alternatives()) {
            if !is_null_case(case)
                && lex.root_mapping(case, Category::Postposition).is_none()
                && seen_case.insert(case.clone())
            {
                push(
                    DiagnosticKind::UnmappedVibhakti,
                    format!("case `{case}` has no postposition mapping"),
                    Some(&s.location),
                );
            }
        }
        for q in s.features.get(FeatureKey::Qmarker).into_iter().flat_map(|v| v.alternatives()) {
            if lex.root_mapping(q, Category::Particle).is_none() && seen_q.insert(q.clone()) {
                push(
                    DiagnosticKind::UnmappedQmarker,
                    format!("question marker `{q}` has no particle mapping"),
                    Some(&s.location),
                );
            }
        }
    }

    let check_target = |t: &TargetRoot, what: &str, push: &mut dyn FnMut(DiagnosticKind, String, Option<&Location>), loc: Option<&Location>| {
        if lex.target.lookup_entry(&t.root, t.category).is_empty() {
            push(
                DiagnosticKind::MissingTargetRoot,
                format!(
                    "{what} maps to `{}` ({}) which is not in the target dictionary",
                    t.root, t.category
                ),
                loc,
            );
        }
    };
    for m in &lex.root_maps {
        for t in &m.targets {
            check_target(t, &format!("`{}`", m.source_root), &mut push, None);
        }
    }

    for (lang, side) in [(&lex.source, "source"), (&lex.target, "target")] {
        for g in lang.groups() {
            for item in &g.items {
                if let ItemMatcher::Root { root, category } = &item.matcher {
                    let known = lang
                        .lookup_root(root)
                        .iter()
                        .any(|e| category.map_or(true, |c| c == e.category));
                    if !known {
                        push(
                            DiagnosticKind::UnknownGroupRoot,
                            format!("group pattern names `{root}`, unknown to the {side} dictionary"),
                            Some(&g.location),
                        );
                    }
                }
            }
            if side == "source" {
                if let Some(meaning) = &g.meaning {
                    for t in &meaning.targets {
                        check_target(t, "fixed expression", &mut push, Some(&g.location));
                    }
                }
            }
        }
        for e in lang.roots() {
            if let Some(row) = lang.paradigm_rows(&e.paradigm).find(|r| r.category != e.category) {
                push(
                    DiagnosticKind::ParadigmCategoryMismatch,
                    format!(
                        "{side} root `{}` is a {} but paradigm `{}` holds {} suffixes",
                        e.root, e.category, e.paradigm, row.category
                    ),
                    Some(&e.location),
                );
            }
        }
    }

    for v in lex.variants() {
        if v.kind == VariantKind::Spelling
            && lex.source.lookup_root(&v.standard).is_empty()
            && !v.standard.contains(' ')
            && crate::morph::analyze_word(&v.standard, lex).is_empty()
        {
            push(
                DiagnosticKind::UnanalyzableStandard,
                format!("standard spelling `{}` does not analyze", v.standard),
                None,
            );
        }
    }

    out
}
