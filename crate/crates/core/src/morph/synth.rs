use thiserror::Error;

use crate::lexicon::{Category, FeatureBundle, Language, INDECLINABLE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("`{root}` ({category}) is not in the dictionary")]
    UnknownRoot { root: String, category: Category },
    #[error("no suffix of `{root}` realizes {{{features}}}")]
    NoMatch { root: String, features: String },
    #[error("{{{features}}} is ambiguous for `{root}`: {}", candidates.join(", "))]
    Ambiguous {
        root: String,
        features: String,
        candidates: Vec<String>,
    },
}

/// Generates the surface form of `root` with the requested features.
///
/// A suffix row matches when it carries exactly the requested keys and each
/// row value admits the requested one.
pub fn synthesize(
    root: &str,
    category: Category,
    features: &FeatureBundle,
    lang: &Language,
) -> Result<String, SynthesisError> {
    let entries = lang.lookup_entry(root, category);
    if entries.is_empty() {
        return Err(SynthesisError::UnknownRoot {
            root: root.to_owned(),
            category,
        });
    }
    let mut forms: Vec<String> = Vec::new();
    for entry in entries {
        if entry.paradigm == INDECLINABLE {
            if features.is_empty() {
                forms.push(entry.root.clone());
            }
            continue;
        }
        for row in lang.paradigm_rows(&entry.paradigm) {
            if row.features.len() != features.len() {
                continue;
            }
            let fits = features.iter().all(|(k, wanted)| {
                row.features
                    .get(k)
                    .is_some_and(|offered| offered.admits(k, wanted))
            });
            if !fits {
                continue;
            }
            if let Some(stem) = row.join.attach_stem(&entry.root) {
                forms.push(format!("{stem}{}", row.surface));
            }
        }
    }
    forms.dedup();
    let mut distinct = forms.clone();
    distinct.sort();
    distinct.dedup();
    match distinct.len() {
        0 => Err(SynthesisError::NoMatch {
            root: root.to_owned(),
            features: features.to_string(),
        }),
        1 => Ok(forms.swap_remove(0)),
        _ => Err(SynthesisError::Ambiguous {
            root: root.to_owned(),
            features: features.to_string(),
            candidates: forms,
        }),
    }
}
