use crate::lexicon::{Language, Lexicon, VariantEntry};

use super::{analyze_plain, Analysis, Segment, SegmentRole};

/// A binary breakup of a word: where the junction starts, what was written
/// there, and the restored halves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Breakup {
    pub at: usize,
    pub junction: String,
    pub left: String,
    pub right: String,
}

pub(crate) fn breakups(word: &str, junctions: &[&VariantEntry]) -> Vec<Breakup> {
    let mut out = Vec::new();
    for (at, _) in word.char_indices().skip(1) {
        out.push(Breakup {
            at,
            junction: String::new(),
            left: word[..at].to_owned(),
            right: word[at..].to_owned(),
        });
        for rule in junctions {
            let Some((l, r)) = rule.junction() else {
                continue;
            };
            let Some(rest) = word[at..].strip_prefix(rule.variant.as_str()) else {
                continue;
            };
            let right = format!("{r}{rest}");
            if right.is_empty() {
                continue;
            }
            out.push(Breakup {
                at,
                junction: rule.variant.clone(),
                left: format!("{}{l}", &word[..at]),
                right,
            });
        }
    }
    out
}

/// Two-part splits of `word` where both halves analyze without further
/// sandhi. Ordered by split point, plain junction first, then rule order.
pub fn split_sandhi_in(
    word: &str,
    lang: &Language,
    junctions: &[&VariantEntry],
) -> Vec<(Vec<Analysis>, Vec<Analysis>)> {
    breakups(word, junctions)
        .into_iter()
        .filter_map(|b| {
            let left = analyze_plain(&b.left, lang);
            if left.is_empty() {
                return None;
            }
            let right = analyze_plain(&b.right, lang);
            (!right.is_empty()).then_some((left, right))
        })
        .collect()
}

pub fn split_sandhi(word: &str, lex: &Lexicon) -> Vec<(Vec<Analysis>, Vec<Analysis>)> {
    let junctions: Vec<&VariantEntry> = lex.junction_rules().collect();
    split_sandhi_in(word, lex.source(), &junctions)
}

pub(super) fn compound_analyses(
    word: &str,
    lang: &Language,
    junctions: &[&VariantEntry],
) -> Vec<Analysis> {
    let mut out = Vec::new();
    for b in breakups(word, junctions) {
        let left = analyze_plain(&b.left, lang);
        if left.is_empty() {
            continue;
        }
        let right = analyze_plain(&b.right, lang);
        let rest = &word[b.at + b.junction.len()..];
        for l in &left {
            for r in &right {
                let mut segmentation = vec![Segment {
                    surface: word[..b.at].to_owned(),
                    role: SegmentRole::SandhiPart,
                }];
                if !b.junction.is_empty() {
                    segmentation.push(Segment {
                        surface: b.junction.clone(),
                        role: SegmentRole::SandhiPart,
                    });
                }
                if !rest.is_empty() {
                    segmentation.push(Segment {
                        surface: rest.to_owned(),
                        role: SegmentRole::SandhiPart,
                    });
                }
                out.push(Analysis {
                    root: format!("{}+{}", l.root, r.root),
                    label: None,
                    category: r.category,
                    features: r.features.clone(),
                    paradigm: r.paradigm.clone(),
                    segmentation,
                    parts: vec![l.clone(), r.clone()],
                });
            }
        }
    }
    out
}
