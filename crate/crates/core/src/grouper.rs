//! Local word grouper: combines analyzed tokens into fixed-order units, and
//! the target-side splitter that lays a mapped group out as synthesis
//! requests.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{
    is_null_case, Category, FeatureBundle, FeatureKey, GroupKind, GroupPattern, Language, Lexicon,
    Quantifier, RootMapping,
};
use crate::morph::Analysis;
use crate::transfer::{MappedGroup, NodePath, RenderNode};

/// One token of a sentence with every analysis the analyzer found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenAnalyses {
    pub token: String,
    pub punct: bool,
    pub analyses: Vec<Analysis>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Follower {
    pub token: usize,
    pub analysis: Analysis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordGroup {
    pub kind: GroupKind,
    /// Token indices covered, contiguous.
    pub span: Range<usize>,
    pub head_token: usize,
    /// Head analyses that fit the pattern; may be several.
    pub head: Vec<Analysis>,
    pub followers: Vec<Follower>,
    pub group_vibhakti: Vec<String>,
    pub group_tam: Option<String>,
    pub meaning: Option<RootMapping>,
    pub punct: bool,
}

impl WordGroup {
    fn single(kind: GroupKind, index: usize, head: Vec<Analysis>, punct: bool) -> WordGroup {
        WordGroup {
            kind,
            span: index..index + 1,
            head_token: index,
            head,
            followers: Vec::new(),
            group_vibhakti: Vec::new(),
            group_tam: None,
            meaning: None,
            punct,
        }
    }
}

/// Matched extent of one pattern at one position.
struct Match {
    end: usize,
    head: Vec<Analysis>,
    head_token: usize,
    followers: Vec<Follower>,
}

fn fitting<'a>(
    pattern: &GroupPattern,
    item: usize,
    tok: &'a TokenAnalyses,
) -> Vec<&'a Analysis> {
    if tok.punct {
        return Vec::new();
    }
    let m = &pattern.items[item].matcher;
    tok.analyses
        .iter()
        .filter(|a| m.accepts(&a.root, a.category))
        .collect()
}

/// Longest match of `pattern` starting at `start`.
fn match_pattern(pattern: &GroupPattern, tokens: &[TokenAnalyses], start: usize) -> Option<Match> {
    // Each state: (item index, token position, picks so far).
    type Pick = (usize, usize);
    fn go(
        p: &GroupPattern,
        tokens: &[TokenAnalyses],
        item: usize,
        pos: usize,
        picks: &mut Vec<Pick>,
        best: &mut Option<(usize, Vec<Pick>)>,
    ) {
        if item == p.items.len() {
            if best.as_ref().map_or(true, |(end, _)| pos > *end) {
                *best = Some((pos, picks.clone()));
            }
            return;
        }
        let q = p.items[item].quantifier;
        let takes = |pos: usize| -> bool {
            let Some(tok) = tokens.get(pos) else {
                return false;
            };
            let n = fitting(p, item, tok).len();
            if item == p.head {
                n >= 1
            } else {
                n == 1
            }
        };
        let (min, max) = match q {
            Quantifier::One => (1, 1),
            Quantifier::Optional => (0, 1),
            Quantifier::Star => (0, usize::MAX),
            Quantifier::Plus => (1, usize::MAX),
        };
        let mut count = 0;
        let mut cur = pos;
        let mut options = Vec::new();
        if min == 0 {
            options.push((cur, count));
        }
        while count < max && takes(cur) {
            count += 1;
            cur += 1;
            if count >= min {
                options.push((cur, count));
            }
        }
        for (next, n) in options.into_iter().rev() {
            let before = picks.len();
            for k in 0..n {
                picks.push((item, pos + k));
            }
            go(p, tokens, item + 1, next, picks, best);
            picks.truncate(before);
        }
    }
    let mut best = None;
    go(pattern, tokens, 0, start, &mut Vec::new(), &mut best);
    let (end, picks) = best?;
    if end == start {
        return None;
    }
    let mut head = Vec::new();
    let mut head_token = start;
    let mut followers = Vec::new();
    for (item, pos) in picks {
        let fits = fitting(pattern, item, &tokens[pos]);
        if item == pattern.head {
            head_token = pos;
            head = fits.into_iter().cloned().collect();
        } else {
            followers.push(Follower {
                token: pos,
                analysis: fits[0].clone(),
            });
        }
    }
    if head.is_empty() {
        return None;
    }
    Some(Match {
        end,
        head,
        head_token,
        followers,
    })
}

fn best_match<'a>(
    patterns: impl Iterator<Item = &'a GroupPattern>,
    tokens: &[TokenAnalyses],
    start: usize,
) -> Option<(&'a GroupPattern, Match)> {
    let mut best: Option<(&GroupPattern, Match)> = None;
    for p in patterns {
        if let Some(m) = match_pattern(p, tokens, start) {
            if best.as_ref().map_or(true, |(_, b)| m.end > b.end) {
                best = Some((p, m));
            }
        }
    }
    best
}

fn build_group(pattern: &GroupPattern, m: Match, start: usize) -> WordGroup {
    let mut group_vibhakti = Vec::new();
    let mut group_tam = None;
    match pattern.kind {
        GroupKind::NounGroup => {
            if let Some(case) = m.head[0].features.get(FeatureKey::Case) {
                group_vibhakti.extend(
                    case.alternatives()
                        .iter()
                        .take(1)
                        .filter(|c| !is_null_case(c))
                        .cloned(),
                );
            }
            group_vibhakti.extend(m.followers.iter().map(|f| f.analysis.root.clone()));
        }
        GroupKind::VerbGroup => {
            group_tam = Some(
                m.head[0]
                    .features
                    .get(FeatureKey::Tam)
                    .map_or_else(|| "0".to_owned(), |v| v.to_string()),
            );
        }
        _ => {}
    }
    WordGroup {
        kind: pattern.kind,
        span: start..m.end,
        head_token: m.head_token,
        head: m.head,
        followers: m.followers,
        group_vibhakti,
        group_tam,
        meaning: pattern.meaning.clone(),
        punct: false,
    }
}

/// Greedy longest-match grouping, left to right. Fixed expressions are
/// tried before category patterns; ties go to the pattern listed first.
pub fn group_words_in(tokens: &[TokenAnalyses], lang: &Language) -> Vec<WordGroup> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let tok = &tokens[i];
        if tok.punct {
            out.push(WordGroup::single(GroupKind::Singleton, i, Vec::new(), true));
            i += 1;
            continue;
        }
        if tok.analyses.is_empty() {
            out.push(WordGroup::single(GroupKind::Unknown, i, Vec::new(), false));
            i += 1;
            continue;
        }
        let found = best_match(lang.groups().iter().filter(|p| p.is_fixed()), tokens, i)
            .or_else(|| best_match(lang.groups().iter().filter(|p| !p.is_fixed()), tokens, i));
        match found {
            Some((p, m)) => {
                let g = build_group(p, m, i);
                i = g.span.end;
                out.push(g);
            }
            None => {
                out.push(WordGroup::single(
                    GroupKind::Singleton,
                    i,
                    tok.analyses.clone(),
                    false,
                ));
                i += 1;
            }
        }
    }
    out
}

pub fn group_words(tokens: &[TokenAnalyses], lex: &Lexicon) -> Vec<WordGroup> {
    group_words_in(tokens, lex.source())
}

/// Does some pattern of `lang` accept exactly `tokens[span]` as one group?
pub fn matches_exactly(lang: &Language, tokens: &[TokenAnalyses], span: Range<usize>) -> bool {
    lang.groups().iter().any(|p| {
        let sub = &tokens[..span.end];
        match_all_ends(p, sub, span.start).contains(&span.end)
    })
}

fn match_all_ends(pattern: &GroupPattern, tokens: &[TokenAnalyses], start: usize) -> Vec<usize> {
    let mut ends = Vec::new();
    for end in start + 1..=tokens.len() {
        if match_pattern(pattern, &tokens[..end], start).is_some_and(|m| m.end == end) {
            ends.push(end);
        }
    }
    ends
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no target {kind} pattern is headed by a {category}")]
pub struct SplitError {
    pub kind: &'static str,
    pub category: Category,
}

/// A per-word request for the target synthesizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisRequest {
    pub path: NodePath,
    pub root: String,
    pub category: Category,
    pub features: FeatureBundle,
}

/// Lays a mapped group out as synthesis requests in target surface order.
/// Nested alternatives follow the node that carries them.
pub fn split_group(
    mapped: &MappedGroup,
    target: &Language,
) -> Result<Vec<SynthesisRequest>, SplitError> {
    if matches!(mapped.kind, GroupKind::NounGroup | GroupKind::VerbGroup) {
        if let Some(cat) = mapped.head_category {
            let ok = target.groups().iter().any(|p| {
                p.kind == mapped.kind
                    && match &p.head_matcher() {
                        crate::lexicon::ItemMatcher::Category(c) => *c == cat,
                        crate::lexicon::ItemMatcher::Root { category, .. } => {
                            category.map_or(true, |c| c == cat)
                        }
                    }
            });
            if !ok {
                return Err(SplitError {
                    kind: mapped.kind.name(),
                    category: cat,
                });
            }
        }
    }
    let mut out = Vec::new();
    fn walk(nodes: &[RenderNode], prefix: &NodePath, out: &mut Vec<SynthesisRequest>) {
        for (i, n) in nodes.iter().enumerate() {
            let path = prefix.child(i);
            if let Some(l) = n.lemma.as_ref().filter(|_| n.inflect) {
                out.push(SynthesisRequest {
                    path: path.clone(),
                    root: l.root.clone(),
                    category: l.category,
                    features: l.features.clone(),
                });
            }
            for (a, seq) in n.alternatives.iter().enumerate() {
                walk(seq, &path.alternative(a), out);
            }
        }
    }
    walk(&mapped.nodes, &NodePath::default(), &mut out);
    Ok(out)
}
