use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::lexicon::{Lexicon, VariantKind};
use crate::morph::analyze_word;
use crate::pipeline::{tokenize, Token};

use super::EditError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    NonstandardSpelling,
    Unanalyzable,
    SuspectMissplit,
}

impl IssueKind {
    pub fn name(self) -> &'static str {
        match self {
            IssueKind::NonstandardSpelling => "nonstandard_spelling",
            IssueKind::Unanalyzable => "unanalyzable",
            IssueKind::SuspectMissplit => "suspect_missplit",
        }
    }
}

/// A proposed correction: replace `covers` tokens starting at the issue's
/// token with `replacement`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub replacement: String,
    pub covers: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreEditIssue {
    pub token: usize,
    /// Byte range of the affected tokens in the text.
    pub span: Range<usize>,
    pub text: String,
    pub kind: IssueKind,
    pub suggestions: Vec<Suggestion>,
}

fn joined(tokens: &[Token], i: usize) -> Option<String> {
    let (a, b) = (tokens.get(i)?, tokens.get(i + 1)?);
    (!a.punct && !b.punct).then(|| format!("{}{}", a.text, b.text))
}

fn issue(tokens: &[Token], at: usize, covers: usize, kind: IssueKind, s: Vec<Suggestion>) -> PreEditIssue {
    let span = tokens[at].span.start..tokens[at + covers - 1].span.end;
    PreEditIssue {
        token: at,
        text: tokens[at..at + covers]
            .iter()
            .map(|t| t.text.as_str())
            .collect::<Vec<_>>()
            .join(" "),
        span,
        kind,
        suggestions: s,
    }
}

/// Flags tokens that need attention before translation: listed variant
/// spellings, known and suspected missplits, and words that do not analyze.
pub fn check_pre_edit(text: &str, lex: &Lexicon) -> Vec<PreEditIssue> {
    let tokens = tokenize(text);
    let mut out = Vec::new();
    // First token not yet covered by a reported issue.
    let mut free = 0;
    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        if t.punct {
            i += 1;
            continue;
        }
        if joined(&tokens, i).is_some() {
            let spaced = format!("{} {}", t.text, tokens[i + 1].text);
            let fixes: Vec<Suggestion> = lex
                .variants_of(&spaced)
                .into_iter()
                .filter(|v| v.kind == VariantKind::SandhiMissplit)
                .map(|v| Suggestion {
                    replacement: v.standard.clone(),
                    covers: 2,
                })
                .collect();
            if !fixes.is_empty() {
                out.push(issue(&tokens, i, 2, IssueKind::SuspectMissplit, fixes));
                i += 2;
                free = i;
                continue;
            }
        }
        let spellings: Vec<Suggestion> = lex
            .variants_of(&t.text)
            .into_iter()
            .filter(|v| v.kind == VariantKind::Spelling)
            .map(|v| Suggestion {
                replacement: v.standard.clone(),
                covers: 1,
            })
            .collect();
        if !spellings.is_empty() {
            out.push(issue(&tokens, i, 1, IssueKind::NonstandardSpelling, spellings));
            i += 1;
            free = i;
            continue;
        }
        if !analyze_word(&t.text, lex).is_empty() {
            i += 1;
            continue;
        }
        if let Some(w) = joined(&tokens, i).filter(|w| !analyze_word(w, lex).is_empty()) {
            let s = vec![Suggestion {
                replacement: w,
                covers: 2,
            }];
            out.push(issue(&tokens, i, 2, IssueKind::SuspectMissplit, s));
            i += 2;
            free = i;
            continue;
        }
        let before = i
            .checked_sub(1)
            .filter(|&p| p >= free)
            .and_then(|p| joined(&tokens, p).map(|w| (p, w)))
            .filter(|(_, w)| !analyze_word(w, lex).is_empty());
        match before {
            Some((p, w)) => {
                let s = vec![Suggestion {
                    replacement: w,
                    covers: 2,
                }];
                out.push(issue(&tokens, p, 2, IssueKind::SuspectMissplit, s));
            }
            None => out.push(issue(&tokens, i, 1, IssueKind::Unanalyzable, Vec::new())),
        }
        i += 1;
        free = i;
    }
    out
}

/// Replaces `covers` tokens starting at `token` with `replacement`. All
/// other bytes of `text` are kept as they are.
pub fn apply_pre_edit(
    text: &str,
    token: usize,
    replacement: &str,
    covers: usize,
) -> Result<String, EditError> {
    let tokens = tokenize(text);
    let covers = covers.max(1);
    if token + covers > tokens.len() {
        return Err(EditError::TokenOutOfRange {
            index: token,
            count: tokens.len(),
        });
    }
    let start = tokens[token].span.start;
    let end = tokens[token + covers - 1].span.end;
    Ok(format!("{}{}{}", &text[..start], replacement, &text[end..]))
}
