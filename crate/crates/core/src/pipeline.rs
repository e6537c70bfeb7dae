//! End-to-end assembly: tokenize, analyze, group, map, generate.

use std::ops::Range;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::grouper::{group_words, TokenAnalyses};
use crate::lexicon::{Lexicon, VariantEntry};
use crate::morph::analyze_in;
use crate::render::notation::{is_punct, SENTENCE_PUNCT};
use crate::render::{render, DetailLevel, Document, Sentence};
use crate::transfer::{generate, map_group, order_clauses};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    /// Byte range in the input.
    pub span: Range<usize>,
    pub punct: bool,
}

/// Splits on whitespace; every punctuation mark is a token of its own.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let flush = |out: &mut Vec<Token>, start: &mut Option<usize>, end: usize| {
        if let Some(s) = start.take() {
            out.push(Token {
                text: text[s..end].to_owned(),
                span: s..end,
                punct: false,
            });
        }
    };
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            flush(&mut out, &mut start, i);
        } else if is_punct(c) {
            flush(&mut out, &mut start, i);
            out.push(Token {
                text: c.to_string(),
                span: i..i + c.len_utf8(),
                punct: true,
            });
        } else if start.is_none() {
            start = Some(i);
        }
    }
    flush(&mut out, &mut start, text.len());
    out
}

/// Groups tokens into sentences ending at `.`, `?`, `!` or a danda.
pub fn segment(tokens: &[Token]) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, t) in tokens.iter().enumerate() {
        if t.punct && t.text.chars().all(|c| SENTENCE_PUNCT.contains(&c)) {
            out.push(start..i + 1);
            start = i + 1;
        }
    }
    if start < tokens.len() {
        out.push(start..tokens.len());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub lexicon_dir: PathBuf,
    pub detail: DetailLevel,
    /// Expected pair name (the lexicon directory name); `None` accepts any.
    pub pair: Option<String>,
    pub debug_analyses: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            lexicon_dir: PathBuf::from("data/sample-tel-hin"),
            detail: DetailLevel::Full,
            pair: None,
            debug_analyses: false,
        }
    }
}

/// Analyzes one sentence worth of tokens.
pub fn analyze_tokens(tokens: &[Token], lex: &Lexicon) -> Vec<TokenAnalyses> {
    let junctions: Vec<&VariantEntry> = lex.junction_rules().collect();
    tokens
        .iter()
        .map(|t| TokenAnalyses {
            token: t.text.clone(),
            punct: t.punct,
            analyses: if t.punct {
                Vec::new()
            } else {
                analyze_in(&t.text, lex.source(), &junctions)
            },
        })
        .collect()
}

pub fn translate_sentence(tokens: &[Token], line: usize, lex: &Lexicon) -> Sentence {
    let analyzed = analyze_tokens(tokens, lex);
    let groups = group_words(&analyzed, lex);
    let mapped = groups.iter().map(|g| map_group(g, &analyzed, lex)).collect();
    let mut groups = order_clauses(mapped);
    for g in &mut groups {
        generate(g, lex);
    }
    Sentence {
        line,
        tokens: tokens.iter().map(|t| t.text.clone()).collect(),
        groups,
    }
}

/// Runs the whole pipeline. Lines are kept apart; each sentence is
/// translated on its own.
pub fn run_pipeline(text: &str, lex: &Lexicon) -> Document {
    let mut doc = Document::default();
    if text.is_empty() {
        return doc;
    }
    for (line_no, line) in text.split('\n').enumerate() {
        doc.lines += 1;
        let tokens = tokenize(line);
        for range in segment(&tokens) {
            doc.sentences
                .push(translate_sentence(&tokens[range], line_no, lex));
        }
    }
    doc
}

/// Text in, notation out; shared by the CLI and the HTTP service.
pub fn translate_text(text: &str, lex: &Lexicon, level: DetailLevel) -> String {
    render(&run_pipeline(text, lex), level)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_keep_byte_spans() {
        let t = tokenize("mlru  pustakaM caduvutunnArA?");
        let texts: Vec<&str> = t.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["mlru", "pustakaM", "caduvutunnArA", "?"]);
        assert_eq!(t[1].span, 6..14);
        assert!(t[3].punct);
    }

    #[test]
    fn sentences_end_at_final_punctuation() {
        let t = tokenize("a b, c. d? e");
        let s = segment(&t);
        assert_eq!(s, [0..5, 5..7, 7..8]);
    }

    #[test]
    fn empty_text_is_an_empty_document() {
        let lex = Lexicon::default();
        let d = run_pipeline("", &lex);
        assert!(d.sentences.is_empty());
        assert_eq!(translate_text("", &lex, DetailLevel::Full), "");
    }
}
