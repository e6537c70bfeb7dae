//! Dialect notation: staged rendering of mapped documents and the reverse
//! reader used by post-editing. The grammar is in `NOTATION.md`.

pub mod notation;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lexicon::GroupKind;
use crate::transfer::{fix_joins, is_annotation_item, MappedGroup, NodeOrigin, RenderNode};
use notation::{NotationError, RawGroup, RawNode};

/// How much of the notation to show.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum DetailLevel {
    /// Primary forms only.
    Plain = 0,
    /// Adds bracketed alternatives.
    Alternatives = 1,
    /// Adds feature annotations and dialect markers.
    Full = 2,
}

impl TryFrom<u8> for DetailLevel {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            0 => Ok(DetailLevel::Plain),
            1 => Ok(DetailLevel::Alternatives),
            2 => Ok(DetailLevel::Full),
            _ => Err(format!("detail level must be 0, 1 or 2, not {v}")),
        }
    }
}

impl From<DetailLevel> for u8 {
    fn from(d: DetailLevel) -> u8 {
        d as u8
    }
}

impl FromStr for DetailLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.parse::<u8>()
            .map_err(|_| format!("detail level must be 0, 1 or 2, not `{s}`"))?
            .try_into()
    }
}

impl fmt::Display for DetailLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as u8)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    /// Zero-based input line the sentence came from.
    pub line: usize,
    pub tokens: Vec<String>,
    pub groups: Vec<MappedGroup>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub sentences: Vec<Sentence>,
    /// Number of input lines; empty lines render as empty lines.
    pub lines: usize,
}

impl Document {
    pub fn group(&self, sentence: usize, group: usize) -> Option<&MappedGroup> {
        self.sentences.get(sentence)?.groups.get(group)
    }
}

fn push_seq(nodes: &[RenderNode], level: DetailLevel, out: &mut String) {
    let mut first = true;
    for n in nodes {
        let s = render_node(n, level);
        if s.is_empty() {
            continue;
        }
        if !first {
            out.push('_');
        }
        out.push_str(&s);
        first = false;
    }
}

fn render_node(n: &RenderNode, level: DetailLevel) -> String {
    let mut out = String::new();
    if level == DetailLevel::Plain {
        if n.is_placeholder() {
            return out;
        }
        if n.form.is_empty() {
            if let Some(first) = n.alternatives.first() {
                push_seq(first, level, &mut out);
            }
        } else {
            out.push_str(&n.form);
        }
        return out;
    }
    out.push_str(&n.form);
    if !n.alternatives.is_empty() {
        out.push('[');
        for (i, seq) in n.alternatives.iter().enumerate() {
            if i > 0 {
                out.push('|');
            }
            push_seq(seq, level, &mut out);
        }
        out.push(']');
    }
    if level == DetailLevel::Full {
        if !n.annotation.is_empty() {
            out.push('{');
            out.push_str(&n.annotation.join("_"));
            out.push('}');
        }
        if n.dialect_marked {
            out.push('`');
        }
    }
    out
}

pub fn render_nodes(nodes: &[RenderNode], level: DetailLevel) -> String {
    let mut out = String::new();
    push_seq(nodes, level, &mut out);
    out
}

pub fn render_group(g: &MappedGroup, level: DetailLevel) -> String {
    render_nodes(&g.nodes, level)
}

pub fn render_sentence(s: &Sentence, level: DetailLevel) -> String {
    let mut out = String::new();
    for g in &s.groups {
        let text = render_group(g, level);
        if text.is_empty() {
            continue;
        }
        if !out.is_empty() && !g.punct {
            out.push(' ');
        }
        out.push_str(&text);
    }
    out
}

pub fn render(doc: &Document, level: DetailLevel) -> String {
    let mut lines = vec![String::new(); doc.lines];
    for s in &doc.sentences {
        let text = render_sentence(s, level);
        let line = &mut lines[s.line];
        let leads_with_punct = s.groups.iter().find(|g| !render_group(g, level).is_empty()).is_some_and(|g| g.punct);
        if !line.is_empty() && !text.is_empty() && !leads_with_punct {
            line.push(' ');
        }
        line.push_str(&text);
    }
    lines.join("\n")
}

fn convert(raw: &RawNode, source: usize) -> Result<RenderNode, NotationError> {
    let mut n = RenderNode::new(&raw.form, source, NodeOrigin::Parsed);
    n.dialect_marked = raw.tick;
    if let Some(items) = &raw.annotation {
        if let Some(bad) = items.iter().find(|i| !is_annotation_item(i)) {
            return Err(NotationError {
                offset: raw.offset,
                message: format!("`{bad}` is not a person, gender or number item"),
            });
        }
        n.annotation = items.clone();
    }
    if n.is_placeholder() && (raw.alternatives.is_some() || raw.annotation.is_some() || raw.tick) {
        return Err(NotationError {
            offset: raw.offset,
            message: "placeholder `*` takes no alternatives, annotation or marker".into(),
        });
    }
    for seq in raw.alternatives.iter().flatten() {
        n.alternatives.push(
            seq.iter()
                .map(|r| convert(r, source))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(n)
}

/// Reads level-2 notation back into a document skeleton. Groups keep their
/// shape, alternatives, annotations, placeholders and markers; lemmas and
/// source analyses are not recoverable. Token `i` of a sentence is the text
/// of its group `i`.
pub fn parse_notation(text: &str) -> Result<Document, NotationError> {
    let mut doc = Document::default();
    if text.is_empty() {
        return Ok(doc);
    }
    let mut base = 0;
    for (line_no, line) in text.split('\n').enumerate() {
        doc.lines += 1;
        let raw = notation::parse_line(line).map_err(|mut e| {
            e.offset += base;
            e
        })?;
        base += line.len() + 1;
        let mut current = Sentence {
            line: line_no,
            tokens: Vec::new(),
            groups: Vec::new(),
        };
        for g in raw {
            let index = current.groups.len();
            let (group, end) = match g {
                RawGroup::Punct(c) => {
                    let mut g = skeleton_group(index, true);
                    g.nodes.push(RenderNode::new(c.to_string(), index, NodeOrigin::Punct));
                    (g, notation::SENTENCE_PUNCT.contains(&c))
                }
                RawGroup::Nodes(nodes) => {
                    let mut g = skeleton_group(index, false);
                    for r in &nodes {
                        g.nodes.push(convert(r, index)?);
                    }
                    fix_joins(&mut g.nodes);
                    (g, false)
                }
            };
            current.tokens.push(render_group(&group, DetailLevel::Full));
            current.groups.push(group);
            if end {
                let next = Sentence {
                    line: line_no,
                    tokens: Vec::new(),
                    groups: Vec::new(),
                };
                doc.sentences.push(std::mem::replace(&mut current, next));
            }
        }
        if !current.groups.is_empty() {
            doc.sentences.push(current);
        }
    }
    Ok(doc)
}

fn skeleton_group(index: usize, punct: bool) -> MappedGroup {
    MappedGroup {
        kind: GroupKind::Singleton,
        span: index..index + 1,
        head_token: index,
        head_category: None,
        nodes: Vec::new(),
        suppresses_ne: false,
        ergative: false,
        tam: None,
        punct,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_levels() {
        let t = "Apa pustaka paDha_raHA_[HE|thA]_kyA{23_ba.}?";
        let d = parse_notation(t).unwrap();
        assert_eq!(render(&d, DetailLevel::Full), t);
        assert_eq!(render(&d, DetailLevel::Alternatives), "Apa pustaka paDha_raHA_[HE|thA]_kyA?");
        assert_eq!(render(&d, DetailLevel::Plain), "Apa pustaka paDha_raHA_HE_kyA?");
    }

    #[test]
    fn placeholder_drops_with_its_join() {
        let d = parse_notation("khAyA_HE_jo_*_vaHa").unwrap();
        assert_eq!(render(&d, DetailLevel::Plain), "khAyA_HE_jo_vaHa");
        assert_eq!(render(&d, DetailLevel::Full), "khAyA_HE_jo_*_vaHa");
    }

    #[test]
    fn gender_annotations_and_dialect_join() {
        let d = parse_notation("vaHa{f.} usa{m.}_se`").unwrap();
        let g = &d.sentences[0].groups;
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].nodes[0].annotation, ["f."]);
        assert_eq!(g[1].nodes[0].annotation, ["m."]);
        assert!(g[1].nodes[1].dialect_marked);
        assert!(g[1].nodes[1].joined_to_previous);
    }

    #[test]
    fn simple_join_and_empty() {
        let d = parse_notation("a_b").unwrap();
        assert_eq!(d.sentences[0].groups.len(), 1);
        assert_eq!(d.sentences[0].groups[0].nodes.len(), 2);
        assert_eq!(render(&Document::default(), DetailLevel::Full), "");
        assert_eq!(parse_notation("a{").unwrap_err().offset, 1);
    }

    #[test]
    fn lines_and_sentences() {
        let t = "a b. c?\n\nd";
        let d = parse_notation(t).unwrap();
        assert_eq!(d.sentences.len(), 3);
        assert_eq!(d.lines, 3);
        assert_eq!(render(&d, DetailLevel::Full), t);
    }

    #[test]
    fn rejects_foreign_annotation_item() {
        assert!(parse_notation("vaHa{gnp}").is_err());
    }
}
