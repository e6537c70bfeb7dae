//! Low-level reader for the dialect notation.
//!
//! ```text
//! sentence := (group SP)* punct?
//! group    := node ('_' node)*
//! node     := form alt? ann? tick?
//! alt      := '[' seq ('|' seq)* ']'
//! seq      := node ('_' node)*
//! ann      := '{' item ('_' item)* '}'
//! tick     := '`'
//! form     := symbols | '*'
//! ```
//!
//! The reader produces an untyped tree; annotation items are kept as raw
//! strings so the same reader serves TAM templates (`{gnp}` slots) and
//! rendered output.

use thiserror::Error;

pub const SENTENCE_PUNCT: &[char] = &['.', '?', '!', '।', '॥'];
pub const PUNCT: &[char] = &['.', ',', '?', '!', ';', ':', '।', '॥'];

pub fn is_punct(c: char) -> bool {
    PUNCT.contains(&c)
}

fn is_form_char(c: char) -> bool {
    !c.is_whitespace() && !is_punct(c) && !matches!(c, '_' | '[' | ']' | '|' | '{' | '}' | '`')
}

fn is_item_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '_' | '[' | ']' | '|' | '{' | '}' | '`')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("notation error at offset {offset}: {message}")]
pub struct NotationError {
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawNode {
    pub form: String,
    pub offset: usize,
    /// `None` when no bracket was written.
    pub alternatives: Option<Vec<Vec<RawNode>>>,
    pub annotation: Option<Vec<String>>,
    pub tick: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawGroup {
    Nodes(Vec<RawNode>),
    Punct(char),
}

struct Reader<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, NotationError> {
        Err(NotationError {
            offset,
            message: message.into(),
        })
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.text[start..self.pos]
    }

    fn node(&mut self) -> Result<RawNode, NotationError> {
        let offset = self.pos;
        let form = self.take_while(is_form_char).to_owned();
        let mut node = RawNode {
            form,
            offset,
            ..RawNode::default()
        };
        if self.peek() == Some('[') {
            let open = self.pos;
            self.bump();
            let mut alts = vec![self.seq()?];
            loop {
                match self.peek() {
                    Some('|') => {
                        self.bump();
                        alts.push(self.seq()?);
                    }
                    Some(']') => {
                        self.bump();
                        break;
                    }
                    _ => return self.err(open, "unbalanced `[`"),
                }
            }
            node.alternatives = Some(alts);
        }
        if node.form.is_empty() && node.alternatives.is_none() {
            return match self.peek() {
                Some('{') => self.err(self.pos, "annotation outside a form"),
                Some('`') => self.err(self.pos, "dialect marker outside a form"),
                Some(c) => self.err(self.pos, format!("expected a form, found `{c}`")),
                None => self.err(self.pos, "expected a form, found end of input"),
            };
        }
        if node.form.contains('*') && node.form != "*" {
            return self.err(offset, "placeholder `*` must stand alone");
        }
        if self.peek() == Some('{') {
            let open = self.pos;
            self.bump();
            let mut items = Vec::new();
            loop {
                let at = self.pos;
                let item = self.take_while(is_item_char);
                if item.is_empty() {
                    return match self.peek() {
                        None => self.err(open, "unbalanced `{`"),
                        _ => self.err(at, "empty annotation item"),
                    };
                }
                items.push(item.to_owned());
                match self.peek() {
                    Some('_') => {
                        self.bump();
                    }
                    Some('}') => {
                        self.bump();
                        break;
                    }
                    _ => return self.err(open, "unbalanced `{`"),
                }
            }
            node.annotation = Some(items);
        }
        if self.peek() == Some('`') {
            self.bump();
            node.tick = true;
        }
        Ok(node)
    }

    fn seq(&mut self) -> Result<Vec<RawNode>, NotationError> {
        let mut nodes = vec![self.node()?];
        while self.peek() == Some('_') {
            self.bump();
            nodes.push(self.node()?);
        }
        Ok(nodes)
    }
}

/// Reads one underscore-joined sequence spanning the whole input.
pub fn parse_sequence(text: &str) -> Result<Vec<RawNode>, NotationError> {
    let mut r = Reader { text, pos: 0 };
    let seq = r.seq()?;
    if let Some(c) = r.peek() {
        return r.err(r.pos, format!("unexpected `{c}`"));
    }
    Ok(seq)
}

/// Reads a line of notation into groups and punctuation marks.
pub fn parse_line(text: &str) -> Result<Vec<RawGroup>, NotationError> {
    let mut r = Reader { text, pos: 0 };
    let mut groups = Vec::new();
    let mut need_space = false;
    while let Some(c) = r.peek() {
        if is_punct(c) {
            r.bump();
            groups.push(RawGroup::Punct(c));
            need_space = true;
            continue;
        }
        if c == ' ' {
            if !need_space {
                return r.err(r.pos, "unexpected space");
            }
            r.bump();
            need_space = false;
            if r.peek().is_none() {
                return r.err(r.pos, "trailing space");
            }
            continue;
        }
        if need_space {
            return r.err(r.pos, "groups must be separated by a single space");
        }
        groups.push(RawGroup::Nodes(r.seq()?));
        need_space = true;
    }
    Ok(groups)
}
