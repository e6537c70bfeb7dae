//! Pre-editing diagnostics and the level-1 post-editing commands.

mod preedit;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{Category, FeatureBundle, FeatureKey, FeatureValue, Gnp, GroupKind, Lexicon, TargetRoot};
use crate::morph::{synthesize, SynthesisError};
use crate::render::Document;
use crate::transfer::{fix_joins, literal_lemma, request_for, Lemma, MappedGroup, NodeOrigin, NodePath, RenderNode};

pub use preedit::{apply_pre_edit, check_pre_edit, IssueKind, PreEditIssue, Suggestion};

/// Form of the ergative postposition.
pub const NE: &str = "ne";

const RESERVED: &[char] = &['[', ']', '{', '}', '|', '`', '*', '_'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EditError {
    #[error("token {index} is out of range ({count} tokens)")]
    TokenOutOfRange { index: usize, count: usize },
    #[error("no group at {0}")]
    InvalidPosition(Position),
    #[error("cannot parse command: {0}")]
    Syntax(String),
    #[error("node at {0} is not a `*` placeholder")]
    NotAPlaceholder(Position),
    #[error("alternative {index} does not exist ({count} available)")]
    NoAlternative { index: usize, count: usize },
    #[error("nothing in group {0} agrees in gender, number and person")]
    NothingToAgree(Position),
    #[error("no verb group follows group {0}")]
    NoGoverningVerb(Position),
    #[error("the verb group at {0} does not take `ne`")]
    NeNotLicensed(Position),
    #[error("group {0} already has `ne`")]
    NeAlreadyPresent(Position),
    #[error("`{0}` cannot be used as a form")]
    BadForm(String),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
}

impl EditError {
    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            EditError::TokenOutOfRange { .. } => "token_out_of_range",
            EditError::InvalidPosition(_) => "invalid_position",
            EditError::Syntax(_) => "syntax",
            EditError::NotAPlaceholder(_) => "not_a_placeholder",
            EditError::NoAlternative { .. } => "no_alternative",
            EditError::NothingToAgree(_) => "nothing_to_agree",
            EditError::NoGoverningVerb(_) => "no_governing_verb",
            EditError::NeNotLicensed(_) => "ne_not_licensed",
            EditError::NeAlreadyPresent(_) => "ne_already_present",
            EditError::BadForm(_) => "bad_form",
            EditError::Synthesis(_) => "synthesis",
        }
    }

    pub fn position(&self) -> Option<&Position> {
        match self {
            EditError::InvalidPosition(p)
            | EditError::NotAPlaceholder(p)
            | EditError::NothingToAgree(p)
            | EditError::NoGoverningVerb(p)
            | EditError::NeNotLicensed(p)
            | EditError::NeAlreadyPresent(p) => Some(p),
            _ => None,
        }
    }
}

/// `sentence/group`, optionally followed by `/node` where the node path is
/// dot-separated (`2.1.0` is option 1, node 0 of top-level node 2).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Position {
    pub sentence: usize,
    pub group: usize,
    pub node: Option<NodePath>,
}

impl Position {
    pub fn group(sentence: usize, group: usize) -> Position {
        Position {
            sentence,
            group,
            node: None,
        }
    }

    pub fn node(sentence: usize, group: usize, path: NodePath) -> Position {
        Position {
            sentence,
            group,
            node: Some(path),
        }
    }

    fn at_group(&self, group: usize) -> Position {
        Position::group(self.sentence, group)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.sentence, self.group)?;
        if let Some(p) = &self.node {
            let parts: Vec<String> = p.0.iter().map(usize::to_string).collect();
            write!(f, "/{}", parts.join("."))?;
        }
        Ok(())
    }
}

impl FromStr for Position {
    type Err = EditError;

    fn from_str(s: &str) -> Result<Self, EditError> {
        let bad = || EditError::Syntax(format!("`{s}` is not a position"));
        let num = |p: &str| p.parse::<usize>().map_err(|_| bad());
        let mut parts = s.split('/');
        let sentence = num(parts.next().ok_or_else(bad)?)?;
        let group = num(parts.next().ok_or_else(bad)?)?;
        let node = match parts.next() {
            None => None,
            Some(p) => {
                let path = p.split('.').map(num).collect::<Result<Vec<_>, _>>()?;
                if path.len() % 2 == 0 {
                    return Err(bad());
                }
                Some(NodePath(path))
            }
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(Position {
            sentence,
            group,
            node,
        })
    }
}

impl From<Position> for String {
    fn from(p: Position) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Position {
    type Error = EditError;

    fn try_from(s: String) -> Result<Self, EditError> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditVerb {
    /// Canonical `g_n_p` value.
    SetGnp(String),
    InsertNe,
    ResolveVibhakti(String),
    ChooseAlternative(usize),
    ReplaceForm(String),
}

impl EditVerb {
    pub fn name(&self) -> &'static str {
        match self {
            EditVerb::SetGnp(_) => "set_gnp",
            EditVerb::InsertNe => "insert_ne",
            EditVerb::ResolveVibhakti(_) => "resolve_vibhakti",
            EditVerb::ChooseAlternative(_) => "choose_alternative",
            EditVerb::ReplaceForm(_) => "replace_form",
        }
    }

    /// Builds a verb from its name and arguments. `set_gnp` takes either
    /// three arguments or one `g_n_p` value.
    pub fn from_parts(verb: &str, args: &[String]) -> Result<EditVerb, EditError> {
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(EditError::Syntax(format!("{verb} takes {n} argument(s), got {}", args.len())))
            }
        };
        Ok(match verb {
            "set_gnp" => {
                let value = match args {
                    [g, n, p] => format!("{g}_{n}_{p}"),
                    [v] => v.clone(),
                    _ => return Err(EditError::Syntax("set_gnp takes GENDER NUMBER PERSON".into())),
                };
                let gnp = Gnp::parse(&value)
                    .ok_or_else(|| EditError::Syntax(format!("`{value}` is not a gnp value")))?;
                EditVerb::SetGnp(gnp.into())
            }
            "insert_ne" => {
                arity(0)?;
                EditVerb::InsertNe
            }
            "resolve_vibhakti" => {
                arity(1)?;
                EditVerb::ResolveVibhakti(args[0].clone())
            }
            "choose_alternative" => {
                arity(1)?;
                let i = args[0]
                    .parse()
                    .map_err(|_| EditError::Syntax(format!("`{}` is not an index", args[0])))?;
                EditVerb::ChooseAlternative(i)
            }
            "replace_form" => {
                arity(1)?;
                EditVerb::ReplaceForm(args[0].clone())
            }
            other => return Err(EditError::Syntax(format!("unknown command `{other}`"))),
        })
    }

    pub fn args(&self) -> Vec<String> {
        match self {
            EditVerb::SetGnp(v) => v.split('_').map(str::to_owned).collect(),
            EditVerb::InsertNe => Vec::new(),
            EditVerb::ResolveVibhakti(s) | EditVerb::ReplaceForm(s) => vec![s.clone()],
            EditVerb::ChooseAlternative(i) => vec![i.to_string()],
        }
    }
}

/// One post-editing command. The line form is `POSITION VERB ARGS...`,
/// e.g. `0/3 set_gnp f sg 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditCommand {
    pub position: Position,
    pub verb: EditVerb,
}

impl fmt::Display for EditCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.position, self.verb.name())?;
        for a in self.verb.args() {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

impl FromStr for EditCommand {
    type Err = EditError;

    fn from_str(line: &str) -> Result<Self, EditError> {
        let mut words = line.split_whitespace();
        let position = words
            .next()
            .ok_or_else(|| EditError::Syntax("empty command".into()))?
            .parse()?;
        let verb = words
            .next()
            .ok_or_else(|| EditError::Syntax(format!("`{line}` has no command")))?;
        let args: Vec<String> = words.map(str::to_owned).collect();
        Ok(EditCommand {
            position,
            verb: EditVerb::from_parts(verb, &args)?,
        })
    }
}

/// Reads a command script: one command per line, `#` comments and blank
/// lines skipped. Errors carry the 1-based line number.
pub fn parse_commands(script: &str) -> Result<Vec<EditCommand>, (usize, EditError)> {
    script
        .lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| l.parse().map_err(|e| (i + 1, e)))
        .collect()
}

/// Applies one command and returns the new document; `doc` is untouched.
pub fn apply_post_edit(doc: &Document, cmd: &EditCommand, lex: &Lexicon) -> Result<Document, EditError> {
    let pos = &cmd.position;
    let mut out = doc.clone();
    let sentence = out
        .sentences
        .get_mut(pos.sentence)
        .ok_or_else(|| EditError::InvalidPosition(pos.clone()))?;
    if pos.group >= sentence.groups.len() {
        return Err(EditError::InvalidPosition(pos.clone()));
    }
    if let Some(path) = &pos.node {
        if path.get(&sentence.groups[pos.group].nodes).is_none() {
            return Err(EditError::InvalidPosition(pos.clone()));
        }
    }
    match &cmd.verb {
        EditVerb::SetGnp(v) => set_gnp(&mut sentence.groups[pos.group], pos, v, lex)?,
        EditVerb::InsertNe => {
            let verb = sentence.groups[pos.group + 1..]
                .iter()
                .position(|g| g.kind == GroupKind::VerbGroup)
                .map(|i| pos.group + 1 + i)
                .ok_or_else(|| EditError::NoGoverningVerb(pos.clone()))?;
            let v = &sentence.groups[verb];
            if !(v.suppresses_ne || v.ergative) {
                return Err(EditError::NeNotLicensed(pos.at_group(verb)));
            }
            insert_ne(&mut sentence.groups[pos.group], pos, lex)?;
        }
        EditVerb::ResolveVibhakti(form) => {
            resolve_vibhakti(&mut sentence.groups[pos.group], pos, form, lex)?
        }
        EditVerb::ChooseAlternative(i) => choose_alternative(&mut sentence.groups[pos.group], pos, *i)?,
        EditVerb::ReplaceForm(text) => replace_form(&mut sentence.groups[pos.group], pos, text)?,
    }
    Ok(out)
}

/// Applies commands in order; the first failure stops the run.
pub fn apply_all(doc: &Document, cmds: &[EditCommand], lex: &Lexicon) -> Result<Document, (usize, EditError)> {
    let mut cur = doc.clone();
    for (i, c) in cmds.iter().enumerate() {
        cur = apply_post_edit(&cur, c, lex).map_err(|e| (i, e))?;
    }
    Ok(cur)
}

fn check_form(form: &str) -> Result<(), EditError> {
    if form.is_empty() || form.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c)) {
        return Err(EditError::BadForm(form.to_owned()));
    }
    Ok(())
}

fn resynthesize(lemma: &Lemma, features: &FeatureBundle, lex: &Lexicon) -> Result<(String, FeatureBundle), SynthesisError> {
    let t = TargetRoot {
        root: lemma.root.clone(),
        category: lemma.category,
        dialect_marked: false,
    };
    let wanted = request_for(lex.target(), &t, features);
    let form = synthesize(&lemma.root, lemma.category, &wanted, lex.target())?;
    Ok((form, wanted))
}

fn set_gnp(g: &mut MappedGroup, pos: &Position, value: &str, lex: &Lexicon) -> Result<(), EditError> {
    let gnp = FeatureValue::single(value);
    let mut touched = 0;
    let mut failure = None;
    for n in &mut g.nodes {
        n.walk_mut(&mut |n| {
            let Some(l) = n.lemma.as_mut() else { return };
            if failure.is_some() || !l.features.contains(FeatureKey::Gnp) {
                return;
            }
            let mut f = l.features.clone();
            f.insert(FeatureKey::Gnp, gnp.clone());
            match synthesize(&l.root, l.category, &f, lex.target()) {
                Ok(form) => {
                    n.form = form;
                    l.features = f;
                    n.inflect = true;
                    touched += 1;
                }
                Err(e) => failure = Some(e),
            }
        });
    }
    if let Some(e) = failure {
        return Err(e.into());
    }
    if touched == 0 {
        return Err(EditError::NothingToAgree(pos.clone()));
    }
    for n in &mut g.nodes {
        n.walk_mut(&mut |n| n.annotation.clear());
    }
    Ok(())
}

fn insert_ne(g: &mut MappedGroup, pos: &Position, lex: &Lexicon) -> Result<(), EditError> {
    if g.punct {
        return Err(EditError::InvalidPosition(pos.clone()));
    }
    let mut present = false;
    g.walk(&mut |n| present |= n.form == NE);
    if present {
        return Err(EditError::NeAlreadyPresent(pos.clone()));
    }
    let head = g
        .nodes
        .iter()
        .position(|n| n.origin == NodeOrigin::Root)
        .unwrap_or(0);
    if let Some(n) = g.nodes.get_mut(head) {
        if let Some(l) = n.lemma.clone().filter(|_| n.alternatives.is_empty()) {
            let f = l.features.clone().with(FeatureKey::Case, FeatureValue::single("oblique"));
            if let Ok((form, wanted)) = resynthesize(&l, &f, lex) {
                if !wanted.is_empty() {
                    n.form = form;
                    n.inflect = true;
                    n.lemma.as_mut().unwrap().features = wanted;
                }
            }
        }
    }
    let mut ne = RenderNode::new(NE, g.head_token, NodeOrigin::Inserted);
    ne.lemma = Some(Lemma {
        root: NE.into(),
        category: Category::Postposition,
        features: FeatureBundle::new(),
    });
    g.nodes.push(ne);
    for n in &mut g.nodes {
        n.walk_mut(&mut |n| n.dialect_marked = false);
    }
    fix_joins(&mut g.nodes);
    Ok(())
}

/// The sequence holding the node at `path`, and its index there.
fn parent_seq<'a>(nodes: &'a mut Vec<RenderNode>, path: &[usize]) -> Option<(&'a mut Vec<RenderNode>, usize)> {
    match path {
        [i] if *i < nodes.len() => Some((nodes, *i)),
        [i, a, rest @ ..] => parent_seq(nodes.get_mut(*i)?.alternatives.get_mut(*a)?, rest),
        _ => None,
    }
}

/// The addressed node, or the first node in the group satisfying `pick`.
fn locate(g: &MappedGroup, pos: &Position, pick: impl Fn(&RenderNode) -> bool) -> Option<NodePath> {
    if let Some(p) = &pos.node {
        return Some(p.clone());
    }
    fn search(nodes: &[RenderNode], base: &[usize], pick: &dyn Fn(&RenderNode) -> bool) -> Option<Vec<usize>> {
        for (i, n) in nodes.iter().enumerate() {
            let mut here = base.to_vec();
            here.push(i);
            if pick(n) {
                return Some(here);
            }
            for (a, seq) in n.alternatives.iter().enumerate() {
                let mut inner = here.clone();
                inner.push(a);
                if let Some(p) = search(seq, &inner, pick) {
                    return Some(p);
                }
            }
        }
        None
    }
    search(&g.nodes, &[], &pick).map(NodePath)
}

fn resolve_vibhakti(g: &mut MappedGroup, pos: &Position, form: &str, lex: &Lexicon) -> Result<(), EditError> {
    check_form(form)?;
    let path = locate(g, pos, RenderNode::is_placeholder).ok_or_else(|| EditError::NotAPlaceholder(pos.clone()))?;
    let at = Position::node(pos.sentence, pos.group, path.clone());
    let (seq, i) = parent_seq(&mut g.nodes, &path.0).ok_or_else(|| EditError::InvalidPosition(at.clone()))?;
    if !seq[i].is_placeholder() {
        return Err(EditError::NotAPlaceholder(at));
    }
    let node = &mut seq[i];
    node.form = form.to_owned();
    node.lemma = literal_lemma(form, lex.target());
    node.inflect = false;
    if i > 0 {
        let prev = &mut seq[i - 1];
        if let Some(l) = prev.lemma.clone().filter(|l| l.features.contains(FeatureKey::Case)) {
            let f = l.features.clone().with(FeatureKey::Case, FeatureValue::single("oblique"));
            if let Ok((surface, wanted)) = resynthesize(&l, &f, lex) {
                prev.form = surface;
                prev.inflect = true;
                prev.lemma.as_mut().unwrap().features = wanted;
            }
        }
    }
    Ok(())
}

fn choose_alternative(g: &mut MappedGroup, pos: &Position, index: usize) -> Result<(), EditError> {
    let path = locate(g, pos, |n| !n.alternatives.is_empty())
        .ok_or_else(|| EditError::NoAlternative { index, count: 0 })?;
    let (seq, i) = parent_seq(&mut g.nodes, &path.0).ok_or_else(|| EditError::InvalidPosition(pos.clone()))?;
    let count = seq[i].alternatives.len();
    if index >= count {
        return Err(EditError::NoAlternative { index, count });
    }
    let old = seq.remove(i);
    let mut chosen = old.alternatives.into_iter().nth(index).unwrap_or_default();
    if let Some(last) = chosen.last_mut() {
        if last.annotation.is_empty() {
            last.annotation = old.annotation;
        }
        last.dialect_marked |= old.dialect_marked;
    }
    seq.splice(i..i, chosen);
    fix_joins(&mut g.nodes);
    Ok(())
}

fn replace_form(g: &mut MappedGroup, pos: &Position, text: &str) -> Result<(), EditError> {
    check_form(text)?;
    let mut n = RenderNode::new(text, g.head_token, NodeOrigin::Inserted);
    n.manual = true;
    match &pos.node {
        None => {
            n.origin = g.nodes.first().map_or(NodeOrigin::Inserted, |f| f.origin);
            g.nodes = vec![n];
        }
        Some(p) => {
            let slot = p.get_mut(&mut g.nodes).ok_or_else(|| EditError::InvalidPosition(pos.clone()))?;
            n.source = slot.source;
            n.origin = slot.origin;
            *slot = n;
        }
    }
    fix_joins(&mut g.nodes);
    Ok(())
}
