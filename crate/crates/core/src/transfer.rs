//! Mapper: substitutes source word groups by target material, expands TAM
//! templates and attaches source agreement annotations.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grouper::{split_group, TokenAnalyses, WordGroup};
use crate::lexicon::{
    is_null_case, Category, FeatureBundle, FeatureKey, FeatureValue, Gender, Gnp, GroupKind,
    Language, Lexicon, TargetRoot, TemplateForm, TemplateNode, INDECLINABLE,
};
use crate::morph::{analyze_in, synthesize, Analysis};

/// Where a node came from in the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeOrigin {
    Root,
    Vibhakti,
    Tam,
    Qmarker,
    Follower,
    Fixed,
    Punct,
    Unknown,
    /// Added by a post-editing command.
    Inserted,
    /// Read back from notation text; no provenance beyond the group.
    Parsed,
}

/// Target root, category and features a node was synthesized from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma {
    pub root: String,
    pub category: Category,
    pub features: FeatureBundle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderNode {
    /// Empty for a bare alternative set, `*` for a placeholder.
    pub form: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alternatives: Vec<Vec<RenderNode>>,
    /// Display items such as `3`, `~m.`, `e.`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotation: Vec<String>,
    pub dialect_marked: bool,
    pub joined_to_previous: bool,
    /// Index of the source token this node renders.
    pub source: usize,
    pub origin: NodeOrigin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma: Option<Lemma>,
    /// The form is produced by the synthesizer from `lemma`.
    #[serde(default)]
    pub inflect: bool,
    #[serde(default)]
    pub manual: bool,
    #[serde(skip)]
    pub(crate) slot: bool,
}

pub const PLACEHOLDER: &str = "*";

impl RenderNode {
    pub fn new(form: impl Into<String>, source: usize, origin: NodeOrigin) -> RenderNode {
        RenderNode {
            form: form.into(),
            alternatives: Vec::new(),
            annotation: Vec::new(),
            dialect_marked: false,
            joined_to_previous: false,
            source,
            origin,
            lemma: None,
            inflect: false,
            manual: false,
            slot: false,
        }
    }

    pub fn is_placeholder(&self) -> bool {
        self.form == PLACEHOLDER
    }

    /// Visits this node and all nodes nested in its alternatives.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a RenderNode)) {
        f(self);
        for seq in &self.alternatives {
            for n in seq {
                n.walk(f);
            }
        }
    }

    pub fn walk_mut(&mut self, f: &mut dyn FnMut(&mut RenderNode)) {
        f(self);
        for seq in &mut self.alternatives {
            for n in seq {
                n.walk_mut(f);
            }
        }
    }
}

/// Address of a node inside a group: a top-level index, then pairs of
/// (alternative index, node index) descending into brackets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn top(i: usize) -> NodePath {
        NodePath(vec![i])
    }

    pub fn child(&self, i: usize) -> NodePath {
        let mut v = self.0.clone();
        v.push(i);
        NodePath(v)
    }

    pub fn alternative(&self, a: usize) -> NodePath {
        self.child(a)
    }

    pub fn get<'a>(&self, nodes: &'a [RenderNode]) -> Option<&'a RenderNode> {
        let (&first, rest) = self.0.split_first()?;
        let mut node = nodes.get(first)?;
        for pair in rest.chunks(2) {
            let [a, j] = pair else { return None };
            node = node.alternatives.get(*a)?.get(*j)?;
        }
        Some(node)
    }

    pub fn get_mut<'a>(&self, nodes: &'a mut [RenderNode]) -> Option<&'a mut RenderNode> {
        let (&first, rest) = self.0.split_first()?;
        let mut node = nodes.get_mut(first)?;
        for pair in rest.chunks(2) {
            let [a, j] = pair else { return None };
            node = node.alternatives.get_mut(*a)?.get_mut(*j)?;
        }
        Some(node)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappedGroup {
    pub kind: GroupKind,
    /// Source token indices covered.
    pub span: Range<usize>,
    pub head_token: usize,
    /// Target category of the head, when known.
    pub head_category: Option<Category>,
    pub nodes: Vec<RenderNode>,
    pub suppresses_ne: bool,
    /// The target TAM licenses `ne` on its karta.
    pub ergative: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tam: Option<String>,
    /// A punctuation mark; renders without a preceding space.
    pub punct: bool,
}

impl MappedGroup {
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a RenderNode)) {
        for n in &self.nodes {
            n.walk(f);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error("TAM `{0}` has no mapping")]
    UnmappedTam(String),
}

/// Sets `joined_to_previous` on every sequence, nested ones included.
pub fn fix_joins(nodes: &mut [RenderNode]) {
    for (i, n) in nodes.iter_mut().enumerate() {
        n.joined_to_previous = i > 0;
        for seq in &mut n.alternatives {
            fix_joins(seq);
        }
    }
}

/// Display items for a gnp value: person digits, gender, number.
pub fn gnp_annotation(value: &FeatureValue) -> Vec<String> {
    let gnps: Vec<Gnp> = value.alternatives().iter().filter_map(|v| Gnp::parse(v)).collect();
    if gnps.is_empty() {
        return Vec::new();
    }
    let mut items = Vec::new();
    if gnps.iter().all(|g| g.person.is_some()) {
        let mut persons = String::new();
        for g in &gnps {
            let p = g.person.as_deref().unwrap_or_default();
            if !persons.contains(p) {
                persons.push_str(p);
            }
        }
        items.push(persons);
    }
    let gender = gnps[0].gender;
    if gnps.iter().all(|g| g.gender == gender) {
        if let Some(a) = gender.abbrev() {
            items.push(a.to_owned());
        }
    }
    let number = gnps[0].number.clone();
    if let Some(n) = number.filter(|n| gnps.iter().all(|g| g.number.as_deref() == Some(n))) {
        items.extend(number_abbrev(&n).map(str::to_owned));
    }
    items
}

pub fn number_abbrev(number: &str) -> Option<&'static str> {
    match number {
        "sg" => Some("e."),
        "pl" => Some("ba."),
        _ => None,
    }
}

/// Is `item` a well-formed annotation item?
pub fn is_annotation_item(item: &str) -> bool {
    (!item.is_empty() && item.chars().all(|c| c.is_ascii_digit()))
        || Gender::from_abbrev(item).is_some()
        || item == "e."
        || item == "ba."
}

fn expand_targets(targets: &[TargetRoot], source: usize, origin: NodeOrigin) -> RenderNode {
    let node = |t: &TargetRoot| {
        let mut n = RenderNode::new(&t.root, source, origin);
        n.dialect_marked = t.dialect_marked;
        n.lemma = Some(Lemma {
            root: t.root.clone(),
            category: t.category,
            features: FeatureBundle::new(),
        });
        n
    };
    let mut primary = node(&targets[0]);
    primary.alternatives = targets[1..].iter().map(|t| vec![node(t)]).collect();
    primary
}

/// Restricts `wanted` to the keys the target entry inflects for.
pub(crate) fn request_for(lang: &Language, t: &TargetRoot, wanted: &FeatureBundle) -> FeatureBundle {
    let Some(entry) = lang.lookup_entry(&t.root, t.category).into_iter().next() else {
        return FeatureBundle::new();
    };
    if entry.paradigm == INDECLINABLE {
        return FeatureBundle::new();
    }
    let keys = lang.paradigm_keys(&entry.paradigm);
    wanted
        .iter()
        .filter(|(k, _)| keys.contains(k))
        .map(|(k, v)| (k, v.clone()))
        .collect()
}

fn set_inflection(node: &mut RenderNode, lang: &Language, wanted: &FeatureBundle) {
    node.walk_mut(&mut |n| {
        if let Some(l) = n.lemma.as_mut() {
            let t = TargetRoot {
                root: l.root.clone(),
                category: l.category,
                dialect_marked: false,
            };
            l.features = request_for(lang, &t, wanted);
            n.inflect = !l.features.is_empty();
        }
    });
}

/// Lemma for a template literal when the target analyzer gives exactly one
/// reading; only inflectional keys are kept.
pub(crate) fn literal_lemma(form: &str, lang: &Language) -> Option<Lemma> {
    let analyses = analyze_in(form, lang, &[]);
    let [a] = analyses.as_slice() else {
        return None;
    };
    let keys = if a.paradigm == INDECLINABLE {
        Default::default()
    } else {
        lang.paradigm_keys(&a.paradigm)
    };
    Some(Lemma {
        root: a.root.clone(),
        category: a.category,
        features: a
            .features
            .iter()
            .filter(|(k, _)| keys.contains(k))
            .map(|(k, v)| (k, v.clone()))
            .collect(),
    })
}

struct HeadCtx<'a> {
    targets: &'a [TargetRoot],
    gnp: Option<FeatureValue>,
    lang: &'a Language,
}

fn expand_template(
    nodes: &[TemplateNode],
    head: Option<&HeadCtx>,
    target: &Language,
    source: usize,
    out: &mut Vec<RenderNode>,
) {
    for t in nodes {
        let mut node = match &t.form {
            TemplateForm::Literal(s) => {
                let mut n = RenderNode::new(s, source, NodeOrigin::Tam);
                n.lemma = literal_lemma(s, target);
                n
            }
            TemplateForm::Placeholder => RenderNode::new(PLACEHOLDER, source, NodeOrigin::Tam),
            TemplateForm::Empty => RenderNode::new("", source, NodeOrigin::Tam),
            TemplateForm::Head(label) => match (head, label) {
                (None, None) => continue,
                (None, Some(l)) => RenderNode::new(l, source, NodeOrigin::Tam),
                (Some(h), label) => {
                    let mut n = expand_targets(h.targets, source, NodeOrigin::Root);
                    if let Some(l) = label {
                        let mut wanted = FeatureBundle::new().with(FeatureKey::Tam, FeatureValue::single(l));
                        if let Some(g) = &h.gnp {
                            wanted.insert(FeatureKey::Gnp, g.clone());
                        }
                        set_inflection(&mut n, h.lang, &wanted);
                    }
                    n
                }
            },
        };
        node.dialect_marked |= t.tick;
        node.slot = t.gnp_slot;
        for alt in &t.alternatives {
            let mut seq = Vec::new();
            expand_template(alt, head, target, source, &mut seq);
            if !seq.is_empty() {
                node.alternatives.push(seq);
            }
        }
        out.push(node);
    }
}

/// Pure expansion of a TAM mapping without a verb: `@label` heads show as
/// their label and bare `@` heads are left out.
pub fn map_tam(tam: &str, lex: &Lexicon) -> Result<Vec<RenderNode>, TransferError> {
    let m = lex
        .tam_mapping(tam)
        .ok_or_else(|| TransferError::UnmappedTam(tam.to_owned()))?;
    let mut out = Vec::new();
    expand_template(&m.template, None, lex.target(), 0, &mut out);
    fix_joins(&mut out);
    Ok(out)
}

fn head_targets(analyses: &[Analysis], lex: &Lexicon) -> Vec<TargetRoot> {
    let mut out: Vec<TargetRoot> = Vec::new();
    for a in analyses {
        let Some(m) = lex.root_mapping(&a.root, a.category) else {
            continue;
        };
        for t in &m.targets {
            if !out.iter().any(|o| o.root == t.root && o.category == t.category) {
                out.push(t.clone());
            }
        }
    }
    out
}

fn verbatim(form: &str, source: usize, origin: NodeOrigin) -> RenderNode {
    let mut n = RenderNode::new(form, source, origin);
    n.dialect_marked = true;
    n
}

fn first_value(features: &FeatureBundle, key: FeatureKey) -> Option<String> {
    features
        .get(key)
        .and_then(|v| v.alternatives().first().cloned())
}

/// Maps one source group to target material. Forms of inflected nodes hold
/// the bare target root until [`generate`] runs.
pub fn map_group(group: &WordGroup, tokens: &[TokenAnalyses], lex: &Lexicon) -> MappedGroup {
    let h = group.head_token;
    let mut mapped = MappedGroup {
        kind: group.kind,
        span: group.span.clone(),
        head_token: h,
        head_category: None,
        nodes: Vec::new(),
        suppresses_ne: false,
        ergative: false,
        tam: group.group_tam.clone(),
        punct: group.punct,
    };
    if group.punct {
        mapped.nodes.push(RenderNode::new(&tokens[h].token, h, NodeOrigin::Punct));
        return mapped;
    }
    if group.kind == GroupKind::Unknown || group.head.is_empty() {
        mapped.nodes.push(verbatim(&tokens[h].token, h, NodeOrigin::Unknown));
        return mapped;
    }
    let source_features = group.head[0].features.clone();
    match group.kind {
        GroupKind::FixedExpression => {
            let meaning = group.meaning.as_ref().expect("fixed expressions carry a meaning");
            let node = expand_targets(&meaning.targets, h, NodeOrigin::Fixed);
            mapped.head_category = Some(meaning.targets[0].category);
            mapped.nodes.push(node);
        }
        GroupKind::VerbGroup => map_verb_group(group, lex, &mut mapped),
        _ => map_nominal(group, lex, &mut mapped),
    }
    fix_joins(&mut mapped.nodes);
    annotate_agreement(mapped, &source_features, lex)
}

fn map_nominal(group: &WordGroup, lex: &Lexicon, mapped: &mut MappedGroup) {
    let h = group.head_token;
    let a = &group.head[0];
    let targets = head_targets(&group.head, lex);
    let case = first_value(&a.features, FeatureKey::Case).filter(|c| !is_null_case(c));
    let has_vibhakti = case.is_some() || !group.followers.is_empty();
    let mut head = if targets.is_empty() {
        verbatim(&a.root, h, NodeOrigin::Root)
    } else {
        mapped.head_category = Some(targets[0].category);
        let mut n = expand_targets(&targets, h, NodeOrigin::Root);
        let mut wanted = FeatureBundle::new().with(
            FeatureKey::Case,
            FeatureValue::single(if has_vibhakti { "oblique" } else { "0" }),
        );
        if let Some(num) = a.features.get(FeatureKey::Number) {
            wanted.insert(FeatureKey::Number, num.clone());
        }
        set_inflection(&mut n, lex.target(), &wanted);
        n
    };
    head.slot = false;
    mapped.nodes.push(head);
    if let Some(case) = case {
        mapped.nodes.push(match lex.root_mapping(&case, Category::Postposition) {
            Some(m) => expand_targets(&m.targets, h, NodeOrigin::Vibhakti),
            None => verbatim(&case, h, NodeOrigin::Vibhakti),
        });
    }
    for f in &group.followers {
        mapped.nodes.push(
            match lex.root_mapping(&f.analysis.root, f.analysis.category) {
                Some(m) => expand_targets(&m.targets, f.token, NodeOrigin::Vibhakti),
                None => verbatim(&f.analysis.root, f.token, NodeOrigin::Vibhakti),
            },
        );
    }
}

fn map_verb_group(group: &WordGroup, lex: &Lexicon, mapped: &mut MappedGroup) {
    let h = group.head_token;
    let a = &group.head[0];
    let targets = head_targets(&group.head, lex);
    let tam = first_value(&a.features, FeatureKey::Tam);
    let mapping = tam.as_deref().and_then(|t| lex.tam_mapping(t));
    if let Some(t) = targets.first() {
        mapped.head_category = Some(t.category);
    }
    match (mapping, targets.is_empty()) {
        (Some(m), false) => {
            mapped.suppresses_ne = m.suppresses_ne;
            mapped.ergative = m.ergative;
            let has_slot = crate::lexicon::template::has_gnp_slot(&m.template);
            let source_gnp = a.features.get(FeatureKey::Gnp);
            let gnp = match (has_slot, source_gnp.and_then(FeatureValue::as_single)) {
                (false, Some(g)) => {
                    let g = Gnp::parse(g);
                    match (g, &m.citation) {
                        (Some(g), Some(c)) => Some(g.filled_from(c).to_string()),
                        (Some(g), None) => Some(g.to_string()),
                        (None, _) => None,
                    }
                }
                _ => m.citation.as_ref().map(Gnp::to_string),
            };
            let ctx = HeadCtx {
                targets: &targets,
                gnp: gnp.map(FeatureValue::single),
                lang: lex.target(),
            };
            expand_template(&m.template, Some(&ctx), lex.target(), h, &mut mapped.nodes);
        }
        (_, empty) => {
            mapped.nodes.push(if empty {
                verbatim(&a.root, h, NodeOrigin::Root)
            } else {
                expand_targets(&targets, h, NodeOrigin::Root)
            });
            if let Some(t) = tam.filter(|t| t != "0") {
                mapped.nodes.push(verbatim(&t, h, NodeOrigin::Tam));
            }
        }
    }
    let template_len = mapped.nodes.len();
    for f in &group.followers {
        mapped.nodes.push(
            match lex.root_mapping(&f.analysis.root, f.analysis.category) {
                Some(m) => expand_targets(&m.targets, f.token, NodeOrigin::Follower),
                None => verbatim(&f.analysis.root, f.token, NodeOrigin::Follower),
            },
        );
    }
    if let Some(q) = first_value(&a.features, FeatureKey::Qmarker) {
        mapped.nodes.push(match lex.root_mapping(&q, Category::Particle) {
            Some(m) => expand_targets(&m.targets, h, NodeOrigin::Qmarker),
            None => verbatim(&q, h, NodeOrigin::Qmarker),
        });
    }
    // A slot on the last template node floats to the end of the group.
    if template_len > 0 && mapped.nodes.len() > template_len && mapped.nodes[template_len - 1].slot
    {
        mapped.nodes[template_len - 1].slot = false;
        if let Some(last) = mapped.nodes.last_mut() {
            last.slot = true;
        }
    }
}

/// Attaches source gender, number and person to the forms that do not show
/// them: gnp slots of TAM templates, and nominal heads whose target entry
/// neither carries nor inflects for the feature. Values come only from
/// `source_features`.
pub fn annotate_agreement(
    mut mapped: MappedGroup,
    source_features: &FeatureBundle,
    lex: &Lexicon,
) -> MappedGroup {
    if let Some(gnp) = source_features.get(FeatureKey::Gnp) {
        let items = gnp_annotation(gnp);
        for n in &mut mapped.nodes {
            n.walk_mut(&mut |n| {
                if n.slot {
                    n.annotation = items.clone();
                    n.slot = false;
                }
            });
        }
    }
    if matches!(mapped.kind, GroupKind::VerbGroup | GroupKind::FixedExpression) {
        return mapped;
    }
    let Some(head) = mapped
        .nodes
        .iter_mut()
        .find(|n| n.origin == NodeOrigin::Root)
    else {
        return mapped;
    };
    let Some(lemma) = head.lemma.clone() else {
        return mapped;
    };
    let target = lex.target();
    let Some(entry) = target.lookup_entry(&lemma.root, lemma.category).into_iter().next() else {
        return mapped;
    };
    let realized = if entry.paradigm == INDECLINABLE {
        Default::default()
    } else {
        target.paradigm_keys(&entry.paradigm)
    };
    let shown = |key: FeatureKey| -> Option<&FeatureValue> {
        let v = source_features.get(key)?;
        if v.is_any() || realized.contains(&key) {
            return None;
        }
        match entry.inherent.get(key) {
            Some(t) if t == v => None,
            _ => Some(v),
        }
    };
    let mut items = Vec::new();
    if let Some(p) = shown(FeatureKey::Person) {
        items.push(p.alternatives().concat());
    }
    if let Some(g) = shown(FeatureKey::Gender).and_then(FeatureValue::as_single) {
        if let Some(a) = Gnp::parse(&format!("{g}_any_any")).and_then(|g| g.gender.abbrev()) {
            items.push(a.to_owned());
        }
    }
    if let Some(n) = shown(FeatureKey::Number).and_then(FeatureValue::as_single) {
        items.extend(number_abbrev(n).map(str::to_owned));
    }
    if !items.is_empty() {
        head.annotation = items;
    }
    mapped
}

/// Sentence-level ordering. Source order is kept as is.
pub fn order_clauses(groups: Vec<MappedGroup>) -> Vec<MappedGroup> {
    groups
}

/// Fills in the forms of inflected nodes through the target synthesizer.
/// A node whose request cannot be met keeps its target root.
pub fn generate(mapped: &mut MappedGroup, lex: &Lexicon) {
    let requests = match split_group(mapped, lex.target()) {
        Ok(r) => r,
        Err(_) => {
            let mut probe = mapped.clone();
            probe.kind = GroupKind::Singleton;
            split_group(&probe, lex.target()).unwrap_or_default()
        }
    };
    for r in requests {
        if let Ok(form) = synthesize(&r.root, r.category, &r.features, lex.target()) {
            if let Some(n) = r.path.get_mut(&mut mapped.nodes) {
                n.form = form;
            }
        }
    }
}
