//! TAM rendering templates.
//!
//! A template is written in the dialect notation with three extra forms:
//! `@` is the head root as is, `@label` is the head inflected with
//! `TAM=label`, and the annotation `{gnp}` marks where the source gnp is
//! displayed. `*` is the unresolved postposition placeholder.

use serde::{Deserialize, Serialize};

use crate::render::notation::{self, RawNode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum TemplateForm {
    Literal(String),
    /// Head verb; `Some(label)` inflects it with that target TAM.
    Head(Option<String>),
    Placeholder,
    /// Bare alternative set such as `[HE|thA]`.
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateNode {
    pub form: TemplateForm,
    pub alternatives: Vec<Vec<TemplateNode>>,
    pub gnp_slot: bool,
    pub tick: bool,
}

impl TemplateNode {
    pub fn walk<'a>(&'a self, out: &mut Vec<&'a TemplateNode>) {
        out.push(self);
        for alt in &self.alternatives {
            for n in alt {
                n.walk(out);
            }
        }
    }
}

pub fn parse_template(text: &str) -> Result<Vec<TemplateNode>, String> {
    let raw = notation::parse_sequence(text).map_err(|e| e.to_string())?;
    raw.iter().map(convert).collect()
}

fn convert(raw: &RawNode) -> Result<TemplateNode, String> {
    let form = if raw.form == "*" {
        TemplateForm::Placeholder
    } else if let Some(label) = raw.form.strip_prefix('@') {
        TemplateForm::Head((!label.is_empty()).then(|| label.to_owned()))
    } else if raw.form.is_empty() {
        TemplateForm::Empty
    } else {
        TemplateForm::Literal(raw.form.clone())
    };
    let gnp_slot = match raw.annotation.as_deref() {
        None => false,
        Some([item]) if item == "gnp" => true,
        Some(other) => return Err(format!("template annotation must be `{{gnp}}`, found {other:?}")),
    };
    if form == TemplateForm::Placeholder && (raw.alternatives.is_some() || gnp_slot || raw.tick) {
        return Err("placeholder `*` takes no alternatives, annotation or marker".into());
    }
    let alternatives = raw
        .alternatives
        .iter()
        .flatten()
        .map(|seq| seq.iter().map(convert).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TemplateNode {
        form,
        alternatives,
        gnp_slot,
        tick: raw.tick,
    })
}

pub fn count_placeholders(nodes: &[TemplateNode]) -> usize {
    let mut all = Vec::new();
    for n in nodes {
        n.walk(&mut all);
    }
    all.iter()
        .filter(|n| n.form == TemplateForm::Placeholder)
        .count()
}

pub fn has_tick(nodes: &[TemplateNode]) -> bool {
    let mut all = Vec::new();
    for n in nodes {
        n.walk(&mut all);
    }
    all.iter().any(|n| n.tick)
}

pub fn has_gnp_slot(nodes: &[TemplateNode]) -> bool {
    let mut all = Vec::new();
    for n in nodes {
        n.walk(&mut all);
    }
    all.iter().any(|n| n.gnp_slot)
}
