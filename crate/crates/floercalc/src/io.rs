//! JSON documents for complexes and modules, and DOT export.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, BiLabel, Chord, Idem};
use crate::cfk::{CfkComplex, CfkGenerator, UArrow};
use crate::error::SchemaError;
use crate::modules::{DDModule, DModule};
use crate::pairing::TensorComplex;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfkGeneratorDoc {
    pub name: String,
    pub alexander: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maslov: Option<i32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UArrowDoc {
    pub from: String,
    pub to: String,
    pub u: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfkDoc {
    #[serde(default)]
    pub name: String,
    pub generators: Vec<CfkGeneratorDoc>,
    #[serde(default)]
    pub arrows: Vec<UArrowDoc>,
}

fn lookup(names: &BTreeMap<&str, usize>, name: &str, what: &str) -> Result<usize, SchemaError> {
    names
        .get(name)
        .copied()
        .ok_or_else(|| SchemaError::new(format!("{what} refers to unknown generator `{name}`")))
}

pub fn cfk_from_doc(doc: &CfkDoc) -> Result<CfkComplex, SchemaError> {
    let names: BTreeMap<&str, usize> = doc.generators.iter().enumerate().map(|(i, g)| (g.name.as_str(), i)).collect();
    let generators = doc
        .generators
        .iter()
        .map(|g| CfkGenerator { name: g.name.clone(), alexander: g.alexander, maslov: g.maslov })
        .collect();
    let arrows = doc
        .arrows
        .iter()
        .map(|a| {
            Ok(UArrow {
                source: lookup(&names, &a.from, "arrow source")?,
                target: lookup(&names, &a.to, "arrow target")?,
                u: a.u,
            })
        })
        .collect::<Result<Vec<_>, SchemaError>>()?;
    CfkComplex::new(doc.name.clone(), generators, arrows)
}

pub fn cfk_to_doc(c: &CfkComplex) -> CfkDoc {
    CfkDoc {
        name: c.name.clone(),
        generators: c
            .generators
            .iter()
            .map(|g| CfkGeneratorDoc { name: g.name.clone(), alexander: g.alexander, maslov: g.maslov })
            .collect(),
        arrows: c
            .arrows
            .iter()
            .map(|a| UArrowDoc {
                from: c.generators[a.source].name.clone(),
                to: c.generators[a.target].name.clone(),
                u: a.u,
            })
            .collect(),
    }
}

pub fn parse_cfk(json: &str) -> Result<CfkComplex, SchemaError> {
    let doc: CfkDoc = serde_json::from_str(json)?;
    cfk_from_doc(&doc)
}

pub fn cfk_to_json(c: &CfkComplex) -> String {
    serde_json::to_string_pretty(&cfk_to_doc(c)).expect("plain data serializes")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DDGeneratorDoc {
    pub name: String,
    pub li: String,
    pub ri: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DDEdgeDoc {
    pub from: String,
    pub to: String,
    pub label: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DDModuleDoc {
    pub generators: Vec<DDGeneratorDoc>,
    pub edges: Vec<DDEdgeDoc>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unreduced: bool,
}

pub fn dd_to_doc(m: &DDModule) -> DDModuleDoc {
    DDModuleDoc {
        generators: m
            .generators
            .iter()
            .map(|g| DDGeneratorDoc {
                name: g.name.clone(),
                li: g.left.left_name().into(),
                ri: g.right.right_name().into(),
            })
            .collect(),
        edges: m
            .edges
            .iter()
            .map(|(&(s, t), l)| DDEdgeDoc {
                from: m.generators[s].name.clone(),
                to: m.generators[t].name.clone(),
                label: l.to_names(),
            })
            .collect(),
        unreduced: m.unreduced,
    }
}

pub fn dd_from_doc(doc: &DDModuleDoc) -> Result<DDModule, SchemaError> {
    let mut m = DDModule::new();
    m.unreduced = doc.unreduced;
    let mut names = BTreeMap::new();
    for g in &doc.generators {
        if names.contains_key(g.name.as_str()) {
            return Err(SchemaError::new(format!("duplicate generator `{}`", g.name)));
        }
        let i = m.add_generator(g.name.clone(), Idem::parse_left(&g.li)?, Idem::parse_right(&g.ri)?, None);
        names.insert(g.name.as_str(), i);
    }
    for e in &doc.edges {
        let s = lookup(&names, &e.from, "edge source")?;
        let t = lookup(&names, &e.to, "edge target")?;
        m.add_edge(s, t, &BiLabel::from_names(&e.label)?);
    }
    Ok(m)
}

pub fn dd_to_json(m: &DDModule) -> String {
    serde_json::to_string_pretty(&dd_to_doc(m)).expect("plain data serializes")
}

pub fn parse_dd(json: &str) -> Result<DDModule, SchemaError> {
    let doc: DDModuleDoc = serde_json::from_str(json)?;
    dd_from_doc(&doc)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DGeneratorDoc {
    pub name: String,
    pub ri: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DEdgeDoc {
    pub from: String,
    pub to: String,
    pub label: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DModuleDoc {
    pub generators: Vec<DGeneratorDoc>,
    pub edges: Vec<DEdgeDoc>,
}

pub fn d_to_doc(m: &DModule) -> DModuleDoc {
    DModuleDoc {
        generators: m
            .generators
            .iter()
            .map(|g| DGeneratorDoc { name: g.name.clone(), ri: g.idem.right_name().into() })
            .collect(),
        edges: m
            .edges
            .iter()
            .map(|(&(s, t), l)| DEdgeDoc {
                from: m.generators[s].name.clone(),
                to: m.generators[t].name.clone(),
                label: l.terms().map(Chord::right_name).collect(),
            })
            .collect(),
    }
}

pub fn d_from_doc(doc: &DModuleDoc) -> Result<DModule, SchemaError> {
    let mut m = DModule::new();
    let mut names = BTreeMap::new();
    for g in &doc.generators {
        if names.contains_key(g.name.as_str()) {
            return Err(SchemaError::new(format!("duplicate generator `{}`", g.name)));
        }
        let i = m.add_generator(g.name.clone(), Idem::parse_right(&g.ri)?, None);
        names.insert(g.name.as_str(), i);
    }
    for e in &doc.edges {
        let s = lookup(&names, &e.from, "edge source")?;
        let t = lookup(&names, &e.to, "edge target")?;
        let label = e.label.iter().map(|c| Chord::parse_right(c)).collect::<Result<AlgebraElement, _>>()?;
        m.add_edge(s, t, &label);
    }
    Ok(m)
}

pub fn d_to_json(m: &DModule) -> String {
    serde_json::to_string_pretty(&d_to_doc(m)).expect("plain data serializes")
}

pub fn parse_d(json: &str) -> Result<DModule, SchemaError> {
    let doc: DModuleDoc = serde_json::from_str(json)?;
    d_from_doc(&doc)
}

/// Boundary matrix of a tensor complex: entry `[r, c]` means `∂(columns[c]) ∋ rows[r]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub entries: Vec<[usize; 2]>,
    /// Knot-basepoint multiplicity of each entry, parallel to `entries`.
    pub n_w: Vec<u32>,
}

pub fn complex_to_doc(c: &TensorComplex) -> ComplexDoc {
    let (entries, n_w) = c.edges.iter().map(|&(s, t, w)| ([t, s], w)).unzip();
    ComplexDoc { rows: c.names.clone(), columns: c.names.clone(), entries, n_w }
}

pub fn complex_to_json(c: &TensorComplex) -> String {
    serde_json::to_string_pretty(&complex_to_doc(c)).expect("plain data serializes")
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn dd_to_dot(m: &DDModule, title: &str) -> String {
    let mut out = format!("digraph \"{}\" {{\n", dot_escape(title));
    for (i, g) in m.generators.iter().enumerate() {
        out.push_str(&format!(
            "  n{i} [label=\"{} ({},{})\"];\n",
            dot_escape(&g.name),
            g.left.left_name(),
            g.right.right_name()
        ));
    }
    for (&(s, t), l) in &m.edges {
        out.push_str(&format!("  n{s} -> n{t} [label=\"{}\"];\n", dot_escape(&l.to_string())));
    }
    out.push_str("}\n");
    out
}

pub fn d_to_dot(m: &DModule, title: &str) -> String {
    let mut out = format!("digraph \"{}\" {{\n", dot_escape(title));
    for (i, g) in m.generators.iter().enumerate() {
        out.push_str(&format!("  n{i} [label=\"{} ({})\"];\n", dot_escape(&g.name), g.idem.right_name()));
    }
    for (&(s, t), l) in &m.edges {
        out.push_str(&format!("  n{s} -> n{t} [label=\"{}\"];\n", dot_escape(&l.to_string())));
    }
    out.push_str("}\n");
    out
}
