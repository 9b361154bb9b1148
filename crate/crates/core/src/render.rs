//! Canonical text and JSON renderings. The CLI prints exactly these strings.

use serde_json::{Map, Number, Value as Json};

use crate::dynamics::snapshot;
use crate::error::Result;
use crate::evaluation::MatchReport;
use crate::graph::{collect_attributes, NodePath, ObjectInstance, SubObjectNode};
use crate::scalar::Scalar;
use crate::types::{format_values, KnowledgeBase, Value};

fn number(text: String) -> Json {
    Json::Number(
        text.parse::<Number>()
            .expect("scalar renders as a JSON number"),
    )
}

fn exact<S: Scalar>(n: &S) -> Json {
    number(n.to_decimal())
}

/// Scores are shown with two fraction digits, rounded half up.
fn score<S: Scalar>(n: &S) -> Json {
    number(n.to_fixed(2))
}

fn value_json<S: Scalar>(v: &Value<S>) -> Json {
    match v {
        Value::Symbol(s) => Json::String(s.clone()),
        Value::Number(n) => exact(n),
    }
}

fn values_json<S: Scalar>(values: &[Value<S>]) -> Json {
    Json::Array(values.iter().map(value_json).collect())
}

fn node_json<S: Scalar>(node: &SubObjectNode<S>) -> Json {
    let mut obj = Map::new();
    obj.insert("slot".into(), Json::String(node.segment()));
    obj.insert("type".into(), Json::String(node.type_name.clone()));
    obj.insert("level".into(), Json::from(node.level));
    let mut attrs = Map::new();
    for (name, values) in &node.attributes {
        attrs.insert(name.clone(), values_json(values));
    }
    obj.insert("attributes".into(), Json::Object(attrs));
    obj.insert(
        "children".into(),
        Json::Array(node.children.iter().map(node_json).collect()),
    );
    Json::Object(obj)
}

/// Nested export of an instance: the tree with explicit levels, children in
/// slot declaration order, plus the attributes inherited at the root.
pub fn instance_json<S: Scalar>(inst: &ObjectInstance<S>) -> Json {
    let mut obj = Map::new();
    obj.insert("id".into(), Json::String(inst.id.clone()));
    obj.insert("type".into(), Json::String(inst.type_name.clone()));
    let mut inherited = Map::new();
    for (name, values) in collect_attributes(&inst.root) {
        inherited.insert(name.to_string(), values_json(values));
    }
    obj.insert("inherited".into(), Json::Object(inherited));
    obj.insert("root".into(), node_json(&inst.root));
    Json::Object(obj)
}

/// `name = v1, v2` per inherited attribute of the instance root.
pub fn attributes_text<S: Scalar>(inst: &ObjectInstance<S>) -> String {
    let mut out = String::new();
    for (name, values) in collect_attributes(&inst.root) {
        out.push_str(&format!("{name} = {}\n", format_values(values)));
    }
    out
}

/// Inherited attributes of the parts present at `t`.
pub fn attributes_at_text<S: Scalar>(
    kb: &KnowledgeBase<S>,
    inst: &ObjectInstance<S>,
    t: &S,
) -> Result<String> {
    let snap = snapshot(kb, inst, t)?;
    let mut out = String::new();
    for (name, values) in &snap.inherited {
        out.push_str(&format!("{name} = {}\n", format_values(values)));
    }
    Ok(out)
}

/// The internal hierarchy present at `t`, one node per line with its level
/// and reliability, leaf attributes indented below their node.
pub fn tree_text<S: Scalar>(
    kb: &KnowledgeBase<S>,
    inst: &ObjectInstance<S>,
    t: &S,
) -> Result<String> {
    let snap = snapshot(kb, inst, t)?;
    let mut out = String::new();
    for present in &snap.nodes {
        let node = inst.node(&present.path)?;
        let indent = "  ".repeat(present.path.0.len());
        let label = if present.path.is_root() {
            inst.id.clone()
        } else {
            node.segment()
        };
        out.push_str(&format!(
            "{indent}{label} : {} [level {}] reliability {}\n",
            node.type_name,
            node.level,
            present.reliability.to_decimal()
        ));
        for (name, values) in &node.attributes {
            if !values.is_empty() {
                out.push_str(&format!("{indent}  - {name} = {}\n", format_values(values)));
            }
        }
    }
    Ok(out)
}

pub fn match_report_text<S: Scalar>(reports: &[MatchReport<S>]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!(
            "{}. {} score {}\n",
            r.rank,
            r.candidate,
            r.score.to_fixed(2)
        ));
        for (name, d) in &r.distances {
            out.push_str(&format!("   {name}: {}\n", d.to_fixed(2)));
        }
        for node in &r.nodes {
            out.push_str(&format!(
                "   [{}] {} (reliability {})\n",
                node.path,
                node.aggregate.to_fixed(2),
                node.reliability.to_fixed(2)
            ));
        }
        for w in &r.warnings {
            out.push_str(&format!("   warning: {w}\n"));
        }
    }
    out
}

pub fn match_report_json<S: Scalar>(
    observed: &str,
    type_name: &str,
    t: &S,
    reports: &[MatchReport<S>],
) -> Json {
    let mut top = Map::new();
    top.insert("observed".into(), Json::String(observed.to_string()));
    top.insert("type".into(), Json::String(type_name.to_string()));
    top.insert("t".into(), exact(t));
    let list = reports
        .iter()
        .map(|r| {
            let mut obj = Map::new();
            obj.insert("rank".into(), Json::from(r.rank));
            obj.insert("candidate".into(), Json::String(r.candidate.clone()));
            obj.insert("score".into(), score(&r.score));
            let mut distances = Map::new();
            for (name, d) in &r.distances {
                distances.insert(name.to_string(), score(d));
            }
            obj.insert("distances".into(), Json::Object(distances));
            let parts = r
                .nodes
                .iter()
                .map(|n| {
                    let mut p = Map::new();
                    p.insert("path".into(), Json::String(n.path.to_string()));
                    p.insert("aggregate".into(), score(&n.aggregate));
                    p.insert("reliability".into(), score(&n.reliability));
                    Json::Object(p)
                })
                .collect();
            obj.insert("parts".into(), Json::Array(parts));
            obj.insert(
                "warnings".into(),
                Json::Array(r.warnings.iter().cloned().map(Json::String).collect()),
            );
            Json::Object(obj)
        })
        .collect();
    top.insert("reports".into(), Json::Array(list));
    Json::Object(top)
}

/// Pretty JSON text with a trailing newline.
pub fn json_text(value: &Json) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Present-node paths of a snapshot, root rendered as `.`.
pub fn paths_text(paths: &[NodePath]) -> String {
    paths
        .iter()
        .map(|p| {
            if p.is_root() {
                ".".to_string()
            } else {
                p.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
