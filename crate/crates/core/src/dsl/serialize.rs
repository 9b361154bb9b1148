use std::collections::BTreeSet;
use std::fmt::Write;

use super::lexer::{is_ident_continue, is_ident_start};
use crate::dynamics::TimeFunction;
use crate::evaluation::{Aggregation, GlobalEvalSpec, MissingPolicy};
use crate::graph::{NodePath, ObjectInstance, SubObjectNode};
use crate::messaging::{Action, Handler};
use crate::scalar::Scalar;
use crate::types::{
    format_values, AttributeDef, Domain, EffectiveSchema, KnowledgeBase, PartSlot, Reference,
    TypeDef,
};

/// Canonical text of `kb`: types with their dependencies first (ties by
/// name), then instances by id. Parsing the result gives back an equal base.
pub fn serialize_kb<S: Scalar>(kb: &KnowledgeBase<S>) -> String {
    let mut blocks = Vec::new();
    if let Some(unit) = &kb.time_unit {
        blocks.push(format!("timeunit {}\n", quote(unit)));
    }
    for def in type_order(kb) {
        blocks.push(type_text(def));
    }
    for inst in kb.instances.values() {
        blocks.push(instance_text(kb, inst));
    }
    blocks.join("\n")
}

fn type_order<S: Scalar>(kb: &KnowledgeBase<S>) -> Vec<&TypeDef<S>> {
    fn visit<'a, S: Scalar>(
        kb: &'a KnowledgeBase<S>,
        name: &str,
        done: &mut BTreeSet<String>,
        out: &mut Vec<&'a TypeDef<S>>,
    ) {
        let Some(def) = kb.types.get(name) else {
            return;
        };
        if !done.insert(name.to_string()) {
            return;
        }
        let mut deps: Vec<&str> = def.supertype.iter().map(String::as_str).collect();
        collect_part_types(&def.parts, &mut deps);
        for dep in deps {
            visit(kb, dep, done, out);
        }
        out.push(def);
    }
    let mut done = BTreeSet::new();
    let mut out = Vec::new();
    for name in kb.types.keys() {
        visit(kb, name, &mut done, &mut out);
    }
    out
}

fn collect_part_types<'a, S>(parts: &'a [PartSlot<S>], out: &mut Vec<&'a str>) {
    for p in parts {
        out.push(&p.part_type);
        collect_part_types(&p.parts, out);
    }
}

fn quote(s: &str) -> String {
    let mut out = String::from('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_ident_start) && chars.all(is_ident_continue)
}

fn time_fn_text<S: Scalar>(f: &TimeFunction<S>) -> String {
    match f {
        TimeFunction::Constant(c) => format!("constant({})", c.to_decimal()),
        TimeFunction::Linear { slope, intercept } => {
            format!("linear({}, {})", slope.to_decimal(), intercept.to_decimal())
        }
        TimeFunction::Piecewise {
            points,
            interpolate,
        } => {
            let pts: Vec<String> = points
                .iter()
                .map(|(t, v)| format!("({}, {})", t.to_decimal(), v.to_decimal()))
                .collect();
            let mode = if *interpolate { " linear" } else { "" };
            format!("piecewise{mode}({})", pts.join(", "))
        }
        TimeFunction::Periodic { period, inner } => {
            format!("periodic({}, {})", period.to_decimal(), time_fn_text(inner))
        }
    }
}

fn attr_text<S: Scalar>(a: &AttributeDef<S>) -> String {
    let mut s = format!("attr {}", a.name);
    if a.qualifying {
        s.push_str(" qualifying");
    }
    match &a.domain {
        Domain::Enum(values) => write!(s, " domain enum({})", values.join(", ")).unwrap(),
        Domain::Range { lo, hi, unit } => {
            write!(s, " domain range({}, {})", lo.to_decimal(), hi.to_decimal()).unwrap();
            if let Some(unit) = unit {
                write!(s, " unit {}", quote(unit)).unwrap();
            }
        }
    }
    write!(s, " card {}", a.cardinality).unwrap();
    match &a.reference {
        Some(Reference::Constant(c)) => write!(s, " ref {}", c.to_decimal()).unwrap(),
        Some(Reference::Function(f)) => write!(s, " ref {}", time_fn_text(f)).unwrap(),
        None => {}
    }
    s
}

fn part_text<S: Scalar>(p: &PartSlot<S>, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    write!(
        out,
        "{pad}part {} : {} card {} reliability {}",
        p.name,
        p.part_type,
        p.cardinality,
        time_fn_text(&p.reliability)
    )
    .unwrap();
    if p.attributes.is_empty() && p.parts.is_empty() && p.explanation.is_none() {
        out.push('\n');
        return;
    }
    out.push_str(" {\n");
    if let Some(e) = &p.explanation {
        writeln!(out, "{pad}  explain {}", quote(e)).unwrap();
    }
    for a in &p.attributes {
        writeln!(out, "{pad}  {}", attr_text(a)).unwrap();
    }
    for child in &p.parts {
        part_text(child, indent + 1, out);
    }
    writeln!(out, "{pad}}}").unwrap();
}

fn global_text<S: Scalar>(g: &GlobalEvalSpec<S>) -> String {
    let agg = match &g.aggregation {
        Aggregation::WeightedMean => "mean".to_string(),
        Aggregation::Max => "max".to_string(),
        Aggregation::Min => "min".to_string(),
        Aggregation::Rules(bands) => {
            let b: Vec<String> = bands
                .iter()
                .map(|(x, y)| format!("({}, {})", x.to_decimal(), y.to_decimal()))
                .collect();
            format!("rules({})", b.join(", "))
        }
    };
    let missing = match &g.missing {
        MissingPolicy::Ignore => "ignore".to_string(),
        MissingPolicy::Penalize(p) => format!("penalize({})", p.to_decimal()),
    };
    format!("eval global {agg} missing {missing}")
}

fn handler_text<S: Scalar>(h: &Handler<S>) -> String {
    let message = if is_ident(&h.message) {
        h.message.clone()
    } else {
        quote(&h.message)
    };
    let args = match &h.action {
        Action::Lookup(Some(n))
        | Action::Reliability(Some(n))
        | Action::Reference(Some(n))
        | Action::Update(Some(n)) => {
            format!("({n})")
        }
        Action::Table { attribute, rows } => {
            let r: Vec<String> = rows.iter().map(|(k, v)| format!("({k}, {v})")).collect();
            format!("({attribute}, {})", r.join(", "))
        }
        _ => String::new(),
    };
    format!("on {message} -> {}{args}", h.action.name())
}

fn type_text<S: Scalar>(def: &TypeDef<S>) -> String {
    let mut out = format!("type {}", def.name);
    if let Some(sup) = &def.supertype {
        write!(out, " isa {sup}").unwrap();
    }
    out.push_str(" {\n");
    writeln!(out, "  levels {}", def.levels).unwrap();
    if let Some(e) = &def.explanation {
        writeln!(out, "  explain {}", quote(e)).unwrap();
    }
    for a in &def.attributes {
        writeln!(out, "  {}", attr_text(a)).unwrap();
    }
    for p in &def.parts {
        part_text(p, 1, &mut out);
    }
    for t in &def.eval_tables {
        let e: Vec<String> = t
            .entries
            .iter()
            .map(|(a, b, d)| format!("({a}, {b}, {})", d.to_decimal()))
            .collect();
        writeln!(out, "  eval {} table({})", t.attribute, e.join(", ")).unwrap();
    }
    if let Some(g) = &def.global_eval {
        writeln!(out, "  {}", global_text(g)).unwrap();
    }
    for h in &def.handlers {
        writeln!(out, "  {}", handler_text(h)).unwrap();
    }
    out.push_str("}\n");
    out
}

fn has_values<S>(node: &SubObjectNode<S>) -> bool {
    node.attributes.values().any(|v| !v.is_empty()) || node.children.iter().any(has_values)
}

fn instance_text<S: Scalar>(kb: &KnowledgeBase<S>, inst: &ObjectInstance<S>) -> String {
    let mut out = format!("instance {} of {} {{\n", inst.id, inst.type_name);
    let schema = crate::types::resolve_effective_schema(kb, &inst.type_name).ok();
    node_lines(kb, &inst.root, schema.as_ref(), &NodePath::root(), &mut out);
    out.push_str("}\n");
    out
}

/// Bindings for a node's values, plus a bare `part` line for each optional
/// node that no binding would otherwise bring into existence.
fn node_lines<S: Scalar>(
    kb: &KnowledgeBase<S>,
    node: &SubObjectNode<S>,
    schema: Option<&EffectiveSchema<S>>,
    path: &NodePath,
    out: &mut String,
) {
    for (name, values) in &node.attributes {
        if values.is_empty() {
            continue;
        }
        let q = crate::graph::QualifiedName::new(path.clone(), name.clone());
        writeln!(out, "  {q} = {}", format_values::<S>(values)).unwrap();
    }
    for child in &node.children {
        let child_path = path.child(child.segment());
        let part = schema.and_then(|s| s.part(&child.slot_name));
        let implied = part.is_none_or(|p| child.index.unwrap_or(1) <= p.slot.cardinality.min);
        if !implied && !has_values(child) {
            writeln!(out, "  part {child_path}").unwrap();
        }
        let child_schema = part.and_then(|p| p.schema_for(kb, &child.type_name).ok());
        node_lines(kb, child, child_schema.as_deref(), &child_path, out);
    }
}
