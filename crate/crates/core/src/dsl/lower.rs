//! Turns a parsed document into types and instances, reporting every
//! semantic problem with the span of the construct at fault.

use std::collections::BTreeSet;

use super::parser::{Document, InstanceDecl, LocalCheck, TypeDecl};
use super::{Diagnostic, SourceSpan};
use crate::error::Error;
use crate::graph::{
    node_schema, sort_attributes, validate_instance, NodePath, ObjectInstance, QualifiedName,
};
use crate::scalar::Scalar;
use crate::types::{resolve_effective_schema, KnowledgeBase};

/// An observed object with the attributes left unobserved.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation<S> {
    pub instance: ObjectInstance<S>,
    pub unobserved: Vec<QualifiedName>,
    pub warnings: Vec<Diagnostic>,
}

fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

fn local_check<S: Scalar>(owner: &str, check: &LocalCheck<S>) -> Result<(), String> {
    match check {
        LocalCheck::Attribute(attr) => attr.check(owner).map_err(|e| e.to_string()),
        LocalCheck::Function(f) => f.check().map_err(|e| e.to_string()),
        LocalCheck::Global(spec) => spec.check(),
    }
}

/// Best span for an error raised while resolving `decl`.
fn resolution_span<S>(decl: &TypeDecl<S>, err: &Error) -> SourceSpan {
    let find = |list: &[(String, SourceSpan)], name: &str| {
        list.iter().find(|(n, _)| n == name).map(|(_, s)| s.clone())
    };
    let hit = match err {
        Error::UnknownType(name) => find(&decl.type_refs, name),
        Error::CyclicComposition { part_type, .. } => find(&decl.type_refs, part_type),
        Error::IllegalOverride { member, .. } => find(&decl.members, member),
        _ => None,
    };
    hit.unwrap_or_else(|| decl.name_span.clone())
}

pub fn lower_document<S: Scalar>(
    kb: &mut KnowledgeBase<S>,
    doc: Document<S>,
) -> Result<Vec<Diagnostic>, Vec<Diagnostic>> {
    let mut work = kb.clone();
    let mut diags = Vec::new();
    if let Some((unit, span)) = doc.time_unit {
        match &work.time_unit {
            Some(existing) if *existing != unit => diags.push(Diagnostic::error(
                format!("time unit `{unit}` conflicts with `{existing}` loaded earlier"),
                span,
            )),
            _ => work.time_unit = Some(unit),
        }
    }

    let mut new_types = Vec::new();
    for decl in &doc.types {
        for (span, check) in &decl.checks {
            if let Err(msg) = local_check(&decl.def.name, check) {
                diags.push(Diagnostic::error(msg, span.clone()));
            }
        }
        if work.types.contains_key(&decl.def.name) {
            diags.push(Diagnostic::error(
                format!("type `{}` is declared twice", decl.def.name),
                decl.name_span.clone(),
            ));
            continue;
        }
        work.types.insert(decl.def.name.clone(), decl.def.clone());
        new_types.push(decl);
    }
    for decl in &new_types {
        for (name, span) in &decl.type_refs {
            if !work.types.contains_key(name) {
                diags.push(
                    Diagnostic::error(format!("unknown type `{name}`"), span.clone())
                        .with_hint("declare it earlier in this file or in a file loaded before"),
                );
            }
        }
    }
    if has_errors(&diags) {
        return Err(diags);
    }

    for decl in &new_types {
        let schema = match resolve_effective_schema(&work, &decl.def.name) {
            Ok(schema) => schema,
            Err(e) => {
                diags.push(Diagnostic::error(e.to_string(), resolution_span(decl, &e)));
                continue;
            }
        };
        for (attribute, span) in &decl.tables {
            let table = decl
                .def
                .eval_tables
                .iter()
                .find(|t| t.attribute == *attribute);
            let domain = schema.attribute(attribute).map(|a| &a.domain);
            if let (Some(table), Some(domain)) = (table, domain) {
                if let Err(msg) = table.check(domain) {
                    diags.push(Diagnostic::error(msg, span.clone()));
                }
            }
        }
    }
    if has_errors(&diags) {
        return Err(diags);
    }

    for decl in &doc.instances {
        match lower_instance(&work, decl) {
            Ok(inst) => {
                if work.instances.contains_key(&inst.id) {
                    diags.push(Diagnostic::error(
                        format!("instance `{}` is declared twice", inst.id),
                        decl.id_span.clone(),
                    ));
                } else {
                    work.instances.insert(inst.id.clone(), inst);
                }
            }
            Err(mut errs) => diags.append(&mut errs),
        }
    }
    if has_errors(&diags) {
        return Err(diags);
    }
    *kb = work;
    Ok(diags)
}

fn lower_instance<S: Scalar>(
    kb: &KnowledgeBase<S>,
    decl: &InstanceDecl<S>,
) -> Result<ObjectInstance<S>, Vec<Diagnostic>> {
    if !kb.types.contains_key(&decl.type_name) {
        return Err(vec![Diagnostic::error(
            format!("unknown type `{}`", decl.type_name),
            decl.type_span.clone(),
        )]);
    }
    let mut inst = ObjectInstance::materialize(kb, decl.id.clone(), &decl.type_name)
        .map_err(|e| vec![Diagnostic::error(e.to_string(), decl.type_span.clone())])?;
    let mut diags = Vec::new();
    let mut seen = BTreeSet::new();
    for binding in &decl.bindings {
        let err = |msg: String| Diagnostic::error(msg, binding.span.clone());
        if binding.part_only {
            let path = match binding.target.parse::<NodePath>() {
                Ok(p) => p,
                Err(e) => {
                    diags.push(err(e.to_string()));
                    continue;
                }
            };
            if inst.ensure_node(kb, &path).is_err() {
                diags.push(err(format!("`{}` has no part `{path}`", decl.type_name)));
            }
            continue;
        }
        let qname = match binding.target.parse::<QualifiedName>() {
            Ok(q) => q,
            Err(e) => {
                diags.push(err(e.to_string()));
                continue;
            }
        };
        let schema = match inst.ensure_node(kb, &qname.path) {
            Ok(schema) => schema,
            Err(_) => {
                diags.push(err(format!(
                    "`{}` has no part `{}`",
                    decl.type_name, qname.path
                )));
                continue;
            }
        };
        let Some(def) = schema.attribute(&qname.attribute) else {
            diags.push(err(format!(
                "`{}` has no attribute `{}`",
                schema.type_name, qname.attribute
            )));
            continue;
        };
        if !seen.insert(qname.to_string()) {
            diags.push(err(format!("`{qname}` is bound twice")));
            continue;
        }
        let mut ok = true;
        for (value, span) in &binding.values {
            if !def.domain.contains(value) {
                ok = false;
                diags.push(Diagnostic::error(
                    format!("domain violation: `{value}` is outside the domain of `{qname}`"),
                    span.clone(),
                ));
            }
        }
        if !def.cardinality.admits(binding.values.len()) {
            ok = false;
            diags.push(err(format!(
                "cardinality violation: `{qname}` has {} value(s), expected {}",
                binding.values.len(),
                def.cardinality
            )));
        }
        if ok {
            let node = inst
                .root
                .node_at_mut(&qname.path)
                .expect("node ensured above");
            node.attributes.insert(
                qname.attribute.clone(),
                binding.values.iter().map(|(v, _)| v.clone()).collect(),
            );
            sort_attributes(node, &schema);
        }
    }
    if has_errors(&diags) {
        return Err(diags);
    }
    match validate_instance(kb, &inst) {
        Ok(report) if report.is_empty() => Ok(inst),
        Ok(report) => Err(report
            .violations
            .iter()
            .map(|v| {
                Diagnostic::error(format!("instance `{}`: {v}", decl.id), decl.id_span.clone())
            })
            .collect()),
        Err(e) => Err(vec![Diagnostic::error(e.to_string(), decl.id_span.clone())]),
    }
}

pub fn lower_observation<S: Scalar>(
    kb: &KnowledgeBase<S>,
    doc: Document<S>,
    file: &str,
) -> Result<Observation<S>, Vec<Diagnostic>> {
    if let Some(decl) = doc.types.first() {
        return Err(vec![Diagnostic::error(
            "an observation holds a single instance and no types",
            decl.name_span.clone(),
        )]);
    }
    let decl = match doc.instances.as_slice() {
        [one] => one,
        [] => {
            return Err(vec![Diagnostic::error(
                "expected an `instance ... of ... { ... }` block",
                SourceSpan {
                    file: file.to_string(),
                    line: 1,
                    column: 1,
                    length: 0,
                },
            )])
        }
        [_, second, ..] => {
            return Err(vec![Diagnostic::error(
                "an observation holds a single instance",
                second.id_span.clone(),
            )])
        }
    };
    let instance = lower_instance(kb, decl)?;
    let mut unobserved = Vec::new();
    for (path, node) in instance.root.walk() {
        let schema = node_schema(kb, &instance, &path)
            .map_err(|e| vec![Diagnostic::error(e.to_string(), decl.id_span.clone())])?;
        for attr in &schema.attributes {
            if node.attributes.get(&attr.name).is_none_or(Vec::is_empty) {
                unobserved.push(QualifiedName::new(path.clone(), attr.name.clone()));
            }
        }
    }
    let warnings = unobserved
        .iter()
        .map(|q| Diagnostic::warning(format!("`{q}` is not observed"), decl.id_span.clone()))
        .collect();
    Ok(Observation {
        instance,
        unobserved,
        warnings,
    })
}
