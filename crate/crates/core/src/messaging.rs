//! Messages sent to objects and metafunctions over whole classes.
//!
//! A type binds message names to entries of a closed catalog of internal
//! operations ([`Action`]). Handlers are inherited down the is-a chain; a
//! message with no handler in the target's chain is answered
//! `not-understood` and has no effect.

use std::fmt;

use indexmap::IndexMap;

use crate::dynamics::{reference_at, snapshot, Snapshot};
use crate::error::{Error, Result};
use crate::evaluation::{eval_global, rank_candidates, MatchReport};
use crate::graph::{
    apply_user_update, inherited_attributes, lookup_attribute, node_schema, NodePath,
    ObjectInstance, QualifiedName,
};
use crate::scalar::Scalar;
use crate::types::{class_of, format_values, resolve_effective_schema, KnowledgeBase, Value};

/// Catalog of operations a message can trigger.
#[derive(Debug, Clone, PartialEq)]
pub enum Action<S> {
    /// Values of an attribute (bound name, or the first message argument).
    Lookup(Option<String>),
    /// Every inherited attribute of the object.
    Attributes,
    /// Parts present at the message time.
    Snapshot,
    /// Reliability of one part at the message time.
    Reliability(Option<String>),
    /// Reference value of an attribute at the message time.
    Reference(Option<String>),
    /// Global evaluation of the target against the instance named by the
    /// first argument.
    Evaluate,
    /// Replaces an attribute's values with the message arguments.
    Update(Option<String>),
    /// Maps an attribute's first value through a table: numbers pick the row
    /// with the greatest threshold not above them, symbols match exactly.
    Table {
        attribute: String,
        rows: Vec<(Value<S>, Value<S>)>,
    },
}

impl<S: Scalar> Action<S> {
    pub fn name(&self) -> &'static str {
        match self {
            Action::Lookup(_) => "lookup",
            Action::Attributes => "attrs",
            Action::Snapshot => "snapshot",
            Action::Reliability(_) => "reliability",
            Action::Reference(_) => "reference",
            Action::Evaluate => "eval",
            Action::Update(_) => "update",
            Action::Table { .. } => "table",
        }
    }

    pub fn catalog() -> &'static [&'static str] {
        &[
            "lookup",
            "attrs",
            "snapshot",
            "reliability",
            "reference",
            "eval",
            "update",
            "table",
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Handler<S> {
    pub message: String,
    pub action: Action<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Instance(String),
    Type(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Message<S> {
    pub name: String,
    pub target: Target,
    pub args: Vec<Value<S>>,
    pub t: Option<S>,
}

impl<S: Scalar> Message<S> {
    pub fn new(name: impl Into<String>, target: Target) -> Self {
        Message {
            name: name.into(),
            target,
            args: Vec::new(),
            t: None,
        }
    }

    pub fn with_args(mut self, args: Vec<Value<S>>) -> Self {
        self.args = args;
        self
    }

    pub fn at(mut self, t: S) -> Self {
        self.t = Some(t);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload<S> {
    Values(Vec<Value<S>>),
    Attributes(IndexMap<QualifiedName, Vec<Value<S>>>),
    Snapshot(Snapshot<S>),
    Number(S),
    Report(Box<MatchReport<S>>),
    /// No table row applied.
    Nothing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Understood,
    NotUnderstood,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reply<S> {
    pub origin: String,
    pub status: Status,
    pub payload: Option<Payload<S>>,
}

impl<S: Scalar> fmt::Display for Reply<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.status, &self.payload) {
            (Status::NotUnderstood, _) | (_, None) => writeln!(f, "not-understood"),
            (Status::Understood, Some(payload)) => write!(f, "{payload}"),
        }
    }
}

impl<S: Scalar> fmt::Display for Payload<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Values(values) => writeln!(f, "{}", format_values(values)),
            Payload::Attributes(attrs) => {
                for (name, values) in attrs {
                    writeln!(f, "{name} = {}", format_values(values))?;
                }
                Ok(())
            }
            Payload::Snapshot(snap) => {
                for node in &snap.nodes {
                    let path = if node.path.is_root() {
                        snap.instance_id.clone()
                    } else {
                        node.path.to_string()
                    };
                    writeln!(f, "{path} {}", node.reliability.to_decimal())?;
                }
                Ok(())
            }
            Payload::Number(n) => writeln!(f, "{}", n.to_decimal()),
            Payload::Report(report) => write!(
                f,
                "{}",
                crate::render::match_report_text(std::slice::from_ref(report))
            ),
            Payload::Nothing => writeln!(f, "none"),
        }
    }
}

/// Delivers `msg` to the instance it targets.
pub fn send<S: Scalar>(kb: &mut KnowledgeBase<S>, msg: &Message<S>) -> Result<Reply<S>> {
    let id = match &msg.target {
        Target::Instance(id) => id.clone(),
        Target::Type(name) => return Err(Error::UnknownInstance(name.clone())),
    };
    deliver(kb, &id, msg)
}

fn deliver<S: Scalar>(kb: &mut KnowledgeBase<S>, id: &str, msg: &Message<S>) -> Result<Reply<S>> {
    let type_name = kb.instance(id)?.type_name.clone();
    let schema = resolve_effective_schema(kb, &type_name)?;
    let Some(handler) = schema.handler(&msg.name) else {
        return Ok(Reply {
            origin: id.to_string(),
            status: Status::NotUnderstood,
            payload: None,
        });
    };
    let payload = run(kb, id, &handler.action, msg)?;
    Ok(Reply {
        origin: id.to_string(),
        status: Status::Understood,
        payload: Some(payload),
    })
}

fn name_arg<S: Scalar>(bound: &Option<String>, msg: &Message<S>) -> Result<String> {
    if let Some(name) = bound {
        return Ok(name.clone());
    }
    match msg.args.first() {
        Some(Value::Symbol(s)) => Ok(s.clone()),
        _ => Err(Error::NotFound(format!(
            "message `{}` needs a name argument",
            msg.name
        ))),
    }
}

fn run<S: Scalar>(
    kb: &mut KnowledgeBase<S>,
    id: &str,
    action: &Action<S>,
    msg: &Message<S>,
) -> Result<Payload<S>> {
    let t = msg.t.clone().unwrap_or_else(S::zero);
    match action {
        Action::Lookup(bound) => {
            let inst = kb.instance(id)?;
            Ok(Payload::Values(
                lookup_attribute(inst, &name_arg(bound, msg)?)?.to_vec(),
            ))
        }
        Action::Attributes => {
            let inst = kb.instance(id)?;
            let attrs = inherited_attributes(inst, &NodePath::root())?
                .into_iter()
                .map(|(k, v)| (k, v.to_vec()))
                .collect();
            Ok(Payload::Attributes(attrs))
        }
        Action::Snapshot => Ok(Payload::Snapshot(snapshot(kb, kb.instance(id)?, &t)?)),
        Action::Reliability(bound) => {
            let inst = kb.instance(id)?;
            let path: NodePath = name_arg(bound, msg)?.parse()?;
            Ok(Payload::Number(
                inst.node(&path)?.structure_fn.reliability(&t),
            ))
        }
        Action::Reference(bound) => {
            let inst = kb.instance(id)?;
            let name: QualifiedName = name_arg(bound, msg)?.parse()?;
            let schema = node_schema(kb, inst, &name.path)?;
            let attr = schema
                .attribute(&name.attribute)
                .ok_or_else(|| Error::NotFound(name.to_string()))?;
            Ok(Payload::Number(reference_at(attr, &t)?))
        }
        Action::Evaluate => {
            let other = match msg.args.first() {
                Some(Value::Symbol(s)) => s.clone(),
                _ => {
                    return Err(Error::NotFound(format!(
                        "message `{}` needs an instance argument",
                        msg.name
                    )))
                }
            };
            let mut report = eval_global(kb, kb.instance(id)?, kb.instance(&other)?, &t)?;
            report.rank = 1;
            Ok(Payload::Report(Box::new(report)))
        }
        Action::Update(bound) => {
            let (name, values) = match bound {
                Some(name) => (name.clone(), msg.args.clone()),
                None => (name_arg(bound, msg)?, msg.args[1..].to_vec()),
            };
            let target: QualifiedName = name.parse()?;
            let mut inst = kb.instance(id)?.clone();
            apply_user_update(kb, &mut inst, &target, values)?;
            let updated = lookup_attribute(&inst, &name)
                .map(<[_]>::to_vec)
                .unwrap_or_default();
            kb.instances.insert(id.to_string(), inst);
            Ok(Payload::Values(updated))
        }
        Action::Table { attribute, rows } => {
            let inst = kb.instance(id)?;
            let value = lookup_attribute(inst, attribute)?
                .first()
                .cloned()
                .ok_or_else(|| Error::NotFound(attribute.clone()))?;
            let hit = match &value {
                Value::Number(n) => rows
                    .iter()
                    .filter(|(k, _)| k.as_number().is_some_and(|k| k <= n))
                    .max_by(|(a, _), (b, _)| {
                        a.as_number()
                            .partial_cmp(&b.as_number())
                            .unwrap_or(std::cmp::Ordering::Equal)
                    }),
                Value::Symbol(_) => rows.iter().find(|(k, _)| *k == value),
            };
            Ok(match hit {
                Some((_, result)) => Payload::Values(vec![result.clone()]),
                None => Payload::Nothing,
            })
        }
    }
}

/// Sends `msg` to every member of `class_of(type_name)` in id order.
pub fn broadcast<S: Scalar>(
    kb: &mut KnowledgeBase<S>,
    type_name: &str,
    msg: &Message<S>,
) -> Result<Vec<Reply<S>>> {
    let members = class_of(kb, type_name)?;
    members.iter().map(|id| deliver(kb, id, msg)).collect()
}

/// Diagnosis metafunction: ranks every instance of `type_name` against the
/// observed object.
pub fn metafunction_diagnose<S: Scalar>(
    kb: &KnowledgeBase<S>,
    type_name: &str,
    observed: &ObjectInstance<S>,
    t: &S,
) -> Result<Vec<MatchReport<S>>> {
    rank_candidates(kb, type_name, observed, t)
}
