//! Internal level: instance trees of sub-objects, ascending inheritance of
//! attributes, zoom and constraint validation.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;

use crate::dynamics::TimeFunction;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{is_subtype, resolve_effective_schema, EffectiveSchema, KnowledgeBase, Value};

/// Path from a node to one of its descendants: slot segments such as
/// `Fleur`, `Petale[2]`. The empty path designates the node itself.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePath(pub Vec<String>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, segment: impl Into<String>) -> Self {
        let mut segments = self.0.clone();
        segments.push(segment.into());
        NodePath(segments)
    }

    pub fn join(&self, other: &NodePath) -> Self {
        let mut segments = self.0.clone();
        segments.extend(other.0.iter().cloned());
        NodePath(segments)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("."))
    }
}

impl FromStr for NodePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Ok(NodePath::root());
        }
        let segments: Vec<String> = s.split('.').map(str::to_string).collect();
        if segments.iter().any(|seg| parse_segment(seg).is_none()) {
            return Err(Error::BadPath(s.to_string()));
        }
        Ok(NodePath(segments))
    }
}

/// Splits `Slot[3]` into `("Slot", Some(3))`.
pub fn parse_segment(segment: &str) -> Option<(&str, Option<u32>)> {
    let (name, index) = match segment.strip_suffix(']') {
        Some(rest) => {
            let (name, idx) = rest.split_once('[')?;
            (name, Some(idx.parse::<u32>().ok().filter(|i| *i > 0)?))
        }
        None => (segment, None),
    };
    if name.is_empty() || name.contains(['[', ']']) {
        return None;
    }
    Some((name, index))
}

/// An attribute addressed through the sub-object tree, e.g. `Fleur.couleur`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QualifiedName {
    pub path: NodePath,
    pub attribute: String,
}

impl QualifiedName {
    pub fn new(path: NodePath, attribute: impl Into<String>) -> Self {
        QualifiedName {
            path,
            attribute: attribute.into(),
        }
    }

    pub fn bare(attribute: impl Into<String>) -> Self {
        Self::new(NodePath::root(), attribute)
    }

    /// Same name seen from `prefix`'s parent: `prefix.self`.
    pub fn prefixed(&self, prefix: &NodePath) -> Self {
        QualifiedName::new(prefix.join(&self.path), self.attribute.clone())
    }
}

impl fmt::Display for QualifiedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_root() {
            f.write_str(&self.attribute)
        } else {
            write!(f, "{}.{}", self.path, self.attribute)
        }
    }
}

impl FromStr for QualifiedName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (path, attribute) = match s.rsplit_once('.') {
            Some((path, attr)) => (path.parse::<NodePath>()?, attr),
            None => (NodePath::root(), s),
        };
        if attribute.is_empty() || attribute.contains(['[', ']']) {
            return Err(Error::BadPath(s.to_string()));
        }
        Ok(QualifiedName::new(path, attribute))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubObjectNode<S> {
    /// Empty for the level-0 node.
    pub slot_name: String,
    /// Position within a multi-valued slot, starting at 1.
    pub index: Option<u32>,
    pub type_name: String,
    pub level: u32,
    /// Values of the attributes that are set; an absent key is unset.
    pub attributes: IndexMap<String, Vec<Value<S>>>,
    pub structure_fn: TimeFunction<S>,
    pub explanation: Option<String>,
    pub children: Vec<SubObjectNode<S>>,
}

impl<S: Scalar> SubObjectNode<S> {
    pub fn segment(&self) -> String {
        match self.index {
            Some(i) => format!("{}[{}]", self.slot_name, i),
            None => self.slot_name.clone(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn child(&self, segment: &str) -> Option<&SubObjectNode<S>> {
        self.children.iter().find(|c| c.segment() == segment)
    }

    pub fn node_at(&self, path: &NodePath) -> Option<&SubObjectNode<S>> {
        path.0.iter().try_fold(self, |node, seg| node.child(seg))
    }

    pub fn node_at_mut(&mut self, path: &NodePath) -> Option<&mut SubObjectNode<S>> {
        let mut node = self;
        for seg in &path.0 {
            node = node.children.iter_mut().find(|c| c.segment() == *seg)?;
        }
        Some(node)
    }

    /// Number of nodes in this subtree, itself included.
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node_count()).sum::<usize>()
    }

    /// Pre-order traversal yielding each node with its path relative to
    /// `self`.
    pub fn walk(&self) -> Vec<(NodePath, &SubObjectNode<S>)> {
        let mut out = Vec::new();
        self.walk_into(NodePath::root(), &mut out);
        out
    }

    fn walk_into<'a>(&'a self, path: NodePath, out: &mut Vec<(NodePath, &'a SubObjectNode<S>)>) {
        let children_paths: Vec<NodePath> = self
            .children
            .iter()
            .map(|c| path.child(c.segment()))
            .collect();
        out.push((path, self));
        for (child, p) in self.children.iter().zip(children_paths) {
            child.walk_into(p, out);
        }
    }

    fn shift_levels(&mut self, up: bool, by: u32) {
        self.level = if up { self.level + by } else { self.level - by };
        for c in &mut self.children {
            c.shift_levels(up, by);
        }
    }
}

/// A level-0 object: the working unit whose tree of sub-objects conforms to
/// its type.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectInstance<S> {
    pub id: String,
    pub type_name: String,
    pub root: SubObjectNode<S>,
}

impl<S: Scalar> ObjectInstance<S> {
    /// Creates an instance carrying every mandatory sub-object of its type
    /// and no attribute values.
    pub fn materialize(
        kb: &KnowledgeBase<S>,
        id: impl Into<String>,
        type_name: &str,
    ) -> Result<Self> {
        let schema = resolve_effective_schema(kb, type_name)?;
        let mut root = empty_node(
            &schema,
            String::new(),
            None,
            0,
            TimeFunction::Constant(S::hundred()),
        );
        fill_required(&mut root, &schema);
        Ok(ObjectInstance {
            id: id.into(),
            type_name: type_name.to_string(),
            root,
        })
    }

    pub fn node(&self, path: &NodePath) -> Result<&SubObjectNode<S>> {
        self.root
            .node_at(path)
            .ok_or_else(|| Error::BadPath(path.to_string()))
    }

    /// Makes sure the node at `path` exists, creating it and any missing
    /// siblings of lower index along the way. Returns the node's schema.
    pub fn ensure_node(
        &mut self,
        kb: &KnowledgeBase<S>,
        path: &NodePath,
    ) -> Result<EffectiveSchema<S>> {
        let mut schema = resolve_effective_schema(kb, &self.type_name)?;
        let mut node = &mut self.root;
        for seg in &path.0 {
            let (slot_name, index) =
                parse_segment(seg).ok_or_else(|| Error::BadPath(path.to_string()))?;
            let part = schema
                .part(slot_name)
                .ok_or_else(|| Error::BadPath(path.to_string()))?
                .clone();
            let multi = part.slot.cardinality.is_multi();
            let wanted = match (multi, index) {
                (true, Some(i)) => i,
                (false, None) => 1,
                _ => return Err(Error::BadPath(path.to_string())),
            };
            if part.slot.cardinality.max.is_some_and(|m| wanted > m) {
                return Err(Error::BadPath(path.to_string()));
            }
            let existing = node
                .children
                .iter()
                .filter(|c| c.slot_name == slot_name)
                .count() as u32;
            if existing < wanted {
                let insert_at = slot_insert_position(node, &schema, slot_name);
                for (offset, i) in (existing + 1..=wanted).enumerate() {
                    let mut child = empty_node(
                        &part.schema,
                        slot_name.to_string(),
                        multi.then_some(i),
                        node.level + 1,
                        part.slot.reliability.clone(),
                    );
                    fill_required(&mut child, &part.schema);
                    node.children.insert(insert_at + offset, child);
                }
            }
            let seg_owned = seg.clone();
            node = node
                .children
                .iter_mut()
                .find(|c| c.segment() == seg_owned)
                .expect("node created above");
            let child_schema = part.schema_for(kb, &node.type_name)?.into_owned();
            schema = child_schema;
        }
        Ok(schema)
    }
}

fn empty_node<S: Scalar>(
    schema: &EffectiveSchema<S>,
    slot_name: String,
    index: Option<u32>,
    level: u32,
    structure_fn: TimeFunction<S>,
) -> SubObjectNode<S> {
    SubObjectNode {
        slot_name,
        index,
        type_name: schema.type_name.clone(),
        level,
        attributes: IndexMap::new(),
        structure_fn,
        explanation: schema.explanation.clone(),
        children: Vec::new(),
    }
}

fn fill_required<S: Scalar>(node: &mut SubObjectNode<S>, schema: &EffectiveSchema<S>) {
    for part in &schema.parts {
        let multi = part.slot.cardinality.is_multi();
        for i in 1..=part.slot.cardinality.min {
            let mut child = empty_node(
                &part.schema,
                part.slot.name.clone(),
                multi.then_some(i),
                node.level + 1,
                part.slot.reliability.clone(),
            );
            fill_required(&mut child, &part.schema);
            node.children.push(child);
        }
    }
}

/// Children are kept grouped by slot in declaration order, then by index.
fn slot_insert_position<S: Scalar>(
    node: &SubObjectNode<S>,
    schema: &EffectiveSchema<S>,
    slot: &str,
) -> usize {
    let order = |name: &str| {
        schema
            .parts
            .iter()
            .position(|p| p.slot.name == name)
            .unwrap_or(usize::MAX)
    };
    let rank = order(slot);
    node.children
        .iter()
        .position(|c| order(&c.slot_name) > rank)
        .unwrap_or(node.children.len())
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    QualifyingUnset {
        attribute: String,
    },
    Cardinality {
        attribute: String,
        count: usize,
        expected: String,
    },
    Domain {
        attribute: String,
        value: String,
    },
    UnknownAttribute {
        attribute: String,
    },
    UnknownSlot {
        slot: String,
    },
    PartCardinality {
        slot: String,
        count: usize,
        expected: String,
    },
    SlotTypeMismatch {
        slot: String,
        expected: String,
        found: String,
    },
    LevelOverflow {
        level: u32,
        levels: u32,
    },
    Partition {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub path: NodePath,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = |attr: &str| QualifiedName::new(self.path.clone(), attr).to_string();
        match &self.kind {
            ViolationKind::QualifyingUnset { attribute } => {
                write!(f, "qualifying attribute unset: {}", at(attribute))
            }
            ViolationKind::Cardinality {
                attribute,
                count,
                expected,
            } => {
                write!(
                    f,
                    "cardinality violation: {} has {count} value(s), expected {expected}",
                    at(attribute)
                )
            }
            ViolationKind::Domain { attribute, value } => {
                write!(f, "domain violation: {} = {value}", at(attribute))
            }
            ViolationKind::UnknownAttribute { attribute } => {
                write!(f, "unknown attribute {}", at(attribute))
            }
            ViolationKind::UnknownSlot { slot } => {
                write!(f, "unknown part `{slot}` under `{}`", self.path)
            }
            ViolationKind::PartCardinality {
                slot,
                count,
                expected,
            } => {
                write!(
                    f,
                    "part `{slot}` under `{}` occurs {count} time(s), expected {expected}",
                    self.path
                )
            }
            ViolationKind::SlotTypeMismatch {
                slot,
                expected,
                found,
            } => {
                write!(
                    f,
                    "part `{slot}` must be of type `{expected}`, found `{found}`"
                )
            }
            ViolationKind::LevelOverflow { level, levels } => {
                write!(
                    f,
                    "node `{}` sits at level {level}, deeper than levels {levels}",
                    self.path
                )
            }
            ViolationKind::Partition { reason } => {
                write!(f, "tree structure broken at `{}`: {reason}", self.path)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&lines.join("; "))
    }
}

/// Checks an instance against its type. An empty report means conforming.
pub fn validate_instance<S: Scalar>(
    kb: &KnowledgeBase<S>,
    inst: &ObjectInstance<S>,
) -> Result<ValidationReport> {
    let schema = resolve_effective_schema(kb, &inst.type_name)?;
    let mut report = ValidationReport::default();
    let root = &inst.root;
    if root.type_name != inst.type_name {
        report.violations.push(Violation {
            path: NodePath::root(),
            kind: ViolationKind::SlotTypeMismatch {
                slot: String::new(),
                expected: inst.type_name.clone(),
                found: root.type_name.clone(),
            },
        });
    }
    if root.level != 0 || !root.slot_name.is_empty() || root.index.is_some() {
        report.violations.push(Violation {
            path: NodePath::root(),
            kind: ViolationKind::Partition {
                reason: "the level-0 node must sit at level 0 outside any slot".into(),
            },
        });
    }
    validate_node(
        kb,
        root,
        &schema,
        &NodePath::root(),
        0,
        schema.levels,
        &mut report,
    )?;
    Ok(report)
}

fn validate_node<S: Scalar>(
    kb: &KnowledgeBase<S>,
    node: &SubObjectNode<S>,
    schema: &EffectiveSchema<S>,
    path: &NodePath,
    expected_level: u32,
    levels: u32,
    report: &mut ValidationReport,
) -> Result<()> {
    let mut push = |kind| {
        report.violations.push(Violation {
            path: path.clone(),
            kind,
        })
    };
    if node.level != expected_level {
        push(ViolationKind::Partition {
            reason: format!("level {} where {expected_level} was expected", node.level),
        });
    }
    if node.level > levels {
        push(ViolationKind::LevelOverflow {
            level: node.level,
            levels,
        });
    }
    for (name, values) in &node.attributes {
        let Some(def) = schema.attribute(name) else {
            push(ViolationKind::UnknownAttribute {
                attribute: name.clone(),
            });
            continue;
        };
        if values.is_empty() {
            continue;
        }
        if !def.cardinality.admits(values.len()) {
            push(ViolationKind::Cardinality {
                attribute: name.clone(),
                count: values.len(),
                expected: def.cardinality.to_string(),
            });
        }
        for v in values {
            if !def.domain.contains(v) {
                push(ViolationKind::Domain {
                    attribute: name.clone(),
                    value: v.to_string(),
                });
            }
        }
    }
    for def in schema.attributes.iter().filter(|a| a.qualifying) {
        let set = node
            .attributes
            .get(&def.name)
            .is_some_and(|v| !v.is_empty());
        if !set {
            push(ViolationKind::QualifyingUnset {
                attribute: def.name.clone(),
            });
        }
    }

    let mut seen = std::collections::BTreeSet::new();
    for child in &node.children {
        if !seen.insert(child.segment()) {
            push(ViolationKind::Partition {
                reason: format!("two sub-objects share the segment `{}`", child.segment()),
            });
        }
        if schema.part(&child.slot_name).is_none() {
            push(ViolationKind::UnknownSlot {
                slot: child.slot_name.clone(),
            });
        }
    }
    for part in &schema.parts {
        let fills: Vec<&SubObjectNode<S>> = node
            .children
            .iter()
            .filter(|c| c.slot_name == part.slot.name)
            .collect();
        if !part.slot.cardinality.admits(fills.len()) {
            push(ViolationKind::PartCardinality {
                slot: part.slot.name.clone(),
                count: fills.len(),
                expected: part.slot.cardinality.to_string(),
            });
        }
        let multi = part.slot.cardinality.is_multi();
        for (i, child) in fills.iter().enumerate() {
            let expected_index = multi.then_some(i as u32 + 1);
            if child.index != expected_index {
                push(ViolationKind::Partition {
                    reason: format!(
                        "part `{}` is numbered {:?}, expected {:?}",
                        child.segment(),
                        child.index,
                        expected_index
                    ),
                });
            }
        }
    }

    for child in &node.children {
        let Some(part) = schema.part(&child.slot_name) else {
            continue;
        };
        let child_path = path.child(child.segment());
        let child_schema = match part.schema_for(kb, &child.type_name) {
            Ok(s) => s,
            Err(Error::TypeMismatch { expected, found }) => {
                report.violations.push(Violation {
                    path: child_path,
                    kind: ViolationKind::SlotTypeMismatch {
                        slot: child.slot_name.clone(),
                        expected,
                        found,
                    },
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        validate_node(
            kb,
            child,
            &child_schema,
            &child_path,
            expected_level + 1,
            levels,
            report,
        )?;
    }
    Ok(())
}

/// Attributes of every leaf under `at`, keyed by their path relative to `at`.
/// The values are borrowed from the tree, so later updates are seen by the
/// next call without any refresh.
pub fn inherited_attributes<'a, S: Scalar>(
    inst: &'a ObjectInstance<S>,
    at: &NodePath,
) -> Result<IndexMap<QualifiedName, &'a [Value<S>]>> {
    let node = inst.node(at)?;
    Ok(collect_attributes(node))
}

pub(crate) fn collect_attributes<S: Scalar>(
    node: &SubObjectNode<S>,
) -> IndexMap<QualifiedName, &[Value<S>]> {
    let mut out = IndexMap::new();
    for (path, n) in node.walk() {
        for (name, values) in &n.attributes {
            if !values.is_empty() {
                out.insert(
                    QualifiedName::new(path.clone(), name.clone()),
                    values.as_slice(),
                );
            }
        }
    }
    out
}

/// Finds an attribute by qualified name, or by bare name when exactly one
/// leaf has it set.
pub fn lookup_attribute<'a, S: Scalar>(
    inst: &'a ObjectInstance<S>,
    name: &str,
) -> Result<&'a [Value<S>]> {
    let qname: QualifiedName = name.parse()?;
    if !qname.path.is_root() {
        let node = inst
            .root
            .node_at(&qname.path)
            .ok_or_else(|| Error::NotFound(name.to_string()))?;
        return node
            .attributes
            .get(&qname.attribute)
            .filter(|v| !v.is_empty())
            .map(Vec::as_slice)
            .ok_or_else(|| Error::NotFound(name.to_string()));
    }
    let matches: Vec<(QualifiedName, &[Value<S>])> = collect_attributes(&inst.root)
        .into_iter()
        .filter(|(q, _)| q.attribute == qname.attribute)
        .collect();
    match matches.as_slice() {
        [] => Err(Error::NotFound(name.to_string())),
        [(_, values)] => Ok(values),
        many => Err(Error::Ambiguous {
            name: name.to_string(),
            candidates: many.iter().map(|(q, _)| q.to_string()).collect(),
        }),
    }
}

/// Re-roots the instance on the node at `path`, renumbering levels so that
/// node becomes level 0. The original is left untouched.
pub fn zoom<S: Scalar>(inst: &ObjectInstance<S>, path: &NodePath) -> Result<ObjectInstance<S>> {
    if path.is_root() {
        return Ok(inst.clone());
    }
    let mut root = inst.node(path)?.clone();
    let depth = root.level;
    root.shift_levels(false, depth);
    root.slot_name.clear();
    root.index = None;
    root.structure_fn = TimeFunction::Constant(S::hundred());
    Ok(ObjectInstance {
        id: format!("{}.{}", inst.id, path),
        type_name: root.type_name.clone(),
        root,
    })
}

/// Builds the composed object `a o b` as an instance of `composed_type`,
/// whose two slots must accept the types of `a` and `b`.
pub fn compose_instances<S: Scalar>(
    kb: &KnowledgeBase<S>,
    a: &ObjectInstance<S>,
    b: &ObjectInstance<S>,
    composed_type: &str,
    new_id: &str,
) -> Result<ObjectInstance<S>> {
    let schema = resolve_effective_schema(kb, composed_type)?;
    if kb.instances.contains_key(new_id) {
        return Err(Error::DuplicateId(new_id.to_string()));
    }
    let [left, right] = schema.parts.as_slice() else {
        return Err(Error::TypeMismatch {
            expected: format!("a composition of `{}` and `{}`", a.type_name, b.type_name),
            found: composed_type.to_string(),
        });
    };
    for (part, inst) in [(left, a), (right, b)] {
        if !is_subtype(kb, &inst.type_name, &part.slot.part_type)? {
            return Err(Error::TypeMismatch {
                expected: part.slot.part_type.clone(),
                found: inst.type_name.clone(),
            });
        }
    }
    let attach = |part: &crate::types::EffectivePart<S>, inst: &ObjectInstance<S>| {
        let mut node = inst.root.clone();
        node.shift_levels(true, 1);
        node.slot_name = part.slot.name.clone();
        node.index = None;
        node.structure_fn = part.slot.reliability.clone();
        node
    };
    let mut root = empty_node(
        &schema,
        String::new(),
        None,
        0,
        TimeFunction::Constant(S::hundred()),
    );
    root.children = vec![attach(left, a), attach(right, b)];
    let composed = ObjectInstance {
        id: new_id.to_string(),
        type_name: composed_type.to_string(),
        root,
    };
    let report = validate_instance(kb, &composed)?;
    if !report.is_empty() {
        return Err(Error::InvalidInstance {
            id: new_id.to_string(),
            report,
        });
    }
    Ok(composed)
}

/// Schema of the node at `path`, following the instance's actual node types.
pub fn node_schema<S: Scalar>(
    kb: &KnowledgeBase<S>,
    inst: &ObjectInstance<S>,
    path: &NodePath,
) -> Result<EffectiveSchema<S>> {
    let mut schema = resolve_effective_schema(kb, &inst.type_name)?;
    let mut node = &inst.root;
    for seg in &path.0 {
        let child = node
            .child(seg)
            .ok_or_else(|| Error::BadPath(path.to_string()))?;
        let part = schema
            .part(&child.slot_name)
            .ok_or_else(|| Error::BadPath(path.to_string()))?;
        schema = part.schema_for(kb, &child.type_name)?.into_owned();
        node = child;
    }
    Ok(schema)
}

/// Replaces the values of one attribute, all or nothing: the instance is left
/// unchanged unless every value is in the domain and the count respects the
/// cardinality. An empty list unsets an optional attribute.
pub fn apply_user_update<S: Scalar>(
    kb: &KnowledgeBase<S>,
    inst: &mut ObjectInstance<S>,
    target: &QualifiedName,
    new_values: Vec<Value<S>>,
) -> Result<()> {
    let not_found = || Error::NotFound(target.to_string());
    inst.root.node_at(&target.path).ok_or_else(not_found)?;
    let schema = node_schema(kb, inst, &target.path)?;
    let def = schema.attribute(&target.attribute).ok_or_else(not_found)?;
    for v in &new_values {
        if !def.domain.contains(v) {
            return Err(Error::DomainViolation {
                attribute: target.to_string(),
                value: v.to_string(),
            });
        }
    }
    let unset_allowed = new_values.is_empty() && !def.qualifying;
    if !unset_allowed && !def.cardinality.admits(new_values.len()) {
        return Err(Error::CardinalityViolation {
            attribute: target.to_string(),
            count: new_values.len(),
            expected: def.cardinality.to_string(),
        });
    }
    let node = inst.root.node_at_mut(&target.path).ok_or_else(not_found)?;
    if new_values.is_empty() {
        node.attributes.shift_remove(&target.attribute);
    } else {
        node.attributes.insert(target.attribute.clone(), new_values);
        // declaration order keeps exports canonical
        sort_attributes(node, &schema);
    }
    Ok(())
}

pub(crate) fn sort_attributes<S: Scalar>(node: &mut SubObjectNode<S>, schema: &EffectiveSchema<S>) {
    let order = |name: &str| {
        schema
            .attributes
            .iter()
            .position(|a| a.name == name)
            .unwrap_or(usize::MAX)
    };
    node.attributes
        .sort_by(|a, _, b, _| order(a).cmp(&order(b)));
}
