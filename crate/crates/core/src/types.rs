//! External level: type definitions, the is-a hierarchy, classes and type
//! composition.
//!
//! A [`TypeDef`] is what the knowledge-base author writes. Everything that
//! consumes types works on the flattened [`EffectiveSchema`] produced by
//! [`resolve_effective_schema`], which folds the supertype chain (top-down)
//! and recursively resolves every part slot.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::dynamics::TimeFunction;
use crate::error::{Error, Result};
use crate::evaluation::{EvalTable, GlobalEvalSpec};
use crate::graph::ObjectInstance;
use crate::messaging::Handler;
use crate::scalar::Scalar;

/// An attribute value: a symbol from an enumerated domain or a number.
#[derive(Debug, Clone, PartialEq)]
pub enum Value<S> {
    Symbol(String),
    Number(S),
}

impl<S: Scalar> Value<S> {
    pub fn as_number(&self) -> Option<&S> {
        match self {
            Value::Number(n) => Some(n),
            Value::Symbol(_) => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            Value::Symbol(s) => Some(s),
            Value::Number(_) => None,
        }
    }
}

impl<S: Scalar> fmt::Display for Value<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Symbol(s) => f.write_str(s),
            Value::Number(n) => f.write_str(&n.to_decimal()),
        }
    }
}

/// Renders a value list the way the DSL writes it: `a, b, c`.
pub fn format_values<S: Scalar>(values: &[Value<S>]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Allowed values of an attribute, either listed in extension or given as a
/// closed numeric interval.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain<S> {
    Enum(Vec<String>),
    Range { lo: S, hi: S, unit: Option<String> },
}

impl<S: Scalar> Domain<S> {
    pub fn contains(&self, value: &Value<S>) -> bool {
        match (self, value) {
            (Domain::Enum(allowed), Value::Symbol(s)) => allowed.iter().any(|a| a == s),
            (Domain::Range { lo, hi, .. }, Value::Number(n)) => lo <= n && n <= hi,
            _ => false,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Domain::Range { .. })
    }

    /// True when every value allowed by `self` is allowed by `other`.
    pub fn is_within(&self, other: &Domain<S>) -> bool {
        match (self, other) {
            (Domain::Enum(mine), Domain::Enum(theirs)) => mine.iter().all(|v| theirs.contains(v)),
            (
                Domain::Range { lo, hi, .. },
                Domain::Range {
                    lo: olo, hi: ohi, ..
                },
            ) => olo <= lo && hi <= ohi,
            _ => false,
        }
    }
}

/// `min..max` with `max = None` meaning unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cardinality {
    pub min: u32,
    pub max: Option<u32>,
}

impl Cardinality {
    pub const ONE: Cardinality = Cardinality {
        min: 1,
        max: Some(1),
    };

    pub fn new(min: u32, max: Option<u32>) -> Self {
        Cardinality { min, max }
    }

    pub fn admits(&self, count: usize) -> bool {
        count >= self.min as usize && self.max.is_none_or(|m| count <= m as usize)
    }

    pub fn is_within(&self, other: &Cardinality) -> bool {
        let max_ok = match (self.max, other.max) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a <= b,
        };
        self.min >= other.min && max_ok
    }

    /// Whether nodes filling this slot are told apart by an index.
    pub fn is_multi(&self) -> bool {
        self.max.is_none_or(|m| m > 1)
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.max {
            Some(max) => write!(f, "{}..{}", self.min, max),
            None => write!(f, "{}..*", self.min),
        }
    }
}

/// The theoretical value an attribute is compared against.
#[derive(Debug, Clone, PartialEq)]
pub enum Reference<S> {
    Constant(S),
    Function(TimeFunction<S>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributeDef<S> {
    pub name: String,
    pub domain: Domain<S>,
    pub cardinality: Cardinality,
    /// Qualifying attributes must be instantiated on every object of the type.
    pub qualifying: bool,
    pub reference: Option<Reference<S>>,
}

impl<S: Scalar> AttributeDef<S> {
    pub fn new(name: impl Into<String>, domain: Domain<S>, cardinality: Cardinality) -> Self {
        AttributeDef {
            name: name.into(),
            domain,
            cardinality,
            qualifying: false,
            reference: None,
        }
    }

    pub fn qualifying(mut self) -> Self {
        self.qualifying = true;
        self
    }

    pub fn with_reference(mut self, reference: Reference<S>) -> Self {
        self.reference = Some(reference);
        self
    }

    /// Checks the attribute-local invariants.
    pub fn check(&self, owner: &str) -> Result<()> {
        let invalid = |reason: String| Error::InvalidSchema {
            type_name: owner.to_string(),
            reason,
        };
        if let Some(max) = self.cardinality.max {
            if max < self.cardinality.min {
                return Err(invalid(format!(
                    "attribute `{}` has max < min in {}",
                    self.name, self.cardinality
                )));
            }
        }
        if self.qualifying && self.cardinality.min == 0 {
            return Err(invalid(format!(
                "qualifying attribute `{}` needs min > 0",
                self.name
            )));
        }
        match &self.domain {
            Domain::Enum(values) if values.is_empty() => {
                return Err(invalid(format!(
                    "attribute `{}` has an empty domain",
                    self.name
                )))
            }
            Domain::Range { lo, hi, .. } if lo > hi => {
                return Err(invalid(format!(
                    "attribute `{}` has an empty range",
                    self.name
                )))
            }
            _ => {}
        }
        match &self.reference {
            Some(_) if !self.domain.is_numeric() => Err(invalid(format!(
                "attribute `{}` has a reference but no numeric domain",
                self.name
            ))),
            Some(Reference::Constant(c)) if !self.domain.contains(&Value::Number(c.clone())) => {
                Err(invalid(format!(
                    "reference {} of `{}` lies outside its domain",
                    c.to_decimal(),
                    self.name
                )))
            }
            Some(Reference::Function(f)) => f.check(),
            _ => Ok(()),
        }
    }
}

/// A typed sub-object position. Attributes and parts declared inline extend
/// the part type's own schema for this slot only.
#[derive(Debug, Clone, PartialEq)]
pub struct PartSlot<S> {
    pub name: String,
    pub part_type: String,
    pub cardinality: Cardinality,
    /// Structure function: reliability (percent) of the membership at time t.
    pub reliability: TimeFunction<S>,
    pub attributes: Vec<AttributeDef<S>>,
    pub parts: Vec<PartSlot<S>>,
    pub explanation: Option<String>,
}

impl<S: Scalar> PartSlot<S> {
    pub fn new(name: impl Into<String>, part_type: impl Into<String>) -> Self {
        PartSlot {
            name: name.into(),
            part_type: part_type.into(),
            cardinality: Cardinality::ONE,
            reliability: TimeFunction::Constant(S::hundred()),
            attributes: Vec::new(),
            parts: Vec::new(),
            explanation: None,
        }
    }

    pub fn with_cardinality(mut self, cardinality: Cardinality) -> Self {
        self.cardinality = cardinality;
        self
    }

    pub fn with_reliability(mut self, reliability: TimeFunction<S>) -> Self {
        self.reliability = reliability;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeDef<S> {
    pub name: String,
    pub supertype: Option<String>,
    /// Number of internal levels below the level-0 object.
    pub levels: u32,
    pub attributes: Vec<AttributeDef<S>>,
    pub parts: Vec<PartSlot<S>>,
    pub eval_tables: Vec<EvalTable<S>>,
    pub global_eval: Option<GlobalEvalSpec<S>>,
    pub handlers: Vec<Handler<S>>,
    pub explanation: Option<String>,
}

impl<S: Scalar> TypeDef<S> {
    pub fn new(name: impl Into<String>, levels: u32) -> Self {
        TypeDef {
            name: name.into(),
            supertype: None,
            levels,
            attributes: Vec::new(),
            parts: Vec::new(),
            eval_tables: Vec::new(),
            global_eval: None,
            handlers: Vec::new(),
            explanation: None,
        }
    }

    pub fn isa(mut self, supertype: impl Into<String>) -> Self {
        self.supertype = Some(supertype.into());
        self
    }

    pub fn attr(mut self, attr: AttributeDef<S>) -> Self {
        self.attributes.push(attr);
        self
    }

    pub fn part(mut self, part: PartSlot<S>) -> Self {
        self.parts.push(part);
        self
    }

    pub fn qualifying_attrs(&self) -> impl Iterator<Item = &AttributeDef<S>> {
        self.attributes.iter().filter(|a| a.qualifying)
    }

    pub fn optional_attrs(&self) -> impl Iterator<Item = &AttributeDef<S>> {
        self.attributes.iter().filter(|a| !a.qualifying)
    }

    /// Structure functions keyed by slot name.
    pub fn structure_fns(&self) -> impl Iterator<Item = (&str, &TimeFunction<S>)> {
        self.parts.iter().map(|p| (p.name.as_str(), &p.reliability))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeBase<S> {
    pub types: BTreeMap<String, TypeDef<S>>,
    pub instances: BTreeMap<String, ObjectInstance<S>>,
    /// Unit of every time value in the base, e.g. `day` or `hour`.
    pub time_unit: Option<String>,
}

impl<S> Default for KnowledgeBase<S> {
    fn default() -> Self {
        KnowledgeBase {
            types: BTreeMap::new(),
            instances: BTreeMap::new(),
            time_unit: None,
        }
    }
}

impl<S: Scalar> KnowledgeBase<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn type_def(&self, name: &str) -> Result<&TypeDef<S>> {
        self.types
            .get(name)
            .ok_or_else(|| Error::UnknownType(name.to_string()))
    }

    pub fn instance(&self, id: &str) -> Result<&ObjectInstance<S>> {
        self.instances
            .get(id)
            .ok_or_else(|| Error::UnknownInstance(id.to_string()))
    }

    /// Registers a type without resolving it; see [`KnowledgeBase::add_type`].
    pub fn insert_type(&mut self, def: TypeDef<S>) -> Result<()> {
        if self.types.contains_key(&def.name) {
            return Err(Error::DuplicateTypeName(def.name));
        }
        self.types.insert(def.name.clone(), def);
        Ok(())
    }

    /// Registers a type and checks that its effective schema resolves.
    pub fn add_type(&mut self, def: TypeDef<S>) -> Result<()> {
        let name = def.name.clone();
        self.insert_type(def)?;
        if let Err(e) = resolve_effective_schema(self, &name) {
            self.types.remove(&name);
            return Err(e);
        }
        Ok(())
    }

    /// Registers an instance after validating it against its type.
    pub fn add_instance(&mut self, inst: ObjectInstance<S>) -> Result<()> {
        if self.instances.contains_key(&inst.id) {
            return Err(Error::DuplicateId(inst.id));
        }
        let report = crate::graph::validate_instance(self, &inst)?;
        if !report.is_empty() {
            return Err(Error::InvalidInstance {
                id: inst.id,
                report,
            });
        }
        self.instances.insert(inst.id.clone(), inst);
        Ok(())
    }
}

/// A type with its supertype chain folded in and every part resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveSchema<S> {
    pub type_name: String,
    pub levels: u32,
    pub attributes: Vec<AttributeDef<S>>,
    pub parts: Vec<EffectivePart<S>>,
    pub eval_tables: Vec<EvalTable<S>>,
    pub global_eval: GlobalEvalSpec<S>,
    pub handlers: Vec<Handler<S>>,
    pub explanation: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffectivePart<S> {
    /// The slot as declared, including inline additions.
    pub slot: PartSlot<S>,
    pub schema: EffectiveSchema<S>,
}

impl<S: Scalar> EffectivePart<S> {
    pub fn name(&self) -> &str {
        &self.slot.name
    }

    /// Schema for a node filling this slot. A node may carry a subtype of the
    /// declared part type, in which case the subtype is resolved and the
    /// slot's inline additions are re-applied on top of it.
    pub fn schema_for<'a>(
        &'a self,
        kb: &KnowledgeBase<S>,
        node_type: &str,
    ) -> Result<Cow<'a, EffectiveSchema<S>>> {
        if node_type == self.slot.part_type {
            return Ok(Cow::Borrowed(&self.schema));
        }
        if !is_subtype(kb, node_type, &self.slot.part_type)? {
            return Err(Error::TypeMismatch {
                expected: self.slot.part_type.clone(),
                found: node_type.to_string(),
            });
        }
        let mut stack = Vec::new();
        let schema = resolve_slot(kb, &self.slot, node_type, &mut stack)?;
        Ok(Cow::Owned(schema))
    }
}

impl<S: Scalar> EffectiveSchema<S> {
    pub fn is_leaf(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn attribute(&self, name: &str) -> Option<&AttributeDef<S>> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn part(&self, name: &str) -> Option<&EffectivePart<S>> {
        self.parts.iter().find(|p| p.slot.name == name)
    }

    pub fn eval_table(&self, attribute: &str) -> Option<&EvalTable<S>> {
        self.eval_tables.iter().find(|t| t.attribute == attribute)
    }

    pub fn handler(&self, message: &str) -> Option<&Handler<S>> {
        self.handlers.iter().find(|h| h.message == message)
    }

    /// Depth of the part tree below this schema (0 for a leaf).
    pub fn depth(&self) -> u32 {
        self.parts
            .iter()
            .map(|p| p.schema.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Qualified names (`Slot.Sub.attr`) of every qualifying attribute in the
    /// tree, in declaration order.
    pub fn qualifying_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_names(&mut Vec::new(), true, &mut out);
        out
    }

    /// Qualified names of every attribute in the tree.
    pub fn attribute_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_names(&mut Vec::new(), false, &mut out);
        out
    }

    fn collect_names(
        &self,
        prefix: &mut Vec<String>,
        qualifying_only: bool,
        out: &mut Vec<String>,
    ) {
        for attr in &self.attributes {
            if attr.qualifying || !qualifying_only {
                let mut parts = prefix.clone();
                parts.push(attr.name.clone());
                out.push(parts.join("."));
            }
        }
        for part in &self.parts {
            prefix.push(part.slot.name.clone());
            part.schema.collect_names(prefix, qualifying_only, out);
            prefix.pop();
        }
    }
}

/// Supertype chain from `type_name` up to its root, nearest first.
pub fn supertype_chain<'a, S: Scalar>(
    kb: &'a KnowledgeBase<S>,
    type_name: &str,
) -> Result<Vec<&'a TypeDef<S>>> {
    let mut chain = Vec::new();
    let mut seen = BTreeSet::new();
    let mut current = Some(type_name.to_string());
    while let Some(name) = current {
        if !seen.insert(name.clone()) {
            return Err(Error::CyclicHierarchy(name));
        }
        let def = kb.type_def(&name)?;
        chain.push(def);
        current = def.supertype.clone();
    }
    Ok(chain)
}

/// Reflexive, transitive is-a test.
pub fn is_subtype<S: Scalar>(kb: &KnowledgeBase<S>, sub: &str, sup: &str) -> Result<bool> {
    kb.type_def(sup)?;
    Ok(supertype_chain(kb, sub)?.iter().any(|t| t.name == sup))
}

/// Every instance whose type is `type_name` or one of its subtypes.
pub fn class_of<S: Scalar>(kb: &KnowledgeBase<S>, type_name: &str) -> Result<BTreeSet<String>> {
    kb.type_def(type_name)?;
    let mut members = BTreeSet::new();
    for (id, inst) in &kb.instances {
        if is_subtype(kb, &inst.type_name, type_name)? {
            members.insert(id.clone());
        }
    }
    Ok(members)
}

pub fn resolve_effective_schema<S: Scalar>(
    kb: &KnowledgeBase<S>,
    type_name: &str,
) -> Result<EffectiveSchema<S>> {
    let mut stack = Vec::new();
    let schema = resolve_with_stack(kb, type_name, &mut stack)?;
    let depth = schema.depth();
    if depth > schema.levels {
        return Err(Error::InvalidSchema {
            type_name: type_name.to_string(),
            reason: format!(
                "part tree is {depth} level(s) deep but the type declares levels {}",
                schema.levels
            ),
        });
    }
    Ok(schema)
}

/// Members declared at one layer of resolution: a type along the chain or a
/// slot's inline block.
struct Layer<'a, S> {
    owner: &'a str,
    attributes: &'a [AttributeDef<S>],
    parts: &'a [PartSlot<S>],
}

fn resolve_with_stack<S: Scalar>(
    kb: &KnowledgeBase<S>,
    type_name: &str,
    stack: &mut Vec<String>,
) -> Result<EffectiveSchema<S>> {
    let chain = supertype_chain(kb, type_name)?;
    let own = chain[0];
    let mut schema = EffectiveSchema {
        type_name: type_name.to_string(),
        levels: own.levels,
        attributes: Vec::new(),
        parts: Vec::new(),
        eval_tables: Vec::new(),
        global_eval: GlobalEvalSpec::default(),
        handlers: Vec::new(),
        explanation: None,
    };
    let mut raw_parts: Vec<PartSlot<S>> = Vec::new();
    let mut global = None;
    for def in chain.iter().rev() {
        merge_layer(
            type_name,
            Layer {
                owner: &def.name,
                attributes: &def.attributes,
                parts: &def.parts,
            },
            &mut schema.attributes,
            &mut raw_parts,
            kb,
        )?;
        for table in &def.eval_tables {
            match schema
                .eval_tables
                .iter_mut()
                .find(|t| t.attribute == table.attribute)
            {
                Some(existing) => *existing = table.clone(),
                None => schema.eval_tables.push(table.clone()),
            }
        }
        if def.global_eval.is_some() {
            global = def.global_eval.clone();
        }
        for handler in &def.handlers {
            match schema
                .handlers
                .iter_mut()
                .find(|h| h.message == handler.message)
            {
                Some(existing) => *existing = handler.clone(),
                None => schema.handlers.push(handler.clone()),
            }
        }
        if def.explanation.is_some() {
            schema.explanation = def.explanation.clone();
        }
    }
    if let Some(global) = global {
        schema.global_eval = global;
    }
    for table in &schema.eval_tables {
        if schema.attribute(&table.attribute).is_none() {
            return Err(Error::InvalidSchema {
                type_name: type_name.to_string(),
                reason: format!(
                    "evaluation table for unknown attribute `{}`",
                    table.attribute
                ),
            });
        }
    }

    stack.extend(chain.iter().map(|d| d.name.clone()));
    let pushed = chain.len();
    let result = resolve_parts(kb, type_name, &raw_parts, stack);
    stack.truncate(stack.len() - pushed);
    schema.parts = result?;
    check_leaf_rule(&schema)?;
    Ok(schema)
}

fn resolve_parts<S: Scalar>(
    kb: &KnowledgeBase<S>,
    owner: &str,
    parts: &[PartSlot<S>],
    stack: &mut Vec<String>,
) -> Result<Vec<EffectivePart<S>>> {
    let mut out = Vec::with_capacity(parts.len());
    for slot in parts {
        for enclosing in stack.iter() {
            if is_subtype(kb, &slot.part_type, enclosing)?
                || is_subtype(kb, enclosing, &slot.part_type)?
            {
                return Err(Error::CyclicComposition {
                    owner: owner.to_string(),
                    part_type: slot.part_type.clone(),
                });
            }
        }
        let schema = resolve_slot(kb, slot, &slot.part_type, stack)?;
        out.push(EffectivePart {
            slot: slot.clone(),
            schema,
        });
    }
    Ok(out)
}

fn resolve_slot<S: Scalar>(
    kb: &KnowledgeBase<S>,
    slot: &PartSlot<S>,
    node_type: &str,
    stack: &mut Vec<String>,
) -> Result<EffectiveSchema<S>> {
    slot.reliability.check()?;
    let mut schema = resolve_with_stack(kb, node_type, stack)?;
    if slot.attributes.is_empty() && slot.parts.is_empty() {
        if slot.explanation.is_some() {
            schema.explanation = slot.explanation.clone();
        }
        return Ok(schema);
    }
    let mut raw_parts: Vec<PartSlot<S>> = schema.parts.iter().map(|p| p.slot.clone()).collect();
    let mut resolved: Vec<Option<EffectivePart<S>>> = schema.parts.drain(..).map(Some).collect();
    let layer_owner = format!("{}/{}", node_type, slot.name);
    merge_layer(
        &layer_owner,
        Layer {
            owner: &layer_owner,
            attributes: &slot.attributes,
            parts: &slot.parts,
        },
        &mut schema.attributes,
        &mut raw_parts,
        kb,
    )?;
    // keep already-resolved parts untouched and resolve only what the inline
    // block added or replaced
    stack.push(node_type.to_string());
    let mut parts = Vec::with_capacity(raw_parts.len());
    for (i, raw) in raw_parts.iter().enumerate() {
        match resolved.get_mut(i).and_then(Option::take) {
            Some(existing) if existing.slot == *raw => parts.push(existing),
            _ => match resolve_parts(kb, &layer_owner, std::slice::from_ref(raw), stack) {
                Ok(mut p) => parts.append(&mut p),
                Err(e) => {
                    stack.pop();
                    return Err(e);
                }
            },
        }
    }
    stack.pop();
    schema.parts = parts;
    if slot.explanation.is_some() {
        schema.explanation = slot.explanation.clone();
    }
    check_leaf_rule(&schema)?;
    Ok(schema)
}

fn merge_layer<S: Scalar>(
    type_name: &str,
    layer: Layer<'_, S>,
    attributes: &mut Vec<AttributeDef<S>>,
    parts: &mut Vec<PartSlot<S>>,
    kb: &KnowledgeBase<S>,
) -> Result<()> {
    for attr in layer.attributes {
        attr.check(layer.owner)?;
        match attributes.iter_mut().find(|a| a.name == attr.name) {
            Some(inherited) => {
                if !attr.domain.is_within(&inherited.domain) {
                    return Err(Error::IllegalOverride {
                        type_name: type_name.to_string(),
                        member: attr.name.clone(),
                        reason: "the domain must narrow the inherited one".into(),
                    });
                }
                if !attr.cardinality.is_within(&inherited.cardinality) {
                    return Err(Error::IllegalOverride {
                        type_name: type_name.to_string(),
                        member: attr.name.clone(),
                        reason: "the cardinality must narrow the inherited one".into(),
                    });
                }
                *inherited = attr.clone();
            }
            None => attributes.push(attr.clone()),
        }
    }
    for slot in layer.parts {
        if slot.cardinality.max.is_none() {
            return Err(Error::InvalidSchema {
                type_name: type_name.to_string(),
                reason: format!("part `{}` needs a bounded cardinality", slot.name),
            });
        }
        let max = slot.cardinality.max.unwrap_or(0);
        if max < slot.cardinality.min || max == 0 {
            return Err(Error::InvalidSchema {
                type_name: type_name.to_string(),
                reason: format!("part `{}` has cardinality {}", slot.name, slot.cardinality),
            });
        }
        match parts.iter_mut().find(|p| p.name == slot.name) {
            Some(inherited) => {
                if !is_subtype(kb, &slot.part_type, &inherited.part_type)? {
                    return Err(Error::IllegalOverride {
                        type_name: type_name.to_string(),
                        member: slot.name.clone(),
                        reason: format!("part type must be a subtype of `{}`", inherited.part_type),
                    });
                }
                if !slot.cardinality.is_within(&inherited.cardinality) {
                    return Err(Error::IllegalOverride {
                        type_name: type_name.to_string(),
                        member: slot.name.clone(),
                        reason: "the cardinality must narrow the inherited one".into(),
                    });
                }
                *inherited = slot.clone();
            }
            None => parts.push(slot.clone()),
        }
    }
    Ok(())
}

fn check_leaf_rule<S: Scalar>(schema: &EffectiveSchema<S>) -> Result<()> {
    if !schema.parts.is_empty() && !schema.attributes.is_empty() {
        return Err(Error::InvalidSchema {
            type_name: schema.type_name.clone(),
            reason: format!(
                "attributes ({}) are only allowed on leaf sub-objects",
                schema
                    .attributes
                    .iter()
                    .map(|a| a.name.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        });
    }
    Ok(())
}

/// Builds `new_name` as the composition of `a` and `b`: a fresh root type
/// with one slot of each, subtype of neither.
pub fn compose_types<'a, S: Scalar>(
    kb: &'a mut KnowledgeBase<S>,
    a: &str,
    b: &str,
    new_name: &str,
) -> Result<&'a TypeDef<S>> {
    let left = resolve_effective_schema(kb, a)?;
    let right = resolve_effective_schema(kb, b)?;
    if a == b {
        return Err(Error::SelfComposition(a.to_string()));
    }
    if kb.types.contains_key(new_name) {
        return Err(Error::DuplicateTypeName(new_name.to_string()));
    }
    let def = TypeDef::new(new_name, left.levels.max(right.levels) + 1)
        .part(PartSlot::new(a, a))
        .part(PartSlot::new(b, b));
    kb.add_type(def)?;
    Ok(&kb.types[new_name])
}
