//! Random knowledge bases for the acceptance and CLI tests.

#![allow(dead_code)]

use ckb_core::evaluation::{Aggregation, EvalTable, GlobalEvalSpec, MissingPolicy};
use ckb_core::graph::apply_user_update;
use ckb_core::messaging::{Action, Handler};
use ckb_core::types::EffectiveSchema;
use ckb_core::{
    resolve_effective_schema, AttributeDef, Cardinality, Domain, KnowledgeBase, NodePath,
    ObjectInstance, PartSlot, QualifiedName, Reference, Scalar, TimeFunction, TypeDef, Value,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const ATTR_NAMES: [&str; 8] = ["couleur", "taille", "poids", "forme", "état", "a", "b", "c"];
const SYMBOLS: [&str; 6] = ["rouge", "vert", "bleu", "mauve", "fermé", "ouvert"];

pub struct Shape {
    pub max_depth: u32,
    pub max_fanout: usize,
    /// Every structure function is periodic with this period.
    pub period: Option<i64>,
    /// Adds tables, global specs, handlers and explanations.
    pub decorate: bool,
}

pub struct Gen {
    pub rng: StdRng,
    counter: usize,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: StdRng::seed_from_u64(seed),
            counter: 0,
        }
    }

    pub fn fresh(&mut self, prefix: &str) -> String {
        self.counter += 1;
        format!("{prefix}{}", self.counter)
    }

    /// A multiple of 1/4, exact in every scalar type.
    pub fn quarter<S: Scalar>(&mut self, lo: i64, hi: i64) -> S {
        let k = self.rng.gen_range(lo * 4..=hi * 4);
        S::from_int(k) / S::from_int(4)
    }

    fn int<S: Scalar>(&mut self, lo: i64, hi: i64) -> S {
        S::from_int(self.rng.gen_range(lo..=hi))
    }

    pub fn time_fn<S: Scalar>(&mut self, period: Option<i64>) -> TimeFunction<S> {
        let piecewise = |g: &mut Gen, span: i64| {
            let n = g.rng.gen_range(1..=4);
            let mut ts: Vec<i64> = (0..n).map(|_| g.rng.gen_range(0..span)).collect();
            ts.sort();
            ts.dedup();
            TimeFunction::Piecewise {
                points: ts
                    .into_iter()
                    .map(|t| (S::from_int(t), g.int(-20, 120)))
                    .collect(),
                interpolate: g.rng.gen_bool(0.5),
            }
        };
        if let Some(p) = period {
            return TimeFunction::Periodic {
                period: S::from_int(p),
                inner: Box::new(piecewise(self, p)),
            };
        }
        match self.rng.gen_range(0..5) {
            0 | 1 => TimeFunction::Constant(self.int(0, 100)),
            2 => TimeFunction::Linear {
                slope: self.quarter(-3, 3),
                intercept: self.int(0, 100),
            },
            3 => piecewise(self, 400),
            _ => {
                let p = self.rng.gen_range(1..400);
                TimeFunction::Periodic {
                    period: S::from_int(p),
                    inner: Box::new(piecewise(self, p)),
                }
            }
        }
    }

    pub fn attribute<S: Scalar>(&mut self, name: &str) -> AttributeDef<S> {
        let qualifying = self.rng.gen_bool(0.5);
        let card = match self.rng.gen_range(0..4) {
            0 if !qualifying => Cardinality::new(0, Some(1)),
            1 => Cardinality::new(1, Some(2)),
            2 if !qualifying => Cardinality::new(0, None),
            _ => Cardinality::ONE,
        };
        let domain = if self.rng.gen_bool(0.5) {
            let mut symbols: Vec<String> = SYMBOLS.iter().map(|s| s.to_string()).collect();
            symbols.shuffle(&mut self.rng);
            symbols.truncate(self.rng.gen_range(1..=4));
            Domain::Enum(symbols)
        } else {
            let lo: i64 = self.rng.gen_range(-50..50);
            let hi = lo + self.rng.gen_range(1..100);
            let unit = self.rng.gen_bool(0.3).then(|| "cm".to_string());
            Domain::Range {
                lo: S::from_int(lo),
                hi: S::from_int(hi),
                unit,
            }
        };
        let mut attr = AttributeDef::new(name, domain, card);
        attr.qualifying = qualifying;
        if let Domain::Range { lo, hi, .. } = &attr.domain {
            let (lo, hi) = (lo.to_i64().unwrap(), hi.to_i64().unwrap());
            attr.reference = match self.rng.gen_range(0..3) {
                0 => Some(Reference::Constant(self.quarter(lo, hi))),
                1 => Some(Reference::Function(self.time_fn(None))),
                _ => None,
            };
        }
        attr
    }

    fn leaf_attributes<S: Scalar>(&mut self) -> Vec<AttributeDef<S>> {
        let mut names: Vec<&str> = ATTR_NAMES.to_vec();
        names.shuffle(&mut self.rng);
        let n = self.rng.gen_range(1..=3);
        names[..n].iter().map(|name| self.attribute(name)).collect()
    }

    fn decorate<S: Scalar>(&mut self, def: &mut TypeDef<S>, leaf_attrs: &[AttributeDef<S>]) {
        if self.rng.gen_bool(0.3) {
            def.explanation = Some(
                [
                    "plain",
                    "with \"quotes\"",
                    "accentué\nsur deux lignes",
                    "back\\slash",
                ]
                .choose(&mut self.rng)
                .unwrap()
                .to_string(),
            );
        }
        for attr in leaf_attrs {
            if let Domain::Enum(symbols) = &attr.domain {
                if self.rng.gen_bool(0.5) {
                    let mut entries = Vec::new();
                    for (i, a) in symbols.iter().enumerate() {
                        for b in &symbols[i + 1..] {
                            entries.push((a.clone(), b.clone(), self.quarter(0, 100)));
                        }
                    }
                    def.eval_tables.push(EvalTable {
                        attribute: attr.name.clone(),
                        entries,
                    });
                }
            }
        }
        if self.rng.gen_bool(0.4) {
            let aggregation = match self.rng.gen_range(0..4) {
                0 => Aggregation::WeightedMean,
                1 => Aggregation::Max,
                2 => Aggregation::Min,
                _ => Aggregation::Rules(vec![
                    (S::from_int(10), S::zero()),
                    (S::from_int(50), S::from_int(50)),
                ]),
            };
            let missing = if self.rng.gen_bool(0.5) {
                MissingPolicy::Ignore
            } else {
                MissingPolicy::Penalize(self.quarter(0, 100))
            };
            def.global_eval = Some(GlobalEvalSpec {
                aggregation,
                missing,
            });
        }
        for _ in 0..self.rng.gen_range(0..3) {
            let message = ["ping", "état?", "quelle couleur", "m"]
                .choose(&mut self.rng)
                .unwrap()
                .to_string();
            if def.handlers.iter().any(|h| h.message == message) {
                continue;
            }
            let name = leaf_attrs.first().map(|a| a.name.clone());
            let action = match self.rng.gen_range(0..7) {
                0 => Action::Lookup(name),
                1 => Action::Attributes,
                2 => Action::Snapshot,
                3 => Action::Reference(None),
                4 => Action::Evaluate,
                5 => Action::Update(name),
                _ => Action::Table {
                    attribute: name.unwrap_or_else(|| "a".into()),
                    rows: vec![
                        (Value::Number(S::from_int(-3)), Value::Symbol("bas".into())),
                        (
                            Value::Symbol("rouge".into()),
                            Value::Number(self.quarter(0, 9)),
                        ),
                    ],
                },
            };
            def.handlers.push(Handler { message, action });
        }
    }

    /// Registers a fresh type tree in `kb` and returns the root type name.
    pub fn type_tree<S: Scalar>(&mut self, kb: &mut KnowledgeBase<S>, shape: &Shape) -> String {
        self.type_node(kb, shape, 0)
    }

    fn type_node<S: Scalar>(
        &mut self,
        kb: &mut KnowledgeBase<S>,
        shape: &Shape,
        depth: u32,
    ) -> String {
        let name = self.fresh("T");
        let leaf = depth >= shape.max_depth || (depth > 0 && self.rng.gen_bool(0.35));
        let mut def = TypeDef::new(name.clone(), 0);
        if leaf {
            def.attributes = self.leaf_attributes();
        } else {
            // children per node, counting every node a slot may hold
            let mut budget = self.rng.gen_range(1..=shape.max_fanout);
            let mut levels = 0;
            let mut i = 0;
            while budget > 0 {
                let part_type = self.type_node(kb, shape, depth + 1);
                levels = levels.max(kb.types[&part_type].levels + 1);
                let card = match self.rng.gen_range(0..5) {
                    0 => Cardinality::new(0, Some(1)),
                    1 if budget >= 2 => Cardinality::new(2, Some(2)),
                    2 if budget >= 3 => Cardinality::new(1, Some(3)),
                    _ => Cardinality::ONE,
                };
                budget -= card.max.unwrap_or(1).max(1) as usize;
                let mut slot = PartSlot::new(format!("P{i}"), part_type)
                    .with_cardinality(card)
                    .with_reliability(self.time_fn(shape.period));
                if shape.decorate && self.rng.gen_bool(0.2) {
                    slot.explanation = Some("slot note".into());
                }
                def.parts.push(slot);
                i += 1;
            }
            def.levels = levels;
        }
        if shape.decorate {
            let attrs = def.attributes.clone();
            self.decorate(&mut def, &attrs);
        }
        kb.add_type(def).expect("generated types are valid");
        name
    }

    /// A subtype adding members compatible with the leaf rule.
    pub fn subtype<S: Scalar>(
        &mut self,
        kb: &mut KnowledgeBase<S>,
        parent: &str,
        shape: &Shape,
    ) -> String {
        let name = self.fresh("Sub");
        let schema = resolve_effective_schema(kb, parent).unwrap();
        let mut def = TypeDef::new(name.clone(), schema.levels).isa(parent);
        if schema.is_leaf() {
            let taken: Vec<String> = schema.attributes.iter().map(|a| a.name.clone()).collect();
            let extra = ["x", "y", "z"].choose(&mut self.rng).unwrap();
            if !taken.iter().any(|t| t == extra) {
                def.attributes.push(self.attribute(extra));
            }
        } else {
            let part_type = self.type_node(
                kb,
                &Shape {
                    max_depth: 1,
                    ..*shape
                },
                1,
            );
            let levels = kb.types[&part_type].levels + 1;
            def.levels = def.levels.max(levels);
            def.parts.push(
                PartSlot::new("Extra", part_type).with_reliability(self.time_fn(shape.period)),
            );
        }
        kb.add_type(def).expect("generated subtypes are valid");
        name
    }

    pub fn values<S: Scalar>(&mut self, attr: &AttributeDef<S>) -> Vec<Value<S>> {
        let lo = attr.cardinality.min.max(1) as usize;
        let hi = attr
            .cardinality
            .max
            .map_or(2, |m| (m as usize).min(2))
            .max(lo);
        let n = self.rng.gen_range(lo..=hi);
        (0..n).map(|_| self.value_in(&attr.domain)).collect()
    }

    pub fn value_in<S: Scalar>(&mut self, domain: &Domain<S>) -> Value<S> {
        match domain {
            Domain::Enum(symbols) => Value::Symbol(symbols.choose(&mut self.rng).unwrap().clone()),
            Domain::Range { lo, hi, .. } => {
                Value::Number(self.quarter(lo.to_i64().unwrap(), hi.to_i64().unwrap()))
            }
        }
    }

    /// Any value, in the domain or not.
    pub fn wild_value<S: Scalar>(&mut self) -> Value<S> {
        if self.rng.gen_bool(0.5) {
            Value::Symbol(SYMBOLS.choose(&mut self.rng).unwrap().to_string())
        } else {
            Value::Number(self.quarter(-120, 120))
        }
    }

    /// A conforming instance with every qualifying attribute set and some
    /// optional parts and attributes.
    pub fn instance<S: Scalar>(
        &mut self,
        kb: &KnowledgeBase<S>,
        type_name: &str,
        id: &str,
    ) -> ObjectInstance<S> {
        let mut inst = ObjectInstance::materialize(kb, id, type_name).unwrap();
        let schema = resolve_effective_schema(kb, type_name).unwrap();
        self.grow(kb, &mut inst, &schema, &NodePath::root());
        let leaves: Vec<NodePath> = inst
            .root
            .walk()
            .into_iter()
            .filter(|(_, n)| n.is_leaf())
            .map(|(p, _)| p)
            .collect();
        for path in leaves {
            let node_schema = ckb_core::graph::node_schema(kb, &inst, &path).unwrap();
            for attr in &node_schema.attributes {
                if attr.qualifying || self.rng.gen_bool(0.5) {
                    let values = self.values(attr);
                    let q = QualifiedName::new(path.clone(), attr.name.clone());
                    apply_user_update(kb, &mut inst, &q, values).unwrap();
                }
            }
        }
        inst
    }

    fn grow<S: Scalar>(
        &mut self,
        kb: &KnowledgeBase<S>,
        inst: &mut ObjectInstance<S>,
        schema: &EffectiveSchema<S>,
        at: &NodePath,
    ) {
        for part in &schema.parts {
            let card = &part.slot.cardinality;
            let max = card.max.unwrap_or(card.min + 1);
            let count = self.rng.gen_range(card.min..=max);
            for i in 1..=count {
                let seg = if card.is_multi() {
                    format!("{}[{i}]", part.slot.name)
                } else {
                    part.slot.name.clone()
                };
                let path = at.child(seg);
                inst.ensure_node(kb, &path).unwrap();
                self.grow(kb, inst, &part.schema, &path);
            }
        }
    }

    /// A whole base: a few type trees, subtypes and instances.
    pub fn knowledge_base<S: Scalar>(&mut self, shape: &Shape) -> KnowledgeBase<S> {
        let mut kb = KnowledgeBase::new();
        if self.rng.gen_bool(0.5) {
            kb.time_unit = Some(
                ["day", "hour", "année"]
                    .choose(&mut self.rng)
                    .unwrap()
                    .to_string(),
            );
        }
        let mut types = Vec::new();
        for _ in 0..self.rng.gen_range(1..=3) {
            let root = self.type_tree(&mut kb, shape);
            types.push(root.clone());
            if self.rng.gen_bool(0.5) {
                types.push(self.subtype(&mut kb, &root, shape));
            }
        }
        for _ in 0..self.rng.gen_range(1..=3) {
            let t = types.choose(&mut self.rng).unwrap().clone();
            let id = self.fresh("obj");
            let inst = self.instance(&kb, &t, &id);
            kb.add_instance(inst).expect("generated instances conform");
        }
        kb
    }
}
