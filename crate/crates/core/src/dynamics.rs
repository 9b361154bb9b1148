//! Time-dependent structure and attribute references.
//!
//! Every sub-object link carries a structure function giving its reliability
//! coefficient (a percentage) at time `t`. A value of 0 means the part is
//! absent at that time. Snapshots are computed on demand from these
//! functions, so past and future states are equally available and nothing is
//! stored between calls.

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::graph::{node_schema, NodePath, ObjectInstance, QualifiedName, SubObjectNode};
use crate::scalar::{clamp, clamp_percent, wrap, Scalar};
use crate::types::{AttributeDef, Domain, EffectiveSchema, KnowledgeBase, Reference, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum TimeFunction<S> {
    Constant(S),
    /// `slope * t + intercept`
    Linear {
        slope: S,
        intercept: S,
    },
    /// Breakpoints `(t_i, v_i)` with strictly increasing `t_i`. Step mode
    /// holds `v_i` on `[t_i, t_{i+1})`; interpolated mode draws straight
    /// lines between breakpoints. After the last breakpoint the last value
    /// holds.
    Piecewise {
        points: Vec<(S, S)>,
        interpolate: bool,
    },
    /// `inner` evaluated at `t mod period`.
    Periodic {
        period: S,
        inner: Box<TimeFunction<S>>,
    },
}

impl<S: Scalar> TimeFunction<S> {
    pub fn check(&self) -> Result<()> {
        match self {
            TimeFunction::Constant(_) | TimeFunction::Linear { .. } => Ok(()),
            TimeFunction::Piecewise { points, .. } => {
                if points.is_empty() {
                    return Err(Error::MalformedFunction(
                        "piecewise needs at least one breakpoint".into(),
                    ));
                }
                if points.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(Error::MalformedFunction(
                        "piecewise breakpoints must be strictly increasing in t".into(),
                    ));
                }
                Ok(())
            }
            TimeFunction::Periodic { period, inner } => {
                if *period <= S::zero() {
                    return Err(Error::MalformedFunction("period must be positive".into()));
                }
                inner.check()
            }
        }
    }

    /// Raw value at `t`, not clamped.
    pub fn eval(&self, t: &S) -> S {
        self.eval_in(t, false)
    }

    fn eval_in(&self, t: &S, periodic: bool) -> S {
        match self {
            TimeFunction::Constant(c) => c.clone(),
            TimeFunction::Linear { slope, intercept } => {
                slope.clone() * t.clone() + intercept.clone()
            }
            TimeFunction::Piecewise {
                points,
                interpolate,
            } => {
                let after = points.iter().rposition(|(ti, _)| ti <= t);
                let Some(i) = after else {
                    return if periodic {
                        points[0].1.clone()
                    } else {
                        S::zero()
                    };
                };
                let (ti, vi) = &points[i];
                match points.get(i + 1) {
                    Some((tn, vn)) if *interpolate => {
                        let frac = (t.clone() - ti.clone()) / (tn.clone() - ti.clone());
                        vi.clone() + (vn.clone() - vi.clone()) * frac
                    }
                    _ => vi.clone(),
                }
            }
            TimeFunction::Periodic { period, inner } => inner.eval_in(&wrap(t, period), true),
        }
    }

    /// Reliability coefficient at `t`, clamped to `[0, 100]`.
    pub fn reliability(&self, t: &S) -> S {
        clamp_percent(self.eval(t))
    }

    /// Period of the function, when it is periodic or constant in time.
    pub fn period(&self) -> Option<&S> {
        match self {
            TimeFunction::Periodic { period, .. } => Some(period),
            _ => None,
        }
    }
}

/// Evaluates a structure function at `t`; the result is a reliability
/// percentage.
pub fn eval_time_fn<S: Scalar>(f: &TimeFunction<S>, t: &S) -> Result<S> {
    f.check()?;
    Ok(f.reliability(t))
}

/// Reference (theoretical) value of an attribute at `t`. Time-varying
/// references are clamped into the attribute's numeric domain.
pub fn reference_at<S: Scalar>(attr: &AttributeDef<S>, t: &S) -> Result<S> {
    match &attr.reference {
        None => Err(Error::NoReference(attr.name.clone())),
        Some(Reference::Constant(c)) => Ok(c.clone()),
        Some(Reference::Function(f)) => {
            f.check()?;
            let raw = f.eval(t);
            Ok(match &attr.domain {
                Domain::Range { lo, hi, .. } => clamp(raw, lo, hi),
                Domain::Enum(_) => raw,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PresentNode<S> {
    pub path: NodePath,
    pub type_name: String,
    pub level: u32,
    pub reliability: S,
}

/// State of an instance at one time: the parts present, their reliability,
/// the attributes inherited through present parts and the reference values.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<S> {
    pub instance_id: String,
    pub t: S,
    /// Present nodes in pre-order, root first.
    pub nodes: Vec<PresentNode<S>>,
    pub inherited: IndexMap<QualifiedName, Vec<Value<S>>>,
    pub references: IndexMap<QualifiedName, S>,
}

impl<S: Scalar> Snapshot<S> {
    pub fn is_present(&self, path: &NodePath) -> bool {
        self.nodes.iter().any(|n| &n.path == path)
    }

    pub fn present_paths(&self) -> Vec<NodePath> {
        self.nodes.iter().map(|n| n.path.clone()).collect()
    }
}

/// Computes the instance's structure and attribute state at `t`. A node is
/// present iff its own reliability is positive and its parent is present.
pub fn snapshot<S: Scalar>(
    kb: &KnowledgeBase<S>,
    inst: &ObjectInstance<S>,
    t: &S,
) -> Result<Snapshot<S>> {
    let schema = node_schema(kb, inst, &NodePath::root())?;
    let mut snap = Snapshot {
        instance_id: inst.id.clone(),
        t: t.clone(),
        nodes: Vec::new(),
        inherited: IndexMap::new(),
        references: IndexMap::new(),
    };
    visit_present(
        kb,
        &inst.root,
        &schema,
        NodePath::root(),
        S::hundred(),
        t,
        &mut snap,
    )?;
    Ok(snap)
}

fn visit_present<S: Scalar>(
    kb: &KnowledgeBase<S>,
    node: &SubObjectNode<S>,
    schema: &EffectiveSchema<S>,
    path: NodePath,
    reliability: S,
    t: &S,
    snap: &mut Snapshot<S>,
) -> Result<()> {
    snap.nodes.push(PresentNode {
        path: path.clone(),
        type_name: node.type_name.clone(),
        level: node.level,
        reliability,
    });
    for (name, values) in &node.attributes {
        if !values.is_empty() {
            snap.inherited.insert(
                QualifiedName::new(path.clone(), name.clone()),
                values.clone(),
            );
        }
    }
    for attr in &schema.attributes {
        if attr.reference.is_some() {
            snap.references.insert(
                QualifiedName::new(path.clone(), attr.name.clone()),
                reference_at(attr, t)?,
            );
        }
    }
    for child in &node.children {
        let r = child.structure_fn.reliability(t);
        if r <= S::zero() {
            continue;
        }
        let part = schema
            .part(&child.slot_name)
            .ok_or_else(|| Error::BadPath(path.child(child.segment()).to_string()))?;
        let child_schema = part.schema_for(kb, &child.type_name)?;
        visit_present(
            kb,
            child,
            &child_schema,
            path.child(child.segment()),
            r,
            t,
            snap,
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimelineEntry<S> {
    pub t: S,
    pub present: Vec<NodePath>,
}

fn sample_times<S: Scalar>(start: &S, end: &S, step: &S) -> Result<Vec<S>> {
    if *step <= S::zero() {
        return Err(Error::BadRange(format!(
            "step {} must be positive",
            step.to_decimal()
        )));
    }
    if start > end {
        return Err(Error::BadRange(format!(
            "start {} is after end {}",
            start.to_decimal(),
            end.to_decimal()
        )));
    }
    let count = ((end.clone() - start.clone()) / step.clone()).floor();
    let count = count
        .to_u64()
        .ok_or_else(|| Error::BadRange("too many samples".into()))?;
    if count > 1_000_000 {
        return Err(Error::BadRange(format!("{} samples requested", count + 1)));
    }
    Ok((0..=count)
        .map(|i| start.clone() + step.clone() * S::from_u64(i).expect("sample index"))
        .collect())
}

/// Present node paths sampled every `step` from `start` to `end` inclusive.
pub fn timeline<S: Scalar>(
    kb: &KnowledgeBase<S>,
    inst: &ObjectInstance<S>,
    start: &S,
    end: &S,
    step: &S,
) -> Result<Vec<TimelineEntry<S>>> {
    sample_times(start, end, step)?
        .into_iter()
        .map(|t| {
            let snap = snapshot(kb, inst, &t)?;
            Ok(TimelineEntry {
                present: snap.present_paths(),
                t,
            })
        })
        .collect()
}

/// Timeline as CSV: `t`, one 0/1 presence column per sub-object and one
/// `rel:<path>` reliability column per sub-object, both in pre-order.
pub fn timeline_csv<S: Scalar>(
    kb: &KnowledgeBase<S>,
    inst: &ObjectInstance<S>,
    start: &S,
    end: &S,
    step: &S,
) -> Result<String> {
    let columns: Vec<NodePath> = inst
        .root
        .walk()
        .into_iter()
        .skip(1)
        .map(|(p, _)| p)
        .collect();
    let mut out = String::from("t");
    for c in &columns {
        out.push(',');
        out.push_str(&c.to_string());
    }
    for c in &columns {
        out.push_str(",rel:");
        out.push_str(&c.to_string());
    }
    out.push('\n');
    for t in sample_times(start, end, step)? {
        let snap = snapshot(kb, inst, &t)?;
        let mut flags = Vec::with_capacity(columns.len());
        let mut rels = Vec::with_capacity(columns.len());
        for c in &columns {
            match snap.nodes.iter().find(|n| &n.path == c) {
                Some(n) => {
                    flags.push("1".to_string());
                    rels.push(n.reliability.to_decimal());
                }
                None => {
                    flags.push("0".to_string());
                    rels.push("0".to_string());
                }
            }
        }
        out.push_str(&t.to_decimal());
        for v in flags.iter().chain(rels.iter()) {
            out.push(',');
            out.push_str(v);
        }
        out.push('\n');
    }
    Ok(out)
}
