//! Distance-based comparison of a theoretical object (from the knowledge
//! base) with an observed one.
//!
//! Internal evaluation turns each attribute pair into a distance in percent,
//! 0 for identity and 100 at the far end of the domain. Global evaluation
//! aggregates those distances bottom-up through the part tree, weighting each
//! sub-object by its reliability at the evaluation time, and ranks every
//! instance of a type against one observation.

use indexmap::IndexMap;

use crate::dynamics::reference_at;
use crate::error::{Error, Result};
use crate::graph::{NodePath, ObjectInstance, QualifiedName, SubObjectNode};
use crate::scalar::{clamp_percent, max_of, min_of, Scalar};
use crate::types::{
    class_of, is_subtype, resolve_effective_schema, Domain, EffectiveSchema, KnowledgeBase, Value,
};

/// Author-supplied distances between the symbols of an enumerated domain.
/// Pairs are unordered; a symbol against itself is 0 unless listed.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalTable<S> {
    pub attribute: String,
    pub entries: Vec<(String, String, S)>,
}

impl<S: Scalar> EvalTable<S> {
    pub fn lookup(&self, a: &str, b: &str) -> Option<S> {
        self.entries
            .iter()
            .find(|(x, y, _)| (x == a && y == b) || (x == b && y == a))
            .map(|(_, _, d)| d.clone())
            .or_else(|| (a == b).then(S::zero))
    }

    /// Every unordered pair of distinct symbols needs an entry, and every
    /// distance must be a percentage.
    pub fn check(&self, domain: &Domain<S>) -> std::result::Result<(), String> {
        let Domain::Enum(symbols) = domain else {
            return Err(format!(
                "`{}` is numeric; tables apply to enumerated attributes",
                self.attribute
            ));
        };
        for (a, b, d) in &self.entries {
            for s in [a, b] {
                if !symbols.contains(s) {
                    return Err(format!("`{s}` is not a value of `{}`", self.attribute));
                }
            }
            if *d < S::zero() || *d > S::hundred() {
                return Err(format!("distance {} is outside [0, 100]", d.to_decimal()));
            }
        }
        for (i, a) in symbols.iter().enumerate() {
            for b in &symbols[i + 1..] {
                if self.lookup(a, b).is_none() {
                    return Err(format!("missing distance between `{a}` and `{b}`"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Aggregation<S> {
    /// Mean over attributes at a leaf, reliability-weighted mean over parts.
    WeightedMean,
    Max,
    Min,
    /// Weighted mean mapped through `(upper bound, score)` bands: the score of
    /// the first band whose bound is not exceeded, 100 past the last band.
    Rules(Vec<(S, S)>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum MissingPolicy<S> {
    /// Unobserved attributes are left out and the weights renormalized.
    Ignore,
    /// Unobserved attributes count with a fixed distance.
    Penalize(S),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalEvalSpec<S> {
    pub aggregation: Aggregation<S>,
    pub missing: MissingPolicy<S>,
}

impl<S> Default for GlobalEvalSpec<S> {
    fn default() -> Self {
        GlobalEvalSpec {
            aggregation: Aggregation::WeightedMean,
            missing: MissingPolicy::Ignore,
        }
    }
}

impl<S: Scalar> GlobalEvalSpec<S> {
    pub fn check(&self) -> std::result::Result<(), String> {
        let pct = |v: &S| *v >= S::zero() && *v <= S::hundred();
        if let Aggregation::Rules(bands) = &self.aggregation {
            if bands.is_empty() {
                return Err("rule table needs at least one band".into());
            }
            if bands.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err("rule bands must have increasing bounds".into());
            }
            if bands.iter().any(|(b, s)| !pct(b) || !pct(s)) {
                return Err("rule bounds and scores must lie in [0, 100]".into());
            }
        }
        if let MissingPolicy::Penalize(p) = &self.missing {
            if !pct(p) {
                return Err("missing-value penalty must lie in [0, 100]".into());
            }
        }
        Ok(())
    }
}

/// `100 / max(|v_theor - lo|, |v_theor - hi|)`: scales distances so that the
/// farther domain bound sits at exactly 100%.
pub fn scale_factor<S: Scalar>(v_theor: &S, lo: &S, hi: &S) -> Result<S> {
    if lo >= hi {
        return Err(Error::DegenerateDomain {
            lo: lo.to_decimal(),
            hi: hi.to_decimal(),
        });
    }
    if v_theor < lo || v_theor > hi {
        return Err(Error::TheoreticalOutsideDomain {
            value: v_theor.to_decimal(),
            lo: lo.to_decimal(),
            hi: hi.to_decimal(),
        });
    }
    let span = max_of(
        (v_theor.clone() - lo.clone()).abs(),
        (v_theor.clone() - hi.clone()).abs(),
    );
    Ok(S::hundred() / span)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distance<S> {
    pub percent: S,
    /// The raw distance exceeded 100 and was clamped.
    pub clamped: bool,
}

/// `min(100, |observed - v_theor| * factor)`.
pub fn distance<S: Scalar>(observed: &S, v_theor: &S, factor: &S) -> Distance<S> {
    let raw = (observed.clone() - v_theor.clone()).abs() * factor.clone();
    let clamped = raw > S::hundred();
    Distance {
        percent: clamp_percent(raw),
        clamped,
    }
}

/// Distance between the values of one attribute on a theoretical and an
/// observed leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeDistance<S> {
    pub percent: S,
    pub warning: Option<String>,
}

/// Compares the attributes of one leaf pair. Attributes without a
/// theoretical value (neither set on the theoretical node nor given a
/// reference) are not evaluable and are skipped; unobserved ones follow
/// `missing`.
pub fn eval_internal<S: Scalar>(
    schema: &EffectiveSchema<S>,
    theoretical: &SubObjectNode<S>,
    observed: Option<&SubObjectNode<S>>,
    t: &S,
    missing: &MissingPolicy<S>,
) -> Result<IndexMap<String, AttributeDistance<S>>> {
    if let Some(obs) = observed {
        if obs.slot_name != theoretical.slot_name {
            return Err(Error::TypeMismatch {
                expected: theoretical.segment(),
                found: obs.segment(),
            });
        }
    }
    let mut out = IndexMap::new();
    for attr in &schema.attributes {
        let theo_values: Vec<Value<S>> = match theoretical.attributes.get(&attr.name) {
            Some(v) if !v.is_empty() => v.clone(),
            _ => match attr.reference {
                Some(_) => vec![Value::Number(reference_at(attr, t)?)],
                None => continue,
            },
        };
        let obs_values = observed
            .and_then(|o| o.attributes.get(&attr.name))
            .filter(|v| !v.is_empty());
        let Some(obs_values) = obs_values else {
            if let MissingPolicy::Penalize(p) = missing {
                out.insert(
                    attr.name.clone(),
                    AttributeDistance {
                        percent: p.clone(),
                        warning: None,
                    },
                );
            }
            continue;
        };
        let d = match &attr.domain {
            Domain::Range { lo, hi, .. } => {
                continuous_distance(&attr.name, &theo_values, obs_values, lo, hi)?
            }
            Domain::Enum(_) => {
                let table = schema.eval_table(&attr.name);
                discrete_distance(&attr.name, table, &theo_values, obs_values)?
            }
        };
        out.insert(attr.name.clone(), d);
    }
    Ok(out)
}

fn continuous_distance<S: Scalar>(
    name: &str,
    theo: &[Value<S>],
    obs: &[Value<S>],
    lo: &S,
    hi: &S,
) -> Result<AttributeDistance<S>> {
    let mut best: Option<Distance<S>> = None;
    for tv in theo {
        let tv = tv
            .as_number()
            .ok_or_else(|| Error::MissingEvalSpec(name.to_string()))?;
        let factor = scale_factor(tv, lo, hi)?;
        for ov in obs {
            let ov = ov
                .as_number()
                .ok_or_else(|| Error::MissingEvalSpec(name.to_string()))?;
            let d = distance(ov, tv, &factor);
            if best.as_ref().is_none_or(|b| d.percent < b.percent) {
                best = Some(d);
            }
        }
    }
    let best = best.ok_or_else(|| Error::MissingEvalSpec(name.to_string()))?;
    Ok(AttributeDistance {
        warning: best.clamped.then(|| {
            format!(
                "`{name}` observed outside [{}, {}]; distance clamped to 100",
                lo.to_decimal(),
                hi.to_decimal()
            )
        }),
        percent: best.percent,
    })
}

fn discrete_distance<S: Scalar>(
    name: &str,
    table: Option<&EvalTable<S>>,
    theo: &[Value<S>],
    obs: &[Value<S>],
) -> Result<AttributeDistance<S>> {
    let mut best: Option<S> = None;
    for tv in theo {
        for ov in obs {
            let (Some(a), Some(b)) = (tv.as_symbol(), ov.as_symbol()) else {
                return Err(Error::MissingEvalSpec(name.to_string()));
            };
            let d = match table {
                Some(table) => table
                    .lookup(a, b)
                    .ok_or_else(|| Error::MissingEvalSpec(format!("{name}: {a} / {b}")))?,
                None if a == b => S::zero(),
                None => S::hundred(),
            };
            best = Some(match best {
                Some(b) => min_of(b, d),
                None => d,
            });
        }
    }
    Ok(AttributeDistance {
        percent: best.ok_or_else(|| Error::MissingEvalSpec(name.to_string()))?,
        warning: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeAggregate<S> {
    pub path: NodePath,
    pub aggregate: S,
    pub reliability: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport<S> {
    pub candidate: String,
    /// Distances per attribute, qualified from the level-0 object.
    pub distances: IndexMap<QualifiedName, S>,
    /// Aggregates of every evaluated sub-object below the root, pre-order.
    pub nodes: Vec<NodeAggregate<S>>,
    pub score: S,
    /// 1-based position after ranking; 0 before.
    pub rank: usize,
    pub warnings: Vec<String>,
}

/// Compares `observed` against the theoretical instance and aggregates the
/// distances into a global score in `[0, 100]`.
pub fn eval_global<S: Scalar>(
    kb: &KnowledgeBase<S>,
    theoretical: &ObjectInstance<S>,
    observed: &ObjectInstance<S>,
    t: &S,
) -> Result<MatchReport<S>> {
    if !is_subtype(kb, &observed.type_name, &theoretical.type_name)?
        && !is_subtype(kb, &theoretical.type_name, &observed.type_name)?
    {
        return Err(Error::TypeMismatch {
            expected: theoretical.type_name.clone(),
            found: observed.type_name.clone(),
        });
    }
    let schema = resolve_effective_schema(kb, &theoretical.type_name)?;
    let spec = schema.global_eval.clone();
    let mut report = MatchReport {
        candidate: theoretical.id.clone(),
        distances: IndexMap::new(),
        nodes: Vec::new(),
        score: S::zero(),
        rank: 0,
        warnings: Vec::new(),
    };
    let ctx = Ctx { kb, t, spec: &spec };
    let root = ctx.aggregate(
        &theoretical.root,
        Some(&observed.root),
        &schema,
        &NodePath::root(),
        &mut report,
    )?;
    let mean = root.ok_or(Error::EmptyOverlap)?;
    report.score = match &spec.aggregation {
        Aggregation::Rules(bands) => bands
            .iter()
            .find(|(bound, _)| mean <= *bound)
            .map(|(_, score)| score.clone())
            .unwrap_or_else(S::hundred),
        _ => clamp_percent(mean),
    };
    Ok(report)
}

struct Ctx<'a, S> {
    kb: &'a KnowledgeBase<S>,
    t: &'a S,
    spec: &'a GlobalEvalSpec<S>,
}

impl<S: Scalar> Ctx<'_, S> {
    fn combine(&self, items: Vec<(S, S)>) -> Option<S> {
        if items.is_empty() {
            return None;
        }
        match &self.spec.aggregation {
            Aggregation::Max => items.into_iter().map(|(v, _)| v).reduce(max_of),
            Aggregation::Min => items.into_iter().map(|(v, _)| v).reduce(min_of),
            Aggregation::WeightedMean | Aggregation::Rules(_) => {
                let total: S = items.iter().fold(S::zero(), |acc, (_, w)| acc + w.clone());
                if total <= S::zero() {
                    return None;
                }
                let sum = items.into_iter().fold(S::zero(), |acc, (v, w)| acc + v * w);
                Some(sum / total)
            }
        }
    }

    fn aggregate(
        &self,
        theo: &SubObjectNode<S>,
        obs: Option<&SubObjectNode<S>>,
        schema: &EffectiveSchema<S>,
        path: &NodePath,
        report: &mut MatchReport<S>,
    ) -> Result<Option<S>> {
        if schema.is_leaf() {
            let distances = eval_internal(schema, theo, obs, self.t, &self.spec.missing)?;
            let mut items = Vec::with_capacity(distances.len());
            for (name, d) in distances {
                if let Some(w) = d.warning {
                    report.warnings.push(w);
                }
                report
                    .distances
                    .insert(QualifiedName::new(path.clone(), name), d.percent.clone());
                items.push((d.percent, S::one()));
            }
            return Ok(self.combine(items));
        }
        let mut items = Vec::new();
        for child in &theo.children {
            let reliability = child.structure_fn.reliability(self.t);
            if reliability <= S::zero() {
                continue;
            }
            let segment = child.segment();
            let child_path = path.child(segment.clone());
            let part = schema
                .part(&child.slot_name)
                .ok_or_else(|| Error::BadPath(child_path.to_string()))?;
            let child_schema = part.schema_for(self.kb, &child.type_name)?;
            let obs_child = obs.and_then(|o| o.child(&segment));
            if let Some(v) = self.aggregate(child, obs_child, &child_schema, &child_path, report)? {
                report.nodes.push(NodeAggregate {
                    path: child_path,
                    aggregate: v.clone(),
                    reliability: reliability.clone(),
                });
                items.push((v, reliability));
            }
        }
        Ok(self.combine(items))
    }
}

/// Evaluates every instance of `type_name` against `observed` and sorts the
/// reports by ascending score, ties broken by instance id. Candidates with no
/// comparable attribute score 100 with a warning; if no candidate is
/// comparable the result is [`Error::EmptyOverlap`].
pub fn rank_candidates<S: Scalar>(
    kb: &KnowledgeBase<S>,
    type_name: &str,
    observed: &ObjectInstance<S>,
    t: &S,
) -> Result<Vec<MatchReport<S>>> {
    let members = class_of(kb, type_name)?;
    if members.is_empty() {
        return Err(Error::NoCandidates(type_name.to_string()));
    }
    let mut reports = Vec::with_capacity(members.len());
    let mut comparable = 0usize;
    for id in &members {
        let theoretical = kb.instance(id)?;
        match eval_global(kb, theoretical, observed, t) {
            Ok(r) => {
                comparable += 1;
                reports.push(r);
            }
            Err(Error::EmptyOverlap) => reports.push(MatchReport {
                candidate: id.clone(),
                distances: IndexMap::new(),
                nodes: Vec::new(),
                score: S::hundred(),
                rank: 0,
                warnings: vec!["no attribute could be compared".into()],
            }),
            Err(e) => return Err(e),
        }
    }
    if comparable == 0 {
        return Err(Error::EmptyOverlap);
    }
    reports.sort_by(|a, b| {
        a.score
            .partial_cmp(&b.score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.candidate.cmp(&b.candidate))
    });
    for (i, r) in reports.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    Ok(reports)
}
