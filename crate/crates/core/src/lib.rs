//! A two-level object model for knowledge bases.
//!
//! At the external level, types are organised by an is-a hierarchy and
//! inherit their members top-down. At the internal level, every object is a
//! tree of sub-objects whose leaf attributes are inherited bottom-up by the
//! whole. Parts can appear and disappear over time through structure
//! functions, objects are compared against reference objects to rank
//! candidates, and named messages trigger internal operations.
//!
//! Everything numeric is generic over [`Scalar`]: `f32`, `f64`, or the exact
//! [`Rational64`]. The aliases below fix the scalar for common use.
//!
//! ```
//! use ckb_core::{dsl, samples, dynamics::snapshot, Kb};
//!
//! let kb: Kb = dsl::parse_kb(samples::COLCHIQUE).unwrap();
//! let plant = kb.instance("colchique1").unwrap();
//! let winter = snapshot(&kb, plant, &15.0).unwrap();
//! assert!(!winter.present_paths().iter().any(|p| p.to_string() == "Fleur"));
//! ```

pub mod dsl;
pub mod dynamics;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod messaging;
pub mod render;
pub mod samples;
pub mod scalar;
pub mod types;

pub use num_rational::Rational64;

pub use dynamics::{
    eval_time_fn, reference_at, snapshot, timeline, timeline_csv, Snapshot, TimeFunction,
};
pub use error::{Error, Result};
pub use evaluation::{
    distance, eval_global, eval_internal, rank_candidates, scale_factor, MatchReport,
};
pub use graph::{
    apply_user_update, compose_instances, inherited_attributes, lookup_attribute,
    validate_instance, zoom, NodePath, ObjectInstance, QualifiedName, SubObjectNode,
};
pub use messaging::{broadcast, metafunction_diagnose, send, Message, Reply, Target};
pub use scalar::Scalar;
pub use types::{
    class_of, compose_types, is_subtype, resolve_effective_schema, AttributeDef, Cardinality,
    Domain, KnowledgeBase, PartSlot, Reference, TypeDef, Value,
};

pub type Kb = KnowledgeBase<f64>;
pub type Instance = ObjectInstance<f64>;
pub type Report = MatchReport<f64>;
pub type Function = TimeFunction<f64>;

pub type ExactKb = KnowledgeBase<Rational64>;
pub type ExactInstance = ObjectInstance<Rational64>;
pub type ExactReport = MatchReport<Rational64>;
pub type ExactFunction = TimeFunction<Rational64>;

pub type KbF32 = KnowledgeBase<f32>;
