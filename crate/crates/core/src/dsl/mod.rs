//! Text format for knowledge bases (`.ckb`): types, instances, time
//! functions, evaluation specs and message handlers.
//!
//! ```text
//! timeunit "day"
//! type Maladie {
//!   levels 0
//!   attr fièvre domain range(34, 44) unit "°C" card 1..1 ref 39
//!   eval global mean missing ignore
//!   on "fièvre?" -> lookup(fièvre)
//! }
//! instance grippe of Maladie { fièvre = 40 }
//! ```

use std::fmt;

mod lexer;
mod lower;
mod parser;
mod serialize;

pub use lexer::{is_ident_continue, is_ident_start};
pub use lower::Observation;
pub use serialize::serialize_kb;

use crate::graph::ObjectInstance;
use crate::scalar::Scalar;
use crate::types::KnowledgeBase;

const DEFAULT_FILE: &str = "<input>";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: String,
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    /// Characters covered on the line.
    pub length: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
    pub hint: Option<String>,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            span,
            hint: None,
        }
    }

    pub fn warning(message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::error(message, span)
        }
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.hint = Some(hint.into());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// `file:line:col: severity: message`, with the hint appended after ` (hint: `.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}: {}",
            self.span.file, self.span.line, self.span.column, self.severity, self.message
        )?;
        if let Some(hint) = &self.hint {
            write!(f, " (hint: {hint})")?;
        }
        Ok(())
    }
}

/// Parses one document into a fresh, validated knowledge base.
pub fn parse_kb<S: Scalar>(text: &str) -> Result<KnowledgeBase<S>, Vec<Diagnostic>> {
    let mut kb = KnowledgeBase::new();
    load_into(&mut kb, DEFAULT_FILE, text)?;
    Ok(kb)
}

/// Adds the types and instances of one document to `kb`. Either everything
/// is added and the warnings are returned, or `kb` is left untouched and the
/// diagnostics (at least one error) are returned.
pub fn load_into<S: Scalar>(
    kb: &mut KnowledgeBase<S>,
    file: &str,
    text: &str,
) -> Result<Vec<Diagnostic>, Vec<Diagnostic>> {
    let doc = parser::parse_document(file, text).map_err(|d| vec![d])?;
    lower::lower_document(kb, doc)
}

/// Parses a single `instance ... of ... { ... }` block describing an observed
/// object, checked against the types of `kb`. The instance is not added.
pub fn parse_observation<S: Scalar>(
    kb: &KnowledgeBase<S>,
    text: &str,
) -> Result<Observation<S>, Vec<Diagnostic>> {
    parse_observation_file(kb, DEFAULT_FILE, text)
}

pub fn parse_observation_file<S: Scalar>(
    kb: &KnowledgeBase<S>,
    file: &str,
    text: &str,
) -> Result<Observation<S>, Vec<Diagnostic>> {
    let doc = parser::parse_document(file, text).map_err(|d| vec![d])?;
    lower::lower_observation(kb, doc, file)
}

/// Convenience for callers that only need the instance.
pub fn observe<S: Scalar>(
    kb: &KnowledgeBase<S>,
    text: &str,
) -> Result<ObjectInstance<S>, Vec<Diagnostic>> {
    parse_observation(kb, text).map(|o| o.instance)
}
