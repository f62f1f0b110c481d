use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

/// Machine-readable reason attached to a [`Diagnostic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    UnknownElement,
    NameCollision,
    CategoryMismatch,
    InvalidKindForDatatypeEdge,
    Cycle,
    CascadeDelete,
    MissingBridge,
    Checklist,
    NoDisjointness,
    NoDomainOrRange,
    DomainOnly,
    RangeOnly,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::UnknownElement => "unknown-element",
            Code::NameCollision => "name-collision",
            Code::CategoryMismatch => "category-mismatch",
            Code::InvalidKindForDatatypeEdge => "invalid-kind-for-datatype-edge",
            Code::Cycle => "cycle",
            Code::CascadeDelete => "cascade-delete",
            Code::MissingBridge => "missing-bridge",
            Code::Checklist => "checklist",
            Code::NoDisjointness => "no-disjointness",
            Code::NoDomainOrRange => "no-domain-or-range",
            Code::DomainOnly => "domain-family-only",
            Code::RangeOnly => "range-family-only",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    /// Name of the offending element (class, property, module, ...).
    pub element: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(severity: Severity, code: Code, element: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { severity, code, element: element.into(), message: message.into() }
    }

    pub fn error(code: Code, element: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Error, code, element, message)
    }

    pub fn warning(code: Code, element: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Warning, code, element, message)
    }

    pub fn info(code: Code, element: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Info, code, element, message)
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}] {}: {}", self.severity, self.code.as_str(), self.element, self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}
