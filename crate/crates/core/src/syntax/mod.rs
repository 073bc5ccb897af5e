//! Concrete model format: lexer, recursive-descent parser, and canonical
//! pretty-printer. The grammar is documented in docs/format.md.

mod lexer;
mod parser;
mod pretty;

pub use lexer::{Lexer, Token, TokenKind};
pub use parser::parse_model;
pub use pretty::{fmt_expr, fmt_program_string, model_digest, pretty_print};

use serde::Serialize;
use std::fmt;

/// A source file: the text plus where it came from.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub text: String,
    pub origin: String,
}

impl SourceFile {
    pub fn new(text: impl Into<String>, origin: impl Into<String>) -> Self {
        SourceFile {
            text: text.into(),
            origin: origin.into(),
        }
    }

    pub fn inline(text: impl Into<String>) -> Self {
        Self::new(text, "<inline>")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Severity {
    Error,
    Warning,
}

/// A positioned message about the source text.
#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    /// 1-based line.
    pub line: usize,
    /// 1-based column.
    pub column: usize,
    /// The offending source line, for display.
    pub snippet: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        writeln!(f, "{sev}: {} (line {}, column {})", self.message, self.line, self.column)?;
        write!(f, "  | {}", self.snippet)
    }
}

impl Diagnostic {
    pub fn error_at(src: &SourceFile, line: usize, column: usize, message: String) -> Diagnostic {
        let snippet = src
            .text
            .lines()
            .nth(line.saturating_sub(1))
            .unwrap_or("")
            .to_string();
        Diagnostic {
            severity: Severity::Error,
            message,
            line,
            column,
            snippet,
        }
    }
}
