//! Textual syntax, trace printers and JSON serialization.

mod json;
mod parse;

use std::fmt::Write as _;

pub use json::{
    certificate_to_json, derivation_from_json, derivation_to_json, parse_derivation_json,
    print_certificate_json, print_derivation_json, JsonError,
};
pub use parse::{
    parse_clause, parse_clause_with, parse_goal_with, parse_program, parse_program_in, parse_query,
    parse_subst, parse_subst_with, parse_term, parse_term_with, Dialect, ParseError, SourceSpan,
};

use crate::prenaming::Prenaming;
use crate::sld::Derivation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Parses a prenaming written as a substitution, e.g. `(z/y, u/z, x/x)`.
pub fn parse_prenaming(text: &str) -> Result<Prenaming, String> {
    let sigma = parse_subst(text).map_err(|e| e.to_string())?;
    Prenaming::new(sigma).map_err(|e| e.to_string())
}

/// Renders `D` in the chosen format; both renderings are deterministic.
pub fn print_derivation(d: &Derivation, format: Format) -> String {
    match format {
        Format::Text => print_derivation_text(d),
        Format::Json => print_derivation_json(d),
    }
}

/// One line per resolvent, each step annotated `→{K : σ}`:
///
/// ```text
/// son(A)
///   →{son(_G0) :- male(_G0), child(_G0,_G1) : (_G0/A)}
/// male(A), child(A,_G1)
/// ```
///
/// A selected position other than the leftmost is shown as `@ i` (1-based).
pub fn print_derivation_text(d: &Derivation) -> String {
    let mut out = String::new();
    writeln!(out, "{}", d.query).unwrap();
    for step in &d.steps {
        write!(out, "  →{{{} : {}}}", step.input_clause, step.mgu).unwrap();
        if step.selected_index != 0 {
            write!(out, " @ {}", step.selected_index + 1).unwrap();
        }
        writeln!(out).unwrap();
        writeln!(out, "{}", step.goal_after).unwrap();
    }
    out
}
