//! JSON derivation traces and variance certificates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::parse::{parse_clause_with, parse_goal_with, parse_subst_with, Dialect, ParseError};
use crate::prenaming::Prenaming;
use crate::sld::{Derivation, DerivationStep};
use crate::variance::{VarianceCertificate, Verdict};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("step {step}, field {field}: {source}")]
    Field {
        step: usize,
        field: &'static str,
        source: ParseError,
    },
    #[error("step {step}: {message}")]
    Inconsistent { step: usize, message: String },
}

/// Terms, goals, clauses and substitutions are stored in their textual form.
#[derive(Debug, Serialize, Deserialize)]
struct DerivationRecord {
    query: String,
    steps: Vec<StepRecord>,
    fresh_counter: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct StepRecord {
    goal: String,
    /// 0-based position of the selected atom in `goal`.
    selected_index: usize,
    input_clause: String,
    mgu: String,
    partial_answer: String,
    resolvent: String,
}

pub fn derivation_to_json(d: &Derivation) -> serde_json::Value {
    let record = DerivationRecord {
        query: d.query.to_string(),
        steps: d
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| StepRecord {
                goal: s.goal_before.to_string(),
                selected_index: s.selected_index,
                input_clause: s.input_clause.to_string(),
                mgu: s.mgu.to_string(),
                partial_answer: d.partial_answer(i + 1).expect("in range").to_string(),
                resolvent: s.goal_after.to_string(),
            })
            .collect(),
        fresh_counter: d.fresh_counter,
    };
    serde_json::to_value(record).expect("records serialize")
}

pub fn print_derivation_json(d: &Derivation) -> String {
    serde_json::to_string_pretty(&derivation_to_json(d)).expect("values serialize")
}

/// Inverse of [`print_derivation_json`]. Resolvents and partial answers are
/// checked against the stored goals and mgus.
pub fn parse_derivation_json(text: &str) -> Result<Derivation, JsonError> {
    derivation_from_json(serde_json::from_str(text)?)
}

pub fn derivation_from_json(value: serde_json::Value) -> Result<Derivation, JsonError> {
    let record: DerivationRecord = serde_json::from_value(value)?;
    let field = |step, field| {
        move |source| JsonError::Field {
            step,
            field,
            source,
        }
    };
    let query = parse_goal_with(&record.query, Dialect::Prolog).map_err(field(0, "query"))?;
    let mut d = Derivation::new(query, record.fresh_counter);
    for (i, s) in record.steps.iter().enumerate() {
        let n = i + 1;
        let step = DerivationStep {
            goal_before: parse_goal_with(&s.goal, Dialect::Prolog).map_err(field(n, "goal"))?,
            selected_index: s.selected_index,
            input_clause: parse_clause_with(&s.input_clause, Dialect::Prolog)
                .map_err(field(n, "input_clause"))?,
            mgu: parse_subst_with(&s.mgu, Dialect::Prolog).map_err(field(n, "mgu"))?,
            goal_after: parse_goal_with(&s.resolvent, Dialect::Prolog)
                .map_err(field(n, "resolvent"))?,
        };
        let inconsistent = |message: String| JsonError::Inconsistent { step: n, message };
        if step.goal_before != *d.current_goal() {
            return Err(inconsistent(format!(
                "goal {} does not match the previous resolvent {}",
                step.goal_before,
                d.current_goal()
            )));
        }
        if step.selected_index >= step.goal_before.len() {
            return Err(inconsistent(format!(
                "selected index {} out of range",
                step.selected_index
            )));
        }
        d.steps.push(step);
        let answer = d.partial_answer(n).expect("in range").to_string();
        if answer != s.partial_answer {
            return Err(inconsistent(format!(
                "partial answer {} does not match the mgus ({answer})",
                s.partial_answer
            )));
        }
    }
    Ok(d)
}

type Bindings = Vec<[String; 2]>;

fn bindings(p: &Prenaming) -> Bindings {
    p.pairs()
        .map(|(x, y)| [x.to_string(), y.to_string()])
        .collect()
}

#[derive(Serialize)]
struct CertificateRecord {
    alpha: Bindings,
    steps: Vec<StepCertificateRecord>,
    #[serde(rename = "final")]
    final_check: Option<FinalRecord>,
    all_true: bool,
}

#[derive(Serialize)]
struct StepCertificateRecord {
    lambda: Bindings,
    beta: Bindings,
    verdicts: serde_json::Map<String, serde_json::Value>,
    witnesses: serde_json::Map<String, serde_json::Value>,
}

#[derive(Serialize)]
struct FinalRecord {
    cas_eq: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

/// `{alpha, steps: [{lambda, beta, verdicts, witnesses}], final, all_true}`;
/// prenamings are lists of `[variable, image]` pairs, `final` is `null`
/// unless a derivation reached `□`, and `witnesses` lists false verdicts only.
pub fn certificate_to_json(cert: &VarianceCertificate) -> serde_json::Value {
    let record = CertificateRecord {
        alpha: bindings(&cert.alpha),
        steps: cert
            .steps
            .iter()
            .map(|s| {
                let mut verdicts = serde_json::Map::new();
                let mut witnesses = serde_json::Map::new();
                for (name, v) in s.verdicts.named() {
                    verdicts.insert(name.into(), v.holds.into());
                    if let Some(w) = &v.witness {
                        witnesses.insert(name.into(), w.clone().into());
                    }
                }
                StepCertificateRecord {
                    lambda: bindings(&s.lambda),
                    beta: bindings(&s.beta),
                    verdicts,
                    witnesses,
                }
            })
            .collect(),
        final_check: cert
            .cas_eq
            .as_ref()
            .map(|Verdict { holds, witness }| FinalRecord {
                cas_eq: *holds,
                witness: witness.clone(),
            }),
        all_true: cert.all_hold(),
    };
    serde_json::to_value(record).expect("records serialize")
}

pub fn print_certificate_json(cert: &VarianceCertificate) -> String {
    serde_json::to_string_pretty(&certificate_to_json(cert)).expect("values serialize")
}
