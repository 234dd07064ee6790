//! Constructive variance checking for pairs of similar derivations.
//!
//! Starting from `α = pren(G, G′)`, every step extends the current prenaming
//! by `λi = pren(Ki, Ki′)`, giving `βi = α ⊕ λ1 ⊕ ... ⊕ λi`. At each step the
//! checker records whether `βi` maps the resolvent, the mgu, the partial
//! answer and the resultant of the first derivation onto those of the second.
//! Failed equalities are recorded as verdicts, not raised, so a certificate
//! pinpoints the step and the equality that broke.

use std::fmt;

use thiserror::Error;

use crate::prenaming::{pren, pren_seq, Prenaming, PrenamingError};
use crate::sld::{Derivation, DerivationStep, Goal};
use crate::subst::Subst;
use crate::term::{VarName, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarianceError {
    #[error("derivations are not similar: {0}")]
    NotSimilar(SimilarityReport),
    #[error("extension undefined: {0} is already covered")]
    ExtensionUndefined(VarName),
    #[error("verification failed{}: {check} ({witness})", step.map(|s| format!(" at step {s}")).unwrap_or_default())]
    VerificationFailed {
        step: Option<usize>,
        check: String,
        witness: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepSimilarity {
    pub same_position: bool,
    pub clauses_variant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityReport {
    pub queries_variant: bool,
    pub same_length: bool,
    pub steps: Vec<StepSimilarity>,
}

impl SimilarityReport {
    pub fn is_similar(&self) -> bool {
        self.queries_variant
            && self.same_length
            && self
                .steps
                .iter()
                .all(|s| s.same_position && s.clauses_variant)
    }
}

impl fmt::Display for SimilarityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.queries_variant {
            return f.write_str("queries are not variants");
        }
        if !self.same_length {
            return f.write_str("lengths differ");
        }
        for (i, s) in self.steps.iter().enumerate() {
            if !s.same_position {
                return write!(f, "step {}: different atoms selected", i + 1);
            }
            if !s.clauses_variant {
                return write!(f, "step {}: input clauses are not variants", i + 1);
            }
        }
        f.write_str("similar")
    }
}

fn goals_variant(g: &Goal, h: &Goal) -> bool {
    pren_seq(&g.atoms, &h.atoms).is_ok() && pren_seq(&h.atoms, &g.atoms).is_ok()
}

fn clauses_variant(a: &DerivationStep, b: &DerivationStep) -> bool {
    let (s, t) = (a.input_clause.as_term(), b.input_clause.as_term());
    pren(&s, &t).is_ok() && pren(&t, &s).is_ok()
}

/// Compares queries, lengths, selected positions and input clauses.
pub fn check_similar(d: &Derivation, d_prime: &Derivation) -> SimilarityReport {
    SimilarityReport {
        queries_variant: goals_variant(&d.query, &d_prime.query),
        same_length: d.len() == d_prime.len(),
        steps: d
            .steps
            .iter()
            .zip(d_prime.steps.iter())
            .map(|(a, b)| StepSimilarity {
                same_position: a.selected_index == b.selected_index,
                clauses_variant: clauses_variant(a, b),
            })
            .collect(),
    }
}

/// Outcome of one checked equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Verdict {
    fn pass() -> Verdict {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    fn fail(witness: impl Into<String>) -> Verdict {
        Verdict {
            holds: false,
            witness: Some(witness.into()),
        }
    }

    fn check(holds: bool, witness: impl FnOnce() -> String) -> Verdict {
        if holds {
            Verdict::pass()
        } else {
            Verdict::fail(witness())
        }
    }
}

/// Result of propagating variance across one pair of steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Propagation {
    pub lambda: Prenaming,
    pub beta: Prenaming,
    pub complete_h: Verdict,
    pub complete_sigma: Verdict,
    pub cumulative: Verdict,
    pub h_eq: Verdict,
    pub sigma_eq: Verdict,
}

fn precondition(check: &str, witness: String) -> VarianceError {
    VarianceError::VerificationFailed {
        step: None,
        check: check.to_string(),
        witness,
    }
}

fn first_missing<'a>(
    vars: impl IntoIterator<Item = &'a VarName>,
    cover: &VarSet,
) -> Option<VarName> {
    vars.into_iter().find(|x| !cover.contains(*x)).cloned()
}

fn extension_error(e: PrenamingError) -> VarianceError {
    match e {
        PrenamingError::OverlappingCores(x) | PrenamingError::OverlappingRanges(x) => {
            VarianceError::ExtensionUndefined(x)
        }
        other => precondition("extension", other.to_string()),
    }
}

/// Extends `alpha` across the step pair `G →{K:σ} H`, `G′ →{K′:σ′} H′`.
///
/// `prefix` and `prefix_prime` are the variables of the two derivations
/// before these steps. Precondition violations (different selected positions,
/// non-variant input clauses, an irrelevant mgu) are errors; the lemma's
/// conclusions are returned as verdicts.
pub fn propagate(
    alpha: &Prenaming,
    step: &DerivationStep,
    step_prime: &DerivationStep,
    prefix: &VarSet,
    prefix_prime: &VarSet,
) -> Result<Propagation, VarianceError> {
    if step.selected_index != step_prime.selected_index {
        return Err(precondition(
            "same_position",
            format!("{} vs {}", step.selected_index, step_prime.selected_index),
        ));
    }
    let selected = step.selected_atom().ok_or_else(|| {
        precondition(
            "same_position",
            format!("no atom at {}", step.selected_index),
        )
    })?;
    let mut relevant = selected.vars();
    relevant.extend(step.input_clause.head.vars());
    if let Some(x) = first_missing(&step.mgu.vars(), &relevant) {
        return Err(precondition(
            "relevant_sigma",
            format!("{x} in {}", step.mgu),
        ));
    }

    let (k, k_prime) = (
        step.input_clause.as_term(),
        step_prime.input_clause.as_term(),
    );
    let lambda = pren(&k, &k_prime).map_err(|e| precondition("clauses_variant", e.to_string()))?;
    if pren(&k_prime, &k).is_err() {
        return Err(precondition(
            "clauses_variant",
            format!(
                "{} is an instance of {}",
                step_prime.input_clause, step.input_clause
            ),
        ));
    }
    let beta = alpha.extend(&lambda).map_err(extension_error)?;

    let core = beta.relaxed_core();
    let complete_h = match first_missing(&step.goal_after.vars(), core) {
        None => Verdict::pass(),
        Some(x) => Verdict::fail(format!("{x} in {}", step.goal_after)),
    };
    let complete_sigma = match first_missing(&step.mgu.vars(), core) {
        None => Verdict::pass(),
        Some(x) => Verdict::fail(format!("{x} in {}", step.mgu)),
    };

    let mut extended = prefix.clone();
    extended.extend(step.vars());
    let mut extended_prime = prefix_prime.clone();
    extended_prime.extend(step_prime.vars());
    let cumulative = match (
        first_missing(core, &extended),
        first_missing(beta.relaxed_range(), &extended_prime),
    ) {
        (None, None) => Verdict::pass(),
        (Some(x), _) => Verdict::fail(format!("core variable {x} is not in the first derivation")),
        (None, Some(y)) => Verdict::fail(format!(
            "range variable {y} is not in the second derivation"
        )),
    };

    let h_eq = match beta.apply_all(&step.goal_after.atoms) {
        Ok(image) => Verdict::check(image == step_prime.goal_after.atoms, || {
            format!("{} vs {}", Goal::new(image.clone()), step_prime.goal_after)
        }),
        Err(e) => Verdict::fail(e.to_string()),
    };
    let sigma_eq = match beta.variant_of(&step.mgu) {
        Ok(image) => Verdict::check(image.pointwise_eq(&step_prime.mgu), || {
            format!("{image} vs {}", step_prime.mgu)
        }),
        Err(e) => Verdict::fail(e.to_string()),
    };

    Ok(Propagation {
        lambda,
        beta,
        complete_h,
        complete_sigma,
        cumulative,
        h_eq,
        sigma_eq,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepVerdicts {
    pub complete_h: Verdict,
    pub complete_sigma: Verdict,
    pub cumulative: Verdict,
    pub h_eq: Verdict,
    pub sigma_eq: Verdict,
    pub partial_answer_eq: Verdict,
    pub resultant_eq: Verdict,
}

impl StepVerdicts {
    /// Verdicts with their certificate names.
    pub fn named(&self) -> [(&'static str, &Verdict); 7] {
        [
            ("complete_H", &self.complete_h),
            ("complete_sigma", &self.complete_sigma),
            ("cumulative", &self.cumulative),
            ("H_eq", &self.h_eq),
            ("sigma_eq", &self.sigma_eq),
            ("partial_answer_eq", &self.partial_answer_eq),
            ("resultant_eq", &self.resultant_eq),
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.named().iter().all(|(_, v)| v.holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepCertificate {
    pub lambda: Prenaming,
    pub beta: Prenaming,
    pub verdicts: StepVerdicts,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarianceCertificate {
    pub alpha: Prenaming,
    pub steps: Vec<StepCertificate>,
    /// Computed-answer equality; `None` unless a derivation reached □.
    pub cas_eq: Option<Verdict>,
}

impl VarianceCertificate {
    pub fn all_hold(&self) -> bool {
        self.first_failure().is_none()
    }

    /// `(step, check, verdict)` of the first false verdict; step is 1-based,
    /// `None` for the final computed-answer check.
    pub fn first_failure(&self) -> Option<(Option<usize>, &'static str, &Verdict)> {
        for (i, step) in self.steps.iter().enumerate() {
            if let Some((name, v)) = step.verdicts.named().into_iter().find(|(_, v)| !v.holds) {
                return Some((Some(i + 1), name, v));
            }
        }
        match &self.cas_eq {
            Some(v) if !v.holds => Some((None, "cas_eq", v)),
            _ => None,
        }
    }

    /// Converts the first false verdict into an error.
    pub fn verify(&self) -> Result<(), VarianceError> {
        match self.first_failure() {
            None => Ok(()),
            Some((step, check, v)) => Err(VarianceError::VerificationFailed {
                step,
                check: check.to_string(),
                witness: v.witness.clone().unwrap_or_default(),
            }),
        }
    }

    /// `βn`, or `α` for zero-step derivations.
    pub fn final_beta(&self) -> &Prenaming {
        self.steps.last().map_or(&self.alpha, |s| &s.beta)
    }
}

impl fmt::Display for VarianceCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alpha = {}", self.alpha)?;
        for (i, step) in self.steps.iter().enumerate() {
            writeln!(f, "step {}:", i + 1)?;
            writeln!(f, "  lambda = {}", step.lambda)?;
            writeln!(f, "  beta = {}", step.beta)?;
            for (name, v) in step.verdicts.named() {
                match &v.witness {
                    Some(w) => writeln!(f, "  {name}: {} ({w})", v.holds)?,
                    None => writeln!(f, "  {name}: {}", v.holds)?,
                }
            }
        }
        match &self.cas_eq {
            None => writeln!(f, "final: not successful")?,
            Some(Verdict {
                holds,
                witness: None,
            }) => writeln!(f, "final: cas_eq: {holds}")?,
            Some(Verdict {
                holds,
                witness: Some(w),
            }) => writeln!(f, "final: cas_eq: {holds} ({w})")?,
        }
        write!(
            f,
            "verdict: {}",
            if self.all_hold() {
                "all true"
            } else {
                "FAILED"
            }
        )
    }
}

fn subst_variant_verdict(beta: &Prenaming, sigma: &Subst, expected: &Subst) -> Verdict {
    match beta.variant_of(sigma) {
        Ok(image) => Verdict::check(image.pointwise_eq(expected), || {
            format!("{image} vs {expected}")
        }),
        Err(e) => Verdict::fail(e.to_string()),
    }
}

fn goal_variant_verdict(beta: &Prenaming, goal: &Goal, expected: &Goal) -> Result<(), String> {
    let image = beta.apply_all(&goal.atoms).map_err(|e| e.to_string())?;
    if image == expected.atoms {
        Ok(())
    } else {
        Err(format!("{} vs {expected}", Goal::new(image)))
    }
}

/// Certifies that two similar derivations have variant resolvents, mgus,
/// partial answers, resultants and computed answers.
pub fn check_variant(
    d: &Derivation,
    d_prime: &Derivation,
) -> Result<VarianceCertificate, VarianceError> {
    let report = check_similar(d, d_prime);
    if !report.is_similar() {
        return Err(VarianceError::NotSimilar(report));
    }
    let alpha = pren_seq(&d.query.atoms, &d_prime.query.atoms)
        .map_err(|e| precondition("queries_variant", e.to_string()))?;

    let mut beta = alpha.clone();
    let mut steps = Vec::with_capacity(d.len());
    for (i, (step, step_prime)) in d.steps.iter().zip(d_prime.steps.iter()).enumerate() {
        let number = i + 1;
        let prop = propagate(
            &beta,
            step,
            step_prime,
            &d.vars_up_to(i),
            &d_prime.vars_up_to(i),
        )
        .map_err(|e| match e {
            VarianceError::VerificationFailed { check, witness, .. } => {
                VarianceError::VerificationFailed {
                    step: Some(number),
                    check,
                    witness,
                }
            }
            other => other,
        })?;
        beta = prop.beta.clone();

        let answer = d.partial_answer(number).expect("in range");
        let answer_prime = d_prime.partial_answer(number).expect("in range");
        let partial_answer_eq = subst_variant_verdict(&beta, &answer, &answer_prime);

        let (inst, goal) = d.resultant(number).expect("in range");
        let (inst_prime, goal_prime) = d_prime.resultant(number).expect("in range");
        let resultant_eq = match goal_variant_verdict(&beta, &inst, &inst_prime)
            .and_then(|_| goal_variant_verdict(&beta, &goal, &goal_prime))
        {
            Ok(()) => Verdict::pass(),
            Err(w) => Verdict::fail(w),
        };

        steps.push(StepCertificate {
            lambda: prop.lambda,
            beta: prop.beta,
            verdicts: StepVerdicts {
                complete_h: prop.complete_h,
                complete_sigma: prop.complete_sigma,
                cumulative: prop.cumulative,
                h_eq: prop.h_eq,
                sigma_eq: prop.sigma_eq,
                partial_answer_eq,
                resultant_eq,
            },
        });
    }

    let cas_eq = match (d.computed_answer(), d_prime.computed_answer()) {
        (Err(_), Err(_)) => None,
        (Ok(cas), Ok(cas_prime)) => Some(subst_variant_verdict(&beta, &cas, &cas_prime)),
        (Ok(_), Err(_)) => Some(Verdict::fail("only the first derivation succeeded")),
        (Err(_), Ok(_)) => Some(Verdict::fail("only the second derivation succeeded")),
    };

    Ok(VarianceCertificate {
        alpha,
        steps,
        cas_eq,
    })
}
