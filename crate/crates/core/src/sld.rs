//! SLD-resolution with explicit standardization-apart.
//!
//! A [`Derivation`] records every step with the input clause actually used
//! and the mgu, so that its variables, partial answers and resultants can be
//! recomputed from the stored fields. The selection rule is leftmost. Fresh
//! variables are `_G<n>` names drawn from a per-derivation counter.
//!
//! Derivations are not required to be normal (no check prevents renaming a
//! clause that would not need it).

use std::fmt;

use thiserror::Error;

use crate::subst::Subst;
use crate::term::{vars_of_all, Term, VarName, VarSet};
use crate::unify::{Equation, SolvedForm, Unifier, UnifyFailure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SldError {
    #[error("clause head must not be a variable: {0}")]
    VariableHead(Term),
    #[error("selected index {index} is out of range for a goal of {len} atoms")]
    SelectionOutOfRange { index: usize, len: usize },
    #[error("step {index} is out of range for a derivation of {len} steps")]
    StepOutOfRange { index: usize, len: usize },
    #[error("clause {choice} does not exist; the program has {clauses} clauses")]
    ClauseOutOfRange { choice: usize, clauses: usize },
    #[error("the derivation has not reached the empty goal")]
    NotSuccessful,
    #[error("no step: {0}")]
    NoStep(#[from] UnifyFailure),
}

/// A program clause `head :- body`; a fact has an empty body.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub head: Term,
    pub body: Vec<Term>,
}

impl Clause {
    pub fn new(head: Term, body: Vec<Term>) -> Result<Clause, SldError> {
        if head.is_var() {
            return Err(SldError::VariableHead(head));
        }
        Ok(Clause { head, body })
    }

    pub fn fact(head: Term) -> Result<Clause, SldError> {
        Clause::new(head, Vec::new())
    }

    /// Head followed by the body atoms.
    pub fn atoms(&self) -> impl Iterator<Item = &Term> {
        std::iter::once(&self.head).chain(self.body.iter())
    }

    /// Variables in order of appearance, head first.
    pub fn vars(&self) -> VarSet {
        vars_of_all(self.atoms())
    }

    /// The clause as a single term, for prenaming clause pairs.
    pub fn as_term(&self) -> Term {
        Term::compound(":-", self.atoms().cloned().collect())
    }

    pub fn apply(&self, sigma: &Subst) -> Clause {
        Clause {
            head: sigma.apply(&self.head),
            body: sigma.apply_all(&self.body),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            write_conjunction(f, &self.body)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn write_conjunction(f: &mut fmt::Formatter<'_>, atoms: &[Term]) -> fmt::Result {
    for (i, a) in atoms.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Program {
    pub clauses: Vec<Clause>,
}

impl Program {
    pub fn new(clauses: Vec<Clause>) -> Program {
        Program { clauses }
    }

    /// Clause by 1-based number.
    pub fn clause(&self, number: usize) -> Result<&Clause, SldError> {
        number
            .checked_sub(1)
            .and_then(|i| self.clauses.get(i))
            .ok_or(SldError::ClauseOutOfRange {
                choice: number,
                clauses: self.clauses.len(),
            })
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for clause in &self.clauses {
            writeln!(f, "{clause}.")?;
        }
        Ok(())
    }
}

/// A conjunction of atoms; empty is the empty clause □.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Goal {
    pub atoms: Vec<Term>,
}

impl Goal {
    pub fn new(atoms: Vec<Term>) -> Goal {
        Goal { atoms }
    }

    pub fn empty() -> Goal {
        Goal::default()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn vars(&self) -> VarSet {
        vars_of_all(&self.atoms)
    }

    pub fn apply(&self, sigma: &Subst) -> Goal {
        Goal::new(sigma.apply_all(&self.atoms))
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("□");
        }
        write_conjunction(f, &self.atoms)
    }
}

impl fmt::Debug for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// One resolution step `G →{K:σ} H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    pub goal_before: Goal,
    pub selected_index: usize,
    /// The standardized-apart variant actually used.
    pub input_clause: Clause,
    pub mgu: Subst,
    pub goal_after: Goal,
}

impl DerivationStep {
    pub fn selected_atom(&self) -> Option<&Term> {
        self.goal_before.atoms.get(self.selected_index)
    }

    /// `vars(G) ∪ vars(K) ∪ vars(σ) ∪ vars(H)`.
    pub fn vars(&self) -> VarSet {
        let mut out = self.goal_before.vars();
        out.extend(self.input_clause.vars());
        out.extend(self.mgu.vars());
        out.extend(self.goal_after.vars());
        out
    }
}

/// Renames the variables of `clause`, in order of appearance, to the generated
/// variables `_G<counter>`, `_G<counter+1>`, ...; names in `avoid` are skipped.
/// Returns the variant and the next unused counter.
pub fn standardize_apart(clause: &Clause, avoid: &VarSet, counter: usize) -> (Clause, usize) {
    let mut next = counter;
    let mut bindings = Vec::new();
    for x in clause.vars() {
        let fresh = loop {
            let candidate = VarName::generated(next);
            next += 1;
            if !avoid.contains(&candidate) {
                break candidate;
            }
        };
        bindings.push((x, Term::Var(fresh)));
    }
    let renaming = Subst::from_bindings(bindings).expect("clause variables are distinct");
    (clause.apply(&renaming), next)
}

/// Resolves the atom at `index` of `goal` with a fresh variant of `clause`.
///
/// The mgu is computed for the equation `head = selected atom`.
pub fn resolve_step(
    goal: &Goal,
    index: usize,
    clause: &Clause,
    avoid: &VarSet,
    counter: usize,
) -> Result<(DerivationStep, usize), SldError> {
    resolve_step_with(&SolvedForm, goal, index, clause, avoid, counter)
}

pub fn resolve_step_with(
    unifier: &impl Unifier,
    goal: &Goal,
    index: usize,
    clause: &Clause,
    avoid: &VarSet,
    counter: usize,
) -> Result<(DerivationStep, usize), SldError> {
    let selected = goal.atoms.get(index).ok_or(SldError::SelectionOutOfRange {
        index,
        len: goal.len(),
    })?;
    let mut avoid = avoid.clone();
    avoid.extend(goal.vars());
    let (input_clause, next) = standardize_apart(clause, &avoid, counter);
    let mgu = unifier.unify(&[Equation::new(input_clause.head.clone(), selected.clone())])?;
    let spliced: Vec<Term> = goal.atoms[..index]
        .iter()
        .chain(input_clause.body.iter())
        .chain(goal.atoms[index + 1..].iter())
        .cloned()
        .collect();
    let goal_after = Goal::new(mgu.apply_all(&spliced));
    let step = DerivationStep {
        goal_before: goal.clone(),
        selected_index: index,
        input_clause,
        mgu,
        goal_after,
    };
    Ok((step, next))
}

/// `G →{K1:σ1} G1 → ... →{Kn:σn} Gn`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub query: Goal,
    pub steps: Vec<DerivationStep>,
    /// Next generated-variable index.
    pub fresh_counter: usize,
}

impl Derivation {
    pub fn new(query: Goal, fresh_base: usize) -> Derivation {
        Derivation {
            query,
            steps: Vec::new(),
            fresh_counter: fresh_base,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `G_i`; `G_0` is the query.
    pub fn goal_at(&self, i: usize) -> Result<&Goal, SldError> {
        self.check_index(i)?;
        Ok(match i {
            0 => &self.query,
            _ => &self.steps[i - 1].goal_after,
        })
    }

    pub fn current_goal(&self) -> &Goal {
        self.steps.last().map_or(&self.query, |s| &s.goal_after)
    }

    pub fn is_success(&self) -> bool {
        self.current_goal().is_empty()
    }

    fn check_index(&self, i: usize) -> Result<(), SldError> {
        if i > self.steps.len() {
            return Err(SldError::StepOutOfRange {
                index: i,
                len: self.steps.len(),
            });
        }
        Ok(())
    }

    /// Variables of the first `i` steps: goals, mgus and input clauses.
    pub fn vars_up_to(&self, i: usize) -> VarSet {
        let mut out = self.query.vars();
        for step in &self.steps[..i.min(self.steps.len())] {
            out.extend(step.input_clause.vars());
            out.extend(step.mgu.vars());
            out.extend(step.goal_after.vars());
        }
        out
    }

    /// `vars(D)`.
    pub fn vars(&self) -> VarSet {
        self.vars_up_to(self.steps.len())
    }

    /// Resolves the leftmost atom of the current goal with `clause`.
    pub fn extend(&mut self, clause: &Clause) -> Result<(), SldError> {
        self.extend_with(&SolvedForm, clause)
    }

    pub fn extend_with(&mut self, unifier: &impl Unifier, clause: &Clause) -> Result<(), SldError> {
        let avoid = self.vars();
        let (step, next) = resolve_step_with(
            unifier,
            self.current_goal(),
            0,
            clause,
            &avoid,
            self.fresh_counter,
        )?;
        self.steps.push(step);
        self.fresh_counter = next;
        Ok(())
    }

    /// `σi ∘ ... ∘ σ1`; `ε` for `i = 0`.
    pub fn partial_answer(&self, i: usize) -> Result<Subst, SldError> {
        self.check_index(i)?;
        Ok(self.steps[..i]
            .iter()
            .fold(Subst::identity(), |acc, step| step.mgu.compose(&acc)))
    }

    /// The partial answer at the last step.
    pub fn final_partial_answer(&self) -> Subst {
        self.partial_answer(self.steps.len()).expect("in range")
    }

    /// The final partial answer restricted to the query variables.
    pub fn computed_answer(&self) -> Result<Subst, SldError> {
        if !self.is_success() {
            return Err(SldError::NotSuccessful);
        }
        Ok(self.final_partial_answer().restrict(&self.query.vars()))
    }

    /// The resultant of level `i`: `(σi∘...∘σ1)(G) ← G_i`.
    pub fn resultant(&self, i: usize) -> Result<(Goal, Goal), SldError> {
        let answer = self.partial_answer(i)?;
        Ok((self.query.apply(&answer), self.goal_at(i)?.clone()))
    }
}

/// How [`derive`] picks program clauses.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum ClauseSelection {
    /// The first clause, in source order, whose head unifies.
    #[default]
    FirstMatch,
    /// Exactly these clauses, by 1-based number, one per step.
    Replay(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeriveConfig {
    pub selection: ClauseSelection,
    pub max_steps: usize,
    pub fresh_base: usize,
}

impl Default for DeriveConfig {
    fn default() -> DeriveConfig {
        DeriveConfig {
            selection: ClauseSelection::FirstMatch,
            max_steps: 100,
            fresh_base: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeriveStatus {
    /// Reached □.
    Success,
    /// No clause applies to the selected atom; for replays, the chosen clause did not unify.
    NoStep,
    StepLimit,
    /// A replay ran out of choices before reaching □.
    ChoicesExhausted,
}

impl fmt::Display for DeriveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeriveStatus::Success => "success",
            DeriveStatus::NoStep => "no step",
            DeriveStatus::StepLimit => "step limit",
            DeriveStatus::ChoicesExhausted => "choices exhausted",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeriveOutcome {
    pub derivation: Derivation,
    pub status: DeriveStatus,
    /// Program clause numbers used, one per step.
    pub choices: Vec<usize>,
}

/// Builds one leftmost derivation of `query`.
pub fn derive(
    program: &Program,
    query: &Goal,
    config: &DeriveConfig,
) -> Result<DeriveOutcome, SldError> {
    derive_with(&SolvedForm, program, query, config)
}

pub fn derive_with(
    unifier: &impl Unifier,
    program: &Program,
    query: &Goal,
    config: &DeriveConfig,
) -> Result<DeriveOutcome, SldError> {
    if let ClauseSelection::Replay(choices) = &config.selection {
        for &choice in choices {
            program.clause(choice)?;
        }
    }
    let mut derivation = Derivation::new(query.clone(), config.fresh_base);
    let mut used = Vec::new();
    let status = loop {
        if derivation.is_success() {
            break DeriveStatus::Success;
        }
        if derivation.len() >= config.max_steps {
            break DeriveStatus::StepLimit;
        }
        let step = derivation.len();
        match &config.selection {
            ClauseSelection::Replay(choices) => {
                let Some(&choice) = choices.get(step) else {
                    break DeriveStatus::ChoicesExhausted;
                };
                match derivation.extend_with(unifier, program.clause(choice)?) {
                    Ok(()) => used.push(choice),
                    Err(SldError::NoStep(_)) => break DeriveStatus::NoStep,
                    Err(e) => return Err(e),
                }
            }
            ClauseSelection::FirstMatch => {
                let mut applied = false;
                for (i, clause) in program.clauses.iter().enumerate() {
                    match derivation.extend_with(unifier, clause) {
                        Ok(()) => {
                            used.push(i + 1);
                            applied = true;
                            break;
                        }
                        Err(SldError::NoStep(_)) => continue,
                        Err(e) => return Err(e),
                    }
                }
                if !applied {
                    break DeriveStatus::NoStep;
                }
            }
        }
    };
    Ok(DeriveOutcome {
        derivation,
        status,
        choices: used,
    })
}
