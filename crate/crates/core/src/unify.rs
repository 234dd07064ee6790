//! Solved-form unification.
//!
//! Equations are processed first-in first-out with left-to-right
//! decomposition. A variable-variable equation `x = y` binds the left
//! variable. Nothing depends on variable names, so renaming the input
//! renames the output: `unify(ρ(E)) = ρ(unify(E))`.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::subst::Subst;
use crate::term::{vars_of_all, Term, VarName};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub left: Term,
    pub right: Term,
}

impl Equation {
    pub fn new(left: Term, right: Term) -> Equation {
        Equation { left, right }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.left, self.right)
    }
}

impl fmt::Debug for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnifyFailureKind {
    Clash,
    OccursCheck,
}

impl fmt::Display for UnifyFailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnifyFailureKind::Clash => "clash",
            UnifyFailureKind::OccursCheck => "occurs-check",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} ({equation})")]
pub struct UnifyFailure {
    pub kind: UnifyFailureKind,
    pub equation: Equation,
}

/// A deterministic unification algorithm producing one mgu per solvable input.
pub trait Unifier {
    fn unify(&self, equations: &[Equation]) -> Result<Subst, UnifyFailure>;
}

/// The default algorithm; see the module documentation.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolvedForm;

impl Unifier for SolvedForm {
    fn unify(&self, equations: &[Equation]) -> Result<Subst, UnifyFailure> {
        unify(equations)
    }
}

/// Idempotent, relevant mgu of `equations`, bindings ordered by the first
/// appearance of the bound variable in `equations`.
pub fn unify(equations: &[Equation]) -> Result<Subst, UnifyFailure> {
    unify_oriented(equations, |x, y| (x.clone(), y.clone()))
}

/// `unify([s = t])`.
pub fn unify_terms(s: &Term, t: &Term) -> Result<Subst, UnifyFailure> {
    unify(&[Equation::new(s.clone(), t.clone())])
}

/// The same solver with a caller-chosen orientation rule: `orient(x, y)` returns
/// `(bound, image)` for an equation `x = y` between distinct variables.
///
/// Only name-independent rules keep the renaming-compatibility property.
pub fn unify_oriented(
    equations: &[Equation],
    orient: impl Fn(&VarName, &VarName) -> (VarName, VarName),
) -> Result<Subst, UnifyFailure> {
    let mut queue: VecDeque<(Term, Term)> = equations
        .iter()
        .map(|e| (e.left.clone(), e.right.clone()))
        .collect();
    let mut solved: Vec<(VarName, Term)> = Vec::new();

    while let Some((s, t)) = queue.pop_front() {
        if s == t {
            continue;
        }
        let (x, image) = match (s, t) {
            (Term::Var(x), Term::Var(y)) => {
                let (x, y) = orient(&x, &y);
                (x, Term::Var(y))
            }
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if t.contains_var(&x) {
                    return Err(UnifyFailure {
                        kind: UnifyFailureKind::OccursCheck,
                        equation: Equation::new(Term::Var(x), t),
                    });
                }
                (x, t)
            }
            (s, t) => {
                if s.shape() != t.shape() {
                    return Err(UnifyFailure {
                        kind: UnifyFailureKind::Clash,
                        equation: Equation::new(s, t),
                    });
                }
                for pair in s.args().iter().cloned().zip(t.args().iter().cloned()) {
                    queue.push_back(pair);
                }
                continue;
            }
        };
        let elim = Subst::from_bindings([(x.clone(), image.clone())]).expect("single binding");
        for (l, r) in queue.iter_mut() {
            *l = elim.apply(l);
            *r = elim.apply(r);
        }
        for (_, bound) in solved.iter_mut() {
            *bound = elim.apply(bound);
        }
        solved.push((x, image));
    }

    let order = vars_of_all(equations.iter().flat_map(|e| [&e.left, &e.right]));
    solved.sort_by_key(|(x, _)| order.get_index_of(x));
    Ok(Subst::from_bindings(solved).expect("each variable is eliminated once"))
}
