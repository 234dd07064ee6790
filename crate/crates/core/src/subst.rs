//! Substitutions in relaxed core representation.
//!
//! A [`Subst`] is an ordered list of bindings `x/t` with pairwise distinct
//! left-hand variables. Passive pairs `x/x` are allowed; the left-hand
//! variables form the relaxed core `c⁺`, the active ones the core.
//! Derived `PartialEq` compares representations; [`Subst::pointwise_eq`]
//! compares the functions they denote.

use std::fmt;

use thiserror::Error;

use crate::term::{Term, VarName, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("variable {0} is bound twice")]
    DuplicateBinding(VarName),
    #[error("relaxed cores overlap on {0}")]
    OverlappingCores(VarName),
}

#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Subst {
    bindings: Vec<(VarName, Term)>,
}

impl Subst {
    /// The identity substitution ε.
    pub fn identity() -> Subst {
        Subst::default()
    }

    pub fn from_bindings(
        bindings: impl IntoIterator<Item = (VarName, Term)>,
    ) -> Result<Subst, SubstError> {
        let mut out = Subst::identity();
        for (x, t) in bindings {
            out.push(x, t)?;
        }
        Ok(out)
    }

    /// Appends `x/t`; fails if `x` already belongs to the relaxed core.
    pub fn push(&mut self, x: VarName, t: Term) -> Result<(), SubstError> {
        if self.binds(&x) {
            return Err(SubstError::DuplicateBinding(x));
        }
        self.bindings.push((x, t));
        Ok(())
    }

    pub fn bindings(&self) -> &[(VarName, Term)] {
        &self.bindings
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, &Term)> {
        self.bindings.iter().map(|(x, t)| (x, t))
    }

    /// Number of bindings in the representation, passive pairs included.
    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// True iff `x` is in the relaxed core.
    pub fn binds(&self, x: &VarName) -> bool {
        self.bindings.iter().any(|(y, _)| y == x)
    }

    /// The binding of `x` in the representation, if any.
    pub fn get(&self, x: &VarName) -> Option<&Term> {
        self.bindings.iter().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    /// `σ(x)`.
    pub fn image(&self, x: &VarName) -> Term {
        self.get(x).cloned().unwrap_or_else(|| Term::Var(x.clone()))
    }

    pub fn apply(&self, t: &Term) -> Term {
        if self.bindings.is_empty() {
            return t.clone();
        }
        t.map_vars(&mut |x| self.image(x))
    }

    pub fn apply_all(&self, ts: &[Term]) -> Vec<Term> {
        ts.iter().map(|t| self.apply(t)).collect()
    }

    /// `Dom(σ)`: the variables actually moved.
    pub fn core(&self) -> VarSet {
        self.active().map(|(x, _)| x.clone()).collect()
    }

    /// `c⁺(σ)`: every left-hand variable of the representation.
    pub fn relaxed_core(&self) -> VarSet {
        self.bindings.iter().map(|(x, _)| x.clone()).collect()
    }

    /// `Range(σ) = σ(Dom(σ))`.
    pub fn active_range(&self) -> Vec<Term> {
        let mut out: Vec<Term> = Vec::new();
        for (_, t) in self.active() {
            if !out.contains(t) {
                out.push(t.clone());
            }
        }
        out
    }

    /// `r⁺(σ) = σ(c⁺(σ))`, aligned with the representation order.
    pub fn relaxed_range(&self) -> Vec<Term> {
        self.bindings.iter().map(|(_, t)| t.clone()).collect()
    }

    /// `vars(σ) = Dom(σ) ∪ vars(Range(σ))`.
    pub fn vars(&self) -> VarSet {
        let mut out = VarSet::new();
        for (x, t) in self.active() {
            out.insert(x.clone());
            t.collect_vars(&mut out);
        }
        out
    }

    /// `v⁺(σ) = c⁺(σ) ∪ vars(r⁺(σ))`.
    pub fn relaxed_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        for (x, t) in &self.bindings {
            out.insert(x.clone());
            t.collect_vars(&mut out);
        }
        out
    }

    fn active(&self) -> impl Iterator<Item = &(VarName, Term)> {
        self.bindings.iter().filter(|(x, t)| t.as_var() != Some(x))
    }

    /// Drops every passive pair.
    pub fn unrelax(&self) -> Subst {
        Subst {
            bindings: self.active().cloned().collect(),
        }
    }

    pub fn is_relaxed(&self) -> bool {
        self.bindings.iter().any(|(x, t)| t.as_var() == Some(x))
    }

    /// Adds a passive pair for each variable of `w` outside `c⁺(σ)`.
    pub fn relax<'a>(&self, w: impl IntoIterator<Item = &'a VarName>) -> Subst {
        let mut out = self.clone();
        for x in w {
            if !out.binds(x) {
                out.bindings.push((x.clone(), Term::Var(x.clone())));
            }
        }
        out
    }

    /// `σ|W`: behaves as `σ` on `w`, identity elsewhere.
    pub fn restrict(&self, w: &VarSet) -> Subst {
        Subst {
            bindings: self
                .bindings
                .iter()
                .filter(|(x, _)| w.contains(x))
                .cloned()
                .collect(),
        }
    }

    /// `self ∘ sigma`, i.e. apply `sigma` first. The result is unrelaxed.
    pub fn compose(&self, sigma: &Subst) -> Subst {
        let mut bindings = Vec::with_capacity(self.len() + sigma.len());
        for (x, t) in &sigma.bindings {
            let image = self.apply(t);
            if image.as_var() != Some(x) {
                bindings.push((x.clone(), image));
            }
        }
        for (y, s) in &self.bindings {
            if !sigma.binds(y) && s.as_var() != Some(y) {
                bindings.push((y.clone(), s.clone()));
            }
        }
        Subst { bindings }
    }

    /// `σⁿ`; `σ⁰ = ε`.
    pub fn power(&self, n: usize) -> Subst {
        (0..n).fold(Subst::identity(), |acc, _| self.compose(&acc))
    }

    pub fn is_idempotent(&self) -> bool {
        self.compose(self).pointwise_eq(self)
    }

    /// `σ ⊕ θ`: concatenation of two substitutions with disjoint relaxed cores.
    pub fn sum(&self, theta: &Subst) -> Result<Subst, SubstError> {
        if let Some((x, _)) = theta.bindings.iter().find(|(x, _)| self.binds(x)) {
            return Err(SubstError::OverlappingCores(x.clone()));
        }
        let mut bindings = self.bindings.clone();
        bindings.extend(theta.bindings.iter().cloned());
        Ok(Subst { bindings })
    }

    /// `vars(t) ⊆ c⁺(σ)`.
    pub fn is_complete_for(&self, t: &Term) -> bool {
        t.vars().iter().all(|x| self.binds(x))
    }

    /// True iff both denote the same function on variables.
    pub fn pointwise_eq(&self, other: &Subst) -> bool {
        self.bindings
            .iter()
            .chain(other.bindings.iter())
            .all(|(x, _)| self.image(x) == other.image(x))
    }

    /// True iff both agree on every variable of `w`.
    pub fn agrees_on<'a>(&self, other: &Subst, w: impl IntoIterator<Item = &'a VarName>) -> bool {
        w.into_iter().all(|x| self.image(x) == other.image(x))
    }

    /// True iff every image is a variable.
    pub fn is_variable_pure(&self) -> bool {
        self.bindings.iter().all(|(_, t)| t.is_var())
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (x, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}/{t}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
