//! Prenamings: variable-pure substitutions injective on their relaxed core.
//!
//! A prenaming renames exactly the variables it lists, passive pairs
//! included, without having to be a permutation. Outside its injectivity
//! domain (the complement of `noninj(α) = r⁺ ∖ c⁺`) it may alias variables,
//! so term and substitution application are safety-checked.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::subst::{Subst, SubstError};
use crate::term::{Term, VarName, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrenamingError {
    #[error("not variable-pure: {var}/{image}")]
    NotVariablePure { var: VarName, image: Term },
    #[error("not injective: {first} and {second} share an image")]
    NotInjective { first: VarName, second: VarName },
    #[error("not a renaming: the image of the core differs from the core")]
    NotARenaming,
    #[error("relaxed cores overlap on {0}")]
    OverlappingCores(VarName),
    #[error("relaxed ranges overlap on {0}")]
    OverlappingRanges(VarName),
    #[error("prenaming is not safe: {0} lies outside its injectivity domain")]
    Unsafe(VarName),
    #[error(transparent)]
    Subst(#[from] SubstError),
}

/// Which rule of the prenaming computation failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrenFailureKind {
    Alias,
    Instance,
    Clash,
}

impl fmt::Display for PrenFailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrenFailureKind::Alias => "alias",
            PrenFailureKind::Instance => "instance",
            PrenFailureKind::Clash => "clash",
        })
    }
}

/// Failure of [`pren`]: the rule, the equation it fired on, and for `alias`
/// the binding that conflicts with it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct PrenFailure {
    pub kind: PrenFailureKind,
    pub left: Term,
    pub right: Term,
    pub conflict: Option<(VarName, VarName)>,
}

impl fmt::Display for PrenFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}={}", self.kind, self.left, self.right)?;
        if let Some((x, y)) = &self.conflict {
            write!(f, " conflicts {x}/{y}")?;
        }
        f.write_str(")")
    }
}

/// A cycle `(x1,...,xn)` of a finite permutation: `ρ(xi) = xi+1`, `ρ(xn) = x1`.
/// Equality is up to rotation.
#[derive(Clone, Debug, Eq)]
pub struct Cycle(Vec<VarName>);

impl Cycle {
    pub fn new(elements: Vec<VarName>) -> Cycle {
        Cycle(elements)
    }

    pub fn elements(&self) -> &[VarName] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl PartialEq for Cycle {
    fn eq(&self, other: &Cycle) -> bool {
        if self.0.len() != other.0.len() {
            return false;
        }
        if self.0.is_empty() {
            return true;
        }
        match other.0.iter().position(|x| *x == self.0[0]) {
            Some(offset) => {
                (0..self.0.len()).all(|i| self.0[i] == other.0[(i + offset) % other.0.len()])
            }
            None => false,
        }
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// A validated prenaming with cached relaxed core and range.
#[derive(Clone, PartialEq, Eq)]
pub struct Prenaming {
    base: Subst,
    core: VarSet,
    range: VarSet,
}

impl Prenaming {
    /// Validates `sigma` as a prenaming.
    pub fn new(sigma: Subst) -> Result<Prenaming, PrenamingError> {
        let mut core = VarSet::new();
        let mut range = VarSet::new();
        let mut preimage: HashMap<&VarName, &VarName> = HashMap::new();
        for (x, t) in sigma.iter() {
            let y = t.as_var().ok_or_else(|| PrenamingError::NotVariablePure {
                var: x.clone(),
                image: t.clone(),
            })?;
            if let Some(first) = preimage.insert(y, x) {
                return Err(PrenamingError::NotInjective {
                    first: first.clone(),
                    second: x.clone(),
                });
            }
            core.insert(x.clone());
            range.insert(y.clone());
        }
        Ok(Prenaming {
            base: sigma,
            core,
            range,
        })
    }

    pub fn from_pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Prenaming, PrenamingError> {
        let sigma = Subst::from_bindings(
            pairs
                .into_iter()
                .map(|(x, y)| (VarName::new(x), Term::var(y))),
        )?;
        Prenaming::new(sigma)
    }

    /// Builds a prenaming from pairs already known to be distinct and injective.
    fn from_valid(pairs: Vec<(VarName, VarName)>) -> Prenaming {
        let core = pairs.iter().map(|(x, _)| x.clone()).collect();
        let range = pairs.iter().map(|(_, y)| y.clone()).collect();
        let base = Subst::from_bindings(pairs.into_iter().map(|(x, y)| (x, Term::Var(y))))
            .expect("distinct core");
        Prenaming { base, core, range }
    }

    pub fn identity() -> Prenaming {
        Prenaming::from_valid(Vec::new())
    }

    pub fn as_subst(&self) -> &Subst {
        &self.base
    }

    pub fn into_subst(self) -> Subst {
        self.base
    }

    /// `c⁺(α)` in representation order.
    pub fn relaxed_core(&self) -> &VarSet {
        &self.core
    }

    /// `r⁺(α)`, aligned with [`Prenaming::relaxed_core`].
    pub fn relaxed_range(&self) -> &VarSet {
        &self.range
    }

    /// `v⁺(α) = c⁺ ∪ r⁺`.
    pub fn relaxed_vars(&self) -> VarSet {
        self.core.iter().chain(self.range.iter()).cloned().collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&VarName, &VarName)> {
        self.core.iter().zip(self.range.iter())
    }

    pub fn len(&self) -> usize {
        self.core.len()
    }

    pub fn is_empty(&self) -> bool {
        self.core.is_empty()
    }

    /// `α(x)`.
    pub fn image(&self, x: &VarName) -> VarName {
        match self.core.get_index_of(x) {
            Some(i) => self.range[i].clone(),
            None => x.clone(),
        }
    }

    fn preimage_in_core(&self, y: &VarName) -> Option<&VarName> {
        self.range.get_index_of(y).map(|i| &self.core[i])
    }

    /// `ρ(c) = c` on the unrelaxed form.
    pub fn is_renaming(&self) -> bool {
        let active = self.base.unrelax();
        let core = active.core();
        let closed = active
            .iter()
            .all(|(_, t)| t.as_var().is_some_and(|y| core.contains(y)));
        closed
    }

    /// Disjoint cycles of a renaming covering its core; fixpoints are omitted.
    pub fn cycle_decomposition(&self) -> Result<Vec<Cycle>, PrenamingError> {
        if !self.is_renaming() {
            return Err(PrenamingError::NotARenaming);
        }
        let mut seen = VarSet::new();
        let mut cycles = Vec::new();
        for (x, y) in self.pairs() {
            if x == y || seen.contains(x) {
                continue;
            }
            let mut cycle = vec![x.clone()];
            seen.insert(x.clone());
            let mut cur = self.image(x);
            while cur != *x {
                seen.insert(cur.clone());
                let next = self.image(&cur);
                cycle.push(cur);
                cur = next;
            }
            cycles.push(Cycle(cycle));
        }
        Ok(cycles)
    }

    /// The natural relevant renaming embedding `α`.
    ///
    /// Active pairs of `α` are kept; every `x ∈ r⁺ ∖ c⁺` closes its open chain
    /// by mapping back to the chain's start, found by walking preimages until
    /// leaving `r⁺`.
    pub fn closure(&self) -> Prenaming {
        let mut pairs: Vec<(VarName, VarName)> = self
            .pairs()
            .filter(|(x, y)| x != y)
            .map(|(x, y)| (x.clone(), y.clone()))
            .collect();
        for x in self.noninj() {
            let mut start = self.preimage_in_core(&x).expect("x is in r⁺");
            while let Some(prev) = self.preimage_in_core(start) {
                start = prev;
            }
            pairs.push((x, start.clone()));
        }
        Prenaming::from_valid(pairs)
    }

    /// Swaps every pair: `(x1/y1,...,xn/yn) ↦ (y1/x1,...,yn/xn)`.
    pub fn inverse(&self) -> Prenaming {
        Prenaming::from_valid(self.pairs().map(|(x, y)| (y.clone(), x.clone())).collect())
    }

    /// `noninj(α) = r⁺ ∖ c⁺`, the finite complement of the injectivity domain.
    pub fn noninj(&self) -> VarSet {
        self.range
            .iter()
            .filter(|y| !self.core.contains(*y))
            .cloned()
            .collect()
    }

    /// True iff `x ∈ indom(α)`.
    pub fn in_indom(&self, x: &VarName) -> bool {
        self.core.contains(x) || !self.range.contains(x)
    }

    fn unsafe_var<'a>(&self, vars: impl IntoIterator<Item = &'a VarName>) -> Option<VarName> {
        vars.into_iter().find(|x| !self.in_indom(x)).cloned()
    }

    pub fn is_safe_for(&self, t: &Term) -> bool {
        self.unsafe_var(&t.vars()).is_none()
    }

    /// `vars(σ) ⊆ indom(α)`.
    pub fn is_safe_for_subst(&self, sigma: &Subst) -> bool {
        self.unsafe_var(&sigma.vars()).is_none()
    }

    pub fn is_complete_for(&self, t: &Term) -> bool {
        self.base.is_complete_for(t)
    }

    /// `α ⊕ β`; both relaxed cores and both relaxed ranges must be disjoint.
    pub fn extend(&self, beta: &Prenaming) -> Result<Prenaming, PrenamingError> {
        if let Some(x) = beta.core.iter().find(|x| self.core.contains(*x)) {
            return Err(PrenamingError::OverlappingCores(x.clone()));
        }
        if let Some(y) = beta.range.iter().find(|y| self.range.contains(*y)) {
            return Err(PrenamingError::OverlappingRanges(y.clone()));
        }
        let base = self.base.sum(&beta.base)?;
        let mut core = self.core.clone();
        core.extend(beta.core.iter().cloned());
        let mut range = self.range.clone();
        range.extend(beta.range.iter().cloned());
        Ok(Prenaming { base, core, range })
    }

    /// Adds passive pairs for `w ∖ c⁺`; fails if one would alias a range variable.
    pub fn relax<'a>(
        &self,
        w: impl IntoIterator<Item = &'a VarName>,
    ) -> Result<Prenaming, PrenamingError> {
        let mut out = self.clone();
        for x in w {
            if out.core.contains(x) {
                continue;
            }
            if let Some(first) = out.preimage_in_core(x) {
                return Err(PrenamingError::NotInjective {
                    first: first.clone(),
                    second: x.clone(),
                });
            }
            out = out.extend(&Prenaming::from_valid(vec![(x.clone(), x.clone())]))?;
        }
        Ok(out)
    }

    /// Safety-checked `α(t)`; the result is a variant of `t`.
    pub fn apply(&self, t: &Term) -> Result<Term, PrenamingError> {
        if let Some(x) = self.unsafe_var(&t.vars()) {
            return Err(PrenamingError::Unsafe(x));
        }
        Ok(self.base.apply(t))
    }

    pub fn apply_all(&self, ts: &[Term]) -> Result<Vec<Term>, PrenamingError> {
        ts.iter().map(|t| self.apply(t)).collect()
    }

    /// The variant of `sigma` by `α`: `{ α(x)/α(σ(x)) | x ∈ Dom(σ) }`,
    /// in the order of `Dom(σ)` in the representation of `sigma`.
    pub fn variant_of(&self, sigma: &Subst) -> Result<Subst, PrenamingError> {
        if let Some(x) = self.unsafe_var(&sigma.vars()) {
            return Err(PrenamingError::Unsafe(x));
        }
        let sigma = sigma.unrelax();
        let bindings = sigma
            .iter()
            .map(|(x, t)| (self.image(x), self.base.apply(t)));
        // injectivity on vars(σ) keeps the left-hand sides distinct
        Ok(Subst::from_bindings(bindings)?)
    }
}

impl fmt::Display for Prenaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)
    }
}

impl fmt::Debug for Prenaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)
    }
}

/// Validating constructor; see [`Prenaming::new`].
pub fn make_prenaming(sigma: Subst) -> Result<Prenaming, PrenamingError> {
    Prenaming::new(sigma)
}

/// The `W`-epsoid: every variable of `w` mapped to itself.
pub fn epsoid<'a>(w: impl IntoIterator<Item = &'a VarName>) -> Prenaming {
    let mut seen = VarSet::new();
    for x in w {
        seen.insert(x.clone());
    }
    Prenaming::from_valid(seen.into_iter().map(|x| (x.clone(), x)).collect())
}

/// The prenaming of `s` to `t`.
pub fn pren(s: &Term, t: &Term) -> Result<Prenaming, PrenFailure> {
    pren_all(std::iter::once((s, t)))
}

/// The prenaming of a sequence of terms to another sequence of the same length.
pub fn pren_seq(ss: &[Term], ts: &[Term]) -> Result<Prenaming, PrenFailure> {
    if ss.len() != ts.len() {
        return Err(PrenFailure {
            kind: PrenFailureKind::Clash,
            left: Term::compound(",", ss.to_vec()),
            right: Term::compound(",", ts.to_vec()),
            conflict: None,
        });
    }
    pren_all(ss.iter().zip(ts.iter()))
}

fn pren_all<'a>(
    equations: impl Iterator<Item = (&'a Term, &'a Term)>,
) -> Result<Prenaming, PrenFailure> {
    let mut pending: Vec<(&Term, &Term)> = equations.collect();
    pending.reverse();
    let mut pairs: Vec<(VarName, VarName)> = Vec::new();
    let mut by_left: HashMap<VarName, VarName> = HashMap::new();
    let mut by_right: HashMap<VarName, VarName> = HashMap::new();

    let failure = |kind, s: &Term, t: &Term, conflict| PrenFailure {
        kind,
        left: s.clone(),
        right: t.clone(),
        conflict,
    };

    while let Some((s, t)) = pending.pop() {
        match (s, t) {
            (Term::Var(x), Term::Var(y)) => {
                let left = by_left.get(x);
                if left == Some(y) {
                    continue;
                }
                if let Some(z) = left {
                    return Err(failure(
                        PrenFailureKind::Alias,
                        s,
                        t,
                        Some((x.clone(), z.clone())),
                    ));
                }
                if let Some(z) = by_right.get(y) {
                    return Err(failure(
                        PrenFailureKind::Alias,
                        s,
                        t,
                        Some((z.clone(), y.clone())),
                    ));
                }
                by_left.insert(x.clone(), y.clone());
                by_right.insert(y.clone(), x.clone());
                pairs.push((x.clone(), y.clone()));
            }
            (Term::Var(_), _) | (_, Term::Var(_)) => {
                return Err(failure(PrenFailureKind::Instance, s, t, None));
            }
            (
                Term::Compound {
                    functor: f,
                    args: sargs,
                },
                Term::Compound {
                    functor: g,
                    args: targs,
                },
            ) => {
                if f != g || sargs.len() != targs.len() {
                    return Err(failure(PrenFailureKind::Clash, s, t, None));
                }
                pending.extend(sargs.iter().zip(targs.iter()).rev());
            }
        }
    }
    Ok(Prenaming::from_valid(pairs))
}
