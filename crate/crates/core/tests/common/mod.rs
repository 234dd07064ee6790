//! Strategies, oracles and law checks shared by the property tests and the
//! acceptance suite.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use prenam_core::{
    check_variant, derive_with, unify, unify_oriented, Clause, ClauseSelection, DeriveConfig,
    Equation, Goal, Prenaming, Program, Subst, Term, Unifier, UnifyFailure, VarName, VarSet,
    VarianceCertificate,
};

/// The variable universe for algebraic properties.
pub const UNIVERSE: [&str; 8] = ["x", "y", "z", "u", "v", "w", "w1", "w2"];

pub fn universe(n: usize) -> Vec<VarName> {
    UNIVERSE[..n].iter().map(|&x| VarName::new(x)).collect()
}

pub fn v(name: &str) -> Term {
    Term::var(name)
}

pub fn c(name: &str) -> Term {
    Term::constant(name)
}

pub fn app(f: &str, args: Vec<Term>) -> Term {
    Term::compound(f, args)
}

/// Terms over `vars` and the signature `a, b, f/1, g/2`.
pub fn term_over(vars: Vec<VarName>, depth: u32) -> BoxedStrategy<Term> {
    let constant = prop_oneof![Just(c("a")), Just(c("b"))];
    let leaf = if vars.is_empty() {
        constant.boxed()
    } else {
        prop_oneof![
            3 => proptest::sample::select(vars).prop_map(Term::Var),
            1 => constant,
        ]
        .boxed()
    };
    leaf.prop_recursive(depth, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| app("f", vec![t])),
            (inner.clone(), inner).prop_map(|(s, t)| app("g", vec![s, t])),
        ]
    })
    .boxed()
}

pub fn term(depth: u32) -> BoxedStrategy<Term> {
    term_over(universe(UNIVERSE.len()), depth)
}

/// A prenaming over the first `n` universe variables: a shuffled core of
/// random size mapped injectively into a shuffled copy of the universe.
/// Passive pairs arise whenever a variable happens to map to itself.
pub fn prenaming_over(n: usize) -> impl Strategy<Value = Prenaming> {
    let u = universe(n);
    (
        Just(u.clone()).prop_shuffle(),
        Just(u).prop_shuffle(),
        0..=n,
    )
        .prop_map(|(core, images, k)| pairs_to_prenaming(core.into_iter().zip(images).take(k)))
}

pub fn prenaming() -> impl Strategy<Value = Prenaming> {
    prenaming_over(UNIVERSE.len())
}

pub fn pairs_to_prenaming(pairs: impl IntoIterator<Item = (VarName, VarName)>) -> Prenaming {
    let sigma = Subst::from_bindings(pairs.into_iter().map(|(x, y)| (x, Term::Var(y)))).unwrap();
    Prenaming::new(sigma).unwrap()
}

/// Two prenamings whose sum is defined: one injective assignment split in two.
pub fn summable_pair() -> impl Strategy<Value = (Prenaming, Prenaming)> {
    let u = universe(UNIVERSE.len());
    let n = u.len();
    (
        Just(u.clone()).prop_shuffle(),
        Just(u).prop_shuffle(),
        0..=n,
        0..=n,
    )
        .prop_map(|(core, images, a, b)| {
            let (i, k) = (a.min(b), a.max(b));
            let pairs: Vec<_> = core.into_iter().zip(images).take(k).collect();
            (
                pairs_to_prenaming(pairs[..i].iter().cloned()),
                pairs_to_prenaming(pairs[i..].iter().cloned()),
            )
        })
}

/// A full renaming: a random permutation of a random subset of the universe.
pub fn renaming() -> impl Strategy<Value = Prenaming> {
    proptest::sample::subsequence(universe(UNIVERSE.len()), 0..=UNIVERSE.len())
        .prop_flat_map(|dom| (Just(dom.clone()), Just(dom).prop_shuffle()))
        .prop_map(|(dom, img)| pairs_to_prenaming(dom.into_iter().zip(img)))
}

/// A substitution binding distinct variables of `vars` to terms over `vars`.
pub fn subst_over(vars: Vec<VarName>) -> BoxedStrategy<Subst> {
    if vars.is_empty() {
        return Just(Subst::identity()).boxed();
    }
    let n = vars.len();
    (
        proptest::sample::subsequence(vars.clone(), 0..=n.min(4)),
        proptest::collection::vec(term_over(vars, 2), n.min(4)),
    )
        .prop_map(|(dom, images)| {
            let bindings = dom
                .into_iter()
                .zip(images)
                .filter(|(x, t)| t.as_var() != Some(x));
            Subst::from_bindings(bindings).unwrap()
        })
        .boxed()
}

pub fn subst() -> BoxedStrategy<Subst> {
    subst_over(universe(UNIVERSE.len()))
}

/// The universe minus `noninj(α)`.
pub fn safe_vars(alpha: &Prenaming) -> Vec<VarName> {
    let noninj = alpha.noninj();
    universe(UNIVERSE.len())
        .into_iter()
        .filter(|x| !noninj.contains(x))
        .collect()
}

/// A prenaming together with a substitution it is safe for.
pub fn safe_prenaming_and_subst() -> impl Strategy<Value = (Prenaming, Subst)> {
    prenaming().prop_flat_map(|alpha| {
        let vars = safe_vars(&alpha);
        (Just(alpha), subst_over(vars))
    })
}

/// A prenaming with two substitutions it is safe for.
pub fn safe_prenaming_and_substs() -> impl Strategy<Value = (Prenaming, Subst, Subst)> {
    prenaming().prop_flat_map(|alpha| {
        let vars = safe_vars(&alpha);
        (Just(alpha), subst_over(vars.clone()), subst_over(vars))
    })
}

/// A prenaming with two terms it is safe for.
pub fn safe_prenaming_and_terms() -> impl Strategy<Value = (Prenaming, Term, Term)> {
    prenaming().prop_flat_map(|alpha| {
        let vars = safe_vars(&alpha);
        (Just(alpha), term_over(vars.clone(), 2), term_over(vars, 2))
    })
}

/// A variable-pure, unrelaxed substitution over the first `n` variables.
pub fn variable_pure_subst(n: usize) -> impl Strategy<Value = Subst> {
    let u = universe(n);
    (
        proptest::sample::subsequence(u.clone(), 0..=n),
        proptest::collection::vec(proptest::sample::select(u), n),
    )
        .prop_map(|(dom, images)| {
            let bindings = dom
                .into_iter()
                .zip(images)
                .filter(|(x, y)| x != y)
                .map(|(x, y)| (x, Term::Var(y)));
            Subst::from_bindings(bindings).unwrap()
        })
}

/// 1 or 2 equations over at most three variables and `a, b, f/1, g/2`.
pub fn small_equations() -> impl Strategy<Value = Vec<Equation>> {
    let vars = universe(3);
    proptest::collection::vec(
        (term_over(vars.clone(), 2), term_over(vars, 1)).prop_map(|(s, t)| Equation::new(s, t)),
        1..=2,
    )
}

/// Equations over the whole universe.
pub fn equations() -> impl Strategy<Value = Vec<Equation>> {
    proptest::collection::vec(
        (term(3), term(3)).prop_map(|(s, t)| Equation::new(s, t)),
        1..=4,
    )
}

/// Ground terms over `a, b, f/1, g/2` of depth at most one.
pub fn ground_depth_one() -> Vec<Term> {
    let consts = [c("a"), c("b")];
    let mut out = consts.to_vec();
    out.extend(consts.iter().map(|t| app("f", vec![t.clone()])));
    for s in &consts {
        for t in &consts {
            out.push(app("g", vec![s.clone(), t.clone()]));
        }
    }
    out
}

pub fn equation_vars(equations: &[Equation]) -> VarSet {
    prenam_core::vars_of_all(equations.iter().flat_map(|e| [&e.left, &e.right]))
}

pub fn rename_equations(rho: &Prenaming, equations: &[Equation]) -> Vec<Equation> {
    equations
        .iter()
        .map(|e| Equation::new(rho.apply(&e.left).unwrap(), rho.apply(&e.right).unwrap()))
        .collect()
}

/// Every variable of `terms`, `α`, `σ` and the universe.
fn check_universe<'a>(extra: impl IntoIterator<Item = &'a VarName>) -> VarSet {
    let mut all: VarSet = universe(UNIVERSE.len()).into_iter().collect();
    all.extend(extra.into_iter().cloned());
    all.insert(VarName::new("fresh"));
    all
}

// ---------------------------------------------------------------------------
// Prenaming and closure laws
// ---------------------------------------------------------------------------

/// closure(α) is a renaming, is relevant, and coincides with α on indom(α).
pub fn law_closure_embedding(alpha: &Prenaming) -> Result<(), TestCaseError> {
    let hat = alpha.closure();
    prop_assert!(
        hat.is_renaming(),
        "closure {hat} of {alpha} is not a renaming"
    );
    let vplus = alpha.relaxed_vars();
    for x in hat.as_subst().vars() {
        prop_assert!(
            vplus.contains(&x),
            "{x} in closure {hat} outside v⁺({alpha})"
        );
    }
    let noninj = alpha.noninj();
    for x in check_universe(&vplus) {
        if !noninj.contains(&x) {
            prop_assert_eq!(alpha.image(&x), hat.image(&x), "at {} for {}", x, alpha);
        }
    }
    // without passive pairs, the closure moves every variable of v⁺(α)
    if !alpha.as_subst().is_relaxed() {
        for x in &vplus {
            prop_assert_ne!(&hat.image(x), x, "fixpoint in closure {} of {}", hat, alpha);
        }
    }
    Ok(())
}

/// closure(α⁻) = closure(α)⁻¹.
pub fn law_closure_inverse(alpha: &Prenaming) -> Result<(), TestCaseError> {
    let left = alpha.inverse().closure();
    let right = alpha.closure().inverse();
    prop_assert!(
        left.as_subst().pointwise_eq(right.as_subst()),
        "closure of inverse {left} vs inverse of closure {right} for {alpha}"
    );
    Ok(())
}

/// Injective ⟺ every variable returns to itself under some power.
pub fn law_cycles(sigma: &Subst) -> Result<(), TestCaseError> {
    let mut vars = sigma.vars();
    vars.insert(VarName::new("fresh"));
    let vars: Vec<VarName> = vars.into_iter().collect();
    let injective = vars.iter().enumerate().all(|(i, x)| {
        vars[i + 1..]
            .iter()
            .all(|y| sigma.image(x) != sigma.image(y))
    });
    let bound = sigma.len() + 1;
    let returns = vars
        .iter()
        .all(|x| (1..=bound).any(|n| sigma.power(n).image(x) == Term::Var(x.clone())));
    prop_assert_eq!(injective, returns, "for {}", sigma);
    Ok(())
}

/// Monotonicity of the injectivity domain under ⊕.
pub fn law_noninj_sum(alpha: &Prenaming, beta: &Prenaming) -> Result<(), TestCaseError> {
    let sum = alpha.extend(beta).unwrap();
    let (na, nb) = (alpha.noninj(), beta.noninj());
    for x in sum.noninj() {
        prop_assert!(
            na.contains(&x) || nb.contains(&x),
            "{x} for {alpha} ⊕ {beta}"
        );
    }
    for x in &na {
        prop_assert!(
            !nb.contains(x),
            "{x} in both noninj sets of {alpha}, {beta}"
        );
    }
    Ok(())
}

/// A summable pair `(α, β)` and a term `α` is complete for.
pub fn complete_extension_case() -> impl Strategy<Value = (Prenaming, Prenaming, Term)> {
    summable_pair().prop_flat_map(|(alpha, beta)| {
        let core: Vec<VarName> = alpha.relaxed_core().iter().cloned().collect();
        (Just(alpha), Just(beta), term_over(core, 2))
    })
}

/// Completeness makes application stable under extension.
pub fn law_complete_extension(
    alpha: &Prenaming,
    beta: &Prenaming,
    t: &Term,
) -> Result<(), TestCaseError> {
    prop_assert!(alpha.is_complete_for(t));
    prop_assert!(alpha.is_safe_for(t));
    let sum = alpha.extend(beta).unwrap();
    prop_assert_eq!(
        sum.apply(t).unwrap(),
        alpha.apply(t).unwrap(),
        "{} ⊕ {} on {}",
        alpha,
        beta,
        t
    );
    Ok(())
}

/// `=`, `∈` and `∥` are stable under a prenaming safe for both terms.
pub fn law_stability(alpha: &Prenaming, s: &Term, t: &Term) -> Result<(), TestCaseError> {
    let (as_, at) = (alpha.apply(s).unwrap(), alpha.apply(t).unwrap());
    prop_assert_eq!(s == t, as_ == at);
    let sub = |a: &Term, b: &Term| b.subterms().any(|x| x == a);
    prop_assert_eq!(sub(s, t), sub(&as_, &at), "∈ for {} {} {}", alpha, s, t);
    prop_assert_eq!(
        prenam_core::var_disjoint(s, t),
        prenam_core::var_disjoint(&as_, &at),
        "∥ for {} {} {}",
        alpha,
        s,
        t
    );
    Ok(())
}

/// pren(s, α(s)) succeeds, is complete for s, cumulative, and maps s onto α(s).
pub fn law_pren_roundtrip(alpha: &Prenaming, s: &Term) -> Result<(), TestCaseError> {
    let Ok(t) = alpha.apply(s) else {
        return Ok(());
    };
    let p =
        prenam_core::pren(s, &t).map_err(|e| TestCaseError::fail(format!("{e} for {s} ↦ {t}")))?;
    prop_assert_eq!(p.apply(s).unwrap(), t.clone());
    prop_assert!(p.is_complete_for(s));
    let (vs, vt) = (s.vars(), t.vars());
    prop_assert!(p.relaxed_core().iter().all(|x| vs.contains(x)));
    prop_assert!(p.relaxed_range().iter().all(|y| vt.contains(y)));
    // least: agrees with α on vars(s)
    for x in &vs {
        prop_assert_eq!(p.image(x), alpha.image(x));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Substitution variants
// ---------------------------------------------------------------------------

/// α(σ)∘α = α∘σ on c⁺(α) ∪ vars(σ) and everywhere outside noninj(α).
pub fn law_variant_commutes(alpha: &Prenaming, sigma: &Subst) -> Result<(), TestCaseError> {
    let image = alpha.variant_of(sigma).unwrap();
    let a = alpha.as_subst();
    let left = image.compose(a);
    let right = a.compose(sigma);
    let mut checked: VarSet = alpha.relaxed_core().clone();
    checked.extend(sigma.vars());
    prop_assert!(
        left.agrees_on(&right, &checked),
        "{image}∘{alpha} vs {alpha}∘{sigma}"
    );
    let noninj = alpha.noninj();
    let outside = check_universe(&alpha.relaxed_vars());
    prop_assert!(
        left.agrees_on(&right, outside.iter().filter(|x| !noninj.contains(*x))),
        "{image}∘{alpha} vs {alpha}∘{sigma} off noninj"
    );
    Ok(())
}

/// α(σ) = closure(α)∘σ∘closure(α)⁻¹.
pub fn law_variant_conjugation(alpha: &Prenaming, sigma: &Subst) -> Result<(), TestCaseError> {
    let image = alpha.variant_of(sigma).unwrap();
    let hat = alpha.closure();
    let conj = hat
        .as_subst()
        .compose(sigma)
        .compose(hat.inverse().as_subst());
    prop_assert!(
        image.pointwise_eq(&conj),
        "{image} vs {conj} for {alpha}, {sigma}"
    );
    Ok(())
}

/// α(σ∘θ) = α(σ)∘α(θ).
pub fn law_variant_compositional(
    alpha: &Prenaming,
    sigma: &Subst,
    theta: &Subst,
) -> Result<(), TestCaseError> {
    let left = alpha.variant_of(&sigma.compose(theta)).unwrap();
    let right = alpha
        .variant_of(sigma)
        .unwrap()
        .compose(&alpha.variant_of(theta).unwrap());
    prop_assert!(
        left.pointwise_eq(&right),
        "{left} vs {right} for {alpha}, {sigma}, {theta}"
    );
    Ok(())
}

/// For a renaming ρ: ρ(σ) = ρ∘σ∘ρ⁻¹.
pub fn law_renaming_conjugation(rho: &Prenaming, sigma: &Subst) -> Result<(), TestCaseError> {
    prop_assert!(rho.is_renaming());
    let image = rho.variant_of(sigma).unwrap();
    let conj = rho
        .as_subst()
        .compose(sigma)
        .compose(rho.inverse().as_subst());
    prop_assert!(
        image.pointwise_eq(&conj),
        "{image} vs {conj} for {rho}, {sigma}"
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// Unification
// ---------------------------------------------------------------------------

/// Soundness, idempotence, relevance and renaming compatibility.
pub fn law_unifier(equations: &[Equation], rho: &Prenaming) -> Result<bool, TestCaseError> {
    let Ok(theta) = unify(equations) else {
        return Ok(false);
    };
    for e in equations {
        prop_assert_eq!(
            theta.apply(&e.left),
            theta.apply(&e.right),
            "unsound {} for {:?}",
            theta,
            equations
        );
    }
    prop_assert!(
        theta.compose(&theta).pointwise_eq(&theta),
        "{theta} is not idempotent"
    );
    let vars = equation_vars(equations);
    for x in theta.vars() {
        prop_assert!(vars.contains(&x), "{x} in {theta} is not relevant");
    }
    // Renaming equivariance, with ρ extended to a renaming over the equations' variables
    let rho = rho.closure();
    let renamed = unify(&rename_equations(&rho, equations))
        .map_err(|e| TestCaseError::fail(format!("renamed equations fail: {e}")))?;
    let expected = rho.variant_of(&theta).unwrap();
    prop_assert_eq!(
        renamed.clone(),
        expected.clone(),
        "renaming equivariance (representation) for {}",
        rho
    );
    prop_assert!(renamed.pointwise_eq(&expected));
    Ok(true)
}

/// Most generality by enumerating ground instances; also checks that
/// failure is genuine on the enumerated instances.
pub fn law_most_general(equations: &[Equation]) -> Result<(), TestCaseError> {
    let vars: Vec<VarName> = equation_vars(equations).into_iter().collect();
    prop_assert!(vars.len() <= 3);
    let ground = ground_depth_one();
    let result = unify(equations);
    let mut index = vec![0usize; vars.len()];
    loop {
        let gamma = Subst::from_bindings(
            vars.iter()
                .cloned()
                .zip(index.iter().map(|&i| ground[i].clone())),
        )
        .unwrap();
        let unifies = equations
            .iter()
            .all(|e| gamma.apply(&e.left) == gamma.apply(&e.right));
        if unifies {
            let theta = result.as_ref().map_err(|e| {
                TestCaseError::fail(format!("{e} but {gamma} unifies {equations:?}"))
            })?;
            // γ is an instance of idempotent θ iff γ∘θ = γ on vars(E)
            prop_assert!(
                gamma.compose(theta).agrees_on(&gamma, &vars),
                "{gamma} is not an instance of {theta}"
            );
        }
        let mut k = 0;
        loop {
            if k == index.len() {
                return Ok(());
            }
            index[k] += 1;
            if index[k] < ground.len() {
                break;
            }
            index[k] = 0;
            k += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Random programs and the variant theorem
// ---------------------------------------------------------------------------

/// Binds the name-larger variable of a variable pair. It depends on names,
/// so it violates renaming compatibility.
#[derive(Debug, Clone, Copy)]
pub struct NameOrdered;

impl Unifier for NameOrdered {
    fn unify(&self, equations: &[Equation]) -> Result<Subst, UnifyFailure> {
        unify_oriented(equations, |x, y| {
            if x > y {
                (x.clone(), y.clone())
            } else {
                (y.clone(), x.clone())
            }
        })
    }
}

pub const PREDICATES: [(&str, usize); 4] = [("p", 1), ("q", 2), ("r", 3), ("s", 0)];
pub const QUERY_VARS: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

fn argument(vars: &'static [&'static str]) -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        3 => proptest::sample::select(vars).prop_map(Term::var),
        1 => prop_oneof![Just(c("a")), Just(c("b"))],
    ];
    leaf.prop_recursive(1, 4, 1, |inner| inner.prop_map(|t| app("f", vec![t])))
        .boxed()
}

fn atom(vars: &'static [&'static str]) -> BoxedStrategy<Term> {
    proptest::sample::select(&PREDICATES[..])
        .prop_flat_map(move |(name, arity)| {
            proptest::collection::vec(argument(vars), arity).prop_map(move |args| app(name, args))
        })
        .boxed()
}

/// Programs of 1 to 8 clauses over `p/1, q/2, r/3, s/0`.
pub fn program() -> impl Strategy<Value = Program> {
    const CLAUSE_VARS: &[&str] = &["X", "Y", "Z"];
    let clause = (
        atom(CLAUSE_VARS),
        proptest::collection::vec(atom(CLAUSE_VARS), 0..=2),
    )
        .prop_map(|(head, body)| Clause::new(head, body).unwrap());
    proptest::collection::vec(clause, 1..=8).prop_map(Program::new)
}

/// Queries of one or two atoms over `A`..`D`.
pub fn query() -> impl Strategy<Value = Goal> {
    proptest::collection::vec(atom(&QUERY_VARS[..4]), 1..=2).prop_map(Goal::new)
}

/// A renaming permuting `A`..`F`.
pub fn query_renaming() -> impl Strategy<Value = Prenaming> {
    let vars: Vec<VarName> = QUERY_VARS.iter().map(|&x| VarName::new(x)).collect();
    Just(vars.clone())
        .prop_shuffle()
        .prop_map(move |img| pairs_to_prenaming(vars.clone().into_iter().zip(img)).closure())
}

pub struct VariantRun {
    pub steps: usize,
    pub certificate: VarianceCertificate,
}

/// Derives `query` first-match (at most 10 steps), replays the clause choices
/// for `ρ(query)` with an offset fresh counter, and certifies the pair.
pub fn variant_run(
    unifier: &impl Unifier,
    program: &Program,
    query: &Goal,
    rho: &Prenaming,
) -> Result<VariantRun, String> {
    let config = DeriveConfig {
        selection: ClauseSelection::FirstMatch,
        max_steps: 10,
        fresh_base: 0,
    };
    let first = derive_with(unifier, program, query, &config).map_err(|e| e.to_string())?;
    let renamed = Goal::new(rho.apply_all(&query.atoms).map_err(|e| e.to_string())?);
    let replay = DeriveConfig {
        selection: ClauseSelection::Replay(first.choices.clone()),
        fresh_base: 1000,
        ..config
    };
    let second = derive_with(unifier, program, &renamed, &replay).map_err(|e| e.to_string())?;
    let certificate =
        check_variant(&first.derivation, &second.derivation).map_err(|e| e.to_string())?;
    for x in query.vars() {
        if certificate.alpha.image(&x) != rho.image(&x) {
            return Err(format!(
                "alpha {} disagrees with {rho} at {x}",
                certificate.alpha
            ));
        }
    }
    Ok(VariantRun {
        steps: first.derivation.len(),
        certificate,
    })
}
