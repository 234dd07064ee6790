//! Deterministic inputs shared by the benchmarks.

use prenam_core::io::{parse_program, parse_query};
use prenam_core::{Goal, Prenaming, Program, Subst, Term, VarName};

pub const SON: &str = "son(X) :- male(X), child(X,A).\nmale(c). male(d). child(d,a).";
pub const NAT: &str = "nat(0).\nnat(s(A)) :- nat(A).";

pub fn program(text: &str) -> Program {
    parse_program(text).expect("fixture programs parse")
}

pub fn query(text: &str) -> Goal {
    parse_query(text).expect("fixture queries parse")
}

fn var(prefix: &str, i: usize) -> VarName {
    VarName::new(format!("{prefix}{i}"))
}

/// One open chain `x0 ↦ x1 ↦ ... ↦ xn`; its closure adds `xn ↦ x0`.
pub fn chain(n: usize) -> Prenaming {
    let pairs = (0..n).map(|i| (var("X", i), Term::Var(var("X", i + 1))));
    Prenaming::new(Subst::from_bindings(pairs).expect("distinct")).expect("injective")
}

/// The term `f(X0, f(X1, ... f(Xn-1, a)))`.
pub fn nested(prefix: &str, n: usize) -> Term {
    (0..n).rev().fold(Term::constant("a"), |acc, i| {
        Term::compound("f", vec![Term::Var(var(prefix, i)), acc])
    })
}

/// The substitution `(X0/g(X1), X1/g(X2), ...)`.
pub fn ladder(n: usize) -> Subst {
    let pairs = (0..n).map(|i| {
        (
            var("X", i),
            Term::compound("g", vec![Term::Var(var("X", i + 1))]),
        )
    });
    Subst::from_bindings(pairs).expect("distinct")
}
