//! First-order terms and variable bookkeeping.

use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;

/// Prefix reserved for variables introduced by standardization-apart.
pub const GENERATED_PREFIX: &str = "_G";

/// Functor of the empty list.
pub const NIL: &str = "[]";
/// Functor of the list pair `[h|t]`.
pub const CONS: &str = ".";

/// A variable, identified by its name text.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarName(Arc<str>);

impl VarName {
    pub fn new(name: impl AsRef<str>) -> VarName {
        let name = name.as_ref();
        assert!(!name.is_empty(), "variable names are non-empty");
        VarName(Arc::from(name))
    }

    /// The `index`-th generated variable, `_G<index>`.
    pub fn generated(index: usize) -> VarName {
        VarName(Arc::from(format!("{GENERATED_PREFIX}{index}")))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True iff the name carries the reserved standardization-apart prefix.
    pub fn is_generated(&self) -> bool {
        self.0.starts_with(GENERATED_PREFIX)
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VarName {
    fn from(name: &str) -> VarName {
        VarName::new(name)
    }
}

/// Insertion-ordered set of variables; iteration follows first occurrence.
pub type VarSet = IndexSet<VarName>;

/// A first-order term: a variable or `f(t1,...,tn)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(VarName),
    Compound { functor: Arc<str>, args: Vec<Term> },
}

impl Term {
    pub fn var(name: impl AsRef<str>) -> Term {
        Term::Var(VarName::new(name))
    }

    pub fn constant(name: impl AsRef<str>) -> Term {
        Term::compound(name, Vec::new())
    }

    pub fn compound(functor: impl AsRef<str>, args: Vec<Term>) -> Term {
        Term::Compound {
            functor: Arc::from(functor.as_ref()),
            args,
        }
    }

    pub fn nil() -> Term {
        Term::constant(NIL)
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::compound(CONS, vec![head, tail])
    }

    /// `[t1,...,tn|tail]`
    pub fn list(items: Vec<Term>, tail: Term) -> Term {
        items
            .into_iter()
            .rev()
            .fold(tail, |acc, item| Term::cons(item, acc))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&VarName> {
        match self {
            Term::Var(v) => Some(v),
            Term::Compound { .. } => None,
        }
    }

    /// `(functor, arity)` of a compound; `None` for variables.
    pub fn shape(&self) -> Option<(&str, usize)> {
        match self {
            Term::Var(_) => None,
            Term::Compound { functor, args } => Some((functor, args.len())),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::Compound { args, .. } => args,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Compound { args, .. } => args.iter().all(Term::is_ground),
        }
    }

    /// Variables of the term in first-occurrence order.
    pub fn vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Appends the variables of `self` to `out`, keeping first-occurrence order.
    pub fn collect_vars(&self, out: &mut VarSet) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.insert(v.clone());
                }
            }
            Term::Compound { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn contains_var(&self, x: &VarName) -> bool {
        match self {
            Term::Var(v) => v == x,
            Term::Compound { args, .. } => args.iter().any(|a| a.contains_var(x)),
        }
    }

    /// Number of function symbols (constants included).
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Compound { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Pre-order iterator over all subterms, `self` first.
    pub fn subterms(&self) -> Subterms<'_> {
        Subterms { stack: vec![self] }
    }

    /// Rebuilds the term, replacing each variable by `f(variable)`.
    pub fn map_vars(&self, f: &mut impl FnMut(&VarName) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::Compound { functor, args } => Term::Compound {
                functor: functor.clone(),
                args: args.iter().map(|a| a.map_vars(f)).collect(),
            },
        }
    }
}

pub struct Subterms<'a> {
    stack: Vec<&'a Term>,
}

impl<'a> Iterator for Subterms<'a> {
    type Item = &'a Term;

    fn next(&mut self) -> Option<&'a Term> {
        let t = self.stack.pop()?;
        self.stack.extend(t.args().iter().rev());
        Some(t)
    }
}

/// Variables of `t` in first-occurrence order.
pub fn vars_of(t: &Term) -> VarSet {
    t.vars()
}

/// Variables of a sequence of terms, first-occurrence order across the sequence.
pub fn vars_of_all<'a>(ts: impl IntoIterator<Item = &'a Term>) -> VarSet {
    let mut out = VarSet::new();
    for t in ts {
        t.collect_vars(&mut out);
    }
    out
}

/// `s ∈ t`: `s` equals `t` or occurs in one of its arguments.
pub fn occurs_in(s: &Term, t: &Term) -> bool {
    if let Term::Var(x) = s {
        return t.contains_var(x);
    }
    t.subterms().any(|sub| sub == s)
}

/// True iff `s` and `t` share no variable.
pub fn var_disjoint(s: &Term, t: &Term) -> bool {
    let vs = s.vars();
    !t.subterms()
        .any(|sub| sub.as_var().is_some_and(|v| vs.contains(v)))
}

fn is_plain_atom(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        Some(c) if c.is_ascii_digit() => chars.all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Compound { functor, args } if args.is_empty() => {
                if &**functor == NIL || is_plain_atom(functor) {
                    f.write_str(functor)
                } else {
                    write!(f, "'{functor}'")
                }
            }
            Term::Compound { functor, args } if &**functor == CONS && args.len() == 2 => {
                f.write_str("[")?;
                write!(f, "{}", args[0])?;
                let mut tail = &args[1];
                loop {
                    match tail {
                        Term::Compound { functor, args }
                            if &**functor == CONS && args.len() == 2 =>
                        {
                            write!(f, ",{}", args[0])?;
                            tail = &args[1];
                        }
                        Term::Compound { functor, args }
                            if &**functor == NIL && args.is_empty() =>
                        {
                            break;
                        }
                        other => {
                            write!(f, "|{other}")?;
                            break;
                        }
                    }
                }
                f.write_str("]")
            }
            Term::Compound { functor, args } => {
                if is_plain_atom(functor) {
                    f.write_str(functor)?;
                } else {
                    write!(f, "'{functor}'")?;
                }
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
