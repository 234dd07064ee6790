//! Lexer and recursive-descent parser for the Prolog subset.

use std::fmt;

use thiserror::Error;

use crate::sld::{Clause, Goal, Program};
use crate::subst::Subst;
use crate::term::{Term, VarName, GENERATED_PREFIX};

/// Position of a token in the source; line and column are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{span}: syntax error: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("{span}: variable {name} uses the reserved prefix {GENERATED_PREFIX}")]
    ReservedVariable { span: SourceSpan, name: String },
}

impl ParseError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            ParseError::Syntax { span, .. } | ParseError::ReservedVariable { span, .. } => span,
        }
    }
}

/// Which identifiers denote variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dialect {
    /// Uppercase or `_`-initial names are variables.
    #[default]
    Prolog,
    /// As `Prolog`, and additionally `u`..`z` optionally followed by digits
    /// (`x`, `w1`, `z12`), the customary names in substitution algebra.
    Algebra,
}

impl Dialect {
    fn is_variable(self, name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_uppercase() || c == '_' => true,
            Some('u'..='z') => self == Dialect::Algebra && chars.all(|c| c.is_ascii_digit()),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Options {
    dialect: Dialect,
    reject_generated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Quoted(String),
    Open,
    Close,
    OpenList,
    CloseList,
    Bar,
    Comma,
    Slash,
    Neck,
    End,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(n) => write!(f, "`{n}`"),
            Tok::Quoted(n) => write!(f, "'{n}'"),
            Tok::Open => f.write_str("`(`"),
            Tok::Close => f.write_str("`)`"),
            Tok::OpenList => f.write_str("`[`"),
            Tok::CloseList => f.write_str("`]`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Neck => f.write_str("`:-`"),
            Tok::End => f.write_str("`.`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
    length: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn tokenize(text: &str, file: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    let error = |line, column, message: String| ParseError::Syntax {
        span: SourceSpan {
            file: file.to_string(),
            line,
            column,
            length: 1,
        },
        message,
    };

    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = match c {
            '(' => Tok::Open,
            ')' => Tok::Close,
            '[' => Tok::OpenList,
            ']' => Tok::CloseList,
            '|' => Tok::Bar,
            ',' => Tok::Comma,
            '/' => Tok::Slash,
            '.' => Tok::End,
            ':' if chars.get(i + 1) == Some(&'-') => {
                i += 1;
                Tok::Neck
            }
            '\'' => {
                let close = chars[i + 1..]
                    .iter()
                    .position(|&d| d == '\'' || d == '\n')
                    .map(|p| p + i + 1)
                    .filter(|&p| chars[p] == '\'')
                    .ok_or_else(|| error(line, column, "unterminated quoted atom".into()))?;
                let name: String = chars[i + 1..close].iter().collect();
                if name.is_empty() {
                    return Err(error(line, column, "empty quoted atom".into()));
                }
                i = close;
                Tok::Quoted(name)
            }
            c if is_name_char(c) => {
                while i + 1 < chars.len() && is_name_char(chars[i + 1]) {
                    i += 1;
                }
                Tok::Name(chars[start..=i].iter().collect())
            }
            c => return Err(error(line, column, format!("unexpected character {c:?}"))),
        };
        i += 1;
        let length = i - start;
        tokens.push(Token {
            tok,
            line,
            column,
            length,
        });
        column += length;
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        column,
        length: 0,
    });
    Ok(tokens)
}

/// Placeholder prefix for `_` before anonymous variables are numbered.
const ANON: &str = "_\u{0}";

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    file: &'a str,
    options: Options,
    anonymous: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &str, file: &'a str, options: Options) -> Result<Parser<'a>, ParseError> {
        Ok(Parser {
            tokens: tokenize(text, file)?,
            pos: 0,
            file,
            options,
            anonymous: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        let t = &self.tokens[self.pos];
        SourceSpan {
            file: self.file.to_string(),
            line: t.line,
            column: t.column,
            length: t.length,
        }
    }

    fn advance(&mut self) -> Tok {
        let tok = self.tokens[self.pos].tok.clone();
        if tok != Tok::Eof {
            self.pos += 1;
        }
        tok
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            span: self.span(),
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        self.syntax(format!("expected {wanted}, found {}", self.peek()))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            self.unexpected(wanted)
        }
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    fn variable(&mut self, name: String) -> Result<VarName, ParseError> {
        if name == "_" {
            self.anonymous += 1;
            return Ok(VarName::new(format!("{ANON}{}", self.anonymous)));
        }
        if self.options.reject_generated && name.starts_with(GENERATED_PREFIX) {
            return Err(ParseError::ReservedVariable {
                span: self.span(),
                name,
            });
        }
        Ok(VarName::new(name))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Name(name) if self.options.dialect.is_variable(&name) => {
                let x = self.variable(name)?;
                self.advance();
                Ok(Term::Var(x))
            }
            Tok::Name(name) | Tok::Quoted(name) => {
                self.advance();
                if *self.peek() == Tok::Open {
                    self.advance();
                    let args = self.sequence(Tok::Close, "`,` or `)`")?;
                    Ok(Term::compound(name, args))
                } else {
                    Ok(Term::constant(name))
                }
            }
            Tok::OpenList => {
                self.advance();
                if *self.peek() == Tok::CloseList {
                    self.advance();
                    return Ok(Term::nil());
                }
                let mut items = vec![self.term()?];
                while *self.peek() == Tok::Comma {
                    self.advance();
                    items.push(self.term()?);
                }
                let tail = if *self.peek() == Tok::Bar {
                    self.advance();
                    self.term()?
                } else {
                    Term::nil()
                };
                self.expect(Tok::CloseList, "`,`, `|` or `]`")?;
                Ok(Term::list(items, tail))
            }
            _ => self.unexpected("a term"),
        }
    }

    /// `t1, ..., tn` followed by `close`; at least one term.
    fn sequence(&mut self, close: Tok, wanted: &str) -> Result<Vec<Term>, ParseError> {
        let mut out = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Comma => {
                    self.advance();
                    out.push(self.term()?);
                }
                t if *t == close => {
                    self.advance();
                    return Ok(out);
                }
                _ => return self.unexpected(wanted),
            }
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        if matches!(self.peek(), Tok::Name(n) if self.options.dialect.is_variable(n)) {
            return self.syntax("a variable cannot be used as an atom");
        }
        match self.peek() {
            Tok::Name(_) | Tok::Quoted(_) => self.term(),
            _ => self.unexpected("an atom"),
        }
    }

    fn body(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut atoms = vec![self.atom()?];
        while *self.peek() == Tok::Comma {
            self.advance();
            atoms.push(self.atom()?);
        }
        Ok(atoms)
    }

    /// `head [:- body]`; the terminating `.` is left to the caller.
    fn clause(&mut self) -> Result<Clause, ParseError> {
        self.anonymous = 0;
        let head = self.atom()?;
        let body = if *self.peek() == Tok::Neck {
            self.advance();
            self.body()?
        } else {
            Vec::new()
        };
        let clause = Clause::new(head, body).expect("heads are parsed as atoms");
        Ok(number_anonymous(clause))
    }
}

/// Replaces each `_` by a distinct `_<n>` that does not occur in the clause.
fn number_anonymous(clause: Clause) -> Clause {
    let used = clause.vars();
    if !used.iter().any(|x| x.as_str().starts_with(ANON)) {
        return clause;
    }
    let mut next = 0;
    let mut fresh = |x: &VarName| {
        if !x.as_str().starts_with(ANON) {
            return Term::Var(x.clone());
        }
        loop {
            let candidate = VarName::new(format!("_{next}"));
            next += 1;
            if !used.contains(&candidate) {
                return Term::Var(candidate);
            }
        }
    };
    let head = clause.head.map_vars(&mut fresh);
    let body = clause.body.iter().map(|b| b.map_vars(&mut fresh)).collect();
    Clause::new(head, body).expect("renaming keeps the head an atom")
}

const INPUT: &str = "<input>";

const PROGRAM: Options = Options {
    dialect: Dialect::Prolog,
    reject_generated: true,
};

/// Parses clauses `h.` and `h :- b1, ..., bn.`; `%` starts a line comment.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    parse_program_in(text, INPUT)
}

/// As [`parse_program`], reporting errors against `file`.
pub fn parse_program_in(text: &str, file: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(text, file, PROGRAM)?;
    let mut clauses = Vec::new();
    while !p.at_eof() {
        clauses.push(p.clause()?);
        p.expect(Tok::End, "`,`, `:-` or `.`")?;
    }
    Ok(Program::new(clauses))
}

/// A single clause, with or without the final `.`.
pub fn parse_clause(text: &str) -> Result<Clause, ParseError> {
    parse_clause_with(text, Dialect::Prolog)
}

pub fn parse_clause_with(text: &str, dialect: Dialect) -> Result<Clause, ParseError> {
    let options = Options {
        dialect,
        reject_generated: false,
    };
    let mut p = Parser::new(text, INPUT, options)?;
    let clause = p.clause()?;
    if *p.peek() == Tok::End {
        p.advance();
    }
    p.expect_eof()?;
    Ok(clause)
}

/// A conjunction `a1, ..., an` with optional final `.`; empty text is `□`.
pub fn parse_query(text: &str) -> Result<Goal, ParseError> {
    parse_goal(text, PROGRAM)
}

/// A goal as printed in traces: generated variables allowed, `□` accepted.
pub fn parse_goal_with(text: &str, dialect: Dialect) -> Result<Goal, ParseError> {
    if text.trim() == "□" {
        return Ok(Goal::empty());
    }
    parse_goal(
        text,
        Options {
            dialect,
            reject_generated: false,
        },
    )
}

fn parse_goal(text: &str, options: Options) -> Result<Goal, ParseError> {
    let mut p = Parser::new(text, INPUT, options)?;
    if p.at_eof() {
        return Ok(Goal::empty());
    }
    let atoms = p.body()?;
    let renamed = number_anonymous(Clause::new(Term::constant("?"), atoms).expect("constant head"));
    if *p.peek() == Tok::End {
        p.advance();
    }
    p.expect_eof()?;
    Ok(Goal::new(renamed.body))
}

/// A term in the [`Dialect::Algebra`] dialect.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_term_with(text, Dialect::Algebra)
}

pub fn parse_term_with(text: &str, dialect: Dialect) -> Result<Term, ParseError> {
    let options = Options {
        dialect,
        reject_generated: false,
    };
    let mut p = Parser::new(text, INPUT, options)?;
    let t = p.term()?;
    p.expect_eof()?;
    if t.vars().iter().any(|x| x.as_str().starts_with(ANON)) {
        let renamed =
            number_anonymous(Clause::new(Term::constant("?"), vec![t]).expect("constant head"));
        return Ok(renamed.body.into_iter().next().expect("one atom"));
    }
    Ok(t)
}

/// A substitution `(x1/t1, ..., xn/tn)` in the [`Dialect::Algebra`] dialect;
/// `()` and `ε` denote the identity. Passive pairs `x/x` are kept.
pub fn parse_subst(text: &str) -> Result<Subst, ParseError> {
    parse_subst_with(text, Dialect::Algebra)
}

pub fn parse_subst_with(text: &str, dialect: Dialect) -> Result<Subst, ParseError> {
    if text.trim() == "ε" {
        return Ok(Subst::identity());
    }
    let options = Options {
        dialect,
        reject_generated: false,
    };
    let mut p = Parser::new(text, INPUT, options)?;
    p.expect(Tok::Open, "`(`")?;
    let mut sigma = Subst::identity();
    if *p.peek() == Tok::Close {
        p.advance();
        p.expect_eof()?;
        return Ok(sigma);
    }
    loop {
        let span = p.span();
        let x = match p.peek().clone() {
            Tok::Name(n) if dialect.is_variable(&n) && n != "_" => {
                p.advance();
                VarName::new(n)
            }
            _ => return p.unexpected("a variable"),
        };
        p.expect(Tok::Slash, "`/`")?;
        let t = p.term()?;
        if t.vars().iter().any(|x| x.as_str().starts_with(ANON)) {
            return Err(ParseError::Syntax {
                span,
                message: "anonymous variables are not allowed in substitutions".into(),
            });
        }
        if let Err(e) = sigma.push(x, t) {
            return Err(ParseError::Syntax {
                span,
                message: e.to_string(),
            });
        }
        match p.peek() {
            Tok::Comma => {
                p.advance();
            }
            Tok::Close => {
                p.advance();
                break;
            }
            _ => return p.unexpected("`,` or `)`"),
        }
    }
    p.expect_eof()?;
    Ok(sigma)
}
