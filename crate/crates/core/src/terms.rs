//! Signatures, terms, equations and quasi-equations.
//!
//! Variables are indexed: `Var(j)` prints as `x<j>`. Terms are plain syntax
//! trees; equality is syntactic. Semantic equality lives in [`crate::classes`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::format;
use core::cmp::Ordering;
use core::fmt;

/// An algebraic language: operation symbols with arities.
///
/// Arity-0 symbols are constants. Symbols are pairwise distinct; the order of
/// the list is the canonical symbol order used for tie-breaking everywhere.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Signature {
    name: String,
    ops: Vec<(String, usize)>,
}

impl Signature {
    pub fn new(
        name: impl Into<String>,
        ops: impl IntoIterator<Item = (impl Into<String>, usize)>,
    ) -> Result<Self, SignatureError> {
        let ops: Vec<(String, usize)> = ops.into_iter().map(|(s, a)| (s.into(), a)).collect();
        let mut seen = BTreeSet::new();
        for (sym, _) in &ops {
            if !seen.insert(sym.clone()) {
                return Err(SignatureError::DuplicateSymbol(sym.clone()));
            }
        }
        Ok(Signature { name: name.into(), ops })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ops(&self) -> &[(String, usize)] {
        &self.ops
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.ops.iter().find(|(s, _)| s == symbol).map(|(_, a)| *a)
    }

    /// Position of a symbol in the canonical symbol order.
    pub fn symbol_index(&self, symbol: &str) -> Option<usize> {
        self.ops.iter().position(|(s, _)| s == symbol)
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.ops.iter().filter(|(_, a)| *a == 0).map(|(s, _)| s.as_str())
    }

    pub fn has_constants(&self) -> bool {
        self.ops.iter().any(|(_, a)| *a == 0)
    }

    /// Same operation symbols with the same arities, in the same order.
    /// The signature name is metadata and is ignored.
    pub fn same_ops(&self, other: &Signature) -> bool {
        self.ops == other.ops
    }

    /// Copy of this signature under a different name.
    pub fn renamed(&self, name: impl Into<String>) -> Signature {
        Signature { name: name.into(), ops: self.ops.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignatureError {
    DuplicateSymbol(String),
}

impl fmt::Display for SignatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureError::DuplicateSymbol(s) => write!(f, "duplicate operation symbol {s}"),
        }
    }
}

/// A term: a variable `x<j>` or an operation applied to argument terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(usize),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(j: usize) -> Term {
        Term::Var(j)
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    pub fn constant(symbol: impl Into<String>) -> Term {
        Term::App(symbol.into(), Vec::new())
    }

    /// The set of variable indices occurring in the term, ascending.
    pub fn variables(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<usize>) {
        match self {
            Term::Var(j) => {
                out.insert(*j);
            }
            Term::App(_, args) => {
                for a in args {
                    a.collect_variables(out);
                }
            }
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Simultaneous substitution. Unmapped variables are left fixed.
    pub fn substitute(&self, map: &BTreeMap<usize, Term>) -> Term {
        match self {
            Term::Var(j) => map.get(j).cloned().unwrap_or(Term::Var(*j)),
            Term::App(sym, args) => {
                Term::App(sym.clone(), args.iter().map(|a| a.substitute(map)).collect())
            }
        }
    }

    /// Checks that every application matches the signature's arities.
    pub fn validate(&self, sig: &Signature) -> Result<(), TermError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(sym, args) => {
                let arity = sig
                    .arity(sym)
                    .ok_or_else(|| TermError::UnknownSymbol(sym.clone()))?;
                if arity != args.len() {
                    return Err(TermError::ArityMismatch {
                        symbol: sym.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                for a in args {
                    a.validate(sig)?;
                }
                Ok(())
            }
        }
    }
}

/// Canonical term order: variables by index, variables before applications,
/// applications by symbol position in `sig` and then by arguments.
pub fn compare_terms(sig: &Signature, a: &Term, b: &Term) -> Ordering {
    match (a, b) {
        (Term::Var(i), Term::Var(j)) => i.cmp(j),
        (Term::Var(_), Term::App(..)) => Ordering::Less,
        (Term::App(..), Term::Var(_)) => Ordering::Greater,
        (Term::App(s, xs), Term::App(t, ys)) => {
            let si = sig.symbol_index(s).unwrap_or(usize::MAX);
            let ti = sig.symbol_index(t).unwrap_or(usize::MAX);
            si.cmp(&ti).then_with(|| {
                for (x, y) in xs.iter().zip(ys.iter()) {
                    let c = compare_terms(sig, x, y);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                xs.len().cmp(&ys.len())
            })
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(j) => write!(f, "x{j}"),
            Term::App(sym, args) if args.is_empty() => write!(f, "{sym}"),
            Term::App(sym, args) => {
                write!(f, "{sym}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermError {
    UnknownSymbol(String),
    ArityMismatch { symbol: String, expected: usize, found: usize },
}

impl fmt::Display for TermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermError::UnknownSymbol(s) => write!(f, "unknown symbol {s}"),
            TermError::ArityMismatch { symbol, expected, found } => {
                write!(f, "{symbol} expects {expected} arguments, got {found}")
            }
        }
    }
}

/// A pair of terms over the same signature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Equation {
        Equation { lhs, rhs }
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        let mut v = self.lhs.variables();
        v.extend(self.rhs.variables());
        v
    }

    pub fn substitute(&self, map: &BTreeMap<usize, Term>) -> Equation {
        Equation { lhs: self.lhs.substitute(map), rhs: self.rhs.substitute(map) }
    }

    pub fn validate(&self, sig: &Signature) -> Result<(), TermError> {
        self.lhs.validate(sig)?;
        self.rhs.validate(sig)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// An implication from finitely many premise equations to a conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiEquation {
    pub premises: Vec<Equation>,
    pub conclusion: Equation,
}

impl QuasiEquation {
    pub fn new(premises: Vec<Equation>, conclusion: Equation) -> QuasiEquation {
        QuasiEquation { premises, conclusion }
    }

    /// An unconditional equation, as a quasi-equation with no premises.
    pub fn identity(conclusion: Equation) -> QuasiEquation {
        QuasiEquation { premises: Vec::new(), conclusion }
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        let mut v = self.conclusion.variables();
        for p in &self.premises {
            v.extend(p.variables());
        }
        v
    }
}

impl fmt::Display for QuasiEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.premises.is_empty() {
            return write!(f, "{}", self.conclusion);
        }
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, " -> {}", self.conclusion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}: {}", self.position, self.message)
    }
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        while self
            .peek()
            .map(|c| c.is_ascii_alphanumeric() || c == b'_')
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected identifier");
        }
        Ok(core::str::from_utf8(&self.input[start..self.pos])
            .expect("ascii")
            .to_string())
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        let at = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {}
            Some(c) => return self.err(format!("unexpected character '{}'", c as char)),
            None => return self.err("unexpected end of input"),
        }
        let name = self.ident()?;
        // Identifiers of the shape x<digits> are always variables.
        if let Some(rest) = name.strip_prefix('x') {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                let j: usize = rest
                    .parse()
                    .map_err(|_| ParseError { position: at, message: "variable index overflow".to_string() })?;
                return Ok(Term::Var(j));
            }
        }
        let arity = match self.sig.arity(&name) {
            Some(a) => a,
            None => return Err(ParseError { position: at, message: format!("unknown symbol {name}") }),
        };
        self.skip_ws();
        let mut args = Vec::new();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            self.skip_ws();
            if self.peek() == Some(b')') {
                self.pos += 1;
            } else {
                loop {
                    args.push(self.term()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                        }
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return self.err("expected ',' or ')'"),
                    }
                }
            }
        }
        if args.len() != arity {
            return Err(ParseError {
                position: at,
                message: format!("{name} expects {arity} arguments, got {}", args.len()),
            });
        }
        Ok(Term::App(name, args))
    }
}

/// Parses a term in the grammar `x<j> | symbol | symbol(t, ..., t)`.
///
/// Round-trips with the canonical printer: `parse(print(t)) == t`.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut p = Parser { input: text.as_bytes(), pos: 0, sig };
    let t = p.term()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return p.err("trailing input");
    }
    Ok(t)
}

/// Parses an equation `term = term`.
pub fn parse_equation(text: &str, sig: &Signature) -> Result<Equation, ParseError> {
    let mut p = Parser { input: text.as_bytes(), pos: 0, sig };
    let lhs = p.term()?;
    p.skip_ws();
    if p.peek() != Some(b'=') {
        return p.err("expected '='");
    }
    p.pos += 1;
    let rhs = p.term()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return p.err("trailing input");
    }
    Ok(Equation { lhs, rhs })
}

/// Shorthand used by tests and the catalog: parse, panicking on error.
pub fn term(text: &str, sig: &Signature) -> Term {
    match parse_term(text, sig) {
        Ok(t) => t,
        Err(e) => panic!("{e} in {text:?}"),
    }
}

/// Shorthand used by tests and the catalog: parse an equation, panicking on error.
pub fn eq(text: &str, sig: &Signature) -> Equation {
    match parse_equation(text, sig) {
        Ok(t) => t,
        Err(e) => panic!("{e} in {text:?}"),
    }
}
