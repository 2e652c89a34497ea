//! Concepts, axioms, ontologies and problem instances over a declared
//! operator set, with a round-tripping text format.
//!
//! The instance grammar is line-oriented; `#` starts a comment:
//!
//! ```text
//! file     := header decl* item*
//! header   := "problem" ("csat"|"tsat"|"tcsat"|"osat"|"ocsat")
//! decl     := "op" NAME "/" INT "=" BITSTRING
//! item     := "axiom" concept "[=" concept
//!           | "axiom" concept "==" concept        # sugar for two GCIs
//!           | "assert" concept "(" NAME ")"
//!           | "assert" NAME "(" NAME "," NAME ")"  # role assertion
//!           | "concept" concept                    # the query, at most once
//! concept  := NAME | NAME "(" concept ("," concept)* ")"
//!           | "some" NAME "." concept | "all" NAME "." concept
//!           | "(" concept ")"
//! ```
//!
//! Nullary operators are written without parentheses (`top`, not `top()`),
//! and a declared nullary operator name always denotes the operator, never
//! an atomic concept. Names beginning with `_` are reserved for symbols
//! introduced by reductions; operator declarations may not use them, while
//! atoms, roles and individuals may (so generated instances round-trip).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::boolfun::{BoolFun, BoolFunError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("duplicate operator name '{0}'")]
    DuplicateOperator(String),
    #[error("operator name '{0}' uses the reserved '_' prefix")]
    ReservedPrefix(String),
    #[error("operator '{0}' is not declared")]
    UndeclaredOperator(String),
    #[error("operator '{name}' has arity {expected}, applied to {got} arguments")]
    ArityMismatch { name: String, expected: usize, got: usize },
    #[error("problem kind {kind} requires a query concept")]
    MissingQuery { kind: ProblemKind },
    #[error("problem kind {kind} does not take a query concept")]
    UnexpectedQuery { kind: ProblemKind },
    #[error("problem kind {kind} does not allow {what}")]
    DisallowedAxioms { kind: ProblemKind, what: &'static str },
    #[error(transparent)]
    BoolFun(#[from] BoolFunError),
}

/// A parse diagnostic with 1-based line and column.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError { line, col, msg: msg.into() }
    }
}

/// The five decision problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProblemKind {
    Csat,
    Tsat,
    Tcsat,
    Osat,
    Ocsat,
}

impl ProblemKind {
    pub fn takes_query(self) -> bool {
        matches!(self, ProblemKind::Csat | ProblemKind::Tcsat | ProblemKind::Ocsat)
    }

    pub fn allows_tbox(self) -> bool {
        !matches!(self, ProblemKind::Csat)
    }

    pub fn allows_abox(self) -> bool {
        matches!(self, ProblemKind::Osat | ProblemKind::Ocsat)
    }

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Csat => "csat",
            ProblemKind::Tsat => "tsat",
            ProblemKind::Tcsat => "tcsat",
            ProblemKind::Osat => "osat",
            ProblemKind::Ocsat => "ocsat",
        }
    }

    pub fn from_name(s: &str) -> Option<ProblemKind> {
        match s {
            "csat" => Some(ProblemKind::Csat),
            "tsat" => Some(ProblemKind::Tsat),
            "tcsat" => Some(ProblemKind::Tcsat),
            "osat" => Some(ProblemKind::Osat),
            "ocsat" => Some(ProblemKind::Ocsat),
            _ => None,
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The declared operator set of an instance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorSet {
    ops: BTreeMap<String, BoolFun>,
}

impl OperatorSet {
    pub fn new() -> OperatorSet {
        OperatorSet::default()
    }

    pub fn from_funs(funs: impl IntoIterator<Item = BoolFun>) -> Result<OperatorSet, SyntaxError> {
        let mut set = OperatorSet::new();
        for f in funs {
            set.declare(f)?;
        }
        Ok(set)
    }

    pub fn declare(&mut self, f: BoolFun) -> Result<(), SyntaxError> {
        if f.name().starts_with('_') {
            return Err(SyntaxError::ReservedPrefix(f.name().to_string()));
        }
        if self.ops.contains_key(f.name()) {
            return Err(SyntaxError::DuplicateOperator(f.name().to_string()));
        }
        self.ops.insert(f.name().to_string(), f);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&BoolFun> {
        self.ops.get(name)
    }

    /// First declared operator with the given arity and table, if any.
    pub fn find_by_table(&self, arity: usize, bits: u64) -> Option<&BoolFun> {
        self.ops.values().find(|f| f.arity() == arity && f.bits() == bits)
    }

    pub fn iter(&self) -> impl Iterator<Item = &BoolFun> {
        self.ops.values()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn funs(&self) -> Vec<BoolFun> {
        self.ops.values().cloned().collect()
    }

    /// Declaration lines in name order.
    pub fn decl_lines(&self) -> String {
        let mut out = String::new();
        for f in self.ops.values() {
            out.push_str(&format!("op {}\n", f));
        }
        out
    }

    /// Parses a standalone operator declaration file.
    pub fn parse_ops(text: &str) -> Result<OperatorSet, ParseError> {
        let mut set = OperatorSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.trim().is_empty() {
                continue;
            }
            let mut toks = Tokenizer::new(line, lineno + 1)?;
            expect_word(&mut toks, "op")?;
            parse_decl(&mut toks, &mut set)?;
            toks.expect_end()?;
        }
        Ok(set)
    }
}

/// A concept description.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Atom(String),
    Apply(String, Vec<Concept>),
    Exists(String, Box<Concept>),
    Forall(String, Box<Concept>),
}

impl Concept {
    pub fn atom(name: impl Into<String>) -> Concept {
        Concept::Atom(name.into())
    }

    pub fn apply(op: impl Into<String>, args: Vec<Concept>) -> Concept {
        Concept::Apply(op.into(), args)
    }

    pub fn exists(role: impl Into<String>, c: Concept) -> Concept {
        Concept::Exists(role.into(), Box::new(c))
    }

    pub fn forall(role: impl Into<String>, c: Concept) -> Concept {
        Concept::Forall(role.into(), Box::new(c))
    }

    pub fn children(&self) -> &[Concept] {
        match self {
            Concept::Atom(_) => &[],
            Concept::Apply(_, args) => args,
            Concept::Exists(_, c) | Concept::Forall(_, c) => std::slice::from_ref(c),
        }
    }

    /// Post-order walk collecting unseen subconcepts, children first.
    fn collect_subconcepts<'a>(&'a self, seen: &mut BTreeSet<&'a Concept>, out: &mut Vec<Concept>) {
        if seen.contains(self) {
            return;
        }
        match self {
            Concept::Atom(_) => {}
            Concept::Apply(_, args) => {
                for a in args {
                    a.collect_subconcepts(seen, out);
                }
            }
            Concept::Exists(_, c) | Concept::Forall(_, c) => c.collect_subconcepts(seen, out),
        }
        if seen.insert(self) {
            out.push(self.clone());
        }
    }

    fn collect_symbols(&self, syms: &mut SymbolSet) {
        match self {
            Concept::Atom(a) => {
                syms.atoms.insert(a.clone());
            }
            Concept::Apply(_, args) => args.iter().for_each(|c| c.collect_symbols(syms)),
            Concept::Exists(r, c) | Concept::Forall(r, c) => {
                syms.roles.insert(r.clone());
                c.collect_symbols(syms);
            }
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Atom(a) => f.write_str(a),
            Concept::Apply(op, args) => {
                if args.is_empty() {
                    f.write_str(op)
                } else {
                    write!(f, "{op}(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")
                }
            }
            Concept::Exists(r, c) => write!(f, "some {r} . {c}"),
            Concept::Forall(r, c) => write!(f, "all {r} . {c}"),
        }
    }
}

/// A general concept inclusion `lhs [= rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gci {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl Gci {
    pub fn new(lhs: Concept, rhs: Concept) -> Gci {
        Gci { lhs, rhs }
    }
}

impl fmt::Display for Gci {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [= {}", self.lhs, self.rhs)
    }
}

/// An ABox assertion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Assertion {
    /// `C(x)`
    Concept(Concept, String),
    /// `R(x, y)`
    Role(String, String, String),
}

/// Any axiom form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Axiom {
    Gci(Gci),
    Assertion(Assertion),
}

/// A TBox plus an ABox.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ontology {
    pub tbox: Vec<Gci>,
    pub abox: Vec<Assertion>,
}

impl Ontology {
    pub fn is_empty(&self) -> bool {
        self.tbox.is_empty() && self.abox.is_empty()
    }

    pub fn axiom_count(&self) -> usize {
        self.tbox.len() + self.abox.len()
    }
}

/// The symbols occurring in an instance, by namespace.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolSet {
    pub atoms: BTreeSet<String>,
    pub roles: BTreeSet<String>,
    pub individuals: BTreeSet<String>,
}

impl SymbolSet {
    pub fn contains(&self, name: &str) -> bool {
        self.atoms.contains(name) || self.roles.contains(name) || self.individuals.contains(name)
    }
}

/// One of the five decision problems, fully instantiated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    pub kind: ProblemKind,
    pub operator_set: OperatorSet,
    pub ontology: Ontology,
    pub query: Option<Concept>,
}

impl ProblemInstance {
    /// Builds and validates an instance: query presence must match the kind,
    /// CSAT takes no ontology, TSAT/TCSAT take no ABox, and every applied
    /// operator must be declared with the right arity.
    pub fn new(
        kind: ProblemKind,
        operator_set: OperatorSet,
        ontology: Ontology,
        query: Option<Concept>,
    ) -> Result<ProblemInstance, SyntaxError> {
        if kind.takes_query() && query.is_none() {
            return Err(SyntaxError::MissingQuery { kind });
        }
        if !kind.takes_query() && query.is_some() {
            return Err(SyntaxError::UnexpectedQuery { kind });
        }
        if !kind.allows_tbox() && !ontology.is_empty() {
            return Err(SyntaxError::DisallowedAxioms { kind, what: "axioms" });
        }
        if !kind.allows_abox() && !ontology.abox.is_empty() {
            return Err(SyntaxError::DisallowedAxioms { kind, what: "assertions" });
        }
        let inst = ProblemInstance { kind, operator_set, ontology, query };
        if let Some(v) = validate_operator_usage(&inst, &inst.operator_set).into_iter().next() {
            return Err(match v {
                UsageViolation::Undeclared { op, .. } => SyntaxError::UndeclaredOperator(op),
                UsageViolation::Arity { op, expected, got, .. } => {
                    SyntaxError::ArityMismatch { name: op, expected, got }
                }
            });
        }
        Ok(inst)
    }

    /// Every concept appearing at the top level: axiom sides, asserted
    /// concepts, and the query.
    pub fn top_level_concepts(&self) -> Vec<&Concept> {
        let mut out = Vec::new();
        for gci in &self.ontology.tbox {
            out.push(&gci.lhs);
            out.push(&gci.rhs);
        }
        for a in &self.ontology.abox {
            if let Assertion::Concept(c, _) = a {
                out.push(c);
            }
        }
        if let Some(q) = &self.query {
            out.push(q);
        }
        out
    }

    /// The atoms, roles and individuals occurring anywhere in the instance.
    pub fn symbols(&self) -> SymbolSet {
        let mut syms = SymbolSet::default();
        for c in self.top_level_concepts() {
            c.collect_symbols(&mut syms);
        }
        for a in &self.ontology.abox {
            match a {
                Assertion::Concept(_, x) => {
                    syms.individuals.insert(x.clone());
                }
                Assertion::Role(r, x, y) => {
                    syms.roles.insert(r.clone());
                    syms.individuals.insert(x.clone());
                    syms.individuals.insert(y.clone());
                }
            }
        }
        syms
    }
}

/// All syntactic subconcepts of the instance, deduplicated, children before
/// parents, in instance order.
pub fn subconcepts(inst: &ProblemInstance) -> Vec<Concept> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for c in inst.top_level_concepts() {
        c.collect_subconcepts(&mut seen, &mut out);
    }
    out
}

/// An operator usage that the given set does not license.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UsageViolation {
    Undeclared { op: String, at: Concept },
    Arity { op: String, expected: usize, got: usize, at: Concept },
}

impl fmt::Display for UsageViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UsageViolation::Undeclared { op, at } => {
                write!(f, "operator '{op}' undeclared in '{at}'")
            }
            UsageViolation::Arity { op, expected, got, at } => {
                write!(f, "operator '{op}' wants {expected} arguments, got {got} in '{at}'")
            }
        }
    }
}

/// Checks that every applied operator is declared in `ops` with a matching
/// arity; an empty result means the instance is clean.
pub fn validate_operator_usage(inst: &ProblemInstance, ops: &OperatorSet) -> Vec<UsageViolation> {
    let mut out = Vec::new();
    for c in inst.top_level_concepts() {
        validate_concept(c, ops, &mut out);
    }
    out
}

fn validate_concept(c: &Concept, ops: &OperatorSet, out: &mut Vec<UsageViolation>) {
    match c {
        Concept::Atom(_) => {}
        Concept::Apply(op, args) => {
            match ops.get(op) {
                None => out.push(UsageViolation::Undeclared { op: op.clone(), at: c.clone() }),
                Some(f) if f.arity() != args.len() => out.push(UsageViolation::Arity {
                    op: op.clone(),
                    expected: f.arity(),
                    got: args.len(),
                    at: c.clone(),
                }),
                Some(_) => {}
            }
            for a in args {
                validate_concept(a, ops, out);
            }
        }
        Concept::Exists(_, inner) | Concept::Forall(_, inner) => {
            validate_concept(inner, ops, out)
        }
    }
}

// ---------------------------------------------------------------------------
// Printing

/// Prints an instance in the file grammar; `parse_instance` returns a
/// structurally equal instance.
pub fn print_instance(inst: &ProblemInstance) -> String {
    let mut out = String::new();
    out.push_str(&format!("problem {}\n", inst.kind));
    out.push_str(&inst.operator_set.decl_lines());
    for gci in &inst.ontology.tbox {
        out.push_str(&format!("axiom {}\n", gci));
    }
    for a in &inst.ontology.abox {
        match a {
            Assertion::Concept(c, x) => out.push_str(&format!("assert {c} ({x})\n")),
            Assertion::Role(r, x, y) => out.push_str(&format!("assert {r}({x}, {y})\n")),
        }
    }
    if let Some(q) = &inst.query {
        out.push_str(&format!("concept {q}\n"));
    }
    out
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Slash,
    Eq,
    Sub,   // [=
    Equiv, // ==
}

struct Tokenizer {
    toks: Vec<(Tok, usize)>, // token plus 1-based column
    pos: usize,
    line: usize,
    end_col: usize,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl Tokenizer {
    fn new(line: &str, lineno: usize) -> Result<Tokenizer, ParseError> {
        let mut toks = Vec::new();
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let col = i + 1;
            let c = chars[i];
            match c {
                ' ' | '\t' | '\r' => i += 1,
                '(' => {
                    toks.push((Tok::LParen, col));
                    i += 1;
                }
                ')' => {
                    toks.push((Tok::RParen, col));
                    i += 1;
                }
                ',' => {
                    toks.push((Tok::Comma, col));
                    i += 1;
                }
                '.' => {
                    toks.push((Tok::Dot, col));
                    i += 1;
                }
                '/' => {
                    toks.push((Tok::Slash, col));
                    i += 1;
                }
                '[' => {
                    if chars.get(i + 1) == Some(&'=') {
                        toks.push((Tok::Sub, col));
                        i += 2;
                    } else {
                        return Err(ParseError::new(lineno, col, "expected '[='"));
                    }
                }
                '=' => {
                    if chars.get(i + 1) == Some(&'=') {
                        toks.push((Tok::Equiv, col));
                        i += 2;
                    } else {
                        toks.push((Tok::Eq, col));
                        i += 1;
                    }
                }
                c if is_name_start(c) || c.is_ascii_digit() => {
                    let start = i;
                    while i < chars.len() && is_name_char(chars[i]) {
                        i += 1;
                    }
                    toks.push((Tok::Name(chars[start..i].iter().collect()), col));
                }
                other => {
                    return Err(ParseError::new(lineno, col, format!("unexpected character '{other}'")));
                }
            }
        }
        Ok(Tokenizer { toks, pos: 0, line: lineno, end_col: chars.len() + 1 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), msg)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn expect_name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Name(_)) => match self.next() {
                Some(Tok::Name(n)) => Ok(n),
                _ => unreachable!(),
            },
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }
}

fn expect_word(toks: &mut Tokenizer, word: &str) -> Result<(), ParseError> {
    match toks.peek() {
        Some(Tok::Name(n)) if n == word => {
            toks.next();
            Ok(())
        }
        _ => Err(toks.err(format!("expected '{word}'"))),
    }
}

fn parse_decl(toks: &mut Tokenizer, ops: &mut OperatorSet) -> Result<(), ParseError> {
    let name_col = toks.col();
    let name = toks.expect_name("operator name")?;
    toks.expect(Tok::Slash, "'/'")?;
    let arity_col = toks.col();
    let arity_str = toks.expect_name("arity")?;
    let arity: usize = arity_str
        .parse()
        .map_err(|_| ParseError::new(toks.line, arity_col, "arity must be an integer"))?;
    toks.expect(Tok::Eq, "'='")?;
    let table_col = toks.col();
    let table = toks.expect_name("truth table")?;
    let f = BoolFun::from_table_str(&name, arity, &table)
        .map_err(|e| ParseError::new(toks.line, table_col, e.to_string()))?;
    ops.declare(f).map_err(|e| ParseError::new(toks.line, name_col, e.to_string()))?;
    Ok(())
}

fn parse_concept(toks: &mut Tokenizer, ops: &OperatorSet) -> Result<Concept, ParseError> {
    match toks.peek() {
        Some(Tok::LParen) => {
            toks.next();
            let c = parse_concept(toks, ops)?;
            toks.expect(Tok::RParen, "')'")?;
            Ok(c)
        }
        Some(Tok::Name(n)) if n == "some" || n == "all" => {
            let quant = toks.expect_name("quantifier").unwrap();
            let role = toks.expect_name("role name")?;
            toks.expect(Tok::Dot, "'.'")?;
            let body = parse_concept(toks, ops)?;
            Ok(if quant == "some" {
                Concept::exists(role, body)
            } else {
                Concept::forall(role, body)
            })
        }
        Some(Tok::Name(_)) => {
            let name_col = toks.col();
            let name = toks.expect_name("name").unwrap();
            if toks.peek() == Some(&Tok::LParen) {
                let op = ops.get(&name).ok_or_else(|| {
                    ParseError::new(toks.line, name_col, format!("operator '{name}' is not declared"))
                })?;
                let expected = op.arity();
                toks.next();
                let mut args = Vec::new();
                if toks.peek() != Some(&Tok::RParen) {
                    loop {
                        args.push(parse_concept(toks, ops)?);
                        if toks.peek() == Some(&Tok::Comma) {
                            toks.next();
                        } else {
                            break;
                        }
                    }
                }
                toks.expect(Tok::RParen, "')'")?;
                if args.len() != expected {
                    return Err(ParseError::new(
                        toks.line,
                        name_col,
                        format!("operator '{name}' wants {expected} arguments, got {}", args.len()),
                    ));
                }
                Ok(Concept::Apply(name, args))
            } else {
                match ops.get(&name) {
                    Some(op) if op.arity() == 0 => Ok(Concept::Apply(name, Vec::new())),
                    Some(op) => Err(ParseError::new(
                        toks.line,
                        name_col,
                        format!("operator '{name}' wants {} arguments, got 0", op.arity()),
                    )),
                    None => Ok(Concept::Atom(name)),
                }
            }
        }
        _ => Err(toks.err("expected a concept")),
    }
}

/// Parses a complete instance file.
pub fn parse_instance(text: &str) -> Result<ProblemInstance, ParseError> {
    #[derive(PartialEq, Eq, PartialOrd, Ord)]
    enum Section {
        Header,
        Decls,
        Items,
    }

    let mut kind: Option<ProblemKind> = None;
    let mut ops = OperatorSet::new();
    let mut ontology = Ontology::default();
    let mut query: Option<Concept> = None;
    let mut section = Section::Header;
    let mut last_line = 0;

    for (lineno0, raw) in text.lines().enumerate() {
        let lineno = lineno0 + 1;
        last_line = lineno;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let mut toks = Tokenizer::new(line, lineno)?;
        let keyword_col = toks.col();
        let keyword = toks.expect_name("a directive")?;
        match keyword.as_str() {
            "problem" => {
                if section > Section::Header {
                    return Err(ParseError::new(lineno, keyword_col, "duplicate 'problem' header"));
                }
                let name_col = toks.col();
                let name = toks.expect_name("problem kind")?;
                kind = Some(ProblemKind::from_name(&name).ok_or_else(|| {
                    ParseError::new(lineno, name_col, format!("unknown problem kind '{name}'"))
                })?);
                section = Section::Decls;
            }
            "op" => {
                if section != Section::Decls {
                    return Err(ParseError::new(
                        lineno,
                        keyword_col,
                        if section == Section::Header {
                            "expected 'problem' header before declarations"
                        } else {
                            "operator declarations must precede axioms"
                        },
                    ));
                }
                parse_decl(&mut toks, &mut ops)?;
            }
            "axiom" => {
                if section == Section::Header {
                    return Err(ParseError::new(lineno, keyword_col, "expected 'problem' header first"));
                }
                section = Section::Items;
                let lhs = parse_concept(&mut toks, &ops)?;
                match toks.next() {
                    Some(Tok::Sub) => {
                        let rhs = parse_concept(&mut toks, &ops)?;
                        ontology.tbox.push(Gci::new(lhs, rhs));
                    }
                    Some(Tok::Equiv) => {
                        let rhs = parse_concept(&mut toks, &ops)?;
                        ontology.tbox.push(Gci::new(lhs.clone(), rhs.clone()));
                        ontology.tbox.push(Gci::new(rhs, lhs));
                    }
                    _ => return Err(toks.err("expected '[=' or '=='")),
                }
            }
            "assert" => {
                if section == Section::Header {
                    return Err(ParseError::new(lineno, keyword_col, "expected 'problem' header first"));
                }
                section = Section::Items;
                ontology.abox.push(parse_assertion(&mut toks, &ops)?);
            }
            "concept" => {
                if section == Section::Header {
                    return Err(ParseError::new(lineno, keyword_col, "expected 'problem' header first"));
                }
                section = Section::Items;
                if query.is_some() {
                    return Err(ParseError::new(lineno, keyword_col, "duplicate query"));
                }
                query = Some(parse_concept(&mut toks, &ops)?);
            }
            other => {
                return Err(ParseError::new(
                    lineno,
                    keyword_col,
                    format!("unknown directive '{other}'"),
                ));
            }
        }
        toks.expect_end()?;
    }

    let kind = kind.ok_or_else(|| ParseError::new(last_line, 1, "missing 'problem' header"))?;
    ProblemInstance::new(kind, ops, ontology, query)
        .map_err(|e| ParseError::new(last_line, 1, e.to_string()))
}

fn parse_assertion(toks: &mut Tokenizer, ops: &OperatorSet) -> Result<Assertion, ParseError> {
    // Role assertion: exactly `NAME ( NAME , NAME )` with an undeclared head.
    let rest = &toks.toks[toks.pos..];
    if rest.len() == 6 {
        if let (Tok::Name(head), Tok::LParen, Tok::Name(x), Tok::Comma, Tok::Name(y), Tok::RParen) =
            (&rest[0].0, &rest[1].0, &rest[2].0, &rest[3].0, &rest[4].0, &rest[5].0)
        {
            if ops.get(head).is_none() {
                let a = Assertion::Role(head.clone(), x.clone(), y.clone());
                toks.pos += 6;
                return Ok(a);
            }
        }
    }
    // Concept assertion: split off the trailing `( NAME )` and parse the
    // prefix as a complete concept. This keeps `assert top (x)` and
    // `assert some R . A (x)` unambiguous.
    let n = toks.toks.len();
    let individual = match (n >= toks.pos + 4)
        .then(|| (&toks.toks[n - 3].0, &toks.toks[n - 2].0, &toks.toks[n - 1].0))
    {
        Some((Tok::LParen, Tok::Name(x), Tok::RParen)) => x.clone(),
        _ => return Err(toks.err("expected an assertion of the form C (x) or R(x, y)")),
    };
    let mut prefix = Tokenizer {
        toks: toks.toks[toks.pos..n - 3].to_vec(),
        pos: 0,
        line: toks.line,
        end_col: toks.toks[n - 3].1,
    };
    let c = parse_concept(&mut prefix, ops)?;
    prefix.expect_end()?;
    toks.pos = n;
    Ok(Assertion::Concept(c, individual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ops_and() -> OperatorSet {
        OperatorSet::from_funs([BoolFun::and()]).unwrap()
    }

    #[test]
    fn parse_csat_example() {
        let inst = parse_instance("problem csat\nop and/2 = 0001\nconcept and(A, some R. B)").unwrap();
        assert_eq!(inst.kind, ProblemKind::Csat);
        assert_eq!(
            inst.query,
            Some(Concept::apply(
                "and",
                vec![Concept::atom("A"), Concept::exists("R", Concept::atom("B"))]
            ))
        );
        assert!(inst.ontology.is_empty());
    }

    #[test]
    fn parse_tsat_example() {
        let inst = parse_instance("problem tsat\nop not/1 = 10\naxiom not(A) [= A").unwrap();
        assert_eq!(inst.kind, ProblemKind::Tsat);
        assert_eq!(
            inst.ontology.tbox,
            vec![Gci::new(Concept::apply("not", vec![Concept::atom("A")]), Concept::atom("A"))]
        );
    }

    #[test]
    fn parse_arity_mismatch_table() {
        let err = parse_instance("problem tsat\nop and/2 = 001").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.msg.contains("4 entries"));
    }

    #[test]
    fn parse_undeclared_operator() {
        let err = parse_instance("problem csat\nconcept and(A, B)").unwrap_err();
        assert!(err.msg.contains("not declared"));
    }

    #[test]
    fn parse_application_arity_mismatch() {
        let err = parse_instance("problem csat\nop and/2 = 0001\nconcept and(A)").unwrap_err();
        assert!(err.msg.contains("wants 2 arguments"));
    }

    #[test]
    fn parse_reserved_prefix_decl() {
        let err = parse_instance("problem csat\nop _and/2 = 0001\nconcept A").unwrap_err();
        assert!(err.msg.contains("reserved"));
    }

    #[test]
    fn parse_query_kind_mismatch() {
        let err = parse_instance("problem tsat\nconcept A").unwrap_err();
        assert!(err.msg.contains("does not take a query"));
        let err = parse_instance("problem tcsat\nop and/2 = 0001").unwrap_err();
        assert!(err.msg.contains("requires a query"));
    }

    #[test]
    fn parse_nullary_without_parens() {
        let inst = parse_instance("problem csat\nop top/0 = 1\nconcept top").unwrap();
        assert_eq!(inst.query, Some(Concept::apply("top", vec![])));
    }

    #[test]
    fn parse_equiv_sugar() {
        let inst = parse_instance("problem tsat\nop top/0 = 1\naxiom A == top").unwrap();
        assert_eq!(inst.ontology.tbox.len(), 2);
        assert_eq!(inst.ontology.tbox[0].lhs, Concept::atom("A"));
        assert_eq!(inst.ontology.tbox[1].rhs, Concept::atom("A"));
    }

    #[test]
    fn parse_assertions() {
        let inst = parse_instance(
            "problem osat\nop and/2 = 0001\nassert and(A, B) (x)\nassert R(x, y)\nassert A(x)",
        )
        .unwrap();
        assert_eq!(inst.ontology.abox.len(), 3);
        assert_eq!(
            inst.ontology.abox[1],
            Assertion::Role("R".into(), "x".into(), "y".into())
        );
        assert_eq!(
            inst.ontology.abox[2],
            Assertion::Concept(Concept::atom("A"), "x".into())
        );
    }

    #[test]
    fn parse_comments_and_blanks() {
        let inst =
            parse_instance("# header\nproblem csat  # kind\n\nop and/2 = 0001\nconcept and(A, A)")
                .unwrap();
        assert_eq!(inst.kind, ProblemKind::Csat);
    }

    #[test]
    fn round_trip_examples() {
        let sources = [
            "problem csat\nop and/2 = 0001\nconcept and(A, some R. B)",
            "problem tsat\nop not/1 = 10\naxiom not(A) [= A",
            "problem osat\nop and/2 = 0001\nassert and(A, B) (x)\nassert R(x, y)",
            "problem ocsat\nop top/0 = 1\naxiom top [= some _S . _d0\nassert _A(_a)\nconcept _A",
        ];
        for src in sources {
            let inst = parse_instance(src).unwrap();
            let printed = print_instance(&inst);
            let reparsed = parse_instance(&printed).unwrap();
            assert_eq!(inst, reparsed, "round trip failed for:\n{printed}");
        }
    }

    #[test]
    fn generated_symbols_round_trip() {
        let inst = parse_instance("problem tsat\nop bot/0 = 0\naxiom _x1' [= all _P11 . _x1'").unwrap();
        let printed = print_instance(&inst);
        assert!(printed.contains("_x1'"));
        assert_eq!(parse_instance(&printed).unwrap(), inst);
    }

    #[test]
    fn nested_apply_prints_with_parens() {
        let c = Concept::apply(
            "and",
            vec![Concept::apply("and", vec![Concept::atom("A"), Concept::atom("B")]), Concept::atom("C")],
        );
        assert_eq!(c.to_string(), "and(and(A, B), C)");
    }

    #[test]
    fn subconcepts_order() {
        let inst = parse_instance("problem csat\nop and/2 = 0001\nconcept and(A, some R. B)").unwrap();
        let subs = subconcepts(&inst);
        assert_eq!(
            subs,
            vec![
                Concept::atom("A"),
                Concept::atom("B"),
                Concept::exists("R", Concept::atom("B")),
                Concept::apply("and", vec![Concept::atom("A"), Concept::exists("R", Concept::atom("B"))]),
            ]
        );
    }

    #[test]
    fn subconcepts_tbox() {
        let inst = parse_instance("problem tsat\nop not/1 = 10\naxiom not(A) [= A").unwrap();
        let subs = subconcepts(&inst);
        assert_eq!(subs, vec![Concept::atom("A"), Concept::apply("not", vec![Concept::atom("A")])]);
    }

    #[test]
    fn subconcepts_empty() {
        let inst = parse_instance("problem tsat").unwrap();
        assert!(subconcepts(&inst).is_empty());
    }

    #[test]
    fn subconcepts_closed_under_children() {
        let inst = parse_instance(
            "problem tcsat\nop and/2 = 0001\nop not/1 = 10\naxiom and(A, not(B)) [= some R . and(A, B)\nconcept not(and(A, B))",
        )
        .unwrap();
        let subs = subconcepts(&inst);
        for (i, c) in subs.iter().enumerate() {
            for child in c.children() {
                let j = subs.iter().position(|x| x == child).unwrap();
                assert!(j < i, "child {child} listed after parent {c}");
            }
        }
    }

    #[test]
    fn usage_validation() {
        let inst = parse_instance("problem csat\nop and/2 = 0001\nconcept and(A, B)").unwrap();
        assert!(validate_operator_usage(&inst, &ops_and()).is_empty());
        let top_only = OperatorSet::from_funs([BoolFun::top()]).unwrap();
        let violations = validate_operator_usage(&inst, &top_only);
        assert_eq!(violations.len(), 1);
        assert!(matches!(&violations[0], UsageViolation::Undeclared { op, .. } if op == "and"));
    }

    #[test]
    fn parse_ops_file() {
        let ops = OperatorSet::parse_ops("# base\nop and/2 = 0001\nop bot/0 = 0\n").unwrap();
        assert_eq!(ops.len(), 2);
        assert!(ops.get("and").unwrap().same_table(&BoolFun::and()));
        assert!(ops.get("bot").unwrap().same_table(&BoolFun::bot()));
    }

    #[test]
    fn instance_symbols() {
        let inst = parse_instance(
            "problem osat\nop and/2 = 0001\nassert and(A, some R . B) (x)\nassert S(x, y)",
        )
        .unwrap();
        let syms = inst.symbols();
        assert!(syms.atoms.contains("A") && syms.atoms.contains("B"));
        assert!(syms.roles.contains("R") && syms.roles.contains("S"));
        assert!(syms.individuals.contains("x") && syms.individuals.contains("y"));
    }
}
