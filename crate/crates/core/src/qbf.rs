//! Prefix-quantified 3-CNF formulas with a brute-force evaluator, used as
//! ground truth for the QBF and tautology reduction suites.
//!
//! The text format is QDIMACS-like: a `p cnf <vars> <clauses>` header,
//! quantifier lines `e <vars> 0` / `a <vars> 0` in prefix order, then clause
//! lines of exactly three nonzero literals terminated by `0`.

use std::fmt;

use thiserror::Error;

/// Brute-force evaluation guard.
pub const MAX_EVAL_VARS: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QbfError {
    #[error("formula has {0} variables, above the evaluation guard of {MAX_EVAL_VARS}")]
    TooManyVariables(usize),
    #[error("literal {0} is out of range for {1} variables")]
    LiteralOutOfRange(i32, usize),
    #[error("clause must have exactly 3 literals")]
    ClauseArity,
    #[error("prefix must quantify x1..xn exactly once each, in order")]
    BadPrefix,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quant {
    Exists,
    Forall,
}

/// A clause of exactly three literals; a literal is a signed 1-based
/// variable index, and duplicates are allowed.
pub type Clause = [i32; 3];

/// A fully quantified 3-CNF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qbf3Cnf {
    prefix: Vec<Quant>,
    clauses: Vec<Clause>,
}

impl Qbf3Cnf {
    /// Builds a formula whose prefix quantifies `x1..xn` in order, with
    /// `prefix[i]` the quantifier of `x(i+1)`.
    pub fn new(prefix: Vec<Quant>, clauses: Vec<Clause>) -> Result<Qbf3Cnf, QbfError> {
        let n = prefix.len();
        for clause in &clauses {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > n {
                    return Err(QbfError::LiteralOutOfRange(lit, n));
                }
            }
        }
        Ok(Qbf3Cnf { prefix, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.prefix.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// The quantifier of each variable, paired with its 1-based index.
    pub fn prefix(&self) -> impl Iterator<Item = (Quant, usize)> + '_ {
        self.prefix.iter().enumerate().map(|(i, &q)| (q, i + 1))
    }

    pub fn quantifier(&self, var: usize) -> Quant {
        self.prefix[var - 1]
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Does the assignment (index i = variable i+1) satisfy the matrix?
    pub fn matrix_satisfied(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let v = assignment[lit.unsigned_abs() as usize - 1];
                if lit > 0 {
                    v
                } else {
                    !v
                }
            })
        })
    }

    /// Parses the QDIMACS-like format.
    pub fn parse_qdimacs(text: &str) -> Result<Qbf3Cnf, QbfError> {
        let mut declared: Option<(usize, usize)> = None;
        let mut prefix: Vec<(Quant, usize)> = Vec::new();
        let mut clauses: Vec<Clause> = Vec::new();
        for (lineno0, raw) in text.lines().enumerate() {
            let line = lineno0 + 1;
            let err = |msg: &str| QbfError::Parse { line, msg: msg.into() };
            let content = raw.trim();
            // Comment lines start with the word 'c'.
            if content.is_empty() || content == "c" || content.starts_with("c ") {
                continue;
            }
            let mut words = content.split_whitespace();
            let head = words.next().unwrap();
            match head {
                "p" => {
                    if words.next() != Some("cnf") {
                        return Err(err("expected 'p cnf <vars> <clauses>'"));
                    }
                    let n: usize = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| err("bad variable count"))?;
                    let m: usize = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| err("bad clause count"))?;
                    declared = Some((n, m));
                }
                "e" | "a" => {
                    let quant = if head == "e" { Quant::Exists } else { Quant::Forall };
                    let mut terminated = false;
                    for w in words.by_ref() {
                        let v: i64 = w.parse().map_err(|_| err("bad quantifier variable"))?;
                        if v == 0 {
                            terminated = true;
                            break;
                        }
                        if v < 0 {
                            return Err(err("quantifier variables must be positive"));
                        }
                        prefix.push((quant, v as usize));
                    }
                    if !terminated {
                        return Err(err("quantifier line must end with 0"));
                    }
                }
                _ => {
                    let mut lits = Vec::new();
                    let mut terminated = false;
                    for w in std::iter::once(head).chain(words) {
                        let v: i32 = w.parse().map_err(|_| err("bad literal"))?;
                        if v == 0 {
                            terminated = true;
                            break;
                        }
                        lits.push(v);
                    }
                    if !terminated {
                        return Err(err("clause must end with 0"));
                    }
                    if lits.len() != 3 {
                        return Err(QbfError::ClauseArity);
                    }
                    clauses.push([lits[0], lits[1], lits[2]]);
                }
            }
        }
        let (n, _) = declared.ok_or(QbfError::Parse { line: 1, msg: "missing 'p cnf' header".into() })?;
        // The prefix must cover x1..xn in order, once each.
        if prefix.len() != n || prefix.iter().enumerate().any(|(i, &(_, v))| v != i + 1) {
            return Err(QbfError::BadPrefix);
        }
        Qbf3Cnf::new(prefix.into_iter().map(|(q, _)| q).collect(), clauses)
    }

    pub fn to_qdimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars(), self.num_clauses());
        for (q, v) in self.prefix() {
            let c = match q {
                Quant::Exists => 'e',
                Quant::Forall => 'a',
            };
            out.push_str(&format!("{c} {v} 0\n"));
        }
        for clause in &self.clauses {
            out.push_str(&format!("{} {} {} 0\n", clause[0], clause[1], clause[2]));
        }
        out
    }
}

impl fmt::Display for Qbf3Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, v) in self.prefix() {
            match q {
                Quant::Exists => write!(f, "E x{v} ")?,
                Quant::Forall => write!(f, "A x{v} ")?,
            }
        }
        write!(f, ".")?;
        for clause in self.clauses() {
            write!(f, " ({} {} {})", clause[0], clause[1], clause[2])?;
        }
        Ok(())
    }
}

/// Recursive brute-force evaluation over the prefix.
pub fn eval_qbf(phi: &Qbf3Cnf) -> Result<bool, QbfError> {
    let n = phi.num_vars();
    if n > MAX_EVAL_VARS {
        return Err(QbfError::TooManyVariables(n));
    }
    let mut assignment = vec![false; n];
    fn rec(phi: &Qbf3Cnf, level: usize, assignment: &mut [bool]) -> bool {
        if level == phi.num_vars() {
            return phi.matrix_satisfied(assignment);
        }
        let try_value = |v: bool, assignment: &mut [bool]| {
            assignment[level] = v;
            rec(phi, level + 1, assignment)
        };
        match phi.quantifier(level + 1) {
            Quant::Exists => try_value(false, assignment) || try_value(true, assignment),
            Quant::Forall => try_value(false, assignment) && try_value(true, assignment),
        }
    }
    Ok(rec(phi, 0, &mut assignment))
}

/// All distinct 3-literal clauses over n variables, as non-decreasing triples
/// in the fixed literal order x1 < -x1 < x2 < -x2 < …
pub fn distinct_clauses(n: usize) -> Vec<Clause> {
    let literals: Vec<i32> = (1..=n as i32).flat_map(|v| [v, -v]).collect();
    let mut out = Vec::new();
    for i in 0..literals.len() {
        for j in i..literals.len() {
            for k in j..literals.len() {
                out.push([literals[i], literals[j], literals[k]]);
            }
        }
    }
    out
}

/// Deterministic stream of every prefix (binary counting, bit i = quantifier
/// of x(i+1), 0 = exists) crossed with every multiset of up to `max_clauses`
/// clauses drawn from [`distinct_clauses`]. Clause multisets are enumerated
/// by size, lexicographically by clause index; prefixes vary fastest.
pub fn enumerate_qbfs(n: usize, max_clauses: usize) -> impl Iterator<Item = Qbf3Cnf> {
    assert!(n >= 1 && n <= 3, "exhaustive mode is desk scale");
    assert!(max_clauses <= 2);
    let pool = distinct_clauses(n);
    let mut clause_sets: Vec<Vec<Clause>> = vec![Vec::new()];
    if max_clauses >= 1 {
        for c in &pool {
            clause_sets.push(vec![*c]);
        }
    }
    if max_clauses >= 2 {
        for i in 0..pool.len() {
            for j in i..pool.len() {
                clause_sets.push(vec![pool[i], pool[j]]);
            }
        }
    }
    clause_sets.into_iter().flat_map(move |clauses| {
        (0..1u32 << n).map(move |bits| {
            let prefix: Vec<Quant> = (0..n)
                .map(|i| if (bits >> i) & 1 == 0 { Quant::Exists } else { Quant::Forall })
                .collect();
            Qbf3Cnf::new(prefix, clauses.clone()).unwrap()
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi(prefix: Vec<Quant>, clauses: Vec<Clause>) -> Qbf3Cnf {
        Qbf3Cnf::new(prefix, clauses).unwrap()
    }

    #[test]
    fn eval_single_variable() {
        assert!(eval_qbf(&phi(vec![Quant::Exists], vec![[1, 1, 1]])).unwrap());
        assert!(!eval_qbf(&phi(vec![Quant::Forall], vec![[1, 1, 1]])).unwrap());
    }

    /// The two-clause example formula: E x1 A x2 E x3 of
    /// (x1 | -x2 | x3) & (-x1 | -x2 | -x3). True: pick x1 per x2? x1 is
    /// chosen before x2, so pick x1 = true, then x3 = -x2 satisfies both.
    #[test]
    fn eval_three_variable_example() {
        let f = phi(
            vec![Quant::Exists, Quant::Forall, Quant::Exists],
            vec![[1, -2, 3], [-1, -2, -3]],
        );
        assert!(eval_qbf(&f).unwrap());
    }

    #[test]
    fn eval_guard() {
        let f = phi(vec![Quant::Exists; 21], vec![[1, 2, 3]]);
        assert_eq!(eval_qbf(&f), Err(QbfError::TooManyVariables(21)));
    }

    #[test]
    fn literal_range_checked() {
        assert!(matches!(
            Qbf3Cnf::new(vec![Quant::Exists], vec![[1, 2, 1]]),
            Err(QbfError::LiteralOutOfRange(2, 1))
        ));
    }

    /// All-existential evaluation equals plain CNF satisfiability by an
    /// independent assignment loop.
    #[test]
    fn existential_prefix_is_satisfiability() {
        for n in 1..=3usize {
            for phi_ in enumerate_qbfs(n, 2) {
                if phi_.prefix().all(|(q, _)| matches!(q, Quant::Exists)) {
                    let brute = (0..1u32 << n).any(|bits| {
                        let assignment: Vec<bool> =
                            (0..n).map(|i| (bits >> i) & 1 == 1).collect();
                        phi_.matrix_satisfied(&assignment)
                    });
                    assert_eq!(eval_qbf(&phi_).unwrap(), brute, "{phi_}");
                }
            }
        }
    }

    /// Negating every literal and swapping the quantifiers negates the value.
    #[test]
    fn duality() {
        for n in 1..=3usize {
            for phi_ in enumerate_qbfs(n, 1) {
                let flipped_prefix: Vec<Quant> = phi_
                    .prefix()
                    .map(|(q, _)| match q {
                        Quant::Exists => Quant::Forall,
                        Quant::Forall => Quant::Exists,
                    })
                    .collect();
                // Negating the 3-clause matrix is not CNF again, so check the
                // equivalent form: not phi = swap quantifiers and negate the
                // matrix; evaluate the negated matrix directly.
                let dual = Qbf3Cnf::new(flipped_prefix, phi_.clauses().to_vec()).unwrap();
                let mut assignment = vec![false; n];
                fn rec(phi: &Qbf3Cnf, level: usize, assignment: &mut [bool]) -> bool {
                    if level == phi.num_vars() {
                        return !phi.matrix_satisfied(assignment);
                    }
                    let mut tryv = |v: bool, a: &mut [bool]| {
                        a[level] = v;
                        rec(phi, level + 1, a)
                    };
                    match phi.quantifier(level + 1) {
                        Quant::Exists => {
                            let a = tryv(false, assignment);
                            a || tryv(true, assignment)
                        }
                        Quant::Forall => {
                            let a = tryv(false, assignment);
                            a && tryv(true, assignment)
                        }
                    }
                }
                let negated = rec(&dual, 0, &mut assignment);
                assert_eq!(eval_qbf(&phi_).unwrap(), !negated, "{phi_}");
            }
        }
    }

    #[test]
    fn enumerate_counts() {
        // Independent count: non-decreasing triples over 2n literals.
        for n in 1..=2usize {
            let lits = 2 * n;
            let mut count = 0usize;
            for i in 0..lits {
                for j in i..lits {
                    for k in j..lits {
                        let _ = (i, j, k);
                        count += 1;
                    }
                }
            }
            assert_eq!(distinct_clauses(n).len(), count);
            let stream: Vec<_> = enumerate_qbfs(n, 1).collect();
            assert_eq!(stream.len(), (1 << n) * (count + 1));
        }
    }

    #[test]
    fn enumerate_no_duplicates() {
        let all: Vec<Qbf3Cnf> = enumerate_qbfs(2, 2).collect();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn enumerate_invariants() {
        for phi_ in enumerate_qbfs(2, 2) {
            for clause in phi_.clauses() {
                assert!(clause.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= 2));
            }
        }
    }

    #[test]
    fn qdimacs_round_trip() {
        let f = phi(
            vec![Quant::Exists, Quant::Forall, Quant::Exists],
            vec![[1, -2, 3], [-1, -2, -3]],
        );
        let text = f.to_qdimacs();
        assert_eq!(Qbf3Cnf::parse_qdimacs(&text).unwrap(), f);
    }

    #[test]
    fn qdimacs_parses_blocks_and_comments() {
        let text = "c example\np cnf 3 1\ne 1 0\na 2 0\ne 3 0\n1 -2 3 0\n";
        let f = Qbf3Cnf::parse_qdimacs(text).unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.clauses(), &[[1, -2, 3]]);
    }

    #[test]
    fn qdimacs_rejects_bad_prefix() {
        let text = "p cnf 2 1\ne 2 0\na 1 0\n1 2 1 0\n";
        assert_eq!(Qbf3Cnf::parse_qdimacs(text), Err(QbfError::BadPrefix));
    }

    #[test]
    fn qdimacs_rejects_non_three_clause() {
        let text = "p cnf 2 1\ne 1 2 0\n1 2 0\n";
        assert_eq!(Qbf3Cnf::parse_qdimacs(text), Err(QbfError::ClauseArity));
    }
}
