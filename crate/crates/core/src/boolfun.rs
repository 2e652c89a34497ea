//! Boolean functions given by explicit truth tables, their structural
//! properties, bounded clone closures, and representation search.
//!
//! A function of arity `n` is stored as the `2^n` entries of its truth
//! table packed into a `u64`. Table position `p` holds the value on the
//! argument tuple encoded by the bits of `p`, with argument 1 as the most
//! significant bit: for `and/2` the table string `0001` says the function
//! is true only at position 3, i.e. on `(true, true)`. All serialization
//! uses this convention.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Largest supported arity. Tables and bounded closures stay small.
pub const ARITY_CAP: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoolFunError {
    #[error("arity {arity} exceeds the cap of {ARITY_CAP}")]
    ArityTooLarge { arity: usize },
    #[error("table for arity {arity} must have {expected} entries, got {got}")]
    TableLength { arity: usize, expected: usize, got: usize },
    #[error("table string may only contain '0' and '1'")]
    BadTableChar,
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable count {k} exceeds the cap of {ARITY_CAP}")]
    VariableCountTooLarge { k: usize },
    #[error("closure exceeded the budget of {budget} functions")]
    ClosureBudget { budget: usize },
}

/// A named Boolean operator: an arity plus a packed truth table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoolFun {
    name: String,
    arity: usize,
    bits: u64,
}

fn table_mask(rows: u32) -> u64 {
    if rows >= 64 {
        u64::MAX
    } else {
        (1u64 << rows) - 1
    }
}

impl BoolFun {
    /// Builds a function from explicit table entries (position order).
    pub fn new(name: impl Into<String>, arity: usize, table: &[bool]) -> Result<Self, BoolFunError> {
        if arity > ARITY_CAP {
            return Err(BoolFunError::ArityTooLarge { arity });
        }
        let expected = 1usize << arity;
        if table.len() != expected {
            return Err(BoolFunError::TableLength { arity, expected, got: table.len() });
        }
        let mut bits = 0u64;
        for (p, &v) in table.iter().enumerate() {
            if v {
                bits |= 1 << p;
            }
        }
        Ok(BoolFun { name: name.into(), arity, bits })
    }

    /// Builds a function from a packed table; bits above `2^arity` must be clear.
    pub fn from_bits(name: impl Into<String>, arity: usize, bits: u64) -> Result<Self, BoolFunError> {
        if arity > ARITY_CAP {
            return Err(BoolFunError::ArityTooLarge { arity });
        }
        let mask = table_mask(1 << arity as u32);
        Ok(BoolFun { name: name.into(), arity, bits: bits & mask })
    }

    /// Parses a `0`/`1` table string in position order (`and/2` = `"0001"`).
    pub fn from_table_str(name: impl Into<String>, arity: usize, table: &str) -> Result<Self, BoolFunError> {
        if arity > ARITY_CAP {
            return Err(BoolFunError::ArityTooLarge { arity });
        }
        let expected = 1usize << arity;
        if table.len() != expected {
            return Err(BoolFunError::TableLength { arity, expected, got: table.len() });
        }
        let mut bits = 0u64;
        for (p, c) in table.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << p,
                _ => return Err(BoolFunError::BadTableChar),
            }
        }
        Ok(BoolFun { name: name.into(), arity, bits })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// The packed truth table (bit `p` = value at position `p`).
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn rows(&self) -> u32 {
        1u32 << self.arity
    }

    /// Renames the function, keeping arity and table.
    pub fn renamed(&self, name: impl Into<String>) -> BoolFun {
        BoolFun { name: name.into(), arity: self.arity, bits: self.bits }
    }

    /// True when the two functions have the same arity and table, whatever
    /// their names.
    pub fn same_table(&self, other: &BoolFun) -> bool {
        self.arity == other.arity && self.bits == other.bits
    }

    /// Table value at a raw position.
    pub fn value_at(&self, position: u32) -> bool {
        debug_assert!(position < self.rows());
        (self.bits >> position) & 1 == 1
    }

    /// Evaluates the function on an argument tuple.
    pub fn eval(&self, args: &[bool]) -> Result<bool, BoolFunError> {
        if args.len() != self.arity {
            return Err(BoolFunError::ArityMismatch { expected: self.arity, got: args.len() });
        }
        let mut p = 0u32;
        for &a in args {
            p = (p << 1) | a as u32;
        }
        Ok(self.value_at(p))
    }

    /// The table as a `0`/`1` string in position order.
    pub fn table_string(&self) -> String {
        (0..self.rows()).map(|p| if self.value_at(p) { '1' } else { '0' }).collect()
    }

    /// Scans the table for every structural property at once.
    pub fn properties(&self) -> PropertyRecord {
        let n = self.arity;
        let rows = self.rows();
        let full = rows - 1;

        let mut monotone = true;
        // A nullary constant is never self-dual: f() = not f() cannot hold.
        let mut self_dual = n > 0;
        for p in 0..rows {
            if n > 0 {
                // Flipping every argument maps position p to its complement.
                if self.value_at(full - p) == self.value_at(p) {
                    self_dual = false;
                }
                // Compare against every pointwise-larger tuple one bit up.
                for j in 0..n {
                    let q = p | (1 << j);
                    if q != p && self.value_at(p) && !self.value_at(q) {
                        monotone = false;
                    }
                }
            }
        }

        let reproduces_false = !self.value_at(0);
        let reproduces_true = self.value_at(full);

        PropertyRecord {
            monotone,
            self_dual,
            reproduces_false,
            reproduces_true,
            separating_false: self.separating(false),
            separating_true: self.separating(true),
        }
    }

    /// `c`-separating: some argument position carries value `c` on every
    /// tuple the function maps to `c`. Nullary functions are never
    /// separating (there is no argument position); an empty preimage at
    /// arity >= 1 is vacuously separating.
    fn separating(&self, c: bool) -> bool {
        let n = self.arity;
        if n == 0 {
            return false;
        }
        'index: for i in 1..=n {
            let bit = n - i; // argument i is bit n-i of the position
            for p in 0..self.rows() {
                if self.value_at(p) == c && ((p >> bit) & 1 == 1) != c {
                    continue 'index;
                }
            }
            return true;
        }
        false
    }
}

impl fmt::Display for BoolFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} = {}", self.name, self.arity, self.table_string())
    }
}

/// The standard operators, under their conventional names.
impl BoolFun {
    pub fn top() -> BoolFun {
        BoolFun::from_table_str("top", 0, "1").unwrap()
    }
    pub fn bot() -> BoolFun {
        BoolFun::from_table_str("bot", 0, "0").unwrap()
    }
    pub fn id() -> BoolFun {
        BoolFun::from_table_str("id", 1, "01").unwrap()
    }
    pub fn not() -> BoolFun {
        BoolFun::from_table_str("not", 1, "10").unwrap()
    }
    pub fn and() -> BoolFun {
        BoolFun::from_table_str("and", 2, "0001").unwrap()
    }
    pub fn or() -> BoolFun {
        BoolFun::from_table_str("or", 2, "0111").unwrap()
    }
    pub fn xor() -> BoolFun {
        BoolFun::from_table_str("xor", 2, "0110").unwrap()
    }
    pub fn xnor() -> BoolFun {
        BoolFun::from_table_str("xnor", 2, "1001").unwrap()
    }
    pub fn nand() -> BoolFun {
        BoolFun::from_table_str("nand", 2, "1110").unwrap()
    }
    /// `x and (y or z)`, the ternary part of the S11 base.
    pub fn s11f() -> BoolFun {
        BoolFun::from_table_str("s11f", 3, "00000111").unwrap()
    }
    /// `(x and not y) or (x and not z) or (not y and not z)`, the self-dual base.
    pub fn d3() -> BoolFun {
        BoolFun::from_table_str("d3", 3, "10001110").unwrap()
    }
}

/// Structural flags of a single function, computed by exhaustive table scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PropertyRecord {
    pub monotone: bool,
    pub self_dual: bool,
    pub reproduces_false: bool,
    pub reproduces_true: bool,
    pub separating_false: bool,
    pub separating_true: bool,
}

/// A set of `k`-variable functions closed under application of a base,
/// i.e. a clone restricted to terms over `k` fixed variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSpace {
    variable_count: usize,
    members: BTreeSet<u64>,
    closed: bool,
}

impl FunctionSpace {
    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Membership of a packed `k`-variable table.
    pub fn contains_table(&self, bits: u64) -> bool {
        self.members.contains(&bits)
    }

    /// Membership of a function, which must have arity exactly `k`.
    pub fn contains_fun(&self, f: &BoolFun) -> bool {
        f.arity == self.variable_count && self.members.contains(&f.bits)
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied()
    }

    /// True when every member of `self` is a member of `other`.
    pub fn subset_of(&self, other: &FunctionSpace) -> bool {
        self.variable_count == other.variable_count && self.members.is_subset(&other.members)
    }
}

/// Packed table of projection `j` (1-based) over `k` variables.
fn projection_bits(k: usize, j: usize) -> u64 {
    debug_assert!(j >= 1 && j <= k);
    let rows = 1u32 << k;
    let mut bits = 0u64;
    for r in 0..rows {
        if (r >> (k - j)) & 1 == 1 {
            bits |= 1 << r;
        }
    }
    bits
}

/// Applies `f` to `k`-variable functions given as packed tables, producing
/// the packed table of the composition. Works one row-pattern of `f` at a
/// time, bit-parallel over all `2^k` input rows.
fn compose(f: &BoolFun, args: &[u64], k: usize) -> u64 {
    debug_assert_eq!(args.len(), f.arity);
    let rows = 1u32 << k;
    let full = table_mask(rows);
    let n = f.arity;
    let mut out = 0u64;
    for a in 0..f.rows() {
        if !f.value_at(a) {
            continue;
        }
        let mut term = full;
        for (i, &h) in args.iter().enumerate() {
            let v = (a >> (n - 1 - i)) & 1 == 1;
            term &= if v { h } else { !h & full };
        }
        out |= term;
    }
    out
}

/// Caps the total size a bounded closure may reach before erroring out.
pub const CLOSURE_MEMBER_BUDGET: usize = 1 << 16;

/// Computes the fixpoint of closing the `k` projections under application of
/// the base functions: the clone of the base restricted to `k`-variable
/// expressibility. Semi-naive rounds keep the total work proportional to
/// `|space|^max_arity`.
pub fn clone_closure(base: &[BoolFun], k: usize) -> Result<FunctionSpace, BoolFunError> {
    clone_closure_with_budget(base, k, CLOSURE_MEMBER_BUDGET)
}

pub fn clone_closure_with_budget(
    base: &[BoolFun],
    k: usize,
    budget: usize,
) -> Result<FunctionSpace, BoolFunError> {
    if k > ARITY_CAP {
        return Err(BoolFunError::VariableCountTooLarge { k });
    }
    for f in base {
        if f.arity > ARITY_CAP {
            return Err(BoolFunError::ArityTooLarge { arity: f.arity });
        }
    }

    let mut ordered: Vec<u64> = Vec::new();
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    for j in 1..=k {
        let p = projection_bits(k, j);
        if seen.insert(p) {
            ordered.push(p);
        }
    }

    // ordered[frontier_start..round_end] are the functions added in the
    // previous round; each round only visits tuples touching the frontier.
    let mut frontier_start = 0;
    loop {
        let round_end = ordered.len();
        for f in base {
            let n = f.arity;
            if n == 0 {
                let c = if f.value_at(0) { table_mask(1 << k as u32) } else { 0 };
                if seen.insert(c) {
                    ordered.push(c);
                }
                continue;
            }
            if round_end == 0 {
                continue;
            }
            let mut idx = vec![0usize; n];
            'tuples: loop {
                if idx.iter().any(|&i| i >= frontier_start) {
                    let args: Vec<u64> = idx.iter().map(|&i| ordered[i]).collect();
                    let g = compose(f, &args, k);
                    if seen.insert(g) {
                        if ordered.len() >= budget {
                            return Err(BoolFunError::ClosureBudget { budget });
                        }
                        ordered.push(g);
                    }
                }
                // Odometer over [0, round_end)^n.
                let mut pos = n;
                loop {
                    if pos == 0 {
                        break 'tuples;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < round_end {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
        if ordered.len() == round_end {
            break;
        }
        frontier_start = round_end;
    }

    Ok(FunctionSpace { variable_count: k, members: seen, closed: true })
}

/// Clone membership: `g`, viewed over `max(arity, 1)` variables, appears in
/// the bounded closure of the base. Nullary `g` is tested as the matching
/// constant unary function.
pub fn clone_contains(base: &[BoolFun], g: &BoolFun) -> Result<bool, BoolFunError> {
    let k = g.arity.max(1);
    let space = clone_closure(base, k)?;
    let bits = if g.arity == 0 {
        if g.value_at(0) {
            table_mask(2)
        } else {
            0
        }
    } else {
        g.bits
    };
    Ok(space.contains_table(bits))
}

/// Clone-derived facts about an operator set: which distinguished functions
/// its clone contains, which properties all its members share, and which
/// named clones it equals. Everything the classifier consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CloneFacts {
    pub contains_and: bool,
    pub contains_or: bool,
    pub contains_not: bool,
    pub contains_top: bool,
    pub contains_bot: bool,
    pub all_monotone: bool,
    pub all_selfdual: bool,
    pub all_r0: bool,
    pub all_r1: bool,
    pub contains_s11_base: bool,
    pub equals_e: bool,
    pub equals_e0: bool,
    pub equals_i0: bool,
    pub equals_d: bool,
    pub equals_bf: bool,
}

/// Does every member of `base` lie in the clone generated by `named_base`?
fn all_in_clone(base: &[BoolFun], named_base: &[BoolFun]) -> Result<bool, BoolFunError> {
    for f in base {
        if !clone_contains(named_base, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn clone_facts(base: &[BoolFun]) -> Result<CloneFacts, BoolFunError> {
    let contains_and = clone_contains(base, &BoolFun::and())?;
    let contains_or = clone_contains(base, &BoolFun::or())?;
    let contains_not = clone_contains(base, &BoolFun::not())?;
    let contains_top = clone_contains(base, &BoolFun::top())?;
    let contains_bot = clone_contains(base, &BoolFun::bot())?;
    let contains_s11_base = contains_bot && clone_contains(base, &BoolFun::s11f())?;

    let props: Vec<PropertyRecord> = base.iter().map(|f| f.properties()).collect();
    let all_monotone = props.iter().all(|p| p.monotone);
    let all_selfdual = props.iter().all(|p| p.self_dual);
    let all_r0 = props.iter().all(|p| p.reproduces_false);
    let all_r1 = props.iter().all(|p| p.reproduces_true);

    // [B] equals a named clone iff the named base is contained in [B] and
    // every member of B lies in the named clone.
    let e_base = [BoolFun::and(), BoolFun::top(), BoolFun::bot()];
    let e0_base = [BoolFun::and(), BoolFun::bot()];
    let i0_base = [BoolFun::id(), BoolFun::bot()];
    let equals_e =
        contains_and && contains_top && contains_bot && all_in_clone(base, &e_base)?;
    let equals_e0 = contains_and && contains_bot && all_in_clone(base, &e0_base)?;
    let equals_i0 = contains_bot && all_in_clone(base, &i0_base)?;
    let equals_d = all_selfdual && clone_contains(base, &BoolFun::d3())?;
    let equals_bf = contains_and && contains_not;

    let facts = CloneFacts {
        contains_and,
        contains_or,
        contains_not,
        contains_top,
        contains_bot,
        all_monotone,
        all_selfdual,
        all_r0,
        all_r1,
        contains_s11_base,
        equals_e,
        equals_e0,
        equals_i0,
        equals_d,
        equals_bf,
    };
    debug_assert!(!facts.equals_bf || (facts.contains_and && facts.contains_not));
    debug_assert!(!facts.all_r1 || !facts.contains_bot);
    debug_assert!(!facts.all_r0 || !facts.contains_top);
    Ok(facts)
}

/// A term over an operator base in a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    /// 1-based variable index.
    Var(usize),
    /// Application of a named base operator.
    App(String, Vec<Term>),
}

impl Term {
    /// Number of operator applications in the term.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn count_occurrences(&self, arity: usize) -> Vec<usize> {
        let mut counts = vec![0; arity];
        self.count_into(&mut counts);
        counts
    }

    fn count_into(&self, counts: &mut [usize]) {
        match self {
            Term::Var(i) => counts[*i - 1] += 1,
            Term::App(_, args) => args.iter().for_each(|t| t.count_into(counts)),
        }
    }

    /// Evaluates the term under an assignment, resolving operators by name.
    pub fn eval(&self, base: &[BoolFun], assignment: &[bool]) -> Result<bool, BoolFunError> {
        match self {
            Term::Var(i) => Ok(assignment[*i - 1]),
            Term::App(name, args) => {
                let f = base
                    .iter()
                    .find(|f| f.name() == name)
                    .expect("term operator must come from the base");
                let vals: Vec<bool> = args
                    .iter()
                    .map(|t| t.eval(base, assignment))
                    .collect::<Result<_, _>>()?;
                f.eval(&vals)
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::App(name, args) => {
                if args.is_empty() {
                    write!(f, "{name}")
                } else {
                    write!(f, "{name}(")?;
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
}

/// A term denoting a target function, with per-variable occurrence counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub term: Term,
    pub occurrences: Vec<usize>,
}

/// Exhaustive bottom-up search for a smallest base term denoting `target`
/// over `target.arity()` variables, with at most `max_size` operator
/// applications. Returns `None` when no term within the bound denotes the
/// target. Occurrence counts are reported, not constrained.
pub fn find_representation(
    base: &[BoolFun],
    target: &BoolFun,
    max_size: usize,
) -> Result<Option<Representation>, BoolFunError> {
    let arity = target.arity;
    let k = arity; // terms are searched over exactly the target's variables
    if k > ARITY_CAP {
        return Err(BoolFunError::ArityTooLarge { arity });
    }
    let target_bits = target.bits;

    // by_size[s] = representative (bits, term) pairs first reached at size s.
    let mut by_size: Vec<Vec<(u64, Term)>> = Vec::new();
    let mut best: BTreeSet<u64> = BTreeSet::new();

    let mut level0 = Vec::new();
    for j in 1..=k {
        let bits = projection_bits(k, j);
        if best.insert(bits) {
            level0.push((bits, Term::Var(j)));
        }
    }
    by_size.push(level0);
    if let Some(rep) = lookup(&by_size, target_bits) {
        return Ok(Some(finish(rep, arity)));
    }

    for size in 1..=max_size {
        let mut level = Vec::new();
        for f in base {
            let n = f.arity;
            if n == 0 {
                if size == 1 {
                    let bits = if f.value_at(0) { table_mask(1 << k as u32) } else { 0 };
                    if best.insert(bits) {
                        level.push((bits, Term::App(f.name.clone(), Vec::new())));
                    }
                }
                continue;
            }
            // Argument sizes must sum to size - 1.
            for sizes in compositions(size - 1, n) {
                let pools: Vec<&[(u64, Term)]> =
                    sizes.iter().map(|&s| by_size[s].as_slice()).collect();
                if pools.iter().any(|p| p.is_empty()) {
                    continue;
                }
                let mut idx = vec![0usize; n];
                loop {
                    let args_bits: Vec<u64> =
                        idx.iter().zip(&pools).map(|(&i, p)| p[i].0).collect();
                    let bits = compose(f, &args_bits, k);
                    if best.insert(bits) {
                        let args: Vec<Term> =
                            idx.iter().zip(&pools).map(|(&i, p)| p[i].1.clone()).collect();
                        level.push((bits, Term::App(f.name.clone(), args)));
                    }
                    let mut pos = n;
                    loop {
                        if pos == 0 {
                            break;
                        }
                        pos -= 1;
                        idx[pos] += 1;
                        if idx[pos] < pools[pos].len() {
                            break;
                        }
                        idx[pos] = 0;
                    }
                    if idx.iter().all(|&i| i == 0) {
                        break;
                    }
                }
            }
        }
        by_size.push(level);
        if let Some(rep) = lookup(&by_size, target_bits) {
            return Ok(Some(finish(rep, arity)));
        }
    }
    Ok(None)
}

fn lookup(by_size: &[Vec<(u64, Term)>], target: u64) -> Option<&Term> {
    by_size
        .iter()
        .flat_map(|level| level.iter())
        .find(|(bits, _)| *bits == target)
        .map(|(_, t)| t)
}

fn finish(term: &Term, arity: usize) -> Representation {
    Representation { term: term.clone(), occurrences: term.count_occurrences(arity) }
}

/// All ways to write `total` as an ordered sum of `parts` nonnegative integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; parts];
    fn rec(total: usize, pos: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == current.len() - 1 {
            current[pos] = total;
            out.push(current.clone());
            return;
        }
        for v in 0..=total {
            current[pos] = v;
            rec(total - v, pos + 1, current, out);
        }
    }
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, 0, &mut current, &mut out);
    out
}
