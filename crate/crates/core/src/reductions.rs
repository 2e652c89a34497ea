//! Executable reductions between the five satisfiability problems: problem
//! embeddings, constant elimination through negation, the top gadget,
//! the complement-atom gadget, base change through circuit compilation, and
//! the two quantified-CNF constructions. Every reduction emits a valid
//! instance and reports its fresh symbols and axiom count.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::boolfun::{clone_contains, find_representation, BoolFun, BoolFunError, Term};
use crate::qbf::{Clause, Qbf3Cnf, QbfError, Quant};
use crate::syntax::{
    subconcepts, Assertion, Concept, Gci, Ontology, OperatorSet, ProblemInstance, ProblemKind,
    SymbolSet, SyntaxError,
};

/// Bound on operator applications when rendering one operator over a new
/// base.
pub const REPRESENTATION_BOUND: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("no embedding from {0} to {1}")]
    UnsupportedPair(ProblemKind, ProblemKind),
    #[error("reduction requires kind {expected}, got {got}")]
    WrongKind { expected: ProblemKind, got: ProblemKind },
    #[error("base change does not apply to csat instances")]
    UnsupportedKind,
    #[error("the operator set provides no negation")]
    NegationUnavailable,
    #[error("the operator set provides no {0} constant")]
    ConstantUnavailable(&'static str),
    #[error("operator '{0}' lies outside the clone of the target base")]
    OutsideClone(String),
    #[error("no representation of '{0}' within {1} operator applications")]
    RepresentationNotFound(String, usize),
    #[error("quantified formula must have at least one variable")]
    EmptyPrefix,
    #[error(transparent)]
    Qbf(#[from] QbfError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    BoolFun(#[from] BoolFunError),
}

/// What a reduction did: where it went and what it created.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub source_kind: String,
    pub target_kind: String,
    pub fresh_symbols: Vec<String>,
    pub axiom_count: usize,
}

impl std::fmt::Display for ReductionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "source: {}", self.source_kind)?;
        writeln!(f, "target: {}", self.target_kind)?;
        writeln!(f, "axioms: {}", self.axiom_count)?;
        write!(f, "fresh: {}", self.fresh_symbols.join(" "))
    }
}

/// Mints names that collide with nothing already in use; the documented
/// name is used verbatim when free, otherwise a numeric suffix is added.
struct FreshNames {
    used: BTreeSet<String>,
    minted: Vec<String>,
}

impl FreshNames {
    fn new(syms: &SymbolSet) -> FreshNames {
        let mut used = BTreeSet::new();
        used.extend(syms.atoms.iter().cloned());
        used.extend(syms.roles.iter().cloned());
        used.extend(syms.individuals.iter().cloned());
        FreshNames { used, minted: Vec::new() }
    }

    fn for_instance(inst: &ProblemInstance) -> FreshNames {
        FreshNames::new(&inst.symbols())
    }

    fn mint(&mut self, base: &str) -> String {
        let name = if self.used.insert(base.to_string()) {
            base.to_string()
        } else {
            let mut i = 1;
            loop {
                let candidate = format!("{base}{i}");
                if self.used.insert(candidate.clone()) {
                    break candidate;
                }
                i += 1;
            }
        };
        self.minted.push(name.clone());
        name
    }
}

fn report(
    source: ProblemKind,
    target: ProblemKind,
    fresh: Vec<String>,
    axiom_count: usize,
) -> ReductionReport {
    ReductionReport {
        source_kind: source.name().to_string(),
        target_kind: target.name().to_string(),
        fresh_symbols: fresh,
        axiom_count,
    }
}

/// The kind embeddings along the interreducibility chains:
/// csat -> osat, tsat -> tcsat, tcsat -> osat, osat <-> ocsat.
pub fn embed(
    inst: &ProblemInstance,
    target: ProblemKind,
) -> Result<(ProblemInstance, ReductionReport), ReductionError> {
    let mut fresh = FreshNames::for_instance(inst);
    let source = inst.kind;
    let out = match (source, target) {
        (ProblemKind::Csat, ProblemKind::Osat) => {
            let a = fresh.mint("_a");
            let ontology = Ontology {
                tbox: Vec::new(),
                abox: vec![Assertion::Concept(inst.query.clone().unwrap(), a)],
            };
            ProblemInstance::new(target, inst.operator_set.clone(), ontology, None)?
        }
        (ProblemKind::Tsat, ProblemKind::Tcsat) => {
            let q = fresh.mint("_A");
            ProblemInstance::new(
                target,
                inst.operator_set.clone(),
                inst.ontology.clone(),
                Some(Concept::atom(q)),
            )?
        }
        (ProblemKind::Tcsat, ProblemKind::Osat) => {
            let a = fresh.mint("_a");
            let mut ontology = inst.ontology.clone();
            ontology.abox.push(Assertion::Concept(inst.query.clone().unwrap(), a));
            ProblemInstance::new(target, inst.operator_set.clone(), ontology, None)?
        }
        (ProblemKind::Osat, ProblemKind::Ocsat) => {
            let q = fresh.mint("_A");
            let a = fresh.mint("_a");
            let mut ontology = inst.ontology.clone();
            ontology.abox.push(Assertion::Concept(Concept::atom(&q), a));
            ProblemInstance::new(
                target,
                inst.operator_set.clone(),
                ontology,
                Some(Concept::atom(q)),
            )?
        }
        (ProblemKind::Ocsat, ProblemKind::Osat) => {
            let a = fresh.mint("_a");
            let mut ontology = inst.ontology.clone();
            ontology.abox.push(Assertion::Concept(inst.query.clone().unwrap(), a));
            ProblemInstance::new(target, inst.operator_set.clone(), ontology, None)?
        }
        _ => return Err(ReductionError::UnsupportedPair(source, target)),
    };
    let count = out.ontology.axiom_count();
    assert!(count <= inst.ontology.axiom_count() + 1);
    Ok((out, report(source, target, fresh.minted.clone(), count)))
}

/// Returns the name of a declared top operator, declaring one when absent.
fn ensure_top(ops: &mut OperatorSet) -> String {
    if let Some(f) = ops.find_by_table(0, 1) {
        return f.name().to_string();
    }
    let mut name = "top".to_string();
    while ops.get(&name).is_some() {
        name.push('\'');
    }
    ops.declare(BoolFun::top().renamed(&name)).expect("fresh operator name");
    name
}

fn top_concept_of(ops: &OperatorSet) -> Result<Concept, ReductionError> {
    ops.find_by_table(0, 1)
        .map(|f| Concept::apply(f.name(), Vec::new()))
        .ok_or(ReductionError::ConstantUnavailable("top"))
}

fn bot_concept_of(ops: &OperatorSet) -> Result<Concept, ReductionError> {
    ops.find_by_table(0, 0)
        .map(|f| Concept::apply(f.name(), Vec::new()))
        .ok_or(ReductionError::ConstantUnavailable("bot"))
}

/// Satisfiability of a concept w.r.t. a TBox reduces to TBox satisfiability
/// once top is available: add `top [= some _R . C` for a fresh role.
pub fn tcsat_to_tsat_top(
    inst: &ProblemInstance,
) -> Result<(ProblemInstance, ReductionReport), ReductionError> {
    if inst.kind != ProblemKind::Tcsat {
        return Err(ReductionError::WrongKind { expected: ProblemKind::Tcsat, got: inst.kind });
    }
    let mut ops = inst.operator_set.clone();
    let top_name = ensure_top(&mut ops);
    let mut fresh = FreshNames::for_instance(inst);
    let role = fresh.mint("_R");
    let mut tbox = inst.ontology.tbox.clone();
    tbox.push(Gci::new(
        Concept::apply(&top_name, Vec::new()),
        Concept::exists(role, inst.query.clone().unwrap()),
    ));
    let out = ProblemInstance::new(
        ProblemKind::Tsat,
        ops,
        Ontology { tbox, abox: Vec::new() },
        None,
    )?;
    let count = out.ontology.axiom_count();
    assert!(count == inst.ontology.axiom_count() + 1);
    Ok((out, report(inst.kind, ProblemKind::Tsat, fresh.minted.clone(), count)))
}

fn rewrite_constants(c: &Concept, tops: &BTreeSet<String>, bots: &BTreeSet<String>, t: &str, b: &str) -> Concept {
    match c {
        Concept::Atom(_) => c.clone(),
        Concept::Apply(op, args) if args.is_empty() && tops.contains(op) => Concept::atom(t),
        Concept::Apply(op, args) if args.is_empty() && bots.contains(op) => Concept::atom(b),
        Concept::Apply(op, args) => Concept::Apply(
            op.clone(),
            args.iter().map(|a| rewrite_constants(a, tops, bots, t, b)).collect(),
        ),
        Concept::Exists(r, inner) => {
            Concept::exists(r.clone(), rewrite_constants(inner, tops, bots, t, b))
        }
        Concept::Forall(r, inner) => {
            Concept::forall(r.clone(), rewrite_constants(inner, tops, bots, t, b))
        }
    }
}

fn concept_uses(c: &Concept, names: &BTreeSet<String>) -> bool {
    match c {
        Concept::Atom(_) => false,
        Concept::Apply(op, args) => {
            (args.is_empty() && names.contains(op)) || args.iter().any(|a| concept_uses(a, names))
        }
        Concept::Exists(_, inner) | Concept::Forall(_, inner) => concept_uses(inner, names),
    }
}

/// Simulates the constants by fresh atoms when negation is available: every
/// top becomes `_T` with `not(_T) [= _T`, every bot becomes `_B` with
/// `_B [= not(_B)`. The constants disappear from the operator set.
pub fn eliminate_constants_via_neg(
    inst: &ProblemInstance,
) -> Result<(ProblemInstance, ReductionReport), ReductionError> {
    let not_name = inst
        .operator_set
        .iter()
        .find(|f| f.same_table(&BoolFun::not()))
        .map(|f| f.name().to_string())
        .ok_or(ReductionError::NegationUnavailable)?;
    let tops: BTreeSet<String> = inst
        .operator_set
        .iter()
        .filter(|f| f.arity() == 0 && f.bits() == 1)
        .map(|f| f.name().to_string())
        .collect();
    let bots: BTreeSet<String> = inst
        .operator_set
        .iter()
        .filter(|f| f.arity() == 0 && f.bits() == 0)
        .map(|f| f.name().to_string())
        .collect();

    let top_used = inst.top_level_concepts().iter().any(|c| concept_uses(c, &tops));
    let bot_used = inst.top_level_concepts().iter().any(|c| concept_uses(c, &bots));

    let mut fresh = FreshNames::for_instance(inst);
    let t = if top_used { fresh.mint("_T") } else { "_T".to_string() };
    let b = if bot_used { fresh.mint("_B") } else { "_B".to_string() };

    let rw = |c: &Concept| rewrite_constants(c, &tops, &bots, &t, &b);
    let mut tbox: Vec<Gci> =
        inst.ontology.tbox.iter().map(|g| Gci::new(rw(&g.lhs), rw(&g.rhs))).collect();
    let abox: Vec<Assertion> = inst
        .ontology
        .abox
        .iter()
        .map(|a| match a {
            Assertion::Concept(c, x) => Assertion::Concept(rw(c), x.clone()),
            role => role.clone(),
        })
        .collect();
    let not1 = |c: Concept| Concept::apply(&not_name, vec![c]);
    if top_used {
        tbox.push(Gci::new(not1(Concept::atom(&t)), Concept::atom(&t)));
    }
    if bot_used {
        tbox.push(Gci::new(Concept::atom(&b), not1(Concept::atom(&b))));
    }

    let ops = OperatorSet::from_funs(inst.operator_set.iter().filter(|f| f.arity() > 0).cloned())?;
    let out = ProblemInstance::new(
        inst.kind,
        ops,
        Ontology { tbox, abox },
        inst.query.as_ref().map(|q| rw(q)),
    )?;
    let count = out.ontology.axiom_count();
    assert!(count <= inst.ontology.axiom_count() + 2);
    Ok((out, report(inst.kind, inst.kind, fresh.minted.clone(), count)))
}

/// The complement-atom gadget: axioms forcing `_A'` to denote the complement
/// of `A` in every model, using a fresh role and both constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegationGadget {
    pub axioms: Vec<Gci>,
    pub complement_atom: String,
    pub role: String,
}

pub fn add_negation_gadget(
    ops: &OperatorSet,
    atom: &str,
    reserved: &SymbolSet,
) -> Result<NegationGadget, ReductionError> {
    let top = top_concept_of(ops)?;
    let bot = bot_concept_of(ops)?;
    let mut fresh = FreshNames::new(reserved);
    let role = fresh.mint(&format!("_R{atom}"));
    let comp = fresh.mint(&format!("_{atom}'"));
    let a = Concept::atom(atom);
    let comp_c = Concept::atom(&comp);
    let ex = Concept::exists(&role, top);
    let fa = Concept::forall(&role, bot);
    let axioms = vec![
        Gci::new(a.clone(), ex.clone()),
        Gci::new(ex, a),
        Gci::new(comp_c.clone(), fa.clone()),
        Gci::new(fa, comp_c),
    ];
    Ok(NegationGadget { axioms, complement_atom: comp, role })
}

fn term_to_concept(term: &Term, args: &[Concept]) -> Concept {
    match term {
        Term::Var(i) => args[*i - 1].clone(),
        Term::App(name, ts) => Concept::Apply(
            name.clone(),
            ts.iter().map(|t| term_to_concept(t, args)).collect(),
        ),
    }
}

/// Rewrites an instance over a new operator base by compiling every axiom
/// side into a circuit: one fresh atom per gate, defining axioms per gate,
/// and one inclusion between the output gates per original axiom. Each
/// operator gate is rendered through a representation over the new base.
pub fn change_base(
    inst: &ProblemInstance,
    target_ops: &OperatorSet,
) -> Result<(ProblemInstance, ReductionReport), ReductionError> {
    if inst.kind == ProblemKind::Csat {
        return Err(ReductionError::UnsupportedKind);
    }
    let base = target_ops.funs();

    // Representations for every operator the instance uses. A nullary
    // operator is rendered as the matching constant unary function applied
    // to a shared unconstrained fresh atom.
    let mut used_ops: BTreeSet<String> = BTreeSet::new();
    for c in subconcepts(inst) {
        if let Concept::Apply(op, _) = c {
            used_ops.insert(op);
        }
    }
    let mut fresh = FreshNames::for_instance(inst);
    let mut reps: std::collections::BTreeMap<String, Term> = Default::default();
    let mut needs_aux = false;
    for op in &used_ops {
        let f = inst.operator_set.get(op).expect("validated instance");
        if !clone_contains(&base, f)? {
            return Err(ReductionError::OutsideClone(op.clone()));
        }
        let target = if f.arity() == 0 {
            let bits = if f.bits() == 1 { 0b11 } else { 0b00 };
            needs_aux = true;
            BoolFun::from_bits(f.name(), 1, bits)?
        } else {
            f.clone()
        };
        match find_representation(&base, &target, REPRESENTATION_BOUND)? {
            Some(rep) => {
                reps.insert(op.clone(), rep.term);
            }
            None => {
                return Err(ReductionError::RepresentationNotFound(
                    op.clone(),
                    REPRESENTATION_BOUND,
                ))
            }
        }
    }
    let aux = if needs_aux { Some(fresh.mint("_z")) } else { None };

    let mut tbox: Vec<Gci> = Vec::new();
    let mut gate_counter = 0usize;
    let mut compile = |concept: &Concept, fresh: &mut FreshNames, tbox: &mut Vec<Gci>| -> String {
        // Children-first walk over this side's subconcept graph.
        let mut seen: BTreeSet<&Concept> = BTreeSet::new();
        let mut order: Vec<&Concept> = Vec::new();
        fn walk<'a>(c: &'a Concept, seen: &mut BTreeSet<&'a Concept>, order: &mut Vec<&'a Concept>) {
            if seen.contains(c) {
                return;
            }
            for child in c.children() {
                walk(child, seen, order);
            }
            if seen.insert(c) {
                order.push(c);
            }
        }
        walk(concept, &mut seen, &mut order);

        let mut gate: std::collections::BTreeMap<&Concept, String> = Default::default();
        for c in order {
            let g = fresh.mint(&format!("_g{gate_counter}"));
            gate_counter += 1;
            let defined: Concept = match c {
                Concept::Atom(a) => Concept::atom(a.clone()),
                Concept::Apply(op, args) => {
                    let term = &reps[op];
                    let arg_atoms: Vec<Concept> = if args.is_empty() {
                        vec![Concept::atom(aux.clone().expect("aux atom minted"))]
                    } else {
                        args.iter().map(|a| Concept::atom(gate[a].clone())).collect()
                    };
                    term_to_concept(term, &arg_atoms)
                }
                Concept::Exists(r, body) => {
                    Concept::exists(r.clone(), Concept::atom(gate[body.as_ref()].clone()))
                }
                Concept::Forall(r, body) => {
                    Concept::forall(r.clone(), Concept::atom(gate[body.as_ref()].clone()))
                }
            };
            tbox.push(Gci::new(Concept::atom(&g), defined.clone()));
            tbox.push(Gci::new(defined, Concept::atom(&g)));
            gate.insert(c, g);
        }
        gate[concept].clone()
    };

    for gci in &inst.ontology.tbox {
        let gl = compile(&gci.lhs, &mut fresh, &mut tbox);
        let gr = compile(&gci.rhs, &mut fresh, &mut tbox);
        tbox.push(Gci::new(Concept::atom(gl), Concept::atom(gr)));
    }
    let mut abox: Vec<Assertion> = Vec::new();
    for a in &inst.ontology.abox {
        match a {
            Assertion::Concept(c, x) => {
                let g = compile(c, &mut fresh, &mut tbox);
                abox.push(Assertion::Concept(Concept::atom(g), x.clone()));
            }
            role => abox.push(role.clone()),
        }
    }
    let query = match &inst.query {
        Some(q) => Some(Concept::atom(compile(q, &mut fresh, &mut tbox))),
        None => None,
    };

    let out = ProblemInstance::new(
        inst.kind,
        target_ops.clone(),
        Ontology { tbox, abox },
        query,
    )?;
    let count = out.ontology.axiom_count();
    // Two defining axioms per gate plus one inclusion per original axiom.
    assert!(count <= 2 * gate_counter + inst.ontology.axiom_count());
    Ok((out, report(inst.kind, inst.kind, fresh.minted.clone(), count)))
}

/// Names used by the quantified-CNF constructions.
struct LevelNames;

impl LevelNames {
    fn d(i: usize) -> Concept {
        Concept::atom(format!("_d{i}"))
    }
    fn x(i: usize) -> Concept {
        Concept::atom(format!("_x{i}"))
    }
    fn xp(i: usize) -> Concept {
        Concept::atom(format!("_x{i}'"))
    }
    fn c(j: usize) -> Concept {
        Concept::atom(format!("_C{j}"))
    }
    fn cp(j: usize) -> Concept {
        Concept::atom(format!("_C{j}'"))
    }
    fn f() -> Concept {
        Concept::atom("_f")
    }
    fn fp() -> Concept {
        Concept::atom("_f'")
    }
    fn r(i: usize) -> String {
        format!("_R{i}")
    }
    fn rx(i: usize) -> String {
        format!("_Rx{i}")
    }
    fn rd(i: usize) -> String {
        format!("_Rd{i}")
    }
    fn rc(j: usize) -> String {
        format!("_RC{j}")
    }
    fn p1(j: usize) -> String {
        format!("_P1{j}")
    }
    fn p2(j: usize) -> String {
        format!("_P2{j}")
    }

    /// The atom standing for "this literal is false here".
    fn tilde(lit: i32) -> Concept {
        let v = lit.unsigned_abs() as usize;
        if lit > 0 {
            Self::xp(v)
        } else {
            Self::x(v)
        }
    }
}

fn equiv(a: Concept, b: Concept) -> [Gci; 2] {
    [Gci::new(a.clone(), b.clone()), Gci::new(b, a)]
}

/// Axiom families shared by the QBF and tautology constructions: variable
/// complementation, level branching and disjointness, assignment carry-over,
/// clause chains, clause complementation, and the leaf flag. `top` is the
/// concept standing for the universally true concept (the constant, or its
/// fresh-atom replacement).
fn emit_shared_families(n: usize, clauses: &[Clause], top: &Concept, bot: &Concept) -> Vec<Gci> {
    use LevelNames as N;
    let m = clauses.len();
    let mut tbox: Vec<Gci> = Vec::new();

    // Each element is on exactly one side of every variable.
    for i in 1..=n {
        tbox.extend(equiv(N::x(i), Concept::exists(N::rx(i), top.clone())));
        tbox.extend(equiv(N::xp(i), Concept::forall(N::rx(i), bot.clone())));
    }
    // Levels branch into both assignments of the next variable.
    for i in 0..n {
        tbox.push(Gci::new(N::d(i), Concept::exists(N::r(i + 1), N::x(i + 1))));
        tbox.push(Gci::new(N::d(i), Concept::exists(N::r(i + 1), N::xp(i + 1))));
    }
    // Levels succeed each other and are pairwise disjoint.
    for i in 0..n {
        tbox.push(Gci::new(N::d(i), Concept::forall(N::r(i + 1), N::d(i + 1))));
    }
    for i in 0..n {
        tbox.push(Gci::new(N::d(i), Concept::exists(N::rd(i), top.clone())));
    }
    for i in 0..=n {
        for j in (i + 1)..=n {
            tbox.push(Gci::new(N::d(j), Concept::forall(N::rd(i), bot.clone())));
        }
    }
    // Assignments carry over to deeper levels.
    for i in 1..=n {
        for j in (i + 1)..=n {
            tbox.push(Gci::new(N::x(i), Concept::forall(N::r(j), N::x(i))));
            tbox.push(Gci::new(N::xp(i), Concept::forall(N::r(j), N::xp(i))));
        }
    }
    // Clause chains: where all three literals are false, the complement
    // clause atom is enforced.
    for (j0, clause) in clauses.iter().enumerate() {
        let j = j0 + 1;
        let l1 = N::tilde(clause[0]);
        let l2 = N::tilde(clause[1]);
        let l3 = N::tilde(clause[2]);
        tbox.push(Gci::new(l1, Concept::exists(N::p1(j), top.clone())));
        tbox.push(Gci::new(l2.clone(), Concept::forall(N::p1(j), l2.clone())));
        tbox.push(Gci::new(
            Concept::exists(N::p1(j), l2),
            Concept::exists(N::p2(j), top.clone()),
        ));
        tbox.push(Gci::new(l3.clone(), Concept::forall(N::p2(j), l3.clone())));
        tbox.push(Gci::new(Concept::exists(N::p2(j), l3), N::cp(j)));
    }
    // Failed clauses flag the leaf.
    for j in 1..=m {
        tbox.push(Gci::new(N::cp(j), N::f()));
    }
    // The flag and its complement, and clause complementation.
    tbox.push(Gci::new(N::f(), Concept::exists("_F", top.clone())));
    tbox.push(Gci::new(N::fp(), Concept::forall("_F", bot.clone())));
    for j in 1..=m {
        tbox.extend(equiv(N::c(j), Concept::exists(N::rc(j), top.clone())));
        tbox.extend(equiv(N::cp(j), Concept::forall(N::rc(j), bot.clone())));
    }
    tbox
}

fn shared_family_count(n: usize, m: usize) -> usize {
    // 4n + 2n + n + n + n(n+1)/2 + n(n-1) + 5m + m + 2 + 4m
    8 * n + (3 * n * n - n) / 2 + 10 * m + 2
}

fn lemma_fresh_symbols(n: usize, m: usize, with_init: bool) -> Vec<String> {
    use LevelNames as N;
    let mut out = Vec::new();
    for i in 0..=n {
        out.push(format!("_d{i}"));
    }
    for i in 1..=n {
        out.push(format!("_x{i}"));
        out.push(format!("_x{i}'"));
    }
    for j in 1..=m {
        out.push(format!("_C{j}"));
        out.push(format!("_C{j}'"));
    }
    out.push("_f".into());
    out.push("_f'".into());
    if with_init {
        out.push("_S".into());
    }
    for i in 1..=n {
        out.push(N::r(i));
        out.push(N::rx(i));
    }
    for i in 0..n {
        out.push(N::rd(i));
    }
    for j in 1..=m {
        out.push(N::rc(j));
        out.push(N::p1(j));
        out.push(N::p2(j));
    }
    out.push("_F".into());
    out
}

/// The quantified-CNF encoding into TBox satisfiability over {top, bot}: a
/// model must unfold a full binary assignment tree whose quantifier-selected
/// leaves satisfy every clause; satisfiable exactly when the formula is
/// true.
pub fn qbf_to_tbox(phi: &Qbf3Cnf) -> Result<(ProblemInstance, ReductionReport), ReductionError> {
    use LevelNames as N;
    let n = phi.num_vars();
    let m = phi.num_clauses();
    if n == 0 {
        return Err(ReductionError::EmptyPrefix);
    }
    let ops = OperatorSet::from_funs([BoolFun::top(), BoolFun::bot()])?;
    let top = Concept::apply("top", Vec::new());
    let bot = Concept::apply("bot", Vec::new());

    let mut tbox = Vec::new();
    // Initial starting point.
    tbox.push(Gci::new(top.clone(), Concept::exists("_S", N::d(0))));
    tbox.extend(emit_shared_families(n, phi.clauses(), &top, &bot));
    // Run through the levels as quantified, reaching only unflagged leaves.
    let mut chain = N::fp();
    for (q, i) in phi.prefix().collect::<Vec<_>>().into_iter().rev() {
        chain = match q {
            Quant::Exists => Concept::exists(N::r(i), chain),
            Quant::Forall => Concept::forall(N::r(i), chain),
        };
    }
    tbox.push(Gci::new(N::d(0), chain));

    let expected = shared_family_count(n, m) + 2;
    assert_eq!(tbox.len(), expected);
    assert!(tbox.len() <= 14 * (n * n + m) + 14);

    let out =
        ProblemInstance::new(ProblemKind::Tsat, ops, Ontology { tbox, abox: Vec::new() }, None)?;
    let rep = ReductionReport {
        source_kind: "qbf".into(),
        target_kind: ProblemKind::Tsat.name().into(),
        fresh_symbols: lemma_fresh_symbols(n, m, true),
        axiom_count: expected,
    };
    Ok((out, rep))
}

/// The tautology variant over {bot} alone: top is replaced by a fresh atom,
/// the initial axiom is dropped in favor of the query `_d0`, and the level
/// chain is all-universal; satisfiable exactly when every assignment
/// satisfies every clause.
pub fn taut_to_tcsat(
    clauses: &[Clause],
    n: usize,
) -> Result<(ProblemInstance, ReductionReport), ReductionError> {
    use LevelNames as N;
    if n == 0 {
        return Err(ReductionError::EmptyPrefix);
    }
    let m = clauses.len();
    // Validate the clause literals through the formula type.
    let _ = Qbf3Cnf::new(vec![Quant::Forall; n], clauses.to_vec())?;

    let ops = OperatorSet::from_funs([BoolFun::bot()])?;
    let t = Concept::atom("_t");
    let bot = Concept::apply("bot", Vec::new());

    let mut tbox = emit_shared_families(n, clauses, &t, &bot);
    let mut chain = N::fp();
    for i in (1..=n).rev() {
        chain = Concept::forall(N::r(i), chain);
    }
    tbox.push(Gci::new(N::d(0), chain));

    let expected = shared_family_count(n, m) + 1;
    assert_eq!(tbox.len(), expected);

    let out = ProblemInstance::new(
        ProblemKind::Tcsat,
        ops,
        Ontology { tbox, abox: Vec::new() },
        Some(N::d(0)),
    )?;
    let mut fresh = lemma_fresh_symbols(n, m, false);
    fresh.push("_t".into());
    let rep = ReductionReport {
        source_kind: "taut".into(),
        target_kind: ProblemKind::Tcsat.name().into(),
        fresh_symbols: fresh,
        axiom_count: expected,
    };
    Ok((out, rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::eval_qbf;
    use crate::semantics::{check_instance, eval_concept};
    use crate::syntax::{parse_instance, print_instance, validate_operator_usage};
    use crate::tableau::{decide, Verdict};

    fn sat(inst: &ProblemInstance) -> bool {
        decide(inst).unwrap().is_sat()
    }

    #[test]
    fn embed_csat_to_osat() {
        let inst = parse_instance("problem csat\nconcept A").unwrap();
        let (out, rep) = embed(&inst, ProblemKind::Osat).unwrap();
        assert_eq!(out.kind, ProblemKind::Osat);
        assert_eq!(out.ontology.abox, vec![Assertion::Concept(Concept::atom("A"), "_a".into())]);
        assert_eq!(rep.fresh_symbols, vec!["_a"]);
    }

    #[test]
    fn embed_tsat_to_tcsat() {
        let inst = parse_instance("problem tsat\nop not/1 = 10\naxiom not(A) [= A").unwrap();
        let (out, _) = embed(&inst, ProblemKind::Tcsat).unwrap();
        assert_eq!(out.kind, ProblemKind::Tcsat);
        assert_eq!(out.query, Some(Concept::atom("_A")));
        assert_eq!(out.ontology.tbox, inst.ontology.tbox);
    }

    #[test]
    fn embed_rejects_off_chain_pairs() {
        let inst = parse_instance("problem csat\nconcept A").unwrap();
        assert!(matches!(
            embed(&inst, ProblemKind::Tsat),
            Err(ReductionError::UnsupportedPair(ProblemKind::Csat, ProblemKind::Tsat))
        ));
    }

    #[test]
    fn embed_fresh_names_avoid_collisions() {
        let inst = parse_instance("problem tsat\nop not/1 = 10\naxiom not(_A) [= _A").unwrap();
        let (out, rep) = embed(&inst, ProblemKind::Tcsat).unwrap();
        assert_eq!(rep.fresh_symbols, vec!["_A1"]);
        assert_eq!(out.query, Some(Concept::atom("_A1")));
    }

    #[test]
    fn top_gadget_shape() {
        let inst = parse_instance("problem tcsat\nconcept A").unwrap();
        let (out, _) = tcsat_to_tsat_top(&inst).unwrap();
        assert_eq!(out.kind, ProblemKind::Tsat);
        assert_eq!(
            out.ontology.tbox,
            vec![Gci::new(
                Concept::apply("top", Vec::new()),
                Concept::exists("_R", Concept::atom("A"))
            )]
        );
        assert!(out.operator_set.get("top").is_some());
    }

    #[test]
    fn top_gadget_preserves_unsat() {
        let inst =
            parse_instance("problem tcsat\nop bot/0 = 0\naxiom A [= bot\nconcept A").unwrap();
        assert!(!sat(&inst));
        let (out, _) = tcsat_to_tsat_top(&inst).unwrap();
        assert!(!sat(&out));
    }

    #[test]
    fn eliminate_constants_top_only() {
        let inst = parse_instance("problem tsat\nop top/0 = 1\nop not/1 = 10\naxiom top [= A")
            .unwrap();
        let (out, rep) = eliminate_constants_via_neg(&inst).unwrap();
        let not_t =
            Concept::apply("not", vec![Concept::atom("_T")]);
        assert_eq!(
            out.ontology.tbox,
            vec![
                Gci::new(Concept::atom("_T"), Concept::atom("A")),
                Gci::new(not_t, Concept::atom("_T")),
            ]
        );
        assert_eq!(rep.fresh_symbols, vec!["_T"]);
        assert!(out.operator_set.get("top").is_none());
        assert_eq!(sat(&inst), sat(&out));
    }

    #[test]
    fn eliminate_constants_without_constants_is_identity_modulo_ops() {
        let inst = parse_instance("problem tsat\nop not/1 = 10\naxiom not(A) [= A").unwrap();
        let (out, rep) = eliminate_constants_via_neg(&inst).unwrap();
        assert_eq!(out.ontology, inst.ontology);
        assert!(rep.fresh_symbols.is_empty());
    }

    #[test]
    fn eliminate_constants_requires_negation() {
        let inst = parse_instance("problem tsat\nop top/0 = 1\naxiom top [= A").unwrap();
        assert!(matches!(
            eliminate_constants_via_neg(&inst),
            Err(ReductionError::NegationUnavailable)
        ));
    }

    #[test]
    fn negation_gadget_alone_is_sat_and_complements() {
        let ops = OperatorSet::from_funs([BoolFun::top(), BoolFun::bot()]).unwrap();
        let gadget =
            add_negation_gadget(&ops, "A", &SymbolSet::default()).unwrap();
        assert_eq!(gadget.complement_atom, "_A'");
        let inst = ProblemInstance::new(
            ProblemKind::Tsat,
            ops.clone(),
            Ontology { tbox: gadget.axioms.clone(), abox: Vec::new() },
            None,
        )
        .unwrap();
        let verdict = decide(&inst).unwrap();
        let model = verdict.witness().expect("gadget alone is satisfiable");
        let a = eval_concept(model, &Concept::atom("A"), &ops).unwrap();
        let comp =
            eval_concept(model, &Concept::atom(&gadget.complement_atom), &ops).unwrap();
        let domain: std::collections::BTreeSet<usize> = (0..model.domain_size()).collect();
        assert_eq!(
            comp,
            domain.difference(&a).copied().collect::<std::collections::BTreeSet<_>>()
        );
    }

    #[test]
    fn negation_gadget_forces_disjointness() {
        let ops = OperatorSet::from_funs([BoolFun::top(), BoolFun::bot()]).unwrap();
        let gadget = add_negation_gadget(&ops, "A", &SymbolSet::default()).unwrap();
        let mut tbox = gadget.axioms;
        let top = Concept::apply("top", Vec::new());
        tbox.push(Gci::new(top.clone(), Concept::atom("A")));
        tbox.push(Gci::new(top, Concept::atom(&gadget.complement_atom)));
        let inst = ProblemInstance::new(
            ProblemKind::Tsat,
            ops,
            Ontology { tbox, abox: Vec::new() },
            None,
        )
        .unwrap();
        assert_eq!(decide(&inst).unwrap(), Verdict::Unsat);
    }

    #[test]
    fn change_base_and_not_to_nand() {
        let inst = parse_instance(
            "problem tsat\nop and/2 = 0001\nop not/1 = 10\naxiom and(A, B) [= not(A)",
        )
        .unwrap();
        let nand = OperatorSet::from_funs([BoolFun::nand()]).unwrap();
        let (out, _) = change_base(&inst, &nand).unwrap();
        assert!(validate_operator_usage(&out, &nand).is_empty());
        assert_eq!(sat(&inst), sat(&out));
    }

    #[test]
    fn change_base_to_superset_is_verdict_preserving() {
        let inst = parse_instance(
            "problem tcsat\nop and/2 = 0001\naxiom and(A, B) [= B\nconcept and(A, B)",
        )
        .unwrap();
        let bigger =
            OperatorSet::from_funs([BoolFun::and(), BoolFun::or(), BoolFun::not()]).unwrap();
        let (out, _) = change_base(&inst, &bigger).unwrap();
        assert_eq!(sat(&inst), sat(&out));
        assert!(!out.ontology.tbox.is_empty());
    }

    #[test]
    fn change_base_xor_to_standard() {
        let inst =
            parse_instance("problem tsat\nop xor/2 = 0110\naxiom xor(A, B) [= A").unwrap();
        let std_ops =
            OperatorSet::from_funs([BoolFun::and(), BoolFun::not(), BoolFun::or()]).unwrap();
        let (out, _) = change_base(&inst, &std_ops).unwrap();
        assert_eq!(sat(&inst), sat(&out));
    }

    #[test]
    fn change_base_rejects_unrepresentable() {
        let inst = parse_instance("problem tsat\nop or/2 = 0111\naxiom or(A, B) [= A").unwrap();
        let target = OperatorSet::from_funs([BoolFun::and()]).unwrap();
        assert!(matches!(
            change_base(&inst, &target),
            Err(ReductionError::OutsideClone(op)) if op == "or"
        ));
    }

    #[test]
    fn change_base_renders_constants() {
        let inst =
            parse_instance("problem tsat\nop top/0 = 1\nop bot/0 = 0\naxiom top [= some R . A\naxiom A [= bot")
                .unwrap();
        let target = OperatorSet::from_funs([BoolFun::nand()]).unwrap();
        let (out, _) = change_base(&inst, &target).unwrap();
        assert_eq!(sat(&inst), sat(&out));
    }

    #[test]
    fn qbf_reduction_first_axiom_and_count() {
        let phi = Qbf3Cnf::new(vec![Quant::Exists], vec![[1, 1, 1]]).unwrap();
        let (out, rep) = qbf_to_tbox(&phi).unwrap();
        let printed = print_instance(&out);
        let first_axiom = printed.lines().find(|l| l.starts_with("axiom")).unwrap();
        assert_eq!(first_axiom, "axiom top [= some _S . _d0");
        assert_eq!(rep.axiom_count, 23);
        assert_eq!(out.ontology.tbox.len(), 23);
        // Output parses back and uses only the declared constants.
        let reparsed = parse_instance(&printed).unwrap();
        assert_eq!(reparsed, out);
        assert!(validate_operator_usage(&out, &out.operator_set).is_empty());
    }

    #[test]
    fn qbf_reduction_tiny_true_formula() {
        let phi = Qbf3Cnf::new(vec![Quant::Exists], vec![[1, 1, 1]]).unwrap();
        assert!(eval_qbf(&phi).unwrap());
        let (out, _) = qbf_to_tbox(&phi).unwrap();
        let verdict = decide(&out).unwrap();
        match &verdict {
            Verdict::Sat(model) => assert!(check_instance(model, &out).unwrap()),
            Verdict::Unsat => panic!("expected SAT"),
        }
    }

    #[test]
    fn qbf_reduction_tiny_false_formula() {
        let phi = Qbf3Cnf::new(vec![Quant::Forall], vec![[1, 1, 1]]).unwrap();
        assert!(!eval_qbf(&phi).unwrap());
        let (out, _) = qbf_to_tbox(&phi).unwrap();
        assert_eq!(decide(&out).unwrap(), Verdict::Unsat);
    }

    #[test]
    fn taut_reduction_valid_clause() {
        let (out, _) = taut_to_tcsat(&[[1, -1, 1]], 1).unwrap();
        assert!(sat(&out));
    }

    #[test]
    fn taut_reduction_falsifiable_clause() {
        let (out, _) = taut_to_tcsat(&[[1, 1, 1]], 1).unwrap();
        assert!(!sat(&out));
    }

    #[test]
    fn taut_reduction_shape() {
        let (out, rep) = taut_to_tcsat(&[[1, 1, 1]], 1).unwrap();
        assert_eq!(out.kind, ProblemKind::Tcsat);
        assert_eq!(out.query, Some(Concept::atom("_d0")));
        assert_eq!(out.operator_set.len(), 1);
        assert!(out.operator_set.get("bot").is_some());
        let printed = print_instance(&out);
        assert!(!printed.contains("top"));
        assert!(printed.contains("concept _d0"));
        assert!(rep.fresh_symbols.contains(&"_t".to_string()));
    }
}
