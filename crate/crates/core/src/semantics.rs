//! Finite interpretations, the model checker, a brute-force bounded model
//! search, and the two trivial-model constructors.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::boolfun::BoolFunError;
use crate::syntax::{
    subconcepts, Assertion, Concept, OperatorSet, ParseError, ProblemInstance, ProblemKind,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("domain must be nonempty")]
    EmptyDomain,
    #[error("element {element} is outside the domain of size {domain_size}")]
    ElementOutOfRange { element: usize, domain_size: usize },
    #[error("individual '{0}' is not mapped to a domain element")]
    UnmappedIndividual(String),
    #[error("operator '{0}' is not declared")]
    UndeclaredOperator(String),
    #[error("model search exceeded its budget of {budget} candidate interpretations")]
    SearchBudget { budget: u64 },
    #[error("operator '{0}' is not {1}-reproducing")]
    NotReproducing(String, bool),
    #[error("trivial model construction requires kind {expected}, got {got}")]
    WrongKind { expected: ProblemKind, got: ProblemKind },
    #[error(transparent)]
    BoolFun(#[from] BoolFunError),
}

/// A finite interpretation: a domain `{0, …, N-1}` plus extensions.
/// Unmentioned atoms and roles default to empty; looking up an unmapped
/// individual is an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    domain_size: usize,
    pub concept_ext: BTreeMap<String, BTreeSet<usize>>,
    pub role_ext: BTreeMap<String, BTreeSet<(usize, usize)>>,
    pub individual_map: BTreeMap<String, usize>,
}

impl Interpretation {
    pub fn new(domain_size: usize) -> Result<Interpretation, SemanticsError> {
        if domain_size == 0 {
            return Err(SemanticsError::EmptyDomain);
        }
        Ok(Interpretation {
            domain_size,
            concept_ext: BTreeMap::new(),
            role_ext: BTreeMap::new(),
            individual_map: BTreeMap::new(),
        })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn atom_extension(&self, name: &str) -> BTreeSet<usize> {
        self.concept_ext.get(name).cloned().unwrap_or_default()
    }

    pub fn role_pairs(&self, name: &str) -> BTreeSet<(usize, usize)> {
        self.role_ext.get(name).cloned().unwrap_or_default()
    }

    pub fn set_atom(&mut self, name: impl Into<String>, ext: BTreeSet<usize>) {
        self.concept_ext.insert(name.into(), ext);
    }

    pub fn set_role(&mut self, name: impl Into<String>, pairs: BTreeSet<(usize, usize)>) {
        self.role_ext.insert(name.into(), pairs);
    }

    pub fn map_individual(&mut self, name: impl Into<String>, element: usize) {
        self.individual_map.insert(name.into(), element);
    }

    /// The witness text format: `domain N`, then one line per atom, role and
    /// individual.
    pub fn to_text(&self) -> String {
        let mut out = format!("domain {}\n", self.domain_size);
        for (a, ext) in &self.concept_ext {
            let elems: Vec<String> = ext.iter().map(|e| e.to_string()).collect();
            out.push_str(&format!("atom {} = {{{}}}\n", a, elems.join(",")));
        }
        for (r, pairs) in &self.role_ext {
            let elems: Vec<String> =
                pairs.iter().map(|(x, y)| format!("({x},{y})")).collect();
            out.push_str(&format!("role {} = {{{}}}\n", r, elems.join(",")));
        }
        for (i, e) in &self.individual_map {
            out.push_str(&format!("ind {} = {}\n", i, e));
        }
        out
    }

    /// Parses the witness text format back; used for test replay.
    pub fn from_text(text: &str) -> Result<Interpretation, ParseError> {
        let mut domain: Option<usize> = None;
        let mut interp: Option<Interpretation> = None;
        for (lineno0, raw) in text.lines().enumerate() {
            let lineno = lineno0 + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| ParseError { line: lineno, col: 1, msg: msg.into() };
            let (head, rest) = line.split_once(' ').ok_or_else(|| err("malformed line"))?;
            match head {
                "domain" => {
                    let n: usize =
                        rest.trim().parse().map_err(|_| err("domain size must be an integer"))?;
                    if n == 0 {
                        return Err(err("domain must be nonempty"));
                    }
                    domain = Some(n);
                    interp = Some(Interpretation::new(n).unwrap());
                }
                "atom" | "role" | "ind" => {
                    let n = domain.ok_or_else(|| err("'domain' line must come first"))?;
                    let interp = interp.as_mut().unwrap();
                    let (name, value) =
                        rest.split_once('=').ok_or_else(|| err("expected '='"))?;
                    let name = name.trim().to_string();
                    let value = value.trim();
                    match head {
                        "atom" => {
                            let ext = parse_element_set(value, n)
                                .map_err(|m| err(&m))?;
                            interp.set_atom(name, ext);
                        }
                        "role" => {
                            let pairs = parse_pair_set(value, n).map_err(|m| err(&m))?;
                            interp.set_role(name, pairs);
                        }
                        _ => {
                            let e: usize =
                                value.parse().map_err(|_| err("element must be an integer"))?;
                            if e >= n {
                                return Err(err("element out of range"));
                            }
                            interp.map_individual(name, e);
                        }
                    }
                }
                _ => return Err(err("unknown line kind")),
            }
        }
        interp.ok_or_else(|| ParseError { line: 1, col: 1, msg: "missing 'domain' line".into() })
    }
}

fn parse_element_set(value: &str, n: usize) -> Result<BTreeSet<usize>, String> {
    let inner = value
        .strip_prefix('{')
        .and_then(|v| v.strip_suffix('}'))
        .ok_or("expected a {…} set")?;
    let mut out = BTreeSet::new();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let e: usize = part.parse().map_err(|_| format!("bad element '{part}'"))?;
        if e >= n {
            return Err(format!("element {e} out of range"));
        }
        out.insert(e);
    }
    Ok(out)
}

fn parse_pair_set(value: &str, n: usize) -> Result<BTreeSet<(usize, usize)>, String> {
    let inner = value
        .strip_prefix('{')
        .and_then(|v| v.strip_suffix('}'))
        .ok_or("expected a {…} set")?;
    let mut out = BTreeSet::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
        if rest.is_empty() {
            break;
        }
        let close = rest.find(')').ok_or("expected ')'")?;
        let pair = &rest[..=close];
        let inner_pair = pair
            .strip_prefix('(')
            .and_then(|p| p.strip_suffix(')'))
            .ok_or("expected '(x,y)'")?;
        let (x, y) = inner_pair.split_once(',').ok_or("expected '(x,y)'")?;
        let x: usize = x.trim().parse().map_err(|_| "bad pair element".to_string())?;
        let y: usize = y.trim().parse().map_err(|_| "bad pair element".to_string())?;
        if x >= n || y >= n {
            return Err("pair element out of range".into());
        }
        out.insert((x, y));
        rest = rest[close + 1..].trim_start();
    }
    Ok(out)
}

/// Evaluates a concept to its extension by structural recursion; operator
/// applications go pointwise through the truth table on the membership
/// vector of the arguments.
pub fn eval_concept(
    interp: &Interpretation,
    concept: &Concept,
    ops: &OperatorSet,
) -> Result<BTreeSet<usize>, SemanticsError> {
    let n = interp.domain_size;
    match concept {
        Concept::Atom(a) => Ok(interp.atom_extension(a)),
        Concept::Apply(op, args) => {
            let f = ops
                .get(op)
                .ok_or_else(|| SemanticsError::UndeclaredOperator(op.clone()))?;
            let arg_exts: Vec<BTreeSet<usize>> = args
                .iter()
                .map(|c| eval_concept(interp, c, ops))
                .collect::<Result<_, _>>()?;
            let mut out = BTreeSet::new();
            for x in 0..n {
                let vals: Vec<bool> = arg_exts.iter().map(|ext| ext.contains(&x)).collect();
                if f.eval(&vals)? {
                    out.insert(x);
                }
            }
            Ok(out)
        }
        Concept::Exists(r, c) => {
            let body = eval_concept(interp, c, ops)?;
            let pairs = interp.role_pairs(r);
            Ok((0..n).filter(|x| pairs.iter().any(|(a, b)| a == x && body.contains(b))).collect())
        }
        Concept::Forall(r, c) => {
            let body = eval_concept(interp, c, ops)?;
            let pairs = interp.role_pairs(r);
            Ok((0..n)
                .filter(|x| pairs.iter().all(|(a, b)| a != x || body.contains(b)))
                .collect())
        }
    }
}

/// True iff the interpretation satisfies every axiom of the instance and,
/// for query-bearing kinds, gives the query a nonempty extension.
pub fn check_instance(
    interp: &Interpretation,
    inst: &ProblemInstance,
) -> Result<bool, SemanticsError> {
    let ops = &inst.operator_set;
    for gci in &inst.ontology.tbox {
        let lhs = eval_concept(interp, &gci.lhs, ops)?;
        let rhs = eval_concept(interp, &gci.rhs, ops)?;
        if !lhs.is_subset(&rhs) {
            return Ok(false);
        }
    }
    for a in &inst.ontology.abox {
        match a {
            Assertion::Concept(c, x) => {
                let e = *interp
                    .individual_map
                    .get(x)
                    .ok_or_else(|| SemanticsError::UnmappedIndividual(x.clone()))?;
                if !eval_concept(interp, c, ops)?.contains(&e) {
                    return Ok(false);
                }
            }
            Assertion::Role(r, x, y) => {
                let ex = *interp
                    .individual_map
                    .get(x)
                    .ok_or_else(|| SemanticsError::UnmappedIndividual(x.clone()))?;
                let ey = *interp
                    .individual_map
                    .get(y)
                    .ok_or_else(|| SemanticsError::UnmappedIndividual(y.clone()))?;
                if !interp.role_pairs(r).contains(&(ex, ey)) {
                    return Ok(false);
                }
            }
        }
    }
    if let Some(q) = &inst.query {
        if eval_concept(interp, q, ops)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Budget for the brute-force search, counted in candidate interpretations.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub max_candidates: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_candidates: 10_000_000 }
    }
}

/// Exhaustively enumerates interpretations of size 1..=max_n over the
/// symbols occurring in the instance, in a fixed order (atom extensions as
/// binary counters, then role extensions, then individual maps), and returns
/// the first satisfying one. Absence proves only "no model of size <= max_n".
pub fn bounded_model_search(
    inst: &ProblemInstance,
    max_n: usize,
    cfg: SearchConfig,
) -> Result<Option<Interpretation>, SemanticsError> {
    let syms = inst.symbols();
    let atoms: Vec<&String> = syms.atoms.iter().collect();
    let roles: Vec<&String> = syms.roles.iter().collect();
    let individuals: Vec<&String> = syms.individuals.iter().collect();

    let mut candidates: u64 = 0;
    for n in 1..=max_n {
        // Odometer state: one subset counter per atom (n bits), one per role
        // (n*n bits), one base-n digit per individual.
        let atom_limit = 1u64 << n;
        let role_limit = 1u64 << (n * n);
        let mut atom_c = vec![0u64; atoms.len()];
        let mut role_c = vec![0u64; roles.len()];
        let mut ind_c = vec![0usize; individuals.len()];
        loop {
            candidates += 1;
            if candidates > cfg.max_candidates {
                return Err(SemanticsError::SearchBudget { budget: cfg.max_candidates });
            }
            let mut interp = Interpretation::new(n).unwrap();
            for (a, &bits) in atoms.iter().zip(&atom_c) {
                let ext: BTreeSet<usize> = (0..n).filter(|i| (bits >> i) & 1 == 1).collect();
                interp.set_atom(a.as_str(), ext);
            }
            for (r, &bits) in roles.iter().zip(&role_c) {
                let pairs: BTreeSet<(usize, usize)> = (0..n * n)
                    .filter(|p| (bits >> p) & 1 == 1)
                    .map(|p| (p / n, p % n))
                    .collect();
                interp.set_role(r.as_str(), pairs);
            }
            for (i, &e) in individuals.iter().zip(&ind_c) {
                interp.map_individual(i.as_str(), e);
            }
            if check_instance(&interp, inst)? {
                return Ok(Some(interp));
            }
            // Advance the odometer; atoms vary fastest, then roles, then
            // individual maps.
            if !advance(&mut atom_c, atom_limit)
                && !advance(&mut role_c, role_limit)
                && !advance_base(&mut ind_c, n)
            {
                break;
            }
        }
    }
    Ok(None)
}

fn advance(counters: &mut [u64], limit: u64) -> bool {
    for c in counters {
        *c += 1;
        if *c < limit {
            return true;
        }
        *c = 0;
    }
    false
}

fn advance_base(counters: &mut [usize], base: usize) -> bool {
    for c in counters {
        *c += 1;
        if *c < base {
            return true;
        }
        *c = 0;
    }
    false
}

/// The single-element interpretation that satisfies any instance over
/// true-reproducing operators: every atom holds at the one element, every
/// role loops, every individual maps there.
pub fn trivial_model_r1(inst: &ProblemInstance) -> Result<Interpretation, SemanticsError> {
    for f in inst.operator_set.iter() {
        if !f.properties().reproduces_true {
            return Err(SemanticsError::NotReproducing(f.name().to_string(), true));
        }
    }
    let syms = inst.symbols();
    let mut interp = Interpretation::new(1).unwrap();
    for a in &syms.atoms {
        interp.set_atom(a.as_str(), BTreeSet::from([0]));
    }
    for r in &syms.roles {
        interp.set_role(r.as_str(), BTreeSet::from([(0, 0)]));
    }
    for i in &syms.individuals {
        interp.map_individual(i.as_str(), 0);
    }
    Ok(interp)
}

/// The single-element interpretation that satisfies any TBox over
/// false-reproducing operators: every atom empty, every role looping. The
/// loop is what falsifies `all R . bot` on axiom left-hand sides.
pub fn trivial_model_r0(inst: &ProblemInstance) -> Result<Interpretation, SemanticsError> {
    if inst.kind != ProblemKind::Tsat {
        return Err(SemanticsError::WrongKind { expected: ProblemKind::Tsat, got: inst.kind });
    }
    for f in inst.operator_set.iter() {
        if !f.properties().reproduces_false {
            return Err(SemanticsError::NotReproducing(f.name().to_string(), false));
        }
    }
    let syms = inst.symbols();
    let mut interp = Interpretation::new(1).unwrap();
    for r in &syms.roles {
        interp.set_role(r.as_str(), BTreeSet::from([(0, 0)]));
    }
    Ok(interp)
}

/// Upper bound on interesting model sizes for an instance: the number of
/// distinct subconcepts (each element of a filtrated model realizes a set of
/// them). Only used to pick oracle bounds at desk scale.
pub fn closure_size(inst: &ProblemInstance) -> usize {
    subconcepts(inst).len()
}
