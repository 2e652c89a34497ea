//! A signed tableau that decides satisfiability of a problem instance over
//! an arbitrary operator set, extracting a witness model on success.
//!
//! Labels carry signed concepts: `T C` (the element is in `C`) or `F C` (it
//! is not). Signs replace negation normal form, which is unavailable when
//! the operator set lacks negation. The rules:
//!
//! - Boolean: `T o(C1,…,Cn)` branches over the truth-table rows where `o` is
//!   true, asserting each row's sign pattern on the arguments; `F o(…)`
//!   branches over the false rows.
//! - GCI: every node branches `F lhs | T rhs` for every axiom (F side first).
//! - Generating: `T some R.C` and `F all R.C` require an `R`-successor
//!   seeded with `T C` resp. `F C`.
//! - Propagating: `T all R.C` and `F some R.C` push `T C` resp. `F C` into
//!   every `R`-successor.
//! - Clash: `T C` and `F C` in one label, or a signed operator application
//!   with no matching truth-table row.
//! - Blocking: a node whose saturated label equals an ancestor's becomes a
//!   back edge to that ancestor, which bounds every path by the number of
//!   distinct labels over the signed subconcept closure.
//!
//! Propagation never flows from successors back to their creator, so once a
//! label is saturated its successor subtrees are independent. The search
//! exploits that: named individuals (plus the query element) saturate
//! jointly as a root cluster, every required successor is solved as its own
//! subproblem, and unsatisfiable seeds and labels are memoized for the
//! duration of the call. Rules with a single viable outcome are applied
//! before any branching, and every required successor's seed is checked for
//! an immediate clash when its parent changes, which decides the one-step
//! role gadgets that dominate reduction outputs without expanding them.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::boolfun::BoolFun;
use crate::semantics::{check_instance, Interpretation};
use crate::syntax::{subconcepts, Assertion, Concept, ProblemInstance};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableauError {
    #[error("tableau exceeded its node budget of {0}")]
    NodeBudget(usize),
    #[error("tableau exceeded its step budget of {0}")]
    StepBudget(u64),
}

/// The decision outcome: a satisfying finite interpretation or a refutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(Interpretation),
    Unsat,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn witness(&self) -> Option<&Interpretation> {
        match self {
            Verdict::Sat(m) => Some(m),
            Verdict::Unsat => None,
        }
    }
}

/// Search resource limits.
#[derive(Debug, Clone, Copy)]
pub struct TableauConfig {
    pub max_nodes: usize,
    pub max_steps: u64,
}

impl Default for TableauConfig {
    fn default() -> Self {
        TableauConfig { max_nodes: 200_000, max_steps: 20_000_000 }
    }
}

/// Decides the instance with default budgets.
pub fn decide(inst: &ProblemInstance) -> Result<Verdict, TableauError> {
    decide_with(inst, TableauConfig::default())
}

pub fn decide_with(inst: &ProblemInstance, cfg: TableauConfig) -> Result<Verdict, TableauError> {
    let mut engine = Engine::new(inst, cfg);
    let cluster = engine.initial_cluster();
    match engine.search_cluster(cluster)? {
        Some(solution) => {
            let model = engine.extract(&solution);
            // Soundness is machine-checked: a witness that fails the model
            // checker is a bug, never a verdict.
            assert!(
                check_instance(&model, inst).unwrap_or(false),
                "tableau produced an invalid witness"
            );
            Ok(Verdict::Sat(model))
        }
        None => Ok(Verdict::Unsat),
    }
}

// Literal encoding: concept index shifted left once, low bit 1 for T.
type Lit = u32;

fn t_lit(c: u32) -> Lit {
    (c << 1) | 1
}

fn f_lit(c: u32) -> Lit {
    c << 1
}

fn lit_concept(l: Lit) -> u32 {
    l >> 1
}

fn complement(l: Lit) -> Lit {
    l ^ 1
}

fn signed(c: u32, sign: bool) -> Lit {
    if sign {
        t_lit(c)
    } else {
        f_lit(c)
    }
}

/// Fixed-width bitset over signed literals.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Label {
    words: Box<[u64]>,
}

const EVEN_BITS: u64 = 0x5555_5555_5555_5555;

impl Label {
    fn new(word_count: usize) -> Label {
        Label { words: vec![0; word_count].into_boxed_slice() }
    }

    fn insert(&mut self, lit: Lit) -> bool {
        let w = (lit / 64) as usize;
        let mask = 1u64 << (lit % 64);
        let fresh = self.words[w] & mask == 0;
        self.words[w] |= mask;
        fresh
    }

    fn contains(&self, lit: Lit) -> bool {
        self.words[(lit / 64) as usize] & (1u64 << (lit % 64)) != 0
    }

    /// Both signs of some concept present.
    fn has_clash(&self) -> bool {
        self.words.iter().any(|w| w & (w >> 1) & EVEN_BITS != 0)
    }

    fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros();
                    bits &= bits - 1;
                    Some(wi as u32 * 64 + b)
                }
            })
        })
    }
}

/// The jointly saturated named part of the tableau: one node per ABox
/// individual, one for the query, or a single anonymous node.
#[derive(Clone)]
struct Cluster {
    labels: Vec<Label>,
    /// (from, role, to) over cluster indices; the asserted role edges.
    edges: Vec<(usize, usize, usize)>,
}

/// A solved successor: either a fresh subtree or a back edge to the
/// ancestor at the given depth of the current path.
enum Sub {
    Tree(TreeNode),
    Back(usize),
}

struct TreeNode {
    label: Label,
    children: Vec<(usize, Sub)>,
}

/// A satisfying tableau: the saturated cluster plus one solved subtree per
/// cluster obligation.
struct Solution {
    cluster: Cluster,
    attachments: Vec<(usize, usize, Sub)>,
}

/// Structure of one closure concept, resolved to indices.
enum CKind {
    Atom,
    Apply,
    Exists { role: usize, body: u32 },
    Forall { role: usize, body: u32 },
}

enum ApplyStatus {
    Witnessed,
    Clash,
    Forced(usize),
    Branch(Vec<usize>),
}

struct Engine<'a> {
    inst: &'a ProblemInstance,
    concepts: Vec<Concept>,
    kinds: Vec<CKind>,
    /// Per concept and sign: the argument literal patterns of the matching
    /// truth-table rows, minus rows that contradict themselves or contain an
    /// unrealizable literal. An empty pattern is an already-witnessed row.
    rows_true: Vec<Vec<Vec<Lit>>>,
    rows_false: Vec<Vec<Vec<Lit>>>,
    /// Literal can never be witnessed (`F top`, `T bot` and friends).
    unrealizable: Vec<bool>,
    axioms: Vec<(u32, u32)>,
    roles: Vec<String>,
    individuals: Vec<String>,
    words: usize,
    cfg: TableauConfig,
    steps: u64,
    nodes_created: usize,
    failed_seeds: HashSet<Label>,
    failed_labels: HashSet<Label>,
}

impl<'a> Engine<'a> {
    fn new(inst: &'a ProblemInstance, cfg: TableauConfig) -> Engine<'a> {
        let concepts = subconcepts(inst);
        let index: BTreeMap<&Concept, u32> =
            concepts.iter().enumerate().map(|(i, c)| (c, i as u32)).collect();
        let syms = inst.symbols();
        let roles: Vec<String> = syms.roles.iter().cloned().collect();
        let role_index: BTreeMap<&str, usize> =
            roles.iter().enumerate().map(|(i, r)| (r.as_str(), i)).collect();
        let individuals: Vec<String> = syms.individuals.iter().cloned().collect();

        let ops: Vec<&BoolFun> = inst.operator_set.iter().collect();
        let op_index: BTreeMap<&str, usize> =
            ops.iter().enumerate().map(|(i, f)| (f.name(), i)).collect();

        let mut kinds = Vec::with_capacity(concepts.len());
        for c in &concepts {
            kinds.push(match c {
                Concept::Atom(_) => CKind::Atom,
                Concept::Apply(..) => CKind::Apply,
                Concept::Exists(r, body) => {
                    CKind::Exists { role: role_index[r.as_str()], body: index[body.as_ref()] }
                }
                Concept::Forall(r, body) => {
                    CKind::Forall { role: role_index[r.as_str()], body: index[body.as_ref()] }
                }
            });
        }

        // Row patterns are computed in two passes so that row viability can
        // take unrealizable argument literals into account.
        let mut rows_true: Vec<Vec<Vec<Lit>>> = vec![Vec::new(); concepts.len()];
        let mut rows_false: Vec<Vec<Vec<Lit>>> = vec![Vec::new(); concepts.len()];
        let mut unrealizable = vec![false; 2 * concepts.len()];
        // Children precede parents in the closure, so one ordered pass
        // suffices for the unrealizability fixpoint.
        for (ci, c) in concepts.iter().enumerate() {
            if let Concept::Apply(op, args) = c {
                let f = ops[op_index[op.as_str()]];
                let n = f.arity();
                let arg_ids: Vec<u32> = args.iter().map(|a| index[a]).collect();
                let mut tr = Vec::new();
                let mut fr = Vec::new();
                'rows: for p in 0..f.rows() {
                    let mut pattern = Vec::with_capacity(n);
                    for (j, &arg) in arg_ids.iter().enumerate() {
                        let val = (p >> (n - 1 - j)) & 1 == 1;
                        let lit = signed(arg, val);
                        if pattern.contains(&complement(lit)) || unrealizable[lit as usize] {
                            continue 'rows;
                        }
                        if !pattern.contains(&lit) {
                            pattern.push(lit);
                        }
                    }
                    if f.value_at(p) {
                        tr.push(pattern);
                    } else {
                        fr.push(pattern);
                    }
                }
                unrealizable[t_lit(ci as u32) as usize] = tr.is_empty();
                unrealizable[f_lit(ci as u32) as usize] = fr.is_empty();
                rows_true[ci] = tr;
                rows_false[ci] = fr;
            }
        }

        let axioms = inst
            .ontology
            .tbox
            .iter()
            .map(|gci| (index[&gci.lhs], index[&gci.rhs]))
            .collect();

        let words = (2 * concepts.len()).div_ceil(64).max(1);
        Engine {
            inst,
            concepts,
            kinds,
            rows_true,
            rows_false,
            unrealizable,
            axioms,
            roles,
            individuals,
            words,
            cfg,
            steps: 0,
            nodes_created: 0,
            failed_seeds: HashSet::new(),
            failed_labels: HashSet::new(),
        }
    }

    fn concept_id(&self, c: &Concept) -> u32 {
        self.concepts.iter().position(|x| x == c).expect("concept in closure") as u32
    }

    fn initial_cluster(&self) -> Cluster {
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        let mut node_of: BTreeMap<&str, usize> = BTreeMap::new();
        for ind in &self.individuals {
            node_of.insert(ind.as_str(), labels.len());
            labels.push(Label::new(self.words));
        }
        for a in &self.inst.ontology.abox {
            match a {
                Assertion::Concept(c, x) => {
                    let id = self.concept_id(c);
                    labels[node_of[x.as_str()]].insert(t_lit(id));
                }
                Assertion::Role(r, x, y) => {
                    let role = self.roles.iter().position(|n| n == r).unwrap();
                    edges.push((node_of[x.as_str()], role, node_of[y.as_str()]));
                }
            }
        }
        if let Some(q) = &self.inst.query {
            let id = self.concept_id(q);
            let mut label = Label::new(self.words);
            label.insert(t_lit(id));
            labels.push(label);
        }
        if labels.is_empty() {
            // A TBox alone still needs a nonempty domain.
            labels.push(Label::new(self.words));
        }
        Cluster { labels, edges }
    }

    fn tick(&mut self) -> Result<(), TableauError> {
        self.steps += 1;
        if self.steps > self.cfg.max_steps {
            return Err(TableauError::StepBudget(self.cfg.max_steps));
        }
        Ok(())
    }

    fn rows_for(&self, concept: u32, sign: bool) -> &[Vec<Lit>] {
        if sign {
            &self.rows_true[concept as usize]
        } else {
            &self.rows_false[concept as usize]
        }
    }

    fn apply_status(&self, label: &Label, lit: Lit) -> Option<ApplyStatus> {
        let c = lit_concept(lit);
        if !matches!(self.kinds[c as usize], CKind::Apply) {
            return None;
        }
        let rows = self.rows_for(c, lit & 1 == 1);
        let mut viable = Vec::new();
        for (i, pattern) in rows.iter().enumerate() {
            if pattern.iter().all(|&l| label.contains(l)) {
                return Some(ApplyStatus::Witnessed);
            }
            if pattern.iter().all(|&l| !label.contains(complement(l))) {
                viable.push(i);
            }
        }
        Some(match viable.len() {
            0 => ApplyStatus::Clash,
            1 => ApplyStatus::Forced(viable[0]),
            _ => ApplyStatus::Branch(viable),
        })
    }

    /// Literals a node pushes into every successor over the given role.
    fn pushed_lits(&self, label: &Label, role: usize) -> Vec<Lit> {
        let mut out = Vec::new();
        for lit in label.iter() {
            match &self.kinds[lit_concept(lit) as usize] {
                CKind::Forall { role: r, body } if *r == role && lit & 1 == 1 => {
                    out.push(t_lit(*body))
                }
                CKind::Exists { role: r, body } if *r == role && lit & 1 == 0 => {
                    out.push(f_lit(*body))
                }
                _ => {}
            }
        }
        out
    }

    /// The generating literals of a label: (role, seed literal) pairs.
    fn obligations(&self, label: &Label) -> Vec<(usize, Lit)> {
        let mut out = Vec::new();
        for lit in label.iter() {
            match &self.kinds[lit_concept(lit) as usize] {
                CKind::Exists { role, body } if lit & 1 == 1 => out.push((*role, t_lit(*body))),
                CKind::Forall { role, body } if lit & 1 == 0 => out.push((*role, f_lit(*body))),
                _ => {}
            }
        }
        out
    }

    /// Would a successor seeded by this obligation clash on arrival?
    fn seeds_consistent(&self, label: &Label) -> bool {
        for (role, seed) in self.obligations(label) {
            let mut combined = self.pushed_lits(label, role);
            combined.push(seed);
            for (i, &a) in combined.iter().enumerate() {
                if self.unrealizable[a as usize] {
                    return false;
                }
                if combined[i + 1..].contains(&complement(a)) {
                    return false;
                }
            }
        }
        true
    }

    /// A literal the label cannot accommodate: its complement is present,
    /// or no truth-table row can ever witness it.
    fn lit_closed(&self, label: &Label, lit: Lit) -> bool {
        label.contains(complement(lit)) || self.unrealizable[lit as usize]
    }

    /// Non-branching consequences within one label; false on clash.
    fn propagate_label(&self, label: &mut Label) -> bool {
        loop {
            if label.has_clash() {
                return false;
            }
            let mut changed = false;
            let lits: Vec<Lit> = label.iter().collect();
            for &lit in &lits {
                if self.unrealizable[lit as usize] {
                    return false;
                }
                match self.apply_status(label, lit) {
                    Some(ApplyStatus::Clash) => return false,
                    Some(ApplyStatus::Forced(row)) => {
                        let pattern = &self.rows_for(lit_concept(lit), lit & 1 == 1)[row];
                        for &l in pattern {
                            changed |= label.insert(l);
                        }
                    }
                    _ => {}
                }
            }
            for &(lhs, rhs) in &self.axioms {
                if label.contains(f_lit(lhs)) || label.contains(t_lit(rhs)) {
                    continue;
                }
                let f_open = !self.lit_closed(label, f_lit(lhs));
                let t_open = !self.lit_closed(label, t_lit(rhs));
                match (f_open, t_open) {
                    (false, false) => return false,
                    (false, true) => changed |= label.insert(t_lit(rhs)),
                    (true, false) => changed |= label.insert(f_lit(lhs)),
                    (true, true) => {}
                }
            }
            if !changed {
                return self.seeds_consistent(label);
            }
        }
    }

    /// The first branching rule of a label: boolean rows ascending, then
    /// GCIs in axiom order with the F side first.
    fn find_label_branch(&self, label: &Label) -> Option<Vec<Vec<Lit>>> {
        for lit in label.iter() {
            if let Some(ApplyStatus::Branch(rows)) = self.apply_status(label, lit) {
                let c = lit_concept(lit);
                let sign = lit & 1 == 1;
                return Some(
                    rows.into_iter().map(|row| self.rows_for(c, sign)[row].clone()).collect(),
                );
            }
        }
        for &(lhs, rhs) in &self.axioms {
            if label.contains(f_lit(lhs)) || label.contains(t_lit(rhs)) {
                continue;
            }
            if !self.lit_closed(label, f_lit(lhs)) && !self.lit_closed(label, t_lit(rhs)) {
                return Some(vec![vec![f_lit(lhs)], vec![t_lit(rhs)]]);
            }
        }
        None
    }

    /// Solves one anonymous node: saturate, block against the path, then
    /// solve every successor obligation as an independent subproblem.
    fn search_node(
        &mut self,
        mut label: Label,
        path: &mut Vec<Label>,
    ) -> Result<Option<Sub>, TableauError> {
        self.tick()?;
        if !self.propagate_label(&mut label) {
            return Ok(None);
        }
        if let Some(alternatives) = self.find_label_branch(&label) {
            for additions in alternatives {
                let mut next = label.clone();
                for l in additions {
                    next.insert(l);
                }
                if let Some(sub) = self.search_node(next, path)? {
                    return Ok(Some(sub));
                }
            }
            return Ok(None);
        }
        // Saturated: an equal ancestor label becomes a back edge.
        if let Some(depth) = path.iter().position(|p| *p == label) {
            return Ok(Some(Sub::Back(depth)));
        }
        if self.failed_labels.contains(&label) {
            return Ok(None);
        }
        let mut children = Vec::new();
        for (role, seed_lit) in self.obligations(&label) {
            let mut seed = Label::new(self.words);
            seed.insert(seed_lit);
            for l in self.pushed_lits(&label, role) {
                seed.insert(l);
            }
            path.push(label.clone());
            let solved = self.solve_child(seed, path)?;
            path.pop();
            match solved {
                Some(sub) => children.push((role, sub)),
                None => {
                    // No subtree below this label can exist, under any path.
                    self.failed_labels.insert(label);
                    return Ok(None);
                }
            }
        }
        Ok(Some(Sub::Tree(TreeNode { label, children })))
    }

    /// Entry point for one required successor, with failure memoization:
    /// a seed's satisfiability depends only on the TBox, never on the path.
    fn solve_child(
        &mut self,
        seed: Label,
        path: &mut Vec<Label>,
    ) -> Result<Option<Sub>, TableauError> {
        if self.failed_seeds.contains(&seed) {
            return Ok(None);
        }
        self.nodes_created += 1;
        if self.nodes_created > self.cfg.max_nodes {
            return Err(TableauError::NodeBudget(self.cfg.max_nodes));
        }
        match self.search_node(seed.clone(), path)? {
            Some(sub) => Ok(Some(sub)),
            None => {
                self.failed_seeds.insert(seed);
                Ok(None)
            }
        }
    }

    /// Non-branching consequences across the cluster; false on clash.
    fn propagate_cluster(&mut self, cluster: &mut Cluster) -> Result<bool, TableauError> {
        loop {
            self.tick()?;
            let mut changed = false;
            for label in &mut cluster.labels {
                if !self.propagate_label(label) {
                    return Ok(false);
                }
            }
            for &(from, role, to) in &cluster.edges {
                let pushes = self.pushed_lits(&cluster.labels[from], role);
                for l in pushes {
                    changed |= cluster.labels[to].insert(l);
                }
            }
            if !changed {
                return Ok(true);
            }
        }
    }

    fn find_cluster_branch(&self, cluster: &Cluster) -> Option<(usize, Vec<Vec<Lit>>)> {
        cluster
            .labels
            .iter()
            .enumerate()
            .find_map(|(ni, label)| self.find_label_branch(label).map(|alts| (ni, alts)))
    }

    /// Saturates the named cluster, then solves every obligation of every
    /// cluster node as an independent subproblem.
    fn search_cluster(&mut self, mut cluster: Cluster) -> Result<Option<Solution>, TableauError> {
        if !self.propagate_cluster(&mut cluster)? {
            return Ok(None);
        }
        if let Some((ni, alternatives)) = self.find_cluster_branch(&cluster) {
            for additions in alternatives {
                let mut next = cluster.clone();
                for l in additions {
                    next.labels[ni].insert(l);
                }
                if let Some(solution) = self.search_cluster(next)? {
                    return Ok(Some(solution));
                }
            }
            return Ok(None);
        }
        let mut attachments = Vec::new();
        for ni in 0..cluster.labels.len() {
            for (role, seed_lit) in self.obligations(&cluster.labels[ni]) {
                let mut seed = Label::new(self.words);
                seed.insert(seed_lit);
                for l in self.pushed_lits(&cluster.labels[ni], role) {
                    seed.insert(l);
                }
                let mut path = vec![cluster.labels[ni].clone()];
                match self.solve_child(seed, &mut path)? {
                    Some(sub) => attachments.push((ni, role, sub)),
                    None => return Ok(None),
                }
            }
        }
        Ok(Some(Solution { cluster, attachments }))
    }

    /// Reads the witness off a solution: cluster nodes first, then each
    /// attached subtree depth-first; back edges resolve against the numbers
    /// on the current path.
    fn extract(&self, solution: &Solution) -> Interpretation {
        let mut labels: Vec<&Label> = solution.cluster.labels.iter().collect();
        let mut edges: Vec<(usize, usize, usize)> = solution.cluster.edges.clone();

        fn place<'t>(
            sub: &'t Sub,
            parent: usize,
            role: usize,
            path_numbers: &mut Vec<usize>,
            labels: &mut Vec<&'t Label>,
            edges: &mut Vec<(usize, usize, usize)>,
        ) {
            match sub {
                Sub::Back(depth) => edges.push((parent, role, path_numbers[*depth])),
                Sub::Tree(node) => {
                    let n = labels.len();
                    labels.push(&node.label);
                    edges.push((parent, role, n));
                    path_numbers.push(n);
                    for (r, child) in &node.children {
                        place(child, n, *r, path_numbers, labels, edges);
                    }
                    path_numbers.pop();
                }
            }
        }

        for (ni, role, sub) in &solution.attachments {
            let mut path_numbers = vec![*ni];
            place(sub, *ni, *role, &mut path_numbers, &mut labels, &mut edges);
        }

        let closure = self.concepts.len() as u32;
        debug_assert!(labels.len() as u128 <= 1u128 << (2 * closure).min(127));

        let mut model = Interpretation::new(labels.len()).expect("nonempty domain");
        for (ci, concept) in self.concepts.iter().enumerate() {
            if let Concept::Atom(name) = concept {
                let ext = labels
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| l.contains(t_lit(ci as u32)))
                    .map(|(i, _)| i)
                    .collect();
                model.set_atom(name.as_str(), ext);
            }
        }
        for (ri, role) in self.roles.iter().enumerate() {
            let pairs =
                edges.iter().filter(|&&(_, r, _)| r == ri).map(|&(f, _, t)| (f, t)).collect();
            model.set_role(role.as_str(), pairs);
        }
        for (ii, ind) in self.individuals.iter().enumerate() {
            model.map_individual(ind.as_str(), ii);
        }
        model
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{bounded_model_search, SearchConfig};
    use crate::syntax::parse_instance;

    fn verdict(src: &str) -> Verdict {
        decide(&parse_instance(src).unwrap()).unwrap()
    }

    #[test]
    fn query_alone_is_sat_with_singleton_witness() {
        match verdict("problem csat\nconcept A") {
            Verdict::Sat(m) => assert_eq!(m.domain_size(), 1),
            Verdict::Unsat => panic!("expected SAT"),
        }
    }

    #[test]
    fn flip_flop_tbox_is_unsat() {
        let v = verdict("problem tsat\nop not/1 = 10\naxiom A [= not(A)\naxiom not(A) [= A");
        assert_eq!(v, Verdict::Unsat);
    }

    #[test]
    fn query_forced_empty_is_unsat() {
        let v = verdict("problem tcsat\nop bot/0 = 0\naxiom A [= bot\nconcept A");
        assert_eq!(v, Verdict::Unsat);
    }

    #[test]
    fn gcis_apply_to_generated_successors() {
        // Every element needs an R-successor in A, and A is contradictory.
        let v = verdict(
            "problem tsat\nop top/0 = 1\nop not/1 = 10\naxiom top [= some R . A\naxiom A [= not(A)",
        );
        assert_eq!(v, Verdict::Unsat);
    }

    #[test]
    fn blocking_terminates_infinite_chains() {
        let v = verdict("problem tsat\nop top/0 = 1\naxiom top [= some R . A");
        match v {
            Verdict::Sat(m) => assert!(m.domain_size() <= 3),
            Verdict::Unsat => panic!("expected SAT"),
        }
    }

    #[test]
    fn forall_bottom_loop_case() {
        let v = verdict("problem tsat\nop bot/0 = 0\naxiom all R . bot [= bot");
        assert!(v.is_sat());
    }

    #[test]
    fn abox_roots_and_edges() {
        let v = verdict(
            "problem osat\nop not/1 = 10\nassert A (x)\nassert all R . not(A) (x)\nassert R(x, x)",
        );
        assert_eq!(v, Verdict::Unsat);
        let v = verdict(
            "problem osat\nop not/1 = 10\nassert A (x)\nassert all R . not(A) (x)\nassert R(x, y)",
        );
        assert!(v.is_sat());
    }

    #[test]
    fn signed_branching_over_xor() {
        let v = verdict("problem csat\nop xor/2 = 0110\nconcept xor(A, A)");
        assert_eq!(v, Verdict::Unsat);
        let v = verdict("problem csat\nop xor/2 = 0110\nconcept xor(A, B)");
        assert!(v.is_sat());
    }

    #[test]
    fn deterministic_verdicts() {
        let src = "problem tcsat\nop and/2 = 0001\nop or/2 = 0111\naxiom A [= some R . or(A, B)\naxiom and(A, B) [= B\nconcept and(A, B)";
        let a = verdict(src);
        let b = verdict(src);
        assert_eq!(a, b);
    }

    #[test]
    fn budget_is_reported() {
        let inst = parse_instance("problem tsat\nop top/0 = 1\naxiom top [= some R . A").unwrap();
        let err = decide_with(&inst, TableauConfig { max_nodes: 200_000, max_steps: 1 });
        assert!(matches!(err, Err(TableauError::StepBudget(1))));
    }

    #[test]
    fn agrees_with_oracle_on_small_instances() {
        let sources = [
            "problem tsat\nop and/2 = 0001\naxiom A [= and(A, B)",
            "problem tsat\nop xor/2 = 0110\naxiom A [= xor(A, B)\naxiom B [= A",
            "problem tcsat\nop or/2 = 0111\naxiom or(A, B) [= A\nconcept B",
            "problem tcsat\nop not/1 = 10\naxiom some R . A [= not(A)\nconcept A",
            "problem csat\nop and/2 = 0001\nop not/1 = 10\nconcept and(A, not(A))",
            "problem tsat\nop top/0 = 1\nop bot/0 = 0\naxiom top [= some R . A\naxiom A [= bot",
        ];
        for src in sources {
            let inst = parse_instance(src).unwrap();
            let tableau_sat = decide(&inst).unwrap().is_sat();
            let oracle =
                bounded_model_search(&inst, 3, SearchConfig::default()).unwrap().is_some();
            assert_eq!(tableau_sat, oracle, "disagreement on:\n{src}");
        }
    }
}
