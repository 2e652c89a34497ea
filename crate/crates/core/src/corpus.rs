//! Deterministic instance generators backing the verification suites: seeded
//! random instances over chosen operator pools, the exhaustive tiny family
//! for tableau cross-checking, and canonical operator-set samples for the
//! classifier sweep.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::boolfun::BoolFun;
use crate::syntax::{
    Assertion, Concept, Gci, Ontology, OperatorSet, ProblemInstance, ProblemKind,
};

/// Size bounds for random instances.
#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub max_atoms: usize,
    pub max_roles: usize,
    pub max_depth: usize,
    pub max_axioms: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_atoms: 3, max_roles: 2, max_depth: 3, max_axioms: 3 }
    }
}

/// A seeded generator stream.
pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn atom_names(n: usize) -> Vec<String> {
    ["A", "B", "C"].iter().take(n).map(|s| s.to_string()).collect()
}

fn role_names(n: usize) -> Vec<String> {
    ["R", "S"].iter().take(n).map(|s| s.to_string()).collect()
}

pub fn random_concept(
    rng: &mut StdRng,
    ops: &OperatorSet,
    atoms: &[String],
    roles: &[String],
    depth: usize,
) -> Concept {
    let nullary: Vec<&BoolFun> = ops.iter().filter(|f| f.arity() == 0).collect();
    let applicable: Vec<&BoolFun> = ops.iter().filter(|f| f.arity() > 0).collect();
    let leaf = depth == 0 || (applicable.is_empty() && roles.is_empty());
    if leaf {
        if !nullary.is_empty() && rng.gen_bool(0.2) {
            let f = nullary[rng.gen_range(0..nullary.len())];
            return Concept::apply(f.name(), Vec::new());
        }
        return Concept::atom(&atoms[rng.gen_range(0..atoms.len())]);
    }
    let roll: f64 = rng.gen();
    if roll < 0.30 || applicable.is_empty() {
        if roll < 0.15 || roles.is_empty() {
            // Leaf anyway; deep nesting everywhere makes oracles slow.
            random_concept(rng, ops, atoms, roles, 0)
        } else {
            let role = &roles[rng.gen_range(0..roles.len())];
            let body = random_concept(rng, ops, atoms, roles, depth - 1);
            if rng.gen_bool(0.5) {
                Concept::exists(role, body)
            } else {
                Concept::forall(role, body)
            }
        }
    } else {
        let f = applicable[rng.gen_range(0..applicable.len())];
        let args = (0..f.arity())
            .map(|_| random_concept(rng, ops, atoms, roles, depth - 1))
            .collect();
        Concept::apply(f.name(), args)
    }
}

/// A random valid instance of the given kind over the given operators.
pub fn random_instance(
    rng: &mut StdRng,
    ops: &OperatorSet,
    kind: ProblemKind,
    cfg: GenConfig,
) -> ProblemInstance {
    let atoms = atom_names(rng.gen_range(1..=cfg.max_atoms));
    let roles = role_names(rng.gen_range(1..=cfg.max_roles));
    let concept = |rng: &mut StdRng| {
        let depth = rng.gen_range(0..=cfg.max_depth);
        random_concept(rng, ops, &atoms, &roles, depth)
    };

    let mut tbox = Vec::new();
    let mut abox = Vec::new();
    if kind.allows_tbox() {
        for _ in 0..rng.gen_range(0..=cfg.max_axioms) {
            tbox.push(Gci::new(concept(rng), concept(rng)));
        }
    }
    if kind.allows_abox() {
        let individuals = ["x", "y"];
        for _ in 0..rng.gen_range(0..=2) {
            let x = individuals[rng.gen_range(0..individuals.len())];
            abox.push(Assertion::Concept(concept(rng), x.to_string()));
        }
        if rng.gen_bool(0.5) {
            let r = &roles[rng.gen_range(0..roles.len())];
            abox.push(Assertion::Role(r.clone(), "x".into(), "y".into()));
        }
    }
    let query = kind.takes_query().then(|| concept(rng));
    ProblemInstance::new(kind, ops.clone(), Ontology { tbox, abox }, query)
        .expect("generated instances are valid by construction")
}

/// Operators that reproduce true; any instance over a subset of these is
/// satisfied by the one-element loop model with full extensions.
pub fn top_reproducing_pool() -> Vec<BoolFun> {
    vec![
        BoolFun::and(),
        BoolFun::or(),
        BoolFun::top(),
        BoolFun::xnor(),
        BoolFun::id(),
        BoolFun::from_table_str("maj", 3, "00010111").unwrap(),
    ]
}

/// Operators that reproduce false; any TBox over a subset of these is
/// satisfied by the one-element loop model with empty extensions.
pub fn bottom_reproducing_pool() -> Vec<BoolFun> {
    vec![
        BoolFun::and(),
        BoolFun::or(),
        BoolFun::xor(),
        BoolFun::bot(),
        BoolFun::id(),
        BoolFun::from_table_str("maj", 3, "00010111").unwrap(),
    ]
}

/// A random nonempty subset of the pool, as an operator set.
pub fn random_operator_subset(rng: &mut StdRng, pool: &[BoolFun]) -> OperatorSet {
    loop {
        let chosen: Vec<BoolFun> =
            pool.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if !chosen.is_empty() {
            return OperatorSet::from_funs(chosen).expect("pool names are unique");
        }
    }
}

/// The mixed operator set used by the reduction corpora.
pub fn mixed_ops() -> OperatorSet {
    OperatorSet::from_funs([
        BoolFun::and(),
        BoolFun::or(),
        BoolFun::not(),
        BoolFun::top(),
        BoolFun::bot(),
        BoolFun::xor(),
    ])
    .unwrap()
}

/// The concept pool for the tiny exhaustive family: two atoms, one role,
/// the six standard operators, concept depth at most 2.
pub fn tiny_concept_pool() -> Vec<Concept> {
    let a = || Concept::atom("A");
    let b = || Concept::atom("B");
    let top = || Concept::apply("top", Vec::new());
    let bot = || Concept::apply("bot", Vec::new());
    let not = |c: Concept| Concept::apply("not", vec![c]);
    let and = |x: Concept, y: Concept| Concept::apply("and", vec![x, y]);
    let or = |x: Concept, y: Concept| Concept::apply("or", vec![x, y]);
    let xor = |x: Concept, y: Concept| Concept::apply("xor", vec![x, y]);
    let some = |c: Concept| Concept::exists("R", c);
    let all = |c: Concept| Concept::forall("R", c);
    vec![
        a(),
        b(),
        top(),
        bot(),
        not(a()),
        not(b()),
        and(a(), b()),
        or(a(), b()),
        xor(a(), b()),
        xor(a(), a()),
        some(a()),
        some(b()),
        all(a()),
        all(b()),
        some(not(a())),
        all(not(b())),
        not(some(a())),
        not(all(b())),
        and(a(), some(b())),
        or(all(a()), b()),
        xor(a(), some(a())),
        and(not(a()), b()),
        or(a(), bot()),
        and(a(), top()),
    ]
}

fn tiny_ops() -> OperatorSet {
    mixed_ops()
}

/// The deterministic tiny family for tableau/oracle agreement: every
/// query-only instance over the pool, every single-inclusion TBox, a strided
/// sample of two-inclusion TBoxes, and a strided sample of inclusion+query
/// instances. Exhaustive over the pool for the first two groups, capped by
/// stride for the quadratic ones.
pub fn tiny_family() -> Vec<ProblemInstance> {
    let pool = tiny_concept_pool();
    let ops = tiny_ops();
    let n = pool.len();
    let mut out = Vec::new();
    for q in &pool {
        out.push(
            ProblemInstance::new(
                ProblemKind::Csat,
                ops.clone(),
                Ontology::default(),
                Some(q.clone()),
            )
            .unwrap(),
        );
    }
    let mut single_axioms = Vec::new();
    for lhs in &pool {
        for rhs in &pool {
            single_axioms.push(Gci::new(lhs.clone(), rhs.clone()));
        }
    }
    for gci in &single_axioms {
        out.push(
            ProblemInstance::new(
                ProblemKind::Tsat,
                ops.clone(),
                Ontology { tbox: vec![gci.clone()], abox: Vec::new() },
                None,
            )
            .unwrap(),
        );
    }
    let total = single_axioms.len();
    for i in (0..total).step_by(3) {
        let second = &single_axioms[(i * 17 + 5) % total];
        out.push(
            ProblemInstance::new(
                ProblemKind::Tsat,
                ops.clone(),
                Ontology {
                    tbox: vec![single_axioms[i].clone(), second.clone()],
                    abox: Vec::new(),
                },
                None,
            )
            .unwrap(),
        );
    }
    for i in (0..total).step_by(2) {
        let query = pool[(i * 5 + 1) % n].clone();
        out.push(
            ProblemInstance::new(
                ProblemKind::Tcsat,
                ops.clone(),
                Ontology { tbox: vec![single_axioms[i].clone()], abox: Vec::new() },
                Some(query),
            )
            .unwrap(),
        );
    }
    out
}

/// All 22 Boolean functions of arity at most 2, under stable names.
pub fn all_functions_up_to_binary() -> Vec<BoolFun> {
    let mut out = Vec::new();
    for bits in 0..2u64 {
        out.push(BoolFun::from_bits(format!("c{bits}"), 0, bits).unwrap());
    }
    for bits in 0..4u64 {
        out.push(BoolFun::from_bits(format!("u{bits}"), 1, bits).unwrap());
    }
    for bits in 0..16u64 {
        out.push(BoolFun::from_bits(format!("b{bits}"), 2, bits).unwrap());
    }
    out
}

/// A canonical seeded sample of operator sets over the arity-<=2 functions.
pub fn binary_set_sample(count: usize, seed: u64) -> Vec<Vec<BoolFun>> {
    let pool = all_functions_up_to_binary();
    let mut rng = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let size = rng.gen_range(1..=4);
        let mut set: Vec<BoolFun> = Vec::new();
        for _ in 0..size {
            let f = pool[rng.gen_range(0..pool.len())].clone();
            if !set.iter().any(|g| g.name() == f.name()) {
                set.push(f);
            }
        }
        out.push(set);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{check_instance, trivial_model_r0, trivial_model_r1};
    use crate::syntax::{parse_instance, print_instance, validate_operator_usage};

    #[test]
    fn random_instances_are_valid_and_round_trip() {
        let mut r = rng(11);
        let ops = mixed_ops();
        for kind in
            [ProblemKind::Csat, ProblemKind::Tsat, ProblemKind::Tcsat, ProblemKind::Osat, ProblemKind::Ocsat]
        {
            for _ in 0..50 {
                let inst = random_instance(&mut r, &ops, kind, GenConfig::default());
                assert!(validate_operator_usage(&inst, &ops).is_empty());
                let printed = print_instance(&inst);
                assert_eq!(parse_instance(&printed).unwrap(), inst, "{printed}");
            }
        }
    }

    #[test]
    fn pool_properties() {
        for f in top_reproducing_pool() {
            assert!(f.properties().reproduces_true, "{}", f.name());
        }
        for f in bottom_reproducing_pool() {
            assert!(f.properties().reproduces_false, "{}", f.name());
        }
    }

    #[test]
    fn trivial_models_hold_on_samples() {
        let mut r = rng(5);
        for _ in 0..30 {
            let ops = random_operator_subset(&mut r, &top_reproducing_pool());
            let inst = random_instance(&mut r, &ops, ProblemKind::Ocsat, GenConfig::default());
            let model = trivial_model_r1(&inst).unwrap();
            assert!(check_instance(&model, &inst).unwrap());
        }
        for _ in 0..30 {
            let ops = random_operator_subset(&mut r, &bottom_reproducing_pool());
            let inst = random_instance(&mut r, &ops, ProblemKind::Tsat, GenConfig::default());
            let model = trivial_model_r0(&inst).unwrap();
            assert!(check_instance(&model, &inst).unwrap());
        }
    }

    #[test]
    fn tiny_family_is_deterministic_and_small_scale() {
        let a = tiny_family();
        let b = tiny_family();
        assert_eq!(a.len(), b.len());
        assert!(a.len() > 500, "family should exercise hundreds of instances");
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn binary_sample_is_reproducible() {
        let a = binary_set_sample(20, 3);
        let b = binary_set_sample(20, 3);
        assert_eq!(a, b);
    }
}
