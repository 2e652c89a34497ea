//! Satisfiability tooling for ALC concept languages whose Boolean layer is
//! built from an arbitrary, user-declared set of operators.
//!
//! Instead of the fixed `⊓, ⊔, ¬, ⊤, ⊥` repertoire, concepts here apply any
//! operator with a declared truth table. The crate provides:
//!
//! - [`boolfun`]: truth-table functions, structural properties (monotone,
//!   self-dual, constant-reproducing, constant-separating), bounded clone
//!   closures, and representation search over operator bases;
//! - [`syntax`]: concepts, axioms, ontologies and the five satisfiability
//!   problem kinds, with a line-oriented text format;
//! - [`semantics`]: finite interpretations, the model checker, a brute-force
//!   bounded model search, and the two trivial-model constructors;
//! - [`tableau`]: a sound, complete, terminating signed tableau with
//!   anywhere blocking that decides all five problem kinds and extracts
//!   witness models;
//! - [`reductions`]: executable inter-problem reductions (problem embedding,
//!   constant elimination, the top gadget, negation gadget, base change,
//!   QBF-to-TBox, and the tautology variant);
//! - [`qbf`]: quantified 3-CNF formulas with a brute-force evaluator;
//! - [`classify`]: the complexity classifier mapping an operator set to a
//!   verdict for each of the five problems;
//! - [`corpus`]: deterministic instance generators used by the verification
//!   suites.

pub mod boolfun;
pub mod classify;
pub mod corpus;
pub mod qbf;
pub mod reductions;
pub mod semantics;
pub mod syntax;
pub mod tableau;

pub use boolfun::{BoolFun, CloneFacts, FunctionSpace, PropertyRecord};
pub use semantics::Interpretation;
pub use syntax::{Axiom, Concept, Ontology, OperatorSet, ProblemInstance, ProblemKind};
