//! Which coalitions are to blame for an outcome of a strategic game.
//!
//! A formula `B{C} f` says that `f` holds and coalition `C` had a strategy
//! under which `f` could not have happened. This crate parses formulas,
//! checks them on finite games, reports which coalitions are to blame,
//! checks Hilbert-style derivations in the axiom system of the logic, and
//! fuzzes the axioms against the semantics on random games.

pub mod check;
pub mod formula;
pub mod game;
pub mod harness;
pub mod parser;
pub mod proof;
pub mod scripts;

pub use check::{
    blamable_coalitions, blame_witness, evaluate_all, satisfies, valid_in_game, BlameEntry,
    BlameReport, Checker, EvalError, EvalTable, Validity, DEFAULT_STRATEGY_CAP,
};
pub use formula::{syntactic_eq, AgentId, Coalition, Formula, Proposition};
pub use game::{agrees, load, lopez_game, save, Game, LoadError, Play, Strategy, Violation};
pub use harness::{
    proof_mutants, random_formula, random_game, soundness_sweep, soundness_sweep_with, GenParams,
    Semantics, SweepConfig, SweepReport,
};
pub use parser::{parse, print, ParseError};
pub use proof::{
    check_proof, instantiate_schema, is_tautology, load_proof, save_proof, Justification, Line,
    Proof, ProofError, Schema, Substitution,
};
pub use scripts::{bundled_script, bundled_scripts};
