//! An independent checker and elaborator for Alethe proofs.
//!
//! The crate parses an SMT-LIB problem (the UFLIRA fragment: Bool,
//! uninterpreted sorts and functions, linear Int/Real arithmetic) together
//! with an Alethe proof script, validates every step against its rule under
//! a configurable strictness, and can rewrite lenient transitivity steps
//! into strict ones or prune steps unused by the conclusion.
//!
//! The main entry points are [`parser::parse_problem`],
//! [`parser::parse_proof`], [`checker::check_proof`],
//! [`elaborator::elaborate_proof`], [`elaborator::prune`] and
//! [`printer::print_proof`].

pub mod ast;
pub mod checker;
pub mod elaborator;
pub mod error;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod term;

pub use ast::{ContextAssignment, Problem, ProofCommand, RuleArg, Step};
pub use checker::{
    check_proof, CheckConfig, CheckReport, Established, StepOutcome, StepStatus,
    StrictnessConfig, Verdict,
};
pub use elaborator::{elaborate_proof, prune, ElaborationResult};
pub use error::{CheckError, FrontendError, PruneError, TermError};
pub use parser::{parse_problem, parse_proof, ParserConfig};
pub use printer::print_proof;
pub use term::{Clause, Term, TermPool};
