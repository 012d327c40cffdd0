//! Subproof contexts.

use crate::ast::ContextAssignment;
use crate::term::{Sort, Symbol, Term, TermKind, TermPool};

/// One context frame, pushed by an anchor and popped when its target step is
/// checked. Mappings within a frame are simultaneous and their domains are
/// disjoint (enforced by the parser).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Frame {
    pub fixed: Vec<(Symbol, Sort)>,
    pub mappings: Vec<(Term, Term)>,
}

impl Frame {
    pub fn from_assignments(pool: &TermPool, assignments: &[ContextAssignment]) -> Frame {
        let mut frame = Frame::default();
        for a in assignments {
            match a {
                ContextAssignment::Fixed(name, sort) => frame.fixed.push((*name, *sort)),
                ContextAssignment::Assign(var, value) => {
                    debug_assert!(matches!(pool.kind(*var), TermKind::Var(..)));
                    frame.mappings.push((*var, *value));
                }
            }
        }
        frame
    }
}
