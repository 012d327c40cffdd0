//! Prints proof commands back to concrete Alethe syntax.
//!
//! One command per line, no wrapping; output is bit-stable across runs for
//! equal inputs, and reparsing printed output yields a structurally equal
//! command list.

use std::fmt::Write;

use num_traits::Signed;

use crate::ast::{ContextAssignment, ProofCommand, RuleArg};
use crate::term::{Clause, Literal, Sort, SortKind, Term, TermKind, TermPool};

pub fn print_proof(pool: &TermPool, commands: &[ProofCommand]) -> String {
    let mut out = String::new();
    for command in commands {
        print_command(pool, command, &mut out);
        out.push('\n');
    }
    out
}

fn print_command(pool: &TermPool, command: &ProofCommand, out: &mut String) {
    match command {
        ProofCommand::Assume { id, term } => {
            write!(out, "(assume {id} {})", term_to_string(pool, *term)).unwrap();
        }
        ProofCommand::Step(step) => {
            write!(out, "(step {} {}", step.id, clause_to_string(pool, &step.clause)).unwrap();
            write!(out, " :rule {}", step.rule).unwrap();
            if !step.premises.is_empty() {
                write!(out, " :premises ({})", step.premises.join(" ")).unwrap();
            }
            if !step.args.is_empty() {
                out.push_str(" :args (");
                for (i, arg) in step.args.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    print_rule_arg(pool, arg, out);
                }
                out.push(')');
            }
            out.push(')');
        }
        ProofCommand::Anchor(anchor) => {
            write!(out, "(anchor :step {}", anchor.target).unwrap();
            if !anchor.assignments.is_empty() {
                out.push_str(" :args (");
                for (i, a) in anchor.assignments.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    match a {
                        ContextAssignment::Fixed(name, sort) => {
                            write!(
                                out,
                                "({} {})",
                                pool.symbol_name(*name),
                                sort_to_string(pool, *sort)
                            )
                            .unwrap();
                        }
                        ContextAssignment::Assign(var, value) => {
                            write!(
                                out,
                                "(:= {} {})",
                                term_to_string(pool, *var),
                                term_to_string(pool, *value)
                            )
                            .unwrap();
                        }
                    }
                }
                out.push(')');
            }
            out.push(')');
        }
        ProofCommand::FunctionDefinition(def) => {
            write!(out, "(define-fun {} (", pool.symbol_name(def.name)).unwrap();
            for (i, (name, sort)) in def.params.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write!(out, "({} {})", pool.symbol_name(*name), sort_to_string(pool, *sort))
                    .unwrap();
            }
            write!(
                out,
                ") {} {})",
                sort_to_string(pool, def.codomain),
                term_to_string(pool, def.body)
            )
            .unwrap();
        }
    }
}

fn print_rule_arg(pool: &TermPool, arg: &RuleArg, out: &mut String) {
    match arg {
        RuleArg::Term(t) => out.push_str(&term_to_string(pool, *t)),
        RuleArg::Assign(var, value) => {
            write!(out, "(:= {} {})", pool.symbol_name(*var), term_to_string(pool, *value))
                .unwrap();
        }
        RuleArg::Rational(r) => out.push_str(&rational_to_string(r)),
    }
}

pub fn clause_to_string(pool: &TermPool, clause: &Clause) -> String {
    let mut out = String::from("(cl");
    for &lit in &clause.0 {
        out.push(' ');
        out.push_str(&term_to_string(pool, lit));
    }
    out.push(')');
    out
}

pub fn sort_to_string(pool: &TermPool, sort: Sort) -> String {
    match pool.sort_kind(sort) {
        SortKind::Bool => "Bool".into(),
        SortKind::Int => "Int".into(),
        SortKind::Real => "Real".into(),
        SortKind::Uninterpreted(name) => pool.symbol_name(*name).into(),
        SortKind::Function(..) => unreachable!("terms never have function sorts"),
    }
}

pub fn term_to_string(pool: &TermPool, t: Term) -> String {
    let mut out = String::new();
    write_term(pool, t, &mut out);
    out
}

fn write_term(pool: &TermPool, t: Term, out: &mut String) {
    match pool.kind(t) {
        TermKind::Var(name, _) => out.push_str(pool.symbol_name(*name)),
        TermKind::Const(Literal::Bool(b)) => out.push_str(if *b { "true" } else { "false" }),
        TermKind::Const(Literal::Int(n)) => {
            if n.is_negative() {
                write!(out, "(- {})", -n).unwrap();
            } else {
                write!(out, "{n}").unwrap();
            }
        }
        TermKind::Const(Literal::Rational(r)) => {
            // Distinguish Real constants from Int numerals so parsing the
            // output reproduces the same term: integral reals print as
            // decimals, everything else as an exact fraction.
            if r.is_negative() {
                write!(out, "(- {})", real_magnitude_to_string(&-r)).unwrap();
            } else {
                out.push_str(&real_magnitude_to_string(r));
            }
        }
        TermKind::App(f, args) => {
            write!(out, "({}", pool.symbol_name(*f)).unwrap();
            for &arg in args {
                out.push(' ');
                write_term(pool, arg, out);
            }
            out.push(')');
        }
        TermKind::Binder(kind, bindings, body) => {
            write!(out, "({} (", kind.name()).unwrap();
            for (i, (name, sort)) in bindings.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write!(out, "({} {})", pool.symbol_name(*name), sort_to_string(pool, *sort))
                    .unwrap();
            }
            out.push_str(") ");
            write_term(pool, *body, out);
            out.push(')');
        }
    }
}

/// Exact rational in concrete syntax: integers print bare, other values as
/// `(/ p q)`, negatives wrapped in unary minus.
pub fn rational_to_string(r: &num_rational::BigRational) -> String {
    if r.is_negative() {
        return format!("(- {})", rational_to_string(&-r));
    }
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("(/ {} {})", r.numer(), r.denom())
    }
}

fn real_magnitude_to_string(r: &num_rational::BigRational) -> String {
    if r.is_integer() {
        format!("{}.0", r.numer())
    } else {
        format!("(/ {} {})", r.numer(), r.denom())
    }
}
