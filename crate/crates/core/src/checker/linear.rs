//! Farkas-style validation of `la_generic` steps.
//!
//! Every literal of the conclusion is a (possibly negated) linear constraint
//! over Int/Real. The arguments give one nonnegative rational coefficient
//! per literal. The step is valid when the coefficient-weighted sum of the
//! negations of all literals is an absurd ground constraint, using exact
//! rational arithmetic.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::term::{Clause, Literal, Term, TermKind, TermPool};

/// Relation of a normalized constraint `form ⋈ 0`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Rel {
    Lt,
    Le,
    Eq,
}

/// A linear combination: sum of `coeff * atom` plus a constant. Atoms are
/// arbitrary non-arithmetic subterms (variables, applications, choice terms).
#[derive(Clone, Debug, Default)]
struct LinearForm {
    coeffs: BTreeMap<Term, BigRational>,
    constant: BigRational,
}

impl LinearForm {
    fn constant(c: BigRational) -> Self {
        LinearForm { coeffs: BTreeMap::new(), constant: c }
    }

    fn atom(t: Term) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(t, BigRational::from_integer(1.into()));
        LinearForm { coeffs, constant: BigRational::zero() }
    }

    fn add(mut self, other: &LinearForm) -> Self {
        for (t, c) in &other.coeffs {
            let entry = self.coeffs.entry(*t).or_insert_with(BigRational::zero);
            *entry += c;
        }
        self.constant += &other.constant;
        self
    }

    fn scale(mut self, factor: &BigRational) -> Self {
        for c in self.coeffs.values_mut() {
            *c *= factor;
        }
        self.constant *= factor;
        self
    }

    fn sub(self, other: &LinearForm) -> Self {
        self.add(&other.clone().scale(&-BigRational::from_integer(1.into())))
    }

    fn is_constant(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    fn as_constant(&self) -> Option<&BigRational> {
        if self.is_constant() {
            Some(&self.constant)
        } else {
            None
        }
    }
}

/// Extracts the linear form of an Int/Real term. Products of two
/// non-constant factors and divisions by non-constants are rejected.
fn linear_form(pool: &TermPool, t: Term) -> Result<LinearForm, String> {
    let b = pool.builtins();
    match pool.kind(t) {
        TermKind::Const(Literal::Int(n)) => {
            Ok(LinearForm::constant(BigRational::from_integer(n.clone())))
        }
        TermKind::Const(Literal::Rational(r)) => Ok(LinearForm::constant(r.clone())),
        TermKind::App(f, args) if *f == b.add => {
            let mut acc = LinearForm::default();
            for &a in args {
                acc = acc.add(&linear_form(pool, a)?);
            }
            Ok(acc)
        }
        TermKind::App(f, args) if *f == b.sub => {
            if args.len() == 1 {
                return Ok(LinearForm::default().sub(&linear_form(pool, args[0])?));
            }
            let mut acc = linear_form(pool, args[0])?;
            for &a in &args[1..] {
                acc = acc.sub(&linear_form(pool, a)?);
            }
            Ok(acc)
        }
        TermKind::App(f, args) if *f == b.mul => {
            let mut constant = BigRational::from_integer(1.into());
            let mut non_constant: Option<LinearForm> = None;
            for &a in args {
                let form = linear_form(pool, a)?;
                match form.as_constant() {
                    Some(c) => constant *= c,
                    None => {
                        if non_constant.is_some() {
                            return Err("nonlinear literal".into());
                        }
                        non_constant = Some(form);
                    }
                }
            }
            Ok(match non_constant {
                Some(form) => form.scale(&constant),
                None => LinearForm::constant(constant),
            })
        }
        TermKind::App(f, args) if *f == b.div && args.len() == 2 => {
            let denom = linear_form(pool, args[1])?;
            let denom = denom.as_constant().ok_or("nonlinear literal")?;
            if denom.is_zero() {
                return Err("division by zero".into());
            }
            let inv = BigRational::from_integer(1.into()) / denom;
            Ok(linear_form(pool, args[0])?.scale(&inv))
        }
        _ => {
            // Anything else is an opaque numeric atom.
            if pool.is_numeric_sort(pool.sort(t)) {
                Ok(LinearForm::atom(t))
            } else {
                Err("literal is not over Int/Real".into())
            }
        }
    }
}

/// Normalized negation of one clause literal, as `form ⋈ 0`.
fn negated_literal_constraint(pool: &TermPool, literal: Term) -> Result<(LinearForm, Rel), String> {
    let (positive, atom) = pool.polarity(literal);
    let b = pool.builtins();
    let (op, lhs, rhs) = match pool.kind(atom) {
        TermKind::App(f, args)
            if args.len() == 2
                && (*f == b.lt || *f == b.le || *f == b.gt || *f == b.ge || *f == b.eq) =>
        {
            (*f, args[0], args[1])
        }
        _ => return Err("literal is not a linear constraint".into()),
    };
    if !pool.is_numeric_sort(pool.sort(lhs)) {
        return Err("literal is not a linear constraint over Int/Real".into());
    }
    let l = linear_form(pool, lhs)?;
    let r = linear_form(pool, rhs)?;
    // For a negated literal (not c) the constraint is c itself; for a
    // positive literal it is the negation of c.
    let (form, rel) = if positive {
        if op == b.lt {
            (r.sub(&l), Rel::Le) // not (l < r)  ==  r - l <= 0
        } else if op == b.le {
            (r.sub(&l), Rel::Lt) // not (l <= r) ==  r - l < 0
        } else if op == b.gt {
            (l.sub(&r), Rel::Le)
        } else if op == b.ge {
            (l.sub(&r), Rel::Lt)
        } else {
            return Err("equality literal must be negated".into());
        }
    } else if op == b.lt {
        (l.sub(&r), Rel::Lt)
    } else if op == b.le {
        (l.sub(&r), Rel::Le)
    } else if op == b.gt {
        (r.sub(&l), Rel::Lt)
    } else if op == b.ge {
        (r.sub(&l), Rel::Le)
    } else {
        (l.sub(&r), Rel::Eq)
    };
    Ok((form, rel))
}

/// Checks a Farkas certificate: `coeffs` has one nonnegative rational per
/// conclusion literal, and the weighted sum of the negated literals must be
/// an absurd ground constraint.
pub fn check_la_generic_clause(
    pool: &TermPool,
    conclusion: &Clause,
    coeffs: &[BigRational],
) -> Result<(), String> {
    if coeffs.len() != conclusion.len() {
        return Err("coefficient count mismatch".into());
    }
    if coeffs.iter().any(|c| c.is_negative()) {
        return Err("negative coefficient".into());
    }
    let mut sum = LinearForm::default();
    // The combined relation is strict if any strict constraint has positive
    // weight, weak if any weak one does, and an equation otherwise.
    let mut rel = Rel::Eq;
    for (&lit, coeff) in conclusion.0.iter().zip(coeffs.iter()) {
        let (form, lit_rel) = negated_literal_constraint(pool, lit)?;
        if coeff.is_zero() {
            continue;
        }
        sum = sum.add(&form.scale(coeff));
        rel = match (rel, lit_rel) {
            (Rel::Lt, _) | (_, Rel::Lt) => Rel::Lt,
            (Rel::Le, _) | (_, Rel::Le) => Rel::Le,
            _ => Rel::Eq,
        };
    }
    if !sum.is_constant() {
        return Err("combination not absurd".into());
    }
    let c = &sum.constant;
    let absurd = match rel {
        Rel::Lt => !c.is_negative(),        // `c < 0` must be false
        Rel::Le => c.is_positive(),         // `c <= 0` must be false
        Rel::Eq => !c.is_zero(),            // `c = 0` must be false
    };
    if absurd {
        Ok(())
    } else {
        Err("combination not absurd".into())
    }
}
