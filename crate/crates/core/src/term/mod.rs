//! Interned sorts and terms.
//!
//! All terms live in a [`TermPool`]. Interning is canonical: structurally
//! identical terms always receive the same [`Term`] handle, so handle
//! equality coincides with structural equality. Sorts are computed once at
//! interning time and cached.
//!
//! The pool is built by a single writer (the parser, or checker passes that
//! create new terms through substitution). Afterwards it can be shared
//! immutably; everything that only reads terms takes `&TermPool` and is safe
//! to call from concurrent checkers.

mod ops;
mod pool;

pub use ops::{alpha_equal, free_variables, substitute};
pub use pool::{Builtins, TermPool};

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::TermError;

/// Interned symbol handle.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Symbol(pub(crate) u32);

/// Interned sort handle.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Sort(pub(crate) u32);

/// Interned term handle. This is the opaque sharing handle: two handles are
/// equal exactly when the terms are structurally equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Term(pub(crate) u32);

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SortKind {
    Bool,
    Int,
    Real,
    Uninterpreted(Symbol),
    /// Only used inside signature entries; terms never have a function sort.
    Function(Vec<Sort>, Sort),
}

/// A literal constant. Integers and rationals are arbitrary precision;
/// reals are exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Literal {
    Bool(bool),
    Int(BigInt),
    Rational(BigRational),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BinderKind {
    Forall,
    Exists,
    Choice,
}

impl BinderKind {
    pub fn name(self) -> &'static str {
        match self {
            BinderKind::Forall => "forall",
            BinderKind::Exists => "exists",
            BinderKind::Choice => "choice",
        }
    }
}

/// The structure of a term. `Var` covers both bound variables and nullary
/// declared symbols; `App` is only used for applications with at least one
/// argument.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TermKind {
    Var(Symbol, Sort),
    Const(Literal),
    App(Symbol, Vec<Term>),
    Binder(BinderKind, Vec<(Symbol, Sort)>, Term),
}

/// An ordered list of Boolean terms; the conclusion shape of every proof
/// step. Order is significant and duplicates are permitted. The empty
/// clause denotes falsity.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Clause(pub Vec<Term>);

impl Clause {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// The single literal of a unit clause.
    pub fn as_unit(&self) -> Option<Term> {
        match self.0.as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }
}

/// Signature of a declared function symbol. Nullary symbols have an empty
/// parameter list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncSig {
    pub params: Vec<Sort>,
    pub ret: Sort,
}

/// Declared uninterpreted sorts and function symbols.
#[derive(Clone, Debug, Default)]
pub struct SignatureTable {
    sorts: HashMap<Symbol, Sort>,
    funcs: HashMap<Symbol, FuncSig>,
}

impl SignatureTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_sort(&mut self, name: Symbol, sort: Sort) -> Result<(), TermError> {
        if self.sorts.insert(name, sort).is_some() {
            return Err(TermError::Sort("sort redeclared".into()));
        }
        Ok(())
    }

    pub fn declare_func(&mut self, name: Symbol, sig: FuncSig) -> Result<(), TermError> {
        if self.funcs.insert(name, sig).is_some() {
            return Err(TermError::Sort("symbol redeclared".into()));
        }
        Ok(())
    }

    pub fn lookup_sort(&self, name: Symbol) -> Option<Sort> {
        self.sorts.get(&name).copied()
    }

    pub fn lookup_func(&self, name: Symbol) -> Option<&FuncSig> {
        self.funcs.get(&name)
    }

    pub fn contains_symbol(&self, name: Symbol) -> bool {
        self.funcs.contains_key(&name) || self.sorts.contains_key(&name)
    }
}
