use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::TermError;

use super::{
    BinderKind, Clause, FuncSig, Literal, SignatureTable, Sort, SortKind, Symbol, Term, TermKind,
};

/// Handles for the built-in symbols, pre-interned by [`TermPool::new`].
#[derive(Clone, Copy, Debug)]
pub struct Builtins {
    pub not: Symbol,
    pub and: Symbol,
    pub or: Symbol,
    pub xor: Symbol,
    pub implies: Symbol,
    pub eq: Symbol,
    pub add: Symbol,
    pub sub: Symbol,
    pub mul: Symbol,
    pub div: Symbol,
    pub lt: Symbol,
    pub le: Symbol,
    pub gt: Symbol,
    pub ge: Symbol,
}

impl Builtins {
    pub fn is_builtin(&self, s: Symbol) -> bool {
        [
            self.not,
            self.and,
            self.or,
            self.xor,
            self.implies,
            self.eq,
            self.add,
            self.sub,
            self.mul,
            self.div,
            self.lt,
            self.le,
            self.gt,
            self.ge,
        ]
        .contains(&s)
    }
}

/// The shared store for symbols, sorts and terms.
pub struct TermPool {
    symbol_names: Vec<String>,
    symbol_ids: HashMap<String, Symbol>,
    sort_kinds: Vec<SortKind>,
    sort_ids: HashMap<SortKind, Sort>,
    term_kinds: Vec<TermKind>,
    term_ids: HashMap<TermKind, Term>,
    term_sorts: Vec<Sort>,
    builtins: Builtins,
    sort_bool: Sort,
    sort_int: Sort,
    sort_real: Sort,
}

impl Default for TermPool {
    fn default() -> Self {
        Self::new()
    }
}

impl TermPool {
    pub fn new() -> Self {
        let mut pool = TermPool {
            symbol_names: Vec::new(),
            symbol_ids: HashMap::new(),
            sort_kinds: Vec::new(),
            sort_ids: HashMap::new(),
            term_kinds: Vec::new(),
            term_ids: HashMap::new(),
            term_sorts: Vec::new(),
            builtins: Builtins {
                not: Symbol(0),
                and: Symbol(0),
                or: Symbol(0),
                xor: Symbol(0),
                implies: Symbol(0),
                eq: Symbol(0),
                add: Symbol(0),
                sub: Symbol(0),
                mul: Symbol(0),
                div: Symbol(0),
                lt: Symbol(0),
                le: Symbol(0),
                gt: Symbol(0),
                ge: Symbol(0),
            },
            sort_bool: Sort(0),
            sort_int: Sort(0),
            sort_real: Sort(0),
        };
        pool.sort_bool = pool.intern_sort(SortKind::Bool);
        pool.sort_int = pool.intern_sort(SortKind::Int);
        pool.sort_real = pool.intern_sort(SortKind::Real);
        pool.builtins = Builtins {
            not: pool.symbol("not"),
            and: pool.symbol("and"),
            or: pool.symbol("or"),
            xor: pool.symbol("xor"),
            implies: pool.symbol("=>"),
            eq: pool.symbol("="),
            add: pool.symbol("+"),
            sub: pool.symbol("-"),
            mul: pool.symbol("*"),
            div: pool.symbol("/"),
            lt: pool.symbol("<"),
            le: pool.symbol("<="),
            gt: pool.symbol(">"),
            ge: pool.symbol(">="),
        };
        pool
    }

    // ---- symbols ----

    pub fn symbol(&mut self, name: &str) -> Symbol {
        if let Some(&s) = self.symbol_ids.get(name) {
            return s;
        }
        let s = Symbol(self.symbol_names.len() as u32);
        self.symbol_names.push(name.to_owned());
        self.symbol_ids.insert(name.to_owned(), s);
        s
    }

    pub fn try_symbol(&self, name: &str) -> Option<Symbol> {
        self.symbol_ids.get(name).copied()
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        &self.symbol_names[s.0 as usize]
    }

    /// A symbol that does not collide with any symbol seen so far. Appends a
    /// numeric suffix to `base`; freshness is global across the pool.
    pub fn fresh_symbol(&mut self, base: &str) -> Symbol {
        let mut n: u64 = 1;
        loop {
            let candidate = format!("{base}{n}");
            if !self.symbol_ids.contains_key(&candidate) {
                return self.symbol(&candidate);
            }
            n += 1;
        }
    }

    pub fn builtins(&self) -> &Builtins {
        &self.builtins
    }

    // ---- sorts ----

    fn intern_sort(&mut self, kind: SortKind) -> Sort {
        if let Some(&s) = self.sort_ids.get(&kind) {
            return s;
        }
        let s = Sort(self.sort_kinds.len() as u32);
        self.sort_kinds.push(kind.clone());
        self.sort_ids.insert(kind, s);
        s
    }

    pub fn sort_bool(&self) -> Sort {
        self.sort_bool
    }

    pub fn sort_int(&self) -> Sort {
        self.sort_int
    }

    pub fn sort_real(&self) -> Sort {
        self.sort_real
    }

    pub fn uninterpreted_sort(&mut self, name: Symbol) -> Sort {
        self.intern_sort(SortKind::Uninterpreted(name))
    }

    /// Function sorts live in signature entries only. The domain must be
    /// nonempty and the codomain must not itself be a function sort.
    pub fn function_sort(&mut self, domain: Vec<Sort>, codomain: Sort) -> Result<Sort, TermError> {
        if domain.is_empty() {
            return Err(TermError::Sort("function sort with empty domain".into()));
        }
        if matches!(self.sort_kind(codomain), SortKind::Function(..)) {
            return Err(TermError::Sort("function sort as codomain".into()));
        }
        Ok(self.intern_sort(SortKind::Function(domain, codomain)))
    }

    pub fn sort_kind(&self, s: Sort) -> &SortKind {
        &self.sort_kinds[s.0 as usize]
    }

    pub fn is_numeric_sort(&self, s: Sort) -> bool {
        s == self.sort_int || s == self.sort_real
    }

    pub fn sort_name(&self, s: Sort) -> String {
        match self.sort_kind(s) {
            SortKind::Bool => "Bool".into(),
            SortKind::Int => "Int".into(),
            SortKind::Real => "Real".into(),
            SortKind::Uninterpreted(n) => self.symbol_name(*n).into(),
            SortKind::Function(dom, cod) => {
                let mut out = String::from("(");
                for d in dom {
                    out.push_str(&self.sort_name(*d));
                    out.push(' ');
                }
                out.push_str("-> ");
                out.push_str(&self.sort_name(*cod));
                out.push(')');
                out
            }
        }
    }

    // ---- terms ----

    /// Intern a term node, computing and caching its sort. Structurally
    /// identical nodes always yield the same handle.
    pub fn intern(&mut self, kind: TermKind, sig: &SignatureTable) -> Result<Term, TermError> {
        if let Some(&t) = self.term_ids.get(&kind) {
            return Ok(t);
        }
        let sort = self.compute_sort(&kind, sig)?;
        Ok(self.insert(kind, sort))
    }

    /// Intern a node whose sort is already known. Used when rebuilding terms
    /// (substitution, renaming) where the sort is preserved by construction.
    pub(crate) fn intern_with_sort(&mut self, kind: TermKind, sort: Sort) -> Term {
        if let Some(&t) = self.term_ids.get(&kind) {
            return t;
        }
        self.insert(kind, sort)
    }

    fn insert(&mut self, kind: TermKind, sort: Sort) -> Term {
        let t = Term(self.term_kinds.len() as u32);
        self.term_kinds.push(kind.clone());
        self.term_ids.insert(kind, t);
        self.term_sorts.push(sort);
        t
    }

    pub fn kind(&self, t: Term) -> &TermKind {
        &self.term_kinds[t.0 as usize]
    }

    pub fn sort(&self, t: Term) -> Sort {
        self.term_sorts[t.0 as usize]
    }

    pub fn num_terms(&self) -> usize {
        self.term_kinds.len()
    }

    fn compute_sort(&mut self, kind: &TermKind, sig: &SignatureTable) -> Result<Sort, TermError> {
        match kind {
            TermKind::Var(name, sort) => {
                if matches!(self.sort_kind(*sort), SortKind::Function(..)) {
                    return Err(TermError::Sort(format!(
                        "variable `{}` with function sort",
                        self.symbol_name(*name)
                    )));
                }
                Ok(*sort)
            }
            TermKind::Const(Literal::Bool(_)) => Ok(self.sort_bool),
            TermKind::Const(Literal::Int(_)) => Ok(self.sort_int),
            TermKind::Const(Literal::Rational(_)) => Ok(self.sort_real),
            TermKind::App(f, args) => self.app_sort(*f, args, sig),
            TermKind::Binder(kind, bindings, body) => {
                if bindings.is_empty() {
                    return Err(TermError::Sort("binder with no bound variables".into()));
                }
                for (name, sort) in bindings {
                    if matches!(self.sort_kind(*sort), SortKind::Function(..)) {
                        return Err(TermError::Sort(format!(
                            "bound variable `{}` with function sort",
                            self.symbol_name(*name)
                        )));
                    }
                }
                match kind {
                    BinderKind::Forall | BinderKind::Exists => {
                        if self.sort(*body) != self.sort_bool {
                            return Err(TermError::Sort(format!(
                                "{} body must be Bool",
                                kind.name()
                            )));
                        }
                        Ok(self.sort_bool)
                    }
                    BinderKind::Choice => {
                        // Choice binds exactly one variable; the term has the
                        // sort of that variable.
                        if bindings.len() != 1 {
                            return Err(TermError::Sort(
                                "choice must bind exactly one variable".into(),
                            ));
                        }
                        if self.sort(*body) != self.sort_bool {
                            return Err(TermError::Sort("choice body must be Bool".into()));
                        }
                        Ok(bindings[0].1)
                    }
                }
            }
        }
    }

    fn app_sort(&mut self, f: Symbol, args: &[Term], sig: &SignatureTable) -> Result<Sort, TermError> {
        let b = self.builtins;
        let arg_sorts: Vec<Sort> = args.iter().map(|a| self.sort(*a)).collect();
        let all = |s: Sort| arg_sorts.iter().all(|&a| a == s);
        let fail = |pool: &TermPool, msg: &str| -> Result<Sort, TermError> {
            Err(TermError::Sort(format!(
                "`{}`: {}",
                pool.symbol_name(f),
                msg
            )))
        };

        if f == b.not {
            if args.len() == 1 && arg_sorts[0] == self.sort_bool {
                return Ok(self.sort_bool);
            }
            return fail(self, "expects a single Bool argument");
        }
        if f == b.and || f == b.or || f == b.xor || f == b.implies {
            if args.len() >= 2 && all(self.sort_bool) {
                return Ok(self.sort_bool);
            }
            return fail(self, "expects two or more Bool arguments");
        }
        if f == b.eq {
            if args.len() >= 2 && all(arg_sorts[0]) {
                if matches!(self.sort_kind(arg_sorts[0]), SortKind::Function(..)) {
                    return fail(self, "cannot compare function symbols");
                }
                return Ok(self.sort_bool);
            }
            return fail(self, "expects two or more arguments of the same sort");
        }
        if f == b.add || f == b.mul {
            if args.len() >= 2 && self.is_numeric_sort(arg_sorts[0]) && all(arg_sorts[0]) {
                return Ok(arg_sorts[0]);
            }
            return fail(self, "expects numeric arguments of one sort");
        }
        if f == b.sub {
            // Unary minus or n-ary subtraction.
            if !args.is_empty() && self.is_numeric_sort(arg_sorts[0]) && all(arg_sorts[0]) {
                return Ok(arg_sorts[0]);
            }
            return fail(self, "expects numeric arguments of one sort");
        }
        if f == b.div {
            if args.len() == 2 && all(self.sort_real) {
                return Ok(self.sort_real);
            }
            return fail(self, "expects two Real arguments");
        }
        if f == b.lt || f == b.le || f == b.gt || f == b.ge {
            if args.len() == 2 && self.is_numeric_sort(arg_sorts[0]) && all(arg_sorts[0]) {
                return Ok(self.sort_bool);
            }
            return fail(self, "expects two numeric arguments of one sort");
        }

        let fsig = sig
            .lookup_func(f)
            .ok_or_else(|| TermError::UndeclaredSymbol(self.symbol_name(f).to_owned()))?;
        if fsig.params.len() != args.len() {
            return Err(TermError::Sort(format!(
                "`{}` expects {} arguments, got {}",
                self.symbol_name(f),
                fsig.params.len(),
                args.len()
            )));
        }
        for (i, (&expected, &got)) in fsig.params.iter().zip(arg_sorts.iter()).enumerate() {
            if expected != got {
                return Err(TermError::Sort(format!(
                    "argument {} of `{}` has sort {}, expected {}",
                    i + 1,
                    self.symbol_name(f),
                    self.sort_name(got),
                    self.sort_name(expected)
                )));
            }
        }
        Ok(fsig.ret)
    }

    // ---- convenience builders ----

    pub fn var(&mut self, name: &str, sort: Sort) -> Result<Term, TermError> {
        let s = self.symbol(name);
        let sig = SignatureTable::new();
        self.intern(TermKind::Var(s, sort), &sig)
    }

    pub fn bool_const(&mut self, value: bool) -> Term {
        self.intern_with_sort(TermKind::Const(Literal::Bool(value)), self.sort_bool)
    }

    pub fn int_const(&mut self, value: impl Into<BigInt>) -> Term {
        self.intern_with_sort(TermKind::Const(Literal::Int(value.into())), self.sort_int)
    }

    pub fn rational_const(&mut self, value: BigRational) -> Term {
        self.intern_with_sort(TermKind::Const(Literal::Rational(value)), self.sort_real)
    }

    pub fn app(&mut self, f: Symbol, args: Vec<Term>, sig: &SignatureTable) -> Result<Term, TermError> {
        self.intern(TermKind::App(f, args), sig)
    }

    pub fn binder(
        &mut self,
        kind: BinderKind,
        bindings: Vec<(Symbol, Sort)>,
        body: Term,
    ) -> Result<Term, TermError> {
        let sig = SignatureTable::new();
        self.intern(TermKind::Binder(kind, bindings, body), &sig)
    }

    /// Binary equality between two terms of the same sort.
    pub fn eq_term(&mut self, lhs: Term, rhs: Term) -> Result<Term, TermError> {
        if self.sort(lhs) != self.sort(rhs) {
            return Err(TermError::Sort("equality between different sorts".into()));
        }
        let eq = self.builtins.eq;
        Ok(self.intern_with_sort(TermKind::App(eq, vec![lhs, rhs]), self.sort_bool))
    }

    pub fn not_term(&mut self, t: Term) -> Result<Term, TermError> {
        if self.sort(t) != self.sort_bool {
            return Err(TermError::Sort("negation of a non-Bool term".into()));
        }
        let not = self.builtins.not;
        Ok(self.intern_with_sort(TermKind::App(not, vec![t]), self.sort_bool))
    }

    /// Splits `(= a b)` into its two sides.
    pub fn as_equality(&self, t: Term) -> Option<(Term, Term)> {
        match self.kind(t) {
            TermKind::App(f, args) if *f == self.builtins.eq && args.len() == 2 => {
                Some((args[0], args[1]))
            }
            _ => None,
        }
    }

    /// Strips one leading negation.
    pub fn as_negation(&self, t: Term) -> Option<Term> {
        match self.kind(t) {
            TermKind::App(f, args) if *f == self.builtins.not && args.len() == 1 => Some(args[0]),
            _ => None,
        }
    }

    /// Normalizes a literal to `(polarity, atom)`, stripping all leading
    /// negations. `true` means an even number of negations were stripped.
    pub fn polarity(&self, t: Term) -> (bool, Term) {
        let mut current = t;
        let mut positive = true;
        while let Some(inner) = self.as_negation(current) {
            positive = !positive;
            current = inner;
        }
        (positive, current)
    }

    /// Checks clause literals are all Bool.
    pub fn validate_clause(&self, clause: &Clause) -> Result<(), TermError> {
        for &lit in &clause.0 {
            if self.sort(lit) != self.sort_bool {
                return Err(TermError::Sort("clause literal is not Bool".into()));
            }
        }
        Ok(())
    }

    pub fn func_sig_from_sort(&self, sort: Sort) -> Option<FuncSig> {
        match self.sort_kind(sort) {
            SortKind::Function(dom, cod) => Some(FuncSig {
                params: dom.clone(),
                ret: *cod,
            }),
            _ => None,
        }
    }
}
