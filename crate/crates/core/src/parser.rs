//! Parsers for the SMT-LIB problem subset and the Alethe proof language.

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::Zero;

use crate::ast::{
    AnchorCmd, ContextAssignment, Definition, FunctionDef, Problem, ProofCommand, RuleArg, Step,
};
use crate::error::{FrontendError, Position, TermError};
use crate::lexer::{tokenize, Token, TokenKind};
use crate::term::{
    BinderKind, Clause, FuncSig, SignatureTable, Sort, Symbol, Term, TermKind, TermPool,
};

const MAX_NESTING: usize = 2000;

/// Parser configuration. `subproof_rules` is the set of rules allowed to
/// conclude a subproof; additional rules can be registered without parser
/// changes.
#[derive(Clone, Debug)]
pub struct ParserConfig {
    pub subproof_rules: HashSet<String>,
}

impl Default for ParserConfig {
    fn default() -> Self {
        let mut subproof_rules = HashSet::new();
        subproof_rules.insert("bind".to_owned());
        ParserConfig { subproof_rules }
    }
}

// ---------------------------------------------------------------------------
// S-expressions
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
enum SExpr {
    Atom(Token),
    List(Vec<SExpr>, Position),
}

impl SExpr {
    fn pos(&self) -> Position {
        match self {
            SExpr::Atom(tok) => tok.pos,
            SExpr::List(_, pos) => *pos,
        }
    }

    fn as_symbol(&self) -> Option<&str> {
        match self {
            SExpr::Atom(Token { kind: TokenKind::Symbol(s), .. }) => Some(s),
            _ => None,
        }
    }

    fn as_keyword(&self) -> Option<&str> {
        match self {
            SExpr::Atom(Token { kind: TokenKind::Keyword(k), .. }) => Some(k),
            _ => None,
        }
    }

    fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items, _) => Some(items),
            _ => None,
        }
    }
}

fn read_sexprs(tokens: Vec<Token>) -> Result<Vec<SExpr>, FrontendError> {
    let mut stack: Vec<(Vec<SExpr>, Position)> = Vec::new();
    let mut top: Vec<SExpr> = Vec::new();
    for tok in tokens {
        match tok.kind {
            TokenKind::LParen => {
                if stack.len() >= MAX_NESTING {
                    return Err(FrontendError::Parse {
                        pos: tok.pos,
                        msg: "nesting too deep".into(),
                    });
                }
                stack.push((Vec::new(), tok.pos));
            }
            TokenKind::RParen => match stack.pop() {
                Some((items, pos)) => {
                    let list = SExpr::List(items, pos);
                    match stack.last_mut() {
                        Some((parent, _)) => parent.push(list),
                        None => top.push(list),
                    }
                }
                None => {
                    return Err(FrontendError::Parse {
                        pos: tok.pos,
                        msg: "unmatched `)`".into(),
                    });
                }
            },
            _ => {
                let atom = SExpr::Atom(tok);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(atom),
                    None => top.push(atom),
                }
            }
        }
    }
    if let Some((_, pos)) = stack.last() {
        return Err(FrontendError::Parse {
            pos: *pos,
            msg: "unclosed `(`".into(),
        });
    }
    Ok(top)
}

/// Interns every symbol atom so that fresh-name generation is global over
/// the whole input, including symbols that only appear later.
fn intern_all_symbols(pool: &mut TermPool, sexprs: &[SExpr]) {
    let mut stack: Vec<&SExpr> = sexprs.iter().collect();
    while let Some(sx) = stack.pop() {
        match sx {
            SExpr::Atom(Token { kind: TokenKind::Symbol(s), .. }) => {
                pool.symbol(s);
            }
            SExpr::List(items, _) => stack.extend(items.iter()),
            _ => {}
        }
    }
}

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
enum ScopeEntry {
    /// A bound or context variable; occurrences resolve to `Var(symbol, sort)`.
    /// The symbol may differ from the written name after capture renaming.
    Var(Symbol, Sort),
    /// A `let`-bound value.
    Let(Term),
}

struct TermParser<'a> {
    pool: &'a mut TermPool,
    sig: &'a SignatureTable,
    scopes: Vec<Vec<(Symbol, ScopeEntry)>>,
}

impl<'a> TermParser<'a> {
    fn new(pool: &'a mut TermPool, sig: &'a SignatureTable) -> Self {
        TermParser { pool, sig, scopes: Vec::new() }
    }

    fn with_scope(pool: &'a mut TermPool, sig: &'a SignatureTable, scope: Vec<(Symbol, ScopeEntry)>) -> Self {
        TermParser { pool, sig, scopes: vec![scope] }
    }

    fn lookup(&self, name: Symbol) -> Option<&ScopeEntry> {
        self.scopes
            .iter()
            .rev()
            .find_map(|scope| scope.iter().rev().find(|(n, _)| *n == name).map(|(_, e)| e))
    }

    fn sort_error(pos: Position, err: TermError) -> FrontendError {
        match err {
            TermError::Sort(msg) => FrontendError::Sort { pos, msg },
            TermError::UndeclaredSymbol(name) => FrontendError::UndeclaredSymbol { pos, name },
        }
    }

    fn parse(&mut self, sx: &SExpr) -> Result<Term, FrontendError> {
        let pos = sx.pos();
        match sx {
            SExpr::Atom(tok) => match &tok.kind {
                TokenKind::Numeral(n) => Ok(self.pool.int_const(n.clone())),
                TokenKind::Decimal(r) => Ok(self.pool.rational_const(r.clone())),
                TokenKind::Symbol(name) => self.parse_symbol(name, pos),
                TokenKind::Keyword(_) => Err(FrontendError::Parse {
                    pos,
                    msg: "keyword in term position".into(),
                }),
                _ => unreachable!("parens are consumed by the reader"),
            },
            SExpr::List(items, _) => self.parse_list(items, pos),
        }
    }

    fn parse_symbol(&mut self, name: &str, pos: Position) -> Result<Term, FrontendError> {
        if name == "true" {
            return Ok(self.pool.bool_const(true));
        }
        if name == "false" {
            return Ok(self.pool.bool_const(false));
        }
        let sym = self.pool.symbol(name);
        if let Some(entry) = self.lookup(sym) {
            match entry {
                ScopeEntry::Var(actual, sort) => {
                    let (actual, sort) = (*actual, *sort);
                    return Ok(self.pool.intern_with_sort(TermKind::Var(actual, sort), sort));
                }
                ScopeEntry::Let(term) => return Ok(*term),
            }
        }
        match self.sig.lookup_func(sym) {
            Some(fsig) if fsig.params.is_empty() => {
                let sort = fsig.ret;
                Ok(self.pool.intern_with_sort(TermKind::Var(sym, sort), sort))
            }
            Some(_) => Err(FrontendError::Sort {
                pos,
                msg: format!("`{name}` takes arguments and cannot appear bare"),
            }),
            None => Err(FrontendError::UndeclaredSymbol { pos, name: name.to_owned() }),
        }
    }

    fn parse_list(&mut self, items: &[SExpr], pos: Position) -> Result<Term, FrontendError> {
        let head = items.first().ok_or(FrontendError::Parse {
            pos,
            msg: "empty application".into(),
        })?;
        let head_name = head.as_symbol().ok_or_else(|| FrontendError::Parse {
            pos: head.pos(),
            msg: "expected a symbol in head position".into(),
        })?;

        match head_name {
            "forall" | "exists" | "choice" => {
                let kind = match head_name {
                    "forall" => BinderKind::Forall,
                    "exists" => BinderKind::Exists,
                    _ => BinderKind::Choice,
                };
                self.parse_binder(kind, items, pos)
            }
            "let" => self.parse_let(items, pos),
            "!" => Err(FrontendError::Parse {
                pos,
                msg: "term annotations are only supported at the top of an assertion".into(),
            }),
            _ => {
                // Constant folding for negative numbers and rational literals.
                if let Some((rat, is_real)) = fold_rational(items) {
                    return Ok(if is_real {
                        self.pool.rational_const(rat)
                    } else {
                        self.pool.int_const(rat.to_integer())
                    });
                }
                let args = items[1..]
                    .iter()
                    .map(|sx| self.parse(sx))
                    .collect::<Result<Vec<_>, _>>()?;
                let sym = self.pool.symbol(head_name);
                if args.is_empty() {
                    // `(f)` for a nullary symbol; canonicalize to the bare form.
                    return self.parse_symbol(head_name, pos);
                }
                if self.lookup(sym).is_some() {
                    return Err(FrontendError::Sort {
                        pos,
                        msg: format!("bound variable `{head_name}` cannot be applied"),
                    });
                }
                self.pool
                    .intern(TermKind::App(sym, args), self.sig)
                    .map_err(|e| Self::sort_error(pos, e))
            }
        }
    }

    fn parse_binder(
        &mut self,
        kind: BinderKind,
        items: &[SExpr],
        pos: Position,
    ) -> Result<Term, FrontendError> {
        if items.len() != 3 {
            return Err(FrontendError::Parse {
                pos,
                msg: format!("`{}` expects a binding list and a body", kind.name()),
            });
        }
        let binding_list = items[1].as_list().ok_or_else(|| FrontendError::Parse {
            pos: items[1].pos(),
            msg: "expected a binding list".into(),
        })?;
        if binding_list.is_empty() {
            return Err(FrontendError::Parse {
                pos: items[1].pos(),
                msg: "empty binding list".into(),
            });
        }
        let mut scope = Vec::new();
        let mut bindings = Vec::new();
        // Names of values bound by visible `let`s; a binder reusing such a
        // name must be renamed so that expanded let values are not captured.
        let let_free = self.visible_let_free_names();
        for b in binding_list {
            let pair = b.as_list().ok_or_else(|| FrontendError::Parse {
                pos: b.pos(),
                msg: "expected `(<var> <Sort>)`".into(),
            })?;
            if pair.len() != 2 {
                return Err(FrontendError::Parse {
                    pos: b.pos(),
                    msg: "expected `(<var> <Sort>)`".into(),
                });
            }
            let name = pair[0].as_symbol().ok_or_else(|| FrontendError::Parse {
                pos: pair[0].pos(),
                msg: "expected a variable name".into(),
            })?;
            let sort = parse_sort(self.pool, self.sig, &pair[1])?;
            let written = self.pool.symbol(name);
            let actual = if let_free.contains(&written) {
                self.pool.fresh_symbol(name)
            } else {
                written
            };
            scope.push((written, ScopeEntry::Var(actual, sort)));
            bindings.push((actual, sort));
        }
        self.scopes.push(scope);
        let body = self.parse(&items[2]);
        self.scopes.pop();
        let body = body?;
        self.pool
            .intern(TermKind::Binder(kind, bindings, body), self.sig)
            .map_err(|e| Self::sort_error(pos, e))
    }

    fn visible_let_free_names(&self) -> HashSet<Symbol> {
        let mut out = HashSet::new();
        for scope in &self.scopes {
            for (_, entry) in scope {
                if let ScopeEntry::Let(term) = entry {
                    out.extend(crate::term::free_variables(self.pool, *term).into_iter().map(|(n, _)| n));
                }
            }
        }
        out
    }

    fn parse_let(&mut self, items: &[SExpr], pos: Position) -> Result<Term, FrontendError> {
        if items.len() != 3 {
            return Err(FrontendError::Parse {
                pos,
                msg: "`let` expects a binding list and a body".into(),
            });
        }
        let binding_list = items[1].as_list().ok_or_else(|| FrontendError::Parse {
            pos: items[1].pos(),
            msg: "expected a binding list".into(),
        })?;
        let mut scope = Vec::new();
        for b in binding_list {
            let pair = b.as_list().ok_or_else(|| FrontendError::Parse {
                pos: b.pos(),
                msg: "expected `(<var> <term>)`".into(),
            })?;
            if pair.len() != 2 {
                return Err(FrontendError::Parse {
                    pos: b.pos(),
                    msg: "expected `(<var> <term>)`".into(),
                });
            }
            let name = pair[0].as_symbol().ok_or_else(|| FrontendError::Parse {
                pos: pair[0].pos(),
                msg: "expected a variable name".into(),
            })?;
            // Values are parsed in the enclosing scope (simultaneous let).
            let value = self.parse(&pair[1])?;
            scope.push((self.pool.symbol(name), ScopeEntry::Let(value)));
        }
        self.scopes.push(scope);
        let body = self.parse(&items[2]);
        self.scopes.pop();
        body
    }
}

/// Folds `(- <num>)` and `(/ <num> <num>)` applied to numeric literals into
/// one exact constant. The boolean is true when the constant is Real
/// (a decimal appeared or a division was folded) rather than Int.
fn fold_rational(items: &[SExpr]) -> Option<(BigRational, bool)> {
    fn atom_rational(sx: &SExpr) -> Option<(BigRational, bool)> {
        match sx {
            SExpr::Atom(Token { kind: TokenKind::Numeral(n), .. }) => {
                Some((BigRational::from_integer(n.clone()), false))
            }
            SExpr::Atom(Token { kind: TokenKind::Decimal(r), .. }) => Some((r.clone(), true)),
            SExpr::List(inner, _) => fold_rational(inner),
            _ => None,
        }
    }
    let head = items.first()?.as_symbol()?;
    match head {
        "-" if items.len() == 2 => {
            let (r, real) = atom_rational(&items[1])?;
            Some((-r, real))
        }
        "/" if items.len() == 3 => {
            let (num, _) = atom_rational(&items[1])?;
            let (den, _) = atom_rational(&items[2])?;
            if den.is_zero() {
                None
            } else {
                Some((num / den, true))
            }
        }
        _ => None,
    }
}

fn parse_sort(pool: &mut TermPool, sig: &SignatureTable, sx: &SExpr) -> Result<Sort, FrontendError> {
    let pos = sx.pos();
    let name = sx.as_symbol().ok_or(FrontendError::Parse {
        pos,
        msg: "expected a sort".into(),
    })?;
    match name {
        "Bool" => Ok(pool.sort_bool()),
        "Int" => Ok(pool.sort_int()),
        "Real" => Ok(pool.sort_real()),
        _ => {
            let sym = pool.symbol(name);
            sig.lookup_sort(sym)
                .ok_or_else(|| FrontendError::UndeclaredSymbol { pos, name: name.to_owned() })
        }
    }
}

// ---------------------------------------------------------------------------
// Problems
// ---------------------------------------------------------------------------

/// Parses an SMT-LIB problem. Accepted commands: `set-logic`, `declare-sort`,
/// `declare-fun`, `declare-const`, `define-fun`, `assert`, `check-sat`
/// (ignored) and `exit` (ignored). Assertions may be wrapped in
/// `(! <term> :named <name>)`.
pub fn parse_problem(pool: &mut TermPool, text: &str) -> Result<Problem, FrontendError> {
    let tokens = tokenize(text)?;
    let sexprs = read_sexprs(tokens)?;
    intern_all_symbols(pool, &sexprs);

    let mut problem = Problem::default();
    for command in &sexprs {
        let items = command.as_list().ok_or_else(|| FrontendError::Parse {
            pos: command.pos(),
            msg: "expected a command".into(),
        })?;
        let pos = command.pos();
        let head = items
            .first()
            .and_then(|h| h.as_symbol())
            .ok_or(FrontendError::Parse { pos, msg: "expected a command name".into() })?;
        match head {
            "set-logic" => {
                let name = items
                    .get(1)
                    .and_then(|s| s.as_symbol())
                    .ok_or(FrontendError::Parse { pos, msg: "expected a logic name".into() })?;
                problem.logic = Some(name.to_owned());
            }
            "declare-sort" => {
                let name = expect_symbol(items.get(1), pos, "sort name")?;
                let arity = match items.get(2) {
                    Some(SExpr::Atom(Token { kind: TokenKind::Numeral(n), .. })) => n.clone(),
                    _ => {
                        return Err(FrontendError::Parse { pos, msg: "expected a sort arity".into() })
                    }
                };
                if !arity.is_zero() {
                    return Err(FrontendError::Sort {
                        pos,
                        msg: "parametric sorts are not supported".into(),
                    });
                }
                let sym = pool.symbol(name);
                let sort = pool.uninterpreted_sort(sym);
                declare_sort_checked(pool, &mut problem.signature, sym, sort, pos)?;
            }
            "declare-fun" => {
                let name = expect_symbol(items.get(1), pos, "function name")?;
                let params = items
                    .get(2)
                    .and_then(|s| s.as_list())
                    .ok_or(FrontendError::Parse { pos, msg: "expected a parameter sort list".into() })?
                    .iter()
                    .map(|s| parse_sort(pool, &problem.signature, s))
                    .collect::<Result<Vec<_>, _>>()?;
                let ret = parse_sort(
                    pool,
                    &problem.signature,
                    items.get(3).ok_or(FrontendError::Parse {
                        pos,
                        msg: "expected a return sort".into(),
                    })?,
                )?;
                declare_func_checked(pool, &mut problem.signature, name, FuncSig { params, ret }, pos)?;
            }
            "declare-const" => {
                let name = expect_symbol(items.get(1), pos, "constant name")?;
                let ret = parse_sort(
                    pool,
                    &problem.signature,
                    items.get(2).ok_or(FrontendError::Parse { pos, msg: "expected a sort".into() })?,
                )?;
                declare_func_checked(
                    pool,
                    &mut problem.signature,
                    name,
                    FuncSig { params: vec![], ret },
                    pos,
                )?;
            }
            "define-fun" => {
                let def = parse_define_fun(pool, &mut problem.signature, items, pos)?;
                problem
                    .definitions
                    .insert(def.name, Definition { params: def.params.clone(), body: def.body });
            }
            "assert" => {
                let body = items.get(1).ok_or(FrontendError::Parse {
                    pos,
                    msg: "expected a term".into(),
                })?;
                if items.len() != 2 {
                    return Err(FrontendError::Parse { pos, msg: "expected a single term".into() });
                }
                let (name, term) = parse_assertion(pool, &mut problem, body)?;
                if pool.sort(term) != pool.sort_bool() {
                    return Err(FrontendError::Sort {
                        pos: body.pos(),
                        msg: "assertion is not Bool".into(),
                    });
                }
                problem.assertions.push((name, term));
            }
            "check-sat" | "exit" => {}
            other => {
                return Err(FrontendError::UnsupportedCommand { pos, name: other.to_owned() });
            }
        }
    }
    Ok(problem)
}

/// Parses an assertion body, handling a top-level `(! t :named n)` wrapper.
fn parse_assertion(
    pool: &mut TermPool,
    problem: &mut Problem,
    body: &SExpr,
) -> Result<(Option<String>, Term), FrontendError> {
    if let Some(items) = body.as_list() {
        if items.first().and_then(|h| h.as_symbol()) == Some("!") {
            let pos = body.pos();
            if items.len() != 4 || items[2].as_keyword() != Some("named") {
                return Err(FrontendError::Parse {
                    pos,
                    msg: "expected `(! <term> :named <name>)`".into(),
                });
            }
            let name = expect_symbol(items.get(3), pos, "annotation name")?.to_owned();
            let term = TermParser::new(pool, &problem.signature).parse(&items[1])?;
            let sym = pool.symbol(&name);
            let ret = pool.sort(term);
            declare_func_checked(pool, &mut problem.signature, &name, FuncSig { params: vec![], ret }, pos)?;
            problem.named_terms.insert(sym, term);
            problem
                .definitions
                .insert(sym, Definition { params: vec![], body: term });
            return Ok((Some(name), term));
        }
    }
    let term = TermParser::new(pool, &problem.signature).parse(body)?;
    Ok((None, term))
}

fn parse_define_fun(
    pool: &mut TermPool,
    sig: &mut SignatureTable,
    items: &[SExpr],
    pos: Position,
) -> Result<FunctionDef, FrontendError> {
    if items.len() != 5 {
        return Err(FrontendError::Parse {
            pos,
            msg: "expected `(define-fun <name> ((<p> <S>)*) <S> <term>)`".into(),
        });
    }
    let name = expect_symbol(items.get(1), pos, "function name")?.to_owned();
    let mut params = Vec::new();
    let mut scope = Vec::new();
    for p in items[2].as_list().ok_or(FrontendError::Parse {
        pos,
        msg: "expected a parameter list".into(),
    })? {
        let pair = p.as_list().ok_or_else(|| FrontendError::Parse {
            pos: p.pos(),
            msg: "expected `(<param> <Sort>)`".into(),
        })?;
        if pair.len() != 2 {
            return Err(FrontendError::Parse {
                pos: p.pos(),
                msg: "expected `(<param> <Sort>)`".into(),
            });
        }
        let pname = expect_symbol(pair.first(), p.pos(), "parameter name")?;
        let sort = parse_sort(pool, sig, &pair[1])?;
        let sym = pool.symbol(pname);
        params.push((sym, sort));
        scope.push((sym, ScopeEntry::Var(sym, sort)));
    }
    let codomain = parse_sort(pool, sig, &items[3])?;
    let body = TermParser::with_scope(pool, sig, scope).parse(&items[4])?;
    if pool.sort(body) != codomain {
        return Err(FrontendError::Sort {
            pos: items[4].pos(),
            msg: format!(
                "definition body has sort {}, expected {}",
                pool.sort_name(pool.sort(body)),
                pool.sort_name(codomain)
            ),
        });
    }
    let sym = pool.symbol(&name);
    declare_func_checked(
        pool,
        sig,
        &name,
        FuncSig { params: params.iter().map(|(_, s)| *s).collect(), ret: codomain },
        pos,
    )?;
    Ok(FunctionDef { name: sym, params, codomain, body })
}

fn declare_sort_checked(
    pool: &mut TermPool,
    sig: &mut SignatureTable,
    sym: Symbol,
    sort: Sort,
    pos: Position,
) -> Result<(), FrontendError> {
    if sig.contains_symbol(sym) {
        return Err(FrontendError::Sort {
            pos,
            msg: format!("`{}` is already declared", pool.symbol_name(sym)),
        });
    }
    sig.declare_sort(sym, sort)
        .map_err(|e| TermParser::sort_error(pos, e))
}

fn declare_func_checked(
    pool: &mut TermPool,
    sig: &mut SignatureTable,
    name: &str,
    fsig: FuncSig,
    pos: Position,
) -> Result<(), FrontendError> {
    let sym = pool.symbol(name);
    if pool.builtins().is_builtin(sym) || name == "true" || name == "false" {
        return Err(FrontendError::Sort {
            pos,
            msg: format!("`{name}` is reserved"),
        });
    }
    if sig.contains_symbol(sym) {
        return Err(FrontendError::Sort {
            pos,
            msg: format!("`{name}` is already declared"),
        });
    }
    sig.declare_func(sym, fsig).map_err(|e| TermParser::sort_error(pos, e))
}

fn expect_symbol<'a>(
    sx: Option<&'a SExpr>,
    pos: Position,
    what: &str,
) -> Result<&'a str, FrontendError> {
    sx.and_then(|s| s.as_symbol()).ok_or_else(|| FrontendError::Parse {
        pos: sx.map(|s| s.pos()).unwrap_or(pos),
        msg: format!("expected a {what}"),
    })
}

// ---------------------------------------------------------------------------
// Proofs
// ---------------------------------------------------------------------------

/// Parses an Alethe proof against a parsed problem. Subproof structure is
/// validated, premise references are resolved against earlier commands, and
/// `define-fun` commands extend the signature for subsequent commands.
pub fn parse_proof(
    pool: &mut TermPool,
    problem: &Problem,
    text: &str,
) -> Result<Vec<ProofCommand>, FrontendError> {
    parse_proof_with_config(pool, problem, text, &ParserConfig::default())
}

pub fn parse_proof_with_config(
    pool: &mut TermPool,
    problem: &Problem,
    text: &str,
    config: &ParserConfig,
) -> Result<Vec<ProofCommand>, FrontendError> {
    let tokens = tokenize(text)?;
    let sexprs = read_sexprs(tokens)?;
    intern_all_symbols(pool, &sexprs);

    let mut parser = ProofParser {
        pool,
        sig: problem.signature.clone(),
        ids: HashSet::new(),
        config,
    };
    let mut ctx = Vec::new();
    parser.parse_sequence(&sexprs, &mut ctx)
}

struct ProofParser<'a> {
    pool: &'a mut TermPool,
    sig: SignatureTable,
    ids: HashSet<String>,
    config: &'a ParserConfig,
}

impl<'a> ProofParser<'a> {
    fn parse_sequence(
        &mut self,
        sexprs: &[SExpr],
        ctx: &mut Vec<Vec<(Symbol, ScopeEntry)>>,
    ) -> Result<Vec<ProofCommand>, FrontendError> {
        let mut commands = Vec::new();
        let mut i = 0;
        while i < sexprs.len() {
            let command = &sexprs[i];
            let pos = command.pos();
            let items = command.as_list().ok_or(FrontendError::Parse {
                pos,
                msg: "expected a proof command".into(),
            })?;
            let head = items
                .first()
                .and_then(|h| h.as_symbol())
                .ok_or(FrontendError::Parse { pos, msg: "expected a command name".into() })?;
            match head {
                "assume" => {
                    if items.len() != 3 {
                        return Err(FrontendError::Parse {
                            pos,
                            msg: "expected `(assume <id> <term>)`".into(),
                        });
                    }
                    let id = expect_symbol(items.get(1), pos, "step id")?.to_owned();
                    self.register_id(&id, items[1].pos())?;
                    let term = self.term_parser(ctx).parse(&items[2])?;
                    if self.pool.sort(term) != self.pool.sort_bool() {
                        return Err(FrontendError::Sort {
                            pos: items[2].pos(),
                            msg: "assumption is not Bool".into(),
                        });
                    }
                    commands.push(ProofCommand::Assume { id, term });
                    i += 1;
                }
                "define-fun" => {
                    let def = parse_define_fun(self.pool, &mut self.sig, items, pos)?;
                    commands.push(ProofCommand::FunctionDefinition(def));
                    i += 1;
                }
                "step" => {
                    let step = self.parse_step(items, pos, ctx)?;
                    commands.push(ProofCommand::Step(step));
                    i += 1;
                }
                "anchor" => {
                    let consumed = self.parse_subproof(&sexprs[i..], pos, ctx, &mut commands)?;
                    i += consumed;
                }
                other => {
                    return Err(FrontendError::Parse {
                        pos,
                        msg: format!("unknown proof command `{other}`"),
                    });
                }
            }
        }
        Ok(commands)
    }

    fn register_id(&mut self, id: &str, pos: Position) -> Result<(), FrontendError> {
        if !self.ids.insert(id.to_owned()) {
            return Err(FrontendError::DuplicateStepId { pos, id: id.to_owned() });
        }
        Ok(())
    }

    fn term_parser<'b>(&'b mut self, ctx: &'b [Vec<(Symbol, ScopeEntry)>]) -> TermParser<'b> {
        let mut tp = TermParser::new(self.pool, &self.sig);
        tp.scopes = ctx.to_vec();
        tp
    }

    fn parse_step(
        &mut self,
        items: &[SExpr],
        pos: Position,
        ctx: &mut Vec<Vec<(Symbol, ScopeEntry)>>,
    ) -> Result<Step, FrontendError> {
        if items.len() < 3 {
            return Err(FrontendError::Parse {
                pos,
                msg: "expected `(step <id> (cl ...) :rule <rule> ...)`".into(),
            });
        }
        let id = expect_symbol(items.get(1), pos, "step id")?.to_owned();
        self.register_id(&id, items[1].pos())?;

        let clause_items = items[2].as_list().ok_or_else(|| FrontendError::Parse {
            pos: items[2].pos(),
            msg: "expected a clause `(cl ...)`".into(),
        })?;
        if clause_items.first().and_then(|h| h.as_symbol()) != Some("cl") {
            return Err(FrontendError::Parse {
                pos: items[2].pos(),
                msg: "expected a clause `(cl ...)`".into(),
            });
        }
        let mut literals = Vec::new();
        for lit in &clause_items[1..] {
            let term = self.term_parser(ctx).parse(lit)?;
            if self.pool.sort(term) != self.pool.sort_bool() {
                return Err(FrontendError::Sort {
                    pos: lit.pos(),
                    msg: "clause literal is not Bool".into(),
                });
            }
            literals.push(term);
        }

        let mut rule = None;
        let mut premises = Vec::new();
        let mut args = Vec::new();
        let mut k = 3;
        while k < items.len() {
            let key = items[k].as_keyword().ok_or_else(|| FrontendError::Parse {
                pos: items[k].pos(),
                msg: "expected a keyword attribute".into(),
            })?;
            let value = items.get(k + 1).ok_or_else(|| FrontendError::Parse {
                pos: items[k].pos(),
                msg: format!("`:{key}` expects a value"),
            })?;
            match key {
                "rule" => {
                    rule = Some(
                        value
                            .as_symbol()
                            .ok_or_else(|| FrontendError::Parse {
                                pos: value.pos(),
                                msg: "expected a rule name".into(),
                            })?
                            .to_owned(),
                    );
                }
                "premises" => {
                    for p in value.as_list().ok_or_else(|| FrontendError::Parse {
                        pos: value.pos(),
                        msg: "expected a premise list".into(),
                    })? {
                        let pid = p.as_symbol().ok_or_else(|| FrontendError::Parse {
                            pos: p.pos(),
                            msg: "expected a premise id".into(),
                        })?;
                        if !self.ids.contains(pid) {
                            return Err(FrontendError::UnknownPremise {
                                pos: p.pos(),
                                id: pid.to_owned(),
                            });
                        }
                        premises.push(pid.to_owned());
                    }
                }
                "args" => {
                    for arg in value.as_list().ok_or_else(|| FrontendError::Parse {
                        pos: value.pos(),
                        msg: "expected an argument list".into(),
                    })? {
                        args.push(self.parse_rule_arg(arg, ctx)?);
                    }
                }
                other => {
                    return Err(FrontendError::Parse {
                        pos: items[k].pos(),
                        msg: format!("unknown step attribute `:{other}`"),
                    });
                }
            }
            k += 2;
        }
        let rule = rule.ok_or(FrontendError::Parse {
            pos,
            msg: "step is missing `:rule`".into(),
        })?;
        Ok(Step { id, clause: Clause(literals), rule, premises, args })
    }

    fn parse_rule_arg(
        &mut self,
        sx: &SExpr,
        ctx: &mut Vec<Vec<(Symbol, ScopeEntry)>>,
    ) -> Result<RuleArg, FrontendError> {
        if let Some(items) = sx.as_list() {
            if items.first().and_then(|h| h.as_keyword()) == Some("=") {
                if items.len() != 3 {
                    return Err(FrontendError::Parse {
                        pos: sx.pos(),
                        msg: "expected `(:= <var> <term>)`".into(),
                    });
                }
                let var = expect_symbol(items.get(1), sx.pos(), "variable name")?;
                let var = self.pool.symbol(var);
                let value = self.term_parser(ctx).parse(&items[2])?;
                return Ok(RuleArg::Assign(var, value));
            }
            if let Some((rat, _)) = fold_rational(items) {
                return Ok(RuleArg::Rational(rat));
            }
        }
        match sx {
            SExpr::Atom(Token { kind: TokenKind::Numeral(n), .. }) => {
                Ok(RuleArg::Rational(BigRational::from_integer(n.clone())))
            }
            SExpr::Atom(Token { kind: TokenKind::Decimal(r), .. }) => {
                Ok(RuleArg::Rational(r.clone()))
            }
            _ => Ok(RuleArg::Term(self.term_parser(ctx).parse(sx)?)),
        }
    }

    /// Parses `(anchor ...)`, its subproof body, and the concluding step.
    /// Returns the number of s-expressions consumed.
    fn parse_subproof(
        &mut self,
        sexprs: &[SExpr],
        pos: Position,
        ctx: &mut Vec<Vec<(Symbol, ScopeEntry)>>,
        commands: &mut Vec<ProofCommand>,
    ) -> Result<usize, FrontendError> {
        let items = sexprs[0].as_list().unwrap();
        let (target, arg_entries) = self.parse_anchor_attrs(items, pos)?;

        // Locate the concluding step: the next step at this nesting level
        // whose id equals the target.
        let mut open: Vec<String> = vec![target.clone()];
        let mut close = None;
        for (j, sx) in sexprs.iter().enumerate().skip(1) {
            let Some(items) = sx.as_list() else { continue };
            match items.first().and_then(|h| h.as_symbol()) {
                Some("anchor") => {
                    let (t, _) = self.parse_anchor_attrs(items, sx.pos())?;
                    open.push(t);
                }
                Some("step") => {
                    let Some(id) = items.get(1).and_then(|s| s.as_symbol()) else { continue };
                    if open.last().is_some_and(|t| t == id) {
                        open.pop();
                        if open.is_empty() {
                            close = Some(j);
                            break;
                        }
                    } else if open.iter().any(|t| t == id) {
                        return Err(FrontendError::Parse {
                            pos: sx.pos(),
                            msg: format!("step `{id}` closes an outer subproof while an inner one is open"),
                        });
                    }
                }
                _ => {}
            }
        }
        let close = close.ok_or(FrontendError::UnclosedAnchor { pos, target: target.clone() })?;

        // Build the context frame, inferring variable sorts from the
        // concluding step when the old-style `(:= x vr)` form leaves them
        // unstated.
        let (assignments, frame) =
            self.resolve_anchor_entries(&arg_entries, pos, ctx, &sexprs[close])?;

        commands.push(ProofCommand::Anchor(AnchorCmd { target: target.clone(), assignments }));

        ctx.push(frame);
        let body = self.parse_sequence(&sexprs[1..close], ctx);
        ctx.pop();
        commands.extend(body?);

        // The concluding step itself is parsed in the outer scope.
        let step_items = sexprs[close].as_list().unwrap();
        let step = self.parse_step(step_items, sexprs[close].pos(), ctx)?;
        if !self.config.subproof_rules.contains(&step.rule) {
            return Err(FrontendError::Parse {
                pos: sexprs[close].pos(),
                msg: format!(
                    "step `{}` closes a subproof but rule `{}` is not a subproof rule",
                    step.id, step.rule
                ),
            });
        }
        commands.push(ProofCommand::Step(step));
        Ok(close + 1)
    }

    /// Extracts the target id and the raw argument entries of an anchor.
    /// The single-assignment form `:args (:= x vr)` is normalized to a one
    /// element list.
    fn parse_anchor_attrs<'s>(
        &mut self,
        items: &'s [SExpr],
        pos: Position,
    ) -> Result<(String, Vec<&'s SExpr>), FrontendError> {
        let mut target = None;
        let mut entries: Vec<&SExpr> = Vec::new();
        let mut k = 1;
        while k < items.len() {
            let key = items[k].as_keyword().ok_or_else(|| FrontendError::Parse {
                pos: items[k].pos(),
                msg: "expected a keyword attribute".into(),
            })?;
            let value = items.get(k + 1).ok_or_else(|| FrontendError::Parse {
                pos: items[k].pos(),
                msg: format!("`:{key}` expects a value"),
            })?;
            match key {
                "step" => {
                    target = Some(
                        value
                            .as_symbol()
                            .ok_or_else(|| FrontendError::Parse {
                                pos: value.pos(),
                                msg: "expected a step id".into(),
                            })?
                            .to_owned(),
                    );
                }
                "args" => {
                    let list = value.as_list().ok_or_else(|| FrontendError::Parse {
                        pos: value.pos(),
                        msg: "expected an argument list".into(),
                    })?;
                    if list.first().and_then(|h| h.as_keyword()) == Some("=") {
                        entries.push(value);
                    } else {
                        entries.extend(list.iter());
                    }
                }
                other => {
                    return Err(FrontendError::Parse {
                        pos: items[k].pos(),
                        msg: format!("unknown anchor attribute `:{other}`"),
                    });
                }
            }
            k += 2;
        }
        let target = target.ok_or(FrontendError::Parse {
            pos,
            msg: "anchor is missing `:step`".into(),
        })?;
        Ok((target, entries))
    }

    fn resolve_anchor_entries(
        &mut self,
        entries: &[&SExpr],
        pos: Position,
        ctx: &[Vec<(Symbol, ScopeEntry)>],
        closing_step: &SExpr,
    ) -> Result<(Vec<ContextAssignment>, Vec<(Symbol, ScopeEntry)>), FrontendError> {
        let mut frame: Vec<(Symbol, ScopeEntry)> = Vec::new();
        let mut parsed: Vec<PendingEntry> = Vec::new();
        let mut deferred = 0usize;

        for sx in entries {
            let items = sx.as_list().ok_or_else(|| FrontendError::Parse {
                pos: sx.pos(),
                msg: "expected `(<var> <Sort>)` or `(:= <var> <term>)`".into(),
            })?;
            if items.first().and_then(|h| h.as_keyword()) == Some("=") {
                if items.len() != 3 {
                    return Err(FrontendError::Parse {
                        pos: sx.pos(),
                        msg: "expected `(:= <var> <term>)`".into(),
                    });
                }
                let var = expect_symbol(items.get(1), sx.pos(), "variable name")?.to_owned();
                // Try to parse the value in the current scope; a bare unknown
                // symbol defers to sort inference from the concluding step.
                let mut scopes = ctx.to_vec();
                scopes.push(frame.clone());
                let mut tp = TermParser::new(self.pool, &self.sig);
                tp.scopes = scopes;
                match tp.parse(&items[2]) {
                    Ok(value) => {
                        parsed.push(PendingEntry::Assign { var, value: Some(value) });
                    }
                    Err(FrontendError::UndeclaredSymbol { .. })
                        if items[2].as_symbol().is_some() =>
                    {
                        deferred += 1;
                        parsed.push(PendingEntry::Deferred {
                            var,
                            value_name: items[2].as_symbol().unwrap().to_owned(),
                        });
                    }
                    Err(e) => return Err(e),
                }
            } else {
                if items.len() != 2 {
                    return Err(FrontendError::Parse {
                        pos: sx.pos(),
                        msg: "expected `(<var> <Sort>)`".into(),
                    });
                }
                let name = expect_symbol(items.first(), sx.pos(), "variable name")?;
                let sort = parse_sort(self.pool, &self.sig, &items[1])?;
                let sym = self.pool.symbol(name);
                frame.push((sym, ScopeEntry::Var(sym, sort)));
                parsed.push(PendingEntry::Fixed(sym, sort));
            }
        }

        let inferred = if deferred > 0 {
            Some(self.infer_anchor_sorts(&parsed, pos, closing_step)?)
        } else {
            None
        };

        let mut assignments = Vec::new();
        let mut assign_index = 0usize;
        for entry in parsed {
            match entry {
                PendingEntry::Fixed(sym, sort) => {
                    assignments.push(ContextAssignment::Fixed(sym, sort));
                }
                PendingEntry::Assign { var, value } => {
                    let value = value.unwrap();
                    let sort = self.pool.sort(value);
                    let sym = self.pool.symbol(&var);
                    let var_term = self.pool.intern_with_sort(TermKind::Var(sym, sort), sort);
                    frame.push((sym, ScopeEntry::Var(sym, sort)));
                    assignments.push(ContextAssignment::Assign(var_term, value));
                    assign_index += 1;
                }
                PendingEntry::Deferred { var, value_name } => {
                    let (lhs_sort, rhs_sort) = inferred.as_ref().unwrap()[assign_index];
                    if lhs_sort != rhs_sort {
                        return Err(FrontendError::Sort {
                            pos,
                            msg: format!(
                                "anchor assignment `{var}` maps sort {} to sort {}",
                                self.pool.sort_name(lhs_sort),
                                self.pool.sort_name(rhs_sort)
                            ),
                        });
                    }
                    let var_sym = self.pool.symbol(&var);
                    let val_sym = self.pool.symbol(&value_name);
                    let var_term = self
                        .pool
                        .intern_with_sort(TermKind::Var(var_sym, lhs_sort), lhs_sort);
                    let val_term = self
                        .pool
                        .intern_with_sort(TermKind::Var(val_sym, rhs_sort), rhs_sort);
                    frame.push((var_sym, ScopeEntry::Var(var_sym, lhs_sort)));
                    frame.push((val_sym, ScopeEntry::Var(val_sym, rhs_sort)));
                    assignments.push(ContextAssignment::Assign(var_term, val_term));
                    assign_index += 1;
                }
            }
        }

        // Domains within a frame must be disjoint.
        let mut seen = HashSet::new();
        for a in &assignments {
            let name = match a {
                ContextAssignment::Fixed(sym, _) => *sym,
                ContextAssignment::Assign(var, _) => match self.pool.kind(*var) {
                    TermKind::Var(sym, _) => *sym,
                    _ => unreachable!(),
                },
            };
            if !seen.insert(name) {
                return Err(FrontendError::Parse {
                    pos,
                    msg: format!(
                        "anchor binds `{}` more than once",
                        self.pool.symbol_name(name)
                    ),
                });
            }
        }
        Ok((assignments, frame))
    }

    /// For old-style assignments `(:= x vr)` with no sort information, pulls
    /// the sorts positionally from the quantifier bindings in the concluding
    /// bind step's conclusion.
    fn infer_anchor_sorts(
        &mut self,
        entries: &[PendingEntry],
        pos: Position,
        closing_step: &SExpr,
    ) -> Result<Vec<(Sort, Sort)>, FrontendError> {
        let fail = |msg: &str| FrontendError::Parse {
            pos,
            msg: format!("cannot infer sorts for anchor variables: {msg}"),
        };
        let items = closing_step.as_list().ok_or_else(|| fail("malformed concluding step"))?;
        let clause = items
            .get(2)
            .and_then(|c| c.as_list())
            .ok_or_else(|| fail("concluding step has no clause"))?;
        let lit = clause.get(1).ok_or_else(|| fail("concluding clause is empty"))?;
        let eq = lit.as_list().ok_or_else(|| fail("conclusion is not an equality"))?;
        if eq.first().and_then(|h| h.as_symbol()) != Some("=") || eq.len() != 3 {
            return Err(fail("conclusion is not an equality"));
        }
        let lhs_bindings = quantifier_bindings(&eq[1]).ok_or_else(|| fail("left side is not a binder"))?;
        let rhs_bindings = quantifier_bindings(&eq[2]).ok_or_else(|| fail("right side is not a binder"))?;
        let n_assignments = entries
            .iter()
            .filter(|e| !matches!(e, PendingEntry::Fixed(..)))
            .count();
        if lhs_bindings.len() != n_assignments || rhs_bindings.len() != n_assignments {
            return Err(fail("assignment count does not match quantifier bindings"));
        }
        let mut out = Vec::new();
        for (l, r) in lhs_bindings.iter().zip(rhs_bindings.iter()) {
            let ls = parse_sort(self.pool, &self.sig, l)?;
            let rs = parse_sort(self.pool, &self.sig, r)?;
            out.push((ls, rs));
        }
        Ok(out)
    }
}

enum PendingEntry {
    Fixed(Symbol, Sort),
    Assign { var: String, value: Option<Term> },
    Deferred { var: String, value_name: String },
}

/// Returns the sort s-expressions of a `(Q ((x S) ...) body)` term.
fn quantifier_bindings(sx: &SExpr) -> Option<Vec<&SExpr>> {
    let items = sx.as_list()?;
    let head = items.first()?.as_symbol()?;
    if !matches!(head, "forall" | "exists" | "choice") || items.len() != 3 {
        return None;
    }
    let bindings = items[1].as_list()?;
    bindings
        .iter()
        .map(|b| {
            let pair = b.as_list()?;
            if pair.len() == 2 {
                Some(&pair[1])
            } else {
                None
            }
        })
        .collect()
}
