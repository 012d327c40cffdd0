//! Proof commands and parsed problems.

use std::collections::HashMap;

use num_rational::BigRational;

use crate::error::TermError;
use crate::term::{Clause, SignatureTable, Sort, Symbol, Term, TermPool};
use crate::term::substitute;

/// One argument of a proof step.
#[derive(Clone, Debug, PartialEq)]
pub enum RuleArg {
    /// A plain term argument.
    Term(Term),
    /// `(:= <var> <term>)`, e.g. an instantiation for a bound variable.
    Assign(Symbol, Term),
    /// An exact rational, e.g. a Farkas coefficient.
    Rational(BigRational),
}

/// One entry of an anchor's argument list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContextAssignment {
    /// `(<var> <Sort>)`: fixes a variable for the subproof.
    Fixed(Symbol, Sort),
    /// `(:= <var> <term>)`: maps a variable to a term inside the subproof.
    /// The first component is the variable as an interned term.
    Assign(Term, Term),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub id: String,
    pub clause: Clause,
    pub rule: String,
    pub premises: Vec<String>,
    pub args: Vec<RuleArg>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorCmd {
    pub target: String,
    pub assignments: Vec<ContextAssignment>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionDef {
    pub name: Symbol,
    pub params: Vec<(Symbol, Sort)>,
    pub codomain: Sort,
    pub body: Term,
}

/// A proof is a list of these.
#[derive(Clone, Debug, PartialEq)]
pub enum ProofCommand {
    Assume { id: String, term: Term },
    Step(Step),
    Anchor(AnchorCmd),
    FunctionDefinition(FunctionDef),
}

impl ProofCommand {
    pub fn id(&self) -> Option<&str> {
        match self {
            ProofCommand::Assume { id, .. } => Some(id),
            ProofCommand::Step(step) => Some(&step.id),
            ProofCommand::Anchor(_) | ProofCommand::FunctionDefinition(_) => None,
        }
    }
}

/// A parsed SMT-LIB problem.
#[derive(Clone, Debug, Default)]
pub struct Problem {
    pub logic: Option<String>,
    pub signature: SignatureTable,
    /// Assertions in order, with the `:named` name when one was given.
    pub assertions: Vec<(Option<String>, Term)>,
    /// Terms bound by `:named` annotations.
    pub named_terms: HashMap<Symbol, Term>,
    /// Function definitions from `define-fun` commands in the problem.
    pub definitions: DefinitionTable,
}

/// Definitions collected from `define-fun` commands and `:named`
/// annotations. Expansion replaces defined symbols by their definienda;
/// rule checking works on expanded terms while the command list keeps the
/// original spelling.
#[derive(Clone, Debug, Default)]
pub struct DefinitionTable {
    defs: HashMap<Symbol, Definition>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Definition {
    pub params: Vec<(Symbol, Sort)>,
    pub body: Term,
}

impl DefinitionTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: Symbol, def: Definition) {
        self.defs.insert(name, def);
    }

    pub fn get(&self, name: Symbol) -> Option<&Definition> {
        self.defs.get(&name)
    }

    pub fn contains(&self, name: Symbol) -> bool {
        self.defs.contains_key(&name)
    }

    pub fn extend_from(&mut self, other: &DefinitionTable) {
        for (&name, def) in &other.defs {
            self.defs.insert(name, def.clone());
        }
    }

    /// Recursively expands all defined symbols in `t`. Definitions cannot be
    /// recursive (a symbol is only defined after its body was parsed), so
    /// this terminates.
    pub fn expand(&self, pool: &mut TermPool, t: Term) -> Result<Term, TermError> {
        if self.defs.is_empty() {
            return Ok(t);
        }
        let mut shadowed = Vec::new();
        self.expand_rec(pool, t, &mut shadowed)
    }

    fn expand_rec(
        &self,
        pool: &mut TermPool,
        t: Term,
        shadowed: &mut Vec<Symbol>,
    ) -> Result<Term, TermError> {
        use crate::term::TermKind;
        match pool.kind(t).clone() {
            TermKind::Var(name, _) if !shadowed.contains(&name) => match self.defs.get(&name) {
                Some(def) if def.params.is_empty() => self.expand_rec(pool, def.body, shadowed),
                _ => Ok(t),
            },
            TermKind::Var(..) | TermKind::Const(_) => Ok(t),
            TermKind::App(f, args) => {
                let expanded_args = args
                    .iter()
                    .map(|&a| self.expand_rec(pool, a, shadowed))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(def) = self.defs.get(&f) {
                    if def.params.len() == expanded_args.len() && !def.params.is_empty() {
                        let mut sigma = HashMap::new();
                        for ((name, sort), &arg) in def.params.iter().zip(expanded_args.iter()) {
                            let var = pool.var(pool.symbol_name(*name).to_owned().as_str(), *sort)?;
                            sigma.insert(var, arg);
                        }
                        let instantiated = substitute(pool, def.body, &sigma)?;
                        return self.expand_rec(pool, instantiated, shadowed);
                    }
                }
                if expanded_args == args {
                    Ok(t)
                } else {
                    let sort = pool.sort(t);
                    Ok(pool.intern_with_sort(TermKind::App(f, expanded_args), sort))
                }
            }
            TermKind::Binder(kind, bindings, body) => {
                let depth = shadowed.len();
                shadowed.extend(bindings.iter().map(|(n, _)| *n));
                let expanded = self.expand_rec(pool, body, shadowed);
                shadowed.truncate(depth);
                let expanded = expanded?;
                if expanded == body {
                    Ok(t)
                } else {
                    let sort = pool.sort(t);
                    Ok(pool.intern_with_sort(TermKind::Binder(kind, bindings, expanded), sort))
                }
            }
        }
    }
}
