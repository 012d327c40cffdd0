//! Capture-avoiding substitution, alpha-equivalence and free variables.

use std::collections::{HashMap, HashSet};

use crate::error::TermError;

use super::{Symbol, Term, TermKind, TermPool};

/// The exact set of free variables of `t`, as `(name, sort)` pairs. Nullary
/// declared symbols count as free variables; they share the representation.
pub fn free_variables(pool: &TermPool, t: Term) -> HashSet<(Symbol, super::Sort)> {
    let mut out = HashSet::new();
    let mut bound: Vec<Symbol> = Vec::new();
    collect_free(pool, t, &mut bound, &mut out);
    out
}

fn collect_free(
    pool: &TermPool,
    t: Term,
    bound: &mut Vec<Symbol>,
    out: &mut HashSet<(Symbol, super::Sort)>,
) {
    match pool.kind(t) {
        TermKind::Var(name, sort) => {
            if !bound.contains(name) {
                out.insert((*name, *sort));
            }
        }
        TermKind::Const(_) => {}
        TermKind::App(_, args) => {
            for &a in args.clone().iter() {
                collect_free(pool, a, bound, out);
            }
        }
        TermKind::Binder(_, bindings, body) => {
            let names: Vec<Symbol> = bindings.iter().map(|(n, _)| *n).collect();
            let body = *body;
            let depth = bound.len();
            bound.extend(names);
            collect_free(pool, body, bound, out);
            bound.truncate(depth);
        }
    }
}

/// Set of free variable *names* in `t`; used for capture checks.
pub(crate) fn free_names(pool: &TermPool, t: Term) -> HashSet<Symbol> {
    free_variables(pool, t)
        .into_iter()
        .map(|(name, _)| name)
        .collect()
}

/// Simultaneous capture-avoiding substitution. The keys of `sigma` must be
/// variable terms and each replacement must have the sort of its variable.
/// Bound variables are renamed to fresh names whenever a free variable of a
/// replacement would otherwise be captured.
pub fn substitute(
    pool: &mut TermPool,
    t: Term,
    sigma: &HashMap<Term, Term>,
) -> Result<Term, TermError> {
    for (&var, &replacement) in sigma {
        match pool.kind(var) {
            TermKind::Var(..) => {}
            _ => return Err(TermError::Sort("substitution key is not a variable".into())),
        }
        if pool.sort(var) != pool.sort(replacement) {
            return Err(TermError::Sort(format!(
                "substitution maps a variable of sort {} to a term of sort {}",
                pool.sort_name(pool.sort(var)),
                pool.sort_name(pool.sort(replacement))
            )));
        }
    }
    if sigma.is_empty() {
        return Ok(t);
    }
    // Free names of all replacement terms; binders with these names must be
    // renamed before descending.
    let mut replacement_names: HashSet<Symbol> = HashSet::new();
    for &r in sigma.values() {
        replacement_names.extend(free_names(pool, r));
    }
    Ok(apply(pool, t, sigma, &replacement_names))
}

fn apply(
    pool: &mut TermPool,
    t: Term,
    sigma: &HashMap<Term, Term>,
    replacement_names: &HashSet<Symbol>,
) -> Term {
    if sigma.is_empty() {
        return t;
    }
    match pool.kind(t).clone() {
        TermKind::Var(..) => sigma.get(&t).copied().unwrap_or(t),
        TermKind::Const(_) => t,
        TermKind::App(f, args) => {
            let new_args: Vec<Term> = args
                .iter()
                .map(|&a| apply(pool, a, sigma, replacement_names))
                .collect();
            if new_args == args {
                t
            } else {
                let sort = pool.sort(t);
                pool.intern_with_sort(TermKind::App(f, new_args), sort)
            }
        }
        TermKind::Binder(kind, bindings, body) => {
            // Shadowing: drop mappings for variables rebound here.
            let mut inner: HashMap<Term, Term> = sigma
                .iter()
                .filter(|(&var, _)| match pool.kind(var) {
                    TermKind::Var(name, _) => !bindings.iter().any(|(b, _)| b == name),
                    _ => false,
                })
                .map(|(&k, &v)| (k, v))
                .collect();
            if inner.is_empty() {
                return t;
            }
            // Only replacements that can actually fire decide capture.
            let mut live_names: HashSet<Symbol> = HashSet::new();
            for &r in inner.values() {
                live_names.extend(free_names(pool, r));
            }
            let mut new_bindings = bindings.clone();
            for (name, sort) in new_bindings.iter_mut() {
                if live_names.contains(name) {
                    let fresh = pool.fresh_symbol(pool.symbol_name(*name).to_owned().as_str());
                    let old_var = pool.intern_with_sort(TermKind::Var(*name, *sort), *sort);
                    let new_var = pool.intern_with_sort(TermKind::Var(fresh, *sort), *sort);
                    inner.insert(old_var, new_var);
                    *name = fresh;
                }
            }
            let new_body = apply(pool, body, &inner, replacement_names);
            if new_body == body && new_bindings == bindings {
                t
            } else {
                let sort = match kind {
                    super::BinderKind::Choice => new_bindings[0].1,
                    _ => pool.sort_bool(),
                };
                pool.intern_with_sort(TermKind::Binder(kind, new_bindings, new_body), sort)
            }
        }
    }
}

/// True iff `t` and `u` are equal up to a consistent renaming of bound
/// variables.
pub fn alpha_equal(pool: &TermPool, t: Term, u: Term) -> bool {
    let mut left: Vec<(Symbol, super::Sort)> = Vec::new();
    let mut right: Vec<(Symbol, super::Sort)> = Vec::new();
    alpha_eq(pool, t, u, &mut left, &mut right)
}

fn alpha_eq(
    pool: &TermPool,
    t: Term,
    u: Term,
    left: &mut Vec<(Symbol, super::Sort)>,
    right: &mut Vec<(Symbol, super::Sort)>,
) -> bool {
    if t == u && left == right {
        return true;
    }
    match (pool.kind(t), pool.kind(u)) {
        (TermKind::Var(n1, s1), TermKind::Var(n2, s2)) => {
            let i1 = left.iter().rposition(|(n, _)| n == n1);
            let i2 = right.iter().rposition(|(n, _)| n == n2);
            match (i1, i2) {
                (Some(i), Some(j)) => i == j,
                (None, None) => n1 == n2 && s1 == s2,
                _ => false,
            }
        }
        (TermKind::Const(c1), TermKind::Const(c2)) => c1 == c2,
        (TermKind::App(f1, a1), TermKind::App(f2, a2)) => {
            f1 == f2
                && a1.len() == a2.len()
                && a1
                    .iter()
                    .zip(a2.iter())
                    .all(|(&x, &y)| alpha_eq(pool, x, y, left, right))
        }
        (TermKind::Binder(k1, b1, body1), TermKind::Binder(k2, b2, body2)) => {
            if k1 != k2 || b1.len() != b2.len() {
                return false;
            }
            if b1
                .iter()
                .zip(b2.iter())
                .any(|((_, s1), (_, s2))| s1 != s2)
            {
                return false;
            }
            let depth = left.len();
            left.extend(b1.iter().copied());
            right.extend(b2.iter().copied());
            let result = alpha_eq(pool, *body1, *body2, left, right);
            left.truncate(depth);
            right.truncate(depth);
            result
        }
        _ => false,
    }
}
