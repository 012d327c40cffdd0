//! Per-rule checkers.
//!
//! Each checker is a pure function of the resolved premises, the conclusion
//! and (where relevant) the context; `Ok(())` means the step is justified,
//! `Err(reason)` carries the failure reason recorded in the report.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_rational::BigRational;

use crate::ast::{ContextAssignment, DefinitionTable, RuleArg};
use crate::term::{
    alpha_equal, free_variables, substitute, BinderKind, Clause, Term, TermKind, TermPool,
};

use super::context::Frame;
use super::linear::check_la_generic_clause;

// ---------------------------------------------------------------------------
// resolution
// ---------------------------------------------------------------------------

/// A literal normalized to (atom, polarity); all leading negations are
/// stripped pairwise.
type Lit = (Term, bool);

fn clause_lits(pool: &TermPool, clause: &Clause) -> Vec<Lit> {
    clause
        .0
        .iter()
        .map(|&t| {
            let (positive, atom) = pool.polarity(t);
            (atom, positive)
        })
        .collect()
}

fn find_pivot(current: &[Lit], premise: &[Lit]) -> Option<Lit> {
    current
        .iter()
        .find(|&&(atom, pol)| premise.contains(&(atom, !pol)))
        .copied()
}

/// Binary resolution on `pivot`: removes every occurrence of the pivot from
/// the left clause and of its complement from the right clause.
fn resolve(current: &[Lit], premise: &[Lit], pivot: Lit) -> Vec<Lit> {
    let mut out: Vec<Lit> = current.iter().filter(|&&l| l != pivot).copied().collect();
    let complement = (pivot.0, !pivot.1);
    out.extend(premise.iter().filter(|&&l| l != complement));
    out
}

/// Maximum premise count for the exhaustive pivot search.
const MAX_RESOLUTION_WIDTH: usize = 16;

/// Checks that the conclusion is derivable from the premises by a chain of
/// binary resolutions, treating non-Boolean-structure terms as atoms.
/// Pivots are not given; a greedy pass tries premises left to right
/// (deferring premises that do not yet share a pivot with the accumulated
/// resolvent), and an exhaustive search over premise order and pivot choice
/// serves as fallback. Duplicate literals are implicitly merged.
pub fn check_resolution(
    pool: &TermPool,
    premises: &[Clause],
    conclusion: &Clause,
) -> Result<(), String> {
    if premises.is_empty() {
        return Err("resolution requires at least one premise".into());
    }
    let premise_lits: Vec<Vec<Lit>> = premises.iter().map(|c| clause_lits(pool, c)).collect();
    let mut goal: Vec<Lit> = clause_lits(pool, conclusion);
    goal.sort_unstable();
    goal.dedup();

    // Fast necessary conditions: resolution never introduces literals, and a
    // premise literal missing from the conclusion can only be eliminated by
    // resolving against its complement.
    let mut union: Vec<Lit> = Vec::new();
    for premise in &premise_lits {
        for &lit in premise {
            if !union.contains(&lit) {
                union.push(lit);
            }
        }
    }
    if goal.iter().any(|l| !union.contains(l)) {
        return Err("no resolution chain found".into());
    }
    if union
        .iter()
        .any(|&(atom, pol)| goal.binary_search(&(atom, pol)).is_err() && !union.contains(&(atom, !pol)))
    {
        return Err("no resolution chain found".into());
    }

    // Greedy pass.
    let mut current = premise_lits[0].clone();
    let mut pending: Vec<usize> = (1..premise_lits.len()).collect();
    loop {
        let mut progressed = false;
        let mut i = 0;
        while i < pending.len() {
            let idx = pending[i];
            if let Some(pivot) = find_pivot(&current, &premise_lits[idx]) {
                current = resolve(&current, &premise_lits[idx], pivot);
                pending.remove(i);
                progressed = true;
            } else {
                i += 1;
            }
        }
        if pending.is_empty() || !progressed {
            break;
        }
    }
    if pending.is_empty() {
        current.sort_unstable();
        current.dedup();
        if current == goal {
            return Ok(());
        }
    }

    // Exhaustive fallback over premise order and pivot choice. Memoization
    // only pays off for wide steps; narrow ones search faster than they
    // hash.
    if premise_lits.len() > MAX_RESOLUTION_WIDTH {
        return Err("resolution too wide for search".into());
    }
    let full: u32 = (1u32 << premise_lits.len()) - 1;
    let use_memo = premise_lits.len() > 4;
    let mut visited: HashSet<(u32, Vec<Lit>)> = HashSet::new();
    for start in 0..premise_lits.len() {
        let mut init: Vec<Lit> = premise_lits[start].clone();
        init.sort_unstable();
        init.dedup();
        if search(&premise_lits, 1u32 << start, init, full, &goal, use_memo, &mut visited) {
            return Ok(());
        }
    }
    Err("no resolution chain found".into())
}

fn search(
    premises: &[Vec<Lit>],
    used: u32,
    current: Vec<Lit>,
    full: u32,
    goal: &[Lit],
    use_memo: bool,
    visited: &mut HashSet<(u32, Vec<Lit>)>,
) -> bool {
    if used == full {
        return current == goal;
    }
    if use_memo && !visited.insert((used, current.clone())) {
        return false;
    }
    for (idx, premise) in premises.iter().enumerate() {
        if used & (1 << idx) != 0 {
            continue;
        }
        for &(atom, pol) in &current {
            if !premise.contains(&(atom, !pol)) {
                continue;
            }
            let mut next = resolve(&current, premise, (atom, pol));
            next.sort_unstable();
            next.dedup();
            if search(premises, used | (1 << idx), next, full, goal, use_memo, visited) {
                return true;
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// trans / symm
// ---------------------------------------------------------------------------

fn unit_equalities(pool: &TermPool, premises: &[Clause]) -> Result<Vec<(Term, Term)>, String> {
    premises
        .iter()
        .enumerate()
        .map(|(i, clause)| {
            clause
                .as_unit()
                .and_then(|t| pool.as_equality(t))
                .ok_or_else(|| format!("premise {} is not a unit equality", i + 1))
        })
        .collect()
}

fn conclusion_equality(pool: &TermPool, conclusion: &Clause) -> Result<(Term, Term), String> {
    conclusion
        .as_unit()
        .and_then(|t| pool.as_equality(t))
        .ok_or_else(|| "conclusion is not a unit equality".to_string())
}

/// Ordered, correctly oriented chain: premise i must be exactly
/// `(= e_i e_{i+1})` with `e_0` the conclusion's left side.
fn chain_level1(eqs: &[(Term, Term)], start: Term, end: Term) -> Result<(), String> {
    let mut current = start;
    for (i, &(l, r)) in eqs.iter().enumerate() {
        if l != current {
            return Err(format!("chain mismatch at premise {}", i + 1));
        }
        current = r;
    }
    if current != end {
        return Err(format!("chain mismatch at premise {}", eqs.len()));
    }
    Ok(())
}

/// Ordered chain where individual equalities may be used flipped. Returns
/// the per-premise orientation on success.
fn chain_level2(eqs: &[(Term, Term)], start: Term, end: Term) -> Result<Vec<bool>, String> {
    let mut current = start;
    let mut flips = Vec::with_capacity(eqs.len());
    for (i, &(l, r)) in eqs.iter().enumerate() {
        if l == current {
            current = r;
            flips.push(false);
        } else if r == current {
            current = l;
            flips.push(true);
        } else {
            return Err(format!("chain mismatch at premise {}", i + 1));
        }
    }
    if current != end {
        return Err(format!("chain mismatch at premise {}", eqs.len()));
    }
    Ok(flips)
}

/// Finds a level-1 chain that proves `(= start end)` using every premise
/// exactly once, as a list of `(premise index, used flipped)` pairs.
///
/// Tried in order: the premises as written (orientations free), the reverse
/// traversal (which covers conclusions stated against the written premise
/// order), and greedy endpoint-matching from `start` with backtracking over
/// the first premise choice only. The elaborator uses the exact same search
/// so that "checkable at level 3" and "elaborable to level 1" coincide.
pub(crate) fn trans_chain_level3(
    eqs: &[(Term, Term)],
    start: Term,
    end: Term,
) -> Option<Vec<(usize, bool)>> {
    if let Ok(flips) = chain_level2(eqs, start, end) {
        return Some(flips.into_iter().enumerate().collect());
    }
    if let Ok(flips) = chain_level2(eqs, end, start) {
        // Reverse traversal: premises in reverse order, orientations toggled.
        return Some(
            flips
                .into_iter()
                .enumerate()
                .rev()
                .map(|(i, f)| (i, !f))
                .collect(),
        );
    }
    // Greedy with one level of backtracking over the first link.
    let mut first_candidates = Vec::new();
    for (i, &(l, r)) in eqs.iter().enumerate() {
        if l == start {
            first_candidates.push((i, false));
        }
        if r == start && l != r {
            first_candidates.push((i, true));
        }
    }
    'candidates: for &(first, first_flip) in &first_candidates {
        let mut usage = vec![(first, first_flip)];
        let mut used = vec![false; eqs.len()];
        used[first] = true;
        let mut current = if first_flip { eqs[first].0 } else { eqs[first].1 };
        while usage.len() < eqs.len() {
            let mut found = None;
            for (i, &(l, r)) in eqs.iter().enumerate() {
                if used[i] {
                    continue;
                }
                if l == current {
                    found = Some((i, false));
                    break;
                }
                if r == current {
                    found = Some((i, true));
                    break;
                }
            }
            match found {
                Some((i, flip)) => {
                    used[i] = true;
                    usage.push((i, flip));
                    current = if flip { eqs[i].0 } else { eqs[i].1 };
                }
                None => continue 'candidates,
            }
        }
        if current == end {
            return Some(usage);
        }
    }
    None
}

/// Transitivity at one of the three strictness levels:
/// level 1: premises ordered and correctly oriented;
/// level 2: ordered, orientations free (conclusion may be stated in either
/// direction);
/// level 3: any permutation and orientation.
/// Acceptance is monotone in the level.
pub fn check_trans(
    pool: &TermPool,
    premises: &[Clause],
    conclusion: &Clause,
    level: u8,
) -> Result<(), String> {
    let (start, end) = conclusion_equality(pool, conclusion)?;
    let eqs = unit_equalities(pool, premises)?;
    if eqs.is_empty() {
        return Err("trans requires at least one premise".into());
    }
    let l1 = chain_level1(&eqs, start, end);
    if level == 1 {
        return l1;
    }
    if l1.is_ok() {
        return Ok(());
    }
    let l2 = chain_level2(&eqs, start, end)
        .map(|_| ())
        .or_else(|e| chain_level2(&eqs, end, start).map(|_| ()).map_err(|_| e));
    if level == 2 {
        return l2;
    }
    if l2.is_ok() {
        return Ok(());
    }
    match trans_chain_level3(&eqs, start, end) {
        Some(_) => Ok(()),
        None => l2,
    }
}

/// `symm` concludes `(= b a)` from a single premise `(= a b)`.
pub fn check_symm(pool: &TermPool, premises: &[Clause], conclusion: &Clause) -> Result<(), String> {
    if premises.len() != 1 {
        return Err("symm requires exactly one premise".into());
    }
    let (a, b) = unit_equalities(pool, premises)?[0];
    let (c, d) = conclusion_equality(pool, conclusion)?;
    if c == b && d == a {
        Ok(())
    } else {
        Err("conclusion is not the flipped premise equality".into())
    }
}

// ---------------------------------------------------------------------------
// cong / refl
// ---------------------------------------------------------------------------

/// Congruence: both sides apply the same symbol, and every argument pair is
/// justified syntactically, by a premise equality (either orientation) or by
/// a context mapping.
pub fn check_cong(
    pool: &TermPool,
    premises: &[Clause],
    conclusion: &Clause,
    ctx: &[Frame],
) -> Result<(), String> {
    let (lhs, rhs) = conclusion_equality(pool, conclusion)?;
    let (f, fargs) = match pool.kind(lhs) {
        TermKind::App(f, args) => (*f, args.clone()),
        _ => return Err("left side is not an application".into()),
    };
    let (g, gargs) = match pool.kind(rhs) {
        TermKind::App(g, args) => (*g, args.clone()),
        _ => return Err("right side is not an application".into()),
    };
    if f != g {
        return Err("different function symbols".into());
    }
    if fargs.len() != gargs.len() {
        return Err("different argument counts".into());
    }
    let eqs = unit_equalities(pool, premises)?;
    for (i, (&a, &b)) in fargs.iter().zip(gargs.iter()).enumerate() {
        let justified = a == b
            || eqs.iter().any(|&(x, y)| (x == a && y == b) || (x == b && y == a))
            || ctx_maps(ctx, a, b);
        if !justified {
            return Err(format!("argument {} unjustified", i + 1));
        }
    }
    Ok(())
}

fn ctx_maps(ctx: &[Frame], a: Term, b: Term) -> bool {
    ctx.iter()
        .rev()
        .any(|frame| frame.mappings.iter().any(|&(l, r)| l == a && r == b))
}

/// Reflexivity under context: the sides are syntactically equal, or one is a
/// variable mapped to the other by the context.
pub fn check_refl(pool: &TermPool, conclusion: &Clause, ctx: &[Frame]) -> Result<(), String> {
    let (lhs, rhs) = conclusion_equality(pool, conclusion)?;
    if lhs == rhs || ctx_maps(ctx, lhs, rhs) || ctx_maps(ctx, rhs, lhs) {
        Ok(())
    } else {
        Err("not reflexive under context".into())
    }
}

// ---------------------------------------------------------------------------
// bind
// ---------------------------------------------------------------------------

/// Concludes `(= (Q xs. phi) (Q ys. psi))` from a subproof deriving
/// `(= phi psi)` under a context mapping xs to ys pointwise. The ys must be
/// fresh with respect to the original term.
pub fn check_bind(
    pool: &TermPool,
    assignments: &[ContextAssignment],
    subproof_conclusion: Option<&Clause>,
    conclusion: &Clause,
) -> Result<(), String> {
    let (lhs, rhs) = conclusion_equality(pool, conclusion)?;
    let (q1, bs1, phi) = match pool.kind(lhs) {
        TermKind::Binder(k, bs, body) if *k != BinderKind::Choice => (*k, bs.clone(), *body),
        _ => return Err("quantifier mismatch".into()),
    };
    let (q2, bs2, psi) = match pool.kind(rhs) {
        TermKind::Binder(k, bs, body) if *k != BinderKind::Choice => (*k, bs.clone(), *body),
        _ => return Err("quantifier mismatch".into()),
    };
    if q1 != q2 {
        return Err("quantifier mismatch".into());
    }
    let pairs: Vec<(Term, Term)> = assignments
        .iter()
        .filter_map(|a| match a {
            ContextAssignment::Assign(var, value) => Some((*var, *value)),
            ContextAssignment::Fixed(..) => None,
        })
        .collect();
    if pairs.len() != bs1.len() || bs1.len() != bs2.len() {
        return Err("anchor assignments do not match the quantifier bindings".into());
    }
    for (i, &(var, value)) in pairs.iter().enumerate() {
        let x = match pool.kind(var) {
            TermKind::Var(name, sort) => (*name, *sort),
            _ => return Err("anchor assignment maps a non-variable".into()),
        };
        let y = match pool.kind(value) {
            TermKind::Var(name, sort) => (*name, *sort),
            _ => return Err("anchor assignment maps to a non-variable".into()),
        };
        if x != bs1[i] || y != bs2[i] {
            return Err("anchor does not map the bound variables pointwise".into());
        }
    }
    // The new variables must not capture anything from the original term.
    let original_free = free_variables(pool, lhs);
    for &(_, value) in &pairs {
        if let TermKind::Var(name, sort) = pool.kind(value) {
            if original_free.contains(&(*name, *sort)) {
                return Err(format!(
                    "capture: `{}` is free in the original term",
                    pool.symbol_name(*name)
                ));
            }
        }
    }
    let inner = subproof_conclusion.ok_or("empty subproof")?;
    let (a, b) = conclusion_equality(pool, inner).map_err(|_| {
        "subproof conclusion mismatch".to_string()
    })?;
    if a == phi && b == psi {
        Ok(())
    } else {
        Err("subproof conclusion mismatch".into())
    }
}

// ---------------------------------------------------------------------------
// equiv_pos1
// ---------------------------------------------------------------------------

/// The tautology `(cl (not (= A B)) (not A) B)`.
pub fn check_equiv_pos1(pool: &TermPool, conclusion: &Clause) -> Result<(), String> {
    let [l1, l2, l3] = conclusion.0.as_slice() else {
        return Err("shape mismatch".into());
    };
    let Some(eq) = pool.as_negation(*l1) else {
        return Err("shape mismatch".into());
    };
    let Some((a, b)) = pool.as_equality(eq) else {
        return Err("shape mismatch".into());
    };
    let Some(not_a) = pool.as_negation(*l2) else {
        return Err("shape mismatch".into());
    };
    if not_a == a && *l3 == b {
        Ok(())
    } else {
        Err("shape mismatch".into())
    }
}

// ---------------------------------------------------------------------------
// sko_ex
// ---------------------------------------------------------------------------

/// Skolemization of the outermost existential variable:
/// `(= (exists xs. phi) phi')` where `phi'` replaces the first variable by a
/// choice term. Defined constants are expanded on both sides, and the
/// comparison is up to alpha-equivalence.
pub fn check_sko_ex(
    pool: &mut TermPool,
    defs: &DefinitionTable,
    conclusion: &Clause,
) -> Result<(), String> {
    let (lhs_raw, rhs_raw) = conclusion_equality(pool, conclusion)?;
    let lhs = defs.expand(pool, lhs_raw).map_err(|e| e.to_string())?;
    let rhs = defs.expand(pool, rhs_raw).map_err(|e| e.to_string())?;
    let (bindings, body) = match pool.kind(lhs) {
        TermKind::Binder(BinderKind::Exists, bs, body) => (bs.clone(), *body),
        _ => return Err("not a skolemization instance".into()),
    };
    let (x_name, x_sort) = bindings[0];
    let inner = if bindings.len() == 1 {
        body
    } else {
        let rest = bindings[1..].to_vec();
        pool.binder(BinderKind::Exists, rest, body)
            .map_err(|e| e.to_string())?
    };
    let witness = pool
        .binder(BinderKind::Choice, vec![(x_name, x_sort)], inner)
        .map_err(|e| e.to_string())?;
    let var = pool.intern_with_sort(TermKind::Var(x_name, x_sort), x_sort);
    let mut sigma = HashMap::new();
    sigma.insert(var, witness);
    let expected = substitute(pool, inner, &sigma).map_err(|e| e.to_string())?;
    if alpha_equal(pool, rhs, expected) {
        Ok(())
    } else {
        Err("not a skolemization instance".into())
    }
}

// ---------------------------------------------------------------------------
// forall_inst
// ---------------------------------------------------------------------------

/// Quantifier instantiation: the conclusion is the unit clause
/// `(or (not (forall xs. phi)) phi[xs -> ts])` with one assignment argument
/// per bound variable.
pub fn check_forall_inst(
    pool: &mut TermPool,
    conclusion: &Clause,
    args: &[RuleArg],
) -> Result<(), String> {
    let lit = conclusion
        .as_unit()
        .ok_or("conclusion is not a unit clause")?;
    let or_sym = pool.builtins().or;
    let (neg, inst) = match pool.kind(lit) {
        TermKind::App(f, parts) if *f == or_sym && parts.len() == 2 => (parts[0], parts[1]),
        _ => return Err("conclusion is not (or (not (forall ...)) ...)".into()),
    };
    let quantified = pool
        .as_negation(neg)
        .ok_or("first disjunct is not a negated quantifier")?;
    let (bindings, body) = match pool.kind(quantified) {
        TermKind::Binder(BinderKind::Forall, bs, body) => (bs.clone(), *body),
        _ => return Err("first disjunct is not a negated forall".into()),
    };
    let mut values: HashMap<crate::term::Symbol, Term> = HashMap::new();
    for arg in args {
        match arg {
            RuleArg::Assign(name, value) => {
                if values.insert(*name, *value).is_some() {
                    return Err(format!(
                        "duplicate instantiation for variable {}",
                        pool.symbol_name(*name)
                    ));
                }
            }
            _ => return Err("forall_inst arguments must be assignments".into()),
        }
    }
    let mut sigma = HashMap::new();
    for &(name, sort) in &bindings {
        let value = values.remove(&name).ok_or_else(|| {
            format!("missing instantiation for variable {}", pool.symbol_name(name))
        })?;
        if pool.sort(value) != sort {
            return Err(format!(
                "instantiation for {} has sort {}, expected {}",
                pool.symbol_name(name),
                pool.sort_name(pool.sort(value)),
                pool.sort_name(sort)
            ));
        }
        let var = pool.intern_with_sort(TermKind::Var(name, sort), sort);
        sigma.insert(var, value);
    }
    if let Some(extra) = values.keys().next() {
        return Err(format!(
            "argument `{}` names no bound variable",
            pool.symbol_name(*extra)
        ));
    }
    let expected = substitute(pool, body, &sigma).map_err(|e| e.to_string())?;
    if alpha_equal(pool, inst, expected) {
        Ok(())
    } else {
        Err("instance mismatch".into())
    }
}

// ---------------------------------------------------------------------------
// la_generic
// ---------------------------------------------------------------------------

/// Extracts the rational coefficients and delegates to the Farkas check.
pub fn check_la_generic(
    pool: &TermPool,
    conclusion: &Clause,
    args: &[RuleArg],
) -> Result<(), String> {
    let coeffs: Vec<BigRational> = args
        .iter()
        .map(|arg| match arg {
            RuleArg::Rational(r) => Ok(r.clone()),
            _ => Err("la_generic arguments must be rational coefficients".to_string()),
        })
        .collect::<Result<_, _>>()?;
    check_la_generic_clause(pool, conclusion, &coeffs)
}
