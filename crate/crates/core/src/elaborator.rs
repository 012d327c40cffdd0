//! Proof transformations: rewriting lenient `trans` steps into strict ones,
//! and pruning commands unreachable from the conclusion.

use std::collections::{HashMap, HashSet};

use crate::ast::{ContextAssignment, ProofCommand, RuleArg, Step};
use crate::checker::{trans_chain_level3, StrictnessConfig};
use crate::error::PruneError;
use crate::term::{Clause, Term, TermKind, TermPool};

#[derive(Clone, Debug)]
pub struct ElaborationResult {
    pub commands: Vec<ProofCommand>,
    /// Newly inserted steps (symmetry steps).
    pub inserted: usize,
    /// Steps whose premise list was rewritten.
    pub rewritten: usize,
    /// Ids of steps that could not be elaborated.
    pub unelaborable: Vec<String>,
}

/// Rewrites one `trans` step into a level-1 chain: premises are reordered
/// and, for every premise used in flipped orientation, a fresh `symm` step
/// concluding the flipped equality is inserted before the rewritten step.
/// Fresh ids are `<orig>.sN` with N counting from 1.
pub fn elaborate_trans(
    pool: &mut TermPool,
    step: &Step,
    premise_clauses: &[Clause],
    known_ids: &mut HashSet<String>,
) -> Result<Vec<ProofCommand>, String> {
    let (start, end) = step
        .clause
        .as_unit()
        .and_then(|t| pool.as_equality(t))
        .ok_or("conclusion is not a unit equality")?;
    let eqs: Vec<(Term, Term)> = premise_clauses
        .iter()
        .enumerate()
        .map(|(i, clause)| {
            clause
                .as_unit()
                .and_then(|t| pool.as_equality(t))
                .ok_or_else(|| format!("premise {} is not a unit equality", i + 1))
        })
        .collect::<Result<_, _>>()?;
    if eqs.is_empty() {
        return Err("trans requires at least one premise".into());
    }

    // Fixpoint: an already strict chain is returned unchanged.
    let already_strict = {
        let mut current = start;
        eqs.iter().all(|&(l, r)| {
            if l == current {
                current = r;
                true
            } else {
                false
            }
        }) && current == end
    };
    if already_strict {
        return Ok(vec![ProofCommand::Step(step.clone())]);
    }

    let usage = trans_chain_level3(&eqs, start, end).ok_or("no transitivity chain found")?;

    let mut commands = Vec::new();
    let mut new_premises = Vec::with_capacity(usage.len());
    let mut suffix = 0usize;
    for &(idx, flipped) in &usage {
        if !flipped {
            new_premises.push(step.premises[idx].clone());
            continue;
        }
        let id = loop {
            suffix += 1;
            let candidate = format!("{}.s{}", step.id, suffix);
            if known_ids.insert(candidate.clone()) {
                break candidate;
            }
        };
        let (a, b) = eqs[idx];
        let flipped_eq = pool.eq_term(b, a).map_err(|e| e.to_string())?;
        commands.push(ProofCommand::Step(Step {
            id: id.clone(),
            clause: Clause(vec![flipped_eq]),
            rule: "symm".into(),
            premises: vec![step.premises[idx].clone()],
            args: vec![],
        }));
        new_premises.push(id);
    }
    commands.push(ProofCommand::Step(Step {
        id: step.id.clone(),
        clause: step.clause.clone(),
        rule: step.rule.clone(),
        premises: new_premises,
        args: step.args.clone(),
    }));
    Ok(commands)
}

/// Applies the per-rule elaborators (currently `trans`) to every step below
/// the target strictness. Steps that cannot be elaborated are collected
/// instead of aborting.
pub fn elaborate_proof(
    pool: &mut TermPool,
    commands: &[ProofCommand],
    target: &StrictnessConfig,
) -> ElaborationResult {
    let trans_level = target.trans_level();
    let mut result = ElaborationResult {
        commands: Vec::with_capacity(commands.len()),
        inserted: 0,
        rewritten: 0,
        unelaborable: Vec::new(),
    };

    let mut known_ids: HashSet<String> = commands
        .iter()
        .filter_map(|c| c.id().map(str::to_owned))
        .collect();
    let mut scopes: Vec<HashMap<String, Clause>> = vec![HashMap::new()];
    let mut open_targets: Vec<String> = Vec::new();

    for command in commands {
        match command {
            ProofCommand::Assume { id, term } => {
                scopes.last_mut().unwrap().insert(id.clone(), Clause(vec![*term]));
                result.commands.push(command.clone());
            }
            ProofCommand::FunctionDefinition(_) => result.commands.push(command.clone()),
            ProofCommand::Anchor(anchor) => {
                scopes.push(HashMap::new());
                open_targets.push(anchor.target.clone());
                result.commands.push(command.clone());
            }
            ProofCommand::Step(step) => {
                let closes = open_targets.last().is_some_and(|t| *t == step.id);
                let premises: Option<Vec<Clause>> = step
                    .premises
                    .iter()
                    .map(|id| scopes.iter().rev().find_map(|s| s.get(id)).cloned())
                    .collect();
                let needs_work = step.rule == "trans" && trans_level < 3;
                if needs_work {
                    match premises.as_deref() {
                        Some(clauses) => {
                            let strict_already = crate::checker::check_trans(
                                pool,
                                clauses,
                                &step.clause,
                                trans_level,
                            )
                            .is_ok();
                            if strict_already {
                                result.commands.push(command.clone());
                            } else {
                                match elaborate_trans(pool, step, clauses, &mut known_ids) {
                                    Ok(new_commands) => {
                                        result.inserted += new_commands.len() - 1;
                                        result.rewritten += 1;
                                        for c in &new_commands[..new_commands.len() - 1] {
                                            if let ProofCommand::Step(s) = c {
                                                scopes
                                                    .last_mut()
                                                    .unwrap()
                                                    .insert(s.id.clone(), s.clause.clone());
                                            }
                                        }
                                        result.commands.extend(new_commands);
                                    }
                                    Err(_) => {
                                        result.unelaborable.push(step.id.clone());
                                        result.commands.push(command.clone());
                                    }
                                }
                            }
                        }
                        None => {
                            result.unelaborable.push(step.id.clone());
                            result.commands.push(command.clone());
                        }
                    }
                } else {
                    result.commands.push(command.clone());
                }
                if closes {
                    scopes.pop();
                    open_targets.pop();
                }
                scopes.last_mut().unwrap().insert(step.id.clone(), step.clause.clone());
            }
        }
    }
    result
}

/// Returns the subsequence of commands reachable from the goal through
/// premise references, subproof membership, and function definitions whose
/// symbols occur in retained terms. When no goal is given, the first step
/// concluding the empty clause is used.
pub fn prune(
    pool: &TermPool,
    commands: &[ProofCommand],
    goal: Option<&str>,
) -> Result<Vec<ProofCommand>, PruneError> {
    let mut id_to_index: HashMap<&str, usize> = HashMap::new();
    for (i, c) in commands.iter().enumerate() {
        if let Some(id) = c.id() {
            id_to_index.insert(id, i);
        }
    }

    // Subproof structure: for each anchor, its target step index and body
    // range; for each command, its enclosing anchors.
    let mut anchor_of_target: HashMap<usize, usize> = HashMap::new();
    let mut body_of_anchor: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut enclosing: Vec<Vec<usize>> = vec![Vec::new(); commands.len()];
    let mut stack: Vec<(usize, &str)> = Vec::new();
    for (i, command) in commands.iter().enumerate() {
        enclosing[i] = stack.iter().map(|&(a, _)| a).collect();
        match command {
            ProofCommand::Anchor(anchor) => {
                stack.push((i, &anchor.target));
            }
            ProofCommand::Step(step) => {
                if stack.last().is_some_and(|&(_, t)| t == step.id) {
                    let (anchor_index, _) = stack.pop().unwrap();
                    anchor_of_target.insert(i, anchor_index);
                    body_of_anchor.insert(anchor_index, (anchor_index + 1, i));
                }
            }
            _ => {}
        }
    }

    let goal_index = match goal {
        Some(id) => *id_to_index
            .get(id)
            .ok_or_else(|| PruneError::UnknownGoal(id.to_owned()))?,
        None => commands
            .iter()
            .position(|c| matches!(c, ProofCommand::Step(s) if s.clause.is_empty()))
            .ok_or(PruneError::NoGoal)?,
    };

    let mut retained: HashSet<usize> = HashSet::new();
    let mut worklist = vec![goal_index];
    while let Some(i) = worklist.pop() {
        if !retained.insert(i) {
            continue;
        }
        if let ProofCommand::Step(step) = &commands[i] {
            for premise in &step.premises {
                if let Some(&j) = id_to_index.get(premise.as_str()) {
                    worklist.push(j);
                }
            }
        }
        // Subproofs are kept whole: retaining the concluding step (or any
        // body member) pulls in the anchor and the entire body.
        let pull_subproof = |anchor_index: usize, worklist: &mut Vec<usize>| {
            worklist.push(anchor_index);
            if let Some(&(from, to)) = body_of_anchor.get(&anchor_index) {
                worklist.extend(from..=to);
            }
        };
        if let Some(&a) = anchor_of_target.get(&i) {
            pull_subproof(a, &mut worklist);
        }
        for &a in &enclosing[i] {
            pull_subproof(a, &mut worklist);
        }
    }

    // Function definitions whose symbols occur in retained terms, followed
    // transitively through definition bodies.
    loop {
        let mut used: HashSet<crate::term::Symbol> = HashSet::new();
        for &i in &retained {
            collect_command_symbols(pool, &commands[i], &mut used);
        }
        let mut changed = false;
        for (i, command) in commands.iter().enumerate() {
            if retained.contains(&i) {
                continue;
            }
            if let ProofCommand::FunctionDefinition(def) = command {
                if used.contains(&def.name) {
                    retained.insert(i);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut indices: Vec<usize> = retained.into_iter().collect();
    indices.sort_unstable();
    Ok(indices.into_iter().map(|i| commands[i].clone()).collect())
}

fn collect_command_symbols(
    pool: &TermPool,
    command: &ProofCommand,
    out: &mut HashSet<crate::term::Symbol>,
) {
    let mut collect_term = |t: Term| collect_symbols(pool, t, out);
    match command {
        ProofCommand::Assume { term, .. } => collect_term(*term),
        ProofCommand::Step(step) => {
            for &lit in &step.clause.0 {
                collect_symbols(pool, lit, out);
            }
            for arg in &step.args {
                match arg {
                    RuleArg::Term(t) => collect_symbols(pool, *t, out),
                    RuleArg::Assign(_, t) => collect_symbols(pool, *t, out),
                    RuleArg::Rational(_) => {}
                }
            }
        }
        ProofCommand::Anchor(anchor) => {
            for a in &anchor.assignments {
                if let ContextAssignment::Assign(var, value) = a {
                    collect_symbols(pool, *var, out);
                    collect_symbols(pool, *value, out);
                }
            }
        }
        ProofCommand::FunctionDefinition(def) => collect_symbols(pool, def.body, out),
    }
}

fn collect_symbols(pool: &TermPool, t: Term, out: &mut HashSet<crate::term::Symbol>) {
    match pool.kind(t) {
        TermKind::Var(name, _) => {
            out.insert(*name);
        }
        TermKind::Const(_) => {}
        TermKind::App(f, args) => {
            out.insert(*f);
            for &a in args.clone().iter() {
                collect_symbols(pool, a, out);
            }
        }
        TermKind::Binder(_, _, body) => collect_symbols(pool, *body, out),
    }
}
