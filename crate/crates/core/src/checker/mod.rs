//! The proof checker.
//!
//! Checking runs in two passes. The first pass walks the command list in
//! order: it resolves premise references with the scope discipline for
//! subproofs, maintains the context stack, validates assumptions against the
//! problem, and precomputes everything that needs to create new terms
//! (substitution instances for `forall_inst` and `sko_ex`, definition
//! expansion). The second pass evaluates the remaining rule checks; these
//! only read the frozen term pool, so they run in parallel over the premise
//! DAG. The report is assembled by a single writer in proof order.

mod context;
mod linear;
mod rules;

pub use context::Frame;
pub use rules::{
    check_bind, check_cong, check_equiv_pos1, check_forall_inst, check_la_generic,
    check_refl, check_resolution, check_symm, check_trans,
};
pub(crate) use rules::trans_chain_level3;

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;

use crate::ast::{Definition, DefinitionTable, Problem, ProofCommand, RuleArg};
use crate::error::CheckError;
use crate::term::{Clause, Term, TermPool};

/// Per-rule strictness levels. Rules without an entry get the least strict
/// level; for `trans` the levels are 1 (ordered and oriented), 2 (ordered)
/// and 3 (unordered, the default).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StrictnessConfig {
    levels: BTreeMap<String, u8>,
}

impl StrictnessConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_level(mut self, rule: &str, level: u8) -> Self {
        self.set_level(rule, level);
        self
    }

    pub fn set_level(&mut self, rule: &str, level: u8) {
        self.levels.insert(rule.to_owned(), level.clamp(1, 3));
    }

    /// Absent entries default to the least strict level.
    pub fn level(&self, rule: &str) -> u8 {
        self.levels.get(rule).copied().unwrap_or(3)
    }

    pub fn trans_level(&self) -> u8 {
        self.level("trans")
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckConfig {
    pub strictness: StrictnessConfig,
    /// Mark steps with unknown rules as assumed instead of failing them;
    /// taints the verdict.
    pub skip_unknown: bool,
    /// Step that must establish the result.
    pub goal: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// Every step checked, but some steps used unknown rules and were
    /// assumed under `skip_unknown`.
    ValidWithAssumptions,
    Invalid,
    Error,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Valid => "valid",
            Verdict::ValidWithAssumptions => "valid-modulo-assumptions",
            Verdict::Invalid => "invalid",
            Verdict::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepStatus {
    Ok,
    Assumed,
    Failure(String),
}

impl StepStatus {
    pub fn is_ok(&self) -> bool {
        !matches!(self, StepStatus::Failure(_))
    }
}

#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub id: String,
    pub rule: String,
    pub status: StepStatus,
}

/// What the proof establishes, if anything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Established {
    EmptyClause(String),
    Goal(String),
    Nothing,
}

#[derive(Clone, Debug, Default)]
pub struct Statistics {
    pub rule_counts: BTreeMap<String, usize>,
    /// Steps labeled `cong` that were justified as reflexivity under the
    /// context (variable equalities without an application).
    pub cong_as_refl: usize,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub verdict: Verdict,
    /// One outcome per assume/step command, in proof order.
    pub steps: Vec<StepOutcome>,
    pub statistics: Statistics,
    pub established: Established,
}

impl CheckReport {
    pub fn is_valid(&self) -> bool {
        matches!(self.verdict, Verdict::Valid | Verdict::ValidWithAssumptions)
    }

    pub fn step_status(&self, id: &str) -> Option<&StepStatus> {
        self.steps.iter().find(|s| s.id == id).map(|s| &s.status)
    }

    pub fn failures(&self) -> impl Iterator<Item = &StepOutcome> {
        self.steps
            .iter()
            .filter(|s| matches!(s.status, StepStatus::Failure(_)))
    }
}

/// Work items deferred to the parallel pass. Everything here only reads the
/// pool.
enum Task {
    Done(StepStatus),
    Resolution { premises: Vec<Clause>, conclusion: Clause },
    Trans { premises: Vec<Clause>, conclusion: Clause, level: u8 },
    Cong { premises: Vec<Clause>, conclusion: Clause, ctx: Vec<Frame> },
    Refl { conclusion: Clause, ctx: Vec<Frame> },
    Symm { premises: Vec<Clause>, conclusion: Clause },
    Bind { assignments: Vec<crate::ast::ContextAssignment>, inner: Option<Clause>, conclusion: Clause },
    EquivPos1 { conclusion: Clause },
    LaGeneric { conclusion: Clause, args: Vec<RuleArg> },
}

struct OpenSubproof {
    target: String,
    assignments: Vec<crate::ast::ContextAssignment>,
    last_body_clause: Option<Clause>,
}

/// Checks a proof against a problem. Rule failures are reported per step;
/// only structural problems (an unknown goal id) are errors.
pub fn check_proof(
    pool: &mut TermPool,
    problem: &Problem,
    commands: &[ProofCommand],
    config: &CheckConfig,
) -> Result<CheckReport, CheckError> {
    let mut defs = problem.definitions.clone();
    let mut scopes: Vec<HashMap<String, Clause>> = vec![HashMap::new()];
    let mut ctx: Vec<Frame> = Vec::new();
    let mut open: Vec<OpenSubproof> = Vec::new();
    let mut outcomes: Vec<(String, String)> = Vec::new();
    let mut tasks: Vec<Task> = Vec::new();
    let mut statistics = Statistics::default();
    let mut empty_clause_step: Option<String> = None;
    let mut all_ids: HashSet<String> = HashSet::new();

    // Assertions in their expanded form, for validating assumptions.
    let mut expanded_assertions: HashSet<Term> = HashSet::new();
    for (_, assertion) in &problem.assertions {
        let expanded = problem
            .definitions
            .expand(pool, *assertion)
            .map_err(|e| CheckError::Internal(e.to_string()))?;
        expanded_assertions.insert(expanded);
    }

    for command in commands {
        match command {
            ProofCommand::Assume { id, term } => {
                all_ids.insert(id.clone());
                *statistics.rule_counts.entry("assume".into()).or_default() += 1;
                let status = match defs.expand(pool, *term) {
                    Ok(expanded) if expanded_assertions.contains(&expanded) => StepStatus::Ok,
                    Ok(_) => {
                        StepStatus::Failure("assumption does not match any assertion".into())
                    }
                    Err(e) => StepStatus::Failure(e.to_string()),
                };
                outcomes.push((id.clone(), "assume".into()));
                tasks.push(Task::Done(status));
                let clause = Clause(vec![*term]);
                record_clause(&mut scopes, &mut open, id, &clause, None);
            }
            ProofCommand::FunctionDefinition(def) => {
                defs.insert(
                    def.name,
                    Definition { params: def.params.clone(), body: def.body },
                );
            }
            ProofCommand::Anchor(anchor) => {
                ctx.push(Frame::from_assignments(pool, &anchor.assignments));
                scopes.push(HashMap::new());
                open.push(OpenSubproof {
                    target: anchor.target.clone(),
                    assignments: anchor.assignments.clone(),
                    last_body_clause: None,
                });
            }
            ProofCommand::Step(step) => {
                all_ids.insert(step.id.clone());
                *statistics.rule_counts.entry(step.rule.clone()).or_default() += 1;
                outcomes.push((step.id.clone(), step.rule.clone()));

                let premises = resolve_premises(&scopes, &all_ids, &step.premises);
                let closes = open.last().is_some_and(|o| o.target == step.id);

                let task = match premises {
                    Err(reason) => Task::Done(StepStatus::Failure(reason)),
                    Ok(premises) => {
                        if closes {
                            let sub = open.last().unwrap();
                            if step.rule == "bind" {
                                Task::Bind {
                                    assignments: sub.assignments.clone(),
                                    inner: sub.last_body_clause.clone(),
                                    conclusion: step.clause.clone(),
                                }
                            } else if config.skip_unknown {
                                Task::Done(StepStatus::Assumed)
                            } else {
                                Task::Done(StepStatus::Failure(format!(
                                    "unknown rule `{}`",
                                    step.rule
                                )))
                            }
                        } else {
                            build_task(pool, &defs, config, step, premises, &ctx)
                        }
                    }
                };
                tasks.push(task);

                if closes {
                    ctx.pop();
                    scopes.pop();
                    open.pop();
                }
                record_clause(&mut scopes, &mut open, &step.id, &step.clause, Some(closes));
                if step.clause.is_empty() && empty_clause_step.is_none() {
                    empty_clause_step = Some(step.id.clone());
                }
            }
        }
    }

    if let Some(goal) = &config.goal {
        if !all_ids.contains(goal) {
            return Err(CheckError::UnknownGoal(goal.clone()));
        }
    }

    // Parallel rule evaluation over the frozen pool.
    let frozen: &TermPool = pool;
    let results: Vec<(StepStatus, bool)> = tasks
        .par_iter()
        .map(|task| evaluate(frozen, task))
        .collect();

    let mut steps = Vec::with_capacity(outcomes.len());
    for ((id, rule), (status, used_refl)) in outcomes.into_iter().zip(results) {
        if used_refl {
            statistics.cong_as_refl += 1;
        }
        steps.push(StepOutcome { id, rule, status });
    }

    let established = match (&config.goal, &empty_clause_step) {
        (Some(goal), _) => Established::Goal(goal.clone()),
        (None, Some(id)) => Established::EmptyClause(id.clone()),
        (None, None) => Established::Nothing,
    };

    let any_failure = steps.iter().any(|s| matches!(s.status, StepStatus::Failure(_)));
    let any_assumed = steps.iter().any(|s| matches!(s.status, StepStatus::Assumed));
    let verdict = if !ctx.is_empty() || !open.is_empty() {
        Verdict::Error
    } else if any_failure {
        Verdict::Invalid
    } else if any_assumed {
        Verdict::ValidWithAssumptions
    } else {
        Verdict::Valid
    };

    Ok(CheckReport { verdict, steps, statistics, established })
}

fn record_clause(
    scopes: &mut [HashMap<String, Clause>],
    open: &mut [OpenSubproof],
    id: &str,
    clause: &Clause,
    step_closes: Option<bool>,
) {
    scopes
        .last_mut()
        .expect("scope stack is never empty")
        .insert(id.to_owned(), clause.clone());
    // Track the last body step of the enclosing subproof, unless this very
    // step just closed it.
    if step_closes != Some(true) {
        if let Some(sub) = open.last_mut() {
            sub.last_body_clause = Some(clause.clone());
        }
    }
}

/// Looks premises up through the scope stack. Steps inside a closed subproof
/// are not addressable from outside.
fn resolve_premises(
    scopes: &[HashMap<String, Clause>],
    all_ids: &HashSet<String>,
    premises: &[String],
) -> Result<Vec<Clause>, String> {
    premises
        .iter()
        .map(|id| {
            scopes
                .iter()
                .rev()
                .find_map(|scope| scope.get(id))
                .cloned()
                .ok_or_else(|| {
                    if all_ids.contains(id) {
                        format!("premise `{id}` refers into a closed subproof")
                    } else {
                        format!("premise `{id}` is not available")
                    }
                })
        })
        .collect()
}

fn build_task(
    pool: &mut TermPool,
    defs: &DefinitionTable,
    config: &CheckConfig,
    step: &crate::ast::Step,
    premises: Vec<Clause>,
    ctx: &[Frame],
) -> Task {
    let conclusion = step.clause.clone();
    match step.rule.as_str() {
        "resolution" | "th_resolution" => Task::Resolution { premises, conclusion },
        "trans" => Task::Trans {
            premises,
            conclusion,
            level: config.strictness.trans_level(),
        },
        "cong" => Task::Cong { premises, conclusion, ctx: ctx.to_vec() },
        "refl" => Task::Refl { conclusion, ctx: ctx.to_vec() },
        "symm" => Task::Symm { premises, conclusion },
        "equiv_pos1" => Task::EquivPos1 { conclusion },
        "sko_ex" => Task::Done(match check_sko_ex_now(pool, defs, &conclusion) {
            Ok(()) => StepStatus::Ok,
            Err(reason) => StepStatus::Failure(reason),
        }),
        "forall_inst" => {
            Task::Done(match rules::check_forall_inst(pool, &conclusion, &step.args) {
                Ok(()) => StepStatus::Ok,
                Err(reason) => StepStatus::Failure(reason),
            })
        }
        "la_generic" => Task::LaGeneric { conclusion, args: step.args.clone() },
        "bind" => Task::Done(StepStatus::Failure(
            "bind outside of a subproof".into(),
        )),
        _ => Task::Done(if config.skip_unknown {
            StepStatus::Assumed
        } else {
            StepStatus::Failure(format!("unknown rule `{}`", step.rule))
        }),
    }
}

fn check_sko_ex_now(
    pool: &mut TermPool,
    defs: &DefinitionTable,
    conclusion: &Clause,
) -> Result<(), String> {
    rules::check_sko_ex(pool, defs, conclusion)
}

/// Evaluates one deferred task; returns the status and whether a `cong`
/// label was accepted via the reflexivity check.
fn evaluate(pool: &TermPool, task: &Task) -> (StepStatus, bool) {
    let to_status = |r: Result<(), String>| match r {
        Ok(()) => StepStatus::Ok,
        Err(reason) => StepStatus::Failure(reason),
    };
    match task {
        Task::Done(status) => (status.clone(), false),
        Task::Resolution { premises, conclusion } => {
            (to_status(rules::check_resolution(pool, premises, conclusion)), false)
        }
        Task::Trans { premises, conclusion, level } => {
            (to_status(rules::check_trans(pool, premises, conclusion, *level)), false)
        }
        Task::Cong { premises, conclusion, ctx } => {
            // The corpus labels variable equalities justified by the context
            // as `cong`; accept them through the reflexivity check and note
            // it in the statistics.
            let app_sides = conclusion
                .as_unit()
                .and_then(|t| pool.as_equality(t))
                .is_some_and(|(l, r)| {
                    matches!(pool.kind(l), crate::term::TermKind::App(..))
                        && matches!(pool.kind(r), crate::term::TermKind::App(..))
                });
            if app_sides {
                (to_status(rules::check_cong(pool, premises, conclusion, ctx)), false)
            } else {
                match rules::check_refl(pool, conclusion, ctx) {
                    Ok(()) => (StepStatus::Ok, true),
                    Err(_) => (
                        to_status(rules::check_cong(pool, premises, conclusion, ctx)),
                        false,
                    ),
                }
            }
        }
        Task::Refl { conclusion, ctx } => {
            (to_status(rules::check_refl(pool, conclusion, ctx)), false)
        }
        Task::Symm { premises, conclusion } => {
            (to_status(rules::check_symm(pool, premises, conclusion)), false)
        }
        Task::Bind { assignments, inner, conclusion } => (
            to_status(rules::check_bind(pool, assignments, inner.as_ref(), conclusion)),
            false,
        ),
        Task::EquivPos1 { conclusion } => {
            (to_status(rules::check_equiv_pos1(pool, conclusion)), false)
        }
        Task::LaGeneric { conclusion, args } => {
            (to_status(rules::check_la_generic(pool, conclusion, args)), false)
        }
    }
}
