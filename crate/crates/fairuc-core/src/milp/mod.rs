//! Solver-agnostic linear models with integrality marks, plus a bundled
//! reference solver (bounded-variable revised simplex and branch-and-bound).
//!
//! A [`MilpModel`] is a plain list of variables, sparse constraint rows,
//! and a sparse objective. The bundled solver is deterministic: identical
//! inputs yield identical solutions, with ties broken by lowest variable
//! id. A [`MilpBackend`] trait is the seam for delegating solves to an
//! external engine on instances too large for the bundled solver; nothing
//! in this crate depends on one existing.

mod branch;
mod simplex;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use core::fmt;

/// Index of a variable within its model.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VarId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VarKind {
    Continuous,
    Binary,
}

#[derive(Clone, Debug)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub kind: VarKind,
}

/// Constraint sense: row activity `<=`, `==`, or `>=` the right-hand side.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sense::Le => write!(f, "<="),
            Sense::Eq => write!(f, "="),
            Sense::Ge => write!(f, ">="),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub name: String,
    /// Sparse row; term variable ids are unique after insertion.
    pub terms: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
pub struct MilpModel {
    pub name: String,
    pub direction: Direction,
    vars: Vec<Variable>,
    cons: Vec<Constraint>,
    obj: Vec<f64>,
}

impl MilpModel {
    pub fn new(name: &str, direction: Direction) -> Self {
        MilpModel {
            name: String::from(name),
            direction,
            vars: Vec::new(),
            cons: Vec::new(),
            obj: Vec::new(),
        }
    }

    pub fn add_var(&mut self, name: String, kind: VarKind, lower: f64, upper: f64) -> VarId {
        let id = VarId(self.vars.len());
        self.vars.push(Variable {
            name,
            lower,
            upper,
            kind,
        });
        self.obj.push(0.0);
        id
    }

    /// Binary variable with the default [0, 1] box.
    pub fn add_binary(&mut self, name: String) -> VarId {
        self.add_var(name, VarKind::Binary, 0.0, 1.0)
    }

    /// Adds a constraint row. Duplicate variable mentions are merged and
    /// exact-zero coefficients dropped.
    pub fn add_constraint(
        &mut self,
        name: String,
        terms: &[(VarId, f64)],
        sense: Sense,
        rhs: f64,
    ) -> usize {
        let mut merged: Vec<(VarId, f64)> = Vec::with_capacity(terms.len());
        for &(v, c) in terms {
            if let Some(slot) = merged.iter_mut().find(|(w, _)| *w == v) {
                slot.1 += c;
            } else {
                merged.push((v, c));
            }
        }
        merged.retain(|&(_, c)| c != 0.0);
        merged.sort_by_key(|&(v, _)| v);
        let id = self.cons.len();
        self.cons.push(Constraint {
            name,
            terms: merged,
            sense,
            rhs,
        });
        id
    }

    /// Adds `coef` to the objective coefficient of `var`.
    pub fn add_obj(&mut self, var: VarId, coef: f64) {
        self.obj[var.0] += coef;
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.cons.len()
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.cons
    }

    pub fn objective(&self) -> &[f64] {
        &self.obj
    }

    pub fn objective_value(&self, assignment: &[f64]) -> f64 {
        self.obj
            .iter()
            .zip(assignment.iter())
            .map(|(c, x)| c * x)
            .sum()
    }

    /// Structural invariants: declared ids only, finite data, binaries
    /// boxed within [0, 1]. A violation is a caller bug, not a solver
    /// status.
    pub fn validate(&self) -> Result<(), MilpError> {
        for (j, v) in self.vars.iter().enumerate() {
            if v.lower.is_nan() || v.upper.is_nan() {
                return Err(MilpError::Malformed(format!("variable {} has NaN bound", v.name)));
            }
            if v.lower > v.upper {
                return Err(MilpError::Malformed(format!(
                    "variable {} has crossed bounds [{}, {}]",
                    v.name, v.lower, v.upper
                )));
            }
            if v.kind == VarKind::Binary
                && !(v.lower >= 0.0 && v.upper <= 1.0 && v.lower.is_finite() && v.upper.is_finite())
            {
                return Err(MilpError::Malformed(format!(
                    "binary variable {} must have finite bounds within [0, 1], got [{}, {}]",
                    v.name, v.lower, v.upper
                )));
            }
            if !self.obj[j].is_finite() {
                return Err(MilpError::Malformed(format!(
                    "objective coefficient of {} is not finite",
                    v.name
                )));
            }
        }
        for c in &self.cons {
            if !c.rhs.is_finite() {
                return Err(MilpError::Malformed(format!("constraint {} has non-finite rhs", c.name)));
            }
            for &(v, coef) in &c.terms {
                if v.0 >= self.vars.len() {
                    return Err(MilpError::Malformed(format!(
                        "constraint {} references undeclared variable {}",
                        c.name, v.0
                    )));
                }
                if !coef.is_finite() {
                    return Err(MilpError::Malformed(format!(
                        "constraint {} has non-finite coefficient on {}",
                        c.name,
                        self.vars[v.0].name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Every bound, integrality, and row violation of `assignment`
    /// exceeding `tol`. Empty means feasible. This is deliberately a dumb
    /// recomputation so it can serve as an independent check on solver
    /// output.
    pub fn check_feasible(
        &self,
        assignment: &[f64],
        tol: f64,
    ) -> Result<Vec<Violation>, MilpError> {
        if assignment.len() != self.vars.len() {
            return Err(MilpError::AssignmentSize {
                expected: self.vars.len(),
                got: assignment.len(),
            });
        }
        let mut out = Vec::new();
        for (j, v) in self.vars.iter().enumerate() {
            let x = assignment[j];
            let below = v.lower - x;
            let above = x - v.upper;
            let amount = below.max(above);
            if amount > tol {
                out.push(Violation::Bound {
                    var: VarId(j),
                    value: x,
                    lower: v.lower,
                    upper: v.upper,
                    amount,
                });
            }
            if v.kind == VarKind::Binary {
                let frac = (x - crate::math::round(x)).abs();
                if frac > tol {
                    out.push(Violation::Integrality { var: VarId(j), value: x });
                }
            }
        }
        for (i, c) in self.cons.iter().enumerate() {
            let activity: f64 = c.terms.iter().map(|&(v, coef)| coef * assignment[v.0]).sum();
            let amount = match c.sense {
                Sense::Le => activity - c.rhs,
                Sense::Ge => c.rhs - activity,
                Sense::Eq => (activity - c.rhs).abs(),
            };
            if amount > tol {
                out.push(Violation::Row {
                    con: i,
                    activity,
                    sense: c.sense,
                    rhs: c.rhs,
                    amount,
                });
            }
        }
        Ok(out)
    }

    /// Plain-text dump, one constraint per line, names preserved. Intended
    /// for cross-checking a model against an external solver.
    pub fn to_lp_format(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("\\ {}\n", self.name));
        s.push_str(match self.direction {
            Direction::Minimize => "Minimize\n",
            Direction::Maximize => "Maximize\n",
        });
        s.push_str(" obj:");
        let mut any = false;
        for (j, &c) in self.obj.iter().enumerate() {
            if c != 0.0 {
                s.push_str(&format!(" {:+} {}", c, self.vars[j].name));
                any = true;
            }
        }
        if !any {
            s.push_str(" 0");
        }
        s.push_str("\nSubject To\n");
        for c in &self.cons {
            s.push_str(&format!(" {}:", c.name));
            if c.terms.is_empty() {
                s.push_str(" 0");
            }
            for &(v, coef) in &c.terms {
                s.push_str(&format!(" {:+} {}", coef, self.vars[v.0].name));
            }
            s.push_str(&format!(" {} {}\n", c.sense, c.rhs));
        }
        s.push_str("Bounds\n");
        for v in &self.vars {
            s.push_str(&format!(" {} <= {} <= {}\n", v.lower, v.name, v.upper));
        }
        let binaries: Vec<&str> = self
            .vars
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .map(|v| v.name.as_str())
            .collect();
        if !binaries.is_empty() {
            s.push_str("Binaries\n");
            for name in binaries {
                s.push_str(&format!(" {}\n", name));
            }
        }
        s.push_str("End\n");
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Bound {
        var: VarId,
        value: f64,
        lower: f64,
        upper: f64,
        amount: f64,
    },
    Integrality {
        var: VarId,
        value: f64,
    },
    Row {
        con: usize,
        activity: f64,
        sense: Sense,
        rhs: f64,
        amount: f64,
    },
}

/// Terminal state of a solve. `Infeasible` and `Unbounded` are outcomes,
/// not errors; `IterationLimit` carries the best incumbent found.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub struct MilpSolution {
    pub status: SolveStatus,
    /// Objective in the model's own direction. Meaningful for `Optimal`
    /// and (as the incumbent value) for `IterationLimit` with a solution.
    pub objective: f64,
    pub values: Vec<f64>,
    /// Relative optimality gap achieved; 0 for exhausted searches.
    pub gap: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BackendKind {
    Bundled,
    External,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Relative MIP gap at which branch-and-bound may stop.
    pub mip_gap: f64,
    /// Feasibility tolerance used when vetting solutions.
    pub feas_tol: f64,
    /// Integrality tolerance for accepting incumbents.
    pub int_tol: f64,
    /// Cap on explored branch-and-bound nodes.
    pub node_limit: Option<usize>,
    /// Wall-clock cap in milliseconds. The bundled solver has no clock;
    /// this is honored through an abort hook installed by the caller (see
    /// [`BundledSolver::with_abort`]) or by an external backend.
    pub time_limit_ms: Option<u64>,
    pub backend: BackendKind,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mip_gap: 1e-4,
            feas_tol: 1e-6,
            int_tol: 1e-6,
            node_limit: None,
            time_limit_ms: None,
            backend: BackendKind::Bundled,
        }
    }
}

impl SolverConfig {
    /// Tightened configuration under which the bundled solver prunes only
    /// provably dominated nodes, so returned optima are exact up to LP
    /// arithmetic.
    pub fn exact() -> Self {
        SolverConfig {
            mip_gap: 1e-9,
            ..SolverConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), MilpError> {
        if !(self.mip_gap > 0.0) || !(self.feas_tol > 0.0) || !(self.int_tol > 0.0) {
            return Err(MilpError::Malformed(String::from(
                "solver tolerances must be positive",
            )));
        }
        Ok(())
    }
}

#[derive(Debug)]
pub enum MilpError {
    /// The model breaks a structural invariant; solving it would be
    /// meaningless.
    Malformed(String),
    AssignmentSize { expected: usize, got: usize },
    /// The simplex kernel lost the basis numerically and could not
    /// recover. Not expected on well-scaled desk-size models.
    Numerical(String),
    /// `BackendKind::External` was selected but no external backend is
    /// registered with the caller.
    NoExternalBackend,
}

impl fmt::Display for MilpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MilpError::Malformed(msg) => write!(f, "malformed model: {}", msg),
            MilpError::AssignmentSize { expected, got } => {
                write!(f, "assignment covers {} variables, model has {}", got, expected)
            }
            MilpError::Numerical(msg) => write!(f, "numerical failure: {}", msg),
            MilpError::NoExternalBackend => write!(f, "no external backend registered"),
        }
    }
}

impl core::error::Error for MilpError {}

/// The seam for plugging in an external MILP engine. The bundled solver
/// implements it; callers that link a commercial solver implement it on
/// their side and pass it wherever a backend is accepted.
pub trait MilpBackend {
    fn solve(&self, model: &MilpModel, config: &SolverConfig) -> Result<MilpSolution, MilpError>;
}

/// The bundled deterministic solver: bounded-variable revised simplex
/// with a Bland's-rule fallback, and branch-and-bound with
/// most-fractional branching and best-bound node selection.
#[derive(Default)]
pub struct BundledSolver {
    abort: Option<Box<dyn Fn() -> bool + Send + Sync>>,
}

impl BundledSolver {
    pub fn new() -> Self {
        BundledSolver { abort: None }
    }

    /// Installs a hook polled between nodes; returning `true` stops the
    /// search with `IterationLimit` and the best incumbent.
    pub fn with_abort(hook: Box<dyn Fn() -> bool + Send + Sync>) -> Self {
        BundledSolver { abort: Some(hook) }
    }
}

impl MilpBackend for BundledSolver {
    fn solve(&self, model: &MilpModel, config: &SolverConfig) -> Result<MilpSolution, MilpError> {
        model.validate()?;
        config.validate()?;
        branch::solve_milp(model, config, self.abort.as_deref())
    }
}

/// Solves with the configured backend. `BackendKind::External` fails here
/// by design: external engines are linked by callers and passed through
/// [`MilpBackend`] directly.
pub fn solve(model: &MilpModel, config: &SolverConfig) -> Result<MilpSolution, MilpError> {
    match config.backend {
        BackendKind::Bundled => BundledSolver::new().solve(model, config),
        BackendKind::External => Err(MilpError::NoExternalBackend),
    }
}

#[cfg(test)]
mod tests;
