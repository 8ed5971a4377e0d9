//! Problem data for day-ahead commitment under demand/PV uncertainty, plus
//! validation and scenario arithmetic.
//!
//! All types are immutable after construction and safe to share across
//! workers; the operations here are pure functions. Time is 1-based in
//! documentation and 0-based in storage; slot-1 ramp and switching
//! constraints anchor to the initial state (`initial_on`,
//! `initial_output`). Currency is treated as an opaque unit.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

/// One thermal generator. Per-slot fields have length `T` of the owning
/// instance.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub name: String,
    /// No-load cost per committed hour.
    pub no_load_cost: Vec<f64>,
    pub startup_cost: Vec<f64>,
    pub shutdown_cost: Vec<f64>,
    /// Cost per MWh produced.
    pub marginal_cost: Vec<f64>,
    /// MW/h the unit may move up between consecutive slots.
    pub ramp_up: Vec<f64>,
    pub ramp_down: Vec<f64>,
    /// Minimum consecutive on/off slots after a switch.
    pub min_up: u32,
    pub min_down: u32,
    pub p_max: f64,
    pub p_min: f64,
    /// Per-slot cap on the reserve this unit can carry.
    pub reserve_cap: Vec<f64>,
    pub initial_on: bool,
    pub initial_output: f64,
}

/// One PV unit: expected availability, adversarial deviation half-width,
/// and the tariff paid when a slot is curtailed.
#[derive(Clone, Debug, PartialEq)]
pub struct PvSpec {
    pub name: String,
    pub expected_output: Vec<f64>,
    pub deviation: Vec<f64>,
    pub curtail_cost: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoadSpec {
    pub name: String,
    pub expected_load: Vec<f64>,
    pub deviation: Vec<f64>,
}

/// Per-slot budgets limiting how many loads/PVs may deviate at once.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertaintyBudget {
    pub demand_budget: Vec<f64>,
    pub pv_budget: Vec<f64>,
}

impl UncertaintyBudget {
    pub fn zero(horizon: usize) -> Self {
        UncertaintyBudget {
            demand_budget: vec![0.0; horizon],
            pv_budget: vec![0.0; horizon],
        }
    }
}

/// The full problem input.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemInstance {
    pub horizon: usize,
    pub generators: Vec<GeneratorSpec>,
    pub pvs: Vec<PvSpec>,
    pub loads: Vec<LoadSpec>,
    /// System-wide reserve requirement per slot.
    pub system_reserve: Vec<f64>,
    pub budgets: UncertaintyBudget,
}

impl SystemInstance {
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }
    pub fn num_pvs(&self) -> usize {
        self.pvs.len()
    }
    pub fn num_loads(&self) -> usize {
        self.loads.len()
    }

    /// Largest marginal cost across all generators and slots.
    pub fn max_marginal_cost(&self) -> f64 {
        let mut best = 0.0f64;
        for g in &self.generators {
            for &c in &g.marginal_cost {
                best = best.max(c);
            }
        }
        best
    }

    /// Sum of expected demand minus expected PV at slot `t` (no
    /// curtailment, no deviations).
    pub fn nominal_net_demand(&self, t: usize) -> f64 {
        let d: f64 = self.loads.iter().map(|l| l.expected_load[t]).sum();
        let z: f64 = self.pvs.iter().map(|p| p.expected_output[t]).sum();
        d - z
    }
}

/// First-stage decisions: unit on/off (`on`), switch indicators
/// (`start`/`stop`), and per-slot PV curtailment (`curtail`).
#[derive(Clone, Debug, PartialEq)]
pub struct CommitmentPlan {
    /// `on[i][t]`
    pub on: Vec<Vec<bool>>,
    pub start: Vec<Vec<bool>>,
    pub stop: Vec<Vec<bool>>,
    /// `curtail[l][t]`
    pub curtail: Vec<Vec<bool>>,
}

impl CommitmentPlan {
    /// All-off, no-curtailment plan of the right shape.
    pub fn all_off(instance: &SystemInstance) -> Self {
        let t = instance.horizon;
        CommitmentPlan {
            on: vec![vec![false; t]; instance.num_generators()],
            start: vec![vec![false; t]; instance.num_generators()],
            stop: vec![vec![false; t]; instance.num_generators()],
            curtail: vec![vec![false; t]; instance.num_pvs()],
        }
    }

    /// Derives minimal start/stop indicators from an on/off pattern.
    pub fn from_patterns(
        instance: &SystemInstance,
        on: Vec<Vec<bool>>,
        curtail: Vec<Vec<bool>>,
    ) -> Self {
        let t = instance.horizon;
        let mut start = vec![vec![false; t]; on.len()];
        let mut stop = vec![vec![false; t]; on.len()];
        for (i, g) in instance.generators.iter().enumerate() {
            let mut prev = g.initial_on;
            for s in 0..t {
                start[i][s] = on[i][s] && !prev;
                stop[i][s] = !on[i][s] && prev;
                prev = on[i][s];
            }
        }
        CommitmentPlan {
            on,
            start,
            stop,
            curtail,
        }
    }

    /// Checks the switching logic and minimum up/down windows against the
    /// instance. Windows apply to in-horizon switches only; no pre-horizon
    /// run-length history exists in the input.
    pub fn check_logic(&self, instance: &SystemInstance) -> Result<(), ModelError> {
        let t = instance.horizon;
        for (i, g) in instance.generators.iter().enumerate() {
            let x = &self.on[i];
            for s in 0..t {
                let prev = if s == 0 { g.initial_on } else { x[s - 1] };
                if x[s] && !prev && !self.start[i][s] {
                    return Err(ModelError::PlanLogic(format!(
                        "generator {} turns on at slot {} without a start flag",
                        g.name,
                        s + 1
                    )));
                }
                if !x[s] && prev && !self.stop[i][s] {
                    return Err(ModelError::PlanLogic(format!(
                        "generator {} turns off at slot {} without a stop flag",
                        g.name,
                        s + 1
                    )));
                }
                if x[s] && !prev {
                    let end = (s + g.min_up as usize).min(t);
                    for tau in s..end {
                        if !x[tau] {
                            return Err(ModelError::PlanLogic(format!(
                                "generator {} violates min-up after starting at slot {}",
                                g.name,
                                s + 1
                            )));
                        }
                    }
                }
                if !x[s] && prev {
                    let end = (s + g.min_down as usize).min(t);
                    for tau in s..end {
                        if x[tau] {
                            return Err(ModelError::PlanLogic(format!(
                                "generator {} violates min-down after stopping at slot {}",
                                g.name,
                                s + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Commitment-side cost: no-load/startup/shutdown terms plus the
    /// curtailment tariff.
    pub fn first_stage_cost(&self, instance: &SystemInstance) -> f64 {
        let mut total = 0.0;
        for (i, g) in instance.generators.iter().enumerate() {
            for t in 0..instance.horizon {
                if self.on[i][t] {
                    total += g.no_load_cost[t];
                }
                if self.start[i][t] {
                    total += g.startup_cost[t];
                }
                if self.stop[i][t] {
                    total += g.shutdown_cost[t];
                }
            }
        }
        for (l, pv) in instance.pvs.iter().enumerate() {
            for t in 0..instance.horizon {
                if self.curtail[l][t] {
                    total += pv.curtail_cost[t];
                }
            }
        }
        total
    }
}

/// Second-stage continuous decisions.
#[derive(Clone, Debug, PartialEq)]
pub struct DispatchPlan {
    /// `production[i][t]` in MW.
    pub production: Vec<Vec<f64>>,
    pub reserve: Vec<Vec<f64>>,
}

/// Normalized deviations: `demand_dev[j][t]` and `pv_dev[l][t]` in [0, 1].
/// Demand moves up by `dev * deviation`; PV availability moves down.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertaintyRealization {
    pub demand_dev: Vec<Vec<f64>>,
    pub pv_dev: Vec<Vec<f64>>,
}

impl UncertaintyRealization {
    pub fn zero(instance: &SystemInstance) -> Self {
        UncertaintyRealization {
            demand_dev: vec![vec![0.0; instance.horizon]; instance.num_loads()],
            pv_dev: vec![vec![0.0; instance.horizon]; instance.num_pvs()],
        }
    }

    /// Per-slot budget feasibility within `tol`.
    pub fn check_budgets(&self, instance: &SystemInstance, tol: f64) -> Result<(), ModelError> {
        for t in 0..instance.horizon {
            let zeta: f64 = self.demand_dev.iter().map(|row| row[t]).sum();
            if zeta > instance.budgets.demand_budget[t] + tol {
                return Err(ModelError::BudgetExceeded {
                    slot: t + 1,
                    used: zeta,
                    budget: instance.budgets.demand_budget[t],
                });
            }
            let eta: f64 = self.pv_dev.iter().map(|row| row[t]).sum();
            if eta > instance.budgets.pv_budget[t] + tol {
                return Err(ModelError::BudgetExceeded {
                    slot: t + 1,
                    used: eta,
                    budget: instance.budgets.pv_budget[t],
                });
            }
        }
        for row in self.demand_dev.iter().chain(self.pv_dev.iter()) {
            for &v in row {
                if !(-tol..=1.0 + tol).contains(&v) {
                    return Err(ModelError::DeviationOutOfRange(v));
                }
            }
        }
        Ok(())
    }
}

/// A realized operating condition: per-slot demand and delivered PV after
/// deviations and curtailment.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizedScenario {
    /// `demand[j][t]`
    pub demand: Vec<Vec<f64>>,
    /// `pv[l][t]`, zero wherever the mask curtails.
    pub pv: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelError {
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    BudgetExceeded {
        slot: usize,
        used: f64,
        budget: f64,
    },
    DeviationOutOfRange(f64),
    PlanLogic(String),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::DimensionMismatch { what, expected, got } => {
                write!(f, "{}: expected length {}, got {}", what, expected, got)
            }
            ModelError::BudgetExceeded { slot, used, budget } => {
                write!(f, "slot {}: deviation sum {} exceeds budget {}", slot, used, budget)
            }
            ModelError::DeviationOutOfRange(v) => {
                write!(f, "deviation {} outside [0, 1]", v)
            }
            ModelError::PlanLogic(msg) => write!(f, "plan logic: {}", msg),
        }
    }
}

impl core::error::Error for ModelError {}

/// One violated invariant, with a path into the offending field.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationIssue {
    pub path: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }

    fn push(&mut self, path: String, message: String) {
        self.issues.push(ValidationIssue { path, message });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "instance valid");
        }
        for issue in &self.issues {
            writeln!(f, "{}: {}", issue.path, issue.message)?;
        }
        Ok(())
    }
}

fn check_len(report: &mut ValidationReport, path: &str, len: usize, horizon: usize) {
    if len != horizon {
        report.push(
            String::from(path),
            format!("per-slot array has length {}, horizon is {}", len, horizon),
        );
    }
}

/// Checks every instance invariant and reports violations with field
/// paths. A passing instance is accepted by every builder in this crate.
pub fn validate_instance(instance: &SystemInstance) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let t = instance.horizon;
    if t == 0 {
        rep.push("horizon".into(), "horizon must be at least 1".into());
    }
    if instance.generators.is_empty() {
        rep.push("generators".into(), "at least one generator required".into());
    }
    if instance.pvs.is_empty() {
        rep.push("pvs".into(), "at least one PV required".into());
    }
    if instance.loads.is_empty() {
        rep.push("loads".into(), "at least one load required".into());
    }
    check_len(&mut rep, "system_reserve", instance.system_reserve.len(), t);
    check_len(&mut rep, "budgets.delta", instance.budgets.demand_budget.len(), t);
    check_len(&mut rep, "budgets.gamma", instance.budgets.pv_budget.len(), t);

    for (i, g) in instance.generators.iter().enumerate() {
        let p = |field: &str| format!("generators[{}].{}", i, field);
        check_len(&mut rep, &p("no_load_cost"), g.no_load_cost.len(), t);
        check_len(&mut rep, &p("startup_cost"), g.startup_cost.len(), t);
        check_len(&mut rep, &p("shutdown_cost"), g.shutdown_cost.len(), t);
        check_len(&mut rep, &p("marginal_cost"), g.marginal_cost.len(), t);
        check_len(&mut rep, &p("ramp_up"), g.ramp_up.len(), t);
        check_len(&mut rep, &p("ramp_down"), g.ramp_down.len(), t);
        check_len(&mut rep, &p("reserve_cap"), g.reserve_cap.len(), t);
        if g.p_min > g.p_max {
            rep.push(p("p_min"), format!("p_min {} exceeds p_max {}", g.p_min, g.p_max));
        }
        if g.ramp_up.iter().any(|&v| v < 0.0) {
            rep.push(p("ramp_up"), "ramp rates must be nonnegative".into());
        }
        if g.ramp_down.iter().any(|&v| v < 0.0) {
            rep.push(p("ramp_down"), "ramp rates must be nonnegative".into());
        }
        if !(0.0..=g.p_max).contains(&g.initial_output) {
            rep.push(
                p("initial_output"),
                format!("initial output {} outside [0, {}]", g.initial_output, g.p_max),
            );
        }
        if !g.initial_on && g.initial_output != 0.0 {
            rep.push(
                p("initial_output"),
                "initial output must be 0 for an initially-off unit".into(),
            );
        }
    }

    for (l, pv) in instance.pvs.iter().enumerate() {
        let p = |field: &str| format!("pvs[{}].{}", l, field);
        check_len(&mut rep, &p("expected_output"), pv.expected_output.len(), t);
        check_len(&mut rep, &p("deviation"), pv.deviation.len(), t);
        check_len(&mut rep, &p("curtail_cost"), pv.curtail_cost.len(), t);
        for s in 0..pv.expected_output.len().min(pv.deviation.len()) {
            if pv.expected_output[s] < 0.0 {
                rep.push(p("expected_output"), format!("negative at slot {}", s + 1));
            }
            if pv.deviation[s] < 0.0 || pv.deviation[s] > pv.expected_output[s] {
                rep.push(
                    p("deviation"),
                    format!(
                        "slot {}: deviation {} outside [0, expected {}]",
                        s + 1,
                        pv.deviation[s],
                        pv.expected_output[s]
                    ),
                );
            }
        }
        if pv.curtail_cost.iter().any(|&v| v < 0.0) {
            rep.push(p("curtail_cost"), "curtailment tariff must be nonnegative".into());
        }
    }

    for (j, load) in instance.loads.iter().enumerate() {
        let p = |field: &str| format!("loads[{}].{}", j, field);
        check_len(&mut rep, &p("expected_load"), load.expected_load.len(), t);
        check_len(&mut rep, &p("deviation"), load.deviation.len(), t);
        for s in 0..load.expected_load.len().min(load.deviation.len()) {
            if load.expected_load[s] < 0.0 {
                rep.push(p("expected_load"), format!("negative at slot {}", s + 1));
            }
            if load.deviation[s] < 0.0 {
                rep.push(p("deviation"), format!("negative at slot {}", s + 1));
            }
            if load.expected_load[s] - load.deviation[s] < 0.0 {
                rep.push(
                    p("deviation"),
                    format!("slot {}: deviation exceeds expected load", s + 1),
                );
            }
        }
    }

    let n_d = instance.num_loads() as f64;
    let n_p = instance.num_pvs() as f64;
    for (s, &b) in instance.budgets.demand_budget.iter().enumerate() {
        if !(0.0..=n_d).contains(&b) {
            rep.push(
                format!("budgets.delta[{}]", s),
                format!("budget {} outside [0, {}]", b, n_d),
            );
        }
    }
    for (s, &b) in instance.budgets.pv_budget.iter().enumerate() {
        if !(0.0..=n_p).contains(&b) {
            rep.push(
                format!("budgets.gamma[{}]", s),
                format!("budget {} outside [0, {}]", b, n_p),
            );
        }
    }
    for (s, &q) in instance.system_reserve.iter().enumerate() {
        if q < 0.0 {
            rep.push(format!("system_reserve[{}]", s), "must be nonnegative".into());
        }
    }
    rep
}

/// Applies a realization and a curtailment mask:
/// demand = expected + dev * deviation, delivered PV =
/// (expected - dev * deviation) masked to zero on curtailed slots.
pub fn apply_uncertainty(
    instance: &SystemInstance,
    real: &UncertaintyRealization,
    curtail: Option<&[Vec<bool>]>,
) -> Result<RealizedScenario, ModelError> {
    let t = instance.horizon;
    if real.demand_dev.len() != instance.num_loads() {
        return Err(ModelError::DimensionMismatch {
            what: "demand deviations",
            expected: instance.num_loads(),
            got: real.demand_dev.len(),
        });
    }
    if real.pv_dev.len() != instance.num_pvs() {
        return Err(ModelError::DimensionMismatch {
            what: "pv deviations",
            expected: instance.num_pvs(),
            got: real.pv_dev.len(),
        });
    }
    for row in &real.demand_dev {
        if row.len() != t {
            return Err(ModelError::DimensionMismatch {
                what: "demand deviation slots",
                expected: t,
                got: row.len(),
            });
        }
    }
    for row in &real.pv_dev {
        if row.len() != t {
            return Err(ModelError::DimensionMismatch {
                what: "pv deviation slots",
                expected: t,
                got: row.len(),
            });
        }
    }
    if let Some(mask) = curtail {
        if mask.len() != instance.num_pvs() {
            return Err(ModelError::DimensionMismatch {
                what: "curtailment mask",
                expected: instance.num_pvs(),
                got: mask.len(),
            });
        }
    }
    real.check_budgets(instance, 1e-9)?;

    let demand = instance
        .loads
        .iter()
        .enumerate()
        .map(|(j, l)| {
            (0..t)
                .map(|s| l.expected_load[s] + real.demand_dev[j][s] * l.deviation[s])
                .collect()
        })
        .collect();
    let pv = instance
        .pvs
        .iter()
        .enumerate()
        .map(|(l, p)| {
            (0..t)
                .map(|s| {
                    let masked = curtail.map_or(false, |m| m[l][s]);
                    if masked {
                        0.0
                    } else {
                        p.expected_output[s] - real.pv_dev[l][s] * p.deviation[s]
                    }
                })
                .collect()
        })
        .collect();
    Ok(RealizedScenario { demand, pv })
}
