//! Branch-and-bound over the binary variables of a `MilpModel`.
//!
//! Most-fractional branching with ties broken by lowest variable id,
//! best-bound node selection (deeper node, then lower node id, on equal
//! bounds), incumbent pruning by LP bound. Deterministic by construction:
//! no hashing, no clocks, no randomness.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;

use super::simplex::{solve_lp, LpData, LpStatus};
use super::{Direction, MilpError, MilpModel, MilpSolution, SolveStatus, SolverConfig, VarKind};

struct Node {
    id: usize,
    depth: usize,
    /// LP bound inherited from the parent (min-normalized).
    bound: f64,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for Node {}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        // BinaryHeap is a max-heap; invert so the pop order is lowest
        // bound, then greatest depth, then lowest id.
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| self.depth.cmp(&other.depth))
            .then_with(|| other.id.cmp(&self.id))
    }
}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn build_lp_data(model: &MilpModel, flip: bool) -> LpData {
    let n = model.num_vars();
    let m = model.num_constraints();
    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut b = Vec::with_capacity(m);
    let mut senses = Vec::with_capacity(m);
    for (i, c) in model.constraints().iter().enumerate() {
        for &(v, coef) in &c.terms {
            cols[v.0].push((i, coef));
        }
        b.push(c.rhs);
        senses.push(c.sense);
    }
    let sign = if flip { -1.0 } else { 1.0 };
    let cost = model.objective().iter().map(|&c| sign * c).collect();
    LpData {
        m,
        n,
        cols,
        b,
        senses,
        cost,
    }
}

pub(super) fn solve_milp(
    model: &MilpModel,
    config: &SolverConfig,
    abort: Option<&(dyn Fn() -> bool + Send + Sync)>,
) -> Result<MilpSolution, MilpError> {
    let flip = model.direction == Direction::Maximize;
    let data = build_lp_data(model, flip);
    let n = model.num_vars();
    let binaries: Vec<usize> = model
        .vars()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.kind == VarKind::Binary)
        .map(|(j, _)| j)
        .collect();

    let root_lower: Vec<f64> = model.vars().iter().map(|v| v.lower).collect();
    let root_upper: Vec<f64> = model.vars().iter().map(|v| v.upper).collect();

    let finish = |status: SolveStatus, obj_min: f64, values: Vec<f64>, gap: f64| MilpSolution {
        status,
        objective: if flip { -obj_min } else { obj_min },
        values,
        gap,
    };

    let root = solve_lp(&data, &root_lower, &root_upper).map_err(MilpError::Numerical)?;
    match root.status {
        LpStatus::Infeasible => {
            return Ok(finish(SolveStatus::Infeasible, f64::INFINITY, vec![0.0; n], 0.0))
        }
        LpStatus::Unbounded => {
            // The relaxation is unbounded; for the models built in this
            // crate that always signals a missing envelope bound rather
            // than a recoverable state.
            return Ok(finish(SolveStatus::Unbounded, f64::NEG_INFINITY, vec![0.0; n], 0.0));
        }
        LpStatus::Optimal => {}
    }

    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut next_id = 1usize;
    let mut explored = 0usize;
    let mut heap = BinaryHeap::new();
    heap.push(Node {
        id: 0,
        depth: 0,
        bound: root.objective,
        lower: root_lower,
        upper: root_upper,
    });
    // Bounds of nodes discarded by the incumbent test, for the reported gap.
    let mut discarded_bound = f64::INFINITY;
    let mut hit_limit = false;

    while let Some(node) = heap.pop() {
        if let Some(limit) = config.node_limit {
            if explored >= limit {
                hit_limit = true;
                discarded_bound = discarded_bound.min(node.bound);
                break;
            }
        }
        if let Some(hook) = abort {
            if hook() {
                hit_limit = true;
                discarded_bound = discarded_bound.min(node.bound);
                break;
            }
        }
        if let Some((inc_val, _)) = &incumbent {
            let slack = prune_slack(*inc_val, config.mip_gap);
            if node.bound >= inc_val - slack {
                discarded_bound = discarded_bound.min(node.bound);
                continue;
            }
        }
        explored += 1;
        let sol = solve_lp(&data, &node.lower, &node.upper).map_err(MilpError::Numerical)?;
        if sol.status != LpStatus::Optimal {
            continue; // infeasible subtree
        }
        if let Some((inc_val, _)) = &incumbent {
            let slack = prune_slack(*inc_val, config.mip_gap);
            if sol.objective >= inc_val - slack {
                discarded_bound = discarded_bound.min(sol.objective);
                continue;
            }
        }
        // Most-fractional binary, ties to the lowest id.
        let mut branch_var: Option<(usize, f64)> = None;
        for &j in &binaries {
            let x = sol.x[j];
            let frac = (x - crate::math::round(x)).abs();
            if frac > config.int_tol {
                match branch_var {
                    Some((_, best)) if best >= frac => {}
                    _ => branch_var = Some((j, frac)),
                }
            }
        }
        match branch_var {
            None => {
                let better = match &incumbent {
                    Some((inc_val, _)) => sol.objective < inc_val - 1e-12,
                    None => true,
                };
                if better {
                    incumbent = Some((sol.objective, sol.x.clone()));
                }
            }
            Some((j, _)) => {
                let mut lo_child = Node {
                    id: next_id,
                    depth: node.depth + 1,
                    bound: sol.objective,
                    lower: node.lower.clone(),
                    upper: node.upper.clone(),
                };
                lo_child.upper[j] = 0.0;
                next_id += 1;
                let mut hi_child = Node {
                    id: next_id,
                    depth: node.depth + 1,
                    bound: sol.objective,
                    lower: node.lower,
                    upper: node.upper,
                };
                hi_child.lower[j] = 1.0;
                next_id += 1;
                heap.push(lo_child);
                heap.push(hi_child);
            }
        }
    }

    if hit_limit {
        for node in heap.iter() {
            discarded_bound = discarded_bound.min(node.bound);
        }
        return Ok(match incumbent {
            Some((val, x)) => {
                let gap = relative_gap(val, discarded_bound);
                finish(SolveStatus::IterationLimit, val, x, gap)
            }
            None => finish(SolveStatus::IterationLimit, f64::INFINITY, vec![0.0; n], f64::INFINITY),
        });
    }

    Ok(match incumbent {
        Some((val, x)) => {
            let gap = if discarded_bound.is_finite() {
                relative_gap(val, discarded_bound)
            } else {
                0.0
            };
            finish(SolveStatus::Optimal, val, x, gap)
        }
        None => finish(SolveStatus::Infeasible, f64::INFINITY, vec![0.0; n], 0.0),
    })
}

fn prune_slack(incumbent: f64, mip_gap: f64) -> f64 {
    let scale = incumbent.abs().max(1.0);
    (mip_gap * incumbent.abs()).max(1e-9 * scale)
}

fn relative_gap(incumbent: f64, bound: f64) -> f64 {
    if !bound.is_finite() {
        return 0.0;
    }
    ((incumbent - bound) / incumbent.abs().max(1e-12)).max(0.0)
}
