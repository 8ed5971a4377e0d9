//! Bounded-variable revised simplex with a dense basis inverse.
//!
//! Two-phase: infeasible rows get artificial columns and a
//! sum-of-artificials objective first. Pricing is Dantzig with ties broken
//! by lowest column index; a long degenerate streak switches pricing and
//! the ratio test to Bland's rule permanently, which guarantees
//! termination. The basis inverse is maintained by elementary row updates
//! and periodically refactorized from scratch.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::Sense;

const EPS_PIVOT: f64 = 1e-9;
const EPS_DJ: f64 = 1e-9;
const EPS_ART: f64 = 1e-7;
const REFACTOR_EVERY: usize = 64;

/// Rows and structural columns of one LP in computational form
/// (minimization; bounds supplied per solve so branch-and-bound can reuse
/// the matrix).
pub(crate) struct LpData {
    pub m: usize,
    pub n: usize,
    /// Sparse structural columns: `cols[j]` lists `(row, coef)`.
    pub cols: Vec<Vec<(usize, f64)>>,
    pub b: Vec<f64>,
    pub senses: Vec<Sense>,
    /// Minimization costs for structural columns.
    pub cost: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

pub(crate) struct LpOutcome {
    pub status: LpStatus,
    pub objective: f64,
    /// Structural variable values (length `n`); meaningful when Optimal.
    pub x: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq, Debug)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
    /// Doubly-unbounded nonbasic variable, parked at zero.
    Free,
}

struct Simplex<'a> {
    data: &'a LpData,
    m: usize,
    /// Total columns: structural, then one slack per row, then artificials.
    ntot: usize,
    n_struct: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    xb: Vec<f64>,
    artificials: Vec<usize>,
    /// Artificial column definitions as (row, coefficient).
    art_defs: Vec<(usize, f64)>,
    bland: bool,
    degenerate_streak: usize,
    pivots_since_refactor: usize,
}

pub(crate) fn solve_lp(
    data: &LpData,
    lower: &[f64],
    upper: &[f64],
) -> Result<LpOutcome, String> {
    debug_assert_eq!(lower.len(), data.n);
    debug_assert_eq!(upper.len(), data.n);
    for j in 0..data.n {
        if lower[j] > upper[j] {
            return Ok(LpOutcome {
                status: LpStatus::Infeasible,
                objective: f64::INFINITY,
                x: vec![0.0; data.n],
            });
        }
    }
    let mut s = Simplex::new(data, lower, upper);
    s.run()
}

impl<'a> Simplex<'a> {
    fn new(data: &'a LpData, lo: &[f64], hi: &[f64]) -> Self {
        let m = data.m;
        let n = data.n;
        let mut lower = Vec::with_capacity(n + m);
        let mut upper = Vec::with_capacity(n + m);
        lower.extend_from_slice(lo);
        upper.extend_from_slice(hi);
        for sense in &data.senses {
            match sense {
                Sense::Le => {
                    lower.push(0.0);
                    upper.push(f64::INFINITY);
                }
                Sense::Ge => {
                    lower.push(f64::NEG_INFINITY);
                    upper.push(0.0);
                }
                Sense::Eq => {
                    lower.push(0.0);
                    upper.push(0.0);
                }
            }
        }
        let mut cost = vec![0.0; n + m];
        cost[..n].copy_from_slice(&data.cost);

        let mut state = Vec::with_capacity(n + m);
        for j in 0..n {
            state.push(if lower[j].is_finite() {
                VarState::AtLower
            } else if upper[j].is_finite() {
                VarState::AtUpper
            } else {
                VarState::Free
            });
        }
        for i in 0..m {
            state.push(VarState::Basic(i));
        }
        let basis: Vec<usize> = (n..n + m).collect();
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        Simplex {
            data,
            m,
            ntot: n + m,
            n_struct: n,
            lower,
            upper,
            cost,
            state,
            basis,
            binv,
            xb: vec![0.0; m],
            artificials: Vec::new(),
            art_defs: Vec::new(),
            bland: false,
            degenerate_streak: 0,
            pivots_since_refactor: 0,
        }
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.state[j] {
            VarState::AtLower => self.lower[j],
            VarState::AtUpper => self.upper[j],
            VarState::Free => 0.0,
            VarState::Basic(r) => self.xb[r],
        }
    }

    fn column(&self, j: usize, out: &mut Vec<(usize, f64)>) {
        out.clear();
        if j < self.n_struct {
            out.extend_from_slice(&self.data.cols[j]);
        } else if j < self.n_struct + self.m {
            out.push((j - self.n_struct, 1.0));
        } else {
            let (row, coef) = self.art_column(j);
            out.push((row, coef));
        }
    }

    fn art_column(&self, j: usize) -> (usize, f64) {
        let k = j - self.n_struct - self.m;
        self.art_defs[k]
    }

    /// Row residuals `b - A_N x_N` mapped through the basis inverse.
    fn recompute_xb(&mut self) {
        let mut rhs = self.data.b.clone();
        for j in 0..self.ntot {
            if matches!(self.state[j], VarState::Basic(_)) {
                continue;
            }
            let v = self.nonbasic_value(j);
            if v == 0.0 {
                continue;
            }
            if j < self.n_struct {
                for &(row, coef) in &self.data.cols[j] {
                    rhs[row] -= coef * v;
                }
            } else if j < self.n_struct + self.m {
                rhs[j - self.n_struct] -= v;
            } else {
                let (row, coef) = self.art_column(j);
                rhs[row] -= coef * v;
            }
        }
        for i in 0..self.m {
            let mut acc = 0.0;
            for k in 0..self.m {
                acc += self.binv[i * self.m + k] * rhs[k];
            }
            self.xb[i] = acc;
        }
    }

    fn refactorize(&mut self) -> Result<(), String> {
        let m = self.m;
        // Gauss-Jordan inversion of the basis matrix with partial pivoting.
        let mut a = vec![0.0; m * m];
        let mut col = Vec::new();
        for (i, &j) in self.basis.iter().enumerate() {
            self.column(j, &mut col);
            for &(row, coef) in &col {
                a[row * m + i] = coef;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let mut piv_row = c;
            let mut piv_val = a[c * m + c].abs();
            for r in c + 1..m {
                let v = a[r * m + c].abs();
                if v > piv_val {
                    piv_val = v;
                    piv_row = r;
                }
            }
            if piv_val < 1e-12 {
                return Err(format!("singular basis during refactorization (column {})", c));
            }
            if piv_row != c {
                for k in 0..m {
                    a.swap(c * m + k, piv_row * m + k);
                    inv.swap(c * m + k, piv_row * m + k);
                }
            }
            let d = a[c * m + c];
            for k in 0..m {
                a[c * m + k] /= d;
                inv[c * m + k] /= d;
            }
            for r in 0..m {
                if r == c {
                    continue;
                }
                let f = a[r * m + c];
                if f != 0.0 {
                    for k in 0..m {
                        a[r * m + k] -= f * a[c * m + k];
                        inv[r * m + k] -= f * inv[c * m + k];
                    }
                }
            }
        }
        self.binv = inv;
        self.pivots_since_refactor = 0;
        self.recompute_xb();
        Ok(())
    }

    /// One simplex phase over the currently installed costs.
    /// Returns Optimal (no improving column) or Unbounded.
    fn iterate(&mut self) -> Result<LpStatus, String> {
        let iter_limit = 20_000 + 200 * (self.m + self.ntot);
        let mut col = Vec::new();
        let mut w = vec![0.0; self.m];
        for _iter in 0..iter_limit {
            // BTRAN: simplex multipliers y = c_B' B^-1.
            let mut y = vec![0.0; self.m];
            for i in 0..self.m {
                let cb = self.cost[self.basis[i]];
                if cb != 0.0 {
                    for k in 0..self.m {
                        y[k] += cb * self.binv[i * self.m + k];
                    }
                }
            }
            // Pricing.
            let mut entering: Option<(usize, f64, f64)> = None; // (j, dir, score)
            for j in 0..self.ntot {
                if matches!(self.state[j], VarState::Basic(_)) {
                    continue;
                }
                if self.lower[j] == self.upper[j] {
                    continue;
                }
                self.column(j, &mut col);
                let mut dj = self.cost[j];
                for &(row, coef) in &col {
                    dj -= y[row] * coef;
                }
                let cand = match self.state[j] {
                    VarState::AtLower if dj < -EPS_DJ => Some((1.0, -dj)),
                    VarState::AtUpper if dj > EPS_DJ => Some((-1.0, dj)),
                    VarState::Free if dj.abs() > EPS_DJ => {
                        Some((if dj > 0.0 { -1.0 } else { 1.0 }, dj.abs()))
                    }
                    _ => None,
                };
                if let Some((dir, score)) = cand {
                    if self.bland {
                        entering = Some((j, dir, score));
                        break;
                    }
                    match entering {
                        Some((_, _, best)) if best >= score => {}
                        _ => entering = Some((j, dir, score)),
                    }
                }
            }
            let (j_in, dir, _) = match entering {
                Some(e) => e,
                None => return Ok(LpStatus::Optimal),
            };

            // FTRAN: direction through the basis.
            self.column(j_in, &mut col);
            for wi in w.iter_mut() {
                *wi = 0.0;
            }
            for &(row, coef) in &col {
                if coef != 0.0 {
                    for i in 0..self.m {
                        w[i] += self.binv[i * self.m + row] * coef;
                    }
                }
            }

            // Ratio test: largest step keeping every basic variable and the
            // entering variable inside their bounds.
            let own_range = self.upper[j_in] - self.lower[j_in]; // inf ok
            let mut t_best = if own_range.is_finite() { own_range } else { f64::INFINITY };
            let mut blocking: Option<(usize, bool)> = None; // (row, leaves_at_upper)
            for i in 0..self.m {
                let delta = -dir * w[i]; // rate of change of xb[i]
                if delta > EPS_PIVOT {
                    let ub = self.upper[self.basis[i]];
                    if ub.is_finite() {
                        let t = ((ub - self.xb[i]) / delta).max(0.0);
                        if t < t_best - 1e-12
                            || (t < t_best + 1e-12 && self.better_block(&blocking, i, &w))
                        {
                            t_best = t;
                            blocking = Some((i, true));
                        }
                    }
                } else if delta < -EPS_PIVOT {
                    let lb = self.lower[self.basis[i]];
                    if lb.is_finite() {
                        let t = ((self.xb[i] - lb) / -delta).max(0.0);
                        if t < t_best - 1e-12
                            || (t < t_best + 1e-12 && self.better_block(&blocking, i, &w))
                        {
                            t_best = t;
                            blocking = Some((i, false));
                        }
                    }
                }
            }

            if !t_best.is_finite() {
                return Ok(LpStatus::Unbounded);
            }
            if t_best < 1e-12 {
                self.degenerate_streak += 1;
                if self.degenerate_streak > self.m + self.ntot + 20 {
                    self.bland = true;
                }
            } else {
                self.degenerate_streak = 0;
            }

            match blocking {
                None => {
                    // Bound flip: the entering variable crosses its box
                    // without any basis change.
                    for i in 0..self.m {
                        self.xb[i] -= dir * t_best * w[i];
                    }
                    self.state[j_in] = match self.state[j_in] {
                        VarState::AtLower => VarState::AtUpper,
                        VarState::AtUpper => VarState::AtLower,
                        other => other,
                    };
                }
                Some((r, at_upper)) => {
                    let entering_value = self.nonbasic_value(j_in) + dir * t_best;
                    let w_r = w[r];
                    if w_r.abs() < EPS_PIVOT {
                        return Err(String::from("pivot element vanished in ratio test"));
                    }
                    for i in 0..self.m {
                        if i != r {
                            self.xb[i] -= dir * t_best * w[i];
                        }
                    }
                    let leaving = self.basis[r];
                    self.state[leaving] = if at_upper { VarState::AtUpper } else { VarState::AtLower };
                    // Elementary update of the basis inverse.
                    let m = self.m;
                    for i in 0..m {
                        if i == r {
                            continue;
                        }
                        let f = w[i] / w_r;
                        if f != 0.0 {
                            for k in 0..m {
                                self.binv[i * m + k] -= f * self.binv[r * m + k];
                            }
                        }
                    }
                    for k in 0..m {
                        self.binv[r * m + k] /= w_r;
                    }
                    self.basis[r] = j_in;
                    self.state[j_in] = VarState::Basic(r);
                    self.xb[r] = entering_value;
                    self.pivots_since_refactor += 1;
                    if self.pivots_since_refactor >= REFACTOR_EVERY {
                        self.refactorize()?;
                    }
                }
            }
        }
        Err(String::from("simplex iteration limit exceeded"))
    }

    fn better_block(&self, current: &Option<(usize, bool)>, i: usize, w: &[f64]) -> bool {
        match current {
            None => true,
            Some((r, _)) => {
                if self.bland {
                    self.basis[i] < self.basis[*r]
                } else {
                    // Prefer the larger pivot magnitude for stability; break
                    // remaining ties by lowest basis variable id.
                    let wi = w[i].abs();
                    let wr = w[*r].abs();
                    wi > wr + 1e-12 || (wi > wr - 1e-12 && self.basis[i] < self.basis[*r])
                }
            }
        }
    }

    fn run(&mut self) -> Result<LpOutcome, String> {
        // Start from the all-slack basis and patch infeasible rows with
        // artificial columns.
        self.recompute_xb();
        let mut art_defs: Vec<(usize, f64)> = Vec::new();
        for i in 0..self.m {
            let s = self.n_struct + i;
            let v = self.xb[i];
            let (lo, hi) = (self.lower[s], self.upper[s]);
            if v >= lo - 1e-9 && v <= hi + 1e-9 {
                continue;
            }
            let bound = if v < lo { lo } else { hi };
            let resid = v - bound;
            self.state[s] = if bound == lo { VarState::AtLower } else { VarState::AtUpper };
            let coef = if resid > 0.0 { 1.0 } else { -1.0 };
            let aj = self.ntot + art_defs.len();
            art_defs.push((i, coef));
            self.basis[i] = aj;
            self.xb[i] = resid.abs();
            self.binv[i * self.m + i] = coef;
        }
        let n_art = art_defs.len();
        self.art_defs = art_defs;
        for _ in 0..n_art {
            let aj = self.ntot;
            self.ntot += 1;
            self.lower.push(0.0);
            self.upper.push(f64::INFINITY);
            self.cost.push(0.0);
            self.state.push(VarState::Basic(0)); // fixed up below
            self.artificials.push(aj);
        }
        for (k, &(row, _)) in self.art_defs.iter().enumerate() {
            let aj = self.n_struct + self.m + k;
            self.state[aj] = VarState::Basic(row);
        }

        if n_art > 0 {
            // Phase 1: drive the artificial sum to zero.
            let saved_cost = self.cost.clone();
            for &aj in &self.artificials {
                self.cost[aj] = 1.0;
            }
            for c in self.cost[..self.n_struct + self.m].iter_mut() {
                *c = 0.0;
            }
            let status = self.iterate()?;
            let infeas: f64 = self
                .artificials
                .iter()
                .map(|&aj| match self.state[aj] {
                    VarState::Basic(r) => self.xb[r],
                    _ => self.nonbasic_value(aj),
                })
                .sum();
            if status == LpStatus::Unbounded {
                return Err(String::from("phase-1 objective unbounded"));
            }
            if infeas > EPS_ART {
                return Ok(LpOutcome {
                    status: LpStatus::Infeasible,
                    objective: f64::INFINITY,
                    x: vec![0.0; self.n_struct],
                });
            }
            self.cost = saved_cost;
            self.purge_artificials()?;
            self.refactorize()?;
        }

        match self.iterate()? {
            LpStatus::Unbounded => Ok(LpOutcome {
                status: LpStatus::Unbounded,
                objective: f64::NEG_INFINITY,
                x: vec![0.0; self.n_struct],
            }),
            _ => {
                self.refactorize()?;
                let x: Vec<f64> = (0..self.n_struct).map(|j| self.nonbasic_value(j)).collect();
                let objective: f64 = (0..self.n_struct).map(|j| self.data.cost[j] * x[j]).sum();
                Ok(LpOutcome {
                    status: LpStatus::Optimal,
                    objective,
                    x,
                })
            }
        }
    }

    /// After a successful phase 1, pivot basic artificials out where a
    /// usable pivot exists and freeze every artificial at zero.
    fn purge_artificials(&mut self) -> Result<(), String> {
        let mut col = Vec::new();
        for k in 0..self.artificials.len() {
            let aj = self.artificials[k];
            if let VarState::Basic(r) = self.state[aj] {
                // Row r of B^-1 gives pivot elements against candidate columns.
                let m = self.m;
                let rho: Vec<f64> = (0..m).map(|c| self.binv[r * m + c]).collect();
                let mut found = None;
                for j in 0..self.n_struct + self.m {
                    if matches!(self.state[j], VarState::Basic(_)) {
                        continue;
                    }
                    self.column(j, &mut col);
                    let piv: f64 = col.iter().map(|&(row, coef)| rho[row] * coef).sum();
                    if piv.abs() > 1e-7 {
                        found = Some((j, piv));
                        break;
                    }
                }
                if let Some((j, _)) = found {
                    // Degenerate swap: the artificial sits at zero, so the
                    // basis change moves nothing.
                    self.column(j, &mut col);
                    let mut w = vec![0.0; self.m];
                    for &(row, coef) in &col {
                        for i in 0..self.m {
                            w[i] += self.binv[i * self.m + row] * coef;
                        }
                    }
                    let w_r = w[r];
                    let entering_value = self.nonbasic_value(j);
                    for i in 0..self.m {
                        if i == r {
                            continue;
                        }
                        let f = w[i] / w_r;
                        if f != 0.0 {
                            for kk in 0..self.m {
                                self.binv[i * self.m + kk] -= f * self.binv[r * self.m + kk];
                            }
                        }
                    }
                    for kk in 0..self.m {
                        self.binv[r * self.m + kk] /= w_r;
                    }
                    self.basis[r] = j;
                    self.state[j] = VarState::Basic(r);
                    self.xb[r] = entering_value;
                    self.state[aj] = VarState::AtLower;
                }
                // else: redundant row; the artificial stays basic, fixed at 0.
            }
            self.lower[aj] = 0.0;
            self.upper[aj] = 0.0;
            if !matches!(self.state[aj], VarState::Basic(_)) {
                self.state[aj] = VarState::AtLower;
            }
        }
        Ok(())
    }
}
