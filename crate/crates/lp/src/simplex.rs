//! Two-phase primal simplex over bounded variables.
//!
//! Rows are turned into equalities with bounded slacks. Phase 1 minimizes
//! artificial infeasibility, phase 2 the real objective. Entering variables
//! are priced with Dantzig's rule; after a stretch of stalled iterations
//! the solver switches to Bland's rule until the objective moves again,
//! which rules out cycling. The basis inverse is kept explicitly and
//! refactorized periodically.

use crate::error::LpError;
use crate::problem::{LpProblem, Relation};

/// Outcome classification of a solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::IterationLimit => "iteration_limit",
        }
    }
}

/// Primal solution. `values` holds one entry per declared variable.
/// `objective` is recomputed from the primal point and is NaN unless the
/// status is optimal.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: SolveStatus,
    pub values: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

/// Solver tolerances and limits.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Relative feasibility tolerance on bounds and rows.
    pub feas_tol: f64,
    /// Reduced-cost tolerance for optimality.
    pub opt_tol: f64,
    pub max_iters: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { feas_tol: 1e-7, opt_tol: 1e-9, max_iters: 50_000 }
    }
}

const PIVOT_EPS: f64 = 1e-11;
const REFACTOR_INTERVAL: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
    /// Free variable resting at zero.
    FreeZero,
}

struct Tableau {
    rhs: Vec<f64>,
    /// Column view over all variables (structural + slack + artificial).
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    value: Vec<f64>,
    state: Vec<VarState>,
    is_artificial: Vec<bool>,
    /// Basic variable per row.
    basis: Vec<usize>,
    /// Dense row-major inverse of the basis matrix.
    binv: Vec<f64>,
    m: usize,
    iterations: usize,
    pivots_since_refactor: usize,
}

enum LoopEnd {
    Optimal,
    Unbounded,
    IterationLimit,
}

impl Tableau {
    fn nv(&self) -> usize {
        self.cols.len()
    }

    fn binv_at(&self, i: usize, j: usize) -> f64 {
        self.binv[i * self.m + j]
    }

    /// w = B^-1 * A_j for column j.
    fn ftran(&self, j: usize, w: &mut [f64]) {
        w.fill(0.0);
        for &(r, a) in &self.cols[j] {
            if a == 0.0 {
                continue;
            }
            for i in 0..self.m {
                w[i] += self.binv_at(i, r) * a;
            }
        }
    }

    /// y = c_B^T B^-1 for the given full cost vector.
    fn duals(&self, cost: &[f64], y: &mut [f64]) {
        y.fill(0.0);
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb == 0.0 {
                continue;
            }
            for j in 0..self.m {
                y[j] += cb * self.binv_at(i, j);
            }
        }
    }

    fn reduced_cost(&self, cost: &[f64], y: &[f64], j: usize) -> f64 {
        let mut d = cost[j];
        for &(r, a) in &self.cols[j] {
            d -= y[r] * a;
        }
        d
    }

    /// Rebuild the basis inverse from scratch (Gauss-Jordan with partial
    /// pivoting) and recompute basic values from the nonbasic point.
    fn refactorize(&mut self) -> Result<(), LpError> {
        let m = self.m;
        if m == 0 {
            return Ok(());
        }
        let width = 2 * m;
        let mut aug = vec![0.0; m * width];
        for (col, &var) in self.basis.iter().enumerate() {
            for &(r, a) in &self.cols[var] {
                aug[r * width + col] = a;
            }
        }
        for i in 0..m {
            aug[i * width + m + i] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = aug[col * width + col].abs();
            for r in col + 1..m {
                let v = aug[r * width + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-12 {
                return Err(LpError::Numerical("singular basis during refactorization".into()));
            }
            if piv != col {
                for k in 0..width {
                    aug.swap(col * width + k, piv * width + k);
                }
            }
            let d = aug[col * width + col];
            for k in 0..width {
                aug[col * width + k] /= d;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = aug[r * width + col];
                if f == 0.0 {
                    continue;
                }
                for k in 0..width {
                    aug[r * width + k] -= f * aug[col * width + k];
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                self.binv[i * m + j] = aug[i * width + m + j];
            }
        }
        self.pivots_since_refactor = 0;
        self.recompute_basic_values();
        Ok(())
    }

    /// x_B = B^-1 (b - A_N x_N), overwriting basic entries of `value`.
    fn recompute_basic_values(&mut self) {
        let m = self.m;
        if m == 0 {
            return;
        }
        let mut t = self.rhs.clone();
        for j in 0..self.nv() {
            if matches!(self.state[j], VarState::Basic(_)) {
                continue;
            }
            let xj = self.value[j];
            if xj == 0.0 {
                continue;
            }
            for &(r, a) in &self.cols[j] {
                t[r] -= a * xj;
            }
        }
        for i in 0..m {
            let mut v = 0.0;
            for j in 0..m {
                v += self.binv_at(i, j) * t[j];
            }
            self.value[self.basis[i]] = v;
        }
    }

    /// Replace the basic variable of row `r` by `entering`, with `w` the
    /// ftran column of the entering variable.
    fn pivot(&mut self, r: usize, entering: usize, w: &[f64]) -> Result<(), LpError> {
        let m = self.m;
        let wr = w[r];
        if wr.abs() < PIVOT_EPS {
            return Err(LpError::Numerical("pivot element vanished".into()));
        }
        for i in 0..m {
            if i == r {
                continue;
            }
            let f = w[i] / wr;
            if f == 0.0 {
                continue;
            }
            for k in 0..m {
                self.binv[i * m + k] -= f * self.binv[r * m + k];
            }
        }
        for k in 0..m {
            self.binv[r * m + k] /= wr;
        }
        self.basis[r] = entering;
        self.state[entering] = VarState::Basic(r);
        self.pivots_since_refactor += 1;
        if self.pivots_since_refactor >= REFACTOR_INTERVAL {
            self.refactorize()?;
        }
        Ok(())
    }

    /// Run simplex iterations for the given cost vector until the phase
    /// objective is optimal.
    fn run_phase(
        &mut self,
        cost: &[f64],
        opts: &SolveOptions,
        allow_unbounded: bool,
    ) -> Result<LoopEnd, LpError> {
        let m = self.m;
        let nv = self.nv();
        let mut y = vec![0.0; m];
        let mut w = vec![0.0; m];
        let mut bland = false;
        let stall_limit = 2 * (m + nv) + 20;
        let mut stalled = 0usize;
        let mut best_obj = f64::INFINITY;

        loop {
            if self.iterations >= opts.max_iters {
                return Ok(LoopEnd::IterationLimit);
            }
            self.duals(cost, &mut y);

            // Entering variable: Dantzig by default, Bland while stalled.
            let mut entering: Option<(usize, f64, f64)> = None; // (var, sigma, score)
            for j in 0..nv {
                if matches!(self.state[j], VarState::Basic(_)) {
                    continue;
                }
                if self.upper[j] - self.lower[j] <= 0.0 {
                    continue; // fixed
                }
                let d = self.reduced_cost(cost, &y, j);
                let cand = match self.state[j] {
                    VarState::AtLower => (d < -opts.opt_tol).then_some((1.0, -d)),
                    VarState::AtUpper => (d > opts.opt_tol).then_some((-1.0, d)),
                    VarState::FreeZero => {
                        if d < -opts.opt_tol {
                            Some((1.0, -d))
                        } else if d > opts.opt_tol {
                            Some((-1.0, d))
                        } else {
                            None
                        }
                    }
                    VarState::Basic(_) => None,
                };
                if let Some((sigma, score)) = cand {
                    if bland {
                        entering = Some((j, sigma, score));
                        break;
                    }
                    if entering.map_or(true, |(_, _, s)| score > s) {
                        entering = Some((j, sigma, score));
                    }
                }
            }
            let Some((q, sigma, _)) = entering else {
                return Ok(LoopEnd::Optimal);
            };

            self.ftran(q, &mut w);

            // Ratio test: smallest step that drives a basic variable (or the
            // entering variable itself) to a bound.
            let self_span = self.upper[q] - self.lower[q]; // may be +inf
            let mut min_basic = f64::INFINITY;
            for i in 0..m {
                let wi = w[i];
                if wi.abs() <= PIVOT_EPS {
                    continue;
                }
                let b = self.basis[i];
                let v = self.value[b];
                let dir = sigma * wi;
                let limit = if dir > 0.0 {
                    if self.lower[b].is_finite() {
                        ((v - self.lower[b]).max(0.0)) / dir
                    } else {
                        continue;
                    }
                } else if self.upper[b].is_finite() {
                    ((v - self.upper[b]).min(0.0)) / dir
                } else {
                    continue;
                };
                if limit < min_basic {
                    min_basic = limit;
                }
            }

            let delta = min_basic.min(self_span);
            if !delta.is_finite() {
                if allow_unbounded {
                    return Ok(LoopEnd::Unbounded);
                }
                return Err(LpError::Numerical("unbounded ray in a bounded phase".into()));
            }

            self.iterations += 1;

            if self_span <= min_basic {
                // Bound flip: no basis change.
                for i in 0..m {
                    if w[i] != 0.0 {
                        self.value[self.basis[i]] -= sigma * self_span * w[i];
                    }
                }
                self.state[q] = if sigma > 0.0 { VarState::AtUpper } else { VarState::AtLower };
                self.value[q] = if sigma > 0.0 { self.upper[q] } else { self.lower[q] };
            } else {
                // Leaving row: among ratio ties prefer the largest pivot for
                // stability, or the lowest variable index under Bland's rule.
                let tie = delta + 1e-9 * (1.0 + delta.abs());
                let mut leave: Option<(usize, f64, bool)> = None; // (row, |w|, hit_upper)
                for i in 0..m {
                    let wi = w[i];
                    if wi.abs() <= PIVOT_EPS {
                        continue;
                    }
                    let b = self.basis[i];
                    let v = self.value[b];
                    let dir = sigma * wi;
                    let (limit, hit_upper) = if dir > 0.0 {
                        if !self.lower[b].is_finite() {
                            continue;
                        }
                        (((v - self.lower[b]).max(0.0)) / dir, false)
                    } else {
                        if !self.upper[b].is_finite() {
                            continue;
                        }
                        (((v - self.upper[b]).min(0.0)) / dir, true)
                    };
                    if limit > tie {
                        continue;
                    }
                    let better = match leave {
                        None => true,
                        Some((ri, wa, _)) => {
                            if bland {
                                self.basis[i] < self.basis[ri]
                            } else {
                                wi.abs() > wa
                            }
                        }
                    };
                    if better {
                        leave = Some((i, wi.abs(), hit_upper));
                    }
                }
                let (r, _, hit_upper) = leave
                    .ok_or_else(|| LpError::Numerical("ratio test found no leaving row".into()))?;
                let leaving = self.basis[r];
                for i in 0..m {
                    if w[i] != 0.0 {
                        self.value[self.basis[i]] -= sigma * delta * w[i];
                    }
                }
                self.value[q] += sigma * delta;
                self.value[leaving] =
                    if hit_upper { self.upper[leaving] } else { self.lower[leaving] };
                self.state[leaving] =
                    if hit_upper { VarState::AtUpper } else { VarState::AtLower };
                self.pivot(r, q, &w)?;
            }

            // Stall detection drives the Bland fallback.
            let obj: f64 = (0..nv).map(|j| cost[j] * self.value[j]).sum();
            if obj < best_obj - 1e-10 * (1.0 + best_obj.abs()) {
                best_obj = obj;
                stalled = 0;
                bland = false;
            } else {
                stalled += 1;
                if stalled > stall_limit {
                    bland = true;
                }
            }
        }
    }
}

/// Solve a problem with the two-phase bounded-variable primal simplex.
///
/// The status is certified by phase outcome: `Infeasible` means phase 1
/// terminated with positive infeasibility, `Unbounded` means a phase-2
/// improving ray was found, and hitting the iteration budget is reported
/// as `IterationLimit` rather than returning a possibly-wrong point.
pub fn solve(problem: &LpProblem, opts: &SolveOptions) -> Result<LpSolution, LpError> {
    problem.validate()?;
    let n = problem.num_vars();
    let mut lower: Vec<f64> = problem.vars().iter().map(|v| v.lower).collect();
    let mut upper: Vec<f64> = problem.vars().iter().map(|v| v.upper).collect();

    let nonbasic_start = |lo: f64, up: f64| -> f64 {
        if lo.is_finite() {
            lo
        } else if up.is_finite() {
            up
        } else {
            0.0
        }
    };
    let start_point = |lower: &[f64], upper: &[f64]| -> Vec<f64> {
        lower.iter().zip(upper).map(|(&l, &u)| nonbasic_start(l, u)).collect()
    };
    let infeasible = |lower: &[f64], upper: &[f64], iterations: usize| LpSolution {
        status: SolveStatus::Infeasible,
        values: start_point(lower, upper),
        objective: f64::NAN,
        iterations,
    };

    // Presolve: combine duplicate terms, fold singleton rows into bounds,
    // and decide empty rows outright.
    let mut kept: Vec<(Vec<(usize, f64)>, Relation, f64)> = Vec::new();
    for row in problem.rows() {
        let mut terms: Vec<(usize, f64)> = row.terms.iter().map(|&(id, c)| (id.0, c)).collect();
        terms.sort_by_key(|&(j, _)| j);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
        for (j, c) in terms {
            match merged.last_mut() {
                Some((lj, lc)) if *lj == j => *lc += c,
                _ => merged.push((j, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0.0);
        match merged.len() {
            0 => {
                let slack = opts.feas_tol * (1.0 + row.rhs.abs());
                let ok = match row.relation {
                    Relation::Le => 0.0 <= row.rhs + slack,
                    Relation::Ge => 0.0 >= row.rhs - slack,
                    Relation::Eq => row.rhs.abs() <= slack,
                };
                if !ok {
                    return Ok(infeasible(&lower, &upper, 0));
                }
            }
            1 => {
                let (j, a) = merged[0];
                let v = row.rhs / a;
                match (row.relation, a > 0.0) {
                    (Relation::Le, true) | (Relation::Ge, false) => upper[j] = upper[j].min(v),
                    (Relation::Le, false) | (Relation::Ge, true) => lower[j] = lower[j].max(v),
                    (Relation::Eq, _) => {
                        upper[j] = upper[j].min(v);
                        lower[j] = lower[j].max(v);
                    }
                }
            }
            _ => kept.push((merged, row.relation, row.rhs)),
        }
    }

    for j in 0..n {
        if lower[j] > upper[j] {
            let scale = 1.0 + lower[j].abs().max(upper[j].abs());
            if lower[j] - upper[j] > opts.feas_tol * scale {
                return Ok(infeasible(&lower, &upper, 0));
            }
            upper[j] = lower[j];
        }
    }

    let m = kept.len();
    // Variable layout: structurals, then one slack per kept row, then
    // artificials for rows whose slack cannot absorb the initial residual.
    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut rhs = Vec::with_capacity(m);
    for (i, (terms, _, b)) in kept.iter().enumerate() {
        for &(j, a) in terms {
            cols[j].push((i, a));
        }
        rhs.push(*b);
    }

    let mut value: Vec<f64> = start_point(&lower, &upper);
    let mut state: Vec<VarState> = (0..n)
        .map(|j| {
            if lower[j].is_finite() {
                VarState::AtLower
            } else if upper[j].is_finite() {
                VarState::AtUpper
            } else {
                VarState::FreeZero
            }
        })
        .collect();

    let mut residual = rhs.clone();
    for j in 0..n {
        if value[j] == 0.0 {
            continue;
        }
        for &(r, a) in &cols[j] {
            residual[r] -= a * value[j];
        }
    }
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut artificials: Vec<usize> = Vec::new();
    let mut is_artificial = vec![false; n];
    for i in 0..m {
        let (slo, sup) = match kept[i].1 {
            Relation::Le => (0.0, f64::INFINITY),
            Relation::Ge => (f64::NEG_INFINITY, 0.0),
            Relation::Eq => (0.0, 0.0),
        };
        let slack = cols.len();
        cols.push(vec![(i, 1.0)]);
        lower.push(slo);
        upper.push(sup);
        is_artificial.push(false);
        let r = residual[i];
        if r >= slo && r <= sup {
            value.push(r);
            state.push(VarState::Basic(i));
            basis.push(slack);
        } else {
            let clamped = r.clamp(slo, sup.max(slo));
            value.push(clamped);
            state.push(if clamped == slo { VarState::AtLower } else { VarState::AtUpper });
            let art = cols.len();
            let gap = r - clamped;
            cols.push(vec![(i, gap.signum())]);
            lower.push(0.0);
            upper.push(f64::INFINITY);
            is_artificial.push(true);
            value.push(gap.abs());
            state.push(VarState::Basic(i));
            basis.push(art);
            artificials.push(art);
        }
    }

    let mut tab = Tableau {
        rhs,
        cols,
        lower,
        upper,
        value,
        state,
        is_artificial,
        basis,
        binv: vec![0.0; m * m],
        m,
        iterations: 0,
        pivots_since_refactor: 0,
    };
    // Initial basis is diagonal (+-1); invert directly.
    for i in 0..m {
        let b = tab.basis[i];
        let d = tab.cols[b][0].1;
        tab.binv[i * m + i] = 1.0 / d;
    }

    // Phase 1.
    if !artificials.is_empty() {
        let mut cost = vec![0.0; tab.nv()];
        for &a in &artificials {
            cost[a] = 1.0;
        }
        match tab.run_phase(&cost, opts, false)? {
            LoopEnd::IterationLimit => {
                return Ok(LpSolution {
                    status: SolveStatus::IterationLimit,
                    values: tab.value[..n].to_vec(),
                    objective: f64::NAN,
                    iterations: tab.iterations,
                });
            }
            LoopEnd::Unbounded => unreachable!("phase 1 objective is bounded below"),
            LoopEnd::Optimal => {}
        }
        let infeas: f64 = artificials.iter().map(|&a| tab.value[a]).sum();
        let rhs_scale = 1.0 + tab.rhs.iter().fold(0.0f64, |acc, b| acc.max(b.abs()));
        if infeas > opts.feas_tol * rhs_scale {
            return Ok(LpSolution {
                status: SolveStatus::Infeasible,
                values: tab.value[..n].to_vec(),
                objective: f64::NAN,
                iterations: tab.iterations,
            });
        }
        // Drive remaining artificials out of the basis where possible, then
        // freeze them at zero. A redundant row may keep its artificial basic.
        let mut w = vec![0.0; m];
        for r in 0..m {
            let b = tab.basis[r];
            if !tab.is_artificial[b] {
                continue;
            }
            let mut found = None;
            for j in 0..tab.nv() {
                if tab.is_artificial[j] || matches!(tab.state[j], VarState::Basic(_)) {
                    continue;
                }
                let mut alpha = 0.0;
                for &(ri, a) in &tab.cols[j] {
                    alpha += tab.binv_at(r, ri) * a;
                }
                if alpha.abs() > 1e-8 {
                    found = Some(j);
                    break;
                }
            }
            if let Some(j) = found {
                tab.ftran(j, &mut w);
                let old = tab.basis[r];
                tab.value[old] = 0.0;
                tab.state[old] = VarState::AtLower;
                let w_copy = w.clone();
                tab.pivot(r, j, &w_copy)?;
                tab.recompute_basic_values();
            }
        }
        for &a in &artificials {
            tab.lower[a] = 0.0;
            tab.upper[a] = 0.0;
            if !matches!(tab.state[a], VarState::Basic(_)) {
                tab.state[a] = VarState::AtLower;
                tab.value[a] = 0.0;
            }
        }
    }

    // Phase 2.
    let mut cost = vec![0.0; tab.nv()];
    cost[..n].copy_from_slice(problem.objective());
    let end = tab.run_phase(&cost, opts, true)?;
    let status = match end {
        LoopEnd::Optimal => SolveStatus::Optimal,
        LoopEnd::Unbounded => SolveStatus::Unbounded,
        LoopEnd::IterationLimit => SolveStatus::IterationLimit,
    };
    if status != SolveStatus::Optimal {
        return Ok(LpSolution {
            status,
            values: tab.value[..n].to_vec(),
            objective: f64::NAN,
            iterations: tab.iterations,
        });
    }

    // Final cleanup: a fresh factorization kills accumulated drift, then
    // tiny bound violations are snapped to the (presolved) bounds.
    tab.refactorize()?;
    for j in 0..n {
        let scale = opts.feas_tol * (1.0 + tab.value[j].abs());
        if tab.value[j] < tab.lower[j] && tab.lower[j] - tab.value[j] <= scale {
            tab.value[j] = tab.lower[j];
        }
        if tab.value[j] > tab.upper[j] && tab.value[j] - tab.upper[j] <= scale {
            tab.value[j] = tab.upper[j];
        }
    }
    let values = tab.value[..n].to_vec();
    let objective = problem.objective_value(&values);
    Ok(LpSolution { status: SolveStatus::Optimal, values, objective, iterations: tab.iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{LpProblem, Relation};
    use approx::assert_abs_diff_eq;

    fn solve_default(p: &LpProblem) -> LpSolution {
        solve(p, &SolveOptions::default()).unwrap()
    }

    #[test]
    fn bound_only_minimum() {
        let mut p = LpProblem::new("bound_only");
        p.add_var("x", 0.0, 5.0, -1.0).unwrap();
        let s = solve_default(&p);
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(s.values[0], 5.0, epsilon = 1e-9);
        assert_abs_diff_eq!(s.objective, -5.0, epsilon = 1e-9);
    }

    #[test]
    fn cover_constraint() {
        let mut p = LpProblem::new("cover");
        let x = p.add_var("x", 0.0, f64::INFINITY, 1.0).unwrap();
        let y = p.add_var("y", 0.0, f64::INFINITY, 1.0).unwrap();
        p.add_row("demand", vec![(x, 1.0), (y, 1.0)], Relation::Ge, 2.0).unwrap();
        let s = solve_default(&p);
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(s.objective, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn detects_infeasible_bounds_via_rows() {
        let mut p = LpProblem::new("infeasible");
        let x = p.add_var("x", 0.0, 1.0, 1.0).unwrap();
        p.add_row("hi", vec![(x, 1.0)], Relation::Ge, 3.0).unwrap();
        let s = solve_default(&p);
        assert_eq!(s.status, SolveStatus::Infeasible);
    }

    #[test]
    fn detects_infeasible_system() {
        let mut p = LpProblem::new("infeasible_sys");
        let x = p.add_var("x", 0.0, 10.0, 0.0).unwrap();
        let y = p.add_var("y", 0.0, 10.0, 0.0).unwrap();
        p.add_row("a", vec![(x, 1.0), (y, 1.0)], Relation::Ge, 15.0).unwrap();
        p.add_row("b", vec![(x, 1.0), (y, 1.0)], Relation::Le, 5.0).unwrap();
        let s = solve_default(&p);
        assert_eq!(s.status, SolveStatus::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        let mut p = LpProblem::new("unbounded");
        p.add_var("x", 0.0, f64::INFINITY, -1.0).unwrap();
        let s = solve_default(&p);
        assert_eq!(s.status, SolveStatus::Unbounded);
    }

    #[test]
    fn equality_with_negative_coefficients() {
        let mut p = LpProblem::new("eq");
        let x = p.add_var("x", -5.0, 5.0, 1.0).unwrap();
        let y = p.add_var("y", -5.0, 5.0, 2.0).unwrap();
        p.add_row("bal", vec![(x, 1.0), (y, -1.0)], Relation::Eq, 3.0).unwrap();
        let s = solve_default(&p);
        assert_eq!(s.status, SolveStatus::Optimal);
        // x - y = 3, minimize x + 2y -> y = -5, x = -2.
        assert_abs_diff_eq!(s.values[0], -2.0, epsilon = 1e-8);
        assert_abs_diff_eq!(s.values[1], -5.0, epsilon = 1e-8);
    }

    #[test]
    fn free_variable() {
        let mut p = LpProblem::new("free");
        let x = p.add_var("x", f64::NEG_INFINITY, f64::INFINITY, 1.0).unwrap();
        p.add_row("lo", vec![(x, 1.0)], Relation::Ge, -7.0).unwrap();
        let s = solve_default(&p);
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(s.values[0], -7.0, epsilon = 1e-8);
    }

    #[test]
    fn duplicate_terms_are_combined() {
        let mut p = LpProblem::new("dup");
        let x = p.add_var("x", 0.0, 10.0, 1.0).unwrap();
        p.add_row("r", vec![(x, 0.5), (x, 0.5)], Relation::Ge, 4.0).unwrap();
        let s = solve_default(&p);
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(s.values[0], 4.0, epsilon = 1e-9);
    }

    #[test]
    fn singleton_rows_fold_to_bounds() {
        let mut p = LpProblem::new("fold");
        let x = p.add_var("x", 0.0, 100.0, -1.0).unwrap();
        for k in 0..1000 {
            p.add_row(format!("cap_{k}"), vec![(x, 1.0)], Relation::Le, 50.0 + k as f64).unwrap();
        }
        let s = solve_default(&p);
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(s.values[0], 50.0, epsilon = 1e-9);
        // Pure bound problems should need no pivots, only flips.
        assert!(s.iterations <= 2);
    }

    #[test]
    fn iteration_limit_is_honest() {
        let mut p = LpProblem::new("limit");
        let x = p.add_var("x", 0.0, f64::INFINITY, 1.0).unwrap();
        let y = p.add_var("y", 0.0, f64::INFINITY, 1.0).unwrap();
        p.add_row("demand", vec![(x, 1.0), (y, 1.0)], Relation::Ge, 2.0).unwrap();
        let opts = SolveOptions { max_iters: 0, ..Default::default() };
        let s = solve(&p, &opts).unwrap();
        assert_eq!(s.status, SolveStatus::IterationLimit);
        assert!(s.objective.is_nan());
    }

    #[test]
    fn deterministic_replay() {
        let mut p = LpProblem::new("det");
        let x = p.add_var("x", 0.0, 4.0, -2.0).unwrap();
        let y = p.add_var("y", 0.0, 4.0, -3.0).unwrap();
        p.add_row("r1", vec![(x, 1.0), (y, 2.0)], Relation::Le, 6.0).unwrap();
        p.add_row("r2", vec![(x, 2.0), (y, 1.0)], Relation::Le, 6.0).unwrap();
        let a = solve_default(&p);
        let b = solve_default(&p);
        assert_eq!(format!("{:?}", a.values), format!("{:?}", b.values));
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Many redundant rows through the same vertex.
        let mut p = LpProblem::new("degen");
        let x = p.add_var("x", 0.0, f64::INFINITY, -1.0).unwrap();
        let y = p.add_var("y", 0.0, f64::INFINITY, -1.0).unwrap();
        for k in 1..=6 {
            let k = k as f64;
            p.add_row(format!("r{k}"), vec![(x, k), (y, k)], Relation::Le, 2.0 * k).unwrap();
        }
        let s = solve_default(&p);
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(s.objective, -2.0, epsilon = 1e-8);
    }
}
