//! Exhaustive reference solver for tiny problems.
//!
//! Enumerates every candidate vertex of the feasible polytope (all ways of
//! making `n` constraints active among rows and variable bounds) and takes
//! the best feasible one. Complexity is combinatorial, so this is strictly
//! a cross-check oracle for the test suites: it shares no code with the
//! simplex path. All variable bounds must be finite.

use crate::problem::{LpProblem, Relation};

/// Result of brute-force vertex enumeration.
#[derive(Clone, Debug)]
pub struct BruteForce {
    pub feasible: bool,
    pub objective: f64,
    pub point: Vec<f64>,
}

/// Solve `problem` by vertex enumeration. Panics if any bound is infinite
/// (a bounded box is what makes the enumeration complete).
pub fn brute_force_solve(problem: &LpProblem, tol: f64) -> BruteForce {
    let n = problem.num_vars();
    let m = problem.num_rows();
    for v in problem.vars() {
        assert!(
            v.lower.is_finite() && v.upper.is_finite(),
            "brute force oracle requires finite bounds, got {:?}",
            v
        );
    }

    let rows: Vec<(Vec<f64>, Relation, f64)> = problem
        .rows()
        .iter()
        .map(|r| {
            let mut dense = vec![0.0; n];
            for &(id, c) in &r.terms {
                dense[id.0] += c;
            }
            (dense, r.relation, r.rhs)
        })
        .collect();

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut row_subset = Vec::new();
    let mut consider = |point: &[f64]| {
        if !is_feasible(problem, &rows, point, tol) {
            return;
        }
        let obj = problem.objective_value(point);
        if best.as_ref().map_or(true, |(b, _)| obj < *b) {
            best = Some((obj, point.to_vec()));
        }
    };

    // k rows active, n - k variables pinned at a bound.
    let kmax = m.min(n);
    for k in 0..=kmax {
        row_subset.clear();
        enumerate_row_subsets(m, k, &mut row_subset, 0, &mut |active_rows| {
            let free_count = k;
            enumerate_bound_assignments(problem, n, n - free_count, &mut |fixed| {
                if let Some(point) = solve_active_system(n, &rows, active_rows, fixed) {
                    consider(&point);
                }
            });
        });
    }

    match best {
        Some((objective, point)) => BruteForce { feasible: true, objective, point },
        None => BruteForce { feasible: false, objective: f64::NAN, point: vec![] },
    }
}

fn is_feasible(
    problem: &LpProblem,
    rows: &[(Vec<f64>, Relation, f64)],
    point: &[f64],
    tol: f64,
) -> bool {
    for (v, &x) in problem.vars().iter().zip(point) {
        let scale = 1.0 + v.lower.abs().max(v.upper.abs());
        if x < v.lower - tol * scale || x > v.upper + tol * scale {
            return false;
        }
    }
    for (dense, rel, rhs) in rows {
        let lhs: f64 = dense.iter().zip(point).map(|(c, x)| c * x).sum();
        let scale = 1.0 + rhs.abs();
        let ok = match rel {
            Relation::Le => lhs <= rhs + tol * scale,
            Relation::Ge => lhs >= rhs - tol * scale,
            Relation::Eq => (lhs - rhs).abs() <= tol * scale,
        };
        if !ok {
            return false;
        }
    }
    true
}

fn enumerate_row_subsets(
    m: usize,
    k: usize,
    current: &mut Vec<usize>,
    start: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if current.len() == k {
        visit(current);
        return;
    }
    for i in start..m {
        current.push(i);
        enumerate_row_subsets(m, k, current, i + 1, visit);
        current.pop();
    }
}

/// Visit every way of pinning `fix_count` variables at one of their bounds.
/// The callback receives, per variable, `None` (left free) or the pinned value.
fn enumerate_bound_assignments(
    problem: &LpProblem,
    n: usize,
    fix_count: usize,
    visit: &mut impl FnMut(&[Option<f64>]),
) {
    let mut assignment: Vec<Option<f64>> = vec![None; n];
    fn recurse(
        problem: &LpProblem,
        assignment: &mut Vec<Option<f64>>,
        idx: usize,
        remaining: usize,
        visit: &mut impl FnMut(&[Option<f64>]),
    ) {
        let n = assignment.len();
        if remaining == 0 {
            visit(assignment);
            return;
        }
        if idx >= n || n - idx < remaining {
            return;
        }
        // Skip this variable.
        recurse(problem, assignment, idx + 1, remaining, visit);
        // Pin it at lower, then (if distinct) upper.
        let v = problem.var(crate::problem::VarId(idx));
        assignment[idx] = Some(v.lower);
        recurse(problem, assignment, idx + 1, remaining - 1, visit);
        if v.upper != v.lower {
            assignment[idx] = Some(v.upper);
            recurse(problem, assignment, idx + 1, remaining - 1, visit);
        }
        assignment[idx] = None;
    }
    recurse(problem, &mut assignment, 0, fix_count, visit);
}

/// Solve the k x k linear system of the chosen active rows over the free
/// variables. Returns None when the system is (near-)singular.
fn solve_active_system(
    n: usize,
    rows: &[(Vec<f64>, Relation, f64)],
    active_rows: &[usize],
    fixed: &[Option<f64>],
) -> Option<Vec<f64>> {
    let free: Vec<usize> = (0..n).filter(|&j| fixed[j].is_none()).collect();
    let k = free.len();
    if k != active_rows.len() {
        return None;
    }
    if k == 0 {
        return Some(fixed.iter().map(|v| v.unwrap()).collect());
    }
    let mut a = vec![0.0; k * k];
    let mut b = vec![0.0; k];
    for (ri, &row_idx) in active_rows.iter().enumerate() {
        let (dense, _, rhs) = &rows[row_idx];
        let mut adj = *rhs;
        for j in 0..n {
            if let Some(v) = fixed[j] {
                adj -= dense[j] * v;
            }
        }
        b[ri] = adj;
        for (ci, &j) in free.iter().enumerate() {
            a[ri * k + ci] = dense[j];
        }
    }
    let x = gauss_solve(&mut a, &mut b, k)?;
    let mut point: Vec<f64> = fixed.iter().map(|v| v.unwrap_or(0.0)).collect();
    for (ci, &j) in free.iter().enumerate() {
        point[j] = x[ci];
    }
    Some(point)
}

fn gauss_solve(a: &mut [f64], b: &mut [f64], k: usize) -> Option<Vec<f64>> {
    let mut scale = 0.0f64;
    for v in a.iter() {
        scale = scale.max(v.abs());
    }
    let singular_tol = 1e-10 * (1.0 + scale);
    for col in 0..k {
        let mut piv = col;
        let mut best = a[col * k + col].abs();
        for r in col + 1..k {
            let v = a[r * k + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < singular_tol {
            return None;
        }
        if piv != col {
            for c in 0..k {
                a.swap(col * k + c, piv * k + c);
            }
            b.swap(col, piv);
        }
        for r in col + 1..k {
            let f = a[r * k + col] / a[col * k + col];
            if f == 0.0 {
                continue;
            }
            for c in col..k {
                a[r * k + c] -= f * a[col * k + c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; k];
    for col in (0..k).rev() {
        let mut v = b[col];
        for c in col + 1..k {
            v -= a[col * k + c] * x[c];
        }
        x[col] = v / a[col * k + col];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{LpProblem, Relation};
    use approx::assert_abs_diff_eq;

    #[test]
    fn matches_hand_solved_triangle() {
        // min -x - y over x,y in [0,3], x + y <= 4: optimum at (3,1) or (1,3).
        let mut p = LpProblem::new("tri");
        let x = p.add_var("x", 0.0, 3.0, -1.0).unwrap();
        let y = p.add_var("y", 0.0, 3.0, -1.0).unwrap();
        p.add_row("cap", vec![(x, 1.0), (y, 1.0)], Relation::Le, 4.0).unwrap();
        let r = brute_force_solve(&p, 1e-9);
        assert!(r.feasible);
        assert_abs_diff_eq!(r.objective, -4.0, epsilon = 1e-9);
    }

    #[test]
    fn reports_infeasible_box() {
        let mut p = LpProblem::new("empty");
        let x = p.add_var("x", 0.0, 1.0, 1.0).unwrap();
        p.add_row("hi", vec![(x, 1.0)], Relation::Ge, 2.0).unwrap();
        let r = brute_force_solve(&p, 1e-9);
        assert!(!r.feasible);
    }
}
