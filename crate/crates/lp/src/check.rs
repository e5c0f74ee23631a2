use crate::error::LpError;
use crate::problem::{LpProblem, Relation};

/// Worst-case constraint residuals of a candidate point.
///
/// Violations are positive; negative values mean the worst bound or row
/// still has slack. Equality rows always contribute their absolute
/// residual.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub max_bound_violation: f64,
    pub max_row_violation: f64,
    /// Name of the variable with the worst bound residual, if any variable exists.
    pub worst_bound: Option<String>,
    /// Name of the row with the worst residual, if any row exists.
    pub worst_row: Option<String>,
}

impl ResidualReport {
    pub fn within(&self, tol: f64) -> bool {
        self.max_bound_violation <= tol && self.max_row_violation <= tol
    }
}

/// Evaluate how far `point` is from satisfying the problem's bounds and rows.
pub fn check_point(problem: &LpProblem, point: &[f64]) -> Result<ResidualReport, LpError> {
    if point.len() != problem.num_vars() {
        return Err(LpError::DimensionMismatch {
            expected: problem.num_vars(),
            got: point.len(),
        });
    }
    let mut max_bound = f64::NEG_INFINITY;
    let mut worst_bound = None;
    for (v, &x) in problem.vars().iter().zip(point) {
        let residual = (v.lower - x).max(x - v.upper);
        if residual > max_bound {
            max_bound = residual;
            worst_bound = Some(v.name.clone());
        }
    }
    let mut max_row = f64::NEG_INFINITY;
    let mut worst_row = None;
    for row in problem.rows() {
        let lhs: f64 = row.terms.iter().map(|&(id, c)| c * point[id.0]).sum();
        let residual = match row.relation {
            Relation::Le => lhs - row.rhs,
            Relation::Ge => row.rhs - lhs,
            Relation::Eq => (lhs - row.rhs).abs(),
        };
        if residual > max_row {
            max_row = residual;
            worst_row = Some(row.name.clone());
        }
    }
    Ok(ResidualReport {
        max_bound_violation: if max_bound.is_finite() { max_bound } else { 0.0 },
        max_row_violation: if max_row.is_finite() { max_row } else { 0.0 },
        worst_bound,
        worst_row,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{LpProblem, Relation};
    use crate::simplex::{solve, SolveOptions};
    use approx::assert_abs_diff_eq;

    fn toy() -> LpProblem {
        let mut p = LpProblem::new("toy");
        let x = p.add_var("x", 0.0, f64::INFINITY, 1.0).unwrap();
        let y = p.add_var("y", 0.0, f64::INFINITY, 1.0).unwrap();
        p.add_row("demand", vec![(x, 1.0), (y, 1.0)], Relation::Ge, 2.0).unwrap();
        p
    }

    #[test]
    fn optimal_point_has_small_residuals() {
        let p = toy();
        let s = solve(&p, &SolveOptions::default()).unwrap();
        let report = check_point(&p, &s.values).unwrap();
        assert!(report.within(1e-7), "report: {report:?}");
    }

    #[test]
    fn zero_point_reports_violated_demand_row() {
        let p = toy();
        let report = check_point(&p, &[0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(report.max_row_violation, 2.0, epsilon = 1e-12);
        assert_eq!(report.worst_row.as_deref(), Some("demand"));
    }

    #[test]
    fn perturbed_optimum_shows_linear_residual() {
        let mut p = LpProblem::new("eq");
        let x = p.add_var("x", 0.0, 10.0, 1.0).unwrap();
        p.add_row("pin", vec![(x, 1.0)], Relation::Eq, 4.0).unwrap();
        let report = check_point(&p, &[4.0 + 1e-3]).unwrap();
        assert_abs_diff_eq!(report.max_row_violation, 1e-3, epsilon = 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let p = toy();
        assert!(check_point(&p, &[1.0]).is_err());
    }
}
