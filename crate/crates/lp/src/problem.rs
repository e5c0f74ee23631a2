use crate::error::LpError;

/// Handle of a declared variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarId(pub usize);

/// A decision variable with box bounds. Infinite bounds are allowed.
#[derive(Clone, Debug)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
}

/// Constraint sense.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

/// A sparse constraint row `sum(coef * var) relation rhs`.
#[derive(Clone, Debug)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A minimization problem over bounded variables with sparse rows.
///
/// Variable and row names double as model metadata: builders name them
/// after the balance or limit they encode, which keeps exported files
/// and residual reports readable.
#[derive(Clone, Debug, Default)]
pub struct LpProblem {
    pub name: String,
    vars: Vec<Variable>,
    objective: Vec<f64>,
    rows: Vec<Row>,
}

impl LpProblem {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), ..Self::default() }
    }

    /// Declare a variable with bounds and objective coefficient.
    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        lower: f64,
        upper: f64,
        objective: f64,
    ) -> Result<VarId, LpError> {
        let name = name.into();
        if lower > upper {
            return Err(LpError::BadBounds { name, lower, upper });
        }
        if lower.is_nan() || upper.is_nan() {
            return Err(LpError::BadBounds { name, lower, upper });
        }
        if !objective.is_finite() {
            return Err(LpError::NonFinite { context: name, value: objective });
        }
        let id = VarId(self.vars.len());
        self.vars.push(Variable { name, lower, upper });
        self.objective.push(objective);
        Ok(id)
    }

    /// Add a constraint row. Duplicate variable references are allowed and
    /// combined by the solver.
    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(VarId, f64)>,
        relation: Relation,
        rhs: f64,
    ) -> Result<(), LpError> {
        let name = name.into();
        if !rhs.is_finite() {
            return Err(LpError::NonFinite { context: name, value: rhs });
        }
        for &(id, coef) in &terms {
            if id.0 >= self.vars.len() {
                return Err(LpError::UnknownVariable { row: name, index: id.0 });
            }
            if !coef.is_finite() {
                return Err(LpError::NonFinite { context: name, value: coef });
            }
        }
        self.rows.push(Row { name, terms, relation, rhs });
        Ok(())
    }

    /// Shrink a variable's upper bound; keeps the tighter of old and new.
    pub fn tighten_upper(&mut self, id: VarId, upper: f64) {
        let v = &mut self.vars[id.0];
        if upper < v.upper {
            v.upper = upper;
        }
    }

    /// Raise a variable's lower bound; keeps the tighter of old and new.
    pub fn tighten_lower(&mut self, id: VarId, lower: f64) {
        let v = &mut self.vars[id.0];
        if lower > v.lower {
            v.lower = lower;
        }
    }

    pub fn set_objective(&mut self, id: VarId, coefficient: f64) {
        self.objective[id.0] = coefficient;
    }

    pub fn add_objective(&mut self, id: VarId, coefficient: f64) {
        self.objective[id.0] += coefficient;
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    /// Objective value of an arbitrary point.
    pub fn objective_value(&self, point: &[f64]) -> f64 {
        self.objective.iter().zip(point).map(|(c, x)| c * x).sum()
    }

    /// Check that bounds are ordered; used before solving.
    pub(crate) fn validate(&self) -> Result<(), LpError> {
        for v in &self.vars {
            if v.lower > v.upper {
                return Err(LpError::BadBounds {
                    name: v.name.clone(),
                    lower: v.lower,
                    upper: v.upper,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_crossed_bounds() {
        let mut p = LpProblem::new("t");
        assert!(p.add_var("x", 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn rejects_unknown_variable_in_row() {
        let mut p = LpProblem::new("t");
        let x = p.add_var("x", 0.0, 1.0, 1.0).unwrap();
        assert!(p.add_row("r", vec![(VarId(x.0 + 1), 1.0)], Relation::Le, 1.0).is_err());
    }

    #[test]
    fn tighten_keeps_tighter_bound() {
        let mut p = LpProblem::new("t");
        let x = p.add_var("x", 0.0, 10.0, 0.0).unwrap();
        p.tighten_upper(x, 4.0);
        p.tighten_upper(x, 7.0);
        p.tighten_lower(x, 2.0);
        p.tighten_lower(x, 1.0);
        assert_eq!(p.var(x).upper, 4.0);
        assert_eq!(p.var(x).lower, 2.0);
    }
}
