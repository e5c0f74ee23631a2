//! Deterministic LP-format text export.
//!
//! The emitted dialect is the widely-supported CPLEX LP file format:
//! an objective section, `Subject To` rows, a `Bounds` section with one
//! line per variable, and `End`. Numbers use the shortest representation
//! that round-trips through f64, so identical problems export to
//! byte-identical files.

use crate::problem::LpProblem;
use std::fmt::Write;

fn push_terms(out: &mut String, terms: &[(usize, f64)], names: &[String]) {
    let mut first = true;
    for &(j, c) in terms {
        if c == 0.0 {
            continue;
        }
        if first {
            if c < 0.0 {
                out.push_str("- ");
            }
            first = false;
        } else {
            out.push_str(if c < 0.0 { " - " } else { " + " });
        }
        let mag = c.abs();
        if mag == 1.0 {
            out.push_str(&names[j]);
        } else {
            write!(out, "{} {}", mag, names[j]).unwrap();
        }
    }
    if first {
        out.push('0');
    }
}

/// Render the problem as LP-format text.
pub fn export_standard(problem: &LpProblem) -> String {
    let names: Vec<String> = problem.vars().iter().map(|v| v.name.clone()).collect();
    let mut out = String::new();
    writeln!(out, "\\ Problem: {}", problem.name).unwrap();
    out.push_str("Minimize\n obj: ");
    let obj_terms: Vec<(usize, f64)> =
        problem.objective().iter().enumerate().map(|(j, &c)| (j, c)).collect();
    push_terms(&mut out, &obj_terms, &names);
    out.push('\n');
    out.push_str("Subject To\n");
    for row in problem.rows() {
        write!(out, " {}: ", row.name).unwrap();
        let terms: Vec<(usize, f64)> = row.terms.iter().map(|&(id, c)| (id.0, c)).collect();
        push_terms(&mut out, &terms, &names);
        writeln!(out, " {} {}", row.relation.symbol(), row.rhs).unwrap();
    }
    out.push_str("Bounds\n");
    for v in problem.vars() {
        match (v.lower.is_finite(), v.upper.is_finite()) {
            (true, true) if v.lower == v.upper => {
                writeln!(out, " {} = {}", v.name, v.lower).unwrap()
            }
            (true, true) => writeln!(out, " {} <= {} <= {}", v.lower, v.name, v.upper).unwrap(),
            (true, false) => writeln!(out, " {} >= {}", v.name, v.lower).unwrap(),
            (false, true) => {
                writeln!(out, " -inf <= {} <= {}", v.name, v.upper).unwrap()
            }
            (false, false) => writeln!(out, " {} free", v.name).unwrap(),
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{LpProblem, Relation};

    fn sample() -> LpProblem {
        let mut p = LpProblem::new("sample");
        let x = p.add_var("x", 0.0, 5.0, 1.0).unwrap();
        let y = p.add_var("y", 0.0, f64::INFINITY, -0.5).unwrap();
        p.add_row("r1", vec![(x, 1.0), (y, -2.0)], Relation::Le, 4.0).unwrap();
        p
    }

    #[test]
    fn one_bounds_line_per_variable() {
        let p = sample();
        let text = export_standard(&p);
        let bounds: Vec<&str> = text
            .lines()
            .skip_while(|l| *l != "Bounds")
            .skip(1)
            .take_while(|l| *l != "End")
            .collect();
        assert_eq!(bounds.len(), p.num_vars());
        assert!(bounds[0].contains("0 <= x <= 5"));
        assert!(bounds[1].contains("y >= 0"));
    }

    #[test]
    fn export_is_byte_deterministic() {
        let p = sample();
        assert_eq!(export_standard(&p), export_standard(&p));
    }

    #[test]
    fn sections_in_order() {
        let text = export_standard(&sample());
        let min = text.find("Minimize").unwrap();
        let sub = text.find("Subject To").unwrap();
        let bnd = text.find("Bounds").unwrap();
        let end = text.find("End").unwrap();
        assert!(min < sub && sub < bnd && bnd < end);
    }
}
