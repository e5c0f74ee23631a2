//! Parses exported LP text back into a problem and checks that the text
//! carries enough information to reproduce the optimum. The parser below is
//! deliberately independent of the exporter so the round trip exercises the
//! format, not shared code.

use apxems_lp::{export_standard, solve, LpProblem, Relation, SolveOptions, SolveStatus, VarId};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

#[derive(Default)]
struct ParsedLp {
    objective: Vec<(String, f64)>,
    rows: Vec<(String, Vec<(String, f64)>, Relation, f64)>,
    bounds: HashMap<String, (f64, f64)>,
}

fn parse_terms(expr: &str) -> Vec<(String, f64)> {
    let mut terms = Vec::new();
    let tokens: Vec<&str> = expr.split_whitespace().collect();
    let mut sign = 1.0;
    let mut pending: Option<f64> = None;
    for tok in tokens {
        match tok {
            "+" => sign = 1.0,
            "-" => sign = -1.0,
            "0" if pending.is_none() => {}
            _ => {
                if let Ok(v) = tok.parse::<f64>() {
                    pending = Some(v);
                } else {
                    let coef = sign * pending.take().unwrap_or(1.0);
                    terms.push((tok.to_string(), coef));
                    sign = 1.0;
                }
            }
        }
    }
    terms
}

fn parse_lp(text: &str) -> ParsedLp {
    let mut parsed = ParsedLp::default();
    let mut section = "";
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('\\') {
            continue;
        }
        match line {
            "Minimize" => {
                section = "obj";
                continue;
            }
            "Subject To" => {
                section = "rows";
                continue;
            }
            "Bounds" => {
                section = "bounds";
                continue;
            }
            "End" => break,
            _ => {}
        }
        match section {
            "obj" => {
                let expr = line.split_once(':').map(|(_, e)| e).unwrap_or(line);
                parsed.objective = parse_terms(expr);
            }
            "rows" => {
                let (name, rest) = line.split_once(':').unwrap();
                let (rel, op_len) = if let Some(i) = rest.find("<=") {
                    ((Relation::Le, i), 2)
                } else if let Some(i) = rest.find(">=") {
                    ((Relation::Ge, i), 2)
                } else {
                    ((Relation::Eq, rest.find('=').unwrap()), 1)
                };
                let (rel, i) = rel;
                let lhs = &rest[..i];
                let rhs: f64 = rest[i + op_len..].trim().parse().unwrap();
                parsed.rows.push((name.trim().to_string(), parse_terms(lhs), rel, rhs));
            }
            "bounds" => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                match toks.as_slice() {
                    [name, "free"] => {
                        parsed
                            .bounds
                            .insert(name.to_string(), (f64::NEG_INFINITY, f64::INFINITY));
                    }
                    [lo, "<=", name, "<=", hi] => {
                        let lower =
                            if *lo == "-inf" { f64::NEG_INFINITY } else { lo.parse().unwrap() };
                        parsed.bounds.insert(name.to_string(), (lower, hi.parse().unwrap()));
                    }
                    [name, ">=", lo] => {
                        parsed
                            .bounds
                            .insert(name.to_string(), (lo.parse().unwrap(), f64::INFINITY));
                    }
                    [name, "=", v] => {
                        let v: f64 = v.parse().unwrap();
                        parsed.bounds.insert(name.to_string(), (v, v));
                    }
                    other => panic!("unparsed bounds line {other:?}"),
                }
            }
            _ => {}
        }
    }
    parsed
}

fn rebuild(parsed: &ParsedLp) -> LpProblem {
    let mut p = LpProblem::new("reimported");
    let mut ids: HashMap<String, VarId> = HashMap::new();
    let mut names: Vec<&String> = parsed.bounds.keys().collect();
    names.sort();
    for name in names {
        let (lo, hi) = parsed.bounds[name];
        let id = p.add_var(name.clone(), lo, hi, 0.0).unwrap();
        ids.insert(name.clone(), id);
    }
    for (name, coef) in &parsed.objective {
        p.set_objective(ids[name], *coef);
    }
    for (name, terms, rel, rhs) in &parsed.rows {
        let terms: Vec<(VarId, f64)> = terms.iter().map(|(n, c)| (ids[n], *c)).collect();
        p.add_row(name.clone(), terms, *rel, *rhs).unwrap();
    }
    p
}

fn random_problem(rng: &mut ChaCha8Rng) -> LpProblem {
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(0..=6);
    let mut p = LpProblem::new("rand");
    let mut ids = Vec::new();
    for j in 0..n {
        let lower = rng.gen_range(-4.0..1.0);
        let upper = lower + rng.gen_range(0.5..6.0);
        ids.push(p.add_var(format!("x{j}"), lower, upper, rng.gen_range(-2.0..2.0)).unwrap());
    }
    for i in 0..m {
        let mut terms = Vec::new();
        for &id in &ids {
            if rng.gen_bool(0.7) {
                terms.push((id, rng.gen_range(-3.0..3.0)));
            }
        }
        if terms.is_empty() {
            continue;
        }
        let rel = if rng.gen_bool(0.5) { Relation::Le } else { Relation::Ge };
        p.add_row(format!("r{i}"), terms, rel, rng.gen_range(-6.0..6.0)).unwrap();
    }
    p
}

#[test]
fn reimported_problems_reproduce_the_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let opts = SolveOptions::default();
    let mut checked = 0;
    for _ in 0..40 {
        let p = random_problem(&mut rng);
        let text = export_standard(&p);
        let reimported = rebuild(&parse_lp(&text));
        let a = solve(&p, &opts).unwrap();
        let b = solve(&reimported, &opts).unwrap();
        assert_eq!(a.status, b.status, "status diverged for:\n{text}");
        if a.status == SolveStatus::Optimal {
            let scale = 1.0 + a.objective.abs();
            assert!(
                (a.objective - b.objective).abs() <= 1e-9 * scale,
                "objective diverged: {} vs {}\n{text}",
                a.objective,
                b.objective
            );
            checked += 1;
        }
    }
    assert!(checked > 5);
}
