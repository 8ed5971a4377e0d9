use super::*;
use crate::testkit::TestRng;

use lp_fixtures::LP_FIXTURES;

fn solve_default(model: &MilpModel) -> MilpSolution {
    solve(model, &SolverConfig::exact()).expect("solve failed")
}

#[test]
fn single_bound_active() {
    let mut m = MilpModel::new("t", Direction::Minimize);
    let x = m.add_var("x".into(), VarKind::Continuous, f64::NEG_INFINITY, f64::INFINITY);
    m.add_obj(x, 1.0);
    m.add_constraint("lb".into(), &[(x, 1.0)], Sense::Ge, 3.0);
    let s = solve_default(&m);
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.objective - 3.0).abs() < 1e-9);
    assert!((s.values[0] - 3.0).abs() < 1e-9);
}

#[test]
fn two_binaries_with_budget() {
    // min -x-y with x+y <= 1: enumerating the four binary points gives -1.
    let mut m = MilpModel::new("t", Direction::Minimize);
    let x = m.add_binary("x".into());
    let y = m.add_binary("y".into());
    m.add_obj(x, -1.0);
    m.add_obj(y, -1.0);
    m.add_constraint("budget".into(), &[(x, 1.0), (y, 1.0)], Sense::Le, 1.0);
    let s = solve_default(&m);
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.objective + 1.0).abs() < 1e-9);
}

#[test]
fn empty_feasible_set() {
    let mut m = MilpModel::new("t", Direction::Minimize);
    let x = m.add_var("x".into(), VarKind::Continuous, f64::NEG_INFINITY, f64::INFINITY);
    m.add_obj(x, 1.0);
    m.add_constraint("a".into(), &[(x, 1.0)], Sense::Le, 0.0);
    m.add_constraint("b".into(), &[(x, 1.0)], Sense::Ge, 1.0);
    let s = solve_default(&m);
    assert_eq!(s.status, SolveStatus::Infeasible);
}

#[test]
fn unbounded_direction() {
    let mut m = MilpModel::new("t", Direction::Minimize);
    let x = m.add_var("x".into(), VarKind::Continuous, 0.0, f64::INFINITY);
    m.add_obj(x, -1.0);
    m.add_constraint("r".into(), &[(x, -1.0)], Sense::Le, 0.0);
    let s = solve_default(&m);
    assert_eq!(s.status, SolveStatus::Unbounded);
}

#[test]
fn pure_box_lp_without_rows() {
    let mut m = MilpModel::new("t", Direction::Minimize);
    let x = m.add_var("x".into(), VarKind::Continuous, -2.0, 5.0);
    let y = m.add_var("y".into(), VarKind::Continuous, -1.0, 4.0);
    m.add_obj(x, 1.0);
    m.add_obj(y, -2.0);
    let s = solve_default(&m);
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.objective - (-2.0 - 8.0)).abs() < 1e-9);
}

#[test]
fn maximization_flips_sign_correctly() {
    let mut m = MilpModel::new("t", Direction::Maximize);
    let x = m.add_var("x".into(), VarKind::Continuous, 0.0, 2.0);
    m.add_obj(x, 3.0);
    m.add_constraint("cap".into(), &[(x, 1.0)], Sense::Le, 1.5);
    let s = solve_default(&m);
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.objective - 4.5).abs() < 1e-9);
}

#[test]
fn check_feasible_reports_each_violation_kind() {
    let mut m = MilpModel::new("t", Direction::Minimize);
    let x = m.add_var("x".into(), VarKind::Continuous, f64::NEG_INFINITY, f64::INFINITY);
    let b = m.add_binary("b".into());
    m.add_constraint("r".into(), &[(x, 1.0)], Sense::Ge, 3.0);

    let v = m.check_feasible(&[2.9, 0.5], 1e-6).unwrap();
    assert_eq!(v.len(), 2);
    assert!(v.iter().any(|w| matches!(w, Violation::Integrality { var, .. } if *var == b)));
    let row_amount = v
        .iter()
        .find_map(|w| match w {
            Violation::Row { amount, .. } => Some(*amount),
            _ => None,
        })
        .unwrap();
    assert!((row_amount - 0.1).abs() < 1e-12);

    // Optimal assignments vet clean.
    m.add_obj(x, 1.0);
    let s = solve_default(&m);
    assert!(m.check_feasible(&s.values, 1e-6).unwrap().is_empty());

    assert!(matches!(
        m.check_feasible(&[1.0], 1e-6),
        Err(MilpError::AssignmentSize { .. })
    ));
}

#[test]
fn frozen_lp_fixtures_match_reference_solver() {
    for (idx, fx) in LP_FIXTURES.iter().enumerate() {
        let mut m = MilpModel::new("fixture", Direction::Minimize);
        let vars: Vec<VarId> = (0..fx.cost.len())
            .map(|j| {
                m.add_var(format!("x{}", j), VarKind::Continuous, fx.lower[j], fx.upper[j])
            })
            .collect();
        for (j, &c) in fx.cost.iter().enumerate() {
            m.add_obj(vars[j], c);
        }
        for (i, (coefs, sense, rhs)) in fx.rows.iter().enumerate() {
            let terms: Vec<(VarId, f64)> =
                coefs.iter().enumerate().map(|(j, &c)| (vars[j], c)).collect();
            m.add_constraint(format!("c{}", i), &terms, *sense, *rhs);
        }
        let s = solve_default(&m);
        assert_eq!(s.status, SolveStatus::Optimal, "fixture {}", idx);
        let scale = fx.expected.abs().max(1.0);
        assert!(
            (s.objective - fx.expected).abs() <= 1e-7 * scale,
            "fixture {}: got {} expected {}",
            idx,
            s.objective,
            fx.expected
        );
        assert!(m.check_feasible(&s.values, 1e-6).unwrap().is_empty(), "fixture {}", idx);
    }
}

/// Primal: min c'x st Ax >= b, x >= 0 with c >= 0.
/// Dual:   max b'y st A'y <= c, y >= 0.
/// Optima must agree on feasible bounded instances.
#[test]
fn lp_duality_on_random_instances() {
    let mut rng = TestRng(0x5eed);
    for _case in 0..60 {
        let n = 2 + rng.below(5);
        let m_rows = 1 + rng.below(5);
        let a: Vec<Vec<f64>> = (0..m_rows)
            .map(|_| (0..n).map(|_| rng.range(-2.0, 3.0)).collect())
            .collect();
        let x0: Vec<f64> = (0..n).map(|_| rng.range(0.0, 2.0)).collect();
        let b: Vec<f64> = a
            .iter()
            .map(|row| {
                let act: f64 = row.iter().zip(&x0).map(|(r, x)| r * x).sum();
                act - rng.range(0.0, 1.0)
            })
            .collect();
        let c: Vec<f64> = (0..n).map(|_| rng.range(0.0, 4.0)).collect();

        let mut primal = MilpModel::new("primal", Direction::Minimize);
        let xs: Vec<VarId> = (0..n)
            .map(|j| primal.add_var(format!("x{}", j), VarKind::Continuous, 0.0, f64::INFINITY))
            .collect();
        for (j, &cj) in c.iter().enumerate() {
            primal.add_obj(xs[j], cj);
        }
        for (i, row) in a.iter().enumerate() {
            let terms: Vec<(VarId, f64)> =
                row.iter().enumerate().map(|(j, &v)| (xs[j], v)).collect();
            primal.add_constraint(format!("r{}", i), &terms, Sense::Ge, b[i]);
        }

        let mut dual = MilpModel::new("dual", Direction::Maximize);
        let ys: Vec<VarId> = (0..m_rows)
            .map(|i| dual.add_var(format!("y{}", i), VarKind::Continuous, 0.0, f64::INFINITY))
            .collect();
        for (i, &bi) in b.iter().enumerate() {
            dual.add_obj(ys[i], bi);
        }
        for j in 0..n {
            let terms: Vec<(VarId, f64)> = (0..m_rows).map(|i| (ys[i], a[i][j])).collect();
            dual.add_constraint(format!("d{}", j), &terms, Sense::Le, c[j]);
        }

        let ps = solve_default(&primal);
        let ds = solve_default(&dual);
        assert_eq!(ps.status, SolveStatus::Optimal);
        assert_eq!(ds.status, SolveStatus::Optimal);
        let scale = ps.objective.abs().max(1.0);
        assert!(
            (ps.objective - ds.objective).abs() <= 1e-6 * scale,
            "duality gap: primal {} dual {}",
            ps.objective,
            ds.objective
        );
    }
}

pub(crate) fn random_milp(rng: &mut TestRng, max_binaries: usize) -> MilpModel {
    let nb = 1 + rng.below(max_binaries);
    let nc = rng.below(3);
    let mut m = MilpModel::new("rand", Direction::Minimize);
    let mut vars = Vec::new();
    for j in 0..nb {
        vars.push(m.add_binary(format!("b{}", j)));
    }
    for j in 0..nc {
        vars.push(m.add_var(format!("c{}", j), VarKind::Continuous, -3.0, 3.0));
    }
    for v in &vars {
        m.add_obj(*v, rng.range(-5.0, 5.0));
    }
    let rows = 1 + rng.below(4);
    for i in 0..rows {
        let mut terms: Vec<(VarId, f64)> = Vec::new();
        for &v in &vars {
            if rng.uniform() < 0.7 {
                terms.push((v, rng.range(-3.0, 3.0)));
            }
        }
        if terms.is_empty() {
            continue;
        }
        let sense = match rng.below(6) {
            0 => Sense::Eq,
            1 | 2 => Sense::Ge,
            _ => Sense::Le,
        };
        let rhs = rng.range(-2.0, 4.0);
        m.add_constraint(format!("r{}", i), &terms, sense, rhs);
    }
    m
}

/// Exhaustive oracle: complete every binary assignment by an LP solve.
pub(crate) fn enumerate_milp(model: &MilpModel) -> (SolveStatus, f64) {
    let binaries: Vec<usize> = model
        .vars()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.kind == VarKind::Binary)
        .map(|(j, _)| j)
        .collect();
    let k = binaries.len();
    assert!(k <= 16);
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << k) {
        let mut fixed = model.clone();
        let mut skip = false;
        for (pos, &j) in binaries.iter().enumerate() {
            let bit = (mask >> pos) & 1;
            let v = bit as f64;
            let var = &model.vars()[j];
            if v < var.lower || v > var.upper {
                skip = true;
                break;
            }
            let name = var.name.clone();
            // Fix through equality rows so variable bounds stay untouched.
            fixed.add_constraint(format!("fix_{}", name), &[(VarId(j), 1.0)], Sense::Eq, v);
        }
        if skip {
            continue;
        }
        let s = solve(&fixed, &SolverConfig::exact()).unwrap();
        match s.status {
            SolveStatus::Optimal => {
                let sign = if model.direction == Direction::Maximize { -1.0 } else { 1.0 };
                let canon = sign * s.objective;
                if best.map_or(true, |b| canon < b) {
                    best = Some(canon);
                }
            }
            SolveStatus::Unbounded => return (SolveStatus::Unbounded, f64::NEG_INFINITY),
            _ => {}
        }
    }
    match best {
        Some(v) => {
            let sign = if model.direction == Direction::Maximize { -1.0 } else { 1.0 };
            (SolveStatus::Optimal, sign * v)
        }
        None => (SolveStatus::Infeasible, f64::INFINITY),
    }
}

#[test]
fn branch_and_bound_matches_enumeration() {
    let mut rng = TestRng(0xabcd);
    let mut optimal_seen = 0;
    for case in 0..40 {
        let m = random_milp(&mut rng, 8);
        let s = solve(&m, &SolverConfig::exact()).unwrap();
        let (estatus, evalue) = enumerate_milp(&m);
        assert_eq!(s.status, estatus, "case {}", case);
        if estatus == SolveStatus::Optimal {
            optimal_seen += 1;
            let scale = evalue.abs().max(1.0);
            assert!(
                (s.objective - evalue).abs() <= 1e-6 * scale,
                "case {}: bb {} enum {}",
                case,
                s.objective,
                evalue
            );
            assert!(m.check_feasible(&s.values, 1e-6).unwrap().is_empty());
        }
    }
    assert!(optimal_seen > 10, "generator produced too few solvable cases");
}

#[test]
fn identical_inputs_yield_identical_solutions() {
    let mut rng = TestRng(77);
    let m = random_milp(&mut rng, 8);
    let a = solve(&m, &SolverConfig::default()).unwrap();
    let b = solve(&m, &SolverConfig::default()).unwrap();
    assert_eq!(a.status, b.status);
    assert_eq!(a.objective.to_bits(), b.objective.to_bits());
    for (x, y) in a.values.iter().zip(&b.values) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
}

#[test]
fn node_limit_reports_iteration_limit() {
    // A knapsack with an LP optimum far from integral so one node cannot
    // close the search.
    let mut m = MilpModel::new("t", Direction::Minimize);
    let vars: Vec<VarId> = (0..6).map(|j| m.add_binary(format!("b{}", j))).collect();
    for (j, v) in vars.iter().enumerate() {
        m.add_obj(*v, -(3.0 + j as f64 * 0.7));
    }
    let terms: Vec<(VarId, f64)> = vars.iter().map(|&v| (v, 2.5)).collect();
    m.add_constraint("cap".into(), &terms, Sense::Le, 7.9);
    let cfg = SolverConfig {
        node_limit: Some(1),
        ..SolverConfig::default()
    };
    let s = solve(&m, &cfg).unwrap();
    assert_eq!(s.status, SolveStatus::IterationLimit);
}

#[test]
fn malformed_models_are_hard_errors() {
    let mut m = MilpModel::new("t", Direction::Minimize);
    m.add_var("b".into(), VarKind::Binary, 0.0, 2.0);
    assert!(matches!(
        solve(&m, &SolverConfig::default()),
        Err(MilpError::Malformed(_))
    ));

    let mut m2 = MilpModel::new("t", Direction::Minimize);
    let x = m2.add_var("x".into(), VarKind::Continuous, 0.0, 1.0);
    m2.add_constraint("r".into(), &[(x, 1.0), (VarId(9), 1.0)], Sense::Le, 1.0);
    assert!(matches!(
        solve(&m2, &SolverConfig::default()),
        Err(MilpError::Malformed(_))
    ));
}

#[test]
fn external_backend_is_a_seam_not_a_dependency() {
    struct FixedAnswer;
    impl MilpBackend for FixedAnswer {
        fn solve(&self, model: &MilpModel, _c: &SolverConfig) -> Result<MilpSolution, MilpError> {
            Ok(MilpSolution {
                status: SolveStatus::Optimal,
                objective: 42.0,
                values: alloc::vec![0.0; model.num_vars()],
                gap: 0.0,
            })
        }
    }
    let m = MilpModel::new("t", Direction::Minimize);
    let cfg = SolverConfig {
        backend: BackendKind::External,
        ..SolverConfig::default()
    };
    assert!(matches!(solve(&m, &cfg), Err(MilpError::NoExternalBackend)));
    let ext = FixedAnswer;
    assert_eq!(ext.solve(&m, &cfg).unwrap().objective, 42.0);
}

#[test]
fn lp_format_preserves_names() {
    let mut m = MilpModel::new("demo", Direction::Minimize);
    let x = m.add_var("prod_g1_t1".into(), VarKind::Continuous, 0.0, 10.0);
    let b = m.add_binary("on_g1_t1".into());
    m.add_obj(x, 2.0);
    m.add_constraint("balance_t1".into(), &[(x, 1.0), (b, -3.0)], Sense::Eq, 1.0);
    let dump = m.to_lp_format();
    assert!(dump.contains("balance_t1:"));
    assert!(dump.contains("prod_g1_t1"));
    assert!(dump.contains("Binaries"));
    assert!(dump.lines().any(|l| l.contains("on_g1_t1") && l.contains("-3")));
}
