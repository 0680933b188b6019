use mecgrid::analysis::{compute_metrics, remove_storage, sweep, weymouth_error};
use mecgrid::builder::{Entity, Quantity};
use mecgrid::io::fixtures::{case1, case2, case3, toy_case};
use mecgrid::io::{parse_case_str, serialize_case};
use mecgrid::model::MicrogridCase;
use mecgrid::solver::MilpStatus;
use mecgrid::{plan, PlanOptions};

fn lost_load(case: &MicrogridCase) -> f64 {
    let out = plan(case, &PlanOptions::default()).unwrap();
    assert_eq!(out.status(), MilpStatus::Optimal);
    out.metrics.unwrap().lost_load_kwh
}

#[test]
fn metric_costs_add_up_to_objective() {
    for case in [toy_case(), case1(), case2(), case3()] {
        let out = plan(&case, &PlanOptions::default()).unwrap();
        let s = out.schedule.unwrap();
        let m = out.metrics.unwrap();
        assert!((m.total_cost - s.objective).abs() <= 1e-6 * s.objective.abs().max(1.0), "{} vs {}", m.total_cost, s.objective);
        assert!(m.fuel_cost >= 0.0 && m.degradation_cost >= 0.0 && m.lost_load_cost >= -1e-9);
        assert!((0.0..=1.0).contains(&m.heat_served_fraction));
    }
}

#[test]
fn never_charges_and_discharges_together() {
    for case in [case1(), case2(), case3()] {
        let s = plan(&case, &PlanOptions::default()).unwrap().schedule.unwrap();
        for t in 0..case.horizon {
            let e = Entity::Battery(0);
            assert_eq!(s.get(e, Quantity::Pch, t) * s.get(e, Quantity::Pdc, t), 0.0, "hour {t}");
        }
    }
}

#[test]
fn pipe_capacity_sweep_is_monotone() {
    let rows = sweep(&case1(), "pipes[*].f_max", &[75.0, 40.0, 20.0], &PlanOptions::default()).unwrap();
    let served: Vec<f64> = rows.iter().map(|r| r.metrics.as_ref().unwrap().heat_served_fraction).collect();
    let objective: Vec<f64> = rows.iter().map(|r| r.objective.unwrap()).collect();
    assert!(served[2] < served[0], "{served:?}");
    assert!(served.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{served:?}");
    assert!(objective.windows(2).all(|w| w[1] >= w[0] - 1e-6), "{objective:?}");
}

#[test]
fn inverter_sweep_objective_is_monotone() {
    let rows = sweep(&case1(), "inverters[0].p_max", &[120.0, 100.0, 90.0, 80.0], &PlanOptions::default()).unwrap();
    let objective: Vec<f64> = rows.iter().map(|r| r.objective.unwrap()).collect();
    assert!(objective.windows(2).all(|w| w[1] >= w[0] - 1e-6), "{objective:?}");
}

#[test]
fn identity_sweep_reproduces_plain_solve() {
    let case = case2();
    let rows = sweep(&case, "inverters[0].p_max", &[case.inverters[0].p_max], &PlanOptions::default()).unwrap();
    let direct = plan(&case, &PlanOptions::default()).unwrap();
    assert_eq!(rows[0].metrics, direct.metrics);
}

#[test]
fn removing_storage_cannot_reduce_lost_load() {
    let case = case2();
    assert!(lost_load(&remove_storage(&case)) >= lost_load(&case) - 1e-6);
}

#[test]
fn bundled_variants_differ_by_one_setting() {
    let (c1, c2, c3) = (case1(), case2(), case3());
    let mut back = c2.clone();
    back.inverters[0].p_max = c1.inverters[0].p_max;
    assert_eq!(back, c1);
    let mut back = c3.clone();
    for (p, orig) in back.pipes.iter_mut().zip(&c1.pipes) {
        p.f_max = orig.f_max;
    }
    assert_eq!(back, c1);
}

#[test]
fn serialized_case_round_trips() {
    for case in [case1(), case2(), case3(), toy_case()] {
        assert_eq!(parse_case_str(&serialize_case(&case, "x", "")).unwrap(), case);
    }
}

#[test]
fn weymouth_error_is_reported_for_every_pipe_hour() {
    let case = case1();
    let s = plan(&case, &PlanOptions::default()).unwrap().schedule.unwrap();
    let errs = weymouth_error(&case, &s);
    assert_eq!(errs.len(), case.pipes.len() * case.horizon);
    assert!(errs.iter().all(|e| e.error.is_finite()));
}

#[test]
fn segment_override_changes_the_model_only() {
    let case = toy_case();
    let a = plan(&case, &PlanOptions::default()).unwrap();
    let b = plan(
        &case,
        &PlanOptions {
            segments: Some(8),
            ..PlanOptions::default()
        },
    )
    .unwrap();
    assert!(b.model.problem.num_variables() > a.model.problem.num_variables());
    // More segments tighten the over-estimate of convex costs.
    assert!(b.schedule.unwrap().objective <= a.schedule.as_ref().unwrap().objective + 1e-6);
    let m = compute_metrics(&case, a.schedule.as_ref().unwrap());
    assert_eq!(Some(m), a.metrics);
}
