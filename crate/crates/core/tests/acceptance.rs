//! Acceptance suite: one line per criterion, run in sequence so that the
//! timings are not distorted by other tests sharing the core.

use std::f64::consts::FRAC_PI_4;
use std::time::{Duration, Instant};

use darboux_core::cli::FigurePreset;
use darboux_core::oracles::FdSteps;
use darboux_core::solutions::{GridSpec, StateKind};
use darboux_core::special::SQRT_PI;
use darboux_core::transform::{BssParams, BssTransform};
use darboux_core::validation::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn worst(reports: &[ResidualReport]) -> String {
    let r = reports.iter().max_by(|a, b| {
        (a.measured() / a.tolerance.max(f64::MIN_POSITIVE))
            .total_cmp(&(b.measured() / b.tolerance.max(f64::MIN_POSITIVE)))
    });
    match r {
        Some(r) => format!(
            "worst {} = {:.3e} (tol {:.0e})",
            r.name,
            r.measured(),
            r.tolerance
        ),
        None => "no checks".into(),
    }
}

fn all_pass(reports: Vec<ResidualReport>) -> Outcome {
    for r in reports.iter().filter(|r| !r.pass) {
        eprintln!("    failed: {r:?}");
    }
    Outcome {
        pass: reports.iter().all(|r| r.pass),
        detail: worst(&reports),
    }
}

fn presets() -> [(FigurePreset, BssTransform); 2] {
    [FigurePreset::Fig1a, FigurePreset::Fig1b].map(|p| (p, BssTransform::new(p.params()).unwrap()))
}

fn criterion_1() -> Outcome {
    all_pass(
        presets()
            .iter()
            .flat_map(|(_, tr)| separation_odes(tr, 64, 1e-10))
            .collect(),
    )
}

fn criterion_2() -> Outcome {
    let steps = FdSteps::fast_dynamics();
    all_pass(
        presets()
            .iter()
            .map(|(_, tr)| u_equation(tr, &Lattice::default(), &steps, 1e-6))
            .collect(),
    )
}

fn criterion_3() -> Outcome {
    let steps = FdSteps::fast_dynamics();
    let kinds = [
        StateKind::Missing,
        StateKind::Intertwined(1),
        StateKind::Intertwined(2),
        StateKind::Intertwined(3),
    ];
    all_pass(
        presets()
            .iter()
            .flat_map(|(_, tr)| {
                kinds.map(|k| deformed_equation(tr, k, &Lattice::default(), &steps, 1e-5))
            })
            .collect(),
    )
}

fn criterion_4() -> Outcome {
    all_pass(
        presets()
            .iter()
            .flat_map(|(_, tr)| reality(tr, &Lattice::default(), &Tolerances::default()))
            .collect(),
    )
}

fn criterion_5() -> Outcome {
    all_pass(
        presets()
            .iter()
            .map(|(_, tr)| ell_integral(tr, 16, 1e-8))
            .collect(),
    )
}

fn criterion_6() -> Outcome {
    let grid = GridSpec::default();
    let times = FigurePreset::times();
    let lower = BssTransform::new(FigurePreset::Fig1b.params()).unwrap();
    let static_params = BssParams {
        c0: 1.0,
        c1: 1.0,
        c2: 0.0,
        k_a: 1.3 * SQRT_PI,
        k_b: 2.0,
        nu: 0.5,
    };
    let stationary = BssTransform::new(static_params).unwrap();
    let trivial = BssTransform::new(BssParams {
        k_b: 0.0,
        ..static_params
    })
    .unwrap();
    all_pass(vec![
        special_form(&lower, &grid, &times, 1e-9),
        static_limit(&stationary, &grid, &times, 1e-12),
        trivial_limit(&trivial, &grid, &times, 1e-12),
    ])
}

fn criterion_7(norm_reports: &mut Vec<ResidualReport>) -> Outcome {
    let grid = GridSpec::default();
    let times = [0.0, FRAC_PI_4];
    let tol = Tolerances::default();
    let mut reports = Vec::new();
    for (_, tr) in presets() {
        for kind in [
            StateKind::Phi(0),
            StateKind::Intertwined(0),
            StateKind::Missing,
        ] {
            for r in propagate_checkpoints(&tr, kind, &grid, &times, 1e-4, &tol) {
                if r.name.starts_with("propagated_norm") {
                    norm_reports.push(r);
                } else {
                    reports.push(r);
                }
            }
        }
    }
    let lower = BssTransform::new(FigurePreset::Fig1b.params()).unwrap();
    reports.push(dt_order_check(
        &lower,
        StateKind::Intertwined(0),
        &grid,
        0.0,
        FRAC_PI_4,
        1e-4,
        tol.dt_order,
    ));
    let note = reports
        .last()
        .and_then(|r| r.note.clone())
        .unwrap_or_default();
    let mut out = all_pass(reports);
    out.detail = format!("{}; {note}", out.detail);
    out
}

fn criterion_8(mut propagated: Vec<ResidualReport>) -> Outcome {
    let kinds = [
        StateKind::Missing,
        StateKind::Intertwined(0),
        StateKind::Intertwined(1),
        StateKind::Intertwined(2),
        StateKind::Intertwined(3),
    ];
    for (_, tr) in presets() {
        for k in kinds {
            propagated.push(norm_conservation(
                &tr,
                k,
                &GridSpec::default(),
                &NORM_CHECKPOINTS,
                1e-6,
            ));
        }
    }
    all_pass(propagated)
}

fn criterion_9() -> Outcome {
    let frozen = FigurePreset::frozen_census();
    let reports: Vec<_> = [FigurePreset::Fig2Upper, FigurePreset::Fig2Lower]
        .into_iter()
        .map(|p| {
            let tr = BssTransform::new(p.params()).unwrap();
            let mut r = fig2_census(&tr, Fig2Labels::Ladder, &GridSpec::default(), &frozen);
            r.name = format!("{}_{}", r.name, p.name());
            r
        })
        .collect();
    let notes: Vec<String> = reports.iter().filter_map(|r| r.note.clone()).collect();
    let mut out = all_pass(reports);
    out.detail = format!("{}; {}", out.detail, notes.join(" | "));
    out
}

fn criterion_10() -> Outcome {
    all_pass(vec![hyp1f1_oracle(1e-10), wronskian(1e-8)])
}

fn criterion_11() -> Outcome {
    let tr = BssTransform::new(FigurePreset::Fig1a.params()).unwrap();
    let gamma = perturbed_gamma_control(&tr, 1e-10);
    let pairing = mismatched_potential_control(&tr, 1e-4);
    let pass = !gamma.pass && gamma.max_abs > 1e-3 && !pairing.pass && pairing.max_abs > 1e-1;
    Outcome {
        pass,
        detail: format!(
            "perturbed-gamma b residual {:.3e} (fails: {}), mismatched-potential residual {:.3e} (fails: {})",
            gamma.max_abs, !gamma.pass, pairing.max_abs, !pairing.pass
        ),
    }
}

#[test]
fn acceptance_criteria() {
    let mut norm_reports = Vec::new();
    let mut failed = Vec::new();
    let mut run = |n: usize, budget_s: u64, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget_s);
        let pass = out.pass && in_time;
        println!(
            "criterion {n:>2}: {}  {:.2}s of {budget_s}s  {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            out.detail
        );
        if !pass {
            failed.push(n);
        }
    };
    run(1, 1, &mut criterion_1);
    run(2, 5, &mut criterion_2);
    run(3, 10, &mut criterion_3);
    run(4, 5, &mut criterion_4);
    run(5, 1, &mut criterion_5);
    run(6, 2, &mut criterion_6);
    run(7, 60, &mut || criterion_7(&mut norm_reports));
    let propagated = std::mem::take(&mut norm_reports);
    let mut propagated = Some(propagated);
    run(8, 5, &mut || {
        criterion_8(propagated.take().unwrap_or_default())
    });
    run(9, 5, &mut criterion_9);
    run(10, 5, &mut criterion_10);
    run(11, 2, &mut criterion_11);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
