//! Randomized sweeps: every statement must hold on sampled inputs across a
//! range of dimensions, and the deliberately reversed control must fail.

use logmajor_core::checks::{run_statement, StatementId, StatementParams};
use logmajor_core::sampler::sample_inputs;

const MASTER: u64 = 0xFEED5EED;

fn sweep(id: StatementId, grid: StatementParams, dims: &[usize], trials: u64) {
    for &n in dims {
        for trial in 0..trials {
            let key = (n as u64) << 32 | trial;
            let (params, witness) = sample_inputs(id, n, MASTER, key, &grid).unwrap();
            let result = run_statement(id, &params, &witness, false).unwrap();
            assert!(
                result.pass,
                "{id} failed at n={n} trial={trial}: worst slack {} with {params:?}",
                result.worst_slack
            );
        }
    }
}

#[test]
fn rotfeld_holds() {
    sweep(StatementId::Rotfeld11, StatementParams::default(), &[1, 2, 3, 5], 40);
}

#[test]
fn concave_perturbation_holds() {
    sweep(StatementId::GargAujla12, StatementParams::default(), &[1, 2, 3, 5], 40);
}

#[test]
fn power_bound_holds_both_forms() {
    for r in [1.0, 1.25, 1.5, 2.0] {
        let grid = StatementParams {
            r: Some(r),
            ..Default::default()
        };
        sweep(StatementId::Theorem33, grid.clone(), &[1, 2, 4], 25);
        sweep(StatementId::Power13, grid, &[1, 2, 4], 25);
    }
}

#[test]
fn axiom_battery_holds() {
    sweep(StatementId::MuAxioms2, StatementParams::default(), &[1, 2, 3, 4], 30);
}

#[test]
fn identity_shift_and_block_factorization_hold() {
    sweep(StatementId::Lemma31, StatementParams::default(), &[1, 2, 3, 5], 30);
}

#[test]
fn sandwich_power_comparison_holds() {
    for p in [0.25, 0.5, 1.0, 1.5, 2.0] {
        let grid = StatementParams {
            p: Some(p),
            ..Default::default()
        };
        sweep(StatementId::Lemma32, grid, &[1, 2, 3], 25);
    }
}

#[test]
fn contraction_identities_hold() {
    sweep(StatementId::Lemma41, StatementParams::default(), &[1, 2, 3, 5, 8], 40);
    sweep(StatementId::Lemma42, StatementParams::default(), &[1, 2, 3, 5, 8], 40);
}

#[test]
fn product_integrals_hold() {
    for r in [1.0, 1.5, 2.0, 3.0] {
        let grid = StatementParams {
            r: Some(r),
            ..Default::default()
        };
        sweep(StatementId::Lemma43, grid.clone(), &[1, 2, 4], 20);
        sweep(StatementId::Lemma45, grid, &[1, 2, 4], 20);
    }
}

#[test]
fn holder_family_holds() {
    for m in [2usize, 3, 4] {
        let grid = StatementParams {
            m: Some(m),
            r: Some(1.5),
            ..Default::default()
        };
        sweep(StatementId::Theorem46, grid.clone(), &[1, 2, 4], 15);
        sweep(StatementId::Holder14, grid.clone(), &[1, 2, 4], 15);
        sweep(StatementId::Remark48, grid, &[1, 2, 4], 15);
        let corollary_grid = StatementParams {
            m: Some(m),
            ..Default::default()
        };
        sweep(StatementId::Corollary47, corollary_grid, &[1, 2, 4], 15);
    }
}

#[test]
fn negative_control_fails_somewhere() {
    let grid = StatementParams {
        r: Some(1.5),
        ..Default::default()
    };
    let mut failures = 0;
    for trial in 0..60 {
        let (params, witness) =
            sample_inputs(StatementId::NegativeControl33, 3, MASTER, trial, &grid).unwrap();
        let result = run_statement(StatementId::NegativeControl33, &params, &witness, false).unwrap();
        if !result.pass {
            failures += 1;
        }
    }
    assert!(failures > 0, "the reversed control never failed");
}
