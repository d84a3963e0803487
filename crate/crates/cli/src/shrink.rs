//! Best-effort greedy witness shrinking: repeatedly apply size-reducing
//! transformations, keeping any that still make the statement fail.

use logmajor_core::checks::{run_statement, StatementParams};
use logmajor_core::matrix::ComplexMatrix;
use logmajor_core::StatementId;
use num_complex::Complex64;

/// True when the witness still fails (evaluation errors count as "does not
/// fail": a transform that breaks a hypothesis is rejected).
fn still_fails(
    id: StatementId,
    params: &StatementParams,
    witness: &[ComplexMatrix],
    tolerance: f64,
    allow_out_of_range: bool,
) -> bool {
    match run_statement(id, params, witness, allow_out_of_range) {
        Ok(result) => result.worst_slack < -tolerance,
        Err(_) => false,
    }
}

fn delete_index(m: &ComplexMatrix, idx: usize) -> ComplexMatrix {
    let n = m.dim();
    let map = |k: usize| if k < idx { k } else { k + 1 };
    ComplexMatrix::from_fn(n - 1, |i, j| m.get(map(i), map(j)))
}

fn map_all(witness: &[ComplexMatrix], f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Vec<ComplexMatrix> {
    witness.iter().map(f).collect()
}

fn zero_imag(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.dim(), |i, j| Complex64::new(m.get(i, j).re, 0.0))
}

fn round3(m: &ComplexMatrix) -> ComplexMatrix {
    let r = |v: f64| (v * 1000.0).round() / 1000.0;
    ComplexMatrix::from_fn(m.dim(), |i, j| {
        let z = m.get(i, j);
        Complex64::new(r(z.re), r(z.im))
    })
}

/// Greedy shrink. Returns the (possibly unchanged) witness; the result is
/// guaranteed to still fail whenever the input did.
pub fn shrink(
    id: StatementId,
    params: &StatementParams,
    witness: &[ComplexMatrix],
    tolerance: f64,
    allow_out_of_range: bool,
) -> Vec<ComplexMatrix> {
    let fails = |w: &[ComplexMatrix]| still_fails(id, params, w, tolerance, allow_out_of_range);
    if !fails(witness) {
        return witness.to_vec();
    }
    let mut current = witness.to_vec();

    // Dimension reduction: drop the same row/column pair from every matrix.
    loop {
        let n = current[0].dim();
        if n == 1 {
            break;
        }
        let mut reduced = None;
        for idx in 0..n {
            let candidate = map_all(&current, |m| delete_index(m, idx));
            if fails(&candidate) {
                reduced = Some(candidate);
                break;
            }
        }
        match reduced {
            Some(c) => current = c,
            None => break,
        }
    }

    // Entry simplification, each accepted only if the failure survives.
    let candidate = map_all(&current, zero_imag);
    if fails(&candidate) {
        current = candidate;
    }
    let candidate = map_all(&current, round3);
    if fails(&candidate) {
        current = candidate;
    }

    // Scale toward zero (hypothesis-preserving for every statement family).
    for _ in 0..10 {
        let candidate = map_all(&current, |m| m.scale(0.9));
        if fails(&candidate) {
            current = candidate;
        } else {
            break;
        }
    }

    current
}
