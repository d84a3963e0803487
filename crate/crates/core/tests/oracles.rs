//! Cross-checks of every quantity that has two independent computation
//! routes: the counting definition of the singular number step function, the
//! partial-product identity for the log-integral curve, the cofactor
//! determinant, the trace formula, and the rearrangement view.

use logmajor_core::matrix::ComplexMatrix;
use logmajor_core::mu::{fk_determinant, lambda_curve, mu, mu_by_counting, mu_left, mu_left_by_counting, rearrange_function, trace_of_function};
use logmajor_core::sampler::{sample_ginibre, sample_positive, singular_values, Purpose, SeedStream};
use logmajor_core::scalar::ScalarFunction;
use logmajor_core::svd;

const MASTER: u64 = 0xDECADE;

fn ginibre(n: usize, trial: u64) -> ComplexMatrix {
    sample_ginibre(n, &mut SeedStream::new(MASTER, Purpose::Ginibre, trial))
}

#[test]
fn counting_definition_matches_sorted_singular_values() {
    for n in 1..=6 {
        for trial in 0..200 {
            let x = ginibre(n, (n as u64) << 32 | trial);
            let fast = mu(&x).unwrap();
            let slow = mu_by_counting(&x).unwrap();
            for (a, b) in fast.values().iter().zip(slow.values()) {
                assert!((a - b).abs() <= 1e-10, "n={n} trial={trial}: {a} vs {b}");
            }
            let fast_l = mu_left(&x).unwrap();
            let slow_l = mu_left_by_counting(&x).unwrap();
            for (a, b) in fast_l.values().iter().zip(slow_l.values()) {
                assert!((a - b).abs() <= 1e-10, "left n={n} trial={trial}");
            }
        }
    }
}

#[test]
fn lambda_grid_values_are_partial_product_roots() {
    for n in [1usize, 2, 3, 5, 8, 16] {
        let x = ginibre(n, 7000 + n as u64);
        let curve = lambda_curve(&x).unwrap();
        let s = singular_values(&x);
        let mut prod = 1.0f64;
        for k in 1..=n {
            prod *= s[k - 1];
            let expected = prod.powf(1.0 / n as f64);
            let got = curve.value_at(k);
            assert!(
                (got - expected).abs() <= 1e-12 * expected.max(1.0),
                "n={n} k={k}: {got} vs {expected}"
            );
        }
    }
}

#[test]
fn determinant_matches_cofactor_expansion() {
    for n in 1..=4 {
        for trial in 0..100 {
            let x = ginibre(n, 9000 + (n as u64) * 1000 + trial);
            let delta = fk_determinant(&x).unwrap();
            let expected = x.det_cofactor().norm().powf(1.0 / n as f64);
            assert!(
                (delta - expected).abs() <= 1e-9 * expected.max(1.0),
                "n={n} trial={trial}: {delta} vs {expected}"
            );
        }
    }
}

#[test]
fn determinant_vanishes_on_planted_kernel() {
    // A matrix with an exactly zero column has determinant exactly 0.
    for n in 2..=5 {
        let mut x = ginibre(n, 100 + n as u64);
        for i in 0..n {
            x.set(i, n - 1, num_complex::Complex64::new(0.0, 0.0));
        }
        assert_eq!(fk_determinant(&x).unwrap(), 0.0, "n={n}");
    }
}

#[test]
fn trace_formula_two_routes_agree() {
    let f = ScalarFunction::power(0.5).unwrap();
    for trial in 0..50 {
        let x = sample_positive(4, &mut SeedStream::new(MASTER, Purpose::Positive, trial));
        let (via_trace, via_integral) = trace_of_function(&x, &f).unwrap();
        assert!(
            (via_trace - via_integral).abs() <= 1e-10 * via_trace.max(1.0),
            "trial={trial}: {via_trace} vs {via_integral}"
        );
    }
}

#[test]
fn rearrangement_matches_mu_of_diagonal() {
    let mut stream = SeedStream::new(MASTER, Purpose::Scalars, 0);
    for trial in 0..100 {
        let n = 1 + (trial % 7);
        let samples: Vec<f64> = (0..n).map(|_| stream.gaussian() * 2.0).collect();
        let rearranged = rearrange_function(&samples).unwrap();
        let diag = ComplexMatrix::diag(&samples);
        let direct = mu(&diag).unwrap();
        for (a, b) in rearranged.values().iter().zip(direct.values()) {
            assert_eq!(a, b, "trial={trial}");
        }
    }
}

#[test]
fn svd_reconstructs_and_orders() {
    for n in [1usize, 2, 3, 4, 8, 16] {
        let x = ginibre(n, 500 + n as u64);
        let spec = svd(&x).unwrap();
        let residual = (&spec.reconstruct() - &x).frobenius_norm();
        assert!(
            residual <= 1e-12 * x.frobenius_norm().max(1.0),
            "n={n}: residual {residual}"
        );
        assert!(spec.values.windows(2).all(|w| w[0] >= w[1]), "n={n}");
        assert!(spec.values.iter().all(|&v| v >= 0.0), "n={n}");
    }
}
