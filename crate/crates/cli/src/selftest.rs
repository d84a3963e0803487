//! Smoke gate: oracle equivalences and exact identities at small dimensions.
//! Each section prints one pass/fail line; intended for CI.

use logmajor_core::checks::check_contraction_identities;
use logmajor_core::matrix::ComplexMatrix;
use logmajor_core::mu::{
    fk_determinant, lambda_curve, mu, mu_by_counting, mu_left, mu_left_by_counting,
    rearrange_function,
};
use logmajor_core::sampler::{
    sample_contraction, sample_ginibre, sample_haar_unitary, singular_values, Purpose, SeedStream,
};

struct Section {
    name: &'static str,
    run: fn(u64) -> Result<(), String>,
}

fn mu_oracle(seed: u64) -> Result<(), String> {
    for n in 1..=5 {
        for trial in 0..200 {
            let mut stream = SeedStream::new(seed, Purpose::Ginibre, (n as u64) << 32 | trial);
            let x = sample_ginibre(n, &mut stream);
            let fast = mu(&x).map_err(|e| e.to_string())?;
            let slow = mu_by_counting(&x).map_err(|e| e.to_string())?;
            let fast_l = mu_left(&x).map_err(|e| e.to_string())?;
            let slow_l = mu_left_by_counting(&x).map_err(|e| e.to_string())?;
            for k in 0..n {
                if (fast.values()[k] - slow.values()[k]).abs() > 1e-10
                    || (fast_l.values()[k] - slow_l.values()[k]).abs() > 1e-10
                {
                    return Err(format!("mismatch at n={n} trial={trial} k={k}"));
                }
            }
        }
    }
    Ok(())
}

fn lambda_partial_products(seed: u64) -> Result<(), String> {
    for n in [1usize, 2, 3, 4, 8] {
        let mut stream = SeedStream::new(seed, Purpose::Ginibre, 900 + n as u64);
        let x = sample_ginibre(n, &mut stream);
        let curve = lambda_curve(&x).map_err(|e| e.to_string())?;
        let s = singular_values(&x);
        let mut prod = 1.0f64;
        for k in 1..=n {
            prod *= s[k - 1];
            let expected = prod.powf(1.0 / n as f64);
            if (curve.value_at(k) - expected).abs() > 1e-12 * expected.max(1.0) {
                return Err(format!("grid value mismatch at n={n} k={k}"));
            }
        }
    }
    Ok(())
}

fn determinant_vs_cofactor(seed: u64) -> Result<(), String> {
    // closed form: Delta(diag(0.8, 0.2)) = 0.4
    let hand = fk_determinant(&ComplexMatrix::diag(&[0.8, 0.2])).map_err(|e| e.to_string())?;
    if (hand - 0.4).abs() > 1e-12 {
        return Err(format!("diag(0.8, 0.2) gave {hand}, expected 0.4"));
    }
    for n in 1..=4 {
        for trial in 0..200 {
            let mut stream = SeedStream::new(seed, Purpose::Ginibre, (n as u64) << 40 | trial);
            let x = sample_ginibre(n, &mut stream);
            let delta = fk_determinant(&x).map_err(|e| e.to_string())?;
            let expected = x.det_cofactor().norm().powf(1.0 / n as f64);
            if (delta - expected).abs() > 1e-9 * expected.max(1.0) {
                return Err(format!("n={n} trial={trial}: {delta} vs {expected}"));
            }
        }
    }
    Ok(())
}

fn contraction_identities(seed: u64) -> Result<(), String> {
    for n in 2..=6 {
        for trial in 0..100 {
            let key = (n as u64) << 48 | trial;
            let x = if trial % 10 == 0 {
                // boundary case: exact unitary
                let mut stream = SeedStream::new(seed, Purpose::HaarUnitary, key);
                sample_haar_unitary(n, &mut stream)
            } else {
                let mut stream = SeedStream::new(seed, Purpose::Contraction, key);
                sample_contraction(n, &mut stream, false)
            };
            let result = check_contraction_identities(&x, false).map_err(|e| e.to_string())?;
            for m in &result.margins {
                if m.slack < -1e-10 {
                    return Err(format!("identity off by {} at n={n} trial={trial}", m.slack));
                }
            }
        }
    }
    Ok(())
}

fn rearrangement(seed: u64) -> Result<(), String> {
    let mut stream = SeedStream::new(seed, Purpose::Scalars, 7);
    for trial in 0..100 {
        let n = 1 + (trial % 8);
        let samples: Vec<f64> = (0..n).map(|_| stream.gaussian()).collect();
        let rearranged = rearrange_function(&samples).map_err(|e| e.to_string())?;
        let direct = mu(&ComplexMatrix::diag(&samples)).map_err(|e| e.to_string())?;
        if rearranged.values() != direct.values() {
            return Err(format!("mismatch at trial {trial}"));
        }
    }
    Ok(())
}

/// Run all sections; returns true when everything passed.
pub fn selftest(seed: u64) -> bool {
    let sections = [
        Section { name: "mu counting oracle", run: mu_oracle },
        Section { name: "lambda partial products", run: lambda_partial_products },
        Section { name: "determinant vs cofactor", run: determinant_vs_cofactor },
        Section { name: "contraction grid identities", run: contraction_identities },
        Section { name: "rearrangement consistency", run: rearrangement },
    ];
    let mut ok = true;
    for section in sections {
        match (section.run)(seed) {
            Ok(()) => println!("PASS {}", section.name),
            Err(msg) => {
                ok = false;
                println!("FAIL {}: {msg}", section.name);
            }
        }
    }
    ok
}
