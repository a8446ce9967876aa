//! Floating-point spot checks for the transcendental content: the
//! curvature-dependent trigonometric functions, the geodesic polar frame,
//! and seeded cross-checks of exact identities under float evaluation.
//! Imaginary parameters are handled as complex values; everything else in
//! the crate stays exact.

use num::complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::models::{hamiltonian, integrals, ParamEnv};

pub const DEFAULT_SEED: u64 = 20250;
pub const DEFAULT_TOL: f64 = 1e-10;
/// Samples whose intermediate magnitudes exceed this are resampled.
pub const CONDITION_GUARD: f64 = 1e8;

/// Curvature-dependent sine, cosine and tangent at one point.
pub fn kappa_eval(kappa: f64, x: f64) -> Result<(f64, f64, f64)> {
    let (s, c) = if kappa > 0.0 {
        let rk = kappa.sqrt();
        ((rk * x).sin() / rk, (rk * x).cos())
    } else if kappa == 0.0 {
        (x, 1.0)
    } else {
        let rk = (-kappa).sqrt();
        ((rk * x).sinh() / rk, (rk * x).cosh())
    };
    if c == 0.0 {
        return Err(Error::TangentPole);
    }
    Ok((s, c, s / c))
}

fn rel_residual(diff: Complex64, scale: f64) -> f64 {
    diff.norm() / scale.max(1.0)
}

/// Report of a sampled numeric check.
#[derive(Clone, Debug)]
pub struct SampledCheck {
    pub samples: usize,
    pub max_rel_residual: f64,
    pub tol: f64,
}

impl SampledCheck {
    pub fn passed(&self) -> bool {
        self.max_rel_residual < self.tol
    }
}

/// Evaluate `H_(2)`, `I1`, `I2` through the geodesic polar frame at random
/// samples and compare with their natural-form expressions
/// (`H = p_rho^2 + p_phi^2/S^2 - gamma1^2/4 T^2` and the two partial
/// energies), together with the dependence relation and the curvature
/// identity `1/T^2 + kappa = 1/S^2`. `gamma1` may be complex (the proper
/// Zernike case is purely imaginary); `gamma2 = -kappa`.
pub fn geodesic_polar_check(
    kappa: f64,
    gamma1: Complex64,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<SampledCheck> {
    let env = ParamEnv::symbolic(2);
    let h2 = hamiltonian(&env, 2)?;
    let (j, i1, i2) = integrals(&env)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_rel: f64 = 0.0;
    let mut accepted = 0usize;
    let gamma2 = Complex64::new(-kappa, 0.0);
    let mut guard = 0usize;
    while accepted < samples {
        guard += 1;
        if guard > samples * 100 {
            return Err(Error::SampleOutOfDomain);
        }
        let rho = if kappa > 0.0 {
            // stay inside (0, pi/(2 sqrt(kappa))) away from the endpoints
            let top = std::f64::consts::FRAC_PI_2 / kappa.sqrt();
            rng.gen_range(0.05 * top..0.95 * top)
        } else {
            rng.gen_range(0.1..3.0)
        };
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let p_rho = rng.gen_range(-2.0..2.0);
        let p_phi = rng.gen_range(-2.0..2.0);
        let (s, c, t) = match kappa_eval(kappa, rho) {
            Ok(v) => v,
            Err(_) => continue,
        };
        if s.abs() < 1e-3 || c.abs() < 1e-3 {
            continue;
        }
        // map to Cartesian phase-space values (complex because of gamma1)
        let shift = Complex64::new(p_rho, 0.0) - gamma1 * 0.5 * t;
        let q1 = Complex64::new(s * phi.cos(), 0.0);
        let q2 = Complex64::new(s * phi.sin(), 0.0);
        let p1 = shift * (phi.cos() / c) - Complex64::new(phi.sin() / s * p_phi, 0.0);
        let p2 = shift * (phi.sin() / c) + Complex64::new(phi.cos() / s * p_phi, 0.0);
        let vals = vec![q1, q2, p1, p2, gamma1, gamma2];
        let evaluate = |f: &Scalar| -> Result<(Complex64, f64)> { f.eval_c64(&vals, 1) };
        let (h_val, m1) = evaluate(&h2)?;
        let (i1_val, m2) = evaluate(&i1)?;
        let (i2_val, m3) = evaluate(&i2)?;
        let (j_val, m4) = evaluate(&j)?;
        let mag = m1.max(m2).max(m3).max(m4);
        if mag > CONDITION_GUARD {
            continue;
        }
        accepted += 1;
        // geodesic-frame expressions
        let g1sq_quarter = gamma1 * gamma1 * 0.25;
        let h_geo = Complex64::new(p_rho * p_rho + (p_phi / s) * (p_phi / s), 0.0)
            - g1sq_quarter * t * t;
        let i1_geo = {
            let kin = Complex64::new(phi.cos() * p_rho - phi.sin() / t * p_phi, 0.0);
            kin * kin - g1sq_quarter * t * t * phi.cos() * phi.cos()
        };
        let i2_geo = {
            let kin = Complex64::new(phi.sin() * p_rho + phi.cos() / t * p_phi, 0.0);
            kin * kin - g1sq_quarter * t * t * phi.sin() * phi.sin()
        };
        let scale = h_val.norm().max(i1_val.norm()).max(i2_val.norm()).max(mag.min(1e3));
        max_rel = max_rel.max(rel_residual(h_val - h_geo, scale));
        max_rel = max_rel.max(rel_residual(i1_val - i1_geo, scale));
        max_rel = max_rel.max(rel_residual(i2_val - i2_geo, scale));
        // p_phi is the angular momentum
        max_rel = max_rel.max(rel_residual(j_val - Complex64::new(p_phi, 0.0), scale));
        // dependence relation in the geodesic frame
        let dep = i1_val + i2_val - gamma2 * Complex64::new(p_phi * p_phi, 0.0) - h_val;
        max_rel = max_rel.max(rel_residual(dep, scale));
        // curvature identity away from zeros
        let ident = 1.0 / (t * t) + kappa - 1.0 / (s * s);
        max_rel = max_rel.max(ident.abs() / 1.0f64.max(1.0 / (s * s)));
    }
    Ok(SampledCheck {
        samples: accepted,
        max_rel_residual: max_rel,
        tol,
    })
}

/// Check the curvature identity `1/T^2 + kappa = 1/S^2` alone.
pub fn curvature_identity_check(kappa: f64, samples: usize, tol: f64, seed: u64) -> SampledCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_rel: f64 = 0.0;
    let mut accepted = 0;
    while accepted < samples {
        let x = if kappa > 0.0 {
            rng.gen_range(0.05..0.95) * std::f64::consts::FRAC_PI_2 / kappa.sqrt()
        } else {
            rng.gen_range(0.05..3.0)
        };
        let Ok((s, _, t)) = kappa_eval(kappa, x) else {
            continue;
        };
        if s.abs() < 1e-3 {
            continue;
        }
        accepted += 1;
        let res = (1.0 / (t * t) + kappa - 1.0 / (s * s)).abs();
        max_rel = max_rel.max(res / (1.0f64).max(1.0 / (s * s)));
    }
    SampledCheck {
        samples: accepted,
        max_rel_residual: max_rel,
        tol,
    }
}

/// Series sanity for the curvature functions: `(S_kappa(x) - x)/kappa`
/// tends to `-x^3/6` as `kappa -> 0`.
pub fn kappa_series_check(x: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for kappa in [1e-4, -1e-4] {
        let (s, _, _) = kappa_eval(kappa, x).unwrap();
        let lhs = (s - x) / kappa;
        let expect = -x * x * x / 6.0;
        worst = worst.max((lhs - expect).abs() / expect.abs().max(1.0));
    }
    worst
}

/// Evaluate an exact identity (a scalar that is symbolically zero, or a
/// pair of scalars expected equal) at random rational points mapped to
/// floats. A disagreement beyond tolerance flags an implementation bug in
/// one of the two evaluation paths.
pub fn float_cross_check(
    residual: &Scalar,
    samples: usize,
    tol: f64,
    seed: u64,
    branch: i8,
) -> SampledCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = residual.context().len();
    let mut max_rel: f64 = 0.0;
    let mut accepted = 0;
    let mut guard = 0;
    while accepted < samples && guard < samples * 200 {
        guard += 1;
        let vals: Vec<Complex64> = (0..n)
            .map(|_| {
                let num: i32 = rng.gen_range(-9..=9);
                let den: i32 = rng.gen_range(1..=9);
                Complex64::new(num as f64 / den as f64, 0.0)
            })
            .collect();
        match residual.eval_c64(&vals, branch) {
            Ok((v, mag)) => {
                if mag > CONDITION_GUARD {
                    continue;
                }
                accepted += 1;
                max_rel = max_rel.max(v.norm() / mag.max(1.0));
            }
            Err(_) => continue,
        }
    }
    SampledCheck {
        samples: accepted,
        max_rel_residual: max_rel,
        tol,
    }
}

/// Witness that a scalar is NOT identically zero: find a sample where its
/// magnitude exceeds the threshold.
pub fn nonzero_witness(s: &Scalar, threshold: f64, seed: u64) -> Option<(Vec<Complex64>, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = s.context().len();
    for _ in 0..500 {
        let vals: Vec<Complex64> = (0..n)
            .map(|_| {
                let num: i32 = rng.gen_range(-9..=9);
                let den: i32 = rng.gen_range(1..=9);
                Complex64::new(num as f64 / den as f64, 0.0)
            })
            .collect();
        if let Ok((v, mag)) = s.eval_c64(&vals, 1) {
            if mag <= CONDITION_GUARD && v.norm() > threshold {
                return Some((vals, v.norm()));
            }
        }
    }
    None
}
