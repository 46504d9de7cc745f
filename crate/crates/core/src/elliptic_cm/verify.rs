//! Numerical identity checks for the elliptic layer.

use super::functions::*;
use super::system::{cm_h2, cm_lax, lax_power_traces, CMState};
use crate::error::Result;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use std::f64::consts::PI;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Sample points keep at least this distance from the lattice so that
/// absolute errors stay meaningful.
const SAMPLE_MARGIN: f64 = 0.05;

#[derive(Clone, Debug, Serialize)]
pub struct TorusCheck {
    pub tau: [f64; 2],
    pub samples: usize,
    /// `max |θ'(0)²θ(z+q)θ(z−q)/(θ(z)²θ(q)²) − (℘(q) − ℘(z))|`.
    pub theta_wp_identity: f64,
    /// Oddness, `θ(z+1) = θ(z)` and `θ(z+τ) = −e^{−2πiz}θ(z)` for the
    /// 1-periodic normalization, relative to `1 + |θ|`.
    pub theta_quasi_periodicity: f64,
    /// `H(z+1,a)/H(z,a) − 1` and `H(z+τ,a)/H(z,a) − 1`.
    pub lame_hermite_periodicity: f64,
    /// `|℘'² − 4℘³ + g₂℘ + g₃| / (1 + |℘'|²)`.
    pub wp_ode_residual: f64,
    /// Spread of `tr φ(z)² − n(n−1)c²℘(z)` over sampled `z` together with
    /// its distance from `H₂`.
    pub trace_constant_spread: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CmVerifyReport {
    pub tol: f64,
    pub tori: Vec<TorusCheck>,
    pub pass: bool,
}

pub fn default_tori() -> Vec<Complex64> {
    vec![Complex64::new(0.0, 1.0), Complex64::new(0.5, 1.0), Complex64::new(0.0, 2.0)]
}

fn sample_point<R: Rng>(torus: &Torus, rng: &mut R) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen::<f64>() - 0.5, 0.0) + (rng.gen::<f64>() - 0.5) * torus.tau();
        if torus.lattice_distance(z) > SAMPLE_MARGIN {
            return z;
        }
    }
}

/// `max |θ'(0)²θ(z+q)θ(z−q)/(θ(z)²θ(q)²) − (℘(q) − ℘(z))|` over random pairs.
pub fn theta_wp_identity_error<R: Rng>(torus: &Torus, samples: usize, rng: &mut R) -> Result<f64> {
    let t0 = theta_prime_zero(torus, DEFAULT_TOL);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < samples {
        let z = sample_point(torus, rng);
        let q = sample_point(torus, rng);
        if torus.lattice_distance(z + q) < SAMPLE_MARGIN || torus.lattice_distance(z - q) < SAMPLE_MARGIN {
            continue;
        }
        let th = |x| theta(x, torus, DEFAULT_TOL);
        let tz = th(z);
        let tq = th(q);
        let lhs = t0 * t0 * th(z + q) * th(z - q) / (tz * tz * tq * tq);
        let rhs = wp(q, torus, DEFAULT_TOL)? - wp(z, torus, DEFAULT_TOL)?;
        worst = worst.max((lhs - rhs).norm());
        done += 1;
    }
    Ok(worst)
}

fn quasi_periodicity_error<R: Rng>(torus: &Torus, samples: usize, rng: &mut R) -> f64 {
    let tau = torus.tau();
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let z = sample_point(torus, rng);
        let t = theta(z, torus, DEFAULT_TOL);
        let scale = 1.0 + t.norm();
        worst = worst.max((theta(-z, torus, DEFAULT_TOL) + t).norm() / scale);
        let tq = theta_quasi(z, torus, DEFAULT_TOL);
        let scale = 1.0 + tq.norm();
        worst = worst.max((theta_quasi(z + 1.0, torus, DEFAULT_TOL) - tq).norm() / scale);
        let shifted = theta_quasi(z + tau, torus, DEFAULT_TOL);
        worst = worst.max((shifted + (-2.0 * PI * I * z).exp() * tq).norm() / (scale + shifted.norm()));
    }
    worst
}

fn lame_error<R: Rng>(torus: &Torus, samples: usize, rng: &mut R) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let z = sample_point(torus, rng);
        let a = sample_point(torus, rng);
        if torus.lattice_distance(z - a) < SAMPLE_MARGIN {
            continue;
        }
        let h = lame_hermite(z, a, torus, DEFAULT_TOL)?;
        for shift in [Complex64::new(1.0, 0.0), torus.tau()] {
            let ratio = lame_hermite(z + shift, a, torus, DEFAULT_TOL)? / h;
            worst = worst.max((ratio - 1.0).norm());
        }
    }
    Ok(worst)
}

fn ode_residual<R: Rng>(torus: &Torus, samples: usize, rng: &mut R) -> Result<f64> {
    let (g2, g3) = weierstrass_invariants(torus, DEFAULT_TOL)?;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let z = sample_point(torus, rng);
        let (p, dp) = wp_and_derivative(z, torus, DEFAULT_TOL)?;
        let res = dp * dp - 4.0 * p * p * p + g2 * p + g3;
        worst = worst.max(res.norm() / (1.0 + dp.norm_sqr()));
    }
    Ok(worst)
}

/// Spread of `tr φ(z)² − n(n−1)c²℘(z)` over `z` samples, including the
/// distance of every value from the closed-form `H₂`.
pub fn trace_constant_spread<R: Rng>(state: &CMState, torus: &Torus, samples: usize, rng: &mut R) -> Result<f64> {
    let h2 = cm_h2(state, torus)?;
    let n = state.n() as f64;
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < samples {
        let z = sample_point(torus, rng);
        if state.q.iter().any(|&a| state.q.iter().any(|&b| torus.lattice_distance(z + a - b) < SAMPLE_MARGIN)) {
            continue;
        }
        let tr2 = lax_power_traces(&cm_lax(state, z, torus)?, 2)[1];
        let ct = tr2 - n * (n - 1.0) * state.c * state.c * wp(z, torus, DEFAULT_TOL)?;
        worst = worst.max((ct - h2).norm());
        done += 1;
    }
    Ok(worst)
}

fn reference_state() -> CMState {
    let cx = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    CMState {
        q: cx(&[0.05, 0.36, 0.71]),
        p: cx(&[0.12, -0.05, 0.09]),
        c: Complex64::new(0.3, 0.4),
    }
}

/// Runs every identity check on each torus with `samples` random points.
/// The trace check uses a fixed three-particle state and a looser `1e-8`.
pub fn cm_verify<R: Rng>(taus: &[Complex64], samples: usize, tol: f64, rng: &mut R) -> Result<CmVerifyReport> {
    let state = reference_state();
    let mut tori = Vec::with_capacity(taus.len());
    for &tau in taus {
        let torus = Torus::new(tau)?;
        let theta_wp_identity = theta_wp_identity_error(&torus, samples, rng)?;
        let theta_quasi_periodicity = quasi_periodicity_error(&torus, samples, rng);
        let lame_hermite_periodicity = lame_error(&torus, samples, rng)?;
        let wp_ode_residual = ode_residual(&torus, samples, rng)?;
        let trace_spread = trace_constant_spread(&state, &torus, 20, rng)?;
        let pass = theta_wp_identity < tol
            && theta_quasi_periodicity < tol
            && lame_hermite_periodicity < tol
            && wp_ode_residual < 1e-8
            && trace_spread < 1e-8;
        tori.push(TorusCheck {
            tau: [tau.re, tau.im],
            samples,
            theta_wp_identity,
            theta_quasi_periodicity,
            lame_hermite_periodicity,
            wp_ode_residual,
            trace_constant_spread: trace_spread,
            pass,
        });
    }
    let pass = tori.iter().all(|t| t.pass);
    Ok(CmVerifyReport { tol, tori, pass })
}
