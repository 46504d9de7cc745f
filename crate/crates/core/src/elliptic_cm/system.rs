//! The elliptic Calogero–Moser system through Krichever's Lax matrix
//!
//! ```text
//! φ_ij(z) = c θ'(0) θ(z + q_i − q_j) / (θ(z) θ(q_i − q_j)),  i ≠ j,
//! φ_ii    = p_i.
//! ```
//!
//! `tr φ(z)² = Σp² + c² Σ_{i≠j} (℘(z) − ℘(q_i − q_j))`, so the constant term
//! `H₂ = tr φ² − n(n−1)c²℘(z) = Σp² − c² Σ_{i≠j} ℘(q_i − q_j)` is the
//! Calogero–Moser hamiltonian, with flow `q̇_i = 2p_i`,
//! `ṗ_i = 2c² Σ_{j≠i} ℘'(q_i − q_j)`.

use super::functions::{theta, theta_prime_zero, wp_and_derivative, Torus, DEFAULT_TOL};
use crate::error::{invalid, Error, Result};
use crate::integrate::{integrate, MidpointOptions};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Positions closer than this (modulo the lattice) count as a collision.
pub const COLLISION_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct CMState {
    pub q: Vec<Complex64>,
    pub p: Vec<Complex64>,
    pub c: Complex64,
}

impl CMState {
    pub fn new(q: Vec<Complex64>, p: Vec<Complex64>, c: Complex64) -> Result<Self> {
        if q.len() < 2 {
            return Err(invalid("need at least two particles"));
        }
        if q.len() != p.len() {
            return Err(invalid("positions and momenta differ in length"));
        }
        Ok(CMState { q, p, c })
    }

    /// Real positions and momenta with a real coupling.
    pub fn real(q: &[f64], p: &[f64], c: f64) -> Result<Self> {
        let cx = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(cx(q), cx(p), Complex64::new(c, 0.0))
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    /// First colliding pair, if any.
    pub fn collision(&self, torus: &Torus) -> Option<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| torus.lattice_distance(self.q[i] - self.q[j]) < COLLISION_THRESHOLD)
    }
}

/// The Lax matrix at spectral parameter `z`.
pub fn cm_lax(state: &CMState, z: Complex64, torus: &Torus) -> Result<DMatrix<Complex64>> {
    if torus.lattice_distance(z) < 1e-12 {
        return Err(Error::Pole(format!("the Lax matrix has a pole at z = {z}")));
    }
    if let Some((i, j)) = state.collision(torus) {
        return Err(invalid(format!("positions q{} and q{} coincide modulo the lattice", i + 1, j + 1)));
    }
    let n = state.n();
    let tz = theta(z, torus, DEFAULT_TOL);
    let scale = state.c * theta_prime_zero(torus, DEFAULT_TOL) / tz;
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        m[(i, i)] = state.p[i];
        for j in 0..n {
            if i != j {
                let d = state.q[i] - state.q[j];
                m[(i, j)] = scale * theta(z + d, torus, DEFAULT_TOL) / theta(d, torus, DEFAULT_TOL);
            }
        }
    }
    Ok(m)
}

/// `tr φ(z)^k` for `k = 1..=k_max`.
pub fn lax_power_traces(lax: &DMatrix<Complex64>, k_max: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(k_max);
    let mut power = lax.clone();
    for k in 1..=k_max {
        if k > 1 {
            power = &power * lax;
        }
        out.push(power.trace());
    }
    out
}

/// `Σp² − c² Σ_{i≠j} ℘(q_i − q_j)`.
pub fn cm_h2(state: &CMState, torus: &Torus) -> Result<Complex64> {
    let n = state.n();
    let mut pot = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                pot += wp_and_derivative(state.q[i] - state.q[j], torus, DEFAULT_TOL)?.0;
            }
        }
    }
    Ok(state.p.iter().map(|p| p * p).sum::<Complex64>() - state.c * state.c * pot)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    /// Number of equally spaced sample points on the circle.
    pub samples: usize,
    /// Circle radius as a fraction of the shortest period.
    pub radius_factor: f64,
    /// Largest accepted residual (relative size of spurious Laurent terms).
    pub tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            samples: 64,
            radius_factor: 0.1,
            tol: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaurentFit {
    pub constant: Complex64,
    pub residual: f64,
}

/// Constant terms of `tr φ(z)^k` at `z = 0` for `k = 1..=k_max`, by
/// averaging over a circle around the origin. The residual measures the
/// Laurent coefficients of order below `−k`, which must vanish.
pub fn constant_terms_fit(state: &CMState, torus: &Torus, k_max: usize, opts: &FitOptions) -> Result<Vec<LaurentFit>> {
    if opts.samples < 2 * k_max + 8 {
        return Err(invalid("too few circle samples for the requested order"));
    }
    let r = opts.radius_factor * torus.min_period();
    let m = opts.samples;
    let extra = 4;
    // coeffs[k-1][j] accumulates Σ f_k(z) z^j for j = 0..=k+extra.
    let mut sums = vec![vec![Complex64::new(0.0, 0.0); k_max + extra + 1]; k_max];
    let mut fmax = vec![0.0f64; k_max];
    for s in 0..m {
        let z = Complex64::from_polar(r, 2.0 * PI * (s as f64 + 0.5) / m as f64);
        let traces = lax_power_traces(&cm_lax(state, z, torus)?, k_max);
        for (k, f) in traces.into_iter().enumerate() {
            fmax[k] = fmax[k].max(f.norm());
            let mut zp = Complex64::new(1.0, 0.0);
            for acc in sums[k].iter_mut() {
                *acc += f * zp;
                zp *= z;
            }
        }
    }
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let row = &sums[k - 1];
        let constant = row[0] / m as f64;
        let scale = fmax[k - 1].max(1.0);
        let residual = (k + 1..=k + extra)
            .map(|j| (row[j] / m as f64).norm() * r.powi(-(j as i32)) / scale)
            .fold(0.0, f64::max);
        if residual > opts.tol {
            return Err(Error::FitResidual { residual, tol: opts.tol });
        }
        out.push(LaurentFit { constant, residual });
    }
    Ok(out)
}

/// `H_1 .. H_{k_max}`: `H₁ = Σp`, `H₂` in closed form, and for `k ≥ 3` the
/// constant term of `tr φ^k` from the circle fit.
pub fn cm_hamiltonians(state: &CMState, torus: &Torus, k_max: usize, opts: &FitOptions) -> Result<Vec<Complex64>> {
    let n = state.n();
    if k_max < 1 || k_max > n {
        return Err(invalid(format!("k_max must be in 1..={n}, got {k_max}")));
    }
    let mut out = vec![state.p.iter().sum()];
    if k_max >= 2 {
        out.push(cm_h2(state, torus)?);
    }
    if k_max >= 3 {
        let fits = constant_terms_fit(state, torus, k_max, opts)?;
        out.extend(fits[2..].iter().map(|f| f.constant));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CmFlowOptions {
    pub midpoint: MidpointOptions,
    pub fit: FitOptions,
    /// Evaluate conserved quantities every this many steps (at least 1).
    pub stride: usize,
}

#[derive(Clone, Debug)]
pub struct CmTrajectory {
    pub step: f64,
    pub times: Vec<f64>,
    pub states: Vec<CMState>,
    /// `invariants[s]` holds `H_1 .. H_{min(n,3)}` at `times[s]`.
    pub invariants: Vec<Vec<Complex64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CmDriftReport {
    pub n: usize,
    pub steps: usize,
    pub step: f64,
    /// Maximal `|H_k(t) − H_k(0)|`, starting with `H₁`.
    pub drift: Vec<f64>,
}

impl CmTrajectory {
    pub fn drift(&self) -> Vec<f64> {
        let first = &self.invariants[0];
        let mut out = vec![0.0f64; first.len()];
        for row in &self.invariants {
            for (o, (v, v0)) in out.iter_mut().zip(row.iter().zip(first)) {
                *o = o.max((v - v0).norm());
            }
        }
        out
    }

    pub fn report(&self) -> CmDriftReport {
        CmDriftReport {
            n: self.states[0].n(),
            steps: self.states.len().saturating_sub(1),
            step: self.step,
            drift: self.drift(),
        }
    }
}

fn pack(state: &CMState) -> Vec<f64> {
    state.q.iter().chain(&state.p).flat_map(|z| [z.re, z.im]).collect()
}

fn unpack(x: &[f64], n: usize, c: Complex64) -> CMState {
    let get = |k: usize| Complex64::new(x[2 * k], x[2 * k + 1]);
    CMState {
        q: (0..n).map(get).collect(),
        p: (n..2 * n).map(get).collect(),
        c,
    }
}

/// Right-hand side of the `H₂` flow on packed real coordinates.
fn h2_vector_field(x: &[f64], n: usize, c: Complex64, torus: &Torus) -> Vec<f64> {
    let s = unpack(x, n, c);
    let mut out = vec![0.0; 4 * n];
    let c2 = 2.0 * c * c;
    for i in 0..n {
        let qdot = 2.0 * s.p[i];
        let mut force = Complex64::new(0.0, 0.0);
        for j in 0..n {
            if i != j {
                // A pole here means the particles collided inside the implicit
                // iteration; NaN makes the step fail and is reported there.
                force += match wp_and_derivative(s.q[i] - s.q[j], torus, DEFAULT_TOL) {
                    Ok((_, d)) => d,
                    Err(_) => Complex64::new(f64::NAN, f64::NAN),
                };
            }
        }
        let pdot = c2 * force;
        out[2 * i] = qdot.re;
        out[2 * i + 1] = qdot.im;
        out[2 * (n + i)] = pdot.re;
        out[2 * (n + i) + 1] = pdot.im;
    }
    out
}

/// Integrates the `H₂` flow and records `H₁`, `H₂` and (for `n ≥ 3`) `H₃`.
pub fn cm_flow(state: &CMState, torus: &Torus, t_end: f64, step: f64, opts: &CmFlowOptions) -> Result<CmTrajectory> {
    let n = state.n();
    if let Some((i, j)) = state.collision(torus) {
        return Err(Error::Collision { i: i + 1, j: j + 1, step: 0 });
    }
    let k_max = n.min(3);
    let stride = opts.stride.max(1);
    let c = state.c;
    let mut traj = CmTrajectory {
        step,
        times: Vec::new(),
        states: Vec::new(),
        invariants: Vec::new(),
    };
    let (steps, h) = crate::integrate::step_plan(t_end, step)?;
    traj.step = h;
    integrate(
        |x| h2_vector_field(x, n, c, torus),
        &pack(state),
        t_end,
        step,
        &opts.midpoint,
        |s, t, x| {
            let st = unpack(x, n, c);
            if let Some((i, j)) = st.collision(torus) {
                return Err(Error::Collision { i: i + 1, j: j + 1, step: s });
            }
            if s % stride == 0 || s == steps {
                traj.invariants.push(cm_hamiltonians(&st, torus, k_max, &opts.fit)?);
                traj.times.push(t);
                traj.states.push(st);
            }
            Ok(())
        },
    )?;
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_cm::functions::wp;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_particles() {
        let torus = Torus::new(c(0.0, 1.0)).unwrap();
        let st = CMState::real(&[0.1, 0.4, 0.7], &[0.3, -0.2, 0.5], 0.0).unwrap();
        let lax = cm_lax(&st, c(0.2, 0.1), &torus).unwrap();
        assert_eq!(lax, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(st.p.clone())));
        let h = cm_hamiltonians(&st, &torus, 3, &FitOptions::default()).unwrap();
        for (k, hk) in h.iter().enumerate() {
            let free: Complex64 = st.p.iter().map(|p| p.powi(k as i32 + 1)).sum();
            assert!((hk - free).norm() < 1e-10);
        }
    }

    #[test]
    fn two_particle_product_and_trace() {
        let torus = Torus::new(c(0.5, 1.0)).unwrap();
        let st = CMState::real(&[0.1, -0.25], &[0.3, 0.6], 0.8).unwrap();
        let z = c(0.21, 0.13);
        let lax = cm_lax(&st, z, &torus).unwrap();
        let prod = lax[(0, 1)] * lax[(1, 0)];
        let expected = st.c * st.c * (wp(z, &torus, DEFAULT_TOL).unwrap() - wp(st.q[0] - st.q[1], &torus, DEFAULT_TOL).unwrap());
        assert!((prod - expected).norm() < 1e-9 * expected.norm());
        assert!((lax.trace() - (st.p[0] + st.p[1])).norm() < 1e-14);
    }

    #[test]
    fn quadratic_constant_term_is_z_independent() {
        let torus = Torus::new(c(0.0, 1.0)).unwrap();
        let st = CMState::real(&[0.05, 0.4, 0.77], &[0.3, -0.1, 0.45], 0.7).unwrap();
        let h2 = cm_h2(&st, &torus).unwrap();
        let n = st.n() as f64;
        for &z in &[c(0.1, 0.2), c(0.33, -0.4), c(-0.2, 0.45)] {
            let tr2 = lax_power_traces(&cm_lax(&st, z, &torus).unwrap(), 2)[1];
            let ct = tr2 - n * (n - 1.0) * st.c * st.c * wp(z, &torus, DEFAULT_TOL).unwrap();
            assert!((ct - h2).norm() < 1e-8, "{ct} vs {h2}");
        }
        let fit = constant_terms_fit(&st, &torus, 3, &FitOptions::default()).unwrap();
        assert!((fit[1].constant - h2).norm() < 1e-8);
    }

    #[test]
    fn coincident_positions_rejected() {
        let torus = Torus::new(c(0.0, 1.0)).unwrap();
        let st = CMState::real(&[0.1, 1.1], &[0.0, 0.0], 1.0).unwrap();
        assert!(cm_lax(&st, c(0.3, 0.1), &torus).is_err());
        assert!(matches!(
            cm_flow(&st, &torus, 1.0, 0.1, &CmFlowOptions::default()),
            Err(Error::Collision { .. })
        ));
    }

    #[test]
    fn cubic_hamiltonian_is_affine_in_each_momentum() {
        let torus = Torus::new(c(0.2, 1.1)).unwrap();
        let base = CMState::real(&[0.05, 0.36, 0.71], &[0.12, -0.05, 0.09], 0.6).unwrap();
        let lower = |st: &CMState| {
            let h = cm_hamiltonians(st, &torus, 3, &FitOptions::default()).unwrap();
            h[2] - st.p.iter().map(|p| p * p * p).sum::<Complex64>()
        };
        for i in 0..3 {
            let delta = 0.3;
            let shifted = |d: f64| {
                let mut st = base.clone();
                st.p[i] += d;
                lower(&st)
            };
            let second = shifted(delta) - 2.0 * shifted(0.0) + shifted(-delta);
            assert!(second.norm() < 1e-9, "momentum {i}: {second}");
            // the first difference is not identically zero
            assert!((shifted(delta) - shifted(0.0)).norm() > 1e-3);
        }
    }

    #[test]
    fn repulsive_flow_conserves_hamiltonians() {
        let torus = Torus::new(c(0.0, 1.0)).unwrap();
        let mut st = CMState::real(&[0.05, 0.36, 0.71], &[0.12, -0.05, 0.09], 0.0).unwrap();
        st.c = c(0.0, 0.2);
        let opts = CmFlowOptions { stride: 10, ..Default::default() };
        let coarse = cm_flow(&st, &torus, 0.2, 2e-3, &opts).unwrap().drift();
        let fine = cm_flow(&st, &torus, 0.2, 1e-3, &opts).unwrap().drift();
        assert!(coarse[0] < 1e-13);
        assert!(coarse[1] < 1e-6 && coarse[2] < 1e-5);
        assert!(coarse[1] / fine[1] > 3.5);
    }

    #[test]
    fn free_flow_is_straight() {
        let torus = Torus::new(c(0.0, 1.0)).unwrap();
        let st = CMState::real(&[0.1, 0.5], &[0.3, 0.1], 0.0).unwrap();
        let traj = cm_flow(&st, &torus, 0.5, 0.01, &CmFlowOptions::default()).unwrap();
        let last = traj.states.last().unwrap();
        assert!((last.q[0] - c(0.1 + 2.0 * 0.3 * 0.5, 0.0)).norm() < 1e-12);
        assert!(traj.drift().iter().all(|&d| d < 1e-12));
    }
}
