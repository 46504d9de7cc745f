//! Floating-point layer: compiled hamiltonians, flows and a residue-fit
//! cross-check.

use super::{garnier_hamiltonians, moment_constraints, p_var, y_var, GarnierData, PhaseState};
use crate::error::{invalid, Result};
use crate::exactalg::poly::CompiledPoly;
use crate::exactalg::rat::rat_to_f64;
use crate::exactalg::Var;
use crate::integrate::{integrate, MidpointOptions};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

/// Hamiltonians and their gradients compiled for fast evaluation on
/// `[y_1..y_N, p_1..p_N]`.
#[derive(Clone, Debug)]
pub struct NumericGarnier {
    n: usize,
    t: Vec<f64>,
    lambda: Vec<f64>,
    g: Vec<CompiledPoly>,
    dg_dy: Vec<Vec<CompiledPoly>>,
    dg_dp: Vec<Vec<CompiledPoly>>,
}

impl NumericGarnier {
    pub fn new(data: &GarnierData) -> Result<Self> {
        let lambda = data
            .lambda_values()
            .ok_or_else(|| invalid("numeric evaluation needs numeric twist parameters"))?;
        let n = data.n();
        let slots: Vec<Var> = (1..=n).map(y_var).chain((1..=n).map(p_var)).collect();
        let polys: Vec<_> = garnier_hamiltonians(data)
            .into_iter()
            .map(|g| g.as_poly().cloned().ok_or_else(|| invalid("hamiltonian is not polynomial")))
            .collect::<Result<_>>()?;
        let compile = |p: &crate::exactalg::Poly| p.compile(&slots);
        let g = polys.iter().map(compile).collect::<Result<Vec<_>>>()?;
        let grad = |v: fn(usize) -> Var| -> Result<Vec<Vec<CompiledPoly>>> {
            polys
                .iter()
                .map(|p| (1..=n).map(|k| compile(&p.derivative(v(k)))).collect())
                .collect()
        };
        Ok(NumericGarnier {
            n,
            t: data.points().iter().map(rat_to_f64).collect(),
            lambda: lambda.iter().map(rat_to_f64).collect(),
            dg_dy: grad(y_var)?,
            dg_dp: grad(p_var)?,
            g,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[f64] {
        &self.t
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    fn pack(state: &PhaseState<f64>) -> Vec<f64> {
        state.y.iter().chain(&state.p).copied().collect()
    }

    /// All `G_j` at a packed state.
    pub fn values_packed(&self, x: &[f64]) -> Vec<f64> {
        self.g.iter().map(|g| g.eval(x)).collect()
    }

    pub fn values(&self, state: &PhaseState<f64>) -> Vec<f64> {
        self.values_packed(&Self::pack(state))
    }

    /// `(ẏ, ṗ) = (∂G/∂p, −∂G/∂y)`, or `(∂G/∂p, +∂G/∂y)` when `broken`.
    pub fn vector_field(&self, h: usize, x: &[f64], broken: bool) -> Vec<f64> {
        let sign = if broken { 1.0 } else { -1.0 };
        let mut out = Vec::with_capacity(2 * self.n);
        out.extend(self.dg_dp[h].iter().map(|d| d.eval(x)));
        out.extend(self.dg_dy[h].iter().map(|d| sign * d.eval(x)));
        out
    }

    /// Entries of `A_i` at a state (0-based `i`).
    pub fn residue(&self, state: &PhaseState<f64>, i: usize) -> [[f64; 2]; 2] {
        residue_entries(state.y[i], state.p[i], self.lambda[i])
    }
}

pub(crate) fn residue_entries(y: f64, p: f64, l: f64) -> [[f64; 2]; 2] {
    [[-l + p * y, 2.0 * l * y - p * y * y], [p, l - p * y]]
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FlowOptions {
    pub midpoint: MidpointOptions,
    /// Negative control: flips the sign of `ṗ` so the equations are no
    /// longer Hamiltonian.
    pub broken: bool,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub h_index: usize,
    pub step: f64,
    pub times: Vec<f64>,
    pub states: Vec<PhaseState<f64>>,
    /// `hamiltonians[s][j]` is `G_{j+1}` after step `s`.
    pub hamiltonians: Vec<Vec<f64>>,
    pub constraints: Vec<[f64; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowReport {
    pub h_index: usize,
    pub steps: usize,
    pub step: f64,
    pub max_drift: Vec<f64>,
    pub max_constraint: f64,
}

impl Trajectory {
    /// `max_s |G_j(s) − G_j(0)|` for each `j`.
    pub fn max_drift(&self) -> Vec<f64> {
        let first = &self.hamiltonians[0];
        let mut out = vec![0.0f64; first.len()];
        for row in &self.hamiltonians {
            for (o, (v, v0)) in out.iter_mut().zip(row.iter().zip(first)) {
                *o = o.max((v - v0).abs());
            }
        }
        out
    }

    pub fn max_constraint(&self) -> f64 {
        self.constraints
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn report(&self) -> FlowReport {
        FlowReport {
            h_index: self.h_index,
            steps: self.times.len() - 1,
            step: self.step,
            max_drift: self.max_drift(),
            max_constraint: self.max_constraint(),
        }
    }
}

/// Integrates the flow of `G_{h_index}` (1-based) with the implicit midpoint
/// rule, recording every hamiltonian and the moment constraints at each step.
pub fn hamilton_flow(
    data: &GarnierData,
    h_index: usize,
    state: &PhaseState<f64>,
    t_end: f64,
    step: f64,
    opts: &FlowOptions,
) -> Result<Trajectory> {
    let sys = NumericGarnier::new(data)?;
    hamilton_flow_compiled(&sys, h_index, state, t_end, step, opts)
}

pub fn hamilton_flow_compiled(
    sys: &NumericGarnier,
    h_index: usize,
    state: &PhaseState<f64>,
    t_end: f64,
    step: f64,
    opts: &FlowOptions,
) -> Result<Trajectory> {
    let n = sys.n;
    if h_index < 1 || h_index > n {
        return Err(invalid(format!("hamiltonian index must be in 1..={n}, got {h_index}")));
    }
    if state.n() != n {
        return Err(invalid("state size does not match the number of marked points"));
    }
    let h = h_index - 1;
    let mut traj = Trajectory {
        h_index,
        step,
        times: Vec::new(),
        states: Vec::new(),
        hamiltonians: Vec::new(),
        constraints: Vec::new(),
    };
    let x0 = NumericGarnier::pack(state);
    integrate(
        |x| sys.vector_field(h, x, opts.broken),
        &x0,
        t_end,
        step,
        &opts.midpoint,
        |_, t, x| {
            let s = PhaseState {
                y: x[..n].to_vec(),
                p: x[n..].to_vec(),
            };
            traj.times.push(t);
            traj.hamiltonians.push(sys.values_packed(x));
            traj.constraints.push(moment_constraints(&s.y, &s.p));
            traj.states.push(s);
            Ok(())
        },
    )?;
    if let Some(&last) = traj.times.last() {
        if traj.times.len() > 1 {
            traj.step = last / (traj.times.len() - 1) as f64;
        }
    }
    Ok(traj)
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueFit {
    /// Fitted simple-pole coefficients of `½ tr φ(z)²`.
    pub g: Vec<f64>,
    /// Fitted double-pole coefficients (equal to `λ_i²`).
    pub double_pole: Vec<f64>,
    pub residual: f64,
}

/// Recovers the `G_i` from samples of `½ tr φ(z)²` alone, by least-squares
/// fitting `Σ_i [c_i/(z−t_i) + d_i/(z−t_i)²]` at points placed on small
/// circles around each `t_i`. Independent of the symbolic hamiltonians.
pub fn residue_fit_hamiltonians(data: &GarnierData, state: &PhaseState<f64>) -> Result<ResidueFit> {
    let lambda: Vec<f64> = data
        .lambda_values()
        .ok_or_else(|| invalid("residue fit needs numeric twist parameters"))?
        .iter()
        .map(rat_to_f64)
        .collect();
    let t: Vec<f64> = data.points().iter().map(rat_to_f64).collect();
    let n = t.len();
    let spacing = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| (t[i] - t[j]).abs())
        .fold(f64::INFINITY, f64::min);
    let per_point = 3;
    let samples: Vec<Complex64> = (0..n)
        .flat_map(|i| {
            let ti = t[i];
            (0..per_point).map(move |k| {
                let angle = 0.7 + 2.0 * std::f64::consts::PI * k as f64 / per_point as f64;
                Complex64::new(ti, 0.0) + Complex64::from_polar(0.4 * spacing, angle)
            })
        })
        .collect();
    let a: Vec<[[f64; 2]; 2]> = (0..n).map(|i| residue_entries(state.y[i], state.p[i], lambda[i])).collect();
    let half_tr_sq = |z: Complex64| {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..n {
            let w = (z - t[i]).inv();
            for r in 0..2 {
                for c in 0..2 {
                    m[r][c] += w * a[i][r][c];
                }
            }
        }
        0.5 * (m[0][0] * m[0][0] + 2.0 * m[0][1] * m[1][0] + m[1][1] * m[1][1])
    };
    let rows = samples.len();
    let design = DMatrix::from_fn(rows, 2 * n, |r, c| {
        let w = (samples[r] - t[c % n]).inv();
        if c < n {
            w
        } else {
            w * w
        }
    });
    let rhs = DVector::from_iterator(rows, samples.iter().map(|&z| half_tr_sq(z)));
    let svd = design.clone().svd(true, true);
    let sol = svd.solve(&rhs, 1e-14).map_err(|e| invalid(format!("residue fit failed: {e}")))?;
    let residual = (&design * &sol - &rhs).iter().fold(0.0f64, |m, r| m.max(r.norm()));
    Ok(ResidueFit {
        g: (0..n).map(|i| sol[i].re).collect(),
        double_pole: (0..n).map(|i| sol[n + i].re).collect(),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{random_admissible_state, GarnierData};
    use super::*;
    use crate::exactalg::{rat, Rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn data4() -> GarnierData {
        GarnierData::untwisted([0, 1, 3, 6].iter().map(|&x| rat(x)).collect()).unwrap()
    }

    #[test]
    fn zero_momenta_is_a_fixed_point() {
        let state = PhaseState::new(vec![0.1, 0.5, -0.3, 0.9], vec![0.0; 4]).unwrap();
        let traj = hamilton_flow(&data4(), 2, &state, 0.1, 1e-2, &FlowOptions::default()).unwrap();
        assert!(traj.states.iter().all(|s| s == &state));
    }

    #[test]
    fn residue_fit_matches_symbolic_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let exact = random_admissible_state(4, &mut rng).unwrap();
        let state = exact.to_f64();
        let data = data4();
        let fit = residue_fit_hamiltonians(&data, &state).unwrap();
        let direct = NumericGarnier::new(&data).unwrap().values(&state);
        for (a, b) in fit.g.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-8 * (1.0 + b.abs()), "{a} vs {b}");
        }
        let twisted = GarnierData::twisted(data.points().to_vec(), vec![rat(1), Rat::new(1.into(), 2.into()), rat(0), rat(-2)]).unwrap();
        let fit = residue_fit_hamiltonians(&twisted, &state).unwrap();
        let direct = NumericGarnier::new(&twisted).unwrap().values(&state);
        for (a, b) in fit.g.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-8 * (1.0 + b.abs()), "{a} vs {b}");
        }
        assert!((fit.double_pole[3] - 4.0).abs() < 1e-8);
    }

    #[test]
    fn bad_index_rejected() {
        let state = PhaseState::new(vec![0.0; 4], vec![0.0; 4]).unwrap();
        assert!(hamilton_flow(&data4(), 0, &state, 1.0, 0.1, &FlowOptions::default()).is_err());
        assert!(hamilton_flow(&data4(), 5, &state, 1.0, 0.1, &FlowOptions::default()).is_err());
    }
}
