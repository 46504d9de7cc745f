//! Garnier and twisted Garnier systems.
//!
//! The phase space has canonical pairs `(y_i, p_i)` attached to marked points
//! `t_1..t_N` on the projective line, and optional twist parameters `λ_i`
//! which become the eigenvalues `±λ_i` of the residues of the Higgs field
//!
//! ```text
//! φ(z) = Σ_i A_i / (z − t_i),
//! A_i = [[−λ_i + p_i y_i,  2λ_i y_i − p_i y_i²],
//!        [p_i,             λ_i − p_i y_i     ]].
//! ```
//!
//! The hamiltonians `G_i` are the residues of `½ tr φ(z)²` at `t_i`.

mod numeric;

pub(crate) use numeric::residue_entries;
pub use numeric::{
    hamilton_flow, residue_fit_hamiltonians, FlowOptions, FlowReport, NumericGarnier, ResidueFit, Trajectory,
};

use crate::error::{invalid, Result};
use crate::exactalg::{reduce_mod_ideal, PoissonStructure, Poly, QMatrix, Rat, RatFunc, Var};
use num_traits::{Num, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

/// Position variable `y_i` (1-based).
pub fn y_var(i: usize) -> Var {
    Var::indexed("y", i)
}

/// Momentum variable `p_i` (1-based).
pub fn p_var(i: usize) -> Var {
    Var::indexed("p", i)
}

/// Symbolic twist parameter `λ_i` (1-based).
pub fn lambda_var(i: usize) -> Var {
    Var::indexed("lambda", i)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Twist {
    Untwisted,
    Numeric(Vec<Rat>),
    /// Every `λ_i` is an independent symbol.
    Symbolic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GarnierData {
    t: Vec<Rat>,
    twist: Twist,
}

impl GarnierData {
    pub fn untwisted(t: Vec<Rat>) -> Result<Self> {
        Self::new(t, Twist::Untwisted)
    }

    pub fn twisted(t: Vec<Rat>, lambda: Vec<Rat>) -> Result<Self> {
        Self::new(t, Twist::Numeric(lambda))
    }

    pub fn symbolic(t: Vec<Rat>) -> Result<Self> {
        Self::new(t, Twist::Symbolic)
    }

    pub fn new(t: Vec<Rat>, twist: Twist) -> Result<Self> {
        if t.len() < 4 {
            return Err(invalid(format!("need at least 4 marked points, got {}", t.len())));
        }
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                if t[i] == t[j] {
                    return Err(invalid(format!("marked points t{} and t{} coincide", i + 1, j + 1)));
                }
            }
        }
        if let Twist::Numeric(l) = &twist {
            if l.len() != t.len() {
                return Err(invalid(format!("expected {} twist parameters, got {}", t.len(), l.len())));
            }
        }
        Ok(GarnierData { t, twist })
    }

    /// The points `0, 1, 3, 6, 10, …` (triangular numbers).
    pub fn default_points(n: usize) -> Vec<Rat> {
        (0..n).map(|i| Rat::from_integer(((i * (i + 1) / 2) as i64).into())).collect()
    }

    pub fn n(&self) -> usize {
        self.t.len()
    }

    pub fn points(&self) -> &[Rat] {
        &self.t
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    pub fn is_untwisted(&self) -> bool {
        match &self.twist {
            Twist::Untwisted => true,
            Twist::Numeric(l) => l.iter().all(Zero::is_zero),
            Twist::Symbolic => false,
        }
    }

    /// `λ_i` (0-based) as a rational function.
    pub fn lambda(&self, i: usize) -> RatFunc {
        match &self.twist {
            Twist::Untwisted => RatFunc::zero(),
            Twist::Numeric(l) => RatFunc::constant(l[i].clone()),
            Twist::Symbolic => RatFunc::var(lambda_var(i + 1)),
        }
    }

    /// Numeric twist values; `None` when they are symbolic.
    pub fn lambda_values(&self) -> Option<Vec<Rat>> {
        match &self.twist {
            Twist::Untwisted => Some(vec![Rat::zero(); self.n()]),
            Twist::Numeric(l) => Some(l.clone()),
            Twist::Symbolic => None,
        }
    }

    /// Canonical pairs `(y_i, p_i)`.
    pub fn pairs(&self) -> Vec<(Var, Var)> {
        (1..=self.n()).map(|i| (y_var(i), p_var(i))).collect()
    }

    pub fn parameters(&self) -> Vec<Var> {
        match self.twist {
            Twist::Symbolic => (1..=self.n()).map(lambda_var).collect(),
            _ => Vec::new(),
        }
    }

    pub fn poisson_structure(&self) -> PoissonStructure {
        PoissonStructure::new(self.pairs(), self.parameters()).expect("Garnier coordinates are distinct")
    }
}

/// A `2 × 2` matrix of rational functions.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueMatrix(pub [[RatFunc; 2]; 2]);

impl ResidueMatrix {
    pub fn entry(&self, i: usize, j: usize) -> &RatFunc {
        &self.0[i][j]
    }

    pub fn trace(&self) -> RatFunc {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn det(&self) -> RatFunc {
        &(&self.0[0][0] * &self.0[1][1]) - &(&self.0[0][1] * &self.0[1][0])
    }

    pub fn mul(&self, other: &ResidueMatrix) -> ResidueMatrix {
        let e = |i: usize, j: usize| &(&self.0[i][0] * &other.0[0][j]) + &(&self.0[i][1] * &other.0[1][j]);
        ResidueMatrix([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn substitute(&self, values: &HashMap<Var, Rat>) -> Result<ResidueMatrix> {
        let s = |f: &RatFunc| f.eval_partial(values);
        Ok(ResidueMatrix([
            [s(&self.0[0][0])?, s(&self.0[0][1])?],
            [s(&self.0[1][0])?, s(&self.0[1][1])?],
        ]))
    }
}

/// The residue `A_i` of the Higgs field at `t_i` (0-based `i`).
pub fn residue_matrix(data: &GarnierData, i: usize) -> ResidueMatrix {
    let y = RatFunc::var(y_var(i + 1));
    let p = RatFunc::var(p_var(i + 1));
    let l = data.lambda(i);
    let py = &p * &y;
    let two = RatFunc::int(2);
    ResidueMatrix([
        [&py - &l, &(&(&two * &l) * &y) - &(&py * &y)],
        [p.clone(), &l - &py],
    ])
}

pub fn residue_matrices(data: &GarnierData) -> Vec<ResidueMatrix> {
    (0..data.n()).map(|i| residue_matrix(data, i)).collect()
}

/// `G_i = Σ_{j≠i} [(y_i−y_j)² p_i p_j − 2(λ_i p_j − λ_j p_i)(y_i−y_j) − 2λ_iλ_j] / (t_j − t_i)`.
pub fn garnier_hamiltonian(data: &GarnierData, i: usize) -> RatFunc {
    let n = data.n();
    let (yi, pi, li) = (RatFunc::var(y_var(i + 1)), RatFunc::var(p_var(i + 1)), data.lambda(i));
    let two = RatFunc::int(2);
    let terms: Vec<RatFunc> = (0..n)
        .filter(|&j| j != i)
        .map(|j| {
            let (yj, pj, lj) = (RatFunc::var(y_var(j + 1)), RatFunc::var(p_var(j + 1)), data.lambda(j));
            let dy = &yi - &yj;
            let quad = &(&(&dy * &dy) * &pi) * &pj;
            let twist = &(&two * &(&(&li * &pj) - &(&lj * &pi))) * &dy;
            let constant = &(&two * &li) * &lj;
            let numer = &(&quad - &twist) - &constant;
            numer.scale(&(&data.t[j] - &data.t[i]).recip())
        })
        .collect();
    RatFunc::sum(terms.iter())
}

pub fn garnier_hamiltonians(data: &GarnierData) -> Vec<RatFunc> {
    (0..data.n()).map(|i| garnier_hamiltonian(data, i)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PairBracket {
    pub i: usize,
    pub j: usize,
    pub zero: bool,
    /// Number of terms in the reduced numerator (0 when the bracket vanishes).
    pub terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolutionReport {
    pub n: usize,
    pub twist: String,
    pub pairs: Vec<PairBracket>,
    pub all_zero: bool,
}

/// Largest `N` accepted by [`check_involution`].
pub const DEFAULT_MAX_EXACT_N: usize = 6;

/// Exact brackets `{G_i, G_j}` for all `i < j`.
pub fn check_involution(data: &GarnierData) -> Result<InvolutionReport> {
    check_involution_bounded(data, DEFAULT_MAX_EXACT_N)
}

pub fn check_involution_bounded(data: &GarnierData, max_n: usize) -> Result<InvolutionReport> {
    if data.n() > max_n {
        return Err(invalid(format!(
            "exact involution check limited to N ≤ {max_n}, got N = {}",
            data.n()
        )));
    }
    let ps = data.poisson_structure();
    let g = garnier_hamiltonians(data);
    let n = data.n();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let results: Vec<Result<PairBracket>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let b = ps.bracket(&g[i], &g[j])?;
            Ok(PairBracket {
                i: i + 1,
                j: j + 1,
                zero: b.is_zero(),
                terms: b.numer().num_terms(),
            })
        })
        .collect();
    let pairs = results.into_iter().collect::<Result<Vec<_>>>()?;
    let all_zero = pairs.iter().all(|p| p.zero);
    let twist = match data.twist() {
        Twist::Untwisted => "none",
        Twist::Numeric(_) => "numeric",
        Twist::Symbolic => "symbolic",
    };
    Ok(InvolutionReport {
        n,
        twist: twist.into(),
        pairs,
        all_zero,
    })
}

/// `(Σ p_i, Σ p_i y_i, Σ p_i y_i²)`.
pub fn moment_constraints<T: Num + Clone>(y: &[T], p: &[T]) -> [T; 3] {
    let mut out = [T::zero(), T::zero(), T::zero()];
    for (yi, pi) in y.iter().zip(p) {
        let py = pi.clone() * yi.clone();
        out[0] = out[0].clone() + pi.clone();
        out[2] = out[2].clone() + py.clone() * yi.clone();
        out[1] = out[1].clone() + py;
    }
    out
}

/// The constraint polynomials `Σ p_i y_i^k`, `k = 0, 1, 2`.
pub fn constraint_generators(n: usize) -> [Poly; 3] {
    let mut out = [Poly::zero(), Poly::zero(), Poly::zero()];
    for i in 1..=n {
        let (y, p) = (Poly::var(y_var(i)), Poly::var(p_var(i)));
        out[0] += &p;
        out[1] += &(&p * &y);
        out[2] += &(&(&p * &y) * &y);
    }
    out
}

/// A phase-space point.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseState<T> {
    pub y: Vec<T>,
    pub p: Vec<T>,
}

impl<T> PhaseState<T> {
    pub fn new(y: Vec<T>, p: Vec<T>) -> Result<Self> {
        if y.len() != p.len() {
            return Err(invalid(format!(
                "positions and momenta differ in length ({} vs {})",
                y.len(),
                p.len()
            )));
        }
        Ok(PhaseState { y, p })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }
}

impl PhaseState<Rat> {
    pub fn to_f64(&self) -> PhaseState<f64> {
        let f = |v: &[Rat]| v.iter().map(crate::exactalg::rat::rat_to_f64).collect();
        PhaseState {
            y: f(&self.y),
            p: f(&self.p),
        }
    }

    /// Variable assignment for exact evaluation, including numeric twists.
    pub fn assignment(&self, data: &GarnierData) -> HashMap<Var, Rat> {
        let mut values = HashMap::new();
        for i in 0..self.n() {
            values.insert(y_var(i + 1), self.y[i].clone());
            values.insert(p_var(i + 1), self.p[i].clone());
        }
        if let Twist::Numeric(l) = data.twist() {
            for (i, li) in l.iter().enumerate() {
                values.insert(lambda_var(i + 1), li.clone());
            }
        }
        values
    }
}

/// Completes free momenta `p_1..p_{N−3}` with the unique `p_{N−2}, p_{N−1}, p_N`
/// satisfying the three moment constraints. The last three positions must be
/// distinct.
pub fn admissible_momenta(y: &[Rat], free: &[Rat]) -> Result<Vec<Rat>> {
    let n = y.len();
    if n < 3 || free.len() != n - 3 {
        return Err(invalid("need N ≥ 3 positions and exactly N − 3 free momenta"));
    }
    let vander = QMatrix::from_fn(3, 3, |k, j| num_traits::pow(y[n - 3 + j].clone(), k));
    let rhs = QMatrix::from_fn(3, 1, |k, _| {
        -free.iter().zip(y).map(|(p, yi)| p * num_traits::pow(yi.clone(), k)).sum::<Rat>()
    });
    let sol = vander
        .solve(&rhs)
        .filter(|_| vander.rank() == 3)
        .ok_or_else(|| invalid("the last three positions must be distinct"))?;
    let mut p = free.to_vec();
    p.extend((0..3).map(|j| sol[(j, 0)].clone()));
    Ok(p)
}

fn small_rat<R: Rng>(rng: &mut R, span: i64, max_den: i64) -> Rat {
    Rat::new(rng.gen_range(-span..=span).into(), rng.gen_range(1..=max_den).into())
}

/// A random state on the constraint locus with small rational entries,
/// distinct positions and no vanishing momentum (a zero `p_i` kills the
/// residue at `t_i`, which is not generic).
pub fn random_admissible_state<R: Rng>(n: usize, rng: &mut R) -> Result<PhaseState<Rat>> {
    loop {
        let mut y: Vec<Rat> = Vec::with_capacity(n);
        while y.len() < n {
            let c = small_rat(rng, 9, 3);
            if !y.contains(&c) {
                y.push(c);
            }
        }
        let free: Vec<Rat> = (0..n.saturating_sub(3))
            .map(|_| loop {
                let c = small_rat(rng, 5, 2);
                if !c.is_zero() {
                    break c;
                }
            })
            .collect();
        let p = admissible_momenta(&y, &free)?;
        if p.iter().all(|x| !x.is_zero()) {
            return PhaseState::new(y, p);
        }
    }
}

/// `Σ_i t_i^k G_i` for `k = 0, 1, 2`.
pub fn weighted_sums(data: &GarnierData, g: &[RatFunc]) -> [RatFunc; 3] {
    let sum_k = |k: usize| {
        let terms: Vec<RatFunc> = g
            .iter()
            .zip(data.points())
            .map(|(gi, ti)| gi.scale(&num_traits::pow(ti.clone(), k)))
            .collect();
        RatFunc::sum(terms.iter())
    };
    [sum_k(0), sum_k(1), sum_k(2)]
}

#[derive(Clone, Debug, Serialize)]
pub struct SumEvaluation {
    pub sums: [String; 3],
    pub constraints: [String; 3],
    pub on_shell: bool,
    pub sums_vanish: bool,
}

/// Evaluates the weighted sums and the constraints at a single exact state.
pub fn evaluate_sums(data: &GarnierData, state: &PhaseState<Rat>) -> Result<SumEvaluation> {
    if state.n() != data.n() {
        return Err(invalid("state size does not match the number of marked points"));
    }
    let values = state.assignment(data);
    let g = garnier_hamiltonians(data);
    let sums = weighted_sums(data, &g)
        .iter()
        .map(|s| s.eval(&values))
        .collect::<Result<Vec<_>>>()?;
    let constraints = moment_constraints(&state.y, &state.p);
    let fmt = |v: &[Rat]| -> [String; 3] { std::array::from_fn(|k| crate::exactalg::format_rat(&v[k])) };
    Ok(SumEvaluation {
        on_shell: constraints.iter().all(Zero::is_zero),
        sums_vanish: sums.iter().all(Zero::is_zero),
        sums: fmt(&sums),
        constraints: fmt(&constraints),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SumIdentityReport {
    pub n: usize,
    /// Whether `Σ t_i^k G_i` reduces to zero modulo the constraint ideal.
    pub reductions: [bool; 3],
    pub sampled_states: usize,
    pub sampled_all_zero: bool,
    pub passed: bool,
}

/// Checks `Σ G_i = Σ t_i G_i = Σ t_i² G_i = 0` on the constraint locus, both
/// by exact reduction and at `samples` random admissible states.
pub fn sum_identities_check<R: Rng>(data: &GarnierData, samples: usize, rng: &mut R) -> Result<SumIdentityReport> {
    if !data.is_untwisted() {
        return Err(invalid("sum identities hold only for the untwisted system"));
    }
    let n = data.n();
    let g = garnier_hamiltonians(data);
    let sums = weighted_sums(data, &g);
    let gens = constraint_generators(n);
    let p_vars: Vec<Var> = (1..=n).map(p_var).collect();
    let mut reductions = [false; 3];
    for (k, s) in sums.iter().enumerate() {
        let poly = s
            .as_poly()
            .ok_or_else(|| invalid("weighted sum is not a polynomial"))?;
        reductions[k] = reduce_mod_ideal(poly, &gens, &p_vars)?.is_zero();
    }
    let mut sampled_all_zero = true;
    for _ in 0..samples {
        let state = random_admissible_state(n, rng)?;
        let values = state.assignment(data);
        for s in &sums {
            sampled_all_zero &= s.eval(&values)?.is_zero();
        }
    }
    Ok(SumIdentityReport {
        n,
        reductions,
        sampled_states: samples,
        sampled_all_zero,
        passed: reductions.iter().all(|&r| r) && sampled_all_zero,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SampledBracket {
    pub i: usize,
    pub j: usize,
    /// Largest `|{G_i, G_j}|` over the samples, relative to the size of the
    /// individual terms of the bracket.
    pub max_relative: f64,
    pub zero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampledInvolutionReport {
    pub n: usize,
    pub samples: usize,
    pub tol: f64,
    pub pairs: Vec<SampledBracket>,
    pub all_zero: bool,
}

/// Floating-point involution check: evaluates the gradients of every `G_i`
/// at random rational states and assembles the brackets numerically. Much
/// cheaper than [`check_involution`] and not limited in `N`.
pub fn check_involution_sampled<R: Rng>(data: &GarnierData, samples: usize, tol: f64, rng: &mut R) -> Result<SampledInvolutionReport> {
    let n = data.n();
    let g = garnier_hamiltonians(data);
    let grads: Vec<Vec<(RatFunc, RatFunc)>> = g
        .par_iter()
        .map(|gi| (1..=n).map(|k| (gi.derivative(y_var(k)), gi.derivative(p_var(k)))).collect())
        .collect();
    let mut worst = vec![0.0f64; n * n];
    for _ in 0..samples {
        let mut values: HashMap<Var, f64> = HashMap::new();
        for k in 1..=n {
            values.insert(y_var(k), small_rat(rng, 9, 3).to_f64().unwrap_or(0.0));
            values.insert(p_var(k), small_rat(rng, 5, 2).to_f64().unwrap_or(0.0));
            if matches!(data.twist(), Twist::Symbolic) {
                values.insert(lambda_var(k), small_rat(rng, 3, 2).to_f64().unwrap_or(0.0));
            }
        }
        let evals = grads
            .iter()
            .map(|gr| gr.iter().map(|(dy, dp)| Ok((dy.eval_f64(&values)?, dp.eval_f64(&values)?))).collect())
            .collect::<Result<Vec<Vec<(f64, f64)>>>>()?;
        for i in 0..n {
            for j in i + 1..n {
                let (mut b, mut size) = (0.0, 0.0);
                for k in 0..n {
                    let (fy, fp) = evals[i][k];
                    let (gy, gp) = evals[j][k];
                    b += fp * gy - fy * gp;
                    size += (fp * gy).abs() + (fy * gp).abs();
                }
                let rel = b.abs() / (1.0 + size);
                worst[i * n + j] = worst[i * n + j].max(if rel.is_nan() { f64::INFINITY } else { rel });
            }
        }
    }
    let pairs: Vec<SampledBracket> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| SampledBracket {
            i: i + 1,
            j: j + 1,
            max_relative: worst[i * n + j],
            zero: worst[i * n + j] < tol,
        })
        .collect();
    Ok(SampledInvolutionReport {
        n,
        samples,
        tol,
        all_zero: pairs.iter().all(|p| p.zero),
        pairs,
    })
}
