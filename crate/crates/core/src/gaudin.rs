//! Quantum Gaudin hamiltonians for `sl₂`
//!
//! ```text
//! Ĝ_i = Σ_{j≠i} Ω_{ij} / (t_i − t_j),   Ω = e⊗f + f⊗e + ½ h⊗h,
//! ```
//!
//! realized either as exact matrices on a tensor product of irreducible
//! representations or as differential operators in `x₁..x_N` through
//! `f ↦ −∂, h ↦ 2x∂ + Λ, e ↦ x²∂ + Λx`.

use crate::error::{invalid, Result};
use crate::exactalg::{format_rat, Poly, QMatrix, Rat, RatFunc, Var, WeylElement};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

/// The `d`-dimensional irreducible representation in the weight basis
/// `v_0, …, v_{d−1}`, highest weight first:
/// `H v_k = (d−1−2k) v_k`, `F v_k = v_{k+1}`, `E v_k = k(d−k) v_{k−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Irrep {
    pub d: usize,
    pub e: QMatrix,
    pub f: QMatrix,
    pub h: QMatrix,
}

pub fn sl2_irrep(d: usize) -> Result<Sl2Irrep> {
    if d < 1 {
        return Err(invalid("representation dimension must be at least 1"));
    }
    let mut e = QMatrix::zeros(d, d);
    let mut f = QMatrix::zeros(d, d);
    let h = QMatrix::diagonal(&(0..d).map(|k| Rat::from_integer((d as i64 - 1 - 2 * k as i64).into())).collect::<Vec<_>>());
    for k in 1..d {
        e[(k - 1, k)] = Rat::from_integer(((k * (d - k)) as i64).into());
        f[(k, k - 1)] = Rat::one();
    }
    Ok(Sl2Irrep { d, e, f, h })
}

impl Sl2Irrep {
    /// `EF + FE + ½H²`.
    pub fn casimir(&self) -> QMatrix {
        let hh = &self.h * &self.h;
        &(&(&self.e * &self.f) + &(&self.f * &self.e)) + &hh.scale(&Rat::new(1.into(), 2.into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sl2Generator {
    E,
    F,
    H,
}

impl Sl2Generator {
    pub const ALL: [Sl2Generator; 3] = [Sl2Generator::E, Sl2Generator::F, Sl2Generator::H];

    fn of(self, rep: &Sl2Irrep) -> &QMatrix {
        match self {
            Sl2Generator::E => &rep.e,
            Sl2Generator::F => &rep.f,
            Sl2Generator::H => &rep.h,
        }
    }
}

fn irreps(dims: &[usize]) -> Result<Vec<Sl2Irrep>> {
    if dims.is_empty() {
        return Err(invalid("need at least one site"));
    }
    dims.iter().map(|&d| sl2_irrep(d)).collect()
}

/// `1 ⊗ … ⊗ x ⊗ … ⊗ 1` with `x` in slot `slot` (0-based).
fn embed(dims: &[usize], slot: usize, x: &QMatrix) -> QMatrix {
    let left: usize = dims[..slot].iter().product();
    let right: usize = dims[slot + 1..].iter().product();
    QMatrix::identity(left).kron(x).kron(&QMatrix::identity(right))
}

fn site_ops(reps: &[Sl2Irrep], dims: &[usize]) -> Vec<[QMatrix; 3]> {
    reps.iter()
        .enumerate()
        .map(|(s, r)| Sl2Generator::ALL.map(|g| embed(dims, s, g.of(r))))
        .collect()
}

fn omega_from_sites(a: &[QMatrix; 3], b: &[QMatrix; 3]) -> QMatrix {
    let half = Rat::new(1.into(), 2.into());
    &(&(&a[0] * &b[1]) + &(&a[1] * &b[0])) + &(&a[2] * &b[2]).scale(&half)
}

/// `Ω` acting in slots `i` and `j` (1-based) of the tensor product.
pub fn casimir_action(dims: &[usize], i: usize, j: usize) -> Result<QMatrix> {
    let n = dims.len();
    if i == j {
        return Err(invalid("the Casimir tensor needs two different slots"));
    }
    if i < 1 || j < 1 || i > n || j > n {
        return Err(invalid(format!("slots must lie in 1..={n}")));
    }
    let reps = irreps(dims)?;
    let a = Sl2Generator::ALL.map(|g| embed(dims, i - 1, g.of(&reps[i - 1])));
    let b = Sl2Generator::ALL.map(|g| embed(dims, j - 1, g.of(&reps[j - 1])));
    Ok(omega_from_sites(&a, &b))
}

/// Diagonal action `Δ(x) = Σ_s x^{(s)}` on the tensor product.
pub fn diagonal_action(dims: &[usize], x: Sl2Generator) -> Result<QMatrix> {
    let reps = irreps(dims)?;
    let total: usize = dims.iter().product();
    Ok(reps
        .iter()
        .enumerate()
        .fold(QMatrix::zeros(total, total), |acc, (s, r)| &acc + &embed(dims, s, x.of(r))))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaudinFamily {
    pub dims: Vec<usize>,
    pub points: Vec<Rat>,
    /// Global factor in front of every operator (the dropped `ħ²`).
    pub scale: Rat,
    pub operators: Vec<QMatrix>,
}

impl GaudinFamily {
    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }
}

pub fn gaudin_operators(dims: &[usize], points: &[Rat]) -> Result<GaudinFamily> {
    gaudin_operators_scaled(dims, points, &Rat::one())
}

pub fn gaudin_operators_scaled(dims: &[usize], points: &[Rat], scale: &Rat) -> Result<GaudinFamily> {
    let denominators = |i: usize, j: usize| &points[i] - &points[j];
    build_family(dims, points, scale, denominators)
}

fn build_family(dims: &[usize], points: &[Rat], scale: &Rat, denom: impl Fn(usize, usize) -> Rat + Sync) -> Result<GaudinFamily> {
    let n = dims.len();
    if points.len() != n {
        return Err(invalid(format!("{} dimensions but {} points", n, points.len())));
    }
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                return Err(invalid(format!("points t{} and t{} coincide", i + 1, j + 1)));
            }
        }
    }
    let reps = irreps(dims)?;
    let sites = site_ops(&reps, dims);
    let total: usize = dims.iter().product();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let omegas: Vec<QMatrix> = pairs.par_iter().map(|&(i, j)| omega_from_sites(&sites[i], &sites[j])).collect();
    let mut operators = vec![QMatrix::zeros(total, total); n];
    for (&(i, j), om) in pairs.iter().zip(&omegas) {
        let dij = denom(i, j);
        let dji = denom(j, i);
        operators[i] = &operators[i] + &om.scale(&(scale / &dij));
        operators[j] = &operators[j] + &om.scale(&(scale / &dji));
    }
    Ok(GaudinFamily {
        dims: dims.to_vec(),
        points: points.to_vec(),
        scale: scale.clone(),
        operators,
    })
}

/// A family in which the denominator of `Ω_{ij}` inside `Ĝ_i` is replaced
/// by `2(t_i − t_j)`, which destroys commutativity. Negative control.
pub fn perturbed_family(dims: &[usize], points: &[Rat], i: usize, j: usize) -> Result<GaudinFamily> {
    let (pi, pj) = (i - 1, j - 1);
    build_family(dims, points, &Rat::one(), |a, b| {
        let d = &points[a] - &points[b];
        if (a, b) == (pi, pj) {
            d * rat_two()
        } else {
            d
        }
    })
}

fn rat_two() -> Rat {
    Rat::from_integer(2.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutatorEntry {
    pub i: usize,
    pub j: usize,
    pub zero: bool,
    /// Number of nonzero entries of the commutator.
    pub nonzero_entries: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalEntry {
    pub i: usize,
    pub generator: Sl2Generator,
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutativityReport {
    pub dims: Vec<usize>,
    pub points: Vec<String>,
    pub pairs: Vec<CommutatorEntry>,
    pub diagonal: Vec<DiagonalEntry>,
    pub diagonal_sl2: bool,
    pub all_zero: bool,
}

fn count_nonzero(m: &QMatrix) -> usize {
    (0..m.nrows()).map(|r| m.row(r).iter().filter(|x| !x.is_zero()).count()).sum()
}

pub fn commutativity_check(family: &GaudinFamily) -> Result<CommutativityReport> {
    let n = family.n();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let pair_entries: Vec<CommutatorEntry> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let c = family.operators[i].commutator(&family.operators[j]);
            let nz = count_nonzero(&c);
            CommutatorEntry { i: i + 1, j: j + 1, zero: nz == 0, nonzero_entries: nz }
        })
        .collect();
    let deltas: Vec<(Sl2Generator, QMatrix)> = Sl2Generator::ALL
        .iter()
        .map(|&g| Ok((g, diagonal_action(&family.dims, g)?)))
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..3).map(move |g| (i, g))).collect();
    let diagonal: Vec<DiagonalEntry> = jobs
        .par_iter()
        .map(|&(i, g)| DiagonalEntry {
            i: i + 1,
            generator: deltas[g].0,
            zero: family.operators[i].commutator(&deltas[g].1).is_zero(),
        })
        .collect();
    let diagonal_sl2 = diagonal.iter().all(|d| d.zero);
    let all_zero = diagonal_sl2 && pair_entries.iter().all(|p| p.zero);
    Ok(CommutativityReport {
        dims: family.dims.clone(),
        points: family.points.iter().map(format_rat).collect(),
        pairs: pair_entries,
        diagonal,
        diagonal_sl2,
        all_zero,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumSector {
    /// Eigenvalue of `Δ(h)` on the singular vectors of this sector.
    pub highest_weight: i64,
    /// Number of independent singular vectors.
    pub multiplicity: usize,
    /// Matrices of `Ĝ_1 .. Ĝ_N` on the singular vectors, rows of `"num/den"`.
    pub operators: Vec<Vec<Vec<String>>>,
    /// Characteristic polynomial of each restricted `Ĝ_i`, constant term first.
    pub charpolys: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub dims: Vec<usize>,
    pub points: Vec<String>,
    pub sectors: Vec<SpectrumSector>,
}

/// Weight of each basis vector of the tensor product (row-major multi-index).
fn basis_weights(dims: &[usize]) -> Vec<i64> {
    let total: usize = dims.iter().product();
    (0..total)
        .map(|mut idx| {
            let mut w = 0i64;
            for &d in dims.iter().rev() {
                let k = idx % d;
                idx /= d;
                w += d as i64 - 1 - 2 * k as i64;
            }
            w
        })
        .collect()
}

/// Restricts the family to the singular vectors `ker Δ(e) ∩ V[μ]` of each
/// highest weight `μ ≥ 0`, where the operators commute with `sl₂` and act
/// as commuting matrices, and returns their characteristic polynomials.
pub fn gaudin_spectrum(family: &GaudinFamily) -> Result<SpectrumReport> {
    let dims = &family.dims;
    let weights = basis_weights(dims);
    let e = diagonal_action(dims, Sl2Generator::E)?;
    let top = *weights.iter().max().unwrap_or(&0);
    let mut sectors = Vec::new();
    let mut mu = top;
    while mu >= 0 {
        let cols: Vec<usize> = (0..weights.len()).filter(|&k| weights[k] == mu).collect();
        let rows: Vec<usize> = (0..weights.len()).filter(|&k| weights[k] == mu + 2).collect();
        let block = QMatrix::from_fn(rows.len(), cols.len(), |r, c| e[(rows[r], cols[c])].clone());
        let kernel = if rows.is_empty() { QMatrix::identity(cols.len()) } else { block.nullspace() };
        let s = kernel.ncols();
        if s > 0 {
            let total = weights.len();
            let basis = QMatrix::from_fn(total, s, |r, c| match cols.iter().position(|&x| x == r) {
                Some(p) => kernel[(p, c)].clone(),
                None => Rat::zero(),
            });
            let mut operators = Vec::with_capacity(family.n());
            let mut charpolys = Vec::with_capacity(family.n());
            for g in &family.operators {
                let image = g * &basis;
                let m = basis
                    .solve(&image)
                    .ok_or_else(|| invalid("operator does not preserve the singular vectors"))?;
                charpolys.push(m.charpoly().coeffs().iter().map(format_rat).collect());
                operators.push((0..s).map(|r| m.row(r).iter().map(format_rat).collect()).collect());
            }
            sectors.push(SpectrumSector {
                highest_weight: mu,
                multiplicity: s,
                operators,
                charpolys,
            });
        }
        mu -= 2;
    }
    Ok(SpectrumReport {
        dims: dims.clone(),
        points: family.points.iter().map(format_rat).collect(),
        sectors,
    })
}

/// The parameter `Λ_k` (1-based).
pub fn weight_var(k: usize) -> Var {
    Var::indexed("Lambda", k)
}

/// The marked point `t_k` (1-based) as a symbolic parameter.
pub fn point_var(k: usize) -> Var {
    Var::indexed("t", k)
}

/// `(e, f, h)` at site `site` (0-based) in the differential-operator
/// realization with parameter `Λ`.
pub fn weyl_sl2(n: usize, site: usize, lambda: &RatFunc) -> [WeylElement; 3] {
    let x = WeylElement::x(n, site);
    let d = WeylElement::d(n, site);
    let xd = &x * &d;
    let e = &(&x * &xd) + &x.scale(lambda);
    let f = -&d;
    let h = &xd.scale(&RatFunc::int(2)) + &WeylElement::scalar(n, lambda.clone());
    [e, f, h]
}

fn weyl_omega(a: &[WeylElement; 3], b: &[WeylElement; 3]) -> WeylElement {
    let half = RatFunc::constant(Rat::new(1.into(), 2.into()));
    &(&(&a[0] * &b[1]) + &(&a[1] * &b[0])) + &(&a[2] * &b[2]).scale(&half)
}

/// `Ĝ_i` (1-based) in the Weyl algebra of `x₁..x_N` with symbolic
/// `Λ_k` and `t_k`.
pub fn gaudin_weyl(n: usize, i: usize) -> Result<WeylElement> {
    let lambdas: Vec<RatFunc> = (1..=n).map(|k| RatFunc::var(weight_var(k))).collect();
    let points: Vec<RatFunc> = (1..=n).map(|k| RatFunc::var(point_var(k))).collect();
    gaudin_weyl_with(&lambdas, &points, i)
}

/// `Ĝ_i` (1-based) with the given parameter values.
pub fn gaudin_weyl_with(lambdas: &[RatFunc], points: &[RatFunc], i: usize) -> Result<WeylElement> {
    let n = lambdas.len();
    if points.len() != n {
        return Err(invalid("parameter lists differ in length"));
    }
    if n < 2 || i < 1 || i > n {
        return Err(invalid(format!("site index {i} out of range for N = {n}")));
    }
    let sites: Vec<[WeylElement; 3]> = (0..n).map(|s| weyl_sl2(n, s, &lambdas[s])).collect();
    let mut out = WeylElement::zero(n);
    for j in 0..n {
        if j + 1 == i {
            continue;
        }
        let denom = (&points[i - 1] - &points[j]).recip()?;
        out = &out + &weyl_omega(&sites[i - 1], &sites[j]).scale(&denom);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylCommutatorEntry {
    pub i: usize,
    pub j: usize,
    pub zero: bool,
    pub terms: usize,
}

/// `V · Ĝ_i` with `V = Π_{a<b} (t_a − t_b)`, whose coefficients are
/// polynomials in `Λ` and `t`. Since `V` is central,
/// `[V Ĝ_i, V Ĝ_j] = V² [Ĝ_i, Ĝ_j]`, and the polynomial form avoids
/// rational-function arithmetic.
pub fn gaudin_weyl_cleared(n: usize, i: usize) -> Result<WeylElement> {
    if n < 2 || i < 1 || i > n {
        return Err(invalid(format!("site index {i} out of range for N = {n}")));
    }
    let t: Vec<Poly> = (1..=n).map(|k| Poly::var(point_var(k))).collect();
    let sites: Vec<[WeylElement; 3]> = (0..n)
        .map(|s| weyl_sl2(n, s, &RatFunc::var(weight_var(s + 1))))
        .collect();
    let mut out = WeylElement::zero(n);
    for j in 0..n {
        if j + 1 == i {
            continue;
        }
        let (lo, hi) = ((i - 1).min(j), (i - 1).max(j));
        let mut cofactor = Poly::one();
        for a in 0..n {
            for b in a + 1..n {
                if (a, b) != (lo, hi) {
                    cofactor = &cofactor * &(&t[a] - &t[b]);
                }
            }
        }
        // t_i − t_j = −(t_lo − t_hi) when i > j
        if i - 1 > j {
            cofactor = -&cofactor;
        }
        out = &out + &weyl_omega(&sites[i - 1], &sites[j]).scale(&RatFunc::from_poly(cofactor));
    }
    Ok(out)
}

/// Exact `[Ĝ_i, Ĝ_j]` for all pairs of the symbolic Weyl realization,
/// computed on the denominator-free form [`gaudin_weyl_cleared`].
pub fn weyl_commutativity_check(n: usize) -> Result<Vec<WeylCommutatorEntry>> {
    let ops: Vec<WeylElement> = (1..=n).map(|i| gaudin_weyl_cleared(n, i)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Ok(pairs
        .par_iter()
        .map(|&(i, j)| {
            let c = ops[i].commutator(&ops[j]);
            WeylCommutatorEntry { i: i + 1, j: j + 1, zero: c.is_zero(), terms: c.num_terms() }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};

    fn pts(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn irreps_satisfy_relations() {
        for d in 1..=6 {
            let r = sl2_irrep(d).unwrap();
            assert_eq!(r.e.commutator(&r.f), r.h);
            assert_eq!(r.h.commutator(&r.e), r.e.scale(&rat(2)));
            assert_eq!(r.h.commutator(&r.f), r.f.scale(&rat(-2)));
            let lam = (d - 1) as i64;
            assert_eq!(r.casimir(), QMatrix::identity(d).scale(&ratio(lam * (lam + 2), 2)));
        }
        let r1 = sl2_irrep(1).unwrap();
        assert!(r1.e.is_zero() && r1.f.is_zero() && r1.h.is_zero());
        let r2 = sl2_irrep(2).unwrap();
        assert_eq!(r2.e, QMatrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(0), rat(0)]]));
        assert_eq!(r2.h, QMatrix::diagonal(&[rat(1), rat(-1)]));
        assert_eq!(sl2_irrep(3).unwrap().casimir(), QMatrix::identity(3).scale(&rat(4)));
        assert!(sl2_irrep(0).is_err());
    }

    #[test]
    fn two_qubit_casimir_spectrum() {
        let om = casimir_action(&[2, 2], 1, 2).unwrap();
        // (x − ½)³ (x + 3/2)
        let cp = om.charpoly();
        let expected = {
            use crate::exactalg::UPoly;
            UPoly::from_roots(&[ratio(1, 2), ratio(1, 2), ratio(1, 2), ratio(-3, 2)])
        };
        assert_eq!(cp, expected);
        assert!(casimir_action(&[1, 3], 1, 2).unwrap().is_zero());
        assert!(casimir_action(&[2, 2], 1, 1).is_err());
        for g in Sl2Generator::ALL {
            assert!(om.commutator(&diagonal_action(&[2, 2], g).unwrap()).is_zero());
        }
    }

    #[test]
    fn coproduct_of_casimir() {
        for dims in [[2usize, 2], [2, 3], [3, 4]] {
            let total = dims[0] * dims[1];
            let delta = |g| diagonal_action(&dims, g).unwrap();
            let (e, f, h) = (delta(Sl2Generator::E), delta(Sl2Generator::F), delta(Sl2Generator::H));
            let c_total = &(&(&e * &f) + &(&f * &e)) + &(&h * &h).scale(&ratio(1, 2));
            let c1 = sl2_irrep(dims[0]).unwrap().casimir().kron(&QMatrix::identity(dims[1]));
            let c2 = QMatrix::identity(dims[0]).kron(&sl2_irrep(dims[1]).unwrap().casimir());
            let om = casimir_action(&dims, 1, 2).unwrap();
            assert_eq!(c_total, &(&c1 + &c2) + &om.scale(&rat(2)));
            assert_eq!(c_total.nrows(), total);
        }
    }

    #[test]
    fn two_site_family() {
        let fam = gaudin_operators(&[2, 2], &pts(&[0, 1])).unwrap();
        let om = casimir_action(&[2, 2], 1, 2).unwrap();
        assert_eq!(fam.operators[0], -&om);
        assert_eq!(fam.operators[1], om);
        let trivial = gaudin_operators(&[1, 1, 1], &pts(&[0, 1, 2])).unwrap();
        assert!(trivial.operators.iter().all(|m| m.is_zero()));
        assert!(gaudin_operators(&[2, 2], &pts(&[1, 1])).is_err());
    }

    #[test]
    fn families_commute() {
        for (dims, p) in [
            (vec![2, 2], vec![rat(0), rat(1)]),
            (vec![2, 2, 2], vec![rat(0), ratio(1, 3), rat(2)]),
            (vec![2, 2, 3], vec![rat(0), rat(1), rat(3)]),
        ] {
            let rep = commutativity_check(&gaudin_operators(&dims, &p).unwrap()).unwrap();
            assert!(rep.all_zero, "{rep:?}");
            let scaled = gaudin_operators_scaled(&dims, &p, &ratio(-7, 3)).unwrap();
            assert!(commutativity_check(&scaled).unwrap().all_zero);
        }
    }

    #[test]
    fn perturbed_family_fails() {
        let fam = perturbed_family(&[2, 2, 3], &[rat(0), rat(1), rat(3)], 1, 2).unwrap();
        let rep = commutativity_check(&fam).unwrap();
        assert!(!rep.all_zero);
        assert!(rep.pairs.iter().any(|p| !p.zero));
    }

    #[test]
    fn spectrum_of_three_qubits() {
        let fam = gaudin_operators(&[2, 2, 2], &pts(&[0, 1, 3])).unwrap();
        let rep = gaudin_spectrum(&fam).unwrap();
        // 2⊗2⊗2 = V(3) + 2 V(1)
        let weights: Vec<(i64, usize)> = rep.sectors.iter().map(|s| (s.highest_weight, s.multiplicity)).collect();
        assert_eq!(weights, vec![(3, 1), (1, 2)]);
        // Ĝ sum to zero on any sector, since Σ_i Ĝ_i = 0 identically.
        let sum = fam.operators.iter().fold(QMatrix::zeros(8, 8), |a, b| &a + b);
        assert!(sum.is_zero());
    }

    #[test]
    fn weyl_realization_is_a_representation() {
        let lam = RatFunc::var(weight_var(1));
        let [e, f, h] = weyl_sl2(1, 0, &lam);
        assert_eq!(e.commutator(&f), h);
        assert_eq!(h.commutator(&e), e.scale(&RatFunc::int(2)));
        assert_eq!(h.commutator(&f), f.scale(&RatFunc::int(-2)));
        let x = Var::new("x");
        assert!(f.apply(&[x], &RatFunc::one()).unwrap().is_zero());
        assert_eq!(h.apply(&[x], &RatFunc::one()).unwrap(), lam);
    }

    #[test]
    fn cleared_form_is_a_multiple() {
        let n = 3;
        let t: Vec<RatFunc> = (1..=n).map(|k| RatFunc::var(point_var(k))).collect();
        let v = &(&(&t[0] - &t[1]) * &(&t[0] - &t[2])) * &(&t[1] - &t[2]);
        for i in 1..=n {
            assert_eq!(gaudin_weyl_cleared(n, i).unwrap(), gaudin_weyl(n, i).unwrap().scale(&v));
        }
    }

    #[test]
    fn weyl_family_commutes() {
        for n in 2..=3 {
            assert!(weyl_commutativity_check(n).unwrap().iter().all(|e| e.zero));
        }
    }

    #[test]
    fn weyl_family_matches_quantized_garnier_with_opposite_weights() {
        // ∑_{j≠i} [(x_i−x_j)²∂_i∂_j − (x_i−x_j)(Λ_i∂_j − Λ_j∂_i) − ½Λ_iΛ_j]/(t_j − t_i)
        // agrees with Σ Ω_ij/(t_i − t_j) after Λ ↦ −Λ.
        let n = 3;
        let lam: Vec<RatFunc> = (1..=n).map(|k| RatFunc::var(weight_var(k))).collect();
        let neg: Vec<RatFunc> = lam.iter().map(|l| -l).collect();
        let t: Vec<RatFunc> = (1..=n).map(|k| RatFunc::var(point_var(k))).collect();
        for i in 0..n {
            let mut expected = WeylElement::zero(n);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let xi = WeylElement::x(n, i);
                let xj = WeylElement::x(n, j);
                let dx = &xi - &xj;
                let di = WeylElement::d(n, i);
                let dj = WeylElement::d(n, j);
                let quad = &(&dx * &dx) * &(&di * &dj);
                let mid = &dx * &(&dj.scale(&lam[i]) - &di.scale(&lam[j]));
                let cst = WeylElement::scalar(n, (&lam[i] * &lam[j]).scale(&ratio(1, 2)));
                let numer = &(&quad - &mid) - &cst;
                expected = &expected + &numer.scale(&(&t[j] - &t[i]).recip().unwrap());
            }
            assert_eq!(gaudin_weyl_with(&neg, &t, i + 1).unwrap(), expected);
        }
    }
}
