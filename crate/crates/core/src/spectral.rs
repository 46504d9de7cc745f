//! Spectral curves of Garnier Higgs fields and genus arithmetic.
//!
//! For `φ(z) = Σ A_i/(z − t_i)` with simple poles, `det φ = a(z)/b(z)` with
//! `b = Π(z − t_i)`. The spectral curve is the hyperelliptic curve
//! `y² = a(z) b(z)`.

use crate::error::{invalid, Error, Result};
use crate::exactalg::rat::rat_to_f64;
use crate::exactalg::{Rat, UPoly};
use crate::garnier::{GarnierData, PhaseState, Trajectory};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralCurve {
    /// Coefficients of `a`, lowest degree first.
    pub a: UPoly<Rat>,
    pub b: UPoly<Rat>,
    /// Genus of the smooth model; `None` when `a ≡ 0` or `a·b` is not
    /// square-free.
    pub genus: Option<usize>,
}

impl SpectralCurve {
    pub fn is_degenerate(&self) -> bool {
        self.a.is_zero()
    }
}

/// `Π (z − t_i)` and the cofactors `b/(z − t_i)`.
fn b_and_cofactors<T: num_traits::Num + Clone>(t: &[T]) -> (UPoly<T>, Vec<UPoly<T>>) {
    let b = UPoly::from_roots(t);
    let cof = (0..t.len())
        .map(|i| {
            let others: Vec<T> = t.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect();
            UPoly::from_roots(&others)
        })
        .collect();
    (b, cof)
}

/// `det(b φ)` as a polynomial, given residues `A_i`.
fn det_numerator<T: num_traits::Num + Clone>(residues: &[[[T; 2]; 2]], cof: &[UPoly<T>]) -> UPoly<T> {
    let entry = |r: usize, c: usize| {
        residues
            .iter()
            .zip(cof)
            .fold(UPoly::zero(), |acc, (a, bi)| &acc + &bi.scale(&a[r][c]))
    };
    let (m00, m01, m10, m11) = (entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1));
    &(&m00 * &m11) - &(&m01 * &m10)
}

fn exact_residues(data: &GarnierData, state: &PhaseState<Rat>) -> Result<Vec<[[Rat; 2]; 2]>> {
    let lambda = data
        .lambda_values()
        .ok_or_else(|| invalid("spectral curve needs numeric twist parameters"))?;
    if state.n() != data.n() {
        return Err(invalid("state size does not match the number of marked points"));
    }
    Ok((0..data.n())
        .map(|i| {
            let (y, p, l) = (&state.y[i], &state.p[i], &lambda[i]);
            let py = p * y;
            [[&py - l, Rat::from_integer(2.into()) * l * y - &py * y], [p.clone(), l - &py]]
        })
        .collect())
}

/// Exact spectral curve of the Higgs field at a rational state.
pub fn spectral_curve(data: &GarnierData, state: &PhaseState<Rat>) -> Result<SpectralCurve> {
    let residues = exact_residues(data, state)?;
    let (b, cof) = b_and_cofactors(data.points());
    let det_m = det_numerator(&residues, &cof);
    let (a, rem) = det_m.div_rem(&b);
    if !rem.is_zero() {
        return Err(Error::Pole("det φ has a pole of order two (residue not nilpotent)".into()));
    }
    let genus = if a.is_zero() { None } else { hyperelliptic_genus(&a, &b).ok() };
    Ok(SpectralCurve { a, b, genus })
}

/// Genus of the smooth model of `y² = a(z) b(z)`: `⌈(deg a + deg b)/2⌉ − 1`.
///
/// With `d = deg(ab)` there are `d` finite branch points, plus one at
/// infinity when `d` is odd.
pub fn hyperelliptic_genus(a: &UPoly<Rat>, b: &UPoly<Rat>) -> Result<usize> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::SingularCurve("a or b vanishes identically".into()));
    }
    if UPoly::gcd(a, b).degree() != Some(0) {
        return Err(Error::SingularCurve("a and b share a root".into()));
    }
    let ab = a * b;
    if !ab.is_square_free() {
        return Err(Error::SingularCurve("a·b has a repeated root".into()));
    }
    let d = ab.degree().unwrap();
    if d == 0 {
        return Err(Error::SingularCurve("y² = constant has no branch points".into()));
    }
    Ok(d.div_ceil(2) - 1)
}

/// Genus of a degree-`n` cover of a genus-`g` curve, totally ramified over
/// `branch_points` points: `χ = n(2 − 2g − B) + B`, genus `(2 − χ)/2`.
pub fn riemann_hurwitz_genus(n: i64, g: i64, branch_points: i64) -> Result<i64> {
    if n < 1 || g < 0 || branch_points < 0 {
        return Err(invalid("need n ≥ 1, g ≥ 0 and a non-negative branch point count"));
    }
    let chi = n * (2 - 2 * g - branch_points) + branch_points;
    if chi % 2 != 0 {
        return Err(invalid(format!("Euler characteristic {chi} is odd")));
    }
    Ok((2 - chi) / 2)
}

/// `Σ_d (g if d = 1 else (2d − 1)(g − 1))`.
pub fn hitchin_base_dim(degrees: &[u32], g: i64) -> Result<i64> {
    if g < 2 {
        return Err(invalid(format!("genus must be at least 2, got {g}")));
    }
    if degrees.is_empty() {
        return Err(invalid("degree list is empty"));
    }
    Ok(degrees
        .iter()
        .map(|&d| if d == 1 { g } else { (2 * d as i64 - 1) * (g - 1) })
        .sum())
}

/// Coefficients of `a(z)` at a floating-point state.
///
/// With a nonzero twist `det φ` has double poles and `a` is not defined; the
/// coefficients of `b² det φ` are returned instead, which are conserved just
/// the same.
pub fn a_coefficients_f64(t: &[f64], lambda: &[f64], state: &PhaseState<f64>) -> Vec<f64> {
    let residues: Vec<[[f64; 2]; 2]> = (0..t.len())
        .map(|i| crate::garnier::residue_entries(state.y[i], state.p[i], lambda[i]))
        .collect();
    let (b, cof) = b_and_cofactors(t);
    let det_m = det_numerator(&residues, &cof);
    // Pad to a fixed length so that lists along a trajectory line up.
    if lambda.iter().all(|&l| l == 0.0) {
        let mut q = det_m.div_rem(&b).0.into_coeffs();
        q.resize(t.len().saturating_sub(1), 0.0);
        q
    } else {
        let mut q = det_m.into_coeffs();
        q.resize(2 * t.len() - 1, 0.0);
        q
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsospectralReport {
    pub steps: usize,
    /// Maximal `|a_k(s) − a_k(0)|` per coefficient, lowest degree first.
    pub coefficient_drift: Vec<f64>,
    pub max_drift: f64,
}

/// Tracks the coefficients of `a(z)` along a trajectory.
pub fn isospectrality_check(data: &GarnierData, traj: &Trajectory) -> Result<IsospectralReport> {
    let lambda: Vec<f64> = data
        .lambda_values()
        .ok_or_else(|| invalid("isospectrality check needs numeric twist parameters"))?
        .iter()
        .map(rat_to_f64)
        .collect();
    let t: Vec<f64> = data.points().iter().map(rat_to_f64).collect();
    let first = traj
        .states
        .first()
        .ok_or_else(|| invalid("empty trajectory"))?;
    let a0 = a_coefficients_f64(&t, &lambda, first);
    let mut drift = vec![0.0f64; a0.len()];
    for s in &traj.states {
        let a = a_coefficients_f64(&t, &lambda, s);
        for (d, (x, x0)) in drift.iter_mut().zip(a.iter().zip(&a0)) {
            *d = d.max((x - x0).abs());
        }
    }
    let max_drift = drift.iter().copied().fold(0.0, f64::max);
    Ok(IsospectralReport {
        steps: traj.states.len().saturating_sub(1),
        coefficient_drift: drift,
        max_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::garnier::random_admissible_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn upoly(c: &[i64]) -> UPoly<Rat> {
        UPoly::new(c.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn genus_examples() {
        let b4 = UPoly::from_roots(&[rat(0), rat(1), rat(3), rat(6)]);
        assert_eq!(hyperelliptic_genus(&upoly(&[5]), &b4).unwrap(), 1);
        let b2 = UPoly::from_roots(&[rat(0), rat(1)]);
        assert_eq!(hyperelliptic_genus(&upoly(&[5]), &b2).unwrap(), 0);
        let a4 = UPoly::from_roots(&[rat(-1), rat(-2), rat(-3), rat(-4)]);
        let b8 = UPoly::from_roots(&(0..8).map(|i| rat(i + 10)).collect::<Vec<_>>());
        assert_eq!(hyperelliptic_genus(&a4, &b8).unwrap(), 5);
        let sq = UPoly::from_roots(&[rat(2), rat(2)]);
        assert!(matches!(hyperelliptic_genus(&sq, &b4), Err(Error::SingularCurve(_))));
        assert!(hyperelliptic_genus(&UPoly::linear_root(rat(0)), &b4).is_err());
    }

    #[test]
    fn riemann_hurwitz_examples() {
        assert_eq!(riemann_hurwitz_genus(2, 2, 4).unwrap(), 5);
        assert_eq!(riemann_hurwitz_genus(1, 7, 0).unwrap(), 7);
        assert_eq!(riemann_hurwitz_genus(3, 2, 6).unwrap(), 10);
        assert!(riemann_hurwitz_genus(2, 0, 3).is_err());
        assert!(riemann_hurwitz_genus(0, 1, 0).is_err());
    }

    #[test]
    fn base_dimension_examples() {
        assert_eq!(hitchin_base_dim(&[2], 2).unwrap(), 3);
        assert_eq!(hitchin_base_dim(&[1], 5).unwrap(), 5);
        assert_eq!(hitchin_base_dim(&[2, 3], 3).unwrap(), 16);
        assert!(hitchin_base_dim(&[2], 1).is_err());
        assert!(hitchin_base_dim(&[], 3).is_err());
    }

    #[test]
    fn garnier_curves() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 4..=6 {
            let data = GarnierData::untwisted(GarnierData::default_points(n)).unwrap();
            let state = random_admissible_state(n, &mut rng).unwrap();
            let c = spectral_curve(&data, &state).unwrap();
            assert_eq!(c.a.degree(), Some(n - 4));
            assert_eq!(c.b.degree(), Some(n));
            assert_eq!(c.genus, Some(n - 3));
        }
        let data = GarnierData::untwisted(GarnierData::default_points(4)).unwrap();
        let zero = PhaseState::new(vec![rat(1), rat(2), rat(3), rat(4)], vec![rat(0); 4]).unwrap();
        let c = spectral_curve(&data, &zero).unwrap();
        assert!(c.is_degenerate());
        assert_eq!(c.genus, None);
    }

    #[test]
    fn twisted_residues_give_double_poles() {
        let t = GarnierData::default_points(4);
        let data = GarnierData::twisted(t, vec![rat(1), rat(0), rat(0), rat(0)]).unwrap();
        let state = PhaseState::new(vec![rat(1), rat(2), rat(3), rat(4)], vec![rat(1); 4]).unwrap();
        assert!(matches!(spectral_curve(&data, &state), Err(Error::Pole(_))));
    }

    #[test]
    fn float_coefficients_match_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let data = GarnierData::untwisted(GarnierData::default_points(5)).unwrap();
        let state = random_admissible_state(5, &mut rng).unwrap();
        let exact = spectral_curve(&data, &state).unwrap();
        let t: Vec<f64> = data.points().iter().map(rat_to_f64).collect();
        let float = a_coefficients_f64(&t, &[0.0; 5], &state.to_f64());
        for (k, x) in float.iter().enumerate() {
            let e = exact.a.coeffs().get(k).map_or(0.0, rat_to_f64);
            assert!((x - e).abs() < 1e-9 * (1.0 + e.abs()), "k={k}: {x} vs {e}");
        }
    }
}
