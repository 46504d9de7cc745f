//! Theta functions, the Weierstrass ℘ function and the Lamé–Hermite function
//! on `C / (Z + τZ)`.
//!
//! `theta` is the odd Jacobi theta function
//!
//! ```text
//! θ(z) = 2 Σ_{n≥0} (−1)^n q^{(n+½)²} sin((2n+1)πz),   q = e^{iπτ},
//! ```
//!
//! which has simple zeros exactly on the lattice and satisfies
//! `θ(z+1) = −θ(z)`, `θ(z+τ) = −e^{−iπτ−2πiz} θ(z)`, `θ(−z) = −θ(z)`.
//! The multiplier-normalized `theta_quasi(z) = e^{iπz} θ(z)` is instead
//! 1-periodic with `θ(z+τ) = −e^{−2πiz} θ(z)`. Every quantity used by the
//! Calogero–Moser Lax matrix is a ratio in which the two normalizations
//! agree.

use crate::error::{invalid, Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub const DEFAULT_TOL: f64 = 1e-15;
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Torus {
    tau: Complex64,
}

impl Torus {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(invalid(format!("Im τ must be positive, got τ = {tau}")));
        }
        Ok(Torus { tau })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// `q = e^{2πiτ}`.
    pub fn q(&self) -> Complex64 {
        (2.0 * PI * I * self.tau).exp()
    }

    /// Jacobi nome `e^{iπτ}`.
    pub fn nome(&self) -> Complex64 {
        (PI * I * self.tau).exp()
    }

    /// Writes `z = w + m τ + n` with `w` in the parallelogram centred at 0.
    pub fn reduce(&self, z: Complex64) -> (Complex64, i64, i64) {
        let m = (z.im / self.tau.im).round();
        let shifted = z - m * self.tau;
        let n = shifted.re.round();
        (shifted - n, m as i64, n as i64)
    }

    /// Length of the shortest nonzero lattice vector.
    pub fn min_period(&self) -> f64 {
        let mut best = f64::INFINITY;
        for m in -6i64..=6 {
            for n in -6i64..=6 {
                if m != 0 || n != 0 {
                    best = best.min((m as f64 * self.tau + n as f64).norm());
                }
            }
        }
        best
    }

    /// Distance from `z` to the nearest lattice point.
    pub fn lattice_distance(&self, z: Complex64) -> f64 {
        let (w, _, _) = self.reduce(z);
        let mut best = f64::INFINITY;
        for m in -1i64..=1 {
            for n in -1i64..=1 {
                best = best.min((w - m as f64 * self.tau - n as f64).norm());
            }
        }
        best
    }
}

/// `(θ(w), θ'(w))` by the sine series, for reduced `w`.
fn theta_series(w: Complex64, torus: &Torus, tol: f64) -> (Complex64, Complex64) {
    let nome = torus.nome();
    let mut val = Complex64::new(0.0, 0.0);
    let mut der = Complex64::new(0.0, 0.0);
    let mut small = 0;
    for n in 0..400 {
        let k = (2 * n + 1) as f64;
        let coeff = 2.0 * (if n % 2 == 0 { 1.0 } else { -1.0 }) * nome.powf((n as f64 + 0.5).powi(2));
        let tv = coeff * (k * PI * w).sin();
        let td = coeff * k * PI * (k * PI * w).cos();
        val += tv;
        der += td;
        if tv.norm() <= tol * val.norm() && td.norm() <= tol * der.norm() {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (val, der)
}

/// `(θ(z), θ'(z))`, reducing `z` to the fundamental cell first.
pub fn theta_and_derivative(z: Complex64, torus: &Torus, tol: f64) -> (Complex64, Complex64) {
    let (w, m, n) = torus.reduce(z);
    let (val, der) = theta_series(w, torus, tol);
    let sign = if (m + n).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let mf = m as f64;
    let factor = sign * (-I * PI * mf * mf * torus.tau - 2.0 * PI * I * mf * w).exp();
    (factor * val, factor * (der - 2.0 * PI * I * mf * val))
}

pub fn theta(z: Complex64, torus: &Torus, tol: f64) -> Complex64 {
    theta_and_derivative(z, torus, tol).0
}

pub fn theta_prime(z: Complex64, torus: &Torus, tol: f64) -> Complex64 {
    theta_and_derivative(z, torus, tol).1
}

/// `θ'(0) = 2π Σ (−1)^n (2n+1) q^{(n+½)²}`.
pub fn theta_prime_zero(torus: &Torus, tol: f64) -> Complex64 {
    theta_series(Complex64::new(0.0, 0.0), torus, tol).1
}

/// `e^{iπz} θ(z)`: period 1 and `θ(z+τ) = −e^{−2πiz} θ(z)`.
pub fn theta_quasi(z: Complex64, torus: &Torus, tol: f64) -> Complex64 {
    (PI * I * z).exp() * theta(z, torus, tol)
}

/// `π²/sin²(πw)` and its derivative, written through `u = e^{±2πiw}` so that
/// rows far from the real axis neither overflow nor cancel.
fn csc2_row(w: Complex64) -> (Complex64, Complex64) {
    let (u, du_sign) = if w.im > 0.0 {
        ((2.0 * PI * I * w).exp(), 1.0)
    } else {
        ((-2.0 * PI * I * w).exp(), -1.0)
    };
    let one = Complex64::new(1.0, 0.0);
    let d = one - u;
    let val = -4.0 * PI * PI * u / (d * d);
    let der = -4.0 * PI * PI * (du_sign * 2.0 * PI * I * u) * (one + u) / (d * d * d);
    (val, der)
}

/// `π²/3 + Σ_{m≠0} π²/sin²(πmτ)`.
fn eisenstein_g2(torus: &Torus, tol: f64) -> Complex64 {
    let mut acc = Complex64::new(PI * PI / 3.0, 0.0);
    for m in 1..10_000 {
        let (row, _) = csc2_row(m as f64 * torus.tau);
        acc += 2.0 * row;
        if row.norm() <= tol * acc.norm() {
            break;
        }
    }
    acc
}

/// `(℘(z), ℘'(z))` by summing the lattice row by row:
/// `℘(z) = Σ_m π²/sin²(π(z+mτ)) − G₂(τ)`.
pub fn wp_and_derivative(z: Complex64, torus: &Torus, tol: f64) -> Result<(Complex64, Complex64)> {
    let (w, _, _) = torus.reduce(z);
    if w.norm() < 1e-12 {
        return Err(Error::Pole(format!("℘ has a pole at the lattice point {z}")));
    }
    let (mut val, mut der) = csc2_row(w);
    for m in 1..10_000 {
        let (a, da) = csc2_row(w + m as f64 * torus.tau);
        let (b, db) = csc2_row(w - m as f64 * torus.tau);
        val += a + b;
        der += da + db;
        if (a + b).norm() <= tol * val.norm() && (da + db).norm() <= tol * der.norm().max(1.0) {
            break;
        }
    }
    Ok((val - eisenstein_g2(torus, tol), der))
}

pub fn wp(z: Complex64, torus: &Torus, tol: f64) -> Result<Complex64> {
    Ok(wp_and_derivative(z, torus, tol)?.0)
}

pub fn wp_prime(z: Complex64, torus: &Torus, tol: f64) -> Result<Complex64> {
    Ok(wp_and_derivative(z, torus, tol)?.1)
}

/// The defining lattice sum `1/z² + Σ′[1/(z−ω)² − 1/ω²]` over the square
/// `|m|, |n| ≤ M`, doubling `M` until successive values differ by less than
/// `tol`. Slow and only accurate to about `1/M`; kept as an independent
/// check on [`wp`].
pub fn wp_direct_sum(z: Complex64, torus: &Torus, tol: f64, max_m: usize) -> Result<Complex64> {
    if torus.lattice_distance(z) < 1e-12 {
        return Err(Error::Pole(format!("℘ has a pole at the lattice point {z}")));
    }
    let partial = |big: i64| {
        let mut acc = 1.0 / (z * z);
        for m in -big..=big {
            for n in -big..=big {
                if m == 0 && n == 0 {
                    continue;
                }
                let om = m as f64 * torus.tau + n as f64;
                acc += 1.0 / ((z - om) * (z - om)) - 1.0 / (om * om);
            }
        }
        acc
    };
    let mut big = 8i64;
    let mut prev = partial(big);
    while (big as usize) < max_m {
        big *= 2;
        let next = partial(big);
        if (next - prev).norm() < tol {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

/// `H(z, a) = e^{a θ'(z)/θ(z)} θ(z − a)/θ(z)`.
pub fn lame_hermite(z: Complex64, a: Complex64, torus: &Torus, tol: f64) -> Result<Complex64> {
    if torus.lattice_distance(z) < 1e-12 {
        return Err(Error::Pole(format!("Lamé–Hermite function is singular at the lattice point {z}")));
    }
    if torus.lattice_distance(a) < 1e-12 {
        return Err(invalid("the parameter a must not lie on the lattice"));
    }
    let (t, dt) = theta_and_derivative(z, torus, tol);
    Ok((a * dt / t).exp() * theta(z - a, torus, tol) / t)
}

/// `(g₂, g₃)` read off from the Laurent expansion
/// `℘(z) = z⁻² + (g₂/20) z² + (g₃/28) z⁴ + …` by averaging over a small circle.
pub fn weierstrass_invariants(torus: &Torus, tol: f64) -> Result<(Complex64, Complex64)> {
    let samples = 64;
    let r = 0.25 * torus.min_period();
    let mut c2 = Complex64::new(0.0, 0.0);
    let mut c4 = Complex64::new(0.0, 0.0);
    for j in 0..samples {
        let z = Complex64::from_polar(r, 2.0 * PI * (j as f64 + 0.5) / samples as f64);
        let f = wp(z, torus, tol)? - 1.0 / (z * z);
        c2 += f / (z * z);
        c4 += f / (z * z * z * z);
    }
    let k = samples as f64;
    Ok((20.0 * c2 / k, 28.0 * c4 / k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn theta_functional_equations() {
        let torus = Torus::new(c(0.3, 1.1)).unwrap();
        let tau = torus.tau();
        for &z in &[c(0.1, 0.2), c(-0.37, 0.6), c(1.4, -0.9)] {
            let t = theta(z, &torus, DEFAULT_TOL);
            assert!((theta(-z, &torus, DEFAULT_TOL) + t).norm() < 1e-12 * (1.0 + t.norm()));
            assert!((theta(z + 1.0, &torus, DEFAULT_TOL) + t).norm() < 1e-12 * (1.0 + t.norm()));
            let lhs = theta(z + tau, &torus, DEFAULT_TOL);
            let rhs = -(-I * PI * tau - 2.0 * PI * I * z).exp() * t;
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
            let tq = theta_quasi(z, &torus, DEFAULT_TOL);
            assert!((theta_quasi(z + 1.0, &torus, DEFAULT_TOL) - tq).norm() < 1e-12 * (1.0 + tq.norm()));
            let shifted = theta_quasi(z + tau, &torus, DEFAULT_TOL);
            assert!((shifted + (-2.0 * PI * I * z).exp() * tq).norm() < 1e-10 * (1.0 + shifted.norm()));
        }
        assert_eq!(theta(c(0.0, 0.0), &torus, DEFAULT_TOL), c(0.0, 0.0));
        assert!(theta(tau + 2.0, &torus, DEFAULT_TOL).norm() < 1e-12);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let torus = Torus::new(c(0.0, 1.0)).unwrap();
        let z = c(0.23, 1.7);
        let h = 1e-6;
        let fd = (theta(z + h, &torus, DEFAULT_TOL) - theta(z - h, &torus, DEFAULT_TOL)) / (2.0 * h);
        let d = theta_prime(z, &torus, DEFAULT_TOL);
        assert!((fd - d).norm() < 1e-7 * d.norm());
        let z = c(0.31, -0.2);
        let fd = (wp(z + h, &torus, DEFAULT_TOL).unwrap() - wp(z - h, &torus, DEFAULT_TOL).unwrap()) / (2.0 * h);
        let d = wp_prime(z, &torus, DEFAULT_TOL).unwrap();
        assert!((fd - d).norm() < 1e-6 * d.norm());
    }

    #[test]
    fn wp_basic_properties() {
        let torus = Torus::new(c(0.5, 1.0)).unwrap();
        let z = c(0.21, 0.33);
        let v = wp(z, &torus, DEFAULT_TOL).unwrap();
        assert!((wp(-z, &torus, DEFAULT_TOL).unwrap() - v).norm() < 1e-12 * v.norm());
        assert!((wp(z + torus.tau() - 3.0, &torus, DEFAULT_TOL).unwrap() - v).norm() < 1e-10 * v.norm());
        let small = c(1e-3, 0.0);
        let near = wp(small, &torus, DEFAULT_TOL).unwrap() - 1.0 / (small * small);
        assert!(near.norm() < 1e-4);
        assert!(matches!(wp(torus.tau(), &torus, DEFAULT_TOL), Err(Error::Pole(_))));
        let direct = wp_direct_sum(z, &torus, 1e-4, 256).unwrap();
        assert!((direct - v).norm() < 1e-2 * v.norm(), "{direct} vs {v}");
    }

    #[test]
    fn square_lattice_invariants() {
        // For τ = i, g₃ = 0 by symmetry.
        let torus = Torus::new(c(0.0, 1.0)).unwrap();
        let (g2, g3) = weierstrass_invariants(&torus, DEFAULT_TOL).unwrap();
        assert!(g3.norm() < 1e-9);
        assert!((g2.re - 189.07272012923385).abs() < 1e-6, "{g2}");
        for &z in &[c(0.2, 0.1), c(0.4, 0.35)] {
            let (p, dp) = wp_and_derivative(z, &torus, DEFAULT_TOL).unwrap();
            let res = dp * dp - 4.0 * p * p * p + g2 * p + g3;
            assert!(res.norm() < 1e-8 * (dp * dp).norm());
        }
    }

    #[test]
    fn lame_hermite_is_doubly_periodic() {
        let torus = Torus::new(c(0.2, 0.9)).unwrap();
        let (z, a) = (c(0.31, 0.27), c(0.17, -0.11));
        let h = lame_hermite(z, a, &torus, DEFAULT_TOL).unwrap();
        let h1 = lame_hermite(z + 1.0, a, &torus, DEFAULT_TOL).unwrap();
        let ht = lame_hermite(z + torus.tau(), a, &torus, DEFAULT_TOL).unwrap();
        assert!((h1 / h - 1.0).norm() < 1e-10);
        assert!((ht / h - 1.0).norm() < 1e-10);
        assert!(lame_hermite(a, a, &torus, DEFAULT_TOL).unwrap().norm() < 1e-12);
        assert!(lame_hermite(c(0.0, 0.0), a, &torus, DEFAULT_TOL).is_err());
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(Torus::new(c(0.0, -1.0)).is_err());
        assert!(Torus::new(c(0.0, 0.0)).is_err());
    }
}
