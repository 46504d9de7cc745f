//! Hill operators `∂² + u` on the formal disk.
//!
//! Everything works on truncated series, so each differentiation costs one
//! order and every result carries the order through which it is reliable.
//!
//! Under a change of coordinate `s = s(t)` with inverse `t = t(s)`, the
//! operator `∂_t² + u` acting on `K^{−1/2}` becomes `∂_s² + ũ` with
//!
//! ```text
//! ũ = [(u − ½ D(s)) / s'²] ∘ t,     D(s) = s'''/s' − (3/2)(s''/s')².
//! ```
//!
//! Equivalently `ũ = (u∘t) t'² + ½ D(t)`. The law is checked against
//! [`transport_residual`]: if `ψ` solves `ψ'' + uψ = 0` then
//! `(ψ∘t) · t'^{−1/2}` solves the transformed equation.

use crate::error::{Error, Result};
use crate::exactalg::{Rat, Series};
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HillOperator {
    pub u: Series,
}

impl HillOperator {
    pub fn new(u: Series) -> Self {
        HillOperator { u }
    }

    pub fn order(&self) -> usize {
        self.u.order()
    }
}

/// A formal change of coordinate `t ↦ s(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateChange {
    s: Series,
}

impl CoordinateChange {
    /// Requires `s'(0) ≠ 0` and at least three derivatives' worth of order.
    pub fn new(s: Series) -> Result<Self> {
        if s.coeff(1).is_zero() {
            return Err(Error::Series("coordinate change needs s'(0) ≠ 0".into()));
        }
        if s.order() < 3 {
            return Err(Error::Series("coordinate change needs order at least 3".into()));
        }
        Ok(CoordinateChange { s })
    }

    pub fn series(&self) -> &Series {
        &self.s
    }

    pub fn order(&self) -> usize {
        self.s.order()
    }

    fn require_based(&self) -> Result<()> {
        if !self.s.coeff(0).is_zero() {
            return Err(Error::Series("coordinate change must fix the marked point, s(0) = 0".into()));
        }
        Ok(())
    }

    /// The compositional inverse `t(s)`.
    pub fn inverse(&self) -> Result<CoordinateChange> {
        self.require_based()?;
        CoordinateChange::new(self.s.reversion()?)
    }

    /// `self ∘ inner`, i.e. first `inner` then `self`.
    pub fn after(&self, inner: &CoordinateChange) -> Result<CoordinateChange> {
        self.require_based()?;
        inner.require_based()?;
        CoordinateChange::new(self.s.compose(&inner.s)?)
    }
}

/// `D(s) = s'''/s' − (3/2)(s''/s')²`, of order `order(s) − 3`.
pub fn schwarzian(s: &CoordinateChange) -> Result<Series> {
    let d1 = s.s.derivative();
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    let inv = d1.recip()?;
    let ratio = &d2 * &inv;
    let three_halves = Rat::new(3.into(), 2.into());
    Ok(&(&d3 * &inv) - &(&ratio * &ratio).scale(&three_halves))
}

/// The potential of `∂² + u` written in the coordinate `s`.
pub fn transform_hill(op: &HillOperator, s: &CoordinateChange) -> Result<HillOperator> {
    s.require_based()?;
    let t = s.s.reversion()?;
    let ds = schwarzian(s)?;
    let sp = s.s.derivative();
    let half = Rat::new(1.into(), 2.into());
    let inner = &(&op.u - &ds.scale(&half)) * &(&sp * &sp).recip()?;
    Ok(HillOperator::new(inner.compose(&t)?))
}

/// The solutions with `(ψ(0), ψ'(0)) = (1, 0)` and `(0, 1)`, of order
/// `order(u) + 2`.
pub fn solve_hill(op: &HillOperator) -> (Series, Series) {
    let k = op.order() + 2;
    let solve = |c0: Rat, c1: Rat| {
        let mut c = vec![c0, c1];
        for n in 0..=op.order() {
            let mut acc = Rat::zero();
            for j in 0..=n {
                acc += op.u.coeff(j) * &c[n - j];
            }
            let denom = Rat::from_integer((((n + 2) * (n + 1)) as i64).into());
            c.push(-acc / denom);
        }
        Series::new(c, k).expect("order at least 2")
    };
    (solve(Rat::one(), Rat::zero()), solve(Rat::zero(), Rat::one()))
}

/// `ψ₁ψ₂' − ψ₁'ψ₂`.
pub fn wronskian(a: &Series, b: &Series) -> Series {
    &(a * &b.derivative()) - &(&a.derivative() * b)
}

/// `φ'' + ũφ` for `φ = (ψ∘t) · (t'/t'(0))^{−1/2}`, where `t` inverts `s` and
/// `ψ` runs over both basic solutions of `∂² + u`. Zero through its order
/// exactly when `ũ` is the correct transformed potential.
pub fn transport_residual(op: &HillOperator, s: &CoordinateChange, transformed: &HillOperator) -> Result<[Series; 2]> {
    let t = s.inverse()?.s;
    let tp = t.derivative();
    let normalized = tp.scale(&tp.coeff(0).recip());
    let weight = normalized.sqrt()?.recip()?;
    let (p1, p2) = solve_hill(op);
    let residual = |psi: &Series| -> Result<Series> {
        let phi = &psi.compose(&t)? * &weight;
        Ok(&phi.derivative().derivative() + &(&transformed.u * &phi))
    };
    Ok([residual(&p1)?, residual(&p2)?])
}

/// Coefficients `(a, b, c, d)` of a Möbius map `(at + b)/(ct + d)` whose
/// expansion agrees with `s` through its order, if one exists.
pub fn mobius_from_jet(s: &Series) -> Option<[Rat; 4]> {
    let (b, s1, s2) = (s.coeff(0), s.coeff(1), s.coeff(2));
    if s1.is_zero() {
        return None;
    }
    let c = -&s2 / &s1;
    let a = &s1 + &b * &c;
    let m = mobius_series(&a, &b, &c, &Rat::one(), s.order()).ok()?;
    m.agrees_with(s).then_some([a, b, c, Rat::one()])
}

/// `(at + b)/(ct + d)` expanded at `t = 0`; needs `d ≠ 0` and `ad − bc ≠ 0`.
pub fn mobius_series(a: &Rat, b: &Rat, c: &Rat, d: &Rat, order: usize) -> Result<Series> {
    if d.is_zero() {
        return Err(Error::Series("Möbius map has a pole at the origin".into()));
    }
    if (a * d - b * c).is_zero() {
        return Err(Error::Series("degenerate Möbius map".into()));
    }
    let num = Series::new(vec![b.clone(), a.clone()], order)?;
    let den = Series::new(vec![d.clone(), c.clone()], order)?;
    num.checked_div(&den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};

    fn ints(c: &[i64], k: usize) -> Series {
        Series::from_ints(c, k).unwrap()
    }

    #[test]
    fn schwarzian_examples() {
        let s = CoordinateChange::new(ints(&[0, 1, 1], 12)).unwrap();
        let d = schwarzian(&s).unwrap();
        // −6/(1+2t)²
        let expected = ints(&[-6, 24, -72, 192, -480], 4);
        assert!(d.agrees_with(&expected));
        assert_eq!(d.order(), 9);
        let id = CoordinateChange::new(Series::identity(8)).unwrap();
        assert!(schwarzian(&id).unwrap().is_zero());
        let m = mobius_series(&rat(2), &rat(3), &ratio(1, 2), &rat(5), 16).unwrap();
        assert!(schwarzian(&CoordinateChange::new(m).unwrap()).unwrap().is_zero());
        assert!(CoordinateChange::new(ints(&[0, 0, 1], 8)).is_err());
    }

    #[test]
    fn transport_law_on_examples() {
        let u = HillOperator::new(ints(&[1, -2, 0, 3], 10));
        let s = CoordinateChange::new(ints(&[0, 2, 1, -1], 10)).unwrap();
        let ut = transform_hill(&u, &s).unwrap();
        for r in transport_residual(&u, &s, &ut).unwrap() {
            assert!(r.is_zero(), "{r}");
        }
        // The opposite sign of the Schwarzian term fails the oracle.
        let wrong = {
            let t = s.inverse().unwrap().series().clone();
            let ds = schwarzian(&s).unwrap();
            let sp = s.series().derivative();
            let inner = &(&u.u + &ds.scale(&ratio(1, 2))) * &(&sp * &sp).recip().unwrap();
            HillOperator::new(inner.compose(&t).unwrap())
        };
        assert!(transport_residual(&u, &s, &wrong).unwrap().iter().any(|r| !r.is_zero()));
    }

    #[test]
    fn zero_potential_and_identity() {
        let zero = HillOperator::new(Series::zero(12));
        let m = CoordinateChange::new(mobius_series(&rat(3), &rat(0), &rat(2), &rat(1), 12).unwrap()).unwrap();
        assert!(transform_hill(&zero, &m).unwrap().u.is_zero());
        let u = HillOperator::new(ints(&[4, 0, -1, 7], 9));
        let id = CoordinateChange::new(Series::identity(12)).unwrap();
        assert!(transform_hill(&u, &id).unwrap().u.agrees_with(&u.u));
        let shifted = CoordinateChange::new(ints(&[1, 1], 6)).unwrap();
        assert!(transform_hill(&u, &shifted).is_err());
    }

    #[test]
    fn hill_solutions() {
        let (a, b) = solve_hill(&HillOperator::new(Series::zero(6)));
        assert!(a.agrees_with(&Series::constant(rat(1), 8)));
        assert!(b.agrees_with(&Series::identity(8)));
        let (ch, sh) = solve_hill(&HillOperator::new(Series::constant(rat(-1), 10)));
        let mut fact = Rat::one();
        for k in 0..=12usize {
            if k > 0 {
                fact *= rat(k as i64);
            }
            let c = fact.recip();
            let (ec, es) = if k % 2 == 0 { (c, Rat::zero()) } else { (Rat::zero(), c) };
            assert_eq!(ch.coeff(k), ec);
            assert_eq!(sh.coeff(k), es);
        }
        let u = HillOperator::new(ints(&[2, -1, 5, 0, 3], 10));
        let (p, q) = solve_hill(&u);
        assert!(wronskian(&p, &q).agrees_with(&Series::constant(rat(1), 20)));
    }

    #[test]
    fn mobius_jets() {
        let m = mobius_series(&rat(1), &rat(2), &rat(-3), &rat(4), 10).unwrap();
        let [a, b, c, d] = mobius_from_jet(&m).unwrap();
        assert!(mobius_series(&a, &b, &c, &d, 10).unwrap().agrees_with(&m));
        assert!(mobius_from_jet(&ints(&[0, 1, 1], 10)).is_none());
    }
}
