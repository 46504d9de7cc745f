//! Truncated power series in one variable with rational coefficients.
//!
//! A `Series` of order `K` stores `c_0 .. c_K`; everything beyond `t^K` is
//! unknown. Binary operations truncate to the smaller order, and
//! differentiation lowers the order by one.

use super::rat::{rat_sqrt, Rat};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub const DEFAULT_ORDER: usize = 16;

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Rat>,
}

impl Series {
    /// Builds a series of the given order; missing coefficients are zero and
    /// extra ones are dropped.
    pub fn new(mut coeffs: Vec<Rat>, order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::Series("truncation order must be at least 1".into()));
        }
        coeffs.resize(order + 1, Rat::zero());
        Ok(Series { coeffs })
    }

    /// Like [`Series::new`] but allows order 0 (used internally after repeated
    /// differentiation).
    fn raw(mut coeffs: Vec<Rat>, order: usize) -> Self {
        coeffs.resize(order + 1, Rat::zero());
        Series { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::raw(Vec::new(), order)
    }

    pub fn constant(c: Rat, order: usize) -> Self {
        Self::raw(vec![c], order)
    }

    /// The coordinate `t` itself.
    pub fn identity(order: usize) -> Self {
        Self::raw(vec![Rat::zero(), Rat::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn truncate(&self, order: usize) -> Series {
        Self::raw(self.coeffs[..=order.min(self.order())].to_vec(), order.min(self.order()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rat) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Derivative; the order drops by one.
    pub fn derivative(&self) -> Series {
        let k = self.order();
        if k == 0 {
            return Series::raw(Vec::new(), 0);
        }
        let coeffs = (1..=k).map(|i| &self.coeffs[i] * Rat::from_integer(i.into())).collect();
        Series::raw(coeffs, k - 1)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Series> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Series("reciprocal of a series with zero constant term".into()));
        }
        let k = self.order();
        let inv0 = c0.recip();
        let mut out = vec![inv0.clone()];
        for n in 1..=k {
            let mut s = Rat::zero();
            for j in 1..=n {
                s += &self.coeffs[j] * &out[n - j];
            }
            out.push(-s * &inv0);
        }
        Ok(Series { coeffs: out })
    }

    pub fn checked_div(&self, rhs: &Series) -> Result<Series> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, e: u32) -> Series {
        let mut out = Series::constant(Rat::one(), self.order());
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// `self ∘ inner`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Series) -> Result<Series> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Series("inner series must have zero constant term".into()));
        }
        let k = self.order().min(inner.order());
        let inner = inner.truncate(k);
        // Horner: c_0 + inner·(c_1 + inner·(...)).
        let mut acc = Series::zero(k);
        for c in self.coeffs[..=k].iter().rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Compositional inverse of a series with `s(0) = 0`, `s'(0) ≠ 0`.
    pub fn reversion(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series("reversion needs zero constant term".into()));
        }
        let c1 = self.coeff(1);
        if c1.is_zero() {
            return Err(Error::Series("reversion needs a nonzero linear coefficient".into()));
        }
        let k = self.order();
        let id = Series::identity(k);
        // Newton-free fixed point: r ← r − (s∘r − t)/c1; gains one order per pass.
        let mut r = id.scale(&c1.recip());
        for _ in 0..k {
            let err = &self.compose(&r)? - &id;
            if err.is_zero() {
                break;
            }
            r = &r - &err.scale(&c1.recip());
        }
        Ok(r)
    }

    /// Square root with the given constant term sign (+); requires `c_0` to
    /// be a nonzero rational square.
    pub fn sqrt(&self) -> Result<Series> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Series("square root needs a nonzero constant term".into()));
        }
        let r0 = rat_sqrt(c0).ok_or_else(|| Error::Series(format!("constant term {c0} is not a rational square")))?;
        let k = self.order();
        let two_r0 = &r0 + &r0;
        let mut out = vec![r0];
        for n in 1..=k {
            let mut s = self.coeffs[n].clone();
            for j in 1..n {
                s -= &out[j] * &out[n - j];
            }
            out.push(s / &two_r0);
        }
        Ok(Series { coeffs: out })
    }

    /// Lowest index whose coefficient differs, if any, up to the common order.
    pub fn first_difference(&self, other: &Series) -> Option<usize> {
        let k = self.order().min(other.order());
        (0..=k).find(|&i| self.coeffs[i] != other.coeffs[i])
    }

    /// Equality of the common truncation.
    pub fn agrees_with(&self, other: &Series) -> bool {
        self.first_difference(other).is_none()
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let k = self.order().min(rhs.order());
        Series::raw((0..=k).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(), k)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let k = self.order().min(rhs.order());
        Series::raw((0..=k).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect(), k)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let k = self.order().min(rhs.order());
        let mut out = vec![Rat::zero(); k + 1];
        for i in 0..=k {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(k - i) {
                if !rhs.coeffs[j].is_zero() {
                    out[i + j] += &self.coeffs[i] * &rhs.coeffs[j];
                }
            }
        }
        Series { coeffs: out }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Series {
            type Output = Series;
            fn $f(self, rhs: Series) -> Series {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", parts.join(" + "))?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::rat;

    #[test]
    fn composition_examples() {
        let k = 6;
        let s = Series::from_ints(&[0, 1, 1], k).unwrap();
        assert_eq!(Series::identity(k).compose(&s).unwrap(), s);
        let sq = Series::from_ints(&[0, 0, 1], k).unwrap();
        assert_eq!(sq.compose(&s).unwrap(), Series::from_ints(&[0, 0, 1, 2, 1], k).unwrap());
        let geometric = Series::from_ints(&[1; 7], k).unwrap();
        let two_t = Series::from_ints(&[0, 2], k).unwrap();
        let expected: Vec<i64> = (0..=k).map(|i| 1 << i).collect();
        assert_eq!(geometric.compose(&two_t).unwrap(), Series::from_ints(&expected, k).unwrap());
        assert!(geometric.compose(&geometric).is_err());
    }

    #[test]
    fn reversion_inverts() {
        let s = Series::from_ints(&[0, 2, 3, -1, 5], 10).unwrap();
        let r = s.reversion().unwrap();
        assert_eq!(s.compose(&r).unwrap(), Series::identity(10));
        assert_eq!(r.compose(&s).unwrap(), Series::identity(10));
    }

    #[test]
    fn reciprocal_and_sqrt() {
        let s = Series::from_ints(&[4, 1, -2, 7], 8).unwrap();
        let one = Series::constant(rat(1), 8);
        assert_eq!(&s * &s.recip().unwrap(), one);
        let r = s.sqrt().unwrap();
        assert_eq!(&r * &r, s);
        assert!(Series::from_ints(&[2, 1], 4).unwrap().sqrt().is_err());
        assert!(Series::from_ints(&[0, 1], 4).unwrap().recip().is_err());
    }

    #[test]
    fn derivative_lowers_order() {
        let s = Series::from_ints(&[1, 1, 1, 1], 3).unwrap();
        let d = s.derivative();
        assert_eq!(d.order(), 2);
        assert_eq!(d.coeffs(), &[rat(1), rat(2), rat(3)]);
    }
}
