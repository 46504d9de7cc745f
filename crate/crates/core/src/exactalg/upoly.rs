//! Dense univariate polynomials, generic over the coefficient field.
//!
//! Used with `Rat` for exact spectral-curve work and with `f64` along
//! numerical trajectories.

use num_traits::{Num, Zero};
use std::ops::{Add, Mul, Neg, Sub};

/// `coeffs[k]` multiplies `z^k`; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Num + Clone> UPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `z - root`.
    pub fn linear_root(root: T) -> Self {
        Self::new(vec![T::zero() - root, T::one()])
    }

    /// `Π (z − r)`.
    pub fn from_roots(roots: &[T]) -> Self {
        roots
            .iter()
            .fold(Self::constant(T::one()), |acc, r| &acc * &Self::linear_root(r.clone()))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, z: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut k = T::zero();
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                out.push(c.clone() * k.clone());
            }
            k = k + T::one();
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd].clone() / lead.clone();
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - q.clone() * c.clone();
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic GCD by the Euclidean algorithm (exact fields only).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(l) => Self::new(a.coeffs.into_iter().map(|c| c / l.clone()).collect()),
            None => a,
        }
    }

    /// Whether the polynomial has no repeated factor, via `gcd(f, f')`.
    pub fn is_square_free(&self) -> bool {
        !self.is_zero() && Self::gcd(self, &self.derivative()).degree() == Some(0)
    }

    pub fn map<U: Num + Clone>(&self, f: impl Fn(&T) -> U) -> UPoly<U> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Num + Clone> Add for &UPoly<T> {
    type Output = UPoly<T>;
    fn add(self, rhs: &UPoly<T>) -> UPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &Vec<T>, i: usize| v.get(i).cloned().unwrap_or_else(T::zero);
        UPoly::new((0..n).map(|i| get(&self.coeffs, i) + get(&rhs.coeffs, i)).collect())
    }
}

impl<T: Num + Clone> Sub for &UPoly<T> {
    type Output = UPoly<T>;
    fn sub(self, rhs: &UPoly<T>) -> UPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &Vec<T>, i: usize| v.get(i).cloned().unwrap_or_else(T::zero);
        UPoly::new((0..n).map(|i| get(&self.coeffs, i) - get(&rhs.coeffs, i)).collect())
    }
}

impl<T: Num + Clone> Mul for &UPoly<T> {
    type Output = UPoly<T>;
    fn mul(self, rhs: &UPoly<T>) -> UPoly<T> {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::new(out)
    }
}

impl<T: Num + Clone> Neg for &UPoly<T> {
    type Output = UPoly<T>;
    fn neg(self) -> UPoly<T> {
        UPoly::new(self.coeffs.iter().map(|c| T::zero() - c.clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{rat, Rat};

    #[test]
    fn roots_and_division() {
        let roots: Vec<Rat> = [0, 1, 3].iter().map(|&r| rat(r)).collect();
        let b = UPoly::from_roots(&roots);
        assert_eq!(b.degree(), Some(3));
        assert_eq!(b.eval(&rat(3)), rat(0));
        let (q, r) = b.div_rem(&UPoly::linear_root(rat(1)));
        assert!(r.is_zero());
        assert_eq!(q, UPoly::from_roots(&[rat(0), rat(3)]));
    }

    #[test]
    fn square_freeness() {
        let sq = UPoly::from_roots(&[rat(2), rat(2), rat(5)]);
        assert!(!sq.is_square_free());
        assert!(UPoly::from_roots(&[rat(2), rat(5)]).is_square_free());
        assert_eq!(UPoly::gcd(&sq, &sq.derivative()), UPoly::linear_root(rat(2)));
    }

    #[test]
    fn float_coefficients() {
        let p = UPoly::new(vec![1.0, -3.0, 2.0]);
        assert_eq!(p.eval(&2.0), 3.0);
        let (q, r) = p.div_rem(&UPoly::new(vec![-1.0, 1.0]));
        assert_eq!(q.coeffs(), &[-1.0, 2.0]);
        assert!(r.is_zero());
    }
}
