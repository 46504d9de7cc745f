//! The Weyl algebra in `n` variables with rational-function coefficients.
//!
//! Elements are stored normally ordered: every term is
//! `coeff · x^α ∂^β` with all `x`'s to the left of all `∂`'s. Coefficients
//! are rational functions in parameters that commute with everything.

use super::poly::Poly;
use super::rat::Rat;
use super::ratfunc::RatFunc;
use super::var::Var;
use crate::error::{invalid, Result};
use num_bigint::BigInt;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponents `(α, β)` of `x^α ∂^β`, concatenated.
type Key = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct WeylElement {
    n: usize,
    terms: BTreeMap<Key, RatFunc>,
}

impl WeylElement {
    pub fn zero(n: usize) -> Self {
        WeylElement { n, terms: BTreeMap::new() }
    }

    pub fn scalar(n: usize, c: RatFunc) -> Self {
        let mut e = Self::zero(n);
        e.push(vec![0; 2 * n], c);
        e
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, RatFunc::one())
    }

    /// The coordinate `x_i` (0-based).
    pub fn x(n: usize, i: usize) -> Self {
        assert!(i < n, "variable index out of range");
        let mut k = vec![0; 2 * n];
        k[i] = 1;
        let mut e = Self::zero(n);
        e.push(k, RatFunc::one());
        e
    }

    /// The derivation `∂_i` (0-based).
    pub fn d(n: usize, i: usize) -> Self {
        assert!(i < n, "variable index out of range");
        let mut k = vec![0; 2 * n];
        k[n + i] = 1;
        let mut e = Self::zero(n);
        e.push(k, RatFunc::one());
        e
    }

    fn push(&mut self, key: Key, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as `(x-exponents, ∂-exponents, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &[u32], &RatFunc)> {
        self.terms.iter().map(move |(k, c)| (&k[..self.n], &k[self.n..], c))
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        let mut out = Self::zero(self.n);
        for (k, v) in &self.terms {
            out.push(k.clone(), v * c);
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Replaces parameters by their values in every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        let mut out = Self::zero(self.n);
        for (k, c) in &self.terms {
            out.push(k.clone(), f(c));
        }
        out
    }

    /// Applies the operator to a function of the coordinates `xs`.
    pub fn apply(&self, xs: &[Var], f: &RatFunc) -> Result<RatFunc> {
        if xs.len() != self.n {
            return Err(invalid("coordinate list does not match the number of Weyl variables"));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            let mut g = f.clone();
            for (i, &b) in k[self.n..].iter().enumerate() {
                for _ in 0..b {
                    g = g.derivative(xs[i]);
                }
            }
            if g.is_zero() {
                continue;
            }
            let mono = xs
                .iter()
                .zip(&k[..self.n])
                .fold(Poly::one(), |acc, (&v, &a)| &acc * &Poly::var(v).pow(a));
            terms.push(&(c * &g) * &RatFunc::from_poly(mono));
        }
        Ok(RatFunc::sum(terms.iter()))
    }
}

/// `∂^b x^c = Σ_k C(b,k) c!/(c−k)! x^{c−k} ∂^{b−k}` for one variable.
fn leibniz(b: u32, c: u32) -> Vec<(u32, BigInt)> {
    let mut out = Vec::new();
    let mut binom = BigInt::from(1);
    let mut falling = BigInt::from(1);
    for k in 0..=b.min(c) {
        if k > 0 {
            binom = binom * BigInt::from(b - k + 1) / BigInt::from(k);
            falling *= BigInt::from(c - k + 1);
        }
        out.push((k, &binom * &falling));
    }
    out
}

impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        assert_eq!(self.n, rhs.n, "Weyl algebras of different rank");
        let n = self.n;
        let mut acc: HashMap<Key, Vec<RatFunc>> = HashMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let coeff = ca * cb;
                // Expand ∂^β x^γ one variable at a time.
                let mut partial: Vec<(Key, BigInt)> = vec![(vec![0; 2 * n], BigInt::from(1))];
                for i in 0..n {
                    let (b, c) = (ka[n + i], kb[i]);
                    let options = leibniz(b, c);
                    let mut next = Vec::with_capacity(partial.len() * options.len());
                    for (key, w) in &partial {
                        for (k, lw) in &options {
                            let mut key = key.clone();
                            key[i] = ka[i] + c - k;
                            key[n + i] = b - k + kb[n + i];
                            next.push((key, w * lw));
                        }
                    }
                    partial = next;
                }
                for (key, w) in partial {
                    acc.entry(key).or_default().push(coeff.scale(&Rat::from_integer(w)));
                }
            }
        }
        let mut out = WeylElement::zero(n);
        for (key, parts) in acc {
            let c = RatFunc::sum(parts.iter());
            if !c.is_zero() {
                out.terms.insert(key, c);
            }
        }
        out
    }
}

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: &WeylElement) -> WeylElement {
        assert_eq!(self.n, rhs.n, "Weyl algebras of different rank");
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.push(k.clone(), c.clone());
        }
        out
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        WeylElement {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for WeylElement {
            type Output = WeylElement;
            fn $f(self, rhs: WeylElement) -> WeylElement {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (xs, ds, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &a) in xs.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{a}", i + 1)?,
                }
            }
            for (i, &b) in ds.iter().enumerate() {
                match b {
                    0 => {}
                    1 => write!(f, "*d{}", i + 1)?,
                    _ => write!(f, "*d{}^{b}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_commutation_relations() {
        let n = 2;
        for i in 0..n {
            for j in 0..n {
                let c = WeylElement::d(n, i).commutator(&WeylElement::x(n, j));
                let expected = if i == j { WeylElement::one(n) } else { WeylElement::zero(n) };
                assert_eq!(c, expected);
            }
        }
    }

    #[test]
    fn normal_ordering_of_d_squared_x_squared() {
        // ∂²x² = x²∂² + 4x∂ + 2
        let (x, d) = (WeylElement::x(1, 0), WeylElement::d(1, 0));
        let lhs = &(&d * &d) * &(&x * &x);
        let four = RatFunc::int(4);
        let two = RatFunc::int(2);
        let rhs = &(&(&(&x * &x) * &(&d * &d)) + &(&x * &d).scale(&four)) + &WeylElement::scalar(1, two);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn apply_to_polynomial() {
        let xv = Var::new("weyl_apply_x");
        let (x, d) = (WeylElement::x(1, 0), WeylElement::d(1, 0));
        let euler = &x * &d;
        let f = RatFunc::var(xv).pow(3);
        assert_eq!(euler.apply(&[xv], &f).unwrap(), f.scale(&Rat::from_integer(3.into())));
        assert!(d.apply(&[xv], &RatFunc::one()).unwrap().is_zero());
    }
}
