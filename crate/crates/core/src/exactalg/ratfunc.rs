//! Multivariate rational functions over the rationals.

use super::poly::Poly;
use super::rat::Rat;
use super::var::Var;
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A quotient `num / den` in lowest terms.
///
/// Canonical form: `gcd(num, den) = 1`, the leading coefficient of `den` is
/// one, and zero is `0 / 1`. Because the form is canonical, structural
/// equality coincides with equality of rational functions.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            return RatFunc {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = den.leading_term().unwrap().1.clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Self::from_poly(Poly::int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Rat> {
        self.as_poly().and_then(Poly::constant_value)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        // Powers of coprime polynomials stay coprime.
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn derivative(&self, v: Var) -> Self {
        if self.is_polynomial() {
            return Self::from_poly(self.num.derivative(v));
        }
        let n = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        Self::reduce(n, self.den.pow(2))
    }

    /// Cross-multiplied identity test `a·d == c·b`.
    pub fn equals(&self, other: &RatFunc) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn eval(&self, values: &HashMap<Var, Rat>) -> Result<Rat> {
        let d = self.den.eval(values)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(values)? / d)
    }

    pub fn eval_partial(&self, values: &HashMap<Var, Rat>) -> Result<Self> {
        RatFunc::new(self.num.eval_partial(values), self.den.eval_partial(values))
    }

    pub fn eval_f64(&self, values: &HashMap<Var, f64>) -> Result<f64> {
        Ok(self.num.eval_f64(values)? / self.den.eval_f64(values)?)
    }

    /// Sum of many rational functions with a single final reduction.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a RatFunc>) -> RatFunc {
        let mut num = Poly::zero();
        let mut den = Poly::one();
        for f in items {
            if f.is_zero() {
                continue;
            }
            if f.den == den {
                num += &f.num;
                continue;
            }
            let g = Poly::gcd(&den, &f.den);
            let a = den.div_exact(&g).unwrap();
            let b = f.den.div_exact(&g).unwrap();
            num = &(&num * &b) + &(&f.num * &a);
            den = &den * &b;
        }
        Self::reduce(num, den)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RatFunc::from_poly(&self.num + &rhs.num);
            }
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let g = Poly::gcd(&self.den, &rhs.den);
        let a = self.den.div_exact(&g).unwrap();
        let b = rhs.den.div_exact(&g).unwrap();
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        RatFunc::reduce(num, &self.den * &b)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        // Cancel across the diagonals only; each input is already reduced.
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lc = den.leading_term().unwrap().1.clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            if den.is_constant() {
                return RatFunc::from_poly(num.scale(&inv));
            }
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    /// Panics on division by the zero function; use [`RatFunc::checked_div`]
    /// when the divisor may vanish.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: RatFunc) -> RatFunc {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: &RatFunc) -> RatFunc {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<Var> for RatFunc {
    fn from(v: Var) -> Self {
        RatFunc::var(v)
    }
}

impl From<Rat> for RatFunc {
    fn from(c: Rat) -> Self {
        RatFunc::constant(c)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}
