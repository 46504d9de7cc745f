//! Sparse multivariate polynomials over exact rationals.
//!
//! Monomials are kept in graded lexicographic order, with variables ordered
//! by their registry handle. Coefficients are never stored as zero.

use super::rat::{format_rat, rat_to_f64, Rat};
use super::var::Var;
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Power product of variables, stored as `(var, exponent)` pairs sorted by var.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut s = SmallVec::new();
        s.push((v, e));
        Monomial(s)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut m = Self::one();
        for (v, e) in pairs {
            m = &m * &Self::var_pow(v, e);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().copied()
    }

    /// Splits off the power of `v`: returns `(e, self / v^e)`.
    pub fn split(&self, v: Var) -> (u32, Monomial) {
        let mut rest = SmallVec::new();
        let mut e = 0;
        for &(w, k) in &self.0 {
            if w == v {
                e = k;
            } else {
                rest.push((w, k));
            }
        }
        (e, Monomial(rest))
    }

    /// `self / other` if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        for &(v, e) in &self.0 {
            let mut k = 0;
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                k = other.0[j].1;
                j += 1;
            }
            if k > e {
                return None;
            }
            if e > k {
                out.push((v, e - k));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Lowers the exponent of `v` by one, returning the old exponent.
    fn differentiate(&self, v: Var) -> Option<(u32, Monomial)> {
        let e = self.exponent(v);
        if e == 0 {
            return None;
        }
        let mut out = self.0.clone();
        let idx = out.iter().position(|&(w, _)| w == v).unwrap();
        if e == 1 {
            out.remove(idx);
        } else {
            out[idx].1 -= 1;
        }
        Some((e, Monomial(out)))
    }

    fn display_key(&self) -> (std::cmp::Reverse<u32>, Vec<(String, u32)>) {
        let mut names: Vec<(String, u32)> = self.0.iter().map(|&(v, e)| (v.name(), e)).collect();
        names.sort();
        (std::cmp::Reverse(self.degree()), names)
    }
}

impl Mul for &Monomial {
    type Output = Monomial;
    fn mul(self, rhs: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        let mut i = 0;
        while i < a.len() && i < b.len() {
            let ((va, ea), (vb, eb)) = (a[i], b[i]);
            if va != vb {
                // The monomial carrying the earlier variable is larger.
                return if va < vb { Ordering::Greater } else { Ordering::Less };
            }
            match ea.cmp(&eb) {
                Ordering::Equal => i += 1,
                o => return o,
            }
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut factors: Vec<(String, u32)> = self.0.iter().map(|&(v, e)| (v.name(), e)).collect();
        factors.sort();
        let parts: Vec<String> = factors
            .into_iter()
            .map(|(n, e)| if e == 1 { n } else { format!("{n}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Multivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(super::rat::rat(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rat::one(), Monomial::var_pow(v, 1))
    }

    pub fn term(c: Rat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.factors().map(|(v, _)| v)).collect()
    }

    /// Leading term in graded lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    fn mul_term(&self, c: &Rat, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(n, k)| (n * m, k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some((e, dm)) = m.differentiate(v) {
                out.add_term(dm, c * Rat::from_integer(e.into()));
            }
        }
        out
    }

    /// Coefficients as a polynomial in `v`: entry `k` multiplies `v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coefficients_in(v: Var, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let m = Monomial::var_pow(v, k as u32);
            for (n, a) in &c.terms {
                out.add_term(n * &m, a.clone());
            }
        }
        out
    }

    /// Replaces `v` by `value`.
    pub fn substitute(&self, v: Var, value: &Poly) -> Poly {
        let coeffs = self.coefficients_in(v);
        // Horner in v.
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Substitutes rational values for some variables.
    pub fn eval_partial(&self, values: &HashMap<Var, Rat>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = SmallVec::new();
            for (v, e) in m.factors() {
                match values.get(&v) {
                    Some(x) => coeff *= num_traits::pow(x.clone(), e as usize),
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial(rest), coeff);
        }
        out
    }

    /// Full evaluation at rational values.
    pub fn eval(&self, values: &HashMap<Var, Rat>) -> Result<Rat> {
        let p = self.eval_partial(values);
        p.constant_value().ok_or_else(|| {
            let missing = p.vars().into_iter().next().unwrap();
            Error::UndeclaredVariable(missing.name())
        })
    }

    /// Full evaluation at floating-point values.
    pub fn eval_f64(&self, values: &HashMap<Var, f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = rat_to_f64(c);
            for (v, e) in m.factors() {
                let x = values.get(&v).ok_or_else(|| Error::UndeclaredVariable(v.name()))?;
                t *= x.powi(e as i32);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Compiles to a fast floating-point evaluator over the given slots.
    pub fn compile(&self, slots: &[Var]) -> Result<CompiledPoly> {
        let index: HashMap<Var, usize> = slots.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut factors = SmallVec::new();
            for (v, e) in m.factors() {
                let i = *index.get(&v).ok_or_else(|| Error::UndeclaredVariable(v.name()))?;
                factors.push((i, e as i32));
            }
            terms.push((rat_to_f64(c), factors));
        }
        Ok(CompiledPoly { terms })
    }

    /// `self / divisor` when the division is exact.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading_term()?;
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut quotient = Poly::zero();
        let mut rem = self.clone();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.checked_div(lm)?;
            let qc = c / lc;
            rem -= &divisor.mul_term(&qc, &qm);
            quotient.add_term(qm, qc);
        }
        Some(quotient)
    }

    /// Divides by the leading coefficient; returns the monic polynomial.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Greatest common divisor, normalized to be monic.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one();
        }
        if a == b {
            return a.monic();
        }
        let (va, vb) = (a.vars(), b.vars());
        if let Some(&v) = va.difference(&vb).next() {
            return Poly::gcd(&a.content_in(v), b);
        }
        if let Some(&v) = vb.difference(&va).next() {
            return Poly::gcd(a, &b.content_in(v));
        }
        let v = *va.iter().next_back().unwrap();
        let (ca, cb) = (a.content_in(v), b.content_in(v));
        let c = Poly::gcd(&ca, &cb);
        let pa = a.div_exact(&ca).expect("content divides");
        let pb = b.div_exact(&cb).expect("content divides");
        let g = primitive_prs(pa, pb, v);
        (&c * &g).monic()
    }

    /// GCD of the coefficients of `self` viewed as a polynomial in `v`.
    pub fn content_in(&self, v: Var) -> Poly {
        let mut g = Poly::zero();
        for c in self.coefficients_in(v) {
            if c.is_zero() {
                continue;
            }
            g = Poly::gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_part_in(&self, v: Var) -> Poly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    /// Pseudo-remainder of `self` by `b` as polynomials in `v`.
    pub fn pseudo_rem(&self, b: &Poly, v: Var) -> Poly {
        let db = b.degree_in(v);
        let lb = b.coefficients_in(v).pop().unwrap();
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lr = r.coefficients_in(v).pop().unwrap();
            let shift = Poly::term(Rat::one(), Monomial::var_pow(v, dr - db));
            r = &(&r * &lb) - &(&(&lr * &shift) * b);
        }
        r
    }
}

fn primitive_prs(a: Poly, b: Poly, v: Var) -> Poly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        let r = a.pseudo_rem(&b, v);
        if r.is_zero() {
            return b.primitive_part_in(v);
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        a = b;
        b = r.primitive_part_in(v);
    }
}

/// Floating-point evaluator produced by [`Poly::compile`].
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, SmallVec<[(usize, i32); 4]>)>,
}

impl CompiledPoly {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, fs)| fs.iter().fold(*c, |acc, &(i, e)| acc * x[i].powi(e)))
            .sum()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut acc: HashMap<Monomial, Rat> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let c = ca * cb;
                acc.entry(ma * mb).and_modify(|x| *x += &c).or_insert(c);
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Poly {
        Poly::var(v)
    }
}

impl From<Rat> for Poly {
    fn from(c: Rat) -> Poly {
        Poly::constant(c)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_cached_key(|(m, _)| m.display_key());
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c < &Rat::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", format_rat(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rat(&abs))?;
            }
        }
        Ok(())
    }
}
