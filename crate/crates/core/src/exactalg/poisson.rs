//! Canonical Poisson brackets and reduction modulo p-linear ideals.

use super::poly::{Monomial, Poly};
use super::ratfunc::RatFunc;
use super::var::Var;
use crate::error::{invalid, Error, Result};
use num_traits::One;
use std::collections::{BTreeSet, HashMap};

/// Canonical coordinates `(y_i, p_i)` plus parameters that are constant
/// under the bracket.
///
/// Sign convention: `{p_i, y_i} = +1`, i.e. the symplectic form is
/// `Σ dp_i ∧ dy_i`.
#[derive(Clone, Debug)]
pub struct PoissonStructure {
    pairs: Vec<(Var, Var)>,
    declared: BTreeSet<Var>,
}

impl PoissonStructure {
    /// `pairs` are `(position, momentum)`; every variable must appear once.
    pub fn new(pairs: Vec<(Var, Var)>, parameters: impl IntoIterator<Item = Var>) -> Result<Self> {
        let mut declared = BTreeSet::new();
        for &(y, p) in &pairs {
            if !declared.insert(y) || !declared.insert(p) {
                return Err(invalid("canonical pairs must be disjoint"));
            }
        }
        for v in parameters {
            if pairs.iter().any(|&(y, p)| y == v || p == v) {
                return Err(invalid(format!("parameter {v} is also a canonical coordinate")));
            }
            declared.insert(v);
        }
        Ok(PoissonStructure { pairs, declared })
    }

    pub fn pairs(&self) -> &[(Var, Var)] {
        &self.pairs
    }

    fn check(&self, f: &RatFunc) -> Result<()> {
        match f.vars().into_iter().find(|v| !self.declared.contains(v)) {
            Some(v) => Err(Error::UndeclaredVariable(v.name())),
            None => Ok(()),
        }
    }

    /// `{f, g} = Σ_i (∂f/∂p_i ∂g/∂y_i − ∂f/∂y_i ∂g/∂p_i)`.
    pub fn bracket(&self, f: &RatFunc, g: &RatFunc) -> Result<RatFunc> {
        self.check(f)?;
        self.check(g)?;
        let mut terms = Vec::with_capacity(2 * self.pairs.len());
        for &(y, p) in &self.pairs {
            let fp = f.derivative(p);
            let gy = g.derivative(y);
            if !fp.is_zero() && !gy.is_zero() {
                terms.push(&fp * &gy);
            }
            let fy = f.derivative(y);
            let gp = g.derivative(p);
            if !fy.is_zero() && !gp.is_zero() {
                terms.push(-(&fy * &gp));
            }
        }
        Ok(RatFunc::sum(terms.iter()))
    }
}

/// Convenience wrapper around [`PoissonStructure::bracket`].
pub fn poisson_bracket(f: &RatFunc, g: &RatFunc, pairs: &[(Var, Var)], parameters: &[Var]) -> Result<RatFunc> {
    PoissonStructure::new(pairs.to_vec(), parameters.iter().copied())?.bracket(f, g)
}

/// Normal form of `f` modulo an ideal generated by polynomials that are
/// linear in `p_vars`.
///
/// The generators are solved for as many momenta as their rank allows
/// (pivots are taken from the end of `p_vars`), working over the field of
/// rational functions in the remaining variables; the solution is then
/// substituted into `f`. The result is zero exactly when `f` vanishes on the
/// ideal's zero set for generic values of the non-momentum variables.
pub fn reduce_mod_ideal(f: &Poly, gens: &[Poly], p_vars: &[Var]) -> Result<RatFunc> {
    let n = p_vars.len();
    // Row = [coefficients of p_vars..., constant part].
    let mut rows: Vec<Vec<RatFunc>> = Vec::with_capacity(gens.len());
    for g in gens {
        let mut row = vec![RatFunc::zero(); n + 1];
        for (m, c) in g.terms() {
            let hits: Vec<(usize, u32)> = p_vars
                .iter()
                .enumerate()
                .filter_map(|(i, &v)| {
                    let e = m.exponent(v);
                    (e > 0).then_some((i, e))
                })
                .collect();
            let (col, rest) = match hits.as_slice() {
                [] => (n, m.clone()),
                [(i, 1)] => (*i, m.split(p_vars[*i]).1),
                _ => return Err(Error::Unsupported("generator is not linear in the momenta".into())),
            };
            row[col] = &row[col] + &RatFunc::from_poly(Poly::term(c.clone(), rest));
        }
        rows.push(row);
    }

    // Gauss-Jordan elimination, choosing pivot columns from the last momentum.
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0;
    for col in (0..n).rev() {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][col].recip()?;
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                let pivot_row = rows[r].clone();
                for (x, pv) in rows[i].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &(&factor * pv);
                }
            }
        }
        pivots.push((r, col));
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return Err(invalid("inconsistent constraint system"));
    }

    // p_col = -(Σ_free row[j] p_j + row[n]).
    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut solutions: HashMap<Var, RatFunc> = HashMap::new();
    for &(row, col) in &pivots {
        let mut terms = vec![rows[row][n].clone()];
        for j in 0..n {
            if j != col && !pivot_cols.contains(&j) && !rows[row][j].is_zero() {
                terms.push(&rows[row][j] * &RatFunc::var(p_vars[j]));
            }
        }
        solutions.insert(p_vars[col], -RatFunc::sum(terms.iter()));
    }
    substitute_all(f, &solutions)
}

/// Substitutes rational functions for several variables at once, using a
/// common denominator so only one final reduction is needed.
pub fn substitute_all(f: &Poly, values: &HashMap<Var, RatFunc>) -> Result<RatFunc> {
    if values.is_empty() {
        return Ok(RatFunc::from_poly(f.clone()));
    }
    let mut common = Poly::one();
    for r in values.values() {
        let g = Poly::gcd(&common, r.denom());
        common = &common * &r.denom().div_exact(&g).unwrap();
    }
    let numerators: HashMap<Var, Poly> = values
        .iter()
        .map(|(v, r)| (*v, r.numer() * &common.div_exact(r.denom()).unwrap()))
        .collect();
    let degree = f
        .terms()
        .map(|(m, _)| m.factors().filter(|(v, _)| values.contains_key(v)).map(|(_, e)| e).sum::<u32>())
        .max()
        .unwrap_or(0);
    let mut power_cache: HashMap<(Var, u32), Poly> = HashMap::new();
    let mut common_pows = vec![Poly::one()];
    for k in 1..=degree {
        let next = &common_pows[k as usize - 1] * &common;
        common_pows.push(next);
    }
    let mut num = Poly::zero();
    for (m, c) in f.terms() {
        let mut term = Poly::constant(c.clone());
        let mut rest = Vec::new();
        let mut used = 0;
        for (v, e) in m.factors() {
            if let Some(n) = numerators.get(&v) {
                let p = power_cache.entry((v, e)).or_insert_with(|| n.pow(e)).clone();
                term = &term * &p;
                used += e;
            } else {
                rest.push((v, e));
            }
        }
        term = &term * &Poly::term(One::one(), Monomial::from_pairs(rest));
        term = &term * &common_pows[(degree - used) as usize];
        num += &term;
    }
    RatFunc::new(num, common_pows[degree as usize].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(i: usize) -> (Var, Var) {
        (Var::indexed("pb_y", i), Var::indexed("pb_p", i))
    }

    #[test]
    fn canonical_pair_brackets_to_one() {
        let (y, p) = pair(1);
        let b = poisson_bracket(&RatFunc::var(p), &RatFunc::var(y), &[(y, p)], &[]).unwrap();
        assert_eq!(b, RatFunc::one());
    }

    #[test]
    fn bracket_of_py_with_p_is_minus_p() {
        let (y, p) = pair(1);
        let f = RatFunc::var(p) * RatFunc::var(y);
        let b = poisson_bracket(&f, &RatFunc::var(p), &[(y, p)], &[]).unwrap();
        assert_eq!(b, -RatFunc::var(p));
    }

    #[test]
    fn undeclared_and_overlapping_variables_rejected() {
        let (y, p) = pair(1);
        let stray = RatFunc::var(Var::new("pb_stray"));
        assert!(matches!(
            poisson_bracket(&stray, &RatFunc::var(p), &[(y, p)], &[]),
            Err(Error::UndeclaredVariable(_))
        ));
        assert!(PoissonStructure::new(vec![(y, p), (p, y)], []).is_err());
    }

    #[test]
    fn reduction_examples() {
        let (y1, p1) = pair(1);
        let (y2, p2) = pair(2);
        let (p1v, p2v) = (Poly::var(p1), Poly::var(p2));
        let s = &p1v + &p2v;
        assert!(reduce_mod_ideal(&s, &[s.clone()], &[p1, p2]).unwrap().is_zero());
        let weighted = &(&p1v * &Poly::var(y1)) + &(&p2v * &Poly::var(y2));
        assert!(reduce_mod_ideal(&p1v, &[s.clone(), weighted], &[p1, p2]).unwrap().is_zero());
        // p1 alone is not in <p1 + p2>: it reduces to p1.
        let r = reduce_mod_ideal(&p1v, &[s], &[p1, p2]).unwrap();
        assert_eq!(r, RatFunc::var(p1));
        let nonlinear = &p1v * &p1v;
        assert!(matches!(
            reduce_mod_ideal(&p1v, &[nonlinear], &[p1, p2]),
            Err(Error::Unsupported(_))
        ));
    }
}
