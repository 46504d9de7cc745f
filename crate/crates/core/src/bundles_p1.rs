//! Rank-2 bundles on the projective line.
//!
//! The bundle `E` is glued from trivial bundles on the two standard charts
//! by the transition matrix `[[1, f(z)], [0, z^m]]` with
//! `f(z) = a_1 z + … + a_{m−1} z^{m−1}`. Every such bundle is `O(k) ⊕ O(m−k)`
//! for a unique `k ≥ m/2`, and `k` is read off from the ranks of Hankel-type
//! matrices built from the `a_i`.

use crate::error::{invalid, Result};
use crate::exactalg::{QMatrix, Rat};
use num_traits::Zero;
use rayon::prelude::*;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionData {
    m: usize,
    coeffs: Vec<Rat>,
}

impl TransitionData {
    /// `coeffs` are `a_1 .. a_{m−1}`. The constant and `z^m` coefficients are
    /// not part of the normal form and cannot be supplied.
    pub fn new(m: usize, coeffs: Vec<Rat>) -> Result<Self> {
        if m < 2 {
            return Err(invalid(format!("m must be at least 2, got {m}")));
        }
        if coeffs.len() != m - 1 {
            return Err(invalid(format!(
                "expected {} coefficients a_1..a_{} for m = {m}, got {}",
                m - 1,
                m - 1,
                coeffs.len()
            )));
        }
        Ok(TransitionData { m, coeffs })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// `a_i` for `1 ≤ i ≤ m−1`, zero outside that range.
    pub fn a(&self, i: usize) -> Rat {
        if i >= 1 && i < self.m {
            self.coeffs[i - 1].clone()
        } else {
            Rat::zero()
        }
    }
}

/// `E ≅ O(k) ⊕ O(m − k)` with `k ≥ m − k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplittingType {
    pub m: usize,
    pub k: usize,
}

impl SplittingType {
    pub fn other(&self) -> usize {
        self.m - self.k
    }

    /// `dim Hom(O(r), O(k) ⊕ O(m−k))`.
    pub fn hom_dimension(&self, r: i64) -> usize {
        let part = |d: i64| (d - r + 1).max(0) as usize;
        part(self.k as i64) + part(self.other() as i64)
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({})+O({})", self.k, self.other())
    }
}

/// The `n × (m−n)` matrix with entries `a_{i+j+1}` (0-based `i`, `j`).
fn criterion_matrix(data: &TransitionData, n: usize) -> QMatrix {
    QMatrix::from_fn(n, data.m - n, |i, j| data.a(i + j + 1))
}

/// Smallest `n ≥ ⌈m/2⌉` whose criterion matrix has full column rank `m − n`.
pub fn splitting_type(data: &TransitionData) -> SplittingType {
    let m = data.m;
    let k = (m.div_ceil(2)..=m)
        .find(|&n| n == m || criterion_matrix(data, n).rank() == m - n)
        .unwrap_or(m);
    SplittingType { m, k }
}

/// Classifies many bundles in parallel; output order follows input order.
pub fn classify_batch(batch: &[TransitionData]) -> Vec<SplittingType> {
    batch.par_iter().map(splitting_type).collect()
}

/// Determinant of the `n × n` Hankel matrix `H[i][j] = a_{i+j−1}` built from
/// `a_1 .. a_{2n−1}`.
pub fn hankel_determinant(coeffs: &[Rat]) -> Result<Rat> {
    if coeffs.len() % 2 == 0 {
        return Err(invalid(format!(
            "Hankel determinant needs an odd number of coefficients, got {}",
            coeffs.len()
        )));
    }
    let n = coeffs.len().div_ceil(2);
    Ok(QMatrix::from_fn(n, n, |i, j| coeffs[i + j].clone()).determinant())
}

/// Dimension of the space of global sections of `E ⊗ O(−r)`, computed by
/// brute force.
///
/// Sections are pairs `(x_∞, y_∞)` of polynomials in `w = 1/z` on the chart
/// at infinity whose images `z^{−r}(x_∞ + f y_∞)` and `z^{m−r} y_∞` on the
/// chart at zero have no negative powers of `z`. The unknowns are the
/// coefficients of `x_∞` and `y_∞` up to a degree that cannot be exceeded by
/// any section; the answer is the number of unknowns minus the rank of the
/// resulting linear system.
pub fn hom_dimension_oracle(r: i64, data: &TransitionData) -> usize {
    let m = data.m as i64;
    let deg = (2 * m + r.abs() + 2) as usize;
    let unknowns = 2 * (deg + 1);
    // Columns: x_∞ coefficients 0..=deg, then y_∞ coefficients. One row per
    // (component, negative exponent of z).
    let mut rows: std::collections::BTreeMap<(usize, i64), Vec<Rat>> = Default::default();
    let mut entry = |comp: usize, e: i64, col: usize, c: Rat| {
        if e < 0 && !c.is_zero() {
            let row = rows.entry((comp, e)).or_insert_with(|| vec![Rat::zero(); unknowns]);
            row[col] += c;
        }
    };
    for l in 0..=deg {
        // z^{−r} · w^l = z^{−r−l}
        entry(0, -r - l as i64, l, Rat::from_integer(1.into()));
        // z^{−r} f(z) w^l
        for i in 1..data.m {
            entry(0, -r + i as i64 - l as i64, deg + 1 + l, data.a(i));
        }
        // z^{m−r} w^l
        entry(1, m - r - l as i64, deg + 1 + l, Rat::from_integer(1.into()));
    }
    let rank = if rows.is_empty() {
        0
    } else {
        QMatrix::from_rows(rows.into_values().collect()).rank()
    };
    unknowns - rank
}

/// Splitting type recovered from the oracle as the largest `r` with a
/// nonzero map `O(r) → E`.
pub fn splitting_type_from_oracle(data: &TransitionData) -> SplittingType {
    let m = data.m;
    let k = (0..=m).rev().find(|&r| hom_dimension_oracle(r as i64, data) > 0).unwrap_or(0);
    SplittingType { m, k }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn data(m: usize, a: &[i64]) -> TransitionData {
        TransitionData::new(m, a.iter().map(|&x| rat(x)).collect()).unwrap()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(splitting_type(&data(2, &[5])).k, 1);
        assert_eq!(splitting_type(&data(4, &[0, 0, 0])).k, 4);
        let d = data(3, &[1, 1]);
        assert_eq!(splitting_type(&d).k, 2);
        assert_eq!(hom_dimension_oracle(3, &d), 0);
        assert!(hom_dimension_oracle(2, &d) > 0);
        assert_eq!(splitting_type(&d).to_string(), "O(2)+O(1)");
    }

    #[test]
    fn hankel_examples() {
        assert_eq!(hankel_determinant(&[rat(7)]).unwrap(), rat(7));
        assert_eq!(hankel_determinant(&[rat(1), rat(0), rat(1)]).unwrap(), rat(1));
        assert_eq!(hankel_determinant(&[rat(1), rat(1), rat(1)]).unwrap(), rat(0));
        assert_eq!(splitting_type(&data(4, &[1, 1, 1])).k, 3);
        assert_eq!(splitting_type_from_oracle(&data(4, &[1, 1, 1])).k, 3);
        assert!(hankel_determinant(&[rat(1), rat(2)]).is_err());
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(hom_dimension_oracle(3, &data(2, &[4])), 0);
        assert_eq!(hom_dimension_oracle(0, &data(2, &[0])), 4);
        assert_eq!(hom_dimension_oracle(2, &data(3, &[1, 1])), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(TransitionData::new(1, vec![]).is_err());
        assert!(TransitionData::new(3, vec![rat(1)]).is_err());
        assert!(TransitionData::new(3, vec![rat(0), rat(1), rat(1)]).is_err());
    }

    #[test]
    fn grothendieck_consistency_small_cases() {
        for m in 2..=6usize {
            for seed in 0..6i64 {
                let a: Vec<i64> = (0..m as i64 - 1).map(|i| (i * seed + seed) % 3 - 1).collect();
                let d = data(m, &a);
                let t = splitting_type(&d);
                for r in -2..=(m as i64 + 1) {
                    assert_eq!(hom_dimension_oracle(r, &d), t.hom_dimension(r), "m={m} a={a:?} r={r}");
                }
            }
        }
    }
}
