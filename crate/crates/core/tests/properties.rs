//! Randomized invariants across the modules.

use hitchinlab::bundles_p1::{hom_dimension_oracle, splitting_type, TransitionData};
use hitchinlab::elliptic_cm::{theta, wp, Torus, DEFAULT_TOL};
use hitchinlab::exactalg::{Monomial, PoissonStructure, Poly, QMatrix, Rat, RatFunc, Series, Var, WeylElement};
use hitchinlab::garnier::{moment_constraints, random_admissible_state};
use hitchinlab::gaudin::{commutativity_check, gaudin_operators, gaudin_operators_scaled};
use hitchinlab::liedata::{degree_sum, group_data, Family};
use hitchinlab::opers::{schwarzian, CoordinateChange};
use hitchinlab::spectral::riemann_hurwitz_genus;
use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("nonzero", |r| !r.is_zero())
}

fn vars() -> [Var; 4] {
    [Var::new("y1"), Var::new("p1"), Var::new("y2"), Var::new("p2")]
}

/// Polynomials of degree at most three in `y1, p1, y2, p2`.
fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::array::uniform4(0u32..=1), small_rat()), 1..4).prop_map(|terms| {
        let v = vars();
        Poly::from_terms(terms.into_iter().map(|(e, c)| {
            let m = Monomial::from_pairs(v.iter().zip(e).map(|(&x, k)| (x, k)));
            (m, c)
        }))
    })
}

fn structure() -> PoissonStructure {
    let [y1, p1, y2, p2] = vars();
    PoissonStructure::new(vec![(y1, p1), (y2, p2)], []).unwrap()
}

fn weyl(n: usize) -> impl Strategy<Value = WeylElement> {
    prop::collection::vec((0..n, prop::bool::ANY, small_rat()), 1..4).prop_map(move |parts| {
        parts.into_iter().fold(WeylElement::one(n), |acc, (i, is_x, c)| {
            let g = if is_x { WeylElement::x(n, i) } else { WeylElement::d(n, i) };
            let term = &g.scale(&RatFunc::constant(c)) + &WeylElement::one(n);
            &acc * &term
        })
    })
}

/// A coordinate change `c₁t + c₂t² + …` with `c₁ ≠ 0`.
fn change(order: usize) -> impl Strategy<Value = CoordinateChange> {
    (nonzero_rat(), prop::collection::vec(small_rat(), 3)).prop_map(move |(c1, rest)| {
        let mut c = vec![Rat::zero(), c1];
        c.extend(rest);
        CoordinateChange::new(Series::new(c, order).unwrap()).unwrap()
    })
}

fn based_series(order: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec(small_rat(), 1..4).prop_map(move |c| {
        let mut all = vec![Rat::zero()];
        all.extend(c);
        Series::new(all, order).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, .. ProptestConfig::default() })]

    #[test]
    fn bracket_is_antisymmetric_and_jacobi(f in poly(), g in poly(), h in poly()) {
        let ps = structure();
        let (f, g, h) = (RatFunc::from_poly(f), RatFunc::from_poly(g), RatFunc::from_poly(h));
        let fg = ps.bracket(&f, &g).unwrap();
        prop_assert!((&fg + &ps.bracket(&g, &f).unwrap()).is_zero());
        let jacobi = &(&ps.bracket(&f, &ps.bracket(&g, &h).unwrap()).unwrap()
            + &ps.bracket(&g, &ps.bracket(&h, &f).unwrap()).unwrap())
            + &ps.bracket(&h, &fg).unwrap();
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn bracket_is_a_derivation(f in poly(), g in poly(), h in poly()) {
        let ps = structure();
        let (f, g, h) = (RatFunc::from_poly(f), RatFunc::from_poly(g), RatFunc::from_poly(h));
        let lhs = ps.bracket(&f, &(&g * &h)).unwrap();
        let rhs = &(&ps.bracket(&f, &g).unwrap() * &h) + &(&g * &ps.bracket(&f, &h).unwrap());
        prop_assert!((&lhs - &rhs).is_zero());
    }

    #[test]
    fn ratfunc_normal_form(f in poly(), g in poly().prop_filter("nonzero", |p| !p.is_zero())) {
        let f = RatFunc::from_poly(f);
        let g = RatFunc::from_poly(g);
        let q = &(&f * &g) / &g;
        prop_assert_eq!(&q, &f);
        // Canonical form makes structural equality agree with cross-multiplication.
        let a = &(&f / &g) + &RatFunc::one();
        let b = &(&f + &g) / &g;
        prop_assert_eq!(&a, &b);
        prop_assert!(a.equals(&b));
    }

    #[test]
    fn weyl_product_is_associative(a in weyl(2), b in weyl(2), c in weyl(2)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn series_composition_is_associative(a in based_series(10), b in based_series(10), c in based_series(10)) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert!(left.agrees_with(&right));
    }

    #[test]
    fn reversion_inverts(s in change(10)) {
        let r = s.inverse().unwrap();
        prop_assert!(s.series().compose(r.series()).unwrap().agrees_with(&Series::identity(10)));
        prop_assert!(r.series().compose(s.series()).unwrap().agrees_with(&Series::identity(10)));
    }

    #[test]
    fn schwarzian_cocycle(s in change(12), r in change(12)) {
        let lhs = schwarzian(&s.after(&r).unwrap()).unwrap();
        let rp = r.series().derivative();
        let rhs = &(&schwarzian(&s).unwrap().compose(r.series()).unwrap() * &(&rp * &rp)) + &schwarzian(&r).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn splitting_type_matches_section_counts(m in 2usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let coeffs = (1..m).map(|_| Rat::from_integer(rng.gen_range(-1i64..=1).into())).collect();
        let data = TransitionData::new(m, coeffs).unwrap();
        let st = splitting_type(&data);
        prop_assert!(2 * st.k >= m);
        for r in -1..=(m as i64 + 1) {
            prop_assert_eq!(st.hom_dimension(r), hom_dimension_oracle(r, &data));
        }
    }

    #[test]
    fn admissible_states_satisfy_constraints(n in 4usize..=7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = random_admissible_state(n, &mut rng).unwrap();
        prop_assert!(moment_constraints(&st.y, &st.p).iter().all(Zero::is_zero));
        prop_assert!(st.p.iter().all(|p| !p.is_zero()));
    }

    #[test]
    fn scaling_does_not_change_commutativity(scale in nonzero_rat(), a in small_rat(), b in small_rat()) {
        prop_assume!(a != b && !a.is_zero() && !b.is_zero());
        let pts = [Rat::zero(), a, b];
        let plain = commutativity_check(&gaudin_operators(&[2, 2, 2], &pts).unwrap()).unwrap();
        let scaled_family = gaudin_operators_scaled(&[2, 2, 2], &pts, &scale).unwrap();
        let scaled = commutativity_check(&scaled_family).unwrap();
        prop_assert!(plain.all_zero && scaled.all_zero);
        let ratio = &scaled_family.operators[0] - &gaudin_operators(&[2, 2, 2], &pts).unwrap().operators[0].scale(&scale);
        prop_assert!(ratio.is_zero());
    }

    #[test]
    fn wp_is_even_and_periodic(x in 0.05f64..0.95, y in 0.05f64..0.95, k in 0usize..3) {
        let tau = [Complex64::new(0.0, 1.0), Complex64::new(0.5, 1.0), Complex64::new(0.0, 2.0)][k];
        let torus = Torus::new(tau).unwrap();
        let z = Complex64::new(x, 0.0) + tau * y;
        let w = wp(z, &torus, DEFAULT_TOL).unwrap();
        let scale = 1.0 + w.norm();
        prop_assert!((wp(-z, &torus, DEFAULT_TOL).unwrap() - w).norm() < 1e-10 * scale);
        prop_assert!((wp(z + 1.0, &torus, DEFAULT_TOL).unwrap() - w).norm() < 1e-10 * scale);
        prop_assert!((wp(z + tau, &torus, DEFAULT_TOL).unwrap() - w).norm() < 1e-10 * scale);
        let th = theta(z, &torus, DEFAULT_TOL);
        prop_assert!((theta(-z, &torus, DEFAULT_TOL) + th).norm() < 1e-12 * (1.0 + th.norm()));
    }

    #[test]
    fn riemann_hurwitz_matches_closed_form(n in 1i64..=8, g in 2i64..=6) {
        prop_assert_eq!(riemann_hurwitz_genus(n, g, 2 * n * (g - 1)).unwrap(), n * n * (g - 1) + 1);
    }

    #[test]
    fn degree_sums_are_dimensions(n in 1u32..=12) {
        for fam in Family::ALL {
            let d = group_data(fam, n).unwrap();
            prop_assert_eq!(degree_sum(&d.degrees), d.dim_g);
        }
    }

    #[test]
    fn charpoly_kills_matrix(entries in prop::collection::vec(small_rat(), 9)) {
        let m = QMatrix::from_fn(3, 3, |i, j| entries[3 * i + j].clone());
        let cp = m.charpoly();
        let mut acc = QMatrix::zeros(3, 3);
        for c in cp.coeffs().iter().rev() {
            acc = &(&acc * &m) + &QMatrix::identity(3).scale(c);
        }
        prop_assert!(acc.is_zero());
    }
}

#[test]
fn derivative_and_coordinate_commute() {
    for n in 1..=3 {
        for i in 0..n {
            let c = WeylElement::d(n, i).commutator(&WeylElement::x(n, i));
            assert_eq!(c, WeylElement::one(n));
            for j in 0..n {
                if i != j {
                    assert!(WeylElement::d(n, i).commutator(&WeylElement::x(n, j)).is_zero());
                }
            }
        }
    }
}
