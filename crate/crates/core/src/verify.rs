//! Aggregated invariant suites, one per module, used by `verify-all`.

use crate::bundles_p1::{hankel_determinant, splitting_type, splitting_type_from_oracle, TransitionData};
use crate::elliptic_cm::{cm_flow, cm_verify, default_tori, CMState, CmFlowOptions, Torus};
use crate::error::Result;
use crate::exactalg::{rat, ratio, Monomial, Poly, PoissonStructure, Rat, RatFunc, Series, Var, WeylElement};
use crate::garnier::{
    admissible_momenta, check_involution, hamilton_flow, random_admissible_state, sum_identities_check,
    FlowOptions, GarnierData, PhaseState,
};
use crate::gaudin::{commutativity_check, gaudin_operators, perturbed_family, weyl_commutativity_check};
use crate::liedata::{bun_dim, degree_sum, group_data, Family};
use crate::opers::{mobius_series, schwarzian, solve_hill, transform_hill, wronskian, CoordinateChange, HillOperator};
use crate::spectral::{hitchin_base_dim, isospectrality_check, riemann_hurwitz_genus, spectral_curve};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub pass: bool,
    pub details: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub quick: bool,
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
    pub pass: bool,
}

type Suite = fn(bool, u64) -> Result<(bool, Value)>;

const SUITES: [(&str, Suite); 10] = [
    ("exactalg", exactalg_suite),
    ("bundles_p1", bundles_suite),
    ("garnier_involution", involution_suite),
    ("garnier_sums", sums_suite),
    ("garnier_flow", garnier_flow_suite),
    ("spectral", spectral_suite),
    ("elliptic_cm", cm_suite),
    ("gaudin", gaudin_suite),
    ("opers", opers_suite),
    ("liedata", liedata_suite),
];

/// Runs every suite. Suites run in parallel but the report keeps a fixed
/// order, and every suite seeds its own generator from `seed`.
pub fn verify_all(quick: bool, seed: u64) -> VerifyReport {
    let suites: Vec<SuiteResult> = SUITES
        .par_iter()
        .enumerate()
        .map(|(k, &(name, suite))| {
            let (pass, details) = match suite(quick, seed.wrapping_add(k as u64)) {
                Ok(r) => r,
                Err(e) => (false, json!({ "error": e.to_string() })),
            };
            SuiteResult { name: name.into(), pass, details }
        })
        .collect();
    let pass = suites.iter().all(|s| s.pass);
    VerifyReport { quick, seed, suites, pass }
}

/// A moderate admissible `N = 4` state whose flows stay bounded on `[0, 1]`.
pub fn moderate_garnier_state() -> PhaseState<Rat> {
    let y = vec![rat(-2), rat(1), ratio(-8, 3), rat(-1)];
    let p = admissible_momenta(&y, &[ratio(-2, 5)]).expect("distinct positions");
    PhaseState::new(y, p).expect("matching lengths")
}

/// Real positions and momenta with imaginary coupling `c = 0.2i`, for which
/// `−c²℘` is a repulsive potential on the real line.
pub fn repulsive_cm_state(n: usize) -> CMState {
    let (q, p): (&[f64], &[f64]) = match n {
        2 => (&[0.1, 0.57], &[0.13, -0.08]),
        _ => (&[0.05, 0.36, 0.71], &[0.12, -0.05, 0.09]),
    };
    let mut st = CMState::real(q, p, 0.0).expect("valid sizes");
    st.c = Complex64::new(0.0, 0.2);
    st
}

fn random_small_rat<R: Rng>(rng: &mut R) -> Rat {
    match rng.gen_range(0..4) {
        0 => Rat::zero(),
        1 => rat(rng.gen_range(-3..=3)),
        _ => ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
    }
}

fn random_poly<R: Rng>(vars: &[Var], rng: &mut R) -> Poly {
    let terms = (0..4).map(|_| {
        let m = Monomial::from_pairs(vars.iter().map(|&v| (v, rng.gen_range(0..=1u32))));
        (m, random_small_rat(rng))
    });
    Poly::from_terms(terms)
}

fn exactalg_suite(quick: bool, seed: u64) -> Result<(bool, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (y1, p1, y2, p2) = (Var::new("y1"), Var::new("p1"), Var::new("y2"), Var::new("p2"));
    let ps = PoissonStructure::new(vec![(y1, p1), (y2, p2)], [])?;
    let vars = [y1, p1, y2, p2];
    let trials = if quick { 5 } else { 20 };
    let mut jacobi = true;
    let mut antisym = true;
    for _ in 0..trials {
        let [f, g, h] = [0, 1, 2].map(|_| RatFunc::from_poly(random_poly(&vars, &mut rng)));
        let fg = ps.bracket(&f, &g)?;
        antisym &= (&fg + &ps.bracket(&g, &f)?).is_zero();
        let j = &(&ps.bracket(&f, &ps.bracket(&g, &h)?)? + &ps.bracket(&g, &ps.bracket(&h, &f)?)?)
            + &ps.bracket(&h, &fg)?;
        jacobi &= j.is_zero();
    }
    let canonical = ps.bracket(&RatFunc::var(p1), &RatFunc::var(y1))? == RatFunc::one();
    let mut weyl_assoc = true;
    for _ in 0..trials {
        let mk = |rng: &mut ChaCha8Rng| {
            let x = WeylElement::x(2, rng.gen_range(0..2));
            let d = WeylElement::d(2, rng.gen_range(0..2));
            &(&x * &d) + &WeylElement::scalar(2, RatFunc::constant(random_small_rat(rng)))
        };
        let (a, b, c) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
        weyl_assoc &= &(&a * &b) * &c == &a * &(&b * &c);
    }
    let mut series_assoc = true;
    for _ in 0..trials {
        let mut mk = |c0: bool| {
            let mut c: Vec<Rat> = (0..6).map(|_| random_small_rat(&mut rng)).collect();
            if !c0 {
                c[0] = Rat::zero();
            }
            Series::new(c, 10).expect("order 10")
        };
        let (a, b, c) = (mk(true), mk(false), mk(false));
        series_assoc &= a.compose(&b)?.compose(&c)?.agrees_with(&a.compose(&b.compose(&c)?)?);
    }
    let pass = jacobi && antisym && canonical && weyl_assoc && series_assoc;
    Ok((
        pass,
        json!({ "canonical_pair": canonical, "antisymmetry": antisym, "jacobi": jacobi,
                "weyl_associativity": weyl_assoc, "series_associativity": series_assoc, "trials": trials }),
    ))
}

fn bundles_suite(quick: bool, seed: u64) -> Result<(bool, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (max_m, samples) = if quick { (6, 20) } else { (8, 200) };
    let mut oracle_mismatch = 0usize;
    let mut hankel_mismatch = 0usize;
    let mut checked = 0usize;
    for m in 2..=max_m {
        for _ in 0..samples {
            let coeffs: Vec<Rat> = (0..m - 1).map(|_| random_small_rat(&mut rng)).collect();
            let data = TransitionData::new(m, coeffs.clone())?;
            let k = splitting_type(&data);
            if k != splitting_type_from_oracle(&data) {
                oracle_mismatch += 1;
            }
            if m % 2 == 0 {
                let balanced = k.k == m / 2;
                if balanced != !hankel_determinant(&coeffs)?.is_zero() {
                    hankel_mismatch += 1;
                }
            }
            checked += 1;
        }
    }
    Ok((
        oracle_mismatch == 0 && hankel_mismatch == 0,
        json!({ "max_m": max_m, "checked": checked, "oracle_mismatches": oracle_mismatch,
                "hankel_mismatches": hankel_mismatch }),
    ))
}

fn involution_suite(quick: bool, _seed: u64) -> Result<(bool, Value)> {
    let (plain, symbolic): (&[usize], &[usize]) = if quick { (&[4, 5], &[4]) } else { (&[4, 5, 6], &[4, 5]) };
    let mut cases = Vec::new();
    let mut pass = true;
    for &n in plain {
        let r = check_involution(&GarnierData::untwisted(GarnierData::default_points(n))?)?;
        pass &= r.all_zero;
        cases.push(json!({ "n": n, "twist": "none", "all_zero": r.all_zero, "pairs": r.pairs.len() }));
    }
    for &n in symbolic {
        let r = check_involution(&GarnierData::symbolic(GarnierData::default_points(n))?)?;
        pass &= r.all_zero;
        cases.push(json!({ "n": n, "twist": "symbolic", "all_zero": r.all_zero, "pairs": r.pairs.len() }));
    }
    Ok((pass, json!({ "cases": cases })))
}

fn sums_suite(quick: bool, seed: u64) -> Result<(bool, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_n = if quick { 5 } else { 6 };
    let mut cases = Vec::new();
    let mut pass = true;
    for n in 4..=max_n {
        let r = sum_identities_check(&GarnierData::untwisted(GarnierData::default_points(n))?, 3, &mut rng)?;
        pass &= r.passed;
        cases.push(serde_json::to_value(&r).unwrap_or(Value::Null));
    }
    Ok((pass, json!({ "cases": cases })))
}

fn garnier_flow_suite(quick: bool, _seed: u64) -> Result<(bool, Value)> {
    let data = GarnierData::untwisted(GarnierData::default_points(4))?;
    let state = moderate_garnier_state().to_f64();
    let t_end = if quick { 0.25 } else { 1.0 };
    let opts = FlowOptions::default();
    let coarse = hamilton_flow(&data, 4, &state, t_end, 1e-3, &opts)?;
    let fine = hamilton_flow(&data, 4, &state, t_end, 5e-4, &opts)?;
    let max = |v: Vec<f64>| v.into_iter().fold(0.0, f64::max);
    let drift = max(coarse.max_drift());
    let ratio = drift / max(fine.max_drift());
    let iso = isospectrality_check(&data, &coarse)?;
    let broken = hamilton_flow(&data, 4, &state, t_end, 1e-3, &FlowOptions { broken: true, ..opts })
        .map(|t| max(t.max_drift()))
        .unwrap_or(f64::INFINITY);
    let pass = drift < 1e-8 && ratio >= 3.5 && coarse.max_constraint() < 1e-8 && iso.max_drift < 1e-8 && broken > 1e-6;
    Ok((
        pass,
        json!({ "t_end": t_end, "drift": drift, "halving_ratio": ratio, "constraint": coarse.max_constraint(),
                "isospectral_drift": iso.max_drift, "broken_flow_drift": broken }),
    ))
}

fn spectral_suite(quick: bool, seed: u64) -> Result<(bool, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_n = if quick { 6 } else { 8 };
    let mut genera = Vec::new();
    let mut pass = true;
    for n in 4..=max_n {
        let data = GarnierData::untwisted(GarnierData::default_points(n))?;
        let state = random_admissible_state(n, &mut rng)?;
        let curve = spectral_curve(&data, &state)?;
        pass &= curve.genus == Some(n - 3) && curve.a.degree() == Some(n - 4);
        genera.push(json!({ "n": n, "genus": curve.genus, "deg_a": curve.a.degree() }));
    }
    let mut rh = true;
    for n in 1..=6i64 {
        for g in 2..=4i64 {
            rh &= riemann_hurwitz_genus(n, g, 2 * n * (g - 1))? == n * n * (g - 1) + 1;
        }
    }
    Ok((pass && rh, json!({ "garnier_genera": genera, "riemann_hurwitz": rh })))
}

fn cm_suite(quick: bool, seed: u64) -> Result<(bool, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = if quick { 20 } else { 100 };
    let identities = cm_verify(&default_tori(), samples, 1e-10, &mut rng)?;
    let torus = Torus::new(Complex64::new(0.0, 1.0))?;
    let t_end = if quick { 0.2 } else { 1.0 };
    let opts = CmFlowOptions { stride: 10, ..Default::default() };
    let mut flows = Vec::new();
    let mut flow_pass = true;
    for n in [2, 3] {
        let st = repulsive_cm_state(n);
        let coarse = cm_flow(&st, &torus, t_end, 1e-3, &opts)?.drift();
        let fine = cm_flow(&st, &torus, t_end, 5e-4, &opts)?.drift();
        let ratio = coarse[1] / fine[1];
        flow_pass &= coarse[1] < 1e-6 && ratio >= 3.5 && coarse.get(2).map_or(true, |&d| d < 1e-5);
        flows.push(json!({ "n": n, "drift": coarse, "halving_ratio": ratio }));
    }
    Ok((
        identities.pass && flow_pass,
        json!({ "identities": identities, "flows": flows }),
    ))
}

fn gaudin_suite(quick: bool, _seed: u64) -> Result<(bool, Value)> {
    let mut cases: Vec<(Vec<usize>, Vec<Rat>)> = vec![
        (vec![2, 2], vec![rat(0), rat(1)]),
        (vec![2, 2, 2], vec![rat(0), ratio(1, 2), rat(3)]),
        (vec![2, 2, 3], vec![rat(0), rat(1), rat(3)]),
    ];
    if !quick {
        cases.push((vec![2, 2, 2, 2], vec![rat(0), rat(1), rat(3), ratio(-5, 2)]));
    }
    let mut pass = true;
    let mut out = Vec::new();
    for (dims, pts) in &cases {
        let r = commutativity_check(&gaudin_operators(dims, pts)?)?;
        pass &= r.all_zero;
        out.push(json!({ "dims": dims, "all_zero": r.all_zero, "diagonal_sl2": r.diagonal_sl2 }));
    }
    let control = commutativity_check(&perturbed_family(&[2, 2, 3], &[rat(0), rat(1), rat(3)], 1, 2)?)?;
    pass &= !control.all_zero;
    let weyl_max = if quick { 3 } else { 4 };
    let mut weyl = Vec::new();
    for n in 2..=weyl_max {
        let ok = weyl_commutativity_check(n)?.iter().all(|e| e.zero);
        pass &= ok;
        weyl.push(json!({ "n": n, "all_zero": ok }));
    }
    Ok((
        pass,
        json!({ "matrix": out, "negative_control_detected": !control.all_zero, "weyl": weyl }),
    ))
}

fn opers_suite(quick: bool, seed: u64) -> Result<(bool, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = 16;
    let pairs = if quick { 10 } else { 50 };
    let mut mobius = true;
    for _ in 0..5 {
        let (a, b, c) = (random_small_rat(&mut rng), random_small_rat(&mut rng), random_small_rat(&mut rng));
        let d = rat(rng.gen_range(1..=4));
        if (&a * &d - &b * &c).is_zero() {
            continue;
        }
        let s = CoordinateChange::new(mobius_series(&a, &b, &c, &d, order)?)?;
        mobius &= schwarzian(&s)?.is_zero();
    }
    let random_change = |rng: &mut ChaCha8Rng| -> Result<CoordinateChange> {
        let mut c: Vec<Rat> = (0..6).map(|_| random_small_rat(rng)).collect();
        c[0] = Rat::zero();
        c[1] = ratio(rng.gen_range(1..=3), rng.gen_range(1..=2));
        CoordinateChange::new(Series::new(c, 12)?)
    };
    let mut cocycle = true;
    let mut functorial = true;
    let mut wronski = true;
    for _ in 0..pairs {
        let s = random_change(&mut rng)?;
        let r = random_change(&mut rng)?;
        // D(s∘r) = (D(s)∘r)·r'² + D(r)
        let lhs = schwarzian(&s.after(&r)?)?;
        let rp = r.series().derivative();
        let rhs = &(&schwarzian(&s)?.compose(r.series())? * &(&rp * &rp)) + &schwarzian(&r)?;
        cocycle &= lhs.agrees_with(&rhs);
        let u = HillOperator::new(Series::new((0..5).map(|_| random_small_rat(&mut rng)).collect(), 10)?);
        let two_steps = transform_hill(&transform_hill(&u, &s)?, &r)?;
        let direct = transform_hill(&u, &r.after(&s)?)?;
        functorial &= two_steps.u.agrees_with(&direct.u);
        let (p, q) = solve_hill(&u);
        wronski &= wronskian(&p, &q).agrees_with(&Series::constant(Rat::one(), 30));
    }
    Ok((
        mobius && cocycle && functorial && wronski,
        json!({ "mobius_order": order, "mobius": mobius, "pairs": pairs, "cocycle": cocycle,
                "functoriality": functorial, "wronskian": wronski }),
    ))
}

fn liedata_suite(_quick: bool, _seed: u64) -> Result<(bool, Value)> {
    let mut pass = true;
    let mut checked = 0;
    for n in 1..=8u32 {
        for fam in Family::ALL {
            let d = group_data(fam, n)?;
            pass &= degree_sum(&d.degrees) == d.dim_g;
            if d.degrees.is_empty() {
                continue;
            }
            for g in 2..=4i64 {
                pass &= hitchin_base_dim(&d.degrees, g)? == bun_dim(d.dim_g, d.dim_z, g)?;
                checked += 1;
            }
        }
    }
    Ok((pass, json!({ "checked": checked })))
}
