//! Elliptic Calogero-Moser particles: theta/Weierstrass identities, the Lax
//! matrix, and conservation of the hamiltonians along the `H₂` flow.

use hitchinlab::elliptic_cm::{
    cm_flow, cm_hamiltonians, theta_wp_identity_error, weierstrass_invariants, CMState, CmFlowOptions, DEFAULT_TOL,
    FitOptions, Torus,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hitchinlab::Result<()> {
    let torus = Torus::new(Complex64::new(0.0, 1.0))?;
    let (g2, g3) = weierstrass_invariants(&torus, DEFAULT_TOL)?;
    println!("tau = i: g2 = {:.12}, g3 = {:.3e}", g2.re, g3.norm());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    println!("theta/wp identity error: {:.2e}", theta_wp_identity_error(&torus, 100, &mut rng)?);

    // With imaginary coupling the potential −c²℘ repels on the real line.
    let mut state = CMState::real(&[0.05, 0.36, 0.71], &[0.12, -0.05, 0.09], 0.0)?;
    state.c = Complex64::new(0.0, 0.2);
    let h = cm_hamiltonians(&state, &torus, 3, &FitOptions::default())?;
    for (k, hk) in h.iter().enumerate() {
        println!("H{} = {:.10}", k + 1, hk.re);
    }
    let opts = CmFlowOptions { stride: 10, ..Default::default() };
    let mut previous: Option<Vec<f64>> = None;
    for step in [2e-3, 1e-3] {
        let traj = cm_flow(&state, &torus, 1.0, step, &opts)?;
        let drift = traj.report().drift;
        print!("step {step:.0e}: drift H2 {:.3e}, H3 {:.3e}", drift[1], drift[2]);
        if let Some(p) = &previous {
            print!("  (halving ratios {:.2}, {:.2})", p[1] / drift[1], p[2] / drift[2]);
        }
        println!();
        let last = traj.states.last().expect("non-empty trajectory");
        println!("  final positions: {:?}", last.q.iter().map(|q| format!("{:.6}", q.re)).collect::<Vec<_>>());
        previous = Some(drift);
    }
    Ok(())
}
