//! Integrates a Garnier flow with a nonzero twist and watches every
//! hamiltonian and the spectral data stay put. Step halving shows the
//! second-order convergence of the midpoint rule.

use hitchinlab::exactalg::{rat, ratio};
use hitchinlab::garnier::{admissible_momenta, hamilton_flow, FlowOptions, GarnierData, PhaseState};
use hitchinlab::spectral::isospectrality_check;

fn main() -> hitchinlab::Result<()> {
    let t = vec![rat(0), rat(1), rat(3), rat(6)];
    let y = vec![rat(-2), rat(1), ratio(-8, 3), rat(-1)];
    let p = admissible_momenta(&y, &[ratio(-2, 5)])?;
    let state = PhaseState::new(y, p)?.to_f64();

    for (label, lambda) in [("untwisted", [0, 0, 0, 0]), ("twisted", [1, 0, 0, 0])] {
        let data = GarnierData::twisted(t.clone(), lambda.iter().map(|&l| ratio(l, 10)).collect())?;
        println!("{label}:");
        let mut previous: Option<f64> = None;
        for step in [4e-3, 2e-3, 1e-3] {
            let traj = hamilton_flow(&data, 4, &state, 1.0, step, &FlowOptions::default())?;
            let report = traj.report();
            let worst = report.max_drift.iter().copied().fold(0.0, f64::max);
            let iso = isospectrality_check(&data, &traj)?;
            let ratio = previous.map(|p| format!("{:.2}", p / worst)).unwrap_or_default();
            println!(
                "  step {step:.0e}: max drift {worst:.3e}  spectral drift {:.3e}  halving ratio {ratio}",
                iso.max_drift
            );
            previous = Some(worst);
        }
    }
    Ok(())
}
