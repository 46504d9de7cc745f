//! Spectral curves `y² = a(z) b(z)` of Garnier Higgs fields and the genus
//! count `N − 3`.

use hitchinlab::exactalg::format_rat;
use hitchinlab::garnier::{random_admissible_state, GarnierData};
use hitchinlab::spectral::{riemann_hurwitz_genus, spectral_curve};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hitchinlab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 4..=8 {
        let data = GarnierData::untwisted(GarnierData::default_points(n))?;
        let state = random_admissible_state(n, &mut rng)?;
        let curve = spectral_curve(&data, &state)?;
        let a: Vec<String> = curve.a.coeffs().iter().map(format_rat).collect();
        println!(
            "N = {n}: deg a = {:?}, deg b = {:?}, genus = {:?}, a = [{}]",
            curve.a.degree(),
            curve.b.degree(),
            curve.genus,
            a.join(", ")
        );
    }
    println!();
    for g in 2..=4 {
        let row: Vec<String> = (1..=6)
            .map(|n| riemann_hurwitz_genus(n, g, 2 * n * (g - 1)).map(|x| x.to_string()))
            .collect::<hitchinlab::Result<_>>()?;
        println!("g = {g}: spectral genus for n = 1..6: {}", row.join(" "));
    }
    Ok(())
}
