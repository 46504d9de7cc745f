//! The Garnier hamiltonians Poisson-commute, and their weighted sums vanish
//! on the constraint locus.

use hitchinlab::exactalg::rat;
use hitchinlab::garnier::{check_involution, garnier_hamiltonian, sum_identities_check, GarnierData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() -> hitchinlab::Result<()> {
    let data = GarnierData::untwisted(vec![rat(0), rat(1), rat(3), rat(6)])?;
    println!("G_1 = {}", garnier_hamiltonian(&data, 0));

    for n in 4..=6 {
        let start = Instant::now();
        let data = GarnierData::untwisted(GarnierData::default_points(n))?;
        let r = check_involution(&data)?;
        println!("N = {n}: {} brackets, all zero: {} ({:.2?})", r.pairs.len(), r.all_zero, start.elapsed());
    }
    let data = GarnierData::symbolic(GarnierData::default_points(4))?;
    println!("N = 4 with symbolic twists: all zero: {}", check_involution(&data)?.all_zero);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 4..=6 {
        let data = GarnierData::untwisted(GarnierData::default_points(n))?;
        let r = sum_identities_check(&data, 5, &mut rng)?;
        println!("N = {n}: sums reduce to zero mod constraints: {:?}", r.reductions);
    }
    Ok(())
}
