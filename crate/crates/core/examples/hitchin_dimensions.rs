//! Chevalley degrees, `dim Bun_G` and the dimension of the Hitchin base.

use hitchinlab::liedata::{bun_dim, degree_sum, group_data, Family};
use hitchinlab::spectral::hitchin_base_dim;

fn main() -> hitchinlab::Result<()> {
    println!("{:<6} {:<16} {:>6} {:>6} {:>6} {:>6}", "group", "degrees", "dim G", "g", "Bun", "base");
    for fam in [Family::GL, Family::SL] {
        for n in 2..=5 {
            let d = group_data(fam, n)?;
            assert_eq!(degree_sum(&d.degrees), d.dim_g);
            for g in 2..=3 {
                let bun = bun_dim(d.dim_g, d.dim_z, g)?;
                let base = hitchin_base_dim(&d.degrees, g)?;
                println!(
                    "{:<6} {:<16} {:>6} {:>6} {:>6} {:>6}",
                    format!("{fam}{n}"),
                    format!("{:?}", d.degrees),
                    d.dim_g,
                    g,
                    bun,
                    base
                );
            }
        }
    }
    Ok(())
}
