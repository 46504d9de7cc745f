//! Hill operators `∂² + u` under changes of coordinate, and the Schwarzian.

use hitchinlab::exactalg::{rat, ratio, Series};
use hitchinlab::opers::{
    mobius_series, schwarzian, solve_hill, transform_hill, transport_residual, wronskian, CoordinateChange,
    HillOperator,
};

fn main() -> hitchinlab::Result<()> {
    let s = CoordinateChange::new(Series::from_ints(&[0, 1, 1], 12)?)?;
    println!("D(t + t²) = {}", schwarzian(&s)?);

    let m = CoordinateChange::new(mobius_series(&rat(2), &rat(3), &ratio(1, 2), &rat(5), 16)?)?;
    println!("D of a Möbius map vanishes: {}", schwarzian(&m)?.is_zero());

    let u = HillOperator::new(Series::from_ints(&[1, -2, 0, 3], 10)?);
    let s = CoordinateChange::new(Series::from_ints(&[0, 2, 1, -1], 10)?)?;
    let ut = transform_hill(&u, &s)?;
    println!("u = {}", u.u);
    println!("transformed u = {}", ut.u);
    let residual = transport_residual(&u, &s, &ut)?;
    println!("solutions are transported: {}", residual.iter().all(Series::is_zero));

    let (a, b) = solve_hill(&u);
    println!("Wronskian of the basic solutions = {}", wronskian(&a, &b));
    Ok(())
}
