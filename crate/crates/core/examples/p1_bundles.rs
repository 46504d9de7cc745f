//! Splitting types of rank-2 bundles on the projective line, checked against
//! a brute-force count of global sections.

use hitchinlab::bundles_p1::{
    hankel_determinant, splitting_type, splitting_type_from_oracle, TransitionData,
};
use hitchinlab::exactalg::{format_rat, parse_rat};

fn main() -> hitchinlab::Result<()> {
    let cases: &[(usize, &str)] = &[
        (2, "0"),
        (2, "1"),
        (4, "0,0,0"),
        (4, "0,1,0"),
        (4, "1,0,0"),
        (5, "0,0,1,0"),
        (6, "1,-1,2,0,1/3"),
    ];
    println!("{:>3}  {:<20} {:<10} {:<10} hankel", "m", "a_1..a_{m-1}", "fast", "oracle");
    for &(m, coeffs) in cases {
        let a = coeffs.split(',').map(parse_rat).collect::<hitchinlab::Result<Vec<_>>>()?;
        let data = TransitionData::new(m, a)?;
        let fast = splitting_type(&data);
        let slow = splitting_type_from_oracle(&data);
        assert_eq!(fast, slow);
        let hankel = if m % 2 == 0 {
            format_rat(&hankel_determinant(data.coeffs())?)
        } else {
            "-".into()
        };
        println!("{m:>3}  {coeffs:<20} {:<10} {:<10} {hankel}", fast.to_string(), slow.to_string());
    }
    Ok(())
}
