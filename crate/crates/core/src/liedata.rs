//! Chevalley degrees and dimension counts for `GL_n`, `SL_n` and `PGL_n`.

use crate::error::{invalid, Result};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    GL,
    SL,
    PGL,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::GL, Family::SL, Family::PGL];
}

impl FromStr for Family {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GL" => Ok(Family::GL),
            "SL" => Ok(Family::SL),
            "PGL" => Ok(Family::PGL),
            other => Err(crate::Error::Unsupported(format!("group family {other}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::GL => "GL",
            Family::SL => "SL",
            Family::PGL => "PGL",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupData {
    pub family: Family,
    pub n: u32,
    pub degrees: Vec<u32>,
    pub dim_g: i64,
    pub dim_z: i64,
}

/// `GL_n`: `1, …, n`; `SL_n` and `PGL_n`: `2, …, n`.
pub fn degrees(family: Family, n: u32) -> Result<Vec<u32>> {
    if n < 1 {
        return Err(invalid("rank parameter n must be at least 1"));
    }
    Ok(match family {
        Family::GL => (1..=n).collect(),
        Family::SL | Family::PGL => (2..=n).collect(),
    })
}

pub fn dim_g(family: Family, n: u32) -> i64 {
    let n = n as i64;
    match family {
        Family::GL => n * n,
        Family::SL | Family::PGL => n * n - 1,
    }
}

/// Dimension of the centre: one for `GL_n`, finite otherwise.
pub fn dim_z(family: Family) -> i64 {
    match family {
        Family::GL => 1,
        Family::SL | Family::PGL => 0,
    }
}

pub fn group_data(family: Family, n: u32) -> Result<GroupData> {
    Ok(GroupData {
        family,
        n,
        degrees: degrees(family, n)?,
        dim_g: dim_g(family, n),
        dim_z: dim_z(family),
    })
}

/// `(g − 1) dim G + dim Z(G)`, the dimension of the stable locus of `Bun_G`.
pub fn bun_dim(dim_g: i64, dim_z: i64, g: i64) -> Result<i64> {
    if g < 2 {
        return Err(invalid(format!("genus must be at least 2, got {g}")));
    }
    Ok((g - 1) * dim_g + dim_z)
}

/// `Σ (2d_i − 1)`.
pub fn degree_sum(degrees: &[u32]) -> i64 {
    degrees.iter().map(|&d| 2 * d as i64 - 1).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::hitchin_base_dim;

    #[test]
    fn tables() {
        assert_eq!(degrees(Family::GL, 3).unwrap(), vec![1, 2, 3]);
        assert_eq!(degrees(Family::SL, 2).unwrap(), vec![2]);
        assert!(degrees(Family::SL, 1).unwrap().is_empty());
        assert!(degrees(Family::GL, 0).is_err());
        assert!("E8".parse::<Family>().is_err());
        assert_eq!("pgl".parse::<Family>().unwrap(), Family::PGL);
    }

    #[test]
    fn bundle_dimensions() {
        for n in 1..=5u32 {
            for g in 2..=4i64 {
                let n64 = n as i64;
                assert_eq!(bun_dim(dim_g(Family::GL, n), 1, g).unwrap(), (g - 1) * n64 * n64 + 1);
            }
        }
        assert_eq!(bun_dim(dim_g(Family::SL, 2), 0, 2).unwrap(), 3);
        assert_eq!(bun_dim(0, 5, 3).unwrap(), 5);
        assert!(bun_dim(3, 0, 1).is_err());
    }

    #[test]
    fn degree_sums_and_base_dimension() {
        for n in 1..=8u32 {
            for fam in Family::ALL {
                let d = group_data(fam, n).unwrap();
                assert_eq!(degree_sum(&d.degrees), d.dim_g);
                if d.degrees.is_empty() {
                    continue;
                }
                for g in 2..=4i64 {
                    let base = hitchin_base_dim(&d.degrees, g).unwrap();
                    assert_eq!(base, bun_dim(d.dim_g, d.dim_z, g).unwrap());
                }
            }
        }
    }
}
