//! Classification data of irreducible bounded symmetric domains.
//!
//! Each family is reduced to its rank `r`, characteristic multiplicities
//! `(a, b)`, complex dimension `d`, genus-like parameter `rho` and the
//! real dimension `n = 1 + a(r-1) + b` of the Shilov boundary fibre used to
//! normalise Dixmier traces. The Peirce 1-space data attached to a point of
//! the minimal boundary orbit feeds into the trace constant.

use crate::error::{Error, Result};
use crate::rat;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum DomainFamily {
    /// `r x s` complex matrices, `r <= s`.
    TypeI { r: u32, s: u32 },
    /// Skew-symmetric matrices of size `2r + eps`.
    TypeII { r: u32, eps: u32 },
    /// Symmetric `r x r` matrices.
    TypeIII { r: u32 },
    /// Lie ball in `C^d`.
    TypeIV { d: u32 },
    TypeV,
    TypeVI,
    /// Unit ball in `C^d`.
    Ball { d: u32 },
}

impl fmt::Display for DomainFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DomainFamily::TypeI { r, s } => write!(f, "I({r},{s})"),
            DomainFamily::TypeII { r, eps } => write!(f, "II({r},{eps})"),
            DomainFamily::TypeIII { r } => write!(f, "III({r})"),
            DomainFamily::TypeIV { d } => write!(f, "IV({d})"),
            DomainFamily::TypeV => write!(f, "V"),
            DomainFamily::TypeVI => write!(f, "VI"),
            DomainFamily::Ball { d } => write!(f, "Ball({d})"),
        }
    }
}

impl std::str::FromStr for DomainFamily {
    type Err = Error;

    /// Parses `ball:d`, `I:r:s`, `II:r:eps`, `III:r`, `IV:d`, `V`, `VI`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let bad = || Error::InvalidParameters(format!("cannot parse domain '{s}'"));
        let num = |i: usize| -> Result<u32> {
            parts.get(i).ok_or_else(bad)?.parse::<u32>().map_err(|_| bad())
        };
        let fam = match parts[0].to_ascii_uppercase().as_str() {
            "BALL" if parts.len() == 2 => DomainFamily::Ball { d: num(1)? },
            "I" if parts.len() == 3 => DomainFamily::TypeI { r: num(1)?, s: num(2)? },
            "II" if parts.len() == 3 => DomainFamily::TypeII { r: num(1)?, eps: num(2)? },
            "III" if parts.len() == 2 => DomainFamily::TypeIII { r: num(1)? },
            "IV" if parts.len() == 2 => DomainFamily::TypeIV { d: num(1)? },
            "V" if parts.len() == 1 => DomainFamily::TypeV,
            "VI" if parts.len() == 1 => DomainFamily::TypeVI,
            _ => return Err(bad()),
        };
        descriptor_for(fam)?;
        Ok(fam)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainDescriptor {
    pub family: DomainFamily,
    pub r: u32,
    pub a: u32,
    pub b: u32,
    pub d: u32,
    pub rho: BigRational,
    pub n: u32,
}

impl DomainDescriptor {
    /// `a / 2` as an exact rational.
    pub fn half_a(&self) -> BigRational {
        rat(self.a as i64, 2)
    }

    /// Tube type domains have `b = 0`.
    pub fn is_tube(&self) -> bool {
        self.b == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family.to_string(),
            "r": self.r,
            "a": self.a,
            "b": self.b,
            "d": self.d,
            "rho": self.rho.to_string(),
            "n": self.n,
        })
    }
}

/// Invariants of a family. Rejects parameter ranges outside the classification
/// (for instance `TypeIV { d: 4 }`, which is reducible).
pub fn descriptor_for(family: DomainFamily) -> Result<DomainDescriptor> {
    let bad = |msg: &str| Err(Error::InvalidParameters(format!("{family}: {msg}")));
    let (r, a, b) = match family {
        DomainFamily::TypeI { r, s } => {
            if r == 0 || r > s {
                return bad("need 1 <= r <= s");
            }
            (r, 2, s - r)
        }
        DomainFamily::TypeII { r, eps } => {
            if r < 2 || eps > 1 {
                return bad("need r >= 2 and eps in {0, 1}");
            }
            (r, 4, 2 * eps)
        }
        DomainFamily::TypeIII { r } => {
            if r < 2 {
                return bad("need r >= 2");
            }
            (r, 1, 0)
        }
        DomainFamily::TypeIV { d } => {
            if d < 3 || d == 4 {
                return bad("need d >= 3 and d != 4");
            }
            (2, d - 2, 0)
        }
        DomainFamily::TypeV => (2, 6, 4),
        DomainFamily::TypeVI => (3, 8, 0),
        DomainFamily::Ball { d } => {
            if d == 0 {
                return bad("need d >= 1");
            }
            (1, 2, d - 1)
        }
    };
    let rho = rat(1, 1) + rat(a as i64 * (r as i64 - 1), 2) + rat(b as i64, 1);
    let d_exact = &rho * rat(r as i64, 1);
    if !d_exact.is_integer() {
        return Err(Error::Consistency(format!("{family}: non-integral dimension {d_exact}")));
    }
    let d = d_exact.to_integer().to_u32().expect("dimension fits u32");
    let expected_d = match family {
        DomainFamily::TypeI { r, s } => r * s,
        DomainFamily::TypeII { r, eps } => r * (2 * r - 1 + 2 * eps),
        DomainFamily::TypeIII { r } => r * (r + 1) / 2,
        DomainFamily::TypeIV { d } => d,
        DomainFamily::TypeV => 16,
        DomainFamily::TypeVI => 27,
        DomainFamily::Ball { d } => d,
    };
    if d != expected_d {
        return Err(Error::Consistency(format!("{family}: d = {d} but expected {expected_d}")));
    }
    let n = 1 + a * (r - 1) + b;
    Ok(DomainDescriptor { family, r, a, b, d, rho, n })
}

/// Data of the Peirce 1-space `V` of a minimal tripotent.
///
/// `p_v` is `None` when `V` is reducible (type I with `r >= 2`); then
/// `factors` records the two ball factors `C^{n1} + C^{n2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Peirce1Data {
    pub r_v: u32,
    pub p_v: Option<u32>,
    pub d_v: u32,
    pub a_v: u32,
    pub reducible: bool,
    pub factors: Option<(u32, u32)>,
}

pub fn peirce1_data(desc: &DomainDescriptor) -> Result<Peirce1Data> {
    let irred = |r_v, p_v, d_v, a_v| Peirce1Data {
        r_v,
        p_v: Some(p_v),
        d_v,
        a_v,
        reducible: false,
        factors: None,
    };
    let ball = |dim: u32| {
        if dim == 0 {
            irred(0, 1, 0, 2)
        } else {
            irred(1, dim + 1, dim, 2)
        }
    };
    let data = match desc.family {
        DomainFamily::Ball { d } => ball(d - 1),
        DomainFamily::TypeI { r: 1, s } => ball(s - 1),
        DomainFamily::TypeI { r, s } => Peirce1Data {
            r_v: 2,
            p_v: None,
            d_v: (r - 1) + (s - 1),
            a_v: 2,
            reducible: true,
            factors: Some((r - 1, s - 1)),
        },
        DomainFamily::TypeII { r, eps } => irred(2, 2 * r + eps, 4 * (r - 1) + 2 * eps, 2),
        DomainFamily::TypeIII { r } => ball(r - 1),
        DomainFamily::TypeIV { d: 3 } => ball(1),
        DomainFamily::TypeIV { d } => irred(2, d - 2, d - 2, d - 4),
        DomainFamily::TypeV => irred(2, 8, 10, 4),
        DomainFamily::TypeVI => irred(2, 12, 16, 6),
    };
    // dim V = d - 1 - dim Z0, with Z0 of rank r-1 and the same multiplicities
    let (r, a, b) = (desc.r as i64, desc.a as i64, desc.b as i64);
    let z0 = rat((r - 1) * (2 + a * (r - 2) + 2 * b), 2);
    if rat(desc.d as i64 - 1, 1) - z0 != rat(data.d_v as i64, 1) {
        return Err(Error::Consistency(format!("{}: Peirce 1-space dimension", desc.family)));
    }
    Ok(data)
}

/// Representative instances of every family with small parameters.
pub fn standard_instances() -> Vec<DomainFamily> {
    use DomainFamily::*;
    vec![
        Ball { d: 1 },
        Ball { d: 2 },
        Ball { d: 3 },
        Ball { d: 4 },
        TypeI { r: 1, s: 3 },
        TypeI { r: 2, s: 2 },
        TypeI { r: 2, s: 3 },
        TypeI { r: 2, s: 4 },
        TypeI { r: 3, s: 3 },
        TypeI { r: 3, s: 4 },
        TypeII { r: 2, eps: 0 },
        TypeII { r: 2, eps: 1 },
        TypeII { r: 3, eps: 0 },
        TypeII { r: 3, eps: 1 },
        TypeIII { r: 2 },
        TypeIII { r: 3 },
        TypeIV { d: 3 },
        TypeIV { d: 5 },
        TypeIV { d: 6 },
        TypeIV { d: 7 },
        TypeV,
        TypeVI,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desc(f: DomainFamily) -> DomainDescriptor {
        descriptor_for(f).unwrap()
    }

    #[test]
    fn type_i_2_3() {
        let d = desc(DomainFamily::TypeI { r: 2, s: 3 });
        assert_eq!((d.r, d.a, d.b, d.d, d.n), (2, 2, 1, 6, 4));
        assert_eq!(d.rho, rat(3, 1));
    }

    #[test]
    fn type_v_invariants_and_peirce() {
        let d = desc(DomainFamily::TypeV);
        assert_eq!((d.r, d.a, d.b, d.d, d.n), (2, 6, 4, 16, 11));
        let v = peirce1_data(&d).unwrap();
        assert_eq!((v.r_v, v.p_v, v.a_v), (2, Some(8), 4));
        // V is the space of 5x5 skew matrices
        assert_eq!(v.d_v, 10);
    }

    #[test]
    fn ball_and_type_iv() {
        let d = desc(DomainFamily::Ball { d: 4 });
        assert_eq!((d.r, d.a, d.b, d.n), (1, 2, 3, 4));
        assert_eq!(d.rho, rat(4, 1));
        assert!(matches!(
            descriptor_for(DomainFamily::TypeIV { d: 4 }),
            Err(Error::InvalidParameters(_))
        ));
        let iv = desc(DomainFamily::TypeIV { d: 7 });
        assert_eq!((iv.r, iv.a, iv.b, iv.d, iv.n), (2, 5, 0, 7, 6));
    }

    #[test]
    fn reducible_peirce_space() {
        let v = peirce1_data(&desc(DomainFamily::TypeI { r: 2, s: 3 })).unwrap();
        assert!(v.reducible);
        assert_eq!(v.factors, Some((1, 2)));
        assert_eq!(v.p_v, None);
    }

    #[test]
    fn invalid_ranges() {
        for f in [
            DomainFamily::TypeI { r: 3, s: 2 },
            DomainFamily::TypeI { r: 0, s: 2 },
            DomainFamily::TypeII { r: 1, eps: 0 },
            DomainFamily::TypeII { r: 2, eps: 2 },
            DomainFamily::TypeIII { r: 1 },
            DomainFamily::Ball { d: 0 },
        ] {
            assert!(descriptor_for(f).is_err(), "{f}");
        }
    }

    #[test]
    fn all_standard_instances_consistent() {
        for f in standard_instances() {
            let d = desc(f);
            assert_eq!(rat(d.d as i64, 1), &d.rho * rat(d.r as i64, 1));
            assert_eq!(d.n, 1 + d.a * (d.r - 1) + d.b);
            peirce1_data(&d).unwrap();
        }
    }

    #[test]
    fn parse_domain_strings() {
        assert_eq!("I:2:3".parse::<DomainFamily>().unwrap(), DomainFamily::TypeI { r: 2, s: 3 });
        assert_eq!("ball:2".parse::<DomainFamily>().unwrap(), DomainFamily::Ball { d: 2 });
        assert_eq!("VI".parse::<DomainFamily>().unwrap(), DomainFamily::TypeVI);
        assert!("IV:4".parse::<DomainFamily>().is_err());
        assert!("VII".parse::<DomainFamily>().is_err());
    }
}
