//! JSON encoding of `QRat`: numerator and denominator as lists of
//! `["num/den", "coefficient"]` pairs keyed by the rational exponent of `q`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::qrat::QRat;
use super::ScalarError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QRatJson {
    pub num: Vec<(String, String)>,
    pub den: Vec<(String, String)>,
}

/// `"n/d"` with `d >= 1`.
pub fn rational_string(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"n/d"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational64, ScalarError> {
    let bad = || ScalarError::Parse(format!("bad rational '{}'", s));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(n, d))
        }
        None => Ok(Rational64::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl From<&QRat> for QRatJson {
    fn from(x: &QRat) -> Self {
        let (n, d) = x.exponent_lists();
        let enc = |v: Vec<(Rational64, BigInt)>| {
            v.into_iter().map(|(e, c)| (rational_string(e), c.to_string())).collect()
        };
        QRatJson { num: enc(n), den: enc(d) }
    }
}

impl TryFrom<&QRatJson> for QRat {
    type Error = ScalarError;
    fn try_from(j: &QRatJson) -> Result<Self, ScalarError> {
        let dec = |v: &[(String, String)]| -> Result<Vec<(Rational64, BigInt)>, ScalarError> {
            v.iter()
                .map(|(e, c)| {
                    let c = BigInt::from_str(c).map_err(|_| ScalarError::Parse(format!("bad integer '{}'", c)))?;
                    Ok((parse_rational(e)?, c))
                })
                .collect()
        };
        QRat::from_exponent_lists(&dec(&j.num)?, &dec(&j.den)?)
    }
}

impl Serialize for QRat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QRatJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for QRat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = QRatJson::deserialize(d)?;
        QRat::try_from(&j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let x = (&QRat::qint(3) + &QRat::q_pow(Rational64::new(-1, 2))) / &QRat::qint(2);
        let s = serde_json::to_string(&x).unwrap();
        let y: QRat = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert!(s.contains("/2\""), "{}", s);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), Rational64::from_integer(3));
        assert_eq!(parse_rational("-2/4").unwrap(), Rational64::new(-1, 2));
        assert!(parse_rational("1/0").is_err());
    }
}
