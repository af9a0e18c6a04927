//! Small helpers around `Ratio<i64>`: parsing and printing the `"num/den"`
//! strings used in every JSON document, plus serde adapters.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

pub fn parse_ratio(s: &str) -> Result<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: i64 = num
        .parse()
        .map_err(|_| Error::parse(format!("bad rational numerator in {s:?}")))?;
    let den: i64 = den
        .parse()
        .map_err(|_| Error::parse(format!("bad rational denominator in {s:?}")))?;
    if den == 0 {
        return Err(Error::parse(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(num, den))
}

pub fn format_ratio(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Fractional part in `[0, 1)`.
pub fn frac(q: &Q) -> Q {
    q - q.floor()
}

pub fn to_f64(q: &Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

pub fn is_unit_interval(q: &Q) -> bool {
    !q.is_negative() && *q < Q::from_integer(1)
}

pub fn nonneg(q: &Q) -> bool {
    q.is_zero() || q.is_positive()
}

pub mod serde_ratio {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}
