//! Elements of `Z[1/p]` stored as `num · p^exp` with `p ∤ num`.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `num · p^exp`. The base `p` is carried by the group, not the value;
/// normalized values satisfy `p ∤ num`, and zero is `(0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PowerFraction {
    pub num: i128,
    pub exp: i32,
}

fn pow(p: u64, e: u32) -> Option<i128> {
    (p as i128).checked_pow(e)
}

impl PowerFraction {
    pub const ZERO: PowerFraction = PowerFraction { num: 0, exp: 0 };

    pub fn normalized(mut num: i128, mut exp: i32, p: u64) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let p = p as i128;
        while num % p == 0 {
            num /= p;
            exp += 1;
        }
        PowerFraction { num, exp }
    }

    pub fn from_int(n: i128, p: u64) -> Self {
        Self::normalized(n, 0, p)
    }

    /// `j · p^e`.
    pub fn scaled(j: i128, e: i32, p: u64) -> Self {
        Self::normalized(j, e, p)
    }

    /// Converts `num/den`; fails unless `den` divides a power of `p`.
    pub fn from_ratio(v: &Ratio<i128>, p: u64) -> Result<Self> {
        let den = *v.denom();
        let mut pe: i128 = 1;
        let mut e = 0i32;
        while pe % den != 0 {
            pe = pe
                .checked_mul(p as i128)
                .ok_or_else(|| Error::input(format!("{v} is not in Z[1/{p}]")))?;
            e += 1;
            if e > 126 {
                return Err(Error::input(format!("{v} is not in Z[1/{p}]")));
            }
        }
        let num = v.numer().checked_mul(pe / den).ok_or_else(|| Error::resource("rational overflow"))?;
        Ok(Self::normalized(num, -e, p))
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_normalized(&self, p: u64) -> bool {
        if self.num == 0 {
            self.exp == 0
        } else {
            self.num % p as i128 != 0
        }
    }

    /// `v_p`, with `None` for zero (valuation `+∞`).
    pub fn valuation(&self) -> Option<i32> {
        (self.num != 0).then_some(self.exp)
    }

    /// `v_p(self) ≥ t`.
    pub fn val_at_least(&self, t: i64) -> bool {
        self.num == 0 || self.exp as i64 >= t
    }

    pub fn is_integer(&self) -> bool {
        self.val_at_least(0)
    }

    pub fn neg(&self) -> Self {
        PowerFraction { num: -self.num, exp: self.exp }
    }

    /// Multiplication by `p^k`.
    pub fn shift(&self, k: i64) -> Option<Self> {
        if self.num == 0 {
            return Some(*self);
        }
        let exp = i32::try_from(self.exp as i64 + k).ok()?;
        Some(PowerFraction { num: self.num, exp })
    }

    pub fn add(&self, o: &Self, p: u64) -> Option<Self> {
        if self.num == 0 {
            return Some(*o);
        }
        if o.num == 0 {
            return Some(*self);
        }
        let e = self.exp.min(o.exp);
        let a = self.num.checked_mul(pow(p, (self.exp - e) as u32)?)?;
        let b = o.num.checked_mul(pow(p, (o.exp - e) as u32)?)?;
        Some(Self::normalized(a.checked_add(b)?, e, p))
    }

    /// Value as an exact fraction.
    pub fn to_ratio(&self, p: u64) -> Option<Ratio<i128>> {
        if self.exp >= 0 {
            Some(Ratio::from_integer(self.num.checked_mul(pow(p, self.exp as u32)?)?))
        } else {
            Some(Ratio::new(self.num, pow(p, (-self.exp) as u32)?))
        }
    }

    /// `self = j · p^e` for integer `j`, returning `j` if it fits.
    pub fn coefficient_at(&self, e: i64, p: u64) -> Option<i128> {
        if self.num == 0 {
            return Some(0);
        }
        let diff = self.exp as i64 - e;
        if diff < 0 {
            return None;
        }
        self.num.checked_mul(pow(p, u32::try_from(diff).ok()?)?)
    }

    pub fn display(&self, p: u64) -> String {
        match self.to_ratio(p) {
            Some(r) if r.is_integer() => r.numer().to_string(),
            Some(r) => format!("{}/{}", r.numer(), r.denom()),
            None => format!("{}*{}^{}", self.num, p, self.exp),
        }
    }
}

impl fmt::Display for PowerFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·p^{}", self.num, self.exp)
    }
}

/// `v_p(n)` for a nonzero integer.
pub fn int_valuation(n: i128, p: u64) -> u32 {
    debug_assert!(n != 0);
    let p = p as i128;
    let mut n = n;
    let mut v = 0;
    while n.is_multiple_of(&p) {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_ratio_roundtrip() {
        let x = PowerFraction::from_ratio(&Ratio::new(5, 2), 2).unwrap();
        assert_eq!(x, PowerFraction { num: 5, exp: -1 });
        let y = PowerFraction::from_ratio(&Ratio::new(12, 1), 2).unwrap();
        assert_eq!(y, PowerFraction { num: 3, exp: 2 });
        assert_eq!(y.to_ratio(2).unwrap(), Ratio::from_integer(12));
        assert!(PowerFraction::from_ratio(&Ratio::new(1, 3), 2).is_err());
        // Composite bases: 1/2 = 3 · 6^-1.
        let h = PowerFraction::from_ratio(&Ratio::new(1, 2), 6).unwrap();
        assert_eq!(h, PowerFraction { num: 3, exp: -1 });
    }

    #[test]
    fn addition_is_exact() {
        let p = 2;
        let a = PowerFraction::from_ratio(&Ratio::new(1, 2), p).unwrap();
        let b = PowerFraction::from_ratio(&Ratio::new(3, 4), p).unwrap();
        let s = a.add(&b, p).unwrap();
        assert_eq!(s.to_ratio(p).unwrap(), Ratio::new(5, 4));
        assert_eq!(a.add(&a, p).unwrap(), PowerFraction::from_int(1, p));
        assert_eq!(a.add(&a.neg(), p).unwrap(), PowerFraction::ZERO);
    }

    #[test]
    fn valuations() {
        let x = PowerFraction::scaled(6, -3, 2);
        assert_eq!(x.valuation(), Some(-2));
        assert!(PowerFraction::ZERO.val_at_least(1000));
        assert_eq!(int_valuation(48, 2), 4);
        assert_eq!(x.coefficient_at(-3, 2), Some(6));
        assert_eq!(x.coefficient_at(-1, 2), None);
    }
}
