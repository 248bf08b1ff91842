//! Ground-field selection: the rationals, or a prime field `F_p`.
//!
//! Coefficients are always stored as `BigRational`. Over `F_p` we keep them
//! as integers in `[0, p)` with denominator one; division happens through the
//! modular inverse at normalization time. This keeps every polynomial
//! operation field-agnostic: arithmetic runs in `Q` and a final
//! [`FieldSpec::normalize`] folds the result into the chosen field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::is_prime_u64;
use crate::error::{Error, Result};

/// The coefficient field of a polynomial ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    /// Characteristic zero: exact rationals in lowest terms.
    Rational,
    /// The prime field with `p` elements; residues stored in `[0, p)`.
    Prime(u64),
}

impl FieldSpec {
    /// Build from a characteristic: `0` means `Q`, a prime `p` means `F_p`.
    pub fn from_characteristic(ch: u64) -> Result<Self> {
        match ch {
            0 => Ok(FieldSpec::Rational),
            p if is_prime_u64(p) => Ok(FieldSpec::Prime(p)),
            bad => Err(Error::BadCharacteristic(bad)),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Canonical form of a coefficient in this field. Over `Q` this is just
    /// lowest terms (which `BigRational` maintains); over `F_p` the fraction
    /// is evaluated as `num * den^{-1} mod p`.
    pub fn normalize(&self, c: &BigRational) -> Result<BigRational> {
        match self {
            FieldSpec::Rational => Ok(c.clone()),
            FieldSpec::Prime(p) => {
                let p = BigInt::from(*p);
                let num = c.numer().mod_floor_by(&p);
                let den = c.denom().mod_floor_by(&p);
                if den.is_zero() {
                    return Err(Error::NonInvertibleModP { p: self.characteristic() });
                }
                let inv = mod_inverse(&den, &p)
                    .ok_or(Error::NonInvertibleModP { p: self.characteristic() })?;
                Ok(BigRational::from_integer((num * inv).mod_floor_by(&p)))
            }
        }
    }

    /// Whether a coefficient is already in canonical form for this field.
    pub fn is_canonical(&self, c: &BigRational) -> bool {
        match self {
            FieldSpec::Rational => true,
            FieldSpec::Prime(p) => {
                c.denom().is_one()
                    && !c.numer().is_negative()
                    && c.numer() < &BigInt::from(*p)
            }
        }
    }
}

trait ModFloor {
    fn mod_floor_by(&self, m: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor_by(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

/// Inverse of `a` modulo `m` via extended Euclid; `None` when `gcd(a, m) != 1`.
fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (mut old_r, mut r) = (a.mod_floor_by(m), m.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
    }
    if old_r.is_one() {
        Some(old_s.mod_floor_by(m))
    } else {
        None
    }
}
