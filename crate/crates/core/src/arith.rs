//! Exact integer and rational primitives: valuations, canonical residues,
//! modular inverses and multiplicative orders.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type Int = BigInt;

/// Exact rational; equality is value equality after normalization.
pub type Rational = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rational(num: Int, den: Int) -> Rational {
    Rational::new(num, den)
}

pub fn rational_from_int(n: Int) -> Rational {
    Rational::from_integer(n)
}

pub fn pow(base: &Int, exp: u32) -> Int {
    Pow::pow(base, exp)
}

/// `x mod m` in `[0, m)` for `m > 0`.
pub fn modulo(x: &Int, m: &Int) -> Int {
    x.mod_floor(m)
}

pub fn coprime(a: &Int, b: &Int) -> bool {
    a.gcd(b).is_one()
}

/// `b`-adic order of `n`, with the convention `valuation(b, 0) = 0`.
pub fn valuation(b: &Int, n: &Int) -> Result<u32> {
    if *b < int(2) {
        return Err(Error::Domain("valuation base must be at least 2"));
    }
    if n.is_zero() {
        return Ok(0);
    }
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(b);
        if !r.is_zero() {
            return Ok(k);
        }
        n = q;
        k += 1;
    }
}

/// `valuation(b, num) - valuation(b, den)` for a rational.
pub fn rational_valuation(b: &Int, x: &Rational) -> Result<i64> {
    let num = i64::from(valuation(b, x.numer())?);
    let den = i64::from(valuation(b, x.denom())?);
    Ok(num - den)
}

/// The inverse of `a` modulo `m`, in `[0, m)`.
pub fn mod_inverse(a: &Int, m: &Int) -> Result<Int> {
    if *m < int(2) {
        return Err(Error::Domain("modulus must be at least 2"));
    }
    let a = modulo(a, m);
    let ext = a.extended_gcd(m);
    if !ext.gcd.is_one() {
        return Err(Error::NotInvertible);
    }
    Ok(modulo(&ext.x, m))
}

/// Smallest `k >= 1` with `l^k = 1 (mod m)`.
pub fn mult_order(l: &Int, m: &Int) -> Result<u64> {
    if *m < int(2) {
        return Err(Error::Domain("modulus must be at least 2"));
    }
    if !coprime(l, m) {
        return Err(Error::Domain("base is not a unit modulo m"));
    }
    let base = modulo(l, m);
    let mut acc = base.clone();
    let mut k = 1u64;
    while !acc.is_one() {
        acc = (acc * &base) % m;
        k += 1;
    }
    Ok(k)
}

/// The representative of `num * den^{-1}` in `[0, m)`.
pub fn canonical_residue(x: &Rational, m: &Int) -> Result<Int> {
    if *m < int(2) {
        return Err(Error::Domain("modulus must be at least 2"));
    }
    let inv = mod_inverse(x.denom(), m).map_err(|_| Error::Domain("denominator not coprime to modulus"))?;
    Ok(modulo(&(x.numer() * inv), m))
}

/// Residue of the un-normalized fraction `num / den` modulo `m`.
pub fn residue_of_fraction(num: &Int, den: &Int, m: &Int) -> Result<Int> {
    let inv = mod_inverse(den, m).map_err(|_| Error::Domain("denominator not coprime to modulus"))?;
    Ok(modulo(&(num * inv), m))
}

/// Exact division, failing when `den` does not divide `num`.
pub fn exact_div(num: &Int, den: &Int, context: &'static str) -> Result<Int> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::Invariant(alloc::format!("non-integral division in {context}")))
    }
}

/// `x` as an integer when its denominator is one.
pub fn as_integer(x: &Rational) -> Option<Int> {
    x.is_integer().then(|| x.to_integer())
}
