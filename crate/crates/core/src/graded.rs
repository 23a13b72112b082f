//! Graded n-adic expansions.
//!
//! A [`Gradation`] fixes a radix `n` and a cyclic block schedule
//! `g = (g_0, ..., g_{τ-1})`; digit `w` of an expansion occupies the block
//! `[0, n^{g_w})` and carries the weight `n^{G_w}` with `G_w = g_0 + ... + g_{w-1}`.
//! [`graded_division`] is the single-radix division algorithm; it also serves
//! as the reference against which the dual-radix engine is checked.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{
    canonical_residue, coprime, exact_div, int, mod_inverse, modulo, pow, rational, Int, Rational,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gradation {
    radix: Int,
    grading: Vec<u32>,
    prefix: Vec<u64>,
}

impl Gradation {
    pub fn new(radix: Int, grading: Vec<u32>) -> Result<Self> {
        if radix < int(2) {
            return Err(Error::Domain("radix must be at least 2"));
        }
        if grading.is_empty() {
            return Err(Error::Domain("grading must be non-empty"));
        }
        if grading.contains(&0) {
            return Err(Error::Domain("grading entries must be positive"));
        }
        let mut prefix = Vec::with_capacity(grading.len() + 1);
        let mut acc = 0u64;
        prefix.push(0);
        for &g in &grading {
            acc += u64::from(g);
            prefix.push(acc);
        }
        Ok(Self { radix, grading, prefix })
    }

    /// Ungraded radix-`n` expansion.
    pub fn plain(radix: Int) -> Result<Self> {
        Self::new(radix, alloc::vec![1])
    }

    pub fn radix(&self) -> &Int {
        &self.radix
    }

    pub fn grading(&self) -> &[u32] {
        &self.grading
    }

    pub fn period(&self) -> usize {
        self.grading.len()
    }

    /// `g_u`, read cyclically.
    pub fn block(&self, u: usize) -> u32 {
        self.grading[u % self.grading.len()]
    }

    /// `G_y`, the total exponent of the first `y` blocks.
    pub fn weight(&self, y: usize) -> u64 {
        let tau = self.grading.len();
        (y / tau) as u64 * self.prefix[tau] + self.prefix[y % tau]
    }

    /// `n^{g_u}`.
    pub fn block_modulus(&self, u: usize) -> Int {
        pow(&self.radix, self.block(u))
    }

    /// `n^{G_y}`.
    pub fn weight_modulus(&self, y: usize) -> Int {
        pow(&self.radix, exponent(self.weight(y)))
    }
}

pub(crate) fn exponent(e: u64) -> u32 {
    u32::try_from(e).expect("exponent exceeds u32")
}

/// The first `precision` graded digits of `N/D` and the graded quotient
/// left over after them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedExpansion {
    gradation: Gradation,
    numerator: Int,
    denominator: Int,
    digits: Vec<Int>,
    quotient: Rational,
}

impl GradedExpansion {
    pub fn gradation(&self) -> &Gradation {
        &self.gradation
    }

    pub fn digits(&self) -> &[Int] {
        &self.digits
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    /// Graded quotient of index `precision`.
    pub fn quotient(&self) -> &Rational {
        &self.quotient
    }

    /// The expanded rational `N/D`.
    pub fn value(&self) -> Rational {
        rational(self.numerator.clone(), self.denominator.clone())
    }

    /// Evaluates `sum d_w n^{G_w} + n^{G_M} k_M`, which must equal [`Self::value`].
    pub fn reconstruct(&self) -> Rational {
        let prefix = self.prefix_sum(self.digits.len());
        Rational::from_integer(prefix)
            + Rational::from_integer(self.gradation.weight_modulus(self.digits.len())) * &self.quotient
    }

    fn prefix_sum(&self, u: usize) -> Int {
        let mut acc = Int::zero();
        let mut scale = Int::one();
        for (w, digit) in self.digits[..u].iter().enumerate() {
            acc += digit * &scale;
            scale *= self.gradation.block_modulus(w);
        }
        acc
    }
}

/// Graded polyadic division of `numerator / denominator` to `precision` digits.
///
/// Each step takes `d_u = D^{-1} N_u mod n^{g_u}` and `N_{u+1} = (N_u - D d_u) / n^{g_u}`;
/// the returned quotient is `N_M / D`.
pub fn graded_division(
    numerator: &Int,
    denominator: &Int,
    gradation: &Gradation,
    precision: usize,
) -> Result<GradedExpansion> {
    if denominator.is_zero() {
        return Err(Error::Domain("denominator is zero"));
    }
    if !coprime(denominator, gradation.radix()) {
        return Err(Error::Domain("denominator not coprime to radix"));
    }
    let mut digits = Vec::with_capacity(precision);
    let mut running = numerator.clone();
    for u in 0..precision {
        let block = gradation.block_modulus(u);
        let inv = mod_inverse(denominator, &block)?;
        let digit = modulo(&(&inv * &running), &block);
        running = exact_div(&(&running - denominator * &digit), &block, "graded division")?;
        digits.push(digit);
    }
    Ok(GradedExpansion {
        gradation: gradation.clone(),
        numerator: numerator.clone(),
        denominator: denominator.clone(),
        digits,
        quotient: rational(running, denominator.clone()),
    })
}

/// `P_u = sum_{w<u} d_w n^{G_w}`, with `P_0 = 0`.
pub fn prefix_value(expansion: &GradedExpansion, u: usize) -> Result<Int> {
    if u > expansion.precision() {
        return Err(Error::Range { requested: u, available: expansion.precision() });
    }
    Ok(expansion.prefix_sum(u))
}

/// The graded quotient `k_u` with `x = n^{G_u} k_u + P_u`; `k_0 = x`.
pub fn graded_quotient(x: &Rational, gradation: &Gradation, u: usize) -> Result<Rational> {
    if !coprime(x.denom(), gradation.radix()) {
        return Err(Error::Domain("denominator not coprime to radix"));
    }
    if u == 0 {
        return Ok(x.clone());
    }
    let modulus = gradation.weight_modulus(u);
    let prefix = canonical_residue(x, &modulus)?;
    Ok((x - Rational::from_integer(prefix)) / Rational::from_integer(modulus))
}
