//! The dual-radix digit engine.
//!
//! For a periodic orbit `n_0, ..., n_{τ-1}` the engine produces, stage by
//! stage, the graded m-adic digits `d[v][u]` of every `n_v` (modulus
//! `m^{f_{v+u}}`) and its graded l-adic digits `b[v][u]` (modulus
//! `l^{e_{v-1-u}}`). Stage `u` is computed from stage `u - 1` only:
//!
//! ```text
//! d[v][u] = (l^{e_v})^{-1}      * (d[v+1][u-1] - b[v+u][u-1])   mod m^{f_{v+u}}
//! b[v][u] = (-m^{f_{v-1}})^{-1} * (d[v-u][u-1] - b[v-1][u-1])   mod l^{e_{v-1-u}}
//! ```
//!
//! Every operand is digit-sized, so no carry crosses stages. The digit
//! differences `c[v][u] = d[v+1][u-1] - b[v+u][u-1]` form the quotient cylinder.

use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::arith::{exact_div, mod_inverse, modulo, Int, Rational};
use crate::error::{Error, Result};
use crate::orbit::{OrbitSpec, SumKind};
use crate::system::cyclic;

#[cfg(feature = "parallel")]
const PARALLEL_MIN_TAU: usize = 64;

/// Moduli and modular inverses of the stage recurrence. Both repeat with
/// period `τ` in the stage index, so they are tabulated once per `(v, u mod τ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitRecurrence {
    tau: usize,
    m_moduli: Vec<Int>,
    l_moduli: Vec<Int>,
    m_side_inverse: Vec<Vec<Int>>,
    l_side_inverse: Vec<Vec<Int>>,
}

impl DigitRecurrence {
    pub fn new(spec: &OrbitSpec) -> Result<Self> {
        let seq = spec.sequence();
        let tau = spec.tau();
        let m_moduli: Vec<Int> = (0..tau).map(|w| seq.m_pow(w as i64).clone()).collect();
        let l_moduli: Vec<Int> = (0..tau).map(|w| seq.l_pow(w as i64).clone()).collect();
        let mut m_side_inverse = Vec::with_capacity(tau);
        let mut l_side_inverse = Vec::with_capacity(tau);
        for v in 0..tau {
            let vi = v as i64;
            let mut m_row = Vec::with_capacity(tau);
            let mut l_row = Vec::with_capacity(tau);
            for j in 0..tau as i64 {
                m_row.push(mod_inverse(seq.l_pow(vi), &m_moduli[cyclic(vi + j, tau)])?);
                l_row.push(mod_inverse(&-seq.m_pow(vi - 1), &l_moduli[cyclic(vi - 1 - j, tau)])?);
            }
            m_side_inverse.push(m_row);
            l_side_inverse.push(l_row);
        }
        Ok(Self { tau, m_moduli, l_moduli, m_side_inverse, l_side_inverse })
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Modulus of `d[v][u]`.
    pub fn m_modulus(&self, v: i64, u: usize) -> &Int {
        &self.m_moduli[cyclic(v + u as i64, self.tau)]
    }

    /// Modulus of `b[v][u]`.
    pub fn l_modulus(&self, v: i64, u: usize) -> &Int {
        &self.l_moduli[cyclic(v - 1 - u as i64, self.tau)]
    }

    fn m_digit(&self, v: usize, u: usize, difference: &Int) -> Int {
        let inv = &self.m_side_inverse[v][u % self.tau];
        modulo(&(inv * difference), self.m_modulus(v as i64, u))
    }

    fn l_digit(&self, v: usize, u: usize, difference: &Int) -> Int {
        let inv = &self.l_side_inverse[v][u % self.tau];
        modulo(&(inv * difference), self.l_modulus(v as i64, u))
    }
}

/// Digits of a single stage: everything the next stage depends on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frontier {
    stage: usize,
    m_digits: Vec<Int>,
    l_digits: Vec<Int>,
}

impl Frontier {
    /// Stage 0: `d[v][0] = s_v`, `b[v][0] = r_{v-1}`.
    pub fn initial(spec: &OrbitSpec) -> Self {
        let seq = spec.sequence();
        let tau = spec.tau();
        Self {
            stage: 0,
            m_digits: (0..tau).map(|v| seq.s(v as i64).clone()).collect(),
            l_digits: (0..tau).map(|v| seq.r(v as i64 - 1).clone()).collect(),
        }
    }

    pub fn from_parts(stage: usize, m_digits: Vec<Int>, l_digits: Vec<Int>) -> Result<Self> {
        if m_digits.len() != l_digits.len() || m_digits.is_empty() {
            return Err(Error::Domain("frontier columns must have equal positive length"));
        }
        Ok(Self { stage, m_digits, l_digits })
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn m_digits(&self) -> &[Int] {
        &self.m_digits
    }

    pub fn l_digits(&self) -> &[Int] {
        &self.l_digits
    }

    /// The cylinder column `c[·][stage + 1]` determined by this stage.
    pub fn differences(&self) -> Vec<Int> {
        let tau = self.m_digits.len();
        let u = self.stage as i64 + 1;
        (0..tau as i64)
            .map(|v| &self.m_digits[cyclic(v + 1, tau)] - &self.l_digits[cyclic(v + u, tau)])
            .collect()
    }

    /// Computes stage `stage + 1` from this stage alone.
    pub fn advance(&self, rec: &DigitRecurrence) -> Frontier {
        let tau = self.m_digits.len();
        debug_assert_eq!(tau, rec.tau());
        let u = self.stage + 1;
        let ui = u as i64;
        let update = |v: usize| {
            let vi = v as i64;
            let m_diff = &self.m_digits[cyclic(vi + 1, tau)] - &self.l_digits[cyclic(vi + ui, tau)];
            let l_diff = &self.m_digits[cyclic(vi - ui, tau)] - &self.l_digits[cyclic(vi - 1, tau)];
            (rec.m_digit(v, u, &m_diff), rec.l_digit(v, u, &l_diff))
        };
        let (m_digits, l_digits) = stage_map(tau, update);
        Frontier { stage: u, m_digits, l_digits }
    }
}

#[cfg(feature = "parallel")]
fn stage_map<F>(tau: usize, update: F) -> (Vec<Int>, Vec<Int>)
where
    F: Fn(usize) -> (Int, Int) + Sync + Send,
{
    use rayon::prelude::*;
    if tau >= PARALLEL_MIN_TAU {
        (0..tau).into_par_iter().map(update).unzip()
    } else {
        (0..tau).map(update).unzip()
    }
}

#[cfg(not(feature = "parallel"))]
fn stage_map<F>(tau: usize, update: F) -> (Vec<Int>, Vec<Int>)
where
    F: Fn(usize) -> (Int, Int),
{
    (0..tau).map(update).unzip()
}

/// All m-adic and l-adic digits of every iterate for stages `0..=U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitTableau {
    spec: OrbitSpec,
    rec: DigitRecurrence,
    // [v][u]
    m_digits: Vec<Vec<Int>>,
    l_digits: Vec<Vec<Int>>,
}

impl DigitTableau {
    /// Tableau holding stage 0 only.
    pub fn new(spec: OrbitSpec) -> Result<Self> {
        let rec = DigitRecurrence::new(&spec)?;
        let init = Frontier::initial(&spec);
        let m_digits = init.m_digits.into_iter().map(|d| alloc::vec![d]).collect();
        let l_digits = init.l_digits.into_iter().map(|b| alloc::vec![b]).collect();
        Ok(Self { spec, rec, m_digits, l_digits })
    }

    pub fn with_stages(spec: OrbitSpec, stages: usize) -> Result<Self> {
        let mut tab = Self::new(spec)?;
        tab.advance_to(stages);
        Ok(tab)
    }

    pub fn spec(&self) -> &OrbitSpec {
        &self.spec
    }

    pub fn recurrence(&self) -> &DigitRecurrence {
        &self.rec
    }

    pub fn tau(&self) -> usize {
        self.spec.tau()
    }

    /// Highest stage computed.
    pub fn stages(&self) -> usize {
        self.m_digits[0].len() - 1
    }

    /// Snapshot of stage `u`.
    pub fn frontier(&self, u: usize) -> Result<Frontier> {
        self.check_stage(u)?;
        Ok(Frontier {
            stage: u,
            m_digits: self.m_digits.iter().map(|row| row[u].clone()).collect(),
            l_digits: self.l_digits.iter().map(|row| row[u].clone()).collect(),
        })
    }

    pub fn advance_stage(&mut self) {
        let u = self.stages();
        let next = self.frontier(u).expect("last stage exists").advance(&self.rec);
        for (row, d) in self.m_digits.iter_mut().zip(next.m_digits) {
            row.push(d);
        }
        for (row, b) in self.l_digits.iter_mut().zip(next.l_digits) {
            row.push(b);
        }
    }

    pub fn advance_to(&mut self, stages: usize) {
        while self.stages() < stages {
            self.advance_stage();
        }
    }

    fn check_stage(&self, u: usize) -> Result<()> {
        if u > self.stages() {
            return Err(Error::Range { requested: u, available: self.stages() });
        }
        Ok(())
    }

    /// `d[v][u]`, the u-th graded m-adic digit of `n_v`.
    pub fn m_digit(&self, v: i64, u: usize) -> &Int {
        &self.m_digits[cyclic(v, self.tau())][u]
    }

    /// `b[v][u]`, the u-th graded l-adic digit of `n_v`.
    pub fn l_digit(&self, v: i64, u: usize) -> &Int {
        &self.l_digits[cyclic(v, self.tau())][u]
    }

    pub fn m_digits_of(&self, v: usize) -> &[Int] {
        &self.m_digits[v]
    }

    pub fn l_digits_of(&self, v: usize) -> &[Int] {
        &self.l_digits[v]
    }

    /// The quotient cylinder with columns `0..=U`.
    pub fn cylinder(&self) -> QuotientCylinder {
        let tau = self.tau();
        let stages = self.stages();
        let rows = (0..tau as i64)
            .map(|v| {
                let mut row = Vec::with_capacity(stages + 1);
                row.push(self.spec.sequence().a(v).clone());
                for u in 1..=stages {
                    row.push(self.m_digit(v + 1, u - 1) - self.l_digit(v + u as i64, u - 1));
                }
                row
            })
            .collect();
        QuotientCylinder { spec: self.spec.clone(), rows }
    }

    #[cfg(test)]
    pub(crate) fn m_digit_mut(&mut self, v: usize, u: usize) -> &mut Int {
        &mut self.m_digits[v][u]
    }
}

/// Digit differences `c[v][u]`, rows `v` in `0..τ`, columns `u` in `0..=U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientCylinder {
    spec: OrbitSpec,
    rows: Vec<Vec<Int>>,
}

impl QuotientCylinder {
    pub fn spec(&self) -> &OrbitSpec {
        &self.spec
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn stages(&self) -> usize {
        self.rows[0].len() - 1
    }

    pub fn entry(&self, v: i64, u: usize) -> &Int {
        &self.rows[cyclic(v, self.rows.len())][u]
    }

    /// `c_u⟨v = (c[v+w][u])_{w<τ}`.
    pub fn cross_section(&self, v: usize, u: usize) -> Vec<Int> {
        (0..self.rows.len() as i64).map(|w| self.entry(v as i64 + w, u).clone()).collect()
    }

    /// `γ_{v,u} · c_u⟨v`, which equals `D_v k_{v,u}`.
    pub fn weighted_section(&self, v: usize, u: usize) -> Result<Int> {
        if u > self.stages() {
            return Err(Error::Range { requested: u, available: self.stages() });
        }
        let gamma = self.spec.gamma(v, u);
        Ok(gamma.iter().zip(self.cross_section(v, u)).map(|(g, c)| g * c).sum())
    }

    /// The u-th graded m-adic quotient `k_{v,u}` of `n_v`.
    pub fn quotient(&self, v: usize, u: usize) -> Result<Rational> {
        let weighted = self.weighted_section(v, u)?;
        let (_, d) = self.spec.numerator_denominator(v);
        Ok(Rational::new(weighted, d.clone()))
    }
}

/// The two families of prefix addends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// l-adic prefix addends `Q_{v,u}`.
    Q,
    /// m-adic prefix addends `P_{v,u}`.
    P,
}

/// `Q_{v,u}` or `P_{v,u}` by their defining recursions; fails if a step
/// does not divide exactly.
pub fn addend_by_recursion(tab: &DigitTableau, side: Side, v: i64, u: usize) -> Result<Int> {
    tab.check_stage(u)?;
    let spec = tab.spec();
    let seq = spec.sequence();
    let mut acc = Int::zero();
    for k in 1..=u {
        let ki = k as i64;
        acc = match side {
            Side::Q => {
                let numerator = spec.l_power(SumKind::E, v, k) * tab.m_digit(v, k) + seq.l_pow(v + ki - 1) * &acc
                    - seq.s(v + ki)
                    + seq.r(v + ki - 1);
                exact_div(&numerator, seq.m_pow(v + ki), "l-adic prefix addend")?
            }
            Side::P => {
                let numerator = spec.m_power(SumKind::FBar, v, k) * tab.l_digit(v, k) + seq.m_pow(v - ki) * &acc
                    + seq.s(v - ki)
                    - seq.r(v - 1 - ki);
                exact_div(&numerator, seq.l_pow(v - ki - 1), "m-adic prefix addend")?
            }
        };
    }
    Ok(acc)
}

/// `Q_{v,u} = sum_{w<u} l^{Ē_{v+u,w}} b[v+u+1][w+1]` and
/// `P_{v,u} = sum_{w<u} m^{F_{v-u,w}} d[v-u-1][w+1]`.
pub fn addend_by_diagonal(tab: &DigitTableau, side: Side, v: i64, u: usize) -> Result<Int> {
    tab.check_stage(u)?;
    let spec = tab.spec();
    let ui = u as i64;
    Ok((0..u)
        .map(|w| match side {
            Side::Q => spec.l_power(SumKind::EBar, v + ui, w) * tab.l_digit(v + ui + 1, w + 1),
            Side::P => spec.m_power(SumKind::F, v - ui, w) * tab.m_digit(v - ui - 1, w + 1),
        })
        .sum())
}

/// The prefix addend computed both ways; disagreement means a corrupted tableau.
pub fn prefix_addend(tab: &DigitTableau, side: Side, v: i64, u: usize) -> Result<Int> {
    let by_recursion = addend_by_recursion(tab, side, v, u)?;
    let by_diagonal = addend_by_diagonal(tab, side, v, u)?;
    if by_recursion != by_diagonal {
        return Err(Error::Invariant(alloc::format!(
            "{side:?}-addend at (v={v}, u={u}): recursion gives {by_recursion}, diagonal sum gives {by_diagonal}"
        )));
    }
    Ok(by_recursion)
}

/// `(d[v][u], b[v][u])` recomputed from the prefix addends of stage `u - 1`
/// rather than from the digit recurrence.
pub fn digits_from_addends(tab: &DigitTableau, v: i64, u: usize) -> Result<(Int, Int)> {
    if u == 0 {
        return Err(Error::Domain("addend digit formulas start at stage 1"));
    }
    tab.check_stage(u)?;
    let spec = tab.spec();
    let seq = spec.sequence();
    let ui = u as i64;
    let q = addend_by_recursion(tab, Side::Q, v, u - 1)?;
    let p = addend_by_recursion(tab, Side::P, v, u - 1)?;

    let m_mod = seq.m_pow(v + ui);
    let m_rhs = -(seq.l_pow(v + ui - 1) * q) + seq.s(v + ui) - seq.r(v + ui - 1);
    let d = modulo(&(mod_inverse(&spec.l_power(SumKind::E, v, u), m_mod)? * m_rhs), m_mod);

    let l_mod = seq.l_pow(v - 1 - ui);
    let l_rhs = seq.m_pow(v - ui) * p + seq.s(v - ui) - seq.r(v - ui - 1);
    let b = modulo(&(mod_inverse(&-spec.m_power(SumKind::FBar, v, u), l_mod)? * l_rhs), l_mod);
    Ok((d, b))
}

/// Location of the first failed diagonal-difference identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalFault {
    pub side: Side,
    pub v: usize,
    pub u: usize,
}

impl fmt::Display for DiagonalFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}-diagonal difference fails at v = {}, u = {}", self.side, self.v, self.u)
    }
}

/// Checks `Q_{v,u} - Q_{v+1,u-1} = l^{Ē_{v+u,u-1}} b[v+u+1][u]` and
/// `P_{v,u} - P_{v-1,u-1} = m^{F_{v-u,u-1}} d[v-u-1][u]` for `1 <= u <= u_max`.
pub fn check_diagonal_differences(tab: &DigitTableau, u_max: usize) -> core::result::Result<(), DiagonalFault> {
    let spec = tab.spec();
    let u_max = u_max.min(tab.stages());
    for side in [Side::Q, Side::P] {
        for u in 1..=u_max {
            for v in 0..tab.tau() {
                let vi = v as i64;
                let ui = u as i64;
                let fault = DiagonalFault { side, v, u };
                let (outer, inner, expected) = match side {
                    Side::Q => (
                        addend_by_recursion(tab, side, vi, u),
                        addend_by_recursion(tab, side, vi + 1, u - 1),
                        spec.l_power(SumKind::EBar, vi + ui, u - 1) * tab.l_digit(vi + ui + 1, u),
                    ),
                    Side::P => (
                        addend_by_recursion(tab, side, vi, u),
                        addend_by_recursion(tab, side, vi - 1, u - 1),
                        spec.m_power(SumKind::F, vi - ui, u - 1) * tab.m_digit(vi - ui - 1, u),
                    ),
                };
                match (outer, inner) {
                    (Ok(outer), Ok(inner)) if &outer - &inner == expected => {}
                    _ => return Err(fault),
                }
            }
        }
    }
    Ok(())
}
