//! Exponent-sum bookkeeping and closed-form iterate values of a periodic
//! admissible sequence.

use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::arith::{coprime, pow, rational, Int, Rational};
use crate::error::{Error, Result};
use crate::graded::exponent;
use crate::system::{cyclic, AdmissibleSequence};

/// Which of the four exponent sums to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumKind {
    /// `F_{v,u} = sum_{y<u} f_{v+y}`
    F,
    /// `E_{v,u} = sum_{y<u} e_{v+y}`
    E,
    /// `F̄_{v,u} = sum_{y<u} f_{v-1-y}`
    FBar,
    /// `Ē_{v,u} = sum_{y<u} e_{v-1-y}`
    EBar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CyclicSums {
    prefix: Vec<u64>,
}

impl CyclicSums {
    fn new(values: &[u32]) -> Self {
        let mut prefix = Vec::with_capacity(values.len() + 1);
        let mut acc = 0u64;
        prefix.push(0);
        for &x in values {
            acc += u64::from(x);
            prefix.push(acc);
        }
        Self { prefix }
    }

    fn tau(&self) -> usize {
        self.prefix.len() - 1
    }

    fn total(&self) -> u64 {
        self.prefix[self.tau()]
    }

    /// Sum of `u` consecutive entries starting at index `v`.
    fn forward(&self, v: i64, u: usize) -> u64 {
        let tau = self.tau();
        let start = cyclic(v, tau);
        let (laps, rem) = (u / tau, u % tau);
        let window = if start + rem <= tau {
            self.prefix[start + rem] - self.prefix[start]
        } else {
            (self.total() - self.prefix[start]) + self.prefix[start + rem - tau]
        };
        laps as u64 * self.total() + window
    }

    /// Sum of the `u` entries ending just before index `v`.
    fn backward(&self, v: i64, u: usize) -> u64 {
        let tau = self.tau() as i64;
        let start = (v - (u as i64 % tau)).rem_euclid(tau);
        self.forward(start, u)
    }
}

/// An admissible sequence together with its exponent sums and the
/// un-normalized closed forms `n_v = N_v / D_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSpec {
    seq: AdmissibleSequence,
    f_sums: CyclicSums,
    e_sums: CyclicSums,
    numerators: Vec<Int>,
    denominators: Vec<Int>,
    observed: Option<Vec<Int>>,
}

impl OrbitSpec {
    pub fn new(seq: AdmissibleSequence) -> Result<Self> {
        let f_sums = CyclicSums::new(&seq.f_seq());
        let e_sums = CyclicSums::new(&seq.e_seq());
        let mut spec = Self { seq, f_sums, e_sums, numerators: Vec::new(), denominators: Vec::new(), observed: None };
        let tau = spec.tau();
        for v in 0..tau {
            let gamma = spec.gamma(v, 0);
            let n: Int = (0..tau).map(|w| &gamma[w] * spec.seq.a((v + w) as i64)).sum();
            let d = pow(spec.seq.l(), exponent(spec.exponent_sum(SumKind::EBar, v as i64, tau)))
                - pow(spec.seq.m(), exponent(spec.exponent_sum(SumKind::F, v as i64, tau)));
            if d.is_zero() || !coprime(&d, spec.seq.m()) || !coprime(&d, spec.seq.l()) {
                return Err(Error::Invariant(alloc::format!("denominator {d} is not a unit in m and l")));
            }
            spec.numerators.push(n);
            spec.denominators.push(d);
        }
        Ok(spec)
    }

    /// Pins iterate values observed by forward iteration; cycle verification
    /// then checks the maps against these rather than the closed forms alone.
    pub fn with_observed(mut self, iterates: Vec<Int>) -> Result<Self> {
        if iterates.len() != self.tau() {
            return Err(Error::Domain("observed iterates must have length tau"));
        }
        self.observed = Some(iterates);
        Ok(self)
    }

    pub fn observed(&self) -> Option<&[Int]> {
        self.observed.as_deref()
    }

    pub fn sequence(&self) -> &AdmissibleSequence {
        &self.seq
    }

    pub fn tau(&self) -> usize {
        self.seq.tau()
    }

    pub fn exponent_sum(&self, kind: SumKind, v: i64, u: usize) -> u64 {
        match kind {
            SumKind::F => self.f_sums.forward(v, u),
            SumKind::E => self.e_sums.forward(v, u),
            SumKind::FBar => self.f_sums.backward(v, u),
            SumKind::EBar => self.e_sums.backward(v, u),
        }
    }

    /// `m^{F_{v,u}}`.
    pub fn m_power(&self, kind: SumKind, v: i64, u: usize) -> Int {
        pow(self.seq.m(), exponent(self.exponent_sum(kind, v, u)))
    }

    /// `l^{E_{v,u}}` or `l^{Ē_{v,u}}`.
    pub fn l_power(&self, kind: SumKind, v: i64, u: usize) -> Int {
        pow(self.seq.l(), exponent(self.exponent_sum(kind, v, u)))
    }

    /// Weights `γ_{v,u}[w] = m^{F_{v+u,w}} l^{Ē_{v,τ-1-w}}`.
    pub fn gamma(&self, v: usize, u: usize) -> Vec<Int> {
        let tau = self.tau();
        let v = v as i64;
        (0..tau)
            .map(|w| self.m_power(SumKind::F, v + u as i64, w) * self.l_power(SumKind::EBar, v, tau - 1 - w))
            .collect()
    }

    /// `(N_v, D_v)` with their original signs.
    pub fn numerator_denominator(&self, v: usize) -> (&Int, &Int) {
        let v = cyclic(v as i64, self.tau());
        (&self.numerators[v], &self.denominators[v])
    }

    pub fn iterate_value(&self, v: usize) -> Rational {
        let (n, d) = self.numerator_denominator(v);
        rational(n.clone(), d.clone())
    }

    /// Checks that the dual-radix map carries `n_v` to `n_{v+1}` and the
    /// l-adic map carries it back, for every `v`.
    pub fn verify_cycle_consistency(&self) -> core::result::Result<(), CycleMismatch> {
        let tau = self.tau();
        let values: Vec<Rational> = match &self.observed {
            Some(obs) => {
                for (v, n) in obs.iter().enumerate() {
                    if Rational::from_integer(n.clone()) != self.iterate_value(v) {
                        return Err(CycleMismatch { v, reason: "observed iterate differs from N_v / D_v" });
                    }
                }
                obs.iter().cloned().map(Rational::from_integer).collect()
            }
            None => (0..tau).map(|v| self.iterate_value(v)).collect(),
        };
        for v in 0..tau {
            let next = &values[(v + 1) % tau];
            match self.seq.dual_radix_map(v, &values[v]) {
                Ok(image) if image == *next => {}
                _ => return Err(CycleMismatch { v, reason: "dual-radix map does not reach n_{v+1}" }),
            }
            match self.seq.l_adic_map(v, next) {
                Ok(image) if image == values[v] => {}
                _ => return Err(CycleMismatch { v, reason: "l-adic map does not return to n_v" }),
            }
        }
        Ok(())
    }
}

/// First index at which a claimed orbit fails to close.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleMismatch {
    pub v: usize,
    pub reason: &'static str,
}

impl fmt::Display for CycleMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cycle breaks at v = {}: {}", self.v, self.reason)
    }
}
