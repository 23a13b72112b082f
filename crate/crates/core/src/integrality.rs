//! Integrality of periodic iterates.
//!
//! With `μ` and `λ` the residues of `n_v = N_v / D_v` modulo `m^{F_{v,τ}}` and
//! `l^{Ē_{v,τ}}`, the numerator splits as `N_v = l^{Ē_{v,τ}} μ - m^{F_{v,τ}} λ`
//! and `n_v` is an integer exactly when `D_v | μ - λ`.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{as_integer, modulo, residue_of_fraction, Int, Rational};
use crate::engine::DigitTableau;
use crate::error::{Error, Result};
use crate::orbit::{OrbitSpec, SumKind};
use crate::system::sequence_from_exponents;

/// `μ_{v,u}` in `[0, m^{F_{v,u}})` and `λ_{v,u}` in `[0, l^{Ē_{v,u}})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixResidues {
    pub v: usize,
    pub u: usize,
    pub mu: Int,
    pub lambda: Int,
}

/// Residues of `N_v / D_v` by modular division alone.
pub fn direct_residues(spec: &OrbitSpec, v: usize, u: usize) -> Result<PrefixResidues> {
    if u == 0 {
        return Ok(PrefixResidues { v, u, mu: Int::zero(), lambda: Int::zero() });
    }
    let (n, d) = spec.numerator_denominator(v);
    let vi = v as i64;
    Ok(PrefixResidues {
        v,
        u,
        mu: residue_of_fraction(n, d, &spec.m_power(SumKind::F, vi, u))?,
        lambda: residue_of_fraction(n, d, &spec.l_power(SumKind::EBar, vi, u))?,
    })
}

/// Residues as weighted digit sums of the tableau; needs stage `u - 1`.
pub fn digit_residues(tab: &DigitTableau, v: usize, u: usize) -> Result<PrefixResidues> {
    if u > tab.stages() + 1 {
        return Err(Error::Range { requested: u, available: tab.stages() + 1 });
    }
    let spec = tab.spec();
    let vi = v as i64;
    let mu = (0..u).map(|w| spec.m_power(SumKind::F, vi, w) * tab.m_digit(vi, w)).sum();
    let lambda = (0..u).map(|w| spec.l_power(SumKind::EBar, vi, w) * tab.l_digit(vi, w)).sum();
    Ok(PrefixResidues { v, u, mu, lambda })
}

/// Prefix residues computed both ways; disagreement means a corrupted tableau.
pub fn prefix_residues(tab: &DigitTableau, v: usize, u: usize) -> Result<PrefixResidues> {
    let direct = direct_residues(tab.spec(), v, u)?;
    let digits = digit_residues(tab, v, u)?;
    if direct != digits {
        return Err(Error::Invariant(alloc::format!(
            "prefix residues at (v={v}, u={u}) disagree: direct ({}, {}), digits ({}, {})",
            direct.mu,
            direct.lambda,
            digits.mu,
            digits.lambda
        )));
    }
    Ok(direct)
}

/// The m-adic graded quotient `k_{v,u} = (n_v - μ_{v,u}) / m^{F_{v,u}}`.
pub fn m_quotient(spec: &OrbitSpec, v: usize, u: usize) -> Result<Rational> {
    let res = direct_residues(spec, v, u)?;
    let x = spec.iterate_value(v) - Rational::from_integer(res.mu);
    Ok(x / Rational::from_integer(spec.m_power(SumKind::F, v as i64, u)))
}

/// The l-adic graded quotient `j_{v,u} = (n_v - λ_{v,u}) / l^{Ē_{v,u}}`.
pub fn l_quotient(spec: &OrbitSpec, v: usize, u: usize) -> Result<Rational> {
    let res = direct_residues(spec, v, u)?;
    let x = spec.iterate_value(v) - Rational::from_integer(res.lambda);
    Ok(x / Rational::from_integer(spec.l_power(SumKind::EBar, v as i64, u)))
}

/// Full-period residues with the quotient `k_{v,τ} = (μ - λ) / D_v` read
/// off the cylinder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumeratorDecomposition {
    pub residues: PrefixResidues,
    pub quotient: Rational,
}

/// Verifies `N_v = l^{Ē_{v,τ}} μ - m^{F_{v,τ}} λ`, `k_{v,τ} D_v = μ - λ` and
/// both expressions `μ + m^F k = λ + l^Ē k = N_v / D_v`.
pub fn numerator_decomposition(tab: &DigitTableau, v: usize) -> Result<NumeratorDecomposition> {
    let spec = tab.spec();
    let tau = spec.tau();
    if tab.stages() < tau {
        return Err(Error::Range { requested: tau, available: tab.stages() });
    }
    let res = prefix_residues(tab, v, tau)?;
    let vi = v as i64;
    let m_mod = spec.m_power(SumKind::F, vi, tau);
    let l_mod = spec.l_power(SumKind::EBar, vi, tau);
    let (n, d) = spec.numerator_denominator(v);

    if &(&l_mod * &res.mu - &m_mod * &res.lambda) != n {
        return Err(Error::Invariant(alloc::format!("numerator decomposition fails at v={v}")));
    }
    let k = tab.cylinder().quotient(v, tau)?;
    let diff = Rational::from_integer(&res.mu - &res.lambda);
    if &k * Rational::from_integer(d.clone()) != diff {
        return Err(Error::Invariant(alloc::format!("full-period quotient identity fails at v={v}")));
    }
    let x = spec.iterate_value(v);
    let via_m = Rational::from_integer(res.mu.clone()) + Rational::from_integer(m_mod) * &k;
    let via_l = Rational::from_integer(res.lambda.clone()) + Rational::from_integer(l_mod) * &k;
    if via_m != x || via_l != x {
        return Err(Error::Invariant(alloc::format!("iterate reconstruction fails at v={v}")));
    }
    Ok(NumeratorDecomposition { residues: res, quotient: k })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classification {
    NonnegativeInteger,
    NegativeInteger,
    NonInteger,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::NonnegativeInteger => "nonnegative-integer",
            Classification::NegativeInteger => "negative-integer",
            Classification::NonInteger => "non-integer",
        }
    }

    pub fn is_integer(self) -> bool {
        self != Classification::NonInteger
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `witness` is the quotient `(μ - λ) / D` for integers and the nonzero
/// residue `(μ - λ) mod |D|` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityVerdict {
    pub classification: Classification,
    pub value: Option<Int>,
    pub witness: Int,
}

fn verdict_from_residues(spec: &OrbitSpec, res: &PrefixResidues) -> IntegralityVerdict {
    let (_, d) = spec.numerator_denominator(res.v);
    let diff = &res.mu - &res.lambda;
    let (k, rem) = diff.div_rem(d);
    if !rem.is_zero() {
        return IntegralityVerdict {
            classification: Classification::NonInteger,
            value: None,
            witness: modulo(&diff, &d.abs()),
        };
    }
    let value = &res.mu + spec.m_power(SumKind::F, res.v as i64, res.u) * &k;
    let classification =
        if k.is_negative() { Classification::NegativeInteger } else { Classification::NonnegativeInteger };
    IntegralityVerdict { classification, value: Some(value), witness: k }
}

/// Decides integrality of `n_v` from full-period residues.
pub fn prefix_test(spec: &OrbitSpec, v: usize) -> Result<IntegralityVerdict> {
    Ok(verdict_from_residues(spec, &direct_residues(spec, v, spec.tau())?))
}

/// As [`prefix_test`], with residues cross-checked against the tableau.
pub fn prefix_test_with_tableau(tab: &DigitTableau, v: usize) -> Result<IntegralityVerdict> {
    Ok(verdict_from_residues(tab.spec(), &prefix_residues(tab, v, tab.spec().tau())?))
}

/// Outcome of scanning the cylinder quotients `k_{v,0..=u_max}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixReport {
    pub verdict: Option<IntegralityVerdict>,
    pub decided_at: Option<usize>,
    pub trajectory: Vec<Rational>,
}

impl SuffixReport {
    pub fn is_conclusive(&self) -> bool {
        self.verdict.is_some()
    }
}

/// Decides on `k_{v,u} = 0`, or on `k_{v,u} = -1` held for `τ + 1`
/// consecutive stages; otherwise inconclusive at `u_max`.
pub fn suffix_test(spec: &OrbitSpec, v: usize, u_max: usize) -> Result<SuffixReport> {
    let tab = DigitTableau::with_stages(spec.clone(), u_max)?;
    let cyl = tab.cylinder();
    let tau = spec.tau();
    let trajectory = (0..=u_max).map(|u| cyl.quotient(v, u)).collect::<Result<Vec<_>>>()?;
    let minus_one = -Rational::one();
    for (u, k) in trajectory.iter().enumerate() {
        let negative = || u + tau <= u_max && trajectory[u..=u + tau].iter().all(|q| *q == minus_one);
        let (classification, witness) = if k.is_zero() {
            (Classification::NonnegativeInteger, Int::zero())
        } else if *k == minus_one && negative() {
            (Classification::NegativeInteger, -Int::one())
        } else {
            continue;
        };
        let mu = digit_residues(&tab, v, u)?.mu;
        let value = match classification {
            Classification::NegativeInteger => mu - spec.m_power(SumKind::F, v as i64, u),
            _ => mu,
        };
        return Ok(SuffixReport {
            verdict: Some(IntegralityVerdict { classification, value: Some(value), witness }),
            decided_at: Some(u),
            trajectory,
        });
    }
    Ok(SuffixReport { verdict: None, decided_at: None, trajectory })
}

/// `n = Σ_w m^{F_w} l^{Ē_{τ-1-w}} = l^{Ē_τ} μ - m^{F_τ} λ` for unit translations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothDecomposition {
    pub n: Int,
    pub denominator: Int,
    pub mu: Int,
    pub lambda: Int,
    pub l_power: Int,
    pub m_power: Int,
}

pub fn smooth_decompose(m: &Int, l: &Int, f: &[u32], e: &[u32]) -> Result<SmoothDecomposition> {
    let ones = alloc::vec![Int::one(); e.len()];
    let spec = OrbitSpec::new(sequence_from_exponents(m, l, f, e, &ones)?)?;
    let tau = spec.tau();
    let (n, d) = spec.numerator_denominator(0);
    let smooth: Int = (0..tau)
        .map(|w| spec.m_power(SumKind::F, 0, w) * spec.l_power(SumKind::EBar, 0, tau - 1 - w))
        .sum();
    if &smooth != n {
        return Err(Error::Invariant(alloc::format!("smooth sum {smooth} differs from numerator {n}")));
    }
    let res = direct_residues(&spec, 0, tau)?;
    let l_power = spec.l_power(SumKind::EBar, 0, tau);
    let m_power = spec.m_power(SumKind::F, 0, tau);
    if &l_power * &res.mu - &m_power * &res.lambda != smooth {
        return Err(Error::Invariant(alloc::format!("smooth decomposition of {smooth} fails")));
    }
    Ok(SmoothDecomposition { n: smooth, denominator: d.clone(), mu: res.mu, lambda: res.lambda, l_power, m_power })
}

/// Exhaustive search over `f = 1^τ` and all `e` with `τ <= Σe <= esum_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub m: Int,
    pub l: Int,
    pub translation: Int,
    pub tau_min: usize,
    pub tau_max: usize,
    pub esum_max: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchHit {
    pub tau: usize,
    pub e: Vec<u32>,
    pub v: usize,
    pub value: Int,
    pub classification: Classification,
}

/// All compositions of `total` into `parts` positive parts, lexicographic.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn fill(rest: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..=rest.saturating_sub(parts as u32 - 1) {
            prefix.push(first);
            fill(rest - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 && total as usize >= parts {
        fill(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// True when no rotation of `e` is lexicographically smaller.
pub fn is_canonical_rotation(e: &[u32]) -> bool {
    (1..e.len()).all(|k| {
        let rotated = e[k..].iter().chain(&e[..k]);
        e.iter().cmp(rotated) != core::cmp::Ordering::Greater
    })
}

fn search_composition(cfg: &SearchConfig, e: &[u32]) -> Result<Vec<SearchHit>> {
    let tau = e.len();
    let f = alloc::vec![1u32; tau];
    let a = alloc::vec![cfg.translation.clone(); tau];
    let spec = OrbitSpec::new(sequence_from_exponents(&cfg.m, &cfg.l, &f, e, &a)?)?;
    let mut hits = Vec::new();
    for v in 0..tau {
        let verdict = prefix_test(&spec, v)?;
        if let Some(value) = verdict.value {
            hits.push(SearchHit { tau, e: e.to_vec(), v, value, classification: verdict.classification });
        }
    }
    Ok(hits)
}

/// Integral hits over canonical rotations, sorted by `τ`, then `e`, then `v`.
pub fn search_cycles(cfg: &SearchConfig) -> Result<Vec<SearchHit>> {
    let mut candidates = Vec::new();
    for tau in cfg.tau_min.max(1)..=cfg.tau_max {
        for total in tau as u32..=cfg.esum_max {
            candidates.extend(compositions(total, tau).into_iter().filter(|e| is_canonical_rotation(e)));
        }
    }
    let per_candidate = run_candidates(cfg, &candidates)?;
    let mut hits: Vec<SearchHit> = per_candidate.into_iter().flatten().collect();
    hits.sort_by(|x, y| (x.tau, &x.e, x.v).cmp(&(y.tau, &y.e, y.v)));
    Ok(hits)
}

#[cfg(feature = "parallel")]
fn run_candidates(cfg: &SearchConfig, candidates: &[Vec<u32>]) -> Result<Vec<Vec<SearchHit>>> {
    use rayon::prelude::*;
    candidates.par_iter().map(|e| search_composition(cfg, e)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_candidates(cfg: &SearchConfig, candidates: &[Vec<u32>]) -> Result<Vec<Vec<SearchHit>>> {
    candidates.iter().map(|e| search_composition(cfg, e)).collect()
}

/// `as_integer` of the iterate, for callers cross-checking verdicts.
pub fn exact_iterate(spec: &OrbitSpec, v: usize) -> Option<Int> {
    as_integer(&spec.iterate_value(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::engine::DigitTableau;
    use alloc::collections::BTreeSet;
    use alloc::vec;
    use proptest::prelude::*;

    fn spec(m: i64, l: i64, f: &[u32], e: &[u32], a: &[i64]) -> OrbitSpec {
        let a: Vec<Int> = a.iter().map(|&x| int(x)).collect();
        OrbitSpec::new(sequence_from_exponents(&int(m), &int(l), f, e, &a).unwrap()).unwrap()
    }

    fn seven_cycle() -> OrbitSpec {
        spec(3, 2, &[1; 7], &[4, 1, 1, 2, 1, 1, 1], &[-1; 7])
    }

    fn r(n: i64) -> Rational {
        Rational::from_integer(int(n))
    }

    #[test]
    fn residue_examples() {
        let tab = DigitTableau::with_stages(seven_cycle(), 7).unwrap();
        let res = prefix_residues(&tab, 0, 7).unwrap();
        assert_eq!((res.mu, res.lambda), (int(17), int(17)));
        let tab = DigitTableau::with_stages(spec(3, 2, &[1], &[2], &[1]), 1).unwrap();
        let res = prefix_residues(&tab, 0, 1).unwrap();
        assert_eq!((res.mu, res.lambda), (int(1), int(1)));
        let res = prefix_residues(&tab, 0, 0).unwrap();
        assert_eq!((res.mu, res.lambda), (int(0), int(0)));
    }

    #[test]
    fn decomposition_examples() {
        let cases: [(OrbitSpec, i64, i64, i64, i64); 3] = [
            (seven_cycle(), -2363, -139, 17, 17),
            (spec(3, 2, &[1, 1], &[1, 1], &[1, 1]), 5, -5, 8, 3),
            (spec(3, 2, &[1], &[2], &[1]), 1, 1, 1, 1),
        ];
        for (s, n, d, mu, lambda) in cases {
            assert_eq!(s.numerator_denominator(0), (&int(n), &int(d)));
            let tau = s.tau();
            let tab = DigitTableau::with_stages(s, tau).unwrap();
            let dec = numerator_decomposition(&tab, 0).unwrap();
            assert_eq!((dec.residues.mu, dec.residues.lambda), (int(mu), int(lambda)));
        }
    }

    #[test]
    fn decomposition_needs_full_period() {
        let tab = DigitTableau::with_stages(seven_cycle(), 3).unwrap();
        assert!(matches!(numerator_decomposition(&tab, 0), Err(Error::Range { .. })));
    }

    #[test]
    fn prefix_test_examples() {
        let v = prefix_test(&seven_cycle(), 0).unwrap();
        assert_eq!(v, IntegralityVerdict {
            classification: Classification::NonnegativeInteger,
            value: Some(int(17)),
            witness: int(0)
        });

        let v = prefix_test(&spec(3, 2, &[1, 1], &[1, 1], &[1, 1]), 0).unwrap();
        assert_eq!(v.classification, Classification::NegativeInteger);
        assert_eq!(v.value, Some(int(-1)));

        let s = spec(3, 2, &[1, 1], &[2, 2], &[1, 1]);
        assert_eq!(s.numerator_denominator(0), (&int(7), &int(7)));
        assert_eq!(prefix_test(&s, 0).unwrap().value, Some(int(1)));

        let s = spec(3, 2, &[1, 1], &[1, 3], &[1, 1]);
        assert_eq!(s.numerator_denominator(0), (&int(11), &int(7)));
        let v = prefix_test(&s, 0).unwrap();
        assert_eq!(v, IntegralityVerdict { classification: Classification::NonInteger, value: None, witness: int(2) });
    }

    #[test]
    fn prefix_test_seven_cycle_all_iterates() {
        let s = seven_cycle();
        let tab = DigitTableau::with_stages(s.clone(), 7).unwrap();
        let values: Vec<Int> = (0..7).map(|v| prefix_test_with_tableau(&tab, v).unwrap().value.unwrap()).collect();
        let expected: Vec<Int> = [17, 91, 61, 41, 55, 37, 25].iter().map(|&x| int(x)).collect();
        assert_eq!(values, expected);
    }

    #[test]
    fn suffix_test_examples() {
        let rep = suffix_test(&seven_cycle(), 0, 7).unwrap();
        let verdict = rep.verdict.unwrap();
        assert_eq!(verdict.classification, Classification::NonnegativeInteger);
        assert_eq!(verdict.value, Some(int(17)));
        assert_eq!(rep.decided_at, Some(3));
        assert_eq!(rep.trajectory[0], r(17));
        assert_eq!(rep.trajectory[1], r(5));

        let rep = suffix_test(&spec(3, 2, &[1, 1], &[2, 1], &[-1, -1]), 0, 4).unwrap();
        assert_eq!(rep.verdict.unwrap().value, Some(int(5)));

        let rep = suffix_test(&spec(3, 2, &[1, 1], &[1, 1], &[1, 1]), 0, 2).unwrap();
        let verdict = rep.verdict.unwrap();
        assert_eq!(verdict.classification, Classification::NegativeInteger);
        assert_eq!(verdict.value, Some(int(-1)));
    }

    #[test]
    fn suffix_test_inconclusive() {
        let rep = suffix_test(&spec(3, 2, &[1, 1], &[1, 3], &[1, 1]), 0, 6).unwrap();
        assert!(!rep.is_conclusive());
        assert_eq!(rep.trajectory.len(), 7);
        assert_eq!(rep.trajectory[0], Rational::new(int(11), int(7)));
        let rep = suffix_test(&spec(3, 2, &[1, 1], &[1, 1], &[1, 1]), 0, 1).unwrap();
        assert!(!rep.is_conclusive());
    }

    #[test]
    fn smooth_examples() {
        let s = smooth_decompose(&int(3), &int(2), &[1, 1], &[1, 1]).unwrap();
        assert_eq!((s.n, s.mu, s.lambda), (int(5), int(8), int(3)));
        let s = smooth_decompose(&int(3), &int(2), &[1], &[2]).unwrap();
        assert_eq!((s.n, s.mu, s.lambda), (int(1), int(1), int(1)));
        let s = smooth_decompose(&int(3), &int(2), &[1, 1, 1], &[1, 1, 1]).unwrap();
        assert_eq!((s.n, s.denominator, s.mu, s.lambda), (int(19), int(-19), int(26), int(7)));
    }

    #[test]
    fn composition_enumeration() {
        assert_eq!(compositions(4, 2), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert_eq!(compositions(3, 3), vec![vec![1, 1, 1]]);
        assert!(compositions(2, 3).is_empty());
        assert_eq!(compositions(12, 7).len(), 462);
        assert!(is_canonical_rotation(&[1, 1, 2]));
        assert!(!is_canonical_rotation(&[1, 2, 1]));
        assert!(is_canonical_rotation(&[2, 2]));
    }

    fn positive_sets(hits: &[SearchHit]) -> BTreeSet<Vec<Int>> {
        let mut by_cycle: alloc::collections::BTreeMap<(usize, Vec<u32>), BTreeSet<Int>> = Default::default();
        for hit in hits.iter().filter(|h| h.value.is_positive()) {
            by_cycle.entry((hit.tau, hit.e.clone())).or_default().insert(hit.value.clone());
        }
        by_cycle.into_values().map(|s| s.into_iter().collect()).collect()
    }

    #[test]
    fn small_searches() {
        let cfg = |a, tau_max, esum_max| SearchConfig {
            m: int(3),
            l: int(2),
            translation: int(a),
            tau_min: 1,
            tau_max,
            esum_max,
        };
        let hits = search_cycles(&cfg(-1, 1, 1)).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!((hits[0].e.clone(), hits[0].value.clone()), (vec![1], int(1)));

        let hits = search_cycles(&cfg(1, 3, 6)).unwrap();
        let expected: BTreeSet<Vec<Int>> = [vec![int(1)]].into_iter().collect();
        assert_eq!(positive_sets(&hits), expected);
        let negatives: BTreeSet<Int> = hits.iter().filter(|h| h.value.is_negative()).map(|h| h.value.clone()).collect();
        assert!(negatives.contains(&int(-1)) && negatives.contains(&int(-5)));
        assert!(hits.windows(2).all(|w| (w[0].tau, &w[0].e, w[0].v) < (w[1].tau, &w[1].e, w[1].v)));
    }

    fn arb_spec() -> impl Strategy<Value = OrbitSpec> {
        let pairs = prop::sample::select(vec![(2i64, 3i64), (3, 2), (2, 5), (5, 2), (3, 5), (5, 3), (2, 7), (7, 3), (5, 7)]);
        (pairs, 1usize..=4).prop_flat_map(|((m, l), tau)| {
            (
                Just((m, l)),
                prop::collection::vec(1u32..=2, tau),
                prop::collection::vec(1u32..=4, tau),
                prop::collection::vec(prop::sample::select(vec![-7i64, -1, 1, 11, 13]), tau),
            )
                .prop_filter_map("translation must be a unit", |((m, l), f, e, a)| {
                    let a: Vec<Int> = a.iter().map(|&x| int(x)).collect();
                    let seq = sequence_from_exponents(&int(m), &int(l), &f, &e, &a).ok()?;
                    OrbitSpec::new(seq).ok()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn residue_recurrence(spec in arb_spec()) {
            let tau = spec.tau();
            let tab = DigitTableau::with_stages(spec.clone(), tau).unwrap();
            let cyl = tab.cylinder();
            let seq = spec.sequence();
            for v in 0..tau {
                let vi = v as i64;
                for u in 1..=tau {
                    let lambda_next = prefix_residues(&tab, (v + 1) % tau, u).unwrap().lambda;
                    let lambda = prefix_residues(&tab, v, u).unwrap().lambda;
                    let lhs = seq.m_pow(vi) * lambda_next + seq.a(vi);
                    let rhs = (lambda + spec.l_power(SumKind::EBar, vi, u - 1) * cyl.entry(vi - u as i64, u)) * seq.l_pow(vi);
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }

        #[test]
        fn decomposition_and_tests_agree(spec in arb_spec()) {
            let tau = spec.tau();
            let u_max = 3 * tau;
            let tab = DigitTableau::with_stages(spec.clone(), u_max).unwrap();
            let mut integral = Vec::new();
            for v in 0..tau {
                numerator_decomposition(&tab, v).unwrap();
                let verdict = prefix_test_with_tableau(&tab, v).unwrap();
                prop_assert_eq!(verdict.value.clone(), exact_iterate(&spec, v));
                integral.push(verdict.classification.is_integer());
                let suffix = suffix_test(&spec, v, u_max).unwrap();
                if let Some(s) = suffix.verdict {
                    prop_assert_eq!(s.value, verdict.value);
                    prop_assert_eq!(s.classification, verdict.classification);
                }
            }
            prop_assert!(integral.iter().all(|&x| x == integral[0]));
        }

        #[test]
        fn quotients_agree_along_diagonal(spec in arb_spec()) {
            let tau = spec.tau();
            let cyl = DigitTableau::with_stages(spec.clone(), 2 * tau).unwrap().cylinder();
            for v in 0..tau {
                for u in 0..=2 * tau {
                    let k = m_quotient(&spec, v, u).unwrap();
                    prop_assert_eq!(&k, &l_quotient(&spec, (v + u) % tau, u).unwrap());
                    prop_assert_eq!(k, cyl.quotient(v, u).unwrap());
                }
            }
        }
    }
}
