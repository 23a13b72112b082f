//! (m,l)-systems: translations, admissible pairs and their witnesses,
//! the dual-radix and l-adic maps, and construction of admissible sequences.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::arith::{
    canonical_residue, coprime, exact_div, int, mod_inverse, modulo, mult_order, pow,
    rational_valuation, Int, Rational,
};
use crate::error::{Error, Result};

pub(crate) fn cyclic(v: i64, tau: usize) -> usize {
    v.rem_euclid(tau as i64) as usize
}

/// Bases, m-adic grading and the translation entries `a_{v,i}` of an (m,l)-system.
///
/// Only the entries `(v, i)` that an orbit actually exercises are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemParams {
    m: Int,
    l: Int,
    f: Vec<u32>,
    translations: Vec<BTreeMap<Int, Int>>,
}

impl SystemParams {
    pub fn new(m: Int, l: Int, f: Vec<u32>) -> Result<Self> {
        check_bases(&m, &l)?;
        if f.is_empty() {
            return Err(Error::Domain("system order must be at least 1"));
        }
        if f.contains(&0) {
            return Err(Error::Domain("m-adic grading entries must be positive"));
        }
        let translations = alloc::vec![BTreeMap::new(); f.len()];
        Ok(Self { m, l, f, translations })
    }

    pub fn m(&self) -> &Int {
        &self.m
    }

    pub fn l(&self) -> &Int {
        &self.l
    }

    pub fn order(&self) -> usize {
        self.f.len()
    }

    pub fn grading(&self) -> &[u32] {
        &self.f
    }

    /// `a_{v,i}`; the entry for `i = 0` is always zero.
    pub fn translation(&self, v: usize, i: &Int) -> Option<Int> {
        if i.is_zero() {
            return Some(Int::zero());
        }
        self.translations[v].get(i).cloned()
    }

    /// Records `a_{v,i}` after checking `a = -m^{f_v} i (mod l)` and that `a`
    /// is a unit modulo both `m` and `l`.
    pub fn insert_translation(&mut self, v: usize, i: Int, a: Int) -> Result<()> {
        if v >= self.order() {
            return Err(Error::Range { requested: v, available: self.order() });
        }
        if i <= Int::zero() || i >= self.l {
            return Err(Error::Domain("residue class must lie in [1, l)"));
        }
        let scaled = pow(&self.m, self.f[v]) * &i;
        if !modulo(&(&a + scaled), &self.l).is_zero() {
            return Err(Error::Domain("translation must satisfy a = -m^f i (mod l)"));
        }
        if !coprime(&a, &self.m) || !coprime(&a, &self.l) {
            return Err(Error::Domain("translation must be coprime to m and l"));
        }
        match self.translations[v].get(&i) {
            Some(existing) if *existing != a => Err(Error::Domain("conflicting translation entry")),
            _ => {
                self.translations[v].insert(i, a);
                Ok(())
            }
        }
    }
}

fn check_bases(m: &Int, l: &Int) -> Result<()> {
    if *m < int(2) || *l < int(2) {
        return Err(Error::Domain("bases must be at least 2"));
    }
    if !coprime(m, l) {
        return Err(Error::Domain("bases must be coprime"));
    }
    Ok(())
}

/// A solution `(e, r)` of `l^e s = m^f r + a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub e: u32,
    pub r: Int,
}

/// All witness exponents of a pair: `e_min + k * period` for `k >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessProgression {
    pub e_min: u32,
    pub period: u32,
}

impl WitnessProgression {
    /// Exponent of the witness of height `h` (heights start at 1).
    pub fn exponent(&self, h: u32) -> u32 {
        self.e_min + (h - 1) * self.period
    }

    /// Height whose witness has exponent `e`, if any.
    pub fn height_of(&self, e: u32) -> Option<u32> {
        (e >= self.e_min && (e - self.e_min).is_multiple_of(self.period))
            .then(|| (e - self.e_min) / self.period + 1)
    }
}

fn check_residue(m: &Int, f: u32, s: &Int) -> Result<Int> {
    let modulus = pow(m, f);
    if *s < Int::one() || *s >= modulus {
        return Err(Error::Domain("residue must lie in [1, m^f)"));
    }
    if !coprime(s, m) {
        return Err(Error::Domain("residue must be coprime to m"));
    }
    Ok(modulus)
}

/// The exponents `e >= 1` for which `l^e s = a (mod m^f)`.
pub fn witness_exponents(m: &Int, f: u32, l: &Int, s: &Int, a: &Int) -> Result<WitnessProgression> {
    check_bases(m, l)?;
    if f == 0 {
        return Err(Error::Domain("m-adic grade must be positive"));
    }
    let modulus = check_residue(m, f, s)?;
    if modulo(a, l).is_zero() {
        return Err(Error::NotAdmissible);
    }
    let period = mult_order(l, &modulus)?;
    let period = u32::try_from(period).map_err(|_| Error::Domain("multiplicative order too large"))?;
    let target = modulo(a, &modulus);
    let base = modulo(l, &modulus);
    let mut acc = modulo(&(&base * s), &modulus);
    for e in 1..=period {
        if acc == target {
            return Ok(WitnessProgression { e_min: e, period });
        }
        acc = modulo(&(acc * &base), &modulus);
    }
    Err(Error::NotAdmissible)
}

/// The height-`h` witness of the pair `(s, a)`.
pub fn find_witness(m: &Int, f: u32, l: &Int, s: &Int, a: &Int, h: u32) -> Result<Witness> {
    if h == 0 {
        return Err(Error::Domain("height must be at least 1"));
    }
    let progression = witness_exponents(m, f, l, s, a)?;
    let e = progression.exponent(h);
    let m_f = pow(m, f);
    let l_e = pow(l, e);
    let bound = if m_f > l_e { &m_f } else { &l_e };
    if a.abs() >= *bound {
        return Err(Error::Constraint);
    }
    let r = exact_div(&(&l_e * s - a), &m_f, "witness equation")?;
    if r < Int::one() || r >= l_e {
        return Err(Error::Invariant(alloc::format!("witness addend {r} outside [1, l^{e})")));
    }
    Ok(Witness { e, r })
}

/// Whether `(s, a)` admits a witness at some height.
pub fn is_admissible(m: &Int, f: u32, l: &Int, s: &Int, a: &Int) -> bool {
    witness_exponents(m, f, l, s, a).is_ok()
}

/// The dual-radix image of `x` under a single pair; `x` itself when the
/// pair is not admissible.
pub fn dual_radix_image(m: &Int, f: u32, l: &Int, s: &Int, a: &Int, h: u32, x: &Rational) -> Result<Rational> {
    let m_f = pow(m, f);
    if canonical_residue(x, &m_f).map_err(|_| Error::Precondition("x must be an m-adic integer"))? != *s {
        return Err(Error::Precondition("x must be congruent to s modulo m^f"));
    }
    match find_witness(m, f, l, s, a, h) {
        Ok(w) => Ok(apply_dual(&m_f, &pow(l, w.e), s, &w.r, x)),
        Err(Error::NotAdmissible) => Ok(x.clone()),
        Err(err) => Err(err),
    }
}

fn apply_dual(m_f: &Int, l_e: &Int, s: &Int, r: &Int, x: &Rational) -> Rational {
    let shifted = (x - Rational::from_integer(s.clone())) / Rational::from_integer(m_f.clone());
    shifted * Rational::from_integer(l_e.clone()) + Rational::from_integer(r.clone())
}

/// Per-index data `(s_v, a_v, h_v)` of an admissible sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tuple {
    pub s: Int,
    pub a: Int,
    pub h: u32,
}

/// A length-`τ` admissible sequence, read cyclically, with its derived witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSequence {
    params: SystemParams,
    tuples: Vec<Tuple>,
    witnesses: Vec<Witness>,
    m_pows: Vec<Int>,
    l_pows: Vec<Int>,
}

impl AdmissibleSequence {
    pub fn new(m: Int, l: Int, f: Vec<u32>, tuples: Vec<Tuple>) -> Result<Self> {
        let mut params = SystemParams::new(m, l, f)?;
        if tuples.len() != params.order() {
            return Err(Error::Domain("one tuple per system index is required"));
        }
        let mut witnesses = Vec::with_capacity(tuples.len());
        for (v, t) in tuples.iter().enumerate() {
            let w = find_witness(params.m(), params.f[v], params.l(), &t.s, &t.a, t.h)?;
            params.insert_translation(v, modulo(&w.r, params.l()), t.a.clone())?;
            witnesses.push(w);
        }
        let m_pows = params.f.iter().map(|&f| pow(params.m(), f)).collect();
        let l_pows = witnesses.iter().map(|w| pow(params.l(), w.e)).collect();
        Ok(Self { params, tuples, witnesses, m_pows, l_pows })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn m(&self) -> &Int {
        self.params.m()
    }

    pub fn l(&self) -> &Int {
        self.params.l()
    }

    pub fn tau(&self) -> usize {
        self.tuples.len()
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn witnesses(&self) -> &[Witness] {
        &self.witnesses
    }

    fn at(&self, v: i64) -> usize {
        cyclic(v, self.tau())
    }

    pub fn f(&self, v: i64) -> u32 {
        self.params.f[self.at(v)]
    }

    pub fn e(&self, v: i64) -> u32 {
        self.witnesses[self.at(v)].e
    }

    pub fn s(&self, v: i64) -> &Int {
        &self.tuples[self.at(v)].s
    }

    pub fn a(&self, v: i64) -> &Int {
        &self.tuples[self.at(v)].a
    }

    pub fn h(&self, v: i64) -> u32 {
        self.tuples[self.at(v)].h
    }

    pub fn r(&self, v: i64) -> &Int {
        &self.witnesses[self.at(v)].r
    }

    /// `m^{f_v}`.
    pub fn m_pow(&self, v: i64) -> &Int {
        &self.m_pows[self.at(v)]
    }

    /// `l^{e_v}`.
    pub fn l_pow(&self, v: i64) -> &Int {
        &self.l_pows[self.at(v)]
    }

    pub fn f_seq(&self) -> Vec<u32> {
        self.params.f.clone()
    }

    pub fn e_seq(&self) -> Vec<u32> {
        self.witnesses.iter().map(|w| w.e).collect()
    }

    pub fn a_seq(&self) -> Vec<Int> {
        self.tuples.iter().map(|t| t.a.clone()).collect()
    }

    /// `l^{e_v} (x - s_v) / m^{f_v} + r_v` for `x = s_v (mod m^{f_v})`.
    pub fn dual_radix_map(&self, v: usize, x: &Rational) -> Result<Rational> {
        let v = v as i64;
        if !coprime(x.denom(), self.l()) {
            return Err(Error::Precondition("x must have denominator coprime to l"));
        }
        let residue =
            canonical_residue(x, self.m_pow(v)).map_err(|_| Error::Precondition("x must be an m-adic integer"))?;
        if residue != *self.s(v) {
            return Err(Error::Precondition("x must be congruent to s_v modulo m^{f_v}"));
        }
        Ok(apply_dual(self.m_pow(v), self.l_pow(v), self.s(v), self.r(v), x))
    }

    /// `(m^{f_v} x + a_{v,i}) / l^{ν_l(...)}` where `i = x mod l`; for `i = 0`
    /// the map strips the l-power from `x`.
    pub fn l_adic_map(&self, v: usize, x: &Rational) -> Result<Rational> {
        let l = self.l();
        if !coprime(x.denom(), l) {
            return Err(Error::Domain("x must have denominator coprime to l"));
        }
        let i = canonical_residue(x, l)?;
        let (numerator, e) = if i.is_zero() {
            if x.is_zero() {
                return Err(Error::Domain("l-adic map is undefined at zero"));
            }
            (x.clone(), rational_valuation(l, x)?)
        } else {
            let a = self
                .params
                .translation(cyclic(v as i64, self.tau()), &i)
                .ok_or(Error::Domain("no translation stored for this residue class"))?;
            let y = Rational::from_integer(self.m_pow(v as i64).clone()) * x + Rational::from_integer(a);
            let e = rational_valuation(l, &y)?;
            (y, e)
        };
        let e = u32::try_from(e).map_err(|_| Error::Invariant("negative l-adic valuation".into()))?;
        Ok(numerator / Rational::from_integer(pow(l, e)))
    }
}

/// Builds the sequence with `s_v = a_v (l^{e_v})^{-1} (mod m^{f_v})`, so that
/// `e_v` is a witness exponent of `(s_v, a_v)`; the height is recovered from it.
pub fn sequence_from_exponents(m: &Int, l: &Int, f: &[u32], e: &[u32], a: &[Int]) -> Result<AdmissibleSequence> {
    check_bases(m, l)?;
    if f.len() != e.len() || f.len() != a.len() || f.is_empty() {
        return Err(Error::Domain("f, e and a must have the same positive length"));
    }
    if e.contains(&0) || f.contains(&0) {
        return Err(Error::Domain("exponents must be positive"));
    }
    let mut tuples = Vec::with_capacity(f.len());
    for v in 0..f.len() {
        if !coprime(&a[v], m) || !coprime(&a[v], l) {
            return Err(Error::Domain("translation must be coprime to m and l"));
        }
        let m_f = pow(m, f[v]);
        let s = modulo(&(&a[v] * mod_inverse(&pow(l, e[v]), &m_f)?), &m_f);
        let h = witness_exponents(m, f[v], l, &s, &a[v])?
            .height_of(e[v])
            .ok_or(Error::NotAdmissible)?;
        tuples.push(Tuple { s, a: a[v].clone(), h });
    }
    let seq = AdmissibleSequence::new(m.clone(), l.clone(), f.to_vec(), tuples)?;
    for v in 0..f.len() {
        let expected = modulo(&(&a[v] * mod_inverse(&-seq.m_pow(v as i64), seq.l_pow(v as i64))?), seq.l_pow(v as i64));
        if seq.e(v as i64) != e[v] || *seq.r(v as i64) != expected {
            return Err(Error::Invariant(alloc::format!("witness at index {v} does not reproduce e_v")));
        }
    }
    Ok(seq)
}

/// A cycle found by forward iteration, stored in the backward orientation:
/// `T(iterates[v + 1]) = iterates[v]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleIngest {
    pub sequence: AdmissibleSequence,
    pub iterates: Vec<Int>,
}

/// Iterates `T(x) = (m^f x + a) / l^{ν_l(m^f x + a)}` from `seed` until a value
/// repeats, then converts the cycle into an admissible sequence.
pub fn sequence_from_cycle(m: &Int, l: &Int, f: u32, a: &Int, seed: &Int, budget: usize) -> Result<CycleIngest> {
    check_bases(m, l)?;
    if f == 0 {
        return Err(Error::Domain("m-adic grade must be positive"));
    }
    if modulo(seed, l).is_zero() {
        return Err(Error::Domain("seed must not be divisible by l"));
    }
    let m_f = pow(m, f);
    let step = |x: &Int| -> Result<(Int, u32)> {
        let y = &m_f * x + a;
        if y.is_zero() {
            return Err(Error::Domain("orbit reaches zero"));
        }
        let e = crate::arith::valuation(l, &y)?;
        if e == 0 {
            return Err(Error::Domain("orbit leaves the admissible residue classes"));
        }
        Ok((y / pow(l, e), e))
    };
    let mut seen: BTreeMap<Int, usize> = BTreeMap::new();
    let mut forward: Vec<Int> = Vec::new();
    let mut x = seed.clone();
    let start = loop {
        if let Some(&at) = seen.get(&x) {
            break at;
        }
        if forward.len() >= budget {
            return Err(Error::NoCycleFound { budget });
        }
        seen.insert(x.clone(), forward.len());
        forward.push(x.clone());
        x = step(&x)?.0;
    };
    let cycle = &forward[start..];
    let tau = cycle.len();
    let iterates: Vec<Int> = (0..tau).map(|v| cycle[(tau - v) % tau].clone()).collect();
    let mut e = Vec::with_capacity(tau);
    for v in 0..tau {
        let (image, ev) = step(&iterates[(v + 1) % tau])?;
        debug_assert_eq!(image, iterates[v]);
        e.push(ev);
    }
    let sequence = sequence_from_exponents(m, l, &alloc::vec![f; tau], &e, &alloc::vec![a.clone(); tau])?;
    for (v, n) in iterates.iter().enumerate() {
        if modulo(n, &m_f) != *sequence.s(v as i64) {
            return Err(Error::Invariant(alloc::format!("iterate {v} does not match s_v")));
        }
    }
    Ok(CycleIngest { sequence, iterates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn i(v: i64) -> Int {
        int(v)
    }

    fn q(v: i64) -> Rational {
        Rational::from_integer(int(v))
    }

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    pub(crate) fn seven_cycle() -> AdmissibleSequence {
        sequence_from_exponents(&i(3), &i(2), &[1; 7], &[4, 1, 1, 2, 1, 1, 1], &vec![i(-1); 7]).unwrap()
    }

    #[test]
    fn witness_examples() {
        assert_eq!(find_witness(&i(3), 1, &i(2), &i(2), &i(-1), 2).unwrap(), Witness { e: 4, r: i(11) });
        assert_eq!(find_witness(&i(3), 1, &i(2), &i(1), &i(-1), 1).unwrap(), Witness { e: 1, r: i(1) });
        assert_eq!(find_witness(&i(3), 1, &i(2), &i(2), &i(1), 1).unwrap(), Witness { e: 1, r: i(1) });
    }

    #[test]
    fn witness_errors_are_distinct() {
        // 2 generates {1, 2, 4} mod 7, so s = 3 is unreachable from a = 1
        assert_eq!(find_witness(&i(7), 1, &i(2), &i(3), &i(1), 1), Err(Error::NotAdmissible));
        // 2 * 6 = -9 (mod 7) at e = 1, but |a| = 9 >= max(7, 2)
        assert_eq!(find_witness(&i(7), 1, &i(2), &i(6), &i(-9), 1), Err(Error::Constraint));
        assert_eq!(find_witness(&i(7), 1, &i(2), &i(6), &i(-9), 2).map(|w| w.e), Ok(4));
        assert!(matches!(find_witness(&i(3), 1, &i(2), &i(3), &i(-1), 1), Err(Error::Domain(_))));
        assert!(matches!(find_witness(&i(3), 1, &i(2), &i(2), &i(-1), 0), Err(Error::Domain(_))));
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&i(3), 1, &i(2), &i(2), &i(-1)));
        assert!(!is_admissible(&i(3), 1, &i(2), &i(3), &i(-1)));
        assert!(is_admissible(&i(3), 1, &i(2), &i(1), &i(-1)));
        assert!(!is_admissible(&i(7), 1, &i(2), &i(3), &i(1)));
    }

    #[test]
    fn seven_cycle_sequence() {
        let seq = seven_cycle();
        assert_eq!(seq.tuples().iter().map(|t| t.s.clone()).collect::<Vec<_>>(), ints(&[2, 1, 1, 2, 1, 1, 1]));
        assert_eq!(seq.witnesses().iter().map(|w| w.r.clone()).collect::<Vec<_>>(), ints(&[11, 1, 1, 3, 1, 1, 1]));
        assert_eq!(seq.e_seq(), vec![4, 1, 1, 2, 1, 1, 1]);
        assert_eq!(seq.h(0), 2);
        assert_eq!(seq.h(3), 1);
        assert_eq!(seq.e(-1), 1);
    }

    #[test]
    fn trivial_cycle_sequence() {
        let seq = sequence_from_exponents(&i(3), &i(2), &[1], &[2], &[i(1)]).unwrap();
        assert_eq!(seq.s(0), &i(1));
        assert_eq!(seq.r(0), &i(1));
        assert!(sequence_from_exponents(&i(3), &i(2), &[1], &[1], &[i(2)]).is_err());
    }

    #[test]
    fn dual_radix_map_examples() {
        let seq = seven_cycle();
        assert_eq!(seq.dual_radix_map(0, &q(17)).unwrap(), q(91));
        assert_eq!(seq.dual_radix_map(1, &q(91)).unwrap(), q(61));
        assert!(matches!(seq.dual_radix_map(0, &q(16)), Err(Error::Precondition(_))));
        assert_eq!(dual_radix_image(&i(7), 1, &i(2), &i(3), &i(1), 1, &q(10)).unwrap(), q(10));
        assert!(dual_radix_image(&i(7), 1, &i(2), &i(3), &i(1), 1, &q(11)).is_err());
    }

    #[test]
    fn l_adic_map_examples() {
        let seq = seven_cycle();
        assert_eq!(seq.l_adic_map(0, &q(91)).unwrap(), q(17));
        assert_eq!(seq.l_adic_map(3, &q(55)).unwrap(), q(41));
        assert_eq!(seq.l_adic_map(2, &q(8)).unwrap(), q(1));
        assert!(matches!(seq.l_adic_map(2, &q(0)), Err(Error::Domain(_))));
        assert!(seq.l_adic_map(2, &Rational::new(i(1), i(2))).is_err());
    }

    #[test]
    fn cycle_ingestion_examples() {
        let c = sequence_from_cycle(&i(3), &i(2), 1, &i(-1), &i(17), 1000).unwrap();
        assert_eq!(c.iterates, ints(&[17, 91, 61, 41, 55, 37, 25]));
        assert_eq!(c.sequence.e_seq(), vec![4, 1, 1, 2, 1, 1, 1]);
        assert_eq!(c.sequence, seven_cycle());

        let c = sequence_from_cycle(&i(3), &i(2), 1, &i(1), &i(1), 1000).unwrap();
        assert_eq!(c.iterates, ints(&[1]));
        assert_eq!(c.sequence.e_seq(), vec![2]);

        let c = sequence_from_cycle(&i(3), &i(2), 1, &i(-1), &i(5), 1000).unwrap();
        assert_eq!(c.iterates, ints(&[5, 7]));
        assert_eq!(c.sequence.e_seq(), vec![2, 1]);
    }

    #[test]
    fn cycle_ingestion_from_transient_seed() {
        // 3x-1 from 9: 9 -> 13 -> 19 -> 7 -> 5 -> 7
        let c = sequence_from_cycle(&i(3), &i(2), 1, &i(-1), &i(9), 1000).unwrap();
        assert_eq!(c.iterates, ints(&[7, 5]));
    }

    #[test]
    fn cycle_ingestion_errors() {
        assert!(matches!(sequence_from_cycle(&i(3), &i(2), 1, &i(-1), &i(4), 10), Err(Error::Domain(_))));
        assert_eq!(
            sequence_from_cycle(&i(3), &i(2), 1, &i(1), &i(27), 5),
            Err(Error::NoCycleFound { budget: 5 })
        );
    }

    #[test]
    fn translation_conditions() {
        let mut p = SystemParams::new(i(3), i(2), vec![1]).unwrap();
        assert!(p.insert_translation(0, i(1), i(-1)).is_ok());
        assert!(p.insert_translation(0, i(1), i(-2)).is_err());
        assert!(p.insert_translation(0, i(1), i(3)).is_err());
        assert!(p.insert_translation(0, i(1), i(1)).is_err());
        assert_eq!(p.translation(0, &i(0)), Some(i(0)));
        assert!(SystemParams::new(i(4), i(2), vec![1]).is_err());
    }

    fn pair_strategy() -> impl Strategy<Value = (i64, u32, i64, i64, i64)> {
        let bases = prop_oneof![
            Just((2i64, 3i64)),
            Just((3, 2)),
            Just((2, 5)),
            Just((5, 2)),
            Just((3, 5)),
            Just((5, 3)),
            Just((2, 7)),
            Just((7, 2)),
            Just((3, 7)),
            Just((7, 3)),
            Just((5, 7)),
            Just((7, 5)),
        ];
        (bases, 1u32..3, any::<u64>(), -50i64..50).prop_map(|((m, l), f, s_seed, a)| {
            let m_f = m.pow(f);
            let s = 1 + (s_seed % (m_f as u64 - 1)) as i64;
            (m, f, l, s, a)
        })
    }

    proptest! {
        #[test]
        fn witness_equation_and_progression((m, f, l, s, a) in pair_strategy(), h in 1u32..4) {
            let (mi, li, si, ai) = (i(m), i(l), i(s), i(a));
            let Ok(prog) = witness_exponents(&mi, f, &li, &si, &ai) else { return Ok(()); };
            // brute-force scan of e <= 3κ
            let m_f = pow(&mi, f);
            let hits: Vec<u32> = (1..=3 * prog.period + prog.e_min)
                .filter(|&e| modulo(&(pow(&li, e) * &si - &ai), &m_f).is_zero())
                .collect();
            let expected: Vec<u32> = (1..=4).map(|h| prog.exponent(h)).take_while(|&e| e <= 3 * prog.period + prog.e_min).collect();
            prop_assert_eq!(hits, expected);
            match find_witness(&mi, f, &li, &si, &ai, h) {
                Ok(w) => {
                    prop_assert_eq!(pow(&li, w.e) * &si, &m_f * &w.r + &ai);
                    prop_assert!(w.r >= Int::one() && w.r < pow(&li, w.e));
                    prop_assert_eq!(prog.height_of(w.e), Some(h));
                }
                Err(Error::Constraint) => {
                    let l_e = pow(&li, prog.exponent(h));
                    prop_assert!(ai.abs() >= core::cmp::max(m_f, l_e));
                }
                Err(e) => prop_assert!(false, "unexpected {:?}", e),
            }
        }

        #[test]
        fn maps_are_mutually_inverse((m, f, l, s, a) in pair_strategy(), k in -1000i64..1000, den in 1i64..50) {
            let (mi, li, si, ai) = (i(m), i(l), i(s), i(a));
            prop_assume!(coprime(&i(den), &mi) && coprime(&i(den), &li));
            let Ok(prog) = witness_exponents(&mi, f, &li, &si, &ai) else { return Ok(()); };
            let Ok(seq) = AdmissibleSequence::new(mi.clone(), li.clone(), vec![f], vec![Tuple { s: si.clone(), a: ai.clone(), h: 1 }]) else {
                return Ok(());
            };
            prop_assert_eq!(seq.e(0), prog.e_min);
            // x = s + m^f * (k / den) lies in the class of s
            let x = Rational::from_integer(si.clone()) + Rational::new(pow(&mi, f) * i(k), i(den));
            // the l-adic map only inverts on l-adic units
            prop_assume!(!canonical_residue(&x, &li).unwrap().is_zero());
            let y = seq.dual_radix_map(0, &x).unwrap();
            prop_assert_eq!(seq.l_adic_map(0, &y).unwrap(), x);
        }

        #[test]
        fn exponents_round_trip((m, f, l, _s, a) in pair_strategy(), e in 1u32..9) {
            let (mi, li, ai) = (i(m), i(l), i(a));
            prop_assume!(coprime(&ai, &mi) && coprime(&ai, &li));
            match sequence_from_exponents(&mi, &li, &[f], &[e], core::slice::from_ref(&ai)) {
                Ok(seq) => prop_assert_eq!(seq.e_seq(), vec![e]),
                Err(Error::Constraint) => {
                    prop_assert!(ai.abs() >= core::cmp::max(pow(&mi, f), pow(&li, e)));
                }
                Err(err) => prop_assert!(false, "unexpected {:?}", err),
            }
        }
    }
}
