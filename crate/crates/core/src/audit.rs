//! Invariant checks over a single orbit, shared by the self-check command and
//! the acceptance suite. Each check returns the number of identities verified.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{Int, Rational};
use crate::engine::{addend_by_diagonal, addend_by_recursion, check_diagonal_differences, DigitTableau, Frontier, Side};
use crate::graded::{graded_division, Gradation};
use crate::integrality::{
    exact_iterate, l_quotient, m_quotient, numerator_decomposition, prefix_residues, prefix_test, suffix_test,
};
use crate::orbit::{OrbitSpec, SumKind};

/// First identity that failed, with its coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditFailure {
    pub check: &'static str,
    pub v: usize,
    pub u: usize,
    pub detail: String,
}

impl fmt::Display for AuditFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} failed at v = {}, u = {}: {}", self.check, self.v, self.u, self.detail)
    }
}

pub type AuditResult = core::result::Result<usize, AuditFailure>;

fn fail(check: &'static str, v: usize, u: usize, detail: impl Into<String>) -> AuditFailure {
    AuditFailure { check, v, u, detail: detail.into() }
}

fn ensure(ok: bool, check: &'static str, v: usize, u: usize, detail: impl FnOnce() -> String) -> AuditResult {
    if ok {
        Ok(1)
    } else {
        Err(fail(check, v, u, detail()))
    }
}

fn ratio(num: Int, den: Int) -> Rational {
    Rational::new(num, den)
}

/// Rotation invariance, splitting and one-step extension of the four
/// exponent sums for `u <= u_max`, plus agreement with direct summation.
pub fn sum_identities(spec: &OrbitSpec, u_max: usize) -> AuditResult {
    const CHECK: &str = "exponent-sum identities";
    let tau = spec.tau();
    let seq = spec.sequence();
    let mut count = 0;
    for v in 0..tau {
        let vi = v as i64;
        for (pre, suf) in [(SumKind::F, SumKind::FBar), (SumKind::E, SumKind::EBar)] {
            let x = |i: i64| u64::from(if pre == SumKind::F { seq.f(i) } else { seq.e(i) });
            let sum = |kind, w: i64, n: usize| spec.exponent_sum(kind, w, n);
            let full = sum(pre, vi, tau);
            for w in 0..=tau {
                let wi = w as i64;
                count += ensure(
                    sum(pre, vi + wi, tau) == full && sum(suf, vi + wi, tau) == full,
                    CHECK,
                    v,
                    w,
                    || format!("{pre:?} full-period sum is not rotation invariant"),
                )?;
                count += ensure(sum(pre, vi + wi, tau - w) == sum(suf, vi, tau - w), CHECK, v, w, || {
                    format!("{pre:?} prefix and suffix windows differ")
                })?;
                count += ensure(full == sum(pre, vi, w) + sum(pre, vi + wi, tau - w), CHECK, v, w, || {
                    format!("{pre:?} period does not split")
                })?;
            }
            for u in 0..=u_max {
                let ui = u as i64;
                let extended = sum(pre, vi, u + 1);
                count += ensure(
                    sum(pre, vi, u) + x(vi + ui) == extended && x(vi) + sum(pre, vi + 1, u) == extended,
                    CHECK,
                    v,
                    u,
                    || format!("{pre:?} one-step extension"),
                )?;
                let extended = sum(suf, vi, u + 1);
                count += ensure(
                    sum(suf, vi, u) + x(vi - 1 - ui) == extended
                        && x(vi - 1) + sum(suf, vi - 1, u) == extended
                        && x(vi) + sum(suf, vi, u) == sum(suf, vi + 1, u + 1),
                    CHECK,
                    v,
                    u,
                    || format!("{suf:?} one-step extension"),
                )?;
                let forward: u64 = (0..ui).map(|y| x(vi + y)).sum();
                let backward: u64 = (0..ui).map(|y| x(vi - 1 - y)).sum();
                count += ensure(sum(pre, vi, u) == forward && sum(suf, vi, u) == backward, CHECK, v, u, || {
                    format!("{pre:?}/{suf:?} differ from direct summation")
                })?;
            }
        }
    }
    Ok(count)
}

/// `n_v = (m^{F_{v,u}} / l^{E_{v,u}}) n_{v+u} + Σ_{w<u} m^{F_{v,w}} a_{v+w} / l^{E_{v,w+1}}`.
pub fn telescoping(spec: &OrbitSpec, u_max: usize) -> AuditResult {
    let tau = spec.tau();
    let seq = spec.sequence();
    let mut count = 0;
    let iterates: Vec<Rational> = (0..tau).map(|v| spec.iterate_value(v)).collect();
    for v in 0..tau {
        let vi = v as i64;
        let mut partial = Rational::from_integer(Int::from(0));
        for u in 0..=u_max {
            let rhs = ratio(spec.m_power(SumKind::F, vi, u), spec.l_power(SumKind::E, vi, u)) * &iterates[(v + u) % tau]
                + &partial;
            count += ensure(rhs == iterates[v], "telescoping", v, u, || format!("expansion gives {rhs}"))?;
            partial += ratio(spec.m_power(SumKind::F, vi, u) * seq.a(vi + u as i64), spec.l_power(SumKind::E, vi, u + 1));
        }
    }
    Ok(count)
}

/// Every tableau digit equals the single-radix digit of `N_v / D_v` under the
/// matching gradation.
pub fn digit_oracle(tab: &DigitTableau) -> AuditResult {
    let spec = tab.spec();
    let seq = spec.sequence();
    let tau = spec.tau();
    let precision = tab.stages() + 1;
    let mut count = 0;
    for v in 0..tau {
        let vi = v as i64;
        let (n, d) = spec.numerator_denominator(v);
        let m_grading: Vec<u32> = (0..tau as i64).map(|u| seq.f(vi + u)).collect();
        let l_grading: Vec<u32> = (0..tau as i64).map(|u| seq.e(vi - 1 - u)).collect();
        let expand = |radix: &Int, grading: Vec<u32>| {
            Gradation::new(radix.clone(), grading)
                .and_then(|g| graded_division(n, d, &g, precision))
                .map_err(|e| fail("digit oracle", v, 0, format!("{e}")))
        };
        let m_side = expand(seq.m(), m_grading)?;
        let l_side = expand(seq.l(), l_grading)?;
        for u in 0..precision {
            count += ensure(&m_side.digits()[u] == tab.m_digit(vi, u), "m-adic digit oracle", v, u, || {
                format!("tableau {} vs division {}", tab.m_digit(vi, u), m_side.digits()[u])
            })?;
            count += ensure(&l_side.digits()[u] == tab.l_digit(vi, u), "l-adic digit oracle", v, u, || {
                format!("tableau {} vs division {}", tab.l_digit(vi, u), l_side.digits()[u])
            })?;
        }
    }
    Ok(count)
}

/// `D_v k_{v,u} = γ_{v,u} · c_u⟨v` with `k` from direct division, plus both
/// forms of the cylinder entry and the l-digit recurrence through the m-digits.
pub fn cylinder_quotients(tab: &DigitTableau) -> AuditResult {
    let spec = tab.spec();
    let seq = spec.sequence();
    let cyl = tab.cylinder();
    let tau = spec.tau();
    let mut count = 0;
    for v in 0..tau {
        let vi = v as i64;
        let (_, d) = spec.numerator_denominator(v);
        for u in 0..=tab.stages() {
            let ui = u as i64;
            let k = m_quotient(spec, v, u).map_err(|e| fail("cylinder quotient", v, u, format!("{e}")))?;
            let weighted = cyl.weighted_section(v, u).map_err(|e| fail("cylinder quotient", v, u, format!("{e}")))?;
            count += ensure(k * Rational::from_integer(d.clone()) == Rational::from_integer(weighted.clone()), "cylinder quotient", v, u, || {
                format!("weighted cross-section {weighted}")
            })?;
            if u >= 1 {
                let c = cyl.entry(vi, u);
                let alt = seq.l_pow(vi) * tab.m_digit(vi, u) - seq.m_pow(vi + ui) * tab.l_digit(vi + ui + 1, u);
                count += ensure(&alt == c, "cylinder entry forms", v, u, || format!("{alt} vs {c}"))?;
                let lifted = seq.l_pow(vi) * tab.m_digit(vi, u) - tab.m_digit(vi + 1, u - 1) + tab.l_digit(vi + ui, u - 1);
                let expected = seq.m_pow(vi + ui) * tab.l_digit(vi + ui + 1, u);
                count += ensure(lifted == expected, "l-digit lift", v, u, || format!("{lifted} vs {expected}"))?;
            }
        }
    }
    Ok(count)
}

/// Prefix addends by recursion and by diagonal sums, their diagonal
/// differences, and the m-adic and l-adic quotients along diagonals.
pub fn diagonal_identities(tab: &DigitTableau) -> AuditResult {
    let spec = tab.spec();
    let tau = spec.tau();
    let mut count = 0;
    for v in 0..tau {
        let vi = v as i64;
        for u in 0..=tab.stages() {
            for side in [Side::Q, Side::P] {
                let rec = addend_by_recursion(tab, side, vi, u).map_err(|e| fail("prefix addends", v, u, format!("{e}")))?;
                let diag = addend_by_diagonal(tab, side, vi, u).map_err(|e| fail("prefix addends", v, u, format!("{e}")))?;
                count += ensure(rec == diag, "prefix addends", v, u, || format!("{side:?}: {rec} vs {diag}"))?;
            }
            let k = m_quotient(spec, v, u).map_err(|e| fail("quotient diagonal", v, u, format!("{e}")))?;
            let j = l_quotient(spec, (v + u) % tau, u).map_err(|e| fail("quotient diagonal", v, u, format!("{e}")))?;
            count += ensure(k == j, "quotient diagonal", v, u, || format!("k = {k}, j = {j}"))?;
        }
    }
    check_diagonal_differences(tab, tab.stages())
        .map_err(|f| fail("diagonal differences", f.v, f.u, format!("{f}")))?;
    Ok(count + 2 * tau * tab.stages())
}

/// The numerator decomposition, the full-period quotient identity and the
/// λ shift identity `(m^{f_v} λ_{v+1,u} + a_v) / l^{e_v} = λ_{v,u} + l^{Ē_{v,u-1}} c_{v-u,u}`.
pub fn residue_identities(tab: &DigitTableau) -> AuditResult {
    let spec = tab.spec();
    let seq = spec.sequence();
    let tau = spec.tau();
    let cyl = tab.cylinder();
    let mut count = 0;
    for v in 0..tau {
        let vi = v as i64;
        numerator_decomposition(tab, v).map_err(|e| fail("numerator decomposition", v, tau, format!("{e}")))?;
        count += 3;
        for u in 1..=tau.min(tab.stages()) {
            let residues = |w: usize| prefix_residues(tab, w, u).map_err(|e| fail("residue shift", w, u, format!("{e}")));
            let next = residues((v + 1) % tau)?.lambda;
            let here = residues(v)?.lambda;
            let lhs = ratio(seq.m_pow(vi) * next + seq.a(vi), seq.l_pow(vi).clone());
            let rhs = here + spec.l_power(SumKind::EBar, vi, u - 1) * cyl.entry(vi - u as i64, u);
            count += ensure(lhs == Rational::from_integer(rhs.clone()), "residue shift", v, u, || format!("{lhs} vs {rhs}"))?;
        }
    }
    Ok(count)
}

/// Advancing stage by stage from frontiers alone reproduces the tableau.
pub fn stage_locality(tab: &DigitTableau) -> AuditResult {
    let spec = tab.spec();
    let mut frontier = Frontier::initial(spec);
    let mut count = 0;
    for u in 0..=tab.stages() {
        let stored = tab.frontier(u).map_err(|e| fail("stage locality", 0, u, format!("{e}")))?;
        count += ensure(frontier == stored, "stage locality", 0, u, || String::from("frontier differs from tableau"))?;
        if u < tab.stages() {
            // Stage u + 1 rebuilt from a detached copy of stage u only.
            let detached = Frontier::from_parts(u, stored.m_digits().to_vec(), stored.l_digits().to_vec())
                .map_err(|e| fail("stage locality", 0, u, format!("{e}")))?;
            frontier = detached.advance(tab.recurrence());
        }
    }
    Ok(count)
}

/// Prefix and suffix verdicts agree with exact evaluation and with each
/// other, and integrality is the same at every index of the orbit.
pub fn integrality_tests(spec: &OrbitSpec, u_max: usize) -> AuditResult {
    let tau = spec.tau();
    let mut count = 0;
    let mut integral = Vec::with_capacity(tau);
    for v in 0..tau {
        let verdict = prefix_test(spec, v).map_err(|e| fail("prefix test", v, tau, format!("{e}")))?;
        let exact = exact_iterate(spec, v);
        count += ensure(verdict.value == exact, "prefix test", v, tau, || format!("{:?} vs {exact:?}", verdict.value))?;
        integral.push(verdict.classification.is_integer());
        let suffix = suffix_test(spec, v, u_max).map_err(|e| fail("suffix test", v, u_max, format!("{e}")))?;
        if let Some(s) = suffix.verdict {
            let agree = s.value == verdict.value && s.classification == verdict.classification;
            count += ensure(agree, "suffix test", v, u_max, || {
                format!("suffix {:?} vs prefix {:?}", s.value, verdict.value)
            })?;
        }
    }
    count += ensure(integral.iter().all(|&x| x == integral[0]), "rotation consistency", 0, tau, || {
        String::from("integrality differs between iterates")
    })?;
    Ok(count)
}

/// Every check above on one orbit with stages `0..=u_max`.
pub fn full_audit(spec: &OrbitSpec, u_max: usize) -> core::result::Result<Vec<(&'static str, usize)>, AuditFailure> {
    let tab = DigitTableau::with_stages(spec.clone(), u_max.max(spec.tau()))
        .map_err(|e| fail("tableau", 0, 0, format!("{e}")))?;
    let u_cap = u_max.max(1);
    Ok(alloc::vec![
        ("sums", sum_identities(spec, u_cap)?),
        ("telescoping", telescoping(spec, u_cap)?),
        ("oracle", digit_oracle(&tab)?),
        ("cylinder", cylinder_quotients(&tab)?),
        ("diagonals", diagonal_identities(&tab)?),
        ("residues", residue_identities(&tab)?),
        ("locality", stage_locality(&tab)?),
        ("integrality", integrality_tests(spec, u_max)?),
    ])
}
