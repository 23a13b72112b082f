//! Command implementations. Each returns its rendered report; none prints.

use dualradix_core::audit::full_audit;
use dualradix_core::engine::DigitTableau;
use dualradix_core::graded::{graded_division, Gradation};
use dualradix_core::integrality::{
    prefix_test, search_cycles, smooth_decompose, suffix_test, IntegralityVerdict, SearchConfig, SearchHit,
};
use dualradix_core::orbit::OrbitSpec;
use dualradix_core::{Int, Rational};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::corpus::{corpus, CorpusConfig};
use crate::error::CliError;
use crate::input::{int_to_json, system_to_json};
use crate::render::{csv, headers, table, Format};

/// Rendered text and the exit status it implies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub exit: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, exit: 0 }
    }
}

fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

fn tabular(format: Format, head: &[String], rows: &[Vec<String>], as_json: impl FnOnce() -> Value) -> String {
    match format {
        Format::Table => table(head, rows),
        Format::Csv => csv(head, rows),
        Format::Json => json_text(&as_json()),
    }
}

pub fn analyze(spec: &OrbitSpec, format: Format) -> Result<Output, CliError> {
    spec.verify_cycle_consistency().map_err(|m| CliError::Invariant(m.to_string()))?;
    let seq = spec.sequence();
    let head = headers(&["v", "value", "numerator", "denominator", "f", "e", "s", "a", "h", "r"]);
    let rows: Vec<Vec<String>> = (0..spec.tau())
        .map(|v| {
            let vi = v as i64;
            let (n, d) = spec.numerator_denominator(v);
            vec![
                v.to_string(),
                spec.iterate_value(v).to_string(),
                n.to_string(),
                d.to_string(),
                seq.f(vi).to_string(),
                seq.e(vi).to_string(),
                seq.s(vi).to_string(),
                seq.a(vi).to_string(),
                seq.h(vi).to_string(),
                seq.r(vi).to_string(),
            ]
        })
        .collect();
    let text = tabular(format, &head, &rows, || {
        let iterates: Vec<Value> = (0..spec.tau())
            .map(|v| {
                let vi = v as i64;
                let (n, d) = spec.numerator_denominator(v);
                json!({
                    "v": v,
                    "value": spec.iterate_value(v).to_string(),
                    "numerator": int_to_json(n),
                    "denominator": int_to_json(d),
                    "f": seq.f(vi),
                    "e": seq.e(vi),
                    "s": int_to_json(seq.s(vi)),
                    "a": int_to_json(seq.a(vi)),
                    "h": seq.h(vi),
                    "r": int_to_json(seq.r(vi)),
                })
            })
            .collect();
        json!({ "system": system_to_json(spec), "iterates": iterates })
    });
    Ok(Output::ok(text))
}

pub fn cylinder(spec: &OrbitSpec, stages: usize, format: Format) -> Result<Output, CliError> {
    let cyl = DigitTableau::with_stages(spec.clone(), stages)?.cylinder();
    let mut head = vec!["v".to_string()];
    head.extend((0..=stages).map(|u| format!("u{u}")));
    let rows: Vec<Vec<String>> = cyl
        .rows()
        .iter()
        .enumerate()
        .map(|(v, row)| std::iter::once(v.to_string()).chain(row.iter().map(Int::to_string)).collect())
        .collect();
    let text = tabular(format, &head, &rows, || {
        let grid: Vec<Vec<Value>> = cyl.rows().iter().map(|row| row.iter().map(int_to_json).collect()).collect();
        json!({ "system": system_to_json(spec), "stages": stages, "rows": grid })
    });
    Ok(Output::ok(text))
}

pub struct ExpandRequest {
    pub numerator: Int,
    pub denominator: Int,
    pub radix: Int,
    pub grading: Vec<u32>,
    pub digits: usize,
}

pub fn expand(req: &ExpandRequest, format: Format) -> Result<Output, CliError> {
    let gradation = Gradation::new(req.radix.clone(), req.grading.clone())?;
    let exp = graded_division(&req.numerator, &req.denominator, &gradation, req.digits)?;
    let digits: Vec<String> = exp.digits().iter().map(Int::to_string).collect();
    let text = match format {
        Format::Csv => format!("{}\n", digits.join(",")),
        Format::Table => format!("digits    {}\nquotient  {}\n", digits.join(","), exp.quotient()),
        Format::Json => json_text(&json!({
            "digits": exp.digits().iter().map(int_to_json).collect::<Vec<_>>(),
            "quotient": exp.quotient().to_string(),
        })),
    };
    Ok(Output::ok(text))
}

fn verdict_cells(verdict: Option<&IntegralityVerdict>) -> (String, String) {
    match verdict {
        Some(v) => (v.classification.to_string(), v.value.as_ref().map(Int::to_string).unwrap_or_else(|| "-".into())),
        None => ("inconclusive".into(), "-".into()),
    }
}

pub fn bs_test(spec: &OrbitSpec, u_max: usize, format: Format) -> Result<Output, CliError> {
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for v in 0..spec.tau() {
        let prefix = prefix_test(spec, v)?;
        let suffix = suffix_test(spec, v, u_max)?;
        let (p_class, p_value) = verdict_cells(Some(&prefix));
        let (s_class, s_value) = verdict_cells(suffix.verdict.as_ref());
        let decided = suffix.decided_at.map(|u| u.to_string()).unwrap_or_else(|| "-".into());
        rows.push(vec![v.to_string(), p_class, p_value, prefix.witness.to_string(), s_class, s_value, decided]);
        records.push(json!({
            "v": v,
            "prefix": {
                "classification": prefix.classification.as_str(),
                "value": prefix.value.as_ref().map(Int::to_string),
                "witness": prefix.witness.to_string(),
            },
            "suffix": {
                "classification": suffix.verdict.as_ref().map(|s| s.classification.as_str()).unwrap_or("inconclusive"),
                "value": suffix.verdict.as_ref().and_then(|s| s.value.as_ref()).map(Int::to_string),
                "decided_at": suffix.decided_at,
                "trajectory": suffix.trajectory.iter().map(Rational::to_string).collect::<Vec<_>>(),
            },
        }));
    }
    let head = headers(&["v", "prefix", "value", "witness", "suffix", "suffix_value", "decided_at"]);
    let text = tabular(format, &head, &rows, || {
        json!({ "system": system_to_json(spec), "u_max": u_max, "results": records })
    });
    Ok(Output::ok(text))
}

pub fn smooth(m: &Int, l: &Int, f: &[u32], e: &[u32], format: Format) -> Result<Output, CliError> {
    let dec = smooth_decompose(m, l, f, e)?;
    let head = headers(&["n", "denominator", "mu", "lambda", "l_power", "m_power"]);
    let row = vec![
        dec.n.to_string(),
        dec.denominator.to_string(),
        dec.mu.to_string(),
        dec.lambda.to_string(),
        dec.l_power.to_string(),
        dec.m_power.to_string(),
    ];
    let certificate = format!("{} = {}*{} - {}*{}", dec.n, dec.l_power, dec.mu, dec.m_power, dec.lambda);
    let text = match format {
        Format::Table => format!("{}{certificate}\n", table(&head, &[row])),
        Format::Csv => csv(&head, &[row]),
        Format::Json => json_text(&json!({
            "n": int_to_json(&dec.n),
            "denominator": int_to_json(&dec.denominator),
            "mu": int_to_json(&dec.mu),
            "lambda": int_to_json(&dec.lambda),
            "l_power": int_to_json(&dec.l_power),
            "m_power": int_to_json(&dec.m_power),
            "certificate": certificate,
        })),
    };
    Ok(Output::ok(text))
}

pub fn hit_to_json(hit: &SearchHit) -> Value {
    json!({
        "tau": hit.tau,
        "e": hit.e,
        "v": hit.v,
        "value": hit.value.to_string(),
        "classification": hit.classification.as_str(),
    })
}

/// JSON format emits one object per line.
pub fn search(cfg: &SearchConfig, format: Format) -> Result<Output, CliError> {
    let hits = search_cycles(cfg)?;
    let text = match format {
        Format::Json => hits.iter().map(|h| format!("{}\n", hit_to_json(h))).collect(),
        _ => {
            let head = headers(&["tau", "e", "v", "value", "classification"]);
            let rows: Vec<Vec<String>> = hits
                .iter()
                .map(|h| {
                    let e: Vec<String> = h.e.iter().map(u32::to_string).collect();
                    let e = if format == Format::Csv { e.join(" ") } else { e.join(",") };
                    vec![h.tau.to_string(), e, h.v.to_string(), h.value.to_string(), h.classification.to_string()]
                })
                .collect();
            if format == Format::Csv {
                csv(&head, &rows)
            } else {
                table(&head, &rows)
            }
        }
    };
    Ok(Output::ok(text))
}

/// Runs every invariant suite on a seeded random corpus with stages `0..=3τ`.
pub fn selfcheck(seed: u64, count: usize, format: Format) -> Result<Output, CliError> {
    let specs = corpus(seed, count, &CorpusConfig::default());
    let reports: Vec<_> = specs.par_iter().map(|spec| full_audit(spec, 3 * spec.tau())).collect();
    let names = ["sums", "telescoping", "oracle", "cylinder", "diagonals", "residues", "locality", "integrality"];
    let mut identities = [0usize; 8];
    let mut passed = [0usize; 8];
    let mut failures = Vec::new();
    for (index, report) in reports.into_iter().enumerate() {
        match report {
            Ok(parts) => {
                for (slot, (_, n)) in parts.into_iter().enumerate() {
                    identities[slot] += n;
                    passed[slot] += 1;
                }
            }
            Err(fault) => failures.push((index, fault)),
        }
    }
    let rows: Vec<Vec<String>> = names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            vec![name.to_string(), passed[i].to_string(), (count - passed[i]).to_string(), identities[i].to_string()]
        })
        .collect();
    let head = headers(&["suite", "passed", "failed", "identities"]);
    let mut text = tabular(format, &head, &rows, || {
        json!({
            "seed": seed,
            "specs": count,
            "suites": rows.iter().map(|r| json!({
                "suite": r[0], "passed": r[1].parse::<usize>().unwrap(),
                "failed": r[2].parse::<usize>().unwrap(), "identities": r[3].parse::<usize>().unwrap(),
            })).collect::<Vec<_>>(),
            "failures": failures.iter().map(|(i, f)| json!({"spec": i, "message": f.to_string()})).collect::<Vec<_>>(),
        })
    });
    if format != Format::Json {
        for (index, fault) in &failures {
            text.push_str(&format!("spec {index}: {fault}\n"));
        }
    }
    Ok(Output { text, exit: if failures.is_empty() { 0 } else { 1 } })
}
