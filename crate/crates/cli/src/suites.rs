use std::sync::Arc;

use serde_json::json;

use hochschild::resolution::Resolution;
use hochschild::verify::{self, SuiteReport};

use crate::config::{build, computable_degree, load, Family, Format, Subject, VerifyArgs};

pub const SUITES: &[&str] = &[
    "twist-defect",
    "splitting",
    "euler",
    "cocycle-twist",
    "bv-identity",
    "delta-squared",
    "theta",
    "structure",
    "homotopy",
    "cocycles",
    "bv-generators",
];

fn subjects(a: &VerifyArgs) -> Result<Vec<Subject>, String> {
    let c = &a.common;
    if c.input.is_some() || c.family.is_some() {
        return Ok(vec![load(c)?]);
    }
    [(Family::Truncated, 2), (Family::Truncated, 3), (Family::Cycle, 2), (Family::Cycle, 3)]
        .into_iter()
        .map(|(f, n)| build(f, Some(n), 1, c.field))
        .collect()
}

fn run_subject(s: &Subject, a: &VerifyArgs, wanted: &dyn Fn(&str) -> bool) -> Vec<SuiteReport> {
    let c = &a.common;
    let seed = c.seed;
    let alg = &s.bundle.alg;
    let top = computable_degree(alg.dim(), c.budget, c.max_degree);
    let degrees: Vec<usize> = (1..=c.max_degree.max(1)).collect();
    let hh_degrees: Vec<usize> = (1..=top.max(1)).collect();
    let engine = s.engine(c.budget);
    let mut out = Vec::new();
    let name = s.name.as_str();
    if let Some(frob) = &s.bundle.frobenius {
        if wanted("twist-defect") {
            out.push(verify::twist_defect(name, frob, &degrees, a.samples, seed));
        }
        if wanted("splitting") {
            let pairs: Vec<(usize, usize)> =
                (0..=c.max_degree).flat_map(|n| (0..=c.max_degree).map(move |m| (n, m))).filter(|&(n, m)| n + m >= 1).collect();
            out.push(verify::splitting(name, frob, &pairs, (a.samples / 10).max(1), seed));
        }
        if wanted("cocycle-twist") {
            out.push(verify::cocycle_twist(name, &engine, frob, &hh_degrees, (a.samples / 5).max(1), seed));
        }
        // the all-pairs sweep is slow on R(n, r), so it runs there only when named
        if wanted("bv-identity") && (s.dnr.is_none() || !a.suite.is_empty()) {
            out.push(verify::bv_identity(name, &engine, frob, top));
        }
        if wanted("delta-squared") {
            out.push(verify::delta_squared(name, &engine, frob, top));
        }
    }
    if wanted("euler") {
        for (g, grading) in &s.bundle.gradings {
            out.push(verify::euler_bracket(&format!("{name}, grading {g}"), alg, grading, 2 * a.samples, seed));
        }
    }
    if wanted("theta") {
        let ch = alg.field().characteristic() as usize;
        for (label, sigma) in &s.bundle.automorphisms {
            let bound = alg.dim() * alg.dim();
            let assert_equal = sigma.order(bound).is_some_and(|o| ch == 0 || o % ch != 0);
            out.push(verify::theta(&format!("{name}, {label}"), &engine, sigma, top, assert_equal));
        }
    }
    if let Some(d) = &s.dnr {
        let res = Arc::new(Resolution::new(d.clone()));
        if wanted("structure") {
            out.push(verify::dnr_structure(d));
        }
        if wanted("homotopy") {
            out.push(verify::homotopy(name, &res, 2 * res.period()));
        }
        if wanted("cocycles") {
            out.push(verify::generator_cocycles(name, &res, c.max_degree.max(1)));
        }
        let ch = alg.field().characteristic() as usize;
        if wanted("bv-generators") && (ch == 0 || d.r % ch != 0) {
            out.push(verify::bv_generators(name, &res, &engine, top, a.stretch));
        }
    }
    out
}

pub fn verify(a: &VerifyArgs) -> Result<bool, String> {
    for s in &a.suite {
        if !SUITES.contains(&s.as_str()) {
            return Err(format!("unknown suite `{s}`; known: {}", SUITES.join(", ")));
        }
    }
    let wanted = |name: &str| {
        if a.suite.is_empty() {
            true
        } else {
            a.suite.iter().any(|s| s == name)
        }
    };
    let subjects = subjects(a)?;
    let reports: Vec<SuiteReport> = subjects.iter().flat_map(|s| run_subject(s, a, &wanted)).collect();
    let passed = reports.iter().all(|r| r.passed);
    match a.common.format {
        Format::Text => {
            for r in &reports {
                println!("{}", r.line());
                for d in &r.details {
                    println!("    {d}");
                }
            }
            println!("{} of {} suites passed", reports.iter().filter(|r| r.passed).count(), reports.len());
        }
        Format::Json => {
            let v = json!({ "seed": a.common.seed, "budget": a.common.budget.to_string(), "passed": passed, "reports": reports });
            println!("{}", serde_json::to_string_pretty(&v).expect("reports serialize"));
        }
    }
    Ok(passed)
}
