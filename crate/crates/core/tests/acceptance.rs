//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines are always printed. The process
//! fails when a criterion fails, except for sub-checks listed in `KNOWN_CONFLICTS`,
//! which are still evaluated and reported.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hochschild::cochain::{self, all_tuples};
use hochschild::resolution::{GeneratorKind, Resolution};
use hochschild::verify::{self, SuiteReport};
use hochschild::zoo::{build_dnr, nakayama_cycle, truncated_poly, Bundle, Dnr};
use hochschild::{Cochain, Engine, Field};

/// Sub-checks whose literal statement disagrees with the algebra as constructed.
/// Each entry is `(criterion, sub-check prefix, reason)`.
const KNOWN_CONFLICTS: &[(usize, &str, &str)] = &[
    (
        10,
        "dim formula",
        "the formula counts the listed basis, which omits the idempotents at the two branch vertices; \
         the algebra has dimension r(n+2)(n-1)",
    ),
    (
        10,
        "pairing [b = ā]",
        "for r > 1 the bar map is not an involution, and the form satisfies ⟨b̄, b⟩ = 1 rather than ⟨b, b̄⟩ = 1",
    ),
];

struct Outcome {
    /// `(sub-check, passed, detail)`.
    checks: Vec<(String, bool, String)>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { checks: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push((name.into(), ok, detail.into()));
    }

    fn suite(&mut self, r: &SuiteReport) {
        let detail = if r.details.is_empty() { format!("{} cases", r.cases) } else { r.details.join("; ") };
        self.check(format!("{} [{}]", r.suite, r.algebra), r.passed, detail);
    }

    fn within(&mut self, started: Instant, limit: Duration) {
        let took = started.elapsed();
        self.check("time", took <= limit, format!("{took:.1?} (limit {limit:?})"));
    }
}

fn q() -> Field {
    Field::Rational
}

fn fp(p: u32) -> Field {
    Field::prime(p).unwrap()
}

fn dnr(n: usize, r: usize, f: Field) -> Arc<Dnr> {
    Arc::new(build_dnr(n, r, f).expect("R(n, r) builds"))
}

fn zoo_subjects() -> Vec<(String, Bundle)> {
    let mut out = Vec::new();
    for f in [q(), fp(2), fp(3)] {
        out.push((format!("x^2 over {f}"), truncated_poly(2, f).unwrap()));
    }
    out.push(("x^3 over Q".into(), truncated_poly(3, q()).unwrap()));
    for f in [q(), fp(2)] {
        out.push((format!("cycle(2) over {f}"), nakayama_cycle(2, f).unwrap()));
        out.push((format!("cycle(3) over {f}"), nakayama_cycle(3, f).unwrap()));
    }
    for (r, f) in [(1, q()), (2, q()), (1, fp(3)), (2, fp(3))] {
        out.push((format!("R(4,{r}) over {f}"), dnr(4, r, f).bundle.clone()));
    }
    out
}

fn c1_twist_defect() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    for (name, b) in zoo_subjects() {
        let r = verify::twist_defect(&name, b.frobenius.as_ref().unwrap(), &[1, 2, 3, 4], 50, 1);
        o.check(format!("≥200 cases [{name}]"), r.cases >= 200, format!("{} cases", r.cases));
        o.suite(&r);
    }
    o.within(t, Duration::from_secs(120));
    o
}

fn c2_homotopy() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    for (n, r) in [(4, 1), (4, 2), (5, 1)] {
        let res = Resolution::new(dnr(n, r, q()));
        o.suite(&verify::homotopy(&format!("R({n},{r})"), &res, 2 * (2 * n - 3)));
    }
    o.within(t, Duration::from_secs(60));
    o
}

/// Induced Δ of the (averaged) ε₁ class against `1/r` times the class of `1_R`.
fn c3_delta_eps1() -> Outcome {
    let mut o = Outcome::new();
    for r in [1, 2] {
        let d = dnr(4, r, q());
        let alg = d.alg().clone();
        let frob = d.frobenius();
        let res = Arc::new(Resolution::new(d.clone()));
        let engine = Engine::new(alg.clone());
        let run = || -> hochschild::Result<(bool, String)> {
            let spec = res.generator(GeneratorKind::Eps1, 1)?;
            let eps = res.nu_conjugate_average(&spec, true)?.materialize();
            let class = engine.hh_up(frob.nakayama(), 1)?.class_of(&eps)?;
            let image = engine.induced_bv_on_class(frob, 1, &class)?;
            let inv_r = alg.field().fraction(1, r as i64)?;
            let unit = Cochain::from_element(alg.clone(), alg.unit().scale(&inv_r));
            let expected = engine.hh_up(frob.nakayama(), 0)?.class_of(&unit)?;
            let pointwise = cochain::bv_delta(&eps, frob)?.eval_basis(&[]) == alg.unit().scale(&inv_r);
            Ok((image == expected && pointwise, format!("Δ class {image:?}, expected {expected:?}")))
        };
        match run() {
            Ok((ok, detail)) => o.check(format!("Δ(ε̃₁) = 1/{r} on R(4,{r})"), ok, detail),
            Err(e) => o.check(format!("Δ(ε̃₁) on R(4,{r})"), false, e.to_string()),
        }
    }
    o
}

fn c4_delta_f4_p4() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let d = dnr(4, 1, fp(3));
    let res = Arc::new(Resolution::new(d.clone()));
    let engine = Engine::new(d.alg().clone());
    let composable = d.composable_tuples(4);
    for kind in [GeneratorKind::F, GeneratorKind::P] {
        let run = || -> hochschild::Result<(bool, String)> {
            let spec = res.generator(kind, 4)?;
            let x = res.realize_generator(&spec).memoized();
            let nonzero = x.first_nonzero(&composable).is_some();
            let dx = cochain::bv_delta(&x, d.frobenius())?.materialize();
            let exact = engine.is_coboundary(&dx, None)?.is_some();
            Ok((nonzero && exact, format!("realization nonzero: {nonzero}, Δ in Im δ₂: {exact}")))
        };
        match run() {
            Ok((ok, detail)) => o.check(format!("Δ({kind:?}_4) exact on R(4,1) over F3"), ok, detail),
            Err(e) => o.check(format!("{kind:?}_4"), false, e.to_string()),
        }
    }
    o.within(t, Duration::from_secs(600));
    o
}

fn c5_euler() -> Outcome {
    let mut o = Outcome::new();
    for r in [1, 2] {
        let d = dnr(4, r, q());
        let rep = verify::euler_bracket(&format!("R(4,{r}) gamma"), d.alg(), d.gamma_grading(), 100, 5);
        o.suite(&rep);
        let res = Arc::new(Resolution::new(d.clone()));
        let spec = res.generator(GeneratorKind::Eps1, 1).unwrap();
        let eps = res.realize_generator(&spec);
        let br = cochain::bracket(&eps, &eps).unwrap();
        let zero = br.first_nonzero(&all_tuples(d.alg().dim(), 1)).is_none();
        o.check(format!("[ε₁, ε₁] = 0 on R(4,{r})"), zero, "checked on every basis element");
    }
    for (name, b) in [
        ("x^2", truncated_poly(2, q()).unwrap()),
        ("x^3", truncated_poly(3, q()).unwrap()),
        ("cycle(2)", nakayama_cycle(2, q()).unwrap()),
        ("cycle(3)", nakayama_cycle(3, q()).unwrap()),
    ] {
        for (g, grading) in &b.gradings {
            o.suite(&verify::euler_bracket(&format!("{name} {g}"), &b.alg, grading, 100, 5));
        }
    }
    o
}

fn c6_bv_identity() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    for (name, b, total) in [
        ("x^2 over Q", truncated_poly(2, q()).unwrap(), 4),
        ("x^2 over F3", truncated_poly(2, fp(3)).unwrap(), 4),
        ("cycle(2) over Q", nakayama_cycle(2, q()).unwrap(), 3),
    ] {
        let engine = Engine::new(b.alg.clone());
        o.suite(&verify::bv_identity(name, &engine, b.frobenius.as_ref().unwrap(), total));
    }
    o.within(t, Duration::from_secs(300));
    o
}

fn c7_delta_squared() -> Outcome {
    let mut o = Outcome::new();
    let r42 = dnr(4, 2, q());
    for (name, b, top) in [
        ("x^2 over Q", truncated_poly(2, q()).unwrap(), 4),
        ("cycle(2) over Q", nakayama_cycle(2, q()).unwrap(), 4),
        ("R(4,2) over Q", r42.bundle.clone(), 2),
    ] {
        let engine = Engine::new(b.alg.clone());
        o.suite(&verify::delta_squared(name, &engine, b.frobenius.as_ref().unwrap(), top));
    }
    o
}

fn c8_cocycle_twist() -> Outcome {
    let mut o = Outcome::new();
    let mut subjects: Vec<(String, Bundle)> = vec![
        ("x^2 over Q".into(), truncated_poly(2, q()).unwrap()),
        ("x^3 over Q".into(), truncated_poly(3, q()).unwrap()),
        ("cycle(2) over Q".into(), nakayama_cycle(2, q()).unwrap()),
        ("cycle(3) over Q".into(), nakayama_cycle(3, q()).unwrap()),
    ];
    for r in [1, 2] {
        subjects.push((format!("R(4,{r}) over Q"), dnr(4, r, q()).bundle.clone()));
    }
    for (name, b) in subjects {
        let engine = Engine::new(b.alg.clone());
        let rep = verify::cocycle_twist(&name, &engine, b.frobenius.as_ref().unwrap(), &[1, 2], 25, 8);
        o.check(format!("50 cocycles [{name}]"), rep.cases == 50, format!("{} cases", rep.cases));
        o.suite(&rep);
    }
    o
}

fn c9_theta() -> Outcome {
    let mut o = Outcome::new();
    for (f, assert_equal) in [(q(), true), (fp(2), false)] {
        let d = dnr(4, 2, f);
        let engine = Engine::new(d.alg().clone());
        let nu = d.frobenius().nakayama().clone();
        o.suite(&verify::theta(&format!("R(4,2) over {f}"), &engine, &nu, 2, assert_equal));
    }
    o
}

fn c10_structure() -> Outcome {
    let mut o = Outcome::new();
    for (n, r) in [(4, 1), (4, 2), (5, 1), (5, 2)] {
        let d = dnr(n, r, q());
        let alg = d.alg();
        let formula = Dnr::formula_dim(n, r);
        o.check(format!("dim formula R({n},{r})"), alg.dim() == formula, format!("dim {} vs r((n-2)(n+3)+2) = {formula}", alg.dim()));
        o.check(
            format!("dim R({n},{r}) = r(n+2)(n-1)"),
            alg.dim() == r * (n + 2) * (n - 1),
            format!("dim {}", alg.dim()),
        );
        let fr = d.frobenius();
        let mut bad = None;
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                let v = fr.pairing(&alg.basis(a), &alg.basis(b));
                let expect = if d.bar[a] == b { alg.field().one() } else { alg.field().zero() };
                if v != expect && bad.is_none() {
                    bad = Some(format!("⟨{}, {}⟩ = {v}", alg.label(a), alg.label(b)));
                }
            }
        }
        o.check(format!("pairing [b = ā] R({n},{r})"), bad.is_none(), bad.unwrap_or_else(|| "all pairs".into()));
        // ν closed form, gradings, ε₁ = Euler derivation, and ⟨b̄, b⟩ = 1
        o.suite(&verify::dnr_structure(&d));
    }
    o
}

fn c11_characteristic() -> Outcome {
    let mut o = Outcome::new();
    let dims = |f: Field| -> hochschild::Result<Vec<usize>> {
        let d = dnr(4, 2, f);
        let engine = Engine::new(d.alg().clone());
        (0..=2).map(|n| engine.hh_dim(n)).collect()
    };
    match (dims(q()), dims(fp(3))) {
        (Ok(a), Ok(b)) => o.check("Q vs F3", a == b, format!("Q {a:?}, F3 {b:?}")),
        (a, b) => o.check("Q vs F3", false, format!("{:?} / {:?}", a.err(), b.err())),
    }
    match dims(fp(2)) {
        Ok(c) => o.check("F2 completes", true, format!("F2 {c:?}")),
        Err(e) => o.check("F2 completes", false, e.to_string()),
    }
    o
}

fn known_conflict(criterion: usize, check: &str) -> Option<&'static str> {
    KNOWN_CONFLICTS.iter().find(|(c, prefix, _)| *c == criterion && check.starts_with(prefix)).map(|(_, _, why)| *why)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("δΔf + Δδf = f^ν - f pointwise", c1_twist_defect),
        ("contracting homotopy", c2_homotopy),
        ("Δ(ε₁) = 1/r", c3_delta_eps1),
        ("Δ(f₄), Δ(p₄) exact", c4_delta_f4_p4),
        ("Euler bracket and [ε₁, ε₁] = 0", c5_euler),
        ("BV identity on classes", c6_bv_identity),
        ("Δ∘Δ = 0 on classes", c7_delta_squared),
        ("f^ν - f = δ(Δf)", c8_cocycle_twist),
        ("Θ bijectivity", c9_theta),
        ("structural cross-checks", c10_structure),
        ("characteristic robustness", c11_characteristic),
    ];
    let mut unexpected = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let k = i + 1;
        let started = Instant::now();
        let outcome = run();
        let failed: Vec<_> = outcome.checks.iter().filter(|(_, ok, _)| !ok).collect();
        let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {k}: {title} ({} checks, {:.1?})", outcome.checks.len(), started.elapsed());
        for (name, _, detail) in &failed {
            match known_conflict(k, name) {
                Some(why) => println!("    known conflict: {name}: {detail}; {why}"),
                None => {
                    unexpected += 1;
                    println!("    failed: {name}: {detail}");
                }
            }
        }
    }
    if unexpected == 0 {
        println!("acceptance: no failures outside the known conflicts");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} unexpected failures");
        ExitCode::FAILURE
    }
}
