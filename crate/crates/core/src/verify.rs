//! Identity suites shared by the command line and the acceptance tests.
//!
//! Every suite is deterministic given its seed and returns a [`SuiteReport`]
//! listing how many cases were checked and the first few failures.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Algebra, Automorphism, Element, Grading};
use crate::cochain::{self, all_tuples, sample_tuples, Cochain};
use crate::engine::{dense_rank, Engine};
use crate::error::Result;
use crate::frobenius::FrobeniusData;
use crate::linalg::SparseVec;
use crate::resolution::{GeneratorKind, Resolution, ResolutionElement};
use crate::scalar::Scalar;
use crate::zoo::Dnr;

/// Failures kept per report.
const MAX_DETAILS: usize = 5;
/// Exhaustive checking below this many tuples.
const EXHAUSTIVE_TUPLES: usize = 4096;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub algebra: String,
    pub identity: String,
    pub cases: usize,
    pub seed: u64,
    pub passed: bool,
    pub failures: usize,
    pub details: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, algebra: &str, identity: &str, seed: u64) -> Self {
        SuiteReport {
            suite: suite.into(),
            algebra: algebra.into(),
            identity: identity.into(),
            cases: 0,
            seed,
            passed: true,
            failures: 0,
            details: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.passed = false;
            self.failures += 1;
            if self.details.len() < MAX_DETAILS {
                self.details.push(detail());
            }
        }
    }

    fn error(&mut self, e: impl std::fmt::Display) {
        self.passed = false;
        self.failures += 1;
        if self.details.len() < MAX_DETAILS {
            self.details.push(format!("error: {e}"));
        }
    }

    /// One-line summary, `PASS`/`FAIL` first.
    pub fn line(&self) -> String {
        format!(
            "{} {} [{}] {}: {} cases, {} failures, seed {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.algebra,
            self.identity,
            self.cases,
            self.failures,
            self.seed
        )
    }
}

/// Tuples to compare two cochains on: everything when small, otherwise a random
/// sample together with the `extra` tuples (typically supports and their images).
pub fn check_tuples(dim: usize, degree: usize, sample: usize, extra: &[Vec<usize>], rng: &mut impl Rng) -> Vec<Vec<usize>> {
    if dim.checked_pow(degree as u32).is_some_and(|t| t <= EXHAUSTIVE_TUPLES) {
        return all_tuples(dim, degree);
    }
    let mut set: BTreeSet<Vec<usize>> = extra.iter().filter(|t| t.len() == degree).cloned().collect();
    set.extend(sample_tuples(dim, degree, sample, rng));
    set.into_iter().collect()
}

/// Support tuples of a table cochain together with their images under `σ^{-1}` when `σ` is monomial.
fn support_and_preimages(f: &Cochain, sigma: &Automorphism) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = f.table().map(|t| t.keys().cloned().collect()).unwrap_or_default();
    if let Some((perm, _)) = sigma.as_monomial() {
        let mut inv = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let pre: Vec<Vec<usize>> = out.iter().map(|t| t.iter().map(|&k| inv[k]).collect()).collect();
        out.extend(pre);
    }
    out
}

fn first_difference(a: &Cochain, b: &Cochain, tuples: &[Vec<usize>]) -> Option<Vec<usize>> {
    tuples.iter().find(|t| a.eval_basis(t) != b.eval_basis(t)).cloned()
}

/// `δ(Δf) + Δ(δf) = f^ν - f` pointwise for random cochains of the given degrees.
pub fn twist_defect(name: &str, frob: &FrobeniusData, degrees: &[usize], per_degree: usize, seed: u64) -> SuiteReport {
    twist_defect_with(name, frob, degrees, per_degree, seed, &cochain::coboundary)
}

/// [`twist_defect`] with a substitute for `δ`; used to confirm the suite detects a broken differential.
pub fn twist_defect_with(
    name: &str,
    frob: &FrobeniusData,
    degrees: &[usize],
    per_degree: usize,
    seed: u64,
    delta: &dyn Fn(&Cochain) -> Cochain,
) -> SuiteReport {
    let mut rep = SuiteReport::new("twist-defect", name, "δΔf + Δδf = f^ν - f", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alg = frob.algebra().clone();
    let nu = frob.nakayama();
    for &n in degrees {
        for _ in 0..per_degree {
            let f = cochain::random_cochain(&alg, n, None, &mut rng);
            let mut run = || -> Result<Option<Vec<usize>>> {
                let lhs = delta(&cochain::bv_delta(&f, frob)?).add(&cochain::bv_delta(&delta(&f), frob)?)?;
                let rhs = cochain::twist(&f, nu).sub(&f)?;
                let tuples = check_tuples(alg.dim(), n, 24, &support_and_preimages(&f, nu), &mut rng);
                Ok(first_difference(&lhs, &rhs, &tuples))
            };
            match run() {
                Ok(bad) => rep.record(bad.is_none(), || format!("degree {n}: differs at {:?}", bad.unwrap_or_default())),
                Err(e) => rep.error(e),
            }
        }
    }
    rep
}

/// `Σ_{i<ord ν} f^{ν^i}`, a ν-invariant cochain.
fn nu_symmetrize(f: &Cochain, frob: &FrobeniusData) -> Result<Cochain> {
    let order = frob.nakayama_order(None).ok_or(crate::error::Error::InfiniteOrder(f.algebra().dim()))?;
    Ok(cochain::average_over_powers(f, frob.nakayama(), order, false)?.materialize())
}

/// `Δ(f⌣g) = Δ′(f⊗g) + (-1)^{nm} Δ′(g⊗f)` pointwise for ν-invariant `f, g`.
pub fn splitting(name: &str, frob: &FrobeniusData, degree_pairs: &[(usize, usize)], per_pair: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("splitting", name, "Δ(f⌣g) = Δ′(f⊗g) + (-1)^{nm}Δ′(g⊗f), f, g ν-invariant", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alg = frob.algebra().clone();
    let field = alg.field();
    for &(n, m) in degree_pairs {
        for _ in 0..per_pair {
            let f = cochain::random_cochain(&alg, n, None, &mut rng);
            let g = cochain::random_cochain(&alg, m, None, &mut rng);
            let mut run = || -> Result<Option<Vec<usize>>> {
                let (f, g) = (nu_symmetrize(&f, frob)?, nu_symmetrize(&g, frob)?);
                let lhs = cochain::bv_delta(&cochain::cup(&f, &g)?, frob)?;
                let s = if (n * m) % 2 == 0 { field.one() } else { -field.one() };
                let rhs = cochain::delta_prime(&f, &g, frob)?.linear_combination(
                    &field.one(),
                    &cochain::delta_prime(&g, &f, frob)?,
                    &s,
                )?;
                let tuples = check_tuples(alg.dim(), n + m - 1, 24, &[], &mut rng);
                Ok(first_difference(&lhs, &rhs, &tuples))
            };
            match run() {
                Ok(bad) => rep.record(bad.is_none(), || format!("({n},{m}): differs at {:?}", bad.unwrap_or_default())),
                Err(e) => rep.error(e),
            }
        }
    }
    rep
}

/// `[f, e_Γ] = q f` for cochains homogeneous of internal degree `q`.
pub fn euler_bracket(name: &str, alg: &Arc<Algebra>, grading: &Grading, cases: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("euler", name, "[f, e_Γ] = q·f", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = match cochain::euler_derivation(alg, grading) {
        Ok(e) => e,
        Err(err) => {
            rep.error(err);
            return rep;
        }
    };
    let field = alg.field();
    let (lo, hi) = grading.degrees.iter().fold((0i64, 0i64), |(a, b), &d| (a.min(d), b.max(d)));
    for k in 0..cases {
        let n = k % 4;
        let q = rng.gen_range(lo - hi..=(n as i64) * (hi - lo).max(1));
        let f = cochain::random_homogeneous(alg, grading, n, q, None, &mut rng);
        let mut run = || -> Result<Option<Vec<usize>>> {
            let lhs = cochain::bracket(&f, &e)?;
            let rhs = f.scale(&field.from_i64(q));
            let support = f.table().map(|t| t.keys().cloned().collect::<Vec<_>>()).unwrap_or_default();
            let tuples = check_tuples(alg.dim(), n, 24, &support, &mut rng);
            Ok(first_difference(&lhs, &rhs, &tuples))
        };
        match run() {
            Ok(bad) => rep.record(bad.is_none(), || format!("degree {n}, q = {q}: differs at {:?}", bad.unwrap_or_default())),
            Err(err) => rep.error(err),
        }
    }
    rep
}

/// Random cocycle: a random combination of class representatives plus a random coboundary.
pub fn random_cocycle(engine: &Engine, n: usize, rng: &mut impl Rng) -> Result<Cochain> {
    let alg = engine.algebra().clone();
    let field = alg.field();
    let h = engine.hh(n)?;
    let mut v: SparseVec = Vec::new();
    for i in 0..h.dim() {
        let c = field.from_i64(rng.gen_range(-3..=3));
        v = crate::linalg::axpy(&v, &c, h.representative_vector(i));
    }
    let mut f = Cochain::from_vector(alg.clone(), n, &v);
    if n > 0 {
        let g = cochain::random_cochain(&alg, n - 1, Some(alg.dim()), rng);
        f = f.add(&cochain::coboundary(&g))?;
    }
    Ok(f.materialize())
}

/// For random cocycles `f`, `f^ν - f = δ(Δf)`, so the twist acts trivially on `HH`.
pub fn cocycle_twist(name: &str, engine: &Engine, frob: &FrobeniusData, degrees: &[usize], per_degree: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("cocycle-twist", name, "f^ν - f = δ(Δf) for cocycles f", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alg = engine.algebra().clone();
    for &n in degrees {
        for _ in 0..per_degree {
            let run = |rng: &mut ChaCha8Rng| -> Result<Option<Vec<usize>>> {
                let f = random_cocycle(engine, n, rng)?;
                let witness = cochain::coboundary(&cochain::bv_delta(&f, frob)?);
                let diff = cochain::twist(&f, frob.nakayama()).sub(&f)?;
                let tuples = check_tuples(alg.dim(), n, 64, &support_and_preimages(&f, frob.nakayama()), rng);
                Ok(first_difference(&witness, &diff, &tuples))
            };
            match run(&mut rng) {
                Ok(bad) => rep.record(bad.is_none(), || format!("degree {n}: witness fails at {:?}", bad.unwrap_or_default())),
                Err(e) => rep.error(e),
            }
        }
    }
    rep
}

/// The BV identity as a class equality for all pairs of basis classes of total degree `≤ max_total`.
pub fn bv_identity(name: &str, engine: &Engine, frob: &FrobeniusData, max_total: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("bv-identity", name, "[a,b] = -(-1)^{(|a|-1)|b|}(Δ(ab) - Δa·b - (-1)^{|a|}a·Δb)", 0);
    let nu = frob.nakayama();
    for total in 0..=max_total {
        for n in 0..=total {
            let m = total - n;
            let dims = engine.hh_up_dim(nu, n).and_then(|a| Ok((a, engine.hh_up_dim(nu, m)?)));
            let (dn, dm) = match dims {
                Ok(x) => x,
                Err(e) => {
                    rep.error(e);
                    continue;
                }
            };
            for i in 0..dn {
                for j in 0..dm {
                    match engine.check_bv_identity(frob, n, i, m, j) {
                        Ok(c) => rep.record(c.holds, || format!("classes ({n},{i}) and ({m},{j})")),
                        Err(e) => rep.error(e),
                    }
                }
            }
        }
    }
    rep
}

fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>], inner: usize, cols: usize, zero: &Scalar) -> Vec<Vec<Scalar>> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).fold(zero.clone(), |acc, k| &acc + &(&row[k] * &b[k][c])))
                .collect()
        })
        .collect()
}

/// `Δ∘Δ = 0` on classes for degrees `2..=max_degree`.
pub fn delta_squared(name: &str, engine: &Engine, frob: &FrobeniusData, max_degree: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("delta-squared", name, "Δ∘Δ = 0 on HH^{ν↑}", 0);
    let zero = engine.algebra().field().zero();
    for n in 2..=max_degree {
        let run = || -> Result<bool> {
            let upper = engine.bv_matrix(frob, n)?;
            let lower = engine.bv_matrix(frob, n - 1)?;
            let inner = upper.len();
            let cols = engine.hh_up_dim(frob.nakayama(), n)?;
            let prod = mat_mul(&lower, &upper, inner, cols, &zero);
            Ok(prod.iter().all(|r| r.iter().all(|x| x.is_zero())))
        };
        match run() {
            Ok(ok) => rep.record(ok, || format!("degree {n}: ΔΔ ≠ 0")),
            Err(e) => rep.error(e),
        }
    }
    rep
}

/// `dim HH^n(R)^{σ↑}` against the σ-fixed part of `HH^n(R)`. Equality is only
/// asserted when `assert_equal`; otherwise the computation must merely succeed.
pub fn theta(name: &str, engine: &Engine, sigma: &Automorphism, max_degree: usize, assert_equal: bool) -> SuiteReport {
    let identity = if assert_equal { "dim HH^{σ↑} = dim (HH)^σ, Θ injective" } else { "HH^{σ↑} computable" };
    let mut rep = SuiteReport::new("theta", name, identity, 0);
    for n in 0..=max_degree {
        match engine.theta(sigma, n) {
            Ok(t) => {
                let ok = !assert_equal || (t.injective && t.onto_fixed && t.source_dim == t.fixed_dim);
                rep.record(ok, || format!("degree {n}: up {} fixed {} rank {}", t.source_dim, t.fixed_dim, t.rank))
            }
            Err(e) => rep.error(e),
        }
    }
    rep
}

/// Case coverage, `D_{t+1} D_t = 0` on left generators for `t ≤ max_t`, and `μ D_{-1} = id`.
pub fn homotopy(name: &str, res: &Resolution, max_t: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("homotopy", name, "D_{t+1}D_t = 0, μD_{-1} = id", 0);
    let d = res.dnr();
    let alg = d.alg();
    let field = alg.field();
    for t in 0..=max_t {
        for s in res.qt_shape(t) {
            let x = d.idempotent_index(s.left);
            for b in (0..alg.dim()).filter(|&b| d.words[b].tgt == s.right) {
                if let Err(e) = res.matching_case(t, s.position, b) {
                    rep.error(e);
                    continue;
                }
                let mut g = ResolutionElement::zero(t);
                g.add_term(s.position, x, b, field.one());
                match res.homotopy_d(&g).and_then(|y| res.homotopy_d(&y)) {
                    Ok(z) => rep.record(z.is_zero(), || format!("t = {t}, summand {}, b = {}", s.position, alg.label(b))),
                    Err(e) => rep.error(e),
                }
            }
        }
    }
    for b in 0..alg.dim() {
        let a = alg.basis(b);
        rep.record(res.multiply_out(&res.homotopy_d_minus1(&a)) == a, || format!("μD_{{-1}}({}) ≠ itself", alg.label(b)));
    }
    rep
}

/// Realized generators of degree `≤ max_degree` are cocycles on all composable tuples.
pub fn generator_cocycles(name: &str, res: &Arc<Resolution>, max_degree: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("cocycles", name, "δ(xΨ_s) = 0 for generators x", 0);
    let d = res.dnr();
    let kinds = [
        GeneratorKind::Eps1,
        GeneratorKind::F,
        GeneratorKind::G,
        GeneratorKind::H,
        GeneratorKind::P,
        GeneratorKind::Chi,
        GeneratorKind::Xi,
    ];
    for s in 0..=max_degree {
        let tuples = d.composable_tuples(s + 1);
        for kind in kinds {
            let Ok(spec) = res.generator(kind, s) else { continue };
            let df = cochain::coboundary(&res.realize_generator(&spec));
            let bad = tuples.iter().find(|t| !df.eval_basis(t).is_zero());
            rep.record(bad.is_none(), || format!("{kind:?} in degree {s}: δ ≠ 0 at {bad:?}"));
        }
    }
    rep
}

/// Whether `f` is a coboundary in the full complex.
fn exact(engine: &Engine, f: &Cochain) -> Result<bool> {
    Ok(engine.is_coboundary(&f.materialize(), None)?.is_some())
}

/// BV values of the generators of `R(n, r)` when `char k ∤ r`: `Δ(ε̃₁) = 1/r`, and
/// `Δx` is a coboundary for `x ∈ {f, g, h, p}` of degree `2..=max_degree`. With
/// `stretch`, also `Δχ_s` and `Δξ_s` for `s = 2n - 3` against their closed forms.
pub fn bv_generators(name: &str, res: &Arc<Resolution>, engine: &Engine, max_degree: usize, stretch: bool) -> SuiteReport {
    let mut rep = SuiteReport::new("bv-generators", name, "Δ(ε̃₁) = 1/r, Δf = Δg = Δh = Δp = 0", 0);
    let d = res.dnr();
    let alg = d.alg();
    let field = alg.field();
    let frob = d.frobenius();
    let r = d.r as i64;
    if field.characteristic() != 0 && r % field.characteristic() as i64 == 0 {
        rep.error(format!("char k divides r = {r}; Δ is not defined on HH"));
        return rep;
    }
    let inv_r = field.fraction(1, r).expect("char k ∤ r");
    let run = |rep: &mut SuiteReport| -> Result<()> {
        let spec = res.generator(GeneratorKind::Eps1, 1)?;
        let eps = res.nu_conjugate_average(&spec, true)?;
        let got = cochain::bv_delta(&eps, frob)?.eval_basis(&[]);
        rep.record(got == alg.unit().scale(&inv_r), || format!("Δ(ε̃₁) = {got:?}"));
        for s in 2..=max_degree {
            for kind in [GeneratorKind::F, GeneratorKind::G, GeneratorKind::H, GeneratorKind::P] {
                let Ok(spec) = res.generator(kind, s) else { continue };
                let x = res.nu_conjugate_average(&spec, false)?.memoized();
                let ok = exact(engine, &cochain::bv_delta(&x, frob)?)?;
                rep.record(ok, || format!("Δ({kind:?}_{s}) is not a coboundary"));
            }
        }
        if stretch {
            let s = 2 * d.n - 3;
            let n = d.n as i64;
            // l = 1 in both closed forms
            let realized = |kind| -> Result<Option<Cochain>> {
                match res.generator(kind, s) {
                    Ok(spec) => Ok(Some(res.nu_conjugate_average(&spec, true)?)),
                    Err(crate::error::Error::GeneratorRefused(_)) => Ok(None),
                    Err(e) => Err(e),
                }
            };
            let zero = || Cochain::zero(alg.clone(), s - 1);
            if let Some(chi) = realized(GeneratorKind::Chi)? {
                let expected = if n % 2 == 0 {
                    let f = realized_at(res, GeneratorKind::F, s - 1)?;
                    let p = realized_at(res, GeneratorKind::P, s - 1)?;
                    f.scale(&field.fraction(n / 2, r)?).sub(&p.scale(&inv_r))?
                } else {
                    zero()
                };
                let diff = cochain::bv_delta(&chi, frob)?.sub(&expected)?;
                rep.record(exact(engine, &diff)?, || format!("Δ(χ_{s}) differs from its closed form"));
            }
            if let Some(xi) = realized(GeneratorKind::Xi)? {
                let h = realized_at(res, GeneratorKind::H, s - 1)?;
                let diff = cochain::bv_delta(&xi, frob)?.sub(&h.scale(&field.fraction(2, r)?))?;
                rep.record(exact(engine, &diff)?, || format!("Δ(ξ_{s}) differs from its closed form"));
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut rep) {
        rep.error(e);
    }
    rep
}

fn realized_at(res: &Arc<Resolution>, kind: GeneratorKind, s: usize) -> Result<Cochain> {
    let spec = res.generator(kind, s)?;
    res.nu_conjugate_average(&spec, true)
}

/// Structural checks on `R(n, r)`.
pub fn dnr_structure(d: &Arc<Dnr>) -> SuiteReport {
    let name = format!("R({},{}) over {}", d.n, d.r, d.alg().field());
    let mut rep = SuiteReport::new("structure", &name, "ν closed form, pairing, gradings, ε₁ = e_γ", 0);
    let alg = d.alg();
    let fr = d.frobenius();
    rep.record(fr.nakayama() == &d.nu_closed_form, || "solved ν differs from the closed form".into());
    rep.record(alg.check_grading(d.gamma_grading()).is_empty(), || "γ-grading inhomogeneous".into());
    rep.record(alg.check_grading(d.length_grading()).is_empty(), || "length grading inhomogeneous".into());
    let field = alg.field();
    for a in 0..alg.dim() {
        for b in 0..alg.dim() {
            let v = fr.pairing(&alg.basis(a), &alg.basis(b));
            let expect = if d.bar[b] == a { field.one() } else { field.zero() };
            rep.record(v == expect, || format!("⟨{}, {}⟩ = {v}", alg.label(a), alg.label(b)));
        }
    }
    let res = Arc::new(Resolution::new(d.clone()));
    match res.generator(GeneratorKind::Eps1, 1) {
        Ok(spec) => {
            let eps = res.realize_generator(&spec);
            let euler = cochain::euler_derivation(alg, d.gamma_grading()).expect("γ-grading is valid");
            for b in 0..alg.dim() {
                rep.record(eps.eval_basis(&[b]) == euler.eval_basis(&[b]), || format!("ε₁Ψ₁({}) ≠ deg·b", alg.label(b)));
            }
        }
        Err(e) => rep.error(e),
    }
    rep
}

/// Whether `Δf` of a degree-1 cochain equals the given central element.
pub fn delta_equals(f: &Cochain, frob: &FrobeniusData, expected: &Element) -> Result<bool> {
    let d = cochain::bv_delta(f, frob)?;
    Ok(&d.eval_basis(&[]) == expected)
}

/// Rank of a dense matrix, re-exported for report consumers.
pub fn matrix_rank(m: &[Vec<Scalar>], cols: usize, field: crate::scalar::Field) -> usize {
    dense_rank(field, m, cols)
}
