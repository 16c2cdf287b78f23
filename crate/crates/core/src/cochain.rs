//! Hochschild cochains `Hom_k(R^{⊗n}, R)` and their calculus.
//!
//! A cochain is either a sparse table on basis tuples or a lazy rule. Every
//! operation below returns a lazy rule closing over its inputs, so identities can
//! be checked on sampled tuples without materializing `dim^n` values. Use
//! [`Cochain::memoized`] when a rule is evaluated repeatedly on the same tuples.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::Rng;

use crate::algebra::{Algebra, Automorphism, Element, Grading};
use crate::error::{Error, Result};
use crate::frobenius::FrobeniusData;
use crate::linalg::SparseVec;
use crate::scalar::{Field, Scalar};

pub type Rule = Arc<dyn Fn(&[usize]) -> Element + Send + Sync>;

#[derive(Clone)]
enum Repr {
    Table(Arc<HashMap<Vec<usize>, Element>>),
    Rule(Rule),
}

#[derive(Clone)]
pub struct Cochain {
    alg: Arc<Algebra>,
    degree: usize,
    repr: Repr,
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.repr {
            Repr::Table(t) => format!("table with {} entries", t.len()),
            Repr::Rule(_) => "rule".to_string(),
        };
        write!(f, "Cochain(degree {}, {kind})", self.degree)
    }
}

fn sign(field: Field, exponent: usize) -> Scalar {
    if exponent % 2 == 0 {
        field.one()
    } else {
        -field.one()
    }
}

fn same_parent(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<()> {
    if Arc::ptr_eq(a, b) || (a.dim() == b.dim() && a.field() == b.field() && a.labels() == b.labels()) {
        Ok(())
    } else {
        Err(Error::InvalidParameters("cochains belong to different algebras".into()))
    }
}

impl Cochain {
    pub fn from_rule(alg: Arc<Algebra>, degree: usize, rule: impl Fn(&[usize]) -> Element + Send + Sync + 'static) -> Self {
        Cochain { alg, degree, repr: Repr::Rule(Arc::new(rule)) }
    }

    /// Sparse table; unlisted tuples evaluate to zero.
    pub fn from_table(alg: Arc<Algebra>, degree: usize, table: HashMap<Vec<usize>, Element>) -> Result<Self> {
        let d = alg.dim();
        for (t, v) in &table {
            if t.len() != degree || t.iter().any(|&i| i >= d) {
                return Err(Error::IndexOutOfRange(format!("tuple {t:?} for degree {degree}, dim {d}")));
            }
            if v.terms.iter().any(|(i, x)| *i >= d || !alg.field().contains(x)) {
                return Err(Error::InvalidParameters(format!("value at {t:?} is not an element of the algebra")));
            }
        }
        let table = table.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Cochain { alg, degree, repr: Repr::Table(Arc::new(table)) })
    }

    /// Degree-0 cochain `() ↦ a`.
    pub fn from_element(alg: Arc<Algebra>, a: Element) -> Self {
        let mut table = HashMap::new();
        if !a.is_zero() {
            table.insert(Vec::new(), a);
        }
        Cochain { alg, degree: 0, repr: Repr::Table(Arc::new(table)) }
    }

    /// From engine coordinates: entry `tuple_index * dim + out`, tuples in lexicographic order.
    pub fn from_vector(alg: Arc<Algebra>, degree: usize, v: &SparseVec) -> Self {
        let d = alg.dim();
        let field = alg.field();
        let mut raw: HashMap<Vec<usize>, Vec<(usize, Scalar)>> = HashMap::new();
        for (idx, x) in v {
            raw.entry(index_to_tuple(idx / d, d, degree)).or_default().push((idx % d, x.clone()));
        }
        let table = raw.into_iter().map(|(t, terms)| (t, Element::from_terms(field, terms))).collect();
        Cochain { alg, degree, repr: Repr::Table(Arc::new(table)) }
    }

    pub fn zero(alg: Arc<Algebra>, degree: usize) -> Self {
        Cochain { alg, degree, repr: Repr::Table(Arc::new(HashMap::new())) }
    }

    /// The identity map as a degree-1 cochain.
    pub fn identity(alg: Arc<Algebra>) -> Self {
        let field = alg.field();
        Cochain::from_rule(alg, 1, move |t| Element::basis(field, t[0]))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn field(&self) -> Field {
        self.alg.field()
    }

    /// Nonzero table entries, when stored as a table.
    pub fn table(&self) -> Option<&HashMap<Vec<usize>, Element>> {
        match &self.repr {
            Repr::Table(t) => Some(t),
            Repr::Rule(_) => None,
        }
    }

    pub fn eval_basis(&self, tuple: &[usize]) -> Element {
        debug_assert_eq!(tuple.len(), self.degree);
        match &self.repr {
            Repr::Table(t) => t.get(tuple).cloned().unwrap_or_default(),
            Repr::Rule(r) => r(tuple),
        }
    }

    /// Multilinear evaluation on arbitrary elements.
    pub fn eval(&self, args: &[Element]) -> Element {
        assert_eq!(args.len(), self.degree, "wrong number of arguments");
        let field = self.field();
        let mut acc = Element::zero();
        let mut tuple = vec![0usize; self.degree];
        fn rec(c: &Cochain, args: &[Element], pos: usize, coef: Scalar, tuple: &mut Vec<usize>, acc: &mut Element) {
            if pos == args.len() {
                let v = c.eval_basis(tuple);
                acc.add_scaled(&coef, &v);
                return;
            }
            for (i, x) in &args[pos].terms {
                tuple[pos] = *i;
                rec(c, args, pos + 1, &coef * x, tuple, acc);
            }
        }
        rec(self, args, 0, field.one(), &mut tuple, &mut acc);
        acc
    }

    /// Evaluates with one slot replaced by an element; `prefix ++ [slot] ++ suffix`.
    fn eval_slot(&self, prefix: &[usize], slot: &Element, suffix: &[usize]) -> Element {
        let mut tuple = Vec::with_capacity(self.degree);
        tuple.extend_from_slice(prefix);
        tuple.push(0);
        tuple.extend_from_slice(suffix);
        let p = prefix.len();
        let mut acc = Element::zero();
        for (k, c) in &slot.terms {
            tuple[p] = *k;
            acc.add_scaled(c, &self.eval_basis(&tuple));
        }
        acc
    }

    /// Caches evaluations on basis tuples. The cache is shared between clones.
    pub fn memoized(&self) -> Cochain {
        if let Repr::Table(_) = self.repr {
            return self.clone();
        }
        let inner = self.clone();
        let cache: Arc<Mutex<HashMap<Vec<usize>, Element>>> = Arc::new(Mutex::new(HashMap::new()));
        Cochain::from_rule(self.alg.clone(), self.degree, move |t| {
            if let Some(v) = cache.lock().expect("cache poisoned").get(t) {
                return v.clone();
            }
            let v = inner.eval_basis(t);
            cache.lock().expect("cache poisoned").insert(t.to_vec(), v.clone());
            v
        })
    }

    /// Evaluates on every basis tuple and stores the result as a table.
    pub fn materialize(&self) -> Cochain {
        if let Repr::Table(_) = self.repr {
            return self.clone();
        }
        let d = self.alg.dim();
        let mut table = HashMap::new();
        for idx in 0..d.pow(self.degree as u32) {
            let t = index_to_tuple(idx, d, self.degree);
            let v = self.eval_basis(&t);
            if !v.is_zero() {
                table.insert(t, v);
            }
        }
        Cochain { alg: self.alg.clone(), degree: self.degree, repr: Repr::Table(Arc::new(table)) }
    }

    /// Engine coordinates of this cochain (see [`Cochain::from_vector`]).
    pub fn to_vector(&self) -> SparseVec {
        let d = self.alg.dim();
        let mut out: SparseVec = Vec::new();
        match &self.repr {
            Repr::Table(t) => {
                for (tuple, v) in t.iter() {
                    let base = tuple_to_index(tuple, d) * d;
                    out.extend(v.terms.iter().map(|(k, x)| (base + k, x.clone())));
                }
                out.sort_by_key(|e| e.0);
            }
            Repr::Rule(_) => {
                for idx in 0..d.pow(self.degree as u32) {
                    let v = self.eval_basis(&index_to_tuple(idx, d, self.degree));
                    out.extend(v.terms.into_iter().map(|(k, x)| (idx * d + k, x)));
                }
            }
        }
        out
    }

    pub fn linear_combination(&self, a: &Scalar, other: &Cochain, b: &Scalar) -> Result<Cochain> {
        same_parent(&self.alg, &other.alg)?;
        if self.degree != other.degree {
            return Err(Error::InvalidParameters(format!("degrees {} and {} differ", self.degree, other.degree)));
        }
        let (f, g, a, b) = (self.clone(), other.clone(), a.clone(), b.clone());
        Ok(Cochain::from_rule(self.alg.clone(), self.degree, move |t| {
            let mut v = f.eval_basis(t).scale(&a);
            v.add_scaled(&b, &g.eval_basis(t));
            v
        }))
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        let one = self.field().one();
        self.linear_combination(&one, other, &one)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        let one = self.field().one();
        self.linear_combination(&one, other, &-&one)
    }

    pub fn scale(&self, c: &Scalar) -> Cochain {
        let (f, c) = (self.clone(), c.clone());
        Cochain::from_rule(self.alg.clone(), self.degree, move |t| f.eval_basis(t).scale(&c))
    }

    /// Whether the two cochains agree on every listed tuple.
    pub fn agrees_on<'a>(&self, other: &Cochain, tuples: impl IntoIterator<Item = &'a Vec<usize>>) -> bool {
        self.degree == other.degree && tuples.into_iter().all(|t| self.eval_basis(t) == other.eval_basis(t))
    }

    /// First tuple on which the cochain is nonzero, among those listed.
    pub fn first_nonzero<'a>(&self, tuples: impl IntoIterator<Item = &'a Vec<usize>>) -> Option<Vec<usize>> {
        tuples.into_iter().find(|t| !self.eval_basis(t).is_zero()).cloned()
    }
}

/// Lexicographic tuple index: `Σ t_k dim^{n-1-k}`.
pub fn tuple_to_index(tuple: &[usize], dim: usize) -> usize {
    tuple.iter().fold(0, |acc, &i| acc * dim + i)
}

pub fn index_to_tuple(mut idx: usize, dim: usize, degree: usize) -> Vec<usize> {
    let mut t = vec![0; degree];
    for k in (0..degree).rev() {
        t[k] = idx % dim;
        idx /= dim;
    }
    t
}

/// All basis tuples of the given length, in lexicographic order.
pub fn all_tuples(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    (0..dim.pow(degree as u32)).map(|i| index_to_tuple(i, dim, degree)).collect()
}

/// Uniformly random basis tuples.
pub fn sample_tuples(dim: usize, degree: usize, count: usize, rng: &mut impl Rng) -> Vec<Vec<usize>> {
    (0..count).map(|_| (0..degree).map(|_| rng.gen_range(0..dim)).collect()).collect()
}

/// Hochschild differential with the signs inside each face:
/// `δf(a_0..a_n) = a_0 f(a_1..) + Σ_{i=1}^{n} (-1)^i f(..a_{i-1}a_i..) + (-1)^{n+1} f(..a_{n-1}) a_n`.
pub fn coboundary(f: &Cochain) -> Cochain {
    let n = f.degree;
    let alg = f.alg.clone();
    let g = f.clone();
    Cochain::from_rule(f.alg.clone(), n + 1, move |a| {
        let field = alg.field();
        let mut acc = alg.mul_basis_left(a[0], &g.eval_basis(&a[1..]));
        for i in 1..=n {
            let prod = Element { terms: alg.basis_mul(a[i - 1], a[i]).clone() };
            if prod.is_zero() {
                continue;
            }
            let v = g.eval_slot(&a[..i - 1], &prod, &a[i + 1..]);
            acc.add_scaled(&sign(field, i), &v);
        }
        let last = alg.mul_basis_right(&g.eval_basis(&a[..n]), a[n]);
        acc.add_scaled(&sign(field, n + 1), &last);
        acc
    })
}

pub fn cup(f: &Cochain, g: &Cochain) -> Result<Cochain> {
    same_parent(&f.alg, &g.alg)?;
    let (n, m) = (f.degree, g.degree);
    let (alg, f, g) = (f.alg.clone(), f.clone(), g.clone());
    Ok(Cochain::from_rule(alg.clone(), n + m, move |a| {
        let left = f.eval_basis(&a[..n]);
        if left.is_zero() {
            return left;
        }
        alg.mul(&left, &g.eval_basis(&a[n..]))
    }))
}

/// Substitution at slot `i` (1-based): `f(a_1..a_{i-1}, g(a_i..a_{i+m-1}), a_{i+m}..)`.
/// With `m = 0` the element `g` is inserted at slot `i`.
pub fn circ_i(f: &Cochain, g: &Cochain, i: usize) -> Result<Cochain> {
    same_parent(&f.alg, &g.alg)?;
    let (n, m) = (f.degree, g.degree);
    if n == 0 || i == 0 || i > n {
        return Err(Error::InvalidParameters(format!("slot {i} out of range for degree {n}")));
    }
    let (f, g) = (f.clone(), g.clone());
    Ok(Cochain::from_rule(f.alg.clone(), n + m - 1, move |a| {
        let inner = g.eval_basis(&a[i - 1..i - 1 + m]);
        if inner.is_zero() {
            return inner;
        }
        f.eval_slot(&a[..i - 1], &inner, &a[i - 1 + m..])
    }))
}

/// `f∘g = Σ_{i=1}^n (-1)^{(m-1)(i-1)} f∘_i g`; zero when `n = 0`.
pub fn circ(f: &Cochain, g: &Cochain) -> Result<Cochain> {
    same_parent(&f.alg, &g.alg)?;
    let (n, m) = (f.degree, g.degree);
    if n + m == 0 {
        return Err(Error::InvalidParameters("composition of two degree-0 cochains has degree -1".into()));
    }
    let field = f.field();
    let parts: Vec<(Scalar, Cochain)> = (1..=n)
        .map(|i| Ok((sign(field, (m + 1) * (i + 1)), circ_i(f, g, i)?)))
        .collect::<Result<_>>()?;
    Ok(Cochain::from_rule(f.alg.clone(), n + m - 1, move |a| {
        let mut acc = Element::zero();
        for (s, c) in &parts {
            acc.add_scaled(s, &c.eval_basis(a));
        }
        acc
    }))
}

/// Gerstenhaber bracket `[f, g] = f∘g - (-1)^{(n-1)(m-1)} g∘f`.
pub fn bracket(f: &Cochain, g: &Cochain) -> Result<Cochain> {
    let (n, m) = (f.degree, g.degree);
    let fg = circ(f, g)?;
    let gf = circ(g, f)?;
    let s = -sign(f.field(), (n + 1) * (m + 1));
    fg.linear_combination(&f.field().one(), &gf, &s)
}

/// `f^σ(a) = σ⁻¹(f(σa_1, …, σa_n))`.
pub fn twist(f: &Cochain, sigma: &Automorphism) -> Cochain {
    if sigma.is_identity() {
        return f.clone();
    }
    let (g, sigma) = (f.clone(), Arc::new(sigma.clone()));
    Cochain::from_rule(f.alg.clone(), f.degree, move |a| {
        let args: Vec<Element> = a.iter().map(|&i| sigma.image(i).clone()).collect();
        sigma.apply_inverse(&g.eval(&args))
    })
}

/// `s_n^i(g)(a_1..a_n) = (-1)^i g(a_1..a_i, 1, a_{i+1}..a_n)` for `g` of degree `n+1`, `0 ≤ i ≤ n`.
pub fn degeneracy(g: &Cochain, i: usize) -> Result<Cochain> {
    if g.degree == 0 || i >= g.degree {
        return Err(Error::InvalidParameters(format!("degeneracy index {i} for degree {}", g.degree)));
    }
    let n = g.degree - 1;
    let s = sign(g.field(), i);
    let (h, unit) = (g.clone(), g.alg.unit().clone());
    Ok(Cochain::from_rule(g.alg.clone(), n, move |a| h.eval_slot(&a[..i], &unit, &a[i..]).scale(&s)))
}

/// Tuples on which the cocycle and invariance preconditions are checked: all of
/// them when the space is small, otherwise a fixed sample.
fn check_tuples(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    const EXHAUSTIVE: usize = 1 << 14;
    match dim.checked_pow(degree as u32) {
        Some(total) if total <= EXHAUSTIVE => all_tuples(dim, degree),
        _ => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6e6f726d);
            sample_tuples(dim, degree, 512, &mut rng)
        }
    }
}

/// Replaces `f` by `f - δ s^{N-1}(f)` for `N = 1..n`, giving a cohomologous cochain
/// that vanishes whenever an argument is the unit.
pub fn normalize(f: &Cochain, sigma: &Automorphism) -> Result<Cochain> {
    let n = f.degree;
    let d = f.alg.dim();
    let f = f.memoized();
    let df = coboundary(&f);
    if df.first_nonzero(&check_tuples(d, n + 1)).is_some() {
        return Err(Error::NotInvariantCocycle);
    }
    if !sigma.is_identity() && !twist(&f, sigma).agrees_on(&f, &check_tuples(d, n)) {
        return Err(Error::NotInvariantCocycle);
    }
    normalize_unchecked(&f)
}

pub(crate) fn normalize_unchecked(f: &Cochain) -> Result<Cochain> {
    let mut cur = f.memoized();
    for big_n in 1..=f.degree {
        let s = degeneracy(&cur, big_n - 1)?;
        cur = cur.sub(&coboundary(&s))?.memoized();
    }
    Ok(cur)
}

/// `Δ_i f(a_1..a_{n-1})`, the element whose pairing with `a_n` is
/// `ε(f(a_i..a_{n-1}, a_n, νa_1..νa_{i-1}))`.
pub fn bv_delta_i(f: &Cochain, i: usize, frob: &FrobeniusData) -> Result<Cochain> {
    same_parent(&f.alg, frob.algebra())?;
    let n = f.degree;
    if i == 0 || i > n {
        return Err(Error::InvalidParameters(format!("Δ_{i} undefined in degree {n}")));
    }
    let (g, frob) = (f.clone(), Arc::new(frob.clone()));
    Ok(Cochain::from_rule(f.alg.clone(), n - 1, move |a| {
        let alg = frob.algebra();
        let nu = frob.nakayama();
        let mut args: Vec<Element> = Vec::with_capacity(n);
        args.extend(a[i - 1..].iter().map(|&k| alg.basis(k)));
        args.push(Element::zero());
        args.extend(a[..i - 1].iter().map(|&k| nu.image(k).clone()));
        let slot = n - i;
        let mut acc = Element::zero();
        for k in 0..alg.dim() {
            args[slot] = alg.basis(k);
            let v = frob.counit(&g.eval(&args));
            if !v.is_zero() {
                acc.add_scaled(&v, frob.dual(k));
            }
        }
        acc
    }))
}

/// `Δ = Σ_{i=1}^n (-1)^{i(n-1)} Δ_i`; on degree 0 the result is the zero cochain.
pub fn bv_delta(f: &Cochain, frob: &FrobeniusData) -> Result<Cochain> {
    same_parent(&f.alg, frob.algebra())?;
    let n = f.degree;
    if n == 0 {
        return Ok(Cochain::zero(f.alg.clone(), 0));
    }
    let field = f.field();
    let parts: Vec<(Scalar, Cochain)> =
        (1..=n).map(|i| Ok((sign(field, i * (n - 1)), bv_delta_i(f, i, frob)?))).collect::<Result<_>>()?;
    Ok(sum_rule(f.alg.clone(), n - 1, parts))
}

/// `Δ′(f⊗g) = Σ_{i=1}^m (-1)^{i(n+m-1)} Δ_i(f⌣g)`.
pub fn delta_prime(f: &Cochain, g: &Cochain, frob: &FrobeniusData) -> Result<Cochain> {
    let (n, m) = (f.degree, g.degree);
    if n + m == 0 {
        return Err(Error::InvalidParameters("Δ′ needs total degree at least 1".into()));
    }
    let fg = cup(f, g)?;
    let field = f.field();
    let parts: Vec<(Scalar, Cochain)> =
        (1..=m).map(|i| Ok((sign(field, i * (n + m - 1)), bv_delta_i(&fg, i, frob)?))).collect::<Result<_>>()?;
    Ok(sum_rule(f.alg.clone(), n + m - 1, parts))
}

fn sum_rule(alg: Arc<Algebra>, degree: usize, parts: Vec<(Scalar, Cochain)>) -> Cochain {
    Cochain::from_rule(alg, degree, move |a| {
        let mut acc = Element::zero();
        for (s, c) in &parts {
            acc.add_scaled(s, &c.eval_basis(a));
        }
        acc
    })
}

/// `(1/o) Σ_{i<o} f^{ν^i}` with `o = ord ν`.
pub fn nu_average(f: &Cochain, frob: &FrobeniusData) -> Result<Cochain> {
    let order = frob.nakayama_order(None).ok_or(Error::InfiniteOrder(f.alg.dim() * f.alg.dim()))?;
    average_over_powers(f, frob.nakayama(), order, true)
}

/// `Σ_{i<order} f^{σ^i}`, divided by `order` when `divide`.
pub fn average_over_powers(f: &Cochain, sigma: &Automorphism, order: usize, divide: bool) -> Result<Cochain> {
    let field = f.field();
    if order == 1 {
        return Ok(f.clone());
    }
    let factor = if divide {
        let p = field.characteristic() as usize;
        if p != 0 && order % p == 0 {
            return Err(Error::AveragingUndefined { characteristic: p as u32, order });
        }
        field.fraction(1, order as i64)?
    } else {
        field.one()
    };
    let parts: Vec<(Scalar, Cochain)> = (0..order).map(|i| (factor.clone(), twist(f, &sigma.pow(i)))).collect();
    Ok(sum_rule(f.alg.clone(), f.degree, parts))
}

/// `e(b) = deg(b) b`, a derivation for every valid grading.
pub fn euler_derivation(alg: &Arc<Algebra>, grading: &Grading) -> Result<Cochain> {
    let bad = alg.check_grading(grading);
    if !bad.is_empty() {
        return Err(Error::InvalidGrading(format!("{} inhomogeneous products", bad.len())));
    }
    let field = alg.field();
    let degrees = grading.degrees.clone();
    Ok(Cochain::from_rule(alg.clone(), 1, move |t| Element::basis(field, t[0]).scale(&field.from_i64(degrees[t[0]]))))
}

fn random_coefficient(field: Field, rng: &mut impl Rng) -> Scalar {
    const POOL: [i64; 6] = [1, -1, 2, -2, 3, 5];
    loop {
        let c = field.from_i64(POOL[rng.gen_range(0..POOL.len())]);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Sparse random cochain: `support` tuples (default `3·dim`), each valued in a
/// random combination of one or two basis elements.
pub fn random_cochain(alg: &Arc<Algebra>, degree: usize, support: Option<usize>, rng: &mut impl Rng) -> Cochain {
    let d = alg.dim();
    let field = alg.field();
    let count = support.unwrap_or(3 * d);
    let mut table: HashMap<Vec<usize>, Element> = HashMap::new();
    for _ in 0..count {
        let t: Vec<usize> = (0..degree).map(|_| rng.gen_range(0..d)).collect();
        let terms = (0..rng.gen_range(1..=2)).map(|_| (rng.gen_range(0..d), random_coefficient(field, rng)));
        let v = Element::from_terms(field, terms);
        let slot = table.entry(t).or_default();
        *slot = slot.add(&v);
    }
    Cochain::from_table(alg.clone(), degree, table).expect("indices in range")
}

/// Random cochain homogeneous of internal degree `q`: `deg f(a) = Σ deg a_i - q`.
pub fn random_homogeneous(
    alg: &Arc<Algebra>,
    grading: &Grading,
    degree: usize,
    q: i64,
    support: Option<usize>,
    rng: &mut impl Rng,
) -> Cochain {
    let d = alg.dim();
    let field = alg.field();
    let mut by_degree: HashMap<i64, Vec<usize>> = HashMap::new();
    for (i, &g) in grading.degrees.iter().enumerate() {
        by_degree.entry(g).or_default().push(i);
    }
    let count = support.unwrap_or(3 * d);
    let mut table: HashMap<Vec<usize>, Element> = HashMap::new();
    for _ in 0..count * 4 {
        if table.len() >= count {
            break;
        }
        let t: Vec<usize> = (0..degree).map(|_| rng.gen_range(0..d)).collect();
        let target = t.iter().map(|&i| grading.degrees[i]).sum::<i64>() - q;
        let Some(outs) = by_degree.get(&target) else { continue };
        let terms = (0..rng.gen_range(1..=2)).map(|_| (outs[rng.gen_range(0..outs.len())], random_coefficient(field, rng)));
        let v = Element::from_terms(field, terms);
        let slot = table.entry(t).or_default();
        *slot = slot.add(&v);
    }
    Cochain::from_table(alg.clone(), degree, table).expect("indices in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn truncated(m: usize, field: Field) -> Arc<Algebra> {
        let labels = (0..m).map(|i| format!("x^{i}")).collect();
        let mul = (0..m).flat_map(|i| (0..m - i).map(move |j| (i, j, i + j, field.one())));
        Algebra::new_validated(field, labels, vec![(0, field.one())], mul).unwrap()
    }

    fn frob(a: &Arc<Algebra>) -> FrobeniusData {
        let d = a.dim();
        let f = a.field();
        let eps = (0..d).map(|i| if i == d - 1 { f.one() } else { f.zero() }).collect();
        FrobeniusData::new(a.clone(), eps).unwrap()
    }

    #[test]
    fn coboundary_of_identity_is_product() {
        let a = truncated(2, Field::Rational);
        let d = coboundary(&Cochain::identity(a.clone()));
        for t in all_tuples(2, 2) {
            let prod = Element { terms: a.basis_mul(t[0], t[1]).clone() };
            assert_eq!(d.eval_basis(&t), prod, "{t:?}");
        }
    }

    #[test]
    fn central_elements_are_cocycles() {
        let a = truncated(3, Field::Rational);
        let z = Cochain::from_element(a.clone(), a.basis(1));
        assert!(coboundary(&z).first_nonzero(&all_tuples(3, 1)).is_none());
    }

    #[test]
    fn cup_of_x_dual_with_itself() {
        let a = truncated(2, Field::Rational);
        let xs = Cochain::from_rule(a.clone(), 1, |t| if t[0] == 1 { Element::basis(Field::Rational, 1) } else { Element::zero() });
        let c = cup(&xs, &xs).unwrap();
        assert!(c.eval_basis(&[1, 1]).is_zero());
        let one = Cochain::from_element(a.clone(), a.unit().clone());
        assert!(cup(&one, &xs).unwrap().agrees_on(&xs, &all_tuples(2, 1)));
    }

    #[test]
    fn circ_with_identity_and_unit() {
        let a = truncated(3, Field::Rational);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_cochain(&a, 2, None, &mut rng);
        let id = Cochain::identity(a.clone());
        assert!(circ_i(&f, &id, 1).unwrap().agrees_on(&f, &all_tuples(3, 2)));
        let unit = Cochain::from_element(a.clone(), a.unit().clone());
        let ins = circ_i(&f, &unit, 2).unwrap();
        for t in all_tuples(3, 1) {
            assert_eq!(ins.eval_basis(&t), f.eval_basis(&[t[0], 0]));
        }
        assert!(circ_i(&f, &id, 3).is_err());
    }

    #[test]
    fn degeneracy_sign() {
        let a = truncated(2, Field::Rational);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = random_cochain(&a, 2, None, &mut rng);
        let s1 = degeneracy(&g, 1).unwrap();
        for t in all_tuples(2, 1) {
            assert_eq!(s1.eval_basis(&t), g.eval_basis(&[t[0], 0]).neg());
        }
        assert!(degeneracy(&g, 2).is_err());
    }

    #[test]
    fn delta_of_identity_on_dual_numbers() {
        let a = truncated(2, Field::Rational);
        let fr = frob(&a);
        let d = bv_delta(&Cochain::identity(a.clone()), &fr).unwrap();
        assert_eq!(d.degree(), 0);
        assert_eq!(d.eval_basis(&[]), a.unit().clone());
    }

    #[test]
    fn bracket_of_degree_one_with_itself_vanishes() {
        let a = truncated(3, Field::Rational);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_cochain(&a, 1, None, &mut rng);
        let b = bracket(&f, &f).unwrap();
        assert!(b.first_nonzero(&all_tuples(3, 1)).is_none());
    }

    #[test]
    fn tuple_index_round_trip() {
        for idx in 0..27 {
            assert_eq!(tuple_to_index(&index_to_tuple(idx, 3, 3), 3), idx);
        }
    }
}
