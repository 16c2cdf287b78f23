//! The self-injective algebras `R(n, r)` of tree type `D_n`.
//!
//! Vertices are `(i, j)` with `i ∈ Z_r` stored as `i mod r` (the label index `r` is
//! stored as 0) and `1 ≤ j ≤ n`. Arrows: `α_{i,j}: (i,j) → (i,j+1)` for `j ≤ n-3`,
//! `γ_{i,p}: (i,n-2) → (i,p)` and `β_{i,p}: (i,p) → (i+1,1)` for `p ∈ {n-1, n}`.
//! Paths compose right to left: `xy` means `y` first. A [`Path`] stores its arrows in
//! traversal order.
//!
//! The quotient `kQ/I` is computed by linear algebra: in each (source, target,
//! length) component the span of `u ρ w` over relations `ρ` is eliminated and the
//! listed basis words must complete it to the whole path space.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{Algebra, Automorphism, Element, Grading};
use crate::error::{Error, Result};
use crate::frobenius::FrobeniusData;
use crate::linalg::{Echelon, Insert, SparseVec};
use crate::scalar::{Field, Scalar};
use crate::zoo::Bundle;

pub type Vertex = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    Alpha(usize, usize),
    Gamma(usize, usize),
    Beta(usize, usize),
}

/// A path with explicit endpoints; `arrows` in traversal order (empty for `e_src`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub src: Vertex,
    pub tgt: Vertex,
    pub arrows: Vec<Arrow>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }
    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// The families of basis paths, with the index conventions of the presentation.
/// `i` is always stored mod `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// `μ_{i+1,t-1} τ_i η_{i,j}`, `1 ≤ t ≤ j ≤ n-2`.
    MuTauEta { i: usize, t: usize, j: usize },
    /// `ω_{i,t-1,j}`, `1 ≤ j ≤ t ≤ n-2` (`t = j` is `e_{i,j}`).
    Omega { i: usize, t: usize, j: usize },
    /// `γ_{i,p} η_{i,j}`, `1 ≤ j ≤ n-2`.
    GammaEta { i: usize, p: usize, j: usize },
    /// `μ_{i+1,j-1} β_{i,p}`, `1 ≤ j ≤ n-2`.
    MuBeta { i: usize, j: usize, p: usize },
    /// `γ_{i,p} μ_{i,n-3} β_{i-1,p}`.
    GammaMuBeta { i: usize, p: usize },
    /// `e_{i,p}` for `p ∈ {n-1, n}`.
    Idem { i: usize, p: usize },
}

/// `R(n, r)` with its attached structure.
pub struct Dnr {
    pub n: usize,
    pub r: usize,
    pub bundle: Bundle,
    pub kinds: Vec<BasisKind>,
    pub words: Vec<Path>,
    /// Basis index of `b̄` for each basis index `b`.
    pub bar: Vec<usize>,
    /// The automorphism `σ` (vertex shift by `n-1`, `φ^n` on the branch, sign on `γ`).
    pub sigma: Automorphism,
    /// The Nakayama automorphism in closed form (index shift `i ↦ i-1`).
    pub nu_closed_form: Automorphism,
    components: HashMap<(Vertex, Vertex, usize), Component>,
    word_index: HashMap<(Vertex, Vec<Arrow>), usize>,
}

struct Component {
    paths: HashMap<Vec<Arrow>, usize>,
    echelon: Echelon,
}

impl fmt::Debug for Dnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R({}, {}) over {}", self.n, self.r, self.bundle.alg.field())
    }
}

/// `φ`: fixes `1..n-2` and swaps `n-1 ↔ n`.
pub fn phi(n: usize, j: usize) -> usize {
    if j == n - 1 {
        n
    } else if j == n {
        n - 1
    } else {
        j
    }
}

pub fn phi_pow(n: usize, k: usize, j: usize) -> usize {
    if k % 2 == 0 {
        j
    } else {
        phi(n, j)
    }
}

impl Dnr {
    /// Reduces a signed index mod `r`.
    pub fn i(&self, i: i64) -> usize {
        i.rem_euclid(self.r as i64) as usize
    }

    /// Label index `1..=r` of a stored index.
    pub fn display_i(&self, i: usize) -> usize {
        if i == 0 {
            self.r
        } else {
            i
        }
    }

    pub fn alg(&self) -> &Arc<Algebra> {
        &self.bundle.alg
    }

    pub fn frobenius(&self) -> &FrobeniusData {
        self.bundle.frobenius.as_ref().expect("R(n, r) carries its form")
    }

    pub fn gamma_grading(&self) -> &Grading {
        &self.bundle.gradings["gamma"]
    }

    pub fn length_grading(&self) -> &Grading {
        &self.bundle.gradings["length"]
    }

    /// The σ action on vertices: `(i, j) ↦ (i+n-1, φ^n(j))`.
    pub fn sigma_vertex(&self, v: Vertex, power: usize) -> Vertex {
        let i = self.i(v.0 as i64 + (power * (self.n - 1)) as i64);
        (i, phi_pow(self.n, power * self.n, v.1))
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        (0..self.r).flat_map(|i| (1..=self.n).map(move |j| (i, j))).collect()
    }

    pub fn idempotent_index(&self, v: Vertex) -> usize {
        self.word_index[&(v, Vec::new())]
    }

    /// Basis index of a path that is literally a basis word.
    pub fn word(&self, p: &Path) -> Option<usize> {
        self.word_index.get(&(p.src, p.arrows.clone())).copied()
    }

    pub fn e(&self, i: i64, j: usize) -> Path {
        let v = (self.i(i), j);
        Path { src: v, tgt: v, arrows: Vec::new() }
    }

    pub fn alpha(&self, i: i64, j: usize) -> Result<Path> {
        if j == 0 || j > self.n - 3 {
            return Err(Error::Malformed(format!("α_{{{i},{j}}} does not exist")));
        }
        let i = self.i(i);
        Ok(Path { src: (i, j), tgt: (i, j + 1), arrows: vec![Arrow::Alpha(i, j)] })
    }

    pub fn gamma(&self, i: i64, p: usize) -> Result<Path> {
        self.check_branch(p)?;
        let i = self.i(i);
        Ok(Path { src: (i, self.n - 2), tgt: (i, p), arrows: vec![Arrow::Gamma(i, p)] })
    }

    pub fn beta(&self, i: i64, p: usize) -> Result<Path> {
        self.check_branch(p)?;
        let i0 = self.i(i);
        Ok(Path { src: (i0, p), tgt: (self.i(i + 1), 1), arrows: vec![Arrow::Beta(i0, p)] })
    }

    fn check_branch(&self, p: usize) -> Result<()> {
        if p == self.n - 1 || p == self.n {
            Ok(())
        } else {
            Err(Error::Malformed(format!("branch index {p} is not n-1 or n")))
        }
    }

    /// `ω_{i,hi,lo} = α_{i,hi} ⋯ α_{i,lo}`, from `(i,lo)` to `(i,hi+1)`; `e_{i,lo}` when `hi = lo-1`.
    pub fn omega(&self, i: i64, hi: i64, lo: i64) -> Result<Path> {
        let n = self.n as i64;
        if lo < 1 || hi > n - 3 || hi < lo - 1 {
            return Err(Error::Malformed(format!("ω_{{{i},{hi},{lo}}} does not exist")));
        }
        let i0 = self.i(i);
        let arrows = (lo..=hi).map(|j| Arrow::Alpha(i0, j as usize)).collect();
        Ok(Path { src: (i0, lo as usize), tgt: (i0, (hi + 1) as usize), arrows })
    }

    /// `μ_{i,j} = ω_{i,j,1}`.
    pub fn mu(&self, i: i64, j: i64) -> Result<Path> {
        self.omega(i, j, 1)
    }

    /// `η_{i,j} = ω_{i,n-3,j}`.
    pub fn eta(&self, i: i64, j: i64) -> Result<Path> {
        self.omega(i, self.n as i64 - 3, j)
    }

    /// `τ_i = β_{i,n} γ_{i,n}`.
    pub fn tau(&self, i: i64) -> Result<Path> {
        self.prod(&[self.beta(i, self.n)?, self.gamma(i, self.n)?])
    }

    /// Product `x_0 x_1 ⋯ x_k` (rightmost first); endpoints must match.
    pub fn prod(&self, factors: &[Path]) -> Result<Path> {
        let mut it = factors.iter().rev();
        let mut acc = it.next().ok_or_else(|| Error::Malformed("empty product".into()))?.clone();
        for next in it {
            if next.src != acc.tgt {
                return Err(Error::Malformed(format!(
                    "cannot compose: {} after {}",
                    self.path_label(next),
                    self.path_label(&acc)
                )));
            }
            acc.arrows.extend_from_slice(&next.arrows);
            acc.tgt = next.tgt;
        }
        Ok(acc)
    }

    /// Reduces a path to its normal form in the basis.
    pub fn reduce(&self, p: &Path) -> Element {
        if p.len() >= self.n {
            // every path of length n lies in I (checked at build time)
            return Element::zero();
        }
        let comp = &self.components[&(p.src, p.tgt, p.len())];
        let k = comp.paths[&p.arrows];
        let (rem, used) = comp.echelon.reduce(vec![(k, self.bundle.alg.field().one())]);
        debug_assert!(rem.is_empty());
        Element { terms: used }
    }

    pub fn path_label(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("e{},{}", self.display_i(p.src.0), p.src.1);
        }
        p.arrows
            .iter()
            .rev()
            .map(|a| match *a {
                Arrow::Alpha(i, j) => format!("a{},{}", self.display_i(i), j),
                Arrow::Gamma(i, p) => format!("g{},{}", self.display_i(i), p),
                Arrow::Beta(i, p) => format!("b{},{}", self.display_i(i), p),
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Basis words and kinds in a fixed order.
    fn basis_words(&self) -> Result<Vec<(BasisKind, Path)>> {
        let n = self.n as i64;
        let mut out = Vec::new();
        for i in 0..self.r as i64 {
            let iu = self.i(i);
            for j in 1..=n - 2 {
                for t in 1..=j {
                    let w = self.prod(&[self.mu(i + 1, t - 1)?, self.tau(i)?, self.eta(i, j)?])?;
                    out.push((BasisKind::MuTauEta { i: iu, t: t as usize, j: j as usize }, w));
                }
            }
            for j in 1..=n - 2 {
                for t in j..=n - 2 {
                    out.push((BasisKind::Omega { i: iu, t: t as usize, j: j as usize }, self.omega(i, t - 1, j)?));
                }
            }
            for p in [self.n - 1, self.n] {
                for j in 1..=n - 2 {
                    let w = self.prod(&[self.gamma(i, p)?, self.eta(i, j)?])?;
                    out.push((BasisKind::GammaEta { i: iu, p, j: j as usize }, w));
                }
                for j in 1..=n - 2 {
                    let w = self.prod(&[self.mu(i + 1, j - 1)?, self.beta(i, p)?])?;
                    out.push((BasisKind::MuBeta { i: iu, j: j as usize, p }, w));
                }
                let w = self.prod(&[self.gamma(i, p)?, self.mu(i, n - 3)?, self.beta(i - 1, p)?])?;
                out.push((BasisKind::GammaMuBeta { i: iu, p }, w));
                out.push((BasisKind::Idem { i: iu, p }, self.e(i, p)));
            }
        }
        Ok(out)
    }

    fn relations(&self) -> Result<Vec<Vec<(Path, i64)>>> {
        let n = self.n as i64;
        let mut out = Vec::new();
        for i in 0..self.r as i64 {
            for p in [self.n - 1, self.n] {
                let w = self.prod(&[self.gamma(i, phi(self.n, p))?, self.eta(i, 1)?, self.beta(i - 1, p)?])?;
                out.push(vec![(w, 1)]);
            }
            let a = self.prod(&[self.beta(i, self.n - 1)?, self.gamma(i, self.n - 1)?])?;
            out.push(vec![(a, 1), (self.tau(i)?, -1)]);
            for j in 1..=n - 3 {
                out.push(vec![(self.prod(&[self.mu(i + 1, j)?, self.tau(i)?, self.eta(i, j)?])?, 1)]);
            }
        }
        Ok(out)
    }

    fn out_arrows(&self, v: Vertex) -> Vec<(Arrow, Vertex)> {
        let (i, j) = v;
        let n = self.n;
        if j <= n - 3 {
            vec![(Arrow::Alpha(i, j), (i, j + 1))]
        } else if j == n - 2 {
            vec![(Arrow::Gamma(i, n - 1), (i, n - 1)), (Arrow::Gamma(i, n), (i, n))]
        } else {
            vec![(Arrow::Beta(i, j), ((i + 1) % self.r, 1))]
        }
    }
}

/// Builds `R(n, r)` over `field` with its form, `ν`, `σ` and both gradings.
pub fn build_dnr(n: usize, r: usize, field: Field) -> Result<Dnr> {
    if n < 4 || r < 1 {
        return Err(Error::InvalidParameters(format!("R(n, r) needs n >= 4 and r >= 1, got n = {n}, r = {r}")));
    }
    let mut d = Dnr {
        n,
        r,
        bundle: Bundle::bare(Arc::new(Algebra::new(field, vec!["1".into()], vec![(0, field.one())], [])?)),
        kinds: Vec::new(),
        words: Vec::new(),
        bar: Vec::new(),
        sigma: Automorphism::identity(&Algebra::new(field, vec!["1".into()], vec![(0, field.one())], [])?),
        nu_closed_form: Automorphism::identity(&Algebra::new(field, vec!["1".into()], vec![(0, field.one())], [])?),
        components: HashMap::new(),
        word_index: HashMap::new(),
    };
    let basis = d.basis_words()?;
    for (k, (_, w)) in basis.iter().enumerate() {
        if d.word_index.insert((w.src, w.arrows.clone()), k).is_some() {
            return Err(Error::Inconsistent(format!("basis word {} listed twice", d.path_label(w))));
        }
    }
    d.kinds = basis.iter().map(|(k, _)| *k).collect();
    d.words = basis.iter().map(|(_, w)| w.clone()).collect();

    // all paths of length <= n, grouped by component
    let mut by_comp: HashMap<(Vertex, Vertex, usize), Vec<Vec<Arrow>>> = HashMap::new();
    let mut frontier: Vec<Path> = d.vertices().into_iter().map(|v| Path { src: v, tgt: v, arrows: Vec::new() }).collect();
    for len in 0..=n {
        let mut next = Vec::new();
        for p in frontier {
            by_comp.entry((p.src, p.tgt, len)).or_default().push(p.arrows.clone());
            if len < n {
                for (a, v) in d.out_arrows(p.tgt) {
                    let mut arrows = p.arrows.clone();
                    arrows.push(a);
                    next.push(Path { src: p.src, tgt: v, arrows });
                }
            }
        }
        frontier = next;
    }
    let mut paths_by_end: HashMap<(Vertex, Vertex, usize), Vec<Path>> = HashMap::new();
    for (&(s, t, l), list) in &by_comp {
        paths_by_end.insert((s, t, l), list.iter().map(|a| Path { src: s, tgt: t, arrows: a.clone() }).collect());
    }
    let relations = d.relations()?;
    let mut ideal: HashMap<(Vertex, Vertex, usize), Vec<Vec<(Vec<Arrow>, i64)>>> = HashMap::new();
    let empty = Vec::new();
    for rel in &relations {
        let (rs, rt, rl) = (rel[0].0.src, rel[0].0.tgt, rel[0].0.len());
        for x in d.vertices() {
            for a in 0..=n - rl {
                for w in paths_by_end.get(&(x, rs, a)).unwrap_or(&empty) {
                    for y in d.vertices() {
                        for u in paths_by_end.get(&(rt, y, n - rl - a)).into_iter().flatten().chain(
                            (0..n - rl - a).flat_map(|b| paths_by_end.get(&(rt, y, b)).unwrap_or(&empty)),
                        ) {
                            let combo = rel
                                .iter()
                                .map(|(p, c)| {
                                    let mut arrows = w.arrows.clone();
                                    arrows.extend_from_slice(&p.arrows);
                                    arrows.extend_from_slice(&u.arrows);
                                    (arrows, *c)
                                })
                                .collect::<Vec<_>>();
                            ideal.entry((x, y, combo[0].0.len())).or_default().push(combo);
                        }
                    }
                }
            }
        }
    }
    for (key, list) in by_comp {
        let paths: HashMap<Vec<Arrow>, usize> = list.into_iter().enumerate().map(|(k, a)| (a, k)).collect();
        let mut echelon = Echelon::new(field);
        for combo in ideal.get(&key).into_iter().flatten() {
            let v: SparseVec = crate::linalg::collect_sparse(field, combo.iter().map(|(a, c)| (paths[a], field.from_i64(*c))));
            echelon.insert(v, Vec::new());
        }
        for (k, w) in d.words.iter().enumerate() {
            if (w.src, w.tgt, w.len()) == key {
                if let Insert::Dependent(_) = echelon.insert(vec![(paths[&w.arrows], field.one())], vec![(k, field.one())]) {
                    return Err(Error::Inconsistent(format!("basis word {} lies in the span of I and earlier words", d.path_label(w))));
                }
            }
        }
        if echelon.rank() != paths.len() {
            return Err(Error::Inconsistent(format!(
                "basis does not span paths {:?} -> {:?} of length {}",
                key.0, key.1, key.2
            )));
        }
        d.components.insert(key, Component { paths, echelon });
    }

    // structure constants
    let dim = d.words.len();
    let mut mul = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            let (wa, wb) = (&d.words[a], &d.words[b]);
            if wa.src != wb.tgt {
                continue;
            }
            let mut arrows = wb.arrows.clone();
            arrows.extend_from_slice(&wa.arrows);
            let prod = d.reduce(&Path { src: wb.src, tgt: wa.tgt, arrows });
            for (k, c) in prod.terms {
                let ok = c.is_one() || (-&c).is_one();
                if !ok {
                    return Err(Error::Inconsistent(format!("structure constant {c} outside {{0, ±1}}")));
                }
                mul.push((a, b, k, c));
            }
        }
    }
    let labels: Vec<String> = d.words.iter().map(|w| d.path_label(w)).collect();
    let unit = d.vertices().into_iter().map(|v| (d.word_index[&(v, Vec::new())], field.one())).collect();
    let alg = Algebra::new_validated(field, labels, unit, mul)?;

    let eps: Vec<Scalar> = d.words.iter().map(|w| if w.len() == n - 1 { field.one() } else { field.zero() }).collect();
    let frob = FrobeniusData::new(alg.clone(), eps)?;

    let gamma_deg: Vec<i64> = d
        .words
        .iter()
        .map(|w| w.arrows.iter().filter(|a| matches!(a, Arrow::Gamma(i, _) if *i == 1 % r)).count() as i64)
        .collect();
    let length_deg: Vec<i64> = d.words.iter().map(|w| w.len() as i64).collect();

    let sigma_images = d.words.iter().map(|w| d.map_word(w, true)).collect::<Result<Vec<_>>>()?;
    let nu_images = d.words.iter().map(|w| d.map_word(w, false)).collect::<Result<Vec<_>>>()?;
    d.sigma = Automorphism::new(&alg, sigma_images)?;
    d.nu_closed_form = Automorphism::new(&alg, nu_images)?;
    d.bar = d.kinds.iter().map(|k| d.bar_index(*k)).collect();

    let mut bundle = Bundle::bare(alg);
    bundle.frobenius = Some(frob);
    bundle.gradings.insert("gamma".into(), Grading::new(gamma_deg));
    bundle.gradings.insert("length".into(), Grading::new(length_deg));
    bundle.automorphisms.insert("sigma".into(), d.sigma.clone());
    bundle.automorphisms.insert("nu".into(), bundle.frobenius.as_ref().expect("set above").nakayama().clone());
    d.bundle = bundle;
    Ok(d)
}

impl Dnr {
    /// Image of a basis word under `σ` (`sigma = true`) or the closed-form `ν`.
    fn map_word(&self, w: &Path, sigma: bool) -> Result<Element> {
        let n = self.n;
        let field = self.bundle_field();
        let (shift, flip) = if sigma { ((n - 1) as i64, n % 2 == 1) } else { (-1, false) };
        let mv = |v: Vertex| -> Vertex { (self.i(v.0 as i64 + shift), if flip { phi(n, v.1) } else { v.1 }) };
        let mut sign = 1i64;
        let arrows: Vec<Arrow> = w
            .arrows
            .iter()
            .map(|a| match *a {
                Arrow::Alpha(i, j) => Arrow::Alpha(self.i(i as i64 + shift), j),
                Arrow::Gamma(i, p) => {
                    if sigma {
                        sign = -sign;
                    }
                    Arrow::Gamma(self.i(i as i64 + shift), if flip { phi(n, p) } else { p })
                }
                Arrow::Beta(i, p) => Arrow::Beta(self.i(i as i64 + shift), if flip { phi(n, p) } else { p }),
            })
            .collect();
        let image = Path { src: mv(w.src), tgt: mv(w.tgt), arrows };
        Ok(self.reduce(&image).scale(&field.from_i64(sign)))
    }

    fn bundle_field(&self) -> Field {
        // the structure constants live in the component echelons
        self.components.values().next().map(|c| c.echelon.field()).unwrap_or(Field::Rational)
    }

    fn index_of_kind(&self, k: BasisKind) -> usize {
        self.kinds.iter().position(|x| *x == k).expect("kind is in the basis")
    }

    /// `b̄` for a basis kind, per the duality table (completed for `e_{i,p}`).
    fn bar_index(&self, k: BasisKind) -> usize {
        let r1 = |i: usize| (i + 1) % self.r;
        let target = match k {
            BasisKind::MuTauEta { i, t, j } => BasisKind::Omega { i: r1(i), t: j, j: t },
            BasisKind::Omega { i, t, j } => BasisKind::MuTauEta { i, t: j, j: t },
            BasisKind::GammaEta { i, p, j } => BasisKind::MuBeta { i, j, p },
            BasisKind::MuBeta { i, j, p } => BasisKind::GammaEta { i: r1(i), p, j },
            BasisKind::GammaMuBeta { i, p } => BasisKind::Idem { i, p },
            BasisKind::Idem { i, p } => BasisKind::GammaMuBeta { i: r1(i), p },
        };
        self.index_of_kind(target)
    }

    /// All basis tuples `(a_1, …, a_k)` with `a_i a_{i+1}` composable, i.e.
    /// `src(a_i) = tgt(a_{i+1})`. Multilinear maps built from paths vanish elsewhere.
    pub fn composable_tuples(&self, k: usize) -> Vec<Vec<usize>> {
        let dim = self.words.len();
        let mut out: Vec<Vec<usize>> = if k == 0 { vec![Vec::new()] } else { (0..dim).map(|a| vec![a]).collect() };
        for _ in 1..k {
            out = out
                .into_iter()
                .flat_map(|t| {
                    let src = self.words[*t.last().expect("non-empty")].src;
                    (0..dim).filter(move |&b| self.words[b].tgt == src).map(move |b| {
                        let mut t2 = t.clone();
                        t2.push(b);
                        t2
                    })
                })
                .collect();
        }
        out
    }

    /// Number of elements in the basis set as listed without the branch idempotents.
    pub fn listed_basis_size(&self) -> usize {
        self.kinds.iter().filter(|k| !matches!(k, BasisKind::Idem { .. })).count()
    }

    /// The closed-form count `r((n-2)(n+3)+2)` attached to the listed basis.
    pub fn formula_dim(n: usize, r: usize) -> usize {
        r * ((n - 2) * (n + 3) + 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases_build() {
        for (n, r) in [(4, 1), (4, 2), (5, 1)] {
            let d = build_dnr(n, r, Field::Rational).unwrap();
            assert_eq!(d.alg().dim(), r * (n + 2) * (n - 1));
            assert_eq!(d.listed_basis_size(), Dnr::formula_dim(n, r));
        }
        assert!(build_dnr(3, 1, Field::Rational).is_err());
        assert!(build_dnr(4, 0, Field::Rational).is_err());
    }

    #[test]
    fn gamma_eta_product_is_basis_word() {
        let d = build_dnr(4, 1, Field::Rational).unwrap();
        let g = d.word(&d.gamma(1, 3).unwrap()).unwrap();
        let eta = d.word(&d.eta(1, 1).unwrap()).unwrap();
        let ge = d.word(&d.prod(&[d.gamma(1, 3).unwrap(), d.eta(1, 1).unwrap()]).unwrap()).unwrap();
        let a = d.alg();
        assert_eq!(a.mul(&a.basis(g), &a.basis(eta)), a.basis(ge));
    }

    #[test]
    fn structure_maps_agree_with_closed_forms() {
        for (n, r) in [(4, 1), (4, 2), (5, 2), (4, 3)] {
            let d = build_dnr(n, r, Field::Rational).unwrap();
            let fr = d.frobenius();
            assert_eq!(fr.nakayama(), &d.nu_closed_form, "R({n},{r})");
            assert_eq!(fr.nakayama_order(None), Some(r));
            assert!(d.alg().check_grading(d.gamma_grading()).is_empty());
            assert!(d.alg().check_grading(d.length_grading()).is_empty());
            // ⟨b̄, b⟩ = 1 and all other pairings of basis elements vanish
            let dim = d.alg().dim();
            for a in 0..dim {
                for b in 0..dim {
                    let v = fr.pairing(&d.alg().basis(a), &d.alg().basis(b));
                    let expect = if d.bar[b] == a { 1 } else { 0 };
                    assert_eq!(v, Field::Rational.from_i64(expect), "R({n},{r}) {a} {b}");
                }
            }
        }
    }

    #[test]
    fn tau_has_two_spellings() {
        let d = build_dnr(5, 1, Field::Rational).unwrap();
        let alt = d.prod(&[d.beta(1, 4).unwrap(), d.gamma(1, 4).unwrap()]).unwrap();
        assert_eq!(d.reduce(&alt), d.reduce(&d.tau(1).unwrap()));
        // γ_{φ(p)} η_1 β_p vanishes
        let z = d.prod(&[d.gamma(1, 5).unwrap(), d.eta(1, 1).unwrap(), d.beta(0, 4).unwrap()]).unwrap();
        assert!(d.reduce(&z).is_zero());
    }
}
