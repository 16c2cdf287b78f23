//! Bimodule resolution shapes `Q_t` of `R(n, r)`, the left-linear contracting
//! homotopy `D_t`, the comparison map `Ψ_t` into it from the bar resolution, and
//! bar-cochain realizations of the standard cohomology generators.
//!
//! An element of `Q_t` is a sum of `c · u (e_{x_p} ⊗ e_{y_p}) v` with `u, v` basis
//! elements, `u = u e_{x_p}` and `v = e_{y_p} v`. `D_t` is given on left generators
//! `e_{x_p} ⊗ b` by a case table, extended left-linearly, and twisted by `σ^l` on the
//! left for `t` beyond one period `2n-3`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::algebra::{Automorphism, Element};
use crate::cochain::Cochain;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::zoo::dnr::{phi_pow, BasisKind, Dnr, Path, Vertex};

/// Default number of memoized `Ψ` values.
pub const DEFAULT_PSI_CAP: usize = 1 << 20;

/// Which display formula a summand comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SummandFamily {
    /// Even degree, `j ≤ n-2-m`.
    E1,
    /// Even degree, `j ≥ n-1-m`.
    E2,
    /// Even degree, branch vertices.
    E3,
    /// Odd degree, `j ≤ n-3-m`.
    O1,
    /// Odd degree, right vertex `(i, n-2-m)` and a branch on the left.
    O23,
    /// Odd degree, `j ≥ n-1-m`.
    O4,
    /// Odd degree, right vertex `(i, n-1)`.
    O5,
    /// Odd degree, right vertex `(i, n)`.
    O6,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SummandIndex {
    pub degree: usize,
    pub position: usize,
    pub family: SummandFamily,
    /// Left vertex after the `σ^l` twist.
    pub left: Vertex,
    pub right: Vertex,
    /// Left vertex in the untwisted shape of degree `t mod (2n-3)`.
    pub base_left: Vertex,
}

/// `(position, u, v, c)` terms of a contracting-homotopy image.
type DTerms = Vec<(usize, usize, usize, Scalar)>;

/// Sum of `c · u (e_{x_p} ⊗ e_{y_p}) v`, keyed by `(p, u, v)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResolutionElement {
    pub degree: usize,
    pub terms: BTreeMap<(usize, usize, usize), Scalar>,
}

impl ResolutionElement {
    pub fn zero(degree: usize) -> Self {
        ResolutionElement { degree, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, p: usize, u: usize, v: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((p, u, v)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn add_products(&mut self, p: usize, c: &Scalar, u: &Element, v: &Element) {
        for (a, ca) in &u.terms {
            let cu = c * ca;
            for (b, cb) in &v.terms {
                self.add_term(p, *a, *b, &cu * cb);
            }
        }
    }
}

/// Generator families of the cohomology ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Eps1,
    F,
    G,
    H,
    P,
    Chi,
    Xi,
    /// Degree-0 generator at vertex `(1, j)`, `1 ≤ j ≤ n-2` (only for `r = 1`).
    Eps0Path(usize),
    /// Degree-0 generator at branch vertex `(1, q)` (only for `r = 1`).
    Eps0Branch(usize),
}

/// A generator as a map `Q_s → R` given by dual maps `w*` with coefficients.
#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub degree: usize,
    /// `(m, l)` with `degree = t' + l(2n-3)`; `m` is the half-degree inside the period.
    pub m: usize,
    pub l: usize,
    /// `(position in Q_s, coefficient, w)`; `w*(e_{tgt w} ⊗ e_{src w}) = w`.
    pub duals: Vec<(usize, i64, Path)>,
    /// The `F(x)` value, with `[x, ε₁] = F(x)/r · x` at the class level.
    pub f_value: i64,
}

#[derive(Clone, Copy, Debug, Default)]
struct Vars {
    q: i64,
    p: i64,
}

struct Ctx<'a> {
    d: &'a Dnr,
    n: i64,
    m: i64,
    i: i64,
    /// Right vertex second coordinate.
    j: i64,
    /// Branch label `p` with `x_p = (i+m, φ^m p)` for the `O23` family.
    p: i64,
}

type Term = (i64, Path, Path);

struct Case {
    name: &'static str,
    pattern: fn(&Ctx, BasisKind) -> Option<Vars>,
    output: fn(&Ctx, Vars) -> Result<Vec<Term>>,
}

struct Table {
    cases: &'static [Case],
    zero_otherwise: bool,
}

impl Ctx<'_> {
    fn om(&self, i: i64, hi: i64, lo: i64) -> Result<Path> {
        self.d.omega(i, hi, lo)
    }
    fn mu(&self, i: i64, j: i64) -> Result<Path> {
        self.d.mu(i, j)
    }
    fn eta(&self, i: i64, j: i64) -> Result<Path> {
        self.d.eta(i, j)
    }
    fn tau(&self, i: i64) -> Result<Path> {
        self.d.tau(i)
    }
    fn ga(&self, i: i64, p: i64) -> Result<Path> {
        self.d.gamma(i, p as usize)
    }
    fn be(&self, i: i64, p: i64) -> Result<Path> {
        self.d.beta(i, p as usize)
    }
    fn e(&self, i: i64, j: i64) -> Path {
        self.d.e(i, j as usize)
    }
    fn prod(&self, f: &[Path]) -> Result<Path> {
        self.d.prod(f)
    }
    fn ph(&self, k: i64, p: i64) -> i64 {
        phi_pow(self.d.n, k as usize, p as usize) as i64
    }
}

fn none(_: &Ctx, _: Vars) -> Result<Vec<Term>> {
    Ok(Vec::new())
}

// ---- pattern helpers: `b` already has target equal to the right vertex ----

fn pat_omega(_: &Ctx, b: BasisKind) -> Option<Vars> {
    match b {
        BasisKind::Omega { j, .. } => Some(Vars { q: j as i64, p: 0 }),
        _ => None,
    }
}
fn pat_omega_high(c: &Ctx, b: BasisKind) -> Option<Vars> {
    pat_omega(c, b).filter(|v| v.q >= c.n - 1 - c.m)
}
fn pat_omega_low(c: &Ctx, b: BasisKind) -> Option<Vars> {
    pat_omega(c, b).filter(|v| v.q <= c.n - 2 - c.m)
}
fn pat_mu_beta(_: &Ctx, b: BasisKind) -> Option<Vars> {
    match b {
        BasisKind::MuBeta { p, .. } => Some(Vars { q: 0, p: p as i64 }),
        _ => None,
    }
}
fn pat_mte(_: &Ctx, b: BasisKind) -> Option<Vars> {
    match b {
        BasisKind::MuTauEta { j, .. } => Some(Vars { q: j as i64, p: 0 }),
        _ => None,
    }
}
fn pat_mte_diag(c: &Ctx, b: BasisKind) -> Option<Vars> {
    pat_mte(c, b).filter(|v| v.q == c.j)
}
fn pat_idem(_: &Ctx, b: BasisKind) -> Option<Vars> {
    matches!(b, BasisKind::Idem { .. }).then_some(Vars::default())
}
fn pat_gamma_eta(_: &Ctx, b: BasisKind) -> Option<Vars> {
    match b {
        BasisKind::GammaEta { j, .. } => Some(Vars { q: j as i64, p: 0 }),
        _ => None,
    }
}
fn pat_gmb(_: &Ctx, b: BasisKind) -> Option<Vars> {
    matches!(b, BasisKind::GammaMuBeta { .. }).then_some(Vars::default())
}

// ---- even degrees 2m, 0 ≤ m ≤ n-3 ----

/// `Σ_{s=lo}^{j-1} ω_{i+m,j+m-1,s+m+1} ⊗ right(s)`.
fn e1_sum(c: &Ctx, lo: i64, right: impl Fn(i64) -> Result<Path>) -> Result<Vec<Term>> {
    (lo..c.j).map(|s| Ok((1, c.om(c.i + c.m, c.j + c.m - 1, s + c.m + 1)?, right(s)?))).collect()
}

static E1: Table = Table {
    zero_otherwise: false,
    cases: &[
        Case {
            name: "E1: b = ω_{i,j-1,q}",
            pattern: pat_omega,
            output: |c, v| e1_sum(c, v.q, |s| c.om(c.i, s - 1, v.q)),
        },
        Case {
            name: "E1: b = μ_{i,j-1}β_{i-1,p}",
            pattern: pat_mu_beta,
            output: |c, v| {
                let mut t = e1_sum(c, 1, |s| c.prod(&[c.mu(c.i, s - 1)?, c.be(c.i - 1, v.p)?]))?;
                t.push((1, c.om(c.i + c.m, c.j + c.m - 1, c.m + 1)?, c.e(c.i - 1, v.p)));
                Ok(t)
            },
        },
        Case {
            name: "E1: b = μ_{i,j-1}τ_{i-1}η_{i-1,q}, q ≥ n-1-m",
            pattern: |c, b| pat_mte(c, b).filter(|v| v.q >= c.n - 1 - c.m),
            output: |c, v| {
                let (i, m, n, j, q) = (c.i, c.m, c.n, c.j, v.q);
                let mut t = e1_sum(c, 1, |s| c.prod(&[c.mu(i, s - 1)?, c.tau(i - 1)?, c.eta(i - 1, q)?]))?;
                t.push((1, c.om(i + m, j + m - 1, m + 1)?, c.prod(&[c.ga(i - 1, n - 1)?, c.eta(i - 1, q)?])?));
                t.push((-1, c.om(i + m, j + m - 1, q + m - (n - 2))?, c.e(i - 1, q)));
                Ok(t)
            },
        },
        Case {
            name: "E1: b = μ_{i,j-1}τ_{i-1}η_{i-1,q}, q ≤ n-2-m",
            pattern: |c, b| pat_mte(c, b).filter(|v| v.q <= c.n - 2 - c.m),
            output: |c, v| {
                let (i, m, n, j, q) = (c.i, c.m, c.n, c.j, v.q);
                let mut t = e1_sum(c, 1, |s| c.prod(&[c.mu(i, s - 1)?, c.tau(i - 1)?, c.eta(i - 1, q)?]))?;
                t.push((1, c.om(i + m, j + m - 1, m + 1)?, c.prod(&[c.ga(i - 1, n - 1)?, c.eta(i - 1, q)?])?));
                t.push((
                    1,
                    c.prod(&[c.mu(i + m, j + m - 1)?, c.be(i + m - 1, c.ph(m, n - 1))?])?,
                    c.om(i - 1, n - 3 - m, q)?,
                ));
                for s in q..=n - 3 - m {
                    t.push((
                        1,
                        c.prod(&[c.mu(i + m, j + m - 1)?, c.tau(i + m - 1)?, c.eta(i + m - 1, s + m + 1)?])?,
                        c.om(i - 1, s - 1, q)?,
                    ));
                }
                Ok(t)
            },
        },
    ],
};

static E2: Table = Table {
    zero_otherwise: true,
    cases: &[Case {
        name: "E2: b = μ_{i,j-1}τ_{i-1}η_{i-1,j}",
        pattern: pat_mte_diag,
        output: |c, _| Ok(vec![(-1, c.e(c.i + c.m, c.j + c.m - (c.n - 2)), c.e(c.i - 1, c.j))]),
    }],
};

static E3: Table = Table {
    zero_otherwise: false,
    cases: &[
        Case { name: "E3: b = e_{i,p}", pattern: pat_idem, output: none },
        Case {
            name: "E3: b = γ_{i,p}η_{i,q}, q ≥ n-1-m",
            pattern: |c, b| pat_gamma_eta(c, b).filter(|v| v.q >= c.n - 1 - c.m),
            output: none,
        },
        Case {
            name: "E3: b = γ_{i,p}η_{i,q}, q ≤ n-2-m",
            pattern: |c, b| pat_gamma_eta(c, b).filter(|v| v.q <= c.n - 2 - c.m),
            output: |c, v| {
                let (i, m, n, p, q) = (c.i, c.m, c.n, c.j, v.q);
                let mut t = vec![(1, c.e(i + m, c.ph(m, p)), c.om(i, n - 3 - m, q)?)];
                for s in q..=n - 3 - m {
                    t.push((1, c.prod(&[c.ga(i + m, c.ph(m, p))?, c.eta(i + m, s + m + 1)?])?, c.om(i, s - 1, q)?));
                }
                Ok(t)
            },
        },
        Case {
            name: "E3: b = γ_{i,p}η_{i,1}β_{i-1,p}",
            pattern: pat_gmb,
            output: |c, _| {
                let (i, m, n, p) = (c.i, c.m, c.n, c.j);
                let g = c.ga(i + m, c.ph(m, p))?;
                let mut t = vec![(1, c.e(i + m, c.ph(m, p)), c.prod(&[c.mu(i, n - 3 - m)?, c.be(i - 1, p)?])?)];
                for s in 1..=n - 3 - m {
                    t.push((1, c.prod(&[g.clone(), c.eta(i + m, s + m + 1)?])?, c.prod(&[c.mu(i, s - 1)?, c.be(i - 1, p)?])?));
                }
                t.push((1, c.prod(&[g, c.eta(i + m, m + 1)?])?, c.e(i - 1, p)));
                Ok(t)
            },
        },
    ],
};

// ---- odd degrees 2m+1, 0 ≤ m ≤ n-3 ----

static O1: Table = Table {
    zero_otherwise: true,
    cases: &[Case {
        name: "O1: b = μ_{i,j-1}τ_{i-1}η_{i-1,j}",
        pattern: pat_mte_diag,
        output: |c, _| Ok(vec![(1, c.e(c.i + c.m, c.j + c.m + 1), c.e(c.i - 1, c.j))]),
    }],
};

static O23: Table = Table {
    zero_otherwise: false,
    cases: &[
        Case { name: "O23: b = ω_{i,n-3-m,q}", pattern: pat_omega, output: none },
        Case {
            name: "O23: b = μ_{i,n-3-m}β_{i-1,p}",
            pattern: |c, b| pat_mu_beta(c, b).filter(|v| v.p == c.p),
            output: none,
        },
        Case {
            name: "O23: b = μ_{i,n-3-m}β_{i-1,φ(p)}",
            pattern: |c, b| pat_mu_beta(c, b).filter(|v| v.p != c.p),
            output: |c, v| Ok(vec![(1, c.e(c.i + c.m, c.ph(c.m, c.p)), c.e(c.i - 1, v.p))]),
        },
        Case {
            name: "O23: b = μ_{i,n-3-m}τ_{i-1}η_{i-1,q}, p = n",
            pattern: |c, b| pat_mte(c, b).filter(|_| c.p == c.n),
            output: |c, v| {
                let (i, m, n) = (c.i, c.m, c.n);
                Ok(vec![(1, c.e(i + m, c.ph(m, n)), c.prod(&[c.ga(i - 1, n - 1)?, c.eta(i - 1, v.q)?])?)])
            },
        },
        Case {
            name: "O23: b = μ_{i,n-3-m}τ_{i-1}η_{i-1,q}, p = n-1",
            pattern: |c, b| pat_mte(c, b).filter(|_| c.p == c.n - 1),
            output: |c, v| {
                let (i, m, n, q) = (c.i, c.m, c.n, v.q);
                let mut t = vec![(1, c.e(i + m, c.ph(m, n - 1)), c.prod(&[c.ga(i - 1, n)?, c.eta(i - 1, q)?])?)];
                for s in q..=n - 2 {
                    t.push((
                        1,
                        c.prod(&[c.ga(i + m, c.ph(m, n - 1))?, c.eta(i + m, s + m - (n - 3))?])?,
                        c.om(i - 1, s - 1, q)?,
                    ));
                }
                Ok(t)
            },
        },
    ],
};

/// `Σ_{s=lo}^{hi} ω_{i+m+1,top,s+m-(n-3)} ⊗ right(s)`.
fn odd_sum(c: &Ctx, top: i64, lo: i64, hi: i64, sign: i64, right: impl Fn(i64) -> Result<Path>) -> Result<Vec<Term>> {
    (lo..=hi).map(|s| Ok((sign, c.om(c.i + c.m + 1, top, s + c.m - (c.n - 3))?, right(s)?))).collect()
}

/// `μ_{i+m+1,k} β_{i+m,φ^{m+1}(p)}`.
fn mu_beta_left(c: &Ctx, k: i64, p: i64) -> Result<Path> {
    c.prod(&[c.mu(c.i + c.m + 1, k)?, c.be(c.i + c.m, c.ph(c.m + 1, p))?])
}

static O4: Table = Table {
    zero_otherwise: false,
    cases: &[
        Case {
            name: "O4: b = ω_{i,j-1,q}, q ≥ n-1-m",
            pattern: pat_omega_high,
            output: |c, v| odd_sum(c, c.j + c.m - (c.n - 1), v.q, c.j - 1, 1, |s| c.om(c.i, s - 1, v.q)),
        },
        Case {
            name: "O4: b = ω_{i,j-1,q}, q ≤ n-2-m",
            pattern: pat_omega_low,
            output: |c, v| odd_sum(c, c.j + c.m - (c.n - 1), c.n - 2 - c.m, c.j - 1, 1, |s| c.om(c.i, s - 1, v.q)),
        },
        Case {
            name: "O4: b = μ_{i,j-1}β_{i-1,p}",
            pattern: pat_mu_beta,
            output: |c, v| {
                let (i, m, n, j) = (c.i, c.m, c.n, c.j);
                let mut t = odd_sum(c, j + m - (n - 1), n - 2 - m, j - 1, 1, |s| {
                    c.prod(&[c.mu(i, s - 1)?, c.be(i - 1, v.p)?])
                })?;
                let sign = if v.p == n { -1 } else { 1 };
                t.push((sign, mu_beta_left(c, j + m - (n - 1), v.p)?, c.e(i - 1, v.p)));
                Ok(t)
            },
        },
        Case {
            name: "O4: b = μ_{i,j-1}τ_{i-1}η_{i-1,q}",
            pattern: pat_mte,
            output: |c, v| {
                let (i, m, n, j, q) = (c.i, c.m, c.n, c.j, v.q);
                let k = j + m - (n - 1);
                let mut t = odd_sum(c, k, n - 2 - m, j - 1, 1, |s| {
                    c.prod(&[c.mu(i, s - 1)?, c.tau(i - 1)?, c.eta(i - 1, q)?])
                })?;
                t.push((-1, mu_beta_left(c, k, n)?, c.prod(&[c.ga(i - 1, n)?, c.eta(i - 1, q)?])?));
                t.push((1, mu_beta_left(c, k, n - 1)?, c.prod(&[c.ga(i - 1, n - 1)?, c.eta(i - 1, q)?])?));
                for s in q..=n - 2 {
                    t.push((
                        -1,
                        c.prod(&[c.mu(i + m + 1, k)?, c.tau(i + m)?, c.eta(i + m, s + m - (n - 3))?])?,
                        c.om(i - 1, s - 1, q)?,
                    ));
                }
                Ok(t)
            },
        },
    ],
};

static O5: Table = Table {
    zero_otherwise: true,
    cases: &[Case {
        name: "O5: b = γ_{i,n-1}η_{i,1}β_{i-1,n-1}",
        pattern: pat_gmb,
        output: |c, _| {
            let (i, m, n) = (c.i, c.m, c.n);
            let mut t = odd_sum(c, m, n - 2 - m, n - 2, 1, |s| c.prod(&[c.mu(i, s - 1)?, c.be(i - 1, n - 1)?]))?;
            t.push((1, mu_beta_left(c, m, n - 1)?, c.e(i - 1, n - 1)));
            Ok(t)
        },
    }],
};

static O6: Table = Table {
    zero_otherwise: false,
    cases: &[
        Case { name: "O6: b = e_{i,n}", pattern: pat_idem, output: none },
        Case {
            name: "O6: b = γ_{i,n}η_{i,q}, q ≥ n-1-m",
            pattern: |c, b| pat_gamma_eta(c, b).filter(|v| v.q >= c.n - 1 - c.m),
            output: |c, v| odd_sum(c, c.m, v.q, c.n - 2, -1, |s| c.om(c.i, s - 1, v.q)),
        },
        Case {
            name: "O6: b = γ_{i,n}η_{i,q}, q ≤ n-2-m",
            pattern: |c, b| pat_gamma_eta(c, b).filter(|v| v.q <= c.n - 2 - c.m),
            output: |c, v| odd_sum(c, c.m, c.n - 2 - c.m, c.n - 2, -1, |s| c.om(c.i, s - 1, v.q)),
        },
        Case {
            name: "O6: b = γ_{i,n}η_{i,1}β_{i-1,n}",
            pattern: pat_gmb,
            output: |c, _| {
                let (i, m, n) = (c.i, c.m, c.n);
                let mut t = odd_sum(c, m, n - 2 - m, n - 2, -1, |s| c.prod(&[c.mu(i, s - 1)?, c.be(i - 1, n)?]))?;
                t.push((1, mu_beta_left(c, m, n)?, c.e(i - 1, n)));
                Ok(t)
            },
        },
    ],
};

// ---- top degree 2n-4 ----

static TOP_E2: Table = Table {
    zero_otherwise: true,
    cases: &[Case {
        name: "top: b = μ_{i,j-1}τ_{i-1}η_{i-1,j}",
        pattern: pat_mte_diag,
        output: |c, _| Ok(vec![(-1, c.e(c.i + c.n - 2, c.j), c.e(c.i - 1, c.j))]),
    }],
};

static TOP_E3: Table = Table {
    zero_otherwise: true,
    cases: &[Case {
        name: "top: b = γ_{i,p}η_{i,1}β_{i-1,p}",
        pattern: pat_gmb,
        output: |c, _| {
            let sign = if c.j == c.n { 1 } else { -1 };
            Ok(vec![(sign, c.e(c.i + c.n - 2, c.ph(c.n - 2, c.j)), c.e(c.i - 1, c.j))])
        },
    }],
};

/// Shapes, homotopy and `Ψ` for one `R(n, r)`.
pub struct Resolution {
    dnr: Arc<Dnr>,
    period: usize,
    sigma_powers: Mutex<Vec<Arc<Automorphism>>>,
    shapes: Mutex<HashMap<usize, Arc<Shape>>>,
    d_cache: Mutex<HashMap<(usize, usize, usize), Arc<DTerms>>>,
    psi_memo: Mutex<HashMap<Vec<usize>, Arc<ResolutionElement>>>,
    psi_cap: usize,
}

struct Shape {
    summands: Vec<SummandIndex>,
    index: HashMap<(Vertex, Vertex), usize>,
}

impl Resolution {
    pub fn new(dnr: Arc<Dnr>) -> Self {
        Self::with_psi_cap(dnr, DEFAULT_PSI_CAP)
    }

    /// Values beyond `cap` memo entries are recomputed on demand.
    pub fn with_psi_cap(dnr: Arc<Dnr>, cap: usize) -> Self {
        let period = 2 * dnr.n - 3;
        let id = Arc::new(Automorphism::identity(dnr.alg()));
        Resolution {
            dnr,
            period,
            sigma_powers: Mutex::new(vec![id]),
            shapes: Mutex::new(HashMap::new()),
            d_cache: Mutex::new(HashMap::new()),
            psi_memo: Mutex::new(HashMap::new()),
            psi_cap: cap,
        }
    }

    pub fn dnr(&self) -> &Arc<Dnr> {
        &self.dnr
    }

    pub fn period(&self) -> usize {
        self.period
    }

    fn sigma_pow(&self, l: usize) -> Arc<Automorphism> {
        let mut pows = self.sigma_powers.lock().expect("sigma cache poisoned");
        while pows.len() <= l {
            let next = self.dnr.sigma.compose(pows.last().expect("non-empty"));
            pows.push(Arc::new(next));
        }
        pows[l].clone()
    }

    /// The summands of `Q_t` in display order.
    pub fn qt_shape(&self, t: usize) -> Vec<SummandIndex> {
        self.shape(t).summands.clone()
    }

    fn shape(&self, t: usize) -> Arc<Shape> {
        if let Some(s) = self.shapes.lock().expect("shape cache poisoned").get(&t) {
            return s.clone();
        }
        let d = &*self.dnr;
        let (n, r) = (d.n as i64, d.r);
        let (tp, l) = (t % self.period, t / self.period);
        let m = (tp / 2) as i64;
        let mut raw: Vec<(SummandFamily, Vertex, Vertex)> = Vec::new();
        let v = |i: i64, j: i64| (d.i(i), j as usize);
        for i in 0..r as i64 {
            if tp % 2 == 0 {
                for j in 1..=n - 2 - m {
                    raw.push((SummandFamily::E1, v(i + m, j + m), v(i, j)));
                }
                for j in (n - 1 - m).max(1)..=n - 2 {
                    raw.push((SummandFamily::E2, v(i + m, j + m - (n - 2)), v(i, j)));
                }
                for p in [n - 1, n] {
                    raw.push((SummandFamily::E3, v(i + m, phi_pow(d.n, m as usize, p as usize) as i64), v(i, p)));
                }
            } else {
                for j in 1..=n - 3 - m {
                    raw.push((SummandFamily::O1, v(i + m, j + m + 1), v(i, j)));
                }
                for p in [n - 1, n] {
                    raw.push((SummandFamily::O23, v(i + m, p), v(i, n - 2 - m)));
                }
                for j in n - 1 - m..=n - 2 {
                    raw.push((SummandFamily::O4, v(i + m + 1, j + m - (n - 2)), v(i, j)));
                }
                raw.push((SummandFamily::O5, v(i + m + 1, m + 1), v(i, n - 1)));
                raw.push((SummandFamily::O6, v(i + m + 1, m + 1), v(i, n)));
            }
        }
        let summands: Vec<SummandIndex> = raw
            .into_iter()
            .enumerate()
            .map(|(position, (family, x, y))| SummandIndex {
                degree: t,
                position,
                family,
                left: d.sigma_vertex(x, l),
                right: y,
                base_left: x,
            })
            .collect();
        let index = summands.iter().map(|s| ((s.left, s.right), s.position)).collect::<HashMap<_, _>>();
        assert_eq!(index.len(), summands.len(), "vertex pairs of Q_{t} are not distinct");
        let shape = Arc::new(Shape { summands, index });
        self.shapes.lock().expect("shape cache poisoned").insert(t, shape.clone());
        shape
    }

    /// Position of the summand of `Q_t` with the given vertex pair.
    pub fn position(&self, t: usize, left: Vertex, right: Vertex) -> Option<usize> {
        self.shape(t).index.get(&(left, right)).copied()
    }

    fn table(&self, t: usize, family: SummandFamily) -> &'static Table {
        let top = t % self.period == self.period - 1;
        match (family, top) {
            (SummandFamily::E2, true) => &TOP_E2,
            (SummandFamily::E3, true) => &TOP_E3,
            (SummandFamily::E1, _) => &E1,
            (SummandFamily::E2, _) => &E2,
            (SummandFamily::E3, _) => &E3,
            (SummandFamily::O1, _) => &O1,
            (SummandFamily::O23, _) => &O23,
            (SummandFamily::O4, _) => &O4,
            (SummandFamily::O5, _) => &O5,
            (SummandFamily::O6, _) => &O6,
        }
    }

    /// Name of the case matching `(p, b)` in degree `t`, or `None` for the zero default.
    /// Errors when no case matches and no zero default exists, or when several match.
    pub fn matching_case(&self, t: usize, p: usize, b: usize) -> Result<Option<&'static str>> {
        let shape = self.shape(t);
        let s = &shape.summands[p];
        let ctx = self.ctx(t, s);
        let kind = self.dnr.kinds[b];
        let table = self.table(t, s.family);
        let hits: Vec<&Case> = table.cases.iter().filter(|c| (c.pattern)(&ctx, kind).is_some()).collect();
        match hits.len() {
            0 if table.zero_otherwise => Ok(None),
            1 => Ok(Some(hits[0].name)),
            k => Err(Error::Malformed(format!(
                "degree {t}, summand {p}, b = {}: {k} matching cases",
                self.dnr.alg().label(b)
            ))),
        }
    }

    fn ctx(&self, t: usize, s: &SummandIndex) -> Ctx<'_> {
        let d = &*self.dnr;
        let m = ((t % self.period) / 2) as i64;
        Ctx {
            d,
            n: d.n as i64,
            m,
            i: s.right.0 as i64,
            j: s.right.1 as i64,
            p: phi_pow(d.n, m as usize, s.base_left.1) as i64,
        }
    }

    /// `D_t(e_{x_p} ⊗ b)` as `(position, u, v, c)` terms in `Q_{t+1}`.
    pub fn d_generator(&self, t: usize, p: usize, b: usize) -> Result<Arc<DTerms>> {
        if let Some(v) = self.d_cache.lock().expect("D cache poisoned").get(&(t, p, b)) {
            return Ok(v.clone());
        }
        let d = &*self.dnr;
        let shape = self.shape(t);
        let s = &shape.summands[p];
        if d.words[b].tgt != s.right {
            return Err(Error::Malformed(format!("b = {} does not start at the right vertex", d.alg().label(b))));
        }
        let ctx = self.ctx(t, s);
        let kind = d.kinds[b];
        let table = self.table(t, s.family);
        let mut hits = table.cases.iter().filter_map(|c| (c.pattern)(&ctx, kind).map(|v| (c, v)));
        let terms = match (hits.next(), hits.next()) {
            (Some((case, vars)), None) => {
                (case.output)(&ctx, vars).map_err(|e| Error::Malformed(format!("{}: {e}", case.name)))?
            }
            (None, _) if table.zero_otherwise => Vec::new(),
            _ => {
                return Err(Error::Malformed(format!("degree {t}, summand {p}: no unique case for {}", d.alg().label(b))));
            }
        };
        let (tp, l) = (t % self.period, t / self.period);
        let sig = self.sigma_pow(l);
        let field = d.alg().field();
        let mut out = ResolutionElement::zero(t + 1);
        for (c, left, right) in terms {
            if left.tgt != s.base_left {
                return Err(Error::Malformed(format!("degree {t}: left factor {} does not end at x_p", d.path_label(&left))));
            }
            // positions are aligned between Q_{t'+1} and Q_{t+1}
            let q = self.position(tp + 1, left.src, right.tgt).ok_or_else(|| {
                Error::Malformed(format!(
                    "degree {t}: no summand for {} ⊗ {}",
                    d.path_label(&left),
                    d.path_label(&right)
                ))
            })?;
            let u = sig.apply(&d.reduce(&left));
            out.add_products(q, &field.from_i64(c), &u, &d.reduce(&right));
        }
        let v: Arc<Vec<_>> = Arc::new(out.terms.into_iter().map(|((q, u, v), c)| (q, u, v, c)).collect());
        self.d_cache.lock().expect("D cache poisoned").insert((t, p, b), v.clone());
        Ok(v)
    }

    /// `D_t` extended left-linearly.
    pub fn homotopy_d(&self, x: &ResolutionElement) -> Result<ResolutionElement> {
        let alg = self.dnr.alg();
        let mut out = ResolutionElement::zero(x.degree + 1);
        for (&(p, u, v), c) in &x.terms {
            for (q, u2, v2, c2) in self.d_generator(x.degree, p, v)?.iter() {
                let cc = c * c2;
                for (k, ck) in alg.basis_mul(u, *u2) {
                    out.add_term(*q, *k, *v2, &cc * ck);
                }
            }
        }
        Ok(out)
    }

    /// `D_{-1}(a) = Σ_x a e_x ⊗ e_x`.
    pub fn homotopy_d_minus1(&self, a: &Element) -> ResolutionElement {
        let d = &*self.dnr;
        let mut out = ResolutionElement::zero(0);
        for x in d.vertices() {
            let ex = d.idempotent_index(x);
            let p = self.position(0, x, x).expect("Q_0 has a summand per vertex");
            let ax = d.alg().mul_basis_right(a, ex);
            for (u, c) in ax.terms {
                out.add_term(p, u, ex, c);
            }
        }
        out
    }

    /// `μ(u ⊗ v) = uv` on a degree-0 element.
    pub fn multiply_out(&self, x: &ResolutionElement) -> Element {
        let alg = self.dnr.alg();
        let mut out = Element::zero();
        for (&(_, u, v), c) in &x.terms {
            out.add_scaled(c, &Element { terms: alg.basis_mul(u, v).clone() });
        }
        out
    }

    /// Right action of a basis element.
    pub fn mul_right(&self, x: &ResolutionElement, a: usize) -> ResolutionElement {
        let alg = self.dnr.alg();
        let mut out = ResolutionElement::zero(x.degree);
        for (&(p, u, v), c) in &x.terms {
            for (k, ck) in alg.basis_mul(v, a) {
                out.add_term(p, u, *k, c * ck);
            }
        }
        out
    }

    /// `Ψ_t(1 ⊗ a_1 ⊗ ⋯ ⊗ a_t ⊗ 1)` for basis indices.
    pub fn psi(&self, tuple: &[usize]) -> Result<Arc<ResolutionElement>> {
        if let Some(v) = self.psi_memo.lock().expect("psi memo poisoned").get(tuple) {
            return Ok(v.clone());
        }
        let value = match tuple.split_last() {
            None => Arc::new(self.homotopy_d_minus1(self.dnr.alg().unit())),
            Some((&last, prefix)) => {
                let prev = self.psi(prefix)?;
                Arc::new(self.homotopy_d(&self.mul_right(&prev, last))?)
            }
        };
        let mut memo = self.psi_memo.lock().expect("psi memo poisoned");
        if memo.len() < self.psi_cap {
            memo.insert(tuple.to_vec(), value.clone());
        }
        Ok(value)
    }

    /// Evaluates a map `Q_s → R` given by `(position, value)` on an element of `Q_s`.
    pub fn apply_dual(&self, duals: &[(usize, Element)], x: &ResolutionElement) -> Element {
        let alg = self.dnr.alg();
        let mut out = Element::zero();
        for (&(p, u, v), c) in &x.terms {
            for (q, w) in duals {
                if *q == p {
                    let uw = alg.mul(&alg.basis(u), w);
                    out.add_scaled(c, &alg.mul_basis_right(&uw, v));
                }
            }
        }
        out
    }

    /// Builds the dual-map description of a generator, refusing when its side
    /// conditions fail.
    pub fn generator(&self, kind: GeneratorKind, s: usize) -> Result<GeneratorSpec> {
        let d = &*self.dnr;
        let (n, r) = (d.n as i64, d.r as i64);
        let ch = d.alg().field().characteristic();
        let char2 = ch == 2;
        let (tp, l) = ((s % self.period) as i64, (s / self.period) as i64);
        let m = tp / 2;
        let refuse = |why: &str| Err(Error::GeneratorRefused(format!("{kind:?} in degree {s}: {why}")));
        let mut w: Vec<(i64, Path)> = Vec::new();
        let f_value;
        let dv = |x: i64, y: i64| y.rem_euclid(x) == 0;
        match kind {
            GeneratorKind::Eps1 => {
                if s != 1 {
                    return refuse("ε₁ lives in degree 1");
                }
                for q in [n - 1, n] {
                    w.push((1, d.prod(&[d.gamma(1, q as usize)?, d.eta(1, n - 2)?])?));
                }
                f_value = 0;
            }
            GeneratorKind::F => {
                if tp % 2 != 0 {
                    return refuse("degree must be 2m + l(2n-3)");
                }
                if !dv(r, m + l * (n - 1)) {
                    return refuse("r ∤ m + l(n-1)");
                }
                if !dv(2, m + l * n) {
                    return refuse("2 ∤ m + ln");
                }
                if !(char2 || l % 2 == 0) {
                    return refuse("needs char k = 2 or 2 | l");
                }
                for i in 1..=r {
                    for j in 1..=n - 2 - m {
                        w.push((1, d.omega(i, j + m - 1, j)?));
                    }
                    w.push((1, d.e(i, (n - 1) as usize)));
                    w.push((1, d.e(i, n as usize)));
                }
                f_value = m + l * (n - 1);
            }
            GeneratorKind::G => {
                if tp % 2 != 1 {
                    return refuse("degree must be 2m + 1 + l(2n-3)");
                }
                if !dv(r, m + l * (n - 1)) {
                    return refuse("r ∤ m + l(n-1)");
                }
                if dv(2, m + l * n) {
                    return refuse("2 | m + ln");
                }
                if !(char2 || l % 2 == 1) {
                    return refuse("needs char k = 2 or 2 ∤ l");
                }
                for i in 1..=r {
                    for j in n - 1 - m..=n - 2 {
                        w.push((1, d.prod(&[d.mu(i + 1, j + m - (n - 1))?, d.tau(i)?, d.eta(i, j)?])?));
                    }
                    w.push((1, d.prod(&[d.gamma(i, (n - 1) as usize)?, d.eta(i, n - 2 - m)?])?));
                    w.push((1, d.prod(&[d.mu(i + 1, m)?, d.beta(i, (n - 1) as usize)?])?));
                }
                f_value = m + l * (n - 1);
            }
            GeneratorKind::H | GeneratorKind::P => {
                if tp != 2 * n - 4 {
                    return refuse("degree must be (l+1)(2n-3) - 1");
                }
                if !dv(r, (l + 1) * (n - 1) - 1) {
                    return refuse("r ∤ (l+1)(n-1) - 1");
                }
                if kind == GeneratorKind::H {
                    if dv(2, (l + 1) * n) {
                        return refuse("2 | (l+1)n");
                    }
                } else {
                    if n % 2 != 0 {
                        return refuse("2 ∤ n");
                    }
                    if !(char2 || l % 2 == 0) {
                        return refuse("needs char k = 2 or 2 | l");
                    }
                }
                for i in 1..=r {
                    for j in 1..=n - 2 {
                        w.push((if j % 2 == 0 { 1 } else { -1 }, d.e(i, j as usize)));
                    }
                    if kind == GeneratorKind::P {
                        w.push((1, d.e(i, (n - 1) as usize)));
                    }
                }
                f_value = (l + 1) * (n - 1) - 1;
            }
            GeneratorKind::Chi | GeneratorKind::Xi => {
                if tp != 0 {
                    return refuse("degree must be l(2n-3)");
                }
                if !dv(r, l * (n - 1) - 1) {
                    return refuse("r ∤ l(n-1) - 1");
                }
                if kind == GeneratorKind::Chi {
                    if l < 1 {
                        return refuse("needs l ≥ 1");
                    }
                    if !dv(2, l * n) {
                        return refuse("2 ∤ ln");
                    }
                    if !(char2 || l % 2 == 1) {
                        return refuse("needs char k = 2 or 2 ∤ l");
                    }
                    w.push((1, d.prod(&[d.gamma(r + 1, n as usize)?, d.eta(r + 1, 1)?, d.beta(r, n as usize)?])?));
                } else {
                    if dv(2, l * n) {
                        return refuse("2 | ln");
                    }
                    w.push((1, d.prod(&[d.mu(r + 1, 0)?, d.tau(r)?, d.eta(r, 1)?])?));
                }
                f_value = l * (n - 1) - 1;
            }
            GeneratorKind::Eps0Path(j) => {
                if r != 1 || s != 0 {
                    return refuse("defined only for r = 1 in degree 0");
                }
                if j < 1 || j as i64 > n - 2 {
                    return refuse("vertex index out of range");
                }
                let j = j as i64;
                w.push((1, d.prod(&[d.mu(2, j - 1)?, d.tau(1)?, d.eta(1, j)?])?));
                f_value = 0;
            }
            GeneratorKind::Eps0Branch(q) => {
                if r != 1 || s != 0 {
                    return refuse("defined only for r = 1 in degree 0");
                }
                if q as i64 != n - 1 && q as i64 != n {
                    return refuse("branch index must be n-1 or n");
                }
                w.push((1, d.prod(&[d.gamma(2, q)?, d.eta(2, 1)?, d.beta(1, q)?])?));
                f_value = 0;
            }
        }
        let mut duals = Vec::new();
        for (c, path) in w {
            let Some(p) = self.position(s, path.tgt, path.src) else {
                return refuse(&format!("Q_{s} has no summand for ({})*", d.path_label(&path)));
            };
            duals.push((p, c, path));
        }
        Ok(GeneratorSpec { kind, degree: s, m: m as usize, l: l as usize, duals, f_value })
    }

    /// `(position, value)` pairs of a generator.
    pub fn dual_values(&self, spec: &GeneratorSpec) -> Vec<(usize, Element)> {
        let field = self.dnr.alg().field();
        spec.duals.iter().map(|(p, c, w)| (*p, self.dnr.reduce(w).scale(&field.from_i64(*c)))).collect()
    }

    /// The bar cochain `(a_1, …, a_s) ↦ x(Ψ_s(1 ⊗ a_1 ⊗ ⋯ ⊗ a_s ⊗ 1))`.
    pub fn realize_generator(self: &Arc<Self>, spec: &GeneratorSpec) -> Cochain {
        let duals = self.dual_values(spec);
        let me = self.clone();
        Cochain::from_rule(self.dnr.alg().clone(), spec.degree, move |tuple| {
            let psi = me.psi(tuple).expect("D table covers every generator");
            me.apply_dual(&duals, &psi)
        })
    }

    /// `Σ_{k<r} (x Ψ)^{ν^k}`, divided by `r` when requested.
    pub fn nu_conjugate_average(self: &Arc<Self>, spec: &GeneratorSpec, divide: bool) -> Result<Cochain> {
        let f = self.realize_generator(spec);
        crate::cochain::average_over_powers(&f, self.dnr.frobenius().nakayama(), self.dnr.r, divide)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;
    use crate::zoo::build_dnr;

    fn res(n: usize, r: usize) -> Arc<Resolution> {
        Arc::new(Resolution::new(Arc::new(build_dnr(n, r, Field::Rational).unwrap())))
    }

    #[test]
    fn shapes_and_periodicity() {
        let rs = res(4, 1);
        let q0 = rs.qt_shape(0);
        assert_eq!(q0.len(), 4);
        assert!(q0.iter().all(|s| s.left == s.right));
        let q5 = rs.qt_shape(5);
        for (a, b) in q0.iter().zip(&q5) {
            assert_eq!(b.left, rs.dnr().sigma_vertex(a.left, 1));
            assert_eq!(a.right, b.right);
        }
        assert_eq!(rs.qt_shape(1).len(), 5);
    }

    #[test]
    fn d_minus1_splits_multiplication() {
        let rs = res(4, 2);
        let alg = rs.dnr().alg().clone();
        for b in 0..alg.dim() {
            assert_eq!(rs.multiply_out(&rs.homotopy_d_minus1(&alg.basis(b))), alg.basis(b));
        }
    }

    #[test]
    fn idempotent_generators_vanish_under_d0() {
        let rs = res(4, 1);
        for s in rs.qt_shape(0) {
            let e = rs.dnr().idempotent_index(s.right);
            assert!(rs.d_generator(0, s.position, e).unwrap().is_empty());
        }
    }
}
