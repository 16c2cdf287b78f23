//! Cochain spaces as coordinate vectors, δ matrices, HH^n and the σ-fixed complex.
//!
//! Coordinates of `C^n` are `tuple_index * dim + out` with tuples in lexicographic
//! order. The σ-fixed subcomplex is described by a basis of full-coordinate vectors
//! per degree; the full complex uses the standard basis.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::algebra::{Algebra, Automorphism};
use crate::cochain::{self, Cochain};
use crate::error::{Error, Result};
use crate::frobenius::FrobeniusData;
use crate::linalg::{axpy, collect_sparse, kernel_basis, Echelon, Insert, SparseMatrix, SparseVec};
use crate::scalar::Scalar;

pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// `δ(e_c)` for the standard basis vector `c` of `C^n`, in `C^{n+1}` coordinates.
pub fn delta_column(alg: &Algebra, n: usize, c: usize) -> SparseVec {
    let d = alg.dim();
    let field = alg.field();
    let out = c % d;
    let t = cochain::index_to_tuple(c / d, d, n);
    let tidx = c / d;
    let dn = d.pow(n as u32);
    let mut entries: Vec<(usize, Scalar)> = Vec::new();
    for a0 in 0..d {
        for (k, x) in alg.basis_mul(a0, out) {
            entries.push(((a0 * dn + tidx) * d + k, x.clone()));
        }
    }
    let mut row = vec![0usize; n + 1];
    for i in 1..=n {
        let s = if i % 2 == 0 { field.one() } else { -field.one() };
        for (x, y, coef) in alg.preimages(t[i - 1]) {
            row[..i - 1].copy_from_slice(&t[..i - 1]);
            row[i - 1] = *x;
            row[i] = *y;
            row[i + 1..].copy_from_slice(&t[i..]);
            entries.push((cochain::tuple_to_index(&row, d) * d + out, &s * coef));
        }
    }
    let s = if (n + 1) % 2 == 0 { field.one() } else { -field.one() };
    for an in 0..d {
        for (k, x) in alg.basis_mul(out, an) {
            entries.push(((tidx * d + an) * d + k, &s * x));
        }
    }
    collect_sparse(field, entries)
}

/// `δ` applied to a full-coordinate vector of `C^n`.
pub fn apply_delta(alg: &Algebra, n: usize, v: &SparseVec) -> SparseVec {
    let mut acc = Vec::new();
    for (c, x) in v {
        acc = axpy(&acc, x, &delta_column(alg, n, *c));
    }
    acc
}

/// A basis of cohomology classes with a reducer expressing cocycles in it.
#[derive(Debug)]
pub struct CohomologyBasis {
    degree: usize,
    alg: Arc<Algebra>,
    reps: Vec<SparseVec>,
    /// Coboundaries untagged, then representatives tagged by their index.
    reducer: Echelon,
}

impl CohomologyBasis {
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn dim(&self) -> usize {
        self.reps.len()
    }
    pub fn representative_vector(&self, i: usize) -> &SparseVec {
        &self.reps[i]
    }
    pub fn representative(&self, i: usize) -> Cochain {
        Cochain::from_vector(self.alg.clone(), self.degree, &self.reps[i])
    }

    /// Class coordinates of a cocycle (full coordinates); errors when `v` is not in
    /// the cocycle space of this complex.
    pub fn coordinates(&self, v: &SparseVec) -> Result<Vec<Scalar>> {
        let field = self.alg.field();
        let (rem, used) = self.reducer.reduce(v.clone());
        if !rem.is_empty() {
            return Err(Error::NotCocycle);
        }
        // reduce() reports the subtracted multiples; v = Σ used_i rep_i + coboundary.
        let mut out = vec![field.zero(); self.reps.len()];
        for (i, x) in used {
            out[i] = x;
        }
        Ok(out)
    }

    pub fn class_of(&self, f: &Cochain) -> Result<Vec<Scalar>> {
        self.coordinates(&f.to_vector())
    }
}

/// Elimination state of `δ_n` restricted to the complex's basis of `C^n`.
#[derive(Debug)]
struct DeltaData {
    echelon: Echelon,
    /// Kernel vectors in full coordinates.
    kernel: Vec<SparseVec>,
}

/// The full cochain complex or a σ-fixed subcomplex.
pub struct Complex {
    alg: Arc<Algebra>,
    budget: u128,
    twist: Option<Automorphism>,
    bases: Mutex<HashMap<usize, Arc<Vec<SparseVec>>>>,
    deltas: Mutex<HashMap<usize, Arc<DeltaData>>>,
    hh: Mutex<HashMap<usize, Arc<CohomologyBasis>>>,
}

impl Complex {
    fn new(alg: Arc<Algebra>, budget: u128, twist: Option<Automorphism>) -> Self {
        Complex {
            alg,
            budget,
            twist,
            bases: Mutex::new(HashMap::new()),
            deltas: Mutex::new(HashMap::new()),
            hh: Mutex::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn twist(&self) -> Option<&Automorphism> {
        self.twist.as_ref()
    }

    /// Size of `C^n`, the number of scalars in a full cochain of degree `n`.
    pub fn space_size(&self, n: usize) -> u128 {
        (self.alg.dim() as u128).pow(n as u32 + 1)
    }

    fn check_budget(&self, n: usize) -> Result<()> {
        let size = self.space_size(n);
        if size > self.budget {
            return Err(Error::BudgetExceeded { degree: n, size, budget: self.budget });
        }
        Ok(())
    }

    /// Basis of this complex in degree `n`; `None` for the full complex.
    fn basis(&self, n: usize) -> Result<Option<Arc<Vec<SparseVec>>>> {
        let Some(sigma) = &self.twist else { return Ok(None) };
        if let Some(b) = self.bases.lock().expect("poisoned").get(&n) {
            return Ok(Some(b.clone()));
        }
        self.check_budget(n)?;
        let b = Arc::new(fixed_basis(&self.alg, sigma, n)?);
        self.bases.lock().expect("poisoned").insert(n, b.clone());
        Ok(Some(b))
    }

    /// Dimension of the complex in degree `n`.
    pub fn cochain_dim(&self, n: usize) -> Result<usize> {
        self.check_budget(n)?;
        Ok(match self.basis(n)? {
            None => self.space_size(n) as usize,
            Some(b) => b.len(),
        })
    }

    /// Matrix of `δ_n` from this complex's basis of `C^n` to full coordinates of `C^{n+1}`.
    pub fn delta_matrix(&self, n: usize) -> Result<SparseMatrix> {
        self.check_budget(n)?;
        let rows = self.space_size(n + 1) as usize;
        let columns = self.delta_columns(n)?;
        SparseMatrix::from_columns(self.alg.field(), rows, columns)
    }

    fn delta_columns(&self, n: usize) -> Result<Vec<SparseVec>> {
        Ok(match self.basis(n)? {
            None => (0..self.space_size(n) as usize).map(|c| delta_column(&self.alg, n, c)).collect(),
            Some(b) => b.iter().map(|v| apply_delta(&self.alg, n, v)).collect(),
        })
    }

    fn delta_data(&self, n: usize) -> Result<Arc<DeltaData>> {
        if let Some(d) = self.deltas.lock().expect("poisoned").get(&n) {
            return Ok(d.clone());
        }
        self.check_budget(n)?;
        let field = self.alg.field();
        let basis = self.basis(n)?;
        let count = match &basis {
            None => self.space_size(n) as usize,
            Some(b) => b.len(),
        };
        let mut echelon = Echelon::new(field);
        let mut kernel = Vec::new();
        for c in 0..count {
            let col = match &basis {
                None => delta_column(&self.alg, n, c),
                Some(b) => apply_delta(&self.alg, n, &b[c]),
            };
            if let Insert::Dependent(comb) = echelon.insert(col, vec![(c, field.one())]) {
                kernel.push(self.to_full(&basis, &comb));
            }
        }
        let data = Arc::new(DeltaData { echelon, kernel });
        self.deltas.lock().expect("poisoned").insert(n, data.clone());
        Ok(data)
    }

    fn to_full(&self, basis: &Option<Arc<Vec<SparseVec>>>, comb: &SparseVec) -> SparseVec {
        match basis {
            None => comb.clone(),
            Some(b) => {
                let mut acc = Vec::new();
                for (i, x) in comb {
                    acc = axpy(&acc, x, &b[*i]);
                }
                acc
            }
        }
    }

    pub fn rank_delta(&self, n: usize) -> Result<usize> {
        Ok(self.delta_data(n)?.echelon.rank())
    }

    pub fn hh_dim(&self, n: usize) -> Result<usize> {
        let below = if n == 0 { 0 } else { self.rank_delta(n - 1)? };
        Ok(self.cochain_dim(n)? - self.rank_delta(n)? - below)
    }

    pub fn hh(&self, n: usize) -> Result<Arc<CohomologyBasis>> {
        if let Some(h) = self.hh.lock().expect("poisoned").get(&n) {
            return Ok(h.clone());
        }
        let field = self.alg.field();
        let cocycles = self.delta_data(n)?;
        let mut reducer = Echelon::new(field);
        if n > 0 {
            let below = self.delta_data(n - 1)?;
            for v in below.echelon_vectors() {
                reducer.insert(v.clone(), Vec::new());
            }
        }
        let mut reps = Vec::new();
        for z in &cocycles.kernel {
            if let Insert::Independent = reducer.insert(z.clone(), vec![(reps.len(), field.one())]) {
                reps.push(z.clone());
            }
        }
        let h = Arc::new(CohomologyBasis { degree: n, alg: self.alg.clone(), reps, reducer });
        self.hh.lock().expect("poisoned").insert(n, h.clone());
        Ok(h)
    }

    /// A witness `g` with `δg = f` (in this complex), `None` when `f` is a cocycle but
    /// not a coboundary. Errors when `f` is not a cocycle.
    pub fn is_coboundary(&self, f: &Cochain) -> Result<Option<Cochain>> {
        let n = f.degree();
        let v = f.to_vector();
        self.check_budget(n)?;
        if !apply_delta(&self.alg, n, &v).is_empty() {
            return Err(Error::NotCocycle);
        }
        if n == 0 {
            return Ok(v.is_empty().then(|| Cochain::zero(self.alg.clone(), 0)));
        }
        let data = self.delta_data(n - 1)?;
        let (rem, used) = data.echelon.reduce(v.clone());
        if !rem.is_empty() {
            return Ok(None);
        }
        let basis = self.basis(n - 1)?;
        let w = self.to_full(&basis, &used);
        if apply_delta(&self.alg, n - 1, &w) != v {
            return Err(Error::Inconsistent("coboundary witness does not reproduce its target".into()));
        }
        Ok(Some(Cochain::from_vector(self.alg.clone(), n - 1, &w)))
    }

    /// Matrix of `f ↦ f^σ` on `HH^n` of this complex, columns indexed by classes.
    pub fn twist_action(&self, sigma: &Automorphism, n: usize) -> Result<Vec<Vec<Scalar>>> {
        let h = self.hh(n)?;
        let cols = (0..h.dim())
            .map(|i| h.class_of(&cochain::twist(&h.representative(i), sigma)))
            .collect::<Result<Vec<_>>>()?;
        Ok(transpose(&cols, h.dim(), self.alg.field()))
    }
}

impl DeltaData {
    fn echelon_vectors(&self) -> impl Iterator<Item = &SparseVec> {
        self.echelon.vectors()
    }
}

fn transpose(cols: &[Vec<Scalar>], rows: usize, field: crate::scalar::Field) -> Vec<Vec<Scalar>> {
    (0..rows).map(|r| cols.iter().map(|c| c.get(r).cloned().unwrap_or_else(|| field.zero())).collect()).collect()
}

/// Basis of the σ-fixed subspace of `C^n` in full coordinates.
fn fixed_basis(alg: &Algebra, sigma: &Automorphism, n: usize) -> Result<Vec<SparseVec>> {
    let d = alg.dim();
    let size = d.pow(n as u32 + 1);
    let field = alg.field();
    if let Some((perm, scal)) = sigma.as_monomial() {
        // T e_(u,o) = (Π_i s[π⁻¹u_i] / s[π⁻¹o]) e_(π⁻¹u, π⁻¹o); an orbit contributes its
        // sum exactly when the accumulated scalar around the cycle is one.
        let mut inv = vec![0usize; d];
        for (j, &p) in perm.iter().enumerate() {
            inv[p] = j;
        }
        let step = |c: usize| -> (usize, Scalar) {
            let t = cochain::index_to_tuple(c / d, d, n);
            let o = c % d;
            let mut x = field.one();
            let mut nt = Vec::with_capacity(n);
            for &u in &t {
                x = &x * &scal[inv[u]];
                nt.push(inv[u]);
            }
            x = &x * &scal[inv[o]].inv().expect("automorphism scalars are units");
            (cochain::tuple_to_index(&nt, d) * d + inv[o], x)
        };
        let mut seen = vec![false; size];
        let mut out = Vec::new();
        for c in 0..size {
            if seen[c] {
                continue;
            }
            let mut terms = vec![(c, field.one())];
            seen[c] = true;
            let (mut cur, mut x) = step(c);
            while cur != c {
                seen[cur] = true;
                terms.push((cur, x.clone()));
                let (next, y) = step(cur);
                x = &x * &y;
                cur = next;
            }
            if x.is_one() {
                terms.sort_by_key(|e| e.0);
                out.push(terms);
            }
        }
        return Ok(out);
    }
    // General σ: kernel of T - I with T(e_(u,o)) = Σ_t Π_i σ[u_i][t_i] e_t ⊗ σ⁻¹(b_o).
    let mut preimage: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); d];
    for j in 0..d {
        for (row, x) in &sigma.image(j).terms {
            preimage[*row].push((j, x.clone()));
        }
    }
    let mut columns = Vec::with_capacity(size);
    for c in 0..size {
        let u = cochain::index_to_tuple(c / d, d, n);
        let mut tuples: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), field.one())];
        for &ui in &u {
            let mut next = Vec::new();
            for (t, x) in &tuples {
                for (j, y) in &preimage[ui] {
                    let mut t2 = t.clone();
                    t2.push(*j);
                    next.push((t2, x * y));
                }
            }
            tuples = next;
        }
        let tail = sigma.inverse_image(c % d);
        let mut entries = vec![(c, -field.one())];
        for (t, x) in tuples {
            let base = cochain::tuple_to_index(&t, d) * d;
            for (k, y) in &tail.terms {
                entries.push((base + k, &x * y));
            }
        }
        columns.push(collect_sparse(field, entries));
    }
    let m = SparseMatrix::from_columns(field, size, columns)?;
    Ok(kernel_basis(&m)
        .into_iter()
        .map(|v| v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
        .collect())
}

/// The map `Θ: HH^n(R)^{σ↑} → HH^n(R)` in class coordinates.
#[derive(Clone, Debug)]
pub struct ThetaMap {
    /// Rows: classes of `HH^n(R)`; columns: classes of the fixed complex.
    pub matrix: Vec<Vec<Scalar>>,
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    /// Dimension of the σ-fixed subspace of `HH^n(R)`.
    pub fixed_dim: usize,
    pub injective: bool,
    /// Whether the image is the whole σ-fixed subspace.
    pub onto_fixed: bool,
}

/// Report for one pair of classes in the BV identity check.
#[derive(Clone, Debug)]
pub struct BvIdentityCheck {
    pub degrees: (usize, usize),
    pub classes: (usize, usize),
    pub holds: bool,
}

/// Cohomology computations for one algebra, with cached complexes.
pub struct Engine {
    alg: Arc<Algebra>,
    budget: u128,
    full: Arc<Complex>,
    fixed: Mutex<Vec<(Automorphism, Arc<Complex>)>>,
}

impl Engine {
    pub fn new(alg: Arc<Algebra>) -> Self {
        Self::with_budget(alg, DEFAULT_BUDGET)
    }

    pub fn with_budget(alg: Arc<Algebra>, budget: u128) -> Self {
        let full = Arc::new(Complex::new(alg.clone(), budget, None));
        Engine { alg, budget, full, fixed: Mutex::new(Vec::new()) }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }
    pub fn budget(&self) -> u128 {
        self.budget
    }

    pub fn full(&self) -> &Arc<Complex> {
        &self.full
    }

    /// The σ-fixed subcomplex; the identity gives the full complex.
    pub fn fixed(&self, sigma: &Automorphism) -> Arc<Complex> {
        if sigma.is_identity() {
            return self.full.clone();
        }
        let mut cache = self.fixed.lock().expect("poisoned");
        if let Some((_, c)) = cache.iter().find(|(s, _)| s == sigma) {
            return c.clone();
        }
        let c = Arc::new(Complex::new(self.alg.clone(), self.budget, Some(sigma.clone())));
        cache.push((sigma.clone(), c.clone()));
        c
    }

    pub fn delta_matrix(&self, n: usize) -> Result<SparseMatrix> {
        self.full.delta_matrix(n)
    }
    pub fn hh(&self, n: usize) -> Result<Arc<CohomologyBasis>> {
        self.full.hh(n)
    }
    pub fn hh_dim(&self, n: usize) -> Result<usize> {
        self.full.hh_dim(n)
    }
    pub fn hh_up(&self, sigma: &Automorphism, n: usize) -> Result<Arc<CohomologyBasis>> {
        self.fixed(sigma).hh(n)
    }
    pub fn hh_up_dim(&self, sigma: &Automorphism, n: usize) -> Result<usize> {
        self.fixed(sigma).hh_dim(n)
    }

    /// Coboundary test in the full complex, or in the σ-fixed one when `sigma` is given.
    pub fn is_coboundary(&self, f: &Cochain, sigma: Option<&Automorphism>) -> Result<Option<Cochain>> {
        match sigma {
            None => self.full.is_coboundary(f),
            Some(s) => self.fixed(s).is_coboundary(f),
        }
    }

    pub fn theta(&self, sigma: &Automorphism, n: usize) -> Result<ThetaMap> {
        let field = self.alg.field();
        let up = self.hh_up(sigma, n)?;
        let full = self.hh(n)?;
        let cols = (0..up.dim()).map(|i| full.coordinates(up.representative_vector(i))).collect::<Result<Vec<_>>>()?;
        let matrix = transpose(&cols, full.dim(), field);
        let rank = dense_rank(field, &matrix, up.dim());
        let action = self.full.twist_action(sigma, n)?;
        let mut shifted = action;
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] = &row[i] - &field.one();
        }
        let fixed_dim = full.dim() - dense_rank(field, &shifted, full.dim());
        Ok(ThetaMap {
            matrix,
            rank,
            source_dim: up.dim(),
            target_dim: full.dim(),
            fixed_dim,
            injective: rank == up.dim(),
            onto_fixed: rank == fixed_dim,
        })
    }

    fn nu_complex(&self, frob: &FrobeniusData) -> Arc<Complex> {
        self.fixed(frob.nakayama())
    }

    /// Normalized ν-invariant representative of class `i` in `HH^n(R)^{ν↑}`.
    pub fn normalized_representative(&self, frob: &FrobeniusData, n: usize, i: usize) -> Result<Cochain> {
        let h = self.nu_complex(frob).hh(n)?;
        cochain::normalize_unchecked(&h.representative(i))
    }

    /// Induced Δ on a class given by coordinates in `HH^n(R)^{ν↑}`; result in `HH^{n-1}(R)^{ν↑}`.
    pub fn induced_bv_on_class(&self, frob: &FrobeniusData, n: usize, class: &[Scalar]) -> Result<Vec<Scalar>> {
        let field = self.alg.field();
        let complex = self.nu_complex(frob);
        let h = complex.hh(n)?;
        if class.len() != h.dim() {
            return Err(Error::Dimension(format!("class of length {} in a space of dimension {}", class.len(), h.dim())));
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        let target = complex.hh(n - 1)?;
        let mut rep: SparseVec = Vec::new();
        for (i, x) in class.iter().enumerate() {
            rep = axpy(&rep, x, h.representative_vector(i));
        }
        if rep.is_empty() {
            return Ok(vec![field.zero(); target.dim()]);
        }
        let f = cochain::normalize_unchecked(&Cochain::from_vector(self.alg.clone(), n, &rep))?;
        let d = cochain::bv_delta(&f, frob)?;
        target.class_of(&d)
    }

    /// Matrix of the induced Δ: `HH^n(R)^{ν↑} → HH^{n-1}(R)^{ν↑}`, columns indexed by source classes.
    pub fn bv_matrix(&self, frob: &FrobeniusData, n: usize) -> Result<Vec<Vec<Scalar>>> {
        let field = self.alg.field();
        let complex = self.nu_complex(frob);
        let src = complex.hh(n)?.dim();
        let tgt = if n == 0 { 0 } else { complex.hh(n - 1)?.dim() };
        let cols = (0..src)
            .map(|i| {
                let mut e = vec![field.zero(); src];
                e[i] = field.one();
                self.induced_bv_on_class(frob, n, &e)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(transpose(&cols, tgt, field))
    }

    /// Checks `[a,b] = -(-1)^{(|a|-1)|b|}(Δ(a⌣b) - Δa⌣b - (-1)^{|a|} a⌣Δb)` as a class
    /// equality for representatives `i` of `HH^n(R)^{ν↑}` and `j` of `HH^m(R)^{ν↑}`.
    pub fn check_bv_identity(&self, frob: &FrobeniusData, n: usize, i: usize, m: usize, j: usize) -> Result<BvIdentityCheck> {
        let report = |holds| BvIdentityCheck { degrees: (n, m), classes: (i, j), holds };
        if n + m == 0 {
            // both sides live in degree -1
            return Ok(report(true));
        }
        let field = self.alg.field();
        let a = self.normalized_representative(frob, n, i)?;
        let b = self.normalized_representative(frob, m, j)?;
        let lhs = cochain::bracket(&a, &b)?;
        let mut inner = cochain::bv_delta(&cochain::cup(&a, &b)?, frob)?;
        if n > 0 {
            inner = inner.sub(&cochain::cup(&cochain::bv_delta(&a, frob)?, &b)?)?;
        }
        if m > 0 {
            let s = if n % 2 == 0 { -field.one() } else { field.one() };
            let t = cochain::cup(&a, &cochain::bv_delta(&b, frob)?)?;
            inner = inner.linear_combination(&field.one(), &t, &s)?;
        }
        let outer = if ((n + 1) * m) % 2 == 0 { -field.one() } else { field.one() };
        let diff = lhs.linear_combination(&field.one(), &inner, &-outer)?.materialize();
        let holds = self.nu_complex(frob).is_coboundary(&diff)?.is_some();
        Ok(report(holds))
    }
}

/// Rank of a dense row-major matrix with `cols` columns.
pub fn dense_rank(field: crate::scalar::Field, rows: &[Vec<Scalar>], cols: usize) -> usize {
    let columns: Vec<SparseVec> = (0..cols)
        .map(|c| rows.iter().enumerate().filter(|(_, r)| !r[c].is_zero()).map(|(i, r)| (i, r[c].clone())).collect())
        .collect();
    SparseMatrix::from_columns(field, rows.len(), columns).map(|m| crate::linalg::rank(&m)).unwrap_or(0)
}
