//! Sparse exact linear algebra.
//!
//! Everything here rests on [`Echelon`], an incremental column reducer: vectors are
//! inserted one at a time and reduced against the stored ones by their leading
//! (smallest) index. Stored vectors are normalized to leading coefficient one, so no
//! two share a leading index. Each stored vector can carry a tag, a sparse
//! combination of caller-chosen generator ids, which is what turns the reducer into
//! a kernel and preimage solver.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Sorted `(index, value)` pairs with no zero values.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `acc += c * v` on sorted sparse vectors.
pub fn axpy(acc: &SparseVec, c: &Scalar, v: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(acc.len() + v.len());
    let (mut i, mut j) = (0, 0);
    while i < acc.len() || j < v.len() {
        if j == v.len() || (i < acc.len() && acc[i].0 < v[j].0) {
            out.push(acc[i].clone());
            i += 1;
        } else if i == acc.len() || v[j].0 < acc[i].0 {
            let x = c * &v[j].1;
            if !x.is_zero() {
                out.push((v[j].0, x));
            }
            j += 1;
        } else {
            let x = &acc[i].1 + &(c * &v[j].1);
            if !x.is_zero() {
                out.push((acc[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(v: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, c * x)).collect()
}

/// Builds a sorted sparse vector from unsorted, possibly repeated entries.
pub fn collect_sparse(field: Field, entries: impl IntoIterator<Item = (usize, Scalar)>) -> SparseVec {
    let mut map: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (i, x) in entries {
        if x.is_zero() {
            continue;
        }
        let slot = map.entry(i).or_insert_with(|| field.zero());
        *slot = &*slot + &x;
    }
    map.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

#[derive(Clone, Debug)]
pub enum Insert {
    /// The vector was independent and is now stored.
    Independent,
    /// The vector reduced to zero; the payload is the tag combination that vanishes.
    Dependent(SparseVec),
}

/// Incremental echelon form over an exact field.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    pivots: HashMap<usize, usize>,
    vectors: Vec<SparseVec>,
    tags: Vec<SparseVec>,
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Echelon { field, pivots: HashMap::new(), vectors: Vec::new(), tags: Vec::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Reduces by leading terms. Returns the remainder (zero iff `v` lies in the span)
    /// and the tag combination of the multiples that were subtracted.
    pub fn reduce(&self, v: SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v;
        let mut used: SparseVec = Vec::new();
        while let Some((lead, coef)) = v.first().cloned() {
            let Some(&k) = self.pivots.get(&lead) else { break };
            let neg = -&coef;
            v = axpy(&v, &neg, &self.vectors[k]);
            if !self.tags[k].is_empty() {
                used = axpy(&used, &coef, &self.tags[k]);
            }
        }
        (v, used)
    }

    /// Inserts `v` carrying `tag`.
    pub fn insert(&mut self, v: SparseVec, tag: SparseVec) -> Insert {
        let (rem, used) = self.reduce(v);
        let tag = axpy(&tag, &-self.field.one(), &used);
        if rem.is_empty() {
            return Insert::Dependent(tag);
        }
        let inv = rem[0].1.inv().expect("leading coefficient is nonzero");
        let rem = scale(&rem, &inv);
        let tag = scale(&tag, &inv);
        self.pivots.insert(rem[0].0, self.vectors.len());
        self.vectors.push(rem);
        self.tags.push(tag);
        Insert::Independent
    }

    /// Stored (normalized) vectors; they span the inserted vectors.
    pub fn vectors(&self) -> impl Iterator<Item = &SparseVec> {
        self.vectors.iter()
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).0.is_empty()
    }
}

/// Exact sparse matrix. Entries are kept per column, sorted by row.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        SparseMatrix { field, rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, field.one())]).collect();
        SparseMatrix { field, rows: n, cols: n, columns }
    }

    /// Builds from `(row, col, value)` triples; repeated positions are summed, zeros dropped.
    pub fn from_triples(
        field: Field,
        rows: usize,
        cols: usize,
        triples: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self> {
        let mut per_col: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); cols];
        for (r, c, x) in triples {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange(format!("({r}, {c}) in {rows}x{cols}")));
            }
            if !field.contains(&x) {
                return Err(Error::FieldMismatch { expected: field.to_string(), found: x.field().to_string() });
            }
            per_col[c].push((r, x));
        }
        let columns = per_col.into_iter().map(|c| collect_sparse(field, c)).collect();
        Ok(SparseMatrix { field, rows, cols, columns })
    }

    pub fn from_dense(field: Field, dense: &[Vec<Scalar>]) -> Result<Self> {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        let mut triples = Vec::new();
        for (r, row) in dense.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension("ragged dense matrix".into()));
            }
            for (c, x) in row.iter().enumerate() {
                triples.push((r, c, x.clone()));
            }
        }
        Self::from_triples(field, rows, cols, triples)
    }

    /// Builds from sparse columns; validates bounds and field.
    pub fn from_columns(field: Field, rows: usize, columns: Vec<SparseVec>) -> Result<Self> {
        let cols = columns.len();
        let triples = columns
            .into_iter()
            .enumerate()
            .flat_map(|(c, col)| col.into_iter().map(move |(r, x)| (r, c, x)));
        Self::from_triples(field, rows, cols, triples)
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn column(&self, c: usize) -> &SparseVec {
        &self.columns[c]
    }
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.columns[c]
            .binary_search_by_key(&r, |e| e.0)
            .map(|k| self.columns[c][k].1.clone())
            .unwrap_or_else(|_| self.field.zero())
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut per_col: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, x) in col {
                per_col[*r].push((c, x.clone()));
            }
        }
        SparseMatrix { field: self.field, rows: self.cols, cols: self.rows, columns: per_col }
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        let mut out = vec![self.field.zero(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            if x[c].is_zero() {
                continue;
            }
            for (r, v) in col {
                out[*r] = &out[*r] + &(v * &x[c]);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut acc = Vec::new();
                for (k, x) in col {
                    acc = axpy(&acc, x, &self.columns[*k]);
                }
                acc
            })
            .collect();
        Ok(SparseMatrix { field: self.field, rows: self.rows, cols: other.cols, columns })
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// Column order used for elimination: sparsest columns first, ties by index.
    fn elimination_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.cols).collect();
        order.sort_by_key(|&c| (self.columns[c].len(), c));
        order
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    let mut ech = Echelon::new(m.field);
    for c in m.elimination_order() {
        ech.insert(m.columns[c].clone(), Vec::new());
    }
    ech.rank()
}

/// Basis of the null space as dense coefficient vectors, echelonized by the
/// position of their last nonzero entry in elimination order.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    let mut ech = Echelon::new(m.field);
    let mut out = Vec::new();
    for c in 0..m.cols {
        if let Insert::Dependent(comb) = ech.insert(m.columns[c].clone(), vec![(c, m.field.one())]) {
            let mut dense = vec![m.field.zero(); m.cols];
            for (i, x) in comb {
                dense[i] = x;
            }
            out.push(dense);
        }
    }
    out
}

/// Solves `m x = v`; `Ok(None)` means `v` is not in the image.
pub fn membership_solve(m: &SparseMatrix, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if v.len() != m.rows {
        return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", v.len(), m.rows)));
    }
    for x in v {
        if !m.field.contains(x) {
            return Err(Error::FieldMismatch { expected: m.field.to_string(), found: x.field().to_string() });
        }
    }
    let mut ech = Echelon::new(m.field);
    for c in m.elimination_order() {
        ech.insert(m.columns[c].clone(), vec![(c, m.field.one())]);
    }
    let target: SparseVec = v.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect();
    let (rem, used) = ech.reduce(target);
    if !rem.is_empty() {
        return Ok(None);
    }
    let mut x = vec![m.field.zero(); m.cols];
    for (i, c) in used {
        x[i] = c;
    }
    Ok(Some(x))
}

/// Dense inverse of a square matrix given as rows; `None` when singular.
pub fn dense_inverse(field: Field, a: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].inv().ok()?;
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..2 * n {
                    let t = &m[col][c] * &f;
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}
