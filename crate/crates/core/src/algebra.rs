//! Finite-dimensional unital algebras given by structure constants.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{axpy, collect_sparse, kernel_basis, scale, SparseMatrix, SparseVec};
use crate::scalar::{Field, Scalar};

/// An algebra element as a sorted sparse coefficient vector over the basis.
///
/// Elements do not carry a reference to their algebra; operations go through
/// [`Algebra`] methods, which check indices against the dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    pub terms: SparseVec,
}

impl Element {
    pub fn zero() -> Self {
        Element { terms: Vec::new() }
    }

    pub fn basis(field: Field, i: usize) -> Self {
        Element { terms: vec![(i, field.one())] }
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        Element { terms: collect_sparse(field, terms) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Option<&Scalar> {
        self.terms.binary_search_by_key(&i, |t| t.0).ok().map(|k| &self.terms[k].1)
    }

    pub fn add(&self, other: &Element) -> Element {
        match other.terms.first() {
            None => self.clone(),
            Some((_, x)) => Element { terms: axpy(&self.terms, &x.field().one(), &other.terms) },
        }
    }

    pub fn sub(&self, other: &Element) -> Element {
        match other.terms.first() {
            None => self.clone(),
            Some((_, x)) => Element { terms: axpy(&self.terms, &-x.field().one(), &other.terms) },
        }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        Element { terms: scale(&self.terms, c) }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Element) {
        if !c.is_zero() && !other.is_zero() {
            self.terms = axpy(&self.terms, c, &other.terms);
        }
    }

    pub fn neg(&self) -> Element {
        Element { terms: self.terms.iter().map(|(i, x)| (*i, -x)).collect() }
    }

    pub fn to_dense(&self, field: Field, dim: usize) -> Vec<Scalar> {
        let mut out = vec![field.zero(); dim];
        for (i, x) in &self.terms {
            out[*i] = x.clone();
        }
        out
    }
}

/// Associative unital algebra with a fixed basis `b_0..b_{d-1}`.
#[derive(Clone, Debug)]
pub struct Algebra {
    field: Field,
    labels: Vec<String>,
    unit: Element,
    /// `table[i * dim + j]` is `b_i b_j`.
    table: Vec<SparseVec>,
    /// For each basis index `k`, the triples `(i, j, c)` with `c` the `b_k` coefficient of `b_i b_j`.
    preimages: Vec<Vec<(usize, usize, Scalar)>>,
}

/// A structural axiom failure found by [`Algebra::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Associativity(usize, usize, usize),
    LeftUnit(usize),
    RightUnit(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Associativity(i, j, k) => write!(f, "(b{i} b{j}) b{k} != b{i} (b{j} b{k})"),
            Violation::LeftUnit(i) => write!(f, "1 b{i} != b{i}"),
            Violation::RightUnit(i) => write!(f, "b{i} 1 != b{i}"),
        }
    }
}

impl Algebra {
    /// Builds the table from `(i, j, k, c)` entries meaning `b_i b_j` has `c` in position `k`.
    /// Axioms are not checked here; see [`Algebra::validate`] and [`Algebra::new_validated`].
    pub fn new(
        field: Field,
        labels: Vec<String>,
        unit: Vec<(usize, Scalar)>,
        mul: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension 0 has no unit".into()));
        }
        let check = |x: &Scalar| -> Result<()> {
            if field.contains(x) {
                Ok(())
            } else {
                Err(Error::FieldMismatch { expected: field.to_string(), found: x.field().to_string() })
            }
        };
        for (i, x) in &unit {
            check(x)?;
            if *i >= dim {
                return Err(Error::IndexOutOfRange(format!("unit index {i} >= {dim}")));
            }
        }
        let mut raw: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); dim * dim];
        for (i, j, k, x) in mul {
            check(&x)?;
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::IndexOutOfRange(format!("product entry ({i}, {j}, {k}) for dim {dim}")));
            }
            raw[i * dim + j].push((k, x));
        }
        let table: Vec<SparseVec> = raw.into_iter().map(|v| collect_sparse(field, v)).collect();
        let mut preimages = vec![Vec::new(); dim];
        for i in 0..dim {
            for j in 0..dim {
                for (k, c) in &table[i * dim + j] {
                    preimages[*k].push((i, j, c.clone()));
                }
            }
        }
        Ok(Algebra { field, labels, unit: Element::from_terms(field, unit), table, preimages })
    }

    /// As [`Algebra::new`], then rejects tables that fail [`Algebra::validate`].
    pub fn new_validated(
        field: Field,
        labels: Vec<String>,
        unit: Vec<(usize, Scalar)>,
        mul: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
    ) -> Result<Arc<Self>> {
        let a = Self::new(field, labels, unit, mul)?;
        let report = a.validate();
        if let Some(v) = report.first() {
            return Err(Error::InvalidAlgebra(format!("{} violations, first: {v}", report.len())));
        }
        Ok(Arc::new(a))
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
    pub fn unit(&self) -> &Element {
        &self.unit
    }
    pub fn basis(&self, i: usize) -> Element {
        Element::basis(self.field, i)
    }

    /// `b_i b_j`.
    pub fn basis_mul(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim() + j]
    }

    /// Pairs `(i, j, c)` whose product `b_i b_j` contains `c b_k`.
    pub fn preimages(&self, k: usize) -> &[(usize, usize, Scalar)] {
        &self.preimages[k]
    }

    /// All nonzero structure constants as `(i, j, k, c)`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for (k, c) in self.basis_mul(i, j) {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    fn check_element(&self, a: &Element) -> Result<()> {
        for (i, x) in &a.terms {
            if *i >= self.dim() {
                return Err(Error::IndexOutOfRange(format!("basis index {i} >= {}", self.dim())));
            }
            if !self.field.contains(x) {
                return Err(Error::FieldMismatch { expected: self.field.to_string(), found: x.field().to_string() });
            }
        }
        Ok(())
    }

    /// Checked product; fails when an operand does not belong to this algebra.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul(a, b))
    }

    /// Unchecked product.
    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut acc: SparseVec = Vec::new();
        for (i, x) in &a.terms {
            for (j, y) in &b.terms {
                let prod = self.basis_mul(*i, *j);
                if !prod.is_empty() {
                    acc = axpy(&acc, &(x * y), prod);
                }
            }
        }
        Element { terms: acc }
    }

    /// `a b_j` for a basis index `j`.
    pub fn mul_basis_right(&self, a: &Element, j: usize) -> Element {
        let mut acc: SparseVec = Vec::new();
        for (i, x) in &a.terms {
            let prod = self.basis_mul(*i, j);
            if !prod.is_empty() {
                acc = axpy(&acc, x, prod);
            }
        }
        Element { terms: acc }
    }

    /// `b_i a` for a basis index `i`.
    pub fn mul_basis_left(&self, i: usize, a: &Element) -> Element {
        let mut acc: SparseVec = Vec::new();
        for (j, x) in &a.terms {
            let prod = self.basis_mul(i, *j);
            if !prod.is_empty() {
                acc = axpy(&acc, x, prod);
            }
        }
        Element { terms: acc }
    }

    /// Every associativity and unit violation on basis triples and pairs.
    pub fn validate(&self) -> Vec<Violation> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            let bi = self.basis(i);
            if self.mul(&self.unit, &bi) != bi {
                out.push(Violation::LeftUnit(i));
            }
            if self.mul(&bi, &self.unit) != bi {
                out.push(Violation::RightUnit(i));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = Element { terms: self.basis_mul(i, j).clone() };
                for k in 0..d {
                    let left = self.mul_basis_right(&ij, k);
                    let jk = Element { terms: self.basis_mul(j, k).clone() };
                    let right = self.mul_basis_left(i, &jk);
                    if left != right {
                        out.push(Violation::Associativity(i, j, k));
                    }
                }
            }
        }
        out
    }

    /// Basis of the center, as the kernel of `z -> (z b_j - b_j z)_j`.
    pub fn center(&self) -> Vec<Element> {
        let d = self.dim();
        let mut triples = Vec::new();
        for z in 0..d {
            for j in 0..d {
                for (k, c) in self.basis_mul(z, j) {
                    triples.push((j * d + k, z, c.clone()));
                }
                for (k, c) in self.basis_mul(j, z) {
                    triples.push((j * d + k, z, -c));
                }
            }
        }
        let m = SparseMatrix::from_triples(self.field, d * d, d, triples).expect("indices in range");
        kernel_basis(&m)
            .into_iter()
            .map(|v| Element { terms: v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect() })
            .collect()
    }

    /// Homogeneity failures `(i, j)` of the structure constants for `grading`.
    pub fn check_grading(&self, grading: &Grading) -> Vec<(usize, usize)> {
        let d = self.dim();
        if grading.degrees.len() != d {
            return (0..d).map(|i| (i, i)).collect();
        }
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let want = grading.degrees[i] + grading.degrees[j];
                if self.basis_mul(i, j).iter().any(|(k, _)| grading.degrees[*k] != want) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// A Z-grading: one degree per basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub degrees: Vec<i64>,
}

impl Grading {
    pub fn new(degrees: Vec<i64>) -> Self {
        Grading { degrees }
    }

    pub fn zero(dim: usize) -> Self {
        Grading { degrees: vec![0; dim] }
    }

    /// Degree of an element when homogeneous; `None` for mixed or zero elements.
    pub fn degree_of(&self, a: &Element) -> Option<i64> {
        let mut it = a.terms.iter().map(|(i, _)| self.degrees[*i]);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

/// An algebra automorphism, stored by the images of basis elements.
#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism {
    images: Vec<Element>,
    inverse: Vec<Element>,
}

impl Automorphism {
    pub fn identity(alg: &Algebra) -> Self {
        let images: Vec<Element> = (0..alg.dim()).map(|i| alg.basis(i)).collect();
        Automorphism { inverse: images.clone(), images }
    }

    /// Validates invertibility, `σ(1) = 1` and multiplicativity on all basis pairs.
    pub fn new(alg: &Algebra, images: Vec<Element>) -> Result<Self> {
        let d = alg.dim();
        if images.len() != d {
            return Err(Error::Dimension(format!("{} images for dimension {d}", images.len())));
        }
        for a in &images {
            alg.check_element(a)?;
        }
        let dense: Vec<Vec<Scalar>> = (0..d)
            .map(|row| images.iter().map(|img| img.coeff(row).cloned().unwrap_or_else(|| alg.field.zero())).collect())
            .collect();
        let inv = crate::linalg::dense_inverse(alg.field, &dense)
            .ok_or_else(|| Error::NotAutomorphism("matrix is singular".into()))?;
        let inverse = (0..d)
            .map(|col| Element::from_terms(alg.field, (0..d).map(|row| (row, inv[row][col].clone()))))
            .collect();
        let sigma = Automorphism { images, inverse };
        if sigma.apply(alg.unit()) != *alg.unit() {
            return Err(Error::NotAutomorphism("does not fix the unit".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let lhs = sigma.apply(&Element { terms: alg.basis_mul(i, j).clone() });
                let rhs = alg.mul(&sigma.images[i], &sigma.images[j]);
                if lhs != rhs {
                    return Err(Error::NotAutomorphism(format!(
                        "σ({} {}) != σ({}) σ({})",
                        alg.label(i),
                        alg.label(j),
                        alg.label(i),
                        alg.label(j)
                    )));
                }
            }
        }
        Ok(sigma)
    }

    /// Builds from a dense row-major matrix acting on coefficient columns.
    pub fn from_matrix(alg: &Algebra, rows: &[Vec<Scalar>]) -> Result<Self> {
        let d = alg.dim();
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::Dimension(format!("automorphism matrix must be {d}x{d}")));
        }
        let images = (0..d)
            .map(|col| Element::from_terms(alg.field, (0..d).map(|row| (row, rows[row][col].clone()))))
            .collect();
        Self::new(alg, images)
    }

    pub fn image(&self, i: usize) -> &Element {
        &self.images[i]
    }
    pub fn inverse_image(&self, i: usize) -> &Element {
        &self.inverse[i]
    }

    pub fn apply(&self, a: &Element) -> Element {
        apply_images(&self.images, a)
    }

    pub fn apply_inverse(&self, a: &Element) -> Element {
        apply_images(&self.inverse, a)
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism { images: self.inverse.clone(), inverse: self.images.clone() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            images: other.images.iter().map(|a| self.apply(a)).collect(),
            inverse: self.inverse.iter().map(|a| other.apply_inverse(a)).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Automorphism {
        let mut acc = Automorphism { images: self.identity_images(), inverse: self.identity_images() };
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    fn identity_images(&self) -> Vec<Element> {
        self.images
            .iter()
            .enumerate()
            .map(|(i, img)| {
                let f = img.terms.first().map(|t| t.1.field()).expect("automorphism images are nonzero");
                Element::basis(f, i)
            })
            .collect()
    }

    /// Least `t ≤ bound` with `self^t = id`.
    pub fn order(&self, bound: usize) -> Option<usize> {
        let mut acc = self.clone();
        for t in 1..=bound {
            if acc.is_identity() {
                return Some(t);
            }
            acc = self.compose(&acc);
        }
        None
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, img)| img.terms.len() == 1 && img.terms[0].0 == i && img.terms[0].1.is_one())
    }

    /// `Some((perm, signs))` when every basis element maps to a scalar multiple of a basis element.
    pub fn as_monomial(&self) -> Option<(Vec<usize>, Vec<Scalar>)> {
        let mut perm = Vec::with_capacity(self.images.len());
        let mut scal = Vec::with_capacity(self.images.len());
        for img in &self.images {
            if img.terms.len() != 1 {
                return None;
            }
            perm.push(img.terms[0].0);
            scal.push(img.terms[0].1.clone());
        }
        Some((perm, scal))
    }

    /// Dense row-major matrix on coefficient columns.
    pub fn matrix(&self, field: Field) -> Vec<Vec<Scalar>> {
        let d = self.images.len();
        (0..d)
            .map(|row| self.images.iter().map(|img| img.coeff(row).cloned().unwrap_or_else(|| field.zero())).collect())
            .collect()
    }
}

fn apply_images(images: &[Element], a: &Element) -> Element {
    let mut acc: SparseVec = Vec::new();
    for (i, x) in &a.terms {
        acc = axpy(&acc, x, &images[*i].terms);
    }
    Element { terms: acc }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn dual_numbers(field: Field) -> Algebra {
        let one = field.one();
        Algebra::new(
            field,
            vec!["1".into(), "x".into()],
            vec![(0, one.clone())],
            [(0, 0, 0, one.clone()), (0, 1, 1, one.clone()), (1, 0, 1, one)],
        )
        .unwrap()
    }

    fn matrix_algebra() -> Algebra {
        // e_{ij} e_{kl} = [j = k] e_{il}, basis index 2i + j
        let f = Field::Rational;
        let labels = ["e11", "e12", "e21", "e22"].iter().map(|s| s.to_string()).collect();
        let mut mul = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    mul.push((2 * i + j, 2 * j + l, 2 * i + l, f.one()));
                }
            }
        }
        Algebra::new(f, labels, vec![(0, f.one()), (3, f.one())], mul).unwrap()
    }

    #[test]
    fn unit_and_nilpotent() {
        let a = dual_numbers(Field::Rational);
        let x = a.basis(1);
        assert_eq!(a.mul(a.unit(), &x), x);
        assert!(a.mul(&x, &x).is_zero());
        assert!(a.validate().is_empty());
    }

    #[test]
    fn perturbed_table_reports_violation() {
        let f = Field::Rational;
        let one = f.one();
        let a = Algebra::new(
            f,
            vec!["1".into(), "x".into()],
            vec![(0, one.clone())],
            [(0, 0, 0, one.clone()), (0, 1, 1, one.clone()), (1, 0, 1, one.clone()), (1, 1, 0, one)],
        )
        .unwrap();
        // x² = 1 is still associative; perturb the unit row instead
        assert!(a.validate().is_empty());
        let bad = Algebra::new(
            f,
            vec!["1".into(), "x".into()],
            vec![(0, f.one())],
            [(0, 0, 0, f.one()), (0, 1, 1, f.from_i64(2)), (1, 0, 1, f.one())],
        )
        .unwrap();
        assert!(bad.validate().contains(&Violation::LeftUnit(1)));
    }

    #[test]
    fn dimension_zero_rejected() {
        assert!(Algebra::new(Field::Rational, vec![], vec![], []).is_err());
    }

    #[test]
    fn center_of_matrix_algebra_is_scalars() {
        let m = matrix_algebra();
        assert!(m.validate().is_empty());
        let z = m.center();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].coeff(0), z[0].coeff(3));
        assert!(z[0].coeff(1).is_none());
        assert_eq!(dual_numbers(Field::Rational).center().len(), 2);
    }

    #[test]
    fn gradings() {
        let a = dual_numbers(Field::Rational);
        assert!(a.check_grading(&Grading::zero(2)).is_empty());
        assert!(a.check_grading(&Grading::new(vec![0, 1])).is_empty());
        assert_eq!(a.check_grading(&Grading::new(vec![1, 1])), vec![(0, 0), (0, 1), (1, 0)]);
    }

    #[test]
    fn automorphisms() {
        let f = Field::Rational;
        let a = dual_numbers(f);
        let scale2 = Automorphism::new(&a, vec![a.basis(0), a.basis(1).scale(&f.from_i64(2))]).unwrap();
        assert!(!scale2.is_identity());
        assert!(scale2.compose(&scale2.inverse()).is_identity());
        assert_eq!(scale2.pow(2).apply(&a.basis(1)), a.basis(1).scale(&f.from_i64(4)));
        // x -> 1 is not multiplicative
        assert!(Automorphism::new(&a, vec![a.basis(0), a.basis(0).add(&a.basis(1))]).is_err());
        assert!(Automorphism::new(&a, vec![a.basis(0), Element::zero()]).is_err());
    }
}
