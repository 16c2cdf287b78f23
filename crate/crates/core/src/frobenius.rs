//! Frobenius forms `⟨a, b⟩ = ε(ab)`, dual bases and the Nakayama automorphism.

use std::sync::Arc;

use crate::algebra::{Algebra, Automorphism, Element};
use crate::error::{Error, Result};
use crate::linalg::dense_inverse;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct FrobeniusData {
    alg: Arc<Algebra>,
    eps: Vec<Scalar>,
    gram: Vec<Vec<Scalar>>,
    gram_inverse: Vec<Vec<Scalar>>,
    /// `dual[k] = Σ_m G⁻¹[k][m] b_m`, so that `x = Σ_k ⟨x, b_k⟩ dual[k]`.
    dual: Vec<Element>,
    nakayama: Automorphism,
}

impl FrobeniusData {
    /// Builds the form from `ε` and solves `ν` from `G N = Gᵀ`.
    pub fn new(alg: Arc<Algebra>, eps: Vec<Scalar>) -> Result<Self> {
        let d = alg.dim();
        let field = alg.field();
        if eps.len() != d {
            return Err(Error::Dimension(format!("counit of length {} for dimension {d}", eps.len())));
        }
        if let Some(x) = eps.iter().find(|x| !field.contains(x)) {
            return Err(Error::FieldMismatch { expected: field.to_string(), found: x.field().to_string() });
        }
        let eval = |terms: &[(usize, Scalar)]| {
            terms.iter().fold(field.zero(), |acc, (k, c)| &acc + &(c * &eps[*k]))
        };
        let gram: Vec<Vec<Scalar>> = (0..d).map(|i| (0..d).map(|j| eval(alg.basis_mul(i, j))).collect()).collect();
        let gram_inverse = dense_inverse(field, &gram).ok_or(Error::NotFrobenius)?;
        let dual = (0..d)
            .map(|k| Element::from_terms(field, (0..d).map(|m| (m, gram_inverse[k][m].clone()))))
            .collect();
        // N = G⁻¹ Gᵀ; column i holds ν(b_i).
        let images = (0..d)
            .map(|i| {
                Element::from_terms(
                    field,
                    (0..d).map(|k| {
                        let v = (0..d).fold(field.zero(), |acc, m| &acc + &(&gram_inverse[k][m] * &gram[i][m]));
                        (k, v)
                    }),
                )
            })
            .collect();
        let nakayama = Automorphism::new(&alg, images).map_err(|e| Error::Inconsistent(format!("solved Nakayama map: {e}")))?;
        Ok(FrobeniusData { alg, eps, gram, gram_inverse, dual, nakayama })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }
    pub fn eps(&self) -> &[Scalar] {
        &self.eps
    }
    pub fn gram(&self) -> &[Vec<Scalar>] {
        &self.gram
    }
    pub fn gram_inverse(&self) -> &[Vec<Scalar>] {
        &self.gram_inverse
    }
    pub fn dual(&self, k: usize) -> &Element {
        &self.dual[k]
    }
    pub fn nakayama(&self) -> &Automorphism {
        &self.nakayama
    }

    pub fn counit(&self, a: &Element) -> Scalar {
        let field = self.alg.field();
        a.terms.iter().fold(field.zero(), |acc, (k, c)| &acc + &(c * &self.eps[*k]))
    }

    pub fn pairing(&self, a: &Element, b: &Element) -> Scalar {
        self.counit(&self.alg.mul(a, b))
    }

    /// Least `t ≤ bound` with `ν^t = id`; the bound defaults to `dim²`.
    pub fn nakayama_order(&self, bound: Option<usize>) -> Option<usize> {
        self.nakayama.order(bound.unwrap_or(self.alg.dim() * self.alg.dim()))
    }

    /// Whether `ν = id` for this form.
    pub fn is_symmetric(&self) -> bool {
        self.nakayama.is_identity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn dual_numbers() -> Arc<Algebra> {
        let f = Field::Rational;
        Algebra::new_validated(
            f,
            vec!["1".into(), "x".into()],
            vec![(0, f.one())],
            [(0, 0, 0, f.one()), (0, 1, 1, f.one()), (1, 0, 1, f.one())],
        )
        .unwrap()
    }

    #[test]
    fn dual_numbers_symmetric() {
        let a = dual_numbers();
        let f = a.field();
        let fr = FrobeniusData::new(a.clone(), vec![f.zero(), f.one()]).unwrap();
        assert!(fr.is_symmetric());
        assert_eq!(fr.nakayama_order(None), Some(1));
        // resolution of identity through the dual basis
        let x = a.basis(0).add(&a.basis(1).scale(&f.from_i64(3)));
        let mut rebuilt = Element::zero();
        for k in 0..2 {
            rebuilt.add_scaled(&fr.pairing(&x, &a.basis(k)), fr.dual(k));
        }
        assert_eq!(rebuilt, x);
    }

    #[test]
    fn degenerate_form_rejected() {
        let a = dual_numbers();
        let f = a.field();
        assert!(matches!(FrobeniusData::new(a, vec![f.one(), f.zero()]), Err(Error::NotFrobenius)));
    }
}
