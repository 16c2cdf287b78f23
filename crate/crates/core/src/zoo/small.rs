//! Small fixtures: truncated polynomial rings and radical-square-zero cycles.

use std::sync::Arc;

use crate::algebra::{Algebra, Grading};
use crate::error::{Error, Result};
use crate::frobenius::FrobeniusData;
use crate::scalar::Field;
use crate::zoo::Bundle;

/// `k[x]/(x^m)` with `ε(x^{m-1}) = 1`; symmetric. Grading `"x"` gives `x^i` degree `i`.
pub fn truncated_poly(m: usize, field: Field) -> Result<Bundle> {
    if m < 2 {
        return Err(Error::InvalidParameters(format!("truncated_poly needs m >= 2, got {m}")));
    }
    let labels = (0..m).map(|i| if i == 0 { "1".to_string() } else { format!("x^{i}") }).collect();
    let mul = (0..m).flat_map(|i| (0..m - i).map(move |j| (i, j, i + j, field.one())));
    let alg = Algebra::new_validated(field, labels, vec![(0, field.one())], mul)?;
    let eps = (0..m).map(|i| if i == m - 1 { field.one() } else { field.zero() }).collect();
    let frob = FrobeniusData::new(alg.clone(), eps)?;
    let mut b = Bundle::bare(alg);
    b.frobenius = Some(frob);
    b.gradings.insert("x".into(), Grading::new((0..m as i64).collect()));
    Ok(b)
}

/// Cyclic quiver on `v` vertices with arrows `a_i: i → i+1` and all paths of length 2 zero.
/// Basis: `e_0..e_{v-1}`, then `a_0..a_{v-1}`; `ε(a_i) = 1`, so `ν(e_i) = e_{i-1}`.
pub fn nakayama_cycle(v: usize, field: Field) -> Result<Bundle> {
    if v < 2 {
        return Err(Error::InvalidParameters(format!("nakayama_cycle needs v >= 2, got {v}")));
    }
    let mut labels: Vec<String> = (0..v).map(|i| format!("e{i}")).collect();
    labels.extend((0..v).map(|i| format!("a{i}")));
    let mut mul = Vec::new();
    for i in 0..v {
        mul.push((i, i, i, field.one()));
        // paths compose right to left: a_i e_i = a_i = e_{i+1} a_i
        mul.push((v + i, i, v + i, field.one()));
        mul.push(((i + 1) % v, v + i, v + i, field.one()));
    }
    let unit = (0..v).map(|i| (i, field.one())).collect();
    let alg: Arc<Algebra> = Algebra::new_validated(field, labels, unit, mul)?;
    let eps = (0..2 * v).map(|i| if i >= v { field.one() } else { field.zero() }).collect();
    let frob = FrobeniusData::new(alg.clone(), eps)?;
    let mut b = Bundle::bare(alg);
    b.frobenius = Some(frob);
    b.gradings.insert("length".into(), Grading::new((0..2 * v).map(|i| (i >= v) as i64).collect()));
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_fixture() {
        let b = truncated_poly(3, Field::Rational).unwrap();
        let a = &b.alg;
        assert!(a.mul(&a.basis(2), &a.basis(1)).is_zero());
        assert!(b.frobenius.as_ref().unwrap().is_symmetric());
        assert!(truncated_poly(1, Field::Rational).is_err());
    }

    #[test]
    fn cycle_fixture() {
        for v in 2..5 {
            let b = nakayama_cycle(v, Field::Rational).unwrap();
            assert_eq!(b.alg.dim(), 2 * v);
            let fr = b.frobenius.unwrap();
            assert_eq!(fr.nakayama_order(None), Some(v));
            assert!(!fr.is_symmetric());
            let nu_e1 = fr.nakayama().image(1);
            assert_eq!(*nu_e1, b.alg.basis(0));
        }
        assert!(nakayama_cycle(1, Field::Rational).is_err());
    }
}
