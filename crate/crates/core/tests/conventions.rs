//! Hand-checked values pinning the sign and orientation conventions.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hochschild::cochain::{self, all_tuples, Cochain};
use hochschild::verify;
use hochschild::zoo::{nakayama_cycle, truncated_poly};
use hochschild::{Algebra, Element, Field};

fn q() -> Field {
    Field::Rational
}

fn basis(alg: &Algebra, label: &str) -> Element {
    alg.basis(alg.index_of(label).unwrap())
}

#[test]
fn degree_zero_coboundary_is_the_inner_derivation() {
    let b = nakayama_cycle(2, q()).unwrap();
    let alg = &b.alg;
    let c = Cochain::from_element(alg.clone(), basis(alg, "e0"));
    let dc = cochain::coboundary(&c);
    // a0: 0 → 1, so a0·e0 = a0 and e0·a0 = 0
    assert_eq!(dc.eval(&[basis(alg, "a0")]), basis(alg, "a0"));
    assert_eq!(dc.eval(&[basis(alg, "a1")]), basis(alg, "a1").neg());
}

#[test]
fn cup_multiplies_left_values_first() {
    let b = nakayama_cycle(2, q()).unwrap();
    let alg = b.alg.clone();
    let id = Cochain::identity(alg.clone());
    let c = cochain::cup(&id, &id).unwrap();
    assert_eq!(c.eval(&[basis(&alg, "a0"), basis(&alg, "e0")]), basis(&alg, "a0"));
    assert!(c.eval(&[basis(&alg, "e0"), basis(&alg, "a0")]).is_zero());
}

#[test]
fn bracket_of_degree_one_cochains_is_the_commutator() {
    let b = truncated_poly(3, q()).unwrap();
    let alg = b.alg.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = cochain::random_cochain(&alg, 1, None, &mut rng);
    let g = cochain::random_cochain(&alg, 1, None, &mut rng);
    let br = cochain::bracket(&f, &g).unwrap();
    for k in 0..alg.dim() {
        let a = alg.basis(k);
        let expect = f.eval(&[g.eval(&[a.clone()])]).sub(&g.eval(&[f.eval(&[a.clone()])]));
        assert_eq!(br.eval(&[a]), expect);
    }
}

#[test]
fn bracket_with_an_element_evaluates() {
    let b = truncated_poly(2, q()).unwrap();
    let alg = b.alg.clone();
    let x = basis(&alg, "x^1");
    let c = Cochain::from_element(alg.clone(), x.clone());
    let euler = cochain::euler_derivation(&alg, &b.gradings["x"]).unwrap();
    assert_eq!(cochain::bracket(&euler, &c).unwrap().eval(&[]), x);
}

#[test]
fn twist_conjugates_by_the_inverse() {
    let b = nakayama_cycle(3, q()).unwrap();
    let alg = b.alg.clone();
    let nu = b.frobenius.as_ref().unwrap().nakayama().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = cochain::random_cochain(&alg, 2, None, &mut rng);
    let t = cochain::twist(&f, &nu);
    for tuple in all_tuples(alg.dim(), 2) {
        let args: Vec<Element> = tuple.iter().map(|&k| nu.image(k).clone()).collect();
        assert_eq!(t.eval_basis(&tuple), nu.apply_inverse(&f.eval(&args)));
    }
    // (f^ν)^ν = f^{ν²}
    let twice = cochain::twist(&t, &nu);
    let direct = cochain::twist(&f, &nu.pow(2));
    assert!(twice.agrees_on(&direct, &all_tuples(alg.dim(), 2)));
}

#[test]
fn nakayama_shifts_cycle_vertices_backwards() {
    let b = nakayama_cycle(3, q()).unwrap();
    let alg = &b.alg;
    let nu = b.frobenius.as_ref().unwrap().nakayama();
    assert_eq!(nu.apply(&basis(alg, "e1")), basis(alg, "e0"));
    assert_eq!(nu.apply(&basis(alg, "e0")), basis(alg, "e2"));
    // ⟨a, b⟩ = ⟨b, ν(a)⟩
    let fr = b.frobenius.as_ref().unwrap();
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let (a, c) = (alg.basis(i), alg.basis(j));
            assert_eq!(fr.pairing(&a, &c), fr.pairing(&c, &nu.apply(&a)));
        }
    }
}

#[test]
fn delta_of_the_identity_is_the_unit() {
    for b in [truncated_poly(3, q()).unwrap(), nakayama_cycle(3, q()).unwrap()] {
        let id = Cochain::identity(b.alg.clone());
        let d = cochain::bv_delta(&id, b.frobenius.as_ref().unwrap()).unwrap();
        assert_eq!(&d.eval(&[]), b.alg.unit());
    }
}

#[test]
fn delta_vanishes_in_degree_zero() {
    let b = truncated_poly(2, q()).unwrap();
    let c = Cochain::from_element(b.alg.clone(), b.alg.unit().clone());
    let d = cochain::bv_delta(&c, b.frobenius.as_ref().unwrap()).unwrap();
    assert!(d.eval(&[]).is_zero());
}

#[test]
fn normalization_kills_unit_arguments() {
    let b = nakayama_cycle(2, q()).unwrap();
    let alg = b.alg.clone();
    let nu = b.frobenius.as_ref().unwrap().nakayama().clone();
    // a cocycle that does not vanish on the unit: δ of a cochain that does not either
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = cochain::random_cochain(&alg, 1, None, &mut rng);
    let f = cochain::coboundary(&cochain::average_over_powers(&h, &nu, 2, false).unwrap());
    let g = cochain::normalize(&f, &nu).unwrap();
    let one = alg.unit().clone();
    for k in 0..alg.dim() {
        assert!(g.eval(&[one.clone(), alg.basis(k)]).is_zero());
        assert!(g.eval(&[alg.basis(k), one.clone()]).is_zero());
    }
    let diff = g.sub(&f).unwrap();
    assert!(cochain::coboundary(&diff).first_nonzero(&all_tuples(alg.dim(), 3)).is_none());
}

/// `δ` with the sign of the first inner face flipped.
fn broken_coboundary(f: &Cochain) -> Cochain {
    let good = cochain::coboundary(f);
    let f = f.clone();
    let alg: Arc<Algebra> = f.algebra().clone();
    let two = alg.field().from_i64(2);
    Cochain::from_rule(alg.clone(), f.degree() + 1, move |a| {
        let mut v = good.eval_basis(a);
        if a.len() >= 2 {
            let mut args: Vec<Element> = vec![alg.mul(&alg.basis(a[0]), &alg.basis(a[1]))];
            args.extend(a[2..].iter().map(|&k| alg.basis(k)));
            v.add_scaled(&two, &f.eval(&args));
        }
        v
    })
}

#[test]
fn twist_defect_suite_detects_a_sign_error() {
    for b in [truncated_poly(2, q()).unwrap(), nakayama_cycle(2, q()).unwrap()] {
        let fr = b.frobenius.as_ref().unwrap();
        assert!(verify::twist_defect("fixture", fr, &[1, 2], 10, 1).passed);
        let broken = verify::twist_defect_with("fixture", fr, &[1, 2], 10, 1, &broken_coboundary);
        assert!(!broken.passed);
    }
}

#[test]
fn suite_reports_are_deterministic() {
    let b = nakayama_cycle(3, q()).unwrap();
    let fr = b.frobenius.as_ref().unwrap();
    assert_eq!(verify::twist_defect("c3", fr, &[1, 2, 3], 20, 9), verify::twist_defect("c3", fr, &[1, 2, 3], 20, 9));
}
