use std::sync::Arc;

use hochschild::cochain;
use hochschild::resolution::{GeneratorKind, Resolution};
use hochschild::verify;
use hochschild::zoo::{build_dnr, Dnr};
use hochschild::{Engine, Error, Field};

fn dnr(n: usize, r: usize, f: Field) -> Arc<Dnr> {
    Arc::new(build_dnr(n, r, f).unwrap())
}

fn f2() -> Field {
    Field::prime(2).unwrap()
}

#[test]
fn homotopy_identities_hold_for_two_periods() {
    for (n, r) in [(4, 1), (4, 2), (5, 1), (5, 2), (6, 1)] {
        let res = Resolution::new(dnr(n, r, Field::Rational));
        let rep = verify::homotopy(&format!("R({n},{r})"), &res, 2 * res.period());
        assert!(rep.passed, "{:?}", rep.details);
    }
}

#[test]
fn realized_generators_are_cocycles_in_characteristic_two() {
    // g_3 and f_5 exist on R(4,1) only when char k = 2
    let res = Arc::new(Resolution::new(dnr(4, 1, f2())));
    for (kind, s) in [(GeneratorKind::G, 3), (GeneratorKind::F, 5)] {
        assert!(res.generator(kind, s).is_ok(), "{kind:?}_{s}");
        assert!(matches!(
            Resolution::new(dnr(4, 1, Field::Rational)).generator(kind, s),
            Err(Error::GeneratorRefused(_))
        ));
    }
    let rep = verify::generator_cocycles("R(4,1) over F2", &res, 5);
    assert!(rep.passed, "{:?}", rep.details);
    assert!(rep.cases >= 5);
}

#[test]
fn bracket_with_eps1_scales_by_f_over_r() {
    // [x, ε̃₁] = (F(x)/r) x up to coboundary
    for (n, r, field, kind, s) in [
        (4, 1, f2(), GeneratorKind::G, 3),
        (4, 1, Field::Rational, GeneratorKind::F, 0),
        (4, 2, Field::Rational, GeneratorKind::Eps1, 1),
    ] {
        let d = dnr(n, r, field);
        let res = Arc::new(Resolution::new(d.clone()));
        let engine = Engine::new(d.alg().clone());
        let divide = field.characteristic() == 0 || r % field.characteristic() as usize != 0;
        let eps = res.nu_conjugate_average(&res.generator(GeneratorKind::Eps1, 1).unwrap(), divide).unwrap();
        let spec = res.generator(kind, s).unwrap();
        let x = res.realize_generator(&spec).memoized();
        let c = field.fraction(spec.f_value, r as i64).unwrap();
        let diff = cochain::bracket(&x, &eps).unwrap().sub(&x.scale(&c)).unwrap().materialize();
        assert!(engine.is_coboundary(&diff, None).unwrap().is_some(), "R({n},{r}) {kind:?}_{s}");
    }
}

#[test]
fn psi_cache_overflow_recomputes_identically() {
    let d = dnr(4, 1, Field::Rational);
    let cached = Resolution::new(d.clone());
    let uncached = Resolution::with_psi_cap(d.clone(), 0);
    for tuple in d.composable_tuples(3).into_iter().take(200) {
        assert_eq!(*cached.psi(&tuple).unwrap(), *uncached.psi(&tuple).unwrap());
    }
}

#[test]
fn side_conditions_refuse_generators() {
    let res = Resolution::new(dnr(4, 2, Field::Rational));
    assert!(matches!(res.generator(GeneratorKind::Eps1, 2), Err(Error::GeneratorRefused(_))));
    // ε₀ generators exist only for r = 1
    assert!(matches!(res.generator(GeneratorKind::Eps0Path(1), 0), Err(Error::GeneratorRefused(_))));
    let one = Resolution::new(dnr(4, 1, Field::Rational));
    assert!(one.generator(GeneratorKind::Eps0Path(1), 0).is_ok());
}

#[test]
fn averaging_is_refused_when_the_characteristic_divides_r() {
    let res = Arc::new(Resolution::new(dnr(4, 2, f2())));
    let spec = res.generator(GeneratorKind::Eps1, 1).unwrap();
    assert!(matches!(res.nu_conjugate_average(&spec, true), Err(Error::AveragingUndefined { .. })));
    assert!(res.nu_conjugate_average(&spec, false).is_ok());
}

#[test]
fn degree_zero_generators_are_central() {
    let d = dnr(4, 1, Field::Rational);
    let res = Arc::new(Resolution::new(d.clone()));
    let alg = d.alg();
    let center = alg.center();
    let mut kinds = vec![GeneratorKind::F];
    kinds.extend((1..=2).map(GeneratorKind::Eps0Path));
    kinds.extend([3, 4].map(GeneratorKind::Eps0Branch));
    let engine = Engine::new(alg.clone());
    assert_eq!(engine.hh_dim(0).unwrap(), center.len());
    let hh0 = engine.hh(0).unwrap();
    let mut classes = Vec::new();
    for kind in kinds {
        let x = res.realize_generator(&res.generator(kind, 0).unwrap());
        let z = x.eval_basis(&[]);
        for k in 0..alg.dim() {
            assert_eq!(alg.mul(&z, &alg.basis(k)), alg.mul(&alg.basis(k), &z), "{kind:?}");
        }
        classes.push(hh0.class_of(&x).unwrap());
    }
    // the five generators span Z(R)
    assert_eq!(verify::matrix_rank(&classes, center.len(), alg.field()), center.len());
}
