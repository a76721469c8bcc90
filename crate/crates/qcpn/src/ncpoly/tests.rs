use super::*;
use crate::qcoeff::QScalar;

fn q(k: i32) -> QScalar {
    QScalar::q_pow(k)
}

fn pres(n: usize) -> Presentation {
    Presentation::new(n)
}

fn prod(ps: &[NCPoly], p: Presentation) -> NCPoly {
    ps.iter().fold(NCPoly::one(), |acc, x| acc.mul(x, p))
}

#[test]
fn reorders_unstarred_pair() {
    let p = pres(1);
    let r = NCPoly::z(1).mul(&NCPoly::z(0), p);
    let expect = NCPoly::z(0).mul_free(&NCPoly::z(1)).scale(&q(1));
    assert_eq!(r, expect);
}

#[test]
fn z0_z0star_without_sphere_rule() {
    let p = Presentation::without_sphere(1);
    let r = NCPoly::z(0).mul(&NCPoly::zstar(0), p);
    let mut expect = NCPoly::zstar(0).mul_free(&NCPoly::z(0));
    expect.add_scaled(&NCPoly::zstar(1).mul_free(&NCPoly::z(1)), &(q(2) - QScalar::one()));
    assert_eq!(r, expect);
}

#[test]
fn z0_z0star_with_sphere_rule() {
    let p = pres(1);
    let r = NCPoly::z(0).mul(&NCPoly::zstar(0), p);
    let mut expect = NCPoly::zstar(0).mul_free(&NCPoly::z(0)).scale(&q(-2));
    expect.add_scaled(&NCPoly::one(), &(QScalar::one() - q(-2)));
    assert_eq!(r, expect);
}

#[test]
fn sphere_conditions_normalize_to_one() {
    for n in 1..=3 {
        let p = pres(n);
        let mut a = NCPoly::zero();
        let mut b = NCPoly::zero();
        for j in 0..=n {
            a = a.add(&NCPoly::z(j).mul_free(&NCPoly::zstar(j)));
            b.add_scaled(&NCPoly::zstar(j).mul_free(&NCPoly::z(j)), &q(2 * j as i32));
        }
        assert_eq!(a.normalize(p), NCPoly::one(), "n={n}");
        assert_eq!(b.normalize(p), NCPoly::one(), "n={n}");
    }
}

#[test]
fn mixed_commutation_vanishes() {
    let p = pres(2);
    for i in 0..=2 {
        for j in 0..=2 {
            if i == j {
                continue;
            }
            let lhs = NCPoly::zstar(i).mul_free(&NCPoly::z(j));
            let rhs = NCPoly::z(j).mul_free(&NCPoly::zstar(i)).scale(&q(1));
            assert!(lhs.sub(&rhs).normalize(p).is_zero());
        }
    }
}

#[test]
fn star_examples() {
    assert_eq!(NCPoly::z(0).star(), NCPoly::zstar(0));
    let a = NCPoly::z(0).mul_free(&NCPoly::z(1)).scale(&q(1));
    let expect = NCPoly::zstar(1).mul_free(&NCPoly::zstar(0)).scale(&q(1));
    assert_eq!(a.star(), expect);
    let p01 = NCPoly::zstar(0).mul_free(&NCPoly::z(1));
    let p10 = NCPoly::zstar(1).mul_free(&NCPoly::z(0));
    assert_eq!(p01.star(), p10);
    assert_eq!(a.star().star(), a);
}

#[test]
fn level_one_relations_as_unitary_matrix() {
    // alpha = z0, beta = z1: alpha beta = q beta alpha, alpha^* alpha + beta^* beta = 1 ...
    let p = pres(1);
    let (al, be) = (NCPoly::z(0), NCPoly::z(1));
    let (als, bes) = (al.star(), be.star());
    let r1 = al.mul(&be, p).sub(&be.mul(&al, p).scale(&q(-1)));
    assert!(r1.is_zero());
    let r2 = prod(&[als.clone(), al.clone()], p).add(&prod(&[bes.clone(), be.clone()], p).scale(&q(2)));
    assert_eq!(r2, NCPoly::one());
}

#[test]
fn action_examples() {
    for n in 1..=3 {
        let p = pres(n);
        let z0n = prod(&vec![NCPoly::z(0); 3], p);
        assert!(uq_act(UqGen::E(n), &z0n, p).is_zero());
        assert_eq!(uq_act(UqGen::K(n), &z0n, p), z0n.scale(&QScalar::s_pow(3)));
        assert_eq!(uq_act(UqGen::K(n), &NCPoly::one(), p), NCPoly::one());
    }
    let p = pres(1);
    assert_eq!(uq_act(UqGen::E(1), &NCPoly::z(1), p), NCPoly::z(0));
    assert_eq!(uq_act(UqGen::F(1), &NCPoly::z(0), p), NCPoly::z(1));
}

#[test]
fn pullback_examples() {
    let p = pres(2);
    assert!(NCPoly::z(2).pullback(1).is_zero());
    let a = NCPoly::zstar(0).mul(&NCPoly::z(1), p);
    assert_eq!(a.pullback(2), a);
    let mut s = NCPoly::zero();
    for j in 0..=2 {
        s = s.add(&NCPoly::z(j).mul_free(&NCPoly::zstar(j)));
    }
    assert_eq!(s.pullback(1), NCPoly::one());
}

#[test]
fn display_is_canonical() {
    let p = pres(1);
    let a = NCPoly::z(1).mul(&NCPoly::z(0), p).add(&NCPoly::scalar(QScalar::from_int(-2)));
    assert_eq!(a.to_string(), "-2 + q z0 z1");
}
