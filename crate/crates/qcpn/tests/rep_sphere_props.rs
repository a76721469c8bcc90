use proptest::prelude::*;
use qcpn::ncpoly::{defining_relations, Generator, NCPoly, NCWord};
use qcpn::rep_sphere::*;

const Q0: f64 = 0.5;
const M: u32 = 12;

fn binom(n: u32, k: usize) -> f64 {
    let k = k as u32;
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[test]
fn relations_hold_on_interior_window() {
    for n in 1..=2 {
        let rels = defining_relations(n);
        for k in 0..=n {
            let spec = RepSpec::new(n, k, M, Q0).unwrap();
            let basis = FockBasis::new(n, M);
            let inside = basis.interior(2);
            for (name, r) in &rels {
                let op = rep_poly(r, &spec).unwrap();
                let res = op.max_abs_on(&inside);
                assert!(res < 1e-10, "n={n} k={k} {name}: {res:e}");
            }
        }
    }
}

#[test]
fn unit_is_the_projection_onto_the_subspace() {
    let basis = FockBasis::new(2, 6);
    let expect = [
        basis.states.iter().filter(|m| m[0] > m[1]).count(),
        basis.dim(),
        basis.states.iter().filter(|m| m[0] <= m[1]).count(),
    ];
    for (k, want) in expect.into_iter().enumerate() {
        let one = rep_poly(&NCPoly::one(), &RepSpec::new(2, k, 6, Q0).unwrap()).unwrap();
        assert_eq!(one.mul(&one).sub(&one).max_abs(), 0.0);
        assert_eq!(one.trace() as usize, want, "k={k}");
    }
}

fn arb_word(n: usize) -> impl Strategy<Value = NCPoly> {
    prop::collection::vec((0..=n as u8, any::<bool>()), 0..4).prop_map(|letters| {
        let gens: Vec<Generator> = letters.into_iter().map(|(index, starred)| Generator { index, starred }).collect();
        NCPoly::word(NCWord::from_gens(&gens))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distant_representations_are_orthogonal(a in arb_word(2), b in arb_word(2)) {
        let m = 8;
        let pa = rep_poly(&a, &RepSpec::new(2, 0, m, Q0).unwrap()).unwrap();
        let pb = rep_poly(&b, &RepSpec::new(2, 2, m, Q0).unwrap()).unwrap();
        let basis = FockBasis::new(2, m);
        let inside = basis.interior(4);
        prop_assert!(pa.mul(&pb).max_abs_on(&inside) < 1e-12);
        prop_assert!(pb.mul(&pa).max_abs_on(&inside) < 1e-12);
    }

    #[test]
    fn representations_are_star_preserving(a in arb_word(2), k in 0usize..=2) {
        let spec = RepSpec::new(2, k, 8, Q0).unwrap();
        let pa = rep_poly(&a, &spec).unwrap();
        let pas = rep_poly(&a.star(), &spec).unwrap();
        let basis = FockBasis::new(2, 8);
        let inside = basis.interior(4);
        prop_assert!(pa.adjoint().sub(&pas).max_abs_on(&inside) < 1e-12);
    }
}

#[test]
fn pairing_converges_geometrically() {
    for (big_n, k) in [(1u32, 1usize), (2, 1), (3, 1), (4, 2)] {
        let target = binom(big_n, k);
        let err = |m: u32| (fredholm_pairing(big_n, k, 2, m, Q0).unwrap().value - target).abs();
        let c = err(4) / Q0.powi(4);
        for m in (8..=24).step_by(4) {
            let e = err(m);
            assert!(e <= c * Q0.powi(m as i32) + 1e-11, "N={big_n} k={k} M={m}: {e:e}");
        }
        let steps: Vec<f64> = [4u32, 8, 12]
            .iter()
            .map(|&m| {
                let a = fredholm_pairing(big_n, k, 2, m, Q0).unwrap().value;
                let b = fredholm_pairing(big_n, k, 2, m + 10, Q0).unwrap().value;
                (a - b).abs()
            })
            .collect();
        for w in steps.windows(2) {
            assert!(w[1] < w[0] * Q0.powi(4), "N={big_n} k={k}: {steps:?}");
        }
    }
}

#[test]
fn pairing_tail_check_rejects_short_truncations() {
    assert!(matches!(fredholm_pairing_checked(2, 1, 2, 4, Q0, 1e-8), Err(RepError::Tail { .. })));
    assert!(fredholm_pairing_checked(2, 1, 2, 40, Q0, 1e-8).is_ok());
}

#[test]
fn pairing_rejects_q_one() {
    assert!(matches!(fredholm_pairing(1, 1, 1, 10, 1.0), Err(RepError::Invalid(_))));
}

#[test]
fn pairing_at_other_levels() {
    for n in 1..=3 {
        for big_n in 0..=3u32 {
            for k in 0..=n {
                let v = fredholm_pairing(big_n, k, n, 30, Q0).unwrap().value;
                assert!((v - binom(big_n, k)).abs() < 1e-8, "n={n} N={big_n} k={k}: {v}");
            }
        }
    }
}
