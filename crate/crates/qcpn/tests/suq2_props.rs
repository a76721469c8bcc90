use proptest::prelude::*;
use nalgebra::{DMatrix, DVector};
use qcpn::ncpoly::{uq_act, Generator, NCPoly, NCWord, Presentation, UqGen};
use qcpn::qcoeff::{QPoint, QScalar};
use qcpn::suq2::*;

fn pt(q0: f64) -> QPoint {
    QPoint::new(q0).unwrap()
}

#[test]
fn laction_examples() {
    let p = pt(0.5);
    let v = Lmn::from_f64(0.5, 0.5, 0.5);
    let (t, c) = laction_apply(LGen::E, v, p).unwrap();
    assert_eq!(t, Lmn::from_f64(0.5, 0.5, -0.5));
    assert!((c - 1.0).abs() < 1e-15);
    for l2 in 0..8 {
        let top = Lmn::new(l2, 0.max(l2 % 2), l2);
        assert!(laction_apply(LGen::F, top, p).is_none());
        let (_, k) = laction_apply(LGen::K, top, p).unwrap();
        assert!((k - p.qpow(-(l2 as f64) / 2.0)).abs() < 1e-14);
    }
}

#[test]
fn sector_projections_are_rank_one() {
    for n2 in (-9..=9).step_by(2) {
        for l in 0..8i64 {
            if 2 * l > (n2 as i64).abs() {
                assert!(SectorP::new(l, n2).is_rank_one(), "l={l} n={n2}/2");
            }
        }
    }
}

#[test]
fn index_branch_formula_values() {
    let got: Vec<i64> = [0.5, 1.5, 2.5, 3.5, 4.5].iter().map(|&j| index_branch_formula(j).unwrap()).collect();
    assert_eq!(got, vec![-1, 1, 2, 6, 9]);
    assert!(index_branch_formula(1.0).is_err());
}

#[test]
fn analytic_index_is_minus_j_minus_half() {
    for j2 in (1..=11).step_by(2) {
        let r = index_analytic(j2 as f64 / 2.0).unwrap();
        assert_eq!(r.index, -(j2 as i64 + 1) / 2, "j={j2}/2");
        assert_eq!(r.kernel - r.cokernel, r.index);
    }
    // j = 3/2: kernel v^{-1/2,down}_{0,0}, cokernel the three w^{1/2,||}_{1,m}
    let r = index_analytic(1.5).unwrap();
    assert_eq!((r.kernel, r.cokernel), (1, 3));
}

#[test]
fn numeric_index_matches_analytic() {
    for q0 in [0.3, 0.5, 0.8] {
        for j2 in [1, 3, 5] {
            let j = j2 as f64 / 2.0;
            let a = index_analytic(j).unwrap();
            let n = index_numeric(j, j2 as f64 + 3.0, pt(q0), 1e-8).unwrap();
            assert_eq!(a.index, n.index, "j={j} q0={q0}");
            assert_eq!((a.kernel, a.cokernel), (n.kernel, n.cokernel));
        }
    }
}

#[test]
fn numeric_index_needs_truncation() {
    assert!(matches!(index_numeric(1.5, 4.0, pt(0.5), 1e-8), Err(Suq2Error::Truncation { .. })));
}

proptest! {
    #[test]
    fn poincare_pairing_is_antisymmetric(i in -5i64..5, k in -5i64..5, i2 in -5i64..5, k2 in -5i64..5, j2 in 0usize..4) {
        let idx = index_analytic([0.5, 1.5, 2.5, 3.5][j2]).unwrap().index;
        prop_assert_eq!(poincare_pairing((i, k), (i2, k2), idx), -poincare_pairing((i2, k2), (i, k), idx));
        prop_assert_eq!(poincare_pairing((i, k), (i, k), idx), 0);
        if (i, k) != (0, 0) {
            prop_assert_ne!(poincare_pairing((i, k), (k, -i), idx), 0);
        }
    }
}

#[test]
fn poincare_pairing_example() {
    assert_eq!(poincare_pairing((1, 1), (1, 0), 1), 1);
}

#[test]
fn triple_axioms_small_j() {
    for j in [0.5, 1.5] {
        let r = triple_axiom_suite(j, 12.0, pt(0.5)).unwrap();
        for c in &r.checks {
            assert!(c.residual < 1e-9, "j={j} {}: {:e}", c.name, c.residual);
        }
        assert_eq!(r.residual("gamma^2-1"), Some(0.0));
        for (name, a, b) in &r.commutator_norms {
            assert!((a - b).abs() < 1e-9 * a.max(1.0), "{name}: {a} vs {b}");
        }
    }
}

#[test]
fn triple_rejects_small_truncation() {
    assert!(build_triple(1.5, 3.0, pt(0.5)).is_err());
    assert!(build_triple(1.0, 8.0, pt(0.5)).is_err());
}

#[test]
fn grading_by_slot() {
    let t = build_triple(2.5, 5.0, pt(0.5)).unwrap();
    for (i, v) in t.basis.states.iter().enumerate() {
        let expect = if ((t.j2 + v.n2) / 2 + 1).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        assert_eq!(t.gamma.get(i, i), expect);
    }
}

/// An element of degree 2 recovered from its vector x|0>: the vector map is
/// injective, so any least-squares solution over the length-2 words is x.
fn element_from_vector(x: &LmnVector, p: QPoint) -> NCPoly {
    let gens = [Generator::z(0), Generator::zstar(0), Generator::z(1), Generator::zstar(1)];
    let words: Vec<NCWord> = gens.iter().flat_map(|&g| gens.iter().map(move |&h| NCWord::from_gens(&[g, h]))).collect();
    let vecs: Vec<LmnVector> = words.iter().map(|w| element_vector(&NCPoly::word(w.clone()), p).unwrap()).collect();
    let mut keys: Vec<Lmn> = vecs.iter().flat_map(|v| v.keys().copied()).chain(x.keys().copied()).collect();
    keys.sort();
    keys.dedup();
    let mat = DMatrix::from_fn(keys.len(), words.len(), |i, j| vecs[j].get(&keys[i]).copied().unwrap_or(0.0));
    let rhs = DVector::from_fn(keys.len(), |i, _| x.get(&keys[i]).copied().unwrap_or(0.0));
    let sol = mat.clone().svd(true, true).solve(&rhs, 1e-12).unwrap();
    assert!((mat * &sol - rhs).amax() < 1e-12, "not in the span of degree-2 words");
    let mut out = NCPoly::zero();
    for (w, c) in words.iter().zip(sol.iter()) {
        out = out.add(&NCPoly::word(w.clone()).scale(&QScalar::from_rational(&float_to_rational(*c))));
    }
    out
}

fn float_to_rational(x: f64) -> num_rational::BigRational {
    num_rational::BigRational::from_float(x).unwrap()
}

#[test]
fn commutator_with_le_is_multiplication() {
    // [L_E, a] = q^n (L_E a) on W_n for a = A, B, B^*
    let p = pt(0.5);
    let elems = [
        NCPoly::zstar(1).mul_free(&NCPoly::z(1)),
        NCPoly::zstar(1).mul_free(&NCPoly::z(0)),
        NCPoly::zstar(0).mul_free(&NCPoly::z(1)),
    ];
    for a in &elems {
        let lea = element_from_vector(&apply_l(LGen::E, &element_vector(a, p).unwrap(), p), p);
        for v in [Lmn::from_f64(1.5, 0.5, 0.5), Lmn::from_f64(2.5, -1.5, -1.5), Lmn::from_f64(0.5, 0.5, -0.5)] {
            let x = basis_vector(v);
            let mut lhs = apply_l(LGen::E, &apply_poly(a, &x, p, None).unwrap(), p);
            for (k, c) in apply_poly(a, &apply_l(LGen::E, &x, p), p, None).unwrap() {
                *lhs.entry(k).or_insert(0.0) -= c;
            }
            let rhs: LmnVector = apply_poly(&lea, &x, p, None).unwrap().into_iter().map(|(k, c)| (k, p.qpow(v.n()) * c)).collect();
            let diff = lhs.keys().chain(rhs.keys()).map(|k| (lhs.get(k).unwrap_or(&0.0) - rhs.get(k).unwrap_or(&0.0)).abs()).fold(0.0, f64::max);
            assert!(diff < 1e-10, "{v}: {diff:e}");
        }
    }
}

#[test]
fn d_squared_matches_q_integer_products() {
    for j in [0.5, 1.5, 2.5] {
        let t = build_triple(j, 10.0, pt(0.5)).unwrap();
        for b in d_squared_spectrum(&t) {
            assert!(b.max_rel_error() < 1e-10, "j={j} l={} m={}", b.l2, b.m2);
        }
    }
}

#[test]
fn casimir_is_constant_on_blocks() {
    for q0 in [0.3, 0.5, 0.8] {
        for b in casimir_blocks(1.5, 8.0, pt(q0)).unwrap() {
            for x in &b.eigenvalues {
                assert!((x - b.expected).abs() < 1e-10 * b.expected, "l={} n={}", b.l2, b.n2);
            }
        }
    }
}

#[test]
fn counting_function_grows_like_log_squared() {
    // eigenvalues ~ q^-l with multiplicity ~ l: N(lambda) = O((log lambda)^2)
    let t = build_triple(0.5, 14.0, pt(0.5)).unwrap();
    let mut prev = 0;
    for k in 2..12 {
        let lambda = 2f64.powi(k);
        let n = counting_function(&t, lambda);
        assert!(n >= prev);
        let bound = 4.0 * (lambda.ln() / 2f64.ln() + 1.0).powi(2);
        assert!((n as f64) <= bound, "N({lambda}) = {n}");
        prev = n;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn j_is_an_antiunitary_isometry(seed in proptest::collection::vec(-1.0f64..1.0, 4 * 40)) {
        let t = build_triple(1.5, 5.0, pt(0.5)).unwrap();
        let d = t.basis.dim();
        let vec_of = |k: usize| -> Vec<f64> { (0..d).map(|i| seed[(k * 40 + i % 40) % seed.len()] * (1.0 + (i / 40) as f64)).collect() };
        let (ar, ai, br, bi) = (vec_of(0), vec_of(1), vec_of(2), vec_of(3));
        let (jar, jai) = t.apply_j(&ar, &ai);
        let (jbr, jbi) = t.apply_j(&br, &bi);
        // <x, y> = sum conj(x) y
        let ip = |xr: &[f64], xi: &[f64], yr: &[f64], yi: &[f64]| {
            let re: f64 = (0..d).map(|i| xr[i] * yr[i] + xi[i] * yi[i]).sum();
            let im: f64 = (0..d).map(|i| xr[i] * yi[i] - xi[i] * yr[i]).sum();
            (re, im)
        };
        let lhs = ip(&jar, &jai, &jbr, &jbi);
        let rhs = ip(&br, &bi, &ar, &ai);
        prop_assert!((lhs.0 - rhs.0).abs() < 1e-10 && (lhs.1 - rhs.1).abs() < 1e-10);
    }
}

#[test]
fn haar_of_a_solves_the_invariance_equations() {
    // h(x > a) = eps(x) h(a): E, F applied to B, B^* give combinations of 1 and A,
    // and h(1) = 1 fixes h(A).
    let pres = Presentation::new(1);
    let a = NCPoly::zstar(1).mul(&NCPoly::z(1), pres);
    let a_word = a.terms().map(|(w, _)| w.clone()).find(|w| !w.is_empty()).unwrap();
    let a_coef = a.coeff(&a_word);
    let b = NCPoly::zstar(1).mul(&NCPoly::z(0), pres);
    for q0 in [0.3, 0.5, 0.8] {
        let p = pt(q0);
        let mut solved = Vec::new();
        let bs = b.star().normalize(pres);
        for (x, y) in [(UqGen::E(1), &b), (UqGen::F(1), &b), (UqGen::E(1), &bs), (UqGen::F(1), &bs)] {
            let img = uq_act(x, y, pres);
            if img.is_zero() {
                continue;
            }
            for (w, _) in img.terms() {
                assert!(w.is_empty() || *w == a_word, "unexpected word in {x:?} > B");
            }
            let c1 = img.coeff(&NCWord::empty()).at(q0);
            let ca = img.coeff(&a_word).at(q0);
            // c1 h(1) + ca h(a_word) = 0, h(A) = a_coef h(a_word) + const part of A
            let h_word = -c1 / ca;
            let h_a = a_coef.at(q0) * h_word + a.coeff(&NCWord::empty()).at(q0);
            solved.push(h_a);
        }
        assert!(!solved.is_empty());
        let direct = haar(&NCPoly::zstar(1).mul_free(&NCPoly::z(1)), p).unwrap();
        for h in solved {
            assert!((h - direct).abs() < 1e-13, "q0={q0}: {h} vs {direct}");
        }
        assert!(haar(&b, p).unwrap().abs() < 1e-15);
    }
}

#[test]
fn modular_property_examples() {
    let p = pt(0.5);
    let a = NCPoly::zstar(1).mul_free(&NCPoly::z(1));
    let b = NCPoly::zstar(1).mul_free(&NCPoly::z(0));
    assert_eq!(modular_check(&NCPoly::one(), &NCPoly::one(), p).unwrap(), 0.0);
    assert!(modular_check(&a, &a, p).unwrap() < 1e-9);
    assert!(modular_check(&b, &b.star(), p).unwrap() < 1e-9);
    // z0 alone is not in A(CP^1_q)
    assert!(matches!(modular_check(&NCPoly::z(0), &NCPoly::zstar(0), p), Err(Suq2Error::Invalid(_))));
}

#[test]
fn holomorphic_dimensions() {
    let p = pt(0.5);
    for n in -4i64..=0 {
        let r = holo_kernel(n, 8.0, p, 1e-8).unwrap();
        assert_eq!(r.dim as i64, -n + 1, "N={n}");
        assert!(r.kernel_l_max <= n.abs() as f64 / 2.0);
    }
    for n in 1..=2 {
        assert_eq!(holo_dim(n, 8.0, p, 1e-8).unwrap(), 0);
    }
    assert!(holo_dim(-4, 4.0, p, 1e-8).is_err());
}

#[test]
fn tau1_values() {
    let p = pt(0.5);
    for (n, target) in [(0i64, 0.0), (1, 16.0), (2, 40.0), (3, 84.0)] {
        let v = tau1_pairing(n, 10.0, p).unwrap();
        assert!((v.value - target).abs() < 1e-9 * target.max(1.0), "N={n}: {}", v.value);
        assert!((v.value - v.value_wider).abs() < 1e-12);
        assert!((tau1_target(n, p) - target).abs() < 1e-12);
    }
    // positivity: nothing negative for N < 0
    for n in [-1i64, -2] {
        let v = tau1_pairing(n, 10.0, p).unwrap();
        assert!(v.value.abs() < 1e-12, "N={n}: {}", v.value);
    }
}
