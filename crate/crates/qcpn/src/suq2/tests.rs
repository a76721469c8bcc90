use super::*;
use crate::ncpoly::{defining_relations, uq_act, Generator, Presentation, UqGen};

fn pt() -> QPoint {
    QPoint::new(0.5).unwrap()
}

fn words(max_len: usize) -> Vec<NCWord> {
    let gens: Vec<Generator> = (0..2u8).flat_map(|i| [Generator::z(i as usize), Generator::zstar(i as usize)]).collect();
    let mut out = vec![NCWord::empty()];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &g in &gens {
                let mut v: Vec<Generator> = w.clone();
                v.push(g);
                out.push(NCWord::from_gens(&v));
                next.push(v);
            }
        }
        layer = next;
    }
    out
}

fn close(x: &LmnVector, y: &LmnVector) -> f64 {
    let mut d = 0.0f64;
    for k in x.keys().chain(y.keys()) {
        let a = x.get(k).copied().unwrap_or(0.0);
        let b = y.get(k).copied().unwrap_or(0.0);
        d = d.max((a - b).abs());
    }
    d
}

#[test]
fn sphere_relations_hold_for_alpha_beta() {
    let p = pt();
    let b = LmnBasis::full(5.0);
    let inside = b.interior(2.0);
    for (name, r) in defining_relations(1) {
        let op = poly_operator(&r, &b, p).unwrap();
        assert!(op.max_abs_on(&inside) < 1e-12, "{name}");
    }
}

#[test]
fn a_and_b_are_the_displayed_products() {
    let p = pt();
    let (b, a_op) = leftreg(LeftGen::A, 5.0, p);
    let inside = b.interior(1.0);
    let (_, bs) = leftreg(LeftGen::BetaStar, 5.0, p);
    let (_, be) = leftreg(LeftGen::Beta, 5.0, p);
    let (_, al) = leftreg(LeftGen::Alpha, 5.0, p);
    assert!(a_op.sub(&bs.mul(&be)).max_abs_on(&inside) < 1e-13);
    let (_, b_op) = leftreg(LeftGen::B, 5.0, p);
    assert!(b_op.sub(&bs.mul(&al)).max_abs_on(&inside) < 1e-13);
    let (_, bst) = leftreg(LeftGen::BStar, 5.0, p);
    assert!(bst.sub(&b_op.adjoint()).max_abs() < 1e-15);
    // the vacuum component of A|0,0,0> is h(A) = 1/(1+q^2)
    let q = p.q();
    let v = apply_left(LeftGen::A, &basis_vector(Lmn::vacuum()), p, None);
    assert!((v[&Lmn::vacuum()] - 1.0 / (1.0 + q * q)).abs() < 1e-15);
    assert!(v.keys().all(|k| k.l2 == 2 || *k == Lmn::vacuum()));
}

#[test]
fn star_formula_matches_the_algebra() {
    let p = pt();
    for w in words(4) {
        let a = NCPoly::word(w.clone());
        let lhs = star_vector(&element_vector(&a, p).unwrap(), p);
        let rhs = element_vector(&a.star(), p).unwrap();
        assert!(close(&lhs, &rhs) < 1e-13, "{w}");
    }
}

#[test]
fn k_triangle_matches_the_sphere_action() {
    let p = pt();
    let pres = Presentation::new(1);
    for w in words(3) {
        let a = NCPoly::word(w.clone());
        let v = element_vector(&a, p).unwrap();
        let lhs: LmnVector = v.iter().map(|(&b, &c)| (b, c * k_triangle(b, p))).collect();
        let rhs = element_vector(&uq_act(UqGen::K(1), &a, pres), p).unwrap();
        assert!(close(&lhs, &rhs) < 1e-13, "{w}");
    }
}

#[test]
fn l_action_identities() {
    let p = pt();
    let q = p.q();
    for w in words(3) {
        let a = NCPoly::word(w.clone());
        let v = element_vector(&a, p).unwrap();
        let vs = star_vector(&v, p);
        // L_F(a^*) = -q (L_E a)^* and L_E(a^*) = -q^-1 (L_F a)^*
        let lhs = apply_l(LGen::F, &vs, p);
        let rhs: LmnVector = star_vector(&apply_l(LGen::E, &v, p), p).into_iter().map(|(k, c)| (k, -q * c)).collect();
        assert!(close(&lhs, &rhs) < 1e-12, "{w}");
        let lhs = apply_l(LGen::E, &vs, p);
        let rhs: LmnVector = star_vector(&apply_l(LGen::F, &v, p), p).into_iter().map(|(k, c)| (k, -c / q)).collect();
        assert!(close(&lhs, &rhs) < 1e-12, "{w}");
    }
}

#[test]
fn l_action_leibniz_rule() {
    // L_E(g w) = L_E(g) L_K^-1(w) + L_K(g) L_E(w) for a generator g and a word w
    let p = pt();
    let gens: Vec<Generator> = (0..2).flat_map(|i| [Generator::z(i), Generator::zstar(i)]).collect();
    let ev = |w: &NCWord| element_vector(&NCPoly::word(w.clone()), p).unwrap();
    let eigen = |x: LGen, v: &LmnVector| inner(v, &apply_l(x, v, p)) / inner(v, v);
    for &g in &gens {
        let gv = ev(&NCWord::from_gens(&[g]));
        let le_g = apply_l(LGen::E, &gv, p);
        let k_g = eigen(LGen::K, &gv);
        for w in words(3) {
            let wv = ev(&w);
            if inner(&wv, &wv) < 1e-300 {
                continue;
            }
            let mut gw = vec![g];
            gw.extend(w.gens());
            let lhs = apply_l(LGen::E, &ev(&NCWord::from_gens(&gw)), p);
            let kinv_w = eigen(LGen::KInv, &wv);
            let mut rhs = apply_left(letter(g).unwrap(), &apply_l(LGen::E, &wv, p), p, None);
            rhs.values_mut().for_each(|c| *c *= k_g);
            for &h in &gens {
                let hv = ev(&NCWord::from_gens(&[h]));
                let c = inner(&hv, &le_g) / inner(&hv, &hv);
                if c == 0.0 {
                    continue;
                }
                let mut hw = vec![h];
                hw.extend(w.gens());
                for (k, v) in ev(&NCWord::from_gens(&hw)) {
                    *rhs.entry(k).or_insert(0.0) += c * kinv_w * v;
                }
            }
            assert!(close(&lhs, &rhs) < 1e-12, "{g:?} {w}");
        }
    }
}

#[test]
fn haar_values() {
    let p = pt();
    let q = p.q();
    assert!((haar(&NCPoly::one(), p).unwrap() - 1.0).abs() < 1e-15);
    let a = NCPoly::zstar(1).mul_free(&NCPoly::z(1));
    assert!((haar(&a, p).unwrap() - 1.0 / (1.0 + q * q)).abs() < 1e-14);
    let b = NCPoly::zstar(1).mul_free(&NCPoly::z(0));
    assert!(haar(&b, p).unwrap().abs() < 1e-15);
}

#[test]
fn modular_property() {
    let p = pt();
    let a = NCPoly::zstar(1).mul_free(&NCPoly::z(1));
    let b = NCPoly::zstar(1).mul_free(&NCPoly::z(0));
    let bs = b.star();
    let els = [NCPoly::one(), a.clone(), b.clone(), bs.clone(), a.mul_free(&b), bs.mul_free(&a)];
    for x in &els {
        for y in &els {
            assert!(modular_check(x, y, p).unwrap() < 1e-12);
        }
    }
}
