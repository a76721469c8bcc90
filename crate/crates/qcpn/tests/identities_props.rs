use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use qcpn::identities::*;
use qcpn::qcoeff::QPoint;

/// Count partitions of {0..k} into exactly j nonempty blocks by brute force
/// over restricted growth strings.
fn partitions_oracle(k: usize, j: usize) -> u64 {
    fn go(pos: usize, k: usize, used: usize, j: usize) -> u64 {
        if pos == k {
            return (used == j) as u64;
        }
        let mut total = 0;
        for b in 0..=used.min(j.saturating_sub(1)) {
            let next = if b == used { used + 1 } else { used };
            if next <= j {
                total += go(pos + 1, k, next, j);
            }
        }
        total
    }
    if k == 0 {
        return (j == 0) as u64;
    }
    go(0, k, 0, j)
}

#[test]
fn stirling2_matches_enumeration() {
    for k in 0..=8 {
        for j in 0..=k {
            assert_eq!(stirling2(k, j), BigInt::from(partitions_oracle(k, j)), "k={k} j={j}");
        }
    }
    assert_eq!(partitions_oracle(3, 2), 3);
}

#[test]
fn stirling_kinds_are_inverse() {
    let n = 7;
    let s2 = stirling2_table(n);
    let s1 = stirling1_table(n);
    for (i, row) in s1.iter().enumerate() {
        for k in 0..=n {
            let sum: BigInt = row.iter().zip(&s2).map(|(a, col)| a * &col[k]).sum();
            assert_eq!(sum, BigInt::from((i == k) as i32));
        }
    }
}

#[test]
fn gap_identity_and_classical_symmetry() {
    for big_n in 0..=10i64 {
        for k in 0..=10u64 {
            let diff = &laplacian_eig(k, big_n) - &laplacian_eig(k, -big_n);
            assert_eq!(diff, laplacian_gap(big_n));
            assert_eq!(
                laplacian_eig(k, big_n).limit_q1().unwrap(),
                laplacian_eig(k, -big_n).limit_q1().unwrap()
            );
        }
    }
}

#[test]
fn branches_agree_at_zero() {
    // N = 0 in the N < 0 form: (1+q^-3)[k+2][k] + 0
    for k in 0..8u64 {
        let other = &(&qcpn::qcoeff::QScalar::one() + &qcpn::qcoeff::QScalar::q_pow(-3))
            * &(&qcpn::qcoeff::qint(k as i64 + 2) * &qcpn::qcoeff::qint(k as i64));
        assert_eq!(laplacian_eig(k, 0), other);
    }
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-50i64..50, 1i64..20).prop_map(|(a, b)| BigRational::new(a.into(), b.into()))
}

proptest! {
    #[test]
    fn chern_round_trip(v in (1usize..=5).prop_flat_map(|n| prop::collection::vec(rational(), n))) {
        let phi = ChernVector::phi(v.clone());
        let ch = chern_from_phi(&phi);
        prop_assert_eq!(phi_from_chern(&ch), phi);
        let ch2 = ChernVector::ch(v);
        prop_assert_eq!(chern_from_phi(&phi_from_chern(&ch2)), ch2);
    }

    #[test]
    fn integrality_on_row_combinations(coeffs in prop::collection::vec(-6i64..=6, 7)) {
        let table = pairing_table(4, 6);
        let mut comb = vec![BigInt::zero(); 5];
        for (row, c) in table.iter().zip(&coeffs) {
            for (acc, x) in comb.iter_mut().zip(row) {
                *acc += x * BigInt::from(*c);
            }
        }
        let v = ChernVector::phi(comb.into_iter().map(BigRational::from_integer).collect());
        let p2 = phi2_via_chern(&v);
        prop_assert!(p2.is_integer());
        prop_assert_eq!(&p2, &v.components[2]);
    }
}

#[test]
fn laplacian_values_at_sample_point() {
    let p = QPoint::new(0.5).unwrap();
    let q: f64 = 0.5;
    let qi = |x: i64| (q.powi(x as i32) - q.powi(-x as i32)) / (q - 1.0 / q);
    for big_n in -4..=4i64 {
        for k in 0..5i64 {
            let expect = if big_n >= 0 {
                (1.0 + q.powi(-3)) * qi(k) * qi(k + big_n + 2) + qi(2) * qi(big_n)
            } else {
                (1.0 + q.powi(-3)) * qi(k + 2) * qi(k - big_n) + qi(2) * qi(big_n)
            };
            let got = laplacian_eig(k as u64, big_n).eval(p).unwrap();
            assert!((got - expect).abs() <= 1e-12 * expect.abs().max(1.0), "k={k} N={big_n}");
        }
    }
}

#[test]
fn csv_emitters() {
    let p = QPoint::new(0.5).unwrap();
    let lam = laplacian_csv(p, 2, -1..=1);
    assert_eq!(lam.lines().count(), 2 + 9);
    assert!(lam.contains("\n0,0,0.000000000000000e0,0\n"));
    let pt = pairing_csv(2, 3);
    assert_eq!(pt, "N,phi_0,phi_1,phi_2\n0,1,0,0\n1,1,1,0\n2,1,2,1\n3,1,3,3\n");
    let m = chern_matrix_csv(2);
    assert_eq!(m, "k,phi_0,phi_1,phi_2\nCh_0,1,0,0\nCh_1,0,1,0\nCh_2,0,1/2,1\n");
}
