//! Closed-form q-identities: Laplacian eigenvalues on the monopole bundles of
//! CP^2_q, monopole curvature, Casimir values, and the conversion between
//! Fredholm pairings phi_k and Chern characters Ch_k.

use crate::qcoeff::{qint, qint_half, QPoint, QScalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Write;
use std::sync::Mutex;

/// lambda_{k,N}: (1+q^-3)[k][k+N+2] + [2][N] for N >= 0 and
/// (1+q^-3)[k+2][k-N] + [2][N] for N < 0.
pub fn laplacian_eig(k: u64, big_n: i64) -> QScalar {
    let k = k as i64;
    let pre = &QScalar::one() + &QScalar::q_pow(-3);
    let prod = if big_n >= 0 { &qint(k) * &qint(k + big_n + 2) } else { &qint(k + 2) * &qint(k - big_n) };
    &(&pre * &prod) + &(&qint(2) * &qint(big_n))
}

/// (1 - q^-3)[2][N], the gap lambda_{k,N} - lambda_{k,-N} for N >= 0.
pub fn laplacian_gap(big_n: i64) -> QScalar {
    &(&(&QScalar::one() - &QScalar::q_pow(-3)) * &qint(2)) * &qint(big_n)
}

/// 2(k^2 + kN + 2k + N).
pub fn laplacian_eig_classical(k: u64, big_n: i64) -> BigInt {
    let (k, n) = (BigInt::from(k), BigInt::from(big_n));
    BigInt::from(2) * (&k * &k + &k * &n + BigInt::from(2) * &k + &n)
}

/// The coefficient q^(N-1)[N] of the curvature of the monopole connection.
pub fn monopole_curvature(big_n: i64) -> QScalar {
    &QScalar::q_pow(big_n as i32 - 1) * &qint(big_n)
}

/// Value [(d+1)/2]^2 of the Casimir on V_d.
pub fn casimir_value(d: u64) -> QScalar {
    qint_half(d as i64 + 1).pow(2)
}

/// Stirling numbers of the second kind {k, j} for 0 <= j <= k <= kmax.
/// Rows are memoized across calls.
pub fn stirling2_table(kmax: usize) -> Vec<Vec<BigInt>> {
    static CACHE: Mutex<Vec<Vec<BigInt>>> = Mutex::new(Vec::new());
    let mut t = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if t.is_empty() {
        t.push(vec![BigInt::one()]);
    }
    while t.len() <= kmax {
        let k = t.len();
        let prev = &t[k - 1];
        let mut row = vec![BigInt::zero(); k + 1];
        for j in 1..=k {
            let same = if j < k { BigInt::from(j) * &prev[j] } else { BigInt::zero() };
            row[j] = same + &prev[j - 1];
        }
        t.push(row);
    }
    t[..=kmax]
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.resize(kmax + 1, BigInt::zero());
            r
        })
        .collect()
}

pub fn stirling2(k: usize, j: usize) -> BigInt {
    if j > k {
        return BigInt::zero();
    }
    stirling2_table(k)[k][j].clone()
}

/// Signed Stirling numbers of the first kind s(k, j): the inverse matrix of
/// the second kind ones.
pub fn stirling1_table(kmax: usize) -> Vec<Vec<BigInt>> {
    let mut t = vec![vec![BigInt::zero(); kmax + 1]; kmax + 1];
    t[0][0] = BigInt::one();
    for k in 1..=kmax {
        for j in 1..=k {
            t[k][j] = &t[k - 1][j - 1] - BigInt::from(k - 1) * &t[k - 1][j];
        }
    }
    t
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChernBasis {
    Phi,
    Ch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernVector {
    pub basis: ChernBasis,
    pub components: Vec<BigRational>,
}

impl ChernVector {
    pub fn phi(components: Vec<BigRational>) -> Self {
        ChernVector { basis: ChernBasis::Phi, components }
    }

    pub fn ch(components: Vec<BigRational>) -> Self {
        ChernVector { basis: ChernBasis::Ch, components }
    }

    /// phi_j(P_{-N}) = C(N, j), j = 0..n.
    pub fn line_bundle(big_n: u64, n: usize) -> Self {
        Self::phi(pairing_row(big_n, n).into_iter().map(BigRational::from_integer).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.components.iter().all(|c| c.is_integer())
    }
}

/// Ch_k = (1/k!) sum_j {k, j} j! phi_j.
pub fn chern_from_phi(v: &ChernVector) -> ChernVector {
    assert_eq!(v.basis, ChernBasis::Phi, "expected phi components");
    let n = v.components.len();
    let s = stirling2_table(n.saturating_sub(1));
    let comps = (0..n)
        .map(|k| {
            let mut acc = BigRational::zero();
            for (j, (sk, c)) in s[k].iter().zip(&v.components).take(k + 1).enumerate() {
                acc += BigRational::from_integer(sk * factorial(j)) * c;
            }
            acc / BigRational::from_integer(factorial(k))
        })
        .collect();
    ChernVector::ch(comps)
}

/// phi_j = (1/j!) sum_i s(j, i) i! Ch_i.
pub fn phi_from_chern(v: &ChernVector) -> ChernVector {
    assert_eq!(v.basis, ChernBasis::Ch, "expected Ch components");
    let n = v.components.len();
    let s = stirling1_table(n.saturating_sub(1));
    let comps = (0..n)
        .map(|j| {
            let mut acc = BigRational::zero();
            for (i, (sj, c)) in s[j].iter().zip(&v.components).take(j + 1).enumerate() {
                acc += BigRational::from_integer(sj * factorial(i)) * c;
            }
            acc / BigRational::from_integer(factorial(j))
        })
        .collect();
    ChernVector::phi(comps)
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |a, i| a * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn pairing_row(big_n: u64, n: usize) -> Vec<BigInt> {
    (0..=n as u64).map(|k| binomial(big_n, k)).collect()
}

/// Rows N = 0..=nmax, columns k = 0..=n: the pairing <[F_k], [P_-N]> = C(N, k).
pub fn pairing_table(n: usize, nmax: u64) -> Vec<Vec<BigInt>> {
    (0..=nmax).map(|big_n| pairing_row(big_n, n)).collect()
}

/// Ch_2 - Ch_1/2 computed through the Ch-basis; equals phi_2.
pub fn phi2_via_chern(v: &ChernVector) -> BigRational {
    let ch = chern_from_phi(v);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    &ch.components[2] - &ch.components[1] * half
}

fn csv_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// CSV of lambda_{k,N} at q0: columns k, N, value, classical limit.
pub fn laplacian_csv(p: QPoint, kmax: u64, nrange: std::ops::RangeInclusive<i64>) -> String {
    let mut out = format!("# q0={}\nk,N,lambda,lambda_q1\n", p.q());
    for big_n in nrange {
        for k in 0..=kmax {
            let v = laplacian_eig(k, big_n).eval(p).unwrap_or(f64::NAN);
            let lim = laplacian_eig(k, big_n).limit_q1().map(|r| csv_rational(&r)).unwrap_or_default();
            writeln!(out, "{k},{big_n},{v:.15e},{lim}").unwrap();
        }
    }
    out
}

pub fn pairing_csv(n: usize, nmax: u64) -> String {
    let mut out = String::from("N");
    for k in 0..=n {
        write!(out, ",phi_{k}").unwrap();
    }
    out.push('\n');
    for (big_n, row) in pairing_table(n, nmax).iter().enumerate() {
        write!(out, "{big_n}").unwrap();
        for c in row {
            write!(out, ",{c}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// CSV of the matrix M with Ch = M phi, rows k, columns j.
pub fn chern_matrix_csv(n: usize) -> String {
    let mut out = String::from("k");
    for j in 0..=n {
        write!(out, ",phi_{j}").unwrap();
    }
    out.push('\n');
    for k in 0..=n {
        let mut e = vec![BigRational::zero(); n + 1];
        write!(out, "Ch_{k}").unwrap();
        for j in 0..=n {
            e.iter_mut().for_each(|x| *x = BigRational::zero());
            e[j] = BigRational::one();
            let ch = chern_from_phi(&ChernVector::phi(e.clone()));
            write!(out, ",{}", csv_rational(&ch.components[k])).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn gap_identity_exact() {
        for n in 0..=10 {
            for k in 0..=10 {
                assert_eq!(&laplacian_eig(k, n) - &laplacian_eig(k, -n), laplacian_gap(n), "k={k} N={n}");
            }
        }
    }

    #[test]
    fn laplacian_limits() {
        assert!(laplacian_eig(0, 0).is_zero());
        for n in 0..=6 {
            for k in 0..=6 {
                let lim = laplacian_eig(k, n).limit_q1().unwrap();
                assert_eq!(lim, BigRational::from_integer(laplacian_eig_classical(k, n)));
                assert_eq!(laplacian_eig(k, -n).limit_q1().unwrap(), lim);
            }
        }
    }

    #[test]
    fn monopole_and_casimir() {
        assert!(monopole_curvature(0).is_zero());
        assert!(monopole_curvature(1).is_one());
        for n in -4..=4 {
            assert_eq!(monopole_curvature(n).limit_q1().unwrap(), BigRational::from_integer(n.into()));
        }
        assert!(casimir_value(1).is_one());
        for d in 0..6u64 {
            assert_eq!(casimir_value(d).limit_q1().unwrap(), rat((d as i64 + 1).pow(2), 4));
        }
        // [1/2]^2 = (s - s^-1)^2 / (s^2 - s^-2)^2
        let half = &(&QScalar::s_pow(1) - &QScalar::s_pow(-1)) / &(&QScalar::s_pow(2) - &QScalar::s_pow(-2));
        assert_eq!(casimir_value(0), half.pow(2));
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(2, 1), 1.into());
        assert_eq!(stirling2(2, 2), 1.into());
        assert_eq!(stirling2(3, 2), 3.into());
        for k in 0..8 {
            assert_eq!(stirling2(k, k), 1.into());
        }
    }

    #[test]
    fn chern_examples() {
        // Ch_2 = phi_2 + phi_1/2
        let v = ChernVector::phi(vec![rat(0, 1), rat(1, 1), rat(0, 1)]);
        assert_eq!(chern_from_phi(&v).components[2], rat(1, 2));
        // phi_2 = Ch_2 - Ch_1/2
        let c = ChernVector::ch(vec![rat(0, 1), rat(1, 1), rat(1, 1)]);
        assert_eq!(phi_from_chern(&c).components[2], rat(1, 2));
        // Ch_k(L_-N) = N^k / k!
        for big_n in 0..6u64 {
            let ch = chern_from_phi(&ChernVector::line_bundle(big_n, 4));
            for (k, c) in ch.components.iter().enumerate() {
                let expect = BigRational::new(BigInt::from(big_n).pow(k as u32), factorial(k));
                assert_eq!(*c, expect);
            }
        }
    }

    #[test]
    fn pairing_table_rows() {
        let t = pairing_table(3, 5);
        assert_eq!(t[0], vec![1.into(), 0.into(), 0.into(), 0.into()]);
        assert_eq!(t[3][2], 3.into());
        let full = pairing_table(6, 6);
        for (big_n, row) in full.iter().enumerate() {
            assert_eq!(row.iter().sum::<BigInt>(), BigInt::from(1u64 << big_n));
        }
    }
}
