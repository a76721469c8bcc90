//! Representations pi_{n,k} of the sphere algebra on l^2(N^n), the Fredholm
//! modules built from them, and their pairing with the line-bundle projections.
//!
//! Every generator maps a basis vector to a multiple of one basis vector, so
//! words are applied state by state with the displayed formulas and no
//! intermediate truncation. Only trace sums are truncated, to the box
//! m_i <= M.

use crate::ncpoly::{Generator, NCPoly, NCWord};
use crate::projections::psi;
use crate::qcoeff::{QError, QPoint};
use crate::sparse::SparseOperator;
use rayon::prelude::*;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("invalid representation data: {0}")]
    Invalid(String),
    #[error("truncation tail estimate {estimate:.3e} exceeds tolerance {tol:.1e}")]
    Tail { estimate: f64, tol: f64 },
    #[error(transparent)]
    Q(#[from] QError),
}

/// pi_{n,k} truncated to the box m_i <= m_max, evaluated at a numeric q.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepSpec {
    pub n: usize,
    pub k: usize,
    pub m_max: u32,
    pub point: QPoint,
}

impl RepSpec {
    pub fn new(n: usize, k: usize, m_max: u32, q0: f64) -> Result<Self, RepError> {
        if n == 0 || k > n {
            return Err(RepError::Invalid(format!("need 0 <= k <= n and n >= 1, got n={n} k={k}")));
        }
        if m_max < 1 {
            return Err(RepError::Invalid("truncation M must be at least 1".into()));
        }
        Ok(RepSpec { n, k, m_max, point: QPoint::new(q0)? })
    }
}

/// Enumeration of the truncation box {0..=M}^n.
#[derive(Clone, Debug)]
pub struct FockBasis {
    pub n: usize,
    pub m_max: u32,
    pub states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl FockBasis {
    pub fn new(n: usize, m_max: u32) -> Self {
        let mut states = vec![vec![]];
        for _ in 0..n {
            states = states
                .into_iter()
                .flat_map(|s| {
                    (0..=m_max).map(move |v| {
                        let mut t = s.clone();
                        t.push(v);
                        t
                    })
                })
                .collect();
        }
        let index = states.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect();
        FockBasis { n, m_max, states, index }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index_of(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// States at distance at least `margin` from the upper truncation face.
    pub fn interior(&self, margin: u32) -> impl Fn(usize) -> bool + '_ {
        move |i| self.states[i].iter().all(|&x| x + margin <= self.m_max)
    }
}

/// Membership in V^n_k: 0 <= m_1 <= .. <= m_k and m_{k+1} > .. > m_n >= 0.
pub fn in_subspace(m: &[i64], k: usize) -> bool {
    if m.iter().any(|&x| x < 0) {
        return false;
    }
    let n = m.len();
    (1..k).all(|i| m[i - 1] <= m[i]) && (k + 1..n).all(|i| m[i - 1] > m[i])
}

/// m with index 0 meaning the fixed m_0 = 0 and 1..n the coordinates.
fn m_at(m: &[i64], i: usize) -> i64 {
    if i == 0 {
        0
    } else {
        m[i - 1]
    }
}

/// Coefficient and target of pi_{n,k}(z_i) on |m>, m assumed in V^n_k.
fn forward(m: &[i64], i: usize, k: usize, q: f64) -> Option<(f64, Vec<i64>)> {
    if k == 0 {
        return (i == 0).then(|| (1.0, m.to_vec()));
    }
    if i > k {
        return None;
    }
    if i == k {
        return Some((q.powi(m_at(m, k) as i32), m.to_vec()));
    }
    let mi = m_at(m, i);
    let gap = m_at(m, i + 1) - mi + 1;
    let c = q.powi(mi as i32) * (1.0 - q.powi(2 * gap as i32)).sqrt();
    let mut t = m.to_vec();
    for x in t.iter_mut().take(k).skip(i) {
        *x += 1;
    }
    Some((c, t))
}

/// Apply one letter of pi_{n,k} to |m>.
fn apply_gen(g: Generator, m: &[i64], k: usize, q: f64) -> Option<(f64, Vec<i64>)> {
    if !in_subspace(m, k) {
        return None;
    }
    let i = g.index as usize;
    if !g.starred {
        return forward(m, i, k, q).filter(|(_, t)| in_subspace(t, k));
    }
    // adjoint: find the unique preimage under z_i
    if k == 0 || i == k {
        return forward(m, i, k, q);
    }
    if i > k {
        return None;
    }
    let mut src = m.to_vec();
    for x in src.iter_mut().take(k).skip(i) {
        *x -= 1;
    }
    if !in_subspace(&src, k) {
        return None;
    }
    forward(&src, i, k, q).map(|(c, _)| (c, src))
}

/// Apply a word (rightmost letter first) to |m>.
pub fn apply_word(w: &NCWord, m: &[u32], k: usize, q: f64) -> Option<(f64, Vec<u32>)> {
    let mut cur: Vec<i64> = m.iter().map(|&x| x as i64).collect();
    // pi_{n,k} vanishes off V^n_k, including on the unit
    if !in_subspace(&cur, k) {
        return None;
    }
    let mut coef = 1.0;
    for g in w.gens().collect::<Vec<_>>().into_iter().rev() {
        let (c, t) = apply_gen(g, &cur, k, q)?;
        coef *= c;
        cur = t;
        if coef == 0.0 {
            return None;
        }
    }
    Some((coef, cur.into_iter().map(|x| x as u32).collect()))
}

fn check_level(a: &NCPoly, n: usize) -> Result<(), RepError> {
    match a.max_index() {
        Some(m) if m > n => Err(RepError::Invalid(format!("generator z{m} beyond level {n}"))),
        _ => Ok(()),
    }
}

/// Matrix of pi_{n,k}(z_i) or its adjoint on the truncation box.
pub fn rep_generator(spec: &RepSpec, i: usize, starred: bool) -> SparseOperator {
    let g = Generator { index: i as u8, starred };
    rep_poly(&NCPoly::gen(g), spec).expect("generator within level")
}

/// pi_{n,k}(a) on the truncation box, entries with both indices inside the box.
pub fn rep_poly(a: &NCPoly, spec: &RepSpec) -> Result<SparseOperator, RepError> {
    check_level(a, spec.n)?;
    let basis = FockBasis::new(spec.n, spec.m_max);
    let q = spec.point.q();
    let terms: Vec<(NCWord, f64)> =
        a.terms().map(|(w, c)| Ok((w.clone(), c.eval(spec.point)?))).collect::<Result<_, QError>>()?;
    let triplets: Vec<(usize, usize, f64)> = (0..basis.dim())
        .into_par_iter()
        .flat_map_iter(|col| {
            let m = &basis.states[col];
            let mut out = Vec::new();
            for (w, c) in &terms {
                if let Some((v, t)) = apply_word(w, m, spec.k, q) {
                    if let Some(row) = basis.index_of(&t) {
                        out.push((row, col, c * v));
                    }
                }
            }
            out
        })
        .collect();
    Ok(SparseOperator::from_triplets(basis.dim(), triplets))
}

/// Sum of diagonal matrix elements of pi_{n,k}(a) over V^n_k inside the box.
pub fn truncated_trace(a: &NCPoly, n: usize, k: usize, m_max: u32, q0: f64) -> Result<f64, RepError> {
    let spec = RepSpec::new(n, k, m_max, q0)?;
    check_level(a, n)?;
    let q = spec.point.q();
    let terms: Vec<(NCWord, f64)> =
        a.terms().map(|(w, c)| Ok((w.clone(), c.eval(spec.point)?))).collect::<Result<_, QError>>()?;
    let basis = FockBasis::new(n, m_max);
    // collected before summing so the result does not depend on scheduling
    Ok(basis
        .states
        .par_iter()
        .filter(|m| in_subspace(&m.iter().map(|&x| x as i64).collect::<Vec<_>>(), k))
        .map(|m| {
            let mut s = 0.0;
            for (w, c) in &terms {
                if let Some((v, t)) = apply_word(w, m, k, q) {
                    if &t == m {
                        s += c * v;
                    }
                }
            }
            s
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum())
}

/// Tr(pi_+ - pi_-)(a) for a at level n, truncated to the box.
pub fn trace_difference(a: &NCPoly, n: usize, m_max: u32, q0: f64) -> Result<f64, RepError> {
    let mut total = 0.0;
    for k in 0..=n {
        let t = truncated_trace(a, n, k, m_max, q0)?;
        total += if k % 2 == 0 { t } else { -t };
    }
    Ok(total)
}

/// Value of a numeric pairing together with a truncation-tail estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairingValue {
    pub value: f64,
    pub tail_estimate: f64,
}

/// Diagonal entries psi_J psi_J^* of P_{-N} pulled back to level k.
///
/// The entries are kept as the unreduced products c_J g_J^2 w_J w_J^*, the
/// same algebra elements as their normal forms. Their matrix elements are
/// norms |pi(w_J^*)|m>|^2 >= 0, which avoids the sign cancellations that the
/// q^-2n factors of the sphere reduction introduce in floating point.
pub fn pulled_back_diagonal(big_n: u32, n: usize, k: usize) -> Vec<NCPoly> {
    let v = psi(-(big_n as i64), n);
    let mut out = Vec::new();
    for (c, phi) in v.gauge.iter().zip(&v.comps) {
        let entry = phi.mul_free(&phi.star()).scale(c);
        let keep = phi.max_index().is_none_or(|m| m <= k);
        if keep {
            out.push(entry);
        }
    }
    out
}

/// <[F_k], [P_{-N}]> at level n, computed as Tr(pi_+ - pi_-) of the diagonal
/// of the pulled-back projection.
pub fn fredholm_pairing(big_n: u32, k: usize, n: usize, m_max: u32, q0: f64) -> Result<PairingValue, RepError> {
    if k > n {
        return Err(RepError::Invalid(format!("k={k} exceeds n={n}")));
    }
    let point = QPoint::new(q0)?;
    if q0 >= 1.0 {
        // at q = 1 the representations are not Fredholm modules
        return Err(RepError::Invalid("the pairing needs 0 < q0 < 1".into()));
    }
    let diag = pulled_back_diagonal(big_n, n, k);
    if k == 0 {
        // character of CP^0: z_0 unitary, so each entry reduces to a scalar
        let mut v = 0.0;
        for d in &diag {
            for (w, c) in d.pullback(0).terms() {
                if w.is_empty() {
                    v += c.eval(point)?;
                }
            }
        }
        return Ok(PairingValue { value: v, tail_estimate: 0.0 });
    }
    let eval = |m: u32| -> Result<f64, RepError> {
        let mut s = 0.0;
        for d in &diag {
            s += trace_difference(d, k, m, q0)?;
        }
        Ok(s)
    };
    let value = eval(m_max)?;
    let prev = eval(m_max - 1)?;
    let tail_estimate = (value - prev).abs() / (1.0 - q0).max(f64::EPSILON);
    Ok(PairingValue { value, tail_estimate })
}

/// Like [`fredholm_pairing`] but failing when the tail estimate exceeds `tol`.
pub fn fredholm_pairing_checked(
    big_n: u32,
    k: usize,
    n: usize,
    m_max: u32,
    q0: f64,
    tol: f64,
) -> Result<PairingValue, RepError> {
    let v = fredholm_pairing(big_n, k, n, m_max, q0)?;
    if v.tail_estimate > tol {
        return Err(RepError::Tail { estimate: v.tail_estimate, tol });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::Presentation;
    use crate::qcoeff::QScalar;

    #[test]
    fn top_generator_is_diagonal() {
        let spec = RepSpec::new(1, 1, 10, 0.5).unwrap();
        let z1 = rep_generator(&spec, 1, false);
        for m in 0..=10 {
            assert!((z1.get(m, m) - 0.5f64.powi(m as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn generators_above_k_vanish() {
        let spec = RepSpec::new(3, 1, 4, 0.5).unwrap();
        assert_eq!(rep_generator(&spec, 2, false).nnz(), 0);
        assert_eq!(rep_generator(&spec, 3, true).nnz(), 0);
    }

    #[test]
    fn level_zero_rep_of_z0() {
        let spec = RepSpec::new(2, 0, 5, 0.5).unwrap();
        let z0 = rep_generator(&spec, 0, false);
        let b = FockBasis::new(2, 5);
        for (i, m) in b.states.iter().enumerate() {
            let expect = if m[0] > m[1] { 1.0 } else { 0.0 };
            assert_eq!(z0.get(i, i), expect);
        }
        assert_eq!(z0.nnz(), 15);
    }

    #[test]
    fn top_pair_commutes_and_sphere_relation() {
        let spec = RepSpec::new(1, 1, 20, 0.5).unwrap();
        let a = NCPoly::z(1).mul_free(&NCPoly::zstar(1)).sub(&NCPoly::zstar(1).mul_free(&NCPoly::z(1)));
        assert!(rep_poly(&a, &spec).unwrap().max_abs() < 1e-15);
        for n in 1..=2 {
            for k in 0..=n {
                let spec = RepSpec::new(n, k, 8, 0.5).unwrap();
                let mut s = NCPoly::zero();
                for j in 0..=n {
                    s.add_scaled(&NCPoly::zstar(j).mul_free(&NCPoly::z(j)), &QScalar::q_pow(2 * j as i32));
                }
                let op = rep_poly(&s, &spec).unwrap();
                let b = FockBasis::new(n, 8);
                for (i, m) in b.states.iter().enumerate() {
                    let inside = in_subspace(&m.iter().map(|&x| x as i64).collect::<Vec<_>>(), k);
                    let expect = if inside { 1.0 } else { 0.0 };
                    assert!((op.get(i, i) - expect).abs() < 1e-12, "n={n} k={k} m={m:?}");
                }
            }
        }
    }

    #[test]
    fn pairing_small_values() {
        let v = fredholm_pairing(0, 0, 2, 10, 0.5).unwrap();
        assert!((v.value - 1.0).abs() < 1e-12);
        for k in 1..=2 {
            assert!(fredholm_pairing(0, k, 2, 10, 0.5).unwrap().value.abs() < 1e-12);
        }
        let v = fredholm_pairing(2, 1, 2, 40, 0.5).unwrap();
        assert!((v.value - 2.0).abs() < 1e-8, "{}", v.value);
        let v = fredholm_pairing(1, 2, 2, 40, 0.5).unwrap();
        assert!(v.value.abs() < 1e-8, "{}", v.value);
    }

    #[test]
    fn presentation_level_is_checked() {
        let spec = RepSpec::new(1, 1, 3, 0.5).unwrap();
        assert!(rep_poly(&NCPoly::z(2), &spec).is_err());
        let _ = Presentation::new(1);
    }
}
