//! The vectors Psi_N, projections P_N = Psi_N Psi_N^dag, the weight matrices
//! R_N and the representations sigma^N, with their exact identities.
//!
//! The components of Psi_N carry square roots of q-multinomials, which are not
//! in Q(s). We write psi_J = sqrt(c_J) phi_J with c_J the q-multinomial and
//! phi_J exact, and keep every matrix in this "rational gauge":
//! P_N = D M D with D = diag(sqrt c_J), sigma^N = D^-1 T D. All identities
//! are then exact statements about M and T with C = D^2 = diag(c_J).

mod matrix;

pub use matrix::{PolyMatrix, QMatrix};

use crate::ncpoly::{uq_act, NCPoly, NCWord, Presentation, UqGen};
use crate::qcoeff::{qmultinomial, QScalar};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjectionError {
    #[error("action of {0} leaves the span of the Psi components")]
    NotClosed(String),
}

/// Multi-indices (j_0..j_n) with sum `total`, in colexicographic order.
pub fn multi_indices(total: u32, n: usize) -> Vec<Vec<u32>> {
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, total, &mut vec![0; n + 1], &mut out);
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

/// Psi_N in the rational gauge: psi_J = sqrt(gauge[J]) * comps[J].
#[derive(Clone, Debug)]
pub struct AlgebraVector {
    pub n: usize,
    pub big_n: i64,
    pub indices: Vec<Vec<u32>>,
    pub gauge: Vec<QScalar>,
    pub comps: Vec<NCPoly>,
}

impl AlgebraVector {
    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// Psi^dag Psi = sum_J c_J phi_J^* phi_J.
    pub fn norm_squared(&self, pres: Presentation) -> NCPoly {
        let mut acc = NCPoly::zero();
        for (c, p) in self.gauge.iter().zip(&self.comps) {
            acc.add_scaled(&p.star().mul(p, pres), c);
        }
        acc
    }

    /// Numeric components sqrt(c_J) * coefficient of phi_J (each phi_J is a
    /// single monomial), evaluated at q0.
    pub fn numeric_coefficients(&self, q0: f64) -> Vec<f64> {
        self.gauge
            .iter()
            .zip(&self.comps)
            .map(|(c, p)| {
                let (_, coef) = p.terms().next().expect("monomial component");
                c.at(q0).sqrt() * coef.at(q0)
            })
            .collect()
    }

    /// The monomial word of each component.
    pub fn words(&self) -> Vec<NCWord> {
        self.comps.iter().map(|p| p.terms().next().expect("monomial").0.clone()).collect()
    }
}

pub fn pres(n: usize) -> Presentation {
    Presentation::new(n)
}

/// Psi_N at level n.
pub fn psi(big_n: i64, n: usize) -> AlgebraVector {
    let total = big_n.unsigned_abs() as u32;
    let indices = multi_indices(total, n);
    let mut gauge = Vec::new();
    let mut comps = Vec::new();
    for j in &indices {
        let ji: Vec<i64> = j.iter().map(|&x| x as i64).collect();
        gauge.push(qmultinomial(&ji).expect("nonnegative"));
        let mut cross = 0i32;
        for r in 0..j.len() {
            for s in r + 1..j.len() {
                cross += (j[r] * j[s]) as i32;
            }
        }
        let zeros = vec![0u32; n + 1];
        let (s_exp, word) = if big_n >= 0 {
            (-cross, NCWord::from_exponents(j, &zeros))
        } else {
            let lin: i32 = j.iter().enumerate().map(|(r, &x)| r as i32 * x as i32).sum();
            (cross + 2 * lin, NCWord::from_exponents(&zeros, j))
        };
        comps.push(NCPoly::term(word, QScalar::s_pow(s_exp)));
    }
    AlgebraVector { n, big_n, indices, gauge, comps }
}

/// Matrix diag(sqrt g) * inner * diag(sqrt g) with exact `inner` and `gauge`.
#[derive(Clone, Debug)]
pub struct AlgebraMatrix {
    pub n: usize,
    pub inner: PolyMatrix,
    pub gauge: Vec<QScalar>,
}

impl AlgebraMatrix {
    pub fn size(&self) -> usize {
        self.inner.size
    }

    /// Exact diagonal entry g_i * inner_ii of the true matrix.
    pub fn diagonal_entry(&self, i: usize) -> NCPoly {
        self.inner.get(i, i).scale(&self.gauge[i])
    }

    /// P^2 - P in the gauge: M C M - M.
    pub fn idempotency_defect(&self) -> PolyMatrix {
        let p = pres(self.n);
        self.inner.mul_weighted(&self.gauge, &self.inner, p).sub(&self.inner)
    }

    /// P^dag - P in the gauge: M^dag - M.
    pub fn selfadjoint_defect(&self) -> PolyMatrix {
        self.inner.adjoint(pres(self.n)).sub(&self.inner)
    }
}

/// P_N = Psi_N Psi_N^dag.
pub fn projection(big_n: i64, n: usize) -> AlgebraMatrix {
    let v = psi(big_n, n);
    let p = pres(n);
    let stars: Vec<NCPoly> = v.comps.iter().map(|c| c.star()).collect();
    let inner = PolyMatrix::from_fn(v.len(), |i, j| v.comps[i].mul(&stars[j], p));
    AlgebraMatrix { n, inner, gauge: v.gauge }
}

/// q-trace sum_i q^(2i) M_ii of the true matrix.
pub fn qtrace(m: &AlgebraMatrix) -> NCPoly {
    let mut acc = NCPoly::zero();
    for i in 0..m.size() {
        acc.add_scaled(&m.diagonal_entry(i), &QScalar::q_pow(2 * i as i32));
    }
    acc.normalize(pres(m.n))
}

/// Diagonal of R_N: q^(1/2 sum_i (n - 2i) j_i) at multi-index J.
pub fn weight_matrix(big_n: i64, n: usize) -> Vec<QScalar> {
    multi_indices(big_n.unsigned_abs() as u32, n)
        .iter()
        .map(|j| {
            let e: i32 = j.iter().enumerate().map(|(i, &x)| (n as i32 - 2 * i as i32) * x as i32).sum();
            QScalar::s_pow(e)
        })
        .collect()
}

/// sigma^N in the rational gauge: sigma^N(x) = D^-1 T(x) D.
#[derive(Clone, Debug)]
pub struct SigmaRep {
    pub n: usize,
    pub big_n: i64,
    pub gauge: Vec<QScalar>,
    weights: Vec<QScalar>,
    basis: AlgebraVector,
    cache: HashMap<UqGen, QMatrix>,
}

impl SigmaRep {
    pub fn dim(&self) -> usize {
        self.gauge.len()
    }

    /// The exact matrix T(x) with sigma^N(x) = D^-1 T(x) D.
    pub fn get(&self, x: UqGen) -> Result<QMatrix, ProjectionError> {
        if let Some(m) = self.cache.get(&x) {
            return Ok(m.clone());
        }
        let tilde = action_matrix(&self.basis, x)?;
        Ok(conjugate_by_weights(&tilde, &self.weights))
    }

    /// The unscaled matrix sigma~^N(x) of the action on phi_J (rational gauge).
    pub fn tilde(&self, x: UqGen) -> Result<QMatrix, ProjectionError> {
        action_matrix(&self.basis, x)
    }

    /// Numeric sigma^N(x) at q0 including the square-root gauge.
    pub fn numeric(&self, x: UqGen, q0: f64) -> Result<nalgebra::DMatrix<f64>, ProjectionError> {
        let t = self.get(x)?.eval(q0);
        let d: Vec<f64> = self.gauge.iter().map(|c| c.at(q0).sqrt()).collect();
        Ok(nalgebra::DMatrix::from_fn(t.nrows(), t.ncols(), |i, j| t[(i, j)] * d[j] / d[i]))
    }
}

/// R^-1 T R, the convention for which x > R Psi = sigma(x)^t R Psi holds.
fn conjugate_by_weights(t: &QMatrix, r: &[QScalar]) -> QMatrix {
    let mut out = t.clone();
    for i in 0..t.rows {
        for j in 0..t.cols {
            if !t[(i, j)].is_zero() {
                out[(i, j)] = &(&t[(i, j)] * &r[j]) / &r[i];
            }
        }
    }
    out
}

/// Matrix of x on the span of the phi_J: x > phi_J = sum_J' phi_J' T_J'J.
fn action_matrix(basis: &AlgebraVector, x: UqGen) -> Result<QMatrix, ProjectionError> {
    let p = pres(basis.n);
    let words = basis.words();
    let lookup: HashMap<&NCWord, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let coef: Vec<QScalar> = basis.comps.iter().map(|c| c.terms().next().unwrap().1.clone()).collect();
    let dim = basis.len();
    let mut t = QMatrix::zeros(dim, dim);
    for (jcol, phi) in basis.comps.iter().enumerate() {
        let image = uq_act(x, phi, p);
        for (w, c) in image.terms() {
            let Some(&jrow) = lookup.get(w) else {
                return Err(ProjectionError::NotClosed(x.name()));
            };
            t[(jrow, jcol)] = c / &coef[jrow];
        }
    }
    Ok(t)
}

pub fn sigma_rep(big_n: i64, n: usize) -> Result<SigmaRep, ProjectionError> {
    let basis = psi(big_n, n);
    let weights = weight_matrix(big_n, n);
    let mut rep = SigmaRep {
        n,
        big_n,
        gauge: basis.gauge.clone(),
        weights,
        basis,
        cache: HashMap::new(),
    };
    for x in UqGen::all(n) {
        let m = rep.get(x)?;
        rep.cache.insert(x, m);
    }
    Ok(rep)
}

/// P'_N = R_N P_N R_N^-1 in the rational gauge.
pub fn projection_prime(big_n: i64, n: usize) -> AlgebraMatrix {
    let mut m = projection(big_n, n);
    let r = weight_matrix(big_n, n);
    m.inner = PolyMatrix::from_fn(m.size(), |i, j| m.inner.get(i, j).scale(&(&r[i] / &r[j])));
    m
}

/// Residual of (x_(1) > P') sigma(x_(2))^t - sigma(x)^t P', conjugated by D.
///
/// With sigma = D^-1 T D and P' = D M' D this is
/// sum (x_(1) > M') C T(x_(2))^t - T(x)^t M' C, which vanishes iff the
/// covariance condition holds.
pub fn check_equivariance(big_n: i64, n: usize, x: UqGen) -> Result<PolyMatrix, ProjectionError> {
    let p = pres(n);
    let rep = sigma_rep(big_n, n)?;
    let m = projection_prime(big_n, n);
    let c = QMatrix::diag(&m.gauge);
    let act = |y: UqGen| m.inner.map(|e| uq_act(y, e, p));
    let rhs = m.inner.mul_scalar_left(&rep.get(x)?.transpose()).mul_scalar_right(&c);
    let lhs = match x {
        UqGen::E(i) | UqGen::F(i) => {
            let a = act(x).mul_scalar_right(&c.mul(&rep.get(UqGen::K(i))?.transpose()));
            let b = act(UqGen::KInv(i)).mul_scalar_right(&c.mul(&rep.get(x)?.transpose()));
            a.add(&b)
        }
        _ => act(x).mul_scalar_right(&c.mul(&rep.get(x)?.transpose())),
    };
    Ok(lhs.sub(&rhs))
}
