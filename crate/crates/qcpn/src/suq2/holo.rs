//! Holomorphic sections of Gamma_N and the pairing of tau_1 with (P'_N, sigma^N)
//! on CP^1_q.
//!
//! The right action is a < y = L_{S(y)} a; with S(F) = -q^-1 F this gives
//! a < F = -q^-1 L_F a, and dbar a = q^-1 a < F = -q^-2 L_F a on A(CP^1_q).

use super::{apply_l, apply_word, basis_vector, LGen, Lmn, LmnBasis, LmnVector, Suq2Error};
use crate::ncpoly::{NCWord, UqGen};
use crate::projections::{psi, sigma_rep};
use crate::qcoeff::QPoint;
use nalgebra::{DMatrix, SymmetricEigen};

#[derive(Clone, Debug)]
pub struct HoloReport {
    pub big_n: i64,
    pub l_max: f64,
    pub dim: usize,
    /// Largest l carrying weight in a kernel vector.
    pub kernel_l_max: f64,
    pub kernel: Vec<LmnVector>,
}

/// Kernel of < F = -q^-1 L_F on Gamma_N truncated at l <= L.
pub fn holo_kernel(big_n: i64, l_max: f64, p: QPoint, tol: f64) -> Result<HoloReport, Suq2Error> {
    let half = big_n.unsigned_abs() as f64 / 2.0;
    if l_max < half + 3.0 {
        return Err(Suq2Error::Truncation { l: l_max, need: half + 3.0 });
    }
    // Gamma_N: L_K = q^(N/2), i.e. n = -N/2
    let n2 = -big_n as i32;
    let dom = LmnBasis::filtered(l_max, |v| v.n2 == n2);
    let cod = LmnBasis::filtered(l_max, |v| v.n2 == n2 + 2);
    let coef = -1.0 / p.q();
    let mut mat = DMatrix::zeros(cod.dim(), dom.dim());
    for (col, &v) in dom.states.iter().enumerate() {
        for (t, c) in apply_l(LGen::F, &basis_vector(v), p) {
            let row = cod.index_of(t).ok_or(Suq2Error::Boundary(t.l()))?;
            mat[(row, col)] = coef * c;
        }
    }
    let gram = mat.transpose() * &mat;
    let eig = SymmetricEigen::new(gram);
    let mut kernel = Vec::new();
    let mut kernel_l_max: f64 = 0.0;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let sv = lambda.max(0.0).sqrt();
        if sv > tol / 10.0 && sv < tol * 10.0 {
            return Err(Suq2Error::Unstable { sv, tol });
        }
        if sv <= tol / 10.0 {
            let mut vec = LmnVector::new();
            for (i, &s) in dom.states.iter().enumerate() {
                let c = eig.eigenvectors[(i, k)];
                if c.abs() > tol {
                    vec.insert(s, c);
                    kernel_l_max = kernel_l_max.max(s.l());
                }
            }
            kernel.push(vec);
        }
    }
    let top = dom.l_max2() as f64 / 2.0;
    if !kernel.is_empty() && kernel_l_max >= top {
        return Err(Suq2Error::Boundary(kernel_l_max));
    }
    Ok(HoloReport { big_n, l_max, dim: kernel.len(), kernel_l_max, kernel })
}

pub fn holo_dim(big_n: i64, l_max: f64, p: QPoint, tol: f64) -> Result<usize, Suq2Error> {
    Ok(holo_kernel(big_n, l_max, p, tol)?.dim)
}

#[derive(Clone, Debug)]
pub struct Tau1Value {
    pub big_n: i64,
    pub q0: f64,
    pub value: f64,
    /// Same evaluation with the truncation raised by 4.
    pub value_wider: f64,
    pub target: f64,
}

impl Tau1Value {
    pub fn rel_error(&self) -> f64 {
        (self.value - self.target).abs() / self.target.abs().max(1.0)
    }
}

/// q^-4 [N], the value of the pairing at n = 1.
pub fn tau1_target(big_n: i64, p: QPoint) -> f64 {
    p.qpow(-4.0) * p.qint(big_n)
}

/// Left multiplication by a word on a vector, keeping l <= cap.
fn mult(w: &NCWord, x: &LmnVector, p: QPoint, cap: i32) -> Result<LmnVector, Suq2Error> {
    apply_word(w, x, p, Some(cap))
}

/// (L_E a) c = [L_E, a] L_K c for a in A(CP^1_q) (L_E obeys the opposite
/// coproduct and L_K a = a).
fn mult_le(w: &NCWord, x: &LmnVector, p: QPoint, cap: i32) -> Result<LmnVector, Suq2Error> {
    let kx = apply_l(LGen::K, x, p);
    let mut out = apply_l(LGen::E, &mult(w, &kx, p, cap)?, p);
    for (k, v) in mult(w, &apply_l(LGen::E, &kx, p), p, cap)? {
        *out.entry(k).or_insert(0.0) -= v;
    }
    Ok(out)
}

/// tau_1(a0, a1, a2) = h(a0 (dbar a1^*)^* dbar a2) = -q^-3 h(a0 (L_E a1)(L_F a2))
/// for monomials a_i with numeric prefactors applied by the caller.
fn tau1_words(a0: &NCWord, a1: &NCWord, a2: &NCWord, p: QPoint, cap: i32) -> Result<f64, Suq2Error> {
    let v = apply_l(LGen::F, &mult(a2, &basis_vector(Lmn::vacuum()), p, cap)?, p);
    let u = mult_le(a1, &v, p, cap)?;
    let w = mult(a0, &u, p, cap)?;
    let h = w.get(&Lmn::vacuum()).copied().unwrap_or(0.0);
    Ok(-p.qpow(-3.0) * h)
}

fn tau1_at(big_n: i64, p: QPoint, cap: i32) -> Result<f64, Suq2Error> {
    let v = psi(big_n, 1);
    let coef = v.numeric_coefficients(p.q());
    let words = v.words();
    let sigma = sigma_rep(big_n, 1)
        .map_err(|e| Suq2Error::Invalid(e.to_string()))?
        .numeric(UqGen::K2RhoInv, p.q())
        .map_err(|e| Suq2Error::Invalid(e.to_string()))?;
    let k = v.len();
    // P_ij = psi_i psi_j^*
    let entry = |i: usize, j: usize| (coef[i] * coef[j], words[i].concat(&words[j].star()));
    let mut terms = Vec::new();
    for i in 0..k {
        for l in 0..k {
            let s = sigma[(i, l)];
            if s == 0.0 {
                continue;
            }
            for j in 0..k {
                for m in 0..k {
                    let (c0, w0) = entry(i, j);
                    let (c1, w1) = entry(j, m);
                    let (c2, w2) = entry(m, l);
                    terms.push(s * c0 * c1 * c2 * tau1_words(&w0, &w1, &w2, p, cap)?);
                }
            }
        }
    }
    Ok(terms.iter().sum())
}

/// <[tau_1], [(P'_N, sigma^N)]> = tau_1(Tr(P (x) P (x) P sigma(K_2rho^-1)^t)) at
/// n = 1, with intermediate vectors truncated at l <= L.
pub fn tau1_pairing(big_n: i64, l_max: f64, p: QPoint) -> Result<Tau1Value, Suq2Error> {
    let need = big_n.unsigned_abs() as f64 * 2.0 + 1.0;
    if l_max < need {
        return Err(Suq2Error::Truncation { l: l_max, need });
    }
    let cap = (2.0 * l_max).floor() as i32;
    Ok(Tau1Value {
        big_n,
        q0: p.q(),
        value: tau1_at(big_n, p, cap)?,
        value_wider: tau1_at(big_n, p, cap + 8)?,
        target: tau1_target(big_n, p),
    })
}
