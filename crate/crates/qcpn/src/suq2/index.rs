//! Index of p D_j^+ p : p(H_j^+ (x) C^2) -> p(H_j^- (x) C^2) for the defining
//! projection p of CP^1_q.
//!
//! D_j only couples the slot pairs (n_lo, n_lo + 1) with n_lo = -j, -j+2, ...,
//! and both D_j and p preserve the integer labels (l, m) of the vectors
//! v^{n,up}_{l,m}, v^{n,down}_{l,m}. Each sector is a finite matrix, so the
//! index is a finite sum of dim ker - dim coker.

use super::triple::{half_odd, is_positive_slot};
use super::{apply_l, apply_left, inner, LGen, LeftGen, Lmn, LmnVector, Suq2Error};
use crate::qcoeff::{qint, QPoint, QScalar};
use nalgebra::{DMatrix, SymmetricEigen};

/// The 2x2 block of p on (v^up_{l,m}, v^down_{l,m}) in W_n (x) C^2, for
/// l > |n| - 1/2. Independent of m; P12 is kept squared.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorP {
    pub l: i64,
    pub n2: i32,
    pub p11: QScalar,
    pub p12_sq: QScalar,
    pub p22: QScalar,
}

impl SectorP {
    pub fn new(l: i64, n2: i32) -> Self {
        let n2l = n2 as i64;
        let d = qint(2 * l + 1);
        let plus = qint((2 * l + n2l + 1) / 2);
        let minus = qint((2 * l - n2l + 1) / 2);
        let p11 = &(&QScalar::s_pow(n2 - 2 * l as i32 - 1) * &plus) / &d;
        let p12_sq = &(&(&QScalar::s_pow(2 * n2) * &plus) * &minus) / &(&d * &d);
        let p22 = &(&QScalar::s_pow(n2 + 2 * l as i32 + 1) * &minus) / &d;
        SectorP { l, n2, p11, p12_sq, p22 }
    }

    /// (P11)^2 + (P12)^2 = P11 and trace 1: a rank one projection.
    pub fn is_rank_one(&self) -> bool {
        (&(&self.p11 * &self.p11) + &self.p12_sq) == self.p11 && (&self.p11 + &self.p22).is_one()
    }
}

/// Does slot n carry a vector of p(W_n (x) C^2) in sector l? Either w^{||}
/// (l >= |n| + 1/2) or v^down at l = |n| - 1/2 with n < 0.
pub fn has_range_vector(l: i64, n2: i32) -> bool {
    let twice = 2 * l;
    let a = n2.unsigned_abs() as i64;
    twice > a || (twice == a - 1 && n2 < 0)
}

/// Squared components of the range vector of slot n in the (v^up, v^down)
/// basis: w^{||} = (sqrt P11, P12 / sqrt P11) or v^down = (0, 1).
fn range_components_sq(l: i64, n2: i32) -> (QScalar, QScalar) {
    if 2 * l > n2.unsigned_abs() as i64 {
        let s = SectorP::new(l, n2);
        let down = &s.p12_sq / &s.p11;
        (s.p11, down)
    } else {
        (QScalar::zero(), QScalar::one())
    }
}

/// Squared diagonal coefficients of L_E from slot n to n-1 on (v^up, v^down):
/// [l-n+1/2][l+n-1/2] and [l-n+3/2][l+n+1/2] (zero where v^up_{l} is absent).
fn le_coefficients_sq(l: i64, n2: i32) -> (QScalar, QScalar) {
    let (l2, n2) = (2 * l, n2 as i64);
    let up = if l2 > (n2 - 2).abs() { &qint((l2 - n2 + 1) / 2) * &qint((l2 + n2 - 1) / 2) } else { QScalar::zero() };
    let down = &qint((l2 - n2 + 3) / 2) * &qint((l2 + n2 + 1) / 2);
    (up, down)
}

/// Is the coupling <range(n-1), L_E range(n)> in sector l nonzero? Every term
/// of the coupling is a product of nonnegative square roots, so it vanishes
/// iff every squared term does.
pub fn coupling_nonzero(l: i64, n2_hi: i32) -> bool {
    let (d_up, d_dn) = range_components_sq(l, n2_hi);
    let (c_up, c_dn) = range_components_sq(l, n2_hi - 2);
    let (e_up, e_dn) = le_coefficients_sq(l, n2_hi);
    !(&(&c_up * &e_up) * &d_up).is_zero() || !(&(&c_dn * &e_dn) * &d_dn).is_zero()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairContribution {
    pub n2_lo: i32,
    pub l: i64,
    pub kernel: i64,
    pub cokernel: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexReport {
    pub j2: i32,
    pub kernel: i64,
    pub cokernel: i64,
    pub index: i64,
    /// Sectors (pair, l) with a nonzero contribution, multiplicity 2l+1 included.
    pub contributions: Vec<PairContribution>,
}

impl IndexReport {
    fn from_contributions(j2: i32, contributions: Vec<PairContribution>) -> Self {
        let kernel = contributions.iter().map(|c| c.kernel).sum();
        let cokernel = contributions.iter().map(|c| c.cokernel).sum();
        IndexReport { j2, kernel, cokernel, index: kernel - cokernel, contributions }
    }
}

/// The slots n_lo (in H_j^-) of the pairs coupled by D_j, doubled.
pub fn pair_slots(j2: i32) -> Vec<i32> {
    (-j2..j2).step_by(4).filter(|&n2| !is_positive_slot(j2, n2)).collect()
}

/// Sectors above this l contribute nothing (checked up to l_top + 2).
fn last_sector(j2: i32) -> i64 {
    (j2 as i64 + 1) / 2
}

/// Exact sector count: per pair and integer l, the domain and codomain of
/// pD_j^+p each have dimension 0 or 1 per m, and the map between them is
/// zero or not according to [`coupling_nonzero`].
pub fn index_analytic(j: f64) -> Result<IndexReport, Suq2Error> {
    let j2 = half_odd(j)?;
    let mut contributions = Vec::new();
    for n2_lo in pair_slots(j2) {
        let n2_hi = n2_lo + 2;
        for l in 0..=last_sector(j2) + 2 {
            let dom = has_range_vector(l, n2_hi) as i64;
            let cod = has_range_vector(l, n2_lo) as i64;
            let rank = (dom == 1 && cod == 1 && coupling_nonzero(l, n2_hi)) as i64;
            let (k, c) = ((dom - rank) * (2 * l + 1), (cod - rank) * (2 * l + 1));
            if k != 0 || c != 0 {
                if l > last_sector(j2) {
                    return Err(Suq2Error::Invalid(format!("sector l = {l} above j + 1/2 contributes")));
                }
                contributions.push(PairContribution { n2_lo, l, kernel: k, cokernel: c });
            }
        }
    }
    Ok(IndexReport::from_contributions(j2, contributions))
}

/// The closed-form values stated for the index: (j^2 - 9/4)/2 for
/// j in 2N + 1/2 and (j^2 - 1/4)/2 for j in 2N + 3/2.
pub fn index_branch_formula(j: f64) -> Result<i64, Suq2Error> {
    let j2 = half_odd(j)? as i64;
    let shift = if (j2 - 1) % 4 == 0 { 9 } else { 1 };
    // (j^2 - c/4)/2 = (j2^2 - c)/8
    Ok((j2 * j2 - shift) / 8)
}

/// A vector of W_n (x) C^2.
type Pair = (LmnVector, LmnVector);

fn pair_inner(a: &Pair, b: &Pair) -> f64 {
    inner(&a.0, &b.0) + inner(&a.1, &b.1)
}

fn pair_axpy(acc: &mut Pair, c: f64, x: &Pair) {
    for (dst, src) in [(&mut acc.0, &x.0), (&mut acc.1, &x.1)] {
        for (&k, &v) in src {
            *dst.entry(k).or_insert(0.0) += c * v;
        }
    }
}

fn pair_norm(a: &Pair) -> f64 {
    pair_inner(a, a).max(0.0).sqrt()
}

fn single(l2: i32, m2: i32, n2: i32, c: f64) -> LmnVector {
    let v = Lmn::new(l2, m2, n2);
    let mut out = LmnVector::new();
    if v.is_valid() && c != 0.0 {
        out.insert(v, c);
    }
    out
}

/// v^{n,up}_{l,m} and v^{n,down}_{l,m} (None where not defined).
fn v_vectors(l: i64, m: i64, n2: i32, p: QPoint) -> [Option<Pair>; 2] {
    let (lf, mf) = (l as f64, m as f64);
    let i = |x: f64| p.qint_half((2.0 * x).round() as i64);
    let (l2, m2) = (2 * l as i32, 2 * m as i32);
    let up = (2 * l > n2.unsigned_abs() as i64).then(|| {
        let s = 1.0 / i(2.0 * lf).sqrt();
        (
            single(l2 - 1, m2 - 1, n2, s * (p.qpow(-lf + mf) * i(lf + mf)).sqrt()),
            single(l2 - 1, m2 + 1, n2, s * (p.qpow(lf + mf) * i(lf - mf)).sqrt()),
        )
    });
    let down = (2 * l + 1 >= n2.unsigned_abs() as i64).then(|| {
        let s = 1.0 / i(2.0 * lf + 2.0).sqrt();
        (
            single(l2 + 1, m2 - 1, n2, s * (p.qpow(lf + mf + 1.0) * i(lf - mf + 1.0)).sqrt()),
            single(l2 + 1, m2 + 1, n2, -s * (p.qpow(-lf + mf - 1.0) * i(lf + mf + 1.0)).sqrt()),
        )
    });
    [up, down]
}

/// p = (1 - q^2 A, B^*; B, A) on a vector of W_n (x) C^2.
fn apply_p(x: &Pair, p: QPoint) -> Pair {
    let q2 = p.q() * p.q();
    let mut top = x.0.clone();
    for (k, v) in apply_left(LeftGen::A, &x.0, p, None) {
        *top.entry(k).or_insert(0.0) -= q2 * v;
    }
    for (k, v) in apply_left(LeftGen::BStar, &x.1, p, None) {
        *top.entry(k).or_insert(0.0) += v;
    }
    let mut bottom = apply_left(LeftGen::A, &x.1, p, None);
    for (k, v) in apply_left(LeftGen::B, &x.0, p, None) {
        *bottom.entry(k).or_insert(0.0) += v;
    }
    (top, bottom)
}

fn apply_le(x: &Pair, p: QPoint) -> Pair {
    (apply_l(LGen::E, &x.0, p), apply_l(LGen::E, &x.1, p))
}

/// Express `y` in the orthonormal family `basis`; returns the coefficients
/// and the norm of the remainder.
fn expand(y: &Pair, basis: &[Pair]) -> (Vec<f64>, f64) {
    let coef: Vec<f64> = basis.iter().map(|b| pair_inner(b, y)).collect();
    let mut rest = y.clone();
    for (c, b) in coef.iter().zip(basis) {
        pair_axpy(&mut rest, -c, b);
    }
    (coef, pair_norm(&rest))
}

fn classify(x: f64, tol: f64) -> Result<bool, Suq2Error> {
    if x.abs() <= tol / 10.0 {
        Ok(false)
    } else if x.abs() >= tol * 10.0 {
        Ok(true)
    } else {
        Err(Suq2Error::Unstable { sv: x, tol })
    }
}

/// Orthonormal basis of the range of p inside the sector (l, m) of slot n,
/// computed from the left regular representation.
fn range_basis(l: i64, m: i64, n2: i32, p: QPoint, tol: f64) -> Result<Vec<Pair>, Suq2Error> {
    let vs: Vec<Pair> = v_vectors(l, m, n2, p).into_iter().flatten().collect();
    let k = vs.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut mat = DMatrix::zeros(k, k);
    for (b, v) in vs.iter().enumerate() {
        let (coef, leak) = expand(&apply_p(v, p), &vs);
        if leak > tol {
            return Err(Suq2Error::Invalid(format!("p leaves sector l={l}, m={m}, n={}/2 (|leak| = {leak:.2e})", n2)));
        }
        for (a, c) in coef.into_iter().enumerate() {
            mat[(a, b)] = c;
        }
    }
    let eig = SymmetricEigen::new(mat);
    let mut out = Vec::new();
    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        let one = classify(lambda, tol)?;
        if one {
            if (lambda - 1.0).abs() > tol {
                return Err(Suq2Error::Unstable { sv: lambda, tol });
            }
            let mut w = (LmnVector::new(), LmnVector::new());
            for (a, v) in vs.iter().enumerate() {
                pair_axpy(&mut w, eig.eigenvectors[(a, idx)], v);
            }
            out.push(w);
        }
    }
    Ok(out)
}

/// Independent numerical index: sector ranges of p and the matrix of
/// pD_j^+p between them from the left regular representation, with ranks at
/// tolerance `tol`. Sectors up to l = L - 3/2 are computed and those above
/// j + 1/2 must contribute zero.
pub fn index_numeric(j: f64, l_max: f64, p: QPoint, tol: f64) -> Result<IndexReport, Suq2Error> {
    let j2 = half_odd(j)?;
    let need = j2 as f64 + 3.0;
    if l_max < need {
        return Err(Suq2Error::Truncation { l: l_max, need });
    }
    let l_top = (l_max - 1.5).floor() as i64;
    let mut contributions = Vec::new();
    for n2_lo in pair_slots(j2) {
        let n2_hi = n2_lo + 2;
        for l in 0..=l_top {
            let (mut kernel, mut cokernel) = (0, 0);
            for m in -l..=l {
                let dom = range_basis(l, m, n2_hi, p, tol)?;
                let cod = range_basis(l, m, n2_lo, p, tol)?;
                let full: Vec<Pair> = v_vectors(l, m, n2_lo, p).into_iter().flatten().collect();
                let mut mat = DMatrix::zeros(cod.len(), dom.len());
                for (b, w) in dom.iter().enumerate() {
                    let image = apply_le(w, p);
                    let (_, leak) = expand(&image, &full);
                    if leak > tol * image_scale(&image) {
                        return Err(Suq2Error::Invalid(format!("L_E leaves sector l={l}, m={m}")));
                    }
                    for (a, c) in cod.iter().enumerate() {
                        mat[(a, b)] = pair_inner(c, &image);
                    }
                }
                let mut rank = 0;
                if !mat.is_empty() {
                    for sv in mat.singular_values().iter() {
                        rank += classify(*sv, tol)? as i64;
                    }
                }
                kernel += dom.len() as i64 - rank;
                cokernel += cod.len() as i64 - rank;
            }
            if kernel != 0 || cokernel != 0 {
                if l > last_sector(j2) {
                    return Err(Suq2Error::Invalid(format!("sector l = {l} above j + 1/2 contributes")));
                }
                contributions.push(PairContribution { n2_lo, l, kernel, cokernel });
            }
        }
    }
    Ok(IndexReport::from_contributions(j2, contributions))
}

fn image_scale(x: &Pair) -> f64 {
    pair_norm(x).max(1.0)
}

/// <(i,k),(i',k')>_{D_j} = (k i' - i k') Index(pD_j^+p).
pub fn poincare_pairing(c1: (i64, i64), c2: (i64, i64), index: i64) -> i64 {
    let ((i, k), (i2, k2)) = (c1, c2);
    (k * i2 - i * k2) * index
}
