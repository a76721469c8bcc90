//! SU_q(2) in its left regular representation on the orthonormal basis
//! |l,m,n>, and the constructions on CP^1_q built from it: the spectral
//! triples (H_j, D_j, gamma_j, J_j), the index of p D_j^+ p, the Haar state,
//! holomorphic sections of Gamma_N and the pairing with tau_1.
//!
//! Labels are stored doubled (`l2 = 2l` etc.) so that half-integers are exact.
//! Matrix elements carry square roots of q-integer products and are
//! evaluated numerically at a [`QPoint`]; exact statements (the analytic
//! index) use squared coefficients as [`QScalar`]s.


mod holo;
mod index;
mod triple;

pub use holo::{holo_dim, holo_kernel, tau1_pairing, tau1_target, HoloReport, Tau1Value};
pub use index::{
    coupling_nonzero, has_range_vector, index_analytic, index_branch_formula, index_numeric, pair_slots,
    poincare_pairing, IndexReport, PairContribution, SectorP,
};
pub use triple::{
    build_triple, casimir_blocks, counting_function, d_squared_spectrum, dirac_spectrum, is_positive_slot,
    projection_operator, triple_axiom_suite, AxiomCheck, AxiomReport, CasimirBlock, SpectralTriple, SpectrumBlock,
};

use crate::ncpoly::{NCPoly, NCWord};
use crate::qcoeff::{QError, QPoint};
use crate::sparse::SparseOperator;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Suq2Error {
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("truncation L = {l} too small, need at least {need}")]
    Truncation { l: f64, need: f64 },
    #[error("numerical rank decision ambiguous: singular value {sv:.3e} near tolerance {tol:.1e}")]
    Unstable { sv: f64, tol: f64 },
    #[error("kernel vector reaches the truncation boundary l = {0}")]
    Boundary(f64),
    #[error(transparent)]
    Q(#[from] QError),
}

/// Basis label |l,m,n> with doubled entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lmn {
    pub l2: i32,
    pub m2: i32,
    pub n2: i32,
}

impl Lmn {
    pub fn new(l2: i32, m2: i32, n2: i32) -> Self {
        Lmn { l2, m2, n2 }
    }

    /// From actual half-integer values.
    pub fn from_f64(l: f64, m: f64, n: f64) -> Self {
        let d = |x: f64| (2.0 * x).round() as i32;
        Lmn::new(d(l), d(m), d(n))
    }

    pub fn vacuum() -> Self {
        Lmn::new(0, 0, 0)
    }

    pub fn is_valid(&self) -> bool {
        self.l2 >= 0
            && self.m2.abs() <= self.l2
            && self.n2.abs() <= self.l2
            && (self.l2 - self.m2) % 2 == 0
            && (self.l2 - self.n2) % 2 == 0
    }

    pub fn l(&self) -> f64 {
        self.l2 as f64 / 2.0
    }

    pub fn m(&self) -> f64 {
        self.m2 as f64 / 2.0
    }

    pub fn n(&self) -> f64 {
        self.n2 as f64 / 2.0
    }

    fn shift(&self, dl2: i32, dm2: i32, dn2: i32) -> Lmn {
        Lmn::new(self.l2 + dl2, self.m2 + dm2, self.n2 + dn2)
    }
}

impl std::fmt::Display for Lmn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let h = |x: i32| if x % 2 == 0 { format!("{}", x / 2) } else { format!("{x}/2") };
        write!(f, "|{},{},{}>", h(self.l2), h(self.m2), h(self.n2))
    }
}

/// Generators of A(SU_q(2)) and of A(CP^1_q) acting by left multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LeftGen {
    Alpha,
    Beta,
    AlphaStar,
    BetaStar,
    /// A = beta^* beta
    A,
    /// B = beta^* alpha
    B,
    BStar,
}

impl LeftGen {
    pub fn all() -> [LeftGen; 7] {
        use LeftGen::*;
        [Alpha, Beta, AlphaStar, BetaStar, A, B, BStar]
    }

    pub fn name(&self) -> &'static str {
        match self {
            LeftGen::Alpha => "alpha",
            LeftGen::Beta => "beta",
            LeftGen::AlphaStar => "alpha*",
            LeftGen::BetaStar => "beta*",
            LeftGen::A => "A",
            LeftGen::B => "B",
            LeftGen::BStar => "B*",
        }
    }

    /// Label shifts (dl2, dm2, dn2) of the forward generators.
    fn shifts(&self) -> &'static [(i32, i32, i32)] {
        match self {
            LeftGen::Alpha => &[(1, 1, 1), (-1, 1, 1)],
            LeftGen::Beta => &[(1, -1, 1), (-1, -1, 1)],
            LeftGen::A => &[(2, 0, 0), (0, 0, 0), (-2, 0, 0)],
            LeftGen::B => &[(2, 2, 0), (0, 2, 0), (-2, 2, 0)],
            _ => &[],
        }
    }

    fn adjoint_of(&self) -> Option<LeftGen> {
        match self {
            LeftGen::AlphaStar => Some(LeftGen::Alpha),
            LeftGen::BetaStar => Some(LeftGen::Beta),
            LeftGen::BStar => Some(LeftGen::B),
            _ => None,
        }
    }
}

/// Helper closures for q-numbers at a point.
struct Q {
    p: QPoint,
}

impl Q {
    fn pow(&self, e: f64) -> f64 {
        self.p.qpow(e)
    }

    /// [x] for x in Z/2.
    fn i(&self, x: f64) -> f64 {
        self.p.qint_half((2.0 * x).round() as i64)
    }
}

fn forward(g: LeftGen, v: Lmn, p: QPoint) -> Vec<(Lmn, f64)> {
    let z = Q { p };
    let (l, m, n) = (v.l(), v.m(), v.n());
    let lz = v.l2 == 0;
    let mut out: Vec<(Lmn, f64)> = Vec::with_capacity(3);
    let mut push = |t: Lmn, c: f64| {
        if t.is_valid() && c != 0.0 && c.is_finite() {
            out.push((t, c));
        }
    };
    match g {
        LeftGen::Alpha => {
            let c1 = z.pow(-l + 0.5 * (m + n - 1.0))
                * (z.i(l + m + 1.0) * z.i(l + n + 1.0) / (z.i(2.0 * l + 1.0) * z.i(2.0 * l + 2.0))).sqrt();
            push(v.shift(1, 1, 1), c1);
            if !lz {
                let c2 = z.pow(l + 0.5 * (m + n + 1.0))
                    * (z.i(l - m) * z.i(l - n) / (z.i(2.0 * l) * z.i(2.0 * l + 1.0))).sqrt();
                push(v.shift(-1, 1, 1), c2);
            }
        }
        LeftGen::Beta => {
            let e = z.pow(0.5 * (m + n - 1.0));
            let c1 = e * (z.i(l - m + 1.0) * z.i(l + n + 1.0) / (z.i(2.0 * l + 1.0) * z.i(2.0 * l + 2.0))).sqrt();
            push(v.shift(1, -1, 1), c1);
            if !lz {
                let c2 = -e * (z.i(l + m) * z.i(l - n) / (z.i(2.0 * l) * z.i(2.0 * l + 1.0))).sqrt();
                push(v.shift(-1, -1, 1), c2);
            }
        }
        LeftGen::A => {
            let e = z.pow(m + n - 1.0);
            let up = -e / z.i(2.0 * l + 2.0)
                * (z.i(l + m + 1.0) * z.i(l - m + 1.0) * z.i(l + n + 1.0) * z.i(l - n + 1.0)
                    / (z.i(2.0 * l + 1.0) * z.i(2.0 * l + 3.0)))
                .sqrt();
            push(v.shift(2, 0, 0), up);
            let mut d = z.i(l - m + 1.0) * z.i(l + n + 1.0) / (z.i(2.0 * l + 1.0) * z.i(2.0 * l + 2.0));
            if !lz {
                d += z.i(l + m) * z.i(l - n) / (z.i(2.0 * l) * z.i(2.0 * l + 1.0));
            }
            push(v, e * d);
            if v.l2 >= 2 {
                let down = -e / z.i(2.0 * l)
                    * (z.i(l + m) * z.i(l - m) * z.i(l + n) * z.i(l - n) / (z.i(2.0 * l - 1.0) * z.i(2.0 * l + 1.0)))
                        .sqrt();
                push(v.shift(-2, 0, 0), down);
            }
        }
        LeftGen::B => {
            let up = -z.pow(-l + m + n - 0.5) / z.i(2.0 * l + 2.0)
                * (z.i(l + m + 1.0) * z.i(l + m + 2.0) * z.i(l + n + 1.0) * z.i(l - n + 1.0)
                    / (z.i(2.0 * l + 1.0) * z.i(2.0 * l + 3.0)))
                .sqrt();
            push(v.shift(2, 2, 0), up);
            let mut bracket = z.pow(-l - 0.5) * z.i(l + n + 1.0) / z.i(2.0 * l + 2.0);
            if !lz {
                bracket -= z.pow(l + 0.5) * z.i(l - n) / z.i(2.0 * l);
            }
            let mid = z.pow(m + n) * (z.i(l + m + 1.0) * z.i(l - m)).sqrt() / z.i(2.0 * l + 1.0) * bracket;
            push(v.shift(0, 2, 0), mid);
            if v.l2 >= 2 {
                let down = z.pow(l + m + n + 0.5) / z.i(2.0 * l)
                    * (z.i(l - m) * z.i(l - m - 1.0) * z.i(l + n) * z.i(l - n)
                        / (z.i(2.0 * l - 1.0) * z.i(2.0 * l + 1.0)))
                    .sqrt();
                push(v.shift(-2, 2, 0), down);
            }
        }
        LeftGen::AlphaStar | LeftGen::BetaStar | LeftGen::BStar => {
            let f = g.adjoint_of().unwrap();
            for &(dl, dm, dn) in f.shifts() {
                let src = v.shift(-dl, -dm, -dn);
                if !src.is_valid() {
                    continue;
                }
                for (t, c) in forward(f, src, p) {
                    if t == v {
                        push(src, c);
                    }
                }
            }
        }
    }
    out
}

/// Matrix elements of a left multiplication on one basis vector, exact
/// (no truncation).
pub fn leftreg_apply(g: LeftGen, v: Lmn, p: QPoint) -> Vec<(Lmn, f64)> {
    forward(g, v, p)
}

/// Generators of U_q(su(2)) acting by the second left action L.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LGen {
    E,
    F,
    K,
    KInv,
}

pub fn laction_apply(x: LGen, v: Lmn, p: QPoint) -> Option<(Lmn, f64)> {
    let z = Q { p };
    let (l, n) = (v.l(), v.n());
    let (t, c) = match x {
        LGen::K => (v, z.pow(-n)),
        LGen::KInv => (v, z.pow(n)),
        LGen::F => (v.shift(0, 0, 2), (z.i(l - n) * z.i(l + n + 1.0)).sqrt()),
        LGen::E => (v.shift(0, 0, -2), (z.i(l - n + 1.0) * z.i(l + n)).sqrt()),
    };
    (t.is_valid() && c != 0.0).then_some((t, c))
}

/// The involution on basis vectors: |l,m,n>^* = (-1)^(m-n) q^(m+n) |l,-m,-n>.
pub fn star_basis(v: Lmn, p: QPoint) -> (Lmn, f64) {
    let sign = if ((v.m2 - v.n2) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    (Lmn::new(v.l2, -v.m2, -v.n2), sign * p.qpow(v.m() + v.n()))
}

/// The left canonical action of K: K > |l,m,n> = q^m |l,m,n>.
pub fn k_triangle(v: Lmn, p: QPoint) -> f64 {
    p.qpow(v.m())
}

/// Finite sparse vector over the |l,m,n> basis.
pub type LmnVector = BTreeMap<Lmn, f64>;

pub fn basis_vector(v: Lmn) -> LmnVector {
    BTreeMap::from([(v, 1.0)])
}

fn accumulate(out: &mut LmnVector, t: Lmn, c: f64) {
    *out.entry(t).or_insert(0.0) += c;
}

/// Apply a left multiplication to a vector, dropping components with l > cap.
pub fn apply_left(g: LeftGen, x: &LmnVector, p: QPoint, cap: Option<i32>) -> LmnVector {
    let mut out = LmnVector::new();
    for (&v, &c) in x {
        for (t, a) in forward(g, v, p) {
            if cap.is_none_or(|cap| t.l2 <= cap) {
                accumulate(&mut out, t, a * c);
            }
        }
    }
    out.retain(|_, c| *c != 0.0);
    out
}

pub fn apply_l(x: LGen, v: &LmnVector, p: QPoint) -> LmnVector {
    let mut out = LmnVector::new();
    for (&b, &c) in v {
        if let Some((t, a)) = laction_apply(x, b, p) {
            accumulate(&mut out, t, a * c);
        }
    }
    out
}

/// Involution of an element given by its vector (the map a|0> -> a^*|0>).
pub fn star_vector(v: &LmnVector, p: QPoint) -> LmnVector {
    v.iter().map(|(&b, &c)| {
        let (t, s) = star_basis(b, p);
        (t, s * c)
    }).collect()
}

fn letter(g: crate::ncpoly::Generator) -> Result<LeftGen, Suq2Error> {
    Ok(match (g.index, g.starred) {
        (0, false) => LeftGen::Alpha,
        (0, true) => LeftGen::AlphaStar,
        (1, false) => LeftGen::Beta,
        (1, true) => LeftGen::BetaStar,
        _ => return Err(Suq2Error::Invalid(format!("z{} is not a generator at n = 1", g.index))),
    })
}

/// Apply a word in z_0 = alpha, z_1 = beta (rightmost letter first).
pub fn apply_word(w: &NCWord, x: &LmnVector, p: QPoint, cap: Option<i32>) -> Result<LmnVector, Suq2Error> {
    let mut cur = x.clone();
    for g in w.gens().collect::<Vec<_>>().into_iter().rev() {
        cur = apply_left(letter(g)?, &cur, p, cap);
    }
    Ok(cur)
}

/// Left multiplication by an element of A(S^3_q) = A(SU_q(2)), with z_0 = alpha
/// and z_1 = beta.
pub fn apply_poly(a: &NCPoly, x: &LmnVector, p: QPoint, cap: Option<i32>) -> Result<LmnVector, Suq2Error> {
    let mut out = LmnVector::new();
    for (w, c) in a.terms() {
        let cv = c.eval(p)?;
        for (t, v) in apply_word(w, x, p, cap)? {
            accumulate(&mut out, t, cv * v);
        }
    }
    out.retain(|_, c| *c != 0.0);
    Ok(out)
}

/// The vector a|0> of an algebra element.
pub fn element_vector(a: &NCPoly, p: QPoint) -> Result<LmnVector, Suq2Error> {
    apply_poly(a, &basis_vector(Lmn::vacuum()), p, None)
}

pub fn inner(x: &LmnVector, y: &LmnVector) -> f64 {
    x.iter().map(|(k, a)| a * y.get(k).copied().unwrap_or(0.0)).sum()
}

/// Haar state of an element: the vacuum expectation <0|a|0>.
pub fn haar(a: &NCPoly, p: QPoint) -> Result<f64, Suq2Error> {
    Ok(element_vector(a, p)?.get(&Lmn::vacuum()).copied().unwrap_or(0.0))
}

/// Haar state of an operator assembled on a truncated basis.
pub fn haar_operator(op: &SparseOperator, basis: &LmnBasis) -> f64 {
    let i = basis.index_of(Lmn::vacuum()).expect("vacuum in basis");
    op.get(i, i)
}

/// |h(ab) - h(eta(b) a)| with eta = K_2rho^-1 > (K^-2 > at n = 1), for a, b in
/// A(CP^1_q).
pub fn modular_check(a: &NCPoly, b: &NCPoly, p: QPoint) -> Result<f64, Suq2Error> {
    use crate::ncpoly::{uq_act, Presentation, UqGen};
    let pres = Presentation::new(1);
    let invariant = |x: &NCPoly| x.terms().all(|(w, _)| 2 * w.gens().filter(|g| g.starred).count() == w.len());
    if !invariant(a) || !invariant(b) {
        return Err(Suq2Error::Invalid("modular_check needs a, b in A(CP^1_q) (U(1)-invariant words)".into()));
    }
    // free products: the operators satisfy the relations, and the reduced
    // normal form only adds cancelling q^-2 coefficients
    let ab = a.mul_free(b);
    let ba = uq_act(UqGen::K2RhoInv, b, pres).mul_free(a);
    Ok((haar(&ab, p)? - haar(&ba, p)?).abs())
}

/// Enumerated truncated basis.
#[derive(Clone, Debug)]
pub struct LmnBasis {
    pub states: Vec<Lmn>,
    index: HashMap<Lmn, usize>,
}

impl LmnBasis {
    pub fn from_states(states: Vec<Lmn>) -> Self {
        let index = states.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        LmnBasis { states, index }
    }

    /// All |l,m,n> with l <= l_max.
    pub fn full(l_max: f64) -> Self {
        Self::filtered(l_max, |_| true)
    }

    pub fn filtered(l_max: f64, keep: impl Fn(&Lmn) -> bool) -> Self {
        let top = (2.0 * l_max).floor() as i32;
        let mut states = Vec::new();
        for l2 in 0..=top {
            for m2 in (-l2..=l2).step_by(2) {
                for n2 in (-l2..=l2).step_by(2) {
                    let v = Lmn::new(l2, m2, n2);
                    if keep(&v) {
                        states.push(v);
                    }
                }
            }
        }
        Self::from_states(states)
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index_of(&self, v: Lmn) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn l_max2(&self) -> i32 {
        self.states.iter().map(|s| s.l2).max().unwrap_or(0)
    }

    /// Rows and columns at least `margin` (in l) below the truncation.
    pub fn interior(&self, margin: f64) -> impl Fn(usize) -> bool + '_ {
        let cut = self.l_max2() - (2.0 * margin).round() as i32;
        move |i| self.states[i].l2 <= cut
    }

    /// Assemble an operator from its action on basis vectors; components
    /// leaving the basis are dropped.
    pub fn operator(&self, f: impl Fn(Lmn) -> Vec<(Lmn, f64)>) -> SparseOperator {
        let mut t = Vec::new();
        for (col, &v) in self.states.iter().enumerate() {
            for (w, c) in f(v) {
                if let Some(row) = self.index_of(w) {
                    t.push((row, col, c));
                }
            }
        }
        SparseOperator::from_triplets(self.dim(), t)
    }
}

/// Left multiplication by a generator on the truncated basis l <= l_max.
pub fn leftreg(g: LeftGen, l_max: f64, p: QPoint) -> (LmnBasis, SparseOperator) {
    let b = LmnBasis::full(l_max);
    let op = b.operator(|v| forward(g, v, p));
    (b, op)
}

/// L_E, L_F or L_K on the truncated basis.
pub fn laction(x: LGen, l_max: f64, p: QPoint) -> (LmnBasis, SparseOperator) {
    let b = LmnBasis::full(l_max);
    let op = b.operator(|v| laction_apply(x, v, p).into_iter().collect());
    (b, op)
}

/// Left multiplication by an element on a given basis.
pub fn poly_operator(a: &NCPoly, basis: &LmnBasis, p: QPoint) -> Result<SparseOperator, Suq2Error> {
    let cap = Some(basis.l_max2());
    let mut t = Vec::new();
    for (col, &v) in basis.states.iter().enumerate() {
        for (w, c) in apply_poly(a, &basis_vector(v), p, cap)? {
            if let Some(row) = basis.index_of(w) {
                t.push((row, col, c));
            }
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), t))
}

#[cfg(test)]
mod tests;
