//! The spectral triples (H_j, D_j, gamma_j, J_j) on CP^1_q, truncated at l <= L.

use super::{forward, k_triangle, laction_apply, star_basis, LGen, LeftGen, Lmn, LmnBasis, Suq2Error};
use crate::qcoeff::QPoint;
use crate::sparse::SparseOperator;
use nalgebra::SymmetricEigen;
use std::collections::BTreeMap;

/// 2j for j in N + 1/2.
pub(crate) fn half_odd(j: f64) -> Result<i32, Suq2Error> {
    let j2 = (2.0 * j).round();
    if (2.0 * j - j2).abs() > 1e-9 || j2 < 1.0 || (j2 as i64) % 2 == 0 {
        return Err(Suq2Error::Invalid(format!("j = {j} is not in N + 1/2")));
    }
    Ok(j2 as i32)
}

/// gamma_j = +1 on W_n iff j + n is odd.
pub fn is_positive_slot(j2: i32, n2: i32) -> bool {
    ((j2 + n2) / 2).rem_euclid(2) == 1
}

#[derive(Clone, Debug)]
pub struct SpectralTriple {
    pub j2: i32,
    pub l_max: f64,
    pub point: QPoint,
    pub basis: LmnBasis,
    pub d: SparseOperator,
    pub gamma: SparseOperator,
    /// J = j_op composed with complex conjugation.
    pub j_op: SparseOperator,
}

impl SpectralTriple {
    pub fn j(&self) -> f64 {
        self.j2 as f64 / 2.0
    }

    /// Left multiplication by A, B or B^* on H_j.
    pub fn multiplication(&self, g: LeftGen) -> SparseOperator {
        let p = self.point;
        self.basis.operator(|v| forward(g, v, p))
    }

    /// J_j on a complex vector given as (real, imaginary) parts.
    pub fn apply_j(&self, re: &[f64], im: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let neg: Vec<f64> = im.iter().map(|x| -x).collect();
        (self.j_op.apply(re), self.j_op.apply(&neg))
    }

    /// J b J^-1 for a real operator b; J^-1 = J^t composed with conjugation.
    pub fn conjugate(&self, b: &SparseOperator) -> SparseOperator {
        self.j_op.mul(b).mul(&self.j_op.transpose())
    }
}

pub fn build_triple(j: f64, l_max: f64, p: QPoint) -> Result<SpectralTriple, Suq2Error> {
    let j2 = half_odd(j)?;
    if l_max < j + 2.0 {
        return Err(Suq2Error::Truncation { l: l_max, need: j + 2.0 });
    }
    let basis = LmnBasis::filtered(l_max, |v| v.n2.abs() <= j2 && v.n2.rem_euclid(2) == 1);
    let d = basis.operator(|v| {
        let x = if is_positive_slot(j2, v.n2) { LGen::E } else { LGen::F };
        laction_apply(x, v, p).into_iter().collect()
    });
    let gamma = SparseOperator::diagonal(
        &basis.states.iter().map(|v| if is_positive_slot(j2, v.n2) { 1.0 } else { -1.0 }).collect::<Vec<_>>(),
    );
    // (J a)_n = K > ((-1)^(n+j) q^n a_{-n}^*)
    let j_op = basis.operator(|v| {
        let (t, s) = star_basis(v, p);
        let sign = if ((t.n2 + j2) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        vec![(t, s * sign * p.qpow(t.n()) * k_triangle(t, p))]
    });
    Ok(SpectralTriple { j2, l_max, point: p, basis, d, gamma, j_op })
}

#[derive(Clone, Debug)]
pub struct AxiomCheck {
    pub name: String,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub j: f64,
    pub l_max: f64,
    pub q0: f64,
    pub checks: Vec<AxiomCheck>,
    /// (name, ||[D,a]|| at L, ||[D,a]|| at L + 2), max row sums on the interior.
    pub commutator_norms: Vec<(String, f64, f64)>,
}

impl AxiomReport {
    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.residual)
    }
}

fn row_sum_norm(op: &SparseOperator, inside: impl Fn(usize) -> bool) -> f64 {
    let mut rows = vec![0.0; op.dim()];
    for (i, j, v) in op.triplets() {
        if inside(i) && inside(j) {
            rows[i] += v.abs();
        }
    }
    rows.into_iter().fold(0.0, f64::max)
}

const CP1: [(LeftGen, &str); 3] = [(LeftGen::A, "A"), (LeftGen::B, "B"), (LeftGen::BStar, "B*")];

/// The defining projection p = (1 - q^2 A, B^*; B, A) on H_j (x) C^2.
pub fn projection_operator(t: &SpectralTriple) -> SparseOperator {
    let dim = t.basis.dim();
    let q2 = t.point.q().powi(2);
    let a = t.multiplication(LeftGen::A);
    let b = t.multiplication(LeftGen::B);
    let bs = t.multiplication(LeftGen::BStar);
    let mut trip: Vec<(usize, usize, f64)> = (0..dim).map(|i| (i, i, 1.0)).collect();
    trip.extend(a.triplets().map(|(i, j, v)| (i, j, -q2 * v)));
    trip.extend(bs.triplets().map(|(i, j, v)| (i, j + dim, v)));
    trip.extend(b.triplets().map(|(i, j, v)| (i + dim, j, v)));
    trip.extend(a.triplets().map(|(i, j, v)| (i + dim, j + dim, v)));
    SparseOperator::from_triplets(2 * dim, trip)
}

pub fn triple_axiom_suite(j: f64, l_max: f64, p: QPoint) -> Result<AxiomReport, Suq2Error> {
    let t = build_triple(j, l_max, p)?;
    let inside = t.basis.interior(2.0);
    let mut checks = Vec::new();
    let mut push = |name: String, op: SparseOperator| {
        checks.push(AxiomCheck { residual: op.max_abs_on(&inside), name });
    };
    let id = SparseOperator::identity(t.basis.dim());
    let (jm, d, g) = (&t.j_op, &t.d, &t.gamma);
    push("J^2+1".into(), jm.mul(jm).add(&id));
    push("JD-DJ".into(), jm.mul(d).sub(&d.mul(jm)));
    push("Jgamma+gammaJ".into(), jm.mul(g).add(&g.mul(jm)));
    push("gamma^2-1".into(), g.mul(g).sub(&id));
    push("gammaD+Dgamma".into(), g.mul(d).add(&d.mul(g)));
    push("D-D^*".into(), d.sub(&d.adjoint()));
    push("J^tJ-1".into(), jm.transpose().mul(jm).sub(&id));
    let ops: Vec<(SparseOperator, &str)> = CP1.iter().map(|&(gen, name)| (t.multiplication(gen), name)).collect();
    for (a, na) in &ops {
        push(format!("[gamma,{na}]"), g.commutator(a));
        let da = d.commutator(a);
        for (b, nb) in &ops {
            let jb = t.conjugate(b);
            push(format!("[{na},J{nb}J^-1]"), a.commutator(&jb));
            push(format!("[[D,{na}],J{nb}J^-1]"), da.commutator(&jb));
        }
    }
    let proj = projection_operator(&t);
    let dim = t.basis.dim();
    let inside2 = |i: usize| inside(i % dim);
    checks.push(AxiomCheck { name: "p^2-p".into(), residual: proj.mul(&proj).sub(&proj).max_abs_on(inside2) });
    checks.push(AxiomCheck { name: "p-p^*".into(), residual: proj.sub(&proj.adjoint()).max_abs_on(inside2) });

    let bigger = build_triple(j, l_max + 2.0, p)?;
    let inside_big = bigger.basis.interior(4.0);
    let mut commutator_norms = Vec::new();
    for &(gen, name) in &CP1 {
        let small = row_sum_norm(&t.d.commutator(&t.multiplication(gen)), &inside);
        let big = row_sum_norm(&bigger.d.commutator(&bigger.multiplication(gen)), &inside_big);
        commutator_norms.push((format!("[D,{name}]"), small, big));
    }
    Ok(AxiomReport { j, l_max, q0: p.q(), checks, commutator_norms })
}

/// One (l, m) block of D_j^2: computed eigenvalues against the q-integer
/// products [l-n+1][l+n] (H^+) and [l-n][l+n+1] (H^-).
#[derive(Clone, Debug)]
pub struct SpectrumBlock {
    pub l2: i32,
    pub m2: i32,
    pub computed: Vec<f64>,
    pub expected: Vec<f64>,
}

impl SpectrumBlock {
    pub fn max_rel_error(&self) -> f64 {
        self.computed
            .iter()
            .zip(&self.expected)
            .map(|(c, e)| (c - e).abs() / e.abs().max(1.0))
            .fold(0.0, f64::max)
    }
}

fn blocks_by_lm(basis: &LmnBasis, keep: impl Fn(&Lmn) -> bool) -> BTreeMap<(i32, i32), Vec<usize>> {
    let mut out: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
    for (i, v) in basis.states.iter().enumerate() {
        if keep(v) {
            out.entry((v.l2, v.m2)).or_default().push(i);
        }
    }
    out
}

fn sorted_eigenvalues(m: nalgebra::DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of D_j^2 per (l, m) block; D_j preserves l and m, so every
/// block is exact.
pub fn d_squared_spectrum(t: &SpectralTriple) -> Vec<SpectrumBlock> {
    let p = t.point;
    let d2 = t.d.mul(&t.d);
    blocks_by_lm(&t.basis, |_| true)
        .into_iter()
        .map(|((l2, m2), idx)| {
            let computed = sorted_eigenvalues(d2.block(&idx, &idx));
            let mut expected: Vec<f64> = idx
                .iter()
                .map(|&i| {
                    let v = t.basis.states[i];
                    let (l, n) = (v.l(), v.n());
                    let i2 = |x: f64| p.qint_half((2.0 * x).round() as i64);
                    if is_positive_slot(t.j2, v.n2) {
                        i2(l - n + 1.0) * i2(l + n)
                    } else {
                        i2(l - n) * i2(l + n + 1.0)
                    }
                })
                .collect();
            expected.sort_by(f64::total_cmp);
            SpectrumBlock { l2, m2, computed, expected }
        })
        .collect()
}

/// Distinct eigenvalues of |D_j| with multiplicities, ascending.
pub fn dirac_spectrum(t: &SpectralTriple) -> Vec<(f64, usize)> {
    let mut all: Vec<f64> = d_squared_spectrum(t).into_iter().flat_map(|b| b.computed).map(|x| x.max(0.0).sqrt()).collect();
    all.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = Vec::new();
    for x in all {
        match out.last_mut() {
            Some((y, k)) if (x - *y).abs() <= 1e-9 * y.abs().max(1.0) => *k += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

/// Number of eigenvalues of |D_j| at most lambda on the truncated space.
pub fn counting_function(t: &SpectralTriple, lambda: f64) -> usize {
    dirac_spectrum(t).into_iter().filter(|&(x, _)| x <= lambda).map(|(_, k)| k).sum()
}

/// Casimir ([1/2 - n]^2 + L_F L_E) on each V_{2l} block of W_n, n in H_j.
#[derive(Clone, Debug)]
pub struct CasimirBlock {
    pub l2: i32,
    pub n2: i32,
    pub eigenvalues: Vec<f64>,
    pub expected: f64,
}

pub fn casimir_blocks(j: f64, l_max: f64, p: QPoint) -> Result<Vec<CasimirBlock>, Suq2Error> {
    let j2 = half_odd(j)?;
    let basis = LmnBasis::filtered(l_max, |v| v.n2.abs() <= j2 + 2 && v.n2.rem_euclid(2) == 1);
    let le = basis.operator(|v| laction_apply(LGen::E, v, p).into_iter().collect());
    let lf = basis.operator(|v| laction_apply(LGen::F, v, p).into_iter().collect());
    let i2 = |x: f64| p.qint_half((2.0 * x).round() as i64);
    let k_term = SparseOperator::diagonal(&basis.states.iter().map(|v| i2(0.5 - v.n()).powi(2)).collect::<Vec<_>>());
    let cas = k_term.add(&lf.mul(&le));
    let mut groups: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
    for (i, v) in basis.states.iter().enumerate() {
        if v.n2.abs() <= j2 {
            groups.entry((v.n2, v.l2)).or_default().push(i);
        }
    }
    Ok(groups
        .into_iter()
        .map(|((n2, l2), idx)| CasimirBlock {
            l2,
            n2,
            eigenvalues: sorted_eigenvalues(cas.block(&idx, &idx)),
            expected: i2(l2 as f64 / 2.0 + 0.5).powi(2),
        })
        .collect())
}
