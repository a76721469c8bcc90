//! Noncommutative *-polynomials in z_0..z_n, z_0^*..z_n^* over Q(s).
//!
//! Elements of the sphere algebra are kept in the normal order
//! (z_0^*)^a0 ... (z_n^*)^an z_0^b0 ... z_n^bn; see [`rewrite`] for the rules.

mod action;
mod rewrite;

pub use action::{uq_act, UqGen};
pub use rewrite::{clear_cache, NormalizeError};

use crate::qcoeff::QScalar;
use std::collections::BTreeMap;
use std::fmt;

/// Largest supported level; generator codes must stay below 16.
pub const MAX_LEVEL: usize = 9;

const UNSTARRED: u8 = 16;

/// One of z_i or z_i^*.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub index: u8,
    pub starred: bool,
}

impl Generator {
    pub fn z(i: usize) -> Self {
        Generator { index: i as u8, starred: false }
    }

    pub fn zstar(i: usize) -> Self {
        Generator { index: i as u8, starred: true }
    }

    /// Code whose natural order is the normal order: starred first.
    pub fn code(self) -> u8 {
        if self.starred {
            self.index
        } else {
            UNSTARRED + self.index
        }
    }

    pub fn from_code(c: u8) -> Self {
        if c >= UNSTARRED {
            Generator { index: c - UNSTARRED, starred: false }
        } else {
            Generator { index: c, starred: true }
        }
    }

    pub fn star(self) -> Self {
        Generator { index: self.index, starred: !self.starred }
    }
}

/// Word in the generators, stored as codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NCWord(pub Vec<u8>);

impl NCWord {
    pub fn empty() -> Self {
        NCWord(Vec::new())
    }

    pub fn from_gens(g: &[Generator]) -> Self {
        NCWord(g.iter().map(|x| x.code()).collect())
    }

    pub fn gens(&self) -> impl Iterator<Item = Generator> + '_ {
        self.0.iter().map(|&c| Generator::from_code(c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether the word is in the canonical generator order.
    pub fn is_ordered(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn concat(&self, other: &NCWord) -> NCWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        NCWord(v)
    }

    /// Reverse and star every letter.
    pub fn star(&self) -> NCWord {
        NCWord(self.0.iter().rev().map(|&c| Generator::from_code(c).star().code()).collect())
    }

    pub fn max_index(&self) -> Option<usize> {
        self.gens().map(|g| g.index as usize).max()
    }

    /// Exponents (a_0..a_n, b_0..b_n) of an ordered word.
    pub fn exponents(&self, n: usize) -> (Vec<u32>, Vec<u32>) {
        let mut a = vec![0; n + 1];
        let mut b = vec![0; n + 1];
        for g in self.gens() {
            if g.starred {
                a[g.index as usize] += 1;
            } else {
                b[g.index as usize] += 1;
            }
        }
        (a, b)
    }

    /// Ordered word with the given exponents.
    pub fn from_exponents(a: &[u32], b: &[u32]) -> NCWord {
        let mut v = Vec::new();
        for (i, &e) in a.iter().enumerate() {
            v.extend(std::iter::repeat_n(Generator::zstar(i).code(), e as usize));
        }
        for (i, &e) in b.iter().enumerate() {
            v.extend(std::iter::repeat_n(Generator::z(i).code(), e as usize));
        }
        NCWord(v)
    }
}

impl fmt::Display for NCWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut k = 0;
        while k < self.0.len() {
            let c = self.0[k];
            let mut run = 1;
            while k + run < self.0.len() && self.0[k + run] == c {
                run += 1;
            }
            let g = Generator::from_code(c);
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "z{}{}", g.index, if g.starred { "*" } else { "" })?;
            if run > 1 {
                write!(f, "^{}", run)?;
            }
            k += run;
        }
        Ok(())
    }
}

/// Level of the sphere S^(2n+1)_q and whether the sphere relation is used as
/// a rewrite rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    pub n: usize,
    pub sphere_reduction: bool,
}

impl Presentation {
    pub fn new(n: usize) -> Self {
        assert!((1..=MAX_LEVEL).contains(&n), "level n must be in 1..={MAX_LEVEL}");
        Presentation { n, sphere_reduction: true }
    }

    pub fn without_sphere(n: usize) -> Self {
        Presentation { sphere_reduction: false, ..Self::new(n) }
    }
}

/// Finite linear combination of words with nonzero QScalar coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<NCWord, QScalar>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::scalar(QScalar::one())
    }

    pub fn scalar(c: QScalar) -> Self {
        Self::term(NCWord::empty(), c)
    }

    pub fn term(w: NCWord, c: QScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn word(w: NCWord) -> Self {
        Self::term(w, QScalar::one())
    }

    pub fn gen(g: Generator) -> Self {
        Self::word(NCWord(vec![g.code()]))
    }

    pub fn z(i: usize) -> Self {
        Self::gen(Generator::z(i))
    }

    pub fn zstar(i: usize) -> Self {
        Self::gen(Generator::zstar(i))
    }

    pub fn add_term(&mut self, w: NCWord, c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NCPoly, c: &QScalar) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            self.add_term(w.clone(), if c.is_one() { x.clone() } else { x * c });
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NCWord, &QScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &NCWord) -> QScalar {
        self.terms.get(w).cloned().unwrap_or_else(QScalar::zero)
    }

    /// Constant term if the polynomial is a scalar.
    pub fn as_scalar(&self) -> Option<QScalar> {
        match self.terms.len() {
            0 => Some(QScalar::zero()),
            1 => self.terms.get(&NCWord::empty()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &QScalar) -> NCPoly {
        let mut p = NCPoly::zero();
        p.add_scaled(self, c);
        p
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut p = self.clone();
        p.add_scaled(other, &QScalar::one());
        p
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        let mut p = self.clone();
        p.add_scaled(other, &QScalar::from_int(-1));
        p
    }

    /// Free (unreduced) product: concatenation of words.
    pub fn mul_free(&self, other: &NCPoly) -> NCPoly {
        let mut p = NCPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                p.add_term(w1.concat(w2), c1 * c2);
            }
        }
        p
    }

    /// Product in the sphere algebra, in normal form.
    pub fn mul(&self, other: &NCPoly, pres: Presentation) -> NCPoly {
        rewrite::mul_normal(&self.normalize(pres), &other.normalize(pres), pres)
    }

    /// Product of two polynomials already in normal form.
    pub fn mul_nf(&self, other: &NCPoly, pres: Presentation) -> NCPoly {
        rewrite::mul_normal(self, other, pres)
    }

    /// Antilinear antihomomorphism. Coefficients are real rational functions
    /// of q, so complex conjugation acts trivially on them.
    pub fn star(&self) -> NCPoly {
        let mut p = NCPoly::zero();
        for (w, c) in &self.terms {
            p.add_term(w.star(), c.clone());
        }
        p
    }

    pub fn normalize(&self, pres: Presentation) -> NCPoly {
        self.try_normalize(pres).expect("rewriting did not terminate")
    }

    pub fn try_normalize(&self, pres: Presentation) -> Result<NCPoly, NormalizeError> {
        rewrite::normalize(self, pres)
    }

    /// Whether every word is ordered and, with sphere reduction on, free of
    /// the eliminated z_n^* z_n pair.
    pub fn is_normal(&self, pres: Presentation) -> bool {
        self.terms.keys().all(|w| rewrite::is_normal_word(w, pres))
    }

    /// Send z_m, z_m^* with m > k to zero, then renormalize at level k.
    pub fn pullback(&self, k: usize) -> NCPoly {
        let mut p = NCPoly::zero();
        for (w, c) in &self.terms {
            if w.max_index().is_none_or(|m| m <= k) {
                p.add_term(w.clone(), c.clone());
            }
        }
        if k == 0 {
            // Level 0 sphere: z_0 unitary and commuting with its adjoint.
            return rewrite::normalize_level0(&p);
        }
        p.normalize(Presentation::new(k))
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.keys().filter_map(|w| w.max_index()).max()
    }
}

impl From<QScalar> for NCPoly {
    fn from(c: QScalar) -> Self {
        NCPoly::scalar(c)
    }
}

fn needs_parens(c: &QScalar) -> bool {
    !(c.is_monomial() && c.denom().is_one() || c.as_rational().is_some())
}

impl fmt::Display for NCPoly {
    /// Canonical text: terms like `2 q^-1 z0* z1^2` joined by ` + ` / ` - `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (w, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (neg, body) = if !needs_parens(c) && cs.starts_with('-') {
                (true, cs[1..].to_string())
            } else {
                (false, cs)
            };
            if idx > 0 {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            } else if neg {
                write!(f, "-")?;
            }
            let coef = if needs_parens(c) { format!("({})", body) } else { body };
            if w.is_empty() {
                write!(f, "{}", coef)?;
            } else if coef == "1" {
                write!(f, "{}", w)?;
            } else {
                write!(f, "{} {}", coef, w)?;
            }
        }
        Ok(())
    }
}

/// The defining relations of the sphere at level n as unreduced differences
/// LHS - RHS, each labelled for reports.
pub fn defining_relations(n: usize) -> Vec<(String, NCPoly)> {
    let q = QScalar::q_pow;
    let z = NCPoly::z;
    let zs = NCPoly::zstar;
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            if i < j {
                let r = z(i).mul_free(&z(j)).sub(&z(j).mul_free(&z(i)).scale(&q(-1)));
                out.push((format!("z{i} z{j} = q^-1 z{j} z{i}"), r));
            }
            if i != j {
                let r = zs(i).mul_free(&z(j)).sub(&z(j).mul_free(&zs(i)).scale(&q(1)));
                out.push((format!("z{i}* z{j} = q z{j} z{i}*"), r));
            }
        }
    }
    out.push((format!("[z{n}*, z{n}] = 0"), zs(n).mul_free(&z(n)).sub(&z(n).mul_free(&zs(n)))));
    for i in 0..n {
        let mut r = zs(i).mul_free(&z(i)).sub(&z(i).mul_free(&zs(i)));
        for j in i + 1..=n {
            r.add_scaled(&z(j).mul_free(&zs(j)), &(q(2) - QScalar::one()));
        }
        out.push((format!("[z{i}*, z{i}] = (1 - q^2) sum_j>{i} z_j z_j*"), r));
    }
    let mut sphere = NCPoly::scalar(QScalar::from_int(-1));
    for j in 0..=n {
        sphere = sphere.add(&z(j).mul_free(&zs(j)));
    }
    out.push(("sum z_j z_j* = 1".into(), sphere));
    out
}

#[cfg(test)]
mod tests;
