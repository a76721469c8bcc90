//! Left action of U_q(su(n+1)) on the sphere algebra.
//!
//! On primed coordinates z'_j = z_{n+1-j}, j = 1..n+1:
//! E_i z'_j = d(i,j) z'_{j+1}, F_i z'_j = d(i,j+1) z'_i,
//! K_i z'_j = q^((d(i+1,j) - d(i,j))/2) z'_j.
//! Starred letters use x > a^* = (S(x)^* > a)^* with K^* = K, E^* = F,
//! S(K) = K^-1, S(E) = -q E, S(F) = -q^-1 F. Words use the coproducts
//! Delta(K) = K (x) K and Delta(E) = E (x) K + K^-1 (x) E (same for F).

use super::{Generator, NCPoly, NCWord, Presentation};
use crate::qcoeff::QScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UqGen {
    E(usize),
    F(usize),
    K(usize),
    KInv(usize),
    /// K_2rho = (prod_j K_j^(j(n-j+1)))^2, implementing the square of the antipode.
    K2Rho,
    /// Inverse of K_2rho.
    K2RhoInv,
}

impl UqGen {
    pub fn name(&self) -> String {
        match self {
            UqGen::E(i) => format!("E{}", i),
            UqGen::F(i) => format!("F{}", i),
            UqGen::K(i) => format!("K{}", i),
            UqGen::KInv(i) => format!("K{}^-1", i),
            UqGen::K2Rho => "K2rho".into(),
            UqGen::K2RhoInv => "K2rho^-1".into(),
        }
    }

    /// The generators E_i, F_i, K_i, K_i^-1 for 1 <= i <= n.
    pub fn all(n: usize) -> Vec<UqGen> {
        let mut v = Vec::new();
        for i in 1..=n {
            v.extend([UqGen::E(i), UqGen::F(i), UqGen::K(i), UqGen::KInv(i)]);
        }
        v
    }
}

/// Exponent of s by which K_i scales the unstarred letter z_k.
fn k_weight(i: usize, k: usize, n: usize) -> i32 {
    let j = n + 1 - k;
    (j == i + 1) as i32 - (j == i) as i32
}

/// s-exponent of a group-like element on a single letter.
fn char_weight(x: UqGen, g: Generator, n: usize) -> i32 {
    let k = g.index as usize;
    let w = match x {
        UqGen::K(i) => k_weight(i, k, n),
        UqGen::KInv(i) => -k_weight(i, k, n),
        UqGen::K2Rho | UqGen::K2RhoInv => {
            let mut t = 0;
            for j in 1..=n {
                t += 2 * (j * (n - j + 1)) as i32 * k_weight(j, k, n);
            }
            if x == UqGen::K2RhoInv {
                -t
            } else {
                t
            }
        }
        _ => unreachable!("not group-like"),
    };
    if g.starred {
        -w
    } else {
        w
    }
}

fn word_weight(x: UqGen, w: &[u8], n: usize) -> i32 {
    w.iter().map(|&c| char_weight(x, Generator::from_code(c), n)).sum()
}

/// E_i or F_i on one letter: coefficient and resulting letter.
fn raise_lower(x: UqGen, g: Generator, n: usize) -> Option<(QScalar, Generator)> {
    let k = g.index as usize;
    let j = n + 1 - k;
    // unstarred action
    let on_z = |y: UqGen| -> Option<usize> {
        match y {
            UqGen::E(i) if j == i => Some(n + 1 - (j + 1)),
            UqGen::F(i) if j == i + 1 => Some(n + 1 - i),
            _ => None,
        }
    };
    if !g.starred {
        return on_z(x).map(|t| (QScalar::one(), Generator::z(t)));
    }
    // x > z^* = (S(x)^* > z)^*
    let (y, c) = match x {
        UqGen::E(i) => (UqGen::F(i), -QScalar::q()),
        UqGen::F(i) => (UqGen::E(i), -QScalar::q_pow(-1)),
        _ => unreachable!(),
    };
    on_z(y).map(|t| (c, Generator::zstar(t)))
}

fn check_range(x: UqGen, n: usize) {
    if let UqGen::E(i) | UqGen::F(i) | UqGen::K(i) | UqGen::KInv(i) = x {
        assert!((1..=n).contains(&i), "U_q generator index {i} outside 1..={n}");
    }
}

/// Action on a word, not normalized.
fn act_word(x: UqGen, w: &NCWord, n: usize) -> NCPoly {
    match x {
        UqGen::K(_) | UqGen::KInv(_) | UqGen::K2Rho | UqGen::K2RhoInv => {
            NCPoly::term(w.clone(), QScalar::s_pow(word_weight(x, &w.0, n)))
        }
        UqGen::E(i) | UqGen::F(i) => {
            let mut out = NCPoly::zero();
            for p in 0..w.0.len() {
                let g = Generator::from_code(w.0[p]);
                if let Some((c, h)) = raise_lower(x, g, n) {
                    let left = -word_weight(UqGen::K(i), &w.0[..p], n);
                    let right = word_weight(UqGen::K(i), &w.0[p + 1..], n);
                    let mut v = w.0.clone();
                    v[p] = h.code();
                    out.add_term(NCWord(v), c.shift_s(left + right));
                }
            }
            out
        }
    }
}

/// x > a, normalized in the presentation.
pub fn uq_act(x: UqGen, a: &NCPoly, pres: Presentation) -> NCPoly {
    check_range(x, pres.n);
    let mut out = NCPoly::zero();
    for (w, c) in a.terms() {
        out.add_scaled(&act_word(x, w, pres.n), c);
    }
    out.normalize(pres)
}
