//! Normal-form rewriting for the sphere algebra.
//!
//! Rules, for the order "starred by index, then unstarred by index":
//!
//! - z_j z_i -> q z_i z_j (j > i)
//! - z_j^* z_i^* -> q^-1 z_i^* z_j^* (j > i)
//! - z_j z_i^* -> q^-1 z_i^* z_j (i != j)
//! - z_i z_i^* -> z_i^* z_i - (1 - q^2) sum_{j>i} z_j z_j^* (i < n)
//! - z_n z_n^* -> z_n^* z_n
//! - with sphere reduction: z_n^* z_n -> q^-2n (1 - sum_{j<n} q^2j z_j^* z_j)
//!
//! Words are normalized one generator at a time: a normal monomial times a
//! generator is computed recursively and memoized per thread.

use super::{Generator, NCPoly, NCWord, Presentation};
use crate::qcoeff::QScalar;
use std::cell::RefCell;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("rewriting exceeded depth budget {0}")]
    Budget(usize),
    #[error("generator index {0} exceeds presentation level {1}")]
    IndexOutOfRange(usize, usize),
}

const DEPTH_BUDGET: usize = 4096;

type Key = (usize, bool, NCWord, u8);

thread_local! {
    static MEMO: RefCell<HashMap<Key, NCPoly>> = RefCell::new(HashMap::new());
    static DEPTH: RefCell<usize> = const { RefCell::new(0) };
}

/// Drop all memoized products on the current thread.
pub fn clear_cache() {
    MEMO.with(|m| m.borrow_mut().clear());
}

pub(super) fn is_normal_word(w: &NCWord, pres: Presentation) -> bool {
    w.is_ordered() && !(pres.sphere_reduction && has_top_pair(w, pres.n))
}

fn has_top_pair(w: &NCWord, n: usize) -> bool {
    let s = Generator::zstar(n).code();
    let u = Generator::z(n).code();
    w.0.contains(&s) && w.0.contains(&u)
}

pub(super) fn normalize(p: &NCPoly, pres: Presentation) -> Result<NCPoly, NormalizeError> {
    if let Some(m) = p.max_index() {
        if m > pres.n {
            return Err(NormalizeError::IndexOutOfRange(m, pres.n));
        }
    }
    let mut out = NCPoly::zero();
    for (w, c) in p.terms() {
        if is_normal_word(w, pres) {
            out.add_term(w.clone(), c.clone());
        } else {
            out.add_scaled(&nf_word(w, pres)?, c);
        }
    }
    Ok(out)
}

/// Product of two normal-form polynomials.
pub(super) fn mul_normal(a: &NCPoly, b: &NCPoly, pres: Presentation) -> NCPoly {
    let mut out = NCPoly::zero();
    for (wb, cb) in b.terms() {
        let mut acc = a.clone();
        for &g in &wb.0 {
            acc = mul_poly_gen(&acc, g, pres).expect("rewriting did not terminate");
        }
        out.add_scaled(&acc, cb);
    }
    out
}

fn nf_word(w: &NCWord, pres: Presentation) -> Result<NCPoly, NormalizeError> {
    let mut acc = NCPoly::one();
    for &g in &w.0 {
        acc = mul_poly_gen(&acc, g, pres)?;
    }
    Ok(acc)
}

fn mul_poly_gen(p: &NCPoly, g: u8, pres: Presentation) -> Result<NCPoly, NormalizeError> {
    let mut out = NCPoly::zero();
    for (w, c) in p.terms() {
        out.add_scaled(&mul_gen(w, g, pres)?, c);
    }
    Ok(out)
}

fn mul_word_poly(m: &NCWord, pair: &[u8], pres: Presentation) -> Result<NCPoly, NormalizeError> {
    let mut acc = NCPoly::word(m.clone());
    for &g in pair {
        acc = mul_poly_gen(&acc, g, pres)?;
    }
    Ok(acc)
}

struct DepthGuard;

impl DepthGuard {
    fn enter() -> Result<Self, NormalizeError> {
        DEPTH.with(|d| {
            let mut d = d.borrow_mut();
            if *d >= DEPTH_BUDGET {
                return Err(NormalizeError::Budget(DEPTH_BUDGET));
            }
            *d += 1;
            Ok(DepthGuard)
        })
    }
}

impl Drop for DepthGuard {
    fn drop(&mut self) {
        DEPTH.with(|d| *d.borrow_mut() -= 1);
    }
}

/// Normal form of `m * g` where `m` is a normal word.
fn mul_gen(m: &NCWord, g: u8, pres: Presentation) -> Result<NCPoly, NormalizeError> {
    let key = (pres.n, pres.sphere_reduction, m.clone(), g);
    if let Some(hit) = MEMO.with(|memo| memo.borrow().get(&key).cloned()) {
        return Ok(hit);
    }
    let _guard = DepthGuard::enter()?;
    let result = mul_gen_uncached(m, g, pres)?;
    MEMO.with(|memo| memo.borrow_mut().insert(key, result.clone()));
    Ok(result)
}

fn mul_gen_uncached(m: &NCWord, g: u8, pres: Presentation) -> Result<NCPoly, NormalizeError> {
    let n = pres.n;
    let Some(&x) = m.0.last() else {
        return Ok(NCPoly::word(NCWord(vec![g])));
    };
    if x <= g {
        let mut w = m.0.clone();
        w.push(g);
        let w = NCWord(w);
        if pres.sphere_reduction && has_top_pair(&w, n) {
            return sphere_reduce(&w, pres);
        }
        return Ok(NCPoly::word(w));
    }
    let prefix = NCWord(m.0[..m.0.len() - 1].to_vec());
    let gx = Generator::from_code(x);
    let gg = Generator::from_code(g);
    let mut out = NCPoly::zero();
    match (gx.starred, gg.starred) {
        (false, false) => {
            // z_j z_i -> q z_i z_j
            out.add_scaled(&mul_word_poly(&prefix, &[g, x], pres)?, &QScalar::q());
        }
        (true, true) => {
            // z_j^* z_i^* -> q^-1 z_i^* z_j^*
            out.add_scaled(&mul_word_poly(&prefix, &[g, x], pres)?, &QScalar::q_pow(-1));
        }
        (false, true) => {
            let (j, i) = (gx.index as usize, gg.index as usize);
            if i != j {
                out.add_scaled(&mul_word_poly(&prefix, &[g, x], pres)?, &QScalar::q_pow(-1));
            } else {
                out.add_scaled(&mul_word_poly(&prefix, &[g, x], pres)?, &QScalar::one());
                if i < n {
                    let c = QScalar::q_pow(2) - QScalar::one();
                    for k in i + 1..=n {
                        let pair = [Generator::z(k).code(), Generator::zstar(k).code()];
                        out.add_scaled(&mul_word_poly(&prefix, &pair, pres)?, &c);
                    }
                }
            }
        }
        (true, false) => unreachable!("starred codes precede unstarred codes"),
    }
    Ok(out)
}

/// Eliminate one z_n^* z_n pair from an ordered word containing both.
fn sphere_reduce(w: &NCWord, pres: Presentation) -> Result<NCPoly, NormalizeError> {
    let n = pres.n;
    let top_star = Generator::zstar(n).code();
    let top = Generator::z(n).code();
    // w = S z_n^* U with U = z_0^b0 .. z_n^bn; z_n^* passes z_j (j<n) with a factor q.
    let pos = w.0.iter().rposition(|&c| c == top_star).expect("has z_n^*");
    let mut rest: Vec<u8> = Vec::with_capacity(w.len());
    rest.extend_from_slice(&w.0[..pos]);
    let tail = &w.0[pos + 1..];
    let passed = tail.iter().filter(|&&c| c != top).count() as i32;
    let first_top = tail.iter().position(|&c| c == top).expect("has z_n");
    let mut tail_wo: Vec<u8> = tail.to_vec();
    tail_wo.remove(first_top);
    rest.extend_from_slice(&tail_wo);
    // w = q^passed * rest_without_top_factor * (z_n^* z_n)  (z_n^* z_n commutes with z_n)
    let base = NCWord(rest);
    let lead = QScalar::q_pow(passed - 2 * n as i32);
    let mut out = NCPoly::zero();
    out.add_scaled(&nf_word(&base, pres)?, &lead);
    for j in 0..n {
        let c = -QScalar::q_pow(passed - 2 * n as i32 + 2 * j as i32);
        let pair = [Generator::zstar(j).code(), Generator::z(j).code()];
        let mut acc = nf_word(&base, pres)?;
        for &g in &pair {
            acc = mul_poly_gen(&acc, g, pres)?;
        }
        out.add_scaled(&acc, &c);
    }
    Ok(out)
}

/// Level 0: z_0 is a unitary with z_0 z_0^* = z_0^* z_0 = 1.
pub(super) fn normalize_level0(p: &NCPoly) -> NCPoly {
    let mut out = NCPoly::zero();
    for (w, c) in p.terms() {
        let mut power: i64 = 0;
        for g in w.gens() {
            power += if g.starred { -1 } else { 1 };
        }
        let word = if power >= 0 {
            NCWord(vec![Generator::z(0).code(); power as usize])
        } else {
            NCWord(vec![Generator::zstar(0).code(); (-power) as usize])
        };
        out.add_term(word, c.clone());
    }
    out
}
