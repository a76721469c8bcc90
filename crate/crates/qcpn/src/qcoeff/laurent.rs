//! Integer Laurent polynomials in one variable `s`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense Laurent polynomial `sum_k coeffs[k] * s^(low + k)`.
///
/// Always trimmed: the first and last stored coefficients are nonzero, and the
/// zero polynomial has no coefficients and `low == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Laurent {
    low: i32,
    coeffs: Vec<BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn monomial(c: BigInt, exp: i32) -> Self {
        Self::from_parts(exp, vec![c])
    }

    pub fn from_parts(low: i32, coeffs: Vec<BigInt>) -> Self {
        let mut p = Laurent { low, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True when the polynomial is `c * s^e` for a single term.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    /// Highest exponent; undefined (returns `low`) on zero.
    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len().saturating_sub(1) as i32
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i32, c))
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn shift(&self, by: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Laurent { low: self.low + by, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn neg(&self) -> Self {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.high().max(other.high());
        let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.low - low) as usize + k] += c;
        }
        Self::from_parts(low, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_parts(self.low + other.low, coeffs)
    }

    /// gcd of all coefficients (nonnegative); zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide every coefficient by `c`, which must divide all of them.
    pub fn div_exact_int(&self, c: &BigInt) -> Self {
        Laurent {
            low: self.low,
            coeffs: self
                .coeffs
                .iter()
                .map(|x| {
                    debug_assert!((x % c).is_zero());
                    x / c
                })
                .collect(),
        }
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * s + big_to_f64(c);
        }
        acc * s.powi(self.low)
    }

    /// Evaluate given both `s` and `q = s^2`; even polynomials use `q` directly
    /// so that rational q0 values stay exact in binary where possible.
    pub fn eval_sq(&self, s: f64, q: f64) -> f64 {
        if !self.even_exponents_only() {
            return self.eval_f64(s);
        }
        let mut acc = 0.0;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if k % 2 == 0 {
                acc = acc * q + big_to_f64(c);
            }
        }
        acc * q.powi(self.low / 2)
    }

    /// Value at `s = 1`, i.e. the sum of the coefficients.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Value at `s = -1`.
    pub fn eval_minus_one(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in self.terms() {
            if e.rem_euclid(2) == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        acc
    }

    /// Substitute `s -> 1/s`.
    pub fn invert_var(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Laurent { low: -self.high(), coeffs }
    }

    /// True if every exponent with nonzero coefficient is even.
    pub fn even_exponents_only(&self) -> bool {
        self.terms().all(|(e, _)| e.rem_euclid(2) == 0)
    }
}

pub(crate) fn big_to_f64(c: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(if c.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Ordinary polynomials (exponent 0 upward) used for gcd computations.
pub(crate) mod poly {
    use super::*;

    pub fn trim(p: &mut Vec<BigInt>) {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }

    pub fn content(p: &[BigInt]) -> BigInt {
        let mut g = BigInt::zero();
        for c in p {
            g = g.gcd(c);
        }
        g
    }

    pub fn primitive(p: &[BigInt]) -> Vec<BigInt> {
        let g = content(p);
        if g.is_zero() || g.is_one() {
            return p.to_vec();
        }
        p.iter().map(|c| c / &g).collect()
    }

    /// Pseudo-remainder of `a` by `b` (b nonzero).
    pub fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lb = &b[db];
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= lb;
            }
            let off = dr - db;
            for (k, bc) in b.iter().enumerate() {
                r[off + k] -= &lr * bc;
            }
            trim(&mut r);
        }
        r
    }

    /// Primitive gcd over Z[s], normalized to positive leading coefficient.
    pub fn gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut x = primitive(a);
        let mut y = primitive(b);
        trim(&mut x);
        trim(&mut y);
        if x.len() < y.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_empty() {
            let r = prem(&x, &y);
            x = y;
            y = primitive(&r);
        }
        if x.last().is_some_and(|c| c.is_negative()) {
            for c in x.iter_mut() {
                *c = -&*c;
            }
        }
        x
    }

    /// Exact quotient `a / b`; returns None when `b` does not divide `a` over Z.
    pub fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut r = a.to_vec();
        trim(&mut r);
        if r.is_empty() {
            return Some(Vec::new());
        }
        let db = b.len() - 1;
        if r.len() < b.len() {
            return None;
        }
        let mut q = vec![BigInt::zero(); r.len() - db];
        let lb = &b[db];
        while r.len() > db {
            let dr = r.len() - 1;
            let (qc, rem) = r[dr].div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            let off = dr - db;
            for (k, bc) in b.iter().enumerate() {
                r[off + k] -= &qc * bc;
            }
            q[off] = qc;
            trim(&mut r);
            if r.is_empty() {
                break;
            }
        }
        if r.is_empty() {
            Some(q)
        } else {
            None
        }
    }
}
