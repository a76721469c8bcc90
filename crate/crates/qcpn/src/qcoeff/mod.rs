//! Exact arithmetic in the rational function field Q(s), where s = q^(1/2).
//!
//! Every q-number of the workbench lives in [`QScalar`]. Half-integer powers of q
//! are ordinary integer powers of s, so q-integers with half-integer argument
//! stay inside the field.

mod laurent;

pub use laurent::Laurent;

use laurent::poly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QError {
    #[error("negative argument {0} where a nonnegative integer is required")]
    NegativeArgument(i64),
    #[error("denominator vanishes at q0 = {0}")]
    Pole(f64),
    #[error("pole at q = 1")]
    PoleAtOne,
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation point q0 = {0} outside (0, 1]")]
    InvalidPoint(f64),
    #[error("inexact division in q-multinomial (arithmetic bug)")]
    InexactDivision,
}

/// Evaluation point for the numeric backends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QPoint {
    q0: f64,
}

impl QPoint {
    pub fn new(q0: f64) -> Result<Self, QError> {
        if q0.is_finite() && q0 > 0.0 && q0 <= 1.0 {
            Ok(QPoint { q0 })
        } else {
            Err(QError::InvalidPoint(q0))
        }
    }

    pub fn q(&self) -> f64 {
        self.q0
    }

    pub fn s(&self) -> f64 {
        self.q0.sqrt()
    }

    /// Numeric q-integer [x] for x given as `two_x / 2`.
    pub fn qint_half(&self, two_x: i64) -> f64 {
        if self.q0 == 1.0 {
            return two_x as f64 / 2.0;
        }
        let x = two_x as f64 / 2.0;
        (self.q0.powf(x) - self.q0.powf(-x)) / (self.q0 - 1.0 / self.q0)
    }

    pub fn qint(&self, x: i64) -> f64 {
        self.qint_half(2 * x)
    }

    pub fn qpow(&self, e: f64) -> f64 {
        self.q0.powf(e)
    }
}

/// Element of Q(s) in canonical form.
///
/// `num / den` with gcd(num, den) = 1 in Z[s], joint integer content 1, the
/// lowest exponent of `den` equal to 0 and its leading coefficient positive.
/// Structural equality is therefore mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QScalar {
    num: Laurent,
    den: Laurent,
}

impl QScalar {
    pub fn zero() -> Self {
        QScalar { num: Laurent::zero(), den: Laurent::one() }
    }

    pub fn one() -> Self {
        QScalar { num: Laurent::one(), den: Laurent::one() }
    }

    pub fn from_int(c: i64) -> Self {
        QScalar { num: Laurent::monomial(BigInt::from(c), 0), den: Laurent::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::from_parts(
            Laurent::monomial(r.numer().clone(), 0),
            Laurent::monomial(r.denom().clone(), 0),
        )
    }

    pub fn from_ratio(p: i64, d: i64) -> Self {
        Self::from_rational(&BigRational::new(p.into(), d.into()))
    }

    /// s^k = q^(k/2).
    pub fn s_pow(k: i32) -> Self {
        QScalar { num: Laurent::monomial(BigInt::one(), k), den: Laurent::one() }
    }

    /// q^k.
    pub fn q_pow(k: i32) -> Self {
        Self::s_pow(2 * k)
    }

    pub fn q() -> Self {
        Self::s_pow(2)
    }

    /// Laurent polynomial in s with integer coefficients.
    pub fn from_laurent(p: Laurent) -> Self {
        QScalar { num: p, den: Laurent::one() }
    }

    /// Build `num / den` and bring it to canonical form.
    ///
    /// Panics when `den` is zero.
    pub fn from_parts(num: Laurent, den: Laurent) -> Self {
        assert!(!den.is_zero(), "QScalar with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let shift = num.low() - den.low();
        let (mut n, mut d) = if den.is_monomial() {
            (num.coeffs().to_vec(), den.coeffs().to_vec())
        } else {
            let g = poly::gcd(num.coeffs(), den.coeffs());
            if g.len() > 1 {
                (
                    poly::div_exact(num.coeffs(), &g).expect("gcd divides numerator"),
                    poly::div_exact(den.coeffs(), &g).expect("gcd divides denominator"),
                )
            } else {
                (num.coeffs().to_vec(), den.coeffs().to_vec())
            }
        };
        let c = num_integer::Integer::gcd(&poly::content(&n), &poly::content(&d));
        let c = if d.last().is_some_and(|x| x.is_negative()) { -c } else { c };
        if !c.is_one() {
            for x in n.iter_mut() {
                *x = &*x / &c;
            }
            for x in d.iter_mut() {
                *x = &*x / &c;
            }
        }
        QScalar { num: Laurent::from_parts(shift, n), den: Laurent::from_parts(0, d) }
    }

    pub fn numer(&self) -> &Laurent {
        &self.num
    }

    pub fn denom(&self) -> &Laurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial with integer coefficients.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// True when the value is `c * s^k` for a rational c.
    pub fn is_monomial(&self) -> bool {
        self.num.is_monomial() && self.den.is_monomial()
    }

    pub fn inv(&self) -> Result<Self, QError> {
        if self.is_zero() {
            return Err(QError::DivisionByZero);
        }
        Ok(Self::from_parts(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, QError> {
        if other.is_zero() {
            return Err(QError::DivisionByZero);
        }
        Ok(Self::from_parts(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Multiply by s^k without any gcd work.
    pub fn shift_s(&self, k: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        QScalar { num: self.num.shift(k), den: self.den.clone() }
    }

    /// Substitute q -> 1/q (that is s -> 1/s).
    pub fn invert_q(&self) -> Self {
        Self::from_parts(self.num.invert_var(), self.den.invert_var())
    }

    pub fn eval(&self, p: QPoint) -> Result<f64, QError> {
        let (s, q) = (p.s(), p.q());
        let d = self.den.eval_sq(s, q);
        if d == 0.0 || !d.is_finite() {
            return Err(QError::Pole(p.q()));
        }
        Ok(self.num.eval_sq(s, q) / d)
    }

    /// Evaluate at q0, panicking on a pole. For values known to be regular.
    pub fn at(&self, q0: f64) -> f64 {
        let p = QPoint::new(q0).expect("valid evaluation point");
        self.eval(p).expect("no pole at evaluation point")
    }

    /// Exact value at q = 1.
    ///
    /// The canonical form already has coprime numerator and denominator, so a
    /// common (s - 1) factor has been cancelled; a zero of the denominator at
    /// s = 1 is then a genuine pole.
    pub fn limit_q1(&self) -> Result<BigRational, QError> {
        let d = self.den.eval_one();
        if d.is_zero() {
            return Err(QError::PoleAtOne);
        }
        Ok(BigRational::new(self.num.eval_one(), d))
    }

    /// Constant value if the scalar does not depend on s.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.num.is_monomial() && self.num.low() == 0 && self.den.is_monomial() {
            Some(BigRational::new(self.num.coeffs()[0].clone(), self.den.coeffs()[0].clone()))
        } else {
            None
        }
    }

    fn uses_odd_powers(&self) -> bool {
        !(self.num.even_exponents_only() && self.den.even_exponents_only())
    }
}

impl Default for QScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for QScalar {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl<'a> Add<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn add(self, o: &QScalar) -> QScalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return QScalar { num: self.num.add(&o.num), den: Laurent::one() };
            }
            return QScalar::from_parts(self.num.add(&o.num), self.den.clone());
        }
        QScalar::from_parts(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
}

impl<'a> Sub<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn sub(self, o: &QScalar) -> QScalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn mul(self, o: &QScalar) -> QScalar {
        if self.is_zero() || o.is_zero() {
            return QScalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return QScalar { num: self.num.mul(&o.num), den: Laurent::one() };
        }
        QScalar::from_parts(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl<'a> Div<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn div(self, o: &QScalar) -> QScalar {
        self.checked_div(o).expect("QScalar division by zero")
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, o: QScalar) -> QScalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, o: &QScalar) -> QScalar {
                (&self).$m(o)
            }
        }
        impl $tr<QScalar> for &QScalar {
            type Output = QScalar;
            fn $m(self, o: QScalar) -> QScalar {
                self.$m(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, o: &QScalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&QScalar> for QScalar {
    fn sub_assign(&mut self, o: &QScalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&QScalar> for QScalar {
    fn mul_assign(&mut self, o: &QScalar) {
        *self = &*self * o;
    }
}

impl std::iter::Sum for QScalar {
    fn sum<I: Iterator<Item = QScalar>>(it: I) -> QScalar {
        it.fold(QScalar::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for QScalar {
    fn product<I: Iterator<Item = QScalar>>(it: I) -> QScalar {
        it.fold(QScalar::one(), |a, b| a * b)
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, e: i32, in_s: bool) -> fmt::Result {
    if in_s {
        match e {
            0 => Ok(()),
            1 => write!(f, "s"),
            _ => write!(f, "s^{}", e),
        }
    } else {
        match e / 2 {
            0 => Ok(()),
            1 => write!(f, "q"),
            k => write!(f, "q^{}", k),
        }
    }
}

/// Write `sum c_e var^e / scale` in descending exponent order.
fn fmt_laurent(f: &mut fmt::Formatter<'_>, p: &Laurent, scale: &BigInt, in_s: bool) -> fmt::Result {
    let terms: Vec<(i32, &BigInt)> = p.terms().collect();
    for (idx, (e, c)) in terms.iter().rev().enumerate() {
        let r = BigRational::new((*c).clone(), scale.clone());
        let neg = r.is_negative();
        let a = r.abs();
        if idx == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        let unit = a.is_one();
        if !unit || *e == 0 {
            write!(f, "{}", a)?;
        }
        if *e != 0 {
            if !unit {
                write!(f, " ")?;
            }
            fmt_power(f, *e, in_s)?;
        }
    }
    Ok(())
}

impl fmt::Display for QScalar {
    /// Laurent polynomial in q when only even powers of s occur, otherwise in s.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let in_s = self.uses_odd_powers();
        if self.den.is_monomial() {
            return fmt_laurent(f, &self.num, &self.den.coeffs()[0], in_s);
        }
        let one = BigInt::one();
        write!(f, "(")?;
        fmt_laurent(f, &self.num, &one, in_s)?;
        write!(f, ") / (")?;
        fmt_laurent(f, &self.den, &one, in_s)?;
        write!(f, ")")
    }
}

/// q-integer [x] for x = two_x / 2, i.e. (q^x - q^-x) / (q - q^-1).
pub fn qint_half(two_x: i64) -> QScalar {
    if two_x % 2 == 0 {
        return qint(two_x / 2);
    }
    let t = two_x as i32;
    let num = Laurent::monomial(BigInt::one(), t).sub(&Laurent::monomial(BigInt::one(), -t));
    let den = Laurent::monomial(BigInt::one(), 2).sub(&Laurent::monomial(BigInt::one(), -2));
    QScalar::from_parts(num, den)
}

/// q-integer [x] = q^(x-1) + q^(x-3) + ... + q^(1-x) for integer x.
pub fn qint(x: i64) -> QScalar {
    if x == 0 {
        return QScalar::zero();
    }
    let a = x.unsigned_abs() as i32;
    // exponents in s: 2(a-1), 2(a-3), ..., -2(a-1)
    let low = -2 * (a - 1);
    let mut coeffs = vec![BigInt::zero(); (4 * (a - 1) + 1) as usize];
    let sign = if x < 0 { -1 } else { 1 };
    for k in 0..a {
        coeffs[(4 * k) as usize] = BigInt::from(sign);
    }
    QScalar::from_laurent(Laurent::from_parts(low, coeffs))
}

pub fn qfactorial(n: i64) -> Result<QScalar, QError> {
    if n < 0 {
        return Err(QError::NegativeArgument(n));
    }
    Ok((1..=n).map(qint).product())
}

/// [sum j]! / prod [j_i]!.
pub fn qmultinomial(j: &[i64]) -> Result<QScalar, QError> {
    if let Some(&bad) = j.iter().find(|&&x| x < 0) {
        return Err(QError::NegativeArgument(bad));
    }
    // Build as a product of q-binomials [a+b; b], each computed by exact division.
    let mut acc = QScalar::one();
    let mut total = 0i64;
    for &ji in j {
        let top = qfactorial(total + ji)?;
        let bottom = &qfactorial(total)? * &qfactorial(ji)?;
        let q = poly::div_exact(top.num.shift(-top.num.low()).coeffs(), bottom.num.shift(-bottom.num.low()).coeffs())
            .ok_or(QError::InexactDivision)?;
        let binom = QScalar::from_laurent(Laurent::from_parts(top.num.low() - bottom.num.low(), q));
        acc = &acc * &binom;
        total += ji;
    }
    Ok(acc)
}

/// Classical multinomial coefficient, used as the q = 1 reference.
pub fn multinomial(j: &[u64]) -> BigInt {
    let mut acc = BigInt::one();
    let mut total = 0u64;
    for &ji in j {
        for t in 1..=ji {
            acc = acc * BigInt::from(total + t) / BigInt::from(t);
        }
        total += ji;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(low: i32, c: &[i64]) -> QScalar {
        QScalar::from_laurent(Laurent::from_parts(low, c.iter().map(|&x| BigInt::from(x)).collect()))
    }

    #[test]
    fn qint_small_values() {
        assert!(qint(0).is_zero());
        assert_eq!(qint(2), lp(-2, &[1, 0, 0, 0, 1]));
        assert_eq!(qint(3), lp(-4, &[1, 0, 0, 0, 1, 0, 0, 0, 1]));
        assert_eq!(qint(-3), -qint(3));
    }

    #[test]
    fn qint_half_matches_quotient() {
        let x = qint_half(3);
        let s = QScalar::s_pow;
        let expect = (s(3) - s(-3)) / (s(2) - s(-2));
        assert_eq!(x, expect);
        assert_eq!(qint_half(6), qint(3));
        assert_eq!(qint_half(-1), -qint_half(1));
    }

    #[test]
    fn factorials_and_multinomials() {
        assert!(qfactorial(0).unwrap().is_one());
        assert!(qfactorial(1).unwrap().is_one());
        assert_eq!(qfactorial(3).unwrap(), qint(3) * qint(2));
        assert!(qfactorial(-1).is_err());
        assert_eq!(qmultinomial(&[1, 1]).unwrap(), qint(2));
        assert!(qmultinomial(&[4, 0, 0]).unwrap().is_one());
        assert_eq!(qmultinomial(&[2, 1]).unwrap(), qint(3));
        assert!(qmultinomial(&[2, -1]).is_err());
    }

    #[test]
    fn evaluation() {
        let p = QPoint::new(0.5).unwrap();
        assert!((qint(2).eval(p).unwrap() - 2.5).abs() < 1e-15);
        assert!((qint(3).eval(p).unwrap() - 5.25).abs() < 1e-15);
        assert_eq!(QScalar::one().eval(p).unwrap(), 1.0);
        assert!(QPoint::new(0.0).is_err());
        assert!(QPoint::new(1.5).is_err());
    }

    #[test]
    fn limits_at_one() {
        assert_eq!(qint(7).limit_q1().unwrap(), BigRational::from_integer(7.into()));
        assert_eq!(
            qmultinomial(&[2, 2]).unwrap().limit_q1().unwrap(),
            BigRational::from_integer(6.into())
        );
        let d = QScalar::q() - QScalar::q_pow(-1);
        assert!((&d / &d).limit_q1().unwrap().is_one());
        assert_eq!(qint_half(1).limit_q1().unwrap(), BigRational::new(1.into(), 2.into()));
        let pole = QScalar::one() / (QScalar::q() - QScalar::one());
        assert_eq!(pole.limit_q1(), Err(QError::PoleAtOne));
    }

    #[test]
    fn canonical_form_is_structural() {
        let a = (QScalar::q() - QScalar::one()) / (QScalar::q_pow(2) - QScalar::one());
        let b = QScalar::one() / (QScalar::q() + QScalar::one());
        assert_eq!(a, b);
        let c = QScalar::from_int(2) / QScalar::from_int(-4);
        assert_eq!(c, QScalar::from_ratio(-1, 2));
    }

    #[test]
    fn display_forms() {
        assert_eq!(qint(3).to_string(), "q^2 + 1 + q^-2");
        assert_eq!(QScalar::s_pow(3).to_string(), "s^3");
        assert_eq!((QScalar::from_ratio(1, 2) * QScalar::q()).to_string(), "1/2 q");
        assert_eq!(QScalar::from_int(-2).to_string(), "-2");
    }
}
