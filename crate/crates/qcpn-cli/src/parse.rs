//! Expression parser for sphere polynomials.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sum     := neg (('+' | '-') neg)*
//! neg     := '-' neg | product
//! product := power (('*' | '/' | <juxtaposition>) power)*
//! power   := atom ('^' exponent)?
//! atom    := integer | 'q' | 's' | 'z'digit['*'] | '(' sum ')'
//! ```
//!
//! `q` takes integer or half-integer exponents (`q^-1`, `q^1/2`), `s` is
//! q^(1/2) and takes integer exponents, everything else takes nonnegative
//! integer exponents. A `*` glued to a generator is the star; otherwise it
//! is a product. Division is only by nonzero scalars.

use qcpn::ncpoly::{NCPoly, Presentation, MAX_LEVEL};
use qcpn::qcoeff::QScalar;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {}: {msg}", .pos + 1)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }

    /// The input with a caret under the offending column.
    pub fn render(&self, text: &str) -> String {
        format!("{text}\n{}^ {}", " ".repeat(self.pos), self.msg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Q,
    S,
    Gen { index: usize, starred: bool },
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'0'..=b'9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let v = text[start..i]
                    .parse::<u64>()
                    .map_err(|_| ParseError::new(start, "integer literal too large"))?;
                out.push(Token { tok: Tok::Int(v), start, end: i });
                continue;
            }
            b'z' => {
                i += 1;
                if i >= b.len() || !b[i].is_ascii_digit() {
                    return Err(ParseError::new(start, "expected a digit after 'z'"));
                }
                let index = (b[i] - b'0') as usize;
                i += 1;
                if i < b.len() && b[i].is_ascii_digit() {
                    return Err(ParseError::new(start, "generator index must be a single digit z0..z9"));
                }
                let starred = i < b.len() && b[i] == b'*';
                if starred {
                    i += 1;
                }
                out.push(Token { tok: Tok::Gen { index, starred }, start, end: i });
                continue;
            }
            b'q' => Tok::Q,
            b's' => Tok::S,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::new(start, format!("unexpected character '{ch}'")));
            }
        };
        i += 1;
        out.push(Token { tok, start, end: i });
    }
    out.push(Token { tok: Tok::End, start: b.len(), end: b.len() });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::End {
            self.at += 1;
        }
        t
    }

    fn sum(&mut self) -> Result<NCPoly, ParseError> {
        let mut acc = self.neg()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.neg()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.neg()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn neg(&mut self) -> Result<NCPoly, ParseError> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(self.neg()?.scale(&QScalar::from_int(-1)));
        }
        self.product()
    }

    fn starts_atom(t: &Tok) -> bool {
        matches!(t, Tok::Int(_) | Tok::Q | Tok::S | Tok::Gen { .. } | Tok::LParen)
    }

    fn product(&mut self) -> Result<NCPoly, ParseError> {
        let mut acc = self.power()?;
        loop {
            let t = self.peek().clone();
            match t.tok {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul_free(&self.power()?);
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.peek().start;
                    let d = self.power()?;
                    let c = d
                        .as_scalar()
                        .filter(|c| !c.is_zero())
                        .ok_or_else(|| ParseError::new(at, "can only divide by a nonzero scalar"))?;
                    acc = acc.scale(&(&QScalar::one() / &c));
                }
                ref k if Self::starts_atom(k) => acc = acc.mul_free(&self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<NCPoly, ParseError> {
        let base_tok = self.peek().tok.clone();
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let caret = self.bump();
        match base_tok {
            Tok::Q => Ok(NCPoly::scalar(QScalar::s_pow(self.exponent(true, true, caret.end)?))),
            Tok::S => Ok(NCPoly::scalar(QScalar::s_pow(self.exponent(true, false, caret.end)?))),
            _ => {
                let e = self.exponent(false, false, caret.end)?;
                Ok((0..e).fold(NCPoly::one(), |a, _| a.mul_free(&base)))
            }
        }
    }

    /// Exponent after '^', returned in units of s for `q` (halves allowed) and
    /// as a plain count otherwise.
    fn exponent(&mut self, signed: bool, halves: bool, pos: usize) -> Result<i32, ParseError> {
        let mut sign = 1;
        if self.peek().tok == Tok::Minus {
            let m = self.bump();
            if !signed {
                return Err(ParseError::new(m.start, "negative exponent only allowed on q and s"));
            }
            sign = -1;
        }
        let t = self.bump();
        let Tok::Int(v) = t.tok else {
            return Err(ParseError::new(t.start.max(pos), "expected an integer exponent"));
        };
        let v = i32::try_from(v).map_err(|_| ParseError::new(t.start, "exponent too large"))?;
        // q^a/2 only when the slash and the 2 are glued to the exponent
        let glued = |a: &Token, b: &Token| a.end == b.start;
        let slash = self.toks[self.at].clone();
        if halves && slash.tok == Tok::Slash && glued(&t, &slash) {
            let d = self.toks[self.at + 1].clone();
            if glued(&slash, &d) {
                if let Tok::Int(den) = d.tok {
                    if den != 2 && den != 1 {
                        return Err(ParseError::new(d.start, "q exponents must be integers or halves"));
                    }
                    self.at += 2;
                    let s = if den == 2 { v } else { 2 * v };
                    return Ok(sign * s);
                }
            }
        }
        Ok(sign * if halves { 2 * v } else { v })
    }

    fn atom(&mut self) -> Result<NCPoly, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Int(v) => Ok(NCPoly::scalar(QScalar::from_int(
                i64::try_from(v).map_err(|_| ParseError::new(t.start, "integer literal too large"))?,
            ))),
            Tok::Q => Ok(NCPoly::scalar(QScalar::q_pow(1))),
            Tok::S => Ok(NCPoly::scalar(QScalar::s_pow(1))),
            Tok::Gen { index, starred } => {
                if index > self.n {
                    return Err(ParseError::new(
                        t.start,
                        format!("unknown generator z{index}: level {} has z0..z{}", self.n, self.n),
                    ));
                }
                Ok(if starred { NCPoly::zstar(index) } else { NCPoly::z(index) })
            }
            Tok::LParen => {
                let inner = self.sum()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(ParseError::new(close.start, format!("expected ')' to close '(' at column {}", t.start + 1)));
                }
                Ok(inner)
            }
            Tok::End => Err(ParseError::new(t.start, "unexpected end of input")),
            Tok::RParen => Err(ParseError::new(t.start, "unbalanced ')'")),
            _ => Err(ParseError::new(t.start, "expected a number, q, s, a generator or '('")),
        }
    }
}

/// Parse without normalizing; products are free.
pub fn parse_raw(text: &str, n: usize) -> Result<NCPoly, ParseError> {
    if !(1..=MAX_LEVEL).contains(&n) {
        return Err(ParseError::new(0, format!("level n must be in 1..={MAX_LEVEL}, got {n}")));
    }
    let mut p = Parser { toks: lex(text)?, at: 0, n };
    let out = p.sum()?;
    let rest = p.peek();
    if rest.tok != Tok::End {
        let msg = if rest.tok == Tok::RParen { "unbalanced ')'" } else { "unexpected token" };
        return Err(ParseError::new(rest.start, msg));
    }
    Ok(out)
}

/// Parse and bring into normal form at level n, with the sphere relation.
pub fn parse_expr(text: &str, n: usize) -> Result<NCPoly, ParseError> {
    let raw = parse_raw(text, n)?;
    raw.try_normalize(Presentation::new(n)).map_err(|e| ParseError::new(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert!(parse_expr("z0* z1 - q z1 z0*", 1).unwrap().is_zero());
        assert_eq!(parse_expr("1", 1).unwrap(), NCPoly::one());
        let lhs = parse_expr("q^-2 * (1 - z0* z0)", 1).unwrap();
        let rhs = NCPoly::zstar(1).mul(&NCPoly::z(1), Presentation::new(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn precedence() {
        // power binds tighter than juxtaposition, unary minus looser
        let a = parse_raw("-2 q^2 z0", 1).unwrap();
        let b = NCPoly::z(0).scale(&(&QScalar::from_int(-2) * &QScalar::q_pow(2)));
        assert_eq!(a, b);
        assert_eq!(parse_raw("q^1/2", 1).unwrap(), NCPoly::scalar(QScalar::s_pow(1)));
        assert_eq!(parse_raw("q^-3/2", 1).unwrap(), NCPoly::scalar(QScalar::s_pow(-3)));
        assert_eq!(parse_raw("3/2", 1).unwrap(), NCPoly::scalar(QScalar::from_ratio(3, 2)));
        assert_eq!(parse_raw("q^2 / 2", 1).unwrap(), NCPoly::scalar(&QScalar::q_pow(2) * &QScalar::from_ratio(1, 2)));
        assert_eq!(parse_raw("z0*^2", 1).unwrap(), NCPoly::zstar(0).mul_free(&NCPoly::zstar(0)));
        assert_eq!(parse_raw("z0*z1", 1).unwrap(), NCPoly::zstar(0).mul_free(&NCPoly::z(1)));
        assert_eq!(parse_raw("z0 * z1", 1).unwrap(), NCPoly::z(0).mul_free(&NCPoly::z(1)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_expr("z0 + z3", 2).unwrap_err();
        assert_eq!(e.pos, 5);
        assert!(e.msg.contains("unknown generator"));
        assert_eq!(parse_expr("(z0 + 1", 1).unwrap_err().pos, 7);
        assert_eq!(parse_expr("z0 ) ", 1).unwrap_err().pos, 3);
        assert_eq!(parse_expr("z0 # 1", 1).unwrap_err().pos, 3);
        assert_eq!(parse_expr("z0 / z1", 1).unwrap_err().pos, 5);
        assert_eq!(parse_expr("z0^-1", 1).unwrap_err().pos, 3);
        assert_eq!(parse_expr("q^1/3", 1).unwrap_err().pos, 4);
        assert_eq!(parse_expr("1 + ", 1).unwrap_err().pos, 4);
        assert!(parse_expr("z", 1).is_err());
        let shown = parse_expr("z0 + z3", 2).unwrap_err().render("z0 + z3");
        assert!(shown.ends_with("     ^ unknown generator z3: level 2 has z0..z2"));
    }
}
