//! Text grammar for polynomials:
//!
//! ```text
//! poly   := ["-"|"+"] term (("+"|"-") term)*
//! term   := factor ("*"? factor)*
//! factor := int | "a" ("^" int)? | ("X"|"x") digit ("^" int)?
//! ```
//!
//! Factors may be juxtaposed, so `2X0X1^2` is read as `2*X0*X1^2`.
//!
//! `a` is the field's fixed generator unless the caller supplies another
//! element. Integers are reduced modulo p.

use super::field::{Elem, Gf};
use super::poly::{Monomial, Poly};
use crate::error::{Error, Result};

pub fn parse_poly(text: &str, field: &Gf) -> Result<Poly> {
    parse_poly_with(text, field, field.generator())
}

/// Parses with `a` bound to `gen`.
pub fn parse_poly_with(text: &str, field: &Gf, gen: Elem) -> Result<Poly> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, field, gen };
    p.poly()
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    field: &'a Gf,
    gen: Elem,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    /// Unsigned integer reduced mod `m` (also returns whether it fit in u64).
    fn int(&mut self) -> Result<(u64, Option<u64>)> {
        self.skip_ws();
        let start = self.pos;
        let m = self.field.characteristic() as u64;
        let mut red = 0u64;
        let mut exact: Option<u64> = Some(0);
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            let d = (self.s[self.pos] - b'0') as u64;
            red = (red * 10 + d) % m;
            exact = exact.and_then(|v| v.checked_mul(10)).and_then(|v| v.checked_add(d));
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer"));
        }
        Ok((red, exact))
    }

    fn exponent(&mut self) -> Result<u64> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let (_, exact) = self.int()?;
            exact.ok_or(Error::Syntax { pos: at, msg: "exponent too large".into() })
        } else {
            Ok(1)
        }
    }

    fn poly(&mut self) -> Result<Poly> {
        let f = self.field;
        let mut out = Poly::zero(f);
        let mut degree: Option<u32> = None;
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            None => return Err(self.err("empty polynomial")),
            _ => false,
        };
        loop {
            let (c, m) = self.term()?;
            let d = m.degree();
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => return Err(Error::NotHomogeneous(d0, d)),
                _ => {}
            }
            out.add_term(m, if negate { f.neg(c) } else { c });
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                Some(ch) => return Err(self.err(format!("unexpected `{}`", ch as char))),
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Elem, Monomial)> {
        let mut coef = Elem::ONE;
        let mut mono = Monomial::default();
        let mut any = false;
        loop {
            match self.peek() {
                Some(b'*') if any => {
                    self.pos += 1;
                    if !self.factor(&mut coef, &mut mono)? {
                        return Err(self.err("expected factor after `*`"));
                    }
                }
                _ => {
                    if !self.factor(&mut coef, &mut mono)? {
                        if any {
                            break;
                        }
                        return Err(self.err("expected term"));
                    }
                    any = true;
                }
            }
        }
        Ok((coef, mono))
    }

    /// Parses one factor into the accumulators; `false` if none starts here.
    fn factor(&mut self, coef: &mut Elem, mono: &mut Monomial) -> Result<bool> {
        let f = self.field;
        let Some(ch) = self.peek() else { return Ok(false) };
        if ch.is_ascii_digit() {
            let (v, _) = self.int()?;
            *coef = f.mul(*coef, f.from_int(v as i64));
            return Ok(true);
        }
        if ch == b'X' || ch == b'x' {
            let start = self.pos;
            self.pos += 1;
            let idx_start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == idx_start {
                self.pos = start;
                return Err(self.bad_ident());
            }
            let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("?").to_string();
            let idx = std::str::from_utf8(&self.s[idx_start..self.pos]).ok().and_then(|t| t.parse::<usize>().ok());
            let i = match idx {
                Some(i) if i < 4 => i,
                _ => return Err(Error::UnknownVariable(name)),
            };
            let e = self.exponent()?;
            let total = mono.0[i] as u64 + e;
            if total > u16::MAX as u64 {
                return Err(self.err("exponent too large"));
            }
            mono.0[i] = total as u16;
            return Ok(true);
        }
        if ch == b'a' {
            let next = self.s.get(self.pos + 1).copied();
            if next.is_some_and(|c| c.is_ascii_alphanumeric()) {
                return Err(self.bad_ident());
            }
            self.pos += 1;
            let e = self.exponent()?;
            *coef = f.mul(*coef, f.pow(self.gen, e));
            return Ok(true);
        }
        if ch.is_ascii_alphabetic() {
            return Err(self.bad_ident());
        }
        Ok(false)
    }

    fn bad_ident(&mut self) -> Error {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = String::from_utf8_lossy(&self.s[start..self.pos]).into_owned();
        if name.starts_with('a') {
            Error::BadFieldLiteral(name)
        } else {
            Error::UnknownVariable(name)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::make_field;

    #[test]
    fn unary_minus_and_reduction() {
        let f = make_field(5, 1).unwrap();
        let p = parse_poly("-X0^2*X3 + 3*X2^3", &f).unwrap();
        assert_eq!(p.coeff(&Monomial([2, 0, 0, 1])), Elem(4));
        assert_eq!(p.coeff(&Monomial([0, 0, 3, 0])), Elem(3));
        let q = parse_poly("7 X0 x1", &f).unwrap();
        assert_eq!(q.coeff(&Monomial([1, 1, 0, 0])), Elem(2));
        let r = parse_poly("2X0X1^2 - X2X3^2", &f).unwrap();
        assert_eq!(r.coeff(&Monomial([1, 2, 0, 0])), Elem(2));
        assert_eq!(r.coeff(&Monomial([0, 0, 1, 2])), Elem(4));
    }

    #[test]
    fn errors() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(parse_poly("X0 + X1^2", &f), Err(Error::NotHomogeneous(1, 2)));
        assert_eq!(parse_poly("X4", &f), Err(Error::UnknownVariable("X4".into())));
        assert_eq!(parse_poly("y0", &f), Err(Error::UnknownVariable("y0".into())));
        assert!(matches!(parse_poly("X0 +", &f), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_poly("X0 ) X1", &f), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("ab*X0", &f), Err(Error::BadFieldLiteral(_))));
        assert!(matches!(parse_poly("", &f), Err(Error::Syntax { .. })));
    }

    #[test]
    fn generator_powers() {
        let f = make_field(2, 2).unwrap();
        let p = parse_poly("a*X0 + a^2*X1", &f).unwrap();
        let g = f.generator();
        assert_eq!(p.coeff(&Monomial([1, 0, 0, 0])), g);
        assert_eq!(p.coeff(&Monomial([0, 1, 0, 0])), f.mul(g, g));
        assert_eq!(parse_poly(&p.to_string(), &f).unwrap(), p);
    }

    #[test]
    fn constant_only() {
        let f = make_field(3, 1).unwrap();
        let p = parse_poly("2", &f).unwrap();
        assert_eq!(p.degree(), Some(0));
    }
}
