//! Job files: a field, one surface, named curves and assertions about them.
//!
//! ```text
//! # comment
//! field p=5 e=1
//! modulus 2 1 1            # optional, coefficients low to high, monic
//! surface f = X0^2 + X1*X2 + ...
//! curve C = f ; X0*X3 - X1^2
//! assert irreducible f
//! assert complete C
//! assert degree C 6
//! ```
//!
//! A curve equation may be the surface's name. With a `modulus` line, `a`
//! denotes a root of that polynomial.

use crate::algebra::field::modp;
use crate::algebra::{make_field, parse_poly_with, univariate, Elem, Gf, Poly};
use crate::error::{Error, Result};
use crate::geometry::{CurveSpec, Surface};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assertion {
    Irreducible(String),
    Complete(String),
    Degree(String, u32),
}

#[derive(Clone, Debug)]
pub struct JobFile {
    pub field: Gf,
    /// The element written `a`.
    pub generator: Elem,
    pub surface_name: String,
    pub surface: Poly,
    pub curves: Vec<(String, Vec<Poly>)>,
    pub assertions: Vec<Assertion>,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::JobFile { line, col, msg: msg.into() }
}

impl JobFile {
    fn asserted(&self, name: &str, want: fn(&Assertion) -> bool) -> bool {
        self.assertions.iter().any(|a| want(a) && assertion_name(a) == name)
    }

    pub fn surface(&self) -> Result<Surface> {
        let irr = self.asserted(&self.surface_name, |a| matches!(a, Assertion::Irreducible(_)));
        Surface::new(self.surface.clone(), irr)
    }

    pub fn curve_names(&self) -> Vec<&str> {
        self.curves.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn curve(&self, name: &str) -> Result<CurveSpec> {
        let Some((_, polys)) = self.curves.iter().find(|(n, _)| n == name) else {
            return Err(Error::HypothesisNotMet(format!("no curve named {name}")));
        };
        let mut c = CurveSpec::new(polys.clone())?;
        for a in &self.assertions {
            if assertion_name(a) != name {
                continue;
            }
            c = match a {
                Assertion::Irreducible(_) => c.irreducible(),
                Assertion::Complete(_) => c.complete(),
                Assertion::Degree(_, d) => c.with_delta(*d),
            };
        }
        Ok(c)
    }
}

fn assertion_name(a: &Assertion) -> &str {
    match a {
        Assertion::Irreducible(n) | Assertion::Complete(n) | Assertion::Degree(n, _) => n,
    }
}

/// Splits `key=value`, checking the key.
fn keyed(tok: &str, key: &str, line: usize, col: usize) -> Result<u64> {
    match tok.split_once('=') {
        Some((k, v)) if k == key => v.parse().map_err(|_| err(line, col + k.len() + 1, format!("expected an integer for {key}"))),
        _ => Err(err(line, col, format!("expected {key}=<int>"))),
    }
}

fn is_name(s: &str) -> bool {
    let mut ch = s.chars();
    matches!(ch.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && ch.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Tokens with their 1-based columns.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(b)) => {
                out.push((b + 1, &s[b..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push((b + 1, &s[b..]));
    }
    out
}

pub fn parse_job(text: &str) -> Result<JobFile> {
    let mut field: Option<Gf> = None;
    let mut generator = None;
    let mut surface: Option<(String, Poly)> = None;
    let mut curves: Vec<(String, Vec<Poly>)> = Vec::new();
    let mut assertions = Vec::new();

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks = tokens(body);
        let Some(&(kcol, key)) = toks.first() else { continue };
        let need_field = || field.clone().ok_or_else(|| err(line, kcol, "field line must come first"));
        match key {
            "field" => {
                if field.is_some() {
                    return Err(err(line, kcol, "duplicate field line"));
                }
                if toks.len() != 3 {
                    return Err(err(line, kcol, "expected: field p=<int> e=<int>"));
                }
                let p = keyed(toks[1].1, "p", line, toks[1].0)?;
                let e = keyed(toks[2].1, "e", line, toks[2].0)?;
                let f = make_field(p, e as u32).map_err(|e| err(line, toks[1].0, e.to_string()))?;
                generator = Some(f.generator());
                field = Some(f);
            }
            "modulus" => {
                let f = need_field()?;
                if surface.is_some() {
                    return Err(err(line, kcol, "modulus must precede the surface"));
                }
                let p = f.characteristic();
                let mut coeffs = Vec::new();
                for &(c, t) in &toks[1..] {
                    let v: i64 = t.parse().map_err(|_| err(line, c, "expected an integer coefficient"))?;
                    coeffs.push(v.rem_euclid(p as i64) as u32);
                }
                if coeffs.len() != f.degree() as usize + 1 || coeffs.last() != Some(&1) {
                    return Err(err(line, kcol, format!("expected {} coefficients of a monic polynomial", f.degree() + 1)));
                }
                if !modp::is_irreducible(&coeffs, p) {
                    return Err(err(line, kcol, "modulus is not irreducible"));
                }
                let m: Vec<Elem> = coeffs.iter().map(|&c| f.from_int(c as i64)).collect();
                generator = univariate::roots(&f, &m).into_iter().min();
            }
            "surface" | "curve" => {
                let f = need_field()?;
                let (ncol, name) = toks.get(1).copied().ok_or_else(|| err(line, kcol, format!("expected: {key} <name> = <poly>")))?;
                if !is_name(name) {
                    return Err(err(line, ncol, format!("bad name {name:?}")));
                }
                if toks.get(2).map(|t| t.1) != Some("=") {
                    return Err(err(line, ncol + name.len(), "expected '='"));
                }
                let eq = toks[2].0;
                let rhs_start = eq;
                let rhs = &body[rhs_start..];
                let gen = generator.unwrap();
                let mut polys = Vec::new();
                let mut off = rhs_start;
                for part in rhs.split(';') {
                    let trimmed = part.trim();
                    let lead = part.len() - part.trim_start().len();
                    let col = off + lead + 1;
                    if trimmed.is_empty() {
                        return Err(err(line, col, "empty equation"));
                    }
                    let p = match &surface {
                        Some((sn, sp)) if key == "curve" && trimmed == sn => sp.clone(),
                        _ => parse_poly_with(trimmed, &f, gen).map_err(|e| match e {
                            Error::Syntax { pos, msg } => err(line, col + pos, msg),
                            other => err(line, col, other.to_string()),
                        })?,
                    };
                    polys.push(p);
                    off += part.len() + 1;
                }
                if key == "surface" {
                    if surface.is_some() {
                        return Err(err(line, kcol, "only one surface per job"));
                    }
                    if polys.len() != 1 {
                        return Err(err(line, kcol, "a surface has one equation"));
                    }
                    surface = Some((name.to_string(), polys.pop().unwrap()));
                } else {
                    if curves.iter().any(|(n, _)| n == name) || surface.as_ref().is_some_and(|s| s.0 == name) {
                        return Err(err(line, ncol, format!("duplicate name {name}")));
                    }
                    curves.push((name.to_string(), polys));
                }
            }
            "assert" => {
                let (c1, kind) = toks.get(1).copied().ok_or_else(|| err(line, kcol, "expected an assertion kind"))?;
                let (c2, name) = toks.get(2).copied().ok_or_else(|| err(line, c1, "expected a name"))?;
                let known = surface.as_ref().is_some_and(|s| s.0 == name) || curves.iter().any(|(n, _)| n == name);
                if !known {
                    return Err(err(line, c2, format!("unknown name {name}")));
                }
                let a = match (kind, toks.len()) {
                    ("irreducible", 3) => Assertion::Irreducible(name.into()),
                    ("complete", 3) => Assertion::Complete(name.into()),
                    ("degree", 4) => {
                        let (c3, v) = toks[3];
                        Assertion::Degree(name.into(), v.parse().map_err(|_| err(line, c3, "expected an integer degree"))?)
                    }
                    ("irreducible" | "complete" | "degree", _) => return Err(err(line, c1, "wrong number of arguments")),
                    _ => return Err(err(line, c1, format!("unknown assertion {kind:?}"))),
                };
                assertions.push(a);
            }
            other => return Err(err(line, kcol, format!("unknown key {other:?}"))),
        }
    }
    let field = field.ok_or_else(|| err(1, 1, "missing field line"))?;
    let (surface_name, surface) = surface.ok_or_else(|| err(text.lines().count().max(1), 1, "missing surface line"))?;
    Ok(JobFile { field, generator: generator.unwrap(), surface_name, surface, curves, assertions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    const JOB: &str = "\
# test job
field p=5 e=1
surface f = X0^2 + X1^2 + X2^2 + X3^2   # a quadric
curve C = f ; X3
assert irreducible f
assert degree C 2
assert complete C
";

    #[test]
    fn parses() {
        let j = parse_job(JOB).unwrap();
        assert_eq!(j.field.size(), 5);
        let s = j.surface().unwrap();
        assert!(s.irreducible_asserted);
        let c = j.curve("C").unwrap();
        assert_eq!(c.polys.len(), 2);
        assert_eq!(c.polys[1], parse_poly("X3", &j.field).unwrap());
        assert_eq!(c.delta, Some(2));
        assert!(c.complete_asserted && !c.irreducible_asserted);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_job("field p=5 e=1\nsurfac f = X0\n").unwrap_err();
        assert!(matches!(e, Error::JobFile { line: 2, col: 1, .. }), "{e}");
        let e = parse_job("field p=5 e=1\nsurface f = X0 + * X1\n").unwrap_err();
        match e {
            Error::JobFile { line: 2, col, .. } => assert!(col >= 18, "col {col}"),
            other => panic!("{other}"),
        }
        let e = parse_job("field p=4 e=1\n").unwrap_err();
        assert!(matches!(e, Error::JobFile { line: 1, .. }));
        let e = parse_job("field p=5 e=1\nsurface f = X0\nassert smooth f\n").unwrap_err();
        assert!(matches!(e, Error::JobFile { line: 3, col: 8, .. }), "{e}");
        assert!(parse_job("field p=5 e=1\n").is_err());
        assert!(parse_job("surface f = X0\n").is_err());
    }

    #[test]
    fn custom_modulus_binds_a() {
        // a^2 + a + 1 over GF(2): the field's own modulus
        let j = parse_job("field p=2 e=2\nmodulus 1 1 1\nsurface f = X0^3 + a*X1^3\n").unwrap();
        let f = &j.field;
        let a = j.generator;
        assert!(f.add(f.add(f.mul(a, a), a), Elem::ONE).is_zero());
        // x^2 + 1 over GF(3)
        let j = parse_job("field p=3 e=2\nmodulus 1 0 1\nsurface f = X0 + a*X1\n").unwrap();
        let f = &j.field;
        assert!(f.add(f.mul(j.generator, j.generator), Elem::ONE).is_zero());
        assert!(parse_job("field p=3 e=2\nmodulus 2 0 1\nsurface f = X0\n").is_err());
    }
}
