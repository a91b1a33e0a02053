//! Sparse polynomials in X0..X3 over a finite field.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose order is graded
//! lexicographic with X0 > X1 > X2 > X3; the leading term is the last entry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::embed::Embedding;
use super::field::{Elem, Gf};
use crate::error::{Error, Result};

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub [u16; 4]);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn var(i: usize) -> Monomial {
        let mut e = [0; 4];
        e[i] = 1;
        Monomial(e)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2], self.0[3] + o.0[3]])
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        (0..4).all(|i| self.0[i] <= o.0[i])
    }

    /// `o / self`, assuming `self.divides(o)`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial([o.0[0] - self.0[0], o.0[1] - self.0[1], o.0[2] - self.0[2], o.0[3] - self.0[3]])
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `d`, in decreasing grlex order.
pub fn monomials_of_degree(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            for c in (0..=d - a - b).rev() {
                out.push(Monomial([a as u16, b as u16, c as u16, (d - a - b - c) as u16]));
            }
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Gf,
    terms: BTreeMap<Monomial, Elem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.field, self)
    }
}

impl Poly {
    pub fn zero(field: &Gf) -> Poly {
        Poly { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &Gf, c: Elem) -> Poly {
        Poly::term(field, c, Monomial::default())
    }

    pub fn term(field: &Gf, c: Elem, m: Monomial) -> Poly {
        let mut p = Poly::zero(field);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(field: &Gf, i: usize) -> Poly {
        Poly::term(field, Elem::ONE, Monomial::var(i))
    }

    /// Linear form `sum c_i X_i`.
    pub fn linear(field: &Gf, c: &[Elem; 4]) -> Poly {
        let mut p = Poly::zero(field);
        for (i, &ci) in c.iter().enumerate() {
            p.add_term(Monomial::var(i), ci);
        }
        p
    }

    pub fn from_terms(field: &Gf, terms: impl IntoIterator<Item = (Monomial, Elem)>) -> Poly {
        let mut p = Poly::zero(field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in decreasing grlex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Elem)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Elem {
        self.terms.get(m).copied().unwrap_or(Elem::ZERO)
    }

    /// Total degree of the leading term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn leading(&self) -> Option<(Monomial, Elem)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }

    pub fn add_term(&mut self, m: Monomial, c: Elem) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = f.add(*v, c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, *c);
        }
        r
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly {
            field: f.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, f.neg(*c))).collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, self.field.neg(*c));
        }
        r
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::from_terms(f, self.terms.iter().map(|(m, v)| (*m, f.mul(*v, c))))
    }

    pub fn mul_monomial(&self, m: &Monomial, c: Elem) -> Poly {
        let f = &self.field;
        Poly::from_terms(f, self.terms.iter().map(|(k, v)| (k.mul(m), f.mul(*v, c))))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let mut r = Poly::zero(f);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), f.mul(*c1, *c2));
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::constant(&self.field, Elem::ONE);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Formal partial derivative with respect to `X_i`.
    pub fn partial(&self, i: usize) -> Poly {
        let f = &self.field;
        let mut r = Poly::zero(f);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = *m;
            m2.0[i] -= 1;
            r.add_term(m2, f.mul_int(*c, e as i64));
        }
        r
    }

    pub fn gradient(&self) -> [Poly; 4] {
        [self.partial(0), self.partial(1), self.partial(2), self.partial(3)]
    }

    /// `sum X_i^q * df/dX_i`.
    pub fn build_h(&self, q: u64) -> Poly {
        let f = &self.field;
        let mut h = Poly::zero(f);
        for i in 0..4 {
            let mut m = Monomial::default();
            m.0[i] = q as u16;
            h = h.add(&self.partial(i).mul_monomial(&m, Elem::ONE));
        }
        h
    }

    /// Division by a single divisor under grlex: returns `(quotient, remainder)`.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let f = &self.field;
        let (lm, lc) = d.leading().ok_or(Error::ZeroDivisor)?;
        let lc_inv = f.inv(lc)?;
        let mut rest = self.clone();
        let mut q = Poly::zero(f);
        let mut r = Poly::zero(f);
        while let Some((m, c)) = rest.leading() {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = f.mul(c, lc_inv);
                q.add_term(qm, qc);
                rest = rest.sub(&d.mul_monomial(&qm, qc));
            } else {
                r.add_term(m, c);
                rest.terms.remove(&m);
            }
        }
        Ok((q, r))
    }

    /// Whether `self` divides `g`.
    pub fn divides(&self, g: &Poly) -> Result<bool> {
        Ok(g.divrem(self)?.1.is_zero())
    }

    pub fn evaluate(&self, pt: &[Elem; 4]) -> Elem {
        let f = &self.field;
        let mut acc = Elem::ZERO;
        for (m, c) in &self.terms {
            let mut v = *c;
            for i in 0..4 {
                if m.0[i] > 0 {
                    v = f.mul(v, f.pow(pt[i], m.0[i] as u64));
                }
            }
            acc = f.add(acc, v);
        }
        acc
    }

    /// Same polynomial with coefficients pushed into a larger field.
    pub fn embed(&self, e: &Embedding) -> Result<Poly> {
        if e.source() != &self.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", e.source(), self.field)));
        }
        Ok(Poly {
            field: e.target().clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, e.apply(*c))).collect(),
        })
    }

    /// Over an extension of the polynomial's own field.
    pub fn over(&self, target: &Gf) -> Result<Poly> {
        if target == &self.field {
            return Ok(self.clone());
        }
        self.embed(&Embedding::new(&self.field, target)?)
    }

    /// Coefficients on all monomials of degree `d`, in decreasing grlex order.
    pub fn dense_coefficients(&self, d: u32) -> Vec<Elem> {
        monomials_of_degree(d).iter().map(|m| self.coeff(m)).collect()
    }

    pub fn evaluator(&self) -> Evaluator {
        Evaluator::new(self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return out.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                out.write_str(" + ")?;
            }
            first = false;
            let mut parts = Vec::new();
            if *c != Elem::ONE || m.degree() == 0 {
                parts.push(self.field.format_elem(*c));
            }
            for i in 0..4 {
                match m.0[i] {
                    0 => {}
                    1 => parts.push(format!("X{i}")),
                    e => parts.push(format!("X{i}^{e}")),
                }
            }
            out.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

/// Flattened polynomial for repeated evaluation at many points.
#[derive(Clone, Debug)]
pub struct Evaluator {
    field: Gf,
    terms: Vec<(Elem, [u16; 4])>,
    max_exp: [usize; 4],
}

impl Evaluator {
    pub fn new(p: &Poly) -> Evaluator {
        let terms: Vec<(Elem, [u16; 4])> = p.terms.iter().map(|(m, c)| (*c, m.0)).collect();
        let mut max_exp = [0usize; 4];
        for (_, e) in &terms {
            for i in 0..4 {
                max_exp[i] = max_exp[i].max(e[i] as usize);
            }
        }
        Evaluator { field: p.field.clone(), terms, max_exp }
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn eval(&self, pt: &[Elem; 4]) -> Elem {
        let f = &self.field;
        let mut pows: [Vec<Elem>; 4] = Default::default();
        for i in 0..4 {
            let mut v = Vec::with_capacity(self.max_exp[i] + 1);
            v.push(Elem::ONE);
            for k in 1..=self.max_exp[i] {
                v.push(f.mul(v[k - 1], pt[i]));
            }
            pows[i] = v;
        }
        let mut acc = Elem::ZERO;
        for (c, e) in &self.terms {
            let mut v = *c;
            for i in 0..4 {
                if e[i] > 0 {
                    v = f.mul(v, pows[i][e[i] as usize]);
                }
            }
            acc = f.add(acc, v);
        }
        acc
    }
}
