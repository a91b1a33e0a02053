//! Finite fields GF(p^n) in polynomial basis over GF(p).
//!
//! An element is stored as the integer `sum c_i p^i` built from its coefficient
//! vector `(c_0, .., c_{n-1})` with respect to the basis `1, x, .., x^{n-1}`,
//! where `x` is the class of `X` modulo the field's modulus. The modulus for a
//! given `(p, n)` is always the first monic irreducible polynomial of degree
//! `n` when candidates are ordered by that same integer encoding, so two
//! handles to GF(p^n) are interchangeable.
//!
//! Fields up to [`TABLE_LIMIT`] elements get exp/log tables keyed by a fixed
//! primitive element; larger fields fall back to schoolbook multiplication.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};

/// Largest field size for which exp/log tables are built.
pub const TABLE_LIMIT: u64 = 1 << 20;

/// Largest base field accepted by [`make_field`].
pub const BASE_FIELD_LIMIT: u64 = 1 << 20;

/// A field element in polynomial-basis encoding. Only meaningful together with
/// the [`Gf`] it belongs to.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// The integer encoding of the coefficient vector.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u32,
    n: u32,
    size: u64,
    /// Low to high, monic, length `n + 1`.
    modulus: Vec<u32>,
    generator: OnceLock<Elem>,
    tables: OnceLock<Option<Tables>>,
}

/// Handle to GF(p^n). Cheap to clone; equality is by `(p, n)`.
#[derive(Clone)]
pub struct Gf(Arc<Inner>);

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.n == other.0.n
    }
}
impl Eq for Gf {}

impl std::hash::Hash for Gf {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.n.hash(state);
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.n == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.n)
        }
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn registry() -> &'static RwLock<HashMap<(u32, u32), Gf>> {
    static REG: OnceLock<RwLock<HashMap<(u32, u32), Gf>>> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(HashMap::new()))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds the base field GF(p^e) used to define surfaces and curves.
pub fn make_field(p: u64, e: u32) -> Result<Gf> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 || e > 12 {
        return Err(Error::DegreeTooLarge { degree: e, limit: BASE_FIELD_LIMIT });
    }
    match (p as u128).checked_pow(e) {
        Some(s) if s <= BASE_FIELD_LIMIT as u128 => Gf::new(p as u32, e),
        _ => Err(Error::DegreeTooLarge { degree: e, limit: BASE_FIELD_LIMIT }),
    }
}

impl Gf {
    /// GF(p^n), any `n` with `p^n < 2^32`.
    pub fn new(p: u32, n: u32) -> Result<Gf> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let size = match (p as u128).checked_pow(n) {
            Some(s) if n >= 1 && s < (1u128 << 32) => s as u64,
            _ => return Err(Error::DegreeTooLarge { degree: n, limit: 1 << 32 }),
        };
        if let Some(f) = registry().read().unwrap().get(&(p, n)) {
            return Ok(f.clone());
        }
        let modulus = modp::first_irreducible(p, n);
        let gf = Gf(Arc::new(Inner {
            p,
            n,
            size,
            modulus,
            generator: OnceLock::new(),
            tables: OnceLock::new(),
        }));
        let mut reg = registry().write().unwrap();
        Ok(reg.entry((p, n)).or_insert(gf).clone())
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    /// Degree over the prime field.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.n
    }

    #[inline]
    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// Monic modulus, coefficients low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn prime_field(&self) -> Result<Gf> {
        Gf::new(self.0.p, 1)
    }

    /// GF(p^(n k)).
    pub fn extension(&self, k: u32) -> Result<Gf> {
        Gf::new(self.0.p, self.0.n * k)
    }

    pub fn is_subfield_of(&self, other: &Gf) -> bool {
        self.0.p == other.0.p && other.0.n % self.0.n == 0
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[inline]
    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// Element with the given integer encoding.
    pub fn from_index(&self, idx: u64) -> Result<Elem> {
        if idx < self.0.size {
            Ok(Elem(idx as u32))
        } else {
            Err(Error::BadFieldLiteral(format!("index {idx} outside {self}")))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.0.p as i64) as u32)
    }

    /// The class of `X` modulo the field's modulus.
    pub fn x(&self) -> Elem {
        if self.0.n == 1 {
            // modulus is X - c for some c; the class of X is c.
            Elem(((self.0.p - self.0.modulus[0]) % self.0.p) as u32)
        } else {
            Elem(self.0.p)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.0.size as u32).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.0.size as u32).map(Elem)
    }

    #[inline]
    pub fn in_prime_field(&self, a: Elem) -> bool {
        a.0 < self.0.p
    }

    /// Coefficients of `a` in the polynomial basis, low to high, length `n`.
    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let p = self.0.p;
        let mut v = Vec::with_capacity(self.0.n as usize);
        let mut x = a.0;
        for _ in 0..self.0.n {
            v.push(x % p);
            x /= p;
        }
        v
    }

    pub fn from_digits(&self, d: &[u32]) -> Elem {
        let p = self.0.p as u64;
        let mut acc = 0u64;
        for &c in d.iter().take(self.0.n as usize).rev() {
            acc = acc * p + (c as u64 % p);
        }
        Elem(acc as u32)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if self.0.n == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut acc = 0u64;
        let mut pw = 1u64;
        while x > 0 || y > 0 {
            let mut d = x % p + y % p;
            if d >= p {
                d -= p;
            }
            acc += d as u64 * pw;
            x /= p;
            y /= p;
            pw *= p as u64;
        }
        Elem(acc as u32)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.n == 1 {
            return Elem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut acc = 0u64;
        let mut pw = 1u64;
        while x > 0 {
            let d = x % p;
            if d != 0 {
                acc += (p - d) as u64 * pw;
            }
            x /= p;
            pw *= p as u64;
        }
        Elem(acc as u32)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        if self.0.n == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32);
        }
        match self.tables() {
            Some(t) => {
                let i = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
                Elem(t.exp[i])
            }
            None => self.mul_schoolbook(a, b),
        }
    }

    /// Multiplication by an integer through the prime subfield.
    pub fn mul_int(&self, a: Elem, k: i64) -> Elem {
        self.mul(a, self.from_int(k))
    }

    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        if let Some(t) = self.tables() {
            let order = self.0.size - 1;
            let l = (t.log[a.0 as usize] as u128 * (e % order) as u128 % order as u128) as usize;
            return Elem(t.exp[l]);
        }
        let mut base = a;
        let mut acc = Elem::ONE;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = self.tables() {
            let order = (self.0.size - 1) as usize;
            let l = t.log[a.0 as usize] as usize;
            return Ok(Elem(t.exp[(order - l) % order]));
        }
        Ok(self.pow(a, self.0.size - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The `q`-power map; `q` should be a power of the characteristic.
    pub fn frobenius(&self, a: Elem, q: u64) -> Elem {
        self.pow(a, q)
    }

    /// The fixed primitive element (smallest encoding generating the
    /// multiplicative group). This is the `a` of the polynomial grammar.
    pub fn generator(&self) -> Elem {
        *self.0.generator.get_or_init(|| self.find_generator())
    }

    /// Discrete logarithm to the base [`Gf::generator`].
    pub fn log(&self, a: Elem) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        if let Some(t) = self.tables() {
            return Some(t.log[a.0 as usize] as u64);
        }
        if self.0.n == 1 && self.0.size <= TABLE_LIMIT {
            // prime fields skip tables; brute force is cheap here
            let g = self.generator();
            let mut x = Elem::ONE;
            for k in 0..self.0.size - 1 {
                if x == a {
                    return Some(k);
                }
                x = self.mul(x, g);
            }
        }
        None
    }

    fn tables(&self) -> Option<&Tables> {
        self.0
            .tables
            .get_or_init(|| {
                if self.0.n == 1 || self.0.size > TABLE_LIMIT {
                    return None;
                }
                let g = self.generator();
                let order = (self.0.size - 1) as usize;
                let mut exp = vec![0u32; 2 * order];
                let mut log = vec![0u32; self.0.size as usize];
                let mut x = Elem::ONE;
                for i in 0..order {
                    exp[i] = x.0;
                    exp[i + order] = x.0;
                    log[x.0 as usize] = i as u32;
                    x = self.mul_schoolbook(x, g);
                }
                Some(Tables { exp, log })
            })
            .as_ref()
    }

    fn find_generator(&self) -> Elem {
        let order = self.0.size - 1;
        let factors = prime_factors(order);
        let pw = |a: Elem, mut e: u64| {
            let mut base = a;
            let mut acc = Elem::ONE;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul_schoolbook(acc, base);
                }
                base = self.mul_schoolbook(base, base);
                e >>= 1;
            }
            acc
        };
        for idx in 1..self.0.size as u32 {
            let a = Elem(idx);
            if factors.iter().all(|&r| pw(a, order / r) != Elem::ONE) {
                return a;
            }
        }
        unreachable!("finite field without primitive element")
    }

    pub(crate) fn mul_schoolbook(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p as u64;
        let n = self.0.n as usize;
        if n == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % p) as u32);
        }
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let m = &self.0.modulus;
        for i in (n..2 * n - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..n {
                let t = c * m[j] as u64 % p;
                prod[i - n + j] = (prod[i - n + j] + p - t) % p;
            }
        }
        let d: Vec<u32> = prod[..n].iter().map(|&c| c as u32).collect();
        self.from_digits(&d)
    }

    /// Text form used by the polynomial grammar: an integer for prime-field
    /// elements, otherwise `a^k` for the generator `a`.
    pub fn format_elem(&self, a: Elem) -> String {
        if self.in_prime_field(a) {
            return a.0.to_string();
        }
        match self.log(a) {
            Some(1) => "a".to_string(),
            Some(k) => format!("a^{k}"),
            None => format!("#{}", a.0),
        }
    }
}

/// Checked element wrapper carrying its field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldElement {
    pub field: Gf,
    pub value: Elem,
}

impl FieldElement {
    pub fn new(field: &Gf, value: Elem) -> Self {
        FieldElement { field: field.clone(), value }
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn add(&self, o: &FieldElement) -> Result<FieldElement> {
        self.check(o)?;
        Ok(FieldElement::new(&self.field, self.field.add(self.value, o.value)))
    }

    pub fn sub(&self, o: &FieldElement) -> Result<FieldElement> {
        self.check(o)?;
        Ok(FieldElement::new(&self.field, self.field.sub(self.value, o.value)))
    }

    pub fn mul(&self, o: &FieldElement) -> Result<FieldElement> {
        self.check(o)?;
        Ok(FieldElement::new(&self.field, self.field.mul(self.value, o.value)))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement::new(&self.field, self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement::new(&self.field, self.field.pow(self.value, e))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_elem(self.value))
    }
}

/// Dense polynomials over GF(p) as plain `u32` vectors, only used to pick
/// moduli before any [`Gf`] exists.
pub(crate) mod modp {
    fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p) as u64;
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] as u64 * lead_inv % p as u64;
            for j in 0..=dm {
                let t = c * m[j] as u64 % p as u64;
                let idx = top - dm + j;
                r[idx] = ((r[idx] as u64 + p as u64 - t) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let v: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        rem(&v, m, p)
    }

    /// `X^(p^k) mod m`.
    pub fn x_pow_p_pow(k: u32, m: &[u32], p: u32) -> Vec<u32> {
        let mut cur = rem(&[0, 1], m, p);
        for _ in 0..k {
            // raise to the p-th power by repeated multiplication
            let mut acc = vec![1u32];
            let mut base = cur.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mulmod(&acc, &base, m, p);
                }
                base = mulmod(&base, &base, m, p);
                e >>= 1;
            }
            cur = acc;
        }
        cur
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    fn sub_x(a: &[u32], p: u32) -> Vec<u32> {
        let mut v = a.to_vec();
        if v.len() < 2 {
            v.resize(2, 0);
        }
        v[1] = (v[1] + p - 1) % p;
        trim(&mut v);
        v
    }

    /// Rabin's irreducibility test for a monic `m` of degree `n`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let n = (m.len() - 1) as u32;
        if n == 1 {
            return true;
        }
        let full = x_pow_p_pow(n, m, p);
        if sub_x(&full, p).iter().any(|&c| c != 0) {
            return false;
        }
        for r in super::prime_factors(n as u64) {
            let h = x_pow_p_pow(n / r as u32, m, p);
            let g = gcd(m, &sub_x(&h, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

    /// First monic irreducible of degree `n`, scanning lower coefficients
    /// `(c_0, .., c_{n-1})` in increasing base-`p` integer order.
    pub fn first_irreducible(p: u32, n: u32) -> Vec<u32> {
        let total = (p as u64).pow(n);
        for idx in 0..total {
            let mut m = Vec::with_capacity(n as usize + 1);
            let mut x = idx;
            for _ in 0..n {
                m.push((x % p as u64) as u32);
                x /= p as u64;
            }
            m.push(1);
            if is_irreducible(&m, p) {
                return m;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_modulus_is_x() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.size(), 2);
    }

    #[test]
    fn gf4_modulus() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn not_prime_and_too_large() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(make_field(2, 13), Err(Error::DegreeTooLarge { .. })));
        assert!(matches!(make_field(1021, 3), Err(Error::DegreeTooLarge { .. })));
    }

    /// Brute-force factor search: no monic factor of degree 1..=n/2.
    fn brute_irreducible(m: &[u32], p: u32) -> bool {
        let n = m.len() as u32 - 1;
        for d in 1..=n / 2 {
            for idx in 0..(p as u64).pow(d) {
                let mut g = Vec::new();
                let mut x = idx;
                for _ in 0..d {
                    g.push((x % p as u64) as u32);
                    x /= p as u64;
                }
                g.push(1);
                if modp::rem(m, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn moduli_are_irreducible_and_first() {
        for &(p, n) in &[(2, 2), (2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)] {
            let f = Gf::new(p, n).unwrap();
            let m = f.modulus().to_vec();
            assert!(brute_irreducible(&m, p), "{f:?}");
            // every smaller candidate is reducible
            let mut enc = 0u64;
            for &c in m[..n as usize].iter().rev() {
                enc = enc * p as u64 + c as u64;
            }
            for idx in 0..enc {
                let mut g = Vec::new();
                let mut x = idx;
                for _ in 0..n {
                    g.push((x % p as u64) as u32);
                    x /= p as u64;
                }
                g.push(1);
                assert!(!brute_irreducible(&g, p));
            }
        }
    }

    #[test]
    fn gf4_generator_cubes_to_one() {
        let f = make_field(2, 2).unwrap();
        let g = f.generator();
        let g2 = f.mul(g, g);
        assert_eq!(f.mul(g, g2), Elem::ONE);
        assert_eq!(f.inv(Elem::ONE).unwrap(), Elem::ONE);
    }

    #[test]
    fn frobenius_fixes_gf9() {
        let f = make_field(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.pow(a, 9), a);
        }
    }

    #[test]
    fn tables_agree_with_schoolbook() {
        for &(p, n) in &[(2, 5), (3, 3), (5, 2), (7, 2)] {
            let f = Gf::new(p, n).unwrap();
            for a in f.elements() {
                for b in f.elements().step_by(3) {
                    assert_eq!(f.mul(a, b), f.mul_schoolbook(a, b));
                }
            }
        }
    }

    #[test]
    fn large_field_uses_schoolbook_consistently() {
        let f = Gf::new(2, 24).unwrap();
        let a = Elem(0x00ab_cdef);
        let inv = f.inv(a).unwrap();
        assert_eq!(f.mul(a, inv), Elem::ONE);
        assert_eq!(f.pow(a, f.size()), a);
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.inv(Elem::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn field_element_mismatch() {
        let f = make_field(5, 1).unwrap();
        let g = make_field(5, 2).unwrap();
        let a = FieldElement::new(&f, Elem(2));
        let b = FieldElement::new(&g, Elem(2));
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch(_))));
        assert_eq!(a.mul(&a).unwrap().value, Elem(4));
    }

    #[test]
    fn add_neg_sub() {
        let f = Gf::new(3, 3).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            for b in f.elements().step_by(5) {
                assert_eq!(f.add(f.sub(a, b), b), a);
            }
        }
    }

    #[test]
    fn format_uses_generator_powers() {
        let f = make_field(2, 2).unwrap();
        let g = f.generator();
        assert_eq!(f.format_elem(g), "a");
        assert_eq!(f.format_elem(f.mul(g, g)), "a^2");
        assert_eq!(f.format_elem(Elem::ONE), "1");
    }
}
