//! Finite fields `F_q`, `q = p^n`, with table-driven arithmetic.
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`
//! where `c_i` is the coefficient of `X^i` in the power basis of the
//! modulus polynomial. This encoding is canonical, so element order is
//! coefficient-lexicographic: `0`, `1`, then the rest.
//!
//! Multiplication goes through discrete log tables built once per field,
//! which keeps every hot loop in the crate at a couple of table lookups.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field cardinality.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// A field element in canonical integer encoding.
///
/// `Elem` carries no reference to its field; use the methods on
/// [`FiniteField`] to operate on it, or wrap it in a [`FieldElement`] for
/// checked arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct FieldData {
    p: u32,
    n: u32,
    q: u32,
    /// Little-endian coefficients including the leading 1.
    modulus: Vec<u32>,
    /// `p^i` for `i <= n`.
    radix: Vec<u32>,
    /// `exp[k] = g^k` for a fixed primitive element `g`, `k < q - 1`.
    exp: Vec<u32>,
    /// Inverse of `exp` on nonzero elements; `log[0]` is unused.
    log: Vec<u32>,
    /// Absolute trace of every element (empty for prime fields).
    trace: Vec<u32>,
    /// `e(k / p)` for `k < p`.
    roots: Vec<Complex64>,
}

/// The finite field `F_{p^n}`.
///
/// Cloning is cheap: the tables are shared.
#[derive(Clone)]
pub struct FiniteField {
    data: Arc<FieldData>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.data.p)
            .field("n", &self.data.n)
            .field("modulus", &self.data.modulus)
            .finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.p == other.data.p && self.data.modulus == other.data.modulus)
    }
}

impl Eq for FiniteField {}

/// JSON descriptor of a field: `{"p": .., "n": .., "modulus": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

/// Deterministic primality test by trial division.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Construct `F_{p^n}` with the lexicographically smallest monic irreducible
/// modulus of degree `n`.
pub fn make_field(p: u64, n: u32) -> Result<FiniteField> {
    FiniteField::new(p, n)
}

impl FiniteField {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadParameter("extension degree must be >= 1".into()));
        }
        if !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
        let mut q: u64 = 1;
        for _ in 0..n {
            q = q.saturating_mul(p);
            if q > MAX_FIELD_SIZE {
                return Err(Error::SizeExceeded(format!(
                    "{p}^{n} exceeds the field size cap {MAX_FIELD_SIZE}"
                )));
            }
        }
        let p = p as u32;
        let q = q as u32;
        let modulus = if n == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, n as usize)
        };
        let radix: Vec<u32> = (0..=n).map(|i| p.pow(i)).collect();
        let (exp, log) = build_log_tables(p, n as usize, q, &modulus);
        let roots = (0..p)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * f64::from(k) / f64::from(p);
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        let mut data = FieldData {
            p,
            n,
            q,
            modulus,
            radix,
            exp,
            log,
            trace: Vec::new(),
            roots,
        };
        if n > 1 {
            data.trace = build_trace_table(&data);
        }
        Ok(FiniteField {
            data: Arc::new(data),
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.data.p
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.data.n
    }

    /// Cardinality `p^n`.
    #[inline]
    pub fn q(&self) -> u32 {
        self.data.q
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.data.q as usize
    }

    pub fn is_prime_field(&self) -> bool {
        self.data.n == 1
    }

    pub fn characteristic(&self) -> u32 {
        self.data.p
    }

    /// Modulus polynomial, little-endian, leading coefficient included.
    /// For prime fields this is `X` by convention.
    pub fn modulus(&self) -> &[u32] {
        &self.data.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.data.p,
            n: self.data.n,
            modulus: self.data.modulus.clone(),
        }
    }

    /// Short label such as `F_7` or `F_5^4`.
    pub fn label(&self) -> String {
        if self.data.n == 1 {
            format!("F_{}", self.data.p)
        } else {
            format!("F_{}^{}", self.data.p, self.data.n)
        }
    }

    /// All elements in canonical (coefficient-lexicographic) order.
    pub fn elements(&self) -> impl ExactSizeIterator<Item = Elem> + Clone {
        (0..self.data.q).map(Elem)
    }

    /// Nonzero elements in canonical order.
    pub fn units(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.data.q).map(Elem)
    }

    /// Build an element from coefficients (little-endian, reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.data.n as usize {
            return Err(Error::BadParameter(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.data.n
            )));
        }
        let v = coeffs
            .iter()
            .zip(&self.data.radix)
            .map(|(&c, &r)| (c % self.data.p) * r)
            .sum();
        Ok(Elem(v))
    }

    pub fn coeffs(&self, x: Elem) -> Vec<u32> {
        let p = self.data.p;
        let mut v = x.0;
        (0..self.data.n)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    /// Element from an integer (reduced modulo `q`).
    pub fn elem(&self, v: u64) -> Elem {
        Elem((v % u64::from(self.data.q)) as u32)
    }

    /// Embedding of the prime subfield: the integer `k` maps to `k mod p`.
    pub fn from_int(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(i64::from(self.data.p)) as u32)
    }

    /// Canonical integer representative in `[0, p)` of a prime-field element.
    pub fn to_int(&self, x: Elem) -> Result<u32> {
        if !self.is_prime_field() {
            return Err(Error::NotPrimeField);
        }
        Ok(x.0)
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        let d = &*self.data;
        if d.n == 1 {
            let s = x.0 + y.0;
            return Elem(if s >= d.p { s - d.p } else { s });
        }
        if d.p == 2 {
            return Elem(x.0 ^ y.0);
        }
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0;
        for &r in &d.radix[..d.n as usize] {
            let s = a % d.p + b % d.p;
            out += if s >= d.p { s - d.p } else { s } * r;
            a /= d.p;
            b /= d.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        let d = &*self.data;
        if d.n == 1 {
            return Elem(if x.0 == 0 { 0 } else { d.p - x.0 });
        }
        if d.p == 2 {
            return x;
        }
        let mut a = x.0;
        let mut out = 0;
        for &r in &d.radix[..d.n as usize] {
            let c = a % d.p;
            out += if c == 0 { 0 } else { d.p - c } * r;
            a /= d.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        let d = &*self.data;
        if d.n == 1 {
            return Elem(((u64::from(x.0) * u64::from(y.0)) % u64::from(d.p)) as u32);
        }
        if x.0 == 0 || y.0 == 0 {
            return Elem::ZERO;
        }
        let order = d.q - 1;
        let mut k = d.log[x.index()] + d.log[y.index()];
        if k >= order {
            k -= order;
        }
        Elem(d.exp[k as usize])
    }

    /// `x^e` by square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, x: Elem, mut e: u64) -> Elem {
        let mut base = x;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, computed as `x^(q-2)`.
    pub fn inv(&self, x: Elem) -> Result<Elem> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(x, u64::from(self.data.q) - 2))
    }

    /// Primitive element used by the log tables.
    pub fn generator(&self) -> Elem {
        Elem(self.data.exp[1 % self.data.exp.len()])
    }

    /// Discrete logarithm to base [`FiniteField::generator`].
    pub fn log(&self, x: Elem) -> Option<u32> {
        (!x.is_zero()).then(|| self.data.log[x.index()])
    }

    /// `g^k` for the field's generator `g`.
    pub fn exp(&self, k: u64) -> Elem {
        let order = u64::from(self.data.q - 1);
        Elem(self.data.exp[(k % order) as usize])
    }

    /// Absolute trace `Tr_{F_q/F_p}(x)` as an integer in `[0, p)`.
    #[inline]
    pub fn trace(&self, x: Elem) -> u32 {
        if self.data.n == 1 {
            x.0
        } else {
            self.data.trace[x.index()]
        }
    }

    /// `e(k / p)` for `k` in `[0, p)`.
    #[inline]
    pub fn root_of_unity(&self, k: u32) -> Complex64 {
        self.data.roots[k as usize]
    }

    /// The standard additive character `psi(x) = e(Tr(x) / p)`.
    #[inline]
    pub fn psi(&self, x: Elem) -> Complex64 {
        self.data.roots[self.trace(x) as usize]
    }

    /// Legendre symbol of a prime-field element: `-1`, `0` or `1`.
    pub fn legendre(&self, x: Elem) -> Result<i8> {
        if !self.is_prime_field() {
            return Err(Error::NotPrimeField);
        }
        Ok(self.quadratic_character(x))
    }

    /// Quadratic character `x^((q-1)/2)` mapped to `{-1, 0, 1}`; valid for
    /// any odd `q`. In characteristic 2 every nonzero element is a square.
    pub fn quadratic_character(&self, x: Elem) -> i8 {
        if x.is_zero() {
            return 0;
        }
        if self.data.p == 2 {
            return 1;
        }
        let r = self.pow(x, u64::from((self.data.q - 1) / 2));
        if r == Elem::ONE {
            1
        } else {
            -1
        }
    }

    /// Wrap an element for checked arithmetic.
    pub fn wrap(&self, x: Elem) -> FieldElement<'_> {
        FieldElement {
            field: self,
            elem: x,
        }
    }
}

/// An element bound to its field, with arithmetic that rejects operands
/// from different fields.
#[derive(Debug, Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f FiniteField,
    elem: Elem,
}

impl<'f> FieldElement<'f> {
    pub fn elem(&self) -> Elem {
        self.elem
    }

    pub fn field(&self) -> &'f FiniteField {
        self.field
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.elem)
    }

    fn check(&self, other: &FieldElement<'_>) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement<'_>) -> Result<FieldElement<'f>> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.add(self.elem, other.elem)))
    }

    pub fn sub(&self, other: &FieldElement<'_>) -> Result<FieldElement<'f>> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.sub(self.elem, other.elem)))
    }

    pub fn mul(&self, other: &FieldElement<'_>) -> Result<FieldElement<'f>> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.mul(self.elem, other.elem)))
    }

    pub fn neg(&self) -> FieldElement<'f> {
        self.field.wrap(self.field.neg(self.elem))
    }

    pub fn inv(&self) -> Result<FieldElement<'f>> {
        Ok(self.field.wrap(self.field.inv(self.elem)?))
    }

    pub fn pow(&self, e: u64) -> FieldElement<'f> {
        self.field.wrap(self.field.pow(self.elem, e))
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.elem == other.elem
    }
}

// ---------------------------------------------------------------------------
// Polynomials over F_p, little-endian coefficient vectors.

fn poly_rem(mut a: Vec<u32>, b: &[u32], p: u32) -> Vec<u32> {
    // b is monic
    let db = b.len() - 1;
    while a.len() > db {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let t = (lead as u64 * bc as u64 % p as u64) as u32;
                let idx = shift + i;
                a[idx] = (a[idx] + p - t) % p;
            }
        }
        a.pop();
    }
    a
}

fn monic_from_index(idx: u64, degree: usize, p: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(degree + 1);
    let mut r = idx;
    for _ in 0..degree {
        v.push((r % u64::from(p)) as u32);
        r /= u64::from(p);
    }
    v.push(1);
    v
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=n/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    // roots first, cheapest rejection
    for x in 0..p {
        let mut acc = 0u64;
        for &c in f.iter().rev() {
            acc = (acc * u64::from(x) + u64::from(c)) % u64::from(p);
        }
        if acc == 0 {
            return false;
        }
    }
    for d in 2..=n / 2 {
        let count = u64::from(p).pow(d as u32);
        for idx in 0..count {
            let g = monic_from_index(idx, d, p);
            if poly_rem(f.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `n`, ordered by the integer encoding
/// of its non-leading coefficients.
fn smallest_irreducible(p: u32, n: usize) -> Vec<u32> {
    let count = u64::from(p).pow(n as u32);
    (0..count)
        .map(|idx| monic_from_index(idx, n, p))
        .find(|f| is_irreducible(f, p))
        .expect("an irreducible polynomial of every degree exists")
}

fn decode(v: u32, p: u32, n: usize) -> Vec<u32> {
    let mut v = v;
    (0..n)
        .map(|_| {
            let c = v % p;
            v /= p;
            c
        })
        .collect()
}

fn encode(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((u64::from(prod[i + j]) + u64::from(x) * u64::from(y)) % u64::from(p)) as u32;
        }
    }
    let mut r = poly_rem(prod, modulus, p);
    r.resize(modulus.len() - 1, 0);
    r
}

fn build_log_tables(p: u32, n: usize, q: u32, modulus: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let order = (q - 1) as usize;
    let mut exp = vec![0u32; order.max(1)];
    let mut log = vec![0u32; q as usize];
    if q == 2 {
        exp[0] = 1;
        return (exp, log);
    }
    'candidates: for cand in 2..q {
        let c = decode(cand, p, n);
        let mut cur = decode(1, p, n);
        for (k, slot) in exp.iter_mut().enumerate() {
            let v = encode(&cur, p);
            if k > 0 && v == 1 {
                continue 'candidates;
            }
            *slot = v;
            cur = if n == 1 {
                vec![((u64::from(cur[0]) * u64::from(c[0])) % u64::from(p)) as u32]
            } else {
                poly_mulmod(&cur, &c, modulus, p)
            };
        }
        for (k, &v) in exp.iter().enumerate() {
            log[v as usize] = k as u32;
        }
        return (exp, log);
    }
    unreachable!("multiplicative group of a finite field is cyclic")
}

fn build_trace_table(d: &FieldData) -> Vec<u32> {
    let n = d.n as usize;
    let p = d.p;
    let order = u64::from(d.q - 1);
    let mul = |x: u32, y: u32| -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let k = (u64::from(d.log[x as usize]) + u64::from(d.log[y as usize])) % order;
        d.exp[k as usize]
    };
    let pow = |x: u32, mut e: u64| -> u32 {
        let mut base = x;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let add = |x: u32, y: u32| -> u32 {
        let a = decode(x, p, n);
        let b = decode(y, p, n);
        let s: Vec<u32> = a.iter().zip(&b).map(|(u, v)| (u + v) % p).collect();
        encode(&s, p)
    };
    // trace of each basis vector X^i lies in the prime subfield
    let basis_traces: Vec<u32> = (0..n)
        .map(|i| {
            let x = d.radix[i];
            let mut acc = 0u32;
            for j in 0..n {
                acc = add(acc, pow(x, u64::from(p).pow(j as u32)));
            }
            debug_assert!(acc < p, "trace must land in F_p");
            acc
        })
        .collect();
    (0..d.q)
        .map(|v| {
            let c = decode(v, p, n);
            let s: u64 = c
                .iter()
                .zip(&basis_traces)
                .map(|(&ci, &ti)| u64::from(ci) * u64::from(ti))
                .sum();
            (s % u64::from(p)) as u32
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_modulus_convention() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.q(), 5);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn f4_modulus_is_x2_x_1() {
        // exhaustive: X^2, X^2+1, X^2+X have roots over F_2
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn f8_takes_smallest_irreducible() {
        let f = make_field(2, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::CompositeModulus(4));
        assert!(matches!(make_field(2, 21), Err(Error::SizeExceeded(_))));
        assert!(matches!(make_field(1031, 2), Err(Error::SizeExceeded(_))));
        assert!(make_field(2, 20).is_ok());
    }

    #[test]
    fn small_examples() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.inv(Elem(2)).unwrap(), Elem(3));
        assert_eq!(f5.inv(Elem(0)), Err(Error::ZeroInverse));
        let f4 = make_field(2, 2).unwrap();
        for g in f4.units() {
            assert_eq!(f4.pow(g, 3), Elem::ONE);
            assert_eq!(f4.mul(g, Elem::ONE), g);
        }
    }

    #[test]
    fn trace_examples() {
        for (p, n) in [(2, 2), (3, 3), (5, 2), (7, 1)] {
            let f = make_field(p, n).unwrap();
            assert_eq!(f.trace(Elem::ONE), n % p as u32);
            assert_eq!(f.trace(Elem::ZERO), 0);
        }
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.trace(Elem(2)), 1);
        assert_eq!(f4.trace(Elem(3)), 1);
    }

    #[test]
    fn psi_examples() {
        let f5 = make_field(5, 1).unwrap();
        assert!((f5.psi(Elem::ZERO) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let t = 2.0 * std::f64::consts::PI / 5.0;
        assert!((f5.psi(Elem::ONE) - Complex64::new(t.cos(), t.sin())).norm() < 1e-15);
    }

    #[test]
    fn legendre_examples() {
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(f7.legendre(Elem(0)).unwrap(), 0);
        assert_eq!(f7.legendre(Elem(3)).unwrap(), -1);
        assert_eq!(f7.legendre(Elem(2)).unwrap(), 1);
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(f9.legendre(Elem(1)), Err(Error::NotPrimeField));
    }

    #[test]
    fn enumeration_order() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.elements().collect::<Vec<_>>(), vec![Elem(0), Elem(1), Elem(2)]);
        let f4 = make_field(2, 2).unwrap();
        let coeffs: Vec<_> = f4.elements().map(|x| f4.coeffs(x)).collect();
        assert_eq!(coeffs, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(make_field(3, 3).unwrap().elements().len(), 27);
    }

    #[test]
    fn int_embedding_round_trip() {
        let f = make_field(13, 1).unwrap();
        assert_eq!(f.to_int(Elem(0)).unwrap(), 0);
        assert_eq!(f.to_int(Elem(12)).unwrap(), 12);
        for k in 0..13 {
            assert_eq!(f.to_int(f.from_int(k)).unwrap() as i64, k);
        }
        assert_eq!(f.from_int(-1), Elem(12));
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(f9.to_int(Elem(4)), Err(Error::NotPrimeField));
    }

    #[test]
    fn mismatched_fields_rejected() {
        let f5 = make_field(5, 1).unwrap();
        let f7 = make_field(7, 1).unwrap();
        let a = f5.wrap(Elem(2));
        let b = f7.wrap(Elem(2));
        assert_eq!(a.add(&b).unwrap_err(), Error::FieldMismatch);
        assert_eq!(a.mul(&a).unwrap().elem(), Elem(4));
        assert_eq!(a.inv().unwrap().elem(), Elem(3));
    }

    #[test]
    fn trace_is_linear_and_frobenius_invariant() {
        for (p, n) in [(2, 2), (2, 3), (2, 6), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let f = make_field(p, n).unwrap();
            for x in f.elements() {
                assert_eq!(f.trace(f.pow(x, p)), f.trace(x));
                for y in f.elements() {
                    let lhs = f.trace(f.add(x, y));
                    assert_eq!(lhs, (f.trace(x) + f.trace(y)) % f.p());
                }
            }
        }
    }

    #[test]
    fn characters_are_orthogonal() {
        for (p, n) in [(2, 5), (3, 4), (5, 3), (31, 2), (1021, 1)] {
            let f = make_field(p, n).unwrap();
            for a in f.units().take(40) {
                let s: Complex64 = f.elements().map(|x| f.psi(f.mul(a, x))).sum();
                assert!(s.norm() <= 1e-9, "{} a={a}: {s}", f.label());
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, n) in [(2, 3), (3, 2), (5, 1)] {
            let f = make_field(p, n).unwrap();
            for x in f.elements() {
                assert_eq!(f.add(x, f.neg(x)), Elem::ZERO);
                if !x.is_zero() {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), Elem::ONE);
                }
                for y in f.elements() {
                    for z in f.elements() {
                        assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                        assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                    }
                }
            }
        }
    }
}
