//! Arithmetic in small finite fields GF(p^e).
//!
//! Elements are represented by their base-`p` integer code: the element with
//! coefficient vector `(c0, c1, ..., c_{e-1})` (constant term first) relative
//! to the power basis of a monic irreducible modulus has code
//! `c0 + c1*p + ... + c_{e-1}*p^{e-1}`. Codes double as the canonical
//! on-disk encoding and as hash keys. Because the field order is capped
//! (default 16), every operation is a table lookup after construction.

use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Default cap on the field order `q = p^e`.
pub const DEFAULT_ORDER_CAP: u16 = 16;

/// Shared handle to a field; matrices and classes clone this freely.
pub type Field = Arc<FieldSpec>;

/// Constructs GF(p^e) with the canonical modulus and wraps it for sharing.
pub fn field(p: u16, e: u32) -> Result<Field, FieldError> {
    FieldSpec::new(p, e).map(Arc::new)
}

/// Errors raised while constructing or using a field.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u16),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {q} exceeds the cap {cap}")]
    FieldTooLarge { q: u64, cap: u16 },
    #[error("modulus has degree {got}, expected {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("modulus must be monic")]
    NotMonic,
    #[error("modulus coefficient {0} is not reduced mod p")]
    CoefficientOutOfRange(u8),
    #[error("modulus is reducible over GF(p)")]
    ReduciblePolynomial,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element code {code} out of range for a field of order {q}")]
    CodeOutOfRange { code: u16, q: u16 },
}

/// A field element, stored as its base-`p` integer code.
///
/// An `Elem` is only meaningful relative to the [`FieldSpec`] that produced
/// it; mixing elements across fields is a logic error that the matrix layer
/// guards against at its own boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u8);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A concrete field GF(p^e) with precomputed operation tables.
///
/// ```
/// use cigraph::gf::FieldSpec;
///
/// let f4 = FieldSpec::new(2, 2).unwrap();
/// assert_eq!(f4.order(), 4);
/// assert_eq!(f4.modulus(), &[1, 1, 1]); // x^2 + x + 1, constant term first
/// let x = f4.elem(2).unwrap();
/// assert_eq!(f4.mul(x, x), f4.elem(3).unwrap()); // x^2 = x + 1
/// ```
#[derive(Clone)]
pub struct FieldSpec {
    p: u16,
    e: u32,
    q: u16,
    /// Monic modulus of degree `e`, constant term first (`e + 1` entries).
    poly: Vec<u8>,
    add: Vec<u8>,
    sub: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    primitive: Elem,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.poly == other.poly
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("poly", &self.poly)
            .finish()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.e)
        }
    }
}

impl FieldSpec {
    /// Builds GF(p^e) with the canonical modulus: the first irreducible monic
    /// polynomial of degree `e` in base-`p` code order of its lower
    /// coefficients. For `e = 1` the modulus is the placeholder `x`.
    pub fn new(p: u16, e: u32) -> Result<FieldSpec, FieldError> {
        Self::with_cap(p, e, None, DEFAULT_ORDER_CAP)
    }

    /// Builds GF(p^e) with an explicit monic modulus (constant term first).
    pub fn with_modulus(p: u16, e: u32, poly: &[u8]) -> Result<FieldSpec, FieldError> {
        Self::with_cap(p, e, Some(poly), DEFAULT_ORDER_CAP)
    }

    /// Full-control constructor with a caller-chosen order cap.
    pub fn with_cap(
        p: u16,
        e: u32,
        poly: Option<&[u8]>,
        cap: u16,
    ) -> Result<FieldSpec, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q > cap as u64 {
            return Err(FieldError::FieldTooLarge { q, cap });
        }
        let q = q as u16;
        let poly = match poly {
            Some(coeffs) => {
                if coeffs.len() != e as usize + 1 {
                    return Err(FieldError::DegreeMismatch {
                        expected: e as usize + 1,
                        got: coeffs.len(),
                    });
                }
                if coeffs[e as usize] != 1 {
                    return Err(FieldError::NotMonic);
                }
                if let Some(&c) = coeffs.iter().find(|&&c| c as u16 >= p) {
                    return Err(FieldError::CoefficientOutOfRange(c));
                }
                if e >= 2 && !is_irreducible(coeffs, p) {
                    return Err(FieldError::ReduciblePolynomial);
                }
                coeffs.to_vec()
            }
            None => canonical_modulus(p, e),
        };
        Ok(Self::build(p, e, q, poly))
    }

    fn build(p: u16, e: u32, q: u16, poly: Vec<u8>) -> FieldSpec {
        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut sub = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..q {
            let pa = decode(a, p, e);
            neg[a as usize] = encode(&poly_neg(&pa, p), p);
            for b in 0..q {
                let pb = decode(b, p, e);
                add[a as usize * qs + b as usize] = encode(&poly_add(&pa, &pb, p), p);
                sub[a as usize * qs + b as usize] =
                    encode(&poly_add(&pa, &poly_neg(&pb, p), p), p);
                mul[a as usize * qs + b as usize] =
                    encode(&poly_mul_mod(&pa, &pb, &poly, p), p);
            }
        }
        // Invert by exhaustive search; q is tiny.
        for a in 1..q {
            for b in 1..q {
                if mul[a as usize * qs + b as usize] == 1 {
                    inv[a as usize] = b as u8;
                    break;
                }
            }
        }
        // Smallest code with multiplicative order q - 1.
        let mut primitive = Elem(1);
        'search: for a in 1..q {
            let mut acc = 1u8;
            for step in 1..q {
                acc = mul[acc as usize * qs + a as usize];
                if acc == 1 {
                    if step == q - 1 {
                        primitive = Elem(a as u8);
                        break 'search;
                    }
                    break;
                }
            }
        }
        FieldSpec {
            p,
            e,
            q,
            poly,
            add,
            sub,
            mul,
            neg,
            inv,
            primitive,
        }
    }

    pub fn characteristic(&self) -> u16 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u16 {
        self.q
    }

    pub fn has_char_two(&self) -> bool {
        self.p == 2
    }

    /// The monic modulus, constant term first.
    pub fn modulus(&self) -> &[u8] {
        &self.poly
    }

    /// A fixed primitive element (smallest code generating the unit group).
    pub fn primitive(&self) -> Elem {
        self.primitive
    }

    /// Validates a code and wraps it.
    pub fn elem(&self, code: u16) -> Result<Elem, FieldError> {
        if code < self.q {
            Ok(Elem(code as u8))
        } else {
            Err(FieldError::CodeOutOfRange { code, q: self.q })
        }
    }

    /// All elements in code order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(|c| Elem(c as u8))
    }

    /// Coefficient vector of `a`, constant term first, length `e`.
    pub fn coeffs(&self, a: Elem) -> Vec<u8> {
        decode(a.0 as u16, self.p, self.e)
    }

    /// Element with the given coefficient vector (length `e`, reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u8]) -> Result<Elem, FieldError> {
        if coeffs.len() != self.e as usize {
            return Err(FieldError::DegreeMismatch {
                expected: self.e as usize,
                got: coeffs.len(),
            });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c as u16 >= self.p) {
            return Err(FieldError::CoefficientOutOfRange(c));
        }
        Ok(Elem(encode(coeffs, self.p)))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.sub[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.is_zero() {
            Err(FieldError::ZeroInverse)
        } else {
            Ok(Elem(self.inv[a.0 as usize]))
        }
    }

    pub fn pow(&self, a: Elem, n: u64) -> Elem {
        let mut acc = Elem::ONE;
        for _ in 0..n {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// Raw multiplication table row stride, for hot loops in the matrix layer.
    #[inline]
    pub(crate) fn mul_table(&self) -> (&[u8], usize) {
        (&self.mul, self.q as usize)
    }

    #[inline]
    pub(crate) fn add_table(&self) -> (&[u8], usize) {
        (&self.add, self.q as usize)
    }
}

fn is_prime(p: u16) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p as u32 {
        if p as u32 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Base-`p` digits of `code`, constant term first, padded to length `e`.
fn decode(code: u16, p: u16, e: u32) -> Vec<u8> {
    let mut rest = code;
    (0..e)
        .map(|_| {
            let digit = (rest % p) as u8;
            rest /= p;
            digit
        })
        .collect()
}

fn encode(coeffs: &[u8], p: u16) -> u8 {
    let mut code = 0u16;
    for &c in coeffs.iter().rev() {
        code = code * p + c as u16;
    }
    code as u8
}

fn poly_add(a: &[u8], b: &[u8], p: u16) -> Vec<u8> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| {
            let x = *a.get(i).unwrap_or(&0) as u16;
            let y = *b.get(i).unwrap_or(&0) as u16;
            ((x + y) % p) as u8
        })
        .collect()
}

fn poly_neg(a: &[u8], p: u16) -> Vec<u8> {
    a.iter().map(|&c| ((p - c as u16) % p) as u8).collect()
}

fn poly_deg(a: &[u8]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Product of `a` and `b` reduced modulo the monic polynomial `m`.
fn poly_mul_mod(a: &[u8], b: &[u8], m: &[u8], p: u16) -> Vec<u8> {
    let e = m.len() - 1;
    let mut prod = vec![0u16; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u16 * y as u16) % p;
        }
    }
    // Reduce top coefficients using x^e = -(m_0 + m_1 x + ... + m_{e-1} x^{e-1}).
    for i in (e..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (j, &mj) in m.iter().enumerate().take(e) {
            let down = i - e + j;
            let sub = (c * mj as u16) % p;
            prod[down] = (prod[down] + p - sub) % p;
        }
    }
    prod.truncate(e.max(1));
    prod.resize(e.max(1), 0);
    prod.iter().map(|&c| c as u8).collect()
}

/// Remainder of `a` divided by monic `d` over GF(p).
fn poly_rem(a: &[u8], d: &[u8], p: u16) -> Vec<u8> {
    let dd = poly_deg(d).expect("divisor must be nonzero");
    let mut rem: Vec<u16> = a.iter().map(|&c| c as u16).collect();
    while let Some(rd) = rem.iter().rposition(|&c| c != 0) {
        if rd < dd {
            break;
        }
        let lead = rem[rd];
        for (j, &cj) in d.iter().enumerate().take(dd + 1) {
            let idx = rd - dd + j;
            let sub = (lead * cj as u16) % p;
            rem[idx] = (rem[idx] + p - sub) % p;
        }
    }
    rem.iter().map(|&c| c as u8).collect()
}

/// Exhaustive irreducibility test: no monic divisor of degree 1..=deg/2.
fn is_irreducible(poly: &[u8], p: u16) -> bool {
    let e = match poly_deg(poly) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for lower in 0..count {
            let mut divisor = decode_u64(lower, p, d);
            divisor.push(1); // monic of degree d
            let rem = poly_rem(poly, &divisor, p);
            if poly_deg(&rem).is_none() {
                return false;
            }
        }
    }
    true
}

fn decode_u64(code: u64, p: u16, len: usize) -> Vec<u8> {
    let mut rest = code;
    (0..len)
        .map(|_| {
            let digit = (rest % p as u64) as u8;
            rest /= p as u64;
            digit
        })
        .collect()
}

/// First irreducible monic polynomial of degree `e`, scanning the lower
/// coefficients in base-`p` code order. For `e = 1` this is `x`.
fn canonical_modulus(p: u16, e: u32) -> Vec<u8> {
    if e == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(e);
    for lower in 0..count {
        let mut candidate = decode_u64(lower, p, e as usize);
        candidate.push(1);
        if is_irreducible(&candidate, p) {
            return candidate;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

/// Remainder of `a` divided by `d`, both ascending coefficient vectors over
/// the field; `d` must be monic (explicit leading 1) and nonzero.
fn poly_rem_over(field: &FieldSpec, a: &[Elem], d: &[Elem]) -> Vec<Elem> {
    let dd = d
        .iter()
        .rposition(|c| !c.is_zero())
        .expect("divisor must be nonzero");
    debug_assert_eq!(d[dd], Elem::ONE, "divisor must be monic");
    let mut rem: Vec<Elem> = a.to_vec();
    while let Some(rd) = rem.iter().rposition(|c| !c.is_zero()) {
        if rd < dd {
            break;
        }
        let lead = rem[rd];
        for (j, &dj) in d.iter().enumerate().take(dd + 1) {
            let idx = rd - dd + j;
            rem[idx] = field.sub(rem[idx], field.mul(lead, dj));
        }
    }
    rem
}

/// The lexicographically first monic irreducible polynomial of the given
/// degree over the field whose constant term is nonzero, returned as the
/// ascending lower coefficients `c_0 .. c_{degree-1}` (the leading 1 is
/// implied).  Candidates are ordered by the integer `sum_i code(c_i) * q^i`,
/// so the result is deterministic; irreducibility is decided by trial
/// division against every monic polynomial of degree `1 ..= degree/2`.
/// Returns `None` only for degree zero.
pub fn monic_irreducible(field: &Field, degree: usize) -> Option<Vec<Elem>> {
    if degree == 0 {
        return None;
    }
    let q = field.order() as u64;
    let count = q
        .checked_pow(degree as u32)
        .expect("coefficient space must be enumerable");
    let decode = |code: u64| -> Vec<Elem> {
        let mut rest = code;
        (0..degree)
            .map(|_| {
                let digit = Elem((rest % q) as u8);
                rest /= q;
                digit
            })
            .collect()
    };
    'candidates: for code in 0..count {
        let lower = decode(code);
        if lower[0].is_zero() {
            continue;
        }
        let mut candidate = lower.clone();
        candidate.push(Elem::ONE);
        for d in 1..=degree / 2 {
            for divisor_code in 0..q.pow(d as u32) {
                let mut divisor = {
                    let mut rest = divisor_code;
                    (0..d)
                        .map(|_| {
                            let digit = Elem((rest % q) as u8);
                            rest /= q;
                            digit
                        })
                        .collect::<Vec<Elem>>()
                };
                divisor.push(Elem::ONE);
                let rem = poly_rem_over(field, &candidate, &divisor);
                if rem.iter().all(|c| c.is_zero()) {
                    continue 'candidates;
                }
            }
        }
        return Some(lower);
    }
    unreachable!("an irreducible polynomial with nonzero constant term exists for every degree >= 1")
}
