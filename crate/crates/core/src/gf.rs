//! Exact arithmetic in GF(p^a).
//!
//! An element is encoded as the integer `c_0 + c_1 p + ... + c_{a-1} p^{a-1}`
//! where `c_i` is the coefficient of `x^i` in its reduced representative
//! modulo the field's defining polynomial. This encoding is also what the
//! JSON outputs use for matrix entries.
//!
//! [`Field`] exposes raw `u32` arithmetic for the hot loops of the linear
//! algebra; [`FieldElement`] is the checked, self-describing value type.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field size.
pub const MAX_ORDER: u64 = 1 << 16;
/// Largest supported extension degree over the prime field.
pub const MAX_DEGREE: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("degree {0} outside the supported range 1..={max}", max = MAX_DEGREE)]
    DegreeOutOfRange(u32),
    #[error("field order {0} exceeds the supported bound 2^16")]
    OrderTooLarge(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("operands belong to different fields: GF({left}) and GF({right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element code {value} out of range for GF({q})")]
    OutOfRange { value: u64, q: u32 },
    #[error("embeddings are only supported from a prime field, got GF({0})")]
    UnsupportedTower(u32),
}

pub type Result<T> = std::result::Result<T, GfError>;

struct FieldInner {
    p: u32,
    a: u32,
    q: u32,
    /// Monic, little-endian, length `a + 1`.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for a fixed primitive element `g`.
    exp: Vec<u32>,
    /// `log[x]` for `x != 0`.
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    neg: Vec<u32>,
}

/// The finite field GF(p^a) with its canonical defining polynomial.
///
/// Cloning is cheap; two fields with the same `(p, a)` compare equal and
/// have identical tables.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.a == other.0.a
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.a.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.a)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^a` with `p` prime.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(GfError::NotPrimePower(q));
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut rest = q;
    let mut a = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        a += 1;
    }
    if rest != 1 {
        return Err(GfError::NotPrimePower(q));
    }
    Ok((p as u32, a))
}

// Dense polynomial helpers over GF(p), little-endian, used only while
// building a field.

fn poly_trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead_inv = inv_mod(den[dd], p) as u64;
    let p64 = p as u64;
    for top in (dd..r.len()).rev() {
        let c = r[top] as u64 * lead_inv % p64;
        if c == 0 {
            continue;
        }
        let shift = top - dd;
        for (i, &d) in den.iter().enumerate() {
            let sub = (c * d as u64 % p64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
    }
    r.truncate(dd.max(1));
    if r.is_empty() {
        r.push(0);
    }
    poly_trim(r)
}

fn inv_mod(x: u32, p: u32) -> u32 {
    pow_mod(x, p - 2, p)
}

fn pow_mod(x: u32, mut e: u32, p: u32) -> u32 {
    let (mut base, mut acc) = (x as u64 % p as u64, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            let mut div = vec![0u32; d + 1];
            let mut rest = k;
            for c in div.iter_mut().take(d) {
                *c = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            div[d] = 1;
            let r = poly_rem(poly, &div, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `a`, comparing coefficients from the
/// constant term upward.
fn canonical_modulus(p: u32, a: u32) -> Vec<u32> {
    let count = (p as u64).pow(a);
    for k in 0..count {
        // most significant digit of k is the constant term
        let mut coeffs = vec![0u32; a as usize + 1];
        let mut rest = k;
        for i in (0..a as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[a as usize] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits(x: u32, p: u32, a: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(a as usize);
    let mut rest = x;
    for _ in 0..a {
        out.push(rest % p);
        rest /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn slow_mul(x: u32, y: u32, p: u32, a: u32, modulus: &[u32]) -> u32 {
    let xd = digits(x, p, a);
    let yd = digits(y, p, a);
    let mut prod = vec![0u32; 2 * a as usize];
    for (i, &u) in xd.iter().enumerate() {
        for (j, &v) in yd.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + u as u64 * v as u64) % p as u64) as u32;
        }
    }
    let mut r = poly_rem(&poly_trim(prod), modulus, p);
    r.resize(a as usize, 0);
    undigits(&r, p)
}

impl Field {
    /// The canonical GF(p^a).
    pub fn new(p: u64, a: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if a == 0 || a > MAX_DEGREE {
            return Err(GfError::DegreeOutOfRange(a));
        }
        let q = p
            .checked_pow(a)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(GfError::OrderTooLarge(p.saturating_pow(a)))?;
        let (p, q) = (p as u32, q as u32);
        let modulus = canonical_modulus(p, a);

        let order = q - 1;
        let (mut exp, mut log) = (Vec::new(), vec![0u32; q as usize]);
        for g in 1..q {
            exp.clear();
            let mut x = 1u32;
            let mut ok = true;
            for i in 0..order {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = slow_mul(x, g, p, a, &modulus);
            }
            if ok && x == 1 {
                break;
            }
        }
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }

        let digit_add = |x: u32, y: u32| {
            let s: Vec<u32> = digits(x, p, a)
                .into_iter()
                .zip(digits(y, p, a))
                .map(|(u, v)| (u + v) % p)
                .collect();
            undigits(&s, p)
        };
        let neg = (0..q)
            .map(|x| {
                let d: Vec<u32> = digits(x, p, a).into_iter().map(|u| (p - u) % p).collect();
                undigits(&d, p)
            })
            .collect();
        let add_table = (q <= 256).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for x in 0..q {
                for y in 0..q {
                    t[(x * q + y) as usize] = digit_add(x, y);
                }
            }
            t
        });

        Ok(Field(Arc::new(FieldInner {
            p,
            a,
            q,
            modulus,
            exp,
            log,
            add_table,
            neg,
        })))
    }

    /// GF(q) for a prime power `q`.
    pub fn with_order(q: u64) -> Result<Field> {
        if q > MAX_ORDER {
            return Err(GfError::OrderTooLarge(q));
        }
        let (p, a) = prime_power(q)?;
        Field::new(p as u64, a)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.a
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.a == 1
    }

    /// Defining polynomial, little-endian and monic.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        let f = &self.0;
        match &f.add_table {
            Some(t) => t[(x * f.q + y) as usize],
            None if f.a == 1 => (x + y) % f.p,
            None => {
                let s: Vec<u32> = digits(x, f.p, f.a)
                    .into_iter()
                    .zip(digits(y, f.p, f.a))
                    .map(|(u, v)| (u + v) % f.p)
                    .collect();
                undigits(&s, f.p)
            }
        }
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        self.0.neg[x as usize]
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let f = &self.0;
        let order = f.q - 1;
        f.exp[((f.log[x as usize] + f.log[y as usize]) % order) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, x: u32) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let f = &self.0;
        let order = f.q - 1;
        Some(f.exp[((order - f.log[x as usize]) % order) as usize])
    }

    /// `x^e`; negative exponents invert first. `0^0 = 1`.
    pub fn pow(&self, x: u32, e: i64) -> Option<u32> {
        if e == 0 {
            return Some(1);
        }
        if x == 0 {
            return if e > 0 { Some(0) } else { None };
        }
        let f = &self.0;
        let order = (f.q - 1) as i64;
        let l = (f.log[x as usize] as i64 * e).rem_euclid(order);
        Some(f.exp[l as usize])
    }

    /// Frobenius `x -> x^p`.
    pub fn frobenius(&self, x: u32) -> u32 {
        self.pow(x, self.0.p as i64).unwrap()
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value >= self.0.q {
            return Err(GfError::OutOfRange {
                value: value as u64,
                q: self.0.q,
            });
        }
        Ok(FieldElement {
            field: self.clone(),
            value,
        })
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<FieldElement> {
        let f = &self.0;
        if coeffs.len() != f.a as usize || coeffs.iter().any(|&c| c >= f.p) {
            return Err(GfError::OutOfRange {
                value: undigits(coeffs, f.p.max(2)) as u64,
                q: f.q,
            });
        }
        self.element(undigits(coeffs, f.p))
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: 1,
        }
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(move |value| FieldElement {
            field: self.clone(),
            value,
        })
    }

    /// The class of `x` modulo the defining polynomial. For a prime field the
    /// defining polynomial is `x` itself, so this is zero.
    pub fn root(&self) -> FieldElement {
        let value = if self.0.a > 1 { self.0.p } else { 0 };
        FieldElement {
            field: self.clone(),
            value,
        }
    }
}

/// A checked element of a specific [`Field`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈{}", self.value, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Integer code of the element.
    pub fn value(&self) -> u32 {
        self.value
    }

    /// Little-endian coefficients in powers of the modulus root.
    pub fn coefficients(&self) -> Vec<u32> {
        digits(self.value, self.field.0.p, self.field.0.a)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch {
                left: self.field.order(),
                right: other.field.order(),
            });
        }
        Ok(())
    }

    fn with(&self, value: u32) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        let inv = other.inv()?;
        Ok(self.with(self.field.mul(self.value, inv.value)))
    }

    pub fn neg(&self) -> FieldElement {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        self.field
            .inv(self.value)
            .map(|v| self.with(v))
            .ok_or(GfError::DivisionByZero)
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        self.field
            .pow(self.value, e)
            .map(|v| self.with(v))
            .ok_or(GfError::DivisionByZero)
    }

    pub fn frobenius(&self) -> FieldElement {
        self.with(self.field.frobenius(self.value))
    }
}

/// The canonical unital map GF(p) -> GF(p^m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldEmbedding {
    source: Field,
    target: Field,
}

impl FieldEmbedding {
    pub fn new(source: &Field, target: &Field) -> Result<FieldEmbedding> {
        if !source.is_prime_field() {
            return Err(GfError::UnsupportedTower(source.order()));
        }
        if source.characteristic() != target.characteristic() {
            return Err(GfError::FieldMismatch {
                left: source.order(),
                right: target.order(),
            });
        }
        Ok(FieldEmbedding {
            source: source.clone(),
            target: target.clone(),
        })
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    /// Image of the source generator `1`.
    pub fn generator_image(&self) -> FieldElement {
        self.target.one()
    }

    /// Raw code map; prime-field codes are their own constant coefficient.
    #[inline]
    pub fn embed_raw(&self, x: u32) -> u32 {
        x
    }

    pub fn embed(&self, e: &FieldElement) -> Result<FieldElement> {
        if e.field != self.source {
            return Err(GfError::FieldMismatch {
                left: e.field.order(),
                right: self.source.order(),
            });
        }
        self.target.element(self.embed_raw(e.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Schoolbook product of two field codes, reduced by the modulus.
    fn oracle_mul(f: &Field, x: u32, y: u32) -> u32 {
        slow_mul(x, y, f.characteristic(), f.degree(), f.modulus())
    }

    #[test]
    fn prime_field_and_composite_rejection() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert!(f.is_prime_field());
        assert_eq!(Field::new(4, 1).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(Field::new(2, 0).unwrap_err(), GfError::DegreeOutOfRange(0));
        assert_eq!(Field::new(2, 9).unwrap_err(), GfError::DegreeOutOfRange(9));
        assert!(matches!(Field::new(257, 2), Err(GfError::OrderTooLarge(_))));
    }

    #[test]
    fn gf4_modulus_is_x2_x_1() {
        // exhaustive over the four monic quadratics: only x^2+x+1 has no root
        let irreducible: Vec<Vec<u32>> = (0..4)
            .map(|k| vec![k % 2, k / 2, 1])
            .filter(|m| (0..2).all(|x| (m[0] + m[1] * x + x * x) % 2 != 0))
            .collect();
        assert_eq!(irreducible, vec![vec![1, 1, 1]]);
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        // constant term compared first: x^3+x^2+1 precedes x^3+x+1
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn canonical_choice_is_idempotent() {
        let a = Field::new(3, 3).unwrap();
        let b = Field::with_order(27).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.modulus(), b.modulus());
    }

    #[test]
    fn small_arithmetic_examples() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.one().add(&f2.one()).unwrap(), f2.zero());

        let f4 = Field::new(2, 2).unwrap();
        let w = f4.root();
        assert_eq!(w.coefficients(), vec![0, 1]);
        let w2 = w.mul(&w).unwrap();
        assert_eq!(w2, w.add(&f4.one()).unwrap());

        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(f5.element(2).unwrap().inv().unwrap().value(), 3);
        assert_eq!(f5.zero().inv().unwrap_err(), GfError::DivisionByZero);
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let f2 = Field::new(2, 1).unwrap();
        let f4 = Field::new(2, 2).unwrap();
        assert!(matches!(
            f2.one().add(&f4.one()),
            Err(GfError::FieldMismatch { left: 2, right: 4 })
        ));
    }

    #[test]
    fn table_mul_matches_polynomial_oracle() {
        for q in [4u64, 8, 9, 16, 25, 27, 32, 49, 64] {
            let f = Field::with_order(q).unwrap();
            for x in 0..f.order() {
                for y in 0..f.order() {
                    assert_eq!(f.mul(x, y), oracle_mul(&f, x, y), "q={q} {x}*{y}");
                }
            }
        }
    }

    #[test]
    fn fermat_exhaustive() {
        for q in 2..=64u64 {
            let Ok(f) = Field::with_order(q) else {
                continue;
            };
            for x in 1..f.order() {
                assert_eq!(f.pow(x, q as i64 - 1), Some(1));
                assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Field::with_order(q).unwrap();
            for x in 0..f.order() {
                for y in 0..f.order() {
                    let lhs = f.frobenius(f.add(x, y));
                    let rhs = f.add(f.frobenius(x), f.frobenius(y));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn large_field_addition_without_table() {
        let f = Field::new(3, 6).unwrap();
        assert_eq!(f.add(1, 2), 0);
        assert_eq!(f.add(3 + 1, 3 + 1), 6 + 2);
        let g = Field::new(251, 2).unwrap();
        assert_eq!(g.add(250, 1), 0);
        assert_eq!(g.sub(0, 1), 250);
    }

    #[test]
    fn embedding_examples() {
        let f2 = Field::new(2, 1).unwrap();
        let f3 = Field::new(3, 1).unwrap();
        let f4 = Field::new(2, 2).unwrap();
        let f8 = Field::new(2, 3).unwrap();
        let f9 = Field::new(3, 2).unwrap();
        let e = FieldEmbedding::new(&f2, &f4).unwrap();
        assert_eq!(e.embed(&f2.one()).unwrap(), f4.one());
        let e = FieldEmbedding::new(&f3, &f9).unwrap();
        assert_eq!(
            e.embed(&f3.element(2).unwrap()).unwrap(),
            f9.element(2).unwrap()
        );
        let e = FieldEmbedding::new(&f2, &f8).unwrap();
        assert_eq!(e.embed(&f2.zero()).unwrap(), f8.zero());
        assert_eq!(
            FieldEmbedding::new(&f4, &Field::new(2, 4).unwrap()).unwrap_err(),
            GfError::UnsupportedTower(4)
        );
        assert!(e.embed(&f4.one()).is_err());
    }

    #[test]
    fn embedding_is_injective_homomorphism() {
        for (p, m) in [(2u64, 2u32), (2, 3), (3, 2), (5, 2), (7, 2)] {
            let src = Field::new(p, 1).unwrap();
            let dst = Field::new(p, m).unwrap();
            let e = FieldEmbedding::new(&src, &dst).unwrap();
            let mut seen = std::collections::HashSet::new();
            for x in src.elements() {
                let ex = e.embed(&x).unwrap();
                assert!(seen.insert(ex.value()));
                for y in src.elements() {
                    let ey = e.embed(&y).unwrap();
                    assert_eq!(e.embed(&x.add(&y).unwrap()).unwrap(), ex.add(&ey).unwrap());
                    assert_eq!(e.embed(&x.mul(&y).unwrap()).unwrap(), ex.mul(&ey).unwrap());
                }
            }
        }
    }
}
