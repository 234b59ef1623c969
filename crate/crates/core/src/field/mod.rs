//! Finite fields `F_q` and `F_{q^m}` with explicit Frobenius powers.
//!
//! Field objects carry all context (moduli, tables); elements are plain
//! values. Every operation goes through a field handle, in the style of
//! `field.mul(&a, &b)`. Handles are cheap to clone.

mod base;
mod binary;
mod generic;
mod spec;

use std::cmp::Ordering;
use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use thiserror::Error;

pub use base::BaseField;
pub use binary::BinaryField;
pub use generic::GenericField;
pub use spec::{FieldSpec, BINARY_MAX_DEGREE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid extension degree: {0}")]
    InvalidDegree(String),
    #[error("modulus is reducible: {0:?}")]
    ReducibleModulus(Vec<u32>),
    #[error("malformed modulus: {0}")]
    MalformedModulus(String),
    #[error("field too large: {0}")]
    TooLarge(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no element satisfies the sampling constraint: {0}")]
    EmptySubset(String),
    #[error("malformed element: {0}")]
    MalformedElement(String),
}

/// Arithmetic shared by `F_q` and `F_{q^m}`; enough for Gaussian elimination
/// and univariate polynomials.
pub trait FieldOps: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        let b_inv = self.inv(b).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(a, &b_inv))
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `dst[i] += c * src[i]`
    fn axpy(&self, dst: &mut [Self::Elem], c: &Self::Elem, src: &[Self::Elem]) {
        if self.is_zero(c) {
            return;
        }
        for (d, s) in dst.iter_mut().zip(src) {
            if !self.is_zero(s) {
                *d = self.add(d, &self.mul(c, s));
            }
        }
    }

    fn scale(&self, row: &mut [Self::Elem], c: &Self::Elem) {
        for x in row.iter_mut() {
            *x = self.mul(x, c);
        }
    }
}

/// `F_{q^m}` as a degree-`m` extension of a small base field `F_q`.
pub trait ExtField: FieldOps {
    fn spec(&self) -> &FieldSpec;
    fn base(&self) -> &BaseField;

    /// Extension degree `m`.
    fn degree(&self) -> usize {
        self.spec().m
    }

    fn q(&self) -> u32 {
        self.base().order()
    }

    /// `x^{q^s}`, with `s` taken mod `m` (negative `s` is the inverse map).
    fn frobenius(&self, x: &Self::Elem, s: i64) -> Self::Elem;

    /// Coordinates over `F_q` in the power basis of the top modulus.
    fn coords(&self, x: &Self::Elem) -> Vec<u32>;
    fn from_coords(&self, coords: &[u32]) -> Self::Elem;

    fn from_base(&self, c: u32) -> Self::Elem {
        let mut coords = vec![0; self.degree()];
        coords[0] = c;
        self.from_coords(&coords)
    }

    /// The class of `x` in `F_q[x]/(top_modulus)`.
    fn generator(&self) -> Self::Elem {
        let mut coords = vec![0; self.degree()];
        if self.degree() == 1 {
            // x = -c0 when the modulus is x + c0
            let c0 = self.spec().top_modulus[0];
            coords[0] = self.base().neg(&c0);
        } else {
            coords[1] = 1;
        }
        self.from_coords(&coords)
    }

    fn in_base_field(&self, x: &Self::Elem) -> bool {
        self.coords(x)[1..].iter().all(|&c| c == 0)
    }

    /// True iff `x` lies in `F_{q^d}` for a proper divisor `d` of `m`.
    fn in_proper_subfield(&self, x: &Self::Elem) -> bool {
        let m = self.degree();
        (1..m).filter(|d| m % d == 0).any(|d| self.frobenius(x, d as i64) == *x)
    }

    /// Total order by coefficient encoding (highest coordinate first).
    fn cmp_elems(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering {
        let (ca, cb) = (self.coords(a), self.coords(b));
        ca.iter().rev().cmp(cb.iter().rev())
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        let q = self.q();
        let coords: Vec<u32> = (0..self.degree()).map(|_| rng.gen_range(0..q)).collect();
        self.from_coords(&coords)
    }

    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    /// Uniform over elements lying in no proper subfield of `F_{q^m}`.
    fn random_outside_subfields<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<Self::Elem, FieldError> {
        if self.degree() < 2 {
            return Err(FieldError::EmptySubset(
                "m = 1 has no element outside F_q".into(),
            ));
        }
        loop {
            let x = self.random(rng);
            if !self.in_proper_subfield(&x) {
                return Ok(x);
            }
        }
    }
}

/// Runtime choice between the bit-packed binary field and the generic one.
#[derive(Clone, Debug)]
pub enum AnyField {
    Binary(BinaryField),
    Generic(GenericField),
}

impl AnyField {
    /// Picks the bit-packed representation whenever `q = 2` and `m` fits.
    pub fn new(spec: FieldSpec) -> Result<Self, FieldError> {
        if spec.p == 2 && spec.e == 1 && spec.m <= BINARY_MAX_DEGREE {
            Ok(AnyField::Binary(BinaryField::new(spec)?))
        } else {
            Ok(AnyField::Generic(GenericField::new(spec)?))
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        match self {
            AnyField::Binary(f) => f.spec(),
            AnyField::Generic(f) => f.spec(),
        }
    }
}

/// Runs `$body` with `$f` bound to the concrete field inside an [`AnyField`].
#[macro_export]
macro_rules! with_field {
    ($any:expr, |$f:ident| $body:expr) => {
        match $any {
            $crate::field::AnyField::Binary($f) => $body,
            $crate::field::AnyField::Generic($f) => $body,
        }
    };
}

/// Builds a field descriptor; omitted moduli default to the least
/// irreducible polynomial in lexicographic order.
pub fn make_field(
    p: u32,
    e: u32,
    m: usize,
    base_modulus: Option<Vec<u32>>,
    top_modulus: Option<Vec<u32>>,
) -> Result<FieldSpec, FieldError> {
    FieldSpec::new(p, e, m, base_modulus, top_modulus)
}

pub(crate) fn is_prime(n: u64) -> bool {
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

pub(crate) fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
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

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn gf(p: u32, m: usize, modulus: Vec<u32>) -> AnyField {
        AnyField::new(make_field(p, 1, m, None, Some(modulus)).unwrap()).unwrap()
    }

    #[test]
    fn gf8_alpha_cubed() {
        let AnyField::Binary(f) = gf(2, 3, vec![1, 1, 0, 1]) else { panic!() };
        let a = f.generator();
        let a2 = f.mul(&a, &a);
        // x^3 = x + 1
        assert_eq!(f.mul(&a, &a2), f.from_coords(&[1, 1, 0]));
    }

    #[test]
    fn gf4_char_two() {
        let AnyField::Binary(f) = gf(2, 2, vec![1, 1, 1]) else { panic!() };
        let w = f.generator();
        assert!(f.is_zero(&f.add(&w, &w)));
    }

    #[test]
    fn reducible_modulus_rejected() {
        let err = make_field(2, 1, 3, None, Some(vec![1, 1, 1, 1])).unwrap_err();
        assert!(matches!(err, FieldError::ReducibleModulus(_)));
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(make_field(4, 1, 3, None, None), Err(FieldError::NotPrime(4)));
    }

    #[test]
    fn default_moduli_are_least_irreducible() {
        assert_eq!(make_field(2, 1, 3, None, None).unwrap().top_modulus, vec![1, 1, 0, 1]);
        assert_eq!(make_field(2, 1, 4, None, None).unwrap().top_modulus, vec![1, 1, 0, 0, 1]);
        // x^2 + 1 over F_3 is irreducible (-1 is not a square mod 3)
        assert_eq!(make_field(3, 1, 2, None, None).unwrap().top_modulus, vec![1, 0, 1]);
    }

    #[test]
    fn frobenius_examples_gf8() {
        let AnyField::Binary(f) = gf(2, 3, vec![1, 1, 0, 1]) else { panic!() };
        let a = f.generator();
        assert_eq!(f.frobenius(&a, 1), f.mul(&a, &a));
        assert_eq!(f.frobenius(&a, 0), a);
        let a4 = f.pow(&a, 4);
        assert_eq!(f.frobenius(&a, -1), a4);
        assert_eq!(f.mul(&a4, &a4), a);
        assert_eq!(f.frobenius(&a, 3), a);
    }

    #[test]
    fn subfield_membership_gf16() {
        let AnyField::Binary(f) = gf(2, 4, vec![1, 1, 0, 0, 1]) else { panic!() };
        let all: Vec<u128> = (0..16u32)
            .map(|i| f.from_coords(&[i & 1, (i >> 1) & 1, (i >> 2) & 1, (i >> 3) & 1]))
            .collect();
        let fixed_by_x4: Vec<_> = all.iter().filter(|x| f.pow(x, 4) == **x).collect();
        assert_eq!(fixed_by_x4.len(), 4);
        for x in &all {
            let in_f4 = f.pow(x, 4) == *x;
            assert_eq!(f.in_proper_subfield(x), in_f4);
        }
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = f.random_outside_subfields(&mut rng).unwrap();
            assert!(f.pow(&x, 4) != x);
        }
    }

    #[test]
    fn subfield_membership_gf8() {
        let AnyField::Binary(f) = gf(2, 3, vec![1, 1, 0, 1]) else { panic!() };
        assert!(!f.in_proper_subfield(&f.generator()));
        assert!(f.in_proper_subfield(&f.one()));
        assert!(f.in_proper_subfield(&f.zero()));
    }

    #[test]
    fn random_outside_subfields_needs_m_at_least_two() {
        let AnyField::Binary(f) = gf(2, 1, vec![0, 1]) else { panic!() };
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        assert!(f.random_outside_subfields(&mut rng).is_err());
    }

    #[test]
    fn seeded_sampling_is_deterministic() {
        let AnyField::Binary(f) = gf(2, 4, vec![1, 1, 0, 0, 1]) else { panic!() };
        let x = f.random(&mut ChaCha20Rng::seed_from_u64(0));
        let y = f.random(&mut ChaCha20Rng::seed_from_u64(0));
        assert_eq!(x, y);
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        assert!((0..10_000).all(|_| !f.is_zero(&f.random_nonzero(&mut rng))));
    }
}
