//! Dense univariate polynomials over any [`FieldOps`] field.

use crate::field::FieldOps;

/// Coefficients little-endian; no trailing zeros (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnivariatePoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> UnivariatePoly<E> {
    pub fn zero() -> Self {
        UnivariatePoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs<F: FieldOps<Elem = E>>(f: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| f.is_zero(c)) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn constant<F: FieldOps<Elem = E>>(f: &F, c: E) -> Self {
        Self::from_coeffs(f, vec![c])
    }

    /// `c * X^d`
    pub fn monomial<F: FieldOps<Elem = E>>(f: &F, c: E, d: usize) -> Self {
        let mut coeffs = vec![f.zero(); d + 1];
        coeffs[d] = c;
        Self::from_coeffs(f, coeffs)
    }

    pub fn x<F: FieldOps<Elem = E>>(f: &F) -> Self {
        Self::monomial(f, f.one(), 1)
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn add<F: FieldOps<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = f.zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                f.add(a, b)
            })
            .collect();
        Self::from_coeffs(f, coeffs)
    }

    pub fn sub<F: FieldOps<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.add(f, &other.neg(f))
    }

    pub fn neg<F: FieldOps<Elem = E>>(&self, f: &F) -> Self {
        UnivariatePoly { coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }

    pub fn scale<F: FieldOps<Elem = E>>(&self, f: &F, c: &E) -> Self {
        Self::from_coeffs(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn mul<F: FieldOps<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            f.axpy(&mut out[i..i + other.coeffs.len()], a, &other.coeffs);
        }
        Self::from_coeffs(f, out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem<F: FieldOps<Elem = E>>(&self, f: &F, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.leading().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if f.is_zero(&rem[i]) {
                continue;
            }
            let c = f.mul(&rem[i], &lead_inv);
            let neg_c = f.neg(&c);
            f.axpy(&mut rem[i - dd..=i], &neg_c, &divisor.coeffs);
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(f, quot), Self::from_coeffs(f, rem))
    }

    pub fn rem<F: FieldOps<Elem = E>>(&self, f: &F, divisor: &Self) -> Self {
        self.divrem(f, divisor).1
    }

    pub fn monic<F: FieldOps<Elem = E>>(&self, f: &F) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(f, &f.inv(l).unwrap()),
        }
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd<F: FieldOps<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Inverse of `self` modulo `modulus`, if coprime.
    pub fn inverse_mod<F: FieldOps<Elem = E>>(&self, f: &F, modulus: &Self) -> Option<Self> {
        let (mut r0, mut r1) = (modulus.clone(), self.rem(f, modulus));
        let (mut s0, mut s1) = (Self::zero(), Self::constant(f, f.one()));
        while !r1.is_zero() {
            let (qt, r2) = r0.divrem(f, &r1);
            let s2 = s0.sub(f, &qt.mul(f, &s1));
            r0 = r1;
            r1 = r2;
            s0 = s1;
            s1 = s2;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = f.inv(&r0.coeffs[0]).unwrap();
        Some(s0.scale(f, &c).rem(f, modulus))
    }

    pub fn mulmod<F: FieldOps<Elem = E>>(&self, f: &F, other: &Self, modulus: &Self) -> Self {
        self.mul(f, other).rem(f, modulus)
    }

    pub fn powmod<F: FieldOps<Elem = E>>(&self, f: &F, mut e: u128, modulus: &Self) -> Self {
        let mut base = self.rem(f, modulus);
        let mut acc = Self::constant(f, f.one()).rem(f, modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(f, &base, modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(f, &base, modulus);
            }
        }
        acc
    }

    pub fn eval<F: FieldOps<Elem = E>>(&self, f: &F, x: &E) -> E {
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::BaseField;

    type P = UnivariatePoly<u32>;

    #[test]
    fn divrem_reconstructs() {
        let f = BaseField::prime(5);
        let a = P::from_coeffs(&f, vec![3, 1, 4, 1, 2]);
        let b = P::from_coeffs(&f, vec![2, 0, 3]);
        let (q, r) = a.divrem(&f, &b);
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(q.mul(&f, &b).add(&f, &r), a);
    }

    #[test]
    fn gcd_and_inverse() {
        let f = BaseField::prime(2);
        // (x+1)(x^2+x+1) and (x+1)x
        let a = P::from_coeffs(&f, vec![1, 0, 0, 1]);
        let b = P::from_coeffs(&f, vec![0, 1, 1]);
        assert_eq!(a.gcd(&f, &b), P::from_coeffs(&f, vec![1, 1]));
        let m = P::from_coeffs(&f, vec![1, 1, 0, 1]);
        let x = P::x(&f);
        let xi = x.inverse_mod(&f, &m).unwrap();
        assert_eq!(x.mulmod(&f, &xi, &m), P::constant(&f, 1));
        assert!(b.inverse_mod(&f, &P::from_coeffs(&f, vec![0, 1])).is_none());
    }

    #[test]
    fn powmod_matches_repeated_multiplication() {
        let f = BaseField::prime(3);
        let m = P::from_coeffs(&f, vec![1, 2, 0, 1]);
        let g = P::from_coeffs(&f, vec![2, 1]);
        let mut acc = P::constant(&f, 1);
        for e in 0..20u128 {
            assert_eq!(g.powmod(&f, e, &m), acc);
            acc = acc.mulmod(&f, &g, &m);
        }
    }
}
