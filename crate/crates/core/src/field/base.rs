use std::sync::Arc;

use super::{FieldError, FieldOps};

/// Largest `q = p^e` supported when `e > 1` (log/exp tables).
const MAX_TABLE_ORDER: u64 = 1 << 16;

/// The small field `F_q`, `q = p^e`.
///
/// Elements are encoded as integers `sum c_i p^i` over the coefficients of
/// their residue polynomial (constant term first). For `e = 1` this is the
/// usual residue mod `p`; for `p = 2` addition is XOR.
#[derive(Clone, Debug)]
pub struct BaseField {
    inner: Arc<BaseInner>,
}

#[derive(Debug)]
struct BaseInner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl BaseField {
    pub fn prime(p: u32) -> Self {
        BaseField {
            inner: Arc::new(BaseInner {
                p,
                e: 1,
                q: p,
                modulus: None,
                exp: Vec::new(),
                log: Vec::new(),
            }),
        }
    }

    /// `F_{p^e}` from a monic irreducible `modulus` over `F_p` (length `e + 1`).
    /// The caller is responsible for irreducibility.
    pub(crate) fn extension(p: u32, e: u32, modulus: &[u32]) -> Result<Self, FieldError> {
        if e == 1 {
            return Ok(Self::prime(p));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_TABLE_ORDER).ok_or_else(|| {
            FieldError::TooLarge(format!("p^e = {p}^{e} exceeds {MAX_TABLE_ORDER}"))
        })? as u32;
        let mut inner = BaseInner {
            p,
            e,
            q,
            modulus: Some(modulus.to_vec()),
            exp: Vec::new(),
            log: Vec::new(),
        };
        let (exp, log) = build_tables(&inner).ok_or_else(|| {
            FieldError::ReducibleModulus(modulus.to_vec())
        })?;
        inner.exp = exp;
        inner.log = log;
        Ok(BaseField { inner: Arc::new(inner) })
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.e
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.inner.modulus.as_deref()
    }

    /// Little-endian `F_p` digits of an encoded element.
    pub fn digits(&self, mut a: u32) -> Vec<u32> {
        let p = self.inner.p;
        (0..self.inner.e)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        let p = self.inner.p;
        digits.iter().rev().fold(0, |acc, &d| acc * p + d % p)
    }

    fn digitwise(&self, a: u32, b: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
        let p = self.inner.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.inner.e {
            out += op(a % p, b % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        out
    }
}

fn slow_mul(inner: &BaseInner, a: u32, b: u32) -> u32 {
    let (p, e) = (inner.p as u64, inner.e as usize);
    let modulus = inner.modulus.as_ref().expect("extension modulus");
    let dig = |mut x: u32| -> Vec<u64> {
        (0..e)
            .map(|_| {
                let d = x as u64 % p;
                x /= p as u32;
                d
            })
            .collect()
    };
    let (da, db) = (dig(a), dig(b));
    let mut prod = vec![0u64; 2 * e - 1];
    for i in 0..e {
        for j in 0..e {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    for i in (e..2 * e - 1).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        for j in 0..e {
            let sub = c * modulus[j] as u64 % p;
            prod[i - e + j] = (prod[i - e + j] + p - sub) % p;
        }
        prod[i] = 0;
    }
    prod[..e].iter().rev().fold(0u32, |acc, &d| acc * p as u32 + d as u32)
}

/// Finds a primitive element; `None` if the multiplicative group is not cyclic
/// of order `q - 1`, which happens only for a reducible modulus.
fn build_tables(inner: &BaseInner) -> Option<(Vec<u32>, Vec<u32>)> {
    let q = inner.q as usize;
    for g in 2..q as u32 {
        let mut exp = Vec::with_capacity(q - 1);
        let mut x = 1u32;
        let mut ok = true;
        for i in 0..q - 1 {
            if x == 1 && i > 0 {
                ok = false;
                break;
            }
            exp.push(x);
            x = slow_mul(inner, x, g);
        }
        if ok && x == 1 {
            let mut log = vec![0u32; q];
            for (i, &v) in exp.iter().enumerate() {
                log[v as usize] = i as u32;
            }
            return Some((exp, log));
        }
    }
    None
}

impl FieldOps for BaseField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let p = self.inner.p;
        if p == 2 {
            a ^ b
        } else if self.inner.e == 1 {
            let s = a + b;
            if s >= p {
                s - p
            } else {
                s
            }
        } else {
            self.digitwise(*a, *b, |x, y| (x + y) % p)
        }
    }

    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add(a, &self.neg(b))
    }

    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        let p = self.inner.p;
        if p == 2 {
            *a
        } else if self.inner.e == 1 {
            if *a == 0 {
                0
            } else {
                p - a
            }
        } else {
            self.digitwise(*a, 0, |x, _| (p - x) % p)
        }
    }

    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if self.inner.e == 1 {
            ((*a as u64 * *b as u64) % self.inner.p as u64) as u32
        } else if *a == 0 || *b == 0 {
            0
        } else {
            let inner = &self.inner;
            let s = inner.log[*a as usize] + inner.log[*b as usize];
            inner.exp[(s % (inner.q - 1)) as usize]
        }
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        if self.inner.e == 1 {
            Some(self.pow(a, (self.inner.p - 2) as u128))
        } else {
            let inner = &self.inner;
            let l = inner.log[*a as usize];
            Some(inner.exp[((inner.q - 1 - l) % (inner.q - 1)) as usize])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_axioms() {
        // x^2 + 1 over F_3
        let f = BaseField::extension(3, 2, &[1, 0, 1]).unwrap();
        assert_eq!(f.order(), 9);
        for a in 0..9 {
            assert_eq!(f.add(&a, &f.neg(&a)), 0);
            if a != 0 {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
            }
            for b in 0..9 {
                assert_eq!(f.mul(&a, &b), slow_mul(&f.inner, a, b));
                assert_eq!(f.add(&a, &b), f.add(&b, &a));
            }
        }
        // x * x = -1 = 2
        assert_eq!(f.mul(&3, &3), 2);
    }

    #[test]
    fn f4_is_xor_additive() {
        let f = BaseField::extension(2, 2, &[1, 1, 1]).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(f.add(&a, &b), a ^ b);
            }
        }
        // w^2 = w + 1
        assert_eq!(f.mul(&2, &2), 3);
    }

    #[test]
    fn reducible_base_modulus_has_no_primitive_element() {
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(BaseField::extension(2, 2, &[1, 0, 1]).is_err());
    }

    #[test]
    fn prime_field_inverse() {
        let f = BaseField::prime(7);
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
        assert_eq!(f.inv(&0), None);
    }
}
