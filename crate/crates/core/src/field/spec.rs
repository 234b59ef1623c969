use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::{is_prime, prime_divisors, BaseField, FieldError, FieldOps};
use crate::poly::UnivariatePoly;

/// Largest `m` handled by the bit-packed `q = 2` representation.
pub const BINARY_MAX_DEGREE: usize = 127;

/// Descriptor of the tower `F_p ⊆ F_q ⊆ F_{q^m}`.
///
/// `base_modulus` has `F_p` coefficients and is absent when `e = 1`;
/// `top_modulus` has `F_q` coefficients in the integer encoding of
/// [`BaseField`]. Both are monic, little-endian (constant term first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_modulus: Option<Vec<u32>>,
    pub top_modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn new(
        p: u32,
        e: u32,
        m: usize,
        base_modulus: Option<Vec<u32>>,
        top_modulus: Option<Vec<u32>>,
    ) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if e == 0 || m == 0 {
            return Err(FieldError::InvalidDegree(format!("e = {e}, m = {m}")));
        }
        if e == 1 && p >= 1 << 31 {
            return Err(FieldError::TooLarge(format!("p = {p}")));
        }
        let base_modulus = match (e, base_modulus) {
            (1, None) => None,
            (1, Some(_)) => {
                return Err(FieldError::MalformedModulus(
                    "base_modulus given for a prime base field".into(),
                ))
            }
            (_, Some(bm)) => {
                let fp = BaseField::prime(p);
                check_monic(&bm, e as usize, p)?;
                if !is_irreducible(&fp, &bm) {
                    return Err(FieldError::ReducibleModulus(bm));
                }
                Some(bm)
            }
            (_, None) => Some(least_irreducible(&BaseField::prime(p), e as usize)),
        };
        let base = match &base_modulus {
            None => BaseField::prime(p),
            Some(bm) => BaseField::extension(p, e, bm)?,
        };
        let top_modulus = match top_modulus {
            Some(tm) => {
                check_monic(&tm, m, base.order())?;
                if !is_irreducible(&base, &tm) {
                    return Err(FieldError::ReducibleModulus(tm));
                }
                tm
            }
            None => cached_least_irreducible(&base, m),
        };
        Ok(FieldSpec { p, e, m, base_modulus, top_modulus })
    }

    /// Convenience for `q = 2`, default modulus.
    pub fn binary(m: usize) -> Result<Self, FieldError> {
        Self::new(2, 1, m, None, None)
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }

    /// Re-checks every invariant (used after deserialization).
    pub fn validate(&self) -> Result<(), FieldError> {
        let rebuilt = Self::new(
            self.p,
            self.e,
            self.m,
            self.base_modulus.clone(),
            Some(self.top_modulus.clone()),
        )?;
        debug_assert_eq!(&rebuilt, self);
        Ok(())
    }

    pub fn base_field(&self) -> Result<BaseField, FieldError> {
        match &self.base_modulus {
            None => Ok(BaseField::prime(self.p)),
            Some(bm) => BaseField::extension(self.p, self.e, bm),
        }
    }
}

fn check_monic(coeffs: &[u32], degree: usize, order: u32) -> Result<(), FieldError> {
    if coeffs.len() != degree + 1 {
        return Err(FieldError::MalformedModulus(format!(
            "expected {} coefficients, got {}",
            degree + 1,
            coeffs.len()
        )));
    }
    if coeffs[degree] != 1 {
        return Err(FieldError::MalformedModulus("modulus must be monic".into()));
    }
    if let Some(c) = coeffs.iter().find(|&&c| c >= order) {
        return Err(FieldError::MalformedModulus(format!("coefficient {c} out of range")));
    }
    Ok(())
}

/// Rabin's test: `f | X^{q^d} - X` for `d = deg f` and
/// `gcd(X^{q^{d/r}} - X, f) = 1` for each prime `r | d`.
pub(crate) fn is_irreducible(base: &BaseField, coeffs: &[u32]) -> bool {
    let f = UnivariatePoly::from_coeffs(base, coeffs.to_vec());
    let Some(d) = f.degree() else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    // cheap filter: roots in F_q
    if (0..base.order()).any(|a| base.is_zero(&f.eval(base, &a))) {
        return false;
    }
    let q = base.order() as u128;
    let x = UnivariatePoly::x(base);
    let checkpoints: Vec<usize> = prime_divisors(d).into_iter().map(|r| d / r).collect();
    let mut h = x.clone();
    for i in 1..=d {
        h = h.powmod(base, q, &f);
        if checkpoints.contains(&i) && h.sub(base, &x).gcd(base, &f).degree() != Some(0) {
            return false;
        }
    }
    h == x
}

fn least_irreducible(base: &BaseField, degree: usize) -> Vec<u32> {
    let q = base.order() as u64;
    let mut tail = vec![0u32; degree];
    loop {
        if degree == 1 || tail[0] != 0 {
            let mut candidate = tail.clone();
            candidate.push(1);
            if is_irreducible(base, &candidate) {
                return candidate;
            }
        }
        // odometer increment, constant term fastest
        for c in tail.iter_mut() {
            *c += 1;
            if (*c as u64) < q {
                break;
            }
            *c = 0;
        }
    }
}

fn cached_least_irreducible(base: &BaseField, degree: usize) -> Vec<u32> {
    type Key = (u32, u32, Option<Vec<u32>>, usize);
    static CACHE: OnceLock<Mutex<HashMap<Key, Vec<u32>>>> = OnceLock::new();
    let key = (base.characteristic(), base.degree(), base.modulus().map(<[u32]>::to_vec), degree);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let found = least_irreducible(base, degree);
    cache.lock().unwrap().insert(key, found.clone());
    found
}
