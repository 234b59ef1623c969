use std::sync::Arc;

use super::{BaseField, ExtField, FieldError, FieldOps, FieldSpec};
use crate::poly::UnivariatePoly;

/// `F_{q^m}` over any supported `F_q`; elements are length-`m` coefficient
/// vectors in the power basis of the top modulus.
#[derive(Clone, Debug)]
pub struct GenericField {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    spec: FieldSpec,
    base: BaseField,
    m: usize,
    modulus: UnivariatePoly<u32>,
    /// Columns `(x^i)^q` of the `q`-power map; only for `m > 8`.
    frob: Vec<Vec<u32>>,
}

impl GenericField {
    pub fn new(spec: FieldSpec) -> Result<Self, FieldError> {
        let base = spec.base_field()?;
        let modulus = UnivariatePoly::from_coeffs(&base, spec.top_modulus.clone());
        if modulus.degree() != Some(spec.m) {
            return Err(FieldError::MalformedModulus("degree mismatch".into()));
        }
        let m = spec.m;
        let field = GenericField {
            inner: Arc::new(Inner { spec, base, m, modulus, frob: Vec::new() }),
        };
        if m <= 8 {
            return Ok(field);
        }
        let q = field.inner.base.order() as u128;
        let frob = (0..m)
            .map(|i| {
                let mut unit = vec![0u32; m];
                unit[i] = 1;
                field.pow(&unit, q)
            })
            .collect();
        let mut inner = Arc::into_inner(field.inner).expect("unshared");
        inner.frob = frob;
        Ok(GenericField { inner: Arc::new(inner) })
    }

    fn to_poly(&self, x: &[u32]) -> UnivariatePoly<u32> {
        UnivariatePoly::from_coeffs(&self.inner.base, x.to_vec())
    }

    fn from_poly(&self, p: &UnivariatePoly<u32>) -> Vec<u32> {
        let mut out = p.coeffs().to_vec();
        out.resize(self.inner.m, 0);
        out
    }

    fn frobenius_once(&self, x: &[u32]) -> Vec<u32> {
        let inner = &*self.inner;
        if inner.frob.is_empty() {
            return self.pow(&x.to_vec(), inner.base.order() as u128);
        }
        let mut out = vec![0u32; inner.m];
        for (c, col) in x.iter().zip(&inner.frob) {
            inner.base.axpy(&mut out, c, col);
        }
        out
    }
}

impl FieldOps for GenericField {
    type Elem = Vec<u32>;

    fn zero(&self) -> Vec<u32> {
        vec![0; self.inner.m]
    }

    fn one(&self) -> Vec<u32> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    fn is_zero(&self, a: &Vec<u32>) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let base = &self.inner.base;
        a.iter().zip(b).map(|(x, y)| base.add(x, y)).collect()
    }

    fn sub(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let base = &self.inner.base;
        a.iter().zip(b).map(|(x, y)| base.sub(x, y)).collect()
    }

    fn neg(&self, a: &Vec<u32>) -> Vec<u32> {
        let base = &self.inner.base;
        a.iter().map(|x| base.neg(x)).collect()
    }

    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let inner = &*self.inner;
        let (base, m) = (&inner.base, inner.m);
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, x) in a.iter().enumerate() {
            if *x != 0 {
                base.axpy(&mut prod[i..i + m], x, b);
            }
        }
        let modulus = inner.modulus.coeffs();
        for i in (m..2 * m - 1).rev() {
            let c = prod[i];
            if c != 0 {
                let neg = base.neg(&c);
                base.axpy(&mut prod[i - m..i], &neg, &modulus[..m]);
                prod[i] = 0;
            }
        }
        prod.truncate(m);
        prod
    }

    fn inv(&self, a: &Vec<u32>) -> Option<Vec<u32>> {
        if self.is_zero(a) {
            return None;
        }
        let p = self.to_poly(a).inverse_mod(&self.inner.base, &self.inner.modulus)?;
        Some(self.from_poly(&p))
    }
}

impl ExtField for GenericField {
    fn spec(&self) -> &FieldSpec {
        &self.inner.spec
    }

    fn base(&self) -> &BaseField {
        &self.inner.base
    }

    fn degree(&self) -> usize {
        self.inner.m
    }

    fn frobenius(&self, x: &Vec<u32>, s: i64) -> Vec<u32> {
        let s = s.rem_euclid(self.inner.m as i64) as usize;
        (0..s).fold(x.clone(), |acc, _| self.frobenius_once(&acc))
    }

    fn coords(&self, x: &Vec<u32>) -> Vec<u32> {
        x.clone()
    }

    fn from_coords(&self, coords: &[u32]) -> Vec<u32> {
        let q = self.inner.base.order();
        let mut v: Vec<u32> = coords.iter().map(|&c| c % q).collect();
        v.resize(self.inner.m, 0);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn gf27_exhaustive_order() {
        let f = GenericField::new(FieldSpec::new(3, 1, 3, None, None).unwrap()).unwrap();
        let mut count = 0;
        for i in 1..27u32 {
            let x = f.from_coords(&[i % 3, (i / 3) % 3, i / 9]);
            assert_eq!(f.pow(&x, 26), f.one());
            assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), f.one());
            count += 1;
        }
        assert_eq!(count, 26);
    }

    #[test]
    fn frobenius_matrix_matches_power() {
        let f = GenericField::new(FieldSpec::new(3, 1, 10, None, None).unwrap()).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for _ in 0..20 {
            let x = f.random(&mut rng);
            assert_eq!(f.frobenius(&x, 1), f.pow(&x, 3));
            assert_eq!(f.frobenius(&x, 2), f.pow(&x, 9));
            assert_eq!(f.frobenius(&f.frobenius(&x, 4), 6), x);
        }
    }

    #[test]
    fn tower_field_gf4_cubed() {
        // F_{4^3} = F_64 through F_4
        let f = GenericField::new(FieldSpec::new(2, 2, 3, None, None).unwrap()).unwrap();
        assert_eq!(f.q(), 4);
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..30 {
            let x = f.random_nonzero(&mut rng);
            assert_eq!(f.pow(&x, 63), f.one());
            assert_eq!(f.frobenius(&x, 3), x);
            let in_f4 = f.frobenius(&x, 1) == x;
            assert_eq!(f.in_proper_subfield(&x), in_f4);
        }
    }
}
