use std::sync::Arc;

use super::{BaseField, ExtField, FieldError, FieldOps, FieldSpec, BINARY_MAX_DEGREE};

/// `F_{2^m}` for `m <= 127`, elements packed into a `u128` (bit `i` is the
/// coefficient of `x^i`).
#[derive(Clone, Debug)]
pub struct BinaryField {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    spec: FieldSpec,
    base: BaseField,
    m: u32,
    /// `x^m mod f`, i.e. the modulus without its leading term.
    tail: u128,
    /// `frob[s][i] = (x^i)^{2^s}`; only for `m > 8`.
    frob: Vec<Vec<u128>>,
    #[cfg_attr(not(target_arch = "x86_64"), allow(dead_code))]
    hw: bool,
}

fn soft_clmul64(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut table = [0u128; 16];
    table[1] = a;
    for i in 2..16 {
        table[i] = if i & 1 == 0 { table[i >> 1] << 1 } else { table[i - 1] ^ a };
    }
    let mut acc = 0u128;
    for k in (0..16).rev() {
        acc = (acc << 4) ^ table[((b >> (4 * k)) & 15) as usize];
    }
    acc
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq")]
#[inline]
fn hw_clmul64(a: u64, b: u64) -> u128 {
    use std::arch::x86_64::{__m128i, _mm_clmulepi64_si128, _mm_set_epi64x};
    #[allow(unused_unsafe)]
    unsafe {
        let r = _mm_clmulepi64_si128(_mm_set_epi64x(0, a as i64), _mm_set_epi64x(0, b as i64), 0);
        std::mem::transmute::<__m128i, u128>(r)
    }
}

macro_rules! kernels {
    ($name:ident, $clmul64:ident $(, #[$attr:meta])*) => {
        #[allow(dead_code)]
        mod $name {
            use super::*;

            $(#[$attr])*
            #[inline]
            pub fn clmul128(a: u128, b: u128) -> (u128, u128) {
                let (a0, a1) = (a as u64, (a >> 64) as u64);
                let (b0, b1) = (b as u64, (b >> 64) as u64);
                if a1 == 0 && b1 == 0 {
                    return ($clmul64(a0, b0), 0);
                }
                if b1 == 0 {
                    let z0 = $clmul64(a0, b0);
                    let z1 = $clmul64(a1, b0);
                    return (z0 ^ (z1 << 64), z1 >> 64);
                }
                let z0 = $clmul64(a0, b0);
                let z2 = $clmul64(a1, b1);
                let z1 = $clmul64(a0 ^ a1, b0 ^ b1) ^ z0 ^ z2;
                (z0 ^ (z1 << 64), z2 ^ (z1 >> 64))
            }

            $(#[$attr])*
            #[inline]
            pub fn reduce(mut lo: u128, mut hi: u128, m: u32, tail: u128) -> u128 {
                let mask = (1u128 << m) - 1;
                while hi != 0 || lo >> m != 0 {
                    let h = (lo >> m) | (hi << (128 - m));
                    let (plo, phi) = clmul128(h, tail);
                    lo = (lo & mask) ^ plo;
                    hi = phi;
                }
                lo
            }

            $(#[$attr])*
            #[inline]
            pub fn mul(a: u128, b: u128, m: u32, tail: u128) -> u128 {
                let (lo, hi) = clmul128(a, b);
                reduce(lo, hi, m, tail)
            }

            $(#[$attr])*
            pub fn axpy(dst: &mut [u128], c: u128, src: &[u128], m: u32, tail: u128) {
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d ^= mul(c, s, m, tail);
                    }
                }
            }

            $(#[$attr])*
            pub fn scale(row: &mut [u128], c: u128, m: u32, tail: u128) {
                for x in row.iter_mut() {
                    if *x != 0 {
                        *x = mul(*x, c, m, tail);
                    }
                }
            }
        }
    };
}

kernels!(soft, soft_clmul64);
#[cfg(target_arch = "x86_64")]
kernels!(hw, hw_clmul64, #[target_feature(enable = "pclmulqdq")]);

fn detect_clmul() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::arch::is_x86_feature_detected!("pclmulqdq")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

impl BinaryField {
    pub fn new(spec: FieldSpec) -> Result<Self, FieldError> {
        if spec.p != 2 || spec.e != 1 {
            return Err(FieldError::InvalidDegree("binary field needs q = 2".into()));
        }
        if spec.m == 0 || spec.m > BINARY_MAX_DEGREE {
            return Err(FieldError::TooLarge(format!("m = {} for a packed field", spec.m)));
        }
        let m = spec.m as u32;
        let tail = spec.top_modulus[..spec.m]
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, &c)| acc | ((c as u128 & 1) << i));
        let mut inner = Inner {
            spec,
            base: BaseField::prime(2),
            m,
            tail,
            frob: Vec::new(),
            hw: detect_clmul(),
        };
        if m > 8 {
            let field = BinaryField { inner: Arc::new(inner) };
            let mut frob = Vec::with_capacity(m as usize);
            frob.push((0..m).map(|i| 1u128 << i).collect::<Vec<_>>());
            for s in 1..m as usize {
                let prev: &Vec<u128> = &frob[s - 1];
                let next = prev.iter().map(|&x| field.mul(&x, &x)).collect();
                frob.push(next);
            }
            inner = Arc::into_inner(field.inner).expect("unshared");
            inner.frob = frob;
        }
        Ok(BinaryField { inner: Arc::new(inner) })
    }

    /// Forces the portable multiplication path (used to cross-check kernels).
    pub fn without_clmul(&self) -> Self {
        let i = &self.inner;
        BinaryField {
            inner: Arc::new(Inner {
                spec: i.spec.clone(),
                base: i.base.clone(),
                m: i.m,
                tail: i.tail,
                frob: i.frob.clone(),
                hw: false,
            }),
        }
    }

    fn square_iter(&self, x: u128, times: usize) -> u128 {
        (0..times).fold(x, |acc, _| self.mul(&acc, &acc))
    }
}

impl FieldOps for BinaryField {
    type Elem = u128;

    #[inline]
    fn zero(&self) -> u128 {
        0
    }

    #[inline]
    fn one(&self) -> u128 {
        1
    }

    #[inline]
    fn is_zero(&self, a: &u128) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u128, b: &u128) -> u128 {
        a ^ b
    }

    #[inline]
    fn sub(&self, a: &u128, b: &u128) -> u128 {
        a ^ b
    }

    #[inline]
    fn neg(&self, a: &u128) -> u128 {
        *a
    }

    #[inline]
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        let i = &*self.inner;
        #[cfg(target_arch = "x86_64")]
        if i.hw {
            // SAFETY: `hw` is set only when pclmulqdq was detected at runtime.
            return unsafe { hw::mul(*a, *b, i.m, i.tail) };
        }
        soft::mul(*a, *b, i.m, i.tail)
    }

    fn inv(&self, a: &u128) -> Option<u128> {
        if *a == 0 {
            return None;
        }
        // a^(2^m - 2)
        Some(self.pow(a, (1u128 << self.inner.m) - 2))
    }

    fn axpy(&self, dst: &mut [u128], c: &u128, src: &[u128]) {
        if *c == 0 {
            return;
        }
        let i = &*self.inner;
        #[cfg(target_arch = "x86_64")]
        if i.hw {
            // SAFETY: see `mul`.
            return unsafe { hw::axpy(dst, *c, src, i.m, i.tail) };
        }
        soft::axpy(dst, *c, src, i.m, i.tail)
    }

    fn scale(&self, row: &mut [u128], c: &u128) {
        let i = &*self.inner;
        #[cfg(target_arch = "x86_64")]
        if i.hw {
            // SAFETY: see `mul`.
            return unsafe { hw::scale(row, *c, i.m, i.tail) };
        }
        soft::scale(row, *c, i.m, i.tail)
    }
}

impl ExtField for BinaryField {
    fn spec(&self) -> &FieldSpec {
        &self.inner.spec
    }

    fn base(&self) -> &BaseField {
        &self.inner.base
    }

    fn degree(&self) -> usize {
        self.inner.m as usize
    }

    fn q(&self) -> u32 {
        2
    }

    fn frobenius(&self, x: &u128, s: i64) -> u128 {
        let m = self.inner.m as i64;
        let s = s.rem_euclid(m) as usize;
        if s == 0 || *x == 0 {
            return *x;
        }
        if self.inner.frob.is_empty() {
            return self.square_iter(*x, s);
        }
        let table = &self.inner.frob[s];
        let mut bits = *x;
        let mut acc = 0u128;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            acc ^= table[i];
            bits &= bits - 1;
        }
        acc
    }

    fn coords(&self, x: &u128) -> Vec<u32> {
        (0..self.inner.m).map(|i| ((x >> i) & 1) as u32).collect()
    }

    fn from_coords(&self, coords: &[u32]) -> u128 {
        coords
            .iter()
            .take(self.inner.m as usize)
            .enumerate()
            .fold(0, |acc, (i, &c)| acc | ((c as u128 & 1) << i))
    }

    fn from_base(&self, c: u32) -> u128 {
        (c & 1) as u128
    }

    fn in_base_field(&self, x: &u128) -> bool {
        *x <= 1
    }

    fn cmp_elems(&self, a: &u128, b: &u128) -> std::cmp::Ordering {
        a.cmp(b)
    }

    fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> u128 {
        let mask = (1u128 << self.inner.m) - 1;
        rng.gen::<u128>() & mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn field(m: usize) -> BinaryField {
        BinaryField::new(FieldSpec::binary(m).unwrap()).unwrap()
    }

    /// Schoolbook shift-and-add multiplication, independent of the kernels.
    fn oracle_mul(f: &BinaryField, a: u128, b: u128) -> u128 {
        let m = f.inner.m;
        let full = f.inner.tail; // x^m == tail
        let mut acc = 0u128;
        let mut shifted = a;
        for i in 0..m {
            if (b >> i) & 1 == 1 {
                acc ^= shifted;
            }
            let carry = (shifted >> (m - 1)) & 1 == 1;
            shifted = (shifted << 1) & ((1u128 << m) - 1);
            if carry {
                shifted ^= full;
            }
        }
        acc
    }

    #[test]
    fn kernels_agree_with_oracle() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for m in [3usize, 8, 31, 64, 65, 100, 120, 127] {
            let f = field(m);
            let soft = f.without_clmul();
            for _ in 0..300 {
                let a = f.random(&mut rng);
                let b = f.random(&mut rng);
                let want = oracle_mul(&f, a, b);
                assert_eq!(f.mul(&a, &b), want, "m = {m}");
                assert_eq!(soft.mul(&a, &b), want, "m = {m}");
            }
        }
    }

    #[test]
    fn dense_user_modulus_reduces() {
        // x^8 + x^4 + x^3 + x + 1 (AES) has a dense tail relative to the default
        let spec = FieldSpec::new(2, 1, 8, None, Some(vec![1, 1, 0, 1, 1, 0, 0, 0, 1])).unwrap();
        let f = BinaryField::new(spec).unwrap();
        assert_eq!(f.mul(&0x53, &0xca), 1);
    }

    #[test]
    fn exhaustive_group_order_gf2_10() {
        let f = field(10);
        for x in 1u128..1024 {
            assert_eq!(f.pow(&x, 1023), 1);
        }
    }

    #[test]
    fn frobenius_table_matches_squaring() {
        let f = field(50);
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x = f.random(&mut rng);
            let s = rng.gen_range(-60i64..60);
            let want = f.square_iter(x, s.rem_euclid(50) as usize);
            assert_eq!(f.frobenius(&x, s), want);
        }
    }
}
