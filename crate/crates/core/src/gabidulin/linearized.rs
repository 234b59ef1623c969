use crate::field::ExtField;

/// `sum p_i X^{q^i}`; no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearizedPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> LinearizedPoly<E> {
    pub fn zero() -> Self {
        LinearizedPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs<F: ExtField<Elem = E>>(f: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| f.is_zero(c)) {
            coeffs.pop();
        }
        LinearizedPoly { coeffs }
    }

    /// The identity map `X`.
    pub fn x<F: ExtField<Elem = E>>(f: &F) -> Self {
        Self::monomial(f, f.one(), 0)
    }

    /// `c X^{q^i}`
    pub fn monomial<F: ExtField<Elem = E>>(f: &F, c: E, i: usize) -> Self {
        let mut coeffs = vec![f.zero(); i + 1];
        coeffs[i] = c;
        Self::from_coeffs(f, coeffs)
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `q`-degree; `None` for the zero polynomial.
    pub fn qdeg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficients padded with zeros to length `len`.
    pub fn padded_coeffs<F: ExtField<Elem = E>>(&self, f: &F, len: usize) -> Vec<E> {
        let mut c = self.coeffs.clone();
        c.resize(len.max(c.len()), f.zero());
        c
    }

    pub fn eval<F: ExtField<Elem = E>>(&self, f: &F, x: &E) -> E {
        let mut acc = f.zero();
        let mut power = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = f.frobenius(&power, 1);
            }
            acc = f.add(&acc, &f.mul(c, &power));
        }
        acc
    }

    pub fn eval_vec<F: ExtField<Elem = E>>(&self, f: &F, xs: &[E]) -> Vec<E> {
        xs.iter().map(|x| self.eval(f, x)).collect()
    }

    pub fn add<F: ExtField<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let a = self.padded_coeffs(f, n);
        let b = other.padded_coeffs(f, n);
        Self::from_coeffs(f, a.iter().zip(&b).map(|(x, y)| f.add(x, y)).collect())
    }

    pub fn sub<F: ExtField<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let neg = LinearizedPoly { coeffs: other.coeffs.iter().map(|c| f.neg(c)).collect() };
        self.add(f, &neg)
    }

    /// `self ∘ other`, using `(c X^{q^i}) ∘ (d X^{q^j}) = c d^{q^i} X^{q^{i+j}}`.
    pub fn compose<F: ExtField<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, p) in self.coeffs.iter().enumerate() {
            if f.is_zero(p) {
                continue;
            }
            for (j, q) in other.coeffs.iter().enumerate() {
                let term = f.mul(p, &f.frobenius(q, i as i64));
                out[i + j] = f.add(&out[i + j], &term);
            }
        }
        Self::from_coeffs(f, out)
    }

    /// `(quotient, remainder)` with `self = divisor ∘ quotient + remainder`
    /// and `qdeg(remainder) < qdeg(divisor)`. `None` for a zero divisor.
    pub fn left_divide<F: ExtField<Elem = E>>(&self, f: &F, divisor: &Self) -> Option<(Self, Self)> {
        let d = divisor.qdeg()?;
        let lead_inv = f.inv(&divisor.coeffs[d]).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![f.zero(); rem.len() - d];
        for top in (d..rem.len()).rev() {
            if f.is_zero(&rem[top]) {
                continue;
            }
            // leading term of divisor ∘ (c X^{q^s}) is lead * c^{q^d} X^{q^{d+s}}
            let s = top - d;
            let c = f.frobenius(&f.mul(&rem[top], &lead_inv), -(d as i64));
            for (i, v) in divisor.coeffs.iter().enumerate() {
                let term = f.mul(v, &f.frobenius(&c, i as i64));
                rem[i + s] = f.sub(&rem[i + s], &term);
            }
            quot[s] = c;
        }
        rem.truncate(d);
        Some((Self::from_coeffs(f, quot), Self::from_coeffs(f, rem)))
    }
}
