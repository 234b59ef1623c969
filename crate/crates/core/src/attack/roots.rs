//! Roots in `F_{q^m}` of univariate polynomials: `gcd(P, X^{q^m} - X)` then
//! randomized equal-degree splitting into linear factors.

use rand::Rng;

use crate::field::ExtField;
use crate::poly::UnivariatePoly;

type Poly<F> = UnivariatePoly<<F as crate::field::FieldOps>::Elem>;

/// `a^{p^times} mod modulus` by repeated `p`-th powering.
fn frobenius_power<F: ExtField>(f: &F, a: &Poly<F>, p: u128, times: usize, modulus: &Poly<F>) -> Poly<F> {
    (0..times).fold(a.rem(f, modulus), |acc, _| acc.powmod(f, p, modulus))
}

/// All distinct roots of `poly` lying in `F_{q^m}`, sorted by
/// [`ExtField::cmp_elems`]. The zero polynomial has no well-defined root
/// set and yields an empty list.
pub fn find_roots<F: ExtField, R: Rng + ?Sized>(f: &F, poly: &Poly<F>, rng: &mut R) -> Vec<F::Elem> {
    if poly.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let monic = poly.monic(f);
    let x = UnivariatePoly::x(f);
    let q = f.q() as u128;
    let x_qm = frobenius_power(f, &x, q, f.degree(), &monic);
    let split = x_qm.sub(f, &x).gcd(f, &monic);
    let mut roots = Vec::new();
    if split.is_zero() {
        return roots;
    }
    split_linear(f, split, rng, &mut roots);
    roots.sort_by(|a, b| f.cmp_elems(a, b));
    roots
}

/// Splits a monic squarefree product of distinct linear factors.
fn split_linear<F: ExtField, R: Rng + ?Sized>(f: &F, g: Poly<F>, rng: &mut R, out: &mut Vec<F::Elem>) {
    match g.degree() {
        None | Some(0) => return,
        Some(1) => {
            out.push(f.neg(&g.coeffs()[0]));
            return;
        }
        _ => {}
    }
    let spec = f.spec();
    let (p, bits) = (spec.p as u128, spec.e as usize * f.degree());
    loop {
        let beta = f.random_nonzero(rng);
        let shift = f.random(rng);
        let lin = UnivariatePoly::from_coeffs(f, vec![shift, beta]);
        let probe = if p == 2 {
            // absolute trace of βX + c: sum of its 2^i-th powers, i < e m
            let mut acc = UnivariatePoly::zero();
            let mut term = lin.rem(f, &g);
            for _ in 0..bits {
                acc = acc.add(f, &term);
                term = term.mulmod(f, &term, &g);
            }
            acc
        } else {
            // quadratic character: (βX + c)^{(p^{em} - 1)/2}, with the
            // exponent factored as ((p - 1)/2) (1 + p + … + p^{em-1})
            let mut prod = UnivariatePoly::constant(f, f.one());
            let mut term = lin.rem(f, &g);
            for _ in 0..bits {
                prod = prod.mulmod(f, &term, &g);
                term = term.powmod(f, p, &g);
            }
            prod.powmod(f, (p - 1) / 2, &g).sub(f, &UnivariatePoly::constant(f, f.one()))
        };
        let d = probe.gcd(f, &g);
        let deg = d.degree().unwrap_or(0);
        if deg > 0 && deg < g.degree().unwrap() {
            let (other, _) = g.divrem(f, &d);
            split_linear(f, d, rng, out);
            split_linear(f, other.monic(f), rng, out);
            return;
        }
    }
}
