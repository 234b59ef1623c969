//! Step 2: recover an admissible `γ'` as a root of `P_γ`, then split `w`
//! into `g' + γ' h'`.

use rand::Rng;

use super::step1::Step1Output;
use super::{find_roots, AttackError};
use crate::field::ExtField;
use crate::linalg::Matrix;
use crate::poly::UnivariatePoly;
use crate::subspaces::{scale_vec, sub_vec, Code};

#[derive(Clone, Debug)]
pub struct GammaSolution<F: ExtField> {
    pub gamma: F::Elem,
    pub g: Vec<F::Elem>,
    pub h: Vec<F::Elem>,
    /// Collinearity scalar with `u_12 = α u_13`.
    pub alpha: F::Elem,
    pub q_gamma: UnivariatePoly<F::Elem>,
    pub p_gamma: UnivariatePoly<F::Elem>,
    /// All roots of `P_γ` in `F_{q^m}`, sorted; `gamma` is the first.
    pub roots: Vec<F::Elem>,
}

/// The unique `(u, v)` with `u ∈ first`, `v ∈ second` and `u + v = w`.
pub fn unique_pair<F: ExtField>(
    first: &Code<F>,
    second: &Code<F>,
    w: &[F::Elem],
) -> Result<(Vec<F::Elem>, Vec<F::Elem>), AttackError> {
    let f = first.field();
    let (a, b) = match (first.first_generator(), second.first_generator()) {
        (Some(a), Some(b)) if first.dim() == 1 && second.dim() == 1 => (a, b),
        _ => return Err(AttackError::PairInconsistent),
    };
    let system = Matrix::from_rows(a.len(), vec![a.to_vec(), b.to_vec()]);
    if system.rank(f) != 2 {
        return Err(AttackError::PairInconsistent);
    }
    let xy = system.solve_left(f, w).map_err(|_| AttackError::PairInconsistent)?;
    Ok((scale_vec(f, &xy[0], a), scale_vec(f, &xy[1], b)))
}

/// `c X^{q^i}` as a univariate polynomial.
fn q_monomial<F: ExtField>(f: &F, c: F::Elem, i: u32) -> UnivariatePoly<F::Elem> {
    UnivariatePoly::monomial(f, c, (f.q() as usize).pow(i))
}

/// `X^{q^i} - X^{q^j}`
fn frobenius_difference<F: ExtField>(f: &F, i: u32, j: u32) -> UnivariatePoly<F::Elem> {
    q_monomial(f, f.one(), i).sub(f, &q_monomial(f, f.one(), j))
}

/// `Q_γ = (X^q - X^{q³})(X - X^{q²}) - α^{q³} (X - X^{q³})(X^q - X^{q²})`
pub fn build_q_gamma<F: ExtField>(f: &F, alpha: &F::Elem) -> UnivariatePoly<F::Elem> {
    let d = |i, j| frobenius_difference(f, i, j);
    let left = d(1, 3).mul(f, &d(0, 2));
    let right = d(0, 3).mul(f, &d(1, 2)).scale(f, &f.frobenius(alpha, 3));
    left.sub(f, &right)
}

/// `(Q_γ, P_γ)` with `P_γ = Q_γ / (X^q - X)^{q+1}`, the division checked to
/// be exact.
pub fn build_p_gamma<F: ExtField>(
    f: &F,
    alpha: &F::Elem,
) -> Result<(UnivariatePoly<F::Elem>, UnivariatePoly<F::Elem>), AttackError> {
    let q_gamma = build_q_gamma(f, alpha);
    if q_gamma.is_zero() {
        return Err(AttackError::DegenerateAlpha);
    }
    let base = frobenius_difference(f, 1, 0);
    let divisor = (0..f.q()).fold(base.clone(), |acc, _| acc.mul(f, &base));
    let (p_gamma, rem) = q_gamma.divrem(f, &divisor);
    if !rem.is_zero() {
        return Err(AttackError::NotDivisible);
    }
    Ok((q_gamma, p_gamma))
}

/// `u / v` read off the first coordinate where `v ≠ 0`, then checked on
/// every coordinate.
fn collinearity_scalar<F: ExtField>(f: &F, u: &[F::Elem], v: &[F::Elem]) -> Result<F::Elem, AttackError> {
    let idx = v.iter().position(|x| !f.is_zero(x)).ok_or(AttackError::AlphaNotConstant)?;
    let alpha = f.div(&u[idx], &v[idx]).expect("nonzero");
    if u.iter().zip(v).any(|(a, b)| *a != f.mul(&alpha, b)) {
        return Err(AttackError::AlphaNotConstant);
    }
    Ok(alpha)
}

pub fn step2_find_gamma<F: ExtField, R: Rng + ?Sized>(
    s1: &Step1Output<F>,
    rng: &mut R,
) -> Result<GammaSolution<F>, AttackError> {
    if s1.r < 3 || s1.lines.len() < 4 {
        return Err(AttackError::PairInconsistent);
    }
    let f = s1.gh.field();
    let w = &s1.w;
    let (u12, _) = unique_pair(&s1.lines[1], &s1.lines[2], w)?;
    let (u13, _) = unique_pair(&s1.lines[1], &s1.lines[3], w)?;
    let alpha = collinearity_scalar(f, &u12, &u13)?;
    let (q_gamma, p_gamma) = build_p_gamma(f, &alpha)?;
    let roots = find_roots(f, &p_gamma, rng);
    let gamma = roots.first().cloned().ok_or(AttackError::NoRoots)?;
    if f.in_base_field(&gamma) {
        return Err(AttackError::GammaInBaseField);
    }

    let back1 = f.frobenius(&gamma, -1);
    let back2 = f.frobenius(&gamma, -2);
    let ratio = f
        .div(&f.sub(&back2, &back1), &f.sub(&back2, &gamma))
        .map_err(|_| AttackError::DegenerateGamma)?;
    // x = g' + γ'^{q^{-1}} h'
    let x = scale_vec(f, &ratio, &u12);
    let denom = f.inv(&f.sub(&gamma, &back1)).ok_or(AttackError::DegenerateGamma)?;
    let h = scale_vec(f, &denom, &sub_vec(f, w, &x));
    let g = sub_vec(f, w, &scale_vec(f, &gamma, &h));
    Ok(GammaSolution { gamma, g, h, alpha, q_gamma, p_gamma, roots })
}

/// Coefficients `(a, b, c, d) ∈ F_q^4` with `ad - bc ≠ 0`.
pub fn pgl2_matrices<F: ExtField>(f: &F) -> Vec<[F::Elem; 4]> {
    let q = f.q();
    let mut out = Vec::new();
    for code in 0..(q as u64).pow(4) {
        let digit = |i: u32| f.from_base(((code / (q as u64).pow(i)) % q as u64) as u32);
        let [a, b, c, d] = [digit(0), digit(1), digit(2), digit(3)];
        if !f.is_zero(&f.sub(&f.mul(&a, &d), &f.mul(&b, &c))) {
            out.push([a, b, c, d]);
        }
    }
    out
}

/// `(a x + b) / (c x + d)`, or `None` at the pole.
pub fn mobius<F: ExtField>(f: &F, [a, b, c, d]: &[F::Elem; 4], x: &F::Elem) -> Option<F::Elem> {
    let num = f.add(&f.mul(a, x), b);
    let den = f.add(&f.mul(c, x), d);
    f.div(&num, &den).ok()
}

/// The images of `x` under `PGL_2(F_q)`, sorted and deduplicated.
pub fn pgl2_orbit<F: ExtField>(f: &F, x: &F::Elem) -> Vec<F::Elem> {
    let mut out: Vec<F::Elem> = pgl2_matrices(f).iter().filter_map(|m| mobius(f, m, x)).collect();
    out.sort_by(|a, b| f.cmp_elems(a, b));
    out.dedup();
    out
}
