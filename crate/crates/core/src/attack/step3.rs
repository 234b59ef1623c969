//! Step 3: turn `(γ', g', h')` into a decryption-equivalent key
//! `(a'', Q)` with `C_pub = Gab_k(a'') Q^{-1}`.

use super::step2::GammaSolution;
use super::{AttackError, RecoveredKey};
use crate::field::ExtField;
use crate::gabidulin::{moore_matrix, recover_support};
use crate::linalg::Matrix;
use crate::loidreau::combine_mask;
use crate::subspaces::{expand_to_fq, Code, FqSubspace};

/// A basis of `support(g') + support(h')`, completed greedily with power-basis
/// elements to `n` independent entries.
fn choose_support<F: ExtField>(f: &F, sol: &GammaSolution<F>, n: usize) -> Result<Vec<F::Elem>, AttackError> {
    let entries: Vec<F::Elem> = sol.g.iter().chain(&sol.h).cloned().collect();
    let mut span = FqSubspace::span(f, &entries);
    if span.dim() > n {
        return Err(AttackError::SupportTooLarge { dim: span.dim(), n });
    }
    let mut support = span.basis().to_vec();
    let m = f.degree();
    for j in 0..m {
        if support.len() == n {
            break;
        }
        let mut coords = vec![0; m];
        coords[j] = 1;
        let unit = f.from_coords(&coords);
        if !span.contains(f, &unit) {
            support.push(unit.clone());
            span = FqSubspace::span(f, &support);
        }
    }
    Ok(support)
}

/// Solves `a' Q_0 = g'` and `a' Q_1 = h'` over `F_q` with a single
/// elimination on `[A | G | H]`, where column `i` of `A` holds `a'_i`.
fn solve_mask_parts<F: ExtField>(
    f: &F,
    support: &[F::Elem],
    sol: &GammaSolution<F>,
) -> Result<(Matrix<u32>, Matrix<u32>), AttackError> {
    let base = f.base();
    let n = support.len();
    let mut system = expand_to_fq(f, support)
        .hstack(&expand_to_fq(f, &sol.g))
        .hstack(&expand_to_fq(f, &sol.h));
    let pivots = system.rref_in_place_upto(base, n);
    if pivots.len() != n || (n..system.rows()).any(|i| system.row(i).iter().any(|&c| c != 0)) {
        return Err(AttackError::SupportSystem);
    }
    let top = system.select_rows(0..n);
    let q0 = top.select_cols(&(n..2 * n).collect::<Vec<_>>());
    let q1 = top.select_cols(&(2 * n..3 * n).collect::<Vec<_>>());
    Ok((q0, q1))
}

pub fn step3_build_key<F: ExtField>(
    sol: &GammaSolution<F>,
    public_code: &Code<F>,
    public_generator: &Matrix<F::Elem>,
) -> Result<RecoveredKey<F>, AttackError> {
    let f = public_code.field();
    let (n, k) = (public_code.len(), public_code.dim());
    let chosen_support = choose_support(f, sol, n)?;
    let (q0, q1) = solve_mask_parts(f, &chosen_support, sol)?;
    let q = combine_mask(f, &[f.one(), sol.gamma.clone()], &[q0.transpose(), q1.transpose()]);
    let q_inv = q.inverse(f).map_err(|_| AttackError::SingularMask)?;

    let dual_gab = moore_matrix(f, &chosen_support, n - k);
    let dual_code = Code::from_generator(f, &dual_gab);
    if Code::from_generator(f, &dual_gab.mul(f, &q.transpose())) != public_code.dual() {
        return Err(AttackError::DualMismatch);
    }
    let decoding_support = recover_support(&dual_code.dual())?;
    let secret_gab = moore_matrix(f, &decoding_support, k);
    if Code::from_generator(f, &secret_gab.mul(f, &q_inv)) != *public_code {
        return Err(AttackError::PublicMismatch);
    }
    Ok(RecoveredKey {
        field: f.clone(),
        n,
        k,
        chosen_support,
        decoding_support,
        gamma: sol.gamma.clone(),
        q0,
        q1,
        q,
        q_inv,
        decode_radius: (n - k) / 2,
        public_generator: public_generator.clone(),
    })
}

impl<F: ExtField> RecoveredKey<F> {
    /// `a' (Q_0 + γ' Q_1)`, equal to `g' + γ' h'`.
    pub fn image_of_support(&self) -> Vec<F::Elem> {
        self.q.mul_vec(&self.field, &self.chosen_support)
    }
}
