//! Polynomial-time key recovery for the `λ = 2` scheme.
//!
//! The public dual code is spanned by `g^{[i]} + γ h^{[i]}`. Step 1 extracts
//! `⟨g, h⟩` and the lines `⟨g + γ^{q^{-i}} h⟩`; step 2 finds an equivalent
//! `γ'` among the roots of a degree `q³ - q` polynomial; step 3 builds a
//! mask `Q` and a Gabidulin support that decrypt like the secret key.

mod roots;
mod step1;
mod step2;
mod step3;

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use roots::find_roots;
pub use step1::{step1_recover_spaces, Step1Output, Step1Stage};
pub use step2::{
    build_p_gamma, build_q_gamma, mobius, pgl2_matrices, pgl2_orbit, step2_find_gamma, unique_pair,
    GammaSolution,
};
pub use step3::step3_build_key;

use crate::field::ExtField;
use crate::gabidulin::{moore_matrix, DecodeFailure, GabidulinCode, GabidulinError};
use crate::linalg::Matrix;
use crate::loidreau::{PublicKey, SchemeParams};
use crate::subspaces::{rank_weight, sub_vec, Code, SubspaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AttackError {
    #[error("parameters outside the attackable range: {}", list(.0))]
    Parameters(Vec<ParamViolation>),
    #[error("step 1 ({stage}): dimension {got}, expected {expected}")]
    Step1Dimension { stage: Step1Stage, expected: usize, got: usize },
    #[error("step 2: lines do not split the representative w")]
    PairInconsistent,
    #[error("step 2: u_12 and u_13 are not collinear")]
    AlphaNotConstant,
    #[error("step 2: Q_γ vanishes identically")]
    DegenerateAlpha,
    #[error("step 2: (X^q - X)^(q+1) does not divide Q_γ")]
    NotDivisible,
    #[error("step 2: P_γ has no root in the field")]
    NoRoots,
    #[error("step 2: recovered γ' lies in F_q")]
    GammaInBaseField,
    #[error("step 2: γ' makes the splitting formulas singular")]
    DegenerateGamma,
    #[error("step 3: support of g', h' has dimension {dim} > n = {n}")]
    SupportTooLarge { dim: usize, n: usize },
    #[error("step 3: a' Q_0 = g', a' Q_1 = h' has no unique solution")]
    SupportSystem,
    #[error("step 3: Q is singular")]
    SingularMask,
    #[error("step 3: Gab_(n-k)(a') Q^T differs from the dual public code")]
    DualMismatch,
    #[error("step 3: Gab_k(a'') Q^-1 differs from the public code")]
    PublicMismatch,
    #[error("step 3: {0}")]
    Gabidulin(#[from] GabidulinError),
    #[error("subspace operation failed: {0}")]
    Subspace(#[from] SubspaceError),
    #[error("decryption: {0}")]
    Decode(#[from] DecodeFailure),
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

fn list<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

impl AttackError {
    /// Short tag naming the pipeline stage that failed.
    pub fn stage(&self) -> &'static str {
        use AttackError::*;
        match self {
            Parameters(_) => "parameters",
            Step1Dimension { .. } | Subspace(_) => "step1",
            PairInconsistent | AlphaNotConstant | DegenerateAlpha | NotDivisible | NoRoots
            | GammaInBaseField | DegenerateGamma => "step2",
            SupportTooLarge { .. } | SupportSystem | SingularMask | DualMismatch | PublicMismatch
            | Gabidulin(_) => "step3",
            Decode(_) | LengthMismatch { .. } => "decrypt",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamViolation {
    /// Only `λ = 2` keys are attacked.
    LambdaNotTwo { lambda: usize },
    /// `2k - 2 > n` fails.
    DimensionTooSmall { n: usize, k: usize },
    /// `k < n - 2` fails.
    DimensionTooLarge { n: usize, k: usize },
    /// `n - k >= 4` fails, so the lines `S_1, S_2, S_3` do not all exist.
    RedundancyTooSmall { n: usize, k: usize },
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamViolation::LambdaNotTwo { lambda } => write!(fm, "λ = {lambda}, need λ = 2"),
            ParamViolation::DimensionTooSmall { n, k } => write!(fm, "2k - 2 = {} <= n = {n}", (2 * k).saturating_sub(2)),
            ParamViolation::DimensionTooLarge { n, k } => write!(fm, "k = {k} >= n - 2 = {}", *n as i64 - 2),
            ParamViolation::RedundancyTooSmall { n, k } => write!(fm, "n - k = {} < 4", *n as i64 - *k as i64),
        }
    }
}

/// Every violated constraint among `λ = 2`, `2k - 2 > n`, `k < n - 2`, `n - k >= 4`.
pub fn check_parameters(n: usize, k: usize, lambda: usize) -> Vec<ParamViolation> {
    let mut out = Vec::new();
    if lambda != 2 {
        out.push(ParamViolation::LambdaNotTwo { lambda });
    }
    if 2 * k < n + 3 {
        out.push(ParamViolation::DimensionTooSmall { n, k });
    }
    if k + 2 >= n {
        out.push(ParamViolation::DimensionTooLarge { n, k });
    }
    if k + 4 > n {
        out.push(ParamViolation::RedundancyTooSmall { n, k });
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssumptionViolation {
    /// `Gab_{n-k+2}(g) ∩ Gab_{n-k+2}(h)` is nonzero.
    Intersection { dim: usize },
    RankG { rank: usize, needed: usize },
    RankH { rank: usize, needed: usize },
    /// The extension degree must exceed 2.
    SmallExtension { m: usize },
    /// `γ` lies in a proper subfield of `F_{q^m}`.
    GammaInSubfield,
}

/// Checks the two genericity assumptions on the secret `(g, h, γ)`.
pub fn check_assumptions<F: ExtField>(
    f: &F,
    g: &[F::Elem],
    h: &[F::Elem],
    gamma: &F::Elem,
    k: usize,
) -> Vec<AssumptionViolation> {
    let n = g.len();
    let needed = n - k + 2;
    let mut out = Vec::new();
    let rows = needed.min(n);
    let cg = Code::from_generator(f, &moore_matrix(f, g, rows));
    let ch = Code::from_generator(f, &moore_matrix(f, h, rows));
    let dim = cg.intersect(&ch).map(|c| c.dim()).unwrap_or(n);
    if dim != 0 {
        out.push(AssumptionViolation::Intersection { dim });
    }
    let (rg, rh) = (rank_weight(f, g), rank_weight(f, h));
    if rg < needed {
        out.push(AssumptionViolation::RankG { rank: rg, needed });
    }
    if rh < needed {
        out.push(AssumptionViolation::RankH { rank: rh, needed });
    }
    if f.degree() <= 2 {
        out.push(AssumptionViolation::SmallExtension { m: f.degree() });
    }
    if f.degree() < 2 || f.in_proper_subfield(gamma) {
        out.push(AssumptionViolation::GammaInSubfield);
    }
    out
}

/// A decryption-equivalent key: `C_pub = Gab_k(a'') Q^{-1}`.
#[derive(Clone, Debug)]
pub struct RecoveredKey<F: ExtField> {
    pub field: F,
    pub n: usize,
    pub k: usize,
    /// `a'`, rank `n`, with `C_pub^⊥ = Gab_{n-k}(a') Q^T`.
    pub chosen_support: Vec<F::Elem>,
    /// `a''` with `Gab_k(a'') = Gab_{n-k}(a')^⊥`.
    pub decoding_support: Vec<F::Elem>,
    pub gamma: F::Elem,
    pub q0: Matrix<u32>,
    pub q1: Matrix<u32>,
    /// `Q_0^T + γ' Q_1^T`
    pub q: Matrix<F::Elem>,
    pub q_inv: Matrix<F::Elem>,
    pub decode_radius: usize,
    /// Generator against which plaintexts are expressed.
    pub public_generator: Matrix<F::Elem>,
}

/// Observations collected along the pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackTrace {
    pub r: usize,
    pub intersection_dims: Vec<usize>,
    pub pair_space_dim: usize,
    pub root_count: usize,
    pub p_gamma_degree: usize,
    pub support_dim: usize,
}

pub fn attack<F: ExtField, R: Rng + ?Sized>(pk: &PublicKey<F>, rng: &mut R) -> Result<RecoveredKey<F>, AttackError> {
    attack_traced(pk, rng).map(|(key, _)| key)
}

pub fn attack_traced<F: ExtField, R: Rng + ?Sized>(
    pk: &PublicKey<F>,
    rng: &mut R,
) -> Result<(RecoveredKey<F>, AttackTrace), AttackError> {
    let violations = check_parameters(pk.params.n, pk.params.k, pk.params.lambda);
    if !violations.is_empty() {
        return Err(AttackError::Parameters(violations));
    }
    run_pipeline(&pk.code(), &pk.g_pub, rng)
}

/// Attacks a bare code, assuming `λ = 2`; plaintexts recovered later are
/// expressed against the canonical basis of `code`.
pub fn attack_code<F: ExtField, R: Rng + ?Sized>(
    code: &Code<F>,
    rng: &mut R,
) -> Result<(RecoveredKey<F>, AttackTrace), AttackError> {
    let violations = check_parameters(code.len(), code.dim(), 2);
    if !violations.is_empty() {
        return Err(AttackError::Parameters(violations));
    }
    run_pipeline(code, code.basis(), rng)
}

fn run_pipeline<F: ExtField, R: Rng + ?Sized>(
    code: &Code<F>,
    generator: &Matrix<F::Elem>,
    rng: &mut R,
) -> Result<(RecoveredKey<F>, AttackTrace), AttackError> {
    let s1 = step1_recover_spaces(code)?;
    let sol = step2_find_gamma(&s1, rng)?;
    let key = step3_build_key(&sol, code, generator)?;
    Ok((key, AttackTrace::collect(&s1, &sol)))
}

impl AttackTrace {
    pub fn collect<F: ExtField>(s1: &Step1Output<F>, sol: &GammaSolution<F>) -> Self {
        let f = s1.gh.field();
        let entries: Vec<F::Elem> = sol.g.iter().chain(&sol.h).cloned().collect();
        AttackTrace {
            r: s1.r,
            intersection_dims: s1.intersection_dims.clone(),
            pair_space_dim: s1.gh.dim(),
            root_count: sol.roots.len(),
            p_gamma_degree: sol.p_gamma.degree().unwrap_or(0),
            support_dim: rank_weight(f, &entries),
        }
    }
}

/// Decodes `c Q` in `Gab_k(a'')`, maps the codeword back through `Q^{-1}` and
/// solves for the plaintext against the public generator.
pub fn attack_decrypt<F: ExtField>(key: &RecoveredKey<F>, c: &[F::Elem]) -> Result<Vec<F::Elem>, AttackError> {
    let f = &key.field;
    if c.len() != key.n {
        return Err(AttackError::LengthMismatch { expected: key.n, got: c.len() });
    }
    let gab = GabidulinCode::new(f, key.decoding_support.clone(), key.k)?;
    let cq = key.q.vec_mul(f, c);
    let (_, eq) = gab.decode(&cq, key.decode_radius)?;
    let codeword = key.q_inv.vec_mul(f, &sub_vec(f, &cq, &eq));
    key.public_generator
        .solve_left(f, &codeword)
        .map_err(|_| AttackError::Decode(DecodeFailure::NotDivisible))
}

impl<F: ExtField> RecoveredKey<F> {
    /// Parameters implied by the key, with `λ = 2`.
    pub fn params(&self) -> Option<SchemeParams> {
        SchemeParams::new(self.field.spec().clone(), self.n, self.k, 2).ok()
    }
}

#[cfg(test)]
mod tests;
