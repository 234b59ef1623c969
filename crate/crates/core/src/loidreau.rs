//! Loidreau's encryption scheme: a Gabidulin code disguised by a right
//! multiplication with a matrix whose entries lie in a small `F_q`-space `V`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{ExtField, FieldSpec};
use crate::gabidulin::{recover_support, DecodeFailure, GabidulinCode, GabidulinError};
use crate::linalg::Matrix;
use crate::subspaces::{
    add_vec, fq_combination, random_full_rank_vector, random_rank_t_vector, rank_weight, sub_vec,
    Code, FqSubspace, SubspaceError,
};

/// Draws allowed for the masking matrix before giving up.
pub const MAX_KEYGEN_DRAWS: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no admissible masking matrix after {0} draws")]
    SamplingExhausted(usize),
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("decoding failed: {0}")]
    Decode(#[from] DecodeFailure),
    #[error("masked error has rank {rank} > t·λ = {bound}")]
    MaskedErrorTooLarge { rank: usize, bound: usize },
    #[error(transparent)]
    Gabidulin(#[from] GabidulinError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
    pub t: usize,
}

impl SchemeParams {
    /// Sets `t = ⌊(n-k)/(2λ)⌋` and checks `k < n <= m`, `1 <= λ <= m`, `t >= 1`.
    pub fn new(field: FieldSpec, n: usize, k: usize, lambda: usize) -> Result<Self, SchemeError> {
        if lambda == 0 {
            return Err(SchemeError::InvalidParams("λ must be at least 1".into()));
        }
        let t = n.saturating_sub(k) / (2 * lambda);
        let params = SchemeParams { field, n, k, lambda, t };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), SchemeError> {
        let m = self.field.m;
        let fail = |msg: String| Err(SchemeError::InvalidParams(msg));
        if !(self.k >= 1 && self.k < self.n && self.n <= m) {
            return fail(format!("need 1 <= k < n <= m, got k = {}, n = {}, m = {m}", self.k, self.n));
        }
        if !(1..=m).contains(&self.lambda) {
            return fail(format!("need 1 <= λ <= m, got λ = {}", self.lambda));
        }
        let t = (self.n - self.k) / (2 * self.lambda);
        if self.t != t {
            return fail(format!("t = {} but ⌊(n-k)/(2λ)⌋ = {t}", self.t));
        }
        if t == 0 {
            return fail(format!("t = ⌊({} - {})/(2·{})⌋ = 0", self.n, self.k, self.lambda));
        }
        Ok(())
    }

    /// `⌊(n-k)/2⌋`
    pub fn decode_radius(&self) -> usize {
        (self.n - self.k) / 2
    }
}

#[derive(Clone, Debug)]
pub struct PublicKey<F: ExtField> {
    pub field: F,
    pub params: SchemeParams,
    /// `k × n`, equal to `G · P^{-1}`.
    pub g_pub: Matrix<F::Elem>,
}

impl<F: ExtField> PublicKey<F> {
    pub fn code(&self) -> Code<F> {
        Code::from_generator(&self.field, &self.g_pub)
    }

    pub fn t(&self) -> usize {
        self.params.t
    }
}

#[derive(Clone, Debug)]
pub struct SecretKey<F: ExtField> {
    pub field: F,
    pub params: SchemeParams,
    /// Support `b` of the secret code `Gab_k(b)`.
    pub support: Vec<F::Elem>,
    /// Moore generator of `Gab_k(b)`.
    pub generator: Matrix<F::Elem>,
    /// Basis of `V`, starting with 1.
    pub v_basis: Vec<F::Elem>,
    /// `F_q` matrices `M_l` with `P = sum_l v_l M_l`.
    pub mask_coeffs: Vec<Matrix<u32>>,
    pub p: Matrix<F::Elem>,
    pub p_inv: Matrix<F::Elem>,
    /// Support `a` with `Gab_k(b)^⊥ = Gab_{n-k}(a)`.
    pub dual_support: Vec<F::Elem>,
}

impl<F: ExtField> SecretKey<F> {
    pub fn v(&self) -> FqSubspace<F::Elem> {
        FqSubspace::span(&self.field, &self.v_basis)
    }

    /// `γ` with `V = ⟨1, γ⟩` when `λ = 2`.
    pub fn gamma(&self) -> Option<&F::Elem> {
        (self.params.lambda == 2).then(|| &self.v_basis[1])
    }

    /// `(P_0, P_1)` with `P^T = P_0 + γ P_1` when `λ = 2`.
    pub fn p0_p1(&self) -> Option<(Matrix<u32>, Matrix<u32>)> {
        (self.params.lambda == 2)
            .then(|| (self.mask_coeffs[0].transpose(), self.mask_coeffs[1].transpose()))
    }

    /// `(g, h) = (a P_0, a P_1)`, so that `C_pub^⊥` is spanned by
    /// `g^{[i]} + γ h^{[i]}`.
    pub fn g_h(&self) -> Option<(Vec<F::Elem>, Vec<F::Elem>)> {
        let (p0, p1) = self.p0_p1()?;
        let f = &self.field;
        Some((fq_combination(f, &self.dual_support, &p0), fq_combination(f, &self.dual_support, &p1)))
    }

    pub fn gabidulin(&self) -> GabidulinCode<F> {
        GabidulinCode::new(&self.field, self.support.clone(), self.params.k).expect("valid secret support")
    }
}

/// `1` followed by `λ - 1` further elements, `F_q`-independent. For `λ = 2`
/// the second element lies in no proper subfield.
fn sample_v<F: ExtField, R: Rng + ?Sized>(f: &F, lambda: usize, rng: &mut R) -> Vec<F::Elem> {
    loop {
        let mut basis = vec![f.one()];
        if lambda == 2 {
            match f.random_outside_subfields(rng) {
                Ok(g) => basis.push(g),
                Err(_) => basis.push(f.random(rng)),
            }
        } else {
            basis.extend((1..lambda).map(|_| f.random(rng)));
        }
        if rank_weight(f, &basis) == lambda {
            return basis;
        }
    }
}

pub fn keygen<F: ExtField, R: Rng + ?Sized>(
    f: &F,
    params: &SchemeParams,
    rng: &mut R,
) -> Result<(PublicKey<F>, SecretKey<F>), SchemeError> {
    params.validate()?;
    if f.spec() != &params.field {
        return Err(SchemeError::InvalidParams("field does not match the parameters".into()));
    }
    let (n, k, lambda) = (params.n, params.k, params.lambda);
    let support = random_full_rank_vector(f, n, rng)?;
    let gab = GabidulinCode::new(f, support.clone(), k)?;
    let generator = gab.generator_matrix();
    let v_basis = sample_v(f, lambda, rng);
    let q = f.q();

    let (mask_coeffs, p, p_inv) = (0..MAX_KEYGEN_DRAWS)
        .find_map(|_| {
            let coeffs: Vec<Matrix<u32>> = (0..lambda)
                .map(|_| Matrix::random(n, n, |r: &mut R| r.gen_range(0..q), rng))
                .collect();
            // entries of P span V iff the coefficient tuples span F_q^λ
            let tuples = Matrix::from_rows(n * n, coeffs.iter().map(|m| m.to_rows().concat()).collect());
            if tuples.rank(f.base()) < lambda {
                return None;
            }
            let p = combine_mask(f, &v_basis, &coeffs);
            let p_inv = p.inverse(f).ok()?;
            Some((coeffs, p, p_inv))
        })
        .ok_or(SchemeError::SamplingExhausted(MAX_KEYGEN_DRAWS))?;

    let g_pub = generator.mul(f, &p_inv);
    let dual_support = recover_support(&gab.code().dual())?;
    let pk = PublicKey { field: f.clone(), params: params.clone(), g_pub };
    let sk = SecretKey {
        field: f.clone(),
        params: params.clone(),
        support,
        generator,
        v_basis,
        mask_coeffs,
        p,
        p_inv,
        dual_support,
    };
    Ok((pk, sk))
}

/// `sum_l v_l M_l`
pub fn combine_mask<F: ExtField>(f: &F, v_basis: &[F::Elem], coeffs: &[Matrix<u32>]) -> Matrix<F::Elem> {
    let (r, c) = (coeffs[0].rows(), coeffs[0].cols());
    let mut out = Matrix::zeros(f, r, c);
    for i in 0..r {
        for j in 0..c {
            let x = v_basis.iter().zip(coeffs).fold(f.zero(), |acc, (v, m)| {
                f.add(&acc, &f.mul(v, &f.from_base(*m.get(i, j))))
            });
            out.set(i, j, x);
        }
    }
    out
}

/// `c = msg · G_pub + e` with a fresh error of rank exactly `t`.
pub fn encrypt<F: ExtField, R: Rng + ?Sized>(
    pk: &PublicKey<F>,
    msg: &[F::Elem],
    rng: &mut R,
) -> Result<Vec<F::Elem>, SchemeError> {
    let e = random_rank_t_vector(&pk.field, pk.params.n, pk.params.t, rng)?;
    encrypt_with_error(pk, msg, &e)
}

pub fn encrypt_with_error<F: ExtField>(
    pk: &PublicKey<F>,
    msg: &[F::Elem],
    e: &[F::Elem],
) -> Result<Vec<F::Elem>, SchemeError> {
    let (n, k) = (pk.params.n, pk.params.k);
    if msg.len() != k {
        return Err(SchemeError::LengthMismatch { expected: k, got: msg.len() });
    }
    if e.len() != n {
        return Err(SchemeError::LengthMismatch { expected: n, got: e.len() });
    }
    Ok(add_vec(&pk.field, &pk.g_pub.vec_mul(&pk.field, msg), e))
}

/// Decodes `c P = m G + e P` in `Gab_k(b)` and solves `m G = c P - e P`.
pub fn decrypt<F: ExtField>(sk: &SecretKey<F>, c: &[F::Elem]) -> Result<Vec<F::Elem>, SchemeError> {
    let (f, params) = (&sk.field, &sk.params);
    if c.len() != params.n {
        return Err(SchemeError::LengthMismatch { expected: params.n, got: c.len() });
    }
    let cp = sk.p.vec_mul(f, c);
    let (_, ep) = sk.gabidulin().decode(&cp, params.decode_radius())?;
    let rank = rank_weight(f, &ep);
    let bound = params.t * params.lambda;
    if rank > bound {
        return Err(SchemeError::MaskedErrorTooLarge { rank, bound });
    }
    let codeword = sub_vec(f, &cp, &ep);
    sk.generator
        .solve_left(f, &codeword)
        .map_err(|_| SchemeError::Decode(DecodeFailure::NotDivisible))
}
