//! Gabidulin codes: Moore-matrix generators, duals, support recovery by
//! iterated Frobenius intersection, and a reconstruction decoder correcting
//! up to `⌊(n-k)/2⌋` rank errors.

mod linearized;

use thiserror::Error;

pub use linearized::LinearizedPoly;

use crate::field::ExtField;
use crate::linalg::Matrix;
use crate::subspaces::{frobenius_vec, rank_weight, sub_vec, Code};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GabidulinError {
    #[error("support has rank {rank}, expected {n}")]
    DependentSupport { rank: usize, n: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("not a Gabidulin code: intersection step {step} gave dimension {got}, expected {expected}")]
    NotGabidulin { step: usize, expected: usize, got: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeFailure {
    #[error("radius {t} exceeds the unique-decoding bound {bound}")]
    RadiusTooLarge { t: usize, bound: usize },
    #[error("received word has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("reconstruction system has only the trivial solution")]
    NoSolution,
    #[error("error-locator does not left-divide the reconstruction polynomial")]
    NotDivisible,
    #[error("residual error has rank {rank} > {t}")]
    TooManyErrors { rank: usize, t: usize },
}

/// `Gab_k(a) = { (f(a_1), …, f(a_n)) : qdeg f < k }`.
#[derive(Clone, Debug)]
pub struct GabidulinCode<F: ExtField> {
    field: F,
    support: Vec<F::Elem>,
    k: usize,
}

impl<F: ExtField> GabidulinCode<F> {
    pub fn new(field: &F, support: Vec<F::Elem>, k: usize) -> Result<Self, GabidulinError> {
        let n = support.len();
        if k < 1 || k > n || n > field.degree() {
            return Err(GabidulinError::InvalidParameters(format!(
                "need 1 <= k <= n <= m, got k = {k}, n = {n}, m = {}",
                field.degree()
            )));
        }
        let rank = rank_weight(field, &support);
        if rank != n {
            return Err(GabidulinError::DependentSupport { rank, n });
        }
        Ok(GabidulinCode { field: field.clone(), support, k })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn support(&self) -> &[F::Elem] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    /// `k × n` Moore matrix, row `i` equal to `a^{[i]}`.
    pub fn generator_matrix(&self) -> Matrix<F::Elem> {
        moore_matrix(&self.field, &self.support, self.k)
    }

    pub fn code(&self) -> Code<F> {
        Code::from_generator(&self.field, &self.generator_matrix())
    }

    /// `msg · G`, i.e. the evaluation of `sum msg_i X^{q^i}` on the support.
    pub fn encode(&self, msg: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(msg.len(), self.k, "message length must equal k");
        LinearizedPoly::from_coeffs(&self.field, msg.to_vec()).eval_vec(&self.field, &self.support)
    }

    /// `Gab_{n-k}(a*)` equal to the orthogonal of `self`.
    pub fn dual(&self) -> Result<Self, GabidulinError> {
        let n = self.len();
        if self.k == n {
            return Err(GabidulinError::InvalidParameters("the dual of Gab_n is zero".into()));
        }
        let support = recover_support(&self.code().dual())?;
        Self::new(&self.field, support, n - self.k)
    }

    /// Unique-decoding radius `⌊(n-k)/2⌋`.
    pub fn radius(&self) -> usize {
        (self.len() - self.k) / 2
    }

    /// Finds `f` with `qdeg f < k` and `rank_weight(y - f(a)) <= t`.
    ///
    /// Solves `V(y_i) = N(a_i)` for `qdeg V <= t`, `qdeg N <= k - 1 + t`, takes
    /// any nonzero solution, and left-divides `N = V ∘ f`.
    pub fn decode(
        &self,
        y: &[F::Elem],
        t: usize,
    ) -> Result<(LinearizedPoly<F::Elem>, Vec<F::Elem>), DecodeFailure> {
        let (f, n, k) = (&self.field, self.len(), self.k);
        if y.len() != n {
            return Err(DecodeFailure::LengthMismatch { expected: n, got: y.len() });
        }
        if t > self.radius() {
            return Err(DecodeFailure::RadiusTooLarge { t, bound: self.radius() });
        }
        let unknowns = 2 * t + k + 1;
        let mut system = Matrix::zeros(f, n, unknowns);
        for i in 0..n {
            let mut yp = y[i].clone();
            for j in 0..=t {
                if j > 0 {
                    yp = f.frobenius(&yp, 1);
                }
                system.set(i, j, yp.clone());
            }
            let mut ap = self.support[i].clone();
            for l in 0..k + t {
                if l > 0 {
                    ap = f.frobenius(&ap, 1);
                }
                system.set(i, t + 1 + l, f.neg(&ap));
            }
        }
        let kernel = system.kernel(f);
        if kernel.rows() == 0 {
            return Err(DecodeFailure::NoSolution);
        }
        let sol = kernel.row(0);
        let locator = LinearizedPoly::from_coeffs(f, sol[..=t].to_vec());
        let numerator = LinearizedPoly::from_coeffs(f, sol[t + 1..].to_vec());
        let (quot, rem) = numerator.left_divide(f, &locator).ok_or(DecodeFailure::NoSolution)?;
        if !rem.is_zero() || quot.qdeg().is_some_and(|d| d >= k) {
            return Err(DecodeFailure::NotDivisible);
        }
        let e = sub_vec(f, y, &quot.eval_vec(f, &self.support));
        let rank = rank_weight(f, &e);
        if rank > t {
            return Err(DecodeFailure::TooManyErrors { rank, t });
        }
        Ok((quot, e))
    }
}

pub fn moore_matrix<F: ExtField>(f: &F, support: &[F::Elem], rows: usize) -> Matrix<F::Elem> {
    let mut out = Vec::with_capacity(rows);
    let mut row = support.to_vec();
    for i in 0..rows {
        if i > 0 {
            row = frobenius_vec(f, &row, 1);
        }
        out.push(row.clone());
    }
    Matrix::from_rows(support.len(), out)
}

/// A support `a` with `Gab_k(a) = C`, `k = dim C`, scaled so that its first
/// nonzero entry is 1.
///
/// Intersects `C ∩ C^{[1]}` exactly `k - 1` times, which for a Gabidulin code
/// lowers the dimension by one each time and ends at `⟨a^{[k-1]}⟩`.
pub fn recover_support<F: ExtField>(code: &Code<F>) -> Result<Vec<F::Elem>, GabidulinError> {
    let f = code.field();
    let k = code.dim();
    if k == 0 {
        return Err(GabidulinError::NotGabidulin { step: 0, expected: 1, got: 0 });
    }
    let mut cur = code.clone();
    for step in 1..k {
        cur = cur.intersect(&cur.frobenius(1)).expect("same length");
        if cur.dim() != k - step {
            return Err(GabidulinError::NotGabidulin { step, expected: k - step, got: cur.dim() });
        }
    }
    let shifted = cur.first_generator().expect("dimension one").to_vec();
    let mut support = frobenius_vec(f, &shifted, -((k - 1) as i64));
    if let Some(lead) = support.iter().find(|x| !f.is_zero(x)) {
        let inv = f.inv(lead).unwrap();
        f.scale(&mut support, &inv);
    }
    let rebuilt = Code::from_generator(f, &moore_matrix(f, &support, k));
    if rebuilt != *code || rank_weight(f, &support) != code.len() {
        return Err(GabidulinError::NotGabidulin { step: k, expected: k, got: rebuilt.dim() });
    }
    Ok(support)
}
