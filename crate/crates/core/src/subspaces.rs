//! Vectors over `F_{q^m}`, rank weight and support, `F_q`-subspaces of
//! `F_{q^m}`, and linear codes stored as canonical row spaces.

use rand::Rng;
use thiserror::Error;

use crate::field::{ExtField, FieldOps};
use crate::linalg::{kernel_from_rref, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubspaceError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("infeasible dimensions: {0}")]
    Infeasible(String),
}

pub fn add_vec<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn sub_vec<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

pub fn scale_vec<F: FieldOps>(f: &F, c: &F::Elem, a: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|x| f.mul(c, x)).collect()
}

/// Canonical bilinear form `sum a_i b_i`.
pub fn dot<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

/// Componentwise `x_i^{q^s}`.
pub fn frobenius_vec<F: ExtField>(f: &F, v: &[F::Elem], s: i64) -> Vec<F::Elem> {
    v.iter().map(|x| f.frobenius(x, s)).collect()
}

pub fn frobenius_matrix<F: ExtField>(f: &F, m: &Matrix<F::Elem>, s: i64) -> Matrix<F::Elem> {
    if s.rem_euclid(f.degree() as i64) == 0 {
        return m.clone();
    }
    m.map(|x| f.frobenius(x, s))
}

/// The `m × n` matrix over `F_q` whose column `i` holds the coordinates of `x_i`.
pub fn expand_to_fq<F: ExtField>(f: &F, x: &[F::Elem]) -> Matrix<u32> {
    let cols: Vec<Vec<u32>> = x.iter().map(|e| f.coords(e)).collect();
    Matrix::from_rows(f.degree(), cols).transpose()
}

/// Dimension over `F_q` of the span of the entries.
pub fn rank_weight<F: ExtField>(f: &F, x: &[F::Elem]) -> usize {
    support(f, x).dim()
}

pub fn support<F: ExtField>(f: &F, x: &[F::Elem]) -> FqSubspace<F::Elem> {
    FqSubspace::span(f, x)
}

/// An `F_q`-subspace of `F_{q^m}` with a canonical basis (the nonzero rows of
/// the reduced echelon form of the coordinate matrix).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqSubspace<E> {
    basis: Vec<E>,
}

impl<E: Clone + PartialEq> FqSubspace<E> {
    pub fn span<F: ExtField<Elem = E>>(f: &F, elems: &[E]) -> Self {
        let rows: Vec<Vec<u32>> = elems.iter().map(|e| f.coords(e)).collect();
        let mut coords = Matrix::from_rows(f.degree(), rows);
        let rank = coords.rref_in_place(f.base()).len();
        let basis = (0..rank).map(|i| f.from_coords(coords.row(i))).collect();
        FqSubspace { basis }
    }

    pub fn zero() -> Self {
        FqSubspace { basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[E] {
        &self.basis
    }

    pub fn contains<F: ExtField<Elem = E>>(&self, f: &F, x: &E) -> bool {
        let mut elems = self.basis.clone();
        elems.push(x.clone());
        Self::span(f, &elems).dim() == self.dim()
    }

    pub fn contains_space<F: ExtField<Elem = E>>(&self, f: &F, other: &Self) -> bool {
        self.sum(f, other).dim() == self.dim()
    }

    pub fn sum<F: ExtField<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut elems = self.basis.clone();
        elems.extend_from_slice(&other.basis);
        Self::span(f, &elems)
    }

    /// Span of all products `u v`, `u` in `self`, `v` in `other`.
    pub fn product<F: ExtField<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let prods: Vec<E> = self
            .basis
            .iter()
            .flat_map(|u| other.basis.iter().map(move |v| f.mul(u, v)))
            .collect();
        Self::span(f, &prods)
    }
}

/// An `F_{q^m}`-linear code of length `n`, stored by the reduced row-echelon
/// form of a generator matrix. Two codes are equal iff their row spaces are.
#[derive(Clone, Debug)]
pub struct Code<F: ExtField> {
    field: F,
    basis: Matrix<F::Elem>,
    pivots: Vec<usize>,
}

impl<F: ExtField> PartialEq for Code<F> {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl<F: ExtField> Eq for Code<F> {}

impl<F: ExtField> Code<F> {
    /// Row space of `generator` (rows need not be independent).
    pub fn from_generator(field: &F, generator: &Matrix<F::Elem>) -> Self {
        let mut basis = generator.clone();
        let pivots = basis.rref_in_place(field);
        let basis = basis.select_rows(0..pivots.len());
        Code { field: field.clone(), basis, pivots }
    }

    pub fn from_rows(field: &F, n: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        Self::from_generator(field, &Matrix::from_rows(n, rows))
    }

    pub fn zero(field: &F, n: usize) -> Self {
        Code { field: field.clone(), basis: Matrix::from_rows(n, Vec::new()), pivots: Vec::new() }
    }

    pub fn full(field: &F, n: usize) -> Self {
        Code { field: field.clone(), basis: Matrix::identity(field, n), pivots: (0..n).collect() }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Code length `n`.
    pub fn len(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical (RREF) generator matrix.
    pub fn basis(&self) -> &Matrix<F::Elem> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_len(&self, other: usize) -> Result<(), SubspaceError> {
        if self.len() == other {
            Ok(())
        } else {
            Err(SubspaceError::LengthMismatch(self.len(), other))
        }
    }

    /// `v` minus its projection along the pivots; zero iff `v` is in the code.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut r = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if !f.is_zero(&r[p]) {
                let c = f.neg(&r[p]);
                f.axpy(&mut r, &c, self.basis.row(i));
            }
        }
        r
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        v.len() == self.len() && self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    pub fn contains_code(&self, other: &Self) -> bool {
        other.basis.row_iter().all(|r| self.contains(r))
    }

    /// Orthogonal complement for `sum c_i d_i`.
    pub fn dual(&self) -> Self {
        let k = kernel_from_rref(&self.field, &self.basis, &self.pivots);
        Self::from_generator(&self.field, &k)
    }

    /// `C^{[s]}`: componentwise `q^s`-th powers, `s` taken mod `m`.
    pub fn frobenius(&self, s: i64) -> Self {
        // the Frobenius fixes 0 and 1, so the image of an RREF basis is RREF
        Code {
            field: self.field.clone(),
            basis: frobenius_matrix(&self.field, &self.basis, s),
            pivots: self.pivots.clone(),
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.check_len(other.len())?;
        Ok(Self::from_generator(&self.field, &self.basis.vstack(&other.basis)))
    }

    /// `C ∩ D` from the left kernel of the residues of `D`'s basis modulo `C`.
    pub fn intersect(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.check_len(other.len())?;
        let n = self.len();
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Self::zero(&self.field, n));
        }
        let residues: Vec<Vec<F::Elem>> = other.basis.row_iter().map(|r| self.reduce(r)).collect();
        let combos = Matrix::from_rows(n, residues).left_kernel(&self.field);
        if combos.rows() == 0 {
            return Ok(Self::zero(&self.field, n));
        }
        Ok(Self::from_generator(&self.field, &combos.mul(&self.field, &other.basis)))
    }

    /// Row space of `basis · m` for an `n × n'` matrix `m`.
    pub fn mul_matrix(&self, m: &Matrix<F::Elem>) -> Self {
        Self::from_generator(&self.field, &self.basis.mul(&self.field, m))
    }

    /// First row of the canonical basis.
    pub fn first_generator(&self) -> Option<&[F::Elem]> {
        (self.dim() > 0).then(|| self.basis.row(0))
    }
}

pub fn random_vector<F: ExtField, R: Rng + ?Sized>(f: &F, n: usize, rng: &mut R) -> Vec<F::Elem> {
    (0..n).map(|_| f.random(rng)).collect()
}

pub fn random_matrix<F: ExtField, R: Rng + ?Sized>(
    f: &F,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Matrix<F::Elem> {
    Matrix::random(rows, cols, |r| f.random(r), rng)
}

/// Uniform `k`-dimensional code: uniform `k × n` matrices resampled until
/// they have full rank.
pub fn random_code<F: ExtField, R: Rng + ?Sized>(
    f: &F,
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<Code<F>, SubspaceError> {
    if k > n {
        return Err(SubspaceError::Infeasible(format!("k = {k} > n = {n}")));
    }
    loop {
        let code = Code::from_generator(f, &random_matrix(f, k, n, rng));
        if code.dim() == k {
            return Ok(code);
        }
    }
}

/// Uniform among vectors with `F_q`-independent entries (`n ≤ m`).
pub fn random_full_rank_vector<F: ExtField, R: Rng + ?Sized>(
    f: &F,
    n: usize,
    rng: &mut R,
) -> Result<Vec<F::Elem>, SubspaceError> {
    if n > f.degree() {
        return Err(SubspaceError::Infeasible(format!("n = {n} > m = {}", f.degree())));
    }
    loop {
        let v = random_vector(f, n, rng);
        if rank_weight(f, &v) == n {
            return Ok(v);
        }
    }
}

/// Uniform full-rank `rows × cols` matrix over `F_q` (`rows ≤ cols`).
pub fn random_full_rank_fq_matrix<F: ExtField, R: Rng + ?Sized>(
    f: &F,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Matrix<u32> {
    let q = f.q();
    loop {
        let m = Matrix::random(rows, cols, |r: &mut R| r.gen_range(0..q), rng);
        if m.rank(f.base()) == rows {
            return m;
        }
    }
}

/// `x = β · M` with `β` a random `F_q`-independent `t`-tuple and `M` a uniform
/// full-rank `t × n` matrix over `F_q`; `rank_weight(x) = t` exactly.
pub fn random_rank_t_vector<F: ExtField, R: Rng + ?Sized>(
    f: &F,
    n: usize,
    t: usize,
    rng: &mut R,
) -> Result<Vec<F::Elem>, SubspaceError> {
    if t > n.min(f.degree()) {
        return Err(SubspaceError::Infeasible(format!(
            "t = {t} > min(m, n) = {}",
            n.min(f.degree())
        )));
    }
    let beta = random_full_rank_vector(f, t, rng)?;
    let m = random_full_rank_fq_matrix(f, t, n, rng);
    Ok(fq_combination(f, &beta, &m))
}

/// `β · M` for `β` over `F_{q^m}` and `M` over `F_q`.
pub fn fq_combination<F: ExtField>(f: &F, beta: &[F::Elem], m: &Matrix<u32>) -> Vec<F::Elem> {
    let lifted = m.map(|&c| f.from_base(c));
    lifted.vec_mul(f, beta)
}
