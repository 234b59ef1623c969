//! Versioned JSON documents for fields, codes, keys, ciphertexts and
//! recovered keys.
//!
//! Elements are little-endian coefficient lists over `F_q` (each entry an
//! `F_q` element in the integer encoding of [`crate::field::BaseField`]);
//! matrices are row-major lists of rows. Every document carries a `format`
//! tag and a `version`, both checked on read, and all decoded data is
//! re-validated (field moduli, coefficient ranges, shapes, key consistency).

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::attack::RecoveredKey;
use crate::field::{ExtField, FieldError, FieldSpec};
use crate::gabidulin::{moore_matrix, recover_support, GabidulinCode, GabidulinError};
use crate::linalg::Matrix;
use crate::loidreau::{combine_mask, PublicKey, SchemeError, SchemeParams, SecretKey};
use crate::subspaces::{rank_weight, Code};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected a `{expected}` document, found `{found}`")]
    WrongFormat { expected: &'static str, found: String },
    #[error("unsupported format version {0} (this build reads version {FORMAT_VERSION})")]
    Version(u64),
    #[error("document header lacks `format` or `version`")]
    MissingHeader,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Gabidulin(#[from] GabidulinError),
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("document is over F_q^m with spec {found:?}, expected {expected:?}")]
    FieldMismatch { expected: Box<FieldSpec>, found: Box<FieldSpec> },
}

/// A JSON document type with a fixed format tag.
pub trait Document: Serialize + DeserializeOwned {
    const FORMAT: &'static str;
}

/// Pretty JSON with `format` and `version` first, then the body fields.
pub fn write_document<D: Document>(doc: &D) -> String {
    let mut map = serde_json::Map::new();
    map.insert("format".into(), Value::from(D::FORMAT));
    map.insert("version".into(), Value::from(FORMAT_VERSION));
    match serde_json::to_value(doc).expect("documents serialize") {
        Value::Object(body) => map.extend(body),
        other => {
            map.insert("body".into(), other);
        }
    }
    let mut out = serde_json::to_string_pretty(&Value::Object(map)).expect("values serialize");
    out.push('\n');
    out
}

pub fn read_document<D: Document>(text: &str) -> Result<D, IoError> {
    let Value::Object(mut map) = serde_json::from_str::<Value>(text)? else {
        return Err(IoError::MissingHeader);
    };
    let format = map.remove("format").ok_or(IoError::MissingHeader)?;
    let version = map.remove("version").ok_or(IoError::MissingHeader)?;
    let format = format.as_str().ok_or(IoError::MissingHeader)?;
    if format != D::FORMAT {
        return Err(IoError::WrongFormat { expected: D::FORMAT, found: format.to_string() });
    }
    let version = version.as_u64().ok_or(IoError::MissingHeader)?;
    if version != FORMAT_VERSION as u64 {
        return Err(IoError::Version(version));
    }
    Ok(serde_json::from_value(Value::Object(map))?)
}

/// The `format` tag of a document, if present.
pub fn peek_format(text: &str) -> Option<String> {
    let value: Value = serde_json::from_str(text).ok()?;
    value.get("format")?.as_str().map(str::to_string)
}

pub type ElemJson = Vec<u32>;
pub type VectorJson = Vec<ElemJson>;
pub type MatrixJson = Vec<VectorJson>;

pub fn encode_elem<F: ExtField>(f: &F, x: &F::Elem) -> ElemJson {
    f.coords(x)
}

pub fn decode_elem<F: ExtField>(f: &F, coeffs: &[u32]) -> Result<F::Elem, IoError> {
    if coeffs.len() != f.degree() {
        return Err(IoError::Malformed(format!(
            "element has {} coefficients, expected {}",
            coeffs.len(),
            f.degree()
        )));
    }
    let q = f.q();
    if let Some(c) = coeffs.iter().find(|&&c| c >= q) {
        return Err(IoError::Malformed(format!("coefficient {c} is not below q = {q}")));
    }
    Ok(f.from_coords(coeffs))
}

pub fn encode_vector<F: ExtField>(f: &F, v: &[F::Elem]) -> VectorJson {
    v.iter().map(|x| encode_elem(f, x)).collect()
}

pub fn decode_vector<F: ExtField>(f: &F, v: &[ElemJson], len: usize) -> Result<Vec<F::Elem>, IoError> {
    if v.len() != len {
        return Err(IoError::Malformed(format!("vector has length {}, expected {len}", v.len())));
    }
    v.iter().map(|c| decode_elem(f, c)).collect()
}

pub fn encode_matrix<F: ExtField>(f: &F, m: &Matrix<F::Elem>) -> MatrixJson {
    m.row_iter().map(|row| encode_vector(f, row)).collect()
}

pub fn decode_matrix<F: ExtField>(
    f: &F,
    m: &[VectorJson],
    rows: usize,
    cols: usize,
) -> Result<Matrix<F::Elem>, IoError> {
    if m.len() != rows {
        return Err(IoError::Malformed(format!("matrix has {} rows, expected {rows}", m.len())));
    }
    let rows = m.iter().map(|r| decode_vector(f, r, cols)).collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(cols, rows))
}

fn encode_fq_matrix(m: &Matrix<u32>) -> Vec<Vec<u32>> {
    m.to_rows()
}

fn decode_fq_matrix(m: &[Vec<u32>], n: usize, q: u32) -> Result<Matrix<u32>, IoError> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(IoError::Malformed(format!("expected an {n} × {n} matrix over F_q")));
    }
    if m.iter().flatten().any(|&c| c >= q) {
        return Err(IoError::Malformed(format!("F_q entry not below q = {q}")));
    }
    Ok(Matrix::from_rows(n, m.to_vec()))
}

fn check_field<F: ExtField>(f: &F, spec: &FieldSpec) -> Result<(), IoError> {
    spec.validate()?;
    if f.spec() != spec {
        return Err(IoError::FieldMismatch { expected: Box::new(f.spec().clone()), found: Box::new(spec.clone()) });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldFile {
    #[serde(flatten)]
    pub spec: FieldSpec,
}

impl Document for FieldFile {
    const FORMAT: &'static str = "loidreau.field";
}

/// A linear code as its canonical reduced basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub basis: MatrixJson,
}

impl Document for CodeFile {
    const FORMAT: &'static str = "loidreau.code";
}

impl CodeFile {
    pub fn from_code<F: ExtField>(code: &Code<F>) -> Self {
        let f = code.field();
        CodeFile { field: f.spec().clone(), n: code.len(), k: code.dim(), basis: encode_matrix(f, code.basis()) }
    }

    /// Rejects bases that are not of full rank `k`.
    pub fn to_code<F: ExtField>(&self, f: &F) -> Result<Code<F>, IoError> {
        check_field(f, &self.field)?;
        let basis = decode_matrix(f, &self.basis, self.k, self.n)?;
        let code = Code::from_generator(f, &basis);
        if code.dim() != self.k {
            return Err(IoError::Malformed(format!("basis has rank {}, expected k = {}", code.dim(), self.k)));
        }
        Ok(code)
    }
}

/// A Gabidulin code as `(support, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GabidulinFile {
    pub field: FieldSpec,
    pub k: usize,
    pub support: VectorJson,
}

impl Document for GabidulinFile {
    const FORMAT: &'static str = "loidreau.gabidulin";
}

impl GabidulinFile {
    pub fn from_code<F: ExtField>(code: &GabidulinCode<F>) -> Self {
        let f = code.field();
        GabidulinFile { field: f.spec().clone(), k: code.dim(), support: encode_vector(f, code.support()) }
    }

    pub fn to_code<F: ExtField>(&self, f: &F) -> Result<GabidulinCode<F>, IoError> {
        check_field(f, &self.field)?;
        let support = decode_vector(f, &self.support, self.support.len())?;
        Ok(GabidulinCode::new(f, support, self.k)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicKeyFile {
    pub params: SchemeParams,
    /// `k × n` public generator.
    pub g_pub: MatrixJson,
}

impl Document for PublicKeyFile {
    const FORMAT: &'static str = "loidreau.public-key";
}

impl PublicKeyFile {
    pub fn from_key<F: ExtField>(pk: &PublicKey<F>) -> Self {
        PublicKeyFile { params: pk.params.clone(), g_pub: encode_matrix(&pk.field, &pk.g_pub) }
    }

    pub fn to_key<F: ExtField>(&self, f: &F) -> Result<PublicKey<F>, IoError> {
        check_field(f, &self.params.field)?;
        self.params.validate()?;
        let g_pub = decode_matrix(f, &self.g_pub, self.params.k, self.params.n)?;
        if g_pub.rank(f) != self.params.k {
            return Err(IoError::Malformed("public generator is rank deficient".into()));
        }
        Ok(PublicKey { field: f.clone(), params: self.params.clone(), g_pub })
    }
}

/// Secret data from which the rest of the key is rebuilt on read.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecretKeyFile {
    pub params: SchemeParams,
    /// Support of the secret Gabidulin code.
    pub support: VectorJson,
    /// Basis of `V`, starting with 1.
    pub v_basis: VectorJson,
    /// `F_q` matrices `M_l` with `P = sum_l v_l M_l`.
    pub mask_coeffs: Vec<Vec<Vec<u32>>>,
}

impl Document for SecretKeyFile {
    const FORMAT: &'static str = "loidreau.secret-key";
}

impl SecretKeyFile {
    pub fn from_key<F: ExtField>(sk: &SecretKey<F>) -> Self {
        let f = &sk.field;
        SecretKeyFile {
            params: sk.params.clone(),
            support: encode_vector(f, &sk.support),
            v_basis: encode_vector(f, &sk.v_basis),
            mask_coeffs: sk.mask_coeffs.iter().map(encode_fq_matrix).collect(),
        }
    }

    pub fn to_key<F: ExtField>(&self, f: &F) -> Result<SecretKey<F>, IoError> {
        check_field(f, &self.params.field)?;
        let params = &self.params;
        params.validate()?;
        let (n, k, lambda) = (params.n, params.k, params.lambda);
        let support = decode_vector(f, &self.support, n)?;
        let v_basis = decode_vector(f, &self.v_basis, lambda)?;
        if !f.is_one(&v_basis[0]) || rank_weight(f, &v_basis) != lambda {
            return Err(IoError::Malformed("V basis must start with 1 and be F_q-independent".into()));
        }
        if self.mask_coeffs.len() != lambda {
            return Err(IoError::Malformed(format!("expected {lambda} mask matrices")));
        }
        let mask_coeffs = self
            .mask_coeffs
            .iter()
            .map(|m| decode_fq_matrix(m, n, f.q()))
            .collect::<Result<Vec<_>, _>>()?;
        let gab = GabidulinCode::new(f, support.clone(), k)?;
        let p = combine_mask(f, &v_basis, &mask_coeffs);
        let p_inv = p.inverse(f).map_err(|_| IoError::Malformed("mask matrix is singular".into()))?;
        let dual_support = recover_support(&gab.code().dual())?;
        Ok(SecretKey {
            field: f.clone(),
            params: params.clone(),
            generator: gab.generator_matrix(),
            support,
            v_basis,
            mask_coeffs,
            p,
            p_inv,
            dual_support,
        })
    }
}

/// A vector over `F_{q^m}`: a ciphertext or a plaintext.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorFile<const PLAIN: bool> {
    pub field: FieldSpec,
    pub data: VectorJson,
}

pub type CiphertextFile = VectorFile<false>;
pub type PlaintextFile = VectorFile<true>;

impl Document for CiphertextFile {
    const FORMAT: &'static str = "loidreau.ciphertext";
}

impl Document for PlaintextFile {
    const FORMAT: &'static str = "loidreau.plaintext";
}

impl<const PLAIN: bool> VectorFile<PLAIN> {
    pub fn from_vector<F: ExtField>(f: &F, v: &[F::Elem]) -> Self {
        VectorFile { field: f.spec().clone(), data: encode_vector(f, v) }
    }

    pub fn to_vector<F: ExtField>(&self, f: &F, len: usize) -> Result<Vec<F::Elem>, IoError> {
        check_field(f, &self.field)?;
        decode_vector(f, &self.data, len)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveredKeyFile {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub chosen_support: VectorJson,
    pub decoding_support: VectorJson,
    pub gamma: ElemJson,
    pub q0: Vec<Vec<u32>>,
    pub q1: Vec<Vec<u32>>,
    pub public_generator: MatrixJson,
}

impl Document for RecoveredKeyFile {
    const FORMAT: &'static str = "loidreau.recovered-key";
}

impl RecoveredKeyFile {
    pub fn from_key<F: ExtField>(key: &RecoveredKey<F>) -> Self {
        let f = &key.field;
        RecoveredKeyFile {
            field: f.spec().clone(),
            n: key.n,
            k: key.k,
            chosen_support: encode_vector(f, &key.chosen_support),
            decoding_support: encode_vector(f, &key.decoding_support),
            gamma: encode_elem(f, &key.gamma),
            q0: encode_fq_matrix(&key.q0),
            q1: encode_fq_matrix(&key.q1),
            public_generator: encode_matrix(f, &key.public_generator),
        }
    }

    /// Rebuilds `Q` and checks `C_pub = Gab_k(a'') Q^{-1}`.
    pub fn to_key<F: ExtField>(&self, f: &F) -> Result<RecoveredKey<F>, IoError> {
        check_field(f, &self.field)?;
        let (n, k) = (self.n, self.k);
        if !(1..n).contains(&k) || n > f.degree() {
            return Err(IoError::Malformed(format!("need 1 <= k < n <= m, got k = {k}, n = {n}")));
        }
        let chosen_support = decode_vector(f, &self.chosen_support, n)?;
        let decoding_support = decode_vector(f, &self.decoding_support, n)?;
        let gamma = decode_elem(f, &self.gamma)?;
        let q0 = decode_fq_matrix(&self.q0, n, f.q())?;
        let q1 = decode_fq_matrix(&self.q1, n, f.q())?;
        let public_generator = decode_matrix(f, &self.public_generator, k, n)?;
        let q = combine_mask(f, &[f.one(), gamma.clone()], &[q0.transpose(), q1.transpose()]);
        let q_inv = q.inverse(f).map_err(|_| IoError::Malformed("Q is singular".into()))?;
        let secret = Code::from_generator(f, &moore_matrix(f, &decoding_support, k).mul(f, &q_inv));
        if secret != Code::from_generator(f, &public_generator) {
            return Err(IoError::Malformed("Gab_k(a'') Q^-1 differs from the public code".into()));
        }
        Ok(RecoveredKey {
            field: f.clone(),
            n,
            k,
            chosen_support,
            decoding_support,
            gamma,
            q0,
            q1,
            q,
            q_inv,
            decode_radius: (n - k) / 2,
            public_generator,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::attack;
    use crate::field::{BinaryField, GenericField};
    use crate::loidreau::{decrypt, encrypt, keygen};
    use crate::subspaces::random_vector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn header_is_checked() {
        let spec = FieldSpec::binary(5).unwrap();
        let text = write_document(&FieldFile { spec: spec.clone() });
        assert_eq!(peek_format(&text).as_deref(), Some("loidreau.field"));
        assert_eq!(read_document::<FieldFile>(&text).unwrap().spec, spec);
        assert!(matches!(read_document::<CodeFile>(&text), Err(IoError::WrongFormat { .. })));
        let bumped = text.replace("\"version\": 1", "\"version\": 7");
        assert!(matches!(read_document::<FieldFile>(&bumped), Err(IoError::Version(7))));
        assert!(matches!(read_document::<FieldFile>("{\"p\": 2}"), Err(IoError::MissingHeader)));
    }

    #[test]
    fn elements_are_range_checked() {
        let f = GenericField::new(FieldSpec::new(3, 1, 4, None, None).unwrap()).unwrap();
        assert!(decode_elem(&f, &[0, 1, 2, 2]).is_ok());
        assert!(decode_elem(&f, &[0, 1, 3, 2]).is_err());
        assert!(decode_elem(&f, &[0, 1, 2]).is_err());
    }

    #[test]
    fn keys_survive_serialization() {
        let spec = FieldSpec::binary(16).unwrap();
        let f = BinaryField::new(spec.clone()).unwrap();
        let params = SchemeParams::new(spec, 16, 10, 2).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let (pk, sk) = keygen(&f, &params, &mut rng).unwrap();

        let pk2 = read_document::<PublicKeyFile>(&write_document(&PublicKeyFile::from_key(&pk)))
            .unwrap()
            .to_key(&f)
            .unwrap();
        let sk2 = read_document::<SecretKeyFile>(&write_document(&SecretKeyFile::from_key(&sk)))
            .unwrap()
            .to_key(&f)
            .unwrap();
        assert_eq!(pk2.g_pub, pk.g_pub);
        assert_eq!(sk2.p, sk.p);

        let msg = random_vector(&f, 10, &mut rng);
        let c = encrypt(&pk2, &msg, &mut rng).unwrap();
        let ct = write_document(&CiphertextFile::from_vector(&f, &c));
        let c2 = read_document::<CiphertextFile>(&ct).unwrap().to_vector(&f, 16).unwrap();
        assert_eq!(decrypt(&sk2, &c2).unwrap(), msg);
        assert!(read_document::<PlaintextFile>(&ct).is_err());

        let key = attack(&pk, &mut rng).unwrap();
        let text = write_document(&RecoveredKeyFile::from_key(&key));
        let key2 = read_document::<RecoveredKeyFile>(&text).unwrap().to_key(&f).unwrap();
        assert_eq!(key2.q, key.q);

        let other = BinaryField::new(FieldSpec::binary(17).unwrap()).unwrap();
        assert!(matches!(
            read_document::<PublicKeyFile>(&write_document(&PublicKeyFile::from_key(&pk))).unwrap().to_key(&other),
            Err(IoError::FieldMismatch { .. })
        ));
    }

    #[test]
    fn codes_reject_rank_deficient_bases() {
        let f = BinaryField::new(FieldSpec::binary(6).unwrap()).unwrap();
        let mut file = CodeFile { field: f.spec().clone(), n: 3, k: 2, basis: vec![vec![vec![1, 0, 0, 0, 0, 0]; 3]; 2] };
        assert!(file.to_code(&f).is_err());
        file.basis[1][2] = vec![0, 1, 0, 0, 0, 0];
        let code = file.to_code(&f).unwrap();
        assert_eq!(CodeFile::from_code(&code).to_code(&f).unwrap(), code);
    }
}
