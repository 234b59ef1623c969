use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use loidreau_core::attack::{
    attack_decrypt as recovered_decrypt, check_parameters, step1_recover_spaces, step2_find_gamma, step3_build_key,
    AttackError, AttackTrace, RecoveredKey,
};
use loidreau_core::distinguisher::{distinguish as run_distinguisher, gb_bound_check, Verdict};
use loidreau_core::field::{AnyField, ExtField, FieldOps, FieldSpec};
use loidreau_core::io::{
    encode_elem, peek_format, read_document, write_document, CiphertextFile, CodeFile, Document, ElemJson,
    PlaintextFile, PublicKeyFile, RecoveredKeyFile, SecretKeyFile,
};
use loidreau_core::linalg::Matrix;
use loidreau_core::loidreau::{self, SchemeParams};
use loidreau_core::subspaces::{random_code as sample_code, random_vector, Code};
use loidreau_core::{trial_rng, with_field};

use crate::{usage, CliError, CliResult, FieldArgs, SchemeArgs};

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

/// Writes `text` to `out`, or to stdout when `out` is `None`.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read<D: Document>(path: &Path) -> CliResult<D> {
    read_document(&read_text(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(suffix);
    PathBuf::from(s)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("reports serialize");
    out.push('\n');
    out
}

pub fn scheme_params(spec: FieldSpec, scheme: &SchemeArgs) -> CliResult<SchemeParams> {
    let n = scheme.n.ok_or_else(|| usage("--n is required"))?;
    let k = scheme.k.ok_or_else(|| usage("--k is required"))?;
    SchemeParams::new(spec, n, k, scheme.lambda).map_err(usage)
}

pub fn keygen(field: &FieldArgs, scheme: &SchemeArgs, seed: u64, out: &Path) -> CliResult<()> {
    let spec = field.spec()?;
    let params = scheme_params(spec.clone(), scheme)?;
    let any = AnyField::new(spec)?;
    with_field!(&any, |f| {
        let (pk, sk) = loidreau::keygen(f, &params, &mut trial_rng(seed, 0)).map_err(usage)?;
        emit(Some(&with_suffix(out, ".pub.json")), &write_document(&PublicKeyFile::from_key(&pk)))?;
        emit(Some(&with_suffix(out, ".sec.json")), &write_document(&SecretKeyFile::from_key(&sk)))
    })
}

pub fn encrypt(input: &Path, msg: Option<&Path>, msg_out: Option<&Path>, seed: u64, out: Option<&Path>) -> CliResult<()> {
    let file: PublicKeyFile = read(input)?;
    let any = AnyField::new(file.params.field.clone())?;
    with_field!(&any, |f| {
        let pk = file.to_key(f)?;
        let message = match msg {
            Some(path) => read::<PlaintextFile>(path)?.to_vector(f, pk.params.k)?,
            None => random_vector(f, pk.params.k, &mut trial_rng(seed, 0)),
        };
        let c = loidreau::encrypt(&pk, &message, &mut trial_rng(seed, 1)).map_err(usage)?;
        if let Some(path) = msg_out {
            emit(Some(path), &write_document(&PlaintextFile::from_vector(f, &message)))?;
        }
        emit(out, &write_document(&CiphertextFile::from_vector(f, &c)))
    })
}

pub fn decrypt(key: &Path, input: &Path, out: Option<&Path>) -> CliResult<()> {
    let file: SecretKeyFile = read(key)?;
    let ct: CiphertextFile = read(input)?;
    let any = AnyField::new(file.params.field.clone())?;
    with_field!(&any, |f| {
        let sk = file.to_key(f)?;
        let c = ct.to_vector(f, sk.params.n)?;
        let m = loidreau::decrypt(&sk, &c).map_err(|e| CliError::Failure(e.to_string()))?;
        emit(out, &write_document(&PlaintextFile::from_vector(f, &m)))
    })
}

/// A public key or a bare code, as accepted by `distinguish` and `attack`.
enum CodeInput {
    Public(PublicKeyFile),
    Code(CodeFile),
}

impl CodeInput {
    fn load(path: &Path) -> CliResult<Self> {
        let text = read_text(path)?;
        let format = peek_format(&text);
        let parsed = match format.as_deref() {
            Some(PublicKeyFile::FORMAT) => read_document(&text).map(CodeInput::Public),
            Some(CodeFile::FORMAT) => read_document(&text).map(CodeInput::Code),
            _ => {
                return Err(usage(format!(
                    "{}: expected a `{}` or `{}` document",
                    path.display(),
                    PublicKeyFile::FORMAT,
                    CodeFile::FORMAT
                )))
            }
        };
        parsed.map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    fn spec(&self) -> &FieldSpec {
        match self {
            CodeInput::Public(p) => &p.params.field,
            CodeInput::Code(c) => &c.field,
        }
    }

    /// The code, its generator against which plaintexts are expressed, and `λ`.
    fn open<F: ExtField>(&self, f: &F) -> CliResult<(Code<F>, Matrix<F::Elem>, usize)> {
        match self {
            CodeInput::Public(p) => {
                let pk = p.to_key(f)?;
                Ok((pk.code(), pk.g_pub, pk.params.lambda))
            }
            CodeInput::Code(c) => {
                let code = c.to_code(f)?;
                let generator = code.basis().clone();
                Ok((code, generator, 2))
            }
        }
    }
}

pub fn distinguish(input: &Path, lambda: usize, out: Option<&Path>) -> CliResult<()> {
    let source = CodeInput::load(input)?;
    let any = AnyField::new(source.spec().clone())?;
    with_field!(&any, |f| {
        let (code, _, _) = source.open(f)?;
        emit(out, &json(&run_distinguisher(&code, lambda)))
    })
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct StageTimes {
    pub step1_ms: f64,
    pub step2_ms: f64,
    pub step3_ms: f64,
    pub total_ms: f64,
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Runs the three attack steps, timing each one.
pub fn timed_attack<F: ExtField>(
    code: &Code<F>,
    generator: &Matrix<F::Elem>,
    lambda: usize,
    seed: u64,
) -> (Result<(RecoveredKey<F>, AttackTrace), AttackError>, StageTimes) {
    let mut times = StageTimes::default();
    let violations = check_parameters(code.len(), code.dim(), lambda);
    if !violations.is_empty() {
        return (Err(AttackError::Parameters(violations)), times);
    }
    let mut rng = trial_rng(seed, 1);
    let start = Instant::now();
    let result = (|| {
        let t = Instant::now();
        let s1 = step1_recover_spaces(code);
        times.step1_ms = millis(t);
        let s1 = s1?;
        let t = Instant::now();
        let sol = step2_find_gamma(&s1, &mut rng);
        times.step2_ms = millis(t);
        let sol = sol?;
        let t = Instant::now();
        let key = step3_build_key(&sol, code, generator);
        times.step3_ms = millis(t);
        Ok((key?, AttackTrace::collect(&s1, &sol)))
    })();
    times.total_ms = millis(start);
    (result, times)
}

#[derive(Serialize)]
struct AttackReport {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    failed_stage: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    n: usize,
    k: usize,
    timings: StageTimes,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<AttackTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<ElemJson>,
}

pub fn attack(input: &Path, seed: u64, out: Option<&Path>, report: Option<&Path>) -> CliResult<()> {
    let source = CodeInput::load(input)?;
    let any = AnyField::new(source.spec().clone())?;
    with_field!(&any, |f| {
        let (code, generator, lambda) = source.open(f)?;
        let (result, timings) = timed_attack(&code, &generator, lambda, seed);
        let (n, k) = (code.len(), code.dim());
        match result {
            Ok((key, trace)) => {
                let summary = AttackReport {
                    status: "success",
                    failed_stage: None,
                    error: None,
                    n,
                    k,
                    timings,
                    trace: Some(trace),
                    gamma: Some(encode_elem(f, &key.gamma)),
                };
                if let Some(path) = out {
                    emit(Some(path), &write_document(&RecoveredKeyFile::from_key(&key)))?;
                }
                emit(report, &json(&summary))
            }
            Err(e) => {
                let summary = AttackReport {
                    status: "failure",
                    failed_stage: Some(e.stage()),
                    error: Some(e.to_string()),
                    n,
                    k,
                    timings,
                    trace: None,
                    gamma: None,
                };
                emit(report, &json(&summary))?;
                Err(CliError::Failure(e.to_string()))
            }
        }
    })
}

pub fn attack_decrypt(key: &Path, input: &Path, out: Option<&Path>) -> CliResult<()> {
    let file: RecoveredKeyFile = read(key)?;
    let ct: CiphertextFile = read(input)?;
    let any = AnyField::new(file.field.clone())?;
    with_field!(&any, |f| {
        let rk = file.to_key(f)?;
        let c = ct.to_vector(f, rk.n)?;
        let m = recovered_decrypt(&rk, &c).map_err(|e| CliError::Failure(e.to_string()))?;
        emit(out, &write_document(&PlaintextFile::from_vector(f, &m)))
    })
}

pub fn random_code(field: &FieldArgs, n: usize, k: usize, seed: u64, out: Option<&Path>) -> CliResult<()> {
    let any = AnyField::new(field.spec()?)?;
    with_field!(&any, |f| {
        let code = sample_code(f, n, k, &mut trial_rng(seed, 0)).map_err(usage)?;
        emit(out, &write_document(&CodeFile::from_code(&code)))
    })
}

fn selftest_round_trip<F: ExtField>(f: &F, params: &SchemeParams, seed: u64) -> Result<String, String> {
    let mut rng = trial_rng(seed, 0);
    let (pk, sk) = loidreau::keygen(f, params, &mut rng).map_err(|e| e.to_string())?;
    let msg = random_vector(f, params.k, &mut rng);
    let c = loidreau::encrypt(&pk, &msg, &mut rng).map_err(|e| e.to_string())?;
    if loidreau::decrypt(&sk, &c).map_err(|e| e.to_string())? != msg {
        return Err("decryption returned a different message".into());
    }
    let report = run_distinguisher(&pk.code(), params.lambda);
    let (result, _) = timed_attack(&pk.code(), &pk.g_pub, params.lambda, seed);
    let (key, trace) = result.map_err(|e| e.to_string())?;
    if recovered_decrypt(&key, &c).map_err(|e| e.to_string())? != msg {
        return Err("recovered key returned a different message".into());
    }
    Ok(format!("dim {} <= {}, {} roots", report.observed_dim, report.structured_bound, trace.root_count))
}

pub fn selftest(seed: u64) -> CliResult<()> {
    let checks: Vec<(&str, Box<dyn Fn() -> Result<String, String>>)> = vec![
        (
            "GF(8) arithmetic",
            Box::new(|| {
                let f = AnyField::new(FieldSpec::binary(3).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                with_field!(&f, |f| {
                    let x = f.generator();
                    let lhs = f.pow(&x, 3);
                    let rhs = f.add(&x, &f.one());
                    (lhs == rhs).then(|| "x^3 = x + 1".to_string()).ok_or_else(|| "x^3 != x + 1".to_string())
                })
            }),
        ),
        (
            "binary scheme and attack (m = n = 30, k = 17)",
            Box::new(move || {
                let spec = FieldSpec::binary(30).map_err(|e| e.to_string())?;
                let params = SchemeParams::new(spec.clone(), 30, 17, 2).map_err(|e| e.to_string())?;
                with_field!(&AnyField::new(spec).map_err(|e| e.to_string())?, |f| selftest_round_trip(f, &params, seed))
            }),
        ),
        (
            "ternary scheme and attack (m = n = 12, k = 8)",
            Box::new(move || {
                let spec = FieldSpec::new(3, 1, 12, None, None).map_err(|e| e.to_string())?;
                let params = SchemeParams::new(spec.clone(), 12, 8, 2).map_err(|e| e.to_string())?;
                with_field!(&AnyField::new(spec).map_err(|e| e.to_string())?, |f| selftest_round_trip(f, &params, seed))
            }),
        ),
        (
            "random code verdict",
            Box::new(move || {
                let spec = FieldSpec::binary(30).map_err(|e| e.to_string())?;
                with_field!(&AnyField::new(spec).map_err(|e| e.to_string())?, |f| {
                    let code = sample_code(f, 30, 17, &mut trial_rng(seed, 2)).map_err(|e| e.to_string())?;
                    let report = run_distinguisher(&code, 2);
                    (report.verdict == Verdict::RandomLike)
                        .then(|| format!("dim {}", report.observed_dim))
                        .ok_or_else(|| format!("verdict {:?}", report.verdict))
                })
            }),
        ),
        (
            "Gaussian binomial bounds",
            Box::new(|| {
                let ok = (0..=10u32).all(|n| (0..=n).all(|k| gb_bound_check(n, k, 2)));
                ok.then(|| "n <= 10, q = 2".to_string()).ok_or_else(|| "bound violated".to_string())
            }),
        ),
    ];
    let mut failed = 0;
    for (name, check) in &checks {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Failure(format!("{failed} self-test check(s) failed")))
    }
}
