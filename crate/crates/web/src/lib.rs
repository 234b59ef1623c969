//! Browser bindings for the demo page in `www/`. Every entry point takes
//! plain numbers and returns a JSON string; binary fields only.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use loidreau_core::attack::{attack_decrypt, attack_traced, AttackTrace};
use loidreau_core::distinguisher::{distinguish, Verdict};
use loidreau_core::field::{BinaryField, ExtField, FieldSpec};
use loidreau_core::io::encode_elem;
use loidreau_core::loidreau::{decrypt, encrypt, encrypt_with_error, keygen, SchemeParams};
use loidreau_core::subspaces::{random_code, random_rank_t_vector, random_vector};
use loidreau_core::trial_rng;

fn field(m: usize) -> Result<BinaryField, JsError> {
    let spec = FieldSpec::binary(m).map_err(|e| JsError::new(&e.to_string()))?;
    BinaryField::new(spec).map_err(|e| JsError::new(&e.to_string()))
}

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("demo payloads serialize")
}

#[derive(Serialize)]
struct CurvePoint {
    k: usize,
    structured_bound: usize,
    random_expect: usize,
    key_dim: Option<usize>,
    key_verdict: Option<Verdict>,
    random_dim: usize,
    random_verdict: Verdict,
}

/// For every `k`, the Frobenius-sum dimension of a fresh public key next to
/// that of a uniformly random code of the same shape.
#[wasm_bindgen]
pub fn distinguisher_curve(m: usize, n: usize, lambda: usize, seed: u64) -> Result<String, JsError> {
    let f = field(m)?;
    let mut points = Vec::new();
    for k in 1..n {
        let mut rng = trial_rng(seed, k as u64);
        let key = SchemeParams::new(f.spec().clone(), n, k, lambda)
            .ok()
            .and_then(|params| keygen(&f, &params, &mut rng).ok())
            .map(|(pk, _)| distinguish(&pk.code(), lambda));
        let random = distinguish(&random_code(&f, n, k, &mut rng).map_err(js_err)?, lambda);
        points.push(CurvePoint {
            k,
            structured_bound: random.structured_bound,
            random_expect: random.random_expect,
            key_dim: key.as_ref().map(|r| r.observed_dim),
            key_verdict: key.map(|r| r.verdict),
            random_dim: random.observed_dim,
            random_verdict: random.verdict,
        });
    }
    Ok(to_json(&points))
}

#[derive(Serialize)]
struct AttackRun {
    n: usize,
    k: usize,
    error_rank: usize,
    trace: AttackTrace,
    gamma: Vec<u32>,
    message: Vec<Vec<u32>>,
    recovered: Vec<Vec<u32>>,
    matches: bool,
}

/// Generates a key, recovers an equivalent key from the public part alone and
/// decrypts one ciphertext with it.
#[wasm_bindgen]
pub fn run_attack(m: usize, n: usize, k: usize, seed: u64) -> Result<String, JsError> {
    let f = field(m)?;
    let params = SchemeParams::new(f.spec().clone(), n, k, 2).map_err(js_err)?;
    let mut rng = trial_rng(seed, 0);
    let (pk, _) = keygen(&f, &params, &mut rng).map_err(js_err)?;
    let (key, trace) = attack_traced(&pk, &mut rng).map_err(js_err)?;
    let msg = random_vector(&f, k, &mut rng);
    let c = encrypt(&pk, &msg, &mut rng).map_err(js_err)?;
    let recovered = attack_decrypt(&key, &c).map_err(js_err)?;
    Ok(to_json(&AttackRun {
        n,
        k,
        error_rank: pk.t(),
        trace,
        gamma: encode_elem(&f, &key.gamma),
        message: msg.iter().map(|x| encode_elem(&f, x)).collect(),
        matches: recovered == msg,
        recovered: recovered.iter().map(|x| encode_elem(&f, x)).collect(),
    }))
}

#[derive(Serialize)]
struct DecodePoint {
    error_rank: usize,
    successes: usize,
    trials: usize,
}

/// Legitimate decryption success rate against the rank of the error, from 0
/// up to a few steps past the public error rank.
#[wasm_bindgen]
pub fn decoding_curve(m: usize, n: usize, k: usize, lambda: usize, trials: usize, seed: u64) -> Result<String, JsError> {
    let f = field(m)?;
    let params = SchemeParams::new(f.spec().clone(), n, k, lambda).map_err(js_err)?;
    let (pk, sk) = keygen(&f, &params, &mut trial_rng(seed, 0)).map_err(js_err)?;
    let top = (pk.t() + 3).min(n.min(m));
    let mut points = Vec::new();
    for t in 0..=top {
        let mut rng = trial_rng(seed, 1 + t as u64);
        let mut successes = 0;
        for _ in 0..trials {
            let msg = random_vector(&f, k, &mut rng);
            let e = random_rank_t_vector(&f, n, t, &mut rng).map_err(js_err)?;
            let c = encrypt_with_error(&pk, &msg, &e).map_err(js_err)?;
            if decrypt(&sk, &c).is_ok_and(|m| m == msg) {
                successes += 1;
            }
        }
        points.push(DecodePoint { error_rank: t, successes, trials });
    }
    Ok(to_json(&points))
}
