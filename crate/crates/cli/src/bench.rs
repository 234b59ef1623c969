//! Keygen + attack campaigns, one rayon task per trial.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use loidreau_core::attack::attack_decrypt;
use loidreau_core::field::{AnyField, ExtField};
use loidreau_core::loidreau::{self, SchemeParams};
use loidreau_core::subspaces::random_vector;
use loidreau_core::{trial_rng, with_field};

use crate::commands::{emit, scheme_params, timed_attack, StageTimes};
use crate::{usage, CliResult, FieldArgs, Format, SchemeArgs};

#[derive(Clone, Copy, Debug)]
struct Trial {
    keygen_ms: f64,
    times: StageTimes,
    success: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub mean_ms: f64,
    pub median_ms: f64,
}

impl Summary {
    fn of(mut xs: Vec<f64>) -> Self {
        if xs.is_empty() {
            return Summary { mean_ms: 0.0, median_ms: 0.0 };
        }
        xs.sort_by(f64::total_cmp);
        let mid = xs.len() / 2;
        let median_ms = if xs.len() % 2 == 0 { (xs[mid - 1] + xs[mid]) / 2.0 } else { xs[mid] };
        Summary { mean_ms: xs.iter().sum::<f64>() / xs.len() as f64, median_ms }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub keygen: Summary,
    pub step1: Summary,
    pub step2: Summary,
    pub step3: Summary,
    pub total: Summary,
}

fn run_trial<F: ExtField>(f: &F, params: &SchemeParams, seed: u64, index: u64) -> Result<Trial, String> {
    let mut rng = trial_rng(seed, index);
    let start = Instant::now();
    let (pk, _) = loidreau::keygen(f, params, &mut rng).map_err(|e| e.to_string())?;
    let keygen_ms = start.elapsed().as_secs_f64() * 1e3;
    let (result, times) = timed_attack(&pk.code(), &pk.g_pub, params.lambda, seed ^ index);
    let success = match result {
        Ok((key, _)) => {
            let msg = random_vector(f, params.k, &mut rng);
            let c = loidreau::encrypt(&pk, &msg, &mut rng).map_err(|e| e.to_string())?;
            attack_decrypt(&key, &c).is_ok_and(|m| m == msg)
        }
        Err(_) => false,
    };
    Ok(Trial { keygen_ms, times, success })
}

fn run_row(field: &FieldArgs, scheme: &SchemeArgs, (m, n, k): (usize, usize, usize), trials: u64, seed: u64) -> CliResult<RowReport> {
    let spec = field.spec_with_degree(m)?;
    let params = scheme_params(spec.clone(), &SchemeArgs { n: Some(n), k: Some(k), lambda: scheme.lambda })?;
    let any = AnyField::new(spec)?;
    let results: Vec<Trial> = with_field!(&any, |f| {
        (0..trials).into_par_iter().map(|i| run_trial(f, &params, seed, i)).collect::<Result<_, _>>()
    })
    .map_err(usage)?;
    let pick = |g: fn(&Trial) -> f64| Summary::of(results.iter().map(g).collect());
    let successes = results.iter().filter(|t| t.success).count() as u64;
    Ok(RowReport {
        m,
        n,
        k,
        lambda: scheme.lambda,
        trials,
        successes,
        success_rate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
        keygen: pick(|t| t.keygen_ms),
        step1: pick(|t| t.times.step1_ms),
        step2: pick(|t| t.times.step2_ms),
        step3: pick(|t| t.times.step3_ms),
        total: pick(|t| t.times.total_ms),
    })
}

fn to_csv(rows: &[RowReport]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let stages = ["keygen", "step1", "step2", "step3", "total"];
    let mut header = vec!["m", "n", "k", "lambda", "trials", "successes", "success_rate"].into_iter().map(String::from).collect::<Vec<_>>();
    for s in stages {
        header.push(format!("{s}_mean_ms"));
        header.push(format!("{s}_median_ms"));
    }
    w.write_record(&header).map_err(usage)?;
    for r in rows {
        let mut rec = vec![
            r.m.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.lambda.to_string(),
            r.trials.to_string(),
            r.successes.to_string(),
            r.success_rate.to_string(),
        ];
        for s in [&r.keygen, &r.step1, &r.step2, &r.step3, &r.total] {
            rec.push(format!("{:.3}", s.mean_ms));
            rec.push(format!("{:.3}", s.median_ms));
        }
        w.write_record(&rec).map_err(usage)?;
    }
    let bytes = w.into_inner().map_err(usage)?;
    String::from_utf8(bytes).map_err(usage)
}

pub fn run(
    field: &FieldArgs,
    scheme: &SchemeArgs,
    extra: &[(usize, usize, usize)],
    trials: u64,
    seed: u64,
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    let mut rows = Vec::new();
    if let (Some(m), Some(n), Some(k)) = (field.m, scheme.n, scheme.k) {
        rows.push((m, n, k));
    }
    rows.extend_from_slice(extra);
    if rows.is_empty() {
        return Err(usage("give --m/--n/--k or at least one --row m,n,k"));
    }
    let reports = rows.into_iter().map(|row| run_row(field, scheme, row, trials, seed)).collect::<CliResult<Vec<_>>>()?;
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&reports).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => to_csv(&reports)?,
    };
    emit(out, &text)
}
