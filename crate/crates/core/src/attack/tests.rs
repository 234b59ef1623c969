use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::*;
use crate::field::{BinaryField, FieldOps, FieldSpec, GenericField};
use crate::loidreau::{encrypt, encrypt_with_error, keygen, SecretKey};
use crate::subspaces::{add_vec, frobenius_vec, random_code, random_rank_t_vector, random_vector, scale_vec};

fn binary_key(m: usize, n: usize, k: usize, seed: u64) -> (BinaryField, PublicKey<BinaryField>, SecretKey<BinaryField>) {
    let spec = FieldSpec::binary(m).unwrap();
    let f = BinaryField::new(spec.clone()).unwrap();
    let params = SchemeParams::new(spec, n, k, 2).unwrap();
    let (pk, sk) = keygen(&f, &params, &mut ChaCha20Rng::seed_from_u64(seed)).unwrap();
    (f, pk, sk)
}

/// The scalar `s` with `s v` and `w` agreeing at the first nonzero entry of `v`.
fn rescale_like<F: ExtField>(f: &F, v: &[F::Elem], w: &[F::Elem]) -> F::Elem {
    let i = v.iter().position(|x| !f.is_zero(x)).unwrap();
    f.div(&w[i], &v[i]).unwrap()
}

#[test]
fn parameter_examples() {
    assert!(check_parameters(30, 17, 2).is_empty());
    assert_eq!(check_parameters(30, 27, 2), vec![ParamViolation::RedundancyTooSmall { n: 30, k: 27 }]);
    assert_eq!(check_parameters(30, 15, 2), vec![ParamViolation::DimensionTooSmall { n: 30, k: 15 }]);
    assert_eq!(check_parameters(30, 17, 3), vec![ParamViolation::LambdaNotTwo { lambda: 3 }]);
    let all = check_parameters(4, 3, 1);
    assert_eq!(all.len(), 4, "{all:?}");
}

#[test]
fn assumptions_detect_planted_breaches() {
    let (f, _, sk) = binary_key(16, 16, 10, 1);
    let (g, h) = sk.g_h().unwrap();
    let gamma = sk.gamma().unwrap();
    assert!(check_assumptions(&f, &g, &h, gamma, 10).is_empty());
    assert!(check_assumptions(&f, &g, &g, gamma, 10)
        .iter()
        .any(|v| matches!(v, AssumptionViolation::Intersection { .. })));
    assert!(check_assumptions(&f, &g, &h, &f.one(), 10).contains(&AssumptionViolation::GammaInSubfield));
}

#[test]
fn step1_lines_match_secret() {
    let (f, pk, sk) = binary_key(16, 16, 10, 2);
    let (g, h) = sk.g_h().unwrap();
    let gamma = sk.gamma().unwrap();
    let s1 = step1_recover_spaces(&pk.code()).unwrap();
    assert_eq!(s1.r, 5);
    assert_eq!(s1.gh, Code::from_rows(&f, 16, vec![g.clone(), h.clone()]));
    assert_eq!(s1.lines[0], Code::from_rows(&f, 16, vec![s1.w.clone()]));
    for (i, line) in s1.lines.iter().enumerate() {
        let c = f.frobenius(gamma, -(i as i64));
        let truth = add_vec(&f, &g, &scale_vec(&f, &c, &h));
        assert_eq!(*line, Code::from_rows(&f, 16, vec![truth]), "line {i}");
        assert!(s1.gh.contains_code(line));
    }
}

#[test]
fn unique_pair_matches_closed_form() {
    let (f, pk, sk) = binary_key(16, 16, 10, 3);
    let (g, h) = sk.g_h().unwrap();
    let gamma = sk.gamma().unwrap().clone();
    let s1 = step1_recover_spaces(&pk.code()).unwrap();
    let scale = rescale_like(&f, &add_vec(&f, &g, &scale_vec(&f, &gamma, &h)), &s1.w);
    let (g, h) = (scale_vec(&f, &scale, &g), scale_vec(&f, &scale, &h));

    let (u, v) = unique_pair(&s1.lines[1], &s1.lines[2], &s1.w).unwrap();
    assert_eq!(add_vec(&f, &u, &v), s1.w);
    let (v2, u2) = unique_pair(&s1.lines[2], &s1.lines[1], &s1.w).unwrap();
    assert_eq!((u2, v2), (u.clone(), v));

    let g1 = f.frobenius(&gamma, -1);
    let g2 = f.frobenius(&gamma, -2);
    let coeff = f.div(&f.sub(&g2, &gamma), &f.sub(&g2, &g1)).unwrap();
    let expected = scale_vec(&f, &coeff, &add_vec(&f, &g, &scale_vec(&f, &g1, &h)));
    assert_eq!(u, expected);
}

#[test]
fn recovered_triple_is_a_mobius_image() {
    let (f, pk, sk) = binary_key(16, 16, 10, 4);
    let (g, h) = sk.g_h().unwrap();
    let gamma = sk.gamma().unwrap().clone();
    let mut rng = ChaCha20Rng::seed_from_u64(40);
    let s1 = step1_recover_spaces(&pk.code()).unwrap();
    let sol = step2_find_gamma(&s1, &mut rng).unwrap();
    assert_eq!(sol.p_gamma.degree(), Some(6));
    assert_eq!(sol.roots, pgl2_orbit(&f, &gamma));
    assert_eq!(add_vec(&f, &sol.g, &scale_vec(&f, &sol.gamma, &sol.h)), s1.w);

    let scale = rescale_like(&f, &add_vec(&f, &g, &scale_vec(&f, &gamma, &h)), &s1.w);
    let (g, h) = (scale_vec(&f, &scale, &g), scale_vec(&f, &scale, &h));
    let hit = pgl2_matrices(&f).into_iter().any(|[a, b, c, d]| {
        let Some(image) = mobius(&f, &[a, b, c, d], &sol.gamma) else { return false };
        let den = f.inv(&f.add(&f.mul(&c, &sol.gamma), &d)).unwrap();
        let g2 = scale_vec(&f, &den, &add_vec(&f, &scale_vec(&f, &d, &g), &scale_vec(&f, &b, &h)));
        let h2 = scale_vec(&f, &den, &add_vec(&f, &scale_vec(&f, &c, &g), &scale_vec(&f, &a, &h)));
        image == gamma && g2 == sol.g && h2 == sol.h
    });
    assert!(hit);
}

#[test]
fn every_root_regenerates_the_dual() {
    let (f, pk, sk) = binary_key(14, 14, 9, 5);
    let (g, h) = sk.g_h().unwrap();
    let gamma = sk.gamma().unwrap().clone();
    let dual = pk.code().dual();
    let (n, k) = (14, 9);
    for m in pgl2_matrices(&f).into_iter().take(3) {
        let [a, b, c, d] = &m;
        let root = mobius(&f, &m, &gamma).unwrap();
        // γ = (d root - b) / (-c root + a) inverts the map
        let inv = [d.clone(), f.neg(b), f.neg(c), a.clone()];
        assert_eq!(mobius(&f, &inv, &root).unwrap(), gamma);
        let den = f.inv(&f.add(&f.mul(&inv[2], &root), &inv[3])).unwrap();
        let g2 = scale_vec(&f, &den, &add_vec(&f, &scale_vec(&f, &inv[3], &g), &scale_vec(&f, &inv[1], &h)));
        let h2 = scale_vec(&f, &den, &add_vec(&f, &scale_vec(&f, &inv[2], &g), &scale_vec(&f, &inv[0], &h)));
        let rows = (0..n - k)
            .map(|i| {
                let s = i as i64;
                add_vec(
                    &f,
                    &frobenius_vec(&f, &g2, s),
                    &scale_vec(&f, &root, &frobenius_vec(&f, &h2, s)),
                )
            })
            .collect();
        assert_eq!(Code::from_rows(&f, n, rows), dual);
    }
}

#[test]
fn mobius_scales_frobenius_differences() {
    fn check<F: ExtField>(f: &F, seed: u64) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let q = f.q() as u128;
        let mats = pgl2_matrices(f);
        for _ in 0..30 {
            let mat = &mats[rand::Rng::gen_range(&mut rng, 0..mats.len())];
            let x = f.random(&mut rng);
            let Some(y) = mobius(f, mat, &x) else { continue };
            let [a, b, c, d] = mat;
            let det = f.sub(&f.mul(a, d), &f.mul(b, c));
            let den = f.add(&f.mul(c, &x), d);
            for i in 0..=3u32 {
                for j in 0..=3u32 {
                    let lhs = f.sub(&f.frobenius(&y, i as i64), &f.frobenius(&y, j as i64));
                    let ax = f.sub(&f.frobenius(&x, i as i64), &f.frobenius(&x, j as i64));
                    let scale = f.div(&det, &f.pow(&den, q.pow(i) + q.pow(j))).unwrap();
                    assert_eq!(lhs, f.mul(&scale, &ax));
                }
            }
        }
    }
    check(&BinaryField::new(FieldSpec::binary(11).unwrap()).unwrap(), 1);
    check(&GenericField::new(FieldSpec::new(3, 1, 7, None, None).unwrap()).unwrap(), 2);
}

#[test]
fn white_box_orbit_at_m7() {
    let (f, _, sk) = binary_key(7, 7, 3, 6);
    let (g, h) = sk.g_h().unwrap();
    let gamma = sk.gamma().unwrap();
    let s1 = Step1Output::from_secret(&f, &g, &h, gamma, 3);
    let sol = step2_find_gamma(&s1, &mut ChaCha20Rng::seed_from_u64(60)).unwrap();
    assert_eq!(sol.p_gamma.degree(), Some(6));
    let exhaustive: Vec<u128> = (0..128u128).filter(|x| f.is_zero(&sol.p_gamma.eval(&f, x))).collect();
    let mut roots = sol.roots.clone();
    roots.sort();
    assert_eq!(roots, exhaustive);
    assert_eq!(sol.roots, pgl2_orbit(&f, gamma));
    assert_eq!(sol.roots.len(), 6);
}

#[test]
fn random_code_fails_in_step1() {
    let f = BinaryField::new(FieldSpec::binary(16).unwrap()).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let code = random_code(&f, 16, 10, &mut rng).unwrap();
    let err = attack_code(&code, &mut rng).unwrap_err();
    assert!(matches!(err, AttackError::Step1Dimension { stage: Step1Stage::IteratedIntersection, .. }), "{err}");
    assert_eq!(err.stage(), "step1");
}

#[test]
fn end_to_end_binary() {
    let (f, pk, sk) = binary_key(16, 16, 10, 8);
    let mut rng = ChaCha20Rng::seed_from_u64(80);
    let (key, trace) = attack_traced(&pk, &mut rng).unwrap();
    assert_eq!(trace.root_count, 6);
    assert_eq!(trace.pair_space_dim, 2);
    assert_eq!(key.decode_radius, 3);
    let (g, h) = sk.g_h().unwrap();
    let w = add_vec(&f, &g, &scale_vec(&f, sk.gamma().unwrap(), &h));
    let s = rescale_like(&f, &w, &key.image_of_support());
    assert_eq!(key.image_of_support(), scale_vec(&f, &s, &w));
    assert_eq!(rank_weight(&f, &key.image_of_support()), 16);
    for _ in 0..10 {
        let msg = random_vector(&f, 10, &mut rng);
        let c = encrypt(&pk, &msg, &mut rng).unwrap();
        assert_eq!(attack_decrypt(&key, &c).unwrap(), msg);
    }
    let zero = vec![0u128; 10];
    assert_eq!(attack_decrypt(&key, &encrypt(&pk, &zero, &mut rng).unwrap()).unwrap(), zero);
    let big = random_rank_t_vector(&f, 16, 6, &mut rng).unwrap();
    let c = encrypt_with_error(&pk, &zero, &big).unwrap();
    assert!(matches!(attack_decrypt(&key, &c), Err(AttackError::Decode(_))));
}

#[test]
fn end_to_end_ternary() {
    let spec = FieldSpec::new(3, 1, 12, None, None).unwrap();
    let f = GenericField::new(spec.clone()).unwrap();
    let params = SchemeParams::new(spec, 12, 8, 2).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let (pk, _) = keygen(&f, &params, &mut rng).unwrap();
    let (key, trace) = attack_traced(&pk, &mut rng).unwrap();
    assert_eq!(trace.p_gamma_degree, 24);
    assert_eq!(trace.root_count, 24);
    let msg = random_vector(&f, 8, &mut rng);
    let c = encrypt(&pk, &msg, &mut rng).unwrap();
    assert_eq!(attack_decrypt(&key, &c).unwrap(), msg);
}

#[test]
fn rescaled_representative_still_decrypts() {
    let (f, pk, _) = binary_key(16, 16, 10, 10);
    let mut rng = ChaCha20Rng::seed_from_u64(100);
    let code = pk.code();
    let mut s1 = step1_recover_spaces(&code).unwrap();
    let base = step2_find_gamma(&s1, &mut rng).unwrap();
    let c = f.random_nonzero(&mut rng);
    s1.w = scale_vec(&f, &c, &s1.w);
    let sol = step2_find_gamma(&s1, &mut rng).unwrap();
    assert_ne!(sol.g, base.g);
    let key = step3_build_key(&sol, &code, &pk.g_pub).unwrap();
    let msg = random_vector(&f, 10, &mut rng);
    let ct = encrypt(&pk, &msg, &mut rng).unwrap();
    assert_eq!(attack_decrypt(&key, &ct).unwrap(), msg);
}
