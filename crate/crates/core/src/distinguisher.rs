//! Frobenius-sum dimension test and Gaussian binomial coefficients.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::field::ExtField;
use crate::subspaces::{random_code, Code};
use crate::trial_rng;

/// `dim(C + C^{[1]} + … + C^{[s]})`, stopping once the sum is the full space.
pub fn frobenius_sum_dim<F: ExtField>(code: &Code<F>, s: usize) -> usize {
    let n = code.len();
    let mut sum = code.clone();
    for i in 1..=s {
        if sum.dim() == n {
            break;
        }
        sum = sum.sum(&code.frobenius(i as i64)).expect("same length");
    }
    sum.dim()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Structured,
    /// Above the structured bound; random codes land here with high
    /// probability, but the test is one-sided.
    RandomLike,
    /// `k` lies outside the window where the two cases separate.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinguishReport {
    pub n: usize,
    pub k: usize,
    /// Number of Frobenius shifts, equal to `λ`.
    pub s: usize,
    pub observed_dim: usize,
    /// `min(n, (s+1)(n-k))`
    pub random_expect: usize,
    /// `s(n-k) + s`
    pub structured_bound: usize,
    pub verdict: Verdict,
}

/// Dualizes `public_code` and compares `dim sum_{i<=λ} (C^⊥)^{[i]}` with the
/// bound `λ dim C^⊥ + λ` met by every masked Gabidulin code.
pub fn distinguish<F: ExtField>(public_code: &Code<F>, lambda: usize) -> DistinguishReport {
    let (n, k) = (public_code.len(), public_code.dim());
    let r = n - k;
    let observed_dim = frobenius_sum_dim(&public_code.dual(), lambda);
    let random_expect = n.min((lambda + 1) * r);
    let structured_bound = lambda * r + lambda;
    let in_window = distinguishable_range(n, lambda).is_some_and(|(lo, hi)| (lo..=hi).contains(&k));
    let verdict = if !in_window {
        Verdict::Inconclusive
    } else if observed_dim <= structured_bound {
        Verdict::Structured
    } else {
        Verdict::RandomLike
    };
    DistinguishReport { n, k, s: lambda, observed_dim, random_expect, structured_bound, verdict }
}

/// Inclusive range of `k` with `n(1 - 1/λ) + 1 < k < n - λ`, or `None` if empty.
pub fn distinguishable_range(n: usize, lambda: usize) -> Option<(usize, usize)> {
    if lambda == 0 {
        return None;
    }
    // k λ > n(λ - 1) + λ
    let lo = (n * (lambda - 1) + lambda) / lambda + 1;
    let hi = n.checked_sub(lambda + 1)?;
    (lo <= hi).then_some((lo, hi))
}

/// Fraction of `trials` codes drawn by `sample` whose `s`-fold Frobenius sum
/// has dimension at most `min(n, (s+1)k) - a`. Trial `i` uses
/// [`trial_rng`]`(seed, i)`.
pub fn monte_carlo_dim_drop<F: ExtField>(
    n: usize,
    k: usize,
    s: usize,
    a: usize,
    trials: usize,
    seed: u64,
    mut sample: impl FnMut(&mut rand_chacha::ChaCha20Rng) -> Code<F>,
) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let threshold = n.min((s + 1) * k).saturating_sub(a);
    let hits = (0..trials)
        .filter(|&i| {
            let code = sample(&mut trial_rng(seed, i as u64));
            frobenius_sum_dim(&code, s) <= threshold
        })
        .count();
    hits as f64 / trials as f64
}

/// [`monte_carlo_dim_drop`] over uniformly random `k`-dimensional codes;
/// requires `s < k <= n`.
pub fn monte_carlo_random_dim<F: ExtField>(
    f: &F,
    n: usize,
    k: usize,
    s: usize,
    a: usize,
    trials: usize,
    seed: u64,
) -> Option<f64> {
    if s >= k || k > n {
        return None;
    }
    Some(monte_carlo_dim_drop(n, k, s, a, trials, seed, |rng| {
        random_code(f, n, k, rng).expect("k <= n")
    }))
}

/// `[a b]_q = prod_{t<b} (q^a - q^t) / (q^b - q^t)`, the number of
/// `b`-dimensional subspaces of `F_q^a`. `None` when `b > a` or `q < 2`.
pub fn gaussian_binomial(a: u32, b: u32, q: u64) -> Option<BigUint> {
    if b > a || q < 2 {
        return None;
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for t in 0..b {
        num *= q.pow(a) - q.pow(t);
        den *= q.pow(b) - q.pow(t);
    }
    debug_assert!((&num % &den).is_zero());
    Some(num / den)
}

/// `q^{k(n-k)} <= [n k]_q <= 4 q^{k(n-k)}`
pub fn gb_bound_check(n: u32, k: u32, q: u64) -> bool {
    let Some(gb) = gaussian_binomial(n, k, q) else { return false };
    let base = BigUint::from(q).pow(k * (n - k));
    base <= gb && gb <= base * 4u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{BinaryField, FieldSpec};
    use crate::gabidulin::GabidulinCode;
    use crate::subspaces::random_full_rank_vector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn bin(m: usize) -> BinaryField {
        BinaryField::new(FieldSpec::binary(m).unwrap()).unwrap()
    }

    /// Pascal-type recurrence `[a b] = [a-1 b-1] + q^b [a-1 b]`.
    fn pascal(a: u32, b: u32, q: u64) -> BigUint {
        if b == 0 || b == a {
            return BigUint::one();
        }
        pascal(a - 1, b - 1, q) + BigUint::from(q).pow(b) * pascal(a - 1, b, q)
    }

    #[test]
    fn gaussian_binomial_examples() {
        assert_eq!(gaussian_binomial(2, 1, 2), Some(BigUint::from(3u32)));
        for n in 0..8 {
            assert_eq!(gaussian_binomial(n, 0, 3), Some(BigUint::one()));
            assert_eq!(gaussian_binomial(n, n, 3), Some(BigUint::one()));
        }
        assert_eq!(gaussian_binomial(2, 3, 2), None);
        for q in [2, 3, 4, 5] {
            for a in 0..10 {
                for b in 0..=a {
                    assert_eq!(gaussian_binomial(a, b, q).unwrap(), pascal(a, b, q));
                }
            }
        }
    }

    #[test]
    fn window_examples() {
        assert_eq!(distinguishable_range(30, 2), Some((17, 27)));
        assert_eq!(distinguishable_range(50, 2), Some((27, 47)));
        assert_eq!(distinguishable_range(10, 9), None);
    }

    #[test]
    fn gabidulin_sums_grow_by_one() {
        let f = bin(12);
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        let a = random_full_rank_vector(&f, 12, &mut rng).unwrap();
        let c = GabidulinCode::new(&f, a, 5).unwrap().code();
        for s in 0..=7 {
            assert_eq!(frobenius_sum_dim(&c, s), 5 + s);
        }
        assert_eq!(frobenius_sum_dim(&c, 9), 12);
    }

    #[test]
    fn monte_carlo_edges() {
        let f = bin(10);
        assert_eq!(monte_carlo_random_dim(&f, 10, 4, 1, 0, 20, 1), Some(1.0));
        assert_eq!(monte_carlo_random_dim(&f, 10, 4, 4, 1, 20, 1), None);
        let freq = monte_carlo_random_dim(&f, 10, 4, 1, 1, 100, 1).unwrap();
        assert!(freq <= 0.05, "{freq}");
    }

    #[test]
    fn inconclusive_outside_window() {
        let f = bin(20);
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let c = random_code(&f, 20, 9, &mut rng).unwrap();
        assert_eq!(distinguish(&c, 2).verdict, Verdict::Inconclusive);
        let c = random_code(&f, 20, 14, &mut rng).unwrap();
        let report = distinguish(&c, 2);
        assert_eq!(report.verdict, Verdict::RandomLike);
        assert_eq!(report.observed_dim, 18);
        assert_eq!(report.structured_bound, 14);
    }

    #[test]
    fn bounds_small() {
        for q in [2, 3] {
            for n in 0..=12 {
                for k in 0..=n {
                    assert!(gb_bound_check(n, k, q), "n={n} k={k} q={q}");
                }
            }
        }
    }
}
