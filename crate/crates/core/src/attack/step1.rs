//! Step 1: isolate `⟨g, h⟩` and the lines `⟨g + γ^{q^{-i}} h⟩` from the
//! dual public code by Frobenius sums and intersections.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::AttackError;
use crate::field::ExtField;
use crate::subspaces::{add_vec, scale_vec, Code};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "stage", content = "index")]
pub enum Step1Stage {
    /// `∩_{i=0..r} (C^⊥ + C^⊥[1])^{[i]}`
    IteratedIntersection,
    /// `C^⊥ ∩ D'`
    FirstLine,
    /// `D' + W^{[1]}`
    Extension,
    /// `C^⊥[-1] ∩ E`
    BackShift,
    /// `W + F^{[-1]}`
    PairSpace,
    /// `(C^⊥ ∩ GH^{[i]})^{[-i]}`
    Line(usize),
}

impl fmt::Display for Step1Stage {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step1Stage::IteratedIntersection => write!(fm, "iterated intersection"),
            Step1Stage::FirstLine => write!(fm, "first line"),
            Step1Stage::Extension => write!(fm, "extension"),
            Step1Stage::BackShift => write!(fm, "back shift"),
            Step1Stage::PairSpace => write!(fm, "pair space"),
            Step1Stage::Line(i) => write!(fm, "line {i}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Step1Output<F: ExtField> {
    /// Chosen generator of `⟨g + γh⟩`.
    pub w: Vec<F::Elem>,
    /// `⟨g, h⟩`
    pub gh: Code<F>,
    /// `lines[i] = ⟨g + γ^{q^{-i}} h⟩` for `i = 0..=r`.
    pub lines: Vec<Code<F>>,
    pub r: usize,
    /// Dimensions of `C^⊥ + C^⊥[1]` followed by each partial intersection.
    pub intersection_dims: Vec<usize>,
}

fn expect_dim<F: ExtField>(stage: Step1Stage, code: &Code<F>, expected: usize) -> Result<(), AttackError> {
    if code.dim() == expected {
        Ok(())
    } else {
        Err(AttackError::Step1Dimension { stage, expected, got: code.dim() })
    }
}

pub fn step1_recover_spaces<F: ExtField>(public_code: &Code<F>) -> Result<Step1Output<F>, AttackError> {
    let n = public_code.len();
    let k = public_code.dim();
    let r = n
        .checked_sub(k + 1)
        .filter(|&r| r >= 1)
        .ok_or(AttackError::Step1Dimension { stage: Step1Stage::IteratedIntersection, expected: 2, got: 0 })?;
    let dual = public_code.dual();

    // (a) D = ∩_{i=0..r} (C^⊥ + C^⊥[1])^{[i]}
    let sum = dual.sum(&dual.frobenius(1))?;
    let mut dims = vec![sum.dim()];
    let mut d = sum.clone();
    for i in 1..=r {
        d = d.intersect(&sum.frobenius(i as i64))?;
        dims.push(d.dim());
        if d.dim() < 2 {
            break;
        }
    }
    expect_dim(Step1Stage::IteratedIntersection, &d, 2)?;

    // (b) D' = D^{[-r]} = ⟨g + γh, g^{[1]} + γ^{q^{1-r}} h^{[1]}⟩
    let d_shift = d.frobenius(-(r as i64));

    // (c) W = C^⊥ ∩ D' = ⟨g + γh⟩
    let first = dual.intersect(&d_shift)?;
    expect_dim(Step1Stage::FirstLine, &first, 1)?;
    let w = first.first_generator().expect("dimension one").to_vec();

    // (d) E = D' + W^{[1]} = ⟨g + γh, g^{[1]}, h^{[1]}⟩
    let ext = d_shift.sum(&first.frobenius(1))?;
    expect_dim(Step1Stage::Extension, &ext, 3)?;

    // (e) F = C^⊥[-1] ∩ E = ⟨g^{[1]} + γ^{q^{-1}} h^{[1]}⟩, GH = W + F^{[-1]}
    let back = dual.frobenius(-1).intersect(&ext)?;
    expect_dim(Step1Stage::BackShift, &back, 1)?;
    let gh = first.sum(&back.frobenius(-1))?;
    expect_dim(Step1Stage::PairSpace, &gh, 2)?;

    // (f) S_i = (C^⊥ ∩ GH^{[i]})^{[-i]}
    let mut lines = Vec::with_capacity(r + 1);
    for i in 0..=r {
        let line = dual.intersect(&gh.frobenius(i as i64))?.frobenius(-(i as i64));
        expect_dim(Step1Stage::Line(i), &line, 1)?;
        lines.push(line);
    }
    Ok(Step1Output { w, gh, lines, r, intersection_dims: dims })
}

impl<F: ExtField> Step1Output<F> {
    /// The output step 1 would produce for a secret `(g, h, γ)`, with
    /// `w = g + γh`. Usable where the public code is too short for step 1.
    pub fn from_secret(f: &F, g: &[F::Elem], h: &[F::Elem], gamma: &F::Elem, r: usize) -> Self {
        let n = g.len();
        let line = |i: usize| {
            let c = f.frobenius(gamma, -(i as i64));
            add_vec(f, g, &scale_vec(f, &c, h))
        };
        let lines = (0..=r).map(|i| Code::from_rows(f, n, vec![line(i)])).collect();
        Step1Output {
            w: line(0),
            gh: Code::from_rows(f, n, vec![g.to_vec(), h.to_vec()]),
            lines,
            r,
            intersection_dims: Vec::new(),
        }
    }
}
