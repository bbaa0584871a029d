//! Exact group arithmetic in exponential coordinates via truncated BCH
//! (nilpotent step ≤ 4) and a deterministic semigroup sampler.
//!
//! For step ≤ 4 the product log(exp a · exp b) equals
//! `a + b + ½[a,b] + (1/12)([a,[a,b]] + [b,[b,a]]) − (1/24)[b,[a,[a,b]]]`
//! exactly; all higher terms vanish by nilpotency. Step ≥ 5 is rejected
//! rather than silently wrong.

use crate::engel::flow_segment;
use crate::lie::GradedLieAlgebra;
use crate::poly::Poly;
use crate::rat::{format_rat, int, rat, Rat};
use crate::semigen::HalfSpace;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BchError {
    #[error("BCH product supports step ≤ 4, got step {0}")]
    UnsupportedStep(usize),
    #[error("vector has wrong length: expected {expected}, got {got}")]
    BadVector { expected: usize, got: usize },
    #[error("segment direction is outside the half-space")]
    DirectionOutsideHalfSpace,
    #[error("segment direction is not horizontal")]
    NotHorizontal,
}

/// `log(exp(a)·exp(b))`, exact for step ≤ 4.
pub fn bch_product(g: &GradedLieAlgebra, a: &[Rat], b: &[Rat]) -> Result<Vec<Rat>, BchError> {
    if g.step() > 4 {
        return Err(BchError::UnsupportedStep(g.step()));
    }
    if a.len() != g.dim() || b.len() != g.dim() {
        return Err(BchError::BadVector {
            expected: g.dim(),
            got: if a.len() != g.dim() { a.len() } else { b.len() },
        });
    }
    let ab = g.bracket(a, b);
    let aab = g.bracket(a, &ab);
    let bba = g.bracket(b, &g.bracket(b, a));
    let baab = g.bracket(b, &aab);
    let half = rat(1, 2);
    let twelfth = rat(1, 12);
    let neg24 = rat(-1, 24);
    let mut out = Vec::with_capacity(g.dim());
    for i in 0..g.dim() {
        let mut c = &a[i] + &b[i];
        c += &half * &ab[i];
        c += &twelfth * (&aab[i] + &bba[i]);
        c += &neg24 * &baab[i];
        out.push(c);
    }
    Ok(out)
}

/// Folds a word of logs into a single product log.
pub fn bch_word(g: &GradedLieAlgebra, word: &[Vec<Rat>]) -> Result<Vec<Rat>, BchError> {
    let mut acc = crate::linalg::vec_zero(g.dim());
    for w in word {
        acc = bch_product(g, &acc, w)?;
    }
    Ok(acc)
}

/// Sampler parameters. Coordinates are drawn uniformly from the rational
/// grid `{k/denominator : |k| ≤ bound·denominator}`; λ-nonnegativity is
/// enforced by reflection.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleParams {
    pub word_length: usize,
    pub count: usize,
    pub seed: u64,
    pub bound: i64,
    pub denominator: i64,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams {
            word_length: 3,
            count: 100,
            seed: 0,
            bound: 2,
            denominator: 2,
        }
    }
}

/// A reproducible sampling run: the points are the logs of products of
/// `word_length` half-space exponentials.
#[derive(Clone, Debug)]
pub struct SampleRun {
    pub params: SampleParams,
    pub lambda: Vec<Rat>,
    pub points: Vec<Vec<Rat>>,
    /// Per-coordinate (min, max) over all points.
    pub summary: Vec<(Rat, Rat)>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn sample_direction(
    rng: &mut ChaCha8Rng,
    g: &GradedLieAlgebra,
    w: &HalfSpace,
    params: &SampleParams,
) -> Vec<Rat> {
    let d1 = g.v1_dim();
    let span = params.bound * params.denominator;
    let mut coords: Vec<Rat> = (0..d1)
        .map(|_| {
            let k: i64 = rng.gen_range(-span..=span);
            Rat::new(k.into(), params.denominator.into())
        })
        .collect();
    let lam_val: Rat = coords.iter().zip(&w.lambda).map(|(c, l)| c * l).sum();
    if lam_val.is_negative() {
        for c in coords.iter_mut() {
            *c = -c.clone();
        }
    }
    g.embed_v1(&coords)
}

fn sample_one(
    g: &GradedLieAlgebra,
    w: &HalfSpace,
    params: &SampleParams,
    index: usize,
) -> Result<Vec<Rat>, BchError> {
    let seed = splitmix64(params.seed ^ splitmix64(index as u64 + 1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let word: Vec<Vec<Rat>> = (0..params.word_length)
        .map(|_| sample_direction(&mut rng, g, w, params))
        .collect();
    bch_word(g, &word)
}

/// Draws `count` exact semigroup points. The run is fully reproducible from
/// `(algebra, λ, params)`: each point derives its own seed, so the result is
/// independent of the parallelism degree.
pub fn sample_semigroup(
    g: &GradedLieAlgebra,
    w: &HalfSpace,
    params: &SampleParams,
    parallel: bool,
) -> Result<SampleRun, BchError> {
    if g.step() > 4 {
        return Err(BchError::UnsupportedStep(g.step()));
    }
    let points: Result<Vec<Vec<Rat>>, BchError> = if parallel {
        (0..params.count)
            .into_par_iter()
            .map(|i| sample_one(g, w, params, i))
            .collect()
    } else {
        (0..params.count)
            .map(|i| sample_one(g, w, params, i))
            .collect()
    };
    let points = points?;
    let mut summary: Vec<(Rat, Rat)> = Vec::new();
    for c in 0..g.dim() {
        let mut lo = points
            .first()
            .map(|p| p[c].clone())
            .unwrap_or_else(Rat::zero);
        let mut hi = lo.clone();
        for p in &points {
            if p[c] < lo {
                lo = p[c].clone();
            }
            if p[c] > hi {
                hi = p[c].clone();
            }
        }
        summary.push((lo, hi));
    }
    Ok(SampleRun {
        params: params.clone(),
        lambda: w.lambda.clone(),
        points,
        summary,
    })
}

/// JSON wire form of a run record, suitable for regression diffing.
#[derive(Serialize, Deserialize)]
pub struct SampleRunWire {
    pub schema: u32,
    pub seed: u64,
    pub word_length: usize,
    pub count: usize,
    pub bound: i64,
    pub denominator: i64,
    pub lambda: Vec<String>,
    pub points: Vec<Vec<String>>,
    pub summary_min: Vec<String>,
    pub summary_max: Vec<String>,
}

impl SampleRun {
    pub fn to_wire(&self) -> SampleRunWire {
        SampleRunWire {
            schema: 1,
            seed: self.params.seed,
            word_length: self.params.word_length,
            count: self.params.count,
            bound: self.params.bound,
            denominator: self.params.denominator,
            lambda: self.lambda.iter().map(format_rat).collect(),
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(format_rat).collect())
                .collect(),
            summary_min: self.summary.iter().map(|(lo, _)| format_rat(lo)).collect(),
            summary_max: self.summary.iter().map(|(_, hi)| format_rat(hi)).collect(),
        }
    }
}

/// Verifies a flow word in the En^n realization against the invariant set
/// `C = {x : x_{2(n+1)} ≥ 0}`: every segment direction must lie in the bad
/// half-space `{X-coefficient ≥ 0} ⊆ V1`, the final coordinate's derivative
/// along each segment must equal `a/2 · Σ x_i(t)²` as a polynomial, and every
/// segment endpoint must stay in C.
pub fn check_monotone_coordinate(n: usize, word: &[(Vec<Rat>, Rat)]) -> Result<bool, BchError> {
    let g = crate::engel::make_engel(n);
    let dim = g.dim();
    let mut p = crate::linalg::vec_zero(dim);
    for (dir, time) in word {
        if dir.len() != dim {
            return Err(BchError::BadVector {
                expected: dim,
                got: dir.len(),
            });
        }
        if !g.in_layer(dir, 1) {
            return Err(BchError::NotHorizontal);
        }
        let a = dir[0].clone(); // X coefficient
        if a.is_negative() || time.is_negative() {
            return Err(BchError::DirectionOutsideHalfSpace);
        }
        // symbolic derivative of the last coordinate along the segment:
        // z'(t) = a/2 · Σ_i (y_i0 + b_i t)², nonnegative since a ≥ 0
        let mut derivative = Poly::zero();
        for i in 0..n {
            let yi = Poly::linear(p[i].clone(), dir[1 + i].clone());
            derivative = derivative.add(&yi.mul(&yi));
        }
        let derivative = derivative.scale(&(a.clone() * rat(1, 2)));
        // cross-check against the closed-form endpoint: z(T) - z(0) must be
        // the exact integral of the derivative polynomial
        let next = flow_segment(n, &p, dir, time);
        let integral = {
            // ∫_0^T derivative dt, exact
            let mut acc = Rat::zero();
            for (k, c) in derivative.coeffs().iter().enumerate() {
                let kk = int(k as i64 + 1);
                acc += c / kk * time_pow(time, k + 1);
            }
            acc
        };
        if &next[dim - 1] - &p[dim - 1] != integral {
            return Ok(false);
        }
        if next[dim - 1].is_negative() {
            return Ok(false);
        }
        p = next;
    }
    Ok(!p[2 * (n + 1) - 1].is_negative())
}

fn time_pow(t: &Rat, k: usize) -> Rat {
    let mut acc = int(1);
    for _ in 0..k {
        acc *= t;
    }
    acc
}

/// Membership of an exponential-coordinate point in the invariant set C of
/// the En^n realization, evaluated in chart coordinates.
pub fn in_invariant_set(n: usize, log_point: &[Rat]) -> bool {
    let chart = crate::engel::chart_of_exp(n, log_point);
    !chart[2 * (n + 1) - 1].is_negative()
}
