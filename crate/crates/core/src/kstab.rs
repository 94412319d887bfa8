//! Donaldson-Futaki invariants from Hilbert and weight polynomials, a monomial
//! enumeration oracle for linear `C*`-actions on projective space, and the
//! adiabatic coefficients `W0`, `W1` of a fibration degeneration.

use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector, SVD};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

/// Exact samples `(j, value)` of a function expected to be polynomial in `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionData {
    pub samples: Vec<(i64, Rational)>,
    /// Dimension `n` of the underlying variety.
    pub degree: usize,
}

impl ExpansionData {
    pub fn new(samples: Vec<(i64, Rational)>, degree: usize) -> Self {
        ExpansionData { samples, degree }
    }
}

/// Fits a polynomial of degree at most `top_degree` through the samples.
///
/// The first `top_degree + 1` samples (by increasing `j`) determine the
/// polynomial; every further sample must lie on it. Returns coefficients from
/// `j^top_degree` down to the constant term.
pub fn fit_expansion(data: &ExpansionData, top_degree: usize) -> Result<Vec<Rational>> {
    let needed = top_degree + 1;
    if data.samples.len() < needed {
        return Err(Error::InsufficientSamples { needed, got: data.samples.len() });
    }
    let mut samples = data.samples.clone();
    samples.sort_by_key(|(j, _)| *j);
    if samples.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::InvalidSample("sample indices must be distinct".into()));
    }
    let (fit, holdout) = samples.split_at(needed);
    let ascending = interpolate(fit);
    for (j, value) in holdout {
        if &evaluate(&ascending, *j) != value {
            return Err(Error::NotPolynomial(*j));
        }
    }
    Ok(ascending.into_iter().rev().collect())
}

/// Newton interpolation, returned as ascending monomial coefficients.
fn interpolate(points: &[(i64, Rational)]) -> Vec<Rational> {
    let n = points.len();
    let xs: Vec<Rational> = points.iter().map(|(j, _)| int(*j)).collect();
    let mut dd: Vec<Rational> = points.iter().map(|(_, v)| v.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // Horner expansion of sum dd[k] prod_{m<k} (x - xs[m]).
    let mut coeffs = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        // coeffs <- coeffs * (x - xs[k]) + dd[k]
        let mut next = vec![Rational::zero(); n];
        for (p, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if p + 1 < n {
                next[p + 1] += c;
            }
            next[p] -= c * &xs[k];
        }
        next[0] += &dd[k];
        coeffs = next;
    }
    coeffs
}

fn evaluate(ascending: &[Rational], j: i64) -> Rational {
    let x = int(j);
    ascending.iter().rev().fold(Rational::zero(), |acc, c| acc * &x + c)
}

/// `DF = (a1 b0 - a0 b1) / a0^2`.
pub fn df_invariant(a0: &Rational, a1: &Rational, b0: &Rational, b1: &Rational) -> Result<Rational> {
    if !a0.is_positive() {
        return Err(Error::NonpositiveLeadingCoefficient);
    }
    Ok((a1 * b0 - a0 * b1) / (a0 * a0))
}

/// Largest projective dimension the monomial oracle enumerates.
pub const ORACLE_MAX_DIM: usize = 4;
/// Largest degree the monomial oracle enumerates.
pub const ORACLE_MAX_DEGREE: u32 = 30;

/// Dimension and total weight of `H^0(P^d, O(j))` under the `C*`-action with
/// coordinate weights `c`, by enumerating all degree-`j` monomials.
pub fn projective_weight_oracle(coordinate_weights: &[i64], j: u32) -> Result<(u64, i64)> {
    if coordinate_weights.is_empty() {
        return Err(Error::InvalidSample("need at least one coordinate".into()));
    }
    if coordinate_weights.len() > ORACLE_MAX_DIM + 1 || j > ORACLE_MAX_DEGREE {
        return Err(Error::EnumerationBoundExceeded);
    }
    let mut count = 0u64;
    let mut total = 0i64;
    enumerate(coordinate_weights, j, 0, &mut count, &mut total);
    Ok((count, total))
}

fn enumerate(c: &[i64], remaining: u32, weight: i64, count: &mut u64, total: &mut i64) {
    match c {
        [] => {}
        [last] => {
            *count += 1;
            *total += weight + last * remaining as i64;
        }
        [first, rest @ ..] => {
            for e in 0..=remaining {
                enumerate(rest, remaining - e, weight + first * e as i64, count, total);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DFResult {
    #[serde(serialize_with = "rational::serialize")]
    pub df: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub a0: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub a1: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub b0: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub b1: Rational,
}

/// DF of the product test configuration on `P^d` induced by coordinate
/// weights `c`: enumerate, fit the Hilbert polynomial (degree `n`) and the
/// weight polynomial (degree `n + 1`), then combine.
pub fn df_from_oracle(coordinate_weights: &[i64], n: usize, j_range: RangeInclusive<u32>) -> Result<DFResult> {
    let mut dims = Vec::new();
    let mut weights = Vec::new();
    for j in j_range {
        let (dim, w) = projective_weight_oracle(coordinate_weights, j)?;
        dims.push((j as i64, int(dim as i64)));
        weights.push((j as i64, int(w)));
    }
    let hilbert = fit_expansion(&ExpansionData::new(dims, n), n)?;
    let weight = fit_expansion(&ExpansionData::new(weights, n), n + 1)?;
    let (a0, a1) = (hilbert[0].clone(), hilbert[1].clone());
    let (b0, b1) = (weight[0].clone(), weight[1].clone());
    let df = df_invariant(&a0, &a1, &b0, &b1)?;
    Ok(DFResult { df, a0, a1, b0, b1 })
}

/// Largest accepted condition number of the adiabatic design matrix.
pub const MAX_CONDITION: f64 = 1e12;
/// Smallest accepted `k` in adiabatic samples.
pub const MIN_ADIABATIC_K: f64 = 10.0;

/// Least-squares fit `value ~ W0 + W1/k + c2/k^2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdiabaticResult {
    pub w0: f64,
    pub w1: f64,
    pub c2: f64,
    /// Euclidean norm of the fit residuals.
    pub residual: f64,
    pub condition: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Negative,
    /// Indistinguishable from zero within the stated uncertainty.
    Zero,
    Positive,
}

impl Sign {
    fn of(v: f64, uncertainty: f64) -> Sign {
        if v > uncertainty {
            Sign::Positive
        } else if v < -uncertainty {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

/// Sign pattern of `(W0, W1)` and the resulting semistability bookkeeping:
/// `W0 >= 0`, and `W1 >= 0` whenever `W0 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FibrationVerdict {
    pub w0: Sign,
    pub w1: Sign,
    pub semistable: bool,
    pub uncertainty: f64,
}

impl AdiabaticResult {
    /// Reads the signs with uncertainty `tol + residual`.
    pub fn verdict(&self, tol: f64) -> FibrationVerdict {
        let uncertainty = tol + self.residual;
        let w0 = Sign::of(self.w0, uncertainty);
        let w1 = Sign::of(self.w1, uncertainty);
        let semistable = match w0 {
            Sign::Positive => true,
            Sign::Negative => false,
            Sign::Zero => w1 != Sign::Negative,
        };
        FibrationVerdict { w0, w1, semistable, uncertainty }
    }
}

pub fn adiabatic_expansion(samples: &[(f64, f64)]) -> Result<AdiabaticResult> {
    for &(k, v) in samples {
        if !k.is_finite() || !v.is_finite() || k < MIN_ADIABATIC_K {
            return Err(Error::InvalidSample(format!("(k = {k}, value = {v})")));
        }
    }
    let mut ks: Vec<f64> = samples.iter().map(|s| s.0).collect();
    ks.sort_by(f64::total_cmp);
    ks.dedup();
    if ks.len() < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: ks.len() });
    }
    if ks.len() != samples.len() {
        return Err(Error::InvalidSample("adiabatic parameters must be distinct".into()));
    }
    let design = DMatrix::from_fn(samples.len(), 3, |r, c| samples[r].0.powi(-(c as i32)));
    let rhs = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let svd = SVD::new(design.clone(), true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(Error::IllConditioned(condition));
    }
    let coef = svd.solve(&rhs, 0.0).map_err(|e| Error::InvalidSample(e.to_string()))?;
    let residual = (&design * &coef - &rhs).norm();
    Ok(AdiabaticResult { w0: coef[0], w1: coef[1], c2: coef[2], residual, condition })
}

/// `C(n, k)` as a rational, for closed-form checks.
pub fn binomial(n: u64, k: u64) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * int((n - i) as i64) / int((i + 1) as i64))
}
