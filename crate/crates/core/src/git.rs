//! Exact GIT stability for torus representations.
//!
//! A point `x` with support `S = {i : x_i != 0}` is classified by where the
//! origin sits relative to the weight polytope `conv{w_i : i in S}`: outside
//! (unstable), anywhere inside (semistable), in the relative interior
//! (polystable), in the relative interior with the weights spanning `Q^r`
//! (stable). Every verdict carries a certificate checkable in exact
//! arithmetic. The only floating-point step is the exact-zero test that
//! defines the support.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{LieVector, Point, RepKind, Representation, OVERFLOW_THRESHOLD};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome};
use crate::rational::{self, int, Rational};

/// A one-parameter subgroup of the torus, `t -> exp(t lambda)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OnePS(pub Vec<i64>);

impl OnePS {
    pub fn as_lie_vector(&self) -> LieVector {
        LieVector::new(self.0.iter().map(|&v| v as f64).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Unstable,
    Semistable,
    Polystable,
    Stable,
}

impl Verdict {
    pub fn is_semistable(self) -> bool {
        self != Verdict::Unstable
    }

    pub fn is_polystable(self) -> bool {
        matches!(self, Verdict::Polystable | Verdict::Stable)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub support: Vec<usize>,
    pub support_weights: Vec<Vec<i64>>,
    /// Destabilizing one-parameter subgroup (unstable points only).
    pub destabilizer: Option<OnePS>,
    /// Convex weights, one per support index, with `sum c_i w_i = 0`. Strictly
    /// positive for polystable points.
    #[serde(serialize_with = "rational::serialize_opt_vec")]
    pub convex_combination: Option<Vec<Rational>>,
    /// Dimension of the stabilizer of `x` in the torus.
    pub stabilizer_rank: usize,
}

impl StabilityReport {
    /// Re-checks the certificate in exact arithmetic.
    pub fn verify(&self) -> bool {
        let r = self.support_weights.first().map_or(0, |w| w.len());
        match self.verdict {
            Verdict::Unstable => match &self.destabilizer {
                Some(l) => self
                    .support_weights
                    .iter()
                    .all(|w| w.iter().zip(&l.0).map(|(a, b)| a * b).sum::<i64>() < 0),
                None => false,
            },
            v => {
                let Some(c) = &self.convex_combination else { return false };
                if c.len() != self.support_weights.len() {
                    return false;
                }
                let strict = v.is_polystable();
                let signs_ok = c.iter().all(|ci| if strict { ci.is_positive() } else { !ci.is_negative() });
                let sums_to_one = self.support_weights.is_empty() || c.iter().sum::<Rational>() == rational::one();
                let balanced = (0..r).all(|a| {
                    c.iter()
                        .zip(&self.support_weights)
                        .map(|(ci, w)| ci * int(w[a]))
                        .sum::<Rational>()
                        .is_zero()
                });
                signs_ok && sums_to_one && balanced
            }
        }
    }
}

fn torus_weights(rep: &Representation) -> Result<(usize, &[Vec<i64>])> {
    match rep.kind() {
        RepKind::Torus { rank, weights } => Ok((*rank, weights)),
        RepKind::MatrixLie => Err(Error::NotTorusKind),
    }
}

/// Indices of the nonzero coordinates.
pub fn support(x: &Point) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
        .map(|(i, _)| i)
        .collect()
}

/// Rank over `Q` of a list of integer vectors.
pub fn exact_rank(vectors: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<Rational>> = vectors.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = &rows[i][col] / &rows[rank][col];
                let pivot = rows[rank].clone();
                for (v, q) in rows[i].iter_mut().zip(pivot.iter()) {
                    *v = &*v - &f * q;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn dedup_weights(weights: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    for w in weights {
        if !out.contains(w) {
            out.push(w.clone());
        }
    }
    out
}

/// Some convex combination of `weights` equal to zero, if one exists.
fn zero_in_hull(weights: &[Vec<i64>], rank: usize) -> Option<Vec<Rational>> {
    let n = weights.len();
    let mut a: Vec<Vec<Rational>> = (0..rank).map(|k| weights.iter().map(|w| int(w[k])).collect()).collect();
    a.push(vec![int(1); n]);
    let mut b = vec![int(0); rank];
    b.push(int(1));
    LinearProgram::new(a, b, vec![int(0); n]).solve().solution().map(|x| x.to_vec())
}

/// A strictly positive convex combination equal to zero, if one exists.
///
/// Maximises `s` with `c_i = s + u_i`, `u_i >= 0`; zero lies in the relative
/// interior exactly when the optimum is positive.
fn zero_in_relint(weights: &[Vec<i64>], rank: usize) -> Option<Vec<Rational>> {
    let n = weights.len();
    // Variables: s, u_1..u_n.
    let mut a: Vec<Vec<Rational>> = (0..rank)
        .map(|k| {
            let mut row = vec![int(weights.iter().map(|w| w[k]).sum())];
            row.extend(weights.iter().map(|w| int(w[k])));
            row
        })
        .collect();
    let mut last = vec![int(n as i64)];
    last.extend((0..n).map(|_| int(1)));
    a.push(last);
    let mut b = vec![int(0); rank];
    b.push(int(1));
    let mut c = vec![int(-1)];
    c.extend((0..n).map(|_| int(0)));
    match LinearProgram::new(a, b, c).solve() {
        LpOutcome::Optimal { x, .. } if x[0].is_positive() => {
            Some(x[1..].iter().map(|u| u + &x[0]).collect())
        }
        _ => None,
    }
}

/// Exact GIT classification of `x` for a torus representation.
///
/// The zero point is classified polystable with empty support.
pub fn classify_stability(rep: &Representation, x: &Point) -> Result<StabilityReport> {
    let (rank, weights) = torus_weights(rep)?;
    rep.check_point(x)?;
    let support = support(x);
    let support_weights: Vec<Vec<i64>> = support.iter().map(|&i| weights[i].clone()).collect();
    let stabilizer_rank = rank - exact_rank(&support_weights);
    if support.is_empty() {
        return Ok(StabilityReport {
            verdict: Verdict::Polystable,
            support,
            support_weights,
            destabilizer: None,
            convex_combination: Some(Vec::new()),
            stabilizer_rank,
        });
    }
    let (verdict, destabilizer, combination) = match zero_in_hull(&support_weights, rank) {
        None => {
            let lambda = destabilizing_direction(&support_weights, rank);
            (Verdict::Unstable, Some(lambda), None)
        }
        Some(c) => match zero_in_relint(&support_weights, rank) {
            Some(strict) => {
                let v = if stabilizer_rank == 0 { Verdict::Stable } else { Verdict::Polystable };
                (v, None, Some(strict))
            }
            None => (Verdict::Semistable, None, Some(c)),
        },
    };
    Ok(StabilityReport {
        verdict,
        support,
        support_weights,
        destabilizer,
        convex_combination: combination,
        stabilizer_rank,
    })
}

/// A destabilizing one-parameter subgroup, or `None` when `x` is semistable.
///
/// The direction is the negated closest point of the support weight polytope
/// to the origin, scaled to a primitive integer vector; every support weight
/// pairs strictly negatively with it.
pub fn destabilizer(rep: &Representation, x: &Point) -> Result<Option<OnePS>> {
    let (rank, weights) = torus_weights(rep)?;
    rep.check_point(x)?;
    let support = support(x);
    if support.is_empty() {
        return Err(Error::ZeroPoint);
    }
    let sw: Vec<Vec<i64>> = support.iter().map(|&i| weights[i].clone()).collect();
    if zero_in_hull(&sw, rank).is_some() {
        return Ok(None);
    }
    let lambda = destabilizing_direction(&sw, rank);
    debug_assert!(asymptotic_slope(rep, x, &lambda).map(|s| s.is_negative()).unwrap_or(false));
    Ok(Some(lambda))
}

/// An integer `lambda` with `<w, lambda> = 0` for every weight in `kept` and
/// `<w, lambda> < 0` for every weight in `lost`, or `None` if no such
/// functional exists (the kept weights do not span a face of the polytope
/// cut out by the lost ones).
pub fn face_functional(kept: &[Vec<i64>], lost: &[Vec<i64>]) -> Option<OnePS> {
    let rank = kept.iter().chain(lost).map(Vec::len).next()?;
    // Variables: lambda = p - q with p, q >= 0, then one slack per lost weight.
    let n = 2 * rank + lost.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for w in kept {
        let mut row = vec![Rational::zero(); n];
        for k in 0..rank {
            row[k] = int(w[k]);
            row[rank + k] = int(-w[k]);
        }
        a.push(row);
        b.push(Rational::zero());
    }
    for (j, w) in lost.iter().enumerate() {
        let mut row = vec![Rational::zero(); n];
        for k in 0..rank {
            row[k] = int(w[k]);
            row[rank + k] = int(-w[k]);
        }
        row[2 * rank + j] = int(1);
        a.push(row);
        b.push(int(-1));
    }
    let x = match LinearProgram::new(a, b, vec![Rational::zero(); n]).solve() {
        LpOutcome::Optimal { x, .. } => x,
        _ => return None,
    };
    let lambda: Vec<Rational> = (0..rank).map(|k| &x[k] - &x[rank + k]).collect();
    Some(primitive(&lambda))
}

fn destabilizing_direction(support_weights: &[Vec<i64>], rank: usize) -> OnePS {
    let p = closest_point_to_origin(&dedup_weights(support_weights), rank);
    primitive(&p.iter().map(|v| -v).collect::<Vec<_>>())
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact closest point of `conv(points)` to the origin.
///
/// Enumerates affinely independent subsets of at most `rank` points (the
/// closest point lies on a face of dimension below `rank` when the origin is
/// outside) and keeps the shortest projection that lands inside its simplex.
pub fn closest_point_to_origin(points: &[Vec<i64>], rank: usize) -> Vec<Rational> {
    let pts: Vec<Vec<Rational>> = points.iter().map(|p| p.iter().map(|&v| int(v)).collect()).collect();
    let n = pts.len();
    let max_size = rank.max(1).min(n);
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    let mut subset: Vec<usize> = Vec::new();
    fn visit(
        start: usize,
        n: usize,
        max_size: usize,
        subset: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        for i in start..n {
            subset.push(i);
            f(subset);
            if subset.len() < max_size {
                visit(i + 1, n, max_size, subset, f);
            }
            subset.pop();
        }
    }
    visit(0, n, max_size, &mut subset, &mut |s: &[usize]| {
        if let Some(p) = simplex_projection(&pts, s) {
            let norm = dot(&p, &p);
            if best.as_ref().is_none_or(|(bn, _)| norm < *bn) {
                best = Some((norm, p));
            }
        }
    });
    best.expect("nonempty point set has a closest point").1
}

/// Projection of the origin onto the affine hull of the chosen points when it
/// lies in their convex hull.
fn simplex_projection(pts: &[Vec<Rational>], subset: &[usize]) -> Option<Vec<Rational>> {
    let v0 = &pts[subset[0]];
    let dirs: Vec<Vec<Rational>> = subset[1..]
        .iter()
        .map(|&j| pts[j].iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    let k = dirs.len();
    // Gram system  sum_l <d_j, d_l> alpha_l = -<v0, d_j>.
    let mut m: Vec<Vec<Rational>> = (0..k)
        .map(|j| {
            let mut row: Vec<Rational> = (0..k).map(|l| dot(&dirs[j], &dirs[l])).collect();
            row.push(-dot(v0, &dirs[j]));
            row
        })
        .collect();
    for col in 0..k {
        let p = (col..k).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &pivot;
        }
        let prow = m[col].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, q) in row.iter_mut().zip(prow.iter()) {
                    *v = &*v - &f * q;
                }
            }
        }
    }
    let alpha: Vec<Rational> = m.iter().map(|row| row[k].clone()).collect();
    let beta0 = rational::one() - alpha.iter().sum::<Rational>();
    if beta0.is_negative() || alpha.iter().any(|a| a.is_negative()) {
        return None;
    }
    let mut p = v0.clone();
    for (a, d) in alpha.iter().zip(&dirs) {
        for (pi, di) in p.iter_mut().zip(d) {
            *pi += a * di;
        }
    }
    Some(p)
}

fn primitive(v: &[Rational]) -> OnePS {
    let lcm = v.iter().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let g = if g.is_zero() { BigInt::from(1) } else { g };
    OnePS(
        ints.iter()
            .map(|x| (x / &g).to_i64().expect("destabilizer entries fit in i64"))
            .collect(),
    )
}

fn check_one_ps(rep: &Representation, lambda: &OnePS) -> Result<()> {
    let (rank, _) = torus_weights(rep)?;
    if lambda.0.len() != rank {
        return Err(Error::DimensionMismatch { expected: rank, found: lambda.0.len() });
    }
    Ok(())
}

/// Kempf-Ness energy along the ray `exp(t lambda) x`:
/// `f(t) = (1/2) sum_{i in S} |x_i|^2 exp(2 t <w_i, lambda>)`.
pub fn one_ps_energy(rep: &Representation, x: &Point, lambda: &OnePS, t: f64) -> Result<f64> {
    let (_, weights) = torus_weights(rep)?;
    rep.check_point(x)?;
    check_one_ps(rep, lambda)?;
    let mut total = 0.0;
    for (w, z) in weights.iter().zip(x.iter()) {
        let n2 = z.norm_sqr();
        if n2 == 0.0 {
            continue;
        }
        let pairing: i64 = w.iter().zip(&lambda.0).map(|(a, b)| a * b).sum();
        total += 0.5 * n2 * (2.0 * t * pairing as f64).exp();
    }
    if !(total <= OVERFLOW_THRESHOLD) {
        return Err(Error::Overflow(total));
    }
    Ok(total)
}

/// `lim (1/t) log |exp(t lambda) x| = max_{i in S} <w_i, lambda>`, exactly.
pub fn asymptotic_slope(rep: &Representation, x: &Point, lambda: &OnePS) -> Result<Rational> {
    let (_, weights) = torus_weights(rep)?;
    rep.check_point(x)?;
    check_one_ps(rep, lambda)?;
    support(x)
        .iter()
        .map(|&i| weights[i].iter().zip(&lambda.0).map(|(a, b)| a * b).sum::<i64>())
        .max()
        .map(int)
        .ok_or(Error::EmptySupport)
}
