//! Moment maps on the affine and projective charts, the quadratic invariant
//! `nu`, and a finite-difference verifier for the moment-map identity
//! `d<mu, xi>(w) = omega(w, sigma_x(xi))`.
//!
//! Conventions: `omega(u, v) = Im h(u, v)`, `J = i` and
//! `<mu(x), xi> = -Im(x^* rho(xi) x) / 2` on `C^d`. On the projective chart the
//! pairing is divided by `|z|^2`, which pairs with the Fubini-Study form
//! `Im h(u_h, v_h) / |z|^2` (`u_h` the part of `u` Hermitian-orthogonal to `z`).

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    hermitian, infinitesimal_action, omega, LieVector, Point, RepKind, Representation, C64,
};
use crate::error::{Error, Result};

/// Where a point lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    #[default]
    Affine,
    Projective,
}

/// Value of the moment map at a point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentValue {
    pub value: LieVector,
    #[serde(serialize_with = "crate::scenario::serialize_point")]
    pub base_point: Point,
    pub chart: Chart,
}

/// Value of `nu` on a tangent vector at the origin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NuValue {
    pub value: LieVector,
    #[serde(serialize_with = "crate::scenario::serialize_point")]
    pub direction: Point,
}

/// Unit-norm representative with the first nonzero coordinate real positive.
pub fn normalize_projective(z: &Point) -> Result<Point> {
    let n = z.norm();
    if n == 0.0 {
        return Err(Error::ZeroProjectivePoint);
    }
    let first = z.iter().find(|c| c.norm() > 0.0).copied().unwrap_or(C64::new(1.0, 0.0));
    let phase = first.conj() / first.norm();
    Ok(z * (phase / n))
}

/// The Fubini-Study form at `z` evaluated on ambient vectors `u`, `v`.
pub fn fubini_study(z: &Point, u: &Point, v: &Point) -> Result<f64> {
    let n2 = z.norm_squared();
    if n2 == 0.0 {
        return Err(Error::ZeroProjectivePoint);
    }
    let horizontal = |w: &Point| w - z * (hermitian(z, w) / n2);
    Ok(omega(&horizontal(u), &horizontal(v)) / n2)
}

/// `-Im(x^* rho(e_a) x) / 2` for every basis vector, before any chart factor.
fn raw_pairings(rep: &Representation, x: &Point) -> DVector<f64> {
    let m = rep.algebra_dim();
    match rep.kind() {
        RepKind::Torus { weights, .. } => {
            let mut out = DVector::zeros(m);
            for (w, z) in weights.iter().zip(x.iter()) {
                let n2 = z.norm_sqr();
                if n2 == 0.0 {
                    continue;
                }
                for (a, wa) in w.iter().enumerate() {
                    out[a] -= 0.5 * n2 * *wa as f64;
                }
            }
            out
        }
        RepKind::MatrixLie => DVector::from_fn(m, |a, _| {
            -0.5 * hermitian(x, &(rep.generator(a) * x)).im
        }),
    }
}

fn chart_factor(x: &Point, chart: Chart) -> Result<f64> {
    match chart {
        Chart::Affine => Ok(1.0),
        Chart::Projective => {
            let n2 = x.norm_squared();
            if n2 == 0.0 {
                Err(Error::ZeroProjectivePoint)
            } else {
                Ok(1.0 / n2)
            }
        }
    }
}

/// `<mu(x), xi>`.
pub fn moment_pairing(rep: &Representation, x: &Point, xi: &LieVector, chart: Chart) -> Result<f64> {
    rep.check_point(x)?;
    let f = chart_factor(x, chart)?;
    let rho_x = infinitesimal_action(rep, xi, x)?;
    // sigma = -rho x, so -Im(x^* rho x)/2 = Im(x^* sigma)/2.
    Ok(0.5 * hermitian(x, &rho_x).im * f)
}

/// The moment map as a Lie algebra vector, raised through the inner product.
pub fn moment_map(rep: &Representation, x: &Point, chart: Chart) -> Result<MomentValue> {
    Ok(MomentValue {
        value: moment_vector(rep, x, chart)?,
        base_point: x.clone(),
        chart,
    })
}

/// Just the Lie algebra vector of [`moment_map`].
pub fn moment_vector(rep: &Representation, x: &Point, chart: Chart) -> Result<LieVector> {
    rep.check_point(x)?;
    let f = chart_factor(x, chart)?;
    Ok(rep.raise(&(raw_pairings(rep, x) * f)))
}

/// `|mu(x)|^2` in the representation's inner product.
pub fn mu_norm_sq(rep: &Representation, x: &Point, chart: Chart) -> Result<f64> {
    let mu = moment_vector(rep, x, chart)?;
    Ok(rep.pair(&mu, &mu))
}

/// `<nu(v), xi> = omega(rho(xi) v, v) / 2` for the linearised action at the
/// (fixed) origin.
pub fn nu_map(rep: &Representation, v: &Point) -> Result<NuValue> {
    rep.check_point(v)?;
    let m = rep.algebra_dim();
    let pairings = DVector::from_fn(m, |a, _| {
        let a_xi_v = rep.generator(a) * v;
        0.5 * omega(&a_xi_v, v)
    });
    Ok(NuValue { value: rep.raise(&pairings), direction: v.clone() })
}

/// Largest deviation, over the `2d` real coordinate directions `w`, between the
/// central difference of `<mu, xi>` at `x` along `w` and `omega(w, sigma_x(xi))`
/// (the Fubini-Study form on the projective chart).
pub fn check_defining_property(
    rep: &Representation,
    x: &Point,
    xi: &LieVector,
    step: f64,
    chart: Chart,
) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::InvalidSample(format!("finite-difference step {step} must be positive")));
    }
    let base = match chart {
        Chart::Affine => x.clone(),
        Chart::Projective => normalize_projective(x)?,
    };
    let sigma = infinitesimal_action(rep, xi, &base)?;
    let d = rep.dim();
    let mut worst = 0.0_f64;
    for i in 0..d {
        for unit in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
            let mut w = Point::zeros(d);
            w[i] = unit;
            let plus = moment_pairing(rep, &(&base + &w * C64::new(step, 0.0)), xi, chart)?;
            let minus = moment_pairing(rep, &(&base - &w * C64::new(step, 0.0)), xi, chart)?;
            let derivative = (plus - minus) / (2.0 * step);
            let expected = match chart {
                Chart::Affine => omega(&w, &sigma),
                Chart::Projective => fubini_study(&base, &w, &sigma)?,
            };
            worst = worst.max((derivative - expected).abs());
        }
    }
    Ok(worst)
}
