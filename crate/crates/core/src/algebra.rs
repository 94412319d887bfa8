//! Compact group representations on `C^d` and the Lie algebra arithmetic the
//! rest of the crate is built on.
//!
//! A [`Representation`] is either a torus given by integer weights or a matrix
//! Lie algebra given by a basis of skew-Hermitian matrices. Lie algebra
//! elements are [`LieVector`]s holding coordinates in that basis; the
//! representation's inner product is the only duality used anywhere, so
//! moment-map values are `LieVector`s as well.
//!
//! Sign convention: the infinitesimal action is `sigma_x(xi) = -rho(xi) x`,
//! the velocity of `exp(-t xi) . x` at `t = 0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Cholesky, DMatrix, DVector, SVD};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
/// A point of `C^d` (or a representative of a projective point).
pub type Point = DVector<C64>;
/// Complex `d x d` matrix.
pub type CMatrix = DMatrix<C64>;

const SKEW_TOL: f64 = 1e-12;
const BRACKET_TOL: f64 = 1e-10;
const MAX_WEIGHT: i64 = 1_000_000;
/// Default relative threshold for [`stabilizer_algebra`].
pub const DEFAULT_STABILIZER_TOL: f64 = 1e-8;
/// Coordinates beyond this magnitude signal a divergent complexified ray.
pub const OVERFLOW_THRESHOLD: f64 = 1e100;

/// Element of the Lie algebra in coordinates of the representation's basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LieVector(DVector<f64>);

impl LieVector {
    pub fn new(coords: Vec<f64>) -> Self {
        LieVector(DVector::from_vec(coords))
    }

    pub fn from_dvector(coords: DVector<f64>) -> Self {
        LieVector(coords)
    }

    pub fn zeros(m: usize) -> Self {
        LieVector(DVector::zeros(m))
    }

    /// The `a`-th basis vector `e_a` of an `m`-dimensional algebra.
    pub fn basis(m: usize, a: usize) -> Self {
        let mut v = DVector::zeros(m);
        v[a] = 1.0;
        LieVector(v)
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.iter().copied().collect()
    }
}

impl Add for &LieVector {
    type Output = LieVector;
    fn add(self, rhs: &LieVector) -> LieVector {
        LieVector(&self.0 + &rhs.0)
    }
}

impl Sub for &LieVector {
    type Output = LieVector;
    fn sub(self, rhs: &LieVector) -> LieVector {
        LieVector(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &LieVector {
    type Output = LieVector;
    fn mul(self, rhs: f64) -> LieVector {
        LieVector(&self.0 * rhs)
    }
}

impl Neg for &LieVector {
    type Output = LieVector;
    fn neg(self) -> LieVector {
        LieVector(-&self.0)
    }
}

impl Serialize for LieVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LieVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<f64>::deserialize(d).map(LieVector::new)
    }
}

/// How the Lie algebra is presented.
#[derive(Clone, Debug, PartialEq)]
pub enum RepKind {
    /// Torus of the given rank acting diagonally; row `i` is the weight of
    /// coordinate `i`.
    Torus { rank: usize, weights: Vec<Vec<i64>> },
    /// Span of the skew-Hermitian basis matrices.
    MatrixLie,
}

/// Hermitian form `h(u, v) = sum conj(u_i) v_i`.
pub fn hermitian(u: &Point, v: &Point) -> C64 {
    u.dotc(v)
}

/// Linear symplectic form `omega(u, v) = Im h(u, v)`, compatible with `J = i`.
pub fn omega(u: &Point, v: &Point) -> f64 {
    hermitian(u, v).im
}

/// The complex structure: multiplication by `i`.
pub fn apply_j(u: &Point) -> Point {
    u * C64::i()
}

/// A compact group acting unitarily on `C^d`, together with an inner product
/// on its Lie algebra.
#[derive(Clone, Debug)]
pub struct Representation {
    dim: usize,
    kind: RepKind,
    generators: Vec<CMatrix>,
    inner: DMatrix<f64>,
    inner_inv: DMatrix<f64>,
    inner_chol_l: DMatrix<f64>,
    // Inverse Frobenius Gram matrix of the basis; expresses matrices in basis
    // coordinates (MatrixLie only).
    frob_gram_inv: Option<DMatrix<f64>>,
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.kind == other.kind
            && self.generators == other.generators
            && self.inner == other.inner
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RepKind::Torus { rank, weights } => {
                write!(f, "torus rank {rank} on C^{} with weights {weights:?}", self.dim)
            }
            RepKind::MatrixLie => write!(
                f,
                "matrix Lie algebra of dimension {} on C^{}",
                self.generators.len(),
                self.dim
            ),
        }
    }
}

/// Torus representation from a `d x r` integer weight matrix.
pub fn make_torus_rep(rank: usize, weights: &[Vec<i64>]) -> Result<Representation> {
    if rank == 0 || weights.is_empty() {
        return Err(Error::EmptyWeights);
    }
    for row in weights {
        if row.len() != rank {
            return Err(Error::DimensionMismatch { expected: rank, found: row.len() });
        }
        if let Some(&w) = row.iter().find(|w| w.abs() > MAX_WEIGHT) {
            return Err(Error::WeightTooLarge(w));
        }
    }
    let dim = weights.len();
    let generators = (0..rank)
        .map(|a| {
            CMatrix::from_diagonal(&DVector::from_iterator(
                dim,
                weights.iter().map(|row| C64::new(0.0, row[a] as f64)),
            ))
        })
        .collect();
    let inner = DMatrix::identity(rank, rank);
    Ok(Representation {
        dim,
        kind: RepKind::Torus { rank, weights: weights.to_vec() },
        generators,
        inner_inv: inner.clone(),
        inner_chol_l: inner.clone(),
        inner,
        frob_gram_inv: None,
    })
}

/// Matrix Lie algebra representation with the `-Tr(xi_a xi_b)` inner product.
///
/// The basis must consist of skew-Hermitian matrices of a common size whose
/// pairwise brackets stay in their real span.
pub fn make_matrix_rep(basis: Vec<CMatrix>) -> Result<Representation> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let dim = basis[0].nrows();
    for (index, b) in basis.iter().enumerate() {
        if b.nrows() != dim || b.ncols() != dim || dim == 0 {
            return Err(Error::BadMatrixShape { index });
        }
        let residual = (b + b.adjoint()).norm();
        if residual > SKEW_TOL * b.norm() {
            return Err(Error::NotSkewHermitian { index, residual });
        }
    }
    let m = basis.len();
    let inner = DMatrix::from_fn(m, m, |a, b| -(&basis[a] * &basis[b]).trace().re);
    let frob = DMatrix::from_fn(m, m, |a, b| basis[a].dotc(&basis[b]).re);
    let frob_gram_inv = Cholesky::new(frob)
        .ok_or(Error::NotPositiveDefinite)?
        .inverse();
    let (inner_inv, inner_chol_l) = factor_inner(&inner)?;
    let rep = Representation {
        dim,
        kind: RepKind::MatrixLie,
        generators: basis,
        inner,
        inner_inv,
        inner_chol_l,
        frob_gram_inv: Some(frob_gram_inv),
    };
    for a in 0..m {
        for b in (a + 1)..m {
            let c = commutator(&rep.generators[a], &rep.generators[b]);
            let (_, residual) = rep.matrix_to_coords(&c);
            let scale = rep.generators[a].norm() * rep.generators[b].norm();
            if residual > BRACKET_TOL * scale.max(1.0) {
                return Err(Error::NotClosedUnderBracket { a, b, residual });
            }
        }
    }
    Ok(rep)
}

fn factor_inner(inner: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let asym = (inner - inner.transpose()).norm();
    if asym > 1e-12 * inner.norm().max(1.0) {
        return Err(Error::NotPositiveDefinite);
    }
    let chol = Cholesky::new(inner.clone()).ok_or(Error::NotPositiveDefinite)?;
    Ok((chol.inverse(), chol.l()))
}

fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

impl Representation {
    /// Ambient complex dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension `m` of the Lie algebra (number of basis elements).
    pub fn algebra_dim(&self) -> usize {
        self.generators.len()
    }

    pub fn kind(&self) -> &RepKind {
        &self.kind
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.kind, RepKind::Torus { .. })
    }

    /// Integer weights for torus representations.
    pub fn weights(&self) -> Option<&[Vec<i64>]> {
        match &self.kind {
            RepKind::Torus { weights, .. } => Some(weights),
            RepKind::MatrixLie => None,
        }
    }

    /// `rho(e_a)` as a matrix.
    pub fn generator(&self, a: usize) -> &CMatrix {
        &self.generators[a]
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn inner_product(&self) -> &DMatrix<f64> {
        &self.inner
    }

    /// Replace the inner product. It must be symmetric positive-definite and,
    /// for matrix kinds, Ad-invariant.
    pub fn with_inner_product(mut self, inner: DMatrix<f64>) -> Result<Self> {
        let m = self.algebra_dim();
        if inner.nrows() != m || inner.ncols() != m {
            return Err(Error::DimensionMismatch { expected: m, found: inner.nrows() });
        }
        let (inv, l) = factor_inner(&inner)?;
        if !self.is_torus() {
            for z in 0..m {
                let ez = LieVector::basis(m, z);
                for a in 0..m {
                    let ea = LieVector::basis(m, a);
                    let za = self.bracket(&ez, &ea);
                    for b in 0..m {
                        let eb = LieVector::basis(m, b);
                        let zb = self.bracket(&ez, &eb);
                        let lhs = za.coords().dot(&(&inner * eb.coords()))
                            + ea.coords().dot(&(&inner * zb.coords()));
                        if lhs.abs() > 1e-9 * inner.norm() {
                            return Err(Error::NotAdInvariant);
                        }
                    }
                }
            }
        }
        self.inner = inner;
        self.inner_inv = inv;
        self.inner_chol_l = l;
        Ok(self)
    }

    /// The same group acting on `C^(1+d)`, trivially on the new first
    /// coordinate. Used to embed `C^d` as an affine chart of `P^d`.
    pub fn with_trivial_summand(&self) -> Representation {
        let mut rep = self.clone();
        rep.dim += 1;
        rep.generators = self
            .generators
            .iter()
            .map(|g| {
                let mut big = CMatrix::zeros(self.dim + 1, self.dim + 1);
                big.view_mut((1, 1), (self.dim, self.dim)).copy_from(g);
                big
            })
            .collect();
        if let RepKind::Torus { rank, weights } = &self.kind {
            let mut w = vec![vec![0; *rank]];
            w.extend(weights.iter().cloned());
            rep.kind = RepKind::Torus { rank: *rank, weights: w };
        }
        rep
    }

    pub(crate) fn check_point(&self, x: &Point) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        Ok(())
    }

    pub(crate) fn check_vector(&self, xi: &LieVector) -> Result<()> {
        if xi.len() != self.algebra_dim() {
            return Err(Error::DimensionMismatch { expected: self.algebra_dim(), found: xi.len() });
        }
        Ok(())
    }

    /// `rho(xi)` as a skew-Hermitian matrix.
    pub fn rho(&self, xi: &LieVector) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (g, c) in self.generators.iter().zip(xi.coords().iter()) {
            if *c != 0.0 {
                out += g * C64::new(*c, 0.0);
            }
        }
        out
    }

    /// `rho(xi) x` without forming the matrix for torus kinds.
    pub fn apply_rho(&self, xi: &LieVector, x: &Point) -> Point {
        match &self.kind {
            RepKind::Torus { weights, .. } => Point::from_iterator(
                self.dim,
                weights.iter().zip(x.iter()).map(|(w, z)| {
                    let s = self.weight_pairing(w, xi);
                    z * C64::new(0.0, s)
                }),
            ),
            RepKind::MatrixLie => self.rho(xi) * x,
        }
    }

    fn weight_pairing(&self, w: &[i64], xi: &LieVector) -> f64 {
        w.iter().zip(xi.coords().iter()).map(|(wa, c)| *wa as f64 * c).sum()
    }

    /// Inner product `<xi, eta>`.
    pub fn pair(&self, xi: &LieVector, eta: &LieVector) -> f64 {
        xi.coords().dot(&(&self.inner * eta.coords()))
    }

    /// Norm induced by the inner product.
    pub fn norm(&self, xi: &LieVector) -> f64 {
        self.pair(xi, xi).max(0.0).sqrt()
    }

    /// The vector `m` with `<m, e_a> = pairings[a]` for every basis vector.
    pub fn raise(&self, pairings: &DVector<f64>) -> LieVector {
        LieVector(&self.inner_inv * pairings)
    }

    /// Lie bracket expressed in basis coordinates (zero for torus kinds).
    pub fn bracket(&self, xi: &LieVector, eta: &LieVector) -> LieVector {
        match self.kind {
            RepKind::Torus { .. } => LieVector::zeros(self.algebra_dim()),
            RepKind::MatrixLie => {
                let c = commutator(&self.rho(xi), &self.rho(eta));
                self.matrix_to_coords(&c).0
            }
        }
    }

    /// Norm of the matrix commutator `[rho(xi), rho(eta)]`.
    pub fn bracket_norm(&self, xi: &LieVector, eta: &LieVector) -> f64 {
        match self.kind {
            RepKind::Torus { .. } => 0.0,
            RepKind::MatrixLie => commutator(&self.rho(xi), &self.rho(eta)).norm(),
        }
    }

    // Least-squares coordinates of a matrix in the real span of the basis,
    // with the Frobenius residual.
    fn matrix_to_coords(&self, c: &CMatrix) -> (LieVector, f64) {
        let m = self.algebra_dim();
        let rhs = DVector::from_fn(m, |a, _| self.generators[a].dotc(c).re);
        let coords = match &self.frob_gram_inv {
            Some(inv) => inv * rhs,
            None => DVector::zeros(m),
        };
        let xi = LieVector(coords);
        let residual = (c - self.rho(&xi)).norm();
        (xi, residual)
    }

    /// Express vectors in an orthonormal basis of their span (inner-product
    /// Gram-Schmidt); dependent vectors are dropped.
    pub fn orthonormalize(&self, vectors: &[LieVector]) -> Vec<LieVector> {
        let mut out: Vec<LieVector> = Vec::new();
        for v in vectors {
            let scale = self.norm(v);
            let mut u = v.clone();
            for q in &out {
                let p = self.pair(q, &u);
                u = &u - &(q * p);
            }
            let n = self.norm(&u);
            if n > 1e-10 * scale.max(1e-300) && n > 0.0 {
                out.push(&u * (1.0 / n));
            }
        }
        out
    }
}

/// `sigma_x(xi) = -rho(xi) x`, the velocity of `exp(-t xi) . x` at `t = 0`.
pub fn infinitesimal_action(rep: &Representation, xi: &LieVector, x: &Point) -> Result<Point> {
    rep.check_vector(xi)?;
    rep.check_point(x)?;
    Ok(-rep.apply_rho(xi, x))
}

/// `exp(-t rho(xi)) x`. Norm preserving.
pub fn group_action(rep: &Representation, xi: &LieVector, t: f64, x: &Point) -> Result<Point> {
    rep.check_vector(xi)?;
    rep.check_point(x)?;
    Ok(match &rep.kind {
        RepKind::Torus { weights, .. } => Point::from_iterator(
            rep.dim,
            weights.iter().zip(x.iter()).map(|(w, z)| {
                let phase = -t * rep.weight_pairing(w, xi);
                z * C64::from_polar(1.0, phase)
            }),
        ),
        RepKind::MatrixLie => expm(&(rep.rho(xi) * C64::new(-t, 0.0))) * x,
    })
}

/// `exp(-i t rho(xi)) x`, the imaginary direction of the complexified group.
///
/// `-i rho(xi)` is Hermitian, so this moves along real exponentials; for a
/// torus coordinate `i` is scaled by `exp(t <w_i, xi>)`. Fails with
/// [`Error::Overflow`] once a coordinate exceeds [`OVERFLOW_THRESHOLD`].
pub fn complexified_action(
    rep: &Representation,
    xi: &LieVector,
    t: f64,
    x: &Point,
) -> Result<Point> {
    rep.check_vector(xi)?;
    rep.check_point(x)?;
    let y = match &rep.kind {
        RepKind::Torus { weights, .. } => Point::from_iterator(
            rep.dim,
            weights.iter().zip(x.iter()).map(|(w, z)| {
                if *z == C64::new(0.0, 0.0) {
                    *z
                } else {
                    z * (t * rep.weight_pairing(w, xi)).exp()
                }
            }),
        ),
        RepKind::MatrixLie => {
            let h = rep.rho(xi) * C64::new(0.0, -t);
            expm(&h) * x
        }
    };
    let worst = y.iter().map(|z| z.norm()).fold(0.0_f64, |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) });
    if worst > OVERFLOW_THRESHOLD {
        return Err(Error::Overflow(worst));
    }
    Ok(y)
}

/// Orthonormal basis (for the representation's inner product) of the
/// stabilizer algebra `{xi : rho(xi) x = 0}`.
///
/// Computed from the singular value decomposition of the real `2d x m` matrix
/// of the map `xi -> rho(xi) x`; singular values at or below
/// `tol * (sigma_max + |x|)` count as zero.
pub fn stabilizer_algebra(rep: &Representation, x: &Point, tol: f64) -> Vec<LieVector> {
    let m = rep.algebra_dim();
    let d = rep.dim();
    let rows = (2 * d).max(m);
    let mut a = DMatrix::<f64>::zeros(rows, m);
    for k in 0..m {
        let col = rep.apply_rho(&LieVector::basis(m, k), x);
        for i in 0..d {
            a[(2 * i, k)] = col[i].re;
            a[(2 * i + 1, k)] = col[i].im;
        }
    }
    // xi = L^{-T} eta makes the Euclidean metric on eta the inner product on xi.
    let l_inv_t = rep
        .inner_chol_l
        .clone()
        .try_inverse()
        .expect("Cholesky factor is invertible")
        .transpose();
    let scaled = &a * &l_inv_t;
    let svd = SVD::new(scaled, false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let threshold = tol * (sigma_max + x.norm());
    let mut kernel: Vec<(usize, LieVector)> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= threshold)
        .map(|(k, _)| {
            let eta = v_t.row(k).transpose();
            (k, LieVector(&l_inv_t * eta))
        })
        .collect();
    kernel.sort_by_key(|(k, _)| *k);
    kernel
        .into_iter()
        .map(|(_, v)| canonical_sign(v))
        .collect()
}

fn canonical_sign(v: LieVector) -> LieVector {
    match v.coords().iter().find(|c| c.abs() > 1e-12) {
        Some(c) if *c < 0.0 => -&v,
        _ => v,
    }
}

/// A maximal pairwise-commuting subset of `vectors`, chosen greedily in input
/// order. Torus representations return the input unchanged.
pub fn maximal_torus_in(vectors: &[LieVector], rep: &Representation) -> Result<Vec<LieVector>> {
    for v in vectors {
        rep.check_vector(v)?;
    }
    if rep.is_torus() {
        return Ok(vectors.to_vec());
    }
    let span = rep.orthonormalize(vectors);
    for (i, a) in vectors.iter().enumerate() {
        for b in &vectors[i + 1..] {
            let c = rep.bracket(a, b);
            let mut r = c.clone();
            for q in &span {
                r = &r - &(q * rep.pair(q, &c));
            }
            let residual = rep.norm(&r);
            if residual > BRACKET_TOL * (rep.norm(a) * rep.norm(b)).max(1.0) {
                return Err(Error::NotSubalgebra(residual));
            }
        }
    }
    let mut torus: Vec<LieVector> = Vec::new();
    for v in vectors {
        let commutes = torus.iter().all(|u| rep.bracket_norm(u, v) <= BRACKET_TOL);
        if !commutes {
            continue;
        }
        let mut candidate = torus.clone();
        candidate.push(v.clone());
        if rep.orthonormalize(&candidate).len() == candidate.len() {
            torus.push(v.clone());
        }
    }
    Ok(torus)
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with a fixed degree-13 Pade
/// approximant.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > THETA13 {
        (norm1 / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = a * C64::new(2f64.powi(-squarings), 0.0);
    let b = |k: usize| C64::new(PADE13[k], 0.0);
    let id = CMatrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9));
    let u = &a * (inner_u + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1));
    let inner_v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8));
    let v = inner_v + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);
    let lu = (&v - &u).lu();
    let mut r = lu.solve(&(&v + &u)).unwrap_or_else(|| CMatrix::from_element(n, n, C64::new(f64::NAN, f64::NAN)));
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// Real `2d` vector `(re z_1, im z_1, ...)` of a complex vector.
pub fn realify(x: &Point) -> DVector<f64> {
    DVector::from_iterator(2 * x.len(), x.iter().flat_map(|z| [z.re, z.im]))
}

/// Inverse of [`realify`].
pub fn complexify(v: &DVector<f64>) -> Point {
    Point::from_iterator(v.len() / 2, (0..v.len() / 2).map(|i| C64::new(v[2 * i], v[2 * i + 1])))
}

/// Point from `(re, im)` pairs.
pub fn point(coords: &[(f64, f64)]) -> Point {
    Point::from_iterator(coords.len(), coords.iter().map(|(re, im)| C64::new(*re, *im)))
}


#[cfg(test)]
pub(crate) use tests::su2_basis;
