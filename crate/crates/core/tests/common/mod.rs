#![allow(dead_code)]

use mmflow::algebra::{make_matrix_rep, make_torus_rep, CMatrix, LieVector, Point, Representation, C64};
use nalgebra::DMatrix;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

pub struct Draw(SplitMix64);

impl Draw {
    pub fn new(seed: u64) -> Self {
        Draw(SplitMix64::seed_from_u64(seed))
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as i64
    }

    pub fn point(&mut self, d: usize, scale: f64) -> Point {
        Point::from_fn(d, |_, _| C64::new(self.uniform(-scale, scale), self.uniform(-scale, scale)))
    }

    pub fn lie_vector(&mut self, m: usize) -> LieVector {
        LieVector::new((0..m).map(|_| self.uniform(-1.0, 1.0)).collect())
    }

    pub fn weights(&mut self, d: usize, r: usize, wmax: i64) -> Vec<Vec<i64>> {
        (0..d).map(|_| (0..r).map(|_| self.int(-wmax, wmax)).collect()).collect()
    }

    pub fn torus(&mut self, d_max: usize, r_max: usize, wmax: i64) -> Representation {
        let d = self.int(1, d_max as i64) as usize;
        let r = self.int(1, r_max as i64) as usize;
        make_torus_rep(r, &self.weights(d, r, wmax)).unwrap()
    }

    /// A random symmetric positive-definite matrix with eigenvalues in [0.5, 3].
    pub fn spd(&mut self, m: usize) -> DMatrix<f64> {
        let a = DMatrix::from_fn(m, m, |_, _| self.uniform(-1.0, 1.0));
        let q = a.qr().q();
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(m, |_, _| self.uniform(0.5, 3.0)));
        let s = &q * diag * q.transpose();
        (&s + s.transpose()) * 0.5
    }
}

/// `X_a = (i/2) sigma_a`, a basis of su(2) on C^2.
pub fn su2() -> Vec<CMatrix> {
    let i = C64::new(0.0, 1.0);
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    let h = C64::new(0.5, 0.0);
    vec![
        CMatrix::from_row_slice(2, 2, &[z, o, o, z]) * i * h,
        CMatrix::from_row_slice(2, 2, &[z, -i, i, z]) * i * h,
        CMatrix::from_row_slice(2, 2, &[o, z, z, -o]) * i * h,
    ]
}

pub fn su2_rep() -> Representation {
    make_matrix_rep(su2()).unwrap()
}

/// Block sum of su(2) on C^2 with the circle acting by weight `k` on C.
pub fn u2_plus_line(k: f64) -> Representation {
    let i = C64::new(0.0, 1.0);
    let mut basis: Vec<CMatrix> = su2()
        .into_iter()
        .map(|m| {
            let mut big = CMatrix::zeros(3, 3);
            big.view_mut((0, 0), (2, 2)).copy_from(&m);
            big
        })
        .collect();
    let mut circle = CMatrix::zeros(3, 3);
    circle[(0, 0)] = i;
    circle[(1, 1)] = i;
    circle[(2, 2)] = i * k;
    basis.push(circle);
    make_matrix_rep(basis).unwrap()
}
