// The quadratic map `nu(v) = (1/2) omega(rho(xi) v, v)` against the moment map
// of a linear action.

use mmflow::algebra::{make_matrix_rep, point, CMatrix, LieVector, C64};
use mmflow::symplectic::{moment_pairing, nu_map, Chart};

fn su2() -> Vec<CMatrix> {
    let i = C64::new(0.0, 1.0);
    let half = C64::new(0.5, 0.0);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let sx = CMatrix::from_row_slice(2, 2, &[zero, one, one, zero]);
    let sy = CMatrix::from_row_slice(2, 2, &[zero, -i, i, zero]);
    let sz = CMatrix::from_row_slice(2, 2, &[one, zero, zero, -one]);
    [sx, sy, sz].into_iter().map(|s| s * i * half).collect()
}

pub fn run_example() -> mmflow::Result<()> {
    let rep = make_matrix_rep(su2())?;
    let v = point(&[(0.3, -0.2), (0.5, 0.1)]);
    let nu = nu_map(&rep, &v)?;
    println!("nu(v) = {:?}", nu.value.to_vec());
    for a in 0..3 {
        let xi = LieVector::basis(3, a);
        let via_mu = moment_pairing(&rep, &v, &xi, Chart::Affine)?;
        println!("  <nu(v), e{a}> = {:+.12}, <mu(v), e{a}> = {:+.12}", rep.pair(&nu.value, &xi), via_mu);
    }
    let doubled = nu_map(&rep, &(&v * C64::new(2.0, 0.0)))?;
    println!("nu(2v) / nu(v) = {:?}", doubled.value.to_vec().iter().zip(nu.value.to_vec()).map(|(a, b)| a / b).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> mmflow::Result<()> {
    run_example()
}
