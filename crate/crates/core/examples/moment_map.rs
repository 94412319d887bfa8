// Moment map values in the affine and projective charts, and a numerical
// check that `d<mu, xi>` is the Hamiltonian of the infinitesimal action.

use mmflow::algebra::{make_torus_rep, point, LieVector};
use mmflow::symplectic::{check_defining_property, moment_map, moment_pairing, Chart};

pub fn run_example() -> mmflow::Result<()> {
    let rep = make_torus_rep(2, &[vec![1, 0], vec![-1, 2], vec![0, -1]])?;
    let x = point(&[(0.5, 0.2), (-0.3, 0.7), (1.0, 0.0)]);
    for chart in [Chart::Affine, Chart::Projective] {
        let mu = moment_map(&rep, &x, chart)?;
        println!("{chart:?} mu(x) = {:?}", mu.value.to_vec());
        let xi = LieVector::new(vec![0.3, -1.1]);
        let residual = check_defining_property(&rep, &x, &xi, 1e-5, chart)?;
        println!("  <mu, xi> = {:.6}, defining-property residual {residual:.2e}", moment_pairing(&rep, &x, &xi, chart)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> mmflow::Result<()> {
    run_example()
}
