// Flowing with the stabilizer torus projected out: the limit's projected
// moment map lies in the limit's stabilizer algebra.

use mmflow::algebra::{make_torus_rep, maximal_torus_in, point, stabilizer_algebra, DEFAULT_STABILIZER_TOL};
use mmflow::flow::{analyze_limit, projected_flow, FlowParams};
use mmflow::scenario::stabilizer_residual;
use nalgebra::DMatrix;

pub fn run_example() -> mmflow::Result<()> {
    // The start's weights all pair to zero with (0, 0, 1), a circle of
    // symmetry. Under a non-diagonal inner product, removing that circle
    // changes the flow.
    let inner = DMatrix::from_row_slice(3, 3, &[2.0, 0.0, 0.5, 0.0, 1.0, 0.0, 0.5, 0.0, 1.0]);
    let rep = make_torus_rep(3, &[vec![1, 0, 0], vec![-1, 1, 0], vec![0, -1, 0], vec![0, 0, 1]])?
        .with_inner_product(inner)?;
    let x0 = point(&[(1.0, 0.0), (0.5, 0.2), (0.7, 0.0), (0.0, 0.0)]);
    let stab = stabilizer_algebra(&rep, &x0, DEFAULT_STABILIZER_TOL);
    let torus = maximal_torus_in(&stab, &rep)?;
    println!("stabilizer torus: {:?}", torus.iter().map(|v| v.to_vec()).collect::<Vec<_>>());
    let traj = projected_flow(&rep, &x0, &torus, &FlowParams::default())?;
    let limit = analyze_limit(&rep, &traj, &x0);
    println!("support {:?} -> {:?}, |mu_T-perp(x_inf)| = {:.2e}", limit.initial_support, limit.support, limit.mu_norm);
    println!("distance from stabilizer algebra: {:.2e}", stabilizer_residual(&rep, &torus, &limit.limit));
    Ok(())
}

#[allow(dead_code)]
fn main() -> mmflow::Result<()> {
    run_example()
}
