// A non-abelian representation given by matrices: stabilizers, a maximal
// torus inside them, and the real and complexified group actions.

use mmflow::algebra::{
    complexified_action, group_action, make_matrix_rep, maximal_torus_in, point, stabilizer_algebra, CMatrix,
    LieVector, C64, DEFAULT_STABILIZER_TOL,
};
use mmflow::flow::{analyze_limit, integrate_flow, FlowParams};

pub fn run_example() -> mmflow::Result<()> {
    // u(2) acting on C^2: su(2) plus the scalar circle.
    let i = C64::new(0.0, 1.0);
    let h = C64::new(0.5, 0.0);
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    let basis: Vec<CMatrix> = vec![
        CMatrix::from_row_slice(2, 2, &[z, o, o, z]) * i * h,
        CMatrix::from_row_slice(2, 2, &[z, -i, i, z]) * i * h,
        CMatrix::from_row_slice(2, 2, &[o, z, z, -o]) * i * h,
        CMatrix::identity(2, 2) * i,
    ];
    let rep = make_matrix_rep(basis)?;
    let x = point(&[(1.0, 0.0), (0.0, 0.0)]);
    let stab = stabilizer_algebra(&rep, &x, DEFAULT_STABILIZER_TOL);
    println!("stabilizer of e1 has dimension {}", stab.len());
    let torus = maximal_torus_in(&stab, &rep)?;
    println!("maximal torus in it has dimension {}", torus.len());
    let xi = LieVector::new(vec![0.0, 0.0, 1.0, 0.0]);
    let y = group_action(&rep, &xi, 1.0, &x)?;
    println!("|exp(-xi) x| = {:.12} (unitary)", y.norm());
    let w = complexified_action(&rep, &xi, 1.0, &x)?;
    println!("|exp(-i xi) x| = {:.6}", w.norm());
    let traj = integrate_flow(&rep, &point(&[(0.6, 0.1), (0.2, -0.3)]), &FlowParams { max_time: 100.0, ..FlowParams::default() })?;
    let limit = analyze_limit(&rep, &traj, &point(&[(0.6, 0.1), (0.2, -0.3)]));
    println!("flow terminal |x| = {:.4}, dichotomy {:?}", traj.terminal.norm(), limit.dichotomy);
    Ok(())
}

#[allow(dead_code)]
fn main() -> mmflow::Result<()> {
    run_example()
}
