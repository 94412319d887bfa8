// The flow for weights (1, -1): decay along an axis and the balanced limit
// from (2, 1), compared with their closed forms.

use mmflow::algebra::{make_torus_rep, point};
use mmflow::flow::{integrate_flow, FlowParams};

pub fn run_example() -> mmflow::Result<()> {
    let rep = make_torus_rep(1, &[vec![1], vec![-1]])?;
    let axis = point(&[(1.0, 0.0), (0.0, 0.0)]);
    for t in [1.0, 10.0, 100.0] {
        let params = FlowParams { max_time: t, grad_tol: 1e-300, ..FlowParams::default() };
        let traj = integrate_flow(&rep, &axis, &params)?;
        println!("t = {t:>5}: |z1|^2 = {:.10}, 1/(1+t) = {:.10}", traj.terminal[0].norm_sqr(), 1.0 / (1.0 + t));
    }
    let traj = integrate_flow(&rep, &point(&[(2.0, 0.0), (1.0, 0.0)]), &FlowParams::default())?;
    println!(
        "from (2, 1): terminal ({:.8}, {:.8}) at t = {:.2} after {} steps ({:?})",
        traj.terminal[0].re, traj.terminal[1].re, traj.terminal_time, traj.accepted_steps, traj.termination
    );
    println!("sqrt 2 = {:.8}", 2f64.sqrt());
    Ok(())
}

#[allow(dead_code)]
fn main() -> mmflow::Result<()> {
    run_example()
}
