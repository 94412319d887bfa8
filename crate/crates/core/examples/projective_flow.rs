// The flow of the projective extension near a zero of the moment map stays
// in a small ball, as does the affine flow, and both agree inside it.

use mmflow::algebra::{make_torus_rep, point};
use mmflow::flow::{homogeneous, integrate_flow, projective_flow, FlowParams};

pub fn run_example() -> mmflow::Result<()> {
    let rep = make_torus_rep(2, &[vec![1, 0], vec![-1, 1], vec![0, -1]])?;
    let x0 = point(&[(0.05, 0.02), (-0.04, 0.03), (0.06, -0.01)]);
    let params = FlowParams { max_time: 100.0, ..FlowParams::default() };
    let affine = integrate_flow(&rep, &x0, &params)?;
    let projective = projective_flow(&rep, &x0, &params)?;
    let max_norm = |samples: &[mmflow::flow::FlowSample]| samples.iter().map(|s| s.point.norm()).fold(0.0, f64::max);
    println!("|x0| = {:.4}", x0.norm());
    println!("affine:     max |x_t| = {:.4}, terminal {:?}", max_norm(&affine.samples), affine.termination);
    println!("projective: max |x_t| = {:.4}, terminal {:?}", max_norm(&projective.samples), projective.termination);
    println!("terminal difference {:.2e}", (&affine.terminal - &projective.terminal).norm());
    let h = homogeneous(&projective.terminal);
    println!("homogeneous terminal: {:?}", h.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> mmflow::Result<()> {
    run_example()
}
