// Exact classification against flow limits on seeded random torus instances.

use mmflow::flow::FlowParams;
use mmflow::scenario::{random_instance, run_suite, InstanceBounds};

pub fn run_example() -> mmflow::Result<()> {
    let bounds = InstanceBounds::default();
    let (rep, x) = random_instance(3, &bounds);
    println!("seed 3: {rep}, start {:?}", x.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>());
    let report = run_suite(20, &bounds, &FlowParams::default());
    print!("{}", report.table());
    Ok(())
}

#[allow(dead_code)]
fn main() -> mmflow::Result<()> {
    run_example()
}
