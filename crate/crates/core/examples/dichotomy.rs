// Flow limits and the orbit dichotomy: a zero of the moment map in the orbit,
// or only in its closure with a one-parameter subgroup reaching it.

use mmflow::algebra::{make_torus_rep, point};
use mmflow::flow::{analyze_limit, integrate_flow, Dichotomy, FlowParams};
use mmflow::git::classify_stability;

pub fn run_example() -> mmflow::Result<()> {
    let rep = make_torus_rep(2, &[vec![1, 0], vec![-1, 0], vec![1, 1]])?;
    let starts = [
        point(&[(1.0, 0.0), (0.0, 0.0), (0.8, 0.0)]),
        point(&[(1.0, 0.0), (0.5, 0.0), (0.8, 0.0)]),
        point(&[(1.0, 0.0), (0.5, 0.3), (0.0, 0.0)]),
    ];
    for x0 in &starts {
        let verdict = classify_stability(&rep, x0)?.verdict;
        let traj = integrate_flow(&rep, x0, &FlowParams::default())?;
        let limit = analyze_limit(&rep, &traj, x0);
        let outcome = match &limit.dichotomy {
            Dichotomy::InOrbit => "zero of mu in the orbit".to_string(),
            Dichotomy::OrbitClosureOnly { witness } => format!("orbit closure only, witness {:?}", witness.to_vec()),
            Dichotomy::Undetermined => "undetermined".to_string(),
        };
        println!(
            "{verdict:?}: support {:?} -> {:?}, |mu(x_inf)| = {:.2e}, stabilizer {} -> {}, {outcome}",
            limit.initial_support,
            limit.support,
            limit.mu_norm,
            limit.initial_stabilizer_dim,
            limit.stabilizer_dim,
        );
        if let Some(clause) = limit.final_clause {
            println!("  witness limit matches flow limit: {clause}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> mmflow::Result<()> {
    run_example()
}
