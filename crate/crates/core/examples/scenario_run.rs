// Running a scenario document end to end: report.json plus trajectory CSV.

use mmflow::scenario::{parse_scenario, run_scenario_in};

const SCENARIO: &str = r#"{
  "representation": {"type": "torus", "weights": [[1], [-1]]},
  "space": "affine",
  "start": [[1, 0], [0, 0]],
  "flow": {"max_time": 10000, "grad_tol": 1e-7},
  "analyses": ["classify", "flow", "dichotomy", "kempf_ness_ray"],
  "seed": 42,
  "output_dir": "./out"
}"#;

pub fn run_example() -> mmflow::Result<()> {
    let scenario = parse_scenario(SCENARIO)?;
    let dir = std::env::temp_dir().join(format!("mmflow-scenario-{}", std::process::id()));
    let report = run_scenario_in(&scenario, &dir)?;
    let results = &report.results;
    println!("verdict: {:?}", results.classify.as_ref().map(|c| c.verdict));
    if let Some(flow) = &results.flow {
        println!("flow: {} samples, terminal |x| = {:.4}", flow.samples, flow.terminal.norm());
    }
    println!("dichotomy: {:?}", results.dichotomy.as_ref().map(|d| &d.dichotomy));
    let csv = std::fs::read_to_string(dir.join("trajectory.csv"))?;
    println!("trajectory.csv header: {}", csv.lines().next().unwrap_or_default());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> mmflow::Result<()> {
    run_example()
}
