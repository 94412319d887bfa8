// Exact stability classification with certificates, destabilizing
// one-parameter subgroups and the energy along them.

use mmflow::algebra::{make_torus_rep, point};
use mmflow::git::{asymptotic_slope, classify_stability, destabilizer, one_ps_energy};
use mmflow::rational::to_text;

pub fn run_example() -> mmflow::Result<()> {
    let rep = make_torus_rep(2, &[vec![1, 0], vec![-1, 0], vec![0, 1], vec![-1, -1]])?;
    let points = [
        ("unstable", point(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)])),
        ("semistable", point(&[(1.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)])),
        ("polystable", point(&[(1.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)])),
        ("stable", point(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.5, 0.0)])),
    ];
    for (label, x) in &points {
        let report = classify_stability(&rep, x)?;
        assert!(report.verify());
        let combo = report
            .convex_combination
            .as_ref()
            .map(|c| c.iter().map(to_text).collect::<Vec<_>>().join(", "));
        println!(
            "{label:<10} -> {:?}, support {:?}, stabilizer rank {}, combination [{}]",
            report.verdict,
            report.support,
            report.stabilizer_rank,
            combo.unwrap_or_default()
        );
        if let Some(lambda) = destabilizer(&rep, x)? {
            let slope = asymptotic_slope(&rep, x, &lambda)?;
            let energies: Vec<String> = [0.0, 1.0, 4.0]
                .iter()
                .map(|&t| one_ps_energy(&rep, x, &lambda, t).map(|e| format!("{e:.4}")))
                .collect::<mmflow::Result<_>>()?;
            println!("  destabilizer {:?}, slope {}, energies {}", lambda.0, to_text(&slope), energies.join(" "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> mmflow::Result<()> {
    run_example()
}
