// Extracting the leading adiabatic coefficients from DF samples at large k.

use mmflow::kstab::adiabatic_expansion;

pub fn run_example() -> mmflow::Result<()> {
    let ks = [10.0, 30.0, 100.0, 300.0, 1000.0];
    let models: [(&str, fn(f64) -> f64); 3] = [
        ("2 + 3/k", |k| 2.0 + 3.0 / k),
        ("-1/k + 4/k^2", |k| -1.0 / k + 4.0 / (k * k)),
        ("1 + 1/k + 1/k^3", |k| 1.0 + 1.0 / k + 1.0 / (k * k * k)),
    ];
    for (label, f) in models {
        let samples: Vec<(f64, f64)> = ks.iter().map(|&k| (k, f(k))).collect();
        let fit = adiabatic_expansion(&samples)?;
        let verdict = fit.verdict(1e-9);
        println!(
            "{label:<16} W0 = {:+.9}, W1 = {:+.9}, residual {:.1e}, signs ({:?}, {:?}), semistable {}",
            fit.w0, fit.w1, fit.residual, verdict.w0, verdict.w1, verdict.semistable
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> mmflow::Result<()> {
    run_example()
}
