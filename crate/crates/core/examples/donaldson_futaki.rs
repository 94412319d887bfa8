// Donaldson-Futaki invariants of product configurations on projective space
// from enumerated monomials, and from user-supplied polynomial data.

use mmflow::kstab::{df_from_oracle, df_invariant, fit_expansion, ExpansionData};
use mmflow::rational::{int, to_text};

pub fn run_example() -> mmflow::Result<()> {
    for (weights, n, jmax) in [(vec![0, 1], 1, 5), (vec![0, 0, 1], 2, 6), (vec![2, -1, 0, 3], 3, 8)] {
        let r = df_from_oracle(&weights, n, 1..=jmax)?;
        println!(
            "c = {weights:?}: a0 = {}, a1 = {}, b0 = {}, b1 = {}, DF = {}",
            to_text(&r.a0),
            to_text(&r.a1),
            to_text(&r.b0),
            to_text(&r.b1),
            to_text(&r.df)
        );
    }
    // A made-up configuration with h(j) = 2j + 1 and w(j) = j^2 - j.
    let h = fit_expansion(&ExpansionData::new((1..=4).map(|j| (j, int(2 * j + 1))).collect(), 1), 1)?;
    let w = fit_expansion(&ExpansionData::new((1..=5).map(|j| (j, int(j * j - j))).collect(), 1), 2)?;
    let df = df_invariant(&h[0], &h[1], &w[0], &w[1])?;
    println!("h = 2j + 1, w = j^2 - j: DF = {}", to_text(&df));
    Ok(())
}

#[allow(dead_code)]
fn main() -> mmflow::Result<()> {
    run_example()
}
