//! Splitting Stab(beta) acting on Z_beta into a central torus and a residual
//! form space, and the resulting stratum contribution.

use gitcoh::kirwan::{stabilizer_split, stratum_contribution, CodimMode};
use gitcoh::strata::nearest_point_hull;
use gitcoh::weights::{enumerate_monomials, weight_of, ExponentVector, WeightVector};

fn main() -> anyhow::Result<()> {
    let table = enumerate_monomials(6, 3);
    let z: Vec<ExponentVector> = table.monomials().filter(|e| e.0[0] == 0).cloned().collect();
    let weights: Vec<WeightVector> = z.iter().map(weight_of).collect();
    let beta = nearest_point_hull(&weights).point;
    let split = stabilizer_split(&beta, &z)?;
    println!("{split:?}");
    println!("contribution: {}", split.series(20, CodimMode::Paper)?);

    // a stratum whose critical set is not a full form space falls back to
    // the Levi recursion
    let surfaces = enumerate_monomials(4, 3);
    let z2: Vec<WeightVector> = ["x0^2*x3", "x0*x1^2", "x0*x1*x2", "x0*x2^2"]
        .iter()
        .map(|m| {
            weight_of(
                surfaces
                    .monomials()
                    .find(|e| e.to_string() == *m)
                    .expect("monomial"),
            )
        })
        .collect();
    let beta2 = nearest_point_hull(&z2).point;
    println!(
        "second surface stratum: {}",
        stratum_contribution(&surfaces, &beta2, 12, CodimMode::RootCount)?
    );
    Ok(())
}
